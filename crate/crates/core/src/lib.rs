//! Quantum harmonic analysis on the finite phase space `Z_N x Z_N`.
//!
//! Functions on phase space and operators on `l^2(Z_N)` are tied together by
//! Werner's convolutions, the Fourier-Wigner transform and its inverse, the
//! integrated Schrödinger representation. The crate is `no_std` with `alloc`;
//! file formats, random ensembles and the command line live in the `qha` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod dft;
pub mod continuum;
pub mod convolution;
pub mod error;
pub mod linalg;
pub mod localization;
pub mod operator;
pub mod phase_space;
pub mod tauberian;
pub mod transforms;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use operator::{
    alpha_shift, modulate_signal, parity_conjugate, parity_signal, rank_one, schatten_norm, schatten_report,
    tf_shift, tf_shift_matrix, trace, trace_product, translate_signal, OperatorMatrix, SchattenNorm, SchattenReport,
    Signal,
};
pub use phase_space::{
    half_phase, phase_integral, phase_translate, symplectic_form, symplectic_fourier, GroupParams, PhaseFunction,
    PhasePoint,
};
pub use transforms::{
    ambiguity, cross_wigner, fourier_wigner, rho, rho_superposition, stft, twisted_convolution, weyl_symbol,
    weyl_transform,
};
pub use convolution::{
    apply_conv_map, build_conv_map, build_conv_map_with_cap, conv_fun_fun, conv_fun_op, conv_op_op, ConvMapKind,
    ConvMapMatrix, DEFAULT_CONV_MAP_CAP,
};
pub use localization::{berezin_transform, localization_operator, locop_twisted_symbol, TwistedSymbol};
pub use tauberian::{
    arveson_spectrum, localization_density_check, regularity_report, translate_span_rank, zero_set, DensityReport,
    RegularityReport,
};
