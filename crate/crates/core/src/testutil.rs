use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::operator::{OperatorMatrix, Signal};
use crate::phase_space::{GroupParams, PhaseFunction};

pub(crate) type TestRng = ChaCha8Rng;

pub(crate) fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn gaussian(rng: &mut TestRng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub(crate) fn random_signal(g: GroupParams, rng: &mut TestRng) -> Signal {
    Signal::new(g, (0..g.n()).map(|_| gaussian(rng)).collect()).unwrap()
}

pub(crate) fn random_operator(g: GroupParams, rng: &mut TestRng) -> OperatorMatrix {
    OperatorMatrix::new(g, (0..g.dim()).map(|_| gaussian(rng)).collect()).unwrap()
}

pub(crate) fn random_function(g: GroupParams, rng: &mut TestRng) -> PhaseFunction {
    PhaseFunction::new(g, (0..g.dim()).map(|_| gaussian(rng)).collect()).unwrap()
}
