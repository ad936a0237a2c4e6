//! Plain-text file formats.
//!
//! Every format starts with a one-line header naming the format, its version
//! and the size, followed by one comma-separated record per line. Floats are
//! written with 17 significant digits so that save followed by load
//! reproduces every value bit for bit.
//!
//! | header                                          | records                 |
//! |-------------------------------------------------|-------------------------|
//! | `QHA-FUN v1 N=<N>`                              | `x,omega,re,im`, x outer |
//! | `QHA-FUN v1 N=<n> GRID=continuum n=<n> L=<L>`   | `x,omega,re,im`, x outer |
//! | `QHA-MAT v1 N=<N>`                              | `row,col,re,im`, row outer |
//! | `QHA-SIG v1 N=<N>`                              | `t,re,im`               |
//!
//! Blank lines are ignored. Heatmaps are CSV with header `x,omega,value`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qha_core::continuum::{PhasePlane, SampledLine};
use qha_core::{GroupParams, OperatorMatrix, PhaseFunction, Signal};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Model(#[from] qha_core::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Non-blank lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

#[derive(Debug)]
struct Header {
    n: usize,
    grid: Option<SampledLine>,
}

fn parse_header(line_no: usize, line: &str, magic: &str) -> Result<Header, FormatError> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some(magic) {
        return Err(parse_err(line_no, format!("expected header starting with `{magic}`")));
    }
    if tokens.next() != Some("v1") {
        return Err(parse_err(line_no, "unsupported format version, expected `v1`"));
    }
    let mut n = None;
    let mut continuum = false;
    let mut samples = None;
    let mut half_width = None;
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("malformed header token `{token}`")))?;
        let bad = || parse_err(line_no, format!("invalid value in header token `{token}`"));
        match key {
            "N" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
            "GRID" if value == "continuum" => continuum = true,
            "n" => samples = Some(value.parse::<usize>().map_err(|_| bad())?),
            "L" => half_width = Some(value.parse::<f64>().map_err(|_| bad())?),
            _ => return Err(parse_err(line_no, format!("unknown header token `{token}`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(line_no, "header is missing `N=<N>`"))?;
    let grid = if continuum {
        let samples = samples.ok_or_else(|| parse_err(line_no, "continuum header is missing `n=<n>`"))?;
        let half_width = half_width.ok_or_else(|| parse_err(line_no, "continuum header is missing `L=<L>`"))?;
        if samples != n {
            return Err(parse_err(line_no, "continuum header has N different from n"));
        }
        Some(SampledLine::new(samples, half_width).map_err(|e| parse_err(line_no, e.to_string()))?)
    } else {
        if samples.is_some() || half_width.is_some() {
            return Err(parse_err(line_no, "`n=` and `L=` require `GRID=continuum`"));
        }
        None
    };
    Ok(Header { n, grid })
}

fn split_fields(line_no: usize, line: &str, count: usize) -> Result<Vec<&str>, FormatError> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.len() != count {
        return Err(parse_err(
            line_no,
            format!("expected {count} comma-separated fields, found {}", fields.len()),
        ));
    }
    Ok(fields)
}

fn parse_f64(line_no: usize, field: &str) -> Result<f64, FormatError> {
    let v: f64 = field
        .parse()
        .map_err(|_| parse_err(line_no, format!("`{field}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(line_no, format!("`{field}` is not finite")));
    }
    Ok(v)
}

fn parse_index(line_no: usize, field: &str, expected: usize, what: &str) -> Result<(), FormatError> {
    let v: usize = field
        .parse()
        .map_err(|_| parse_err(line_no, format!("`{field}` is not a valid {what} index")))?;
    if v != expected {
        return Err(parse_err(line_no, format!("expected {what} = {expected}, found {v}")));
    }
    Ok(())
}

/// Parses the body after the header: `count` records of `index_fields` leading
/// fields (checked by `check`) followed by `re,im`.
fn parse_body<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    header_line: usize,
    count: usize,
    index_fields: usize,
    mut check: impl FnMut(usize, usize, &[&str]) -> Result<(), FormatError>,
) -> Result<Vec<Complex64>, FormatError> {
    let mut values = Vec::with_capacity(count);
    let mut last = header_line;
    for i in 0..count {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| parse_err(last + 1, format!("expected {count} records, found {i}")))?;
        last = line_no;
        let fields = split_fields(line_no, line, index_fields + 2)?;
        check(line_no, i, &fields[..index_fields])?;
        let re = parse_f64(line_no, fields[index_fields])?;
        let im = parse_f64(line_no, fields[index_fields + 1])?;
        values.push(Complex64::new(re, im));
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(parse_err(line_no, format!("unexpected record after {count} records")));
    }
    Ok(values)
}

fn first_line<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<(usize, &'a str), FormatError> {
    lines.next().ok_or_else(|| parse_err(1, "empty input, expected a header line"))
}

fn group(line_no: usize, n: usize) -> Result<GroupParams, FormatError> {
    GroupParams::new(n).map_err(|e| parse_err(line_no, e.to_string()))
}

pub fn write_phase_function(f: &PhaseFunction) -> String {
    let params = f.params();
    let mut out = format!("QHA-FUN v1 N={}\n", params.n());
    for z in params.points() {
        let v = f[z];
        let _ = writeln!(out, "{},{},{},{}", z.x(), z.omega(), fmt_float(v.re), fmt_float(v.im));
    }
    out
}

pub fn parse_phase_function(text: &str) -> Result<PhaseFunction, FormatError> {
    let mut lines = records(text);
    let (header_line, header) = first_line(&mut lines)?;
    let header = parse_header(header_line, header, "QHA-FUN")?;
    if header.grid.is_some() {
        return Err(parse_err(header_line, "continuum grid given where a finite phase function is expected"));
    }
    let params = group(header_line, header.n)?;
    let n = params.n();
    let values = parse_body(&mut lines, header_line, n * n, 2, |line_no, i, idx| {
        parse_index(line_no, idx[0], i / n, "x")?;
        parse_index(line_no, idx[1], i % n, "omega")
    })?;
    Ok(PhaseFunction::new(params, values)?)
}

pub fn write_phase_plane(f: &PhasePlane) -> String {
    let line = f.line();
    let mut out = format!(
        "QHA-FUN v1 N={n} GRID=continuum n={n} L={l}\n",
        n = line.n(),
        l = line.half_width()
    );
    for (x, w, v) in f.iter() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_float(x),
            fmt_float(w),
            fmt_float(v.re),
            fmt_float(v.im)
        );
    }
    out
}

pub fn parse_phase_plane(text: &str) -> Result<PhasePlane, FormatError> {
    let mut lines = records(text);
    let (header_line, header) = first_line(&mut lines)?;
    let header = parse_header(header_line, header, "QHA-FUN")?;
    let grid = header
        .grid
        .ok_or_else(|| parse_err(header_line, "expected `GRID=continuum n=<n> L=<L>` in the header"))?;
    let n = grid.n();
    let tol = 1e-9 * grid.spacing().min(grid.frequency_spacing());
    let values = parse_body(&mut lines, header_line, n * n, 2, |line_no, i, idx| {
        let x = parse_f64(line_no, idx[0])?;
        let w = parse_f64(line_no, idx[1])?;
        if (x - grid.point(i / n)).abs() > tol || (w - grid.frequency(i % n)).abs() > tol {
            return Err(parse_err(line_no, format!("coordinates ({x}, {w}) are off the declared grid")));
        }
        Ok(())
    })?;
    Ok(PhasePlane::new(grid, values)?)
}

pub fn write_operator(a: &OperatorMatrix) -> String {
    let n = a.n();
    let mut out = format!("QHA-MAT v1 N={n}\n");
    for r in 0..n {
        for c in 0..n {
            let v = a.get(r, c);
            let _ = writeln!(out, "{r},{c},{},{}", fmt_float(v.re), fmt_float(v.im));
        }
    }
    out
}

pub fn parse_operator(text: &str) -> Result<OperatorMatrix, FormatError> {
    let mut lines = records(text);
    let (header_line, header) = first_line(&mut lines)?;
    let header = parse_header(header_line, header, "QHA-MAT")?;
    let params = group(header_line, header.n)?;
    let n = params.n();
    let values = parse_body(&mut lines, header_line, n * n, 2, |line_no, i, idx| {
        parse_index(line_no, idx[0], i / n, "row")?;
        parse_index(line_no, idx[1], i % n, "col")
    })?;
    Ok(OperatorMatrix::new(params, values)?)
}

pub fn write_signal(psi: &Signal) -> String {
    let mut out = format!("QHA-SIG v1 N={}\n", psi.params().n());
    for (t, v) in psi.values().iter().enumerate() {
        let _ = writeln!(out, "{t},{},{}", fmt_float(v.re), fmt_float(v.im));
    }
    out
}

pub fn parse_signal(text: &str) -> Result<Signal, FormatError> {
    let mut lines = records(text);
    let (header_line, header) = first_line(&mut lines)?;
    let header = parse_header(header_line, header, "QHA-SIG")?;
    let params = group(header_line, header.n)?;
    let values = parse_body(&mut lines, header_line, params.n(), 1, |line_no, i, idx| {
        parse_index(line_no, idx[0], i, "t")
    })?;
    Ok(Signal::new(params, values)?)
}

/// Heatmap CSV with header `x,omega,value`, one row per grid point.
pub fn heatmap_csv(points: impl IntoIterator<Item = (f64, f64, f64)>) -> String {
    let mut out = String::from("x,omega,value\n");
    for (x, w, v) in points {
        let _ = writeln!(out, "{x},{w},{}", fmt_float(v));
    }
    out
}

/// `|f|` over the finite phase space, with integer coordinates.
pub fn finite_heatmap(f: &PhaseFunction) -> String {
    heatmap_csv(f.params().points().map(|z| (z.x() as f64, z.omega() as f64, f[z].norm())))
}

/// `|F|` over a sampled phase plane.
pub fn plane_heatmap(f: &PhasePlane) -> String {
    heatmap_csv(f.iter().map(|(x, w, v)| (x, w, v.norm())))
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    let io = |source| FormatError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, text).map_err(io)
}

pub fn load_phase_function(path: &Path) -> Result<PhaseFunction, FormatError> {
    parse_phase_function(&read_text(path)?)
}

pub fn load_operator(path: &Path) -> Result<OperatorMatrix, FormatError> {
    parse_operator(&read_text(path)?)
}

pub fn load_signal(path: &Path) -> Result<Signal, FormatError> {
    parse_signal(&read_text(path)?)
}

pub fn load_phase_plane(path: &Path) -> Result<PhasePlane, FormatError> {
    parse_phase_plane(&read_text(path)?)
}
