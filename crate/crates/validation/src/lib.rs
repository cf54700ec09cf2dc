//! Zero tables for tests: generated from Riemann–Siegel Z by a Gram-point
//! search with Rosser-block counting, or read from `ZVAR_ZEROS`.

use std::fs;
use std::path::PathBuf;

use num_complex::Complex64;
use zvar_core::zero_data::{load_zero_file, ZeroTable};
use zvar_core::zeta_eval::{rs_theta, rs_z, zeta_em};
use zvar_core::{Error, Result};

/// Below this height Z is evaluated from Euler–Maclaurin ζ instead of Riemann–Siegel.
pub const EM_HEIGHT: f64 = 200.0;

/// Number of zeros in the shared test fixture; enough to pass height 10⁵.
pub const FIXTURE_COUNT: usize = 140_000;

/// Finest subdivision of a Gram interval tried before giving up on a block.
const MAX_SUBDIVISIONS: usize = 512;

/// Hardy's Z(t) for t ≥ 10.
pub fn z_function(t: f64) -> Result<f64> {
    if t < EM_HEIGHT {
        let theta = rs_theta(t)?;
        Ok((Complex64::from_polar(1.0, theta) * zeta_em(Complex64::new(0.5, t))).re)
    } else {
        rs_z(t, 4)
    }
}

/// Gram point g_n with θ(g_n) = nπ, by Newton iteration from `guess`.
pub fn gram_point(n: i64, guess: f64) -> Result<f64> {
    let target = n as f64 * std::f64::consts::PI;
    let mut t = guess.max(10.0);
    for _ in 0..100 {
        let step = (rs_theta(t)? - target) / (0.5 * (t / std::f64::consts::TAU).ln());
        t = (t - step).max(10.0);
        if step.abs() <= 1e-14 * t {
            return Ok(t);
        }
    }
    Err(Error::Domain(format!("gram point {n} did not converge")))
}

/// Brent's method on a bracketing interval [a, b] with f(a)·f(b) < 0.
fn brent(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<f64> {
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        if fb == 0.0 {
            return Ok(b);
        }
        let tol = 4.0 * f64::EPSILON * b.abs();
        if (b - a).abs() <= tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let outside = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected { (s - b).abs() >= (b - c).abs() / 2.0 } else { (s - b).abs() >= (c - d).abs() / 2.0 };
        let tiny = if bisected { (b - c).abs() < tol } else { (c - d).abs() < tol };
        if outside || slow || tiny {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s)?;
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Ok(b)
}

/// Sign changes of Z on `points`, as bracketing intervals with their values.
fn brackets(points: &[f64], values: &[f64]) -> Vec<(f64, f64, f64, f64)> {
    (1..points.len())
        .filter(|&i| values[i - 1] * values[i] < 0.0)
        .map(|i| (points[i - 1], points[i], values[i - 1], values[i]))
        .collect()
}

/// Zeros of Z in (a, b], expecting exactly `expected` of them.
///
/// The interval list `edges` (with Z values) is subdivided until the sign
/// pattern shows all expected zeros.
fn zeros_in_block(edges: &[f64], edge_values: &[f64], expected: usize) -> Result<Vec<f64>> {
    let mut subdivisions = 1;
    loop {
        let mut points = Vec::with_capacity((edges.len() - 1) * subdivisions + 1);
        let mut values = Vec::with_capacity(points.capacity());
        for i in 0..edges.len() - 1 {
            let (a, b) = (edges[i], edges[i + 1]);
            points.push(a);
            values.push(edge_values[i]);
            for k in 1..subdivisions {
                let t = a + (b - a) * k as f64 / subdivisions as f64;
                points.push(t);
                values.push(z_function(t)?);
            }
        }
        points.push(*edges.last().expect("nonempty block"));
        values.push(*edge_values.last().expect("nonempty block"));
        let found = brackets(&points, &values);
        if found.len() == expected {
            return found.into_iter().map(|(a, b, fa, fb)| brent(z_function, a, b, fa, fb)).collect();
        }
        if found.len() > expected || subdivisions >= MAX_SUBDIVISIONS {
            return Err(Error::CountMismatch { expected, found: found.len() });
        }
        subdivisions *= 2;
    }
}

/// The first `count` zeros of ζ on the critical line.
///
/// Gram points g_n are "good" when (−1)ⁿZ(g_n) > 0. Between consecutive good
/// Gram points g_j < g_k there are exactly k − j zeros (Rosser's rule, valid
/// far beyond the heights used here), so every block is searched until that
/// many sign changes are found.
pub fn generate_zeros(count: usize) -> Result<Vec<f64>> {
    let mut zeros = Vec::with_capacity(count);
    if count == 0 {
        return Ok(zeros);
    }
    // The first zero lies between t = 10 and g_0.
    let mut g_j = gram_point(0, 17.8)?;
    let mut z_j = z_function(g_j)?;
    zeros.extend(zeros_in_block(&[10.0, g_j], &[z_function(10.0)?, z_j], 1)?);
    let mut j: i64 = 0;
    while zeros.len() < count {
        let mut edges = vec![g_j];
        let mut values = vec![z_j];
        let mut k = j;
        let mut g = g_j;
        loop {
            k += 1;
            let gap = std::f64::consts::TAU / (g / std::f64::consts::TAU).ln();
            g = gram_point(k, g + gap)?;
            let z = z_function(g)?;
            edges.push(g);
            values.push(z);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            if sign * z > 0.0 {
                break;
            }
        }
        zeros.extend(zeros_in_block(&edges, &values, (k - j) as usize)?);
        j = k;
        g_j = g;
        z_j = *values.last().expect("nonempty block");
    }
    zeros.truncate(count);
    Ok(zeros)
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target/zvar-fixtures")
}

/// Path of the cached text file holding `count` generated zeros.
pub fn fixture_path(count: usize) -> PathBuf {
    fixture_dir().join(format!("zeros_{count}.txt"))
}

/// Writes the ordinates one per line in shortest round-trip form.
pub fn format_zeros(zeros: &[f64]) -> String {
    let mut out = String::with_capacity(zeros.len() * 20);
    for z in zeros {
        out.push_str(&format!("{z}\n"));
    }
    out
}

/// The shared zero table: `ZVAR_ZEROS` if set, otherwise the generated
/// fixture of [`FIXTURE_COUNT`] zeros, created on first use.
pub fn fixture_table() -> Result<ZeroTable> {
    if let Some(path) = std::env::var_os("ZVAR_ZEROS") {
        return load_zero_file(PathBuf::from(path), None);
    }
    let path = fixture_path(FIXTURE_COUNT);
    if !path.exists() {
        let zeros = generate_zeros(FIXTURE_COUNT)?;
        fs::create_dir_all(fixture_dir()).map_err(|source| Error::Io { path: fixture_dir(), source })?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, format_zeros(&zeros)).map_err(|source| Error::Io { path: tmp.clone(), source })?;
        fs::rename(&tmp, &path).map_err(|source| Error::Io { path: path.clone(), source })?;
    }
    load_zero_file(&path, Some(FIXTURE_COUNT))
}

/// The first `count` ordinates of [`fixture_table`] as their own table.
pub fn fixture_prefix(count: usize) -> Result<ZeroTable> {
    let full = fixture_table()?;
    if full.count() < count {
        return Err(Error::CountMismatch { expected: count, found: full.count() });
    }
    ZeroTable::new(full.ordinates()[..count].to_vec(), format!("{} (first {count})", full.source()))
}
