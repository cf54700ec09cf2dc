//! Von Mangoldt tables and the prime-side quantities of the variance
//! formulas.

use std::f64::consts::LN_2;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::special::{cin, cosine_integral, gauss_legendre8, integrate, QuadratureSpec, EULER_GAMMA, STIELTJES_1};
use crate::sum::NeumaierSum;
use crate::zeta_eval::zeta_em;
use crate::Estimate;

/// Largest table [`sieve_mangoldt`] will attempt.
pub const MAX_SIEVE: u64 = 1_000_000_000;

/// Constant in the error budget C·log²x/√x of [`log_deriv_zeta_one_line`].
pub const PERRON_ERROR_CONSTANT: f64 = 10.0;

/// Cutoff below which the keating bracket uses the Laurent expansion of ζ′/ζ at 1.
pub const KEATING_SMALL_T: f64 = 1e-3;

/// Default truncation point for the integral in [`c_of`].
pub const C_OF_MAX_Y: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    pub n: u64,
    pub p: u64,
    pub m: u32,
}

/// Λ(n) for 1 ≤ n ≤ n_max, with the prime powers listed separately.
#[derive(Debug, Clone)]
pub struct MangoldtTable {
    n_max: u64,
    lambda: Vec<f64>,
    prime_powers: Vec<PrimePower>,
    /// Σ_{k≤i} Λ(n_k)² along `prime_powers`.
    lambda_sq_prefix: Vec<f64>,
}

impl MangoldtTable {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Λ(n); zero outside 1..=n_max.
    pub fn lambda(&self, n: u64) -> f64 {
        self.lambda.get(n as usize).copied().unwrap_or(0.0)
    }

    pub fn prime_powers(&self) -> &[PrimePower] {
        &self.prime_powers
    }

    /// Prime powers n ≤ x.
    pub fn prime_powers_up_to(&self, x: f64) -> &[PrimePower] {
        let k = self.prime_powers.partition_point(|pp| (pp.n as f64) <= x);
        &self.prime_powers[..k]
    }

    pub fn require(&self, x: f64) -> Result<()> {
        let required = x.floor().max(0.0) as u64;
        if required > self.n_max {
            return Err(Error::TableTooSmall { required, have: self.n_max });
        }
        Ok(())
    }

    /// Σ_{n≤y} Λ(n)².
    pub fn lambda_sq_sum(&self, y: f64) -> f64 {
        let k = self.prime_powers.partition_point(|pp| (pp.n as f64) <= y);
        if k == 0 {
            0.0
        } else {
            self.lambda_sq_prefix[k - 1]
        }
    }
}

fn alloc<T: Clone>(len: usize, fill: T) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len).map_err(|_| Error::Resource(len as u64))?;
    v.resize(len, fill);
    Ok(v)
}

/// Sieve of Eratosthenes producing Λ(n) for n ≤ n_max.
pub fn sieve_mangoldt(n_max: u64) -> Result<MangoldtTable> {
    if !(2..=MAX_SIEVE).contains(&n_max) {
        return domain(format!("sieve_mangoldt: n_max = {n_max} must lie in [2, {MAX_SIEVE}]"));
    }
    let len = n_max as usize + 1;
    let mut composite = alloc(len, false)?;
    let mut lambda = alloc(len, 0.0f64)?;
    let mut prime_powers = Vec::new();
    let mut p = 2usize;
    while p < len {
        if !composite[p] {
            let mut q = p * p;
            while q < len {
                composite[q] = true;
                q += p;
            }
            let lp = (p as f64).ln();
            let mut pm = p as u64;
            let mut m = 1;
            loop {
                lambda[pm as usize] = lp;
                prime_powers.push(PrimePower { n: pm, p: p as u64, m });
                match pm.checked_mul(p as u64) {
                    Some(next) if next <= n_max => {
                        pm = next;
                        m += 1;
                    }
                    _ => break,
                }
            }
        }
        p += 1;
    }
    prime_powers.sort_unstable_by_key(|pp| pp.n);
    let mut acc = NeumaierSum::new();
    let lambda_sq_prefix = prime_powers
        .iter()
        .map(|pp| {
            let l = lambda[pp.n as usize];
            acc.add(l * l);
            acc.value()
        })
        .collect();
    Ok(MangoldtTable { n_max, lambda, prime_powers, lambda_sq_prefix })
}

/// Λ²(n)/(n log²n) = 1/(m² p^m) for n = p^m.
#[inline]
fn weight_sq(pp: &PrimePower) -> f64 {
    let m = f64::from(pp.m);
    1.0 / (m * m * pp.n as f64)
}

/// 1 − cos x without cancellation.
#[inline]
fn one_minus_cos(x: f64) -> f64 {
    let s = (0.5 * x).sin();
    2.0 * s * s
}

/// Σ_{n≤T} Λ²(n)/(n log²n)·(1 − cos(Δ log n)).
pub fn prime_variance_sum(delta: f64, t: f64, table: &MangoldtTable) -> Result<f64> {
    if !(delta >= 0.0) {
        return domain(format!("prime_variance_sum: delta = {delta} must be >= 0"));
    }
    table.require(t)?;
    let mut s = NeumaierSum::new();
    for pp in table.prime_powers_up_to(t) {
        s.add(weight_sq(pp) * one_minus_cos(delta * (pp.n as f64).ln()));
    }
    Ok(s.value())
}

/// Σ_{n≤T} Λ²(n)/(n log²n)·cos(Δ log n), the piece removed from [`mertens_sum`].
pub fn prime_cosine_sum(delta: f64, t: f64, table: &MangoldtTable) -> Result<f64> {
    table.require(t)?;
    let mut s = NeumaierSum::new();
    for pp in table.prime_powers_up_to(t) {
        s.add(weight_sq(pp) * (delta * (pp.n as f64).ln()).cos());
    }
    Ok(s.value())
}

/// Σ_{n≤T} Λ²(n)/(n log²n).
pub fn mertens_sum(t: f64, table: &MangoldtTable) -> Result<f64> {
    table.require(t)?;
    Ok(table.prime_powers_up_to(t).iter().map(weight_sq).collect::<NeumaierSum>().value())
}

fn mobius(mut k: u32) -> i32 {
    let mut mu = 1;
    let mut d = 2;
    while d * d <= k {
        if k % d == 0 {
            k /= d;
            if k % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if k > 1 {
        mu = -mu;
    }
    mu
}

/// log ζ(w) for Re w ≥ 2.
fn log_zeta(w: Complex64) -> Complex64 {
    if w.re >= 20.0 {
        // ζ(w) − 1 by direct summation; n^{−Re w} < 1e−20 ends it.
        let mut u = Complex64::new(0.0, 0.0);
        let mut n = 2u32;
        loop {
            let ln = f64::from(n).ln();
            if -w.re * ln < -46.0 {
                break;
            }
            u += (-w * ln).exp();
            n += 1;
        }
        if u.norm() < 1e-4 {
            u - u * u / 2.0 + u * u * u / 3.0
        } else {
            (1.0 + u).ln()
        }
    } else {
        zeta_em(w).ln()
    }
}

/// Prime zeta function P(s) = Σ_p p^{−s} for Re s ≥ 2, to absolute accuracy `tol`.
pub fn prime_zeta(s: Complex64, tol: f64) -> Complex64 {
    let sigma = s.re;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut k = 1u32;
    loop {
        // |log ζ(w)| ≤ 6·2^{−Re w} bounds the remaining terms geometrically.
        let kf = f64::from(k);
        if 12.0 * (-kf * sigma * LN_2).exp() / kf < 0.1 * tol {
            break;
        }
        let mu = mobius(k);
        if mu != 0 {
            acc += log_zeta(s * kf) * (f64::from(mu) / kf);
        }
        k += 1;
    }
    acc
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return domain(format!("tolerance {tol} must be > 0"));
    }
    Ok(())
}

/// Number of m-terms needed so that Σ_{m>M} 12·2^{−m}/m < tol/2.
fn m_terms(tol: f64) -> u32 {
    let mut m = 2u32;
    while 12.0 * 0.5f64.powi(m as i32 + 1) / f64::from(m + 1) >= 0.5 * tol {
        m += 1;
    }
    m
}

/// K = Σ_{m≥2} Σ_p (1/m² − 1/m) p^{−m}.
pub fn prime_square_constant(tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let mm = m_terms(tol);
    let inner = 0.5 * tol / f64::from(mm);
    let mut s = NeumaierSum::new();
    for m in 2..=mm {
        let mf = f64::from(m);
        s.add((1.0 / (mf * mf) - 1.0 / mf) * prime_zeta(Complex64::new(mf, 0.0), inner).re);
    }
    Ok(s.value())
}

/// K at a fixed tolerance of 1e−15, computed once.
pub fn prime_square_constant_default() -> f64 {
    static K: OnceLock<f64> = OnceLock::new();
    *K.get_or_init(|| prime_square_constant(1e-15).expect("positive tolerance"))
}

/// C̃(Δ) = Σ_{m≥2} Σ_p (1/m² − 1/m) p^{−m}(1 − cos(Δ m log p)).
pub fn c_tilde(delta: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(delta >= 0.0) {
        return domain(format!("c_tilde: delta = {delta} must be >= 0"));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let mm = m_terms(tol);
    let inner = 0.25 * tol / f64::from(mm);
    let mut s = NeumaierSum::new();
    for m in 2..=mm {
        let mf = f64::from(m);
        let real = prime_zeta(Complex64::new(mf, 0.0), inner).re;
        let shifted = prime_zeta(Complex64::new(mf, mf * delta), inner).re;
        s.add((1.0 / (mf * mf) - 1.0 / mf) * (real - shifted));
    }
    Ok(s.value())
}

/// E(y) = Σ_{n≤y} Λ²(n) − y log y + y.
pub fn e_of(y: f64, table: &MangoldtTable) -> Result<f64> {
    if !(y >= 1.0) {
        return domain(format!("e_of: y = {y} must be >= 1"));
    }
    table.require(y)?;
    Ok(table.lambda_sq_sum(y) - y * y.ln() + y)
}

/// (1 − cos z)/z² and (2(1 − cos z) − z sin z)/z³, series near 0.
fn c_kernel_parts(z: f64) -> (f64, f64) {
    if z.abs() < 0.25 {
        let z2 = z * z;
        // Σ_{k≥1} (−1)^{k+1} z^{2k−2}/(2k)!
        let mut b = 0.0;
        // Σ_{k≥2} (−1)^k (2k−2) z^{2k−3}/(2k)!
        let mut a = 0.0;
        let mut fact = 2.0;
        let mut zp = 1.0;
        for k in 1..10 {
            let kf = f64::from(k);
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            b += sign * zp / fact;
            if k >= 2 {
                a -= sign * (2.0 * kf - 2.0) * zp / (z * fact);
            }
            fact *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
            zp *= z2;
        }
        (b, a)
    } else {
        let omc = one_minus_cos(z);
        (omc / (z * z), (2.0 * omc - z * z.sin()) / (z * z * z))
    }
}

/// [−vℓ sin(vℓ) + (1 − cos vℓ)(ℓ + 2)]/ℓ³ = v³a(vℓ) + v²b(vℓ).
fn c_kernel(v: f64, ell: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    let (b, a) = c_kernel_parts(v * ell);
    v * v * (v * a + b)
}

/// c(v) = ∫₁^∞ E(y)/(y² log³y)·[−v log y sin(v log y) + (1 − cos(v log y))(log y + 2)] dy − v²/2.
///
/// On [1, 2) the closed form E(y) = y − y log y is used in the variable
/// ℓ = log y, where the integrand tends to v²/2. On [2, Y] the integral is
/// split at every prime power, Y = min(n_max, 10⁷). The tail beyond Y is
/// bounded with |E(y)| ≤ C y/log³y, C fitted on [Y/2, Y], and reported in
/// `err_est`.
pub fn c_of(v: f64, table: &MangoldtTable, spec: &QuadratureSpec) -> Result<Estimate> {
    if !(v >= 0.0) {
        return domain(format!("c_of: v = {v} must be >= 0"));
    }
    if v == 0.0 {
        return Ok(Estimate { value: 0.0, err_est: 0.0 });
    }
    let y_max = table.n_max().min(C_OF_MAX_Y);
    if y_max < 16 {
        return Err(Error::TableTooSmall { required: 16, have: table.n_max() });
    }
    let (head, head_err) = integrate(|ell| (1.0 - ell) * c_kernel(v, ell), 0.0, LN_2, spec)?;

    let y_max_f = y_max as f64;
    let pps = table.prime_powers_up_to(y_max_f);
    let mut body = NeumaierSum::new();
    for (i, pp) in pps.iter().enumerate() {
        let a = pp.n as f64;
        let b = pps.get(i + 1).map_or(y_max_f, |q| q.n as f64);
        if b <= a {
            continue;
        }
        let psi2 = table.lambda_sq_prefix[i];
        body.add(gauss_legendre8(
            |y| {
                let ell = y.ln();
                (psi2 - y * ell + y) / (y * y) * c_kernel(v, ell)
            },
            a,
            b,
        ));
    }

    // Empirical constant in |E(y)| ≤ C y/log³y over [Y/2, Y], checked on both
    // sides of every jump.
    let mut c_emp: f64 = 0.0;
    let start = table.prime_powers.partition_point(|pp| (pp.n as f64) < 0.5 * y_max_f);
    for (i, pp) in pps.iter().enumerate().skip(start) {
        let y = pp.n as f64;
        let e_at = table.lambda_sq_prefix[i] - y * y.ln() + y;
        let l = table.lambda(pp.n);
        let e_before = e_at - l * l;
        let scale = y.ln().powi(3) / y;
        c_emp = c_emp.max(e_at.abs() * scale).max(e_before.abs() * scale);
    }
    let big_l = y_max_f.ln();
    let tail = c_emp * ((v + 2.0) / (4.0 * big_l.powi(4)) + 4.0 / (5.0 * big_l.powi(5)));

    Ok(Estimate { value: head + body.value() - 0.5 * v * v, err_est: head_err + tail + 1e-12 })
}

/// a = ½(γ₀ + K + ∫₁^∞ F(α)/α² dα) given the last integral.
pub fn goldston_a(f_tail: f64) -> f64 {
    0.5 * (EULER_GAMMA + prime_square_constant_default() + f_tail)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneLineEstimate {
    pub value: Complex64,
    /// C·log²x/√x with C = [`PERRON_ERROR_CONSTANT`]; not a proven bound.
    pub err_budget: f64,
}

/// −ζ′/ζ(1+it) ≈ Σ_{n≤x} Λ(n) n^{−1−it} + x^{−it}/(it).
pub fn log_deriv_zeta_one_line(t: f64, x: f64, table: &MangoldtTable) -> Result<OneLineEstimate> {
    if !(x >= 2.0) {
        return domain(format!("log_deriv_zeta_one_line: x = {x} must be >= 2"));
    }
    if !(t != 0.0 && t.abs() <= x.sqrt()) {
        return domain(format!("log_deriv_zeta_one_line: need 0 < |t| <= sqrt(x), got t = {t}"));
    }
    table.require(x)?;
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for pp in table.prime_powers_up_to(x) {
        let ln = (pp.n as f64).ln();
        let w = table.lambda(pp.n) / pp.n as f64;
        let (s, c) = (t * ln).sin_cos();
        re.add(w * c);
        im.add(-w * s);
    }
    let lx = x.ln();
    let (s, c) = (t * lx).sin_cos();
    // x^{−it}/(it) = (−sin(t log x) − i cos(t log x))/t
    re.add(-s / t);
    im.add(-c / t);
    Ok(OneLineEstimate {
        value: Complex64::new(re.value(), im.value()),
        err_budget: PERRON_ERROR_CONSTANT * lx * lx / x.sqrt(),
    })
}

/// (1/2i)∫₀^Δ [ζ′/ζ(1+it) − ζ′/ζ(1−it) − 2i cos(t log T)/t] dt + C̃(Δ).
pub fn keating_bracket(delta: f64, t: f64, x: f64, table: &MangoldtTable) -> Result<f64> {
    Ok(keating_integral(delta, t, x, table)? + c_tilde(delta.max(0.0), 1e-12)?)
}

/// (1/2i)∫₀^Δ [ζ′/ζ(1+it) − ζ′/ζ(1−it) − 2i cos(t log T)/t] dt.
///
/// ζ′/ζ(1+it) is replaced by its truncated Dirichlet series over n ≤ x with
/// the x^{−it}/(it) correction, integrated in closed form. On (0, 10⁻³] the
/// Laurent data of ζ′/ζ at 1 are used instead.
pub fn keating_integral(delta: f64, t: f64, x: f64, table: &MangoldtTable) -> Result<f64> {
    if !(delta >= 0.0) {
        return domain(format!("keating_bracket: delta = {delta} must be >= 0"));
    }
    if !(t > 1.0) {
        return domain(format!("keating_bracket: T = {t} must be > 1"));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    if !(x >= 2.0 && delta <= x.sqrt()) {
        return domain(format!("keating_bracket: need delta <= sqrt(x), got delta = {delta}, x = {x}"));
    }
    table.require(x)?;
    let lt = t.ln();
    let lx = x.ln();
    // −ζ′/ζ(1+ε) = 1/ε − γ₀ + (γ₀² + 2γ₁)ε + O(ε²)
    let c1 = EULER_GAMMA * EULER_GAMMA + 2.0 * STIELTJES_1;
    let t0 = KEATING_SMALL_T.min(delta);
    let head = cin(t0 * lt) - 0.5 * c1 * t0 * t0;

    let mut body = NeumaierSum::new();
    if delta > t0 {
        for pp in table.prime_powers_up_to(x) {
            let ln = (pp.n as f64).ln();
            let w = table.lambda(pp.n) / (pp.n as f64 * ln);
            // cos(t0 ln) − cos(Δ ln)
            let diff = 2.0 * (0.5 * (delta + t0) * ln).sin() * (0.5 * (delta - t0) * ln).sin();
            body.add(w * diff);
        }
        if lx != lt {
            body.add(cosine_integral(delta * lx)? - cosine_integral(t0 * lx)?);
            body.add(-(cosine_integral(delta * lt)? - cosine_integral(t0 * lt)?));
        }
    }
    Ok(head + body.value())
}
