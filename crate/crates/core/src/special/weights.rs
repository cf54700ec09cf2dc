//! The auxiliary weights f, g, h of the representation formula for
//! log|ζ(½+it)|, the transform ĥ, and k = ĥ²/π².

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::quad::{integrate, QuadratureSpec};
use crate::error::{domain, Result};

const CATALAN: f64 = 0.915_965_594_177_219_015;

fn weight_spec() -> QuadratureSpec {
    QuadratureSpec::new(1e-13, 1e-13, 4000)
}

/// f(u) = u∫₀^∞ sinh[y(1−u)]/cosh y dy for 0 < u < 2.
pub fn f_weight(u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 2.0) {
        return domain(format!("f_weight: u = {u} must lie in (0, 2)"));
    }
    // sinh[y(1−u)]/cosh y = (e^{−uy} − e^{−(2−u)y})/(1 + e^{−2y})
    let integrand = |y: f64| ((-u * y).exp() - (-(2.0 - u) * y).exp()) / (1.0 + (-2.0 * y).exp());
    let (v, _) = integrate(integrand, 0.0, f64::INFINITY, &weight_spec())?;
    Ok(u * v)
}

/// g(u) = ∫₀^∞ e^{−y}cosh(uy)/cosh y dy for |u| < 2.
pub fn g_weight(u: f64) -> Result<f64> {
    if !(u.abs() < 2.0) {
        return domain(format!("g_weight: |u| = {} must be < 2", u.abs()));
    }
    let u = u.abs();
    let integrand = |y: f64| ((-(2.0 - u) * y).exp() + (-(2.0 + u) * y).exp()) / (1.0 + (-2.0 * y).exp());
    let (v, _) = integrate(integrand, 0.0, f64::INFINITY, &weight_spec())?;
    Ok(v)
}

/// Odd moments m_{2k+1} = ∫₀^∞ y^{2k+1}/cosh y dy = 2(2k+1)!·β(2k+2),
/// with β the Dirichlet beta function.
fn odd_moments() -> &'static [f64; 16] {
    static M: OnceLock<[f64; 16]> = OnceLock::new();
    M.get_or_init(|| {
        let mut out = [0.0; 16];
        let mut fact = 1.0;
        for (k, slot) in out.iter_mut().enumerate() {
            let j = 2 * k + 1;
            if k == 0 {
                fact = 1.0;
            } else {
                fact *= (j - 1) as f64 * j as f64;
            }
            let s = (j + 1) as i32;
            let beta = if k == 0 {
                CATALAN
            } else {
                let mut b = 0.0;
                for n in (0..20_000).rev() {
                    let t = 1.0 / ((2 * n + 1) as f64).powi(s);
                    b += if n % 2 == 0 { t } else { -t };
                }
                b
            };
            *slot = 2.0 * fact * beta;
        }
        out
    })
}

/// Above this |u| the asymptotic expansion of the h integral is used.
const H_ASYMPTOTIC: f64 = 30.0;

/// Below this |u| the h integral is −log u + [`H_LOG_CONSTANT`] to O(u² log u).
const H_SMALL: f64 = 1e-7;

/// lim_{u→0} (∫₀^∞ y/cosh y · dy/(y²+u²) + log u).
const H_LOG_CONSTANT: f64 = 0.205_973_120_512_140_691_85;

fn h_integral(u: f64) -> Result<f64> {
    let u = u.abs();
    if u < H_SMALL {
        return Ok(H_LOG_CONSTANT - u.ln());
    }
    if u >= H_ASYMPTOTIC {
        let m = odd_moments();
        let inv2 = 1.0 / (u * u);
        let mut p = inv2;
        let mut sum = 0.0;
        let mut last = f64::INFINITY;
        for (k, mk) in m.iter().enumerate() {
            let term = mk * p;
            if term >= last {
                break;
            }
            sum += if k % 2 == 0 { term } else { -term };
            last = term;
            p *= inv2;
        }
        return Ok(sum);
    }
    let integrand = |y: f64| y / (y.cosh() * (y * y + u * u));
    let spec = weight_spec();
    // Breakpoints on a geometric ladder from u up to 1 resolve the peak at y ≈ u.
    let mut pts = vec![0.0];
    let mut p = u;
    while p < 1.0 {
        pts.push(p);
        p *= 8.0;
    }
    pts.push(p.max(1.0) + 1.0);
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += integrate(integrand, w[0], w[1], &spec)?.0;
    }
    total += integrate(integrand, *pts.last().unwrap(), f64::INFINITY, &spec)?.0;
    Ok(total)
}

/// h(u) = cos u ∫₀^∞ y/cosh y · dy/(y²+u²), u ≠ 0. Grows like −log|u| at 0.
pub fn h_weight(u: f64) -> Result<f64> {
    if u == 0.0 || !u.is_finite() {
        return domain(format!("h_weight: u = {u} must be finite and nonzero"));
    }
    Ok(u.cos() * h_integral(u)?)
}

/// Fourier transform ĥ(a) = ∫h(v)e^{−2πiav}dv in closed form.
pub fn h_hat(a: f64) -> f64 {
    let x = 2.0 * PI * a.abs();
    if x <= 1.0 {
        PI * g_weight(x).expect("|2πa| <= 1 lies in the domain of g")
    } else {
        1.0 / (2.0 * a.abs())
    }
}

/// k(ξ) = ĥ(ξ)²/π².
pub fn k_of(x: f64) -> f64 {
    let h = h_hat(x);
    h * h / (PI * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    /// g(u) = Σ_{j≥1} (−1)^{j−1}[1/(2j−u) + 1/(2j+u)], summed with pairing
    /// and averaging of the last two partial sums.
    fn g_series(u: f64) -> f64 {
        let term = |j: f64| 1.0 / (2.0 * j - u) + 1.0 / (2.0 * j + u);
        let mut s = 0.0;
        let n = 200_000;
        for j in 1..=n {
            let t = term(j as f64);
            s += if j % 2 == 1 { t } else { -t };
        }
        let next = term((n + 1) as f64);
        s + 0.5 * next
    }

    #[test]
    fn g_examples() {
        assert!((g_weight(0.0).unwrap() - LN_2).abs() < 1e-12);
        assert!((g_weight(1.0).unwrap() - 1.0).abs() < 1e-12);
        for &u in &[0.3, 0.9, 1.5, 1.9] {
            assert!((g_weight(u).unwrap() - g_series(u)).abs() < 1e-10, "u={u}");
            assert_eq!(g_weight(-u).unwrap(), g_weight(u).unwrap());
        }
        assert!(g_weight(2.0).is_err());
        assert!(g_weight(-2.5).is_err());
    }

    #[test]
    fn f_examples() {
        assert!(f_weight(1.0).unwrap().abs() < 1e-14);
        assert!(f_weight(0.0).is_err());
        assert!(f_weight(2.0).is_err());
        // Midpoint rule on [0, 50] with 10⁶ panels; the neglected tail is
        // below 0.5·∫₅₀^∞ e^{−y/2}dy ≈ 1.4e−11.
        let u = 0.5;
        let n = 1_000_000;
        let dy = 50.0 / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            let y = (i as f64 + 0.5) * dy;
            s += (y * (1.0 - u)).sinh() / y.cosh();
        }
        let oracle = u * s * dy;
        assert!((f_weight(u).unwrap() - oracle).abs() < 1e-8);
    }

    #[test]
    fn f_and_g_identity() {
        for i in 1..200 {
            let u = i as f64 / 100.0;
            let lhs = u * g_weight(u).unwrap() + f_weight(u).unwrap();
            assert!((lhs - 1.0).abs() < 1e-9, "u={u}");
        }
    }

    #[test]
    fn moments_match_quadrature() {
        let m = odd_moments();
        assert!((m[0] - 2.0 * CATALAN).abs() < 1e-15);
        for k in 0..6 {
            let j = 2 * k + 1;
            let (q, _) = integrate(
                |y: f64| y.powi(j as i32) / y.cosh(),
                0.0,
                f64::INFINITY,
                &QuadratureSpec::new(1e-12, 1e-13, 2000),
            )
            .unwrap();
            assert!((m[k] - q).abs() < 1e-11 * q, "k={k}");
        }
    }

    #[test]
    fn h_examples() {
        assert!(h_weight(0.0).is_err());
        assert!(h_weight(std::f64::consts::FRAC_PI_2).unwrap().abs() < 1e-15);
        for &u in &[1e-3, 0.2, 3.0, 17.0, 29.9, 30.1, 80.0] {
            assert_eq!(h_weight(-u).unwrap(), h_weight(u).unwrap());
        }
        // The expansion and the quadrature agree across the switch.
        for &u in &[30.0, 35.0, 50.0] {
            let q = integrate(
                |y: f64| y / (y.cosh() * (y * y + u * u)),
                0.0,
                f64::INFINITY,
                &QuadratureSpec::new(1e-15, 1e-13, 4000),
            )
            .unwrap()
            .0;
            assert!((h_integral(u).unwrap() - q).abs() < 1e-12, "u={u}");
        }
    }

    #[test]
    fn h_small_branch_is_continuous() {
        let u = H_SMALL * 1.000_001;
        let quadrature = h_weight(u).unwrap();
        let expansion = u.cos() * (H_LOG_CONSTANT - u.ln());
        assert!((quadrature - expansion).abs() < 1e-11, "{quadrature} vs {expansion}");
        assert!(h_weight(1e-300).unwrap().is_finite());
    }

    #[test]
    fn h_is_logarithmic_at_zero() {
        // h(u) + log|u| tends to a constant, so successive differences shrink.
        let c = |u: f64| h_weight(u).unwrap() + u.ln();
        let d1 = (c(1e-3) - c(1e-4)).abs();
        let d2 = (c(1e-4) - c(1e-5)).abs();
        assert!(d2 < d1 && d2 < 1e-3);
    }

    #[test]
    fn h_hat_examples() {
        assert!((h_hat(0.0) - PI * LN_2).abs() < 1e-12);
        assert!((h_hat(1.0 / PI) - PI / 2.0).abs() < 1e-15);
        let seam = 1.0 / (2.0 * PI);
        let left = h_hat(seam);
        let right = h_hat(seam * (1.0 + 1e-15));
        assert!((left - PI).abs() < 1e-9 && (right - PI).abs() < 1e-9);
        assert_eq!(h_hat(-0.3), h_hat(0.3));
    }

    #[test]
    fn k_examples() {
        assert!((k_of(0.0) - LN_2 * LN_2).abs() < 1e-12);
        for &x in &[0.2, 0.5, 3.0] {
            assert!((k_of(x) - 1.0 / (4.0 * x * x * PI * PI)).abs() < 1e-15);
        }
        for i in -50..=50 {
            assert!(k_of(i as f64 * 0.01) >= 0.0);
        }
        // k(α/(2πβ)) = g(α/β)² for 0 ≤ α ≤ β.
        let (alpha, beta) = (0.7, 1.3);
        let g = g_weight(alpha / beta).unwrap();
        assert!((k_of(alpha / (2.0 * PI * beta)) - g * g).abs() < 1e-12);
    }
}
