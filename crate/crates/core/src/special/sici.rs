//! Sine and cosine integrals and the auxiliary functions f, g with
//! Si(x) = π/2 − f(x)cos x − g(x)sin x and Ci(x) = f(x)sin x − g(x)cos x.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::EULER_GAMMA;
use crate::error::{domain, Result};

/// Below this the power series is used, above it the continued fraction.
const SERIES_LIMIT: f64 = 2.0;

fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
        let add = term / (2.0 * k + 1.0);
        sum += add;
        if add.abs() <= 1e-18 * sum.abs() {
            return sum;
        }
    }
}

/// Σ_{k≥1} (−1)^{k+1} x^{2k} / (2k·(2k)!), i.e. ∫₀ˣ (1 − cos u)/u du.
fn cin_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
        let add = -term / (2.0 * k);
        sum += add;
        if add.abs() <= 1e-18 * sum.abs() || sum == 0.0 {
            return sum;
        }
    }
}

/// e^{ix}·E₁(ix) = g(x) − i f(x) by the Lentz continued fraction. Valid for x ≥ 2.
fn scaled_e1_imag(x: f64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..100_000u32 {
        let a = -f64::from((i - 1) * (i - 1));
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Above this the asymptotic series of f and g is used; ten terms reach
/// double precision.
const ASYMPTOTIC_LIMIT: f64 = 64.0;

/// f(x) ~ Σ(−1)ⁿ(2n)!/x^{2n+1}, g(x) ~ Σ(−1)ⁿ(2n+1)!/x^{2n+2}.
fn aux_fg_asymptotic(x: f64) -> (f64, f64) {
    let r = 1.0 / (x * x);
    let mut tf = 1.0;
    let mut tg = 1.0;
    let mut f = 1.0;
    let mut g = 1.0;
    for n in 1..11 {
        let m = f64::from(2 * n);
        tf *= -(m - 1.0) * m * r;
        tg *= -m * (m + 1.0) * r;
        f += tf;
        g += tg;
    }
    (f / x, g * r)
}

/// Auxiliary functions (f(x), g(x)) for x > 0.
pub fn aux_fg(x: f64) -> (f64, f64) {
    if x >= ASYMPTOTIC_LIMIT {
        aux_fg_asymptotic(x)
    } else if x >= SERIES_LIMIT {
        let h = scaled_e1_imag(x);
        (-h.im, h.re)
    } else {
        let (s, c) = x.sin_cos();
        let si = si_series(x) - FRAC_PI_2;
        let ci = EULER_GAMMA + x.ln() - cin_series(x);
        (ci * s - si * c, -ci * c - si * s)
    }
}

/// Si(x) = ∫₀ˣ sin u/u du.
pub fn sine_integral(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT {
        si_series(ax)
    } else if ax.is_infinite() {
        FRAC_PI_2
    } else {
        let (f, g) = aux_fg(ax);
        let (s, c) = ax.sin_cos();
        FRAC_PI_2 - f * c - g * s
    };
    v.copysign(x)
}

/// Ci(x) = −∫ₓ^∞ cos u/u du, for x > 0.
pub fn cosine_integral(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("cosine_integral: x = {x} must be > 0"));
    }
    if x < SERIES_LIMIT {
        return Ok(EULER_GAMMA + x.ln() - cin_series(x));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let (f, g) = aux_fg(x);
    let (s, c) = x.sin_cos();
    Ok(f * s - g * c)
}

/// Cin(x) = ∫₀ˣ (1 − cos u)/u du = γ₀ + log x − Ci(x), even in x.
pub fn cin(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        cin_series(ax)
    } else {
        let (f, g) = aux_fg(ax);
        let (s, c) = ax.sin_cos();
        EULER_GAMMA + ax.ln() - (f * s - g * c)
    }
}

/// ∫₁^A cos(kα)/α² dα for k ≥ 0 and A > 1.
pub fn cos_over_square(k: f64, a: f64) -> f64 {
    let k = k.abs();
    if k == 0.0 {
        return 1.0 - 1.0 / a;
    }
    let ka = k * a;
    let (s1, c1) = k.sin_cos();
    let (sa, ca) = ka.sin_cos();
    // k·(Si(kA) − Si(k)) through the auxiliary functions, which keeps the
    // difference accurate when both arguments are large.
    let diff = if k >= SERIES_LIMIT {
        let (f1, g1) = aux_fg(k);
        let (fa, ga) = aux_fg(ka);
        f1 * c1 + g1 * s1 - fa * ca - ga * sa
    } else {
        sine_integral(ka) - sine_integral(k)
    };
    c1 - ca / a - k * diff
}

/// ∫_A^∞ cos(kα)/α² dα for k ≥ 0 and A > 0.
pub fn cos_over_square_tail(k: f64, a: f64) -> f64 {
    let k = k.abs();
    if k == 0.0 {
        return 1.0 / a;
    }
    let ka = k * a;
    let (sa, ca) = ka.sin_cos();
    let rest = if ka >= SERIES_LIMIT {
        let (f, g) = aux_fg(ka);
        f * ca + g * sa
    } else {
        FRAC_PI_2 - si_series(ka)
    };
    ca / a - k * rest
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Reference values from an arbitrary-precision evaluation (30 digits).
    const SI_REF: [(f64, f64); 4] = [
        (1.0, 0.946083070367183015),
        (10.0, 1.65834759421887405),
        (50.0, 1.55161707248593589),
        (1000.0, 1.57023312196877122),
    ];
    const CI_REF: [(f64, f64); 4] = [
        (1e-4, -8.63312470957464983),
        (1.0, 0.337403922900968135),
        (10.0, -0.0454564330044553726),
        (50.0, -0.00562838632411630544),
    ];

    #[test]
    fn reference_values() {
        for (x, v) in SI_REF {
            assert!((sine_integral(x) - v).abs() < 1e-13, "Si({x})");
        }
        for (x, v) in CI_REF {
            assert!((cosine_integral(x).unwrap() - v).abs() < 1e-13, "Ci({x})");
        }
    }

    #[test]
    fn asymptotic_branch_reference_values() {
        // (x, f(x), g(x)) from an arbitrary-precision evaluation.
        let reference = [
            (64.0, 0.015617392795692042965, 0.00024378472576210007257),
            (80.0, 0.012496101040182742281, 0.0001561039704178264588),
            (500.0, 0.0019999840007679078606, 3.9999040076787101314e-6),
            (1e4, 0.00009999999800000024, 9.9999994000001199999e-9),
        ];
        for (x, f_ref, g_ref) in reference {
            let (f, g) = aux_fg(x);
            assert!((f - f_ref).abs() < 1e-15 * f_ref, "f({x})");
            assert!((g - g_ref).abs() < 1e-15 * g_ref, "g({x})");
            let h = scaled_e1_imag(x);
            assert!((f + h.im).abs() < 1e-14 * f_ref && (g - h.re).abs() < 1e-14 * g_ref);
        }
    }

    #[test]
    fn si_limits() {
        assert_eq!(sine_integral(0.0), 0.0);
        assert!((sine_integral(1000.0) - FRAC_PI_2).abs() < 1e-3);
        assert_eq!(sine_integral(f64::INFINITY), FRAC_PI_2);
    }

    #[test]
    fn ci_small_argument_series() {
        let x: f64 = 1e-4;
        let series = EULER_GAMMA + x.ln() - x * x / 4.0 + x.powi(4) / 96.0;
        let ci = cosine_integral(x).unwrap();
        assert!((ci - series).abs() < 1e-15);
        assert!((ci - (EULER_GAMMA + x.ln())).abs() < 1e-8);
        assert!(cosine_integral(0.0).is_err());
        assert!(cosine_integral(-1.0).is_err());
    }

    #[test]
    fn seam_is_continuous() {
        let lo = SERIES_LIMIT * (1.0 - 1e-12);
        let hi = SERIES_LIMIT * (1.0 + 1e-12);
        assert!((sine_integral(lo) - sine_integral(hi)).abs() < 1e-11);
        assert!((cosine_integral(lo).unwrap() - cosine_integral(hi).unwrap()).abs() < 1e-11);
        assert!((cin(lo) - cin(hi)).abs() < 1e-11);
    }

    #[test]
    fn square_integrals_match_quadrature() {
        use crate::special::{integrate, QuadratureSpec};
        let spec = QuadratureSpec::new(1e-13, 1e-12, 20_000);
        for &(k, a) in &[(0.3, 4.0), (3.7, 2.5), (40.0, 3.0), (250.0, 1.5)] {
            let (q, _) = integrate(|x| (k * x).cos() / (x * x), 1.0, a, &spec).unwrap();
            assert!((cos_over_square(k, a) - q).abs() < 1e-10, "k={k} a={a}");
        }
        for &(k, a) in &[(0.5, 3.0), (5.0, 3.0)] {
            let (head, _) = integrate(|x| (k * x).cos() / (x * x), a, 400.0, &spec).unwrap();
            let rest = cos_over_square_tail(k, 400.0);
            assert!((cos_over_square_tail(k, a) - head - rest).abs() < 1e-10);
        }
        assert!((cos_over_square_tail(0.0, 2.0) - 0.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn si_is_odd(x in -500.0f64..500.0) {
            prop_assert_eq!(sine_integral(-x), -sine_integral(x));
        }

        #[test]
        fn cin_identity(x in 0.01f64..300.0) {
            let direct = EULER_GAMMA + x.ln() - cosine_integral(x).unwrap();
            prop_assert!((cin(x) - direct).abs() < 1e-12 * (1.0 + direct.abs()));
        }

        #[test]
        fn derivative_of_si(x in 0.5f64..200.0) {
            let h = 1e-5;
            let d = (sine_integral(x + h) - sine_integral(x - h)) / (2.0 * h);
            prop_assert!((d - x.sin() / x).abs() < 1e-7);
        }
    }
}
