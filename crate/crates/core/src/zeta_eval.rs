//! Values of ζ on and near the critical line: the Riemann–Siegel Z function
//! and phase θ, and an Euler–Maclaurin evaluation of ζ(s) used for low
//! heights and as a cross-check.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::zero_data::ZeroTable;

/// Smallest height accepted by the Riemann–Siegel routines.
pub const RS_MIN_HEIGHT: f64 = 10.0;

/// Minimum distance from a tabulated ordinate accepted by [`log_abs_zeta_half_checked`].
pub const ZERO_EXCLUSION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalLineSample {
    pub t: f64,
    pub z_value: f64,
    pub log_abs_zeta: f64,
    pub correction_terms_used: usize,
}

// Taylor coefficients of the Riemann–Siegel correction terms C_k(p) in
// x = p − 1/2. Even k use powers x^{2i}; odd k use x^{2i+1}.
const C0: [f64; 23] = [
    3.82683432365089782e-01,
    1.74896187231008171e+00,
    2.11802520768549618e+00,
    -8.70721667051148063e-01,
    -3.47331122434651673e+00,
    -1.66269473089993247e+00,
    1.21673128891923210e+00,
    1.30143041610079768e+00,
    3.05110218273616715e-02,
    -3.75580305154509519e-01,
    -1.08578441656406594e-01,
    5.18329029995496238e-02,
    2.99994806199022773e-02,
    -2.27593967061256444e-03,
    -4.38264741658033873e-03,
    -4.06423018372984715e-04,
    4.00609778542211398e-04,
    8.97105799138884146e-05,
    -2.30256500272391078e-05,
    -9.38000660190679249e-06,
    6.32351494760910754e-07,
    6.55102281923150186e-07,
    2.21052374555269715e-08,
];
const C1: [f64; 24] = [
    -5.36502052567506965e-02,
    1.10278187410814826e-01,
    1.23172001543152265e+00,
    1.26349648627994582e+00,
    -1.69510899755950306e+00,
    -2.99987119676501024e+00,
    -1.08199449598992081e-01,
    1.94076629462127137e+00,
    7.83842356150068698e-01,
    -5.05482966790036570e-01,
    -3.84507234960579758e-01,
    3.74726464653153193e-02,
    9.09202661097317649e-02,
    1.04492375500645097e-02,
    -1.25829796515834168e-02,
    -3.39950372115127401e-03,
    1.04109505377148913e-03,
    5.01094905111848640e-04,
    -3.95635966900318169e-05,
    -4.76245924535718956e-05,
    -1.85393553380851326e-06,
    3.19369180800689734e-06,
    4.09078076085060653e-07,
    -1.54466243325766313e-07,
];
const C2: [f64; 25] = [
    5.18854283029316840e-03,
    1.23786335522538976e-03,
    -1.81375057251669969e-01,
    1.42914927485321253e-01,
    1.33033917666875645e+00,
    3.52247235340373388e-01,
    -2.42100159589195085e+00,
    -1.67607870225381084e+00,
    1.36894167233283715e+00,
    1.55390194302229823e+00,
    -1.72216427347299805e-01,
    -6.35906805504543149e-01,
    -9.91164987304120754e-02,
    1.40334800673870080e-01,
    4.78235201982729202e-02,
    -1.73560406414797821e-02,
    -1.02250125340285925e-02,
    9.27414915979488759e-04,
    1.35721943723733857e-03,
    6.41369012029387962e-05,
    -1.23008056981966290e-04,
    -1.83135074047892012e-05,
    7.82162860432262701e-06,
    2.00875424847599460e-06,
    -3.35327653931857138e-07,
];
const C3: [f64; 25] = [
    -2.67943218143891363e-03,
    2.99537210910351508e-02,
    -4.25701725418286964e-02,
    -2.89979657798038859e-01,
    4.88883199923544620e-01,
    1.23085587639574601e+00,
    -8.29756070852740835e-01,
    -2.24976353666656692e+00,
    7.84513996100547201e-02,
    1.74674928008688934e+00,
    4.59680809797499368e-01,
    -6.61935347103977501e-01,
    -3.15904410361736332e-01,
    1.28447925452074951e-01,
    1.00733827166261516e-01,
    -9.53018384882526812e-03,
    -1.92644216875140876e-02,
    -1.24646371587692909e-03,
    2.42439696411030862e-03,
    4.37647697741857015e-04,
    -2.07140326870017922e-04,
    -6.27434450418651551e-05,
    1.15753438145956698e-05,
    5.88385492454037999e-06,
    -3.12467740069633625e-07,
];
const C4: [f64; 25] = [
    4.64833893617633829e-04,
    -4.02264294613618838e-03,
    3.84717705179612708e-03,
    6.58117513580948610e-02,
    -1.96041243436944485e-01,
    -2.08540536863588533e-01,
    9.50775418514175130e-01,
    5.34153531291487349e-01,
    -1.67634944117633999e+00,
    -1.07674715787512909e+00,
    1.23533930165659700e+00,
    1.02578253400572761e+00,
    -4.01240957939885456e-01,
    -5.03666399510830365e-01,
    3.57348779550274512e-02,
    1.44317630867854180e-01,
    1.50915274179034692e-02,
    -2.60988747791943629e-02,
    -6.12662837951926179e-03,
    3.07750312987084117e-03,
    1.15624789340887531e-03,
    -2.27759667584721267e-04,
    -1.41896371181814449e-04,
    7.46486030795591945e-06,
    1.24797016454091170e-05,
];

const CORRECTIONS: [&[f64]; 5] = [&C0, &C1, &C2, &C3, &C4];

/// Riemann–Siegel phase θ(t) = arg Γ(¼ + it/2) − (t/2)log π by its Stirling series.
pub fn rs_theta(t: f64) -> Result<f64> {
    if !(t >= RS_MIN_HEIGHT) {
        return domain(format!("rs_theta: t = {t} must be >= {RS_MIN_HEIGHT}"));
    }
    Ok(theta_unchecked(t))
}

fn theta_unchecked(t: f64) -> f64 {
    let r = 1.0 / t;
    let r2 = r * r;
    let series = r
        * (1.0 / 48.0
            + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0 + r2 * (127.0 / 430080.0 + r2 * (511.0 / 1216512.0)))));
    0.5 * t * (t / TAU).ln() - 0.5 * t - PI / 8.0 + series
}

fn correction(k: usize, x: f64) -> f64 {
    let x2 = x * x;
    let c = CORRECTIONS[k];
    let mut acc = 0.0;
    for &v in c.iter().rev() {
        acc = acc * x2 + v;
    }
    if k % 2 == 1 {
        acc * x
    } else {
        acc
    }
}

/// Riemann–Siegel Z(t) with `n_corrections` remainder terms (0 to 4).
pub fn rs_z(t: f64, n_corrections: usize) -> Result<f64> {
    if !(t >= RS_MIN_HEIGHT) {
        return domain(format!("rs_z: t = {t} must be >= {RS_MIN_HEIGHT}"));
    }
    if n_corrections > 4 {
        return domain(format!("rs_z: n_corrections = {n_corrections} must be <= 4"));
    }
    Ok(z_unchecked(t, n_corrections))
}

fn z_unchecked(t: f64, n_corrections: usize) -> f64 {
    let a = (t / TAU).sqrt();
    let n = a.floor();
    let p = a - n;
    let theta = theta_unchecked(t);
    let n = n as usize;
    let mut main = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        main += (theta - t * kf.ln()).cos() / kf.sqrt();
    }
    let x = p - 0.5;
    let inv = 1.0 / a;
    let mut rem = 0.0;
    let mut scale = 1.0;
    for k in 0..=n_corrections {
        rem += correction(k, x) * scale;
        scale *= inv;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * main + sign * rem / a.sqrt()
}

/// Size of the first omitted correction, a rough accuracy envelope for [`rs_z`].
pub fn rs_error_envelope(t: f64, n_corrections: usize) -> f64 {
    (t / TAU).powf(-0.25 - 0.5 * (n_corrections as f64 + 1.0))
}

/// Z(t) with all four corrections together with log|Z(t)|.
pub fn critical_line_sample(t: f64) -> Result<CriticalLineSample> {
    let z = rs_z(t, 4)?;
    if z == 0.0 {
        return Err(Error::NearZero { t, ordinate: t, distance: 0.0 });
    }
    Ok(CriticalLineSample { t, z_value: z, log_abs_zeta: z.abs().ln(), correction_terms_used: 4 })
}

/// log|ζ(½+it)| = log|Z(t)| for t ≥ 10.
pub fn log_abs_zeta_half(t: f64) -> Result<f64> {
    Ok(critical_line_sample(t)?.log_abs_zeta)
}

/// As [`log_abs_zeta_half`], refusing points within [`ZERO_EXCLUSION`] of a
/// tabulated ordinate.
pub fn log_abs_zeta_half_checked(t: f64, zeros: &ZeroTable) -> Result<f64> {
    let g = zeros.ordinates();
    let i = g.partition_point(|&x| x < t);
    for j in [i.wrapping_sub(1), i] {
        if let Some(&ordinate) = g.get(j) {
            let distance = (ordinate - t).abs();
            if distance < ZERO_EXCLUSION {
                return Err(Error::NearZero { t, ordinate, distance });
            }
        }
    }
    log_abs_zeta_half(t)
}

/// Below this height [`log_abs_zeta_any`] uses Euler–Maclaurin summation.
pub const EM_LOG_CEILING: f64 = 200.0;

/// log|ζ(½+it)| for any t ≥ 0: Euler–Maclaurin below [`EM_LOG_CEILING`],
/// Riemann–Siegel above. Returns −∞ at an exact zero.
pub fn log_abs_zeta_any(t: f64) -> f64 {
    if t >= EM_LOG_CEILING {
        z_unchecked(t, 4).abs().ln()
    } else {
        zeta_em(Complex64::new(0.5, t)).norm().ln()
    }
}

/// B_{2k}/(2k)! for k = 1..=60.
fn bernoulli_ratios() -> &'static [f64; 60] {
    static B: OnceLock<[f64; 60]> = OnceLock::new();
    B.get_or_init(|| {
        let mut out = [0.0; 60];
        for (i, slot) in out.iter_mut().enumerate() {
            let k = i + 1;
            let zeta2k = if k == 1 {
                PI * PI / 6.0
            } else {
                let s = -(2.0 * k as f64);
                (1..=20_000u32).rev().map(|n| f64::from(n).powf(s)).sum::<f64>()
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta2k / TAU.powi(2 * k as i32);
        }
        out
    })
}

/// ζ(s) and ζ′(s) by Euler–Maclaurin summation, s ≠ 1.
pub fn zeta_em_with_derivative(s: Complex64) -> (Complex64, Complex64) {
    let n_split = 20 + (s.norm() / 2.0).ceil() as usize;
    let mut z = Complex64::new(0.0, 0.0);
    let mut dz = Complex64::new(0.0, 0.0);
    for n in (1..n_split).rev() {
        let ln = (n as f64).ln();
        let term = (-s * ln).exp();
        z += term;
        dz -= term * ln;
    }
    let nf = n_split as f64;
    let ln_n = nf.ln();
    let n_s = (-s * ln_n).exp();
    let sm1 = s - 1.0;
    let head = n_s * nf / sm1;
    z += head + 0.5 * n_s;
    dz += -head * ln_n - head / sm1 - 0.5 * n_s * ln_n;

    // Correction terms b_k·s(s+1)…(s+2k−2)·N^{−s−2k+1}.
    let b = bernoulli_ratios();
    let mut poly = s;
    let mut dpoly = Complex64::new(1.0, 0.0);
    let mut power = n_s / nf;
    let mut last = f64::INFINITY;
    for (i, &bk) in b.iter().enumerate() {
        let term = bk * poly * power;
        let mag = term.norm();
        if mag > last {
            break;
        }
        z += term;
        dz += bk * (dpoly - poly * ln_n) * power;
        if mag <= 1e-17 * z.norm() {
            break;
        }
        last = mag;
        let k = (i + 1) as f64;
        let f1 = s + (2.0 * k - 1.0);
        let f2 = s + 2.0 * k;
        dpoly = dpoly * f1 * f2 + poly * (f1 + f2);
        poly = poly * f1 * f2;
        power /= nf * nf;
    }
    (z, dz)
}

/// ζ(s) by Euler–Maclaurin summation, s ≠ 1.
pub fn zeta_em(s: Complex64) -> Complex64 {
    zeta_em_with_derivative(s).0
}
