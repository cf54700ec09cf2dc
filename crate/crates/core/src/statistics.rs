//! Empirical left-hand sides (number variance, S-variance, log-moments) and
//! the theoretical right-hand sides they are compared with.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::prime_side::{c_of, c_tilde, goldston_a, keating_integral, prime_variance_sum, MangoldtTable};
use crate::special::{
    aux_fg, cin, cos_over_square_tail, cosine_integral, f_weight, gauss_legendre8, h_weight, integrate, sine_integral,
    QuadratureSpec, EULER_GAMMA,
};
use crate::sum::{block_reduce, NeumaierSum};
use crate::zero_data::{smooth_count_unchecked, ZeroTable};
use crate::zero_side::{f_weighted_integral, mean_gap, FIntegral, TailIntegral};
use crate::zeta_eval::log_abs_zeta_any;
use crate::Estimate;

pub const RH: &str = "RH";
pub const CHAN: &str = "Chan conjecture";
pub const STRONG_PC: &str = "Montgomery strong PC";
pub const BERRY: &str = "Berry conjecture";

/// Gaps longer than this many mean spacings are split at the largest |ζ|.
const LONG_GAP_SPACINGS: f64 = 5.0;

/// Longest piece integrated by one 8-point rule in [`empirical_s_variance`].
const MAX_GL_PIECE: f64 = 1.0;

/// Envelope constant for the representation-formula check.
pub const REPRESENTATION_ENVELOPE: f64 = 20.0;

/// Zeros farther than this from t are replaced by a tail bound in
/// [`representation_check`].
const REPRESENTATION_REACH: f64 = 60.0;

/// 2G, the first moment ∫₀^∞ y/cosh y dy; |h(u)| ≤ 2G/u².
const H_TAIL_CONSTANT: f64 = 1.831_931_188_354_438;

fn check_height(t: f64, min: f64) -> Result<()> {
    if !(t >= min && t.is_finite()) {
        return domain(format!("T = {t} must be finite and >= {min}"));
    }
    Ok(())
}

/// Merged breakpoints {γ − h} ∪ {γ} inside (0, T) with the count change at
/// each: +1 when γ enters (t, t+h], −1 when it leaves.
fn count_events(ords: &[f64], t_max: f64, h: f64) -> Vec<(f64, i32)> {
    let enter = ords.iter().map(|&g| g - h).filter(|&x| x > 0.0 && x < t_max);
    let leave = ords.iter().copied().filter(|&x| x > 0.0 && x < t_max);
    let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * ords.len());
    let mut enter = enter.peekable();
    let mut leave = leave.peekable();
    loop {
        match (enter.peek(), leave.peek()) {
            (Some(&a), Some(&b)) if a <= b => {
                events.push((a, 1));
                enter.next();
            }
            (Some(_), Some(&b)) | (None, Some(&b)) => {
                events.push((b, -1));
                leave.next();
            }
            (Some(&a), None) => {
                events.push((a, 1));
                enter.next();
            }
            (None, None) => break,
        }
    }
    events
}

/// Segments [a, b) of [0, T] on which #{γ : t < γ ≤ t+h} is constant.
fn count_segments(table: &ZeroTable, t_max: f64, h: f64) -> Result<Vec<(f64, f64, i64)>> {
    check_height(t_max, 0.0)?;
    if !(h > 0.0 && h.is_finite()) {
        return domain(format!("h = {h} must be > 0"));
    }
    table.require_height(t_max + h)?;
    let ords = table.ordinates();
    let mut count = (table.count_le(h) - table.count_le(0.0)) as i64;
    let mut segments = Vec::new();
    let mut start = 0.0;
    for (x, step) in count_events(ords, t_max, h) {
        if x > start {
            segments.push((start, x, count));
        }
        start = x;
        count += i64::from(step);
    }
    if t_max > start {
        segments.push((start, t_max, count));
    }
    Ok(segments)
}

/// ∫₀^T [N(t+h) − N(t) − δ]² dt, exactly: the integrand is constant between
/// the breakpoints {γ} ∪ {γ − h}.
pub fn empirical_number_variance(table: &ZeroTable, t: f64, h: f64, delta_expected: f64) -> Result<f64> {
    let segments = count_segments(table, t, h)?;
    let total = block_reduce(
        segments.len(),
        NeumaierSum::new,
        |range, acc| {
            for &(a, b, c) in &segments[range] {
                let d = c as f64 - delta_expected;
                acc.add(d * d * (b - a));
            }
        },
        |acc, part| acc.merge(&part),
    );
    Ok(total.value())
}

/// ∫₀^T [S(t+h) − S(t)]² dt with S = N − smooth part; 8-point Gauss–Legendre
/// on every constant-count segment.
pub fn empirical_s_variance(table: &ZeroTable, t: f64, h: f64) -> Result<f64> {
    let segments = count_segments(table, t, h)?;
    let total = block_reduce(
        segments.len(),
        NeumaierSum::new,
        |range, acc| {
            for &(a, b, c) in &segments[range] {
                let c = c as f64;
                let f = |s: f64| {
                    let d = c - (smooth_count_unchecked(s + h) - smooth_count_unchecked(s));
                    d * d
                };
                let pieces = ((b - a) / MAX_GL_PIECE).ceil().max(1.0) as usize;
                for k in 0..pieces {
                    let lo = a + (b - a) * k as f64 / pieces as f64;
                    let hi = if k + 1 == pieces { b } else { a + (b - a) * (k + 1) as f64 / pieces as f64 };
                    acc.add(gauss_legendre8(f, lo, hi));
                }
            }
        },
        |acc, part| acc.merge(&part),
    );
    Ok(total.value())
}

/// max − min of smooth(t+h) − smooth(t) over [0, T]; the drift is increasing
/// in t, so this is its value at T minus its value at 0.
pub fn smooth_drift_variation(t: f64, h: f64) -> f64 {
    let drift = |s: f64| smooth_count_unchecked(s + h) - if s > 0.0 { smooth_count_unchecked(s) } else { 0.875 };
    drift(t) - drift(0.0)
}

/// log|ζ(½+it)| with an exact zero clamped to the smallest positive double.
#[inline]
fn log_abs_zeta(t: f64) -> f64 {
    log_abs_zeta_any(t).max(-745.0)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    singular_a: bool,
    singular_b: bool,
}

/// Splits an unusually long gap at the sampled maximum of |ζ|.
fn push_gap(panels: &mut Vec<Panel>, p: Panel) {
    let mid = 0.5 * (p.a + p.b);
    if p.b - p.a <= LONG_GAP_SPACINGS * mean_gap(mid.max(TAU * std::f64::consts::E)) {
        panels.push(p);
        return;
    }
    let split = (1..16)
        .map(|k| p.a + (p.b - p.a) * k as f64 / 16.0)
        .map(|x| (x, log_abs_zeta(x)))
        .fold((mid, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
        .0;
    panels.push(Panel { b: split, singular_b: false, ..p });
    panels.push(Panel { a: split, singular_a: false, ..p });
}

/// Panels between sorted breakpoints; `singular` marks zeros of the integrand.
fn panels_from(points: &[(f64, bool)]) -> Vec<Panel> {
    let mut panels = Vec::with_capacity(points.len());
    for w in points.windows(2) {
        let ((a, sa), (b, sb)) = (w[0], w[1]);
        if b > a {
            push_gap(&mut panels, Panel { a, b, singular_a: sa, singular_b: sb });
        }
    }
    panels
}

/// Sorted, merged breakpoints; a point is singular if any source says so.
fn merge_points(mut points: Vec<(f64, bool)>) -> Vec<(f64, bool)> {
    points.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, bool)> = Vec::with_capacity(points.len());
    for (x, s) in points {
        match out.last_mut() {
            Some(last) if last.0 == x => last.1 |= s,
            _ => out.push((x, s)),
        }
    }
    out
}

struct PanelAcc {
    value: NeumaierSum,
    err: NeumaierSum,
    error: Option<Error>,
}

/// Integrates `f` over every panel, declaring logarithmic singularities at
/// the flagged endpoints. The first failing panel (in t order) is reported.
fn integrate_panels<F: Fn(f64) -> f64 + Sync>(f: F, panels: &[Panel], spec: &QuadratureSpec) -> Result<Estimate> {
    let acc = block_reduce(
        panels.len(),
        || PanelAcc { value: NeumaierSum::new(), err: NeumaierSum::new(), error: None },
        |range, acc| {
            for p in &panels[range] {
                let mut s = spec.clone();
                if p.singular_a {
                    s = s.with_singularity(p.a);
                }
                if p.singular_b {
                    s = s.with_singularity(p.b);
                }
                match integrate(&f, p.a, p.b, &s) {
                    Ok((v, e)) => {
                        acc.value.add(v);
                        acc.err.add(e);
                    }
                    Err(source) => {
                        acc.error = Some(Error::Gap { a: p.a, b: p.b, source: Box::new(source) });
                        return;
                    }
                }
            }
        },
        |acc, part| {
            if acc.error.is_none() {
                acc.error = part.error;
            }
            acc.value.merge(&part.value);
            acc.err.merge(&part.err);
        },
    );
    match acc.error {
        Some(e) => Err(e),
        None => Ok(Estimate { value: acc.value.value(), err_est: acc.err.value() }),
    }
}

/// ∫₀^T log²|ζ(½+it)| dt.
///
/// [0, 10) is one smooth panel; above it the range is cut at every zero,
/// each cut declared a logarithmic singularity. `spec` tolerances apply per
/// panel and the panel error estimates are summed.
pub fn empirical_log_moment(t: f64, table: &ZeroTable, spec: &QuadratureSpec) -> Result<Estimate> {
    check_height(t, 20.0)?;
    table.require_height(t)?;
    let mut points = vec![(0.0, false), (10.0, false), (t, false)];
    points.extend(table.up_to(t).iter().filter(|&&g| g > 0.0 && g < t).map(|&g| (g, true)));
    let panels = panels_from(&merge_points(points));
    integrate_panels(
        |s| {
            let l = log_abs_zeta(s);
            l * l
        },
        &panels,
        spec,
    )
}

/// ∫₀^T [log|ζ(½+i(t+Δ))| − log|ζ(½+it)|]² dt with breakpoints {γ} ∪ {γ − Δ}.
pub fn empirical_log_increment_variance(t: f64, delta: f64, table: &ZeroTable, spec: &QuadratureSpec) -> Result<Estimate> {
    check_height(t, 20.0)?;
    if !(delta >= 0.0 && delta.is_finite()) {
        return domain(format!("delta = {delta} must be >= 0"));
    }
    if delta == 0.0 {
        return Ok(Estimate { value: 0.0, err_est: 0.0 });
    }
    table.require_height(t + delta)?;
    let mut points = vec![(0.0, false), (t, false)];
    for &g in table.up_to(t + delta) {
        if g < t {
            points.push((g, true));
        }
        if g - delta > 0.0 && g - delta < t {
            points.push((g - delta, true));
        }
    }
    let panels = panels_from(&merge_points(points));
    integrate_panels(
        |s| {
            let d = log_abs_zeta(s + delta) - log_abs_zeta(s);
            d * d
        },
        &panels,
        spec,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// The integral over [0, T] itself.
    Raw,
    /// The integral divided by T.
    PerT,
}

/// Which side of the variance statement a prediction is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// log|ζ(½+it)| increments, prefactor 1.
    LogZeta,
    /// S(t) increments, prefactor 1/π².
    ArgS,
}

impl Target {
    pub fn prefactor(self) -> f64 {
        match self {
            Target::LogZeta => 1.0,
            Target::ArgS => 1.0 / (PI * PI),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionBreakdown {
    pub name: String,
    pub total: f64,
    pub terms: BTreeMap<String, f64>,
    pub assumptions: Vec<String>,
    #[serde(rename = "T")]
    pub t: f64,
    pub delta: f64,
    pub normalization: Normalization,
    /// Numerical error carried by the data-derived terms.
    pub err_est: f64,
}

impl PredictionBreakdown {
    pub fn new(
        name: &str,
        t: f64,
        delta: f64,
        normalization: Normalization,
        terms: &[(&str, f64)],
        assumptions: &[&str],
        err_est: f64,
    ) -> Self {
        let mut map = BTreeMap::new();
        for &(k, v) in terms {
            map.insert(k.to_string(), v);
        }
        let total = map.values().copied().collect::<NeumaierSum>().value();
        Self {
            name: name.to_string(),
            total,
            terms: map,
            assumptions: assumptions.iter().map(|s| s.to_string()).collect(),
            t,
            delta,
            normalization,
            err_est,
        }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.get(name).copied()
    }
}

/// (T/2) log log T + aT with a = goldston_a(f_tail).
pub fn predict_thm_1_1(t: f64, f_tail: f64) -> Result<PredictionBreakdown> {
    check_height(t, 20.0)?;
    Ok(PredictionBreakdown::new(
        "thm_1_1",
        t,
        0.0,
        Normalization::Raw,
        &[("selberg_main", 0.5 * t * t.ln().ln()), ("a_times_T", goldston_a(f_tail) * t)],
        &[RH],
        0.0,
    ))
}

/// [`predict_thm_1_1`] with ∫₁^A F/α² from the zeros; the remainder
/// ∫_A^∞ dα/α² = 1/A is added as a labeled term when `conjectural` is set.
pub fn predict_thm_1_1_from_data(t: f64, f: &FIntegral, conjectural: bool) -> Result<PredictionBreakdown> {
    check_height(t, 20.0)?;
    let mut terms = vec![("selberg_main", 0.5 * t * t.ln().ln()), ("a_times_T", goldston_a(f.value) * t)];
    let mut assumptions = vec![RH];
    if conjectural {
        terms.push(("conjectural_tail", 0.5 * f.conjectural_tail * t));
        assumptions.push(STRONG_PC);
    }
    Ok(PredictionBreakdown::new("thm_1_1", t, 0.0, Normalization::Raw, &terms, &assumptions, 0.5 * f.err_est * t))
}

fn check_tail_matches(tail: &TailIntegral, delta: f64, t: f64) -> Result<()> {
    if !(delta > 0.0) {
        return domain(format!("delta = {delta} must be > 0"));
    }
    if tail.delta != delta || tail.t != t {
        return domain(format!(
            "tail integral was computed for delta = {}, T = {}, not delta = {delta}, T = {t}",
            tail.delta, tail.t
        ));
    }
    Ok(())
}

/// Shared tail handling: data tail always, conjectural remainder on request.
fn variance_prediction(
    name: &str,
    delta: f64,
    t: f64,
    prime_terms: &[(&str, f64)],
    tail: &TailIntegral,
    target: Target,
    conjectural: bool,
    extra_err: f64,
) -> PredictionBreakdown {
    let k = target.prefactor();
    let mut terms: Vec<(&str, f64)> = prime_terms.iter().map(|&(n, v)| (n, k * v)).collect();
    terms.push(("f_tail", k * tail.value));
    let mut assumptions = vec![RH];
    if conjectural {
        terms.push(("conjectural_tail", k * tail.conjectural_tail));
        assumptions.push(CHAN);
    }
    PredictionBreakdown::new(name, t, delta, Normalization::PerT, &terms, &assumptions, k * (tail.err_est + extra_err))
}

/// Bracket of the log-derivative formulation: (1/2i)∫₀^Δ[ζ′/ζ(1+it) − ζ′/ζ(1−it)
/// − 2i cos(t log T)/t]dt + C̃(Δ) + tail, with the Dirichlet series cut at x = T.
pub fn predict_thm_1_2(
    delta: f64,
    t: f64,
    mangoldt: &MangoldtTable,
    tail: &TailIntegral,
    target: Target,
    conjectural: bool,
) -> Result<PredictionBreakdown> {
    check_tail_matches(tail, delta, t)?;
    let integral = keating_integral(delta, t, t, mangoldt)?;
    let ct = c_tilde(delta, 1e-12)?;
    Ok(variance_prediction(
        "thm_1_2",
        delta,
        t,
        &[("keating_integral", integral), ("c_tilde", ct)],
        tail,
        target,
        conjectural,
        0.0,
    ))
}

/// Bracket Cin(Δ log T) + c(Δ) + tail.
pub fn predict_thm_1_3(
    delta: f64,
    t: f64,
    mangoldt: &MangoldtTable,
    tail: &TailIntegral,
    spec: &QuadratureSpec,
    target: Target,
    conjectural: bool,
) -> Result<PredictionBreakdown> {
    check_tail_matches(tail, delta, t)?;
    let c = c_of(delta, mangoldt, spec)?;
    Ok(variance_prediction(
        "thm_1_3",
        delta,
        t,
        &[("log_term", cin(delta * t.ln())), ("c_delta", c.value)],
        tail,
        target,
        conjectural,
        c.err_est,
    ))
}

/// Bracket Σ_{n≤T} Λ²(n)/(n log²n)(1 − cos(Δ log n)) + tail.
pub fn predict_thm_1_4(
    delta: f64,
    t: f64,
    mangoldt: &MangoldtTable,
    tail: &TailIntegral,
    target: Target,
    conjectural: bool,
) -> Result<PredictionBreakdown> {
    check_tail_matches(tail, delta, t)?;
    let p = prime_variance_sum(delta, t, mangoldt)?;
    Ok(variance_prediction("thm_1_4", delta, t, &[("prime_sum", p)], tail, target, conjectural, 0.0))
}

/// ∫_A^∞ (1 − cos(kα))/α² dα.
fn one_minus_cos_tail(k: f64, a: f64) -> f64 {
    1.0 / a - cos_over_square_tail(k, a)
}

/// (1/π²)[∫₀¹(1 − cos(αΔL))/α dα + ∫₁^A F(α)(1 − cos(αΔL))/α² dα], F from the
/// zeros; the remainder past A with F ≡ 1 is a labeled term when requested.
pub fn predict_fujii(
    delta: f64,
    t: f64,
    table: &ZeroTable,
    window: f64,
    alpha_max: f64,
    conjectural: bool,
) -> Result<PredictionBreakdown> {
    if !(0.0..=10.0).contains(&delta) {
        return domain(format!("predict_fujii: delta = {delta} must lie in [0, 10]"));
    }
    let k = 1.0 / (PI * PI);
    let l = t.ln();
    let f = f_weighted_integral(table, delta, t, alpha_max, window)?;
    let mut terms = vec![("log_term", k * cin(delta * l)), ("f_weighted", k * f.value)];
    let mut assumptions = vec![RH];
    if conjectural && delta > 0.0 {
        terms.push(("conjectural_tail", k * one_minus_cos_tail(delta * l, alpha_max)));
        assumptions.push(STRONG_PC);
    }
    Ok(PredictionBreakdown::new("fujii", t, delta, Normalization::PerT, &terms, &assumptions, k * f.err_est))
}

/// Fujii's prediction with F ≡ 1 on [1, ∞).
pub fn predict_fujii_model(delta: f64, t: f64) -> Result<PredictionBreakdown> {
    check_height(t, 1.0 + f64::EPSILON)?;
    if !(delta >= 0.0) {
        return domain(format!("delta = {delta} must be >= 0"));
    }
    let k = 1.0 / (PI * PI);
    let x = delta * t.ln();
    Ok(PredictionBreakdown::new(
        "fujii_model",
        t,
        delta,
        Normalization::PerT,
        &[("log_term", k * cin(x)), ("conjectural_tail", k * one_minus_cos_tail(x, 1.0))],
        &[RH, STRONG_PC],
        0.0,
    ))
}

/// x(π/2 − Si(x)) for x ≥ 0.
fn x_times_si_complement(x: f64) -> f64 {
    if x < 4.0 {
        x * (0.5 * PI - sine_integral(x))
    } else {
        let (f, g) = aux_fg(x);
        x * (f * x.cos() + g * x.sin())
    }
}

/// (1/π²)[log(2πδ) − Ci(2πδ) − 2πδ Si(2πδ) + π²δ − cos(2πδ) + 1 + γ₀], in the
/// cancellation-free form Cin(x) + x(π/2 − Si(x)) + 1 − cos x with x = 2πδ.
pub fn predict_berry_universal(small_delta: f64) -> Result<f64> {
    if !(small_delta > 0.0 && small_delta.is_finite()) {
        return domain(format!("predict_berry_universal: delta = {small_delta} must be > 0"));
    }
    let x = TAU * small_delta;
    let s = (0.5 * x).sin();
    Ok((cin(x) + x_times_si_complement(x) + 2.0 * s * s) / (PI * PI))
}

/// log(2πδ) − Ci(2πδ) + γ₀ evaluated term by term; the logarithms cancel
/// to O(δ²) as δ → 0.
pub fn berry_log_cancellation(small_delta: f64) -> Result<f64> {
    let x = TAU * small_delta;
    Ok(x.ln() - cosine_integral(x)? + EULER_GAMMA)
}

/// (1/π²)[Σ_{n≤T} Λ²(n)/(n log²n)(1 − cos(2πδ log n/log T)) + 1].
pub fn predict_berry_nonuniversal(big_delta_units: f64, t: f64, mangoldt: &MangoldtTable) -> Result<PredictionBreakdown> {
    check_height(t, 2.0)?;
    if !(big_delta_units >= 0.0) {
        return domain(format!("delta = {big_delta_units} must be >= 0"));
    }
    let k = 1.0 / (PI * PI);
    let delta = TAU * big_delta_units / t.ln();
    let p = prime_variance_sum(delta, t.floor(), mangoldt)?;
    Ok(PredictionBreakdown::new(
        "berry_nonuniversal",
        t,
        delta,
        Normalization::PerT,
        &[("prime_sum", k * p), ("conjectural_tail", k)],
        &[RH, CHAN, BERRY],
        0.0,
    ))
}

/// Berry's V(L; x) with both brackets as written; prime powers p^r < (E/2π)^τ*.
pub fn berry_full_v(l: f64, e: f64, tau_star: f64, mangoldt: &MangoldtTable) -> Result<f64> {
    if !(l > 0.0 && e > TAU && tau_star > 0.0) {
        return domain(format!("berry_full_v: need L > 0, E > 2π, tau* > 0 (got {l}, {e}, {tau_star})"));
    }
    let log_e = (e / TAU).ln();
    let x_max = (tau_star * log_e).exp();
    mangoldt.require(x_max)?;
    let freq = PI * l / log_e;
    let mut s = NeumaierSum::new();
    for pp in mangoldt.prime_powers_up_to(x_max) {
        let n = pp.n as f64;
        if n >= x_max {
            break;
        }
        let r = f64::from(pp.m);
        let sn = (freq * r * (pp.p as f64).ln()).sin();
        s.add(2.0 * sn * sn / (r * r * n));
    }
    let universal = predict_berry_universal(l)?;
    let prime_bracket = s.value() - cin(TAU * l * tau_star);
    Ok(universal + prime_bracket / (PI * PI))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    pub prediction: f64,
    pub difference: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    /// Empirical value in the report's normalization.
    pub empirical: f64,
    pub empirical_raw: f64,
    pub predictions: Vec<PredictionBreakdown>,
    pub rows: Vec<ComparisonRow>,
    pub normalization: Normalization,
    #[serde(rename = "T")]
    pub t: f64,
    pub params: BTreeMap<String, f64>,
}

/// Joins a raw empirical integral over [0, T] with predictions sharing one
/// normalization; per_T divides the empirical value by T once.
pub fn compare(
    empirical_raw: f64,
    predictions: Vec<PredictionBreakdown>,
    t: f64,
    params: BTreeMap<String, f64>,
) -> Result<ComparisonReport> {
    check_height(t, f64::MIN_POSITIVE)?;
    let normalization = predictions.first().map_or(Normalization::PerT, |p| p.normalization);
    for p in &predictions {
        if p.normalization != normalization {
            return Err(Error::Normalization(format!(
                "{} is {:?} but {} is {:?}",
                p.name, p.normalization, predictions[0].name, normalization
            )));
        }
        if p.t != t {
            return Err(Error::Normalization(format!("{} was computed at T = {}, report is at T = {t}", p.name, p.t)));
        }
    }
    let empirical = match normalization {
        Normalization::Raw => empirical_raw,
        Normalization::PerT => empirical_raw / t,
    };
    let rows = predictions
        .iter()
        .map(|p| ComparisonRow {
            name: p.name.clone(),
            prediction: p.total,
            difference: p.total - empirical,
            relative_error: (p.total - empirical).abs() / empirical.abs(),
        })
        .collect();
    Ok(ComparisonReport { empirical, empirical_raw, predictions, rows, normalization, t, params })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepresentationCheck {
    pub t: f64,
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub zero_term: f64,
    pub prime_term: f64,
    pub log_term: f64,
    /// C√x/(t log²x) plus the bound on zeros beyond the summation reach.
    pub envelope: f64,
}

impl RepresentationCheck {
    pub fn passes(&self) -> bool {
        (self.lhs - self.rhs).abs() <= self.envelope
    }
}

/// Rebuilds log|ζ(½+it)| from −Σ_γ h((γ − t)log x) over ±γ, the prime sum
/// Σ_{n≤x} Λ(n)cos(t log n)/(√n log n)·f(log n/log x) and log 2·log(t/2π)/(2 log x).
///
/// Zeros with |γ ∓ t| > 60 are not summed; their bound is added to the envelope.
pub fn representation_check(t: f64, x: f64, zeros: &ZeroTable, mangoldt: &MangoldtTable) -> Result<RepresentationCheck> {
    if !(x >= 4.0 && t >= 1.0) {
        return domain(format!("representation_check: need x >= 4 and t >= 1 (got x = {x}, t = {t})"));
    }
    let reach = t + REPRESENTATION_REACH;
    zeros.require_height(reach)?;
    mangoldt.require(x)?;
    let lx = x.ln();
    let ords = zeros.ordinates();
    let lo = ords.partition_point(|&g| g < t - REPRESENTATION_REACH);
    let hi = ords.partition_point(|&g| g <= reach);
    let mut zero_sum = NeumaierSum::new();
    for &g in &ords[lo..hi] {
        zero_sum.add(h_weight((g - t) * lx)?);
    }
    for &g in ords.iter().take_while(|&&g| g < REPRESENTATION_REACH - t) {
        zero_sum.add(h_weight((-g - t) * lx)?);
    }
    let mut prime_sum = NeumaierSum::new();
    for pp in mangoldt.prime_powers_up_to(x) {
        let n = pp.n as f64;
        let ln = n.ln();
        let lambda = (pp.p as f64).ln();
        prime_sum.add(lambda * (t * ln).cos() / (n.sqrt() * ln) * f_weight(ln / lx)?);
    }
    let log_term = std::f64::consts::LN_2 * (t / TAU).ln() / (2.0 * lx);
    let zero_term = -zero_sum.value();
    let prime_term = prime_sum.value();
    // |h(u)| ≤ 2G/u²: the unsummed table zeros are bounded term by term,
    // zeros above the table through the density log(g/2π)/2π.
    let mut far = NeumaierSum::new();
    for (i, &g) in ords.iter().enumerate() {
        if i < lo || i >= hi {
            far.add(1.0 / ((g - t) * (g - t)));
        }
        if g + t >= REPRESENTATION_REACH {
            far.add(1.0 / ((g + t) * (g + t)));
        }
    }
    let u = zeros.covered_height();
    let beyond = ((u / TAU).ln() / (u - t) + (u / (u - t)).ln() / t) / TAU;
    let tail = H_TAIL_CONSTANT / (lx * lx) * (far.value() + 2.0 * beyond);
    let envelope = REPRESENTATION_ENVELOPE * x.sqrt() / (t * lx * lx) + tail;
    Ok(RepresentationCheck {
        t,
        x,
        lhs: log_abs_zeta_any(t),
        rhs: zero_term + prime_term + log_term,
        zero_term,
        prime_term,
        log_term,
        envelope,
    })
}
