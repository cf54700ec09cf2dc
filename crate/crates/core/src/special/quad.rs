//! Globally adaptive Gauss–Kronrod quadrature with endpoint transforms for
//! logarithmic singularities and semi-infinite ranges.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Singularity {
    None,
    Logarithmic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub singular_endpoints: Vec<(f64, Singularity)>,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Self {
        Self { abs_tol, rel_tol, max_subdivisions, singular_endpoints: Vec::new() }
    }

    pub fn with_singularity(mut self, at: f64) -> Self {
        self.singular_endpoints.push((at, Singularity::Logarithmic));
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return domain("quadrature tolerances must be > 0");
        }
        if self.max_subdivisions < 1 {
            return domain("max_subdivisions must be >= 1");
        }
        Ok(())
    }

    fn is_singular(&self, x: f64) -> bool {
        self.singular_endpoints
            .iter()
            .any(|&(p, s)| s == Singularity::Logarithmic && p == x)
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::new(1e-10, 1e-10, 2000)
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One 15-point Kronrod panel: (estimate, error estimate).
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let resasc = resasc * h.abs();
    let resabs = resabs * h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (resk * h, err)
}

#[derive(Debug, PartialEq)]
struct Panel {
    err: f64,
    value: f64,
    piece: usize,
    a: f64,
    b: f64,
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err
            .total_cmp(&other.err)
            .then(other.a.total_cmp(&self.a))
            .then(other.piece.cmp(&self.piece))
    }
}

/// A subrange after the change of variables, integrated over `[lo, hi]`.
enum Piece {
    Plain { a: f64, b: f64 },
    /// t = base + sign·width·e^{−u}, u = (1−s)/s, s ∈ [s_min, 1].
    LogEnd { base: f64, sign: f64, width: f64 },
    /// t = a + (1−s)/s, s ∈ (0, 1].
    Infinite { a: f64 },
}

/// Largest u for which base + width·e^{−u} is still distinct from base.
fn log_cutoff(base: f64, width: f64) -> f64 {
    let floor = (base.abs() * 4.0 * f64::EPSILON).max(1e-300);
    (width / floor).ln().clamp(1.0, 700.0)
}

impl Piece {
    fn range(&self) -> (f64, f64) {
        match self {
            Piece::Plain { a, b } => (*a, *b),
            Piece::LogEnd { base, width, .. } => (1.0 / (1.0 + log_cutoff(*base, *width)), 1.0),
            Piece::Infinite { .. } => (0.0, 1.0),
        }
    }

    fn eval<F: Fn(f64) -> f64>(&self, f: &F, s: f64) -> f64 {
        match *self {
            Piece::Plain { .. } => f(s),
            Piece::LogEnd { base, sign, width } => {
                let u = (1.0 - s) / s;
                let e = (-u).exp() * width;
                let v = f(base + sign * e) * e / (s * s);
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            }
            Piece::Infinite { a } => {
                if s == 0.0 {
                    return 0.0;
                }
                f(a + (1.0 - s) / s) / (s * s)
            }
        }
    }

    /// Size estimate of what the u-cutoff discards.
    fn truncation<F: Fn(f64) -> f64>(&self, f: &F) -> f64 {
        match *self {
            Piece::LogEnd { base, sign, width } => {
                let u = log_cutoff(base, width);
                let e = (-u).exp() * width;
                let v = f(base + sign * e);
                if v.is_finite() {
                    2.0 * v.abs() * e
                } else {
                    0.0
                }
            }
            _ => 0.0,
        }
    }
}

fn build_pieces(a: f64, b: f64, spec: &QuadratureSpec, out: &mut Vec<Piece>) {
    if b.is_infinite() {
        if spec.is_singular(a) {
            build_pieces(a, a + 1.0, spec, out);
            out.push(Piece::Infinite { a: a + 1.0 });
        } else {
            out.push(Piece::Infinite { a });
        }
        return;
    }
    match (spec.is_singular(a), spec.is_singular(b)) {
        (false, false) => out.push(Piece::Plain { a, b }),
        (true, false) => out.push(Piece::LogEnd { base: a, sign: 1.0, width: b - a }),
        (false, true) => out.push(Piece::LogEnd { base: b, sign: -1.0, width: b - a }),
        (true, true) => {
            let m = 0.5 * (a + b);
            out.push(Piece::LogEnd { base: a, sign: 1.0, width: m - a });
            out.push(Piece::LogEnd { base: b, sign: -1.0, width: b - m });
        }
    }
}

/// Adaptive integral of `f` over `[a, b]`; `b` may be `+∞`. Singular points
/// declared in `spec` at an endpoint get the exponential substitution, those
/// strictly inside split the range.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    if !(a.is_finite() && a < b) {
        return domain(format!("integrate: need finite a < b, got [{a}, {b}]"));
    }
    let mut cuts: Vec<f64> = spec
        .singular_endpoints
        .iter()
        .filter(|&&(p, s)| s == Singularity::Logarithmic && p > a && p < b)
        .map(|&(p, _)| p)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut pieces = Vec::new();
    let mut lo = a;
    for &c in &cuts {
        build_pieces(lo, c, spec, &mut pieces);
        lo = c;
    }
    build_pieces(lo, b, spec, &mut pieces);

    let trunc: f64 = pieces.iter().map(|p| p.truncation(&f)).sum();
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for (i, p) in pieces.iter().enumerate() {
        let (lo, hi) = p.range();
        let g = |s: f64| p.eval(&f, s);
        let (v, e) = kronrod15(&g, lo, hi);
        total += v;
        total_err += e;
        heap.push(Panel { err: e, value: v, piece: i, a: lo, b: hi });
    }

    let mut subdivisions = 0;
    let mut frozen: Vec<Panel> = Vec::new();
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Quadrature { value: total, err_est: total_err, subdivisions });
        }
        let tol = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err + trunc <= tol {
            break;
        }
        let Some(top) = heap.pop() else { break };
        if subdivisions >= spec.max_subdivisions {
            heap.push(top);
            return Err(Error::Quadrature { value: total, err_est: total_err + trunc, subdivisions });
        }
        let m = 0.5 * (top.a + top.b);
        if !(m > top.a && m < top.b) || (top.b - top.a) < 4.0 * f64::EPSILON * m.abs().max(1e-300) {
            // Panel too narrow to split; keep its error but stop refining it.
            frozen.push(top);
            continue;
        }
        let p = &pieces[top.piece];
        let g = |s: f64| p.eval(&f, s);
        let (v1, e1) = kronrod15(&g, top.a, m);
        let (v2, e2) = kronrod15(&g, m, top.b);
        total += v1 + v2 - top.value;
        total_err += e1 + e2 - top.err;
        subdivisions += 1;
        heap.push(Panel { err: e1, value: v1, piece: top.piece, a: top.a, b: m });
        heap.push(Panel { err: e2, value: v2, piece: top.piece, a: m, b: top.b });
    }
    // Re-add the panel values in a fixed order to shed drift from the
    // running updates.
    let stalled = !frozen.is_empty();
    let mut panels = heap.into_vec();
    panels.append(&mut frozen);
    panels.sort_by(|x, y| x.piece.cmp(&y.piece).then(x.a.total_cmp(&y.a)));
    let value = crate::sum::compensated_sum(panels.iter().map(|p| p.value));
    let err = crate::sum::compensated_sum(panels.iter().map(|p| p.err)) + trunc;
    let tol = spec.abs_tol.max(spec.rel_tol * value.abs());
    if stalled && err > tol {
        return Err(Error::Quadrature { value, err_est: err, subdivisions });
    }
    Ok((value, err))
}

const GL8_X: [f64; 4] = [
    0.183434642495649804939476142360184,
    0.525532409916328985817739049189246,
    0.796666477413626739591553936475831,
    0.960289856497536231683560868569473,
];
const GL8_W: [f64; 4] = [
    0.362683783378361982965150449277196,
    0.313706645877887287337962201986601,
    0.222381034453374470544355994426241,
    0.101228536290376259152531354309962,
];

/// Fixed 8-point Gauss–Legendre rule on `[a, b]`.
#[inline]
pub fn gauss_legendre8<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for j in 0..4 {
        let d = h * GL8_X[j];
        s += GL8_W[j] * (f(c - d) + f(c + d));
    }
    s * h
}
