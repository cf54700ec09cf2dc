//! Special functions and the quadrature engine.

mod quad;
mod sici;
mod weights;

pub use quad::{gauss_legendre8, integrate, QuadratureSpec, Singularity};
pub use sici::{aux_fg, cin, cos_over_square, cos_over_square_tail, cosine_integral, sine_integral};
pub use weights::{f_weight, g_weight, h_hat, h_weight, k_of};

/// Euler's constant γ₀.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

/// First Stieltjes constant γ₁.
pub const STIELTJES_1: f64 = -0.072_815_845_483_676_724_86;
