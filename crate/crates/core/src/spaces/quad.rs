// Quadrature building blocks: graded Gauss-Legendre panels on [0, 1],
// Gauss-Jacobi rules for (1 - s)^alpha, adaptive trapezoid circle means.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi, GaussLegendre};
use num_complex::Complex64;

/// Nodes per panel of the graded path rule.
pub const PATH_NODES: usize = 16;
const MAX_PANELS: u32 = 60;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn legendre(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("positive node count"));
    rule.as_node_weight_pairs().to_vec()
}

fn path_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre(PATH_NODES))
}

/// Gauss-Jacobi nodes and weights on [-1, 1] for the weight `(1 - x)^alpha`.
pub fn jacobi(n: usize, alpha: f64) -> Vec<(f64, f64)> {
    if alpha == 0.0 {
        return legendre(n);
    }
    let a = FiniteAboveNegOneF64::new(alpha).expect("alpha > -1");
    let rule = GaussJacobi::new(NonZeroUsize::new(n).expect("positive node count"), a, Default::default());
    rule.as_node_weight_pairs().to_vec()
}

/// Number of dyadic panels needed to resolve a singularity at distance
/// `gap` beyond `t = 1`.
pub fn panels_for_gap(gap: f64) -> u32 {
    if !(gap > 0.0) {
        return MAX_PANELS;
    }
    ((1.0 / gap).log2().ceil().max(0.0) as u32 + 3).clamp(3, MAX_PANELS)
}

/// Breakpoints `0, 1/2, 3/4, ..., 1 - 2^-k, 1`.
pub fn dyadic_breakpoints(k: u32) -> Vec<f64> {
    let mut b: Vec<f64> = (0..=k).map(|i| 1.0 - (-(i as f64)).exp2()).collect();
    b[0] = 0.0;
    b.push(1.0);
    b
}

/// `int_0^1 g(t) dt` on dyadic panels graded towards `t = 1`.
pub fn graded_integral<E>(
    panels: u32,
    mut g: impl FnMut(f64) -> Result<Complex64, E>,
) -> Result<Complex64, E> {
    let rule = path_rule();
    let b = dyadic_breakpoints(panels);
    let mut total = Complex64::new(0.0, 0.0);
    for w in b.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let mut panel = Complex64::new(0.0, 0.0);
        for &(x, wt) in rule {
            panel += g(mid + half * x)? * wt;
        }
        total += panel * half;
    }
    Ok(total)
}

/// Result of an adaptive circle mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleMean {
    pub mean: f64,
    pub points: usize,
    pub converged: bool,
}

/// Mean of `h(theta)` over `[0, 2 pi)` by the trapezoid rule, doubling the
/// point count from `m0` until the relative change drops below `rel_tol`.
pub fn circle_mean<E>(
    m0: usize,
    max_m: usize,
    rel_tol: f64,
    mut h: impl FnMut(f64) -> Result<f64, E>,
) -> Result<CircleMean, E> {
    let tau = std::f64::consts::TAU;
    let mut m = m0.max(1);
    let mut sum = 0.0;
    for k in 0..m {
        sum += h(tau * k as f64 / m as f64)?;
    }
    let mut mean = sum / m as f64;
    while 2 * m <= max_m {
        let mut extra = 0.0;
        for k in 0..m {
            extra += h(tau * (2 * k + 1) as f64 / (2 * m) as f64)?;
        }
        sum += extra;
        m *= 2;
        let next = sum / m as f64;
        let change = (next - mean).abs();
        mean = next;
        if !mean.is_finite() {
            break;
        }
        if change <= rel_tol * mean.abs() {
            return Ok(CircleMean {
                mean,
                points: m,
                converged: true,
            });
        }
    }
    Ok(CircleMean {
        mean,
        points: m,
        converged: false,
    })
}
