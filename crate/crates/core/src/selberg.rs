//! Real and complex Selberg integrals: Γ-product closed forms checked against
//! quadrature at small `n`.
//!
//! Real: `S_n(α,β,ρ) = ∫_{[0,1]^n} Π x_j^{α−1}(1−x_j)^{β−1} Π_{j<k} |x_j − x_k|^{2ρ} dx`
//! `= Π_{j<n} Γ(α+jρ) Γ(β+jρ) Γ(1+(j+1)ρ) / (Γ(α+β+(n+j−1)ρ) Γ(1+ρ))`.
//!
//! Complex, `n = 1`: `∫_ℂ |z|^{2α−2} |1−z|^{2β−2} dA = π γ(α) γ(β) / γ(α+β)`; the general
//! product replaces Γ by γ and carries a factor `π^n`.

use std::num::NonZeroUsize;

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi, GaussLegendre};
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigreal::{BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::specialfn::{gamma, gamma_ratio};

/// Default Gauss–Jacobi degree per dimension (even; doubled once for the convergence check).
pub const DEFAULT_NODES: usize = 200;
const REAL_AGREEMENT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SelbergParams {
    pub alpha: Rational64,
    pub beta: Rational64,
    pub rho: Rational64,
    pub n: u32,
}

impl SelbergParams {
    pub fn new(alpha: Rational64, beta: Rational64, rho: Rational64, n: u32) -> Self {
        Self { alpha, beta, rho, n }
    }

    fn domain(&self, why: &str) -> Error {
        Error::Domain {
            function: "selberg",
            value: format!("α={}, β={}, ρ={}, n={} ({why})", self.alpha, self.beta, self.rho, self.n),
        }
    }

    /// `α, β > 0`, `ρ ≥ 0`, `n ≥ 1`.
    pub fn check_real(&self) -> Result<()> {
        if self.n == 0 {
            return Err(self.domain("n must be positive"));
        }
        if !self.alpha.is_positive() || !self.beta.is_positive() || self.rho.is_negative() {
            return Err(self.domain("need α, β > 0 and ρ ≥ 0"));
        }
        Ok(())
    }

    /// `n = 1`, `α, β ∈ (0,1)`, `α + β < 1`.
    pub fn check_complex_quadrature(&self) -> Result<()> {
        let one = Rational64::one();
        if self.n != 1 {
            return Err(self.domain("complex quadrature needs n = 1"));
        }
        if !self.alpha.is_positive() || !self.beta.is_positive() || self.alpha + self.beta >= one {
            return Err(self.domain("need α, β > 0 and α + β < 1"));
        }
        Ok(())
    }
}

/// Selberg's product formula.
pub fn selberg_real_closed(p: &SelbergParams, ctx: PrecisionContext) -> Result<BigReal> {
    p.check_real()?;
    let one = Rational64::one();
    let mut acc = BigReal::one(ctx);
    for j in 0..p.n as i64 {
        let jr = p.rho * j;
        let num = gamma(p.alpha + jr, ctx)? * gamma(p.beta + jr, ctx)? * gamma(one + p.rho * (j + 1), ctx)?;
        let den = gamma(p.alpha + p.beta + p.rho * (p.n as i64 + j - 1), ctx)? * gamma(one + p.rho, ctx)?;
        acc = acc * num / den;
    }
    Ok(acc)
}

/// `π^n Π_{j<n} γ(1+(j+1)ρ) γ(α+jρ) γ(β+jρ) / (γ(1+ρ) γ(α+β+(n+j−1)ρ))`.
pub fn selberg_complex_closed(p: &SelbergParams, ctx: PrecisionContext) -> Result<BigReal> {
    if p.n == 0 {
        return Err(p.domain("n must be positive"));
    }
    let wrap = |r: Result<BigReal>| r.map_err(|_| p.domain("γ argument at a pole"));
    let pi = BigReal::pi(ctx);
    if p.n == 1 {
        let v = wrap(gamma_ratio(p.alpha, ctx))? * wrap(gamma_ratio(p.beta, ctx))? / wrap(gamma_ratio(p.alpha + p.beta, ctx))?;
        return Ok(pi * v);
    }
    let one = Rational64::one();
    let mut acc = pi.powi(p.n as i64);
    for j in 0..p.n as i64 {
        let jr = p.rho * j;
        let num = wrap(gamma_ratio(one + p.rho * (j + 1), ctx))?
            * wrap(gamma_ratio(p.alpha + jr, ctx))?
            * wrap(gamma_ratio(p.beta + jr, ctx))?;
        let den = wrap(gamma_ratio(one + p.rho, ctx))? * wrap(gamma_ratio(p.alpha + p.beta + p.rho * (p.n as i64 + j - 1), ctx))?;
        acc = acc * num / den;
    }
    Ok(acc)
}

/// Nodes and weights on `[0,1]` for `∫_0^1 t^a (1−t)^b g(t) dt ≈ Σ w_i g(t_i)`.
fn jacobi01(nodes: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    if (a + b + 1.0).abs() < 1e-9 {
        // gauss-quad divides 0 by 0 when a + b = −1; (1−t)^b = (1−t)^{b+1} + t(1−t)^b
        // splits the weight into two rules with exponent sum 0
        let mut rule = jacobi01(nodes, a, b + 1.0);
        rule.extend(jacobi01(nodes, a + 1.0, b));
        return rule;
    }
    let deg = NonZeroUsize::new(nodes + nodes % 2).expect("positive");
    let fa = FiniteAboveNegOneF64::new(a).expect("exponent above -1");
    let fb = FiniteAboveNegOneF64::new(b).expect("exponent above -1");
    // weight (1−x)^b (1+x)^a on [−1,1]; t = (x+1)/2
    let rule = GaussJacobi::new(deg, fb, fa);
    let scale = 2f64.powf(a + b + 1.0);
    rule.as_node_weight_pairs().iter().map(|&(x, w)| ((x + 1.0) / 2.0, w / scale)).collect()
}

fn legendre(nodes: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(NonZeroUsize::new(nodes).expect("positive")).as_node_weight_pairs().to_vec()
}

fn mapped(rule: &[(f64, f64)], lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let half = (hi - lo) / 2.0;
    rule.iter().map(move |&(x, w)| (lo + half * (x + 1.0), w * half))
}

fn to_f64(r: Rational64) -> f64 {
    r.to_f64().expect("finite rational")
}

/// Real Selberg integral for `n ∈ {1, 2}` at a given degree.
///
/// For `n = 2` the square is halved by symmetry and split along `x = 1 − y`; each half is
/// sent to the unit square so that every endpoint singularity becomes a Jacobi weight:
/// `I = 2(A + B)` with
/// `A = ∫∫ p^{2β−1+2ρ}(1−p)^{2α−1+2ρ} w^{2ρ} (1−pw)^{α−1} (1+w−pw)^{β−1}` and
/// `B = ∫∫ q^{2β−1+2ρ}(1−q)^{α−1} w^{β−1} (1−qw)^{2α−1+2ρ} (1+w−qw)^{β−1}`.
pub fn selberg_real_quadrature_with(p: &SelbergParams, nodes: usize) -> Result<f64> {
    p.check_real()?;
    let (a, b, r) = (to_f64(p.alpha), to_f64(p.beta), to_f64(p.rho));
    match p.n {
        1 => Ok(jacobi01(nodes, a - 1.0, b - 1.0).iter().map(|(_, w)| w).sum()),
        2 => {
            let pa = jacobi01(nodes, 2.0 * b - 1.0 + 2.0 * r, 2.0 * a - 1.0 + 2.0 * r);
            let wa = jacobi01(nodes, 2.0 * r, 0.0);
            let mut part_a = 0.0;
            for &(x, wx) in &pa {
                for &(w, ww) in &wa {
                    part_a += wx * ww * (1.0 - x * w).powf(a - 1.0) * (1.0 + w - x * w).powf(b - 1.0);
                }
            }
            let qb = jacobi01(nodes, 2.0 * b - 1.0 + 2.0 * r, a - 1.0);
            let wb = jacobi01(nodes, b - 1.0, 0.0);
            let mut part_b = 0.0;
            for &(q, wq) in &qb {
                for &(w, ww) in &wb {
                    part_b += wq * ww * (1.0 - q * w).powf(2.0 * a - 1.0 + 2.0 * r) * (1.0 + w - q * w).powf(b - 1.0);
                }
            }
            Ok(2.0 * (part_a + part_b))
        }
        _ => Err(p.domain("quadrature supports n ≤ 2")),
    }
}

fn converged(coarse: f64, fine: f64, limit: f64) -> Result<f64> {
    let diff = ((fine - coarse) / fine).abs();
    if diff.is_finite() && diff <= limit {
        Ok(fine)
    } else {
        Err(Error::QuadratureNotConverged(diff))
    }
}

/// Real Selberg integral by tensor Gauss–Jacobi quadrature, checked by doubling the degree.
pub fn selberg_real_quadrature(p: &SelbergParams, ctx: PrecisionContext) -> Result<BigReal> {
    let coarse = selberg_real_quadrature_with(p, DEFAULT_NODES / 2)?;
    let fine = selberg_real_quadrature_with(p, DEFAULT_NODES)?;
    Ok(BigReal::from_f64(converged(coarse, fine, REAL_AGREEMENT)?, ctx))
}

/// `∫_{Re z < 1/2} |z|^{2α−2} |1−z|^{2β−2} dA`, in polar coordinates inside `|z| = 2` and
/// with `r = 2/s` outside.
fn half_plane(a: f64, b: f64, nodes: usize) -> f64 {
    let theta_star = 0.25f64.acos();
    let pi = std::f64::consts::PI;
    let radial = jacobi01(nodes, 2.0 * a - 1.0, 0.0);
    let angular = legendre(nodes);
    let h = |r: f64, c: f64| (1.0 - 2.0 * r * c + r * r).powf(b - 1.0);

    let mut inner = 0.0;
    for (lo, hi) in [(0.0, theta_star), (theta_star, pi)] {
        for (theta, wt) in mapped(&angular, lo, hi) {
            let c = theta.cos();
            let big_r = if c >= 0.25 { 0.5 / c } else { 2.0 };
            let s: f64 = radial.iter().map(|&(u, wu)| wu * h(big_r * u, c)).sum();
            inner += wt * big_r.powf(2.0 * a) * s;
        }
    }

    let outer_s = jacobi01(nodes, 1.0 - 2.0 * a - 2.0 * b, 0.0);
    let mut outer = 0.0;
    for &(s, ws) in &outer_s {
        let lo = (s / 4.0).acos();
        let t: f64 = mapped(&angular, lo, pi)
            .map(|(theta, wt)| {
                let d = s * s / 4.0 - s * theta.cos() + 1.0;
                wt * d.powf(b - 1.0)
            })
            .sum();
        outer += ws * t;
    }
    outer *= 2f64.powf(2.0 * a + 2.0 * b - 2.0);
    2.0 * (inner + outer)
}

/// Complex Selberg integral for `n = 1` at a given degree; `z ↦ 1 − z` swaps the halves.
pub fn selberg_complex_quadrature_with(p: &SelbergParams, nodes: usize) -> Result<f64> {
    p.check_complex_quadrature()?;
    let (a, b) = (to_f64(p.alpha), to_f64(p.beta));
    Ok(half_plane(a, b, nodes) + half_plane(b, a, nodes))
}

pub fn selberg_complex_quadrature(p: &SelbergParams, ctx: PrecisionContext) -> Result<BigReal> {
    let coarse = selberg_complex_quadrature_with(p, DEFAULT_NODES / 4)?;
    let fine = selberg_complex_quadrature_with(p, DEFAULT_NODES / 2)?;
    Ok(BigReal::from_f64(converged(coarse, fine, 1e-6)?, ctx))
}

/// Parameter grid for the real comparison: `(α, β, ρ)`, each used with `n = 1` and `n = 2`.
pub fn default_real_grid() -> Vec<(Rational64, Rational64, Rational64)> {
    let r = Rational64::new;
    vec![
        (r(1, 2), r(1, 2), r(1, 2)),
        (r(1, 3), r(1, 3), r(1, 3)),
        (r(1, 4), r(3, 4), r(1, 2)),
        (r(2, 1), r(3, 1), r(1, 1)),
        (r(3, 2), r(1, 2), r(1, 4)),
        (r(1, 2), r(1, 2), r(1, 10)),
        (r(1, 1), r(1, 1), r(1, 1)),
        (r(1, 1), r(2, 1), r(1, 2)),
        (r(5, 2), r(3, 2), r(3, 4)),
        (r(3, 4), r(5, 4), Rational64::zero()),
    ]
}

/// Parameter grid for the complex comparison: `(α, β)` with `α + β < 1`.
pub fn default_complex_grid() -> Vec<(Rational64, Rational64)> {
    let r = Rational64::new;
    vec![(r(1, 3), r(1, 3)), (r(1, 4), r(1, 2)), (r(1, 2), r(1, 4)), (r(1, 5), r(3, 5)), (r(1, 10), r(1, 5))]
}

/// One row of a closed-form vs quadrature comparison.
#[derive(Debug, Clone)]
pub struct SelbergComparison {
    pub params: SelbergParams,
    pub complex: bool,
    pub closed: BigReal,
    pub quadrature: BigReal,
    pub relative_error: f64,
}

pub fn compare_real(p: &SelbergParams, ctx: PrecisionContext) -> Result<SelbergComparison> {
    let closed = selberg_real_closed(p, ctx)?;
    let quadrature = selberg_real_quadrature(p, ctx)?;
    let relative_error = quadrature.relative_error(&closed).to_f64();
    Ok(SelbergComparison { params: *p, complex: false, closed, quadrature, relative_error })
}

pub fn compare_complex(p: &SelbergParams, ctx: PrecisionContext) -> Result<SelbergComparison> {
    let closed = selberg_complex_closed(p, ctx)?;
    let quadrature = selberg_complex_quadrature(p, ctx)?;
    let relative_error = quadrature.relative_error(&closed).to_f64();
    Ok(SelbergComparison { params: *p, complex: true, closed, quadrature, relative_error })
}
