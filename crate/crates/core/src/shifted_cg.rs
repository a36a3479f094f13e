//! Lanczos-CG with shifts.
//!
//! Solves the family `(B + λᵢ I) u = -g` for every entry of a geometric shift
//! ladder from a single Lanczos process. The Lanczos vectors `υⱼ`, the
//! diagonal entries `δⱼ = υⱼᵀ B υⱼ` and the off-diagonals `μⱼ` do not depend on
//! the shift, so they are computed once per inner step; only the CG scalars
//! `(γ, ω, σ)` and the vectors `(u, p)` are carried per shift.
//!
//! Each shift stops independently, either because its residual `|σⱼ|` meets
//!
//! ```text
//! ‖r‖ ≤ ξ · min(‖g‖, ‖u‖)^(1 + ζ)
//! ```
//!
//! or because its pivot `δⱼ + λᵢ - ωⱼ₋₁/γⱼ₋₁` is nonpositive, which certifies
//! that `B + λᵢ I` is not positive definite.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymmetricOperator;

/// Geometric ladder of shifts `λᵢ = λ₀ ψⁱ`, `i = 0..=m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftLadder {
    lambdas: Vec<f64>,
    psi: f64,
}

impl ShiftLadder {
    pub fn new(lambda0: f64, psi: f64, m: usize) -> Result<Self> {
        if !(lambda0 > 0.0 && lambda0.is_finite()) {
            return Err(Error::InvalidConfig(format!("lambda0 must be positive, got {lambda0}")));
        }
        if !(psi > 1.0 && psi.is_finite()) {
            return Err(Error::InvalidConfig(format!("psi must exceed 1, got {psi}")));
        }
        let mut lambdas = Vec::with_capacity(m + 1);
        let mut lambda = lambda0;
        for _ in 0..=m {
            lambdas.push(lambda);
            lambda *= psi;
        }
        Ok(Self { lambdas, psi })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// Index of the largest shift.
    pub fn m(&self) -> usize {
        self.lambdas.len() - 1
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Appends `count` further entries continuing the geometric progression.
    pub fn extend(&mut self, count: usize) {
        for _ in 0..count {
            let last = *self.lambdas.last().expect("ladder is never empty");
            self.lambdas.push(last * self.psi);
        }
    }
}

/// Accuracy and effort controls for [`solve_all_shifts`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftSolveOptions {
    pub xi: f64,
    pub zeta: f64,
    /// Inner-iteration cap; `None` means `2 · dim + 10`.
    pub max_inner: Option<usize>,
    /// Full reorthogonalization of the Lanczos basis (diagnostics only).
    pub reorthogonalize: bool,
}

impl Default for ShiftSolveOptions {
    fn default() -> Self {
        Self {
            xi: 0.1,
            zeta: 1.0,
            max_inner: None,
            reorthogonalize: false,
        }
    }
}

impl ShiftSolveOptions {
    pub fn inner_cap(&self, dim: usize) -> usize {
        self.max_inner.unwrap_or(2 * dim + 10)
    }

    /// Right-hand side of the residual criterion.
    pub fn residual_bound(&self, g_norm: f64, u_norm: f64) -> f64 {
        self.xi * g_norm.min(u_norm).powf(1.0 + self.zeta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftStatus {
    /// The residual criterion holds and no negative curvature was seen.
    Converged,
    /// A nonpositive pivot was met; the iterate is frozen at that point.
    NegativeCurvature,
    /// The inner-iteration cap was reached before the residual criterion held.
    IterationCap,
}

#[derive(Debug, Clone)]
pub struct ShiftSolveResult {
    pub shift_index: usize,
    pub lambda: f64,
    pub u: DVector<f64>,
    /// Recurrence residual `|σⱼ|`.
    pub residual_norm: f64,
    pub status: ShiftStatus,
    pub inner_iterations: usize,
}

impl ShiftSolveResult {
    pub fn curvature_ok(&self) -> bool {
        self.status != ShiftStatus::NegativeCurvature
    }

    /// Usable as a horizontal-step candidate.
    pub fn is_available(&self) -> bool {
        self.status == ShiftStatus::Converged
    }
}

#[derive(Debug, Clone)]
pub struct ShiftSolveSet {
    pub results: Vec<ShiftSolveResult>,
    pub g_z_norm: f64,
    pub matvecs: usize,
}

impl ShiftSolveSet {
    pub fn len(&self) -> usize {
        self.results.len()
    }

    pub fn is_empty(&self) -> bool {
        self.results.is_empty()
    }
}

struct ShiftTrack {
    u: DVector<f64>,
    p: DVector<f64>,
    sigma: f64,
    omega_prev: f64,
    gamma_prev: f64,
    iterations: usize,
    status: Option<ShiftStatus>,
}

/// Runs one Lanczos process and advances a CG recurrence for every shift.
pub fn solve_all_shifts<B: SymmetricOperator + ?Sized>(
    bz: &B,
    g_z: &DVector<f64>,
    ladder: &ShiftLadder,
    opts: &ShiftSolveOptions,
) -> Result<ShiftSolveSet> {
    if !(opts.xi > 0.0) {
        return Err(Error::InvalidConfig(format!("xi must be positive, got {}", opts.xi)));
    }
    if !(opts.zeta > 0.0 && opts.zeta <= 1.0) {
        return Err(Error::InvalidConfig(format!("zeta must lie in (0, 1], got {}", opts.zeta)));
    }
    let dim = bz.dim();
    if g_z.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "reduced gradient has length {}, operator has dimension {dim}",
            g_z.len()
        )));
    }
    if g_z.iter().any(|v| !v.is_finite()) {
        return Err(Error::Evaluation("non-finite reduced gradient".into()));
    }

    let g_norm = g_z.norm();
    if g_norm == 0.0 {
        let results = ladder
            .lambdas()
            .iter()
            .enumerate()
            .map(|(i, &lambda)| ShiftSolveResult {
                shift_index: i,
                lambda,
                u: DVector::zeros(dim),
                residual_norm: 0.0,
                status: ShiftStatus::Converged,
                inner_iterations: 0,
            })
            .collect();
        return Ok(ShiftSolveSet { results, g_z_norm: 0.0, matvecs: 0 });
    }

    let cap = opts.inner_cap(dim);
    let neg_g = -g_z;
    let mut tracks: Vec<ShiftTrack> = ladder
        .lambdas()
        .iter()
        .map(|_| ShiftTrack {
            u: DVector::zeros(dim),
            p: neg_g.clone(),
            sigma: g_norm,
            omega_prev: 0.0,
            gamma_prev: 1.0,
            iterations: 0,
            status: None,
        })
        .collect();

    let mut v_prev = DVector::<f64>::zeros(dim);
    let mut v = &neg_g / g_norm;
    let mut mu = g_norm;
    let mut basis = if opts.reorthogonalize { vec![v.clone()] } else { Vec::new() };
    let mut matvecs = 0;

    for step in 0.. {
        let mut active = 0;
        for t in tracks.iter_mut().filter(|t| t.status.is_none()) {
            if t.sigma.abs() <= opts.residual_bound(g_norm, t.u.norm()) {
                t.status = Some(ShiftStatus::Converged);
            } else {
                active += 1;
            }
        }
        if active == 0 {
            break;
        }
        if step >= cap {
            for t in tracks.iter_mut().filter(|t| t.status.is_none()) {
                t.status = Some(ShiftStatus::IterationCap);
            }
            break;
        }

        let bv = bz.apply(&v);
        matvecs += 1;
        let delta = v.dot(&bv);
        let mut w = bv - &v * delta - &v_prev * mu;
        if opts.reorthogonalize {
            for _ in 0..2 {
                for q in &basis {
                    let proj = q.dot(&w);
                    w.axpy(-proj, q, 1.0);
                }
            }
        }
        let mu_next = w.norm();
        if !delta.is_finite() || !mu_next.is_finite() {
            let shift = tracks.iter().position(|t| t.status.is_none()).unwrap_or(0);
            return Err(Error::NumericalBreakdown { shift, step });
        }
        let v_next = if mu_next > 0.0 { w / mu_next } else { DVector::zeros(dim) };

        for (i, (t, &lambda)) in tracks.iter_mut().zip(ladder.lambdas()).enumerate() {
            if t.status.is_some() {
                continue;
            }
            let pivot = delta + lambda - t.omega_prev / t.gamma_prev;
            if pivot.is_nan() {
                return Err(Error::NumericalBreakdown { shift: i, step });
            }
            if pivot <= 0.0 {
                t.status = Some(ShiftStatus::NegativeCurvature);
                continue;
            }
            let gamma = 1.0 / pivot;
            let omega = (mu_next * gamma).powi(2);
            let sigma_next = -mu_next * gamma * t.sigma;
            t.u.axpy(gamma, &t.p, 1.0);
            t.p *= omega;
            t.p.axpy(sigma_next, &v_next, 1.0);
            t.sigma = sigma_next;
            t.omega_prev = omega;
            t.gamma_prev = gamma;
            t.iterations += 1;
            if !sigma_next.is_finite() || !omega.is_finite() {
                return Err(Error::NumericalBreakdown { shift: i, step });
            }
        }

        if opts.reorthogonalize && mu_next > 0.0 {
            basis.push(v_next.clone());
        }
        v_prev = std::mem::replace(&mut v, v_next);
        mu = mu_next;
    }

    let results = tracks
        .into_iter()
        .zip(ladder.lambdas())
        .enumerate()
        .map(|(i, (t, &lambda))| ShiftSolveResult {
            shift_index: i,
            lambda,
            u: t.u,
            residual_norm: t.sigma.abs(),
            status: t.status.expect("every shift terminates"),
            inner_iterations: t.iterations,
        })
        .collect();
    Ok(ShiftSolveSet { results, g_z_norm: g_norm, matvecs })
}

/// Explicit residual `‖g + (B + λI) u‖`, one operator product.
pub fn verify_residual<B: SymmetricOperator + ?Sized>(
    bz: &B,
    g_z: &DVector<f64>,
    result: &ShiftSolveResult,
) -> f64 {
    if result.u.is_empty() {
        return g_z.norm();
    }
    let mut r = bz.apply(&result.u);
    r.axpy(result.lambda, &result.u, 1.0);
    r += g_z;
    r.norm()
}
