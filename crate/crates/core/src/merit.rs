//! The ℓ2 exact-penalty merit function `φ(x, μ) = f(x) + μ‖c(x)‖`, its
//! quadratic model, the penalty update and the acceptance ratio.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::SymmetricOperator;
use crate::problem::Problem;
use crate::step::ModelDecreases;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenaltyState {
    pub mu: f64,
    pub mu_prev: f64,
    pub nu: f64,
    pub tau1: f64,
    pub tau2: f64,
}

impl PenaltyState {
    pub fn new(mu_init: f64, nu: f64, tau1: f64, tau2: f64) -> Result<Self> {
        if !(mu_init > 0.0) || !(nu > 0.0 && nu < 1.0) || !(tau1 > 1.0) || !(tau2 > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "penalty needs mu > 0, nu in (0,1), tau1 > 1, tau2 > 0; got {mu_init}, {nu}, {tau1}, {tau2}"
            )));
        }
        Ok(Self { mu: mu_init, mu_prev: mu_init, nu, tau1, tau2 })
    }

    /// Raises `μ` so that `Δq ≥ ν μ Δq^N`, and returns the new value.
    ///
    /// With `Δq^N = 0` the requirement holds for any `μ`, which is kept.
    pub fn update(&mut self, dq: &ModelDecreases) -> Result<f64> {
        let mu = update_penalty(self, dq)?;
        self.mu_prev = self.mu;
        self.mu = mu;
        Ok(mu)
    }
}

/// The penalty value that [`PenaltyState::update`] would set.
pub fn update_penalty(ps: &PenaltyState, dq: &ModelDecreases) -> Result<f64> {
    if dq.dq_n < 0.0 || dq.dq_n.is_nan() {
        return Err(Error::ContractViolation(format!(
            "normal model decrease must be nonnegative, got {:e}",
            dq.dq_n
        )));
    }
    let mu = ps.mu;
    if dq.dq_n == 0.0 {
        return Ok(mu);
    }
    let mu_c = -(dq.dq_f + dq.dq_h) / ((1.0 - ps.nu) * dq.dq_n);
    if mu >= mu_c {
        return Ok(mu);
    }
    Ok(mu_c.max(ps.tau1 * mu).max(mu + ps.tau2))
}

/// `f(x) + μ‖c(x)‖`.
pub fn penalty_value<P: Problem + ?Sized>(p: &P, x: &DVector<f64>, mu: f64) -> Result<f64> {
    let f = p.objective(x);
    let c = p.constraints(x);
    merit_from_parts(f, &c, mu)
}

pub(crate) fn merit_from_parts(f: f64, c: &DVector<f64>, mu: f64) -> Result<f64> {
    let phi = f + mu * c.norm();
    if phi.is_finite() {
        Ok(phi)
    } else {
        Err(Error::Evaluation(format!("non-finite merit value (f = {f:e}, ‖c‖ = {:e})", c.norm())))
    }
}

/// `q(d) = f + gᵀd + ½dᵀBd + μ‖c + Jd‖`.
pub fn model_value<B: SymmetricOperator + ?Sized>(
    f: f64,
    g: &DVector<f64>,
    b: &B,
    c: &DVector<f64>,
    j: &DMatrix<f64>,
    d: &DVector<f64>,
    mu: f64,
) -> f64 {
    f + g.dot(d) + 0.5 * d.dot(&b.apply(d)) + mu * (c + j * d).norm()
}

/// `ρ = (φ(x) - φ(x + d)) / (q(0) - q(d))`.
pub fn acceptance_ratio(phi_x: f64, phi_trial: f64, q0: f64, q_d: f64) -> Result<f64> {
    let pred = q0 - q_d;
    if !(pred > 1e-16 * phi_x.abs().max(1.0)) {
        return Err(Error::DegenerateModel { decrease: pred, merit: phi_x });
    }
    Ok((phi_x - phi_trial) / pred)
}

/// Acceptance ratio that stays meaningful when both decreases approach the
/// rounding level of `φ`.
///
/// Both numerator and denominator are offset by `δ = 10 ε_mach max(1, |φ(x)|)`,
/// so decreases far above `δ` give the plain ratio while decreases buried in
/// rounding give `ρ ≈ 1` instead of noise.
pub fn robust_acceptance_ratio(phi_x: f64, phi_trial: f64, pred: f64) -> Result<f64> {
    if !(pred > 0.0) {
        return Err(Error::DegenerateModel { decrease: pred, merit: phi_x });
    }
    let delta = 10.0 * f64::EPSILON * phi_x.abs().max(1.0);
    Ok((phi_x - phi_trial + delta) / (pred + delta))
}
