//! Composite step `d = v + h`: a scaled minimum-norm vertical step toward
//! feasibility and a horizontal step inside the constraint null space.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{NullspaceBasis, SymmetricOperator};

#[derive(Debug, Clone, PartialEq)]
pub struct StepDecomposition {
    pub v: DVector<f64>,
    pub h: DVector<f64>,
    pub d: DVector<f64>,
    pub alpha: f64,
    pub dq_n: f64,
    pub dq_h: f64,
    pub dq_f: f64,
}

/// The three pieces of the model decrease `Δq = Δq^H + μ Δq^N + Δq^F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelDecreases {
    pub dq_n: f64,
    pub dq_h: f64,
    pub dq_f: f64,
}

impl ModelDecreases {
    /// Total decrease at penalty `mu`.
    pub fn total(&self, mu: f64) -> f64 {
        self.dq_h + mu * self.dq_n + self.dq_f
    }
}

/// Scales `vc` by `α = min(1, √β / ‖vc‖)`, the largest admissible step.
///
/// `theta` only bounds the admissible interval from below; the upper end is
/// always inside it.
pub fn vertical_step(vc: &DVector<f64>, beta: f64, theta: f64) -> Result<(DVector<f64>, f64)> {
    if !(beta > 0.0) || !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "vertical step needs beta > 0 and theta in (0, 1], got {beta}, {theta}"
        )));
    }
    let norm = vc.norm();
    if norm == 0.0 {
        return Ok((vc.clone(), 1.0));
    }
    let alpha = (beta.sqrt() / norm).min(1.0);
    Ok((vc * alpha, alpha))
}

/// `h = Z u`.
pub fn horizontal_step(u: &DVector<f64>, z: &NullspaceBasis) -> Result<DVector<f64>> {
    z.lift(u)
}

/// Decreases of the three model pieces along `v` and `h`.
///
/// `Δq^N` uses the identity `‖c‖ - ‖c + Jv‖ = α‖c‖`, which holds because
/// `Jv = -α c` for the scaled minimum-norm step.
pub fn model_decreases<B: SymmetricOperator + ?Sized>(
    g: &DVector<f64>,
    b: &B,
    c_norm: f64,
    alpha: f64,
    v: &DVector<f64>,
    h: &DVector<f64>,
) -> Result<ModelDecreases> {
    let n = g.len();
    if b.dim() != n || v.len() != n || h.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "model data: g {n}, B {}, v {}, h {}",
            b.dim(),
            v.len(),
            h.len()
        )));
    }
    let bv = b.apply(v);
    let bh = b.apply(h);
    let dq_f = -g.dot(v) - 0.5 * v.dot(&bv);
    let dq_h = -(g + &bv).dot(h) - 0.5 * h.dot(&bh);
    Ok(ModelDecreases { dq_n: alpha * c_norm, dq_h, dq_f })
}

impl StepDecomposition {
    /// Assembles `d = v + Z u` and its model decreases.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble<B: SymmetricOperator + ?Sized>(
        g: &DVector<f64>,
        b: &B,
        c_norm: f64,
        z: &NullspaceBasis,
        v: DVector<f64>,
        alpha: f64,
        u: &DVector<f64>,
    ) -> Result<Self> {
        let h = horizontal_step(u, z)?;
        let dq = model_decreases(g, b, c_norm, alpha, &v, &h)?;
        let d = &v + &h;
        Ok(Self { v, h, d, alpha, dq_n: dq.dq_n, dq_h: dq.dq_h, dq_f: dq.dq_f })
    }

    pub fn decreases(&self) -> ModelDecreases {
        ModelDecreases { dq_n: self.dq_n, dq_h: self.dq_h, dq_f: self.dq_f }
    }
}
