//! Dense linear algebra around the constraint Jacobian.
//!
//! Everything here is built from one Householder QR factorization of `Jᵀ`:
//!
//! ```text
//! Jᵀ = [Q₁ Q₂] [R; 0]
//! ```
//!
//! `Q₂` is an orthonormal basis of `null(J)`, the minimum-norm solution of
//! `Jv = -c` is `v = Q₁ y` with `Rᵀ y = -c`, and the least-squares multipliers
//! minimizing `‖g - Jᵀs‖` solve `R s = Q₁ᵀ g`. `(JJᵀ)⁻¹` is never formed.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A symmetric linear operator available through matrix-vector products.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;

    fn apply(&self, x: &DVector<f64>) -> DVector<f64>;

    /// Assembles the operator column by column.
    fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        let mut e = DVector::zeros(n);
        for j in 0..n {
            e[j] = 1.0;
            out.set_column(j, &self.apply(&e));
            e[j] = 0.0;
        }
        out
    }
}

impl SymmetricOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        self * x
    }

    fn to_matrix(&self) -> DMatrix<f64> {
        self.clone()
    }
}

impl<T: SymmetricOperator + ?Sized> SymmetricOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        (**self).apply(x)
    }
}

/// Orthonormal basis `Z` of the null space of a full-row-rank `J`.
#[derive(Debug, Clone)]
pub struct NullspaceBasis {
    z: DMatrix<f64>,
    jacobian: DMatrix<f64>,
    rank_tolerance: f64,
}

impl NullspaceBasis {
    /// `n × (n - m)` matrix with orthonormal columns.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn jacobian(&self) -> &DMatrix<f64> {
        &self.jacobian
    }

    pub fn rank_tolerance(&self) -> f64 {
        self.rank_tolerance
    }

    /// Number of variables `n`.
    pub fn ambient_dim(&self) -> usize {
        self.z.nrows()
    }

    /// Dimension `n - m` of the null space.
    pub fn dim(&self) -> usize {
        self.z.ncols()
    }

    /// `Z u`.
    pub fn lift(&self, u: &DVector<f64>) -> Result<DVector<f64>> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "null-space coordinates have length {}, basis has {} columns",
                u.len(),
                self.dim()
            )));
        }
        Ok(&self.z * u)
    }

    /// `Zᵀ x`.
    pub fn project(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector has length {}, basis has {} rows",
                x.len(),
                self.ambient_dim()
            )));
        }
        Ok(self.z.tr_mul(x))
    }

    /// Replaces `Z` by `Z Q` for an orthogonal `Q`; used to check basis invariance.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Result<Self> {
        if q.nrows() != self.dim() || q.ncols() != self.dim() {
            return Err(Error::DimensionMismatch("rotation must be (n-m)×(n-m)".into()));
        }
        Ok(Self {
            z: &self.z * q,
            jacobian: self.jacobian.clone(),
            rank_tolerance: self.rank_tolerance,
        })
    }
}

/// Default rank tolerance: `max(m, n) · ε · σ_max(J)`.
pub fn default_rank_tolerance(jacobian: &DMatrix<f64>) -> f64 {
    let (m, n) = jacobian.shape();
    if m == 0 || n == 0 {
        return 0.0;
    }
    let sigma_max = jacobian.clone().singular_values().max();
    m.max(n) as f64 * f64::EPSILON * sigma_max
}

fn numerical_rank(jacobian: &DMatrix<f64>, tol: f64) -> usize {
    if jacobian.nrows() == 0 || jacobian.ncols() == 0 {
        return 0;
    }
    jacobian
        .clone()
        .singular_values()
        .iter()
        .filter(|&&s| s > tol)
        .count()
}

/// QR factorization of `Jᵀ` shared by the null-space basis, the vertical step
/// and the multiplier estimate.
#[derive(Debug, Clone)]
pub struct ConstraintFactorization {
    jacobian: DMatrix<f64>,
    /// Full `n × n` orthogonal factor.
    q: DMatrix<f64>,
    /// `m × m` upper-triangular factor.
    r: DMatrix<f64>,
    rank_tolerance: f64,
}

impl ConstraintFactorization {
    /// Factors `Jᵀ`. `rank_tolerance = None` selects [`default_rank_tolerance`].
    pub fn new(jacobian: &DMatrix<f64>, rank_tolerance: Option<f64>) -> Result<Self> {
        let (m, n) = jacobian.shape();
        if m > n {
            return Err(Error::DimensionMismatch(format!(
                "{m} constraints exceed {n} variables"
            )));
        }
        if jacobian.iter().any(|v| !v.is_finite()) {
            return Err(Error::Evaluation("non-finite Jacobian entry".into()));
        }
        let tol = rank_tolerance.unwrap_or_else(|| default_rank_tolerance(jacobian));
        if m == 0 {
            return Ok(Self {
                jacobian: jacobian.clone(),
                q: DMatrix::identity(n, n),
                r: DMatrix::zeros(0, 0),
                rank_tolerance: tol,
            });
        }
        let rank = numerical_rank(jacobian, tol);
        if rank < m {
            return Err(Error::RankDeficient { rank, m });
        }

        let qr = jacobian.transpose().qr();
        let mut qt = DMatrix::<f64>::identity(n, n);
        qr.q_tr_mul(&mut qt);
        let r = qr.r();
        Ok(Self {
            jacobian: jacobian.clone(),
            q: qt.transpose(),
            r,
            rank_tolerance: tol,
        })
    }

    pub fn n(&self) -> usize {
        self.jacobian.ncols()
    }

    pub fn m(&self) -> usize {
        self.jacobian.nrows()
    }

    pub fn jacobian(&self) -> &DMatrix<f64> {
        &self.jacobian
    }

    pub fn nullspace(&self) -> NullspaceBasis {
        let (m, n) = (self.m(), self.n());
        NullspaceBasis {
            z: self.q.columns(m, n - m).into_owned(),
            jacobian: self.jacobian.clone(),
            rank_tolerance: self.rank_tolerance,
        }
    }

    /// Minimum-norm solution of `J v = -c`, i.e. `-Jᵀ(JJᵀ)⁻¹c`.
    pub fn min_norm_step(&self, c: &DVector<f64>) -> Result<DVector<f64>> {
        let m = self.m();
        if c.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "constraint vector has length {}, expected {m}",
                c.len()
            )));
        }
        if m == 0 {
            return Ok(DVector::zeros(self.n()));
        }
        let y = self
            .r
            .tr_solve_upper_triangular(&(-c))
            .ok_or(Error::RankDeficient { rank: 0, m })?;
        Ok(self.q.columns(0, m) * y)
    }

    /// Multipliers `s` minimizing `‖g - Jᵀ s‖`.
    pub fn multipliers(&self, g: &DVector<f64>) -> Result<DVector<f64>> {
        let m = self.m();
        if g.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "gradient has length {}, expected {}",
                g.len(),
                self.n()
            )));
        }
        if m == 0 {
            return Ok(DVector::zeros(0));
        }
        let rhs = self.q.columns(0, m).tr_mul(g);
        self.r
            .solve_upper_triangular(&rhs)
            .ok_or(Error::RankDeficient { rank: 0, m })
    }
}

pub fn nullspace_basis(
    jacobian: &DMatrix<f64>,
    rank_tolerance: Option<f64>,
) -> Result<NullspaceBasis> {
    Ok(ConstraintFactorization::new(jacobian, rank_tolerance)?.nullspace())
}

pub fn min_norm_constraint_step(jacobian: &DMatrix<f64>, c: &DVector<f64>) -> Result<DVector<f64>> {
    ConstraintFactorization::new(jacobian, None)?.min_norm_step(c)
}

pub fn least_squares_multipliers(
    jacobian: &DMatrix<f64>,
    g: &DVector<f64>,
) -> Result<DVector<f64>> {
    ConstraintFactorization::new(jacobian, None)?.multipliers(g)
}

/// The reduced operator `Zᵀ B Z`, applied lazily.
pub struct ReducedOperator<'a, B: ?Sized> {
    inner: &'a B,
    basis: &'a NullspaceBasis,
}

pub fn reduced_operator<'a, B: SymmetricOperator + ?Sized>(
    inner: &'a B,
    basis: &'a NullspaceBasis,
) -> Result<ReducedOperator<'a, B>> {
    if inner.dim() != basis.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator has dimension {}, basis has {} rows",
            inner.dim(),
            basis.ambient_dim()
        )));
    }
    Ok(ReducedOperator { inner, basis })
}

impl<B: SymmetricOperator + ?Sized> SymmetricOperator for ReducedOperator<'_, B> {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn apply(&self, u: &DVector<f64>) -> DVector<f64> {
        let z = self.basis.matrix();
        if z.ncols() == 0 {
            return DVector::zeros(0);
        }
        z.tr_mul(&self.inner.apply(&(z * u)))
    }
}
