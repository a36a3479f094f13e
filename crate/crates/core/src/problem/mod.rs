//! Equality-constrained problems `min f(x) s.t. c(x) = 0`.

mod collection;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

pub use collection::{builtin_collection, find_builtin};

/// A smooth equality-constrained problem with analytic derivatives.
///
/// The Jacobian has one row per constraint (`Jᵀ = [∇c₁, …, ∇cₘ]`) and the
/// Lagrangian is `L(x, s) = f(x) - sᵀ c(x)`.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;

    /// Number of variables.
    fn n(&self) -> usize;

    /// Number of equality constraints.
    fn m(&self) -> usize;

    fn x0(&self) -> DVector<f64>;

    fn objective(&self, x: &DVector<f64>) -> f64;

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64>;

    fn constraints(&self, x: &DVector<f64>) -> DVector<f64>;

    /// `m × n` constraint Jacobian.
    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64>;

    /// `∇²f(x) - Σ sᵢ ∇²cᵢ(x)`.
    fn lagrangian_hessian(&self, x: &DVector<f64>, s: &DVector<f64>) -> DMatrix<f64>;

    /// A known local solution, when one is available in closed form.
    fn known_solution(&self) -> Option<DVector<f64>> {
        None
    }

    /// Whether [`Problem::known_solution`] is the only minimizer.
    fn has_unique_solution(&self) -> bool {
        false
    }
}

type ScalarFn = fn(&[f64]) -> f64;
type VectorFn = fn(&[f64]) -> Vec<f64>;
type WeightedFn = fn(&[f64], &[f64]) -> Vec<f64>;

/// A hand-coded test problem. Matrices are returned row-major.
#[derive(Clone)]
pub struct TestProblem {
    name: &'static str,
    source: &'static str,
    n: usize,
    m: usize,
    x0: Vec<f64>,
    solution: Option<Vec<f64>>,
    unique: bool,
    f: ScalarFn,
    grad: VectorFn,
    hess: VectorFn,
    cons: VectorFn,
    jac: VectorFn,
    /// `Σ sᵢ ∇²cᵢ(x)`
    cons_hess: WeightedFn,
}

impl std::fmt::Debug for TestProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestProblem")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("m", &self.m)
            .finish()
    }
}

impl TestProblem {
    /// Reference for the formulation.
    pub fn source(&self) -> &'static str {
        self.source
    }

    /// The same problem started from `x0`.
    pub fn with_x0(mut self, x0: Vec<f64>) -> Self {
        assert_eq!(x0.len(), self.n, "starting point has the wrong length");
        self.x0 = x0;
        self
    }
}

impl Problem for TestProblem {
    fn name(&self) -> &str {
        self.name
    }

    fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> usize {
        self.m
    }

    fn x0(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.x0)
    }

    fn objective(&self, x: &DVector<f64>) -> f64 {
        (self.f)(x.as_slice())
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec((self.grad)(x.as_slice()))
    }

    fn constraints(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec((self.cons)(x.as_slice()))
    }

    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.m, self.n, &(self.jac)(x.as_slice()))
    }

    fn lagrangian_hessian(&self, x: &DVector<f64>, s: &DVector<f64>) -> DMatrix<f64> {
        let h = DMatrix::from_row_slice(self.n, self.n, &(self.hess)(x.as_slice()));
        if self.m == 0 {
            return h;
        }
        let ch = DMatrix::from_row_slice(self.n, self.n, &(self.cons_hess)(x.as_slice(), s.as_slice()));
        h - ch
    }

    fn known_solution(&self) -> Option<DVector<f64>> {
        self.solution.as_deref().map(DVector::from_column_slice)
    }

    fn has_unique_solution(&self) -> bool {
        self.unique
    }
}

/// Worst relative discrepancy of each analytic derivative against central
/// differences, measured as `|a - fd| / max(1, |a|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeReport {
    pub gradient: f64,
    pub jacobian: f64,
    pub hessian: f64,
}

impl DerivativeReport {
    pub fn max(&self) -> f64 {
        self.gradient.max(self.jacobian).max(self.hessian)
    }
}

fn rel_err(analytic: f64, fd: f64) -> f64 {
    (analytic - fd).abs() / analytic.abs().max(1.0)
}

fn finite_or(what: &str, values: impl IntoIterator<Item = f64>) -> Result<()> {
    if values.into_iter().all(f64::is_finite) {
        Ok(())
    } else {
        Err(Error::Evaluation(format!("non-finite {what} at a probe point")))
    }
}

/// Compares analytic derivatives with central differences of step `h`.
///
/// The Lagrangian Hessian is checked against differences of `g - Jᵀs` for the
/// fixed multiplier probe `sᵢ = (-1)ⁱ / (i + 1)`.
pub fn check_derivatives<P: Problem + ?Sized>(
    p: &P,
    x: &DVector<f64>,
    h: f64,
) -> Result<DerivativeReport> {
    if !(h > 0.0) {
        return Err(Error::InvalidConfig(format!("step must be positive, got {h}")));
    }
    let n = p.n();
    let m = p.m();
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!("point has length {}, expected {n}", x.len())));
    }
    let s = DVector::from_fn(m, |i, _| if i % 2 == 0 { 1.0 } else { -1.0 } / (i + 1) as f64);
    let lag_grad = |x: &DVector<f64>| p.gradient(x) - p.jacobian(x).tr_mul(&s);

    let g = p.gradient(x);
    let jac = p.jacobian(x);
    let hess = p.lagrangian_hessian(x, &s);
    finite_or("gradient", g.iter().copied())?;
    finite_or("Jacobian", jac.iter().copied())?;
    finite_or("Hessian", hess.iter().copied())?;

    let mut report = DerivativeReport { gradient: 0.0, jacobian: 0.0, hessian: 0.0 };
    for k in 0..n {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[k] += h;
        xm[k] -= h;

        let (fp, fm) = (p.objective(&xp), p.objective(&xm));
        finite_or("objective", [fp, fm])?;
        report.gradient = report.gradient.max(rel_err(g[k], (fp - fm) / (2.0 * h)));

        let (cp, cm) = (p.constraints(&xp), p.constraints(&xm));
        finite_or("constraints", cp.iter().chain(cm.iter()).copied())?;
        for i in 0..m {
            report.jacobian = report.jacobian.max(rel_err(jac[(i, k)], (cp[i] - cm[i]) / (2.0 * h)));
        }

        let (lp, lm) = (lag_grad(&xp), lag_grad(&xm));
        finite_or("gradient", lp.iter().chain(lm.iter()).copied())?;
        for i in 0..n {
            report.hessian = report.hessian.max(rel_err(hess[(i, k)], (lp[i] - lm[i]) / (2.0 * h)));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ConstraintFactorization;

    #[test]
    fn lookup_dimensions() {
        let booth = find_builtin("BOOTH").unwrap();
        assert_eq!((booth.n(), booth.m()), (2, 2));
        let bt3 = find_builtin("bt3").unwrap();
        assert_eq!((bt3.n(), bt3.m()), (5, 3));
        assert!(find_builtin("NOPE").is_none());
    }

    #[test]
    fn maratos_solution_is_feasible() {
        let p = find_builtin("MARATOS").unwrap();
        let xs = p.known_solution().unwrap();
        assert_eq!(p.constraints(&xs).norm(), 0.0);
    }

    #[test]
    fn required_problems_present_with_paper_dimensions() {
        let expected = [
            ("BOOTH", 2, 2), ("HIMMELBA", 2, 2), ("HIMMELBC", 2, 2), ("RSNBRNE", 2, 2),
            ("SINVALNE", 2, 2), ("MARATOS", 2, 1), ("HS6", 2, 1), ("HS7", 2, 1), ("HS8", 2, 2),
            ("HS9", 2, 1), ("BT1", 2, 1), ("BT2", 3, 1), ("BT3", 5, 3), ("BT4", 3, 2),
            ("BT5", 3, 2), ("BT6", 5, 2), ("BT9", 4, 2), ("BT11", 5, 3), ("BT12", 5, 3),
            ("HS26", 3, 1), ("HS27", 3, 1), ("HS28", 3, 1), ("HS40", 4, 3), ("HS42", 4, 2),
            ("HS48", 5, 2), ("HS51", 5, 3), ("HS52", 5, 3), ("HS78", 5, 3), ("HS79", 5, 3),
            ("BYRDSPHR", 3, 2), ("GENHS28", 10, 8),
        ];
        for (name, n, m) in expected {
            let p = find_builtin(name).unwrap_or_else(|| panic!("{name} missing"));
            assert_eq!((p.n(), p.m()), (n, m), "{name}");
        }
        assert!(builtin_collection().len() >= expected.len());
    }

    #[test]
    fn collection_is_well_formed() {
        for p in builtin_collection() {
            let x = p.x0();
            assert!(p.m() <= p.n(), "{}", p.name());
            assert!(p.n() <= 50);
            assert_eq!(x.len(), p.n());
            assert_eq!(p.gradient(&x).len(), p.n());
            assert_eq!(p.constraints(&x).len(), p.m());
            assert_eq!(p.jacobian(&x).shape(), (p.m(), p.n()));
            let h = p.lagrangian_hessian(&x, &DVector::from_element(p.m(), 0.7));
            assert_eq!(h.shape(), (p.n(), p.n()));
            assert!((&h - h.transpose()).norm() <= 1e-12 * h.norm().max(1.0), "{} asymmetric", p.name());
            assert!(!p.source().is_empty());

            // full row rank at the start
            if p.m() > 0 {
                let smin = p.jacobian(&x).singular_values().min();
                assert!(smin > 1e-10, "{}: J(x0) rank deficient", p.name());
            }
        }
    }

    #[test]
    fn known_solutions_are_feasible_and_stationary() {
        for p in builtin_collection() {
            let Some(xs) = p.known_solution() else { continue };
            let c = p.constraints(&xs);
            assert!(c.norm() <= 1e-10, "{}: ‖c‖ = {:e}", p.name(), c.norm());
            let fact = ConstraintFactorization::new(&p.jacobian(&xs), None).unwrap();
            let zg = fact.nullspace().project(&p.gradient(&xs)).unwrap();
            assert!(zg.norm() <= 1e-6, "{}: ‖Zᵀg‖ = {:e}", p.name(), zg.norm());
        }
    }

    #[test]
    fn derivative_examples() {
        let booth = find_builtin("BOOTH").unwrap();
        let r = check_derivatives(&booth, &booth.x0(), 1e-6).unwrap();
        assert!(r.gradient < 1e-6);
        assert!(r.jacobian <= 1e-9);

        let hs6 = find_builtin("HS6").unwrap();
        let r = check_derivatives(&hs6, &hs6.x0(), 1e-6).unwrap();
        assert!(r.jacobian < 1e-6);

        let hs28 = find_builtin("HS28").unwrap();
        for x in [hs28.x0(), DVector::from_vec(vec![3.0, -7.0, 0.25])] {
            for h in [1e-3, 1e-6] {
                let r = check_derivatives(&hs28, &x, h).unwrap();
                assert!(r.jacobian <= 1e-8, "linear constraints difference to roundoff");
            }
        }
    }

    #[test]
    fn collection_derivatives_match_differences() {
        for p in builtin_collection() {
            let x0 = p.x0();
            let shifted = x0.map(|v| v + 0.1 * v.abs().max(1.0));
            for x in [x0, shifted] {
                let r = check_derivatives(&p, &x, 1e-6).unwrap();
                assert!(r.max() < 1e-5, "{}: {r:?}", p.name());
            }
        }
    }

    #[test]
    fn derivative_check_rejects_bad_input() {
        let p = find_builtin("HS7").unwrap();
        assert!(check_derivatives(&p, &p.x0(), 0.0).is_err());
        assert!(check_derivatives(&p, &DVector::zeros(3), 1e-6).is_err());
        // ln(1 + x²) stays finite, but an infinite coordinate does not
        let x = DVector::from_vec(vec![f64::INFINITY, 0.0]);
        assert!(matches!(check_derivatives(&p, &x, 1e-6), Err(Error::Evaluation(_))));
    }
}
