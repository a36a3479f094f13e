use nalgebra::{DMatrix, DVector};
use ssarc::{find_builtin, kkt_residual, solve, Problem, SolverConfig, SolverStatus};

/// `½ xᵀ diag(1..n) x - 1ᵀx` with no constraints.
struct Quadratic {
    n: usize,
}

impl Problem for Quadratic {
    fn name(&self) -> &str {
        "QUAD"
    }
    fn n(&self) -> usize {
        self.n
    }
    fn m(&self) -> usize {
        0
    }
    fn x0(&self) -> DVector<f64> {
        DVector::zeros(self.n)
    }
    fn objective(&self, x: &DVector<f64>) -> f64 {
        (0..self.n).map(|i| 0.5 * (i + 1) as f64 * x[i] * x[i] - x[i]).sum()
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.n, |i, _| (i + 1) as f64 * x[i] - 1.0)
    }
    fn constraints(&self, _: &DVector<f64>) -> DVector<f64> {
        DVector::zeros(0)
    }
    fn jacobian(&self, _: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::zeros(0, self.n)
    }
    fn lagrangian_hessian(&self, _: &DVector<f64>, _: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_fn(self.n, |i, _| (i + 1) as f64))
    }
}

#[test]
fn unconstrained_convex_quadratic() {
    let p = Quadratic { n: 5 };
    let report = solve(&p, &SolverConfig::default()).unwrap();
    assert_eq!(report.status, SolverStatus::Converged);
    assert!(report.nit <= 3, "{} iterations", report.nit);
    let exact = DVector::from_fn(5, |i, _| 1.0 / (i + 1) as f64);
    assert!((&report.x - exact).norm() <= 1e-8);
}

#[test]
fn square_system_has_empty_null_space() {
    let p = find_builtin("BOOTH").unwrap();
    let report = solve(&p, &SolverConfig::default()).unwrap();
    assert!(report.converged());
    let (st, fe) = kkt_residual(&p, &report.x).unwrap();
    assert!(st <= 1e-6 && fe <= 1e-8);
}

#[test]
fn both_rejection_rules_solve_hs28() {
    use ssarc::solver::RejectionBeta;
    let p = find_builtin("HS28").unwrap();
    for rule in [RejectionBeta::Keep, RejectionBeta::Adopt] {
        let cfg = SolverConfig { rejection_beta: rule, ..Default::default() };
        let report = solve(&p, &cfg).unwrap();
        assert!(report.converged(), "{rule:?}");
        let sol = p.known_solution().unwrap();
        assert!((&report.x - sol).norm() <= 1e-5);
    }
}

#[test]
fn invalid_configuration_is_an_error() {
    let p = find_builtin("HS28").unwrap();
    let cfg = SolverConfig { gamma1: 1.5, ..Default::default() };
    assert!(solve(&p, &cfg).is_err());
}

#[test]
fn wrong_starting_point_length_is_an_error() {
    struct Broken;
    impl Problem for Broken {
        fn name(&self) -> &str {
            "BROKEN"
        }
        fn n(&self) -> usize {
            2
        }
        fn m(&self) -> usize {
            0
        }
        fn x0(&self) -> DVector<f64> {
            DVector::zeros(3)
        }
        fn objective(&self, _: &DVector<f64>) -> f64 {
            0.0
        }
        fn gradient(&self, _: &DVector<f64>) -> DVector<f64> {
            DVector::zeros(2)
        }
        fn constraints(&self, _: &DVector<f64>) -> DVector<f64> {
            DVector::zeros(0)
        }
        fn jacobian(&self, _: &DVector<f64>) -> DMatrix<f64> {
            DMatrix::zeros(0, 2)
        }
        fn lagrangian_hessian(&self, _: &DVector<f64>, _: &DVector<f64>) -> DMatrix<f64> {
            DMatrix::zeros(2, 2)
        }
    }
    assert!(solve(&Broken, &SolverConfig::default()).is_err());
}

