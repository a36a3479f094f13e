//! Hand-coded test problems from the Hock–Schittkowski, Boggs–Tolle and
//! CUTE(st) nonlinear-equation collections.
//!
//! Square problems (`n = m`) are the CUTEst "NE" nonlinear-equation variants:
//! `f ≡ 0` and the residuals become equality constraints.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::{DMatrix, DVector};

use super::{Problem, ScalarFn, TestProblem, VectorFn, WeightedFn};

#[allow(clippy::too_many_arguments)]
fn problem(
    name: &'static str,
    source: &'static str,
    n: usize,
    m: usize,
    x0: Vec<f64>,
    f: ScalarFn,
    grad: VectorFn,
    hess: VectorFn,
    cons: VectorFn,
    jac: VectorFn,
    cons_hess: WeightedFn,
) -> TestProblem {
    TestProblem { name, source, n, m, x0, solution: None, unique: false, f, grad, hess, cons, jac, cons_hess }
}

impl TestProblem {
    fn with_solution(mut self, x: Vec<f64>, unique: bool) -> Self {
        self.solution = Some(x);
        self.unique = unique;
        self
    }

    /// For a quadratic objective with linear constraints the KKT system is
    /// linear; solve it for the unique minimizer.
    fn with_qp_solution(self) -> Self {
        let (n, m) = (self.n, self.m);
        let origin = DVector::zeros(n);
        let h = DMatrix::from_row_slice(n, n, &(self.hess)(origin.as_slice()));
        let a = self.jacobian(&origin);
        let mut kkt = DMatrix::zeros(n + m, n + m);
        kkt.view_mut((0, 0), (n, n)).copy_from(&h);
        kkt.view_mut((0, n), (n, m)).copy_from(&a.transpose());
        kkt.view_mut((n, 0), (m, n)).copy_from(&a);
        let mut rhs = DVector::zeros(n + m);
        rhs.rows_mut(0, n).copy_from(&(-self.gradient(&origin)));
        rhs.rows_mut(n, m).copy_from(&(-self.constraints(&origin)));
        let sol = kkt.lu().solve(&rhs).expect("nonsingular KKT system");
        let x = sol.rows(0, n).iter().copied().collect();
        self.with_solution(x, true)
    }
}

fn zeros(len: usize) -> Vec<f64> {
    vec![0.0; len]
}

fn no_curvature(x: &[f64], _s: &[f64]) -> Vec<f64> {
    zeros(x.len() * x.len())
}

fn flat(x: &[f64]) -> Vec<f64> {
    zeros(x.len() * x.len())
}

fn zero_f(_x: &[f64]) -> f64 {
    0.0
}

fn zero_g(x: &[f64]) -> Vec<f64> {
    zeros(x.len())
}

fn booth() -> TestProblem {
    /// BOOTH (CUTEst NE form): `x₁ + 2x₂ = 7`, `2x₁ + x₂ = 5`; x0 = (0, 0).
    const SRC: &str = "CUTEst BOOTH: x1 + 2 x2 - 7 = 0, 2 x1 + x2 - 5 = 0";
    problem(
        "BOOTH", SRC, 2, 2, vec![0.0, 0.0],
        zero_f, zero_g, flat,
        |x| vec![x[0] + 2.0 * x[1] - 7.0, 2.0 * x[0] + x[1] - 5.0],
        |_| vec![1.0, 2.0, 2.0, 1.0],
        no_curvature,
    )
    .with_solution(vec![1.0, 3.0], true)
}

fn himmelba() -> TestProblem {
    const SRC: &str = "Himmelblau (1972) problem 25, NE form of 4(x1-5)^2 + (x2-6)^2: \
                       2(x1 - 5) = 0, x2 - 6 = 0; x0 = (8, 9)";
    problem(
        "HIMMELBA", SRC, 2, 2, vec![8.0, 9.0],
        zero_f, zero_g, flat,
        |x| vec![2.0 * (x[0] - 5.0), x[1] - 6.0],
        |_| vec![2.0, 0.0, 0.0, 1.0],
        no_curvature,
    )
    .with_solution(vec![5.0, 6.0], true)
}

fn himmelbc() -> TestProblem {
    const SRC: &str = "Himmelblau (1972), CUTEst HIMMELBC: x1^2 + x2 - 11 = 0, x1 + x2^2 - 7 = 0; x0 = (1, 1)";
    problem(
        "HIMMELBC", SRC, 2, 2, vec![1.0, 1.0],
        zero_f, zero_g, flat,
        |x| vec![x[0] * x[0] + x[1] - 11.0, x[0] + x[1] * x[1] - 7.0],
        |x| vec![2.0 * x[0], 1.0, 1.0, 2.0 * x[1]],
        |_, s| vec![2.0 * s[0], 0.0, 0.0, 2.0 * s[1]],
    )
    .with_solution(vec![3.0, 2.0], false)
}

fn rsnbrne() -> TestProblem {
    const SRC: &str = "Rosenbrock as equations (CUTEst RSNBRNE): 10(x2 - x1^2) = 0, 1 - x1 = 0; x0 = (-1.2, 1)";
    problem(
        "RSNBRNE", SRC, 2, 2, vec![-1.2, 1.0],
        zero_f, zero_g, flat,
        |x| vec![10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]],
        |x| vec![-20.0 * x[0], 10.0, -1.0, 0.0],
        |_, s| vec![-20.0 * s[0], 0.0, 0.0, 0.0],
    )
    .with_solution(vec![1.0, 1.0], true)
}

fn sinvalne() -> TestProblem {
    const SRC: &str = "Sine valley as equations (CUTEst SINVALNE): 10(x2 - sin x1) = 0, x1/2 = 0; \
                       x0 = (4.712389, -1)";
    problem(
        "SINVALNE", SRC, 2, 2, vec![4.712389, -1.0],
        zero_f, zero_g, flat,
        |x| vec![10.0 * (x[1] - x[0].sin()), 0.5 * x[0]],
        |x| vec![-10.0 * x[0].cos(), 10.0, 0.5, 0.0],
        |x, s| vec![10.0 * x[0].sin() * s[0], 0.0, 0.0, 0.0],
    )
    .with_solution(vec![0.0, 0.0], true)
}

fn cubene() -> TestProblem {
    const SRC: &str = "Cube function as equations (CUTEst CUBENE): 10(x2 - x1^3) = 0, 1 - x1 = 0; x0 = (-1.2, 1)";
    problem(
        "CUBENE", SRC, 2, 2, vec![-1.2, 1.0],
        zero_f, zero_g, flat,
        |x| vec![10.0 * (x[1] - x[0].powi(3)), 1.0 - x[0]],
        |x| vec![-30.0 * x[0] * x[0], 10.0, -1.0, 0.0],
        |x, s| vec![-60.0 * x[0] * s[0], 0.0, 0.0, 0.0],
    )
    .with_solution(vec![1.0, 1.0], true)
}

fn gottfr() -> TestProblem {
    const SRC: &str = "Gottfried (CUTEst GOTTFR): x1 - 0.1136(x1 + 3x2)(1 - x1) = 0, \
                       x2 + 7.5(2x1 - x2)(1 - x2) = 0; x0 = (0.5, 0.5)";
    problem(
        "GOTTFR", SRC, 2, 2, vec![0.5, 0.5],
        zero_f, zero_g, flat,
        |x| {
            vec![
                x[0] - 0.1136 * (x[0] + 3.0 * x[1]) * (1.0 - x[0]),
                x[1] + 7.5 * (2.0 * x[0] - x[1]) * (1.0 - x[1]),
            ]
        },
        |x| {
            vec![
                1.0 - 0.1136 * (1.0 - 2.0 * x[0] - 3.0 * x[1]),
                -0.3408 * (1.0 - x[0]),
                15.0 * (1.0 - x[1]),
                1.0 + 7.5 * (2.0 * x[1] - 2.0 * x[0] - 1.0),
            ]
        },
        |_, s| {
            let off = 0.3408 * s[0] - 15.0 * s[1];
            vec![0.2272 * s[0], off, off, 15.0 * s[1]]
        },
    )
}

fn hypcir() -> TestProblem {
    const SRC: &str = "Circle/hyperbola intersection (CUTEst HYPCIR): x1 x2 - 1 = 0, x1^2 + x2^2 - 4 = 0; x0 = (0, 1)";
    problem(
        "HYPCIR", SRC, 2, 2, vec![0.0, 1.0],
        zero_f, zero_g, flat,
        |x| vec![x[0] * x[1] - 1.0, x[0] * x[0] + x[1] * x[1] - 4.0],
        |x| vec![x[1], x[0], 2.0 * x[0], 2.0 * x[1]],
        |_, s| vec![2.0 * s[1], s[0], s[0], 2.0 * s[1]],
    )
}

fn powellbs() -> TestProblem {
    const SRC: &str = "Powell badly scaled (CUTEst POWELLBS): 1e4 x1 x2 - 1 = 0, \
                       exp(-x1) + exp(-x2) - 1.0001 = 0; x0 = (0, 1)";
    problem(
        "POWELLBS", SRC, 2, 2, vec![0.0, 1.0],
        zero_f, zero_g, flat,
        |x| vec![1e4 * x[0] * x[1] - 1.0, (-x[0]).exp() + (-x[1]).exp() - 1.0001],
        |x| vec![1e4 * x[1], 1e4 * x[0], -(-x[0]).exp(), -(-x[1]).exp()],
        |x, s| {
            let off = 1e4 * s[0];
            vec![s[1] * (-x[0]).exp(), off, off, s[1] * (-x[1]).exp()]
        },
    )
}

fn zangwil3() -> TestProblem {
    const SRC: &str = "Zangwill (CUTEst ZANGWIL3): x1 - x2 + x3 = 0, -x1 + x2 + x3 = 0, x1 + x2 - x3 = 0; \
                       x0 = (100, -1, 2.5)";
    problem(
        "ZANGWIL3", SRC, 3, 3, vec![100.0, -1.0, 2.5],
        zero_f, zero_g, flat,
        |x| vec![x[0] - x[1] + x[2], -x[0] + x[1] + x[2], x[0] + x[1] - x[2]],
        |_| vec![1.0, -1.0, 1.0, -1.0, 1.0, 1.0, 1.0, 1.0, -1.0],
        no_curvature,
    )
    .with_solution(vec![0.0, 0.0, 0.0], true)
}

fn hatfldf() -> TestProblem {
    const SRC: &str = "Hatfield F (CUTEst HATFLDF): x1 + x2 x3^i - a_i = 0, i = 1..3, \
                       a = (0.032, 0.056, 0.099); x0 = (0.1, 0.1, 0.1)";
    const A: [f64; 3] = [0.032, 0.056, 0.099];
    problem(
        "HATFLDF", SRC, 3, 3, vec![0.1, 0.1, 0.1],
        zero_f, zero_g, flat,
        |x| (0..3).map(|i| x[0] + x[1] * x[2].powi(i as i32 + 1) - A[i]).collect(),
        |x| {
            (0..3)
                .flat_map(|i| {
                    let k = i + 1;
                    [1.0, x[2].powi(k), k as f64 * x[1] * x[2].powi(k - 1)]
                })
                .collect()
        },
        |x, s| {
            let mut h = zeros(9);
            for (i, si) in s.iter().enumerate() {
                let k = i as i32 + 1;
                let cross = k as f64 * x[2].powi(k - 1) * si;
                h[5] += cross;
                h[7] += cross;
                if k >= 2 {
                    h[8] += (k * (k - 1)) as f64 * x[1] * x[2].powi(k - 2) * si;
                }
            }
            h
        },
    )
}

fn maratos() -> TestProblem {
    const SRC: &str = "Maratos (CUTEst MARATOS): f = -x1 + 1e-6 (x1^2 + x2^2 - 1), \
                       x1^2 + x2^2 - 1 = 0; x0 = (1.1, 0.1)";
    const TAU: f64 = 1e-6;
    problem(
        "MARATOS", SRC, 2, 1, vec![1.1, 0.1],
        |x| -x[0] + TAU * (x[0] * x[0] + x[1] * x[1] - 1.0),
        |x| vec![-1.0 + 2.0 * TAU * x[0], 2.0 * TAU * x[1]],
        |_| vec![2.0 * TAU, 0.0, 0.0, 2.0 * TAU],
        |x| vec![x[0] * x[0] + x[1] * x[1] - 1.0],
        |x| vec![2.0 * x[0], 2.0 * x[1]],
        |_, s| vec![2.0 * s[0], 0.0, 0.0, 2.0 * s[0]],
    )
    .with_solution(vec![1.0, 0.0], true)
}

fn hs6() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 6: f = (1 - x1)^2, 10(x2 - x1^2) = 0; x0 = (-1.2, 1)";
    problem(
        "HS6", SRC, 2, 1, vec![-1.2, 1.0],
        |x| (1.0 - x[0]).powi(2),
        |x| vec![-2.0 * (1.0 - x[0]), 0.0],
        |_| vec![2.0, 0.0, 0.0, 0.0],
        |x| vec![10.0 * (x[1] - x[0] * x[0])],
        |x| vec![-20.0 * x[0], 10.0],
        |_, s| vec![-20.0 * s[0], 0.0, 0.0, 0.0],
    )
    .with_solution(vec![1.0, 1.0], true)
}

fn hs7() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 7: f = ln(1 + x1^2) - x2, (1 + x1^2)^2 + x2^2 - 4 = 0; x0 = (2, 2)";
    problem(
        "HS7", SRC, 2, 1, vec![2.0, 2.0],
        |x| (1.0 + x[0] * x[0]).ln() - x[1],
        |x| vec![2.0 * x[0] / (1.0 + x[0] * x[0]), -1.0],
        |x| {
            let q = 1.0 + x[0] * x[0];
            vec![2.0 * (1.0 - x[0] * x[0]) / (q * q), 0.0, 0.0, 0.0]
        },
        |x| vec![(1.0 + x[0] * x[0]).powi(2) + x[1] * x[1] - 4.0],
        |x| vec![4.0 * x[0] * (1.0 + x[0] * x[0]), 2.0 * x[1]],
        |x, s| vec![(4.0 + 12.0 * x[0] * x[0]) * s[0], 0.0, 0.0, 2.0 * s[0]],
    )
    .with_solution(vec![0.0, 3f64.sqrt()], true)
}

fn hs8() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 8: f = -1, x1^2 + x2^2 - 25 = 0, x1 x2 - 9 = 0; x0 = (2, 1)";
    let x1 = ((25.0 + 301f64.sqrt()) / 2.0).sqrt();
    problem(
        "HS8", SRC, 2, 2, vec![2.0, 1.0],
        |_| -1.0, zero_g, flat,
        |x| vec![x[0] * x[0] + x[1] * x[1] - 25.0, x[0] * x[1] - 9.0],
        |x| vec![2.0 * x[0], 2.0 * x[1], x[1], x[0]],
        |_, s| vec![2.0 * s[0], s[1], s[1], 2.0 * s[0]],
    )
    .with_solution(vec![x1, 9.0 / x1], false)
}

fn hs9() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 9: f = sin(pi x1/12) cos(pi x2/16), 4 x1 - 3 x2 = 0; x0 = (0, 0)";
    const A: f64 = PI / 12.0;
    const B: f64 = PI / 16.0;
    problem(
        "HS9", SRC, 2, 1, vec![0.0, 0.0],
        |x| (A * x[0]).sin() * (B * x[1]).cos(),
        |x| {
            vec![
                A * (A * x[0]).cos() * (B * x[1]).cos(),
                -B * (A * x[0]).sin() * (B * x[1]).sin(),
            ]
        },
        |x| {
            let (sa, ca) = (A * x[0]).sin_cos();
            let (sb, cb) = (B * x[1]).sin_cos();
            let off = -A * B * ca * sb;
            vec![-A * A * sa * cb, off, off, -B * B * sa * cb]
        },
        |x| vec![4.0 * x[0] - 3.0 * x[1]],
        |_| vec![4.0, -3.0],
        no_curvature,
    )
    .with_solution(vec![-3.0, -4.0], false)
}

fn hs26() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 26: f = (x1 - x2)^2 + (x2 - x3)^4, (1 + x2^2) x1 + x3^4 - 3 = 0; \
                       x0 = (-2.6, 2, 2)";
    problem(
        "HS26", SRC, 3, 1, vec![-2.6, 2.0, 2.0],
        |x| (x[0] - x[1]).powi(2) + (x[1] - x[2]).powi(4),
        |x| {
            let a = x[0] - x[1];
            let b = x[1] - x[2];
            vec![2.0 * a, -2.0 * a + 4.0 * b.powi(3), -4.0 * b.powi(3)]
        },
        |x| {
            let e = 12.0 * (x[1] - x[2]).powi(2);
            vec![2.0, -2.0, 0.0, -2.0, 2.0 + e, -e, 0.0, -e, e]
        },
        |x| vec![(1.0 + x[1] * x[1]) * x[0] + x[2].powi(4) - 3.0],
        |x| vec![1.0 + x[1] * x[1], 2.0 * x[0] * x[1], 4.0 * x[2].powi(3)],
        |x, s| {
            let s0 = s[0];
            vec![
                0.0, 2.0 * x[1] * s0, 0.0,
                2.0 * x[1] * s0, 2.0 * x[0] * s0, 0.0,
                0.0, 0.0, 12.0 * x[2] * x[2] * s0,
            ]
        },
    )
    .with_solution(vec![1.0, 1.0, 1.0], false)
}

fn hs27() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 27: f = 0.01(x1 - 1)^2 + (x2 - x1^2)^2, x1 + x3^2 + 1 = 0; x0 = (2, 2, 2)";
    problem(
        "HS27", SRC, 3, 1, vec![2.0, 2.0, 2.0],
        |x| 0.01 * (x[0] - 1.0).powi(2) + (x[1] - x[0] * x[0]).powi(2),
        |x| {
            let r = x[1] - x[0] * x[0];
            vec![0.02 * (x[0] - 1.0) - 4.0 * x[0] * r, 2.0 * r, 0.0]
        },
        |x| {
            let h00 = 0.02 - 4.0 * x[1] + 12.0 * x[0] * x[0];
            let h01 = -4.0 * x[0];
            vec![h00, h01, 0.0, h01, 2.0, 0.0, 0.0, 0.0, 0.0]
        },
        |x| vec![x[0] + x[2] * x[2] + 1.0],
        |x| vec![1.0, 0.0, 2.0 * x[2]],
        |_, s| {
            let mut h = zeros(9);
            h[8] = 2.0 * s[0];
            h
        },
    )
    .with_solution(vec![-1.0, 1.0, 0.0], true)
}

fn hs28() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 28: f = (x1 + x2)^2 + (x2 + x3)^2, x1 + 2 x2 + 3 x3 - 1 = 0; x0 = (-4, 1, 1)";
    problem(
        "HS28", SRC, 3, 1, vec![-4.0, 1.0, 1.0],
        |x| (x[0] + x[1]).powi(2) + (x[1] + x[2]).powi(2),
        |x| {
            let a = 2.0 * (x[0] + x[1]);
            let b = 2.0 * (x[1] + x[2]);
            vec![a, a + b, b]
        },
        |_| vec![2.0, 2.0, 0.0, 2.0, 4.0, 2.0, 0.0, 2.0, 2.0],
        |x| vec![x[0] + 2.0 * x[1] + 3.0 * x[2] - 1.0],
        |_| vec![1.0, 2.0, 3.0],
        no_curvature,
    )
    .with_qp_solution()
}

fn genhs28() -> TestProblem {
    const SRC: &str = "CUTEst GENHS28 (n = 10): f = sum_{i<n} (x_i + x_{i+1})^2, \
                       x_i + 2 x_{i+1} + 3 x_{i+2} - 1 = 0 for i = 1..n-2; x0 = (-4, 1, ..., 1)";
    let mut x0 = vec![1.0; 10];
    x0[0] = -4.0;
    problem(
        "GENHS28", SRC, 10, 8, x0,
        |x| x.windows(2).map(|w| (w[0] + w[1]).powi(2)).sum(),
        |x| {
            let mut g = zeros(x.len());
            for i in 0..x.len() - 1 {
                let t = 2.0 * (x[i] + x[i + 1]);
                g[i] += t;
                g[i + 1] += t;
            }
            g
        },
        |x| {
            let n = x.len();
            let mut h = zeros(n * n);
            for i in 0..n - 1 {
                h[i * n + i] += 2.0;
                h[(i + 1) * n + i + 1] += 2.0;
                h[i * n + i + 1] += 2.0;
                h[(i + 1) * n + i] += 2.0;
            }
            h
        },
        |x| x.windows(3).map(|w| w[0] + 2.0 * w[1] + 3.0 * w[2] - 1.0).collect(),
        |x| {
            let n = x.len();
            let mut j = zeros((n - 2) * n);
            for i in 0..n - 2 {
                j[i * n + i] = 1.0;
                j[i * n + i + 1] = 2.0;
                j[i * n + i + 2] = 3.0;
            }
            j
        },
        no_curvature,
    )
    .with_qp_solution()
}

fn hs40() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 40: f = -x1 x2 x3 x4, x1^3 + x2^2 - 1 = 0, x1^2 x4 - x3 = 0, \
                       x4^2 - x2 = 0; x0 = (0.8, 0.8, 0.8, 0.8)";
    problem(
        "HS40", SRC, 4, 3, vec![0.8; 4],
        |x| -x[0] * x[1] * x[2] * x[3],
        |x| {
            (0..4)
                .map(|i| -(0..4).filter(|&k| k != i).map(|k| x[k]).product::<f64>())
                .collect()
        },
        |x| {
            let mut h = zeros(16);
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        h[i * 4 + j] = -(0..4).filter(|&k| k != i && k != j).map(|k| x[k]).product::<f64>();
                    }
                }
            }
            h
        },
        |x| {
            vec![
                x[0].powi(3) + x[1] * x[1] - 1.0,
                x[0] * x[0] * x[3] - x[2],
                x[3] * x[3] - x[1],
            ]
        },
        |x| {
            vec![
                3.0 * x[0] * x[0], 2.0 * x[1], 0.0, 0.0,
                2.0 * x[0] * x[3], 0.0, -1.0, x[0] * x[0],
                0.0, -1.0, 0.0, 2.0 * x[3],
            ]
        },
        |x, s| {
            let mut h = zeros(16);
            h[0] = 6.0 * x[0] * s[0] + 2.0 * x[3] * s[1];
            h[5] = 2.0 * s[0];
            h[3] = 2.0 * x[0] * s[1];
            h[12] = 2.0 * x[0] * s[1];
            h[15] = 2.0 * s[2];
            h
        },
    )
    .with_solution(
        vec![2f64.powf(-1.0 / 3.0), FRAC_1_SQRT_2, 2f64.powf(-11.0 / 12.0), 2f64.powf(-0.25)],
        false,
    )
}

fn hs42() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 42: f = sum (x_i - i)^2, x1 - 2 = 0, x3^2 + x4^2 - 2 = 0; x0 = (1, 1, 1, 1)";
    problem(
        "HS42", SRC, 4, 2, vec![1.0; 4],
        |x| x.iter().enumerate().map(|(i, v)| (v - (i + 1) as f64).powi(2)).sum(),
        |x| x.iter().enumerate().map(|(i, v)| 2.0 * (v - (i + 1) as f64)).collect(),
        |_| {
            let mut h = zeros(16);
            for i in 0..4 {
                h[i * 5] = 2.0;
            }
            h
        },
        |x| vec![x[0] - 2.0, x[2] * x[2] + x[3] * x[3] - 2.0],
        |x| vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0 * x[2], 2.0 * x[3]],
        |_, s| {
            let mut h = zeros(16);
            h[10] = 2.0 * s[1];
            h[15] = 2.0 * s[1];
            h
        },
    )
    .with_solution(vec![2.0, 2.0, 0.6 * SQRT_2, 0.8 * SQRT_2], true)
}

fn hs48() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 48: f = (x1 - 1)^2 + (x2 - x3)^2 + (x4 - x5)^2, \
                       sum x - 5 = 0, x3 - 2(x4 + x5) + 3 = 0; x0 = (3, 5, -3, 2, -2)";
    problem(
        "HS48", SRC, 5, 2, vec![3.0, 5.0, -3.0, 2.0, -2.0],
        |x| (x[0] - 1.0).powi(2) + (x[1] - x[2]).powi(2) + (x[3] - x[4]).powi(2),
        |x| {
            let a = 2.0 * (x[1] - x[2]);
            let b = 2.0 * (x[3] - x[4]);
            vec![2.0 * (x[0] - 1.0), a, -a, b, -b]
        },
        |_| {
            vec![
                2.0, 0.0, 0.0, 0.0, 0.0,
                0.0, 2.0, -2.0, 0.0, 0.0,
                0.0, -2.0, 2.0, 0.0, 0.0,
                0.0, 0.0, 0.0, 2.0, -2.0,
                0.0, 0.0, 0.0, -2.0, 2.0,
            ]
        },
        |x| vec![x.iter().sum::<f64>() - 5.0, x[2] - 2.0 * (x[3] + x[4]) + 3.0],
        |_| vec![1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, -2.0, -2.0],
        no_curvature,
    )
    .with_qp_solution()
}

fn hs51_objective(x: &[f64]) -> f64 {
    (x[0] - x[1]).powi(2) + (x[1] + x[2] - 2.0).powi(2) + (x[3] - 1.0).powi(2) + (x[4] - 1.0).powi(2)
}

fn hs51_gradient(x: &[f64]) -> Vec<f64> {
    let a = 2.0 * (x[0] - x[1]);
    let b = 2.0 * (x[1] + x[2] - 2.0);
    vec![a, -a + b, b, 2.0 * (x[3] - 1.0), 2.0 * (x[4] - 1.0)]
}

fn hs51_hessian(_x: &[f64]) -> Vec<f64> {
    vec![
        2.0, -2.0, 0.0, 0.0, 0.0,
        -2.0, 4.0, 2.0, 0.0, 0.0,
        0.0, 2.0, 2.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 2.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 2.0,
    ]
}

fn hs52_jacobian(_x: &[f64]) -> Vec<f64> {
    vec![
        1.0, 3.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 1.0, -2.0,
        0.0, 1.0, 0.0, 0.0, -1.0,
    ]
}

fn hs51() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 51: f = (x1 - x2)^2 + (x2 + x3 - 2)^2 + (x4 - 1)^2 + (x5 - 1)^2, \
                       x1 + 3 x2 - 4 = 0, x3 + x4 - 2 x5 = 0, x2 - x5 = 0; x0 = (2.5, 0.5, 2, -1, 0.5)";
    problem(
        "HS51", SRC, 5, 3, vec![2.5, 0.5, 2.0, -1.0, 0.5],
        hs51_objective, hs51_gradient, hs51_hessian,
        |x| vec![x[0] + 3.0 * x[1] - 4.0, x[2] + x[3] - 2.0 * x[4], x[1] - x[4]],
        hs52_jacobian,
        no_curvature,
    )
    .with_qp_solution()
}

fn hs52() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 52: f = (4 x1 - x2)^2 + (x2 + x3 - 2)^2 + (x4 - 1)^2 + (x5 - 1)^2, \
                       x1 + 3 x2 = 0, x3 + x4 - 2 x5 = 0, x2 - x5 = 0; x0 = (2, 2, 2, 2, 2)";
    problem(
        "HS52", SRC, 5, 3, vec![2.0; 5],
        |x| (4.0 * x[0] - x[1]).powi(2) + (x[1] + x[2] - 2.0).powi(2) + (x[3] - 1.0).powi(2) + (x[4] - 1.0).powi(2),
        |x| {
            let a = 2.0 * (4.0 * x[0] - x[1]);
            let b = 2.0 * (x[1] + x[2] - 2.0);
            vec![4.0 * a, -a + b, b, 2.0 * (x[3] - 1.0), 2.0 * (x[4] - 1.0)]
        },
        |_| {
            vec![
                32.0, -8.0, 0.0, 0.0, 0.0,
                -8.0, 4.0, 2.0, 0.0, 0.0,
                0.0, 2.0, 2.0, 0.0, 0.0,
                0.0, 0.0, 0.0, 2.0, 0.0,
                0.0, 0.0, 0.0, 0.0, 2.0,
            ]
        },
        |x| vec![x[0] + 3.0 * x[1], x[2] + x[3] - 2.0 * x[4], x[1] - x[4]],
        hs52_jacobian,
        no_curvature,
    )
    .with_qp_solution()
}

fn bt3() -> TestProblem {
    const SRC: &str = "Boggs-Tolle 3: HS51 objective with HS52 constraints \
                       (x1 + 3 x2 = 0, x3 + x4 - 2 x5 = 0, x2 - x5 = 0); x0 = (20, 20, 20, 20, 20)";
    problem(
        "BT3", SRC, 5, 3, vec![20.0; 5],
        hs51_objective, hs51_gradient, hs51_hessian,
        |x| vec![x[0] + 3.0 * x[1], x[2] + x[3] - 2.0 * x[4], x[1] - x[4]],
        hs52_jacobian,
        no_curvature,
    )
    .with_qp_solution()
}

fn bt1() -> TestProblem {
    const SRC: &str = "Boggs-Tolle 1: f = 100 x1^2 + 100 x2^2 - x1 - 100, x1^2 + x2^2 - 1 = 0; x0 = (0.08, 0.06)";
    problem(
        "BT1", SRC, 2, 1, vec![0.08, 0.06],
        |x| 100.0 * x[0] * x[0] + 100.0 * x[1] * x[1] - x[0] - 100.0,
        |x| vec![200.0 * x[0] - 1.0, 200.0 * x[1]],
        |_| vec![200.0, 0.0, 0.0, 200.0],
        |x| vec![x[0] * x[0] + x[1] * x[1] - 1.0],
        |x| vec![2.0 * x[0], 2.0 * x[1]],
        |_, s| vec![2.0 * s[0], 0.0, 0.0, 2.0 * s[0]],
    )
    .with_solution(vec![1.0, 0.0], true)
}

fn bt2_objective(x: &[f64]) -> f64 {
    (x[0] - 1.0).powi(2) + (x[0] - x[1]).powi(2) + (x[1] - x[2]).powi(4)
}

fn bt2() -> TestProblem {
    const SRC: &str = "Boggs-Tolle 2: f = (x1 - 1)^2 + (x1 - x2)^2 + (x2 - x3)^4, \
                       x1 (1 + x2^2) + x3^4 - 4 - 3 sqrt(2) = 0; x0 = (10, 10, 10)";
    problem(
        "BT2", SRC, 3, 1, vec![10.0; 3],
        bt2_objective,
        |x| {
            let a = x[0] - x[1];
            let b = x[1] - x[2];
            vec![2.0 * (x[0] - 1.0) + 2.0 * a, -2.0 * a + 4.0 * b.powi(3), -4.0 * b.powi(3)]
        },
        |x| {
            let e = 12.0 * (x[1] - x[2]).powi(2);
            vec![4.0, -2.0, 0.0, -2.0, 2.0 + e, -e, 0.0, -e, e]
        },
        |x| vec![x[0] * (1.0 + x[1] * x[1]) + x[2].powi(4) - 4.0 - 3.0 * SQRT_2],
        |x| vec![1.0 + x[1] * x[1], 2.0 * x[0] * x[1], 4.0 * x[2].powi(3)],
        |x, s| {
            let s0 = s[0];
            vec![
                0.0, 2.0 * x[1] * s0, 0.0,
                2.0 * x[1] * s0, 2.0 * x[0] * s0, 0.0,
                0.0, 0.0, 12.0 * x[2] * x[2] * s0,
            ]
        },
    )
}

fn bt4() -> TestProblem {
    const SRC: &str = "Boggs-Tolle 4: f = x1 - x2 + x2^3, x1^2 + x2^2 + x3^2 - 25 = 0, x1 + x2 + x3 - 1 = 0; \
                       x0 = (3.1494, 1.4523, -3.6017)";
    problem(
        "BT4", SRC, 3, 2, vec![3.1494, 1.4523, -3.6017],
        |x| x[0] - x[1] + x[1].powi(3),
        |x| vec![1.0, -1.0 + 3.0 * x[1] * x[1], 0.0],
        |x| {
            let mut h = zeros(9);
            h[4] = 6.0 * x[1];
            h
        },
        |x| vec![x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 25.0, x[0] + x[1] + x[2] - 1.0],
        |x| vec![2.0 * x[0], 2.0 * x[1], 2.0 * x[2], 1.0, 1.0, 1.0],
        |_, s| {
            let d = 2.0 * s[0];
            vec![d, 0.0, 0.0, 0.0, d, 0.0, 0.0, 0.0, d]
        },
    )
}

fn bt5() -> TestProblem {
    const SRC: &str = "Boggs-Tolle 5: f = 1000 - x1^2 - 2 x2^2 - x3^2 - x1 x2 - x1 x3, \
                       x1^2 + x2^2 + x3^2 - 25 = 0, 8 x1 + 14 x2 + 7 x3 - 56 = 0; x0 = (2, 2, 2)";
    problem(
        "BT5", SRC, 3, 2, vec![2.0; 3],
        |x| 1000.0 - x[0] * x[0] - 2.0 * x[1] * x[1] - x[2] * x[2] - x[0] * x[1] - x[0] * x[2],
        |x| vec![-2.0 * x[0] - x[1] - x[2], -4.0 * x[1] - x[0], -2.0 * x[2] - x[0]],
        |_| vec![-2.0, -1.0, -1.0, -1.0, -4.0, 0.0, -1.0, 0.0, -2.0],
        |x| {
            vec![
                x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 25.0,
                8.0 * x[0] + 14.0 * x[1] + 7.0 * x[2] - 56.0,
            ]
        },
        |x| vec![2.0 * x[0], 2.0 * x[1], 2.0 * x[2], 8.0, 14.0, 7.0],
        |_, s| {
            let d = 2.0 * s[0];
            vec![d, 0.0, 0.0, 0.0, d, 0.0, 0.0, 0.0, d]
        },
    )
}

/// Shared by BT6/HS77 and HS46: `c₁ = x1² x4 + sin(x4 - x5) - a`,
/// `c₂ = x2 + x3⁴ x4² - b`.
fn sin_pair_constraints(x: &[f64], a: f64, b: f64) -> Vec<f64> {
    vec![
        x[0] * x[0] * x[3] + (x[3] - x[4]).sin() - a,
        x[1] + x[2].powi(4) * x[3] * x[3] - b,
    ]
}

fn sin_pair_jacobian(x: &[f64]) -> Vec<f64> {
    let cs = (x[3] - x[4]).cos();
    vec![
        2.0 * x[0] * x[3], 0.0, 0.0, x[0] * x[0] + cs, -cs,
        0.0, 1.0, 4.0 * x[2].powi(3) * x[3] * x[3], 2.0 * x[2].powi(4) * x[3], 0.0,
    ]
}

fn sin_pair_hessian(x: &[f64], s: &[f64]) -> Vec<f64> {
    let sn = (x[3] - x[4]).sin();
    let mut h = zeros(25);
    let at = |i: usize, j: usize| i * 5 + j;
    h[at(0, 0)] = 2.0 * x[3] * s[0];
    h[at(0, 3)] = 2.0 * x[0] * s[0];
    h[at(3, 0)] = 2.0 * x[0] * s[0];
    h[at(3, 3)] = -sn * s[0] + 2.0 * x[2].powi(4) * s[1];
    h[at(3, 4)] = sn * s[0];
    h[at(4, 3)] = sn * s[0];
    h[at(4, 4)] = -sn * s[0];
    h[at(2, 2)] = 12.0 * x[2] * x[2] * x[3] * x[3] * s[1];
    h[at(2, 3)] = 8.0 * x[2].powi(3) * x[3] * s[1];
    h[at(3, 2)] = 8.0 * x[2].powi(3) * x[3] * s[1];
    h
}

fn bt6_objective(x: &[f64]) -> f64 {
    (x[0] - 1.0).powi(2) + (x[0] - x[1]).powi(2) + (x[2] - 1.0).powi(2) + (x[3] - 1.0).powi(4) + (x[4] - 1.0).powi(6)
}

fn bt6_gradient(x: &[f64]) -> Vec<f64> {
    let a = 2.0 * (x[0] - x[1]);
    vec![2.0 * (x[0] - 1.0) + a, -a, 2.0 * (x[2] - 1.0), 4.0 * (x[3] - 1.0).powi(3), 6.0 * (x[4] - 1.0).powi(5)]
}

fn bt6_hessian(x: &[f64]) -> Vec<f64> {
    let mut h = zeros(25);
    h[0] = 4.0;
    h[1] = -2.0;
    h[5] = -2.0;
    h[6] = 2.0;
    h[12] = 2.0;
    h[18] = 12.0 * (x[3] - 1.0).powi(2);
    h[24] = 30.0 * (x[4] - 1.0).powi(4);
    h
}

fn bt6_constraints(x: &[f64]) -> Vec<f64> {
    sin_pair_constraints(x, 2.0 * SQRT_2, 8.0 + SQRT_2)
}

fn bt6() -> TestProblem {
    const SRC: &str = "Boggs-Tolle 6 (= HS77): f = (x1 - 1)^2 + (x1 - x2)^2 + (x3 - 1)^2 + (x4 - 1)^4 + (x5 - 1)^6, \
                       x1^2 x4 + sin(x4 - x5) - 2 sqrt(2) = 0, x2 + x3^4 x4^2 - 8 - sqrt(2) = 0; x0 = (2, ..., 2)";
    problem(
        "BT6", SRC, 5, 2, vec![2.0; 5],
        bt6_objective, bt6_gradient, bt6_hessian, bt6_constraints, sin_pair_jacobian, sin_pair_hessian,
    )
}

fn hs77() -> TestProblem {
    let mut p = bt6();
    p.name = "HS77";
    p.source = "Hock-Schittkowski 77: same formulation and start as BT6";
    p
}

fn hs46() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 46: f = (x1 - x2)^2 + (x3 - 1)^2 + (x4 - 1)^4 + (x5 - 1)^6, \
                       x1^2 x4 + sin(x4 - x5) - 1 = 0, x2 + x3^4 x4^2 - 2 = 0; \
                       x0 = (sqrt(2)/2, 1.75, 0.5, 2, 2)";
    problem(
        "HS46", SRC, 5, 2, vec![FRAC_1_SQRT_2, 1.75, 0.5, 2.0, 2.0],
        |x| (x[0] - x[1]).powi(2) + (x[2] - 1.0).powi(2) + (x[3] - 1.0).powi(4) + (x[4] - 1.0).powi(6),
        |x| {
            let a = 2.0 * (x[0] - x[1]);
            vec![a, -a, 2.0 * (x[2] - 1.0), 4.0 * (x[3] - 1.0).powi(3), 6.0 * (x[4] - 1.0).powi(5)]
        },
        |x| {
            let mut h = zeros(25);
            h[0] = 2.0;
            h[1] = -2.0;
            h[5] = -2.0;
            h[6] = 2.0;
            h[12] = 2.0;
            h[18] = 12.0 * (x[3] - 1.0).powi(2);
            h[24] = 30.0 * (x[4] - 1.0).powi(4);
            h
        },
        |x| sin_pair_constraints(x, 1.0, 2.0),
        sin_pair_jacobian,
        sin_pair_hessian,
    )
    .with_solution(vec![1.0; 5], true)
}

fn bt9() -> TestProblem {
    const SRC: &str = "Boggs-Tolle 9 (= HS39): f = -x1, x2 - x1^3 - x3^2 = 0, x1^2 - x2 - x4^2 = 0; x0 = (2, 2, 2, 2)";
    problem(
        "BT9", SRC, 4, 2, vec![2.0; 4],
        |x| -x[0],
        |_| vec![-1.0, 0.0, 0.0, 0.0],
        |_| zeros(16),
        |x| vec![x[1] - x[0].powi(3) - x[2] * x[2], x[0] * x[0] - x[1] - x[3] * x[3]],
        |x| vec![-3.0 * x[0] * x[0], 1.0, -2.0 * x[2], 0.0, 2.0 * x[0], -1.0, 0.0, -2.0 * x[3]],
        |x, s| {
            let mut h = zeros(16);
            h[0] = -6.0 * x[0] * s[0] + 2.0 * s[1];
            h[10] = -2.0 * s[0];
            h[15] = -2.0 * s[1];
            h
        },
    )
    .with_solution(vec![1.0, 1.0, 0.0, 0.0], true)
}

fn hs39() -> TestProblem {
    let mut p = bt9();
    p.name = "HS39";
    p.source = "Hock-Schittkowski 39: same formulation and start as BT9";
    p
}

fn bt11_objective(x: &[f64]) -> f64 {
    (x[0] - 1.0).powi(2) + (x[0] - x[1]).powi(2) + (x[1] - x[2]).powi(2) + (x[2] - x[3]).powi(4) + (x[3] - x[4]).powi(4)
}

fn bt11_gradient(x: &[f64]) -> Vec<f64> {
    let a = 2.0 * (x[0] - x[1]);
    let b = 2.0 * (x[1] - x[2]);
    let e = 4.0 * (x[2] - x[3]).powi(3);
    let q = 4.0 * (x[3] - x[4]).powi(3);
    vec![2.0 * (x[0] - 1.0) + a, -a + b, -b + e, -e + q, -q]
}

fn bt11_hessian(x: &[f64]) -> Vec<f64> {
    let e = 12.0 * (x[2] - x[3]).powi(2);
    let q = 12.0 * (x[3] - x[4]).powi(2);
    vec![
        4.0, -2.0, 0.0, 0.0, 0.0,
        -2.0, 4.0, -2.0, 0.0, 0.0,
        0.0, -2.0, 2.0 + e, -e, 0.0,
        0.0, 0.0, -e, e + q, -q,
        0.0, 0.0, 0.0, -q, q,
    ]
}

fn bt11_constraints(x: &[f64]) -> Vec<f64> {
    vec![
        x[0] + x[1] * x[1] + x[2].powi(3) - 2.0 - 3.0 * SQRT_2,
        x[1] - x[2] * x[2] + x[3] + 2.0 - 2.0 * SQRT_2,
        x[0] * x[4] - 2.0,
    ]
}

/// Constraint derivatives shared by BT11/HS79 and HS47, which differ only in
/// constants.
fn chain_jacobian(x: &[f64]) -> Vec<f64> {
    vec![
        1.0, 2.0 * x[1], 3.0 * x[2] * x[2], 0.0, 0.0,
        0.0, 1.0, -2.0 * x[2], 1.0, 0.0,
        x[4], 0.0, 0.0, 0.0, x[0],
    ]
}

fn chain_hessian(x: &[f64], s: &[f64]) -> Vec<f64> {
    let mut h = zeros(25);
    h[6] = 2.0 * s[0];
    h[12] = 6.0 * x[2] * s[0] - 2.0 * s[1];
    h[4] = s[2];
    h[20] = s[2];
    h
}

fn bt11() -> TestProblem {
    const SRC: &str = "Boggs-Tolle 11 (= HS79): f = (x1 - 1)^2 + (x1 - x2)^2 + (x2 - x3)^2 + (x3 - x4)^4 + (x4 - x5)^4, \
                       x1 + x2^2 + x3^3 - 2 - 3 sqrt(2) = 0, x2 - x3^2 + x4 + 2 - 2 sqrt(2) = 0, x1 x5 - 2 = 0; \
                       x0 = (2, ..., 2)";
    problem(
        "BT11", SRC, 5, 3, vec![2.0; 5],
        bt11_objective, bt11_gradient, bt11_hessian, bt11_constraints, chain_jacobian, chain_hessian,
    )
}

fn hs79() -> TestProblem {
    let mut p = bt11();
    p.name = "HS79";
    p.source = "Hock-Schittkowski 79: same formulation and start as BT11";
    p
}

fn hs47() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 47: f = (x1 - x2)^2 + (x2 - x3)^3 + (x3 - x4)^4 + (x4 - x5)^4, \
                       x1 + x2^2 + x3^3 - 3 = 0, x2 - x3^2 + x4 - 1 = 0, x1 x5 - 1 = 0; \
                       x0 = (2, sqrt(2), -1, 2 - sqrt(2), 0.5)";
    problem(
        "HS47", SRC, 5, 3, vec![2.0, SQRT_2, -1.0, 2.0 - SQRT_2, 0.5],
        |x| (x[0] - x[1]).powi(2) + (x[1] - x[2]).powi(3) + (x[2] - x[3]).powi(4) + (x[3] - x[4]).powi(4),
        |x| {
            let a = 2.0 * (x[0] - x[1]);
            let b = 3.0 * (x[1] - x[2]).powi(2);
            let e = 4.0 * (x[2] - x[3]).powi(3);
            let q = 4.0 * (x[3] - x[4]).powi(3);
            vec![a, -a + b, -b + e, -e + q, -q]
        },
        |x| {
            let b = 6.0 * (x[1] - x[2]);
            let e = 12.0 * (x[2] - x[3]).powi(2);
            let q = 12.0 * (x[3] - x[4]).powi(2);
            vec![
                2.0, -2.0, 0.0, 0.0, 0.0,
                -2.0, 2.0 + b, -b, 0.0, 0.0,
                0.0, -b, b + e, -e, 0.0,
                0.0, 0.0, -e, e + q, -q,
                0.0, 0.0, 0.0, -q, q,
            ]
        },
        |x| {
            vec![
                x[0] + x[1] * x[1] + x[2].powi(3) - 3.0,
                x[1] - x[2] * x[2] + x[3] - 1.0,
                x[0] * x[4] - 1.0,
            ]
        },
        chain_jacobian,
        chain_hessian,
    )
    .with_solution(vec![1.0; 5], false)
}

fn hs49() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 49: f = (x1 - x2)^2 + (x3 - 1)^2 + (x4 - 1)^4 + (x5 - 1)^6, \
                       x1 + x2 + x3 + 4 x4 - 7 = 0, x3 + 5 x5 - 6 = 0; x0 = (10, 7, 2, -3, 0.8)";
    problem(
        "HS49", SRC, 5, 2, vec![10.0, 7.0, 2.0, -3.0, 0.8],
        |x| (x[0] - x[1]).powi(2) + (x[2] - 1.0).powi(2) + (x[3] - 1.0).powi(4) + (x[4] - 1.0).powi(6),
        |x| {
            let a = 2.0 * (x[0] - x[1]);
            vec![a, -a, 2.0 * (x[2] - 1.0), 4.0 * (x[3] - 1.0).powi(3), 6.0 * (x[4] - 1.0).powi(5)]
        },
        |x| {
            let mut h = zeros(25);
            h[0] = 2.0;
            h[1] = -2.0;
            h[5] = -2.0;
            h[6] = 2.0;
            h[12] = 2.0;
            h[18] = 12.0 * (x[3] - 1.0).powi(2);
            h[24] = 30.0 * (x[4] - 1.0).powi(4);
            h
        },
        |x| vec![x[0] + x[1] + x[2] + 4.0 * x[3] - 7.0, x[2] + 5.0 * x[4] - 6.0],
        |_| vec![1.0, 1.0, 1.0, 4.0, 0.0, 0.0, 0.0, 1.0, 0.0, 5.0],
        no_curvature,
    )
    .with_solution(vec![1.0; 5], true)
}

fn hs50() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 50: f = (x1 - x2)^2 + (x2 - x3)^2 + (x3 - x4)^4 + (x4 - x5)^2, \
                       x_i + 2 x_{i+1} + 3 x_{i+2} - 6 = 0 (i = 1..3); x0 = (35, -31, 11, 5, -5)";
    problem(
        "HS50", SRC, 5, 3, vec![35.0, -31.0, 11.0, 5.0, -5.0],
        |x| (x[0] - x[1]).powi(2) + (x[1] - x[2]).powi(2) + (x[2] - x[3]).powi(4) + (x[3] - x[4]).powi(2),
        |x| {
            let a = 2.0 * (x[0] - x[1]);
            let b = 2.0 * (x[1] - x[2]);
            let e = 4.0 * (x[2] - x[3]).powi(3);
            let q = 2.0 * (x[3] - x[4]);
            vec![a, -a + b, -b + e, -e + q, -q]
        },
        |x| {
            let e = 12.0 * (x[2] - x[3]).powi(2);
            vec![
                2.0, -2.0, 0.0, 0.0, 0.0,
                -2.0, 4.0, -2.0, 0.0, 0.0,
                0.0, -2.0, 2.0 + e, -e, 0.0,
                0.0, 0.0, -e, e + 2.0, -2.0,
                0.0, 0.0, 0.0, -2.0, 2.0,
            ]
        },
        |x| x.windows(3).map(|w| w[0] + 2.0 * w[1] + 3.0 * w[2] - 6.0).collect(),
        |_| {
            vec![
                1.0, 2.0, 3.0, 0.0, 0.0,
                0.0, 1.0, 2.0, 3.0, 0.0,
                0.0, 0.0, 1.0, 2.0, 3.0,
            ]
        },
        no_curvature,
    )
    .with_solution(vec![1.0; 5], true)
}

fn hs56() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 56: f = -x1 x2 x3, x_i - 4.2 sin^2 x_{i+3} = 0 (i = 1..3), \
                       x1 + 2 x2 + 2 x3 - 7.2 sin^2 x7 = 0; \
                       x0 = (1, 1, 1, a, a, a, b), a = asin(sqrt(1/4.2)), b = asin(sqrt(5/7.2))";
    let a = (1.0f64 / 4.2).sqrt().asin();
    let b = (5.0f64 / 7.2).sqrt().asin();
    problem(
        "HS56", SRC, 7, 4, vec![1.0, 1.0, 1.0, a, a, a, b],
        |x| -x[0] * x[1] * x[2],
        |x| vec![-x[1] * x[2], -x[0] * x[2], -x[0] * x[1], 0.0, 0.0, 0.0, 0.0],
        |x| {
            let mut h = zeros(49);
            h[1] = -x[2];
            h[7] = -x[2];
            h[2] = -x[1];
            h[14] = -x[1];
            h[9] = -x[0];
            h[15] = -x[0];
            h
        },
        |x| {
            let sq = |t: f64| t.sin().powi(2);
            vec![
                x[0] - 4.2 * sq(x[3]),
                x[1] - 4.2 * sq(x[4]),
                x[2] - 4.2 * sq(x[5]),
                x[0] + 2.0 * x[1] + 2.0 * x[2] - 7.2 * sq(x[6]),
            ]
        },
        |x| {
            let mut j = zeros(28);
            for i in 0..3 {
                j[i * 7 + i] = 1.0;
                j[i * 7 + 3 + i] = -4.2 * (2.0 * x[3 + i]).sin();
            }
            j[21] = 1.0;
            j[22] = 2.0;
            j[23] = 2.0;
            j[27] = -7.2 * (2.0 * x[6]).sin();
            j
        },
        |x, s| {
            let mut h = zeros(49);
            for i in 0..3 {
                h[(3 + i) * 8] = -8.4 * (2.0 * x[3 + i]).cos() * s[i];
            }
            h[48] = -14.4 * (2.0 * x[6]).cos() * s[3];
            h
        },
    )
}

fn hs78() -> TestProblem {
    const SRC: &str = "Hock-Schittkowski 78: f = x1 x2 x3 x4 x5, sum x^2 - 10 = 0, x2 x3 - 5 x4 x5 = 0, \
                       x1^3 + x2^3 + 1 = 0; x0 = (-2, 1.5, 2, -1, -1)";
    problem(
        "HS78", SRC, 5, 3, vec![-2.0, 1.5, 2.0, -1.0, -1.0],
        |x| x.iter().product(),
        |x| {
            (0..5)
                .map(|i| (0..5).filter(|&k| k != i).map(|k| x[k]).product::<f64>())
                .collect()
        },
        |x| {
            let mut h = zeros(25);
            for i in 0..5 {
                for j in 0..5 {
                    if i != j {
                        h[i * 5 + j] = (0..5).filter(|&k| k != i && k != j).map(|k| x[k]).product::<f64>();
                    }
                }
            }
            h
        },
        |x| {
            vec![
                x.iter().map(|v| v * v).sum::<f64>() - 10.0,
                x[1] * x[2] - 5.0 * x[3] * x[4],
                x[0].powi(3) + x[1].powi(3) + 1.0,
            ]
        },
        |x| {
            vec![
                2.0 * x[0], 2.0 * x[1], 2.0 * x[2], 2.0 * x[3], 2.0 * x[4],
                0.0, x[2], x[1], -5.0 * x[4], -5.0 * x[3],
                3.0 * x[0] * x[0], 3.0 * x[1] * x[1], 0.0, 0.0, 0.0,
            ]
        },
        |x, s| {
            let mut h = zeros(25);
            for i in 0..5 {
                h[i * 6] = 2.0 * s[0];
            }
            h[7] += s[1];
            h[11] += s[1];
            h[19] += -5.0 * s[1];
            h[23] += -5.0 * s[1];
            h[0] += 6.0 * x[0] * s[2];
            h[6] += 6.0 * x[1] * s[2];
            h
        },
    )
}

fn bt12() -> TestProblem {
    const SRC: &str = "Boggs-Tolle 12: f = 0.01 x1^2 + x2^2, x1 x2 - x3^2 - 25 = 0, \
                       x1^2 + x2^2 - x4^2 - 25 = 0, x1 - x5^2 - 2 = 0; x0 = (15, -2, 0, 1, 0)";
    let x1 = 250f64.sqrt();
    problem(
        "BT12", SRC, 5, 3, vec![15.0, -2.0, 0.0, 1.0, 0.0],
        |x| 0.01 * x[0] * x[0] + x[1] * x[1],
        |x| vec![0.02 * x[0], 2.0 * x[1], 0.0, 0.0, 0.0],
        |_| {
            let mut h = zeros(25);
            h[0] = 0.02;
            h[6] = 2.0;
            h
        },
        |x| {
            vec![
                x[0] * x[1] - x[2] * x[2] - 25.0,
                x[0] * x[0] + x[1] * x[1] - x[3] * x[3] - 25.0,
                x[0] - x[4] * x[4] - 2.0,
            ]
        },
        |x| {
            vec![
                x[1], x[0], -2.0 * x[2], 0.0, 0.0,
                2.0 * x[0], 2.0 * x[1], 0.0, -2.0 * x[3], 0.0,
                1.0, 0.0, 0.0, 0.0, -2.0 * x[4],
            ]
        },
        |_, s| {
            let mut h = zeros(25);
            h[1] = s[0];
            h[5] = s[0];
            h[12] = -2.0 * s[0];
            h[0] = 2.0 * s[1];
            h[6] = 2.0 * s[1];
            h[18] = -2.0 * s[1];
            h[24] = -2.0 * s[2];
            h
        },
    )
    .with_solution(vec![x1, 25.0 / x1, 0.0, (x1 * x1 + 625.0 / (x1 * x1) - 25.0).sqrt(), (x1 - 2.0).sqrt()], false)
}

fn byrdsphr() -> TestProblem {
    const SRC: &str = "Byrd sphere problem (CUTEst BYRDSPHR): f = -x1 - x2 - x3, x1^2 + x2^2 + x3^2 - 9 = 0, \
                       (x1 - 1)^2 + x2^2 + x3^2 - 9 = 0; x0 = (5, 1e-4, -1e-4)";
    let t = 4.375f64.sqrt();
    problem(
        "BYRDSPHR", SRC, 3, 2, vec![5.0, 1e-4, -1e-4],
        |x| -x[0] - x[1] - x[2],
        |_| vec![-1.0, -1.0, -1.0],
        |_| zeros(9),
        |x| {
            vec![
                x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 9.0,
                (x[0] - 1.0).powi(2) + x[1] * x[1] + x[2] * x[2] - 9.0,
            ]
        },
        |x| vec![2.0 * x[0], 2.0 * x[1], 2.0 * x[2], 2.0 * (x[0] - 1.0), 2.0 * x[1], 2.0 * x[2]],
        |_, s| {
            let d = 2.0 * (s[0] + s[1]);
            vec![d, 0.0, 0.0, 0.0, d, 0.0, 0.0, 0.0, d]
        },
    )
    .with_solution(vec![0.5, t, t], true)
}

/// All built-in problems, in registry order.
pub fn builtin_collection() -> Vec<TestProblem> {
    vec![
        booth(), himmelba(), himmelbc(), rsnbrne(), sinvalne(), cubene(), gottfr(), hypcir(),
        powellbs(), zangwil3(), hatfldf(), maratos(), hs6(), hs7(), hs8(), hs9(), bt1(), bt2(),
        bt3(), bt4(), bt5(), bt6(), bt9(), bt11(), bt12(), hs26(), hs27(), hs28(), hs39(),
        hs40(), hs42(), hs46(), hs47(), hs48(), hs49(), hs50(), hs51(), hs52(), hs56(), hs77(),
        hs78(), hs79(), byrdsphr(), genhs28(),
    ]
}

/// Case-insensitive lookup by name.
pub fn find_builtin(name: &str) -> Option<TestProblem> {
    builtin_collection()
        .into_iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
}
