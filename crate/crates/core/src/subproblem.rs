//! Choosing the regularization shift from a multi-shift solve.
//!
//! Exact cubic-regularization minimizers satisfy `λ = ‖u(λ)‖ / β`. Instead of
//! solving that secular relation, the solver picks the ladder entry that comes
//! closest to it, and after a rejected trial walks up the ladder to the first
//! shift whose implied `β(λ) = ‖u(λ)‖ / λ` is at most `γ₁ β`.

use crate::error::{Error, Result};
use crate::shifted_cg::ShiftSolveSet;

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSelection {
    /// Smallest index from which every shift is usable.
    pub i_plus: usize,
    /// Current candidate index.
    pub j: usize,
    lambdas: Vec<f64>,
    u_norms: Vec<f64>,
}

impl ShiftSelection {
    /// Builds a selection directly from shift values and step norms; entries
    /// below `i_plus` are ignored.
    pub fn from_parts(i_plus: usize, j: usize, lambdas: Vec<f64>, u_norms: Vec<f64>) -> Self {
        assert_eq!(lambdas.len(), u_norms.len());
        assert!(i_plus <= j && j < lambdas.len());
        Self { i_plus, j, lambdas, u_norms }
    }

    /// Index of the largest shift.
    pub fn m(&self) -> usize {
        self.lambdas.len() - 1
    }

    pub fn lambda(&self, i: usize) -> f64 {
        self.lambdas[i]
    }

    pub fn u_norm(&self, i: usize) -> f64 {
        self.u_norms[i]
    }

    /// `‖u(λᵢ)‖ / λᵢ`, defined for `i ≥ i_plus`.
    pub fn beta_of(&self, i: usize) -> Option<f64> {
        (i >= self.i_plus && i < self.lambdas.len()).then(|| self.u_norms[i] / self.lambdas[i])
    }
}

/// Picks `i⁺` and the shift whose `β λᵢ` is closest to `‖u(λᵢ)‖`.
///
/// Shifts that hit negative curvature or the inner-iteration cap are not
/// usable. `i⁺` is the smallest index with every shift from there to the top
/// of the ladder usable. Ties go to the smaller index.
pub fn select_initial(set: &ShiftSolveSet, beta: f64) -> Result<ShiftSelection> {
    let results = &set.results;
    let Some(last) = results.last() else {
        return Err(Error::LadderExhausted("empty shift ladder".into()));
    };
    if !last.is_available() {
        return Err(Error::LadderExhausted(format!(
            "largest shift {:e} is not usable ({:?})",
            last.lambda, last.status
        )));
    }
    let i_plus = results
        .iter()
        .rposition(|r| !r.is_available())
        .map_or(0, |i| i + 1);

    let lambdas: Vec<f64> = results.iter().map(|r| r.lambda).collect();
    let u_norms: Vec<f64> = results.iter().map(|r| r.u.norm()).collect();

    let mut j = i_plus;
    let mut best = f64::INFINITY;
    for i in i_plus..results.len() {
        let gap = (beta * lambdas[i] - u_norms[i]).abs();
        if gap < best {
            best = gap;
            j = i;
        }
    }
    Ok(ShiftSelection { i_plus, j, lambdas, u_norms })
}

/// Smallest `j' > j` with `β(λⱼ') ≤ γ₁ β`, returned with that `β(λⱼ')`.
pub fn advance_on_failure(sel: &ShiftSelection, beta: f64, gamma1: f64) -> Result<(usize, f64)> {
    let target = gamma1 * beta;
    (sel.j + 1..=sel.m())
        .find_map(|i| sel.beta_of(i).filter(|&b| b <= target).map(|b| (i, b)))
        .ok_or_else(|| {
            Error::LadderExhausted(format!(
                "no shift above index {} reaches beta <= {target:e}",
                sel.j
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shifted_cg::{ShiftSolveResult, ShiftStatus};
    use nalgebra::DVector;
    use proptest::prelude::*;

    fn set_from(norms: &[f64], lambdas: &[f64], ok_from: usize) -> ShiftSolveSet {
        let results = norms
            .iter()
            .zip(lambdas)
            .enumerate()
            .map(|(i, (&n, &l))| ShiftSolveResult {
                shift_index: i,
                lambda: l,
                u: DVector::from_vec(vec![n]),
                residual_norm: 0.0,
                status: if i >= ok_from { ShiftStatus::Converged } else { ShiftStatus::NegativeCurvature },
                inner_iterations: 1,
            })
            .collect();
        ShiftSolveSet { results, g_z_norm: 1.0, matvecs: 0 }
    }

    fn brute_force_j(norms: &[f64], lambdas: &[f64], from: usize, beta: f64) -> usize {
        let gaps: Vec<f64> = (from..norms.len())
            .map(|i| (beta * lambdas[i] - norms[i]).abs())
            .collect();
        let min = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
        from + gaps.iter().position(|&g| g == min).unwrap()
    }

    #[test]
    fn crossing_picks_closer_side() {
        let lambdas: Vec<f64> = (0..6).map(|i| 2f64.powi(i)).collect();
        let norms = [10.0, 8.0, 6.5, 5.2, 4.1, 3.0];
        // β λ: 1, 2, 4, 8, 16, 32 → gaps 9, 6, 2.5, 2.8, 11.9, 29
        let set = set_from(&norms, &lambdas, 0);
        let sel = select_initial(&set, 1.0).unwrap();
        assert_eq!(sel.j, brute_force_j(&norms, &lambdas, 0, 1.0));
        assert_eq!(sel.j, 2);

        // β = 0.6: βλ = 0.6, 1.2, 2.4, 4.8, 9.6 → gaps 9.4, 6.8, 4.1, 0.4, 5.5 → j = 3
        let sel = select_initial(&set, 0.6).unwrap();
        assert_eq!(sel.j, 3);
        // β = 0.27: βλ₃ = 2.16 < 5.2, βλ₄ = 4.32 > 4.1, gap 0.22 at 4 vs 3.04 at 3
        let sel = select_initial(&set, 0.27).unwrap();
        assert_eq!(sel.j, brute_force_j(&norms, &lambdas, 0, 0.27));
        assert_eq!(sel.j, 4);
    }

    #[test]
    fn only_top_shift_usable() {
        let set = set_from(&[1.0, 1.0, 1.0], &[1.0, 2.0, 4.0], 2);
        let sel = select_initial(&set, 100.0).unwrap();
        assert_eq!((sel.i_plus, sel.j), (2, 2));
    }

    #[test]
    fn exact_secular_match() {
        let set = set_from(&[5.0, 3.0, 2.0], &[1.0, 2.0, 4.0], 0);
        let sel = select_initial(&set, 1.5).unwrap();
        assert_eq!(sel.j, 1);
    }

    #[test]
    fn no_usable_shift_exhausts() {
        let set = set_from(&[1.0, 1.0], &[1.0, 2.0], 5);
        assert!(matches!(select_initial(&set, 1.0), Err(Error::LadderExhausted(_))));
    }

    #[test]
    fn cap_hit_in_middle_moves_i_plus() {
        let mut set = set_from(&[4.0, 3.0, 2.0, 1.0], &[1.0, 2.0, 4.0, 8.0], 0);
        set.results[1].status = ShiftStatus::IterationCap;
        let sel = select_initial(&set, 0.01).unwrap();
        assert_eq!(sel.i_plus, 2);
        assert_eq!(sel.beta_of(1), None);
    }

    #[test]
    fn advance_walks_to_first_small_beta() {
        let sel = ShiftSelection::from_parts(0, 0, vec![1.0; 4], vec![10.0, 3.0, 0.9, 0.2]);
        assert_eq!(advance_on_failure(&sel, 10.0, 0.1).unwrap(), (2, 0.9));
    }

    #[test]
    fn advance_immediate_and_exhausted() {
        let sel = ShiftSelection::from_parts(0, 0, vec![1.0; 3], vec![10.0, 0.5, 0.1]);
        assert_eq!(advance_on_failure(&sel, 10.0, 0.1).unwrap(), (1, 0.5));
        let sel = ShiftSelection::from_parts(0, 0, vec![1.0; 3], vec![10.0, 5.0, 2.0]);
        assert!(matches!(advance_on_failure(&sel, 10.0, 0.1), Err(Error::LadderExhausted(_))));
        let sel = ShiftSelection::from_parts(0, 2, vec![1.0; 3], vec![10.0, 5.0, 2.0]);
        assert!(advance_on_failure(&sel, 10.0, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn advance_is_monotone(
            norms in prop::collection::vec(1e-6f64..10.0, 2..12),
            beta in 1e-3f64..10.0,
        ) {
            let lambdas: Vec<f64> = (0..norms.len()).map(|i| 1e-2 * 10f64.sqrt().powi(i as i32)).collect();
            let set = set_from(&norms, &lambdas, 0);
            let sel = select_initial(&set, beta).unwrap();
            prop_assert_eq!(sel.j, brute_force_j(&norms, &lambdas, 0, beta));
            if let Ok((j2, b2)) = advance_on_failure(&sel, beta, 0.1) {
                prop_assert!(j2 > sel.j);
                prop_assert!(b2 <= 0.1 * beta);
                for i in sel.j + 1..j2 {
                    prop_assert!(sel.beta_of(i).unwrap() > 0.1 * beta);
                }
            }
        }
    }
}
