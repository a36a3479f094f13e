//! The outer loop: composite steps with a shift-ladder cubic regularization,
//! accepted or rejected on an ℓ2 exact-penalty merit function.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ConstraintFactorization, NullspaceBasis};
use crate::merit::{merit_from_parts, robust_acceptance_ratio, PenaltyState};
use crate::problem::Problem;
use crate::shifted_cg::{solve_all_shifts, ShiftLadder, ShiftSolveOptions, ShiftSolveSet};
use crate::step::{vertical_step, StepDecomposition};
use crate::subproblem::{advance_on_failure, select_initial, ShiftSelection};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub beta0: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub mu_init: f64,
    pub nu: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub theta: f64,
    pub xi: f64,
    pub zeta: f64,
    /// Sampling parameter in the horizontal-decrease bound `‖u‖³ / (2tβ)`.
    pub t: f64,
    pub lambda0: f64,
    pub psi: f64,
    /// Index of the largest shift; the ladder has `ladder_m + 1` entries.
    pub ladder_m: usize,
    pub epsilon: f64,
    pub max_outer: usize,
    /// Lanczos iteration cap; `None` means `2 (n - m) + 10`.
    pub max_inner: Option<usize>,
    /// How many times the ladder may be extended by `ladder_m` entries when
    /// even its largest shift is unusable.
    pub max_ladder_extensions: usize,
    pub reorthogonalize: bool,
    pub rejection_beta: RejectionBeta,
}

/// Which `β` a rejected trial hands to the next trial of the same iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RejectionBeta {
    /// Keep the iteration's `β_k`: later rejections compare against `γ₁β_k`
    /// and acceptance updates from `β_k`.
    #[default]
    Keep,
    /// Adopt `β(λⱼ) = ‖uⱼ‖ / λⱼ` of the shift moved to.
    Adopt,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let psi = 10f64.sqrt();
        Self {
            beta0: 1.0,
            eta1: 0.01,
            eta2: 0.75,
            gamma1: 0.1,
            gamma2: 5.0,
            mu_init: 1.0,
            nu: 1e-4,
            tau1: 2.0,
            tau2: 1.0,
            theta: 0.5,
            xi: 0.1,
            zeta: 1.0,
            t: psi,
            lambda0: 1e-5,
            psi,
            ladder_m: 30,
            epsilon: 1e-8,
            max_outer: 500,
            max_inner: None,
            max_ladder_extensions: 0,
            reorthogonalize: false,
            rejection_beta: RejectionBeta::Keep,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let checks: [(bool, &str); 14] = [
            (self.beta0 > 0.0 && self.beta0.is_finite(), "beta0 > 0"),
            (0.0 < self.eta1 && self.eta1 < self.eta2 && self.eta2 < 1.0, "0 < eta1 < eta2 < 1"),
            (0.0 < self.gamma1 && self.gamma1 < 1.0, "0 < gamma1 < 1"),
            (self.gamma2 > 1.0 && self.gamma2.is_finite(), "gamma2 > 1"),
            (self.mu_init > 0.0 && self.mu_init.is_finite(), "mu_init > 0"),
            (0.0 < self.nu && self.nu < 1.0, "0 < nu < 1"),
            (self.tau1 > 1.0 && self.tau2 > 0.0, "tau1 > 1 and tau2 > 0"),
            (0.0 < self.theta && self.theta <= 1.0, "0 < theta <= 1"),
            (self.xi > 0.0 && self.xi.is_finite(), "xi > 0"),
            (0.0 < self.zeta && self.zeta <= 1.0, "0 < zeta <= 1"),
            (self.t >= 1.0 && self.t.is_finite(), "t >= 1"),
            (self.lambda0 > 0.0 && self.psi > 1.0 && self.psi.is_finite(), "lambda0 > 0 and psi > 1"),
            (self.epsilon > 0.0, "epsilon > 0"),
            (self.max_inner != Some(0), "max_inner >= 1"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, what)) => Err(Error::InvalidConfig(format!("requires {what}"))),
            None => Ok(()),
        }
    }

    fn shift_options(&self) -> ShiftSolveOptions {
        ShiftSolveOptions {
            xi: self.xi,
            zeta: self.zeta,
            max_inner: self.max_inner,
            reorthogonalize: self.reorthogonalize,
        }
    }
}

/// Everything the method knows at the current iterate.
#[derive(Debug, Clone)]
pub struct IterateState {
    pub x: DVector<f64>,
    pub f: f64,
    pub g: DVector<f64>,
    pub c: DVector<f64>,
    pub j: DMatrix<f64>,
    pub z: NullspaceBasis,
    /// Least-squares multipliers.
    pub s: DVector<f64>,
    /// Lagrangian Hessian at `(x, s)`.
    pub b: DMatrix<f64>,
    /// Minimum-norm linearized-feasibility step `-Jᵀ(JJᵀ)⁻¹c`.
    pub vc: DVector<f64>,
    /// `Zᵀ(g + B v)` for the vertical step in use.
    pub gz_reduced: DVector<f64>,
    /// `Zᵀ g`, used for termination.
    pub zg: DVector<f64>,
    pub beta: f64,
    pub mu: f64,
}

impl IterateState {
    pub fn res(&self) -> f64 {
        self.zg.norm().max(self.c.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolverStatus {
    Converged,
    LadderExhausted,
    RankDeficient,
    IterationCap,
    EvaluationError,
    /// A quantity that must be positive or finite was not (model decrease,
    /// Lanczos recurrence).
    Breakdown,
}

impl SolverStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Converged => "Converged",
            Self::LadderExhausted => "LadderExhausted",
            Self::RankDeficient => "RankDeficient",
            Self::IterationCap => "IterationCap",
            Self::EvaluationError => "EvaluationError",
            Self::Breakdown => "Breakdown",
        }
    }
}

impl fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SolverStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Self::Converged,
            Self::LadderExhausted,
            Self::RankDeficient,
            Self::IterationCap,
            Self::EvaluationError,
            Self::Breakdown,
        ]
        .into_iter()
        .find(|v| v.as_str() == s)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown status `{s}`")))
    }
}

fn status_of(err: &Error) -> SolverStatus {
    match err {
        Error::RankDeficient { .. } => SolverStatus::RankDeficient,
        Error::LadderExhausted(_) => SolverStatus::LadderExhausted,
        Error::Evaluation(_) | Error::DimensionMismatch(_) => SolverStatus::EvaluationError,
        _ => SolverStatus::Breakdown,
    }
}

/// One trial step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// Outer iteration (number of accepted steps before this trial).
    pub iteration: usize,
    pub beta: f64,
    /// Penalty after the update for this trial.
    pub mu: f64,
    pub rho: f64,
    pub lambda: f64,
    pub shift_index: usize,
    pub i_plus: usize,
    pub c_norm: f64,
    pub zg_norm: f64,
    pub alpha: f64,
    /// Whether `α` lies in `[min(1, θ√β/‖vᶜ‖), min(1, √β/‖vᶜ‖)]` for this
    /// trial's `β`.
    pub alpha_admissible: bool,
    pub v_norm: f64,
    pub u_norm: f64,
    pub dq_n: f64,
    pub dq_h: f64,
    pub dq_f: f64,
    pub dq: f64,
    pub phi: f64,
    pub phi_trial: f64,
    pub accepted: bool,
    pub beta_next: f64,
    /// The rejection could not be absorbed by a larger ladder shift, so the
    /// iteration restarts at the same point with `β ← γ₁β`.
    pub restarted: bool,
}

/// Everything about a trial, handed to an observer before the decision is
/// applied.
pub struct TrialView<'a> {
    pub state: &'a IterateState,
    pub step: &'a StepDecomposition,
    pub u: &'a DVector<f64>,
    pub record: &'a TrialRecord,
}

#[derive(Debug, Clone)]
pub struct SolverReport {
    pub status: SolverStatus,
    pub x: DVector<f64>,
    pub nit: usize,
    pub nif: usize,
    pub nig: usize,
    pub res: f64,
    pub trace: Vec<TrialRecord>,
    pub message: Option<String>,
    /// The last fully evaluated iterate, when one exists.
    pub last_state: Option<IterateState>,
}

impl SolverReport {
    pub fn converged(&self) -> bool {
        self.status == SolverStatus::Converged
    }
}

/// `(‖g - Jᵀs‖, ‖c‖)` with fresh least-squares multipliers.
pub fn kkt_residual<P: Problem + ?Sized>(p: &P, x: &DVector<f64>) -> Result<(f64, f64)> {
    let g = p.gradient(x);
    let fact = ConstraintFactorization::new(&p.jacobian(x), None)?;
    let s = fact.multipliers(&g)?;
    let stationarity = (&g - fact.jacobian().tr_mul(&s)).norm();
    Ok((stationarity, p.constraints(x).norm()))
}

pub fn solve<P: Problem + ?Sized>(p: &P, cfg: &SolverConfig) -> Result<SolverReport> {
    solve_with_observer(p, cfg, |_| {})
}

/// Runs the method, calling `observer` on every trial.
///
/// Configuration and dimension errors are returned as `Err`; failures during
/// the run are reported through [`SolverReport::status`].
pub fn solve_with_observer<P, F>(p: &P, cfg: &SolverConfig, observer: F) -> Result<SolverReport>
where
    P: Problem + ?Sized,
    F: FnMut(&TrialView<'_>),
{
    cfg.validate()?;
    let x0 = p.x0();
    if x0.len() != p.n() || p.m() > p.n() {
        return Err(Error::DimensionMismatch(format!(
            "{}: x0 has length {}, n = {}, m = {}",
            p.name(),
            x0.len(),
            p.n(),
            p.m()
        )));
    }
    let mut run = Run {
        p,
        cfg,
        observer,
        ladder: ShiftLadder::new(cfg.lambda0, cfg.psi, cfg.ladder_m)?,
        opts: cfg.shift_options(),
        penalty: PenaltyState::new(cfg.mu_init, cfg.nu, cfg.tau1, cfg.tau2)?,
        x: x0,
        nit: 0,
        nif: 0,
        nig: 0,
        trace: Vec::new(),
        last_state: None,
        extensions: 0,
    };
    let outcome = run.iterate();
    let (status, res, message) = match outcome {
        Ok((status, res)) => (status, res, None),
        Err(e) => (status_of(&e), run.last_state.as_ref().map_or(f64::NAN, |s| s.res()), Some(e.to_string())),
    };
    Ok(SolverReport {
        status,
        x: run.x,
        nit: run.nit,
        nif: run.nif,
        nig: run.nig,
        res,
        trace: run.trace,
        message,
        last_state: run.last_state,
    })
}

struct Run<'a, P: ?Sized, F> {
    p: &'a P,
    cfg: &'a SolverConfig,
    observer: F,
    ladder: ShiftLadder,
    opts: ShiftSolveOptions,
    penalty: PenaltyState,
    x: DVector<f64>,
    nit: usize,
    nif: usize,
    nig: usize,
    trace: Vec<TrialRecord>,
    last_state: Option<IterateState>,
    extensions: usize,
}

fn all_finite<'v>(values: impl IntoIterator<Item = &'v f64>) -> bool {
    values.into_iter().all(|v| v.is_finite())
}

enum Trial {
    /// Accepted, with `f` and `c` at the new point.
    Accepted(f64, DVector<f64>),
    /// Rejected, and no larger shift qualifies.
    Restart,
}

impl<P: Problem + ?Sized, F: FnMut(&TrialView<'_>)> Run<'_, P, F> {
    fn iterate(&mut self) -> Result<(SolverStatus, f64)> {
        let p = self.p;
        let mut beta = self.cfg.beta0;
        let mut f = p.objective(&self.x);
        let mut c = p.constraints(&self.x);
        self.nif += 1;
        let mut g = p.gradient(&self.x);
        let mut j = p.jacobian(&self.x);
        self.nig += 1;

        loop {
            if !f.is_finite() || !all_finite(c.iter()) || !all_finite(g.iter()) || !all_finite(j.iter()) {
                return Err(Error::Evaluation(format!("non-finite problem data at iteration {}", self.nit)));
            }
            let fact = ConstraintFactorization::new(&j, None)?;
            let z = fact.nullspace();
            let zg = z.project(&g)?;
            let s = fact.multipliers(&g)?;
            let b = p.lagrangian_hessian(&self.x, &s);
            if !all_finite(b.iter()) {
                return Err(Error::Evaluation(format!("non-finite Hessian at iteration {}", self.nit)));
            }
            let vc = fact.min_norm_step(&c)?;
            let mut state = IterateState {
                x: self.x.clone(),
                f,
                g,
                c,
                j,
                z,
                s,
                b,
                vc,
                gz_reduced: DVector::zeros(0),
                zg,
                beta,
                mu: self.penalty.mu,
            };
            let res = state.res();
            self.last_state = Some(state.clone());
            if res <= self.cfg.epsilon {
                return Ok((SolverStatus::Converged, res));
            }
            if self.nit >= self.cfg.max_outer {
                return Ok((SolverStatus::IterationCap, res));
            }

            let zm = state.z.matrix();
            let bz = {
                let raw = zm.tr_mul(&(&state.b * zm));
                (&raw + raw.transpose()) * 0.5
            };
            loop {
                match self.outer_step(&mut state, &bz)? {
                    Trial::Accepted(f_new, c_new) => {
                        f = f_new;
                        c = c_new;
                        break;
                    }
                    Trial::Restart => {
                        state.beta *= self.cfg.gamma1;
                        if !(state.beta > f64::MIN_POSITIVE) {
                            return Err(Error::LadderExhausted(format!(
                                "regularization underflow at iteration {}: no ladder shift yields descent",
                                self.nit
                            )));
                        }
                    }
                }
            }
            beta = state.beta;
            self.nit += 1;
            g = p.gradient(&self.x);
            j = p.jacobian(&self.x);
            self.nig += 1;
        }
    }

    fn shift_set(
        &mut self,
        bz: &DMatrix<f64>,
        gz: &DVector<f64>,
        beta: f64,
    ) -> Result<(ShiftSolveSet, ShiftSelection)> {
        loop {
            let set = solve_all_shifts(bz, gz, &self.ladder, &self.opts)?;
            match select_initial(&set, beta) {
                Ok(sel) => return Ok((set, sel)),
                Err(Error::LadderExhausted(_)) if self.extensions < self.cfg.max_ladder_extensions => {
                    self.extensions += 1;
                    self.ladder.extend(self.cfg.ladder_m);
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// Tries shifts along the ladder at a fixed vertical step. On acceptance
    /// `self.x` and `state.beta` hold the new point and regularization.
    fn outer_step(&mut self, state: &mut IterateState, bz: &DMatrix<f64>) -> Result<Trial> {
        let cfg = self.cfg;
        let p = self.p;
        let (v, alpha) = vertical_step(&state.vc, state.beta, cfg.theta)?;
        state.gz_reduced = state.z.project(&(&state.g + &state.b * &v))?;
        let gz = state.gz_reduced.clone();
        let (set, mut sel) = self.shift_set(bz, &gz, state.beta)?;

        let c_norm = state.c.norm();
        let vc_norm = state.vc.norm();
        let zg_norm = state.zg.norm();
        let mut beta_trial = state.beta;
        loop {
            let u = &set.results[sel.j].u;
            let step = StepDecomposition::assemble(&state.g, &state.b, c_norm, &state.z, v.clone(), alpha, u)?;
            let dq = step.decreases();
            let mu = self.penalty.update(&dq)?;
            state.mu = mu;
            let pred = dq.total(mu);
            let phi = merit_from_parts(state.f, &state.c, mu)?;

            let x_trial = &state.x + &step.d;
            let f_trial = p.objective(&x_trial);
            let c_trial = p.constraints(&x_trial);
            self.nif += 1;
            let phi_trial = if f_trial.is_finite() && all_finite(c_trial.iter()) {
                merit_from_parts(f_trial, &c_trial, mu)?
            } else {
                f64::NAN
            };
            let rho = if phi_trial.is_nan() {
                if !(pred > 0.0) {
                    return Err(Error::DegenerateModel { decrease: pred, merit: phi });
                }
                f64::NEG_INFINITY
            } else {
                robust_acceptance_ratio(phi, phi_trial, pred)?
            };

            let accepted = rho >= cfg.eta1;
            let advance = if accepted {
                None
            } else {
                advance_on_failure(&sel, beta_trial, cfg.gamma1)
                    .ok()
                    .filter(|&(_, b)| b > 0.0)
            };
            let beta_next = match (accepted, advance) {
                (true, _) if rho >= cfg.eta2 => cfg.gamma2 * beta_trial,
                (true, _) => beta_trial,
                (false, Some((_, b))) => b,
                (false, None) => cfg.gamma1 * beta_trial,
            };
            let alpha_admissible = vc_norm == 0.0 || {
                let hi = (beta_trial.sqrt() / vc_norm).min(1.0);
                let lo = (cfg.theta * beta_trial.sqrt() / vc_norm).min(1.0);
                alpha >= lo * (1.0 - 1e-12) && alpha <= hi * (1.0 + 1e-12)
            };
            let record = TrialRecord {
                iteration: self.nit,
                beta: beta_trial,
                mu,
                rho,
                lambda: sel.lambda(sel.j),
                shift_index: sel.j,
                i_plus: sel.i_plus,
                c_norm,
                zg_norm,
                alpha,
                alpha_admissible,
                v_norm: step.v.norm(),
                u_norm: u.norm(),
                dq_n: dq.dq_n,
                dq_h: dq.dq_h,
                dq_f: dq.dq_f,
                dq: pred,
                phi,
                phi_trial,
                accepted,
                beta_next,
                restarted: !accepted && advance.is_none(),
            };
            (self.observer)(&TrialView { state, step: &step, u, record: &record });
            self.trace.push(record);

            if accepted {
                self.x = x_trial;
                state.beta = beta_next;
                return Ok(Trial::Accepted(f_trial, c_trial));
            }
            match advance {
                Some((j_next, b)) => {
                    sel.j = j_next;
                    if cfg.rejection_beta == RejectionBeta::Adopt {
                        beta_trial = b;
                    }
                }
                None => {
                    state.beta = beta_trial;
                    return Ok(Trial::Restart);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{find_builtin, TestProblem};

    fn run(name: &str) -> (TestProblem, SolverReport) {
        let p = find_builtin(name).unwrap();
        let r = solve(&p, &SolverConfig::default()).unwrap();
        (p, r)
    }

    #[test]
    fn config_defaults_validate() {
        let cfg = SolverConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.t, cfg.psi);
        let bad = SolverConfig { eta1: 0.8, ..SolverConfig::default() };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        let bad = SolverConfig { theta: 0.0, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SolverConfig { t: 0.5, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
        let p = find_builtin("BOOTH").unwrap();
        assert!(solve(&p, &SolverConfig { gamma2: 1.0, ..SolverConfig::default() }).is_err());
    }

    #[test]
    fn booth_and_himmelba() {
        let (_, r) = run("BOOTH");
        assert_eq!(r.status, SolverStatus::Converged, "{:?}", r.message);
        assert!(r.res <= 1e-8);
        assert!((1..=6).contains(&r.nit), "nit {}", r.nit);

        let (_, r) = run("HIMMELBA");
        assert_eq!(r.status, SolverStatus::Converged);
        assert!((1..=3).contains(&r.nit), "nit {}", r.nit);
    }

    #[test]
    fn optimal_start_takes_no_steps() {
        let p = find_builtin("HS28").unwrap();
        let p = p.clone().with_x0(p.known_solution().unwrap().as_slice().to_vec());
        let r = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!((r.status, r.nit, r.nif, r.nig), (SolverStatus::Converged, 0, 1, 1));
        assert!(r.trace.is_empty());
    }

    #[test]
    fn maratos_reaches_optimum() {
        let (p, r) = run("MARATOS");
        assert!(r.converged());
        assert!((&r.x - DVector::from_vec(vec![1.0, 0.0])).norm() <= 1e-6);
        let (stat, feas) = kkt_residual(&p, &r.x).unwrap();
        assert!(stat <= 1e-6 && feas <= 1e-8);
    }

    #[test]
    fn kkt_residual_examples() {
        let p = find_builtin("HS6").unwrap();
        let (stat, feas) = kkt_residual(&p, &p.known_solution().unwrap()).unwrap();
        assert!(stat <= 1e-6 && feas <= 1e-6);
        let (_, feas) = kkt_residual(&p, &p.x0()).unwrap();
        assert!(feas > 0.0);
    }

    #[test]
    fn counters_follow_trials() {
        let (_, r) = run("BT3");
        assert!(r.converged());
        assert_eq!(r.nif, 1 + r.trace.len());
        assert_eq!(r.nig, 1 + r.nit);
        assert_eq!(r.trace.iter().filter(|t| t.accepted).count(), r.nit);
    }

    #[test]
    fn runs_are_deterministic() {
        let (_, a) = run("HS40");
        let (_, b) = run("HS40");
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.x, b.x);
    }

    #[test]
    fn observer_sees_every_trial() {
        let p = find_builtin("HS7").unwrap();
        let mut seen = 0;
        let r = solve_with_observer(&p, &SolverConfig::default(), |view| {
            seen += 1;
            assert_eq!(view.step.d, &view.step.v + &view.step.h);
            assert_eq!(view.u.norm(), view.record.u_norm);
        })
        .unwrap();
        assert_eq!(seen, r.trace.len());
    }

    #[test]
    fn status_round_trips_through_text() {
        for s in [SolverStatus::Converged, SolverStatus::Breakdown, SolverStatus::IterationCap] {
            assert_eq!(s.as_str().parse::<SolverStatus>().unwrap(), s);
        }
        assert!("nope".parse::<SolverStatus>().is_err());
    }
}
