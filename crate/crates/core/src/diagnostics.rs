//! Runtime checks of the inequalities behind the convergence theory, and
//! solution-quality residuals.
//!
//! Every check compares a left-hand side against a right-hand side and is
//! satisfied when `lhs ≤ rhs + slack(rhs)`, with
//! `slack(rhs) = 1e-9 + 1e-12·(1 + |rhs|)`. The strict-positivity checks of
//! the linesearch (`f(zᵏ, xᵏ) > 0`, `wᵏ ≠ 0`) use no slack.

use serde::Serialize;

use crate::algorithms::{Aux, SolverState};
use crate::error::{check_dim, Result};
use crate::model::Bifunction;
use crate::sets::FeasibleSet;
use crate::subproblems::{prox_step, InnerSolveConfig};
use crate::Vector;

pub const TOL_SLACK: f64 = 1e-9;

pub fn slack(rhs: f64) -> f64 {
    TOL_SLACK + 1e-12 * (1.0 + rhs.abs())
}

/// One evaluated inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantRecord {
    pub iteration: Option<usize>,
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
}

impl InvariantRecord {
    pub fn le(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self {
            iteration: None,
            name,
            lhs,
            rhs,
            satisfied: lhs <= rhs + slack(rhs),
        }
    }

    /// `lhs < rhs`, no slack.
    pub fn strict(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self {
            iteration: None,
            name,
            lhs,
            rhs,
            satisfied: lhs < rhs,
        }
    }

    pub fn at(mut self, k: usize) -> Self {
        self.iteration = Some(k);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InvariantLog {
    pub records: Vec<InvariantRecord>,
}

impl InvariantLog {
    pub fn push(&mut self, record: InvariantRecord) {
        self.records.push(record);
    }

    pub fn extend(&mut self, other: InvariantLog) {
        self.records.extend(other.records);
    }

    pub fn violations(&self) -> impl Iterator<Item = &InvariantRecord> {
        self.records.iter().filter(|r| !r.satisfied)
    }

    pub fn all_satisfied(&self) -> bool {
        self.records.iter().all(|r| r.satisfied)
    }

    pub fn named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a InvariantRecord> + 'a {
        self.records.iter().filter(move |r| r.name == name)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// `‖xᵏ⁺¹ - q‖ ≤ ‖xᵏ - q‖` for each consecutive pair of `trace`.
/// Record `k` compares `trace[k + 1]` against `trace[k]`.
pub fn fejer_check(trace: &[Vector], q: &Vector) -> InvariantLog {
    let records = trace
        .windows(2)
        .enumerate()
        .map(|(k, w)| InvariantRecord::le("fejer", (&w[1] - q).norm(), (&w[0] - q).norm()).at(k))
        .collect();
    InvariantLog { records }
}

/// `‖z - q‖² ≤ ‖x - q‖² - (1 - 2ρL₁)‖x - y‖² - (1 - 2ρL₂)‖y - z‖²`,
/// the descent inequality of one extragradient step towards `q ∈ Sol(C, f)`.
pub fn extragradient_descent_check(
    x: &Vector,
    y: &Vector,
    z: &Vector,
    q: &Vector,
    rho: f64,
    l1: f64,
    l2: f64,
) -> InvariantRecord {
    let lhs = (z - q).norm_squared();
    let rhs = (x - q).norm_squared()
        - (1.0 - 2.0 * rho * l1) * (x - y).norm_squared()
        - (1.0 - 2.0 * rho * l2) * (y - z).norm_squared();
    InvariantRecord::le("extragradient_descent", lhs, rhs)
}

/// Checks on a linesearch step towards `q ∈ Sol(C, f)`:
///
/// * `linesearch_descent`: `‖uᵏ - q‖² ≤ ‖xᵏ - q‖² - γ(2 - γ)(σₖ‖wᵏ‖)²`
/// * `linesearch_positive`: `f(zᵏ, xᵏ) > 0`
/// * `linesearch_nonzero_subgradient`: `wᵏ ≠ 0`
///
/// Returns an empty log for states where the linesearch branch did not run.
pub fn linesearch_step_check(state: &SolverState, q: &Vector, gamma: f64) -> InvariantLog {
    let mut log = InvariantLog::default();
    let Aux::Linesearch {
        u,
        w: Some(w),
        sigma: Some(sigma),
        f_zx: Some(f_zx),
        ..
    } = &state.aux
    else {
        return log;
    };
    let Some(x) = &state.prev_x else {
        return log;
    };
    let k = state.k.saturating_sub(1);
    let wn = w.norm();
    let lhs = (u - q).norm_squared();
    let rhs = (x - q).norm_squared() - gamma * (2.0 - gamma) * (sigma * wn).powi(2);
    log.push(InvariantRecord::le("linesearch_descent", lhs, rhs).at(k));
    log.push(InvariantRecord::strict("linesearch_positive", -f_zx, 0.0).at(k));
    log.push(InvariantRecord::strict("linesearch_nonzero_subgradient", -wn, 0.0).at(k));
    log
}

/// Natural residual `‖x - argmin{ρf(x,y) + ½‖y - x‖² : y ∈ C}‖`. Zero iff
/// `x ∈ Sol(C, f)`.
pub fn ep_residual(
    f: &dyn Bifunction,
    x: &Vector,
    rho: f64,
    set: &dyn FeasibleSet,
    cfg: &InnerSolveConfig,
) -> Result<f64> {
    check_dim(set.dim(), x.len())?;
    let y = prox_step(f, x, x, rho, set, cfg)?;
    Ok((x - y).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{QuadraticBifunction, ZeroBifunction};
    use crate::sets::BoxSet;
    use crate::Matrix;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    #[test]
    fn constant_trace_at_q() {
        let q = v(&[1.0, 2.0]);
        let log = fejer_check(&vec![q.clone(); 5], &q);
        assert_eq!(log.len(), 4);
        assert!(log
            .records
            .iter()
            .all(|r| r.satisfied && r.lhs == 0.0 && r.rhs == 0.0));
    }

    #[test]
    fn injected_jump_is_flagged() {
        let q = Vector::zeros(1);
        let mut trace: Vec<Vector> = (0..10).map(|k| v(&[1.0 / (k + 1) as f64])).collect();
        assert!(fejer_check(&trace, &q).all_satisfied());
        trace[6][0] += 1.0;
        let log = fejer_check(&trace, &q);
        let bad: Vec<_> = log.violations().map(|r| r.iteration.unwrap()).collect();
        assert_eq!(bad, vec![5]);
    }

    #[test]
    fn extragradient_descent_trivial_and_violated() {
        let q = v(&[0.0, 0.0]);
        let r = extragradient_descent_check(&q, &q, &q, &q, 0.1, 1.0, 1.0);
        assert!(r.satisfied && r.lhs == 0.0 && r.rhs == 0.0);
        // z farther from q than x: must fail
        let r = extragradient_descent_check(
            &v(&[1.0, 0.0]),
            &v(&[1.0, 0.0]),
            &v(&[2.0, 0.0]),
            &q,
            0.1,
            1.0,
            1.0,
        );
        assert!(!r.satisfied);
    }

    #[test]
    fn slack_boundary() {
        assert!(InvariantRecord::le("t", 1.0 + 5e-10, 1.0).satisfied);
        assert!(!InvariantRecord::le("t", 1.0 + 5e-9, 1.0).satisfied);
        assert!(!InvariantRecord::strict("t", 0.0, 0.0).satisfied);
    }

    #[test]
    fn ep_residual_examples() {
        let cfg = InnerSolveConfig::default();
        let c = BoxSet::cube(2, -10.0, 10.0).unwrap();
        let zero = ZeroBifunction { dim: 2 };
        assert_eq!(
            ep_residual(&zero, &v(&[3.0, -10.0]), 0.5, &c, &cfg).unwrap(),
            0.0
        );

        let q = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let p = &q + Matrix::identity(2, 2);
        let f = QuadraticBifunction::new(p, q, Vector::zeros(2)).unwrap();
        assert!(ep_residual(&f, &Vector::zeros(2), 0.5, &c, &cfg).unwrap() <= 1e-8);
        assert!(ep_residual(&f, &v(&[10.0, -10.0]), 0.5, &c, &cfg).unwrap() > 1.0);
    }
}
