//! Inner solvers: the regularized convex program, the resolvent of the
//! bifunction, and subgradient selection.
//!
//! For a [`QuadraticBifunction`] both subproblems are strongly convex
//! quadratic programs `min ½yᵀHy - cᵀy` over `C` with `H = I + sA`, `A ⪰ 0`.
//! They are solved by a Cholesky solve of the unconstrained problem and, when
//! that point is infeasible, by accelerated projected gradient with step
//! `1/L`, `L = 1 + s‖A‖`. The stopping rule uses the natural-residual error
//! bound `‖y - y*‖ ≤ 2L‖y - P_C(y - ∇φ(y)/L)‖`, so `tol` bounds the distance
//! to the exact minimizer.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::model::{Bifunction, QuadraticBifunction};
use crate::sets::FeasibleSet;
use crate::{Matrix, Vector};

/// Step-size rule of the generic projected-gradient inner solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    /// Fixed step. Ignored on the quadratic path, which always uses `1/L`.
    Fixed(f64),
    Backtracking,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolveConfig {
    /// Target accuracy of the inner solution (distance to the exact solution).
    pub tol: f64,
    pub max_iter: usize,
    pub step_rule: StepRule,
}

impl Default for InnerSolveConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 5000,
            step_rule: StepRule::Backtracking,
        }
    }
}

impl InnerSolveConfig {
    /// Inner tolerance of `outer_tol / 100`.
    pub fn for_outer_tol(outer_tol: f64) -> Self {
        Self {
            tol: outer_tol / 100.0,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::Config(format!(
                "inner solver needs tol > 0 and max_iter >= 1, got {} / {}",
                self.tol, self.max_iter
            )));
        }
        if let StepRule::Fixed(s) = self.step_rule {
            if !(s > 0.0) {
                return Err(Error::Config(format!(
                    "fixed inner step must be positive, got {s}"
                )));
            }
        }
        Ok(())
    }
}

/// An inner solution with its certified residual.
#[derive(Debug, Clone)]
pub struct InnerSolution {
    pub point: Vector,
    pub residual: f64,
    pub iterations: usize,
}

/// `argmin { ρ·f(base, y) + ½‖y - anchor‖² : y ∈ C }`.
pub fn prox_step(
    f: &dyn Bifunction,
    base: &Vector,
    anchor: &Vector,
    rho: f64,
    set: &dyn FeasibleSet,
    cfg: &InnerSolveConfig,
) -> Result<Vector> {
    prox_step_detailed(f, base, anchor, rho, set, cfg).map(|s| s.point)
}

/// [`prox_step`] returning the residual and iteration count.
pub fn prox_step_detailed(
    f: &dyn Bifunction,
    base: &Vector,
    anchor: &Vector,
    rho: f64,
    set: &dyn FeasibleSet,
    cfg: &InnerSolveConfig,
) -> Result<InnerSolution> {
    let n = set.dim();
    check_dim(n, f.dim())?;
    check_dim(n, base.len())?;
    check_dim(n, anchor.len())?;
    check_rho(rho)?;
    cfg.validate()?;

    if let Some(quad) = f.as_quadratic() {
        // H = I + 2ρQ, c = anchor - ρ(P·base - Q·base + r)
        let c = anchor - (quad.p() * base - quad.q() * base + quad.r()) * rho;
        let a = quad.q() * 2.0;
        return solve_strongly_convex_qp(&a, 2.0 * quad.norm_q(), rho, &c, set, cfg, "prox step");
    }

    let objective = |y: &Vector| rho * f.eval(base, y) + 0.5 * (y - anchor).norm_squared();
    let gradient = |y: &Vector| -> Result<Vector> { Ok(f.subgrad2(base, y)? * rho + (y - anchor)) };
    projected_gradient(
        objective,
        gradient,
        set.project_unchecked(anchor),
        set,
        cfg,
        "prox step",
    )
}

/// The resolvent `T_ρ(x)`: the unique `u ∈ C` with
/// `f(u, y) + (1/ρ)⟨y - u, u - x⟩ ≥ 0` for all `y ∈ C`.
pub fn resolvent(
    f: &dyn Bifunction,
    x: &Vector,
    rho: f64,
    set: &dyn FeasibleSet,
    cfg: &InnerSolveConfig,
) -> Result<Vector> {
    resolvent_detailed(f, x, rho, set, cfg).map(|s| s.point)
}

pub fn resolvent_detailed(
    f: &dyn Bifunction,
    x: &Vector,
    rho: f64,
    set: &dyn FeasibleSet,
    cfg: &InnerSolveConfig,
) -> Result<InnerSolution> {
    let n = set.dim();
    check_dim(n, f.dim())?;
    check_dim(n, x.len())?;
    check_rho(rho)?;
    cfg.validate()?;

    if let Some(quad) = f.as_quadratic() {
        // Affine VI with G(u) = (P + Q)u + r + (u - x)/ρ; its Jacobian is
        // symmetric, so ρG is the gradient of a strongly convex quadratic.
        let a = quad.p() + quad.q();
        let c = x - quad.r() * rho;
        return solve_strongly_convex_qp(&a, quad.norm_p_plus_q(), rho, &c, set, cfg, "resolvent");
    }

    // u ← argmin { ρ f(u, y) + ½‖y - x‖² : y ∈ C } until it stops moving.
    let mut u = set.project_unchecked(x);
    let mut last_delta = f64::INFINITY;
    let mut growth = 0usize;
    for it in 1..=cfg.max_iter.min(500) {
        let next = prox_step_detailed(f, &u, x, rho, set, cfg)?;
        let delta = (&next.point - &u).norm();
        u = next.point;
        if delta < cfg.tol {
            return Ok(InnerSolution {
                point: u,
                residual: delta,
                iterations: it,
            });
        }
        growth = if delta > last_delta { growth + 1 } else { 0 };
        if growth >= 20 {
            return Err(Error::AssumptionViolation(format!(
                "resolvent iteration diverges (step {delta:e}); f may not be monotone"
            )));
        }
        last_delta = delta;
    }
    Err(Error::NonConvergence {
        what: "resolvent",
        iterations: cfg.max_iter.min(500),
        residual: last_delta,
        best: u,
    })
}

/// A subgradient `w ∈ ∂₂f(z, x)`.
pub fn subgrad2_select(f: &dyn Bifunction, z: &Vector, x: &Vector) -> Result<Vector> {
    check_dim(f.dim(), z.len())?;
    check_dim(f.dim(), x.len())?;
    let w = f.subgrad2(z, x)?;
    if w.len() != x.len() || w.iter().any(|v| !v.is_finite()) {
        return Err(Error::UndefinedSubgradient);
    }
    Ok(w)
}

/// Smallest value of `f(u, y) + (1/ρ)⟨y - u, u - x⟩` over `samples` random
/// `y ∈ C`. Nonnegative (up to tolerance) iff `u` passes the sampled
/// resolvent test.
pub fn resolvent_gap(
    f: &dyn Bifunction,
    u: &Vector,
    x: &Vector,
    rho: f64,
    set: &dyn FeasibleSet,
    samples: usize,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let y = set.sample(&mut rng);
            f.eval(u, &y) + (&y - u).dot(&(u - x)) / rho
        })
        .fold(f64::INFINITY, f64::min)
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "rho must be positive, got {rho}"
        )));
    }
    Ok(())
}

/// `min ½yᵀ(I + sA)y - cᵀy` over `C`, `A ⪰ 0` with `‖A‖ ≤ norm_a`.
fn solve_strongly_convex_qp(
    a: &Matrix,
    norm_a: f64,
    s: f64,
    c: &Vector,
    set: &dyn FeasibleSet,
    cfg: &InnerSolveConfig,
    what: &'static str,
) -> Result<InnerSolution> {
    let n = c.len();
    let h = Matrix::identity(n, n) + a * s;
    let start = match h.clone().cholesky() {
        Some(chol) => {
            let y = chol.solve(c);
            let py = set.project_unchecked(&y);
            if py == y {
                return Ok(InnerSolution {
                    point: y,
                    residual: 0.0,
                    iterations: 0,
                });
            }
            py
        }
        None => set.project_unchecked(c),
    };

    // Power iteration under-estimates ‖A‖ slightly; pad it.
    let lip = 1.0 + s * norm_a * (1.0 + 1e-6) + 1e-12;
    let kappa = lip;
    let momentum = (kappa.sqrt() - 1.0) / (kappa.sqrt() + 1.0);
    let grad = |y: &Vector| &h * y - c;
    let step = |y: &Vector| set.project_unchecked(&(y - grad(y) / lip));
    let bound = 2.0 * lip;

    let mut y = start;
    let mut prev = y.clone();
    let mut best = (f64::INFINITY, y.clone());
    for it in 1..=cfg.max_iter {
        let extrap = &y + (&y - &prev) * momentum;
        prev = y;
        y = step(&extrap);
        let residual = bound * (&y - step(&y)).norm();
        if residual < best.0 {
            best = (residual, y.clone());
        }
        if residual <= cfg.tol {
            return Ok(InnerSolution {
                point: y,
                residual,
                iterations: it,
            });
        }
    }
    Err(Error::NonConvergence {
        what,
        iterations: cfg.max_iter,
        residual: best.0,
        best: best.1,
    })
}

/// Projected gradient with fixed or backtracking step on a 1-strongly
/// convex objective.
fn projected_gradient(
    objective: impl Fn(&Vector) -> f64,
    gradient: impl Fn(&Vector) -> Result<Vector>,
    start: Vector,
    set: &dyn FeasibleSet,
    cfg: &InnerSolveConfig,
    what: &'static str,
) -> Result<InnerSolution> {
    let (mut lip, adaptive) = match cfg.step_rule {
        StepRule::Fixed(step) => (1.0 / step, false),
        StepRule::Backtracking => (1.0, true),
    };
    let mut y = start;
    let mut best = (f64::INFINITY, y.clone());
    for it in 1..=cfg.max_iter {
        let g = gradient(&y)?;
        let fy = objective(&y);
        let mut next = set.project_unchecked(&(&y - &g / lip));
        if adaptive {
            for _ in 0..60 {
                let d = &next - &y;
                if objective(&next)
                    <= fy + g.dot(&d) + 0.5 * lip * d.norm_squared() + 1e-15 * fy.abs()
                {
                    break;
                }
                lip *= 2.0;
                next = set.project_unchecked(&(&y - &g / lip));
            }
        }
        let residual = 2.0 * lip.max(1.0) * (&next - &y).norm();
        if residual < best.0 {
            best = (residual, y.clone());
        }
        if !residual.is_finite() {
            break;
        }
        y = next;
        if residual <= cfg.tol {
            return Ok(InnerSolution {
                point: y,
                residual,
                iterations: it,
            });
        }
    }
    Err(Error::NonConvergence {
        what,
        iterations: cfg.max_iter,
        residual: best.0,
        best: best.1,
    })
}

/// Closed-form unconstrained minimizer of the quadratic prox step:
/// `(I + 2ρQ) y = anchor + ρ(Q·base - P·base - r)`.
pub fn quadratic_prox_unconstrained(
    f: &QuadraticBifunction,
    base: &Vector,
    anchor: &Vector,
    rho: f64,
) -> Option<Vector> {
    let n = anchor.len();
    let h = Matrix::identity(n, n) + f.q() * (2.0 * rho);
    let c = anchor + (f.q() * base - f.p() * base - f.r()) * rho;
    h.cholesky().map(|chol| chol.solve(&c))
}
