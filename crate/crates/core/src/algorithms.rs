//! The three outer iterations and the driver loop.
//!
//! Each variant first computes an equilibrium step from `xᵏ` and then mixes it
//! with the mapping `T` in an Ishikawa-type update:
//!
//! ```text
//! vᵏ   = αₖ xᵏ + (1 - αₖ) T xᵏ
//! xᵏ⁺¹ = βₖ vᵏ + (1 - βₖ) T pᵏ
//! ```
//!
//! where `pᵏ` is `uᵏ = T_ρ(xᵏ)` for [`Variant::Proximal`], the second
//! extragradient point `zᵏ` for [`Variant::Extragradient`], and the projected
//! subgradient point `uᵏ` for [`Variant::Linesearch`]. With `αₖ = 1` the
//! first line is the identity and the schemes reduce to Mann-type iterations.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::diagnostics::{self, InvariantLog, InvariantRecord};
use crate::error::{Error, Result};
use crate::model::{schedule_params, Bifunction, ProblemInstance, ScheduleConfig, StepParams};
use crate::sets::{self, FeasibleSet};
use crate::subproblems::{self, InnerSolveConfig};
use crate::{maps, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Proximal point step (`alg1`).
    Proximal,
    /// Extragradient step (`alg2`).
    Extragradient,
    /// Extragradient step with Armijo linesearch (`alg3`).
    Linesearch,
}

impl Variant {
    pub const ALL: [Variant; 3] = [
        Variant::Proximal,
        Variant::Extragradient,
        Variant::Linesearch,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Variant::Proximal => "alg1",
            Variant::Extragradient => "alg2",
            Variant::Linesearch => "alg3",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alg1" | "proximal" => Ok(Variant::Proximal),
            "alg2" | "extragradient" => Ok(Variant::Extragradient),
            "alg3" | "linesearch" => Ok(Variant::Linesearch),
            other => Err(Error::InvalidArgument(format!("unknown variant {other:?}"))),
        }
    }
}

/// Variant-specific intermediate points of the step that produced `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Aux {
    Start,
    Proximal {
        u: Vector,
    },
    Extragradient {
        y: Vector,
        z: Vector,
    },
    /// `z`, `w`, `sigma`, `f_zx` are `None` when `yᵏ = xᵏ` short-circuited
    /// the linesearch.
    Linesearch {
        y: Vector,
        z: Option<Vector>,
        w: Option<Vector>,
        u: Vector,
        sigma: Option<f64>,
        f_zx: Option<f64>,
    },
}

impl Aux {
    fn points(&self) -> Vec<(&'static str, &Vector)> {
        match self {
            Aux::Start => vec![],
            Aux::Proximal { u } => vec![("u", u)],
            Aux::Extragradient { y, z } => vec![("y", y), ("z", z)],
            Aux::Linesearch { y, z, u, .. } => {
                let mut pts = vec![("y", y), ("u", u)];
                if let Some(z) = z {
                    pts.push(("z", z));
                }
                pts
            }
        }
    }
}

/// Iterate `xᵏ` together with the intermediate points of the step that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub k: usize,
    pub x: Vector,
    /// `xᵏ⁻¹`, absent at the start.
    pub prev_x: Option<Vector>,
    pub aux: Aux,
    pub v: Option<Vector>,
    /// `‖xᵏ - xᵏ⁻¹‖`; infinite at the start.
    pub step_delta: f64,
    /// Largest certified inner-solver residual of the last step.
    pub inner_residual: f64,
    pub armijo_m: Option<u32>,
}

impl SolverState {
    pub fn new(x0: Vector) -> Self {
        Self {
            k: 0,
            x: x0,
            prev_x: None,
            aux: Aux::Start,
            v: None,
            step_delta: f64::INFINITY,
            inner_residual: 0.0,
            armijo_m: None,
        }
    }

    fn advance(
        &self,
        x_next: Vector,
        aux: Aux,
        v: Vector,
        inner_residual: f64,
        armijo_m: Option<u32>,
    ) -> Self {
        Self {
            k: self.k + 1,
            step_delta: (&x_next - &self.x).norm(),
            prev_x: Some(self.x.clone()),
            x: x_next,
            aux,
            v: Some(v),
            inner_residual,
            armijo_m,
        }
    }
}

/// `vᵏ = αxᵏ + (1-α)Txᵏ` and `xᵏ⁺¹ = βvᵏ + (1-β)T(point)`.
fn ishikawa(
    inst: &ProblemInstance,
    x: &Vector,
    point: &Vector,
    params: &StepParams,
) -> (Vector, Vector) {
    let tx = inst.map.apply_unchecked(x);
    let v = x * params.alpha + tx * (1.0 - params.alpha);
    let tp = inst.map.apply_unchecked(point);
    let next = &v * params.beta + tp * (1.0 - params.beta);
    (v, next)
}

fn check_state(state: &SolverState, inst: &ProblemInstance) -> Result<()> {
    crate::error::check_dim(inst.dim(), state.x.len())
}

/// Proximal-point step: `uᵏ = T_ρₖ(xᵏ)`, then the Ishikawa update with `Tuᵏ`.
pub fn alg1_step(
    state: &SolverState,
    inst: &ProblemInstance,
    params: &StepParams,
    cfg: &InnerSolveConfig,
) -> Result<SolverState> {
    check_state(state, inst)?;
    let u = subproblems::resolvent_detailed(
        inst.f.as_ref(),
        &state.x,
        params.rho,
        inst.set.as_ref(),
        cfg,
    )?;
    let (v, next) = ishikawa(inst, &state.x, &u.point, params);
    Ok(state.advance(next, Aux::Proximal { u: u.point }, v, u.residual, None))
}

/// Extragradient step: `yᵏ` solves `CP(xᵏ)`, `zᵏ` solves `CP(yᵏ, xᵏ)`, then
/// the Ishikawa update with `Tzᵏ`.
pub fn alg2_step(
    state: &SolverState,
    inst: &ProblemInstance,
    params: &StepParams,
    cfg: &InnerSolveConfig,
) -> Result<SolverState> {
    check_state(state, inst)?;
    let f = inst.f.as_ref();
    let set = inst.set.as_ref();
    let x = &state.x;
    let y = subproblems::prox_step_detailed(f, x, x, params.rho, set, cfg)?;
    let z = subproblems::prox_step_detailed(f, &y.point, x, params.rho, set, cfg)?;
    let (v, next) = ishikawa(inst, x, &z.point, params);
    let residual = y.residual.max(z.residual);
    Ok(state.advance(
        next,
        Aux::Extragradient {
            y: y.point,
            z: z.point,
        },
        v,
        residual,
        None,
    ))
}

/// Armijo rule: smallest `m ∈ {1, …, max_m}` such that
/// `z = (1 - ηᵐ)x + ηᵐy` satisfies `f(z, x) - f(z, y) ≥ μ/(2ρ)·‖x - y‖²`.
pub fn armijo_search(
    f: &dyn Bifunction,
    x: &Vector,
    y: &Vector,
    rho: f64,
    eta: f64,
    mu: f64,
    max_m: u32,
) -> Result<(u32, Vector)> {
    crate::error::check_dim(x.len(), y.len())?;
    if x == y {
        return Err(Error::InvalidArgument("linesearch needs x != y".into()));
    }
    if !(eta > 0.0 && eta < 1.0 && mu > 0.0 && mu < 1.0 && rho > 0.0) {
        return Err(Error::Config(format!(
            "linesearch needs eta, mu in (0, 1) and rho > 0, got {eta}, {mu}, {rho}"
        )));
    }
    let rhs = mu / (2.0 * rho) * (x - y).norm_squared();
    let mut trials = Vec::new();
    let mut t = 1.0;
    for m in 1..=max_m {
        t *= eta;
        let z = x * (1.0 - t) + y * t;
        let lhs = f.eval(&z, x) - f.eval(&z, y);
        if lhs >= rhs {
            return Ok((m, z));
        }
        trials.push((m, lhs, rhs));
    }
    Err(Error::LinesearchFailure { trials })
}

/// Linesearch step: `yᵏ` solves `CP(xᵏ)`; unless `yᵏ = xᵏ`, find `zᵏ` by the
/// Armijo rule, take `wᵏ ∈ ∂₂f(zᵏ, xᵏ)`, `σₖ = f(zᵏ, xᵏ)/‖wᵏ‖²` and
/// `uᵏ = P_C(xᵏ - γₖσₖwᵏ)`; then the Ishikawa update with `Tuᵏ`.
pub fn alg3_step(
    state: &SolverState,
    inst: &ProblemInstance,
    params: &StepParams,
    schedule: &ScheduleConfig,
    cfg: &InnerSolveConfig,
) -> Result<SolverState> {
    check_state(state, inst)?;
    let f = inst.f.as_ref();
    let set = inst.set.as_ref();
    let x = &state.x;
    let y = subproblems::prox_step_detailed(f, x, x, params.rho, set, cfg)?;

    if (&y.point - x).norm() <= cfg.tol {
        // x already solves the prox inclusion, so x ∈ Sol(C, f).
        let aux = Aux::Linesearch {
            y: y.point,
            z: None,
            w: None,
            u: x.clone(),
            sigma: None,
            f_zx: None,
        };
        let (v, next) = ishikawa(inst, x, x, params);
        return Ok(state.advance(next, aux, v, y.residual, None));
    }

    let (m, z) = armijo_search(
        f,
        x,
        &y.point,
        params.rho,
        schedule.eta,
        schedule.mu,
        schedule.max_armijo,
    )?;
    let w = subproblems::subgrad2_select(f, &z, x)?;
    let f_zx = f.eval(&z, x);
    let wn2 = w.norm_squared();
    if wn2 == 0.0 {
        return Err(Error::AssumptionViolation(format!(
            "zero subgradient at z with f(z, x) = {f_zx:e} after a successful linesearch"
        )));
    }
    let sigma = f_zx / wn2;
    let u = set.project_unchecked(&(x - &w * (params.gamma * sigma)));
    let (v, next) = ishikawa(inst, x, &u, params);
    let aux = Aux::Linesearch {
        y: y.point,
        z: Some(z),
        w: Some(w),
        u,
        sigma: Some(sigma),
        f_zx: Some(f_zx),
    };
    Ok(state.advance(next, aux, v, y.residual, Some(m)))
}

/// Stopping rule of the driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopConfig {
    /// Stop once `‖xᵏ⁺¹ - xᵏ‖ < eps`.
    pub eps: f64,
    pub max_iter: usize,
    /// Evaluate the natural residual at every iterate (one extra prox solve).
    pub track_ep_residual: bool,
    /// Keep every iterate in the report.
    pub keep_iterates: bool,
}

impl Default for StopConfig {
    fn default() -> Self {
        Self {
            eps: 1e-6,
            max_iter: 10_000,
            track_ep_residual: false,
            keep_iterates: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIter,
    InnerFailure { message: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceRecord {
    pub k: usize,
    pub step_delta: f64,
    /// `‖xᵏ⁺¹ - Txᵏ⁺¹‖`.
    pub fixed_point_residual: f64,
    /// Natural residual at `xᵏ⁺¹`, when tracked.
    pub ep_residual: Option<f64>,
    pub inner_residual: f64,
    pub armijo_m: Option<u32>,
    pub invariants_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub variant: Variant,
    pub iterations: usize,
    pub terminated: Termination,
    pub final_x: Vec<f64>,
    pub final_step_delta: f64,
    pub final_fixed_point_residual: f64,
    pub final_ep_residual: Option<f64>,
    pub trace: Vec<TraceRecord>,
    pub invariants: InvariantLog,
    /// `x⁰, x¹, …` when [`StopConfig::keep_iterates`] is set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterates: Option<Vec<Vec<f64>>>,
    pub wall_time: f64,
}

impl RunReport {
    pub fn converged(&self) -> bool {
        self.terminated == Termination::Converged
    }

    pub fn iterates(&self) -> Option<Vec<Vector>> {
        self.iterates
            .as_ref()
            .map(|xs| xs.iter().map(|x| Vector::from_column_slice(x)).collect())
    }
}

const FEASIBILITY_TOL: f64 = 1e-8;

/// Runs `variant` from the instance's start point (projected onto `C`) until
/// `‖xᵏ⁺¹ - xᵏ‖ < eps` or `max_iter`. An inner-solver failure ends the run
/// with [`Termination::InnerFailure`]; configuration errors are returned.
pub fn run(
    inst: &ProblemInstance,
    variant: Variant,
    schedule: &ScheduleConfig,
    stop: &StopConfig,
    inner: &InnerSolveConfig,
) -> Result<RunReport> {
    let start = inst
        .start
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("instance has no start point".into()))?;
    if !(stop.eps > 0.0) || stop.max_iter == 0 {
        return Err(Error::Config("need eps > 0 and max_iter >= 1".into()));
    }
    schedule.validate(variant, inst.f.as_ref(), stop.max_iter.min(10_000))?;

    let clock = Instant::now();
    let f = inst.f.as_ref();
    let set = inst.set.as_ref();
    let lipschitz = f.lipschitz_pair();
    let q = inst.known_solution.as_ref();

    let mut state = SolverState::new(set.project_unchecked(start));
    let mut iterates = stop
        .keep_iterates
        .then(|| vec![state.x.iter().copied().collect::<Vec<f64>>()]);
    let mut trace = Vec::new();
    let mut log = InvariantLog::default();
    let mut terminated = Termination::MaxIter;
    let mut last_rho = schedule_params(0, schedule).rho;

    for k in 0..stop.max_iter {
        let params = schedule_params(k, schedule);
        last_rho = params.rho;
        let stepped = match variant {
            Variant::Proximal => alg1_step(&state, inst, &params, inner),
            Variant::Extragradient => alg2_step(&state, inst, &params, inner),
            Variant::Linesearch => alg3_step(&state, inst, &params, schedule, inner),
        };
        let next = match stepped {
            Ok(s) => s,
            Err(e) => {
                terminated = Termination::InnerFailure {
                    message: e.to_string(),
                };
                break;
            }
        };

        let mut step_log = step_invariants(&state, &next, set, q, lipschitz, variant, &params);
        for r in &mut step_log.records {
            r.iteration = Some(k);
        }
        let invariants_ok = step_log.all_satisfied();
        log.extend(step_log);

        let ep = if stop.track_ep_residual {
            match diagnostics::ep_residual(f, &next.x, params.rho, set, inner) {
                Ok(r) => Some(r),
                Err(e) => {
                    terminated = Termination::InnerFailure {
                        message: e.to_string(),
                    };
                    state = next;
                    break;
                }
            }
        } else {
            None
        };
        trace.push(TraceRecord {
            k,
            step_delta: next.step_delta,
            fixed_point_residual: (&next.x - inst.map.apply_unchecked(&next.x)).norm(),
            ep_residual: ep,
            inner_residual: next.inner_residual,
            armijo_m: next.armijo_m,
            invariants_ok,
        });
        if let Some(xs) = iterates.as_mut() {
            xs.push(next.x.iter().copied().collect());
        }
        state = next;
        if state.step_delta < stop.eps {
            terminated = Termination::Converged;
            break;
        }
    }

    let final_ep_residual = diagnostics::ep_residual(f, &state.x, last_rho, set, inner).ok();
    Ok(RunReport {
        variant,
        iterations: trace.len(),
        terminated,
        final_step_delta: state.step_delta,
        final_fixed_point_residual: maps::fixed_point_residual(inst.map.as_ref(), &state.x)?,
        final_ep_residual,
        final_x: state.x.iter().copied().collect(),
        trace,
        invariants: log,
        iterates,
        wall_time: clock.elapsed().as_secs_f64(),
    })
}

fn step_invariants(
    before: &SolverState,
    after: &SolverState,
    set: &dyn FeasibleSet,
    q: Option<&Vector>,
    lipschitz: Option<(f64, f64)>,
    variant: Variant,
    params: &StepParams,
) -> InvariantLog {
    let mut log = InvariantLog::default();
    let mut points = after.aux.points();
    points.push(("x", &after.x));
    if let Some(v) = &after.v {
        points.push(("v", v));
    }
    let worst = points
        .iter()
        .map(|(_, p)| sets::distance(set, p))
        .fold(0.0, f64::max);
    log.push(InvariantRecord::le("feasibility", worst, FEASIBILITY_TOL));

    let Some(q) = q else {
        return log;
    };
    log.push(InvariantRecord::le(
        "fejer",
        (&after.x - q).norm(),
        (&before.x - q).norm(),
    ));
    match (&after.aux, variant) {
        (Aux::Extragradient { y, z }, Variant::Extragradient) => {
            if let Some((l1, l2)) = lipschitz {
                log.push(diagnostics::extragradient_descent_check(
                    &before.x, y, z, q, params.rho, l1, l2,
                ));
            }
        }
        (Aux::Linesearch { .. }, Variant::Linesearch) => {
            log.extend(diagnostics::linesearch_step_check(after, q, params.gamma));
        }
        _ => {}
    }
    log
}
