//! Bifunctions, parameter schedules, and problem instances.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algorithms::Variant;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::linalg;
use crate::maps::HybridMap;
use crate::sets::{self, FeasibleSet};
use crate::subproblems::InnerSolveConfig;
use crate::{diagnostics, maps, Matrix, Vector};

/// An equilibrium bifunction `f(x, y)` that is convex in `y`.
pub trait Bifunction: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    fn eval(&self, x: &Vector, y: &Vector) -> f64;

    /// One element of the subdifferential of `f(x, ·)` at `y`.
    fn subgrad2(&self, x: &Vector, y: &Vector) -> Result<Vector>;

    /// Lipschitz-type constants `(L₁, L₂)` with
    /// `f(x,y) + f(y,z) ≥ f(x,z) - L₁‖x-y‖² - L₂‖y-z‖²`, when known.
    fn lipschitz_pair(&self) -> Option<(f64, f64)> {
        None
    }

    /// Hook used by the inner solvers to switch to the closed-form quadratic path.
    fn as_quadratic(&self) -> Option<&QuadraticBifunction> {
        None
    }
}

/// `f(x, y) = (Px + Qy + r)ᵀ(y - x)` with symmetric `P`, `Q`.
///
/// This is the bifunction of the Nash–Cournot oligopolistic market model. It is
/// monotone when `P - Q` is positive semidefinite and convex in `y` when `Q` is.
/// The constructor only checks shapes and symmetry; use
/// [`validate_instance`] to certify the semidefiniteness assumptions.
#[derive(Debug, Clone)]
pub struct QuadraticBifunction {
    p: Matrix,
    q: Matrix,
    r: Vector,
    norm_q: f64,
    norm_p_plus_q: f64,
    norm_p_minus_q: f64,
}

impl QuadraticBifunction {
    pub fn new(p: Matrix, q: Matrix, r: Vector) -> Result<Self> {
        let n = r.len();
        if n == 0 {
            return Err(Error::InvalidArgument(
                "quadratic bifunction needs n >= 1".into(),
            ));
        }
        for (name, m) in [("P", &p), ("Q", &q)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be {n}x{n}, got {}x{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} has non-finite entries"
                )));
            }
            if linalg::asymmetry(m) > 1e-10 * (1.0 + m.norm()) {
                return Err(Error::InvalidArgument(format!("{name} must be symmetric")));
            }
        }
        check_finite(&r, "r")?;
        let norm_q = linalg::spectral_norm(&q);
        let norm_p_plus_q = linalg::spectral_norm(&(&p + &q));
        let norm_p_minus_q = linalg::spectral_norm(&(&p - &q));
        Ok(Self {
            p,
            q,
            r,
            norm_q,
            norm_p_plus_q,
            norm_p_minus_q,
        })
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn r(&self) -> &Vector {
        &self.r
    }

    pub fn norm_q(&self) -> f64 {
        self.norm_q
    }

    pub fn norm_p_plus_q(&self) -> f64 {
        self.norm_p_plus_q
    }

    /// `‖P - Q‖`, spectral norm.
    pub fn norm_p_minus_q(&self) -> f64 {
        self.norm_p_minus_q
    }
}

impl Bifunction for QuadraticBifunction {
    fn dim(&self) -> usize {
        self.r.len()
    }

    fn eval(&self, x: &Vector, y: &Vector) -> f64 {
        let a = &self.p * x + &self.q * y + &self.r;
        a.dot(&(y - x))
    }

    fn subgrad2(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        check_dim(self.dim(), x.len())?;
        check_dim(self.dim(), y.len())?;
        // ∇_y [(Px + Qy + r)ᵀ(y - x)] = Px + Qy + r + Q(y - x)
        Ok(&self.p * x + &self.q * y + &self.r + &self.q * (y - x))
    }

    fn lipschitz_pair(&self) -> Option<(f64, f64)> {
        let l = 0.5 * self.norm_p_minus_q;
        Some((l, l))
    }

    fn as_quadratic(&self) -> Option<&QuadraticBifunction> {
        Some(self)
    }
}

/// `f ≡ 0`. With this bifunction every algorithm reduces to a pure
/// Ishikawa iteration for `T`.
#[derive(Debug, Clone, Copy)]
pub struct ZeroBifunction {
    pub dim: usize,
}

impl Bifunction for ZeroBifunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, _x: &Vector, _y: &Vector) -> f64 {
        0.0
    }

    fn subgrad2(&self, _x: &Vector, y: &Vector) -> Result<Vector> {
        Ok(Vector::zeros(y.len()))
    }

    fn lipschitz_pair(&self) -> Option<(f64, f64)> {
        Some((0.0, 0.0))
    }
}

type EvalFn = dyn Fn(&Vector, &Vector) -> f64 + Send + Sync;
type SubgradFn = dyn Fn(&Vector, &Vector) -> Vector + Send + Sync;

/// A bifunction given by closures. Goes through the generic (non-quadratic)
/// inner solvers.
#[derive(Clone)]
pub struct ClosureBifunction {
    dim: usize,
    eval: Arc<EvalFn>,
    subgrad: Arc<SubgradFn>,
    lipschitz: Option<(f64, f64)>,
}

impl ClosureBifunction {
    pub fn new(
        dim: usize,
        eval: impl Fn(&Vector, &Vector) -> f64 + Send + Sync + 'static,
        subgrad: impl Fn(&Vector, &Vector) -> Vector + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            eval: Arc::new(eval),
            subgrad: Arc::new(subgrad),
            lipschitz: None,
        }
    }

    pub fn with_lipschitz(mut self, l1: f64, l2: f64) -> Self {
        self.lipschitz = Some((l1, l2));
        self
    }
}

impl fmt::Debug for ClosureBifunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosureBifunction")
            .field("dim", &self.dim)
            .field("lipschitz", &self.lipschitz)
            .finish_non_exhaustive()
    }
}

impl Bifunction for ClosureBifunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Vector, y: &Vector) -> f64 {
        (self.eval)(x, y)
    }

    fn subgrad2(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        let g = (self.subgrad)(x, y);
        if g.len() != y.len() || g.iter().any(|v| !v.is_finite()) {
            return Err(Error::UndefinedSubgradient);
        }
        Ok(g)
    }

    fn lipschitz_pair(&self) -> Option<(f64, f64)> {
        self.lipschitz
    }
}

/// A real sequence indexed by the iteration counter.
#[derive(Clone)]
pub enum Sequence {
    Constant(f64),
    /// `limit + scale / (k + offset)`, with an optional override at `k = 0`.
    Harmonic {
        limit: f64,
        scale: f64,
        offset: f64,
        first: Option<f64>,
    },
    Custom(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl Sequence {
    pub fn at(&self, k: usize) -> f64 {
        match self {
            Sequence::Constant(c) => *c,
            Sequence::Harmonic {
                limit,
                scale,
                offset,
                first,
            } => match (k, first) {
                (0, Some(v)) => *v,
                _ => limit + scale / (k as f64 + offset),
            },
            Sequence::Custom(f) => f(k),
        }
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequence::Constant(c) => write!(f, "Constant({c})"),
            Sequence::Harmonic {
                limit,
                scale,
                offset,
                first,
            } => write!(
                f,
                "Harmonic({limit} + {scale}/(k + {offset}), k=0 -> {first:?})"
            ),
            Sequence::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Parameters for one outer iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub gamma: f64,
}

/// Parameter sequences and linesearch constants shared by the three solvers.
///
/// The default is the Cournot benchmark setting:
/// `α₀ = β₀ = ½`, `αₖ = 1 - 1/(k+2)`, `βₖ = ½ + 1/(k+3)`, `ρₖ = 0.5`, `γₖ = 1`,
/// `η = 0.98`, `μ = 0.4`. The printed `β` formula would give `β₀ = 5/6`; the
/// default overrides `k = 0` to `½`. Set `first: None` on the `beta` sequence
/// to use the formula value instead.
#[derive(Debug, Clone)]
pub struct ScheduleConfig {
    pub alpha: Sequence,
    pub beta: Sequence,
    pub rho: Sequence,
    pub gamma: Sequence,
    pub eta: f64,
    pub mu: f64,
    /// Largest `m` tried by the Armijo search. With `η = 0.98` and large
    /// `‖P‖`, early iterations routinely need `m` in the low hundreds.
    pub max_armijo: u32,
    /// `[β̲, β̄] ⊂ (0, 1)` that every `βₖ` must lie in.
    pub beta_bounds: (f64, f64),
    /// Optional upper bound on `ρₖ` for the proximal variant, which has none
    /// in theory but may need one numerically.
    pub rho_max: Option<f64>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            alpha: Sequence::Harmonic {
                limit: 1.0,
                scale: -1.0,
                offset: 2.0,
                first: Some(0.5),
            },
            beta: Sequence::Harmonic {
                limit: 0.5,
                scale: 1.0,
                offset: 3.0,
                first: Some(0.5),
            },
            rho: Sequence::Constant(0.5),
            gamma: Sequence::Constant(1.0),
            eta: 0.98,
            mu: 0.4,
            max_armijo: 1000,
            beta_bounds: (0.5, 5.0 / 6.0),
            rho_max: None,
        }
    }
}

impl ScheduleConfig {
    /// Default schedule with `ρₖ = 1 / (4·max(L₁, L₂))`, which is
    /// `0.5 / ‖P - Q‖` for a quadratic bifunction. Falls back to the default
    /// `ρ` when the constants are unknown or zero.
    pub fn extragradient(f: &dyn Bifunction) -> Self {
        let mut cfg = Self::default();
        if let Some((l1, l2)) = f.lipschitz_pair() {
            let l = l1.max(l2);
            if l > 0.0 {
                cfg.rho = Sequence::Constant(0.25 / l);
            }
        }
        cfg
    }

    /// The schedule each variant uses in the Cournot benchmark.
    pub fn for_variant(variant: Variant, f: &dyn Bifunction) -> Self {
        match variant {
            Variant::Extragradient => Self::extragradient(f),
            Variant::Proximal | Variant::Linesearch => Self::default(),
        }
    }

    pub fn with_rho(mut self, rho: Sequence) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_alpha(mut self, alpha: Sequence) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_beta(mut self, beta: Sequence) -> Self {
        self.beta = beta;
        self
    }

    /// Checks the parameter constraints of `variant` over the first
    /// `horizon` iterations, plus the limit `αₖ → 1`.
    pub fn validate(&self, variant: Variant, f: &dyn Bifunction, horizon: usize) -> Result<()> {
        let (blo, bhi) = self.beta_bounds;
        if !(0.0 < blo && blo <= bhi && bhi < 1.0) {
            return Err(Error::Config(format!(
                "beta bounds [{blo}, {bhi}] must lie in (0, 1)"
            )));
        }
        if (self.alpha.at(1 << 40) - 1.0).abs() > 1e-6 {
            return Err(Error::Config("alpha(k) must tend to 1".into()));
        }
        let rho_bar = match variant {
            Variant::Extragradient => f.lipschitz_pair().and_then(|(l1, l2)| {
                let l = l1.max(l2);
                (l > 0.0).then(|| 1.0 / (2.0 * l))
            }),
            _ => None,
        };
        for k in 0..horizon.max(1) {
            let p = schedule_params(k, self);
            if !(0.0..=1.0).contains(&p.alpha) {
                return Err(Error::Config(format!(
                    "alpha({k}) = {} outside [0, 1]",
                    p.alpha
                )));
            }
            if !(blo - 1e-15..=bhi + 1e-15).contains(&p.beta) {
                return Err(Error::Config(format!(
                    "beta({k}) = {} outside [{blo}, {bhi}]",
                    p.beta
                )));
            }
            if !(p.rho > 0.0) || !p.rho.is_finite() {
                return Err(Error::Config(format!(
                    "rho({k}) = {} must be positive",
                    p.rho
                )));
            }
            if let Some(max) = self.rho_max {
                if p.rho > max {
                    return Err(Error::Config(format!(
                        "rho({k}) = {} exceeds rho_max {max}",
                        p.rho
                    )));
                }
            }
            if let Some(bar) = rho_bar {
                if p.rho >= bar {
                    return Err(Error::Config(format!(
                        "rho({k}) = {} violates rho < min(1/(2 L1), 1/(2 L2)) = {bar}",
                        p.rho
                    )));
                }
            }
            if variant == Variant::Linesearch && !(p.gamma > 0.0 && p.gamma < 2.0) {
                return Err(Error::Config(format!(
                    "gamma({k}) = {} outside (0, 2)",
                    p.gamma
                )));
            }
        }
        if variant == Variant::Linesearch {
            for (name, v) in [("eta", self.eta), ("mu", self.mu)] {
                if !(v > 0.0 && v < 1.0) {
                    return Err(Error::Config(format!("{name} = {v} outside (0, 1)")));
                }
            }
            if self.max_armijo == 0 {
                return Err(Error::Config("max_armijo must be >= 1".into()));
            }
        }
        Ok(())
    }
}

/// The parameters `(αₖ, βₖ, ρₖ, γₖ)` of iteration `k`.
pub fn schedule_params(k: usize, cfg: &ScheduleConfig) -> StepParams {
    StepParams {
        alpha: cfg.alpha.at(k),
        beta: cfg.beta.at(k),
        rho: cfg.rho.at(k),
        gamma: cfg.gamma.at(k),
    }
}

/// A feasible set, a bifunction, and a mapping, plus an optional known
/// common solution and start point.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub set: Arc<dyn FeasibleSet>,
    pub f: Arc<dyn Bifunction>,
    pub map: Arc<dyn HybridMap>,
    pub known_solution: Option<Vector>,
    pub start: Option<Vector>,
}

impl ProblemInstance {
    pub fn new(
        set: Arc<dyn FeasibleSet>,
        f: Arc<dyn Bifunction>,
        map: Arc<dyn HybridMap>,
    ) -> Result<Self> {
        let n = set.dim();
        check_dim(n, f.dim())?;
        check_dim(n, map.dim())?;
        Ok(Self {
            set,
            f,
            map,
            known_solution: None,
            start: None,
        })
    }

    pub fn with_known_solution(mut self, q: Vector) -> Result<Self> {
        check_dim(self.dim(), q.len())?;
        check_finite(&q, "known solution")?;
        self.known_solution = Some(q);
        Ok(self)
    }

    pub fn with_start(mut self, x0: Vector) -> Result<Self> {
        check_dim(self.dim(), x0.len())?;
        check_finite(&x0, "start point")?;
        self.start = Some(x0);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }
}

/// Outcome of one sampled assumption check.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value of the checked quantity (should be `≤ 0` or tiny).
    pub worst: f64,
    /// Points that produced `worst` when it is a violation.
    pub witness: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AssumptionCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn violations(&self) -> impl Iterator<Item = &AssumptionCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AssumptionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Worst {
    value: f64,
    witness: Option<Vec<Vec<f64>>>,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            witness: None,
        }
    }

    fn update(&mut self, value: f64, points: &[&Vector]) {
        if value > self.value {
            self.value = value;
            self.witness = Some(points.iter().map(|p| p.iter().copied().collect()).collect());
        }
    }

    fn finish(self, name: &'static str, passed: bool) -> AssumptionCheck {
        AssumptionCheck {
            name,
            passed,
            worst: self.value,
            witness: if passed { None } else { self.witness },
        }
    }
}

/// Sampled checks of the standing assumptions on an instance.
///
/// Reports violations instead of failing: monotonicity `f(x,y) + f(y,x) ≤ 0`,
/// `f(x,x) = 0`, validity of `subgrad2`, `T(C) ⊂ C`, semidefiniteness of
/// `P`, `Q`, `P - Q` for quadratic bifunctions, and membership of the known
/// solution in `Sol(C, f) ∩ Fix(T)`.
pub fn validate_instance(
    inst: &ProblemInstance,
    samples: usize,
    seed: u64,
) -> Result<ValidationReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let set = inst.set.as_ref();
    let f = inst.f.as_ref();
    let mut checks = Vec::new();

    let mut mono = Worst::new();
    let mut diag = Worst::new();
    let mut sub = Worst::new();
    let mut selfmap = Worst::new();
    let (mut mono_ok, mut diag_ok, mut sub_ok, mut selfmap_ok) = (true, true, true, true);
    for _ in 0..samples {
        let x = set.sample(&mut rng);
        let y = set.sample(&mut rng);
        let fxy = f.eval(&x, &y);
        let fyx = f.eval(&y, &x);
        let m = fxy + fyx;
        mono.update(m, &[&x, &y]);
        mono_ok &= m <= 1e-9 * (1.0 + fxy.abs() + fyx.abs());

        let d = f.eval(&x, &x).abs();
        diag.update(d, &[&x]);
        diag_ok &= d <= 1e-12;

        let g = f.subgrad2(&x, &y)?;
        let yp = set.sample(&mut rng);
        let fxyp = f.eval(&x, &yp);
        let gap = fxy + g.dot(&(&yp - &y)) - fxyp;
        sub.update(gap, &[&x, &y, &yp]);
        sub_ok &= gap <= 1e-8 * (1.0 + fxy.abs() + fxyp.abs());

        let tx = inst.map.apply_unchecked(&x);
        let dist = sets::distance(set, &tx);
        selfmap.update(dist, &[&x]);
        selfmap_ok &= dist <= 1e-10;
    }
    checks.push(mono.finish("monotone", mono_ok));
    checks.push(diag.finish("equilibrium", diag_ok));
    checks.push(sub.finish("subgradient", sub_ok));
    checks.push(selfmap.finish("self_map", selfmap_ok));

    if let Some(quad) = f.as_quadratic() {
        let pmq = quad.p() - quad.q();
        for (name, m) in [
            ("psd_p", quad.p()),
            ("psd_q", quad.q()),
            ("psd_p_minus_q", &pmq),
        ] {
            let lambda = linalg::min_eigenvalue(m);
            checks.push(AssumptionCheck {
                name,
                passed: lambda >= -linalg::psd_floor(m),
                worst: -lambda,
                witness: None,
            });
        }
    }

    if let Some(q) = &inst.known_solution {
        let tol = 1e-8;
        let dist = sets::distance(set, q);
        checks.push(AssumptionCheck {
            name: "solution_feasible",
            passed: dist <= tol,
            worst: dist,
            witness: None,
        });
        let fp = maps::fixed_point_residual(inst.map.as_ref(), q)?;
        checks.push(AssumptionCheck {
            name: "solution_fixed_point",
            passed: fp <= tol,
            worst: fp,
            witness: None,
        });
        let inner = InnerSolveConfig {
            tol: 1e-12,
            ..InnerSolveConfig::default()
        };
        let ep = diagnostics::ep_residual(f, q, 1.0, set, &inner)?;
        checks.push(AssumptionCheck {
            name: "solution_equilibrium",
            passed: ep <= tol,
            worst: ep,
            witness: None,
        });
    }
    Ok(ValidationReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::DiagonalResolventMap;
    use crate::sets::BoxSet;
    use approx::assert_relative_eq;

    fn instance(p: Matrix, q: Matrix) -> ProblemInstance {
        let n = p.nrows();
        ProblemInstance::new(
            Arc::new(BoxSet::cube(n, -10.0, 10.0).unwrap()),
            Arc::new(QuadraticBifunction::new(p, q, Vector::zeros(n)).unwrap()),
            Arc::new(DiagonalResolventMap::new(Vector::zeros(n)).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn default_schedule_first_terms() {
        let cfg = ScheduleConfig::default();
        let p0 = schedule_params(0, &cfg);
        assert_eq!((p0.alpha, p0.beta), (0.5, 0.5));
        let p1 = schedule_params(1, &cfg);
        assert_relative_eq!(p1.alpha, 2.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(p1.beta, 0.75, max_relative = 1e-15);
        let far = schedule_params(1_000_000, &cfg);
        assert!((far.alpha - 1.0).abs() < 1e-5);
        assert!((far.beta - 0.5).abs() < 1e-5);
    }

    #[test]
    fn beta_formula_without_override() {
        let cfg = ScheduleConfig::default().with_beta(Sequence::Harmonic {
            limit: 0.5,
            scale: 1.0,
            offset: 3.0,
            first: None,
        });
        assert_relative_eq!(
            schedule_params(0, &cfg).beta,
            5.0 / 6.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn default_schedule_shape() {
        let cfg = ScheduleConfig::default();
        let mut prev = 0.0;
        for k in 0..5000 {
            let p = schedule_params(k, &cfg);
            assert!(p.alpha >= prev);
            prev = p.alpha;
            assert!((0.5..=5.0 / 6.0).contains(&p.beta));
            assert_eq!(p, schedule_params(k, &cfg));
        }
    }

    #[test]
    fn schedule_validation() {
        let f = QuadraticBifunction::new(
            Matrix::identity(2, 2) * 3.0,
            Matrix::identity(2, 2),
            Vector::zeros(2),
        )
        .unwrap();
        // L = 1, so rho must stay below 0.5
        let cfg = ScheduleConfig::extragradient(&f);
        assert_relative_eq!(schedule_params(0, &cfg).rho, 0.25);
        cfg.validate(Variant::Extragradient, &f, 100).unwrap();
        let bad = ScheduleConfig::default().with_rho(Sequence::Constant(0.5));
        assert!(matches!(
            bad.validate(Variant::Extragradient, &f, 100),
            Err(Error::Config(_))
        ));
        bad.validate(Variant::Linesearch, &f, 100).unwrap();
        let no_limit = ScheduleConfig::default().with_alpha(Sequence::Constant(0.5));
        assert!(no_limit.validate(Variant::Proximal, &f, 10).is_err());
        let bad_eta = ScheduleConfig {
            eta: 1.0,
            ..ScheduleConfig::default()
        };
        assert!(bad_eta.validate(Variant::Linesearch, &f, 10).is_err());
    }

    #[test]
    fn identity_pair_is_monotone() {
        let inst = instance(Matrix::identity(3, 3), Matrix::identity(3, 3));
        let report = validate_instance(&inst, 200, 1).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.get("equilibrium").unwrap().worst <= 1e-12);
    }

    #[test]
    fn non_monotone_pair_is_reported_with_witness() {
        let inst = instance(Matrix::zeros(2, 2), Matrix::identity(2, 2));
        let report = validate_instance(&inst, 50, 2).unwrap();
        let mono = report.get("monotone").unwrap();
        assert!(!mono.passed);
        let w = mono.witness.as_ref().unwrap();
        let x = Vector::from_vec(w[0].clone());
        let y = Vector::from_vec(w[1].clone());
        // f(x,y) + f(y,x) = (y - x)ᵀ(Q - P)(y - x) = ‖y - x‖²
        assert_relative_eq!(mono.worst, (y - x).norm_squared(), max_relative = 1e-10);
        assert!(!report.get("psd_p_minus_q").unwrap().passed);
    }

    #[test]
    fn quadratic_monotonicity_identity() {
        let p = Matrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0]);
        let q = Matrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let f = QuadraticBifunction::new(p.clone(), q.clone(), Vector::from_vec(vec![1.0, -2.0]))
            .unwrap();
        let x = Vector::from_vec(vec![0.3, -1.2]);
        let y = Vector::from_vec(vec![-2.0, 4.0]);
        let d = &y - &x;
        let expected = -(d.transpose() * (&p - &q) * &d)[(0, 0)];
        assert_relative_eq!(
            f.eval(&x, &y) + f.eval(&y, &x),
            expected,
            max_relative = 1e-12
        );
    }

    #[test]
    fn rejects_asymmetric_matrix() {
        let p = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(QuadraticBifunction::new(p, Matrix::identity(2, 2), Vector::zeros(2)).is_err());
    }
}
