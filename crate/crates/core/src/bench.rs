//! Random Nash–Cournot-type instances and batch benchmarking.
//!
//! Instances follow the classic test setup: `f(x, y) = (Px + Qy)ᵀ(y - x)`,
//! `T x = (I + U)⁻¹x` with diagonal `U`, `C = [-10, 10]ⁿ`, and a random start
//! in `C`. `0` is always a common solution.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{run, StopConfig, Termination, Variant};
use crate::error::{Error, Result};
use crate::maps::DiagonalResolventMap;
use crate::model::{ProblemInstance, QuadraticBifunction, ScheduleConfig};
use crate::sets::BoxSet;
use crate::subproblems::InnerSolveConfig;
use crate::{Matrix, Vector};

/// Box half-width of the feasible set and of the start point distribution.
pub const BOX_BOUND: f64 = 10.0;
/// Upper end of the distribution of the positive diagonal entries of `U`.
pub const U_MAX: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub seed: u64,
    /// Fraction of coordinates with `uᵢᵢ > 0`; at least one is always active.
    pub i0_fraction: f64,
    /// Range of the raw entries of the Gram factors.
    pub entry_range: (f64, f64),
}

impl GenSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            i0_fraction: 0.5,
            entry_range: (-5.0, 5.0),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be >= 1".into()));
        }
        if !(self.i0_fraction > 0.0 && self.i0_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "i0_fraction must lie in (0, 1], got {}",
                self.i0_fraction
            )));
        }
        let (lo, hi) = self.entry_range;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "bad entry range [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}

/// Serialized form of a generated instance. Matrices are flat row-major arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceData {
    pub n: usize,
    #[serde(rename = "P")]
    pub p: Vec<f64>,
    #[serde(rename = "Q")]
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    pub u_diag: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub x0: Vec<f64>,
    pub seed: u64,
}

impl InstanceData {
    pub fn generate(spec: &GenSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.n;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let (lo, hi) = spec.entry_range;
        let gram = |rng: &mut ChaCha8Rng| {
            let a = Matrix::from_fn(n, n, |_, _| rng.random_range(lo..=hi));
            let g = a.tr_mul(&a);
            (&g + g.transpose()) * 0.5
        };
        let q = gram(&mut rng);
        // P = Q + Gram keeps P - Q positive semidefinite.
        let p = &q + gram(&mut rng);

        let active = ((spec.i0_fraction * n as f64).round() as usize).clamp(1, n);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let mut u_diag = vec![0.0; n];
        for &i in &idx[..active] {
            u_diag[i] = U_MAX - rng.random_range(0.0..U_MAX);
        }
        let x0 = (0..n)
            .map(|_| rng.random_range(-BOX_BOUND..=BOX_BOUND))
            .collect();

        Ok(Self {
            n,
            p: row_major(&p),
            q: row_major(&q),
            r: vec![0.0; n],
            u_diag,
            lo: vec![-BOX_BOUND; n],
            hi: vec![BOX_BOUND; n],
            x0,
            seed: spec.seed,
        })
    }

    /// Builds the instance with known solution `0` when it lies in the box.
    pub fn to_instance(&self) -> Result<ProblemInstance> {
        let n = self.n;
        for (name, len, want) in [
            ("P", self.p.len(), n * n),
            ("Q", self.q.len(), n * n),
            ("r", self.r.len(), n),
            ("u_diag", self.u_diag.len(), n),
            ("lo", self.lo.len(), n),
            ("hi", self.hi.len(), n),
            ("x0", self.x0.len(), n),
        ] {
            if len != want {
                return Err(Error::InvalidArgument(format!(
                    "{name} has {len} entries, expected {want}"
                )));
            }
        }
        let f = QuadraticBifunction::new(
            Matrix::from_row_slice(n, n, &self.p),
            Matrix::from_row_slice(n, n, &self.q),
            Vector::from_column_slice(&self.r),
        )?;
        let set = BoxSet::new(
            Vector::from_column_slice(&self.lo),
            Vector::from_column_slice(&self.hi),
        )?;
        let zero_feasible = self.lo.iter().all(|l| *l <= 0.0) && self.hi.iter().all(|h| *h >= 0.0);
        let map = DiagonalResolventMap::new(Vector::from_column_slice(&self.u_diag))?;
        let mut inst = ProblemInstance::new(Arc::new(set), Arc::new(f), Arc::new(map))?
            .with_start(Vector::from_column_slice(&self.x0))?;
        if zero_feasible && self.r.iter().all(|v| *v == 0.0) {
            inst = inst.with_known_solution(Vector::zeros(n))?;
        }
        Ok(inst)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|source| io_err(path, source))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut w, self).map_err(|e| Error::Serde(e.to_string()))?;
        w.flush().map_err(|source| io_err(path, source))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| io_err(path, source))?;
        serde_json::from_reader(std::io::BufReader::new(file))
            .map_err(|e| Error::Serde(format!("{}: {e}", path.display())))
    }
}

fn row_major(m: &Matrix) -> Vec<f64> {
    (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)])
        .collect()
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// A random instance with `Q = A₁ᵀA₁`, `P = Q + A₂ᵀA₂`, `r = 0`,
/// `U = diag(u)` with `uᵢ ∈ (0, 25]` on a random index set and `0` elsewhere,
/// `C = [-10, 10]ⁿ`, start uniform in `C`, known solution `0`.
pub fn generate_instance(spec: &GenSpec) -> Result<ProblemInstance> {
    InstanceData::generate(spec)?.to_instance()
}

/// Seed of the `index`-th instance of size `n` in a suite.
pub fn derive_seed(master: u64, n: usize, index: usize) -> u64 {
    splitmix64(master ^ splitmix64(((n as u64) << 32) ^ index as u64))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub variant: Variant,
    pub master_seed: u64,
    pub i0_fraction: f64,
    /// `None` uses [`ScheduleConfig::for_variant`] on each instance.
    pub schedule: Option<ScheduleConfig>,
    pub stop: StopConfig,
    pub inner: InnerSolveConfig,
}

impl SuiteConfig {
    pub fn new(sizes: Vec<usize>, reps: usize, variant: Variant, master_seed: u64) -> Self {
        Self {
            sizes,
            reps,
            variant,
            master_seed,
            i0_fraction: 0.5,
            schedule: None,
            stop: StopConfig::default(),
            inner: InnerSolveConfig::default(),
        }
    }
}

/// One solver run of a suite.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub variant: Variant,
    pub n: usize,
    pub index: usize,
    pub seed: u64,
    pub iterations: usize,
    pub wall_time: f64,
    pub terminated: Termination,
    pub invariant_violations: usize,
}

impl RunOutcome {
    pub fn converged(&self) -> bool {
        self.terminated == Termination::Converged
    }
}

/// One row of a benchmark table. Column order is the CSV order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub variant: String,
    pub n: usize,
    /// Runs that converged; the averages are over these.
    pub n_problems: usize,
    pub avg_time_s: f64,
    pub avg_iterations: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    pub runs: Vec<RunOutcome>,
}

impl BenchTable {
    /// Human-readable notes for runs excluded from the averages.
    pub fn footnotes(&self) -> Vec<String> {
        self.runs
            .iter()
            .filter(|r| !r.converged())
            .map(|r| {
                format!(
                    "{} n={} seed={}: {:?}",
                    r.variant, r.n, r.seed, r.terminated
                )
            })
            .collect()
    }

    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| r.failures > 0)
    }
}

/// Generates `reps` instances per size, solves each, and averages time and
/// iterations over the converged runs. Instances run in parallel; results are
/// ordered by `(n, index)`, so the table does not depend on scheduling.
pub fn run_suite(cfg: &SuiteConfig) -> Result<BenchTable> {
    if cfg.reps == 0 {
        return Err(Error::InvalidArgument("reps must be >= 1".into()));
    }
    if cfg.sizes.is_empty() {
        return Err(Error::InvalidArgument("need at least one size".into()));
    }
    let jobs: Vec<(usize, usize)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| (0..cfg.reps).map(move |i| (n, i)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(n, index)| run_one(cfg, n, index))
        .collect::<Result<Vec<_>>>()?;

    let rows = cfg
        .sizes
        .iter()
        .map(|&n| {
            let ok: Vec<&RunOutcome> = runs.iter().filter(|r| r.n == n && r.converged()).collect();
            let failures = runs.iter().filter(|r| r.n == n && !r.converged()).count();
            let count = ok.len();
            let mean = |g: fn(&RunOutcome) -> f64| {
                if count == 0 {
                    f64::NAN
                } else {
                    ok.iter().map(|r| g(r)).sum::<f64>() / count as f64
                }
            };
            BenchRow {
                variant: cfg.variant.to_string(),
                n,
                n_problems: count,
                avg_time_s: mean(|r| r.wall_time),
                avg_iterations: mean(|r| r.iterations as f64),
                failures,
            }
        })
        .collect();
    Ok(BenchTable { rows, runs })
}

fn run_one(cfg: &SuiteConfig, n: usize, index: usize) -> Result<RunOutcome> {
    let seed = derive_seed(cfg.master_seed, n, index);
    let spec = GenSpec {
        i0_fraction: cfg.i0_fraction,
        ..GenSpec::new(n, seed)
    };
    let inst = generate_instance(&spec)?;
    let schedule = match &cfg.schedule {
        Some(s) => s.clone(),
        None => ScheduleConfig::for_variant(cfg.variant, inst.f.as_ref()),
    };
    let report = run(&inst, cfg.variant, &schedule, &cfg.stop, &cfg.inner)?;
    Ok(RunOutcome {
        variant: cfg.variant,
        n,
        index,
        seed,
        iterations: report.iterations,
        wall_time: report.wall_time,
        invariant_violations: report.invariants.violations().count(),
        terminated: report.terminated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

/// Writes the rows of `table` to `w`.
pub fn write_report(rows: &[BenchRow], format: ReportFormat, w: impl Write) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("benchmark table is empty".into()));
    }
    match format {
        ReportFormat::Csv => {
            let mut out = csv::Writer::from_writer(w);
            for row in rows {
                out.serialize(row)
                    .map_err(|e| Error::Serde(e.to_string()))?;
            }
            out.flush().map_err(|e| Error::Serde(e.to_string()))
        }
        ReportFormat::Json => {
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, rows).map_err(|e| Error::Serde(e.to_string()))?;
            writeln!(w).map_err(|e| Error::Serde(e.to_string()))
        }
    }
}

/// Writes the table to `path` as CSV (`variant,n,n_problems,avg_time_s,avg_iterations,failures`)
/// or as a JSON array of row objects with the same keys.
pub fn emit_report(table: &BenchTable, format: ReportFormat, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::InvalidArgument("benchmark table is empty".into()));
    }
    let file = File::create(path).map_err(|source| io_err(path, source))?;
    write_report(&table.rows, format, BufWriter::new(file)).map_err(|e| match e {
        Error::Serde(msg) => Error::Serde(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::ep_residual;
    use crate::linalg;
    use crate::maps::fixed_point_residual;
    use crate::model::validate_instance;

    #[test]
    fn generation_is_deterministic() {
        let a = InstanceData::generate(&GenSpec::new(6, 42)).unwrap();
        let b = InstanceData::generate(&GenSpec::new(6, 42)).unwrap();
        let c = InstanceData::generate(&GenSpec::new(6, 43)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_structure() {
        let d = InstanceData::generate(&GenSpec::new(8, 1)).unwrap();
        let p = Matrix::from_row_slice(8, 8, &d.p);
        let q = Matrix::from_row_slice(8, 8, &d.q);
        assert!(linalg::min_eigenvalue(&(&p - &q)) >= -1e-8);
        assert!(linalg::min_eigenvalue(&q) >= -1e-8);
        assert_eq!(d.u_diag.iter().filter(|u| **u > 0.0).count(), 4);
        assert!(d.u_diag.iter().all(|u| (0.0..=U_MAX).contains(u)));
        assert!(d.x0.iter().all(|x| x.abs() <= BOX_BOUND));
        assert_eq!(d.r, vec![0.0; 8]);
    }

    #[test]
    fn one_dimensional_instance_solution_is_zero() {
        let spec = GenSpec {
            i0_fraction: 1.0,
            ..GenSpec::new(1, 5)
        };
        let inst = generate_instance(&spec).unwrap();
        let zero = Vector::zeros(1);
        assert_eq!(fixed_point_residual(inst.map.as_ref(), &zero).unwrap(), 0.0);
        let ep = ep_residual(
            inst.f.as_ref(),
            &zero,
            0.5,
            inst.set.as_ref(),
            &InnerSolveConfig::default(),
        )
        .unwrap();
        assert!(ep <= 1e-12);
        // Fix(T) = {0}: any nonzero point moves
        assert!(
            fixed_point_residual(inst.map.as_ref(), &Vector::from_element(1, 1.0)).unwrap() > 0.0
        );
    }

    #[test]
    fn generated_instances_validate() {
        for seed in 0..5 {
            let inst = generate_instance(&GenSpec::new(5, seed)).unwrap();
            let rep = validate_instance(&inst, 100, seed).unwrap();
            assert!(rep.passed(), "{:?}", rep.violations().collect::<Vec<_>>());
        }
    }

    #[test]
    fn bad_specs() {
        assert!(generate_instance(&GenSpec::new(0, 1)).is_err());
        let spec = GenSpec {
            i0_fraction: 0.0,
            ..GenSpec::new(3, 1)
        };
        assert!(generate_instance(&spec).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = InstanceData::generate(&GenSpec::new(3, 9)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        d.save(&path).unwrap();
        assert_eq!(InstanceData::load(&path).unwrap(), d);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        for key in ["n", "P", "Q", "r", "u_diag", "lo", "hi", "x0", "seed"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["P"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn seeds_are_distinct() {
        let mut seeds: Vec<u64> = (0..10)
            .flat_map(|n| (0..10).map(move |i| derive_seed(1, n, i)))
            .collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 100);
    }

    fn row() -> BenchRow {
        BenchRow {
            variant: "alg2".into(),
            n: 5,
            n_problems: 10,
            avg_time_s: 0.25,
            avg_iterations: 152.0,
            failures: 0,
        }
    }

    #[test]
    fn csv_report() {
        let mut buf = Vec::new();
        write_report(&[row()], ReportFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "variant,n,n_problems,avg_time_s,avg_iterations,failures"
        );
        assert_eq!(lines[1], "alg2,5,10,0.25,152.0,0");
    }

    #[test]
    fn json_report() {
        let mut buf = Vec::new();
        write_report(&[row(), row()], ReportFormat::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        let keys: Vec<&String> = arr[0].as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 6);
        assert_eq!(arr[0]["avg_iterations"], 152.0);
    }

    #[test]
    fn empty_report_is_rejected() {
        assert!(write_report(&[], ReportFormat::Csv, Vec::new()).is_err());
        let table = BenchTable {
            rows: vec![],
            runs: vec![],
        };
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_report(&table, ReportFormat::Json, &dir.path().join("x.json")).is_err());
    }

    #[test]
    fn io_errors_carry_the_path() {
        let table = BenchTable {
            rows: vec![row()],
            runs: vec![],
        };
        let path = Path::new("/nonexistent-dir/report.csv");
        match emit_report(&table, ReportFormat::Csv, path) {
            Err(Error::Io { path: p, .. }) => assert_eq!(p, path),
            other => panic!("{other:?}"),
        }
    }
}
