//! Symmetric generalized hybrid mappings.
//!
//! A mapping `T : C → C` is `(α, β, γ, δ)`-symmetric generalized hybrid when
//!
//! ```text
//! α‖Tx - Ty‖² + β(‖x - Ty‖² + ‖y - Tx‖²) + γ‖x - y‖² + δ(‖x - Tx‖² + ‖y - Ty‖²) ≤ 0
//! ```
//!
//! for all `x, y ∈ C`. `(1, 0, -1, 0)` is nonexpansiveness, `(2, -1, 0, 0)`
//! nonspreading, `(3, -1, -1, 0)` hybrid. With `α + 2β + γ ≥ 0`, `α + β > 0`,
//! `δ ≥ 0` and a nonempty fixed-point set, `T` is quasi-nonexpansive and
//! `I - T` is demiclosed at zero.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::sets::FeasibleSet;
use crate::Vector;

/// The four coefficients of the defining inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HybridParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl HybridParams {
    pub const NONEXPANSIVE: Self = Self::new(1.0, 0.0, -1.0, 0.0);
    pub const NONSPREADING: Self = Self::new(2.0, -1.0, 0.0, 0.0);
    pub const HYBRID: Self = Self::new(3.0, -1.0, -1.0, 0.0);

    pub const fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// `α + 2β + γ ≥ 0`, `α + β > 0`, `δ ≥ 0`.
    pub fn is_admissible(&self) -> bool {
        self.alpha + 2.0 * self.beta + self.gamma >= 0.0
            && self.alpha + self.beta > 0.0
            && self.delta >= 0.0
    }

    /// Left-hand side of the defining inequality for the pair `(x, y)`.
    pub fn lhs(&self, x: &Vector, y: &Vector, tx: &Vector, ty: &Vector) -> f64 {
        self.alpha * (tx - ty).norm_squared()
            + self.beta * ((x - ty).norm_squared() + (y - tx).norm_squared())
            + self.gamma * (x - y).norm_squared()
            + self.delta * ((x - tx).norm_squared() + (y - ty).norm_squared())
    }
}

/// A single-valued self-mapping of the feasible set.
pub trait HybridMap: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    fn apply_unchecked(&self, x: &Vector) -> Vector;

    /// Coefficients for which the mapping is known to be symmetric generalized hybrid.
    fn params(&self) -> Option<HybridParams> {
        None
    }
}

/// `T x = (I + U)⁻¹ x` with `U = diag(u)`, `u ≥ 0`.
///
/// `Fix(T) = {x : xᵢ = 0 whenever uᵢ > 0}`. Each coordinate is scaled by
/// `1 / (1 + uᵢ) ≤ 1`, so `T` is nonexpansive.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalResolventMap {
    u_diag: Vector,
}

impl DiagonalResolventMap {
    pub fn new(u_diag: Vector) -> Result<Self> {
        if u_diag.is_empty() {
            return Err(Error::InvalidArgument("map needs dimension >= 1".into()));
        }
        if u_diag.iter().any(|u| !(*u >= 0.0) || !u.is_finite()) {
            return Err(Error::InvalidArgument(
                "U diagonal must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { u_diag })
    }

    pub fn u_diag(&self) -> &Vector {
        &self.u_diag
    }

    /// Indices with `uᵢ > 0`.
    pub fn active_indices(&self) -> Vec<usize> {
        self.u_diag
            .iter()
            .enumerate()
            .filter_map(|(i, u)| (*u > 0.0).then_some(i))
            .collect()
    }
}

impl HybridMap for DiagonalResolventMap {
    fn dim(&self) -> usize {
        self.u_diag.len()
    }

    fn apply_unchecked(&self, x: &Vector) -> Vector {
        x.zip_map(&self.u_diag, |xi, ui| xi / (1.0 + ui))
    }

    fn params(&self) -> Option<HybridParams> {
        Some(HybridParams::NONEXPANSIVE)
    }
}

/// `T x = c · x`. Identity for `c = 1`; not hybrid for `|c| > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingMap {
    pub dim: usize,
    pub factor: f64,
}

impl ScalingMap {
    pub fn identity(dim: usize) -> Self {
        Self { dim, factor: 1.0 }
    }
}

impl HybridMap for ScalingMap {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_unchecked(&self, x: &Vector) -> Vector {
        x * self.factor
    }

    fn params(&self) -> Option<HybridParams> {
        (self.factor.abs() <= 1.0).then_some(HybridParams::NONEXPANSIVE)
    }
}

pub fn apply_map(map: &dyn HybridMap, x: &Vector) -> Result<Vector> {
    check_dim(map.dim(), x.len())?;
    Ok(map.apply_unchecked(x))
}

/// `‖x - T x‖`.
pub fn fixed_point_residual(map: &dyn HybridMap, x: &Vector) -> Result<f64> {
    Ok((x - apply_map(map, x)?).norm())
}

/// Result of [`certify_hybrid`].
#[derive(Debug, Clone, Serialize)]
pub struct CertReport {
    pub params: HybridParams,
    /// Whether the coefficients satisfy `α + 2β + γ ≥ 0`, `α + β > 0`, `δ ≥ 0`.
    pub admissible: bool,
    pub n_pairs: usize,
    pub max_lhs: f64,
    pub passed: bool,
    /// Pair attaining `max_lhs` when the check fails.
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
}

/// Certification threshold on the largest sampled left-hand side.
pub const CERT_TOL: f64 = 1e-10;

/// Samples `n_pairs` pairs in `set` and evaluates the defining inequality.
/// Passes iff the largest left-hand side is at most [`CERT_TOL`].
pub fn certify_hybrid(
    map: &dyn HybridMap,
    params: HybridParams,
    set: &dyn FeasibleSet,
    n_pairs: usize,
    seed: u64,
) -> Result<CertReport> {
    if n_pairs == 0 {
        return Err(Error::InvalidArgument("n_pairs must be >= 1".into()));
    }
    check_dim(set.dim(), map.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_lhs = f64::NEG_INFINITY;
    let mut arg = None;
    for _ in 0..n_pairs {
        let x = set.sample(&mut rng);
        let y = set.sample(&mut rng);
        let tx = map.apply_unchecked(&x);
        let ty = map.apply_unchecked(&y);
        let lhs = params.lhs(&x, &y, &tx, &ty);
        if lhs > max_lhs || arg.is_none() {
            max_lhs = lhs;
            arg = Some((x, y));
        }
    }
    let passed = max_lhs <= CERT_TOL;
    Ok(CertReport {
        params,
        admissible: params.is_admissible(),
        n_pairs,
        max_lhs,
        passed,
        witness: if passed {
            None
        } else {
            arg.map(|(x, y)| (x.iter().copied().collect(), y.iter().copied().collect()))
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::BoxSet;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    #[test]
    fn diagonal_resolvent_examples() {
        let t = DiagonalResolventMap::new(v(&[1.0, 0.0])).unwrap();
        assert_eq!(apply_map(&t, &v(&[2.0, 3.0])).unwrap(), v(&[1.0, 3.0]));
        assert_eq!(apply_map(&t, &v(&[0.0, 3.0])).unwrap(), v(&[0.0, 3.0]));
        let id = DiagonalResolventMap::new(v(&[0.0, 0.0, 0.0])).unwrap();
        assert_eq!(
            apply_map(&id, &v(&[1.0, -2.0, 5.0])).unwrap(),
            v(&[1.0, -2.0, 5.0])
        );
        assert_eq!(t.active_indices(), vec![0]);
        assert!(apply_map(&t, &v(&[1.0])).is_err());
        assert!(DiagonalResolventMap::new(v(&[-1.0])).is_err());
    }

    #[test]
    fn residuals() {
        let t = DiagonalResolventMap::new(v(&[1.0])).unwrap();
        assert_eq!(fixed_point_residual(&t, &v(&[2.0])).unwrap(), 1.0);
        assert_eq!(fixed_point_residual(&t, &v(&[0.0])).unwrap(), 0.0);
    }

    #[test]
    fn admissibility() {
        assert!(HybridParams::NONEXPANSIVE.is_admissible());
        assert!(HybridParams::NONSPREADING.is_admissible());
        assert!(HybridParams::HYBRID.is_admissible());
        assert!(!HybridParams::new(1.0, -1.0, 0.0, 0.0).is_admissible());
    }

    #[test]
    fn certify_examples() {
        let c = BoxSet::cube(3, -10.0, 10.0).unwrap();
        let id = ScalingMap::identity(3);
        let rep = certify_hybrid(&id, HybridParams::NONEXPANSIVE, &c, 500, 1).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.max_lhs, 0.0);

        let t = DiagonalResolventMap::new(v(&[0.5, 0.0, 3.0])).unwrap();
        assert!(
            certify_hybrid(&t, HybridParams::NONEXPANSIVE, &c, 500, 2)
                .unwrap()
                .passed
        );

        let double = ScalingMap {
            dim: 3,
            factor: 2.0,
        };
        let rep = certify_hybrid(&double, HybridParams::NONEXPANSIVE, &c, 50, 3).unwrap();
        assert!(!rep.passed);
        let (x, y) = rep.witness.unwrap();
        let d = (v(&x) - v(&y)).norm_squared();
        assert!((rep.max_lhs - 3.0 * d).abs() <= 1e-9 * d);
    }

    #[test]
    fn diagonal_resolvent_is_quasi_nonexpansive() {
        let c = BoxSet::cube(4, -10.0, 10.0).unwrap();
        let t = DiagonalResolventMap::new(v(&[2.0, 0.0, 0.1, 0.0])).unwrap();
        let p = v(&[0.0, 4.0, 0.0, -7.0]);
        assert_eq!(fixed_point_residual(&t, &p).unwrap(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let x = c.sample(&mut rng);
            assert!((t.apply_unchecked(&x) - &p).norm() <= (&x - &p).norm());
        }
    }
}
