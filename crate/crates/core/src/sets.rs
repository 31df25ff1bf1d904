//! Closed convex feasible sets with exact Euclidean projections.

use rand::Rng;

use crate::error::{check_dim, Error, Result};
use crate::Vector;

/// A closed convex subset of ℝⁿ with a closed-form projection.
pub trait FeasibleSet: Send + Sync + std::fmt::Debug {
    fn dim(&self) -> usize;

    /// Euclidean projection. Callers must pass vectors of length [`Self::dim`];
    /// use [`project`] for a checked call.
    fn project_unchecked(&self, x: &Vector) -> Vector;

    /// Smallest axis-aligned box containing the set, as `(lo, hi)`.
    fn bounding_box(&self) -> (Vector, Vector);

    /// Draws a point uniformly from the bounding box and projects it onto the set.
    fn sample(&self, rng: &mut dyn rand::RngCore) -> Vector {
        let (lo, hi) = self.bounding_box();
        let raw = Vector::from_fn(self.dim(), |i, _| {
            if lo[i] == hi[i] {
                lo[i]
            } else {
                rng.random_range(lo[i]..=hi[i])
            }
        });
        self.project_unchecked(&raw)
    }
}

/// Checked projection onto `set`.
pub fn project(set: &dyn FeasibleSet, x: &Vector) -> Result<Vector> {
    check_dim(set.dim(), x.len())?;
    Ok(set.project_unchecked(x))
}

/// `true` iff the distance from `x` to `set` is at most `tol`.
pub fn contains(set: &dyn FeasibleSet, x: &Vector, tol: f64) -> Result<bool> {
    check_dim(set.dim(), x.len())?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be >= 0, got {tol}"
        )));
    }
    Ok(distance(set, x) <= tol)
}

pub(crate) fn distance(set: &dyn FeasibleSet, x: &Vector) -> f64 {
    (x - set.project_unchecked(x)).norm()
}

/// Componentwise box `lo ≤ x ≤ hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSet {
    lo: Vector,
    hi: Vector,
}

impl BoxSet {
    pub fn new(lo: Vector, hi: Vector) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        if lo.is_empty() {
            return Err(Error::InvalidArgument(
                "box must have dimension >= 1".into(),
            ));
        }
        if lo
            .iter()
            .zip(hi.iter())
            .any(|(l, h)| !(l <= h) || !l.is_finite() || !h.is_finite())
        {
            return Err(Error::InvalidArgument(
                "box bounds must be finite with lo <= hi".into(),
            ));
        }
        Ok(Self { lo, hi })
    }

    /// The cube `[lo, hi]ⁿ`.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(Vector::from_element(n, lo), Vector::from_element(n, hi))
    }

    pub fn lo(&self) -> &Vector {
        &self.lo
    }

    pub fn hi(&self) -> &Vector {
        &self.hi
    }
}

impl FeasibleSet for BoxSet {
    fn dim(&self) -> usize {
        self.lo.len()
    }

    fn project_unchecked(&self, x: &Vector) -> Vector {
        Vector::from_fn(x.len(), |i, _| x[i].clamp(self.lo[i], self.hi[i]))
    }

    fn bounding_box(&self) -> (Vector, Vector) {
        (self.lo.clone(), self.hi.clone())
    }
}

/// Closed Euclidean ball.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSet {
    center: Vector,
    radius: f64,
}

impl BallSet {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidArgument(
                "ball must have dimension >= 1".into(),
            ));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl FeasibleSet for BallSet {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn project_unchecked(&self, x: &Vector) -> Vector {
        let d = x - &self.center;
        let norm = d.norm();
        if norm <= self.radius {
            x.clone()
        } else {
            &self.center + d * (self.radius / norm)
        }
    }

    fn bounding_box(&self) -> (Vector, Vector) {
        (
            self.center.add_scalar(-self.radius),
            self.center.add_scalar(self.radius),
        )
    }

    // Uniform in the bounding cube then projected puts too much mass on the
    // sphere in high dimension; sample a radial direction and a radius instead.
    fn sample(&self, rng: &mut dyn rand::RngCore) -> Vector {
        let n = self.dim();
        loop {
            let d = Vector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0));
            let norm = d.norm();
            if norm > 1e-12 {
                let r = self.radius * rng.random_range(0.0..=1.0_f64).powf(1.0 / n as f64);
                return &self.center + d * (r / norm);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_row_slice(xs)
    }

    #[test]
    fn box_clamps() {
        let b = BoxSet::cube(2, -10.0, 10.0).unwrap();
        assert_eq!(project(&b, &v(&[12.0, -3.0])).unwrap(), v(&[10.0, -3.0]));
        assert_eq!(project(&b, &v(&[1.5, -9.0])).unwrap(), v(&[1.5, -9.0]));
    }

    #[test]
    fn ball_scales_radially() {
        let b = BallSet::new(Vector::zeros(2), 1.0).unwrap();
        let p = project(&b, &v(&[3.0, 4.0])).unwrap();
        assert_relative_eq!(p, v(&[0.6, 0.8]), epsilon = 1e-15);
    }

    #[test]
    fn contains_examples() {
        let b = BoxSet::cube(1, -10.0, 10.0).unwrap();
        assert!(contains(&b, &v(&[10.0]), 0.0).unwrap());
        assert!(!contains(&b, &v(&[10.5]), 0.1).unwrap());
        let ball = BallSet::new(Vector::zeros(2), 1.0).unwrap();
        assert!(contains(&ball, &v(&[1.0 + 1e-12, 0.0]), 1e-9).unwrap());
        assert!(contains(&b, &v(&[0.0]), -1.0).is_err());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let b = BoxSet::cube(2, -1.0, 1.0).unwrap();
        assert!(matches!(
            project(&b, &v(&[0.0])),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn invalid_constructors() {
        assert!(BoxSet::new(v(&[1.0]), v(&[0.0])).is_err());
        assert!(BallSet::new(v(&[0.0]), 0.0).is_err());
    }

    #[test]
    fn samples_lie_in_the_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ball = BallSet::new(v(&[1.0, -2.0, 0.5]), 2.0).unwrap();
        let bx = BoxSet::new(v(&[-1.0, 0.0, 2.0]), v(&[1.0, 0.0, 3.0])).unwrap();
        for _ in 0..200 {
            assert!(contains(&ball, &ball.sample(&mut rng), 1e-12).unwrap());
            assert!(contains(&bx, &bx.sample(&mut rng), 0.0).unwrap());
        }
    }
}
