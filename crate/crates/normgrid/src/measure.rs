//! Reference probability measures with quadrature grids.
//!
//! A [`ReferenceMeasure`] couples a domain (torus, interval, or a finite atom
//! set), a seedable sampler for i.i.d. draws, and a quadrature grid whose
//! strictly positive weights sum to one. All norms in this crate are grid norms
//! against these weights; the grid value is the ground truth for every module
//! contract.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::rng::Rng;
use crate::{Error, Result};

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Tolerance for "weights sum to one" at construction.
const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    /// The interval `[a, b]` with the uniform probability measure.
    Interval { a: f64, b: f64 },
    /// The torus `[0, 2*pi)` with the uniform probability measure.
    Torus,
    /// A finite set of atoms identified by their positions.
    FiniteAtoms { positions: Vec<f64> },
}

/// A probability measure with a quadrature grid.
#[derive(Clone, Debug)]
pub struct ReferenceMeasure {
    domain: Domain,
    grid: Vec<f64>,
    weights: Vec<f64>,
}

impl ReferenceMeasure {
    /// Uniform measure on the torus with an equispaced grid of `grid_size` points.
    pub fn torus_uniform(grid_size: usize) -> Self {
        assert!(grid_size > 0, "grid must be nonempty");
        let grid = (0..grid_size)
            .map(|g| TAU * g as f64 / grid_size as f64)
            .collect();
        let weights = vec![1.0 / grid_size as f64; grid_size];
        ReferenceMeasure {
            domain: Domain::Torus,
            grid,
            weights,
        }
    }

    /// Uniform measure on `[a, b]` with a Gauss-Legendre grid of `grid_size` nodes.
    pub fn interval_uniform(a: f64, b: f64, grid_size: usize) -> Self {
        assert!(b > a, "interval must be nondegenerate");
        assert!(grid_size > 0, "grid must be nonempty");
        let (nodes, gl_weights) = gauss_legendre(grid_size);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let grid: Vec<f64> = nodes.iter().map(|&t| mid + half * t).collect();
        // Legendre weights sum to 2; the uniform probability weights to 1.
        let weights: Vec<f64> = gl_weights.iter().map(|&w| 0.5 * w).collect();
        ReferenceMeasure {
            domain: Domain::Interval { a, b },
            grid,
            weights,
        }
    }

    /// Uniform measure on `count` atoms at positions `0, 1, ..., count-1`.
    pub fn atoms_uniform(count: usize) -> Self {
        assert!(count > 0, "atom set must be nonempty");
        let positions: Vec<f64> = (0..count).map(|g| g as f64).collect();
        let weights = vec![1.0 / count as f64; count];
        ReferenceMeasure {
            domain: Domain::FiniteAtoms {
                positions: positions.clone(),
            },
            grid: positions,
            weights,
        }
    }

    /// A finite-atom measure with explicit positions and masses.
    ///
    /// Positions must be strictly increasing; masses must be strictly positive
    /// and sum to one within `1e-12`.
    pub fn atoms(positions: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if positions.len() != weights.len() || positions.is_empty() {
            return Err(Error::InvalidArgument(
                "atom positions and weights must be nonempty and of equal length".into(),
            ));
        }
        if positions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "atom positions must be strictly increasing".into(),
            ));
        }
        let m = ReferenceMeasure {
            domain: Domain::FiniteAtoms {
                positions: positions.clone(),
            },
            grid: positions,
            weights,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|&w| !w.is_finite() || w <= 0.0) {
            return Err(Error::InvalidArgument(
                "quadrature weights must be strictly positive".into(),
            ));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidArgument(format!(
                "quadrature weights must sum to 1 (got {sum:.17})"
            )));
        }
        Ok(())
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn grid_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    /// One draw from the measure.
    pub fn sample(&self, rng: &mut Rng) -> f64 {
        match &self.domain {
            Domain::Torus => rng.gen::<f64>() * TAU,
            Domain::Interval { a, b } => a + rng.gen::<f64>() * (b - a),
            Domain::FiniteAtoms { positions } => positions[sample_index(&self.weights, rng)],
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match &self.domain {
            Domain::Torus => (0.0..TAU).contains(&x),
            Domain::Interval { a, b } => (*a..=*b).contains(&x),
            Domain::FiniteAtoms { positions } => positions.contains(&x),
        }
    }

    /// Index of the atom at position `x` for finite-atom measures.
    ///
    /// Positions are strictly increasing, and samplers return stored positions
    /// verbatim, so an exact binary search succeeds.
    pub(crate) fn atom_index(&self, x: f64) -> usize {
        debug_assert!(matches!(self.domain, Domain::FiniteAtoms { .. }));
        self.grid
            .binary_search_by(|g| g.partial_cmp(&x).expect("finite atom positions"))
            .unwrap_or_else(|_| panic!("point {x} is not an atom of the measure"))
    }

    pub fn descriptor(&self) -> MeasureDescriptor {
        match &self.domain {
            Domain::Torus => MeasureDescriptor::Torus {
                grid_size: self.grid.len(),
            },
            Domain::Interval { a, b } => MeasureDescriptor::Interval {
                a: *a,
                b: *b,
                grid_size: self.grid.len(),
            },
            Domain::FiniteAtoms { .. } => MeasureDescriptor::Atoms {
                atoms: self.grid.len(),
            },
        }
    }
}

/// Inverse-CDF draw of an index with the given probability weights.
pub fn sample_index(weights: &[f64], rng: &mut Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    // Guard against rounding at the top of the CDF: return the last positive atom.
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .expect("weights must not all vanish")
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "domain", rename_all = "snake_case")]
pub enum MeasureDescriptor {
    Torus { grid_size: usize },
    Interval { a: f64, b: f64, grid_size: usize },
    Atoms { atoms: usize },
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending nodes.
///
/// Newton iteration on the Legendre recurrence; exact for polynomials of
/// degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // cos ordering is descending; store ascending.
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_with_derivative(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;

    #[test]
    fn torus_grid_is_equispaced_and_normalized() {
        let m = ReferenceMeasure::torus_uniform(16);
        m.validate().unwrap();
        let step = m.grid()[1] - m.grid()[0];
        for w in m.grid().windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-14);
        }
        assert!((m.grid_weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_low_degree_polynomials() {
        let m = ReferenceMeasure::interval_uniform(-1.0, 1.0, 12);
        m.validate().unwrap();
        // E[x^2] = 1/3 and E[x^4] = 1/5 for the uniform measure on [-1, 1].
        let ex2: f64 = m
            .grid()
            .iter()
            .zip(m.grid_weights())
            .map(|(&x, &w)| w * x * x)
            .sum();
        let ex4: f64 = m
            .grid()
            .iter()
            .zip(m.grid_weights())
            .map(|(&x, &w)| w * x.powi(4))
            .sum();
        assert!((ex2 - 1.0 / 3.0).abs() < 1e-14);
        assert!((ex4 - 1.0 / 5.0).abs() < 1e-14);
    }

    #[test]
    fn samples_lie_in_domain() {
        let mut rng = rng_from(3);
        let torus = ReferenceMeasure::torus_uniform(8);
        let interval = ReferenceMeasure::interval_uniform(-2.0, 5.0, 8);
        let atoms = ReferenceMeasure::atoms_uniform(4);
        for _ in 0..200 {
            assert!(torus.contains(torus.sample(&mut rng)));
            assert!(interval.contains(interval.sample(&mut rng)));
            assert!(atoms.contains(atoms.sample(&mut rng)));
        }
    }

    #[test]
    fn atom_sampler_follows_weights() {
        let m = ReferenceMeasure::atoms(vec![0.0, 1.0], vec![0.9, 0.1]).unwrap();
        let mut rng = rng_from(11);
        let n = 20_000;
        let heavy = (0..n).filter(|_| m.sample(&mut rng) == 0.0).count();
        let rate = heavy as f64 / n as f64;
        assert!((rate - 0.9).abs() < 0.02, "rate {rate}");
    }

    #[test]
    fn invalid_atom_weights_are_rejected() {
        assert!(ReferenceMeasure::atoms(vec![0.0, 1.0], vec![0.5, 0.6]).is_err());
        assert!(ReferenceMeasure::atoms(vec![0.0, 1.0], vec![1.1, -0.1]).is_err());
    }
}
