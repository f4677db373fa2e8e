//! Finite-dimensional function subspaces with evaluable bases.
//!
//! A [`Subspace`] is an `N`-dimensional space of functions on the domain of a
//! [`ReferenceMeasure`], represented by a basis that can be evaluated at any
//! point of the domain plus a cached matrix of basis values on the quadrature
//! grid. Norms are grid norms; the `orthonormal` flag certifies that the Gram
//! matrix on the grid is the identity.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::measure::{Domain, MeasureDescriptor, ReferenceMeasure};
use crate::rng::{rng_from, split_seed, standard_normal_vector, Rng};
use crate::{Error, Result};

/// Condition-number ceiling beyond which a Gram matrix counts as rank deficient.
const GRAM_CONDITION_LIMIT: f64 = 1e12;

/// Coefficients `c` of `f = sum_i c_i u_i` in a subspace basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionCoeffs(pub Vec<f64>);

impl FunctionCoeffs {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }

    pub fn from_dvector(v: &DVector<f64>) -> Self {
        FunctionCoeffs(v.as_slice().to_vec())
    }
}

impl From<Vec<f64>> for FunctionCoeffs {
    fn from(v: Vec<f64>) -> Self {
        FunctionCoeffs(v)
    }
}

/// The underlying (un-mapped) basis.
#[derive(Clone)]
enum RawBasis {
    /// `1, sqrt(2) cos(kx), sqrt(2) sin(kx)` for `k = 1..=degree` on the torus.
    Trig { degree: usize },
    /// Values on the atoms of a finite measure; row `g` is the basis at atom `g`.
    Grid { values: DMatrix<f64> },
    /// Arbitrary evaluable functions, `eval(i, x)`.
    Functions {
        n: usize,
        eval: Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>,
    },
}

impl RawBasis {
    fn dim(&self) -> usize {
        match self {
            RawBasis::Trig { degree } => 2 * degree + 1,
            RawBasis::Grid { values } => values.ncols(),
            RawBasis::Functions { n, .. } => *n,
        }
    }

    fn eval_all(&self, measure: &ReferenceMeasure, x: f64) -> DVector<f64> {
        match self {
            RawBasis::Trig { degree } => trig_row(*degree, x),
            RawBasis::Grid { values } => values.row(measure.atom_index(x)).transpose(),
            RawBasis::Functions { n, eval } => {
                DVector::from_iterator(*n, (0..*n).map(|i| eval(i, x)))
            }
        }
    }
}

/// `(1, sqrt2 cos x, sqrt2 sin x, sqrt2 cos 2x, ...)` via the angle-addition recurrence.
fn trig_row(degree: usize, x: f64) -> DVector<f64> {
    let n = 2 * degree + 1;
    let mut row = DVector::zeros(n);
    row[0] = 1.0;
    if degree == 0 {
        return row;
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let (c1, s1) = (x.cos(), x.sin());
    let (mut ck, mut sk) = (c1, s1);
    for k in 1..=degree {
        row[2 * k - 1] = sqrt2 * ck;
        row[2 * k] = sqrt2 * sk;
        let c_next = ck * c1 - sk * s1;
        let s_next = sk * c1 + ck * s1;
        ck = c_next;
        sk = s_next;
    }
    row
}

/// An `N`-dimensional subspace with an evaluable basis over a reference measure.
#[derive(Clone)]
pub struct Subspace {
    dim: usize,
    measure: ReferenceMeasure,
    raw: RawBasis,
    /// Optional change of basis: `u_j = sum_i map[(i, j)] raw_i`.
    map: Option<DMatrix<f64>>,
    /// Basis values on the quadrature grid, row per grid point.
    grid_values: DMatrix<f64>,
    orthonormal: bool,
    descriptor: SubspaceDescriptor,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubspaceDescriptor {
    Trig {
        degree: usize,
        grid_size: usize,
    },
    Discrete {
        dim: usize,
        atoms: usize,
        seed: u64,
    },
    Custom {
        dim: usize,
        grid_size: usize,
        measure: MeasureDescriptor,
    },
}

/// Default grid resolution: enough for exact trig quadrature at desk scale and
/// sub-1e-8 norm error for smooth bases.
pub fn default_grid_size(dim: usize) -> usize {
    8 * dim.max(64)
}

impl Subspace {
    fn new(
        measure: ReferenceMeasure,
        raw: RawBasis,
        map: Option<DMatrix<f64>>,
        orthonormal: bool,
        descriptor: SubspaceDescriptor,
    ) -> Self {
        let dim = map.as_ref().map_or(raw.dim(), |m| m.ncols());
        let grid_values = {
            let g = measure.grid_size();
            let mut values = DMatrix::zeros(g, raw.dim());
            for (gi, &x) in measure.grid().iter().enumerate() {
                values
                    .row_mut(gi)
                    .copy_from(&raw.eval_all(&measure, x).transpose());
            }
            match &map {
                Some(t) => &values * t,
                None => values,
            }
        };
        Subspace {
            dim,
            measure,
            raw,
            map,
            grid_values,
            orthonormal,
            descriptor,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn measure(&self) -> &ReferenceMeasure {
        &self.measure
    }

    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    pub fn descriptor(&self) -> &SubspaceDescriptor {
        &self.descriptor
    }

    /// Basis values on the quadrature grid (grid point per row, basis per column).
    pub fn grid_values(&self) -> &DMatrix<f64> {
        &self.grid_values
    }

    /// Evaluate basis function `i` at `x`.
    pub fn eval_basis(&self, i: usize, x: f64) -> f64 {
        assert!(i < self.dim, "basis index out of range");
        self.eval_all(x)[i]
    }

    /// Evaluate all basis functions at `x`.
    pub fn eval_all(&self, x: f64) -> DVector<f64> {
        let raw = self.raw.eval_all(&self.measure, x);
        match &self.map {
            Some(t) => t.transpose() * raw,
            None => raw,
        }
    }

    /// Evaluate `f = sum_i c_i u_i` at `x`.
    pub fn eval_fn(&self, coeffs: &FunctionCoeffs, x: f64) -> f64 {
        assert_eq!(
            coeffs.len(),
            self.dim,
            "coefficient length must equal dimension"
        );
        self.eval_all(x).dot(&coeffs.as_dvector())
    }

    /// Gram matrix of the basis in `L^2(mu)` on the quadrature grid.
    pub fn gram(&self) -> DMatrix<f64> {
        let g = self.measure.grid_size();
        let mut weighted = self.grid_values.clone();
        for (gi, &w) in self.measure.grid_weights().iter().enumerate().take(g) {
            weighted.row_mut(gi).scale_mut(w);
        }
        self.grid_values.transpose() * weighted
    }

    /// Values of `f` on the quadrature grid.
    pub fn grid_function_values(&self, coeffs: &FunctionCoeffs) -> DVector<f64> {
        assert_eq!(
            coeffs.len(),
            self.dim,
            "coefficient length must equal dimension"
        );
        &self.grid_values * coeffs.as_dvector()
    }

    /// Grid `L^p(mu)` norm of `f`, `( sum_g w_g |f(x_g)|^p )^{1/p}` for `p >= 1`.
    pub fn lp_norm(&self, coeffs: &FunctionCoeffs, p: f64) -> f64 {
        assert!(p >= 1.0, "lp_norm requires p >= 1");
        let values = self.grid_function_values(coeffs);
        lp_norm_of_values(values.as_slice(), self.measure.grid_weights(), p)
    }

    /// Grid sup norm `max_g |f(x_g)|`.
    pub fn sup_norm_grid(&self, coeffs: &FunctionCoeffs) -> f64 {
        self.grid_function_values(coeffs).amax()
    }
}

pub(crate) fn lp_norm_of_values(values: &[f64], weights: &[f64], p: f64) -> f64 {
    debug_assert_eq!(values.len(), weights.len());
    if p == 2.0 {
        let s: f64 = values.iter().zip(weights).map(|(&v, &w)| w * v * v).sum();
        return s.sqrt();
    }
    let s: f64 = values
        .iter()
        .zip(weights)
        .map(|(&v, &w)| w * v.abs().powf(p))
        .sum();
    s.powf(1.0 / p)
}

/// Trigonometric subspace `span{1, sqrt2 cos kx, sqrt2 sin kx : k <= n}` on the
/// torus with uniform measure; `N = 2n + 1`, orthonormal by construction.
pub fn build_trig_subspace(degree: usize) -> Subspace {
    trig_subspace_with_grid(degree, default_grid_size(2 * degree + 1))
}

/// Trig subspace with an explicit equispaced grid (at least `8 (2n+1)` points).
pub fn trig_subspace_with_grid(degree: usize, grid_size: usize) -> Subspace {
    let n = 2 * degree + 1;
    assert!(
        grid_size >= 8 * n,
        "grid must have at least 8 (2n+1) points"
    );
    let measure = ReferenceMeasure::torus_uniform(grid_size);
    Subspace::new(
        measure,
        RawBasis::Trig { degree },
        None,
        true,
        SubspaceDescriptor::Trig { degree, grid_size },
    )
}

/// Random discrete subspace: uniform measure on `atom_count` atoms, a standard
/// normal `K x N` matrix of raw values, orthonormalized in `L^2(mu)`.
///
/// Rank-deficient draws are retried with a fresh derived seed up to 8 times.
pub fn build_discrete_subspace(dim: usize, atom_count: usize, seed: u64) -> Result<Subspace> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if atom_count < dim {
        return Err(Error::InvalidArgument(format!(
            "atom count {atom_count} must be at least the dimension {dim}"
        )));
    }
    let measure = ReferenceMeasure::atoms_uniform(atom_count);
    let max_attempts = 8;
    for attempt in 0..max_attempts {
        let mut rng: Rng = rng_from(split_seed(seed, attempt as u64));
        let raw = DMatrix::from_columns(
            &(0..dim)
                .map(|_| standard_normal_vector(atom_count, &mut rng))
                .collect::<Vec<_>>(),
        );
        let candidate = Subspace::new(
            measure.clone(),
            RawBasis::Grid { values: raw },
            None,
            false,
            SubspaceDescriptor::Discrete {
                dim,
                atoms: atom_count,
                seed,
            },
        );
        match orthonormalize(&candidate) {
            Ok(on) => {
                let mut sub = on.subspace;
                sub.descriptor = SubspaceDescriptor::Discrete {
                    dim,
                    atoms: atom_count,
                    seed,
                };
                return Ok(sub);
            }
            Err(Error::IllConditionedBasis { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateRandomSubspace {
        attempts: max_attempts,
    })
}

/// Subspace spanned by explicit values on the atoms of a finite measure
/// (`values` has one row per atom). Not orthonormalized.
pub fn subspace_from_atom_values(
    measure: ReferenceMeasure,
    values: DMatrix<f64>,
) -> Result<Subspace> {
    if values.nrows() != measure.grid_size() {
        return Err(Error::InvalidArgument(
            "value matrix must have one row per atom of the measure".into(),
        ));
    }
    if !matches!(measure.domain(), Domain::FiniteAtoms { .. }) {
        return Err(Error::InvalidArgument(
            "atom-value subspaces require a finite-atom measure".into(),
        ));
    }
    let dim = values.ncols();
    let grid_size = measure.grid_size();
    Ok(Subspace::new(
        measure.clone(),
        RawBasis::Grid { values },
        None,
        false,
        SubspaceDescriptor::Custom {
            dim,
            grid_size,
            measure: measure.descriptor(),
        },
    ))
}

/// Subspace spanned by arbitrary evaluable functions over a measure.
pub fn subspace_from_functions(
    measure: ReferenceMeasure,
    n: usize,
    eval: impl Fn(usize, f64) -> f64 + Send + Sync + 'static,
) -> Subspace {
    let grid_size = measure.grid_size();
    let descriptor = SubspaceDescriptor::Custom {
        dim: n,
        grid_size,
        measure: measure.descriptor(),
    };
    Subspace::new(
        measure,
        RawBasis::Functions {
            n,
            eval: Arc::new(eval),
        },
        None,
        false,
        descriptor,
    )
}

/// Result of [`orthonormalize`]: the new subspace plus both coefficient maps.
pub struct Orthonormalized {
    pub subspace: Subspace,
    /// `G^{1/2}`: coefficients in the old basis -> coefficients in the new basis.
    forward: DMatrix<f64>,
    /// `G^{-1/2}`: coefficients in the new basis -> coefficients in the old basis.
    backward: DMatrix<f64>,
}

impl Orthonormalized {
    /// Map old-basis coefficients of a function to its new-basis coefficients.
    pub fn coeffs_to_new(&self, c: &FunctionCoeffs) -> FunctionCoeffs {
        FunctionCoeffs::from_dvector(&(&self.forward * c.as_dvector()))
    }

    pub fn coeffs_to_old(&self, c: &FunctionCoeffs) -> FunctionCoeffs {
        FunctionCoeffs::from_dvector(&(&self.backward * c.as_dvector()))
    }
}

/// Orthonormalize a basis in `L^2(mu)` by the symmetric inverse square root of
/// its Gram matrix. Preserves the span; the output Gram is the identity.
///
/// Fails with [`Error::IllConditionedBasis`] when the Gram condition number
/// exceeds `1e12`.
pub fn orthonormalize(subspace: &Subspace) -> Result<Orthonormalized> {
    let gram = subspace.gram();
    let eig = gram.clone().symmetric_eigen();
    let max_eig = eig.eigenvalues.max();
    let min_eig = eig.eigenvalues.min();
    if min_eig.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        || max_eig / min_eig > GRAM_CONDITION_LIMIT
    {
        let cond = if min_eig > 0.0 {
            max_eig / min_eig
        } else {
            f64::INFINITY
        };
        return Err(Error::IllConditionedBasis { cond });
    }
    let q = &eig.eigenvectors;
    let inv_sqrt =
        q * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.powf(-0.5))) * q.transpose();
    let sqrt = q * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.sqrt())) * q.transpose();

    let map = match &subspace.map {
        Some(t) => t * &inv_sqrt,
        None => inv_sqrt.clone(),
    };
    let new = Subspace::new(
        subspace.measure.clone(),
        subspace.raw.clone(),
        Some(map),
        true,
        subspace.descriptor.clone(),
    );
    Ok(Orthonormalized {
        subspace: new,
        forward: sqrt,
        backward: inv_sqrt,
    })
}
