use std::collections::HashSet;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{BooleanTable, MindegError, MAX_INTERP_N};

/// Labelled points of the cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportSet {
    n: usize,
    points: Vec<u32>,
    labels: Vec<f64>,
}

impl SupportSet {
    pub fn new(n: usize, points: Vec<u32>, labels: Vec<f64>) -> Result<Self, MindegError> {
        if n > MAX_INTERP_N {
            return Err(MindegError::TooLarge { n, max: MAX_INTERP_N });
        }
        if points.len() != labels.len() {
            return Err(MindegError::LabelCount { points: points.len(), labels: labels.len() });
        }
        if points.is_empty() {
            return Err(MindegError::EmptySupport);
        }
        let mut seen = HashSet::new();
        for &p in &points {
            if u64::from(p) >> n != 0 {
                return Err(MindegError::PointOutOfRange { point: p, n });
            }
            if !seen.insert(p) {
                return Err(MindegError::DuplicatePoint { point: p });
            }
        }
        Ok(Self { n, points, labels })
    }

    /// Support labelled by `f`.
    pub fn labelled_by(n: usize, points: Vec<u32>, f: impl Fn(u32) -> f64) -> Result<Self, MindegError> {
        let labels = points.iter().map(|&p| f(p)).collect();
        Self::new(n, points, labels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    /// Rows are points, columns are subsets: `chi_T(x)`.
    fn characters(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.points.len(), 1 << self.n, |s, t| {
            // (-1)^{|T| - |T & p|}
            let off = (t as u32 & !self.points[s]).count_ones();
            if off % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
    }
}

/// Eigenvalues of a Gram matrix below this fraction of the largest count as zero.
const RANK_EPS: f64 = 1e-12;
/// Largest interpolation residual a stage may leave.
const STAGE_TOL: f64 = 1e-9;

fn columns(a: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), cols.len(), |r, c| a[(r, cols[c])])
}

/// Eigenpairs of `m m^T` with nonzero eigenvalue. The support is small, so
/// working with the row Gram matrix keeps every decomposition `|S| x |S|`.
fn row_space(m: &DMatrix<f64>) -> Vec<(f64, DVector<f64>)> {
    if m.ncols() == 0 {
        return Vec::new();
    }
    let eig = SymmetricEigen::new(m * m.transpose());
    let top = eig.eigenvalues.iter().fold(1.0f64, |acc, &l| acc.max(l));
    eig.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > RANK_EPS * top)
        .map(|(k, &l)| (l, eig.eigenvectors.column(k).into_owned()))
        .collect()
}

/// Projector onto the orthogonal complement of the column space of `m`.
fn complement_projector(m: &DMatrix<f64>, rows: usize) -> DMatrix<f64> {
    let mut q = DMatrix::identity(rows, rows);
    for (_, u) in row_space(m) {
        q -= &u * u.transpose();
    }
    q
}

/// Minimum-norm least-squares solution of `b c = r`: `b^T (b b^T)^+ r`.
fn min_norm_solve(b: &DMatrix<f64>, r: &DVector<f64>) -> DVector<f64> {
    let mut y = DVector::zeros(b.nrows());
    for (l, u) in row_space(b) {
        y += &u * (u.dot(r) / l);
    }
    b.transpose() * y
}

/// The interpolant of `support` with the lexicographically smallest degree profile.
///
/// Levels are solved from degree `n` down. At each level the coefficients of
/// that degree take the minimum-norm values for which the remaining constraints
/// are still solvable by lower-degree coefficients; higher levels stay pinned
/// at their optimum. The optimal coefficient vector of a level is unique because
/// its squared norm is strictly convex over an affine set.
pub fn min_degree_interpolator(support: &SupportSet) -> Result<BooleanTable, MindegError> {
    let n = support.n;
    let a = support.characters();
    let rows = a.nrows();
    let mut rhs = DVector::from_column_slice(&support.labels);
    let mut coeffs = vec![0.0; 1 << n];
    for d in (0..=n).rev() {
        let level: Vec<usize> = (0..1usize << n).filter(|t| t.count_ones() as usize == d).collect();
        let lower: Vec<usize> = (0..1usize << n).filter(|t| (t.count_ones() as usize) < d).collect();
        let q = complement_projector(&columns(&a, &lower), rows);
        let qa = &q * columns(&a, &level);
        let qr = &q * &rhs;
        let c = min_norm_solve(&qa, &qr);
        let residual = (&qa * &c - &qr).amax();
        if !residual.is_finite() || residual > STAGE_TOL {
            return Err(MindegError::SingularStage { stage: d, residual });
        }
        rhs -= columns(&a, &level) * &c;
        for (k, &t) in level.iter().enumerate() {
            coeffs[t] = c[k];
        }
    }
    let residual = rhs.amax();
    if residual > STAGE_TOL {
        return Err(MindegError::SingularStage { stage: 0, residual });
    }
    BooleanTable::from_fourier(coeffs)
}
