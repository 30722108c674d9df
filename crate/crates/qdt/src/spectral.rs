//! Dense real symmetric matrices and their spectral decomposition.
//!
//! Everything downstream (density operators, likelihood-ratio projectors,
//! error rates) reduces to three primitives: a full eigendecomposition,
//! the projector onto the strictly positive eigenspace, and Tr(A B).
//! Matrices here are tiny (signal count times interpretation count, ten or
//! so), so the solver is a cyclic Jacobi iteration chosen for robustness
//! rather than speed.

use crate::error::{Error, Result};

/// Absolute tolerance for accepting an input matrix as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Off-diagonal Frobenius norm (relative to the input scale) at which the
/// Jacobi iteration is considered converged.
const JACOBI_TOL: f64 = 1e-12;

/// Hard cap on Jacobi sweeps; convergence is quadratic and reached in well
/// under twenty sweeps for the dimensions this crate handles.
const MAX_SWEEPS: usize = 100;

/// Dense real symmetric matrix, row-major storage.
///
/// Construction enforces symmetry within [`SYMMETRY_TOL`] and then stores
/// the exactly symmetrized average, so downstream code may assume
/// `get(i, j) == get(j, i)` bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds a matrix from row-major entries, checking shape and symmetry.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: dim * dim,
            });
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("entries", format!("non-finite entry {bad}")));
        }
        let mut m = SymMatrix { dim, data };
        for i in 0..dim {
            for j in (i + 1)..dim {
                let a = m.data[i * dim + j];
                let b = m.data[j * dim + i];
                let delta = (a - b).abs();
                if delta > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric { i, j, delta });
                }
                let avg = 0.5 * (a + b);
                m.data[i * dim + j] = avg;
                m.data[j * dim + i] = avg;
            }
        }
        Ok(m)
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: r.len(),
                    right: dim,
                });
            }
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, v) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = *v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub(crate) fn set_symmetric(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    /// Returns the entries as nested rows (for serialization and display).
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Computes `self - tau * other`; both operands must share a dimension.
    pub fn sub_scaled(&self, other: &SymMatrix, tau: f64) -> Result<SymMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - tau * b)
            .collect();
        Ok(SymMatrix {
            dim: self.dim,
            data,
        })
    }

    /// Computes x' A x.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: self.dim,
            });
        }
        let mut acc = 0.0;
        for i in 0..self.dim {
            let mut row = 0.0;
            for j in 0..self.dim {
                row += self.get(i, j) * x[j];
            }
            acc += x[i] * row;
        }
        Ok(acc)
    }

    /// Plain matrix product, returned row-major (the product of two symmetric
    /// matrices is not symmetric in general).
    pub fn multiply(&self, other: &SymMatrix) -> Result<Vec<f64>> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }
}

/// Eigenvalues (descending) with matching orthonormal eigenvectors.
///
/// `vector(j)` is the eigenvector for `values()[j]`; vectors are stored as
/// columns of an orthogonal matrix accumulated during the Jacobi sweeps.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    dim: usize,
    values: Vec<f64>,
    // Row-major dim x dim; column j holds eigenvector j.
    vectors: Vec<f64>,
}

impl EigenPairs {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.vectors[i * self.dim + j])
            .collect()
    }

    /// Reconstructs sum_j lambda_j v_j v_j'.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.dim;
        let mut m = SymMatrix::zeros(n);
        for j in 0..n {
            let lam = self.values[j];
            for r in 0..n {
                let vr = self.vectors[r * n + j];
                for c in r..n {
                    let add = lam * vr * self.vectors[c * n + j];
                    let cur = m.get(r, c);
                    m.set_symmetric(r, c, cur + add);
                }
            }
        }
        m
    }
}

/// Orthogonal projector, stored with its rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    mat: SymMatrix,
    rank: usize,
}

impl Projector {
    pub fn zero(dim: usize) -> Self {
        Projector {
            mat: SymMatrix::zeros(dim),
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projector {
            mat: SymMatrix::identity(dim),
            rank: dim,
        }
    }

    /// Builds sum_k v_k v_k' from rows that must be orthonormal within 1e-10.
    pub fn from_orthonormal(vectors: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::invalid(
                "vectors",
                "need the ambient dimension; use Projector::zero",
            ));
        };
        let dim = first.len();
        for (a, va) in vectors.iter().enumerate() {
            if va.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: va.len(),
                    right: dim,
                });
            }
            for (b, vb) in vectors.iter().enumerate() {
                let dot: f64 = va.iter().zip(vb).map(|(x, y)| x * y).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                if (dot - want).abs() > 1e-10 {
                    return Err(Error::invalid(
                        "vectors",
                        format!("rows {a},{b} not orthonormal: dot = {dot}"),
                    ));
                }
            }
        }
        let mut mat = SymMatrix::zeros(dim);
        for v in vectors {
            for r in 0..dim {
                for c in r..dim {
                    let cur = mat.get(r, c);
                    mat.set_symmetric(r, c, cur + v[r] * v[c]);
                }
            }
        }
        Ok(Projector {
            mat,
            rank: vectors.len(),
        })
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.mat
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// x' P x, the acceptance probability of this measurement on state x.
    pub fn expectation(&self, x: &[f64]) -> Result<f64> {
        self.mat.quadratic_form(x)
    }
}

fn off_diagonal_norm(a: &SymMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = a.get(i, j);
            acc += 2.0 * v * v;
        }
    }
    acc.sqrt()
}

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Pairs are returned sorted by eigenvalue, descending. Fails with
/// [`Error::NoConvergence`] if the off-diagonal norm has not dropped below
/// the tolerance after the sweep cap, which for well-formed inputs of the
/// sizes used here does not happen.
pub fn spectral_decompose(m: &SymMatrix) -> Result<EigenPairs> {
    jacobi(m, MAX_SWEEPS)
}

pub(crate) fn jacobi(m: &SymMatrix, max_sweeps: usize) -> Result<EigenPairs> {
    let n = m.dim();
    let scale = m.max_abs().max(1.0);
    let tol = JACOBI_TOL * scale;

    let mut a = m.clone();
    // v starts as the identity and accumulates the rotations; column j of v
    // ends up as eigenvector j.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > tol {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_diagonal_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= tol * 1e-3 {
                    continue;
                }
                // Standard stable rotation: theta parametrizes the angle,
                // t = tan, c = cos, s = sin, tau = s / (1 + c).
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                let app = a.get(p, p);
                let aqq = a.get(q, q);
                a.set_symmetric(p, p, app - t * apq);
                a.set_symmetric(q, q, aqq + t * apq);
                a.set_symmetric(p, q, 0.0);
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set_symmetric(i, p, aip - s * (aiq + tau * aip));
                    a.set_symmetric(i, q, aiq + s * (aip - tau * aiq));
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip - s * (viq + tau * vip);
                    v[i * n + q] = viq + s * (vip - tau * viq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Descending by eigenvalue; stable so equal values keep sweep order.
    order.sort_by(|&i, &j| {
        a.get(j, j)
            .partial_cmp(&a.get(i, i))
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&j| a.get(j, j)).collect();
    let mut vectors = vec![0.0; n * n];
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + dst] = v[i * n + src];
        }
    }
    Ok(EigenPairs {
        dim: n,
        values,
        vectors,
    })
}

/// Projector onto the span of eigenvectors with eigenvalue strictly above
/// `zero_tol`.
///
/// Eigenvalues in `[-zero_tol, zero_tol]` are treated as zero and excluded,
/// so a negative-semidefinite input yields the zero projector.
pub fn positive_projector(m: &SymMatrix, zero_tol: f64) -> Result<Projector> {
    if !(zero_tol >= 0.0) {
        return Err(Error::invalid("zero_tol", "must be non-negative"));
    }
    let eig = spectral_decompose(m)?;
    let n = m.dim();
    let mut mat = SymMatrix::zeros(n);
    let mut rank = 0;
    for (j, &lam) in eig.values().iter().enumerate() {
        if lam <= zero_tol {
            // Values are sorted descending; nothing further qualifies.
            break;
        }
        rank += 1;
        let vj = eig.vector(j);
        for r in 0..n {
            for c in r..n {
                let cur = mat.get(r, c);
                mat.set_symmetric(r, c, cur + vj[r] * vj[c]);
            }
        }
    }
    Ok(Projector { mat, rank })
}

/// Tr(A B) = sum_ij a[i][j] b[j][i].
pub fn trace_product(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += a.get(i, j) * b.get(j, i);
        }
    }
    Ok(acc)
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::Projector;
    use rand::Rng;
    use rand_distr::StandardNormal;

    /// Random projector of uniform random rank, built by Gram-Schmidt on
    /// standard-normal vectors. Shared by optimality tests across modules.
    pub(crate) fn random_projector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Projector {
        let rank = rng.random_range(0..=dim);
        if rank == 0 {
            return Projector::zero(dim);
        }
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(rank);
        while basis.len() < rank {
            let mut v: Vec<f64> = (0..dim)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= dot * y;
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for x in v.iter_mut() {
                    *x /= norm;
                }
                basis.push(v);
            }
        }
        Projector::from_orthonormal(&basis).expect("Gram-Schmidt output is orthonormal")
    }
}
