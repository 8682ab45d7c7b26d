//! Orthonormal bases of subspaces of `C^N`, with matrices handled through
//! their column-major vectorisation (so the inner product is the trace
//! inner product `tr(a* b)`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Absolute residual tolerance for membership tests.
pub const TOLERANCE: f64 = 1e-10;

/// Relative size below which a Gram-Schmidt remainder counts as dependent.
const DEPENDENCE: f64 = 1e-9;

pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_column_slice(rows, cols, v.as_slice())
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues().min()
}

#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<CVector>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    /// Span of `vectors`, orthonormalised with two Gram-Schmidt passes.
    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = CVector>) -> Self {
        let mut s = Subspace::zero(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn span_matrices<'a>(rows: usize, cols: usize, mats: impl IntoIterator<Item = &'a CMatrix>) -> Self {
        Self::span(rows * cols, mats.into_iter().map(vectorize))
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: CVector) -> bool {
        assert_eq!(v.len(), self.ambient, "vector outside the ambient space");
        let scale = v.norm();
        if scale == 0.0 {
            return false;
        }
        let mut r = v;
        for _ in 0..2 {
            for b in &self.basis {
                let c = b.dotc(&r);
                r -= b * c;
            }
        }
        let rest = r.norm();
        if rest <= DEPENDENCE * scale.max(1.0) {
            return false;
        }
        self.basis.push(r / Complex64::new(rest, 0.0));
        true
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    pub fn project(&self, v: &CVector) -> CVector {
        let mut p = CVector::zeros(self.ambient);
        for b in &self.basis {
            p += b * b.dotc(v);
        }
        p
    }

    pub fn coordinates(&self, v: &CVector) -> Vec<Complex64> {
        self.basis.iter().map(|b| b.dotc(v)).collect()
    }

    /// Distance from `v` to the subspace.
    pub fn residual(&self, v: &CVector) -> f64 {
        (v - self.project(v)).norm()
    }

    pub fn residual_matrix(&self, m: &CMatrix) -> f64 {
        self.residual(&vectorize(m))
    }

    pub fn contains(&self, v: &CVector) -> bool {
        self.residual(v) <= TOLERANCE
    }

    /// Largest residual of a basis vector of `other`: zero iff `other` is
    /// contained in `self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        other.basis.iter().map(|b| self.residual(b)).fold(0.0, f64::max)
    }

    /// `self ∩ other`, from the null space of `(1 - P_self)` restricted to
    /// `other`. An orthonormal basis of `other` has at most `N` vectors, so
    /// the thin SVD lists a singular value for every direction.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if other.dim() == 0 || self.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let b = CMatrix::from_columns(&other.basis);
        let mut m = b.clone();
        for (j, col) in other.basis.iter().enumerate() {
            m.set_column(j, &(col - self.project(col)));
        }
        let svd = m.svd(false, true);
        let v_t = svd.v_t.expect("requested");
        let mut out = Subspace::zero(self.ambient);
        for (i, sigma) in svd.singular_values.iter().enumerate() {
            if *sigma <= 1e-8 {
                let coeffs = v_t.row(i).adjoint();
                out.insert(&b * coeffs);
            }
        }
        out
    }

    /// The orthogonal complement within `within`.
    pub fn complement_in(&self, within: &Subspace) -> Subspace {
        Subspace::span(self.ambient, within.basis.iter().map(|b| b - self.project(b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn e(n: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(n);
        v[i] = c(1.0);
        v
    }

    #[test]
    fn span_drops_dependent_vectors() {
        let s = Subspace::span(3, [e(3, 0), e(3, 1), e(3, 0) * c(2.0) + e(3, 1)]);
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&(e(3, 0) - e(3, 1))));
        assert!(!s.contains(&e(3, 2)));
        assert!((s.residual(&e(3, 2)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(3, [e(3, 0), e(3, 1)]);
        let b = Subspace::span(3, [e(3, 1), e(3, 2)]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&e(3, 1)));
        assert_eq!(a.intersection(&Subspace::zero(3)).dim(), 0);
        assert_eq!(a.intersection(&a).dim(), 2);
    }

    #[test]
    fn complement() {
        let all = Subspace::span(3, (0..3).map(|i| e(3, i)));
        let a = Subspace::span(3, [e(3, 0) + e(3, 1)]);
        let comp = a.complement_in(&all);
        assert_eq!(comp.dim(), 2);
        assert!(comp.residual(&(e(3, 0) - e(3, 1))) < 1e-12);
    }

    #[test]
    fn norms() {
        let m = CMatrix::from_row_slice(2, 2, &[c(3.0), c(0.0), c(0.0), c(-4.0)]);
        assert!((op_norm(&m) - 4.0).abs() < 1e-12);
        assert!((min_hermitian_eigenvalue(&m) + 4.0).abs() < 1e-12);
        assert_eq!(op_norm(&CMatrix::zeros(0, 0)), 0.0);
    }
}
