use num_complex::Complex64;

use super::fell::{BundleElement, FiniteFellBundle};
use super::subspace::{op_norm, CMatrix};
use super::BundleError;
use crate::group::FiniteGroup;

/// Largest column disagreement tolerated when reading off a Fourier
/// coefficient.
pub const EQUIVARIANCE_TOLERANCE: f64 = 1e-12;

/// A `|G| x |G|` array of `d x d` blocks acting on `C^d ⊗ l^2(G)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedOperator {
    order: usize,
    dim: usize,
    matrix: CMatrix,
}

impl GradedOperator {
    pub fn from_matrix(order: usize, dim: usize, matrix: CMatrix) -> Result<Self, BundleError> {
        let n = order * dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(BundleError::Shape { rows: matrix.nrows(), cols: matrix.ncols(), dim: n });
        }
        Ok(GradedOperator { order, dim, matrix })
    }

    pub fn identity(order: usize, dim: usize) -> Self {
        GradedOperator { order, dim, matrix: CMatrix::identity(order * dim, order * dim) }
    }

    pub fn zero(order: usize, dim: usize) -> Self {
        GradedOperator { order, dim, matrix: CMatrix::zeros(order * dim, order * dim) }
    }

    /// `sum_t x(t) ⊗ λ_t`: block `(r, s)` is `x(r s^-1)`.
    pub fn regular_embed(bundle: &FiniteFellBundle, x: &BundleElement) -> Self {
        let (order, d) = (bundle.order(), bundle.dim());
        let g = bundle.group();
        let mut matrix = CMatrix::zeros(order * d, order * d);
        for r in g.elements() {
            for s in g.elements() {
                let t = g.mul(r, g.inv(s));
                matrix.view_mut((r * d, s * d), (d, d)).copy_from(&x.components[t]);
            }
        }
        GradedOperator { order, dim: d, matrix }
    }

    /// The block permutation `ρ_t` with block `(r, s)` equal to the
    /// identity when `r = s t`.
    pub fn right_regular(group: &FiniteGroup, dim: usize, t: usize) -> Self {
        let order = group.order();
        let mut matrix = CMatrix::zeros(order * dim, order * dim);
        for s in group.elements() {
            let r = group.mul(s, t);
            matrix.view_mut((r * dim, s * dim), (dim, dim)).fill_with_identity();
        }
        GradedOperator { order, dim, matrix }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn block(&self, r: usize, s: usize) -> CMatrix {
        self.matrix.view((r * self.dim, s * self.dim), (self.dim, self.dim)).into_owned()
    }

    pub fn mul(&self, other: &GradedOperator) -> GradedOperator {
        GradedOperator { order: self.order, dim: self.dim, matrix: &self.matrix * &other.matrix }
    }

    pub fn add(&self, other: &GradedOperator) -> GradedOperator {
        GradedOperator { order: self.order, dim: self.dim, matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &GradedOperator) -> GradedOperator {
        GradedOperator { order: self.order, dim: self.dim, matrix: &self.matrix - &other.matrix }
    }

    pub fn scale(&self, c: Complex64) -> GradedOperator {
        GradedOperator { order: self.order, dim: self.dim, matrix: &self.matrix * c }
    }

    pub fn adjoint(&self) -> GradedOperator {
        GradedOperator { order: self.order, dim: self.dim, matrix: self.matrix.adjoint() }
    }

    /// Operator norm.
    pub fn norm(&self) -> f64 {
        op_norm(&self.matrix)
    }

    /// Largest deviation of a block from the block in column `e` of the same
    /// degree.
    pub fn equivariance_residual(&self, group: &FiniteGroup) -> f64 {
        let e = group.identity();
        let mut worst: f64 = 0.0;
        for r in group.elements() {
            for s in group.elements() {
                let t = group.mul(r, group.inv(s));
                worst = worst.max((self.block(r, s) - self.block(t, e)).norm());
            }
        }
        worst
    }

    /// The Fourier coefficient at `t`: block `(t s, s)`, required to agree
    /// across all columns `s`.
    pub fn fourier(&self, group: &FiniteGroup, t: usize) -> Result<CMatrix, BundleError> {
        let e = group.identity();
        let reference = self.block(t, e);
        for s in group.elements() {
            let residual = (self.block(group.mul(t, s), s) - &reference).norm();
            if residual > EQUIVARIANCE_TOLERANCE * reference.norm().max(1.0) {
                return Err(BundleError::NotEquivariant { t, residual });
            }
        }
        Ok(reference)
    }

    /// Conditional expectation onto the unit fiber.
    pub fn expectation(&self, group: &FiniteGroup) -> Result<CMatrix, BundleError> {
        self.fourier(group, group.identity())
    }

    /// All Fourier coefficients as a section.
    pub fn components(&self, group: &FiniteGroup) -> Result<BundleElement, BundleError> {
        Ok(BundleElement { components: group.elements().map(|t| self.fourier(group, t)).collect::<Result<_, _>>()? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::examples;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_fiber_embeds_block_diagonally() {
        let b = examples::flip_z2();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = b.random_unit_fiber_element(&mut rng);
        let op = GradedOperator::regular_embed(&b, &b.single(0, a.clone()));
        assert_eq!(op.block(0, 0), a);
        assert_eq!(op.block(1, 1), a);
        assert!(op.block(0, 1).norm() == 0.0 && op.block(1, 0).norm() == 0.0);
    }

    #[test]
    fn flip_component_is_anti_diagonal() {
        let b = examples::flip_z2();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = b.random_fiber_element(1, &mut rng);
        let op = GradedOperator::regular_embed(&b, &b.single(1, m.clone()));
        assert_eq!(op.block(0, 1), m);
        assert_eq!(op.block(1, 0), m);
        assert_eq!(op.block(0, 0).norm(), 0.0);
    }

    #[test]
    fn embedding_is_a_star_homomorphism() {
        let b = examples::symmetric_permutation();
        let g = b.group();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let (x, y) = (b.random_element(&mut rng), b.random_element(&mut rng));
            let px = GradedOperator::regular_embed(&b, &x);
            let py = GradedOperator::regular_embed(&b, &y);
            let pxy = GradedOperator::regular_embed(&b, &b.multiply(&x, &y));
            assert!(px.mul(&py).sub(&pxy).norm() < 1e-10);
            let pstar = GradedOperator::regular_embed(&b, &b.adjoint(&x));
            assert!(px.adjoint().sub(&pstar).norm() < 1e-10);
            assert!(px.equivariance_residual(g) == 0.0);
        }
    }

    #[test]
    fn fourier_round_trip_and_identity() {
        let b = examples::cyclic_shift(3).unwrap();
        let g = b.group();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = b.random_element(&mut rng);
        let op = GradedOperator::regular_embed(&b, &x);
        assert_eq!(op.components(g).unwrap(), x);
        let id = GradedOperator::identity(3, 3);
        assert_eq!(id.expectation(g).unwrap(), CMatrix::identity(3, 3));
        assert_eq!(id.fourier(g, 1).unwrap().norm(), 0.0);
    }

    #[test]
    fn non_equivariant_operator_rejected() {
        let b = examples::flip_z2();
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        let op = GradedOperator::from_matrix(2, 2, m).unwrap();
        assert!(matches!(op.expectation(b.group()), Err(BundleError::NotEquivariant { .. })));
        assert!(GradedOperator::from_matrix(2, 2, CMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn right_regular_is_an_anti_representation() {
        let g = FiniteGroup::symmetric(3).unwrap();
        for t in g.elements() {
            for s in g.elements() {
                let lhs = GradedOperator::right_regular(&g, 2, t).mul(&GradedOperator::right_regular(&g, 2, s));
                assert_eq!(lhs, GradedOperator::right_regular(&g, 2, g.mul(s, t)));
            }
        }
        assert_eq!(GradedOperator::right_regular(&g, 2, g.identity()), GradedOperator::identity(6, 2));
    }
}
