use std::sync::Arc;

use num_traits::One;

use super::adjacency::AdjacencyMatrix;
use super::element::CkElement;
use super::monomial::CkMonomial;
use super::scalar::Scalar;
use super::CkError;
use crate::group::{FreeWord, PositiveWord};

/// The dense *-subalgebra of `O_A` spanned by normal-form monomials,
/// together with the partial representation `S` of `F_n`.
#[derive(Clone, Debug)]
pub struct CkAlgebra {
    adjacency: Arc<AdjacencyMatrix>,
}

impl CkAlgebra {
    pub fn new(adjacency: AdjacencyMatrix) -> Self {
        CkAlgebra { adjacency: Arc::new(adjacency) }
    }

    pub fn preset(name: &str) -> Option<Self> {
        AdjacencyMatrix::preset(name).map(Self::new)
    }

    pub fn adjacency(&self) -> &Arc<AdjacencyMatrix> {
        &self.adjacency
    }

    pub fn rank(&self) -> usize {
        self.adjacency.size()
    }

    pub fn zero(&self) -> CkElement {
        CkElement::zero(self.adjacency.clone())
    }

    /// `sum_j p_j`.
    pub fn unit(&self) -> CkElement {
        let mut x = self.zero();
        for j in 1..=self.rank() as u8 {
            x = x.add(&self.projection(j)).expect("same matrix");
        }
        x
    }

    pub fn scalar(&self, c: Scalar) -> CkElement {
        self.unit().scale(c)
    }

    /// `p_j = S_j S_j*`.
    pub fn projection(&self, j: u8) -> CkElement {
        CkElement::monomial(self.adjacency.clone(), CkMonomial::projection(j), Scalar::one())
            .expect("projections are valid")
    }

    pub fn monomial(&self, m: CkMonomial) -> Result<CkElement, CkError> {
        CkElement::monomial(self.adjacency.clone(), m, Scalar::one())
    }

    fn check_index(&self, i: usize) -> Result<u8, CkError> {
        if i == 0 || i > self.rank() {
            return Err(CkError::IndexOutOfRange { index: i, size: self.rank() });
        }
        Ok(i as u8)
    }

    /// `S_i = sum_j a_{i,j} s_i p_j`.
    pub fn generator(&self, i: usize) -> Result<CkElement, CkError> {
        let i = self.check_index(i)?;
        let mut x = self.zero();
        for j in self.adjacency.successors(i) {
            x = x.add(&self.monomial(CkMonomial::new(vec![i], j, vec![]))?)?;
        }
        Ok(x)
    }

    /// `S(x)` for a single signed letter.
    pub fn letter(&self, x: i32) -> Result<CkElement, CkError> {
        let g = self.generator(x.unsigned_abs() as usize)?;
        Ok(if x > 0 { g } else { g.adjoint() })
    }

    fn check_rank(&self, t: &FreeWord) -> Result<(), CkError> {
        if t.rank() != self.rank() {
            return Err(CkError::RankMismatch { word: t.rank(), algebra: self.rank() });
        }
        Ok(())
    }

    /// `S(t) = S(x_1) ... S(x_k)` over the reduced letters of `t`.
    pub fn partial_rep(&self, t: &FreeWord) -> Result<CkElement, CkError> {
        self.check_rank(t)?;
        let mut x = self.unit();
        for &l in t.letters() {
            x = x.mul(&self.letter(l)?)?;
            if x.is_zero() {
                break;
            }
        }
        Ok(x)
    }

    pub fn positive_rep(&self, alpha: &PositiveWord) -> Result<CkElement, CkError> {
        self.partial_rep(&alpha.to_free(self.rank())?)
    }

    /// Range projection `e(t) = S(t) S(t)*`.
    pub fn range_projection(&self, t: &FreeWord) -> Result<CkElement, CkError> {
        let s = self.partial_rep(t)?;
        s.mul(&s.adjoint())
    }

    /// Product of a list of elements, left to right.
    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a CkElement>) -> Result<CkElement, CkError> {
        let mut acc = self.unit();
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }
}
