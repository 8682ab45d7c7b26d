use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::adjacency::AdjacencyMatrix;
use super::monomial::CkMonomial;
use super::scalar::{coefficient_parts, Scalar};
use super::CkError;
use crate::group::FreeWord;

/// An exact linear combination of irreducible monomials.
///
/// Terms are kept in normal form: no zero coefficients, no monomial that the
/// vertex relation eliminates, sorted by the monomial term order. Two
/// elements over the same matrix are equal in `O_A` iff they compare equal.
#[derive(Clone)]
pub struct CkElement {
    adjacency: Arc<AdjacencyMatrix>,
    terms: BTreeMap<CkMonomial, Scalar>,
}

impl PartialEq for CkElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_matrix(&self.adjacency, &other.adjacency)
    }
}

impl Eq for CkElement {}

fn same_matrix(a: &Arc<AdjacencyMatrix>, b: &Arc<AdjacencyMatrix>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl CkElement {
    pub fn zero(adjacency: Arc<AdjacencyMatrix>) -> Self {
        CkElement { adjacency, terms: BTreeMap::new() }
    }

    /// A single monomial, normalised. Fails if the monomial is not valid
    /// over the matrix.
    pub fn monomial(adjacency: Arc<AdjacencyMatrix>, m: CkMonomial, coefficient: Scalar) -> Result<Self, CkError> {
        if !m.is_valid(&adjacency) {
            return Err(CkError::InvalidMonomial(m.to_string()));
        }
        let mut x = CkElement::zero(adjacency);
        x.accumulate(m, coefficient);
        Ok(x)
    }

    pub fn adjacency(&self) -> &Arc<AdjacencyMatrix> {
        &self.adjacency
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CkMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &CkMonomial) -> Scalar {
        self.terms.get(m).copied().unwrap_or_else(Scalar::zero)
    }

    fn check(&self, other: &CkElement) -> Result<(), CkError> {
        if same_matrix(&self.adjacency, &other.adjacency) {
            Ok(())
        } else {
            Err(CkError::AdjacencyMismatch)
        }
    }

    /// Adds `c * m`, rewriting with the vertex relation
    /// `s_mu' p_l s_nu'* = sum_j a_{l,j} s_{mu' l} p_j s_{nu' l}*`
    /// whenever `m` is the term it eliminates.
    fn accumulate(&mut self, m: CkMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        if m.is_reducible(&self.adjacency) {
            let l = *m.mu.last().expect("reducible monomials have nonempty paths");
            let special = m.vertex;
            for j in self.adjacency.successors(l).filter(|&j| j != special).collect::<Vec<_>>() {
                let sibling = CkMonomial { mu: m.mu.clone(), vertex: j, nu: m.nu.clone() };
                self.accumulate(sibling, -c);
            }
            let shorter = CkMonomial {
                mu: m.mu[..m.mu.len() - 1].to_vec(),
                vertex: l,
                nu: m.nu[..m.nu.len() - 1].to_vec(),
            };
            self.accumulate(shorter, c);
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &CkElement) -> Result<CkElement, CkError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CkElement) -> Result<CkElement, CkError> {
        self.add(&other.scale(-Scalar::one()))
    }

    pub fn scale(&self, s: Scalar) -> CkElement {
        if s.is_zero() {
            return CkElement::zero(self.adjacency.clone());
        }
        CkElement {
            adjacency: self.adjacency.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), *c * s)).collect(),
        }
    }

    /// Bilinear extension of the monomial product, followed by normalisation.
    pub fn mul(&self, other: &CkElement) -> Result<CkElement, CkError> {
        self.check(other)?;
        let mut out = CkElement::zero(self.adjacency.clone());
        for (x, a) in &self.terms {
            for (y, b) in &other.terms {
                if let Some(m) = x.splice(y) {
                    out.accumulate(m, *a * *b);
                }
            }
        }
        Ok(out)
    }

    /// `(s_mu p_j s_nu*)* = s_nu p_j s_mu*`, conjugating coefficients.
    pub fn adjoint(&self) -> CkElement {
        let mut out = CkElement::zero(self.adjacency.clone());
        for (m, c) in &self.terms {
            out.accumulate(m.adjoint(), c.conj());
        }
        out
    }

    /// Degrees in `F_n` of the terms present.
    pub fn degrees(&self) -> Vec<FreeWord> {
        let rank = self.adjacency.size();
        let mut ds: Vec<FreeWord> = self.terms.keys().map(|m| m.degree(rank)).collect();
        ds.sort();
        ds.dedup();
        ds
    }

    /// The map `F_t`: the sub-sum of terms of degree `t`.
    pub fn component(&self, t: &FreeWord) -> CkElement {
        let rank = self.adjacency.size();
        CkElement {
            adjacency: self.adjacency.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree(rank) == *t)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// Conditional expectation onto the degree-`e` part.
    pub fn expectation(&self) -> CkElement {
        self.component(&FreeWord::identity(self.adjacency.size()))
    }

    /// `Some(c)` when the element equals `c` times the unit.
    pub fn as_unit_multiple(&self) -> Option<Scalar> {
        let n = self.adjacency.size() as u8;
        if self.terms.len() != n as usize {
            return None;
        }
        let c = self.coefficient(&CkMonomial::projection(1));
        (1..=n).all(|j| self.terms.get(&CkMonomial::projection(j)) == Some(&c)).then_some(c)
    }
}

impl fmt::Display for CkElement {
    /// Prints in the expression grammar, e.g. `e(g1) - 2/3 s1 e(g2) s1*`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = coefficient_parts(c);
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_empty() {
                write!(f, "{mag} ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CkElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CkElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::super::scalar::{integer, rational};
    use super::*;

    fn ones2() -> Arc<AdjacencyMatrix> {
        Arc::new(AdjacencyMatrix::all_ones(2))
    }

    #[test]
    fn vertex_relation_normalises() {
        let a = ones2();
        // s1 p2 s1* is eliminated (special(1) = 2): p1 - s1 p1 s1*
        let x = CkElement::monomial(a.clone(), CkMonomial::new(vec![1], 2, vec![1]), integer(1)).unwrap();
        let expected = CkElement::monomial(a.clone(), CkMonomial::projection(1), integer(1))
            .unwrap()
            .sub(&CkElement::monomial(a.clone(), CkMonomial::new(vec![1], 1, vec![1]), integer(1)).unwrap())
            .unwrap();
        assert_eq!(x, expected);
        assert_eq!(x.to_string(), "e(g1) - s1 e(g1) s1*");
    }

    #[test]
    fn invalid_monomial_rejected() {
        let fib = Arc::new(AdjacencyMatrix::preset("fib2").unwrap());
        assert!(CkElement::monomial(fib, CkMonomial::new(vec![2], 2, vec![]), integer(1)).is_err());
    }

    #[test]
    fn mismatch_is_an_error() {
        let x = CkElement::monomial(ones2(), CkMonomial::projection(1), integer(1)).unwrap();
        let fib = Arc::new(AdjacencyMatrix::preset("fib2").unwrap());
        let y = CkElement::monomial(fib, CkMonomial::projection(1), integer(1)).unwrap();
        assert!(matches!(x.mul(&y), Err(CkError::AdjacencyMismatch)));
        assert!(x.add(&y).is_err());
    }

    #[test]
    fn display_coefficients() {
        let a = ones2();
        let x = CkElement::monomial(a.clone(), CkMonomial::new(vec![1], 1, vec![]), rational(-3, 4)).unwrap();
        assert_eq!(x.to_string(), "-3/4 s1 e(g1)");
        assert_eq!(CkElement::zero(a).to_string(), "0");
    }
}
