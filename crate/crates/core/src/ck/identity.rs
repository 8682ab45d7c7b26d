//! Identities between words in the generators `S_i`, `S_i*`.
//!
//! Each check in [`super::checks`] is phrased as a pair of [`WordExpr`]s so
//! that the same statement can be evaluated twice: once by the rewriting
//! engine and once, independently, as composed partial maps on the
//! truncated path space ([`super::path_rep`]).

use num_traits::{One, Zero};
use serde::Serialize;

use super::scalar::Scalar;
use crate::group::FreeWord;

/// A finite sum of scalar multiples of raw (unreduced) letter products.
/// Letter `k` is `S_k`, letter `-k` is `S_k*`; the empty product is `1`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WordExpr {
    pub terms: Vec<(Scalar, Vec<i32>)>,
}

impl WordExpr {
    pub fn zero() -> Self {
        WordExpr { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::letters(Vec::new())
    }

    pub fn letters(letters: Vec<i32>) -> Self {
        WordExpr { terms: vec![(Scalar::one(), letters)] }
    }

    /// `S(t)`.
    pub fn rep(t: &FreeWord) -> Self {
        Self::letters(t.letters().to_vec())
    }

    /// `e(t) = S(t) S(t)*`.
    pub fn range(t: &FreeWord) -> Self {
        let mut l = t.letters().to_vec();
        l.extend(t.inverse().letters());
        Self::letters(l)
    }

    pub fn plus(mut self, other: WordExpr) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn minus(self, other: WordExpr) -> Self {
        self.plus(other.scale(-Scalar::one()))
    }

    pub fn scale(self, s: Scalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        WordExpr { terms: self.terms.into_iter().map(|(c, w)| (c * s, w)).collect() }
    }

    /// Distributed product.
    pub fn then(&self, other: &WordExpr) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                terms.push((*a * *b, w));
            }
        }
        WordExpr { terms }
    }

    pub fn product(factors: &[WordExpr]) -> Self {
        factors.iter().fold(Self::one(), |acc, f| acc.then(f))
    }

    pub fn sum(parts: impl IntoIterator<Item = WordExpr>) -> Self {
        parts.into_iter().fold(Self::zero(), WordExpr::plus)
    }

    /// Longest letter product appearing in the sum.
    pub fn max_len(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }
}

/// Which statement an identity instance belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum Family {
    /// `S(t) S(r) S(r^-1) = S(tr) S(r^-1)`.
    PartialRepresentation,
    /// `S(alpha g_j)* S(alpha g_j)` is `0` or `S(g_j)* S(g_j)`.
    SourceProjection,
    /// `S(alpha)* S(beta) = 0` for the pairs where the claims force it.
    OrthogonalPaths,
    /// `S(beta)` is a partial isometry for positive `beta`.
    PartialIsometry,
    /// Range projections commute.
    CommutingRanges,
    /// `S(t.r) = S(t) S(r)` and `e(tr) e(t) = e(tr)` for `|tr| = |t| + |r|`.
    SemiSaturation,
    /// `e(g_i) e(g_j) = 0`, `i != j`.
    RelationOrthogonal,
    /// `1 - sum_i e(g_i) = 0`.
    RelationPartition,
    /// `e(g_i^-1) - sum_j a_ij e(g_j) = 0`.
    RelationSource,
    /// `e(tr) e(t) - e(tr) = 0` for `|tr| = |t| + |r|`.
    RelationSemiSaturated,
    /// `S(t) e(r) = e(tr) S(t)` and `S(t) S(r) = e(t) S(tr)`.
    FiberIdentity,
    /// `sum_{alpha in P_k} e(alpha) = 1`.
    PartitionOfUnity,
    /// `S(t) = sum_{alpha in P_k} e(t alpha) S(t) e(alpha)`.
    Decomposition,
}

impl Family {
    /// Whether the identity relies on `S_i* S_i = sum_j a_ij S_j S_j*`,
    /// which the truncated path space satisfies only away from its boundary.
    pub fn needs_source_relation(self) -> bool {
        matches!(self, Family::SourceProjection | Family::RelationSource)
    }

    pub fn describe(self) -> &'static str {
        match self {
            Family::PartialRepresentation => "partial representation S(t)S(r)S(r^-1) = S(tr)S(r^-1)",
            Family::SourceProjection => "source projection of positive words",
            Family::OrthogonalPaths => "orthogonality of incomparable positive words",
            Family::PartialIsometry => "positive words are partial isometries",
            Family::CommutingRanges => "range projections commute",
            Family::SemiSaturation => "semi-saturation",
            Family::RelationOrthogonal => "relation e(g_i)e(g_j) = 0",
            Family::RelationPartition => "relation 1 - sum e(g_i) = 0",
            Family::RelationSource => "relation e(g_i^-1) - sum_j a_ij e(g_j) = 0",
            Family::RelationSemiSaturated => "relation e(tr)e(t) - e(tr) = 0",
            Family::FiberIdentity => "fiber identities S(t)e(r) = e(tr)S(t), S(t)S(r) = e(t)S(tr)",
            Family::PartitionOfUnity => "partition of unity sum_{P_k} e(alpha) = 1",
            Family::Decomposition => "decomposition S(t) = sum_{P_k} e(t alpha)S(t)e(alpha)",
        }
    }
}

/// One instance of an identity `lhs = rhs`.
#[derive(Clone, Debug)]
pub struct Identity {
    pub family: Family,
    pub label: String,
    pub lhs: WordExpr,
    pub rhs: WordExpr,
}

impl Identity {
    pub fn new(family: Family, label: impl Into<String>, lhs: WordExpr, rhs: WordExpr) -> Self {
        Identity { family, label: label.into(), lhs, rhs }
    }

    pub fn max_len(&self) -> usize {
        self.lhs.max_len().max(self.rhs.max_len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_word;

    #[test]
    fn range_letters() {
        let t = parse_word("g1 g2'", 2).unwrap();
        assert_eq!(WordExpr::range(&t).terms[0].1, vec![1, -2, 2, -1]);
        assert_eq!(WordExpr::one().max_len(), 0);
    }

    #[test]
    fn product_distributes() {
        let x = WordExpr::letters(vec![1]).plus(WordExpr::letters(vec![2]));
        let y = x.then(&x);
        assert_eq!(y.terms.len(), 4);
        assert_eq!(y.max_len(), 2);
    }
}
