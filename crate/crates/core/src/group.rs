//! Discrete groups: free groups on `n` generators with reduced words, and
//! finite groups given by multiplication tables.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest order accepted by the shipped finite group constructors.
pub const MAX_CONSTRUCTED_ORDER: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator index {index} out of range for rank {rank}")]
    InvalidGenerator { index: i32, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("rank must be positive")]
    ZeroRank,
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("unsupported group: {0}")]
    Unsupported(String),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
}

/// An element of the free group `F_n`, always stored in reduced form.
///
/// Letter `k > 0` stands for `g_k`, letter `-k` for `g_k^{-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<i32>,
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    /// Generator `g_k` (1-based).
    pub fn generator(rank: usize, k: usize) -> Result<Self, GroupError> {
        Self::reduce(&[k as i32], rank)
    }

    /// Free reduction of a raw sequence of signed generator indices.
    pub fn reduce(raw: &[i32], rank: usize) -> Result<Self, GroupError> {
        if rank == 0 {
            return Err(GroupError::ZeroRank);
        }
        let mut letters: Vec<i32> = Vec::with_capacity(raw.len());
        for &x in raw {
            if x == 0 || x.unsigned_abs() as usize > rank {
                return Err(GroupError::InvalidGenerator { index: x, rank });
            }
            if letters.last() == Some(&-x) {
                letters.pop();
            } else {
                letters.push(x);
            }
        }
        Ok(FreeWord { rank, letters })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Word length `|t|`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|x| -x).collect(),
        }
    }

    fn check_rank(&self, other: &FreeWord) -> Result<(), GroupError> {
        if self.rank != other.rank {
            return Err(GroupError::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &FreeWord) -> Result<FreeWord, GroupError> {
        self.check_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &FreeWord) -> FreeWord {
        let mut cancel = 0;
        let (a, b) = (&self.letters, &other.letters);
        while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == -b[cancel] {
            cancel += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
        letters.extend_from_slice(&a[..a.len() - cancel]);
        letters.extend_from_slice(&b[cancel..]);
        FreeWord { rank: self.rank, letters }
    }

    /// `true` iff no cancellation occurs in `self * other`, i.e. `|tr| = |t| + |r|`.
    pub fn is_dot(&self, other: &FreeWord) -> Result<bool, GroupError> {
        self.check_rank(other)?;
        Ok(match (self.letters.last(), other.letters.first()) {
            (Some(&x), Some(&y)) => x != -y,
            _ => true,
        })
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|&x| x > 0)
    }

    /// Splits `t = alpha * beta^{-1}` with `alpha`, `beta` positive and no
    /// cancellation, when the reduced word has that shape.
    pub fn factor_positive(&self) -> Option<(PositiveWord, PositiveWord)> {
        let split = self.letters.iter().position(|&x| x < 0).unwrap_or(self.letters.len());
        if self.letters[split..].iter().any(|&x| x > 0) {
            return None;
        }
        let alpha = self.letters[..split].iter().map(|&x| x as u32).collect();
        let beta = self.letters[split..].iter().rev().map(|&x| (-x) as u32).collect();
        Some((PositiveWord(alpha), PositiveWord(beta)))
    }

    /// All reduced words of length exactly `len` over `rank` generators.
    pub fn enumerate_length(rank: usize, len: usize) -> Vec<FreeWord> {
        let alphabet: Vec<i32> = (1..=rank as i32).flat_map(|k| [k, -k]).collect();
        let mut out = vec![FreeWord::identity(rank)];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * (2 * rank).max(1));
            for w in &out {
                for &x in &alphabet {
                    if w.letters.last() != Some(&-x) {
                        let mut letters = w.letters.clone();
                        letters.push(x);
                        next.push(FreeWord { rank, letters });
                    }
                }
            }
            out = next;
        }
        out
    }

    /// All reduced words of length at most `max_len`, shortest first.
    pub fn enumerate_up_to(rank: usize, max_len: usize) -> Vec<FreeWord> {
        (0..=max_len).flat_map(|k| Self::enumerate_length(rank, k)).collect()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, &x) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if x > 0 {
                write!(f, "g{x}")?;
            } else {
                write!(f, "g{}'", -x)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord({self})")
    }
}

/// Parses the textual syntax `g1 g2'`; the empty string or `e` is the identity.
pub fn parse_word(text: &str, rank: usize) -> Result<FreeWord, GroupError> {
    let mut raw = Vec::new();
    for token in text.split_whitespace() {
        if token == "e" {
            continue;
        }
        let (body, inverse) = match token.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (token, false),
        };
        let digits = body
            .strip_prefix('g')
            .ok_or_else(|| GroupError::Parse(format!("expected g<k>, found {token:?}")))?;
        let k: i32 = digits
            .parse()
            .map_err(|_| GroupError::Parse(format!("bad generator index in {token:?}")))?;
        raw.push(if inverse { -k } else { k });
    }
    FreeWord::reduce(&raw, rank)
}

/// An element of the positive cone `P`: a word in the generators only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PositiveWord(pub Vec<u32>);

impl PositiveWord {
    pub fn empty() -> Self {
        PositiveWord(Vec::new())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_free(&self, rank: usize) -> Result<FreeWord, GroupError> {
        let raw: Vec<i32> = self.0.iter().map(|&x| x as i32).collect();
        FreeWord::reduce(&raw, rank)
    }
}

/// The set `P_k` in lexicographic order; `P_0 = {e}`.
pub fn enumerate_positive(rank: usize, k: usize) -> Vec<PositiveWord> {
    let mut out = vec![PositiveWord::empty()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=rank as u32).map(move |g| {
                    let mut v = w.0.clone();
                    v.push(g);
                    PositiveWord(v)
                })
            })
            .collect();
    }
    out
}

/// Requested shape of a finite group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    Cyclic(usize),
    Symmetric(usize),
    DirectProduct(Box<GroupKind>, Box<GroupKind>),
}

/// A finite group on `{0, .., order-1}` given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(kind: &GroupKind) -> Result<Self, GroupError> {
        let g = match kind {
            GroupKind::Cyclic(k) => Self::cyclic(*k)?,
            GroupKind::Symmetric(k) => Self::symmetric(*k)?,
            GroupKind::DirectProduct(a, b) => {
                let (a, b) = (Self::new(a)?, Self::new(b)?);
                Self::direct_product(&a, &b)?
            }
        };
        Ok(g)
    }

    pub fn cyclic(k: usize) -> Result<Self, GroupError> {
        if k == 0 || k > MAX_CONSTRUCTED_ORDER {
            return Err(GroupError::Unsupported(format!("cyclic group of order {k}")));
        }
        let rows: Vec<Vec<usize>> = (0..k).map(|t| (0..k).map(|s| (t + s) % k).collect()).collect();
        Self::from_table(rows)
    }

    /// Symmetric group on `k` points; elements are permutations in
    /// lexicographic order, product `(p q)(i) = p(q(i))`.
    pub fn symmetric(k: usize) -> Result<Self, GroupError> {
        if k == 0 || k > 4 {
            return Err(GroupError::Unsupported(format!("symmetric group S_{k}")));
        }
        let perms = permutations(k);
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed under composition");
        let rows = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let pq: Vec<usize> = (0..k).map(|i| p[q[i]]).collect();
                        index(&pq)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(rows)
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        let order = a.order * b.order;
        if order > MAX_CONSTRUCTED_ORDER {
            return Err(GroupError::Unsupported(format!("direct product of order {order}")));
        }
        let rows = (0..order)
            .map(|x| {
                (0..order)
                    .map(|y| {
                        let (xa, xb) = (x / b.order, x % b.order);
                        let (ya, yb) = (y / b.order, y % b.order);
                        a.mul(xa, ya) * b.order + b.mul(xb, yb)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(rows)
    }

    /// Validates a user-supplied table. Orders up to
    /// [`MAX_CONSTRUCTED_ORDER`] are checked exhaustively, larger ones by
    /// sampling associativity.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != order || r.iter().any(|&x| x >= order)) {
            return Err(GroupError::InvalidTable("table must be square with entries < order".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let mul = |x: usize, y: usize| table[x * order + y];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity".into()))?;
        let mut inverse = Vec::with_capacity(order);
        for x in 0..order {
            let y = (0..order)
                .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("element {x} has no inverse")))?;
            inverse.push(y);
        }
        let assoc = |x: usize, y: usize, z: usize| mul(mul(x, y), z) == mul(x, mul(y, z));
        if order <= MAX_CONSTRUCTED_ORDER {
            for x in 0..order {
                for y in 0..order {
                    for z in 0..order {
                        if !assoc(x, y, z) {
                            return Err(GroupError::InvalidTable(format!("not associative at ({x},{y},{z})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(order as u64);
            for _ in 0..20_000 {
                let (x, y, z) = (rng.random_range(0..order), rng.random_range(0..order), rng.random_range(0..order));
                if !assoc(x, y, z) {
                    return Err(GroupError::InvalidTable(format!("not associative at ({x},{y},{z})")));
                }
            }
        }
        Ok(FiniteGroup { order, table, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|x| self.elements().all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// The table as rows, e.g. for serialization.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }
}

/// All permutations of `0..k` in lexicographic order; index `i` is element `i`
/// of [`FiniteGroup::symmetric`].
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q: Vec<usize> = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

impl FromStr for GroupKind {
    type Err = GroupError;

    /// `Z4`, `S3`, `Z2xZ3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split('x').collect();
        let single = |p: &str| -> Result<GroupKind, GroupError> {
            let (head, num) = p.split_at(1.min(p.len()));
            let k: usize = num.parse().map_err(|_| GroupError::Parse(format!("bad group {p:?}")))?;
            match head {
                "Z" | "C" => Ok(GroupKind::Cyclic(k)),
                "S" => Ok(GroupKind::Symmetric(k)),
                _ => Err(GroupError::Parse(format!("bad group {p:?}"))),
            }
        };
        let mut kinds = parts.into_iter().map(single);
        let mut acc = kinds.next().ok_or_else(|| GroupError::Parse("empty".into()))??;
        for k in kinds {
            acc = GroupKind::DirectProduct(Box::new(acc), Box::new(k?));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(raw: &[i32]) -> FreeWord {
        FreeWord::reduce(raw, 3).unwrap()
    }

    /// Repeated adjacent-cancellation until nothing changes.
    fn reduce_fixpoint(raw: &[i32]) -> Vec<i32> {
        let mut v = raw.to_vec();
        loop {
            let pos = v.windows(2).position(|p| p[0] == -p[1]);
            match pos {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return v,
            }
        }
    }

    #[test]
    fn reduce_examples() {
        assert!(w(&[]).is_identity());
        assert!(w(&[1, -1]).is_identity());
        assert_eq!(reduce_fixpoint(&[1, 2, -2, 1]), vec![1, 1]);
        assert_eq!(w(&[1, 2, -2, 1]).letters(), &[1, 1]);
        assert_eq!(
            FreeWord::reduce(&[4], 3),
            Err(GroupError::InvalidGenerator { index: 4, rank: 3 })
        );
        assert!(FreeWord::reduce(&[0], 3).is_err());
    }

    #[test]
    fn multiply_examples() {
        assert!(w(&[1]).multiply(&w(&[-1])).unwrap().is_identity());
        let prod = w(&[1, 2]).multiply(&w(&[-2, 1])).unwrap();
        assert_eq!(prod.letters(), reduce_fixpoint(&[1, 2, -2, 1]).as_slice());
        assert_eq!(FreeWord::identity(3).multiply(&w(&[2, -3])).unwrap(), w(&[2, -3]));
        let other = FreeWord::identity(2);
        assert!(matches!(w(&[1]).multiply(&other), Err(GroupError::RankMismatch { .. })));
    }

    #[test]
    fn dot_examples() {
        assert!(w(&[1]).is_dot(&w(&[2])).unwrap());
        assert!(!w(&[1]).is_dot(&w(&[-1])).unwrap());
        let (u, v) = (w(&[1, -2]), w(&[2, 1]));
        assert_eq!(u.multiply(&v).unwrap().len(), 2);
        assert!(!u.is_dot(&v).unwrap());
    }

    #[test]
    fn factor_examples() {
        let (a, b) = w(&[1, -2]).factor_positive().unwrap();
        assert_eq!((a.letters(), b.letters()), (&[1u32][..], &[2u32][..]));
        let (a, b) = FreeWord::identity(3).factor_positive().unwrap();
        assert!(a.is_empty() && b.is_empty());
        assert_eq!(w(&[-1, 2]).factor_positive(), None);
        let (a, b) = w(&[1, 2, -3, -1]).factor_positive().unwrap();
        assert_eq!((a.letters(), b.letters()), (&[1u32, 2][..], &[1u32, 3][..]));
    }

    #[test]
    fn positive_enumeration() {
        assert_eq!(enumerate_positive(2, 0), vec![PositiveWord::empty()]);
        assert_eq!(enumerate_positive(2, 1), vec![PositiveWord(vec![1]), PositiveWord(vec![2])]);
        let p3 = enumerate_positive(2, 3);
        assert_eq!(p3.len(), 8);
        assert!(p3.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(enumerate_positive(3, 4).len(), 81);
    }

    #[test]
    fn reduced_enumeration_counts() {
        // 2n (2n-1)^{k-1} reduced words of length k
        assert_eq!(FreeWord::enumerate_length(2, 0).len(), 1);
        assert_eq!(FreeWord::enumerate_length(2, 3).len(), 4 * 9);
        assert_eq!(FreeWord::enumerate_length(3, 2).len(), 6 * 5);
    }

    #[test]
    fn word_text_syntax() {
        let t = parse_word("g1 g2'", 2).unwrap();
        assert_eq!(t.letters(), &[1, -2]);
        assert_eq!(t.to_string(), "g1 g2'");
        assert!(parse_word("", 2).unwrap().is_identity());
        assert_eq!(parse_word(&t.to_string(), 2).unwrap(), t);
        assert!(parse_word("g3", 2).is_err());
        assert!(parse_word("h1", 2).is_err());
    }

    fn check_axioms(g: &FiniteGroup) {
        for x in g.elements() {
            assert_eq!(g.mul(x, g.inv(x)), g.identity());
            assert_eq!(g.mul(g.identity(), x), x);
            for y in g.elements() {
                for z in g.elements() {
                    assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                }
            }
        }
    }

    #[test]
    fn finite_groups() {
        let trivial = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(trivial.order(), 1);
        let z4 = FiniteGroup::cyclic(4).unwrap();
        for t in 0..4 {
            for s in 0..4 {
                assert_eq!(z4.mul(t, s), (t + s) % 4);
            }
        }
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        let prod = FiniteGroup::new(&"Z2xS3".parse().unwrap()).unwrap();
        assert_eq!(prod.order(), 12);
        for g in [&trivial, &z4, &s3, &prod, &FiniteGroup::symmetric(4).unwrap()] {
            check_axioms(g);
        }
        assert!(FiniteGroup::cyclic(25).is_err());
        assert!(FiniteGroup::symmetric(5).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn symmetric_matches_composition() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let perms = permutations(3);
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                let pq: Vec<usize> = (0..3).map(|k| p[q[k]]).collect();
                assert_eq!(perms[s3.mul(i, j)], pq);
            }
        }
    }

    fn raw_word() -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec(prop_oneof![1..=3i32, -3..=-1i32], 0..12)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_and_matches_fixpoint(raw in raw_word()) {
            let r = w(&raw);
            let expected = reduce_fixpoint(&raw);
            prop_assert_eq!(r.letters(), expected.as_slice());
            prop_assert_eq!(FreeWord::reduce(r.letters(), 3).unwrap(), r);
        }

        #[test]
        fn group_laws(a in raw_word(), b in raw_word(), c in raw_word()) {
            let (a, b, c) = (w(&a), w(&b), w(&c));
            let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert!(a.multiply(&a.inverse()).unwrap().is_identity());
            let ab = a.multiply(&b).unwrap();
            prop_assert!(ab.len() <= a.len() + b.len());
            prop_assert_eq!(ab.len() == a.len() + b.len(), a.is_dot(&b).unwrap());
        }

        #[test]
        fn factor_positive_reassembles(raw in raw_word()) {
            let t = w(&raw);
            if let Some((alpha, beta)) = t.factor_positive() {
                let a = alpha.to_free(3).unwrap();
                let b = beta.to_free(3).unwrap();
                prop_assert_eq!(a.multiply(&b.inverse()).unwrap(), t.clone());
                prop_assert_eq!(t.len(), alpha.len() + beta.len());
            }
        }
    }
}
