//! Vertex-decorated monomials `s_mu p_j s_nu*`.

use std::cmp::Ordering;
use std::fmt;

use super::adjacency::AdjacencyMatrix;
use crate::group::FreeWord;

/// An admissible path; letters are generator indices `1..=n`.
pub type PathWord = Vec<u8>;

/// `s_mu p_j s_nu*`, with `s_{empty} = 1` and `p_j = S_j S_j*`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CkMonomial {
    pub mu: PathWord,
    pub vertex: u8,
    pub nu: PathWord,
}

impl CkMonomial {
    pub fn new(mu: PathWord, vertex: u8, nu: PathWord) -> Self {
        CkMonomial { mu, vertex, nu }
    }

    pub fn projection(vertex: u8) -> Self {
        CkMonomial { mu: Vec::new(), vertex, nu: Vec::new() }
    }

    /// Admissible paths whose last letters connect to the vertex.
    pub fn is_valid(&self, a: &AdjacencyMatrix) -> bool {
        let n = a.size() as u8;
        if self.vertex == 0 || self.vertex > n || !a.is_admissible(&self.mu) || !a.is_admissible(&self.nu) {
            return false;
        }
        let ends_ok = |p: &PathWord| p.last().is_none_or(|&l| a.get(l, self.vertex));
        ends_ok(&self.mu) && ends_ok(&self.nu)
    }

    /// Eliminated by the vertex relation: `mu` and `nu` end in the same
    /// letter `l` and the vertex is `special(l)`.
    pub fn is_reducible(&self, a: &AdjacencyMatrix) -> bool {
        match (self.mu.last(), self.nu.last()) {
            (Some(&l), Some(&m)) => l == m && self.vertex == a.special(l),
            _ => false,
        }
    }

    pub fn adjoint(&self) -> Self {
        CkMonomial { mu: self.nu.clone(), vertex: self.vertex, nu: self.mu.clone() }
    }

    /// The grading degree `mu nu^{-1}` in `F_n`.
    pub fn degree(&self, rank: usize) -> FreeWord {
        let raw: Vec<i32> = self
            .mu
            .iter()
            .map(|&x| x as i32)
            .chain(self.nu.iter().rev().map(|&x| -(x as i32)))
            .collect();
        FreeWord::reduce(&raw, rank).expect("monomial letters are within rank")
    }

    /// Total path length `|mu| + |nu|`.
    pub fn weight(&self) -> usize {
        self.mu.len() + self.nu.len()
    }

    /// The product of two valid monomials before normalisation: zero or a
    /// single decorated monomial, decided by comparing `self.nu` with
    /// `other.mu`.
    pub fn splice(&self, other: &CkMonomial) -> Option<CkMonomial> {
        let (left, right) = (&self.nu, &other.mu);
        if left == right {
            return (self.vertex == other.vertex).then(|| CkMonomial {
                mu: self.mu.clone(),
                vertex: self.vertex,
                nu: other.nu.clone(),
            });
        }
        if right.len() > left.len() && right.starts_with(left) {
            let gamma = &right[left.len()..];
            if gamma[0] != self.vertex {
                return None;
            }
            let mut mu = self.mu.clone();
            mu.extend_from_slice(gamma);
            return Some(CkMonomial { mu, vertex: other.vertex, nu: other.nu.clone() });
        }
        if left.len() > right.len() && left.starts_with(right) {
            let delta = &left[right.len()..];
            if delta[0] != other.vertex {
                return None;
            }
            let mut nu = other.nu.clone();
            nu.extend_from_slice(delta);
            return Some(CkMonomial { mu: self.mu.clone(), vertex: self.vertex, nu });
        }
        None
    }
}

impl Ord for CkMonomial {
    /// `(|mu| + |nu|, mu, j, nu)`, paths compared lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.mu.cmp(&other.mu))
            .then_with(|| self.vertex.cmp(&other.vertex))
            .then_with(|| self.nu.cmp(&other.nu))
    }
}

impl PartialOrd for CkMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CkMonomial {
    /// Expression syntax: `s1 s2 e(g3) s2* s1*`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.mu.iter().map(|x| format!("s{x}")).collect();
        parts.push(format!("e(g{})", self.vertex));
        parts.extend(self.nu.iter().rev().map(|x| format!("s{x}*")));
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for CkMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Every valid monomial with `|mu|, |nu| <= max_len`, in term order.
pub fn enumerate_monomials(a: &AdjacencyMatrix, max_len: usize) -> Vec<CkMonomial> {
    let paths = admissible_paths(a, max_len);
    let mut out = Vec::new();
    for mu in &paths {
        for j in 1..=a.size() as u8 {
            for nu in &paths {
                let m = CkMonomial::new(mu.clone(), j, nu.clone());
                if m.is_valid(a) {
                    out.push(m);
                }
            }
        }
    }
    out.sort();
    out
}

/// Admissible paths of length `0..=max_len`.
pub fn admissible_paths(a: &AdjacencyMatrix, max_len: usize) -> Vec<PathWord> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<PathWord> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for x in 1..=a.size() as u8 {
                if p.last().is_none_or(|&l| a.get(l, x)) {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splice_cases() {
        let p = |j| CkMonomial::projection(j);
        assert_eq!(p(1).splice(&p(1)), Some(p(1)));
        assert_eq!(p(1).splice(&p(2)), None);
        let x = CkMonomial::new(vec![1], 2, vec![]);
        let y = CkMonomial::new(vec![], 2, vec![1]);
        assert_eq!(x.splice(&y), Some(CkMonomial::new(vec![1], 2, vec![1])));
        // p_1 s_1 = s_1 (restricted), p_2 s_1 = 0
        let s1p1 = CkMonomial::new(vec![1], 1, vec![]);
        assert_eq!(p(1).splice(&s1p1), Some(s1p1.clone()));
        assert_eq!(p(2).splice(&s1p1), None);
        // s_1* s_2 = 0
        let s1_adj = CkMonomial::new(vec![], 1, vec![1]);
        let s2p1 = CkMonomial::new(vec![2], 1, vec![]);
        assert_eq!(s1_adj.splice(&s2p1), None);
    }

    #[test]
    fn degrees() {
        assert!(CkMonomial::projection(1).degree(3).is_identity());
        assert_eq!(CkMonomial::new(vec![1], 1, vec![]).degree(3).letters(), &[1]);
        let m = CkMonomial::new(vec![1, 2], 2, vec![3, 2]);
        assert_eq!(m.degree(3).letters(), &[1, -3]);
    }

    #[test]
    fn validity_and_reducibility() {
        let fib = AdjacencyMatrix::preset("fib2").unwrap();
        assert!(!CkMonomial::new(vec![2], 2, vec![]).is_valid(&fib));
        assert!(!CkMonomial::new(vec![2, 2], 1, vec![]).is_valid(&fib));
        assert!(CkMonomial::new(vec![1, 2], 1, vec![2]).is_valid(&fib));
        let ones = AdjacencyMatrix::all_ones(2);
        assert!(CkMonomial::new(vec![1], 2, vec![1]).is_reducible(&ones));
        assert!(!CkMonomial::new(vec![1], 1, vec![1]).is_reducible(&ones));
        assert!(!CkMonomial::new(vec![1], 2, vec![2]).is_reducible(&ones));
    }

    #[test]
    fn monomial_counts() {
        let ones = AdjacencyMatrix::all_ones(2);
        // 7 paths of length <= 2, 2 vertices
        assert_eq!(enumerate_monomials(&ones, 2).len(), 7 * 2 * 7);
        let ms = enumerate_monomials(&ones, 2);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }
}
