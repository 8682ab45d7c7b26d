//! A finite model of the infinite-path representation of `O_A`, used as an
//! independent oracle for the rewriting engine.
//!
//! A basis vector is an infinite admissible path `mu tau_j`, where `tau_j`
//! is the greedy path from vertex `j` that always steps to the least
//! successor. The pair `(mu, j)` is kept canonical (the shortest prefix that
//! describes the path) and the space is truncated at prefix length `L`.
//! Generators act by prepending a letter, adjoints by deleting the first
//! letter; prepending beyond the truncation kills the vector. The generators
//! are therefore partial bijections of the basis, the range relations hold
//! exactly on the whole space, and `S_i* S_i = sum_j a_ij S_j S_j*` fails
//! only on vectors whose prefix already has length `L`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::adjacency::AdjacencyMatrix;
use super::checks::CheckReport;
use super::element::CkElement;
use super::identity::{Identity, WordExpr};
use super::monomial::{admissible_paths, CkMonomial, PathWord};
use super::scalar::{to_c64, Scalar};
use super::CkError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathVector {
    pub prefix: PathWord,
    pub tail: u8,
}

impl PathVector {
    pub fn first_letter(&self) -> u8 {
        self.prefix.first().copied().unwrap_or(self.tail)
    }
}

/// Truncation level `2 l + 1` for identities whose longest word has `l`
/// letters.
pub fn oracle_level(ids: &[Identity]) -> usize {
    2 * ids.iter().map(Identity::max_len).max().unwrap_or(0) + 1
}

/// Exact sparse vector over the truncated path basis.
pub type SparseVector = BTreeMap<PathVector, Scalar>;

#[derive(Clone, Debug)]
pub struct TruncatedPathRep {
    adjacency: Arc<AdjacencyMatrix>,
    level: usize,
    succ: Vec<u8>,
}

impl TruncatedPathRep {
    pub fn new(adjacency: Arc<AdjacencyMatrix>, level: usize) -> Result<Self, CkError> {
        if level == 0 {
            return Err(CkError::InvalidLevel(level));
        }
        let succ = (1..=adjacency.size() as u8)
            .map(|j| adjacency.successors(j).next().expect("rows are nonzero"))
            .collect();
        Ok(TruncatedPathRep { adjacency, level, succ })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn adjacency(&self) -> &Arc<AdjacencyMatrix> {
        &self.adjacency
    }

    fn succ(&self, j: u8) -> u8 {
        self.succ[j as usize - 1]
    }

    fn is_canonical(&self, prefix: &[u8], tail: u8) -> bool {
        prefix.last().is_none_or(|&l| self.adjacency.get(l, tail) && self.succ(l) != tail)
    }

    /// All canonical vectors with prefix length `<= max_prefix`, sorted.
    pub fn basis_up_to(&self, max_prefix: usize) -> Vec<PathVector> {
        let n = self.adjacency.size() as u8;
        let mut out = Vec::new();
        for prefix in admissible_paths(&self.adjacency, max_prefix.min(self.level)) {
            for tail in 1..=n {
                if self.is_canonical(&prefix, tail) {
                    out.push(PathVector { prefix: prefix.clone(), tail });
                }
            }
        }
        out.sort();
        out
    }

    pub fn basis(&self) -> Vec<PathVector> {
        self.basis_up_to(self.level)
    }

    pub fn dimension(&self) -> usize {
        self.basis().len()
    }

    /// A uniformly chosen prefix length, then a random canonical vector with
    /// that prefix length.
    pub fn random_vector<R: Rng>(&self, rng: &mut R) -> PathVector {
        let n = self.adjacency.size() as u8;
        loop {
            let len = rng.random_range(0..=self.level);
            let mut prefix: PathWord = Vec::with_capacity(len);
            for _ in 0..len {
                let choices: Vec<u8> = match prefix.last() {
                    None => (1..=n).collect(),
                    Some(&l) => self.adjacency.successors(l).collect(),
                };
                prefix.push(choices[rng.random_range(0..choices.len())]);
            }
            let tails: Vec<u8> = (1..=n).filter(|&j| self.is_canonical(&prefix, j)).collect();
            if !tails.is_empty() {
                let tail = tails[rng.random_range(0..tails.len())];
                return PathVector { prefix, tail };
            }
        }
    }

    /// `S_l` for `l > 0`, `S_l*` for `l < 0`, on one basis vector.
    pub fn apply_letter(&self, l: i32, v: &PathVector) -> Option<PathVector> {
        let i = l.unsigned_abs() as u8;
        if l > 0 {
            if !self.adjacency.get(i, v.first_letter()) {
                return None;
            }
            if v.prefix.is_empty() && self.succ(i) == v.tail {
                return Some(PathVector { prefix: Vec::new(), tail: i });
            }
            if v.prefix.len() + 1 > self.level {
                return None;
            }
            let mut prefix = Vec::with_capacity(v.prefix.len() + 1);
            prefix.push(i);
            prefix.extend_from_slice(&v.prefix);
            Some(PathVector { prefix, tail: v.tail })
        } else {
            if v.first_letter() != i {
                return None;
            }
            if v.prefix.is_empty() {
                Some(PathVector { prefix: Vec::new(), tail: self.succ(v.tail) })
            } else {
                Some(PathVector { prefix: v.prefix[1..].to_vec(), tail: v.tail })
            }
        }
    }

    /// A letter product, rightmost letter first.
    pub fn apply_word(&self, letters: &[i32], v: &PathVector) -> Option<PathVector> {
        letters.iter().rev().try_fold(v.clone(), |w, &l| self.apply_letter(l, &w))
    }

    pub fn apply_expr(&self, expr: &WordExpr, v: &PathVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (c, letters) in &expr.terms {
            if let Some(w) = self.apply_word(letters, v) {
                add_into(&mut out, w, *c);
            }
        }
        out
    }

    /// Letters of `s_mu p_j s_nu*`, with `p_j = S_j S_j*`.
    pub fn monomial_letters(m: &CkMonomial) -> Vec<i32> {
        let mut letters: Vec<i32> = m.mu.iter().map(|&x| x as i32).collect();
        letters.push(m.vertex as i32);
        letters.push(-(m.vertex as i32));
        letters.extend(m.nu.iter().rev().map(|&x| -(x as i32)));
        letters
    }

    /// Image of a normal-form element on a basis vector.
    pub fn apply_element(&self, x: &CkElement, v: &PathVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (m, c) in x.terms() {
            if let Some(w) = self.apply_word(&Self::monomial_letters(m), v) {
                add_into(&mut out, w, *c);
            }
        }
        out
    }

    /// Whether the identity holds on `v`.
    pub fn holds_on(&self, id: &Identity, v: &PathVector) -> bool {
        self.apply_expr(&id.lhs, v) == self.apply_expr(&id.rhs, v)
    }

    /// Vectors on which an identity is meaningful: identities that depend on
    /// the source relation are restricted to the interior, where no
    /// intermediate prefix reaches the truncation.
    pub fn admits(&self, id: &Identity, v: &PathVector) -> bool {
        !id.family.needs_source_relation() || v.prefix.len() + id.max_len() <= self.level
    }

    /// Checks every identity on all basis vectors with prefix length at most
    /// 2 and on `samples` random vectors drawn from `seed`, skipping the
    /// vectors an identity does not admit.
    pub fn oracle_check(&self, label: impl Into<String>, ids: &[Identity], samples: usize, seed: u64) -> CheckReport {
        let mut vectors = self.basis_up_to(2.min(self.level));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        vectors.extend((0..samples).map(|_| self.random_vector(&mut rng)));
        let failures = ids
            .par_iter()
            .filter_map(|id| {
                let bad = vectors.iter().find(|v| self.admits(id, v) && !self.holds_on(id, v))?;
                Some(format!("{} on {:?}.{}", id.label, bad.prefix, bad.tail))
            })
            .collect();
        CheckReport { label: label.into(), instances: ids.len(), failures }
    }

    /// Dense matrix of a normal-form element on the vectors with prefix
    /// length `<= max_prefix` (a compression of the full image).
    pub fn dense(&self, x: &CkElement, max_prefix: usize) -> DMatrix<Complex64> {
        let basis = self.basis_up_to(max_prefix);
        let index: HashMap<&PathVector, usize> = basis.iter().enumerate().map(|(k, v)| (v, k)).collect();
        let mut m = DMatrix::zeros(basis.len(), basis.len());
        for (col, v) in basis.iter().enumerate() {
            for (w, c) in self.apply_element(x, v) {
                if let Some(&row) = index.get(&w) {
                    m[(row, col)] += to_c64(&c);
                }
            }
        }
        m
    }

    /// Lower estimate of the operator norm of `x` from power iteration on
    /// `x* x` compressed to vectors with prefix `<= L - margin`.
    pub fn norm_estimate(&self, x: &CkElement, margin: usize, iterations: usize) -> f64 {
        let domain = self.basis_up_to(self.level.saturating_sub(margin));
        if domain.is_empty() || x.is_zero() {
            return 0.0;
        }
        let xa = x.adjoint();
        let inside = self.level.saturating_sub(margin);
        let apply = |y: &CkElement, vec: &HashMap<PathVector, Complex64>| {
            let mut out: HashMap<PathVector, Complex64> = HashMap::new();
            for (v, a) in vec {
                for (w, c) in self.apply_element(y, v) {
                    *out.entry(w).or_default() += to_c64(&c) * a;
                }
            }
            out
        };
        let norm = |vec: &HashMap<PathVector, Complex64>| vec.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut v: HashMap<PathVector, Complex64> = domain
            .iter()
            .enumerate()
            .map(|(k, p)| (p.clone(), Complex64::new(1.0 + (k % 7) as f64 * 0.1, 0.0)))
            .collect();
        let mut estimate = 0.0;
        for _ in 0..iterations {
            let nv = norm(&v);
            if nv == 0.0 {
                break;
            }
            v.values_mut().for_each(|c| *c /= nv);
            let xv = apply(x, &v);
            estimate = norm(&xv);
            let mut back = apply(&xa, &xv);
            back.retain(|p, _| p.prefix.len() <= inside);
            v = back;
        }
        estimate
    }

    /// Rank of the images of `monos` on the full truncated space, computed
    /// exactly. Each image is the 0/1 set of basis transitions it induces.
    pub fn monomial_rank(&self, monos: &[CkMonomial]) -> usize {
        let basis = self.basis();
        let index: HashMap<&PathVector, usize> = basis.iter().enumerate().map(|(k, v)| (v, k)).collect();
        let dim = basis.len();
        let rows: Vec<BTreeMap<usize, Scalar>> = monos
            .iter()
            .map(|m| {
                let letters = Self::monomial_letters(m);
                basis
                    .iter()
                    .enumerate()
                    .filter_map(|(col, v)| {
                        self.apply_word(&letters, v).map(|w| (index[&w] * dim + col, Scalar::one()))
                    })
                    .collect()
            })
            .collect();
        exact_rank(rows)
    }
}

fn add_into(out: &mut SparseVector, w: PathVector, c: Scalar) {
    use std::collections::btree_map::Entry;
    match out.entry(w) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
    }
}

/// Exact rank of sparse rows by Gaussian elimination.
pub fn exact_rank(rows: Vec<BTreeMap<usize, Scalar>>) -> usize {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
    for mut row in rows {
        loop {
            row.retain(|_, v| !v.is_zero());
            let Some((&lead, &c)) = row.iter().next() else { break };
            match pivots.get(&lead) {
                Some(p) => {
                    let f = c / p[&lead];
                    for (&k, &v) in p {
                        *row.entry(k).or_insert_with(Scalar::zero) -= f * v;
                    }
                }
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ck::algebra::CkAlgebra;
    use crate::ck::monomial::enumerate_monomials;
    use crate::ck::scalar::integer;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rep(name: &str, level: usize) -> TruncatedPathRep {
        TruncatedPathRep::new(Arc::new(AdjacencyMatrix::preset(name).unwrap()), level).unwrap()
    }

    /// Counts canonical pairs directly: prefix `mu` of length `k` and tail
    /// `j` with `a(last mu, j) = 1` and `j` not the least successor.
    fn dimension_oracle(a: &AdjacencyMatrix, level: usize) -> usize {
        let n = a.size() as u8;
        let mut total = n as usize;
        for mu in admissible_paths(a, level).into_iter().filter(|p| !p.is_empty()) {
            let l = *mu.last().unwrap();
            let succs: Vec<u8> = (1..=n).filter(|&j| a.get(l, j)).collect();
            total += succs.len() - 1;
        }
        total
    }

    #[test]
    fn dimensions() {
        assert!(TruncatedPathRep::new(Arc::new(AdjacencyMatrix::all_ones(2)), 0).is_err());
        // allones2, L=2: 2 tails, 2 one-letter prefixes, 4 two-letter prefixes
        assert_eq!(rep("allones2", 2).dimension(), 8);
        for name in AdjacencyMatrix::PRESETS {
            for level in 1..=4 {
                let r = rep(name, level);
                assert_eq!(r.dimension(), dimension_oracle(r.adjacency(), level), "{name} L={level}");
            }
        }
    }

    #[test]
    fn range_relations_exact_and_source_defect_at_boundary() {
        for name in AdjacencyMatrix::PRESETS {
            let r = rep(name, 3);
            let n = r.adjacency().size() as i32;
            for v in r.basis() {
                // sum_i S_i S_i* = 1
                let hits: Vec<PathVector> = (1..=n).filter_map(|i| r.apply_word(&[i, -i], &v)).collect();
                assert_eq!(hits, vec![v.clone()]);
                for i in 1..=n {
                    // S_i S_i* S_i = S_i
                    assert_eq!(r.apply_word(&[i, -i, i], &v), r.apply_letter(i, &v));
                    for j in 1..=n {
                        if i != j {
                            assert!(r.apply_word(&[-i, j], &v).is_none());
                        }
                    }
                    let lhs = r.apply_word(&[-i, i], &v);
                    let expected = r.adjacency().get(i as u8, v.first_letter()).then(|| v.clone());
                    if lhs != expected {
                        assert_eq!(v.prefix.len(), r.level(), "{name} {v:?}");
                    }
                }
            }
            assert!(r.basis().iter().any(|v| {
                let i = v.first_letter() as i32;
                r.apply_word(&[-i, i], v).is_none() && r.adjacency().get(i as u8, i as u8)
            }) || name == "fib2");
        }
    }

    #[test]
    fn expectation_of_square_is_positive() {
        let alg = CkAlgebra::preset("allones2").unwrap();
        let r = TruncatedPathRep::new(alg.adjacency().clone(), 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let monos: Vec<CkMonomial> = enumerate_monomials(alg.adjacency(), 1);
        for _ in 0..10 {
            let mut x = alg.zero();
            for _ in 0..4 {
                let m = monos[rng.random_range(0..monos.len())].clone();
                let c = integer(rng.random_range(-3..=3));
                x = x.add(&alg.monomial(m).unwrap().scale(c)).unwrap();
            }
            let y = x.adjoint().mul(&x).unwrap().expectation();
            let dense = r.dense(&y, 6 - 2);
            let h = (&dense + dense.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = h.map(|c| c.re).symmetric_eigenvalues();
            assert!(eig.min() >= -1e-10, "{eig}");
        }
    }

    #[test]
    fn normal_form_matches_word_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in AdjacencyMatrix::PRESETS {
            let alg = CkAlgebra::preset(name).unwrap();
            let n = alg.rank() as i32;
            for _ in 0..40 {
                let len = rng.random_range(0..=6);
                let letters: Vec<i32> = (0..len)
                    .map(|_| {
                        let g = rng.random_range(1..=n);
                        if rng.random_bool(0.5) { g } else { -g }
                    })
                    .collect();
                let expr = WordExpr::letters(letters.clone());
                let x = alg.eval(&expr).unwrap();
                let level = 2 * len + 1;
                let r = TruncatedPathRep::new(alg.adjacency().clone(), level).unwrap();
                let interior = r.basis_up_to(level - len);
                let mut word_zero = true;
                for v in &interior {
                    let from_word = r.apply_expr(&expr, v);
                    word_zero &= from_word.is_empty();
                    assert_eq!(r.apply_element(&x, v), from_word, "{name} {letters:?} on {v:?}");
                }
                assert_eq!(x.is_zero(), word_zero, "{name} {letters:?}");
            }
        }
    }

    #[test]
    fn irreducible_monomials_are_independent() {
        let a = AdjacencyMatrix::all_ones(2);
        let r = TruncatedPathRep::new(Arc::new(a.clone()), 5).unwrap();
        let all = enumerate_monomials(&a, 2);
        let irreducible: Vec<CkMonomial> = all.iter().filter(|m| !m.is_reducible(&a)).cloned().collect();
        assert_eq!(r.monomial_rank(&irreducible), irreducible.len());
        assert_eq!(r.monomial_rank(&all), irreducible.len());
    }

    #[test]
    fn exact_rank_basics() {
        let row = |v: &[(usize, i64)]| v.iter().map(|&(k, c)| (k, integer(c))).collect();
        assert_eq!(exact_rank(vec![row(&[(0, 1), (1, 1)]), row(&[(0, 2), (1, 2)])]), 1);
        assert_eq!(exact_rank(vec![row(&[(0, 1)]), row(&[(1, 1)]), row(&[(0, 1), (1, -1)])]), 2);
        assert_eq!(exact_rank(vec![]), 0);
    }

    #[test]
    fn norm_estimate_of_projection() {
        let alg = CkAlgebra::preset("allones2").unwrap();
        let r = TruncatedPathRep::new(alg.adjacency().clone(), 6).unwrap();
        let p = alg.projection(1);
        assert!((r.norm_estimate(&p, 2, 20) - 1.0).abs() < 1e-9);
        assert!((r.norm_estimate(&p.scale(integer(3)), 2, 20) - 3.0).abs() < 1e-9);
        assert_eq!(r.norm_estimate(&alg.zero(), 2, 20), 0.0);
    }
}
