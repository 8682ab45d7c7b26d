//! Exact verification of the partial-representation identities, the
//! relation generators and the decomposition lemmas in the rewriting engine.

use rayon::prelude::*;
use serde::Serialize;

use super::algebra::CkAlgebra;
use super::element::CkElement;
use super::identity::{Family, Identity, WordExpr};
use super::scalar::{integer, Scalar};
use super::CkError;
use crate::group::{enumerate_positive, FreeWord, PositiveWord};

/// Outcome of a family of exact checks.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub label: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(label: impl Into<String>, parts: Vec<CheckReport>) -> CheckReport {
        CheckReport {
            label: label.into(),
            instances: parts.iter().map(|p| p.instances).sum(),
            failures: parts.into_iter().flat_map(|p| p.failures).collect(),
        }
    }
}

impl CkAlgebra {
    /// Evaluates a letter expression by left-to-right multiplication.
    pub fn eval(&self, expr: &WordExpr) -> Result<CkElement, CkError> {
        let mut acc = self.zero();
        for (c, letters) in &expr.terms {
            let mut x = self.unit();
            for &l in letters {
                if x.is_zero() {
                    break;
                }
                x = x.mul(&self.letter(l)?)?;
            }
            acc = acc.add(&x.scale(*c))?;
        }
        Ok(acc)
    }

    pub fn holds(&self, id: &Identity) -> Result<bool, CkError> {
        Ok(self.eval(&id.lhs)? == self.eval(&id.rhs)?)
    }

    /// Checks every identity, in parallel, collecting failing labels.
    pub fn check_all(&self, label: impl Into<String>, ids: &[Identity]) -> CheckReport {
        let failures = ids
            .par_iter()
            .filter_map(|id| match self.holds(id) {
                Ok(true) => None,
                Ok(false) => Some(id.label.clone()),
                Err(e) => Some(format!("{}: {e}", id.label)),
            })
            .collect();
        CheckReport { label: label.into(), instances: ids.len(), failures }
    }

    pub fn verify_pr3(&self, t: &FreeWord, r: &FreeWord) -> Result<bool, CkError> {
        self.holds(&pr3_identity(t, r)?)
    }

    /// `e(tr) e(t) = e(tr)`; only defined when `|tr| = |t| + |r|`.
    pub fn verify_semisat(&self, t: &FreeWord, r: &FreeWord) -> Result<bool, CkError> {
        if !t.is_dot(r)? {
            return Err(CkError::NotDot { t: t.to_string(), r: r.to_string() });
        }
        for id in semisat_identities(t, r)? {
            if !self.holds(&id)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn verify_bsigma_identities(&self, t: &FreeWord, r: &FreeWord) -> Result<bool, CkError> {
        for id in fiber_identities(t, r)? {
            if !self.holds(&id)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn lemma_soma(&self, k: usize) -> Result<bool, CkError> {
        self.holds(&partition_identity(self.rank(), k))
    }

    pub fn lemma_main(&self, t: &FreeWord, k: usize) -> Result<bool, CkError> {
        self.holds(&decomposition_identity(t, k)?)
    }

    /// The claims behind the partial-representation theorem, for positive
    /// words up to `depth` and arbitrary words up to `depth` for the
    /// commutation of range projections.
    pub fn verify_claims(&self, depth: usize) -> Result<(Vec<Identity>, CheckReport), CkError> {
        let (ids, structural) = self.claim_identities(depth)?;
        let exact = self.check_all("claims", &ids);
        let report = CheckReport::merge(
            format!("claims depth={depth}"),
            vec![
                exact,
                CheckReport { label: "structure".into(), instances: 0, failures: structural },
            ],
        );
        Ok((ids, report))
    }

    /// Builds the claim identities. Where a claim asserts a dichotomy the
    /// engine picks the branch; any outcome outside the allowed branches is
    /// returned as a structural violation.
    pub fn claim_identities(&self, depth: usize) -> Result<(Vec<Identity>, Vec<String>), CkError> {
        let n = self.rank();
        let positives: Vec<PositiveWord> = (0..=depth).flat_map(|k| enumerate_positive(n, k)).collect();
        let free = |p: &PositiveWord| p.to_free(n);
        let mut ids = Vec::new();
        let mut violations = Vec::new();

        for alpha in &positives {
            for j in 1..=n as u32 {
                let mut ag = alpha.clone();
                ag.0.push(j);
                let agw = free(&ag)?;
                let gj = FreeWord::generator(n, j as usize)?;
                let lhs = WordExpr::rep(&agw.inverse()).then(&WordExpr::rep(&agw));
                let source = WordExpr::rep(&gj.inverse()).then(&WordExpr::rep(&gj));
                let value = self.eval(&lhs)?;
                let label = format!("source projection alpha={} j={j}", agw);
                if value.is_zero() {
                    ids.push(Identity::new(Family::SourceProjection, label, lhs, WordExpr::zero()));
                } else if value == self.eval(&source)? {
                    ids.push(Identity::new(Family::SourceProjection, label, lhs, source));
                } else {
                    violations.push(format!("{label}: neither 0 nor S(g_j)*S(g_j)"));
                }
            }
            let a = free(alpha)?;
            let s = WordExpr::rep(&a);
            let lhs = WordExpr::product(&[s.clone(), WordExpr::rep(&a.inverse()), s.clone()]);
            ids.push(Identity::new(Family::PartialIsometry, format!("partial isometry {a}"), lhs, s));
        }

        for alpha in &positives {
            for beta in &positives {
                let (a, b) = (free(alpha)?, free(beta)?);
                let lhs = WordExpr::rep(&a.inverse()).then(&WordExpr::rep(&b));
                let nonzero = !self.eval(&lhs)?.is_zero();
                let label = format!("S({a})*S({b})");
                if nonzero {
                    if alpha.len() == beta.len() && alpha != beta {
                        violations.push(format!("{label} nonzero for distinct words of equal length"));
                    }
                    let q = a.inverse().multiply(&b)?;
                    if !q.is_positive() && !q.inverse().is_positive() {
                        violations.push(format!("{label} nonzero but alpha^-1 beta = {q} not in P u P^-1"));
                    }
                } else {
                    ids.push(Identity::new(Family::OrthogonalPaths, label, lhs, WordExpr::zero()));
                }
            }
        }

        let words = FreeWord::enumerate_up_to(n, depth);
        for t in &words {
            for r in &words {
                if t >= r {
                    continue;
                }
                let (et, er) = (WordExpr::range(t), WordExpr::range(r));
                ids.push(Identity::new(
                    Family::CommutingRanges,
                    format!("[e({t}), e({r})]"),
                    et.then(&er),
                    er.then(&et),
                ));
            }
        }
        Ok((ids, violations))
    }

    /// Checks that the four families of generators of the ideal `J` vanish.
    pub fn verify_relation_generators(&self, depth: usize) -> Result<CheckReport, CkError> {
        let ids = relation_identities(self, depth)?;
        Ok(self.check_all(format!("relation generators depth={depth}"), &ids))
    }

    /// Self-adjointness and idempotence of `e(t)` for `|t| <= depth`.
    pub fn verify_range_projections(&self, depth: usize) -> Result<CheckReport, CkError> {
        let mut failures = Vec::new();
        let words = FreeWord::enumerate_up_to(self.rank(), depth);
        for t in &words {
            let e = self.range_projection(t)?;
            if e.adjoint() != e || e.mul(&e)? != e {
                failures.push(format!("e({t})"));
            }
        }
        Ok(CheckReport { label: format!("range projections depth={depth}"), instances: words.len(), failures })
    }
}

pub fn pr3_identity(t: &FreeWord, r: &FreeWord) -> Result<Identity, CkError> {
    let tr = t.multiply(r)?;
    let rinv = WordExpr::rep(&r.inverse());
    Ok(Identity::new(
        Family::PartialRepresentation,
        format!("PR t={t} r={r}"),
        WordExpr::product(&[WordExpr::rep(t), WordExpr::rep(r), rinv.clone()]),
        WordExpr::rep(&tr).then(&rinv),
    ))
}

/// All pairs with `|t| + |r| <= max_total`.
pub fn pr3_family(rank: usize, max_total: usize) -> Result<Vec<Identity>, CkError> {
    let mut out = Vec::new();
    for lt in 0..=max_total {
        let ts = FreeWord::enumerate_length(rank, lt);
        for lr in 0..=max_total - lt {
            let rs = FreeWord::enumerate_length(rank, lr);
            for t in &ts {
                for r in &rs {
                    out.push(pr3_identity(t, r)?);
                }
            }
        }
    }
    Ok(out)
}

/// Pairs `(t, r)` with `|tr| = |t| + |r|` and `|t| + |r| <= max_total`.
pub fn dot_pairs(rank: usize, max_total: usize) -> Vec<(FreeWord, FreeWord)> {
    let words = FreeWord::enumerate_up_to(rank, max_total);
    let mut out = Vec::new();
    for t in &words {
        for r in &words {
            if t.len() + r.len() <= max_total && t.is_dot(r).expect("same rank") {
                out.push((t.clone(), r.clone()));
            }
        }
    }
    out
}

pub fn semisat_identities(t: &FreeWord, r: &FreeWord) -> Result<Vec<Identity>, CkError> {
    let tr = t.multiply(r)?;
    let etr = WordExpr::range(&tr);
    Ok(vec![
        Identity::new(
            Family::SemiSaturation,
            format!("S({t}.{r}) = S(t)S(r)"),
            WordExpr::rep(&tr),
            WordExpr::rep(t).then(&WordExpr::rep(r)),
        ),
        Identity::new(
            Family::SemiSaturation,
            format!("e({tr}) <= e({t})"),
            etr.then(&WordExpr::range(t)),
            etr,
        ),
    ])
}

pub fn semisat_family(rank: usize, max_total: usize) -> Result<Vec<Identity>, CkError> {
    let mut out = Vec::new();
    for (t, r) in dot_pairs(rank, max_total) {
        out.extend(semisat_identities(&t, &r)?);
    }
    Ok(out)
}

pub fn fiber_identities(t: &FreeWord, r: &FreeWord) -> Result<Vec<Identity>, CkError> {
    let tr = t.multiply(r)?;
    let st = WordExpr::rep(t);
    Ok(vec![
        Identity::new(
            Family::FiberIdentity,
            format!("S({t})e({r}) = e(tr)S(t)"),
            st.then(&WordExpr::range(r)),
            WordExpr::range(&tr).then(&st),
        ),
        Identity::new(
            Family::FiberIdentity,
            format!("S({t})S({r}) = e(t)S(tr)"),
            st.then(&WordExpr::rep(r)),
            WordExpr::range(t).then(&WordExpr::rep(&tr)),
        ),
    ])
}

/// All pairs with `|t|, |r| <= max_len`.
pub fn fiber_family(rank: usize, max_len: usize) -> Result<Vec<Identity>, CkError> {
    let words = FreeWord::enumerate_up_to(rank, max_len);
    let mut out = Vec::new();
    for t in &words {
        for r in &words {
            out.extend(fiber_identities(t, r)?);
        }
    }
    Ok(out)
}

pub fn partition_identity(rank: usize, k: usize) -> Identity {
    let sum = WordExpr::sum(
        enumerate_positive(rank, k)
            .iter()
            .map(|a| WordExpr::range(&a.to_free(rank).expect("letters within rank"))),
    );
    Identity::new(Family::PartitionOfUnity, format!("partition of unity k={k}"), sum, WordExpr::one())
}

pub fn decomposition_identity(t: &FreeWord, k: usize) -> Result<Identity, CkError> {
    let rank = t.rank();
    let st = WordExpr::rep(t);
    let mut sum = WordExpr::zero();
    for alpha in enumerate_positive(rank, k) {
        let a = alpha.to_free(rank)?;
        let ta = t.multiply(&a)?;
        sum = sum.plus(WordExpr::product(&[WordExpr::range(&ta), st.clone(), WordExpr::range(&a)]));
    }
    Ok(Identity::new(Family::Decomposition, format!("decomposition t={t} k={k}"), st, sum))
}

/// Words `t` in `P P^-1` with `|t| <= max_len`, and `k <= k_max`.
pub fn decomposition_family(rank: usize, max_len: usize, k_max: usize) -> Result<Vec<Identity>, CkError> {
    let mut out = Vec::new();
    for t in FreeWord::enumerate_up_to(rank, max_len) {
        if t.factor_positive().is_none() {
            continue;
        }
        for k in 0..=k_max {
            out.push(decomposition_identity(&t, k)?);
        }
    }
    Ok(out)
}

pub fn relation_identities(alg: &CkAlgebra, depth: usize) -> Result<Vec<Identity>, CkError> {
    let n = alg.rank();
    let g = |i: usize| FreeWord::generator(n, i).expect("index within rank");
    let mut ids = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                ids.push(Identity::new(
                    Family::RelationOrthogonal,
                    format!("e(g{i})e(g{j}) = 0"),
                    WordExpr::range(&g(i)).then(&WordExpr::range(&g(j))),
                    WordExpr::zero(),
                ));
            }
        }
    }
    let sum = WordExpr::sum((1..=n).map(|i| WordExpr::range(&g(i))));
    ids.push(Identity::new(
        Family::RelationPartition,
        "1 - sum_i e(g_i) = 0",
        WordExpr::one().minus(sum),
        WordExpr::zero(),
    ));
    for i in 1..=n {
        let weighted = WordExpr::sum(
            alg.adjacency()
                .successors(i as u8)
                .map(|j| WordExpr::range(&g(j as usize)).scale(integer(1))),
        );
        ids.push(Identity::new(
            Family::RelationSource,
            format!("e(g{i}^-1) - sum_j a_{i}j e(g_j) = 0"),
            WordExpr::range(&g(i).inverse()).minus(weighted),
            WordExpr::zero(),
        ));
    }
    for (t, r) in dot_pairs(n, depth) {
        let tr = t.multiply(&r)?;
        let etr = WordExpr::range(&tr);
        ids.push(Identity::new(
            Family::RelationSemiSaturated,
            format!("e({tr})e({t}) - e(tr) = 0"),
            etr.then(&WordExpr::range(&t)).minus(etr),
            WordExpr::zero(),
        ));
    }
    Ok(ids)
}

/// Scalar multiple helper used by callers that build expressions by hand.
pub fn scaled(expr: WordExpr, c: Scalar) -> WordExpr {
    expr.scale(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ck::AdjacencyMatrix;
    use crate::group::parse_word;

    fn w(s: &str, n: usize) -> FreeWord {
        parse_word(s, n).unwrap()
    }

    #[test]
    fn pr3_examples() {
        let alg = CkAlgebra::preset("allones2").unwrap();
        let e = FreeWord::identity(2);
        assert!(alg.verify_pr3(&e, &w("g1 g2'", 2)).unwrap());
        assert!(alg.verify_pr3(&w("g1", 2), &w("g1'", 2)).unwrap());
    }

    #[test]
    fn pr3_over_all_small_matrices() {
        for n in 1..=3 {
            let ids = pr3_family(n, if n == 3 { 3 } else { 4 }).unwrap();
            for a in AdjacencyMatrix::enumerate(n) {
                let alg = CkAlgebra::new(a.clone());
                let report = alg.check_all("pr3", &ids);
                assert!(report.passed(), "{a:?}: {:?}", &report.failures[..report.failures.len().min(5)]);
            }
        }
    }

    #[test]
    fn semisat_examples() {
        let alg = CkAlgebra::preset("allones2").unwrap();
        assert!(alg.verify_semisat(&FreeWord::identity(2), &w("g2'", 2)).unwrap());
        assert!(alg.verify_semisat(&w("g1", 2), &w("g2", 2)).unwrap());
        assert!(matches!(alg.verify_semisat(&w("g1", 2), &w("g1'", 2)), Err(CkError::NotDot { .. })));
        for name in ["allones2", "fib2"] {
            let alg = CkAlgebra::preset(name).unwrap();
            let report = alg.check_all("semisat", &semisat_family(2, 5).unwrap());
            assert!(report.passed(), "{name}: {:?}", report.failures);
        }
    }

    #[test]
    fn fiber_identity_examples() {
        let alg = CkAlgebra::preset("allones2").unwrap();
        assert!(alg.verify_bsigma_identities(&FreeWord::identity(2), &w("g1 g2", 2)).unwrap());
        assert!(alg.verify_bsigma_identities(&w("g1", 2), &w("g1'", 2)).unwrap());
        let fib = CkAlgebra::preset("fib2").unwrap();
        let report = fib.check_all("fiber", &fiber_family(2, 2).unwrap());
        assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn partition_and_decomposition() {
        let alg = CkAlgebra::preset("allones2").unwrap();
        assert!(alg.lemma_soma(0).unwrap());
        assert!(alg.lemma_soma(2).unwrap());
        assert!(alg.lemma_main(&w("g1 g2'", 2), 0).unwrap());
        assert!(alg.lemma_main(&w("g1 g2'", 2), 2).unwrap());
        for a in AdjacencyMatrix::enumerate(2).into_iter().chain(AdjacencyMatrix::enumerate(3).into_iter().step_by(17)) {
            let alg = CkAlgebra::new(a);
            for k in 0..=3 {
                assert!(alg.lemma_soma(k).unwrap());
            }
            for id in decomposition_family(alg.rank(), 2, 2).unwrap() {
                assert!(alg.holds(&id).unwrap(), "{}", id.label);
            }
        }
    }

    #[test]
    fn claims_hold_on_presets() {
        for name in ["allones2", "fib2"] {
            let alg = CkAlgebra::preset(name).unwrap();
            let (_, report) = alg.verify_claims(3).unwrap();
            assert!(report.passed(), "{name}: {:?}", report.failures);
        }
        let alg = CkAlgebra::preset("fib2").unwrap();
        let (ids, report) = alg.verify_claims(0).unwrap();
        assert!(report.passed());
        assert!(!ids.is_empty());
    }

    #[test]
    fn relation_generators_vanish() {
        for name in ["allones2", "fib2", "allones3"] {
            let alg = CkAlgebra::preset(name).unwrap();
            let report = alg.verify_relation_generators(4).unwrap();
            assert!(report.passed(), "{name}: {:?}", report.failures);
        }
        let alg = CkAlgebra::preset("fib2").unwrap();
        // e(g_1^-1) = q_1 = p_1 + p_2, e(g_2^-1) = q_2 = p_1
        let e2inv = alg.range_projection(&w("g2'", 2)).unwrap();
        assert_eq!(e2inv, alg.projection(1));
    }

    #[test]
    fn range_projections_are_projections() {
        let alg = CkAlgebra::preset("fib2").unwrap();
        assert!(alg.verify_range_projections(4).unwrap().passed());
    }

    #[test]
    fn violated_identity_is_reported() {
        let alg = CkAlgebra::preset("allones2").unwrap();
        let bogus = Identity::new(
            Family::PartitionOfUnity,
            "bogus",
            WordExpr::range(&w("g1", 2)),
            WordExpr::one(),
        );
        let report = alg.check_all("bogus", &[bogus]);
        assert_eq!(report.failures, vec!["bogus".to_string()]);
    }
}
