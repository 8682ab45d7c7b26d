use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use super::{ck_net, psi_apply_by_target, psi_terms, ApproxError, CkCarrier, GradedCarrier};
use crate::ck::scalar::{as_real, from_ratio, to_f64};
use crate::ck::{CkElement, TruncatedPathRep};
use crate::group::FreeWord;

/// One line of the convergence table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub m: usize,
    pub main_coeff_num: i64,
    pub main_coeff_den: i64,
    pub paper_coeff: f64,
    pub tail_norm_estimate: f64,
    pub tail_bound: f64,
    pub pass: bool,
}

/// The part of `Φ_m(S(t))` coming from `r` of length `k`.
#[derive(Clone, Debug, Serialize)]
pub struct KSlice {
    pub k: usize,
    /// `c` with slice `= c · S(t)`, when it is such a multiple.
    pub multiple: Option<String>,
    pub in_main_range: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub row: ConvergenceRow,
    pub slices: Vec<KSlice>,
    /// Every slice in the main range equals `S(t)/m`.
    pub slices_exact: bool,
    /// The main partial sum equals the predicted multiple of `S(t)`.
    pub main_exact: bool,
    /// Summing over `r` and over `t r` give the same `Φ_m(S(t))`.
    pub cross_check: bool,
    pub tail: String,
}

/// `c` with `x = c · y` for a real rational `c`, if any.
fn rational_multiple(x: &CkElement, y: &CkElement) -> Option<Rational64> {
    let (mono, coeff) = y.terms().next()?;
    let c = x.coefficient(mono) / coeff;
    let c = as_real(&c)?;
    (y.scale(from_ratio(c)) == *x).then_some(c)
}

/// Predicted main coefficient `(m - |t| - |β| + 1)/m`, clamped at zero
/// when the range `[|β|, m - |t|]` is empty.
fn predicted(m: usize, t: usize, beta: usize) -> Rational64 {
    let num = (m + 1).saturating_sub(t + beta) as i64;
    Rational64::new(num, m as i64)
}

/// Computes `Φ_m(S(t))` exactly for each `m`, splits it by `|r|`, and
/// compares the slices in `[|β|, m - |t|]` with `S(t)/m`. The remainder is
/// the tail, whose norm is estimated on the path representation.
pub fn ck_convergence_experiment(
    carrier: &CkCarrier,
    t: &FreeWord,
    ms: impl IntoIterator<Item = usize>,
) -> Result<Vec<ConvergenceReport>, ApproxError> {
    let alg = &carrier.algebra;
    let (_, beta) = t.factor_positive().ok_or_else(|| ApproxError::Vacuous(t.to_string()))?;
    let s = alg.partial_rep(t)?;
    if s.is_zero() {
        return Err(ApproxError::Vacuous(t.to_string()));
    }
    let (tl, bl) = (t.len(), beta.len());
    let mut out = Vec::new();
    for m in ms {
        if m < tl.max(1) {
            return Err(ApproxError::IndexTooSmall { value: m, min: tl.max(1) });
        }
        let a = ck_net(carrier, m)?;
        let mut by_k: BTreeMap<usize, CkElement> = BTreeMap::new();
        for (r, term) in psi_terms(carrier, &a, &s, t)? {
            let slot = by_k.entry(r.len()).or_insert_with(|| alg.zero());
            *slot = slot.add(&term)?;
        }
        let total = carrier.sum(by_k.values().cloned())?;
        let cross_check = total == psi_apply_by_target(carrier, &a, &s, t)?;

        let in_main = |k: usize| k >= bl && k + tl <= m;
        let one_over_m = Rational64::new(1, m as i64);
        let mut slices_exact = true;
        let mut main = alg.zero();
        let mut slices = Vec::new();
        for k in 0..=m {
            let slice = by_k.get(&k).cloned().unwrap_or_else(|| alg.zero());
            let multiple = if slice.is_zero() { Some(Rational64::zero()) } else { rational_multiple(&slice, &s) };
            if in_main(k) {
                slices_exact &= multiple == Some(one_over_m);
                main = main.add(&slice)?;
            }
            slices.push(KSlice { k, multiple: multiple.map(|c| c.to_string()), in_main_range: in_main(k) });
        }
        let coefficient = if main.is_zero() { Some(Rational64::zero()) } else { rational_multiple(&main, &s) };
        let expected = predicted(m, tl, bl);
        let main_exact = coefficient == Some(expected);
        let (num, den) = match coefficient {
            Some(c) if (c * Rational64::from_integer(m as i64)).is_integer() => {
                ((c * Rational64::from_integer(m as i64)).to_integer(), m as i64)
            }
            Some(c) => (*c.numer(), *c.denom()),
            None => (0, 0),
        };

        let tail = total.sub(&main)?;
        let rep = TruncatedPathRep::new(alg.adjacency().clone(), m + tl + 2)?;
        let tail_norm = rep.norm_estimate(&tail, m + tl, 60);
        let tail_bound = tl as f64 / m as f64;
        let pass = main_exact && slices_exact && cross_check && tail_norm <= tail_bound + 0.05;
        out.push(ConvergenceReport {
            row: ConvergenceRow {
                m,
                main_coeff_num: num,
                main_coeff_den: den,
                paper_coeff: to_f64(&expected),
                tail_norm_estimate: tail_norm,
                tail_bound,
                pass,
            },
            slices,
            slices_exact,
            main_exact,
            cross_check,
            tail: tail.to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ck::CkAlgebra;
    use crate::group::parse_word;

    fn carrier() -> CkCarrier {
        CkCarrier::new(CkAlgebra::preset("allones2").unwrap())
    }

    #[test]
    fn g1_g2inv_at_m10_has_coefficient_8_over_10() {
        let c = carrier();
        let t = parse_word("g1 g2'", 2).unwrap();
        let rows = ck_convergence_experiment(&c, &t, [10]).unwrap();
        let r = &rows[0];
        assert_eq!((r.row.main_coeff_num, r.row.main_coeff_den), (8, 10));
        assert!(r.main_exact && r.slices_exact && r.cross_check);
        assert!((r.row.paper_coeff - 0.8).abs() < 1e-15);
        assert!(r.row.pass, "{r:?}");
    }

    #[test]
    fn tail_is_two_over_m_times_s() {
        // For t = g1 g2^-1 the nonzero slices outside the main range are
        // k = m - 1 and k = m, each contributing S(t)/m.
        let c = carrier();
        let t = parse_word("g1 g2'", 2).unwrap();
        let s = c.algebra.partial_rep(&t).unwrap();
        for r in ck_convergence_experiment(&c, &t, 4..=7).unwrap() {
            let m = r.row.m as i64;
            let outside: Vec<_> =
                r.slices.iter().filter(|s| !s.in_main_range && s.multiple.as_deref() != Some("0")).collect();
            assert_eq!(outside.len(), 2);
            for sl in outside {
                assert_eq!(sl.multiple.as_deref(), Some(Rational64::new(1, m).to_string().as_str()));
            }
            assert_eq!(r.tail, s.scale(from_ratio(Rational64::new(2, m))).to_string());
            assert!((r.row.tail_norm_estimate - 2.0 / m as f64).abs() < 1e-6, "{:?}", r.row);
        }
    }

    #[test]
    fn identity_degree_gives_m_plus_one_over_m() {
        let c = carrier();
        let rows = ck_convergence_experiment(&c, &FreeWord::identity(2), [3, 5]).unwrap();
        for r in rows {
            let m = r.row.m as i64;
            assert_eq!((r.row.main_coeff_num, r.row.main_coeff_den), (m + 1, m));
            assert!(r.slices.iter().all(|s| s.in_main_range));
            assert!(r.row.pass);
        }
    }

    #[test]
    fn main_coefficients_increase_with_m() {
        let c = carrier();
        let t = parse_word("g2 g1 g2'", 2).unwrap();
        let rows = ck_convergence_experiment(&c, &t, 3..=8).unwrap();
        let coeffs: Vec<Rational64> = rows.iter().map(|r| Rational64::new(r.row.main_coeff_num, r.row.main_coeff_den)).collect();
        assert!(coeffs.windows(2).all(|w| w[0] < w[1]), "{coeffs:?}");
        assert!(rows.iter().all(|r| r.row.pass));
    }

    #[test]
    fn domain_errors() {
        let c = carrier();
        let bad = parse_word("g1' g2", 2).unwrap();
        assert!(matches!(ck_convergence_experiment(&c, &bad, [5]), Err(ApproxError::Vacuous(_))));
        let t = parse_word("g1 g2'", 2).unwrap();
        assert!(matches!(ck_convergence_experiment(&c, &t, [1]), Err(ApproxError::IndexTooSmall { .. })));
        let fib = CkCarrier::new(CkAlgebra::preset("fib2").unwrap());
        let zero = parse_word("g2 g2", 2).unwrap();
        assert!(matches!(ck_convergence_experiment(&fib, &zero, [4]), Err(ApproxError::Vacuous(_))));
    }
}
