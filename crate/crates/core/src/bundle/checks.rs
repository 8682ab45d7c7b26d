//! Randomised numeric checks on the regular embedding of a bundle.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::fell::{FiniteFellBundle, ValidationReport};
use super::operator::GradedOperator;
use super::subspace::{min_hermitian_eigenvalue, op_norm, CMatrix};

/// Worst observed residual of one randomized check against its tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct NumericCheck {
    pub label: String,
    pub samples: usize,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl NumericCheck {
    fn new(label: impl Into<String>, samples: usize, worst: f64, tolerance: f64) -> Self {
        NumericCheck { label: label.into(), samples, worst, tolerance, passed: worst <= tolerance }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleReport {
    pub name: String,
    pub order: usize,
    pub dim: usize,
    pub validation: ValidationReport,
    pub checks: Vec<NumericCheck>,
}

impl BundleReport {
    pub fn passed(&self) -> bool {
        self.validation.passed() && self.checks.iter().all(|c| c.passed)
    }
}

fn sample_rng(seed: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64))
}

/// Runs `f` on `samples` independently seeded generators and keeps the
/// largest value per output slot.
fn worst_over<const K: usize, F>(samples: usize, seed: u64, f: F) -> [f64; K]
where
    F: Fn(&mut ChaCha8Rng) -> [f64; K] + Sync,
{
    (0..samples)
        .into_par_iter()
        .map(|i| f(&mut sample_rng(seed, i)))
        .reduce(|| [0.0; K], |a, b| std::array::from_fn(|k| a[k].max(b[k])))
}

/// Fourier-coefficient and expectation checks:
/// `E(x*x) = sum_t x^(t)* x^(t)`, `|x^(t)| <= |x|`, round trip, positivity
/// of `E(x*x)` and the `B_e`-bimodule property.
pub fn fourier_checks(bundle: &FiniteFellBundle, samples: usize, seed: u64) -> Vec<NumericCheck> {
    let g = bundle.group();
    let [formula, coefficient, round_trip, positivity, bimodule] = worst_over(samples, seed, |rng| {
        let x = bundle.random_element(rng);
        let px = GradedOperator::regular_embed(bundle, &x);
        let expect = px.adjoint().mul(&px).expectation(g).expect("embedded operators are equivariant");
        let mut sum = CMatrix::zeros(bundle.dim(), bundle.dim());
        let norm = px.norm();
        let mut coefficient: f64 = 0.0;
        let mut round_trip: f64 = 0.0;
        for t in g.elements() {
            let xt = px.fourier(g, t).expect("equivariant");
            sum += xt.adjoint() * &xt;
            coefficient = coefficient.max(op_norm(&xt) - norm);
            round_trip = round_trip.max((xt - x.component(t)).norm());
        }
        let a = bundle.single(g.identity(), bundle.random_unit_fiber_element(rng));
        let b = bundle.single(g.identity(), bundle.random_unit_fiber_element(rng));
        let axb = GradedOperator::regular_embed(bundle, &bundle.multiply(&bundle.multiply(&a, &x), &b));
        let lhs = axb.expectation(g).expect("equivariant");
        let rhs = a.component(g.identity()) * px.expectation(g).expect("equivariant") * b.component(g.identity());
        [
            (&expect - &sum).norm(),
            coefficient.max(0.0),
            round_trip,
            (-min_hermitian_eigenvalue(&expect)).max(0.0),
            (lhs - rhs).norm(),
        ]
    });
    vec![
        NumericCheck::new("E(x*x) = sum_t x^(t)* x^(t)", samples, formula, 1e-10),
        NumericCheck::new("|x^(t)| <= |x|", samples, coefficient, 1e-10),
        NumericCheck::new("Fourier round trip", samples, round_trip, 1e-12),
        NumericCheck::new("E(x*x) >= 0", samples, positivity, 1e-10),
        NumericCheck::new("E(a x b) = a E(x) b on B_e", samples, bimodule, 1e-10),
    ]
}

/// `|x|^2 <= |G|^2 |E(x*x)|`, and the zero element has zero image.
pub fn faithfulness_check(bundle: &FiniteFellBundle, samples: usize, seed: u64) -> Vec<NumericCheck> {
    let g = bundle.group();
    let n2 = (bundle.order() * bundle.order()) as f64;
    let [excess, vanishing] = worst_over(samples, seed, |rng| {
        let x = bundle.random_element(rng);
        let px = GradedOperator::regular_embed(bundle, &x);
        let e = op_norm(&px.adjoint().mul(&px).expectation(g).expect("equivariant"));
        let nx = px.norm();
        // a nonzero element must have nonzero E(x*x)
        let vanishing = if x.max_component_norm() > 0.0 && e == 0.0 { 1.0 } else { 0.0 };
        [(nx * nx - n2 * e).max(0.0) / nx.max(1.0).powi(2), vanishing]
    });
    let zero = GradedOperator::regular_embed(bundle, &bundle.zero_element());
    let zero_ok = zero.norm() == 0.0 && zero.adjoint().mul(&zero).expectation(g).map(|m| m.norm()).unwrap_or(1.0) == 0.0;
    vec![
        NumericCheck::new("|x|^2 <= |G|^2 |E(x*x)|", samples, excess, 1e-10),
        NumericCheck::new("E(x*x) = 0 only for x = 0", samples + 1, vanishing.max(if zero_ok { 0.0 } else { 1.0 }), 0.0),
    ]
}

/// `|π(b_t)| = |b_t|` for random single-fiber elements, relative error.
pub fn norm_preservation_check(bundle: &FiniteFellBundle, samples: usize, seed: u64) -> NumericCheck {
    let [worst] = worst_over(samples, seed, |rng| {
        let t = rng.random_range(0..bundle.order());
        let b = bundle.random_fiber_element(t, rng);
        let lhs = GradedOperator::regular_embed(bundle, &bundle.single(t, b.clone())).norm();
        let rhs = op_norm(&b);
        [(lhs - rhs).abs() / rhs.max(1e-300)]
    });
    NumericCheck::new("|pi(b_t)| = |b_t|", samples, worst, 1e-10)
}

/// `ρ_t` commutes with `π(x)`, and `ρ_t ρ_s = ρ_{st}`.
pub fn right_regular_commutant_check(bundle: &FiniteFellBundle, samples: usize, seed: u64) -> Vec<NumericCheck> {
    let g = bundle.group();
    let d = bundle.dim();
    let rho: Vec<GradedOperator> = g.elements().map(|t| GradedOperator::right_regular(g, d, t)).collect();
    let [commutator] = worst_over(samples, seed, |rng| {
        let px = GradedOperator::regular_embed(bundle, &bundle.random_element(rng));
        let worst = rho.iter().map(|r| r.mul(&px).sub(&px.mul(r)).norm()).fold(0.0, f64::max);
        [worst / px.norm().max(1.0)]
    });
    let mut composition: f64 = 0.0;
    for t in g.elements() {
        for s in g.elements() {
            composition = composition.max(rho[t].mul(&rho[s]).sub(&rho[g.mul(s, t)]).norm());
        }
    }
    vec![
        NumericCheck::new("rho_t pi(x) = pi(x) rho_t", samples, commutator, 1e-12),
        NumericCheck::new("rho_t rho_s = rho_st", g.order() * g.order(), composition, 0.0),
    ]
}

fn random_matrix<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// `|sum x_i* y_i|^2 <= |sum x_i* x_i| |sum y_i* y_i|` on random tuples.
/// The worst value is the violation relative to the right-hand side.
pub fn cstar_inequality_check(samples: usize, tuple: usize, d: usize, seed: u64) -> NumericCheck {
    let [worst] = worst_over(samples, seed, |rng| {
        let xs: Vec<CMatrix> = (0..tuple).map(|_| random_matrix(d, rng)).collect();
        let ys: Vec<CMatrix> = (0..tuple).map(|_| random_matrix(d, rng)).collect();
        let sum = |a: &[CMatrix], b: &[CMatrix]| {
            a.iter().zip(b).fold(CMatrix::zeros(d, d), |acc, (p, q)| acc + p.adjoint() * q)
        };
        let lhs = op_norm(&sum(&xs, &ys)).powi(2);
        let rhs = op_norm(&sum(&xs, &xs)) * op_norm(&sum(&ys, &ys));
        [(lhs - rhs).max(0.0) / rhs.max(1.0)]
    });
    NumericCheck::new(format!("C*-inequality ({tuple}-tuples in M_{d})"), samples, worst, 1e-10)
}

/// Every bundle check, with `samples` random elements each.
pub fn run_suite(name: &str, bundle: &FiniteFellBundle, samples: usize, seed: u64) -> BundleReport {
    let mut checks = fourier_checks(bundle, samples, seed);
    checks.extend(faithfulness_check(bundle, samples, seed ^ 1));
    checks.push(norm_preservation_check(bundle, samples, seed ^ 2));
    checks.extend(right_regular_commutant_check(bundle, samples, seed ^ 3));
    checks.push(cstar_inequality_check(samples, 5, bundle.dim(), seed ^ 4));
    BundleReport {
        name: name.to_string(),
        order: bundle.order(),
        dim: bundle.dim(),
        validation: bundle.validate(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::examples;

    #[test]
    fn suite_passes_on_standard_bundles() {
        for (name, b) in examples::standard() {
            let report = run_suite(&name, &b, 20, 9);
            for c in &report.checks {
                assert!(c.passed, "{name}: {} worst {:e}", c.label, c.worst);
            }
            assert!(report.passed());
        }
    }

    #[test]
    fn cstar_equality_for_single_pair() {
        let mut rng = sample_rng(1, 0);
        let x = random_matrix(3, &mut rng);
        let lhs = op_norm(&(x.adjoint() * &x)).powi(2);
        let rhs = op_norm(&(x.adjoint() * &x)).powi(2);
        assert!((lhs - rhs).abs() < 1e-9);
        assert!(cstar_inequality_check(50, 5, 4, 2).passed);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let b = examples::cyclic_shift(3).unwrap();
        let a = fourier_checks(&b, 5, 42);
        let c = fourier_checks(&b, 5, 42);
        assert_eq!(a.iter().map(|x| x.worst).collect::<Vec<_>>(), c.iter().map(|x| x.worst).collect::<Vec<_>>());
    }
}
