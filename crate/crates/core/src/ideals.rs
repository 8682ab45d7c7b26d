//! Two-sided ideals of the finite-dimensional algebra `⊕_t B_t`, the induced
//! ideals `J_1 ⊆ J_2 = J_3` and the grading of the quotient.
//!
//! Ideals are subspaces of the stacked component coordinates of
//! [`FiniteFellBundle::to_vector`]; the regular embedding is injective, so
//! this is the same subspace as its image among graded operators.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bundle::subspace::{op_norm, CMatrix, CVector, Subspace, TOLERANCE};
use crate::bundle::{BundleElement, BundleError, FiniteFellBundle, GradedOperator};

/// Largest ideal dimension the closure will build.
pub const DIMENSION_CAP: usize = 4096;

/// Agreement required between the two quotient norms.
pub const QUOTIENT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum IdealError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("generator lies outside the algebra (residual {0:.3e})")]
    NotInAlgebra(f64),
    #[error("ideal dimension exceeds the cap of {0}")]
    DimensionCap(usize),
    #[error("ideal of dimension {dim} is not induced: the ideal generated by J ∩ B_e has dimension {induced}")]
    NotInduced { dim: usize, induced: usize },
    #[error("support projection check failed: {0}")]
    SupportProjection(String),
}

/// A two-sided ideal as an orthonormal basis of component vectors.
#[derive(Clone, Debug)]
pub struct IdealSubspace {
    space: Subspace,
}

impl IdealSubspace {
    pub fn zero(bundle: &FiniteFellBundle) -> Self {
        IdealSubspace { space: Subspace::zero(ambient(bundle)) }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn elements(&self, bundle: &FiniteFellBundle) -> Vec<BundleElement> {
        self.space.basis().iter().map(|v| bundle.from_vector(v)).collect()
    }

    pub fn residual(&self, bundle: &FiniteFellBundle, x: &BundleElement) -> f64 {
        self.space.residual(&bundle.to_vector(x))
    }

    pub fn contains(&self, bundle: &FiniteFellBundle, x: &BundleElement) -> bool {
        self.residual(bundle, x) <= TOLERANCE * (1.0 + bundle.to_vector(x).norm())
    }

    /// Largest residual of a basis vector of `other` in `self`.
    pub fn containment_residual(&self, other: &IdealSubspace) -> f64 {
        self.space.containment_residual(&other.space)
    }

    /// Worst residual of `a b`, `b a` and `b*` for algebra basis elements
    /// `a` and ideal basis elements `b`.
    pub fn invariance_residual(&self, bundle: &FiniteFellBundle) -> f64 {
        let algebra = bundle.homogeneous_basis();
        let mut worst: f64 = 0.0;
        for b in self.elements(bundle) {
            worst = worst.max(self.residual(bundle, &bundle.adjoint(&b)));
            for a in &algebra {
                worst = worst.max(self.residual(bundle, &bundle.multiply(a, &b)));
                worst = worst.max(self.residual(bundle, &bundle.multiply(&b, a)));
            }
        }
        worst
    }
}

fn ambient(bundle: &FiniteFellBundle) -> usize {
    bundle.order() * bundle.dim() * bundle.dim()
}

/// The smallest two-sided ideal containing `generators`: saturation of their
/// span under left and right multiplication by the homogeneous basis.
pub fn ideal_closure(bundle: &FiniteFellBundle, generators: &[BundleElement]) -> Result<IdealSubspace, IdealError> {
    let algebra_space = bundle.algebra_subspace();
    let mut space = Subspace::zero(ambient(bundle));
    let mut queue = Vec::new();
    for g in generators {
        let v = bundle.to_vector(g);
        let r = algebra_space.residual(&v);
        if r > TOLERANCE * (1.0 + v.norm()) {
            return Err(IdealError::NotInAlgebra(r));
        }
        if space.insert(v) {
            queue.push(space.basis().len() - 1);
        }
    }
    let algebra = bundle.homogeneous_basis();
    while let Some(k) = queue.pop() {
        let b = bundle.from_vector(&space.basis()[k]);
        for a in &algebra {
            for p in [bundle.multiply(a, &b), bundle.multiply(&b, a)] {
                if space.insert(bundle.to_vector(&p)) {
                    if space.dim() > DIMENSION_CAP {
                        return Err(IdealError::DimensionCap(DIMENSION_CAP));
                    }
                    queue.push(space.basis().len() - 1);
                }
            }
        }
    }
    Ok(IdealSubspace { space })
}

/// `J ∩ B_t` with `B_t` embedded as elements supported at `t`.
pub fn fiber_intersection(bundle: &FiniteFellBundle, j: &IdealSubspace, t: usize) -> Subspace {
    j.space.intersection(&bundle.fiber_subspace(t))
}

/// The ideal generated by `J ∩ B_e`.
pub fn induced_j1(bundle: &FiniteFellBundle, j: &IdealSubspace) -> Result<IdealSubspace, IdealError> {
    let unit = fiber_intersection(bundle, j, bundle.group().identity());
    let gens: Vec<BundleElement> = unit.basis().iter().map(|v| bundle.from_vector(v)).collect();
    ideal_closure(bundle, &gens)
}

/// `{b : F_t(b) ∈ J for all t}`, which is `⊕_t (J ∩ B_t)`.
pub fn induced_j2(bundle: &FiniteFellBundle, j: &IdealSubspace) -> IdealSubspace {
    let vectors: Vec<CVector> = bundle
        .group()
        .elements()
        .flat_map(|t| fiber_intersection(bundle, j, t).basis().to_vec())
        .collect();
    IdealSubspace { space: Subspace::span(ambient(bundle), vectors) }
}

/// Whether `E(b* b)` lies in `J`.
pub fn check_j3(bundle: &FiniteFellBundle, b: &BundleElement, j: &IdealSubspace) -> bool {
    let e = bundle.group().identity();
    let bb = bundle.multiply(&bundle.adjoint(b), b);
    let expectation = bundle.single(e, bb.component(e).clone());
    j.contains(bundle, &expectation)
}

#[derive(Clone, Debug, Serialize)]
pub struct InducedReport {
    pub dim_j: usize,
    pub dim_j1: usize,
    pub dim_j2: usize,
    pub j1_in_j2_residual: f64,
    pub j2_in_j_residual: f64,
    pub closure_residual: f64,
    pub j3_on_j2_basis: usize,
    pub j2_basis_size: usize,
    pub j3_rejections: usize,
    pub complement_samples: usize,
    pub hereditary_residual: f64,
    pub passed: bool,
}

/// `J_1 ⊆ J_2`, `J_2 = J_3` on the `J_2` basis and on random vectors
/// outside `J_2`, and `J_1 = J_2` by dimension.
pub fn verify_induced_theorems(
    bundle: &FiniteFellBundle,
    j: &IdealSubspace,
    complement_samples: usize,
    seed: u64,
) -> Result<InducedReport, IdealError> {
    let j1 = induced_j1(bundle, j)?;
    let j2 = induced_j2(bundle, j);
    let j1_in_j2 = j2.containment_residual(&j1);
    let j2_in_j = j.containment_residual(&j2);
    let j3_on_basis = j2.elements(bundle).iter().filter(|b| check_j3(bundle, b, j)).count();

    let algebra = bundle.algebra_subspace();
    let complement = j2.space.complement_in(&algebra);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejections = 0;
    let mut samples = 0;
    if complement.dim() > 0 {
        for _ in 0..complement_samples {
            let x = bundle.random_element(&mut rng);
            let v = bundle.to_vector(&x);
            let b = bundle.from_vector(&(&v - j2.space.project(&v)));
            samples += 1;
            if !check_j3(bundle, &b, j) {
                rejections += 1;
            }
        }
    }
    let hereditary = hereditary_residual(bundle, j, &mut rng);
    let closure = j.invariance_residual(bundle);
    let passed = j1.dim() == j2.dim()
        && j1_in_j2 <= TOLERANCE
        && j2_in_j <= TOLERANCE
        && j3_on_basis == j2.dim()
        && rejections == samples
        && hereditary <= TOLERANCE
        && closure <= 1e-9;
    Ok(InducedReport {
        dim_j: j.dim(),
        dim_j1: j1.dim(),
        dim_j2: j2.dim(),
        j1_in_j2_residual: j1_in_j2,
        j2_in_j_residual: j2_in_j,
        closure_residual: closure,
        j3_on_j2_basis: j3_on_basis,
        j2_basis_size: j2.dim(),
        j3_rejections: rejections,
        complement_samples: samples,
        hereditary_residual: hereditary,
        passed,
    })
}

/// For positive `z ∈ J ∩ B_e` and `c = w z^{1/2}` with `|w| <= 1`, `w ∈ B_e`
/// (so `c* c <= z`), the residual of `c* c` in `J`.
fn hereditary_residual(bundle: &FiniteFellBundle, j: &IdealSubspace, rng: &mut ChaCha8Rng) -> f64 {
    let e = bundle.group().identity();
    let unit = fiber_intersection(bundle, j, e);
    let mut worst: f64 = 0.0;
    for v in unit.basis() {
        let y = bundle.from_vector(v).component(e).clone();
        let z = y.adjoint() * &y;
        let root = positive_sqrt(&z);
        let mut w = bundle.random_unit_fiber_element(rng);
        let n = op_norm(&w);
        if n > 0.0 {
            w /= Complex64::new(n, 0.0);
        }
        let c = w * root;
        let cc = c.adjoint() * &c;
        worst = worst.max(j.residual(bundle, &bundle.single(e, cc)));
    }
    worst
}

fn positive_sqrt(z: &CMatrix) -> CMatrix {
    let h = (z + z.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
    &eig.eigenvectors * CMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientReport {
    pub fiber_dims: Vec<usize>,
    pub ideal_fiber_dims: Vec<usize>,
    pub quotient_dims: Vec<usize>,
    pub support_projection_residual: f64,
    pub samples: usize,
    pub worst_norm_gap: f64,
    pub passed: bool,
}

/// The projection onto the span of the ranges of `π(J)`, as an element of
/// the algebra. It is the unit of `J`, hence central.
pub fn support_projection(bundle: &FiniteFellBundle, j: &IdealSubspace) -> Result<(BundleElement, f64), IdealError> {
    let n = bundle.order() * bundle.dim();
    let mut range = Subspace::zero(n);
    for b in j.elements(bundle) {
        let op = GradedOperator::regular_embed(bundle, &b);
        for col in op.matrix().column_iter() {
            range.insert(col.into_owned());
        }
    }
    let mut z = CMatrix::zeros(n, n);
    for q in range.basis() {
        z += q * q.adjoint();
    }
    let zop = GradedOperator::from_matrix(bundle.order(), bundle.dim(), z.clone())?;
    let element = zop.components(bundle.group())?;
    let in_j = j.residual(bundle, &element);
    let mut central: f64 = 0.0;
    for a in bundle.homogeneous_basis() {
        let pa = GradedOperator::regular_embed(bundle, &a);
        central = central.max((&z * pa.matrix() - pa.matrix() * &z).norm());
    }
    let idempotent = (&z * &z - &z).norm();
    let residual = in_j.max(central).max(idempotent);
    if residual > 1e-8 {
        return Err(IdealError::SupportProjection(format!(
            "in J {in_j:.3e}, central {central:.3e}, idempotent {idempotent:.3e}"
        )));
    }
    Ok((element, residual))
}

/// Quotient fiber dimensions `dim B_t - dim(J ∩ B_t)`, and for random
/// `x ∈ B_t` the agreement of `|x + J|` with `|x + J ∩ B_t|`.
///
/// `|x + J| = |π(x)(1 - z)|` with `z` the support projection of `J`. The
/// element `F_t(x z)` lies in `J ∩ B_t` and `|x - F_t(x z)|` bounds
/// `|x + J ∩ B_t|` from above, while `|x + J| <= |x + J ∩ B_t|` always; the
/// report records the gap between the two computed numbers.
pub fn quotient_grading(
    bundle: &FiniteFellBundle,
    j: &IdealSubspace,
    samples_per_fiber: usize,
    seed: u64,
) -> Result<QuotientReport, IdealError> {
    let induced = induced_j1(bundle, j)?;
    if induced.dim() != j.dim() || j.containment_residual(&induced) > TOLERANCE {
        return Err(IdealError::NotInduced { dim: j.dim(), induced: induced.dim() });
    }
    let g = bundle.group();
    let fiber_dims = bundle.fiber_dims();
    let ideal_fibers: Vec<Subspace> = g.elements().map(|t| fiber_intersection(bundle, j, t)).collect();
    let ideal_fiber_dims: Vec<usize> = ideal_fibers.iter().map(Subspace::dim).collect();
    let quotient_dims = fiber_dims.iter().zip(&ideal_fiber_dims).map(|(a, b)| a - b).collect();

    let (z, support_residual) = support_projection(bundle, j)?;
    let zop = GradedOperator::regular_embed(bundle, &z);
    let one_minus_z = GradedOperator::identity(bundle.order(), bundle.dim()).sub(&zop);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for t in g.elements() {
        for _ in 0..samples_per_fiber {
            let x = bundle.single(t, bundle.random_fiber_element(t, &mut rng));
            let quotient = GradedOperator::regular_embed(bundle, &x).mul(&one_minus_z).norm();
            let xz = bundle.multiply(&x, &z);
            let witness = bundle.single(t, xz.component(t).clone());
            let in_fiber = ideal_fibers[t].residual(&bundle.to_vector(&witness));
            let fiber_norm = op_norm(&(x.component(t) - witness.component(t)));
            worst = worst.max((fiber_norm - quotient).abs()).max(in_fiber);
            samples += 1;
        }
    }
    Ok(QuotientReport {
        fiber_dims,
        ideal_fiber_dims,
        quotient_dims,
        support_projection_residual: support_residual,
        samples,
        worst_norm_gap: worst,
        passed: worst <= QUOTIENT_TOLERANCE,
    })
}

/// Induced ideals generated by diagonal matrix units of `B_e` (one per
/// unit, plus the zero and whole ideals).
pub fn unit_generated_ideals(bundle: &FiniteFellBundle) -> Result<Vec<(String, IdealSubspace)>, IdealError> {
    let e = bundle.group().identity();
    let d = bundle.dim();
    let mut out = vec![("0".to_string(), IdealSubspace::zero(bundle))];
    for i in 0..d {
        let mut m = CMatrix::zeros(d, d);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        if bundle.fiber(e).residual_matrix(&m) > TOLERANCE {
            continue;
        }
        out.push((format!("<e_{k}{k}>", k = i + 1), ideal_closure(bundle, &[bundle.single(e, m)])?));
    }
    let one = bundle.single(e, CMatrix::identity(d, d));
    if bundle.fiber(e).residual_matrix(one.component(e)) <= TOLERANCE {
        out.push(("<1>".to_string(), ideal_closure(bundle, &[one])?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::examples;
    use crate::group::FiniteGroup;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn z2_trivial() -> FiniteFellBundle {
        examples::trivial_action(FiniteGroup::cyclic(2).unwrap(), examples::diagonal(2)).unwrap()
    }

    fn e11() -> CMatrix {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0);
        m
    }

    #[test]
    fn closure_trivial_cases() {
        let b = z2_trivial();
        assert_eq!(ideal_closure(&b, &[b.zero_element()]).unwrap().dim(), 0);
        assert_eq!(ideal_closure(&b, &[b.single(0, CMatrix::identity(2, 2))]).unwrap().dim(), 4);
        let outside = b.single(0, CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]));
        assert!(matches!(ideal_closure(&b, &[outside]), Err(IdealError::NotInAlgebra(_))));
    }

    #[test]
    fn minimal_central_projection_gives_a_line() {
        // e_11 ⊗ (1 + u)/2 in C^2 ⊗ C[Z_2] ≅ C^4
        let b = z2_trivial();
        let half = e11() * c(0.5);
        let p = BundleElement { components: vec![half.clone(), half] };
        let j = ideal_closure(&b, &[p]).unwrap();
        assert_eq!(j.dim(), 1);
        assert!(j.invariance_residual(&b) < 1e-12);
        // not induced: it meets no fiber
        assert_eq!(induced_j1(&b, &j).unwrap().dim(), 0);
        assert_eq!(induced_j2(&b, &j).dim(), 0);
        let report = verify_induced_theorems(&b, &j, 20, 1).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(matches!(quotient_grading(&b, &j, 2, 1), Err(IdealError::NotInduced { .. })));
    }

    #[test]
    fn one_block_ideal() {
        let b = z2_trivial();
        let j = ideal_closure(&b, &[b.single(0, e11())]).unwrap();
        assert_eq!(j.dim(), 2);
        let report = verify_induced_theorems(&b, &j, 50, 2).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!((report.dim_j1, report.dim_j2), (2, 2));
        let q = quotient_grading(&b, &j, 5, 3).unwrap();
        assert_eq!(q.quotient_dims, vec![1, 1]);
        assert!(q.passed, "{q:?}");
    }

    #[test]
    fn zero_and_whole() {
        let b = examples::flip_z2();
        let zero = IdealSubspace::zero(&b);
        let r = verify_induced_theorems(&b, &zero, 10, 4).unwrap();
        assert!(r.passed && r.dim_j1 == 0 && r.dim_j2 == 0);
        let q = quotient_grading(&b, &zero, 3, 5).unwrap();
        assert_eq!(q.quotient_dims, b.fiber_dims());
        assert!(q.passed);
        let whole = ideal_closure(&b, &[b.single(0, e11())]).unwrap();
        assert_eq!(whole.dim(), 4);
        let q = quotient_grading(&b, &whole, 3, 6).unwrap();
        assert_eq!(q.quotient_dims, vec![0, 0]);
        assert!(q.passed);
    }

    #[test]
    fn unit_generated_ideals_satisfy_the_theorems() {
        for (name, b) in examples::standard().into_iter().take(5) {
            for (label, j) in unit_generated_ideals(&b).unwrap() {
                let r = verify_induced_theorems(&b, &j, 10, 7).unwrap();
                assert!(r.passed, "{name} {label}: {r:?}");
                let q = quotient_grading(&b, &j, 2, 8).unwrap();
                assert!(q.passed, "{name} {label}: {q:?}");
            }
        }
    }
}
