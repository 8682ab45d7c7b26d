use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::subspace::{op_norm, vectorize, CMatrix, CVector, Subspace, TOLERANCE};
use super::BundleError;
use crate::group::FiniteGroup;

/// A Fell bundle over a finite group whose fibers are subspaces of `M_d`.
#[derive(Clone, Debug)]
pub struct FiniteFellBundle {
    group: FiniteGroup,
    dim: usize,
    fibers: Vec<Subspace>,
}

/// One failed axiom instance.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub t: usize,
    pub s: Option<usize>,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub fiber_dims: Vec<usize>,
    pub worst_adjoint: f64,
    pub worst_product: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteFellBundle {
    /// Fibers given by spanning sets, one list per group element. No axiom
    /// is checked here; see [`FiniteFellBundle::validate`].
    pub fn new(group: FiniteGroup, dim: usize, spanning: Vec<Vec<CMatrix>>) -> Result<Self, BundleError> {
        if spanning.len() != group.order() {
            return Err(BundleError::FiberCount { expected: group.order(), found: spanning.len() });
        }
        for m in spanning.iter().flatten() {
            check_shape(m, dim)?;
        }
        let fibers = spanning.iter().map(|ms| Subspace::span_matrices(dim, dim, ms)).collect();
        Ok(FiniteFellBundle { group, dim, fibers })
    }

    /// Validated bundle, or the first violations as an error.
    pub fn validated(group: FiniteGroup, dim: usize, spanning: Vec<Vec<CMatrix>>) -> Result<Self, BundleError> {
        let b = Self::new(group, dim, spanning)?;
        let report = b.validate();
        if !report.passed() {
            let v = &report.violations[0];
            return Err(BundleError::Invalid(format!(
                "{} fails at t={} s={:?} (residual {:.3e}), {} violations in total",
                v.axiom,
                v.t,
                v.s,
                v.residual,
                report.violations.len()
            )));
        }
        Ok(b)
    }

    /// Semidirect product bundle: `B_t = span(subalg) u_t` for an action
    /// `Ad(u_t)` preserving the subalgebra.
    pub fn semidirect(group: FiniteGroup, unitaries: Vec<CMatrix>, subalg: Vec<CMatrix>) -> Result<Self, BundleError> {
        if unitaries.len() != group.order() {
            return Err(BundleError::FiberCount { expected: group.order(), found: unitaries.len() });
        }
        let dim = unitaries.first().map(|u| u.nrows()).unwrap_or(0);
        let identity = CMatrix::identity(dim, dim);
        for (t, u) in unitaries.iter().enumerate() {
            check_shape(u, dim)?;
            let residual = (u.adjoint() * u - &identity).norm();
            if residual > TOLERANCE {
                return Err(BundleError::NotUnitary { t, residual });
            }
        }
        for m in &subalg {
            check_shape(m, dim)?;
        }
        if (&unitaries[group.identity()] - &identity).norm() > TOLERANCE {
            return Err(BundleError::IdentityUnitary);
        }
        let algebra = Subspace::span_matrices(dim, dim, &subalg);
        for (t, u) in unitaries.iter().enumerate() {
            let residual = algebra
                .basis()
                .iter()
                .map(|b| {
                    let m = CMatrix::from_column_slice(dim, dim, b.as_slice());
                    algebra.residual_matrix(&(u * m * u.adjoint()))
                })
                .fold(0.0, f64::max);
            if residual > TOLERANCE {
                return Err(BundleError::ActionNotPreserving { t, residual });
            }
        }
        let spanning = unitaries.iter().map(|u| subalg.iter().map(|a| a * u).collect()).collect();
        Self::validated(group, dim, spanning)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fiber(&self, t: usize) -> &Subspace {
        &self.fibers[t]
    }

    pub fn fiber_dims(&self) -> Vec<usize> {
        self.fibers.iter().map(Subspace::dim).collect()
    }

    /// Orthonormal basis of `B_t` as matrices.
    pub fn fiber_basis(&self, t: usize) -> Vec<CMatrix> {
        self.fibers[t].basis().iter().map(|v| self.as_matrix(v)).collect()
    }

    fn as_matrix(&self, v: &CVector) -> CMatrix {
        CMatrix::from_column_slice(self.dim, self.dim, v.as_slice())
    }

    /// Checks `B_t* = B_{t^-1}` and `B_t B_s ⊆ B_{ts}` on basis elements;
    /// the case `t = s = e` covers `B_e` being a *-subalgebra.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut worst_adjoint: f64 = 0.0;
        let mut worst_product: f64 = 0.0;
        let bases: Vec<Vec<CMatrix>> = self.group.elements().map(|t| self.fiber_basis(t)).collect();
        for t in self.group.elements() {
            let ti = self.group.inv(t);
            let r = bases[t].iter().map(|b| self.fibers[ti].residual_matrix(&b.adjoint())).fold(0.0, f64::max);
            worst_adjoint = worst_adjoint.max(r);
            if r > TOLERANCE || self.fibers[t].dim() != self.fibers[ti].dim() {
                violations.push(Violation { axiom: "adjoint B_t* = B_t^-1", t, s: None, residual: r });
            }
            for s in self.group.elements() {
                let ts = self.group.mul(t, s);
                let mut r: f64 = 0.0;
                for a in &bases[t] {
                    for b in &bases[s] {
                        r = r.max(self.fibers[ts].residual_matrix(&(a * b)));
                    }
                }
                worst_product = worst_product.max(r);
                if r > TOLERANCE {
                    violations.push(Violation { axiom: "product B_t B_s in B_ts", t, s: Some(s), residual: r });
                }
            }
        }
        ValidationReport { fiber_dims: self.fiber_dims(), worst_adjoint, worst_product, violations }
    }

    /// A random element of `B_t`: Gaussian coefficients on the orthonormal
    /// basis.
    pub fn random_fiber_element<R: Rng>(&self, t: usize, rng: &mut R) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for b in self.fibers[t].basis() {
            let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            m += self.as_matrix(b) * c;
        }
        m
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> BundleElement {
        BundleElement { components: self.group.elements().map(|t| self.random_fiber_element(t, rng)).collect() }
    }

    /// Random element of `B_e`.
    pub fn random_unit_fiber_element<R: Rng>(&self, rng: &mut R) -> CMatrix {
        self.random_fiber_element(self.group.identity(), rng)
    }

    pub fn zero_element(&self) -> BundleElement {
        BundleElement::zero(self.order(), self.dim)
    }

    pub fn single(&self, t: usize, m: CMatrix) -> BundleElement {
        let mut x = self.zero_element();
        x.components[t] = m;
        x
    }

    /// Largest distance of a component from its fiber.
    pub fn membership_residual(&self, x: &BundleElement) -> f64 {
        x.components.iter().enumerate().map(|(t, m)| self.fibers[t].residual_matrix(m)).fold(0.0, f64::max)
    }

    /// `(x y)(s) = sum_t x(t) y(t^-1 s)`.
    pub fn multiply(&self, x: &BundleElement, y: &BundleElement) -> BundleElement {
        let mut out = self.zero_element();
        for t in self.group.elements() {
            if x.components[t].iter().all(|c| *c == Complex64::ZERO) {
                continue;
            }
            for u in self.group.elements() {
                out.components[self.group.mul(t, u)] += &x.components[t] * &y.components[u];
            }
        }
        out
    }

    /// `x*(t) = x(t^-1)*`.
    pub fn adjoint(&self, x: &BundleElement) -> BundleElement {
        BundleElement {
            components: self.group.elements().map(|t| x.components[self.group.inv(t)].adjoint()).collect(),
        }
    }

    /// Stacked coordinates of all components (length `|G| d^2`).
    pub fn to_vector(&self, x: &BundleElement) -> CVector {
        let d2 = self.dim * self.dim;
        let mut v = CVector::zeros(self.order() * d2);
        for (t, m) in x.components.iter().enumerate() {
            v.rows_mut(t * d2, d2).copy_from(&vectorize(m));
        }
        v
    }

    pub fn from_vector(&self, v: &CVector) -> BundleElement {
        let d2 = self.dim * self.dim;
        BundleElement {
            components: self
                .group
                .elements()
                .map(|t| CMatrix::from_column_slice(self.dim, self.dim, v.rows(t * d2, d2).as_slice()))
                .collect(),
        }
    }

    /// The algebra `⊕_t B_t` as a subspace of the stacked coordinates.
    pub fn algebra_subspace(&self) -> Subspace {
        let ambient = self.order() * self.dim * self.dim;
        Subspace::span(ambient, self.group.elements().flat_map(|t| self.fiber_subspace(t).basis().to_vec()))
    }

    /// `B_t` embedded as elements supported at `t`.
    pub fn fiber_subspace(&self, t: usize) -> Subspace {
        let d2 = self.dim * self.dim;
        Subspace::span(
            self.order() * d2,
            self.fibers[t].basis().iter().map(|b| {
                let mut v = CVector::zeros(self.order() * d2);
                v.rows_mut(t * d2, d2).copy_from(b);
                v
            }),
        )
    }

    /// Basis of the algebra by homogeneous elements.
    pub fn homogeneous_basis(&self) -> Vec<BundleElement> {
        self.group
            .elements()
            .flat_map(|t| self.fiber_basis(t).into_iter().map(move |m| (t, m)))
            .map(|(t, m)| self.single(t, m))
            .collect()
    }
}

fn check_shape(m: &CMatrix, dim: usize) -> Result<(), BundleError> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(BundleError::Shape { rows: m.nrows(), cols: m.ncols(), dim });
    }
    Ok(())
}

/// A section `t -> x(t)`, indexed by group element.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleElement {
    pub components: Vec<CMatrix>,
}

impl BundleElement {
    pub fn zero(order: usize, dim: usize) -> Self {
        BundleElement { components: vec![CMatrix::zeros(dim, dim); order] }
    }

    pub fn component(&self, t: usize) -> &CMatrix {
        &self.components[t]
    }

    pub fn add(&self, other: &BundleElement) -> BundleElement {
        BundleElement { components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &BundleElement) -> BundleElement {
        BundleElement { components: self.components.iter().zip(&other.components).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: Complex64) -> BundleElement {
        BundleElement { components: self.components.iter().map(|a| a * c).collect() }
    }

    /// Largest Frobenius norm of a component.
    pub fn max_component_norm(&self) -> f64 {
        self.components.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }

    pub fn max_component_op_norm(&self) -> f64 {
        self.components.iter().map(op_norm).fold(0.0, f64::max)
    }
}
