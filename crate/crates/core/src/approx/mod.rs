//! Coefficient functions `a: Γ → B_e`, the maps
//! `Ψ(b_t) = Σ_r a(t r)* b_t a(r)` and `Φ(x) = Σ_t Ψ(x(t))`, and the nets
//! used to approximate the identity.
//!
//! Values are stored as `sqrt(w) · v` with a rational weight `w`, so that a
//! product `a(tr)* b a(r)` carries the factor `sqrt(w(tr) w(r))`. The
//! symbolic carrier demands that this factor be rational.

mod carrier;
mod experiment;
mod nets;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_integer::Roots;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bundle::BundleError;
use crate::ck::CkError;
use crate::group::GroupError;

pub use carrier::{BundleCarrier, CkCarrier};
pub use experiment::{ck_convergence_experiment, ConvergenceReport, ConvergenceRow, KSlice};
pub use nets::{ck_net, cyclic_degree, folner_carrier, folner_net, uniform_net};

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error(transparent)]
    Ck(#[from] CkError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("element is not homogeneous of degree {0}")]
    NotHomogeneous(String),
    #[error("coefficient weight {0} has no rational square root")]
    IrrationalWeight(Rational64),
    #[error("negative coefficient weight {0}")]
    NegativeWeight(Rational64),
    #[error("{0} is not of the form alpha beta^-1 with S(t) nonzero")]
    Vacuous(String),
    #[error("index {value} below the minimum {min}")]
    IndexTooSmall { value: usize, min: usize },
    #[error("window {window} needs a cyclic group of order at least {needed}, got {order}")]
    WindowTooLarge { window: usize, needed: usize, order: usize },
    #[error("unit fiber does not contain the identity")]
    NonUnital,
}

/// A graded algebra on which coefficient functions act.
pub trait GradedCarrier {
    type Degree: Clone + Ord + fmt::Display;
    type Element: Clone;

    fn identity_degree(&self) -> Self::Degree;
    fn degree_mul(&self, t: &Self::Degree, r: &Self::Degree) -> Result<Self::Degree, ApproxError>;
    fn degree_inv(&self, t: &Self::Degree) -> Self::Degree;
    fn zero(&self) -> Self::Element;
    fn add(&self, x: &Self::Element, y: &Self::Element) -> Result<Self::Element, ApproxError>;
    fn sub(&self, x: &Self::Element, y: &Self::Element) -> Result<Self::Element, ApproxError>;
    fn mul(&self, x: &Self::Element, y: &Self::Element) -> Result<Self::Element, ApproxError>;
    fn adjoint(&self, x: &Self::Element) -> Self::Element;
    fn scale(&self, x: &Self::Element, c: Rational64) -> Self::Element;
    /// `sqrt(w) · x` for `w >= 0`.
    fn scale_sqrt(&self, x: &Self::Element, w: Rational64) -> Result<Self::Element, ApproxError>;
    /// The nonzero homogeneous components.
    fn components(&self, x: &Self::Element) -> Vec<(Self::Degree, Self::Element)>;
    fn is_zero(&self, x: &Self::Element) -> bool;
    /// `Some(c)` when `x = c · 1` for a real rational `c`.
    fn unit_multiple(&self, x: &Self::Element) -> Option<Rational64>;
    fn norm(&self, x: &Self::Element) -> f64;

    fn is_homogeneous(&self, x: &Self::Element, t: &Self::Degree) -> bool {
        self.components(x).iter().all(|(d, _)| d == t)
    }

    fn sum(&self, parts: impl IntoIterator<Item = Self::Element>) -> Result<Self::Element, ApproxError> {
        parts.into_iter().try_fold(self.zero(), |acc, p| self.add(&acc, &p))
    }
}

/// Exact square root of a nonnegative rational, if it has one.
pub fn rational_sqrt(w: Rational64) -> Option<Rational64> {
    if w.is_negative() {
        return None;
    }
    let (n, d) = (*w.numer(), *w.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (rn * rn == n && rd * rd == d).then(|| Rational64::new(rn, rd))
}

/// The value of `|Σ_t a(t)* a(t)|`, exact when the sum is a rational
/// multiple of the unit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NetBound {
    #[serde(serialize_with = "serialize_ratio")]
    pub exact: Option<Rational64>,
    pub value: f64,
}

fn serialize_ratio<S: serde::Serializer>(r: &Option<Rational64>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// A finitely supported `a: Γ → B_e` with `a(t) = sqrt(weight) · value`.
pub struct CoefficientFunction<C: GradedCarrier> {
    values: BTreeMap<C::Degree, (Rational64, C::Element)>,
    bound: OnceLock<NetBound>,
}

impl<C: GradedCarrier> Clone for CoefficientFunction<C> {
    fn clone(&self) -> Self {
        CoefficientFunction { values: self.values.clone(), bound: self.bound.clone() }
    }
}

impl<C: GradedCarrier> Default for CoefficientFunction<C> {
    fn default() -> Self {
        CoefficientFunction { values: BTreeMap::new(), bound: OnceLock::new() }
    }
}

impl<C: GradedCarrier> CoefficientFunction<C> {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Adds `a(t) = sqrt(weight) · value`; zero values and weights are dropped.
    pub fn insert(&mut self, carrier: &C, t: C::Degree, weight: Rational64, value: C::Element) -> Result<(), ApproxError> {
        if weight.is_negative() {
            return Err(ApproxError::NegativeWeight(weight));
        }
        self.bound = OnceLock::new();
        if weight.is_zero() || carrier.is_zero(&value) {
            self.values.remove(&t);
        } else {
            self.values.insert(t, (weight, value));
        }
        Ok(())
    }

    pub fn support(&self) -> impl Iterator<Item = &C::Degree> {
        self.values.keys()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, t: &C::Degree) -> Option<&(Rational64, C::Element)> {
        self.values.get(t)
    }

    /// The value `a(t)` as an element.
    pub fn value(&self, carrier: &C, t: &C::Degree) -> Result<C::Element, ApproxError> {
        match self.values.get(t) {
            Some((w, v)) => carrier.scale_sqrt(v, *w),
            None => Ok(carrier.zero()),
        }
    }

    /// Cached [`net_bound`].
    pub fn bound(&self, carrier: &C) -> Result<NetBound, ApproxError> {
        if let Some(b) = self.bound.get() {
            return Ok(*b);
        }
        let b = net_bound(carrier, self)?;
        Ok(*self.bound.get_or_init(|| b))
    }
}

type Terms<C> = Vec<(<C as GradedCarrier>::Degree, <C as GradedCarrier>::Element)>;

/// The summands `a(t r)* x a(r)` of `Ψ(x)`, indexed by `r`.
pub fn psi_terms<C: GradedCarrier>(
    carrier: &C,
    a: &CoefficientFunction<C>,
    x: &C::Element,
    t: &C::Degree,
) -> Result<Terms<C>, ApproxError> {
    if !carrier.is_homogeneous(x, t) {
        return Err(ApproxError::NotHomogeneous(t.to_string()));
    }
    let mut out = Vec::new();
    for (r, (wr, vr)) in &a.values {
        let tr = carrier.degree_mul(t, r)?;
        let Some((wtr, vtr)) = a.values.get(&tr) else { continue };
        let term = carrier.mul(&carrier.mul(&carrier.adjoint(vtr), x)?, vr)?;
        if carrier.is_zero(&term) {
            continue;
        }
        out.push((r.clone(), carrier.scale_sqrt(&term, wtr * wr)?));
    }
    Ok(out)
}

/// `Ψ(x) = Σ_r a(t r)* x a(r)` for `x` homogeneous of degree `t`.
pub fn psi_apply<C: GradedCarrier>(
    carrier: &C,
    a: &CoefficientFunction<C>,
    x: &C::Element,
    t: &C::Degree,
) -> Result<C::Element, ApproxError> {
    carrier.sum(psi_terms(carrier, a, x, t)?.into_iter().map(|(_, term)| term))
}

/// `Ψ(x)` summed over `s = t r` in the support instead of over `r`.
pub fn psi_apply_by_target<C: GradedCarrier>(
    carrier: &C,
    a: &CoefficientFunction<C>,
    x: &C::Element,
    t: &C::Degree,
) -> Result<C::Element, ApproxError> {
    if !carrier.is_homogeneous(x, t) {
        return Err(ApproxError::NotHomogeneous(t.to_string()));
    }
    let t_inv = carrier.degree_inv(t);
    let mut acc = carrier.zero();
    for (s, (ws, vs)) in &a.values {
        let r = carrier.degree_mul(&t_inv, s)?;
        let Some((wr, vr)) = a.values.get(&r) else { continue };
        let term = carrier.mul(&carrier.mul(&carrier.adjoint(vs), x)?, vr)?;
        acc = carrier.add(&acc, &carrier.scale_sqrt(&term, ws * wr)?)?;
    }
    Ok(acc)
}

/// `Φ(x) = Σ_t Ψ(x(t))`.
pub fn phi_apply<C: GradedCarrier>(carrier: &C, a: &CoefficientFunction<C>, x: &C::Element) -> Result<C::Element, ApproxError> {
    let mut acc = carrier.zero();
    for (t, xt) in carrier.components(x) {
        acc = carrier.add(&acc, &psi_apply(carrier, a, &xt, &t)?)?;
    }
    Ok(acc)
}

/// `|Σ_t a(t)* a(t)|`.
pub fn net_bound<C: GradedCarrier>(carrier: &C, a: &CoefficientFunction<C>) -> Result<NetBound, ApproxError> {
    let mut sum = carrier.zero();
    let mut exact = Some(Rational64::zero());
    for (w, v) in a.values.values() {
        let vv = carrier.mul(&carrier.adjoint(v), v)?;
        exact = match (exact, carrier.unit_multiple(&vv)) {
            (Some(acc), Some(q)) => Some(acc + w * q),
            _ => None,
        };
        sum = carrier.add(&sum, &carrier.scale(&vv, *w))?;
    }
    let exact = exact.or_else(|| carrier.unit_multiple(&sum));
    let value = match exact {
        Some(q) => *q.numer() as f64 / *q.denom() as f64,
        None => carrier.norm(&sum),
    };
    Ok(NetBound { exact, value })
}

/// The rational `c` with `Ψ(b_t) = c · b_t` for every `b_t`, when all values
/// of `a` are rational multiples of the unit.
pub fn exact_multiplier<C: GradedCarrier>(
    carrier: &C,
    a: &CoefficientFunction<C>,
    t: &C::Degree,
) -> Result<Option<Rational64>, ApproxError> {
    let mut scalars = BTreeMap::new();
    for (s, (w, v)) in &a.values {
        match carrier.unit_multiple(v) {
            Some(q) => scalars.insert(s.clone(), (*w, q)),
            None => return Ok(None),
        };
    }
    let mut c = Rational64::zero();
    for (r, (wr, qr)) in &scalars {
        if let Some((wtr, qtr)) = scalars.get(&carrier.degree_mul(t, r)?) {
            let root = rational_sqrt(wtr * wr).ok_or(ApproxError::IrrationalWeight(wtr * wr))?;
            c += root * qtr * qr;
        }
    }
    Ok(Some(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_square_roots() {
        assert_eq!(rational_sqrt(Rational64::new(9, 4)), Some(Rational64::new(3, 2)));
        assert_eq!(rational_sqrt(Rational64::new(1, 100)), Some(Rational64::new(1, 10)));
        assert_eq!(rational_sqrt(Rational64::new(1, 2)), None);
        assert_eq!(rational_sqrt(Rational64::new(-1, 4)), None);
        assert_eq!(rational_sqrt(Rational64::zero()), Some(Rational64::zero()));
    }
}
