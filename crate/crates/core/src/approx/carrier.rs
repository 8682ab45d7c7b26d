use num_complex::Complex64;
use num_rational::Rational64;

use super::{rational_sqrt, ApproxError, GradedCarrier};
use crate::bundle::{BundleElement, FiniteFellBundle, GradedOperator};
use crate::ck::scalar::{as_real, from_ratio, to_f64};
use crate::ck::{CkAlgebra, CkElement, TruncatedPathRep};
use crate::group::FreeWord;

/// Exact carrier: a Cuntz-Krieger algebra graded by the free group.
///
/// Norms that are not exact multiples of the unit are estimated on the
/// truncated path representation at `norm_level`.
#[derive(Clone, Debug)]
pub struct CkCarrier {
    pub algebra: CkAlgebra,
    pub norm_level: usize,
}

impl CkCarrier {
    pub fn new(algebra: CkAlgebra) -> Self {
        CkCarrier { algebra, norm_level: 6 }
    }
}

impl GradedCarrier for CkCarrier {
    type Degree = FreeWord;
    type Element = CkElement;

    fn identity_degree(&self) -> FreeWord {
        FreeWord::identity(self.algebra.rank())
    }

    fn degree_mul(&self, t: &FreeWord, r: &FreeWord) -> Result<FreeWord, ApproxError> {
        Ok(t.multiply(r)?)
    }

    fn degree_inv(&self, t: &FreeWord) -> FreeWord {
        t.inverse()
    }

    fn zero(&self) -> CkElement {
        self.algebra.zero()
    }

    fn add(&self, x: &CkElement, y: &CkElement) -> Result<CkElement, ApproxError> {
        Ok(x.add(y)?)
    }

    fn sub(&self, x: &CkElement, y: &CkElement) -> Result<CkElement, ApproxError> {
        Ok(x.sub(y)?)
    }

    fn mul(&self, x: &CkElement, y: &CkElement) -> Result<CkElement, ApproxError> {
        Ok(x.mul(y)?)
    }

    fn adjoint(&self, x: &CkElement) -> CkElement {
        x.adjoint()
    }

    fn scale(&self, x: &CkElement, c: Rational64) -> CkElement {
        x.scale(from_ratio(c))
    }

    fn scale_sqrt(&self, x: &CkElement, w: Rational64) -> Result<CkElement, ApproxError> {
        let root = rational_sqrt(w).ok_or(ApproxError::IrrationalWeight(w))?;
        Ok(x.scale(from_ratio(root)))
    }

    fn components(&self, x: &CkElement) -> Vec<(FreeWord, CkElement)> {
        x.degrees().into_iter().map(|t| {
            let c = x.component(&t);
            (t, c)
        }).collect()
    }

    fn is_zero(&self, x: &CkElement) -> bool {
        x.is_zero()
    }

    fn unit_multiple(&self, x: &CkElement) -> Option<Rational64> {
        x.as_unit_multiple().and_then(|s| as_real(&s))
    }

    fn norm(&self, x: &CkElement) -> f64 {
        if let Some(q) = self.unit_multiple(x) {
            return to_f64(&q).abs();
        }
        TruncatedPathRep::new(self.algebra.adjacency().clone(), self.norm_level)
            .map(|rep| rep.norm_estimate(x, 0, 60))
            .unwrap_or(f64::NAN)
    }
}

/// Numeric carrier: sections of a finite Fell bundle.
#[derive(Clone, Copy, Debug)]
pub struct BundleCarrier<'a> {
    pub bundle: &'a FiniteFellBundle,
}

impl<'a> BundleCarrier<'a> {
    pub fn new(bundle: &'a FiniteFellBundle) -> Self {
        BundleCarrier { bundle }
    }
}

fn exact_real(z: Complex64) -> Option<Rational64> {
    if z.im != 0.0 {
        return None;
    }
    let q = Rational64::approximate_float(z.re)?;
    (to_f64(&q) == z.re).then_some(q)
}

impl GradedCarrier for BundleCarrier<'_> {
    type Degree = usize;
    type Element = BundleElement;

    fn identity_degree(&self) -> usize {
        self.bundle.group().identity()
    }

    fn degree_mul(&self, t: &usize, r: &usize) -> Result<usize, ApproxError> {
        Ok(self.bundle.group().mul(*t, *r))
    }

    fn degree_inv(&self, t: &usize) -> usize {
        self.bundle.group().inv(*t)
    }

    fn zero(&self) -> BundleElement {
        self.bundle.zero_element()
    }

    fn add(&self, x: &BundleElement, y: &BundleElement) -> Result<BundleElement, ApproxError> {
        Ok(x.add(y))
    }

    fn sub(&self, x: &BundleElement, y: &BundleElement) -> Result<BundleElement, ApproxError> {
        Ok(x.sub(y))
    }

    fn mul(&self, x: &BundleElement, y: &BundleElement) -> Result<BundleElement, ApproxError> {
        Ok(self.bundle.multiply(x, y))
    }

    fn adjoint(&self, x: &BundleElement) -> BundleElement {
        self.bundle.adjoint(x)
    }

    fn scale(&self, x: &BundleElement, c: Rational64) -> BundleElement {
        x.scale(Complex64::new(to_f64(&c), 0.0))
    }

    fn scale_sqrt(&self, x: &BundleElement, w: Rational64) -> Result<BundleElement, ApproxError> {
        if w < Rational64::from_integer(0) {
            return Err(ApproxError::NegativeWeight(w));
        }
        let root = match rational_sqrt(w) {
            Some(r) => to_f64(&r),
            None => to_f64(&w).sqrt(),
        };
        Ok(x.scale(Complex64::new(root, 0.0)))
    }

    fn components(&self, x: &BundleElement) -> Vec<(usize, BundleElement)> {
        self.bundle
            .group()
            .elements()
            .filter(|&t| x.component(t).iter().any(|z| *z != Complex64::new(0.0, 0.0)))
            .map(|t| (t, self.bundle.single(t, x.component(t).clone())))
            .collect()
    }

    fn is_zero(&self, x: &BundleElement) -> bool {
        x.max_component_norm() == 0.0
    }

    fn unit_multiple(&self, x: &BundleElement) -> Option<Rational64> {
        let e = self.bundle.group().identity();
        if self.bundle.group().elements().any(|t| t != e && x.component(t).norm() != 0.0) {
            return None;
        }
        let m = x.component(e);
        let c = m[(0, 0)];
        let diagonal = m.iter().enumerate().all(|(k, z)| {
            let (i, j) = (k % m.nrows(), k / m.nrows());
            if i == j { *z == c } else { *z == Complex64::new(0.0, 0.0) }
        });
        if diagonal { exact_real(c) } else { None }
    }

    fn norm(&self, x: &BundleElement) -> f64 {
        GradedOperator::regular_embed(self.bundle, x).norm()
    }
}
