use num_complex::Complex64;
use num_rational::Rational64;

use super::{ApproxError, BundleCarrier, CkCarrier, CoefficientFunction};
use crate::bundle::examples::trivial_action;
use crate::bundle::subspace::{CMatrix, TOLERANCE};
use crate::bundle::FiniteFellBundle;
use crate::group::{enumerate_positive, FiniteGroup};

/// `a_m(t) = m^{-1/2} e(t)` for positive `t` with `|t| <= m`; words with
/// `e(t) = 0` are left out of the support.
pub fn ck_net(carrier: &CkCarrier, m: usize) -> Result<CoefficientFunction<CkCarrier>, ApproxError> {
    if m == 0 {
        return Err(ApproxError::IndexTooSmall { value: 0, min: 1 });
    }
    let alg = &carrier.algebra;
    let weight = Rational64::new(1, m as i64);
    let mut a = CoefficientFunction::empty();
    for k in 0..=m {
        for alpha in enumerate_positive(alg.rank(), k) {
            let t = alpha.to_free(alg.rank())?;
            let e = alg.range_projection(&t)?;
            a.insert(carrier, t, weight, e)?;
        }
    }
    Ok(a)
}

fn unit_section(bundle: &FiniteFellBundle) -> Result<crate::bundle::BundleElement, ApproxError> {
    let e = bundle.group().identity();
    let one = CMatrix::identity(bundle.dim(), bundle.dim());
    if bundle.fiber(e).residual_matrix(&one) > TOLERANCE {
        return Err(ApproxError::NonUnital);
    }
    Ok(bundle.single(e, one))
}

/// `a(t) = |Γ|^{-1/2} · 1` for every `t`, which makes `Φ` the identity.
pub fn uniform_net<'a>(carrier: &BundleCarrier<'a>) -> Result<CoefficientFunction<BundleCarrier<'a>>, ApproxError> {
    let bundle = carrier.bundle;
    let one = unit_section(bundle)?;
    let weight = Rational64::new(1, bundle.order() as i64);
    let mut a = CoefficientFunction::empty();
    for t in bundle.group().elements() {
        a.insert(carrier, t, weight, one.clone())?;
    }
    Ok(a)
}

fn needed_order(window: usize) -> usize {
    4 * window + 4
}

/// The scalar bundle over `Z_order`, large enough that the window
/// `-window..=window` and its differences never wrap.
pub fn folner_carrier(order: usize, window: usize) -> Result<FiniteFellBundle, ApproxError> {
    let needed = needed_order(window);
    if order < needed {
        return Err(ApproxError::WindowTooLarge { window, needed, order });
    }
    let group = FiniteGroup::cyclic(order)?;
    Ok(trivial_action(group, vec![CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0))])?)
}

/// Residue of an integer degree in `Z_order`.
pub fn cyclic_degree(t: i64, order: usize) -> usize {
    t.rem_euclid(order as i64) as usize
}

/// `a(t) = (2N+1)^{-1/2} · 1` on the window `-N..=N` of a cyclic group.
pub fn folner_net<'a>(carrier: &BundleCarrier<'a>, window: usize) -> Result<CoefficientFunction<BundleCarrier<'a>>, ApproxError> {
    let bundle = carrier.bundle;
    let order = bundle.order();
    let needed = needed_order(window);
    let g = bundle.group();
    if order < needed || (0..order).any(|k| g.mul(1 % order, k) != (k + 1) % order) {
        return Err(ApproxError::WindowTooLarge { window, needed, order });
    }
    let one = unit_section(bundle)?;
    let n = window as i64;
    let weight = Rational64::new(1, 2 * n + 1);
    let mut a = CoefficientFunction::empty();
    for t in -n..=n {
        a.insert(carrier, cyclic_degree(t, order), weight, one.clone())?;
    }
    Ok(a)
}
