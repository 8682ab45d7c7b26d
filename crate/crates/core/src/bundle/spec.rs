//! JSON form of a bundle.
//!
//! ```json
//! {"group": "Z2", "dim": 2,
//!  "fibers": [[[[1,0],[0,0],[0,0],[0,0]]], [[[0,0],[1,0],[1,0],[0,0]]]]}
//! ```
//!
//! `group` is a name (`Z4`, `S3`, `Z2xZ3`) or a multiplication table.
//! Each fiber is a list of spanning matrices, each matrix a row-major list
//! of `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fell::FiniteFellBundle;
use super::subspace::CMatrix;
use super::BundleError;
use crate::group::{FiniteGroup, GroupKind};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Table(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleSpec {
    pub group: GroupSpec,
    pub dim: usize,
    pub fibers: Vec<Vec<Vec<[f64; 2]>>>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, BundleError> {
        Ok(match self {
            GroupSpec::Named(name) => FiniteGroup::new(&name.parse::<GroupKind>()?)?,
            GroupSpec::Table(rows) => FiniteGroup::from_table(rows.clone())?,
        })
    }
}

impl BundleSpec {
    pub fn from_json(text: &str) -> Result<Self, BundleError> {
        serde_json::from_str(text).map_err(|e| BundleError::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Builds and validates the bundle.
    pub fn build(&self) -> Result<FiniteFellBundle, BundleError> {
        let (group, d, spanning) = self.parts()?;
        FiniteFellBundle::validated(group, d, spanning)
    }

    /// Builds the bundle without checking the Fell axioms.
    pub fn build_unchecked(&self) -> Result<FiniteFellBundle, BundleError> {
        let (group, d, spanning) = self.parts()?;
        FiniteFellBundle::new(group, d, spanning)
    }

    fn parts(&self) -> Result<(FiniteGroup, usize, Vec<Vec<CMatrix>>), BundleError> {
        let group = self.group.build()?;
        let d = self.dim;
        let mut spanning = Vec::with_capacity(self.fibers.len());
        for (t, fiber) in self.fibers.iter().enumerate() {
            let mut mats = Vec::with_capacity(fiber.len());
            for entries in fiber {
                if entries.len() != d * d {
                    return Err(BundleError::Spec(format!(
                        "fiber {t}: matrix has {} entries, expected {}",
                        entries.len(),
                        d * d
                    )));
                }
                let values: Vec<Complex64> = entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                mats.push(CMatrix::from_row_slice(d, d, &values));
            }
            spanning.push(mats);
        }
        Ok((group, d, spanning))
    }

    /// The orthonormal fiber bases of `bundle`, with the group as a table.
    pub fn from_bundle(bundle: &FiniteFellBundle) -> Self {
        let fibers = bundle
            .group()
            .elements()
            .map(|t| {
                bundle
                    .fiber_basis(t)
                    .iter()
                    .map(|m| m.transpose().iter().map(|c| [c.re, c.im]).collect())
                    .collect()
            })
            .collect();
        BundleSpec { group: GroupSpec::Table(bundle.group().rows()), dim: bundle.dim(), fibers }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::examples;

    #[test]
    fn named_group_round_trip() {
        let text = r#"{"group": "Z2", "dim": 2,
            "fibers": [[[[1,0],[0,0],[0,0],[0,0]], [[0,0],[0,0],[0,0],[1,0]]],
                       [[[0,0],[1,0],[0,0],[0,0]], [[0,0],[0,0],[1,0],[0,0]]]]}"#;
        let b = BundleSpec::from_json(text).unwrap().build().unwrap();
        assert_eq!(b.fiber_dims(), vec![2, 2]);
        let again = BundleSpec::from_json(&BundleSpec::from_bundle(&b).to_json()).unwrap().build().unwrap();
        assert_eq!(again.fiber_dims(), vec![2, 2]);
    }

    #[test]
    fn table_group_and_errors() {
        let b = examples::symmetric_permutation();
        let spec = BundleSpec::from_bundle(&b);
        assert!(matches!(spec.group, GroupSpec::Table(_)));
        assert_eq!(spec.build().unwrap().fiber_dims(), b.fiber_dims());
        assert!(BundleSpec::from_json("{").is_err());
        let bad = r#"{"group": "Z2", "dim": 2, "fibers": [[[[1,0]]], []]}"#;
        assert!(matches!(BundleSpec::from_json(bad).unwrap().build(), Err(BundleError::Spec(_))));
        let invalid = r#"{"group": "Z2", "dim": 1, "fibers": [[[[1,0]]], [[[0,1]]]]}"#;
        // B_g = C i is fine (i* = -i spans the same line); a wrong count is not
        assert!(BundleSpec::from_json(invalid).unwrap().build().is_ok());
        let wrong = r#"{"group": "Z3", "dim": 1, "fibers": [[[[1,0]]]]}"#;
        assert!(matches!(BundleSpec::from_json(wrong).unwrap().build(), Err(BundleError::FiberCount { .. })));
    }
}
