//! Verification workbench for Fell bundles and graded C*-algebras: an exact
//! rewriting engine for Cuntz-Krieger algebras graded by free groups, and
//! block-matrix models of Fell bundles over finite groups.

pub mod ck;
pub mod group;
pub mod bundle;
pub mod approx;
pub mod ideals;
