//! Ready-made semidirect product bundles used by the test suites and the
//! CLI.

use num_complex::Complex64;

use super::fell::FiniteFellBundle;
use super::subspace::CMatrix;
use super::BundleError;
use crate::group::{permutations, FiniteGroup};

fn unit(d: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

/// Diagonal matrix units `e_ii` of `M_d`.
pub fn diagonal(d: usize) -> Vec<CMatrix> {
    (0..d).map(|i| unit(d, i, i)).collect()
}

/// All matrix units of `M_d`.
pub fn full(d: usize) -> Vec<CMatrix> {
    (0..d * d).map(|k| unit(d, k / d, k % d)).collect()
}

/// Matrix units of the block-diagonal algebra `M_{b_1} ⊕ ... ⊕ M_{b_k}`.
pub fn block_diagonal(blocks: &[usize]) -> Vec<CMatrix> {
    let d: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut offset = 0;
    for &b in blocks {
        for i in 0..b {
            for j in 0..b {
                out.push(unit(d, offset + i, offset + j));
            }
        }
        offset += b;
    }
    out
}

/// Permutation matrix sending `e_i` to `e_{p(i)}`, tensored with `I_m`.
pub fn permutation_matrix(p: &[usize], m: usize) -> CMatrix {
    let d = p.len() * m;
    let mut u = CMatrix::zeros(d, d);
    for (i, &pi) in p.iter().enumerate() {
        for k in 0..m {
            u[(pi * m + k, i * m + k)] = Complex64::new(1.0, 0.0);
        }
    }
    u
}

/// `Z_2` acting on the diagonal of `M_2` by the flip.
pub fn flip_z2() -> FiniteFellBundle {
    cyclic_shift(2).expect("order 2 is supported")
}

/// `Z_k` acting on the diagonal of `M_k` by cyclic shift.
pub fn cyclic_shift(k: usize) -> Result<FiniteFellBundle, BundleError> {
    let g = FiniteGroup::cyclic(k)?;
    let unitaries = (0..k).map(|t| permutation_matrix(&(0..k).map(|i| (i + t) % k).collect::<Vec<_>>(), 1)).collect();
    FiniteFellBundle::semidirect(g, unitaries, diagonal(k))
}

/// `S_3` permuting the diagonal of `M_3`.
pub fn symmetric_permutation() -> FiniteFellBundle {
    symmetric_on_blocks(1)
}

/// `S_3` permuting three copies of `C^m` inside `M_{3m}`, acting on the
/// diagonal.
pub fn symmetric_on_blocks(m: usize) -> FiniteFellBundle {
    let g = FiniteGroup::symmetric(3).expect("S_3 is supported");
    let unitaries = permutations(3).iter().map(|p| permutation_matrix(p, m)).collect();
    FiniteFellBundle::semidirect(g, unitaries, diagonal(3 * m)).expect("permutations preserve the diagonal")
}

/// `Z_2` swapping the two summands of `M_2 ⊕ M_2` inside `M_4`.
pub fn swap_blocks_z2() -> FiniteFellBundle {
    let g = FiniteGroup::cyclic(2).expect("order 2");
    let unitaries = vec![CMatrix::identity(4, 4), permutation_matrix(&[1, 0], 2)];
    FiniteFellBundle::semidirect(g, unitaries, block_diagonal(&[2, 2])).expect("swap preserves the blocks")
}

/// Trivial action: every fiber is `span(subalg)`.
pub fn trivial_action(group: FiniteGroup, subalg: Vec<CMatrix>) -> Result<FiniteFellBundle, BundleError> {
    let d = subalg.first().map(|m| m.nrows()).unwrap_or(1);
    let unitaries = vec![CMatrix::identity(d, d); group.order()];
    FiniteFellBundle::semidirect(group, unitaries, subalg)
}

/// The bundles exercised by the numeric suites, with short names.
pub fn standard() -> Vec<(String, FiniteFellBundle)> {
    let z = |k| FiniteGroup::cyclic(k).expect("small cyclic group");
    vec![
        ("Z2 flip on C^2".into(), flip_z2()),
        ("Z2 swap on M2+M2".into(), swap_blocks_z2()),
        ("Z3 shift on C^3".into(), cyclic_shift(3).expect("order 3")),
        ("Z4 shift on C^4".into(), cyclic_shift(4).expect("order 4")),
        ("S3 permuting C^3".into(), symmetric_permutation()),
        ("S3 permuting C^2+C^2+C^2".into(), symmetric_on_blocks(2)),
        ("Z3 trivial on M2+C".into(), trivial_action(z(3), block_diagonal(&[2, 1])).expect("trivial action")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_matrices_compose_like_the_group() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let perms = permutations(3);
        for x in g.elements() {
            for y in g.elements() {
                let lhs = permutation_matrix(&perms[x], 2) * permutation_matrix(&perms[y], 2);
                assert_eq!(lhs, permutation_matrix(&perms[g.mul(x, y)], 2));
            }
        }
    }

    #[test]
    fn standard_bundles_are_valid() {
        for (name, b) in standard() {
            assert!(b.validate().passed(), "{name}");
            assert!(b.dim() <= 6 && b.order() <= 12, "{name}");
        }
        assert_eq!(block_diagonal(&[2, 1]).len(), 5);
        assert_eq!(full(2).len(), 4);
    }
}
