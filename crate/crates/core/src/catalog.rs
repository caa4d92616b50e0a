//! A small catalog of solvable algebras used by tests, examples and the CLI.

use num::Zero;

use crate::liealg::StructureConstants;
use crate::scalars::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Brackets given one-based as `(j, k, [(i, coeff)])`.
fn table(dim: usize, rows: &[(usize, usize, Vec<(usize, Rational)>)]) -> StructureConstants {
    let mut s = StructureConstants::zero(dim);
    for (j, k, entries) in rows {
        let mut v = vec![Rational::zero(); dim];
        for (i, c) in entries {
            v[i - 1] = c.clone();
        }
        s.set_bracket(j - 1, k - 1, &v);
    }
    s
}

pub fn abelian(n: usize) -> StructureConstants {
    StructureConstants::abelian(n)
}

/// `[e2, e3] = e1`
pub fn heisenberg() -> StructureConstants {
    table(3, &[(2, 3, vec![(1, q(1, 1))])])
}

/// `[e1, e2] = e1`
pub fn affine_line() -> StructureConstants {
    table(2, &[(1, 2, vec![(1, q(1, 1))])])
}

/// Filiform nilpotent: `[e4, e3] = e2`, `[e4, e2] = e1`.
pub fn filiform4() -> StructureConstants {
    table(4, &[(4, 3, vec![(2, q(1, 1))]), (4, 2, vec![(1, q(1, 1))])])
}

/// Five-dimensional family with `[e1,e4] = b e1`, `[e1,e5] = a e1`,
/// `[e2,e4] = e2`, `[e2,e5] = -e3`, `[e3,e4] = e3`, `[e3,e5] = e2`.
pub fn a5(a: Rational, b: Rational) -> StructureConstants {
    table(
        5,
        &[
            (1, 4, vec![(1, b)]),
            (1, 5, vec![(1, a)]),
            (2, 4, vec![(2, q(1, 1))]),
            (2, 5, vec![(3, q(-1, 1))]),
            (3, 4, vec![(3, q(1, 1))]),
            (3, 5, vec![(2, q(1, 1))]),
        ],
    )
}

/// `[e3, e1] = e1 + e2`, `[e3, e2] = e1`: `ad(e3)` has eigenvalues
/// `(1 ± √5)/2`, an irrational ratio.
pub fn golden3() -> StructureConstants {
    table(3, &[(3, 1, vec![(1, q(1, 1)), (2, q(1, 1))]), (3, 2, vec![(1, q(1, 1))])])
}

/// Named catalog entries, all solvable and given in adapted bases.
pub fn catalog() -> Vec<(String, StructureConstants)> {
    let mut out: Vec<(String, StructureConstants)> = (1..=5).map(|n| (format!("abelian{n}"), abelian(n))).collect();
    out.push(("heisenberg".into(), heisenberg()));
    out.push(("affine_line".into(), affine_line()));
    out.push(("filiform4".into(), filiform4()));
    out.push(("a5_1_2".into(), a5(q(1, 1), q(2, 1))));
    out.push(("a5_-1/2_3".into(), a5(q(-1, 2), q(3, 1))));
    out.push(("golden3".into(), golden3()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::AdaptedChain;

    #[test]
    fn catalog_is_valid_and_adapted() {
        for (name, c) in catalog() {
            assert!(c.validate().valid, "{name}");
            assert!(c.is_solvable(), "{name}");
            let (p, _) = c.adapted_chain().unwrap();
            assert!(p.is_identity(), "{name}");
            AdaptedChain::from_adapted(c).unwrap();
        }
    }
}
