//! Cohomology rings of group varieties as exterior algebras.
//!
//! The cohomology of a group variety is the exterior algebra on its
//! primitive classes, and an extension `N → G → Q` contributes the union of
//! the primitive generators of `N` and `Q`. So a presentation is just a
//! sorted multiset of odd-degree generators, each annotated with how the
//! standard Frobenius acts on it.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::model::{join_path, GroupExpr};
use crate::poly::IntPoly;

/// Frobenius behaviour attached to a generator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Frobenius {
    /// Eigenvalue `q^d` under the standard Frobenius of a split form.
    LinearWeight(u32),
    /// One of the `2g` classes of `H^1` of an abelian variety. The action is
    /// only known on the whole block through the node's charpoly.
    AbelianSlot {
        node: String,
        charpoly: Option<IntPoly>,
        slot: u32,
    },
    Unspecified,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Generator {
    pub label: String,
    pub degree: u32,
    pub frobenius: Frobenius,
}

/// Odd-degree primitive generators, sorted by `(degree, label)`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CohomologyPresentation {
    generators: Vec<Generator>,
}

impl CohomologyPresentation {
    pub fn from_generators(mut generators: Vec<Generator>) -> Self {
        debug_assert!(generators.iter().all(|g| g.degree % 2 == 1));
        generators.sort_by(|a, b| (a.degree, &a.label).cmp(&(b.degree, &b.label)));
        CohomologyPresentation { generators }
    }

    /// Presentation with unlabeled generators of the given degrees.
    pub fn from_degrees(degrees: &[u32]) -> Self {
        Self::from_generators(
            degrees
                .iter()
                .enumerate()
                .map(|(i, &d)| Generator {
                    label: format!("x{i:02}"),
                    degree: d,
                    frobenius: Frobenius::Unspecified,
                })
                .collect(),
        )
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    /// Multiset union of two presentations.
    pub fn union(&self, other: &CohomologyPresentation) -> CohomologyPresentation {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Self::from_generators(gens)
    }

    pub fn poincare(&self) -> PoincarePolynomial {
        self.generators
            .iter()
            .fold(PoincarePolynomial::one(), |p, g| p.times_one_plus_t_pow(g.degree))
    }

    pub fn betti(&self, r: usize) -> BigUint {
        self.poincare().coeff(r)
    }

    /// Alternating sum of Betti numbers: 1 without generators, 0 otherwise.
    pub fn euler_characteristic(&self) -> i64 {
        if self.generators.is_empty() {
            1
        } else {
            0
        }
    }

    /// Top nonvanishing degree, the sum of the generator degrees.
    pub fn cohomological_dimension(&self) -> u64 {
        self.generators.iter().map(|g| g.degree as u64).sum()
    }
}

/// Generators of `H^*(expr)`, labeled by their path in the normalized tree.
pub fn presentation(expr: &GroupExpr) -> CohomologyPresentation {
    let mut gens = Vec::new();
    collect(&expr.normalize(), "", &mut gens);
    CohomologyPresentation::from_generators(gens)
}

fn collect(expr: &GroupExpr, path: &str, out: &mut Vec<Generator>) {
    match expr {
        GroupExpr::Trivial | GroupExpr::Unipotent { .. } => {}
        GroupExpr::Torus { rank } => {
            let node = join_path(path, "torus");
            out.extend((1..=*rank).map(|i| Generator {
                label: format!("{node}.g{i}"),
                degree: 1,
                frobenius: Frobenius::LinearWeight(1),
            }));
        }
        GroupExpr::AbelianVariety { g, charpoly } => {
            let node = join_path(path, "ab");
            out.extend((1..=2 * *g).map(|i| Generator {
                label: format!("{node}.g{i}"),
                degree: 1,
                frobenius: Frobenius::AbelianSlot {
                    node: node.clone(),
                    charpoly: charpoly.clone(),
                    slot: i,
                },
            }));
        }
        GroupExpr::SimplyConnectedSimple(t) => {
            let node = join_path(path, &format!("ss.{t}"));
            out.extend(t.degrees().into_iter().enumerate().map(|(i, d)| Generator {
                label: format!("{node}.g{}", i + 1),
                degree: 2 * d - 1,
                frobenius: Frobenius::LinearWeight(d),
            }));
        }
        GroupExpr::Extension { normal, quotient } => {
            collect(normal, &join_path(path, "ext.n"), out);
            collect(quotient, &join_path(path, "ext.q"), out);
        }
        // Unreachable after normalization; kept total for direct callers.
        GroupExpr::Product(factors) => {
            for (i, f) in factors.iter().enumerate() {
                collect(f, &join_path(path, &format!("prod.{i}")), out);
            }
        }
        GroupExpr::Isogenous(inner) => collect(inner, path, out),
    }
}

/// Poincaré polynomial with arbitrary-precision nonnegative coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PoincarePolynomial {
    coeffs: Vec<BigUint>,
}

impl PoincarePolynomial {
    pub fn one() -> Self {
        PoincarePolynomial {
            coeffs: vec![BigUint::one()],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PoincarePolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, r: usize) -> BigUint {
        self.coeffs.get(r).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Value at `t = 1`, the total dimension.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    fn times_one_plus_t_pow(mut self, k: u32) -> Self {
        let k = k as usize;
        let n = self.coeffs.len();
        self.coeffs.resize(n + k, BigUint::zero());
        for i in (0..n).rev() {
            let c = self.coeffs[i].clone();
            self.coeffs[i + k] += c;
        }
        self
    }

    pub fn mul(&self, other: &PoincarePolynomial) -> PoincarePolynomial {
        let mut out = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{c}t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DynkinType;

    fn coeffs(p: &PoincarePolynomial) -> Vec<u64> {
        p.coeffs().iter().map(|c| c.try_into().unwrap()).collect()
    }

    #[test]
    fn gl3_degrees() {
        assert_eq!(presentation(&GroupExpr::gl(3)).degrees(), vec![1, 3, 5]);
    }

    #[test]
    fn torus_h1_dimension() {
        for n in 0..6 {
            let p = presentation(&GroupExpr::Torus { rank: n });
            assert_eq!(p.betti(1), BigUint::from(n));
        }
    }

    #[test]
    fn semiabelian_h1() {
        for (n, g) in [(0, 1), (2, 3), (4, 0)] {
            let e = GroupExpr::ext(GroupExpr::Torus { rank: n }, GroupExpr::abelian(g, None));
            assert_eq!(presentation(&e).betti(1), BigUint::from(2 * g + n));
        }
    }

    #[test]
    fn unipotent_has_no_cohomology() {
        let p = presentation(&GroupExpr::Unipotent { dim: 5 });
        assert!(p.is_empty());
        assert_eq!(coeffs(&p.poincare()), vec![1]);
    }

    #[test]
    fn poincare_examples() {
        assert_eq!(coeffs(&presentation(&GroupExpr::Torus { rank: 2 }).poincare()), vec![1, 2, 1]);
        assert_eq!(coeffs(&presentation(&GroupExpr::gl(2)).poincare()), vec![1, 1, 0, 1, 1]);
        assert_eq!(
            coeffs(&presentation(&GroupExpr::gl(3)).poincare()),
            vec![1, 1, 0, 1, 1, 1, 1, 0, 1, 1]
        );
    }

    #[test]
    fn betti_reads() {
        let gl2 = presentation(&GroupExpr::gl(2));
        assert_eq!(gl2.betti(2), BigUint::zero());
        assert_eq!(gl2.betti(99), BigUint::zero());
        assert_eq!(presentation(&GroupExpr::abelian(1, None)).betti(1), BigUint::from(2u32));
    }

    #[test]
    fn euler_and_cd() {
        assert_eq!(presentation(&GroupExpr::Trivial).euler_characteristic(), 1);
        assert_eq!(presentation(&GroupExpr::Torus { rank: 1 }).euler_characteristic(), 0);
        assert_eq!(presentation(&GroupExpr::gl(3)).euler_characteristic(), 0);
        assert_eq!(presentation(&GroupExpr::abelian(3, None)).cohomological_dimension(), 6);
        assert_eq!(presentation(&GroupExpr::Torus { rank: 4 }).cohomological_dimension(), 4);
        assert_eq!(presentation(&GroupExpr::gl(2)).cohomological_dimension(), 4);
    }

    #[test]
    fn labels_follow_tree_paths() {
        let p = presentation(&GroupExpr::ext(
            GroupExpr::Torus { rank: 1 },
            GroupExpr::simple(DynkinType::A(2)),
        ));
        let labels: Vec<_> = p.generators().iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["ext.n.torus.g1", "ext.q.ss.A2.g1", "ext.q.ss.A2.g2"]);
        assert_eq!(p.generators()[2].frobenius, Frobenius::LinearWeight(3));
    }

    #[test]
    fn isogeny_is_invisible() {
        let e = GroupExpr::ext(GroupExpr::abelian(2, None), GroupExpr::gl(2));
        assert_eq!(presentation(&GroupExpr::Isogenous(Box::new(e.clone()))), presentation(&e));
    }

    #[test]
    fn display() {
        let p = presentation(&GroupExpr::gl(2)).poincare();
        assert_eq!(p.to_string(), "1 + t + t^3 + t^4");
    }
}
