//! Graded traces of endomorphisms, the sequence `d_n`, truncated zeta
//! series and point counts over finite fields.
//!
//! An endomorphism acts on the primitive generators block by block. On an
//! exterior algebra with odd-degree generators the alternating trace of
//! the induced action is `det(I - M)` on primitives; that closed form is
//! used here and cross-checked against an explicit lift in the tests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::cohomology::{CohomologyPresentation, Frobenius};
use crate::linalg::{fmt_rational, RatMatrix, Rational};
use crate::model::{join_path, GroupExpr, ValidationError};
use crate::oracle::is_prime;
use crate::poly::IntPoly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BlockAction {
    Matrix(RatMatrix),
    /// Acts through the companion matrix of a monic integer polynomial.
    CharPoly(IntPoly),
}

impl BlockAction {
    pub fn size(&self) -> usize {
        match self {
            BlockAction::Matrix(m) => m.rows(),
            BlockAction::CharPoly(p) => p.degree().unwrap_or(0),
        }
    }

    pub fn matrix(&self) -> RatMatrix {
        match self {
            BlockAction::Matrix(m) => m.clone(),
            BlockAction::CharPoly(p) => RatMatrix::companion(p),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub labels: Vec<String>,
    pub action: BlockAction,
}

/// Action on primitive generators, one block per invariant subspace.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct EndomorphismAction {
    pub blocks: Vec<Block>,
}

impl EndomorphismAction {
    /// Every generator scaled by `m`, one block per generator.
    pub fn scalar(pres: &CohomologyPresentation, m: &Rational) -> Self {
        EndomorphismAction {
            blocks: pres
                .generators()
                .iter()
                .map(|g| Block {
                    labels: vec![g.label.clone()],
                    action: BlockAction::Matrix(RatMatrix::scalar(1, m)),
                })
                .collect(),
        }
    }

    pub fn identity(pres: &CohomologyPresentation) -> Self {
        Self::scalar(pres, &Rational::one())
    }
}

/// `d_1, …, d_N`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TraceSequence {
    pub values: Vec<Rational>,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum DynamicsError {
    #[error("block mismatch: {0}")]
    BlockMismatch(String),
    #[error("{node}: abelian variety has no Frobenius charpoly")]
    MissingCharPoly { node: String },
    #[error("{node}: charpoly constant term {found} is not q^g = {expected}")]
    BadCharPolyConstantTerm {
        node: String,
        expected: BigInt,
        found: BigInt,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("generator {0} has no Frobenius annotation")]
    UnspecifiedFrobenius(String),
    #[error("truncation order {order} exceeds the {available} available terms")]
    OrderTooLarge { order: usize, available: usize },
    #[error("invalid expression: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ValidationError>),
}

impl DynamicsError {
    pub fn code(&self) -> &'static str {
        match self {
            DynamicsError::BlockMismatch(_) => "BlockMismatch",
            DynamicsError::MissingCharPoly { .. } => "MissingCharPoly",
            DynamicsError::BadCharPolyConstantTerm { .. } => "BadCharPolyConstantTerm",
            DynamicsError::NotPrime(_) => "NotPrime",
            DynamicsError::UnspecifiedFrobenius(_) => "UnspecifiedFrobenius",
            DynamicsError::OrderTooLarge { .. } => "OrderTooLarge",
            DynamicsError::Invalid(_) => "Invalid",
        }
    }
}

/// Blocks paired with the positions of their labels in `pres`, after
/// checking that they partition the generators and respect degrees.
fn resolve<'a>(
    pres: &CohomologyPresentation,
    act: &'a EndomorphismAction,
) -> Result<Vec<(Vec<usize>, &'a BlockAction)>, DynamicsError> {
    let mut seen = vec![false; pres.len()];
    let mut out = Vec::with_capacity(act.blocks.len());
    for block in &act.blocks {
        let mut pos = Vec::with_capacity(block.labels.len());
        for label in &block.labels {
            let i = pres
                .index_of(label)
                .ok_or_else(|| DynamicsError::BlockMismatch(format!("unknown generator {label}")))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(DynamicsError::BlockMismatch(format!("{label} is in two blocks")));
            }
            pos.push(i);
        }
        if block.action.size() != pos.len() {
            return Err(DynamicsError::BlockMismatch(format!(
                "block of {} generators has an action of size {}",
                pos.len(),
                block.action.size()
            )));
        }
        if let BlockAction::Matrix(m) = &block.action {
            if !m.is_square() {
                return Err(DynamicsError::BlockMismatch("block matrix is not square".into()));
            }
        }
        let degrees: Vec<u32> = pos.iter().map(|&i| pres.generators()[i].degree).collect();
        if degrees.windows(2).any(|w| w[0] != w[1]) {
            return Err(DynamicsError::BlockMismatch(format!(
                "block {} mixes degrees {:?}",
                block.labels.join(","),
                degrees
            )));
        }
        out.push((pos, &block.action));
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(DynamicsError::BlockMismatch(format!(
            "generator {} is not covered",
            pres.generators()[i].label
        )));
    }
    Ok(out)
}

/// Full generator-space matrix (in presentation order) of a block action.
pub fn generator_matrix(pres: &CohomologyPresentation, act: &EndomorphismAction) -> Result<RatMatrix, DynamicsError> {
    let blocks = resolve(pres, act)?;
    let mut m = RatMatrix::zeros(pres.len(), pres.len());
    for (pos, action) in blocks {
        let b = action.matrix();
        for (a, &i) in pos.iter().enumerate() {
            for (c, &j) in pos.iter().enumerate() {
                m[(i, j)] = b[(a, c)].clone();
            }
        }
    }
    Ok(m)
}

/// `Σ_r (-1)^r tr(σ^* | H^r)`, computed as `∏_blocks det(I - M)`.
pub fn graded_trace(pres: &CohomologyPresentation, act: &EndomorphismAction) -> Result<Rational, DynamicsError> {
    let blocks = resolve(pres, act)?;
    Ok(blocks.iter().fold(Rational::one(), |acc, (_, a)| {
        let m = a.matrix();
        acc * RatMatrix::identity(m.rows()).sub(&m).det()
    }))
}

/// `d_n` for `n = 1..=n_max`: graded traces of the iterates.
pub fn d_sequence(
    pres: &CohomologyPresentation,
    act: &EndomorphismAction,
    n_max: usize,
) -> Result<TraceSequence, DynamicsError> {
    let blocks = resolve(pres, act)?;
    let bases: Vec<RatMatrix> = blocks.iter().map(|(_, a)| a.matrix()).collect();
    let mut powers = bases.clone();
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n > 1 {
            for (p, b) in powers.iter_mut().zip(&bases) {
                *p = &*p * b;
            }
        }
        let d = powers.iter().fold(Rational::one(), |acc, m| {
            acc * RatMatrix::identity(m.rows()).sub(m).det()
        });
        values.push(d);
    }
    Ok(TraceSequence { values })
}

/// Coefficients `z_0..=z_order` of `exp(Σ_{n≤order} d_n t^n / n)`.
pub fn zeta_series(seq: &TraceSequence, order: usize) -> Result<Vec<Rational>, DynamicsError> {
    if order > seq.values.len() {
        return Err(DynamicsError::OrderTooLarge {
            order,
            available: seq.values.len(),
        });
    }
    // Z' = L' Z  gives  n z_n = Σ_{k=1}^{n} d_k z_{n-k}.
    let mut z = vec![Rational::one()];
    for n in 1..=order {
        let s = (1..=n).fold(Rational::zero(), |acc, k| acc + &seq.values[k - 1] * &z[n - k]);
        z.push(s / Rational::from_integer(BigInt::from(n)));
    }
    Ok(z)
}

fn pow_big(q: u64, e: u64) -> BigInt {
    Pow::pow(BigInt::from(q), e)
}

/// The standard Frobenius over `F_q`: `q^d` on a linear generator of weight
/// `d`, and the stored charpoly on each abelian block.
pub fn standard_frobenius(pres: &CohomologyPresentation, q: u64) -> Result<EndomorphismAction, DynamicsError> {
    let mut blocks = Vec::new();
    let mut abelian: BTreeMap<String, (Option<IntPoly>, Vec<(u32, String)>)> = BTreeMap::new();
    for g in pres.generators() {
        match &g.frobenius {
            Frobenius::LinearWeight(d) => blocks.push(Block {
                labels: vec![g.label.clone()],
                action: BlockAction::Matrix(RatMatrix::scalar(1, &Rational::from_integer(pow_big(q, *d as u64)))),
            }),
            Frobenius::AbelianSlot { node, charpoly, slot } => {
                let entry = abelian.entry(node.clone()).or_insert_with(|| (charpoly.clone(), Vec::new()));
                entry.1.push((*slot, g.label.clone()));
            }
            Frobenius::Unspecified => return Err(DynamicsError::UnspecifiedFrobenius(g.label.clone())),
        }
    }
    for (node, (charpoly, mut slots)) in abelian {
        let p = charpoly.ok_or_else(|| DynamicsError::MissingCharPoly { node: node.clone() })?;
        let g = slots.len() as u64 / 2;
        check_constant_term(&node, &p, q, g)?;
        slots.sort();
        blocks.push(Block {
            labels: slots.into_iter().map(|(_, l)| l).collect(),
            action: BlockAction::CharPoly(p),
        });
    }
    Ok(EndomorphismAction { blocks })
}

/// Scalar `q^{-d}` on each linear generator of weight `d`.
pub fn inverse_weight_action(pres: &CohomologyPresentation, q: u64) -> Result<EndomorphismAction, DynamicsError> {
    let blocks = pres
        .generators()
        .iter()
        .map(|g| match g.frobenius {
            Frobenius::LinearWeight(d) => Ok(Block {
                labels: vec![g.label.clone()],
                action: BlockAction::Matrix(RatMatrix::scalar(
                    1,
                    &Rational::new(BigInt::one(), pow_big(q, d as u64)),
                )),
            }),
            _ => Err(DynamicsError::BlockMismatch(format!("{} is not a linear generator", g.label))),
        })
        .collect::<Result<_, _>>()?;
    Ok(EndomorphismAction { blocks })
}

fn check_constant_term(node: &str, p: &IntPoly, q: u64, g: u64) -> Result<(), DynamicsError> {
    let expected = pow_big(q, g);
    let found = p.coeff(0);
    if found != expected {
        return Err(DynamicsError::BadCharPolyConstantTerm {
            node: node.to_string(),
            expected,
            found,
        });
    }
    Ok(())
}

/// `#G(F_q)` from the structure: `q^u` for vector groups, `(q-1)^n` for
/// tori, `q^{dim} ∏ (1 - q^{-d_i})` for simply connected simple groups and
/// the charpoly at 1 for abelian varieties, multiplied over the tree.
pub fn lefschetz_point_count(expr: &GroupExpr, q: u64) -> Result<BigInt, DynamicsError> {
    if !is_prime(q) {
        return Err(DynamicsError::NotPrime(q));
    }
    expr.validate().map_err(DynamicsError::Invalid)?;
    count_at(expr, "", q)
}

fn count_at(expr: &GroupExpr, path: &str, q: u64) -> Result<BigInt, DynamicsError> {
    Ok(match expr {
        GroupExpr::Trivial => BigInt::one(),
        GroupExpr::Unipotent { dim } => pow_big(q, *dim as u64),
        GroupExpr::Torus { rank } => Pow::pow(BigInt::from(q) - 1, *rank as u64),
        GroupExpr::SimplyConnectedSimple(t) => {
            let mut c = pow_big(q, t.positive_roots());
            for d in t.degrees() {
                c *= pow_big(q, d as u64) - 1;
            }
            c
        }
        GroupExpr::AbelianVariety { g, charpoly } => {
            let node = join_path(path, "ab");
            let p = charpoly
                .as_ref()
                .ok_or_else(|| DynamicsError::MissingCharPoly { node: node.clone() })?;
            check_constant_term(&node, p, q, *g as u64)?;
            p.eval(&BigInt::one())
        }
        GroupExpr::Extension { normal, quotient } => {
            count_at(normal, &join_path(path, "ext.n"), q)? * count_at(quotient, &join_path(path, "ext.q"), q)?
        }
        GroupExpr::Product(factors) => {
            let mut c = BigInt::one();
            for (i, f) in factors.iter().enumerate() {
                c *= count_at(f, &join_path(path, &format!("prod.{i}")), q)?;
            }
            c
        }
        GroupExpr::Isogenous(inner) => count_at(inner, &join_path(path, "isog"), q)?,
    })
}

/// Soft checks on abelian charpolys: the functional equation
/// `c_i = q^{g-i} c_{2g-i}` of a Weil polynomial.
pub fn charpoly_warnings(expr: &GroupExpr, q: u64) -> Vec<String> {
    let mut out = Vec::new();
    warn_at(expr, "", q, &mut out);
    out
}

fn warn_at(expr: &GroupExpr, path: &str, q: u64, out: &mut Vec<String>) {
    match expr {
        GroupExpr::AbelianVariety { g, charpoly: Some(p) } => {
            let g = *g as usize;
            for i in 0..g {
                let lhs = p.coeff(i);
                let rhs = pow_big(q, (g - i) as u64) * p.coeff(2 * g - i);
                if lhs != rhs {
                    out.push(format!(
                        "{}: charpoly {} fails the functional equation at t^{}",
                        join_path(path, "ab"),
                        p,
                        i
                    ));
                    break;
                }
            }
        }
        GroupExpr::Extension { normal, quotient } => {
            warn_at(normal, &join_path(path, "ext.n"), q, out);
            warn_at(quotient, &join_path(path, "ext.q"), q, out);
        }
        GroupExpr::Product(fs) => {
            for (i, f) in fs.iter().enumerate() {
                warn_at(f, &join_path(path, &format!("prod.{i}")), q, out);
            }
        }
        GroupExpr::Isogenous(inner) => warn_at(inner, &join_path(path, "isog"), q, out),
        _ => {}
    }
}

pub fn fmt_sequence(seq: &TraceSequence) -> Vec<String> {
    seq.values.iter().map(fmt_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::presentation;
    use crate::hopf::exterior_hopf;
    use crate::linalg::{rat, rat_frac};

    fn scalar_block(label: &str, m: i64) -> Block {
        Block {
            labels: vec![label.into()],
            action: BlockAction::Matrix(RatMatrix::scalar(1, &rat(m))),
        }
    }

    #[test]
    fn identity_trace_vanishes() {
        let p = presentation(&GroupExpr::gl(3));
        assert_eq!(graded_trace(&p, &EndomorphismAction::identity(&p)).unwrap(), rat(0));
        let t = presentation(&GroupExpr::Trivial);
        assert_eq!(graded_trace(&t, &EndomorphismAction::identity(&t)).unwrap(), rat(1));
    }

    #[test]
    fn torus_multiplication_by_m() {
        let p = presentation(&GroupExpr::Torus { rank: 1 });
        for m in [-3, 0, 2, 7] {
            let act = EndomorphismAction::scalar(&p, &rat(m));
            // H^0 contributes 1, H^1 contributes -m.
            assert_eq!(graded_trace(&p, &act).unwrap(), rat(1 - m));
        }
    }

    #[test]
    fn torus_times_elliptic() {
        let e = GroupExpr::ext(GroupExpr::Torus { rank: 1 }, GroupExpr::abelian(1, None));
        let p = presentation(&e);
        let q = 5;
        let act = EndomorphismAction {
            blocks: vec![
                scalar_block("ext.n.torus.g1", q),
                Block {
                    labels: vec!["ext.q.ab.g1".into(), "ext.q.ab.g2".into()],
                    action: BlockAction::CharPoly(IntPoly::from_i64(&[5, 3, 1])),
                },
            ],
        };
        assert_eq!(graded_trace(&p, &act).unwrap(), rat((1 - q) * 9));
    }

    #[test]
    fn block_errors() {
        let p = presentation(&GroupExpr::Torus { rank: 2 });
        let missing = EndomorphismAction {
            blocks: vec![scalar_block("torus.g1", 2)],
        };
        assert_eq!(graded_trace(&p, &missing).unwrap_err().code(), "BlockMismatch");
        let twice = EndomorphismAction {
            blocks: vec![scalar_block("torus.g1", 2), scalar_block("torus.g1", 2)],
        };
        assert!(graded_trace(&p, &twice).is_err());
        let wrong_size = EndomorphismAction {
            blocks: vec![Block {
                labels: vec!["torus.g1".into(), "torus.g2".into()],
                action: BlockAction::Matrix(RatMatrix::identity(3)),
            }],
        };
        assert!(graded_trace(&p, &wrong_size).is_err());
        let gl2 = presentation(&GroupExpr::gl(2));
        let mixed = EndomorphismAction {
            blocks: vec![Block {
                labels: gl2.generators().iter().map(|g| g.label.clone()).collect(),
                action: BlockAction::Matrix(RatMatrix::identity(2)),
            }],
        };
        assert!(graded_trace(&gl2, &mixed).unwrap_err().to_string().contains("mixes degrees"));
    }

    #[test]
    fn doubling_on_gm() {
        let p = presentation(&GroupExpr::Torus { rank: 1 });
        let seq = d_sequence(&p, &EndomorphismAction::scalar(&p, &rat(2)), 10).unwrap();
        for (i, d) in seq.values.iter().enumerate() {
            assert_eq!(*d, rat(1 - (1i64 << (i + 1))));
        }
    }

    #[test]
    fn eigenvalue_one_kills_every_term() {
        let p = presentation(&GroupExpr::Torus { rank: 2 });
        let act = EndomorphismAction {
            blocks: vec![scalar_block("torus.g1", 1), scalar_block("torus.g2", 3)],
        };
        let seq = d_sequence(&p, &act, 6).unwrap();
        assert!(seq.values.iter().all(Zero::is_zero));
    }

    #[test]
    fn d_sequence_matches_explicit_lift() {
        let p = presentation(&GroupExpr::gl(2));
        let act = EndomorphismAction {
            blocks: vec![
                scalar_block("ext.n.ss.A1.g1", 4),
                Block {
                    labels: vec!["ext.q.torus.g1".into()],
                    action: BlockAction::Matrix(RatMatrix::scalar(1, &rat_frac(-1, 3))),
                },
            ],
        };
        let h = exterior_hopf(&p.degrees()).unwrap();
        let m = generator_matrix(&p, &act).unwrap();
        let seq = d_sequence(&p, &act, 5).unwrap();
        for n in 1..=5u32 {
            let lifted = h.lift_generator_action(&m.pow(n));
            assert_eq!(h.alternating_trace(&lifted), seq.values[n as usize - 1]);
        }
    }

    #[test]
    fn zeta_examples() {
        let zero = TraceSequence {
            values: vec![rat(0); 4],
        };
        assert_eq!(zeta_series(&zero, 4).unwrap(), vec![rat(1), rat(0), rat(0), rat(0), rat(0)]);
        let one = TraceSequence { values: vec![rat(9)] };
        assert_eq!(zeta_series(&one, 1).unwrap(), vec![rat(1), rat(9)]);
        assert!(zeta_series(&one, 2).is_err());
    }

    #[test]
    fn point_counts() {
        assert_eq!(lefschetz_point_count(&GroupExpr::Torus { rank: 1 }, 5).unwrap(), BigInt::from(4));
        assert_eq!(lefschetz_point_count(&GroupExpr::gl(2), 3).unwrap(), BigInt::from(48));
        let e = GroupExpr::abelian(1, Some(IntPoly::from_i64(&[5, 3, 1])));
        assert_eq!(lefschetz_point_count(&e, 5).unwrap(), BigInt::from(9));
        assert_eq!(lefschetz_point_count(&GroupExpr::pgl(2), 3).unwrap(), BigInt::from(24));
    }

    #[test]
    fn point_count_errors() {
        let bare = GroupExpr::abelian(1, None);
        assert_eq!(lefschetz_point_count(&bare, 5).unwrap_err().code(), "MissingCharPoly");
        let e = GroupExpr::abelian(1, Some(IntPoly::from_i64(&[5, 3, 1])));
        assert_eq!(lefschetz_point_count(&e, 7).unwrap_err().code(), "BadCharPolyConstantTerm");
        assert_eq!(lefschetz_point_count(&e, 6).unwrap_err().code(), "NotPrime");
    }

    #[test]
    fn frobenius_blocks_for_gl2() {
        let p = presentation(&GroupExpr::gl(2));
        let f = standard_frobenius(&p, 5).unwrap();
        let scalars: Vec<Rational> = f.blocks.iter().map(|b| b.action.matrix()[(0, 0)].clone()).collect();
        // degree 1 (torus, weight 1) then degree 3 (A1, weight 2)
        assert_eq!(scalars, vec![rat(5), rat(25)]);
    }

    #[test]
    fn linear_count_is_q_dim_times_inverse_weight_trace() {
        for e in [GroupExpr::gl(3), GroupExpr::simple(crate::model::DynkinType::G2)] {
            let p = presentation(&e);
            for q in [2u64, 3, 5] {
                let tr = graded_trace(&p, &inverse_weight_action(&p, q).unwrap()).unwrap();
                let lhs = Rational::from_integer(lefschetz_point_count(&e, q).unwrap());
                assert_eq!(lhs, tr * Rational::from_integer(pow_big(q, e.dim().0)));
            }
        }
    }

    #[test]
    fn weil_functional_equation_warning() {
        let good = GroupExpr::abelian(1, Some(IntPoly::from_i64(&[5, 3, 1])));
        assert!(charpoly_warnings(&good, 5).is_empty());
        let odd = GroupExpr::abelian(2, Some(IntPoly::from_i64(&[25, 1, 0, 0, 1])));
        assert_eq!(charpoly_warnings(&odd, 5).len(), 1);
    }
}
