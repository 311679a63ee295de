//! Brute-force oracles that share no code path with the structural
//! computations they check.
//!
//! * [`enumerate_gl`] / [`enumerate_sl`] scan every matrix over `F_p`.
//! * [`enumerate_elliptic`] counts points on a Weierstrass curve.
//! * [`molien_degrees`] recovers Weyl invariant degrees from an exact
//!   Molien series over an explicitly enumerated reflection group.
//! * [`enumerate_roots`] closes the simple roots under reflections.

use num_bigint::BigInt;
use num_traits::{One, Pow};
use thiserror::Error;

use crate::model::{DynkinType, GroupExpr};

mod curves;
mod matrices;
mod roots;
mod weyl;

pub use curves::{enumerate_elliptic, find_curve_with_trace, EllipticCount};
pub use matrices::{enumerate_gl, enumerate_gl_with_budget, enumerate_sl, enumerate_sl_with_budget};
pub use roots::enumerate_roots;
pub use weyl::{molien_degrees, molien_series, order_of, WeylGroupRealization, DEFAULT_MAX_ORDER};

/// Default cap on enumeration work (number of objects scanned).
pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const BUDGET_ENV: &str = "GVC_ORACLE_BUDGET";
pub const MAX_FIELD: u64 = 101;

/// Work budget from `GVC_ORACLE_BUDGET`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum OracleError {
    #[error("enumeration of {work} objects exceeds the budget of {budget}")]
    TooLarge { work: u128, budget: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is outside the supported range")]
    FieldOutOfRange(u64),
    #[error("matrix size {0} is not supported (1..=3)")]
    UnsupportedSize(u32),
    #[error("y^2 = x^3 + {a}x + {b} is singular over F_{p}")]
    SingularCurve { a: i64, b: i64, p: u64 },
    #[error("Weyl group of {ty} has more than {cap} elements")]
    GroupTooLarge { ty: DynkinType, cap: usize },
    #[error("Molien series of {ty} does not factor: {reason}")]
    FactoringFailed { ty: DynkinType, reason: String },
    #[error("no oracle for {0}")]
    Unsupported(String),
}

impl OracleError {
    pub fn code(&self) -> &'static str {
        match self {
            OracleError::TooLarge { .. } => "TooLarge",
            OracleError::NotPrime(_) => "NotPrime",
            OracleError::FieldOutOfRange(_) => "FieldOutOfRange",
            OracleError::UnsupportedSize(_) => "UnsupportedSize",
            OracleError::SingularCurve { .. } => "SingularCurve",
            OracleError::GroupTooLarge { .. } => "GroupTooLarge",
            OracleError::FactoringFailed { .. } => "FactoringFailed",
            OracleError::Unsupported(_) => "Unsupported",
        }
    }
}

/// Trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field `F_p` with residues in `0..p`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, OracleError> {
        if !is_prime(p) {
            return Err(OracleError::NotPrime(p));
        }
        if p > MAX_FIELD {
            return Err(OracleError::FieldOutOfRange(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn elements(self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

/// Point count of `expr` over `F_p` using only enumeration oracles on the
/// leaves: GL/SL up to size 3 by matrix scans, tori through `GL_1`, and
/// elliptic curves by locating a Weierstrass model with the same charpoly.
pub fn oracle_point_count(expr: &GroupExpr, p: u64, budget: u64) -> Result<BigInt, OracleError> {
    oracle_at(&expr.normalize(), p, budget)
}

fn oracle_at(expr: &GroupExpr, p: u64, budget: u64) -> Result<BigInt, OracleError> {
    match expr {
        GroupExpr::Trivial => Ok(BigInt::one()),
        GroupExpr::Unipotent { dim } => {
            // G_a^u(F_p) is F_p^u.
            PrimeField::new(p)?;
            Ok(Pow::pow(BigInt::from(p), *dim as u64))
        }
        GroupExpr::Torus { rank } => {
            let units = enumerate_gl_with_budget(1, p, budget)?;
            Ok(Pow::pow(BigInt::from(units), *rank as u64))
        }
        GroupExpr::SimplyConnectedSimple(DynkinType::A(r)) if *r <= 2 => {
            Ok(BigInt::from(enumerate_sl_with_budget(r + 1, p, budget)?))
        }
        GroupExpr::Extension { normal, quotient } => {
            if let (GroupExpr::SimplyConnectedSimple(DynkinType::A(r)), GroupExpr::Torus { rank: 1 }) =
                (normal.as_ref(), quotient.as_ref())
            {
                if *r <= 2 {
                    return Ok(BigInt::from(enumerate_gl_with_budget(r + 1, p, budget)?));
                }
            }
            Ok(oracle_at(normal, p, budget)? * oracle_at(quotient, p, budget)?)
        }
        GroupExpr::AbelianVariety { g: 1, charpoly: Some(poly) } => {
            if poly.coeff(0) != BigInt::from(p) || !poly.is_monic() || poly.degree() != Some(2) {
                return Err(OracleError::Unsupported(format!("charpoly {poly} over F_{p}")));
            }
            let trace = -poly.coeff(1);
            let trace: i64 = trace
                .try_into()
                .map_err(|_| OracleError::Unsupported(format!("trace of {poly}")))?;
            let curve = find_curve_with_trace(p, trace)?
                .ok_or_else(|| OracleError::Unsupported(format!("no Weierstrass curve over F_{p} with trace {trace}")))?;
            Ok(BigInt::from(curve.count))
        }
        other => Err(OracleError::Unsupported(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn field_bounds() {
        assert!(PrimeField::new(101).is_ok());
        assert_eq!(PrimeField::new(103).unwrap_err().code(), "FieldOutOfRange");
        assert_eq!(PrimeField::new(9).unwrap_err().code(), "NotPrime");
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.reduce(-1), 6);
        assert_eq!(f.sub(2, 5), 4);
    }

    #[test]
    fn oracle_counts() {
        assert_eq!(oracle_point_count(&GroupExpr::gl(2), 3, DEFAULT_BUDGET).unwrap(), BigInt::from(48));
        assert_eq!(oracle_point_count(&GroupExpr::pgl(2), 3, DEFAULT_BUDGET).unwrap(), BigInt::from(24));
        assert_eq!(
            oracle_point_count(&GroupExpr::Torus { rank: 3 }, 5, DEFAULT_BUDGET).unwrap(),
            BigInt::from(64)
        );
        let e = GroupExpr::abelian(1, Some(crate::poly::IntPoly::from_i64(&[5, 3, 1])));
        assert_eq!(oracle_point_count(&e, 5, DEFAULT_BUDGET).unwrap(), BigInt::from(9));
        assert_eq!(
            oracle_point_count(&GroupExpr::simple(DynkinType::G2), 5, DEFAULT_BUDGET)
                .unwrap_err()
                .code(),
            "Unsupported"
        );
    }
}
