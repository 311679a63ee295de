use crate::poly::IntPoly;

use super::{OracleError, PrimeField};

/// Points on `y^2 = x^3 + ax + b` over `F_p`, including the point at infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EllipticCount {
    pub a: i64,
    pub b: i64,
    pub p: u64,
    pub count: u64,
    /// `a_p = p + 1 - count`
    pub trace: i64,
    /// `t^2 - a_p t + p`
    pub charpoly: IntPoly,
}

pub fn enumerate_elliptic(a: i64, b: i64, p: u64) -> Result<EllipticCount, OracleError> {
    let f = PrimeField::new(p)?;
    if p <= 3 {
        return Err(OracleError::FieldOutOfRange(p));
    }
    let (ar, br) = (f.reduce(a), f.reduce(b));
    let disc = f.add(
        f.mul(4, f.mul(ar, f.mul(ar, ar))),
        f.mul(27, f.mul(br, br)),
    );
    if disc == 0 {
        return Err(OracleError::SingularCurve { a, b, p });
    }
    let mut roots = vec![0u64; p as usize];
    for y in f.elements() {
        roots[f.mul(y, y) as usize] += 1;
    }
    let affine: u64 = f
        .elements()
        .map(|x| {
            let rhs = f.add(f.add(f.mul(x, f.mul(x, x)), f.mul(ar, x)), br);
            roots[rhs as usize]
        })
        .sum();
    let count = affine + 1;
    let trace = p as i64 + 1 - count as i64;
    // Hasse: |a_p| <= 2 sqrt(p)
    assert!(
        (trace * trace) as u64 <= 4 * p,
        "Hasse bound violated for ({a}, {b}, {p})"
    );
    Ok(EllipticCount {
        a,
        b,
        p,
        count,
        trace,
        charpoly: IntPoly::from_i64(&[p as i64, -trace, 1]),
    })
}

/// First curve in `(a, b)` scan order whose Frobenius trace is `trace`.
pub fn find_curve_with_trace(p: u64, trace: i64) -> Result<Option<EllipticCount>, OracleError> {
    for a in 0..p as i64 {
        for b in 0..p as i64 {
            match enumerate_elliptic(a, b, p) {
                Ok(c) if c.trace == trace => return Ok(Some(c)),
                Ok(_) | Err(OracleError::SingularCurve { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_curves() {
        let c = enumerate_elliptic(1, 1, 5).unwrap();
        assert_eq!((c.count, c.trace), (9, -3));
        assert_eq!(c.charpoly, IntPoly::from_i64(&[5, 3, 1]));
        // x ∈ F_5: f(x) = 1, 2, 4, 3, 0 → 2 + 0 + 2 + 0 + 1 affine points
        assert_eq!(enumerate_elliptic(0, 1, 5).unwrap().count, 6);
    }

    #[test]
    fn singular_and_small_fields() {
        assert_eq!(enumerate_elliptic(0, 0, 7).unwrap_err().code(), "SingularCurve");
        assert_eq!(enumerate_elliptic(1, 1, 3).unwrap_err().code(), "FieldOutOfRange");
    }

    #[test]
    fn hasse_bound_everywhere() {
        for p in (5..=101).filter(|&p| super::super::is_prime(p)) {
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    if let Ok(c) = enumerate_elliptic(a, b, p) {
                        assert!((c.trace * c.trace) as u64 <= 4 * p);
                    }
                }
            }
        }
    }
}
