//! Explicit Weyl groups and their Molien series.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::OracleError;
use crate::model::DynkinType;

pub const DEFAULT_MAX_ORDER: usize = 20_000;

type IntMatrix = Vec<i64>;

/// A Weyl group as an explicit set of integer matrices.
#[derive(Clone, Debug)]
pub struct WeylGroupRealization {
    pub ty: DynkinType,
    /// Side length of the matrices.
    pub size: usize,
    pub elements: Vec<IntMatrix>,
    /// Whether this is the permutation model of type A, which carries an
    /// extra trivial summand.
    pub permutation_model: bool,
}

fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> IntMatrix {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

fn identity(n: usize) -> IntMatrix {
    let mut m = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    m
}

fn transposition(n: usize, i: usize, j: usize) -> IntMatrix {
    let mut m = identity(n);
    m[i * n + i] = 0;
    m[j * n + j] = 0;
    m[i * n + j] = 1;
    m[j * n + i] = 1;
    m
}

/// Simple reflections in the basis of simple roots.
fn root_basis_reflections(ty: DynkinType) -> Vec<IntMatrix> {
    let a = ty.cartan_matrix();
    let n = a.len();
    (0..n)
        .map(|i| {
            // s_i(α_j) = α_j - <α_j, α_i^∨> α_i; column j is the image of α_j.
            let mut m = identity(n);
            for j in 0..n {
                m[i * n + j] -= a[j][i];
            }
            m
        })
        .collect()
}

impl WeylGroupRealization {
    /// Generators of the smallest exact model: permutations for A, signed
    /// permutations for B/C, even-signed permutations for D, reflections on
    /// the root lattice otherwise.
    fn generators(ty: DynkinType) -> (usize, Vec<IntMatrix>, bool) {
        let r = ty.rank() as usize;
        let adjacent = |n: usize| (0..n - 1).map(move |i| transposition(n, i, i + 1));
        match ty {
            DynkinType::A(_) => (r + 1, adjacent(r + 1).collect(), true),
            DynkinType::B(_) | DynkinType::C(_) => {
                let mut gens: Vec<_> = adjacent(r).collect();
                let mut flip = identity(r);
                flip[r * r - 1] = -1;
                gens.push(flip);
                (r, gens, false)
            }
            DynkinType::D(_) => {
                let mut gens: Vec<_> = adjacent(r).collect();
                let mut m = identity(r);
                let (x, y) = (r - 2, r - 1);
                m[x * r + x] = 0;
                m[y * r + y] = 0;
                m[x * r + y] = -1;
                m[y * r + x] = -1;
                gens.push(m);
                (r, gens, false)
            }
            _ => (r, root_basis_reflections(ty), false),
        }
    }

    /// Closes the generators under multiplication, giving up past `cap` elements.
    pub fn generate(ty: DynkinType, cap: usize) -> Result<Self, OracleError> {
        let (size, gens, permutation_model) = Self::generators(ty);
        let start = identity(size);
        let mut seen: HashSet<IntMatrix> = HashSet::from([start.clone()]);
        let mut elements = vec![start.clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            for g in &gens {
                let next = mat_mul(size, &w, g);
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return Err(OracleError::GroupTooLarge { ty, cap });
                    }
                    elements.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(WeylGroupRealization {
            ty,
            size,
            elements,
            permutation_model,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Coefficients of `det(I - tW) = 1 + a_1 t + … + a_n t^n`, via
/// Faddeev–LeVerrier on `det(λI - W) = λ^n + a_1 λ^{n-1} + … + a_n`.
fn reversed_charpoly(n: usize, w: &[i64]) -> Vec<i64> {
    let w128: Vec<i128> = w.iter().map(|&x| x as i128).collect();
    let mut coeffs = vec![1i128];
    let mut m = vec![0i128; n * n];
    for k in 1..=n {
        // M_k = W M_{k-1} + a_{k-1} I
        let mut next = vec![0i128; n * n];
        for i in 0..n {
            for l in 0..n {
                let x = w128[i * n + l];
                if x != 0 {
                    for j in 0..n {
                        next[i * n + j] += x * m[l * n + j];
                    }
                }
            }
            next[i * n + i] += coeffs[k - 1];
        }
        m = next;
        let mut tr = 0i128;
        for i in 0..n {
            for l in 0..n {
                tr += w128[i * n + l] * m[l * n + i];
            }
        }
        debug_assert_eq!(tr % k as i128, 0);
        coeffs.push(-tr / k as i128);
    }
    coeffs.into_iter().map(|c| c as i64).collect()
}

/// Power series of `1 / P(t)` for integer `P` with `P(0) = 1`, to `t^order`.
fn inverse_series(p: &[i64], order: usize) -> Vec<BigInt> {
    let mut s: Vec<BigInt> = Vec::with_capacity(order + 1);
    s.push(BigInt::one());
    for m in 1..=order {
        let mut acc = BigInt::zero();
        for (k, &c) in p.iter().enumerate().skip(1).take(m) {
            if c != 0 {
                acc -= BigInt::from(c) * &s[m - k];
            }
        }
        s.push(acc);
    }
    s
}

/// Molien series `(1/|W|) Σ_w 1/det(I - tw)` to `t^order`, exactly.
pub fn molien_series(group: &WeylGroupRealization, order: usize) -> Vec<BigRational> {
    let mut classes: HashMap<Vec<i64>, u64> = HashMap::new();
    for w in &group.elements {
        *classes.entry(reversed_charpoly(group.size, w)).or_insert(0) += 1;
    }
    let mut total = vec![BigInt::zero(); order + 1];
    for (p, count) in &classes {
        for (t, s) in total.iter_mut().zip(inverse_series(p, order)) {
            *t += s * BigInt::from(*count);
        }
    }
    let w = BigInt::from(group.order());
    total
        .into_iter()
        .map(|c| BigRational::new(c, w.clone()))
        .collect()
}

/// Greedily peels factors `1/(1 - t^d)` off a truncated series, smallest
/// `d` first. Returns the degrees and whether the residue vanished.
fn peel(mut s: Vec<BigRational>, ty: DynkinType) -> Result<Vec<u32>, OracleError> {
    let order = s.len() - 1;
    let mut degrees = Vec::new();
    loop {
        let Some(k) = (1..=order).find(|&k| !s[k].is_zero()) else {
            return Ok(degrees);
        };
        if !s[k].is_integer() || s[k].is_negative() {
            return Err(OracleError::FactoringFailed {
                ty,
                reason: format!("coefficient {} at t^{k} after removing {degrees:?}", s[k]),
            });
        }
        // multiply by (1 - t^k)
        for i in (k..=order).rev() {
            let sub = s[i - k].clone();
            s[i] -= sub;
        }
        degrees.push(k as u32);
        if degrees.len() > 4 * order {
            return Err(OracleError::FactoringFailed {
                ty,
                reason: "too many factors".into(),
            });
        }
    }
}

/// Invariant degrees of the Weyl group of `ty`, recovered from its Molien
/// series. Fails with `GroupTooLarge` above `max_order` elements.
pub fn molien_degrees(ty: DynkinType, max_order: usize) -> Result<Vec<u32>, OracleError> {
    let group = WeylGroupRealization::generate(ty, max_order)?;
    let order = group.order() as u64;
    let mut truncation = 2 * group.size + 2;
    loop {
        let series = molien_series(&group, truncation);
        let mut degrees = peel(series, ty)?;
        let product: u64 = degrees.iter().map(|&d| d as u64).product();
        if degrees.len() == group.size && product == order {
            if group.permutation_model {
                let pos = degrees.iter().position(|&d| d == 1).ok_or_else(|| OracleError::FactoringFailed {
                    ty,
                    reason: "permutation model lacks the degree-1 invariant".into(),
                })?;
                degrees.remove(pos);
            }
            degrees.sort_unstable();
            return Ok(degrees);
        }
        if degrees.len() > group.size || product > order || truncation as u64 > order + 1 {
            return Err(OracleError::FactoringFailed {
                ty,
                reason: format!("degrees {degrees:?} at truncation {truncation} do not multiply to |W| = {order}"),
            });
        }
        truncation *= 2;
    }
}

/// Group order as `u64`, for reports.
pub fn order_of(ty: DynkinType, cap: usize) -> Result<u64, OracleError> {
    WeylGroupRealization::generate(ty, cap).map(|g| g.order().to_u64().unwrap_or(u64::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders_by_closure() {
        let cases = [
            (DynkinType::A(1), 2),
            (DynkinType::A(2), 6),
            (DynkinType::A(3), 24),
            (DynkinType::B(2), 8),
            (DynkinType::B(3), 48),
            (DynkinType::C(3), 48),
            (DynkinType::D(4), 192),
            (DynkinType::G2, 12),
            (DynkinType::F4, 1152),
        ];
        for (ty, n) in cases {
            assert_eq!(order_of(ty, DEFAULT_MAX_ORDER).unwrap(), n, "{ty}");
        }
    }

    #[test]
    fn a1_molien() {
        // ½(1/(1-t) + 1/(1+t)) on the reflection part, times 1/(1-t) for the
        // trivial summand of the permutation model.
        assert_eq!(molien_degrees(DynkinType::A(1), DEFAULT_MAX_ORDER).unwrap(), vec![2]);
    }

    #[test]
    fn small_types() {
        assert_eq!(molien_degrees(DynkinType::A(2), DEFAULT_MAX_ORDER).unwrap(), vec![2, 3]);
        assert_eq!(molien_degrees(DynkinType::G2, DEFAULT_MAX_ORDER).unwrap(), vec![2, 6]);
        assert_eq!(molien_degrees(DynkinType::B(3), DEFAULT_MAX_ORDER).unwrap(), vec![2, 4, 6]);
        assert_eq!(molien_degrees(DynkinType::D(4), DEFAULT_MAX_ORDER).unwrap(), vec![2, 4, 4, 6]);
    }

    #[test]
    fn too_large() {
        assert_eq!(
            molien_degrees(DynkinType::E6, DEFAULT_MAX_ORDER).unwrap_err().code(),
            "GroupTooLarge"
        );
    }

    #[test]
    fn charpoly_of_rotation() {
        // rotation by 90°: det(I - tW) = 1 + t^2
        assert_eq!(reversed_charpoly(2, &[0, -1, 1, 0]), vec![1, 0, 1]);
        assert_eq!(reversed_charpoly(2, &[1, 0, 0, 1]), vec![1, -2, 1]);
    }
}
