//! Primitive elements and the exterior-algebra structure check.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{add_into, dense_to_sparse, AxiomViolation, ExplicitHopfAlgebra, SparseVec, DEFAULT_CAP};
use crate::linalg::{fmt_rational, RatMatrix, Rational};

/// Basis of the primitive subspace, as dense coordinate vectors.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PrimitiveBasis {
    pub vectors: Vec<(u32, Vec<Rational>)>,
}

impl PrimitiveBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.vectors.iter().map(|(d, _)| *d).collect()
    }

    /// Number of basis vectors in each degree.
    pub fn counts_by_degree(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for (d, _) in &self.vectors {
            *m.entry(*d).or_insert(0) += 1;
        }
        m
    }

    /// Dense matrix with the basis vectors as columns.
    pub fn as_columns(&self, ambient: usize) -> RatMatrix {
        let cols: Vec<Vec<Rational>> = self.vectors.iter().map(|(_, v)| v.clone()).collect();
        RatMatrix::from_columns(ambient, &cols)
    }
}

/// Degreewise kernel of `x ↦ Δ(x) - x⊗1 - 1⊗x`, by exact elimination.
pub fn primitives(h: &ExplicitHopfAlgebra) -> PrimitiveBasis {
    let u = h.unit();
    let mut vectors = Vec::new();
    for r in 0..=h.basis().max_degree() {
        let cols = h.basis().of_degree(r);
        if cols.is_empty() {
            continue;
        }
        let defects: Vec<_> = cols
            .iter()
            .map(|&i| {
                let mut t = h.coproduct(i).clone();
                add_into(&mut t, (i, u), -Rational::one());
                add_into(&mut t, (u, i), -Rational::one());
                t
            })
            .collect();
        let mut row_of = BTreeMap::new();
        for t in &defects {
            for k in t.keys() {
                let next = row_of.len();
                row_of.entry(*k).or_insert(next);
            }
        }
        let mut m = RatMatrix::zeros(row_of.len(), cols.len());
        for (j, t) in defects.iter().enumerate() {
            for (k, c) in t {
                m[(row_of[k], j)] = c.clone();
            }
        }
        for kv in m.kernel() {
            let mut v = vec![Rational::zero(); h.dim()];
            for (j, &i) in cols.iter().enumerate() {
                v[i] = kv[j].clone();
            }
            vectors.push((r, v));
        }
    }
    PrimitiveBasis { vectors }
}

/// Rank comparison of `⋀^*P → H` in one degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeCheck {
    pub degree: u32,
    /// Dimension of the exterior algebra on primitives in this degree.
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl DegreeCheck {
    pub fn is_bijective(&self) -> bool {
        self.rank == self.source_dim && self.rank == self.target_dim
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TheoremFailure {
    Axiom(AxiomViolation),
    /// A primitive of even degree, which cannot occur in the exterior model.
    EvenPrimitive { degree: u32 },
    TooManyPrimitives { count: usize, cap: usize },
    /// The map `⋀^*P → H` is not bijective in `degree`. `kernel` is a
    /// nonzero combination of wedge monomials mapping to zero, if any;
    /// `cokernel_dim` counts basis directions not reached.
    NotBijective {
        degree: u32,
        kernel: Option<String>,
        cokernel_dim: usize,
    },
}

impl std::fmt::Display for TheoremFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TheoremFailure::Axiom(v) => write!(f, "{v}"),
            TheoremFailure::EvenPrimitive { degree } => {
                write!(f, "primitive class in even degree {degree}")
            }
            TheoremFailure::TooManyPrimitives { count, cap } => {
                write!(f, "{count} primitives give 2^{count} monomials, over the cap {cap}")
            }
            TheoremFailure::NotBijective {
                degree,
                kernel,
                cokernel_dim,
            } => {
                write!(f, "not bijective in degree {degree}")?;
                if let Some(k) = kernel {
                    write!(f, "; kernel contains {k}")?;
                }
                if *cokernel_dim > 0 {
                    write!(f, "; cokernel has dimension {cokernel_dim}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HopfTheoremReport {
    pub primitive_degrees: Vec<u32>,
    pub degrees: Vec<DegreeCheck>,
    pub failure: Option<TheoremFailure>,
}

impl HopfTheoremReport {
    pub fn is_iso(&self) -> bool {
        self.failure.is_none()
    }
}

/// Images of all wedge monomials in the primitive basis, indexed by subset mask.
pub(crate) fn monomial_images(h: &ExplicitHopfAlgebra, prims: &PrimitiveBasis) -> Vec<SparseVec> {
    let p: Vec<SparseVec> = prims.vectors.iter().map(|(_, v)| dense_to_sparse(v)).collect();
    let k = p.len();
    let mut images = vec![SparseVec::new(); 1 << k];
    images[0] = h.basis_vec(h.unit());
    for mask in 1usize..(1 << k) {
        let top = (usize::BITS - 1 - mask.leading_zeros()) as usize;
        images[mask] = h.mul(&images[mask & !(1 << top)], &p[top]);
    }
    images
}

pub(crate) fn mask_degree(prims: &PrimitiveBasis, mask: usize) -> u32 {
    prims
        .vectors
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, (d, _))| *d)
        .sum()
}

/// Checks that `H` is the exterior algebra on its primitives: builds the
/// algebra map `⋀^*P → H` and compares ranks degree by degree.
pub fn verify_hopf_theorem(h: &ExplicitHopfAlgebra) -> HopfTheoremReport {
    let mut report = HopfTheoremReport {
        primitive_degrees: Vec::new(),
        degrees: Vec::new(),
        failure: None,
    };
    if let Err(v) = h.check_axioms() {
        report.failure = Some(TheoremFailure::Axiom(v));
        return report;
    }
    let prims = primitives(h);
    report.primitive_degrees = prims.degrees();
    if let Some(&degree) = report.primitive_degrees.iter().find(|d| *d % 2 == 0) {
        report.failure = Some(TheoremFailure::EvenPrimitive { degree });
        return report;
    }
    let k = prims.len();
    if k >= usize::BITS as usize || (1usize << k) > DEFAULT_CAP.max(h.dim()) {
        report.failure = Some(TheoremFailure::TooManyPrimitives {
            count: k,
            cap: DEFAULT_CAP.max(h.dim()),
        });
        return report;
    }
    let images = monomial_images(h, &prims);
    let top = h
        .basis()
        .max_degree()
        .max(prims.degrees().iter().sum::<u32>());
    for r in 0..=top {
        let masks: Vec<usize> = (0..images.len()).filter(|&m| mask_degree(&prims, m) == r).collect();
        let targets = h.basis().of_degree(r);
        if masks.is_empty() && targets.is_empty() {
            continue;
        }
        let row_of: BTreeMap<usize, usize> = targets.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut m = RatMatrix::zeros(targets.len(), masks.len());
        for (j, &mask) in masks.iter().enumerate() {
            for (t, c) in &images[mask] {
                m[(row_of[t], j)] = c.clone();
            }
        }
        let rank = m.rank();
        let check = DegreeCheck {
            degree: r,
            source_dim: masks.len(),
            target_dim: targets.len(),
            rank,
        };
        if !check.is_bijective() && report.failure.is_none() {
            let kernel = m.kernel().into_iter().next().map(|kv| {
                kv.iter()
                    .zip(&masks)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, &mask)| format!("{}·p[{}]", fmt_rational(c), mask_subset(mask)))
                    .collect::<Vec<_>>()
                    .join(" + ")
            });
            report.failure = Some(TheoremFailure::NotBijective {
                degree: r,
                kernel,
                cokernel_dim: targets.len() - rank,
            });
        }
        report.degrees.push(check);
    }
    report
}

fn mask_subset(mask: usize) -> String {
    (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{exterior_hopf, hopf_tensor, GradedBasis, Tensor2};
    use crate::linalg::rat;
    use std::collections::HashMap;

    #[test]
    fn primitives_of_gl2_are_the_generators() {
        let h = exterior_hopf(&[1, 3]).unwrap();
        let p = primitives(&h);
        assert_eq!(p.degrees(), vec![1, 3]);
        // mask 1 and mask 2, up to scale
        assert_eq!(dense_to_sparse(&p.vectors[0].1).keys().collect::<Vec<_>>(), vec![&1]);
        assert_eq!(dense_to_sparse(&p.vectors[1].1).keys().collect::<Vec<_>>(), vec![&2]);
    }

    #[test]
    fn primitives_of_tensor_product() {
        let a = exterior_hopf(&[1]).unwrap();
        let p = primitives(&hopf_tensor(&a, &a).unwrap());
        assert_eq!(p.degrees(), vec![1, 1]);
    }

    #[test]
    fn trivial_algebra_has_no_primitives() {
        assert!(primitives(&ExplicitHopfAlgebra::trivial()).is_empty());
        assert!(verify_hopf_theorem(&ExplicitHopfAlgebra::trivial()).is_iso());
    }

    #[test]
    fn theorem_holds_on_exterior_and_tensor() {
        let h = exterior_hopf(&[1, 1, 3, 5]).unwrap();
        let r = verify_hopf_theorem(&h);
        assert!(r.is_iso(), "{:?}", r.failure);
        assert!(r.degrees.iter().all(DegreeCheck::is_bijective));
        let t = hopf_tensor(&exterior_hopf(&[3]).unwrap(), &exterior_hopf(&[1, 5]).unwrap()).unwrap();
        let r = verify_hopf_theorem(&t);
        assert!(r.is_iso());
        assert_eq!(r.primitive_degrees, vec![1, 3, 5]);
    }

    #[test]
    fn corrupted_coproduct_fails() {
        let mut h = exterior_hopf(&[1, 3]).unwrap();
        let mut bad = h.coproduct(3).clone();
        bad.insert((1, 2), rat(7));
        h.set_coproduct(3, bad);
        let r = verify_hopf_theorem(&h);
        assert!(matches!(r.failure, Some(TheoremFailure::Axiom(_))));
    }

    // Q[x]/(x^2) with x primitive of degree 2.
    #[test]
    fn square_zero_even_class_is_not_hopf() {
        let basis = GradedBasis::new(vec![("1".into(), 0), ("x".into(), 2)], 0).unwrap();
        let mut product = HashMap::new();
        product.insert((0, 0), SparseVec::from([(0, rat(1))]));
        product.insert((0, 1), SparseVec::from([(1, rat(1))]));
        product.insert((1, 0), SparseVec::from([(1, rat(1))]));
        let coproduct = vec![
            Tensor2::from([((0, 0), rat(1))]),
            Tensor2::from([((1, 0), rat(1)), ((0, 1), rat(1))]),
        ];
        let h = ExplicitHopfAlgebra::from_tables(basis, product, coproduct, vec![rat(1), rat(0)]).unwrap();
        // Δ(x·x) = 0 but Δ(x)Δ(x) = 2x⊗x
        let r = verify_hopf_theorem(&h);
        assert!(matches!(r.failure, Some(TheoremFailure::Axiom(ref v)) if v.axiom == "coproduct is multiplicative"));
    }
}
