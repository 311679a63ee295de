//! Exactness of `0 → PH(Q) → PH(G) → PH(N) → 0` on primitives, and the
//! splitting isomorphism `H(N) ⊗ H(Q) → H(G)` it induces.

use num_traits::{One, Zero};

use super::primitives::{monomial_images, primitives, PrimitiveBasis};
use super::{
    add_into, dense_to_sparse, exterior_hopf, hopf_tensor, ExplicitHopfAlgebra, HopfError, SparseVec, Tensor2,
};
use crate::cohomology::{CohomologyPresentation, Generator};
use crate::linalg::{RatMatrix, Rational};

/// Three explicit algebras with the pullbacks `ι^*: H(G) → H(N)` and
/// `π^*: H(Q) → H(G)`, as matrices on basis elements.
#[derive(Clone, Debug)]
pub struct SplitTriple {
    pub normal: ExplicitHopfAlgebra,
    pub total: ExplicitHopfAlgebra,
    pub quotient: ExplicitHopfAlgebra,
    pub iota_star: RatMatrix,
    pub pi_star: RatMatrix,
}

impl SplitTriple {
    pub fn check(&self) -> Result<ExactnessReport, HopfError> {
        check_primitive_exactness(&self.normal, &self.total, &self.quotient, &self.iota_star, &self.pi_star)
    }
}

fn compress(mask: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .filter(|(_, &p)| mask >> p & 1 == 1)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

fn expand(mask: usize, positions: &[usize]) -> usize {
    positions
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | 1 << p)
}

/// Builds `N`, `G`, `Q` from one presentation of `G` split into the
/// generators coming from `N` and the rest, with restriction and inclusion
/// as the canonical maps.
pub fn split_triple(
    pres: &CohomologyPresentation,
    in_normal: impl Fn(&Generator) -> bool,
) -> Result<SplitTriple, HopfError> {
    let gens = pres.generators();
    let n_pos: Vec<usize> = (0..gens.len()).filter(|&i| in_normal(&gens[i])).collect();
    let q_pos: Vec<usize> = (0..gens.len()).filter(|&i| !in_normal(&gens[i])).collect();
    let degrees = |pos: &[usize]| pos.iter().map(|&i| gens[i].degree).collect::<Vec<_>>();
    let total = exterior_hopf(&pres.degrees())?;
    let normal = exterior_hopf(&degrees(&n_pos))?;
    let quotient = exterior_hopf(&degrees(&q_pos))?;
    let q_mask = expand((1 << q_pos.len()) - 1, &q_pos);

    let mut iota_star = RatMatrix::zeros(normal.dim(), total.dim());
    for m in 0..total.dim() {
        if m & q_mask == 0 {
            iota_star[(compress(m, &n_pos), m)] = Rational::one();
        }
    }
    let mut pi_star = RatMatrix::zeros(total.dim(), quotient.dim());
    for t in 0..quotient.dim() {
        pi_star[(expand(t, &q_pos), t)] = Rational::one();
    }
    Ok(SplitTriple {
        normal,
        total,
        quotient,
        iota_star,
        pi_star,
    })
}

/// `G = N ⊗ Q` with `ι^*(a⊗b) = ε(b)a` and `π^*(b) = 1⊗b`.
pub fn tensor_split(n: &ExplicitHopfAlgebra, q: &ExplicitHopfAlgebra) -> Result<SplitTriple, HopfError> {
    let total = hopf_tensor(n, q)?;
    let nq = q.dim();
    let mut iota_star = RatMatrix::zeros(n.dim(), total.dim());
    for i in 0..n.dim() {
        for j in 0..nq {
            iota_star[(i, i * nq + j)] = q.counit()[j].clone();
        }
    }
    let mut pi_star = RatMatrix::zeros(total.dim(), nq);
    for j in 0..nq {
        pi_star[(n.unit() * nq + j, j)] = Rational::one();
    }
    Ok(SplitTriple {
        normal: n.clone(),
        total,
        quotient: q.clone(),
        iota_star,
        pi_star,
    })
}

fn columns(f: &RatMatrix) -> Vec<SparseVec> {
    (0..f.cols()).map(|j| dense_to_sparse(&f.column(j))).collect()
}

fn apply(cols: &[SparseVec], x: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (&j, c) in x {
        for (&i, ci) in &cols[j] {
            add_into(&mut out, i, c * ci);
        }
    }
    out
}

/// Verifies that `f` (columns = images of `src` basis elements) is a graded
/// Hopf-algebra morphism `src → tgt`.
pub fn check_hopf_morphism(
    map: &'static str,
    src: &ExplicitHopfAlgebra,
    tgt: &ExplicitHopfAlgebra,
    f: &RatMatrix,
) -> Result<(), HopfError> {
    let err = |witness: String| Err(HopfError::NotHopfMorphism { map, witness });
    if f.rows() != tgt.dim() || f.cols() != src.dim() {
        return err(format!(
            "matrix is {}×{}, expected {}×{}",
            f.rows(),
            f.cols(),
            tgt.dim(),
            src.dim()
        ));
    }
    let cols = columns(f);
    if cols[src.unit()] != tgt.basis_vec(tgt.unit()) {
        return err("unit is not preserved".into());
    }
    for (j, col) in cols.iter().enumerate() {
        if col.keys().any(|&i| tgt.degree(i) != src.degree(j)) {
            return err(format!("image of {} is not homogeneous of the same degree", src.basis().label(j)));
        }
        if tgt.apply_counit(col) != src.counit()[j] {
            return err(format!("counit differs on {}", src.basis().label(j)));
        }
        let lhs = tgt.apply_coproduct(col);
        let mut rhs = Tensor2::new();
        for (&(a, b), c) in src.coproduct(j) {
            for (&x, cx) in &cols[a] {
                for (&y, cy) in &cols[b] {
                    add_into(&mut rhs, (x, y), c * cx * cy);
                }
            }
        }
        if lhs != rhs {
            return err(format!("coproduct differs on {}", src.basis().label(j)));
        }
    }
    for a in 0..src.dim() {
        for b in 0..src.dim() {
            let ab = src.mul_basis(a, b).cloned().unwrap_or_default();
            if apply(&cols, &ab) != tgt.mul(&cols[a], &cols[b]) {
                return err(format!(
                    "product differs on {}·{}",
                    src.basis().label(a),
                    src.basis().label(b)
                ));
            }
        }
    }
    Ok(())
}

/// Outcome of building `s ⊗ π^*` from a section of `ι^*` on primitives.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IsoCheck {
    /// `ι^* ∘ s` is the identity on `PH(N)`.
    pub section_ok: bool,
    pub bijective: bool,
    /// Multiplicative for the Koszul product on `H(N) ⊗ H(Q)` and degree-preserving.
    pub algebra_morphism: bool,
    pub note: Option<String>,
}

impl IsoCheck {
    pub fn holds(&self) -> bool {
        self.section_ok && self.bijective && self.algebra_morphism
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactnessReport {
    /// Dimensions of `PH(Q)`, `PH(G)`, `PH(N)`.
    pub primitive_dims: [usize; 3],
    pub pi_injective: bool,
    pub middle_exact: bool,
    pub iota_surjective: bool,
    pub iso: Option<IsoCheck>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.pi_injective && self.middle_exact && self.iota_surjective
    }

    /// Exact on primitives and the induced splitting map is an isomorphism.
    pub fn holds(&self) -> bool {
        self.is_exact() && self.iso.as_ref().is_some_and(IsoCheck::holds)
    }
}

/// Checks exactness of `0 → PH(Q) → PH(G) → PH(N) → 0` by rank
/// computations, then realizes `H(N) ⊗ H(Q) ≅ H(G)` from a section.
pub fn check_primitive_exactness(
    n: &ExplicitHopfAlgebra,
    g: &ExplicitHopfAlgebra,
    q: &ExplicitHopfAlgebra,
    iota_star: &RatMatrix,
    pi_star: &RatMatrix,
) -> Result<ExactnessReport, HopfError> {
    check_hopf_morphism("iota_star", g, n, iota_star)?;
    check_hopf_morphism("pi_star", q, g, pi_star)?;

    let (pn, pg, pq) = (primitives(n), primitives(g), primitives(q));
    let pn_cols = pn.as_columns(n.dim());
    let pg_cols = pg.as_columns(g.dim());
    let pq_cols = pq.as_columns(q.dim());

    let pi_img = pi_star * &pq_cols;
    let iota_img = iota_star * &pg_cols;
    let rank_pi = pi_img.rank();
    let rank_iota = iota_img.rank();

    let pi_injective = rank_pi == pq.len();
    let composite_zero = (iota_star * &pi_img).is_zero();
    let middle_exact = composite_zero && pg.len() - rank_iota == rank_pi;
    let lands_in_pn = {
        let mut both = pn.vectors.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>();
        both.extend((0..iota_img.cols()).map(|j| iota_img.column(j)));
        RatMatrix::from_columns(n.dim(), &both).rank() == pn.len()
    };
    let iota_surjective = lands_in_pn && rank_iota == pn.len();

    let mut report = ExactnessReport {
        primitive_dims: [pq.len(), pg.len(), pn.len()],
        pi_injective,
        middle_exact,
        iota_surjective,
        iso: None,
    };
    if !report.is_exact() {
        return Ok(report);
    }

    // Section s: PH(N) → PH(G) with ι^* s = id.
    let mut section = Vec::with_capacity(pn.len());
    for k in 0..pn.len() {
        let c = iota_img
            .solve(&pn_cols.column(k))
            .expect("surjectivity checked above");
        section.push((pn.vectors[k].0, pg_cols.apply(&c)));
    }
    let section_ok = section
        .iter()
        .enumerate()
        .all(|(k, (_, v))| iota_star.apply(v) == pn_cols.column(k));

    let fail = |note: &str| IsoCheck {
        section_ok,
        bijective: false,
        algebra_morphism: false,
        note: Some(note.to_string()),
    };
    // H(N) = ⋀ PH(N): invert the monomial map to extend s multiplicatively.
    if pn.len() >= usize::BITS as usize || 1usize << pn.len() != n.dim() {
        report.iso = Some(fail("H(N) is not the exterior algebra on its primitives"));
        return Ok(report);
    }
    let mono = monomial_images(n, &pn);
    let mono_matrix = RatMatrix::from_columns(
        n.dim(),
        &mono.iter().map(|v| super::sparse_to_dense(v, n.dim())).collect::<Vec<_>>(),
    );
    let Some(mono_inv) = mono_matrix.inverse() else {
        report.iso = Some(fail("wedge monomials in PH(N) do not form a basis of H(N)"));
        return Ok(report);
    };
    let section_basis = PrimitiveBasis { vectors: section };
    let s_mono = monomial_images(g, &section_basis);
    debug_assert!(s_mono.len() == n.dim());
    // s̃(e_j) = Σ_mask (M^{-1})_{mask, j} · s-monomial(mask)
    let s_tilde: Vec<SparseVec> = (0..n.dim())
        .map(|j| {
            let mut v = SparseVec::new();
            for (mask, img) in s_mono.iter().enumerate() {
                let c = &mono_inv[(mask, j)];
                if c.is_zero() {
                    continue;
                }
                for (&i, ci) in img {
                    add_into(&mut v, i, c * ci);
                }
            }
            v
        })
        .collect();
    let pi_cols = columns(pi_star);
    let nq = q.dim();
    let phi: Vec<SparseVec> = (0..n.dim() * nq)
        .map(|u| g.mul(&s_tilde[u / nq], &pi_cols[u % nq]))
        .collect();

    let square = phi.len() == g.dim();
    let phi_matrix = RatMatrix::from_columns(
        g.dim(),
        &phi.iter().map(|v| super::sparse_to_dense(v, g.dim())).collect::<Vec<_>>(),
    );
    let bijective = square && phi_matrix.rank() == g.dim();

    let tensor = hopf_tensor(n, q)?;
    let graded = phi
        .iter()
        .enumerate()
        .all(|(u, v)| v.keys().all(|&i| g.degree(i) == tensor.degree(u)));
    let unital = phi[n.unit() * nq + q.unit()] == g.basis_vec(g.unit());
    let multiplicative = graded
        && unital
        && (0..phi.len()).all(|u| {
            (0..phi.len()).all(|w| {
                let uw = tensor.mul_basis(u, w).cloned().unwrap_or_default();
                apply(&phi, &uw) == g.mul(&phi[u], &phi[w])
            })
        });
    report.iso = Some(IsoCheck {
        section_ok,
        bijective,
        algebra_morphism: multiplicative,
        note: None,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::presentation;
    use crate::model::GroupExpr;

    #[test]
    fn split_case_is_exact() {
        let n = exterior_hopf(&[1, 3]).unwrap();
        let q = exterior_hopf(&[1]).unwrap();
        let r = tensor_split(&n, &q).unwrap().check().unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.primitive_dims, [1, 3, 2]);
    }

    #[test]
    fn generator_matching_maps_are_exact() {
        let pres = CohomologyPresentation::from_degrees(&[1, 3]);
        let t = split_triple(&pres, |g| g.degree == 1).unwrap();
        assert_eq!(t.normal.dim(), 2);
        assert_eq!(t.quotient.dim(), 2);
        let r = t.check().unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn killing_the_quotient_generator_breaks_injectivity() {
        let pres = CohomologyPresentation::from_degrees(&[1, 3]);
        let mut t = split_triple(&pres, |g| g.degree == 1).unwrap();
        t.pi_star = RatMatrix::zeros(4, 2);
        t.pi_star[(0, 0)] = Rational::one();
        let r = t.check().unwrap();
        assert!(!r.pi_injective);
        assert!(!r.is_exact());
        assert!(r.iso.is_none());
    }

    #[test]
    fn non_morphism_is_rejected() {
        let pres = CohomologyPresentation::from_degrees(&[1, 3]);
        let mut t = split_triple(&pres, |g| g.degree == 1).unwrap();
        // send the degree-3 generator of Q to the degree-1 class of G
        t.pi_star[(2, 1)] = Rational::zero();
        t.pi_star[(1, 1)] = Rational::one();
        let err = t.check().unwrap_err();
        assert_eq!(err.code(), "NotHopfMorphism");
    }

    #[test]
    fn extension_from_presentation_labels() {
        let e = GroupExpr::ext(GroupExpr::gl(2), GroupExpr::abelian(1, None));
        let pres = presentation(&e);
        let t = split_triple(&pres, |g| g.label.starts_with("ext.n.")).unwrap();
        assert!(t.check().unwrap().holds());
    }
}
