//! Finite-dimensional graded Hopf algebras given by explicit structure
//! constants over the rationals.
//!
//! Algebras are stored as multiplication and comultiplication tables on a
//! graded basis. Nothing is assumed about them: [`ExplicitHopfAlgebra::check_axioms`]
//! verifies every axiom exhaustively on basis elements, and the checks in
//! [`primitives`] and [`exactness`] only use the tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{fmt_rational, RatMatrix, Rational};

pub mod exactness;
pub mod primitives;

pub use exactness::{
    check_primitive_exactness, split_triple, tensor_split, ExactnessReport, IsoCheck, SplitTriple,
};
pub use primitives::{
    primitives, verify_hopf_theorem, DegreeCheck, HopfTheoremReport, PrimitiveBasis, TheoremFailure,
};

/// Largest basis any constructor will build unless told otherwise.
pub const DEFAULT_CAP: usize = 1 << 12;

/// Sparse vector over a basis.
pub type SparseVec = BTreeMap<usize, Rational>;
/// Sparse element of the tensor square.
pub type Tensor2 = BTreeMap<(usize, usize), Rational>;
type Tensor3 = BTreeMap<(usize, usize, usize), Rational>;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum HopfError {
    #[error("basis of dimension {requested} exceeds the cap of {cap}")]
    CapExceeded { requested: u128, cap: usize },
    #[error("generator degree {0} is not odd and positive")]
    EvenDegree(u32),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("{map} is not a Hopf morphism: {witness}")]
    NotHopfMorphism { map: &'static str, witness: String },
}

impl HopfError {
    pub fn code(&self) -> &'static str {
        match self {
            HopfError::CapExceeded { .. } => "CapExceeded",
            HopfError::EvenDegree(_) => "EvenDegree",
            HopfError::InvalidBasis(_) => "InvalidBasis",
            HopfError::NotHopfMorphism { .. } => "NotHopfMorphism",
        }
    }
}

/// Basis elements with labels and degrees; one element of degree 0 is the unit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedBasis {
    elements: Vec<(String, u32)>,
    unit: usize,
}

impl GradedBasis {
    pub fn new(elements: Vec<(String, u32)>, unit: usize) -> Result<Self, HopfError> {
        if unit >= elements.len() || elements[unit].1 != 0 {
            return Err(HopfError::InvalidBasis("unit must be a degree-0 element".into()));
        }
        if elements.iter().filter(|(_, d)| *d == 0).count() != 1 {
            return Err(HopfError::InvalidBasis(
                "exactly one basis element may have degree 0".into(),
            ));
        }
        let mut labels: Vec<&str> = elements.iter().map(|(l, _)| l.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(HopfError::InvalidBasis("duplicate labels".into()));
        }
        Ok(GradedBasis { elements, unit })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i].0
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.elements[i].1
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn max_degree(&self) -> u32 {
        self.elements.iter().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn of_degree(&self, r: u32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) == r).collect()
    }
}

/// Graded Hopf algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct ExplicitHopfAlgebra {
    basis: GradedBasis,
    /// Nonzero products of basis pairs; absent pairs multiply to zero.
    product: HashMap<(usize, usize), SparseVec>,
    coproduct: Vec<Tensor2>,
    counit: Vec<Rational>,
    /// Basis indices of designated algebra generators, if known.
    generators: Vec<usize>,
}

/// Which axiom failed, with a human-readable witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub witness: String,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails: {}", self.axiom, self.witness)
    }
}

fn koszul(a: u32, b: u32) -> bool {
    a % 2 == 1 && b % 2 == 1
}

pub(crate) fn add_into<K: Ord + Clone>(acc: &mut BTreeMap<K, Rational>, key: K, value: Rational) {
    if value.is_zero() {
        return;
    }
    let slot = acc.entry(key.clone()).or_insert_with(Rational::zero);
    *slot += value;
    if slot.is_zero() {
        acc.remove(&key);
    }
}

pub fn dense_to_sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (&i, x) in v {
        out[i] = x.clone();
    }
    out
}

fn fmt_sparse(h: &ExplicitHopfAlgebra, v: &SparseVec) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter()
        .map(|(&i, c)| format!("{}·{}", fmt_rational(c), h.basis.label(i)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn fmt_tensor(h: &ExplicitHopfAlgebra, t: &Tensor2) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter()
        .map(|(&(i, j), c)| {
            format!("{}·{}⊗{}", fmt_rational(c), h.basis.label(i), h.basis.label(j))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn mask_label(mask: usize) -> String {
    if mask == 0 {
        return "1".into();
    }
    (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| format!("e{i}"))
        .collect::<Vec<_>>()
        .join("∧")
}

impl ExplicitHopfAlgebra {
    /// Builds an algebra from raw tables without checking any axiom.
    pub fn from_tables(
        basis: GradedBasis,
        product: HashMap<(usize, usize), SparseVec>,
        coproduct: Vec<Tensor2>,
        counit: Vec<Rational>,
    ) -> Result<Self, HopfError> {
        let n = basis.len();
        if coproduct.len() != n || counit.len() != n {
            return Err(HopfError::InvalidBasis("table sizes differ from basis".into()));
        }
        let in_range = product
            .iter()
            .all(|(&(a, b), v)| a < n && b < n && v.keys().all(|&k| k < n))
            && coproduct
                .iter()
                .all(|t| t.keys().all(|&(a, b)| a < n && b < n));
        if !in_range {
            return Err(HopfError::InvalidBasis("table index out of range".into()));
        }
        let product = product.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(ExplicitHopfAlgebra {
            basis,
            product,
            coproduct,
            counit,
            generators: Vec::new(),
        })
    }

    /// One-dimensional algebra spanned by the unit.
    pub fn trivial() -> Self {
        exterior_hopf(&[]).expect("empty exterior algebra")
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis.degree(i)
    }

    pub fn unit(&self) -> usize {
        self.basis.unit()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn counit(&self) -> &[Rational] {
        &self.counit
    }

    pub fn coproduct(&self, i: usize) -> &Tensor2 {
        &self.coproduct[i]
    }

    /// Replaces one coproduct row; used to build negative controls.
    pub fn set_coproduct(&mut self, i: usize, value: Tensor2) {
        self.coproduct[i] = value;
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> Option<&SparseVec> {
        self.product.get(&(a, b))
    }

    /// Number of basis pairs with a nonzero product.
    pub fn nonzero_products(&self) -> usize {
        self.product.len()
    }

    pub fn basis_vec(&self, i: usize) -> SparseVec {
        SparseVec::from([(i, Rational::one())])
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&a, ca) in x {
            for (&b, cb) in y {
                if let Some(p) = self.product.get(&(a, b)) {
                    let c = ca * cb;
                    for (&k, ck) in p {
                        add_into(&mut out, k, &c * ck);
                    }
                }
            }
        }
        out
    }

    pub fn apply_coproduct(&self, x: &SparseVec) -> Tensor2 {
        let mut out = Tensor2::new();
        for (&a, ca) in x {
            for (&k, ck) in &self.coproduct[a] {
                add_into(&mut out, k, ca * ck);
            }
        }
        out
    }

    pub fn apply_counit(&self, x: &SparseVec) -> Rational {
        x.iter()
            .fold(Rational::zero(), |acc, (&i, c)| acc + c * &self.counit[i])
    }

    /// Multiplication in the tensor square, `(a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd`.
    pub fn tensor_mul(&self, x: &Tensor2, y: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::new();
        for (&(a, b), cx) in x {
            for (&(c, d), cy) in y {
                let (Some(ac), Some(bd)) = (self.product.get(&(a, c)), self.product.get(&(b, d)))
                else {
                    continue;
                };
                let mut coef = cx * cy;
                if koszul(self.degree(b), self.degree(c)) {
                    coef = -coef;
                }
                for (&i, ci) in ac {
                    for (&j, cj) in bd {
                        add_into(&mut out, (i, j), &coef * ci * cj);
                    }
                }
            }
        }
        out
    }

    fn delta_left(&self, t: &Tensor2) -> Tensor3 {
        let mut out = Tensor3::new();
        for (&(a, b), c) in t {
            for (&(x, y), cd) in &self.coproduct[a] {
                add_into(&mut out, (x, y, b), c * cd);
            }
        }
        out
    }

    fn delta_right(&self, t: &Tensor2) -> Tensor3 {
        let mut out = Tensor3::new();
        for (&(a, b), c) in t {
            for (&(x, y), cd) in &self.coproduct[b] {
                add_into(&mut out, (a, x, y), c * cd);
            }
        }
        out
    }

    /// Exhaustive check of every Hopf-algebra axiom on basis elements
    /// (antipode excluded): unit, grading, graded commutativity,
    /// associativity, coassociativity, counit, and multiplicativity of the
    /// coproduct and counit.
    pub fn check_axioms(&self) -> Result<(), AxiomViolation> {
        let n = self.dim();
        let u = self.unit();
        let fail = |axiom: &'static str, witness: String| Err(AxiomViolation { axiom, witness });
        let label = |i: usize| self.basis.label(i).to_string();

        for a in 0..n {
            let e = self.basis_vec(a);
            if self.mul(&self.basis_vec(u), &e) != e || self.mul(&e, &self.basis_vec(u)) != e {
                return fail("unit", label(a));
            }
        }
        for (&(a, b), v) in &self.product {
            let d = self.degree(a) + self.degree(b);
            if let Some(&k) = v.keys().find(|&&k| self.degree(k) != d) {
                return fail("grading", format!("{}·{} has a {} term", label(a), label(b), label(k)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul_basis(a, b).cloned().unwrap_or_default();
                let mut ba = self.mul_basis(b, a).cloned().unwrap_or_default();
                if koszul(self.degree(a), self.degree(b)) {
                    ba.values_mut().for_each(|c| *c = -c.clone());
                }
                if ab != ba {
                    return fail("graded commutativity", format!("{}, {}", label(a), label(b)));
                }
            }
        }
        for (&(a, b), ab) in &self.product {
            let ea = self.basis_vec(a);
            for c in 0..n {
                let ec = self.basis_vec(c);
                let left = self.mul(ab, &ec);
                let bc = self.mul_basis(b, c).cloned().unwrap_or_default();
                let right = self.mul(&ea, &bc);
                if left != right {
                    return fail(
                        "associativity",
                        format!("({}·{})·{}", label(a), label(b), label(c)),
                    );
                }
            }
        }
        // Pairs whose product vanishes still need a(bc) = 0.
        for a in 0..n {
            for (&(b, c), bc) in &self.product {
                if self.mul_basis(a, b).is_none() {
                    let right = self.mul(&self.basis_vec(a), bc);
                    if !right.is_empty() {
                        return fail(
                            "associativity",
                            format!("({}·{})·{}", label(a), label(b), label(c)),
                        );
                    }
                }
            }
        }

        if self.coproduct[u] != Tensor2::from([((u, u), Rational::one())]) {
            return fail("coproduct of unit", fmt_tensor(self, &self.coproduct[u]));
        }
        if !self.counit[u].is_one() {
            return fail("counit of unit", fmt_rational(&self.counit[u]));
        }
        for a in 0..n {
            if self.degree(a) > 0 && !self.counit[a].is_zero() {
                return fail("counit grading", label(a));
            }
            let delta = &self.coproduct[a];
            if delta
                .keys()
                .any(|&(x, y)| self.degree(x) + self.degree(y) != self.degree(a))
            {
                return fail("coproduct grading", format!("Δ({}) = {}", label(a), fmt_tensor(self, delta)));
            }
            if self.delta_left(delta) != self.delta_right(delta) {
                return fail("coassociativity", label(a));
            }
            let mut left = SparseVec::new();
            let mut right = SparseVec::new();
            for (&(x, y), c) in delta {
                add_into(&mut left, y, c * &self.counit[x]);
                add_into(&mut right, x, c * &self.counit[y]);
            }
            let e = self.basis_vec(a);
            if left != e || right != e {
                return fail("counit", format!("Δ({}) = {}", label(a), fmt_tensor(self, delta)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul_basis(a, b).cloned().unwrap_or_default();
                let lhs = self.apply_coproduct(&ab);
                let rhs = self.tensor_mul(&self.coproduct[a], &self.coproduct[b]);
                if lhs != rhs {
                    return fail(
                        "coproduct is multiplicative",
                        format!("Δ({}·{})", label(a), label(b)),
                    );
                }
                if self.apply_counit(&ab) != &self.counit[a] * &self.counit[b] {
                    return fail("counit is multiplicative", format!("{}, {}", label(a), label(b)));
                }
            }
        }
        Ok(())
    }

    /// Matrix (dim × dim) of the algebra endomorphism that sends the
    /// designated generators through `action` (column `j` is the image of
    /// generator `j`), computed by multiplying images in this algebra.
    pub fn lift_generator_action(&self, action: &RatMatrix) -> RatMatrix {
        let gens = &self.generators;
        assert_eq!(action.rows(), gens.len());
        assert_eq!(action.cols(), gens.len());
        let images: Vec<SparseVec> = (0..gens.len())
            .map(|j| {
                let mut v = SparseVec::new();
                for (i, &g) in gens.iter().enumerate() {
                    add_into(&mut v, g, action[(i, j)].clone());
                }
                v
            })
            .collect();
        let n = self.dim();
        let mut out = RatMatrix::zeros(n, n);
        for mask in 0..(1usize << gens.len()) {
            let mut img = self.basis_vec(self.unit());
            let mut source = self.basis_vec(self.unit());
            for (j, (im, &g)) in images.iter().zip(gens).enumerate() {
                if mask >> j & 1 == 1 {
                    img = self.mul(&img, im);
                    source = self.mul(&source, &self.basis_vec(g));
                }
            }
            // `source` is ± a single basis element for an exterior algebra.
            let (&col, sign) = source.iter().next().expect("generator monomial vanished");
            for (&row, c) in &img {
                out[(row, col)] = c / sign;
            }
        }
        out
    }

    /// `Σ_r (-1)^r tr(f | H^r)` for a matrix on the full basis.
    pub fn alternating_trace(&self, f: &RatMatrix) -> Rational {
        (0..self.dim()).fold(Rational::zero(), |acc, i| {
            if self.degree(i) % 2 == 1 {
                acc - &f[(i, i)]
            } else {
                acc + &f[(i, i)]
            }
        })
    }

    pub fn describe(&self, v: &SparseVec) -> String {
        fmt_sparse(self, v)
    }

    /// Whether relabeling basis element `i` of `self` as `perm[i]` of
    /// `other` makes every structure constant agree.
    pub fn same_structure_under(&self, other: &ExplicitHopfAlgebra, perm: &[usize]) -> bool {
        let n = self.dim();
        if other.dim() != n || perm.len() != n {
            return false;
        }
        let map_vec = |v: &SparseVec| -> SparseVec { v.iter().map(|(&k, c)| (perm[k], c.clone())).collect() };
        (0..n).all(|i| self.degree(i) == other.degree(perm[i]) && self.counit[i] == other.counit[perm[i]])
            && (0..n).all(|i| {
                let mapped: Tensor2 = self.coproduct[i]
                    .iter()
                    .map(|(&(a, b), c)| ((perm[a], perm[b]), c.clone()))
                    .collect();
                mapped == other.coproduct[perm[i]]
            })
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    let mine = self.mul_basis(a, b).map(map_vec).unwrap_or_default();
                    let theirs = other.mul_basis(perm[a], perm[b]).cloned().unwrap_or_default();
                    mine == theirs
                })
            })
    }
}

fn check_cap(requested: u128, cap: usize) -> Result<(), HopfError> {
    if requested > cap as u128 {
        Err(HopfError::CapExceeded { requested, cap })
    } else {
        Ok(())
    }
}

/// Exterior Hopf algebra on primitive generators of the given odd degrees.
pub fn exterior_hopf(degrees: &[u32]) -> Result<ExplicitHopfAlgebra, HopfError> {
    exterior_hopf_with_cap(degrees, DEFAULT_CAP)
}

pub fn exterior_hopf_with_cap(degrees: &[u32], cap: usize) -> Result<ExplicitHopfAlgebra, HopfError> {
    if let Some(&d) = degrees.iter().find(|&&d| d % 2 == 0) {
        return Err(HopfError::EvenDegree(d));
    }
    let l = degrees.len();
    if l >= 127 {
        return Err(HopfError::CapExceeded { requested: u128::MAX, cap });
    }
    check_cap(1u128 << l, cap)?;
    let n = 1usize << l;
    let mask_degree = |m: usize| -> u32 { (0..l).filter(|i| m >> i & 1 == 1).map(|i| degrees[i]).sum() };
    let basis = GradedBasis::new((0..n).map(|m| (mask_label(m), mask_degree(m))).collect(), 0)?;

    let mut product = HashMap::new();
    for a in 0..n {
        // Iterate over submasks of the complement of `a`.
        let free = !a & (n - 1);
        let mut b = free;
        loop {
            // Sign of moving each generator of `b` past the larger ones of `a`.
            let swaps: u32 = (0..l)
                .filter(|j| b >> j & 1 == 1)
                .map(|j| (a >> (j + 1)).count_ones())
                .sum();
            let sign = if swaps % 2 == 0 { Rational::one() } else { -Rational::one() };
            product.insert((a, b), SparseVec::from([(a | b, sign)]));
            if b == 0 {
                break;
            }
            b = (b - 1) & free;
        }
    }
    let counit = (0..n)
        .map(|m| if m == 0 { Rational::one() } else { Rational::zero() })
        .collect();
    let mut h = ExplicitHopfAlgebra {
        basis,
        product,
        coproduct: vec![Tensor2::new(); n],
        counit,
        generators: (0..l).map(|i| 1 << i).collect(),
    };
    // Δ is primitive on generators and extended multiplicatively:
    // Δ(x_S) = Δ(x_{S \ max}) · Δ(x_max).
    h.coproduct[0] = Tensor2::from([((0, 0), Rational::one())]);
    for m in 1..n {
        let top = usize::BITS - 1 - m.leading_zeros();
        let g = 1usize << top;
        let rest = m & !g;
        let prim = Tensor2::from([((g, 0), Rational::one()), ((0, g), Rational::one())]);
        h.coproduct[m] = h.tensor_mul(&h.coproduct[rest], &prim);
    }
    Ok(h)
}

/// Graded tensor product with Koszul-sign multiplication.
pub fn hopf_tensor(a: &ExplicitHopfAlgebra, b: &ExplicitHopfAlgebra) -> Result<ExplicitHopfAlgebra, HopfError> {
    hopf_tensor_with_cap(a, b, DEFAULT_CAP)
}

pub fn hopf_tensor_with_cap(
    a: &ExplicitHopfAlgebra,
    b: &ExplicitHopfAlgebra,
    cap: usize,
) -> Result<ExplicitHopfAlgebra, HopfError> {
    let (na, nb) = (a.dim(), b.dim());
    check_cap(na as u128 * nb as u128, cap)?;
    let idx = |i: usize, j: usize| i * nb + j;
    let elements = (0..na)
        .flat_map(|i| {
            (0..nb).map(move |j| (format!("{}⊗{}", a.basis.label(i), b.basis.label(j)), a.degree(i) + b.degree(j)))
        })
        .collect();
    let basis = GradedBasis::new(elements, idx(a.unit(), b.unit()))?;

    let mut product = HashMap::new();
    for (&(i, k), ik) in &a.product {
        for (&(j, l), jl) in &b.product {
            let mut sign = Rational::one();
            if koszul(b.degree(j), a.degree(k)) {
                sign = -sign;
            }
            let mut v = SparseVec::new();
            for (&p, cp) in ik {
                for (&q, cq) in jl {
                    add_into(&mut v, idx(p, q), &sign * cp * cq);
                }
            }
            if !v.is_empty() {
                product.insert((idx(i, j), idx(k, l)), v);
            }
        }
    }
    let mut coproduct = Vec::with_capacity(na * nb);
    let mut counit = Vec::with_capacity(na * nb);
    for i in 0..na {
        for j in 0..nb {
            let mut t = Tensor2::new();
            for (&(a1, a2), ca) in &a.coproduct[i] {
                for (&(b1, b2), cb) in &b.coproduct[j] {
                    let mut c = ca * cb;
                    if koszul(a.degree(a2), b.degree(b1)) {
                        c = -c;
                    }
                    add_into(&mut t, (idx(a1, b1), idx(a2, b2)), c);
                }
            }
            coproduct.push(t);
            counit.push(&a.counit[i] * &b.counit[j]);
        }
    }
    let generators = a
        .generators
        .iter()
        .map(|&g| idx(g, b.unit()))
        .chain(b.generators.iter().map(|&g| idx(a.unit(), g)))
        .collect();
    Ok(ExplicitHopfAlgebra {
        basis,
        product,
        coproduct,
        counit,
        generators,
    })
}
