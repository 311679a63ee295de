//! Structural description of group varieties.
//!
//! A [`GroupExpr`] records how a group variety is assembled from building
//! blocks (vector groups, tori, simply connected simple groups, abelian
//! varieties) by extensions, products and isogenies. Nothing here knows about
//! cohomology; that lives in [`crate::cohomology`].

use std::fmt;

use thiserror::Error;

use crate::poly::IntPoly;

/// Cartan-Killing type of a simply connected simple group.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum DynkinType {
    A(u32),
    B(u32),
    C(u32),
    D(u32),
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl DynkinType {
    pub fn rank(self) -> u32 {
        match self {
            DynkinType::A(n) | DynkinType::B(n) | DynkinType::C(n) | DynkinType::D(n) => n,
            DynkinType::E6 => 6,
            DynkinType::E7 => 7,
            DynkinType::E8 => 8,
            DynkinType::F4 => 4,
            DynkinType::G2 => 2,
        }
    }

    pub fn family(self) -> &'static str {
        match self {
            DynkinType::A(_) => "A",
            DynkinType::B(_) => "B",
            DynkinType::C(_) => "C",
            DynkinType::D(_) => "D",
            DynkinType::E6 | DynkinType::E7 | DynkinType::E8 => "E",
            DynkinType::F4 => "F",
            DynkinType::G2 => "G",
        }
    }

    /// Checks the canonical low-rank conventions. Exceptional isomorphisms
    /// are rejected with a hint naming the canonical spelling.
    pub fn check_rank(self) -> Result<(), Option<&'static str>> {
        match self {
            DynkinType::A(0) => Err(Some("A_0 is the trivial group; write trivial")),
            DynkinType::B(0) | DynkinType::C(0) | DynkinType::D(0) => Err(None),
            DynkinType::B(1) => Err(Some("B_1 ≅ A_1; write A1")),
            DynkinType::C(1) => Err(Some("C_1 ≅ A_1; write A1")),
            DynkinType::C(2) => Err(Some("C_2 ≅ B_2; write B2")),
            DynkinType::D(1) => Err(Some("D_1 is a torus, not semisimple; write torus(1)")),
            DynkinType::D(2) => Err(Some("D_2 ≅ A_1×A_1; write prod(simple(A1), simple(A1))")),
            DynkinType::D(3) => Err(Some("D_3 ≅ A_3; write A3")),
            _ => Ok(()),
        }
    }

    pub fn is_valid(self) -> bool {
        self.check_rank().is_ok()
    }

    /// Degrees of the fundamental Weyl-group invariants, ascending.
    ///
    /// Only meaningful for types accepted by [`DynkinType::check_rank`].
    pub fn degrees(self) -> Vec<u32> {
        match self {
            DynkinType::A(n) => (2..=n + 1).collect(),
            DynkinType::B(n) | DynkinType::C(n) => (1..=n).map(|i| 2 * i).collect(),
            DynkinType::D(n) => {
                let mut d: Vec<u32> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            DynkinType::G2 => vec![2, 6],
            DynkinType::F4 => vec![2, 6, 8, 12],
            DynkinType::E6 => vec![2, 5, 6, 8, 9, 12],
            DynkinType::E7 => vec![2, 6, 8, 10, 12, 14, 18],
            DynkinType::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
        }
    }

    /// `Σ (2d - 1)` over the invariant degrees.
    pub fn dimension(self) -> u64 {
        self.degrees().iter().map(|&d| 2 * d as u64 - 1).sum()
    }

    /// Number of positive roots, `Σ (d - 1)`.
    pub fn positive_roots(self) -> u64 {
        self.degrees().iter().map(|&d| d as u64 - 1).sum()
    }

    /// Cartan matrix `a[i][j] = <α_i, α_j^∨>` in Bourbaki numbering.
    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let r = self.rank() as usize;
        let mut a = vec![vec![0i64; r]; r];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self {
            DynkinType::A(_) | DynkinType::B(_) | DynkinType::C(_) => {
                for i in 1..r {
                    link(i - 1, i);
                }
            }
            DynkinType::D(_) => {
                for i in 1..r - 1 {
                    link(i - 1, i);
                }
                link(r - 3, r - 1);
            }
            DynkinType::E6 | DynkinType::E7 | DynkinType::E8 => {
                link(0, 2);
                link(1, 3);
                for i in 3..r {
                    link(i - 1, i);
                }
            }
            DynkinType::F4 => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            DynkinType::G2 => link(0, 1),
        }
        match self {
            DynkinType::B(_) => a[r - 1][r - 2] = -2,
            DynkinType::C(_) => a[r - 2][r - 1] = -2,
            DynkinType::F4 => a[2][1] = -2,
            DynkinType::G2 => a[1][0] = -3,
            _ => {}
        }
        a
    }

    /// Every valid type of rank at most `max_rank`, in a fixed order.
    pub fn all_up_to_rank(max_rank: u32) -> Vec<DynkinType> {
        let mut out = Vec::new();
        for n in 1..=max_rank {
            out.push(DynkinType::A(n));
        }
        for n in 2..=max_rank {
            out.push(DynkinType::B(n));
        }
        for n in 3..=max_rank {
            out.push(DynkinType::C(n));
        }
        for n in 4..=max_rank {
            out.push(DynkinType::D(n));
        }
        for t in [
            DynkinType::G2,
            DynkinType::F4,
            DynkinType::E6,
            DynkinType::E7,
            DynkinType::E8,
        ] {
            if t.rank() <= max_rank {
                out.push(t);
            }
        }
        out
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::E6 => write!(f, "E6"),
            DynkinType::E7 => write!(f, "E7"),
            DynkinType::E8 => write!(f, "E8"),
            DynkinType::F4 => write!(f, "F4"),
            DynkinType::G2 => write!(f, "G2"),
            t => write!(f, "{}{}", t.family(), t.rank()),
        }
    }
}

/// A group variety described by its structural decomposition.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum GroupExpr {
    Trivial,
    /// Vector group `G_a^dim`.
    Unipotent { dim: u32 },
    /// Split torus `G_m^rank`.
    Torus { rank: u32 },
    SimplyConnectedSimple(DynkinType),
    /// Abelian variety of dimension `g`, optionally with the characteristic
    /// polynomial of its Frobenius on `H^1`.
    AbelianVariety { g: u32, charpoly: Option<IntPoly> },
    /// Extension with the normal subvariety first and the quotient second.
    Extension {
        normal: Box<GroupExpr>,
        quotient: Box<GroupExpr>,
    },
    Product(Vec<GroupExpr>),
    /// Something isogenous to the inner expression.
    Isogenous(Box<GroupExpr>),
}

/// Algebraic dimension of a group variety.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Dimension(pub u64);

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ValidationError {
    #[error("{path}: {ty} is out of range{}", hint.map(|h| format!(" ({h})")).unwrap_or_default())]
    RankOutOfRange {
        path: String,
        ty: DynkinType,
        hint: Option<&'static str>,
    },
    #[error("{path}: abelian variety of dimension {g} needs a charpoly of degree {}, got degree {found}", 2 * g)]
    BadCharPolyDegree { path: String, g: u32, found: i64 },
    #[error("{path}: charpoly {poly} is not monic")]
    CharPolyNotMonic { path: String, poly: IntPoly },
    #[error("{path}: product needs at least one factor")]
    EmptyProduct { path: String },
}

impl ValidationError {
    pub fn code(&self) -> &'static str {
        match self {
            ValidationError::RankOutOfRange { .. } => "RankOutOfRange",
            ValidationError::BadCharPolyDegree { .. } => "BadCharPolyDegree",
            ValidationError::CharPolyNotMonic { .. } => "CharPolyNotMonic",
            ValidationError::EmptyProduct { .. } => "EmptyProduct",
        }
    }
}

pub(crate) fn join_path(prefix: &str, seg: &str) -> String {
    if prefix.is_empty() {
        seg.to_string()
    } else {
        format!("{prefix}.{seg}")
    }
}

fn display_path(path: &str) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.to_string()
    }
}

impl GroupExpr {
    /// `GL_n`, from the exact sequence `SL_n → GL_n → G_m`.
    pub fn gl(n: u32) -> GroupExpr {
        GroupExpr::ext(GroupExpr::sl(n), GroupExpr::Torus { rank: 1 })
    }

    /// `SL_n`; `SL_1` is trivial.
    pub fn sl(n: u32) -> GroupExpr {
        match n {
            0 | 1 => GroupExpr::Trivial,
            n => GroupExpr::SimplyConnectedSimple(DynkinType::A(n - 1)),
        }
    }

    pub fn pgl(n: u32) -> GroupExpr {
        GroupExpr::Isogenous(Box::new(GroupExpr::sl(n)))
    }

    pub fn ext(normal: GroupExpr, quotient: GroupExpr) -> GroupExpr {
        GroupExpr::Extension {
            normal: Box::new(normal),
            quotient: Box::new(quotient),
        }
    }

    pub fn simple(t: DynkinType) -> GroupExpr {
        GroupExpr::SimplyConnectedSimple(t)
    }

    pub fn abelian(g: u32, charpoly: Option<IntPoly>) -> GroupExpr {
        GroupExpr::AbelianVariety { g, charpoly }
    }

    /// Accepts iff every rank and charpoly constraint holds. All problems are
    /// collected, each tagged with the path of the offending node.
    pub fn validate(&self) -> Result<(), Vec<ValidationError>> {
        let mut errors = Vec::new();
        self.validate_at("", &mut errors);
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    fn validate_at(&self, path: &str, errors: &mut Vec<ValidationError>) {
        match self {
            GroupExpr::Trivial | GroupExpr::Unipotent { .. } | GroupExpr::Torus { .. } => {}
            GroupExpr::SimplyConnectedSimple(t) => {
                if let Err(hint) = t.check_rank() {
                    errors.push(ValidationError::RankOutOfRange {
                        path: display_path(&join_path(path, "ss")),
                        ty: *t,
                        hint,
                    });
                }
            }
            GroupExpr::AbelianVariety { g, charpoly } => {
                if let Some(p) = charpoly {
                    let here = display_path(&join_path(path, "ab"));
                    let found = p.degree().map_or(-1, |d| d as i64);
                    if found != 2 * *g as i64 {
                        errors.push(ValidationError::BadCharPolyDegree {
                            path: here,
                            g: *g,
                            found,
                        });
                    } else if !p.is_monic() {
                        errors.push(ValidationError::CharPolyNotMonic {
                            path: here,
                            poly: p.clone(),
                        });
                    }
                }
            }
            GroupExpr::Extension { normal, quotient } => {
                normal.validate_at(&join_path(path, "ext.n"), errors);
                quotient.validate_at(&join_path(path, "ext.q"), errors);
            }
            GroupExpr::Product(factors) => {
                if factors.is_empty() {
                    errors.push(ValidationError::EmptyProduct {
                        path: display_path(path),
                    });
                }
                for (i, f) in factors.iter().enumerate() {
                    f.validate_at(&join_path(path, &format!("prod.{i}")), errors);
                }
            }
            GroupExpr::Isogenous(inner) => inner.validate_at(&join_path(path, "isog"), errors),
        }
    }

    /// Strips isogenies and rewrites products as left-nested extensions.
    pub fn normalize(&self) -> GroupExpr {
        match self {
            GroupExpr::Isogenous(inner) => inner.normalize(),
            GroupExpr::Extension { normal, quotient } => {
                GroupExpr::ext(normal.normalize(), quotient.normalize())
            }
            GroupExpr::Product(factors) => {
                let mut it = factors.iter().map(GroupExpr::normalize);
                let first = it.next().unwrap_or(GroupExpr::Trivial);
                it.fold(first, GroupExpr::ext)
            }
            leaf => leaf.clone(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        match self {
            GroupExpr::Isogenous(_) | GroupExpr::Product(_) => false,
            GroupExpr::Extension { normal, quotient } => {
                normal.is_normalized() && quotient.is_normalized()
            }
            _ => true,
        }
    }

    pub fn dim(&self) -> Dimension {
        Dimension(self.fold_leaves(&|leaf| match leaf {
            GroupExpr::Unipotent { dim } => *dim as u64,
            GroupExpr::Torus { rank } => *rank as u64,
            GroupExpr::AbelianVariety { g, .. } => *g as u64,
            GroupExpr::SimplyConnectedSimple(t) => t.dimension(),
            _ => 0,
        }))
    }

    /// Total dimension of the vector-group leaves.
    pub fn unipotent_dim(&self) -> u64 {
        self.fold_leaves(&|leaf| match leaf {
            GroupExpr::Unipotent { dim } => *dim as u64,
            _ => 0,
        })
    }

    /// Total dimension of the abelian-variety leaves.
    pub fn abelian_dim(&self) -> u64 {
        self.fold_leaves(&|leaf| match leaf {
            GroupExpr::AbelianVariety { g, .. } => *g as u64,
            _ => 0,
        })
    }

    fn fold_leaves(&self, f: &dyn Fn(&GroupExpr) -> u64) -> u64 {
        match self {
            GroupExpr::Extension { normal, quotient } => {
                normal.fold_leaves(f) + quotient.fold_leaves(f)
            }
            GroupExpr::Product(factors) => factors.iter().map(|e| e.fold_leaves(f)).sum(),
            GroupExpr::Isogenous(inner) => inner.fold_leaves(f),
            leaf => f(leaf),
        }
    }

    /// Visits every `Extension` node together with its path.
    pub fn for_each_extension<'a>(&'a self, f: &mut dyn FnMut(&str, &'a GroupExpr, &'a GroupExpr)) {
        self.walk_extensions("", f);
    }

    fn walk_extensions<'a>(
        &'a self,
        path: &str,
        f: &mut dyn FnMut(&str, &'a GroupExpr, &'a GroupExpr),
    ) {
        match self {
            GroupExpr::Extension { normal, quotient } => {
                f(path, normal, quotient);
                normal.walk_extensions(&join_path(path, "ext.n"), f);
                quotient.walk_extensions(&join_path(path, "ext.q"), f);
            }
            GroupExpr::Product(factors) => {
                for (i, e) in factors.iter().enumerate() {
                    e.walk_extensions(&join_path(path, &format!("prod.{i}")), f);
                }
            }
            GroupExpr::Isogenous(inner) => inner.walk_extensions(&join_path(path, "isog"), f),
            _ => {}
        }
    }
}
