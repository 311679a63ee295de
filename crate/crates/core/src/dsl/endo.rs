//! Endomorphism specs.
//!
//! ```text
//! endo   := item {[","|";"] item}
//! item   := "frobenius(" nat ")" | "scalar" rational
//!         | "block(" glob ":" action ")"
//! action := "matrix" "[" row {"," row} "]" | "charpoly" intpoly | "scalar" rational
//! row    := "[" rational {"," rational} "]"
//! ```
//!
//! Explicit blocks take precedence; `frobenius(q)` or a bare `scalar`
//! fills every generator not named by a block.

use thiserror::Error;

use super::parse::{Cursor, SyntaxError};
use crate::cohomology::{CohomologyPresentation, Frobenius};
use crate::dynamics::{standard_frobenius, Block, BlockAction, DynamicsError, EndomorphismAction};
use crate::linalg::{RatMatrix, Rational};
use crate::poly::IntPoly;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum EndoError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("no generator matches `{0}`")]
    UnknownLabel(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

impl EndoError {
    pub fn code(&self) -> &'static str {
        match self {
            EndoError::Syntax(_) => "SyntaxError",
            EndoError::UnknownLabel(_) => "UnknownLabel",
            EndoError::ShapeMismatch(_) => "ShapeMismatch",
            EndoError::Dynamics(e) => e.code(),
        }
    }
}

enum Action {
    Matrix(Vec<Vec<Rational>>),
    CharPoly(IntPoly),
    Scalar(Rational),
}

enum Default {
    Frobenius(u64),
    Scalar(Rational),
}

struct Spec {
    blocks: Vec<(String, Action)>,
    default: Option<Default>,
}

fn glob(c: &mut Cursor<'_>) -> Result<String, SyntaxError> {
    let mut out = String::new();
    loop {
        match c.peek() {
            Some(ch) if ch.is_ascii_alphanumeric() || matches!(ch, '_' | '.' | '*') => {
                out.push(ch);
                c.eat(ch);
            }
            _ => break,
        }
    }
    if out.is_empty() {
        return Err(c.error(&["label glob"]));
    }
    Ok(out)
}

fn row(c: &mut Cursor<'_>) -> Result<Vec<Rational>, SyntaxError> {
    c.expect('[')?;
    let mut r = vec![c.rational()?];
    while c.eat(',') {
        r.push(c.rational()?);
    }
    c.expect(']')?;
    Ok(r)
}

fn action(c: &mut Cursor<'_>) -> Result<Action, SyntaxError> {
    let start = c.save();
    match c.ident() {
        Some("matrix") => {
            c.expect('[')?;
            let mut rows = vec![row(c)?];
            while c.eat(',') {
                rows.push(row(c)?);
            }
            c.expect(']')?;
            Ok(Action::Matrix(rows))
        }
        Some("charpoly") => Ok(Action::CharPoly(c.intpoly()?)),
        Some("scalar") => Ok(Action::Scalar(c.rational()?)),
        _ => {
            c.restore(start);
            Err(c.error(&["`matrix`", "`charpoly`", "`scalar`"]))
        }
    }
}

fn spec(text: &str) -> Result<Spec, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let mut s = Spec {
        blocks: Vec::new(),
        default: None,
    };
    const ITEMS: &[&str] = &["`frobenius`", "`scalar`", "`block`"];
    loop {
        let start = c.save();
        let default = match c.ident() {
            Some("frobenius") => {
                c.expect('(')?;
                let q = c.positive()?;
                c.expect(')')?;
                Some(Default::Frobenius(q as u64))
            }
            Some("scalar") => Some(Default::Scalar(c.rational()?)),
            Some("block") => {
                c.expect('(')?;
                let g = glob(&mut c)?;
                c.expect(':')?;
                let a = action(&mut c)?;
                c.expect(')')?;
                s.blocks.push((g, a));
                None
            }
            _ => {
                c.restore(start);
                return Err(c.error(ITEMS));
            }
        };
        if let Some(d) = default {
            if s.default.is_some() {
                c.restore(start);
                return Err(c.error(&["a single `frobenius` or `scalar` default"]));
            }
            s.default = Some(d);
        }
        if !(c.eat(',') || c.eat(';')) && c.at_end() {
            return Ok(s);
        }
    }
}

/// `*` matches any run of characters, including dots.
fn glob_match(pattern: &[u8], text: &[u8]) -> bool {
    match pattern.split_first() {
        None => text.is_empty(),
        Some((b'*', rest)) => (0..=text.len()).any(|i| glob_match(rest, &text[i..])),
        Some((p, rest)) => text.split_first().is_some_and(|(t, tr)| t == p && glob_match(rest, tr)),
    }
}

/// A label matches when the glob covers it entirely or covers one of its
/// dot-aligned suffixes, so `ab.*` selects every `….ab.g<i>`.
pub fn label_matches(pattern: &str, label: &str) -> bool {
    let p = pattern.as_bytes();
    glob_match(p, label.as_bytes())
        || label
            .match_indices('.')
            .any(|(i, _)| glob_match(p, label[i + 1..].as_bytes()))
}

fn build(expr_pres: &CohomologyPresentation, s: Spec) -> Result<EndomorphismAction, EndoError> {
    let gens = expr_pres.generators();
    let mut covered = vec![false; gens.len()];
    let mut blocks = Vec::new();
    for (pattern, action) in s.blocks {
        let hits: Vec<usize> = (0..gens.len())
            .filter(|&i| label_matches(&pattern, &gens[i].label))
            .collect();
        if hits.is_empty() {
            return Err(EndoError::UnknownLabel(pattern));
        }
        for &i in &hits {
            if std::mem::replace(&mut covered[i], true) {
                return Err(EndoError::ShapeMismatch(format!(
                    "{} is selected by more than one block",
                    gens[i].label
                )));
            }
        }
        let labels: Vec<String> = hits.iter().map(|&i| gens[i].label.clone()).collect();
        let mixed = hits.windows(2).any(|w| gens[w[0]].degree != gens[w[1]].degree);
        if mixed && !matches!(action, Action::Scalar(_)) {
            return Err(EndoError::ShapeMismatch(format!(
                "`{pattern}` selects generators of different degrees"
            )));
        }
        match action {
            Action::Scalar(m) => {
                for l in labels {
                    blocks.push(Block {
                        labels: vec![l],
                        action: BlockAction::Matrix(RatMatrix::scalar(1, &m)),
                    });
                }
            }
            Action::Matrix(rows) => {
                let n = rows.len();
                if n != labels.len() || rows.iter().any(|r| r.len() != n) {
                    return Err(EndoError::ShapeMismatch(format!(
                        "`{pattern}` selects {} generators but the matrix is {}×{}",
                        labels.len(),
                        n,
                        rows.first().map_or(0, Vec::len)
                    )));
                }
                let m = RatMatrix::from_rows(rows).expect("rectangular rows");
                blocks.push(Block {
                    labels,
                    action: BlockAction::Matrix(m),
                });
            }
            Action::CharPoly(p) => {
                if p.degree() != Some(labels.len()) || !p.is_monic() {
                    return Err(EndoError::ShapeMismatch(format!(
                        "`{pattern}` selects {} generators but the charpoly {p} is not monic of that degree",
                        labels.len()
                    )));
                }
                blocks.push(Block {
                    labels,
                    action: BlockAction::CharPoly(p),
                });
            }
        }
    }
    let uncovered: Vec<usize> = (0..gens.len()).filter(|&i| !covered[i]).collect();
    match s.default {
        _ if uncovered.is_empty() => {}
        None => {
            return Err(EndoError::ShapeMismatch(format!(
                "no action given for {}",
                uncovered.iter().map(|&i| gens[i].label.as_str()).collect::<Vec<_>>().join(", ")
            )))
        }
        Some(Default::Scalar(m)) => {
            for i in uncovered {
                blocks.push(Block {
                    labels: vec![gens[i].label.clone()],
                    action: BlockAction::Matrix(RatMatrix::scalar(1, &m)),
                });
            }
        }
        Some(Default::Frobenius(q)) => {
            for &i in &uncovered {
                if let Frobenius::AbelianSlot { node, .. } = &gens[i].frobenius {
                    let partial = (0..gens.len()).any(|j| {
                        covered[j] && matches!(&gens[j].frobenius, Frobenius::AbelianSlot { node: n, .. } if n == node)
                    });
                    if partial {
                        return Err(EndoError::ShapeMismatch(format!(
                            "abelian block of {} is only partly overridden",
                            if node.is_empty() { "root" } else { node }
                        )));
                    }
                }
            }
            let rest = CohomologyPresentation::from_generators(uncovered.iter().map(|&i| gens[i].clone()).collect());
            blocks.extend(standard_frobenius(&rest, q)?.blocks);
        }
    }
    Ok(EndomorphismAction { blocks })
}

/// Parses an endomorphism spec against the generators of `pres`.
pub fn parse_endo(text: &str, pres: &CohomologyPresentation) -> Result<EndomorphismAction, EndoError> {
    build(pres, spec(text)?)
}
