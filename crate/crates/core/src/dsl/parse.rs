//! Recursive-descent parser for group expressions.
//!
//! ```text
//! expr    := "trivial" | "Ga(" nat ")" | "torus(" nat ")"
//!          | "abelian(" nat [";" intpoly] ")" | "simple(" type ")"
//!          | "ext(" expr "," expr ")" | "prod(" expr {"," expr} ")"
//!          | "isog(" expr ")" | "GL(" nat ")" | "SL(" nat ")" | "PGL(" nat ")"
//! type    := ("A"|"B"|"C"|"D") nat | "E6" | "E7" | "E8" | "F4" | "G2"
//! intpoly := signed terms in t, e.g. "t^2+3t+5"
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::model::{DynkinType, GroupExpr};
use crate::poly::IntPoly;

pub const MAX_INPUT: usize = 64 * 1024;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SyntaxError {
    #[error("line {line}, column {column}: expected {}, found {found}", fmt_expected(.expected))]
    Unexpected {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("input is {0} bytes, over the 64 KiB limit")]
    TooLarge(usize),
}

fn fmt_expected(expected: &[String]) -> String {
    match expected {
        [one] => one.clone(),
        many => format!("one of {}", many.join(", ")),
    }
}

/// Character cursor with line/column tracking.
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Result<Self, SyntaxError> {
        if src.len() > MAX_INPUT {
            return Err(SyntaxError::TooLarge(src.len()));
        }
        Ok(Cursor { src, pos: 0 })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn location(&self) -> (usize, usize) {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    pub(crate) fn error(&mut self, expected: &[&str]) -> SyntaxError {
        self.skip_ws();
        let found = match self.rest().chars().next() {
            None => "end of input".to_string(),
            Some(_) => {
                let word: String = self
                    .rest()
                    .chars()
                    .take_while(|c| c.is_alphanumeric() || *c == '_')
                    .collect();
                if word.is_empty() {
                    format!("`{}`", self.rest().chars().next().unwrap())
                } else {
                    format!("`{word}`")
                }
            }
        };
        let (line, column) = self.location();
        SyntaxError::Unexpected {
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    /// Identifier `[A-Za-z_][A-Za-z0-9_]*`, without consuming on failure.
    pub(crate) fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let first = rest.chars().next()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        Some(&rest[..len])
    }

    pub(crate) fn save(&self) -> usize {
        self.pos
    }

    pub(crate) fn restore(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub(crate) fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    pub(crate) fn nat(&mut self) -> Result<u32, SyntaxError> {
        let start = self.save();
        match self.digits().and_then(|d| d.parse().ok()) {
            Some(n) => Ok(n),
            None => {
                self.restore(start);
                Err(self.error(&["natural number"]))
            }
        }
    }

    pub(crate) fn positive(&mut self) -> Result<u32, SyntaxError> {
        let start = self.save();
        let n = self.nat()?;
        if n == 0 {
            self.restore(start);
            return Err(self.error(&["positive integer"]));
        }
        Ok(n)
    }

    pub(crate) fn big_nat(&mut self) -> Option<BigInt> {
        self.digits().map(|d| d.parse().expect("digits"))
    }

    /// Signed rational `[-]n[/d]`.
    pub(crate) fn rational(&mut self) -> Result<BigRational, SyntaxError> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let Some(n) = self.big_nat() else {
            return Err(self.error(&["number"]));
        };
        let mut q = BigRational::from_integer(n);
        if self.eat('/') {
            let start = self.save();
            match self.big_nat() {
                Some(d) if !d.is_zero() => q /= BigRational::from_integer(d),
                _ => {
                    self.restore(start);
                    return Err(self.error(&["nonzero denominator"]));
                }
            }
        }
        Ok(if neg { -q } else { q })
    }

    /// Integer polynomial in `t`: a signed sum of terms `c`, `ct^k`, `c*t^k`.
    pub(crate) fn intpoly(&mut self) -> Result<IntPoly, SyntaxError> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                Some('-') => {
                    self.pos += 1;
                    true
                }
                Some('+') => {
                    self.pos += 1;
                    false
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let coeff = self.big_nat();
            if coeff.is_some() {
                self.eat('*');
            }
            let start = self.save();
            let power = match self.ident() {
                Some("t") => {
                    if self.eat('^') {
                        self.nat()? as usize
                    } else {
                        1
                    }
                }
                _ => {
                    self.restore(start);
                    if coeff.is_none() {
                        return Err(self.error(&["coefficient", "`t`"]));
                    }
                    0
                }
            };
            let mut c = coeff.unwrap_or_else(|| BigInt::from(1));
            if negative {
                c = -c;
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += c;
        }
        Ok(IntPoly::new(coeffs))
    }
}

const EXPR_START: &[&str] = &[
    "`trivial`", "`Ga`", "`torus`", "`abelian`", "`simple`", "`ext`", "`prod`", "`isog`", "`GL`", "`SL`", "`PGL`",
];

fn expr(c: &mut Cursor<'_>) -> Result<GroupExpr, SyntaxError> {
    let start = c.save();
    let Some(word) = c.ident() else {
        return Err(c.error(EXPR_START));
    };
    if word == "trivial" {
        return Ok(GroupExpr::Trivial);
    }
    if !EXPR_START.contains(&format!("`{word}`").as_str()) {
        c.restore(start);
        return Err(c.error(EXPR_START));
    }
    c.expect('(')?;
    let e = match word {
        "Ga" => GroupExpr::Unipotent { dim: c.nat()? },
        "torus" => GroupExpr::Torus { rank: c.nat()? },
        "abelian" => {
            let g = c.nat()?;
            let charpoly = if c.eat(';') { Some(c.intpoly()?) } else { None };
            GroupExpr::AbelianVariety { g, charpoly }
        }
        "simple" => GroupExpr::SimplyConnectedSimple(dynkin(c)?),
        "ext" => {
            let n = expr(c)?;
            c.expect(',')?;
            GroupExpr::ext(n, expr(c)?)
        }
        "prod" => {
            let mut fs = vec![expr(c)?];
            while c.eat(',') {
                fs.push(expr(c)?);
            }
            GroupExpr::Product(fs)
        }
        "isog" => GroupExpr::Isogenous(Box::new(expr(c)?)),
        "GL" => GroupExpr::gl(c.positive()?),
        "SL" => GroupExpr::sl(c.positive()?),
        "PGL" => GroupExpr::pgl(c.positive()?),
        _ => unreachable!(),
    };
    c.expect(')')?;
    Ok(e)
}

fn dynkin(c: &mut Cursor<'_>) -> Result<DynkinType, SyntaxError> {
    const TYPES: &[&str] = &["`A`n", "`B`n", "`C`n", "`D`n", "`E6`", "`E7`", "`E8`", "`F4`", "`G2`"];
    let start = c.save();
    let Some(word) = c.ident() else {
        return Err(c.error(TYPES));
    };
    let fixed = match word {
        "E6" => Some(DynkinType::E6),
        "E7" => Some(DynkinType::E7),
        "E8" => Some(DynkinType::E8),
        "F4" => Some(DynkinType::F4),
        "G2" => Some(DynkinType::G2),
        _ => None,
    };
    if let Some(t) = fixed {
        return Ok(t);
    }
    let (family, digits) = word.split_at(1);
    let rank = (!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()))
        .then(|| digits.parse::<u32>().ok())
        .flatten();
    let t = match (family, rank) {
        ("A", Some(n)) => DynkinType::A(n),
        ("B", Some(n)) => DynkinType::B(n),
        ("C", Some(n)) => DynkinType::C(n),
        ("D", Some(n)) => DynkinType::D(n),
        _ => {
            c.restore(start);
            return Err(c.error(TYPES));
        }
    };
    Ok(t)
}

/// Parses a group expression. Semantic checks are left to
/// [`GroupExpr::validate`].
pub fn parse_expr(text: &str) -> Result<GroupExpr, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let e = expr(&mut c)?;
    if !c.at_end() {
        return Err(c.error(&["end of input"]));
    }
    Ok(e)
}

/// Parses an integer polynomial in `t` on its own.
pub fn parse_intpoly(text: &str) -> Result<IntPoly, SyntaxError> {
    let mut c = Cursor::new(text)?;
    let p = c.intpoly()?;
    if !c.at_end() {
        return Err(c.error(&["end of input"]));
    }
    Ok(p)
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Trivial => write!(f, "trivial"),
            GroupExpr::Unipotent { dim } => write!(f, "Ga({dim})"),
            GroupExpr::Torus { rank } => write!(f, "torus({rank})"),
            GroupExpr::AbelianVariety { g, charpoly: None } => write!(f, "abelian({g})"),
            GroupExpr::AbelianVariety { g, charpoly: Some(p) } => write!(f, "abelian({g}; {p})"),
            GroupExpr::SimplyConnectedSimple(t) => write!(f, "simple({t})"),
            GroupExpr::Extension { normal, quotient } => write!(f, "ext({normal}, {quotient})"),
            GroupExpr::Product(fs) => {
                write!(f, "prod(")?;
                for (i, e) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            GroupExpr::Isogenous(inner) => write!(f, "isog({inner})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_with_charpoly() {
        let e = parse_expr("ext(torus(2), abelian(1; t^2+3t+5))").unwrap();
        assert_eq!(
            e,
            GroupExpr::ext(
                GroupExpr::Torus { rank: 2 },
                GroupExpr::abelian(1, Some(IntPoly::from_i64(&[5, 3, 1])))
            )
        );
    }

    #[test]
    fn builtins() {
        assert_eq!(parse_expr("GL(3)").unwrap(), GroupExpr::gl(3));
        assert_eq!(parse_expr(" SL ( 2 ) ").unwrap(), GroupExpr::sl(2));
        assert_eq!(parse_expr("PGL(4)").unwrap(), GroupExpr::pgl(4));
        assert!(parse_expr("GL(0)").is_err());
    }

    #[test]
    fn c2_parses_then_fails_validation() {
        let e = parse_expr("simple(C2)").unwrap();
        let errs = e.validate().unwrap_err();
        assert!(errs[0].to_string().contains("C_2 ≅ B_2"));
    }

    #[test]
    fn polynomial_forms() {
        assert_eq!(parse_intpoly("t^2 - 3t + 5").unwrap(), IntPoly::from_i64(&[5, -3, 1]));
        assert_eq!(parse_intpoly("-t+1").unwrap(), IntPoly::from_i64(&[1, -1]));
        assert_eq!(parse_intpoly("2*t^4 + t^4 + 7").unwrap(), IntPoly::from_i64(&[7, 0, 0, 0, 3]));
        assert_eq!(parse_intpoly("5").unwrap(), IntPoly::from_i64(&[5]));
        assert!(parse_intpoly("t^").is_err());
        assert!(parse_intpoly("+").is_err());
    }

    #[test]
    fn error_locations() {
        let err = parse_expr("ext(torus(1),\n  bogus(2))").unwrap_err();
        match err {
            SyntaxError::Unexpected {
                line,
                column,
                ref found,
                ..
            } => {
                assert_eq!((line, column), (2, 3));
                assert_eq!(found, "`bogus`");
            }
            _ => panic!("{err}"),
        }
        let err = parse_expr("torus(1").unwrap_err().to_string();
        assert!(err.contains("expected `)`") && err.contains("end of input"), "{err}");
        let err = parse_expr("simple(Q3)").unwrap_err().to_string();
        assert!(err.contains("`E8`"), "{err}");
    }

    #[test]
    fn trailing_input_rejected() {
        assert!(parse_expr("trivial trivial").is_err());
    }

    #[test]
    fn oversized_input() {
        let big = "x".repeat(MAX_INPUT + 1);
        assert!(matches!(parse_expr(&big), Err(SyntaxError::TooLarge(_))));
    }

    #[test]
    fn pretty_print_examples() {
        let e = parse_expr("prod(isog(GL(2)),abelian(2),Ga(3),simple(E8))").unwrap();
        assert_eq!(
            e.to_string(),
            "prod(isog(ext(simple(A1), torus(1))), abelian(2), Ga(3), simple(E8))"
        );
    }
}
