//! Structured results. Every number is a decimal string (fractions as
//! `p/q`), so JSON output round-trips without loss.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Report {
    Cohomology(CohomologyReport),
    Poincare(PoincareReport),
    Trace(TraceReport),
    Dn(DnReport),
    Count(CountReport),
    Zeta(ZetaReport),
    Verify(VerifyReport),
    Error(ErrorReport),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub label: String,
    pub degree: String,
    pub frobenius: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub expr: String,
    pub dimension: String,
    pub generators: Vec<GeneratorEntry>,
    /// Betti numbers `b_0, b_1, …`.
    pub poincare: Vec<String>,
    pub euler_characteristic: String,
    pub cohomological_dimension: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PoincareReport {
    pub expr: String,
    pub coefficients: Vec<String>,
    pub polynomial: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceReport {
    pub expr: String,
    pub endo: String,
    pub trace: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DnReport {
    pub expr: String,
    pub endo: String,
    /// `d_1, …, d_n`.
    pub values: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStatus {
    Match,
    Mismatch,
    Unavailable,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OracleCheck {
    pub status: OracleStatus,
    pub value: Option<String>,
    pub note: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CountReport {
    pub expr: String,
    pub q: String,
    pub count: String,
    pub oracle: Option<OracleCheck>,
    pub warnings: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ZetaReport {
    pub expr: String,
    pub endo: String,
    pub order: String,
    /// `z_0, …, z_order`.
    pub coefficients: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerifyItem {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub witness: Option<String>,
}

impl VerifyItem {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        VerifyItem {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn skip(name: impl Into<String>, detail: impl Into<String>) -> Self {
        VerifyItem {
            name: name.into(),
            status: Status::Skip,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub check: String,
    pub passed: bool,
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn new(check: impl Into<String>, items: Vec<VerifyItem>) -> Self {
        VerifyReport {
            check: check.into(),
            passed: items.iter().all(|i| i.status != Status::Fail),
            items,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ErrorReport {
    /// Module-qualified, e.g. `core_model.RankOutOfRange`.
    pub code: String,
    pub message: String,
    pub details: Vec<String>,
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let cols = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |out: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (i, c) in cells.enumerate() {
            if i + 1 < cols {
                let pad = width[i] - c.chars().count();
                s.push_str(c);
                s.extend(std::iter::repeat_n(' ', pad + 2));
            } else {
                s.push_str(c);
            }
        }
        let _ = writeln!(out, "{}", s.trim_end());
    };
    if header.iter().any(|h| !h.is_empty()) {
        line(out, &mut header.iter().copied());
    }
    for r in rows {
        line(out, &mut r.iter().map(String::as_str));
    }
}

fn fields(out: &mut String, rows: &[(&str, String)]) {
    let rows: Vec<Vec<String>> = rows.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
    table(out, &["", ""], &rows);
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    /// Aligned human-readable tables.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Cohomology(r) => {
                fields(
                    &mut out,
                    &[
                        ("expression", r.expr.clone()),
                        ("dimension", r.dimension.clone()),
                        ("generators", r.generators.len().to_string()),
                        ("euler characteristic", r.euler_characteristic.clone()),
                        ("cohomological dimension", r.cohomological_dimension.clone()),
                    ],
                );
                if !r.generators.is_empty() {
                    out.push('\n');
                    let rows: Vec<Vec<String>> = r
                        .generators
                        .iter()
                        .map(|g| vec![g.label.clone(), g.degree.clone(), g.frobenius.clone()])
                        .collect();
                    table(&mut out, &["label", "degree", "frobenius"], &rows);
                }
                out.push('\n');
                let rows: Vec<Vec<String>> = r
                    .poincare
                    .iter()
                    .enumerate()
                    .map(|(i, b)| vec![i.to_string(), b.clone()])
                    .collect();
                table(&mut out, &["degree", "betti"], &rows);
            }
            Report::Poincare(r) => fields(
                &mut out,
                &[
                    ("expression", r.expr.clone()),
                    ("poincare", r.polynomial.clone()),
                    ("coefficients", format!("[{}]", r.coefficients.join(", "))),
                ],
            ),
            Report::Trace(r) => fields(
                &mut out,
                &[
                    ("expression", r.expr.clone()),
                    ("endomorphism", r.endo.clone()),
                    ("graded trace", r.trace.clone()),
                ],
            ),
            Report::Dn(r) => {
                fields(&mut out, &[("expression", r.expr.clone()), ("endomorphism", r.endo.clone())]);
                out.push('\n');
                let rows: Vec<Vec<String>> = r
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| vec![(i + 1).to_string(), v.clone()])
                    .collect();
                table(&mut out, &["n", "d_n"], &rows);
            }
            Report::Count(r) => {
                let mut rows = vec![
                    ("expression", r.expr.clone()),
                    ("q", r.q.clone()),
                    ("count", r.count.clone()),
                ];
                if let Some(o) = &r.oracle {
                    let status = match o.status {
                        OracleStatus::Match => "match",
                        OracleStatus::Mismatch => "MISMATCH",
                        OracleStatus::Unavailable => "unavailable",
                    };
                    let mut s = match &o.value {
                        Some(v) => format!("{v} ({status})"),
                        None => status.to_string(),
                    };
                    if let Some(n) = &o.note {
                        s.push_str(&format!(": {n}"));
                    }
                    rows.push(("oracle", s));
                }
                for w in &r.warnings {
                    rows.push(("warning", w.clone()));
                }
                fields(&mut out, &rows);
            }
            Report::Zeta(r) => {
                fields(
                    &mut out,
                    &[
                        ("expression", r.expr.clone()),
                        ("endomorphism", r.endo.clone()),
                        ("order", r.order.clone()),
                    ],
                );
                out.push('\n');
                let rows: Vec<Vec<String>> = r
                    .coefficients
                    .iter()
                    .enumerate()
                    .map(|(i, v)| vec![format!("t^{i}"), v.clone()])
                    .collect();
                table(&mut out, &["term", "coefficient"], &rows);
            }
            Report::Verify(r) => {
                let rows: Vec<Vec<String>> = r
                    .items
                    .iter()
                    .map(|i| {
                        let status = match i.status {
                            Status::Pass => "ok",
                            Status::Fail => "FAIL",
                            Status::Skip => "skip",
                        };
                        let mut detail = i.detail.clone();
                        if let Some(w) = &i.witness {
                            detail.push_str(&format!(" [witness: {w}]"));
                        }
                        vec![status.to_string(), i.name.clone(), detail]
                    })
                    .collect();
                table(&mut out, &["status", "check", "detail"], &rows);
                let failed = r.items.iter().filter(|i| i.status == Status::Fail).count();
                let skipped = r.items.iter().filter(|i| i.status == Status::Skip).count();
                let _ = writeln!(
                    out,
                    "\n{}: {} checks, {} failed, {} skipped",
                    r.check,
                    r.items.len(),
                    failed,
                    skipped
                );
            }
            Report::Error(e) => {
                let _ = writeln!(out, "error[{}]: {}", e.code, e.message);
                for d in &e.details {
                    let _ = writeln!(out, "  {d}");
                }
            }
        }
        out
    }
}
