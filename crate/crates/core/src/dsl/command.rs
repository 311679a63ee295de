//! Command dispatch: one pipeline per subcommand, producing a [`Report`]
//! and a process exit code.

use super::{parse_endo, parse_expr, EndoError, SyntaxError};
use crate::cohomology::{presentation, CohomologyPresentation, Frobenius};
use crate::dynamics::{
    charpoly_warnings, d_sequence, fmt_sequence, graded_trace, lefschetz_point_count, zeta_series, DynamicsError,
    EndomorphismAction,
};
use crate::hopf::{HopfError, DEFAULT_CAP};
use crate::linalg::fmt_rational;
use crate::model::{GroupExpr, ValidationError};
use crate::oracle::{oracle_point_count, OracleError, DEFAULT_BUDGET};
use crate::report::*;
use crate::verify::{self, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VerifyTarget {
    Hopf { expr: String },
    Decomposition { expr: String },
    WeylDegrees { max_order: usize },
    PointCounts,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Command {
    Cohomology { expr: String },
    Poincare { expr: String },
    Trace { expr: String, endo: String },
    Dn { expr: String, endo: String, n: usize },
    Count { expr: String, q: u64, check_oracle: bool },
    Zeta { expr: String, endo: String, order: usize },
    Verify(VerifyTarget),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RunOptions {
    /// Enumeration budget for oracles.
    pub budget: u64,
    /// Basis-size cap for explicit Hopf algebras.
    pub hopf_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budget: DEFAULT_BUDGET,
            hopf_cap: DEFAULT_CAP,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

fn error(code: impl Into<String>, message: impl Into<String>, details: Vec<String>) -> Report {
    Report::Error(ErrorReport {
        code: code.into(),
        message: message.into(),
        details,
    })
}

fn syntax(e: SyntaxError) -> Report {
    error("dsl_cli.SyntaxError", e.to_string(), vec![])
}

fn invalid(errs: Vec<ValidationError>) -> Report {
    let code = format!("core_model.{}", errs[0].code());
    let details = errs.iter().map(ToString::to_string).collect();
    error(code, "invalid group expression", details)
}

fn dynamics(e: DynamicsError) -> Report {
    match e {
        DynamicsError::Invalid(errs) => invalid(errs),
        e => error(format!("dynamics.{}", e.code()), e.to_string(), vec![]),
    }
}

fn endo_error(e: EndoError) -> Report {
    match e {
        EndoError::Dynamics(d) => dynamics(d),
        e => error(format!("dsl_cli.{}", e.code()), e.to_string(), vec![]),
    }
}

fn hopf_error(e: HopfError) -> Report {
    error(format!("hopf_engine.{}", e.code()), e.to_string(), vec![])
}

fn verify_error(e: VerifyError) -> Report {
    match e {
        VerifyError::Invalid(errs) => invalid(errs),
        VerifyError::Hopf(h) => hopf_error(h),
    }
}

/// Parses and validates an expression.
fn load(text: &str) -> Result<(GroupExpr, CohomologyPresentation), Report> {
    let e = parse_expr(text).map_err(syntax)?;
    e.validate().map_err(invalid)?;
    let pres = presentation(&e);
    Ok((e, pres))
}

fn load_endo(text: &str, pres: &CohomologyPresentation) -> Result<EndomorphismAction, Report> {
    parse_endo(text, pres).map_err(endo_error)
}

fn frobenius_string(f: &Frobenius) -> String {
    match f {
        Frobenius::LinearWeight(d) => format!("weight {d}"),
        Frobenius::AbelianSlot { node, charpoly, slot } => {
            let node = if node.is_empty() { "root" } else { node };
            match charpoly {
                Some(p) => format!("abelian {node} slot {slot}, charpoly {p}"),
                None => format!("abelian {node} slot {slot}"),
            }
        }
        Frobenius::Unspecified => "unspecified".into(),
    }
}

fn cohomology(text: &str) -> Result<Report, Report> {
    let (e, pres) = load(text)?;
    Ok(Report::Cohomology(CohomologyReport {
        expr: e.normalize().to_string(),
        dimension: e.dim().to_string(),
        generators: pres
            .generators()
            .iter()
            .map(|g| GeneratorEntry {
                label: g.label.clone(),
                degree: g.degree.to_string(),
                frobenius: frobenius_string(&g.frobenius),
            })
            .collect(),
        poincare: pres.poincare().coeffs().iter().map(ToString::to_string).collect(),
        euler_characteristic: pres.euler_characteristic().to_string(),
        cohomological_dimension: pres.cohomological_dimension().to_string(),
    }))
}

fn count(text: &str, q: u64, check_oracle: bool, opts: &RunOptions) -> Result<(Report, bool), Report> {
    let (e, _) = load(text)?;
    let c = lefschetz_point_count(&e, q).map_err(dynamics)?;
    let oracle = check_oracle.then(|| match oracle_point_count(&e, q, opts.budget) {
        Ok(v) => OracleCheck {
            status: if v == c { OracleStatus::Match } else { OracleStatus::Mismatch },
            value: Some(v.to_string()),
            note: None,
        },
        Err(err @ (OracleError::Unsupported(_) | OracleError::TooLarge { .. } | OracleError::FieldOutOfRange(_))) => {
            OracleCheck {
                status: OracleStatus::Unavailable,
                value: None,
                note: Some(err.to_string()),
            }
        }
        Err(err) => OracleCheck {
            status: OracleStatus::Unavailable,
            value: None,
            note: Some(format!("oracle.{}: {err}", err.code())),
        },
    });
    let mismatch = oracle.as_ref().is_some_and(|o| o.status == OracleStatus::Mismatch);
    Ok((
        Report::Count(CountReport {
            expr: e.normalize().to_string(),
            q: q.to_string(),
            count: c.to_string(),
            oracle,
            warnings: charpoly_warnings(&e, q),
        }),
        mismatch,
    ))
}

fn dispatch(cmd: &Command, opts: &RunOptions) -> Result<(Report, bool), Report> {
    let ok = |r: Report| Ok((r, false));
    match cmd {
        Command::Cohomology { expr } => ok(cohomology(expr)?),
        Command::Poincare { expr } => {
            let (e, pres) = load(expr)?;
            let p = pres.poincare();
            ok(Report::Poincare(PoincareReport {
                expr: e.normalize().to_string(),
                coefficients: p.coeffs().iter().map(ToString::to_string).collect(),
                polynomial: p.to_string(),
            }))
        }
        Command::Trace { expr, endo } => {
            let (e, pres) = load(expr)?;
            let act = load_endo(endo, &pres)?;
            let t = graded_trace(&pres, &act).map_err(dynamics)?;
            ok(Report::Trace(TraceReport {
                expr: e.normalize().to_string(),
                endo: endo.clone(),
                trace: fmt_rational(&t),
            }))
        }
        Command::Dn { expr, endo, n } => {
            let (e, pres) = load(expr)?;
            let act = load_endo(endo, &pres)?;
            let seq = d_sequence(&pres, &act, *n).map_err(dynamics)?;
            ok(Report::Dn(DnReport {
                expr: e.normalize().to_string(),
                endo: endo.clone(),
                values: fmt_sequence(&seq),
            }))
        }
        Command::Zeta { expr, endo, order } => {
            let (e, pres) = load(expr)?;
            let act = load_endo(endo, &pres)?;
            let seq = d_sequence(&pres, &act, *order).map_err(dynamics)?;
            let z = zeta_series(&seq, *order).map_err(dynamics)?;
            ok(Report::Zeta(ZetaReport {
                expr: e.normalize().to_string(),
                endo: endo.clone(),
                order: order.to_string(),
                coefficients: z.iter().map(fmt_rational).collect(),
            }))
        }
        Command::Count { expr, q, check_oracle } => count(expr, *q, *check_oracle, opts),
        Command::Verify(target) => {
            let r = match target {
                VerifyTarget::Hopf { expr } => {
                    let e = parse_expr(expr).map_err(syntax)?;
                    verify::hopf(&e, opts.hopf_cap).map_err(verify_error)?
                }
                VerifyTarget::Decomposition { expr } => {
                    let e = parse_expr(expr).map_err(syntax)?;
                    verify::decomposition(&e, opts.hopf_cap).map_err(verify_error)?
                }
                VerifyTarget::WeylDegrees { max_order } => verify::weyl_degrees(*max_order),
                VerifyTarget::PointCounts => verify::point_counts(opts.budget),
            };
            let failed = !r.passed;
            Ok((Report::Verify(r), failed))
        }
    }
}

/// Runs a command. Exit code 0 on success, 1 when a verification or
/// oracle comparison fails, 2 on parse, usage or input errors.
pub fn run(cmd: &Command, opts: &RunOptions) -> Outcome {
    match dispatch(cmd, opts) {
        Ok((report, false)) => Outcome {
            report,
            exit_code: EXIT_OK,
        },
        Ok((report, true)) => Outcome {
            report,
            exit_code: EXIT_FAILED,
        },
        Err(report) => Outcome {
            report,
            exit_code: EXIT_ERROR,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(cmd: Command) -> Outcome {
        run(&cmd, &RunOptions::default())
    }

    #[test]
    fn cohomology_of_gl3() {
        let o = go(Command::Cohomology { expr: "GL(3)".into() });
        assert_eq!(o.exit_code, 0);
        let Report::Cohomology(r) = o.report else { panic!() };
        let degrees: Vec<&str> = r.generators.iter().map(|g| g.degree.as_str()).collect();
        assert_eq!(degrees, ["1", "3", "5"]);
        assert_eq!(r.poincare, ["1", "1", "0", "1", "1", "1", "1", "0", "1", "1"]);
    }

    #[test]
    fn count_with_oracle() {
        let o = go(Command::Count {
            expr: "GL(2)".into(),
            q: 3,
            check_oracle: true,
        });
        assert_eq!(o.exit_code, 0);
        let Report::Count(r) = o.report else { panic!() };
        assert_eq!(r.count, "48");
        assert_eq!(r.oracle.unwrap().status, OracleStatus::Match);
    }

    #[test]
    fn unavailable_oracle_is_not_failure() {
        let o = go(Command::Count {
            expr: "simple(G2)".into(),
            q: 3,
            check_oracle: true,
        });
        assert_eq!(o.exit_code, 0);
        let Report::Count(r) = o.report else { panic!() };
        assert_eq!(r.oracle.unwrap().status, OracleStatus::Unavailable);
    }

    #[test]
    fn error_codes() {
        let code = |o: Outcome| match o.report {
            Report::Error(e) => (e.code, o.exit_code),
            r => panic!("{r:?}"),
        };
        assert_eq!(
            code(go(Command::Cohomology { expr: "simple(C2)".into() })),
            ("core_model.RankOutOfRange".into(), 2)
        );
        assert_eq!(
            code(go(Command::Cohomology { expr: "GL(".into() })),
            ("dsl_cli.SyntaxError".into(), 2)
        );
        assert_eq!(
            code(go(Command::Count {
                expr: "GL(2)".into(),
                q: 4,
                check_oracle: false
            })),
            ("dynamics.NotPrime".into(), 2)
        );
        assert_eq!(
            code(go(Command::Trace {
                expr: "torus(1)".into(),
                endo: "block(ab.* : scalar 1)".into()
            })),
            ("dsl_cli.UnknownLabel".into(), 2)
        );
        assert_eq!(
            code(go(Command::Verify(VerifyTarget::Hopf { expr: "torus(13)".into() }))),
            ("hopf_engine.CapExceeded".into(), 2)
        );
    }

    #[test]
    fn zeta_of_torus_frobenius() {
        // d_n = 1 - 2^n on torus(1) with frobenius(2)
        let o = go(Command::Zeta {
            expr: "torus(1)".into(),
            endo: "frobenius(2)".into(),
            order: 4,
        });
        let Report::Zeta(r) = o.report else { panic!() };
        // exp(Σ (1 - 2^n) t^n / n) = (1 - 2t)/(1 - t) = 1 - t - t^2 - …
        assert_eq!(r.coefficients, ["1", "-1", "-1", "-1", "-1"]);
    }

    #[test]
    fn dn_values_are_fractions() {
        let o = go(Command::Dn {
            expr: "torus(1)".into(),
            endo: "scalar 1/2".into(),
            n: 2,
        });
        let Report::Dn(r) = o.report else { panic!() };
        assert_eq!(r.values, ["1/2", "3/4"]);
    }
}
