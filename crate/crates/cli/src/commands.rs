use std::collections::BTreeMap;

use braidext::action::{validate_action_data, ActionSpace};
use braidext::braided::validate_ab3;
use braidext::cochain::cocycle_witness;
use braidext::cohomology::cohomology_group;
use braidext::error::AxiomViolation;
use braidext::module::GAction;
use braidext::obstruction::{build_extension, build_extension_unchecked, classify, extension_table};
use braidext::report::ValidationReport;
use braidext::Error;
use serde::Serialize;

use crate::error::CliError;
use crate::problem::{cochain_spec, parse_str, Problem};
use crate::report::{
    cyclic_product, entries_text, table, CheckOut, ClassifyReport, CohomologyReport, DatumOut, ErrorOut,
    ErrorReport, ExtensionReport, SearchReport, ValidateReport,
};

pub const MAX_GROUP_ORDER: usize = 8;
pub const MAX_TABLE_ENTRIES: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Emit {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub strict: bool,
    pub force: bool,
    pub emit: Emit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Validate,
    Cohomology { degree: usize, representatives: bool },
    Classify,
    Extension { diagnose: bool },
    SearchActions { limit: u128, count_only: bool },
}

/// Exit status and the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Success {
    negative: bool,
    json: String,
    text: String,
}

fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("reports serialize");
    s.push('\n');
    s
}

/// Runs one command on the contents of a problem file.
pub fn run_source(command: &Command, source: &str, opts: &Options) -> Outcome {
    let result = parse_str(source)
        .and_then(|file| file.resolve())
        .and_then(|problem| dispatch(command, &problem, opts));
    match result {
        Ok(s) => Outcome {
            code: if s.negative && opts.strict { 1 } else { 0 },
            stdout: if opts.emit == Emit::Json { s.json } else { s.text },
            stderr: String::new(),
        },
        Err(e) => error_outcome(&e, opts),
    }
}

/// Reads `path` and runs one command on it.
pub fn run_file(command: &Command, path: &std::path::Path, opts: &Options) -> Outcome {
    match std::fs::read_to_string(path) {
        Ok(source) => run_source(command, &source, opts),
        Err(e) => error_outcome(
            &CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            },
            opts,
        ),
    }
}

fn error_outcome(e: &CliError, opts: &Options) -> Outcome {
    let (line, column, path) = match e {
        CliError::Parse { line, column, .. } => (Some(*line), Some(*column), None),
        CliError::Input { path, .. } => (None, None, Some(path.clone())),
        _ => (None, None, None),
    };
    let stdout = if opts.emit == Emit::Json {
        to_json(&ErrorReport {
            error: ErrorOut {
                kind: e.kind().into(),
                message: e.to_string(),
                line,
                column,
                path,
            },
        })
    } else {
        String::new()
    };
    Outcome {
        code: 2,
        stdout,
        stderr: format!("error: {e}\n"),
    }
}

fn guard_group(problem: &Problem, opts: &Options) -> Result<(), CliError> {
    let n = problem.group.order();
    if n > MAX_GROUP_ORDER && !opts.force {
        return Err(CliError::Guard {
            what: "the group order".into(),
            estimate: n as u128,
            limit: MAX_GROUP_ORDER as u128,
        });
    }
    Ok(())
}

fn guard_table(what: &str, estimate: u128, opts: &Options) -> Result<(), CliError> {
    if estimate > MAX_TABLE_ENTRIES && !opts.force {
        return Err(CliError::Guard {
            what: what.into(),
            estimate,
            limit: MAX_TABLE_ENTRIES,
        });
    }
    Ok(())
}

fn cells(base: usize, degree: u32, rank: usize) -> u128 {
    (base as u128).saturating_pow(degree).saturating_mul(rank.max(1) as u128)
}

fn dispatch(command: &Command, problem: &Problem, opts: &Options) -> Result<Success, CliError> {
    guard_group(problem, opts)?;
    match command {
        Command::Validate => validate(problem),
        Command::Cohomology {
            degree,
            representatives,
        } => cohomology(problem, *degree, *representatives, opts),
        Command::Classify => classify_cmd(problem, opts),
        Command::Extension { diagnose } => extension(problem, *diagnose, opts),
        Command::SearchActions { limit, count_only } => search(problem, *limit, *count_only, opts),
    }
}

fn missing(path: &str, message: &str) -> CliError {
    CliError::Input {
        path: path.into(),
        message: message.into(),
    }
}

fn collect(out: &mut Vec<CheckOut>, object: &str, report: ValidationReport) {
    for v in report.violations() {
        out.push(CheckOut {
            object: object.into(),
            check: v.check.into(),
            witness: v.witness.clone(),
            message: v.message.clone(),
        });
    }
}

fn validate(problem: &Problem) -> Result<Success, CliError> {
    let mut checked = vec!["group".to_string()];
    let mut failures = Vec::new();
    if let Some(b) = &problem.braided {
        checked.push("braided2group".into());
        collect(&mut failures, "braided2group", validate_ab3(b));
    }
    if let Some(d) = &problem.data {
        checked.push("action_data".into());
        collect(&mut failures, "action_data", validate_action_data(d));
    }
    if let Some(c) = &problem.coefficients {
        checked.push("action".into());
        collect(&mut failures, "action", c.validate());
    }
    if let Some(omega) = &problem.omega {
        checked.push("omega".into());
        let phi = omega_action(problem)?;
        let mut r = ValidationReport::new();
        if let Some(w) = omega.normalization_witness() {
            r.fail("normalized", w, "omega is nonzero on a pair containing the identity".into());
        }
        if let Some(w) = cocycle_witness(omega, phi)? {
            r.fail("cocycle", w, "d omega is nonzero".into());
        }
        collect(&mut failures, "omega", r);
    }
    if problem.upsilon.is_some() {
        checked.push("upsilon".into());
    }
    let report = ValidateReport {
        command: "validate".into(),
        ok: failures.is_empty(),
        checked: checked.clone(),
        failures: failures.clone(),
    };
    let text = if failures.is_empty() {
        format!("all checks passed ({})\n", checked.join(", "))
    } else {
        let rows: Vec<(String, String)> = failures
            .iter()
            .map(|f| {
                (
                    format!("{}/{}", f.object, f.check),
                    format!("at {:?}: {}", f.witness, f.message),
                )
            })
            .collect();
        format!("{} check(s) failed\n{}", failures.len(), table(&rows))
    };
    Ok(Success {
        negative: !report.ok,
        json: to_json(&report),
        text,
    })
}

/// The action on `A` that omega is a cocycle for.
fn omega_action(problem: &Problem) -> Result<&GAction, CliError> {
    match (&problem.data, &problem.coefficients) {
        (Some(d), _) => Ok(d.phi()),
        (None, Some(c)) => Ok(c),
        _ => Err(missing("$.omega", "omega needs braided2group or module")),
    }
}

fn cohomology(problem: &Problem, degree: usize, reps: bool, opts: &Options) -> Result<Success, CliError> {
    let action = match (&problem.coefficients, &problem.data) {
        (Some(c), _) => c,
        (None, Some(d)) => d.psi(),
        _ => return Err(missing("$", "cohomology needs module (with optional action) or braided2group")),
    };
    let rank = action.module().rank();
    guard_table("the cochain table size", cells(problem.group.order(), degree as u32 + 1, rank), opts)?;
    action
        .validate()
        .into_result("coefficient action")
        .map_err(CliError::Engine)?;
    let h = cohomology_group(action, degree)?;
    let report = CohomologyReport {
        command: "cohomology".into(),
        degree,
        factors: h.factors.clone(),
        order: h.order(),
        representatives: reps.then(|| h.representatives.iter().map(|r| cochain_spec(r, None)).collect()),
    };
    let mut rows = vec![
        (format!("H^{degree}"), cyclic_product(&h.factors)),
        ("order".into(), h.order().to_string()),
    ];
    if let Some(rs) = &report.representatives {
        for (i, r) in rs.iter().enumerate() {
            rows.push((format!("generator {i}"), entries_text(r)));
        }
    }
    Ok(Success {
        negative: false,
        json: to_json(&report),
        text: table(&rows),
    })
}

fn classify_cmd(problem: &Problem, opts: &Options) -> Result<Success, CliError> {
    let d = problem
        .data
        .as_ref()
        .ok_or_else(|| missing("$.braided2group", "classify needs braided2group"))?;
    let omega = problem.omega.as_ref().ok_or_else(|| missing("$.omega", "classify needs omega"))?;
    let rank = d.braided().pi1().rank();
    guard_table("the 5-cochain table size", cells(problem.group.order(), 5, rank), opts)?;
    let r = classify(d, omega, problem.upsilon.as_ref())?;
    let report = ClassifyReport {
        command: "classify".into(),
        obstruction: cochain_spec(&r.obstruction, None),
        liftable: r.liftable,
        preimage: r.preimage.as_ref().map(|p| cochain_spec(p, None)),
        torsor_factors: r.torsor_factors.clone(),
        torsor_order: r.torsor_order,
    };
    let mut rows = vec![
        ("obstruction".to_string(), entries_text(&report.obstruction)),
        ("liftable".into(), if r.liftable { "yes" } else { "no" }.into()),
    ];
    if let Some(p) = &report.preimage {
        rows.push(("preimage".into(), entries_text(p)));
    }
    rows.push(("torsor".into(), format!("H^3 = {} (order {})", cyclic_product(&r.torsor_factors), r.torsor_order)));
    Ok(Success {
        negative: !r.liftable,
        json: to_json(&report),
        text: table(&rows),
    })
}

fn extension(problem: &Problem, diagnose: bool, opts: &Options) -> Result<Success, CliError> {
    let omega = problem.omega.as_ref().ok_or_else(|| missing("$.omega", "extension needs omega"))?;
    let phi = omega_action(problem)?;
    let size = phi.module().order() * problem.group.order();
    guard_table("the multiplication table size", (size as u128).pow(2), opts)?;
    phi.validate().into_result("action on A").map_err(CliError::Engine)?;
    let built = if diagnose {
        build_extension_unchecked(phi, omega)
    } else {
        build_extension(phi, omega)
    };
    let n = problem.group.order();
    let elements: Vec<(Vec<i64>, usize)> = (0..size).map(|x| (phi.module().residues(x / n), x % n)).collect();
    let report = match built {
        Ok(e) => ExtensionReport {
            command: "extension".into(),
            order: e.group.order(),
            associative: true,
            witness: None,
            elements,
            table: e.group.table(),
            projection: e.projection.clone(),
            section: e.section.clone(),
            inclusion: e.inclusion.clone(),
            element_orders: Some((0..e.group.order()).map(|x| e.group.element_order(x)).collect()),
        },
        Err(Error::Axiom(AxiomViolation::NotAssociative { a, b, c })) if diagnose => ExtensionReport {
            command: "extension".into(),
            order: size,
            associative: false,
            witness: Some(vec![a, b, c]),
            elements,
            table: extension_table(phi, omega)?,
            projection: (0..size).map(|x| x % n).collect(),
            section: (0..n).collect(),
            inclusion: (0..phi.module().order()).map(|a| a * n).collect(),
            element_orders: None,
        },
        Err(e) => return Err(e.into()),
    };
    let mut rows = vec![
        ("order".to_string(), report.order.to_string()),
        ("associative".into(), if report.associative { "yes" } else { "no" }.into()),
    ];
    if let Some(w) = &report.witness {
        rows.push(("witness".into(), format!("(a, b, c) = {w:?}")));
    }
    if let Some(o) = &report.element_orders {
        rows.push(("exponent".into(), o.iter().copied().max().unwrap_or(1).to_string()));
        rows.push(("element orders".into(), format!("{o:?}")));
    }
    rows.push(("section".into(), format!("{:?}", report.section)));
    let mut text = table(&rows);
    text.push_str("multiplication table (element i = (a, g) at i = a|G| + g):\n");
    for row in &report.table {
        text.push_str(&row.iter().map(|x| format!("{x:>3}")).collect::<String>());
        text.push('\n');
    }
    Ok(Success {
        negative: !report.associative,
        json: to_json(&report),
        text,
    })
}

fn search(problem: &Problem, limit: u128, count_only: bool, opts: &Options) -> Result<Success, CliError> {
    let d = problem
        .data
        .as_ref()
        .ok_or_else(|| missing("$.braided2group", "search-actions needs braided2group"))?;
    let b = d.braided();
    let (n, na) = (problem.group.order(), b.pi0().order());
    let rank = b.pi1().rank();
    let residual_cells = n * (na * na * na + na * na) + n * n * na * na + n * n * n * na;
    guard_table("the action-data system size", (residual_cells * rank) as u128, opts)?;
    let space = ActionSpace::new(b.clone(), d.phi().clone(), d.psi().clone())?;
    let count = space.count();
    let data = if count_only {
        None
    } else {
        let all = space.enumerate(limit)?;
        Some(
            all.iter()
                .map(|x| {
                    let mut k = BTreeMap::new();
                    for g in 0..n {
                        if !x.k(g).is_zero() {
                            k.insert(g.to_string(), cochain_spec(x.k(g), Some(b.pi0())));
                        }
                    }
                    let mut theta = BTreeMap::new();
                    for g1 in 0..n {
                        for g2 in 0..n {
                            if !x.theta(g1, g2).is_zero() {
                                theta.insert(format!("{g1},{g2}"), cochain_spec(x.theta(g1, g2), Some(b.pi0())));
                            }
                        }
                    }
                    DatumOut { k, theta }
                })
                .collect::<Vec<_>>(),
        )
    };
    let report = SearchReport {
        command: "search-actions".into(),
        count,
        data,
    };
    let mut rows = vec![("count".to_string(), count.to_string())];
    if let Some(ds) = &report.data {
        for (i, x) in ds.iter().enumerate().take(16) {
            let ks: Vec<String> = x.k.iter().map(|(g, f)| format!("k_{g}: {}", entries_text(f))).collect();
            let ts: Vec<String> = x.theta.iter().map(|(g, f)| format!("theta_{g}: {}", entries_text(f))).collect();
            let all: Vec<String> = ks.into_iter().chain(ts).collect();
            rows.push((
                format!("datum {i}"),
                if all.is_empty() { "0".into() } else { all.join("; ") },
            ));
        }
        if ds.len() > 16 {
            rows.push(("...".into(), format!("{} more", ds.len() - 16)));
        }
    }
    Ok(Success {
        negative: count == 0,
        json: to_json(&report),
        text: table(&rows),
    })
}
