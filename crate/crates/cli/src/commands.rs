use std::path::Path;

use fell_core::approx::{ck_convergence_experiment, ck_net, net_bound, CkCarrier};
use fell_core::bundle::checks::run_suite;
use fell_core::bundle::subspace::CMatrix;
use fell_core::bundle::{BundleElement, FiniteFellBundle};
use fell_core::ck::checks::{decomposition_family, fiber_family, partition_identity, pr3_family, relation_identities, semisat_family};
use fell_core::ck::{oracle_level, CheckReport, CkAlgebra, Identity, TruncatedPathRep};
use fell_core::group::parse_word;
use fell_core::ideals::{ideal_closure, quotient_grading, unit_generated_ideals, verify_induced_theorems, IdealSubspace, InducedReport, QuotientReport};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{cap, load_algebra, load_bundle, read_file, ApproxRunArgs, BundleArgs, CkCheckArgs, CkFourierArgs, CliError, Command, Format, IdealArgs, RunConfig, MAX_WORD_LEN};
use crate::parse::parse_expression;

/// A finished run: whether every check passed, and its report.
#[derive(Debug)]
pub struct Outcome {
    pub passed: bool,
    pub json: Value,
    /// Header and rows of the tabular form.
    pub table: (Vec<String>, Vec<Vec<String>>),
    pub default_format: Format,
}

impl Outcome {
    pub fn render(&self, format: Option<Format>) -> Result<String, CliError> {
        match format.unwrap_or(self.default_format) {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.0)?;
                for row in &self.table.1 {
                    w.write_record(row)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    match &config.command {
        Command::CkCheck(a) => ck_check(a, config.seed),
        Command::CkFourier(a) => ck_fourier(a),
        Command::ApproxRun(a) => approx_run(a),
        Command::BundleVerify(a) => bundle_verify(a, config.seed),
        Command::IdealAnalyze(a) => ideal_analyze(a, config.seed),
    }
}

#[derive(Serialize)]
struct CheckSummary {
    label: String,
    instances: usize,
    failed: usize,
    examples: Vec<String>,
    passed: bool,
}

impl From<&CheckReport> for CheckSummary {
    fn from(r: &CheckReport) -> Self {
        CheckSummary {
            label: r.label.clone(),
            instances: r.instances,
            failed: r.failures.len(),
            examples: r.failures.iter().take(10).cloned().collect(),
            passed: r.passed(),
        }
    }
}

/// Every identity family swept by `ck-check`, with labels.
pub fn identity_families(alg: &CkAlgebra, depth: usize, k_max: usize) -> Result<Vec<(String, Vec<Identity>)>, CliError> {
    let n = alg.rank();
    let pairs = 2 * depth;
    Ok(vec![
        (format!("partial representation |t|+|r|<={pairs}"), pr3_family(n, pairs)?),
        (format!("semi-saturation |t|+|r|<={pairs}"), semisat_family(n, pairs)?),
        (format!("fiber products |t|,|r|<={depth}"), fiber_family(n, depth)?),
        (format!("partition of unity k<={k_max}"), (0..=k_max).map(|k| partition_identity(n, k)).collect()),
        (format!("degree decomposition |t|<={depth} k<={k_max}"), decomposition_family(n, depth, k_max)?),
        (format!("relation generators |t|+|r|<={}", pairs.saturating_sub(1)), relation_identities(alg, pairs.saturating_sub(1))?),
    ])
}

fn ck_check(args: &CkCheckArgs, seed: u64) -> Result<Outcome, CliError> {
    let (name, alg) = load_algebra(&args.matrix)?;
    let mut families = identity_families(&alg, args.depth, args.k_max)?;
    let mut reports: Vec<CheckReport> = families.iter().map(|(label, ids)| alg.check_all(label.clone(), ids)).collect();
    let (claim_ids, claims) = alg.verify_claims(args.depth)?;
    reports.push(CheckReport { label: format!("path claims depth={}", args.depth), ..claims });
    reports.push(alg.verify_range_projections(args.depth)?);
    families.push((format!("path claims depth={}", args.depth), claim_ids));

    let mut oracle = Vec::new();
    if args.oracle {
        for (label, ids) in &families {
            let rep = TruncatedPathRep::new(alg.adjacency().clone(), oracle_level(ids))?;
            oracle.push(rep.oracle_check(format!("oracle: {label}"), ids, 24, seed));
        }
    }
    let passed = reports.iter().chain(&oracle).all(CheckReport::passed);
    let all: Vec<CheckSummary> = reports.iter().chain(&oracle).map(CheckSummary::from).collect();
    let rows = all
        .iter()
        .map(|s| vec![s.label.clone(), s.instances.to_string(), s.failed.to_string(), s.passed.to_string()])
        .collect();
    Ok(Outcome {
        passed,
        json: json!({
            "command": "ck-check",
            "matrix": name,
            "rank": alg.rank(),
            "depth": args.depth,
            "k_max": args.k_max,
            "checks": all,
            "passed": passed,
        }),
        table: (vec!["label".into(), "instances".into(), "failed".into(), "passed".into()], rows),
        default_format: Format::Json,
    })
}

fn ck_fourier(args: &CkFourierArgs) -> Result<Outcome, CliError> {
    let (name, alg) = load_algebra(&args.matrix)?;
    let x = parse_expression(&args.expression, &alg)?;
    let printed = x.to_string();
    let round_trip = parse_expression(&printed, &alg)? == x;
    let components: Vec<(String, String)> = x.degrees().iter().map(|t| (t.to_string(), x.component(t).to_string())).collect();
    let resummed = x.degrees().iter().try_fold(alg.zero(), |acc, t| acc.add(&x.component(t)))?;
    let passed = round_trip && resummed == x;
    Ok(Outcome {
        passed,
        json: json!({
            "command": "ck-fourier",
            "matrix": name,
            "input": args.expression,
            "normal_form": printed,
            "components": components.iter().map(|(d, e)| json!({"degree": d, "element": e})).collect::<Vec<_>>(),
            "expectation": x.expectation().to_string(),
            "round_trip": round_trip,
            "passed": passed,
        }),
        table: (vec!["degree".into(), "element".into()], components.into_iter().map(|(d, e)| vec![d, e]).collect()),
        default_format: Format::Json,
    })
}

fn approx_run(args: &ApproxRunArgs) -> Result<Outcome, CliError> {
    let (name, alg) = load_algebra(&args.matrix)?;
    let t = parse_word(&args.t, alg.rank())?;
    cap("|t|", t.len(), MAX_WORD_LEN)?;
    let ms = crate::config::parse_m_range(&args.m)?;
    let carrier = CkCarrier::new(alg);
    let reports = ck_convergence_experiment(&carrier, &t, ms.clone())?;
    let mut bounds = Vec::new();
    for m in ms {
        let b = net_bound(&carrier, &ck_net(&carrier, m)?)?;
        bounds.push(json!({"m": m, "exact": b.exact.map(|q| q.to_string()), "value": b.value}));
    }
    let passed = reports.iter().all(|r| r.row.pass);
    let header = ["m", "main_coeff_num", "main_coeff_den", "paper_coeff", "tail_norm_estimate", "tail_bound", "pass"];
    let rows = reports
        .iter()
        .map(|r| {
            let row = &r.row;
            vec![
                row.m.to_string(),
                row.main_coeff_num.to_string(),
                row.main_coeff_den.to_string(),
                row.paper_coeff.to_string(),
                row.tail_norm_estimate.to_string(),
                row.tail_bound.to_string(),
                row.pass.to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        passed,
        json: json!({
            "command": "approx-run",
            "matrix": name,
            "t": t.to_string(),
            "rows": reports,
            "net_bounds": bounds,
            "passed": passed,
        }),
        table: (header.iter().map(|s| s.to_string()).collect(), rows),
        default_format: Format::Csv,
    })
}

fn bundle_name(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn bundle_verify(args: &BundleArgs, seed: u64) -> Result<Outcome, CliError> {
    let bundle = load_bundle(&args.bundle, false)?;
    let name = bundle_name(&args.bundle);
    let header = ["label", "samples", "worst", "tolerance", "passed"].iter().map(|s| s.to_string()).collect();
    let validation = bundle.validate();
    if !validation.passed() {
        // the numeric suite presupposes a Fell bundle
        let rows = validation
            .violations
            .iter()
            .map(|v| {
                let at = match v.s {
                    Some(s) => format!("{} at t={} s={s}", v.axiom, v.t),
                    None => format!("{} at t={}", v.axiom, v.t),
                };
                vec![at, String::new(), v.residual.to_string(), String::new(), "false".into()]
            })
            .collect();
        return Ok(Outcome {
            passed: false,
            json: json!({"command": "bundle-verify", "name": name, "validation": validation, "passed": false}),
            table: (header, rows),
            default_format: Format::Json,
        });
    }
    let report = run_suite(&name, &bundle, args.samples, seed);
    let passed = report.passed();
    let mut rows = vec![vec![
        "bundle axioms (0 violations)".to_string(),
        String::new(),
        validation.worst_adjoint.max(validation.worst_product).to_string(),
        String::new(),
        "true".into(),
    ]];
    rows.extend(report.checks.iter().map(|c| {
        vec![c.label.clone(), c.samples.to_string(), c.worst.to_string(), c.tolerance.to_string(), c.passed.to_string()]
    }));
    Ok(Outcome {
        passed,
        json: json!({"command": "bundle-verify", "report": report, "passed": passed}),
        table: (header, rows),
        default_format: Format::Json,
    })
}

/// Generators for extra ideals: each generator lists one row-major
/// `[re, im]` matrix per group element.
#[derive(Debug, Deserialize)]
pub struct IdealFile {
    pub ideals: Vec<IdealInput>,
}

#[derive(Debug, Deserialize)]
pub struct IdealInput {
    pub name: String,
    pub generators: Vec<Vec<Vec<[f64; 2]>>>,
}

fn section(bundle: &FiniteFellBundle, name: &str, parts: &[Vec<[f64; 2]>]) -> Result<BundleElement, CliError> {
    let d = bundle.dim();
    if parts.len() != bundle.order() || parts.iter().any(|m| m.len() != d * d) {
        return Err(CliError::Usage(format!("ideal {name}: each generator needs {} matrices of {} entries", bundle.order(), d * d)));
    }
    let components = parts
        .iter()
        .map(|m| CMatrix::from_row_slice(d, d, &m.iter().map(|[re, im]| Complex64::new(*re, *im)).collect::<Vec<_>>()))
        .collect();
    Ok(BundleElement { components })
}

#[derive(Serialize)]
struct IdealEntry {
    name: String,
    induced: InducedReport,
    quotient: Option<QuotientReport>,
    passed: bool,
}

fn ideal_analyze(args: &IdealArgs, seed: u64) -> Result<Outcome, CliError> {
    let bundle = load_bundle(&args.bundle, true)?;
    let mut ideals: Vec<(String, IdealSubspace)> = unit_generated_ideals(&bundle)?;
    if let Some(path) = &args.generators {
        let file: IdealFile = serde_json::from_str(&read_file(path)?)?;
        for input in file.ideals {
            let gens = input.generators.iter().map(|g| section(&bundle, &input.name, g)).collect::<Result<Vec<_>, _>>()?;
            ideals.push((input.name, ideal_closure(&bundle, &gens)?));
        }
    }
    let mut entries = Vec::new();
    for (k, (name, j)) in ideals.into_iter().enumerate() {
        let s = seed.wrapping_add(k as u64);
        let induced = verify_induced_theorems(&bundle, &j, args.samples, s)?;
        let quotient = if induced.dim_j1 == induced.dim_j { Some(quotient_grading(&bundle, &j, 5, s)?) } else { None };
        let passed = induced.passed && quotient.as_ref().is_none_or(|q| q.passed);
        entries.push(IdealEntry { name, induced, quotient, passed });
    }
    let passed = entries.iter().all(|e| e.passed);
    let rows = entries
        .iter()
        .map(|e| {
            let i = &e.induced;
            vec![
                e.name.clone(),
                i.dim_j.to_string(),
                i.dim_j1.to_string(),
                i.dim_j2.to_string(),
                i.j1_in_j2_residual.to_string(),
                format!("{}/{}", i.j3_on_j2_basis, i.j2_basis_size),
                format!("{}/{}", i.j3_rejections, i.complement_samples),
                e.quotient.as_ref().map(|q| format!("{:?}", q.quotient_dims)).unwrap_or_else(|| "not induced".into()),
                e.passed.to_string(),
            ]
        })
        .collect();
    let header = ["ideal", "dim_j", "dim_j1", "dim_j2", "j1_in_j2_residual", "j3_on_j2", "j3_rejections", "quotient_dims", "passed"];
    Ok(Outcome {
        passed,
        json: json!({"command": "ideal-analyze", "bundle": bundle_name(&args.bundle), "ideals": entries, "passed": passed}),
        table: (header.iter().map(|s| s.to_string()).collect(), rows),
        default_format: Format::Json,
    })
}
