use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crookpar::catalog::lut_format;
use crookpar::codes::{
    audit_partition, compare_parallelisms, enumerate_hamming, enumerate_preparata, format_codewords,
    min_distance, parse_codewords, partition_by_code, partition_parallelism,
};
use crookpar::coloring::build_parallelism;
use crookpar::equivalence::{search_equivalence, verify_witness, SearchOutcome, Witness};
use crookpar::formats::{load_parallelism, parallelism_to_json};
use crookpar::geometry::parallelism_defect;
use crookpar::gf2::{default_modulus, MAX_DEGREE};
use crookpar::relaxed::{reports_to_csv, summarize, RelaxedReport};
use crookpar::vbf::{
    algebraic_degree, is_apn, is_crooked, is_permutation, CrookedMethod, DEFINITION_METHOD_MAX_N,
    HYPERPLANE_METHOD_MAX_N,
};
use crookpar::Error;

use crate::select::{self, function, function_from_str, parallelism_from_str};
use crate::{CodeKind, FnArgs, Format, Method};

/// Functions scanned when `relaxed scan` gets no arguments.
const DEFAULT_SCAN: [&str; 4] = ["inverse:5", "inverse:7", "kasami:2:7", "welch:7"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Refuted,
    BudgetExceeded,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Holds => 0,
            Outcome::Refuted => 1,
            Outcome::BudgetExceeded => 3,
        }
    }

    fn from_bool(holds: bool) -> Self {
        if holds {
            Outcome::Holds
        } else {
            Outcome::Refuted
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: "Usage".into(),
            message: message.into(),
            exit: 2,
        }
    }

    /// Writes the error as one JSON record on stderr.
    pub fn emit(&self) {
        eprintln!(
            "{}",
            json!({"error": self.kind, "message": self.message, "exit": self.exit})
        );
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let debug = format!("{e:?}");
        let kind: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
        // These mean a mathematical property failed, not that the input was bad.
        let refuted = matches!(
            e,
            Error::NotAParallelism(_)
                | Error::ZeroColor(_)
                | Error::InconsistentColoring { .. }
                | Error::NoTranslateFound
                | Error::MultipleTranslatesFound(_)
        );
        CliError {
            kind,
            message: e.to_string(),
            exit: if refuted { 1 } else { 2 },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

fn write_out(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, content).map_err(CliError::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(report).unwrap()),
        Format::Text | Format::Csv => {
            let obj = report.as_object().expect("reports are objects");
            obj.iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}: {s}\n"),
                    other => format!("{k}: {other}\n"),
                })
                .collect()
        }
    }
}

fn print_report(report: &Value, format: Format) {
    print!("{}", render(report, format));
}

pub fn fn_check(args: &FnArgs, method: Method, format: Format) -> Result<Outcome, CliError> {
    let sel = function(args)?;
    let f = &sel.f;
    let n = f.n();
    let mut report = json!({
        "function": sel.label,
        "n": n,
        "modulus": format!("{:#x}", f.ctx().modulus()),
        "apn": is_apn(f),
        "permutation": is_permutation(f),
        "degree": algebraic_degree(f),
    });
    let crooked = match method {
        Method::Auto => {
            let m = if n <= DEFINITION_METHOD_MAX_N {
                CrookedMethod::Definition
            } else {
                CrookedMethod::Hyperplane
            };
            report["method"] = json!(format!("{m:?}").to_lowercase());
            is_crooked(f, m)?
        }
        Method::Definition => {
            report["method"] = json!("definition");
            is_crooked(f, CrookedMethod::Definition)?
        }
        Method::Hyperplane => {
            report["method"] = json!("hyperplane");
            is_crooked(f, CrookedMethod::Hyperplane)?
        }
        Method::Both => {
            let a = is_crooked(f, CrookedMethod::Definition)?;
            let b = is_crooked(f, CrookedMethod::Hyperplane)?;
            report["method"] = json!("both");
            report["crooked_definition"] = json!(a);
            report["crooked_hyperplane"] = json!(b);
            if a != b {
                return Err(CliError {
                    kind: "MethodDisagreement".into(),
                    message: format!("definition says {a}, hyperplane says {b}"),
                    exit: 1,
                });
            }
            a
        }
    };
    report["crooked"] = json!(crooked);
    print_report(&report, format);
    Ok(Outcome::from_bool(crooked))
}

pub fn fn_export(args: &FnArgs, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let sel = function(args)?;
    write_out(out.as_deref(), &lut_format(&sel.f))?;
    Ok(Outcome::Holds)
}

pub fn parallelism_build(args: &FnArgs, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let sel = function(args)?;
    let par = build_parallelism(&sel.f)?;
    let text = parallelism_to_json(&par, sel.f.ctx().modulus());
    if let Some(path) = &out {
        std::fs::write(path, &text)?;
        let crooked = if sel.f.n() <= HYPERPLANE_METHOD_MAX_N {
            json!(is_crooked(&sel.f, CrookedMethod::Hyperplane)?)
        } else {
            json!("skipped")
        };
        print_report(
            &json!({
                "function": sel.label,
                "n": par.n,
                "spreads": par.classes.len(),
                "lines_per_spread": par.classes[0].lines.len(),
                "lines": par.line_count(),
                "crooked": crooked,
                "out": path.display().to_string(),
            }),
            Format::Text,
        );
    } else {
        print!("{text}");
    }
    Ok(Outcome::Holds)
}

pub fn parallelism_verify(file: &Path) -> Result<Outcome, CliError> {
    let (par, modulus) = load_parallelism(file)?;
    let defect = parallelism_defect(&par, par.n);
    let mut sizes: Vec<usize> = par.classes.iter().map(|c| c.lines.len()).collect();
    sizes.dedup();
    let mut report = json!({
        "file": file.display().to_string(),
        "n": par.n,
        "modulus": format!("{modulus:#x}"),
        "spreads": par.classes.len(),
        "lines": par.line_count(),
        "valid": defect.is_none(),
    });
    if let [size] = sizes[..] {
        report["lines_per_spread"] = json!(size);
    }
    if let Some(why) = &defect {
        report["defect"] = json!(why);
    }
    print_report(&report, Format::Text);
    Ok(Outcome::from_bool(defect.is_none()))
}

pub fn parallelism_export(file: &Path, format: Format, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let (mut par, modulus) = load_parallelism(file)?;
    let text = match format {
        Format::Json => parallelism_to_json(&par, modulus),
        Format::Text => {
            par.normalize();
            let mut s = format!("# n={} modulus={modulus:#x} point_encoding=x1<<n|x\n", par.n);
            for c in &par.classes {
                let lines: Vec<String> = c
                    .lines
                    .iter()
                    .map(|l| {
                        let [p, q, r] = l.points();
                        format!("{p},{q},{r}")
                    })
                    .collect();
                s.push_str(&format!("{:#x}: {}\n", c.color, lines.join(" ")));
            }
            s
        }
        Format::Csv => return Err(CliError::usage("parallelisms export as json or text")),
    };
    write_out(out.as_deref(), &text)?;
    Ok(Outcome::Holds)
}

pub fn code_enumerate(
    args: &FnArgs,
    code: CodeKind,
    out: Option<PathBuf>,
    format: Format,
) -> Result<Outcome, CliError> {
    let sel = function(args)?;
    let words = match code {
        CodeKind::Preparata => enumerate_preparata(&sel.f)?,
        CodeKind::Hamming => enumerate_hamming(sel.f.n())?,
    };
    if let Some(path) = &out {
        std::fs::write(path, format_codewords(&words))?;
    }
    let report = json!({
        "function": sel.label,
        "code": match code { CodeKind::Preparata => "preparata", CodeKind::Hamming => "hamming" },
        "length": (1usize << (sel.f.n() + 1)) - 1,
        "words": words.len(),
        "min_distance": min_distance(&words)?,
    });
    print_report(&report, format);
    Ok(Outcome::Holds)
}

pub fn code_partition(
    args: &FnArgs,
    codewords: Option<PathBuf>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<Outcome, CliError> {
    if let Some(path) = codewords {
        let n = match args.n {
            Some(n) if args.family.is_none() && args.spec.is_none() && args.lut.is_none() => n,
            _ => function(args)?.f.n(),
        };
        let words = parse_codewords(n, &std::fs::read_to_string(&path)?)?;
        let part = partition_by_code(n, &words)?;
        if let Some(out) = &out {
            let mut text = String::new();
            for (label, ws) in &part.parts {
                text.push_str(&format!("# {label}\n"));
                text.push_str(&format_codewords(ws));
            }
            std::fs::write(out, text)?;
        }
        let parts: serde_json::Map<String, Value> = part
            .parts
            .iter()
            .map(|(label, ws)| {
                let d = min_distance(ws).map(|d| json!(d)).unwrap_or(Value::Null);
                (label.to_string(), json!({"words": ws.len(), "min_distance": d}))
            })
            .collect();
        let report = json!({
            "codewords": path.display().to_string(),
            "input_words": words.len(),
            "shift": part.shift.to_string(),
            "parts": parts,
        });
        print_report(&report, format);
        return Ok(Outcome::Holds);
    }
    let sel = function(args)?;
    let n = sel.f.n();
    let par = partition_parallelism(&sel.f)?;
    if let Some(path) = &out {
        std::fs::write(path, parallelism_to_json(&par, sel.f.ctx().modulus()))?;
    }
    let comparison = match build_parallelism(&sel.f) {
        Ok(colored) => compare_parallelisms(&par, &colored).to_string(),
        Err(e) => format!("coloring failed: {e}"),
    };
    let report = json!({
        "function": sel.label,
        "n": n,
        "spreads": par.classes.len(),
        "lines": par.line_count(),
        "valid": true,
        "comparison_with_coloring": comparison,
    });
    print_report(&report, format);
    Ok(Outcome::Holds)
}

pub fn code_audit(args: &FnArgs, samples: usize, seed: u64, format: Format) -> Result<Outcome, CliError> {
    let sel = function(args)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let audit = audit_partition(&sel.f, samples, &mut rng)?;
    let per_label: serde_json::Map<String, Value> = audit
        .per_label
        .iter()
        .map(|(l, c)| (l.to_string(), json!(c)))
        .collect();
    let report = json!({
        "function": sel.label,
        "length": (1usize << (audit.n + 1)) - 1,
        "seed": seed,
        "words": audit.words,
        "labelled": audit.per_label.values().sum::<usize>(),
        "labels_used": audit.per_label.len(),
        "per_label": per_label,
    });
    print_report(&report, format);
    Ok(Outcome::Holds)
}

pub fn equiv_verify(left: &str, right: &str, witness: &Path) -> Result<Outcome, CliError> {
    let f = function_from_str(left)?;
    let g = function_from_str(right)?;
    let w = Witness::from_json(&std::fs::read_to_string(witness)?)?;
    if w.n() != f.f.n() || g.f.n() != f.f.n() {
        return Err(Error::DimensionMismatch(f.f.n(), w.n()).into());
    }
    let ok = verify_witness(&f.f, &g.f, &w);
    print_report(
        &json!({
            "left": f.label,
            "right": g.label,
            "witness": witness.display().to_string(),
            "valid": ok,
        }),
        Format::Text,
    );
    Ok(Outcome::from_bool(ok))
}

pub fn equiv_search(
    left: &str,
    right: &str,
    budget: u64,
    out: Option<PathBuf>,
    format: Format,
) -> Result<Outcome, CliError> {
    let (l_label, p1) = parallelism_from_str(left)?;
    let (r_label, p2) = parallelism_from_str(right)?;
    let (outcome, stats) = search_equivalence(&p1, &p2, budget)?;
    let mut report = json!({
        "left": l_label,
        "right": r_label,
        "n": p1.n,
        "budget": budget,
        "nodes": stats.nodes,
    });
    if p1.n <= 3 {
        report["note"] = json!("exploratory: the quadratic equivalence criterion needs n > 3");
    }
    let result = match &outcome {
        SearchOutcome::Equivalent(w) => {
            report["result"] = json!("equivalent");
            report["kappa_fixes_h"] = json!(w.kappa.fixes_h());
            report["sigma_additive"] = json!(w.sigma_is_additive());
            if let (Ok(f), Ok(g)) = (function_from_str(left), function_from_str(right)) {
                report["witness_verified_on_functions"] = json!(verify_witness(&f.f, &g.f, w));
            }
            if let Some(path) = &out {
                std::fs::write(path, w.to_json() + "\n")?;
                report["out"] = json!(path.display().to_string());
            }
            Outcome::Holds
        }
        SearchOutcome::Inequivalent => {
            report["result"] = json!("inequivalent");
            Outcome::Refuted
        }
        SearchOutcome::BudgetExceeded => {
            report["result"] = json!("budget exceeded");
            Outcome::BudgetExceeded
        }
    };
    print_report(&report, format);
    Ok(result)
}

pub fn relaxed_scan(specs: &[String], out: Option<PathBuf>, format: Format) -> Result<Outcome, CliError> {
    let specs: Vec<String> = if specs.is_empty() {
        DEFAULT_SCAN.iter().map(|s| s.to_string()).collect()
    } else {
        specs.to_vec()
    };
    let functions = specs
        .iter()
        .map(|s| select::function_from_str(s).map(|sel| (sel.label, sel.f)))
        .collect::<Result<Vec<_>, _>>()?;
    let reports = crookpar::relaxed::relaxed_scan(&functions)?;
    let summary = summarize(&reports);
    let body = match format {
        Format::Csv => reports_to_csv(&reports)?,
        Format::Json | Format::Text => render(
            &json!({
                "functions": summary.functions,
                "satisfying": summary.satisfying,
                "satisfying_non_quadratic": summary.satisfying_non_quadratic,
                "inconsistent": summary.inconsistent,
                "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
            }),
            format,
        ),
    };
    write_out(out.as_deref(), &body)?;
    if out.is_some() {
        print_report(
            &json!({
                "functions": summary.functions,
                "satisfying": summary.satisfying,
                "satisfying_non_quadratic": summary.satisfying_non_quadratic,
                "inconsistent": summary.inconsistent,
            }),
            Format::Text,
        );
    }
    Ok(Outcome::from_bool(summary.inconsistent == 0))
}

fn report_json(r: &RelaxedReport) -> Value {
    json!({
        "id": r.id,
        "n": r.n,
        "degree": r.degree,
        "apn": r.is_apn,
        "permutation": r.is_perm,
        "cond_a": r.cond_a,
        "cond_b": r.cond_b,
        "cond_c": r.cond_c,
    })
}

pub fn list_moduli(max: u32) -> Result<Outcome, CliError> {
    if max == 0 || max > MAX_DEGREE {
        return Err(Error::DegreeOutOfRange(max).into());
    }
    for n in 1..=max {
        println!("{n} {:#x}", default_modulus(n)?);
    }
    Ok(Outcome::Holds)
}
