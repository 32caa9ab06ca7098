use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use rsalg_core::analysis::{verify_semigroup, SuiteReport, VerifyConfig, REPORT_SCHEMA};
use rsalg_core::{
    b_norm, build_associated_groupoid, build_builtin, build_restricted_semigroup, builtin_corpus,
    check_inverse_semigroup, idempotents, lambda_r, parse_raw_semigroup, render_semigroup, rho_r, sigma_r_norm,
    CFunction, Error, InverseSemigroup, NormReport, Result, Status, Tolerance,
};

use crate::{Common, Emit, Format, Which};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Falsified(_) => EXIT_FALSIFIED,
        Error::Numeric(_) | Error::Decomposition(_) => EXIT_NUMERIC,
        _ => EXIT_INPUT,
    }
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn structured<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Field {
        field: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load(common: &Common) -> Result<Vec<InverseSemigroup>> {
    match (&common.builtin, &common.input) {
        (Some(name), _) if name == "all" => Ok(builtin_corpus()),
        (Some(name), _) => Ok(vec![build_builtin(name)?]),
        (None, Some(path)) => {
            let raw = parse_raw_semigroup(&read(path)?)?;
            Ok(vec![InverseSemigroup::new(raw)?])
        }
        (None, None) => Err(Error::Field {
            field: "input".into(),
            message: "one of --builtin or --input is required".into(),
        }),
    }
}

fn load_one(common: &Common) -> Result<InverseSemigroup> {
    let mut all = load(common)?;
    if all.len() != 1 {
        return Err(Error::Field {
            field: "builtin".into(),
            message: "this command takes a single semigroup".into(),
        });
    }
    Ok(all.remove(0))
}

pub fn check(common: &Common) -> Result<i32> {
    let raw = match (&common.builtin, &common.input) {
        (_, Some(path)) => parse_raw_semigroup(&read(path)?)?,
        _ => load_one(common)?.to_raw(),
    };
    let report = check_inverse_semigroup(&raw)?;
    let valid = report.valid;
    let (identity, zero, idem, name) = if valid {
        let s = InverseSemigroup::new(raw.clone())?;
        let idem: Vec<usize> = idempotents(&s).iter().collect();
        (s.identity(), s.zero(), idem, s.name().to_string())
    } else {
        (None, None, Vec::new(), raw.name.clone().unwrap_or_default())
    };
    let text = match common.format {
        Format::Structured => structured(&json!({
            "schema": REPORT_SCHEMA,
            "command": "check",
            "name": name,
            "n": raw.n,
            "valid": valid,
            "identity": identity,
            "zero": zero,
            "idempotents": idem,
            "violations": report.violations,
        })),
        Format::Text => {
            let mut t = format!("{name}: n = {}, {}\n", raw.n, if valid { "valid" } else { "INVALID" });
            if valid {
                t += &format!("identity: {}\n", identity.map_or("none".into(), |x| x.to_string()));
                t += &format!("zero: {}\n", zero.map_or("none".into(), |x| x.to_string()));
                t += &format!("idempotents: {idem:?}\n");
            } else {
                t += &format!("{}\n", report.summary());
            }
            t
        }
    };
    emit(common, &text)?;
    Ok(if valid { EXIT_OK } else { EXIT_INPUT })
}

pub fn construct(common: &Common, what: &[Emit]) -> Result<i32> {
    let s = load_one(common)?;
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let mut kinds = what.to_vec();
    kinds.sort();
    kinds.dedup();
    let mut written = Vec::new();
    for kind in kinds {
        let (suffix, body) = match kind {
            Emit::Sr => ("sr", render_semigroup(&build_restricted_semigroup(&s).sr)),
            Emit::Sa => ("sa", structured(&build_associated_groupoid(&s).export())),
            Emit::Lambda => ("lambda", lambda_r(&s).to_json()),
            Emit::Rho => ("rho", rho_r(&s).to_json()),
        };
        let path = dir.join(format!("{}.{suffix}.json", s.name()));
        fs::write(&path, body)?;
        written.push(path.display().to_string());
    }
    match common.format {
        Format::Structured => print!(
            "{}",
            structured(&json!({ "schema": REPORT_SCHEMA, "command": "construct", "written": written }))
        ),
        Format::Text => written.iter().for_each(|p| println!("wrote {p}")),
    }
    Ok(EXIT_OK)
}

pub fn norm(common: &Common, function: &Path, which: Which) -> Result<i32> {
    let s = load_one(common)?;
    let f = CFunction::from_json(&read(function)?)?;
    f.ensure_len(s.n())?;
    let (label, report): (&str, NormReport) = match which {
        Which::SigmaR => ("sigma_r", sigma_r_norm(&s, &f)?),
        Which::B => ("b", b_norm(&s, &f)?),
    };
    let text = match common.format {
        Format::Structured => structured(&json!({
            "schema": REPORT_SCHEMA,
            "command": "norm",
            "which": label,
            "report": report,
        })),
        Format::Text => format!(
            "{label} norm: {:.12}\nmethod: {}\nbounds: [{:.12}, {:.12}]\n",
            report.value,
            serde_json::to_value(report.method)
                .expect("method serializes")
                .as_str()
                .unwrap_or_default(),
            report.lower_bound,
            report.upper_bound
        ),
    };
    emit(common, &text)?;
    Ok(EXIT_OK)
}

pub fn verify(common: &Common, seed: u64) -> Result<i32> {
    let corpus = load(common)?;
    let config = VerifyConfig {
        seed,
        tol: Tolerance::new(common.tol),
        ..VerifyConfig::default()
    };
    let reports = corpus
        .par_iter()
        .map(|s| verify_semigroup(s, &config))
        .collect::<Result<Vec<_>>>()?;
    let suite = SuiteReport::assemble(&config, reports);
    let text = match common.format {
        Format::Structured => structured(&suite),
        Format::Text => render_text(&suite),
    };
    emit(common, &text)?;
    Ok(if suite.passed { EXIT_OK } else { EXIT_FALSIFIED })
}

fn render_text(suite: &SuiteReport) -> String {
    let mut out = format!("seed {}, tolerance {:e}\n", suite.seed, suite.tolerance);
    for r in &suite.semigroups {
        out += &format!("{} (n = {})\n", r.name, r.size);
        for c in &r.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out += &format!(
                "  {tag} {:<32} margin {:.3e} (bound {:.1e})\n",
                c.name, c.margin, c.tolerance
            );
            if let (Status::Fail, Some(w)) = (c.status, &c.witness) {
                out += &format!("       witness: {w}\n");
            }
        }
    }
    out += if suite.passed {
        "all properties hold\n"
    } else {
        "some properties FAILED\n"
    };
    out
}
