//! Re-derivation of the proof ingredients, one CSV per kind of check plus
//! the full report as JSON.

use fock_core::Exec;
use verifier::{verify_appendix, AppendixReport};

use crate::config::AppendixConfig;
use crate::output::{flag, num, write_csv, write_text};
use crate::{CliError, Context, Outcome, Result};

pub fn report(cfg: &AppendixConfig, seed: u64, exec: Exec) -> Result<AppendixReport> {
    cfg.validate()?;
    verify_appendix(cfg.settings(seed), exec).map_err(|e| CliError::backend("verify-appendix", e))
}

fn idx(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn point(v: &[f64]) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(" ")
}

pub fn write(rep: &AppendixReport, ctx: &Context) -> Result<Vec<std::path::PathBuf>> {
    let out = &ctx.out;
    let constants: Vec<Vec<String>> = rep
        .constants
        .checks
        .iter()
        .map(|c| {
            let printed: f64 = c.printed.parse().unwrap_or(f64::NAN);
            vec![
                c.id.label().to_string(),
                num(c.exact),
                c.printed.clone(),
                c.truncated.clone(),
                num(c.exact - printed),
                flag(c.matches),
                num(c.deficit),
            ]
        })
        .collect();
    let diagonals: Vec<Vec<String>> = rep
        .diagonals
        .iter()
        .flat_map(|d| {
            d.points.iter().map(move |p| {
                vec![
                    d.family.label().to_string(),
                    p.n.to_string(),
                    p.m.to_string(),
                    num(p.closed_form),
                    num(p.direct),
                    num(p.deficit),
                ]
            })
        })
        .collect();
    let families: Vec<Vec<String>> = rep
        .families
        .iter()
        .map(|f| {
            vec![
                f.family.label().to_string(),
                num(f.constant),
                f.points.to_string(),
                num(f.min_trace),
                num(f.min_det),
                idx(&f.min_det_at),
                num(f.min_normalized_det),
                idx(&f.min_normalized_at),
                flag(f.passed()),
                "0".into(),
            ]
        })
        .collect();
    let scalars: Vec<Vec<String>> = rep
        .scalars
        .checks
        .iter()
        .map(|s| {
            vec![
                s.name.to_string(),
                s.statement.to_string(),
                flag(s.exhaustive),
                s.points.to_string(),
                s.violations.to_string(),
                num(s.min_margin),
                point(&s.min_margin_at),
                s.witness.as_deref().map(point).unwrap_or_default(),
                flag(s.passed()),
                "0".into(),
            ]
        })
        .collect();
    let identities: Vec<Vec<String>> = rep
        .identities
        .checks
        .iter()
        .map(|i| {
            vec![
                i.name.to_string(),
                i.statement.to_string(),
                num(i.max_error),
                flag(i.expected_to_hold),
                flag(i.holds()),
                flag(i.as_expected()),
                "0".into(),
            ]
        })
        .collect();
    let diag_deficit = rep.diagonals.iter().map(|d| d.max_abs_error).fold(0.0, f64::max);
    let const_deficit = rep.constants.checks.iter().map(|c| c.deficit.abs()).fold(0.0, f64::max);
    let summary = vec![
        vec!["constants".into(), flag(rep.constants_ok()), num(const_deficit)],
        vec!["diagonals".into(), flag(rep.diagonals_ok()), num(diag_deficit)],
        vec!["families".into(), flag(rep.families_ok()), "0".into()],
        vec!["scalars".into(), flag(rep.scalars_ok()), "0".into()],
        vec!["identities".into(), flag(rep.identities_ok()), "0".into()],
    ];
    let json = serde_json::to_string_pretty(rep).map_err(|e| CliError::backend("report.json", e))?;
    Ok(vec![
        write_csv(out, "constants.csv", &["constant", "exact", "printed", "truncated", "exact_minus_printed", "matches", "deficit"], &constants)?,
        write_csv(out, "diagonals.csv", &["family", "n", "m", "closed_form", "direct", "deficit"], &diagonals)?,
        write_csv(
            out,
            "families.csv",
            &["family", "constant", "points", "min_trace", "min_det", "min_det_at", "min_normalized_det", "min_normalized_at", "passed", "deficit"],
            &families,
        )?,
        write_csv(
            out,
            "scalars.csv",
            &["name", "statement", "exhaustive", "points", "violations", "min_margin", "min_margin_at", "witness", "passed", "deficit"],
            &scalars,
        )?,
        write_csv(out, "identities.csv", &["name", "statement", "max_error", "expected_to_hold", "holds", "as_expected", "deficit"], &identities)?,
        write_csv(out, "appendix_summary.csv", &["check", "passed", "deficit"], &summary)?,
        write_text(out, "report.json", &(json + "\n"))?,
    ])
}

pub fn run(cfg: &AppendixConfig, ctx: &Context) -> Result<Outcome> {
    let rep = report(cfg, ctx.seed, ctx.exec)?;
    let files = write(&rep, ctx)?;
    let mismatched: Vec<String> = rep.constants.mismatches().iter().map(|c| c.label().to_string()).collect();
    let mut summary = vec![
        format!("constants: {}", if mismatched.is_empty() { "all match".to_string() } else { format!("mismatch {}", mismatched.join(", ")) }),
        format!("diagonal closed forms: {}", if rep.diagonals_ok() { "pass" } else { "FAIL" }),
        format!("submatrix families: {}", if rep.families_ok() { "pass" } else { "FAIL" }),
        format!("scalar inequalities: {}", if rep.scalars_ok() { "pass" } else { "FAIL" }),
        format!("operator identities: {}", if rep.identities_ok() { "pass" } else { "FAIL" }),
    ];
    for c in rep.constants.checks.iter().filter(|c| !c.matches) {
        summary.push(format!("  {}: exact {} (cut {}), printed {}", c.id.label(), num(c.exact), c.truncated, c.printed));
    }
    Ok(Outcome { passed: rep.passed(), summary, files })
}
