//! Artifact writing: reports.jsonl (one JSON object per report), the
//! aggregate summary.csv, and plot-data CSVs under curves/.

use std::fs;
use std::io::Write;
use std::path::Path;

use nonlocal_core::verify::{InequalityReport, Verdict};

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "true",
        Verdict::Fail => "false",
        Verdict::Indeterminate => "indeterminate",
    }
}

fn csv_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.12e}")
    } else {
        String::new()
    }
}

pub fn write_all(
    out_dir: &Path,
    reports: &[(String, InequalityReport)],
    curves: &[(String, String)],
) -> std::io::Result<()> {
    fs::create_dir_all(out_dir.join("curves"))?;
    let mut jsonl = fs::File::create(out_dir.join("reports.jsonl"))?;
    for (_, report) in reports {
        writeln!(jsonl, "{}", report.to_json_line())?;
    }
    let mut summary = fs::File::create(out_dir.join("summary.csv"))?;
    writeln!(summary, "id,lhs,rhs,margin,pass")?;
    for (instance, report) in reports {
        writeln!(
            summary,
            "{instance},{},{},{},{}",
            csv_float(report.lhs),
            csv_float(report.rhs),
            csv_float(report.margin),
            verdict_str(report.pass)
        )?;
    }
    for (name, content) in curves {
        fs::write(out_dir.join("curves").join(name), content)?;
    }
    Ok(())
}
