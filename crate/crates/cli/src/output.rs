use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::run::RunOutput;

/// Files written for one run.
#[derive(Clone, Debug)]
pub struct Written {
    pub result: PathBuf,
    pub summary: PathBuf,
    pub timing: PathBuf,
    pub latex: Option<PathBuf>,
}

/// Pretty JSON with a trailing newline; the exact bytes compared across runs.
pub fn result_json(out: &RunOutput) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&out.document())
        .map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn summary_csv(out: &RunOutput) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let internal = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(out.summary.iter().map(|(k, _)| k.as_str()))
        .map_err(internal)?;
    w.write_record(out.summary.iter().map(|(_, v)| v.as_str()))
        .map_err(internal)?;
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

fn latex_escape(s: &str) -> String {
    s.replace('\\', r"\textbackslash{}")
        .replace('_', r"\_")
        .replace('&', r"\&")
        .replace('%', r"\%")
        .replace('#', r"\#")
}

pub fn summary_latex(out: &RunOutput) -> String {
    let mut s = String::from("\\begin{tabular}{ll}\n\\hline\nfield & value \\\\\n\\hline\n");
    for (k, v) in &out.summary {
        s.push_str(&format!("{} & {} \\\\\n", latex_escape(k), latex_escape(v)));
    }
    s.push_str("\\hline\n\\end{tabular}\n");
    s
}

pub fn write_all(
    dir: &Path,
    out: &RunOutput,
    wall_ms: f64,
    workers: usize,
    latex: bool,
) -> CliResult<Written> {
    fs::create_dir_all(dir)?;
    let stem = out.command.name();
    let result = dir.join(format!("{stem}.json"));
    let summary = dir.join(format!("{stem}.csv"));
    let timing = dir.join(format!("{stem}.timing.json"));
    fs::write(&result, result_json(out)?)?;
    fs::write(&summary, summary_csv(out)?)?;
    let t = json!({ "wall_ms": wall_ms, "workers": workers });
    fs::write(&timing, format!("{t}\n"))?;
    let latex = if latex {
        let p = dir.join(format!("{stem}.tex"));
        fs::write(&p, summary_latex(out))?;
        Some(p)
    } else {
        None
    };
    Ok(Written {
        result,
        summary,
        timing,
        latex,
    })
}
