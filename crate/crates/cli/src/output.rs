use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use drzero::acceptance::AcceptanceReport;
use drzero::baselines::ComparisonReport;
use drzero::basin::BasinGrid;
use drzero::douglas_rachford::Trajectory;
use drzero::lyapunov::LyapunovCertificate;
use serde::Serialize;

use crate::args::OutputArgs;

pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Round-trip exact: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    pub fn new(out: &OutputArgs) -> Self {
        Sink { path: out.output.clone() }
    }

    fn write_bytes(&self, bytes: &[u8]) -> Result<()> {
        match &self.path {
            Some(p) => fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display())),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
                Ok(())
            }
        }
    }

    pub fn write_json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_bytes(text.as_bytes())
    }

    pub fn write_text(&self, text: &str) -> Result<()> {
        self.write_bytes(text.as_bytes())
    }

    pub fn write_csv(&self, table: Table) -> Result<()> {
        self.write_bytes(&csv_bytes(&table)?)
    }
}

fn csv_bytes(table: &Table) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(&table.headers)?;
    for r in &table.rows {
        w.write_record(r)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn trajectory_csv(t: &Trajectory) -> Table {
    let dim = t.iterates[0].dimension();
    let mut headers = vec!["n".to_string()];
    if dim == 1 {
        headers.push("x".into());
    } else {
        headers.extend((1..=dim).map(|i| format!("x{i}")));
    }
    headers.extend(["rho", "f_x", "step_norm"].map(String::from));
    let rows = t
        .iterates
        .iter()
        .enumerate()
        .map(|(n, z)| {
            let mut row = vec![n.to_string()];
            row.extend(z.x.iter().map(|&v| num(v)));
            row.push(num(z.rho));
            row.push(opt(t.f_values[n]));
            row.push(opt(t.step_norms.get(n).copied()));
            row
        })
        .collect();
    Table { headers, rows }
}

pub fn lyapunov_csv(t: &Trajectory, c: &LyapunovCertificate) -> Table {
    let headers = ["n", "V", "margin", "orthogonality_residual", "in_domain"].map(String::from).to_vec();
    let rows = (0..t.iterates.len())
        .map(|n| {
            vec![
                n.to_string(),
                opt(c.values[n]),
                opt(c.decrease_margins.get(n).copied().flatten()),
                opt(c.orthogonality_residuals.get(n).copied().flatten()),
                c.in_domain_flags[n].to_string(),
            ]
        })
        .collect();
    Table { headers, rows }
}

pub fn lyapunov_verdict(c: &LyapunovCertificate) -> String {
    serde_json::json!({
        "family": c.family,
        "domain": c.domain,
        "first_stable_index": c.first_stable_index,
        "verdict": c.verdict,
    })
    .to_string()
}

pub fn verdict_table(r: &ComparisonReport) -> String {
    let mut out = format!("{:<24} {:<20} {:>10}  terminal\n", "method", "verdict", "steps");
    for (name, run) in [
        ("douglas_rachford", &r.douglas_rachford),
        ("alternating_projections", &r.alternating_projections),
        ("newton", &r.newton),
    ] {
        let last = run.trajectory.last();
        out.push_str(&format!(
            "{name:<24} {:<20} {:>10}  ({:?}, {})\n",
            format!("{:?}", run.verdict),
            run.trajectory.steps(),
            last.x,
            last.rho
        ));
    }
    out
}

pub fn basin_csv(g: &BasinGrid) -> Table {
    let headers = ["row", "col", "x0", "rho0", "iterations", "class", "x_term", "rho_term"]
        .map(String::from)
        .to_vec();
    let rows = g
        .cells
        .iter()
        .map(|c| {
            vec![
                c.row.to_string(),
                c.col.to_string(),
                num(c.start.x[0]),
                num(c.start.rho),
                c.iterations.map(|i| i.to_string()).unwrap_or_default(),
                c.classification.label().to_string(),
                num(c.terminal.x[0]),
                num(c.terminal.rho),
            ]
        })
        .collect();
    Table { headers, rows }
}

pub fn dump_trajectories(dir: &Path, kept: &[(usize, usize, Trajectory)]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (row, col, t) in kept {
        let path = dir.join(format!("cell_{row}_{col}.csv"));
        fs::write(&path, csv_bytes(&trajectory_csv(t))?).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

pub fn acceptance_csv(r: &AcceptanceReport) -> Table {
    let headers = ["id", "name", "status", "detail"].map(String::from).to_vec();
    let rows = r
        .results
        .iter()
        .map(|c| {
            vec![
                c.id.to_string(),
                c.name.clone(),
                if c.passed { "PASS" } else { "FAIL" }.to_string(),
                c.detail.clone(),
            ]
        })
        .collect();
    Table { headers, rows }
}
