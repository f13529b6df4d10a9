use clap::Subcommand;
use kleinian::arith::{self, TableId};
use kleinian::{tables, triangle};
use serde_json::json;

use crate::out::Report;
use crate::{CliError, CliResult};

#[derive(Debug, Subcommand)]
pub enum Tables {
    /// Shipped data files and row counts.
    List,
    /// Print one shipped CSV verbatim.
    Dump {
        #[arg(long)]
        name: String,
    },
    /// Reproduce the γ tables (gamma3 gamma4 gamma5 plane23 p6 noncompact, or all).
    Verify {
        #[arg(long, default_value = "all")]
        table: String,
    },
    /// Spherical axis angles: closed forms against printed values.
    Angles,
}

pub fn run(cmd: Tables) -> CliResult<Report> {
    match cmd {
        Tables::List => {
            let files: Vec<_> = tables::all_files()
                .iter()
                .map(|(n, d)| (n.to_string(), d.lines().count().saturating_sub(1)))
                .collect();
            let text = files.iter().map(|(n, k)| format!("{n:<28} {k:>4} rows")).collect::<Vec<_>>().join("\n");
            let j = json!({"files": files.iter().map(|(n, k)| json!({"name": n, "rows": k})).collect::<Vec<_>>()});
            Ok(Report::new("tables_list", j, text))
        }
        Tables::Dump { name } => {
            let data = tables::all_files()
                .iter()
                .find(|(n, _)| *n == name || n.trim_end_matches(".csv") == name)
                .map(|(_, d)| *d)
                .ok_or_else(|| CliError::Domain(kleinian::Error::NotTabulated(name.clone())))?;
            Ok(Report::new("tables_dump", json!({"name": name, "csv": data}), data.trim_end().to_string()))
        }
        Tables::Verify { table } => {
            let ids: Vec<TableId> = if table == "all" { TableId::ALL.to_vec() } else { vec![table.parse()?] };
            let mut reports = Vec::new();
            let mut text = Vec::new();
            for id in ids {
                let rep = arith::verify_table(id)?;
                text.push(format!("{id:<11} {}/{} rows reproduced, {} errata", rep.matched(), rep.rows.len(), rep.errata.len()));
                for r in rep.rows.iter().filter(|r| !r.matched) {
                    text.push(format!("  unmatched {} (distance {:.3e})", r.label, r.distance));
                }
                for e in &rep.errata {
                    text.push(format!("  erratum {}: {}", e.label, e.message));
                }
                reports.push(rep);
            }
            Ok(Report::new("tables_verify", json!({"reports": reports}), text.join("\n")))
        }
        Tables::Angles => {
            let entries = triangle::all_angle_entries()?;
            let mut text = Vec::new();
            let mut worst: f64 = 0.0;
            for e in &entries {
                let diff = e.theta_printed.map(|t| (t - e.theta).abs());
                if let Some(d) = diff {
                    worst = worst.max(d);
                }
                text.push(format!(
                    "({},{}) {:<6} {:<14} θ = {:.6}  printed {}",
                    e.p,
                    e.q,
                    e.group,
                    e.sin_form,
                    e.theta,
                    e.theta_printed.map_or("—".into(), |t| format!("{t:.4}"))
                ));
            }
            text.push(format!("max |closed form − printed| = {worst:.2e}"));
            Ok(Report::new("tables_angles", json!({"entries": entries, "max_deviation": worst}), text.join("\n")))
        }
    }
}
