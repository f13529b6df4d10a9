use clap::{Args, Subcommand};
use kleinian::tables;
use kleinian::triangle::{self, EllipticOrders, MargulisResult, TriangleAngles};
use serde_json::json;

use crate::out::Report;
use crate::{parse, CliResult};

#[derive(Debug, Subcommand)]
pub enum Margulis {
    /// All three axes meeting at infinity.
    Ideal(OrdersArg),
    /// General (p,q,r) with axis angles at V12, V13, V23.
    Triangle(TriangleArgs),
    /// Three order-2 rotations (twice the inscribed radius).
    Two22(AnglesArg),
    /// Formula, oracle and printed values for every table row.
    Table,
}

#[derive(Debug, Args)]
pub struct OrdersArg {
    /// p,q,r
    #[arg(long, value_parser = parse::orders)]
    orders: [u32; 3],
}

#[derive(Debug, Args)]
pub struct AnglesArg {
    /// Three angles, decimals or kpi/n.
    #[arg(long, value_parser = parse::angles)]
    angles: [f64; 3],
}

#[derive(Debug, Args)]
pub struct TriangleArgs {
    #[arg(long, value_parser = parse::orders)]
    orders: [u32; 3],
    #[arg(long, value_parser = parse::angles)]
    angles: [f64; 3],
    /// Also run the minimax oracle.
    #[arg(long)]
    oracle: bool,
}

fn line(r: &MargulisResult) -> String {
    format!("margulis constant = {:.12} ({:?})", r.value, r.method)
}

pub fn run(cmd: Margulis) -> CliResult<Report> {
    match cmd {
        Margulis::Ideal(a) => {
            let [p, q, r] = a.orders;
            let res = triangle::margulis_ideal(&EllipticOrders::finite(p, q, r)?)?;
            Ok(Report::new("margulis", serde_json::to_value(&res).expect("serializable"), line(&res)))
        }
        Margulis::Triangle(a) => {
            let [p, q, r] = a.orders;
            let orders = EllipticOrders::finite(p, q, r)?;
            let angles = TriangleAngles::new(a.angles[0], a.angles[1], a.angles[2])?;
            let res = triangle::margulis_triangle(&orders, &angles)?;
            let mut text = line(&res);
            let mut oracle = json!(null);
            if a.oracle {
                let o = triangle::numeric_margulis_oracle(&orders, &angles)?;
                text = format!("{text}\n{}", line(&o));
                oracle = serde_json::to_value(&o).expect("serializable");
            }
            let j = json!({"formula": res, "oracle": oracle});
            Ok(Report::new("margulis", j, text))
        }
        Margulis::Two22(a) => {
            let angles = TriangleAngles::new(a.angles[0], a.angles[1], a.angles[2])?;
            let res = triangle::margulis_222(&angles)?;
            Ok(Report::new("margulis", serde_json::to_value(&res).expect("serializable"), line(&res)))
        }
        Margulis::Table => {
            let mut rows = Vec::new();
            let mut text = vec![format!("{:<10} {:>4} {:>10} {:>14} {:>14}  note", "table", "row", "printed", "formula", "oracle")];
            for row in tables::margulis_rows()? {
                let rep = triangle::check_margulis_row(&row)?;
                let g = &rep.geometry;
                let note = match (rep.erratum, g.all_submultiple) {
                    (true, _) => "erratum",
                    (false, false) => "non-submultiple",
                    _ => "",
                };
                text.push(format!(
                    "{:<10} {:>4} {:>10.6} {:>14.9} {:>14.9}  {note}",
                    g.table, g.row, g.printed, rep.formula, rep.oracle
                ));
                rows.push(rep);
            }
            let errata: Vec<_> = rows
                .iter()
                .filter(|r| r.erratum)
                .map(|r| {
                    json!({
                        "table": r.geometry.table,
                        "row": r.geometry.row,
                        "printed": r.geometry.printed,
                        "computed": r.formula,
                    })
                })
                .collect();
            let j = json!({"rows": rows, "errata": errata});
            Ok(Report::new("margulis_table", j, text.join("\n")))
        }
    }
}
