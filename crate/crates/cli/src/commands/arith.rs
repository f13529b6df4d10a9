use std::path::PathBuf;

use clap::{Args, Subcommand};
use kleinian::arith::{self, CandidateGamma};
use kleinian::poly::parse_int_poly;
use serde_json::json;

use crate::out::{c_json, fmt_c, Report};
use crate::CliResult;

#[derive(Debug, Subcommand)]
pub enum Arith {
    /// Enumerate integer polynomials whose root γ passes the screen.
    Enumerate(EnumerateArgs),
    /// Screen one polynomial.
    Check(CheckArgs),
    /// Exact discriminant and square factor.
    Discriminant(DiscArgs),
    /// Coarse and refined parabolic (β = 0) candidates.
    Parabolic,
    /// Schur's bound M_r.
    Schur {
        #[arg(long)]
        r: u32,
    },
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, allow_hyphen_values = true)]
    beta: i64,
    #[arg(long)]
    degree: u32,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep only accepted candidates.
    #[arg(long)]
    accepted_only: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// e.g. "z^4 + 6z^3 + 12z^2 + 9z + 1"
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: i64,
}

#[derive(Debug, Args)]
pub struct DiscArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Report f with disc = D·f² for this D.
    #[arg(long, allow_hyphen_values = true)]
    fundamental: Option<i64>,
}

fn csv_bytes(cands: &[CandidateGamma]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["degree", "polynomial", "coefficients", "gamma_re", "gamma_im", "accepted", "checks", "reason"])?;
    for c in cands {
        let coeffs = c.coefficients.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
        w.write_record([
            (c.coefficients.len() - 1).to_string(),
            c.polynomial.clone(),
            coeffs,
            format!("{:.12}", c.gamma.re),
            format!("{:.12}", c.gamma.im),
            c.accepted().to_string(),
            c.checks.bits().to_string(),
            c.reason.clone().unwrap_or_default(),
        ])?;
    }
    w.into_inner().map_err(|e| crate::CliError::Io(e.into_error()))
}

pub fn run(cmd: Arith) -> CliResult<Report> {
    match cmd {
        Arith::Enumerate(a) => {
            let mut cands = arith::enumerate_candidates(a.beta, a.degree, None)?;
            if a.accepted_only {
                cands.retain(CandidateGamma::accepted);
            }
            let bytes = csv_bytes(&cands)?;
            let accepted = cands.iter().filter(|c| c.accepted()).count();
            let summary = json!({
                "beta": a.beta,
                "degree": a.degree,
                "candidates": cands.len(),
                "accepted": accepted,
                "out": a.out.as_ref().map(|p| p.display().to_string()),
            });
            match &a.out {
                Some(path) => {
                    std::fs::write(path, &bytes)?;
                    let text = format!("{} candidates ({accepted} accepted) written to {}", cands.len(), path.display());
                    Ok(Report::new("arith_enumerate", summary, text))
                }
                None => {
                    let mut j = summary;
                    j["rows"] = serde_json::to_value(&cands).expect("serializable");
                    let text = String::from_utf8(bytes).expect("csv is utf-8");
                    Ok(Report::new("arith_enumerate", j, text.trim_end().to_string()))
                }
            }
        }
        Arith::Check(a) => {
            let p = parse_int_poly(&a.poly)?;
            let c = arith::arithmeticity_check(&p, a.beta)?;
            let text = format!(
                "{}\ngamma = {}\nchecks = {:?}\n{}",
                c.polynomial,
                fmt_c(c.gamma),
                c.checks,
                if c.accepted() { "accepted".to_string() } else { format!("rejected: {}", c.reason.clone().unwrap_or_default()) }
            );
            let mut j = serde_json::to_value(&c).expect("serializable");
            j["accepted"] = json!(c.accepted());
            Ok(Report::new("arith_check", j, text))
        }
        Arith::Discriminant(a) => {
            let p = parse_int_poly(&a.poly)?;
            let d = arith::poly_discriminant(&p);
            let f = a.fundamental.map(|fd| arith::square_factor(&d, fd));
            let mut text = format!("disc = {d}");
            if let (Some(fd), Some(f)) = (a.fundamental, &f) {
                text += &match f {
                    Some(f) => format!("\n     = {fd} · {f}²"),
                    None => format!("\nnot {fd} times a square"),
                };
            }
            let j = json!({
                "polynomial": p.to_string(),
                "discriminant": d.to_string(),
                "fundamental": a.fundamental,
                "square_factor": f.flatten().map(|f| f.to_string()),
            });
            Ok(Report::new("arith_discriminant", j, text))
        }
        Arith::Parabolic => {
            let rep = arith::enumerate_parabolic_candidates()?;
            let mut text = vec![format!("coarse: {} points, refined: {}", rep.coarse.len(), rep.refined.len())];
            for c in &rep.refined {
                text.push(format!("  z^2 {:+}z {:+}  gamma = {}", c.b, c.c, fmt_c(c.gamma)));
            }
            let seven: Vec<_> = arith::parabolic_seven().into_iter().map(c_json).collect();
            let mut j = serde_json::to_value(&rep).expect("serializable");
            j["listed"] = json!(seven);
            Ok(Report::new("arith_parabolic", j, text.join("\n")))
        }
        Arith::Schur { r } => {
            let s = arith::schur_bound(r)?;
            let text = format!("M_{r} = {} ≈ {:.12e}", s.m, s.to_f64());
            let j = json!({"r": r, "exact": s.m.to_string(), "value": s.to_f64()});
            Ok(Report::new("arith_schur", j, text))
        }
    }
}
