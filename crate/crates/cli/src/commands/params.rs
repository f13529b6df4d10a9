use clap::{Args, Subcommand};
use kleinian::exclusion::{self, Battery};
use kleinian::moebius::{self, MoebiusMap, TraceParams};
use kleinian::C64;
use serde_json::json;

use crate::out::{c_json, fmt_c, Report};
use crate::{parse, CliResult};

#[derive(Debug, Subcommand)]
pub enum Params {
    /// Describe the group with parameters (γ, β, β′).
    Show(ShowArgs),
    /// Extract (γ, β, β′) from two matrices.
    Pair(PairArgs),
}

#[derive(Debug, Args)]
pub struct ShowArgs {
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    gamma: C64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    beta: C64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "-4")]
    beta_prime: C64,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Entries `a;b;c;d` of f.
    #[arg(long, value_parser = parse::matrix, allow_hyphen_values = true)]
    f: [C64; 4],
    #[arg(long, value_parser = parse::matrix, allow_hyphen_values = true)]
    g: [C64; 4],
}

pub fn run(cmd: Params) -> CliResult<Report> {
    match cmd {
        Params::Show(a) => show(TraceParams::new(a.gamma, a.beta, a.beta_prime)),
        Params::Pair(a) => {
            let f = MoebiusMap::new(a.f[0], a.f[1], a.f[2], a.f[3])?;
            let g = MoebiusMap::new(a.g[0], a.g[1], a.g[2], a.g[3])?;
            show(TraceParams::of_pair(&f, &g))
        }
    }
}

fn show(p: TraceParams) -> CliResult<Report> {
    let class_f = moebius::classify_beta(p.beta);
    let class_g = moebius::classify_beta(p.beta_prime);
    let dist = moebius::complex_distance_from_params(p.gamma, p.beta, p.beta_prime).ok();
    let margin = exclusion::jorgensen_margin(&p);
    let (mod_margin, mod_applies) = exclusion::modified_jorgensen_margin(&p);
    let words = if (p.beta_prime + 4.0).norm() < 1e-12 { exclusion::default_words()? } else { vec![] };
    let (verdict, reason) = Battery::new(p.beta, p.beta_prime, &words, 2)?.explain(p.gamma);
    let realization = moebius::realize(&p).ok();

    let mut text = vec![
        format!("gamma      = {}", fmt_c(p.gamma)),
        format!("beta       = {}  ({:?})", fmt_c(p.beta), class_f),
        format!("beta'      = {}  ({:?})", fmt_c(p.beta_prime), class_g),
        format!("jorgensen  |γ|+|β|−1 = {margin:.12}"),
        format!("verdict    {verdict:?}{}", reason.as_deref().map(|r| format!(" ({r})")).unwrap_or_default()),
    ];
    if mod_applies {
        text.insert(4, format!("modified   margin = {mod_margin:.12}"));
    }
    if let Some(d) = &dist {
        text.push(format!("axes       δ = {:.12}, θ = {:.12}", d.delta, d.theta));
    }
    if let Some((f, g)) = &realization {
        text.push(format!("f = [{}, {}; {}, {}]", fmt_c(f.a), fmt_c(f.b), fmt_c(f.c), fmt_c(f.d)));
        text.push(format!("g = [{}, {}; {}, {}]", fmt_c(g.a), fmt_c(g.b), fmt_c(g.c), fmt_c(g.d)));
    }
    let mat = |m: &MoebiusMap| json!([c_json(m.a), c_json(m.b), c_json(m.c), c_json(m.d)]);
    let j = json!({
        "gamma": c_json(p.gamma),
        "beta": c_json(p.beta),
        "beta_prime": c_json(p.beta_prime),
        "class_f": class_f,
        "class_g": class_g,
        "jorgensen_margin": margin,
        "modified_jorgensen_margin": if mod_applies { json!(mod_margin) } else { json!(null) },
        "verdict": verdict,
        "reason": reason,
        "complex_distance": dist.map(|d| json!({"delta": d.delta, "theta": d.theta})),
        "realization": realization.map(|(f, g)| json!({"f": mat(&f), "g": mat(&g)})),
    });
    Ok(Report::new("params", j, text.join("\n")))
}
