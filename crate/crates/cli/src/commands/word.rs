use clap::{Args, Subcommand};
use kleinian::moebius::TraceParams;
use kleinian::words::{self, GoodWord};
use kleinian::C64;
use serde_json::json;

use crate::out::{c_json, fmt_c, Report};
use crate::{parse, CliResult};

#[derive(Debug, Subcommand)]
pub enum Word {
    /// Trace polynomial p_w(z, β), optionally specialized at an integer β.
    Poly(PolyArgs),
    /// γ(f, w(g,f)) by polynomial and by matrices.
    Eval(EvalArgs),
    /// The composition w1 * w2 (w2 substituted for a) and its polynomial.
    Compose(ComposeArgs),
    /// The bundled named words.
    List,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    /// Word in a, b, A = a⁻¹, B = b⁻¹ (also a^-1, (ab)^3, …).
    #[arg(long)]
    word: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<i64>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    word: String,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    gamma: C64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    beta: C64,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    #[arg(long)]
    outer: String,
    #[arg(long)]
    inner: String,
}

pub fn run(cmd: Word) -> CliResult<Report> {
    match cmd {
        Word::Poly(a) => {
            let w = GoodWord::parse(&a.word)?;
            let tp = words::trace_polynomial(&w, None)?;
            let mut text = format!("word {w}\np_w(z, beta) = {tp}");
            let mut special = json!(null);
            if let Some(b) = a.beta {
                let ip = tp.poly.at_integer_beta(b)?;
                text = format!("{text}\np_w at beta = {b}: {ip}");
                special = json!({"beta": b, "polynomial": ip.to_string(), "coefficients": ip.to_i64()});
            }
            let j = json!({
                "word": w.to_string(),
                "strict": w.is_strict(),
                "polynomial": tp.to_string(),
                "terms": tp.to_json_terms(),
                "specialized": special,
            });
            Ok(Report::new("word_poly", j, text))
        }
        Word::Eval(a) => {
            let w = GoodWord::parse(&a.word)?;
            let tp = words::trace_polynomial(&w, None)?;
            let by_poly = tp.eval(a.gamma, a.beta);
            let by_matrix = words::evaluate_gamma(w.word(), &TraceParams::with_involution(a.gamma, a.beta))?;
            let text = format!(
                "p_w = {}\nmatrix  = {}\n|diff|  = {:.3e}",
                fmt_c(by_poly),
                fmt_c(by_matrix),
                (by_poly - by_matrix).norm()
            );
            let j = json!({
                "word": w.to_string(),
                "polynomial_value": c_json(by_poly),
                "matrix_value": c_json(by_matrix),
            });
            Ok(Report::new("word_eval", j, text))
        }
        Word::Compose(a) => {
            let w1 = GoodWord::parse(&a.outer)?;
            let w2 = GoodWord::parse(&a.inner)?;
            let w = words::compose_words(&w1, &w2)?;
            let tp = words::trace_polynomial(&w, None)?;
            let composed = words::trace_polynomial(&w1, None)?.compose(&words::trace_polynomial(&w2, None)?)?;
            let law = tp == composed;
            let text = format!("w = {w}\np_w = {tp}\ncomposition law: {}", if law { "holds" } else { "FAILS" });
            let j = json!({"word": w.to_string(), "polynomial": tp.to_string(), "composition_law": law});
            Ok(Report::new("word_compose", j, text))
        }
        Word::List => {
            let named = words::named_words();
            let text = named.iter().map(|(n, w)| format!("{n:<40} {w}")).collect::<Vec<_>>().join("\n");
            let j = json!({"words": named.iter().map(|(n, w)| json!({"name": n, "word": w})).collect::<Vec<_>>()});
            Ok(Report::new("word_list", j, text))
        }
    }
}
