use std::path::PathBuf;

use clap::{Args, Subcommand};
use kleinian::exclusion::{self, Battery, SliceSpec, Window};
use kleinian::C64;
use serde_json::json;

use crate::out::{c_json, to_json_string, Report};
use crate::{parse, CliResult};

#[derive(Debug, Subcommand)]
pub enum Slice {
    /// Rasterize a γ-plane slice to a PPM image with a JSON sidecar.
    Render(RenderArgs),
    /// Battery verdict for one γ.
    Point(PointArgs),
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    beta: C64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "-4")]
    beta_prime: C64,
    /// re_min,re_max,im_min,im_max
    #[arg(long, value_parser = parse::window, allow_hyphen_values = true)]
    window: Window,
    /// WIDTHxHEIGHT
    #[arg(long, value_parser = parse::resolution)]
    res: (usize, usize),
    #[arg(long)]
    out: PathBuf,
    /// Backward-propagation depth through the word polynomials.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Replace the bundled words (comma separated).
    #[arg(long, value_delimiter = ',')]
    words: Option<Vec<String>>,
    /// γ values drawn as known discrete groups.
    #[arg(long = "mark", value_parser = parse::complex, allow_hyphen_values = true)]
    marked: Vec<C64>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    beta: C64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    gamma: C64,
}

fn sidecar_path(out: &std::path::Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn run(cmd: Slice) -> CliResult<Report> {
    match cmd {
        Slice::Render(a) => {
            let mut spec = SliceSpec::new(a.beta, a.window, a.res.0, a.res.1);
            spec.beta_prime = a.beta_prime;
            spec.depth = a.depth;
            if let Some(w) = a.words {
                spec.words = w;
            }
            spec.marked = a.marked;
            let raster = exclusion::rasterize_slice(&spec)?;
            std::fs::write(&a.out, raster.to_ppm())?;
            let meta = raster.metadata()?;
            let side = sidecar_path(&a.out);
            let side_json = Report::new("slice_metadata", serde_json::to_value(&meta).expect("serializable"), String::new());
            std::fs::write(&side, to_json_string(&side_json.json) + "\n")?;
            let text = format!(
                "wrote {} ({}x{}) and {}\n{}",
                a.out.display(),
                raster.width,
                raster.height,
                side.display(),
                meta.counts.iter().map(|(k, v)| format!("{k:?}: {v}")).collect::<Vec<_>>().join(", ")
            );
            let j = json!({
                "image": a.out.display().to_string(),
                "sidecar": side.display().to_string(),
                "width": raster.width,
                "height": raster.height,
                "counts": meta.counts,
            });
            Ok(Report::new("slice_render", j, text))
        }
        Slice::Point(a) => {
            let (verdict, reason) = Battery::standard(a.beta)?.explain(a.gamma);
            let text = format!("{verdict:?}{}", reason.as_deref().map(|r| format!(": {r}")).unwrap_or_default());
            let j = json!({"gamma": c_json(a.gamma), "beta": c_json(a.beta), "verdict": verdict, "reason": reason});
            Ok(Report::new("slice_point", j, text))
        }
    }
}
