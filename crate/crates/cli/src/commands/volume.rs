use clap::{Args, Subcommand};
use kleinian::volume::{self, TubeSpec};
use serde_json::json;

use crate::out::Report;
use crate::CliResult;

#[derive(Debug, Subcommand)]
pub enum Volume {
    /// Volume of a precisely invariant tube.
    Tube(TubeArgs),
    /// Ball bound π(sinh 2r − 2r)/|stabilizer|.
    Ball {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        order: u32,
    },
    /// Search for m, n killing the holonomy of an axis.
    Kill(KillArgs),
    /// Collar radius bound from |β| of a short element.
    Collar {
        #[arg(long)]
        beta_abs: f64,
        /// Use the order-6 |γ| ≥ 1 variant.
        #[arg(long)]
        order6: bool,
        /// The element and its translate share a fixed point.
        #[arg(long, requires = "order6")]
        parabolic: bool,
    },
    /// Balanced lower bound for torsion of order p ≥ 6.
    HighTorsion {
        #[arg(long)]
        p: u32,
    },
}

#[derive(Debug, Args)]
pub struct TubeArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    tau: f64,
    #[arg(long)]
    r: f64,
    #[arg(long)]
    involution: bool,
}

#[derive(Debug, Args)]
pub struct KillArgs {
    #[arg(long)]
    tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m_max: Option<u32>,
    /// Minimize the squared complex length instead of |4 sinh²(L/2)|.
    #[arg(long)]
    length: bool,
}

pub fn run(cmd: Volume) -> CliResult<Report> {
    match cmd {
        Volume::Tube(a) => {
            let spec = TubeSpec { p: a.p, tau: a.tau, r: a.r, has_involution: a.involution };
            let v = volume::tube_volume(&spec)?;
            Ok(Report::new("volume_tube", json!({"spec": spec, "volume": v}), format!("tube volume = {v:.12}")))
        }
        Volume::Ball { r, order } => {
            let v = volume::ball_volume_bound(r, order)?;
            Ok(Report::new("volume_ball", json!({"r": r, "order": order, "volume": v}), format!("ball bound = {v:.12}")))
        }
        Volume::Kill(a) => {
            let k = if a.length {
                volume::kill_holonomy_length(a.tau, a.theta, a.p, a.m_max)?
            } else {
                volume::kill_holonomy(a.tau, a.theta, a.p, a.m_max)?
            };
            let text = format!("m = {}, n = {}: value {:.12} ≤ bound {:.12}", k.m, k.n, k.value, k.bound);
            Ok(Report::new("volume_kill", serde_json::to_value(k).expect("serializable"), text))
        }
        Volume::Collar { beta_abs, order6, parabolic } => {
            if order6 {
                let o = volume::collar_bound_order6(beta_abs, parabolic)?;
                let text = match &o {
                    volume::CollarOutcome::Bound(b) => format!("cosh δ ≥ {b:.12}"),
                    volume::CollarOutcome::Inconclusive(why) => format!("inconclusive — {why}"),
                };
                Ok(Report::new("volume_collar", json!({"beta_abs": beta_abs, "outcome": o}), text))
            } else {
                let b = volume::collar_bound_from_beta(beta_abs)?;
                Ok(Report::new("volume_collar", json!({"beta_abs": beta_abs, "cosh_delta": b}), format!("cosh δ ≥ {b:.12}")))
            }
        }
        Volume::HighTorsion { p } => {
            let (b, t) = volume::volume_bound_high_torsion(p)?;
            let ci = volume::case_i_bound(p)?;
            let text = format!("volume ≥ {b:.12} (balanced at τ = {t:.12}; case (i) at c_p: {ci:.12})");
            Ok(Report::new("volume_high_torsion", json!({"p": p, "bound": b, "balance_tau": t, "case_i": ci}), text))
        }
    }
}
