//! `dmod` subcommands on operator files.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::Subcommand;

use super::{read, CmdResult, InputError};
use crate::dmod::{
    deligne_chi, derham_oracle, index_report, irregularity, newton_polygon, parse_operator_file, parse_point,
    to_delta_form, ConnectionSpec, Point, DEFAULT_DMAX,
};

#[derive(Subcommand, Debug)]
pub(super) enum DmodCmd {
    /// δ-form coefficients and their valuations.
    Delta {
        file: PathBuf,
        /// A point of ℙ¹ (`0`, `1/2`, `inf`); defaults to every point of Z.
        #[arg(long)]
        at: Option<String>,
    },
    /// Newton polygon of the δ-form.
    Polygon {
        file: PathBuf,
        #[arg(long)]
        at: Option<String>,
    },
    /// Irregularity at a point.
    Irregularity {
        file: PathBuf,
        #[arg(long)]
        at: Option<String>,
    },
    /// Index predicted by the Deligne formula.
    Chi { file: PathBuf },
    /// Truncated De Rham oracle on windows d, d+5, d+10.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    /// Formula against oracle, growing the window up to `--dmax`.
    Report {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DMAX)]
        dmax: usize,
    },
}

fn load(path: &Path) -> Result<ConnectionSpec, InputError> {
    Ok(parse_operator_file(&read(path)?)?.1)
}

fn points(s: &ConnectionSpec, at: Option<&str>) -> Result<Vec<Point>, InputError> {
    match at {
        Some(text) => Ok(vec![parse_point(text, 1, 1)?]),
        None => Ok(s.singular().to_vec()),
    }
}

fn pairs(v: &[(usize, i64)]) -> String {
    let s: Vec<String> = v.iter().map(|(i, h)| format!("({i},{h})")).collect();
    s.join(" ")
}

pub(super) fn run(cmd: DmodCmd, out: &mut String) -> CmdResult {
    match cmd {
        DmodCmd::Delta { file, at } => {
            let s = load(&file)?;
            for x in points(&s, at.as_deref())? {
                let d = to_delta_form(s.op(), &x);
                for (j, (b, v)) in d.coeffs.iter().zip(&d.valuations).enumerate() {
                    let v = v.map_or("none".to_string(), |v| v.to_string());
                    let _ = writeln!(out, "delta[{x}] b{j}={b} v={v}");
                }
            }
            Ok(true)
        }
        DmodCmd::Polygon { file, at } => {
            let s = load(&file)?;
            for x in points(&s, at.as_deref())? {
                let p = newton_polygon(s.op(), &x);
                let slopes: Vec<String> = p.slopes.iter().map(|(m, len)| format!("{m}x{len}")).collect();
                let _ = writeln!(out, "polygon[{x}] points={}", pairs(&p.points));
                let _ = writeln!(out, "polygon[{x}] hull={}", pairs(&p.hull));
                let _ = writeln!(out, "polygon[{x}] slopes={}", slopes.join(" "));
                let _ = writeln!(out, "polygon[{x}] rise={}", p.rise());
            }
            Ok(true)
        }
        DmodCmd::Irregularity { file, at } => {
            let s = load(&file)?;
            for x in points(&s, at.as_deref())? {
                let _ = writeln!(out, "ir[{x}]={}", irregularity(s.op(), &x));
            }
            Ok(true)
        }
        DmodCmd::Chi { file } => {
            let s = load(&file)?;
            let _ = writeln!(out, "chi={}", deligne_chi(&s));
            Ok(true)
        }
        DmodCmd::Oracle { file, depth } => {
            let s = load(&file)?;
            let r = derham_oracle(&s, depth)?;
            for (d, h0, h1) in &r.windows {
                let _ = writeln!(out, "window {d} h0={h0} h1={h1}");
            }
            let _ = writeln!(out, "h0={}\nh1={}\nindex={}", r.h0, r.h1, r.index());
            let _ = writeln!(out, "stabilized={}", r.stabilized);
            Ok(r.stabilized)
        }
        DmodCmd::Report { file, dmax } => {
            let s = load(&file)?;
            let r = index_report(&s, dmax)?;
            for line in r.lines() {
                let _ = writeln!(out, "{line}");
            }
            Ok(r.agree())
        }
    }
}
