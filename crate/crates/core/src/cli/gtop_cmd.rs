//! `gtop` subcommands on dense pairs (space files with `open` and `dense`
//! lines) and sheaf files.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::Subcommand;

use super::{parse_set, read, CmdResult, InputError};
use crate::gtop::{
    cech_cohomology, check_grothendieck, check_l7, finest_g_covering, parse_sheaf, sheaf_cohomology,
    uniform_g_topology, DensePair, ItemResult, BULLET_NAMES, DEFAULT_FAMILY_CAP,
};
use crate::relation::full_subset;
use crate::spacefile::SpaceFile;

#[derive(Subcommand, Debug)]
pub(super) enum GtopCmd {
    /// Largest open of the completion whose trace is the given open of X.
    Ucheck {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// The seven items of the Ǔ-calculus.
    L7 {
        file: PathBuf,
        /// Largest family size checked for item 5.
        #[arg(long, default_value_t = DEFAULT_FAMILY_CAP)]
        cap: usize,
    },
    /// Grothendieck-topology bullets for the uniform G-topology.
    Groth {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FAMILY_CAP)]
        cap: usize,
    },
    /// Cohomology of a sheaf on a finite space.
    Cohomology { sheaf: PathBuf },
    /// Čech cohomology over the finest G-covering of X.
    Cech { file: PathBuf, sheaf: PathBuf },
}

fn load(path: &Path) -> Result<(SpaceFile, DensePair), InputError> {
    let f = SpaceFile::parse(&read(path)?)?;
    let t = f.topology()?;
    let x = f.dense.clone().unwrap_or_else(|| full_subset(f.base.size()));
    let d = DensePair::new(t, x)?;
    Ok((f, d))
}

fn verdict(r: &ItemResult) -> String {
    match (r.holds, r.informational, &r.witness) {
        (true, _, _) => "pass".into(),
        (false, true, _) => "fail(expected)".into(),
        (false, false, Some(w)) => format!("fail witness={w}"),
        (false, false, None) => "fail".into(),
    }
}

fn dims(v: &[usize]) -> String {
    let s: Vec<String> = v.iter().map(ToString::to_string).collect();
    s.join(" ")
}

pub(super) fn run(cmd: GtopCmd, out: &mut String) -> CmdResult {
    match cmd {
        GtopCmd::Ucheck { file, set } => {
            let (f, d) = load(&file)?;
            let u = parse_set(&f.base, &set)?;
            let _ = writeln!(out, "ucheck={}", f.base.format_subset(&d.u_check(&u)?));
            Ok(true)
        }
        GtopCmd::L7 { file, cap } => {
            let (_, d) = load(&file)?;
            let r = check_l7(&d, cap);
            for (k, item) in r.items.iter().enumerate() {
                let _ = writeln!(out, "item{}={}", k + 1, verdict(item));
            }
            Ok(r.required_hold())
        }
        GtopCmd::Groth { file, cap } => {
            let (_, d) = load(&file)?;
            let g = uniform_g_topology(&d, cap);
            let opens = g.opens();
            let total: usize = opens.iter().map(|u| g.coverings_of(u).len()).sum();
            let _ = writeln!(out, "opens={}", opens.len());
            let _ = writeln!(out, "coverings={total}");
            let r = check_grothendieck(&g);
            for (name, b) in BULLET_NAMES.iter().zip(&r.bullets) {
                let _ = writeln!(out, "{name}={}", verdict(b));
            }
            Ok(r.holds())
        }
        GtopCmd::Cohomology { sheaf } => {
            let (_, s) = parse_sheaf(&read(&sheaf)?)?;
            let _ = writeln!(out, "dims={}", dims(&sheaf_cohomology(&s)));
            Ok(true)
        }
        GtopCmd::Cech { file, sheaf } => {
            let (f, d) = load(&file)?;
            let (_, s) = parse_sheaf(&read(&sheaf)?)?;
            let s = s.reindex(d.xhat())?;
            let c = finest_g_covering(&d);
            let members: Vec<String> = c.iter().map(|m| f.base.format_subset(m)).collect();
            let _ = writeln!(out, "covering={}", members.join(" "));
            let _ = writeln!(out, "cech={}", dims(&cech_cohomology(&d, &s, &c)?));
            let _ = writeln!(out, "sheaf={}", dims(&sheaf_cohomology(&s)));
            Ok(true)
        }
    }
}
