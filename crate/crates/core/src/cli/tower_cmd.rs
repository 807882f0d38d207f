//! `tower` subcommands.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::Subcommand;

use super::{read, CmdResult, InputError};
use crate::gtop::{sheaf_cohomology, PosetSheaf};
use crate::tower::{
    self, parse_cover_file, parse_tower_file, quarter_sectors, ContinuityOutcome, CoveringTower, Generator, Region,
    ThreadTag, TowerMap,
};

#[derive(Subcommand, Debug)]
pub(super) enum TowerCmd {
    /// Build the tower and verify its star-refinement certificate.
    Build {
        file: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Thread classes at the deepest level.
    Threads {
        file: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
        /// Print one record per class.
        #[arg(long)]
        records: bool,
        /// Also report the puncture quotient and its constant-sheaf cohomology.
        #[arg(long)]
        quotient: bool,
    },
    /// Whether a block-union covering is uniform.
    UniformCover {
        file: PathBuf,
        /// Cover file; defaults to quarter sectors or level-1 residue disks.
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Least depth at which every block lies in a member of the covering.
    Tukey {
        file: PathBuf,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Depth table for a map between towers.
    Continuity {
        source: PathBuf,
        target: PathBuf,
        /// `identity`, `sec-to-met` or `met-to-sec`.
        #[arg(long)]
        map: String,
    },
    /// Precompactness and canonical boundedness of a block-union subset.
    Bornology {
        file: PathBuf,
        /// Region in cover-file syntax, e.g. `disk 1/2`.
        #[arg(long)]
        region: String,
        #[arg(long)]
        depth: Option<usize>,
    },
}

fn load(path: &Path, depth: Option<usize>) -> Result<CoveringTower, InputError> {
    let mut spec = parse_tower_file(&read(path)?)?;
    if let Some(d) = depth {
        spec.depth = d;
    }
    Ok(spec.build()?)
}

fn default_cover(t: &CoveringTower) -> Vec<Region> {
    match t.generator() {
        Generator::Metric | Generator::Sectorial => quarter_sectors(),
        Generator::Padic(p) | Generator::Formal(p) => {
            (0..*p).map(|value| Region::Residue { value, level: 1 }).collect()
        }
        Generator::Finite(u) => (0..u.base().size()).map(|x| Region::Points(vec![x])).collect(),
    }
}

fn cover(t: &CoveringTower, path: Option<&Path>) -> Result<Vec<Region>, InputError> {
    match path {
        Some(p) => Ok(parse_cover_file(&read(p)?)?),
        None => Ok(default_cover(t)),
    }
}

pub(super) fn run(cmd: TowerCmd, out: &mut String) -> CmdResult {
    match cmd {
        TowerCmd::Build { file, depth } => {
            let t = load(&file, depth)?;
            let _ = writeln!(out, "generator={}", t.generator().name());
            let _ = writeln!(out, "depth={}", t.depth());
            for k in 0..=t.depth() {
                let _ = writeln!(out, "level {k} blocks={}", t.level_size(k));
            }
            let c = t.star_certificate();
            let _ = writeln!(out, "star_stride={}", c.stride);
            for (level, n) in &c.checked {
                let _ = writeln!(out, "checked level={level} blocks={n}");
            }
            for (level, b) in &c.failures {
                let _ = writeln!(out, "star_failure level={level} block={b}");
            }
            for (level, b) in &c.parent_failures {
                let _ = writeln!(out, "parent_failure level={level} block={b}");
            }
            let _ = writeln!(out, "verified={}", c.verified());
            Ok(c.verified())
        }
        TowerCmd::Threads { file, depth, records, quotient } => {
            let t = load(&file, depth)?;
            let e = tower::enumerate_threads(&t);
            let _ = writeln!(out, "classes={}", e.classes.len());
            for tag in
                [ThreadTag::Interior, ThreadTag::Puncture, ThreadTag::Tangential, ThreadTag::End, ThreadTag::Branch]
            {
                let _ = writeln!(out, "{tag}={}", e.count(tag));
            }
            for u in &e.unrepresentable {
                let _ = writeln!(out, "unrepresentable={u}");
            }
            if records {
                for r in e.records(&t) {
                    let _ = writeln!(out, "thread {r}");
                }
            }
            if quotient {
                let q = tower::puncture_quotient(&t)?;
                let dims = sheaf_cohomology(&PosetSheaf::constant(q.clone(), 1)?);
                let _ = writeln!(out, "quotient_points={}", q.size());
                let dims: Vec<String> = dims.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "quotient_cohomology={}", dims.join(" "));
            }
            Ok(true)
        }
        TowerCmd::UniformCover { file, cover: c, depth } => {
            let t = load(&file, depth)?;
            let members = cover(&t, c.as_deref())?;
            let v = tower::is_uniform_covering(&t, &members)?;
            let _ = writeln!(out, "uniform={}", v.holds);
            if let Some(w) = &v.witness {
                let _ = writeln!(out, "witness={}", w.record(&t));
            }
            if v.holds {
                let idx: Vec<String> = v.subcover.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "subcover={}", idx.join(","));
            }
            Ok(v.holds)
        }
        TowerCmd::Tukey { file, cover: c, depth } => {
            let t = load(&file, depth)?;
            let members = cover(&t, c.as_deref())?;
            match tower::is_tukey_at_depth(&t, &members)? {
                Some(k) => {
                    let _ = writeln!(out, "tukey=true\nlevel={k}");
                    Ok(true)
                }
                None => {
                    let _ = writeln!(out, "tukey=false\nsearched={}", t.depth());
                    Ok(false)
                }
            }
        }
        TowerCmd::Continuity { source, target, map } => {
            let map = TowerMap::from_name(&map)?;
            let (s, t) = (load(&source, None)?, load(&target, None)?);
            let r = tower::check_uniform_continuity(map, &s, &t)?;
            let _ = writeln!(out, "map={}", r.map.name());
            for e in &r.entries {
                let cell = match &e.outcome {
                    ContinuityOutcome::Level(n) => format!("level={n}"),
                    ContinuityOutcome::Fail { level, block } => format!("fail level={level} block={block}"),
                    ContinuityOutcome::Unresolved { searched } => format!("unresolved searched={searched}"),
                };
                let _ = writeln!(out, "target {} {cell}", e.target);
            }
            let verdict = r.verdict();
            let _ = writeln!(out, "continuous={}", verdict.map_or("unresolved".to_string(), |v| v.to_string()));
            Ok(verdict == Some(true))
        }
        TowerCmd::Bornology { file, region, depth } => {
            let t = load(&file, depth)?;
            let regions = parse_cover_file(&region)?;
            let [region] = regions.as_slice() else {
                return Err(InputError::new("--region must name exactly one region"));
            };
            let b = tower::bornology_at_depth(&t, region)?;
            let _ = writeln!(out, "precompact={}", b.precompact);
            for (k, n) in &b.counts {
                let _ = writeln!(out, "level {k} blocks={n}");
            }
            let _ = writeln!(out, "canonically_bounded={}", b.canonically_bounded);
            let z: Vec<String> = b.z.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "z_level={}", b.z_level);
            let _ = writeln!(out, "z={}", z.join(" "));
            let _ = writeln!(out, "n={}", b.n);
            Ok(true)
        }
    }
}
