//! Acceptance run: every criterion of the library corpus, each followed by an
//! independent cross-check against the reference oracles in `common`.
//! Prints one line per criterion and exits nonzero on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use unisheaf::corpus::{criterion_count, run_criterion, Options, DEFAULT_SEED};
use unisheaf::dmod::{builtin_corpus, deligne_chi, irregularity, rat, Point};
use unisheaf::gtop::{sheaf_cohomology, PosetSheaf};
use unisheaf::quniform::{pervin, QUniformity};
use unisheaf::relation::{FiniteSet, Relation};
use unisheaf::topology::FiniteTopology;
use unisheaf::tower::{make_tower, puncture_quotient, Generator};

type Oracle = fn() -> Result<String, String>;

fn is_preorder(n: usize, r: &Pairs) -> bool {
    diagonal(n).is_subset(r) && compose(r, r).is_subset(r)
}

/// Bases on at most three points against the definitional filter check.
fn oracle_bases() -> Result<String, String> {
    let mut checked = 0;
    for n in 1..=3usize {
        let base = FiniteSet::numbered(n);
        let codes = 1u64 << (n * n);
        let mut bases: Vec<Vec<u64>> = (0..codes).map(|c| vec![c]).collect();
        if n == 2 {
            bases.extend((0..codes).flat_map(|a| (0..codes).map(move |b| vec![a, b])));
        }
        for codes in bases {
            let rels: Vec<Relation> = codes.iter().map(|&c| Relation::from_code(&base, c)).collect();
            let pairs: Vec<Pairs> = rels.iter().map(pairs_of).collect();
            let expected = filter_verdict(n, &pairs);
            let report = QUniformity::new(&base, rels, false).and_then(|u| u.check()).map_err(|e| e.to_string())?;
            if report.is_quasi_uniformity != expected.quasi_uniform
                || report.is_uniformity != expected.uniform
                || pairs_of(&report.e_min) != expected.smallest
            {
                return Err(format!("n={n} basis {codes:?}: library and definition disagree"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} bases agree with the definition"))
}

/// Pervin on every topology of at most three points.
fn oracle_pervin() -> Result<String, String> {
    let mut checked = 0;
    for n in 1..=3usize {
        let base = FiniteSet::numbered(n);
        for code in 0..1u64 << (n * n) {
            let r = Relation::from_code(&base, code);
            if !is_preorder(n, &pairs_of(&r)) {
                continue;
            }
            let t = FiniteTopology::from_preorder(&r).map_err(|e| e.to_string())?;
            let os = opens(&t);
            let smallest = pervin_smallest(n, &os);
            let lib = pervin(&t).and_then(|p| p.e_min()).map_err(|e| e.to_string())?;
            if pairs_of(&lib) != smallest || smallest != specialization(n, &os) {
                return Err(format!("n={n} preorder {code}: smallest entourage differs"));
            }
            if induced_opens(n, &smallest) != os.iter().cloned().collect() {
                return Err(format!("n={n} preorder {code}: induced topology differs"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} topologies agree with the definition"))
}

/// Constant-sheaf cohomology of the puncture quotient against the order complex.
fn oracle_circle() -> Result<String, String> {
    for n in 2..=6 {
        let tower = make_tower(Generator::Sectorial, n).map_err(|e| e.to_string())?;
        let q = puncture_quotient(&tower).map_err(|e| e.to_string())?;
        let betti = order_complex_betti(&q);
        let lib = sheaf_cohomology(&PosetSheaf::constant(q, 1).map_err(|e| e.to_string())?);
        if betti != [1, 1] || lib != betti {
            return Err(format!("depth {n}: order complex {betti:?}, library {lib:?}"));
        }
    }
    Ok("order-complex Betti numbers (1, 1) at depths 2..=6".into())
}

fn point(x: At) -> Point {
    match x {
        At::Finite(a) => Point::Finite(rat(a, 1)),
        At::Infinity => Point::Infinity,
    }
}

/// Index and irregularities from Laurent valuations.
fn oracle_index() -> Result<String, String> {
    let corpus = builtin_corpus();
    let cases = operator_cases();
    if corpus.len() != cases.len() {
        return Err(format!("{} corpus entries, {} oracle cases", corpus.len(), cases.len()));
    }
    for case in &cases {
        let entry = corpus.iter().find(|e| e.name == case.name).ok_or(format!("{} missing", case.name))?;
        let spec = entry.spec().map_err(|e| e.to_string())?;
        let chi = euler_characteristic(&case.coeffs, &case.z);
        if chi != case.expected_index || deligne_chi(&spec) != chi {
            return Err(format!(
                "{}: oracle {chi}, library {}, expected {}",
                case.name,
                deligne_chi(&spec),
                case.expected_index
            ));
        }
    }
    Ok(format!("{} operators: Laurent-valuation index matches", cases.len()))
}

fn oracle_irregularity() -> Result<String, String> {
    let corpus = builtin_corpus();
    let mut checked = 0;
    for case in operator_cases() {
        let entry = corpus.iter().find(|e| e.name == case.name).ok_or(format!("{} missing", case.name))?;
        let spec = entry.spec().map_err(|e| e.to_string())?;
        for &x in &case.z {
            let (want, got) = (irregularity_oracle(&case.coeffs, x), irregularity(spec.op(), &point(x)));
            if want != got {
                return Err(format!("{} at {x:?}: oracle {want}, library {got}", case.name));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} irregularities match the Malgrange count"))
}

fn irregularity_oracle(coeffs: &[Laurent], x: At) -> i64 {
    common::irregularity(coeffs, x)
}

fn oracle_for(id: usize) -> Option<Oracle> {
    match id {
        1 => Some(oracle_bases),
        2 => Some(oracle_pervin),
        7 => Some(oracle_circle),
        9 => Some(oracle_index),
        10 => Some(oracle_irregularity),
        _ => None,
    }
}

fn main() -> ExitCode {
    let opts = Options { seed: DEFAULT_SEED, ..Options::default() };
    let mut failures = 0;
    for id in 1..=criterion_count() {
        let (pass, line) = match run_criterion(id, &opts) {
            Ok(r) => {
                let timing = format!("({:.2}s / {}s)", r.elapsed.as_secs_f64(), r.budget.as_secs());
                (
                    r.pass,
                    format!(
                        "criterion {id} {} {}: {} {timing}",
                        if r.pass { "PASS" } else { "FAIL" },
                        r.title,
                        r.detail
                    ),
                )
            }
            Err(e) => (false, format!("criterion {id} FAIL: {e}")),
        };
        println!("{line}");
        if !pass {
            failures += 1;
        }
        if let Some(oracle) = oracle_for(id) {
            let start = Instant::now();
            match oracle() {
                Ok(detail) => println!("criterion {id} oracle PASS: {detail} ({:.2}s)", start.elapsed().as_secs_f64()),
                Err(detail) => {
                    println!("criterion {id} oracle FAIL: {detail}");
                    failures += 1;
                }
            }
        }
    }
    println!("{} criteria, {failures} failures", criterion_count());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
