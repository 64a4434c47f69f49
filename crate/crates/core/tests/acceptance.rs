//! Acceptance checks, one line per criterion. Runs sequentially without the
//! libtest harness so the timing checks are not disturbed by other tests.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use privrank::graph::EntityNetwork;
use privrank::ingest::{self, CounselSet, DocumentRecord, EntityKey, InputFormat};
use privrank::ranking::{self, RankConfig, Tier};
use privrank::synth::{self, SynthConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEEDS: [u64; 5] = [0, 1, 2, 3, 4];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn random_networks() -> Vec<EntityNetwork> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    (0..100)
        .map(|_| {
            let (docs, counsel) = common::random_corpus(&mut rng);
            EntityNetwork::build(&docs, &counsel)
        })
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let networks = random_networks();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut max_links = 0;
    for net in &networks {
        assert!(net.len() <= 200 && net.links().len() <= 2000);
        max_links = max_links.max(net.links().len());
        for max_iterations in 1..=3 {
            let cfg = RankConfig {
                max_iterations,
                ..RankConfig::default()
            };
            let fast = ranking::rank_entities(net, &cfg).unwrap();
            let slow = ranking::reference_rank(net, &cfg).unwrap();
            assert_eq!(fast.len(), max_iterations + 1);
            for (a, b) in fast.iter().zip(&slow) {
                for (x, y) in a.scores.iter().zip(&b.scores) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-12 && elapsed < Duration::from_secs(10),
        format!("max |diff| {worst:e} over 100 networks (up to {max_links} links), {elapsed:.2?}"),
    )
}

fn path_fixture() -> Outcome {
    let k = |s: &str| EntityKey::parse(s).unwrap();
    let docs = vec![
        DocumentRecord::new(
            "1",
            k("a@x.test"),
            vec![k("b@x.test")],
            vec![],
            vec![],
            None,
        ),
        DocumentRecord::new(
            "2",
            k("b@x.test"),
            vec![k("c@x.test")],
            vec![],
            vec![],
            None,
        ),
    ];
    let counsel: CounselSet = [k("a@x.test")].into_iter().collect();
    let net = EntityNetwork::build(&docs, &counsel);
    let cfg = RankConfig {
        max_iterations: 1,
        ..RankConfig::default()
    };
    let snaps = ranking::rank_entities(&net, &cfg).unwrap();
    let got: Vec<f64> = ["a@x.test", "b@x.test", "c@x.test"]
        .iter()
        .map(|s| snaps[1].scores[net.index_of(&k(s)).unwrap()])
        .collect();
    let want = [0.3, 0.07, 0.0];
    let ok = got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 1e-15);
    outcome(ok, format!("A, B, C = {got:?}"))
}

fn boundedness() -> Outcome {
    let cfg = RankConfig {
        max_iterations: 10,
        ..RankConfig::default()
    };
    let mut failures = 0;
    for net in &random_networks() {
        let snaps = ranking::rank_entities(net, &cfg).unwrap();
        let bounded = snaps
            .iter()
            .all(|s| s.scores.iter().all(|&x| (0.0..=1.0).contains(&x)));
        let grows = snaps.windows(2).all(|w| {
            w[0].scores
                .iter()
                .zip(&w[1].scores)
                .all(|(&a, &b)| a == 0.0 || b != 0.0)
        });
        if !(bounded && grows) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{failures} of 100 networks violate bounds or support growth over 10 iterations"),
    )
}

fn read_outputs(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().unwrap() != "manifest.json" {
                let rel = path
                    .strip_prefix(dir)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                files.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    files
}

fn pipeline(out: &Path, extra: &[&str]) -> i32 {
    let mut args = vec!["privrank", "pipeline", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    privrank::cli::run(args)
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let (one, eight) = (tmp.path().join("t1"), tmp.path().join("t8"));
    let a = pipeline(&one, &["--seed", "7", "--threads", "1"]);
    let b = pipeline(&eight, &["--seed", "7", "--threads", "8"]);
    if a != 0 || b != 0 {
        return outcome(false, format!("pipeline exit codes {a}, {b}"));
    }
    let (x, y) = (read_outputs(&one), read_outputs(&eight));
    let differing: Vec<&String> = x.keys().filter(|k| x.get(*k) != y.get(*k)).collect();
    let ok = x.len() == y.len() && differing.is_empty() && x.contains_key("scores_iter3.csv");
    outcome(
        ok,
        format!("{} files compared, differing: {differing:?}", x.len()),
    )
}

fn curve_shape(runs: &[common::SynthRun]) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for run in runs {
        let curves = run.report.curves.iter().find(|c| c.iteration == 3).unwrap();
        let rho = |rows: &[privrank::eval::BucketRow]| {
            let s: Vec<f64> = rows.iter().map(|r| r.mean_score).collect();
            let p: Vec<f64> = rows.iter().map(|r| r.mean_precision).collect();
            common::spearman(&s, &p)
        };
        let (e, l) = (rho(&curves.entity_buckets), rho(&curves.link_buckets));
        ok &= e >= 0.5 && l >= 0.5;
        detail.push(format!("{e:.3}/{l:.3}"));
    }
    outcome(
        ok,
        format!(
            "entity/link bucket Spearman per seed: {}",
            detail.join(", ")
        ),
    )
}

fn table_shape(runs: &[common::SynthRun]) -> Outcome {
    let mut below_base = 0;
    let mut top_involves_p1 = 0;
    let mut detail = Vec::new();
    for run in runs {
        let rows = &run.report.categories;
        let nn = rows
            .iter()
            .find(|r| {
                r.category.sender == Tier::LikelyNonPriv
                    && r.category.receiver == Tier::LikelyNonPriv
            })
            .unwrap();
        let nn_precision = nn.precision.unwrap_or(f64::NAN);
        if nn_precision < run.report.base_rate {
            below_base += 1;
        }
        let best = rows
            .iter()
            .filter(|r| r.precision.is_some())
            .max_by(|a, b| a.precision.unwrap().total_cmp(&b.precision.unwrap()))
            .unwrap();
        if best.category.involves(Tier::LikelyPriv1) {
            top_involves_p1 += 1;
        }
        detail.push(format!(
            "NN {:.3} vs base {:.3}, top {} {:.3} (n={})",
            nn_precision,
            run.report.base_rate,
            best.category,
            best.precision.unwrap(),
            best.n_docs
        ));
    }
    outcome(
        below_base >= 4 && top_involves_p1 >= 4,
        format!(
            "NN below base {below_base}/5, top involves LikelyPriv1 {top_involves_p1}/5 [{}]",
            detail.join("; ")
        ),
    )
}

fn scale() -> Outcome {
    let config = SynthConfig {
        seed: 11,
        n_entities: 100_000,
        n_docs: 560_000,
        min_contacts: 10,
        max_contacts: 30,
        ..SynthConfig::default()
    };
    let corpus = synth::generate_corpus(&config).unwrap();
    let net = EntityNetwork::build(&corpus.docs, &corpus.counsel);
    let start = Instant::now();
    ranking::rank_entities(&net, &RankConfig::default()).unwrap();
    let rank_time = start.elapsed();

    let tmp = tempfile::tempdir().unwrap();
    let corpus_dir = tmp.path().join("corpus");
    synth::write_corpus(&corpus, &corpus_dir).unwrap();
    let (csv, counsel) = (
        corpus_dir.join("corpus.csv"),
        corpus_dir.join("counsel.txt"),
    );
    let start = Instant::now();
    let code = pipeline(
        &tmp.path().join("out"),
        &[
            "--input",
            csv.to_str().unwrap(),
            "--counsel-list",
            counsel.to_str().unwrap(),
        ],
    );
    let pipeline_time = start.elapsed();
    outcome(
        net.len() == 100_000
            && net.links().len() >= 1_000_000
            && rank_time < Duration::from_secs(5)
            && code == 0
            && pipeline_time < Duration::from_secs(60),
        format!(
            "{} entities, {} links; rank {rank_time:.2?}, pipeline {pipeline_time:.2?} on {} threads",
            net.len(),
            net.links().len(),
            rayon::current_num_threads()
        ),
    )
}

fn ingest_formats() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let counsel = ingest::load_counsel_file(&dir.join("counsel.txt")).unwrap();
    let parse = |path: &str, format| {
        ingest::parse_metadata(&dir.join(path), format, Default::default()).unwrap()
    };
    let outcomes = [
        parse("eml", InputFormat::Eml),
        parse("messages.mbox", InputFormat::Mbox),
        parse("messages.csv", InputFormat::Csv),
    ];
    let exports: Vec<String> = outcomes
        .iter()
        .map(|o| {
            serde_json::to_string(&EntityNetwork::build(&o.records, &counsel).to_export()).unwrap()
        })
        .collect();
    let same_network = exports.iter().all(|e| e == &exports[0]);
    let same_records = outcomes.iter().all(|o| o.records == outcomes[0].records);
    let skips: Vec<usize> = outcomes.iter().map(|o| o.skipped.len()).collect();
    let inputs: Vec<usize> = outcomes.iter().map(|o| o.input_count()).collect();
    let net = EntityNetwork::build(&outcomes[0].records, &counsel);
    outcome(
        same_network && same_records && skips == [1, 1, 1] && inputs == [50, 50, 50],
        format!(
            "inputs {inputs:?}, skipped {skips:?}, identical networks {same_network} ({} entities, {} links, {} counsel)",
            net.len(),
            net.links().len(),
            net.counsel_count()
        ),
    )
}

fn main() {
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "oracle equivalence", oracle_equivalence()),
        (2, "path fixture", path_fixture()),
        (3, "boundedness and support growth", boundedness()),
        (4, "thread-count determinism", determinism()),
    ];
    let runs: Vec<_> = SEEDS.iter().map(|&s| common::synth_run(s, 100)).collect();
    results.push((5, "bucket curve shape", curve_shape(&runs)));
    results.push((6, "category table shape", table_shape(&runs)));
    drop(runs);
    results.push((7, "scale", scale()));
    results.push((8, "ingest across formats", ingest_formats()));

    let mut failed = 0;
    for (n, name, o) in &results {
        println!(
            "criterion {n} {name}: {} - {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
