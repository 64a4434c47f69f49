#![allow(dead_code)]

use std::collections::HashSet;

use privrank::eval::{self, EvalConfig, EvalReport};
use privrank::graph::EntityNetwork;
use privrank::ingest::{CounselSet, DocumentRecord, EntityKey};
use privrank::ranking::{self, RankConfig, ScoreSnapshot, TierAssignment};
use privrank::synth::{self, SynthConfig, SynthCorpus};
use rand::seq::index;
use rand::Rng;

/// Ranks with ties sharing their average position.
pub fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..=j] {
            r[k] = (i + j) as f64 / 2.0;
        }
        i = j + 1;
    }
    r
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    pearson(&ranks(a), &ranks(b))
}

pub fn key(i: usize) -> EntityKey {
    EntityKey::parse(&format!("n{i}@net.test")).unwrap()
}

/// Random corpus over at most 200 entities whose network has at most
/// 2000 links; counsel are a random subset, sometimes empty.
pub fn random_corpus<R: Rng>(rng: &mut R) -> (Vec<DocumentRecord>, CounselSet) {
    let n = rng.random_range(2..=200);
    let link_cap = rng.random_range(1..=2000usize);
    let mut pairs = HashSet::new();
    let mut docs = Vec::new();
    for d in 0..10_000 {
        let sender = rng.random_range(0..n);
        let k = rng.random_range(1..=4.min(n));
        let recips: Vec<usize> = (0..k).map(|_| rng.random_range(0..n)).collect();
        let new: HashSet<_> = recips
            .iter()
            .filter(|&&r| r != sender)
            .map(|&r| (sender, r))
            .filter(|p| !pairs.contains(p))
            .collect();
        if pairs.len() + new.len() > link_cap {
            break;
        }
        pairs.extend(new);
        let split = rng.random_range(0..=recips.len());
        let to = recips[..split].iter().map(|&r| key(r)).collect();
        let cc = recips[split..].iter().map(|&r| key(r)).collect();
        docs.push(DocumentRecord::new(
            format!("D{d}"),
            key(sender),
            to,
            cc,
            vec![],
            Some(rng.random_bool(0.3)),
        ));
    }
    let n_counsel = rng.random_range(0..=n.min(10));
    let counsel = index::sample(rng, n, n_counsel)
        .into_iter()
        .map(key)
        .collect();
    (docs, counsel)
}

pub struct SynthRun {
    pub corpus: SynthCorpus,
    pub network: EntityNetwork,
    pub snapshots: Vec<ScoreSnapshot>,
    pub tiers: TierAssignment,
    pub report: EvalReport,
}

impl SynthRun {
    /// Ground-truth involvement aligned with network entity indices.
    pub fn involvement(&self) -> Vec<f64> {
        let by_key: std::collections::HashMap<_, _> = self
            .corpus
            .truth
            .entities
            .iter()
            .map(|e| (&e.key, e.involvement))
            .collect();
        self.network
            .entities()
            .iter()
            .map(|e| by_key[&e.key])
            .collect()
    }
}

/// Default synthetic corpus for `seed`, ranked for three iterations and
/// evaluated with the given bucket size.
pub fn synth_run(seed: u64, bucket_size: usize) -> SynthRun {
    let corpus = synth::generate_corpus(&SynthConfig {
        seed,
        ..SynthConfig::default()
    })
    .unwrap();
    let network = EntityNetwork::build(&corpus.docs, &corpus.counsel);
    let rank = RankConfig::default();
    let snapshots = ranking::rank_entities(&network, &rank).unwrap();
    let tiers = ranking::assign_tiers(&network, snapshots.last().unwrap(), &rank);
    let config = EvalConfig {
        bucket_size,
        ..EvalConfig::default()
    };
    let report = eval::evaluate(&corpus.docs, &network, &snapshots, &tiers, &config).unwrap();
    SynthRun {
        corpus,
        network,
        snapshots,
        tiers,
        report,
    }
}
