//! Seeded synthetic corpora with planted privileged structure.
//!
//! Entities fall into three roles: counsel, legal-adjacent staff and general
//! staff. Every non-counsel entity gets a latent legal propensity (mid-range
//! for legal-adjacent staff, near zero otherwise; counsel have 1) and a small
//! personal contact list. Each contact comes from the legal cluster with
//! probability `legal_affinity * propensity` and by activity weight
//! otherwise. An entity's ground-truth legal involvement is the legal share
//! of its contacts (counsel count 1, legal-adjacent staff 1/2); counsel have
//! involvement 1.
//!
//! A document's sender is drawn by activity weight; each of its 1–5
//! recipients is a uniform pick from the sender's contacts, or with
//! probability `contact_noise` an activity-weighted pick from everyone. The
//! document is privileged with probability
//! `min(1, base_priv_rate * (1 + adjacency_priv_boost * m))` where `m` is the
//! largest involvement among its endpoints. Labels depend only on the
//! planted structure, never on ranking output.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{self, CounselSet, DocumentRecord, EntityKey};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_entities: usize,
    pub counsel_fraction: f64,
    pub adjacent_fraction: f64,
    pub n_docs: usize,
    pub legal_affinity: f64,
    pub base_priv_rate: f64,
    pub adjacency_priv_boost: f64,
    pub hub_fraction: f64,
    pub hub_activity: f64,
    pub min_contacts: usize,
    pub max_contacts: usize,
    /// Probability that a recipient is drawn from everyone instead of the
    /// sender's contacts.
    pub contact_noise: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            n_entities: 5_000,
            counsel_fraction: 0.05,
            adjacent_fraction: 0.15,
            n_docs: 50_000,
            legal_affinity: 0.9,
            base_priv_rate: 0.2,
            adjacency_priv_boost: 3.0,
            hub_fraction: 0.005,
            hub_activity: 20.0,
            min_contacts: 3,
            max_contacts: 10,
            contact_noise: 0.05,
        }
    }
}

/// Propensity range for legal-adjacent staff.
const ADJACENT_PROPENSITY: (f64, f64) = (0.3, 0.9);
/// Propensity range for general staff.
const GENERAL_PROPENSITY: (f64, f64) = (0.0, 0.1);
pub const MAX_RECIPIENTS: usize = 5;

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_owned()));
        for (name, v) in [
            ("counsel_fraction", self.counsel_fraction),
            ("adjacent_fraction", self.adjacent_fraction),
            ("legal_affinity", self.legal_affinity),
            ("base_priv_rate", self.base_priv_rate),
            ("hub_fraction", self.hub_fraction),
            ("contact_noise", self.contact_noise),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        if self.n_entities < 2 {
            return bad("n_entities must be at least 2");
        }
        if self.n_docs < 1 {
            return bad("n_docs must be at least 1");
        }
        if !(self.adjacency_priv_boost >= 0.0 && self.hub_activity >= 1.0) {
            return bad("adjacency_priv_boost must be >= 0 and hub_activity >= 1");
        }
        if self.min_contacts < 1 || self.min_contacts > self.max_contacts {
            return bad("contact range must satisfy 1 <= min_contacts <= max_contacts");
        }
        if self.counsel_fraction == 0.0 {
            return Err(Error::NoCounsel);
        }
        if self.n_counsel() + self.n_adjacent() > self.n_entities {
            return bad("counsel and legal-adjacent fractions exceed the population");
        }
        Ok(())
    }

    /// `floor(counsel_fraction * n_entities)`, at least one.
    pub fn n_counsel(&self) -> usize {
        ((self.counsel_fraction * self.n_entities as f64).floor() as usize).max(1)
    }

    pub fn n_adjacent(&self) -> usize {
        (self.adjacent_fraction * self.n_entities as f64).floor() as usize
    }

    pub fn n_hubs(&self) -> usize {
        if self.hub_fraction == 0.0 {
            0
        } else {
            ((self.hub_fraction * self.n_entities as f64).round() as usize).max(1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Counsel,
    LegalAdjacent,
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthEntity {
    pub key: EntityKey,
    pub role: Role,
    pub propensity: f64,
    /// Ground-truth legal involvement in [0, 1].
    pub involvement: f64,
    /// Relative weight as sender and as noise recipient.
    pub activity: f64,
    /// Indices into [`GroundTruth::entities`].
    pub contacts: Vec<usize>,
}

/// Everything needed to recompute the generator's expectations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub config: SynthConfig,
    pub entities: Vec<TruthEntity>,
}

impl GroundTruth {
    pub fn involvement_of(&self, key: &EntityKey) -> Option<f64> {
        self.entities
            .iter()
            .find(|e| &e.key == key)
            .map(|e| e.involvement)
    }
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub docs: Vec<DocumentRecord>,
    pub counsel: CounselSet,
    pub truth: GroundTruth,
}

pub fn entity_key(index: usize) -> EntityKey {
    EntityKey::from_normalized(format!("u{index:06}@corp.example"))
}

pub fn generate_corpus(config: &SynthConfig) -> Result<SynthCorpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n_entities;

    // role assignment by random permutation so key order carries no signal
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut roles = vec![Role::General; n];
    let (n_counsel, n_adjacent) = (config.n_counsel(), config.n_adjacent());
    for &i in &order[..n_counsel] {
        roles[i] = Role::Counsel;
    }
    for &i in &order[n_counsel..n_counsel + n_adjacent] {
        roles[i] = Role::LegalAdjacent;
    }
    let propensity: Vec<f64> = roles
        .iter()
        .map(|role| match role {
            Role::Counsel => 1.0,
            Role::LegalAdjacent => rng.random_range(ADJACENT_PROPENSITY.0..ADJACENT_PROPENSITY.1),
            Role::General => rng.random_range(GENERAL_PROPENSITY.0..GENERAL_PROPENSITY.1),
        })
        .collect();
    let mut activity = vec![1.0; n];
    let mut hub_order: Vec<usize> = (0..n).collect();
    hub_order.shuffle(&mut rng);
    for &h in &hub_order[..config.n_hubs()] {
        activity[h] = config.hub_activity;
    }

    let counsel_idx: Vec<usize> = (0..n).filter(|&i| roles[i] == Role::Counsel).collect();
    let adjacent_idx: Vec<usize> = (0..n)
        .filter(|&i| roles[i] == Role::LegalAdjacent)
        .collect();
    let by_activity = WeightedIndex::new(&activity).expect("positive activity weights");

    let contacts: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            let want = rng
                .random_range(config.min_contacts..=config.max_contacts)
                .min(n - 1);
            let legal_p = config.legal_affinity * propensity[s];
            let mut list = Vec::with_capacity(want);
            let mut attempts = 0;
            while list.len() < want && attempts < 20 * want {
                attempts += 1;
                let c = if rng.random_bool(legal_p) {
                    pick_legal(&mut rng, &counsel_idx, &adjacent_idx)
                } else {
                    by_activity.sample(&mut rng)
                };
                if c != s && !list.contains(&c) {
                    list.push(c);
                }
            }
            list
        })
        .collect();
    let involvement: Vec<f64> = (0..n)
        .map(|s| match roles[s] {
            Role::Counsel => 1.0,
            _ if contacts[s].is_empty() => 0.0,
            _ => {
                let legal: f64 = contacts[s]
                    .iter()
                    .map(|&c| match roles[c] {
                        Role::Counsel => 1.0,
                        Role::LegalAdjacent => 0.5,
                        Role::General => 0.0,
                    })
                    .sum();
                legal / contacts[s].len() as f64
            }
        })
        .collect();

    let keys: Vec<EntityKey> = (0..n).map(entity_key).collect();
    let mut docs = Vec::with_capacity(config.n_docs);
    for d in 0..config.n_docs {
        let sender = by_activity.sample(&mut rng);
        let k = rng.random_range(1..=MAX_RECIPIENTS);
        let own = &contacts[sender];
        let mut recipients = Vec::with_capacity(k);
        for _ in 0..k {
            let r = if own.is_empty() || rng.random_bool(config.contact_noise) {
                by_activity.sample(&mut rng)
            } else {
                own[rng.random_range(0..own.len())]
            };
            recipients.push(r);
        }
        let strongest = recipients
            .iter()
            .map(|&r| involvement[r])
            .fold(involvement[sender], f64::max);
        let privileged = rng.random_bool(privilege_probability(config, strongest));

        let (mut to, mut cc, mut bcc) = (Vec::new(), Vec::new(), Vec::new());
        let mut seen = Vec::with_capacity(k);
        for (j, &r) in recipients.iter().enumerate() {
            let slot: f64 = rng.random();
            if seen.contains(&r) {
                continue;
            }
            seen.push(r);
            let list = if j == 0 || slot < 0.6 {
                &mut to
            } else if slot < 0.9 {
                &mut cc
            } else {
                &mut bcc
            };
            list.push(keys[r].clone());
        }
        docs.push(DocumentRecord::new(
            format!("DOC{d:07}"),
            keys[sender].clone(),
            to,
            cc,
            bcc,
            Some(privileged),
        ));
    }

    let counsel = counsel_idx.iter().map(|&i| keys[i].clone()).collect();
    let entities = contacts
        .into_iter()
        .enumerate()
        .map(|(i, contacts)| TruthEntity {
            key: keys[i].clone(),
            role: roles[i],
            propensity: propensity[i],
            involvement: involvement[i],
            activity: activity[i],
            contacts,
        })
        .collect();
    Ok(SynthCorpus {
        docs,
        counsel,
        truth: GroundTruth {
            config: *config,
            entities,
        },
    })
}

/// Legal-cluster pick: counsel or legal-adjacent staff with equal odds.
fn pick_legal(rng: &mut ChaCha8Rng, counsel: &[usize], adjacent: &[usize]) -> usize {
    let pool = if adjacent.is_empty() || rng.random_bool(0.5) {
        counsel
    } else {
        adjacent
    };
    pool[rng.random_range(0..pool.len())]
}

/// Privilege probability for a document whose strongest endpoint has
/// involvement `strongest`.
pub fn privilege_probability(config: &SynthConfig, strongest: f64) -> f64 {
    (config.base_priv_rate * (1.0 + config.adjacency_priv_boost * strongest)).clamp(0.0, 1.0)
}

/// Writes `corpus.csv`, `counsel.txt` and `ground_truth.json` into `dir`.
pub fn write_corpus(corpus: &SynthCorpus, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let create = |name: &str| {
        let path = dir.join(name);
        File::create(&path)
            .map(BufWriter::new)
            .map_err(|e| Error::io(path, e))
    };
    let mut w = create("corpus.csv")?;
    ingest::write_csv(&corpus.docs, &mut w)?;
    w.flush()?;
    let mut w = create("counsel.txt")?;
    ingest::write_counsel_list(&corpus.counsel, &mut w)?;
    w.flush()?;
    let mut w = create("ground_truth.json")?;
    serde_json::to_writer(&mut w, &corpus.truth)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
