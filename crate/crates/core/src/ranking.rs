//! Counsel-proximity entity ranking.
//!
//! Counsel start at score 1 and everyone else at 0. Each iteration, every
//! entity's score becomes
//!
//! ```text
//! self_weight * previous + neighbor_weight * neighbor_sum / max(degree_floor, degree)
//! ```
//!
//! where `neighbor_sum` adds the previous-iteration score of the opposite
//! endpoint of each distinct incident link (direction ignored) and `degree`
//! is the number of those links. Updates are synchronous: every entity reads
//! only previous-iteration scores.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EntityNetwork, Link};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankConfig {
    pub max_iterations: usize,
    pub self_weight: f64,
    pub neighbor_weight: f64,
    pub degree_floor: usize,
    /// Reset counsel scores to 1 after every iteration.
    pub pin_counsel: bool,
    /// Minimum score for a non-counsel entity to enter a LikelyPriv tier.
    pub tier_threshold: f64,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            max_iterations: 3,
            self_weight: 0.3,
            neighbor_weight: 0.7,
            degree_floor: 10,
            pin_counsel: false,
            tier_threshold: 0.1,
        }
    }
}

impl RankConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.self_weight >= 0.0 && self.neighbor_weight >= 0.0) {
            return bad(format!(
                "weights must be non-negative (self {}, neighbor {})",
                self.self_weight, self.neighbor_weight
            ));
        }
        if (self.self_weight + self.neighbor_weight - 1.0).abs() > 1e-9 {
            return bad(format!(
                "self_weight + neighbor_weight must equal 1 (got {})",
                self.self_weight + self.neighbor_weight
            ));
        }
        if self.degree_floor < 1 {
            return bad("degree_floor must be at least 1".into());
        }
        if !self.tier_threshold.is_finite() {
            return bad("tier_threshold must be finite".into());
        }
        Ok(())
    }
}

/// Scores of every entity after `iteration` sweeps, aligned with the
/// network's entity indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSnapshot {
    pub iteration: usize,
    pub scores: Vec<f64>,
}

impl ScoreSnapshot {
    /// Counsel at 1, everyone else at 0.
    pub fn initial(network: &EntityNetwork) -> Self {
        ScoreSnapshot {
            iteration: 0,
            scores: network
                .entities()
                .iter()
                .map(|e| if e.is_counsel { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.scores.iter().filter(|&&s| s != 0.0).count()
    }
}

/// Runs the ranking and returns snapshots for iterations `0..=max_iterations`.
///
/// Each entity gathers its neighbours in ascending link order, so results
/// are bit-identical regardless of the rayon pool size.
pub fn rank_entities(network: &EntityNetwork, config: &RankConfig) -> Result<Vec<ScoreSnapshot>> {
    config.validate()?;
    let n = network.len();
    let links = network.links();
    // opposite endpoint for every CSR adjacency slot
    let neighbors: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|e| {
            network
                .incident_links(e)
                .iter()
                .map(|&l| links[l as usize].other(e) as u32)
                .collect()
        })
        .collect();
    let counsel: Vec<bool> = network.entities().iter().map(|e| e.is_counsel).collect();

    let mut snapshots = Vec::with_capacity(config.max_iterations + 1);
    snapshots.push(ScoreSnapshot::initial(network));
    for iteration in 1..=config.max_iterations {
        let prev = &snapshots[iteration - 1].scores;
        let mut next = vec![0.0; n];
        next.par_iter_mut()
            .enumerate()
            .with_min_len(4096)
            .for_each(|(e, out)| {
                let row = &neighbors[e];
                let mut sum = 0.0;
                for &nb in row {
                    sum += prev[nb as usize];
                }
                *out = update(config, prev[e], sum, row.len());
                if config.pin_counsel && counsel[e] {
                    *out = 1.0;
                }
            });
        snapshots.push(ScoreSnapshot {
            iteration,
            scores: next,
        });
    }
    Ok(snapshots)
}

#[inline]
fn update(config: &RankConfig, previous: f64, neighbor_sum: f64, degree: usize) -> f64 {
    let divisor = degree.max(config.degree_floor) as f64;
    config.self_weight * previous + config.neighbor_weight * (neighbor_sum / divisor)
}

/// Straightforward sequential version of the same update: one pass over the
/// global link list per iteration, pushing previous scores both ways.
/// Used as an oracle for [`rank_entities`].
pub fn reference_rank(network: &EntityNetwork, config: &RankConfig) -> Result<Vec<ScoreSnapshot>> {
    config.validate()?;
    let n = network.len();
    let mut snapshots = vec![ScoreSnapshot::initial(network)];
    for iteration in 1..=config.max_iterations {
        let prev = &snapshots[iteration - 1].scores;
        let mut new_score = vec![0.0; n];
        let mut n_connected = vec![0usize; n];
        for link in network.links() {
            new_score[link.from] += prev[link.to];
            new_score[link.to] += prev[link.from];
            n_connected[link.from] += 1;
            n_connected[link.to] += 1;
        }
        let mut scores = Vec::with_capacity(n);
        for (e, entity) in network.entities().iter().enumerate() {
            let s = if config.pin_counsel && entity.is_counsel {
                1.0
            } else {
                update(config, prev[e], new_score[e], n_connected[e])
            };
            scores.push(s);
        }
        snapshots.push(ScoreSnapshot { iteration, scores });
    }
    Ok(snapshots)
}

/// Mean of the two endpoint scores.
pub fn link_score(link: &Link, snapshot: &ScoreSnapshot) -> f64 {
    (snapshot.scores[link.from] + snapshot.scores[link.to]) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tier {
    LikelyPriv1,
    LikelyPriv2,
    LikelyPriv3,
    LikelyNonPriv,
    /// Counsel entities; kept out of the LikelyPriv tiers and category tables.
    Counsel,
}

impl Tier {
    /// The four tiers that make up link categories.
    pub const RANKED: [Tier; 4] = [
        Tier::LikelyPriv1,
        Tier::LikelyPriv2,
        Tier::LikelyPriv3,
        Tier::LikelyNonPriv,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tier::LikelyPriv1 => "LikelyPriv1",
            Tier::LikelyPriv2 => "LikelyPriv2",
            Tier::LikelyPriv3 => "LikelyPriv3",
            Tier::LikelyNonPriv => "LikelyNonPriv",
            Tier::Counsel => "Counsel",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TierAssignment {
    pub tiers: Vec<Tier>,
}

impl TierAssignment {
    pub fn tier(&self, entity: usize) -> Tier {
        self.tiers[entity]
    }

    pub fn count(&self, tier: Tier) -> usize {
        self.tiers.iter().filter(|&&t| t == tier).count()
    }

    pub fn members(&self, tier: Tier) -> impl Iterator<Item = usize> + '_ {
        self.tiers
            .iter()
            .enumerate()
            .filter(move |(_, &t)| t == tier)
            .map(|(i, _)| i)
    }
}

/// Splits non-counsel entities scoring at least `tier_threshold` into three
/// near-equal tiers by descending score (ties by ascending key). Remainders
/// go to the higher tiers, so 7 qualifying entities split 3/2/2.
pub fn assign_tiers(
    network: &EntityNetwork,
    snapshot: &ScoreSnapshot,
    config: &RankConfig,
) -> TierAssignment {
    let entities = network.entities();
    let mut tiers: Vec<Tier> = entities
        .iter()
        .map(|e| {
            if e.is_counsel {
                Tier::Counsel
            } else {
                Tier::LikelyNonPriv
            }
        })
        .collect();
    let mut qualifying: Vec<usize> = (0..entities.len())
        .filter(|&e| !entities[e].is_counsel && snapshot.scores[e] >= config.tier_threshold)
        .collect();
    if qualifying.is_empty() {
        log::warn!(
            "no non-counsel entity reaches the tier threshold {}",
            config.tier_threshold
        );
        return TierAssignment { tiers };
    }
    qualifying.sort_by(
        |&a, &b| match snapshot.scores[b].total_cmp(&snapshot.scores[a]) {
            Ordering::Equal => entities[a].key.cmp(&entities[b].key),
            other => other,
        },
    );
    let (base, rem) = (qualifying.len() / 3, qualifying.len() % 3);
    let sizes = [
        base + usize::from(rem > 0),
        base + usize::from(rem > 1),
        base,
    ];
    let mut start = 0;
    for (size, tier) in sizes.into_iter().zip(Tier::RANKED) {
        for &e in &qualifying[start..start + size] {
            tiers[e] = tier;
        }
        start += size;
    }
    TierAssignment { tiers }
}

/// Writes `entity,is_counsel,iteration,score` rows for one snapshot.
pub fn write_scores_csv<W: Write>(
    network: &EntityNetwork,
    snapshot: &ScoreSnapshot,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["entity", "is_counsel", "iteration", "score"])?;
    let iteration = snapshot.iteration.to_string();
    for (e, s) in network.entities().iter().zip(&snapshot.scores) {
        w.write_record([
            e.key.as_str(),
            if e.is_counsel { "true" } else { "false" },
            &iteration,
            &s.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `entity,score,tier` rows.
pub fn write_tiers_csv<W: Write>(
    network: &EntityNetwork,
    snapshot: &ScoreSnapshot,
    tiers: &TierAssignment,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["entity", "score", "tier"])?;
    for (i, e) in network.entities().iter().enumerate() {
        w.write_record([
            e.key.as_str(),
            &snapshot.scores[i].to_string(),
            tiers.tier(i).as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
