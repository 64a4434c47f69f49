//! Document-level use of tiers and scores: which links a document contains,
//! which link categories claim it, and a max-link-score predictor.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{EntityNetwork, Link};
use crate::ingest::DocumentRecord;
use crate::ranking::{link_score, ScoreSnapshot, Tier, TierAssignment};

/// Ordered (sender tier, receiver tier) pair over the four ranked tiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinkCategory {
    #[serde(rename = "sender_tier")]
    pub sender: Tier,
    #[serde(rename = "receiver_tier")]
    pub receiver: Tier,
}

impl LinkCategory {
    pub const COUNT: usize = 16;

    /// All 16 categories, sender-major, LikelyPriv1 first.
    pub fn all() -> [LinkCategory; Self::COUNT] {
        let mut out = [LinkCategory {
            sender: Tier::LikelyPriv1,
            receiver: Tier::LikelyPriv1,
        }; Self::COUNT];
        for (i, sender) in Tier::RANKED.into_iter().enumerate() {
            for (j, receiver) in Tier::RANKED.into_iter().enumerate() {
                out[i * 4 + j] = LinkCategory { sender, receiver };
            }
        }
        out
    }

    /// Position in [`LinkCategory::all`].
    pub fn index(&self) -> usize {
        let pos = |t: Tier| {
            Tier::RANKED
                .iter()
                .position(|&r| r == t)
                .expect("ranked tier")
        };
        pos(self.sender) * 4 + pos(self.receiver)
    }

    pub fn involves(&self, tier: Tier) -> bool {
        self.sender == tier || self.receiver == tier
    }
}

impl fmt::Display for LinkCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.sender, self.receiver)
    }
}

/// Link indices of every distinct sender→recipient pair in `doc`, in
/// recipient order. Self-pairs and entities absent from the network are
/// skipped.
pub fn document_links(doc: &DocumentRecord, network: &EntityNetwork) -> Vec<usize> {
    let Some(sender) = network.index_of(&doc.sender) else {
        return Vec::new();
    };
    let mut out: Vec<usize> = Vec::new();
    for r in doc.recipients(network.options().include_bcc) {
        let Some(to) = network.index_of(r) else {
            continue;
        };
        if let Some(link) = network.link_between(sender, to) {
            if !out.contains(&link) {
                out.push(link);
            }
        }
    }
    out
}

/// [`document_links`] for every document, in corpus order.
pub fn all_document_links(docs: &[DocumentRecord], network: &EntityNetwork) -> Vec<Vec<usize>> {
    docs.par_iter()
        .map(|d| document_links(d, network))
        .collect()
}

/// `None` when either endpoint is counsel.
pub fn categorize_link(link: &Link, tiers: &TierAssignment) -> Option<LinkCategory> {
    let (sender, receiver) = (tiers.tier(link.from), tiers.tier(link.to));
    if sender == Tier::Counsel || receiver == Tier::Counsel {
        return None;
    }
    Some(LinkCategory { sender, receiver })
}

/// Doc ids containing at least one link of `category`, in corpus order.
pub fn classify_documents_by_category<'a>(
    docs: &'a [DocumentRecord],
    network: &EntityNetwork,
    tiers: &TierAssignment,
    category: LinkCategory,
) -> Vec<&'a str> {
    docs.iter()
        .filter(|d| {
            document_links(d, network)
                .into_iter()
                .any(|l| categorize_link(&network.links()[l], tiers) == Some(category))
        })
        .map(|d| d.doc_id.as_str())
        .collect()
}

/// Claimed document positions for all 16 categories at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryClaims {
    /// Indexed by [`LinkCategory::index`]; corpus positions, ascending.
    pub claimed: Vec<Vec<usize>>,
    /// Documents with at least one link where every link touches counsel.
    pub counsel_only: Vec<usize>,
}

impl CategoryClaims {
    pub fn compute(
        doc_links: &[Vec<usize>],
        network: &EntityNetwork,
        tiers: &TierAssignment,
    ) -> Self {
        let mut claimed = vec![Vec::new(); LinkCategory::COUNT];
        let mut counsel_only = Vec::new();
        for (pos, links) in doc_links.iter().enumerate() {
            let mut hit = [false; LinkCategory::COUNT];
            for &l in links {
                if let Some(c) = categorize_link(&network.links()[l], tiers) {
                    hit[c.index()] = true;
                }
            }
            if !links.is_empty() && !hit.iter().any(|&h| h) {
                counsel_only.push(pos);
            }
            for (c, _) in hit.iter().enumerate().filter(|(_, &h)| h) {
                claimed[c].push(pos);
            }
        }
        CategoryClaims {
            claimed,
            counsel_only,
        }
    }

    pub fn for_category(&self, category: LinkCategory) -> &[usize] {
        &self.claimed[category.index()]
    }
}

/// Highest link score among each document's links; `None` for documents
/// without links.
pub fn max_link_scores(
    doc_links: &[Vec<usize>],
    network: &EntityNetwork,
    snapshot: &ScoreSnapshot,
) -> Vec<Option<f64>> {
    doc_links
        .par_iter()
        .map(|links| {
            links
                .iter()
                .map(|&l| link_score(&network.links()[l], snapshot))
                .reduce(f64::max)
        })
        .collect()
}

/// Doc ids whose best link score reaches `threshold`, in corpus order.
pub fn predict_by_link_score<'a>(
    docs: &'a [DocumentRecord],
    network: &EntityNetwork,
    snapshot: &ScoreSnapshot,
    threshold: f64,
) -> Vec<&'a str> {
    let links = all_document_links(docs, network);
    max_link_scores(&links, network, snapshot)
        .into_iter()
        .zip(docs)
        .filter(|(best, _)| best.is_some_and(|s| s >= threshold))
        .map(|(_, d)| d.doc_id.as_str())
        .collect()
}

/// `doc_id,category_or_score,predicted` with the max link score (empty when
/// the document has no links) and a 0/1 prediction at `threshold`.
pub fn write_score_predictions_csv<W: Write>(
    docs: &[DocumentRecord],
    best: &[Option<f64>],
    threshold: f64,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["doc_id", "category_or_score", "predicted"])?;
    for (d, b) in docs.iter().zip(best) {
        let score = b.map(|s| s.to_string()).unwrap_or_default();
        let predicted = b.is_some_and(|s| s >= threshold);
        w.write_record([d.doc_id.as_str(), &score, if predicted { "1" } else { "0" }])?;
    }
    w.flush()?;
    Ok(())
}

/// `doc_id,category_or_score,predicted`: one row per (document, claiming
/// category) pair, documents in corpus order and categories in table order.
pub fn write_category_predictions_csv<W: Write>(
    docs: &[DocumentRecord],
    claims: &CategoryClaims,
    out: W,
) -> Result<()> {
    let mut per_doc: Vec<Vec<LinkCategory>> = vec![Vec::new(); docs.len()];
    for category in LinkCategory::all() {
        for &pos in claims.for_category(category) {
            per_doc[pos].push(category);
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["doc_id", "category_or_score", "predicted"])?;
    for (d, cats) in docs.iter().zip(&per_doc) {
        for c in cats {
            w.write_record([d.doc_id.as_str(), &c.to_string(), "1"])?;
        }
    }
    w.flush()?;
    Ok(())
}
