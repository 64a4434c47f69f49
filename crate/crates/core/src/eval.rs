//! Evaluation artifacts: score-bucketed precision curves for entities and
//! links, and recall/precision per link category.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::classify::{CategoryClaims, LinkCategory};
use crate::error::{Error, Result};
use crate::graph::EntityNetwork;
use crate::ingest::DocumentRecord;
use crate::ranking::{link_score, ScoreSnapshot, TierAssignment};

/// Ground-truth privilege labels, aligned with the corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    privileged: Vec<bool>,
}

impl Labels {
    /// Fails with [`Error::Unlabeled`] unless every document has a label.
    pub fn from_docs(docs: &[DocumentRecord]) -> Result<Self> {
        let unlabeled = docs.iter().filter(|d| d.privileged.is_none()).count();
        if unlabeled > 0 || docs.is_empty() {
            return Err(Error::Unlabeled {
                unlabeled,
                total: docs.len(),
            });
        }
        Ok(Labels {
            privileged: docs.iter().map(|d| d.privileged == Some(true)).collect(),
        })
    }

    pub fn is_privileged(&self, pos: usize) -> bool {
        self.privileged[pos]
    }

    pub fn len(&self) -> usize {
        self.privileged.len()
    }

    pub fn is_empty(&self) -> bool {
        self.privileged.is_empty()
    }

    pub fn privileged_count(&self) -> usize {
        self.privileged.iter().filter(|&&p| p).count()
    }

    /// Fraction of privileged documents in the corpus.
    pub fn base_rate(&self) -> f64 {
        self.privileged_count() as f64 / self.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DocCounts {
    pub privileged: u64,
    pub total: u64,
}

impl DocCounts {
    pub fn precision(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.privileged as f64 / self.total as f64
        }
    }
}

/// Per-entity document counts. An entity's documents are those in which it
/// is the sender or any recipient (Bcc per the network's build options).
pub fn entity_metrics(
    docs: &[DocumentRecord],
    network: &EntityNetwork,
    labels: &Labels,
) -> Vec<DocCounts> {
    let mut counts = vec![DocCounts::default(); network.len()];
    let mut last_doc = vec![usize::MAX; network.len()];
    let include_bcc = network.options().include_bcc;
    for (pos, doc) in docs.iter().enumerate() {
        let privileged = labels.is_privileged(pos);
        for key in std::iter::once(&doc.sender).chain(doc.recipients(include_bcc)) {
            let Some(e) = network.index_of(key) else {
                continue;
            };
            if last_doc[e] == pos {
                continue;
            }
            last_doc[e] = pos;
            counts[e].total += 1;
            counts[e].privileged += u64::from(privileged);
        }
    }
    counts
}

/// Per-link document counts from the network's doc index.
pub fn link_metrics(network: &EntityNetwork, labels: &Labels) -> Vec<DocCounts> {
    (0..network.links().len())
        .map(|l| {
            let docs = network.link_doc_positions(l);
            DocCounts {
                privileged: docs
                    .iter()
                    .filter(|&&p| labels.is_privileged(p as usize))
                    .count() as u64,
                total: docs.len() as u64,
            }
        })
        .collect()
}

/// Anything that can be placed on a score-bucketed curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredItem {
    pub key: String,
    pub score: f64,
    pub counts: DocCounts,
}

pub fn entity_items(
    network: &EntityNetwork,
    snapshot: &ScoreSnapshot,
    metrics: &[DocCounts],
) -> Vec<ScoredItem> {
    network
        .entities()
        .iter()
        .enumerate()
        .map(|(i, e)| ScoredItem {
            key: e.key.to_string(),
            score: snapshot.scores[i],
            counts: metrics[i],
        })
        .collect()
}

pub fn link_items(
    network: &EntityNetwork,
    snapshot: &ScoreSnapshot,
    metrics: &[DocCounts],
) -> Vec<ScoredItem> {
    let entities = network.entities();
    network
        .links()
        .iter()
        .enumerate()
        .map(|(i, l)| ScoredItem {
            key: format!("{}->{}", entities[l.from].key, entities[l.to].key),
            score: link_score(l, snapshot),
            counts: metrics[i],
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecisionMode {
    /// Mean of the members' own precisions.
    #[default]
    MemberMean,
    /// Privileged documents over total documents, summed across members.
    Pooled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketRow {
    pub bucket: usize,
    pub mean_score: f64,
    pub mean_priv_docs: f64,
    pub mean_precision: f64,
}

/// Sorts items by (score desc, key asc) and averages each consecutive group
/// of `bucket_size`; the last bucket may be smaller.
pub fn bucket_curve(
    items: &[ScoredItem],
    bucket_size: usize,
    mode: PrecisionMode,
) -> Result<Vec<BucketRow>> {
    if bucket_size < 1 {
        return Err(Error::InvalidConfig(
            "bucket_size must be at least 1".into(),
        ));
    }
    let mut order: Vec<&ScoredItem> = items.iter().collect();
    order.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.key.cmp(&b.key)));
    Ok(order
        .chunks(bucket_size)
        .enumerate()
        .map(|(bucket, members)| {
            let n = members.len() as f64;
            let mean =
                |f: &dyn Fn(&ScoredItem) -> f64| members.iter().map(|m| f(m)).sum::<f64>() / n;
            let mean_precision = match mode {
                PrecisionMode::MemberMean => mean(&|m| m.counts.precision()),
                PrecisionMode::Pooled => {
                    let pooled = members
                        .iter()
                        .fold(DocCounts::default(), |acc, m| DocCounts {
                            privileged: acc.privileged + m.counts.privileged,
                            total: acc.total + m.counts.total,
                        });
                    pooled.precision()
                }
            };
            BucketRow {
                bucket,
                mean_score: mean(&|m| m.score),
                mean_priv_docs: mean(&|m| m.counts.privileged as f64),
                mean_precision,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryRow {
    #[serde(flatten)]
    pub category: LinkCategory,
    pub recall: f64,
    /// `None` when the category claims no documents.
    pub precision: Option<f64>,
    pub n_docs: usize,
}

/// Recall and precision for all 16 link categories.
pub fn category_table(
    docs: &[DocumentRecord],
    network: &EntityNetwork,
    tiers: &TierAssignment,
    labels: &Labels,
) -> Result<Vec<CategoryRow>> {
    let links = crate::classify::all_document_links(docs, network);
    let claims = CategoryClaims::compute(&links, network, tiers);
    category_rows(&claims, labels)
}

/// Category rows from precomputed claims.
pub fn category_rows(claims: &CategoryClaims, labels: &Labels) -> Result<Vec<CategoryRow>> {
    let total_priv = labels.privileged_count();
    if total_priv == 0 {
        return Err(Error::NoPrivileged);
    }
    Ok(LinkCategory::all()
        .into_iter()
        .map(|category| {
            let claimed = claims.for_category(category);
            let hits = claimed.iter().filter(|&&p| labels.is_privileged(p)).count();
            CategoryRow {
                category,
                recall: hits as f64 / total_priv as f64,
                precision: (!claimed.is_empty()).then(|| hits as f64 / claimed.len() as f64),
                n_docs: claimed.len(),
            }
        })
        .collect())
}

/// A row type with a fixed CSV layout.
pub trait ReportRow: Serialize + DeserializeOwned {
    const HEADER: &'static [&'static str];
    fn csv_fields(&self) -> Vec<String>;
}

impl ReportRow for BucketRow {
    const HEADER: &'static [&'static str] =
        &["bucket", "mean_score", "mean_priv_docs", "mean_precision"];

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.bucket.to_string(),
            self.mean_score.to_string(),
            self.mean_priv_docs.to_string(),
            self.mean_precision.to_string(),
        ]
    }
}

impl ReportRow for CategoryRow {
    const HEADER: &'static [&'static str] = &[
        "sender_tier",
        "receiver_tier",
        "recall",
        "precision",
        "n_docs",
    ];

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.category.sender.to_string(),
            self.category.receiver.to_string(),
            self.recall.to_string(),
            self.precision.map(|p| p.to_string()).unwrap_or_default(),
            self.n_docs.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

pub fn write_rows_csv<T: ReportRow, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(T::HEADER)?;
    for row in rows {
        w.write_record(row.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rows_json<T: ReportRow, W: Write>(rows: &[T], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_rows_json<T: ReportRow, R: Read>(input: R) -> Result<Vec<T>> {
    Ok(serde_json::from_reader(input)?)
}

/// Reads a bucket CSV written by [`write_rows_csv`].
pub fn read_bucket_csv<R: Read>(input: R) -> Result<Vec<BucketRow>> {
    let mut reader = csv::Reader::from_reader(input);
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<BucketRow>, _>>()
        .map_err(Error::from)
}

/// Writes `rows` to `destination` in the given format.
pub fn emit_report<T: ReportRow>(
    rows: &[T],
    format: ReportFormat,
    destination: &Path,
) -> Result<()> {
    let file = File::create(destination).map_err(|e| Error::io(destination, e))?;
    let mut out = BufWriter::new(file);
    match format {
        ReportFormat::Csv => write_rows_csv(rows, &mut out)?,
        ReportFormat::Json => write_rows_json(rows, &mut out)?,
    }
    out.flush().map_err(|e| Error::io(destination, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub bucket_size: usize,
    pub precision_mode: PrecisionMode,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            bucket_size: 1000,
            precision_mode: PrecisionMode::MemberMean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationCurves {
    pub iteration: usize,
    pub entity_buckets: Vec<BucketRow>,
    pub link_buckets: Vec<BucketRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_docs: usize,
    pub n_privileged: usize,
    pub base_rate: f64,
    pub config: EvalConfig,
    pub curves: Vec<IterationCurves>,
    /// Categories computed from the tier assignment passed to [`evaluate`].
    pub categories: Vec<CategoryRow>,
    pub counsel_only_docs: usize,
    pub counsel_only_privileged: usize,
}

/// Full evaluation: curves for every snapshot past iteration 0 and the
/// category table for `tiers`.
pub fn evaluate(
    docs: &[DocumentRecord],
    network: &EntityNetwork,
    snapshots: &[ScoreSnapshot],
    tiers: &TierAssignment,
    config: &EvalConfig,
) -> Result<EvalReport> {
    let labels = Labels::from_docs(docs)?;
    if config.bucket_size < 1 {
        return Err(Error::InvalidConfig(
            "bucket_size must be at least 1".into(),
        ));
    }
    let entity_counts = entity_metrics(docs, network, &labels);
    let link_counts = link_metrics(network, &labels);
    let curves = snapshots
        .iter()
        .filter(|s| s.iteration > 0 || snapshots.len() == 1)
        .map(|s| {
            Ok(IterationCurves {
                iteration: s.iteration,
                entity_buckets: bucket_curve(
                    &entity_items(network, s, &entity_counts),
                    config.bucket_size,
                    config.precision_mode,
                )?,
                link_buckets: bucket_curve(
                    &link_items(network, s, &link_counts),
                    config.bucket_size,
                    config.precision_mode,
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let doc_links = crate::classify::all_document_links(docs, network);
    let claims = CategoryClaims::compute(&doc_links, network, tiers);
    let categories = category_rows(&claims, &labels)?;
    Ok(EvalReport {
        n_docs: labels.len(),
        n_privileged: labels.privileged_count(),
        base_rate: labels.base_rate(),
        config: *config,
        curves,
        categories,
        counsel_only_docs: claims.counsel_only.len(),
        counsel_only_privileged: claims
            .counsel_only
            .iter()
            .filter(|&&p| labels.is_privileged(p))
            .count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{CounselSet, EntityKey};
    use crate::ranking::Tier;
    use proptest::prelude::*;

    fn key(s: &str) -> EntityKey {
        EntityKey::parse(s).unwrap()
    }

    fn doc(id: &str, from: &str, to: &[&str], privileged: bool) -> DocumentRecord {
        DocumentRecord::new(
            id,
            key(from),
            to.iter().map(|t| key(t)).collect(),
            vec![],
            vec![],
            Some(privileged),
        )
    }

    fn item(key: &str, score: f64, privileged: u64, total: u64) -> ScoredItem {
        ScoredItem {
            key: key.into(),
            score,
            counts: DocCounts { privileged, total },
        }
    }

    #[test]
    fn entity_in_four_docs_three_privileged() {
        let docs = [
            doc("1", "a", &["b"], true),
            doc("2", "b", &["a"], true),
            doc("3", "c", &["a", "b"], true),
            doc("4", "a", &["c"], false),
            doc("5", "c", &["d"], false),
        ];
        let net = EntityNetwork::build(&docs, &CounselSet::new());
        let labels = Labels::from_docs(&docs).unwrap();
        let m = entity_metrics(&docs, &net, &labels);
        let a = net.index_of(&key("a")).unwrap();
        assert_eq!(
            m[a],
            DocCounts {
                privileged: 3,
                total: 4
            }
        );
        assert_eq!(m[a].precision(), 0.75);
        let d = net.index_of(&key("d")).unwrap();
        assert_eq!(m[d].precision(), 0.0);
    }

    #[test]
    fn unlabeled_corpus_refused() {
        let docs = [
            doc("1", "a", &["b"], true),
            DocumentRecord::new("2", key("a"), vec![], vec![], vec![], None),
        ];
        assert!(matches!(
            Labels::from_docs(&docs),
            Err(Error::Unlabeled {
                unlabeled: 1,
                total: 2
            })
        ));
    }

    #[test]
    fn entity_metrics_match_brute_force_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let docs: Vec<_> = (0..400)
            .map(|i| {
                let to: Vec<String> = (0..rng.random_range(0..4))
                    .map(|_| format!("p{}", rng.random_range(0..30)))
                    .collect();
                let to: Vec<&str> = to.iter().map(String::as_str).collect();
                let from = format!("p{}", rng.random_range(0..30));
                doc(&format!("d{i}"), &from, &to, rng.random_bool(0.3))
            })
            .collect();
        let net = EntityNetwork::build(&docs, &CounselSet::new());
        let labels = Labels::from_docs(&docs).unwrap();
        let m = entity_metrics(&docs, &net, &labels);
        for (i, e) in net.entities().iter().enumerate() {
            let mine: Vec<_> = docs
                .iter()
                .filter(|d| d.sender == e.key || d.to.contains(&e.key))
                .collect();
            let p = mine.iter().filter(|d| d.privileged == Some(true)).count() as u64;
            assert_eq!(
                m[i],
                DocCounts {
                    privileged: p,
                    total: mine.len() as u64
                }
            );
            assert!(m[i].total > 0);
        }
    }

    #[test]
    fn bucket_sizes() {
        let items: Vec<_> = (0..2500)
            .map(|i| item(&format!("k{i:04}"), i as f64, 1, 1))
            .collect();
        let rows = bucket_curve(&items, 1000, PrecisionMode::MemberMean).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(
            rows[0].mean_score,
            (1500..2500).sum::<i32>() as f64 / 1000.0
        );
        assert_eq!(rows[2].mean_score, (0..500).sum::<i32>() as f64 / 500.0);
        assert!(rows.iter().all(|r| r.mean_precision == 1.0));
        assert!(matches!(
            bucket_curve(&items, 0, PrecisionMode::MemberMean),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn member_mean_vs_pooled() {
        let items = [item("a", 1.0, 1, 1), item("b", 0.5, 0, 3)];
        let mean = bucket_curve(&items, 2, PrecisionMode::MemberMean).unwrap();
        let pooled = bucket_curve(&items, 2, PrecisionMode::Pooled).unwrap();
        assert_eq!(mean[0].mean_precision, 0.5);
        assert_eq!(pooled[0].mean_precision, 0.25);
        assert_eq!(mean[0].mean_priv_docs, 0.5);
    }

    #[test]
    fn bucket_curve_matches_independent_grouping() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let items: Vec<_> = (0..537)
            .map(|i| {
                let total = rng.random_range(1..20);
                // coarse scores so ties exercise the key tie-break
                item(
                    &format!("e{i}"),
                    (rng.random_range(0..50) as f64) / 50.0,
                    rng.random_range(0..=total),
                    total,
                )
            })
            .collect();
        let rows = bucket_curve(&items, 100, PrecisionMode::MemberMean).unwrap();
        // oracle: repeatedly pull the max (score, then smallest key)
        let mut pool = items.clone();
        let mut expected = Vec::new();
        while !pool.is_empty() {
            let mut group = Vec::new();
            while group.len() < 100 && !pool.is_empty() {
                let best = (0..pool.len())
                    .max_by(|&a, &b| {
                        pool[a]
                            .score
                            .partial_cmp(&pool[b].score)
                            .unwrap()
                            .then(pool[b].key.cmp(&pool[a].key))
                    })
                    .unwrap();
                group.push(pool.swap_remove(best));
            }
            let n = group.len() as f64;
            expected.push((
                group.iter().map(|g| g.score).sum::<f64>() / n,
                group
                    .iter()
                    .map(|g| g.counts.privileged as f64)
                    .sum::<f64>()
                    / n,
                group
                    .iter()
                    .map(|g| g.counts.privileged as f64 / g.counts.total as f64)
                    .sum::<f64>()
                    / n,
            ));
        }
        assert_eq!(rows.len(), expected.len());
        for (r, (s, p, pr)) in rows.iter().zip(expected) {
            assert!((r.mean_score - s).abs() < 1e-12);
            assert!((r.mean_priv_docs - p).abs() < 1e-12);
            assert!((r.mean_precision - pr).abs() < 1e-12);
        }
    }

    fn tiered_fixture(
        all_privileged: bool,
    ) -> (Vec<DocumentRecord>, EntityNetwork, TierAssignment) {
        let docs = vec![
            doc("1", "a", &["b"], true),
            doc("2", "b", &["a", "n"], all_privileged),
            doc("3", "a", &["b"], true),
        ];
        let net = EntityNetwork::build(&docs, &CounselSet::new());
        let tiers = TierAssignment {
            tiers: vec![Tier::LikelyPriv1, Tier::LikelyPriv1, Tier::LikelyNonPriv],
        };
        (docs, net, tiers)
    }

    #[test]
    fn category_table_rows() {
        let (docs, net, tiers) = tiered_fixture(true);
        let labels = Labels::from_docs(&docs).unwrap();
        let rows = category_table(&docs, &net, &tiers, &labels).unwrap();
        assert_eq!(rows.len(), 16);
        assert_eq!(rows[0].category.to_string(), "LikelyPriv1.LikelyPriv1");
        assert_eq!(
            (rows[0].recall, rows[0].precision, rows[0].n_docs),
            (1.0, Some(1.0), 3)
        );
        // LikelyPriv1.LikelyNonPriv claims doc 2 only
        assert_eq!((rows[3].recall, rows[3].n_docs), (1.0 / 3.0, 1));
        // an empty category has undefined precision
        assert_eq!((rows[5].precision, rows[5].n_docs), (None, 0));
        for r in &rows {
            assert!((0.0..=1.0).contains(&r.recall));
            assert!(r.precision.is_none_or(|p| p == 1.0));
        }
    }

    #[test]
    fn category_table_needs_privileged_docs() {
        let docs = vec![doc("1", "a", &["b"], false)];
        let net = EntityNetwork::build(&docs, &CounselSet::new());
        let tiers = TierAssignment {
            tiers: vec![Tier::LikelyNonPriv; 2],
        };
        let labels = Labels::from_docs(&docs).unwrap();
        assert!(matches!(
            category_table(&docs, &net, &tiers, &labels),
            Err(Error::NoPrivileged)
        ));
    }

    #[test]
    fn csv_layouts() {
        let rows: Vec<BucketRow> = (0..3)
            .map(|b| BucketRow {
                bucket: b,
                mean_score: 0.5,
                mean_priv_docs: 2.0,
                mean_precision: 0.25,
            })
            .collect();
        let mut buf = Vec::new();
        write_rows_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(
            text.lines().next(),
            Some("bucket,mean_score,mean_priv_docs,mean_precision")
        );

        let mut buf = Vec::new();
        write_rows_csv::<BucketRow, _>(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "bucket,mean_score,mean_priv_docs,mean_precision\n"
        );

        let (docs, net, tiers) = tiered_fixture(false);
        let rows = category_table(&docs, &net, &tiers, &Labels::from_docs(&docs).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_rows_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(
            lines[0],
            "sender_tier,receiver_tier,recall,precision,n_docs"
        );
        assert_eq!(lines[1], "LikelyPriv1,LikelyPriv1,1,0.6666666666666666,3");
        assert_eq!(lines[4], "LikelyPriv1,LikelyNonPriv,0,0,1");
        assert_eq!(lines[6], "LikelyPriv2,LikelyPriv2,0,,0");
    }

    #[test]
    fn json_round_trip_and_emit() {
        let (docs, net, tiers) = tiered_fixture(false);
        let rows = category_table(&docs, &net, &tiers, &Labels::from_docs(&docs).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_rows_json(&rows, &mut buf).unwrap();
        let back: Vec<CategoryRow> = read_rows_json(buf.as_slice()).unwrap();
        assert_eq!(back, rows);
        let json: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(json[0]["sender_tier"], "LikelyPriv1");
        assert!(json[5]["precision"].is_null());

        let dir = tempfile::tempdir().unwrap();
        emit_report(&rows, ReportFormat::Json, &dir.path().join("c.json")).unwrap();
        assert!(emit_report(&rows, ReportFormat::Csv, &dir.path().join("missing/c.csv")).is_err());
    }

    proptest! {
        #[test]
        fn csv_export_recomputes_exactly(scores in prop::collection::vec((0.0f64..1.0, 0u64..10, 1u64..10), 1..300), size in 1usize..50) {
            let items: Vec<_> = scores
                .iter()
                .enumerate()
                .map(|(i, &(s, p, t))| item(&format!("k{i}"), s, p.min(t), t))
                .collect();
            let rows = bucket_curve(&items, size, PrecisionMode::MemberMean).unwrap();
            let members: usize = (0..rows.len()).map(|b| size.min(items.len() - b * size)).sum();
            prop_assert_eq!(members, items.len());
            let mut buf = Vec::new();
            write_rows_csv(&rows, &mut buf).unwrap();
            prop_assert_eq!(read_bucket_csv(buf.as_slice()).unwrap(), rows);
        }
    }
}
