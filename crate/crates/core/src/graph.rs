//! Directed person-to-person network built from document headers.
//!
//! Entities are indexed in first-appearance order over the document sequence
//! (sender first, then To, Cc, Bcc). Each ordered sender→recipient pair is one
//! [`Link`] however many documents contain it; the count is kept as the
//! link's multiplicity and the containing documents in its doc index.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{CounselSet, DocumentRecord, EntityKey};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entity {
    pub key: EntityKey,
    pub is_counsel: bool,
    /// Latest applied score; zero until [`EntityNetwork::set_scores`].
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub from: usize,
    pub to: usize,
    /// Number of documents containing this sender→recipient pair.
    pub multiplicity: u32,
}

impl Link {
    /// The endpoint opposite `entity` (which must be one of the two).
    #[inline]
    pub fn other(&self, entity: usize) -> usize {
        if self.from == entity {
            self.to
        } else {
            self.from
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Treat Bcc recipients like To/Cc when creating entities and links.
    pub include_bcc: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { include_bcc: true }
    }
}

#[derive(Debug, Clone)]
pub struct EntityNetwork {
    entities: Vec<Entity>,
    links: Vec<Link>,
    // incident link indices per entity, CSR layout, ascending within a row
    adj_offsets: Vec<usize>,
    adj_links: Vec<u32>,
    key_index: HashMap<EntityKey, usize>,
    pair_index: HashMap<(u32, u32), u32>,
    doc_ids: Vec<String>,
    link_docs: Vec<Vec<u32>>,
    options: BuildOptions,
}

impl EntityNetwork {
    /// Builds the network with default options (Bcc included).
    pub fn build(docs: &[DocumentRecord], counsel: &CounselSet) -> Self {
        Self::build_with(docs, counsel, BuildOptions::default())
    }

    pub fn build_with(
        docs: &[DocumentRecord],
        counsel: &CounselSet,
        options: BuildOptions,
    ) -> Self {
        let mut entities: Vec<Entity> = Vec::new();
        let mut key_index: HashMap<EntityKey, usize> = HashMap::new();
        let mut links: Vec<Link> = Vec::new();
        let mut pair_index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut link_docs: Vec<Vec<u32>> = Vec::new();

        let mut intern = |key: &EntityKey, entities: &mut Vec<Entity>| -> usize {
            if let Some(&i) = key_index.get(key) {
                return i;
            }
            let i = entities.len();
            entities.push(Entity {
                key: key.clone(),
                is_counsel: counsel.contains(key),
                score: 0.0,
            });
            key_index.insert(key.clone(), i);
            i
        };

        for (doc_pos, doc) in docs.iter().enumerate() {
            let sender = intern(&doc.sender, &mut entities);
            for recipient in doc.recipients(options.include_bcc) {
                let to = intern(recipient, &mut entities);
                if to == sender {
                    continue;
                }
                let pair = (sender as u32, to as u32);
                let link = *pair_index.entry(pair).or_insert_with(|| {
                    links.push(Link {
                        from: sender,
                        to,
                        multiplicity: 0,
                    });
                    link_docs.push(Vec::new());
                    (links.len() - 1) as u32
                }) as usize;
                // a recipient listed in both To and Cc counts once per document
                if link_docs[link].last() != Some(&(doc_pos as u32)) {
                    link_docs[link].push(doc_pos as u32);
                    links[link].multiplicity += 1;
                }
            }
        }

        let network = Self::assemble(
            entities,
            links,
            key_index,
            pair_index,
            docs.iter().map(|d| d.doc_id.clone()).collect(),
            link_docs,
            options,
        );
        if !counsel.is_empty() && network.counsel_count() == 0 && !network.is_empty() {
            log::warn!(
                "none of the {} counsel identities appear in the corpus",
                counsel.len()
            );
        }
        network
    }

    fn assemble(
        entities: Vec<Entity>,
        links: Vec<Link>,
        key_index: HashMap<EntityKey, usize>,
        pair_index: HashMap<(u32, u32), u32>,
        doc_ids: Vec<String>,
        link_docs: Vec<Vec<u32>>,
        options: BuildOptions,
    ) -> Self {
        let n = entities.len();
        let mut degree = vec![0usize; n];
        for l in &links {
            degree[l.from] += 1;
            degree[l.to] += 1;
        }
        let mut adj_offsets = Vec::with_capacity(n + 1);
        adj_offsets.push(0);
        for d in &degree {
            adj_offsets.push(adj_offsets.last().unwrap() + d);
        }
        let mut fill = adj_offsets[..n].to_vec();
        let mut adj_links = vec![0u32; 2 * links.len()];
        for (i, l) in links.iter().enumerate() {
            for end in [l.from, l.to] {
                adj_links[fill[end]] = i as u32;
                fill[end] += 1;
            }
        }
        EntityNetwork {
            entities,
            links,
            adj_offsets,
            adj_links,
            key_index,
            pair_index,
            doc_ids,
            link_docs,
            options,
        }
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn options(&self) -> BuildOptions {
        self.options
    }

    pub fn counsel_count(&self) -> usize {
        self.entities.iter().filter(|e| e.is_counsel).count()
    }

    pub fn index_of(&self, key: &EntityKey) -> Option<usize> {
        self.key_index.get(key).copied()
    }

    /// Index of the link `from → to`, if present.
    pub fn link_between(&self, from: usize, to: usize) -> Option<usize> {
        self.pair_index
            .get(&(from as u32, to as u32))
            .map(|&l| l as usize)
    }

    /// Link indices incident to `entity` in either direction, ascending.
    pub fn incident_links(&self, entity: usize) -> &[u32] {
        &self.adj_links[self.adj_offsets[entity]..self.adj_offsets[entity + 1]]
    }

    /// Number of distinct links touching `entity`; A→B and B→A count as two.
    pub fn degree(&self, entity: usize) -> usize {
        self.adj_offsets[entity + 1] - self.adj_offsets[entity]
    }

    /// False for networks imported from JSON, which carry no document index.
    pub fn has_doc_index(&self) -> bool {
        !self.doc_ids.is_empty() || self.links.is_empty()
    }

    /// Document ids in corpus order.
    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    /// Corpus positions of the documents containing `link`, ascending.
    pub fn link_doc_positions(&self, link: usize) -> &[u32] {
        &self.link_docs[link]
    }

    pub fn link_doc_ids(&self, link: usize) -> impl Iterator<Item = &str> {
        self.link_docs[link]
            .iter()
            .map(|&p| self.doc_ids[p as usize].as_str())
    }

    /// Copies a per-entity score vector onto the entities.
    pub fn set_scores(&mut self, scores: &[f64]) {
        assert_eq!(scores.len(), self.entities.len(), "score vector length");
        for (e, &s) in self.entities.iter_mut().zip(scores) {
            e.score = s;
        }
    }

    pub fn to_export(&self) -> NetworkExport {
        NetworkExport {
            entities: self
                .entities
                .iter()
                .map(|e| ExportEntity {
                    key: e.key.clone(),
                    is_counsel: e.is_counsel,
                    score: e.score,
                })
                .collect(),
            links: self
                .links
                .iter()
                .map(|l| ExportLink {
                    from_key: self.entities[l.from].key.clone(),
                    to_key: self.entities[l.to].key.clone(),
                    multiplicity: l.multiplicity,
                })
                .collect(),
        }
    }

    /// Rebuilds a network from its JSON export. The result has no document
    /// index.
    pub fn from_export(export: &NetworkExport) -> Result<Self> {
        let mut key_index = HashMap::with_capacity(export.entities.len());
        let entities: Vec<Entity> = export
            .entities
            .iter()
            .enumerate()
            .map(|(i, e)| {
                key_index.insert(e.key.clone(), i);
                Entity {
                    key: e.key.clone(),
                    is_counsel: e.is_counsel,
                    score: e.score,
                }
            })
            .collect();
        let lookup = |k: &EntityKey| {
            key_index
                .get(k)
                .copied()
                .ok_or_else(|| Error::UnknownEntity(k.to_string()))
        };
        let mut links = Vec::with_capacity(export.links.len());
        let mut pair_index = HashMap::with_capacity(export.links.len());
        for l in &export.links {
            let (from, to) = (lookup(&l.from_key)?, lookup(&l.to_key)?);
            if from == to {
                return Err(Error::InvalidConfig(format!("self-link on {}", l.from_key)));
            }
            if pair_index
                .insert((from as u32, to as u32), links.len() as u32)
                .is_some()
            {
                return Err(Error::InvalidConfig(format!(
                    "duplicate link {} -> {}",
                    l.from_key, l.to_key
                )));
            }
            links.push(Link {
                from,
                to,
                multiplicity: l.multiplicity,
            });
        }
        let link_docs = vec![Vec::new(); links.len()];
        Ok(Self::assemble(
            entities,
            links,
            key_index,
            pair_index,
            Vec::new(),
            link_docs,
            BuildOptions::default(),
        ))
    }
}

/// JSON form of a network: entities with scores and links by key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkExport {
    pub entities: Vec<ExportEntity>,
    pub links: Vec<ExportLink>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportEntity {
    pub key: EntityKey,
    pub is_counsel: bool,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportLink {
    pub from_key: EntityKey,
    pub to_key: EntityKey,
    pub multiplicity: u32,
}
