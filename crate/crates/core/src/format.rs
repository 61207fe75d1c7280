//! JSON fixture formats for embeddings, voltage embeddings and chains.
//!
//! ```json
//! {"vertices":["v"],
//!  "edges":[{"id":"a","ends":["v","v"],"sign":1}],
//!  "rotations":{"v":["a+","a-"]},
//!  "group":{"type":"cyclic","order":5},
//!  "voltages":{"a":1}}
//! ```
//! `group` and `voltages` are present only for voltage embeddings; a
//! voltage always refers to the positive dart, and missing edges carry
//! the identity.

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::chain::Chain1;
use crate::embedding::{Embedding, Sign};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{FiniteGroup, GroupElement};
use crate::voltage::VoltageEmbedding;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: String,
    pub ends: [String; 2],
    pub sign: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    pub rotations: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<FiniteGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voltages: Option<IndexMap<String, usize>>,
}

impl EmbeddingJson {
    pub fn from_embedding(emb: &Embedding) -> EmbeddingJson {
        let g = emb.graph();
        let edges = (0..g.edge_count())
            .map(|e| {
                let [t, h] = g.ends(e);
                EdgeJson {
                    id: g.edge_name(e).to_string(),
                    ends: [g.vertex_name(t).to_string(), g.vertex_name(h).to_string()],
                    sign: emb.sign(e).to_i64(),
                }
            })
            .collect();
        let rotations = (0..g.vertex_count())
            .map(|v| {
                let toks = emb.rotation(v).iter().map(|&d| g.dart_token(d)).collect();
                (g.vertex_name(v).to_string(), toks)
            })
            .collect();
        EmbeddingJson { vertices: g.vertex_names().to_vec(), edges, rotations, group: None, voltages: None }
    }

    pub fn from_voltage_embedding(ve: &VoltageEmbedding) -> EmbeddingJson {
        let mut j = EmbeddingJson::from_embedding(ve.base());
        let g = ve.base().graph();
        j.group = Some(ve.group().clone());
        j.voltages = Some((0..g.edge_count()).map(|e| (g.edge_name(e).to_string(), ve.voltages()[e].0)).collect());
        j
    }

    pub fn to_embedding(&self) -> Result<Embedding> {
        let mut edges = Vec::with_capacity(self.edges.len());
        let index = |name: &str| {
            self.vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        for e in &self.edges {
            edges.push((e.id.clone(), [index(&e.ends[0])?, index(&e.ends[1])?]));
        }
        let graph = Graph::new(self.vertices.clone(), edges)?;
        let signs = self.edges.iter().map(|e| Sign::from_i64(e.sign)).collect::<Result<Vec<_>>>()?;
        if let Some(k) = self.rotations.keys().find(|k| graph.vertex_index(k).is_none()) {
            return Err(Error::UnknownVertex(k.clone()));
        }
        let mut rotation = Vec::with_capacity(graph.vertex_count());
        for v in graph.vertex_names() {
            let toks = self.rotations.get(v).ok_or_else(|| Error::InvalidRotation(format!("no rotation for `{v}`")))?;
            rotation.push(toks.iter().map(|t| graph.parse_dart(t)).collect::<Result<Vec<_>>>()?);
        }
        Embedding::new(graph, rotation, signs)
    }

    pub fn to_voltage_embedding(&self) -> Result<VoltageEmbedding> {
        let emb = self.to_embedding()?;
        let group = self.group.clone().ok_or_else(|| Error::Format("missing `group`".into()))?;
        let g = emb.graph();
        let mut alpha = vec![group.identity(); g.edge_count()];
        if let Some(vs) = &self.voltages {
            for (name, &a) in vs {
                let e = g.edge_index(name).ok_or_else(|| Error::UnknownEdge(name.clone()))?;
                alpha[e] = group.element(a)?;
            }
        }
        VoltageEmbedding::new(emb, group, alpha)
    }
}

pub fn embedding_to_json(emb: &Embedding) -> String {
    serde_json::to_string_pretty(&EmbeddingJson::from_embedding(emb)).expect("serializable")
}

pub fn voltage_embedding_to_json(ve: &VoltageEmbedding) -> String {
    serde_json::to_string_pretty(&EmbeddingJson::from_voltage_embedding(ve)).expect("serializable")
}

pub fn embedding_from_json(s: &str) -> Result<Embedding> {
    serde_json::from_str::<EmbeddingJson>(s)?.to_embedding()
}

pub fn voltage_embedding_from_json(s: &str) -> Result<VoltageEmbedding> {
    serde_json::from_str::<EmbeddingJson>(s)?.to_voltage_embedding()
}

pub fn read_embedding(path: impl AsRef<Path>) -> Result<Embedding> {
    embedding_from_json(&std::fs::read_to_string(path)?)
}

pub fn read_voltage_embedding(path: impl AsRef<Path>) -> Result<VoltageEmbedding> {
    voltage_embedding_from_json(&std::fs::read_to_string(path)?)
}

/// A chain as its sorted edge ids.
pub fn chain_to_json(g: &Graph, z: &Chain1) -> serde_json::Value {
    serde_json::json!(z.names(g))
}

pub fn chain_from_names(g: &Graph, names: &[String]) -> Result<Chain1> {
    Chain1::from_names(g, names)
}

/// Group elements serialize as their carrier index.
pub fn element_json(a: GroupElement) -> serde_json::Value {
    serde_json::json!(a.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Dart;

    const TORUS: &str = r#"{
        "vertices": ["v"],
        "edges": [{"id": "a", "ends": ["v", "v"], "sign": 1}, {"id": "b", "ends": ["v", "v"], "sign": 1}],
        "rotations": {"v": ["a+", "b+", "a-", "b-"]}
    }"#;

    #[test]
    fn reads_the_torus_bouquet() {
        let e = embedding_from_json(TORUS).unwrap();
        assert_eq!(e.rotation(0), &[Dart(0), Dart(2), Dart(1), Dart(3)]);
        assert_eq!(e.euler_characteristic(), 0);
    }

    #[test]
    fn round_trip() {
        let e = embedding_from_json(TORUS).unwrap();
        let s = embedding_to_json(&e);
        assert_eq!(embedding_from_json(&s).unwrap(), e);
        assert!(!s.contains("group"));
    }

    #[test]
    fn voltage_round_trip() {
        let j = TORUS.trim_end().trim_end_matches('}').to_string()
            + r#", "group": {"type": "cyclic", "order": 5}, "voltages": {"a": 1}}"#;
        let ve = voltage_embedding_from_json(&j).unwrap();
        assert_eq!(ve.voltages(), &[GroupElement(1), GroupElement(0)]);
        let back = voltage_embedding_from_json(&voltage_embedding_to_json(&ve)).unwrap();
        assert_eq!(back, ve);
    }

    #[test]
    fn rejects_bad_input() {
        let bad_sign = TORUS.replacen("\"sign\": 1", "\"sign\": 2", 1);
        assert!(embedding_from_json(&bad_sign).is_err());
        let bad_dart = TORUS.replace("\"b-\"", "\"c-\"");
        assert!(embedding_from_json(&bad_dart).is_err());
        let missing = TORUS.replace("\"a+\", ", "");
        assert!(matches!(embedding_from_json(&missing), Err(Error::InvalidRotation(_))));
        let voltage_range = TORUS.trim_end().trim_end_matches('}').to_string()
            + r#", "group": {"type": "cyclic", "order": 5}, "voltages": {"a": 7}}"#;
        assert!(voltage_embedding_from_json(&voltage_range).is_err());
    }
}
