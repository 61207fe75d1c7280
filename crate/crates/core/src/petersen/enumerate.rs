//! Exhaustive enumeration of rotation systems with edge signs taken
//! modulo vertex switching.
//!
//! Every vertex contributes `(deg - 1)!` cyclic orders (its first dart is
//! pinned). Switching classes of signs are represented by making every
//! edge of a BFS spanning tree positive, leaving `2^(|E| - |V| + 1)` sign
//! patterns. Embeddings are indexed in mixed radix with the sign digits
//! least significant, so a cursor can start anywhere.

use itertools::Itertools;

use crate::embedding::{Embedding, Sign};
use crate::error::{Error, Result};
use crate::graph::{Dart, Graph};

/// Default ceiling on the number of embeddings.
pub const DEFAULT_LIMIT: u128 = 50_000_000;

#[derive(Clone, Debug)]
pub struct EmbeddingSpace {
    graph: Graph,
    /// Non-tree edges, whose signs vary.
    free_edges: Vec<usize>,
    /// All cyclic orders at each vertex.
    orders: Vec<Vec<Vec<Dart>>>,
    total: u128,
}

impl EmbeddingSpace {
    pub fn new(graph: &Graph, limit: u128) -> Result<EmbeddingSpace> {
        let total = embedding_count(graph);
        if total > limit {
            return Err(Error::Guardrail { count: total, limit });
        }
        let tree = graph.bfs_spanning_tree();
        let free_edges = (0..graph.edge_count()).filter(|&e| !tree[e]).collect();
        let orders = (0..graph.vertex_count())
            .map(|v| {
                let darts = graph.darts_at(v);
                match darts.split_first() {
                    None => vec![Vec::new()],
                    Some((&first, rest)) => rest
                        .iter()
                        .copied()
                        .permutations(rest.len())
                        .map(|p| std::iter::once(first).chain(p).collect())
                        .collect(),
                }
            })
            .collect();
        Ok(EmbeddingSpace { graph: graph.clone(), free_edges, orders, total })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn count(&self) -> u128 {
        self.total
    }

    fn digits(&self, mut index: u128) -> (u64, Vec<usize>) {
        assert!(index < self.total, "index {index} out of range");
        let sign_classes = 1u128 << self.free_edges.len();
        let signs = (index % sign_classes) as u64;
        index /= sign_classes;
        let rot = self
            .orders
            .iter()
            .map(|o| {
                let d = (index % o.len() as u128) as usize;
                index /= o.len() as u128;
                d
            })
            .collect();
        (signs, rot)
    }

    fn signs_from_mask(&self, mask: u64) -> Vec<Sign> {
        let mut signs = vec![Sign::Plus; self.graph.edge_count()];
        for (i, &e) in self.free_edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                signs[e] = Sign::Minus;
            }
        }
        signs
    }

    pub fn embedding_at(&self, index: u128) -> Embedding {
        let (mask, rot) = self.digits(index);
        let rotation = rot.iter().enumerate().map(|(v, &k)| self.orders[v][k].clone()).collect();
        Embedding::new(self.graph.clone(), rotation, self.signs_from_mask(mask))
            .expect("enumerated rotations are valid")
    }

    pub fn iter(&self) -> impl Iterator<Item = Embedding> + '_ {
        (0..self.total).map(move |i| self.embedding_at(i))
    }

    /// Cursor over raw successor/predecessor/sign arrays, starting at `start`.
    pub fn cursor(&self, start: u128) -> RawCursor<'_> {
        let (mask, rot) = self.digits(start);
        let darts = self.graph.dart_count();
        let mut c = RawCursor {
            space: self,
            index: start,
            mask,
            rot,
            succ: vec![Dart(0); darts],
            pred: vec![Dart(0); darts],
            signs: self.signs_from_mask(mask),
        };
        for v in 0..self.graph.vertex_count() {
            c.load_vertex(v);
        }
        c
    }
}

/// `prod (deg - 1)! * 2^(|E| - |V| + 1)`.
pub fn embedding_count(graph: &Graph) -> u128 {
    let rotations: u128 =
        (0..graph.vertex_count()).map(|v| (1..graph.degree(v).max(1) as u128).product::<u128>()).product();
    rotations << (graph.edge_count() + 1 - graph.vertex_count())
}

/// All embeddings of `graph` up to switching, in index order.
pub fn enumerate_embeddings(graph: &Graph, limit: u128) -> Result<impl Iterator<Item = Embedding>> {
    let space = EmbeddingSpace::new(graph, limit)?;
    Ok((0..space.count()).map(move |i| space.embedding_at(i)))
}

/// In-place walker over the embedding space.
pub struct RawCursor<'a> {
    space: &'a EmbeddingSpace,
    index: u128,
    mask: u64,
    rot: Vec<usize>,
    pub succ: Vec<Dart>,
    pub pred: Vec<Dart>,
    pub signs: Vec<Sign>,
}

impl RawCursor<'_> {
    pub fn index(&self) -> u128 {
        self.index
    }

    fn load_vertex(&mut self, v: usize) {
        let order = &self.space.orders[v][self.rot[v]];
        for (i, &d) in order.iter().enumerate() {
            let next = order[(i + 1) % order.len()];
            self.succ[d.0] = next;
            self.pred[next.0] = d;
        }
    }

    /// Moves to the next index; false once past the end.
    pub fn advance(&mut self) -> bool {
        self.index += 1;
        if self.index >= self.space.total {
            return false;
        }
        let k = self.space.free_edges.len();
        let next = self.mask + 1;
        if next >> k == 0 {
            // only signs change: flip the bits that differ
            let changed = self.mask ^ next;
            for (i, &e) in self.space.free_edges.iter().enumerate() {
                if changed >> i & 1 == 1 {
                    self.signs[e] = self.signs[e].flip();
                }
            }
            self.mask = next;
            return true;
        }
        self.mask = 0;
        for &e in &self.space.free_edges {
            self.signs[e] = Sign::Plus;
        }
        for v in 0..self.rot.len() {
            self.rot[v] += 1;
            if self.rot[v] < self.space.orders[v].len() {
                self.load_vertex(v);
                return true;
            }
            self.rot[v] = 0;
            self.load_vertex(v);
        }
        unreachable!("index bound checked above")
    }

    /// The current embedding as a full value.
    pub fn embedding(&self) -> Embedding {
        self.space.embedding_at(self.index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn barbell() -> Graph {
        build_graph(&["v", "u"], &[("v", "v"), ("u", "u"), ("v", "u")]).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(embedding_count(&barbell()), 16);
        assert_eq!(enumerate_embeddings(&barbell(), 100).unwrap().count(), 16);
        assert!(matches!(EmbeddingSpace::new(&barbell(), 10), Err(Error::Guardrail { count: 16, limit: 10 })));
    }

    #[test]
    fn cursor_matches_indexing() {
        let g = build_graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a"), ("a", "a"), ("b", "c")]).unwrap();
        let space = EmbeddingSpace::new(&g, 10_000).unwrap();
        let mut cur = space.cursor(0);
        let mut seen = 0;
        loop {
            let e = space.embedding_at(cur.index());
            for d in g.darts() {
                assert_eq!(cur.succ[d.0], e.succ(d));
                assert_eq!(cur.pred[d.0], e.pred(d));
            }
            assert_eq!(cur.signs, e.signs());
            seen += 1;
            if !cur.advance() {
                break;
            }
        }
        assert_eq!(seen as u128, space.count());
        let mid = space.cursor(37);
        assert_eq!(mid.embedding(), space.embedding_at(37));
    }

    #[test]
    fn all_distinct() {
        let space = EmbeddingSpace::new(&barbell(), 100).unwrap();
        let all: Vec<Embedding> = space.iter().collect();
        for i in 0..all.len() {
            for j in 0..i {
                assert_ne!(all[i], all[j]);
            }
        }
    }
}
