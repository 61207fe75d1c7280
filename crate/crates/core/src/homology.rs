//! The GF(2) chain complex of an embedding: cycle space, boundary space
//! and first homology, with direct rank-based decisions.

use std::collections::VecDeque;

use crate::chain::Chain1;
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, EchelonBasis, Gf2Matrix};
use crate::graph::Graph;

/// Fundamental cycles of `tree` (an edge membership mask): one per non-tree
/// edge, in edge order.
pub fn fundamental_cycles(graph: &Graph, tree: &[bool]) -> Result<Vec<Chain1>> {
    let (parent, depth) = tree_structure(graph, tree)?;
    let m = graph.edge_count();
    let mut cycles = Vec::new();
    for e in (0..m).filter(|&e| !tree[e]) {
        let [mut a, mut b] = graph.ends(e);
        let mut bits = BitVec::from_indices(m, [e]);
        while a != b {
            if depth[a] >= depth[b] {
                let (pe, pv) = parent[a].unwrap();
                bits.flip(pe);
                a = pv;
            } else {
                let (pe, pv) = parent[b].unwrap();
                bits.flip(pe);
                b = pv;
            }
        }
        cycles.push(Chain1::from_bits(bits));
    }
    Ok(cycles)
}

/// Validates a spanning tree, returning (parent edge, parent vertex) and depth per vertex.
#[allow(clippy::type_complexity)]
fn tree_structure(graph: &Graph, tree: &[bool]) -> Result<(Vec<Option<(usize, usize)>>, Vec<usize>)> {
    let n = graph.vertex_count();
    if tree.len() != graph.edge_count() {
        return Err(Error::NotASpanningTree(format!(
            "mask has {} entries for {} edges",
            tree.len(),
            graph.edge_count()
        )));
    }
    let size = tree.iter().filter(|&&t| t).count();
    if size + 1 != n {
        return Err(Error::NotASpanningTree(format!("{size} edges for {n} vertices")));
    }
    let mut parent = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &d in graph.darts_at(v) {
            let e = d.edge();
            if !tree[e] {
                continue;
            }
            if graph.is_loop(e) {
                return Err(Error::NotASpanningTree(format!("loop `{}`", graph.edge_name(e))));
            }
            let w = graph.head(d);
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some((e, v));
                queue.push_back(w);
            }
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(Error::NotASpanningTree("tree does not reach every vertex".into()));
    }
    Ok((parent, depth))
}

/// Fundamental cycles of the BFS spanning tree: a basis of Z(G).
pub fn cycle_basis(graph: &Graph) -> Vec<Chain1> {
    fundamental_cycles(graph, &graph.bfs_spanning_tree()).expect("BFS tree is a spanning tree")
}

pub fn cycle_space_dim(graph: &Graph) -> usize {
    graph.edge_count() + graph.component_count() - graph.vertex_count()
}

/// One row per face: the edges it meets an odd number of times.
pub fn boundary_space(emb: &Embedding) -> Gf2Matrix {
    let m = emb.graph().edge_count();
    let rows = emb.trace_faces().iter().map(|f| f.boundary_chain(m).bits().clone()).collect();
    Gf2Matrix::from_rows(m, rows)
}

/// Precomputed boundary space for repeated queries against one embedding.
#[derive(Clone, Debug)]
pub struct Homology<'a> {
    emb: &'a Embedding,
    boundaries: EchelonBasis,
    face_rows: Gf2Matrix,
}

impl<'a> Homology<'a> {
    pub fn new(emb: &'a Embedding) -> Homology<'a> {
        let face_rows = boundary_space(emb);
        let mut boundaries = EchelonBasis::new(emb.graph().edge_count());
        for r in face_rows.rows() {
            boundaries.insert(r);
        }
        Homology { emb, boundaries, face_rows }
    }

    pub fn embedding(&self) -> &Embedding {
        self.emb
    }

    pub fn face_boundaries(&self) -> Vec<Chain1> {
        self.face_rows.rows().iter().cloned().map(Chain1::from_bits).collect()
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundaries.rank()
    }

    pub fn betti1(&self) -> usize {
        cycle_space_dim(self.emb.graph()) - self.boundaries.rank()
    }

    pub fn is_trivial(&self, z: &Chain1) -> Result<bool> {
        z.check_cycle(self.emb.graph())?;
        Ok(self.boundaries.contains(z.bits()))
    }

    pub fn are_homologous(&self, z1: &Chain1, z2: &Chain1) -> Result<bool> {
        z1.check_cycle(self.emb.graph())?;
        self.is_trivial(&(z1 + z2))
    }

    /// No nontrivial combination of `xs` is a boundary.
    pub fn independent(&self, xs: &[Chain1]) -> Result<bool> {
        let mut basis = self.boundaries.clone();
        for x in xs {
            x.check_cycle(self.emb.graph())?;
            if !basis.insert(x.bits()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Fundamental cycles whose classes form a basis of H1.
    pub fn h1_basis(&self) -> Vec<Chain1> {
        let mut basis = self.boundaries.clone();
        cycle_basis(self.emb.graph()).into_iter().filter(|z| basis.insert(z.bits())).collect()
    }
}

pub fn is_homologically_trivial(emb: &Embedding, z: &Chain1) -> Result<bool> {
    Homology::new(emb).is_trivial(z)
}

pub fn are_homologous(emb: &Embedding, z1: &Chain1, z2: &Chain1) -> Result<bool> {
    Homology::new(emb).are_homologous(z1, z2)
}

pub fn betti1(emb: &Embedding) -> usize {
    Homology::new(emb).betti1()
}

/// Rank test: `rank [X; B] == rank B + |X|`.
pub fn independent_direct(emb: &Embedding, xs: &[Chain1]) -> Result<bool> {
    let b = boundary_space(emb);
    let mut stacked = b.clone();
    for x in xs {
        x.check_cycle(emb.graph())?;
        stacked.push_row(x.bits().clone());
    }
    Ok(stacked.rank() == b.rank() + xs.len())
}
