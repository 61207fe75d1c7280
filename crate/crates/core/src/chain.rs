//! GF(2) chains on a graph: 1-chains over edges, 2-chains over faces.

use std::ops::Add;

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::graph::{Dart, Graph};

/// A GF(2) combination of edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain1(BitVec);

/// A GF(2) combination of faces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain2(BitVec);

impl Chain1 {
    pub fn zero(edge_count: usize) -> Chain1 {
        Chain1(BitVec::zeros(edge_count))
    }

    pub fn from_edges(edge_count: usize, edges: impl IntoIterator<Item = usize>) -> Chain1 {
        Chain1(BitVec::from_indices(edge_count, edges))
    }

    pub fn from_bits(bits: BitVec) -> Chain1 {
        Chain1(bits)
    }

    pub fn from_names<S: AsRef<str>>(g: &Graph, names: &[S]) -> Result<Chain1> {
        let mut c = Chain1::zero(g.edge_count());
        for n in names {
            let e = g.edge_index(n.as_ref()).ok_or_else(|| Error::UnknownEdge(n.as_ref().to_string()))?;
            c.0.flip(e);
        }
        Ok(c)
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.get(e)
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn edge_count(&self) -> usize {
        self.0.count_ones()
    }

    /// Sorted edge names, the serialized form.
    pub fn names(&self, g: &Graph) -> Vec<String> {
        let mut v: Vec<String> = self.edges().map(|e| g.edge_name(e).to_string()).collect();
        v.sort();
        v
    }

    pub fn check_len(&self, g: &Graph) -> Result<()> {
        if self.len() != g.edge_count() {
            return Err(Error::ChainLength { expected: g.edge_count(), found: self.len() });
        }
        Ok(())
    }

    /// `d z = 0`: every vertex meets the chain an even number of times
    /// (a loop meets its vertex twice).
    pub fn check_cycle(&self, g: &Graph) -> Result<()> {
        self.check_len(g)?;
        let mut parity = vec![false; g.vertex_count()];
        for e in self.edges() {
            let [a, b] = g.ends(e);
            parity[a] ^= true;
            parity[b] ^= true;
        }
        match parity.iter().position(|&p| p) {
            Some(v) => Err(Error::NotACycle(g.vertex_name(v).to_string())),
            None => Ok(()),
        }
    }

    pub fn is_cycle(&self, g: &Graph) -> bool {
        self.check_cycle(g).is_ok()
    }

    /// The chain's edges as one closed dart walk, if they form a circle.
    pub fn circle_walk(&self, g: &Graph) -> Result<Vec<Dart>> {
        self.check_len(g)?;
        let edges: Vec<usize> = self.edges().collect();
        let Some(&first) = edges.first() else {
            return Err(Error::NotACircle("empty chain".into()));
        };
        let mut degree = vec![0usize; g.vertex_count()];
        for &e in &edges {
            let [a, b] = g.ends(e);
            degree[a] += 1;
            degree[b] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != 0 && d != 2) {
            return Err(Error::NotACircle(format!("vertex `{}` has degree {}", g.vertex_name(v), degree[v])));
        }
        let start = g.tail(Dart::positive(first));
        let mut walk = vec![Dart::positive(first)];
        let mut used = vec![false; g.edge_count()];
        used[first] = true;
        let mut at = g.head(Dart::positive(first));
        while at != start {
            let next = g
                .darts_at(at)
                .iter()
                .copied()
                .find(|d| self.contains(d.edge()) && !used[d.edge()])
                .ok_or_else(|| Error::NotACircle("walk got stuck".into()))?;
            used[next.edge()] = true;
            walk.push(next);
            at = g.head(next);
        }
        if walk.len() != edges.len() {
            return Err(Error::NotACircle("edges form more than one circle".into()));
        }
        Ok(walk)
    }

    pub fn is_circle(&self, g: &Graph) -> bool {
        self.circle_walk(g).is_ok()
    }

    /// Splits a cycle into edge-disjoint circles, deterministically.
    pub fn circle_decomposition(&self, g: &Graph) -> Result<Vec<Chain1>> {
        self.check_cycle(g)?;
        let mut remaining = self.clone();
        let mut circles = Vec::new();
        loop {
            let Some(e0) = remaining.edges().next() else { break };
            // walk along unused edges until a vertex repeats, then cut the loop out
            let d0 = Dart::positive(e0);
            let mut path: Vec<Dart> = vec![d0];
            let mut pos_of = vec![usize::MAX; g.vertex_count()];
            pos_of[g.tail(d0)] = 0;
            let mut at = g.head(d0);
            let mut used_edge = vec![false; g.edge_count()];
            used_edge[e0] = true;
            loop {
                if pos_of[at] != usize::MAX {
                    let circle = &path[pos_of[at]..];
                    let c = Chain1::from_edges(g.edge_count(), circle.iter().map(|d| d.edge()));
                    remaining = &remaining + &c;
                    circles.push(c);
                    break;
                }
                pos_of[at] = path.len();
                let next = g
                    .darts_at(at)
                    .iter()
                    .copied()
                    .find(|d| remaining.contains(d.edge()) && !used_edge[d.edge()])
                    .expect("even-degree chain always continues");
                used_edge[next.edge()] = true;
                path.push(next);
                at = g.head(next);
            }
        }
        Ok(circles)
    }
}

impl Add for &Chain1 {
    type Output = Chain1;
    fn add(self, rhs: &Chain1) -> Chain1 {
        let mut bits = self.0.clone();
        bits.xor_assign(&rhs.0);
        Chain1(bits)
    }
}

impl Add for Chain1 {
    type Output = Chain1;
    fn add(self, rhs: Chain1) -> Chain1 {
        &self + &rhs
    }
}

impl Chain2 {
    pub fn from_faces(face_count: usize, faces: impl IntoIterator<Item = usize>) -> Chain2 {
        Chain2(BitVec::from_indices(face_count, faces))
    }

    pub fn bits(&self) -> &BitVec {
        &self.0
    }

    pub fn faces(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
