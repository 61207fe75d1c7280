//! Finite multigraphs stored as dart structures.
//!
//! Edge `e` owns the two darts `2e` (positive) and `2e + 1` (negative). The
//! positive dart leaves the first listed endpoint. Loops are ordinary edges
//! whose two darts share a tail.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A directed edge. `Dart(2e)` is the positive dart of edge `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(pub usize);

impl Dart {
    #[inline]
    pub fn positive(edge: usize) -> Dart {
        Dart(2 * edge)
    }

    #[inline]
    pub fn negative(edge: usize) -> Dart {
        Dart(2 * edge + 1)
    }

    #[inline]
    pub fn edge(self) -> usize {
        self.0 >> 1
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    #[inline]
    pub fn opposite(self) -> Dart {
        Dart(self.0 ^ 1)
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_positive() { '+' } else { '-' };
        write!(f, "{}{}", self.edge(), sign)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    /// `ends[e] = [tail of e+, head of e+]`
    ends: Vec<[usize; 2]>,
    /// Darts with tail `v`, in increasing dart order.
    incidence: Vec<Vec<Dart>>,
}

/// Builds a connected graph; edges are named `e0, e1, ...` in input order.
pub fn build_graph<S: AsRef<str>>(vertex_ids: &[S], edge_spec: &[(S, S)]) -> Result<Graph> {
    let vertices: Vec<String> = vertex_ids.iter().map(|v| v.as_ref().to_string()).collect();
    let index = name_index(&vertices)?;
    let mut edges = Vec::with_capacity(edge_spec.len());
    for (i, (a, b)) in edge_spec.iter().enumerate() {
        let lookup = |s: &S| index.get(s.as_ref()).copied().ok_or_else(|| Error::UnknownVertex(s.as_ref().to_string()));
        edges.push((format!("e{i}"), [lookup(a)?, lookup(b)?]));
    }
    Graph::new(vertices, edges)
}

fn name_index(names: &[String]) -> Result<HashMap<&str, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(Error::DuplicateId(name.clone()));
        }
    }
    Ok(index)
}

impl Graph {
    /// Builds a graph and rejects it unless it is connected.
    pub fn new(vertices: Vec<String>, edges: Vec<(String, [usize; 2])>) -> Result<Graph> {
        let g = Graph::new_unchecked_connectivity(vertices, edges)?;
        let components = g.component_count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(g)
    }

    /// Like [`Graph::new`] but allows several components. Derived graphs of
    /// voltage graphs may legitimately be disconnected.
    pub fn new_unchecked_connectivity(vertices: Vec<String>, edges: Vec<(String, [usize; 2])>) -> Result<Graph> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        name_index(&vertices)?;
        let (edge_names, ends): (Vec<String>, Vec<[usize; 2]>) = edges.into_iter().unzip();
        name_index(&edge_names)?;
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (e, &[t, h]) in ends.iter().enumerate() {
            for v in [t, h] {
                if v >= vertices.len() {
                    return Err(Error::UnknownVertex(format!("#{v}")));
                }
            }
            incidence[t].push(Dart::positive(e));
            incidence[h].push(Dart::negative(e));
        }
        Ok(Graph { vertex_names: vertices, edge_names, ends, incidence })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.ends.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.dart_count()).map(Dart)
    }

    #[inline]
    pub fn tail(&self, d: Dart) -> usize {
        self.ends[d.edge()][d.0 & 1]
    }

    #[inline]
    pub fn head(&self, d: Dart) -> usize {
        self.ends[d.edge()][1 - (d.0 & 1)]
    }

    pub fn ends(&self, edge: usize) -> [usize; 2] {
        self.ends[edge]
    }

    pub fn is_loop(&self, edge: usize) -> bool {
        self.ends[edge][0] == self.ends[edge][1]
    }

    pub fn darts_at(&self, v: usize) -> &[Dart] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edge_names[e]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    /// Dart token in the fixture notation, e.g. `e3-`.
    pub fn dart_token(&self, d: Dart) -> String {
        let sign = if d.is_positive() { '+' } else { '-' };
        format!("{}{}", self.edge_names[d.edge()], sign)
    }

    pub fn parse_dart(&self, token: &str) -> Result<Dart> {
        let (name, positive) = match token.strip_suffix('+') {
            Some(n) => (n, true),
            None => match token.strip_suffix('-') {
                Some(n) => (n, false),
                None => return Err(Error::Format(format!("dart token `{token}` lacks +/- suffix"))),
            },
        };
        let e = self.edge_index(name).ok_or_else(|| Error::UnknownEdge(name.to_string()))?;
        Ok(if positive { Dart::positive(e) } else { Dart::negative(e) })
    }

    /// Component label of every vertex, labels numbered by first appearance.
    pub fn component_labels(&self) -> (usize, Vec<usize>) {
        self.component_labels_of(|_| true)
    }

    /// Components of the spanning subgraph keeping only edges accepted by `keep`.
    pub fn component_labels_of(&self, keep: impl Fn(usize) -> bool) -> (usize, Vec<usize>) {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &d in &self.incidence[v] {
                    if !keep(d.edge()) {
                        continue;
                    }
                    let w = self.head(d);
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().0
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Breadth-first spanning tree from vertex 0, as a per-edge membership mask.
    pub fn bfs_spanning_tree(&self) -> Vec<bool> {
        let mut in_tree = vec![false; self.edge_count()];
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &d in &self.incidence[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    in_tree[d.edge()] = true;
                    queue.push_back(w);
                }
            }
        }
        in_tree
    }

    /// Number of edges between `a` and `b` (loops at `a` count once each).
    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        self.incidence[a]
            .iter()
            .filter(|&&d| d.is_positive() || !self.is_loop(d.edge()))
            .filter(|&&d| self.head(d) == b)
            .count()
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.incidence[v].iter().filter(|d| d.is_positive() && self.is_loop(d.edge())).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_loop_graph() {
        let g = build_graph(&["v"], &[("v", "v")]).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.dart_count(), 2);
        assert!(g.is_loop(0));
        assert_eq!(g.darts_at(0), &[Dart(0), Dart(1)]);
    }

    #[test]
    fn barbell() {
        let g = build_graph(&["v", "u"], &[("v", "v"), ("u", "u"), ("v", "u")]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.tail(Dart::positive(2)), 0);
        assert_eq!(g.head(Dart::positive(2)), 1);
        assert_eq!(g.loop_count(1), 1);
    }

    #[test]
    fn rejects_disconnected_and_unknown() {
        let e: &[(&str, &str)] = &[];
        assert!(matches!(build_graph(&["v", "u"], e), Err(Error::Disconnected { components: 2 })));
        assert!(matches!(build_graph(&["v"], &[("v", "w")]), Err(Error::UnknownVertex(_))));
        let none: &[&str] = &[];
        assert!(matches!(build_graph(none, e), Err(Error::EmptyGraph)));
    }

    #[test]
    fn dart_tokens_round_trip() {
        let g = build_graph(&["a", "b"], &[("a", "b"), ("b", "b")]).unwrap();
        for d in g.darts() {
            assert_eq!(g.parse_dart(&g.dart_token(d)).unwrap(), d);
        }
        assert!(g.parse_dart("e0").is_err());
        assert!(g.parse_dart("x+").is_err());
    }
}
