//! Cellular embeddings as signed rotation systems.
//!
//! Each vertex carries a cyclic order of the darts leaving it, and each edge
//! a sign; a negative edge is one whose band is twisted. Faces are traced with
//! a two-sided walk so no global orientation is ever needed.

use std::collections::VecDeque;
use std::ops::Mul;

use crate::chain::Chain1;
use crate::error::{Error, Result};
use crate::graph::{Dart, Graph};
use crate::surface::SurfaceClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_i64(x: i64) -> Result<Sign> {
        match x {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Format(format!("sign must be +1 or -1, got {x}"))),
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// One face: the darts of its boundary walk, each with the local side
/// (rotation direction) in force when the dart was taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub boundary: Vec<(Dart, Sign)>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.boundary.iter().map(|&(d, _)| d)
    }

    /// Tail vertices of the boundary darts, in walk order.
    pub fn vertex_walk(&self, g: &Graph) -> Vec<usize> {
        self.darts().map(|d| g.tail(d)).collect()
    }

    /// Edges occurring an odd number of times: the face boundary over GF(2).
    pub fn boundary_chain(&self, edge_count: usize) -> Chain1 {
        Chain1::from_edges(edge_count, self.darts().map(|d| d.edge()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    graph: Graph,
    rotation: Vec<Vec<Dart>>,
    signs: Vec<Sign>,
    succ: Vec<Dart>,
    pred: Vec<Dart>,
}

impl Embedding {
    pub fn new(graph: Graph, rotation: Vec<Vec<Dart>>, signs: Vec<Sign>) -> Result<Embedding> {
        if rotation.len() != graph.vertex_count() {
            return Err(Error::InvalidRotation(format!(
                "{} rotations for {} vertices",
                rotation.len(),
                graph.vertex_count()
            )));
        }
        if signs.len() != graph.edge_count() {
            return Err(Error::InvalidRotation(format!("{} signs for {} edges", signs.len(), graph.edge_count())));
        }
        let mut succ = vec![Dart(usize::MAX); graph.dart_count()];
        let mut pred = vec![Dart(usize::MAX); graph.dart_count()];
        for (v, rot) in rotation.iter().enumerate() {
            let mut mine = rot.clone();
            mine.sort_unstable();
            if mine != graph.darts_at(v) {
                return Err(Error::InvalidRotation(format!(
                    "rotation at `{}` is not a permutation of its darts",
                    graph.vertex_name(v)
                )));
            }
            for (i, &d) in rot.iter().enumerate() {
                let next = rot[(i + 1) % rot.len()];
                succ[d.0] = next;
                pred[next.0] = d;
            }
        }
        Ok(Embedding { graph, rotation, signs, succ, pred })
    }

    /// Every vertex takes its darts in increasing order and all signs are +1.
    pub fn default_for(graph: Graph) -> Embedding {
        let rotation = (0..graph.vertex_count()).map(|v| graph.darts_at(v).to_vec()).collect();
        let signs = vec![Sign::Plus; graph.edge_count()];
        Embedding::new(graph, rotation, signs).expect("incidence order is a valid rotation")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotation
    }

    pub fn sign(&self, edge: usize) -> Sign {
        self.signs[edge]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    #[inline]
    pub fn succ(&self, d: Dart) -> Dart {
        self.succ[d.0]
    }

    #[inline]
    pub fn pred(&self, d: Dart) -> Dart {
        self.pred[d.0]
    }

    /// Position of `d` in the rotation at its tail.
    pub fn position(&self, d: Dart) -> usize {
        let v = self.graph.tail(d);
        self.rotation[v].iter().position(|&x| x == d).expect("dart is in its tail rotation")
    }

    /// One step of the face walk: having taken `d` with side `s`, the next
    /// dart and side.
    #[inline]
    pub fn face_step(&self, d: Dart, s: Sign) -> (Dart, Sign) {
        let s = s * self.signs[d.edge()];
        let back = d.opposite();
        let next = match s {
            Sign::Plus => self.succ[back.0],
            Sign::Minus => self.pred[back.0],
        };
        (next, s)
    }

    /// Traces every face. Each face is reported once, in one of its two
    /// traversal directions; face lengths sum to `2|E|`.
    pub fn trace_faces(&self) -> Vec<Face> {
        let darts = self.graph.dart_count();
        let state = |d: Dart, s: Sign| 2 * d.0 + s.is_negative() as usize;
        let mut seen = vec![false; 2 * darts];
        let mut faces = Vec::new();
        for d0 in self.graph.darts() {
            for s0 in [Sign::Plus, Sign::Minus] {
                if seen[state(d0, s0)] {
                    continue;
                }
                let mut boundary = Vec::new();
                let (mut d, mut s) = (d0, s0);
                loop {
                    seen[state(d, s)] = true;
                    boundary.push((d, s));
                    (d, s) = self.face_step(d, s);
                    if (d, s) == (d0, s0) {
                        break;
                    }
                }
                // the reverse traversal is the same face
                for &(d, s) in &boundary {
                    let r = state(d.opposite(), (s * self.signs[d.edge()]).flip());
                    debug_assert!(!seen[r], "face met its own reverse");
                    seen[r] = true;
                }
                faces.push(Face { boundary });
            }
        }
        faces
    }

    pub fn face_count(&self) -> usize {
        self.trace_faces().len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.graph.vertex_count() as i64 - self.graph.edge_count() as i64 + self.face_count() as i64
    }

    /// A vertex switching (per-vertex sign) making every edge positive, if
    /// one exists. Computed on a BFS forest; non-tree edges are then checked.
    pub fn balancing_switch(&self) -> Option<Vec<Sign>> {
        let g = &self.graph;
        let mut pot: Vec<Option<Sign>> = vec![None; g.vertex_count()];
        for root in 0..g.vertex_count() {
            if pot[root].is_some() {
                continue;
            }
            pot[root] = Some(Sign::Plus);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                let pv = pot[v].unwrap();
                for &d in g.darts_at(v) {
                    let w = g.head(d);
                    let want = pv * self.signs[d.edge()];
                    match pot[w] {
                        None => {
                            pot[w] = Some(want);
                            queue.push_back(w);
                        }
                        Some(pw) if pw != want => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(pot.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_orientable(&self) -> bool {
        self.balancing_switch().is_some()
    }

    pub fn classify_surface(&self) -> Result<SurfaceClass> {
        let components = self.graph.component_count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        SurfaceClass::new(self.is_orientable(), self.euler_characteristic())
    }

    /// Reverses the rotation at `v` and flips the sign of every non-loop edge
    /// at `v`. The surface and its faces are unchanged.
    pub fn switch_vertex(&self, v: usize) -> Embedding {
        let mut rotation = self.rotation.clone();
        rotation[v].reverse();
        let mut signs = self.signs.clone();
        for &d in self.graph.darts_at(v) {
            if !self.graph.is_loop(d.edge()) {
                signs[d.edge()] = signs[d.edge()].flip();
            }
        }
        Embedding::new(self.graph.clone(), rotation, signs).expect("switching keeps validity")
    }

    /// Reverses every rotation (mirror image).
    pub fn reflect(&self) -> Embedding {
        let rotation = self.rotation.iter().map(|r| r.iter().rev().copied().collect()).collect();
        Embedding::new(self.graph.clone(), rotation, self.signs.clone()).expect("reflection keeps validity")
    }

    /// For an orientable embedding, the switching-equivalent embedding with
    /// every sign positive.
    pub fn with_positive_signs(&self) -> Result<Embedding> {
        let pot = self.balancing_switch().ok_or_else(|| Error::Precondition("embedding is nonorientable".into()))?;
        let mut e = self.clone();
        for (v, s) in pot.iter().enumerate() {
            if s.is_negative() {
                e = e.switch_vertex(v);
            }
        }
        debug_assert!(e.signs.iter().all(|s| !s.is_negative()));
        Ok(e)
    }

    /// Whether the circle induced by `z` has a Möbius-band neighbourhood:
    /// it carries an odd number of negative edges.
    pub fn is_orientation_reversing_cycle(&self, z: &Chain1) -> Result<bool> {
        z.circle_walk(&self.graph)?;
        Ok(self.negative_parity(z))
    }

    /// Parity of negative edges in a chain.
    pub fn negative_parity(&self, z: &Chain1) -> bool {
        z.edges().filter(|&e| self.signs[e].is_negative()).count() % 2 == 1
    }

    /// Same embedding with new vertex and edge names.
    pub fn renamed(&self, vertex_names: Vec<String>, edge_names: Vec<String>) -> Result<Embedding> {
        let g = &self.graph;
        if edge_names.len() != g.edge_count() {
            return Err(Error::Format("wrong number of edge names".into()));
        }
        let edges = edge_names.into_iter().enumerate().map(|(e, name)| (name, g.ends(e))).collect();
        let graph = Graph::new_unchecked_connectivity(vertex_names, edges)?;
        if graph.vertex_count() != g.vertex_count() {
            return Err(Error::Format("wrong number of vertex names".into()));
        }
        Embedding::new(graph, self.rotation.clone(), self.signs.clone())
    }

    /// Embedding on the same vertex set without `edge`; edges above it shift down.
    pub fn delete_edge(&self, edge: usize) -> Result<Embedding> {
        let g = &self.graph;
        let names = g.vertex_names().to_vec();
        let edges: Vec<(String, [usize; 2])> =
            (0..g.edge_count()).filter(|&e| e != edge).map(|e| (g.edge_name(e).to_string(), g.ends(e))).collect();
        let graph = Graph::new(names, edges)?;
        let renumber = |d: Dart| {
            let e = d.edge();
            let e2 = if e > edge { e - 1 } else { e };
            Dart(2 * e2 + (d.0 & 1))
        };
        let rotation = self
            .rotation
            .iter()
            .map(|r| r.iter().filter(|d| d.edge() != edge).map(|&d| renumber(d)).collect())
            .collect();
        let signs = (0..g.edge_count()).filter(|&e| e != edge).map(|e| self.signs[e]).collect();
        Embedding::new(graph, rotation, signs)
    }

    /// Adds a new edge from `tail` to `head`. Its positive dart is placed
    /// right after `after_tail` in the rotation at `tail`, its negative dart
    /// right after `after_head` at `head` (`None` for an isolated end).
    pub fn insert_edge(
        &self,
        name: &str,
        tail: usize,
        after_tail: Option<Dart>,
        head: usize,
        after_head: Option<Dart>,
        sign: Sign,
    ) -> Result<Embedding> {
        let g = &self.graph;
        let mut edges: Vec<(String, [usize; 2])> =
            (0..g.edge_count()).map(|e| (g.edge_name(e).to_string(), g.ends(e))).collect();
        let new_edge = edges.len();
        edges.push((name.to_string(), [tail, head]));
        let graph = Graph::new(g.vertex_names().to_vec(), edges)?;
        let mut rotation = self.rotation.clone();
        let place = |rot: &mut Vec<Dart>, after: Option<Dart>, d: Dart| -> Result<()> {
            match after {
                Some(a) => {
                    let i = rot
                        .iter()
                        .position(|&x| x == a)
                        .ok_or_else(|| Error::InvalidRotation(format!("dart {a} not at this vertex")))?;
                    rot.insert(i + 1, d);
                }
                None => rot.push(d),
            }
            Ok(())
        };
        place(&mut rotation[tail], after_tail, Dart::positive(new_edge))?;
        let after_head =
            if tail == head && after_head == after_tail { Some(Dart::positive(new_edge)) } else { after_head };
        place(&mut rotation[head], after_head, Dart::negative(new_edge))?;
        let mut signs = self.signs.clone();
        signs.push(sign);
        Embedding::new(graph, rotation, signs)
    }
}

/// Free-function forms of the core operations.
pub fn trace_faces(emb: &Embedding) -> Vec<Face> {
    emb.trace_faces()
}

pub fn euler_characteristic(emb: &Embedding) -> i64 {
    emb.euler_characteristic()
}

pub fn is_orientable(emb: &Embedding) -> bool {
    emb.is_orientable()
}

pub fn classify_surface(emb: &Embedding) -> Result<SurfaceClass> {
    emb.classify_surface()
}

pub fn switch_vertex(emb: &Embedding, v: usize) -> Embedding {
    emb.switch_vertex(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn one_loop(sign: Sign) -> Embedding {
        let g = build_graph(&["v"], &[("v", "v")]).unwrap();
        Embedding::new(g, vec![vec![Dart(0), Dart(1)]], vec![sign]).unwrap()
    }

    pub(crate) fn torus_bouquet() -> Embedding {
        let g = build_graph(&["v"], &[("v", "v"), ("v", "v")]).unwrap();
        // a+ b+ a- b-
        let rot = vec![vec![Dart(0), Dart(2), Dart(1), Dart(3)]];
        Embedding::new(g, rot, vec![Sign::Plus; 2]).unwrap()
    }

    #[test]
    fn sphere_loop() {
        let e = one_loop(Sign::Plus);
        let faces = e.trace_faces();
        assert_eq!(faces.len(), 2);
        assert_eq!(e.euler_characteristic(), 2);
        assert_eq!(e.classify_surface().unwrap(), SurfaceClass::SPHERE);
    }

    #[test]
    fn torus_polygon() {
        let e = torus_bouquet();
        let faces = e.trace_faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 4);
        assert_eq!(e.euler_characteristic(), 0);
        assert_eq!(e.classify_surface().unwrap(), SurfaceClass::TORUS);
    }

    #[test]
    fn projective_plane_loop() {
        let e = one_loop(Sign::Minus);
        assert_eq!(e.trace_faces().len(), 1);
        assert_eq!(e.euler_characteristic(), 1);
        assert!(!e.is_orientable());
        assert_eq!(e.classify_surface().unwrap(), SurfaceClass::PROJECTIVE_PLANE);
    }

    #[test]
    fn klein_bottle_bouquet() {
        // a+ a- b+ b- with both loops twisted: one face, chi = 0, nonorientable
        let g = build_graph(&["v"], &[("v", "v"), ("v", "v")]).unwrap();
        let rot = vec![vec![Dart(0), Dart(1), Dart(2), Dart(3)]];
        let e = Embedding::new(g, rot, vec![Sign::Minus; 2]).unwrap();
        assert_eq!(e.classify_surface().unwrap(), SurfaceClass::KLEIN_BOTTLE);
    }

    #[test]
    fn negative_link_is_switchable() {
        let g = build_graph(&["a", "b"], &[("a", "b")]).unwrap();
        let e = Embedding::new(g, vec![vec![Dart(0)], vec![Dart(1)]], vec![Sign::Minus]).unwrap();
        assert!(e.is_orientable());
        let s = e.switch_vertex(0);
        assert_eq!(s.signs(), &[Sign::Plus]);
        assert_eq!(s.euler_characteristic(), e.euler_characteristic());
        assert_eq!(s.switch_vertex(0), e);
    }

    #[test]
    fn face_lengths_sum_to_twice_edges() {
        let e = torus_bouquet();
        let total: usize = e.trace_faces().iter().map(Face::len).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn rejects_bad_rotation() {
        let g = build_graph(&["v"], &[("v", "v")]).unwrap();
        assert!(Embedding::new(g.clone(), vec![vec![Dart(0)]], vec![Sign::Plus]).is_err());
        assert!(Embedding::new(g.clone(), vec![vec![Dart(0), Dart(0)]], vec![Sign::Plus]).is_err());
        assert!(Embedding::new(g, vec![vec![Dart(0), Dart(1)]], vec![]).is_err());
    }

    #[test]
    fn orientation_reversing_circles() {
        let g = build_graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let rot = (0..3).map(|v| g.darts_at(v).to_vec()).collect::<Vec<_>>();
        let tri = Chain1::from_edges(3, [0, 1, 2]);
        let two_neg = Embedding::new(g.clone(), rot.clone(), vec![Sign::Minus, Sign::Minus, Sign::Plus]).unwrap();
        assert!(!two_neg.is_orientation_reversing_cycle(&tri).unwrap());
        let plus = Embedding::new(g.clone(), rot.clone(), vec![Sign::Plus; 3]).unwrap();
        assert!(!plus.is_orientation_reversing_cycle(&tri).unwrap());
        let one_neg = Embedding::new(g, rot, vec![Sign::Minus, Sign::Plus, Sign::Plus]).unwrap();
        assert!(one_neg.is_orientation_reversing_cycle(&tri).unwrap());
        assert!(one_neg.is_orientation_reversing_cycle(&Chain1::from_edges(3, [0])).is_err());
        assert!(one_loop(Sign::Minus).is_orientation_reversing_cycle(&Chain1::from_edges(1, [0])).unwrap());
    }

    #[test]
    fn delete_and_insert_edge() {
        let e = torus_bouquet();
        let d = e.delete_edge(1).unwrap();
        assert_eq!(d.classify_surface().unwrap(), SurfaceClass::SPHERE);
        let back = d.insert_edge("e1", 0, Some(Dart(0)), 0, Some(Dart(1)), Sign::Plus).unwrap();
        assert_eq!(back.rotation(0), e.rotation(0));
        assert_eq!(back.classify_surface().unwrap(), SurfaceClass::TORUS);
    }
}
