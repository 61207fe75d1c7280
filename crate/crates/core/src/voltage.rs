//! Ordinary voltage graphs and their derived graphs and embeddings.
//!
//! Conventions: derived vertex `(v, a)` has index `v * |A| + a`, derived
//! edge `(e, a)` has index `e * |A| + a` and runs from `(tail e, a)` to
//! `(head e, a·α(e))`. The group acts on the left, `c·(v, a) = (v, ca)`.

use std::collections::VecDeque;

use crate::chain::Chain1;
use crate::embedding::{Embedding, Face, Sign};
use crate::error::{Error, Result};
use crate::graph::{Dart, Graph};
use crate::group::{FiniteGroup, GroupElement, Subgroup};
use crate::homology::cycle_basis;
use crate::iso::{graph_isomorphic, is_isomorphism};

/// A graph with voltages on its positive darts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoltageGraph {
    graph: Graph,
    group: FiniteGroup,
    alpha: Vec<GroupElement>,
}

/// A voltage graph whose base graph is cellularly embedded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoltageEmbedding {
    base: Embedding,
    vg: VoltageGraph,
}

/// A lifted walk: where it starts, its darts in the derived graph, and
/// the group element at which it ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkLift {
    pub start: (usize, GroupElement),
    pub darts: Vec<Dart>,
    pub net_voltage: GroupElement,
    pub end: (usize, GroupElement),
}

impl VoltageGraph {
    /// `alpha[e]` is the voltage on the positive dart of `e`.
    pub fn new(graph: Graph, group: FiniteGroup, alpha: Vec<GroupElement>) -> Result<VoltageGraph> {
        if alpha.len() != graph.edge_count() {
            return Err(Error::InvalidVoltage(format!("{} voltages for {} edges", alpha.len(), graph.edge_count())));
        }
        for &a in &alpha {
            group.element(a.0)?;
        }
        Ok(VoltageGraph { graph, group, alpha })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn voltages(&self) -> &[GroupElement] {
        &self.alpha
    }

    #[inline]
    pub fn voltage(&self, d: Dart) -> GroupElement {
        let a = self.alpha[d.edge()];
        if d.is_positive() {
            a
        } else {
            self.group.inv(a)
        }
    }

    fn n(&self) -> usize {
        self.group.order()
    }

    pub fn derived_vertex(&self, v: usize, a: GroupElement) -> usize {
        v * self.n() + a.0
    }

    pub fn derived_vertex_label(&self, x: usize) -> (usize, GroupElement) {
        (x / self.n(), GroupElement(x % self.n()))
    }

    /// The lift of base dart `d` starting in sheet `a`.
    #[inline]
    pub fn derived_dart(&self, d: Dart, a: GroupElement) -> Dart {
        let n = self.n();
        let e = d.edge();
        if d.is_positive() {
            Dart::positive(e * n + a.0)
        } else {
            // the negative dart of (e, b) starts at (head e, b·α(e))
            Dart::negative(e * n + self.group.op(a, self.voltage(d)).0)
        }
    }

    /// Projection of a derived dart: base dart and starting sheet.
    pub fn project_dart(&self, d: Dart) -> (Dart, GroupElement) {
        let n = self.n();
        let e = d.edge() / n;
        let b = GroupElement(d.edge() % n);
        if d.is_positive() {
            (Dart::positive(e), b)
        } else {
            (Dart::negative(e), self.group.op(b, self.alpha[e]))
        }
    }

    pub fn derived_graph(&self) -> Graph {
        let g = &self.graph;
        let grp = &self.group;
        let n = self.n();
        let vertices = (0..g.vertex_count())
            .flat_map(|v| grp.elements().map(move |a| (v, a)))
            .map(|(v, a)| format!("{}^{}", g.vertex_name(v), a))
            .collect();
        let mut edges = Vec::with_capacity(g.edge_count() * n);
        for e in 0..g.edge_count() {
            let [t, h] = g.ends(e);
            for a in grp.elements() {
                let b = grp.op(a, self.alpha[e]);
                edges.push((format!("{}^{}", g.edge_name(e), a), [t * n + a.0, h * n + b.0]));
            }
        }
        Graph::new_unchecked_connectivity(vertices, edges).expect("derived labels are distinct")
    }

    pub fn net_voltage(&self, walk: &[Dart]) -> Result<GroupElement> {
        check_walk(&self.graph, walk)?;
        Ok(self.net_voltage_unchecked(walk))
    }

    fn net_voltage_unchecked(&self, walk: &[Dart]) -> GroupElement {
        walk.iter().fold(self.group.identity(), |acc, &d| self.group.op(acc, self.voltage(d)))
    }

    /// Lift of `walk` (which starts at `v`) beginning in sheet `a`.
    pub fn lift_walk(&self, v: usize, walk: &[Dart], a: GroupElement) -> Result<WalkLift> {
        check_walk(&self.graph, walk)?;
        if let Some(d) = walk.first() {
            if self.graph.tail(*d) != v {
                return Err(Error::InvalidWalk(format!("walk does not start at `{}`", self.graph.vertex_name(v))));
            }
        }
        self.group.element(a.0)?;
        let mut at = a;
        let mut darts = Vec::with_capacity(walk.len());
        for &d in walk {
            darts.push(self.derived_dart(d, at));
            at = self.group.op(at, self.voltage(d));
        }
        let end_vertex = walk.last().map_or(v, |&d| self.graph.head(d));
        Ok(WalkLift { start: (v, a), darts, net_voltage: self.net_voltage_unchecked(walk), end: (end_vertex, at) })
    }

    /// Partition of the sheets into sets of consecutive lifts of a closed
    /// walk, found by following lifts end to start.
    pub fn consecutive_lift_sets(&self, v: usize, walk: &[Dart]) -> Result<Vec<Vec<GroupElement>>> {
        let sheets: Vec<GroupElement> = self.group.elements().collect();
        self.consecutive_lift_sets_among(v, walk, &sheets)
    }

    fn consecutive_lift_sets_among(
        &self,
        v: usize,
        walk: &[Dart],
        sheets: &[GroupElement],
    ) -> Result<Vec<Vec<GroupElement>>> {
        check_closed_walk_at(&self.graph, v, walk)?;
        let mut assigned = vec![false; self.n()];
        let mut sets = Vec::new();
        for &a in sheets {
            if assigned[a.0] {
                continue;
            }
            let mut set = Vec::new();
            let mut b = a;
            while !assigned[b.0] {
                assigned[b.0] = true;
                set.push(b);
                let lift = self.lift_walk(v, walk, b)?;
                debug_assert_eq!(lift.end.0, v);
                b = lift.end.1;
            }
            if b != a {
                return Err(Error::Inconsistent("lifts of a closed walk do not chain".into()));
            }
            set.sort();
            sets.push(set);
        }
        Ok(sets)
    }

    /// Net voltages of fundamental closed walks at `v` of the subgraph
    /// spanned by `keep`, which must be connected and contain `v`.
    fn fundamental_voltages(&self, v: usize, keep: &[bool]) -> Result<Vec<GroupElement>> {
        let g = &self.graph;
        let grp = &self.group;
        let mut pot: Vec<Option<GroupElement>> = vec![None; g.vertex_count()];
        pot[v] = Some(grp.identity());
        let mut tree = vec![false; g.edge_count()];
        let mut queue = VecDeque::from([v]);
        while let Some(w) = queue.pop_front() {
            for &d in g.darts_at(w) {
                if !keep[d.edge()] {
                    continue;
                }
                let h = g.head(d);
                if pot[h].is_none() {
                    pot[h] = Some(grp.op(pot[w].unwrap(), self.voltage(d)));
                    tree[d.edge()] = true;
                    queue.push_back(h);
                }
            }
        }
        let touched = |x: usize| g.darts_at(x).iter().any(|d| keep[d.edge()]);
        if let Some(x) = (0..g.vertex_count()).find(|&x| x != v && touched(x) && pot[x].is_none()) {
            return Err(Error::Precondition(format!(
                "induced subgraph is disconnected (`{}` unreachable)",
                g.vertex_name(x)
            )));
        }
        Ok((0..g.edge_count())
            .filter(|&e| keep[e] && !tree[e])
            .map(|e| {
                let [t, h] = g.ends(e);
                grp.op(grp.op(pot[t].unwrap(), self.alpha[e]), grp.inv(pot[h].unwrap()))
            })
            .collect())
    }

    /// A(v): net voltages of all closed walks at `v`.
    pub fn local_voltage_group(&self, v: usize) -> Result<Subgroup> {
        let keep = vec![true; self.graph.edge_count()];
        Ok(self.group.generated_subgroup(&self.fundamental_voltages(v, &keep)?))
    }

    /// A(v, x): net voltages of closed walks at `v` using only edges of `x`.
    pub fn local_voltage_group_of_edges(&self, v: usize, x: &Chain1) -> Result<Subgroup> {
        x.check_len(&self.graph)?;
        if !self.graph.darts_at(v).iter().any(|d| x.contains(d.edge())) && x.edge_count() > 0 {
            return Err(Error::Precondition(format!("`{}` is not on the edge set", self.graph.vertex_name(v))));
        }
        let keep: Vec<bool> = (0..self.graph.edge_count()).map(|e| x.contains(e)).collect();
        Ok(self.group.generated_subgroup(&self.fundamental_voltages(v, &keep)?))
    }

    /// Components of the derived subgraph over the base edges in `keep`,
    /// restricted to vertices over `base_vertices`.
    fn lifted_components(&self, keep: &[bool], base_vertices: &[bool]) -> (usize, Vec<usize>) {
        let n = self.n();
        let derived = self.derived_graph();
        let (_, labels) = derived.component_labels_of(|de| keep[de / n]);
        let mut seen = std::collections::BTreeSet::new();
        for (x, &l) in labels.iter().enumerate() {
            if base_vertices[x / n] {
                seen.insert(l);
            }
        }
        (seen.len(), labels)
    }
}

fn check_walk(g: &Graph, walk: &[Dart]) -> Result<()> {
    for d in walk {
        if d.0 >= g.dart_count() {
            return Err(Error::InvalidWalk(format!("dart {d} out of range")));
        }
    }
    for w in walk.windows(2) {
        if g.head(w[0]) != g.tail(w[1]) {
            return Err(Error::InvalidWalk(format!("{} does not continue {}", g.dart_token(w[1]), g.dart_token(w[0]))));
        }
    }
    Ok(())
}

fn check_closed_walk_at(g: &Graph, v: usize, walk: &[Dart]) -> Result<()> {
    check_walk(g, walk)?;
    match (walk.first(), walk.last()) {
        (Some(&a), Some(&b)) if g.tail(a) != v || g.head(b) != v => {
            Err(Error::InvalidWalk(format!("walk is not closed at `{}`", g.vertex_name(v))))
        }
        _ => Ok(()),
    }
}

/// Sets voltages from explicit dart values; missing edges get the
/// identity. A value on a negative dart is inverted onto its edge, and
/// must agree with any value given for the positive dart.
pub fn attach_voltages(
    emb: Embedding,
    group: FiniteGroup,
    assignment: &[(Dart, GroupElement)],
) -> Result<VoltageEmbedding> {
    let m = emb.graph().edge_count();
    let mut alpha: Vec<Option<GroupElement>> = vec![None; m];
    for &(d, a) in assignment {
        if d.edge() >= m {
            return Err(Error::InvalidVoltage(format!("dart {d} out of range")));
        }
        group.element(a.0)?;
        let on_edge = if d.is_positive() { a } else { group.inv(a) };
        match alpha[d.edge()] {
            Some(prev) if prev != on_edge => {
                return Err(Error::InvalidVoltage(format!(
                    "voltages on the two darts of `{}` are not mutually inverse",
                    emb.graph().edge_name(d.edge())
                )))
            }
            _ => alpha[d.edge()] = Some(on_edge),
        }
    }
    let id = group.identity();
    let alpha = alpha.into_iter().map(|a| a.unwrap_or(id)).collect();
    VoltageEmbedding::new(emb, group, alpha)
}

/// The four coset-formula counts, each with its direct count in
/// the derived objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetCounts {
    /// `|A| / |A(v)|` against components of the derived graph.
    pub surface_components: (usize, usize),
    /// `|A| / |A(v,I)|` against components of the preimage of the face set.
    pub face_set_components: (usize, usize),
    /// `|A(v,I)| / |A(v,x)|` against components of the preimage of `x`
    /// inside the face-set component of `v^1`.
    pub subgraph_components: (usize, usize),
    /// `|A(v,x)| / |<ω(W)>|` against sets of consecutive lifts of `W` in the
    /// component of `v^1` over `x`.
    pub lift_sets: (usize, usize),
}

impl CosetCounts {
    pub fn all_match(&self) -> bool {
        [self.surface_components, self.face_set_components, self.subgraph_components, self.lift_sets]
            .iter()
            .all(|(a, b)| a == b)
    }
}

impl VoltageEmbedding {
    pub fn new(base: Embedding, group: FiniteGroup, alpha: Vec<GroupElement>) -> Result<VoltageEmbedding> {
        let vg = VoltageGraph::new(base.graph().clone(), group, alpha)?;
        Ok(VoltageEmbedding { base, vg })
    }

    pub fn base(&self) -> &Embedding {
        &self.base
    }

    pub fn voltage_graph(&self) -> &VoltageGraph {
        &self.vg
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.vg.group
    }

    pub fn voltages(&self) -> &[GroupElement] {
        &self.vg.alpha
    }

    pub fn voltage(&self, d: Dart) -> GroupElement {
        self.vg.voltage(d)
    }

    pub fn derived_graph(&self) -> Graph {
        self.vg.derived_graph()
    }

    /// Rotations lifted dart by dart, signs copied from the base.
    pub fn derived_embedding(&self) -> Embedding {
        let g = self.base.graph();
        let grp = self.group();
        let graph = self.derived_graph();
        let mut rotation = Vec::with_capacity(graph.vertex_count());
        for v in 0..g.vertex_count() {
            for a in grp.elements() {
                rotation.push(self.base.rotation(v).iter().map(|&d| self.vg.derived_dart(d, a)).collect());
            }
        }
        let n = grp.order();
        let signs = (0..graph.edge_count()).map(|de| self.base.sign(de / n)).collect();
        Embedding::new(graph, rotation, signs).expect("lifted rotation is valid")
    }

    pub fn net_voltage(&self, walk: &[Dart]) -> Result<GroupElement> {
        self.vg.net_voltage(walk)
    }

    /// Net voltage of a face boundary walk.
    pub fn face_voltage(&self, face: &Face) -> GroupElement {
        let walk: Vec<Dart> = face.darts().collect();
        self.vg.net_voltage_unchecked(&walk)
    }

    /// `|A| - |A| / |<ω_f>|`: sheets lost over the face's branch point.
    pub fn deficiency(&self, face: &Face) -> usize {
        let n = self.group().order();
        n - n / self.group().element_order(self.face_voltage(face))
    }

    /// Euler characteristic of the derived surface predicted from the base.
    pub fn riemann_hurwitz_chi(&self) -> i64 {
        let n = self.group().order() as i64;
        let lost: usize = self.base.trace_faces().iter().map(|f| self.deficiency(f)).sum();
        n * self.base.euler_characteristic() - lost as i64
    }

    /// Derived face count by tracing lifted (dart, sheet, side) states
    /// without building the derived embedding.
    pub fn derived_face_count(&self) -> usize {
        let g = self.base.graph();
        let grp = self.group();
        let n = grp.order();
        let state = |d: Dart, a: GroupElement, s: Sign| (2 * d.0 + s.is_negative() as usize) * n + a.0;
        let mut seen = vec![false; 2 * g.dart_count() * n];
        let mut faces = 0;
        for d0 in g.darts() {
            for a0 in grp.elements() {
                for s0 in [Sign::Plus, Sign::Minus] {
                    if seen[state(d0, a0, s0)] {
                        continue;
                    }
                    faces += 1;
                    let (mut d, mut a, mut s) = (d0, a0, s0);
                    loop {
                        seen[state(d, a, s)] = true;
                        let b = grp.op(a, self.vg.voltage(d));
                        let rs = (s * self.base.sign(d.edge())).flip();
                        seen[state(d.opposite(), b, rs)] = true;
                        let (nd, ns) = self.base.face_step(d, s);
                        (d, a, s) = (nd, b, ns);
                        if (d, a, s) == (d0, a0, s0) {
                            break;
                        }
                    }
                }
            }
        }
        faces
    }

    /// Derived orientability by balancing the lifted signs.
    pub fn derived_orientable(&self) -> bool {
        self.derived_embedding().is_orientable()
    }

    /// Checks that every derived face projects onto a base face walk
    /// repeated exactly `|<ω_f>|` times. Returns the number of faces checked.
    pub fn check_face_lifts(&self, derived: &Embedding) -> Result<usize> {
        let base_faces = self.base.trace_faces();
        let g = self.base.graph();
        // every base (dart, side) state, forward or reversed, to its face
        let state = |d: Dart, s: Sign| 2 * d.0 + s.is_negative() as usize;
        let mut owner = vec![usize::MAX; 2 * g.dart_count()];
        for (i, f) in base_faces.iter().enumerate() {
            for &(d, s) in &f.boundary {
                owner[state(d, s)] = i;
                owner[state(d.opposite(), (s * self.base.sign(d.edge())).flip())] = i;
            }
        }
        let faces = derived.trace_faces();
        for df in &faces {
            let projected: Vec<(Dart, Sign)> =
                df.boundary.iter().map(|&(d, s)| (self.vg.project_dart(d).0, s)).collect();
            let len = projected.len();
            for i in 0..len {
                let (d, s) = projected[i];
                if self.base.face_step(d, s) != projected[(i + 1) % len] {
                    return Err(Error::Inconsistent("derived face does not project to a face walk".into()));
                }
            }
            let (d0, s0) = projected[0];
            let f = &base_faces[owner[state(d0, s0)]];
            let repeats = self.group().element_order(self.face_voltage(f));
            if len != f.len() * repeats {
                return Err(Error::Inconsistent(format!(
                    "derived face of length {len} over a base face of length {} with |<ω>| = {repeats}",
                    f.len()
                )));
            }
        }
        let expected: usize =
            base_faces.iter().map(|f| self.group().order() / self.group().element_order(self.face_voltage(f))).sum();
        if expected != faces.len() {
            return Err(Error::Inconsistent(format!("{} derived faces, fibres sum to {expected}", faces.len())));
        }
        Ok(faces.len())
    }

    /// A(v, I): net voltages of closed walks at `v` on the boundaries of the faces in `face_set`.
    pub fn local_voltage_group_of_faces(&self, v: usize, face_set: &[usize]) -> Result<Subgroup> {
        let x = self.face_set_edges(face_set)?;
        if !self.base.graph().darts_at(v).iter().any(|d| x.contains(d.edge())) {
            return Err(Error::Precondition(format!(
                "`{}` is not on the chosen faces",
                self.base.graph().vertex_name(v)
            )));
        }
        self.vg.local_voltage_group_of_edges(v, &x)
    }

    fn face_set_edges(&self, face_set: &[usize]) -> Result<Chain1> {
        let faces = self.base.trace_faces();
        let m = self.base.graph().edge_count();
        let mut keep = vec![false; m];
        for &i in face_set {
            let f = faces.get(i).ok_or_else(|| Error::Precondition(format!("no face {i}")))?;
            for d in f.darts() {
                keep[d.edge()] = true;
            }
        }
        Ok(Chain1::from_edges(m, (0..m).filter(|&e| keep[e])))
    }

    /// The four coset quotients and the matching direct counts. `x` is an
    /// edge set inside the closure of the faces `face_set`, inducing a
    /// connected subgraph through `v`; `walk` is a closed walk at `v` in it.
    pub fn coset_counts(&self, v: usize, face_set: &[usize], x: &Chain1, walk: &[Dart]) -> Result<CosetCounts> {
        let g = self.base.graph();
        let grp = self.group();
        let n = grp.order();
        let face_edges = self.face_set_edges(face_set)?;
        if x.edges().any(|e| !face_edges.contains(e)) {
            return Err(Error::Precondition("edge set leaves the chosen faces".into()));
        }
        check_closed_walk_at(g, v, walk)?;
        if walk.iter().any(|d| !x.contains(d.edge())) {
            return Err(Error::Precondition("walk leaves the edge set".into()));
        }
        let a_v = self.vg.local_voltage_group(v)?;
        let a_vi = self.local_voltage_group_of_faces(v, face_set)?;
        let a_vx = self.vg.local_voltage_group_of_edges(v, x)?;
        let w_order = grp.element_order(self.vg.net_voltage_unchecked(walk));

        let derived = self.derived_graph();
        let surface = derived.component_count();

        let on = |c: &Chain1| -> (Vec<bool>, Vec<bool>) {
            let keep: Vec<bool> = (0..g.edge_count()).map(|e| c.contains(e)).collect();
            let mut verts = vec![false; g.vertex_count()];
            for e in c.edges() {
                for u in g.ends(e) {
                    verts[u] = true;
                }
            }
            (keep, verts)
        };
        let (keep_i, verts_i) = on(&face_edges);
        let (face_total, labels_i) = self.vg.lifted_components(&keep_i, &verts_i);

        let root = self.vg.derived_vertex(v, grp.identity());
        let (keep_x, verts_x) = on(x);
        let (_, labels_x) = derived.component_labels_of(|de| keep_x[de / n]);
        let mut inside = std::collections::BTreeSet::new();
        for (y, &l) in labels_x.iter().enumerate() {
            if verts_x[y / n] && labels_i[y] == labels_i[root] {
                inside.insert(l);
            }
        }

        let sheets: Vec<GroupElement> =
            grp.elements().filter(|a| labels_x[self.vg.derived_vertex(v, *a)] == labels_x[root]).collect();
        let lift_sets = self.vg.consecutive_lift_sets_among(v, walk, &sheets)?.len();

        Ok(CosetCounts {
            surface_components: (n / a_v.order(), surface),
            face_set_components: (n / a_vi.order(), face_total),
            subgraph_components: (a_vi.order() / a_vx.order(), inside.len()),
            lift_sets: (a_vx.order() / w_order, lift_sets),
        })
    }

    /// Whether some orientation-reversing circle of the base has a net
    /// voltage of odd order, which forces a nonorientable derived surface.
    /// Searches all combinations of fundamental cycles.
    pub fn predicts_nonorientable(&self) -> Result<bool> {
        if self.base.is_orientable() {
            return Err(Error::Precondition("base embedding is orientable".into()));
        }
        let g = self.base.graph();
        let basis = cycle_basis(g);
        let limit = 20;
        if basis.len() > limit {
            return Err(Error::Guardrail { count: 1u128 << basis.len(), limit: 1u128 << limit });
        }
        for mask in 1u64..(1u64 << basis.len()) {
            let mut z = Chain1::zero(g.edge_count());
            for (i, b) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    z = &z + b;
                }
            }
            if !self.base.negative_parity(&z) {
                continue;
            }
            let Ok(walk) = z.circle_walk(g) else { continue };
            let w = self.vg.net_voltage_unchecked(&walk);
            if self.group().element_order(w) % 2 == 1 {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Vertex and edge permutations of the derived graph induced by `c`.
    pub fn left_action(&self, c: GroupElement) -> (Vec<usize>, Vec<usize>) {
        left_action(&self.vg, c)
    }

    /// Checks that every group element acts as an embedding automorphism,
    /// freely for non-identity elements and regularly on each fibre.
    pub fn verify_free_action(&self) -> bool {
        let derived = self.derived_embedding();
        verify_free_action_on(&self.vg, &derived)
    }
}

pub fn left_action(vg: &VoltageGraph, c: GroupElement) -> (Vec<usize>, Vec<usize>) {
    let n = vg.n();
    let grp = &vg.group;
    let vertices = (0..vg.graph.vertex_count() * n).map(|x| (x / n) * n + grp.op(c, GroupElement(x % n)).0).collect();
    let edges = (0..vg.graph.edge_count() * n).map(|x| (x / n) * n + grp.op(c, GroupElement(x % n)).0).collect();
    (vertices, edges)
}

fn verify_free_action_on(vg: &VoltageGraph, derived: &Embedding) -> bool {
    let dg = derived.graph();
    let grp = &vg.group;
    let n = vg.n();
    for c in grp.elements() {
        let (vp, ep) = left_action(vg, c);
        let map_dart = |d: Dart| Dart(2 * ep[d.edge()] + (d.0 & 1));
        for (e, &img) in ep.iter().enumerate() {
            let [t, h] = dg.ends(e);
            if dg.ends(img) != [vp[t], vp[h]] || derived.sign(e) != derived.sign(img) {
                return false;
            }
        }
        for (x, &vx) in vp.iter().enumerate() {
            let image: Vec<Dart> = derived.rotation(x).iter().map(|&d| map_dart(d)).collect();
            if !same_cycle(&image, derived.rotation(vx)) {
                return false;
            }
        }
        if !grp.is_identity(c)
            && (vp.iter().enumerate().any(|(i, &j)| i == j) || ep.iter().enumerate().any(|(i, &j)| i == j))
        {
            return false;
        }
    }
    // regular on fibres: the orbit of (v, 1) is all of (v, *)
    for v in 0..vg.graph.vertex_count() {
        let root = vg.derived_vertex(v, grp.identity());
        let mut hit = vec![false; n];
        for c in grp.elements() {
            let (vp, _) = left_action(vg, c);
            let (w, a) = vg.derived_vertex_label(vp[root]);
            if w != v {
                return false;
            }
            hit[a.0] = true;
        }
        if hit.iter().any(|h| !h) {
            return false;
        }
    }
    true
}

fn same_cycle(a: &[Dart], b: &[Dart]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    match b.iter().position(|&x| x == a[0]) {
        Some(k) => (0..a.len()).all(|i| a[i] == b[(k + i) % b.len()]),
        None => false,
    }
}

/// A group acting on a graph: for each element, a vertex permutation and
/// a dart permutation.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub group: FiniteGroup,
    pub vertex_perm: Vec<Vec<usize>>,
    pub dart_perm: Vec<Vec<Dart>>,
}

impl GroupAction {
    /// Validates the action: permutations, automorphisms, homomorphism,
    /// freeness on vertices and darts, and no edge reversed.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        let grp = &self.group;
        let n = grp.order();
        if self.vertex_perm.len() != n || self.dart_perm.len() != n {
            return Err(Error::Precondition("one permutation pair per group element is required".into()));
        }
        for c in grp.elements() {
            let vp = &self.vertex_perm[c.0];
            let dp = &self.dart_perm[c.0];
            if !is_permutation(vp, graph.vertex_count())
                || !is_permutation(&dp.iter().map(|d| d.0).collect::<Vec<_>>(), graph.dart_count())
            {
                return Err(Error::Precondition(format!("element {c} does not act by permutations")));
            }
            for d in graph.darts() {
                let img = dp[d.0];
                if graph.tail(img) != vp[graph.tail(d)] || dp[d.opposite().0] != img.opposite() {
                    return Err(Error::Precondition(format!("element {c} is not a graph automorphism")));
                }
            }
            for b in grp.elements() {
                let cb = grp.op(c, b);
                let composed_v =
                    (0..graph.vertex_count()).all(|x| vp[self.vertex_perm[b.0][x]] == self.vertex_perm[cb.0][x]);
                let composed_d = graph.darts().all(|d| dp[self.dart_perm[b.0][d.0].0] == self.dart_perm[cb.0][d.0]);
                if !composed_v || !composed_d {
                    return Err(Error::Precondition("permutations do not form a left action".into()));
                }
            }
            if !grp.is_identity(c) {
                if (0..graph.vertex_count()).any(|x| vp[x] == x) || graph.darts().any(|d| dp[d.0] == d) {
                    return Err(Error::Precondition(format!("element {c} has a fixed point; action is not free")));
                }
                if graph.darts().any(|d| dp[d.0] == d.opposite()) {
                    return Err(Error::Precondition(format!(
                        "element {c} reverses an edge; the quotient needs a half-edge"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// Quotient of a graph by a free action, with voltages normalized to the
/// identity on a spanning tree, plus the map from derived vertices of the
/// quotient back to the original vertices (an isomorphism, verified).
#[derive(Clone, Debug)]
pub struct Quotient {
    pub voltage_graph: VoltageGraph,
    pub vertex_map: Vec<usize>,
}

pub fn quotient_with_voltages(graph: &Graph, action: &GroupAction) -> Result<Quotient> {
    action.validate(graph)?;
    let grp = &action.group;
    let n = grp.order();
    // vertex orbits: representative (smallest) and the element carrying it to each vertex
    let mut orbit = vec![usize::MAX; graph.vertex_count()];
    let mut carrier = vec![grp.identity(); graph.vertex_count()];
    let mut reps = Vec::new();
    for x in 0..graph.vertex_count() {
        if orbit[x] != usize::MAX {
            continue;
        }
        for c in grp.elements() {
            let y = action.vertex_perm[c.0][x];
            orbit[y] = reps.len();
            carrier[y] = c;
        }
        reps.push(x);
    }
    let mut edge_orbit = vec![usize::MAX; graph.edge_count()];
    let mut edge_reps = Vec::new();
    let mut ends = Vec::new();
    let mut alpha = Vec::new();
    for e in 0..graph.edge_count() {
        if edge_orbit[e] != usize::MAX {
            continue;
        }
        for c in grp.elements() {
            edge_orbit[action.dart_perm[c.0][Dart::positive(e).0].edge()] = edge_reps.len();
        }
        let [t, h] = graph.ends(e);
        ends.push([orbit[t], orbit[h]]);
        alpha.push(grp.op(grp.inv(carrier[t]), carrier[h]));
        edge_reps.push(e);
    }
    let vnames = reps.iter().map(|&x| graph.vertex_name(x).to_string()).collect();
    let enames: Vec<String> = edge_reps.iter().map(|&e| graph.edge_name(e).to_string()).collect();
    let qgraph = Graph::new(vnames, enames.into_iter().zip(ends).collect())?;

    // relabel sheets so that spanning-tree darts carry the identity
    let tree = qgraph.bfs_spanning_tree();
    let mut pi: Vec<Option<GroupElement>> = vec![None; qgraph.vertex_count()];
    pi[0] = Some(grp.identity());
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &d in qgraph.darts_at(v) {
            let h = qgraph.head(d);
            if tree[d.edge()] && pi[h].is_none() {
                let a = if d.is_positive() { alpha[d.edge()] } else { grp.inv(alpha[d.edge()]) };
                pi[h] = Some(grp.op(grp.inv(a), pi[v].unwrap()));
                queue.push_back(h);
            }
        }
    }
    let pi: Vec<GroupElement> = pi.into_iter().map(|p| p.expect("quotient is connected")).collect();
    let alpha: Vec<GroupElement> = (0..qgraph.edge_count())
        .map(|e| {
            let [t, h] = qgraph.ends(e);
            grp.op(grp.op(grp.inv(pi[t]), alpha[e]), pi[h])
        })
        .collect();
    debug_assert!((0..qgraph.edge_count()).all(|e| !tree[e] || grp.is_identity(alpha[e])));
    let vg = VoltageGraph::new(qgraph, grp.clone(), alpha)?;

    // derived (v, b) corresponds to c·rep(v) where b = c·π(v)
    let mut vertex_map = vec![0; graph.vertex_count()];
    for (v, &rep) in reps.iter().enumerate() {
        for c in grp.elements() {
            let b = grp.op(c, pi[v]);
            vertex_map[v * n + b.0] = action.vertex_perm[c.0][rep];
        }
    }
    let derived = vg.derived_graph();
    if !is_isomorphism(&derived, graph, &vertex_map) {
        return Err(Error::Inconsistent("derived graph of the quotient does not match the input".into()));
    }
    debug_assert!(graph_isomorphic(&derived, graph).is_some());
    Ok(Quotient { voltage_graph: vg, vertex_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::group::cyclic_group;

    fn barbell() -> Graph {
        build_graph(&["v", "u"], &[("v", "v"), ("u", "u"), ("v", "u")]).unwrap()
    }

    fn barbell_vg(n: usize, a: usize, b: usize) -> VoltageGraph {
        VoltageGraph::new(barbell(), cyclic_group(n).unwrap(), vec![GroupElement(a), GroupElement(b), GroupElement(0)])
            .unwrap()
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((format!("v{i}"), format!("v{}", (i + 1) % 5)));
            edges.push((format!("v{i}"), format!("u{i}")));
            edges.push((format!("u{i}"), format!("u{}", (i + 2) % 5)));
        }
        let names: Vec<String> = (0..5).map(|i| format!("v{i}")).chain((0..5).map(|i| format!("u{i}"))).collect();
        build_graph(&names, &edges).unwrap()
    }

    #[test]
    fn barbell_over_z5_is_petersen() {
        let d = barbell_vg(5, 1, 2).derived_graph();
        assert_eq!(d.vertex_count(), 10);
        assert_eq!(d.edge_count(), 15);
        assert!(graph_isomorphic(&d, &petersen()).is_some());
    }

    #[test]
    fn trivial_group_copies_the_base() {
        let vg = VoltageGraph::new(barbell(), cyclic_group(1).unwrap(), vec![GroupElement(0); 3]).unwrap();
        let d = vg.derived_graph();
        assert!(is_isomorphism(&d, &barbell(), &[0, 1]));
    }

    #[test]
    fn voltages_attach_with_inverses() {
        let emb = Embedding::default_for(barbell());
        let z5 = cyclic_group(5).unwrap();
        let ve = attach_voltages(emb.clone(), z5.clone(), &[(Dart(0), GroupElement(1)), (Dart(3), GroupElement(3))])
            .unwrap();
        assert_eq!(ve.voltages(), &[GroupElement(1), GroupElement(2), GroupElement(0)]);
        assert_eq!(ve.voltage(Dart(1)), GroupElement(4));
        let bad = attach_voltages(emb.clone(), z5.clone(), &[(Dart(0), GroupElement(1)), (Dart(1), GroupElement(1))]);
        assert!(matches!(bad, Err(Error::InvalidVoltage(_))));
        assert!(attach_voltages(emb, z5, &[]).is_ok());
    }

    #[test]
    fn net_voltages_and_lifts() {
        let vg = barbell_vg(5, 1, 2);
        assert_eq!(vg.net_voltage(&[]).unwrap(), GroupElement(0));
        assert_eq!(vg.net_voltage(&[Dart(0)]).unwrap(), GroupElement(1));
        assert_eq!(vg.net_voltage(&[Dart(4), Dart(2), Dart(5)]).unwrap(), GroupElement(2));
        assert_eq!(vg.net_voltage(&[Dart(4), Dart(5)]).unwrap(), GroupElement(0));
        assert!(vg.net_voltage(&[Dart(0), Dart(2)]).is_err());
        let lift = vg.lift_walk(0, &[Dart(0), Dart(0)], GroupElement(4)).unwrap();
        assert_eq!(lift.end, (0, GroupElement(1)));
        let d = vg.derived_graph();
        for w in lift.darts.windows(2) {
            assert_eq!(d.head(w[0]), d.tail(w[1]));
        }
    }

    #[test]
    fn lift_set_sizes() {
        let vg = VoltageGraph::new(
            build_graph(&["v"], &[("v", "v")]).unwrap(),
            cyclic_group(10).unwrap(),
            vec![GroupElement(2)],
        )
        .unwrap();
        let sets = vg.consecutive_lift_sets(0, &[Dart(0)]).unwrap();
        assert_eq!(sets.len(), 2);
        assert!(sets.iter().all(|s| s.len() == 5));
        assert_eq!(vg.consecutive_lift_sets(0, &[]).unwrap().len(), 10);
        assert_eq!(vg.consecutive_lift_sets(0, &[Dart(0), Dart(0), Dart(0), Dart(0), Dart(0)]).unwrap().len(), 10);
    }

    #[test]
    fn local_groups() {
        let vg = barbell_vg(5, 1, 2);
        assert_eq!(vg.local_voltage_group(0).unwrap().order(), 5);
        let zero = barbell_vg(6, 0, 0);
        assert_eq!(zero.local_voltage_group(0).unwrap().order(), 1);
        assert_eq!(zero.derived_graph().component_count(), 6);
        let vg = barbell_vg(10, 2, 4);
        let loop_u = Chain1::from_edges(3, [1]);
        assert_eq!(vg.local_voltage_group_of_edges(1, &loop_u).unwrap().order(), 5);
        assert!(vg.local_voltage_group_of_edges(0, &loop_u).is_err());
        // edges {loop v, loop u} do not induce a connected subgraph
        assert!(vg.local_voltage_group_of_edges(0, &Chain1::from_edges(3, [0, 1])).is_err());
    }

    fn torus_bouquet(n: usize) -> VoltageEmbedding {
        let g = build_graph(&["v"], &[("v", "v"), ("v", "v")]).unwrap();
        let emb = Embedding::new(g, vec![vec![Dart(0), Dart(2), Dart(1), Dart(3)]], vec![Sign::Plus; 2]).unwrap();
        VoltageEmbedding::new(emb, cyclic_group(n).unwrap(), vec![GroupElement(1 % n), GroupElement(2 % n)]).unwrap()
    }

    #[test]
    fn torus_bouquet_lifts_to_torus() {
        for n in [1, 6, 7, 10] {
            let ve = torus_bouquet(n);
            let d = ve.derived_embedding();
            assert_eq!(d.euler_characteristic(), 0);
            assert!(d.is_orientable());
            assert_eq!(ve.riemann_hurwitz_chi(), 0);
            assert_eq!(ve.derived_face_count(), d.face_count());
            assert_eq!(ve.check_face_lifts(&d).unwrap(), n);
            assert!(ve.verify_free_action());
        }
    }

    #[test]
    fn trivial_voltages_deficiency_zero() {
        let g = barbell();
        let ve = VoltageEmbedding::new(Embedding::default_for(g), cyclic_group(4).unwrap(), vec![GroupElement(0); 3])
            .unwrap();
        for f in ve.base().trace_faces() {
            assert_eq!(ve.deficiency(&f), 0);
        }
        assert_eq!(ve.riemann_hurwitz_chi(), 4 * ve.base().euler_characteristic());
        assert_eq!(ve.derived_embedding().euler_characteristic(), ve.riemann_hurwitz_chi());
    }

    #[test]
    fn coset_counts_on_barbell() {
        let g = barbell();
        let emb = Embedding::default_for(g);
        let ve = VoltageEmbedding::new(
            emb,
            cyclic_group(5).unwrap(),
            vec![GroupElement(1), GroupElement(2), GroupElement(0)],
        )
        .unwrap();
        let all_faces: Vec<usize> = (0..ve.base().face_count()).collect();
        let x = Chain1::from_edges(3, [0]);
        let c = ve.coset_counts(0, &all_faces, &x, &[Dart(0)]).unwrap();
        assert_eq!(c.surface_components, (1, 1));
        assert!(c.all_match(), "{c:?}");
        let zero = VoltageEmbedding::new(
            Embedding::default_for(barbell()),
            cyclic_group(3).unwrap(),
            vec![GroupElement(0); 3],
        )
        .unwrap();
        let c = zero.coset_counts(0, &all_faces, &x, &[Dart(0)]).unwrap();
        assert_eq!(c.surface_components, (3, 3));
        assert!(c.all_match());
    }

    #[test]
    fn predicts_nonorientable_on_negative_loop() {
        let g = build_graph(&["v"], &[("v", "v")]).unwrap();
        let emb = Embedding::new(g, vec![vec![Dart(0), Dart(1)]], vec![Sign::Minus]).unwrap();
        let z3 = VoltageEmbedding::new(emb.clone(), cyclic_group(3).unwrap(), vec![GroupElement(1)]).unwrap();
        assert!(z3.predicts_nonorientable().unwrap());
        assert!(!z3.derived_orientable());
        let z2 = VoltageEmbedding::new(emb, cyclic_group(2).unwrap(), vec![GroupElement(1)]).unwrap();
        assert!(!z2.predicts_nonorientable().unwrap());
        assert!(torus_bouquet(3).predicts_nonorientable().is_err());
    }

    fn rotation_action(
        n: usize,
        graph: &Graph,
        shift_vertex: impl Fn(usize, usize) -> usize,
        shift_edge: impl Fn(usize, usize) -> (usize, bool),
    ) -> GroupAction {
        let group = cyclic_group(n).unwrap();
        let vertex_perm = (0..n).map(|c| (0..graph.vertex_count()).map(|x| shift_vertex(c, x)).collect()).collect();
        let dart_perm = (0..n)
            .map(|c| {
                graph
                    .darts()
                    .map(|d| {
                        let (e, same) = shift_edge(c, d.edge());
                        if same == d.is_positive() {
                            Dart::positive(e)
                        } else {
                            Dart::negative(e)
                        }
                    })
                    .collect()
            })
            .collect();
        GroupAction { group, vertex_perm, dart_perm }
    }

    #[test]
    fn quotient_of_petersen_is_barbell() {
        let g = petersen();
        // vertices v0..v4 u0..u4, edges per i: (v_i v_i+1), (v_i u_i), (u_i u_i+2)
        let action = rotation_action(
            5,
            &g,
            |c, x| if x < 5 { (x + c) % 5 } else { 5 + (x - 5 + c) % 5 },
            |c, e| (3 * ((e / 3 + c) % 5) + e % 3, true),
        );
        let q = quotient_with_voltages(&g, &action).unwrap();
        let vg = &q.voltage_graph;
        assert_eq!(vg.graph().vertex_count(), 2);
        assert_eq!(vg.graph().edge_count(), 3);
        assert!(graph_isomorphic(&vg.derived_graph(), &g).is_some());
        let mut loop_voltages: Vec<usize> = (0..3)
            .filter(|&e| vg.graph().is_loop(e))
            .map(|e| {
                let a = vg.voltages()[e].0;
                a.min(5 - a)
            })
            .collect();
        loop_voltages.sort();
        assert_eq!(loop_voltages, vec![1, 2]);
    }

    #[test]
    fn trivial_action_quotient_is_identity() {
        let g = petersen();
        let action = rotation_action(1, &g, |_, x| x, |_, e| (e, true));
        let q = quotient_with_voltages(&g, &action).unwrap();
        assert_eq!(q.voltage_graph.graph().vertex_count(), 10);
        assert!(q.voltage_graph.voltages().iter().all(|a| a.0 == 0));
    }

    #[test]
    fn non_free_action_rejected() {
        // reflection of a 4-cycle fixing two vertices
        let g = build_graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        let action = rotation_action(
            2,
            &g,
            |c, x| if c == 0 { x } else { [0, 3, 2, 1][x] },
            |c, e| if c == 0 { (e, true) } else { ([3, 2, 1, 0][e], false) },
        );
        assert!(quotient_with_voltages(&g, &action).is_err());
        // antipodal map on the 4-cycle is free
        let free = rotation_action(2, &g, |c, x| (x + 2 * c) % 4, |c, e| ((e + 2 * c) % 4, true));
        let q = quotient_with_voltages(&g, &free).unwrap();
        assert_eq!(q.voltage_graph.graph().vertex_count(), 2);
    }

    #[test]
    fn edge_reversal_rejected() {
        // swapping the ends of a single link is free on vertices and darts
        let g = build_graph(&["a", "b"], &[("a", "b")]).unwrap();
        let action = rotation_action(2, &g, |c, x| (x + c) % 2, |c, e| (e, c == 0));
        assert!(matches!(quotient_with_voltages(&g, &action), Err(Error::Precondition(_))));
    }
}
