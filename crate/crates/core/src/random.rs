//! Seeded random embeddings, cycles and voltage assignments for the
//! property suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chain::Chain1;
use crate::embedding::{Embedding, Sign};
use crate::graph::{Dart, Graph};
use crate::group::{cyclic_group, GroupElement};
use crate::homology::cycle_basis;
use crate::voltage::VoltageEmbedding;

/// Connected multigraph on `n` vertices: a random tree plus `extra` random
/// edges, loops and parallel edges allowed.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, extra: usize) -> Graph {
    assert!(n >= 1);
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push([u, v]);
    }
    for _ in 0..extra {
        edges.push([rng.gen_range(0..n), rng.gen_range(0..n)]);
    }
    edges.shuffle(rng);
    for e in edges.iter_mut() {
        if rng.gen_bool(0.5) {
            e.swap(0, 1);
        }
    }
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    let edges = edges.into_iter().enumerate().map(|(i, e)| (format!("e{i}"), e)).collect();
    Graph::new(vertices, edges).expect("tree edges connect the graph")
}

/// Uniform rotations; each edge negative with probability `p_negative`.
pub fn random_embedding<R: Rng>(rng: &mut R, graph: Graph, p_negative: f64) -> Embedding {
    let rotation: Vec<Vec<Dart>> = (0..graph.vertex_count())
        .map(|v| {
            let mut r = graph.darts_at(v).to_vec();
            r.shuffle(rng);
            r
        })
        .collect();
    let signs =
        (0..graph.edge_count()).map(|_| if rng.gen_bool(p_negative) { Sign::Minus } else { Sign::Plus }).collect();
    Embedding::new(graph, rotation, signs).expect("shuffled incidence is a rotation")
}

/// A random embedding with between 1 and `max_vertices` vertices and up to
/// `max_extra` edges beyond a spanning tree (at least one).
pub fn random_small_embedding<R: Rng>(rng: &mut R, max_vertices: usize, max_extra: usize) -> Embedding {
    let n = rng.gen_range(1..=max_vertices);
    let extra = rng.gen_range(1..=max_extra);
    let g = random_graph(rng, n, extra);
    let p = [0.0, 0.3, 0.5][rng.gen_range(0..3)];
    random_embedding(rng, g, p)
}

/// Uniform element of the cycle space.
pub fn random_cycle<R: Rng>(rng: &mut R, graph: &Graph) -> Chain1 {
    cycle_basis(graph)
        .into_iter()
        .filter(|_| rng.gen_bool(0.5))
        .fold(Chain1::zero(graph.edge_count()), |acc, z| &acc + &z)
}

/// Random voltages in Z_n on a given embedding.
pub fn random_voltages<R: Rng>(rng: &mut R, emb: Embedding, n: usize) -> VoltageEmbedding {
    let group = cyclic_group(n).expect("n >= 1");
    let alpha = (0..emb.graph().edge_count()).map(|_| GroupElement(rng.gen_range(0..n))).collect();
    VoltageEmbedding::new(emb, group, alpha).expect("voltages in range")
}

/// A random voltage embedding: at most `max_vertices` base vertices, group
/// Z_n with `n <= max_order`.
pub fn random_voltage_embedding<R: Rng>(rng: &mut R, max_vertices: usize, max_order: usize) -> VoltageEmbedding {
    let emb = random_small_embedding(rng, max_vertices, 4);
    let n = rng.gen_range(1..=max_order);
    random_voltages(rng, emb, n)
}

/// Inputs for the coset counts: a vertex `v`, a nonempty face set, an edge
/// set `x` on those faces that is connected through `v`, and a closed walk
/// at `v` inside `x` (a random walk closed up along a shortest path).
pub fn random_coset_case<R: Rng>(rng: &mut R, ve: &VoltageEmbedding) -> (usize, Vec<usize>, Chain1, Vec<Dart>) {
    let emb = ve.base();
    let g = emb.graph();
    let faces = emb.trace_faces();
    // grow a face set whose closure stays connected
    let mut face_set = vec![rng.gen_range(0..faces.len())];
    let mut touched = vec![false; g.vertex_count()];
    let target = rng.gen_range(1..=faces.len());
    loop {
        for d in faces[*face_set.last().expect("nonempty")].darts() {
            touched[g.tail(d)] = true;
        }
        let next: Vec<usize> = (0..faces.len())
            .filter(|f| !face_set.contains(f) && faces[*f].darts().any(|d| touched[g.tail(d)]))
            .collect();
        if face_set.len() >= target || next.is_empty() {
            break;
        }
        face_set.push(*next.choose(rng).expect("nonempty"));
    }
    let mut on_faces = vec![false; g.edge_count()];
    for &f in &face_set {
        for d in faces[f].darts() {
            on_faces[d.edge()] = true;
        }
    }
    let start_edge = (0..g.edge_count()).filter(|&e| on_faces[e]).collect::<Vec<_>>();
    let e0 = *start_edge.choose(rng).expect("faces have edges");
    let v = g.ends(e0)[rng.gen_range(0..2)];
    let steps = rng.gen_range(1..=2 * g.edge_count());
    let mut walk = Vec::new();
    let mut at = v;
    let mut in_x = vec![false; g.edge_count()];
    for _ in 0..steps {
        let choices: Vec<Dart> = g.darts_at(at).iter().copied().filter(|d| on_faces[d.edge()]).collect();
        let d = *choices.choose(rng).expect("walk stays on face edges");
        in_x[d.edge()] = true;
        walk.push(d);
        at = g.head(d);
    }
    // return to v along a shortest path inside x
    let mut back: Vec<Option<Dart>> = vec![None; g.vertex_count()];
    let mut queue = std::collections::VecDeque::from([v]);
    let mut reached = vec![false; g.vertex_count()];
    reached[v] = true;
    while let Some(u) = queue.pop_front() {
        for &d in g.darts_at(u) {
            let w = g.head(d);
            if in_x[d.edge()] && !reached[w] {
                reached[w] = true;
                back[w] = Some(d);
                queue.push_back(w);
            }
        }
    }
    let mut tail = Vec::new();
    while at != v {
        let d = back[at].expect("x is connected through v");
        tail.push(d.opposite());
        at = g.tail(d);
    }
    walk.extend(tail);
    let x = Chain1::from_edges(g.edge_count(), (0..g.edge_count()).filter(|&e| in_x[e]));
    (v, face_set, x, walk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_given_seed() {
        let a = random_small_embedding(&mut ChaCha8Rng::seed_from_u64(7), 6, 5);
        let b = random_small_embedding(&mut ChaCha8Rng::seed_from_u64(7), 6, 5);
        assert_eq!(a, b);
    }

    #[test]
    fn coset_cases_are_accepted() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let ve = random_voltage_embedding(&mut rng, 5, 8);
            let (v, faces, x, walk) = random_coset_case(&mut rng, &ve);
            let c = ve.coset_counts(v, &faces, &x, &walk).unwrap();
            assert!(c.all_match(), "{c:?}");
        }
    }

    #[test]
    fn cycles_are_cycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let e = random_small_embedding(&mut rng, 6, 5);
            assert!(random_cycle(&mut rng, e.graph()).is_cycle(e.graph()));
        }
    }
}
