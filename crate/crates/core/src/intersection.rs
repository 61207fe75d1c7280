//! The Z2 intersection pairing on cycles, computed from the rotation system.
//!
//! Two distinct circles are compared locally. Where they touch in a single
//! vertex they cross iff their ends interleave in the rotation there. Where
//! they share a path, the second circle enters on one side of the first and
//! leaves on one side; it crosses iff the sides differ, with the side flipped
//! once per twisted edge along the shared path. General cycles go through a
//! circle decomposition and bilinearity. A circle paired with itself gives
//! the parity of its twisted edges.

use crate::chain::Chain1;
use crate::embedding::Embedding;
use crate::error::Result;
use crate::gf2::{BitVec, Gf2Matrix};
use crate::graph::Dart;

/// Self-intersection of a cycle: 1 iff it carries an odd number of twisted
/// edges (summed over any circle decomposition, cross terms vanish mod 2).
pub fn self_intersection(emb: &Embedding, z: &Chain1) -> Result<bool> {
    z.check_cycle(emb.graph())?;
    Ok(emb.negative_parity(z))
}

/// Crossing parity of two circles.
pub fn pair_circles(emb: &Embedding, c1: &Chain1, c2: &Chain1) -> Result<bool> {
    let g = emb.graph();
    let walk = c1.circle_walk(g)?;
    c2.circle_walk(g)?;
    if c1 == c2 {
        return Ok(emb.negative_parity(c1));
    }
    let len = walk.len();
    let shared: Vec<bool> = walk.iter().map(|d| c2.contains(d.edge())).collect();
    // c1 is not contained in c2, so some edge is not shared; start right after one
    let start = (0..len).find(|&i| !shared[i]).expect("distinct circles") + 1;
    let walk: Vec<Dart> = (0..len).map(|i| walk[(start + i) % len]).collect();
    let shared: Vec<bool> = (0..len).map(|i| shared[(start + i) % len]).collect();
    debug_assert!(!shared[len - 1]);

    let on_c2 = |v: usize| -> Vec<Dart> { g.darts_at(v).iter().copied().filter(|d| c2.contains(d.edge())).collect() };
    let mut parity = false;
    let mut segment: Option<(bool, bool)> = None; // (side at entry, twisted parity so far)
    for k in 0..len {
        let incoming = walk[(k + len - 1) % len];
        let outgoing = walk[k];
        let v = g.tail(outgoing);
        let in_shared = shared[(k + len - 1) % len];
        let out_shared = shared[k];
        match (in_shared, out_shared) {
            (false, false) => {
                let c2_darts = on_c2(v);
                if c2_darts.is_empty() {
                    continue;
                }
                debug_assert_eq!(c2_darts.len(), 2);
                let back = incoming.opposite();
                let first = in_arc(emb, c2_darts[0], outgoing, back);
                let second = in_arc(emb, c2_darts[1], outgoing, back);
                parity ^= first != second;
            }
            (false, true) => {
                let back = incoming.opposite();
                let free = other_dart(&on_c2(v), outgoing);
                let side = in_arc(emb, free, outgoing, back);
                let twist = emb.sign(outgoing.edge()).is_negative();
                segment = Some((side, twist));
            }
            (true, true) => {
                let (side, twist) = segment.expect("inside a shared segment");
                segment = Some((side, twist ^ emb.sign(outgoing.edge()).is_negative()));
            }
            (true, false) => {
                let (entry_side, twist) = segment.take().expect("segment has a start");
                let back = incoming.opposite();
                let free = other_dart(&on_c2(v), back);
                let exit_side = in_arc(emb, free, outgoing, back) ^ twist;
                parity ^= entry_side != exit_side;
            }
        }
    }
    Ok(parity)
}

fn other_dart(darts: &[Dart], not: Dart) -> Dart {
    debug_assert_eq!(darts.len(), 2);
    if darts[0] == not {
        darts[1]
    } else {
        darts[0]
    }
}

/// Whether `x` lies strictly inside the rotation arc that runs from `from`
/// forward to `to` (all three darts at one vertex, pairwise distinct).
fn in_arc(emb: &Embedding, x: Dart, from: Dart, to: Dart) -> bool {
    let deg = emb.rotation(emb.graph().tail(from)).len();
    let pf = emb.position(from);
    let offset = |d: Dart| (emb.position(d) + deg - pf) % deg;
    offset(x) < offset(to)
}

/// The bilinear pairing on cycles.
pub fn pairing(emb: &Embedding, z1: &Chain1, z2: &Chain1) -> Result<bool> {
    let g = emb.graph();
    let a = z1.circle_decomposition(g)?;
    let b = z2.circle_decomposition(g)?;
    let mut parity = false;
    for c in &a {
        for d in &b {
            parity ^= pair_circles(emb, c, d)?;
        }
    }
    Ok(parity)
}

/// Symmetric GF(2) matrix of pairwise intersections of an ordered cycle set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix(Gf2Matrix);

impl GramMatrix {
    pub fn from_matrix(m: Gf2Matrix) -> Result<GramMatrix> {
        if !m.is_symmetric() {
            return Err(crate::error::Error::Precondition("Gram matrix must be square and symmetric".into()));
        }
        Ok(GramMatrix(m))
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.row_count()
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.0.get(i, j)
    }
}

pub fn gram_matrix(emb: &Embedding, xs: &[Chain1]) -> Result<GramMatrix> {
    let n = xs.len();
    let mut rows = vec![BitVec::zeros(n); n];
    for i in 0..n {
        for j in i..n {
            let v = if i == j { self_intersection(emb, &xs[i])? } else { pairing(emb, &xs[i], &xs[j])? };
            rows[i].set(j, v);
            rows[j].set(i, v);
        }
    }
    GramMatrix::from_matrix(Gf2Matrix::from_rows(n, rows))
}

/// Outcome of the Gram-rank test. Full rank proves homological
/// independence; anything less proves nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankVerdict {
    Independent,
    Inconclusive,
}

pub fn independence_by_rank(m: &GramMatrix) -> RankVerdict {
    if m.rank() == m.size() {
        RankVerdict::Independent
    } else {
        RankVerdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::Sign;
    use crate::graph::build_graph;
    use crate::homology::Homology;

    fn bouquet(rotation: &[usize], signs: Vec<Sign>) -> Embedding {
        let loops = signs.len();
        let edges: Vec<(&str, &str)> = vec![("v", "v"); loops];
        let g = build_graph(&["v"], &edges).unwrap();
        Embedding::new(g, vec![rotation.iter().map(|&d| Dart(d)).collect()], signs).unwrap()
    }

    fn torus() -> Embedding {
        bouquet(&[0, 2, 1, 3], vec![Sign::Plus; 2])
    }

    #[test]
    fn torus_meridian_longitude() {
        let t = torus();
        let a = Chain1::from_edges(2, [0]);
        let b = Chain1::from_edges(2, [1]);
        assert!(pair_circles(&t, &a, &b).unwrap());
        assert!(pair_circles(&t, &b, &a).unwrap());
        assert!(!self_intersection(&t, &a).unwrap());
        assert!(pairing(&t, &(&a + &b), &a).unwrap());
        assert!(!pairing(&t, &a, &Chain1::zero(2)).unwrap());
        let m = gram_matrix(&t, &[a, b]).unwrap();
        assert_eq!(m.matrix().to_nested(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(independence_by_rank(&m), RankVerdict::Independent);
    }

    #[test]
    fn sphere_loop_is_inconclusive() {
        let s = bouquet(&[0, 1], vec![Sign::Plus]);
        let m = gram_matrix(&s, &[Chain1::from_edges(1, [0])]).unwrap();
        assert_eq!(m.matrix().to_nested(), vec![vec![0]]);
        assert_eq!(independence_by_rank(&m), RankVerdict::Inconclusive);
    }

    #[test]
    fn projective_plane_self_pairing() {
        let p = bouquet(&[0, 1], vec![Sign::Minus]);
        assert!(self_intersection(&p, &Chain1::from_edges(1, [0])).unwrap());
    }

    #[test]
    fn disjoint_circles_do_not_cross() {
        let g = build_graph(&["v", "u"], &[("v", "v"), ("u", "u"), ("v", "u")]).unwrap();
        let e = Embedding::default_for(g);
        let a = Chain1::from_edges(3, [0]);
        let b = Chain1::from_edges(3, [1]);
        assert!(!pair_circles(&e, &a, &b).unwrap());
    }

    #[test]
    fn two_twisted_circles_sum_to_zero() {
        // Klein bottle bouquet a+ a- b+ b-, both twisted
        let kb = bouquet(&[0, 1, 2, 3], vec![Sign::Minus; 2]);
        let a = Chain1::from_edges(2, [0]);
        let b = Chain1::from_edges(2, [1]);
        assert!(self_intersection(&kb, &a).unwrap());
        assert!(!self_intersection(&kb, &(&a + &b)).unwrap());
        assert!(!pair_circles(&kb, &a, &b).unwrap());
    }

    #[test]
    fn genus_two_symplectic_blocks() {
        // a+ b+ a- b- c+ d+ c- d-
        let e = bouquet(&[0, 2, 1, 3, 4, 6, 5, 7], vec![Sign::Plus; 4]);
        let xs: Vec<Chain1> = (0..4).map(|i| Chain1::from_edges(4, [i])).collect();
        let m = gram_matrix(&e, &xs).unwrap();
        assert_eq!(
            m.matrix().to_nested(),
            vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]]
        );
        assert_eq!(independence_by_rank(&m), RankVerdict::Independent);
        assert_eq!(Homology::new(&e).betti1(), 4);
    }

    #[test]
    fn shared_segment_crossing() {
        // planar K4; circles sharing paths in the plane always pair to 0
        let g = build_graph(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("a", "c"), ("b", "d")],
        )
        .unwrap();
        // unit square a b c d counterclockwise, a-c inside, b-d around the outside
        let d = |e: usize, pos: bool| if pos { Dart::positive(e) } else { Dart::negative(e) };
        let rot = vec![
            vec![d(0, true), d(4, true), d(3, false)],
            vec![d(5, true), d(1, true), d(0, false)],
            vec![d(2, true), d(4, false), d(1, false)],
            vec![d(2, false), d(5, false), d(3, true)],
        ];
        let emb = Embedding::new(g, rot, vec![Sign::Plus; 6]).unwrap();
        assert_eq!(emb.euler_characteristic(), 2);
        let square = Chain1::from_edges(6, [0, 1, 2, 3]);
        let tri = Chain1::from_edges(6, [0, 1, 4]);
        let other = Chain1::from_edges(6, [0, 5, 3]);
        assert!(!pair_circles(&emb, &square, &tri).unwrap());
        assert!(!pair_circles(&emb, &tri, &other).unwrap());
        assert!(!pair_circles(&emb, &other, &square).unwrap());
    }

    mod properties {
        use super::super::*;
        use crate::homology::{independent_direct, Homology};
        use crate::random::{random_cycle, random_small_embedding};
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn homology_invariant_symmetric_bilinear(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let emb = random_small_embedding(&mut rng, 6, 6);
                let g = emb.graph();
                let z = random_cycle(&mut rng, g);
                let w = random_cycle(&mut rng, g);
                let u = random_cycle(&mut rng, g);
                let zw = pairing(&emb, &z, &w).unwrap();
                prop_assert_eq!(zw, pairing(&emb, &w, &z).unwrap());
                prop_assert_eq!(
                    pairing(&emb, &(&z + &u), &w).unwrap(),
                    zw ^ pairing(&emb, &u, &w).unwrap()
                );
                for b in Homology::new(&emb).face_boundaries() {
                    prop_assert_eq!(pairing(&emb, &(&z + &b), &w).unwrap(), zw);
                    prop_assert!(!pairing(&emb, &b, &w).unwrap());
                }
                prop_assert_eq!(pairing(&emb, &z, &z).unwrap(), self_intersection(&emb, &z).unwrap());
            }

            #[test]
            fn gram_of_h1_basis_is_nondegenerate(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let emb = random_small_embedding(&mut rng, 6, 6);
                let h = Homology::new(&emb);
                let basis = h.h1_basis();
                prop_assert_eq!(basis.len(), h.betti1());
                let m = gram_matrix(&emb, &basis).unwrap();
                prop_assert_eq!(m.rank(), basis.len());
                let z = random_cycle(&mut rng, emb.graph());
                let w = random_cycle(&mut rng, emb.graph());
                let pair = [z, w];
                if independence_by_rank(&gram_matrix(&emb, &pair).unwrap()) == RankVerdict::Independent {
                    prop_assert!(independent_direct(&emb, &pair).unwrap());
                }
            }
        }
    }
}
