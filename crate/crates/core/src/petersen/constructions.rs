//! The fixed GP(2p, 2) embeddings: the derived sphere, the torus obtained
//! by rerouting two inner edges, the derived torus for GP(6,2) and the
//! derived Klein bottles.
//!
//! Base data for the voltage fixtures is found by scanning the embedding
//! space of a quotient in index order and taking the first embedding whose
//! lift has the required properties, so the result is deterministic.

use super::enumerate::{EmbeddingSpace, DEFAULT_LIMIT};
use super::search::{quotients, Evaluation, LiftKernel};
use super::{gp_barbell_voltage, gp_graph, gp_p2_quotient_voltage, strip_sheet_names, GpSpec};
use crate::embedding::{Embedding, Sign};
use crate::error::{Error, Result};
use crate::graph::{Dart, Graph};
use crate::iso::graph_isomorphic;
use crate::surface::SurfaceClass;
use crate::voltage::{VoltageEmbedding, VoltageGraph};

fn odd_at_least_3(p: usize) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::Precondition(format!("expected odd p >= 3, got {p}")));
    }
    Ok(())
}

/// First base embedding (in enumeration order) whose evaluation passes `want`.
pub fn first_base_embedding(vg: &VoltageGraph, want: impl Fn(&Evaluation) -> bool) -> Result<Option<VoltageEmbedding>> {
    let space = EmbeddingSpace::new(vg.graph(), DEFAULT_LIMIT)?;
    let mut kernel = LiftKernel::new(vg)?;
    let mut cur = space.cursor(0);
    loop {
        if want(&kernel.evaluate(&cur.succ, &cur.pred, &cur.signs)) {
            let ve = VoltageEmbedding::new(cur.embedding(), vg.group().clone(), vg.voltages().to_vec())?;
            return Ok(Some(ve));
        }
        if !cur.advance() {
            return Ok(None);
        }
    }
}

/// Checks a voltage fixture: derived graph isomorphic to `target`, derived
/// surface as claimed, Riemann-Hurwitz agreement, face lifts, free action.
pub fn verify_fixture(ve: &VoltageEmbedding, target: &Graph, surface: SurfaceClass) -> Result<()> {
    let derived = ve.derived_embedding();
    if graph_isomorphic(derived.graph(), target).is_none() {
        return Err(Error::Inconsistent("derived graph is not isomorphic to the target".into()));
    }
    let got = derived.classify_surface()?;
    if got != surface {
        return Err(Error::Inconsistent(format!("derived surface is {got}, expected {surface}")));
    }
    if ve.riemann_hurwitz_chi() != derived.euler_characteristic() {
        return Err(Error::Inconsistent("Riemann-Hurwitz prediction disagrees".into()));
    }
    ve.check_face_lifts(&derived)?;
    if !ve.verify_free_action() {
        return Err(Error::Inconsistent("voltage group action is not free".into()));
    }
    Ok(())
}

/// Barbell in the projective plane over Z_2p, loop voltages 1 and 2, whose
/// lift is GP(2p, 2) in the sphere.
pub fn gp_sphere_voltage(p: usize) -> Result<VoltageEmbedding> {
    odd_at_least_3(p)?;
    let vg = gp_barbell_voltage(2 * p, 2)?;
    let want = |e: &Evaluation| !e.base_orientable && e.base_chi == 1 && e.derived_orientable && e.derived_chi == 2;
    let ve = first_base_embedding(&vg, want)?
        .ok_or_else(|| Error::NoWitness(format!("no projective-plane barbell lifts to a sphere over Z_{}", 2 * p)))?;
    verify_fixture(&ve, &gp_graph(2 * p, 2)?, SurfaceClass::SPHERE)?;
    let grp = ve.group();
    let mut gens: Vec<Vec<usize>> = ve
        .base()
        .trace_faces()
        .iter()
        .map(|f| grp.generated_subgroup(&[ve.face_voltage(f)]).elements().iter().map(|a| a.0).collect())
        .collect();
    gens.sort();
    let two: Vec<usize> = (0..p).map(|i| 2 * i).collect();
    if gens != [vec![0], two] {
        return Err(Error::Inconsistent(format!("face voltages generate {gens:?}")));
    }
    Ok(ve)
}

/// The derived sphere of [`gp_sphere_voltage`] on the labels of
/// `gp_graph(2p, 2)`, switched to all-positive signs.
pub fn sphere_embedding(p: usize) -> Result<Embedding> {
    strip_sheet_names(&gp_sphere_voltage(p)?.derived_embedding())?.with_positive_signs()
}

/// Face boundaries of an all-positive embedding as dart cycles, each face
/// traced once along `d -> succ(opposite d)`.
fn oriented_faces(emb: &Embedding) -> Vec<Vec<Dart>> {
    let g = emb.graph();
    let mut seen = vec![false; g.dart_count()];
    let mut faces = Vec::new();
    for d0 in g.darts() {
        if seen[d0.0] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = d0;
        while !seen[d.0] {
            seen[d.0] = true;
            face.push(d);
            d = emb.succ(d.opposite());
        }
        faces.push(face);
    }
    faces
}

/// The dart at `v` after which a new dart lands in the corner of `v` on the
/// unique face that visits `v` once and meets every vertex in `witnesses`.
fn corner(emb: &Embedding, v: usize, witnesses: &[usize]) -> Result<Dart> {
    let g = emb.graph();
    let mut found = None;
    for face in oriented_faces(emb) {
        let walk: Vec<usize> = face.iter().map(|&d| g.tail(d)).collect();
        if !witnesses.iter().all(|w| walk.contains(w)) {
            continue;
        }
        let visits: Vec<usize> = (0..face.len()).filter(|&i| walk[i] == v).collect();
        if visits.len() != 1 {
            continue;
        }
        // the face enters v by the dart before it and leaves by succ of the reverse
        let i = visits[0];
        let into = face[(i + face.len() - 1) % face.len()];
        if found.replace(into.opposite()).is_some() {
            return Err(Error::Inconsistent(format!("corner at {} is ambiguous", g.vertex_name(v))));
        }
    }
    found.ok_or_else(|| Error::Inconsistent(format!("no face corner found at {}", g.vertex_name(v))))
}

/// Reorders edges to match `target` by name.
fn on_graph(emb: &Embedding, target: &Graph) -> Result<Embedding> {
    let g = emb.graph();
    let map = |d: Dart| -> Result<Dart> {
        let e =
            target.edge_index(g.edge_name(d.edge())).ok_or_else(|| Error::UnknownEdge(g.edge_name(d.edge()).into()))?;
        // keep the dart's direction when the ends are listed the other way round
        Ok(if (g.ends(d.edge()) == target.ends(e)) == d.is_positive() { Dart::positive(e) } else { Dart::negative(e) })
    };
    let rotation = emb.rotations().iter().map(|r| r.iter().map(|&d| map(d)).collect()).collect::<Result<Vec<_>>>()?;
    let mut signs = vec![Sign::Plus; target.edge_count()];
    for e in 0..g.edge_count() {
        signs[map(Dart::positive(e))?.edge()] = emb.sign(e);
    }
    Embedding::new(target.clone(), rotation, signs)
}

/// GP(2p, 2) in the torus: take the derived sphere, delete `u0u2` and
/// `u2u4`, put `u0u2` back inside the face that now holds the pendant
/// vertex `u2`, and route `u2u4` from the restored pentagon at `u2` into
/// the large face at `u4`, joining two faces into one.
pub fn construct_torus_embedding(p: usize) -> Result<Embedding> {
    odd_at_least_3(p)?;
    let spec = GpSpec::new(2 * p, 2)?;
    let target = spec.graph();
    let sphere = sphere_embedding(p)?;
    let (u0, u2, u4) = (spec.u(0), spec.u(2), spec.u(4));
    let (v0, v3) = (spec.v(0), spec.v(3));
    let cut = sphere.delete_edge(spec.inner(0))?;
    let i2 = cut.graph().edge_index("i2").expect("i2 survives");
    let cut = cut.delete_edge(i2)?;
    let faces_cut = oriented_faces(&cut).len();

    let at_u0 = corner(&cut, u0, &[u2])?;
    let at_u2 = cut.graph().darts_at(u2)[0];
    let one = cut.insert_edge("i0", u0, Some(at_u0), u2, Some(at_u2), Sign::Plus)?;
    if oriented_faces(&one).len() != faces_cut + 1 {
        return Err(Error::Inconsistent("u0u2 did not split its face".into()));
    }

    let at_u2 = corner(&one, u2, &[v0])?;
    let at_u4 = corner(&one, u4, &[v3])?;
    let two = one.insert_edge("i2", u2, Some(at_u2), u4, Some(at_u4), Sign::Plus)?;
    let torus = on_graph(&two, &target)?;
    if torus.classify_surface()? != SurfaceClass::TORUS || torus.face_count() != 2 * p {
        return Err(Error::Inconsistent(format!("construction gave {}", torus.classify_surface()?)));
    }
    Ok(torus)
}

/// Vertex walk `u0 v0 v1 v2 u2 u4 u6 ... u0 u2 v2 v3 v4 u4 u2` of the face
/// created by the construction.
pub fn torus_face_walk(p: usize) -> Result<Vec<usize>> {
    odd_at_least_3(p)?;
    let s = GpSpec::new(2 * p, 2)?;
    let mut w = vec![s.u(0), s.v(0), s.v(1), s.v(2), s.u(2)];
    w.extend((2..=p).map(|j| s.u(2 * j)));
    w.extend([s.u(2), s.v(2), s.v(3), s.v(4), s.u(4), s.u(2)]);
    Ok(w)
}

/// Whether some face of an all-positive embedding has `walk` as its
/// vertex sequence, up to rotation and reversal.
pub fn has_face_walk(emb: &Embedding, walk: &[usize]) -> bool {
    let g = emb.graph();
    let matches = |face: &[usize], w: &[usize]| {
        face.len() == w.len() && (0..face.len()).any(|k| (0..w.len()).all(|i| face[(k + i) % face.len()] == w[i]))
    };
    let rev: Vec<usize> = walk.iter().rev().copied().collect();
    oriented_faces(emb).iter().any(|f| {
        let vs: Vec<usize> = f.iter().map(|&d| g.tail(d)).collect();
        matches(&vs, walk) || matches(&vs, &rev)
    })
}

/// Whether consecutive vertices of the closed walk are all adjacent.
pub fn is_closed_walk(g: &Graph, walk: &[usize]) -> bool {
    (0..walk.len()).all(|i| g.multiplicity(walk[i], walk[(i + 1) % walk.len()]) > 0)
}

/// GP(3,2) over Z_2 lifted to GP(6,2) in the torus.
pub fn gp62_torus_voltage() -> Result<VoltageEmbedding> {
    let vg = gp_p2_quotient_voltage(3)?;
    let want = |e: &Evaluation| e.derived_orientable && e.derived_chi == 0;
    let ve =
        first_base_embedding(&vg, want)?.ok_or_else(|| Error::NoWitness("no GP(3,2) base lifts to a torus".into()))?;
    verify_fixture(&ve, &gp_graph(6, 2)?, SurfaceClass::TORUS)?;
    Ok(ve)
}

/// A quotient of GP(2q, 2) whose lift is the Klein bottle, trying the
/// barbell, GP(2,0) and GP(q,2) quotients in that order.
pub fn kb_embedding(q: usize) -> Result<VoltageEmbedding> {
    odd_at_least_3(q)?;
    let want = |e: &Evaluation| !e.derived_orientable && e.derived_chi == 0;
    for quotient in quotients(q)? {
        if let Some(ve) = first_base_embedding(&quotient.voltage_graph, want)? {
            verify_fixture(&ve, &gp_graph(2 * q, 2)?, SurfaceClass::KLEIN_BOTTLE)?;
            return Ok(ve);
        }
    }
    Err(Error::NoWitness(format!("no quotient of GP({},2) lifts to a Klein bottle", 2 * q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_faces_are_two_inner_cycles_and_pentagons() {
        for p in [3, 5, 7] {
            let s = GpSpec::new(2 * p, 2).unwrap();
            let emb = sphere_embedding(p).unwrap();
            assert_eq!(emb.face_count(), 2 * p + 2);
            let mut lens: Vec<usize> = oriented_faces(&emb).iter().map(|f| f.len()).collect();
            lens.sort();
            let mut want = [vec![5; 2 * p], vec![p; 2]].concat();
            want.sort();
            assert_eq!(lens, want);
            for a in 0..2 * p {
                let pent = [s.v(a), s.v(a + 1), s.v(a + 2), s.u(a + 2), s.u(a)];
                assert!(has_face_walk(&emb, &pent), "pentagon at {a}");
            }
        }
    }

    #[test]
    fn torus_construction() {
        for p in [3, 5, 7, 11] {
            let t = construct_torus_embedding(p).unwrap();
            assert_eq!(t.euler_characteristic(), 0);
            assert!(t.is_orientable());
            assert_eq!(t.face_count(), 2 * p);
            assert!(has_face_walk(&t, &torus_face_walk(p).unwrap()), "p = {p}");
        }
    }

    #[test]
    fn torus_is_the_sphere_with_u2_reversed() {
        let p = 5;
        let s = GpSpec::new(2 * p, 2).unwrap();
        let sphere = sphere_embedding(p).unwrap();
        let mut rot = sphere.rotations().to_vec();
        rot[s.u(2)].reverse();
        let flipped = Embedding::new(sphere.graph().clone(), rot, sphere.signs().to_vec()).unwrap();
        assert_eq!(flipped.face_count(), construct_torus_embedding(p).unwrap().face_count());
        assert!(has_face_walk(&flipped, &torus_face_walk(p).unwrap()));
    }

    #[test]
    fn literal_walk_with_v4_u2_step_is_not_a_walk() {
        let s = GpSpec::new(6, 2).unwrap();
        let g = s.graph();
        let literal = [
            s.u(0),
            s.v(0),
            s.v(1),
            s.v(2),
            s.u(2),
            s.u(4),
            s.u(0),
            s.u(2),
            s.v(2),
            s.v(3),
            s.v(4),
            s.u(4),
            s.v(4),
            s.u(2),
        ];
        assert!(!is_closed_walk(&g, &literal));
        assert!(is_closed_walk(&g, &torus_face_walk(3).unwrap()));
    }

    #[test]
    fn voltage_fixtures() {
        let ve = gp62_torus_voltage().unwrap();
        assert_eq!(ve.group().order(), 2);
        for q in [3, 5] {
            let kb = kb_embedding(q).unwrap();
            assert_eq!(kb.derived_embedding().classify_surface().unwrap(), SurfaceClass::KLEIN_BOTTLE);
        }
    }

    #[test]
    fn rejects_even_p() {
        assert!(gp_sphere_voltage(4).is_err());
        assert!(construct_torus_embedding(2).is_err());
        assert!(kb_embedding(1).is_err());
    }
}
