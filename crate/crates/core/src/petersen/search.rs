//! Exhaustive search for derived tori over the cyclic quotients of
//! GP(2p, 2).
//!
//! For each quotient voltage graph every base embedding (up to switching)
//! is evaluated by tracing base faces and lifted faces directly on raw
//! rotation arrays. Each evaluation also cross-checks the predicted Euler
//! characteristic and the identity `beta1 = 2 - chi` on base and derived
//! surfaces; the report counts any disagreement.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::EmbeddingSpace;
use super::gp_barbell_voltage;
use super::{gp2_quotient_voltage, gp_p2_quotient_voltage};
use crate::embedding::Sign;
use crate::error::{Error, Result};
use crate::format::EmbeddingJson;
use crate::gf2::rank_of_words;
use crate::graph::Dart;
use crate::group::{FiniteGroup, GroupElement};
use crate::surface::SurfaceClass;
use crate::voltage::{VoltageEmbedding, VoltageGraph};

/// What one base embedding lifts to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub base_chi: i64,
    pub base_orientable: bool,
    pub base_betti: usize,
    pub derived_chi: i64,
    pub derived_orientable: bool,
    pub derived_betti: usize,
    pub predicted_chi: i64,
}

impl Evaluation {
    pub fn derived_surface(&self) -> Result<SurfaceClass> {
        SurfaceClass::new(self.derived_orientable, self.derived_chi)
    }

    pub fn base_surface(&self) -> Result<SurfaceClass> {
        SurfaceClass::new(self.base_orientable, self.base_chi)
    }

    pub fn consistent(&self) -> bool {
        self.predicted_chi == self.derived_chi
            && self.base_betti as i64 == 2 - self.base_chi
            && self.derived_betti as i64 == 2 - self.derived_chi
    }
}

/// Allocation-free evaluator for one voltage graph with a connected
/// derived graph.
pub struct LiftKernel {
    group: FiniteGroup,
    n: usize,
    vertex_count: usize,
    edge_count: usize,
    head: Vec<usize>,
    darts_at: Vec<Vec<Dart>>,
    volt: Vec<GroupElement>,
    seen: Vec<bool>,
    pot: Vec<u8>,
    queue: Vec<usize>,
    rows: Vec<u64>,
}

impl LiftKernel {
    pub fn new(vg: &VoltageGraph) -> Result<LiftKernel> {
        let g = vg.graph();
        if !vg.derived_graph().is_connected() {
            return Err(Error::Precondition("derived graph is disconnected".into()));
        }
        let n = vg.group().order();
        Ok(LiftKernel {
            group: vg.group().clone(),
            n,
            vertex_count: g.vertex_count(),
            edge_count: g.edge_count(),
            head: g.darts().map(|d| g.head(d)).collect(),
            darts_at: (0..g.vertex_count()).map(|v| g.darts_at(v).to_vec()).collect(),
            volt: g.darts().map(|d| vg.voltage(d)).collect(),
            seen: Vec::new(),
            pot: Vec::new(),
            queue: Vec::new(),
            rows: Vec::new(),
        })
    }

    #[inline]
    fn step(succ: &[Dart], pred: &[Dart], signs: &[Sign], d: Dart, s: Sign) -> (Dart, Sign) {
        let s = s * signs[d.edge()];
        let back = d.opposite();
        (if s == Sign::Plus { succ[back.0] } else { pred[back.0] }, s)
    }

    /// Balance test over `copies` sheets, edges lifted with the voltages
    /// (or all in one sheet when `copies == 1`).
    fn balanced(&mut self, signs: &[Sign], copies: usize) -> bool {
        let total = self.vertex_count * copies;
        self.pot.clear();
        self.pot.resize(total, 2);
        self.queue.clear();
        self.pot[0] = 0;
        self.queue.push(0);
        while let Some(x) = self.queue.pop() {
            let (v, a) = (x / copies, GroupElement(x % copies));
            for &d in &self.darts_at[v] {
                let b = if copies == 1 { a } else { self.group.op(a, self.volt[d.0]) };
                let y = self.head[d.0] * copies + b.0;
                let want = self.pot[x] ^ signs[d.edge()].is_negative() as u8;
                if self.pot[y] == 2 {
                    self.pot[y] = want;
                    self.queue.push(y);
                } else if self.pot[y] != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn evaluate(&mut self, succ: &[Dart], pred: &[Dart], signs: &[Sign]) -> Evaluation {
        let grp = self.group.clone();
        let n = self.n;
        let darts = 2 * self.edge_count;

        // base faces with their net voltages
        let state = |d: Dart, s: Sign| 2 * d.0 + s.is_negative() as usize;
        let words = self.edge_count.div_ceil(64).max(1);
        self.seen.clear();
        self.seen.resize(2 * darts, false);
        self.rows.clear();
        let mut base_faces = 0usize;
        let mut deficiency = 0usize;
        for d0 in (0..darts).map(Dart) {
            for s0 in [Sign::Plus, Sign::Minus] {
                if self.seen[state(d0, s0)] {
                    continue;
                }
                base_faces += 1;
                let row = self.rows.len();
                self.rows.resize(row + words, 0);
                let mut omega = grp.identity();
                let (mut d, mut s) = (d0, s0);
                loop {
                    self.seen[state(d, s)] = true;
                    let rs = (s * signs[d.edge()]).flip();
                    self.seen[state(d.opposite(), rs)] = true;
                    self.rows[row + d.edge() / 64] ^= 1 << (d.edge() % 64);
                    omega = grp.op(omega, self.volt[d.0]);
                    (d, s) = Self::step(succ, pred, signs, d, s);
                    if (d, s) == (d0, s0) {
                        break;
                    }
                }
                deficiency += n - n / grp.element_order(omega);
            }
        }
        let base_rank = rank_of_words(&mut self.rows, words);
        let base_chi = self.vertex_count as i64 - self.edge_count as i64 + base_faces as i64;
        let base_betti = self.edge_count + 1 - self.vertex_count - base_rank;
        let base_orientable = self.balanced(signs, 1);

        // derived faces, traced on lifted (dart, sheet, side) states
        let dwords = (self.edge_count * n).div_ceil(64).max(1);
        let lstate = |d: Dart, a: GroupElement, s: Sign| (2 * d.0 + s.is_negative() as usize) * n + a.0;
        self.seen.clear();
        self.seen.resize(2 * darts * n, false);
        self.rows.clear();
        let mut derived_faces = 0usize;
        for d0 in (0..darts).map(Dart) {
            for a0 in grp.elements() {
                for s0 in [Sign::Plus, Sign::Minus] {
                    if self.seen[lstate(d0, a0, s0)] {
                        continue;
                    }
                    derived_faces += 1;
                    let row = self.rows.len();
                    self.rows.resize(row + dwords, 0);
                    let (mut d, mut a, mut s) = (d0, a0, s0);
                    loop {
                        self.seen[lstate(d, a, s)] = true;
                        let b = grp.op(a, self.volt[d.0]);
                        let rs = (s * signs[d.edge()]).flip();
                        self.seen[lstate(d.opposite(), b, rs)] = true;
                        let sheet = if d.is_positive() { a } else { b };
                        let de = d.edge() * n + sheet.0;
                        self.rows[row + de / 64] ^= 1 << (de % 64);
                        let (nd, ns) = Self::step(succ, pred, signs, d, s);
                        (d, a, s) = (nd, b, ns);
                        if (d, a, s) == (d0, a0, s0) {
                            break;
                        }
                    }
                }
            }
        }
        let derived_rank = rank_of_words(&mut self.rows, dwords);
        let (dv, de) = ((self.vertex_count * n) as i64, (self.edge_count * n) as i64);
        let derived_chi = dv - de + derived_faces as i64;
        let derived_betti = (de - dv + 1) as usize - derived_rank;
        let derived_orientable = self.balanced(signs, n);
        Evaluation {
            base_chi,
            base_orientable,
            base_betti,
            derived_chi,
            derived_orientable,
            derived_betti,
            predicted_chi: n as i64 * base_chi - deficiency as i64,
        }
    }
}

/// One of the three quotient voltage graphs.
#[derive(Clone, Debug)]
pub struct QuotientSpec {
    pub id: String,
    pub description: String,
    pub voltage_graph: VoltageGraph,
}

/// The barbell over Z_2p, GP(2,0) over Z_p and GP(p,2) over Z_2.
pub fn quotients(p: usize) -> Result<Vec<QuotientSpec>> {
    Ok(vec![
        QuotientSpec {
            id: "barbell".into(),
            description: format!("GP(1,0) over Z_{}, loop voltages 1 and 2", 2 * p),
            voltage_graph: gp_barbell_voltage(2 * p, 2)?,
        },
        QuotientSpec {
            id: "gp2_0".into(),
            description: format!("GP(2,0) over Z_{p}, voltage 1 on o1 and both loops"),
            voltage_graph: gp2_quotient_voltage(p)?,
        },
        QuotientSpec {
            id: format!("gp{p}_2"),
            description: format!("GP({p},2) over Z_2, voltage 1 on every outer edge"),
            voltage_graph: gp_p2_quotient_voltage(p)?,
        },
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub index: u64,
    pub base_surface: SurfaceClass,
    pub embedding: EmbeddingJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub id: String,
    pub description: String,
    pub embeddings: u64,
    /// Derived surface code (`S<genus>` / `N<crosscaps>`) to count.
    pub tally: IndexMap<String, u64>,
    pub torus_witnesses: u64,
    pub witnesses: Vec<Witness>,
    pub inconsistencies: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub p: usize,
    pub partial_evidence: bool,
    pub note: String,
    pub quotients: Vec<QuotientReport>,
    pub total_embeddings: u64,
    pub total_torus_witnesses: u64,
}

impl SearchReport {
    pub fn table(&self) -> String {
        let mut out = format!("no-torus search, p = {}\n", self.p);
        out += &format!("{:<10} {:>10} {:>8} {:>6}  derived surfaces\n", "quotient", "embeddings", "tori", "bad");
        for q in &self.quotients {
            let tally = q.tally.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ");
            out += &format!(
                "{:<10} {:>10} {:>8} {:>6}  {}\n",
                q.id, q.embeddings, q.torus_witnesses, q.inconsistencies, tally
            );
        }
        out += &format!("total {} embeddings, {} derived tori\n", self.total_embeddings, self.total_torus_witnesses);
        if !self.note.is_empty() {
            out += &format!("note: {}\n", self.note);
        }
        out
    }
}

#[derive(Default)]
struct Partial {
    tally: BTreeMap<SurfaceClass, u64>,
    tori: Vec<u128>,
    torus_count: u64,
    inconsistencies: u64,
    count: u64,
}

impl Partial {
    fn merge(mut self, other: Partial, cap: usize) -> Partial {
        for (k, v) in other.tally {
            *self.tally.entry(k).or_default() += v;
        }
        self.tori.extend(other.tori);
        self.tori.sort_unstable();
        self.tori.truncate(cap);
        self.torus_count += other.torus_count;
        self.inconsistencies += other.inconsistencies;
        self.count += other.count;
        self
    }
}

fn scan(space: &EmbeddingSpace, vg: &VoltageGraph, start: u128, end: u128, cap: usize) -> Result<Partial> {
    let mut kernel = LiftKernel::new(vg)?;
    let mut part = Partial::default();
    if start >= end {
        return Ok(part);
    }
    let mut cur = space.cursor(start);
    loop {
        let ev = kernel.evaluate(&cur.succ, &cur.pred, &cur.signs);
        part.count += 1;
        if !ev.consistent() {
            part.inconsistencies += 1;
        }
        match ev.derived_surface() {
            Ok(s) => {
                *part.tally.entry(s).or_default() += 1;
                if s == SurfaceClass::TORUS {
                    part.torus_count += 1;
                    if part.tori.len() < cap {
                        part.tori.push(cur.index());
                    }
                }
            }
            Err(_) => part.inconsistencies += 1,
        }
        if cur.index() + 1 >= end || !cur.advance() {
            break;
        }
    }
    Ok(part)
}

/// Enumerates every base embedding of one quotient, in parallel over
/// `jobs` workers; the result does not depend on `jobs`.
pub fn search_quotient(q: &QuotientSpec, jobs: usize, limit: u128, witness_cap: usize) -> Result<QuotientReport> {
    let vg = &q.voltage_graph;
    let space = EmbeddingSpace::new(vg.graph(), limit)?;
    let total = space.count();
    let chunks = (jobs.max(1) as u128 * 16).min(total.max(1));
    let bounds: Vec<(u128, u128)> = (0..chunks).map(|i| (total * i / chunks, total * (i + 1) / chunks)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let parts: Vec<Result<Partial>> =
        pool.install(|| bounds.par_iter().map(|&(s, e)| scan(&space, vg, s, e, witness_cap)).collect());
    let mut merged = Partial::default();
    for p in parts {
        merged = merged.merge(p?, witness_cap);
    }
    let witnesses = merged
        .tori
        .iter()
        .map(|&i| {
            let emb = space.embedding_at(i);
            let base_surface = emb.classify_surface()?;
            let ve = VoltageEmbedding::new(emb, vg.group().clone(), vg.voltages().to_vec())?;
            Ok(Witness { index: i as u64, base_surface, embedding: EmbeddingJson::from_voltage_embedding(&ve) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuotientReport {
        id: q.id.clone(),
        description: q.description.clone(),
        embeddings: merged.count,
        tally: merged.tally.iter().map(|(k, v)| (k.code(), *v)).collect(),
        torus_witnesses: merged.torus_count,
        witnesses,
        inconsistencies: merged.inconsistencies,
    })
}

/// Runs all three quotients for GP(2p, 2), `p` an odd prime up to 11.
pub fn no_torus_search(p: usize, jobs: usize, limit: u128) -> Result<SearchReport> {
    if ![3, 5, 7, 11].contains(&p) {
        return Err(Error::Precondition(format!("p must be an odd prime at most 11, got {p}")));
    }
    let mut reports = Vec::new();
    for q in quotients(p)? {
        reports.push(search_quotient(&q, jobs, limit, 8)?);
    }
    let note = match p {
        3 => "GP(6,2) does embed in the torus; this run is a contrast check, not evidence that GP(2p,2) avoids the torus".into(),
        5 => "partial evidence only: GP(10,2) is vertex-transitive, so these three cyclic quotients are not all free actions"
            .into(),
        _ => String::new(),
    };
    Ok(SearchReport {
        p,
        partial_evidence: p <= 5,
        note,
        total_embeddings: reports.iter().map(|r| r.embeddings).sum(),
        total_torus_witnesses: reports.iter().map(|r| r.torus_witnesses).sum(),
        quotients: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::petersen::enumerate::EmbeddingSpace;

    fn slow(vg: &VoltageGraph, emb: crate::embedding::Embedding) -> Evaluation {
        let ve = VoltageEmbedding::new(emb, vg.group().clone(), vg.voltages().to_vec()).unwrap();
        let d = ve.derived_embedding();
        let base = ve.base();
        Evaluation {
            base_chi: base.euler_characteristic(),
            base_orientable: base.is_orientable(),
            base_betti: crate::homology::betti1(base),
            derived_chi: d.euler_characteristic(),
            derived_orientable: d.is_orientable(),
            derived_betti: crate::homology::betti1(&d),
            predicted_chi: ve.riemann_hurwitz_chi(),
        }
    }

    #[test]
    fn kernel_agrees_with_full_construction() {
        for vg in [gp_barbell_voltage(6, 2).unwrap(), gp2_quotient_voltage(3).unwrap()] {
            let space = EmbeddingSpace::new(vg.graph(), 1000).unwrap();
            let mut kernel = LiftKernel::new(&vg).unwrap();
            let mut cur = space.cursor(0);
            loop {
                let fast = kernel.evaluate(&cur.succ, &cur.pred, &cur.signs);
                assert_eq!(fast, slow(&vg, cur.embedding()), "index {}", cur.index());
                assert!(fast.consistent());
                if !cur.advance() {
                    break;
                }
            }
        }
    }

    #[test]
    fn kernel_agrees_on_sampled_gp5_2() {
        let vg = gp_p2_quotient_voltage(5).unwrap();
        let space = EmbeddingSpace::new(vg.graph(), u128::MAX).unwrap();
        let mut kernel = LiftKernel::new(&vg).unwrap();
        for i in (0..space.count()).step_by(9973) {
            let cur = space.cursor(i);
            assert_eq!(kernel.evaluate(&cur.succ, &cur.pred, &cur.signs), slow(&vg, cur.embedding()));
        }
    }

    #[test]
    fn jobs_do_not_change_the_report() {
        let q = &quotients(3).unwrap()[1];
        let a = search_quotient(q, 1, u128::MAX, 4).unwrap();
        let b = search_quotient(q, 3, u128::MAX, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.embeddings, 128);
        assert_eq!(a.tally.values().sum::<u64>(), 128);
    }
}
