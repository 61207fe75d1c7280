//! The twelve acceptance checks, shared by `voltsurf verify-paper` and the
//! `acceptance` test target.

use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::Chain1;
use crate::embedding::Embedding;
use crate::error::Result;
use crate::format::{read_embedding, read_voltage_embedding};
use crate::homology::{cycle_basis, independent_direct, Homology};
use crate::intersection::{gram_matrix, independence_by_rank, pairing, RankVerdict};
use crate::iso::graph_isomorphic;
use crate::petersen::constructions::{
    construct_torus_embedding, gp62_torus_voltage, gp_sphere_voltage, has_face_walk, kb_embedding, torus_face_walk,
    verify_fixture,
};
use crate::petersen::enumerate::DEFAULT_LIMIT;
use crate::petersen::search::{no_torus_search, quotients, search_quotient};
use crate::petersen::{bouquet_torus_action, fixtures, gp_barbell_voltage, gp_graph, verify_k33_minor};
use crate::random::{random_coset_case, random_cycle, random_small_embedding, random_voltage_embedding};
use crate::surface::SurfaceClass;
use crate::voltage::VoltageEmbedding;

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    pub jobs: usize,
    pub limit: u128,
    /// Directory of frozen fixtures to compare against, if any.
    pub fixtures: Option<PathBuf>,
}

impl Default for CheckConfig {
    fn default() -> CheckConfig {
        CheckConfig {
            seed: 2024,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            limit: DEFAULT_LIMIT,
            fixtures: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub claim: String,
    pub passed: bool,
    pub correct: bool,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} ({:.2}s / {:.0}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.claim,
            self.seconds,
            self.budget_seconds,
            self.detail
        )
    }
}

/// `beta1 = 2c - chi` and face-lift counts, accumulated over every suite.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Structural {
    pub betti_checked: u64,
    pub betti_failed: u64,
    pub lifts_checked: u64,
    pub lifts_failed: u64,
}

impl Structural {
    pub fn embedding(&mut self, e: &Embedding) {
        let c = e.graph().component_count() as i64;
        self.betti_checked += 1;
        if Homology::new(e).betti1() as i64 != 2 * c - e.euler_characteristic() {
            self.betti_failed += 1;
        }
    }

    pub fn voltage(&mut self, ve: &VoltageEmbedding, derived: &Embedding) {
        self.embedding(ve.base());
        self.embedding(derived);
        self.lifts_checked += 1;
        if ve.check_face_lifts(derived).is_err() {
            self.lifts_failed += 1;
        }
    }

    fn ok(&self) -> bool {
        self.betti_failed == 0 && self.lifts_failed == 0
    }
}

fn timed(id: u8, claim: &str, budget: f64, run: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let (correct, detail) = match run() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    CheckResult {
        id,
        claim: claim.to_string(),
        passed: correct && seconds <= budget,
        correct,
        seconds,
        budget_seconds: budget,
        detail,
    }
}

pub fn riemann_hurwitz_suite(seed: u64, cases: usize, st: &mut Structural) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..cases {
        let ve = random_voltage_embedding(&mut rng, 8, 12);
        let derived = ve.derived_embedding();
        if ve.riemann_hurwitz_chi() != derived.euler_characteristic() {
            bad += 1;
        }
        st.voltage(&ve, &derived);
    }
    Ok((bad == 0, format!("{}/{cases} predictions exact", cases - bad)))
}

pub fn coset_suite(seed: u64, cases: usize, st: &mut Structural) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc05e7);
    let mut bad = 0;
    for _ in 0..cases {
        let ve = random_voltage_embedding(&mut rng, 8, 12);
        let (v, faces, x, walk) = random_coset_case(&mut rng, &ve);
        if !ve.coset_counts(v, &faces, &x, &walk)?.all_match() {
            bad += 1;
        }
        st.voltage(&ve, &ve.derived_embedding());
    }
    Ok((bad == 0, format!("{}/{cases} cases match on all four counts", cases - bad)))
}

fn barbell_lifts() -> Result<(bool, String)> {
    let mut ok = true;
    for (n, k) in [(5, 2), (6, 2)] {
        ok &= graph_isomorphic(&gp_barbell_voltage(n, k)?.derived_graph(), &gp_graph(n, k)?).is_some();
    }
    Ok((ok, "barbell over Z_5 and Z_6 with voltages (1,2)".into()))
}

fn bouquet_tori(st: &mut Structural) -> Result<(bool, String)> {
    for n in [6, 10, 14, 9] {
        let ve = bouquet_torus_action(n)?;
        st.voltage(&ve, &ve.derived_embedding());
    }
    Ok((true, "n = 6, 10, 14, 9: connected, orientable, chi 0, free".into()))
}

/// The frozen fixture equals the fresh one and passes the checks itself.
fn compare_fixture(
    cfg: &CheckConfig,
    name: &str,
    fresh: &VoltageEmbedding,
    n: usize,
    surface: SurfaceClass,
) -> Result<bool> {
    let Some(dir) = &cfg.fixtures else { return Ok(true) };
    let frozen = read_voltage_embedding(dir.join(name))?;
    verify_fixture(&frozen, &gp_graph(n, 2)?, surface)?;
    Ok(frozen == *fresh)
}

fn sphere_fixtures(cfg: &CheckConfig, st: &mut Structural) -> Result<(bool, String)> {
    let mut ok = true;
    for p in fixtures::SPHERE_PRIMES {
        let ve = gp_sphere_voltage(p)?;
        let derived = ve.derived_embedding();
        ok &= derived.euler_characteristic() == 2 && ve.riemann_hurwitz_chi() == 2;
        ok &= compare_fixture(cfg, &format!("sphere_p{p}.json"), &ve, 2 * p, SurfaceClass::SPHERE)?;
        st.voltage(&ve, &derived);
    }
    Ok((ok, "p = 3, 5, 7: chi = 2p - (2p - 2) = 2, derived GP(2p,2)".into()))
}

fn torus_construction(cfg: &CheckConfig, st: &mut Structural) -> Result<(bool, String)> {
    let mut ok = true;
    let mut faces = Vec::new();
    for p in [3, 5, 7, 11] {
        let t = construct_torus_embedding(p)?;
        ok &= t.classify_surface()? == SurfaceClass::TORUS && t.face_count() == 2 * p;
        ok &= has_face_walk(&t, &torus_face_walk(p)?);
        faces.push(t.face_count().to_string());
        st.embedding(&t);
        if p == 3 {
            if let Some(dir) = &cfg.fixtures {
                ok &= read_embedding(dir.join("torus_gp6_2.json"))? == t;
            }
        }
    }
    Ok((ok, format!("p = 3, 5, 7, 11: faces {}", faces.join(", "))))
}

fn gp62_fixture(cfg: &CheckConfig, st: &mut Structural) -> Result<(bool, String)> {
    let ve = gp62_torus_voltage()?;
    let fixture_ok = compare_fixture(cfg, "gp62_torus.json", &ve, 6, SurfaceClass::TORUS)?;
    st.voltage(&ve, &ve.derived_embedding());
    Ok((fixture_ok, "GP(3,2) over Z_2 lifts to GP(6,2) in the torus, action free".into()))
}

fn no_torus(cfg: &CheckConfig, st: &mut Structural) -> Result<(bool, String)> {
    let report = no_torus_search(7, cfg.jobs, cfg.limit)?;
    let counts: Vec<String> = report.quotients.iter().map(|q| q.embeddings.to_string()).collect();
    let expected = ["16", "128", "4194304"];
    let bad: u64 = report.quotients.iter().map(|q| q.inconsistencies).sum();
    st.betti_checked += 2 * report.total_embeddings;
    st.betti_failed += bad;
    let contrast = search_quotient(&quotients(3)?[2], cfg.jobs, cfg.limit, 1)?;
    let ok = counts == expected && report.total_torus_witnesses == 0 && bad == 0 && contrast.torus_witnesses > 0;
    Ok((
        ok,
        format!(
            "p = 7: {} embeddings, {} tori; p = 3 on GP(3,2)/Z_2: {} tori; jobs = {}",
            counts.join(" + "),
            report.total_torus_witnesses,
            contrast.torus_witnesses,
            cfg.jobs
        ),
    ))
}

fn kb_fixtures(cfg: &CheckConfig, st: &mut Structural) -> Result<(bool, String)> {
    let mut ok = true;
    for q in fixtures::KB_ORDERS {
        let ve = kb_embedding(q)?;
        ok &= compare_fixture(cfg, &format!("kb_q{q}.json"), &ve, 2 * q, SurfaceClass::KLEIN_BOTTLE)?;
        st.voltage(&ve, &ve.derived_embedding());
    }
    Ok((ok, "q = 3, 5, 7: derived GP(2q,2) in the Klein bottle, action free".into()))
}

/// Every cycle of a small graph that induces a circle.
fn all_circles(g: &crate::graph::Graph) -> Vec<Chain1> {
    let basis = cycle_basis(g);
    if basis.len() > 10 {
        return basis.into_iter().filter(|z| z.is_circle(g)).collect();
    }
    (1u32..1 << basis.len())
        .map(|mask| {
            basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(Chain1::zero(g.edge_count()), |acc, (_, z)| &acc + z)
        })
        .filter(|z| z.is_circle(g))
        .collect()
}

#[derive(Default)]
struct CrossingTally {
    checked: [u64; 3],
    failed: [u64; 3],
    samples: [u64; 3],
}

fn crossing_counts(e: &Embedding, t: &mut CrossingTally) -> Result<()> {
    let kind = match e.classify_surface()? {
        SurfaceClass::PROJECTIVE_PLANE => 0,
        SurfaceClass::TORUS => 1,
        SurfaceClass::KLEIN_BOTTLE => 2,
        _ => return Ok(()),
    };
    t.samples[kind] += 1;
    let h = Homology::new(e);
    let circles = all_circles(e.graph());
    for (i, z1) in circles.iter().enumerate() {
        for (j, z2) in circles.iter().enumerate() {
            if i == j {
                continue;
            }
            let applies = match kind {
                0 => e.negative_parity(z1) && e.negative_parity(z2),
                1 => i < j && h.independent(&[z1.clone(), z2.clone()])?,
                _ => e.negative_parity(z1) && !e.negative_parity(z2) && !h.is_trivial(z2)?,
            };
            if applies {
                t.checked[kind] += 1;
                if !pairing(e, z1, z2)? {
                    t.failed[kind] += 1;
                }
            }
        }
    }
    Ok(())
}

pub fn intersection_suite(seed: u64, cases: usize, st: &mut Structural) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1e7);
    let mut violations = 0u64;
    let mut independent_verdicts = 0u64;
    for _ in 0..cases {
        let e = random_small_embedding(&mut rng, 6, 5);
        let g = e.graph();
        let h = Homology::new(&e);
        let faces = h.face_boundaries();
        let (z, w, u) = (random_cycle(&mut rng, g), random_cycle(&mut rng, g), random_cycle(&mut rng, g));
        let b = &faces[rand::Rng::gen_range(&mut rng, 0..faces.len())];
        let zw = pairing(&e, &z, &w)?;
        let checks = [
            zw == pairing(&e, &w, &z)?,
            pairing(&e, &(&z + &u), &w)? == (zw ^ pairing(&e, &u, &w)?),
            pairing(&e, &(&z + b), &w)? == zw,
            !pairing(&e, b, &w)?,
            pairing(&e, &z, &z)? == e.negative_parity(&z),
        ];
        violations += checks.iter().filter(|c| !**c).count() as u64;
        let basis = cycle_basis(g);
        let xs: Vec<Chain1> = basis.into_iter().filter(|_| rand::Rng::gen_bool(&mut rng, 0.6)).collect();
        if independence_by_rank(&gram_matrix(&e, &xs)?) == RankVerdict::Independent {
            independent_verdicts += 1;
            if !independent_direct(&e, &xs)? {
                violations += 1;
            }
        }
        st.embedding(&e);
    }
    // crossing-pair facts on small embeddings of the three surfaces with chi >= 0
    let mut tally = CrossingTally::default();
    let mut attempts = 0;
    while tally.samples.iter().any(|&s| s < 30) && attempts < 20_000 {
        attempts += 1;
        let e = random_small_embedding(&mut rng, 3, 3);
        if e.euler_characteristic() >= 0 {
            crossing_counts(&e, &mut tally)?;
        }
    }
    let crossing_fail: u64 = tally.failed.iter().sum();
    let ok = violations == 0 && crossing_fail == 0 && tally.checked.iter().all(|&c| c > 0);
    Ok((
        ok,
        format!(
            "{violations} violations over {cases} embeddings ({independent_verdicts} full-rank Gram tests); crossing pairs P2/T/KB checked {:?}, failed {:?}",
            tally.checked, tally.failed
        ),
    ))
}

fn k33() -> Result<(bool, String)> {
    let mut ok = true;
    for p in [5, 7, 11] {
        ok &= verify_k33_minor(p)?;
    }
    Ok((ok, "p = 5, 7, 11".into()))
}

/// Runs all twelve checks in order.
pub fn run_all(cfg: &CheckConfig) -> Vec<CheckResult> {
    let mut st = Structural::default();
    let mut out = vec![
        timed(1, "Riemann-Hurwitz count on 500 random voltage embeddings", 10.0, || {
            riemann_hurwitz_suite(cfg.seed, 500, &mut st)
        }),
        timed(2, "coset counts on 200 random voltage embeddings", 10.0, || coset_suite(cfg.seed, 200, &mut st)),
        timed(3, "barbell lifts are GP(5,2) and GP(6,2)", 1.0, barbell_lifts),
        timed(4, "bouquet lifts to a torus with a free Z_n action", 1.0, || bouquet_tori(&mut st)),
        timed(5, "barbell in P2 lifts to GP(2p,2) in the sphere", 5.0, || sphere_fixtures(cfg, &mut st)),
        timed(6, "GP(2p,2) rerouted into the torus", 1.0, || torus_construction(cfg, &mut st)),
        timed(7, "GP(6,2) as a derived torus", 1.0, || gp62_fixture(cfg, &mut st)),
    ];
    let budget = if cfg.jobs >= 8 { 60.0 } else { 300.0 };
    out.push(timed(8, "no derived torus over the three quotients of GP(14,2)", budget, || no_torus(cfg, &mut st)));
    out.push(timed(9, "GP(2q,2) as a derived Klein bottle", 5.0, || kb_fixtures(cfg, &mut st)));
    out.push(timed(10, "intersection pairing properties on 300 random embeddings", 30.0, || {
        intersection_suite(cfg.seed, 300, &mut st)
    }));
    out.push(timed(11, "K3,3 subdivision in GP(p,2)", 1.0, k33));
    let stale = match &cfg.fixtures {
        Some(dir) => fixtures::stale(dir),
        None => Ok(Vec::new()),
    };
    out.push(timed(12, "beta1 = 2 - chi and face lifts across all suites", f64::INFINITY, || {
        let stale = stale?;
        Ok((
            st.ok() && stale.is_empty(),
            format!(
                "betti {}/{} ok, face lifts {}/{} ok{}",
                st.betti_checked - st.betti_failed,
                st.betti_checked,
                st.lifts_checked - st.lifts_failed,
                st.lifts_checked,
                if stale.is_empty() { String::new() } else { format!(", stale fixtures {stale:?}") }
            ),
        ))
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let mut st = Structural::default();
        assert!(riemann_hurwitz_suite(5, 40, &mut st).unwrap().0);
        assert!(coset_suite(5, 40, &mut st).unwrap().0);
        assert!(intersection_suite(5, 30, &mut st).unwrap().0);
        assert!(st.ok());
        assert!(st.betti_checked > 100);
    }

    #[test]
    fn circles_of_theta_graph() {
        let g = crate::graph::build_graph(&["a", "b"], &[("a", "b"), ("a", "b"), ("a", "b")]).unwrap();
        assert_eq!(all_circles(&g).len(), 3);
    }
}
