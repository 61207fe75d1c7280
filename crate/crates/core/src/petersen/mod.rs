//! Generalized Petersen graphs, their cyclic quotients, and the fixed
//! constructions built on them.
//!
//! `gp_graph(n, k)` names vertices `v0..v{n-1}, u0..u{n-1}` and lists edges
//! in three blocks: outer `o{i} = v_i v_{i+1}`, spokes `s{i} = v_i u_i` and
//! inner `i{i} = u_i u_{i+k}`. The derived graph of the barbell voltage
//! graph over Z_n, renamed by [`strip_sheet_names`], is the same labelled
//! graph.

pub mod constructions;
pub mod enumerate;
pub mod fixtures;
pub mod k33;
pub mod search;

use serde::{Deserialize, Serialize};

use crate::embedding::{Embedding, Sign};
use crate::error::{Error, Result};
use crate::graph::{Dart, Graph};
use crate::group::{cyclic_group, GroupElement};
use crate::voltage::{GroupAction, VoltageEmbedding, VoltageGraph};

pub use constructions::{construct_torus_embedding, gp62_torus_voltage, gp_sphere_voltage, kb_embedding};
pub use enumerate::{embedding_count, enumerate_embeddings, EmbeddingSpace};
pub use k33::verify_k33_minor;
pub use search::{no_torus_search, SearchReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpSpec {
    n: usize,
    k: usize,
}

impl GpSpec {
    pub fn new(n: usize, k: usize) -> Result<GpSpec> {
        if n < 1 {
            return Err(Error::Precondition("GP(n,k) needs n >= 1".into()));
        }
        Ok(GpSpec { n, k: k % n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn v(&self, i: usize) -> usize {
        i % self.n
    }

    pub fn u(&self, i: usize) -> usize {
        self.n + i % self.n
    }

    pub fn outer(&self, i: usize) -> usize {
        i % self.n
    }

    pub fn spoke(&self, i: usize) -> usize {
        self.n + i % self.n
    }

    pub fn inner(&self, i: usize) -> usize {
        2 * self.n + i % self.n
    }

    pub fn graph(&self) -> Graph {
        let n = self.n;
        let names = (0..n).map(|i| format!("v{i}")).chain((0..n).map(|i| format!("u{i}"))).collect();
        let mut edges = Vec::with_capacity(3 * n);
        edges.extend((0..n).map(|i| (format!("o{i}"), [self.v(i), self.v(i + 1)])));
        edges.extend((0..n).map(|i| (format!("s{i}"), [self.v(i), self.u(i)])));
        edges.extend((0..n).map(|i| (format!("i{i}"), [self.u(i), self.u(i + self.k)])));
        Graph::new(names, edges).expect("GP(n,k) is connected")
    }

    /// The rotation `i -> i + 1` as a Z_n action.
    pub fn rotation_action(&self) -> GroupAction {
        let n = self.n;
        let g = self.graph();
        let shift_vertex = |x: usize, c: usize| if x < n { (x + c) % n } else { n + (x - n + c) % n };
        let vertex_perm = (0..n).map(|c| (0..2 * n).map(|x| shift_vertex(x, c)).collect()).collect();
        let dart_perm = (0..n)
            .map(|c| {
                g.darts()
                    .map(|d| {
                        let (block, i) = (d.edge() / n, d.edge() % n);
                        let e = block * n + (i + c) % n;
                        if d.is_positive() {
                            Dart::positive(e)
                        } else {
                            Dart::negative(e)
                        }
                    })
                    .collect()
            })
            .collect();
        GroupAction { group: cyclic_group(n).expect("n >= 1"), vertex_perm, dart_perm }
    }
}

pub fn gp_graph(n: usize, k: usize) -> Result<Graph> {
    Ok(GpSpec::new(n, k)?.graph())
}

/// Some `(n, k)` with `k <= n / 2` such that `g` is isomorphic to GP(n, k).
pub fn identify_gp(g: &Graph) -> Option<(usize, usize)> {
    let v = g.vertex_count();
    if !v.is_multiple_of(2) || 2 * g.edge_count() != 3 * v {
        return None;
    }
    let n = v / 2;
    (0..=n / 2).find(|&k| crate::iso::graph_isomorphic(g, &GpSpec { n, k }.graph()).is_some()).map(|k| (n, k))
}

/// Barbell over Z_n with voltage 1 on the `v` loop, `k` on the `u` loop
/// and 0 on the link.
pub fn gp_barbell_voltage(n: usize, k: usize) -> Result<VoltageGraph> {
    let g = gp_graph(1, 0)?;
    let grp = cyclic_group(n)?;
    let alpha = vec![GroupElement(1 % n), GroupElement(0), GroupElement(k % n)];
    VoltageGraph::new(g, grp, alpha)
}

/// GP(2,0) over Z_p with voltage 1 on `o1`, `i0`, `i1`; derives GP(2p,2).
pub fn gp2_quotient_voltage(p: usize) -> Result<VoltageGraph> {
    let g = gp_graph(2, 0)?;
    let one = GroupElement(1 % p);
    let alpha = vec![GroupElement(0), one, GroupElement(0), GroupElement(0), one, one];
    VoltageGraph::new(g, cyclic_group(p)?, alpha)
}

/// GP(p,2) over Z_2 with voltage 1 on every outer edge; derives GP(2p,2)
/// for odd p.
pub fn gp_p2_quotient_voltage(p: usize) -> Result<VoltageGraph> {
    let g = gp_graph(p, 2)?;
    let alpha = (0..3 * p).map(|e| GroupElement(usize::from(e < p))).collect();
    VoltageGraph::new(g, cyclic_group(2)?, alpha)
}

/// Renames derived labels `x^a` to `x{a}` style names so that barbell lifts
/// read as `v3`, `o3`, ... Only valid for single-index base names such as
/// `v0`, `o0`.
pub fn strip_sheet_names(emb: &Embedding) -> Result<Embedding> {
    let rename = |s: &str| -> Result<String> {
        let (base, sheet) = s.split_once('^').ok_or_else(|| Error::Format(format!("`{s}` is not a derived label")))?;
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        Ok(format!("{stem}{sheet}"))
    };
    let g = emb.graph();
    let vs = g.vertex_names().iter().map(|s| rename(s)).collect::<Result<Vec<_>>>()?;
    let es = g.edge_names().iter().map(|s| rename(s)).collect::<Result<Vec<_>>>()?;
    emb.renamed(vs, es)
}

/// Two-loop bouquet in the torus, rotation `a+ b+ a- b-`, voltages 1 and 2
/// in Z_n.
pub fn bouquet_torus_action(n: usize) -> Result<VoltageEmbedding> {
    let g = Graph::new(vec!["v".into()], vec![("a".into(), [0, 0]), ("b".into(), [0, 0])])?;
    let rot = vec![vec![Dart(0), Dart(2), Dart(1), Dart(3)]];
    let base = Embedding::new(g, rot, vec![Sign::Plus; 2])?;
    let grp = cyclic_group(n)?;
    let ve = VoltageEmbedding::new(base, grp, vec![GroupElement(1 % n), GroupElement(2 % n)])?;
    let derived = ve.derived_embedding();
    if !derived.graph().is_connected() || derived.classify_surface()? != crate::surface::SurfaceClass::TORUS {
        return Err(Error::Inconsistent(format!("bouquet over Z_{n} does not derive a torus")));
    }
    if !ve.verify_free_action() {
        return Err(Error::Inconsistent(format!("Z_{n} action on the derived torus is not free")));
    }
    Ok(ve)
}
