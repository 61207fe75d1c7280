//! A K3,3 subdivision inside GP(p, 2) for odd p >= 5.
//!
//! Branch vertices `X = {v0, v2, u1}` and `Y = {v1, v3, u2}`; the nine
//! paths are listed explicitly and each one is checked against the graph.

use std::collections::HashSet;

use super::GpSpec;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// One branch path, as vertex indices from its X end to its Y end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPath {
    pub from: usize,
    pub to: usize,
    pub vertices: Vec<usize>,
}

pub fn k33_branch_sets(p: usize) -> Result<([usize; 3], [usize; 3])> {
    let s = GpSpec::new(p, 2)?;
    Ok(([s.v(0), s.v(2), s.u(1)], [s.v(1), s.v(3), s.u(2)]))
}

/// The nine paths, written from the Y side.
pub fn k33_paths(p: usize) -> Result<Vec<BranchPath>> {
    if p < 5 || p.is_multiple_of(2) {
        return Err(Error::Precondition(format!("the K3,3 paths need odd p >= 5, got {p}")));
    }
    let s = GpSpec::new(p, 2)?;
    let path = |vs: Vec<usize>| BranchPath { from: vs[0], to: *vs.last().expect("nonempty"), vertices: vs };
    let mut outer = vec![s.v(3)];
    outer.extend((4..p).map(|i| s.v(i)));
    outer.push(s.v(0));
    let mut inner: Vec<usize> = (1..).map(|j| s.u(2 * j)).take_while(|&u| u != s.u(1)).collect();
    inner.push(s.u(1));
    Ok(vec![
        path(vec![s.v(1), s.v(0)]),
        path(vec![s.v(1), s.u(1)]),
        path(vec![s.v(1), s.v(2)]),
        path(outer),
        path(vec![s.v(3), s.u(3), s.u(1)]),
        path(vec![s.v(3), s.v(2)]),
        path(inner),
        path(vec![s.u(2), s.u(0), s.v(0)]),
        path(vec![s.u(2), s.v(2)]),
    ])
}

fn check(g: &Graph, x: &[usize; 3], y: &[usize; 3], paths: &[BranchPath]) -> Result<()> {
    let name = |v: usize| g.vertex_name(v).to_string();
    let branch: HashSet<usize> = x.iter().chain(y).copied().collect();
    let mut pairs = HashSet::new();
    let mut used = HashSet::new();
    for path in paths {
        let walk = path.vertices.iter().map(|&v| name(v)).collect::<Vec<_>>().join(" ");
        let fail = |why: &str| Err(Error::Inconsistent(format!("path {walk}: {why}")));
        let (a, b) = (path.from, path.to);
        let pair =
            if y.contains(&a) && x.contains(&b) { (b, a) } else { return fail("ends are not one X and one Y vertex") };
        if !pairs.insert(pair) {
            return fail("joins a pair already joined");
        }
        for w in path.vertices.windows(2) {
            if g.multiplicity(w[0], w[1]) == 0 {
                return fail(&format!("{} and {} are not adjacent", name(w[0]), name(w[1])));
            }
        }
        let inner = &path.vertices[1..path.vertices.len() - 1];
        let distinct: HashSet<usize> = path.vertices.iter().copied().collect();
        if distinct.len() != path.vertices.len() {
            return fail("repeats a vertex");
        }
        for &v in inner {
            if branch.contains(&v) {
                return fail(&format!("passes through branch vertex {}", name(v)));
            }
            if !used.insert(v) {
                return fail(&format!("shares interior vertex {} with another path", name(v)));
            }
        }
    }
    if pairs.len() != 9 {
        return Err(Error::Inconsistent(format!("{} of 9 branch pairs joined", pairs.len())));
    }
    Ok(())
}

/// True when the nine listed paths form a subdivided K3,3 in GP(p, 2);
/// an error carries the first failing path.
pub fn verify_k33_minor(p: usize) -> Result<bool> {
    let paths = k33_paths(p)?;
    let (x, y) = k33_branch_sets(p)?;
    check(&GpSpec::new(p, 2)?.graph(), &x, &y, &paths)?;
    Ok(true)
}
