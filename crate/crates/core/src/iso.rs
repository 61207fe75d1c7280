//! Multigraph isomorphism by colour refinement plus backtracking.
//!
//! Sized for the graphs this crate produces (a few hundred vertices at most).

use std::collections::HashMap;

use crate::graph::Graph;

/// Returns a vertex bijection `f` with `mult(a, b) == mult(f(a), f(b))` for
/// all vertex pairs, or `None` when the graphs are not isomorphic.
pub fn graph_isomorphic(g1: &Graph, g2: &Graph) -> Option<Vec<usize>> {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let m1 = multiplicity_matrix(g1);
    let m2 = multiplicity_matrix(g2);
    let (c1, c2) = refine_colours(g1, g2, &m1, &m2)?;

    let order = search_order(g1, &c1);
    let mut state = Search {
        n,
        m1: &m1,
        m2: &m2,
        c1: &c1,
        c2: &c2,
        g1,
        g2,
        order: &order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if state.extend(0) {
        Some(state.map)
    } else {
        None
    }
}

fn multiplicity_matrix(g: &Graph) -> Vec<u16> {
    let n = g.vertex_count();
    let mut m = vec![0u16; n * n];
    for e in 0..g.edge_count() {
        let [a, b] = g.ends(e);
        m[a * n + b] += 1;
        if a != b {
            m[b * n + a] += 1;
        }
    }
    m
}

/// Joint 1-WL refinement; `None` as soon as the colour histograms differ.
fn refine_colours(g1: &Graph, g2: &Graph, m1: &[u16], m2: &[u16]) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g1.vertex_count();
    let initial = |g: &Graph, v: usize| (g.degree(v), g.loop_count(v));
    let mut palette: HashMap<(usize, usize), usize> = HashMap::new();
    let mut colour = |key| {
        let next = palette.len();
        *palette.entry(key).or_insert(next)
    };
    let mut c1: Vec<usize> = (0..n).map(|v| colour(initial(g1, v))).collect();
    let mut c2: Vec<usize> = (0..n).map(|v| colour(initial(g2, v))).collect();
    let mut classes = palette.len();
    loop {
        if histogram(&c1) != histogram(&c2) {
            return None;
        }
        let mut signatures: HashMap<(usize, Vec<(usize, u16)>), usize> = HashMap::new();
        let mut recolour = |c: &[usize], m: &[u16]| -> Vec<usize> {
            (0..n)
                .map(|v| {
                    let mut nb: Vec<(usize, u16)> =
                        (0..n).filter(|&w| m[v * n + w] > 0).map(|w| (c[w], m[v * n + w])).collect();
                    nb.sort_unstable();
                    let next = signatures.len();
                    *signatures.entry((c[v], nb)).or_insert(next)
                })
                .collect()
        };
        let n1 = recolour(&c1, m1);
        let n2 = recolour(&c2, m2);
        let refined = signatures.len();
        c1 = n1;
        c2 = n2;
        if refined == classes {
            if histogram(&c1) != histogram(&c2) {
                return None;
            }
            return Some((c1, c2));
        }
        classes = refined;
    }
}

fn histogram(c: &[usize]) -> Vec<usize> {
    let mut h = vec![0; c.iter().max().map_or(0, |m| m + 1)];
    for &x in c {
        h[x] += 1;
    }
    h
}

/// Connected (BFS forest) order so most vertices have a mapped neighbour when
/// they are reached; each tree starts from a vertex in the rarest colour class.
fn search_order(g: &Graph, colours: &[usize]) -> Vec<usize> {
    let n = g.vertex_count();
    let hist = histogram(colours);
    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&v| (hist[colours[v]], v));
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let start = order.len();
        order.push(r);
        let mut i = start;
        while i < order.len() {
            let v = order[i];
            for &d in g.darts_at(v) {
                let w = g.head(d);
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
    }
    order
}

struct Search<'a> {
    n: usize,
    m1: &'a [u16],
    m2: &'a [u16],
    c1: &'a [usize],
    c2: &'a [usize],
    g1: &'a Graph,
    g2: &'a Graph,
    order: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.n {
            return true;
        }
        let x = self.order[depth];
        let anchor = self.g1.darts_at(x).iter().map(|&d| self.g1.head(d)).find(|&w| self.map[w] != usize::MAX);
        let candidates: Vec<usize> = match anchor {
            Some(w) => {
                let mut c: Vec<usize> = self.g2.darts_at(self.map[w]).iter().map(|&d| self.g2.head(d)).collect();
                c.sort_unstable();
                c.dedup();
                c
            }
            None => (0..self.n).collect(),
        };
        for y in candidates {
            if self.used[y] || self.c1[x] != self.c2[y] || !self.consistent(x, y) {
                continue;
            }
            self.map[x] = y;
            self.used[y] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.map[x] = usize::MAX;
            self.used[y] = false;
        }
        false
    }

    fn consistent(&self, x: usize, y: usize) -> bool {
        let n = self.n;
        if self.m1[x * n + x] != self.m2[y * n + y] {
            return false;
        }
        self.order.iter().all(|&z| {
            let fz = self.map[z];
            fz == usize::MAX || self.m1[x * n + z] == self.m2[y * n + fz]
        })
    }
}

/// Checks that `map` really is an isomorphism from `g1` onto `g2`.
pub fn is_isomorphism(g1: &Graph, g2: &Graph, map: &[usize]) -> bool {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || map.len() != n || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let mut hit = vec![false; n];
    for &y in map {
        if y >= n || std::mem::replace(&mut hit[y], true) {
            return false;
        }
    }
    let m1 = multiplicity_matrix(g1);
    let m2 = multiplicity_matrix(g2);
    (0..n).all(|a| (0..n).all(|b| m1[a * n + b] == m2[map[a] * n + map[b]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn cycle(n: usize, shift: usize) -> Graph {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let edges: Vec<(String, String)> =
            (0..n).map(|i| (names[(i + shift) % n].clone(), names[(i + shift + 1) % n].clone())).collect();
        build_graph(&names, &edges).unwrap()
    }

    #[test]
    fn relabelled_cycles_match() {
        let a = cycle(7, 0);
        let b = cycle(7, 3);
        let f = graph_isomorphic(&a, &b).unwrap();
        assert!(is_isomorphism(&a, &b, &f));
    }

    #[test]
    fn loops_and_multi_edges_count() {
        let a = build_graph(&["p", "q"], &[("p", "q"), ("p", "q"), ("p", "p")]).unwrap();
        let b = build_graph(&["p", "q"], &[("p", "q"), ("p", "q"), ("q", "q")]).unwrap();
        let c = build_graph(&["p", "q"], &[("p", "q"), ("p", "p"), ("q", "q")]).unwrap();
        assert!(graph_isomorphic(&a, &b).is_some());
        assert!(graph_isomorphic(&a, &c).is_none());
    }

    #[test]
    fn barbell_vs_bouquet() {
        let barbell = build_graph(&["v", "u"], &[("v", "v"), ("u", "u"), ("v", "u")]).unwrap();
        let bouquet = build_graph(&["v"], &[("v", "v"), ("v", "v")]).unwrap();
        assert!(graph_isomorphic(&barbell, &bouquet).is_none());
    }
}
