//! Finite groups: cyclic groups by modular arithmetic, anything else by a
//! validated multiplication table.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element, as an index into the carrier `0..order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub usize);

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteGroup {
    /// Z_n under addition, identity 0.
    Cyclic(usize),
    Table(TableGroup),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

pub fn cyclic_group(n: usize) -> Result<FiniteGroup> {
    if n < 1 {
        return Err(Error::InvalidGroup("cyclic group order must be at least 1".into()));
    }
    Ok(FiniteGroup::Cyclic(n))
}

/// Validates closure, associativity, identity and inverses.
pub fn table_group(table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(Error::InvalidGroup("empty table".into()));
    }
    if let Some(r) = table.iter().position(|row| row.len() != n) {
        return Err(Error::InvalidGroup(format!("row {r} has the wrong length")));
    }
    if table.iter().flatten().any(|&x| x >= n) {
        return Err(Error::InvalidGroup("entry outside the carrier".into()));
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::InvalidGroup(format!("not associative at ({a},{b},{c})")));
                }
            }
        }
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
        .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
    let mut inverse = Vec::with_capacity(n);
    for (a, row) in table.iter().enumerate() {
        let inv = (0..n)
            .find(|&b| row[b] == identity && table[b][a] == identity)
            .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        inverse.push(inv);
    }
    Ok(FiniteGroup::Table(TableGroup { table, identity, inverse }))
}

/// A subgroup as a sorted member list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup(Vec<GroupElement>);

impl Subgroup {
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.0
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.0.binary_search(&g).is_ok()
    }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        match self {
            FiniteGroup::Cyclic(n) => *n,
            FiniteGroup::Table(t) => t.table.len(),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            FiniteGroup::Cyclic(_) => GroupElement(0),
            FiniteGroup::Table(t) => GroupElement(t.identity),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order()).map(GroupElement)
    }

    pub fn element(&self, i: usize) -> Result<GroupElement> {
        if i >= self.order() {
            return Err(Error::InvalidVoltage(format!("{i} is not an element of a group of order {}", self.order())));
        }
        Ok(GroupElement(i))
    }

    #[inline]
    pub fn op(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        match self {
            FiniteGroup::Cyclic(n) => GroupElement((a.0 + b.0) % n),
            FiniteGroup::Table(t) => GroupElement(t.table[a.0][b.0]),
        }
    }

    #[inline]
    pub fn inv(&self, a: GroupElement) -> GroupElement {
        match self {
            FiniteGroup::Cyclic(n) => GroupElement((n - a.0) % n),
            FiniteGroup::Table(t) => GroupElement(t.inverse[a.0]),
        }
    }

    pub fn is_identity(&self, a: GroupElement) -> bool {
        a == self.identity()
    }

    pub fn element_order(&self, g: GroupElement) -> usize {
        match self {
            FiniteGroup::Cyclic(n) => n / gcd(*n, g.0),
            FiniteGroup::Table(_) => {
                let mut x = g;
                let mut k = 1;
                while !self.is_identity(x) {
                    x = self.op(x, g);
                    k += 1;
                }
                k
            }
        }
    }

    /// Closure of `gens` under the group operation (finite, so inverses come for free).
    pub fn generated_subgroup(&self, gens: &[GroupElement]) -> Subgroup {
        if let FiniteGroup::Cyclic(n) = self {
            let d = gens.iter().fold(*n, |acc, g| gcd(acc, g.0));
            return Subgroup((0..n / d).map(|k| GroupElement(k * d)).collect());
        }
        let mut member = vec![false; self.order()];
        let id = self.identity();
        member[id.0] = true;
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.op(x, g);
                if !member[y.0] {
                    member[y.0] = true;
                    frontier.push(y);
                }
            }
        }
        Subgroup(self.elements().filter(|g| member[g.0]).collect())
    }

    pub fn is_subgroup(&self, members: &[GroupElement]) -> bool {
        if members.is_empty() || members.iter().any(|g| g.0 >= self.order()) {
            return false;
        }
        let mut set = vec![false; self.order()];
        for g in members {
            set[g.0] = true;
        }
        members.iter().all(|&a| set[self.inv(a).0] && members.iter().all(|&b| set[self.op(a, b).0]))
    }

    pub fn subgroup(&self, members: &[GroupElement]) -> Result<Subgroup> {
        if !self.is_subgroup(members) {
            return Err(Error::InvalidGroup("element set is not a subgroup".into()));
        }
        let mut v = members.to_vec();
        v.sort();
        v.dedup();
        Ok(Subgroup(v))
    }

    /// Left cosets aH, each sorted, listed by smallest member.
    pub fn cosets(&self, h: &Subgroup) -> Vec<Vec<GroupElement>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for a in self.elements() {
            if seen[a.0] {
                continue;
            }
            let mut coset: Vec<GroupElement> = h.elements().iter().map(|&x| self.op(a, x)).collect();
            coset.sort();
            for g in &coset {
                seen[g.0] = true;
            }
            out.push(coset);
        }
        out
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        let els: Vec<GroupElement> = self.elements().collect();
        els.iter().map(|&a| els.iter().map(|&b| self.op(a, b).0).collect()).collect()
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum GroupJson {
    Cyclic { order: usize },
    Table { table: Vec<Vec<usize>> },
}

impl Serialize for FiniteGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FiniteGroup::Cyclic(n) => GroupJson::Cyclic { order: *n },
            FiniteGroup::Table(t) => GroupJson::Table { table: t.table.clone() },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match GroupJson::deserialize(d)? {
            GroupJson::Cyclic { order } => cyclic_group(order),
            GroupJson::Table { table } => table_group(table),
        }
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn klein_four() -> Vec<Vec<usize>> {
        vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]]
    }

    #[test]
    fn cyclic_basics() {
        let z1 = cyclic_group(1).unwrap();
        assert_eq!(z1.order(), 1);
        assert!(cyclic_group(0).is_err());
        let z10 = cyclic_group(10).unwrap();
        assert_eq!(z10.element_order(GroupElement(2)), 5);
        assert_eq!(z10.element_order(GroupElement(0)), 1);
        assert_eq!(z10.inv(GroupElement(3)), GroupElement(7));
    }

    #[test]
    fn two_and_four_generate_the_same_subgroup() {
        for p in [3, 5, 7, 11] {
            let g = cyclic_group(2 * p).unwrap();
            assert_eq!(g.generated_subgroup(&[GroupElement(2)]), g.generated_subgroup(&[GroupElement(4)]));
            assert_eq!(g.element_order(GroupElement(2)), p);
        }
    }

    #[test]
    fn generated_and_cosets() {
        let z5 = cyclic_group(5).unwrap();
        assert_eq!(z5.generated_subgroup(&[GroupElement(1), GroupElement(2)]).order(), 5);
        let z10 = cyclic_group(10).unwrap();
        let h = z10.generated_subgroup(&[GroupElement(2)]);
        assert_eq!(z10.cosets(&h).len(), 2);
        assert_eq!(z10.cosets(&z10.generated_subgroup(&[])).len(), 10);
        assert_eq!(z10.cosets(&z10.generated_subgroup(&[GroupElement(1)])).len(), 1);
        assert!(z10.subgroup(&[GroupElement(0), GroupElement(3)]).is_err());
    }

    #[test]
    fn tables() {
        assert!(table_group(vec![vec![0, 1], vec![1, 0]]).is_ok());
        let v4 = table_group(klein_four()).unwrap();
        assert!(v4.elements().all(|g| v4.element_order(g) <= 2));
        assert_eq!(v4.generated_subgroup(&[GroupElement(1), GroupElement(2)]).order(), 4);
        let mut broken = klein_four();
        broken[1][2] = 2;
        broken[1][3] = 3;
        assert!(table_group(broken).is_err());
        // a Latin square that is not associative
        let quasi = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]];
        assert!(table_group(quasi).is_err());
    }

    #[test]
    fn json_shapes() {
        let z = cyclic_group(6).unwrap();
        assert_eq!(serde_json::to_string(&z).unwrap(), r#"{"type":"cyclic","order":6}"#);
        let t: FiniteGroup = serde_json::from_str(r#"{"type":"table","table":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(t.order(), 2);
        assert!(serde_json::from_str::<FiniteGroup>(r#"{"type":"cyclic","order":0}"#).is_err());
    }

    #[test]
    fn cyclic_table_agrees_with_arithmetic() {
        let z = cyclic_group(6).unwrap();
        let t = table_group(z.table()).unwrap();
        for a in z.elements() {
            assert_eq!(z.element_order(a), t.element_order(a));
            assert_eq!(z.generated_subgroup(&[a]), t.generated_subgroup(&[a]));
        }
    }

    proptest! {
        #[test]
        fn lagrange(n in 1usize..40, gens in proptest::collection::vec(0usize..40, 0..4)) {
            let g = cyclic_group(n).unwrap();
            let gens: Vec<GroupElement> = gens.into_iter().map(|x| GroupElement(x % n)).collect();
            let h = g.generated_subgroup(&gens);
            prop_assert_eq!(n % h.order(), 0);
            prop_assert!(g.is_subgroup(h.elements()));
            for &x in &gens {
                prop_assert_eq!(g.element_order(x), g.generated_subgroup(&[x]).order());
            }
        }
    }
}
