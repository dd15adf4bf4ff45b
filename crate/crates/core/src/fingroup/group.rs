use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// A finite group stored as a dense multiplication table over `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

/// A subgroup together with its relabelled group structure.
///
/// Elements of `group` are numbered in increasing order of their index in
/// the parent, so `embedding` is strictly increasing.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FiniteGroup,
    pub embedding: Vec<usize>,
}

/// A quotient `G/N` with the projection `G → G/N`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub projection: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from a row-major table, checking every axiom.
    pub fn from_table(name: impl Into<String>, order: usize, table: Vec<usize>) -> Result<Self> {
        let name = name.into();
        if order == 0 {
            return Err(Error::structural("group of order 0"));
        }
        if table.len() != order * order {
            return Err(Error::structural(format!(
                "table for `{name}` has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(bad) = table.iter().find(|&&x| x >= order) {
            return Err(Error::structural(format!(
                "table for `{name}` contains out-of-range element {bad}"
            )));
        }
        let report = check_table(order, &table);
        if !report.is_valid() {
            return Err(Error::InvalidGroup(report));
        }
        Ok(Self::from_table_trusted(name, order, table))
    }

    /// Builds a group from a table produced by a construction known to be
    /// a group law. Identity and inverses are still derived from the table.
    pub(crate) fn from_table_trusted(name: impl Into<String>, order: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e * order + a] == a && table[a * order + e] == a))
            .expect("group law without identity");
        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == identity {
                    inverses[a] = b;
                    break;
                }
            }
        }
        Self {
            name: name.into(),
            order,
            table,
            identity,
            inverses,
        }
    }

    /// Builds a group from an explicit multiplication closure on `0..order`.
    pub(crate) fn from_fn(name: impl Into<String>, order: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b));
            }
        }
        Self::from_table_trusted(name, order, table)
    }

    pub fn trivial() -> Self {
        Self::from_table_trusted("1", 1, vec![0])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g x g⁻¹`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn product<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn power(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exhaustive associativity / identity / inverse scan.
    pub fn check_axioms(&self) -> ValidationReport {
        check_table(self.order, &self.table)
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// A small generating set, chosen greedily by largest element order and
    /// then smallest index.
    pub fn generators(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (0..self.order).filter(|&x| x != self.identity).collect();
        by_order.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for x in by_order {
            if span.len() == self.order {
                break;
            }
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in elems {
            member[x] = true;
        }
        member[self.identity]
            && elems.iter().all(|&a| member[self.inv(a)] && elems.iter().all(|&b| member[self.mul(a, b)]))
    }

    pub fn is_normal(&self, elems: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &x in elems {
            member[x] = true;
        }
        elems.iter().all(|&n| (0..self.order).all(|g| member[self.conj(g, n)]))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.order {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order).map(|g| self.conj(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                class_of[y] = classes.len();
            }
            classes.push(class);
        }
        classes
    }

    /// The subgroup on `elems`, which must be closed under the group law.
    pub fn subgroup(&self, elems: &[usize], name: impl Into<String>) -> Result<Subgroup> {
        let mut embedding = elems.to_vec();
        embedding.sort_unstable();
        embedding.dedup();
        if embedding.iter().any(|&x| x >= self.order) {
            return Err(Error::structural("subgroup element out of range"));
        }
        if !self.is_subgroup(&embedding) {
            return Err(Error::structural(format!(
                "elements do not form a subgroup of {}",
                self.name
            )));
        }
        let mut index = vec![usize::MAX; self.order];
        for (i, &x) in embedding.iter().enumerate() {
            index[x] = i;
        }
        let n = embedding.len();
        let group = FiniteGroup::from_fn(name, n, |a, b| index[self.mul(embedding[a], embedding[b])]);
        Ok(Subgroup { group, embedding })
    }

    /// `G/N` by coset enumeration; cosets are numbered by their smallest element.
    pub fn quotient(&self, normal: &[usize], name: impl Into<String>) -> Result<Quotient> {
        if !self.is_subgroup(normal) {
            return Err(Error::structural("quotient by a non-subgroup"));
        }
        if !self.is_normal(normal) {
            return Err(Error::NotNormal(format!(
                "subgroup of order {} in {}",
                normal.len(),
                self.name
            )));
        }
        let mut projection = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if projection[g] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(g);
            for &n in normal {
                projection[self.mul(g, n)] = id;
            }
        }
        let group = FiniteGroup::from_fn(name, reps.len(), |a, b| projection[self.mul(reps[a], reps[b])]);
        Ok(Quotient { group, projection })
    }

    /// `G × K`, element `(g, k)` stored at `g·|K| + k`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let nb = b.order;
        FiniteGroup::from_fn(format!("{}x{}", a.name, b.name), a.order * nb, |x, y| {
            a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
        })
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            name: self.name.clone(),
            order: self.order,
            table: self.table.chunks(self.order).map(|r| r.to_vec()).collect(),
        }
    }

    pub fn from_json(json: &GroupJson) -> Result<Self> {
        if json.table.len() != json.order || json.table.iter().any(|r| r.len() != json.order) {
            return Err(Error::structural(format!(
                "group `{}`: table is not {}×{}",
                json.name, json.order, json.order
            )));
        }
        Self::from_table(json.name.clone(), json.order, json.table.concat())
    }
}

/// On-disk form: `{"name": str, "order": n, "table": [[int]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

fn check_table(order: usize, table: &[usize]) -> ValidationReport {
    let mut report = ValidationReport::new();
    let m = |a: usize, b: usize| table[a * order + b];
    'assoc: for a in 0..order {
        for b in 0..order {
            let ab = m(a, b);
            for c in 0..order {
                if m(ab, c) != m(a, m(b, c)) {
                    report.push("associativity", format!("({a}·{b})·{c} ≠ {a}·({b}·{c})"));
                    break 'assoc;
                }
            }
        }
    }
    let identity = (0..order).find(|&e| (0..order).all(|a| m(e, a) == a && m(a, e) == a));
    match identity {
        None => report.push("identity", "no two-sided identity"),
        Some(e) => {
            for a in 0..order {
                if !(0..order).any(|b| m(a, b) == e && m(b, a) == e) {
                    report.push("inverse", format!("element {a} has no two-sided inverse"));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::from_fn(format!("Z{n}"), n, |a, b| (a + b) % n)
    }

    #[test]
    fn rejects_non_associative_table() {
        // a loop-like table on 3 elements that is not associative
        let table = vec![0, 1, 2, 1, 0, 0, 2, 2, 0];
        match FiniteGroup::from_table("bad", 3, table) {
            Err(Error::InvalidGroup(r)) => assert!(!r.is_valid()),
            other => panic!("expected invalid group, got {other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_dimensions() {
        assert!(matches!(
            FiniteGroup::from_table("bad", 2, vec![0, 1, 1]),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn quotient_of_z4_by_z2() {
        let g = z(4);
        let q = g.quotient(&[0, 2], "Z4/Z2").unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.projection, vec![0, 1, 0, 1]);
        assert!(q.group.check_axioms().is_valid());
    }

    #[test]
    fn subgroup_relabels_in_order() {
        let g = z(6);
        let s = g.subgroup(&[4, 0, 2], "2Z6").unwrap();
        assert_eq!(s.embedding, vec![0, 2, 4]);
        assert_eq!(s.group.mul(1, 2), 0);
    }

    #[test]
    fn generators_span() {
        let g = FiniteGroup::direct_product(&z(2), &z(4));
        let gens = g.generators();
        assert_eq!(g.closure(&gens).len(), 8);
        assert!(gens.len() <= 2);
    }
}
