//! A small finite-domain constraint solver.
//!
//! Every search in the crate (simplicial maps, homotopies, twistings,
//! twisting equivalences, isomorphisms of simplicial sets) is phrased as
//! variables with bitset domains plus
//!
//! * functional binary constraints `fu[val(u)] == fv[val(v)]`,
//! * arbitrary predicates over a few variables, checked once all but one of
//!   them are fixed,
//! * all-different groups.
//!
//! Propagation is arc consistency on the binary constraints and forward
//! checking on the rest; branching picks the smallest domain, ties broken by
//! variable index, values in increasing order. The explored tree is a pure
//! function of the problem, so results are reproducible.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::parallel::SearchOptions;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn empty(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn singleton(len: usize, x: usize) -> Self {
        let mut s = Self::empty(len);
        s.insert(x);
        s
    }

    pub fn from_values(len: usize, values: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for v in values {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        self.words[x / 64] &= !(1 << (x % 64));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// Keeps only elements also in `other`; returns whether anything changed.
    pub fn intersect_with(&mut self, other: &BitSet) -> bool {
        let mut changed = false;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            let next = *a & *b;
            changed |= next != *a;
            *a = next;
        }
        changed
    }
}

/// A value map used on one side of a functional constraint.
#[derive(Clone, Debug)]
pub enum Table {
    Identity,
    Map(Arc<[usize]>),
}

impl Table {
    #[inline]
    fn get(&self, x: usize) -> usize {
        match self {
            Table::Identity => x,
            Table::Map(m) => m[x],
        }
    }
}

type Predicate = Arc<dyn Fn(&[usize]) -> bool + Send + Sync>;

#[derive(Clone)]
enum Constraint {
    Functional {
        u: usize,
        fu: Table,
        v: usize,
        fv: Table,
        range: usize,
    },
    Check {
        vars: Vec<usize>,
        pred: Predicate,
    },
}

/// A constraint problem. Build it, then call one of the `solve_*` methods.
#[derive(Clone, Default)]
pub struct Problem {
    domains: Vec<BitSet>,
    constraints: Vec<Constraint>,
    watchers: Vec<Vec<usize>>,
    groups: Vec<Vec<usize>>,
    group_of: Vec<Vec<usize>>,
}

struct Counter<'a> {
    nodes: &'a AtomicU64,
    budget: u64,
    abort: &'a AtomicBool,
}

impl Counter<'_> {
    fn tick(&self) -> Result<()> {
        if self.abort.load(Ordering::Relaxed) {
            return Err(Error::budget("searching", self.budget));
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            self.abort.store(true, Ordering::Relaxed);
            return Err(Error::budget("searching", self.budget));
        }
        Ok(())
    }
}

/// Outcome of [`Problem::solve_all`].
#[derive(Clone, Debug)]
pub struct Solutions {
    pub solutions: Vec<Vec<usize>>,
    /// Search nodes visited.
    pub nodes: u64,
}

impl Problem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var_count(&self) -> usize {
        self.domains.len()
    }

    pub fn add_var(&mut self, domain: BitSet) -> usize {
        self.domains.push(domain);
        self.watchers.push(Vec::new());
        self.group_of.push(Vec::new());
        self.domains.len() - 1
    }

    pub fn add_full_var(&mut self, size: usize) -> usize {
        self.add_var(BitSet::full(size))
    }

    pub fn restrict(&mut self, var: usize, allowed: &BitSet) {
        self.domains[var].intersect_with(allowed);
    }

    pub fn fix(&mut self, var: usize, value: usize) {
        let len = self.domains[var].universe();
        self.domains[var] = BitSet::singleton(len, value);
    }

    /// `fu[val(u)] == fv[val(v)]`, both tables landing in `0..range`.
    pub fn add_functional(&mut self, u: usize, fu: Table, v: usize, fv: Table, range: usize) {
        let id = self.constraints.len();
        self.constraints.push(Constraint::Functional { u, fu, v, fv, range });
        self.watchers[u].push(id);
        if v != u {
            self.watchers[v].push(id);
        }
    }

    /// `val(v) == f[val(u)]`.
    pub fn add_image(&mut self, u: usize, f: Arc<[usize]>, v: usize, range: usize) {
        self.add_functional(u, Table::Map(f), v, Table::Identity, range);
    }

    pub fn add_check(&mut self, vars: Vec<usize>, pred: impl Fn(&[usize]) -> bool + Send + Sync + 'static) {
        let id = self.constraints.len();
        for &v in &vars {
            if !self.watchers[v].contains(&id) {
                self.watchers[v].push(id);
            }
        }
        self.constraints.push(Constraint::Check {
            vars,
            pred: Arc::new(pred),
        });
    }

    pub fn add_all_different(&mut self, vars: Vec<usize>) {
        let id = self.groups.len();
        for &v in &vars {
            self.group_of[v].push(id);
        }
        self.groups.push(vars);
    }

    /// Makes every domain arc consistent; `None` when some domain empties.
    fn propagate(&self, domains: &mut [BitSet], changed: impl IntoIterator<Item = usize>) -> Option<()> {
        let mut queue: VecDeque<usize> = VecDeque::new();
        let mut queued = vec![false; domains.len()];
        for v in changed {
            if !queued[v] {
                queued[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(var) = queue.pop_front() {
            queued[var] = false;
            if domains[var].is_empty() {
                return None;
            }
            let mut touched: Vec<usize> = Vec::new();
            if domains[var].count() == 1 {
                let value = domains[var].first().unwrap();
                for &g in &self.group_of[var] {
                    for &other in &self.groups[g] {
                        if other != var && domains[other].contains(value) {
                            domains[other].remove(value);
                            touched.push(other);
                        }
                    }
                }
            }
            for &c in &self.watchers[var] {
                match &self.constraints[c] {
                    Constraint::Functional { u, fu, v, fv, range } => {
                        let (u, v) = (*u, *v);
                        if u == v {
                            let bad: Vec<usize> =
                                domains[u].iter().filter(|&a| fu.get(a) != fv.get(a)).collect();
                            for a in bad {
                                domains[u].remove(a);
                                touched.push(u);
                            }
                            continue;
                        }
                        let (other, fo, this, ft) = if var == u { (v, fv, u, fu) } else { (u, fu, v, fv) };
                        if revise(domains, other, fo, this, ft, *range) {
                            touched.push(other);
                        }
                        // The watched side can shrink too when both sides
                        // were touched together.
                        if revise(domains, this, ft, other, fo, *range) {
                            touched.push(this);
                        }
                    }
                    Constraint::Check { vars, pred } => {
                        let open: Vec<usize> = vars.iter().copied().filter(|&x| domains[x].count() > 1).collect();
                        if open.len() > 1 {
                            continue;
                        }
                        let mut values: Vec<usize> =
                            vars.iter().map(|&x| domains[x].first().unwrap_or(usize::MAX)).collect();
                        if values.contains(&usize::MAX) {
                            return None;
                        }
                        match open.first() {
                            None => {
                                if !pred(&values) {
                                    return None;
                                }
                            }
                            Some(&x) => {
                                let slots: Vec<usize> =
                                    (0..vars.len()).filter(|&i| vars[i] == x).collect();
                                let mut removed = false;
                                let candidates: Vec<usize> = domains[x].iter().collect();
                                for a in candidates {
                                    for &i in &slots {
                                        values[i] = a;
                                    }
                                    if !pred(&values) {
                                        domains[x].remove(a);
                                        removed = true;
                                    }
                                }
                                if removed {
                                    touched.push(x);
                                }
                            }
                        }
                    }
                }
            }
            for t in touched {
                if domains[t].is_empty() {
                    return None;
                }
                if !queued[t] {
                    queued[t] = true;
                    queue.push_back(t);
                }
            }
        }
        Some(())
    }

    fn pick(domains: &[BitSet]) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (i, d) in domains.iter().enumerate() {
            let c = d.count();
            if c > 1 && best.is_none_or(|(bc, _)| c < bc) {
                best = Some((c, i));
                if c == 2 {
                    break;
                }
            }
        }
        best.map(|(_, i)| i)
    }

    fn dfs(
        &self,
        domains: Vec<BitSet>,
        counter: &Counter<'_>,
        limit: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let Some(var) = Self::pick(&domains) else {
            out.push(domains.iter().map(|d| d.first().unwrap()).collect());
            return Ok(());
        };
        let values: Vec<usize> = domains[var].iter().collect();
        for value in values {
            if out.len() >= limit {
                return Ok(());
            }
            counter.tick()?;
            let mut next = domains.clone();
            next[var] = BitSet::singleton(next[var].universe(), value);
            if self.propagate(&mut next, [var]).is_some() {
                self.dfs(next, counter, limit, out)?;
            }
        }
        Ok(())
    }

    fn root(&self) -> Option<Vec<BitSet>> {
        let mut domains = self.domains.clone();
        self.propagate(&mut domains, 0..self.domains.len())?;
        Some(domains)
    }

    /// Domains after root propagation, or `None` if the problem is already
    /// inconsistent.
    pub fn propagated_domains(&self) -> Option<Vec<BitSet>> {
        self.root()
    }

    /// Up to `limit` solutions in canonical order, sequentially.
    pub fn solve(&self, limit: usize, budget: u64) -> Result<Solutions> {
        let nodes = AtomicU64::new(0);
        let abort = AtomicBool::new(false);
        let counter = Counter {
            nodes: &nodes,
            budget,
            abort: &abort,
        };
        let mut out = Vec::new();
        if let Some(domains) = self.root() {
            self.dfs(domains, &counter, limit, &mut out)?;
        }
        Ok(Solutions {
            solutions: out,
            nodes: nodes.load(Ordering::Relaxed),
        })
    }

    pub fn solve_first(&self, budget: u64) -> Result<Option<Vec<usize>>> {
        Ok(self.solve(1, budget)?.solutions.into_iter().next())
    }

    /// Every solution, sharded over the first branching variable. The
    /// output order and node count equal those of the sequential search.
    pub fn solve_all(&self, opts: &SearchOptions) -> Result<Solutions> {
        let Some(domains) = self.root() else {
            return Ok(Solutions {
                solutions: Vec::new(),
                nodes: 0,
            });
        };
        let Some(var) = Self::pick(&domains) else {
            return Ok(Solutions {
                solutions: vec![domains.iter().map(|d| d.first().unwrap()).collect()],
                nodes: 0,
            });
        };
        let nodes = AtomicU64::new(0);
        let abort = AtomicBool::new(false);
        let values: Vec<usize> = domains[var].iter().collect();
        let shards = opts.map(&values, |&value| -> Result<Vec<Vec<usize>>> {
            let counter = Counter {
                nodes: &nodes,
                budget: opts.budget,
                abort: &abort,
            };
            counter.tick()?;
            let mut next = domains.clone();
            next[var] = BitSet::singleton(next[var].universe(), value);
            let mut out = Vec::new();
            if self.propagate(&mut next, [var]).is_some() {
                self.dfs(next, &counter, usize::MAX, &mut out)?;
            }
            Ok(out)
        });
        let mut solutions = Vec::new();
        for shard in shards {
            solutions.extend(shard?);
        }
        Ok(Solutions {
            solutions,
            nodes: nodes.load(Ordering::Relaxed),
        })
    }
}

/// Removes values of `target` without support through the constraint.
fn revise(domains: &mut [BitSet], target: usize, ft: &Table, source: usize, fs: &Table, range: usize) -> bool {
    let mut support = BitSet::empty(range);
    for b in domains[source].iter() {
        support.insert(fs.get(b));
    }
    let mut changed = false;
    let values: Vec<usize> = domains[target].iter().collect();
    for a in values {
        if !support.contains(ft.get(a)) {
            domains[target].remove(a);
            changed = true;
        }
    }
    changed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitset_ops() {
        let mut s = BitSet::from_values(130, [0, 64, 129]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(s.count(), 3);
        s.remove(0);
        assert_eq!(s.first(), Some(64));
        let t = BitSet::from_values(130, [64, 1]);
        assert!(s.intersect_with(&t));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![64]);
    }

    #[test]
    fn permutations_of_three() {
        let mut p = Problem::new();
        let vars: Vec<usize> = (0..3).map(|_| p.add_full_var(3)).collect();
        p.add_all_different(vars);
        let sols = p.solve_all(&SearchOptions::default()).unwrap();
        assert_eq!(sols.solutions.len(), 6);
        assert_eq!(sols.solutions[0], vec![0, 1, 2]);
        assert_eq!(sols.solutions[5], vec![2, 1, 0]);
    }

    #[test]
    fn functional_and_check() {
        // y = x + 1 mod 4, x + y + z ≡ 0 mod 4
        let mut p = Problem::new();
        let x = p.add_full_var(4);
        let y = p.add_full_var(4);
        let z = p.add_full_var(4);
        let succ: Arc<[usize]> = (0..4).map(|a| (a + 1) % 4).collect();
        p.add_image(x, succ, y, 4);
        p.add_check(vec![x, y, z], |v| (v[0] + v[1] + v[2]) % 4 == 0);
        let sols = p.solve_all(&SearchOptions::default()).unwrap().solutions;
        assert_eq!(sols.len(), 4);
        for s in sols {
            assert_eq!(s[1], (s[0] + 1) % 4);
            assert_eq!((s[0] + s[1] + s[2]) % 4, 0);
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let mut p = Problem::new();
        let vars: Vec<usize> = (0..5).map(|_| p.add_full_var(5)).collect();
        p.add_all_different(vars.clone());
        p.add_check(vec![vars[0], vars[4]], |v| v[0] < v[1]);
        let a = p.solve_all(&SearchOptions::new(u64::MAX, 1)).unwrap();
        let b = p.solve_all(&SearchOptions::new(u64::MAX, 4)).unwrap();
        assert_eq!(a.solutions, b.solutions);
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.solutions.len(), 60);
    }

    #[test]
    fn budget_is_reported() {
        let mut p = Problem::new();
        let vars: Vec<usize> = (0..8).map(|_| p.add_full_var(8)).collect();
        p.add_all_different(vars);
        let err = p.solve_all(&SearchOptions::new(100, 1)).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }
}
