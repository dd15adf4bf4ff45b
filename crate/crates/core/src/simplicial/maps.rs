use serde::Serialize;

use crate::error::{Error, Result};
use crate::parallel::SearchOptions;
use crate::simplicial::search::{BitSet, Problem, Table};
use crate::simplicial::sset::{standard_simplex, SimplicialMap, SimplicialSet};

/// Variables of a map problem: `vars[n][x]` is the value of simplex `x ∈ Xₙ`.
pub(crate) struct MapProblem {
    pub problem: Problem,
    pub vars: Vec<Vec<usize>>,
}

impl MapProblem {
    pub fn solution_to_map(&self, solution: &[usize]) -> SimplicialMap {
        SimplicialMap {
            levels: self
                .vars
                .iter()
                .map(|lvl| lvl.iter().map(|&v| solution[v]).collect())
                .collect(),
        }
    }
}

/// Constraint problem whose solutions are the simplicial maps `x → y`.
pub(crate) fn map_problem(x: &SimplicialSet, y: &SimplicialSet) -> Result<MapProblem> {
    if x.truncation() != y.truncation() {
        return Err(Error::structural(format!(
            "source truncated at {} but target at {}",
            x.truncation(),
            y.truncation()
        )));
    }
    let top = x.truncation();
    let mut problem = Problem::new();
    let vars: Vec<Vec<usize>> = (0..=top)
        .map(|n| (0..x.size(n)).map(|_| problem.add_full_var(y.size(n))).collect())
        .collect();
    for n in 1..=top {
        for i in 0..=n {
            let table = Table::Map(y.face_table(n, i).clone());
            for s in 0..x.size(n) {
                let f = x.face(n, i, s);
                problem.add_functional(vars[n][s], table.clone(), vars[n - 1][f], Table::Identity, y.size(n - 1));
            }
        }
    }
    for n in 0..top {
        for j in 0..=n {
            let table = Table::Map(y.degeneracy_table(n, j).clone());
            for s in 0..x.size(n) {
                let d = x.degeneracy(n, j, s);
                problem.add_functional(vars[n][s], table.clone(), vars[n + 1][d], Table::Identity, y.size(n + 1));
            }
        }
    }
    Ok(MapProblem { problem, vars })
}

/// Every simplicial map `x → y`, in canonical order.
///
/// Maps are found by propagation from the faces and degeneracies, so a map
/// is effectively chosen on nondegenerate simplices only. Exceeding the node
/// budget is an error, never a silently shortened list.
pub fn enumerate_simplicial_maps(x: &SimplicialSet, y: &SimplicialSet, opts: &SearchOptions) -> Result<Vec<SimplicialMap>> {
    let mp = map_problem(x, y)?;
    let sols = mp.problem.solve_all(opts)?;
    Ok(sols.solutions.iter().map(|s| mp.solution_to_map(s)).collect())
}

/// The prism `X × Δ[1]` with a map problem on it; `ends[n][x]` are the
/// variables of `(x, 0…0)` and `(x, 1…1)`.
pub(crate) struct PrismProblem {
    pub inner: MapProblem,
    pub ends: Vec<Vec<(usize, usize)>>,
}

pub(crate) fn prism_problem(x: &SimplicialSet, y: &SimplicialSet) -> Result<PrismProblem> {
    let interval = standard_simplex(1, x.truncation());
    let prism = SimplicialSet::product(x, &interval)?;
    let inner = map_problem(&prism, y)?;
    let ends = (0..=x.truncation())
        .map(|n| {
            let m = interval.size(n);
            (0..x.size(n))
                .map(|s| (inner.vars[n][s * m], inner.vars[n][s * m + m - 1]))
                .collect()
        })
        .collect();
    Ok(PrismProblem { inner, ends })
}

impl PrismProblem {
    /// A homotopy `f ≃ g`, restricted to the prism, if one exists.
    pub fn find(&self, f: &SimplicialMap, g: &SimplicialMap, y: &SimplicialSet, budget: u64) -> Result<Option<SimplicialMap>> {
        let mut p = self.inner.problem.clone();
        for (n, lvl) in self.ends.iter().enumerate() {
            for (s, &(v0, v1)) in lvl.iter().enumerate() {
                p.restrict(v0, &BitSet::singleton(y.size(n), f.apply(n, s)));
                p.restrict(v1, &BitSet::singleton(y.size(n), g.apply(n, s)));
            }
        }
        Ok(p.solve_first(budget)?.map(|sol| self.inner.solution_to_map(&sol)))
    }
}

/// Whether there is a simplicial homotopy `X × Δ[1] → Y` from `f` to `g`.
pub fn homotopic(
    x: &SimplicialSet,
    y: &SimplicialSet,
    f: &SimplicialMap,
    g: &SimplicialMap,
    budget: u64,
) -> Result<bool> {
    Ok(prism_problem(x, y)?.find(f, g, y, budget)?.is_some())
}

/// A partition of a list of maps into homotopy classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    /// Class index of each input map.
    pub class_of: Vec<usize>,
    /// Index of the first map in each class.
    pub representatives: Vec<usize>,
}

impl Partition {
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.representatives.len()];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Partitions `maps: X → Y` by simplicial homotopy.
///
/// Each map is compared against the representatives found so far. That
/// gives the true partition only because homotopy is an equivalence
/// relation, which holds for Kan targets; other targets are refused.
pub fn homotopy_classes(
    maps: &[SimplicialMap],
    x: &SimplicialSet,
    y: &SimplicialSet,
    opts: &SearchOptions,
) -> Result<Partition> {
    if !y.is_kan() {
        return Err(Error::Unsupported(format!(
            "homotopy classification needs a Kan target such as W̄G; `{}` is not known to be Kan",
            y.name()
        )));
    }
    for f in maps {
        if f.levels.len() != x.truncation() + 1
            || f.levels.iter().enumerate().any(|(n, l)| l.len() != x.size(n) || l.iter().any(|&v| v >= y.size(n)))
        {
            return Err(Error::structural("map does not fit the given source and target"));
        }
    }
    let prism = prism_problem(x, y)?;
    let mut class_of = Vec::with_capacity(maps.len());
    let mut representatives: Vec<usize> = Vec::new();
    for (i, f) in maps.iter().enumerate() {
        let verdicts = opts.map(&representatives, |&r| prism.find(&maps[r], f, y, opts.budget).map(|h| h.is_some()));
        let mut found = None;
        for (k, v) in verdicts.into_iter().enumerate() {
            if v? {
                found = Some(k);
                break;
            }
        }
        match found {
            Some(k) => class_of.push(k),
            None => {
                class_of.push(representatives.len());
                representatives.push(i);
            }
        }
    }
    Ok(Partition {
        class_of,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::sset::{circle, point};

    #[test]
    fn maps_from_point() {
        let x = point(2);
        let y = circle(2);
        let maps = enumerate_simplicial_maps(&x, &y, &SearchOptions::default()).unwrap();
        assert_eq!(maps.len(), y.size(0));
        for m in &maps {
            assert!(m.validate(&x, &y).unwrap().is_valid());
        }
    }

    #[test]
    fn non_kan_target_refused() {
        let x = point(2);
        let y = circle(2);
        let maps = enumerate_simplicial_maps(&x, &y, &SearchOptions::default()).unwrap();
        assert!(matches!(
            homotopy_classes(&maps, &x, &y, &SearchOptions::default()),
            Err(Error::Unsupported(_))
        ));
    }
}
