use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::sset::{from_words, SimplicialSet};

/// An abstract Čech complex: `k` charts and the family of chart sets with
/// nonempty common intersection. Always downward closed and containing
/// every singleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverComplex {
    name: String,
    charts: usize,
    simplices: BTreeSet<Vec<usize>>,
}

/// What loading a cover added to make it a complex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    /// Subsets added by downward closure (including missing singletons).
    pub added: Vec<Vec<usize>>,
}

/// `cover.json`: `{"charts": k, "intersections": [[int]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub charts: usize,
    pub intersections: Vec<Vec<usize>>,
}

impl CoverComplex {
    /// Downward closure of `intersections` plus all singletons.
    pub fn new(name: impl Into<String>, charts: usize, intersections: &[Vec<usize>]) -> Result<(Self, ClosureReport)> {
        if charts == 0 {
            return Err(Error::BadParameter("a cover needs at least one chart".into()));
        }
        let mut given: BTreeSet<Vec<usize>> = BTreeSet::new();
        for set in intersections {
            let mut s = set.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if s.iter().any(|&c| c >= charts) {
                return Err(Error::BadParameter(format!("intersection {set:?} names a chart ≥ {charts}")));
            }
            given.insert(s);
        }
        let mut simplices = BTreeSet::new();
        for s in &given {
            let m = s.len();
            for mask in 1u64..(1u64 << m) {
                let sub: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                simplices.insert(sub);
            }
        }
        for c in 0..charts {
            simplices.insert(vec![c]);
        }
        let added = simplices.iter().filter(|s| !given.contains(*s)).cloned().collect();
        Ok((
            Self {
                name: name.into(),
                charts,
                simplices,
            },
            ClosureReport { added },
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn charts(&self) -> usize {
        self.charts
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        self.simplices.contains(set)
    }

    /// Whether the distinct charts in `word` have a common intersection.
    pub fn admits(&self, word: &[usize]) -> bool {
        let mut s = word.to_vec();
        s.sort_unstable();
        s.dedup();
        self.simplices.contains(&s)
    }

    /// Top dimension (largest intersection size minus one).
    pub fn dimension(&self) -> usize {
        self.simplices.iter().map(Vec::len).max().unwrap_or(1) - 1
    }

    /// Increasing `(p+1)`-tuples with nonempty intersection, in lexicographic order.
    pub fn tuples(&self, p: usize) -> Vec<Vec<usize>> {
        self.simplices.iter().filter(|s| s.len() == p + 1).cloned().collect()
    }

    pub fn maximal(&self) -> Vec<Vec<usize>> {
        self.simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|x| t.contains(x)))
            })
            .cloned()
            .collect()
    }

    /// Nerve of the cover groupoid: `n`-simplices are ordered words of
    /// `n+1` charts (repeats allowed) with admissible support. Also returns
    /// the words, indexed like the simplices.
    pub fn nerve(&self, truncation: usize) -> Result<(SimplicialSet, Vec<Vec<Vec<usize>>>)> {
        from_words(format!("N({})", self.name), self.charts, truncation, |w| self.admits(w), |w| w.to_vec())
    }

    /// Nerve of the ordered simplicial complex: nondecreasing chart words
    /// with admissible support. Weakly equivalent to [`Self::nerve`] and
    /// much smaller.
    pub fn ordered_nerve(&self, truncation: usize) -> Result<(SimplicialSet, Vec<Vec<Vec<usize>>>)> {
        from_words(
            format!("N<({})", self.name),
            self.charts,
            truncation,
            |w| w.windows(2).all(|p| p[0] <= p[1]) && self.admits(w),
            |w| w.to_vec(),
        )
    }

    /// Whether `chart_map` sends every intersection to an intersection.
    pub fn is_admissible_map(&self, target: &CoverComplex, chart_map: &[usize]) -> bool {
        chart_map.len() == self.charts
            && chart_map.iter().all(|&c| c < target.charts)
            && self
                .simplices
                .iter()
                .all(|s| target.admits(&s.iter().map(|&c| chart_map[c]).collect::<Vec<_>>()))
    }

    pub fn to_json(&self) -> CoverJson {
        CoverJson {
            name: Some(self.name.clone()),
            charts: self.charts,
            intersections: self.maximal(),
        }
    }

    pub fn from_json(json: &CoverJson) -> Result<(Self, ClosureReport)> {
        let name = json.name.clone().unwrap_or_else(|| format!("cover{}", json.charts));
        Self::new(name, json.charts, &json.intersections)
    }

    /// A single chart.
    pub fn single() -> Self {
        Self::new("single", 1, &[]).unwrap().0
    }

    /// `k ≥ 3` charts in a ring, consecutive ones overlapping, no triple overlaps.
    pub fn circle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::BadParameter("a circle cover needs at least 3 charts".into()));
        }
        let edges: Vec<Vec<usize>> = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
        Ok(Self::new(format!("circle({k})"), k, &edges)?.0)
    }

    /// All proper subsets of `k+1` charts: the boundary of a `k`-simplex, a
    /// model of the `(k−1)`-sphere.
    pub fn boundary(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::BadParameter("boundary(k) needs k ≥ 1".into()));
        }
        let n = k + 1;
        let faces: Vec<Vec<usize>> = (0..n).map(|skip| (0..n).filter(|&c| c != skip).collect()).collect();
        Ok(Self::new(format!("boundary({k})"), n, &faces)?.0)
    }

    /// `k` charts with every intersection nonempty.
    pub fn simplex(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::BadParameter("simplex(k) needs k ≥ 1".into()));
        }
        Ok(Self::new(format!("simplex({k})"), k, &[(0..k).collect()])?.0)
    }

    /// Parses `single`, `circle(k)`, `sphere2`, `sphere3`, `boundary(k)` or `simplex(k)`.
    pub fn preset(expr: &str) -> Result<Self> {
        let expr: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, arg) = match expr.split_once('(') {
            Some((n, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::BadParameter(format!("missing `)` in `{expr}`")))?;
                let k: usize = inner
                    .parse()
                    .map_err(|_| Error::BadParameter(format!("`{inner}` is not a chart count")))?;
                (n.to_string(), Some(k))
            }
            None => (expr.clone(), None),
        };
        let cover = match (name.as_str(), arg) {
            ("single", None) => Self::single(),
            ("circle", Some(k)) if k <= 12 => Self::circle(k)?,
            ("sphere2", None) => Self::boundary(3)?.with_name("sphere2"),
            ("sphere3", None) => Self::boundary(4)?.with_name("sphere3"),
            ("boundary", Some(k)) if k <= 6 => Self::boundary(k)?,
            ("simplex", Some(k)) if k <= 6 => Self::simplex(k)?,
            ("circle" | "boundary" | "simplex", Some(k)) => {
                return Err(Error::BadParameter(format!("`{name}({k})` is too large")))
            }
            _ => return Err(Error::UnknownPreset(format!("cover `{expr}`"))),
        };
        Ok(cover)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::validate_simplicial;

    #[test]
    fn two_overlapping_charts() {
        let (c, report) = CoverComplex::new("two", 2, &[vec![0, 1]]).unwrap();
        assert_eq!(report.added, vec![vec![0], vec![1]]);
        let (nerve, _) = c.nerve(2).unwrap();
        assert_eq!(nerve.sizes(), &[2, 4, 8]);
        assert!(validate_simplicial(&nerve).is_valid());
    }

    #[test]
    fn no_triple_overlap() {
        let c = CoverComplex::circle(3).unwrap();
        let (nerve, words) = c.nerve(2).unwrap();
        assert!(words[2].iter().all(|w| {
            let mut s = w.clone();
            s.sort();
            s.dedup();
            s.len() < 3
        }));
        // 3 singletons give 3 words, 3 edges give 2³−2 = 6 each
        assert_eq!(nerve.size(2), 3 + 3 * 6);
    }

    #[test]
    fn single_chart() {
        let (nerve, _) = CoverComplex::single().nerve(3).unwrap();
        assert_eq!(nerve.sizes(), &[1, 1, 1, 1]);
    }

    #[test]
    fn presets() {
        assert_eq!(CoverComplex::preset("sphere2").unwrap().tuples(2).len(), 4);
        assert_eq!(CoverComplex::preset("sphere3").unwrap().tuples(3).len(), 5);
        assert_eq!(CoverComplex::preset("circle(4)").unwrap().tuples(1).len(), 4);
        assert!(CoverComplex::preset("torus").is_err());
        assert!(CoverComplex::preset("circle(2)").is_err());
    }
}
