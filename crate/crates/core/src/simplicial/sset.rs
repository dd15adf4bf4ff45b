use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::ValidationReport;

/// Face or degeneracy table: `table[x]` is the image of simplex `x`.
pub type MapTable = Arc<[usize]>;

/// A simplicial set truncated at level `N`: simplices `X₀..X_N` are interned
/// as `0..size(n)`, with tables for `∂ᵢ: Xₙ → Xₙ₋₁` (`1 ≤ n ≤ N`) and
/// `sⱼ: Xₙ → Xₙ₊₁` (`n < N`).
#[derive(Clone, Debug)]
pub struct SimplicialSet {
    name: String,
    sizes: Vec<usize>,
    faces: Vec<Vec<MapTable>>,
    degeneracies: Vec<Vec<MapTable>>,
    kan: bool,
}

impl SimplicialSet {
    /// Checks dimensions only; use [`validate_simplicial`] for the identities.
    pub fn new(
        name: impl Into<String>,
        sizes: Vec<usize>,
        faces: Vec<Vec<MapTable>>,
        degeneracies: Vec<Vec<MapTable>>,
    ) -> Result<Self> {
        check_shape(&sizes, &faces, &degeneracies)?;
        Ok(Self {
            name: name.into(),
            sizes,
            faces,
            degeneracies,
            kan: false,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn truncation(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, n: usize) -> usize {
        self.sizes[n]
    }

    #[inline]
    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    #[inline]
    pub fn degeneracy(&self, n: usize, j: usize, x: usize) -> usize {
        self.degeneracies[n][j][x]
    }

    /// `∂ᵢ: Xₙ → Xₙ₋₁`.
    pub fn face_table(&self, n: usize, i: usize) -> &MapTable {
        &self.faces[n][i]
    }

    /// `sⱼ: Xₙ → Xₙ₊₁`.
    pub fn degeneracy_table(&self, n: usize, j: usize) -> &MapTable {
        &self.degeneracies[n][j]
    }

    /// Whether the set is known to be Kan (set by the `W̄` and Duskin
    /// constructions). Homotopy of maps is only an equivalence relation for
    /// Kan targets, so map classification insists on this flag.
    pub fn is_kan(&self) -> bool {
        self.kan
    }

    pub(crate) fn mark_kan(mut self) -> Self {
        self.kan = true;
        self
    }

    /// Simplices of level `n` not in the image of any degeneracy.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        if n == 0 {
            return (0..self.sizes[0]).collect();
        }
        let mut degenerate = vec![false; self.sizes[n]];
        for table in &self.degeneracies[n - 1] {
            for &y in table.iter() {
                degenerate[y] = true;
            }
        }
        (0..self.sizes[n]).filter(|&x| !degenerate[x]).collect()
    }

    /// Restriction to levels `0..=n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.truncation() {
            return Err(Error::BadParameter(format!(
                "cannot truncate level-{} object at {n}",
                self.truncation()
            )));
        }
        Ok(Self {
            name: self.name.clone(),
            sizes: self.sizes[..=n].to_vec(),
            faces: self.faces[..=n].to_vec(),
            degeneracies: self.degeneracies[..n].to_vec(),
            kan: self.kan,
        })
    }

    /// Level-wise product, `(x, y)` stored at `x·|Yₙ| + y`.
    pub fn product(a: &SimplicialSet, b: &SimplicialSet) -> Result<SimplicialSet> {
        if a.truncation() != b.truncation() {
            return Err(Error::structural("product of sets with different truncation"));
        }
        let n_max = a.truncation();
        let sizes: Vec<usize> = (0..=n_max).map(|n| a.sizes[n] * b.sizes[n]).collect();
        let pair = |ta: &MapTable, tb: &MapTable, src_b: usize, dst_b: usize| -> MapTable {
            let len = ta.len() * src_b;
            (0..len).map(|p| ta[p / src_b] * dst_b + tb[p % src_b]).collect()
        };
        let faces = (0..=n_max)
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                (0..=n)
                    .map(|i| pair(&a.faces[n][i], &b.faces[n][i], b.sizes[n], b.sizes[n - 1]))
                    .collect()
            })
            .collect();
        let degeneracies = (0..n_max)
            .map(|n| {
                (0..=n)
                    .map(|j| pair(&a.degeneracies[n][j], &b.degeneracies[n][j], b.sizes[n], b.sizes[n + 1]))
                    .collect()
            })
            .collect();
        SimplicialSet::new(format!("{}x{}", a.name, b.name), sizes, faces, degeneracies)
    }

    pub fn to_json(&self) -> SsetJson {
        SsetJson {
            name: self.name.clone(),
            sizes: self.sizes.clone(),
            faces: self
                .faces
                .iter()
                .map(|lvl| lvl.iter().map(|t| t.to_vec()).collect())
                .collect(),
            degeneracies: self
                .degeneracies
                .iter()
                .map(|lvl| lvl.iter().map(|t| t.to_vec()).collect())
                .collect(),
        }
    }

    /// Loads and validates; never returns a set violating the identities.
    pub fn from_json(json: &SsetJson) -> Result<Self> {
        let to_tables = |v: &Vec<Vec<Vec<usize>>>| -> Vec<Vec<MapTable>> {
            v.iter().map(|lvl| lvl.iter().map(|t| t.as_slice().into()).collect()).collect()
        };
        let set = SimplicialSet::new(
            json.name.clone(),
            json.sizes.clone(),
            to_tables(&json.faces),
            to_tables(&json.degeneracies),
        )?;
        let report = validate_simplicial(&set);
        if !report.is_valid() {
            return Err(Error::Structural(format!("simplicial identities fail: {report}")));
        }
        Ok(set)
    }
}

/// `sset.json`: level sizes plus `faces[n][i]` and `degeneracies[n][j]`
/// as integer arrays (`faces[0]` is empty).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SsetJson {
    pub name: String,
    pub sizes: Vec<usize>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

fn check_shape(sizes: &[usize], faces: &[Vec<MapTable>], degeneracies: &[Vec<MapTable>]) -> Result<()> {
    let top = sizes.len().checked_sub(1).ok_or_else(|| Error::structural("no levels"))?;
    if top == 0 {
        return Err(Error::structural("truncation must be at least 1"));
    }
    if faces.len() != top + 1 || !faces[0].is_empty() {
        return Err(Error::structural("faces must be given for levels 1..=N"));
    }
    if degeneracies.len() != top {
        return Err(Error::structural("degeneracies must be given for levels 0..N"));
    }
    for n in 1..=top {
        if faces[n].len() != n + 1 {
            return Err(Error::structural(format!("level {n} needs {} faces", n + 1)));
        }
        for (i, t) in faces[n].iter().enumerate() {
            if t.len() != sizes[n] || t.iter().any(|&y| y >= sizes[n - 1]) {
                return Err(Error::structural(format!("face ∂{i} on level {n} has wrong shape")));
            }
        }
    }
    for n in 0..top {
        if degeneracies[n].len() != n + 1 {
            return Err(Error::structural(format!("level {n} needs {} degeneracies", n + 1)));
        }
        for (j, t) in degeneracies[n].iter().enumerate() {
            if t.len() != sizes[n] || t.iter().any(|&y| y >= sizes[n + 1]) {
                return Err(Error::structural(format!("degeneracy s{j} on level {n} has wrong shape")));
            }
        }
    }
    Ok(())
}

/// Checks every simplicial identity whose two sides live within the
/// truncation:
///
/// * `∂ᵢ∂ⱼ = ∂ⱼ₋₁∂ᵢ` for `i < j`,
/// * `∂ᵢsⱼ = sⱼ₋₁∂ᵢ` (`i < j`), `= id` (`i = j, j+1`), `= sⱼ∂ᵢ₋₁` (`i > j+1`),
/// * `sᵢsⱼ = sⱼ₊₁sᵢ` for `i ≤ j`.
pub fn validate_simplicial(x: &SimplicialSet) -> ValidationReport {
    let mut report = ValidationReport::new();
    let top = x.truncation();
    for n in 2..=top {
        for j in 1..=n {
            for i in 0..j {
                if let Some(s) = (0..x.size(n)).find(|&s| x.face(n - 1, i, x.face(n, j, s)) != x.face(n - 1, j - 1, x.face(n, i, s))) {
                    report.push("face-face", format!("∂{i}∂{j} ≠ ∂{}∂{i} on level-{n} simplex {s}", j - 1));
                }
            }
        }
    }
    for n in 0..top {
        for j in 0..=n {
            for i in 0..=n + 1 {
                let bad = (0..x.size(n)).find(|&s| {
                    let lhs = x.face(n + 1, i, x.degeneracy(n, j, s));
                    let rhs = if i < j {
                        x.degeneracy(n - 1, j - 1, x.face(n, i, s))
                    } else if i == j || i == j + 1 {
                        s
                    } else {
                        x.degeneracy(n - 1, j, x.face(n, i - 1, s))
                    };
                    lhs != rhs
                });
                if let Some(s) = bad {
                    report.push("face-degeneracy", format!("∂{i}s{j} on level-{n} simplex {s}"));
                }
            }
        }
    }
    for n in 0..top.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                if let Some(s) = (0..x.size(n)).find(|&s| {
                    x.degeneracy(n + 1, i, x.degeneracy(n, j, s)) != x.degeneracy(n + 1, j + 1, x.degeneracy(n, i, s))
                }) {
                    report.push("degeneracy-degeneracy", format!("s{i}s{j} ≠ s{}s{i} on level-{n} simplex {s}", j + 1));
                }
            }
        }
    }
    report
}

/// Builds a simplicial set whose `n`-simplices are words of length `n+1`
/// over `0..alphabet` accepted by `admissible`, modulo `canon`; faces delete
/// a letter and degeneracies repeat one. `canon` must be compatible with
/// both operations.
pub fn from_words(
    name: impl Into<String>,
    alphabet: usize,
    truncation: usize,
    admissible: impl Fn(&[usize]) -> bool,
    canon: impl Fn(&[usize]) -> Vec<usize>,
) -> Result<(SimplicialSet, Vec<Vec<Vec<usize>>>)> {
    let mut words: Vec<Vec<Vec<usize>>> = Vec::with_capacity(truncation + 1);
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(truncation + 1);
    for n in 0..=truncation {
        let mut level: Vec<Vec<usize>> = Vec::new();
        let total = alphabet.pow(n as u32 + 1);
        let mut word = vec![0usize; n + 1];
        for code in 0..total {
            let mut c = code;
            for k in (0..=n).rev() {
                word[k] = c % alphabet;
                c /= alphabet;
            }
            if admissible(&word) {
                level.push(canon(&word));
            }
        }
        level.sort();
        level.dedup();
        index.push(level.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect());
        words.push(level);
    }
    let lookup = |n: usize, w: Vec<usize>| -> Result<usize> {
        index[n]
            .get(&canon(&w))
            .copied()
            .ok_or_else(|| Error::structural(format!("word {w:?} not closed under faces/degeneracies")))
    };
    let mut faces: Vec<Vec<MapTable>> = vec![Vec::new()];
    for n in 1..=truncation {
        let mut lvl = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let t: Result<Vec<usize>> = words[n]
                .iter()
                .map(|w| {
                    let mut f = w.clone();
                    f.remove(i);
                    lookup(n - 1, f)
                })
                .collect();
            lvl.push(t?.into());
        }
        faces.push(lvl);
    }
    let mut degeneracies: Vec<Vec<MapTable>> = Vec::new();
    for n in 0..truncation {
        let mut lvl = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let t: Result<Vec<usize>> = words[n]
                .iter()
                .map(|w| {
                    let mut s = w.clone();
                    s.insert(j, w[j]);
                    lookup(n + 1, s)
                })
                .collect();
            lvl.push(t?.into());
        }
        degeneracies.push(lvl);
    }
    let sizes = words.iter().map(Vec::len).collect();
    Ok((SimplicialSet::new(name, sizes, faces, degeneracies)?, words))
}

fn nondecreasing(w: &[usize]) -> bool {
    w.windows(2).all(|p| p[0] <= p[1])
}

/// The one-point simplicial set `Δ[0]`.
pub fn point(truncation: usize) -> SimplicialSet {
    standard_simplex(0, truncation)
}

/// `Δ[k]`: `n`-simplices are nondecreasing words of length `n+1` over `0..=k`.
pub fn standard_simplex(k: usize, truncation: usize) -> SimplicialSet {
    let name = if k == 0 { "pt".to_string() } else { format!("Delta[{k}]") };
    from_words(name, k + 1, truncation, nondecreasing, |w| w.to_vec())
        .expect("standard simplex is closed")
        .0
}

/// The minimal simplicial circle `Δ[1]/∂Δ[1]`: one vertex and one
/// nondegenerate edge.
pub fn circle(truncation: usize) -> SimplicialSet {
    minimal_sphere(1, truncation).with_name("S1")
}

/// `Δ[k]/∂Δ[k]`: one vertex and one nondegenerate `k`-simplex. Simplices
/// missing some vertex collapse to the basepoint.
pub fn minimal_sphere(k: usize, truncation: usize) -> SimplicialSet {
    from_words(format!("S{k}"), k + 1, truncation, nondecreasing, |w| {
        let surjective = (0..=k).all(|v| w.contains(&v));
        if surjective {
            w.to_vec()
        } else {
            vec![0; w.len()]
        }
    })
    .expect("minimal sphere is closed")
    .0
}

/// A simplicial map given level by level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimplicialMap {
    pub levels: Vec<Vec<usize>>,
}

impl SimplicialMap {
    #[inline]
    pub fn apply(&self, n: usize, x: usize) -> usize {
        self.levels[n][x]
    }

    /// Map built from a function on each level.
    pub fn from_fn(source: &SimplicialSet, f: impl Fn(usize, usize) -> usize) -> Self {
        Self {
            levels: (0..=source.truncation())
                .map(|n| (0..source.size(n)).map(|x| f(n, x)).collect())
                .collect(),
        }
    }

    pub fn compose(&self, after: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(n, lvl)| lvl.iter().map(|&y| after.levels[n][y]).collect())
                .collect(),
        }
    }

    /// Commutation with every face and degeneracy.
    pub fn validate(&self, source: &SimplicialSet, target: &SimplicialSet) -> Result<ValidationReport> {
        let top = source.truncation();
        if target.truncation() != top || self.levels.len() != top + 1 {
            return Err(Error::structural("map, source and target truncations differ"));
        }
        for n in 0..=top {
            if self.levels[n].len() != source.size(n) || self.levels[n].iter().any(|&y| y >= target.size(n)) {
                return Err(Error::structural(format!("map level {n} has wrong shape")));
            }
        }
        let mut report = ValidationReport::new();
        for n in 1..=top {
            for i in 0..=n {
                if let Some(x) = (0..source.size(n))
                    .find(|&x| self.apply(n - 1, source.face(n, i, x)) != target.face(n, i, self.apply(n, x)))
                {
                    report.push("commutes with faces", format!("∂{i} at level-{n} simplex {x}"));
                }
            }
        }
        for n in 0..top {
            for j in 0..=n {
                if let Some(x) = (0..source.size(n)).find(|&x| {
                    self.apply(n + 1, source.degeneracy(n, j, x)) != target.degeneracy(n, j, self.apply(n, x))
                }) {
                    report.push("commutes with degeneracies", format!("s{j} at level-{n} simplex {x}"));
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_sizes() {
        let d2 = standard_simplex(2, 3);
        // C(n+3, 2)
        assert_eq!(d2.sizes(), &[3, 6, 10, 15]);
        assert!(validate_simplicial(&d2).is_valid());
        assert_eq!(d2.nondegenerate(2).len(), 1);
        assert_eq!(d2.nondegenerate(3).len(), 0);
    }

    #[test]
    fn minimal_circle() {
        let s1 = circle(3);
        assert_eq!(s1.sizes(), &[1, 2, 3, 4]);
        assert!(validate_simplicial(&s1).is_valid());
        assert_eq!(s1.nondegenerate(1).len(), 1);
        assert!(s1.nondegenerate(2).is_empty());
    }

    #[test]
    fn corrupted_face_is_reported() {
        let d1 = standard_simplex(1, 2);
        let mut faces = d1.faces.clone();
        let mut t = faces[2][0].to_vec();
        t.swap(0, 1);
        faces[2][0] = t.into();
        let bad = SimplicialSet::new("bad", d1.sizes.clone(), faces, d1.degeneracies.clone()).unwrap();
        let report = validate_simplicial(&bad);
        assert!(!report.is_valid());
        assert!(report.violates("face-face") || report.violates("face-degeneracy"));
    }

    #[test]
    fn product_and_json() {
        let p = SimplicialSet::product(&standard_simplex(1, 2), &circle(2)).unwrap();
        assert!(validate_simplicial(&p).is_valid());
        let back = SimplicialSet::from_json(&p.to_json()).unwrap();
        assert_eq!(back.sizes(), p.sizes());
    }
}
