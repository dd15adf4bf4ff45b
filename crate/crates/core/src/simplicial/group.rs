use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingroup::{check_hom, FiniteGroup};
use crate::report::ValidationReport;
use crate::simplicial::sset::{validate_simplicial, MapTable, SimplicialSet};

/// A truncated simplicial group: a simplicial set whose levels carry group
/// laws making every face and degeneracy a homomorphism.
#[derive(Clone, Debug)]
pub struct SimplicialGroup {
    levels: Vec<Arc<FiniteGroup>>,
    set: SimplicialSet,
}

impl SimplicialGroup {
    /// Checks shapes only; see [`validate_simplicial_group`].
    pub fn new(
        name: impl Into<String>,
        levels: Vec<FiniteGroup>,
        faces: Vec<Vec<MapTable>>,
        degeneracies: Vec<Vec<MapTable>>,
    ) -> Result<Self> {
        let sizes = levels.iter().map(FiniteGroup::order).collect();
        let set = SimplicialSet::new(name, sizes, faces, degeneracies)?;
        Ok(Self {
            levels: levels.into_iter().map(Arc::new).collect(),
            set,
        })
    }

    /// The constant simplicial group: every level `K`, all maps identities.
    pub fn constant(k: &FiniteGroup, truncation: usize) -> Self {
        let id: MapTable = k.elements().collect();
        let faces = (0..=truncation).map(|n| if n == 0 { Vec::new() } else { vec![id.clone(); n + 1] }).collect();
        let degeneracies = (0..truncation).map(|n| vec![id.clone(); n + 1]).collect();
        Self::new(format!("const({})", k.name()), vec![k.clone(); truncation + 1], faces, degeneracies)
            .expect("constant simplicial group has consistent shape")
    }

    pub fn name(&self) -> &str {
        self.set.name()
    }

    pub fn truncation(&self) -> usize {
        self.set.truncation()
    }

    pub fn level(&self, n: usize) -> &FiniteGroup {
        &self.levels[n]
    }

    pub fn level_arc(&self, n: usize) -> Arc<FiniteGroup> {
        self.levels[n].clone()
    }

    pub fn underlying(&self) -> &SimplicialSet {
        &self.set
    }

    #[inline]
    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.set.face(n, i, x)
    }

    #[inline]
    pub fn degeneracy(&self, n: usize, j: usize, x: usize) -> usize {
        self.set.degeneracy(n, j, x)
    }

    /// Restriction to levels `0..=n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        Ok(Self {
            levels: self.levels[..=n].to_vec(),
            set: self.set.truncate(n)?,
        })
    }

    /// `eₙ`, the identity of level `n`.
    pub fn unit(&self, n: usize) -> usize {
        self.levels[n].identity()
    }
}

/// Simplicial identities plus the homomorphism property of every map.
pub fn validate_simplicial_group(g: &SimplicialGroup) -> Result<ValidationReport> {
    let mut report = validate_simplicial(&g.set);
    for n in 1..=g.truncation() {
        for i in 0..=n {
            let r = check_hom(g.level(n), g.level(n - 1), g.set.face_table(n, i))?;
            if !r.is_valid() {
                report.push("face homomorphism", format!("∂{i} on level {n}"));
            }
        }
    }
    for n in 0..g.truncation() {
        for j in 0..=n {
            let r = check_hom(g.level(n), g.level(n + 1), g.set.degeneracy_table(n, j))?;
            if !r.is_valid() {
                report.push("degeneracy homomorphism", format!("s{j} on level {n}"));
            }
        }
    }
    Ok(report)
}

fn kernel_of(g: &SimplicialGroup, n: usize, faces: impl Iterator<Item = usize> + Clone) -> Vec<usize> {
    let target_e = g.unit(n - 1);
    g.level(n)
        .elements()
        .filter(|&x| faces.clone().all(|i| g.face(n, i, x) == target_e))
        .collect()
}

/// `Nₙ = ∩_{i≥1} ker ∂ᵢ` (all of `G₀` at level 0).
pub fn moore_subgroup(g: &SimplicialGroup, n: usize) -> Vec<usize> {
    if n == 0 {
        return g.level(0).elements().collect();
    }
    kernel_of(g, n, 1..=n)
}

/// `πₙ` as the homology of the Moore complex,
/// `(Nₙ ∩ ker ∂₀) / ∂₀(Nₙ₊₁)`.
pub fn moore_homotopy(g: &SimplicialGroup, n: usize) -> Result<FiniteGroup> {
    if n + 1 > g.truncation() {
        return Err(Error::BadParameter(format!(
            "π{n} needs truncation ≥ {}, have {}",
            n + 1,
            g.truncation()
        )));
    }
    let cycles: Vec<usize> = if n == 0 {
        g.level(0).elements().collect()
    } else {
        kernel_of(g, n, 0..=n)
    };
    let mut boundaries: Vec<usize> = moore_subgroup(g, n + 1).iter().map(|&x| g.face(n + 1, 0, x)).collect();
    boundaries.sort_unstable();
    boundaries.dedup();
    let z = g.level(n).subgroup(&cycles, format!("Z{n}"))?;
    let mut index = vec![usize::MAX; g.level(n).order()];
    for (i, &x) in z.embedding.iter().enumerate() {
        index[x] = i;
    }
    if boundaries.iter().any(|&b| index[b] == usize::MAX) {
        return Err(Error::Transcription(format!("boundaries at level {n} are not cycles")));
    }
    let b_in_z: Vec<usize> = boundaries.iter().map(|&b| index[b]).collect();
    Ok(z.group.quotient(&b_in_z, format!("pi{n}({})", g.name()))?.group)
}

/// Both readings of `Ḡₙ = ker ∂₁…∂ₙ` at one level, with the two
/// compatibility checks for each.
#[derive(Clone, Debug, Serialize)]
pub struct GbarLevel {
    pub level: usize,
    /// `ker(∂₁∘∂₂∘…∘∂ₙ)`.
    pub composite_kernel: Vec<usize>,
    /// `∩_{i≥1} ker ∂ᵢ`, the Moore subgroup.
    pub intersection: Vec<usize>,
    pub readings_differ: bool,
    /// `∂₀Ḡₙ₊₁` normal in `Gₙ`, per reading (`None` at the top level).
    pub boundary_normal: Option<[bool; 2]>,
    /// `∂ᵢḠₙ₊₁ ⊂ Ḡₙ` for all `i > 0`, per reading.
    pub faces_preserve: Option<[bool; 2]>,
}

/// Both readings of `Ḡₙ` for every level, `Ḡ₀` trivial.
pub fn gbar_subgroups(g: &SimplicialGroup) -> Vec<GbarLevel> {
    let top = g.truncation();
    let readings: Vec<[Vec<usize>; 2]> = (0..=top)
        .map(|n| {
            if n == 0 {
                let e = vec![g.unit(0)];
                return [e.clone(), e];
            }
            let composite: Vec<usize> = g
                .level(n)
                .elements()
                .filter(|&x| {
                    let mut y = x;
                    for m in (1..=n).rev() {
                        y = g.face(m, 1, y);
                    }
                    y == g.unit(0)
                })
                .collect();
            [composite, kernel_of(g, n, 1..=n)]
        })
        .collect();
    (0..=top)
        .map(|n| {
            let (boundary_normal, faces_preserve) = if n < top {
                let mut normal = [false; 2];
                let mut preserve = [false; 2];
                for r in 0..2 {
                    let mut image: Vec<usize> = readings[n + 1][r].iter().map(|&x| g.face(n + 1, 0, x)).collect();
                    image.sort_unstable();
                    image.dedup();
                    normal[r] = g.level(n).is_subgroup(&image) && g.level(n).is_normal(&image);
                    preserve[r] = (1..=n + 1).all(|i| {
                        readings[n + 1][r]
                            .iter()
                            .all(|&x| readings[n][r].binary_search(&g.face(n + 1, i, x)).is_ok())
                    });
                }
                (Some(normal), Some(preserve))
            } else {
                (None, None)
            };
            GbarLevel {
                level: n,
                readings_differ: readings[n][0] != readings[n][1],
                composite_kernel: readings[n][0].clone(),
                intersection: readings[n][1].clone(),
                boundary_normal,
                faces_preserve,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::presets::symmetric;

    #[test]
    fn constant_group() {
        let g = SimplicialGroup::constant(&symmetric(3), 3);
        assert!(validate_simplicial_group(&g).unwrap().is_valid());
        assert_eq!(moore_homotopy(&g, 0).unwrap().order(), 6);
        assert_eq!(moore_homotopy(&g, 1).unwrap().order(), 1);
        assert!(moore_homotopy(&g, 3).is_err());
        for lvl in gbar_subgroups(&g).iter().skip(1) {
            assert_eq!(lvl.composite_kernel.len(), 1);
            assert_eq!(lvl.intersection.len(), 1);
        }
    }
}
