use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::SearchOptions;
use crate::report::ValidationReport;
use crate::simplicial::search::{Problem, Table};
use crate::simplicial::{validate_simplicial, MapTable, SimplicialGroup, SimplicialMap, SimplicialSet};

/// A twisting `τ: Xₙ → Gₙ₋₁` (`n ≥ 1`) over a truncated base.
#[derive(Clone, Debug)]
pub struct Twisting {
    base: SimplicialSet,
    group: SimplicialGroup,
    /// `values[n][x] = τ(x)` for `x ∈ Xₙ`; `values[0]` is empty.
    values: Vec<Vec<usize>>,
}

impl Twisting {
    /// Builds and validates.
    pub fn new(base: SimplicialSet, group: SimplicialGroup, values: Vec<Vec<usize>>) -> Result<Self> {
        check_shape(&base, &group, &values)?;
        let t = Self::from_parts(base, group, values);
        let report = validate_twisting(&t);
        if !report.is_valid() {
            return Err(Error::InvalidTwisting(report));
        }
        Ok(t)
    }

    /// Shape-checked but not validated.
    pub fn unchecked(base: SimplicialSet, group: SimplicialGroup, values: Vec<Vec<usize>>) -> Result<Self> {
        check_shape(&base, &group, &values)?;
        Ok(Self::from_parts(base, group, values))
    }

    pub(crate) fn from_parts(base: SimplicialSet, group: SimplicialGroup, values: Vec<Vec<usize>>) -> Self {
        Self { base, group, values }
    }

    /// `τ ≡ e`.
    pub fn trivial(base: &SimplicialSet, group: &SimplicialGroup) -> Result<Self> {
        let values = (0..=base.truncation())
            .map(|n| if n == 0 { Vec::new() } else { vec![group.unit(n - 1); base.size(n)] })
            .collect();
        Self::new(base.clone(), group.clone(), values)
    }

    pub fn base(&self) -> &SimplicialSet {
        &self.base
    }

    pub fn group(&self) -> &SimplicialGroup {
        &self.group
    }

    pub fn values(&self) -> &[Vec<usize>] {
        &self.values
    }

    #[inline]
    pub fn at(&self, n: usize, x: usize) -> usize {
        self.values[n][x]
    }

    /// Restriction to base levels `0..=n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        Ok(Self {
            base: self.base.truncate(n)?,
            group: if self.group.truncation() > n {
                self.group.truncate(n)?
            } else {
                self.group.clone()
            },
            values: self.values[..=n].to_vec(),
        })
    }

    /// The pulled-back twisting `τ ∘ f` along `f: Y → X`.
    pub fn pullback(&self, source: &SimplicialSet, f: &SimplicialMap) -> Result<Self> {
        let values = (0..=source.truncation())
            .map(|n| {
                if n == 0 {
                    Vec::new()
                } else {
                    f.levels[n].iter().map(|&y| self.values[n][y]).collect()
                }
            })
            .collect();
        Self::unchecked(source.clone(), self.group.clone(), values)
    }

    pub fn to_json(&self) -> TwistingJson {
        TwistingJson {
            base: self.base.name().to_string(),
            group: self.group.name().to_string(),
            levels: self
                .values
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, v)| TwistingLevel { level: n, values: v.clone() })
                .collect(),
        }
    }

    /// Reads values for the given base and group and validates them.
    pub fn from_json(json: &TwistingJson, base: &SimplicialSet, group: &SimplicialGroup) -> Result<Self> {
        let mut values = vec![Vec::new(); base.truncation() + 1];
        for lvl in &json.levels {
            if lvl.level == 0 || lvl.level > base.truncation() {
                return Err(Error::structural(format!("twisting level {} out of range", lvl.level)));
            }
            values[lvl.level] = lvl.values.clone();
        }
        Self::new(base.clone(), group.clone(), values)
    }
}

/// `twisting.json`: values per level, indexed by simplex id.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TwistingJson {
    pub base: String,
    pub group: String,
    pub levels: Vec<TwistingLevel>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TwistingLevel {
    pub level: usize,
    pub values: Vec<usize>,
}

fn check_shape(base: &SimplicialSet, group: &SimplicialGroup, values: &[Vec<usize>]) -> Result<()> {
    let top = base.truncation();
    if group.truncation() + 1 < top {
        return Err(Error::structural(format!(
            "twisting on a level-{top} base needs the group through level {}",
            top - 1
        )));
    }
    if values.len() != top + 1 || !values[0].is_empty() {
        return Err(Error::structural("twisting values must cover levels 1..=N"));
    }
    for n in 1..=top {
        if values[n].len() != base.size(n) || values[n].iter().any(|&g| g >= group.level(n - 1).order()) {
            return Err(Error::structural(format!("twisting level {n} has wrong shape")));
        }
    }
    Ok(())
}

/// The four twisting conditions at every level within truncation:
///
/// 1. `∂₀τ(x) = τ(∂₁x)·τ(∂₀x)⁻¹`
/// 2. `∂ᵢτ(x) = τ(∂ᵢ₊₁x)` for `i > 0`
/// 3. `sᵢτ(x) = τ(sᵢ₊₁x)` for `i ≥ 0`
/// 4. `τ(s₀x) = eₙ`
pub fn validate_twisting(t: &Twisting) -> ValidationReport {
    let (x, g) = (&t.base, &t.group);
    let top = x.truncation();
    let mut report = ValidationReport::new();
    for n in 2..=top {
        let gg = g.level(n - 2);
        if let Some(s) = (0..x.size(n)).find(|&s| {
            g.face(n - 1, 0, t.at(n, s)) != gg.mul(t.at(n - 1, x.face(n, 1, s)), gg.inv(t.at(n - 1, x.face(n, 0, s))))
        }) {
            report.push("twisting ∂0", format!("level-{n} simplex {s}"));
        }
        for i in 1..n {
            if let Some(s) = (0..x.size(n)).find(|&s| g.face(n - 1, i, t.at(n, s)) != t.at(n - 1, x.face(n, i + 1, s))) {
                report.push("twisting ∂i", format!("∂{i} at level-{n} simplex {s}"));
            }
        }
    }
    for n in 1..top {
        for i in 0..n {
            if let Some(s) = (0..x.size(n))
                .find(|&s| g.degeneracy(n - 1, i, t.at(n, s)) != t.at(n + 1, x.degeneracy(n, i + 1, s)))
            {
                report.push("twisting si", format!("s{i} at level-{n} simplex {s}"));
            }
        }
    }
    for n in 0..top {
        if let Some(s) = (0..x.size(n)).find(|&s| t.at(n + 1, x.degeneracy(n, 0, s)) != g.unit(n)) {
            report.push("twisting s0", format!("level-{n} simplex {s}"));
        }
    }
    report
}

/// The twisted Cartesian product `P(τ) = G ×_τ X`, `(g, x)` stored at
/// `g·|Xₙ| + x`.
#[derive(Clone, Debug)]
pub struct TwistedProduct {
    pub set: SimplicialSet,
    pub twisting: Twisting,
}

impl TwistedProduct {
    pub fn encode(&self, n: usize, g: usize, x: usize) -> usize {
        g * self.twisting.base.size(n) + x
    }

    pub fn decode(&self, n: usize, p: usize) -> (usize, usize) {
        let m = self.twisting.base.size(n);
        (p / m, p % m)
    }

    /// The canonical pseudo-cross section `σ(x) = (eₙ, x)`.
    pub fn section(&self, n: usize, x: usize) -> usize {
        self.encode(n, self.twisting.group.unit(n), x)
    }

    /// `σ̄(g, x) = g`.
    pub fn sigma_bar(&self, n: usize, p: usize) -> usize {
        self.decode(n, p).0
    }

    /// Checks simplicial identities, that `π(g, x) = x` and the left
    /// `G`-action are simplicial, and `∂₀σ̄(p) = σ̄(∂₀p)·τ(x)⁻¹`.
    pub fn check(&self) -> ValidationReport {
        let mut report = validate_simplicial(&self.set);
        let (x, g, t) = (&self.twisting.base, &self.twisting.group, &self.twisting);
        for n in 1..=x.truncation() {
            for p in 0..self.set.size(n) {
                let (gv, xv) = self.decode(n, p);
                for i in 0..=n {
                    let (_, xf) = self.decode(n - 1, self.set.face(n, i, p));
                    if xf != x.face(n, i, xv) {
                        report.push("projection simplicial", format!("∂{i} at level {n}"));
                    }
                }
                let lhs = g.face(n, 0, gv);
                let below = g.level(n - 1);
                let rhs = below.mul(self.sigma_bar(n - 1, self.set.face(n, 0, p)), below.inv(t.at(n, xv)));
                if lhs != rhs {
                    report.push("section identity", format!("level {n}, simplex {p}"));
                }
                for h in g.level(n).elements() {
                    let moved = self.encode(n, g.level(n).mul(h, gv), xv);
                    for i in 0..=n {
                        let (gf, xf) = self.decode(n - 1, self.set.face(n, i, p));
                        let expected = self.encode(n - 1, g.level(n - 1).mul(g.face(n, i, h), gf), xf);
                        if self.set.face(n, i, moved) != expected {
                            report.push("principal action simplicial", format!("∂{i} at level {n}"));
                        }
                    }
                }
            }
        }
        report.violations.dedup();
        report
    }
}

/// `G ×_τ X` with `∂₀(g,x) = (∂₀g·τ(x), ∂₀x)`, `∂ᵢ(g,x) = (∂ᵢg, ∂ᵢx)` for
/// `i > 0`, `sᵢ(g,x) = (sᵢg, sᵢx)`.
pub fn build_twisted_product(t: &Twisting) -> Result<TwistedProduct> {
    let report = validate_twisting(t);
    if !report.is_valid() {
        return Err(Error::InvalidTwisting(report));
    }
    let (x, g) = (&t.base, &t.group);
    let top = x.truncation();
    if g.truncation() < top {
        return Err(Error::structural(format!(
            "twisted product on a level-{top} base needs the group through level {top}"
        )));
    }
    let sizes: Vec<usize> = (0..=top).map(|n| g.level(n).order() * x.size(n)).collect();
    let mut faces: Vec<Vec<MapTable>> = vec![Vec::new()];
    for n in 1..=top {
        let (mx, mx_below) = (x.size(n), x.size(n - 1));
        let lvl = (0..=n)
            .map(|i| {
                (0..sizes[n])
                    .map(|p| {
                        let (gv, xv) = (p / mx, p % mx);
                        let gf = if i == 0 {
                            g.level(n - 1).mul(g.face(n, 0, gv), t.at(n, xv))
                        } else {
                            g.face(n, i, gv)
                        };
                        gf * mx_below + x.face(n, i, xv)
                    })
                    .collect::<MapTable>()
            })
            .collect();
        faces.push(lvl);
    }
    let degeneracies = (0..top)
        .map(|n| {
            let (mx, mx_above) = (x.size(n), x.size(n + 1));
            (0..=n)
                .map(|j| {
                    (0..sizes[n])
                        .map(|p| g.degeneracy(n, j, p / mx) * mx_above + x.degeneracy(n, j, p % mx))
                        .collect::<MapTable>()
                })
                .collect()
        })
        .collect();
    let set = SimplicialSet::new(format!("{}x_t{}", g.name(), x.name()), sizes, faces, degeneracies)?;
    Ok(TwistedProduct {
        set,
        twisting: t.clone(),
    })
}

/// Every twisting `X → G` in canonical order.
pub fn enumerate_twistings(x: &SimplicialSet, g: &SimplicialGroup, opts: &SearchOptions) -> Result<Vec<Twisting>> {
    let top = x.truncation();
    if g.truncation() + 1 < top {
        return Err(Error::structural("group truncation too small for the base"));
    }
    let mut problem = Problem::new();
    let mut vars: Vec<Vec<usize>> = vec![Vec::new()];
    for n in 1..=top {
        vars.push((0..x.size(n)).map(|_| problem.add_full_var(g.level(n - 1).order())).collect());
    }
    for n in 2..=top {
        for i in 1..n {
            let table = Table::Map(g.underlying().face_table(n - 1, i).clone());
            for s in 0..x.size(n) {
                problem.add_functional(
                    vars[n][s],
                    table.clone(),
                    vars[n - 1][x.face(n, i + 1, s)],
                    Table::Identity,
                    g.level(n - 2).order(),
                );
            }
        }
        let below = Arc::new(g.level(n - 2).clone());
        let face0: MapTable = g.underlying().face_table(n - 1, 0).clone();
        for s in 0..x.size(n) {
            let (a, b, c) = (vars[n][s], vars[n - 1][x.face(n, 1, s)], vars[n - 1][x.face(n, 0, s)]);
            let (below, face0) = (below.clone(), face0.clone());
            problem.add_check(vec![a, b, c], move |v| face0[v[0]] == below.mul(v[1], below.inv(v[2])));
        }
    }
    for n in 1..top {
        for i in 0..n {
            let table = Table::Map(g.underlying().degeneracy_table(n - 1, i).clone());
            for s in 0..x.size(n) {
                problem.add_functional(
                    vars[n][s],
                    table.clone(),
                    vars[n + 1][x.degeneracy(n, i + 1, s)],
                    Table::Identity,
                    g.level(n).order(),
                );
            }
        }
    }
    for n in 0..top {
        for s in 0..x.size(n) {
            problem.fix(vars[n + 1][x.degeneracy(n, 0, s)], g.unit(n));
        }
    }
    let sols = problem.solve_all(opts)?;
    Ok(sols
        .solutions
        .into_iter()
        .map(|sol| {
            let values = vars.iter().map(|lvl| lvl.iter().map(|&v| sol[v]).collect()).collect();
            Twisting::from_parts(x.clone(), g.clone(), values)
        })
        .collect())
}

/// A twisting equivalence `ψ: Xₙ → Gₙ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceWitness {
    pub levels: Vec<Vec<usize>>,
}

/// Checks that `ψ` commutes with `∂ᵢ` (`i > 0`) and all `sᵢ`, and that
/// `∂₀ψ(x)·τ'(x) = τ(x)·ψ(∂₀x)`, where `τ = t1` and `τ' = t2`.
pub fn check_equivalence(t1: &Twisting, t2: &Twisting, psi: &EquivalenceWitness) -> ValidationReport {
    let (x, g) = (&t1.base, &t1.group);
    let mut report = ValidationReport::new();
    for n in 1..=x.truncation() {
        for s in 0..x.size(n) {
            let p = psi.levels[n][s];
            for i in 1..=n {
                if g.face(n, i, p) != psi.levels[n - 1][x.face(n, i, s)] {
                    report.push("ψ commutes with ∂i", format!("∂{i} at level-{n} simplex {s}"));
                }
            }
            let gg = g.level(n - 1);
            if gg.mul(g.face(n, 0, p), t2.at(n, s)) != gg.mul(t1.at(n, s), psi.levels[n - 1][x.face(n, 0, s)]) {
                report.push("ψ intertwines twistings", format!("level-{n} simplex {s}"));
            }
        }
    }
    for n in 0..x.truncation() {
        for j in 0..=n {
            if let Some(s) = (0..x.size(n))
                .find(|&s| g.degeneracy(n, j, psi.levels[n][s]) != psi.levels[n + 1][x.degeneracy(n, j, s)])
            {
                report.push("ψ commutes with si", format!("s{j} at level-{n} simplex {s}"));
            }
        }
    }
    report.violations.dedup();
    report
}

/// Pointwise inverse: witnesses `τ' ~ τ` from `τ ~ τ'`.
pub fn witness_inverse(g: &SimplicialGroup, psi: &EquivalenceWitness) -> EquivalenceWitness {
    EquivalenceWitness {
        levels: psi
            .levels
            .iter()
            .enumerate()
            .map(|(n, lvl)| lvl.iter().map(|&p| g.level(n).inv(p)).collect())
            .collect(),
    }
}

/// Pointwise product: from `τ ~ τ'` via `ψ` and `τ' ~ τ''` via `φ`,
/// `ψ·φ` witnesses `τ ~ τ''`.
pub fn witness_compose(g: &SimplicialGroup, psi: &EquivalenceWitness, phi: &EquivalenceWitness) -> EquivalenceWitness {
    EquivalenceWitness {
        levels: psi
            .levels
            .iter()
            .zip(&phi.levels)
            .enumerate()
            .map(|(n, (a, b))| a.iter().zip(b).map(|(&p, &q)| g.level(n).mul(p, q)).collect())
            .collect(),
    }
}

/// A witness `ψ` that `t1 ~ t2`, or `None` after exhausting the search.
pub fn twistings_equivalent(t1: &Twisting, t2: &Twisting, budget: u64) -> Result<Option<EquivalenceWitness>> {
    let (x, g) = (&t1.base, &t1.group);
    let top = x.truncation();
    if t2.base.sizes() != x.sizes() || g.truncation() < top {
        return Err(Error::structural("twistings must share base and the group must reach the base truncation"));
    }
    let mut problem = Problem::new();
    let vars: Vec<Vec<usize>> = (0..=top)
        .map(|n| (0..x.size(n)).map(|_| problem.add_full_var(g.level(n).order())).collect())
        .collect();
    for n in 1..=top {
        for i in 1..=n {
            let table = Table::Map(g.underlying().face_table(n, i).clone());
            for s in 0..x.size(n) {
                problem.add_functional(
                    vars[n][s],
                    table.clone(),
                    vars[n - 1][x.face(n, i, s)],
                    Table::Identity,
                    g.level(n - 1).order(),
                );
            }
        }
        let gg = g.level(n - 1);
        for s in 0..x.size(n) {
            let lhs: MapTable = g.level(n).elements().map(|p| gg.mul(g.face(n, 0, p), t2.at(n, s))).collect();
            let rhs: MapTable = gg.elements().map(|q| gg.mul(t1.at(n, s), q)).collect();
            problem.add_functional(vars[n][s], Table::Map(lhs), vars[n - 1][x.face(n, 0, s)], Table::Map(rhs), gg.order());
        }
    }
    for n in 0..top {
        for j in 0..=n {
            let table = Table::Map(g.underlying().degeneracy_table(n, j).clone());
            for s in 0..x.size(n) {
                problem.add_functional(
                    vars[n][s],
                    table.clone(),
                    vars[n + 1][x.degeneracy(n, j, s)],
                    Table::Identity,
                    g.level(n + 1).order(),
                );
            }
        }
    }
    let Some(sol) = problem.solve_first(budget)? else {
        return Ok(None);
    };
    let psi = EquivalenceWitness {
        levels: vars.iter().map(|lvl| lvl.iter().map(|&v| sol[v]).collect()).collect(),
    };
    let report = check_equivalence(t1, t2, &psi);
    if !report.is_valid() {
        return Err(Error::Transcription(format!("equivalence witness fails re-validation: {report}")));
    }
    Ok(Some(psi))
}
