//! Integer Smith normal form and the Čech cohomology of a cover with
//! coefficients in a finite abelian group.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingroup::{abelian_invariants, FiniteGroup};
use crate::simplicial::CoverComplex;

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// The `min(rows, cols)` diagonal entries, nonnegative.
    pub diagonal: Vec<i128>,
    pub left: Vec<Vec<i128>>,
    pub right: Vec<Vec<i128>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&s| s != 0).count()
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// Smith normal form of a `rows × cols` integer matrix.
pub fn smith_normal_form(matrix: &[Vec<i64>], rows: usize, cols: usize) -> SmithForm {
    let mut m: Vec<Vec<i128>> = (0..rows)
        .map(|i| (0..cols).map(|j| i128::from(matrix[i][j])).collect())
        .collect();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| (m[i][j].abs(), i, j));
            let Some((pi, pj)) = pivot else {
                break;
            };
            m.swap(t, pi);
            left.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in right.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in 0..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    for j in 0..rows {
                        left[i][j] -= q * left[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for i in 0..rows {
                        m[i][j] -= q * m[i][t];
                    }
                    for i in 0..cols {
                        right[i][j] -= q * right[i][t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match offender {
                Some(i) => {
                    for j in 0..cols {
                        m[t][j] += m[i][j];
                    }
                    for j in 0..rows {
                        left[t][j] += left[i][j];
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                left[t][j] = -left[t][j];
            }
        }
    }
    SmithForm {
        rows,
        cols,
        diagonal: (0..steps).map(|t| m[t][t]).collect(),
        left,
        right,
    }
}

/// Matrix of `δ: Cᵖ → Cᵖ⁺¹` on increasing tuples, `(δf)(σ) = Σᵢ (−1)ⁱ f(∂ᵢσ)`.
pub fn coboundary_matrix(cover: &CoverComplex, p: usize) -> (Vec<Vec<i64>>, usize, usize) {
    let lower = cover.tuples(p);
    let upper = cover.tuples(p + 1);
    let mut m = vec![vec![0i64; lower.len()]; upper.len()];
    for (r, sigma) in upper.iter().enumerate() {
        for i in 0..sigma.len() {
            let mut face = sigma.clone();
            face.remove(i);
            let c = lower.binary_search(&face).expect("faces of a simplex are simplices");
            m[r][c] += if i % 2 == 0 { 1 } else { -1 };
        }
    }
    (m, upper.len(), lower.len())
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A finite abelian group by its invariant factors `n₁ | n₂ | …`, all > 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyGroup {
    pub invariants: Vec<u64>,
    pub order: u128,
}

impl CohomologyGroup {
    /// Normalizes any list of cyclic orders to invariant factors.
    pub fn from_cyclic(orders: &[u64]) -> Self {
        let mut primes: Vec<(u64, Vec<u64>)> = Vec::new();
        for &n in orders {
            let mut rest = n;
            let mut p = 2;
            while rest > 1 {
                if rest % p == 0 {
                    let mut q = 1;
                    while rest % p == 0 {
                        rest /= p;
                        q *= p;
                    }
                    match primes.iter_mut().find(|(x, _)| *x == p) {
                        Some((_, powers)) => powers.push(q),
                        None => primes.push((p, vec![q])),
                    }
                }
                p += 1;
            }
        }
        let width = primes.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        let mut invariants = vec![1u64; width];
        for (_, powers) in &mut primes {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, &q) in powers.iter().enumerate() {
                invariants[width - 1 - i] *= q;
            }
        }
        let order = invariants.iter().map(|&x| u128::from(x)).product();
        Self { invariants, order }
    }
}

/// Čech cohomology of a cover in one degree, computed two ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub degree: usize,
    /// Universal coefficients over integral homology from Smith forms.
    pub group: CohomologyGroup,
    /// `|ker δ| / |im δ|` counted directly with coefficients.
    pub direct_order: u128,
}

impl OracleResult {
    pub fn agrees(&self) -> bool {
        self.group.order == self.direct_order
    }
}

/// Number of solutions of `D·y ≡ 0 (mod n)` for a Smith form.
fn kernel_size_mod(form: &SmithForm, n: u128) -> u128 {
    let diag: u128 = form.diagonal.iter().map(|&s| gcd(s.unsigned_abs(), n)).product();
    diag * n.pow((form.cols - form.diagonal.len()) as u32)
}

/// `Hᵖ(cover; A)` for a finite abelian `A`, `p ≥ 0`.
pub fn abelian_oracle(cover: &CoverComplex, coefficients: &FiniteGroup, degree: usize) -> Result<OracleResult> {
    if !coefficients.is_abelian() {
        return Err(Error::NotAbelian(coefficients.name().to_string()));
    }
    let factors = abelian_invariants(coefficients)?;
    let forms: Vec<Option<SmithForm>> = (0..=degree)
        .map(|p| {
            let (m, r, c) = coboundary_matrix(cover, p);
            (r > 0 && c > 0).then(|| smith_normal_form(&m, r, c))
        })
        .collect();
    let dim = |p: usize| cover.tuples(p).len();
    let rank = |p: usize| forms[p].as_ref().map_or(0, SmithForm::rank);
    let torsion = |p: usize| -> Vec<u128> {
        forms[p]
            .as_ref()
            .map(|f| f.diagonal.iter().map(|s| s.unsigned_abs()).filter(|&s| s > 1).collect())
            .unwrap_or_default()
    };

    // Hq = Z^{dim Cq − rank ∂q − rank ∂q+1} ⊕ torsion of δq's form, with ∂q = δq−1ᵀ.
    let betti = |q: usize| dim(q) - if q == 0 { 0 } else { rank(q - 1) } - rank(q);
    let mut cyclic: Vec<u64> = Vec::new();
    for &n in &factors {
        let n = u128::from(n);
        for _ in 0..betti(degree) {
            cyclic.push(n as u64);
        }
        // Hom(torsion of H_degree, Z_n), then Ext(torsion of H_degree−1, Z_n).
        let hom_torsion = torsion(degree);
        let ext_torsion = if degree == 0 { Vec::new() } else { torsion(degree - 1) };
        for t in hom_torsion.into_iter().chain(ext_torsion) {
            cyclic.push(gcd(t, n) as u64);
        }
    }
    let group = CohomologyGroup::from_cyclic(&cyclic);

    let mut direct_order = 1u128;
    for &n in &factors {
        let n = u128::from(n);
        let cocycles = match &forms[degree] {
            Some(f) => kernel_size_mod(f, n),
            None => n.pow(dim(degree) as u32),
        };
        let boundaries = if degree == 0 {
            1
        } else {
            match &forms[degree - 1] {
                Some(f) => n.pow(dim(degree - 1) as u32) / kernel_size_mod(f, n),
                None => 1,
            }
        };
        direct_order *= cocycles / boundaries;
    }
    Ok(OracleResult {
        degree,
        group,
        direct_order,
    })
}

/// Explicit cyclic coordinates on a finite abelian group.
#[derive(Clone, Debug)]
pub struct AbelianBasis {
    pub generators: Vec<usize>,
    pub orders: Vec<u64>,
    coordinates: Vec<Vec<u64>>,
}

impl AbelianBasis {
    /// Finds generators of orders matching the invariant factors such that
    /// every element is a unique combination of them.
    pub fn new(group: &FiniteGroup) -> Result<Self> {
        if !group.is_abelian() {
            return Err(Error::NotAbelian(group.name().to_string()));
        }
        let mut orders = abelian_invariants(group)?;
        orders.sort_unstable_by(|a, b| b.cmp(a));
        let mut chosen = Vec::new();
        if !Self::search(group, &orders, &mut chosen) {
            return Err(Error::Transcription(format!("no cyclic basis found for {}", group.name())));
        }
        let mut coordinates = vec![Vec::new(); group.order()];
        for combo in Self::combinations(&orders) {
            let x = Self::evaluate(group, &chosen, &combo);
            coordinates[x] = combo;
        }
        Ok(Self {
            generators: chosen,
            orders,
            coordinates,
        })
    }

    fn combinations(orders: &[u64]) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &n in orders {
            out = out
                .into_iter()
                .flat_map(|c| {
                    (0..n).map(move |k| {
                        let mut c = c.clone();
                        c.push(k);
                        c
                    })
                })
                .collect();
        }
        out
    }

    fn evaluate(group: &FiniteGroup, gens: &[usize], combo: &[u64]) -> usize {
        group.product(gens.iter().zip(combo).map(|(&g, &k)| group.power(g, k as usize)))
    }

    fn search(group: &FiniteGroup, orders: &[u64], chosen: &mut Vec<usize>) -> bool {
        let j = chosen.len();
        if j == orders.len() {
            return true;
        }
        for g in group.elements() {
            if group.element_order(g) as u64 != orders[j] {
                continue;
            }
            chosen.push(g);
            let prefix = &orders[..=j];
            let mut seen = vec![false; group.order()];
            let injective = Self::combinations(prefix).iter().all(|c| {
                let x = Self::evaluate(group, chosen, c);
                !std::mem::replace(&mut seen[x], true)
            });
            if injective && Self::search(group, orders, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    pub fn coordinates(&self, x: usize) -> &[u64] {
        &self.coordinates[x]
    }
}

/// Whether an `A`-valued `p`-cochain (one element per increasing
/// `(p+1)`-tuple) is `δ` of some `(p−1)`-cochain.
pub fn is_coboundary(cover: &CoverComplex, basis: &AbelianBasis, degree: usize, cochain: &[usize]) -> bool {
    if degree == 0 {
        return cochain.iter().all(|&x| basis.coordinates(x).iter().all(|&c| c == 0));
    }
    let (m, r, c) = coboundary_matrix(cover, degree - 1);
    if r == 0 {
        return true;
    }
    if c == 0 {
        return cochain.iter().all(|&x| basis.coordinates(x).iter().all(|&c| c == 0));
    }
    let form = smith_normal_form(&m, r, c);
    basis.orders.iter().enumerate().all(|(j, &n)| {
        let n = i128::from(n);
        let b: Vec<i128> = cochain.iter().map(|&x| i128::from(basis.coordinates(x)[j])).collect();
        (0..r).all(|i| {
            let ub = form.left[i].iter().zip(&b).map(|(u, x)| u * x).sum::<i128>().rem_euclid(n);
            match form.diagonal.get(i) {
                Some(&s) => ub % (gcd(s.unsigned_abs(), n as u128) as i128) == 0,
                None => ub == 0,
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn multiply(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn smith_form_reconstructs() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let f = smith_normal_form(&a, 3, 3);
        assert_eq!(f.diagonal, vec![2, 6, 12]);
        let a128: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        let d = multiply(&multiply(&f.left, &a128), &f.right);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { f.diagonal[i] } else { 0 });
            }
        }
    }

    #[test]
    fn invariant_factor_normalization() {
        assert_eq!(CohomologyGroup::from_cyclic(&[2, 3]).invariants, vec![6]);
        assert_eq!(CohomologyGroup::from_cyclic(&[2, 4, 1]).invariants, vec![2, 4]);
        assert_eq!(CohomologyGroup::from_cyclic(&[]).order, 1);
    }
}
