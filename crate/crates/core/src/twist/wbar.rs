use crate::fingroup::FiniteGroup;
use crate::simplicial::{MapTable, SimplicialGroup, SimplicialSet};
use crate::twist::Twisting;

/// Mixed-radix codec for `W̄Gₙ = Gₙ₋₁ × … × G₀`, with `g₀` least significant.
#[derive(Clone, Debug)]
pub struct WbarCodec {
    /// `orders[k] = |G_k|`.
    orders: Vec<usize>,
}

impl WbarCodec {
    pub fn new(g: &SimplicialGroup) -> Self {
        Self {
            orders: (0..=g.truncation()).map(|k| g.level(k).order()).collect(),
        }
    }

    /// `|W̄Gₙ|`.
    pub fn size(&self, n: usize) -> usize {
        self.orders[..n].iter().product()
    }

    /// Components `[g₀, g₁, …, gₙ₋₁]` of a level-`n` simplex.
    pub fn decode(&self, n: usize, mut code: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(code % self.orders[k]);
            code /= self.orders[k];
        }
        out
    }

    pub fn encode(&self, comps: &[usize]) -> usize {
        let mut code = 0;
        for k in (0..comps.len()).rev() {
            code = code * self.orders[k] + comps[k];
        }
        code
    }
}

/// `W̄G` truncated one level above `G`, the canonical twisting
/// `τ(gₙ₋₁, …, g₀) = gₙ₋₁`, and the codec for its simplices.
///
/// Faces and degeneracies on `(gₙ₋₁, …, g₀)`:
/// * `∂₀` drops `gₙ₋₁`;
/// * `∂ᵢ₊₁ = (∂ᵢgₙ₋₁, …, ∂₁gₙ₋ᵢ, ∂₀gₙ₋₁₋ᵢ·gₙ₋₂₋ᵢ, gₙ₋₃₋ᵢ, …, g₀)`, the
///   product term dropped for the last face;
/// * `s₀` prepends `eₙ`;
/// * `sᵢ₊₁ = (sᵢgₙ₋₁, …, s₀gₙ₋₁₋ᵢ, eₙ₋₁₋ᵢ, gₙ₋₂₋ᵢ, …, g₀)`.
pub fn build_wbar(g: &SimplicialGroup) -> (SimplicialSet, Twisting, WbarCodec) {
    let codec = WbarCodec::new(g);
    let top = g.truncation() + 1;
    let sizes: Vec<usize> = (0..=top).map(|n| codec.size(n)).collect();

    let mut faces: Vec<Vec<MapTable>> = vec![Vec::new()];
    for n in 1..=top {
        let mut lvl: Vec<Vec<usize>> = vec![Vec::with_capacity(sizes[n]); n + 1];
        for code in 0..sizes[n] {
            let c = codec.decode(n, code);
            for (i, table) in lvl.iter_mut().enumerate() {
                table.push(codec.encode(&wbar_face(g, &c, i)));
            }
        }
        faces.push(lvl.into_iter().map(MapTable::from).collect());
    }
    let mut degeneracies: Vec<Vec<MapTable>> = Vec::new();
    for n in 0..top {
        let mut lvl: Vec<Vec<usize>> = vec![Vec::with_capacity(sizes[n]); n + 1];
        for code in 0..sizes[n] {
            let c = codec.decode(n, code);
            for (j, table) in lvl.iter_mut().enumerate() {
                table.push(codec.encode(&wbar_degeneracy(g, &c, j)));
            }
        }
        degeneracies.push(lvl.into_iter().map(MapTable::from).collect());
    }
    let set = SimplicialSet::new(format!("Wbar({})", g.name()), sizes.clone(), faces, degeneracies)
        .expect("W̄G tables have consistent shape")
        .mark_kan();
    let values = (0..=top)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..sizes[n]).map(|code| codec.decode(n, code)[n - 1]).collect()
        })
        .collect();
    let tau = Twisting::from_parts(set.clone(), g.clone(), values);
    (set, tau, codec)
}

/// `∂ᵢ` on components `c = [g₀, …, gₙ₋₁]` of a level-`n` simplex.
fn wbar_face(g: &SimplicialGroup, c: &[usize], i: usize) -> Vec<usize> {
    let n = c.len();
    if n == 1 {
        return Vec::new();
    }
    let mut out = vec![0; n - 1];
    if i == 0 {
        out.copy_from_slice(&c[..n - 1]);
        return out;
    }
    // ∂_{i} with i = k + 1: component of level (n-1-j) for j < k is ∂_{k-j} g_{n-1-j}.
    let k = i - 1;
    for j in 0..k.min(n - 1) {
        let lvl = n - 1 - j;
        out[lvl - 1] = g.face(lvl, k - j, c[lvl]);
    }
    if k < n - 1 {
        let lvl = n - 1 - k;
        out[lvl - 1] = g.level(lvl - 1).mul(g.face(lvl, 0, c[lvl]), c[lvl - 1]);
        out[..lvl - 1].copy_from_slice(&c[..lvl - 1]);
    }
    out
}

/// `sⱼ` on components of a level-`n` simplex.
fn wbar_degeneracy(g: &SimplicialGroup, c: &[usize], j: usize) -> Vec<usize> {
    let n = c.len();
    let mut out = vec![0; n + 1];
    if j == 0 {
        out[..n].copy_from_slice(c);
        out[n] = g.unit(n);
        return out;
    }
    let k = j - 1;
    // level n - t for t = 0..=k gets s_{k-t} g_{n-1-t}
    for t in 0..=k {
        out[n - t] = g.degeneracy(n - 1 - t, k - t, c[n - 1 - t]);
    }
    let lvl = n - 1 - k;
    out[lvl] = g.unit(lvl);
    out[..lvl].copy_from_slice(&c[..lvl]);
    out
}

/// `WG = G ×_τ W̄G` with the canonical twisting, truncated at `G`'s level.
pub fn build_wg(g: &SimplicialGroup) -> crate::twist::TwistedProduct {
    let (_, tau, _) = build_wbar(g);
    let tau = tau.truncate(g.truncation()).expect("W̄G reaches G's truncation");
    crate::twist::build_twisted_product(&tau).expect("canonical twisting is valid")
}

/// `W̄K` for a constant group is the bar construction: `Kⁿ` at level `n`.
pub fn bar_construction(k: &FiniteGroup, truncation: usize) -> SimplicialSet {
    build_wbar(&SimplicialGroup::constant(k, truncation - 1)).0
}
