use crate::error::{Error, Result};
use crate::fingroup::{CrossedModule, FiniteGroup};
use crate::simplicial::{moore_homotopy, MapTable, SimplicialGroup};

/// Largest level order for which a nerve level is tabulated.
pub const MAX_LEVEL_ORDER: usize = 4096;

/// Codec for level-`n` simplices `(d; h₁, …, hₙ)` of `N𝒞_(H→D)`:
/// index `d + |D|·(h₁ + |H|·(h₂ + …))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NerveCodec {
    pub h_order: usize,
    pub d_order: usize,
}

impl NerveCodec {
    pub fn size(&self, n: usize) -> usize {
        self.d_order * self.h_order.pow(n as u32)
    }

    pub fn decode(&self, n: usize, code: usize) -> (usize, Vec<usize>) {
        let d = code % self.d_order;
        let mut rest = code / self.d_order;
        let mut hs = Vec::with_capacity(n);
        for _ in 0..n {
            hs.push(rest % self.h_order);
            rest /= self.h_order;
        }
        (d, hs)
    }

    pub fn encode(&self, d: usize, hs: &[usize]) -> usize {
        let mut code = 0;
        for &h in hs.iter().rev() {
            code = code * self.h_order + h;
        }
        code * self.d_order + d
    }
}

/// The nerve of the action groupoid of `(H → D)`: objects `D`, an arrow
/// `h: d → α(h)d`, with the level-wise group law of horizontal composition.
#[derive(Clone, Debug)]
pub struct NerveGroup {
    xm: CrossedModule,
    codec: NerveCodec,
    group: SimplicialGroup,
}

impl NerveGroup {
    pub fn crossed_module(&self) -> &CrossedModule {
        &self.xm
    }

    pub fn codec(&self) -> NerveCodec {
        self.codec
    }

    pub fn group(&self) -> &SimplicialGroup {
        &self.group
    }

    pub fn into_group(self) -> SimplicialGroup {
        self.group
    }

    pub fn truncation(&self) -> usize {
        self.group.truncation()
    }
}

/// Objects `x₀ = d`, `xₖ = α(hₖ)·xₖ₋₁` of a chain.
pub fn chain_objects(xm: &CrossedModule, d: usize, hs: &[usize]) -> Vec<usize> {
    let mut objects = Vec::with_capacity(hs.len() + 1);
    objects.push(d);
    for &h in hs {
        let last = *objects.last().expect("nonempty");
        objects.push(xm.d().mul(xm.alpha(h), last));
    }
    objects
}

/// `(d; h)·(d'; h') = (dd'; hₖ·^{xₖ₋₁}h'ₖ)` with `xₖ` the objects of the left chain.
fn chain_product(xm: &CrossedModule, a: (usize, &[usize]), b: (usize, &[usize])) -> (usize, Vec<usize>) {
    let objects = chain_objects(xm, a.0, a.1);
    let hs = a
        .1
        .iter()
        .zip(b.1)
        .enumerate()
        .map(|(k, (&h, &h2))| xm.h().mul(h, xm.act(objects[k], h2)))
        .collect();
    (xm.d().mul(a.0, b.0), hs)
}

/// `∂ᵢ` of a chain: `∂₀` moves the anchor along `h₁`, `∂ₙ` drops `hₙ`, and
/// interior faces compose `hᵢ₊₁hᵢ`.
pub fn chain_face(xm: &CrossedModule, d: usize, hs: &[usize], i: usize) -> (usize, Vec<usize>) {
    let n = hs.len();
    if i == 0 {
        return (xm.d().mul(xm.alpha(hs[0]), d), hs[1..].to_vec());
    }
    if i == n {
        return (d, hs[..n - 1].to_vec());
    }
    let mut out = Vec::with_capacity(n - 1);
    out.extend_from_slice(&hs[..i - 1]);
    out.push(xm.h().mul(hs[i], hs[i - 1]));
    out.extend_from_slice(&hs[i + 1..]);
    (d, out)
}

/// `sⱼ` inserts an identity arrow after object `xⱼ`.
pub fn chain_degeneracy(xm: &CrossedModule, d: usize, hs: &[usize], j: usize) -> (usize, Vec<usize>) {
    let mut out = hs.to_vec();
    out.insert(j, xm.h().identity());
    (d, out)
}

/// `N𝒞_(H→D)` through level `truncation`.
///
/// Level tables are dense, so every level must have at most
/// [`MAX_LEVEL_ORDER`] elements.
pub fn build_nerve(xm: &CrossedModule, truncation: usize) -> Result<NerveGroup> {
    let codec = NerveCodec {
        h_order: xm.h().order(),
        d_order: xm.d().order(),
    };
    let top_order = (xm.d().order() as u128) * (xm.h().order() as u128).pow(truncation as u32);
    if top_order > MAX_LEVEL_ORDER as u128 {
        return Err(Error::BadParameter(format!(
            "nerve level {truncation} of {} has {top_order} elements, above the limit {MAX_LEVEL_ORDER}",
            xm.name()
        )));
    }
    let mut levels = Vec::with_capacity(truncation + 1);
    for n in 0..=truncation {
        let size = codec.size(n);
        let decoded: Vec<(usize, Vec<usize>)> = (0..size).map(|c| codec.decode(n, c)).collect();
        levels.push(FiniteGroup::from_fn(format!("NC{n}"), size, |a, b| {
            let (d, hs) = chain_product(xm, (decoded[a].0, &decoded[a].1), (decoded[b].0, &decoded[b].1));
            codec.encode(d, &hs)
        }));
    }
    let faces = (0..=truncation)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|i| {
                    (0..codec.size(n))
                        .map(|c| {
                            let (d, hs) = codec.decode(n, c);
                            let (d2, hs2) = chain_face(xm, d, &hs, i);
                            codec.encode(d2, &hs2)
                        })
                        .collect::<MapTable>()
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..truncation)
        .map(|n| {
            (0..=n)
                .map(|j| {
                    (0..codec.size(n))
                        .map(|c| {
                            let (d, hs) = codec.decode(n, c);
                            let (d2, hs2) = chain_degeneracy(xm, d, &hs, j);
                            codec.encode(d2, &hs2)
                        })
                        .collect::<MapTable>()
                })
                .collect()
        })
        .collect();
    let group = SimplicialGroup::new(format!("N{}", xm.name()), levels, faces, degeneracies)?;
    Ok(NerveGroup {
        xm: xm.clone(),
        codec,
        group,
    })
}

/// `(π₀, π₁)` of `N𝒞` from its Moore complex. Through the comparison with
/// `W̄N𝒞` these are also `π₁` and `π₂` of the Duskin nerve.
pub fn nerve_homotopy(xm: &CrossedModule) -> Result<(FiniteGroup, FiniteGroup)> {
    let nerve = build_nerve(xm, 2)?;
    Ok((
        moore_homotopy(nerve.group(), 0)?,
        moore_homotopy(nerve.group(), 1)?,
    ))
}
