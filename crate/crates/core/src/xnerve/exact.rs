use serde::Serialize;

use crate::error::Result;
use crate::fingroup::{check_hom, CrossedModule};
use crate::xnerve::nerve::{build_nerve, NerveGroup};

/// Exactness of `1 → A → B → C → 1` at one level of the nerves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelExactness {
    pub level: usize,
    /// Orders of `Aₙ`, `Bₙ`, `Cₙ`.
    pub orders: [usize; 3],
    pub homomorphisms: bool,
    pub injective: bool,
    pub image_is_kernel: bool,
    pub surjective: bool,
}

impl LevelExactness {
    pub fn is_exact(&self) -> bool {
        self.homomorphisms && self.injective && self.image_is_kernel && self.surjective
    }
}

/// One short exact sequence of crossed modules, checked on nerve levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    /// `[A, B, C]`.
    pub modules: [String; 3],
    pub levels: Vec<LevelExactness>,
}

impl SequenceReport {
    pub fn is_exact(&self) -> bool {
        self.levels.iter().all(LevelExactness::is_exact)
    }
}

/// Both sequences
/// `(H → Im α) → (H → D) → (1 → coker α)` and
/// `(ker α → 1) → (H → D) → (Im α → D)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub through_image: SequenceReport,
    pub through_kernel: SequenceReport,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.through_image.is_exact() && self.through_kernel.is_exact()
    }
}

fn check_level(
    a: &NerveGroup,
    b: &NerveGroup,
    c: &NerveGroup,
    n: usize,
    first: &[usize],
    second: &[usize],
) -> Result<LevelExactness> {
    let (ga, gb, gc) = (a.group().level(n), b.group().level(n), c.group().level(n));
    let homomorphisms = check_hom(ga, gb, first)?.is_valid() && check_hom(gb, gc, second)?.is_valid();
    let mut image: Vec<usize> = first.to_vec();
    image.sort_unstable();
    image.dedup();
    let injective = image.len() == ga.order();
    let kernel: Vec<usize> = gb.elements().filter(|&x| second[x] == gc.identity()).collect();
    let mut hit = vec![false; gc.order()];
    for &y in second {
        hit[y] = true;
    }
    Ok(LevelExactness {
        level: n,
        orders: [ga.order(), gb.order(), gc.order()],
        homomorphisms,
        injective,
        image_is_kernel: image == kernel,
        surjective: hit.iter().all(|&h| h),
    })
}

/// Level-wise exactness of the two sequences of nerve groups attached to
/// `(H → D)`, through level `truncation`.
pub fn exactness_check(xm: &CrossedModule, truncation: usize) -> Result<ExactnessReport> {
    let derived = xm.derived();
    let middle = build_nerve(xm, truncation)?;
    let mcodec = middle.codec();

    let h_to_image = build_nerve(&derived.h_to_image, truncation)?;
    let one_to_coker = build_nerve(&derived.one_to_coker, truncation)?;
    let ker_to_one = build_nerve(&derived.ker_to_one, truncation)?;
    let image_to_d = build_nerve(&derived.image_to_d, truncation)?;
    let image_emb = &derived.image.embedding;
    let kernel_emb = &derived.kernel.embedding;
    let projection = &derived.cokernel.projection;
    let mut image_index = vec![usize::MAX; xm.d().order()];
    for (i, &x) in image_emb.iter().enumerate() {
        image_index[x] = i;
    }

    let mut through_image = Vec::with_capacity(truncation + 1);
    let mut through_kernel = Vec::with_capacity(truncation + 1);
    for n in 0..=truncation {
        let first: Vec<usize> = (0..h_to_image.group().level(n).order())
            .map(|x| {
                let (d, hs) = h_to_image.codec().decode(n, x);
                mcodec.encode(image_emb[d], &hs)
            })
            .collect();
        let second: Vec<usize> = (0..middle.group().level(n).order())
            .map(|x| {
                let (d, _) = mcodec.decode(n, x);
                one_to_coker.codec().encode(projection[d], &vec![0; n])
            })
            .collect();
        through_image.push(check_level(&h_to_image, &middle, &one_to_coker, n, &first, &second)?);

        let first: Vec<usize> = (0..ker_to_one.group().level(n).order())
            .map(|x| {
                let (_, ks) = ker_to_one.codec().decode(n, x);
                let hs: Vec<usize> = ks.iter().map(|&k| kernel_emb[k]).collect();
                mcodec.encode(xm.d().identity(), &hs)
            })
            .collect();
        let second: Vec<usize> = (0..middle.group().level(n).order())
            .map(|x| {
                let (d, hs) = mcodec.decode(n, x);
                let images: Vec<usize> = hs.iter().map(|&h| image_index[xm.alpha(h)]).collect();
                image_to_d.codec().encode(d, &images)
            })
            .collect();
        through_kernel.push(check_level(&ker_to_one, &middle, &image_to_d, n, &first, &second)?);
    }
    let names = |a: &CrossedModule, c: &CrossedModule| [a.name().to_string(), xm.name().to_string(), c.name().to_string()];
    Ok(ExactnessReport {
        through_image: SequenceReport {
            modules: names(&derived.h_to_image, &derived.one_to_coker),
            levels: through_image,
        },
        through_kernel: SequenceReport {
            modules: names(&derived.ker_to_one, &derived.image_to_d),
            levels: through_kernel,
        },
    })
}
