use crate::error::{Error, Result};
use crate::fingroup::CrossedModule;
use crate::report::ValidationReport;
use crate::simplicial::{MapTable, SimplicialSet};

/// Highest level of the Duskin nerve that is tabulated.
pub const MAX_DUSKIN_LEVEL: usize = 4;

const VERTS: usize = MAX_DUSKIN_LEVEL + 2;

/// All edge labels `dᵢⱼ` and 2-cell labels `hᵢⱼₖ` of one simplex, for
/// every ordered pair and triple of its vertices.
///
/// Repeated vertices carry identities, which is how degeneracies act.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DuskinSimplex {
    pub level: usize,
    edges: [[usize; VERTS]; VERTS],
    cells: [[[usize; VERTS]; VERTS]; VERTS],
}

impl DuskinSimplex {
    /// `dᵢⱼ` for `i ≤ j`.
    pub fn edge(&self, i: usize, j: usize) -> usize {
        self.edges[i][j]
    }

    /// `hᵢⱼₖ` for `i ≤ j ≤ k`.
    pub fn cell(&self, i: usize, j: usize, k: usize) -> usize {
        self.cells[i][j][k]
    }
}

/// Codec for `Ñₙ` by the labels at vertex 0: `d₀ⱼ` for `j = 1..n`, then
/// `h₀ⱼₖ` for `1 ≤ j < k ≤ n` in lexicographic order, least significant first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DuskinCodec {
    pub h_order: usize,
    pub d_order: usize,
}

impl DuskinCodec {
    /// `|Ñₙ| = |D|ⁿ·|H|^(n choose 2)`.
    pub fn size(&self, n: usize) -> usize {
        self.d_order.pow(n as u32) * self.h_order.pow((n * n.saturating_sub(1) / 2) as u32)
    }

    /// Free labels `(d₀₁, …, d₀ₙ)` and `h₀ⱼₖ` in lexicographic order.
    pub fn decode_free(&self, n: usize, mut code: usize) -> (Vec<usize>, Vec<usize>) {
        let mut ds = Vec::with_capacity(n);
        for _ in 0..n {
            ds.push(code % self.d_order);
            code /= self.d_order;
        }
        let mut hs = Vec::new();
        for _ in 0..n * n.saturating_sub(1) / 2 {
            hs.push(code % self.h_order);
            code /= self.h_order;
        }
        (ds, hs)
    }

    pub fn encode_free(&self, ds: &[usize], hs: &[usize]) -> usize {
        let mut code = 0;
        for &h in hs.iter().rev() {
            code = code * self.h_order + h;
        }
        for &d in ds.iter().rev() {
            code = code * self.d_order + d;
        }
        code
    }

    /// Solves the compatibility conditions for every label from the free ones:
    /// `dᵢⱼ = d₀ᵢ⁻¹·α(h₀ᵢⱼ)·d₀ⱼ` and `hᵢⱼₖ = ^{d₀ᵢ⁻¹}(h₀ᵢⱼ·h₀ⱼₖ·h₀ᵢₖ⁻¹)`.
    pub fn expand(&self, xm: &CrossedModule, n: usize, code: usize) -> DuskinSimplex {
        let (h, d) = (xm.h(), xm.d());
        let (ds, hs) = self.decode_free(n, code);
        let mut edges = [[d.identity(); VERTS]; VERTS];
        let mut cells = [[[h.identity(); VERTS]; VERTS]; VERTS];
        for j in 1..=n {
            edges[0][j] = ds[j - 1];
        }
        let mut next = hs.iter();
        for j in 1..=n {
            for k in j + 1..=n {
                cells[0][j][k] = *next.next().expect("label count");
            }
        }
        for i in 1..=n {
            let back = d.inv(edges[0][i]);
            for j in i + 1..=n {
                edges[i][j] = d.product([back, xm.alpha(cells[0][i][j]), edges[0][j]]);
                for k in j + 1..=n {
                    let inner = h.product([cells[0][i][j], cells[0][j][k], h.inv(cells[0][i][k])]);
                    cells[i][j][k] = xm.act(back, inner);
                }
            }
        }
        DuskinSimplex { level: n, edges, cells }
    }

    /// Restricts a simplex along a monotone vertex map `vertices` and encodes it.
    fn restrict(&self, s: &DuskinSimplex, vertices: &[usize]) -> usize {
        let m = vertices.len() - 1;
        let ds: Vec<usize> = (1..=m).map(|j| s.edges[vertices[0]][vertices[j]]).collect();
        let mut hs = Vec::new();
        for j in 1..=m {
            for k in j + 1..=m {
                hs.push(s.cells[vertices[0]][vertices[j]][vertices[k]]);
            }
        }
        self.encode_free(&ds, &hs)
    }
}

/// `Ñ𝒞_(H→D)`, the nerve of the one-object 2-category with 1-arrows `D`
/// and 2-arrows `h: d ⇒ α(h)d`.
///
/// An `n`-simplex labels edges `i→j` by `dᵢⱼ ∈ D` and triangles by
/// `hᵢⱼₖ ∈ H` subject to
/// `dᵢⱼdⱼₖ = α(hᵢⱼₖ)dᵢₖ` and `hᵢⱼₖhᵢₖₗ = ^{dᵢⱼ}hⱼₖₗ·hᵢⱼₗ`.
#[derive(Clone, Debug)]
pub struct DuskinNerve {
    xm: CrossedModule,
    codec: DuskinCodec,
    set: SimplicialSet,
}

impl DuskinNerve {
    pub fn crossed_module(&self) -> &CrossedModule {
        &self.xm
    }

    pub fn codec(&self) -> DuskinCodec {
        self.codec
    }

    pub fn set(&self) -> &SimplicialSet {
        &self.set
    }

    pub fn expand(&self, n: usize, code: usize) -> DuskinSimplex {
        self.codec.expand(&self.xm, n, code)
    }

    /// Encodes labels on vertices `0..=n`, read from the free ones.
    pub fn encode(&self, s: &DuskinSimplex) -> usize {
        self.codec.restrict(s, &(0..=s.level).collect::<Vec<_>>())
    }
}

/// `Ñ𝒞` through level `truncation ≤ 4`, marked Kan (it is the nerve of a
/// 2-groupoid).
pub fn build_duskin(xm: &CrossedModule, truncation: usize) -> Result<DuskinNerve> {
    if truncation > MAX_DUSKIN_LEVEL {
        return Err(Error::Unsupported(format!(
            "the Duskin nerve is tabulated through level {MAX_DUSKIN_LEVEL}, not {truncation}"
        )));
    }
    let codec = DuskinCodec {
        h_order: xm.h().order(),
        d_order: xm.d().order(),
    };
    let sizes: Vec<usize> = (0..=truncation).map(|n| codec.size(n)).collect();
    if sizes.iter().any(|&s| s > 1 << 22) {
        return Err(Error::BadParameter(format!(
            "Duskin nerve of {} through level {truncation} is too large ({sizes:?})",
            xm.name()
        )));
    }
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    let mut degeneracies: Vec<Vec<Vec<usize>>> = Vec::new();
    for n in 0..=truncation {
        if n > 0 {
            faces.push(vec![Vec::with_capacity(sizes[n]); n + 1]);
        }
        if n < truncation {
            degeneracies.push(vec![Vec::with_capacity(sizes[n]); n + 1]);
        }
        for code in 0..sizes[n] {
            let s = codec.expand(xm, n, code);
            if n > 0 {
                for i in 0..=n {
                    let vertices: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
                    faces[n][i].push(codec.restrict(&s, &vertices));
                }
            }
            if n < truncation {
                for j in 0..=n {
                    let vertices: Vec<usize> = (0..=n + 1).map(|v| if v <= j { v } else { v - 1 }).collect();
                    degeneracies[n][j].push(codec.restrict(&s, &vertices));
                }
            }
        }
    }
    let to_tables =
        |lvls: Vec<Vec<Vec<usize>>>| -> Vec<Vec<MapTable>> { lvls.into_iter().map(|l| l.into_iter().map(MapTable::from).collect()).collect() };
    let set = SimplicialSet::new(format!("Duskin{}", xm.name()), sizes, to_tables(faces), to_tables(degeneracies))?
        .mark_kan();
    Ok(DuskinNerve {
        xm: xm.clone(),
        codec,
        set,
    })
}

/// Checks that every tabulated simplex, expanded from its free labels,
/// satisfies both compatibility conditions on all its vertex triples and
/// quadruples.
pub fn validate_duskin_labels(nerve: &DuskinNerve) -> ValidationReport {
    let xm = &nerve.xm;
    let (h, d) = (xm.h(), xm.d());
    let mut report = ValidationReport::new();
    for n in 2..=nerve.set.truncation() {
        for code in 0..nerve.set.size(n) {
            let s = nerve.expand(n, code);
            for i in 0..=n {
                for j in i + 1..=n {
                    for k in j + 1..=n {
                        let lhs = d.mul(s.edge(i, j), s.edge(j, k));
                        let rhs = d.mul(xm.alpha(s.cell(i, j, k)), s.edge(i, k));
                        if lhs != rhs {
                            report.push("edge compatibility", format!("level {n} simplex {code}, vertices {i}{j}{k}"));
                        }
                        for l in k + 1..=n {
                            let lhs = h.mul(s.cell(i, j, k), s.cell(i, k, l));
                            let rhs = h.mul(xm.act(s.edge(i, j), s.cell(j, k, l)), s.cell(i, j, l));
                            if lhs != rhs {
                                report.push(
                                    "cell compatibility",
                                    format!("level {n} simplex {code}, vertices {i}{j}{k}{l}"),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    report
}
