//! Named groups and crossed modules, addressable by small expressions such
//! as `cyclic(4)`, `product(cyclic(2),symmetric(3))` or `xmod_mod(4,2)`.

use crate::error::{Error, Result};
use crate::fingroup::{CrossedModule, FiniteGroup};

/// A parsed preset: either a bare group or a crossed module.
#[derive(Clone, Debug)]
pub enum Preset {
    Group(FiniteGroup),
    Xmod(CrossedModule),
}

impl Preset {
    pub fn into_group(self) -> Result<FiniteGroup> {
        match self {
            Preset::Group(g) => Ok(g),
            Preset::Xmod(x) => Err(Error::BadParameter(format!("`{}` is a crossed module, not a group", x.name()))),
        }
    }

    pub fn into_xmod(self) -> Result<CrossedModule> {
        match self {
            Preset::Xmod(x) => Ok(x),
            Preset::Group(g) => Err(Error::BadParameter(format!("`{}` is a group, not a crossed module", g.name()))),
        }
    }
}

pub const GROUP_PRESETS: &[&str] = &[
    "trivial",
    "cyclic(n)",
    "dihedral(n)",
    "symmetric(n)",
    "alternating(n)",
    "quaternion",
    "klein",
    "product(G,K)",
];

pub const XMOD_PRESETS: &[&str] = &[
    "xmod_id(G)",
    "xmod_mod(n,m)",
    "xmod_mul(n,m,k)",
    "xmod_aut(G)",
    "xmod_unit(G)",
    "xmod_abelian(A)",
    "xmod_zero(A,G)",
    "xmod_normal(G,sub)",
];

/// Parses and builds a preset expression.
pub fn preset_library(expr: &str) -> Result<Preset> {
    let term = Parser::new(expr).parse_all()?;
    build(&term)
}

/// `Zₙ` with element `k` at index `k`.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n > 0);
    FiniteGroup::from_fn(format!("Z{n}"), n, |a, b| (a + b) % n)
}

/// `Dₙ` of order `2n`; `rⁱsʲ` is stored at `i + n·j`.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n > 0);
    FiniteGroup::from_fn(format!("D{n}"), 2 * n, |x, y| {
        let (a, b) = (x % n, x / n);
        let (c, d) = (y % n, y / n);
        let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
        rot + n * ((b + d) % 2)
    })
}

/// Permutations of `0..n` in lexicographic order, composed as `(στ)(i) = σ(τ(i))`.
pub fn symmetric_with_perms(n: usize) -> (FiniteGroup, Vec<Vec<usize>>) {
    let perms = permutations(n);
    let group = permutation_group(format!("S{n}"), &perms);
    (group, perms)
}

pub fn symmetric(n: usize) -> FiniteGroup {
    symmetric_with_perms(n).0
}

/// Even permutations of `0..n`, in lexicographic order.
pub fn alternating(n: usize) -> FiniteGroup {
    let perms: Vec<Vec<usize>> = permutations(n).into_iter().filter(|p| is_even(p)).collect();
    permutation_group(format!("A{n}"), &perms)
}

/// `Q₈ = {±1, ±i, ±j, ±k}`; index `2u + s` encodes sign `s` and unit `u ∈ {1,i,j,k}`.
pub fn quaternion() -> FiniteGroup {
    // unit products: table[u][v] = (w, sign flip)
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    FiniteGroup::from_fn("Q8", 8, |x, y| {
        let (u, s) = (x / 2, x % 2);
        let (v, t) = (y / 2, y % 2);
        let (w, f) = UNIT[u][v];
        2 * w + (s + t + f) % 2
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

fn permutation_group(name: String, perms: &[Vec<usize>]) -> FiniteGroup {
    let index: std::collections::HashMap<&[usize], usize> =
        perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    FiniteGroup::from_fn(name, perms.len(), |a, b| {
        let composed: Vec<usize> = perms[b].iter().map(|&i| perms[a][i]).collect();
        index[composed.as_slice()]
    })
}

/// `Aut(G)` with elements as sorted element maps (identity first) and
/// product `φψ = φ ∘ ψ`.
pub fn automorphisms(g: &FiniteGroup) -> (FiniteGroup, Vec<Vec<usize>>) {
    let gens = g.generators();
    let mut autos = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    collect_automorphisms(g, &gens, &mut images, &mut autos);
    autos.sort();
    let index: std::collections::HashMap<&[usize], usize> =
        autos.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let group = FiniteGroup::from_fn(format!("Aut({})", g.name()), autos.len(), |a, b| {
        let composed: Vec<usize> = autos[b].iter().map(|&x| autos[a][x]).collect();
        index[composed.as_slice()]
    });
    (group, autos)
}

fn collect_automorphisms(g: &FiniteGroup, gens: &[usize], images: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if images.len() == gens.len() {
        if let Some(map) = super::iso::hom_from_generator_images(g, g, gens, images) {
            out.push(map);
        }
        return;
    }
    let k = g.element_order(gens[images.len()]);
    for y in g.elements().filter(|&y| g.element_order(y) == k) {
        images.push(y);
        collect_automorphisms(g, gens, images, out);
        images.pop();
    }
}

/// `(H → Aut(H))`, `h ↦` conjugation by `h`, with `Aut(H)` acting by evaluation.
pub fn xmod_aut(h: &FiniteGroup) -> CrossedModule {
    let (aut, maps) = automorphisms(h);
    let alpha = h
        .elements()
        .map(|x| {
            let conj: Vec<usize> = h.elements().map(|y| h.conj(x, y)).collect();
            maps.binary_search(&conj).expect("inner automorphism")
        })
        .collect();
    let action = maps.iter().flat_map(|m| m.iter().copied()).collect();
    CrossedModule::new(format!("({0} -> Aut({0}))", h.name()), h.clone(), aut, alpha, action)
        .expect("(H → Aut H) is a crossed module")
}

/// `Zₙ → Zₘ`, `x ↦ kx mod m`, trivial action.
pub fn xmod_mul(n: usize, m: usize, k: usize) -> Result<CrossedModule> {
    if n == 0 || m == 0 {
        return Err(Error::BadParameter("cyclic order must be positive".into()));
    }
    if (k * n) % m != 0 {
        return Err(Error::BadParameter(format!("x ↦ {k}x is not well defined Z{n} → Z{m}")));
    }
    let h = cyclic(n);
    let d = cyclic(m);
    let alpha = (0..n).map(|x| (k * x) % m).collect();
    let action = (0..m).flat_map(|_| 0..n).collect();
    let name = if k == 1 {
        format!("(Z{n} -> Z{m})")
    } else {
        format!("(Z{n} -{k}-> Z{m})")
    };
    CrossedModule::new(name, h, d, alpha, action)
}

/// `A → G` with trivial map and trivial action; needs `A` abelian.
pub fn xmod_zero(a: &FiniteGroup, g: &FiniteGroup) -> Result<CrossedModule> {
    if !a.is_abelian() {
        return Err(Error::NotAbelian(a.name().to_string()));
    }
    let alpha = vec![g.identity(); a.order()];
    let action = g.elements().flat_map(|_| a.elements()).collect();
    CrossedModule::new(format!("({} -> {})", a.name(), g.name()), a.clone(), g.clone(), alpha, action)
}

/// Inclusion of a normal subgroup with the conjugation action.
pub fn xmod_normal(g: &FiniteGroup, normal: &[usize], sub_name: &str) -> Result<CrossedModule> {
    if !g.is_normal(normal) {
        return Err(Error::NotNormal(format!("{sub_name} in {}", g.name())));
    }
    let sub = g.subgroup(normal, sub_name)?;
    let mut index = vec![usize::MAX; g.order()];
    for (i, &x) in sub.embedding.iter().enumerate() {
        index[x] = i;
    }
    let action = g
        .elements()
        .flat_map(|a| sub.embedding.iter().map(move |&x| (a, x)))
        .map(|(a, x)| index[g.conj(a, x)])
        .collect();
    CrossedModule::new(
        format!("({} -> {})", sub_name, g.name()),
        sub.group,
        g.clone(),
        sub.embedding,
        action,
    )
}

#[derive(Clone, Debug, PartialEq)]
enum Term {
    Int(usize),
    Call(String, Vec<Term>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn parse_all(mut self) -> Result<Term> {
        let term = self.term()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.error("trailing input"));
        }
        Ok(term)
    }

    fn error(&self, msg: &str) -> Error {
        Error::BadParameter(format!("{msg} at column {} in `{}`", self.pos + 1, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                self.src[start..self.pos]
                    .parse()
                    .map(Term::Int)
                    .map_err(|_| self.error("integer out of range"))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name = self.src[start..self.pos].to_string();
                let mut args = Vec::new();
                if self.peek() == Some('(') {
                    self.pos += 1;
                    if self.peek() == Some(')') {
                        self.pos += 1;
                    } else {
                        loop {
                            args.push(self.term()?);
                            match self.peek() {
                                Some(',') => self.pos += 1,
                                Some(')') => {
                                    self.pos += 1;
                                    break;
                                }
                                _ => return Err(self.error("expected `,` or `)`")),
                            }
                        }
                    }
                }
                Ok(Term::Call(name, args))
            }
            _ => Err(self.error("expected a preset name or integer")),
        }
    }
}

fn int_arg(name: &str, args: &[Term], i: usize) -> Result<usize> {
    match args.get(i) {
        Some(Term::Int(n)) => Ok(*n),
        _ => Err(Error::BadParameter(format!("`{name}` expects an integer as argument {}", i + 1))),
    }
}

fn group_arg(name: &str, args: &[Term], i: usize) -> Result<FiniteGroup> {
    match args.get(i) {
        Some(t @ Term::Call(..)) => build(t)?.into_group(),
        _ => Err(Error::BadParameter(format!("`{name}` expects a group as argument {}", i + 1))),
    }
}

fn arity(name: &str, args: &[Term], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(Error::BadParameter(format!("`{name}` takes {n} argument(s), got {}", args.len())));
    }
    Ok(())
}

fn in_range(name: &str, n: usize, lo: usize, hi: usize) -> Result<usize> {
    if n < lo || n > hi {
        return Err(Error::BadParameter(format!("`{name}` parameter {n} outside {lo}..={hi}")));
    }
    Ok(n)
}

fn build(term: &Term) -> Result<Preset> {
    let Term::Call(name, args) = term else {
        return Err(Error::BadParameter("expected a preset, found an integer".into()));
    };
    let name = name.as_str();
    let group = |g: FiniteGroup| Ok(Preset::Group(g));
    let xmod = |x: CrossedModule| Ok(Preset::Xmod(x));
    match name {
        "trivial" => {
            arity(name, args, 0)?;
            group(FiniteGroup::trivial())
        }
        "cyclic" => {
            arity(name, args, 1)?;
            group(cyclic(in_range(name, int_arg(name, args, 0)?, 1, 64)?))
        }
        "dihedral" => {
            arity(name, args, 1)?;
            group(dihedral(in_range(name, int_arg(name, args, 0)?, 1, 32)?))
        }
        "symmetric" => {
            arity(name, args, 1)?;
            group(symmetric(in_range(name, int_arg(name, args, 0)?, 1, 5)?))
        }
        "alternating" => {
            arity(name, args, 1)?;
            group(alternating(in_range(name, int_arg(name, args, 0)?, 1, 5)?))
        }
        "quaternion" => {
            arity(name, args, 0)?;
            group(quaternion())
        }
        "klein" => {
            arity(name, args, 0)?;
            group(FiniteGroup::direct_product(&cyclic(2), &cyclic(2)).with_name("V4"))
        }
        "product" => {
            arity(name, args, 2)?;
            let a = group_arg(name, args, 0)?;
            let b = group_arg(name, args, 1)?;
            if a.order() * b.order() > 128 {
                return Err(Error::BadParameter("product order above 128".into()));
            }
            group(FiniteGroup::direct_product(&a, &b))
        }
        "xmod_id" => {
            arity(name, args, 1)?;
            xmod(CrossedModule::identity(group_arg(name, args, 0)?))
        }
        "xmod_unit" => {
            arity(name, args, 1)?;
            xmod(CrossedModule::unit(group_arg(name, args, 0)?))
        }
        "xmod_abelian" => {
            arity(name, args, 1)?;
            xmod(xmod_zero(&group_arg(name, args, 0)?, &FiniteGroup::trivial())?)
        }
        "xmod_zero" => {
            arity(name, args, 2)?;
            xmod(xmod_zero(&group_arg(name, args, 0)?, &group_arg(name, args, 1)?)?)
        }
        "xmod_mod" => {
            arity(name, args, 2)?;
            let n = in_range(name, int_arg(name, args, 0)?, 1, 64)?;
            let m = in_range(name, int_arg(name, args, 1)?, 1, 64)?;
            if n % m != 0 {
                return Err(Error::BadParameter(format!("reduction Z{n} → Z{m} needs {m} | {n}")));
            }
            xmod(xmod_mul(n, m, 1)?)
        }
        "xmod_mul" => {
            arity(name, args, 3)?;
            let n = in_range(name, int_arg(name, args, 0)?, 1, 64)?;
            let m = in_range(name, int_arg(name, args, 1)?, 1, 64)?;
            xmod(xmod_mul(n, m, int_arg(name, args, 2)?)?)
        }
        "xmod_aut" => {
            arity(name, args, 1)?;
            let h = group_arg(name, args, 0)?;
            if h.order() > 24 {
                return Err(Error::BadParameter("xmod_aut limited to groups of order ≤ 24".into()));
            }
            xmod(xmod_aut(&h))
        }
        "xmod_normal" => {
            arity(name, args, 2)?;
            let g = group_arg(name, args, 0)?;
            let Some(Term::Call(sub, sub_args)) = args.get(1) else {
                return Err(Error::BadParameter("`xmod_normal` expects center, derived or a subgroup name".into()));
            };
            let elems = match (sub.as_str(), sub_args.as_slice()) {
                ("center", []) => g.center(),
                ("derived", []) => derived_subgroup(&g),
                ("rotations", []) => {
                    if g.order() % 2 != 0 {
                        return Err(Error::BadParameter("rotations need a dihedral group".into()));
                    }
                    (0..g.order() / 2).collect()
                }
                _ => return Err(Error::UnknownPreset(format!("subgroup `{sub}`"))),
            };
            xmod(xmod_normal(&g, &elems, &format!("{sub}({})", g.name()))?)
        }
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Subgroup generated by commutators.
fn derived_subgroup(g: &FiniteGroup) -> Vec<usize> {
    let commutators: Vec<usize> = g
        .elements()
        .flat_map(|a| g.elements().map(move |b| (a, b)))
        .map(|(a, b)| g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))))
        .collect();
    g.closure(&commutators)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_groups_are_groups() {
        for g in [cyclic(4), dihedral(4), symmetric(3), symmetric(4), alternating(4), quaternion()] {
            assert!(g.check_axioms().is_valid(), "{}", g.name());
        }
        assert_eq!(symmetric(3).order(), 6);
        assert_eq!(alternating(4).order(), 12);
        assert!(!quaternion().is_abelian());
        assert_eq!(quaternion().center().len(), 2);
    }

    #[test]
    fn aut_z3() {
        let xm = preset_library("xmod_aut(cyclic(3))").unwrap().into_xmod().unwrap();
        assert_eq!(xm.d().order(), 2);
        assert_eq!(xm.alpha_map(), &[0, 0, 0]);
        // the nontrivial automorphism is inversion
        assert_eq!(xm.act(1, 1), 2);
    }

    #[test]
    fn aut_s3_is_s3() {
        let (aut, _) = automorphisms(&symmetric(3));
        assert_eq!(aut.order(), 6);
    }

    #[test]
    fn parser() {
        let g = preset_library(" product( cyclic(2), symmetric(3) ) ").unwrap().into_group().unwrap();
        assert_eq!(g.order(), 12);
        assert!(matches!(preset_library("nope(3)"), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset_library("cyclic(0)"), Err(Error::BadParameter(_))));
        assert!(matches!(preset_library("cyclic(2"), Err(Error::BadParameter(_))));
        assert!(matches!(preset_library("xmod_mod(4,3)"), Err(Error::BadParameter(_))));
        let xm = preset_library("xmod_normal(symmetric(3),derived)").unwrap().into_xmod().unwrap();
        assert_eq!(xm.h().order(), 3);
        assert_eq!(xm.cokernel().group.order(), 2);
    }
}
