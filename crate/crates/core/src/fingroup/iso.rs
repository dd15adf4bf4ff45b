use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::fingroup::FiniteGroup;

/// An isomorphism `a → b` as an element map, or `None`.
///
/// Backtracks over images of a greedy generating set of `a`, restricted to
/// elements of matching order, and checks each partial assignment on the
/// subgroup generated so far.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order() != b.order() || a.is_abelian() != b.is_abelian() || order_profile(a) != order_profile(b) {
        return None;
    }
    let gens = a.generators();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let k = a.element_order(g);
            b.elements().filter(|&y| b.element_order(y) == k).collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    search(a, b, &gens, &candidates, &mut images)
}

pub fn are_isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    find_isomorphism(a, b).is_some()
}

fn search(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let depth = images.len();
    if depth == gens.len() {
        return hom_from_generator_images(a, b, gens, images);
    }
    extend(a, b, &gens[..depth], images)?;
    for &y in &candidates[depth] {
        images.push(y);
        if let Some(found) = search(a, b, gens, candidates, images) {
            return Some(found);
        }
        images.pop();
    }
    None
}

/// The bijective homomorphism sending `gens[i] ↦ images[i]`, if one exists.
/// `gens` must generate `a`.
pub(crate) fn hom_from_generator_images(
    a: &FiniteGroup,
    b: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let map = extend(a, b, gens, images)?;
    map.iter().all(|&y| y != usize::MAX).then_some(map)
}

/// Extends generator images to the generated subgroup by right
/// multiplication, failing on any inconsistency or collision.
fn extend(a: &FiniteGroup, b: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    let mut used = vec![false; b.order()];
    map[a.identity()] = b.identity();
    used[b.identity()] = true;
    let mut queue = VecDeque::from([a.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = a.mul(x, g);
            let target = b.mul(map[x], img);
            if map[y] == usize::MAX {
                if used[target] {
                    return None;
                }
                used[target] = true;
                map[y] = target;
                queue.push_back(y);
            } else if map[y] != target {
                return None;
            }
        }
    }
    Some(map)
}

fn order_profile(g: &FiniteGroup) -> BTreeMap<usize, usize> {
    let mut profile = BTreeMap::new();
    for x in g.elements() {
        *profile.entry(g.element_order(x)).or_insert(0) += 1;
    }
    profile
}

/// Invariant factors `n₁ | n₂ | …` of an abelian group, omitting 1s.
///
/// Read off from the sizes of the `pᵏ`-torsion subgroups.
pub fn abelian_invariants(g: &FiniteGroup) -> Result<Vec<u64>> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian(g.name().to_string()));
    }
    let mut n = g.order();
    let mut primes = Vec::new();
    let mut p = 2;
    while n > 1 {
        if n % p == 0 {
            primes.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    // Per prime, exponents e_i of the cyclic p-parts in decreasing order.
    let mut columns: Vec<Vec<u64>> = Vec::new();
    for p in primes {
        let torsion_log = |k: u32| -> u32 {
            let q = p.pow(k);
            let count = g.elements().filter(|&x| g.power(x, q) == g.identity()).count();
            count.ilog(p)
        };
        let mut at_least = Vec::new(); // at_least[k-1] = #{i : e_i ≥ k}
        let mut k = 1;
        loop {
            let c = torsion_log(k) - torsion_log(k - 1);
            if c == 0 {
                break;
            }
            at_least.push(c);
            k += 1;
        }
        let mut powers = Vec::new();
        for k in (1..=at_least.len()).rev() {
            let next = at_least.get(k).copied().unwrap_or(0);
            for _ in 0..(at_least[k - 1] - next) {
                powers.push((p as u64).pow(k as u32));
            }
        }
        columns.push(powers);
    }
    let rank = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..rank)
        .map(|i| columns.iter().map(|c| c.get(i).copied().unwrap_or(1)).product())
        .collect();
    factors.reverse();
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::presets::{cyclic, dihedral, symmetric};

    fn is_iso(a: &FiniteGroup, b: &FiniteGroup, map: &[usize]) -> bool {
        a.elements()
            .all(|x| a.elements().all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])))
    }

    #[test]
    fn s3_is_d3() {
        let s3 = symmetric(3);
        let d3 = dihedral(3);
        let map = find_isomorphism(&s3, &d3).unwrap();
        assert!(is_iso(&s3, &d3, &map));
    }

    #[test]
    fn z4_is_not_klein() {
        let k = FiniteGroup::direct_product(&cyclic(2), &cyclic(2));
        assert!(!are_isomorphic(&cyclic(4), &k));
        assert!(are_isomorphic(&FiniteGroup::direct_product(&cyclic(2), &cyclic(3)), &cyclic(6)));
    }

    #[test]
    fn invariants() {
        assert_eq!(abelian_invariants(&cyclic(12)).unwrap(), vec![12]);
        let g = FiniteGroup::direct_product(&cyclic(2), &cyclic(4));
        assert_eq!(abelian_invariants(&g).unwrap(), vec![2, 4]);
        let g = FiniteGroup::direct_product(&cyclic(6), &cyclic(4));
        assert_eq!(abelian_invariants(&g).unwrap(), vec![2, 12]);
        assert!(abelian_invariants(&FiniteGroup::trivial()).unwrap().is_empty());
        assert!(abelian_invariants(&symmetric(3)).is_err());
    }
}
