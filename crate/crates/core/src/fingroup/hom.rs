use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fingroup::{FiniteGroup, Quotient, Subgroup};
use crate::report::ValidationReport;

/// A homomorphism between table-backed groups.
#[derive(Clone, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        let report = check_hom(&source, &target, &map)?;
        if !report.is_valid() {
            return Err(Error::structural(format!("not a homomorphism: {report}")));
        }
        Ok(Self { source, target, map })
    }

    pub(crate) fn new_trusted(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Self {
        Self { source, target, map }
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let map = group.elements().collect();
        Self {
            source: group.clone(),
            target: group,
            map,
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `{h : f(h) = e}` as a subgroup of the source.
    pub fn kernel(&self) -> Subgroup {
        let e = self.target.identity();
        let elems: Vec<usize> = self.source.elements().filter(|&x| self.map[x] == e).collect();
        self.source
            .subgroup(&elems, format!("ker({})", self.source.name()))
            .expect("kernel of a homomorphism is a subgroup")
    }

    pub fn image(&self) -> Subgroup {
        let mut elems = self.map.clone();
        elems.sort_unstable();
        elems.dedup();
        self.target
            .subgroup(&elems, format!("im({})", self.source.name()))
            .expect("image of a homomorphism is a subgroup")
    }

    /// `target / image`; fails when the image is not normal.
    pub fn cokernel(&self) -> Result<Quotient> {
        let image = self.image();
        self.target
            .quotient(&image.embedding, format!("coker({})", self.target.name()))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.order() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.image().group.order() == self.target.order()
    }
}

/// Checks that `map` is a homomorphism `source → target`.
pub fn check_hom(source: &FiniteGroup, target: &FiniteGroup, map: &[usize]) -> Result<ValidationReport> {
    if map.len() != source.order() {
        return Err(Error::structural(format!(
            "map has {} entries but source has order {}",
            map.len(),
            source.order()
        )));
    }
    if map.iter().any(|&y| y >= target.order()) {
        return Err(Error::structural("map value outside target"));
    }
    let mut report = ValidationReport::new();
    'outer: for a in source.elements() {
        for b in source.elements() {
            if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                report.push("homomorphism", format!("f({a}·{b}) ≠ f({a})·f({b})"));
                break 'outer;
            }
        }
    }
    Ok(report)
}

/// An action of `actor` on `space` by automorphisms, `table[d·|H| + h] = ᵈh`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    actor_order: usize,
    space_order: usize,
    table: Vec<usize>,
}

impl GroupAction {
    pub fn from_table(actor: &FiniteGroup, space: &FiniteGroup, table: Vec<usize>) -> Result<Self> {
        let action = Self::unchecked(actor, space, table)?;
        let report = action.check(actor, space);
        if !report.is_valid() {
            return Err(Error::structural(format!("not an action: {report}")));
        }
        Ok(action)
    }

    /// Dimension-checked only.
    pub(crate) fn unchecked(actor: &FiniteGroup, space: &FiniteGroup, table: Vec<usize>) -> Result<Self> {
        if table.len() != actor.order() * space.order() {
            return Err(Error::structural(format!(
                "action table has {} entries, expected {}×{}",
                table.len(),
                actor.order(),
                space.order()
            )));
        }
        if table.iter().any(|&x| x >= space.order()) {
            return Err(Error::structural("action value outside acted-on group"));
        }
        Ok(Self {
            actor_order: actor.order(),
            space_order: space.order(),
            table,
        })
    }

    pub fn trivial(actor: &FiniteGroup, space: &FiniteGroup) -> Self {
        let table = (0..actor.order()).flat_map(|_| space.elements()).collect();
        Self {
            actor_order: actor.order(),
            space_order: space.order(),
            table,
        }
    }

    #[inline]
    pub fn act(&self, d: usize, h: usize) -> usize {
        self.table[d * self.space_order + h]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.space_order)
    }

    pub fn actor_order(&self) -> usize {
        self.actor_order
    }

    /// Each row an automorphism, identity row trivial, and `ᵈᵈ'h = ᵈ(ᵈ'h)`.
    pub fn check(&self, actor: &FiniteGroup, space: &FiniteGroup) -> ValidationReport {
        let mut report = ValidationReport::new();
        for d in actor.elements() {
            let row = &self.table[d * self.space_order..(d + 1) * self.space_order];
            let mut seen = vec![false; self.space_order];
            for &x in row {
                seen[x] = true;
            }
            if seen.iter().any(|s| !s) {
                report.push("action by automorphisms", format!("row {d} is not a bijection"));
                continue;
            }
            if let Some((a, b)) = space
                .elements()
                .flat_map(|a| space.elements().map(move |b| (a, b)))
                .find(|&(a, b)| row[space.mul(a, b)] != space.mul(row[a], row[b]))
            {
                report.push("action by automorphisms", format!("row {d} fails on ({a},{b})"));
            }
        }
        let e = actor.identity();
        if space.elements().any(|h| self.act(e, h) != h) {
            report.push("unital action", "identity of the actor acts nontrivially");
        }
        'outer: for d in actor.elements() {
            for d2 in actor.elements() {
                for h in space.elements() {
                    if self.act(actor.mul(d, d2), h) != self.act(d, self.act(d2, h)) {
                        report.push("action compatibility", format!("(d,d',h) = ({d},{d2},{h})"));
                        break 'outer;
                    }
                }
            }
        }
        report
    }
}
