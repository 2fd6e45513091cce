//! Permutation groups given by generators, with lazy element enumeration.

use alloc::boxed::Box;
use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use once_cell::race::OnceBox;

use crate::chain::StabChain;
use crate::elements::{ElementSet, RowSet};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default bound on the number of materialized elements.
pub const DEFAULT_CAP: usize = 2_000_000;

/// A permutation group on `{0, .., n-1}` given by generators.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: OnceBox<ElementSet>,
    chain: OnceBox<StabChain>,
    known_order: Option<u64>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let elements = OnceBox::new();
        if let Some(e) = self.elements.get() {
            let _ = elements.set(Box::new(e.clone()));
        }
        let chain = OnceBox::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(Box::new(c.clone()));
        }
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            elements,
            chain,
            known_order: self.known_order,
        }
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, gens [", self.degree)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("])")
    }
}

/// Outcome of the primitivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primitivity {
    Intransitive,
    Primitive,
    /// Cyclic of prime order acting on a prime number of points.
    TrivialPrimitive,
    /// A minimal nontrivial block system, blocks sorted.
    Imprimitive(Vec<Vec<usize>>),
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { left: degree, right: g.degree() });
            }
        }
        Ok(PermGroup { degree, generators, elements: OnceBox::new(), chain: OnceBox::new(), known_order: None })
    }

    /// The group generated by 1-based cycle strings.
    pub fn from_cycle_strings(degree: usize, gens: &[&str]) -> Result<Self> {
        let gens = gens.iter().map(|s| Permutation::parse_cycles(degree, s)).collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, generators: Vec::new(), elements: OnceBox::new(), chain: OnceBox::new(), known_order: Some(1) }
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[&[0, 1]]).unwrap());
        }
        if n >= 3 {
            let c: Vec<usize> = (0..n).collect();
            gens.push(Permutation::from_cycles(n, &[&c]).unwrap());
        }
        let mut g = Self::new(n, gens).unwrap();
        g.known_order = Some(factorial(n));
        g
    }

    pub fn alternating(n: usize) -> Self {
        let gens = (2..n).map(|i| Permutation::from_cycles(n, &[&[0, 1, i]]).unwrap()).collect();
        let mut g = Self::new(n, gens).unwrap();
        g.known_order = Some(if n < 2 { 1 } else { factorial(n) / 2 });
        g
    }

    pub fn cyclic(n: usize) -> Self {
        let c: Vec<usize> = (0..n).collect();
        let gens = if n >= 2 { vec![Permutation::from_cycles(n, &[&c]).unwrap()] } else { Vec::new() };
        let mut g = Self::new(n, gens).unwrap();
        g.known_order = Some(n.max(1) as u64);
        g
    }

    /// Symmetries of the regular `n`-gon, order `2n` for `n ≥ 3`.
    pub fn dihedral(n: usize) -> Self {
        if n < 3 {
            return Self::symmetric(n);
        }
        let c: Vec<usize> = (0..n).collect();
        let rot = Permutation::from_cycles(n, &[&c]).unwrap();
        let refl = Permutation::from_images(&(0..n).map(|i| (n - i) % n).collect::<Vec<_>>()).unwrap();
        let mut g = Self::new(n, vec![rot, refl]).unwrap();
        g.known_order = Some(2 * n as u64);
        g
    }

    /// Records an order obtained elsewhere (for example from a search).
    pub fn with_known_order(mut self, order: u64) -> Self {
        self.known_order = Some(order);
        self
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// The order if already known without enumeration.
    pub fn known_order(&self) -> Option<u64> {
        self.known_order.or_else(|| self.elements.get().map(|e| e.len() as u64))
    }

    /// Enumerates all elements breadth-first from the identity, multiplying
    /// on the left by generators. Cached after the first success.
    pub fn materialize(&self, cap: usize) -> Result<&ElementSet> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        if let Some(order) = self.known_order {
            if order > cap as u64 {
                return Err(Error::GroupTooLarge { cap, partial: 0 });
            }
        }
        let set = enumerate(self.degree, &self.generators, cap)?;
        Ok(self.elements.get_or_init(|| Box::new(set)))
    }

    pub fn elements(&self) -> Result<&ElementSet> {
        self.materialize(DEFAULT_CAP)
    }

    pub fn is_materialized(&self) -> bool {
        self.elements.get().is_some()
    }

    pub fn order(&self) -> Result<u64> {
        self.order_with_cap(DEFAULT_CAP)
    }

    /// The order; `cap` is kept for callers that bound enumeration, but the
    /// stabilizer chain never enumerates.
    pub fn order_with_cap(&self, _cap: usize) -> Result<u64> {
        if let Some(o) = self.known_order() {
            return Ok(o);
        }
        u64::try_from(self.chain().order()).map_err(|_| Error::GroupTooLarge { cap: usize::MAX, partial: 0 })
    }

    /// The stabilizer chain, built on first use.
    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| Box::new(StabChain::new(self.degree, &self.generators)))
    }

    /// A fresh chain whose base starts with `prefix`.
    pub fn chain_with_base(&self, prefix: &[usize]) -> StabChain {
        StabChain::with_base_prefix(self.degree, &self.generators, prefix)
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Ok(false);
        }
        if g.is_identity() || self.generators.contains(g) {
            return Ok(true);
        }
        if let Some(e) = self.elements.get() {
            return Ok(e.contains(g));
        }
        Ok(self.chain().contains(g))
    }

    /// True when every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        if self.degree != other.degree {
            return Ok(false);
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as sets of permutations.
    pub fn same_group(&self, other: &PermGroup) -> Result<bool> {
        Ok(self.order()? == other.order()? && self.is_subgroup_of(other)?)
    }

    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.degree;
        let mut dsu = Dsu::new(n);
        for g in &self.generators {
            for v in 0..n {
                dsu.union(v, g.apply(v));
            }
        }
        dsu.classes()
    }

    pub fn orbit_of_point(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![v];
        seen[v] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit_of_point(0).len() == self.degree
    }

    /// The finest block containing `a` and `b`, by closing the pair under
    /// the generators.
    pub fn minimal_block(&self, a: usize, b: usize) -> Vec<usize> {
        let n = self.degree;
        let mut dsu = Dsu::new(n);
        dsu.union(a, b);
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        queue.push_back((a, b));
        while let Some((x, y)) = queue.pop_front() {
            for g in &self.generators {
                let (gx, gy) = (g.apply(x), g.apply(y));
                if dsu.union(gx, gy) {
                    queue.push_back((gx, gy));
                }
            }
        }
        let root = dsu.find(a);
        (0..n).filter(|&v| dsu.find(v) == root).collect()
    }

    /// The block system generated by `{a, b}`: images of the minimal block.
    pub fn block_system_of(&self, a: usize, b: usize) -> Vec<Vec<usize>> {
        let block = self.minimal_block(a, b);
        let mut assigned = vec![usize::MAX; self.degree];
        let mut blocks: Vec<Vec<usize>> = vec![block.clone()];
        for &v in &block {
            assigned[v] = 0;
        }
        let mut i = 0;
        while i < blocks.len() {
            for g in &self.generators {
                let image: Vec<usize> = blocks[i].iter().map(|&v| g.apply(v)).collect();
                if assigned[image[0]] == usize::MAX {
                    let idx = blocks.len();
                    for &v in &image {
                        assigned[v] = idx;
                    }
                    let mut image = image;
                    image.sort_unstable();
                    blocks.push(image);
                }
            }
            i += 1;
        }
        blocks.sort();
        blocks
    }

    /// All nontrivial block systems of a transitive group whose blocks are
    /// generated by a single pair, deduplicated, ordered by block size.
    pub fn pair_block_systems(&self) -> Vec<Vec<Vec<usize>>> {
        let n = self.degree;
        let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
        if n < 2 || !self.is_transitive() {
            return out;
        }
        for b in 1..n {
            let block = self.minimal_block(0, b);
            if block.len() == n {
                continue;
            }
            if out.iter().any(|s| s.iter().any(|blk| *blk == block)) {
                continue;
            }
            out.push(self.block_system_of(0, b));
        }
        out.sort_by(|x, y| x[0].len().cmp(&y[0].len()).then_with(|| x.cmp(y)));
        out
    }

    pub fn is_primitive(&self) -> Primitivity {
        let n = self.degree;
        if !self.is_transitive() {
            return Primitivity::Intransitive;
        }
        if let Some(best) = self.pair_block_systems().into_iter().next() {
            return Primitivity::Imprimitive(best);
        }
        if n >= 2 && is_prime(n as u64) {
            if let Ok(elements) = self.materialize(n) {
                if elements.len() == n {
                    return Primitivity::TrivialPrimitive;
                }
            }
        }
        Primitivity::Primitive
    }

    /// The first regular element in enumeration order.
    pub fn find_regular_element(&self, cap: usize) -> Result<Option<Permutation>> {
        let elements = self.materialize(cap)?;
        for i in 0..elements.len() {
            let g = elements.get(i);
            if g.regular_cycle_length().is_some() {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }

    /// The group `g G g⁻¹`.
    pub fn conjugate(&self, g: &Permutation) -> Result<PermGroup> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: g.degree() });
        }
        let gens = self.generators.iter().map(|h| g.conjugate(h)).collect::<Result<Vec<_>>>()?;
        let mut out = PermGroup::new(self.degree, gens)?;
        out.known_order = self.known_order();
        Ok(out)
    }

    /// The subgroup generated by `gens`, which must share the degree.
    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<PermGroup> {
        PermGroup::new(self.degree, gens)
    }
}

/// Breadth-first closure, failing once more than `cap` elements appear.
fn enumerate(degree: usize, gens: &[Permutation], cap: usize) -> Result<ElementSet> {
    let gens: Vec<&Permutation> = gens.iter().filter(|g| !g.is_identity()).collect();
    let mut rows = RowSet::with_capacity(degree, 64);
    let id: Vec<u16> = (0..degree as u16).collect();
    rows.insert(&id);
    let mut buf = vec![0u16; degree];
    let mut i = 0;
    while i < rows.len() {
        for g in &gens {
            let g = g.raw();
            {
                let cur = rows.row(i);
                for (slot, &x) in buf.iter_mut().zip(cur) {
                    *slot = g[x as usize];
                }
            }
            let (_, fresh) = rows.insert(&buf);
            if fresh && rows.len() > cap {
                return Err(Error::GroupTooLarge { cap, partial: rows.len() });
            }
        }
        i += 1;
    }
    Ok(ElementSet::from_rows(rows))
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product::<u64>().max(1)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime divisors of `n` in increasing order.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Disjoint-set union over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes; true when they were distinct.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Classes sorted by least member, members sorted.
    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut slot = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            let r = self.find(v);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(v);
        }
        out
    }
}

pub(crate) fn check_degree(a: usize, b: usize) -> Result<()> {
    if a != b {
        Err(Error::DegreeMismatch { left: a, right: b })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_cycle_strings(n, gens).unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(grp(3, &["(1 2)", "(1 2 3)"]).order().unwrap(), 6);
        assert_eq!(grp(5, &["(1 2 3 4 5)", "(1 2 4 3)"]).order().unwrap(), 20);
        assert_eq!(grp(5, &["(1 2 3)(4 5)", "(2 3)"]).order().unwrap(), 12);
        assert_eq!(PermGroup::trivial(4).order().unwrap(), 1);
        assert_eq!(grp(4, &[]).order().unwrap(), 1);
    }

    #[test]
    fn cap_overflow_reports_partial_count() {
        let g = grp(6, &["(1 2)", "(1 2 3 4 5 6)"]);
        match g.materialize(100) {
            Err(Error::GroupTooLarge { cap: 100, partial }) => assert!(partial > 100),
            other => panic!("{other:?}"),
        }
        assert_eq!(g.materialize(720).unwrap().len(), 720);
    }

    #[test]
    fn orbits_of_points() {
        assert_eq!(grp(3, &["(1 2)"]).point_orbits(), vec![vec![0, 1], vec![2]]);
        assert_eq!(PermGroup::trivial(3).point_orbits(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn primitivity() {
        assert_eq!(PermGroup::symmetric(3).is_primitive(), Primitivity::Primitive);
        assert_eq!(
            grp(4, &["(1 2 3 4)"]).is_primitive(),
            Primitivity::Imprimitive(vec![vec![0, 2], vec![1, 3]])
        );
        assert_eq!(PermGroup::cyclic(5).is_primitive(), Primitivity::TrivialPrimitive);
        assert_eq!(grp(4, &["(1 2)"]).is_primitive(), Primitivity::Intransitive);
        assert_eq!(PermGroup::dihedral(5).is_primitive(), Primitivity::Primitive);
    }

    #[test]
    fn regular_element_search() {
        let s3 = grp(3, &["(1 2)", "(1 2 3)"]);
        assert_eq!(s3.find_regular_element(DEFAULT_CAP).unwrap().unwrap().to_string(), "(1 2 3)");
        assert_eq!(PermGroup::trivial(3).find_regular_element(DEFAULT_CAP).unwrap(), None);
    }

    #[test]
    fn conjugation_preserves_order() {
        let g = grp(3, &["(1 2)"]);
        let c = g.conjugate(&Permutation::parse_cycles(3, "(1 3)").unwrap()).unwrap();
        assert_eq!(c.generators()[0].to_string(), "(2 3)");
        let g = grp(4, &["(1 2)(3 4)"]);
        let c = g.conjugate(&Permutation::parse_cycles(4, "(2 3)").unwrap()).unwrap();
        assert_eq!(c.generators()[0].to_string(), "(1 3)(2 4)");
        assert_eq!(c.order().unwrap(), 2);
    }

    #[test]
    fn named_groups_have_their_orders() {
        for n in 1..=6 {
            assert_eq!(PermGroup::symmetric(n).materialize(DEFAULT_CAP).unwrap().len() as u64, factorial(n));
            assert_eq!(PermGroup::cyclic(n).materialize(DEFAULT_CAP).unwrap().len(), n);
        }
        for n in 3..=7 {
            assert_eq!(PermGroup::alternating(n).materialize(DEFAULT_CAP).unwrap().len() as u64, factorial(n) / 2);
            assert_eq!(PermGroup::dihedral(n).materialize(DEFAULT_CAP).unwrap().len(), 2 * n);
        }
    }
}
