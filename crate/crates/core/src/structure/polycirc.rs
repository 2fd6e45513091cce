//! Regular (semiregular) elements assembled from p-block systems, with an
//! exhaustive fallback over the 2-closure, and the related block lemmas.

use alloc::vec;
use alloc::vec::Vec;

use super::orbital_coloring;
use super::subgroups::{normal_closure, normal_subgroup_witness, scan_subgroups, ScanOptions, ScanStats};
use crate::aut::ColoredPairStructure;
use crate::error::{Error, Result};
use crate::group::{prime_divisors, PermGroup};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolycircOptions {
    pub scan: ScanOptions,
    /// Node budget for each cycle-assembly search.
    pub max_nodes: u64,
    /// Stop collecting block systems from subgroups after this many.
    pub max_systems: usize,
}

impl Default for PolycircOptions {
    fn default() -> Self {
        PolycircOptions {
            scan: ScanOptions { samples: 200, ..ScanOptions::default() },
            max_nodes: 20_000_000,
            max_systems: 16,
        }
    }
}

/// Where a p-block system came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockSource {
    /// The degree is prime and the only block is the whole set.
    WholeSet,
    /// A block system of the group itself.
    Group,
    /// A block system of a transitive subgroup.
    Subgroup { generators: Vec<Permutation>, order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolycircMethod {
    /// One p-cycle on each block of `blocks`.
    Construction { p: usize, blocks: Vec<Vec<usize>>, source: BlockSource },
    /// Found by the complete search over the 2-closure.
    Exhaustive { p: usize },
}

impl PolycircMethod {
    pub fn name(&self) -> &'static str {
        match self {
            PolycircMethod::Construction { .. } => "construction",
            PolycircMethod::Exhaustive { .. } => "exhaustive",
        }
    }

    pub fn prime(&self) -> usize {
        match self {
            PolycircMethod::Construction { p, .. } | PolycircMethod::Exhaustive { p } => *p,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolycircWitness {
    pub element: Permutation,
    pub cycle_len: usize,
    pub method: PolycircMethod,
    /// Whether the element lies in the group itself, not only in its
    /// 2-closure.
    pub in_group: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolycircOutcome {
    Witness(PolycircWitness),
    /// The 2-closure has no regular element: a counterexample candidate.
    CounterexampleCandidate { degree: usize, order: u64 },
}

impl PolycircOutcome {
    pub fn witness(&self) -> Option<&PolycircWitness> {
        match self {
            PolycircOutcome::Witness(w) => Some(w),
            PolycircOutcome::CounterexampleCandidate { .. } => None,
        }
    }
}

pub fn polycirculant_witness(g: &PermGroup) -> Result<PolycircOutcome> {
    polycirculant_witness_with(g, &PolycircOptions::default())
}

/// Looks for a regular element of the 2-closure of a transitive group.
/// Primes dividing the degree are tried from the largest down: for each
/// p-block system of the group, or failing that of a transitive subgroup,
/// a color-preserving permutation acting as one p-cycle on every block is
/// searched for. The exhaustive search over all color-preserving products
/// of p-cycles follows if no system yields one.
pub fn polycirculant_witness_with(g: &PermGroup, opts: &PolycircOptions) -> Result<PolycircOutcome> {
    let n = g.degree();
    if !g.is_transitive() || n < 2 {
        return Err(Error::InvalidInput("polycirculant witness needs a transitive group of degree at least 2".into()));
    }
    let colors = orbital_coloring(g);
    let mut primes = prime_divisors(n as u64);
    primes.reverse();
    for &p in &primes {
        let p = p as usize;
        for (blocks, source) in p_block_systems(g, p, opts)? {
            let mut block_of = vec![0usize; n];
            for (i, b) in blocks.iter().enumerate() {
                for &v in b {
                    block_of[v] = i;
                }
            }
            if let Some(sigma) = cycle_search(&colors, p, Some(&block_of), opts.max_nodes)? {
                let method = PolycircMethod::Construction { p, blocks, source };
                return Ok(PolycircOutcome::Witness(finish(g, &colors, sigma, p, method)?));
            }
        }
    }
    for &p in &primes {
        let p = p as usize;
        if let Some(sigma) = cycle_search(&colors, p, None, opts.max_nodes)? {
            return Ok(PolycircOutcome::Witness(finish(g, &colors, sigma, p, PolycircMethod::Exhaustive { p })?));
        }
    }
    Ok(PolycircOutcome::CounterexampleCandidate { degree: n, order: g.order()? })
}

fn finish(
    g: &PermGroup,
    colors: &ColoredPairStructure,
    sigma: Permutation,
    p: usize,
    method: PolycircMethod,
) -> Result<PolycircWitness> {
    if sigma.regular_cycle_length() != Some(p) || !colors.preserved_by(&sigma) {
        return Err(Error::InvalidInput("assembled permutation failed verification".into()));
    }
    let in_group = g.contains(&sigma)?;
    Ok(PolycircWitness { element: sigma, cycle_len: p, method, in_group })
}

/// Block systems with blocks of size `p`, from the group or else from its
/// transitive subgroups, deduplicated and sorted.
fn p_block_systems(g: &PermGroup, p: usize, opts: &PolycircOptions) -> Result<Vec<(Vec<Vec<usize>>, BlockSource)>> {
    let n = g.degree();
    if n == p {
        return Ok(vec![(vec![(0..n).collect()], BlockSource::WholeSet)]);
    }
    let own: Vec<(Vec<Vec<usize>>, BlockSource)> =
        g.pair_block_systems().into_iter().filter(|s| s[0].len() == p).map(|s| (s, BlockSource::Group)).collect();
    if !own.is_empty() {
        return Ok(own);
    }
    let mut found: Vec<(Vec<Vec<usize>>, BlockSource)> = Vec::new();
    scan_subgroups(g, &opts.scan, |h| {
        if h.order() % n != 0 {
            return true;
        }
        let hg = h.to_group();
        if !hg.is_transitive() {
            return true;
        }
        for s in hg.pair_block_systems() {
            if s[0].len() == p && !found.iter().any(|(t, _)| *t == s) {
                let source = BlockSource::Subgroup { generators: h.generators.clone(), order: h.order() };
                found.push((s, source));
            }
        }
        found.len() < opts.max_systems
    })?;
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(found)
}

/// Depth-first search for a color-preserving permutation whose cycles all
/// have length `p`. Each cycle starts at the least point not yet placed;
/// with `block_of`, each cycle stays inside one block.
fn cycle_search(colors: &ColoredPairStructure, p: usize, block_of: Option<&[usize]>, max_nodes: u64) -> Result<Option<Permutation>> {
    let n = colors.degree();
    if p < 2 || n % p != 0 {
        return Ok(None);
    }
    struct State<'a> {
        colors: &'a ColoredPairStructure,
        block_of: Option<&'a [usize]>,
        p: usize,
        n: usize,
        sigma: Vec<usize>,
        placed: Vec<bool>,
        assigned: Vec<usize>,
        nodes: u64,
        max_nodes: u64,
    }
    impl State<'_> {
        fn consistent(&self, x: usize, y: usize) -> bool {
            let c = self.colors;
            if c.color(x, x) != c.color(y, y) {
                return false;
            }
            self.assigned.iter().all(|&u| {
                let su = self.sigma[u];
                c.color(u, x) == c.color(su, y) && c.color(x, u) == c.color(y, su)
            })
        }

        fn assign(&mut self, x: usize, y: usize) {
            self.sigma[x] = y;
            self.assigned.push(x);
        }

        fn unassign(&mut self) {
            let x = self.assigned.pop().unwrap();
            self.sigma[x] = usize::MAX;
        }

        /// Extends the open cycle starting at `start`, currently at `x`
        /// after `len` points.
        fn grow(&mut self, start: usize, x: usize, len: usize) -> Result<bool> {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(Error::BudgetExceeded {
                    what: "regular element search nodes",
                    needed: self.nodes as u128,
                    budget: self.max_nodes as u128,
                });
            }
            if len == self.p {
                if !self.consistent(x, start) {
                    return Ok(false);
                }
                self.assign(x, start);
                if self.next_cycle()? {
                    return Ok(true);
                }
                self.unassign();
                return Ok(false);
            }
            for y in 0..self.n {
                if self.placed[y] || self.block_of.is_some_and(|b| b[y] != b[start]) {
                    continue;
                }
                if !self.consistent(x, y) {
                    continue;
                }
                self.assign(x, y);
                self.placed[y] = true;
                if self.grow(start, y, len + 1)? {
                    return Ok(true);
                }
                self.placed[y] = false;
                self.unassign();
            }
            Ok(false)
        }

        fn next_cycle(&mut self) -> Result<bool> {
            let Some(start) = (0..self.n).find(|&v| !self.placed[v]) else { return Ok(true) };
            self.placed[start] = true;
            if self.grow(start, start, 1)? {
                return Ok(true);
            }
            self.placed[start] = false;
            Ok(false)
        }
    }
    let mut st = State {
        colors,
        block_of,
        p,
        n,
        sigma: vec![usize::MAX; n],
        placed: vec![false; n],
        assigned: Vec::with_capacity(n),
        nodes: 0,
        max_nodes,
    };
    if st.next_cycle()? {
        Ok(Some(Permutation::from_images(&st.sigma)?))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QgdnVerdict {
    Pass,
    /// No transitive subgroup with such blocks, by the full lattice.
    Fail,
    /// None among the sampled subgroups.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct QgdnReport {
    /// The greatest prime divisor of the degree.
    pub q: usize,
    pub verdict: QgdnVerdict,
    /// Generators of the transitive subgroup and its block system.
    pub witness: Option<(Vec<Permutation>, Vec<Vec<usize>>)>,
    pub scan: ScanStats,
}

/// Searches for a transitive subgroup of `g` (possibly `g`) with a block
/// system of blocks of size q, the greatest prime divisor of the degree.
pub fn qgdn_check(g: &PermGroup, scan: &ScanOptions) -> Result<QgdnReport> {
    let n = g.degree();
    if n < 2 || !g.is_transitive() {
        return Err(Error::InvalidInput("qgdn check needs a transitive group of degree at least 2".into()));
    }
    let q = *prime_divisors(n as u64).last().unwrap() as usize;
    let whole = ScanStats { exhaustive: true, examined: 0 };
    if q == n {
        let witness = Some((g.generators().to_vec(), vec![(0..n).collect()]));
        return Ok(QgdnReport { q, verdict: QgdnVerdict::Pass, witness, scan: whole });
    }
    if let Some(s) = g.pair_block_systems().into_iter().find(|s| s[0].len() == q) {
        return Ok(QgdnReport { q, verdict: QgdnVerdict::Pass, witness: Some((g.generators().to_vec(), s)), scan: whole });
    }
    let mut witness = None;
    let stats = scan_subgroups(g, scan, |h| {
        if h.order() % n != 0 {
            return true;
        }
        let hg = h.to_group();
        if !hg.is_transitive() {
            return true;
        }
        if let Some(s) = hg.pair_block_systems().into_iter().find(|s| s[0].len() == q) {
            witness = Some((h.generators.clone(), s));
            return false;
        }
        true
    })?;
    let verdict = match (&witness, stats.exhaustive) {
        (Some(_), _) => QgdnVerdict::Pass,
        (None, true) => QgdnVerdict::Fail,
        (None, false) => QgdnVerdict::Inconclusive,
    };
    Ok(QgdnReport { q, verdict, witness, scan: stats })
}

/// A proper nontrivial normal subgroup of a transitive group with the block
/// system `blocks`: the normal closure of a nontrivial element of the block
/// kernel, or for small groups with a trivial kernel, any normal subgroup.
pub fn incoherent_normal_subgroup(g: &PermGroup, blocks: &[Vec<usize>], max_nodes: u64) -> Result<Option<PermGroup>> {
    let n = g.degree();
    let mut block_of = vec![usize::MAX; n];
    for (i, b) in blocks.iter().enumerate() {
        for &v in b {
            block_of[v] = i;
        }
    }
    if block_of.contains(&usize::MAX) || blocks.len() < 2 {
        return Err(Error::InvalidInput("blocks must partition the points into at least two classes".into()));
    }
    let chain = g.chain();
    let kernel_element = chain.search(
        |a| a.iter().all(|&(b, img)| block_of[b] == block_of[img]),
        |h| !h.is_identity() && (0..n).all(|v| block_of[h.apply(v)] == block_of[v]),
        max_nodes,
    )?;
    if let Some(x) = kernel_element {
        let nc = normal_closure(g, &[x])?;
        if nc.order()? < g.order()? {
            return Ok(Some(nc));
        }
    }
    if g.order()? <= 5_000 {
        return normal_subgroup_witness(g);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::tests::petersen_group;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_cycle_strings(n, gens).unwrap()
    }

    fn witness(g: &PermGroup) -> PolycircWitness {
        polycirculant_witness(g).unwrap().witness().cloned().unwrap()
    }

    #[test]
    fn regular_cyclic_group() {
        let w = witness(&PermGroup::cyclic(6));
        assert!(matches!(w.method, PolycircMethod::Construction { p: 3, .. }));
        assert!(w.in_group);
        assert_eq!(w.element.regular_cycle_length(), Some(3));
    }

    #[test]
    fn s3_times_c2_uses_a_decomposable_subgroup() {
        let g = group(6, &["(1 2)(4 5)", "(1 2 3)(4 5 6)", "(1 4)(2 5)(3 6)"]);
        assert_eq!(g.order().unwrap(), 12);
        let w = witness(&g);
        assert!(w.in_group);
        assert!(w.element.regular_cycle_length().is_some());
        let mut primes_checked = 0;
        for p in [2usize, 3] {
            let systems = p_block_systems(&g, p, &PolycircOptions::default()).unwrap();
            if p == 2 {
                assert!(systems.iter().any(|(s, _)| *s == vec![vec![0, 3], vec![1, 4], vec![2, 5]]));
            }
            primes_checked += systems.len();
        }
        assert!(primes_checked > 0);
    }

    #[test]
    fn petersen_routes_through_five() {
        let g = petersen_group();
        let w = witness(&g);
        match &w.method {
            PolycircMethod::Construction { p, blocks, source } => {
                assert_eq!(*p, 5);
                assert_eq!(blocks.len(), 2);
                assert!(matches!(source, BlockSource::Subgroup { order: 20, .. }));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(w.cycle_len, 5);
        assert!(w.in_group);
        assert!(g.is_primitive() == crate::group::Primitivity::Primitive);
        let exhaustive = cycle_search(&orbital_coloring(&g), 5, None, 1_000_000).unwrap().unwrap();
        assert_eq!(exhaustive.regular_cycle_length(), Some(5));
        assert!(cycle_search(&orbital_coloring(&g), 2, None, 10_000_000).unwrap().is_none());
    }

    #[test]
    fn exhaustive_search_is_complete_on_small_groups() {
        for g in [
            PermGroup::symmetric(4),
            group(5, &["(1 2 3 4 5)", "(2 5)(3 4)"]),
            group(6, &["(1 4)", "(1 2 3)(4 5 6)", "(1 2)(4 5)"]),
            group(7, &["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"]),
        ] {
            let colors = orbital_coloring(&g);
            let n = g.degree();
            for p in prime_divisors(n as u64) {
                let p = p as usize;
                let found = cycle_search(&colors, p, None, 10_000_000).unwrap();
                let closure = super::super::two_closure(&g, crate::aut::SearchBudget::default()).unwrap();
                let brute = closure.elements().unwrap().iter().find(|e| e.regular_cycle_length() == Some(p));
                assert_eq!(found.is_some(), brute.is_some());
            }
        }
    }

    #[test]
    fn qgdn_examples() {
        let r = qgdn_check(&PermGroup::symmetric(6), &ScanOptions::default()).unwrap();
        assert_eq!(r.q, 3);
        assert_eq!(r.verdict, QgdnVerdict::Pass);
        // PSL(2,5) on the projective line over F_5.
        let a5 = group(6, &["(1 2 3 4 5)", "(1 6)(2 5)"]);
        assert_eq!(a5.order().unwrap(), 60);
        let r = qgdn_check(&a5, &ScanOptions::default()).unwrap();
        assert_eq!(r.verdict, QgdnVerdict::Fail);
        assert!(r.scan.exhaustive);
        let r = qgdn_check(&PermGroup::cyclic(7), &ScanOptions::default()).unwrap();
        assert_eq!(r.verdict, QgdnVerdict::Pass);
    }

    #[test]
    fn block_kernel_is_normal() {
        let wreath = group(6, &["(1 2 3)", "(1 4)(2 5)(3 6)"]);
        let blocks = vec![vec![0, 1, 2], vec![3, 4, 5]];
        let nsub = incoherent_normal_subgroup(&wreath, &blocks, 100_000).unwrap().unwrap();
        let order = nsub.order().unwrap();
        assert!(order > 1 && order < wreath.order().unwrap());
        for s in wreath.generators() {
            for h in nsub.generators() {
                assert!(nsub.contains(&s.compose(h).unwrap().compose(&s.inverse()).unwrap()).unwrap());
            }
        }
        let regular = PermGroup::cyclic(6);
        assert!(incoherent_normal_subgroup(&regular, &[vec![0, 3], vec![1, 4], vec![2, 5]], 1000).unwrap().is_some());
    }
}
