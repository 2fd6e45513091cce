//! (p,k)-rcycles inside k-sets and the subautomorphisms realizing them.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::aut::{
    aut_of_kset_with, find_isomorphism, ColoredPairStructure, FamilyConstraint, SearchBudget, DEFAULT_AUT_DEGREE,
    MAX_PAIR_COLORS,
};
use crate::error::{Error, Result};
use crate::korbit::{act_left, KSet};
use crate::perm::Permutation;

/// Default bound on the number of rcycles [`find_rcycles`] returns.
pub const DEFAULT_RCYCLE_LIMIT: usize = 100_000;

/// The orbit of the window `⟨β_1 .. β_k⟩` under the p-cycle `(β_1 .. β_p)`,
/// whose tuples are the cyclic windows of length k of `β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rcycle {
    /// `β`, rotated so that its least point comes first.
    pub cycle: Vec<usize>,
    pub set: KSet,
}

impl Rcycle {
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// The p-cycle `(β_1 .. β_p)` on `n` points.
    pub fn permutation(&self, n: usize) -> Permutation {
        Permutation::from_cycles(n, &[&self.cycle]).unwrap()
    }
}

fn windows(cycle: &[usize], k: usize) -> Vec<Vec<u16>> {
    let p = cycle.len();
    (0..p).map(|t| (0..k).map(|j| cycle[(t + j) % p] as u16).collect()).collect()
}

/// All (p,k)-rcycles contained in `x`, sorted.
pub fn find_rcycles(x: &KSet, p: usize) -> Result<Vec<Rcycle>> {
    find_rcycles_with(x, p, DEFAULT_RCYCLE_LIMIT)
}

pub fn find_rcycles_with(x: &KSet, p: usize, limit: usize) -> Result<Vec<Rcycle>> {
    let k = x.arity();
    let n = x.degree();
    let mut out: Vec<Rcycle> = Vec::new();
    if k == 0 || p < k || p > n || x.is_empty() {
        return Ok(out);
    }
    let mut seen: HashSet<Vec<Vec<u16>>> = HashSet::new();
    let mut beta: Vec<usize> = Vec::with_capacity(p);
    let mut used = vec![false; n];
    let window_ok = |beta: &[usize]| {
        let d = beta.len();
        if d < k {
            return true;
        }
        let w: Vec<u16> = beta[d - k..].iter().map(|&c| c as u16).collect();
        x.contains(&w)
    };
    struct Ctx<'a, F: Fn(&[usize]) -> bool> {
        x: &'a KSet,
        p: usize,
        k: usize,
        n: usize,
        limit: usize,
        window_ok: F,
    }
    fn go<F: Fn(&[usize]) -> bool>(
        c: &Ctx<F>,
        beta: &mut Vec<usize>,
        used: &mut [bool],
        seen: &mut HashSet<Vec<Vec<u16>>>,
        out: &mut Vec<Rcycle>,
    ) -> Result<()> {
        if beta.len() == c.p {
            let rows = windows(beta, c.k);
            if rows.iter().all(|r| c.x.contains(r)) {
                let set = KSet::from_rows(c.k, c.n, rows);
                let key: Vec<Vec<u16>> = set.iter().map(|r| r.to_vec()).collect();
                if seen.insert(key) {
                    if out.len() >= c.limit {
                        return Err(Error::BudgetExceeded {
                            what: "rcycles",
                            needed: out.len() as u128 + 1,
                            budget: c.limit as u128,
                        });
                    }
                    out.push(Rcycle { cycle: beta.clone(), set });
                }
            }
            return Ok(());
        }
        for v in beta[0] + 1..c.n {
            if used[v] {
                continue;
            }
            beta.push(v);
            used[v] = true;
            if (c.window_ok)(beta) {
                go(c, beta, used, seen, out)?;
            }
            used[v] = false;
            beta.pop();
        }
        Ok(())
    }
    let ctx = Ctx { x, p, k, n, limit, window_ok };
    for start in 0..n {
        beta.clear();
        beta.push(start);
        used[start] = true;
        if (ctx.window_ok)(&beta) {
            go(&ctx, &mut beta, &mut used, &mut seen, &mut out)?;
        }
        used[start] = false;
    }
    out.sort_by(|a, b| a.set.iter().cmp(b.set.iter()));
    Ok(out)
}

/// Result of [`local_property_check`].
#[derive(Clone, Debug)]
pub struct LocalReport {
    pub p: usize,
    pub aut_order: u64,
    /// Number of (p,k)-rcycles in the set.
    pub rcycles: usize,
    /// Rcycles for which a realizing automorphism was found, with it.
    pub witnesses: Vec<(Rcycle, Permutation)>,
    /// Rcycles with no automorphism of the set having their p-cycle as a
    /// cycle.
    pub unrealized: Vec<Rcycle>,
}

impl LocalReport {
    pub fn all_realized(&self) -> bool {
        self.unrealized.is_empty()
    }
}

/// For each (p,k)-rcycle of `x`, up to `Aut(x)`, searches for `g ∈ Aut(x)`
/// having the rcycle's p-cycle among its cycles.
pub fn local_property_check(x: &KSet, p: usize, budget: SearchBudget) -> Result<LocalReport> {
    let n = x.degree();
    let aut = aut_of_kset_with(x, DEFAULT_AUT_DEGREE.max(n), budget)?;
    let aut_order = aut.order()?;
    let found = find_rcycles(x, p)?;
    let mut report = LocalReport { p, aut_order, rcycles: found.len(), witnesses: Vec::new(), unrealized: Vec::new() };
    let mut covered: HashSet<Vec<Vec<u16>>> = HashSet::new();
    let key = |s: &KSet| -> Vec<Vec<u16>> { s.iter().map(|r| r.to_vec()).collect() };
    let sets = [x.to_set()];
    let base = ColoredPairStructure::of_family(n, &sets)?;
    let constraint = FamilyConstraint::new(&sets);
    for rc in found {
        if covered.contains(&key(&rc.set)) {
            continue;
        }
        let mut queue = vec![rc.set.clone()];
        covered.insert(key(&rc.set));
        while let Some(s) = queue.pop() {
            for g in aut.generators() {
                let img = act_left(g, &s)?;
                if covered.insert(key(&img)) {
                    queue.push(img);
                }
            }
        }
        match realizing_automorphism(&base, &constraint, &rc.cycle, budget)? {
            Some(g) => report.witnesses.push((rc, g)),
            None => report.unrealized.push(rc),
        }
    }
    Ok(report)
}

/// An automorphism of the structure mapping `cycle[i]` to `cycle[i + 1]`.
fn realizing_automorphism(
    base: &ColoredPairStructure,
    constraint: &FamilyConstraint,
    cycle: &[usize],
    budget: SearchBudget,
) -> Result<Option<Permutation>> {
    let n = base.degree();
    let p = cycle.len();
    let scale = p as u32 + 1;
    if (base.colors().iter().max().copied().unwrap_or(0) as usize + 1) * scale as usize >= MAX_PAIR_COLORS {
        return Err(Error::InvalidInput("too many pair colors to tag an rcycle".into()));
    }
    let mut tag_a = vec![0u32; n];
    let mut tag_b = vec![0u32; n];
    for i in 0..p {
        tag_a[cycle[i]] = i as u32 + 1;
        tag_b[cycle[(i + 1) % p]] = i as u32 + 1;
    }
    let tagged = |tags: &[u32]| {
        ColoredPairStructure::from_fn(n, |u, v| base.color(u, v) * scale + if u == v { tags[u] } else { 0 })
    };
    let a = tagged(&tag_a)?;
    let b = tagged(&tag_b)?;
    let g = find_isomorphism(&a, &b, constraint, budget)?;
    Ok(g.filter(|g| (0..p).all(|i| g.apply(cycle[i]) == cycle[(i + 1) % p])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermGroup;
    use crate::korbit::{orbits_k, DEFAULT_TUPLE_BUDGET};
    use alloc::sync::Arc;

    fn pairs(n: usize, s: &str) -> KSet {
        KSet::from_digit_strings(n, &s.split(',').collect::<Vec<_>>()).unwrap()
    }

    /// Every subset of `x` of size p that is the orbit of a p-cycle power
    /// pattern, by brute force over all p-cycles.
    fn brute_rcycles(x: &KSet, p: usize) -> Vec<KSet> {
        let n = x.degree();
        let k = x.arity();
        let mut out: Vec<KSet> = Vec::new();
        fn subsets(n: usize, p: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == p {
                out.push(cur.clone());
                return;
            }
            for v in start..n {
                cur.push(v);
                subsets(n, p, v + 1, cur, out);
                cur.pop();
            }
        }
        let mut supports = Vec::new();
        subsets(n, p, 0, &mut Vec::new(), &mut supports);
        for s in supports {
            let mut order = s.clone();
            loop {
                if order[0] == s[0] {
                    let rows = windows(&order, k);
                    if rows.iter().all(|r| x.contains(r)) {
                        let set = KSet::from_rows(k, n, rows);
                        if !out.contains(&set) {
                            out.push(set);
                        }
                    }
                }
                if !next_permutation(&mut order) {
                    break;
                }
            }
        }
        out.sort_by(|a, b| a.iter().cmp(b.iter()));
        out
    }

    fn next_permutation(v: &mut [usize]) -> bool {
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }

    #[test]
    fn pairs_of_s3() {
        let x = pairs(3, "12,13,21,23,31,32");
        let found = find_rcycles(&x, 2).unwrap();
        assert_eq!(found.len(), 3);
        assert_eq!(found[0].set, pairs(3, "12,21"));
        let three = find_rcycles(&x, 3).unwrap();
        assert_eq!(three.len(), 2);
        assert!(three.iter().any(|r| r.set == pairs(3, "12,23,31")));
    }

    #[test]
    fn matches_brute_force() {
        for (n, gens) in [(5, vec!["(1 2 3 4 5)", "(2 5)(3 4)"]), (6, vec!["(1 4)", "(1 2 3)(4 5 6)", "(1 2)(4 5)"])] {
            let g = Arc::new(PermGroup::from_cycle_strings(n, &gens).unwrap());
            for k in 1..=3 {
                for orbit in orbits_k(&g, k, DEFAULT_TUPLE_BUDGET).unwrap() {
                    for p in [2, 3, 5] {
                        let fast: Vec<KSet> = find_rcycles(&orbit.set, p).unwrap().into_iter().map(|r| r.set).collect();
                        assert_eq!(fast, brute_rcycles(&orbit.set, p), "n={n} k={k} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn petersen_pentagons() {
        let g = super::super::tests::petersen_group();
        let g = Arc::new(g);
        let orbits = orbits_k(&g, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        let thirty = orbits.iter().find(|o| o.len() == 30).unwrap();
        let found = find_rcycles(&thirty.set, 5).unwrap();
        // The induced action of (12345) on pairs has two 5-cycles; one of
        // them, run along the 30-pair relation, must appear.
        let c = Permutation::parse_cycles(5, "(1 2 3 4 5)").unwrap();
        let pair_index = |a: usize, b: usize| {
            let (a, b) = (a.min(b), a.max(b));
            (0..a).map(|i| 4 - i).sum::<usize>() + (b - a - 1)
        };
        let mut hits = 0;
        for e in [1, 2, 3, 4] {
            let ce = c.pow(e);
            for start in [(0, 1), (0, 2)] {
                let cycle: Vec<usize> = (0..5)
                    .map(|t| {
                        let h = ce.pow(t);
                        pair_index(h.apply(start.0), h.apply(start.1))
                    })
                    .collect();
                let rows = windows(&cycle, 2);
                if rows.iter().all(|r| thirty.set.contains(r)) {
                    let set = KSet::from_rows(2, 10, rows);
                    assert!(found.iter().any(|r| r.set == set));
                    hits += 1;
                }
            }
        }
        assert!(hits > 0);
        for r in &found {
            let perm = r.permutation(10);
            assert_eq!(act_left(&perm, &r.set).unwrap(), r.set);
        }
    }

    #[test]
    fn matching_group_counterexample_subset() {
        let g = Arc::new(PermGroup::from_cycle_strings(6, &["(1 4)", "(1 2 3)(4 5 6)", "(1 2)(4 5)"]).unwrap());
        let orbits = orbits_k(&g, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        let big = orbits.iter().find(|o| o.len() == 24).unwrap();
        let target = pairs(6, "13,32,24,45,51");
        let found = find_rcycles(&big.set, 5).unwrap();
        assert!(found.iter().any(|r| r.set == target));
        let report = local_property_check(&big.set, 5, SearchBudget::default()).unwrap();
        assert_eq!(report.aut_order, 48);
        assert!(report.witnesses.is_empty());
        assert!(!report.unrealized.is_empty());
        let report = local_property_check(&big.set, 2, SearchBudget::default()).unwrap();
        assert!(report.rcycles > 0);
    }

    #[test]
    fn witnesses_are_automorphisms_with_the_cycle() {
        let x = pairs(3, "12,13,21,23,31,32");
        for p in [2, 3] {
            let report = local_property_check(&x, p, SearchBudget::default()).unwrap();
            assert!(report.all_realized());
            for (rc, g) in &report.witnesses {
                assert_eq!(act_left(g, &x).unwrap(), x);
                assert!(g.all_cycles().iter().any(|c| {
                    c.len() == p && (0..p).all(|i| g.apply(rc.cycle[i]) == rc.cycle[(i + 1) % p])
                }));
            }
        }
        let single = KSet::new(1, 1, &[[0usize]]).unwrap();
        let r = local_property_check(&single, 2, SearchBudget::default()).unwrap();
        assert_eq!(r.rcycles, 0);
        assert!(r.all_realized());
    }
}
