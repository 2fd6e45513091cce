//! Stabilizer chains by the Schreier–Sims algorithm, with uniform random
//! elements and backtrack search over base images.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `trans[v]` maps `point` to `v`, for `v` in the orbit.
    trans: Vec<Option<Permutation>>,
}

/// A base and strong generating set for a permutation group.
#[derive(Clone, Debug)]
pub struct StabChain {
    n: usize,
    prefix: Vec<usize>,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(n: usize, gens: &[Permutation]) -> Self {
        Self::with_base_prefix(n, gens, &[])
    }

    /// Builds a chain whose base starts with the points of `prefix` that
    /// are moved by the relevant stabilizers, in order.
    pub fn with_base_prefix(n: usize, gens: &[Permutation], prefix: &[usize]) -> Self {
        let mut chain = StabChain { n, prefix: prefix.to_vec(), levels: Vec::new() };
        for g in gens {
            chain.extend(g.clone());
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    /// Orbit lengths of the successive stabilizers.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// All strong generators, deduplicated.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    fn sift(&self, mut h: Permutation, from: usize) -> (Permutation, usize) {
        for j in from..self.levels.len() {
            let l = &self.levels[j];
            let img = h.apply(l.point);
            match &l.trans[img] {
                None => return (h, j),
                Some(t) => h = t.inverse().compose_unchecked(&h),
            }
        }
        let len = self.levels.len();
        (h, len)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.n {
            return false;
        }
        let (h, j) = self.sift(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    fn extend(&mut self, g: Permutation) {
        let (h, _) = self.sift(g, 0);
        if h.is_identity() {
            return;
        }
        let mut strong = self.strong_generators();
        let mut pending = Some(h);
        while let Some(h) = pending.take() {
            if self.levels.iter().all(|l| h.apply(l.point) == l.point) {
                let point = self
                    .prefix
                    .iter()
                    .copied()
                    .find(|&p| h.apply(p) != p)
                    .unwrap_or_else(|| (0..self.n).find(|&p| h.apply(p) != p).unwrap());
                self.levels.push(Level { point, gens: Vec::new(), orbit: Vec::new(), trans: Vec::new() });
            }
            strong.push(h);
            self.rebuild(&strong);
            pending = self.first_failing_schreier();
        }
    }

    fn rebuild(&mut self, strong: &[Permutation]) {
        let n = self.n;
        let base: Vec<usize> = self.levels.iter().map(|l| l.point).collect();
        for (i, level) in self.levels.iter_mut().enumerate() {
            level.gens = strong.iter().filter(|s| base[..i].iter().all(|&b| s.apply(b) == b)).cloned().collect();
            level.trans = vec![None; n];
            level.trans[level.point] = Some(Permutation::identity(n));
            level.orbit = vec![level.point];
            let mut idx = 0;
            while idx < level.orbit.len() {
                let o = level.orbit[idx];
                for gen in &level.gens {
                    let img = gen.apply(o);
                    if level.trans[img].is_none() {
                        level.trans[img] = Some(gen.compose_unchecked(level.trans[o].as_ref().unwrap()));
                        level.orbit.push(img);
                    }
                }
                idx += 1;
            }
        }
    }

    /// The sifted residue of the first Schreier generator that does not
    /// sift to the identity, if any.
    fn first_failing_schreier(&self) -> Option<Permutation> {
        for (i, level) in self.levels.iter().enumerate() {
            for &o in &level.orbit {
                let t = level.trans[o].as_ref().unwrap();
                for gen in &level.gens {
                    let through = gen.compose_unchecked(t);
                    let back = level.trans[gen.apply(o)].as_ref().unwrap();
                    let sg = back.inverse().compose_unchecked(&through);
                    if sg.is_identity() {
                        continue;
                    }
                    let (h, _) = self.sift(sg, i + 1);
                    if !h.is_identity() {
                        return Some(h);
                    }
                }
            }
        }
        None
    }

    /// A uniformly distributed element.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.n);
        for l in &self.levels {
            let o = l.orbit[rng.gen_range(0..l.orbit.len())];
            g = g.compose_unchecked(l.trans[o].as_ref().unwrap());
        }
        g
    }

    /// Depth-first search over group elements by base images. `keep`
    /// receives the assigned `(base point, image)` pairs after each new
    /// assignment and may cut the branch; `accept` decides at the leaves.
    /// Images are tried in increasing order.
    pub fn search<K, A>(&self, mut keep: K, mut accept: A, max_nodes: u64) -> Result<Option<Permutation>>
    where
        K: FnMut(&[(usize, usize)]) -> bool,
        A: FnMut(&Permutation) -> bool,
    {
        let mut assigned = Vec::with_capacity(self.levels.len());
        let mut nodes = 0u64;
        let id = Permutation::identity(self.n);
        self.search_level(0, &id, &mut assigned, &mut keep, &mut accept, &mut nodes, max_nodes)
    }

    #[allow(clippy::too_many_arguments)]
    fn search_level<K, A>(
        &self,
        i: usize,
        prefix: &Permutation,
        assigned: &mut Vec<(usize, usize)>,
        keep: &mut K,
        accept: &mut A,
        nodes: &mut u64,
        max_nodes: u64,
    ) -> Result<Option<Permutation>>
    where
        K: FnMut(&[(usize, usize)]) -> bool,
        A: FnMut(&Permutation) -> bool,
    {
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(Error::BudgetExceeded { what: "group search nodes", needed: *nodes as u128, budget: max_nodes as u128 });
        }
        if i == self.levels.len() {
            return Ok(if accept(prefix) { Some(prefix.clone()) } else { None });
        }
        let l = &self.levels[i];
        let mut options: Vec<(usize, usize)> = l.orbit.iter().map(|&o| (prefix.apply(o), o)).collect();
        options.sort_unstable();
        for (image, o) in options {
            assigned.push((l.point, image));
            if keep(assigned) {
                let next = prefix.compose_unchecked(l.trans[o].as_ref().unwrap());
                if let Some(found) = self.search_level(i + 1, &next, assigned, keep, accept, nodes, max_nodes)? {
                    assigned.pop();
                    return Ok(Some(found));
                }
            }
            assigned.pop();
        }
        Ok(None)
    }

    /// Calls `visit` on every element, stopping early when it returns false.
    pub fn for_each<F: FnMut(&Permutation) -> bool>(&self, mut visit: F) {
        fn go<F: FnMut(&Permutation) -> bool>(c: &StabChain, i: usize, prefix: &Permutation, visit: &mut F) -> bool {
            if i == c.levels.len() {
                return visit(prefix);
            }
            let l = &c.levels[i];
            for &o in &l.orbit {
                let next = prefix.compose_unchecked(l.trans[o].as_ref().unwrap());
                if !go(c, i + 1, &next, visit) {
                    return false;
                }
            }
            true
        }
        go(self, 0, &Permutation::identity(self.n), &mut visit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermGroup;
    use rand::SeedableRng;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn orders_of_classic_groups() {
        let s = PermGroup::symmetric(7);
        assert_eq!(StabChain::new(7, s.generators()).order(), 5040);
        let a = PermGroup::alternating(8);
        assert_eq!(StabChain::new(8, a.generators()).order(), 20160);
        let m = StabChain::new(6, &[p(6, "(1 4)"), p(6, "(1 2 3)(4 5 6)"), p(6, "(1 2)(4 5)")]);
        assert_eq!(m.order(), 48);
        assert_eq!(StabChain::new(4, &[]).order(), 1);
    }

    #[test]
    fn membership_and_random_elements() {
        let c = StabChain::new(5, &[p(5, "(1 2 3 4 5)"), p(5, "(2 5)(3 4)")]);
        assert_eq!(c.order(), 10);
        assert!(c.contains(&p(5, "(1 5)(2 4)")));
        assert!(!c.contains(&p(5, "(1 2)")));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            assert!(c.contains(&c.random_element(&mut rng)));
        }
        let mut count = 0;
        c.for_each(|_| {
            count += 1;
            true
        });
        assert_eq!(count, 10);
    }

    #[test]
    fn search_respects_pruning() {
        let s = StabChain::with_base_prefix(5, PermGroup::symmetric(5).generators(), &[0, 1]);
        let u = [0usize, 1];
        let found = s
            .search(
                |a| a.iter().all(|&(b, img)| u.contains(&b) == u.contains(&img)),
                |g| g.apply(0) == 1 && g.apply(1) == 0 && g.apply(2) == 3,
                10_000,
            )
            .unwrap()
            .unwrap();
        assert_eq!(found.apply(0), 1);
        let none = s.search(|_| true, |g| g.apply(0) == 0 && g.apply(1) == 0, 10_000).unwrap();
        assert!(none.is_none());
    }
}
