//! Automorphism groups of k-sets, k-closures and k-definedness.

mod closure;
pub mod search;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::elements::RowSet;
use crate::error::{Error, Result};
use crate::korbit::KSet;
use crate::perm::Permutation;

pub use closure::{
    aut_of_kset, aut_of_kset_with, classify_k_defined, group_intersection, k_closure, k_closure_with, normality_witness,
    right_family, right_family_literal, ClosureMode, KClosureReport, NormalityReport, DEFAULT_AUT_DEGREE,
};
pub use search::{automorphism_group, automorphism_orbits, find_isomorphism, AutGroup, Constraint, NoConstraint, SearchBudget};

/// Largest number of distinct pair colors.
pub const MAX_PAIR_COLORS: usize = 1 << 21;

/// A coloring of all ordered pairs `(u, v)` of `n` points, loops included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredPairStructure {
    n: usize,
    colors: Vec<u32>,
}

impl ColoredPairStructure {
    /// `colors[u * n + v]` is the color of `(u, v)`.
    pub fn new(n: usize, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n * n {
            return Err(Error::InvalidInput(format!("expected {} pair colors, got {}", n * n, colors.len())));
        }
        if colors.iter().any(|&c| c as usize >= MAX_PAIR_COLORS) {
            return Err(Error::InvalidInput("pair color id too large".into()));
        }
        Ok(ColoredPairStructure { n, colors })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> u32>(n: usize, mut f: F) -> Result<Self> {
        let mut colors = Vec::with_capacity(n * n);
        for u in 0..n {
            for v in 0..n {
                colors.push(f(u, v));
            }
        }
        Self::new(n, colors)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn color(&self, u: usize, v: usize) -> u32 {
        self.colors[u * self.n + v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// True when `g` maps every pair to a pair of the same color.
    pub fn preserved_by(&self, g: &Permutation) -> bool {
        let n = self.n;
        (0..n).all(|u| (0..n).all(|v| self.color(u, v) == self.color(g.apply(u), g.apply(v))))
    }

    /// The pair invariant of a family of k-sets: the color of `(u, v)` is
    /// the multiset of `(set, i, j)` with some tuple `t` of that set having
    /// `t_i = u`, `t_j = v`, counted with multiplicity.
    pub fn of_family(n: usize, sets: &[KSet]) -> Result<Self> {
        let mut keys: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n * n];
        for (s, x) in sets.iter().enumerate() {
            let k = x.arity();
            for t in x.iter() {
                for i in 0..k {
                    for j in 0..k {
                        let key = ((s * k + i) * k + j) as u32;
                        keys[t[i] as usize * n + t[j] as usize].push((key, 1));
                    }
                }
            }
        }
        let mut ids: BTreeMap<Vec<(u32, u32)>, u32> = BTreeMap::new();
        let mut compressed = Vec::with_capacity(n * n);
        for mut entry in keys {
            entry.sort_unstable();
            let mut merged: Vec<(u32, u32)> = Vec::with_capacity(entry.len());
            for (key, c) in entry {
                match merged.last_mut() {
                    Some((k2, c2)) if *k2 == key => *c2 += c,
                    _ => merged.push((key, c)),
                }
            }
            compressed.push(merged);
        }
        for sig in &compressed {
            let next = ids.len() as u32;
            ids.entry(sig.clone()).or_insert(next);
        }
        // Renumber by signature order so equal families give equal colorings.
        let rank: BTreeMap<&Vec<(u32, u32)>, u32> = ids.keys().enumerate().map(|(i, k)| (k, i as u32)).collect();
        let colors = compressed.iter().map(|s| rank[s]).collect();
        Self::new(n, colors)
    }
}

/// Membership constraint for a family of k-sets: every tuple must map into
/// the set it came from, and tuples outside the family must stay outside.
pub struct FamilyConstraint {
    arity: usize,
    index: RowSet,
    set_of: Vec<u32>,
    prefix_checks: bool,
}

impl FamilyConstraint {
    pub fn new(sets: &[KSet]) -> Self {
        let arity = sets.first().map_or(0, |s| s.arity());
        let total = sets.iter().map(|s| s.len()).sum();
        let mut index = RowSet::with_capacity(arity, total);
        let mut set_of = Vec::with_capacity(total);
        for (s, x) in sets.iter().enumerate() {
            for t in x.iter() {
                let (_, fresh) = index.insert(t);
                if fresh {
                    set_of.push(s as u32);
                }
            }
        }
        FamilyConstraint { arity, index, set_of, prefix_checks: (2..=4).contains(&arity) }
    }

    #[inline]
    fn class(&self, t: &[u16]) -> Option<u32> {
        self.index.index_of(t).map(|i| self.set_of[i])
    }

    fn tuples_with_last(&self, left: &[u16], right: &[u16]) -> bool {
        let k = self.arity;
        let d = left.len();
        if d < k {
            return true;
        }
        let newest = d - 1;
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        let mut tl = vec![0u16; k];
        let mut tr = vec![0u16; k];
        fn rec(
            c: &FamilyConstraint,
            left: &[u16],
            right: &[u16],
            newest: usize,
            chosen: &mut Vec<usize>,
            tl: &mut [u16],
            tr: &mut [u16],
        ) -> bool {
            let k = c.arity;
            if chosen.len() == k {
                if !chosen.contains(&newest) {
                    return true;
                }
                for (slot, &i) in chosen.iter().enumerate() {
                    tl[slot] = left[i];
                    tr[slot] = right[i];
                }
                return c.class(tl) == c.class(tr);
            }
            for i in 0..left.len() {
                if chosen.contains(&i) {
                    continue;
                }
                chosen.push(i);
                let ok = rec(c, left, right, newest, chosen, tl, tr);
                chosen.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
        rec(self, left, right, newest, &mut chosen, &mut tl, &mut tr)
    }
}

impl Constraint for FamilyConstraint {
    fn prefix_ok(&self, left: &[u16], right: &[u16]) -> bool {
        !self.prefix_checks || self.tuples_with_last(left, right)
    }

    fn accept(&self, g: &Permutation) -> bool {
        let mut buf = vec![0u16; self.arity];
        for i in 0..self.index.len() {
            let t = self.index.row(i);
            for (slot, &c) in buf.iter_mut().zip(t) {
                *slot = g.raw()[c as usize];
            }
            if self.class(&buf) != Some(self.set_of[i]) {
                return false;
            }
        }
        true
    }
}
