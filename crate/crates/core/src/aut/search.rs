//! Individualization-refinement backtracking over colored pair structures.

use alloc::vec;
use alloc::vec::Vec;

use super::ColoredPairStructure;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Extra conditions a candidate map must satisfy beyond preserving pair
/// colors. `prefix_ok` may reject partial maps early; `accept` decides
/// complete ones.
pub trait Constraint {
    /// `left[i] ↦ right[i]`; the last entry is the newest.
    fn prefix_ok(&self, _left: &[u16], _right: &[u16]) -> bool {
        true
    }
    fn accept(&self, g: &Permutation) -> bool;
}

/// Accepts every pair-color-preserving map.
pub struct NoConstraint;

impl Constraint for NoConstraint {
    fn accept(&self, _g: &Permutation) -> bool {
        true
    }
}

/// Node budget for one search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 5_000_000 }
    }
}

/// Generators and basic orbit lengths of an automorphism group found by
/// [`automorphism_group`].
#[derive(Clone, Debug)]
pub struct AutGroup {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    /// `orbit_lengths[i]` is the orbit length of point `i` under the
    /// pointwise stabilizer of `0..i`.
    pub orbit_lengths: Vec<usize>,
    pub nodes: u64,
}

impl AutGroup {
    /// The group order, when it fits in `u128`.
    pub fn order(&self) -> Option<u128> {
        self.orbit_lengths.iter().try_fold(1u128, |acc, &l| acc.checked_mul(l as u128))
    }
}

struct Side<'a> {
    s: &'a ColoredPairStructure,
}

impl Side<'_> {
    #[inline]
    fn key(&self, v: usize, w: usize, color_w: u32) -> u64 {
        ((self.s.color(v, w) as u64) << 43) | ((self.s.color(w, v) as u64) << 22) | color_w as u64
    }
}

/// Refines both colorings jointly. Returns the number of colors, or `None`
/// when the two sides stop matching.
fn refine(l: &Side, r: &Side, cl: &mut [u32], cr: &mut [u32]) -> Option<usize> {
    let n = cl.len();
    let mut count = distinct(cl);
    if count != distinct(cr) || !same_histogram(cl, cr) {
        return None;
    }
    let mut buf_l: Vec<(u32, Vec<u64>)> = Vec::with_capacity(n);
    let mut buf_r: Vec<(u32, Vec<u64>)> = Vec::with_capacity(n);
    loop {
        if count == n {
            return Some(count);
        }
        buf_l.clear();
        buf_r.clear();
        for v in 0..n {
            let mut sig_l: Vec<u64> = (0..n).filter(|&w| w != v).map(|w| l.key(v, w, cl[w])).collect();
            sig_l.sort_unstable();
            buf_l.push((cl[v], sig_l));
            let mut sig_r: Vec<u64> = (0..n).filter(|&w| w != v).map(|w| r.key(v, w, cr[w])).collect();
            sig_r.sort_unstable();
            buf_r.push((cr[v], sig_r));
        }
        let mut order_l: Vec<usize> = (0..n).collect();
        order_l.sort_by(|&a, &b| buf_l[a].cmp(&buf_l[b]));
        let mut order_r: Vec<usize> = (0..n).collect();
        order_r.sort_by(|&a, &b| buf_r[a].cmp(&buf_r[b]));
        for i in 0..n {
            if buf_l[order_l[i]] != buf_r[order_r[i]] {
                return None;
            }
        }
        let mut next = 0u32;
        let mut new_l = vec![0u32; n];
        let mut new_r = vec![0u32; n];
        for i in 0..n {
            if i > 0 && buf_l[order_l[i]] != buf_l[order_l[i - 1]] {
                next += 1;
            }
            new_l[order_l[i]] = next;
            new_r[order_r[i]] = next;
        }
        let new_count = next as usize + 1;
        cl.copy_from_slice(&new_l);
        cr.copy_from_slice(&new_r);
        if new_count == count {
            return Some(count);
        }
        count = new_count;
    }
}

fn distinct(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn same_histogram(a: &[u32], b: &[u32]) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

/// Canonical dense relabeling preserving the order of color values.
fn normalize(c: &mut [u32]) {
    let mut vals = c.to_vec();
    vals.sort_unstable();
    vals.dedup();
    for x in c.iter_mut() {
        *x = vals.binary_search(x).unwrap() as u32;
    }
}

struct Searcher<'a, C: Constraint + ?Sized> {
    left: Side<'a>,
    right: Side<'a>,
    constraint: &'a C,
    budget: SearchBudget,
    nodes: u64,
}

impl<C: Constraint + ?Sized> Searcher<'_, C> {
    fn dfs(&mut self, cl: &mut Vec<u32>, cr: &mut Vec<u32>, pl: &mut Vec<u16>, pr: &mut Vec<u16>) -> Result<Option<Permutation>> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Error::BudgetExceeded {
                what: "automorphism search",
                needed: self.nodes as u128,
                budget: self.budget.max_nodes as u128,
            });
        }
        let count = match refine(&self.left, &self.right, cl, cr) {
            Some(c) => c,
            None => return Ok(None),
        };
        let n = cl.len();
        if count == n {
            let mut img = vec![0usize; n];
            let mut by_color = vec![0usize; n];
            for (w, &c) in cr.iter().enumerate() {
                by_color[c as usize] = w;
            }
            for v in 0..n {
                img[v] = by_color[cl[v] as usize];
            }
            for v in 0..n {
                for w in 0..n {
                    if self.left.s.color(v, w) != self.right.s.color(img[v], img[w]) {
                        return Ok(None);
                    }
                }
            }
            let g = Permutation::from_images(&img).expect("discrete colorings give a bijection");
            return Ok(if self.constraint.accept(&g) { Some(g) } else { None });
        }
        let target = target_cell(cl, count);
        let v = (0..n).find(|&v| cl[v] == target).unwrap();
        let candidates: Vec<usize> = (0..n).filter(|&w| cr[w] == target).collect();
        let fresh = count as u32;
        for w in candidates {
            let mut cl2 = cl.clone();
            let mut cr2 = cr.clone();
            cl2[v] = fresh;
            cr2[w] = fresh;
            pl.push(v as u16);
            pr.push(w as u16);
            let result = if self.constraint.prefix_ok(pl, pr) { self.dfs(&mut cl2, &mut cr2, pl, pr)? } else { None };
            pl.pop();
            pr.pop();
            if result.is_some() {
                return Ok(result);
            }
        }
        Ok(None)
    }
}

/// The smallest nonsingleton cell, ties broken by color.
fn target_cell(c: &[u32], count: usize) -> u32 {
    let mut sizes = vec![0usize; count];
    for &x in c {
        sizes[x as usize] += 1;
    }
    let mut best = None;
    for (color, &size) in sizes.iter().enumerate() {
        if size > 1 && best.map_or(true, |(s, _)| size < s) {
            best = Some((size, color));
        }
    }
    best.unwrap().1 as u32
}

fn initial_colors(s: &ColoredPairStructure, vertex_colors: Option<&[u32]>) -> Vec<u32> {
    let n = s.degree();
    let mut c: Vec<u32> = (0..n)
        .map(|v| {
            let vc = vertex_colors.map_or(0, |vc| vc[v]);
            (vc << 16) | s.color(v, v)
        })
        .collect();
    normalize(&mut c);
    c
}

/// Searches for an isomorphism `g` with `color_b(g u, g v) = color_a(u, v)`
/// for all pairs that also satisfies the constraint.
pub fn find_isomorphism<C: Constraint + ?Sized>(
    a: &ColoredPairStructure,
    b: &ColoredPairStructure,
    constraint: &C,
    budget: SearchBudget,
) -> Result<Option<Permutation>> {
    if a.degree() != b.degree() {
        return Ok(None);
    }
    let mut searcher = Searcher { left: Side { s: a }, right: Side { s: b }, constraint, budget, nodes: 0 };
    let mut cl = initial_colors(a, None);
    let mut cr = initial_colors(b, None);
    if joint_normalize(&a_loops(a), &a_loops(b), &mut cl, &mut cr).is_none() {
        return Ok(None);
    }
    searcher.dfs(&mut cl, &mut cr, &mut Vec::new(), &mut Vec::new())
}

fn a_loops(s: &ColoredPairStructure) -> Vec<u32> {
    (0..s.degree()).map(|v| s.color(v, v)).collect()
}

/// Relabels loop colors of both sides with one shared dense numbering.
fn joint_normalize(la: &[u32], lb: &[u32], cl: &mut [u32], cr: &mut [u32]) -> Option<()> {
    let mut vals: Vec<u32> = la.iter().chain(lb).copied().collect();
    vals.sort_unstable();
    vals.dedup();
    for (i, &x) in la.iter().enumerate() {
        cl[i] = vals.binary_search(&x).unwrap() as u32;
    }
    for (i, &x) in lb.iter().enumerate() {
        cr[i] = vals.binary_search(&x).unwrap() as u32;
    }
    normalize_joint(cl, cr)
}

fn normalize_joint(cl: &mut [u32], cr: &mut [u32]) -> Option<()> {
    if !same_histogram(cl, cr) {
        return None;
    }
    let mut vals = cl.to_vec();
    vals.sort_unstable();
    vals.dedup();
    for x in cl.iter_mut().chain(cr.iter_mut()) {
        *x = vals.binary_search(x).unwrap() as u32;
    }
    Some(())
}

/// The automorphism group of `s` subject to `constraint`, as generators of
/// the stabilizer chain along the base `0, 1, .., n-1`.
pub fn automorphism_group<C: Constraint + ?Sized>(
    s: &ColoredPairStructure,
    vertex_colors: Option<&[u32]>,
    constraint: &C,
    budget: SearchBudget,
) -> Result<AutGroup> {
    let n = s.degree();
    let base = initial_colors(s, vertex_colors);
    let mut gens: Vec<Permutation> = Vec::new();
    let mut orbit_lengths = vec![1usize; n];
    let mut searcher = Searcher { left: Side { s }, right: Side { s }, constraint, budget, nodes: 0 };
    for level in (0..n).rev() {
        let mut fixed = base.clone();
        let offset = n as u32 + 1;
        for (j, slot) in fixed.iter_mut().enumerate().take(level) {
            *slot = offset + j as u32;
        }
        normalize(&mut fixed);
        let mut tmp = fixed.clone();
        let count = refine(&searcher.left, &searcher.right, &mut fixed, &mut tmp).expect("self-isomorphic");
        let cell: Vec<usize> = (0..n).filter(|&w| fixed[w] == fixed[level]).collect();
        if cell.len() == 1 {
            continue;
        }
        let mut orbit = orbit_of(level, &gens, n);
        let prefix: Vec<u16> = (0..level as u16).collect();
        for &gamma in &cell {
            if orbit[gamma] {
                continue;
            }
            let mut cl = fixed.clone();
            let mut cr = fixed.clone();
            cl[level] = count as u32;
            cr[gamma] = count as u32;
            let mut pl = prefix.clone();
            let mut pr = prefix.clone();
            pl.push(level as u16);
            pr.push(gamma as u16);
            if !constraint.prefix_ok(&pl, &pr) {
                continue;
            }
            if let Some(g) = searcher.dfs(&mut cl, &mut cr, &mut pl, &mut pr)? {
                gens.push(g);
                orbit = orbit_of(level, &gens, n);
            }
        }
        orbit_lengths[level] = orbit.iter().filter(|&&x| x).count();
    }
    Ok(AutGroup { degree: n, generators: gens, orbit_lengths, nodes: searcher.nodes })
}

fn orbit_of(v: usize, gens: &[Permutation], n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[v] = true;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Point orbits of the automorphism group of `s` (subject to
/// `constraint`), as a class index per point.
pub fn automorphism_orbits<C: Constraint + ?Sized>(
    s: &ColoredPairStructure,
    vertex_colors: Option<&[u32]>,
    constraint: &C,
    budget: SearchBudget,
) -> Result<(Vec<usize>, AutGroup)> {
    let aut = automorphism_group(s, vertex_colors, constraint, budget)?;
    let n = s.degree();
    let mut class = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if class[v] == usize::MAX {
            for (w, inside) in orbit_of(v, &aut.generators, n).into_iter().enumerate() {
                if inside {
                    class[w] = next;
                }
            }
            next += 1;
        }
    }
    Ok((class, aut))
}
