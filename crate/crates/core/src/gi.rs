//! Regular 2-sets, pair-class refinement of graphs, automorphism-orbit
//! separation and isomorphism testing.
//!
//! Refinement colours every ordered pair of vertices, the diagonal
//! included. It is equivariant: colours are numbered by sorted signatures,
//! so relabeling the graph relabels the classes and nothing else. Exact
//! answers come from the automorphism search seeded with the stable
//! colours.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::aut::{automorphism_group, find_isomorphism, ColoredPairStructure, NoConstraint, SearchBudget};
use crate::error::{Error, Result};
use crate::group::Dsu;
use crate::korbit::{pair_multiset_cycles, KSet};
use crate::perm::Permutation;

/// Refinement alone is attempted up to this many vertices.
pub const MAX_REFINE_VERTICES: usize = 256;
/// Exact answers are attempted up to this many vertices.
pub const MAX_EXACT_VERTICES: usize = 64;

/// A simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Rejects loops, repeated edges and out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![false; n * n];
        let mut list = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!("edge {}-{} exceeds {} vertices", u + 1, v + 1, n)));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {}", u + 1)));
            }
            if adj[u * n + v] {
                return Err(Error::InvalidInput(format!("repeated edge {}-{}", u + 1, v + 1)));
            }
            adj[u * n + v] = true;
            adj[v * n + u] = true;
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        Ok(Graph { n, adj, edges: list })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// The symmetric set of ordered adjacent pairs.
    pub fn pair_set(&self) -> KSet {
        let n = self.n;
        let rows = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| self.adj[u * n + v]).map(move |v| vec![u as u16, v as u16]))
            .collect();
        KSet::from_rows(2, n, rows)
    }

    /// The graph with vertex `v` renamed `map(v)`.
    pub fn relabel(&self, map: &Permutation) -> Result<Graph> {
        if map.degree() != self.n {
            return Err(Error::DegreeMismatch { left: self.n, right: map.degree() });
        }
        let e: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v)| (map.apply(u), map.apply(v))).collect();
        Graph::new(self.n, &e)
    }

    /// True when `map` sends the edges of `self` exactly onto those of
    /// `other`.
    pub fn is_isomorphism(&self, other: &Graph, map: &[usize]) -> bool {
        let n = self.n;
        if other.n != n || map.len() != n || self.edges.len() != other.edges.len() {
            return false;
        }
        let mut seen = vec![false; n];
        for &m in map {
            if m >= n || seen[m] {
                return false;
            }
            seen[m] = true;
        }
        (0..n).all(|u| (0..n).all(|v| self.adjacent(u, v) == other.adjacent(map[u], map[v])))
    }

    fn structure(&self) -> ColoredPairStructure {
        let n = self.n;
        ColoredPairStructure::from_fn(n, |u, v| if u == v { 2 } else { self.adj[u * n + v] as u32 }).unwrap()
    }

    /// `self` followed by `other` on `n + m` vertices.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let mut e = self.edges.clone();
        e.extend(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        Graph::new(self.n + other.n, &e).unwrap()
    }
}

/// Which regularity condition a 2-set violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularityFailure {
    /// The multiprojection on `coord` (0 or 1) is not homogeneous: `point`
    /// occurs `count` times while `other` occurs `other_count` times.
    Inhomogeneous { coord: usize, point: usize, count: usize, other: usize, other_count: usize },
    /// The two 1-projections share `point` but differ at `witness`.
    ProjectionsDiffer { point: usize, witness: usize },
}

/// Checks the two regularity conditions for a set of pairs: homogeneous
/// multiprojections, and equal 1-projections whenever they share a point.
pub fn is_regular_2set(x: &KSet) -> Result<core::result::Result<(), RegularityFailure>> {
    if x.arity() != 2 {
        return Err(Error::InvalidInput(format!("expected a 2-set, got arity {}", x.arity())));
    }
    let n = x.degree();
    let mut counts = [vec![0usize; n], vec![0usize; n]];
    for (t, c) in x.entries() {
        counts[0][t[0] as usize] += c as usize;
        counts[1][t[1] as usize] += c as usize;
    }
    for (coord, cnt) in counts.iter().enumerate() {
        let present: Vec<usize> = (0..n).filter(|&v| cnt[v] > 0).collect();
        if let Some(&first) = present.first() {
            if let Some(&bad) = present.iter().find(|&&v| cnt[v] != cnt[first]) {
                return Ok(Err(RegularityFailure::Inhomogeneous {
                    coord,
                    point: first,
                    count: cnt[first],
                    other: bad,
                    other_count: cnt[bad],
                }));
            }
        }
    }
    let in0 = |v: usize| counts[0][v] > 0;
    let in1 = |v: usize| counts[1][v] > 0;
    if let Some(point) = (0..n).find(|&v| in0(v) && in1(v)) {
        if let Some(witness) = (0..n).find(|&v| in0(v) != in1(v)) {
            return Ok(Err(RegularityFailure::ProjectionsDiffer { point, witness }));
        }
    }
    Ok(Ok(()))
}

/// Composition order used by the cycle split at one iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Counts paths `u → w → v`.
    LeftRight,
    /// Counts paths `u ← w ← v`.
    RightLeft,
}

/// The toggling schedule `LR, RL, RL, LR, LR, RL, RL, ..`.
pub fn schedule(iteration: usize) -> Direction {
    if iteration == 0 || (iteration + 1) / 2 % 2 == 0 {
        Direction::LeftRight
    } else {
        Direction::RightLeft
    }
}

/// A colouring of all ordered pairs of vertices. Diagonal colours are the
/// vertex classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementState {
    n: usize,
    colors: Vec<u32>,
    pub iteration: usize,
    pub individualized: Vec<usize>,
    pub stable: bool,
    /// Direction used at each completed iteration.
    pub log: Vec<Direction>,
}

impl RefinementState {
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

    pub fn class_count(&self) -> usize {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    /// Vertex classes, each sorted, ordered by colour.
    pub fn vertex_classes(&self) -> Vec<Vec<usize>> {
        classes_by_color((0..self.n).map(|v| (self.color(v, v), v)))
    }

    /// Off-diagonal pair classes, ordered by colour.
    pub fn pair_classes(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.n;
        classes_by_color((0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (self.colors[u * n + v], (u, v)))))
    }

    /// The classes as 2-sets.
    pub fn pair_sets(&self) -> Vec<KSet> {
        self.pair_classes()
            .into_iter()
            .map(|c| KSet::from_rows(2, self.n, c.into_iter().map(|(u, v)| vec![u as u16, v as u16]).collect()))
            .collect()
    }

    /// Colours `v` apart from the rest of its class.
    pub fn individualize(&self, v: usize) -> RefinementState {
        let n = self.n;
        let fresh = self.colors.iter().max().map_or(0, |&m| m + 1);
        let mut colors = self.colors.clone();
        colors[v * n + v] = fresh;
        let mut s = self.clone();
        s.colors = renumber(&colors, |i| (colors[i], 0, 0));
        s.individualized.push(v);
        s.stable = false;
        s
    }
}

fn classes_by_color<T: Ord + Copy, I: Iterator<Item = (u32, T)>>(items: I) -> Vec<Vec<T>> {
    let mut v: Vec<(u32, T)> = items.collect();
    v.sort_unstable();
    let mut out: Vec<Vec<T>> = Vec::new();
    let mut last = None;
    for (c, t) in v {
        if last != Some(c) {
            out.push(Vec::new());
            last = Some(c);
        }
        out.last_mut().unwrap().push(t);
    }
    out
}

/// Dense colours in the order of the sorted signatures.
fn renumber<S: Ord + Clone, F: Fn(usize) -> S>(colors: &[u32], sig: F) -> Vec<u32> {
    let sigs: Vec<S> = (0..colors.len()).map(&sig).collect();
    let mut sorted: Vec<S> = sigs.clone();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(s).unwrap() as u32).collect()
}

/// One regularity split: pairs by their own colour and the vertex colours
/// of their ends, vertices by their multiset of incident pair colours.
fn regularity_split(n: usize, colors: &[u32]) -> Vec<u32> {
    let vertex_sig: Vec<Vec<(u32, u32)>> = (0..n)
        .map(|u| {
            let mut s: Vec<(u32, u32)> =
                (0..n).filter(|&v| v != u).map(|v| (colors[u * n + v], colors[v * n + u])).collect();
            s.sort_unstable();
            s
        })
        .collect();
    let vrank = {
        let mut keys: Vec<(u32, &Vec<(u32, u32)>)> = (0..n).map(|u| (colors[u * n + u], &vertex_sig[u])).collect();
        keys.sort();
        keys.dedup();
        let keys: Vec<(u32, Vec<(u32, u32)>)> = keys.into_iter().map(|(c, s)| (c, s.clone())).collect();
        (0..n)
            .map(|u| keys.binary_search(&(colors[u * n + u], vertex_sig[u].clone())).unwrap() as u32)
            .collect::<Vec<u32>>()
    };
    renumber(colors, |i| {
        let (u, v) = (i / n, i % n);
        (u != v, colors[i], vrank[u], vrank[v])
    })
}

/// One cycle split: each pair by the multiset of colour pairs along the
/// two-step paths between its ends.
fn composition_split(n: usize, colors: &[u32], dir: Direction) -> Vec<u32> {
    renumber(colors, |i| {
        let (u, v) = (i / n, i % n);
        let mut paths: Vec<(u32, u32)> = (0..n)
            .map(|w| match dir {
                Direction::LeftRight => (colors[u * n + w], colors[w * n + v]),
                Direction::RightLeft => (colors[w * n + u], colors[v * n + w]),
            })
            .collect();
        paths.sort_unstable();
        (colors[i], paths)
    })
}

/// Edge, non-edge and diagonal classes, split until each is regular.
pub fn initial_partition(g: &Graph) -> Result<RefinementState> {
    let n = g.order();
    if n > MAX_REFINE_VERTICES {
        return Err(Error::DegreeTooLarge { what: "refinement", degree: n, limit: MAX_REFINE_VERTICES });
    }
    let mut colors: Vec<u32> =
        (0..n * n).map(|i| if i / n == i % n { 0 } else if g.adj[i] { 1 } else { 2 }).collect();
    colors = renumber(&colors, |i| colors[i]);
    loop {
        let next = regularity_split(n, &colors);
        if distinct(&next) == distinct(&colors) {
            break;
        }
        colors = next;
    }
    Ok(RefinementState { n, colors, iteration: 0, individualized: Vec::new(), stable: false, log: Vec::new() })
}

fn distinct(c: &[u32]) -> usize {
    c.iter().max().map_or(0, |&m| m as usize + 1)
}

/// One refinement step: a regularity split followed by a cycle split in the
/// scheduled direction. Never merges classes.
pub fn refine_once(s: &RefinementState) -> RefinementState {
    let n = s.n;
    let dir = schedule(s.iteration);
    let a = regularity_split(n, &s.colors);
    let b = composition_split(n, &a, dir);
    let mut out = s.clone();
    out.stable = distinct(&b) == distinct(&s.colors);
    out.colors = b;
    out.iteration += 1;
    out.log.push(dir);
    out
}

/// Refines until two consecutive steps (both directions) change nothing.
pub fn refine_to_stable(s: &RefinementState) -> RefinementState {
    let mut cur = s.clone();
    let mut quiet = 0;
    let limit = cur.n * cur.n + 2;
    for _ in 0..limit {
        let before = distinct(&cur.colors);
        cur = refine_once(&cur);
        if distinct(&cur.colors) == before {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    cur.stable = true;
    cur
}

/// The composition multiset of classes `a` then `b`: `⟨u v⟩` counted once
/// per `w` with `⟨u w⟩ ∈ a` and `⟨w v⟩ ∈ b`.
pub fn composition_multiset(a: &KSet, b: &KSet) -> Result<KSet> {
    if a.arity() != 2 || b.arity() != 2 || a.degree() != b.degree() {
        return Err(Error::InvalidInput("composition needs two 2-sets of one degree".into()));
    }
    let n = a.degree();
    let mut out_b: Vec<Vec<u16>> = vec![Vec::new(); n];
    for t in b.iter() {
        out_b[t[0] as usize].push(t[1]);
    }
    let mut counts: hashbrown::HashMap<(u16, u16), u32> = hashbrown::HashMap::new();
    for t in a.iter() {
        for &v in &out_b[t[1] as usize] {
            *counts.entry((t[0], v)).or_insert(0) += 1;
        }
    }
    let entries = counts.into_iter().map(|((u, v), c)| (vec![u, v], c)).collect();
    KSet::multiset_from(2, n, entries)
}

/// The cycles of a balanced composition multiset.
pub fn composition_cycles(a: &KSet, b: &KSet) -> Result<Vec<Vec<usize>>> {
    pair_multiset_cycles(&composition_multiset(a, b)?)
}

/// How far [`orbit_partition`] got.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    /// Exact orbits; `refinement_exact` tells whether the stable
    /// refinement already equalled them.
    Exact { refinement_exact: bool },
    /// The search ran out of budget; only the stable refinement is known.
    RefinementStableUnverified,
}

#[derive(Clone, Debug)]
pub struct OrbitPartition {
    pub status: OrbitStatus,
    pub vertex_classes: Vec<Vec<usize>>,
    /// Sizes of the off-diagonal pair classes, ascending.
    pub pair_class_sizes: Vec<usize>,
    pub pair_classes: Vec<Vec<(usize, usize)>>,
    /// Generators of the automorphism group, when exact.
    pub generators: Vec<Permutation>,
    pub refined: RefinementState,
}

/// Vertex and pair orbits of `Aut(g)`.
pub fn orbit_partition(g: &Graph, budget: SearchBudget) -> Result<OrbitPartition> {
    let n = g.order();
    let refined = refine_to_stable(&initial_partition(g)?);
    let unverified = |refined: RefinementState| {
        let pair_classes = refined.pair_classes();
        let mut pair_class_sizes: Vec<usize> = pair_classes.iter().map(|c| c.len()).collect();
        pair_class_sizes.sort_unstable();
        OrbitPartition {
            status: OrbitStatus::RefinementStableUnverified,
            vertex_classes: refined.vertex_classes(),
            pair_class_sizes,
            pair_classes,
            generators: Vec::new(),
            refined,
        }
    };
    if n > MAX_EXACT_VERTICES {
        return Ok(unverified(refined));
    }
    let vertex_colors: Vec<u32> = (0..n).map(|v| refined.color(v, v)).collect();
    let aut = match automorphism_group(&g.structure(), Some(&vertex_colors), &NoConstraint, budget) {
        Ok(a) => a,
        Err(Error::BudgetExceeded { .. }) => return Ok(unverified(refined)),
        Err(e) => return Err(e),
    };
    let mut vdsu = Dsu::new(n);
    let mut pdsu = Dsu::new(n * n);
    for s in &aut.generators {
        for u in 0..n {
            vdsu.union(u, s.apply(u));
            for v in 0..n {
                pdsu.union(u * n + v, s.apply(u) * n + s.apply(v));
            }
        }
    }
    let vertex_classes = classes_by_color((0..n).map(|v| (vdsu.find(v) as u32, v)));
    let mut vertex_classes = vertex_classes;
    vertex_classes.sort();
    let mut pair_classes = classes_by_color(
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).map(|(u, v)| (pdsu.find(u * n + v) as u32, (u, v))),
    );
    pair_classes.sort();
    let mut pair_class_sizes: Vec<usize> = pair_classes.iter().map(|c| c.len()).collect();
    pair_class_sizes.sort_unstable();
    let mut refined_vertices = refined.vertex_classes();
    refined_vertices.sort();
    let mut refined_pairs = refined.pair_classes();
    refined_pairs.sort();
    let refinement_exact = refined_vertices == vertex_classes && refined_pairs == pair_classes;
    Ok(OrbitPartition {
        status: OrbitStatus::Exact { refinement_exact },
        vertex_classes,
        pair_class_sizes,
        pair_classes,
        generators: aut.generators,
        refined,
    })
}

/// Answer of [`isomorphic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoAnswer {
    /// `bijection[u]` is the image of vertex `u`; verified on every pair.
    Yes { bijection: Vec<usize> },
    No { reason: String },
    Undecided,
}

/// Decides whether two graphs are isomorphic. The graphs are refined
/// together as one disjoint union; differing colour counts on the two
/// sides prove non-isomorphism, and otherwise the exact search between the
/// refined sides decides.
pub fn isomorphic(a: &Graph, b: &Graph, budget: SearchBudget) -> Result<IsoAnswer> {
    let n = a.order();
    if n != b.order() {
        return Ok(IsoAnswer::No { reason: format!("vertex counts {} and {}", n, b.order()) });
    }
    if a.edges.len() != b.edges.len() {
        return Ok(IsoAnswer::No { reason: format!("edge counts {} and {}", a.edges.len(), b.edges.len()) });
    }
    let union = a.disjoint_union(b);
    let refined = refine_to_stable(&initial_partition(&union)?);
    let m = 2 * n;
    let side = |lo: usize| {
        let mut h: Vec<u32> = (lo..lo + n)
            .flat_map(|u| (lo..lo + n).map(move |v| (u, v)))
            .map(|(u, v)| refined.colors[u * m + v])
            .collect();
        h.sort_unstable();
        h
    };
    if side(0) != side(n) {
        return Ok(IsoAnswer::No { reason: String::from("refined pair colour counts differ") });
    }
    if n > MAX_EXACT_VERTICES {
        return Ok(IsoAnswer::Undecided);
    }
    let restrict = |lo: usize| ColoredPairStructure::from_fn(n, |u, v| refined.colors[(u + lo) * m + v + lo]);
    let sa = restrict(0)?;
    let sb = restrict(n)?;
    match find_isomorphism(&sa, &sb, &NoConstraint, budget) {
        Ok(Some(g)) => {
            let bijection = g.images();
            if a.is_isomorphism(b, &bijection) {
                Ok(IsoAnswer::Yes { bijection })
            } else {
                Err(Error::InvalidInput("isomorphism search returned a map that is not an isomorphism".into()))
            }
        }
        Ok(None) => Ok(IsoAnswer::No { reason: String::from("exhaustive search found no isomorphism") }),
        Err(Error::BudgetExceeded { .. }) => Ok(IsoAnswer::Undecided),
        Err(e) => Err(e),
    }
}
