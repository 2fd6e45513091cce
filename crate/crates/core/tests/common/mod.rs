#![allow(dead_code)]

use korb_core::korbit::KSet;
use korb_core::{PermGroup, Permutation};

/// All permutations of `n` points in lexicographic image order.
pub fn all_perms(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation::from_images(&cur).unwrap());
        // next lexicographic permutation
        let mut i = n;
        loop {
            if i < 2 {
                return out;
            }
            i -= 1;
            if cur[i - 1] < cur[i] {
                break;
            }
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

pub fn apply_tuple(g: &Permutation, t: &[u16]) -> Vec<u16> {
    t.iter().map(|&c| g.apply(c as usize) as u16).collect()
}

/// `{g ∈ S_n : gX = X}` by scanning all of S_n.
pub fn brute_aut(x: &KSet) -> Vec<Permutation> {
    all_perms(x.degree()).into_iter().filter(|g| x.iter().all(|t| x.contains(&apply_tuple(g, t)))).collect()
}

/// The permutations of S_n fixing every set of the family.
pub fn brute_family_aut(sets: &[KSet], n: usize) -> Vec<Permutation> {
    all_perms(n)
        .into_iter()
        .filter(|g| sets.iter().all(|x| x.iter().all(|t| x.contains(&apply_tuple(g, t)))))
        .collect()
}

/// Closure of generators by naive repeated multiplication.
pub fn brute_elements(g: &PermGroup) -> Vec<Permutation> {
    let n = g.degree();
    let mut set = std::collections::BTreeSet::new();
    set.insert(Permutation::identity(n));
    loop {
        let mut added = Vec::new();
        for a in &set {
            for s in g.generators() {
                let p = a.compose(s).unwrap();
                if !set.contains(&p) {
                    added.push(p);
                }
            }
        }
        if added.is_empty() {
            return set.into_iter().collect();
        }
        set.extend(added);
    }
}

pub fn grp(n: usize, gens: &[&str]) -> PermGroup {
    PermGroup::from_cycle_strings(n, gens).unwrap()
}

/// The action of a group of degree 5 on the ten 2-subsets of {1..5},
/// labelled lexicographically: 1={1,2}, 2={1,3}, .., 10={4,5}.
pub fn on_pairs(g: &Permutation) -> Permutation {
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    let idx = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let images: Vec<usize> = pairs.iter().map(|&(a, b)| idx(g.apply(a), g.apply(b))).collect();
    Permutation::from_images(&images).unwrap()
}

/// The Petersen graph edges as 0-based pairs of 2-subset labels.
pub fn petersen_edges() -> Vec<(usize, usize)> {
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for i in 0..10 {
        for j in i + 1..10 {
            let (a, b) = pairs[i];
            let (c, d) = pairs[j];
            if a != c && a != d && b != c && b != d {
                out.push((i, j));
            }
        }
    }
    out
}

/// Every isomorphism `a -> b` by backtracking over S_n with adjacency
/// pruning; `map[v]` is the image of `v`.
pub fn brute_graph_isos(a: &korb_core::gi::Graph, b: &korb_core::gi::Graph) -> Vec<Vec<usize>> {
    let n = a.order();
    let mut out = Vec::new();
    if n != b.order() || a.edges().len() != b.edges().len() {
        return out;
    }
    fn go(a: &korb_core::gi::Graph, b: &korb_core::gi::Graph, map: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let v = map.len();
        if v == a.order() {
            out.push(map.clone());
            return;
        }
        for w in 0..a.order() {
            if used[w] || (0..v).any(|u| a.adjacent(u, v) != b.adjacent(map[u], w)) {
                continue;
            }
            used[w] = true;
            map.push(w);
            go(a, b, map, used, out);
            map.pop();
            used[w] = false;
        }
    }
    go(a, b, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Vertex orbits of a set of permutations given as image vectors, each
/// sorted, ordered by least element.
pub fn orbits_of_maps(n: usize, maps: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let mut class: Vec<usize> = maps.iter().map(|m| m[v]).collect();
        class.push(v);
        class.sort_unstable();
        class.dedup();
        for &w in &class {
            seen[w] = true;
        }
        out.push(class);
    }
    out
}
