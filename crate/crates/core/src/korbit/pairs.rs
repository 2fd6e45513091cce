//! Decompositions of balanced multisets of pairs.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::KSet;
use crate::error::{Error, Result};

/// Expanded `(u, v)` entries with the in/out balance checked.
fn balanced_entries(m: &KSet) -> Result<Vec<(u16, u16)>> {
    if m.arity() != 2 {
        return Err(Error::InvalidInput(format!("expected a multiset of pairs, got arity {}", m.arity())));
    }
    let n = m.degree();
    let mut out_deg = vec![0i64; n];
    let mut in_deg = vec![0i64; n];
    let mut entries = Vec::new();
    for (t, c) in m.entries() {
        out_deg[t[0] as usize] += c as i64;
        in_deg[t[1] as usize] += c as i64;
        for _ in 0..c {
            entries.push((t[0], t[1]));
        }
    }
    if let Some(v) = (0..n).find(|&v| out_deg[v] != in_deg[v]) {
        return Err(Error::InvalidInput(format!(
            "unbalanced multiset: point {} occurs {} times first and {} times second",
            v + 1,
            out_deg[v],
            in_deg[v]
        )));
    }
    Ok(entries)
}

/// Splits a balanced multiset of pairs into simple directed cycles
/// `⟨u_1 u_2⟩, ⟨u_2 u_3⟩, .., ⟨u_r u_1⟩`, returned as `[u_1, .., u_r]`.
///
/// The walk always takes the smallest unused pair, starting from the
/// smallest unused pair overall; a revisited point closes a cycle.
pub fn pair_multiset_cycles(m: &KSet) -> Result<Vec<Vec<usize>>> {
    let entries = balanced_entries(m)?;
    let n = m.degree();
    // Entries are sorted, so each point's outgoing pairs are contiguous.
    let mut start = vec![0usize; n + 1];
    for &(u, _) in &entries {
        start[u as usize + 1] += 1;
    }
    for v in 0..n {
        start[v + 1] += start[v];
    }
    let mut next = start.clone();
    let mut cycles = Vec::new();
    let mut pos_in_path = vec![usize::MAX; n];
    for first in 0..entries.len() {
        let u0 = entries[first].0 as usize;
        if next[u0] > first || next[u0] == start[u0 + 1] {
            continue;
        }
        let mut path: Vec<usize> = vec![u0];
        pos_in_path[u0] = 0;
        let mut cur = u0;
        while !path.is_empty() {
            let e = next[cur];
            next[cur] += 1;
            let v = entries[e].1 as usize;
            if pos_in_path[v] != usize::MAX {
                let at = pos_in_path[v];
                let cycle: Vec<usize> = path.split_off(at);
                for &w in &cycle {
                    pos_in_path[w] = usize::MAX;
                }
                cycles.push(cycle);
                if path.is_empty() {
                    break;
                }
                // Resume from the point where the cycle was cut off.
                cur = v;
                pos_in_path[v] = path.len();
                path.push(v);
            } else {
                pos_in_path[v] = path.len();
                path.push(v);
                cur = v;
            }
        }
    }
    Ok(cycles)
}

/// Splits a multiset of pairs in which every point occurs `m` times in each
/// coordinate into `m` distributions: sets of pairs `⟨u, σ(u)⟩` for a
/// bijection `σ` of the occurring points. Each distribution is returned as
/// its sorted pair list.
pub fn pair_multiset_distributions(m: &KSet) -> Result<Vec<Vec<(usize, usize)>>> {
    let entries = balanced_entries(m)?;
    let n = m.degree();
    let mut deg = vec![0usize; n];
    for &(u, _) in &entries {
        deg[u as usize] += 1;
    }
    let points: Vec<usize> = (0..n).filter(|&v| deg[v] > 0).collect();
    let mult = points.first().map_or(0, |&v| deg[v]);
    if points.iter().any(|&v| deg[v] != mult) {
        return Err(Error::InvalidInput("pair multiset is not homogeneous".into()));
    }
    // remaining[u][v] = number of unused copies of ⟨u v⟩.
    let mut remaining = vec![vec![0u32; n]; n];
    for &(u, v) in &entries {
        remaining[u as usize][v as usize] += 1;
    }
    let mut out = Vec::new();
    for _ in 0..mult {
        let mut match_right = vec![usize::MAX; n];
        for &u in &points {
            let mut visited = vec![false; n];
            if !augment(u, &remaining, &mut match_right, &mut visited) {
                return Err(Error::InvalidInput("no perfect matching; multiset is not regular".into()));
            }
        }
        let mut dist: Vec<(usize, usize)> =
            (0..n).filter(|&v| match_right[v] != usize::MAX).map(|v| (match_right[v], v)).collect();
        dist.sort_unstable();
        for &(u, v) in &dist {
            remaining[u][v] -= 1;
        }
        out.push(dist);
    }
    Ok(out)
}

fn augment(u: usize, remaining: &[Vec<u32>], match_right: &mut [usize], visited: &mut [bool]) -> bool {
    for v in 0..remaining.len() {
        if remaining[u][v] == 0 || visited[v] {
            continue;
        }
        visited[v] = true;
        if match_right[v] == usize::MAX || augment(match_right[v], remaining, match_right, visited) {
            match_right[v] = u;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn multiset(n: usize, pairs: &[(u16, u16)]) -> KSet {
        KSet::multiset_from(2, n, pairs.iter().map(|&(a, b)| (vec![a, b], 1)).collect()).unwrap()
    }

    #[test]
    fn basic_cycles() {
        let m = multiset(3, &[(0, 1), (1, 0)]);
        assert_eq!(pair_multiset_cycles(&m).unwrap(), vec![vec![0, 1]]);
        let m = multiset(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(pair_multiset_cycles(&m).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn revisited_points_split_cycles() {
        let m = multiset(5, &[(0, 1), (1, 3), (3, 2), (2, 1), (1, 4), (4, 0)]);
        let cycles = pair_multiset_cycles(&m).unwrap();
        assert_eq!(cycles, vec![vec![1, 3, 2], vec![0, 1, 4]]);
    }

    #[test]
    fn unbalanced_is_rejected() {
        let m = multiset(3, &[(0, 1), (1, 2)]);
        assert!(pair_multiset_cycles(&m).is_err());
    }

    #[test]
    fn distributions_of_a_doubled_multiset() {
        let m = multiset(3, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)]);
        let d = pair_multiset_distributions(&m).unwrap();
        assert_eq!(d.len(), 2);
        for dist in &d {
            let mut firsts: Vec<usize> = dist.iter().map(|p| p.0).collect();
            let mut seconds: Vec<usize> = dist.iter().map(|p| p.1).collect();
            firsts.sort_unstable();
            seconds.sort_unstable();
            assert_eq!(firsts, vec![0, 1, 2]);
            assert_eq!(seconds, vec![0, 1, 2]);
        }
    }
}
