//! Structural classification of k-orbits: base components of cyclic
//! orbits, rcycles, automorphic subspaces, coherence and regular elements.

mod coherence;
mod decompose;
mod polycirc;
mod rcycles;
pub mod subgroups;

use alloc::vec;
use alloc::vec::Vec;

use crate::aut::{automorphism_group, ColoredPairStructure, NoConstraint, SearchBudget};
use crate::error::{Error, Result};
use crate::group::{Dsu, PermGroup};
use crate::perm::Permutation;

pub use coherence::{
    check_not_divides, coherence_classify, coherence_classify_with, is_rorbit, k_blocks, CoherenceOptions, CoherenceReport,
    support_verdict, Elementary, NotDividesRecord, NotDividesVerdict, Verdict,
};
pub use decompose::{concatenate, decompose_cycle_orbit, reassemble, BaseComponent, BaseKind};
pub use polycirc::{
    incoherent_normal_subgroup, polycirculant_witness, polycirculant_witness_with, qgdn_check, BlockSource, PolycircMethod,
    PolycircOptions, PolycircOutcome, PolycircWitness, QgdnReport, QgdnVerdict,
};
pub use rcycles::{find_rcycles, find_rcycles_with, local_property_check, LocalReport, Rcycle};

/// Groups at most this large are filtered element by element.
const ELEMENT_SCAN_LIMIT: u64 = 5_000;

/// Colors each ordered pair, loops included, by its 2-orbit under `g`.
pub fn orbital_coloring(g: &PermGroup) -> ColoredPairStructure {
    let n = g.degree();
    let mut dsu = Dsu::new(n * n);
    for s in g.generators() {
        for u in 0..n {
            for v in 0..n {
                dsu.union(u * n + v, s.apply(u) * n + s.apply(v));
            }
        }
    }
    let mut ids = vec![u32::MAX; n * n];
    let mut next = 0u32;
    let colors: Vec<u32> = (0..n * n)
        .map(|i| {
            let r = dsu.find(i);
            if ids[r] == u32::MAX {
                ids[r] = next;
                next += 1;
            }
            ids[r]
        })
        .collect();
    ColoredPairStructure::new(n, colors).unwrap()
}

/// The 2-closure of `g`: all permutations preserving every 2-orbit.
pub fn two_closure(g: &PermGroup, budget: SearchBudget) -> Result<PermGroup> {
    let aut = automorphism_group(&orbital_coloring(g), None, &NoConstraint, budget)?;
    let group = PermGroup::new(g.degree(), aut.generators.clone())?;
    Ok(match aut.order().and_then(|o| u64::try_from(o).ok()) {
        Some(o) => group.with_known_order(o),
        None => group,
    })
}

/// True when the setwise stabilizer of `u` in `g` is transitive on `u`.
pub fn is_automorphic(g: &PermGroup, u: &[usize]) -> Result<bool> {
    let n = g.degree();
    if u.iter().any(|&x| x >= n) {
        return Err(Error::InvalidInput("subspace point exceeds degree".into()));
    }
    let mut inside = vec![false; n];
    for &x in u {
        inside[x] = true;
    }
    let members: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
    if members.len() <= 1 {
        return Ok(true);
    }
    let start = members[0];
    let stabilizes = |h: &Permutation| members.iter().all(|&x| inside[h.apply(x)]);
    if g.order()? <= ELEMENT_SCAN_LIMIT {
        let mut reached = vec![false; n];
        for h in g.elements()?.iter() {
            if stabilizes(&h) {
                reached[h.apply(start)] = true;
            }
        }
        return Ok(members.iter().all(|&x| reached[x]));
    }
    automorphic_by_search(g, &inside, members)
}

fn automorphic_by_search(g: &PermGroup, inside: &[bool], members: Vec<usize>) -> Result<bool> {
    let n = g.degree();
    let start = members[0];
    let stabilizes = |h: &Permutation| members.iter().all(|&x| inside[h.apply(x)]);
    let mut prefix = members.clone();
    prefix.extend((0..n).filter(|&x| !inside[x]));
    let chain = g.chain_with_base(&prefix);
    let mut found: Vec<Permutation> = Vec::new();
    let mut orbit = vec![start];
    let mut in_orbit = vec![false; n];
    in_orbit[start] = true;
    let targets: Vec<usize> = members[1..].to_vec();
    for &target in &targets {
        if in_orbit[target] {
            continue;
        }
        let hit = chain.search(
            |a| {
                a.iter().all(|&(b, img)| inside[b] == inside[img])
                    && a.iter().all(|&(b, img)| b != start || img == target)
            },
            |h| h.apply(start) == target && stabilizes(h),
            SearchBudget::default().max_nodes,
        )?;
        let Some(h) = hit else { return Ok(false) };
        found.push(h);
        let mut i = 0;
        while i < orbit.len() {
            for f in &found {
                let y = f.apply(orbit[i]);
                if !in_orbit[y] {
                    in_orbit[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
    }
    Ok(true)
}

/// All nonempty automorphic subsets of the points, by size then
/// lexicographically.
pub fn automorphic_subspaces(g: &PermGroup) -> Result<Vec<Vec<usize>>> {
    let n = g.degree();
    if n > 12 {
        return Err(Error::DegreeTooLarge { what: "automorphic_subspaces", degree: n, limit: 12 });
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let u: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if is_automorphic(g, &u)? {
            out.push(u);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_cycle_strings(n, gens).unwrap()
    }

    /// S_5 acting on the ten 2-subsets, listed lexicographically.
    pub(crate) fn petersen_group() -> PermGroup {
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let induced = |g: &Permutation| {
            let images: Vec<usize> = pairs
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (g.apply(a), g.apply(b));
                    pairs.iter().position(|&p| p == (x.min(y), x.max(y))).unwrap()
                })
                .collect();
            Permutation::from_images(&images).unwrap()
        };
        let gens = PermGroup::symmetric(5).generators().iter().map(induced).collect();
        PermGroup::new(10, gens).unwrap()
    }

    #[test]
    fn orbital_colors_have_orbit_sizes() {
        let g = petersen_group();
        let c = orbital_coloring(&g);
        let mut sizes = vec![0usize; 3];
        for &x in c.colors() {
            sizes[x as usize] += 1;
        }
        sizes.sort_unstable();
        assert_eq!(sizes, [10, 30, 60]);
        assert_eq!(two_closure(&g, SearchBudget::default()).unwrap().order().unwrap(), 120);
    }

    #[test]
    fn automorphic_sets_of_the_square() {
        let c4 = group(4, &["(1 2 3 4)"]);
        let subs = automorphic_subspaces(&c4).unwrap();
        assert!(subs.contains(&vec![0, 2]));
        assert!(subs.contains(&vec![1, 3]));
        assert!(!subs.contains(&vec![0, 1]));
        assert!(subs.contains(&vec![0, 1, 2, 3]));
        assert_eq!(subs.iter().filter(|s| s.len() == 1).count(), 4);
    }

    #[test]
    fn petersen_five_point_supports() {
        // Pair indices: 12=0 13=1 14=2 15=3 23=4 24=5 25=6 34=7 35=8 45=9.
        let g = petersen_group();
        for u in [[0usize, 3, 4, 7, 9], [1, 2, 5, 6, 8]] {
            assert!(is_automorphic(&g, &u).unwrap());
        }
        assert!(!is_automorphic(&g, &[0, 1, 2, 3, 4]).unwrap());
    }

    #[test]
    fn chain_route_matches_element_route() {
        let s7 = PermGroup::symmetric(7);
        let m = group(7, &["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"]);
        let wreath = group(8, &["(1 2 3 4)", "(1 2)", "(1 5)(2 6)(3 7)(4 8)"]);
        for g in [s7, m, wreath] {
            let n = g.degree();
            for mask in 1u32..(1 << n) {
                let u: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let by_elements = {
                    let els = g.elements().unwrap();
                    let mut reach = vec![false; n];
                    for h in els.iter() {
                        if u.iter().all(|&x| u.contains(&h.apply(x))) {
                            reach[h.apply(u[0])] = true;
                        }
                    }
                    u.iter().all(|&x| reach[x])
                };
                let chain_group = PermGroup::new(n, g.generators().to_vec()).unwrap();
                assert_eq!(is_automorphic_by_chain(&chain_group, &u), by_elements, "{u:?}");
            }
        }
    }

    fn is_automorphic_by_chain(g: &PermGroup, u: &[usize]) -> bool {
        let inside: Vec<bool> = (0..g.degree()).map(|x| u.contains(&x)).collect();
        automorphic_by_search(g, &inside, u.to_vec()).unwrap()
    }
}
