//! Subgroup enumeration: the full lattice for small groups, seeded samples
//! of two-generated subgroups otherwise.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::group::{prime_divisors, PermGroup};
use crate::perm::Permutation;

/// Bounds for [`scan_subgroups`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Groups up to this order get their whole subgroup lattice.
    pub lattice_limit: u64,
    /// Give up on the lattice beyond this many subgroups.
    pub max_subgroups: usize,
    /// Number of sampled generator pairs otherwise.
    pub samples: usize,
    /// Sampled subgroups larger than this are skipped.
    pub closure_cap: usize,
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { lattice_limit: 720, max_subgroups: 20_000, samples: 10_000, closure_cap: 5_000, seed: 0 }
    }
}

/// What a scan covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ScanStats {
    /// True when every subgroup was visited.
    pub exhaustive: bool,
    pub examined: usize,
}

/// A subgroup handed to the scan callback, with all its elements.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    pub elements: Vec<Permutation>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn to_group(&self) -> PermGroup {
        PermGroup::new(self.degree, self.generators.clone()).unwrap().with_known_order(self.elements.len() as u64)
    }

    pub fn is_transitive(&self) -> bool {
        self.to_group().is_transitive()
    }
}

/// Calls `visit` on subgroups of `g` until it returns false. With the full
/// lattice, subgroups come in increasing order; the trivial group and `g`
/// itself are included.
pub fn scan_subgroups<F: FnMut(&Subgroup) -> bool>(g: &PermGroup, opts: &ScanOptions, mut visit: F) -> Result<ScanStats> {
    if g.order()? <= opts.lattice_limit {
        if let Some(lattice) = subgroup_lattice(g, opts.max_subgroups)? {
            let mut stats = ScanStats { exhaustive: true, examined: 0 };
            for s in &lattice {
                stats.examined += 1;
                if !visit(s) {
                    return Ok(stats);
                }
            }
            return Ok(stats);
        }
    }
    sample_subgroups(g, opts, visit)
}

/// Seeded two-generated subgroups with prime-order generators.
pub fn sample_subgroups<F: FnMut(&Subgroup) -> bool>(g: &PermGroup, opts: &ScanOptions, mut visit: F) -> Result<ScanStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let chain = g.chain();
    let n = g.degree();
    let mut stats = ScanStats { exhaustive: false, examined: 0 };
    for _ in 0..opts.samples {
        stats.examined += 1;
        let x = prime_order_power(chain.random_element(&mut rng), &mut rng);
        let y = prime_order_power(chain.random_element(&mut rng), &mut rng);
        let gens: Vec<Permutation> = [x, y].into_iter().filter(|p| !p.is_identity()).collect();
        let h = PermGroup::new(n, gens.clone())?;
        let Ok(els) = h.materialize(opts.closure_cap) else { continue };
        let sub = Subgroup { degree: n, generators: gens, elements: els.iter().collect() };
        if !visit(&sub) {
            break;
        }
    }
    Ok(stats)
}

fn prime_order_power<R: Rng>(x: Permutation, rng: &mut R) -> Permutation {
    let ord = x.order();
    if ord == 1 {
        return x;
    }
    let primes = prime_divisors(ord);
    let r = primes[rng.gen_range(0..primes.len())];
    x.pow(ord / r)
}

/// All subgroups of a small group by cyclic extension, sorted by order and
/// then by element indices. `None` when there are more than `max`.
pub fn subgroup_lattice(g: &PermGroup, max: usize) -> Result<Option<Vec<Subgroup>>> {
    let els = g.elements()?;
    let n = g.degree();
    let size = els.len();
    let perms: Vec<Permutation> = els.iter().collect();
    let mut mul = vec![0u32; size * size];
    for i in 0..size {
        for j in 0..size {
            let p = perms[i].compose_unchecked(&perms[j]);
            mul[i * size + j] = els.index_of(&p).unwrap() as u32;
        }
    }
    let id = els.index_of(&Permutation::identity(n)).unwrap();
    let words = size.div_ceil(64);
    let set_bit = |bits: &mut [u64], i: usize| bits[i / 64] |= 1 << (i % 64);
    let has_bit = |bits: &[u64], i: usize| bits[i / 64] >> (i % 64) & 1 == 1;

    // Cyclic subgroups generated by elements of prime-power order.
    let mut extenders: Vec<usize> = Vec::new();
    let mut seen_cyclic: HashSet<Vec<u64>> = HashSet::new();
    for i in 0..size {
        if i == id {
            continue;
        }
        let ord = perms[i].order();
        if prime_divisors(ord).len() != 1 {
            continue;
        }
        let mut bits = vec![0u64; words];
        let mut x = id;
        loop {
            set_bit(&mut bits, x);
            x = mul[x * size + i] as usize;
            if x == id {
                break;
            }
        }
        if seen_cyclic.insert(bits) {
            extenders.push(i);
        }
    }

    struct Node {
        gens: Vec<usize>,
        members: Vec<usize>,
        bits: Vec<u64>,
    }
    let mut trivial_bits = vec![0u64; words];
    set_bit(&mut trivial_bits, id);
    let mut nodes = vec![Node { gens: Vec::new(), members: vec![id], bits: trivial_bits.clone() }];
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(trivial_bits);
    let mut q = 0;
    while q < nodes.len() {
        for &c in &extenders {
            if has_bit(&nodes[q].bits, c) {
                continue;
            }
            let mut gens = nodes[q].gens.clone();
            gens.push(c);
            // <H, c> as a union of right cosets H r: h r s lies in H (r s).
            let base = &nodes[q].members;
            let mut bits = nodes[q].bits.clone();
            let mut members = base.clone();
            let mut reps = vec![id];
            let mut i = 0;
            while i < reps.len() {
                let r = reps[i];
                for &s in &gens {
                    let y = mul[r * size + s] as usize;
                    if has_bit(&bits, y) {
                        continue;
                    }
                    for &h in base {
                        let z = mul[h * size + y] as usize;
                        set_bit(&mut bits, z);
                        members.push(z);
                    }
                    reps.push(y);
                }
                i += 1;
            }
            if seen.insert(bits.clone()) {
                nodes.push(Node { gens, members, bits });
                if nodes.len() > max {
                    return Ok(None);
                }
            }
        }
        q += 1;
    }
    nodes.sort_by(|a, b| a.members.len().cmp(&b.members.len()).then_with(|| a.bits.cmp(&b.bits)));
    let out = nodes
        .into_iter()
        .map(|node| {
            let mut members = node.members;
            members.sort_unstable();
            Subgroup {
                degree: n,
                generators: node.gens.iter().map(|&i| perms[i].clone()).collect(),
                elements: members.iter().map(|&i| perms[i].clone()).collect(),
            }
        })
        .collect();
    Ok(Some(out))
}

/// The subgroup generated by the conjugates of `gens` in `g`.
pub fn normal_closure(g: &PermGroup, gens: &[Permutation]) -> Result<PermGroup> {
    let n = g.degree();
    let mut current: Vec<Permutation> = gens.iter().filter(|x| !x.is_identity()).cloned().collect();
    loop {
        let h = PermGroup::new(n, current.clone())?;
        let chain = h.chain();
        let mut added = None;
        'outer: for x in &current {
            for s in g.generators() {
                let c = s.compose_unchecked(x).compose_unchecked(&s.inverse());
                if !chain.contains(&c) {
                    added = Some(c);
                    break 'outer;
                }
            }
        }
        match added {
            Some(c) => current.push(c),
            None => {
                let order = u64::try_from(chain.order()).unwrap_or(u64::MAX);
                return Ok(h.with_known_order(order));
            }
        }
    }
}

/// A proper nontrivial normal subgroup, or `None` when `g` is simple.
/// Conjugacy classes are walked through class representatives, so this
/// needs the elements of `g`.
pub fn normal_subgroup_witness(g: &PermGroup) -> Result<Option<PermGroup>> {
    let order = g.order()?;
    if order == 1 {
        return Ok(None);
    }
    let els = g.elements()?;
    let mut done = vec![false; els.len()];
    let mut best: Option<PermGroup> = None;
    for i in 0..els.len() {
        if done[i] {
            continue;
        }
        let x = els.get(i);
        // Mark the conjugacy class of x.
        let mut class = vec![i];
        done[i] = true;
        let mut j = 0;
        while j < class.len() {
            let y = els.get(class[j]);
            for s in g.generators() {
                let c = s.compose_unchecked(&y).compose_unchecked(&s.inverse());
                let idx = els.index_of(&c).unwrap();
                if !done[idx] {
                    done[idx] = true;
                    class.push(idx);
                }
            }
            j += 1;
        }
        if x.is_identity() {
            continue;
        }
        let nc = normal_closure(g, &[x])?;
        let o = nc.order()?;
        if o < order && best.as_ref().is_none_or(|b| b.order().unwrap() > o) {
            best = Some(nc);
        }
    }
    Ok(best)
}
