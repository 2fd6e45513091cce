//! Partitions and coverings of a k-set, with the lattice operators.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{act_left, orbit_rows, KSet};
use crate::error::{Error, Result};
use crate::group::{check_degree, Dsu, PermGroup};

/// A family of k-sets whose union is the carrier. `is_partition` is true
/// exactly when the classes are pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionK {
    carrier: KSet,
    classes: Vec<KSet>,
    partition: bool,
}

impl PartitionK {
    /// Builds the family; classes are deduplicated and sorted.
    pub fn from_classes(arity: usize, degree: usize, classes: Vec<KSet>) -> Result<Self> {
        let mut classes: Vec<KSet> = classes.into_iter().map(|c| c.to_set()).collect();
        for c in &classes {
            if c.arity() != arity || c.degree() != degree {
                return Err(Error::InvalidInput("class shape differs from the family".into()));
            }
        }
        classes.retain(|c| !c.is_empty());
        classes.sort_by(|a, b| a.iter().cmp(b.iter()));
        classes.dedup();
        let rows = classes.iter().flat_map(|c| c.iter().map(|t| t.to_vec())).collect();
        let carrier = KSet::from_rows(arity, degree, rows);
        let partition = classes.iter().map(|c| c.len()).sum::<usize>() == carrier.len();
        Ok(PartitionK { carrier, classes, partition })
    }

    pub fn carrier(&self) -> &KSet {
        &self.carrier
    }

    pub fn classes(&self) -> &[KSet] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_partition(&self) -> bool {
        self.partition
    }

    pub fn is_covering(&self) -> bool {
        !self.partition
    }

    /// Class sizes in class order.
    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    /// Index of the first class containing `t`.
    pub fn class_of(&self, t: &[u16]) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(t))
    }

    /// Selects maximal subfamilies of pairwise disjoint classes that cover
    /// the carrier, greedily in class order. Succeeds when every class ends
    /// up in some exact subfamily; used to split a covering into partitions.
    pub fn split_into_partitions(&self) -> Option<Vec<PartitionK>> {
        let mut remaining: Vec<usize> = (0..self.classes.len()).collect();
        let mut out = Vec::new();
        while !remaining.is_empty() {
            let chosen = exact_cover(&self.classes, &remaining, &self.carrier)?;
            let parts = chosen.iter().map(|&i| self.classes[i].clone()).collect();
            out.push(PartitionK::from_classes(self.carrier.arity(), self.carrier.degree(), parts).ok()?);
            remaining.retain(|i| !chosen.contains(i));
        }
        Some(out)
    }
}

/// An exact cover of `carrier` by classes from `pool`, always using the
/// first pool class; backtracking over the rest.
fn exact_cover(classes: &[KSet], pool: &[usize], carrier: &KSet) -> Option<Vec<usize>> {
    fn go(classes: &[KSet], pool: &[usize], carrier: &KSet, covered: &mut Vec<bool>, chosen: &mut Vec<usize>) -> bool {
        let first_free = match covered.iter().position(|&c| !c) {
            None => return true,
            Some(i) => i,
        };
        let target = carrier.tuple(first_free);
        for &ci in pool {
            let c = &classes[ci];
            if !c.contains(target) {
                continue;
            }
            let idxs: Vec<usize> = c.iter().map(|t| carrier.index_of(t).unwrap()).collect();
            if idxs.iter().any(|&i| covered[i]) {
                continue;
            }
            for &i in &idxs {
                covered[i] = true;
            }
            chosen.push(ci);
            if go(classes, pool, carrier, covered, chosen) {
                return true;
            }
            chosen.pop();
            for &i in &idxs {
                covered[i] = false;
            }
        }
        false
    }
    let first = *pool.first()?;
    let mut covered = vec![false; carrier.len()];
    for t in classes[first].iter() {
        covered[carrier.index_of(t)?] = true;
    }
    let mut chosen = vec![first];
    if go(classes, &pool[1..], carrier, &mut covered, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn same_carrier(p: &PartitionK, q: &PartitionK) -> Result<()> {
    if p.carrier != q.carrier {
        return Err(Error::InvalidInput(format!(
            "carriers differ ({} vs {} tuples)",
            p.carrier.len(),
            q.carrier.len()
        )));
    }
    Ok(())
}

/// `P ⊓ Q`: all nonempty intersections of a class of `P` with a class of `Q`.
pub fn meet(p: &PartitionK, q: &PartitionK) -> Result<PartitionK> {
    same_carrier(p, q)?;
    let mut classes = Vec::new();
    for a in &p.classes {
        for b in &q.classes {
            let c = a.intersection(b)?;
            if !c.is_empty() {
                classes.push(c);
            }
        }
    }
    PartitionK::from_classes(p.carrier.arity(), p.carrier.degree(), classes)
}

/// `P ⊔ Q`: unions of chains of intersecting classes from both families.
pub fn join(p: &PartitionK, q: &PartitionK) -> Result<PartitionK> {
    same_carrier(p, q)?;
    let carrier = &p.carrier;
    let all: Vec<&KSet> = p.classes.iter().chain(q.classes.iter()).collect();
    let mut dsu = Dsu::new(carrier.len());
    for c in &all {
        let mut it = c.iter();
        if let Some(first) = it.next() {
            let a = carrier.index_of(first).unwrap();
            for t in it {
                dsu.union(a, carrier.index_of(t).unwrap());
            }
        }
    }
    let classes = dsu
        .classes()
        .into_iter()
        .map(|idx| KSet::from_rows(carrier.arity(), carrier.degree(), idx.iter().map(|&i| carrier.tuple(i).to_vec()).collect()))
        .collect();
    PartitionK::from_classes(carrier.arity(), carrier.degree(), classes)
}

/// `P ⊏ Q`: every class of `P` lies inside some class of `Q`.
pub fn refines(p: &PartitionK, q: &PartitionK) -> Result<bool> {
    same_carrier(p, q)?;
    Ok(p.classes.iter().all(|a| q.classes.iter().any(|b| a.is_subset(b))))
}

/// `L = G Y = {gY : g ∈ G}`, found by closing `{Y}` under the generators.
pub fn left_coset_cover(group: &PermGroup, y: &KSet) -> Result<PartitionK> {
    check_degree(group.degree(), y.degree())?;
    let y = y.to_set();
    let mut seen: BTreeSet<Vec<u16>> = BTreeSet::new();
    let key = |s: &KSet| -> Vec<u16> { s.iter().flat_map(|t| t.iter().copied()).collect() };
    seen.insert(key(&y));
    let mut family = vec![y];
    let mut i = 0;
    while i < family.len() {
        for g in group.generators() {
            let img = act_left(g, &family[i])?;
            if seen.insert(key(&img)) {
                family.push(img);
            }
        }
        i += 1;
    }
    let (k, n) = (family[0].arity(), family[0].degree());
    PartitionK::from_classes(k, n, family)
}

/// `R = A X = {Aα : α ∈ X}`: the orbits of `A` on the tuples of `X`.
pub fn right_coset_partition(a: &PermGroup, x: &KSet) -> Result<PartitionK> {
    check_degree(a.degree(), x.degree())?;
    let mut done = vec![false; x.len()];
    let mut classes = Vec::new();
    let mut extra = Vec::new();
    for i in 0..x.len() {
        if done[i] {
            continue;
        }
        let rows = orbit_rows(a, x.tuple(i));
        for r in &rows {
            match x.index_of(r) {
                Some(j) => done[j] = true,
                None => extra.push(r.clone()),
            }
        }
        classes.push(KSet::from_rows(x.arity(), x.degree(), rows));
    }
    if !extra.is_empty() {
        return Err(Error::InvalidInput(format!("{} tuples of A X fall outside X", extra.len())));
    }
    PartitionK::from_classes(x.arity(), x.degree(), classes)
}
