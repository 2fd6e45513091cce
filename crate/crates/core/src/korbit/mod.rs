//! k-tuples, k-sets and k-orbits.
//!
//! A [`KSet`] stores its tuples sorted lexicographically in one flat buffer,
//! so equal sets compare equal and iteration order is canonical.

mod ops;
mod pairs;
mod partition;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::elements::RowSet;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

pub use ops::{
    act_left, act_right, act_right_on_tuple, concat, homogeneity, homogeneity_check, multiproject, project,
    right_translate, setwise_stabilizer, RightProjection,
};
pub use pairs::{pair_multiset_cycles, pair_multiset_distributions};
pub use partition::{join, left_coset_cover, meet, refines, right_coset_partition, PartitionK};

/// Default bound on `n^k` for [`orbits_k`].
pub const DEFAULT_TUPLE_BUDGET: u128 = 10_000_000;

/// An ordered tuple of points, 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct KTuple(pub Vec<u16>);

impl KTuple {
    /// A tuple with pairwise distinct coordinates below `n`.
    pub fn new(n: usize, coords: &[usize]) -> Result<Self> {
        let t = Self::new_weak(n, coords)?;
        if !t.is_distinct() {
            return Err(Error::InvalidTuple(format!("repeated coordinate in {}", t)));
        }
        Ok(t)
    }

    /// A tuple that may repeat coordinates.
    pub fn new_weak(n: usize, coords: &[usize]) -> Result<Self> {
        for &c in coords {
            if c >= n {
                return Err(Error::InvalidTuple(format!("point {} exceeds degree {}", c + 1, n)));
            }
        }
        Ok(KTuple(coords.iter().map(|&c| c as u16).collect()))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> Vec<usize> {
        self.0.iter().map(|&c| c as usize).collect()
    }

    pub fn is_distinct(&self) -> bool {
        is_distinct(&self.0)
    }

    /// `Co(α)`: the sorted set of coordinate values.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.coords();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// The tuple of images of `g`.
    pub fn of_permutation(g: &Permutation) -> Self {
        KTuple(g.raw().to_vec())
    }
}

impl fmt::Display for KTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

pub(crate) fn write_tuple(f: &mut fmt::Formatter<'_>, t: &[u16]) -> fmt::Result {
    f.write_str("<")?;
    for (i, &c) in t.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{}", c + 1)?;
    }
    f.write_str(">")
}

pub(crate) fn is_distinct(t: &[u16]) -> bool {
    for i in 0..t.len() {
        for j in 0..i {
            if t[i] == t[j] {
                return false;
            }
        }
    }
    true
}

/// An ordered list of coordinate indices into tuples of a larger arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    indices: Vec<usize>,
}

impl Subspace {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if !is_distinct(&indices.iter().map(|&i| i as u16).collect::<Vec<_>>()) {
            return Err(Error::InvalidInput(format!("repeated index in subspace {indices:?}")));
        }
        Ok(Subspace { indices })
    }

    /// The subspace `⟨0, .., k-1⟩`.
    pub fn initial(k: usize) -> Self {
        Subspace { indices: (0..k).collect() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `Co(I)` sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.indices.clone();
        s.sort_unstable();
        s
    }

    /// `gI = (g(i_1), .., g(i_k))`, unsorted.
    pub fn image(&self, g: &Permutation) -> Subspace {
        Subspace { indices: self.indices.iter().map(|&i| g.apply(i)).collect() }
    }
}

/// A finite set (or multiset) of equal-arity tuples on `n` points.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KSet {
    arity: usize,
    degree: usize,
    rows: usize,
    data: Vec<u16>,
    counts: Option<Vec<u32>>,
    weak: bool,
}

impl KSet {
    pub fn empty(arity: usize, degree: usize) -> Self {
        KSet { arity, degree, rows: 0, data: Vec::new(), counts: None, weak: false }
    }

    /// A set from 0-based coordinate lists; coordinates must be distinct.
    pub fn new<T: AsRef<[usize]>>(arity: usize, degree: usize, tuples: &[T]) -> Result<Self> {
        let mut rows = Vec::with_capacity(tuples.len());
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return Err(Error::InvalidTuple(format!("tuple of arity {} in a {}-set", t.len(), arity)));
            }
            rows.push(KTuple::new(degree, t)?.0);
        }
        Ok(Self::from_rows(arity, degree, rows))
    }

    /// Parses tuples written as digit strings such as `"12"`, 1-based.
    /// Only usable when `n ≤ 9`.
    pub fn from_digit_strings(degree: usize, tuples: &[&str]) -> Result<Self> {
        let arity = tuples.first().map(|s| s.len()).unwrap_or(0);
        let mut rows: Vec<Vec<usize>> = Vec::new();
        for s in tuples {
            let mut t = Vec::new();
            for ch in s.chars() {
                let d = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::InvalidTuple(format!("bad digit in '{s}'")))? as usize;
                if d == 0 {
                    return Err(Error::InvalidTuple(format!("points are 1-based in '{s}'")));
                }
                t.push(d - 1);
            }
            rows.push(t);
        }
        Self::new(arity, degree, &rows)
    }

    /// A set from raw rows that are already validated.
    pub(crate) fn from_rows(arity: usize, degree: usize, mut rows: Vec<Vec<u16>>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        let weak = rows.iter().any(|r| !is_distinct(r));
        let mut data = Vec::with_capacity(rows.len() * arity);
        for r in &rows {
            data.extend_from_slice(r);
        }
        KSet { arity, degree, rows: rows.len(), data, counts: None, weak }
    }

    /// A multiset from `(tuple, count)` entries; equal tuples are merged
    /// and zero counts dropped. Repeated coordinates are accepted.
    pub fn multiset_from(arity: usize, degree: usize, entries: Vec<(Vec<u16>, u32)>) -> Result<Self> {
        let mut entries: Vec<(Vec<u16>, u32)> = entries.into_iter().filter(|(_, c)| *c > 0).collect();
        for (t, _) in &entries {
            if t.len() != arity {
                return Err(Error::InvalidTuple(format!("tuple of arity {} in a {}-set", t.len(), arity)));
            }
            if let Some(&c) = t.iter().find(|&&c| c as usize >= degree) {
                return Err(Error::InvalidTuple(format!("point {} exceeds degree {}", c + 1, degree)));
            }
        }
        entries.sort_unstable();
        let mut data = Vec::with_capacity(entries.len() * arity);
        let mut counts: Vec<u32> = Vec::with_capacity(entries.len());
        let mut last: Option<Vec<u16>> = None;
        for (t, c) in entries {
            if last.as_ref() == Some(&t) {
                *counts.last_mut().unwrap() += c;
            } else {
                data.extend_from_slice(&t);
                counts.push(c);
                last = Some(t);
            }
        }
        let mut out = KSet { arity, degree, rows: counts.len(), data, counts: Some(counts), weak: false };
        let weak = out.iter().any(|t| !is_distinct(t));
        out.weak = weak;
        Ok(out)
    }

    /// A set from rows that may repeat coordinates.
    pub fn weak_from_rows(arity: usize, degree: usize, rows: Vec<Vec<u16>>) -> Result<Self> {
        for r in &rows {
            if r.len() != arity {
                return Err(Error::InvalidTuple(format!("tuple of arity {} in a {}-set", r.len(), arity)));
            }
            if let Some(&c) = r.iter().find(|&&c| c as usize >= degree) {
                return Err(Error::InvalidTuple(format!("point {} exceeds degree {}", c + 1, degree)));
            }
        }
        Ok(Self::from_rows(arity, degree, rows))
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of distinct tuples.
    #[inline]
    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total multiplicity (equals `len` for plain sets).
    pub fn total(&self) -> u64 {
        match &self.counts {
            Some(c) => c.iter().map(|&x| x as u64).sum(),
            None => self.len() as u64,
        }
    }

    pub fn is_multiset(&self) -> bool {
        self.counts.is_some()
    }

    /// True when some tuple repeats a coordinate.
    pub fn is_weak(&self) -> bool {
        self.weak
    }

    #[inline]
    pub fn tuple(&self, i: usize) -> &[u16] {
        &self.data[i * self.arity..(i + 1) * self.arity]
    }

    pub fn count(&self, i: usize) -> u32 {
        self.counts.as_ref().map_or(1, |c| c[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u16]> + '_ {
        (0..self.len()).map(move |i| self.tuple(i))
    }

    /// `(tuple, count)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (&[u16], u32)> + '_ {
        (0..self.len()).map(move |i| (self.tuple(i), self.count(i)))
    }

    pub fn index_of(&self, t: &[u16]) -> Option<usize> {
        if t.len() != self.arity {
            return None;
        }
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.tuple(mid).cmp(t) {
                core::cmp::Ordering::Less => lo = mid + 1,
                core::cmp::Ordering::Greater => hi = mid,
                core::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, t: &[u16]) -> bool {
        self.index_of(t).is_some()
    }

    pub fn tuples(&self) -> Vec<KTuple> {
        self.iter().map(|t| KTuple(t.to_vec())).collect()
    }

    /// The same tuples with multiplicities dropped.
    pub fn to_set(&self) -> KSet {
        KSet {
            arity: self.arity,
            degree: self.degree,
            rows: self.rows,
            data: self.data.clone(),
            counts: None,
            weak: self.weak,
        }
    }

    /// `∪ Co(α)` over all tuples, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        for t in self.iter() {
            for &c in t {
                seen[c as usize] = true;
            }
        }
        (0..self.degree).filter(|&v| seen[v]).collect()
    }

    /// The distinct supports `Co(α)` of the tuples, sorted.
    pub fn tuple_supports(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .iter()
            .map(|t| {
                let mut s: Vec<usize> = t.iter().map(|&c| c as usize).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn same_carrier(&self, other: &KSet) -> Result<()> {
        if self.arity != other.arity || self.degree != other.degree {
            return Err(Error::InvalidInput(format!(
                "k-sets of shape ({}, {}) and ({}, {}) are not comparable",
                self.arity, self.degree, other.arity, other.degree
            )));
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &KSet) -> bool {
        self.arity == other.arity && self.iter().all(|t| other.contains(t))
    }

    pub fn is_disjoint(&self, other: &KSet) -> bool {
        self.iter().all(|t| !other.contains(t))
    }

    pub fn union(&self, other: &KSet) -> Result<KSet> {
        self.same_carrier(other)?;
        let rows = self.iter().chain(other.iter()).map(|t| t.to_vec()).collect();
        Ok(KSet::from_rows(self.arity, self.degree, rows))
    }

    pub fn intersection(&self, other: &KSet) -> Result<KSet> {
        self.same_carrier(other)?;
        let rows = self.iter().filter(|t| other.contains(t)).map(|t| t.to_vec()).collect();
        Ok(KSet::from_rows(self.arity, self.degree, rows))
    }

    pub fn difference(&self, other: &KSet) -> Result<KSet> {
        self.same_carrier(other)?;
        let rows = self.iter().filter(|t| !other.contains(t)).map(|t| t.to_vec()).collect();
        Ok(KSet::from_rows(self.arity, self.degree, rows))
    }

    /// The subset selected by `keep`.
    pub fn filter<F: FnMut(&[u16]) -> bool>(&self, mut keep: F) -> KSet {
        let rows = self.iter().filter(|t| keep(t)).map(|t| t.to_vec()).collect();
        KSet::from_rows(self.arity, self.degree, rows)
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KSet[{}; {}]", self.arity, self.degree)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (t, c)) in self.entries().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write_tuple(f, t)?;
            if self.is_multiset() {
                write!(f, "*{c}")?;
            }
        }
        f.write_str("}")
    }
}

/// A k-set together with a group acting transitively on it.
#[derive(Clone, Debug)]
pub struct KOrbit {
    pub set: KSet,
    pub group: Arc<PermGroup>,
}

impl KOrbit {
    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.set.arity()
    }
}

/// The orbit of `alpha` under the generators of `group`, breadth first.
pub fn orbit_rows(group: &PermGroup, alpha: &[u16]) -> Vec<Vec<u16>> {
    let mut seen = RowSet::new(alpha.len());
    seen.insert(alpha);
    let mut buf = vec![0u16; alpha.len()];
    let mut i = 0;
    while i < seen.len() {
        for g in group.generators() {
            let g = g.raw();
            for (slot, &c) in buf.iter_mut().zip(seen.row(i)) {
                *slot = g[c as usize];
            }
            seen.insert(&buf);
        }
        i += 1;
    }
    seen.rows().map(|r| r.to_vec()).collect()
}

/// The k-orbit `G α`.
pub fn orbit_of_tuple(group: &Arc<PermGroup>, alpha: &KTuple) -> Result<KOrbit> {
    let n = group.degree();
    if alpha.arity() > n {
        return Err(Error::InvalidTuple(format!("arity {} exceeds degree {}", alpha.arity(), n)));
    }
    if let Some(&c) = alpha.0.iter().find(|&&c| c as usize >= n) {
        return Err(Error::InvalidTuple(format!("point {} exceeds degree {}", c + 1, n)));
    }
    let rows = orbit_rows(group, &alpha.0);
    let set = KSet::from_rows(alpha.arity(), n, rows);
    Ok(KOrbit { set, group: group.clone() })
}

/// All k-orbits of `group` on tuples with distinct coordinates, ordered by
/// their least tuple.
pub fn orbits_k(group: &Arc<PermGroup>, k: usize, budget: u128) -> Result<Vec<KOrbit>> {
    let n = group.degree();
    if k > n {
        return Err(Error::InvalidInput(format!("arity {k} exceeds degree {n}")));
    }
    let needed = (n as u128).saturating_pow(k as u32);
    if needed > budget {
        return Err(Error::BudgetExceeded { what: "orbits_k", needed, budget });
    }
    let code = |t: &[u16]| t.iter().fold(0usize, |acc, &c| acc * n + c as usize);
    let mut assigned = vec![false; needed as usize];
    let mut out = Vec::new();
    let mut t: Vec<u16> = (0..k as u16).collect();
    if k == 0 {
        let set = KSet::from_rows(0, n, vec![Vec::new()]);
        return Ok(vec![KOrbit { set, group: group.clone() }]);
    }
    loop {
        if !assigned[code(&t)] {
            let rows = orbit_rows(group, &t);
            for r in &rows {
                assigned[code(r)] = true;
            }
            out.push(KOrbit { set: KSet::from_rows(k, n, rows), group: group.clone() });
        }
        if !next_injective(&mut t, n) {
            break;
        }
    }
    Ok(out)
}

/// Advances to the next tuple of distinct points in lexicographic order.
pub(crate) fn next_injective(t: &mut [u16], n: usize) -> bool {
    let k = t.len();
    let mut pos = k;
    while pos > 0 {
        pos -= 1;
        let mut v = t[pos] as usize + 1;
        while v < n && t[..pos].contains(&(v as u16)) {
            v += 1;
        }
        if v < n {
            t[pos] = v as u16;
            let mut next = 0usize;
            for slot in pos + 1..k {
                while t[..slot].contains(&(next as u16)) {
                    next += 1;
                }
                t[slot] = next as u16;
            }
            return true;
        }
    }
    false
}

/// The n-orbit `G ⟨1 .. n⟩`, one row per group element.
pub fn n_orbit(group: &Arc<PermGroup>) -> Result<KOrbit> {
    let n = group.degree();
    let id: Vec<usize> = (0..n).collect();
    orbit_of_tuple(group, &KTuple::new(n, &id)?)
}
