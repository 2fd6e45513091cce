//! k-closures `aut(Orb_k(G))`, k-definedness and related group operations.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::search::{automorphism_group, SearchBudget};
use super::{ColoredPairStructure, FamilyConstraint};
use crate::elements::RowSet;
use crate::error::{Error, Result};
use crate::group::{check_degree, PermGroup, DEFAULT_CAP};
use crate::korbit::{
    left_coset_cover, n_orbit, orbit_of_tuple, orbits_k, project, right_coset_partition, right_translate, KSet, KTuple,
    PartitionK, Subspace, DEFAULT_TUPLE_BUDGET,
};
use crate::perm::Permutation;

/// Default degree limit for [`aut_of_kset`].
pub const DEFAULT_AUT_DEGREE: usize = 12;

fn group_from_search(n: usize, gens: Vec<Permutation>, order: Option<u128>) -> Result<PermGroup> {
    let g = PermGroup::new(n, gens)?;
    Ok(match order.and_then(|o| u64::try_from(o).ok()) {
        Some(o) => g.with_known_order(o),
        None => g,
    })
}

/// `Aut(X) = {g ∈ S_n : gX = X}`.
pub fn aut_of_kset(x: &KSet) -> Result<PermGroup> {
    aut_of_kset_with(x, DEFAULT_AUT_DEGREE, SearchBudget::default())
}

pub fn aut_of_kset_with(x: &KSet, max_degree: usize, budget: SearchBudget) -> Result<PermGroup> {
    let n = x.degree();
    if n > max_degree {
        return Err(Error::DegreeTooLarge { what: "aut_of_kset", degree: n, limit: max_degree });
    }
    let sets = [x.to_set()];
    let pairs = ColoredPairStructure::of_family(n, &sets)?;
    let constraint = FamilyConstraint::new(&sets);
    let aut = automorphism_group(&pairs, None, &constraint, budget)?;
    group_from_search(n, aut.generators.clone(), aut.order())
}

/// How a k-closure was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureMode {
    /// One search over S_n preserving every k-orbit at once.
    Direct,
    /// `Aut(X)` for each orbit separately, then intersected.
    Intersection,
}

impl ClosureMode {
    pub fn name(self) -> &'static str {
        match self {
            ClosureMode::Direct => "direct",
            ClosureMode::Intersection => "intersection",
        }
    }
}

/// `aut(Orb_k(G))`, the largest group fixing every k-orbit of `G` setwise.
pub fn k_closure(group: &Arc<PermGroup>, k: usize) -> Result<PermGroup> {
    k_closure_with(group, k, ClosureMode::Direct, DEFAULT_AUT_DEGREE, SearchBudget::default())
}

pub fn k_closure_with(
    group: &Arc<PermGroup>,
    k: usize,
    mode: ClosureMode,
    max_degree: usize,
    budget: SearchBudget,
) -> Result<PermGroup> {
    let n = group.degree();
    if n > max_degree {
        return Err(Error::DegreeTooLarge { what: "k_closure", degree: n, limit: max_degree });
    }
    if k == 0 {
        return Ok(PermGroup::symmetric(n));
    }
    let orbits: Vec<KSet> = orbits_k(group, k.min(n), DEFAULT_TUPLE_BUDGET)?.into_iter().map(|o| o.set).collect();
    match mode {
        ClosureMode::Direct => {
            let pairs = ColoredPairStructure::of_family(n, &orbits)?;
            let constraint = FamilyConstraint::new(&orbits);
            let aut = automorphism_group(&pairs, None, &constraint, budget)?;
            group_from_search(n, aut.generators.clone(), aut.order())
        }
        ClosureMode::Intersection => {
            let mut acc: Option<PermGroup> = None;
            for x in &orbits {
                let a = aut_of_kset_with(x, max_degree, budget)?;
                acc = Some(match acc {
                    None => a,
                    Some(prev) => group_intersection(&prev, &a)?,
                });
            }
            Ok(acc.unwrap_or_else(|| PermGroup::symmetric(n)))
        }
    }
}

/// `G ∩ H` by element sets, regenerated from a greedy generating set.
pub fn group_intersection(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    check_degree(g.degree(), h.degree())?;
    let n = g.degree();
    let (small, large) = if g.order()? <= h.order()? { (g, h) } else { (h, g) };
    let small_el = small.elements()?;
    let large_el = large.elements()?;
    let common: Vec<usize> = (0..small_el.len()).filter(|&i| large_el.contains(&small_el.get(i))).collect();
    let mut closure = RowSet::new(n);
    let id: Vec<u16> = (0..n as u16).collect();
    closure.insert(&id);
    let mut gens: Vec<Permutation> = Vec::new();
    for &i in &common {
        if closure.contains(small_el.images(i)) {
            continue;
        }
        gens.push(small_el.get(i));
        closure = close(n, &gens, DEFAULT_CAP)?;
    }
    Ok(PermGroup::new(n, gens)?.with_known_order(common.len() as u64))
}

fn close(n: usize, gens: &[Permutation], cap: usize) -> Result<RowSet> {
    let g = PermGroup::new(n, gens.to_vec())?;
    let el = g.materialize(cap)?;
    let mut rows = RowSet::with_capacity(n, el.len());
    for r in el.raw_rows() {
        rows.insert(r);
    }
    Ok(rows)
}

/// Result of [`classify_k_defined`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClosureReport {
    pub degree: usize,
    pub group_order: u64,
    pub mode: ClosureMode,
    /// `(k, |aut(Orb_k(G))|)` for each k examined, in increasing k.
    pub closure_orders: Vec<(usize, u64)>,
    /// Generators of each examined closure, in cycle notation.
    pub closure_generators: Vec<(usize, Vec<String>)>,
    /// The least k with `aut(Orb_k(G)) = G`, if at most `k_max`.
    pub least_k: Option<usize>,
    pub k_max: usize,
}

impl KClosureReport {
    /// True when `G` is k-defined (known from the examined range).
    pub fn is_k_defined(&self, k: usize) -> Option<bool> {
        match self.least_k {
            Some(l) => Some(k >= l),
            None if k <= self.k_max => Some(false),
            None => None,
        }
    }

    /// True when `G` is k-closed: k-defined but not (k-1)-defined.
    pub fn is_k_closed(&self, k: usize) -> Option<bool> {
        match self.least_k {
            Some(l) => Some(k == l),
            None if k <= self.k_max => Some(false),
            None => None,
        }
    }
}

/// Computes closures for `k = 1, 2, ..` until one equals `G` or `k_max` is
/// reached.
pub fn classify_k_defined(group: &Arc<PermGroup>, k_max: usize, mode: ClosureMode, budget: SearchBudget) -> Result<KClosureReport> {
    let n = group.degree();
    let group_order = group.order()?;
    let mut report = KClosureReport {
        degree: n,
        group_order,
        mode,
        closure_orders: Vec::new(),
        closure_generators: Vec::new(),
        least_k: None,
        k_max,
    };
    for k in 1..=k_max.min(n.max(1)) {
        let c = k_closure_with(group, k, mode, usize::MAX, budget)?;
        let order = c.order()?;
        report.closure_orders.push((k, order));
        report.closure_generators.push((k, c.generators().iter().map(|g| alloc::format!("{g}")).collect()));
        if order == group_order {
            report.least_k = Some(k);
            break;
        }
    }
    if report.least_k.is_none() && k_max >= n && n > 0 {
        report.least_k = Some(n);
    }
    Ok(report)
}

/// Per-orbit comparison of `A X` with `X A` (see [`normality_witness`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalityReport {
    pub k: usize,
    /// For each k-orbit of `G`, whether `A X = X A`.
    pub equal: Vec<bool>,
}

impl NormalityReport {
    pub fn all_equal(&self) -> bool {
        self.equal.iter().all(|&e| e)
    }
}

/// The family `X A` on the k-orbit `X = p̂(J) X_n`, where `J = β` is the
/// least tuple of `X` read as a subspace and `X_n = G ⟨1 .. n⟩`.
///
/// Since `p̂(J)(α a) = p̂(aJ) α = g a β` for `α = ⟨g(1) .. g(n)⟩`, the classes
/// are the sets `g A β`, which is the left cover `G (A β)`.
pub fn right_family(g: &PermGroup, a: &Arc<PermGroup>, x: &KSet) -> Result<PartitionK> {
    let beta = KTuple(x.tuple(0).to_vec());
    let y = orbit_of_tuple(a, &beta)?.set;
    left_coset_cover(g, &y)
}

/// The same family computed literally from the right action on `X_n`.
pub fn right_family_literal(g: &Arc<PermGroup>, a: &PermGroup, x: &KSet) -> Result<PartitionK> {
    let x_n = n_orbit(g)?.set;
    let j = Subspace::new(x.tuple(0).iter().map(|&c| c as usize).collect())?;
    let a_elements = a.elements()?;
    let mut classes = Vec::new();
    for alpha in x_n.iter() {
        let single = KSet::from_rows(x_n.arity(), x_n.degree(), vec![alpha.to_vec()]);
        let mut members = KSet::empty(x_n.arity(), x_n.degree());
        for e in a_elements.iter() {
            members = members.union(&right_translate(&single, &e)?)?;
        }
        classes.push(project(&members, &j)?);
    }
    PartitionK::from_classes(x.arity(), x.degree(), classes)
}

/// Compares `A X` with `X A` on every k-orbit `X` of `G`.
pub fn normality_witness(a: &Arc<PermGroup>, g: &Arc<PermGroup>, k: usize) -> Result<NormalityReport> {
    check_degree(a.degree(), g.degree())?;
    if !a.is_subgroup_of(g)? {
        return Err(Error::InvalidInput("A is not a subgroup of G".into()));
    }
    let k = k.min(g.degree());
    let mut equal = Vec::new();
    let orbits = if k == g.degree() { vec![n_orbit(g)?] } else { orbits_k(g, k, DEFAULT_TUPLE_BUDGET)? };
    for x in orbits {
        let left = right_coset_partition(a, &x.set)?;
        let right = right_family(g, a, &x.set)?;
        equal.push(left == right);
    }
    Ok(NormalityReport { k, equal })
}
