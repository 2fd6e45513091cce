//! V-coherent and V-incoherent rorbits, elementary ones, and k-blocks.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::is_automorphic;
use super::subgroups::{scan_subgroups, ScanOptions, ScanStats};
use crate::aut::{aut_of_kset_with, SearchBudget};
use crate::elements::RowSet;
use crate::error::{Error, Result};
use crate::group::{Dsu, PermGroup};
use crate::korbit::{orbit_rows, orbits_k, KOrbit, KSet, DEFAULT_TUPLE_BUDGET};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// The supports overlap into one connected cover of V.
    Coherent,
    /// The supports partition V.
    Incoherent,
    /// Neither, or the arity is outside `2 ≤ k < n`.
    NeitherScope,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Coherent => "V-coherent",
            Verdict::Incoherent => "V-incoherent",
            Verdict::NeitherScope => "neither-scope",
        }
    }
}

/// Outcome of the scan for proper coherent or incoherent sub-rorbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elementary {
    /// No such sub-rorbit among the subgroups scanned.
    Yes { exhaustive: bool },
    /// A proper sub-rorbit `A α` with its verdict.
    No { sub: KSet, verdict: Verdict, generators: Vec<Permutation> },
    /// The rorbit itself is neither coherent nor incoherent.
    NotApplicable,
}

impl Elementary {
    pub fn is_elementary(&self) -> bool {
        matches!(self, Elementary::Yes { .. })
    }
}

/// Classification of one k-rorbit.
#[derive(Clone, Debug)]
pub struct CoherenceReport {
    pub degree: usize,
    pub arity: usize,
    pub size: usize,
    pub verdict: Verdict,
    pub elementary: Elementary,
    /// The distinct tuple supports.
    pub supports: Vec<Vec<usize>>,
    /// The classes `{α ∈ X : Co(α) = U}`, one per support.
    pub blocks: Vec<KSet>,
    pub aut_order: u64,
    pub scan: ScanStats,
}

impl CoherenceReport {
    pub fn is_elementary_coherent(&self) -> bool {
        self.verdict == Verdict::Coherent && self.elementary.is_elementary()
    }

    pub fn is_elementary_incoherent(&self) -> bool {
        self.verdict == Verdict::Incoherent && self.elementary.is_elementary()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CoherenceOptions {
    pub scan: ScanOptions,
    pub budget: SearchBudget,
}

impl Default for CoherenceOptions {
    fn default() -> Self {
        CoherenceOptions { scan: ScanOptions { samples: 500, ..ScanOptions::default() }, budget: SearchBudget::default() }
    }
}

/// The verdict from the supports alone.
pub fn support_verdict(supports: &[Vec<usize>], n: usize, k: usize) -> Verdict {
    if k < 2 || k >= n {
        return Verdict::NeitherScope;
    }
    let mut covered = vec![0u32; n];
    for s in supports {
        for &v in s {
            covered[v] += 1;
        }
    }
    if covered.iter().any(|&c| c == 0) {
        return Verdict::NeitherScope;
    }
    if covered.iter().all(|&c| c == 1) {
        return Verdict::Incoherent;
    }
    let mut dsu = Dsu::new(n);
    for s in supports {
        for w in s.windows(2) {
            dsu.union(w[0], w[1]);
        }
    }
    let root = dsu.find(0);
    if (0..n).all(|v| dsu.find(v) == root) {
        Verdict::Coherent
    } else {
        Verdict::NeitherScope
    }
}

/// True when `x` is an orbit of `group` whose tuples have pairwise
/// distinct coordinates and automorphic supports.
pub fn is_rorbit(x: &KSet, group: &PermGroup) -> Result<bool> {
    if x.is_empty() || x.is_weak() {
        return Ok(false);
    }
    let t = x.tuple(0);
    let rows = orbit_rows(group, t);
    if rows.len() != x.len() || !rows.iter().all(|r| x.contains(r)) {
        return Ok(false);
    }
    let support: Vec<usize> = {
        let mut s: Vec<usize> = t.iter().map(|&c| c as usize).collect();
        s.sort_unstable();
        s
    };
    is_automorphic(group, &support)
}

/// The k-blocks of `x`: tuples grouped by their support.
pub fn k_blocks(x: &KSet) -> Vec<KSet> {
    let supports = x.tuple_supports();
    supports
        .iter()
        .map(|s| {
            x.filter(|t| {
                let mut c: Vec<usize> = t.iter().map(|&v| v as usize).collect();
                c.sort_unstable();
                c == *s
            })
        })
        .collect()
}

pub fn coherence_classify(x: &KOrbit) -> Result<CoherenceReport> {
    coherence_classify_with(x, &CoherenceOptions::default())
}

/// Classifies the rorbit `x`. The elementary flag comes from the orbits on
/// `x` of subgroups `A ≤ Aut(x)`: a proper orbit `A α` whose support is
/// automorphic in `A` and which is itself coherent or incoherent makes `x`
/// non-elementary.
pub fn coherence_classify_with(x: &KOrbit, opts: &CoherenceOptions) -> Result<CoherenceReport> {
    let set = &x.set;
    let n = set.degree();
    let k = set.arity();
    if !is_rorbit(set, &x.group)? {
        return Err(Error::InvalidInput("the k-set is not a rorbit of its group".into()));
    }
    let supports = set.tuple_supports();
    let verdict = support_verdict(&supports, n, k);
    let blocks = k_blocks(set);
    let aut = aut_of_kset_with(set, n.max(12), opts.budget)?;
    let aut_order = aut.order()?;
    let mut report = CoherenceReport {
        degree: n,
        arity: k,
        size: set.len(),
        verdict,
        elementary: Elementary::NotApplicable,
        supports,
        blocks,
        aut_order,
        scan: ScanStats::default(),
    };
    if verdict == Verdict::NeitherScope {
        return Ok(report);
    }
    let mut witness: Option<Elementary> = None;
    let mut failure: Option<Error> = None;
    let stats = scan_subgroups(&aut, &opts.scan, |a| {
        if a.order() <= 1 {
            return true;
        }
        match proper_sub_rorbit(set, a.generators.as_slice(), &a.elements, n, k) {
            Ok(Some((sub, v))) => {
                witness = Some(Elementary::No { sub, verdict: v, generators: a.generators.clone() });
                false
            }
            Ok(None) => true,
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    report.scan = stats;
    report.elementary = witness.unwrap_or(Elementary::Yes { exhaustive: stats.exhaustive });
    Ok(report)
}

/// The first orbit of `⟨gens⟩` on `x` that is a proper coherent or
/// incoherent rorbit of that subgroup.
fn proper_sub_rorbit(
    x: &KSet,
    gens: &[Permutation],
    elements: &[Permutation],
    n: usize,
    k: usize,
) -> Result<Option<(KSet, Verdict)>> {
    let mut assigned = RowSet::with_capacity(k, x.len());
    let sub_group = PermGroup::new(n, gens.to_vec())?.with_known_order(elements.len() as u64);
    for t in x.iter() {
        if assigned.contains(t) {
            continue;
        }
        let rows = orbit_rows(&sub_group, t);
        for r in &rows {
            assigned.insert(r);
        }
        if rows.len() == x.len() {
            return Ok(None);
        }
        let sub = KSet::from_rows(k, n, rows);
        let v = support_verdict(&sub.tuple_supports(), n, k);
        if v == Verdict::NeitherScope {
            continue;
        }
        let support: Vec<usize> = {
            let mut s: Vec<usize> = t.iter().map(|&c| c as usize).collect();
            s.sort_unstable();
            s
        };
        let stabilizer_reach = {
            let mut reach = vec![false; n];
            for h in elements {
                if support.iter().all(|&p| support.binary_search(&h.apply(p)).is_ok()) {
                    reach[h.apply(support[0])] = true;
                }
            }
            support.iter().all(|&p| reach[p])
        };
        if stabilizer_reach {
            return Ok(Some((sub, v)));
        }
    }
    Ok(None)
}

/// Outcome of one record of [`check_not_divides`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotDividesVerdict {
    /// `k ∤ n`.
    Pass,
    /// `k | n` for an elementary coherent rorbit found by exhaustive scan.
    Fail,
    /// `k | n`, but elementary-ness rests on a sampled scan.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct NotDividesRecord {
    pub k: usize,
    pub orbit_size: usize,
    pub representative: Vec<u16>,
    pub exhaustive: bool,
    pub verdict: NotDividesVerdict,
}

/// For every elementary coherent k-rorbit of `g` with `2 ≤ k ≤ k_max`,
/// records whether `k` divides the degree.
pub fn check_not_divides(g: &Arc<PermGroup>, k_max: usize, opts: &CoherenceOptions) -> Result<Vec<NotDividesRecord>> {
    let n = g.degree();
    let mut out = Vec::new();
    for k in 2..n.min(k_max + 1) {
        for orbit in orbits_k(g, k, DEFAULT_TUPLE_BUDGET)? {
            if !is_rorbit(&orbit.set, g)? {
                continue;
            }
            let report = coherence_classify_with(&orbit, opts)?;
            if !report.is_elementary_coherent() {
                continue;
            }
            let exhaustive = matches!(report.elementary, Elementary::Yes { exhaustive: true });
            let verdict = if n % k != 0 {
                NotDividesVerdict::Pass
            } else if exhaustive {
                NotDividesVerdict::Fail
            } else {
                NotDividesVerdict::Inconclusive
            };
            out.push(NotDividesRecord {
                k,
                orbit_size: orbit.len(),
                representative: orbit.set.tuple(0).to_vec(),
                exhaustive,
                verdict,
            });
        }
    }
    Ok(out)
}
