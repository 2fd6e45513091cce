//! Claim checks over the group catalog: each registered claim runs on every
//! catalog group in its scope and yields pass, fail with a replayable
//! witness, or bounded-inconclusive.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;
use std::time::Instant;

use korb_core::aut::{aut_of_kset, find_isomorphism, ColoredPairStructure, NoConstraint, SearchBudget};
use korb_core::gi::{orbit_partition, Graph, OrbitStatus};
use korb_core::korbit::{
    act_right_on_tuple, homogeneity_check, join, left_coset_cover, meet, n_orbit, orbit_rows, orbits_k, project,
    right_coset_partition, right_translate, setwise_stabilizer, KSet, PartitionK, Subspace, DEFAULT_TUPLE_BUDGET,
};
use korb_core::structure::subgroups::{normal_subgroup_witness, subgroup_lattice, ScanOptions, Subgroup};
use korb_core::structure::{
    check_not_divides, coherence_classify_with, incoherent_normal_subgroup, is_rorbit, local_property_check,
    polycirculant_witness_with, qgdn_check, support_verdict, CoherenceOptions, Elementary, NotDividesVerdict, PolycircOptions,
    PolycircOutcome, QgdnVerdict, Verdict as CoVerdict,
};
use korb_core::structure::{orbital_coloring, two_closure};
use korb_core::{is_regular_element, Error, PermGroup, Permutation, Primitivity};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{petersen, Catalog, Entry};
use crate::data::{combinations, example_group, reconstruct_paper_example};
use crate::format::{parse_group, write_group};

pub const SCHEMA: u32 = 1;

/// Registered claims with a plain statement of each.
pub const CLAIMS: &[(&str, &str)] = &[
    ("homo", "the l-tuples of a k-orbit on fixed coordinates form a homogeneous multiset"),
    ("coset-eq", "for Y_n the n-orbit of A through the initial tuple, G Y_n = X_n A and Y_n G = A X_n"),
    ("lattice", "G A meet G B = G(A and B), G A join G B = G<A,B>"),
    ("simple", "G is simple iff A X_k != X_k A for every proper nontrivial subgroup A"),
    ("divides", "if |Y_k| |G Y_k| divides |G| then Y_k is an orbit of a subgroup"),
    ("local", "for an orbit X_k, a prime p >= k dividing |Aut(X_k)| and a (p,k)-rcycle, the rcycle is realized in Aut(X_k)"),
    ("two-closed", "a transitive X_n with Sym(n)-isomorphic projections on disjoint 2-subspaces is 2-closed"),
    ("coherence", "Aut of an incoherent rorbit is imprimitive; Aut of an elementary coherent rorbit is primitive"),
    ("not-divides", "k does not divide n for an elementary coherent k-rorbit"),
    ("qgdn", "G has a transitive subgroup with blocks of size q, q the greatest prime divisor of n"),
    ("polycirc", "the 2-closure of a transitive group contains a semiregular element"),
    ("involution", "a primitive group that is not cyclic of prime order contains an involution"),
    ("incoh-simple", "a group with an incoherent k-orbit has a proper nontrivial normal subgroup"),
    ("petersen", "the Petersen group has order 120, 2-orbits of sizes 30 and 60 and the split Y10 projection"),
];

pub const EVIDENCE_NOTE: &str = "evidence covers the catalog groups only; the general statements are not verified beyond it";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "bounded-inconclusive")]
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "bounded-inconclusive",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Scope {
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    /// Search bounds that apply, in words.
    pub bound: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub inconclusive: u64,
}

/// A group file plus the parameters needed to rerun the failing case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub group: String,
    pub params: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub schema: u32,
    pub claim: String,
    pub anchor: String,
    pub group: String,
    pub degree: usize,
    pub order: u64,
    pub scope: Scope,
    pub verdict: Verdict,
    pub counts: Counts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub detail: String,
    /// Set when a budget or cap stopped the check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl ClaimCheck {
    fn new(claim: &str, e: &Entry, scope: Scope) -> Self {
        ClaimCheck {
            schema: SCHEMA,
            claim: claim.to_string(),
            anchor: anchor(claim).unwrap_or("").to_string(),
            group: e.name.clone(),
            degree: e.degree,
            order: e.order,
            scope,
            verdict: Verdict::Pass,
            counts: Counts::default(),
            witness: None,
            detail: String::new(),
            error: None,
            runtime_ms: None,
        }
    }

    fn pass(&mut self) {
        self.counts.checked += 1;
        self.counts.passed += 1;
    }

    /// Records a failing case; the first one becomes the witness.
    fn fail(&mut self, g: &PermGroup, params: Value, detail: impl Into<String>) {
        self.counts.checked += 1;
        self.counts.failed += 1;
        if self.verdict != Verdict::Fail {
            self.verdict = Verdict::Fail;
            self.witness = Some(Witness { group: write_group(g, None), params });
            self.detail = detail.into();
        }
    }

    fn inconclusive(&mut self, detail: impl Into<String>) {
        self.counts.checked += 1;
        self.counts.inconclusive += 1;
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Inconclusive;
            self.detail = detail.into();
        }
    }

    fn note(&mut self, detail: impl Into<String>) {
        if self.detail.is_empty() {
            self.detail = detail.into();
        }
    }
}

pub fn anchor(claim: &str) -> Option<&'static str> {
    CLAIMS.iter().find(|(c, _)| *c == claim).map(|(_, a)| *a)
}

#[derive(Clone, Copy, Debug)]
pub struct LabOptions {
    pub seed: u64,
    pub budget: SearchBudget,
    /// Worker threads; 0 picks the default.
    pub jobs: usize,
    pub timings: bool,
}

impl Default for LabOptions {
    fn default() -> Self {
        LabOptions { seed: 0, budget: SearchBudget::default(), jobs: 0, timings: false }
    }
}

/// Expands `all` and validates claim ids.
pub fn resolve_suites(names: &[String]) -> Result<Vec<&'static str>, String> {
    let mut out: Vec<&'static str> = Vec::new();
    for n in names {
        if n == "all" {
            out.extend(CLAIMS.iter().map(|(c, _)| *c));
            continue;
        }
        match CLAIMS.iter().find(|(c, _)| c == n) {
            Some((c, _)) => out.push(c),
            None => return Err(format!("unknown suite '{n}'")),
        }
    }
    let mut seen = Vec::new();
    out.retain(|c| if seen.contains(c) { false } else { seen.push(*c); true });
    Ok(out)
}

/// The bundled example groups used by `two-closed` beside the catalog.
const TWO_CLOSED_EXAMPLES: &[&str] = &["S3(6)", "C6*C2", "S5*S2"];

/// Runs every claim on every catalog group in its scope. Results come in
/// (claim, catalog order) order whatever the thread count.
pub fn run_suite(catalog: &Catalog, claims: &[&str], opts: &LabOptions) -> Result<Vec<ClaimCheck>, String> {
    let mut extra: Vec<Entry> = Vec::new();
    for id in TWO_CLOSED_EXAMPLES {
        let g = example_group(id).map_err(|e| e.to_string())?;
        extra.push(Entry::new(format!("example {id}"), g));
    }
    let pet = Entry::new("Petersen", petersen());
    let mut jobs: Vec<(&str, &Entry)> = Vec::new();
    for &c in claims {
        if anchor(c).is_none() {
            return Err(format!("unknown claim '{c}'"));
        }
        match c {
            "petersen" => jobs.push((c, catalog.get("Petersen").unwrap_or(&pet))),
            "two-closed" => {
                jobs.extend(extra.iter().map(|e| (c, e)));
                jobs.extend(catalog.entries.iter().map(|e| (c, e)));
            }
            _ => jobs.extend(catalog.entries.iter().map(|e| (c, e))),
        }
    }
    let work = || -> Vec<Option<ClaimCheck>> { jobs.par_iter().map(|(c, e)| run_timed(c, e, opts)).collect() };
    let results = if opts.jobs > 0 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().map_err(|e| e.to_string())?;
        pool.install(work)
    } else {
        work()
    };
    Ok(results.into_iter().flatten().collect())
}

fn run_timed(claim: &str, e: &Entry, opts: &LabOptions) -> Option<ClaimCheck> {
    let start = Instant::now();
    let mut out = run_claim(claim, e, opts);
    if opts.timings {
        if let Some(c) = out.as_mut() {
            c.runtime_ms = Some(start.elapsed().as_millis() as u64);
        }
    }
    out
}

/// One claim on one group; `None` when the group is outside the scope.
/// Errors from budgets and caps turn into bounded-inconclusive records.
pub fn run_claim(claim: &str, e: &Entry, opts: &LabOptions) -> Option<ClaimCheck> {
    let ctx = Ctx { seed: job_seed(opts.seed, claim, &e.group), budget: opts.budget };
    let res = match claim {
        "homo" => homo(e),
        "coset-eq" => coset_eq(e),
        "lattice" => lattice(e),
        "simple" => simple(e),
        "divides" => divides(e, &ctx),
        "local" => local(e, &ctx),
        "two-closed" => two_closed(e, &ctx),
        "coherence" => coherence(e, &ctx),
        "not-divides" => not_divides(e, &ctx),
        "qgdn" => qgdn(e, &ctx),
        "polycirc" => polycirc(e, &ctx),
        "involution" => involution(e, &ctx),
        "incoh-simple" => incoh_simple(e, &ctx),
        "petersen" => petersen_check(e, &ctx),
        _ => return None,
    };
    match res {
        Ok(c) => c,
        Err(err) => {
            let mut c = ClaimCheck::new(claim, e, Scope::default());
            c.inconclusive(format!("stopped: {err}"));
            c.error = Some(err.to_string());
            Some(c)
        }
    }
}

/// Reruns the claim on the witness group of a check.
pub fn replay(check: &ClaimCheck, opts: &LabOptions) -> Result<Verdict, String> {
    let w = check.witness.as_ref().ok_or("check has no witness")?;
    let g = parse_group(&w.group).map_err(|e| e.to_string())?;
    let e = Entry::new(check.group.clone(), g);
    run_claim(&check.claim, &e, opts).map(|c| c.verdict).ok_or_else(|| "witness group is outside the claim scope".into())
}

struct Ctx {
    seed: u64,
    budget: SearchBudget,
}

/// A per-job seed from the run seed, the claim and the group generators, so
/// results do not depend on catalog order or thread scheduling.
fn job_seed(seed: u64, claim: &str, g: &PermGroup) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    let text = write_group(g, None);
    for b in claim.bytes().chain(text.bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

type Check = korb_core::Result<Option<ClaimCheck>>;

fn rows_1based<'a>(rows: impl Iterator<Item = &'a [u16]>) -> Vec<Vec<usize>> {
    rows.map(|t| t.iter().map(|&v| v as usize + 1).collect()).collect()
}

fn tuple_1based(t: &[u16]) -> Vec<usize> {
    t.iter().map(|&v| v as usize + 1).collect()
}

fn kset_of(k: usize, n: usize, rows: Vec<Vec<u16>>) -> korb_core::Result<KSet> {
    let rows: Vec<Vec<usize>> = rows.into_iter().map(|r| r.into_iter().map(usize::from).collect()).collect();
    KSet::new(k, n, &rows)
}

fn k_range(scope: &mut Scope, lo: usize, hi: usize) {
    scope.k_min = Some(lo);
    scope.k_max = Some(hi);
}

fn homo(e: &Entry) -> Check {
    let n = e.degree;
    if n == 0 {
        return Ok(None);
    }
    let mut scope = Scope { bound: "subspaces of size at most 3".into(), ..Scope::default() };
    k_range(&mut scope, 1, n.min(3));
    let mut orbits: Vec<KSet> = Vec::new();
    for k in 1..=n.min(3) {
        orbits.extend(orbits_k(&e.group, k, DEFAULT_TUPLE_BUDGET)?.into_iter().map(|o| o.set));
    }
    if n > 3 && e.order <= 5040 {
        orbits.push(n_orbit(&e.group)?.set);
        scope.k_max = Some(n);
        scope.bound.push_str("; k = n included when |G| <= 5040");
    }
    let mut c = ClaimCheck::new("homo", e, scope);
    for x in &orbits {
        let k = x.arity();
        for size in 1..=k.min(3) {
            for idx in combinations(k, size) {
                let sub = Subspace::new(idx.clone())?;
                if homogeneity_check(x, &sub)? {
                    c.pass();
                } else {
                    let params = json!({"k": k, "subspace": idx.iter().map(|i| i + 1).collect::<Vec<_>>(), "tuple": tuple_1based(x.tuple(0))});
                    c.fail(&e.group, params, "multiprojection is not homogeneous");
                }
            }
        }
    }
    Ok(Some(c))
}

const COSET_ORDER_LIMIT: u64 = 720;

/// Subgroups of small groups by the full lattice; `None` when the lattice
/// is too large.
fn full_lattice(g: &PermGroup, max: usize) -> korb_core::Result<Option<Vec<Subgroup>>> {
    subgroup_lattice(g, max)
}

fn coset_eq(e: &Entry) -> Check {
    if e.order > COSET_ORDER_LIMIT || e.degree == 0 {
        return Ok(None);
    }
    let n = e.degree;
    let scope = Scope { k_min: Some(n), k_max: Some(n), bound: format!("full subgroup lattice, |G| <= {COSET_ORDER_LIMIT}") };
    let mut c = ClaimCheck::new("coset-eq", e, scope);
    let Some(subs) = full_lattice(&e.group, 20_000)? else {
        c.inconclusive("subgroup lattice too large");
        return Ok(Some(c));
    };
    let g_elements: Vec<Permutation> = e.group.elements()?.iter().collect();
    let x_n = n_orbit(&e.group)?.set;
    let ident: Vec<u16> = (0..n as u16).collect();
    for h in &subs {
        let a = h.to_group();
        let y_n = kset_of(n, n, orbit_rows(&a, &ident))?;
        // G Y_n by the left action, X_n A by the right action tuple by tuple.
        let left = left_coset_cover(&e.group, &y_n)?;
        let mut class_rows: BTreeSet<Vec<Vec<u16>>> = BTreeSet::new();
        for alpha in x_n.iter() {
            let mut rows = h.elements.iter().map(|s| act_right_on_tuple(alpha, s)).collect::<korb_core::Result<Vec<_>>>()?;
            rows.sort_unstable();
            class_rows.insert(rows);
        }
        let classes = class_rows.into_iter().map(|rows| kset_of(n, n, rows)).collect::<korb_core::Result<Vec<_>>>()?;
        let x_a = PartitionK::from_classes(n, n, classes)?;
        // Y_n G by right translates, A X_n as the A-orbits.
        let mut translates = Vec::with_capacity(g_elements.len());
        for s in &g_elements {
            translates.push(right_translate(&y_n, s)?);
        }
        let y_g = PartitionK::from_classes(n, n, translates)?;
        let a_x = right_coset_partition(&a, &x_n)?;
        let gens: Vec<String> = h.generators.iter().map(|p| p.to_string()).collect();
        for (ok, what) in [(left == x_a, "G Y_n != X_n A"), (y_g == a_x, "Y_n G != A X_n")] {
            if ok {
                c.pass();
            } else {
                c.fail(&e.group, json!({"subgroup": gens, "identity": what}), what);
            }
        }
    }
    c.note(format!("{} subgroups", subs.len()));
    Ok(Some(c))
}

fn lattice(e: &Entry) -> Check {
    if e.order > 24 || e.degree == 0 {
        return Ok(None);
    }
    let n = e.degree;
    let scope = Scope { k_min: Some(n), k_max: Some(n), bound: "all subgroup pairs, |G| <= 24".into() };
    let mut c = ClaimCheck::new("lattice", e, scope);
    let Some(subs) = full_lattice(&e.group, 10_000)? else {
        c.inconclusive("subgroup lattice too large");
        return Ok(Some(c));
    };
    let ident: Vec<u16> = (0..n as u16).collect();
    let cover = |a: &PermGroup| -> korb_core::Result<PartitionK> {
        left_coset_cover(&e.group, &kset_of(n, n, orbit_rows(a, &ident))?)
    };
    let groups: Vec<PermGroup> = subs.iter().map(|s| s.to_group()).collect();
    let covers: Vec<PartitionK> = groups.iter().map(&cover).collect::<korb_core::Result<_>>()?;
    for i in 0..subs.len() {
        for j in i..subs.len() {
            let common: Vec<Permutation> = subs[i].elements.iter().filter(|x| subs[j].elements.contains(x)).cloned().collect();
            let inter = PermGroup::new(n, common)?;
            let mut gens = subs[i].generators.clone();
            gens.extend(subs[j].generators.iter().cloned());
            let generated = PermGroup::new(n, gens)?;
            let pair = || {
                json!({"a": subs[i].generators.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                       "b": subs[j].generators.iter().map(|p| p.to_string()).collect::<Vec<_>>()})
            };
            if meet(&covers[i], &covers[j])? == cover(&inter)? {
                c.pass();
            } else {
                c.fail(&e.group, pair(), "G A meet G B differs from G(A and B)");
            }
            if join(&covers[i], &covers[j])? == cover(&generated)? {
                c.pass();
            } else {
                c.fail(&e.group, pair(), "G A join G B differs from G<A,B>");
            }
        }
    }
    c.note(format!("{} subgroups", subs.len()));
    Ok(Some(c))
}

fn simple(e: &Entry) -> Check {
    if e.order > COSET_ORDER_LIMIT || e.degree == 0 {
        return Ok(None);
    }
    let n = e.degree;
    let scope = Scope { k_min: Some(n), k_max: Some(n), bound: format!("full subgroup lattice, |G| <= {COSET_ORDER_LIMIT}") };
    let mut c = ClaimCheck::new("simple", e, scope);
    let Some(subs) = full_lattice(&e.group, 20_000)? else {
        c.inconclusive("subgroup lattice too large");
        return Ok(Some(c));
    };
    let mut found: Option<PermGroup> = None;
    for h in &subs {
        if h.order() == 1 || h.order() as u64 == e.order {
            continue;
        }
        let a = Arc::new(h.to_group());
        c.counts.checked += 1;
        if korb_core::aut::normality_witness(&a, &e.group, n)?.all_equal() {
            found = Some((*a).clone());
            break;
        }
    }
    let conj = normal_subgroup_witness(&e.group)?;
    let params = |w: &Option<PermGroup>| -> Value {
        match w {
            Some(a) => json!({"normal": a.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>(), "order": a.order().unwrap_or(0)}),
            None => json!({"normal": null}),
        }
    };
    match (&found, &conj) {
        (Some(a), Some(_)) => {
            c.counts.passed += 1;
            c.detail = format!("not simple: A X_n = X_n A for A of order {} generated by {}", a.order()?, gens_text(a));
        }
        (None, None) => {
            c.counts.passed += 1;
            c.detail = if e.order == 1 { "trivial group".into() } else { "simple: A X_n != X_n A for every proper nontrivial A".into() };
        }
        _ => {
            c.counts.checked += 1;
            c.fail(&e.group, json!({"orbit_route": params(&found), "conjugation_route": params(&conj)}), "orbit and conjugation routes disagree");
        }
    }
    Ok(Some(c))
}

fn gens_text(g: &PermGroup) -> String {
    let v: Vec<String> = g.generators().iter().filter(|p| !p.is_identity()).map(|p| p.to_string()).collect();
    if v.is_empty() {
        "()".into()
    } else {
        v.join(", ")
    }
}

const DIVIDES_ORDER_LIMIT: u64 = 1440;

fn divides(e: &Entry, ctx: &Ctx) -> Check {
    if e.order > DIVIDES_ORDER_LIMIT || e.degree < 2 {
        return Ok(None);
    }
    let scope = Scope { k_min: Some(2), k_max: Some(2), bound: "2-orbits of at most 90 pairs; all 2-subsets up to 400, else 400 sampled, plus 60 sampled larger subsets".into() };
    let mut c = ClaimCheck::new("divides", e, scope);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let order = e.order;
    for orbit in orbits_k(&e.group, 2, DEFAULT_TUPLE_BUDGET)? {
        let x = &orbit.set;
        let m = x.len();
        if m < 2 || m > 90 {
            continue;
        }
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        if m * (m - 1) / 2 <= 400 {
            subsets.extend(combinations(m, 2));
        } else {
            subsets.extend((0..400).map(|_| sample_indices(&mut rng, m, 2)));
        }
        if m > 3 {
            subsets.extend((0..60).map(|_| {
                let s = rng.gen_range(3..=m.min(6).max(3).min(m - 1));
                sample_indices(&mut rng, m, s)
            }));
        }
        for idx in subsets {
            let y = kset_of(2, e.degree, idx.iter().map(|&i| x.tuple(i).to_vec()).collect())?;
            let family = left_coset_cover(&e.group, &y)?.len() as u64;
            if order % (y.len() as u64 * family) != 0 {
                continue;
            }
            let stab = setwise_stabilizer(&e.group, &y, 1 << 20)?;
            let s = stab.order()?;
            if s * family != order {
                c.inconclusive("stabilizer and family sizes disagree");
                continue;
            }
            if orbit_rows(&stab, y.tuple(0)).len() == y.len() {
                c.pass();
            } else {
                let params = json!({"k": 2, "y": rows_1based(y.iter()), "family": family, "stabilizer_order": s});
                c.fail(&e.group, params, format!("|Y| |G Y| = {} divides {order} but Stab(Y) is not transitive on Y", y.len() as u64 * family));
            }
        }
    }
    Ok(Some(c))
}

fn sample_indices(rng: &mut ChaCha8Rng, m: usize, s: usize) -> Vec<usize> {
    let mut idx = rand::seq::index::sample(rng, m, s).into_vec();
    idx.sort_unstable();
    idx
}

fn primes_upto(n: usize) -> Vec<usize> {
    (2..=n).filter(|&p| korb_core::group::is_prime(p as u64)).collect()
}

fn local(e: &Entry, ctx: &Ctx) -> Check {
    let n = e.degree;
    if n < 2 {
        return Ok(None);
    }
    let scope = Scope { k_min: Some(2), k_max: Some(2), bound: "every 2-orbit, primes 2 <= p <= n".into() };
    let mut c = ClaimCheck::new("local", e, scope);
    for orbit in orbits_k(&e.group, 2, DEFAULT_TUPLE_BUDGET)? {
        let x = &orbit.set;
        let aut_order = aut_of_kset(x)?.order()?;
        for p in primes_upto(n) {
            if aut_order % p as u64 != 0 {
                continue;
            }
            let r = local_property_check(x, p, ctx.budget)?;
            if r.rcycles == 0 {
                continue;
            }
            match r.unrealized.first() {
                None => c.pass(),
                Some(rc) => {
                    let cycle: Vec<usize> = rc.cycle.iter().map(|v| v + 1).collect();
                    let params = json!({"k": 2, "p": p, "tuple": tuple_1based(x.tuple(0)), "rcycle": cycle});
                    c.fail(&e.group, params, format!("a ({p},2)-rcycle has no realizing automorphism"));
                }
            }
        }
    }
    Ok(Some(c))
}

fn pair_structure(n: usize, x: &KSet) -> korb_core::Result<ColoredPairStructure> {
    ColoredPairStructure::from_fn(n, |u, v| {
        if u == v {
            2
        } else {
            x.contains(&[u as u16, v as u16]) as u32
        }
    })
}

fn two_closed(e: &Entry, ctx: &Ctx) -> Check {
    let n = e.degree;
    if !e.transitive || n < 4 || (n > 8 && !e.name.starts_with("example ")) {
        return Ok(None);
    }
    let scope = Scope { k_min: Some(2), k_max: Some(2), bound: "transitive groups of degree 4..8 and the bundled examples".into() };
    let mut c = ClaimCheck::new("two-closed", e, scope);
    let orbits: Vec<KSet> = orbits_k(&e.group, 2, DEFAULT_TUPLE_BUDGET)?.into_iter().map(|o| o.set).collect();
    let mut hit: Option<(usize, usize)> = None;
    'search: for i in 0..orbits.len() {
        for j in 0..orbits.len() {
            if i == j || !disjoint_pair(&orbits[i], &orbits[j]) {
                continue;
            }
            let (a, b) = (pair_structure(n, &orbits[i])?, pair_structure(n, &orbits[j])?);
            if find_isomorphism(&a, &b, &NoConstraint, ctx.budget)?.is_some() {
                hit = Some((i, j));
                break 'search;
            }
        }
    }
    let Some((i, j)) = hit else {
        c.note("hypothesis not met: no two distinct isomorphic projections on disjoint 2-subspaces");
        return Ok(Some(c));
    };
    let closure = two_closure(&e.group, ctx.budget)?.order()?;
    let params = json!({"k": 2, "first": tuple_1based(orbits[i].tuple(0)), "second": tuple_1based(orbits[j].tuple(0)), "closure_order": closure});
    if closure == e.order {
        c.pass();
        c.note("isomorphic projections found; G is 2-closed");
    } else {
        c.fail(&e.group, params, format!("isomorphic projections, but the 2-closure has order {closure}"));
    }
    Ok(Some(c))
}

/// Whether some tuples of `a` and `b` have disjoint supports.
fn disjoint_pair(a: &KSet, b: &KSet) -> bool {
    a.iter().any(|s| b.iter().any(|t| s.iter().all(|v| !t.contains(v))))
}

fn coherence_options(ctx: &Ctx) -> CoherenceOptions {
    let mut o = CoherenceOptions::default();
    o.scan.seed = ctx.seed;
    o.scan.samples = 200;
    o.scan.closure_cap = 1000;
    o.budget = ctx.budget;
    o
}

fn coherence(e: &Entry, ctx: &Ctx) -> Check {
    let n = e.degree;
    if !e.transitive || n < 3 {
        return Ok(None);
    }
    let kmax = 3.min(n - 1);
    let mut scope = Scope { bound: "Aut(X) subgroup lattice up to order 720, else 200 sampled subgroups of order at most 1000".into(), ..Scope::default() };
    k_range(&mut scope, 2, kmax);
    let mut c = ClaimCheck::new("coherence", e, scope);
    let opts = coherence_options(ctx);
    for k in 2..=kmax {
        for orbit in orbits_k(&e.group, k, DEFAULT_TUPLE_BUDGET)? {
            if !is_rorbit(&orbit.set, &e.group)? {
                continue;
            }
            let r = coherence_classify_with(&orbit, &opts)?;
            let expect_primitive = match (r.verdict, &r.elementary) {
                (CoVerdict::Incoherent, _) => false,
                (CoVerdict::Coherent, Elementary::Yes { .. }) => true,
                _ => continue,
            };
            let aut = aut_of_kset(&orbit.set)?;
            let primitive = matches!(aut.is_primitive(), Primitivity::Primitive | Primitivity::TrivialPrimitive);
            if primitive == expect_primitive {
                c.pass();
                continue;
            }
            let sampled = matches!(r.elementary, Elementary::Yes { exhaustive: false });
            if expect_primitive && sampled {
                c.inconclusive("elementary by a sampled subgroup scan, Aut imprimitive");
                continue;
            }
            let what = if expect_primitive { "elementary coherent rorbit with imprimitive Aut" } else { "incoherent rorbit with primitive Aut" };
            let params = json!({"k": k, "tuple": tuple_1based(orbit.set.tuple(0)), "aut_order": r.aut_order});
            c.fail(&e.group, params, what);
        }
    }
    Ok(Some(c))
}

fn not_divides(e: &Entry, ctx: &Ctx) -> Check {
    let n = e.degree;
    if !e.transitive || n < 3 {
        return Ok(None);
    }
    let mut scope = Scope { bound: "elementary by Aut(X) lattice up to order 720, else 200 sampled subgroups of order at most 1000".into(), ..Scope::default() };
    k_range(&mut scope, 2, 3.min(n - 1));
    let mut c = ClaimCheck::new("not-divides", e, scope);
    for r in check_not_divides(&e.group, 3, &coherence_options(ctx))? {
        match r.verdict {
            NotDividesVerdict::Pass => c.pass(),
            NotDividesVerdict::Inconclusive => c.inconclusive(format!("{} divides {n}; elementary by sampled scan", r.k)),
            NotDividesVerdict::Fail => {
                let params = json!({"k": r.k, "tuple": tuple_1based(&r.representative), "orbit_size": r.orbit_size});
                c.fail(&e.group, params, format!("elementary coherent {}-rorbit with {} | {n}", r.k, r.k));
            }
        }
    }
    Ok(Some(c))
}

fn scan_options(ctx: &Ctx) -> ScanOptions {
    ScanOptions { seed: ctx.seed, ..ScanOptions::default() }
}

fn qgdn(e: &Entry, ctx: &Ctx) -> Check {
    if !e.transitive || e.degree < 2 {
        return Ok(None);
    }
    let scope = Scope { bound: "subgroup lattice up to order 720, else 10000 sampled subgroups".into(), ..Scope::default() };
    let mut c = ClaimCheck::new("qgdn", e, scope);
    let r = qgdn_check(&e.group, &scan_options(ctx))?;
    match r.verdict {
        QgdnVerdict::Pass => {
            c.pass();
            if let Some((gens, blocks)) = &r.witness {
                let g: Vec<String> = gens.iter().map(|p| p.to_string()).collect();
                c.detail = format!("q = {}, {} blocks, subgroup {}", r.q, blocks.len(), g.join(", "));
            }
        }
        QgdnVerdict::Inconclusive => c.inconclusive(format!("q = {}: none among {} sampled subgroups", r.q, r.scan.examined)),
        QgdnVerdict::Fail => {
            c.fail(&e.group, json!({"q": r.q, "examined": r.scan.examined}), format!("no transitive subgroup with blocks of size {}", r.q));
        }
    }
    Ok(Some(c))
}

fn polycirc(e: &Entry, ctx: &Ctx) -> Check {
    if !e.transitive || e.degree < 2 {
        return Ok(None);
    }
    let scope = Scope { bound: "construction from p-block systems, then exhaustive search over the 2-closure".into(), ..Scope::default() };
    let mut c = ClaimCheck::new("polycirc", e, scope);
    let mut opts = PolycircOptions::default();
    opts.scan.seed = ctx.seed;
    opts.max_nodes = opts.max_nodes.max(ctx.budget.max_nodes);
    match polycirculant_witness_with(&e.group, &opts)? {
        PolycircOutcome::Witness(w) => {
            let ok = is_regular_element(&w.element) == Some(w.cycle_len) && orbital_coloring(&e.group).preserved_by(&w.element);
            if ok {
                c.pass();
                c.detail = format!("{} of cycle length {} by {}{}", w.element, w.cycle_len, w.method.name(), if w.in_group { ", in G" } else { "" });
            } else {
                c.fail(&e.group, json!({"element": w.element.to_string()}), "witness is not a semiregular element of the 2-closure");
            }
        }
        PolycircOutcome::CounterexampleCandidate { degree, order } => {
            c.fail(&e.group, json!({"degree": degree, "closure_order": order}), "counterexample candidate: no semiregular element in the 2-closure");
        }
    }
    Ok(Some(c))
}

fn involution(e: &Entry, ctx: &Ctx) -> Check {
    if e.primitivity != "primitive" || e.degree < 2 {
        return Ok(None);
    }
    let scope = Scope { bound: "2000 uniform random elements".into(), ..Scope::default() };
    let mut c = ClaimCheck::new("involution", e, scope);
    if e.order % 2 == 1 {
        c.fail(&e.group, json!({"order": e.order}), format!("primitive of odd order {}", e.order));
        return Ok(Some(c));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let chain = e.group.chain();
    for _ in 0..2000 {
        let x = chain.random_element(&mut rng);
        let o = x.order();
        if o % 2 == 0 {
            let t = x.pow(o / 2);
            if t.order() == 2 && e.group.contains(&t)? {
                c.pass();
                c.detail = format!("involution {t}");
                return Ok(Some(c));
            }
        }
    }
    c.inconclusive("no involution among the sampled elements");
    Ok(Some(c))
}

fn incoh_simple(e: &Entry, ctx: &Ctx) -> Check {
    let n = e.degree;
    if !e.transitive || n < 3 {
        return Ok(None);
    }
    let kmax = 3.min(n - 1);
    let mut systems: Vec<(usize, Vec<u16>, Vec<Vec<usize>>)> = Vec::new();
    for k in 2..=kmax {
        for orbit in orbits_k(&e.group, k, DEFAULT_TUPLE_BUDGET)? {
            let mut supports = orbit.set.tuple_supports();
            if support_verdict(&supports, n, k) != CoVerdict::Incoherent {
                continue;
            }
            supports.sort();
            if !systems.iter().any(|(_, _, s)| *s == supports) {
                systems.push((k, orbit.set.tuple(0).to_vec(), supports));
            }
        }
    }
    if systems.is_empty() {
        return Ok(None);
    }
    let mut scope = Scope { bound: "normal closure of a block-kernel element; conjugacy classes for trivial kernels up to order 5000".into(), ..Scope::default() };
    k_range(&mut scope, 2, kmax);
    let mut c = ClaimCheck::new("incoh-simple", e, scope);
    for (k, rep, blocks) in systems {
        let params = json!({"k": k, "tuple": tuple_1based(&rep)});
        match incoherent_normal_subgroup(&e.group, &blocks, ctx.budget.max_nodes)? {
            Some(h) => {
                let order = h.order()?;
                let normal = e.group.generators().iter().all(|g| {
                    h.generators().iter().all(|x| g.conjugate(x).ok().is_some_and(|y| h.contains(&y).unwrap_or(false)))
                });
                if normal && order > 1 && order < e.order && h.is_subgroup_of(&e.group)? {
                    c.pass();
                    c.note(format!("normal subgroup of order {order}"));
                } else {
                    c.fail(&e.group, params, "returned subgroup is not proper, nontrivial and normal");
                }
            }
            None if e.order <= 5000 => c.fail(&e.group, params, "no proper nontrivial normal subgroup"),
            None => c.inconclusive("trivial block kernel and |G| above 5000"),
        }
    }
    Ok(Some(c))
}

/// Pair classes of the Y10 projection on coordinates 1 and 2, split by
/// connected support.
pub fn y10_projection_split() -> Result<Vec<(Vec<usize>, Vec<(usize, usize)>)>, String> {
    let y = reconstruct_paper_example("Y10").map_err(|e| e.to_string())?;
    let p = project(&y.set, &Subspace::new(vec![0, 1]).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let pairs: Vec<(usize, usize)> = p.iter().map(|t| (t[0] as usize, t[1] as usize)).collect();
    let mut comp: HashMap<usize, usize> = HashMap::new();
    let mut next = 0;
    for &(u, v) in &pairs {
        let (cu, cv) = (comp.get(&u).copied(), comp.get(&v).copied());
        match (cu, cv) {
            (None, None) => {
                comp.insert(u, next);
                comp.insert(v, next);
                next += 1;
            }
            (Some(a), None) => {
                comp.insert(v, a);
            }
            (None, Some(b)) => {
                comp.insert(u, b);
            }
            (Some(a), Some(b)) if a != b => {
                for c in comp.values_mut() {
                    if *c == b {
                        *c = a;
                    }
                }
            }
            _ => {}
        }
    }
    let mut parts: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    let mut by: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &(u, v) in &pairs {
        by.entry(comp[&u]).or_default().push((u + 1, v + 1));
    }
    for (_, ps) in by {
        let mut support: Vec<usize> = ps.iter().flat_map(|&(u, v)| [u, v]).collect();
        support.sort_unstable();
        support.dedup();
        parts.insert(support, ps);
    }
    Ok(parts.into_iter().collect())
}

/// The two expected classes, with the tenth point written as 10.
pub const PETERSEN_SPLIT: [&[(usize, usize)]; 2] =
    [&[(1, 4), (1, 5), (5, 8), (4, 10), (10, 8)], &[(2, 3), (3, 6), (2, 9), (7, 9), (6, 7)]];

fn unordered(ps: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = ps.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn petersen_check(e: &Entry, ctx: &Ctx) -> Check {
    let scope = Scope { k_min: Some(2), k_max: Some(2), bound: "exact".into() };
    let mut c = ClaimCheck::new("petersen", e, scope);
    let g = &e.group;
    let mut facts: Vec<String> = Vec::new();
    let mut check = |c: &mut ClaimCheck, ok: bool, what: String| {
        if ok {
            c.pass();
        } else {
            c.fail(g, json!({"check": what.clone()}), what.clone());
        }
        facts.push(what);
    };
    check(&mut c, e.order == 120, format!("order {}", e.order));
    check(&mut c, g.is_transitive() && e.degree == 10, format!("transitive on {} points", e.degree));
    let mut sizes: Vec<usize> = orbits_k(g, 2, DEFAULT_TUPLE_BUDGET)?.iter().map(|o| o.len()).collect();
    sizes.sort_unstable();
    check(&mut c, sizes == [30, 60], format!("2-orbit sizes {sizes:?}"));
    let edges: Vec<(usize, usize)> = {
        let x = orbits_k(g, 2, DEFAULT_TUPLE_BUDGET)?.into_iter().find(|o| o.len() == 30).map(|o| o.set);
        x.map(|x| x.iter().filter(|t| t[0] < t[1]).map(|t| (t[0] as usize, t[1] as usize)).collect()).unwrap_or_default()
    };
    let graph = Graph::new(10, &edges)?;
    let op = orbit_partition(&graph, ctx.budget)?;
    let mut classes: Vec<usize> = op.pair_class_sizes.clone();
    classes.sort_unstable();
    let exact = matches!(op.status, OrbitStatus::Exact { .. });
    check(&mut c, exact && classes.contains(&30) && classes.contains(&60), format!("graph pair classes {classes:?}"));
    let mut opts = PolycircOptions::default();
    opts.scan.seed = ctx.seed;
    let ell = polycirculant_witness_with(g, &opts)?.witness().map(|w| w.cycle_len);
    check(&mut c, ell == Some(5), format!("semiregular element of cycle length {ell:?}"));
    let split = y10_projection_split().map_err(Error::InvalidInput)?;
    let got: Vec<Vec<(usize, usize)>> = split.iter().map(|(_, ps)| unordered(ps)).collect();
    let want: Vec<Vec<(usize, usize)>> = PETERSEN_SPLIT.iter().map(|ps| unordered(ps)).collect();
    let supports: Vec<Vec<usize>> = split.iter().map(|(s, _)| s.clone()).collect();
    check(&mut c, got == want, format!("Y10 projection supports {supports:?}"));
    c.detail = facts.join("; ");
    Ok(Some(c))
}

/// JSON lines, one check per line.
pub fn to_json_lines(checks: &[ClaimCheck]) -> String {
    let mut s = String::new();
    for c in checks {
        s.push_str(&serde_json::to_string(c).expect("serializable"));
        s.push('\n');
    }
    s
}

/// Per-claim totals: groups checked and verdict counts.
pub fn tally(checks: &[ClaimCheck]) -> Vec<(String, usize, usize, usize, usize)> {
    let mut out: Vec<(String, usize, usize, usize, usize)> = Vec::new();
    for c in checks {
        let i = match out.iter().position(|r| r.0 == c.claim) {
            Some(i) => i,
            None => {
                out.push((c.claim.clone(), 0, 0, 0, 0));
                out.len() - 1
            }
        };
        let r = &mut out[i];
        r.1 += 1;
        match c.verdict {
            Verdict::Pass => r.2 += 1,
            Verdict::Fail => r.3 += 1,
            Verdict::Inconclusive => r.4 += 1,
        }
    }
    out
}

/// The human-readable summary table.
pub fn summary(checks: &[ClaimCheck]) -> String {
    let mut s = format!("{:<14} {:>7} {:>6} {:>6} {:>13}\n", "claim", "groups", "pass", "fail", "inconclusive");
    for (claim, groups, pass, fail, inc) in tally(checks) {
        s.push_str(&format!("{claim:<14} {groups:>7} {pass:>6} {fail:>6} {inc:>13}\n"));
    }
    for c in checks.iter().filter(|c| c.verdict == Verdict::Fail) {
        s.push_str(&format!("fail {} on {}: {}\n", c.claim, c.group, c.detail));
    }
    s.push_str(&format!("note: {EVIDENCE_NOTE}\n"));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_catalog;

    fn entry(name: &str, g: PermGroup) -> Entry {
        Entry::new(name, g)
    }

    fn run(claim: &str, e: &Entry) -> ClaimCheck {
        run_claim(claim, e, &LabOptions::default()).expect("in scope")
    }

    #[test]
    fn homo_on_small_groups() {
        for g in [PermGroup::symmetric(3), PermGroup::symmetric(4), PermGroup::alternating(4), PermGroup::dihedral(4), PermGroup::cyclic(6)] {
            let c = run("homo", &entry("g", g));
            assert_eq!(c.verdict, Verdict::Pass);
            assert!(c.counts.checked > 0);
        }
    }

    #[test]
    fn simple_flags() {
        let a5 = run("simple", &entry("A5", PermGroup::alternating(5)));
        assert_eq!(a5.verdict, Verdict::Pass);
        assert!(a5.detail.starts_with("simple"), "{}", a5.detail);
        for g in [PermGroup::symmetric(4), PermGroup::alternating(4)] {
            let c = run("simple", &entry("g", g));
            assert_eq!(c.verdict, Verdict::Pass);
            assert!(c.detail.contains("order 4"), "{}", c.detail);
        }
    }

    #[test]
    fn divides_counterexample_replays() {
        let c = run("divides", &entry("S5", PermGroup::symmetric(5)));
        assert_eq!(c.verdict, Verdict::Fail);
        assert_eq!(replay(&c, &LabOptions::default()).unwrap(), Verdict::Fail);
        let w = c.witness.unwrap();
        let y = w.params["y"].as_array().unwrap();
        assert_eq!(y.len(), 2);
    }

    #[test]
    fn involution_misses_odd_primitive() {
        let g = crate::catalog::affine_line(7, 3, false);
        let c = run("involution", &entry("AGL1_7_d3", g));
        assert_eq!(c.verdict, Verdict::Fail);
        assert!(run_claim("involution", &entry("C7", PermGroup::cyclic(7)), &LabOptions::default()).is_none());
        assert_eq!(run("involution", &entry("S5", PermGroup::symmetric(5))).verdict, Verdict::Pass);
    }

    #[test]
    fn petersen_anchors() {
        let c = run("petersen", &entry("Petersen", petersen()));
        assert_eq!(c.verdict, Verdict::Pass, "{}", c.detail);
        let split = y10_projection_split().unwrap();
        assert_eq!(split[0].0, [1, 4, 5, 8, 10]);
        assert_eq!(split[1].0, [2, 3, 6, 7, 9]);
    }

    #[test]
    fn suites_are_deterministic() {
        let cat = build_catalog(6, 4, 1);
        let claims = ["homo", "lattice", "polycirc"];
        let one = run_suite(&cat, &claims, &LabOptions { jobs: 1, ..LabOptions::default() }).unwrap();
        let many = run_suite(&cat, &claims, &LabOptions { jobs: 4, ..LabOptions::default() }).unwrap();
        assert_eq!(to_json_lines(&one), to_json_lines(&many));
        assert!(one.iter().all(|c| c.verdict == Verdict::Pass));
    }

    #[test]
    fn suite_names() {
        assert_eq!(resolve_suites(&["all".into()]).unwrap().len(), CLAIMS.len());
        assert!(resolve_suites(&["nope".into()]).is_err());
    }
}
