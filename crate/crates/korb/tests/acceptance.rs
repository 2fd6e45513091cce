//! One line per acceptance criterion. Runs without the libtest harness so
//! every line is printed. The process fails when a criterion fails that is
//! not in `KNOWN_FAILING`.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use korb::catalog::{build_catalog, petersen, Catalog};
use korb::data::reconstruct_paper_example;
use korb::lab::{replay, run_suite, summary, LabOptions, Verdict, EVIDENCE_NOTE};
use korb_core::aut::{aut_of_kset, classify_k_defined, ClosureMode, SearchBudget};
use korb_core::gi::{isomorphic, orbit_partition, Graph, IsoAnswer, OrbitStatus};
use korb_core::korbit::{
    act_left, act_right, homogeneity_check, join, meet, multiproject, orbits_k, project, refines, right_translate, KSet,
    PartitionK, Subspace, DEFAULT_TUPLE_BUDGET,
};
use korb_core::structure::{polycirculant_witness, PolycircOutcome};
use korb_core::{is_regular_element, PermGroup, Permutation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PETERSEN_LIMIT: Duration = Duration::from_secs(10);
const MATCHING_LIMIT: Duration = Duration::from_secs(5);
const MD_LIMIT: Duration = Duration::from_secs(1);
const SWEEP_LIMIT: Duration = Duration::from_secs(600);
const GI_LIMIT: Duration = Duration::from_secs(900);
const MIN_TRANSITIVE: usize = 100;
const GI_GRAPHS: usize = 2000;
const GI_PAIRS: usize = 500;
const ALGEBRA_CHECKS: usize = 10_000;
const SEED: u64 = 20_240_601;
/// Criteria whose claims have counterexamples in the catalog. They still
/// print FAIL.
const KNOWN_FAILING: &[usize] = &[6];

const LEMMA_SUITES: &[&str] =
    &["homo", "coset-eq", "lattice", "divides", "local", "coherence", "not-divides", "involution", "incoh-simple"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn two_orbit_sizes(g: &Arc<PermGroup>) -> Vec<usize> {
    let mut s: Vec<usize> = orbits_k(g, 2, DEFAULT_TUPLE_BUDGET).unwrap().iter().map(|o| o.len()).collect();
    s.sort_unstable();
    s
}

fn petersen_case() -> Outcome {
    let t = Instant::now();
    let g = Arc::new(petersen());
    let order = g.order().unwrap();
    let transitive = g.is_transitive();
    let sizes = two_orbit_sizes(&g);
    let ell = polycirculant_witness(&g).unwrap().witness().map(|w| w.cycle_len);
    let dt = t.elapsed();
    let pass = order == 120 && transitive && sizes == [30, 60] && ell == Some(5) && dt < PETERSEN_LIMIT;
    outcome(pass, format!("|G| = {order}, transitive {transitive}, 2-orbits {sizes:?}, cycle length {ell:?}, {}", secs(dt)))
}

fn matching_case() -> Outcome {
    let t = Instant::now();
    let x = KSet::from_digit_strings(6, &["14", "25", "36", "41", "52", "63"]).unwrap();
    let a = Arc::new(aut_of_kset(&x).unwrap());
    let order = a.order().unwrap();
    let listing = reconstruct_paper_example("X2'").unwrap().set;
    let orbits = orbits_k(&a, 2, DEFAULT_TUPLE_BUDGET).unwrap();
    let second = orbits.iter().find(|o| o.set != x).map(|o| o.set.clone());
    let matches = second.as_ref() == Some(&listing);
    let report = classify_k_defined(&a, 3, ClosureMode::Direct, SearchBudget::default()).unwrap();
    let dt = t.elapsed();
    let pass = order == 48 && orbits.len() == 2 && listing.len() == 24 && matches && report.least_k == Some(2) && dt < MATCHING_LIMIT;
    outcome(
        pass,
        format!(
            "|Aut| = {order}, second 2-orbit {} pairs, equals listing {matches}, least k {:?}, {}",
            second.map_or(0, |s| s.len()),
            report.least_k,
            secs(dt)
        ),
    )
}

fn md_case() -> Outcome {
    let t = Instant::now();
    let a = PermGroup::from_cycle_strings(5, &["(1 2 3 4 5)", "(1 2 4 3)"]).unwrap().order().unwrap();
    let b = PermGroup::from_cycle_strings(5, &["(1 2 3)(4 5)", "(2 3)"]).unwrap().order().unwrap();
    let dt = t.elapsed();
    outcome(a == 20 && b == 12 && dt < MD_LIMIT, format!("orders {a} and {b}, {}", secs(dt)))
}

fn polycirc_sweep(cat: &Catalog) -> Outcome {
    let t = Instant::now();
    let groups: Vec<_> = cat.transitive().filter(|e| (2..=10).contains(&e.degree)).collect();
    let mut misses = Vec::new();
    for e in &groups {
        let orbits = orbits_k(&e.group, 2, DEFAULT_TUPLE_BUDGET).unwrap();
        match polycirculant_witness(&e.group).unwrap() {
            PolycircOutcome::Witness(w) => {
                let regular = is_regular_element(&w.element) == Some(w.cycle_len);
                let in_closure = orbits.iter().all(|o| act_left(&w.element, &o.set).unwrap() == o.set);
                if !(regular && in_closure) {
                    misses.push(format!("{}: bad witness {}", e.name, w.element));
                }
            }
            PolycircOutcome::CounterexampleCandidate { degree, order } => {
                misses.push(format!("{}: counterexample candidate, degree {degree}, closure order {order}", e.name))
            }
        }
    }
    let dt = t.elapsed();
    let pass = groups.len() >= MIN_TRANSITIVE && misses.is_empty() && dt < SWEEP_LIMIT;
    let mut detail = format!("{} transitive groups, {} witnesses, {}", groups.len(), groups.len() - misses.len(), secs(dt));
    for m in misses {
        detail.push_str(&format!("\n    {m}"));
    }
    outcome(pass, detail)
}

fn brute_isos(a: &Graph, b: &Graph, first_only: bool) -> Vec<Vec<usize>> {
    fn go(a: &Graph, b: &Graph, map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>, first: bool) {
        if first && !out.is_empty() {
            return;
        }
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
            go(a, b, map, used, out, first);
            map.pop();
            used[w] = false;
        }
    }
    let mut out = Vec::new();
    if a.order() == b.order() && a.edges().len() == b.edges().len() {
        go(a, b, &mut Vec::new(), &mut vec![false; a.order()], &mut out, first_only);
    }
    out
}

fn brute_orbits(g: &Graph) -> Vec<Vec<usize>> {
    let auts = brute_isos(g, g, false);
    let mut out: Vec<Vec<usize>> = (0..g.order())
        .map(|v| auts.iter().map(|m| m[v]).collect::<BTreeSet<_>>().into_iter().collect())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    out.sort();
    out
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p: f64 = rng.gen_range(0.1..0.9);
    let e: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
    Graph::new(n, &e).unwrap()
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::from_images(&v).unwrap()
}

fn gi_case() -> Outcome {
    let t = Instant::now();
    let budget = SearchBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut graphs: Vec<Graph> = Vec::new();
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let e: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            graphs.push(Graph::new(n, &e).unwrap());
        }
    }
    let exhaustive = graphs.len();
    for _ in 0..GI_GRAPHS {
        let n = rng.gen_range(1..=8);
        graphs.push(random_graph(&mut rng, n));
    }
    let (mut orbit_wrong, mut orbit_undecided) = (0, 0);
    for g in &graphs {
        let op = orbit_partition(g, budget).unwrap();
        if op.status == OrbitStatus::RefinementStableUnverified {
            orbit_undecided += 1;
            continue;
        }
        let mut got = op.vertex_classes.clone();
        got.sort();
        if got != brute_orbits(g) {
            orbit_wrong += 1;
        }
    }
    let (mut iso_wrong, mut iso_undecided, mut iso_yes) = (0, 0, 0);
    for i in 0..GI_PAIRS {
        let n = rng.gen_range(1..=8);
        let a = random_graph(&mut rng, n);
        let b = if i % 2 == 0 {
            a.relabel(&random_perm(&mut rng, n)).unwrap()
        } else {
            let m = a.edges().len();
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let e: Vec<(usize, usize)> = pairs.choose_multiple(&mut rng, m).copied().collect();
            Graph::new(n, &e).unwrap()
        };
        let expected = !brute_isos(&a, &b, true).is_empty();
        match isomorphic(&a, &b, budget).unwrap() {
            IsoAnswer::Yes { bijection } => {
                iso_yes += 1;
                if !expected || !a.is_isomorphism(&b, &bijection) {
                    iso_wrong += 1;
                }
            }
            IsoAnswer::No { .. } => {
                if expected {
                    iso_wrong += 1;
                }
            }
            IsoAnswer::Undecided => iso_undecided += 1,
        }
    }
    let dt = t.elapsed();
    let pass = orbit_wrong == 0 && iso_wrong == 0 && dt < GI_LIMIT;
    outcome(
        pass,
        format!(
            "{} graphs ({exhaustive} exhaustive for n <= 5, {GI_GRAPHS} seeded for n <= 8): {orbit_wrong} wrong, {orbit_undecided} undecided; \
             {GI_PAIRS} pairs: {iso_yes} isomorphic, {iso_wrong} wrong, {iso_undecided} undecided; {}",
            graphs.len(),
            secs(dt)
        ),
    )
}

fn lemma_case(cat: &Catalog) -> Outcome {
    let t = Instant::now();
    let opts = LabOptions { seed: SEED, ..LabOptions::default() };
    let mut claims: Vec<&str> = LEMMA_SUITES.to_vec();
    claims.push("simple");
    let checks = run_suite(cat, &claims, &opts).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for claim in LEMMA_SUITES {
        let mine: Vec<_> = checks.iter().filter(|c| c.claim == *claim).collect();
        let fails: Vec<_> = mine.iter().filter(|c| c.verdict == Verdict::Fail).collect();
        let inc = mine.iter().filter(|c| c.verdict == Verdict::Inconclusive).count();
        if !fails.is_empty() || inc > 0 || mine.is_empty() {
            pass = false;
        }
        let replays = fails.iter().all(|c| replay(c, &opts) == Ok(Verdict::Fail));
        detail.push_str(&format!(
            "\n    {claim}: {} groups, {} fail, {inc} inconclusive{}{}",
            mine.len(),
            fails.len(),
            fails.first().map(|c| format!(", first witness {}", c.group)).unwrap_or_default(),
            if replays { "" } else { ", a witness did not replay" }
        ));
        pass &= replays;
    }
    let simple = |name: &str| checks.iter().find(|c| c.claim == "simple" && c.group == name).map(|c| c.detail.clone()).unwrap_or_default();
    let (a5, s4, a4) = (simple("A5"), simple("S4"), simple("A4"));
    let flags = a5.starts_with("simple") && s4.starts_with("not simple") && s4.contains("order 4") && a4.starts_with("not simple") && a4.contains("order 4");
    pass &= flags;
    let noted = summary(&checks).contains(EVIDENCE_NOTE);
    pass &= noted;
    detail.push_str(&format!("\n    simple: A5 '{a5}'; S4 '{s4}'; A4 '{a4}'\n    summary note present {noted}; {}", secs(t.elapsed())));
    outcome(pass, detail)
}

fn random_kset(rng: &mut ChaCha8Rng, k: usize, n: usize, rows: usize) -> KSet {
    let set: BTreeSet<Vec<usize>> = (0..rows)
        .map(|_| {
            let mut v: Vec<usize> = (0..n).collect();
            v.shuffle(rng);
            v.truncate(k);
            v
        })
        .collect();
    KSet::new(k, n, &set.into_iter().collect::<Vec<_>>()).unwrap()
}

fn random_subspace(rng: &mut ChaCha8Rng, k: usize) -> Subspace {
    let mut v: Vec<usize> = (0..k).collect();
    v.shuffle(rng);
    v.truncate(rng.gen_range(1..=k));
    Subspace::new(v).unwrap()
}

fn rows_of(x: &KSet) -> BTreeSet<Vec<usize>> {
    x.iter().map(|t| t.iter().map(|&v| v as usize).collect()).collect()
}

fn labelled_partition(rng: &mut ChaCha8Rng, x: &KSet) -> PartitionK {
    let m = rng.gen_range(1..=4);
    let labels: Vec<usize> = (0..x.len()).map(|_| rng.gen_range(0..m)).collect();
    let classes = (0..m)
        .map(|c| {
            let rows: Vec<Vec<usize>> =
                x.iter().zip(&labels).filter(|(_, &l)| l == c).map(|(t, _)| t.iter().map(|&v| v as usize).collect()).collect();
            KSet::new(x.arity(), x.degree(), &rows).unwrap()
        })
        .collect();
    PartitionK::from_classes(x.arity(), x.degree(), classes).unwrap()
}

fn algebra_case() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = [0usize; 4];
    let per = ALGEBRA_CHECKS / 4;
    for _ in 0..per {
        let n = rng.gen_range(3..=7);
        let k = rng.gen_range(1..=n.min(4));
        let rows = rng.gen_range(1..12);
        let x = random_kset(&mut rng, k, n, rows);
        let g = random_perm(&mut rng, n);
        let i = random_subspace(&mut rng, k);
        let lhs = act_left(&g, &project(&x, &i).unwrap()).unwrap();
        let rhs = project(&act_left(&g, &x).unwrap(), &i).unwrap();
        let oracle: BTreeSet<Vec<usize>> = x.iter().map(|t| i.indices().iter().map(|&c| g.apply(t[c] as usize)).collect()).collect();
        if lhs != rhs || rows_of(&lhs) != oracle {
            failures[0] += 1;
        }
    }
    for _ in 0..per {
        let n = rng.gen_range(3..=7);
        let rows = rng.gen_range(1..10);
        let x = random_kset(&mut rng, n, n, rows);
        let g = random_perm(&mut rng, n);
        let i = random_subspace(&mut rng, n);
        let moved = project(&right_translate(&x, &g).unwrap(), &i).unwrap();
        let rp = act_right(&x, &i, &g).unwrap();
        let gi: Vec<usize> = i.indices().iter().map(|&c| g.apply(c)).collect();
        let oracle: BTreeSet<Vec<usize>> = x.iter().map(|t| gi.iter().map(|&c| t[c] as usize).collect()).collect();
        if moved != rp.set || rows_of(&moved) != oracle {
            failures[1] += 1;
        }
    }
    for _ in 0..per {
        let n = rng.gen_range(3..=6);
        let rows = rng.gen_range(2..20);
        let x = random_kset(&mut rng, 2, n, rows);
        let (p, q, r) = (labelled_partition(&mut rng, &x), labelled_partition(&mut rng, &x), labelled_partition(&mut rng, &x));
        let m = |a: &PartitionK, b: &PartitionK| meet(a, b).unwrap();
        let j = |a: &PartitionK, b: &PartitionK| join(a, b).unwrap();
        let laws = m(&p, &q) == m(&q, &p)
            && j(&p, &q) == j(&q, &p)
            && m(&m(&p, &q), &r) == m(&p, &m(&q, &r))
            && j(&j(&p, &q), &r) == j(&p, &j(&q, &r))
            && m(&p, &j(&p, &q)) == p
            && j(&p, &m(&p, &q)) == p
            && refines(&m(&p, &q), &p).unwrap()
            && refines(&p, &j(&p, &q)).unwrap();
        if !laws {
            failures[2] += 1;
        }
    }
    for _ in 0..per {
        let n = rng.gen_range(2..=6);
        let gens: Vec<Permutation> = (0..rng.gen_range(1..=2)).map(|_| random_perm(&mut rng, n)).collect();
        let g = Arc::new(PermGroup::new(n, gens).unwrap());
        let k = rng.gen_range(1..=n.min(3));
        let orbits = orbits_k(&g, k, DEFAULT_TUPLE_BUDGET).unwrap();
        let o = &orbits[rng.gen_range(0..orbits.len())];
        let i = random_subspace(&mut rng, k);
        let m = multiproject(&o.set, &i).unwrap();
        let counts: BTreeSet<u32> = m.entries().map(|(_, c)| c).collect();
        let homogeneous = counts.len() == 1 && m.total() == o.len() as u64;
        if !homogeneous || !homogeneity_check(&o.set, &i).unwrap() {
            failures[3] += 1;
        }
    }
    let total: usize = failures.iter().sum();
    outcome(
        total == 0,
        format!(
            "{} checks: projection/left action {}, right-action reprojection {}, lattice laws {}, multiprojection homogeneity {} failures; {}",
            per * 4,
            failures[0],
            failures[1],
            failures[2],
            failures[3],
            secs(t.elapsed())
        ),
    )
}

fn main() {
    let cat = build_catalog(10, 12, 0);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("petersen reproduction", Box::new(petersen_case)),
        ("matching group", Box::new(matching_case)),
        ("md-stabilizer orders", Box::new(md_case)),
        ("polycirculant sweep", Box::new(|| polycirc_sweep(&cat))),
        ("gi oracle equivalence", Box::new(gi_case)),
        ("lemma suites", Box::new(|| lemma_case(&cat))),
        ("operator algebra", Box::new(algebra_case)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed.push(i + 1);
        }
        println!("[{}] {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    let unexpected: Vec<usize> = failed.iter().copied().filter(|c| !KNOWN_FAILING.contains(c)).collect();
    println!(
        "acceptance: {} of {} criteria pass; failing {:?} (known counterexample findings {:?})",
        criteria.len() - failed.len(),
        criteria.len(),
        failed,
        KNOWN_FAILING
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
