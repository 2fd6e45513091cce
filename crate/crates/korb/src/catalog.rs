//! A catalog of small permutation groups: classical families, affine and
//! projective groups over small fields, wreath and product actions,
//! regular representations, the bundled example groups and seeded random
//! subgroups. Entries are deduplicated by element set; metadata is always
//! recomputed.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use korb_core::group::is_prime;
use korb_core::{PermGroup, Permutation, Primitivity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::format::{parse_group, write_group};

/// Random subgroups whose order exceeds this are skipped.
pub const RANDOM_ORDER_CAP: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub group: Arc<PermGroup>,
    pub degree: usize,
    pub order: u64,
    pub transitive: bool,
    pub primitivity: &'static str,
}

impl Entry {
    pub fn new(name: impl Into<String>, group: PermGroup) -> Self {
        let degree = group.degree();
        let order = group.order().expect("chain order fits");
        let transitive = group.is_transitive();
        let primitivity = primitivity_name(&group.is_primitive());
        Entry { name: name.into(), group: Arc::new(group), degree, order, transitive, primitivity }
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self.primitivity, "primitive" | "trivial-primitive")
    }
}

pub fn primitivity_name(p: &Primitivity) -> &'static str {
    match p {
        Primitivity::Intransitive => "intransitive",
        Primitivity::Primitive => "primitive",
        Primitivity::TrivialPrimitive => "trivial-primitive",
        Primitivity::Imprimitive(_) => "imprimitive",
    }
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub entries: Vec<Entry>,
    /// Candidates left out, with the reason.
    pub skipped: Vec<String>,
}

impl Catalog {
    /// Adds `g` unless an entry with the same element set exists.
    pub fn push(&mut self, name: impl Into<String>, g: PermGroup) -> bool {
        let name = name.into();
        let order = match g.order() {
            Ok(o) => o,
            Err(e) => {
                self.skipped.push(format!("{name}: {e}"));
                return false;
            }
        };
        let dup = self.entries.iter().any(|e| {
            e.degree == g.degree() && e.order == order && g.is_subgroup_of(&e.group).unwrap_or(false)
        });
        if dup {
            return false;
        }
        self.entries.push(Entry::new(name, g));
        true
    }

    pub fn transitive(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.transitive && e.degree >= 2)
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// One line per entry: file, degree, order, transitivity, primitivity.
    pub fn manifest(&self) -> String {
        let mut s = String::from("# file degree order transitive primitivity\n");
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{}.grp {} {} {} {}",
                file_stem(&e.name),
                e.degree,
                e.order,
                if e.transitive { "transitive" } else { "intransitive" },
                e.primitivity
            );
        }
        s
    }

    /// Writes every entry as a `.grp` file plus `index.txt`.
    pub fn write_dir(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for e in &self.entries {
            let text = write_group(&e.group, Some(&e.name));
            std::fs::write(dir.join(format!("{}.grp", file_stem(&e.name))), text)?;
        }
        std::fs::write(dir.join("index.txt"), self.manifest())
    }

    /// Reads a directory written by [`Catalog::write_dir`]. Only the file
    /// names in the index are used; metadata is recomputed.
    pub fn load_dir(dir: &Path) -> Result<Catalog, String> {
        let index = crate::format::read_file(&dir.join("index.txt"))?;
        let mut cat = Catalog::default();
        for (i, line) in index.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            let Some(file) = line.split_whitespace().next() else { continue };
            let path = dir.join(file);
            let text = crate::format::read_file(&path)?;
            let g = parse_group(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let name = text
                .lines()
                .next()
                .and_then(|l| l.strip_prefix("# "))
                .map(str::to_string)
                .unwrap_or_else(|| file.trim_end_matches(".grp").to_string());
            if !cat.push(name, g) {
                cat.skipped.push(format!("index line {}: duplicate group {file}", i + 1));
            }
        }
        Ok(cat)
    }
}

pub fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn perm(images: &[usize]) -> Permutation {
    Permutation::from_images(images).expect("valid images")
}

fn group(n: usize, gens: Vec<Permutation>) -> PermGroup {
    PermGroup::new(n, gens).expect("generators share the degree")
}

fn cycles(n: usize, gens: &[&str]) -> PermGroup {
    PermGroup::from_cycle_strings(n, gens).expect("valid cycle notation")
}

/// Arithmetic in GF(q) for the prime powers up to 9. Elements are the
/// integers `0..q`, read as base-p coefficient vectors.
#[derive(Clone, Debug)]
pub struct Field {
    pub q: usize,
    pub p: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

impl Field {
    pub fn new(q: usize) -> Option<Field> {
        let (p, modulus): (usize, &[usize]) = match q {
            2 | 3 | 5 | 7 => (q, &[0, 1]),
            4 => (2, &[1, 1, 1]),
            8 => (2, &[1, 1, 0, 1]),
            9 => (3, &[1, 0, 1]),
            _ => return None,
        };
        let m = modulus.len() - 1;
        let digits = |mut x: usize| -> Vec<usize> {
            (0..m)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let value = |d: &[usize]| d.iter().rev().fold(0, |acc, &c| acc * p + c);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = value(&s);
                let mut prod = vec![0; 2 * m];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (m..2 * m).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        for (i, &f) in modulus.iter().enumerate().take(m) {
                            prod[deg - m + i] = (prod[deg - m + i] + (p - c) * f) % p;
                        }
                        prod[deg] = 0;
                    }
                }
                mul[a * q + b] = value(&prod[..m]);
            }
        }
        Some(Field { q, p, add, mul })
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn inv(&self, a: usize) -> usize {
        (1..self.q).find(|&b| self.mul(a, b) == 1).unwrap()
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    /// The least generator of the multiplicative group.
    pub fn primitive_element(&self) -> usize {
        (2..self.q)
            .find(|&w| (1..self.q - 1).all(|e| self.pow(w, e) != 1))
            .unwrap_or(1)
    }

    /// The additive basis `1, t, t², ..` as field elements.
    pub fn basis(&self) -> Vec<usize> {
        let mut b = vec![1];
        while b.last().unwrap() * self.p < self.q {
            b.push(b.last().unwrap() * self.p);
        }
        b
    }
}

/// `x ↦ a x + b` for `a` in the subgroup of index `(q-1)/d` of the
/// multiplicative group, optionally with the Frobenius map.
pub fn affine_line(q: usize, d: usize, frobenius: bool) -> PermGroup {
    let f = Field::new(q).expect("supported field");
    let w = f.pow(f.primitive_element(), (q - 1) / d);
    let mut gens: Vec<Permutation> = f.basis().iter().map(|&b| perm(&(0..q).map(|x| f.add(x, b)).collect::<Vec<_>>())).collect();
    gens.push(perm(&(0..q).map(|x| f.mul(w, x)).collect::<Vec<_>>()));
    if frobenius && q != f.p {
        gens.push(perm(&(0..q).map(|x| f.pow(x, f.p)).collect::<Vec<_>>()));
    }
    group(q, gens)
}

/// Linear fractional maps on the projective line over GF(q); the point at
/// infinity is `q`. `kind` is 0 for PSL, 1 for PGL, 2 for PΓL, 3 for PΣL.
pub fn projective_line(q: usize, kind: u8) -> PermGroup {
    let f = Field::new(q).expect("supported field");
    let inf = q;
    let n = q + 1;
    let w = f.primitive_element();
    let scale = if kind == 0 || kind == 3 { f.mul(w, w) } else { w };
    let mut gens: Vec<Permutation> = f
        .basis()
        .iter()
        .map(|&b| perm(&(0..n).map(|x| if x == inf { inf } else { f.add(x, b) }).collect::<Vec<_>>()))
        .collect();
    gens.push(perm(&(0..n).map(|x| if x == inf { inf } else { f.mul(scale, x) }).collect::<Vec<_>>()));
    let minus_one = f.neg(1);
    gens.push(perm(
        &(0..n)
            .map(|x| if x == inf { 0 } else if x == 0 { inf } else { f.mul(minus_one, f.inv(x)) })
            .collect::<Vec<_>>(),
    ));
    if kind >= 2 && q != f.p {
        gens.push(perm(&(0..n).map(|x| if x == inf { inf } else { f.pow(x, f.p) }).collect::<Vec<_>>()));
    }
    group(n, gens)
}

/// `AGL(d, p)` (or `ASL` when `special`) on the vectors of `GF(p)^d`,
/// vector `v` numbered `Σ v_i p^i`.
pub fn affine_space(d: usize, p: usize, special: bool) -> PermGroup {
    let n = p.pow(d as u32);
    let vec_of = |x: usize| -> Vec<usize> { (0..d).map(|i| x / p.pow(i as u32) % p).collect() };
    let num = |v: &[usize]| v.iter().enumerate().map(|(i, &c)| c * p.pow(i as u32)).sum::<usize>();
    let mut gens = Vec::new();
    for i in 0..d {
        gens.push(perm(&(0..n).map(|x| {
            let mut v = vec_of(x);
            v[i] = (v[i] + 1) % p;
            num(&v)
        }).collect::<Vec<_>>()));
    }
    for i in 0..d {
        for j in 0..d {
            if i != j {
                gens.push(perm(&(0..n).map(|x| {
                    let mut v = vec_of(x);
                    v[i] = (v[i] + v[j]) % p;
                    num(&v)
                }).collect::<Vec<_>>()));
            }
        }
    }
    if !special && p > 2 {
        let g = (2..p).find(|&g| (1..p - 1).all(|e| g.pow(e as u32) % p != 1)).unwrap();
        gens.push(perm(&(0..n).map(|x| {
            let mut v = vec_of(x);
            v[0] = v[0] * g % p;
            num(&v)
        }).collect::<Vec<_>>()));
    }
    group(n, gens)
}

/// `A wr B` in imprimitive action: `b` blocks of `a` points, point
/// `i·a + j` is point `j` of block `i`.
pub fn wreath_imprimitive(a: &PermGroup, b: &PermGroup) -> PermGroup {
    let (na, nb) = (a.degree(), b.degree());
    let n = na * nb;
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(perm(&(0..n).map(|x| if x < na { g.apply(x) } else { x }).collect::<Vec<_>>()));
    }
    for h in b.generators() {
        gens.push(perm(&(0..n).map(|x| h.apply(x / na) * na + x % na).collect::<Vec<_>>()));
    }
    group(n, gens)
}

/// `A wr S_2` in product action on `a²` points.
pub fn wreath_product_action(a: &PermGroup) -> PermGroup {
    let na = a.degree();
    let n = na * na;
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(perm(&(0..n).map(|x| g.apply(x / na) * na + x % na).collect::<Vec<_>>()));
    }
    gens.push(perm(&(0..n).map(|x| (x % na) * na + x / na).collect::<Vec<_>>()));
    group(n, gens)
}

/// `A × B` acting on the `a·b` pairs.
pub fn direct_product_action(a: &PermGroup, b: &PermGroup) -> PermGroup {
    let (na, nb) = (a.degree(), b.degree());
    let n = na * nb;
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(perm(&(0..n).map(|x| g.apply(x / nb) * nb + x % nb).collect::<Vec<_>>()));
    }
    for h in b.generators() {
        gens.push(perm(&(0..n).map(|x| (x / nb) * nb + h.apply(x % nb)).collect::<Vec<_>>()));
    }
    group(n, gens)
}

/// The action on 2-subsets of `0..m`, numbered lexicographically.
pub fn on_pairs(g: &PermGroup) -> PermGroup {
    let m = g.degree();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let gens = g
        .generators()
        .iter()
        .map(|h| perm(&pairs.iter().map(|&(a, b)| index(h.apply(a), h.apply(b))).collect::<Vec<_>>()))
        .collect();
    group(pairs.len(), gens)
}

/// The left regular representation, elements numbered in enumeration
/// order.
pub fn regular_representation(g: &PermGroup) -> PermGroup {
    let el = g.elements().expect("small group");
    let all: Vec<Permutation> = el.iter().collect();
    let gens = g
        .generators()
        .iter()
        .map(|h| perm(&all.iter().map(|x| el.index_of(&h.compose(x).unwrap()).unwrap()).collect::<Vec<_>>()))
        .collect();
    group(all.len(), gens)
}

/// The quaternion group on 8 points, regular.
pub fn quaternion() -> PermGroup {
    cycles(8, &["(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"])
}

/// The Petersen graph's automorphism group: S_5 on the 10 two-subsets.
pub fn petersen() -> PermGroup {
    on_pairs(&PermGroup::symmetric(5))
}

/// Catalog of groups of degree up to `max_degree`, with `samples` random
/// two-generator subgroups per ambient group.
pub fn build_catalog(max_degree: usize, samples: usize, seed: u64) -> Catalog {
    let mut cat = Catalog::default();
    cat.push("S1", PermGroup::trivial(1));
    for n in 2..=max_degree {
        cat.push(format!("S{n}"), PermGroup::symmetric(n));
        if n >= 3 {
            cat.push(format!("A{n}"), PermGroup::alternating(n));
            cat.push(format!("D{n}"), PermGroup::dihedral(n));
        }
        cat.push(format!("C{n}"), PermGroup::cyclic(n));
        if n == 5 {
            cat.push("S5md20", cycles(5, &["(1 2 3 4 5)", "(1 2 4 3)"]));
            cat.push("S5md12", cycles(5, &["(1 2 3)(4 5)", "(2 3)"]));
            cat.push("S5xS2_example", crate::data::example_group("S5*S2").expect("bundled"));
        }
        if is_prime(n as u64) && n >= 5 {
            for d in 2..n {
                if (n - 1) % d == 0 {
                    cat.push(format!("AGL1_{n}_d{d}"), affine_line(n, d, false));
                }
            }
        }
        for a in 2..n {
            if n % a == 0 {
                let b = n / a;
                let (sa, sb) = (PermGroup::symmetric(a), PermGroup::symmetric(b));
                cat.push(format!("S{a}wrS{b}"), wreath_imprimitive(&sa, &sb));
                cat.push(format!("C{a}wrC{b}"), wreath_imprimitive(&PermGroup::cyclic(a), &PermGroup::cyclic(b)));
                if a <= b {
                    cat.push(format!("S{a}xS{b}"), direct_product_action(&sa, &sb));
                    cat.push(format!("C{a}xC{b}"), direct_product_action(&PermGroup::cyclic(a), &PermGroup::cyclic(b)));
                }
            }
        }
        if n == 4 {
            cat.push("V4", cycles(4, &["(1 2)(3 4)", "(1 3)(2 4)"]));
        }
        if n == 6 {
            cat.push("PSL2_5", projective_line(5, 0));
            cat.push("PGL2_5", projective_line(5, 1));
            cat.push("S4_pairs", on_pairs(&PermGroup::symmetric(4)));
            cat.push("A4_pairs", on_pairs(&PermGroup::alternating(4)));
            cat.push("S3_regular", regular_representation(&PermGroup::symmetric(3)));
            cat.push("S3_6_example", crate::data::example_group("S3(6)").expect("bundled"));
            cat.push("C6xC2_example", crate::data::example_group("C6*C2").expect("bundled"));
            cat.push("S3xC2", cycles(6, &["(1 2)(4 5)", "(1 2 3)(4 5 6)", "(1 4)(2 5)(3 6)"]));
            cat.push("matching_aut", crate::data::matching_aut());
        }
        if n == 8 {
            cat.push("PSL2_7", projective_line(7, 0));
            cat.push("PGL2_7", projective_line(7, 1));
            cat.push("AGL1_8", affine_line(8, 7, false));
            cat.push("AGammaL1_8", affine_line(8, 7, true));
            cat.push("AGL3_2", affine_space(3, 2, false));
            cat.push("Q8", quaternion());
            cat.push("D4_regular", regular_representation(&PermGroup::dihedral(4)));
            cat.push("C2^3", regular_representation(&cycles(6, &["(1 2)", "(3 4)", "(5 6)"])));
        }
        if n == 9 {
            cat.push("AGL1_9", affine_line(9, 8, false));
            cat.push("AGammaL1_9", affine_line(9, 8, true));
            cat.push("ASL2_3", affine_space(2, 3, true));
            cat.push("AGL2_3", affine_space(2, 3, false));
            cat.push("PSL2_8", projective_line(8, 0));
            cat.push("PGammaL2_8", projective_line(8, 2));
            cat.push("S3wrS2_product", wreath_product_action(&PermGroup::symmetric(3)));
        }
        if n == 10 {
            cat.push("Petersen", petersen());
            cat.push("A5_pairs", on_pairs(&PermGroup::alternating(5)));
            cat.push("PSL2_9", projective_line(9, 0));
            cat.push("PGL2_9", projective_line(9, 1));
            cat.push("PSigmaL2_9", projective_line(9, 3));
            cat.push("PGammaL2_9", projective_line(9, 2));
            cat.push("D5_regular", regular_representation(&PermGroup::dihedral(5)));
        }
    }
    add_random(&mut cat, max_degree, samples, seed);
    cat
}

/// Random two-generator subgroups of the imprimitive and affine groups in
/// the catalog, kept when transitive and new.
fn add_random(cat: &mut Catalog, max_degree: usize, samples: usize, seed: u64) {
    let ambients: Vec<Entry> = cat
        .entries
        .iter()
        .filter(|e| e.transitive && e.degree >= 4 && e.degree <= max_degree && e.order > 8 && e.order <= 50_000)
        .filter(|e| {
            let full = korb_core::group::factorial(e.degree);
            e.order != full && e.order != full / 2
        })
        .cloned()
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for amb in ambients {
        let chain = amb.group.chain();
        for i in 0..samples {
            let gens = vec![chain.random_element(&mut rng), chain.random_element(&mut rng)];
            let g = group(amb.degree, gens);
            let order = g.order().unwrap_or(u64::MAX);
            if order > RANDOM_ORDER_CAP {
                cat.skipped.push(format!("random {}#{i}: order {order} above cap", amb.name));
                continue;
            }
            if g.is_transitive() && order < amb.order {
                cat.push(format!("{}_sub{}", amb.name, i), g);
            }
        }
    }
}
