//! Bundled example sets and groups, stored as data files with checksums
//! and validated as orbits before use.

use std::fmt;

use korb_core::aut::aut_of_kset;
use korb_core::korbit::{homogeneity_check, orbit_rows, KSet, Subspace};
use korb_core::PermGroup;
use sha2::{Digest, Sha256};

use crate::format::{parse_group, parse_kset};

struct Bundled {
    id: &'static str,
    description: &'static str,
    kset: (&'static str, &'static str, &'static str),
    /// A group file, or `None` when the group is the set's automorphism
    /// group.
    grp: Option<(&'static str, &'static str, &'static str)>,
}

macro_rules! file {
    ($name:literal, $sha:literal) => {
        ($name, include_str!(concat!("../data/", $name)), $sha)
    };
}

const BUNDLED: &[Bundled] = &[
    Bundled {
        id: "S3(6)",
        description: "regular representation of S3, first assembly",
        kset: file!("s3_6.kset", "d51eb3f6df3d7ea8dd35ba119e72fa3691befcd3bfd909cbb2f118e687f2ebf1"),
        grp: Some(file!("s3_6.grp", "2f18d89d22283250348b3568b64dd8450de0e53892838b8c4dc6a4f8fbd45a7a")),
    },
    Bundled {
        id: "S3(6)b",
        description: "regular representation of S3, second assembly",
        kset: file!("s3_6b.kset", "1d6335295015802819a18e2d2ca7533ce1c4c529d0a3b1c86dd506494de4a70c"),
        grp: Some(file!("s3_6b.grp", "399401d5bb321926675cbfe2ac5e39c74ff9f4334bf55b640a2628d0cf851d9c")),
    },
    Bundled {
        id: "C6*C2",
        description: "12-row md-representation on 6 points",
        kset: file!("c6c2.kset", "5cbf3605e4a3074f2b1a16f57b83980f8d3f392c8fc89fae5971a5595a766874"),
        grp: Some(file!("c6c2.grp", "5913fefb5c402df01fd929fedf64484858e58d058428eaf5b811ebe5e0f562ba")),
    },
    Bundled {
        id: "S5*S2",
        description: "10-row minimal degree representation on 5 points",
        kset: file!("s5s2.kset", "9b83171d0cd28d4b52beb71b5e5c14adc8853392bfc032994c46222a9c52393f"),
        grp: Some(file!("s5s2.grp", "2d2ad562ade93f1459c22abbc137327525aa22aa3e387a1a2edb671166166e4e")),
    },
    Bundled {
        id: "S5md20",
        description: "n-orbit of the transitive md-stabilizer of S5, order 20",
        kset: file!("s5md20.kset", "113b0cedaf9b3e4edead2a21af316f51bc20250a2c2aea20d0d4a2b168cf4224"),
        grp: Some(file!("s5md20.grp", "114316b660d91b4be32ff5074b1beaa7700b8e4bb8e22b6987e7390dcb64fafd")),
    },
    Bundled {
        id: "S5md12",
        description: "n-orbit of the intransitive md-stabilizer of S5, order 12",
        kset: file!("s5md12.kset", "8e377986c80266c0fe111f2baa84782bc39a496b6f6a269d715644031278cfb8"),
        grp: Some(file!("s5md12.grp", "05356e2a2465533b27f4094e3dee7bbbf78bd2b1294b6012d4e9975792c5b49c")),
    },
    Bundled {
        id: "Y10",
        description: "10-orbit of the order-20 subgroup of the Petersen automorphism group",
        kset: file!("petersen_y10.kset", "309581417c9c1ed31416398825dd499719c223eb61e4cecaeb374b75b2a2779a"),
        grp: Some(file!("petersen_y10.grp", "aa4ca02f46dd12b6e4ed4758bf30e406cf174f52c7e8d9dca02e2071d77f6767")),
    },
    Bundled {
        id: "matching",
        description: "perfect matching 14, 25, 36 as ordered pairs",
        kset: file!("matching.kset", "99ed60b6f30feced92610927d80ba204ab15b259213eabc6b7921e2f56336790"),
        grp: None,
    },
    Bundled {
        id: "X2'",
        description: "the 24 ordered pairs off the perfect matching",
        kset: file!("x2prime.kset", "0d1c5fe3a8dc97ed04e98aa748e8e60d0701d81b34c4e197859f9ec6732a45fa"),
        grp: None,
    },
];

pub const EXAMPLE_IDS: &[&str] = &["S3(6)", "S3(6)b", "C6*C2", "S5*S2", "S5md20", "S5md12", "Y10", "matching", "X2'"];

/// A data-entry or validation failure in a bundled file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataError {
    pub file: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file)?;
        if let Some(l) = self.line {
            write!(f, ":{l}")?;
        }
        if let Some(c) = self.column {
            write!(f, ":{c}")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for DataError {}

fn data_err(file: &str, line: Option<usize>, column: Option<usize>, message: impl Into<String>) -> DataError {
    DataError { file: file.to_string(), line, column, message: message.into() }
}

#[derive(Clone, Debug)]
pub struct Example {
    pub id: &'static str,
    pub description: &'static str,
    pub set: KSet,
    pub group: PermGroup,
    pub sha256: &'static str,
}

fn check_sum(name: &str, text: &str, expected: &str) -> Result<(), DataError> {
    let got = format!("{:x}", Sha256::digest(text.as_bytes()));
    if got != expected {
        return Err(data_err(name, None, None, format!("checksum {got} does not match {expected}")));
    }
    Ok(())
}

/// Data rows with their 1-based file lines, header excluded.
fn raw_rows(text: &str) -> Vec<(usize, Vec<u16>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("").trim();
            (!l.is_empty()).then_some((i + 1, l))
        })
        .skip(1)
        .map(|(ln, l)| (ln, l.split_whitespace().filter_map(|w| w.parse::<u16>().ok()).map(|v| v - 1).collect()))
        .collect()
}

/// Checks rows against the orbit of the recorded group through the first
/// row, the homogeneity of all multiprojections on up to three
/// coordinates, and that the orbit length divides the group order.
pub fn validate_orbit(name: &str, text: &str, x: &KSet, g: &PermGroup) -> Result<(), DataError> {
    let rows = raw_rows(text);
    let Some((_, first)) = rows.first() else { return Err(data_err(name, None, None, "no rows")) };
    let orbit = orbit_rows(g, first);
    for (ln, r) in &rows {
        if !orbit.contains(r) {
            let best = orbit.iter().max_by_key(|o| o.iter().zip(r).filter(|(a, b)| a == b).count()).unwrap();
            let col = best.iter().zip(r).position(|(a, b)| a != b).map(|c| c + 1);
            return Err(data_err(name, Some(*ln), col, "row is not an image of the first row under the recorded group"));
        }
    }
    if orbit.len() != x.len() {
        return Err(data_err(name, None, None, format!("orbit has {} rows, file has {}", orbit.len(), x.len())));
    }
    let order = g.order().map_err(|e| data_err(name, None, None, e.to_string()))?;
    if order % x.len() as u64 != 0 {
        return Err(data_err(name, None, None, format!("orbit length {} does not divide |G| = {order}", x.len())));
    }
    let k = x.arity();
    for size in 1..=k.min(3) {
        for idx in combinations(k, size) {
            let sub = Subspace::new(idx.clone()).map_err(|e| data_err(name, None, None, e.to_string()))?;
            let ok = homogeneity_check(x, &sub);
            if !ok.map_err(|e| data_err(name, None, None, e.to_string()))? {
                let cols: Vec<String> = idx.iter().map(|c| (c + 1).to_string()).collect();
                return Err(data_err(name, None, Some(idx[0] + 1), format!("multiprojection on columns {} is not homogeneous", cols.join(","))));
            }
        }
    }
    Ok(())
}

/// All increasing index lists of length `size` from `0..k`.
pub fn combinations(k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, k: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(i + 1, k, size, cur, out);
            cur.pop();
        }
    }
    go(0, k, size, &mut cur, &mut out);
    out
}

/// Loads and validates a bundled example.
pub fn reconstruct_paper_example(id: &str) -> Result<Example, DataError> {
    let b = BUNDLED.iter().find(|b| b.id == id).ok_or_else(|| data_err(id, None, None, "unknown example id"))?;
    let (kname, ktext, ksha) = b.kset;
    check_sum(kname, ktext, ksha)?;
    let set = parse_kset(ktext).map_err(|e| data_err(kname, Some(e.line), None, e.message))?;
    let group = match b.grp {
        Some((gname, gtext, gsha)) => {
            check_sum(gname, gtext, gsha)?;
            parse_group(gtext).map_err(|e| data_err(gname, Some(e.line), None, e.message))?
        }
        None => aut_of_kset(&set).map_err(|e| data_err(kname, None, None, e.to_string()))?,
    };
    validate_orbit(kname, ktext, &set, &group)?;
    Ok(Example { id: b.id, description: b.description, set, group, sha256: ksha })
}

pub fn example_group(id: &str) -> Result<PermGroup, DataError> {
    reconstruct_paper_example(id).map(|e| e.group)
}

/// The automorphism group of the perfect matching on 6 points.
pub fn matching_aut() -> PermGroup {
    example_group("matching").expect("bundled matching set validates")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_validates() {
        for id in EXAMPLE_IDS {
            let e = reconstruct_paper_example(id).unwrap_or_else(|err| panic!("{id}: {err}"));
            assert!(!e.set.is_empty());
        }
    }

    #[test]
    fn example_sizes() {
        let size = |id| {
            let e = reconstruct_paper_example(id).unwrap();
            (e.set.len(), e.set.arity(), e.group.order().unwrap())
        };
        assert_eq!(size("S3(6)"), (6, 6, 6));
        assert_eq!(size("C6*C2"), (12, 6, 12));
        assert_eq!(size("S5*S2"), (10, 5, 10));
        assert_eq!(size("S5md20"), (20, 5, 20));
        assert_eq!(size("S5md12"), (12, 5, 12));
        assert_eq!(size("Y10"), (20, 10, 20));
        assert_eq!(size("X2'"), (24, 2, 48));
        assert_eq!(size("matching"), (6, 2, 48));
    }

    #[test]
    fn corrupted_rows_are_located() {
        let text = "3 3\n1 2 3\n2 3 1\n3 2 1\n";
        let x = parse_kset(text).unwrap();
        let g = PermGroup::from_cycle_strings(3, &["(1 2 3)"]).unwrap();
        let e = validate_orbit("t.kset", text, &x, &g).unwrap_err();
        assert_eq!((e.line, e.column), (Some(4), Some(2)));
    }

    #[test]
    fn checksums_are_enforced() {
        assert!(check_sum("x", "2 6\n", "00").is_err());
    }
}
