//! Text formats: `.grp` groups, k-sets and edge-list graphs. Points are
//! 1-based in every file.

use std::fmt::{self, Write as _};
use std::path::Path;

use korb_core::gi::Graph;
use korb_core::korbit::KSet;
use korb_core::{PermGroup, Permutation};

/// A parse failure at a 1-based line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for FormatError {}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, message: message.into() }
}

/// Lines with comments stripped, paired with their 1-based numbers; blank
/// lines dropped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Parses `degree n` followed by one generator per line in cycle notation.
pub fn parse_group(text: &str) -> Result<PermGroup, FormatError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| err(1, "missing 'degree n' header"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("degree") {
        return Err(err(ln, format!("expected 'degree n', found '{header}'")));
    }
    let n: usize = words
        .next()
        .and_then(|w| w.parse().ok())
        .ok_or_else(|| err(ln, "degree must be a non-negative integer"))?;
    if words.next().is_some() {
        return Err(err(ln, "trailing text after degree"));
    }
    if n > u16::MAX as usize {
        return Err(err(ln, format!("degree {n} is too large")));
    }
    let mut gens = Vec::new();
    for (ln, l) in lines {
        let g = Permutation::parse_cycles(n, l).map_err(|e| err(ln, e.to_string()))?;
        gens.push(g);
    }
    PermGroup::new(n, gens).map_err(|e| err(ln, e.to_string()))
}

pub fn write_group(g: &PermGroup, comment: Option<&str>) -> String {
    let mut s = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(s, "# {line}");
        }
    }
    let _ = writeln!(s, "degree {}", g.degree());
    for p in g.generators() {
        if !p.is_identity() {
            let _ = writeln!(s, "{p}");
        }
    }
    s
}

/// Parses `k n [multiset]` followed by one tuple per line; in multiset
/// mode a tuple may end with `*count`.
pub fn parse_kset(text: &str) -> Result<KSet, FormatError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| err(1, "missing 'k n' header"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let num = |i: usize, what: &str| -> Result<usize, FormatError> {
        words.get(i).and_then(|w| w.parse().ok()).ok_or_else(|| err(ln, format!("{what} must be a non-negative integer")))
    };
    let k = num(0, "arity")?;
    let n = num(1, "degree")?;
    let multiset = match words.get(2) {
        None => false,
        Some(&"multiset") => true,
        Some(w) => return Err(err(ln, format!("unknown header flag '{w}'"))),
    };
    if words.len() > 3 {
        return Err(err(ln, "trailing text in header"));
    }
    let mut entries: Vec<(Vec<u16>, u32)> = Vec::new();
    for (ln, l) in lines {
        let (body, count) = match l.split_once('*') {
            Some((b, c)) => {
                if !multiset {
                    return Err(err(ln, "'*count' is only allowed in multiset mode"));
                }
                let c: u32 = c.trim().parse().map_err(|_| err(ln, format!("bad count '{}'", c.trim())))?;
                if c == 0 {
                    return Err(err(ln, "counts must be positive"));
                }
                (b, c)
            }
            None => (l, 1),
        };
        let mut t = Vec::with_capacity(k);
        for w in body.split_whitespace() {
            let v: usize = w.parse().map_err(|_| err(ln, format!("bad point '{w}'")))?;
            if v == 0 || v > n {
                return Err(err(ln, format!("point {v} outside 1..{n}")));
            }
            t.push((v - 1) as u16);
        }
        if t.len() != k {
            return Err(err(ln, format!("expected {k} points, found {}", t.len())));
        }
        if !multiset && entries.iter().any(|(e, _)| *e == t) {
            return Err(err(ln, "repeated tuple"));
        }
        entries.push((t, count));
    }
    if multiset {
        KSet::multiset_from(k, n, entries).map_err(|e| err(ln, e.to_string()))
    } else {
        KSet::weak_from_rows(k, n, entries.into_iter().map(|(t, _)| t).collect()).map_err(|e| err(ln, e.to_string()))
    }
}

pub fn write_kset(x: &KSet) -> String {
    let mut s = String::new();
    let multiset = x.is_multiset();
    let _ = writeln!(s, "{} {}{}", x.arity(), x.degree(), if multiset { " multiset" } else { "" });
    for (t, c) in x.entries() {
        let pts: Vec<String> = t.iter().map(|&v| (v + 1).to_string()).collect();
        s.push_str(&pts.join(" "));
        if multiset {
            let _ = write!(s, " *{c}");
        }
        s.push('\n');
    }
    s
}

/// Parses `n m` followed by `m` lines `u v`.
pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| err(1, "missing 'n m' header"))?;
    let words: Vec<usize> = header
        .split_whitespace()
        .map(|w| w.parse().map_err(|_| err(ln, format!("bad header value '{w}'"))))
        .collect::<Result<_, _>>()?;
    let [n, m] = words[..] else { return Err(err(ln, "header must be 'n m'")) };
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    let mut last = ln;
    for (ln, l) in lines {
        last = ln;
        let pts: Vec<usize> = l
            .split_whitespace()
            .map(|w| w.parse().map_err(|_| err(ln, format!("bad vertex '{w}'"))))
            .collect::<Result<_, _>>()?;
        let [u, v] = pts[..] else { return Err(err(ln, "edge lines must be 'u v'")) };
        if u == 0 || v == 0 || u > n || v > n {
            return Err(err(ln, format!("vertex outside 1..{n}")));
        }
        if u == v {
            return Err(err(ln, format!("self-loop at {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(ln, format!("duplicate edge {u} {v}")));
        }
        edges.push((u - 1, v - 1));
    }
    if edges.len() != m {
        return Err(err(last, format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::new(n, &edges).map_err(|e| err(last, e.to_string()))
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.order(), g.edges().len());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

/// Reads a file, tagging errors with its path.
pub fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_round_trip() {
        let g = parse_group("# S3\ndegree 3\n(1 2 3)\n(1 2)  # a transposition\n").unwrap();
        assert_eq!(g.order().unwrap(), 6);
        let again = parse_group(&write_group(&g, Some("S3"))).unwrap();
        assert!(again.same_group(&g).unwrap());
        assert_eq!(parse_group("degree 4\n").unwrap().order().unwrap(), 1);
    }

    #[test]
    fn group_errors_name_lines() {
        let e = parse_group("degree 3\n(1 2 3)\n(1 4)\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(parse_group("\n# c\ndegre 3\n").unwrap_err().line, 3);
    }

    #[test]
    fn kset_round_trip_is_exact() {
        let text = "2 4\n1 2\n2 1\n3 4\n";
        let x = parse_kset(text).unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(write_kset(&x), text);
        let m = "2 3 multiset\n1 2 *2\n2 3 *1\n";
        let y = parse_kset(m).unwrap();
        assert_eq!(y.total(), 3);
        assert_eq!(write_kset(&y), m);
        assert_eq!(parse_kset("2 3\n1 2 *2\n").unwrap_err().line, 2);
        assert_eq!(parse_kset("2 3\n1 2\n1 5\n").unwrap_err().line, 3);
    }

    #[test]
    fn graph_parsing() {
        let g = parse_graph("3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(write_graph(&g), "3 2\n1 2\n2 3\n");
        assert_eq!(parse_graph("3 2\n1 2\n2 1\n").unwrap_err().line, 3);
        assert_eq!(parse_graph("3 1\n2 2\n").unwrap_err().line, 2);
        assert!(parse_graph("3 2\n1 2\n").is_err());
    }
}
