//! Permutations of `{0, .., n-1}` with disjoint-cycle parsing and printing.
//!
//! Points are 0-based internally. Cycle notation is 1-based, so `(1 2 3)`
//! maps point 0 to 1, 1 to 2 and 2 to 0.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest supported degree.
pub const MAX_DEGREE: usize = u16::MAX as usize;

/// A bijection on `n` points, stored as the image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u16]>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DEGREE, "degree {n} too large");
        Permutation { images: (0..n as u16).collect() }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!("degree {n} too large")));
        }
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n {
                return Err(Error::InvalidPermutation(format!("image {} out of range 1..{}", x + 1, n)));
            }
            if seen[x] {
                return Err(Error::InvalidPermutation(format!("image {} repeated", x + 1)));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: images.iter().map(|&x| x as u16).collect() })
    }

    /// Builds from a raw `u16` image slice that the caller knows is a bijection.
    pub(crate) fn from_raw(images: Box<[u16]>) -> Self {
        debug_assert!(is_bijection(&images));
        Permutation { images }
    }

    /// Builds from 0-based cycles. Points not mentioned are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let owned: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Self::from_cycle_vecs(n, &owned)
    }

    fn from_cycle_vecs(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for &p in c {
                if p >= n {
                    return Err(Error::InvalidPermutation(format!("point {} exceeds degree {}", p + 1, n)));
                }
                if used[p] {
                    return Err(Error::InvalidPermutation(format!("point {} appears twice", p + 1)));
                }
                used[p] = true;
            }
            for (i, &p) in c.iter().enumerate() {
                images[p] = c[(i + 1) % c.len()];
            }
        }
        Self::from_images(&images)
    }

    /// Parses 1-based disjoint cycle notation such as `(1 2 3)(4 5)`.
    ///
    /// Commas are accepted as separators. `()` and the empty string denote
    /// the identity.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number = String::new();
        let flush = |number: &mut String, current: &mut Option<Vec<usize>>| -> Result<()> {
            if number.is_empty() {
                return Ok(());
            }
            let v: usize = number
                .parse()
                .map_err(|_| Error::InvalidPermutation(format!("bad point '{number}'")))?;
            number.clear();
            match current {
                Some(c) => {
                    if v == 0 {
                        return Err(Error::InvalidPermutation("points are 1-based".into()));
                    }
                    c.push(v - 1);
                    Ok(())
                }
                None => Err(Error::InvalidPermutation("point outside parentheses".into())),
            }
        };
        for ch in text.chars() {
            match ch {
                '(' => {
                    if current.is_some() {
                        return Err(Error::InvalidPermutation("nested '('".into()));
                    }
                    current = Some(Vec::new());
                }
                ')' => {
                    flush(&mut number, &mut current)?;
                    match current.take() {
                        Some(c) => cycles.push(c),
                        None => return Err(Error::InvalidPermutation("unmatched ')'".into())),
                    }
                }
                c if c.is_ascii_digit() => number.push(c),
                c if c.is_whitespace() || c == ',' => flush(&mut number, &mut current)?,
                c => return Err(Error::InvalidPermutation(format!("unexpected character '{c}'"))),
            }
        }
        if current.is_some() {
            return Err(Error::InvalidPermutation("unclosed '('".into()));
        }
        if !number.is_empty() {
            return Err(Error::InvalidPermutation("point outside parentheses".into()));
        }
        Self::from_cycle_vecs(n, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.images[v] as usize
    }

    #[inline]
    pub fn raw(&self) -> &[u16] {
        &self.images
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.degree()].into_boxed_slice();
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Permutation { images: inv }
    }

    /// `g h g⁻¹` where `g = self`.
    pub fn conjugate(&self, h: &Permutation) -> Result<Permutation> {
        Ok(self.compose(h)?.compose_unchecked(&self.inverse()))
    }

    pub fn pow(&self, e: u64) -> Permutation {
        let mut result = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            e >>= 1;
        }
        result
    }

    /// All cycles including fixed points, each starting at its least point,
    /// ordered by that point.
    pub fn all_cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                c.push(v);
                v = self.apply(v);
            }
            out.push(c);
        }
        out
    }

    /// Cycles of length at least 2.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.all_cycles().into_iter().filter(|c| c.len() > 1).collect()
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_lengths(self.all_cycles().iter().map(|c| c.len()))
    }

    pub fn order(&self) -> u64 {
        self.all_cycles().iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&v| self.apply(v) == v).collect()
    }

    /// The common cycle length when the permutation is fixed-point-free with
    /// all cycles of one length.
    pub fn regular_cycle_length(&self) -> Option<usize> {
        let n = self.degree();
        if n == 0 || self.apply(0) == 0 {
            return None;
        }
        let mut seen = vec![false; n];
        let mut length = None;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                len += 1;
                v = self.apply(v);
            }
            match length {
                None => length = Some(len),
                Some(l) if l != len => return None,
                _ => {}
            }
        }
        length.filter(|&l| l > 1)
    }

    /// Relabels the points: the result maps `map(v)` to `map(self(v))`.
    pub fn relabel(&self, map: &Permutation) -> Result<Permutation> {
        map.conjugate(self)
    }
}

/// Returns `Some(ℓ)` when `g` is a regular element: not the identity and
/// every cycle has the same length `ℓ > 1`.
pub fn is_regular_element(g: &Permutation) -> Option<usize> {
    g.regular_cycle_length()
}

/// `g ∘ h`, mapping `v` to `g(h(v))`.
pub fn compose(g: &Permutation, h: &Permutation) -> Result<Permutation> {
    g.compose(h)
}

fn is_bijection(images: &[u16]) -> bool {
    let mut seen = vec![false; images.len()];
    for &x in images {
        let x = x as usize;
        if x >= images.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// Cycle lengths with multiplicities, sorted by length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<(usize, usize)>,
}

impl CycleType {
    pub fn from_lengths<I: IntoIterator<Item = usize>>(lengths: I) -> Self {
        let mut ls: Vec<usize> = lengths.into_iter().collect();
        ls.sort_unstable();
        let mut parts: Vec<(usize, usize)> = Vec::new();
        for l in ls {
            match parts.last_mut() {
                Some((len, mult)) if *len == l => *mult += 1,
                _ => parts.push((l, 1)),
            }
        }
        CycleType { parts }
    }

    /// `(length, multiplicity)` pairs in increasing length.
    pub fn parts(&self) -> &[(usize, usize)] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().map(|(l, m)| l * m).sum()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, m)) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}^{m}")?;
        }
        Ok(())
    }
}
