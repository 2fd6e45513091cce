//! Decomposition of a cyclic k-orbit `gr(g) α` into rcycles, multituples
//! and S_l^k-orbits.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::korbit::{orbit_rows, KSet};
use crate::group::PermGroup;
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseKind {
    /// All points of one l-cycle of `g`, as an (l,l)-orbit.
    Rcycle,
    /// A projection of an l-rcycle to fewer coordinates.
    RcycleProjection,
    /// The fixed points of `g`, one tuple repeated.
    Multituple,
    /// One coordinate from each of several l-cycles.
    SymmetricOrbit,
}

impl BaseKind {
    pub fn name(self) -> &'static str {
        match self {
            BaseKind::Rcycle => "rcycle",
            BaseKind::RcycleProjection => "rcycle_projection",
            BaseKind::Multituple => "multituple",
            BaseKind::SymmetricOrbit => "S_l^k",
        }
    }
}

/// One concatenation factor of a cyclic orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseComponent {
    pub kind: BaseKind,
    /// Coordinates of `α` carried by this factor, in order.
    pub coords: Vec<usize>,
    /// Length of the cycles of `g` involved; 1 for a multituple.
    pub cycle_len: usize,
    /// `rows[t % rows.len()]` is the factor of `g^t α`.
    pub rows: Vec<Vec<u16>>,
}

impl BaseComponent {
    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.rows.iter().flatten().map(|&c| c as usize).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// The factor as a k-set (multiplicities dropped).
    pub fn set(&self, degree: usize) -> KSet {
        KSet::from_rows(self.arity(), degree, self.rows.clone())
    }
}

/// Splits `c = gr(g) α` by the cycles of `g`: every cycle meeting `α`
/// gives an rcycle or an rcycle projection, and the fixed coordinates
/// together give a multituple. Components come in order of their first
/// coordinate.
pub fn decompose_cycle_orbit(c: &KSet, g: &Permutation, alpha: &[u16]) -> Result<Vec<BaseComponent>> {
    let n = c.degree();
    if g.degree() != n {
        return Err(Error::DegreeMismatch { left: n, right: g.degree() });
    }
    if alpha.len() != c.arity() {
        return Err(Error::InvalidInput(format!("tuple of arity {} for a {}-set", alpha.len(), c.arity())));
    }
    let cyclic = PermGroup::new(n, vec![g.clone()])?;
    let generated = KSet::from_rows(alpha.len(), n, orbit_rows(&cyclic, alpha));
    if generated != c.to_set() {
        return Err(Error::InvalidInput("the k-set is not generated by the permutation from the tuple".into()));
    }
    let cycles = g.all_cycles();
    let mut cycle_of = vec![0usize; n];
    for (i, cyc) in cycles.iter().enumerate() {
        for &v in cyc {
            cycle_of[v] = i;
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut fixed: Vec<usize> = Vec::new();
    for (j, &a) in alpha.iter().enumerate() {
        let ci = cycle_of[a as usize];
        if cycles[ci].len() == 1 {
            fixed.push(j);
            continue;
        }
        match groups.iter_mut().find(|(c, _)| *c == ci) {
            Some((_, coords)) => coords.push(j),
            None => groups.push((ci, vec![j])),
        }
    }
    let mut out: Vec<BaseComponent> = Vec::new();
    if !fixed.is_empty() {
        let row: Vec<u16> = fixed.iter().map(|&j| alpha[j]).collect();
        out.push(BaseComponent { kind: BaseKind::Multituple, coords: fixed, cycle_len: 1, rows: vec![row] });
    }
    for (ci, coords) in groups {
        let l = cycles[ci].len();
        let kind = if coords.len() == l { BaseKind::Rcycle } else { BaseKind::RcycleProjection };
        out.push(BaseComponent { kind, rows: factor_rows(g, alpha, &coords, l), coords, cycle_len: l });
    }
    out.sort_by_key(|c| c.coords[0]);
    Ok(out)
}

fn factor_rows(g: &Permutation, alpha: &[u16], coords: &[usize], period: usize) -> Vec<Vec<u16>> {
    let mut row: Vec<u16> = coords.iter().map(|&j| alpha[j]).collect();
    let mut rows = Vec::with_capacity(period);
    for _ in 0..period {
        rows.push(row.clone());
        for x in row.iter_mut() {
            *x = g.apply(*x as usize) as u16;
        }
    }
    rows
}

/// Merges each group of components (indices into `components`) built on
/// cycles of one common length into S_l^k-orbits: the i-th new factor takes
/// the i-th coordinate of every component in the group. Returns the new
/// components and the column order of `α` they realize.
pub fn reassemble(
    components: &[BaseComponent],
    groups: &[Vec<usize>],
    g: &Permutation,
    alpha: &[u16],
) -> Result<(Vec<BaseComponent>, Vec<usize>)> {
    let mut merged = vec![false; components.len()];
    let mut out: Vec<BaseComponent> = Vec::new();
    let mut placed: Vec<(usize, BaseComponent)> = Vec::new();
    for group in groups {
        let Some(&first) = group.first() else { continue };
        if group.iter().any(|&i| i >= components.len() || merged[i]) {
            return Err(Error::InvalidInput("reassembly group refers to a missing or reused component".into()));
        }
        let l = components[first].cycle_len;
        let width = components[first].arity();
        for &i in group {
            let c = &components[i];
            if c.cycle_len != l || c.arity() != width || c.kind == BaseKind::Multituple {
                return Err(Error::InvalidInput("reassembly group mixes cycle lengths or arities".into()));
            }
            merged[i] = true;
        }
        for pos in 0..width {
            let coords: Vec<usize> = group.iter().map(|&i| components[i].coords[pos]).collect();
            let rows = factor_rows(g, alpha, &coords, l);
            placed.push((first, BaseComponent { kind: BaseKind::SymmetricOrbit, coords, cycle_len: l, rows }));
        }
    }
    for (i, c) in components.iter().enumerate() {
        if !merged[i] {
            placed.push((i, c.clone()));
        }
    }
    placed.sort_by_key(|(i, c)| (*i, c.coords[0]));
    let mut order = Vec::new();
    for (_, c) in placed {
        order.extend(c.coords.iter().copied());
        out.push(c);
    }
    Ok((out, order))
}

/// Concatenates the factors row by row for `t = 0 .. len`.
pub fn concatenate(components: &[BaseComponent], len: usize) -> Vec<Vec<u16>> {
    (0..len)
        .map(|t| components.iter().flat_map(|c| c.rows[t % c.rows.len()].iter().copied()).collect())
        .collect()
}
