//! Projection, multiprojection, concatenation and the two actions.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{KSet, Subspace};
use crate::error::{Error, Result};
use crate::group::{check_degree, PermGroup};
use crate::perm::Permutation;

fn check_subspace(x: &KSet, i: &Subspace) -> Result<()> {
    if let Some(&bad) = i.indices().iter().find(|&&c| c >= x.arity()) {
        return Err(Error::InvalidInput(format!(
            "subspace index {} out of range for arity {}",
            bad + 1,
            x.arity()
        )));
    }
    Ok(())
}

/// `p̂(I) X`: the set of projections, duplicates removed.
pub fn project(x: &KSet, i: &Subspace) -> Result<KSet> {
    check_subspace(x, i)?;
    let rows = x.iter().map(|t| i.indices().iter().map(|&c| t[c]).collect()).collect();
    Ok(KSet::from_rows(i.len(), x.degree(), rows))
}

/// `⊎ p̂(I) X`: projections with multiplicities, so the total is `|X|`.
pub fn multiproject(x: &KSet, i: &Subspace) -> Result<KSet> {
    check_subspace(x, i)?;
    let entries = x.entries().map(|(t, c)| (i.indices().iter().map(|&j| t[j]).collect(), c)).collect();
    KSet::multiset_from(i.len(), x.degree(), entries)
}

/// Concatenates entries of `y` with entries of `z`.
///
/// Multisets are expanded into entry sequences in canonical order;
/// `pairing[i]` is the entry of `z` matched with entry `i` of `y`, and the
/// aligned pairing is used when `pairing` is `None`. The result is a set
/// when all concatenations are distinct and `y`, `z` were sets, otherwise a
/// multiset. Repeated coordinates produce a weak set.
pub fn concat(y: &KSet, z: &KSet, pairing: Option<&[usize]>) -> Result<KSet> {
    check_degree(y.degree(), z.degree())?;
    if z.arity() == 0 {
        return Ok(y.clone());
    }
    if y.arity() == 0 {
        return Ok(z.clone());
    }
    let expand = |s: &KSet| -> Vec<Vec<u16>> {
        let mut v = Vec::new();
        for (t, c) in s.entries() {
            for _ in 0..c {
                v.push(t.to_vec());
            }
        }
        v
    };
    let ys = expand(y);
    let zs = expand(z);
    if ys.len() != zs.len() {
        return Err(Error::InvalidInput(format!("concatenation of {} and {} entries", ys.len(), zs.len())));
    }
    let phi: Vec<usize> = match pairing {
        Some(p) => {
            let mut seen = vec![false; zs.len()];
            if p.len() != ys.len() || p.iter().any(|&j| j >= zs.len() || core::mem::replace(&mut seen[j], true)) {
                return Err(Error::InvalidInput("pairing is not a bijection".into()));
            }
            p.to_vec()
        }
        None => (0..ys.len()).collect(),
    };
    let rows: Vec<Vec<u16>> = ys
        .iter()
        .zip(&phi)
        .map(|(a, &j)| {
            let mut r = a.clone();
            r.extend_from_slice(&zs[j]);
            r
        })
        .collect();
    let arity = y.arity() + z.arity();
    let mut sorted = rows.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if !y.is_multiset() && !z.is_multiset() && sorted.len() == rows.len() {
        KSet::weak_from_rows(arity, y.degree(), rows)
    } else {
        KSet::multiset_from(arity, y.degree(), rows.into_iter().map(|r| (r, 1)).collect())
    }
}

/// `g X`: relabels coordinate values.
pub fn act_left(g: &Permutation, x: &KSet) -> Result<KSet> {
    check_degree(g.degree(), x.degree())?;
    let rows = x.entries().map(|(t, c)| (t.iter().map(|&v| g.raw()[v as usize]).collect(), c)).collect();
    if x.is_multiset() {
        KSet::multiset_from(x.arity(), x.degree(), rows)
    } else {
        Ok(KSet::from_rows(x.arity(), x.degree(), rows.into_iter().map(|(r, _)| r).collect()))
    }
}

/// `α g = ⟨α_{g(1)} .. α_{g(n)}⟩` for an n-tuple `α`.
pub fn act_right_on_tuple(alpha: &[u16], g: &Permutation) -> Result<Vec<u16>> {
    check_degree(alpha.len(), g.degree())?;
    Ok((0..alpha.len()).map(|i| alpha[g.apply(i)]).collect())
}

/// `X g` for a set of n-tuples.
pub fn right_translate(x: &KSet, g: &Permutation) -> Result<KSet> {
    check_degree(x.arity(), g.degree())?;
    let rows = x.iter().map(|t| (0..t.len()).map(|i| t[g.apply(i)]).collect()).collect();
    Ok(KSet::from_rows(x.arity(), x.degree(), rows))
}

/// The right action re-expressed as a projection of the ambient n-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightProjection {
    /// `p̂(I)(X g) = p̂(gI) X`.
    pub set: KSet,
    /// `gI` in its natural, unsorted order.
    pub image: Subspace,
    /// `gI` sorted ascending.
    pub sorted: Subspace,
    /// `p̂(sorted gI) X`.
    pub sorted_set: KSet,
    /// Position map: coordinate `j` of `image` is coordinate `sorting[j]`
    /// of `sorted`.
    pub sorting: Vec<usize>,
}

/// The right action of `g` on the projection `p̂(I) X` of an ambient set of
/// n-tuples.
pub fn act_right(ambient: &KSet, i: &Subspace, g: &Permutation) -> Result<RightProjection> {
    if ambient.arity() != g.degree() {
        return Err(Error::InvalidInput(format!(
            "right action needs the ambient {}-set, got arity {}",
            g.degree(),
            ambient.arity()
        )));
    }
    check_subspace(ambient, i)?;
    let image = i.image(g);
    let sorted = Subspace::new(image.support())?;
    let sorting = image.indices().iter().map(|c| sorted.indices().iter().position(|d| d == c).unwrap()).collect();
    Ok(RightProjection {
        set: project(ambient, &image)?,
        sorted_set: project(ambient, &sorted)?,
        image,
        sorted,
        sorting,
    })
}

/// The common multiplicity of `⊎ p̂(I) X`, if homogeneous.
pub fn homogeneity(x: &KSet, i: &Subspace) -> Result<Option<u32>> {
    let m = multiproject(x, i)?;
    let mut common: Option<u32> = None;
    for (_, c) in m.entries() {
        match common {
            None => common = Some(c),
            Some(d) if d != c => return Ok(None),
            _ => {}
        }
    }
    Ok(common)
}

pub fn homogeneity_check(x: &KSet, i: &Subspace) -> Result<bool> {
    Ok(homogeneity(x, i)?.is_some())
}

/// The setwise stabilizer `{g ∈ G : gY = Y}`, by scanning elements.
pub fn setwise_stabilizer(group: &PermGroup, y: &KSet, cap: usize) -> Result<Arc<PermGroup>> {
    check_degree(group.degree(), y.degree())?;
    let elements = group.materialize(cap)?;
    let mut gens: Vec<Permutation> = Vec::new();
    let mut buf = vec![0u16; y.arity()];
    let mut count = 0u64;
    'outer: for idx in 0..elements.len() {
        let g = elements.images(idx);
        for t in y.iter() {
            for (slot, &c) in buf.iter_mut().zip(t) {
                *slot = g[c as usize];
            }
            if !y.contains(&buf) {
                continue 'outer;
            }
        }
        count += 1;
        let p = elements.get(idx);
        if !p.is_identity() {
            gens.push(p);
        }
    }
    Ok(Arc::new(PermGroup::new(group.degree(), gens)?.with_known_order(count)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::korbit::{n_orbit, orbit_of_tuple, KTuple};

    fn s3() -> Arc<PermGroup> {
        Arc::new(PermGroup::from_cycle_strings(3, &["(1 2)", "(1 2 3)"]).unwrap())
    }

    fn sub(ix: &[usize]) -> Subspace {
        Subspace::new(ix.to_vec()).unwrap()
    }

    #[test]
    fn projections_of_the_s3_orbit() {
        let x = n_orbit(&s3()).unwrap().set;
        assert_eq!(project(&x, &sub(&[0, 1])).unwrap().len(), 6);
        let m = multiproject(&x, &sub(&[0])).unwrap();
        assert_eq!(m.entries().map(|(_, c)| c).collect::<Vec<_>>(), vec![2, 2, 2]);
        assert_eq!(m.total(), 6);
        assert_eq!(homogeneity(&x, &sub(&[0])).unwrap(), Some(2));
    }

    #[test]
    fn rcycle_projection() {
        let r = KSet::from_digit_strings(3, &["123", "231", "312"]).unwrap();
        assert_eq!(project(&r, &sub(&[0, 1])).unwrap(), KSet::from_digit_strings(3, &["12", "23", "31"]).unwrap());
    }

    #[test]
    fn concatenation() {
        let y = KSet::from_digit_strings(4, &["12", "21"]).unwrap();
        let z = KSet::from_digit_strings(4, &["34", "43"]).unwrap();
        assert_eq!(concat(&y, &z, None).unwrap(), KSet::from_digit_strings(4, &["1234", "2143"]).unwrap());
        assert_eq!(concat(&y, &z, Some(&[1, 0])).unwrap(), KSet::from_digit_strings(4, &["1243", "2134"]).unwrap());
        let a = KSet::from_digit_strings(3, &["12"]).unwrap();
        let b = KSet::from_digit_strings(3, &["23"]).unwrap();
        let ab = concat(&a, &b, None).unwrap();
        assert!(ab.is_weak());
        assert_eq!(ab.tuple(0), &[0, 1, 1, 2]);
        assert_eq!(concat(&y, &KSet::empty(0, 4), None).unwrap(), y);
        assert!(concat(&y, &a.union(&a).unwrap(), None).is_err());
    }

    #[test]
    fn left_action_relabels() {
        let g = Permutation::parse_cycles(3, "(1 2)").unwrap();
        let x = KSet::from_digit_strings(3, &["13"]).unwrap();
        assert_eq!(act_left(&g, &x).unwrap(), KSet::from_digit_strings(3, &["23"]).unwrap());
    }

    #[test]
    fn right_action_moves_the_subspace() {
        let x = n_orbit(&s3()).unwrap().set;
        let g = Permutation::parse_cycles(3, "(2 3)").unwrap();
        let r = act_right(&x, &sub(&[0, 1]), &g).unwrap();
        assert_eq!(r.image, sub(&[0, 2]));
        assert_eq!(r.set, project(&x, &sub(&[0, 2])).unwrap());
        let moved = right_translate(&x, &g).unwrap();
        assert_eq!(project(&moved, &sub(&[0, 1])).unwrap(), r.set);
        let h = Permutation::parse_cycles(3, "(1 3)").unwrap();
        let r = act_right(&x, &sub(&[0, 1]), &h).unwrap();
        assert_eq!(r.image, sub(&[2, 1]));
        assert_eq!(r.sorted, sub(&[1, 2]));
        assert_eq!(r.sorting, vec![1, 0]);
    }

    #[test]
    fn non_orbit_fails_homogeneity() {
        let x = KSet::from_digit_strings(3, &["12", "13", "23"]).unwrap();
        assert!(!homogeneity_check(&x, &sub(&[0])).unwrap());
        let o = orbit_of_tuple(&s3(), &KTuple::new(3, &[0, 1]).unwrap()).unwrap();
        assert!(homogeneity_check(&o.set, &sub(&[1])).unwrap());
    }

    #[test]
    fn stabilizer_of_a_pair_set() {
        let y = KSet::from_digit_strings(3, &["12", "13"]).unwrap();
        let s = setwise_stabilizer(&s3(), &y, 100).unwrap();
        assert_eq!(s.order().unwrap(), 2);
    }
}
