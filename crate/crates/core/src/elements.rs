//! Flat, hash-indexed storage for large sets of equal-length point tuples.

use alloc::vec::Vec;
use hashbrown::HashTable;

use crate::perm::Permutation;

#[inline]
pub(crate) fn hash_points(points: &[u16]) -> u64 {
    let mut h: u64 = 0x9E37_79B9_7F4A_7C15 ^ points.len() as u64;
    for chunk in points.chunks(4) {
        let mut w = 0u64;
        for (i, &x) in chunk.iter().enumerate() {
            w |= (x as u64) << (16 * i);
        }
        h = (h.rotate_left(5) ^ w).wrapping_mul(0x51_7C_C1_B7_27_22_0A_95);
    }
    h ^ (h >> 29)
}

/// An insertion-ordered set of `width`-long rows with O(1) lookup.
#[derive(Clone)]
pub struct RowSet {
    width: usize,
    flat: Vec<u16>,
    index: HashTable<u32>,
}

impl RowSet {
    pub fn new(width: usize) -> Self {
        RowSet { width, flat: Vec::new(), index: HashTable::new() }
    }

    pub fn with_capacity(width: usize, rows: usize) -> Self {
        RowSet { width, flat: Vec::with_capacity(width * rows), index: HashTable::with_capacity(rows) }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn len(&self) -> usize {
        if self.width == 0 {
            self.index.len()
        } else {
            self.flat.len() / self.width
        }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u16] {
        &self.flat[i * self.width..(i + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u16]> + '_ {
        (0..self.len()).map(move |i| self.row(i))
    }

    pub fn index_of(&self, row: &[u16]) -> Option<usize> {
        if row.len() != self.width {
            return None;
        }
        let h = hash_points(row);
        let flat = &self.flat;
        let w = self.width;
        self.index
            .find(h, |&i| &flat[i as usize * w..(i as usize + 1) * w] == row)
            .map(|&i| i as usize)
    }

    #[inline]
    pub fn contains(&self, row: &[u16]) -> bool {
        self.index_of(row).is_some()
    }

    /// Inserts `row`; returns its index and whether it was new.
    pub fn insert(&mut self, row: &[u16]) -> (usize, bool) {
        assert_eq!(row.len(), self.width);
        if let Some(i) = self.index_of(row) {
            return (i, false);
        }
        let i = self.len();
        self.flat.extend_from_slice(row);
        let h = hash_points(row);
        let flat = &self.flat;
        let w = self.width;
        self.index.insert_unique(h, i as u32, |&j| hash_points(&flat[j as usize * w..(j as usize + 1) * w]));
        (i, true)
    }
}

/// The materialized elements of a permutation group, in breadth-first order
/// from the identity.
#[derive(Clone)]
pub struct ElementSet {
    rows: RowSet,
}

impl ElementSet {
    pub(crate) fn from_rows(rows: RowSet) -> Self {
        ElementSet { rows }
    }

    pub fn degree(&self) -> usize {
        self.rows.width()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    #[inline]
    pub fn images(&self, i: usize) -> &[u16] {
        self.rows.row(i)
    }

    pub fn get(&self, i: usize) -> Permutation {
        Permutation::from_raw(self.rows.row(i).into())
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.rows.index_of(g.raw())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.rows.contains(g.raw())
    }

    pub fn iter(&self) -> impl Iterator<Item = Permutation> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn raw_rows(&self) -> impl Iterator<Item = &[u16]> + '_ {
        self.rows.rows()
    }
}

impl core::fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "ElementSet(degree {}, {} elements)", self.degree(), self.len())
    }
}
