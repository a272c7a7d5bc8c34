//! Packed GF(2) row vectors and incremental row echelon form.

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zeros(len);
        for i in ones {
            row.flip(i);
        }
        row
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Lowest set bit at or after `from`.
    pub fn lowest_set_from(&self, from: usize) -> Option<usize> {
        let mut w = from / 64;
        if w >= self.words.len() {
            return None;
        }
        let mut word = self.words[w] & (!0u64 << (from % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    /// Parity of the bitwise AND of the two rows.
    pub fn dot(&self, other: &BitRow) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        let mut next = self.lowest_set_from(0);
        std::iter::from_fn(move || {
            let cur = next?;
            next = self.lowest_set_from(cur + 1);
            Some(cur)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

impl std::fmt::Debug for BitRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.ones()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOutcome {
    /// The row became a new pivot row on this column.
    Pivot(usize),
    Redundant,
    Inconsistent,
}

/// Row echelon form in which every row's pivot is its lowest set bit.
///
/// The pivot set depends only on the row space, so `particular_solution`
/// (all free variables zero) is independent of the insertion order.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<(BitRow, bool)>,
    pivot_row: Vec<Option<usize>>,
    inconsistent: bool,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
            inconsistent: false,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    pub fn insert(&mut self, mut row: BitRow, mut rhs: bool) -> RowOutcome {
        debug_assert_eq!(row.len(), self.ncols);
        let mut from = 0;
        while let Some(c) = row.lowest_set_from(from) {
            match self.pivot_row[c] {
                Some(p) => {
                    let (prow, prhs) = &self.rows[p];
                    row.xor_assign(prow);
                    rhs ^= prhs;
                    from = c + 1;
                }
                None => {
                    self.pivot_row[c] = Some(self.rows.len());
                    self.rows.push((row, rhs));
                    return RowOutcome::Pivot(c);
                }
            }
        }
        if rhs {
            self.inconsistent = true;
            RowOutcome::Inconsistent
        } else {
            RowOutcome::Redundant
        }
    }

    /// Back-substitutes pivots from the highest column down with the given
    /// values on the free columns.
    fn back_substitute(&self, mut x: BitRow, homogeneous: bool) -> BitRow {
        for c in (0..self.ncols).rev() {
            if let Some(p) = self.pivot_row[c] {
                let (row, rhs) = &self.rows[p];
                x.set(c, false);
                let v = (*rhs && !homogeneous) ^ row.dot(&x);
                x.set(c, v);
            }
        }
        x
    }

    /// The solution with every free variable zero, if the system is consistent.
    pub fn particular_solution(&self) -> Option<BitRow> {
        self.is_consistent()
            .then(|| self.back_substitute(BitRow::zeros(self.ncols), false))
    }

    /// One kernel vector per free column, with a single free bit set.
    pub fn kernel_basis(&self) -> Vec<BitRow> {
        (0..self.ncols)
            .filter(|&c| self.pivot_row[c].is_none())
            .map(|c| {
                let mut x = BitRow::zeros(self.ncols);
                x.set(c, true);
                self.back_substitute(x, true)
            })
            .collect()
    }
}

/// Rank over GF(2) of a set of rows.
pub fn rank(rows: impl IntoIterator<Item = BitRow>, ncols: usize) -> usize {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(r, false);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bit_ops() {
        let mut r = BitRow::from_indices(130, [0, 64, 129]);
        assert_eq!(r.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(r.lowest_set_from(1), Some(64));
        assert_eq!(r.lowest_set_from(130), None);
        r.flip(64);
        assert!(!r.get(64));
        assert!(r.dot(&BitRow::from_indices(130, [129])));
    }

    #[test]
    fn unknot_annulus_system() {
        // v0+v2=1, v0+v3=0, v1+v3=1, v1+v2=0
        let mut e = Echelon::new(4);
        let eqs = [([0, 2], true), ([0, 3], false), ([1, 3], true), ([1, 2], false)];
        for (idx, rhs) in eqs {
            e.insert(BitRow::from_indices(4, idx), rhs);
        }
        assert_eq!(e.rank(), 3);
        let x = e.particular_solution().unwrap();
        assert_eq!(x.ones().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(e.kernel_basis().len(), 1);
    }

    #[test]
    fn inconsistent_detected() {
        let mut e = Echelon::new(2);
        e.insert(BitRow::from_indices(2, [0, 1]), true);
        assert_eq!(e.insert(BitRow::from_indices(2, [0, 1]), false), RowOutcome::Inconsistent);
        assert!(e.particular_solution().is_none());
    }

    fn brute_rank(rows: &[Vec<bool>], ncols: usize) -> usize {
        // size of the span, by enumeration
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let mut v = vec![false; ncols];
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for c in 0..ncols {
                        v[c] ^= r[c];
                    }
                }
            }
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    proptest! {
        #[test]
        fn rank_matches_span_size(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 7), 0..8)) {
            let bits = rows.iter().map(|r| BitRow::from_indices(7, r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)));
            prop_assert_eq!(rank(bits, 7), brute_rank(&rows, 7));
        }

        #[test]
        fn solutions_satisfy_rows(
            rows in prop::collection::vec((prop::collection::vec(any::<bool>(), 70), any::<bool>()), 0..40),
            order_seed in any::<u64>(),
        ) {
            let mk = |r: &Vec<bool>| BitRow::from_indices(70, r.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i));
            let mut e = Echelon::new(70);
            for (r, rhs) in &rows {
                e.insert(mk(r), *rhs);
            }
            // insertion order does not change the particular solution
            let mut shuffled = rows.clone();
            let k = shuffled.len().max(1);
            shuffled.rotate_left((order_seed as usize) % k);
            shuffled.reverse();
            let mut e2 = Echelon::new(70);
            for (r, rhs) in &shuffled {
                e2.insert(mk(r), *rhs);
            }
            prop_assert_eq!(e.particular_solution(), e2.particular_solution());
            if let Some(x) = e.particular_solution() {
                for (r, rhs) in &rows {
                    prop_assert_eq!(mk(r).dot(&x), *rhs);
                }
                for k in e.kernel_basis() {
                    for (r, _) in &rows {
                        prop_assert!(!mk(r).dot(&k));
                    }
                }
            }
        }
    }
}
