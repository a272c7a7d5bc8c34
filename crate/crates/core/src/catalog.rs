use rayon::prelude::*;

use crate::error::Result;
use crate::rect::{empty_rectangles, EmptyRect};
use crate::state::{grid_states, GridState, Limits};

/// Every grid state of size `n` and every empty rectangle leaving it, in
/// canonical order. Rectangle indices double as sign-variable indices.
#[derive(Debug)]
pub struct RectCatalog {
    n: usize,
    states: Vec<GridState>,
    rects: Vec<EmptyRect>,
    offsets: Vec<usize>,
}

impl RectCatalog {
    pub fn new(n: usize, limits: &Limits) -> Result<Self> {
        let states = grid_states(n, limits)?;
        let per_state: Vec<Vec<EmptyRect>> = states.par_iter().map(empty_rectangles).collect();
        let mut offsets = Vec::with_capacity(states.len() + 1);
        let mut rects = Vec::new();
        for rs in per_state {
            offsets.push(rects.len());
            rects.extend(rs);
        }
        offsets.push(rects.len());
        Ok(RectCatalog {
            n,
            states,
            rects,
            offsets,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> &[GridState] {
        &self.states
    }

    pub fn rects(&self) -> &[EmptyRect] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn state_index(&self, x: &GridState) -> Option<usize> {
        if x.n() != self.n {
            return None;
        }
        let i = x.lex_rank();
        (self.states.get(i) == Some(x)).then_some(i)
    }

    /// Range of rectangle indices leaving state `i`.
    pub fn range_from(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn rects_from(&self, i: usize) -> &[EmptyRect] {
        &self.rects[self.range_from(i)]
    }

    pub fn rect_index(&self, r: &EmptyRect) -> Option<usize> {
        self.find(&r.start, r.sw, r.w, r.h)
    }

    pub fn find(&self, start: &GridState, sw: (usize, usize), w: usize, h: usize) -> Option<usize> {
        let i = self.state_index(start)?;
        let range = self.range_from(i);
        let slice = &self.rects[range.clone()];
        slice
            .binary_search_by(|r| (r.sw, r.w, r.h).cmp(&(sw, w, h)))
            .ok()
            .map(|k| range.start + k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_round_trip() {
        let cat = RectCatalog::new(4, &Limits::default()).unwrap();
        assert_eq!(cat.states().len(), 24);
        assert!(cat.rects().windows(2).all(|w| w[0] < w[1]));
        for (i, r) in cat.rects().iter().enumerate() {
            assert_eq!(cat.rect_index(r), Some(i));
        }
        assert_eq!(cat.find(&GridState::identity(4), (0, 0), 3, 3), None);
        assert_eq!(cat.state_index(&GridState::identity(3)), None);
    }

    #[test]
    fn unknot_variables() {
        let cat = RectCatalog::new(2, &Limits::default()).unwrap();
        assert_eq!(cat.len(), 4);
        let cat1 = RectCatalog::new(1, &Limits::default()).unwrap();
        assert!(cat1.is_empty());
    }
}
