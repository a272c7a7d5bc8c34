//! Empty rectangles, domains and the index-two classes built from them.
//!
//! A rectangle from `x` has the points of `x` at its SW and NE corners and the
//! points of its end state at SE and NW. Widths and heights are measured with
//! torus wrap-around, so every ordered pair of rows of `x` spans exactly one
//! candidate rectangle.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::grid::GridDiagram;
use crate::state::GridState;

/// Canonical order is `(start, sw, w, h)`; `end` is derived from those.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmptyRect {
    pub start: GridState,
    /// `(col, row)` of the SW corner.
    pub sw: (usize, usize),
    pub w: usize,
    pub h: usize,
    pub end: GridState,
}

impl EmptyRect {
    /// Looks up the rectangle with the given key, checking that `start` really
    /// has points at both corners and nothing in the interior.
    pub fn from_key(start: GridState, sw: (usize, usize), w: usize, h: usize) -> Option<Self> {
        let n = start.n();
        if sw.0 >= n || sw.1 >= n || w == 0 || h == 0 || w >= n || h >= n {
            return None;
        }
        let (b, b2) = (sw.1, (sw.1 + h) % n);
        if start.col(b) != sw.0 || start.col(b2) != (sw.0 + w) % n {
            return None;
        }
        if !interior_is_empty(&start, sw, w, h) {
            return None;
        }
        Some(EmptyRect {
            start,
            sw,
            w,
            h,
            end: start.swap_rows(b, b2),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.start.n()
    }

    /// The two rows whose points are exchanged.
    pub fn rows(&self) -> (usize, usize) {
        (self.sw.1, (self.sw.1 + self.h) % self.n())
    }

    #[inline]
    pub fn contains_cell(&self, col: usize, row: usize) -> bool {
        let n = self.n();
        (col + n - self.sw.0) % n < self.w && (row + n - self.sw.1) % n < self.h
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..self.h).flat_map(move |dy| {
            (0..self.w).map(move |dx| ((self.sw.0 + dx) % n, (self.sw.1 + dy) % n))
        })
    }
}

impl fmt::Debug for EmptyRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EmptyRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}@({},{})+{}x{}",
            self.start, self.sw.0, self.sw.1, self.w, self.h
        )
    }
}

fn interior_is_empty(x: &GridState, sw: (usize, usize), w: usize, h: usize) -> bool {
    let n = x.n();
    (1..h).all(|dy| {
        let col = x.col((sw.1 + dy) % n);
        let dx = (col + n - sw.0) % n;
        dx == 0 || dx >= w
    })
}

/// All empty rectangles starting at `x`, in `(sw, w, h)` order.
pub fn empty_rectangles(x: &GridState) -> Vec<EmptyRect> {
    let n = x.n();
    let mut out = Vec::new();
    for b in 0..n {
        let sw = (x.col(b), b);
        for h in 1..n {
            let b2 = (b + h) % n;
            let w = (x.col(b2) + n - sw.0) % n;
            if interior_is_empty(x, sw, w, h) {
                out.push(EmptyRect {
                    start: *x,
                    sw,
                    w,
                    h,
                    end: x.swap_rows(b, b2),
                });
            }
        }
    }
    out.sort();
    out
}

/// Per-marking multiplicities `(o, x)` of a rectangle; each entry is 0 or 1.
pub fn marking_counts(r: &EmptyRect, d: &GridDiagram) -> (Vec<u32>, Vec<u32>) {
    let n = d.n();
    let o = (0..n).map(|row| r.contains_cell(d.o_col(row), row) as u32).collect();
    let x = (0..n).map(|row| r.contains_cell(d.x_col(row), row) as u32).collect();
    (o, x)
}

/// A non-negative cell-multiplicity vector from one state to another. Cell
/// `(col, row)` is stored at `row * n + col`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domain {
    pub from: GridState,
    pub to: GridState,
    pub multiplicities: Vec<u32>,
}

impl Domain {
    pub fn from_rect(r: &EmptyRect) -> Self {
        let n = r.n();
        let mut multiplicities = vec![0; n * n];
        for (c, row) in r.cells() {
            multiplicities[row * n + c] += 1;
        }
        Domain {
            from: r.start,
            to: r.end,
            multiplicities,
        }
    }

    pub fn n(&self) -> usize {
        self.from.n()
    }

    /// Juxtaposes a rectangle onto the end of this domain.
    pub fn then(mut self, r: &EmptyRect) -> Result<Self> {
        if r.start != self.to {
            return Err(Error::StateMismatch);
        }
        let n = self.n();
        for (c, row) in r.cells() {
            self.multiplicities[row * n + c] += 1;
        }
        self.to = r.end;
        Ok(self)
    }

    pub fn thin_column(col: usize, at: GridState) -> Self {
        let n = at.n();
        let mut multiplicities = vec![0; n * n];
        for row in 0..n {
            multiplicities[row * n + col] = 1;
        }
        Domain {
            from: at,
            to: at,
            multiplicities,
        }
    }

    pub fn thin_row(row: usize, at: GridState) -> Self {
        let n = at.n();
        let mut multiplicities = vec![0; n * n];
        multiplicities[row * n..(row + 1) * n].fill(1);
        Domain {
            from: at,
            to: at,
            multiplicities,
        }
    }

    #[inline]
    pub fn multiplicity(&self, col: usize, row: usize) -> u32 {
        self.multiplicities[row * self.n() + col]
    }

    /// Column `j` if this is the thin vertical annulus through column `j`.
    pub fn as_thin_column(&self) -> Option<usize> {
        let n = self.n();
        if self.from != self.to || n < 2 {
            return None;
        }
        let col = (0..n).find(|&c| self.multiplicity(c, 0) > 0)?;
        (*self == Domain::thin_column(col, self.from)).then_some(col)
    }

    pub fn as_thin_row(&self) -> Option<usize> {
        let n = self.n();
        if self.from != self.to || n < 2 {
            return None;
        }
        let row = (0..n).find(|&r| self.multiplicity(0, r) > 0)?;
        (*self == Domain::thin_row(row, self.from)).then_some(row)
    }

    /// Marking multiplicities `(o, x)` weighted by the domain.
    pub fn marking_counts(&self, d: &GridDiagram) -> (Vec<u32>, Vec<u32>) {
        let n = d.n();
        let o = (0..n).map(|r| self.multiplicity(d.o_col(r), r)).collect();
        let x = (0..n).map(|r| self.multiplicity(d.x_col(r), r)).collect();
        (o, x)
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.from, self.to, self.multiplicities)
    }
}

/// Juxtaposition `r1 * r2`; requires `r1` to end where `r2` starts.
pub fn compose(r1: &EmptyRect, r2: &EmptyRect) -> Result<Domain> {
    Domain::from_rect(r1).then(r2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassKind {
    /// Two decompositions through four distinct rectangles.
    Square,
    /// Thin annulus filling column `j` (the beta degeneration between the
    /// vertical circles `j` and `j + 1`).
    VerticalAnnulus(usize),
    /// Thin annulus filling row `i`.
    HorizontalAnnulus(usize),
    Anomaly(String),
}

/// All decompositions `r1 * r2` of one domain starting at a fixed state.
#[derive(Clone, Debug)]
pub struct Index2Class {
    pub domain: Domain,
    pub decompositions: Vec<(EmptyRect, EmptyRect)>,
    pub kind: ClassKind,
}

impl Index2Class {
    pub fn start(&self) -> GridState {
        self.domain.from
    }

    pub fn end(&self) -> GridState {
        self.domain.to
    }

    pub fn is_annulus(&self) -> bool {
        matches!(
            self.kind,
            ClassKind::VerticalAnnulus(_) | ClassKind::HorizontalAnnulus(_)
        )
    }

    /// An annulus class `r1 * r2` at `x` has the same rectangles as the class
    /// `r2 * r1` at the intermediate state; only the copy based at the smaller
    /// of the two states is kept.
    pub fn is_duplicate_annulus(&self) -> bool {
        self.is_annulus() && self.decompositions[0].0.end < self.start()
    }
}

/// Groups every composable pair of empty rectangles leaving `x` by
/// `(end state, domain)` and classifies each group.
pub fn index2_classes(x: &GridState) -> Vec<Index2Class> {
    let mut groups: BTreeMap<Domain, Vec<(EmptyRect, EmptyRect)>> = BTreeMap::new();
    for r1 in empty_rectangles(x) {
        for r2 in empty_rectangles(&r1.end) {
            let domain = compose(&r1, &r2).expect("r2 starts where r1 ends");
            groups.entry(domain).or_default().push((r1, r2));
        }
    }
    groups
        .into_iter()
        .map(|(domain, decompositions)| {
            let kind = classify(&domain, &decompositions);
            Index2Class {
                domain,
                decompositions,
                kind,
            }
        })
        .collect()
}

fn classify(domain: &Domain, decs: &[(EmptyRect, EmptyRect)]) -> ClassKind {
    if domain.from == domain.to {
        let kind = if let Some(col) = domain.as_thin_column() {
            ClassKind::VerticalAnnulus(col)
        } else if let Some(row) = domain.as_thin_row() {
            ClassKind::HorizontalAnnulus(row)
        } else {
            return ClassKind::Anomaly("closed domain is not a thin annulus".into());
        };
        if decs.len() != 1 {
            return ClassKind::Anomaly(format!(
                "thin annulus with {} decompositions",
                decs.len()
            ));
        }
        return kind;
    }
    if decs.len() != 2 {
        return ClassKind::Anomaly(format!("{} decompositions", decs.len()));
    }
    let (a, b) = (decs[0], decs[1]);
    let rects = [a.0, a.1, b.0, b.1];
    let distinct = (0..4).all(|i| (i + 1..4).all(|j| rects[i] != rects[j]));
    if distinct {
        ClassKind::Square
    } else {
        ClassKind::Anomaly("square decompositions share a rectangle".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{grid_states, Limits};

    fn st(one_line: &[i64]) -> GridState {
        GridState::from_one_line(one_line).unwrap()
    }

    #[test]
    fn two_by_two_identity() {
        let rs = empty_rectangles(&GridState::identity(2));
        assert_eq!(rs.len(), 2);
        assert_eq!((rs[0].sw, rs[0].w, rs[0].h), ((0, 0), 1, 1));
        assert_eq!((rs[1].sw, rs[1].w, rs[1].h), ((1, 1), 1, 1));
        assert!(rs.iter().all(|r| r.end == st(&[2, 1])));
        assert!(empty_rectangles(&GridState::identity(1)).is_empty());
    }

    // Brute force over all corner pairs and all interior points.
    fn brute_force_rects(x: &GridState) -> Vec<((usize, usize), usize, usize)> {
        let n = x.n();
        let pts: Vec<_> = x.points().collect();
        let mut out = Vec::new();
        for &(c0, r0) in &pts {
            for &(c1, r1) in &pts {
                if (c0, r0) == (c1, r1) {
                    continue;
                }
                let w = (c1 + n - c0) % n;
                let h = (r1 + n - r0) % n;
                let blocked = pts.iter().any(|&(c, r)| {
                    let dx = (c + n - c0) % n;
                    let dy = (r + n - r0) % n;
                    dx > 0 && dx < w && dy > 0 && dy < h
                });
                if !blocked {
                    out.push(((c0, r0), w, h));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..=5 {
            for x in grid_states(n, &Limits::default()).unwrap() {
                let got: Vec<_> = empty_rectangles(&x).iter().map(|r| (r.sw, r.w, r.h)).collect();
                assert_eq!(got, brute_force_rects(&x), "{x}");
            }
        }
        assert_eq!(empty_rectangles(&GridState::identity(3)).len(), 3);
    }

    #[test]
    fn corners_and_end_state() {
        for x in grid_states(5, &Limits::default()).unwrap() {
            for r in empty_rectangles(&x) {
                let n = x.n();
                let (b, b2) = r.rows();
                let ne = ((r.sw.0 + r.w) % n, b2);
                assert_eq!(x.col(b), r.sw.0);
                assert_eq!(x.col(ne.1), ne.0);
                // SE and NW corners belong to the end state
                assert_eq!(r.end.col(b), ne.0);
                assert_eq!(r.end.col(b2), r.sw.0);
                assert_eq!(r.end, x.swap_rows(b, b2));
                assert_eq!(r.end.sign(), -x.sign());
                assert_eq!(EmptyRect::from_key(x, r.sw, r.w, r.h), Some(r));
                assert_eq!(r.cells().count(), r.w * r.h);
            }
        }
    }

    #[test]
    fn at_most_two_rects_per_ordered_pair() {
        for x in grid_states(5, &Limits::default()).unwrap() {
            let mut per_end: BTreeMap<GridState, Vec<EmptyRect>> = BTreeMap::new();
            for r in empty_rectangles(&x) {
                per_end.entry(r.end).or_default().push(r);
            }
            for (_, rs) in per_end {
                assert!(rs.len() <= 2);
                if let [a, b] = rs[..] {
                    // complementary quadrants: one's SW is the other's NE
                    assert_eq!(a.rows().0, b.rows().1);
                    assert_eq!(a.rows().1, b.rows().0);
                }
            }
        }
    }

    #[test]
    fn from_key_rejects_non_rectangles() {
        let id = GridState::identity(3);
        // the big complement of a unit square contains the third point
        assert!(EmptyRect::from_key(id, (0, 0), 2, 2).is_none());
        assert!(EmptyRect::from_key(id, (1, 0), 1, 1).is_none());
        assert!(EmptyRect::from_key(id, (0, 0), 1, 1).is_some());
        assert!(EmptyRect::from_key(id, (0, 0), 0, 1).is_none());
        assert!(EmptyRect::from_key(id, (5, 0), 1, 1).is_none());
    }

    #[test]
    fn compose_column_and_mismatch() {
        let id = GridState::identity(2);
        let swap = st(&[2, 1]);
        let a = EmptyRect::from_key(id, (0, 0), 1, 1).unwrap();
        let b = EmptyRect::from_key(swap, (0, 1), 1, 1).unwrap();
        let dom = compose(&a, &b).unwrap();
        assert_eq!(dom, Domain::thin_column(0, id));
        assert_eq!(dom.as_thin_column(), Some(0));
        assert_eq!(dom.as_thin_row(), None);
        assert_eq!(compose(&a, &a), Err(Error::StateMismatch));
    }

    #[test]
    fn marking_counts_unknot() {
        let d = GridDiagram::new(&[1, 2], &[2, 1]).unwrap();
        let r = EmptyRect::from_key(GridState::identity(2), (0, 0), 1, 1).unwrap();
        assert_eq!(marking_counts(&r, &d), (vec![1, 0], vec![0, 0]));
        let dom = Domain::thin_column(1, GridState::identity(2));
        let (o, x) = dom.marking_counts(&d);
        assert_eq!(o.iter().sum::<u32>(), 1);
        assert_eq!(x.iter().sum::<u32>(), 1);
    }

    #[test]
    fn unknot_classes() {
        let classes = index2_classes(&GridState::identity(2));
        let kinds: Vec<_> = classes.iter().map(|c| c.kind.clone()).collect();
        assert_eq!(classes.len(), 4);
        assert_eq!(
            kinds.iter().filter(|k| matches!(k, ClassKind::VerticalAnnulus(_))).count(),
            2
        );
        assert_eq!(
            kinds.iter().filter(|k| matches!(k, ClassKind::HorizontalAnnulus(_))).count(),
            2
        );
    }

    #[test]
    fn annulus_classes_pair_up() {
        for x in grid_states(4, &Limits::default()).unwrap() {
            for c in index2_classes(&x).into_iter().filter(|c| c.is_annulus()) {
                let (r1, r2) = c.decompositions[0];
                let mirror = index2_classes(&r1.end)
                    .into_iter()
                    .find(|m| m.kind == c.kind)
                    .unwrap();
                assert_eq!(mirror.decompositions, vec![(r2, r1)]);
                assert_ne!(c.is_duplicate_annulus(), mirror.is_duplicate_annulus());
            }
        }
    }

    #[test]
    fn class_census_exhaustive() {
        for n in 2..=5 {
            let mut squares = 0;
            for x in grid_states(n, &Limits::default()).unwrap() {
                let mut vertical = vec![0; n];
                let mut horizontal = vec![0; n];
                for c in index2_classes(&x) {
                    match c.kind {
                        ClassKind::VerticalAnnulus(j) => {
                            vertical[j] += 1;
                            assert_eq!(c.decompositions.len(), 1);
                        }
                        ClassKind::HorizontalAnnulus(i) => {
                            horizontal[i] += 1;
                            assert_eq!(c.decompositions.len(), 1);
                        }
                        ClassKind::Square => {
                            squares += 1;
                            assert_eq!(c.decompositions.len(), 2);
                        }
                        ClassKind::Anomaly(why) => panic!("n={n} {x}: {why}"),
                    }
                }
                assert!(vertical.iter().all(|&v| v == 1), "{x}");
                assert!(horizontal.iter().all(|&h| h == 1), "{x}");
            }
            if n == 2 {
                assert_eq!(squares, 0);
            } else {
                assert!(squares > 0);
            }
        }
    }
}
