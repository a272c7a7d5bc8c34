use rayon::prelude::*;

use crate::catalog::RectCatalog;
use crate::error::{Error, Result};
use crate::gf2::BitRow;
use crate::rect::{index2_classes, ClassKind, EmptyRect};
use crate::state::GridState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    Square,
    /// Thin annulus filling the given column.
    Vertical(usize),
    /// Thin annulus filling the given row.
    Horizontal(usize),
}

/// One GF(2) equation: the XOR of the listed sign bits equals `parity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub vars: Vec<usize>,
    pub parity: bool,
    pub kind: ConstraintKind,
    pub start: GridState,
    pub end: GridState,
}

impl Constraint {
    pub fn to_row(&self, nvars: usize) -> BitRow {
        BitRow::from_indices(nvars, self.vars.iter().copied())
    }
}

/// Equations for true sign assignments, encoded with sign = (-1)^bit.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub nvars: usize,
    pub rows: Vec<Constraint>,
}

impl ConstraintSystem {
    pub fn count(&self, pred: impl Fn(&ConstraintKind) -> bool) -> usize {
        self.rows.iter().filter(|c| pred(&c.kind)).count()
    }
}

pub fn build_constraints(catalog: &RectCatalog) -> Result<ConstraintSystem> {
    let per_state: Vec<Result<Vec<Constraint>>> = catalog
        .states()
        .par_iter()
        .map(|x| state_constraints(catalog, x))
        .collect();
    let mut rows = Vec::new();
    for r in per_state {
        rows.extend(r?);
    }
    Ok(ConstraintSystem {
        nvars: catalog.len(),
        rows,
    })
}

fn state_constraints(catalog: &RectCatalog, x: &GridState) -> Result<Vec<Constraint>> {
    let index = |r: &EmptyRect| -> Result<usize> {
        catalog
            .rect_index(r)
            .ok_or_else(|| Error::Internal(format!("rectangle {r} missing from catalog")))
    };
    let mut out = Vec::new();
    for class in index2_classes(x) {
        if class.is_duplicate_annulus() {
            continue;
        }
        let (kind, parity) = match class.kind {
            ClassKind::Square => (ConstraintKind::Square, true),
            ClassKind::VerticalAnnulus(j) => (ConstraintKind::Vertical(j), true),
            ClassKind::HorizontalAnnulus(i) => (ConstraintKind::Horizontal(i), false),
            ClassKind::Anomaly(detail) => {
                return Err(Error::AnomalousClass {
                    state: x.to_string(),
                    detail,
                })
            }
        };
        let mut vars = Vec::with_capacity(4);
        for (r1, r2) in &class.decompositions {
            vars.push(index(r1)?);
            vars.push(index(r2)?);
        }
        vars.sort_unstable();
        out.push(Constraint {
            vars,
            parity,
            kind,
            start: class.start(),
            end: class.end(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::rank;
    use crate::state::Limits;

    fn system(n: usize) -> ConstraintSystem {
        build_constraints(&RectCatalog::new(n, &Limits::default()).unwrap()).unwrap()
    }

    #[test]
    fn unknot_rank() {
        let s = system(2);
        assert_eq!(s.nvars, 4);
        assert_eq!(s.count(|k| matches!(k, ConstraintKind::Vertical(_))), 2);
        assert_eq!(s.count(|k| matches!(k, ConstraintKind::Horizontal(_))), 2);
        assert_eq!(s.count(|k| *k == ConstraintKind::Square), 0);
        assert_eq!(rank(s.rows.iter().map(|c| c.to_row(4)), 4), 3);
    }

    #[test]
    fn trivial_grid() {
        let s = system(1);
        assert_eq!(s.nvars, 0);
        assert!(s.rows.is_empty());
    }

    #[test]
    fn row_shapes() {
        let s = system(4);
        for c in &s.rows {
            match c.kind {
                ConstraintKind::Square => {
                    assert_eq!(c.vars.len(), 4);
                    assert!(c.parity);
                    assert_ne!(c.start, c.end);
                }
                ConstraintKind::Vertical(_) => {
                    assert_eq!(c.vars.len(), 2);
                    assert!(c.parity);
                }
                ConstraintKind::Horizontal(_) => {
                    assert_eq!(c.vars.len(), 2);
                    assert!(!c.parity);
                }
            }
            assert!(c.vars.windows(2).all(|w| w[0] < w[1]));
        }
        // one row per (state, column) and per (state, row), each annulus
        // class being shared by its two states
        assert_eq!(s.count(|k| matches!(k, ConstraintKind::Vertical(_))), 24 * 4 / 2);
        assert_eq!(s.count(|k| matches!(k, ConstraintKind::Horizontal(_))), 24 * 4 / 2);
    }
}
