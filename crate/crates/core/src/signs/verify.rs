use rayon::prelude::*;

use super::{ConstraintKind, Convention, Sign, SignAssignment};
use crate::error::{Error, Result};
use crate::rect::{index2_classes, ClassKind, EmptyRect};
use crate::state::GridState;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ConstraintKind,
    pub start: GridState,
    pub end: GridState,
    /// Rectangles of the class, in decomposition order.
    pub rects: Vec<EmptyRect>,
    pub product: Sign,
    pub expected: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub convention: Convention,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, pred: impl Fn(&ConstraintKind) -> bool) -> usize {
        self.violations.iter().filter(|v| pred(&v.kind)).count()
    }
}

/// Re-derives every index-two class from scratch and checks the sign
/// products against `convention`.
pub fn verify_axioms(s: &SignAssignment, convention: Convention) -> Result<VerificationReport> {
    let catalog = s.catalog();
    let per_state: Vec<Result<(usize, Vec<Violation>)>> = catalog
        .states()
        .par_iter()
        .map(|x| {
            let sign = |r: &EmptyRect| s.sign(r).ok_or_else(|| Error::MissingRectangle(r.to_string()));
            let mut checked = 0;
            let mut violations = Vec::new();
            for class in index2_classes(x) {
                if class.is_duplicate_annulus() {
                    continue;
                }
                let (kind, expected) = match class.kind {
                    ClassKind::Square => (ConstraintKind::Square, Sign::Minus),
                    ClassKind::VerticalAnnulus(j) => {
                        (ConstraintKind::Vertical(j), convention.vertical_target())
                    }
                    ClassKind::HorizontalAnnulus(i) => {
                        (ConstraintKind::Horizontal(i), convention.horizontal_target())
                    }
                    ClassKind::Anomaly(detail) => {
                        return Err(Error::AnomalousClass {
                            state: x.to_string(),
                            detail,
                        })
                    }
                };
                checked += 1;
                // For squares the relation is p1 = -p2, i.e. p1 * p2 = -1.
                let mut product = Sign::Plus;
                for (r1, r2) in &class.decompositions {
                    product = product * sign(r1)? * sign(r2)?;
                }
                if product != expected {
                    violations.push(Violation {
                        kind,
                        start: class.start(),
                        end: class.end(),
                        rects: class
                            .decompositions
                            .iter()
                            .flat_map(|&(a, b)| [a, b])
                            .collect(),
                        product,
                        expected,
                    });
                }
            }
            Ok((checked, violations))
        })
        .collect();
    let mut report = VerificationReport {
        convention,
        checked: 0,
        violations: Vec::new(),
    };
    for r in per_state {
        let (checked, violations) = r?;
        report.checked += checked;
        report.violations.extend(violations);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::RectCatalog;
    use crate::signs::{solve_signs, twist};
    use crate::state::Limits;
    use std::sync::Arc;

    #[test]
    fn all_plus_violates_vertical_only() {
        let cat = Arc::new(RectCatalog::new(2, &Limits::default()).unwrap());
        let s = SignAssignment::constant(cat, Sign::Plus, Convention::True);
        let report = verify_axioms(&s, Convention::True).unwrap();
        assert_eq!(report.checked, 4);
        assert_eq!(report.violations.len(), 2);
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v.kind, ConstraintKind::Vertical(_))));
        let at_id: Vec<_> = report
            .violations
            .iter()
            .filter(|v| v.start.is_identity())
            .collect();
        assert_eq!(at_id.len(), 2);
        let mut cols: Vec<_> = report.violations.iter().map(|v| v.kind).collect();
        cols.sort_by_key(|k| format!("{k:?}"));
        assert_eq!(cols, vec![ConstraintKind::Vertical(0), ConstraintKind::Vertical(1)]);
    }

    #[test]
    fn canonical_and_twist() {
        let cat = Arc::new(RectCatalog::new(3, &Limits::default()).unwrap());
        let s = solve_signs(&cat).unwrap();
        assert!(verify_axioms(&s, Convention::True).unwrap().passed());
        let t = twist(&s);
        assert!(verify_axioms(&t, Convention::False).unwrap().passed());
        let bad = verify_axioms(&t, Convention::True).unwrap();
        assert_eq!(bad.count(|k| *k == ConstraintKind::Square), 0);
        assert_eq!(bad.violations.len(), 6 * 6 / 2);
    }
}
