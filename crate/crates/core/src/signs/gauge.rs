use std::collections::VecDeque;
use std::sync::Arc;

use super::{solve_signs, Convention, Sign, SignAssignment};
use crate::catalog::RectCatalog;
use crate::error::{Error, Result};
use crate::state::GridState;

/// A function `S_n -> {+1, -1}`, indexed by lexicographic state rank. `f` and
/// `-f` act identically on sign assignments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaugeFunction {
    n: usize,
    values: Vec<Sign>,
}

impl GaugeFunction {
    pub fn new(n: usize, values: Vec<Sign>) -> Self {
        assert_eq!(values.len(), (1..=n).product::<usize>());
        GaugeFunction { n, values }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, vec![Sign::Plus; (1..=n).product()])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Sign] {
        &self.values
    }

    pub fn at(&self, x: &GridState) -> Sign {
        self.values[x.lex_rank()]
    }

    /// The representative of `{f, -f}` with value `+1` at the identity.
    pub fn normalized(mut self) -> Self {
        if self.values[0] == Sign::Minus {
            for v in &mut self.values {
                *v = -*v;
            }
        }
        self
    }
}

/// `S'(r) = f(sigma) f(tau) S(r)` for `r` from `x_sigma` to `x_tau`.
pub fn gauge_apply(s: &SignAssignment, f: &GaugeFunction) -> Result<SignAssignment> {
    if f.n != s.n() {
        return Err(Error::SizeMismatch {
            expected: s.n(),
            found: f.n,
        });
    }
    let values = s
        .iter()
        .map(|(r, v)| f.at(&r.start) * f.at(&r.end) * v)
        .collect();
    Ok(SignAssignment::new(
        Arc::clone(s.catalog()),
        values,
        s.convention(),
    ))
}

/// Finds `f` with `gauge_apply(s1, f) == s2`, normalized to `f(id) = +1`.
///
/// Ratios are propagated breadth-first from the identity along rectangles
/// (in catalog order) and every rectangle is then checked against them.
pub fn gauge_difference(s1: &SignAssignment, s2: &SignAssignment) -> Result<GaugeFunction> {
    if s1.n() != s2.n() {
        return Err(Error::SizeMismatch {
            expected: s1.n(),
            found: s2.n(),
        });
    }
    let catalog = s1.catalog();
    let total = catalog.states().len();
    let ratio = |i: usize| s1.sign_at(i) * s2.sign_at(i);

    let mut f: Vec<Option<Sign>> = vec![None; total];
    f[0] = Some(Sign::Plus);
    let mut queue = VecDeque::from([0usize]);
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        let fi = f[i].expect("queued states are assigned");
        for k in catalog.range_from(i) {
            let j = catalog
                .state_index(&catalog.rects()[k].end)
                .expect("end state in catalog");
            if f[j].is_none() {
                f[j] = Some(fi * ratio(k));
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    if reached != total {
        return Err(Error::DisconnectedStates { reached, total });
    }
    let f = GaugeFunction::new(catalog.n(), f.into_iter().map(Option::unwrap).collect());
    for (k, r) in catalog.rects().iter().enumerate() {
        if f.at(&r.start) * f.at(&r.end) != ratio(k) {
            return Err(Error::NotGaugeEquivalent(r.to_string()));
        }
    }
    Ok(f)
}

/// Multiplies the sign of every rectangle leaving `x_sigma` by `sgn(sigma)`,
/// exchanging true and false assignments.
pub fn twist(s: &SignAssignment) -> SignAssignment {
    let values = s.iter().map(|(r, v)| r.start.sign() * v).collect();
    SignAssignment::new(
        Arc::clone(s.catalog()),
        values,
        s.convention().flipped(),
    )
}

/// Orientation choices over the reference classes, relative to the canonical
/// true sign assignment; `eps(id)` is always `+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientationSystem {
    eps: GaugeFunction,
}

impl OrientationSystem {
    pub fn new(eps: GaugeFunction) -> Result<Self> {
        if eps.values[0] != Sign::Plus {
            return Err(Error::MalformedInput(
                "orientation system must be +1 at the identity state".into(),
            ));
        }
        Ok(OrientationSystem { eps })
    }

    pub fn trivial(n: usize) -> Self {
        OrientationSystem {
            eps: GaugeFunction::identity(n),
        }
    }

    pub fn eps(&self) -> &GaugeFunction {
        &self.eps
    }

    /// All `2^(n! - 1)` orientation systems, identity value fixed.
    pub fn all(n: usize) -> Vec<Self> {
        let total: usize = (1..=n).product();
        assert!(total <= 24, "too many orientation systems to list");
        (0u32..1 << (total - 1))
            .map(|mask| {
                let values = (0..total)
                    .map(|i| Sign::from_bit(i > 0 && mask >> (i - 1) & 1 == 1))
                    .collect();
                OrientationSystem {
                    eps: GaugeFunction::new(n, values),
                }
            })
            .collect()
    }
}

/// The bijection between orientation systems and true sign assignments.
#[derive(Clone, Debug)]
pub struct OrientationCorrespondence {
    canonical: SignAssignment,
}

impl OrientationCorrespondence {
    pub fn new(catalog: &Arc<RectCatalog>) -> Result<Self> {
        Ok(OrientationCorrespondence {
            canonical: solve_signs(catalog)?,
        })
    }

    pub fn canonical(&self) -> &SignAssignment {
        &self.canonical
    }

    pub fn to_signs(&self, o: &OrientationSystem) -> Result<SignAssignment> {
        gauge_apply(&self.canonical, &o.eps)
    }

    pub fn to_orientation(&self, s: &SignAssignment) -> Result<OrientationSystem> {
        if s.convention() != Convention::True {
            return Err(Error::ConventionMismatch {
                expected: Convention::True,
                found: s.convention(),
            });
        }
        let eps = gauge_difference(&self.canonical, s)?;
        Ok(OrientationSystem { eps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::{enumerate_solutions, verify_axioms};
    use crate::state::Limits;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn catalog(n: usize) -> Arc<RectCatalog> {
        Arc::new(RectCatalog::new(n, &Limits::default()).unwrap())
    }

    #[test]
    fn identity_gauge_is_noop() {
        let s = solve_signs(&catalog(3)).unwrap();
        assert_eq!(gauge_apply(&s, &GaugeFunction::identity(3)).unwrap(), s);
        assert!(matches!(
            gauge_apply(&s, &GaugeFunction::identity(2)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn unknot_gauge_flips_everything() {
        let s = solve_signs(&catalog(2)).unwrap();
        let f = GaugeFunction::new(2, vec![Sign::Minus, Sign::Plus]);
        let g = gauge_apply(&s, &f).unwrap();
        for (a, b) in s.values().iter().zip(g.values()) {
            assert_eq!(*a, -*b);
        }
        assert_eq!(gauge_difference(&s, &g).unwrap(), f.normalized());
    }

    #[test]
    fn twist_basics() {
        let s = solve_signs(&catalog(3)).unwrap();
        let t = twist(&s);
        assert_eq!(t.convention(), Convention::False);
        assert_eq!(twist(&t), s);
        for ((r, a), b) in s.iter().zip(t.values()) {
            if r.start.is_identity() {
                assert_eq!(a, *b);
            }
        }
        assert!(matches!(
            gauge_difference(&s, &t),
            Err(Error::NotGaugeEquivalent(_))
        ));
    }

    #[test]
    fn n3_solutions_are_one_orbit() {
        let cat = catalog(3);
        let corr = OrientationCorrespondence::new(&cat).unwrap();
        let all = enumerate_solutions(&cat).unwrap();
        assert_eq!(all.len(), 32);
        let images: HashSet<Vec<Sign>> = OrientationSystem::all(3)
            .iter()
            .map(|o| {
                let s = corr.to_signs(o).unwrap();
                assert_eq!(&corr.to_orientation(&s).unwrap(), o);
                s.values().to_vec()
            })
            .collect();
        assert_eq!(images.len(), 32);
        for s in &all {
            assert!(images.contains(s.values()));
        }
        assert_eq!(
            corr.to_signs(&OrientationSystem::trivial(3)).unwrap(),
            *corr.canonical()
        );
    }

    #[test]
    fn to_orientation_requires_true_convention() {
        let cat = catalog(2);
        let corr = OrientationCorrespondence::new(&cat).unwrap();
        let t = twist(corr.canonical());
        assert!(matches!(
            corr.to_orientation(&t),
            Err(Error::ConventionMismatch { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn gauge_preserves_both_families(bits in prop::collection::vec(any::<bool>(), 24)) {
            let cat = catalog(4);
            let s = solve_signs(&cat).unwrap();
            let f = GaugeFunction::new(4, bits.into_iter().map(Sign::from_bit).collect());
            let g = gauge_apply(&s, &f).unwrap();
            prop_assert!(verify_axioms(&g, Convention::True).unwrap().passed());
            let tg = gauge_apply(&twist(&s), &f).unwrap();
            prop_assert!(verify_axioms(&tg, Convention::False).unwrap().passed());
            prop_assert_eq!(gauge_difference(&s, &g).unwrap(), f.normalized());
        }
    }
}
