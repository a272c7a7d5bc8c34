use std::sync::Arc;

use num_bigint::BigUint;

use super::{build_constraints, Convention, Sign, SignAssignment};
use crate::catalog::RectCatalog;
use crate::error::{Error, Result};
use crate::gf2::{BitRow, Echelon};

/// Largest grid size for which every solution is listed explicitly.
pub const MAX_ENUMERATE_N: usize = 3;

fn reduce(catalog: &RectCatalog) -> Result<Echelon> {
    let system = build_constraints(catalog)?;
    let mut ech = Echelon::new(system.nvars);
    for c in &system.rows {
        ech.insert(c.to_row(system.nvars), c.parity);
    }
    if !ech.is_consistent() {
        return Err(Error::Inconsistent);
    }
    Ok(ech)
}

fn from_bits(catalog: &Arc<RectCatalog>, bits: &BitRow) -> SignAssignment {
    let values = (0..catalog.len()).map(|i| Sign::from_bit(bits.get(i))).collect();
    SignAssignment::new(Arc::clone(catalog), values, Convention::True)
}

/// The canonical true sign assignment: pivots are the lowest-indexed
/// variables of each reduced row and every free variable is `+1`.
pub fn solve_signs(catalog: &Arc<RectCatalog>) -> Result<SignAssignment> {
    let ech = reduce(catalog)?;
    let bits = ech.particular_solution().ok_or(Error::Inconsistent)?;
    Ok(from_bits(catalog, &bits))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolutionCount {
    pub variables: usize,
    pub rank: usize,
}

impl SolutionCount {
    pub fn kernel_dim(&self) -> usize {
        self.variables - self.rank
    }

    pub fn solutions(&self) -> BigUint {
        BigUint::from(1u32) << self.kernel_dim()
    }
}

pub fn count_solutions(catalog: &RectCatalog) -> Result<SolutionCount> {
    let ech = reduce(catalog)?;
    Ok(SolutionCount {
        variables: ech.ncols(),
        rank: ech.rank(),
    })
}

/// Every true sign assignment, ordered by the binary counter over the free
/// variables. Only available for `n <= MAX_ENUMERATE_N`.
pub fn enumerate_solutions(catalog: &Arc<RectCatalog>) -> Result<Vec<SignAssignment>> {
    if catalog.n() > MAX_ENUMERATE_N {
        return Err(Error::BoundExceeded {
            n: catalog.n(),
            bound: MAX_ENUMERATE_N,
        });
    }
    let ech = reduce(catalog)?;
    let base = ech.particular_solution().ok_or(Error::Inconsistent)?;
    let kernel = ech.kernel_basis();
    let mut out = Vec::with_capacity(1 << kernel.len());
    for mask in 0u64..(1u64 << kernel.len()) {
        let mut bits = base.clone();
        for (i, k) in kernel.iter().enumerate() {
            if mask >> i & 1 == 1 {
                bits.xor_assign(k);
            }
        }
        out.push(from_bits(catalog, &bits));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::verify_axioms;
    use crate::state::{GridState, Limits};

    fn catalog(n: usize) -> Arc<RectCatalog> {
        Arc::new(RectCatalog::new(n, &Limits::default()).unwrap())
    }

    #[test]
    fn unknot_canonical_values() {
        let cat = catalog(2);
        let s = solve_signs(&cat).unwrap();
        let id = GridState::identity(2);
        let swap = GridState::from_one_line(&[2, 1]).unwrap();
        let at = |x: &GridState, sw| s.sign_at(cat.find(x, sw, 1, 1).unwrap());
        assert_eq!(at(&id, (0, 0)), Sign::Plus);
        assert_eq!(at(&id, (1, 1)), Sign::Minus);
        assert_eq!(at(&swap, (0, 1)), Sign::Minus);
        assert_eq!(at(&swap, (1, 0)), Sign::Plus);
    }

    #[test]
    fn trivial_grid() {
        let cat = catalog(1);
        let s = solve_signs(&cat).unwrap();
        assert!(s.values().is_empty());
        assert_eq!(count_solutions(&cat).unwrap().solutions(), BigUint::from(1u32));
    }

    #[test]
    fn counts() {
        let c2 = count_solutions(&catalog(2)).unwrap();
        assert_eq!((c2.variables, c2.rank), (4, 3));
        assert_eq!(c2.solutions(), BigUint::from(2u32));
        let c3 = count_solutions(&catalog(3)).unwrap();
        assert_eq!(c3.kernel_dim(), 5);
        assert_eq!(c3.solutions(), BigUint::from(32u32));
    }

    #[test]
    fn enumeration() {
        let cat = catalog(3);
        let all = enumerate_solutions(&cat).unwrap();
        assert_eq!(all.len(), 32);
        for (i, s) in all.iter().enumerate() {
            assert!(verify_axioms(s, Convention::True).unwrap().passed());
            assert!(all[..i].iter().all(|t| t != s));
        }
        assert_eq!(all[0], solve_signs(&cat).unwrap());
        assert_eq!(
            enumerate_solutions(&catalog(4)).unwrap_err(),
            Error::BoundExceeded { n: 4, bound: 3 }
        );
    }

    #[test]
    fn deterministic() {
        let a = solve_signs(&catalog(4)).unwrap();
        let b = solve_signs(&catalog(4)).unwrap();
        assert_eq!(a, b);
    }
}
