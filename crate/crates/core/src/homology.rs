//! Bigraded homology of the tilde complex.
//!
//! The differential preserves `2A` and lowers `M` by one, so homology is
//! assembled from independent blocks, one per Alexander grading.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::RectCatalog;
use crate::complex::{build_complex, BigradedComplex, Version};
use crate::error::{Error, Result};
use crate::gf2::{self, BitRow};
use crate::grid::GridDiagram;
use crate::signs::{solve_signs, twist, verify_axioms, Convention, SignAssignment};
use crate::snf::{invariant_factors, IntMatrix};
use crate::state::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Z,
    Z2,
}

impl std::str::FromStr for Coefficients {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "z" => Ok(Coefficients::Z),
            "z2" => Ok(Coefficients::Z2),
            other => Err(format!("unknown coefficients {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyEntry {
    #[serde(rename = "M")]
    pub maslov: i64,
    #[serde(rename = "A2")]
    pub alexander2: i64,
    pub free_rank: u64,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<u64>,
}

/// Nonzero homology groups sorted by `(2A, M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub coefficients: Coefficients,
    pub entries: Vec<HomologyEntry>,
}

impl HomologyTable {
    pub fn total_free_rank(&self) -> u64 {
        self.entries.iter().map(|e| e.free_rank).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.entries.iter().any(|e| !e.torsion.is_empty())
    }

    pub fn get(&self, maslov: i64, alexander2: i64) -> Option<&HomologyEntry> {
        self.entries
            .iter()
            .find(|e| e.maslov == maslov && e.alexander2 == alexander2)
    }

    fn free_at(&self, maslov: i64, alexander2: i64) -> u64 {
        self.get(maslov, alexander2).map_or(0, |e| e.free_rank)
    }

    fn even_torsion_at(&self, maslov: i64, alexander2: i64) -> u64 {
        self.get(maslov, alexander2)
            .map_or(0, |e| e.torsion.iter().filter(|&&t| t % 2 == 0).count() as u64)
    }
}

/// One rank/torsion computation for `∂_M : C_M -> C_{M-1}`.
struct MapData {
    rank: usize,
    torsion: Vec<u64>,
}

fn map_data(matrix: &IntMatrix, ncols: usize, coefficients: Coefficients) -> Result<MapData> {
    match coefficients {
        Coefficients::Z => {
            let factors = invariant_factors(matrix);
            let torsion = factors
                .iter()
                .filter(|f| !f.is_one())
                .map(|f: &BigInt| {
                    f.to_u64()
                        .ok_or_else(|| Error::Overflow(format!("torsion factor {f}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(MapData {
                rank: factors.len(),
                torsion,
            })
        }
        Coefficients::Z2 => {
            let rows = matrix.iter().map(|row| {
                BitRow::from_indices(
                    ncols,
                    row.iter().enumerate().filter(|(_, &v)| v % 2 != 0).map(|(j, _)| j),
                )
            });
            Ok(MapData {
                rank: gf2::rank(rows, ncols),
                torsion: Vec::new(),
            })
        }
    }
}

pub fn bigraded_homology(c: &BigradedComplex, coefficients: Coefficients) -> Result<HomologyTable> {
    if c.version != Version::Tilde {
        return Err(Error::NotTilde);
    }
    // (2A, M) -> generator indices; position of each generator in its group
    let mut groups: BTreeMap<i64, BTreeMap<i64, Vec<usize>>> = BTreeMap::new();
    let mut local = vec![0usize; c.len()];
    for (i, g) in c.generators.iter().enumerate() {
        let v = groups
            .entry(g.grading.alexander2)
            .or_default()
            .entry(g.grading.maslov)
            .or_default();
        local[i] = v.len();
        v.push(i);
    }
    for (x, col) in c.columns.iter().enumerate() {
        let gx = c.generators[x].grading;
        for (y, p) in col {
            let gy = c.generators[*y].grading;
            if gy.alexander2 != gx.alexander2 || gy.maslov != gx.maslov - 1 {
                return Err(Error::Internal(format!(
                    "differential entry {x} -> {y} is not homogeneous"
                )));
            }
            if p.terms().iter().any(|(m, _)| !m.is_one()) {
                return Err(Error::Internal("tilde entry has a non-constant term".into()));
            }
        }
    }

    let blocks: Vec<(i64, &BTreeMap<i64, Vec<usize>>)> = groups.iter().map(|(a, b)| (*a, b)).collect();
    let per_block: Vec<Result<Vec<HomologyEntry>>> = blocks
        .par_iter()
        .map(|&(a2, by_m)| {
            // ∂_M for every M present in the block
            let mut maps: BTreeMap<i64, MapData> = BTreeMap::new();
            for (&m, sources) in by_m {
                let targets = by_m.get(&(m - 1)).map_or(&[][..], Vec::as_slice);
                let mut matrix: IntMatrix = vec![vec![0; sources.len()]; targets.len()];
                for (j, &x) in sources.iter().enumerate() {
                    for (y, p) in &c.columns[x] {
                        matrix[local[*y]][j] = p.constant();
                    }
                }
                maps.insert(m, map_data(&matrix, sources.len(), coefficients)?);
            }
            let mut entries = Vec::new();
            for (&m, gens) in by_m {
                let out_rank = maps[&m].rank;
                let (in_rank, torsion) = maps
                    .get(&(m + 1))
                    .map_or((0, Vec::new()), |d| (d.rank, d.torsion.clone()));
                let free = gens.len() - out_rank - in_rank;
                if free > 0 || !torsion.is_empty() {
                    entries.push(HomologyEntry {
                        maslov: m,
                        alexander2: a2,
                        free_rank: free as u64,
                        torsion,
                    });
                }
            }
            Ok(entries)
        })
        .collect();
    let mut entries = Vec::new();
    for block in per_block {
        entries.extend(block?);
    }
    Ok(HomologyTable {
        coefficients,
        entries,
    })
}

/// Checks the universal coefficient theorem between a Z table and a Z/2 table:
/// `dim H_M(Z/2) = free_M + #even(M) + #even(M - 1)` in every bigrading.
pub fn universal_coefficients_hold(z: &HomologyTable, z2: &HomologyTable) -> bool {
    let mut gradings: Vec<(i64, i64)> = z
        .entries
        .iter()
        .flat_map(|e| [(e.maslov, e.alexander2), (e.maslov + 1, e.alexander2)])
        .chain(z2.entries.iter().map(|e| (e.maslov, e.alexander2)))
        .collect();
    gradings.sort_unstable();
    gradings.dedup();
    gradings.into_iter().all(|(m, a2)| {
        z2.free_at(m, a2) == z.free_at(m, a2) + z.even_torsion_at(m, a2) + z.even_torsion_at(m - 1, a2)
    })
}

/// A Laurent polynomial in `t^(1/2)`, stored by doubled exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EulerPolynomial {
    coeffs: BTreeMap<i64, i64>,
}

impl EulerPolynomial {
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e2, c) in terms {
            *coeffs.entry(e2).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        EulerPolynomial { coeffs }
    }

    /// Coefficients keyed by doubled exponent.
    pub fn coefficients(&self) -> &BTreeMap<i64, i64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, other: &EulerPolynomial) -> EulerPolynomial {
        EulerPolynomial::from_terms(
            self.coeffs
                .iter()
                .flat_map(|(e1, c1)| other.coeffs.iter().map(move |(e2, c2)| (e1 + e2, c1 * c2))),
        )
    }

    pub fn pow(&self, k: u32) -> EulerPolynomial {
        (0..k).fold(EulerPolynomial::from_terms([(0, 1)]), |acc, _| acc.mul(self))
    }

    /// True if `self = ±t^a * other` for some integer `a`.
    pub fn equals_up_to_unit(&self, other: &EulerPolynomial) -> bool {
        let (Some((&e1, &c1)), Some((&e2, &c2))) = (self.coeffs.iter().next(), other.coeffs.iter().next())
        else {
            return self.is_zero() && other.is_zero();
        };
        let shift = e1 - e2;
        if shift % 2 != 0 || self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let sign = if c1 == c2 { 1 } else if c1 == -c2 { -1 } else { return false };
        other
            .coeffs
            .iter()
            .all(|(e, c)| self.coeffs.get(&(e + shift)) == Some(&(sign * c)))
    }

    /// Exponent `e2 / 2` written as an integer or a half-integer fraction.
    pub fn exponent_key(e2: i64) -> String {
        if e2 % 2 == 0 {
            (e2 / 2).to_string()
        } else {
            format!("{e2}/2")
        }
    }

    pub fn to_key_map(&self) -> BTreeMap<String, i64> {
        self.coeffs
            .iter()
            .map(|(&e2, &c)| (Self::exponent_key(e2), c))
            .collect()
    }
}

impl fmt::Display for EulerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e2, &c)) in self.coeffs.iter().rev().enumerate() {
            let sep = match (i, c < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mag = c.abs();
            match (e2, mag) {
                (0, _) => write!(f, "{sep}{mag}")?,
                (_, 1) => write!(f, "{sep}t^{}", Self::exponent_key(e2))?,
                _ => write!(f, "{sep}{mag}*t^{}", Self::exponent_key(e2))?,
            }
        }
        Ok(())
    }
}

/// Graded Euler characteristic: the coefficient of `t^A` is
/// `sum_M (-1)^M rank H_{M, A}`.
pub fn euler_characteristic(t: &HomologyTable) -> EulerPolynomial {
    EulerPolynomial::from_terms(t.entries.iter().map(|e| {
        let sign = if e.maslov.rem_euclid(2) == 0 { 1 } else { -1 };
        (e.alexander2, sign * e.free_rank as i64)
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareReport {
    pub true_table: HomologyTable,
    pub false_table: HomologyTable,
    /// Bigradings `(M, 2A)` where the two Z tables differ.
    pub discrepancies: Vec<(i64, i64)>,
    pub z2_table: HomologyTable,
    pub universal_coefficients: bool,
}

impl CompareReport {
    pub fn agree(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Homology of the tilde complex under `s` and under its twist. `s` must be a
/// verified true sign assignment.
pub fn compare_signs(d: &GridDiagram, s: &SignAssignment, limits: &Limits) -> Result<CompareReport> {
    if s.convention() != Convention::True {
        return Err(Error::ConventionMismatch {
            expected: Convention::True,
            found: s.convention(),
        });
    }
    let report = verify_axioms(s, Convention::True)?;
    if !report.passed() {
        return Err(Error::AxiomsViolated {
            convention: Convention::True,
            violations: report.violations.len(),
        });
    }
    let t = twist(s);
    if !verify_axioms(&t, Convention::False)?.passed() {
        return Err(Error::Internal("twist of a true assignment is not false".into()));
    }
    let c_true = build_complex(d, s, Version::Tilde, limits)?;
    let c_false = build_complex(d, &t, Version::Tilde, limits)?;
    let true_table = bigraded_homology(&c_true, Coefficients::Z)?;
    let false_table = bigraded_homology(&c_false, Coefficients::Z)?;
    let z2_table = bigraded_homology(&c_true, Coefficients::Z2)?;

    let mut gradings: Vec<(i64, i64)> = true_table
        .entries
        .iter()
        .chain(&false_table.entries)
        .map(|e| (e.maslov, e.alexander2))
        .collect();
    gradings.sort_unstable();
    gradings.dedup();
    let discrepancies = gradings
        .into_iter()
        .filter(|&(m, a2)| true_table.get(m, a2) != false_table.get(m, a2))
        .collect();
    let universal_coefficients = universal_coefficients_hold(&true_table, &z2_table);
    Ok(CompareReport {
        true_table,
        false_table,
        discrepancies,
        z2_table,
        universal_coefficients,
    })
}

pub fn compare_true_false(d: &GridDiagram, limits: &Limits) -> Result<CompareReport> {
    let catalog = Arc::new(RectCatalog::new(d.n(), limits)?);
    let s = solve_signs(&catalog)?;
    compare_signs(d, &s, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signs::Sign;

    fn unknot() -> (GridDiagram, SignAssignment) {
        let d = GridDiagram::new(&[1, 2], &[2, 1]).unwrap();
        let cat = Arc::new(RectCatalog::new(2, &Limits::default()).unwrap());
        (d, solve_signs(&cat).unwrap())
    }

    #[test]
    fn unknot_table() {
        let (d, s) = unknot();
        let c = build_complex(&d, &s, Version::Tilde, &Limits::default()).unwrap();
        let t = bigraded_homology(&c, Coefficients::Z).unwrap();
        assert_eq!(
            t.entries,
            vec![
                HomologyEntry { maslov: -1, alexander2: -2, free_rank: 1, torsion: vec![] },
                HomologyEntry { maslov: 0, alexander2: 0, free_rank: 1, torsion: vec![] },
            ]
        );
        let chi = euler_characteristic(&t);
        assert_eq!(chi, EulerPolynomial::from_terms([(0, 1), (-2, -1)]));
        assert_eq!(chi.to_string(), "1 - t^-1");
    }

    #[test]
    fn full_complex_rejected() {
        let (d, s) = unknot();
        let c = build_complex(&d, &s, Version::Full, &Limits::default()).unwrap();
        assert_eq!(bigraded_homology(&c, Coefficients::Z), Err(Error::NotTilde));
    }

    #[test]
    fn euler_helpers() {
        assert!(euler_characteristic(&HomologyTable {
            coefficients: Coefficients::Z,
            entries: vec![]
        })
        .is_zero());
        let p = EulerPolynomial::from_terms([(2, 1), (0, -1), (-2, 1)]);
        let q = EulerPolynomial::from_terms([(6, -1), (4, 1), (2, -1)]);
        assert!(p.equals_up_to_unit(&q));
        let half = EulerPolynomial::from_terms([(3, -1), (1, 1), (-1, -1)]);
        assert!(!p.equals_up_to_unit(&half));
        assert_eq!(EulerPolynomial::exponent_key(-1), "-1/2");
        assert_eq!(EulerPolynomial::exponent_key(-4), "-2");
    }

    #[test]
    fn uct_accounts_for_torsion() {
        let entry = |m, free, torsion: Vec<u64>| HomologyEntry { maslov: m, alexander2: 0, free_rank: free, torsion };
        // Z/2 in degree 0 contributes to Z/2-homology in degrees 0 and 1
        let z = HomologyTable { coefficients: Coefficients::Z, entries: vec![entry(0, 1, vec![2])] };
        let z2 = HomologyTable {
            coefficients: Coefficients::Z2,
            entries: vec![entry(0, 2, vec![]), entry(1, 1, vec![])],
        };
        assert!(universal_coefficients_hold(&z, &z2));
        let wrong = HomologyTable { coefficients: Coefficients::Z2, entries: vec![entry(0, 3, vec![])] };
        assert!(!universal_coefficients_hold(&z, &wrong));
    }

    #[test]
    fn compare_gate() {
        let (d, s) = unknot();
        let lim = Limits::default();
        let r = compare_signs(&d, &s, &lim).unwrap();
        assert!(r.agree());
        assert!(r.universal_coefficients);
        let bad = SignAssignment::constant(Arc::clone(s.catalog()), Sign::Plus, Convention::True);
        assert!(matches!(
            compare_signs(&d, &bad, &lim),
            Err(Error::AxiomsViolated { .. })
        ));
        assert!(matches!(
            compare_signs(&d, &twist(&s), &lim),
            Err(Error::ConventionMismatch { .. })
        ));
    }
}
