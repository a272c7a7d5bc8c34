//! Signed grid chain complexes over `Z[u_1..u_n, v_1..v_m]`.
//!
//! The full differential sends `x` to the sum over empty rectangles `r` from
//! `x` to `y` of `S(r) * prod u_i^{#(r & O_i)} * prod v_{iota(j)}^{#(r & X_j)} * y`.
//! The tilde version keeps only rectangles that avoid every marking.

use std::collections::BTreeMap;
use std::ops::AddAssign;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::{grading, Grading};
use crate::grid::GridDiagram;
use crate::rect::marking_counts;
use crate::signs::SignAssignment;
use crate::state::{GridState, Limits};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize, m: usize) -> Self {
        Monomial {
            u: vec![0; n],
            v: vec![0; m],
        }
    }

    pub fn is_one(&self) -> bool {
        self.u.iter().chain(&self.v).all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect(),
            v: self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect(),
        }
    }

    /// Maslov degree: each `u_i` has degree -2, each `v_j` degree 0.
    pub fn m_degree(&self) -> i64 {
        -2 * self.u.iter().map(|&e| e as i64).sum::<i64>()
    }

    /// Doubled Alexander degree: `u_i` has -2, `v_j` has +2.
    pub fn a2_degree(&self) -> i64 {
        self.m_degree() + 2 * self.v.iter().map(|&e| e as i64).sum::<i64>()
    }

    fn hits(&self, kill: &VarSet) -> bool {
        self.u.iter().zip(&kill.u).any(|(&e, &k)| k && e > 0)
            || self.v.iter().zip(&kill.v).any(|(&e, &k)| k && e > 0)
    }
}

/// A finite Z-linear combination of monomials, sorted, with no zero terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<(Monomial, i64)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn term(m: Monomial, coef: i64) -> Self {
        if coef == 0 {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, coef)],
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, i64)] {
        &self.terms
    }

    /// Coefficient of the constant monomial.
    pub fn constant(&self) -> i64 {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map_or(0, |&(_, c)| c)
    }

    fn from_map(map: BTreeMap<Monomial, i64>) -> Self {
        Poly {
            terms: map.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca.checked_mul(*cb).expect("coefficient overflow");
                let e = acc.entry(a.mul(b)).or_insert(0);
                *e = e.checked_add(c).expect("coefficient overflow");
            }
        }
        Poly::from_map(acc)
    }

    fn retain(&mut self, keep: impl Fn(&Monomial) -> bool) {
        self.terms.retain(|(m, _)| keep(m));
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        let mut acc: BTreeMap<Monomial, i64> = std::mem::take(&mut self.terms).into_iter().collect();
        for (m, c) in &rhs.terms {
            let e = acc.entry(m.clone()).or_insert(0);
            *e = e.checked_add(*c).expect("coefficient overflow");
        }
        *self = Poly::from_map(acc);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Version {
    Full,
    Tilde,
}

impl std::str::FromStr for Version {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "full" => Ok(Version::Full),
            "tilde" => Ok(Version::Tilde),
            other => Err(format!("unknown complex version {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub state: GridState,
    pub grading: Grading,
}

/// Sparse differential stored by columns: `columns[x]` lists `(y, coefficient)`
/// for `∂x`, sorted by target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedComplex {
    pub n: usize,
    pub m: usize,
    pub version: Version,
    pub generators: Vec<Generator>,
    pub columns: Vec<Vec<(usize, Poly)>>,
}

/// Variables to set to zero; indices follow `u_1..u_n` and `v_1..v_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSet {
    pub u: Vec<bool>,
    pub v: Vec<bool>,
}

impl VarSet {
    pub fn none(n: usize, m: usize) -> Self {
        VarSet {
            u: vec![false; n],
            v: vec![false; m],
        }
    }

    pub fn all(n: usize, m: usize) -> Self {
        VarSet {
            u: vec![true; n],
            v: vec![true; m],
        }
    }

    pub fn all_v(n: usize, m: usize) -> Self {
        VarSet {
            u: vec![false; n],
            v: vec![true; m],
        }
    }

    fn is_all(&self) -> bool {
        self.u.iter().chain(&self.v).all(|&k| k)
    }
}

pub fn build_complex(
    d: &GridDiagram,
    s: &SignAssignment,
    version: Version,
    limits: &Limits,
) -> Result<BigradedComplex> {
    let n = d.n();
    if s.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: s.n(),
        });
    }
    if version == Version::Full && n > limits.max_full_n {
        return Err(Error::BoundExceeded {
            n,
            bound: limits.max_full_n,
        });
    }
    let catalog = s.catalog();
    let generators: Vec<Generator> = catalog
        .states()
        .par_iter()
        .map(|x| Generator {
            state: *x,
            grading: grading(x, d),
        })
        .collect();
    let columns = (0..catalog.states().len())
        .into_par_iter()
        .map(|i| {
            let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
            for k in catalog.range_from(i) {
                let r = &catalog.rects()[k];
                let (o, x) = marking_counts(r, d);
                let mut mono = Monomial::one(n, d.m());
                mono.u.copy_from_slice(&o);
                for (row, &cnt) in x.iter().enumerate() {
                    mono.v[d.component_of_x(row)] += cnt;
                }
                if version == Version::Tilde && !mono.is_one() {
                    continue;
                }
                let target = catalog.state_index(&r.end).expect("end state in catalog");
                *acc.entry(target).or_default() += &Poly::term(mono, s.sign_at(k).to_i64());
            }
            acc.into_iter().filter(|(_, p)| !p.is_zero()).collect()
        })
        .collect();
    Ok(BigradedComplex {
        n,
        m: d.m(),
        version,
        generators,
        columns,
    })
}

/// Nonzero entries `(x, z, coefficient of z in ∂∂x)`, sorted.
pub fn d_squared(c: &BigradedComplex) -> Vec<(usize, usize, Poly)> {
    let per_source: Vec<Vec<(usize, usize, Poly)>> = (0..c.columns.len())
        .into_par_iter()
        .map(|x| {
            let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
            for (y, p) in &c.columns[x] {
                for (z, q) in &c.columns[*y] {
                    *acc.entry(*z).or_default() += &p.mul(q);
                }
            }
            acc.into_iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(z, p)| (x, z, p))
                .collect()
        })
        .collect();
    per_source.into_iter().flatten().collect()
}

/// Drops every term containing a killed variable. Killing all variables gives
/// the tilde complex.
pub fn specialize(c: &BigradedComplex, kill: &VarSet) -> BigradedComplex {
    let mut out = c.clone();
    for col in &mut out.columns {
        for (_, p) in col.iter_mut() {
            p.retain(|m| !m.hits(kill));
        }
        col.retain(|(_, p)| !p.is_zero());
    }
    if kill.is_all() {
        out.version = Version::Tilde;
    }
    out
}

impl BigradedComplex {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn nonzero_entries(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Entries whose terms do not drop Maslov grading by one or do not
    /// preserve the Alexander grading.
    pub fn inhomogeneous_entries(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for (x, col) in self.columns.iter().enumerate() {
            let gx = self.generators[x].grading;
            for (y, p) in col {
                let gy = self.generators[*y].grading;
                let ok = p.terms().iter().all(|(mono, _)| {
                    mono.m_degree() == gx.maslov - gy.maslov - 1
                        && mono.a2_degree() == gx.alexander2 - gy.alexander2
                });
                if !ok {
                    bad.push((x, *y));
                }
            }
        }
        bad
    }

    pub fn dump(&self) -> ComplexDump {
        ComplexDump {
            n: self.n,
            m: self.m,
            version: self.version,
            generators: self
                .generators
                .iter()
                .zip(&self.columns)
                .map(|(g, col)| GeneratorDump {
                    state: g.state.one_line(),
                    maslov: g.grading.maslov,
                    alexander2: g.grading.alexander2,
                    differential: col
                        .iter()
                        .map(|(y, p)| EntryDump {
                            target: self.generators[*y].state.one_line(),
                            terms: p
                                .terms()
                                .iter()
                                .map(|(mono, c)| TermDump {
                                    coef: *c,
                                    u_exps: mono.u.clone(),
                                    v_exps: mono.v.clone(),
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDump {
    pub coef: i64,
    pub u_exps: Vec<u32>,
    pub v_exps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDump {
    pub target: Vec<usize>,
    pub terms: Vec<TermDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDump {
    pub state: Vec<usize>,
    #[serde(rename = "M")]
    pub maslov: i64,
    #[serde(rename = "A2")]
    pub alexander2: i64,
    pub differential: Vec<EntryDump>,
}

/// Diagnostic JSON form of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDump {
    pub n: usize,
    pub m: usize,
    pub version: Version,
    pub generators: Vec<GeneratorDump>,
}
