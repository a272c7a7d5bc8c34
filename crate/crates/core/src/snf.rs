//! Smith normal form over the integers.
//!
//! Elimination runs on `i64` with checked arithmetic and is redone on
//! `BigInt` if any intermediate value overflows.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

trait Scalar:
    Clone + Debug + PartialOrd + Zero + One + Signed + CheckedMul + CheckedSub + CheckedAdd
{
}

impl Scalar for i64 {}
impl Scalar for BigInt {}

struct Overflow;

/// Invariant factors `d_1 | d_2 | ... | d_r` together with unimodular `u`, `v`
/// such that `u * a * v` is diagonal with those factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

struct Work<T> {
    a: Vec<Vec<T>>,
    u: Option<Vec<Vec<T>>>,
    v: Option<Vec<Vec<T>>>,
}

fn identity<T: Scalar>(k: usize) -> Vec<Vec<T>> {
    (0..k)
        .map(|i| (0..k).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

// dst -= q * src, elementwise
fn axpy<T: Scalar>(dst: &mut [T], src: &[T], q: &T) -> Result<(), Overflow> {
    for (d, s) in dst.iter_mut().zip(src) {
        if s.is_zero() {
            continue;
        }
        let p = q.checked_mul(s).ok_or(Overflow)?;
        *d = d.checked_sub(&p).ok_or(Overflow)?;
    }
    Ok(())
}

fn split_rows<T>(m: &mut [Vec<T>], i: usize, j: usize) -> (&mut Vec<T>, &mut Vec<T>) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = m.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    }
}

impl<T: Scalar> Work<T> {
    fn rows(&self) -> usize {
        self.a.len()
    }

    fn cols(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    // row_i -= q * row_t
    fn row_sub(&mut self, i: usize, t: usize, q: &T) -> Result<(), Overflow> {
        let (dst, src) = split_rows(&mut self.a, i, t);
        axpy(dst, src, q)?;
        if let Some(u) = &mut self.u {
            let (dst, src) = split_rows(u, i, t);
            axpy(dst, src, q)?;
        }
        Ok(())
    }

    // col_j -= q * col_t
    fn col_sub(&mut self, j: usize, t: usize, q: &T) -> Result<(), Overflow> {
        fn apply<T: Scalar>(m: &mut [Vec<T>], j: usize, t: usize, q: &T) -> Result<(), Overflow> {
            for row in m {
                if row[t].is_zero() {
                    continue;
                }
                let p = q.checked_mul(&row[t]).ok_or(Overflow)?;
                row[j] = row[j].checked_sub(&p).ok_or(Overflow)?;
            }
            Ok(())
        }
        apply(&mut self.a, j, t, q)?;
        if let Some(v) = &mut self.v {
            apply(v, j, t, q)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, t: usize) {
        for x in &mut self.a[t] {
            *x = -x.clone();
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[t] {
                *x = -x.clone();
            }
        }
    }

    /// Smallest nonzero |entry| in the lower-right block starting at `t`.
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows() {
            for j in t..self.cols() {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.is_one() || (-x.clone()).is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> Result<Vec<T>, Overflow> {
        let mut factors = Vec::new();
        let k = self.rows().min(self.cols());
        for t in 0..k {
            let Some((i, j)) = self.smallest_in_block(t) else {
                break;
            };
            self.swap_rows(t, i);
            self.swap_cols(t, j);
            loop {
                let mut dirty = false;
                for i in t + 1..self.rows() {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].clone() / self.a[t][t].clone();
                        self.row_sub(i, t, &q)?;
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.cols() {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].clone() / self.a[t][t].clone();
                        self.col_sub(j, t, &q)?;
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    // remainders are smaller than the pivot; bring the
                    // smallest one up and repeat
                    let mut best = (t, t);
                    for i in t + 1..self.rows() {
                        let x = &self.a[i][t];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..self.cols() {
                        let x = &self.a[t][j];
                        if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let p = self.a[t][t].clone();
                let offender = (t + 1..self.rows())
                    .find(|&i| (t + 1..self.cols()).any(|j| !(self.a[i][j].clone() % p.clone()).is_zero()));
                match offender {
                    Some(i) => {
                        // row_t += row_i, then keep eliminating
                        self.row_sub(t, i, &-T::one())?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            factors.push(self.a[t][t].clone());
        }
        Ok(factors)
    }
}

type Decomposition<T> = (Vec<T>, Option<Vec<Vec<T>>>, Option<Vec<Vec<T>>>);

fn run<T: Scalar>(a: Vec<Vec<T>>, transforms: bool) -> Result<Decomposition<T>, Overflow> {
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    let mut w = Work {
        a,
        u: transforms.then(|| identity(r)),
        v: transforms.then(|| identity(c)),
    };
    let factors = w.run()?;
    Ok((factors, w.u, w.v))
}

fn to_big(a: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn decompose(a: &IntMatrix, transforms: bool) -> Decomposition<BigInt> {
    match run(a.clone(), transforms) {
        Ok((f, u, v)) => (
            f.into_iter().map(BigInt::from).collect(),
            u.as_deref().map(to_big),
            v.as_deref().map(to_big),
        ),
        Err(Overflow) => match run(to_big(a), transforms) {
            Ok(d) => d,
            Err(Overflow) => unreachable!("BigInt arithmetic does not overflow"),
        },
    }
}

/// Nonzero invariant factors of `a`, ascending in divisibility order.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    decompose(a, false).0
}

/// Smith normal form with transforms.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (factors, u, v) = decompose(a, true);
    SmithForm {
        factors,
        u: u.expect("transforms requested"),
        v: v.expect("transforms requested"),
    }
}

impl SmithForm {
    /// Checks `u * a * v == diag(factors)` exactly.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
        let a = to_big(a);
        let mul = |x: &[Vec<BigInt>], y: &[Vec<BigInt>], inner: usize, cols: usize| -> Vec<Vec<BigInt>> {
            x.iter()
                .map(|row| {
                    (0..cols)
                        .map(|j| (0..inner).map(|k| &row[k] * &y[k][j]).sum())
                        .collect()
                })
                .collect()
        };
        let ua = mul(&self.u, &a, r, c);
        let uav = mul(&ua, &self.v, c, c);
        (0..r).all(|i| {
            (0..c).all(|j| {
                let expected = if i == j && i < self.factors.len() {
                    self.factors[i].clone()
                } else {
                    BigInt::zero()
                };
                uav[i][j] == expected
            })
        }) && self.factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}
