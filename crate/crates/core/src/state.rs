//! Grid states as permutations.
//!
//! The state for `sigma` has one point on every horizontal circle: the point on
//! row `i` sits at planar coordinates `(sigma(i), i)` of the fundamental domain
//! `[0, n) x [0, n)`. Rows and columns are 0-indexed here; files use 1-indexed
//! one-line notation.

use std::fmt;

use crate::error::{Error, Result};
use crate::signs::Sign;

/// Hard ceiling on the grid size the packed state representation can hold.
pub const MAX_GRID_SIZE: usize = 16;

/// Size bounds guarding factorial enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` whose `n!` states may be enumerated.
    pub max_n: usize,
    /// Largest `n` for which the symbolic (full) complex is built.
    pub max_full_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_n: 8,
            max_full_n: 6,
        }
    }
}

impl Limits {
    pub fn with_max_n(max_n: usize) -> Self {
        Limits {
            max_n,
            ..Limits::default()
        }
    }

    pub fn check_states(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::MalformedInput("grid size must be positive".into()));
        }
        let bound = self.max_n.min(MAX_GRID_SIZE);
        if n > bound {
            return Err(Error::BoundExceeded { n, bound });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridState {
    len: u8,
    perm: [u8; MAX_GRID_SIZE],
}

impl GridState {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_GRID_SIZE, "grid size {n} too large");
        let mut perm = [0u8; MAX_GRID_SIZE];
        for (i, p) in perm.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        GridState { len: n as u8, perm }
    }

    /// Builds a state from 0-indexed columns, one per row.
    pub fn from_columns(cols: &[usize]) -> Result<Self> {
        let n = cols.len();
        if n > MAX_GRID_SIZE {
            return Err(Error::BoundExceeded {
                n,
                bound: MAX_GRID_SIZE,
            });
        }
        let mut seen = [false; MAX_GRID_SIZE];
        let mut perm = [0u8; MAX_GRID_SIZE];
        for (i, &c) in cols.iter().enumerate() {
            if c >= n || seen[c] {
                return Err(Error::MalformedInput(format!(
                    "{cols:?} is not a permutation of 0..{n}"
                )));
            }
            seen[c] = true;
            perm[i] = c as u8;
        }
        Ok(GridState { len: n as u8, perm })
    }

    /// Builds a state from 1-indexed one-line notation.
    pub fn from_one_line(one_line: &[i64]) -> Result<Self> {
        let n = one_line.len() as i64;
        let cols = one_line
            .iter()
            .map(|&v| {
                if (1..=n).contains(&v) {
                    Ok((v - 1) as usize)
                } else {
                    Err(Error::MalformedInput(format!(
                        "{one_line:?} is not a permutation of 1..{n}"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(&cols)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn as_slice(&self) -> &[u8] {
        &self.perm[..self.len as usize]
    }

    /// Column of the state point on row `row`.
    #[inline]
    pub fn col(&self, row: usize) -> usize {
        self.perm[row] as usize
    }

    pub fn row_of_col(&self, col: usize) -> usize {
        self.as_slice()
            .iter()
            .position(|&c| c as usize == col)
            .expect("column out of range")
    }

    /// State points as `(col, row)` pairs, ordered by row.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.as_slice()
            .iter()
            .enumerate()
            .map(|(row, &col)| (col as usize, row))
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.as_slice().iter().map(|&c| c as usize + 1).collect()
    }

    /// The state obtained by exchanging the points on rows `a` and `b`.
    pub fn swap_rows(&self, a: usize, b: usize) -> Self {
        let mut out = *self;
        out.perm.swap(a, b);
        out
    }

    pub fn is_identity(&self) -> bool {
        self.as_slice().iter().enumerate().all(|(i, &c)| c as usize == i)
    }

    pub fn sign(&self) -> Sign {
        let n = self.n();
        let mut seen = [false; MAX_GRID_SIZE];
        let mut even_cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.col(i);
                len += 1;
            }
            if len % 2 == 0 {
                even_cycles += 1;
            }
        }
        if even_cycles % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Position of this state in the lexicographic enumeration of `S_n`.
    pub fn lex_rank(&self) -> usize {
        let n = self.n();
        let p = self.as_slice();
        let mut rank = 0;
        for i in 0..n {
            let smaller = p[i + 1..].iter().filter(|&&c| c < p[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    /// Lexicographic successor, or `None` for the last permutation.
    pub fn next_lex(&self) -> Option<Self> {
        let n = self.n();
        let mut out = *self;
        let p = &mut out.perm[..n];
        let i = (1..n).rev().find(|&i| p[i - 1] < p[i])?;
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1])?;
        p.swap(i - 1, j);
        p[i..].reverse();
        Some(out)
    }
}

impl fmt::Debug for GridState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GridState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.one_line().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// All `n!` grid states in lexicographic order of their one-line notation.
pub fn grid_states(n: usize, limits: &Limits) -> Result<Vec<GridState>> {
    limits.check_states(n)?;
    let total: usize = (1..=n).product();
    let mut out = Vec::with_capacity(total);
    let mut cur = Some(GridState::identity(n));
    while let Some(s) = cur {
        out.push(s);
        cur = s.next_lex();
    }
    Ok(out)
}
