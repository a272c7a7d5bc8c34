//! Grid diagrams: one X and one O marking in every row and column of an
//! `n x n` toroidal grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::MAX_GRID_SIZE;

/// On-disk form of a grid: columns are 1-indexed, bottom row first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub n: i64,
    #[serde(rename = "O")]
    pub o: Vec<i64>,
    #[serde(rename = "X")]
    pub x: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridDiagram {
    n: usize,
    o_cols: Vec<usize>,
    x_cols: Vec<usize>,
    iota: Vec<usize>,
    m: usize,
}

impl GridDiagram {
    /// Builds a grid from 1-indexed marking columns, one per row.
    pub fn new(o: &[usize], x: &[usize]) -> Result<Self> {
        let file = GridFile {
            n: o.len() as i64,
            o: o.iter().map(|&c| c as i64).collect(),
            x: x.iter().map(|&c| c as i64).collect(),
        };
        Self::from_file(&file)
    }

    pub fn from_file(file: &GridFile) -> Result<Self> {
        if file.n < 1 || file.n as usize > MAX_GRID_SIZE {
            return Err(Error::MalformedInput(format!(
                "grid size must be in 1..={MAX_GRID_SIZE}, got {}",
                file.n
            )));
        }
        let n = file.n as usize;
        let o_cols = marking_columns("O", &file.o, n)?;
        let x_cols = marking_columns("X", &file.x, n)?;
        check_permutation("O", &o_cols)?;
        check_permutation("X", &x_cols)?;
        if let Some(row) = (0..n).find(|&r| o_cols[r] == x_cols[r]) {
            return Err(Error::MarkingCollision {
                row: row + 1,
                col: o_cols[row] + 1,
            });
        }
        let (m, iota) = trace_components(&o_cols, &x_cols);
        Ok(GridDiagram {
            n,
            o_cols,
            x_cols,
            iota,
            m,
        })
    }

    pub fn to_file(&self) -> GridFile {
        GridFile {
            n: self.n as i64,
            o: self.o_cols.iter().map(|&c| c as i64 + 1).collect(),
            x: self.x_cols.iter().map(|&c| c as i64 + 1).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of link components.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// 0-indexed column of the O marking on `row`.
    #[inline]
    pub fn o_col(&self, row: usize) -> usize {
        self.o_cols[row]
    }

    #[inline]
    pub fn x_col(&self, row: usize) -> usize {
        self.x_cols[row]
    }

    pub fn o_cols(&self) -> &[usize] {
        &self.o_cols
    }

    pub fn x_cols(&self) -> &[usize] {
        &self.x_cols
    }

    /// Component (0-indexed) of the X marking on `row`.
    #[inline]
    pub fn component_of_x(&self, row: usize) -> usize {
        self.iota[row]
    }

    /// Component of the O marking on `row`; it shares a row with an X of the
    /// same component.
    #[inline]
    pub fn component_of_o(&self, row: usize) -> usize {
        self.iota[row]
    }

    pub fn iota(&self) -> &[usize] {
        &self.iota
    }
}

/// Parses and validates grid-file JSON.
pub fn parse_grid(text: &str) -> Result<GridDiagram> {
    let file: GridFile =
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
    GridDiagram::from_file(&file)
}

/// Component count and component map, components numbered by smallest X-index.
pub fn link_components(d: &GridDiagram) -> (usize, Vec<usize>) {
    (d.m, d.iota.clone())
}

fn marking_columns(name: &'static str, cols: &[i64], n: usize) -> Result<Vec<usize>> {
    if cols.len() != n {
        return Err(Error::MalformedInput(format!(
            "{name} has {} entries, expected {n}",
            cols.len()
        )));
    }
    cols.iter()
        .map(|&c| {
            if (1..=n as i64).contains(&c) {
                Ok((c - 1) as usize)
            } else {
                Err(Error::MalformedInput(format!(
                    "{name} column {c} out of range 1..={n}"
                )))
            }
        })
        .collect()
}

fn check_permutation(name: &'static str, cols: &[usize]) -> Result<()> {
    let mut seen = vec![false; cols.len()];
    for &c in cols {
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::NotPermutation {
                markings: name,
                detail: format!("column {} holds more than one {name}", c + 1),
            });
        }
    }
    Ok(())
}

// X on row r -> O on row r -> X in that O's column.
fn trace_components(o_cols: &[usize], x_cols: &[usize]) -> (usize, Vec<usize>) {
    let n = o_cols.len();
    let mut x_row_of_col = vec![0; n];
    for (r, &c) in x_cols.iter().enumerate() {
        x_row_of_col[c] = r;
    }
    let mut iota = vec![usize::MAX; n];
    let mut m = 0;
    for start in 0..n {
        if iota[start] != usize::MAX {
            continue;
        }
        let mut r = start;
        while iota[r] == usize::MAX {
            iota[r] = m;
            r = x_row_of_col[o_cols[r]];
        }
        m += 1;
    }
    (m, iota)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: i64, o: &[i64], x: &[i64]) -> Result<GridDiagram> {
        GridDiagram::from_file(&GridFile {
            n,
            o: o.to_vec(),
            x: x.to_vec(),
        })
    }

    #[test]
    fn unknot_two() {
        let d = grid(2, &[1, 2], &[2, 1]).unwrap();
        assert_eq!(link_components(&d), (1, vec![0, 0]));
    }

    #[test]
    fn collisions_and_permutations() {
        assert_eq!(
            grid(2, &[1, 2], &[1, 2]).unwrap_err(),
            Error::MarkingCollision { row: 1, col: 1 }
        );
        assert!(matches!(
            grid(3, &[1, 2, 2], &[2, 3, 1]).unwrap_err(),
            Error::NotPermutation { markings: "O", .. }
        ));
        assert!(matches!(
            grid(3, &[1, 2], &[2, 3, 1]).unwrap_err(),
            Error::MalformedInput(_)
        ));
        assert!(matches!(
            grid(2, &[0, 2], &[2, 1]).unwrap_err(),
            Error::MalformedInput(_)
        ));
        assert!(matches!(grid(0, &[], &[]).unwrap_err(), Error::MalformedInput(_)));
    }

    #[test]
    fn split_pair_and_trefoil() {
        let d = grid(4, &[1, 2, 3, 4], &[2, 1, 4, 3]).unwrap();
        assert_eq!(link_components(&d), (2, vec![0, 0, 1, 1]));
        let t = grid(5, &[4, 5, 1, 2, 3], &[2, 3, 4, 5, 1]).unwrap();
        assert_eq!(t.m(), 1);
        let hopf = grid(4, &[1, 2, 3, 4], &[3, 4, 1, 2]).unwrap();
        assert_eq!(link_components(&hopf), (2, vec![0, 1, 0, 1]));
    }

    #[test]
    fn json_parsing() {
        let d = parse_grid(r#"{"n": 2, "O": [1, 2], "X": [2, 1]}"#).unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.to_file().x, vec![2, 1]);
        assert!(matches!(
            parse_grid(r#"{"n": 2, "O": [1, 2], "X": [2, 1], "extra": 1}"#),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(parse_grid("not json"), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn iota_is_constant_on_trace_cycles() {
        let d = grid(6, &[1, 3, 2, 5, 6, 4], &[4, 5, 6, 1, 2, 3]).unwrap();
        for r in 0..6 {
            let o_col = d.o_col(r);
            let x_row = (0..6).find(|&q| d.x_col(q) == o_col).unwrap();
            assert_eq!(d.component_of_x(r), d.component_of_x(x_row));
        }
        // components are numbered by their smallest X-index
        let mut firsts = vec![usize::MAX; d.m()];
        for r in 0..6 {
            firsts[d.component_of_x(r)] = firsts[d.component_of_x(r)].min(r);
        }
        assert!(firsts.windows(2).all(|w| w[0] < w[1]));
    }
}
