//! Maslov and (doubled) Alexander gradings of grid states.
//!
//! Points are compared in the planar fundamental domain using doubled
//! coordinates: state points at even coordinates, markings at odd ones.

use serde::{Deserialize, Serialize};

use crate::grid::GridDiagram;
use crate::state::GridState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grading {
    #[serde(rename = "M")]
    pub maslov: i64,
    /// Twice the Alexander grading.
    #[serde(rename = "A2")]
    pub alexander2: i64,
}

type Point = (i64, i64);

/// Number of pairs `(p, q)` with `p` strictly southwest of `q`.
fn sw_pairs(p: &[Point], q: &[Point]) -> i64 {
    p.iter()
        .map(|a| q.iter().filter(|b| a.0 < b.0 && a.1 < b.1).count() as i64)
        .sum()
}

/// `2 J(P, Q)`, kept doubled so it stays integral.
pub(crate) fn twice_j(p: &[Point], q: &[Point]) -> i64 {
    sw_pairs(p, q) + sw_pairs(q, p)
}

fn state_points(x: &GridState) -> Vec<Point> {
    x.points().map(|(c, r)| (2 * c as i64, 2 * r as i64)).collect()
}

fn marking_points(cols: &[usize]) -> Vec<Point> {
    cols.iter()
        .enumerate()
        .map(|(r, &c)| (2 * c as i64 + 1, 2 * r as i64 + 1))
        .collect()
}

fn maslov_against(x: &[Point], marks: &[Point]) -> i64 {
    let twice = twice_j(x, x) - 2 * twice_j(x, marks) + twice_j(marks, marks);
    debug_assert!(twice % 2 == 0);
    twice / 2 + 1
}

pub fn maslov(x: &GridState, d: &GridDiagram) -> i64 {
    maslov_against(&state_points(x), &marking_points(d.o_cols()))
}

pub fn alexander2(x: &GridState, d: &GridDiagram) -> i64 {
    let pts = state_points(x);
    let m_o = maslov_against(&pts, &marking_points(d.o_cols()));
    let m_x = maslov_against(&pts, &marking_points(d.x_cols()));
    m_o - m_x - (d.n() as i64 - d.m() as i64)
}

pub fn grading(x: &GridState, d: &GridDiagram) -> Grading {
    let pts = state_points(x);
    let m_o = maslov_against(&pts, &marking_points(d.o_cols()));
    let m_x = maslov_against(&pts, &marking_points(d.x_cols()));
    Grading {
        maslov: m_o,
        alexander2: m_o - m_x - (d.n() as i64 - d.m() as i64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rect::{empty_rectangles, marking_counts};
    use crate::state::{grid_states, Limits};
    use proptest::prelude::*;

    #[test]
    fn unknot_two() {
        let d = GridDiagram::new(&[1, 2], &[2, 1]).unwrap();
        let id = GridState::identity(2);
        let swap = GridState::from_one_line(&[2, 1]).unwrap();
        assert_eq!(maslov(&id, &d), -1);
        assert_eq!(maslov(&swap, &d), 0);
        assert_eq!(alexander2(&id, &d), -2);
        assert_eq!(alexander2(&swap, &d), 0);
        assert_eq!(grading(&swap, &d), Grading { maslov: 0, alexander2: 0 });
    }

    #[test]
    fn relative_rules_on_trefoil() {
        let d = GridDiagram::new(&[4, 5, 1, 2, 3], &[2, 3, 4, 5, 1]).unwrap();
        for x in grid_states(5, &Limits::default()).unwrap() {
            let gx = grading(&x, &d);
            for r in empty_rectangles(&x) {
                let gy = grading(&r.end, &d);
                let (o, xs) = marking_counts(&r, &d);
                let (no, nx) = (o.iter().sum::<u32>() as i64, xs.iter().sum::<u32>() as i64);
                assert_eq!(gx.maslov - gy.maslov, 1 - 2 * no);
                assert_eq!(gx.alexander2 - gy.alexander2, 2 * nx - 2 * no);
            }
        }
    }

    proptest! {
        #[test]
        fn j_is_symmetric(
            p in prop::collection::vec((0i64..20, 0i64..20), 0..8),
            q in prop::collection::vec((0i64..20, 0i64..20), 0..8),
        ) {
            prop_assert_eq!(twice_j(&p, &q), twice_j(&q, &p));
        }
    }
}
