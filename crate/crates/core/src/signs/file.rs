use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Convention, Sign, SignAssignment};
use crate::catalog::RectCatalog;
use crate::error::{Error, Result};
use crate::state::GridState;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectEntry {
    /// One-line notation, 1-indexed.
    pub state: Vec<i64>,
    /// `[col, row]`, 0-indexed.
    pub sw: [i64; 2],
    pub w: i64,
    pub h: i64,
    pub sign: i64,
}

/// On-disk sign assignment, rectangles sorted by canonical key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignFile {
    pub n: i64,
    pub convention: Convention,
    pub rects: Vec<RectEntry>,
}

impl SignFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))
    }

    pub fn from_assignment(s: &SignAssignment) -> Self {
        let rects = s
            .iter()
            .map(|(r, v)| RectEntry {
                state: r.start.one_line().iter().map(|&c| c as i64).collect(),
                sw: [r.sw.0 as i64, r.sw.1 as i64],
                w: r.w as i64,
                h: r.h as i64,
                sign: v.to_i64(),
            })
            .collect();
        SignFile {
            n: s.n() as i64,
            convention: s.convention(),
            rects,
        }
    }

    /// Resolves every entry against the catalog, rejecting unknown, duplicate
    /// and missing rectangles.
    pub fn to_assignment(&self, catalog: &Arc<RectCatalog>) -> Result<SignAssignment> {
        if self.n != catalog.n() as i64 {
            return Err(Error::SizeMismatch {
                expected: catalog.n(),
                found: self.n.max(0) as usize,
            });
        }
        let mut values: Vec<Option<Sign>> = vec![None; catalog.len()];
        for e in &self.rects {
            let describe = || format!("{:?}@({},{})+{}x{}", e.state, e.sw[0], e.sw[1], e.w, e.h);
            if e.state.len() != catalog.n() {
                return Err(Error::MalformedInput(format!(
                    "state {:?} has the wrong length",
                    e.state
                )));
            }
            let start = GridState::from_one_line(&e.state)?;
            let coord = |v: i64| usize::try_from(v).ok();
            let key = (coord(e.sw[0]), coord(e.sw[1]), coord(e.w), coord(e.h));
            let (Some(c), Some(r), Some(w), Some(h)) = key else {
                return Err(Error::UnknownRectangle(describe()));
            };
            let k = catalog
                .find(&start, (c, r), w, h)
                .ok_or_else(|| Error::UnknownRectangle(describe()))?;
            let sign = Sign::from_i64(e.sign).ok_or_else(|| {
                Error::MalformedInput(format!("sign must be 1 or -1, got {}", e.sign))
            })?;
            if values[k].replace(sign).is_some() {
                return Err(Error::DuplicateRectangle(describe()));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(k, v)| v.ok_or_else(|| Error::MissingRectangle(catalog.rects()[k].to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(SignAssignment::new(Arc::clone(catalog), values, self.convention))
    }
}
