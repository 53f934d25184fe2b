//! Comparing two rankings of the same accounts: least-squares trendline of
//! one position against the other and the mean absolute position difference.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::Serialize;
use thiserror::Error;

use crate::decimal::serialize3;

#[derive(Debug, Error)]
pub enum RankError {
    #[error("at least two ranked pairs are needed, got {0}")]
    TooFewPairs(usize),
    #[error("position {0} appears twice in the first ranking")]
    DuplicatePosition(u64),
    #[error("positions start at 1, got 0")]
    ZeroPosition,
    #[error("account {0:?} is listed twice")]
    DuplicateAccount(String),
    #[error("ranking line {line}: {message}")]
    Format { line: u64, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankComparison {
    pub n: usize,
    #[serde(serialize_with = "serialize3")]
    pub slope: f64,
    #[serde(serialize_with = "serialize3")]
    pub intercept: f64,
    #[serde(serialize_with = "serialize3")]
    pub mean_abs_diff: f64,
    /// (position in A, position in B)
    #[serde(skip)]
    pub pairs: Vec<(u64, u64)>,
}

/// Ordinary least-squares fit of `y` on `x` plus the mean of `|x - y|`.
pub fn compare_rankings(pairs: &[(u64, u64)]) -> Result<RankComparison, RankError> {
    if pairs.len() < 2 {
        return Err(RankError::TooFewPairs(pairs.len()));
    }
    let mut seen = BTreeSet::new();
    for &(x, y) in pairs {
        if x == 0 || y == 0 {
            return Err(RankError::ZeroPosition);
        }
        if !seen.insert(x) {
            return Err(RankError::DuplicatePosition(x));
        }
    }
    let n = pairs.len() as f64;
    let mean_x = pairs.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let mean_y = pairs.iter().map(|p| p.1 as f64).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in pairs {
        let dx = x as f64 - mean_x;
        sxy += dx * (y as f64 - mean_y);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let mean_abs_diff = pairs.iter().map(|&(x, y)| x.abs_diff(y) as f64).sum::<f64>() / n;
    Ok(RankComparison {
        n: pairs.len(),
        slope,
        intercept: mean_y - slope * mean_x,
        mean_abs_diff,
        pairs: pairs.to_vec(),
    })
}

/// Reads a two-column `accountId,rank` CSV. A first row whose rank is not
/// a number is taken as a header.
pub fn read_ranking(reader: impl Read) -> Result<BTreeMap<String, u64>, RankError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut ranking = BTreeMap::new();
    for (index, row) in csv.records().enumerate() {
        let row = row?;
        let line = row.position().map_or(index as u64 + 1, |p| p.line());
        if row.len() == 1 && row[0].is_empty() {
            continue;
        }
        if row.len() != 2 {
            return Err(RankError::Format {
                line,
                message: format!("expected 2 columns, found {}", row.len()),
            });
        }
        let rank = match row[1].parse::<u64>() {
            Ok(rank) => rank,
            Err(_) if index == 0 => continue,
            Err(_) => {
                return Err(RankError::Format {
                    line,
                    message: format!("rank {:?} is not a positive integer", &row[1]),
                })
            }
        };
        if ranking.insert(row[0].to_string(), rank).is_some() {
            return Err(RankError::DuplicateAccount(row[0].to_string()));
        }
    }
    Ok(ranking)
}

/// Pairs of positions for accounts ranked by both systems, ordered by the
/// position in `a`, and the number of accounts present in only one.
pub fn join_rankings(a: &BTreeMap<String, u64>, b: &BTreeMap<String, u64>) -> (Vec<(u64, u64)>, usize) {
    let mut pairs: Vec<(u64, u64)> = a
        .iter()
        .filter_map(|(id, &x)| b.get(id).map(|&y| (x, y)))
        .collect();
    pairs.sort_unstable();
    let dropped = a.len() + b.len() - 2 * pairs.len();
    (pairs, dropped)
}
