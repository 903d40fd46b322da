//! Independent brute-force ground truth: exhaustive compatible-pair search
//! over a bounded number of rows, used to validate the closed-form decision,
//! compute the minimum middle mass empirically, and drive the cross-check
//! harness.
//!
//! The search indexes one side's candidates by their middle row-sum vector
//! and joins the other side against it, so only sum-matched pairs are tested
//! for positivity. Candidates are deduplicated by middle, which is lossless
//! here: compatibility and middle mass depend on middles only.

use crate::combinatorics::enumerate_multiplicity_matrices;
use crate::decision;
use crate::model::{IntMatrix, SizeTuple};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("no compatible pair exists at r_max = {0}: q = 3, mu undefined")]
    NoCompatiblePair(usize),
    #[error("cache i/o failed: {0}")]
    CacheIo(#[from] std::io::Error),
}

/// Distinct middles per middle-row-sum key, first-seen order.
fn middle_index(m: &SizeTuple, r: usize) -> HashMap<Vec<usize>, Vec<IntMatrix>> {
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let mut index: HashMap<Vec<usize>, Vec<IntMatrix>> = HashMap::new();
    for v in enumerate_multiplicity_matrices(m, r) {
        let middle = v.middle();
        if seen.insert(middle.clone()) {
            index.entry(middle.row_sums()).or_default().push(middle);
        }
    }
    index
}

fn middles_positive(a: &IntMatrix, b: &IntMatrix) -> bool {
    for i in 0..a.cols() {
        for j in 0..b.cols() {
            if !(0..a.rows()).any(|s| a.get(s, i) > 0 && b.get(s, j) > 0) {
                return false;
            }
        }
    }
    true
}

type MiddleIndex = HashMap<Vec<usize>, Vec<IntMatrix>>;

/// Smallest total middle mass of a compatible pair between two prebuilt
/// indexes (both at the same row count), if any pair exists there.
fn min_mass_between(left: &MiddleIndex, right: &MiddleIndex) -> Option<usize> {
    let mut keys: Vec<&Vec<usize>> = left.keys().filter(|k| right.contains_key(*k)).collect();
    // ascending mass, lexicographic tie-break for determinism
    keys.sort_by_key(|k| (k.iter().sum::<usize>(), (*k).clone()));
    for key in keys {
        let mass: usize = key.iter().sum();
        let vs = &left[key];
        let ws = &right[key];
        if vs.iter().any(|v| ws.iter().any(|w| middles_positive(v, w))) {
            return Some(mass);
        }
    }
    None
}

fn min_mass_at(m: &SizeTuple, n: &SizeTuple, r: usize) -> Option<usize> {
    min_mass_between(&middle_index(m, r), &middle_index(n, r))
}

/// `2` iff a compatible pair with at most `r_max` rows exists, else `3`.
/// Exact for unions of complete graphs at `r_max = 4`.
pub fn brute_force_q(m: &SizeTuple, n: &SizeTuple, r_max: usize) -> u8 {
    assert!(r_max >= 3);
    for r in 3..=r_max {
        if min_mass_at(m, n, r).is_some() {
            return 2;
        }
    }
    3
}

/// Minimum total middle mass over all compatible pairs with at most `r_max`
/// rows. Errors when no pair exists.
pub fn brute_force_mu(m: &SizeTuple, n: &SizeTuple, r_max: usize) -> Result<usize, OracleError> {
    assert!(r_max >= 3);
    (3..=r_max)
        .filter_map(|r| min_mass_at(m, n, r))
        .min()
        .ok_or(OracleError::NoCompatiblePair(r_max))
}

/// Append-only key-value cache of brute-force results, one JSON record per
/// line. Keys are canonical (sorted-descending) tuples plus `r_max`; the
/// first record per key wins, so concurrent appenders and reruns are safe.
type CacheKey = (Vec<usize>, Vec<usize>, usize);

pub struct QCache {
    path: PathBuf,
    entries: HashMap<CacheKey, (u8, Option<usize>)>,
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    m: Vec<usize>,
    n: Vec<usize>,
    r_max: usize,
    q: u8,
    mu: Option<usize>,
    timestamp: u64,
}

impl QCache {
    pub fn open(path: &Path) -> Result<Self, OracleError> {
        let mut entries = HashMap::new();
        if path.exists() {
            let file = std::fs::File::open(path)?;
            for line in std::io::BufReader::new(file).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                // tolerate torn writes from interrupted runs
                let Ok(record) = serde_json::from_str::<CacheRecord>(&line) else {
                    continue;
                };
                entries
                    .entry((record.m, record.n, record.r_max))
                    .or_insert((record.q, record.mu));
            }
        }
        Ok(Self {
            path: path.to_path_buf(),
            entries,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn key(m: &SizeTuple, n: &SizeTuple, r_max: usize) -> CacheKey {
        (
            m.sorted_desc().entries().to_vec(),
            n.sorted_desc().entries().to_vec(),
            r_max,
        )
    }

    pub fn get(&self, m: &SizeTuple, n: &SizeTuple, r_max: usize) -> Option<(u8, Option<usize>)> {
        self.entries.get(&Self::key(m, n, r_max)).copied()
    }

    pub fn put(
        &mut self,
        m: &SizeTuple,
        n: &SizeTuple,
        r_max: usize,
        q: u8,
        mu: Option<usize>,
    ) -> Result<(), OracleError> {
        let key = Self::key(m, n, r_max);
        if self.entries.contains_key(&key) {
            return Ok(());
        }
        let record = CacheRecord {
            m: key.0.clone(),
            n: key.1.clone(),
            r_max,
            q,
            mu,
            timestamp: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        // one line per record, written in a single call
        let mut line = serde_json::to_string(&record).expect("record serializes");
        line.push('\n');
        file.write_all(line.as_bytes())?;
        self.entries.insert(key, (q, mu));
        Ok(())
    }
}

/// One `(m, n)` cell of a cross-check run.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckCell {
    pub m: SizeTuple,
    pub n: SizeTuple,
    pub q_formula: u8,
    pub q_brute: u8,
    pub mu_formula: Option<usize>,
    pub mu_brute: Option<usize>,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub limit: usize,
    pub r_max: usize,
    pub checked: usize,
    pub disagreements: usize,
    pub cells: Vec<CrossCheckCell>,
}

impl CrossCheckReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &CrossCheckCell> {
        self.cells.iter().filter(|c| !c.agree)
    }
}

/// All canonical tuples (sorted descending) with total at most `limit`,
/// ordered by total, then descending-lexicographically.
pub fn canonical_tuples(limit: usize) -> Vec<SizeTuple> {
    fn partitions(total: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if total == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max_part.min(total)).rev() {
            prefix.push(part);
            partitions(total - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for total in 1..=limit {
        let mut parts = Vec::new();
        partitions(total, total, &mut Vec::new(), &mut parts);
        out.extend(parts.into_iter().map(|p| SizeTuple::new(p).expect("parts are positive")));
    }
    out
}

/// Compare the closed-form decision against brute force on every ordered
/// pair of canonical tuples with totals at most `limit`: `q` always, and the
/// minimum middle mass whenever both sides say `q = 2` (skipped entirely
/// when `check_mu` is false, which also lets the search stop at the first
/// row count with a hit). Disagreements are returned as data, not errors.
///
/// Candidate indexes are built once per (tuple, row count) and shared across
/// all pairs of the run.
pub fn cross_check(
    limit: usize,
    r_max: usize,
    mut cache: Option<&mut QCache>,
    check_mu: bool,
) -> Result<CrossCheckReport, OracleError> {
    assert!(limit >= 2, "cross-check needs limit >= 2");
    assert!(r_max >= 3);
    let tuples = canonical_tuples(limit);
    let mut indexes: HashMap<(Vec<usize>, usize), MiddleIndex> = HashMap::new();
    for t in &tuples {
        for r in 3..=r_max {
            indexes.insert((t.entries().to_vec(), r), middle_index(t, r));
        }
    }

    let mut cells = Vec::with_capacity(tuples.len() * tuples.len());
    for m in &tuples {
        for n in &tuples {
            let report = decision::decide_q(m, n);
            let q_formula = report.q;
            let mu_formula = if check_mu { report.mu } else { None };

            let cached = cache.as_ref().and_then(|c| c.get(m, n, r_max));
            let (q_brute, mu_brute) = match cached {
                Some(hit) if !check_mu || hit.0 != 2 || hit.1.is_some() => hit,
                _ => {
                    let mut best: Option<usize> = None;
                    for r in 3..=r_max {
                        let left = &indexes[&(m.entries().to_vec(), r)];
                        let right = &indexes[&(n.entries().to_vec(), r)];
                        if let Some(mass) = min_mass_between(left, right) {
                            best = Some(best.map_or(mass, |b| b.min(mass)));
                            if !check_mu {
                                break;
                            }
                        }
                    }
                    let q = if best.is_some() { 2 } else { 3 };
                    let mu = if check_mu { best } else { None };
                    if let Some(c) = cache.as_deref_mut() {
                        if check_mu {
                            c.put(m, n, r_max, q, mu)?;
                        }
                    }
                    (q, mu)
                }
            };
            let mu_brute = if check_mu { mu_brute } else { None };

            let agree = q_formula == q_brute
                && (!check_mu || q_formula != 2 || q_brute != 2 || mu_formula == mu_brute);
            cells.push(CrossCheckCell {
                m: m.clone(),
                n: n.clone(),
                q_formula,
                q_brute,
                mu_formula,
                mu_brute,
                agree,
            });
        }
    }
    let disagreements = cells.iter().filter(|c| !c.agree).count();
    Ok(CrossCheckReport {
        limit,
        r_max,
        checked: cells.len(),
        disagreements,
        cells,
    })
}
