//! The k-diagonal example family and its minimal-support certificate.
//!
//! From a grid of pairwise distinct positive values x_{n,i} the family
//! builds the diagonal weight pair
//!
//! ```text
//!   S_n = diag(x_{n,1}, …, x_{n,k}),
//!   T_n = diag(x_{n-1,1}, x_{n-2,2}, …, x_{n-k,k}),
//! ```
//!
//! two shifts that are unitarily equivalent via the canonical zeroth
//! column (coordinate projections placed at rows 1..k) yet admit no
//! intertwining unitary with fewer than k non-zero diagonals. The
//! certificate re-derives the lower bound numerically: each coordinate
//! branch places its eigenvalue sequence at exactly one admissible row,
//! and an isometric zeroth column has to hit all k of them.

use serde::Serialize;

use crate::cmatrix::CMatrix;
use crate::equivalence::ColumnIsometry;
use crate::error::{Error, Result};
use crate::weights::WeightSequence;

/// Relative gap below which two grid values count as colliding.
pub const DELTA_GRID: f64 = 1e-9;

/// Grid of positive, pairwise distinct eigenvalues x_{n,i} over a
/// window of rows n ∈ [lo, hi] and branches i ∈ 1..=k.
#[derive(Clone, Debug)]
pub struct EigenGrid {
    k: usize,
    lo: i64,
    /// values[t][i] = x_{lo + t, i + 1} in 0-based branch indexing.
    values: Vec<Vec<f64>>,
}

impl EigenGrid {
    pub fn new(k: usize, lo: i64, values: Vec<Vec<f64>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidK { k });
        }
        if values.is_empty() {
            return Err(Error::EmptyDescription);
        }
        for row in &values {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    context: "EigenGrid::new",
                    expected: k,
                    got: row.len(),
                });
            }
            for &x in row {
                if !x.is_finite() || x <= 0.0 {
                    return Err(Error::NotExampleShape {
                        reason: format!("grid value {x} is not a positive finite number"),
                    });
                }
            }
        }
        let mut flat: Vec<f64> = values.iter().flatten().copied().collect();
        flat.sort_by(|a, b| a.partial_cmp(b).expect("finite grid values"));
        let top = flat.last().copied().unwrap_or(1.0);
        for pair in flat.windows(2) {
            let gap = pair[1] - pair[0];
            if gap < DELTA_GRID * top {
                return Err(Error::DistinctnessViolated {
                    value: pair[0],
                    gap,
                });
            }
        }
        Ok(Self { k, lo, values })
    }

    /// Affine default grid x_{n,i} = 2 + 0.1·(stride·(n - lo) + i) with
    /// stride = max(10, k + 1); distinct by construction with gap 0.1.
    pub fn default_affine(k: usize, lo: i64, hi: i64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidK { k });
        }
        if hi < lo {
            return Err(Error::GridTooShort { lo, hi, k });
        }
        let stride = 10.max(k as i64 + 1);
        let values = (0..=(hi - lo))
            .map(|t| {
                (1..=k as i64)
                    .map(|i| 2.0 + 0.1 * (stride * t + i) as f64)
                    .collect()
            })
            .collect();
        Self::new(k, lo, values)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    /// x_{n, branch+1}, or None outside the window.
    pub fn value(&self, n: i64, branch: usize) -> Option<f64> {
        let t = n - self.lo;
        if t < 0 || t as usize >= self.values.len() || branch >= self.k {
            None
        } else {
            Some(self.values[t as usize][branch])
        }
    }
}

/// Builds the weight pair of the family. S is windowed on the grid rows;
/// T is windowed on [lo + k, hi + 1], the rows for which all k shifted
/// lookups stay inside the grid.
pub fn generate_k_diagonal_pair(grid: &EigenGrid) -> Result<(WeightSequence, WeightSequence)> {
    let k = grid.k() as i64;
    if grid.hi() - grid.lo() < 2 * k {
        return Err(Error::GridTooShort {
            lo: grid.lo(),
            hi: grid.hi(),
            k: grid.k(),
        });
    }
    let s_weights: Vec<CMatrix> = (grid.lo()..=grid.hi())
        .map(|n| {
            let diag: Vec<f64> = (0..grid.k())
                .map(|i| grid.value(n, i).expect("row inside the grid"))
                .collect();
            CMatrix::diagonal(&diag)
        })
        .collect();
    let t_weights: Vec<CMatrix> = ((grid.lo() + k)..=(grid.hi() + 1))
        .map(|n| {
            let diag: Vec<f64> = (0..grid.k())
                .map(|i| {
                    grid.value(n - 1 - i as i64, i)
                        .expect("shifted lookup inside the grid")
                })
                .collect();
            CMatrix::diagonal(&diag)
        })
        .collect();
    Ok((
        WeightSequence::windowed(grid.lo(), s_weights)?,
        WeightSequence::windowed(grid.lo() + k, t_weights)?,
    ))
}

/// The canonical zeroth column of the family: the orthogonal projection
/// onto the i-th coordinate placed at row i, for i = 1..k. The blocks
/// sum to the identity exactly.
pub fn canonical_u0(k: usize) -> Result<ColumnIsometry> {
    if k < 2 {
        return Err(Error::InvalidK { k });
    }
    let support = (0..k)
        .map(|i| {
            let mut diag = vec![0.0; k];
            diag[i] = 1.0;
            (i as i64 + 1, CMatrix::diagonal(&diag))
        })
        .collect();
    ColumnIsometry::new(k, support)
}

/// Certificate that every intertwining unitary of the pair needs at
/// least `min_support` rows in its zeroth column (equivalently, that
/// many non-zero diagonals, by diagonal constancy for positive weights).
#[derive(Clone, Debug, Serialize)]
pub struct MinSupportCertificate {
    pub k: usize,
    /// Admissible zeroth-column rows per branch, 0-based branches.
    pub admissible_rows: Vec<Vec<i64>>,
    pub min_support: usize,
    pub max_support_checked: usize,
    /// True when the certificate rules out `max_support_checked` rows.
    pub exceeds_requested: bool,
}

fn check_family_shape(
    seq: &WeightSequence,
    grid: &EigenGrid,
    role: &str,
    expected: impl Fn(i64, usize) -> Option<f64>,
) -> Result<()> {
    let Some((lo, hi)) = seq.window_bounds() else {
        return Err(Error::NotExampleShape {
            reason: format!("{role} weights must be a windowed description"),
        });
    };
    for n in lo..=hi {
        let w = seq.weight_at(n);
        if !w.is_diagonal(1e-12) {
            return Err(Error::NotExampleShape {
                reason: format!("{role} weight at {n} is not diagonal"),
            });
        }
        for i in 0..grid.k() {
            let entry = w.entry(i, i);
            if entry.im.abs() > 1e-12 || entry.re <= 0.0 {
                return Err(Error::NotExampleShape {
                    reason: format!("{role} weight at {n} is not positive"),
                });
            }
            let Some(reference) = expected(n, i) else {
                return Err(Error::NotExampleShape {
                    reason: format!("{role} weight at {n} lies outside the grid"),
                });
            };
            if (entry.re - reference).abs() > 1e-12 * reference.max(1.0) {
                return Err(Error::NotExampleShape {
                    reason: format!("{role} weight at {n} does not match the grid"),
                });
            }
        }
    }
    Ok(())
}

/// Minimal number of distinct rows hitting every branch's admissible set.
fn min_cover(sets: &[Vec<i64>]) -> usize {
    fn recurse(sets: &[Vec<i64>], idx: usize, chosen: &mut Vec<i64>, best: &mut usize) {
        if chosen.len() >= *best {
            return;
        }
        if idx == sets.len() {
            *best = chosen.len();
            return;
        }
        for &row in &sets[idx] {
            if chosen.contains(&row) {
                recurse(sets, idx + 1, chosen, best);
            } else {
                chosen.push(row);
                recurse(sets, idx + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    let mut best = sets.len() + sets.iter().map(|s| s.len()).sum::<usize>();
    let mut chosen = Vec::new();
    recurse(sets, 0, &mut chosen, &mut best);
    best
}

/// Re-derives the eigenvalue-locality bound: a zeroth-column block at
/// row n can act on branch j only when the branch's eigenvalue sequence
/// (x_{·,j}) reappears as an eigenvalue branch of (T_{n+·}). Distinct
/// grid values force row n = j, so any isometric zeroth column needs all
/// k rows.
pub fn certify_min_support(
    s: &WeightSequence,
    t: &WeightSequence,
    grid: &EigenGrid,
    max_support: usize,
) -> Result<MinSupportCertificate> {
    let k = grid.k();
    if s.dim() != k || t.dim() != k {
        return Err(Error::DimensionMismatch {
            context: "certify_min_support",
            expected: k,
            got: if s.dim() != k { s.dim() } else { t.dim() },
        });
    }
    check_family_shape(s, grid, "source", |n, i| grid.value(n, i))?;
    check_family_shape(t, grid, "target", |n, i| grid.value(n - 1 - i as i64, i))?;
    let (t_lo, t_hi) = t.window_bounds().expect("shape check ensures windowed");

    // eigenvalue of T_q on coordinate branch ell (identity padding gives 1)
    let target_eigenvalue = |q: i64, ell: usize| -> f64 {
        if q >= t_lo && q <= t_hi {
            grid.value(q - 1 - ell as i64, ell)
                .expect("target window stays inside the grid")
        } else {
            1.0
        }
    };

    let scan_lo = grid.lo() - 1;
    let scan_hi = grid.hi() + k as i64 + 1;
    let min_overlap = k + 1;
    let mut admissible_rows: Vec<Vec<i64>> = vec![Vec::new(); k];
    for (branch, rows) in admissible_rows.iter_mut().enumerate() {
        for n in scan_lo..=scan_hi {
            // comparison range: grid rows t with n + t inside the target window
            let t_min = grid.lo().max(t_lo - n);
            let t_max = grid.hi().min(t_hi - n);
            if t_max - t_min + 1 < min_overlap as i64 {
                continue;
            }
            let matched = (0..k).any(|ell| {
                (t_min..=t_max).all(|step| {
                    let source = grid.value(step, branch).expect("grid row in range");
                    let target = target_eigenvalue(n + step, ell);
                    (source - target).abs() <= 1e-12 * source.max(target).max(1.0)
                })
            });
            if matched {
                rows.push(n);
            }
        }
        if rows.is_empty() {
            return Err(Error::NotExampleShape {
                reason: format!("branch {branch} admits no zeroth-column row in the scan range"),
            });
        }
    }
    let min_support = min_cover(&admissible_rows);
    Ok(MinSupportCertificate {
        k,
        admissible_rows,
        min_support,
        max_support_checked: max_support,
        exceeds_requested: min_support > max_support,
    })
}
