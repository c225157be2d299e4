//! LeadingOnes and SelPres objectives.

use serde::{Deserialize, Serialize};

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::params::SelPresParams;

/// Objective value; SelPres returns `2n` on its optimal set and at most `n` elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FitnessValue(pub usize);

pub fn leading_ones(x: &Bitstring) -> usize {
    x.leading_ones()
}

/// Number of 1-bits among positions `1..=m`.
pub fn prefix_sum(x: &Bitstring, m: usize) -> Result<usize> {
    if m < 1 || m > x.len() {
        return Err(Error::domain(format!("prefix length {m} outside 1..={}", x.len())));
    }
    Ok(x.count_ones_in(1, m))
}

/// `⌊c·n⌋`, tolerant of products like `0.7 * 40 = 27.999...` that are
/// integral in exact arithmetic.
fn floor_scaled(c: f64, n: usize) -> usize {
    (c * n as f64 + 1e-9).floor().max(0.0) as usize
}

/// Inclusive 1-based window `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub start: usize,
    pub end: usize,
}

impl Window {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }
}

/// The three constrained windows of the optimal set for a given `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OptimalWindows {
    /// Must be all zeros: `[1, k+3]`.
    pub zeros: Window,
    /// Must be all ones: `[k+4, ⌊(σ−δ)n⌋−1]`.
    pub ones: Window,
    /// At most two thirds ones: `[⌊(σ+δ)n⌋, ⌊(σ+2δ)n⌋−1]`.
    pub sparse: Window,
}

impl OptimalWindows {
    pub fn new(n: usize, p: &SelPresParams) -> Result<Self> {
        p.validate()?;
        let zeros = Window { start: 1, end: p.k + 3 };
        let ones_end = floor_scaled(p.sigma - p.delta, n).saturating_sub(1);
        let ones = Window {
            start: p.k + 4,
            end: ones_end,
        };
        let sparse = Window {
            start: floor_scaled(p.sigma + p.delta, n),
            end: floor_scaled(p.sigma + 2.0 * p.delta, n).saturating_sub(1),
        };
        if ones.start > ones.end {
            return Err(Error::config(
                "n",
                format!(
                    "n = {n} too small: all-ones window [{}, {}] is empty",
                    ones.start, ones.end
                ),
            ));
        }
        if sparse.start > sparse.end || sparse.start < 1 {
            return Err(Error::config(
                "n",
                format!(
                    "n = {n} too small: sparse window [{}, {}] is empty",
                    sparse.start, sparse.end
                ),
            ));
        }
        if ones.end >= sparse.start || sparse.end > n {
            return Err(Error::config(
                "n",
                format!("n = {n}: windows {ones:?} and {sparse:?} overlap or exceed the string"),
            ));
        }
        Ok(OptimalWindows { zeros, ones, sparse })
    }

    #[inline]
    pub fn contains(&self, x: &Bitstring) -> bool {
        x.count_ones_in(self.zeros.start, self.zeros.end) == 0
            && x.count_ones_in(self.ones.start, self.ones.end) == self.ones.len()
            && 3 * x.count_ones_in(self.sparse.start, self.sparse.end) <= 2 * self.sparse.len()
    }
}

pub fn is_optimal(x: &Bitstring, p: &SelPresParams) -> Result<bool> {
    Ok(OptimalWindows::new(x.len(), p)?.contains(x))
}

pub fn selpres(x: &Bitstring, p: &SelPresParams) -> Result<FitnessValue> {
    let w = OptimalWindows::new(x.len(), p)?;
    Ok(FitnessValue(if w.contains(x) { 2 * x.len() } else { x.leading_ones() }))
}

/// Objective selector as it appears in configs and traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Objective {
    LeadingOnes,
    SelPres(SelPresParams),
}

/// An objective bound to a string length, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub enum Evaluator {
    LeadingOnes { n: usize },
    SelPres { n: usize, windows: OptimalWindows, k: usize },
}

impl Evaluator {
    pub fn new(objective: &Objective, n: usize) -> Result<Self> {
        match objective {
            Objective::LeadingOnes => Ok(Evaluator::LeadingOnes { n }),
            Objective::SelPres(p) => Ok(Evaluator::SelPres {
                n,
                windows: OptimalWindows::new(n, p)?,
                k: p.k,
            }),
        }
    }

    /// Returns the fitness and whether `x` is a global optimum.
    #[inline]
    pub fn evaluate(&self, x: &Bitstring) -> (usize, bool) {
        match self {
            Evaluator::LeadingOnes { n } => {
                let lo = x.leading_ones();
                (lo, lo == *n)
            }
            Evaluator::SelPres { n, windows, .. } => {
                if windows.contains(x) {
                    (2 * n, true)
                } else {
                    (x.leading_ones(), false)
                }
            }
        }
    }

    /// The `k` of SelPres, used for the `1^{k+3}` instrumentation.
    pub fn selpres_k(&self) -> Option<usize> {
        match self {
            Evaluator::SelPres { k, .. } => Some(*k),
            Evaluator::LeadingOnes { .. } => None,
        }
    }
}
