//! The ROC score: video-level action recognition conditioned on PSC.
//!
//! For a threshold `t` in `[0, 1]`, `accuracy(t)` is the fraction of videos
//! whose top-1 action is correct *and* whose PSC is at least `t`. The ROC
//! score is the exact integral of this step function over `[0, 1]`,
//! computed by sorting the PSC values of the correctly classified videos —
//! no sampling grid is involved.

use super::EvalError;

/// One breakpoint of the conditional-accuracy step function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    /// `accuracy(threshold)`; the function is constant between breakpoints
    /// and non-increasing in the threshold.
    pub accuracy: f64,
}

/// The conditional-accuracy curve and its integral.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    /// Breakpoints in ascending threshold order, starting at `t = 0`.
    pub points: Vec<RocPoint>,
    /// Exact integral of `accuracy(t)` over `[0, 1]`.
    pub score: f64,
}

fn validate(results: &[(bool, f64)]) -> Result<(), EvalError> {
    if results.is_empty() {
        return Err(EvalError::EmptyResults);
    }
    for &(_, psc) in results {
        if !(psc.is_finite() && (0.0..=1.0).contains(&psc)) {
            return Err(EvalError::InvalidPsc(psc));
        }
    }
    Ok(())
}

/// Neumaier compensated accumulator; keeps thousand-term sums exact to well
/// below the 1e-12 tolerances used by the scoring identities.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Build the conditional-accuracy curve for `(video_correct, psc)` pairs.
///
/// Sorting makes the result invariant under permutation of the input, down
/// to the last bit.
pub fn roc_curve(results: &[(bool, f64)]) -> Result<RocCurve, EvalError> {
    validate(results)?;
    let n = results.len() as f64;
    let mut correct_psc: Vec<f64> = results
        .iter()
        .filter(|(correct, _)| *correct)
        .map(|&(_, psc)| psc)
        .collect();
    correct_psc.sort_unstable_by(f64::total_cmp);

    let m = correct_psc.len();
    let mut points = vec![RocPoint {
        threshold: 0.0,
        accuracy: m as f64 / n,
    }];
    let mut integral = CompensatedSum::default();
    let mut prev_t = 0.0;
    for (k, &p) in correct_psc.iter().enumerate() {
        // dividing per term keeps the all-correct constant case exact:
        // the first accuracy factor is then m/n = 1.0 precisely
        let accuracy = (m - k) as f64 / n;
        integral.add((p - prev_t) * accuracy);
        prev_t = p;
        // one breakpoint per distinct threshold; accuracy(p) still counts p
        if k + 1 == m || correct_psc[k + 1] > p {
            points.push(RocPoint {
                threshold: p,
                accuracy: (m - k - 1) as f64 / n,
            });
        }
    }
    Ok(RocCurve {
        points,
        score: integral.total(),
    })
}

/// The ROC score alone. Equal to [`roc_curve`]'s `score` field.
pub fn roc_score(results: &[(bool, f64)]) -> Result<f64, EvalError> {
    Ok(roc_curve(results)?.score)
}
