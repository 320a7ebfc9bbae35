//! Finite-sample uncertainty and the counting definition of statistical
//! distance.
//!
//! With `n` trials the yes-frequency pins `p` down to `δp = √(p(1−p)/n)`,
//! which widens to `δθ = δp / |dp/dθ|` in orientation. Two orientations are
//! distinguishable when their `±δθ` regions do not overlap; the number of
//! mutually distinguishable orientations packed between `θ1` and `θ2`,
//! divided by `√n`, converges to the statistical distance.
//!
//! The confidence multiplier is fixed at one standard error. Any other
//! multiplier `k` shrinks the count by `1/k`.

use std::num::NonZeroU64;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::law::{OrientationAngle, ResponseLaw};

/// Resolution of the bisection that locates the next distinguishable angle.
pub const PACKING_TOL: f64 = 1e-12;
/// Offset used to keep spans off endpoints where `p ∈ {0, 1}`.
pub const ENDPOINT_EPS: f64 = 1e-9;
/// Default schedule for [`distance_by_counting`].
pub const DEFAULT_SCHEDULE: [u64; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];

/// Number of trials, at least one.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SampleSize(NonZeroU64);

impl SampleSize {
    pub fn new(n: u64) -> Result<Self> {
        NonZeroU64::new(n).map(Self).ok_or(Error::ZeroSampleSize)
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0.get()
    }

    #[inline]
    pub fn sqrt(self) -> f64 {
        (self.get() as f64).sqrt()
    }
}

/// Half-width of an uncertainty region.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Halfwidth {
    Finite(f64),
    /// `dp/dθ = 0` with `p(1−p) > 0`: the trials carry no orientation
    /// information here.
    Unbounded,
}

impl Halfwidth {
    pub fn finite(self) -> Option<f64> {
        match self {
            Halfwidth::Finite(h) => Some(h),
            Halfwidth::Unbounded => None,
        }
    }
}

/// The region `center ± halfwidth` compatible with `n` trials.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct UncertaintyInterval {
    pub center: OrientationAngle,
    pub halfwidth: Halfwidth,
    pub sample_size: SampleSize,
    /// `p(1−p) = 0` at the center, so the half-width collapsed to zero.
    pub degenerate: bool,
}

impl UncertaintyInterval {
    pub fn is_uninformative(&self) -> bool {
        self.halfwidth == Halfwidth::Unbounded
    }

    pub fn contains(&self, theta: f64) -> bool {
        match self.halfwidth {
            Halfwidth::Finite(h) => (theta - self.center.radians()).abs() <= h,
            Halfwidth::Unbounded => true,
        }
    }
}

/// `δp = √(p(1−p)/n)`.
pub fn p_uncertainty(p: f64, n: SampleSize) -> f64 {
    let p = p.clamp(0.0, 1.0);
    (p * (1.0 - p) / n.get() as f64).sqrt()
}

/// `δθ = |dp/dθ|⁻¹ · δp` at `theta`.
pub fn theta_uncertainty(law: &ResponseLaw, theta: f64, n: SampleSize) -> Result<UncertaintyInterval> {
    let theta = law.check(theta)?;
    let (p, q) = law.prob_pair(theta);
    let slope = law.slope_unchecked(theta).value.abs();
    let spread = (p * q / n.get() as f64).sqrt();
    let (halfwidth, degenerate) = if p * q == 0.0 {
        (Halfwidth::Finite(0.0), true)
    } else if slope == 0.0 {
        (Halfwidth::Unbounded, false)
    } else {
        (Halfwidth::Finite(spread / slope), false)
    };
    Ok(UncertaintyInterval {
        center: OrientationAngle::new(theta)?,
        halfwidth,
        sample_size: n,
        degenerate,
    })
}

/// True iff the two uncertainty regions do not overlap. Uninformative
/// intervals are never distinguishable.
pub fn distinguishable(a: &UncertaintyInterval, b: &UncertaintyInterval) -> Result<bool> {
    if a.sample_size != b.sample_size {
        return Err(Error::SampleSizeMismatch(a.sample_size.get(), b.sample_size.get()));
    }
    match (a.halfwidth, b.halfwidth) {
        (Halfwidth::Finite(ha), Halfwidth::Finite(hb)) => {
            Ok((a.center.radians() - b.center.radians()).abs() >= ha + hb)
        }
        _ => Ok(false),
    }
}

/// Greedy packing of mutually distinguishable orientations on `[θ1, θ2]`.
///
/// `halfwidth_at` supplies the uncertainty half-width at an angle. Starting
/// at `θ1`, each step moves to the smallest `θ'` whose region clears the
/// current one; the number of accepted points strictly below `θ2` is
/// returned. Greedy is optimal for packing intervals on a line.
pub(crate) fn greedy_pack<F>(theta1: f64, theta2: f64, mut halfwidth_at: F) -> Result<u64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (lo, hi) = if theta1 <= theta2 { (theta1, theta2) } else { (theta2, theta1) };
    if lo == hi {
        return Ok(0);
    }
    let mut current = lo;
    let mut h_current = halfwidth_at(current)?;
    let mut count = 0u64;
    loop {
        let gap = |t: f64, h_t: f64| (t - current) - (h_current + h_t);
        // bracket the first crossing of the gap function
        let mut step = (4.0 * h_current).max(PACKING_TOL);
        let mut a = current;
        let mut b;
        let mut h_b;
        loop {
            b = (current + step).min(hi);
            h_b = halfwidth_at(b)?;
            if gap(b, h_b) >= 0.0 || b >= hi {
                break;
            }
            a = b;
            step *= 2.0;
        }
        if gap(b, h_b) < 0.0 {
            return Ok(count);
        }
        while b - a > PACKING_TOL {
            let mid = 0.5 * (a + b);
            let h_mid = halfwidth_at(mid)?;
            if gap(mid, h_mid) >= 0.0 {
                b = mid;
                h_b = h_mid;
            } else {
                a = mid;
            }
        }
        if b >= hi {
            return Ok(count);
        }
        if h_current == 0.0 && h_b == 0.0 {
            return Err(Error::NonIdentifiable { lo: current, hi: b });
        }
        count += 1;
        current = b;
        h_current = h_b;
    }
}

/// Maximum number `D` of intermediate orientations between `θ1` and `θ2`,
/// each distinguishable in `n` trials from its predecessor.
pub fn count_distinguishable(law: &ResponseLaw, theta1: f64, theta2: f64, n: SampleSize) -> Result<u64> {
    law.check(theta1)?;
    law.check(theta2)?;
    greedy_pack(theta1, theta2, |t| {
        let interval = theta_uncertainty(law, t, n)?;
        interval
            .halfwidth
            .finite()
            .ok_or(Error::Singularity { theta: t })
    })
}

/// One row of a counting convergence table.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct CountRow {
    pub n: u64,
    #[serde(rename = "D")]
    pub count: u64,
    #[serde(rename = "D_over_sqrt_n")]
    pub scaled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountingConvergence {
    pub rows: Vec<CountRow>,
    /// Two-point extrapolation of the last two rows assuming an `O(1/√n)`
    /// error term.
    pub richardson: Option<f64>,
}

impl CountingConvergence {
    pub fn estimate(&self) -> Option<f64> {
        self.rows.last().map(|r| r.scaled)
    }
}

/// `D(n)/√n` over a strictly increasing schedule.
pub fn distance_by_counting(
    law: &ResponseLaw,
    theta1: f64,
    theta2: f64,
    schedule: &[SampleSize],
) -> Result<CountingConvergence> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSchedule);
    }
    let rows = schedule
        .par_iter()
        .map(|&n| {
            let count = count_distinguishable(law, theta1, theta2, n)?;
            Ok(CountRow {
                n: n.get(),
                count,
                scaled: count as f64 / n.sqrt(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let richardson = richardson(&rows);
    Ok(CountingConvergence { rows, richardson })
}

pub(crate) fn richardson(rows: &[CountRow]) -> Option<f64> {
    let [.., r1, r2] = rows else { return None };
    let (h1, h2) = (1.0 / (r1.n as f64).sqrt(), 1.0 / (r2.n as f64).sqrt());
    Some((r2.scaled * h1 - r1.scaled * h2) / (h1 - h2))
}

pub fn default_schedule() -> Vec<SampleSize> {
    DEFAULT_SCHEDULE.iter().map(|&n| SampleSize::new(n).unwrap()).collect()
}
