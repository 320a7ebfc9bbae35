//! Channel representation of orientation.
//!
//! A bank of `K` channels with uniformly spaced centers `θₖ`; channel `k`
//! responds `cos²(w(θ − θₖ))` inside its support `|θ − θₖ| ≤ π/(2w)` and
//! zero outside. The response has the same form as the cos² law, which is
//! what makes the Bhattacharyya angle a natural channel-space similarity.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::distance::bhattacharyya_angle;
use crate::error::{Error, Result};

/// A bank of overlapping compact-support cos² channels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelBank {
    centers: Vec<f64>,
    spacing: f64,
    width: f64,
}

impl ChannelBank {
    /// `k` centers spread evenly over `[lo, hi]`. Without an explicit
    /// `width`, `w = π/(3s)` so that each point is seen by three channels.
    pub fn new(k: usize, lo: f64, hi: f64, width: Option<f64>) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidBank(format!("need at least 3 channels, got {k}")));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidBank(format!("span [{lo}, {hi}] is empty")));
        }
        let spacing = (hi - lo) / (k - 1) as f64;
        let width = width.unwrap_or(std::f64::consts::PI / (3.0 * spacing));
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidBank(format!("width scale must be positive, got {width}")));
        }
        if spacing >= FRAC_PI_2 / width {
            return Err(Error::InvalidBank(format!(
                "spacing {spacing} does not leave neighboring supports overlapping (half-support {})",
                FRAC_PI_2 / width
            )));
        }
        let centers = (0..k).map(|i| lo + i as f64 * spacing).collect();
        Ok(Self { centers, spacing, width })
    }

    /// The default bank: eight channels over `[0, π/2]`.
    pub fn standard() -> Self {
        Self::new(8, 0.0, FRAC_PI_2, None).expect("default bank is valid")
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Half-width `π/(2w)` of each channel's support.
    pub fn half_support(&self) -> f64 {
        FRAC_PI_2 / self.width
    }

    /// Open interval on which at least one channel responds.
    pub fn covered_span(&self) -> (f64, f64) {
        let h = self.half_support();
        (self.centers[0] - h, self.centers[self.len() - 1] + h)
    }

    /// The interval between the outer centers, where decoding is exact.
    pub fn interior(&self) -> (f64, f64) {
        (self.centers[0], self.centers[self.len() - 1])
    }

    fn response(&self, k: usize, theta: f64) -> f64 {
        let x = self.width * (theta - self.centers[k]);
        if x.abs() < FRAC_PI_2 {
            x.cos().powi(2)
        } else {
            0.0
        }
    }

    pub fn encode(&self, theta: f64) -> Result<ChannelVector> {
        let (lo, hi) = self.covered_span();
        if !(theta > lo && theta < hi) {
            return Err(Error::Coverage { theta, lo, hi });
        }
        Ok(ChannelVector((0..self.len()).map(|k| self.response(k, theta)).collect()))
    }

    /// Local inversion around the strongest channel.
    ///
    /// With the neighbor `j+1` on the far side, `θ = θⱼ + u/w` where
    /// `tan u = (√aⱼ₊₁/√aⱼ − cos α)/sin α` and `α = w·s`. A lone active
    /// channel is inverted outward, away from its silent neighbors.
    pub fn decode(&self, v: &ChannelVector) -> Result<f64> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch(v.len(), self.len()));
        }
        let a = v.activations();
        let k = (0..a.len()).fold(0, |best, i| if a[i] > a[best] { i } else { best });
        if a[k] <= 0.0 {
            return Err(Error::Undecodable("all activations are zero".into()));
        }
        let left = if k > 0 { a[k - 1] } else { 0.0 };
        let right = if k + 1 < a.len() { a[k + 1] } else { 0.0 };
        if left == 0.0 && right == 0.0 {
            let offset = a[k].min(1.0).sqrt().acos() / self.width;
            return Ok(if k == 0 {
                self.centers[0] - offset
            } else if k + 1 == a.len() {
                self.centers[k] + offset
            } else {
                self.centers[k]
            });
        }
        let (j, a_lo, a_hi) = if right >= left { (k, a[k], right) } else { (k - 1, left, a[k]) };
        let alpha = self.width * self.spacing;
        let u = ((a_hi / a_lo).sqrt() - alpha.cos()).atan2(alpha.sin());
        Ok(self.centers[j] + u / self.width)
    }
}

/// Non-negative activations, one per channel.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ChannelVector(Vec<f64>);

impl ChannelVector {
    pub fn new(activations: Vec<f64>) -> Result<Self> {
        if let Some(bad) = activations.iter().find(|a| !(a.is_finite() && (0.0..=1.0).contains(*a))) {
            return Err(Error::InvalidBank(format!("activation {bad} is outside [0, 1]")));
        }
        Ok(Self(activations))
    }

    pub fn activations(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn amplitudes(&self) -> Result<Vec<f64>> {
        let total: f64 = self.0.iter().sum();
        if total <= 0.0 {
            return Err(Error::Undecodable("all activations are zero".into()));
        }
        Ok(self.0.iter().map(|a| (a / total).sqrt()).collect())
    }
}

/// Bhattacharyya angle between L1-normalized activation vectors.
pub fn channel_similarity(v1: &ChannelVector, v2: &ChannelVector) -> Result<f64> {
    if v1.len() != v2.len() {
        return Err(Error::DimensionMismatch(v1.len(), v2.len()));
    }
    bhattacharyya_angle(&v1.amplitudes()?, &v2.amplitudes()?)
}
