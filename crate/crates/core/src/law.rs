//! Response laws: the probability of a "yes" outcome as a function of
//! orientation.
//!
//! Two analytic families are provided, `cos²θ` and `cos²(wθ)`, plus a
//! tabulated law built from ordered `(θ, p)` samples with piecewise-linear
//! interpolation. All laws live on a sub-interval of the canonical domain
//! `[0, π/2]`, where `cos²θ` is strictly monotone and orientations are
//! therefore recoverable from yes-frequencies.

use std::f64::consts::FRAC_PI_2;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Slack allowed when checking an angle against a domain boundary.
const DOMAIN_SLACK: f64 = 1e-12;

/// An orientation in radians on the canonical domain `[0, π/2]`.
#[derive(Copy, Clone, Debug, PartialEq, PartialOrd, serde::Serialize)]
#[serde(transparent)]
pub struct OrientationAngle(f64);

impl OrientationAngle {
    pub fn new(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::NonFinite(radians));
        }
        if !(-DOMAIN_SLACK..=FRAC_PI_2 + DOMAIN_SLACK).contains(&radians) {
            return Err(Error::Domain {
                theta: radians,
                lo: 0.0,
                hi: FRAC_PI_2,
            });
        }
        Ok(Self(radians.clamp(0.0, FRAC_PI_2)))
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Ordered `(θ, p)` samples backing a tabulated law.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    thetas: Vec<f64>,
    probs: Vec<f64>,
    complements: Vec<f64>,
}

impl Table {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidLaw(format!(
                "a tabulated law needs at least 3 samples, got {}",
                samples.len()
            )));
        }
        for (i, &(theta, p)) in samples.iter().enumerate() {
            check_sample(theta, p).map_err(|message| Error::InvalidLaw(format!("sample {i}: {message}")))?;
            if i > 0 && theta <= samples[i - 1].0 {
                return Err(Error::InvalidLaw(format!(
                    "sample {i}: theta {theta} is not greater than the previous theta {}",
                    samples[i - 1].0
                )));
            }
        }
        Ok(Self {
            thetas: samples.iter().map(|s| s.0.clamp(0.0, FRAC_PI_2)).collect(),
            probs: samples.iter().map(|s| s.1).collect(),
            complements: samples.iter().map(|s| 1.0 - s.1).collect(),
        })
    }

    /// Reads a two-column CSV with header `theta,p`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Table {
            line: 1,
            message: e.to_string(),
        })?;
        if headers.len() != 2 || &headers[0] != "theta" || &headers[1] != "p" {
            return Err(Error::Table {
                line: 1,
                message: format!("expected header `theta,p`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let mut samples: Vec<(f64, f64)> = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| Error::Table {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line());
            let field = |i: usize, name: &str| -> Result<f64> {
                record
                    .get(i)
                    .ok_or_else(|| Error::Table {
                        line,
                        message: format!("missing `{name}` column"),
                    })?
                    .parse::<f64>()
                    .map_err(|e| Error::Table {
                        line,
                        message: format!("cannot parse `{name}`: {e}"),
                    })
            };
            let theta = field(0, "theta")?;
            let p = field(1, "p")?;
            check_sample(theta, p).map_err(|message| Error::Table { line, message })?;
            if let Some(&(prev, _)) = samples.last() {
                if theta <= prev {
                    return Err(Error::Table {
                        line,
                        message: format!(
                            "theta {theta} is not greater than the previous theta {prev}; rows must be strictly increasing"
                        ),
                    });
                }
            }
            samples.push((theta, p));
        }
        if samples.len() < 3 {
            return Err(Error::Table {
                line: 1,
                message: format!("a tabulated law needs at least 3 rows, got {}", samples.len()),
            });
        }
        Table::new(&samples)
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Index `i` of the segment `[θ_i, θ_{i+1}]` holding `theta`; knots map to
    /// the segment on their right, except the last knot.
    fn segment(&self, theta: f64) -> usize {
        let i = self.thetas.partition_point(|&t| t <= theta);
        i.saturating_sub(1).min(self.thetas.len() - 2)
    }

    fn interpolate(&self, theta: f64) -> f64 {
        self.interpolate_pair(theta).0
    }

    /// Interpolates `p` and `1 − p` separately so that each stays accurate
    /// where it is small.
    fn interpolate_pair(&self, theta: f64) -> (f64, f64) {
        let i = self.segment(theta);
        let (t0, t1) = (self.thetas[i], self.thetas[i + 1]);
        let t = ((theta - t0) / (t1 - t0)).clamp(0.0, 1.0);
        let p = self.probs[i] * (1.0 - t) + self.probs[i + 1] * t;
        let q = self.complements[i] * (1.0 - t) + self.complements[i + 1] * t;
        (p.clamp(0.0, 1.0), q.clamp(0.0, 1.0))
    }

    fn slope(&self, segment: usize) -> f64 {
        (self.probs[segment + 1] - self.probs[segment]) / (self.thetas[segment + 1] - self.thetas[segment])
    }
}

fn check_sample(theta: f64, p: f64) -> std::result::Result<(), String> {
    if !theta.is_finite() || !p.is_finite() {
        return Err("values must be finite".into());
    }
    if !(-DOMAIN_SLACK..=FRAC_PI_2 + DOMAIN_SLACK).contains(&theta) {
        return Err(format!("theta {theta} lies outside [0, pi/2]"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(format!("p {p} lies outside [0, 1]"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub enum LawKind {
    CosineSquared,
    CosineSquaredScaled { frequency: f64 },
    Tabulated(Table),
}

/// Direction of a monotone law.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// A derivative value; `one_sided` marks a finite difference taken at a
/// domain endpoint of a tabulated law.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Slope {
    pub value: f64,
    pub one_sided: bool,
}

/// A probability-of-"yes" curve `p(θ)` on a domain `[lo, hi] ⊆ [0, π/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseLaw {
    kind: LawKind,
    lo: f64,
    hi: f64,
}

impl ResponseLaw {
    /// `p(θ) = cos²θ` on `[0, π/2]`.
    pub fn cos2() -> Self {
        Self {
            kind: LawKind::CosineSquared,
            lo: 0.0,
            hi: FRAC_PI_2,
        }
    }

    /// `p(θ) = cos²(wθ)`; the default domain is the first monotone branch
    /// `[0, π/(2w)]`, capped at `π/2`.
    pub fn cos2_scaled(frequency: f64) -> Result<Self> {
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(Error::InvalidLaw(format!("frequency must be positive, got {frequency}")));
        }
        Ok(Self {
            kind: LawKind::CosineSquaredScaled { frequency },
            lo: 0.0,
            hi: (FRAC_PI_2 / frequency).min(FRAC_PI_2),
        })
    }

    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self> {
        Ok(Self::from_table(Table::new(samples)?))
    }

    pub fn from_table(table: Table) -> Self {
        let lo = table.thetas[0];
        let hi = *table.thetas.last().unwrap();
        Self {
            kind: LawKind::Tabulated(table),
            lo,
            hi,
        }
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Ok(Self::from_table(Table::from_csv(file)?))
    }

    /// Parses `cos2`, `cos2:<w>` or `table:<path>`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "cos2" {
            return Ok(Self::cos2());
        }
        if let Some(w) = spec.strip_prefix("cos2:") {
            let w: f64 = w
                .parse()
                .map_err(|_| Error::InvalidLaw(format!("cannot parse frequency in `{spec}`")))?;
            return Self::cos2_scaled(w);
        }
        if let Some(path) = spec.strip_prefix("table:") {
            return Self::from_csv_path(path);
        }
        Err(Error::InvalidLaw(format!(
            "unknown law `{spec}` (expected cos2, cos2:<w> or table:<path>)"
        )))
    }

    /// Restricts the law to `[lo, hi]`, which must lie inside the current domain.
    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        let natural_hi = match &self.kind {
            LawKind::Tabulated(t) => *t.thetas.last().unwrap(),
            _ => FRAC_PI_2,
        };
        let natural_lo = match &self.kind {
            LawKind::Tabulated(t) => t.thetas[0],
            _ => 0.0,
        };
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidLaw(format!("invalid domain [{lo}, {hi}]")));
        }
        if lo < natural_lo - DOMAIN_SLACK || hi > natural_hi + DOMAIN_SLACK {
            return Err(Error::InvalidLaw(format!(
                "domain [{lo}, {hi}] exceeds [{natural_lo}, {natural_hi}]"
            )));
        }
        self.lo = lo.max(natural_lo);
        self.hi = hi.min(natural_hi);
        Ok(self)
    }

    pub fn kind(&self) -> &LawKind {
        &self.kind
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn span(&self) -> f64 {
        self.hi - self.lo
    }

    /// Human-readable label used in reports.
    pub fn describe(&self) -> String {
        match &self.kind {
            LawKind::CosineSquared => "cos2".to_string(),
            LawKind::CosineSquaredScaled { frequency } => format!("cos2:{frequency}"),
            LawKind::Tabulated(t) => format!("table({} samples)", t.thetas.len()),
        }
    }

    /// Frequency `w` for the cosine families.
    pub fn frequency(&self) -> Option<f64> {
        match self.kind {
            LawKind::CosineSquared => Some(1.0),
            LawKind::CosineSquaredScaled { frequency } => Some(frequency),
            LawKind::Tabulated(_) => None,
        }
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.lo - DOMAIN_SLACK && theta <= self.hi + DOMAIN_SLACK
    }

    pub(crate) fn check(&self, theta: f64) -> Result<f64> {
        if !theta.is_finite() {
            return Err(Error::NonFinite(theta));
        }
        if !self.contains(theta) {
            return Err(Error::Domain {
                theta,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(theta.clamp(self.lo, self.hi))
    }

    pub fn probability(&self, theta: f64) -> Result<f64> {
        let theta = self.check(theta)?;
        Ok(self.prob_pair(theta).0)
    }

    /// `(p, 1 − p)` with the complement computed directly where possible, so
    /// that `p(1 − p)` stays accurate near `p = 1`. No domain check.
    pub(crate) fn prob_pair(&self, theta: f64) -> (f64, f64) {
        match &self.kind {
            LawKind::Tabulated(t) => t.interpolate_pair(theta),
            _ => {
                let w = self.frequency().unwrap();
                let (s, c) = (w * theta).sin_cos();
                (c * c, s * s)
            }
        }
    }

    pub fn derivative(&self, theta: f64) -> Result<Slope> {
        let theta = self.check(theta)?;
        Ok(self.slope_unchecked(theta))
    }

    pub(crate) fn slope_unchecked(&self, theta: f64) -> Slope {
        match &self.kind {
            LawKind::Tabulated(t) => {
                let h = 1e-6 * self.span();
                let (a, b) = ((theta - h).max(self.lo), (theta + h).min(self.hi));
                let one_sided = theta - h < self.lo || theta + h > self.hi;
                Slope {
                    value: (t.interpolate(b) - t.interpolate(a)) / (b - a),
                    one_sided,
                }
            }
            _ => {
                let w = self.frequency().unwrap();
                Slope {
                    value: -w * (2.0 * w * theta).sin(),
                    one_sided: false,
                }
            }
        }
    }

    /// Exact derivative of the law on a smooth piece identified by an interior
    /// point `anchor` of that piece. For tabulated laws this is the segment
    /// slope of the interpolant.
    pub(crate) fn piece_slope(&self, theta: f64, anchor: f64) -> f64 {
        match &self.kind {
            LawKind::Tabulated(t) => t.slope(t.segment(anchor)),
            _ => {
                let w = self.frequency().unwrap();
                -w * (2.0 * w * theta).sin()
            }
        }
    }

    /// Points strictly inside `(lo, hi)` where the law stops being smooth or
    /// changes monotone direction: table knots, or `kπ/(2w)` for the cosine
    /// families.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        match &self.kind {
            LawKind::Tabulated(t) => t.thetas.iter().copied().filter(|&x| x > lo && x < hi).collect(),
            _ => {
                let step = FRAC_PI_2 / self.frequency().unwrap();
                let first = (lo / step).floor() as i64 + 1;
                (first..)
                    .map(|k| k as f64 * step)
                    .take_while(|&x| x < hi)
                    .filter(|&x| x > lo)
                    .collect()
            }
        }
    }

    /// Endpoints of the maximal monotone runs covering `[lo, hi]`.
    pub fn monotone_segments(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let mut cuts = vec![lo];
        match &self.kind {
            LawKind::Tabulated(t) => {
                let mut prev_sign = 0.0;
                for x in self.breakpoints(lo, hi) {
                    let i = t.segment(x);
                    let sign_left = t.slope(i - 1).signum_or_zero();
                    let sign_right = t.slope(i).signum_or_zero();
                    if sign_left != 0.0 {
                        prev_sign = sign_left;
                    }
                    if sign_right != 0.0 && prev_sign != 0.0 && sign_right != prev_sign {
                        cuts.push(x);
                    }
                }
            }
            _ => cuts.extend(self.breakpoints(lo, hi)),
        }
        cuts.push(hi);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Direction if `p` is strictly monotone on the whole domain.
    pub fn strict_monotonicity(&self) -> Option<Monotonicity> {
        match &self.kind {
            LawKind::Tabulated(t) => {
                let (lo, hi) = (self.lo, self.hi);
                let first = t.segment(lo);
                let last = t.segment(hi - DOMAIN_SLACK.min(self.span() / 2.0));
                let slopes: Vec<f64> = (first..=last).map(|i| t.slope(i)).collect();
                if slopes.iter().all(|&s| s > 0.0) {
                    Some(Monotonicity::Increasing)
                } else if slopes.iter().all(|&s| s < 0.0) {
                    Some(Monotonicity::Decreasing)
                } else {
                    None
                }
            }
            _ => {
                if !self.breakpoints(self.lo, self.hi).is_empty() {
                    return None;
                }
                let step = FRAC_PI_2 / self.frequency().unwrap();
                let branch = (0.5 * (self.lo + self.hi) / step).floor() as i64;
                Some(if branch % 2 == 0 {
                    Monotonicity::Decreasing
                } else {
                    Monotonicity::Increasing
                })
            }
        }
    }

    /// Orientation with `p(θ) = prob`; the flag is set when `prob` lies at or
    /// beyond the range of `p` and the answer was clipped to an endpoint.
    pub fn invert(&self, prob: f64) -> Result<(f64, bool)> {
        let dir = self.strict_monotonicity().ok_or(Error::NotMonotone)?;
        let (p_lo, p_hi) = (self.prob_pair(self.lo).0, self.prob_pair(self.hi).0);
        let (p_min, p_max) = (p_lo.min(p_hi), p_lo.max(p_hi));
        let (at_min, at_max) = match dir {
            Monotonicity::Increasing => (self.lo, self.hi),
            Monotonicity::Decreasing => (self.hi, self.lo),
        };
        if prob <= p_min {
            return Ok((at_min, true));
        }
        if prob >= p_max {
            return Ok((at_max, true));
        }
        if let Some(w) = self.frequency() {
            let step = FRAC_PI_2 / w;
            let branch = (0.5 * (self.lo + self.hi) / step).floor();
            let base = (1.0 - prob).sqrt().atan2(prob.sqrt()) / w;
            let theta = if dir == Monotonicity::Decreasing {
                branch * step + base
            } else {
                (branch + 1.0) * step - base
            };
            return Ok((theta.clamp(self.lo, self.hi), false));
        }
        let (mut a, mut b) = (self.lo, self.hi);
        let increasing = dir == Monotonicity::Increasing;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let below = self.prob_pair(mid).0 < prob;
            if below == increasing {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok((0.5 * (a + b), false))
    }
}

trait SignumOrZero {
    fn signum_or_zero(self) -> f64;
}

impl SignumOrZero for f64 {
    fn signum_or_zero(self) -> f64 {
        if self > 0.0 {
            1.0
        } else if self < 0.0 {
            -1.0
        } else {
            0.0
        }
    }
}
