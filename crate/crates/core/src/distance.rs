//! Statistical distance between preparations of a response law: adaptive
//! quadrature of the information-metric density, a closed-form arcsine
//! oracle, the proportionality test, the Bhattacharyya angle (Wootters
//! measure) and the per-trial Fisher information.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::law::ResponseLaw;
use crate::quad::adaptive_simpson;

/// Absolute tolerance for distance quadrature.
pub const QUADRATURE_TOL: f64 = 1e-9;
/// Recursion limit for adaptive Simpson.
pub const QUADRATURE_MAX_DEPTH: u32 = 40;
/// Tolerated excursion of an arccos argument outside `[-1, 1]`.
pub const ARCCOS_SLACK: f64 = 1e-12;
/// Grid spacing used by [`check_proportionality`].
pub const PROPORTIONALITY_GRID: f64 = 1e-3;
/// Relative spread below which the metric ratio counts as constant.
pub const PROPORTIONALITY_TOL: f64 = 1e-6;

const MAX_CLOSED_FORM_SEGMENTS: usize = 1 << 20;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    ClosedForm,
    Counting,
    Hilbert,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrand_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrand_max: Option<f64>,
    pub evaluations: usize,
    pub segments: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// A computed distance in radians together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceReport {
    pub value: f64,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

/// `arccos(x)` with `x` clamped to `[-1, 1]` when it overshoots by at most
/// [`ARCCOS_SLACK`].
pub fn acos_clamped(x: f64) -> Result<f64> {
    if !(-1.0 - ARCCOS_SLACK..=1.0 + ARCCOS_SLACK).contains(&x) {
        return Err(Error::ArccosDomain(x));
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

/// Angle between two non-negative unit amplitude vectors, `arccos Σ aᵢbᵢ`.
///
/// Close to zero the arccos is ill-conditioned, so for affinities above 1/2
/// the same angle is computed through the chord, `2·asin(‖a − b‖/2)`.
pub fn bhattacharyya_angle(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(a.len(), b.len()));
    }
    let affinity: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    if affinity > 1.0 + ARCCOS_SLACK || affinity.is_nan() {
        return Err(Error::ArccosDomain(affinity));
    }
    if affinity > 0.5 {
        let chord = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        return Ok(2.0 * (0.5 * chord).min(1.0).asin());
    }
    acos_clamped(affinity.max(0.0))
}

/// Statistical distance by adaptive quadrature of `|p'| / (2√(p(1−p)))`.
///
/// The range is cut at the law's breakpoints and each piece is mapped through
/// `θ = u + (v − u)·sin²φ`, which absorbs the inverse-square-root endpoint
/// singularities where `p` reaches 0 or 1.
pub fn statistical_distance(law: &ResponseLaw, theta1: f64, theta2: f64) -> Result<DistanceReport> {
    let t1 = law.check(theta1)?;
    let t2 = law.check(theta2)?;
    let (a, b) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    let mut diag = Diagnostics {
        error_estimate: Some(0.0),
        ..Default::default()
    };
    if a == b {
        return Ok(DistanceReport {
            value: 0.0,
            method: Method::Quadrature,
            diagnostics: diag,
        });
    }
    let mut cuts = vec![a];
    cuts.extend(law.breakpoints(a, b));
    cuts.push(b);
    let (mut lo_f, mut hi_f) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut total = 0.0;
    for piece in cuts.windows(2) {
        let (u, v) = (piece[0], piece[1]);
        ensure_identifiable(law, u, v)?;
        let anchor = 0.5 * (u + v);
        let len = v - u;
        // None where p(1 - p) = 0
        let density = |theta: f64| -> (Option<f64>, f64) {
            let (p, q) = law.prob_pair(theta);
            let slope = law.piece_slope(theta, anchor).abs();
            let pq = p * q;
            if pq > 0.0 {
                let f = slope / (2.0 * pq.sqrt());
                (Some(f), f)
            } else if slope == 0.0 {
                (None, 0.0)
            } else {
                (None, f64::INFINITY)
            }
        };
        let mut unresolved = 0usize;
        let mut weighted = |phi: f64| -> f64 {
            let eval = |phi: f64| {
                let s = phi.sin();
                let theta = (u + len * s * s).min(v);
                let (f, raw) = density(theta);
                (f, raw * len * (2.0 * phi).sin())
            };
            let (mut f, mut g) = eval(phi);
            if !g.is_finite() {
                let nudged = if phi < 0.25 * std::f64::consts::PI {
                    phi + 1e-6
                } else {
                    phi - 1e-6
                };
                (f, g) = eval(nudged);
            }
            if let Some(f) = f {
                lo_f = lo_f.min(f);
                hi_f = hi_f.max(f);
            }
            if !g.is_finite() {
                unresolved += 1;
                return 0.0;
            }
            g
        };
        let q = adaptive_simpson(
            &mut weighted,
            0.0,
            FRAC_PI_2,
            QUADRATURE_TOL * len / (b - a),
            QUADRATURE_MAX_DEPTH,
        );
        if unresolved > 0 {
            diag.warnings
                .push(format!("{unresolved} singular evaluations dropped on [{u}, {v}]"));
        }
        total += q.value;
        diag.evaluations += q.evaluations;
        *diag.error_estimate.as_mut().unwrap() += q.error_estimate;
        if q.depth_limited {
            diag.warnings
                .push(format!("depth limit reached on [{u}, {v}]"));
        }
        diag.segments += 1;
    }
    if lo_f.is_finite() {
        diag.integrand_min = Some(lo_f);
        diag.integrand_max = Some(hi_f);
    }
    Ok(DistanceReport {
        value: total.max(0.0),
        method: Method::Quadrature,
        diagnostics: diag,
    })
}

fn ensure_identifiable(law: &ResponseLaw, u: f64, v: f64) -> Result<()> {
    let degenerate = |t: f64| {
        let (p, q) = law.prob_pair(t);
        p * q == 0.0
    };
    if degenerate(u) && degenerate(v) && degenerate(0.5 * (u + v)) {
        return Err(Error::NonIdentifiable { lo: u, hi: v });
    }
    Ok(())
}

/// `arcsin √p`, evaluated as `atan2(√p, √(1−p))` for accuracy near `p = 1`.
fn arcsine_coordinate(law: &ResponseLaw, theta: f64) -> f64 {
    let (p, q) = law.prob_pair(theta);
    p.sqrt().atan2(q.sqrt())
}

/// Statistical distance as the total variation of `arcsin √p` over the
/// monotone segments of `[θ1, θ2]`. Independent of the quadrature path.
pub fn closed_form_distance(law: &ResponseLaw, theta1: f64, theta2: f64) -> Result<DistanceReport> {
    let t1 = law.check(theta1)?;
    let t2 = law.check(theta2)?;
    let (a, b) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    if a == b {
        return Ok(DistanceReport {
            value: 0.0,
            method: Method::ClosedForm,
            diagnostics: Diagnostics::default(),
        });
    }
    let segments = law.monotone_segments(a, b);
    if segments.len() > MAX_CLOSED_FORM_SEGMENTS {
        let mut report = statistical_distance(law, a, b)?;
        report.diagnostics.warnings.push(format!(
            "closed form needs {} monotone segments; fell back to quadrature",
            segments.len()
        ));
        return Ok(report);
    }
    let value: f64 = segments
        .iter()
        .map(|&(u, v)| (arcsine_coordinate(law, v) - arcsine_coordinate(law, u)).abs())
        .sum();
    Ok(DistanceReport {
        value,
        method: Method::ClosedForm,
        diagnostics: Diagnostics {
            segments: segments.len(),
            evaluations: 2 * segments.len(),
            ..Default::default()
        },
    })
}

/// Outcome of testing `|dp/dθ| ∝ √(p(1−p))` over the domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Proportionality {
    pub proportional: bool,
    /// Ratio of statistical to angular distance, `mean(r)/2`. Meaningful only
    /// when `proportional` holds.
    pub constant: f64,
    pub max_relative_deviation: f64,
    pub samples: usize,
    /// Grid points skipped because `p(1−p) = 0` there.
    pub excluded: usize,
}

pub fn check_proportionality(law: &ResponseLaw) -> Result<Proportionality> {
    let (lo, hi) = law.domain();
    let mut grid: Vec<f64> = (1..)
        .map(|k| lo + k as f64 * PROPORTIONALITY_GRID)
        .take_while(|&t| t < hi)
        .collect();
    if grid.is_empty() {
        grid.push(0.5 * (lo + hi));
    }
    let mut ratios = Vec::with_capacity(grid.len());
    let mut excluded = 0;
    for &t in &grid {
        let (p, q) = law.prob_pair(t);
        let slope = law.derivative(t)?.value;
        let r = slope.abs() / (p * q).sqrt();
        if p * q > 0.0 && r.is_finite() {
            ratios.push(r);
        } else {
            excluded += 1;
        }
    }
    if ratios.is_empty() {
        return Ok(Proportionality {
            proportional: false,
            constant: f64::NAN,
            max_relative_deviation: f64::NAN,
            samples: 0,
            excluded,
        });
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let (proportional, deviation) = if mean == 0.0 {
        (true, 0.0)
    } else {
        let dev = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max) / mean;
        (dev < PROPORTIONALITY_TOL, dev)
    };
    Ok(Proportionality {
        proportional,
        constant: mean / 2.0,
        max_relative_deviation: deviation,
        samples: ratios.len(),
        excluded,
    })
}

/// A finite-outcome probability distribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DiscreteDistribution(Vec<f64>);

impl DiscreteDistribution {
    pub const NORMALIZATION_TOL: f64 = 1e-12;

    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        if let Some(bad) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("probability {bad} is not a non-negative number")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > Self::NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(Self(probs))
    }

    /// The yes/no pair of a response law at `theta`.
    pub fn bernoulli(law: &ResponseLaw, theta: f64) -> Result<Self> {
        let theta = law.check(theta)?;
        let (p, q) = law.prob_pair(theta);
        Self::new(vec![p, q])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Wootters measure `W = arccos Σ √(PᵢQᵢ)`, the Bhattacharyya angle.
pub fn wootters_measure(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    let a: Vec<f64> = p.0.iter().map(|x| x.sqrt()).collect();
    let b: Vec<f64> = q.0.iter().map(|x| x.sqrt()).collect();
    bhattacharyya_angle(&a, &b)
}

/// Per-trial Fisher information `(dp/dθ)² / (p(1−p))` of the yes/no outcome.
///
/// Over `n` independent trials the information is `n` times this value.
pub fn fisher_information(law: &ResponseLaw, theta: f64) -> Result<f64> {
    let theta = law.check(theta)?;
    let (p, q) = law.prob_pair(theta);
    if p * q == 0.0 {
        return Err(Error::SingularPoint { theta });
    }
    let slope = law.slope_unchecked(theta).value;
    Ok(slope * slope / (p * q))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FisherLimit {
    pub delta_theta: f64,
    pub wootters: f64,
    pub information: f64,
    /// `W² / ((Δθ²/4)·I)`, tending to 1 as `Δθ → 0`.
    pub ratio: f64,
}

pub fn fisher_limit_ratio(law: &ResponseLaw, theta: f64, delta_theta: f64) -> Result<FisherLimit> {
    if delta_theta == 0.0 || !delta_theta.is_finite() {
        return Err(Error::ZeroSeparation);
    }
    let information = fisher_information(law, theta)?;
    if information == 0.0 {
        return Err(Error::Singularity { theta });
    }
    let p = DiscreteDistribution::bernoulli(law, theta)?;
    let q = DiscreteDistribution::bernoulli(law, theta + delta_theta)?;
    let w = wootters_measure(&p, &q)?;
    Ok(FisherLimit {
        delta_theta,
        wootters: w,
        information,
        ratio: w * w / (0.25 * delta_theta * delta_theta * information),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn tabulate(f: impl Fn(f64) -> f64, step: f64, hi: f64) -> ResponseLaw {
        let n = (hi / step + 1e-9).floor() as usize;
        let samples: Vec<(f64, f64)> = (0..=n).map(|i| (i as f64 * step, f(i as f64 * step))).collect();
        ResponseLaw::tabulated(&samples).unwrap()
    }

    #[test]
    fn cos2_quarter_turn() {
        let law = ResponseLaw::cos2();
        let d = statistical_distance(&law, 0.0, FRAC_PI_4).unwrap();
        assert!((d.value - FRAC_PI_4).abs() < 1e-9, "{}", d.value);
        assert!(d.diagnostics.error_estimate.unwrap() < 1e-9);
        assert_eq!(statistical_distance(&law, 0.3, 0.3).unwrap().value, 0.0);
    }

    #[test]
    fn scaled_cos2_doubles_distance() {
        let law = ResponseLaw::cos2_scaled(2.0).unwrap();
        let q = statistical_distance(&law, 0.0, FRAC_PI_4).unwrap();
        let c = closed_form_distance(&law, 0.0, FRAC_PI_4).unwrap();
        assert!((q.value - FRAC_PI_2).abs() < 1e-9);
        assert!((c.value - FRAC_PI_2).abs() < 1e-12);
        let d = q.diagnostics;
        assert!((d.integrand_min.unwrap() - 2.0).abs() < 1e-9);
        assert!((d.integrand_max.unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn closed_form_values() {
        let law = ResponseLaw::cos2();
        assert!((closed_form_distance(&law, 0.0, FRAC_PI_2).unwrap().value - FRAC_PI_2).abs() < 1e-15);
        let flat = ResponseLaw::tabulated(&[(0.0, 0.5), (0.7, 0.5), (1.4, 0.5)]).unwrap();
        assert_eq!(closed_form_distance(&flat, 0.1, 1.3).unwrap().value, 0.0);
        assert_eq!(statistical_distance(&flat, 0.1, 1.3).unwrap().value, 0.0);
    }

    #[test]
    fn closed_form_crosses_folds() {
        let law = ResponseLaw::cos2_scaled(3.0).unwrap().with_domain(0.0, FRAC_PI_2).unwrap();
        let c = closed_form_distance(&law, 0.1, 1.5).unwrap();
        let q = statistical_distance(&law, 0.1, 1.5).unwrap();
        assert!((c.value - 3.0 * 1.4).abs() < 1e-12);
        assert!((q.value - c.value).abs() < 1e-8);
        assert_eq!(c.diagnostics.segments, 3);
    }

    #[test]
    fn tabulated_laws_agree_between_routes() {
        let law = tabulate(|t| t.cos().powi(4), 1e-3, FRAC_PI_2);
        let (lo, hi) = law.domain();
        let q = statistical_distance(&law, lo, hi).unwrap();
        let c = closed_form_distance(&law, lo, hi).unwrap();
        assert!((q.value - c.value).abs() < 1e-8, "{} vs {}", q.value, c.value);
        let d = statistical_distance(&law, 0.2, 0.9).unwrap().value;
        let e = closed_form_distance(&law, 0.2, 0.9).unwrap().value;
        assert!((d - e).abs() < 1e-8);
    }

    #[test]
    fn degenerate_segment_is_rejected() {
        let law = ResponseLaw::tabulated(&[(0.0, 1.0), (0.5, 1.0), (1.0, 0.3)]).unwrap();
        assert!(matches!(
            statistical_distance(&law, 0.0, 0.8),
            Err(Error::NonIdentifiable { .. })
        ));
    }

    #[test]
    fn proportionality_cases() {
        let p = check_proportionality(&ResponseLaw::cos2()).unwrap();
        assert!(p.proportional);
        assert!((p.constant - 1.0).abs() < 1e-6);
        let p2 = check_proportionality(&ResponseLaw::cos2_scaled(2.0).unwrap()).unwrap();
        assert!(p2.proportional);
        assert!((p2.constant - 2.0).abs() < 1e-6);
        let quartic = tabulate(|t| t.cos().powi(4), 1e-3, FRAC_PI_2);
        assert!(!check_proportionality(&quartic).unwrap().proportional);
    }

    #[test]
    fn quartic_ratio_varies_between_two_points() {
        // r = |p'|/sqrt(p(1-p)) for p = cos^4 at two interior points
        let r = |t: f64| {
            let p = t.cos().powi(4);
            4.0 * t.cos().powi(3) * t.sin() / (p * (1.0 - p)).sqrt()
        };
        assert!((r(0.3) - r(1.2)).abs() > 0.1);
    }

    #[test]
    fn wootters_basic() {
        let p = DiscreteDistribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(wootters_measure(&p, &p).unwrap(), 0.0);
        let a = DiscreteDistribution::new(vec![0.5, 0.5, 0.0]).unwrap();
        let b = DiscreteDistribution::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert!((wootters_measure(&a, &b).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let two = DiscreteDistribution::new(vec![0.5, 0.5]).unwrap();
        assert!(matches!(wootters_measure(&a, &two), Err(Error::DimensionMismatch(3, 2))));
        assert!(DiscreteDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(DiscreteDistribution::new(vec![-0.1, 1.1]).is_err());
    }

    #[test]
    fn wootters_of_cos2_pairs_is_the_angle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let law = ResponseLaw::cos2();
        for _ in 0..20 {
            let t: f64 = rng.random_range(0.0..FRAC_PI_2);
            let dt: f64 = rng.random_range(0.0..(FRAC_PI_2 - t));
            let w = wootters_measure(
                &DiscreteDistribution::bernoulli(&law, t).unwrap(),
                &DiscreteDistribution::bernoulli(&law, t + dt).unwrap(),
            )
            .unwrap();
            assert!((w - dt).abs() < 1e-12, "{w} vs {dt}");
        }
    }

    #[test]
    fn fisher_values() {
        let law = ResponseLaw::cos2();
        for t in [0.1, 0.4, 0.7, 1.0, 1.4] {
            assert!((fisher_information(&law, t).unwrap() - 4.0).abs() < 1e-12);
        }
        for w in [0.5, 2.0, 3.0] {
            let law = ResponseLaw::cos2_scaled(w).unwrap();
            let (lo, hi) = law.domain();
            let t = 0.37 * (lo + hi);
            assert!((fisher_information(&law, t).unwrap() - 4.0 * w * w).abs() < 1e-10);
        }
        let flat = ResponseLaw::tabulated(&[(0.0, 0.5), (0.7, 0.5), (1.4, 0.5)]).unwrap();
        assert_eq!(fisher_information(&flat, 0.3).unwrap(), 0.0);
        assert!(matches!(fisher_information(&law, 0.0), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn fisher_limit_cases() {
        let r = fisher_limit_ratio(&ResponseLaw::cos2(), 0.7, 1e-3).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-6);
        let r2 = fisher_limit_ratio(&ResponseLaw::cos2_scaled(2.0).unwrap(), 0.3, 1e-3).unwrap();
        assert!((r2.ratio - 1.0).abs() < 1e-2);
        assert!(matches!(fisher_limit_ratio(&ResponseLaw::cos2(), 0.7, 0.0), Err(Error::ZeroSeparation)));
    }

    #[test]
    fn fisher_limit_error_shrinks_for_tabulated_law() {
        let law = tabulate(|t| 0.1 + 0.8 * t.cos().powi(2), 1e-3, FRAC_PI_2);
        let errs: Vec<f64> = [0.04, 0.02, 0.01]
            .iter()
            .map(|&d| (fisher_limit_ratio(&law, 0.5, d).unwrap().ratio - 1.0).abs())
            .collect();
        assert!(errs[0] / errs[2] >= 3.0, "{errs:?}");
        assert!(errs[0] > errs[1] && errs[1] > errs[2]);
    }

    #[test]
    fn derivative_integrates_to_zero_over_a_period() {
        // cos²(2θ) completes a full period on [0, π/2]
        let law = ResponseLaw::cos2_scaled(2.0).unwrap().with_domain(0.0, FRAC_PI_2).unwrap();
        let first = adaptive_simpson(|t| law.derivative(t).unwrap().value, 0.0, FRAC_PI_2, 1e-12, 40);
        assert!(first.value.abs() < 1e-9);
        // second derivative of cos²(2θ) is -8 cos(4θ)
        let second = adaptive_simpson(|t| -8.0 * (4.0 * t).cos(), 0.0, FRAC_PI_2, 1e-12, 40);
        assert!(second.value.abs() < 1e-9);
        let law1 = ResponseLaw::cos2();
        let over_pi = adaptive_simpson(|t| law1.slope_unchecked(t).value, 0.0, PI, 1e-12, 40);
        assert!(over_pi.value.abs() < 1e-9);
    }

    #[test]
    fn acos_slack() {
        assert_eq!(acos_clamped(1.0 + 5e-13).unwrap(), 0.0);
        assert!(matches!(acos_clamped(1.0 + 1e-9), Err(Error::ArccosDomain(_))));
    }

    proptest! {
        #[test]
        fn additive_over_monotone_laws(a in 0.0..0.5f64, b in 0.5..1.0f64, c in 1.0..FRAC_PI_2) {
            for law in [ResponseLaw::cos2(), tabulate(|t| t.cos().powi(4), 1e-2, FRAC_PI_2)] {
                let (_, hi) = law.domain();
                let c = c.min(hi);
                let d13 = statistical_distance(&law, a, c).unwrap().value;
                let d12 = statistical_distance(&law, a, b).unwrap().value;
                let d23 = statistical_distance(&law, b, c).unwrap().value;
                prop_assert!((d13 - d12 - d23).abs() < 2.0 * QUADRATURE_TOL);
            }
        }

        #[test]
        fn quadrature_matches_closed_form(a in 0.0..FRAC_PI_2, b in 0.0..FRAC_PI_2, w in 0.5..3.0f64) {
            let law = ResponseLaw::cos2_scaled(w).unwrap();
            let (_, hi) = law.domain();
            let (a, b) = (a.min(hi), b.min(hi));
            let q = statistical_distance(&law, a, b).unwrap().value;
            let c = closed_form_distance(&law, a, b).unwrap().value;
            prop_assert!((q - c).abs() < 1e-8);
            prop_assert!((c - w * (a - b).abs()).abs() < 1e-12);
        }

        #[test]
        fn proportional_iff_linear(a in 0.05..1.5f64, b in 0.05..1.5f64) {
            let laws = [
                ResponseLaw::cos2(),
                ResponseLaw::cos2_scaled(0.9).unwrap(),
                tabulate(|t| t.cos().powi(4), 1e-3, FRAC_PI_2),
                tabulate(|t| 0.1 + 0.8 * t.cos().powi(2), 1e-3, FRAC_PI_2),
            ];
            for law in laws {
                let check = check_proportionality(&law).unwrap();
                let d = statistical_distance(&law, a, b).unwrap().value;
                let linear = (d - check.constant * (a - b).abs()).abs() < 1e-8;
                if check.proportional {
                    prop_assert!(linear);
                } else if (a - b).abs() > 0.05 {
                    prop_assert!(!linear);
                }
            }
        }

        #[test]
        fn wootters_symmetric_and_bounded(x in proptest::collection::vec(0.0..1.0f64, 4), y in proptest::collection::vec(0.0..1.0f64, 4)) {
            let norm = |v: &[f64]| {
                let s: f64 = v.iter().sum::<f64>() + 1e-9;
                let mut out: Vec<f64> = v.iter().map(|t| (t + 1e-9 / 4.0) / s).collect();
                let r: f64 = out[..3].iter().sum();
                out[3] = (1.0 - r).max(0.0);
                DiscreteDistribution::new(out).unwrap()
            };
            let (p, q) = (norm(&x), norm(&y));
            let pq = wootters_measure(&p, &q).unwrap();
            let qp = wootters_measure(&q, &p).unwrap();
            prop_assert!((pq - qp).abs() < 1e-15);
            prop_assert!((0.0..=FRAC_PI_2 + 1e-15).contains(&pq));
            prop_assert_eq!(wootters_measure(&p, &p).unwrap(), 0.0);
        }
    }
}
