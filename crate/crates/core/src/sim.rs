//! Seeded Monte Carlo of yes/no trials on orientation-selective units.
//!
//! Every random draw comes from a ChaCha8 stream keyed by an explicit seed,
//! so all results are pure functions of their inputs. Replicates and matrix
//! entries derive their own seeds and may run in any order.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::distance::statistical_distance;
use crate::error::{Error, Result};
use crate::finite::{count_distinguishable, greedy_pack, theta_uncertainty, SampleSize, UncertaintyInterval, ENDPOINT_EPS};
use crate::law::{OrientationAngle, ResponseLaw};

/// Sample sizes below this use exact CDF inversion.
pub const INVERSION_LIMIT: u64 = 1_000;
/// Default number of columns in a generated sheet.
pub const DEFAULT_COLUMNS: usize = 18;

/// How the binomial count was drawn.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMethod {
    /// `p ∈ {0, 1}`: the count is fixed.
    Degenerate,
    Inversion,
    /// Normal approximation rounded to the nearest count.
    NormalApproximation,
}

fn describe_law<S: Serializer>(law: &ResponseLaw, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&law.describe())
}

/// Outcome of `n` simulated trials at a hidden orientation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: SampleSize,
    pub yes_count: u64,
    #[serde(serialize_with = "describe_law")]
    pub law: ResponseLaw,
    /// Kept for scoring only; estimators never read it.
    pub theta_true: OrientationAngle,
    pub seed: u64,
    pub method: SamplingMethod,
}

impl TrialRecord {
    pub fn frequency(&self) -> f64 {
        self.yes_count as f64 / self.n.get() as f64
    }
}

/// SplitMix64 finalizer, used to derive independent child seeds.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `index` under base seed `seed`.
pub fn replicate_seed(seed: u64, index: u64) -> u64 {
    mix_seed(seed, index.wrapping_add(1))
}

fn binomial<R: Rng>(n: u64, p: f64, rng: &mut R) -> (u64, SamplingMethod) {
    if p <= 0.0 {
        return (0, SamplingMethod::Degenerate);
    }
    if p >= 1.0 {
        return (n, SamplingMethod::Degenerate);
    }
    if n < INVERSION_LIMIT {
        // walk the CDF of the rarer outcome so the first term cannot underflow
        let flip = p > 0.5;
        let r = if flip { 1.0 - p } else { p };
        let u: f64 = rng.random();
        let ratio = r / (1.0 - r);
        let mut pmf = (1.0 - r).powi(n as i32);
        let mut cdf = pmf;
        let mut k = 0u64;
        while u > cdf && k < n {
            pmf *= ratio * (n - k) as f64 / (k + 1) as f64;
            k += 1;
            cdf += pmf;
        }
        let k = if flip { n - k } else { k };
        return (k, SamplingMethod::Inversion);
    }
    let z: f64 = rng.sample(StandardNormal);
    let mean = n as f64 * p;
    let sd = (mean * (1.0 - p)).sqrt();
    let k = (mean + sd * z + 0.5).floor().clamp(0.0, n as f64) as u64;
    (k, SamplingMethod::NormalApproximation)
}

/// Simulates `n` yes/no trials at `theta_true`.
pub fn run_trials(law: &ResponseLaw, theta_true: f64, n: SampleSize, seed: u64) -> Result<TrialRecord> {
    let p = law.probability(theta_true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (yes_count, method) = binomial(n.get(), p, &mut rng);
    Ok(TrialRecord {
        n,
        yes_count,
        law: law.clone(),
        theta_true: OrientationAngle::new(theta_true)?,
        seed,
        method,
    })
}

/// Orientation recovered from a trial record.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub p_hat: f64,
    pub interval: UncertaintyInterval,
    /// `p̂` reached the range of the law; the center sits on a domain
    /// endpoint and the half-width was taken [`ENDPOINT_EPS`] inside it.
    pub boundary: bool,
}

impl Estimate {
    pub fn theta_hat(&self) -> f64 {
        self.interval.center.radians()
    }
}

/// `θ̂ = p⁻¹(yes/n)` with the one-sigma half-width at `θ̂`.
pub fn estimate_theta(record: &TrialRecord) -> Result<Estimate> {
    let law = &record.law;
    let p_hat = record.frequency();
    let (theta_hat, clipped) = match law.invert(p_hat) {
        Err(Error::NotMonotone) => {
            let (lo, hi) = law.domain();
            return Err(Error::NonIdentifiable { lo, hi });
        }
        other => other?,
    };
    let mut interval = theta_uncertainty(law, theta_hat, record.n)?;
    let (lo, hi) = law.domain();
    let boundary = clipped || interval.degenerate;
    if boundary {
        let probe = theta_hat.clamp(lo + ENDPOINT_EPS, hi - ENDPOINT_EPS);
        let inner = theta_uncertainty(law, probe, record.n)?;
        interval.halfwidth = inner.halfwidth;
    }
    Ok(Estimate {
        p_hat,
        interval,
        boundary,
    })
}

/// Distinguishable-orientation count built from simulated records.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalDistance {
    pub n: u64,
    pub count: u64,
    /// `D̂/√n` from simulated half-widths.
    pub empirical: f64,
    /// `D/√n` from analytic half-widths.
    pub analytic: f64,
    /// Records whose estimate hit a domain endpoint.
    pub boundary_hits: u64,
}

/// Greedy packing where each candidate's half-width is estimated from a
/// fresh simulated record at that orientation.
pub fn empirical_distance(law: &ResponseLaw, theta1: f64, theta2: f64, n: SampleSize, seed: u64) -> Result<EmpiricalDistance> {
    let analytic_count = count_distinguishable(law, theta1, theta2, n)?;
    let mut boundary_hits = 0u64;
    let count = greedy_pack(theta1, theta2, |t| {
        let record = run_trials(law, t, n, mix_seed(seed, t.to_bits()))?;
        let estimate = estimate_theta(&record)?;
        boundary_hits += u64::from(estimate.boundary);
        estimate
            .interval
            .halfwidth
            .finite()
            .ok_or(Error::Singularity { theta: t })
    })?;
    Ok(EmpiricalDistance {
        n: n.get(),
        count,
        empirical: count as f64 / n.sqrt(),
        analytic: analytic_count as f64 / n.sqrt(),
        boundary_hits,
    })
}

/// Summary of repeated trials at a single orientation.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct ReplicateSummary {
    pub replicates: usize,
    pub n: u64,
    pub theta_true: f64,
    pub p_true: f64,
    pub mean_p_hat: f64,
    /// Sample standard deviation of `p̂` across replicates.
    pub std_p_hat: f64,
    /// `√(p(1−p)/n)`.
    pub predicted_std: f64,
    /// Fraction of `θ̂ ± δθ` intervals containing `θ_true`.
    pub coverage: f64,
    pub boundary_hits: usize,
}

/// Runs `replicates` independent records at `theta_true`.
pub fn replicate_study(law: &ResponseLaw, theta_true: f64, n: SampleSize, replicates: usize, seed: u64) -> Result<ReplicateSummary> {
    if replicates < 2 {
        return Err(Error::Config("at least two replicates are required".into()));
    }
    let p_true = law.probability(theta_true)?;
    let estimates = (0..replicates as u64)
        .into_par_iter()
        .map(|r| estimate_theta(&run_trials(law, theta_true, n, replicate_seed(seed, r))?))
        .collect::<Result<Vec<_>>>()?;
    let m = replicates as f64;
    let mean = estimates.iter().map(|e| e.p_hat).sum::<f64>() / m;
    let var = estimates.iter().map(|e| (e.p_hat - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let covered = estimates.iter().filter(|e| e.interval.contains(theta_true)).count();
    Ok(ReplicateSummary {
        replicates,
        n: n.get(),
        theta_true,
        p_true,
        mean_p_hat: mean,
        std_p_hat: var.sqrt(),
        predicted_std: (p_true * (1.0 - p_true) / n.get() as f64).sqrt(),
        coverage: covered as f64 / m,
        boundary_hits: estimates.iter().filter(|e| e.boundary).count(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub id: String,
    pub theta: f64,
}

#[derive(Deserialize)]
struct SheetFile {
    columns: Vec<Column>,
}

/// Columns of units sharing a preferred orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnSheet {
    columns: Vec<Column>,
    law: ResponseLaw,
}

impl ColumnSheet {
    pub fn new(columns: Vec<Column>, law: ResponseLaw) -> Result<Self> {
        if columns.len() < 2 {
            return Err(Error::InvalidSheet("at least two columns are required".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for c in &columns {
            if !seen.insert(c.id.as_str()) {
                return Err(Error::InvalidSheet(format!("duplicate column id {:?}", c.id)));
            }
            if !law.contains(c.theta) {
                let (lo, hi) = law.domain();
                return Err(Error::InvalidSheet(format!(
                    "column {:?} prefers {} outside the law domain [{lo}, {hi}]",
                    c.id, c.theta
                )));
            }
        }
        Ok(Self { columns, law })
    }

    /// `count` columns at the centers of equal cells tiling the law domain.
    pub fn uniform(law: ResponseLaw, count: usize) -> Result<Self> {
        let (lo, hi) = law.domain();
        let step = (hi - lo) / count as f64;
        let columns = (0..count)
            .map(|k| Column {
                id: format!("c{k:02}"),
                theta: lo + (k as f64 + 0.5) * step,
            })
            .collect();
        Self::new(columns, law)
    }

    /// Reads `{"columns": [{"id": .., "theta": ..}, ..]}`.
    pub fn from_json<R: Read>(reader: R, law: ResponseLaw) -> Result<Self> {
        let file: SheetFile = serde_json::from_reader(reader)?;
        Self::new(file.columns, law)
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn law(&self) -> &ResponseLaw {
        &self.law
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&serde_json::json!({ "columns": self.columns }))?)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum MatrixMode {
    Analytic,
    Empirical { n: SampleSize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryFailure {
    pub row: usize,
    pub col: usize,
    pub message: String,
}

/// Pairwise statistical distances between columns. Failed entries are
/// `None` and listed in `failures`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceMatrix {
    pub ids: Vec<String>,
    pub mode: MatrixMode,
    pub entries: Vec<Vec<Option<f64>>>,
    pub failures: Vec<EntryFailure>,
}

impl DistanceMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.entries[i][j]
    }

    /// CSV with a header row of column ids; failed entries are written as `NaN`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["id".to_string()];
        header.extend(self.ids.iter().cloned());
        w.write_record(&header).map_err(csv_error)?;
        for (id, row) in self.ids.iter().zip(&self.entries) {
            let mut record = vec![id.clone()];
            record.extend(row.iter().map(|v| v.map_or_else(|| "NaN".to_string(), |x| x.to_string())));
            w.write_record(&record).map_err(csv_error)?;
        }
        w.flush().map_err(|e| Error::io("csv output", e))?;
        Ok(())
    }
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::io("csv output", std::io::Error::other(e.to_string()))
}

/// Symmetric matrix with a zero diagonal. Only the upper triangle is
/// computed; entries run in parallel.
pub fn column_distance_matrix(sheet: &ColumnSheet, mode: MatrixMode) -> DistanceMatrix {
    let k = sheet.columns.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let values: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (sheet.columns[i].theta, sheet.columns[j].theta);
            match mode {
                MatrixMode::Analytic => statistical_distance(&sheet.law, a, b).map(|r| r.value),
                MatrixMode::Empirical { n, seed } => {
                    let pair_seed = mix_seed(seed, ((i as u64) << 32) | j as u64);
                    empirical_distance(&sheet.law, a.min(b), a.max(b), n, pair_seed).map(|r| r.empirical)
                }
            }
        })
        .collect();
    let mut entries = vec![vec![Some(0.0); k]; k];
    let mut failures = Vec::new();
    for (&(i, j), v) in pairs.iter().zip(values) {
        match v {
            Ok(x) => {
                entries[i][j] = Some(x);
                entries[j][i] = Some(x);
            }
            Err(e) => {
                entries[i][j] = None;
                entries[j][i] = None;
                failures.push(EntryFailure {
                    row: i,
                    col: j,
                    message: e.to_string(),
                });
            }
        }
    }
    DistanceMatrix {
        ids: sheet.columns.iter().map(|c| c.id.clone()).collect(),
        mode,
        entries,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn n(v: u64) -> SampleSize {
        SampleSize::new(v).unwrap()
    }

    #[test]
    fn degenerate_probabilities() {
        let law = ResponseLaw::cos2();
        let r = run_trials(&law, 0.0, n(500), 1).unwrap();
        assert_eq!(r.yes_count, 500);
        assert_eq!(r.method, SamplingMethod::Degenerate);
        assert_eq!(run_trials(&law, FRAC_PI_2, n(2000), 1).unwrap().yes_count, 0);
    }

    #[test]
    fn records_are_reproducible_and_method_is_recorded() {
        let law = ResponseLaw::cos2();
        let a = run_trials(&law, 0.6, n(999), 44).unwrap();
        assert_eq!(a, run_trials(&law, 0.6, n(999), 44).unwrap());
        assert_eq!(a.method, SamplingMethod::Inversion);
        assert_eq!(run_trials(&law, 0.6, n(1000), 44).unwrap().method, SamplingMethod::NormalApproximation);
        assert!(run_trials(&law, 2.0, n(10), 0).is_err());
    }

    fn moments(n_trials: u64, p_theta: f64, reps: u64) -> (f64, f64) {
        let law = ResponseLaw::cos2();
        let xs: Vec<f64> = (0..reps)
            .map(|r| run_trials(&law, p_theta, n(n_trials), replicate_seed(9, r)).unwrap().frequency())
            .collect();
        let m = xs.iter().sum::<f64>() / reps as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (reps as f64 - 1.0);
        (m, v)
    }

    #[test]
    fn both_samplers_match_binomial_moments() {
        for (trials, theta) in [(50, 0.3f64), (999, 1.2), (5000, 0.9), (20, 1.5)] {
            let p = theta.cos().powi(2);
            let reps = 4000;
            let (m, v) = moments(trials, theta, reps);
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((m - p).abs() < 3.0 * se / (reps as f64).sqrt(), "{trials} {theta}: {m} vs {p}");
            let rel = (v.sqrt() / se - 1.0).abs();
            assert!(rel < 0.05, "{trials} {theta}: std ratio {rel}");
        }
    }

    #[test]
    fn estimate_examples() {
        let law = ResponseLaw::cos2();
        let half = TrialRecord {
            n: n(1000),
            yes_count: 500,
            law: law.clone(),
            theta_true: OrientationAngle::new(0.7).unwrap(),
            seed: 0,
            method: SamplingMethod::Inversion,
        };
        let e = estimate_theta(&half).unwrap();
        assert!((e.theta_hat() - FRAC_PI_4).abs() < 1e-15);
        assert!(!e.boundary);
        let expected = 0.5 / (1000f64).sqrt();
        assert!((e.interval.halfwidth.finite().unwrap() - expected).abs() < 1e-12);

        let all = TrialRecord { yes_count: 1000, ..half.clone() };
        let e = estimate_theta(&all).unwrap();
        assert_eq!(e.theta_hat(), 0.0);
        assert!(e.boundary);
        assert!(e.interval.halfwidth.finite().unwrap() > 0.0);
    }

    #[test]
    fn estimate_rejects_non_monotone_law() {
        let law = ResponseLaw::cos2_scaled(3.0).unwrap().with_domain(0.0, FRAC_PI_2).unwrap();
        let r = run_trials(&law, 0.3, n(100), 0).unwrap();
        assert!(matches!(estimate_theta(&r), Err(Error::NonIdentifiable { .. })));
    }

    #[test]
    fn coverage_near_one_sigma() {
        let law = ResponseLaw::cos2();
        let s = replicate_study(&law, 0.6, n(10_000), 1000, 17).unwrap();
        assert!((s.coverage - 0.68).abs() < 0.05, "{s:?}");
        assert!((s.mean_p_hat - s.p_true).abs() < 3.0 * s.predicted_std / (1000f64).sqrt());
    }

    #[test]
    fn std_at_one_hundred_thousand() {
        let s = replicate_study(&ResponseLaw::cos2(), FRAC_PI_4, n(100_000), 2000, 3).unwrap();
        assert!((s.predicted_std - 0.00158).abs() < 5e-6);
        assert!((s.std_p_hat / s.predicted_std - 1.0).abs() < 0.05, "{s:?}");
        assert!((s.coverage - 0.683).abs() < 0.04, "{s:?}");
    }

    #[test]
    fn empirical_distance_tracks_counting() {
        let law = ResponseLaw::cos2();
        let a = empirical_distance(&law, 0.2, 1.2, n(1_000_000), 1).unwrap();
        let b = empirical_distance(&law, 0.2, 1.2, n(1_000_000), 2).unwrap();
        assert!((a.empirical - 1.0).abs() < 0.05, "{a:?}");
        assert!((a.analytic - 1.0).abs() < 0.05);
        assert!((a.empirical - b.empirical).abs() < 0.05);
        assert_eq!(empirical_distance(&law, 0.5, 0.5, n(100), 1).unwrap().count, 0);
    }

    #[test]
    fn empirical_distance_on_a_non_cosine_law() {
        // for cos² the half-width is 1/(2√n) at every θ, so estimation noise
        // cannot move the count; here it enters through θ-dependent widths
        let samples: Vec<(f64, f64)> = (0..=1570)
            .map(|i| {
                let t = i as f64 * 1e-3;
                (t, 0.1 + 0.8 * t.cos().powi(2))
            })
            .collect();
        let law = ResponseLaw::tabulated(&samples).unwrap();
        let reference = statistical_distance(&law, 0.2, 1.2).unwrap().value;
        let runs: Vec<EmpiricalDistance> = (1..=4)
            .map(|seed| empirical_distance(&law, 0.2, 1.2, n(100_000), seed).unwrap())
            .collect();
        for r in &runs {
            assert!((r.empirical - reference).abs() < 0.05, "{r:?} vs {reference}");
        }
    }

    #[test]
    fn analytic_matrix_is_pairwise_difference() {
        let law = ResponseLaw::cos2();
        let cols = [0.1, 0.4, 0.9]
            .iter()
            .enumerate()
            .map(|(i, &t)| Column { id: format!("k{i}"), theta: t })
            .collect();
        let sheet = ColumnSheet::new(cols, law).unwrap();
        let m = column_distance_matrix(&sheet, MatrixMode::Analytic);
        let th = [0.1f64, 0.4, 0.9];
        for i in 0..3 {
            for j in 0..3 {
                let v = m.get(i, j).unwrap();
                assert!((v - (th[i] - th[j]).abs()).abs() < 1e-8);
                assert_eq!(v, m.get(j, i).unwrap());
            }
            assert_eq!(m.get(i, i), Some(0.0));
        }
        assert!(m.failures.is_empty());
        // collinear triple is additive
        assert!((m.get(0, 2).unwrap() - m.get(0, 1).unwrap() - m.get(1, 2).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn repeated_orientation_gives_zero_matrix() {
        let cols = (0..3).map(|i| Column { id: format!("r{i}"), theta: 0.7 }).collect();
        let sheet = ColumnSheet::new(cols, ResponseLaw::cos2()).unwrap();
        for mode in [MatrixMode::Analytic, MatrixMode::Empirical { n: n(1000), seed: 1 }] {
            let m = column_distance_matrix(&sheet, mode);
            assert!(m.entries.iter().flatten().all(|v| *v == Some(0.0)));
        }
    }

    #[test]
    fn empirical_matrix_near_analytic() {
        let law = ResponseLaw::cos2();
        let cols = [0.3, 0.8, 1.3]
            .iter()
            .enumerate()
            .map(|(i, &t)| Column { id: format!("k{i}"), theta: t })
            .collect();
        let sheet = ColumnSheet::new(cols, law).unwrap();
        let a = column_distance_matrix(&sheet, MatrixMode::Analytic);
        let e = column_distance_matrix(&sheet, MatrixMode::Empirical { n: n(1_000_000), seed: 5 });
        for i in 0..3 {
            for j in 0..3 {
                assert!((a.get(i, j).unwrap() - e.get(i, j).unwrap()).abs() < 0.05);
            }
        }
    }

    #[test]
    fn failed_entries_are_marked() {
        let flat = ResponseLaw::tabulated(&[(0.0, 1.0), (0.5, 1.0), (1.0, 0.5), (1.5, 0.2)]).unwrap();
        let cols = vec![
            Column { id: "a".into(), theta: 0.1 },
            Column { id: "b".into(), theta: 0.4 },
            Column { id: "c".into(), theta: 0.8 },
            Column { id: "d".into(), theta: 1.2 },
        ];
        let sheet = ColumnSheet::new(cols, flat).unwrap();
        let m = column_distance_matrix(&sheet, MatrixMode::Analytic);
        assert_eq!(m.get(0, 1), None);
        assert_eq!(m.get(1, 0), None);
        assert!(m.get(2, 3).is_some());
        assert!(m.failures.iter().any(|f| (f.row, f.col) == (0, 1)));
        let mut out = Vec::new();
        m.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("id,a,b,c,d\n"));
        assert!(text.contains("NaN"));
    }

    #[test]
    fn sheet_validation_and_json() {
        let law = ResponseLaw::cos2();
        let dup = vec![
            Column { id: "a".into(), theta: 0.1 },
            Column { id: "a".into(), theta: 0.2 },
        ];
        assert!(ColumnSheet::new(dup, law.clone()).is_err());
        let outside = vec![
            Column { id: "a".into(), theta: 0.1 },
            Column { id: "b".into(), theta: 2.0 },
        ];
        assert!(ColumnSheet::new(outside, law.clone()).is_err());
        let sheet = ColumnSheet::uniform(law.clone(), DEFAULT_COLUMNS).unwrap();
        assert_eq!(sheet.columns().len(), 18);
        assert!((sheet.columns()[1].theta - sheet.columns()[0].theta - FRAC_PI_2 / 18.0).abs() < 1e-15);
        let back = ColumnSheet::from_json(sheet.to_json().unwrap().as_bytes(), law).unwrap();
        assert_eq!(back, sheet);
    }
}
