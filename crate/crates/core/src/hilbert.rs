//! Pure-state geometry.
//!
//! An analyzer with orthonormal eigenbasis `{φᵢ}` turns a preparation `ψ`
//! into the outcome distribution `|⟨φᵢ, ψ⟩|²`. The device-dependent distance
//! is the Bhattacharyya angle between the two outcome distributions; its
//! maximum over analyzers is the ray angle `arccos |⟨ψ1, ψ2⟩|`, attained by
//! any basis containing one of the two states.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::{acos_clamped, bhattacharyya_angle};
use crate::error::{Error, Result};

/// Tolerance on `Σ|aᵢ|² = 1` and on basis orthogonality.
pub const NORM_TOL: f64 = 1e-12;

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// A unit vector of complex amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalized to within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall(amplitudes.len()));
        }
        let n2 = norm_sqr(&amplitudes);
        if !n2.is_finite() || (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { amplitudes })
    }

    /// Scales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::DimensionTooSmall(amplitudes.len()));
        }
        let n = norm_sqr(&amplitudes).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized(n * n));
        }
        amplitudes.iter_mut().for_each(|a| *a /= n);
        Ok(Self { amplitudes })
    }

    /// Real two-dimensional state `(cos θ, sin θ)`.
    pub fn real_2d(theta: f64) -> Self {
        Self {
            amplitudes: vec![Complex64::new(theta.cos(), 0.0), Complex64::new(theta.sin(), 0.0)],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self, other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        same_dim(self.dim(), other.dim())?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn with_phase(&self, alpha: f64) -> Self {
        let u = Complex64::from_polar(1.0, alpha);
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * u).collect(),
        }
    }
}

impl TryFrom<Vec<[f64; 2]>> for PureState {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        PureState::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<PureState> for Vec<[f64; 2]> {
    fn from(s: PureState) -> Self {
        s.amplitudes.into_iter().map(|a| [a.re, a.im]).collect()
    }
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(a, b));
    }
    Ok(())
}

/// Orthonormal, non-degenerate eigenbasis of an analyzing device.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PureState>", into = "Vec<PureState>")]
pub struct MeasurementBasis {
    states: Vec<PureState>,
}

impl MeasurementBasis {
    pub fn new(states: Vec<PureState>) -> Result<Self> {
        let dim = states.first().map_or(0, PureState::dim);
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if states.len() != dim {
            return Err(Error::DimensionMismatch(states.len(), dim));
        }
        let mut worst = 0.0f64;
        for (i, a) in states.iter().enumerate() {
            same_dim(a.dim(), dim)?;
            for b in &states[i + 1..] {
                worst = worst.max(inner(&a.amplitudes, &b.amplitudes).norm());
            }
        }
        if worst > NORM_TOL {
            return Err(Error::NotOrthonormal(worst));
        }
        Ok(Self { states })
    }

    /// The standard basis `e₁ … e_N`.
    pub fn computational(dim: usize) -> Result<Self> {
        let states = (0..dim)
            .map(|k| {
                let mut v = vec![Complex64::new(0.0, 0.0); dim];
                v[k] = Complex64::new(1.0, 0.0);
                PureState::new(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(states)
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    /// Outcome probabilities `|⟨φᵢ, ψ⟩|²`.
    pub fn outcome_probabilities(&self, psi: &PureState) -> Result<Vec<f64>> {
        same_dim(self.dim(), psi.dim())?;
        Ok(self
            .states
            .iter()
            .map(|phi| inner(&phi.amplitudes, &psi.amplitudes).norm_sqr())
            .collect())
    }

    /// `U ψ` where the columns of `U` are the basis vectors.
    pub fn apply(&self, psi: &PureState) -> Result<PureState> {
        same_dim(self.dim(), psi.dim())?;
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (coef, col) in psi.amplitudes.iter().zip(&self.states) {
            for (o, c) in out.iter_mut().zip(&col.amplitudes) {
                *o += coef * c;
            }
        }
        PureState::normalized(out)
    }
}

impl TryFrom<Vec<PureState>> for MeasurementBasis {
    type Error = Error;

    fn try_from(states: Vec<PureState>) -> Result<Self> {
        MeasurementBasis::new(states)
    }
}

impl From<MeasurementBasis> for Vec<PureState> {
    fn from(b: MeasurementBasis) -> Self {
        b.states
    }
}

/// Ray angle `arccos |⟨ψ1, ψ2⟩|`.
pub fn hilbert_distance(psi1: &PureState, psi2: &PureState) -> Result<f64> {
    let z = psi1.inner(psi2)?;
    let overlap = z.norm();
    if overlap > 1.0 + crate::distance::ARCCOS_SLACK {
        return Err(Error::ArccosDomain(overlap));
    }
    if overlap > 0.5 {
        // chord between ψ1 and the phase-aligned ψ2
        let u = z.conj() / overlap;
        let chord = psi1
            .amplitudes
            .iter()
            .zip(&psi2.amplitudes)
            .map(|(a, b)| (a - u * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        return Ok(2.0 * (0.5 * chord).min(1.0).asin());
    }
    acos_clamped(overlap)
}

/// Statistical distance seen through analyzer `basis`:
/// `arccos Σᵢ |⟨φᵢ, ψ1⟩|·|⟨φᵢ, ψ2⟩|`.
pub fn device_distance(basis: &MeasurementBasis, psi1: &PureState, psi2: &PureState) -> Result<f64> {
    same_dim(psi1.dim(), psi2.dim())?;
    same_dim(basis.dim(), psi1.dim())?;
    let a: Vec<f64> = basis.states.iter().map(|phi| inner(&phi.amplitudes, &psi1.amplitudes).norm()).collect();
    let b: Vec<f64> = basis.states.iter().map(|phi| inner(&phi.amplitudes, &psi2.amplitudes).norm()).collect();
    bhattacharyya_angle(&a, &b)
}

fn gaussian_vector<R: Rng>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Haar-random state drawn from `rng`.
pub fn random_state_with<R: Rng>(dim: usize, rng: &mut R) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    loop {
        let v = gaussian_vector(dim, rng);
        if norm_sqr(&v) > 1e-300 {
            return PureState::normalized(v);
        }
    }
}

pub fn random_state(dim: usize, seed: u64) -> Result<PureState> {
    random_state_with(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Extends `leading` to an orthonormal basis with Gram–Schmidt over random
/// completion vectors.
pub fn complete_basis_with<R: Rng>(leading: &[&PureState], dim: usize, rng: &mut R) -> Result<MeasurementBasis> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let mut vecs: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    let push = |v: Vec<Complex64>, vecs: &mut Vec<Vec<Complex64>>| -> bool {
        let mut v = v;
        let before = norm_sqr(&v).sqrt();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for u in vecs.iter() {
                let c = inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= c * ui;
                }
            }
        }
        let n = norm_sqr(&v).sqrt();
        if !(n > 1e-8 * before) {
            return false;
        }
        v.iter_mut().for_each(|x| *x /= n);
        vecs.push(v);
        true
    };
    for s in leading {
        same_dim(s.dim(), dim)?;
        push(s.amplitudes.clone(), &mut vecs);
    }
    while vecs.len() < dim {
        push(gaussian_vector(dim, rng), &mut vecs);
    }
    MeasurementBasis::new(
        vecs.into_iter()
            .map(|amplitudes| PureState { amplitudes })
            .collect(),
    )
}

pub fn random_basis_with<R: Rng>(dim: usize, rng: &mut R) -> Result<MeasurementBasis> {
    complete_basis_with(&[], dim, rng)
}

pub fn random_basis(dim: usize, seed: u64) -> Result<MeasurementBasis> {
    random_basis_with(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Settings for the numeric basis search.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct OptimizerSettings {
    pub restarts: usize,
    /// Sweeps stop once no Givens rotation moves by more than this angle.
    pub step_tol: f64,
    pub max_sweeps: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            restarts: 8,
            step_tol: 1e-9,
            max_sweeps: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticRoute {
    pub basis: MeasurementBasis,
    pub d_a: f64,
    /// `d_A` of the completion containing `ψ1`.
    pub aligned_with_first: f64,
    /// `d_A` of the completion containing `ψ2`.
    pub aligned_with_second: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericRoute {
    pub basis: MeasurementBasis,
    pub d_a: f64,
    pub converged: bool,
    pub sweeps: usize,
    pub restarts: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisOptimum {
    pub hilbert: f64,
    pub analytic: AnalyticRoute,
    pub numeric: NumericRoute,
    /// Larger of the two routes.
    pub d_a_max: f64,
}

impl BasisOptimum {
    pub fn best_basis(&self) -> &MeasurementBasis {
        if self.numeric.d_a > self.analytic.d_a {
            &self.numeric.basis
        } else {
            &self.analytic.basis
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Searches for the analyzer that best separates `ψ1` from `ψ2`.
///
/// Two independent routes are reported. The analytic route completes `ψ1`
/// (and separately `ψ2`) to a basis. The numeric route runs block coordinate
/// descent on the affinity `Σ|⟨φᵢ,ψ1⟩||⟨φᵢ,ψ2⟩|` over complex Givens
/// rotations `(θ, φ)` of each basis pair, from `restarts` random bases; the
/// restarts run in parallel and the best one wins.
pub fn optimize_basis(psi1: &PureState, psi2: &PureState, settings: OptimizerSettings, seed: u64) -> Result<BasisOptimum> {
    same_dim(psi1.dim(), psi2.dim())?;
    let dim = psi1.dim();
    let hilbert = hilbert_distance(psi1, psi2)?;

    let mut rng = rng_for(seed, 0);
    let first = complete_basis_with(&[psi1], dim, &mut rng)?;
    let second = complete_basis_with(&[psi2], dim, &mut rng)?;
    let d_first = device_distance(&first, psi1, psi2)?;
    let d_second = device_distance(&second, psi1, psi2)?;
    let analytic = if d_second > d_first {
        AnalyticRoute {
            basis: second,
            d_a: d_second,
            aligned_with_first: d_first,
            aligned_with_second: d_second,
        }
    } else {
        AnalyticRoute {
            basis: first,
            d_a: d_first,
            aligned_with_first: d_first,
            aligned_with_second: d_second,
        }
    };

    let restarts = settings.restarts.max(1);
    let runs = (0..restarts)
        .into_par_iter()
        .map(|r| -> Result<(MeasurementBasis, f64, bool, usize)> {
            let start = random_basis_with(dim, &mut rng_for(seed, r as u64 + 1))?;
            let (basis, converged, sweeps) = GivensSearch::new(start, psi1, psi2).run(settings);
            let d = device_distance(&basis, psi1, psi2)?;
            Ok((basis, d, converged, sweeps))
        })
        .collect::<Result<Vec<_>>>()?;
    // first maximum wins, so the merge is independent of scheduling
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.1 > runs[best].1 {
            best = i;
        }
    }
    let (basis, d_a, converged, sweeps) = runs.into_iter().nth(best).unwrap();
    let numeric = NumericRoute {
        basis,
        d_a,
        converged,
        sweeps,
        restarts,
    };
    let d_a_max = analytic.d_a.max(numeric.d_a);
    Ok(BasisOptimum {
        hilbert,
        analytic,
        numeric,
        d_a_max,
    })
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const GRID: usize = 12;

struct GivensSearch {
    vecs: Vec<Vec<Complex64>>,
    psi1: Vec<Complex64>,
    psi2: Vec<Complex64>,
    x: Vec<Complex64>,
    y: Vec<Complex64>,
}

impl GivensSearch {
    fn new(start: MeasurementBasis, psi1: &PureState, psi2: &PureState) -> Self {
        let vecs: Vec<Vec<Complex64>> = start.states.into_iter().map(|s| s.amplitudes).collect();
        let x = vecs.iter().map(|v| inner(v, &psi1.amplitudes)).collect();
        let y = vecs.iter().map(|v| inner(v, &psi2.amplitudes)).collect();
        Self {
            vecs,
            psi1: psi1.amplitudes.clone(),
            psi2: psi2.amplitudes.clone(),
            x,
            y,
        }
    }

    /// Pair affinity after rotating `(φᵢ, φⱼ)` by `(θ, φ)`.
    fn pair_cost(&self, i: usize, j: usize, theta: f64, phase: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, phase);
        let xi = self.x[i] * c + e.conj() * s * self.x[j];
        let xj = -e * s * self.x[i] + self.x[j] * c;
        let yi = self.y[i] * c + e.conj() * s * self.y[j];
        let yj = -e * s * self.y[i] + self.y[j] * c;
        xi.norm() * yi.norm() + xj.norm() * yj.norm()
    }

    fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
        let mut c = b - GOLDEN * (b - a);
        let mut d = a + GOLDEN * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        while (b - a).abs() > tol {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLDEN * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (b - a);
                fd = f(d);
            }
        }
        if fc < fd {
            (c, fc)
        } else {
            (d, fd)
        }
    }

    /// Best `(θ, φ)` for the pair: coarse grid, then alternating golden
    /// section on each parameter.
    fn optimize_pair(&self, i: usize, j: usize) -> (f64, f64, f64) {
        let theta_step = std::f64::consts::FRAC_PI_2 / GRID as f64;
        let phase_step = std::f64::consts::TAU / GRID as f64;
        let mut best = (0.0, 0.0, self.pair_cost(i, j, 0.0, 0.0));
        for a in 0..GRID {
            for b in 0..GRID {
                let (t, p) = (a as f64 * theta_step, b as f64 * phase_step);
                let cost = self.pair_cost(i, j, t, p);
                if cost < best.2 {
                    best = (t, p, cost);
                }
            }
        }
        let (mut t, mut p, mut cost) = best;
        let (mut wt, mut wp) = (theta_step, phase_step);
        for _ in 0..4 {
            let (nt, ct) = Self::golden(|v| self.pair_cost(i, j, v, p), t - wt, t + wt, 1e-11);
            if ct < cost {
                t = nt;
                cost = ct;
            }
            let (np, cp) = Self::golden(|v| self.pair_cost(i, j, t, v), p - wp, p + wp, 1e-11);
            if cp < cost {
                p = np;
                cost = cp;
            }
            wt *= 0.5;
            wp *= 0.5;
        }
        (t, p, cost)
    }

    fn rotate(&mut self, i: usize, j: usize, theta: f64, phase: f64) {
        let (s, c) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, phase);
        let (vi, vj) = (self.vecs[i].clone(), self.vecs[j].clone());
        for k in 0..vi.len() {
            self.vecs[i][k] = vi[k] * c + e * s * vj[k];
            self.vecs[j][k] = -e.conj() * s * vi[k] + vj[k] * c;
        }
        for k in [i, j] {
            self.x[k] = inner(&self.vecs[k], &self.psi1);
            self.y[k] = inner(&self.vecs[k], &self.psi2);
        }
    }

    fn run(mut self, settings: OptimizerSettings) -> (MeasurementBasis, bool, usize) {
        let dim = self.vecs.len();
        let mut converged = false;
        let mut sweeps = 0;
        while sweeps < settings.max_sweeps {
            sweeps += 1;
            let mut largest_step = 0.0f64;
            for i in 0..dim {
                for j in i + 1..dim {
                    let current = self.pair_cost(i, j, 0.0, 0.0);
                    let (t, p, cost) = self.optimize_pair(i, j);
                    if cost < current - 1e-15 {
                        let step = t.abs().min((t - std::f64::consts::FRAC_PI_2).abs());
                        largest_step = largest_step.max(step);
                        self.rotate(i, j, t, p);
                    }
                }
            }
            if largest_step < settings.step_tol {
                converged = true;
                break;
            }
        }
        let basis = orthonormal_from(self.vecs);
        (basis, converged, sweeps)
    }
}

/// Re-orthonormalizes accumulated rotations before validation.
fn orthonormal_from(vecs: Vec<Vec<Complex64>>) -> MeasurementBasis {
    let states: Vec<PureState> = vecs
        .into_iter()
        .map(|amplitudes| PureState { amplitudes })
        .collect();
    let refs: Vec<&PureState> = states.iter().collect();
    let dim = states.len();
    complete_basis_with(&refs, dim, &mut ChaCha8Rng::seed_from_u64(0)).expect("rotations keep the basis orthonormal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::{wootters_measure, DiscreteDistribution};
    use proptest::prelude::*;

    #[test]
    fn hilbert_basic_values() {
        let psi = random_state(3, 1).unwrap();
        assert!(hilbert_distance(&psi, &psi.with_phase(0.77)).unwrap() < 1e-15);
        let e = MeasurementBasis::computational(2).unwrap();
        let d = hilbert_distance(&e.states()[0], &e.states()[1]).unwrap();
        assert!((d - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        for (a, b) in [(0.1, 1.3), (0.7, 0.2), (0.0, 1.5)] {
            let d = hilbert_distance(&PureState::real_2d(a), &PureState::real_2d(b)).unwrap();
            assert!((d - (a - b).abs()).abs() < 1e-14);
        }
        assert!(matches!(
            hilbert_distance(&random_state(2, 1).unwrap(), &random_state(3, 1).unwrap()),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn device_distance_values() {
        let psi = random_state(4, 3).unwrap();
        let basis = random_basis(4, 4).unwrap();
        assert!(device_distance(&basis, &psi, &psi).unwrap() < 1e-15);
        let alpha = 0.4;
        let psi1 = PureState::real_2d(0.0);
        let psi2 = PureState::real_2d(alpha);
        let aligned = MeasurementBasis::computational(2).unwrap();
        assert!((device_distance(&aligned, &psi1, &psi2).unwrap() - alpha).abs() < 1e-14);
    }

    #[test]
    fn device_distance_matches_tabulated_outcomes() {
        let psi1 = random_state(3, 10).unwrap();
        let psi2 = random_state(3, 11).unwrap();
        let basis = random_basis(3, 12).unwrap();
        let direct = device_distance(&basis, &psi1, &psi2).unwrap();
        let p = DiscreteDistribution::new(basis.outcome_probabilities(&psi1).unwrap()).unwrap();
        let q = DiscreteDistribution::new(basis.outcome_probabilities(&psi2).unwrap()).unwrap();
        assert!((direct - wootters_measure(&p, &q).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn construction_checks() {
        assert!(PureState::new(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).is_err());
        assert!(PureState::new(vec![Complex64::new(1.0, 0.0)]).is_err());
        let a = PureState::real_2d(0.0);
        let b = PureState::real_2d(0.3);
        assert!(matches!(MeasurementBasis::new(vec![a.clone(), b]), Err(Error::NotOrthonormal(_))));
        assert!(MeasurementBasis::new(vec![a]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let basis = random_basis(3, 5).unwrap();
        let text = serde_json::to_string(&basis).unwrap();
        let back: MeasurementBasis = serde_json::from_str(&text).unwrap();
        assert_eq!(back, basis);
        let bad: std::result::Result<PureState, _> = serde_json::from_str("[[1,0],[1,0]]");
        assert!(bad.is_err());
    }

    #[test]
    fn random_sampling_contracts() {
        assert_eq!(random_state(4, 9).unwrap(), random_state(4, 9).unwrap());
        assert_eq!(random_basis(3, 9).unwrap(), random_basis(3, 9).unwrap());
        assert!((norm_sqr(random_state(5, 2).unwrap().amplitudes()) - 1.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|_| random_state_with(2, &mut rng).unwrap().amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.02, "{mean}");
        assert!(random_state(1, 0).is_err());
    }

    #[test]
    fn optimizer_two_dim() {
        let psi1 = PureState::real_2d(0.0);
        let psi2 = PureState::real_2d(0.4);
        let opt = optimize_basis(&psi1, &psi2, OptimizerSettings::default(), 7).unwrap();
        assert!((opt.d_a_max - 0.4).abs() < 1e-6);
        assert!((opt.numeric.d_a - 0.4).abs() < 1e-6);
        assert!(opt.numeric.converged);
    }

    #[test]
    fn optimizer_identical_states() {
        let psi = random_state(3, 2).unwrap();
        let opt = optimize_basis(&psi, &psi, OptimizerSettings::default(), 1).unwrap();
        assert!(opt.d_a_max < 1e-12);
        assert!(opt.numeric.d_a < 1e-12);
    }

    #[test]
    fn optimizer_routes_agree_in_four_dims() {
        let psi1 = random_state(4, 21).unwrap();
        let psi2 = random_state(4, 22).unwrap();
        let settings = OptimizerSettings {
            restarts: 20,
            ..Default::default()
        };
        let opt = optimize_basis(&psi1, &psi2, settings, 5).unwrap();
        assert!((opt.analytic.d_a - opt.numeric.d_a).abs() < 1e-6, "{opt:?}");
        assert!((opt.d_a_max - opt.hilbert).abs() < 1e-6);
        // both alignments reach the maximum
        assert!((opt.analytic.aligned_with_first - opt.hilbert).abs() < 1e-12);
        assert!((opt.analytic.aligned_with_second - opt.hilbert).abs() < 1e-12);
    }

    #[test]
    fn optimizer_is_deterministic() {
        let psi1 = random_state(3, 31).unwrap();
        let psi2 = random_state(3, 32).unwrap();
        let a = optimize_basis(&psi1, &psi2, OptimizerSettings::default(), 3).unwrap();
        let b = optimize_basis(&psi1, &psi2, OptimizerSettings::default(), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn device_bounded_by_hilbert_across_dims() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for dim in 2..=5 {
            for _ in 0..1000 {
                let psi1 = random_state_with(dim, &mut rng).unwrap();
                let psi2 = random_state_with(dim, &mut rng).unwrap();
                let basis = random_basis_with(dim, &mut rng).unwrap();
                let d = hilbert_distance(&psi1, &psi2).unwrap();
                assert!(device_distance(&basis, &psi1, &psi2).unwrap() <= d + 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn aligned_basis_attains_maximum(dim in 2usize..6, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
            let psi1 = random_state(dim, s1).unwrap();
            let psi2 = random_state(dim, s2).unwrap();
            let d = hilbert_distance(&psi1, &psi2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(s3);
            let phased = psi1.with_phase(1.1);
            let aligned = complete_basis_with(&[&phased], dim, &mut rng).unwrap();
            prop_assert!((device_distance(&aligned, &psi1, &psi2).unwrap() - d).abs() < 1e-12);
            let aligned2 = complete_basis_with(&[&psi2], dim, &mut rng).unwrap();
            prop_assert!((device_distance(&aligned2, &psi1, &psi2).unwrap() - d).abs() < 1e-12);
        }

        #[test]
        fn phase_and_unitary_invariance(dim in 2usize..6, s in any::<u64>(), alpha in 0.0..std::f64::consts::TAU, beta in 0.0..std::f64::consts::TAU) {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let psi1 = random_state_with(dim, &mut rng).unwrap();
            let psi2 = random_state_with(dim, &mut rng).unwrap();
            let basis = random_basis_with(dim, &mut rng).unwrap();
            let u = random_basis_with(dim, &mut rng).unwrap();
            let d = hilbert_distance(&psi1, &psi2).unwrap();
            let da = device_distance(&basis, &psi1, &psi2).unwrap();
            let (p1, p2) = (psi1.with_phase(alpha), psi2.with_phase(beta));
            prop_assert!((hilbert_distance(&p1, &p2).unwrap() - d).abs() < 1e-12);
            prop_assert!((device_distance(&basis, &p1, &p2).unwrap() - da).abs() < 1e-12);
            let (r1, r2) = (u.apply(&psi1).unwrap(), u.apply(&psi2).unwrap());
            let rotated = MeasurementBasis::new(basis.states().iter().map(|b| u.apply(b).unwrap()).collect()).unwrap();
            prop_assert!((hilbert_distance(&r1, &r2).unwrap() - d).abs() < 1e-12);
            prop_assert!((device_distance(&rotated, &r1, &r2).unwrap() - da).abs() < 1e-12);
        }
    }
}
