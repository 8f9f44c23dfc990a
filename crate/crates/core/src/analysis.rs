//! Dynamics characterization: analytic Jacobians, equilibrium spectra,
//! Lyapunov exponents via tangent-space Gram-Schmidt, bifurcation sweeps,
//! boundedness certificates, and the scroll census.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{
    ahnn_rhs, hnn_rhs, weight_matrix, DynamicsError, NetworkParams, StateVector, StimulusProgram,
    Trajectory,
};

pub type Mat3 = [[f64; 3]; 3];

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("Newton refinement did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// tanh^2 helper appearing in every Jacobian entry.
fn h_sq(x: f64) -> f64 {
    let t = x.tanh();
    t * t
}

/// Analytic Jacobian of the adjusted network at state `s` and time `t`:
/// entry (i,j) is `-delta_ij + W_ij(P(t)) * (1 - tanh^2(arg_j))`, where
/// `arg_j` carries the SVS shift of axis j (axis 1 only, under a constant
/// stimulus).
pub fn jacobian(s: StateVector, t: f64, p: NetworkParams, stim: &StimulusProgram) -> Mat3 {
    let w = weight_matrix(stim.weight_factor(t), p.k);
    let args = match stim.cs {
        Some(_) => [s.x1 + stim.offset(0, t), s.x2, s.x3],
        None => [
            s.x1 + stim.offset(0, t),
            s.x2 + stim.offset(1, t),
            s.x3 + stim.offset(2, t),
        ],
    };
    let mut j = [[0.0; 3]; 3];
    for (i, row) in j.iter_mut().enumerate() {
        for (jj, cell) in row.iter_mut().enumerate() {
            let diag = if i == jj { -1.0 } else { 0.0 };
            *cell = diag + w[i][jj] * (1.0 - h_sq(args[jj]));
        }
    }
    j
}

/// Jacobian of the base (unstimulated) network.
pub fn hnn_jacobian(s: StateVector, k: f64) -> Mat3 {
    jacobian(s, 0.0, NetworkParams::new(k), &StimulusProgram::none())
}

/// Roots of `x^3 + a2 x^2 + a1 x + a0`, residual-polished to < 1e-9.
pub fn cubic_roots(a2: f64, a1: f64, a0: f64) -> [Complex64; 3] {
    // depressed cubic t^3 + p t + q with x = t - a2/3
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2.powi(3) / 27.0 - a2 * a1 / 3.0 + a0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots = if disc >= 0.0 {
        let sq = disc.sqrt();
        let u = (-q / 2.0 + sq).cbrt();
        let v = (-q / 2.0 - sq).cbrt();
        let re = -(u + v) / 2.0;
        let im = (u - v) / 2.0 * 3.0f64.sqrt();
        [
            Complex64::new(u + v, 0.0),
            Complex64::new(re, im),
            Complex64::new(re, -im),
        ]
    } else {
        let r = 2.0 * (-p / 3.0).sqrt();
        let theta = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0).acos();
        [0.0, 1.0, 2.0].map(|k| {
            Complex64::new(
                r * ((theta - 2.0 * std::f64::consts::PI * k) / 3.0).cos(),
                0.0,
            )
        })
    };
    for r in roots.iter_mut() {
        *r -= shift;
        // one Newton polish pass knocks the residual down to machine level
        for _ in 0..3 {
            let f = *r * *r * *r + a2 * *r * *r + a1 * *r + a0;
            let df = 3.0 * *r * *r + 2.0 * a2 * *r + a1;
            if df.norm() > 1e-12 {
                *r -= f / df;
            }
        }
    }
    roots
}

/// Eigenvalues of the origin equilibrium: roots of the characteristic cubic
/// `l^3 + 0.3 l^2 + 2.1 l - 6k + 4.75`.
pub fn characteristic_roots(k: f64) -> [Complex64; 3] {
    cubic_roots(0.3, 2.1, 4.75 - 6.0 * k)
}

/// Eigenvalues of an arbitrary 3x3 matrix through its characteristic cubic.
pub fn eigenvalues3(m: &Mat3) -> [Complex64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0])
        + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
        + (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    cubic_roots(-tr, minors, -det)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EquilibriumClass {
    /// One positive real eigenvalue, complex pair with negative real parts.
    SaddleFocusIndex1,
    /// One negative real eigenvalue, complex pair with positive real parts.
    SaddleFocusIndex2,
    Stable,
    Other,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumReport {
    pub location: StateVector,
    #[serde(serialize_with = "serialize_eigenvalues")]
    pub eigenvalues: [Complex64; 3],
    pub class: EquilibriumClass,
}

fn serialize_eigenvalues<S: serde::Serializer>(
    ev: &[Complex64; 3],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(3))?;
    for e in ev {
        seq.serialize_element(&[e.re, e.im])?;
    }
    seq.end()
}

pub fn classify(eigenvalues: &[Complex64; 3]) -> EquilibriumClass {
    let pos: Vec<_> = eigenvalues.iter().filter(|e| e.re > 1e-9).collect();
    let neg = eigenvalues.iter().filter(|e| e.re < -1e-9).count();
    match (pos.len(), neg) {
        (0, 3) => EquilibriumClass::Stable,
        (1, 2) if pos[0].im.abs() < 1e-9 => EquilibriumClass::SaddleFocusIndex1,
        (2, 1) => EquilibriumClass::SaddleFocusIndex2,
        _ => EquilibriumClass::Other,
    }
}

const NEWTON_MAX_ITERATIONS: usize = 100;

/// Seed near the nonzero base-network equilibrium used throughout the
/// equilibrium and scroll-center constructions.
pub const FOCUS_SEED: StateVector = StateVector::new(0.43, -0.04, 1.2);

#[allow(clippy::needless_range_loop)] // rows of one matrix cross-indexed
fn solve3(a: &Mat3, b: [f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for c in 0..3 {
        let piv = (c..3).max_by(|&r1, &r2| m[r1][c].abs().total_cmp(&m[r2][c].abs()))?;
        m.swap(c, piv);
        if m[c][c].abs() < 1e-14 {
            return None;
        }
        for r in c + 1..3 {
            let f = m[r][c] / m[c][c];
            for cc in c..4 {
                m[r][cc] -= f * m[c][cc];
            }
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let mut v = m[r][3];
        for c in r + 1..3 {
            v -= m[r][c] * x[c];
        }
        x[r] = v / m[r][r];
    }
    Some(x)
}

/// Newton refinement of a base-network equilibrium from `seed`.
pub fn newton_refine(seed: StateVector, k: f64) -> Result<StateVector, AnalysisError> {
    let mut x = seed;
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let f = hnn_rhs(x, k);
        if f.max_abs() < 1e-12 {
            return Ok(x);
        }
        let j = hnn_jacobian(x, k);
        let d = solve3(&j, [-f.x1, -f.x2, -f.x3]).ok_or(AnalysisError::NonConvergence {
            iterations: NEWTON_MAX_ITERATIONS,
        })?;
        x = StateVector::new(x.x1 + d[0], x.x2 + d[1], x.x3 + d[2]);
    }
    Err(AnalysisError::NonConvergence {
        iterations: NEWTON_MAX_ITERATIONS,
    })
}

fn push_unique(list: &mut Vec<EquilibriumReport>, report: EquilibriumReport) {
    let dup = list.iter().any(|r| {
        (r.location.x1 - report.location.x1).abs() < 1e-9
            && (r.location.x2 - report.location.x2).abs() < 1e-9
            && (r.location.x3 - report.location.x3).abs() < 1e-9
    });
    if !dup {
        list.push(report);
    }
}

/// Equilibria of the stimulus-frozen network for the given SVS amplitudes:
/// the offset images of the origin for every on/off combination, plus (for
/// k = 1) the six offset index-2 foci refined from [`FOCUS_SEED`].
pub fn equilibria(
    p: NetworkParams,
    amplitudes: [f64; 3],
) -> Result<Vec<EquilibriumReport>, AnalysisError> {
    let origin_ev = characteristic_roots(p.k);
    let [a1, a2, a3] = amplitudes;
    let mut out = Vec::new();
    for m1 in [0.0, -a1] {
        for m2 in [0.0, -a2] {
            for m3 in [0.0, -a3] {
                push_unique(
                    &mut out,
                    EquilibriumReport {
                        location: StateVector::new(m1, m2, m3),
                        eigenvalues: origin_ev,
                        class: classify(&origin_ev),
                    },
                );
            }
        }
    }
    if (p.k - 1.0).abs() < 1e-9 {
        let zp = newton_refine(FOCUS_SEED, p.k)?;
        let zm = newton_refine(StateVector::new(-FOCUS_SEED.x1, -FOCUS_SEED.x2, -FOCUS_SEED.x3), p.k)?;
        let ev_p = eigenvalues3(&hnn_jacobian(zp, p.k));
        let ev_m = eigenvalues3(&hnn_jacobian(zm, p.k));
        let offsets_p = [[0.0, 0.0, -a3], [0.0, -a2, 0.0], [0.0, -a2, -a3]];
        let offsets_m = [[-a1, 0.0, 0.0], [-a1, 0.0, -a3], [-a1, -a2, 0.0]];
        for (z, ev, offs) in [(zp, ev_p, offsets_p), (zm, ev_m, offsets_m)] {
            for o in offs {
                push_unique(
                    &mut out,
                    EquilibriumReport {
                        location: StateVector::new(z.x1 + o[0], z.x2 + o[1], z.x3 + o[2]),
                        eigenvalues: ev,
                        class: classify(&ev),
                    },
                );
            }
        }
    }
    Ok(out)
}

/// Benettin run parameters.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LyapunovSettings {
    pub h: f64,
    pub transient_steps: usize,
    pub steps: usize,
    pub renorm_every: usize,
}

impl Default for LyapunovSettings {
    fn default() -> Self {
        Self {
            h: crate::dynamics::DEFAULT_STEP,
            transient_steps: 10_000,
            steps: 100_000,
            renorm_every: 10,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    /// Exponents in nats per time unit, sorted descending.
    pub exponents: [f64; 3],
    pub settings: LyapunovSettings,
}

fn matvec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// Benettin spectrum of an arbitrary 3-D flow given its field and Jacobian.
/// The flow and the three tangent vectors integrate together under RK4;
/// Gram-Schmidt renormalization accumulates the log norms.
#[allow(clippy::needless_range_loop)] // tangent rows cross-indexed during orthogonalization
pub fn benettin_spectrum<F, J>(
    x0: StateVector,
    rhs: F,
    jac: J,
    settings: &LyapunovSettings,
) -> Result<SpectrumResult, DynamicsError>
where
    F: Fn(StateVector, f64) -> StateVector,
    J: Fn(StateVector, f64) -> Mat3,
{
    let h = settings.h;
    let mut x = x0;
    for n in 0..settings.transient_steps {
        x = crate::dynamics::rk4_step(x, n as f64 * h, h, &rhs);
        if !x.is_finite() || x.max_abs() > crate::dynamics::DIVERGENCE_LIMIT {
            return Err(DynamicsError::Divergence { step: n });
        }
    }
    let t0 = settings.transient_steps as f64 * h;
    let mut e: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut logs = [0.0f64; 3];

    for n in 0..settings.steps {
        let t = t0 + n as f64 * h;
        // augmented RK4 over (x, e1, e2, e3)
        let k1 = rhs(x, t);
        let j1 = jac(x, t);
        let e1 = e.map(|v| matvec(&j1, v));
        let xa = x.add_scaled(0.5 * h, k1);
        let ea = add_scaled_all(&e, 0.5 * h, &e1);
        let k2 = rhs(xa, t + 0.5 * h);
        let j2 = jac(xa, t + 0.5 * h);
        let e2 = ea.map(|v| matvec(&j2, v));
        let xb = x.add_scaled(0.5 * h, k2);
        let eb = add_scaled_all(&e, 0.5 * h, &e2);
        let k3 = rhs(xb, t + 0.5 * h);
        let j3 = jac(xb, t + 0.5 * h);
        let e3 = eb.map(|v| matvec(&j3, v));
        let xc = x.add_scaled(h, k3);
        let ec = add_scaled_all(&e, h, &e3);
        let k4 = rhs(xc, t + h);
        let j4 = jac(xc, t + h);
        let e4 = ec.map(|v| matvec(&j4, v));

        x = x.add_scaled(
            h / 6.0,
            k1.add_scaled(2.0, k2).add_scaled(2.0, k3).add_scaled(1.0, k4),
        );
        for m in 0..3 {
            for i in 0..3 {
                e[m][i] += h / 6.0 * (e1[m][i] + 2.0 * e2[m][i] + 2.0 * e3[m][i] + e4[m][i]);
            }
        }
        if !x.is_finite() || x.max_abs() > crate::dynamics::DIVERGENCE_LIMIT {
            return Err(DynamicsError::Divergence {
                step: settings.transient_steps + n,
            });
        }
        if (n + 1) % settings.renorm_every == 0 {
            for m in 0..3 {
                for p in 0..m {
                    let d = dot(e[m], e[p]);
                    for i in 0..3 {
                        e[m][i] -= d * e[p][i];
                    }
                }
                let norm = dot(e[m], e[m]).sqrt();
                logs[m] += norm.ln();
                for i in 0..3 {
                    e[m][i] /= norm;
                }
            }
        }
    }
    let total_time = settings.steps as f64 * h;
    let mut exps = logs.map(|l| l / total_time);
    exps.sort_by(|a, b| b.total_cmp(a));
    Ok(SpectrumResult {
        exponents: exps,
        settings: *settings,
    })
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn add_scaled_all(e: &[[f64; 3]; 3], c: f64, d: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = *e;
    for m in 0..3 {
        for i in 0..3 {
            out[m][i] += c * d[m][i];
        }
    }
    out
}

/// Lyapunov spectrum of the adjusted network.
pub fn lyapunov_spectrum(
    p: NetworkParams,
    stim: &StimulusProgram,
    x0: StateVector,
    settings: &LyapunovSettings,
) -> Result<SpectrumResult, DynamicsError> {
    benettin_spectrum(
        x0,
        |s, t| ahnn_rhs(s, t, p, stim),
        |s, t| jacobian(s, t, p, stim),
        settings,
    )
}

/// Strict three-point local maxima of a sampled series.
pub fn local_maxima(series: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..series.len().saturating_sub(1) {
        if series[i - 1] < series[i] && series[i] > series[i + 1] {
            out.push(series[i]);
        }
    }
    out
}

/// Number of value clusters among `peaks` after merging values closer than
/// `tol` to their predecessor in sorted order.
pub fn cluster_count(peaks: &[f64], tol: f64) -> usize {
    if peaks.is_empty() {
        return 0;
    }
    let mut sorted = peaks.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut clusters = 1;
    for w in sorted.windows(2) {
        if w[1] - w[0] > tol {
            clusters += 1;
        }
    }
    clusters
}

/// Sweep parameter selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepAxis {
    K,
    WmsAmplitude,
    SvsAmplitude1,
    CsAmplitude,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub param: f64,
    pub peaks: Vec<f64>,
}

/// Bifurcation sweep: for each parameter value, integrate, discard the
/// transient, and record the strict local maxima of x1 over the tail. A
/// tail with no strict maxima (a settled fixed point) contributes its
/// supremum as the single plotted peak, so fixed-point branches still draw.
#[allow(clippy::too_many_arguments)]
pub fn bifurcation_sweep(
    p: NetworkParams,
    stim: &StimulusProgram,
    x0: StateVector,
    axis: SweepAxis,
    range: (f64, f64),
    n_points: usize,
    h: f64,
    transient: usize,
    steps: usize,
) -> Result<Vec<SweepPoint>, DynamicsError> {
    assert!(n_points >= 2, "a sweep needs at least two points");
    let mut out = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let v = range.0 + (range.1 - range.0) * i as f64 / (n_points - 1) as f64;
        let mut pp = p;
        let mut ss = *stim;
        match axis {
            SweepAxis::K => pp.k = v,
            SweepAxis::WmsAmplitude => {
                ss.wms = match ss.wms {
                    crate::dynamics::Wave::Square { omega, .. } => {
                        crate::dynamics::Wave::Square { amplitude: v, omega }
                    }
                    _ => crate::dynamics::Wave::Square {
                        amplitude: v,
                        omega: 0.01,
                    },
                }
            }
            SweepAxis::SvsAmplitude1 => {
                ss.svs[0] = match ss.svs[0] {
                    crate::dynamics::Wave::Square { omega, .. } => {
                        crate::dynamics::Wave::Square { amplitude: v, omega }
                    }
                    _ => crate::dynamics::Wave::Square {
                        amplitude: v,
                        omega: 0.02,
                    },
                }
            }
            SweepAxis::CsAmplitude => ss.cs = Some(v),
        }
        let tr = crate::dynamics::simulate(x0, pp, &ss, h, transient + steps)?;
        let tail: Vec<f64> = tr.samples[transient..].iter().map(|&(_, s)| s.x1).collect();
        let mut peaks = local_maxima(&tail);
        if peaks.is_empty() {
            let sup = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            peaks.push(sup);
        }
        out.push(SweepPoint { param: v, peaks });
    }
    Ok(out)
}

/// Exported CSV rows `param,peak` for a sweep.
pub fn sweep_to_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("param,peak\n");
    for pt in points {
        for pk in &pt.peaks {
            out.push_str(&format!("{:.16e},{:.16e}\n", pt.param, pk));
        }
    }
    out
}

/// Boundary value of the attractive set for weight `k` and scan parameter
/// `b > 1`.
pub fn attractive_set_bound(k: f64, b: f64) -> f64 {
    (0.7 * b - 2.2).powi(2) + (k + 1.5 + 2.0 * b).powi(2) + (5.0 * b + 1.0).powi(2)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundednessReport {
    pub v_max_tail: f64,
    pub l_k: f64,
    pub contained: bool,
}

/// Empirical containment check: the maximum of V(x) = sum (x_i + A_i)^2
/// over the trajectory tail (all samples past the first tenth) against the
/// analytic bound.
pub fn boundedness_report(
    traj: &Trajectory,
    amplitudes: [f64; 3],
    k: f64,
    b: f64,
) -> BoundednessReport {
    debug_assert!(b > 1.0);
    let start = traj.samples.len() / 10;
    let v_max_tail = traj.samples[start..]
        .iter()
        .map(|&(_, s)| {
            (s.x1 + amplitudes[0]).powi(2)
                + (s.x2 + amplitudes[1]).powi(2)
                + (s.x3 + amplitudes[2]).powi(2)
        })
        .fold(0.0, f64::max);
    let l_k = attractive_set_bound(k, b);
    BoundednessReport {
        v_max_tail,
        l_k,
        contained: v_max_tail < l_k,
    }
}

/// Smallest b in [1.1, 5] (step 0.01) whose bound contains the tail,
/// or None if none does.
pub fn smallest_containing_bound(
    traj: &Trajectory,
    amplitudes: [f64; 3],
    k: f64,
) -> Option<f64> {
    let mut b = 1.1;
    while b <= 5.0 + 1e-12 {
        if boundedness_report(traj, amplitudes, k, b).contained {
            return Some(b);
        }
        b += 0.01;
    }
    None
}

/// Which coordinates participate in the census distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusProjection {
    /// Euclidean distance in the (x1, x3) plane, for planar scroll counts.
    PlaneX1X3,
    Full3D,
}

/// Counts candidate centers visited by the samples: a center is visited
/// when at least 0.5% of the samples fall within `radius` of it.
pub fn scroll_census(
    samples: &[StateVector],
    centers: &[StateVector],
    radius: f64,
    projection: CensusProjection,
) -> usize {
    assert!(!centers.is_empty() && radius > 0.0);
    let need = ((samples.len() as f64 * 0.005).ceil() as usize).max(1);
    let r2 = radius * radius;
    centers
        .iter()
        .filter(|c| {
            let mut hits = 0usize;
            for s in samples {
                let d2 = match projection {
                    CensusProjection::PlaneX1X3 => {
                        (s.x1 - c.x1).powi(2) + (s.x3 - c.x3).powi(2)
                    }
                    CensusProjection::Full3D => {
                        (s.x1 - c.x1).powi(2) + (s.x2 - c.x2).powi(2) + (s.x3 - c.x3).powi(2)
                    }
                };
                if d2 <= r2 {
                    hits += 1;
                    if hits >= need {
                        return true;
                    }
                }
            }
            false
        })
        .count()
}

/// Analytic scroll-center construction: the nonzero base-network foci
/// (refined from [`FOCUS_SEED`]), their weight-stimulus mirror images
/// (x1 negated), crossed with the per-axis offset lists.
pub fn scroll_centers(
    k: f64,
    offsets1: &[f64],
    offsets2: &[f64],
    offsets3: &[f64],
) -> Result<Vec<StateVector>, AnalysisError> {
    let z = newton_refine(FOCUS_SEED, k)?;
    let mut base = vec![z];
    for cand in [
        StateVector::new(-z.x1, -z.x2, -z.x3),
        StateVector::new(-z.x1, z.x2, z.x3),
        StateVector::new(z.x1, -z.x2, -z.x3),
    ] {
        if base
            .iter()
            .all(|b| (b.x1 - cand.x1).abs() + (b.x3 - cand.x3).abs() > 1e-6)
        {
            base.push(cand);
        }
    }
    let mut out = Vec::new();
    for b in &base {
        for &o1 in offsets1 {
            for &o2 in offsets2 {
                for &o3 in offsets3 {
                    out.push(StateVector::new(b.x1 + o1, b.x2 + o2, b.x3 + o3));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Wave;

    #[test]
    fn jacobian_at_origin_matches_the_analytic_matrix() {
        // derivative of the base field at 0 for k = 1.15; the trace and the
        // full characteristic cubic tie this matrix to the published
        // origin spectrum
        let j = hnn_jacobian(StateVector::default(), 1.15);
        let want = [
            [1.2, -1.2, 0.5],
            [2.0, 0.5, 1.15],
            [-5.0, 0.0, -2.0],
        ];
        for i in 0..3 {
            for c in 0..3 {
                assert!((j[i][c] - want[i][c]).abs() < 1e-12, "({i},{c}) = {}", j[i][c]);
            }
        }
        // (1,1) follows the (6 - 11 h(x1)) / 5 pattern with h = 0
        assert!((j[0][0] - 6.0 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn jacobian_agrees_with_central_differences() {
        let p = NetworkParams::new(1.15);
        let stim = StimulusProgram::none()
            .with_wms(1.0, 0.01)
            .with_svs(0, 5.0, 0.02);
        // deterministic pseudo-random probe states
        let mut seed = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        let eps = 1e-6;
        for case in 0..100 {
            let s = StateVector::new(next(), next(), next());
            let t = case as f64 * 3.7;
            let j = jacobian(s, t, p, &stim);
            for col in 0..3 {
                let mut hi = s.to_array();
                let mut lo = s.to_array();
                hi[col] += eps;
                lo[col] -= eps;
                let fhi = ahnn_rhs(StateVector::from_array(hi), t, p, &stim).to_array();
                let flo = ahnn_rhs(StateVector::from_array(lo), t, p, &stim).to_array();
                for row in 0..3 {
                    let fd = (fhi[row] - flo[row]) / (2.0 * eps);
                    assert!(
                        (j[row][col] - fd).abs() < 1e-5,
                        "case {case} ({row},{col}): {} vs {}",
                        j[row][col],
                        fd
                    );
                }
            }
        }
    }

    #[test]
    fn weight_stimulus_sign_flip_negates_the_scaled_entries() {
        let p = NetworkParams::new(1.15);
        let s = StateVector::new(0.3, -0.4, 0.9);
        let plus = StimulusProgram {
            wms: Wave::Hold(1.0),
            ..StimulusProgram::none()
        };
        let minus = StimulusProgram {
            wms: Wave::Hold(-1.0),
            ..StimulusProgram::none()
        };
        let jp = jacobian(s, 0.0, p, &plus);
        let jm = jacobian(s, 0.0, p, &minus);
        let scaled = [(0, 1), (0, 2), (1, 0), (2, 0)];
        for i in 0..3 {
            for c in 0..3 {
                if scaled.contains(&(i, c)) {
                    assert!((jp[i][c] + jm[i][c]).abs() < 1e-12, "({i},{c})");
                } else {
                    assert!((jp[i][c] - jm[i][c]).abs() < 1e-12, "({i},{c})");
                }
            }
        }
    }

    #[test]
    fn characteristic_roots_reproduce_published_spectra() {
        let sort_key = |c: &Complex64| (c.im.abs() > 1e-9) as u8;
        for (k, real, re, im) in [(1.15, 0.74, -0.52, 1.61), (1.0, 0.50, -0.40, 1.53)] {
            let mut roots = characteristic_roots(k).to_vec();
            roots.sort_by_key(sort_key);
            assert!((roots[0].re - real).abs() < 0.01, "k={k}: {}", roots[0].re);
            assert!(roots[0].im.abs() < 1e-9);
            for r in &roots[1..] {
                assert!((r.re - re).abs() < 0.01, "k={k}");
                assert!((r.im.abs() - im).abs() < 0.01, "k={k}");
            }
        }
    }

    #[test]
    fn characteristic_root_sum_and_residuals() {
        for k in [1.0, 1.15, 0.7, 1.4] {
            let roots = characteristic_roots(k);
            let sum: Complex64 = roots.iter().sum();
            assert!((sum.re + 0.3).abs() < 1e-9, "k={k}");
            assert!(sum.im.abs() < 1e-9);
            for r in roots {
                let p = r * r * r + 0.3 * r * r + 2.1 * r + Complex64::new(4.75 - 6.0 * k, 0.0);
                assert!(p.norm() < 1e-9, "residual {} at k={k}", p.norm());
            }
        }
    }

    #[test]
    fn equilibria_structure_k115() {
        let reports = equilibria(NetworkParams::new(1.15), [5.0, 5.0, 12.0]).unwrap();
        assert_eq!(reports.len(), 8);
        for r in &reports {
            assert_eq!(r.class, EquilibriumClass::SaddleFocusIndex1);
            let real = r.eigenvalues.iter().find(|e| e.im.abs() < 1e-9).unwrap();
            assert!((real.re - 0.74).abs() < 0.01);
            let pair = r.eigenvalues.iter().find(|e| e.im > 1e-9).unwrap();
            assert!((pair.re + 0.52).abs() < 0.01);
            assert!((pair.im - 1.61).abs() < 0.01);
        }
    }

    #[test]
    fn equilibria_structure_k1_includes_index2_foci() {
        let reports = equilibria(NetworkParams::new(1.0), [5.0, 5.0, 12.0]).unwrap();
        assert_eq!(reports.len(), 14);
        let index2: Vec<_> = reports
            .iter()
            .filter(|r| r.class == EquilibriumClass::SaddleFocusIndex2)
            .collect();
        assert_eq!(index2.len(), 6);
        for r in index2 {
            let real = r.eigenvalues.iter().find(|e| e.im.abs() < 1e-9).unwrap();
            assert!((real.re + 0.72).abs() < 0.02, "{}", real.re);
            let pair = r.eigenvalues.iter().find(|e| e.im > 1e-9).unwrap();
            assert!((pair.re - 0.37).abs() < 0.02);
            assert!((pair.im - 1.31).abs() < 0.02);
        }
    }

    #[test]
    fn newton_lands_on_a_true_equilibrium() {
        let z = newton_refine(FOCUS_SEED, 1.0).unwrap();
        assert!(hnn_rhs(z, 1.0).max_abs() < 1e-12);
        assert!(z.max_abs() > 0.1, "should not collapse to the origin");
    }

    #[test]
    fn linear_contraction_spectrum() {
        // three decoupled copies of dx/dt = -x have exponents (-1,-1,-1)
        let settings = LyapunovSettings {
            h: 0.01,
            transient_steps: 100,
            steps: 20_000,
            renorm_every: 10,
        };
        let r = benettin_spectrum(
            StateVector::new(1.0, 1.0, 1.0),
            |s, _| StateVector::new(-s.x1, -s.x2, -s.x3),
            |_, _| [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]],
            &settings,
        )
        .unwrap();
        for e in r.exponents {
            assert!((e + 1.0).abs() < 1e-3, "{e}");
        }
    }

    #[test]
    fn local_maxima_and_clusters() {
        let series: Vec<f64> = (0..2000)
            .map(|i| {
                let t = i as f64 * 0.05;
                (-0.05 * t).exp() * t.cos()
            })
            .collect();
        let peaks = local_maxima(&series);
        assert!(!peaks.is_empty());
        // damped oscillation: peaks decay monotonically toward zero
        for w in peaks.windows(2) {
            assert!(w[1] < w[0]);
        }
        let last = *peaks.last().unwrap();
        assert!(last < peaks[0] / 10.0);
        // and the late peaks collapse into one cluster
        let late: Vec<f64> = peaks.iter().rev().take(3).copied().collect();
        assert_eq!(cluster_count(&late, 1e-2), 1);
        assert_eq!(cluster_count(&[], 1e-2), 0);
        assert_eq!(cluster_count(&[1.0, 1.001, 2.0], 1e-2), 2);
    }

    #[test]
    fn boundedness_bound_value() {
        let l = attractive_set_bound(1.15, 2.0);
        assert!((l - 165.8625).abs() < 1e-12);
    }

    #[test]
    fn boundedness_zero_trajectory() {
        let traj = Trajectory {
            step: 0.01,
            samples: (0..100).map(|i| (i as f64 * 0.01, StateVector::default())).collect(),
        };
        let r = boundedness_report(&traj, [0.0; 3], 1.15, 2.0);
        assert_eq!(r.v_max_tail, 0.0);
        assert!(r.contained);
        assert_eq!(smallest_containing_bound(&traj, [0.0; 3], 1.15), Some(1.1));
    }

    #[test]
    fn census_counts_a_settled_point_once() {
        let c = StateVector::new(1.0, 0.0, -1.0);
        let samples = vec![c; 1000];
        let centers = vec![c, StateVector::new(8.0, 0.0, 8.0)];
        assert_eq!(
            scroll_census(&samples, &centers, 1.0, CensusProjection::Full3D),
            1
        );
        assert_eq!(
            scroll_census(&samples, &centers, 1.0, CensusProjection::PlaneX1X3),
            1
        );
    }

    #[test]
    fn sweep_reports_fixed_point_branch_as_single_peak() {
        // strongly contracted network: sweep over k on a trivial range
        let p = NetworkParams::new(1.15);
        let stim = StimulusProgram::none().with_cs(1.0).with_svs(0, 0.05, 0.01);
        let pts = bifurcation_sweep(
            p,
            &stim,
            StateVector::new(0.0, 0.1, 0.0),
            SweepAxis::CsAmplitude,
            (1.0, 1.1),
            2,
            0.01,
            5_000,
            5_000,
        )
        .unwrap();
        assert_eq!(pts.len(), 2);
        for pt in pts {
            assert_eq!(cluster_count(&pt.peaks, 1e-2), 1, "param {}", pt.param);
        }
    }

    #[test]
    fn sweep_csv_shape() {
        let pts = vec![SweepPoint {
            param: 0.5,
            peaks: vec![1.0, 2.0],
        }];
        let csv = sweep_to_csv(&pts);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("param,peak\n"));
    }
}
