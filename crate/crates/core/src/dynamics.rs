//! Floating-point model of the three-neuron Hopfield network, its
//! square-wave stimulus generators, and a fixed-step RK4 integrator.
//!
//! The base network is
//!
//! ```text
//! dx/dt = -x + W * tanh(x),   W = [ 2.2  -1.2   0.5 ]
//!                                 [ 2.0   1.5   k   ]
//!                                 [-5.0   0.0  -1.0 ]
//! ```
//!
//! Stimuli modulate it in three ways: a weight-matrix square wave P(t)
//! scaling the off-diagonal column/row shown in [`weight_matrix`], per-axis
//! state offsets Pi(t) in {0, Ai}, and an optional constant bias on axis 1
//! that replaces the axis-1 linear term by -(x1 - A'1).

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

/// Default integration step. Resolves the fastest local dynamics
/// (|eigenvalue| ~ 1.7) with a few hundred steps per characteristic period.
pub const DEFAULT_STEP: f64 = 0.01;

/// Trajectories whose components exceed this magnitude are aborted.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("trajectory diverged at step {step} (|x| > {DIVERGENCE_LIMIT:e})")]
    Divergence { step: usize },
    #[error("simulation needs at least one step")]
    EmptyRun,
}

/// The three membrane-voltage states.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct StateVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl StateVector {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn max_abs(self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// `self + c * v`, the only vector arithmetic RK4 needs.
    pub fn add_scaled(self, c: f64, v: StateVector) -> Self {
        Self::new(self.x1 + c * v.x1, self.x2 + c * v.x2, self.x3 + c * v.x3)
    }
}

/// Synaptic weight configuration; only `k` (entry w23) varies in this model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkParams {
    pub k: f64,
}

impl NetworkParams {
    pub const fn new(k: f64) -> Self {
        Self { k }
    }
}

impl Default for NetworkParams {
    fn default() -> Self {
        Self { k: 1.15 }
    }
}

/// Weight matrix with the stimulus factor `p` applied to the four
/// modulated entries (w12, w13, w21, w31).
pub fn weight_matrix(p: f64, k: f64) -> [[f64; 3]; 3] {
    [
        [2.2, -1.2 * p, 0.5 * p],
        [2.0 * p, 1.5, k],
        [-5.0 * p, 0.0, -1.0],
    ]
}

/// One stimulus channel. `Square` is the paper's binary waveform;
/// `Hold` pins the channel to a constant value, which is what the
/// symmetry properties quantify over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Wave {
    Off,
    Square { amplitude: f64, omega: f64 },
    Hold(f64),
}

impl Wave {
    pub fn square(amplitude: f64, omega: f64) -> Self {
        Wave::Square { amplitude, omega }
    }
}

/// sign(sin(omega t)) as a total function: the parity of floor(omega t / pi),
/// so the value at every zero crossing is taken from the right.
pub fn square_sign(omega: f64, t: f64) -> f64 {
    let n = (omega * t / std::f64::consts::PI).floor() as i64;
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Weight-matrix stimulus P(t) = A * sign(sin(omega t)).
pub fn wms_value(t: f64, amplitude: f64, omega: f64) -> f64 {
    amplitude * square_sign(omega, t)
}

/// State-variable stimulus Pi(t) = Ai/2 * (sign(sin(omega_i t)) + 1),
/// i.e. a square wave over {0, Ai}.
pub fn svs_value(t: f64, amplitude: f64, omega: f64) -> f64 {
    if square_sign(omega, t) > 0.0 {
        amplitude
    } else {
        0.0
    }
}

/// Full stimulus schedule: one WMS channel, three SVS channels, and the
/// optional constant stimulus on axis 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StimulusProgram {
    pub wms: Wave,
    pub svs: [Wave; 3],
    pub cs: Option<f64>,
}

impl StimulusProgram {
    /// No stimuli: P(t) = 1, Pi(t) = 0, reducing the model to the base network.
    pub const fn none() -> Self {
        Self {
            wms: Wave::Off,
            svs: [Wave::Off, Wave::Off, Wave::Off],
            cs: None,
        }
    }

    pub fn with_wms(mut self, amplitude: f64, omega: f64) -> Self {
        self.wms = Wave::square(amplitude, omega);
        self
    }

    pub fn with_svs(mut self, axis: usize, amplitude: f64, omega: f64) -> Self {
        self.svs[axis] = Wave::square(amplitude, omega);
        self
    }

    pub fn with_cs(mut self, amplitude: f64) -> Self {
        self.cs = Some(amplitude);
        self
    }

    /// P(t). A disabled WMS channel contributes the neutral factor 1.
    pub fn weight_factor(&self, t: f64) -> f64 {
        match self.wms {
            Wave::Off => 1.0,
            Wave::Square { amplitude, omega } => wms_value(t, amplitude, omega),
            Wave::Hold(v) => v,
        }
    }

    /// Pi(t) for `axis` in 0..3.
    pub fn offset(&self, axis: usize, t: f64) -> f64 {
        match self.svs[axis] {
            Wave::Off => 0.0,
            Wave::Square { amplitude, omega } => svs_value(t, amplitude, omega),
            Wave::Hold(v) => v,
        }
    }
}

/// Right-hand side of the unstimulated network.
pub fn hnn_rhs(s: StateVector, k: f64) -> StateVector {
    let w = weight_matrix(1.0, k);
    let th = [s.x1.tanh(), s.x2.tanh(), s.x3.tanh()];
    let x = s.to_array();
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = -x[i] + w[i][0] * th[0] + w[i][1] * th[1] + w[i][2] * th[2];
    }
    StateVector::from_array(out)
}

/// Right-hand side of the stimulus-adjusted network at time `t`.
///
/// With a constant stimulus present, the axis-1 linear term becomes
/// -(x1 - A'1) and the SVS offsets on axes 2 and 3 are absent; P1(t)
/// then acts only inside the activation argument.
pub fn ahnn_rhs(s: StateVector, t: f64, p: NetworkParams, stim: &StimulusProgram) -> StateVector {
    let w = weight_matrix(stim.weight_factor(t), p.k);
    let x = s.to_array();
    let (lin, th) = match stim.cs {
        Some(bias) => {
            let p1 = stim.offset(0, t);
            (
                [-(x[0] - bias), -x[1], -x[2]],
                [(x[0] + p1).tanh(), x[1].tanh(), x[2].tanh()],
            )
        }
        None => {
            let off = [stim.offset(0, t), stim.offset(1, t), stim.offset(2, t)];
            (
                [-(x[0] + off[0]), -(x[1] + off[1]), -(x[2] + off[2])],
                [
                    (x[0] + off[0]).tanh(),
                    (x[1] + off[1]).tanh(),
                    (x[2] + off[2]).tanh(),
                ],
            )
        }
    };
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = lin[i] + w[i][0] * th[0] + w[i][1] * th[1] + w[i][2] * th[2];
    }
    StateVector::from_array(out)
}

/// Classical four-stage RK4 update. Stimulus values are evaluated at the
/// stage times t, t+h/2, t+h/2, t+h through the supplied field.
pub fn rk4_step<F>(s: StateVector, t: f64, h: f64, rhs: F) -> StateVector
where
    F: Fn(StateVector, f64) -> StateVector,
{
    let k1 = rhs(s, t);
    let k2 = rhs(s.add_scaled(0.5 * h, k1), t + 0.5 * h);
    let k3 = rhs(s.add_scaled(0.5 * h, k2), t + 0.5 * h);
    let k4 = rhs(s.add_scaled(h, k3), t + h);
    let sum = k1
        .add_scaled(2.0, k2)
        .add_scaled(2.0, k3)
        .add_scaled(1.0, k4);
    s.add_scaled(h / 6.0, sum)
}

/// A fixed-step trajectory; sample n carries t = n * h.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub step: f64,
    pub samples: Vec<(f64, StateVector)>,
}

impl Trajectory {
    /// The last `n` states (or all of them if the run is shorter).
    pub fn tail_states(&self, n: usize) -> Vec<StateVector> {
        let start = self.samples.len().saturating_sub(n);
        self.samples[start..].iter().map(|&(_, s)| s).collect()
    }

    /// CSV export with 17 significant digits, header `t,x1,x2,x3`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 80);
        out.push_str("t,x1,x2,x3\n");
        for &(t, s) in &self.samples {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", t, s.x1, s.x2, s.x3);
        }
        out
    }
}

/// Integrates the adjusted network for `steps` updates from `initial`.
/// The returned trajectory holds the initial state plus one sample per step;
/// stimulus phase is tied to absolute time n * h.
pub fn simulate(
    initial: StateVector,
    p: NetworkParams,
    stim: &StimulusProgram,
    h: f64,
    steps: usize,
) -> Result<Trajectory, DynamicsError> {
    if steps == 0 {
        return Err(DynamicsError::EmptyRun);
    }
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((0.0, initial));
    let mut s = initial;
    for n in 0..steps {
        let t = n as f64 * h;
        s = rk4_step(s, t, h, |x, tt| ahnn_rhs(x, tt, p, stim));
        if !s.is_finite() || s.max_abs() > DIVERGENCE_LIMIT {
            return Err(DynamicsError::Divergence { step: n });
        }
        samples.push(((n + 1) as f64 * h, s));
    }
    Ok(Trajectory { step: h, samples })
}

/// Difference series x_i(t) - x'_i(t) between the P = +1 and P = -1 runs
/// from the same initial state. With x1(0) = 0 the mirror symmetry forces
/// the x2/x3 series to vanish and the x1 series to equal 2 x1(t).
pub fn mirror_diff(
    initial: StateVector,
    p: NetworkParams,
    h: f64,
    steps: usize,
) -> Result<[Vec<f64>; 3], DynamicsError> {
    let plus = StimulusProgram {
        wms: Wave::Hold(1.0),
        ..StimulusProgram::none()
    };
    let minus = StimulusProgram {
        wms: Wave::Hold(-1.0),
        ..StimulusProgram::none()
    };
    let a = simulate(initial, p, &plus, h, steps)?;
    let b = simulate(initial, p, &minus, h, steps)?;
    let n = a.samples.len();
    let mut d1 = Vec::with_capacity(n);
    let mut d2 = Vec::with_capacity(n);
    let mut d3 = Vec::with_capacity(n);
    for i in 0..n {
        let (_, sa) = a.samples[i];
        let (_, sb) = b.samples[i];
        d1.push(sa.x1 - sb.x1);
        d2.push(sa.x2 - sb.x2);
        d3.push(sa.x3 - sb.x3);
    }
    Ok([d1, d2, d3])
}
