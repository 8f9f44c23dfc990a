//! Named parameter sets for the published network configurations, so that
//! every figure-style run is a single lookup.

use crate::dynamics::{NetworkParams, StateVector, StimulusProgram, Wave, DEFAULT_STEP};

/// A ready-to-run network configuration.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub params: NetworkParams,
    pub stim: StimulusProgram,
    pub x0: StateVector,
    pub h: f64,
}

const X0: StateVector = StateVector::new(0.0, 0.1, 0.0);

fn base(name: &'static str, k: f64, stim: StimulusProgram) -> Preset {
    Preset {
        name,
        params: NetworkParams::new(k),
        stim,
        x0: X0,
        h: DEFAULT_STEP,
    }
}

/// All preset names accepted by [`preset`].
pub const PRESET_NAMES: &[&str] = &[
    "hnn",
    "hnn-k1",
    "wms",
    "wms-k1",
    "wms-svs1",
    "wms-svs1-k1",
    "wms-svs-multi",
    "wms-svs-multi-k1",
    "wms-svs-multi-3d",
    "wms-svs-multi-3d-k1",
    "svs1-hold",
    "cs-svs",
];

/// Looks up a configuration by name.
///
/// * `hnn` / `hnn-k1`: the unstimulated base network.
/// * `wms` family: four weight-matrix square waves (A = 1, omega = 0.01).
/// * `wms-svs1`: adds the axis-1 offset wave (A1 = 5, omega1 = 0.02);
///   generates the eight-scroll attractor at k = 1.15.
/// * `wms-svs-multi`: adds the axis-3 wave (A3 = 12, omega3 = 0.022) for
///   the planar grid; the `-3d` variants add axis 2 (A2 = 5,
///   omega2 = 0.021) for the spatial grid.
/// * `svs1-hold`: constant weight factor +1 with the axis-1 offset held at
///   its active value, k = 1 - the configuration whose spectrum the offset
///   equivalence property pins to the base network.
/// * `cs-svs`: constant axis-1 bias (default 0.1) plus a weak axis-1 wave
///   (A1 = 0.05, omega1 = 0.01), k = 1.15; sweeping the bias toward 1
///   degenerates the chaos.
pub fn preset(name: &str) -> Option<Preset> {
    let wms = StimulusProgram::none().with_wms(1.0, 0.01);
    let p = match name {
        "hnn" => base("hnn", 1.15, StimulusProgram::none()),
        "hnn-k1" => base("hnn-k1", 1.0, StimulusProgram::none()),
        "wms" => base("wms", 1.15, wms),
        "wms-k1" => base("wms-k1", 1.0, wms),
        "wms-svs1" => base("wms-svs1", 1.15, wms.with_svs(0, 5.0, 0.02)),
        "wms-svs1-k1" => base("wms-svs1-k1", 1.0, wms.with_svs(0, 5.0, 0.02)),
        "wms-svs-multi" => base(
            "wms-svs-multi",
            1.15,
            wms.with_svs(0, 5.0, 0.02).with_svs(2, 12.0, 0.022),
        ),
        "wms-svs-multi-k1" => base(
            "wms-svs-multi-k1",
            1.0,
            wms.with_svs(0, 5.0, 0.02).with_svs(2, 12.0, 0.022),
        ),
        "wms-svs-multi-3d" => base(
            "wms-svs-multi-3d",
            1.15,
            wms.with_svs(0, 5.0, 0.02)
                .with_svs(1, 5.0, 0.021)
                .with_svs(2, 12.0, 0.022),
        ),
        "wms-svs-multi-3d-k1" => base(
            "wms-svs-multi-3d-k1",
            1.0,
            wms.with_svs(0, 5.0, 0.02)
                .with_svs(1, 5.0, 0.021)
                .with_svs(2, 12.0, 0.022),
        ),
        "svs1-hold" => base(
            "svs1-hold",
            1.0,
            StimulusProgram {
                wms: Wave::Hold(1.0),
                svs: [Wave::Hold(5.0), Wave::Off, Wave::Off],
                cs: None,
            },
        ),
        "cs-svs" => base(
            "cs-svs",
            1.15,
            StimulusProgram::none().with_svs(0, 0.05, 0.01).with_cs(0.1),
        ),
        _ => return None,
    };
    Some(p)
}

/// Per-axis scroll offset lists implied by a preset's SVS amplitudes:
/// {0} for silent axes, {0, -Ai} for driven ones.
pub fn svs_offsets(stim: &StimulusProgram) -> [Vec<f64>; 3] {
    let mut out = [vec![0.0], vec![0.0], vec![0.0]];
    for (axis, wave) in stim.svs.iter().enumerate() {
        if let Wave::Square { amplitude, .. } = wave {
            if *amplitude != 0.0 {
                out[axis].push(-amplitude);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_preset_resolves() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            assert_eq!(p.name, *name);
            assert_eq!(p.x0, StateVector::new(0.0, 0.1, 0.0));
        }
        assert!(preset("nope").is_none());
    }

    #[test]
    fn offsets_follow_the_driven_axes() {
        let p = preset("wms-svs-multi").unwrap();
        let offs = svs_offsets(&p.stim);
        assert_eq!(offs[0], vec![0.0, -5.0]);
        assert_eq!(offs[1], vec![0.0]);
        assert_eq!(offs[2], vec![0.0, -12.0]);
    }
}
