//! TOML scenario files.
//!
//! ```toml
//! label = "two-targets"
//! trials = 1000
//! threshold = 0.25
//!
//! [radar]
//! sample_rate = 10e6
//! wave_speed = 3e8        # optional
//! n_bins = 128            # optional
//! samples_per_symbol = 1  # optional
//!
//! [channel]
//! direct_amplitude = 1.0  # optional
//! delay = "uniform_over_bins"   # or { fixed = 42 }
//! noise_sigma = 0.0       # optional
//! smoothing_window = 1    # optional
//! seed = 2013             # optional
//!
//! [[channel.targets]]
//! range_m = 240.0
//! amplitude = 0.6
//! ```
//!
//! Unknown keys are rejected at every level.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{range_to_bin, ChannelConfig, RadarParams};
use crate::error::{Error, Result};
use crate::pipeline::reference_code;

/// Name of the bundled two-target scenario.
pub const BUILTIN_FIG5: &str = "fig5";

const FIG5_TEXT: &str = include_str!("../scenarios/fig5.scenario");

/// Off-grid targets further than this from a bin centre produce a warning.
pub const RESIDUAL_WARN_BINS: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub label: String,
    pub trials: usize,
    pub threshold: f64,
    pub radar: RadarParams,
    pub channel: ChannelConfig,
}

impl Scenario {
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let scenario: Scenario = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        self.radar.validate()?;
        reference_code(&self.radar)?;
        self.channel.validate(&self.radar)?;
        if self.trials < 1 {
            return Err(Error::validation("trials", "must be at least 1"));
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(Error::validation(
                "threshold",
                format!("{} is outside (0, 1]", self.threshold),
            ));
        }
        Ok(())
    }

    /// The bundled two-target scenario: 10 MSPS, targets at 240 m and
    /// 480 m, uniform transport delay, no noise.
    pub fn fig5() -> Self {
        Self::from_toml_str(FIG5_TEXT, Path::new(BUILTIN_FIG5)).expect("bundled scenario is valid")
    }

    /// Messages for targets that sit far from a bin centre.
    pub fn warnings(&self) -> Vec<String> {
        self.channel
            .targets
            .iter()
            .enumerate()
            .filter_map(|(i, t)| {
                let rb = range_to_bin(t.range_m, &self.radar).ok()?;
                (rb.residual.abs() > RESIDUAL_WARN_BINS).then(|| {
                    format!(
                        "channel.targets[{i}]: {} m is {:.2} bins from bin {}; it will be reported at that bin",
                        t.range_m, rb.residual, rb.bin
                    )
                })
            })
            .collect()
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Scenario::from_toml_str(&text, path)
}

/// A file path, or the name of a bundled scenario when no such file exists.
pub fn resolve_scenario(spec: &str) -> Result<Scenario> {
    let path = Path::new(spec);
    if path.exists() || spec != BUILTIN_FIG5 {
        return load_scenario(path);
    }
    Ok(Scenario::fig5())
}
