//! `--preset name:key=value,...` parsing.
//!
//! | preset               | keys          | default initial |
//! |----------------------|---------------|-----------------|
//! | `polya-friedman`     | `p`           | `1,1`           |
//! | `coupon`             | `p`           | `1,1`           |
//! | `binomial`           | `theta`, `p`  | `1,1`           |
//! | `uniform`            | `theta`       | `1,1`           |
//! | `three-color-coupon` | `p`           | `1,0,0`         |
//! | `plus-minus-two`     |               | `2,2`           |

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use urn_core::{parse_rational, presets, Rational, UrnScheme};

use crate::error::{CliError, Result};

pub const NAMES: [&str; 6] = [
    "polya-friedman",
    "coupon",
    "binomial",
    "uniform",
    "three-color-coupon",
    "plus-minus-two",
];

/// Parses `"2,1"` into counts.
pub fn parse_counts(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("bad count {s:?} in {text:?}")))
        })
        .collect()
}

struct Params {
    spec: String,
    values: BTreeMap<String, String>,
}

impl Params {
    fn take(&mut self, key: &str) -> Result<String> {
        self.values
            .remove(key)
            .ok_or_else(|| CliError::Usage(format!("preset {:?} needs {key}=...", self.spec)))
    }

    fn rational(&mut self, key: &str) -> Result<Rational> {
        let text = self.take(key)?;
        parse_rational(&text).map_err(CliError::scheme(format!("preset {}: {key}", self.spec)))
    }

    fn theta(&mut self) -> Result<u64> {
        let value = self.rational("theta")?;
        if !value.is_integer() {
            return Err(CliError::Usage(format!("theta must be an integer, got {value}")));
        }
        value
            .to_integer()
            .to_u64()
            .ok_or_else(|| CliError::Usage(format!("theta must be nonnegative, got {value}")))
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().next() {
            Some(k) => Err(CliError::Usage(format!("preset {:?}: unknown key {k:?}", self.spec))),
            None => Ok(()),
        }
    }
}

/// Builds a preset scheme; `initial` overrides the preset's default start.
pub fn parse_preset(spec: &str, initial: Option<&[u64]>) -> Result<UrnScheme> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut values = BTreeMap::new();
    for pair in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected key=value in preset, got {pair:?}")))?;
        values.insert(k.trim().to_string(), v.trim().to_string());
    }
    let mut params = Params {
        spec: spec.to_string(),
        values,
    };
    let default_initial: &[u64] = match name {
        "three-color-coupon" => &[1, 0, 0],
        "plus-minus-two" => &[2, 2],
        _ => &[1, 1],
    };
    let init = initial.unwrap_or(default_initial).to_vec();
    let context = format!("preset {spec}");
    let scheme = match name {
        "polya-friedman" => presets::polya_friedman(params.rational("p")?, init),
        "coupon" => presets::coupon(params.rational("p")?, init),
        "binomial" => {
            let theta = params.theta()?;
            presets::binomial(theta, params.rational("p")?, init)
        }
        "uniform" => presets::uniform(params.theta()?, init),
        "three-color-coupon" => presets::three_color_coupon(params.rational("p")?, init),
        "plus-minus-two" => presets::plus_minus_two(init),
        other => {
            return Err(CliError::Usage(format!(
                "unknown preset {other:?}; expected one of {}",
                NAMES.join(", ")
            )))
        }
    }
    .map_err(CliError::scheme(context))?;
    params.finish()?;
    Ok(scheme)
}
