//! Calibrated slack constants, shipped as `calibration.txt` next to the
//! crate manifest and embedded at compile time.

use std::collections::BTreeMap;
use std::sync::OnceLock;

const SOURCE: &str = include_str!("../calibration.txt");

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub version: u32,
    pub truncated_sum_slack: f64,
    pub afe_slack: f64,
    pub chi_asymptotic_slack: f64,
    pub afe_squared_abs_t1000: f64,
    pub mv_constant_over_pi: f64,
    pub laurent_radius: f64,
    pub laurent_nodes: usize,
}

impl Calibration {
    /// The mean-value envelope constant `C_MV`.
    pub fn mv_constant(&self) -> f64 {
        self.mv_constant_over_pi * std::f64::consts::PI
    }

    /// Parses a `key = value` file. `#` starts a comment; unknown keys are rejected.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        let mut take = |key: &str| -> Result<String, String> {
            map.remove(key).ok_or_else(|| format!("missing key {key}"))
        };
        let num = |s: String, key: &str| -> Result<f64, String> {
            s.parse::<f64>().map_err(|e| format!("{key}: {e}"))
        };
        let cal = Calibration {
            version: take("version")?
                .parse()
                .map_err(|e| format!("version: {e}"))?,
            truncated_sum_slack: num(take("truncated_sum_slack")?, "truncated_sum_slack")?,
            afe_slack: num(take("afe_slack")?, "afe_slack")?,
            chi_asymptotic_slack: num(take("chi_asymptotic_slack")?, "chi_asymptotic_slack")?,
            afe_squared_abs_t1000: num(take("afe_squared_abs_t1000")?, "afe_squared_abs_t1000")?,
            mv_constant_over_pi: num(take("mv_constant_over_pi")?, "mv_constant_over_pi")?,
            laurent_radius: num(take("laurent_radius")?, "laurent_radius")?,
            laurent_nodes: take("laurent_nodes")?
                .parse()
                .map_err(|e| format!("laurent_nodes: {e}"))?,
        };
        if let Some(key) = map.keys().next() {
            return Err(format!("unknown key {key}"));
        }
        Ok(cal)
    }
}

/// The shipped calibration.
pub fn calibration() -> &'static Calibration {
    static CAL: OnceLock<Calibration> = OnceLock::new();
    CAL.get_or_init(|| Calibration::parse(SOURCE).expect("shipped calibration.txt is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_file_parses() {
        let cal = calibration();
        assert_eq!(cal.version, 1);
        assert_eq!(cal.afe_slack, 5.0);
        assert_eq!(cal.laurent_nodes, 512);
        assert!((cal.mv_constant() - 4.0 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{SOURCE}\nbogus = 1\n");
        assert!(Calibration::parse(&text).unwrap_err().contains("bogus"));
    }
}
