use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::input::ExternalInput;

/// Parameters of one network simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub n: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub tau_d: f64,
    pub dt: f64,
    /// Initial synaptic drives, all `>= 0`.
    pub s0: Vec<f64>,
    pub inputs: Vec<ExternalInput>,
    #[serde(default)]
    pub seed: u64,
}

impl NetworkConfig {
    /// Config with the same input on every neuron.
    pub fn uniform_input(
        horizon: f64,
        tau_d: f64,
        dt: f64,
        s0: Vec<f64>,
        input: ExternalInput,
        seed: u64,
    ) -> Self {
        let n = s0.len();
        Self { n, horizon, tau_d, dt, s0, inputs: vec![input; n], seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        for (name, v) in [("T", self.horizon), ("tau_d", self.tau_d), ("dt", self.dt)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if self.s0.len() != self.n {
            return Err(Error::Dimension(format!("s0 has {} entries, n = {}", self.s0.len(), self.n)));
        }
        if let Some(v) = self.s0.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Config(format!("initial drives must be finite and >= 0, got {v}")));
        }
        if self.inputs.len() != self.n {
            return Err(Error::Dimension(format!(
                "{} external inputs for n = {}",
                self.inputs.len(),
                self.n
            )));
        }
        for b in &self.inputs {
            b.validate(self.horizon)?;
        }
        Ok(())
    }

    /// `tau_d / dt` as an integer, or a config error when it is not integral.
    pub fn delay_steps(&self) -> Result<usize> {
        integral_ratio(self.tau_d, self.dt)
            .ok_or_else(|| Error::Config(format!("tau_d / dt = {} is not an integer", self.tau_d / self.dt)))
    }

    /// Number of Euler steps covering `[0, T]`.
    pub fn horizon_steps(&self) -> usize {
        integral_ratio(self.horizon, self.dt).unwrap_or((self.horizon / self.dt).floor() as usize)
    }
}

fn integral_ratio(num: f64, den: f64) -> Option<usize> {
    let r = num / den;
    let k = r.round();
    if k >= 1.0 && (r - k).abs() <= 1e-9 * k.max(1.0) {
        Some(k as usize)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dt: f64) -> NetworkConfig {
        NetworkConfig::uniform_input(10.0, 1.0, dt, vec![0.5; 3], ExternalInput::constant(0.1), 0)
    }

    #[test]
    fn delay_must_be_integral_in_steps() {
        assert_eq!(cfg(1.0 / 500.0).delay_steps().unwrap(), 500);
        assert!(cfg(0.3).delay_steps().is_err());
        assert_eq!(cfg(1.0 / 500.0).horizon_steps(), 5000);
    }

    #[test]
    fn validation() {
        cfg(0.01).validate().unwrap();
        let mut c = cfg(0.01);
        c.s0[1] = -0.1;
        assert!(c.validate().is_err());
        let mut c = cfg(0.01);
        c.inputs.pop();
        assert!(c.validate().is_err());
    }

    #[test]
    fn json_uses_capital_t() {
        let s = serde_json::to_value(cfg(0.5)).unwrap();
        assert_eq!(s["T"], 10.0);
        let back: NetworkConfig = serde_json::from_value(s).unwrap();
        assert_eq!(back, cfg(0.5));
    }
}
