use std::fmt;
use std::time::Duration;

use kronlab_core::DenseTensor;

use crate::format::format_short;

/// Summary of one input operand.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDigest {
    pub name: String,
    pub dims: Vec<usize>,
    pub fro_norm: f64,
}

impl InputDigest {
    pub fn of(name: &str, x: &DenseTensor) -> Self {
        Self { name: name.to_string(), dims: x.dims().to_vec(), fro_norm: x.fro_norm() }
    }
}

/// What a command did: echo, input digests, `key value` outputs and timings.
///
/// Residuals placed in `outputs` are measured on the materialised results,
/// never copied from the formulas that produced them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<(String, String)>,
    pub timings: Vec<(String, Duration)>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self { command, ..Self::default() }
    }

    pub fn input(&mut self, digest: InputDigest) {
        self.inputs.push(digest);
    }

    pub fn output(&mut self, key: &str, value: impl fmt::Display) {
        self.outputs.push((key.to_string(), value.to_string()));
    }

    pub fn sigmas(&mut self, key: &str, sigma: &[f64]) {
        let s: Vec<String> = sigma.iter().map(|&x| format_short(x)).collect();
        self.output(key, s.join(" "));
    }

    pub fn timing(&mut self, phase: &str, elapsed: Duration) {
        self.timings.push((phase.to_string(), elapsed));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.outputs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command {}", self.command.join(" "))?;
        for d in &self.inputs {
            let dims: Vec<String> = d.dims.iter().map(|n| n.to_string()).collect();
            writeln!(f, "input {} dims {} fro_norm {}", d.name, dims.join("x"), format_short(d.fro_norm))?;
        }
        for (k, v) in &self.outputs {
            writeln!(f, "{k} {v}")?;
        }
        for (phase, t) in &self.timings {
            writeln!(f, "time_s {phase} {:.6}", t.as_secs_f64())?;
        }
        Ok(())
    }
}
