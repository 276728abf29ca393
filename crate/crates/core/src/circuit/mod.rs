//! Feed-forward optical circuits over named modes.
//!
//! A [`Circuit`] is a basis of input modes followed by an ordered list of
//! element applications. Every mode name is defined exactly once and consumed
//! at most once, so the circuit is a DAG in which no operator is duplicated.

pub mod presets;

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use num_complex::Complex64;
use thiserror::Error;

pub use crate::mode::elements::Pump;

use crate::mode::elements::{
    beamsplitter, check_gain, check_positive, check_transmission, degenerate_pa_pumped,
    displace_reconstruct, eo_classical_channel, ideal_linear_amplifier, nondegenerate_pa,
};
use crate::mode::{BasisKind, BogoliubovMode, ModeError, VacuumBasis};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error(transparent)]
    Basis(ModeError),
    #[error("{step}: {source}")]
    Parameter { step: String, source: ModeError },
    #[error("undefined mode `{name}` in {step}")]
    UndefinedMode { name: String, step: String },
    #[error("mode `{name}` is already defined")]
    RedefinedMode { name: String },
    #[error("mode `{name}` was already consumed by an earlier element")]
    ConsumedMode { name: String },
    #[error("mode `{name}` appears twice as an operand of {step}")]
    DuplicateOperand { name: String, step: String },
    #[error("mode `{name}` already has the output or discarded role")]
    RoleConflict { name: String },
    #[error("circuit has no signal input")]
    MissingInput,
    #[error("circuit has no output")]
    MissingOutput,
    #[error("circuit already has output `{existing}`; cannot also output `{name}`")]
    MultipleOutputs { existing: String, name: String },
}

/// One element application with named operands and results.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Beamsplitter {
        transmission: f64,
        inputs: [String; 2],
        outputs: [String; 2],
    },
    /// Ideal phase-insensitive amplifier; outputs are (amplified, idler).
    Amplifier {
        gain: f64,
        inputs: [String; 2],
        outputs: [String; 2],
    },
    DegenerateAmp {
        gain: f64,
        pump: Pump,
        input: String,
        output: String,
    },
    NondegenerateAmp {
        gain: f64,
        inputs: [String; 2],
        outputs: [String; 2],
    },
    /// Electro-optic sender; inputs are (signal, vacuum).
    EoChannel {
        k: f64,
        inputs: [String; 2],
        output: String,
    },
    /// Electro-optic receiver; inputs are (channel, vacuum).
    Displace {
        lambda: f64,
        inputs: [String; 2],
        output: String,
    },
}

fn pair(a: &str, b: &str) -> [String; 2] {
    [a.to_string(), b.to_string()]
}

impl Step {
    pub fn beamsplitter(transmission: f64, in1: &str, in2: &str, out1: &str, out2: &str) -> Self {
        Step::Beamsplitter {
            transmission,
            inputs: pair(in1, in2),
            outputs: pair(out1, out2),
        }
    }

    pub fn amplifier(gain: f64, signal: &str, internal: &str, amplified: &str, idler: &str) -> Self {
        Step::Amplifier {
            gain,
            inputs: pair(signal, internal),
            outputs: pair(amplified, idler),
        }
    }

    pub fn degenerate(gain: f64, pump: Pump, input: &str, output: &str) -> Self {
        Step::DegenerateAmp {
            gain,
            pump,
            input: input.to_string(),
            output: output.to_string(),
        }
    }

    pub fn nondegenerate(gain: f64, in1: &str, in2: &str, out1: &str, out2: &str) -> Self {
        Step::NondegenerateAmp {
            gain,
            inputs: pair(in1, in2),
            outputs: pair(out1, out2),
        }
    }

    pub fn eo_channel(k: f64, signal: &str, vacuum: &str, channel: &str) -> Self {
        Step::EoChannel {
            k,
            inputs: pair(signal, vacuum),
            output: channel.to_string(),
        }
    }

    pub fn displace(lambda: f64, channel: &str, vacuum: &str, output: &str) -> Self {
        Step::Displace {
            lambda,
            inputs: pair(channel, vacuum),
            output: output.to_string(),
        }
    }

    /// DSL keyword of the element.
    pub fn keyword(&self) -> &'static str {
        match self {
            Step::Beamsplitter { .. } => "bs",
            Step::Amplifier { .. } => "amp",
            Step::DegenerateAmp { .. } => "dpa",
            Step::NondegenerateAmp { .. } => "nopa",
            Step::EoChannel { .. } => "eochan",
            Step::Displace { .. } => "displace",
        }
    }

    pub fn inputs(&self) -> Vec<&str> {
        match self {
            Step::DegenerateAmp { input, .. } => vec![input.as_str()],
            Step::Beamsplitter { inputs, .. }
            | Step::Amplifier { inputs, .. }
            | Step::NondegenerateAmp { inputs, .. }
            | Step::EoChannel { inputs, .. }
            | Step::Displace { inputs, .. } => inputs.iter().map(String::as_str).collect(),
        }
    }

    pub fn outputs(&self) -> Vec<&str> {
        match self {
            Step::DegenerateAmp { output, .. }
            | Step::EoChannel { output, .. }
            | Step::Displace { output, .. } => vec![output.as_str()],
            Step::Beamsplitter { outputs, .. }
            | Step::Amplifier { outputs, .. }
            | Step::NondegenerateAmp { outputs, .. } => outputs.iter().map(String::as_str).collect(),
        }
    }

    /// Range check of the element parameter.
    pub fn check_params(&self) -> Result<(), ModeError> {
        match *self {
            Step::Beamsplitter { transmission, .. } => check_transmission(transmission),
            Step::Amplifier { gain, .. } | Step::DegenerateAmp { gain, .. } => {
                check_gain("gain", gain)
            }
            Step::NondegenerateAmp { gain, .. } => check_gain("parametric gain", gain),
            Step::EoChannel { k, .. } => check_positive("K", k),
            Step::Displace { lambda, .. } => check_positive("lambda", lambda),
        }
    }

    /// Applies the element to already-resolved operand modes.
    pub fn apply(&self, operands: &[&BogoliubovMode]) -> Result<Vec<BogoliubovMode>, ModeError> {
        Ok(match *self {
            Step::Beamsplitter { transmission, .. } => {
                let (a, b) = beamsplitter(operands[0], operands[1], transmission)?;
                vec![a, b]
            }
            Step::Amplifier { gain, .. } => {
                let (a, b) = ideal_linear_amplifier(operands[0], operands[1], gain)?;
                vec![a, b]
            }
            Step::DegenerateAmp { gain, pump, .. } => {
                vec![degenerate_pa_pumped(operands[0], gain, pump)?]
            }
            Step::NondegenerateAmp { gain, .. } => {
                let (a, b) = nondegenerate_pa(operands[0], operands[1], gain)?;
                vec![a, b]
            }
            Step::EoChannel { k, .. } => vec![eo_classical_channel(operands[0], operands[1], k)?],
            Step::Displace { lambda, .. } => {
                vec![displace_reconstruct(operands[0], operands[1], lambda)?]
            }
        })
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "`{} {} -> {}`",
            self.keyword(),
            self.inputs().join(" "),
            self.outputs().join(" ")
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Live,
    Consumed,
    Role,
}

/// Incremental, validating construction of a [`Circuit`].
#[derive(Debug, Clone, Default)]
pub struct CircuitBuilder {
    basis: VacuumBasis,
    displacement: Complex64,
    steps: Vec<Step>,
    output: Option<String>,
    discarded: Vec<String>,
    status: HashMap<String, Status>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn define(&mut self, name: &str) -> Result<(), CircuitError> {
        if self.status.contains_key(name) {
            return Err(CircuitError::RedefinedMode {
                name: name.to_string(),
            });
        }
        self.status.insert(name.to_string(), Status::Live);
        Ok(())
    }

    fn add_basis(&mut self, label: &str, kind: BasisKind) -> Result<&mut Self, CircuitError> {
        if self.status.contains_key(label) {
            return Err(CircuitError::RedefinedMode {
                name: label.to_string(),
            });
        }
        self.basis.push(label, kind).map_err(CircuitError::Basis)?;
        self.define(label)?;
        Ok(self)
    }

    /// Declares the signal input carrying a coherent displacement.
    pub fn input(&mut self, label: &str, displacement: Complex64) -> Result<&mut Self, CircuitError> {
        self.add_basis(label, BasisKind::Signal)?;
        self.displacement = displacement;
        Ok(self)
    }

    pub fn vacuum(&mut self, label: &str) -> Result<&mut Self, CircuitError> {
        self.add_basis(label, BasisKind::Vacuum)
    }

    fn require_live(&self, name: &str, step: &dyn fmt::Display) -> Result<(), CircuitError> {
        match self.status.get(name) {
            None => Err(CircuitError::UndefinedMode {
                name: name.to_string(),
                step: step.to_string(),
            }),
            Some(Status::Live) => Ok(()),
            Some(Status::Consumed) => Err(CircuitError::ConsumedMode {
                name: name.to_string(),
            }),
            Some(Status::Role) => Err(CircuitError::RoleConflict {
                name: name.to_string(),
            }),
        }
    }

    pub fn step(&mut self, step: Step) -> Result<&mut Self, CircuitError> {
        step.check_params()
            .map_err(|source| CircuitError::Parameter {
                step: step.to_string(),
                source,
            })?;
        let inputs = step.inputs();
        for (i, name) in inputs.iter().enumerate() {
            self.require_live(name, &step)?;
            if inputs[..i].contains(name) {
                return Err(CircuitError::DuplicateOperand {
                    name: name.to_string(),
                    step: step.to_string(),
                });
            }
        }
        let outputs = step.outputs();
        for (i, name) in outputs.iter().enumerate() {
            if self.status.contains_key(*name) || outputs[..i].contains(name) {
                return Err(CircuitError::RedefinedMode {
                    name: name.to_string(),
                });
            }
        }
        for name in &inputs {
            self.status.insert(name.to_string(), Status::Consumed);
        }
        for name in &outputs {
            self.define(name)?;
        }
        self.steps.push(step);
        Ok(self)
    }

    pub fn output(&mut self, name: &str) -> Result<&mut Self, CircuitError> {
        if let Some(existing) = &self.output {
            return Err(CircuitError::MultipleOutputs {
                existing: existing.clone(),
                name: name.to_string(),
            });
        }
        self.require_live(name, &"output")?;
        self.status.insert(name.to_string(), Status::Role);
        self.output = Some(name.to_string());
        Ok(self)
    }

    pub fn discard(&mut self, name: &str) -> Result<&mut Self, CircuitError> {
        self.require_live(name, &"discard")?;
        self.status.insert(name.to_string(), Status::Role);
        self.discarded.push(name.to_string());
        Ok(self)
    }

    pub fn build(&self) -> Result<Circuit, CircuitError> {
        if self.basis.signal_index().is_none() {
            return Err(CircuitError::MissingInput);
        }
        let output = self.output.clone().ok_or(CircuitError::MissingOutput)?;
        Ok(Circuit {
            basis: self.basis.clone(),
            displacement: self.displacement,
            steps: self.steps.clone(),
            output,
            discarded: self.discarded.clone(),
        })
    }
}

/// A validated feed-forward circuit with one output and any number of
/// discarded modes.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    basis: VacuumBasis,
    displacement: Complex64,
    steps: Vec<Step>,
    output: String,
    discarded: Vec<String>,
}

impl Circuit {
    /// Validates the parts by replaying them through a [`CircuitBuilder`].
    pub fn from_parts(
        basis: &VacuumBasis,
        displacement: Complex64,
        steps: &[Step],
        output: &str,
        discarded: &[String],
    ) -> Result<Self, CircuitError> {
        let mut b = CircuitBuilder::new();
        for e in basis.entries() {
            match e.kind {
                BasisKind::Signal => b.input(&e.label, displacement)?,
                BasisKind::Vacuum => b.vacuum(&e.label)?,
            };
        }
        for s in steps {
            b.step(s.clone())?;
        }
        b.output(output)?;
        for d in discarded {
            b.discard(d)?;
        }
        b.build()
    }

    pub fn basis(&self) -> &VacuumBasis {
        &self.basis
    }

    pub fn signal_label(&self) -> &str {
        let idx = self.basis.signal_index().expect("validated circuit has a signal");
        self.basis.label(idx)
    }

    pub fn signal_displacement(&self) -> Complex64 {
        self.displacement
    }

    /// Same circuit with a different coherent amplitude on the signal input.
    pub fn with_signal_displacement(mut self, displacement: Complex64) -> Self {
        self.displacement = displacement;
        self
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn output(&self) -> &str {
        &self.output
    }

    pub fn discarded(&self) -> &[String] {
        &self.discarded
    }

    /// Evaluates every step in order.
    pub fn run(&self) -> Result<RunResult, CircuitError> {
        run(self)
    }
}

/// All operators produced by one evaluation of a circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub basis: VacuumBasis,
    pub input_label: String,
    pub output_label: String,
    pub discarded_labels: Vec<String>,
    /// Every named mode in definition order: basis inputs first, then step results.
    pub modes: IndexMap<String, BogoliubovMode>,
}

impl RunResult {
    pub fn input(&self) -> &BogoliubovMode {
        &self.modes[&self.input_label]
    }

    pub fn output(&self) -> &BogoliubovMode {
        &self.modes[&self.output_label]
    }

    pub fn mode(&self, name: &str) -> Option<&BogoliubovMode> {
        self.modes.get(name)
    }

    pub fn discarded(&self) -> impl Iterator<Item = (&str, &BogoliubovMode)> {
        self.discarded_labels
            .iter()
            .map(|n| (n.as_str(), &self.modes[n]))
    }

    /// Amplitude coefficient of the output on the signal input.
    pub fn signal_coefficient(&self) -> Complex64 {
        let idx = self.basis.signal_index().expect("validated circuit has a signal");
        self.output().coeff(idx).alpha
    }
}

pub fn run(circuit: &Circuit) -> Result<RunResult, CircuitError> {
    let basis = &circuit.basis;
    let mut modes: IndexMap<String, BogoliubovMode> = basis
        .entries()
        .iter()
        .map(|e| e.label.clone())
        .zip(basis.initial_modes(circuit.displacement))
        .collect();
    for step in &circuit.steps {
        let operands = step
            .inputs()
            .into_iter()
            .map(|name| {
                modes.get(name).ok_or_else(|| CircuitError::UndefinedMode {
                    name: name.to_string(),
                    step: step.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let results = step
            .apply(&operands)
            .map_err(|source| CircuitError::Parameter {
                step: step.to_string(),
                source,
            })?;
        for (name, mode) in step.outputs().into_iter().zip(results) {
            modes.insert(name.to_string(), mode);
        }
    }
    for name in std::iter::once(&circuit.output).chain(&circuit.discarded) {
        if !modes.contains_key(name) {
            return Err(CircuitError::UndefinedMode {
                name: name.clone(),
                step: "roles".to_string(),
            });
        }
    }
    Ok(RunResult {
        basis: basis.clone(),
        input_label: circuit.signal_label().to_string(),
        output_label: circuit.output.clone(),
        discarded_labels: circuit.discarded.clone(),
        modes,
    })
}
