//! Line-oriented text format for optical circuits (`.qot` files).
//!
//! ```text
//! input a_in coherent 0.3 -0.1    # signal with its coherent amplitude
//! vacuum v1 v2
//! amp 100 a_in v1 -> a_c idler    # gain, signal internal -> amplified idler
//! bs matched:100 a_c v2 -> a_out f
//! output a_out
//! discard idler f
//! ```
//!
//! Other statements: `dpa G (+|-) in -> out`, `nopa H in1 in2 -> out1 out2`,
//! `eochan K signal vacuum -> channel` and `displace λ channel vacuum -> out`.
//! `matched:G` is accepted wherever a beamsplitter transmission is expected
//! and stands for 1/G.

use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, CircuitError, Pump, Step};
use crate::mode::BasisKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("line {line}, column {column}: {source}")]
    Semantic {
        line: usize,
        column: usize,
        source: CircuitError,
    },
    /// Whole-file problems such as a missing `output` statement.
    #[error("{0}")]
    Incomplete(CircuitError),
}

impl DslError {
    pub fn location(&self) -> Option<(usize, usize)> {
        match self {
            DslError::Syntax(e) => Some((e.line, e.column)),
            DslError::Semantic { line, column, .. } => Some((*line, *column)),
            DslError::Incomplete(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    /// Column just past the last character of the statement.
    end: usize,
    pos: usize,
}

fn tokenize(line: &str) -> (Vec<Token<'_>>, usize) {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut column = 0;
    for (col0, (byte, ch)) in code.char_indices().enumerate() {
        column = col0 + 1;
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                tokens.push(Token {
                    text: &code[b..byte],
                    column: c,
                });
            }
        } else if start.is_none() {
            start = Some((byte, column));
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token {
            text: &code[b..],
            column: c,
        });
    }
    let end = tokens
        .last()
        .map(|t| t.column + t.text.chars().count())
        .unwrap_or(column + 1);
    (tokens, end)
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Decimal literal with optional sign, fraction and exponent.
fn parse_float(s: &str) -> Option<f64> {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if int.is_empty() && frac.is_empty() || !digits(int) || !digits(frac) {
        return None;
    }
    if let Some(e) = exponent {
        let e = e.strip_prefix(['+', '-']).unwrap_or(e);
        if e.is_empty() || !digits(e) {
            return None;
        }
    }
    s.parse().ok()
}

impl<'a> Line<'a> {
    fn error(&self, expected: &str, tok: Option<Token<'_>>) -> ParseError {
        let (column, found) = match tok {
            Some(t) => (t.column, format!("`{}`", t.text)),
            None => (self.end, "end of line".to_string()),
        };
        ParseError {
            line: self.number,
            column,
            expected: expected.to_string(),
            found,
        }
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self, expected: &str) -> Result<Token<'a>, ParseError> {
        let tok = self.peek().ok_or_else(|| self.error(expected, None))?;
        self.pos += 1;
        Ok(tok)
    }

    fn name(&mut self) -> Result<&'a str, ParseError> {
        let tok = self.next("a mode name")?;
        if is_name(tok.text) {
            Ok(tok.text)
        } else {
            Err(self.error("a mode name", Some(tok)))
        }
    }

    fn names(&mut self) -> Result<Vec<&'a str>, ParseError> {
        let mut out = vec![self.name()?];
        while self.peek().is_some() {
            out.push(self.name()?);
        }
        Ok(out)
    }

    fn float(&mut self) -> Result<f64, ParseError> {
        let tok = self.next("a number")?;
        parse_float(tok.text).ok_or_else(|| self.error("a number", Some(tok)))
    }

    /// Beamsplitter transmission, either a number or `matched:G`.
    fn transmission(&mut self) -> Result<(f64, Token<'a>), ParseError> {
        let tok = self.next("a transmission or matched:G")?;
        let value = match tok.text.strip_prefix("matched:") {
            Some(g) => parse_float(g).map(|g| 1.0 / g),
            None => parse_float(tok.text),
        };
        value
            .map(|v| (v, tok))
            .ok_or_else(|| self.error("a transmission or matched:G", Some(tok)))
    }

    fn literal(&mut self, lit: &str) -> Result<(), ParseError> {
        let expected = format!("`{lit}`");
        let tok = self.next(&expected)?;
        if tok.text == lit {
            Ok(())
        } else {
            Err(self.error(&expected, Some(tok)))
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error("end of statement", Some(t))),
        }
    }

    /// Column of the first token spelling `name`, else of the keyword.
    fn column_of(&self, name: &str) -> usize {
        self.tokens
            .iter()
            .skip(1)
            .find(|t| t.text == name)
            .or(self.tokens.first())
            .map(|t| t.column)
            .unwrap_or(1)
    }
}

fn matched_gain_in_range(text: &str) -> bool {
    match text.strip_prefix("matched:").and_then(parse_float) {
        Some(g) => g >= 1.0,
        None => true,
    }
}

fn semantic(line: &Line<'_>, source: CircuitError, param: Option<Token<'_>>) -> DslError {
    let column = match &source {
        CircuitError::Parameter { .. } => param.map(|t| t.column),
        CircuitError::UndefinedMode { name, .. }
        | CircuitError::RedefinedMode { name }
        | CircuitError::ConsumedMode { name }
        | CircuitError::DuplicateOperand { name, .. }
        | CircuitError::RoleConflict { name }
        | CircuitError::MultipleOutputs { name, .. } => Some(line.column_of(name)),
        CircuitError::Basis(crate::mode::ModeError::DuplicateLabel(name))
        | CircuitError::Basis(crate::mode::ModeError::SecondSignal(name)) => {
            Some(line.column_of(name))
        }
        _ => None,
    };
    DslError::Semantic {
        line: line.number,
        column: column.unwrap_or_else(|| line.column_of("")),
        source,
    }
}

fn two_to_two(line: &mut Line<'_>) -> Result<([String; 2], [String; 2]), ParseError> {
    let i1 = line.name()?;
    let i2 = line.name()?;
    line.literal("->")?;
    let o1 = line.name()?;
    let o2 = line.name()?;
    line.end()?;
    Ok(([i1.into(), i2.into()], [o1.into(), o2.into()]))
}

fn two_to_one(line: &mut Line<'_>) -> Result<([String; 2], String), ParseError> {
    let i1 = line.name()?;
    let i2 = line.name()?;
    line.literal("->")?;
    let o = line.name()?;
    line.end()?;
    Ok(([i1.into(), i2.into()], o.into()))
}

const STATEMENTS: &str =
    "a statement (input, vacuum, bs, amp, dpa, nopa, eochan, displace, output, discard)";

/// Parses and validates a circuit.
pub fn parse(src: &str) -> Result<Circuit, DslError> {
    let mut builder = CircuitBuilder::new();
    for (idx, raw) in src.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let (tokens, end) = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let mut line = Line {
            number: idx + 1,
            tokens,
            end,
            pos: 0,
        };
        let keyword = line.next(STATEMENTS)?;
        let mut param_tok = line.peek();
        let result = match keyword.text {
            "input" => {
                let name = line.name()?;
                let mut disp = Complex64::new(0.0, 0.0);
                if line.peek().is_some() {
                    line.literal("coherent")?;
                    disp.re = line.float()?;
                    disp.im = line.float()?;
                }
                line.end()?;
                builder.input(name, disp).map(|_| ())
            }
            "vacuum" => line
                .names()?
                .into_iter()
                .try_for_each(|n| builder.vacuum(n).map(|_| ())),
            "output" => {
                let name = line.name()?;
                line.end()?;
                builder.output(name).map(|_| ())
            }
            "discard" => line
                .names()?
                .into_iter()
                .try_for_each(|n| builder.discard(n).map(|_| ())),
            "bs" => {
                let (transmission, tok) = line.transmission()?;
                param_tok = Some(tok);
                let (inputs, outputs) = two_to_two(&mut line)?;
                if !matched_gain_in_range(tok.text) {
                    Err(CircuitError::Parameter {
                        step: "bs".into(),
                        source: crate::mode::ModeError::Parameter {
                            name: "matched gain",
                            value: 1.0 / transmission,
                            expected: "≥ 1",
                        },
                    })
                } else {
                    builder
                        .step(Step::Beamsplitter {
                            transmission,
                            inputs,
                            outputs,
                        })
                        .map(|_| ())
                }
            }
            "amp" | "nopa" => {
                let gain = line.float()?;
                let (inputs, outputs) = two_to_two(&mut line)?;
                let step = if keyword.text == "amp" {
                    Step::Amplifier {
                        gain,
                        inputs,
                        outputs,
                    }
                } else {
                    Step::NondegenerateAmp {
                        gain,
                        inputs,
                        outputs,
                    }
                };
                builder.step(step).map(|_| ())
            }
            "dpa" => {
                let gain = line.float()?;
                let sign = line.next("`+` or `-`")?;
                let pump = match sign.text {
                    "+" => Pump::Zero,
                    "-" => Pump::Pi,
                    _ => return Err(line.error("`+` or `-`", Some(sign)).into()),
                };
                let input = line.name()?;
                line.literal("->")?;
                let output = line.name()?;
                line.end()?;
                builder
                    .step(Step::degenerate(gain, pump, input, output))
                    .map(|_| ())
            }
            "eochan" | "displace" => {
                let value = line.float()?;
                let (inputs, output) = two_to_one(&mut line)?;
                let step = if keyword.text == "eochan" {
                    Step::EoChannel {
                        k: value,
                        inputs,
                        output,
                    }
                } else {
                    Step::Displace {
                        lambda: value,
                        inputs,
                        output,
                    }
                };
                builder.step(step).map(|_| ())
            }
            _ => return Err(line.error(STATEMENTS, Some(keyword)).into()),
        };
        result.map_err(|e| semantic(&line, e, param_tok))?;
    }
    builder.build().map_err(DslError::Incomplete)
}

/// Shortest decimal that parses back to the identical `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Canonical text form. Comments and statement interleaving are not kept;
/// `parse(&format(c))` reproduces `c` exactly.
pub fn format(circuit: &Circuit) -> String {
    let mut out = String::new();
    let mut vacua: Vec<&str> = Vec::new();
    let flush = |out: &mut String, vacua: &mut Vec<&str>| {
        if !vacua.is_empty() {
            let _ = writeln!(out, "vacuum {}", vacua.join(" "));
            vacua.clear();
        }
    };
    for entry in circuit.basis().entries() {
        match entry.kind {
            BasisKind::Vacuum => vacua.push(&entry.label),
            BasisKind::Signal => {
                flush(&mut out, &mut vacua);
                let d = circuit.signal_displacement();
                if d.re.to_bits() == 0 && d.im.to_bits() == 0 {
                    let _ = writeln!(out, "input {}", entry.label);
                } else {
                    let _ = writeln!(
                        out,
                        "input {} coherent {} {}",
                        entry.label,
                        num(d.re),
                        num(d.im)
                    );
                }
            }
        }
    }
    flush(&mut out, &mut vacua);
    for step in circuit.steps() {
        let io = |i: &[String], o: &[String]| format!("{} -> {}", i.join(" "), o.join(" "));
        let line = match step {
            Step::Beamsplitter {
                transmission,
                inputs,
                outputs,
            } => format!("bs {} {}", num(*transmission), io(inputs, outputs)),
            Step::Amplifier {
                gain,
                inputs,
                outputs,
            } => format!("amp {} {}", num(*gain), io(inputs, outputs)),
            Step::NondegenerateAmp {
                gain,
                inputs,
                outputs,
            } => format!("nopa {} {}", num(*gain), io(inputs, outputs)),
            Step::DegenerateAmp {
                gain,
                pump,
                input,
                output,
            } => {
                let sign = match pump {
                    Pump::Zero => "+",
                    Pump::Pi => "-",
                };
                format!("dpa {} {sign} {input} -> {output}", num(*gain))
            }
            Step::EoChannel { k, inputs, output } => {
                format!("eochan {} {}", num(*k), io(inputs, std::slice::from_ref(output)))
            }
            Step::Displace {
                lambda,
                inputs,
                output,
            } => format!(
                "displace {} {}",
                num(*lambda),
                io(inputs, std::slice::from_ref(output))
            ),
        };
        out.push_str(&line);
        out.push('\n');
    }
    let _ = writeln!(out, "output {}", circuit.output());
    if !circuit.discarded().is_empty() {
        let _ = writeln!(out, "discard {}", circuit.discarded().join(" "));
    }
    out
}
