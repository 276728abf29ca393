//! Oracle-versus-algebra comparison over a grid of small gains.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use super::{simulate, OracleOptions};
use crate::circuit::presets::{build_ao_classical, build_ao_quantum, build_eo_classical, build_composite_amplifier};
use crate::circuit::{Circuit, CircuitBuilder, Pump, Step};
use crate::metrics::gaussian_fidelity;
use crate::mode::stats::{joint_stats, quadrature_stats};

/// Agreement required between the two routes.
pub const ORACLE_TOL: f64 = 1e-6;
/// Largest gain (either kind) the oracle is trusted with.
pub const MAX_GAIN: f64 = 2.0;
/// Largest coherent amplitude the oracle is trusted with.
pub const MAX_ALPHA: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}; the number-basis oracle only covers 1 ≤ G, H ≤ 2 and |α| ≤ 1 (larger gains need cutoffs whose state vectors grow as cutoff^modes)")]
pub struct BoundaryError(pub String);

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyGrid {
    pub gains: Vec<f64>,
    pub parametric_gains: Vec<f64>,
    pub alphas: Vec<Complex64>,
    pub cutoff: usize,
}

impl Default for VerifyGrid {
    fn default() -> Self {
        Self {
            gains: vec![1.0, 1.2, 2.0],
            parametric_gains: vec![1.0, 1.2, 2.0],
            alphas: [0.0, 0.3, 1.0].iter().map(|&a| Complex64::new(a, 0.0)).collect(),
            cutoff: 40,
        }
    }
}

impl VerifyGrid {
    pub fn check_boundary(&self) -> Result<(), BoundaryError> {
        let in_range = |g: f64| (1.0..=MAX_GAIN).contains(&g);
        if let Some(g) = self.gains.iter().find(|&&g| !in_range(g)) {
            return Err(BoundaryError(format!("G = {g} is outside the oracle boundary")));
        }
        if let Some(h) = self.parametric_gains.iter().find(|&&h| !in_range(h)) {
            return Err(BoundaryError(format!("H = {h} is outside the oracle boundary")));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(a.norm() <= MAX_ALPHA)) {
            return Err(BoundaryError(format!("α = {a} is outside the oracle boundary")));
        }
        if self.cutoff < 2 {
            return Err(BoundaryError(format!("cutoff {} is below 2", self.cutoff)));
        }
        Ok(())
    }
}

/// One circuit to compare, with an optional mode pair whose EPR variances are checked.
#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub circuit: Circuit,
    pub pair: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub case: String,
    pub quantity: String,
    pub algebra: f64,
    /// Oracle value, or the reason the oracle could not produce one.
    pub oracle: Result<f64, String>,
}

impl Check {
    pub fn abs_error(&self) -> Option<f64> {
        self.oracle.as_ref().ok().map(|o| (o - self.algebra).abs())
    }

    pub fn passed(&self) -> bool {
        self.abs_error().is_some_and(|e| e <= ORACLE_TOL)
    }
}

fn single_amp(gain: f64, alpha: Complex64) -> Circuit {
    let mut b = CircuitBuilder::new();
    b.input("a", alpha).unwrap().vacuum("v").unwrap();
    b.step(Step::amplifier(gain, "a", "v", "o", "i")).unwrap();
    b.output("o").unwrap().discard("i").unwrap();
    b.build().unwrap()
}

fn single_dpa(gain: f64, pump: Pump, alpha: Complex64) -> Circuit {
    let mut b = CircuitBuilder::new();
    b.input("a", alpha).unwrap();
    b.step(Step::degenerate(gain, pump, "a", "o")).unwrap();
    b.output("o").unwrap();
    b.build().unwrap()
}

fn epr_pair(h: f64) -> Circuit {
    let mut b = CircuitBuilder::new();
    b.input("v1", Complex64::new(0.0, 0.0)).unwrap().vacuum("v2").unwrap();
    b.step(Step::nondegenerate(h, "v1", "v2", "b1", "b2")).unwrap();
    b.output("b1").unwrap().discard("b2").unwrap();
    b.build().unwrap()
}

/// Every circuit exercised for the grid.
pub fn cases(grid: &VerifyGrid) -> Vec<Case> {
    let mut out = Vec::new();
    let mut push = |name: String, circuit: Circuit, pair: Option<(String, String)>| {
        out.push(Case { name, circuit, pair })
    };
    for &h in &grid.parametric_gains {
        push(format!("epr H={h}"), epr_pair(h), Some(("b1".into(), "b2".into())));
    }
    for &alpha in &grid.alphas {
        let a = format!("α={alpha}");
        push(
            format!("eo-classical λK=1 {a}"),
            build_eo_classical(1.0, 1.0).unwrap().with_signal_displacement(alpha),
            None,
        );
        for &g in &grid.gains {
            push(format!("amp G={g} {a}"), single_amp(g, alpha), None);
            push(format!("dpa+ G={g} {a}"), single_dpa(g, Pump::Zero, alpha), None);
            push(format!("dpa- G={g} {a}"), single_dpa(g, Pump::Pi, alpha), None);
            push(
                format!("composite-amp G={g} {a}"),
                build_composite_amplifier(g).unwrap().with_signal_displacement(alpha),
                None,
            );
            if g <= 1.0 {
                continue;
            }
            push(
                format!("ao-classical G={g} {a}"),
                build_ao_classical(g).unwrap().with_signal_displacement(alpha),
                None,
            );
            for &h in &grid.parametric_gains {
                for composite in [false, true] {
                    let kind = if composite { "composite" } else { "ideal" };
                    push(
                        format!("ao-quantum/{kind} G={g} H={h} {a}"),
                        build_ao_quantum(g, h, composite)
                            .unwrap()
                            .with_signal_displacement(alpha),
                        None,
                    );
                }
            }
        }
    }
    out
}

/// Compares one circuit's output and discarded modes between the two routes.
pub fn compare(case: &Case, opts: OracleOptions) -> Vec<Check> {
    let run = case.circuit.run().expect("preset circuits evaluate");
    let mut checks = Vec::new();
    let mut push = |quantity: String, algebra: f64, oracle: Result<f64, String>| {
        checks.push(Check {
            case: case.name.clone(),
            quantity,
            algebra,
            oracle,
        })
    };
    let oracle = simulate(&case.circuit, opts).map_err(|e| e.to_string());
    let roles: Vec<&str> = std::iter::once(run.output_label.as_str())
        .chain(run.discarded_labels.iter().map(String::as_str))
        .collect();
    for name in roles {
        let alg = quadrature_stats(run.mode(name).expect("role mode exists"));
        let orc = oracle.as_ref().map_err(Clone::clone).and_then(|o| {
            o.slot(name)
                .and_then(|s| o.state.measure(s))
                .map_err(|e| e.to_string())
        });
        let pick = |f: fn(&crate::mode::stats::QuadratureStats) -> f64| {
            orc.as_ref().map(f).map_err(Clone::clone)
        };
        push(format!("{name} ⟨X+⟩"), alg.mean_plus, pick(|s| s.mean_plus));
        push(format!("{name} ⟨X-⟩"), alg.mean_minus, pick(|s| s.mean_minus));
        push(format!("{name} Var(X+)"), alg.var_plus, pick(|s| s.var_plus));
        push(format!("{name} Var(X-)"), alg.var_minus, pick(|s| s.var_minus));
    }
    let alpha = run.input().displacement;
    let out_name = run.output_label.as_str();
    let fid = gaussian_fidelity(&quadrature_stats(run.output()), alpha);
    let orc_fid = oracle.as_ref().map_err(Clone::clone).and_then(|o| {
        o.slot(out_name)
            .and_then(|s| o.state.overlap(alpha, s))
            .map_err(|e| e.to_string())
    });
    push(format!("{out_name} fidelity"), fid, orc_fid);
    if let Some((n1, n2)) = &case.pair {
        let j = joint_stats(run.mode(n1).unwrap(), run.mode(n2).unwrap());
        let orc = oracle.as_ref().map_err(Clone::clone).and_then(|o| {
            let (i, k) = (o.slot(n1).map_err(|e| e.to_string())?, o.slot(n2).map_err(|e| e.to_string())?);
            let (s1, s2) = (
                o.state.measure(i).map_err(|e| e.to_string())?,
                o.state.measure(k).map_err(|e| e.to_string())?,
            );
            let (cp, cm) = o.state.covariances(i, k).map_err(|e| e.to_string())?;
            Ok((
                s1.var_plus + s2.var_plus - 2.0 * cp,
                s1.var_minus + s2.var_minus + 2.0 * cm,
            ))
        });
        push(
            format!("Var({n1}+ − {n2}+)"),
            j.diff_plus_variance(),
            orc.as_ref().map(|v| v.0).map_err(Clone::clone),
        );
        push(
            format!("Var({n1}− + {n2}−)"),
            j.sum_minus_variance(),
            orc.as_ref().map(|v| v.1).map_err(Clone::clone),
        );
    }
    checks
}

/// Runs every case of the grid (in parallel, results in case order).
pub fn run_grid(grid: &VerifyGrid, tail_threshold: f64) -> Result<Vec<Check>, BoundaryError> {
    grid.check_boundary()?;
    let opts = OracleOptions {
        cutoff: grid.cutoff,
        tail_threshold,
    };
    Ok(cases(grid)
        .par_iter()
        .map(|case| compare(case, opts))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect())
}
