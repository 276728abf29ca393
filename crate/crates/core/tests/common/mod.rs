//! Random circuit generation shared by the property and acceptance suites.
#![allow(dead_code)]

use cvtele::circuit::{Circuit, CircuitBuilder, Pump, Step};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_STEPS: usize = 20;
pub const MAX_GAIN: f64 = 1.5;

/// A random valid circuit and the names of its electro-optic (non-field) modes.
pub struct RandomCircuit {
    pub circuit: Circuit,
    pub classical: Vec<String>,
    /// Modes still unconsumed at the end, output included.
    pub live: Vec<String>,
}

/// Builds a circuit of up to [`MAX_STEPS`] elements over one signal and 1 to
/// 5 vacua. Gains stay in [1, 1.5] and λK in [0.5, 1.5]. Twenty chained
/// gain-2 elements can reach |α|² near 1e8, where f64 cancellation alone
/// costs more than 1e-10 in the commutator.
pub fn random_circuit(seed: u64) -> RandomCircuit {
    random_circuit_with(seed, MAX_GAIN)
}

pub fn random_circuit_with(seed: u64, max_gain: f64) -> RandomCircuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = CircuitBuilder::new();
    let alpha = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    b.input("a_in", alpha).unwrap();
    let mut live = vec!["a_in".to_string()];
    for k in 0..rng.gen_range(1..=5) {
        let name = format!("v{k}");
        b.vacuum(&name).unwrap();
        live.push(name);
    }
    let mut classical = Vec::new();
    let mut fresh = 0usize;
    let mut next = || {
        fresh += 1;
        format!("m{fresh}")
    };
    let steps = rng.gen_range(0..=MAX_STEPS);
    let mut taken = 0;
    while taken < steps {
        let kind = rng.gen_range(0..6);
        let need = match kind {
            3 => 1,
            4 => 3,
            _ => 2,
        };
        if live.len() < need {
            continue;
        }
        let mut pick = |live: &mut Vec<String>| {
            let i = rng.gen_range(0..live.len());
            live.swap_remove(i)
        };
        let x = pick(&mut live);
        match kind {
            0 | 5 => {
                let y = pick(&mut live);
                let eps = if kind == 0 {
                    rng.gen_range(0.0..=1.0)
                } else {
                    1.0 / rng.gen_range(1.0..max_gain)
                };
                let (o1, o2) = (next(), next());
                b.step(Step::beamsplitter(eps, &x, &y, &o1, &o2)).unwrap();
                live.extend([o1, o2]);
            }
            1 | 2 => {
                let y = pick(&mut live);
                let g = rng.gen_range(1.0..=max_gain);
                let (o1, o2) = (next(), next());
                let step = if kind == 1 {
                    Step::amplifier(g, &x, &y, &o1, &o2)
                } else {
                    Step::nondegenerate(g, &x, &y, &o1, &o2)
                };
                b.step(step).unwrap();
                live.extend([o1, o2]);
            }
            3 => {
                let pump = if rng.gen() { Pump::Zero } else { Pump::Pi };
                let o = next();
                b.step(Step::degenerate(rng.gen_range(1.0..=max_gain), pump, &x, &o)).unwrap();
                live.push(o);
            }
            _ => {
                let (y, z) = (pick(&mut live), pick(&mut live));
                let k = rng.gen_range(0.5..1.5);
                let lambda = rng.gen_range(0.5..1.5) / k;
                let (ch, o) = (next(), next());
                b.step(Step::eo_channel(k, &x, &y, &ch)).unwrap();
                b.step(Step::displace(lambda, &ch, &z, &o)).unwrap();
                classical.push(ch);
                live.push(o);
            }
        }
        taken += 1;
    }
    let out = live[rng.gen_range(0..live.len())].clone();
    b.output(&out).unwrap();
    for name in live.iter().filter(|n| **n != out) {
        if rng.gen_bool(0.5) {
            b.discard(name).unwrap();
        }
    }
    RandomCircuit {
        circuit: b.build().unwrap(),
        classical,
        live,
    }
}
