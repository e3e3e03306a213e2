//! Sensitivity of synthesized circuits to errors in their base pswitches.
//!
//! Each perturbed pswitch has exactly two active states. A signed error `e`
//! moves mass `e` from its high active state to its low one, so a nominal
//! `(1/2, 0, 1/2)` switch becomes `(1/2 + e, 0, 1/2 - e)`. Every pswitch id
//! gets its own error.
//!
//! Output probabilities are multilinear in the per-switch errors whenever
//! each id labels a single leaf, so the largest deviation over the box
//! `[-eps, eps]^m` is attained at a corner and [`ErrorMode::Corners`] is exact.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::circuit::{Circuit, SwitchElement};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::eval::{eval, Assignment};
use crate::par;
use crate::rational::{self as q, Rational};

/// Most pswitches the exhaustive corner search accepts.
pub const CORNER_CAP: usize = 16;

/// Per-pswitch signed errors, each bounded by `epsilon` in absolute value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationModel {
    pub epsilon: Rational,
    pub errors: BTreeMap<String, Rational>,
}

impl PerturbationModel {
    pub fn new(epsilon: Rational) -> Self {
        Self {
            epsilon,
            errors: BTreeMap::new(),
        }
    }

    pub fn with(mut self, id: impl Into<String>, error: Rational) -> Self {
        self.errors.insert(id.into(), error);
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "epsilon": q::format(&self.epsilon),
            "errors": self.errors.iter().map(|(k, v)| (k.clone(), json!(q::format(v)))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

/// Moves `error` from the high active state of `dist` to the low one.
pub fn perturb_distribution(dist: &Distribution, error: &Rational) -> Result<Distribution> {
    let [lo, hi] = dist.active_states()[..] else {
        return Err(Error::InvalidPerturbation(format!(
            "{dist} does not have exactly two active states"
        )));
    };
    let mut probs = dist.probs().to_vec();
    probs[lo] += error;
    probs[hi] -= error;
    if probs[lo].is_negative() || probs[hi].is_negative() {
        return Err(Error::InvalidPerturbation(format!(
            "error {} makes {dist} negative",
            q::format(error)
        )));
    }
    Distribution::new(probs)
}

/// Replaces every pswitch named in `model` by its perturbed distribution.
pub fn perturb(circuit: &Circuit, model: &PerturbationModel) -> Result<Circuit> {
    if model.epsilon.is_negative() {
        return Err(Error::InvalidPerturbation("epsilon must be non-negative".into()));
    }
    let occurrences = circuit.pswitch_occurrences();
    for (id, e) in &model.errors {
        if !occurrences.contains_key(id) {
            return Err(Error::InvalidPerturbation(format!("no pswitch `{id}` in the circuit")));
        }
        if e.abs() > model.epsilon {
            return Err(Error::InvalidPerturbation(format!(
                "error {} on `{id}` exceeds epsilon {}",
                q::format(e),
                q::format(&model.epsilon)
            )));
        }
    }
    circuit.map_leaves(|leaf| match leaf {
        SwitchElement::Pswitch { dist, id } => match model.errors.get(id) {
            Some(e) => Ok(SwitchElement::Pswitch {
                dist: perturb_distribution(dist, e)?,
                id: id.clone(),
            }),
            None => Ok(leaf.clone()),
        },
        other => Ok(other.clone()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorMode {
    /// Every assignment in `{-eps, +eps}^m`; exact for single-use ids.
    Corners,
    /// Seeded random grid points and random corners; a lower estimate.
    Sampled { trials: u64, seed: u64 },
}

/// Largest observed deviation from the nominal output, per state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorReport {
    pub epsilon: Rational,
    pub nominal: Distribution,
    pub per_state_max_error: Vec<Rational>,
    /// An assignment attaining the largest single-state deviation.
    pub worst_assignment: PerturbationModel,
    /// True when every corner was evaluated.
    pub exhaustive: bool,
    pub evaluations: u64,
}

impl ErrorReport {
    pub fn max_error(&self) -> Rational {
        self.per_state_max_error
            .iter()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

/// Evaluates `circuit` under perturbed base switches and records the worst
/// deviation of each output probability from the unperturbed output.
pub fn worst_case_error(circuit: &Circuit, epsilon: &Rational, mode: ErrorMode) -> Result<ErrorReport> {
    if epsilon.is_negative() {
        return Err(Error::InvalidPerturbation("epsilon must be non-negative".into()));
    }
    let none = Assignment::new();
    let nominal = eval(circuit, &none)?;
    let ids: Vec<String> = circuit.pswitches().into_iter().map(|(id, _)| id).collect();
    let m = ids.len();
    let neg = -epsilon.clone();

    let samples: Vec<Vec<Rational>> = match mode {
        ErrorMode::Corners => {
            if m > CORNER_CAP {
                return Err(Error::Capacity(format!(
                    "{m} pswitches exceed the corner-search cap of {CORNER_CAP}; use sampled mode"
                )));
            }
            (0..1u64 << m)
                .map(|mask| {
                    (0..m)
                        .map(|i| {
                            if mask >> i & 1 == 1 {
                                epsilon.clone()
                            } else {
                                neg.clone()
                            }
                        })
                        .collect()
                })
                .collect()
        }
        ErrorMode::Sampled { trials, seed } => {
            const GRID: i64 = 64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..trials)
                .map(|t| {
                    if t % 2 == 0 {
                        (0..m)
                            .map(|_| {
                                let k = rng.random_range(-GRID..=GRID);
                                epsilon * Rational::new(k.into(), GRID.into())
                            })
                            .collect()
                    } else {
                        (0..m)
                            .map(|_| {
                                if rng.random_bool(0.5) {
                                    epsilon.clone()
                                } else {
                                    neg.clone()
                                }
                            })
                            .collect()
                    }
                })
                .collect()
        }
    };

    let deviations = par::map_slice(&samples, |errors| -> Result<Vec<Rational>> {
        let model = PerturbationModel {
            epsilon: epsilon.clone(),
            errors: ids.iter().cloned().zip(errors.iter().cloned()).collect(),
        };
        let out = eval(&perturb(circuit, &model)?, &none)?;
        Ok(out
            .probs()
            .iter()
            .zip(nominal.probs())
            .map(|(a, b)| (a - b).abs())
            .collect())
    });

    let mut per_state = vec![Rational::zero(); circuit.states()];
    let mut worst: Option<(Rational, usize)> = None;
    for (i, dev) in deviations.into_iter().enumerate() {
        let dev = dev?;
        for (best, x) in per_state.iter_mut().zip(&dev) {
            if x > best {
                *best = x.clone();
            }
        }
        let top = dev.into_iter().max().unwrap();
        if worst.as_ref().is_none_or(|(w, _)| top > *w) {
            worst = Some((top, i));
        }
    }
    let worst_assignment = PerturbationModel {
        epsilon: epsilon.clone(),
        errors: match worst {
            Some((_, i)) => ids.iter().cloned().zip(samples[i].iter().cloned()).collect(),
            None => BTreeMap::new(),
        },
    };
    Ok(ErrorReport {
        epsilon: epsilon.clone(),
        nominal,
        per_state_max_error: per_state,
        worst_assignment,
        exhaustive: matches!(mode, ErrorMode::Corners),
        evaluations: samples.len() as u64,
    })
}

/// Which synthesis algorithm produced the circuit, selecting its error bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `1/2` switches: boundary states within `2 eps`, interior within `3 eps`.
    Binary,
    /// `1/2, ..., 1/q` switches: boundary within `q eps`, interior within `(q + 1) eps`.
    Denominator(u64),
}

impl Family {
    pub fn parse(text: &str) -> Result<Family> {
        match text.trim() {
            "binary" => Ok(Family::Binary),
            other => other
                .strip_prefix("denom:")
                .and_then(|q| q.parse::<u64>().ok())
                .filter(|&q| q >= 2)
                .map(Family::Denominator)
                .ok_or_else(|| Error::Parse(format!("unknown family `{other}`; expected binary or denom:q"))),
        }
    }

    /// `(boundary, interior)` multipliers of epsilon.
    pub fn multipliers(self) -> (u64, u64) {
        match self {
            Family::Binary => (2, 3),
            Family::Denominator(q) => (q, q + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub boundary_bound: Rational,
    pub interior_bound: Rational,
    /// Per state: error within its bound.
    pub per_state: Vec<bool>,
    pub holds: bool,
}

/// Compares a report with the error bounds of `family`. States `0` and
/// `N - 1` are boundary states; every other state is interior.
pub fn check_bounds(report: &ErrorReport, family: Family) -> Verdict {
    let (b, i) = family.multipliers();
    let boundary_bound = &report.epsilon * Rational::from_integer(b.into());
    let interior_bound = &report.epsilon * Rational::from_integer(i.into());
    let last = report.per_state_max_error.len() - 1;
    let per_state: Vec<bool> = report
        .per_state_max_error
        .iter()
        .enumerate()
        .map(|(s, e)| {
            let bound = if s == 0 || s == last {
                &boundary_bound
            } else {
                &interior_bound
            };
            e <= bound
        })
        .collect();
    let holds = per_state.iter().all(|&ok| ok);
    Verdict {
        boundary_bound,
        interior_bound,
        per_state,
        holds,
    }
}

/// Report and verdict as one JSON object.
pub fn report_json(report: &ErrorReport, verdict: &Verdict) -> serde_json::Value {
    json!({
        "epsilon": q::format(&report.epsilon),
        "nominal": report.nominal.to_strings(),
        "per_state_max_error": q::format_list(&report.per_state_max_error),
        "worst_assignment": report.worst_assignment.to_json(),
        "exhaustive": report.exhaustive,
        "evaluations": report.evaluations,
        "bound_boundary": q::format(&verdict.boundary_bound),
        "bound_interior": q::format(&verdict.interior_bound),
        "bounds_hold": verdict.holds,
    })
}
