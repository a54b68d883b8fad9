//! Ensemble verification harness: run any registered bound over a seeded
//! ensemble, collect slack statistics, and serialize replayable
//! counterexamples. Trials are pure functions of `(CheckSpec, index)`, so
//! reports are byte-identical across runs and across thread counts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::blocks::{
    evaluate_pilot_bound, explicit_2x2_half, explicit_2x2_refined, pilot_classical, pilot_fg,
    pilot_fg_refined, pilot_power_2x2, ClassicalVariant,
};
use crate::bounds::{
    bound_dragomir, bound_kittaneh_2003, bound_kittaneh_2005, bound_sandwich, bound_yamazaki,
    norm_halfpower_estimate, norm_sum_estimate, product_bound_fg, product_bound_fg_sum,
    product_bound_power, spectral_radius_product_bound, BoundEvaluation, Variant,
};
use crate::chains::{
    kittaneh_fg_chain, kittaneh_fg_refined_chain, mccarty_chain, mccarty_remark_chain,
    mixed_schwarz_chain, mixed_schwarz_refined_chain, schwarz_refined_chain, FunctionPair,
    TermChain,
};
use crate::ensembles::{sample, EnsembleKind, EnsembleSpec, Sample};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, UnitVector};

/// Which reading(s) of a bound to evaluate per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantSel {
    Canonical,
    AsPrinted,
    Both,
}

impl VariantSel {
    fn variants(self) -> &'static [Variant] {
        match self {
            VariantSel::Canonical => &[Variant::Canonical],
            VariantSel::AsPrinted => &[Variant::AsPrinted],
            VariantSel::Both => &[Variant::Canonical, Variant::AsPrinted],
        }
    }
}

/// Exponent settings; unset fields take bound-specific defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CheckParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<f64>,
}

impl CheckParams {
    fn is_empty(&self) -> bool {
        self.alpha.is_none() && self.p.is_none()
    }
}

/// A complete, replayable description of one verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub bound_id: String,
    pub ensemble: EnsembleSpec,
    pub trials: usize,
    pub tol: f64,
    pub variant: VariantSel,
    #[serde(skip_serializing_if = "CheckParams::is_empty", default)]
    pub params: CheckParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlackStats {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

/// One violating trial, with the drawn inputs and the full evaluation
/// serialized for offline inspection and replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub index: usize,
    pub slack: f64,
    pub inputs: Value,
    pub evaluation: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: CheckSpec,
    pub violations: usize,
    pub worst_slack: f64,
    pub slack_stats: SlackStats,
    pub counterexamples: Vec<Counterexample>,
    pub version: String,
    #[serde(skip, default)]
    pub wall_time: f64,
}

/// One trial's outcome: a scalar term chain or one bound evaluation per
/// selected variant.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evaluation {
    Chain { chain: TermChain },
    Bounds { bounds: Vec<BoundEvaluation> },
}

impl Evaluation {
    /// Slack used for violation verdicts: chain minimum slack, or for
    /// bound evaluations the worst pre-clamp slack across the selected
    /// variants.
    pub fn slack(&self) -> f64 {
        match self {
            Evaluation::Chain { chain } => chain.min_slack(),
            Evaluation::Bounds { bounds } => bounds
                .iter()
                .map(|b| b.violation_slack())
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn scale(&self) -> f64 {
        match self {
            Evaluation::Chain { chain } => chain.scale(),
            Evaluation::Bounds { bounds } => {
                bounds.iter().map(|b| b.scale()).fold(1.0_f64, f64::max)
            }
        }
    }
}

/// The registered bound identifiers, in report order.
pub fn registered_bounds() -> &'static [&'static str] {
    &[
        "eq1.1", "eq1.2", "eq1.3", "eq1.4", "eq1.5", "fact1", "fact2", "fact3", "eq2.2", "eq3.1",
        "eq3.2", "eq3.3", "eq3.4", "eq.mc", "kittaneh.ineq", "eq3.6", "eq4.1", "eq4.2", "eq4.3",
        "eq4.x-sum", "eq1.6-houdu", "eq1.6-bk", "eq1.6-aok", "eq4.4", "eq4.6", "eq4.7", "cor7",
        "cor8",
    ]
}

/// Input shape a bound consumes, which constrains admissible ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum InputShape {
    /// Any single square matrix draw.
    Matrix,
    /// A positive semidefinite draw (plus aux psd/vector draws as needed).
    Psd,
    /// A commuting `(T, S)` pair draw.
    Pair,
    /// A block matrix draw.
    Block,
    /// A block matrix draw on a grid pinned to 2.
    Block2,
}

fn input_shape(bound_id: &str) -> Result<InputShape> {
    Ok(match bound_id {
        "eq1.1" | "eq1.2" | "eq1.3" | "eq1.4" | "eq1.5" | "fact3" | "eq2.2" | "eq3.4" => {
            InputShape::Matrix
        }
        "fact1" | "fact2" | "eq3.1" | "eq3.2" | "eq3.3" | "eq.mc" => InputShape::Psd,
        "kittaneh.ineq" | "eq3.6" | "eq4.1" | "eq4.2" | "eq4.3" | "eq4.x-sum" => InputShape::Pair,
        "eq1.6-houdu" | "eq1.6-bk" | "eq1.6-aok" | "eq4.4" | "eq4.7" => InputShape::Block,
        "eq4.6" | "cor7" | "cor8" => InputShape::Block2,
        other => return Err(Error::UnknownBound { bound_id: other.to_string() }),
    })
}

fn check_admissible(bound_id: &str, ensemble: &EnsembleSpec) -> Result<()> {
    let shape = input_shape(bound_id)?;
    let kind = ensemble.kind;
    let ok = match shape {
        InputShape::Matrix => matches!(
            kind,
            EnsembleKind::Ginibre
                | EnsembleKind::Hermitian
                | EnsembleKind::Psd
                | EnsembleKind::Unitary
                | EnsembleKind::Normal
        ),
        InputShape::Psd => kind == EnsembleKind::Psd,
        InputShape::Pair => {
            matches!(kind, EnsembleKind::CommutingPair | EnsembleKind::CommutingPairSpectral)
        }
        InputShape::Block | InputShape::Block2 => kind == EnsembleKind::Block,
    };
    if !ok {
        return Err(Error::hypothesis(format!(
            "bound {bound_id} is not admissible on a {kind:?} ensemble"
        )));
    }
    if shape == InputShape::Block2 && ensemble.grid != Some(2) {
        return Err(Error::hypothesis(format!(
            "bound {bound_id} is a 2x2 closed form; pin the block ensemble grid to 2"
        )));
    }
    Ok(())
}

/// Resolved exponents with bound-specific defaults and range validation.
fn resolve_params(bound_id: &str, params: &CheckParams) -> Result<(f64, f64)> {
    let alpha = params.alpha.unwrap_or(0.5);
    if !(0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
        return Err(Error::spec(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let default_p = match bound_id {
        "eq3.2" => 1.0,
        "eq.mc" => 0.5,
        _ => 2.0,
    };
    let p = params.p.unwrap_or(default_p);
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::NonpositiveExponent { p });
    }
    match bound_id {
        "eq3.1" if p < 2.0 => {
            return Err(Error::spec(format!("eq3.1 is the p >= 2 branch, got p = {p}")))
        }
        "eq3.2" if p >= 2.0 => {
            return Err(Error::spec(format!("eq3.2 is the 0 < p < 2 branch, got p = {p}")))
        }
        "eq.mc" if p > 1.0 => {
            return Err(Error::spec(format!("eq.mc requires 0 < p <= 1, got p = {p}")))
        }
        "eq4.2" if p == 2.0 && alpha == 0.5 => {
            return Err(Error::spec(
                "p = 2 with alpha = 1/2 is the eq4.3 special case; request eq4.3",
            ))
        }
        "eq4.3" if p != 2.0 || alpha != 0.5 => {
            return Err(Error::spec(format!(
                "eq4.3 is pinned at p = 2, alpha = 1/2; got p = {p}, alpha = {alpha}"
            )))
        }
        _ => {}
    }
    Ok((alpha, p))
}

impl CheckSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::spec("a check needs at least one trial"));
        }
        if self.tol <= 0.0 || !self.tol.is_finite() {
            return Err(Error::InvalidTolerance { tol: self.tol });
        }
        self.ensemble.validate()?;
        check_admissible(&self.bound_id, &self.ensemble)?;
        resolve_params(&self.bound_id, &self.params)?;
        Ok(())
    }
}

/// Seed salts for the auxiliary draws a trial needs beyond the main
/// ensemble sample. Fixed constants: part of the reproducibility format.
const SALT_SECOND_MATRIX: u64 = 0x9E37_79B9_7F4A_7C15;
const SALT_VECTOR_X: u64 = 0xD1B5_4A32_D192_ED03;
const SALT_VECTOR_Y: u64 = 0x8CB9_2BA7_2F3D_8DD7;

fn aux_matrix(ensemble: &EnsembleSpec, index: usize) -> Result<ComplexMatrix> {
    let spec = EnsembleSpec {
        kind: ensemble.kind,
        dim: ensemble.dim,
        scale: ensemble.scale,
        seed: ensemble.seed ^ SALT_SECOND_MATRIX,
        grid: None,
    };
    Ok(sample(&spec, index)?.as_matrix()?.clone())
}

fn aux_vector(ensemble: &EnsembleSpec, index: usize, salt: u64) -> Result<UnitVector> {
    let spec = EnsembleSpec {
        kind: EnsembleKind::UnitVector,
        dim: ensemble.dim,
        scale: 1.0,
        seed: ensemble.seed ^ salt,
        grid: None,
    };
    Ok(sample(&spec, index)?.as_vector()?.clone())
}

/// The inputs of one trial, serialized into counterexample payloads.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct TrialInputs {
    sample: Sample,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    second: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    x: Option<UnitVector>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    y: Option<UnitVector>,
}

/// Evaluates trial `index` of the check, returning the evaluation and the
/// inputs it consumed.
fn evaluate_trial(check: &CheckSpec, index: usize) -> Result<(Evaluation, TrialInputs)> {
    let (alpha, p) = resolve_params(&check.bound_id, &check.params)?;
    let main = sample(&check.ensemble, index)?;
    let mut inputs = TrialInputs { sample: main.clone(), second: None, x: None, y: None };
    let id = check.bound_id.as_str();

    let eval = match input_shape(id)? {
        InputShape::Matrix | InputShape::Psd => {
            let m = main.as_matrix()?;
            match id {
                "eq1.1" => one_bound(bound_sandwich(m)?),
                "eq1.2" => one_bound(bound_kittaneh_2003(m)?),
                "eq1.3" => one_bound(bound_kittaneh_2005(m)?),
                "eq1.4" => one_bound(bound_yamazaki(m)?),
                "eq1.5" => {
                    let bounds = check
                        .variant
                        .variants()
                        .iter()
                        .map(|&v| bound_dragomir(m, v))
                        .collect::<Result<Vec<_>>>()?;
                    Evaluation::Bounds { bounds }
                }
                "fact1" | "fact2" | "fact3" => {
                    let b = aux_matrix(&check.ensemble, index)?;
                    let eval = match id {
                        "fact1" => norm_sum_estimate(m, &b)?,
                        "fact2" => norm_halfpower_estimate(m, &b)?,
                        _ => spectral_radius_product_bound(m, &b)?,
                    };
                    inputs.second = Some(b);
                    one_bound(eval)
                }
                "eq2.2" | "eq3.3" | "eq3.4" => {
                    let x = aux_vector(&check.ensemble, index, SALT_VECTOR_X)?;
                    let y = aux_vector(&check.ensemble, index, SALT_VECTOR_Y)?;
                    let chain = match id {
                        "eq2.2" => mixed_schwarz_chain(m, &x, &y, alpha)?,
                        "eq3.3" => schwarz_refined_chain(m, &x, &y, p)?,
                        _ => mixed_schwarz_refined_chain(m, &x, &y, p)?,
                    };
                    inputs.x = Some(x);
                    inputs.y = Some(y);
                    Evaluation::Chain { chain }
                }
                "eq3.1" | "eq3.2" | "eq.mc" => {
                    let x = aux_vector(&check.ensemble, index, SALT_VECTOR_X)?;
                    let chain = if id == "eq.mc" {
                        mccarty_remark_chain(m, &x, p)?
                    } else {
                        mccarty_chain(m, &x, p)?
                    };
                    inputs.x = Some(x);
                    Evaluation::Chain { chain }
                }
                other => return Err(Error::UnknownBound { bound_id: other.to_string() }),
            }
        }
        InputShape::Pair => {
            let (t, s) = main.as_pair()?;
            let fp = FunctionPair::power_split(alpha)?;
            match id {
                "kittaneh.ineq" | "eq3.6" => {
                    let x = aux_vector(&check.ensemble, index, SALT_VECTOR_X)?;
                    let y = aux_vector(&check.ensemble, index, SALT_VECTOR_Y)?;
                    let chain = if id == "kittaneh.ineq" {
                        kittaneh_fg_chain(t, s, &x, &y, &fp)?
                    } else {
                        kittaneh_fg_refined_chain(t, s, &x, &y, &fp, p)?
                    };
                    inputs.x = Some(x);
                    inputs.y = Some(y);
                    Evaluation::Chain { chain }
                }
                "eq4.1" => one_bound(product_bound_fg(t, s, &fp, p)?),
                "eq4.2" | "eq4.3" => {
                    let bounds = check
                        .variant
                        .variants()
                        .iter()
                        .map(|&v| product_bound_power(t, s, alpha, p, v))
                        .collect::<Result<Vec<_>>>()?;
                    Evaluation::Bounds { bounds }
                }
                "eq4.x-sum" => one_bound(product_bound_fg_sum(t, s, &fp, p)?),
                other => return Err(Error::UnknownBound { bound_id: other.to_string() }),
            }
        }
        InputShape::Block => {
            let a = main.as_block()?;
            let fp = FunctionPair::power_split(alpha)?;
            match id {
                "eq1.6-houdu" | "eq1.6-bk" | "eq1.6-aok" => {
                    let variant = match id {
                        "eq1.6-houdu" => ClassicalVariant::HouDu,
                        "eq1.6-bk" => ClassicalVariant::BaniDomiKittaneh,
                        _ => ClassicalVariant::AbuOmarKittaneh,
                    };
                    let pilot = pilot_classical(a, variant)?;
                    one_bound(evaluate_pilot_bound(a, &pilot)?)
                }
                "eq4.4" => {
                    let pilot = pilot_fg(a, &fp)?;
                    one_bound(evaluate_pilot_bound(a, &pilot)?)
                }
                "eq4.7" => {
                    let bounds = check
                        .variant
                        .variants()
                        .iter()
                        .map(|&v| {
                            let pilot = pilot_fg_refined(a, &fp, v)?;
                            evaluate_pilot_bound(a, &pilot)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Evaluation::Bounds { bounds }
                }
                other => return Err(Error::UnknownBound { bound_id: other.to_string() }),
            }
        }
        InputShape::Block2 => {
            let a = main.as_block()?;
            let bounds = check
                .variant
                .variants()
                .iter()
                .map(|&v| match id {
                    "eq4.6" => pilot_power_2x2(a, alpha, v),
                    "cor7" => explicit_2x2_refined(a, alpha, v),
                    _ => explicit_2x2_half(a, v).map(|c| c.evaluation),
                })
                .collect::<Result<Vec<_>>>()?;
            Evaluation::Bounds { bounds }
        }
    };
    Ok((eval, inputs))
}

fn one_bound(b: BoundEvaluation) -> Evaluation {
    Evaluation::Bounds { bounds: vec![b] }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Runs every trial of the check and assembles the report. Violations are
/// trials with slack below `-tol * scale` (scale relative to the largest
/// term of the trial); the ten smallest-slack violations are serialized as
/// replayable counterexamples.
pub fn run_check(check: &CheckSpec) -> Result<VerificationReport> {
    check.validate()?;
    let start = std::time::Instant::now();
    let outcomes: Vec<(f64, f64)> = (0..check.trials)
        .into_par_iter()
        .map(|i| {
            let (eval, _) = evaluate_trial(check, i)?;
            Ok((eval.slack(), eval.scale()))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut violating: Vec<(usize, f64)> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, &(slack, scale))| slack < -check.tol * scale)
        .map(|(i, &(slack, _))| (i, slack))
        .collect();
    violating.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let violations = violating.len();

    let counterexamples = violating
        .iter()
        .take(10)
        .map(|&(index, slack)| {
            let (eval, inputs) = evaluate_trial(check, index)?;
            Ok(Counterexample {
                index,
                slack,
                inputs: serde_json::to_value(&inputs).map_err(|e| Error::spec(e.to_string()))?,
                evaluation: serde_json::to_value(&eval).map_err(|e| Error::spec(e.to_string()))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut slacks: Vec<f64> = outcomes.iter().map(|&(s, _)| s).collect();
    slacks.sort_by(f64::total_cmp);
    let stats = SlackStats {
        min: slacks[0],
        median: median(&slacks),
        max: slacks[slacks.len() - 1],
    };
    Ok(VerificationReport {
        check: check.clone(),
        violations,
        worst_slack: stats.min,
        slack_stats: stats,
        counterexamples,
        version: "1".to_string(),
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Recomputes a counterexample from its `(check, index)` coordinates and
/// confirms the stored slack, guarding against stale or edited payloads.
pub fn replay(check: &CheckSpec, payload: &Counterexample) -> Result<Evaluation> {
    check.validate()?;
    let (eval, inputs) = evaluate_trial(check, payload.index)?;
    let slack = eval.slack();
    if (slack - payload.slack).abs() > 1e-12 {
        return Err(Error::CorruptPayload {
            context: format!(
                "stored slack {} does not reproduce from (seed {}, index {}): got {}",
                payload.slack, check.ensemble.seed, payload.index, slack
            ),
        });
    }
    let stored_inputs = payload.inputs.clone();
    let recomputed =
        serde_json::to_value(&inputs).map_err(|e| Error::spec(e.to_string()))?;
    if stored_inputs != Value::Null && stored_inputs != recomputed {
        return Err(Error::CorruptPayload {
            context: "stored inputs do not match the seeded draw".to_string(),
        });
    }
    Ok(eval)
}

/// Tightness comparison across bounds sharing one input shape.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TightnessComparison {
    pub bound_ids: Vec<String>,
    pub variant: Variant,
    pub trials: usize,
    /// `values[t][b]` is bound `b`'s upper bound on trial `t`.
    pub values: Vec<Vec<f64>>,
    pub win_counts: Vec<usize>,
    pub ties: usize,
    /// Verdict for `bound_ids[0]` against each of the others: counts of
    /// trials where the first bound is tighter or equal.
    pub first_tighter_or_equal: Vec<usize>,
    pub verdict: String,
}

/// Evaluates each bound's primary upper-bound value on the shared trials
/// and counts strict wins. Values within `1e-10 * max(1, min value)` of
/// the trial minimum are treated as tied.
pub fn compare_tightness(
    bound_ids: &[String],
    ensemble: &EnsembleSpec,
    trials: usize,
    variant: Variant,
    params: &CheckParams,
) -> Result<TightnessComparison> {
    if bound_ids.is_empty() {
        return Err(Error::spec("tightness comparison needs at least one bound"));
    }
    if trials == 0 {
        return Err(Error::spec("tightness comparison needs at least one trial"));
    }
    let sel = match variant {
        Variant::Canonical => VariantSel::Canonical,
        Variant::AsPrinted => VariantSel::AsPrinted,
    };
    // Grid-pinned block bounds may be compared against unpinned ones on a
    // shared pinned ensemble; each check still validates its own pin.
    let family = |s: InputShape| match s {
        InputShape::Block2 => InputShape::Block,
        other => other,
    };
    let mut checks = Vec::with_capacity(bound_ids.len());
    for id in bound_ids {
        let shape = input_shape(id)?;
        let first_shape = input_shape(&bound_ids[0])?;
        if family(shape) != family(first_shape) {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "bounds {} and {id} consume different input shapes",
                    bound_ids[0]
                ),
            });
        }
        let check = CheckSpec {
            bound_id: id.clone(),
            ensemble: ensemble.clone(),
            trials,
            tol: 1e-9,
            variant: sel,
            params: *params,
        };
        check.validate()?;
        checks.push(check);
    }

    let values: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            checks
                .iter()
                .map(|c| {
                    let (eval, _) = evaluate_trial(c, t)?;
                    match eval {
                        Evaluation::Bounds { bounds } => Ok(bounds[0].rhs_terms[0]),
                        Evaluation::Chain { .. } => Err(Error::ShapeMismatch {
                            context: format!(
                                "bound {} yields a term chain, not an upper bound",
                                c.bound_id
                            ),
                        }),
                    }
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut win_counts = vec![0usize; bound_ids.len()];
    let mut first_tighter_or_equal = vec![0usize; bound_ids.len()];
    let mut ties = 0usize;
    for row in &values {
        let min = row.iter().copied().fold(f64::INFINITY, f64::min);
        let eps = 1e-10 * min.abs().max(1.0);
        let winners: Vec<usize> =
            (0..row.len()).filter(|&b| row[b] <= min + eps).collect();
        if winners.len() == 1 {
            win_counts[winners[0]] += 1;
        } else {
            ties += 1;
        }
        for b in 1..row.len() {
            if row[0] <= row[b] + eps {
                first_tighter_or_equal[b] += 1;
            }
        }
    }
    first_tighter_or_equal[0] = trials;

    let verdict = if bound_ids.len() == 1 {
        format!("{} compared only against itself", bound_ids[0])
    } else {
        let all_refined = first_tighter_or_equal[1..].iter().all(|&k| k == trials);
        if all_refined {
            format!(
                "{} is tighter than or equal to every listed bound on all {} trials",
                bound_ids[0], trials
            )
        } else {
            let worst: Vec<String> = bound_ids[1..]
                .iter()
                .zip(&first_tighter_or_equal[1..])
                .filter(|(_, &k)| k < trials)
                .map(|(id, &k)| format!("{id} beats it on {} of {trials} trials", trials - k))
                .collect();
            format!("{} does not dominate: {}", bound_ids[0], worst.join("; "))
        }
    };

    Ok(TightnessComparison {
        bound_ids: bound_ids.to_vec(),
        variant,
        trials,
        values,
        win_counts,
        ties,
        first_tighter_or_equal,
        verdict,
    })
}
