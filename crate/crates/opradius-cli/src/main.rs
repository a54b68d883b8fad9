//! Command line surface over the opradius core library: compute matrix
//! functionals, evaluate bound catalogs, run seeded verification sweeps,
//! and emit numerical-range boundary data.
//!
//! Exit codes: 0 success (no violations), 1 violations found, 2 usage or
//! parse error, 3 computation failure, 4 hypothesis mismatch.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use opradius_core::blocks::{
    evaluate_pilot_bound, explicit_2x2_half, explicit_2x2_refined, pilot_classical, pilot_fg,
    pilot_fg_refined, pilot_power_2x2, ClassicalVariant, PilotMatrix,
};
use opradius_core::bounds::{
    bound_dragomir, bound_kittaneh_2003, bound_kittaneh_2005, bound_sandwich, bound_yamazaki,
    product_bound_fg, product_bound_fg_sum, product_bound_power, BoundEvaluation, Variant,
};
use opradius_core::chains::{
    kittaneh_fg_chain, kittaneh_fg_refined_chain, mccarty_chain, mccarty_remark_chain,
    mixed_schwarz_chain, mixed_schwarz_refined_chain, schwarz_refined_chain, FunctionPair,
};
use opradius_core::decomp::aluthge;
use opradius_core::ensembles::{sample, EnsembleKind, EnsembleSpec, Sample};
use opradius_core::verifier::{
    registered_bounds, run_check, CheckParams, CheckSpec, VariantSel, VerificationReport,
};
use opradius_core::{
    min_modulus, numerical_radius, numerical_range_boundary, operator_norm, spectral_radius,
    BlockMatrix, ComplexMatrix, Error as CoreError, UnitVector,
};

#[derive(Parser)]
#[command(name = "opradius", version)]
#[command(about = "Numerical radius computations and operator inequality verification")]
struct CliConfig {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a functional of a matrix given as JSON
    Compute {
        /// Matrix JSON file ({"rows": R, "cols": C, "data": [[re, im], ...]})
        matrix: PathBuf,
        /// Functional: numerical radius, spectral radius, operator norm,
        /// minimum modulus, or the Aluthge transform
        quantity: Quantity,
        /// Certified tolerance for the numerical radius search
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Output format (the Aluthge transform is always matrix JSON)
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Write output to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a catalog of numerical radius bounds on a matrix
    Bounds {
        /// Matrix JSON file for T
        matrix: PathBuf,
        /// Bound catalog: the classical single-matrix suite, the commuting
        /// product family, or both
        #[arg(long, value_enum, default_value_t = BoundSet::Classical)]
        set: BoundSet,
        /// Matrix JSON file for S (product bounds; defaults to the identity)
        #[arg(long)]
        s: Option<PathBuf>,
        /// Exponent alpha for the power-split pair f = t^a, g = t^(1-a)
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Exponent p for the product bounds (p >= 2)
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Reading of bounds that differ between the canonical form and the
        /// form as printed
        #[arg(long, value_enum, default_value_t = FormSel::AsPrinted)]
        form: FormSel,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a pilot-matrix bound on a block operator matrix
    BlockBounds {
        /// Block matrix JSON file ({"grid": [R, C], "blocks": [[matrix, ...], ...]})
        blocks: PathBuf,
        /// Pilot construction
        variant: BlockVariant,
        /// Exponent alpha for the power-split constructions
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Reading of the eq4.6/eq4.7/cor7/cor8 closed forms
        #[arg(long, value_enum, default_value_t = Form::AsPrinted)]
        form: Form,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded ensemble verification for one or more bounds
    Verify {
        /// Bound identifier; repeat the flag to check several bounds
        #[arg(long = "bound", required = true)]
        bounds: Vec<String>,
        /// Ensemble kind (defaults to the natural kind for the bound:
        /// ginibre, psd, commuting_pair, or block)
        #[arg(long, value_enum)]
        ensemble: Option<EnsembleArg>,
        /// Matrix dimension (for block ensembles, the largest block dimension)
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Scale factor applied to draws
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Pin the block grid size (default: drawn from {2, 3}; the 2x2
        /// closed forms pin it to 2)
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Relative slack threshold below which a trial counts as a violation
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Which reading(s) to evaluate per trial
        #[arg(long, value_enum, default_value_t = FormSel::Canonical)]
        variant: FormSel,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        /// Report JSON destination
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Sweep a bound parameter over a grid and emit CSV rows param,value,slack
    Sweep {
        /// Bound identifier
        bound: String,
        /// Parameter to sweep
        param: SweepParam,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Number of grid points (1 emits a single row at --from)
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Matrix JSON file for T (single-matrix and pair bounds)
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Block matrix JSON file (pilot bounds)
        #[arg(long)]
        blocks: Option<PathBuf>,
        /// Matrix JSON file for S (pair bounds; defaults to the identity)
        #[arg(long)]
        s: Option<PathBuf>,
        /// Unit vector JSON file [[re, im], ...] (defaults to a seeded draw)
        #[arg(long)]
        x: Option<PathBuf>,
        /// Unit vector JSON file (defaults to a seeded draw)
        #[arg(long)]
        y: Option<PathBuf>,
        /// Draw the input from an ensemble (trial 0) instead of files
        #[arg(long, value_enum, conflicts_with_all = ["matrix", "blocks", "s"])]
        ensemble: Option<EnsembleArg>,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        grid: Option<usize>,
        /// Reading of bounds with a canonical/as-printed split
        #[arg(long, value_enum, default_value_t = Form::Canonical)]
        form: Form,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the numerical range boundary as CSV rows re,im
    Range {
        /// Matrix JSON file
        matrix: PathBuf,
        /// Number of boundary angles (at least 3)
        #[arg(default_value_t = 360)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Quantity {
    W,
    R,
    Norm,
    Ell,
    Aluthge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoundSet {
    Classical,
    Product,
    All,
}

/// Single reading.
#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Form {
    Canonical,
    AsPrinted,
}

impl Form {
    fn to_variant(self) -> Variant {
        match self {
            Form::Canonical => Variant::Canonical,
            Form::AsPrinted => Variant::AsPrinted,
        }
    }
}

/// Reading selection where evaluating both per row makes sense.
#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FormSel {
    Canonical,
    AsPrinted,
    Both,
}

impl FormSel {
    fn variants(self) -> &'static [Variant] {
        match self {
            FormSel::Canonical => &[Variant::Canonical],
            FormSel::AsPrinted => &[Variant::AsPrinted],
            FormSel::Both => &[Variant::Canonical, Variant::AsPrinted],
        }
    }

    fn to_sel(self) -> VariantSel {
        match self {
            FormSel::Canonical => VariantSel::Canonical,
            FormSel::AsPrinted => VariantSel::AsPrinted,
            FormSel::Both => VariantSel::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BlockVariant {
    Houdu,
    Bk,
    Aok,
    #[value(name = "eq4.4")]
    Eq44,
    #[value(name = "eq4.6")]
    Eq46,
    #[value(name = "eq4.7")]
    Eq47,
    Cor7,
    Cor8,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum EnsembleArg {
    Ginibre,
    Hermitian,
    Psd,
    Unitary,
    Normal,
    CommutingPair,
    CommutingPairSpectral,
    UnitVector,
    Block,
}

impl EnsembleArg {
    fn to_kind(self) -> EnsembleKind {
        match self {
            EnsembleArg::Ginibre => EnsembleKind::Ginibre,
            EnsembleArg::Hermitian => EnsembleKind::Hermitian,
            EnsembleArg::Psd => EnsembleKind::Psd,
            EnsembleArg::Unitary => EnsembleKind::Unitary,
            EnsembleArg::Normal => EnsembleKind::Normal,
            EnsembleArg::CommutingPair => EnsembleKind::CommutingPair,
            EnsembleArg::CommutingPairSpectral => EnsembleKind::CommutingPairSpectral,
            EnsembleArg::UnitVector => EnsembleKind::UnitVector,
            EnsembleArg::Block => EnsembleKind::Block,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepParam {
    Alpha,
    P,
}

enum CliError {
    Usage(String),
    Core(CoreError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }

    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                CoreError::NotHermitian { .. }
                | CoreError::NotPsd { .. }
                | CoreError::CommutationViolated { .. }
                | CoreError::HypothesisMismatch { .. }
                | CoreError::InvalidFunctionPair { .. } => 4,
                CoreError::DimensionMismatch { .. }
                | CoreError::ShapeMismatch { .. }
                | CoreError::InvalidSpec { .. }
                | CoreError::UnknownBound { .. }
                | CoreError::InvalidTolerance { .. }
                | CoreError::NonpositiveExponent { .. }
                | CoreError::ExponentTooSmall { .. } => 2,
                CoreError::ConvergenceFailure { .. }
                | CoreError::DomainError { .. }
                | CoreError::CorruptPayload { .. } => 3,
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() {
    let config = CliConfig::parse();
    match run(config) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn run(config: CliConfig) -> CliResult<i32> {
    match config.command {
        Command::Compute { matrix, quantity, tol, format, out } => {
            cmd_compute(&matrix, quantity, tol, format, out.as_deref())
        }
        Command::Bounds { matrix, set, s, alpha, p, form, format, out } => {
            cmd_bounds(&matrix, set, s.as_deref(), alpha, p, form, format, out.as_deref())
        }
        Command::BlockBounds { blocks, variant, alpha, form, format, out } => {
            cmd_block_bounds(&blocks, variant, alpha, form, format, out.as_deref())
        }
        Command::Verify {
            bounds,
            ensemble,
            dim,
            scale,
            seed,
            grid,
            trials,
            tol,
            variant,
            alpha,
            p,
            out,
        } => cmd_verify(VerifyArgs {
            bounds,
            ensemble,
            dim,
            scale,
            seed,
            grid,
            trials,
            tol,
            variant,
            alpha,
            p,
            out,
        }),
        Command::Sweep {
            bound,
            param,
            from,
            to,
            steps,
            matrix,
            blocks,
            s,
            x,
            y,
            ensemble,
            dim,
            scale,
            seed,
            grid,
            form,
            out,
        } => cmd_sweep(SweepArgs {
            bound,
            param,
            from,
            to,
            steps,
            matrix,
            blocks,
            s,
            x,
            y,
            ensemble,
            dim,
            scale,
            seed,
            grid,
            form,
            out,
        }),
        Command::Range { matrix, points, out } => cmd_range(&matrix, points, out.as_deref()),
    }
}

// ---------------------------------------------------------------- file io

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {} file {}: {e}", what, path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{} file {} is malformed: {e}", what, path.display())))
}

fn read_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    read_json(path, "matrix")
}

fn read_blocks(path: &Path) -> CliResult<BlockMatrix> {
    read_json(path, "block matrix")
}

fn read_vector(path: &Path) -> CliResult<UnitVector> {
    read_json(path, "vector")
}

/// Serializes through `serde_json::Value`, so object keys come out sorted
/// and the bytes survive a parse/re-serialize round trip unchanged.
fn to_canonical_json<T: Serialize>(value: &T) -> CliResult<String> {
    let v = serde_json::to_value(value)
        .map_err(|e| CliError::Core(CoreError::domain(format!("serialization failed: {e}"))))?;
    let mut s = serde_json::to_string_pretty(&v)
        .map_err(|e| CliError::Core(CoreError::domain(format!("serialization failed: {e}"))))?;
    s.push('\n');
    Ok(s)
}

fn emit(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| {
            CliError::usage(format!("cannot write output file {}: {e}", path.display()))
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

// --------------------------------------------------------------- compute

fn cmd_compute(
    path: &Path,
    quantity: Quantity,
    tol: f64,
    format: Format,
    out: Option<&Path>,
) -> CliResult<i32> {
    let t = read_matrix(path)?;
    if let Quantity::Aluthge = quantity {
        let transformed = aluthge(&t)?;
        emit(out, &to_canonical_json(&transformed)?)?;
        return Ok(0);
    }
    let (name, result) = match quantity {
        Quantity::W => ("w", numerical_radius(&t, tol)?),
        Quantity::R => ("r", spectral_radius(&t)?),
        Quantity::Norm => ("norm", operator_norm(&t)),
        Quantity::Ell => ("ell", min_modulus(&t)),
        Quantity::Aluthge => unreachable!("handled above"),
    };
    let content = match format {
        Format::Table => {
            let mut s = format!("{name} = {:.6}\n", result.value);
            let _ = writeln!(s, "certified tolerance = {:e}", result.certified_tolerance);
            if let Some(angle) = result.maximizer_angle {
                let _ = writeln!(s, "maximizer angle = {angle:.6}");
            }
            s
        }
        Format::Json => to_canonical_json(&json!({
            "quantity": name,
            "value": result.value,
            "certified_tolerance": result.certified_tolerance,
            "maximizer_angle": result.maximizer_angle,
        }))?,
    };
    emit(out, &content)?;
    Ok(0)
}

// ---------------------------------------------------------------- bounds

fn classical_rows(t: &ComplexMatrix, form: FormSel) -> CliResult<Vec<BoundEvaluation>> {
    let mut rows = vec![
        bound_sandwich(t)?,
        bound_kittaneh_2003(t)?,
        bound_kittaneh_2005(t)?,
        bound_yamazaki(t)?,
    ];
    for &v in form.variants() {
        rows.push(bound_dragomir(t, v)?);
    }
    Ok(rows)
}

fn product_rows(
    t: &ComplexMatrix,
    s: &ComplexMatrix,
    alpha: f64,
    p: f64,
    form: FormSel,
) -> CliResult<Vec<BoundEvaluation>> {
    let fp = FunctionPair::power_split(alpha)?;
    let mut rows = vec![product_bound_fg(t, s, &fp, p)?];
    for &v in form.variants() {
        rows.push(product_bound_power(t, s, alpha, p, v)?);
    }
    rows.push(product_bound_fg_sum(t, s, &fp, p)?);
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bounds(
    path: &Path,
    set: BoundSet,
    s_path: Option<&Path>,
    alpha: f64,
    p: f64,
    form: FormSel,
    format: Format,
    out: Option<&Path>,
) -> CliResult<i32> {
    let t = read_matrix(path)?;
    let mut rows = Vec::new();
    if matches!(set, BoundSet::Classical | BoundSet::All) {
        rows.extend(classical_rows(&t, form)?);
    }
    if matches!(set, BoundSet::Product | BoundSet::All) {
        let s = match s_path {
            Some(p) => read_matrix(p)?,
            None => ComplexMatrix::identity(t.rows()),
        };
        rows.extend(product_rows(&t, &s, alpha, p, form)?);
    }
    let content = match format {
        Format::Table => render_bounds_table(&rows),
        Format::Json => to_canonical_json(&rows)?,
    };
    emit(out, &content)?;
    Ok(0)
}

fn variant_label(v: Option<Variant>) -> &'static str {
    match v {
        None => "-",
        Some(Variant::Canonical) => "canonical",
        Some(Variant::AsPrinted) => "as_printed",
    }
}

fn render_bounds_table(rows: &[BoundEvaluation]) -> String {
    let chain_of = |b: &BoundEvaluation| {
        b.rhs_terms.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(" <= ")
    };
    let mut widths = [5usize, 7, 3, 3, 5, 5];
    let mut body = Vec::with_capacity(rows.len());
    for b in rows {
        let row = [
            b.bound_id.clone(),
            variant_label(b.variant).to_string(),
            format!("{:.6}", b.lhs),
            chain_of(b),
            format!("{:.6}", b.slack),
            b.holds.to_string(),
        ];
        for (w, cell) in widths.iter_mut().zip(&row) {
            *w = (*w).max(cell.len());
        }
        body.push(row);
    }
    let header = ["bound", "variant", "lhs", "rhs", "slack", "holds"];
    let mut s = String::new();
    let fmt_row = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let header_cells: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    let _ = writeln!(s, "{}", fmt_row(&header_cells));
    for row in &body {
        let _ = writeln!(s, "{}", fmt_row(row));
    }
    s
}

// ----------------------------------------------------------- block bounds

struct BlockOutcome {
    pilot: Option<PilotMatrix>,
    evaluation: BoundEvaluation,
    comparison: Option<(f64, f64)>,
}

fn evaluate_block_variant(
    a: &BlockMatrix,
    variant: BlockVariant,
    alpha: f64,
    form: Form,
) -> CliResult<BlockOutcome> {
    let v = form.to_variant();
    let fp = FunctionPair::power_split(alpha)?;
    let outcome = match variant {
        BlockVariant::Houdu | BlockVariant::Bk | BlockVariant::Aok => {
            let cv = match variant {
                BlockVariant::Houdu => ClassicalVariant::HouDu,
                BlockVariant::Bk => ClassicalVariant::BaniDomiKittaneh,
                _ => ClassicalVariant::AbuOmarKittaneh,
            };
            let pilot = pilot_classical(a, cv)?;
            let evaluation = evaluate_pilot_bound(a, &pilot)?;
            BlockOutcome { pilot: Some(pilot), evaluation, comparison: None }
        }
        BlockVariant::Eq44 => {
            let pilot = pilot_fg(a, &fp)?;
            let evaluation = evaluate_pilot_bound(a, &pilot)?;
            BlockOutcome { pilot: Some(pilot), evaluation, comparison: None }
        }
        BlockVariant::Eq47 => {
            let pilot = pilot_fg_refined(a, &fp, v)?;
            let evaluation = evaluate_pilot_bound(a, &pilot)?;
            BlockOutcome { pilot: Some(pilot), evaluation, comparison: None }
        }
        BlockVariant::Eq46 => {
            BlockOutcome { pilot: None, evaluation: pilot_power_2x2(a, alpha, v)?, comparison: None }
        }
        BlockVariant::Cor7 => BlockOutcome {
            pilot: None,
            evaluation: explicit_2x2_refined(a, alpha, v)?,
            comparison: None,
        },
        BlockVariant::Cor8 => {
            let cmp = explicit_2x2_half(a, v)?;
            BlockOutcome {
                pilot: None,
                evaluation: cmp.evaluation,
                comparison: Some((cmp.hou_du, cmp.banidomi_kittaneh)),
            }
        }
    };
    Ok(outcome)
}

fn render_block_table(outcome: &BlockOutcome) -> String {
    let b = &outcome.evaluation;
    let mut s = String::new();
    let _ = writeln!(s, "bound {} ({})", b.bound_id, variant_label(b.variant));
    let _ = writeln!(s, "w(A)  = {:.6}", b.lhs);
    let _ = writeln!(s, "bound = {:.6}", b.rhs_terms[0]);
    let _ = writeln!(s, "slack = {:.6}", b.slack);
    let _ = writeln!(s, "holds = {}", b.holds);
    if let Some(raw) = b.preclamp_rhs {
        let _ = writeln!(s, "pre-clamp bound = {raw:.6}");
    }
    if let Some(pilot) = &outcome.pilot {
        let _ = writeln!(s, "pilot:");
        let m = &pilot.entries;
        for i in 0..m.rows() {
            let row = (0..m.cols())
                .map(|j| format!("{:>10.6}", m[(i, j)].re))
                .collect::<Vec<_>>()
                .join("  ");
            let _ = writeln!(s, "  {row}");
        }
    }
    if let Some(detail) = &b.diagonal_detail {
        let _ = writeln!(s, "diagonal detail:");
        for d in detail {
            let comps = d
                .components
                .iter()
                .map(|(k, v)| format!("{k}={v:.6}"))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(s, "  [{}] raw={:.6} value={:.6} {}", d.index, d.raw, d.value, comps);
        }
    }
    if let Some((hou_du, bk)) = outcome.comparison {
        let _ = writeln!(s, "comparison:");
        let _ = writeln!(s, "  hou-du pilot radius = {hou_du:.6}");
        let _ = writeln!(s, "  banidomi-kittaneh pilot radius = {bk:.6}");
    }
    s
}

fn cmd_block_bounds(
    path: &Path,
    variant: BlockVariant,
    alpha: f64,
    form: Form,
    format: Format,
    out: Option<&Path>,
) -> CliResult<i32> {
    let a = read_blocks(path)?;
    let outcome = evaluate_block_variant(&a, variant, alpha, form)?;
    let content = match format {
        Format::Table => render_block_table(&outcome),
        Format::Json => {
            let comparison = outcome.comparison.map(|(hou_du, bk)| {
                json!({"hou_du": hou_du, "banidomi_kittaneh": bk})
            });
            to_canonical_json(&json!({
                "pilot": outcome.pilot,
                "evaluation": outcome.evaluation,
                "comparison": comparison,
            }))?
        }
    };
    emit(out, &content)?;
    Ok(0)
}

// ---------------------------------------------------------------- verify

/// Input shape of each registered bound, mirroring the verifier's
/// admissibility contract; used to default the ensemble kind.
fn natural_ensemble(bound_id: &str) -> Option<EnsembleKind> {
    match bound_id {
        "eq1.1" | "eq1.2" | "eq1.3" | "eq1.4" | "eq1.5" | "fact3" | "eq2.2" | "eq3.4" => {
            Some(EnsembleKind::Ginibre)
        }
        "fact1" | "fact2" | "eq3.1" | "eq3.2" | "eq3.3" | "eq.mc" => Some(EnsembleKind::Psd),
        "kittaneh.ineq" | "eq3.6" | "eq4.1" | "eq4.2" | "eq4.3" | "eq4.x-sum" => {
            Some(EnsembleKind::CommutingPair)
        }
        "eq1.6-houdu" | "eq1.6-bk" | "eq1.6-aok" | "eq4.4" | "eq4.6" | "eq4.7" | "cor7"
        | "cor8" => Some(EnsembleKind::Block),
        _ => None,
    }
}

fn is_two_by_two_closed_form(bound_id: &str) -> bool {
    matches!(bound_id, "eq4.6" | "cor7" | "cor8")
}

struct VerifyArgs {
    bounds: Vec<String>,
    ensemble: Option<EnsembleArg>,
    dim: usize,
    scale: f64,
    seed: u64,
    grid: Option<usize>,
    trials: usize,
    tol: f64,
    variant: FormSel,
    alpha: Option<f64>,
    p: Option<f64>,
    out: PathBuf,
}

fn cmd_verify(args: VerifyArgs) -> CliResult<i32> {
    let mut reports: Vec<VerificationReport> = Vec::with_capacity(args.bounds.len());
    let mut total_violations = 0usize;
    let mut summaries = String::new();
    for bound_id in &args.bounds {
        let kind = match args.ensemble {
            Some(arg) => arg.to_kind(),
            None => natural_ensemble(bound_id)
                .ok_or_else(|| CoreError::UnknownBound { bound_id: bound_id.clone() })?,
        };
        let mut grid = args.grid;
        if grid.is_none() && kind == EnsembleKind::Block && is_two_by_two_closed_form(bound_id) {
            grid = Some(2);
        }
        let ensemble =
            EnsembleSpec { kind, dim: args.dim, scale: args.scale, seed: args.seed, grid };
        let check = CheckSpec {
            bound_id: bound_id.clone(),
            ensemble,
            trials: args.trials,
            tol: args.tol,
            variant: args.variant.to_sel(),
            params: CheckParams { alpha: args.alpha, p: args.p },
        };
        let report = run_check(&check)?;
        total_violations += report.violations;
        let _ = writeln!(
            summaries,
            "{bound_id}: {} violations in {} trials (worst slack {:.6e})",
            report.violations, check.trials, report.worst_slack
        );
        reports.push(report);
    }
    fs::write(&args.out, to_canonical_json(&reports)?).map_err(|e| {
        CliError::usage(format!("cannot write report file {}: {e}", args.out.display()))
    })?;
    print!("{summaries}");
    Ok(if total_violations > 0 { 1 } else { 0 })
}

// ----------------------------------------------------------------- sweep

struct SweepArgs {
    bound: String,
    param: SweepParam,
    from: f64,
    to: f64,
    steps: usize,
    matrix: Option<PathBuf>,
    blocks: Option<PathBuf>,
    s: Option<PathBuf>,
    x: Option<PathBuf>,
    y: Option<PathBuf>,
    ensemble: Option<EnsembleArg>,
    dim: usize,
    scale: f64,
    seed: u64,
    grid: Option<usize>,
    form: Form,
    out: Option<PathBuf>,
}

fn accepts_param(bound_id: &str, param: SweepParam) -> bool {
    match param {
        SweepParam::Alpha => matches!(
            bound_id,
            "eq2.2"
                | "kittaneh.ineq"
                | "eq3.6"
                | "eq4.1"
                | "eq4.2"
                | "eq4.x-sum"
                | "eq4.4"
                | "eq4.6"
                | "eq4.7"
                | "cor7"
        ),
        SweepParam::P => matches!(
            bound_id,
            "eq3.1" | "eq3.2" | "eq3.3" | "eq3.4" | "eq.mc" | "eq3.6" | "eq4.1" | "eq4.2"
                | "eq4.x-sum"
        ),
    }
}

/// Fixed inputs of a sweep, resolved once before the parameter grid runs.
struct SweepInputs {
    t: Option<ComplexMatrix>,
    s: Option<ComplexMatrix>,
    x: Option<UnitVector>,
    y: Option<UnitVector>,
    block: Option<BlockMatrix>,
}

impl SweepInputs {
    fn t(&self) -> CliResult<&ComplexMatrix> {
        self.t.as_ref().ok_or_else(|| CliError::usage("this bound needs --matrix (or --ensemble)"))
    }

    fn pair(&self) -> CliResult<(&ComplexMatrix, &ComplexMatrix)> {
        Ok((self.t()?, self.s.as_ref().expect("pair inputs resolve s")))
    }

    fn xy(&self) -> CliResult<(&UnitVector, &UnitVector)> {
        Ok((self.x.as_ref().expect("x resolved"), self.y.as_ref().expect("y resolved")))
    }

    fn block(&self) -> CliResult<&BlockMatrix> {
        self.block
            .as_ref()
            .ok_or_else(|| CliError::usage("this bound needs --blocks (or --ensemble block)"))
    }
}

fn seeded_vector(dim: usize, seed: u64, index: usize) -> CliResult<UnitVector> {
    let spec = EnsembleSpec::new(EnsembleKind::UnitVector, dim, 1.0, seed)?;
    Ok(sample(&spec, index)?.as_vector()?.clone())
}

fn resolve_sweep_inputs(args: &SweepArgs, needs_xy: bool, is_block: bool) -> CliResult<SweepInputs> {
    let mut inputs = SweepInputs { t: None, s: None, x: None, y: None, block: None };
    if let Some(arg) = args.ensemble {
        let mut spec =
            EnsembleSpec::new(arg.to_kind(), args.dim, args.scale, args.seed)?;
        if let Some(g) = args.grid {
            spec = spec.with_grid(g)?;
        }
        match sample(&spec, 0)? {
            Sample::Matrix { matrix } => inputs.t = Some(matrix),
            Sample::Pair { t, s } => {
                inputs.t = Some(t);
                inputs.s = Some(s);
            }
            Sample::Block { block } => inputs.block = Some(block),
            Sample::Vector { .. } => {
                return Err(CliError::usage("a unit-vector ensemble cannot feed a bound sweep"))
            }
        }
    } else {
        if let Some(path) = &args.matrix {
            inputs.t = Some(read_matrix(path)?);
        }
        if let Some(path) = &args.blocks {
            inputs.block = Some(read_blocks(path)?);
        }
        if let Some(path) = &args.s {
            inputs.s = Some(read_matrix(path)?);
        }
    }
    if is_block {
        inputs.block()?;
        return Ok(inputs);
    }
    let t = inputs.t()?.clone();
    if inputs.s.is_none() {
        inputs.s = Some(ComplexMatrix::identity(t.rows()));
    }
    if needs_xy {
        inputs.x = Some(match &args.x {
            Some(path) => read_vector(path)?,
            None => seeded_vector(t.cols(), args.seed, 0)?,
        });
        inputs.y = Some(match &args.y {
            Some(path) => read_vector(path)?,
            None => seeded_vector(t.rows(), args.seed, 1)?,
        });
    }
    Ok(inputs)
}

/// One sweep point: the first upper-bound term and the minimum signed
/// slack, both taken verbatim from the module evaluation.
fn sweep_point(
    bound_id: &str,
    inputs: &SweepInputs,
    alpha: f64,
    p: f64,
    form: Form,
) -> CliResult<(f64, f64)> {
    let v = form.to_variant();
    let fp = FunctionPair::power_split(alpha)?;
    let from_chain = |c: opradius_core::chains::TermChain| (c.values[1], c.min_slack());
    let from_bound = |b: BoundEvaluation| (b.rhs_terms[0], b.violation_slack());
    let point = match bound_id {
        "eq2.2" => {
            let (x, y) = inputs.xy()?;
            from_chain(mixed_schwarz_chain(inputs.t()?, x, y, alpha)?)
        }
        "eq3.1" | "eq3.2" => {
            let (x, _) = inputs.xy()?;
            from_chain(mccarty_chain(inputs.t()?, x, p)?)
        }
        "eq.mc" => {
            let (x, _) = inputs.xy()?;
            from_chain(mccarty_remark_chain(inputs.t()?, x, p)?)
        }
        "eq3.3" => {
            let (x, y) = inputs.xy()?;
            from_chain(schwarz_refined_chain(inputs.t()?, x, y, p)?)
        }
        "eq3.4" => {
            let (x, y) = inputs.xy()?;
            from_chain(mixed_schwarz_refined_chain(inputs.t()?, x, y, p)?)
        }
        "kittaneh.ineq" => {
            let (t, s) = inputs.pair()?;
            let (x, y) = inputs.xy()?;
            from_chain(kittaneh_fg_chain(t, s, x, y, &fp)?)
        }
        "eq3.6" => {
            let (t, s) = inputs.pair()?;
            let (x, y) = inputs.xy()?;
            from_chain(kittaneh_fg_refined_chain(t, s, x, y, &fp, p)?)
        }
        "eq4.1" => {
            let (t, s) = inputs.pair()?;
            from_bound(product_bound_fg(t, s, &fp, p)?)
        }
        "eq4.2" => {
            let (t, s) = inputs.pair()?;
            from_bound(product_bound_power(t, s, alpha, p, v)?)
        }
        "eq4.x-sum" => {
            let (t, s) = inputs.pair()?;
            from_bound(product_bound_fg_sum(t, s, &fp, p)?)
        }
        "eq4.4" => {
            let a = inputs.block()?;
            let pilot = pilot_fg(a, &fp)?;
            from_bound(evaluate_pilot_bound(a, &pilot)?)
        }
        "eq4.7" => {
            let a = inputs.block()?;
            let pilot = pilot_fg_refined(a, &fp, v)?;
            from_bound(evaluate_pilot_bound(a, &pilot)?)
        }
        "eq4.6" => from_bound(pilot_power_2x2(inputs.block()?, alpha, v)?),
        "cor7" => from_bound(explicit_2x2_refined(inputs.block()?, alpha, v)?),
        other => return Err(CliError::usage(format!("bound {other} is not sweepable"))),
    };
    Ok(point)
}

fn cmd_sweep(args: SweepArgs) -> CliResult<i32> {
    if !registered_bounds().contains(&args.bound.as_str()) {
        return Err(CoreError::UnknownBound { bound_id: args.bound.clone() }.into());
    }
    if !accepts_param(&args.bound, args.param) {
        return Err(CliError::usage(format!(
            "bound {} does not accept parameter {}",
            args.bound,
            match args.param {
                SweepParam::Alpha => "alpha",
                SweepParam::P => "p",
            }
        )));
    }
    if args.steps == 0 {
        return Err(CliError::usage("sweep needs at least one step"));
    }
    if !args.from.is_finite() || !args.to.is_finite() {
        return Err(CliError::usage("sweep endpoints must be finite"));
    }
    let needs_xy = matches!(
        args.bound.as_str(),
        "eq2.2" | "eq3.1" | "eq3.2" | "eq3.3" | "eq3.4" | "eq.mc" | "kittaneh.ineq" | "eq3.6"
    );
    let is_block = matches!(args.bound.as_str(), "eq4.4" | "eq4.6" | "eq4.7" | "cor7");
    let inputs = resolve_sweep_inputs(&args, needs_xy, is_block)?;
    let mut csv = String::from("param,value,slack\n");
    for i in 0..args.steps {
        let fraction = if args.steps == 1 { 0.0 } else { i as f64 / (args.steps - 1) as f64 };
        let value = args.from + (args.to - args.from) * fraction;
        let (alpha, p) = match args.param {
            SweepParam::Alpha => (value, 2.0),
            SweepParam::P => (0.5, value),
        };
        let (bound_value, slack) = sweep_point(&args.bound, &inputs, alpha, p, args.form)?;
        let _ = writeln!(csv, "{value},{bound_value},{slack}");
    }
    emit(args.out.as_deref(), &csv)?;
    Ok(0)
}

// ----------------------------------------------------------------- range

fn cmd_range(path: &Path, points: usize, out: Option<&Path>) -> CliResult<i32> {
    if points < 3 {
        return Err(CliError::usage(format!("range needs at least 3 points, got {points}")));
    }
    let t = read_matrix(path)?;
    let boundary = numerical_range_boundary(&t, points)?;
    let mut csv = String::from("re,im\n");
    for z in boundary {
        let _ = writeln!(csv, "{},{}", z.re, z.im);
    }
    emit(out, &csv)?;
    Ok(0)
}
