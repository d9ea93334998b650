//! Command-line front end: parse complex/map files, run analyses, emit
//! deterministic reports.
//!
//! Exit codes: 0 success, 1 parse/validation errors, 2 enumeration budget
//! exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use topoverlap::complex::{ComplexSkeleton, WeightedNorm};
use topoverlap::geometry::{mod1, perturb_point, GeometryError};
use topoverlap::homotopy::{build_homotopy, HomotopyConstants, HomotopyError};
use topoverlap::io::{
    parse_complex, parse_map, parse_pairing, parse_weights, write_pairing, write_simplices,
    IoError, MapFile,
};
use topoverlap::metrics::{self, Budgets, MetricsError};
use topoverlap::overlap::{geometric_overlap, OverlapError};
use topoverlap::pairing::{
    refine_until_fine, transversal_pairing, verify_chain_cochain, CircleMap, PairingError,
    TargetComplex,
};
use topoverlap::rational::{parse_rat, Ext};
use topoverlap::report::{
    to_json, AnalyzeReport, ComplexSummary, HomotopyReport, OverlapReport, PairingReport,
    RunConfig, SCHEMA_VERSION,
};
use topoverlap::Rat;

#[derive(Parser)]
#[command(name = "topoverlap", version, about = "Expansion constants, pairings and overlap certificates for finite complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Norm: "hamming" or a path to a weights file.
    #[arg(long, default_value = "hamming")]
    norm: String,
    /// Cap on subspace dimension in coset searches (2^dim work).
    #[arg(long, default_value_t = 24)]
    budget_coset: usize,
    /// Cap on point/cell counts in subset enumerations.
    #[arg(long, default_value_t = 10)]
    budget_subsets: usize,
    /// Denominator exponent k for random ±m/2^k perturbations (0 = off).
    #[arg(long, default_value_t = 0)]
    perturb_denom: u32,
    /// Seed for all randomness (generators, perturbations).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every expansion constant of a complex plus the mu threshold.
    Analyze {
        #[arg(long)]
        complex: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Exact geometric overlap of an affine map into R^1 or R^2.
    Overlap {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Intersection-number pairing of a graph-into-circle map.
    Pairing {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Skip the fineness refinement of the triangulation.
        #[arg(long)]
        no_refine: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the chain-cochain homotopy engine and report its trace.
    Homotopy {
        #[arg(long)]
        complex: PathBuf,
        /// Circle map file (the pairing and target are derived from it).
        #[arg(long, conflicts_with_all = ["pairing", "target"])]
        map: Option<PathBuf>,
        /// Pairing matrices file (requires --target).
        #[arg(long, requires = "target")]
        pairing: Option<PathBuf>,
        /// Target complex file for a supplied pairing.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Overlap bound mu to test: "p/q" or "auto" (threshold from the
        /// complex's own constants).
        #[arg(long, default_value = "auto")]
        mu: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Generate a complex file from a named family.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        /// Family size parameter.
        #[arg(long)]
        n: usize,
        /// Skeleton dimension (complete_skeleton only).
        #[arg(long)]
        d: Option<usize>,
        /// Triangle probability p/q (linial_meshulam only).
        #[arg(long)]
        p: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    #[value(name = "complete_skeleton", alias = "complete-skeleton")]
    CompleteSkeleton,
    #[value(name = "cycle")]
    Cycle,
    #[value(name = "linial_meshulam", alias = "linial-meshulam")]
    LinialMeshulam,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn budget(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

fn classify_metrics(e: MetricsError) -> Failure {
    match e {
        MetricsError::Budget { .. } => Failure::budget(e.to_string()),
        _ => Failure::validation(e.to_string()),
    }
}

fn classify_io(e: IoError) -> Failure {
    Failure::validation(e.to_string())
}

fn classify_geometry(e: GeometryError) -> Failure {
    match e {
        GeometryError::Budget { .. } => Failure::budget(e.to_string()),
        _ => Failure::validation(e.to_string()),
    }
}

fn classify_pairing(e: PairingError) -> Failure {
    match e {
        PairingError::Geometry(g) => classify_geometry(g),
        _ => Failure::validation(e.to_string()),
    }
}

fn classify_overlap(e: OverlapError) -> Failure {
    match e {
        OverlapError::Geometry(g) => classify_geometry(g),
        _ => Failure::validation(e.to_string()),
    }
}

fn classify_homotopy(e: HomotopyError) -> Failure {
    match e {
        HomotopyError::Metrics(m) => classify_metrics(m),
        HomotopyError::Pairing(p) => classify_pairing(p),
        _ => Failure::validation(e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<ComplexSkeleton, Failure> {
    parse_complex(&read(path)?).map_err(classify_io)
}

fn load_norm(x: &ComplexSkeleton, spec: &str) -> Result<WeightedNorm, Failure> {
    if spec == "hamming" {
        Ok(WeightedNorm::hamming(x))
    } else {
        let raw = parse_weights(&read(Path::new(spec))?, x).map_err(classify_io)?;
        WeightedNorm::from_weights(x, raw).map_err(|e| Failure::validation(e.to_string()))
    }
}

fn budgets(common: &CommonOpts) -> Result<Budgets, Failure> {
    if common.budget_coset == 0 || common.budget_subsets == 0 {
        return Err(Failure::validation("budgets must be positive"));
    }
    Ok(Budgets { coset_dim: common.budget_coset, subsets: common.budget_subsets })
}

fn config(command: &str, inputs: &[&Path], common: &CommonOpts) -> RunConfig {
    RunConfig {
        command: command.to_string(),
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        norm: common.norm.clone(),
        budget_coset: common.budget_coset,
        budget_subsets: common.budget_subsets,
        perturb_denom: common.perturb_denom,
        seed: common.seed,
    }
}

fn emit(common: &CommonOpts, text: &str) -> Result<(), Failure> {
    match &common.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display()))),
    }
}

fn perturb_circle_map(map: &mut CircleMap, k: u32, rng: &mut ChaCha20Rng) {
    for img in &mut map.vertex_images {
        *img = mod1(&perturb_point(&vec![img.clone()], k, rng)[0]);
    }
    for path in &mut map.edge_paths {
        for p in &mut path.points {
            *p = mod1(&perturb_point(&vec![p.clone()], k, rng)[0]);
        }
    }
}

fn run_analyze(complex: &Path, common: &CommonOpts) -> Result<(), Failure> {
    let x = load_complex(complex)?;
    let n = load_norm(&x, &common.norm)?;
    let report = metrics::analyze(&x, &n, budgets(common)?).map_err(classify_metrics)?;
    let out = AnalyzeReport::of(config("analyze", &[complex], common), &x, &report);
    emit(common, &to_json(&out))
}

fn run_overlap(complex: &Path, map: &Path, common: &CommonOpts) -> Result<(), Failure> {
    let x = load_complex(complex)?;
    let n = load_norm(&x, &common.norm)?;
    let parsed = parse_map(&read(map)?, &x).map_err(classify_io)?;
    let MapFile::Affine(mut f) = parsed else {
        return Err(Failure::validation("overlap expects an affine map into R^d"));
    };
    if common.perturb_denom > 0 {
        let mut rng = ChaCha20Rng::seed_from_u64(common.seed);
        for img in &mut f.vertex_images {
            *img = perturb_point(img, common.perturb_denom, &mut rng);
        }
    }
    let result = geometric_overlap(&x, &f, &n).map_err(classify_overlap)?;
    let out = OverlapReport::of(config("overlap", &[complex, map], common), &x, &result);
    emit(common, &to_json(&out))
}

/// Shared by `pairing` and `homotopy --map`: parse, perturb, pick the
/// triangulation, refine it, pair.
fn build_pairing(
    x: &ComplexSkeleton,
    n: &WeightedNorm,
    map_path: &Path,
    refine: bool,
    common: &CommonOpts,
) -> Result<
    (CircleMap, topoverlap::pairing::CircleTriangulation, usize, topoverlap::pairing::ChainCochainMap),
    Failure,
> {
    let parsed = parse_map(&read(map_path)?, x).map_err(classify_io)?;
    let MapFile::Circle { mut map, triangulation } = parsed else {
        return Err(Failure::validation("this command expects a circle map (target: S1)"));
    };
    if common.perturb_denom > 0 {
        let mut rng = ChaCha20Rng::seed_from_u64(common.seed);
        perturb_circle_map(&mut map, common.perturb_denom, &mut rng);
    }
    let t = match triangulation {
        Some(t) => t,
        None => map.default_triangulation().map_err(classify_pairing)?,
    };
    let (t, splits) = if refine {
        refine_until_fine(&t, &map, x, n).map_err(classify_pairing)?
    } else {
        (t, 0)
    };
    let pairing = transversal_pairing(&map, &t, x).map_err(classify_pairing)?;
    Ok((map, t, splits, pairing))
}

fn run_pairing(
    complex: &Path,
    map: &Path,
    no_refine: bool,
    common: &CommonOpts,
) -> Result<(), Failure> {
    let x = load_complex(complex)?;
    let n = load_norm(&x, &common.norm)?;
    let (_, t, splits, pairing) = build_pairing(&x, &n, map, !no_refine, common)?;
    let target = TargetComplex::from_circle(&t);
    let violation = verify_chain_cochain(&pairing, &target, &x).map_err(classify_pairing)?;
    let fc = pairing.fundamental_class_pairing(&target);
    let all_ones = fc.bits.weight() == fc.bits.len();
    let out = PairingReport {
        schema_version: SCHEMA_VERSION,
        config: config("pairing", &[complex, map], common),
        complex: ComplexSummary::of(&x),
        triangulation: t.vertices().iter().map(|r| r.to_string()).collect(),
        refinement_splits: splits,
        chain_cochain_ok: violation.is_none(),
        violation: violation.map(|(k, c)| format!("k={k}, cell index {c}")),
        fundamental_class_support: fc.support_names(&x),
        fundamental_class_is_all_ones: all_ones,
        pairing: write_pairing(&pairing),
    };
    emit(common, &to_json(&out))
}

#[allow(clippy::too_many_arguments)]
fn run_homotopy(
    complex: &Path,
    map: Option<&Path>,
    pairing_path: Option<&Path>,
    target_path: Option<&Path>,
    mu_spec: &str,
    common: &CommonOpts,
) -> Result<(), Failure> {
    let x = load_complex(complex)?;
    let n = load_norm(&x, &common.norm)?;
    let b = budgets(common)?;
    let mut inputs: Vec<&Path> = vec![complex];

    let (target, pairing) = match (map, pairing_path, target_path) {
        (Some(map_path), None, None) => {
            inputs.push(map_path);
            let (_, t, _, pairing) = build_pairing(&x, &n, map_path, true, common)?;
            (TargetComplex::from_circle(&t), pairing)
        }
        (None, Some(pp), Some(tp)) => {
            inputs.push(pp);
            inputs.push(tp);
            let t_skel = load_complex(tp)?;
            let target =
                TargetComplex::from_skeleton(&t_skel).map_err(|e| Failure::validation(e.to_string()))?;
            let pairing = parse_pairing(&read(pp)?).map_err(classify_io)?;
            (target, pairing)
        }
        _ => {
            return Err(Failure::validation(
                "homotopy needs either --map, or --pairing together with --target",
            ))
        }
    };
    let d = pairing.d;
    if verify_chain_cochain(&pairing, &target, &x).map_err(classify_pairing)?.is_some() {
        return Err(Failure::validation(
            "the supplied pairing is not a chain-cochain map; refusing to run",
        ));
    }

    // Constants from the complex itself, in the dimensions it has.
    let x_dim = x.dim() as isize;
    let mut l_max: Option<Rat> = None;
    for k in 1..=x_dim.min(d as isize) {
        let l = metrics::cofilling_constant(&x, &n, k, b).map_err(classify_metrics)?;
        if l_max.as_ref().is_none_or(|m| l > *m) {
            l_max = Some(l);
        }
    }
    let l = match l_max {
        Some(l) if !num::Zero::is_zero(&l) => l,
        _ => Rat::from_integer(1.into()), // degenerate complexes: budgets are advisory anyway
    };
    let mut theta = Vec::new();
    for j in 0..d as isize {
        if j <= x_dim {
            theta.push(metrics::cosystole(&x, &n, j, b).map_err(classify_metrics)?.0);
        } else {
            theta.push(Ext::Infinite);
        }
    }
    let eps = metrics::local_sparsity(&x, &n).map_err(classify_metrics)?;

    let mu = if mu_spec == "auto" {
        let theta_min = theta.iter().min().cloned().unwrap_or(Ext::Infinite);
        let t = metrics::mu_threshold(d, &l, &theta_min, &eps).map_err(classify_metrics)?;
        t.mu_max
    } else {
        parse_rat(mu_spec).map_err(Failure::validation)?
    };

    let constants = HomotopyConstants { mu, l, theta, eps };
    let run = build_homotopy(&pairing, &target, &x, &n, constants, b).map_err(classify_homotopy)?;
    let out = HomotopyReport::of(config("homotopy", &inputs, common), &x, &run);
    emit(common, &to_json(&out))
}

fn run_generate(
    family: Family,
    n: usize,
    d: Option<usize>,
    p: Option<&str>,
    common: &CommonOpts,
) -> Result<(), Failure> {
    let (simplices, describe) = match family {
        Family::CompleteSkeleton => {
            let d = d.ok_or_else(|| Failure::validation("complete_skeleton requires --d"))?;
            if d > n || n == 0 {
                return Err(Failure::validation("need 0 < d <= n"));
            }
            (
                topoverlap::complex::complete_skeleton_simplices(n, d),
                format!("complete_skeleton n={n} d={d}"),
            )
        }
        Family::Cycle => {
            if n < 3 {
                return Err(Failure::validation("cycle requires n >= 3"));
            }
            (topoverlap::complex::cycle_simplices(n), format!("cycle n={n}"))
        }
        Family::LinialMeshulam => {
            let p = p.ok_or_else(|| Failure::validation("linial_meshulam requires --p"))?;
            let prob = parse_rat(p).map_err(Failure::validation)?;
            let zero = Rat::from_integer(0.into());
            let one = Rat::from_integer(1.into());
            if prob < zero || prob > one {
                return Err(Failure::validation("p must lie in [0, 1]"));
            }
            if n < 3 {
                return Err(Failure::validation("linial_meshulam requires n >= 3"));
            }
            let denom: u64 = prob
                .denom()
                .try_into()
                .map_err(|_| Failure::validation("denominator of p too large"))?;
            let numer: u64 = prob
                .numer()
                .try_into()
                .map_err(|_| Failure::validation("numerator of p too large"))?;
            (
                topoverlap::complex::linial_meshulam_simplices(n, numer, denom, common.seed),
                format!("linial_meshulam n={n} p={p} seed={}", common.seed),
            )
        }
    };
    let header = format!(
        "generated by topoverlap generate\nfamily: {describe}\nseed: {}\nschema_version: {SCHEMA_VERSION}",
        common.seed
    );
    let mut text = write_simplices(&simplices, &header);
    // Sanity: the generated file must parse back.
    parse_complex(&text).map_err(classify_io)?;
    if text.ends_with("\n\n") {
        text.pop();
    }
    emit(common, &text)
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { complex, common } => run_analyze(&complex, &common),
        Command::Overlap { complex, map, common } => run_overlap(&complex, &map, &common),
        Command::Pairing { complex, map, no_refine, common } => {
            run_pairing(&complex, &map, no_refine, &common)
        }
        Command::Homotopy { complex, map, pairing, target, mu, common } => run_homotopy(
            &complex,
            map.as_deref(),
            pairing.as_deref(),
            target.as_deref(),
            &mu,
            &common,
        ),
        Command::Generate { family, n, d, p, common } => {
            run_generate(family, n, d, p.as_deref(), &common)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
