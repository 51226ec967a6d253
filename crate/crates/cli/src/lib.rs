//! Command implementations behind the `unigroup` binary. They live in a
//! library so tests can drive them in-process.
//!
//! Exit codes: 0 ok, 1 input error, 2 non-convergence (outputs and trace are
//! still written), 3 symmetry-detection failure.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

mod manifest;
mod pipeline;

pub use manifest::RunManifest;
pub use pipeline::{run_molsym, MolsymOptions, MolsymOutcome, Rotation};

use unigroup::io::{parse_matrices, parse_table, parse_vector_pairs, write_matrices};
use unigroup::{
    lsf_group_correction, multab_group_correction, Algo, ApproxGroup, FitConfig, MultabConfig, Target,
    TargetMatrices,
};

#[derive(Debug, Parser)]
#[command(name = "unigroup", version, about = "Reconstruct approximate finite unitary groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplication-table reconstruction of an approximate group.
    Reconstruct(ReconstructArgs),
    /// Least-squares rotation fit to target matrices or vector pairs.
    Fit(FitArgs),
    /// End-to-end molecular symmetry: detect, reconstruct, fit, symmetrize.
    Molsym(MolsymArgs),
    /// Re-run the command recorded in a manifest.
    Rerun(RerunArgs),
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Group matrices (JSON list of matrices, entries `x` or `[re, im]`).
    #[arg(long)]
    pub group: PathBuf,
    /// Multiplication table (JSON `{"order", "table", "identity"}`).
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long, default_value_t = 1e-12)]
    pub eps: f64,
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
    /// CSV trace `iteration,S_M`.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Corrected matrices (JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// Run manifest; defaults to `<out>.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("target").required(true).args(["targets", "pairs"])))]
pub struct FitArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub table: PathBuf,
    /// Target matrices `Q_i` (JSON list of matrices).
    #[arg(long)]
    pub targets: Option<PathBuf>,
    /// Vector pairs (JSON `{"pairs": [[[a..], [b..]], ...] per element}`).
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    #[arg(long, default_value = "simplified")]
    pub algo: Algo,
    #[arg(long, default_value_t = 1e-10)]
    pub eps_m: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub eps_q: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub eps_r: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub null_threshold: f64,
    /// Fit vector pairs in their own units instead of rescaling them to
    /// unit mean square length first.
    #[arg(long)]
    pub raw_pairs: bool,
    /// CSV trace `iteration,S_M,S_Q,delta_S_Q,norm_R`.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Fitted matrices (JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// Generator log: JSON list of the applied `R` matrices.
    #[arg(long)]
    pub generators: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MolsymArgs {
    #[arg(long)]
    pub xyz: PathBuf,
    /// Distance tolerance (Å) for permutation detection on the input
    /// geometry (before any distortion).
    #[arg(long, default_value_t = 0.1)]
    pub tol: f64,
    /// Uniform displacement amplitude σ (Å) per coordinate.
    #[arg(long, default_value_t = 0.0)]
    pub distort: f64,
    /// Rotate by this angle (degrees) about a random axis.
    #[arg(long, conflicts_with = "rotate_max")]
    pub rotate: Option<f64>,
    /// Rotate by a random angle in (0, DEG] about a random axis.
    #[arg(long, num_args = 0..=1, default_missing_value = "85")]
    pub rotate_max: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "simplified")]
    pub algo: Algo,
    #[arg(long, default_value_t = 1e-12)]
    pub eps_m: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub eps_q: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub eps_r: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Symmetrized geometry (XYZ).
    #[arg(long)]
    pub out_xyz: Option<PathBuf>,
    /// Operation report (JSON list of `{kind, axis, angle_deg, order_of_element}`).
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Detected permutations (JSON list of index arrays).
    #[arg(long)]
    pub perms: Option<PathBuf>,
    /// Final group matrices (JSON).
    #[arg(long)]
    pub out_group: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

/// A failed run, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    NotConverged(String),
    Symmetry(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::NotConverged(_) => 2,
            Failure::Symmetry(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(e) => write!(f, "input error: {e:#}"),
            Failure::NotConverged(msg) => write!(f, "not converged: {msg}"),
            Failure::Symmetry(e) => write!(f, "symmetry detection failed: {e:#}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

pub type CmdResult = Result<(), Failure>;

/// Parses `argv` (without the program name) and runs it.
pub fn run_args<S: AsRef<str>>(argv: &[S]) -> CmdResult {
    let args: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = Cli::try_parse_from(std::iter::once("unigroup".to_string()).chain(args.iter().cloned()))
        .map_err(|e| Failure::Input(anyhow!("{e}")))?;
    run(&cli, &args)
}

/// Runs a parsed command; `argv` is recorded in the manifest.
pub fn run(cli: &Cli, argv: &[String]) -> CmdResult {
    match &cli.command {
        Command::Reconstruct(a) => cmd_reconstruct(a, argv),
        Command::Fit(a) => cmd_fit(a, argv),
        Command::Molsym(a) => cmd_molsym(a, argv),
        Command::Rerun(a) => cmd_rerun(a),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn pretty_json<T: serde::Serialize>(v: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn manifest_path(explicit: &Option<PathBuf>, primary: &Path) -> PathBuf {
    explicit.clone().unwrap_or_else(|| {
        let mut name = primary.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    })
}

fn load_group(group: &Path, table: &Path) -> anyhow::Result<ApproxGroup<f64>> {
    let elements = parse_matrices::<f64>(&read(group)?).with_context(|| format!("parsing {}", group.display()))?;
    let table = parse_table(&read(table)?).with_context(|| format!("parsing {}", table.display()))?;
    Ok(ApproxGroup::new(table, elements)?)
}

pub fn cmd_reconstruct(a: &ReconstructArgs, argv: &[String]) -> CmdResult {
    let g = load_group(&a.group, &a.table)?;
    let cfg = MultabConfig {
        eps: a.eps,
        max_iter: a.max_iter,
    };
    let out = multab_group_correction(&g, &cfg).map_err(anyhow::Error::from)?;
    write(&a.out, &write_matrices(out.group.elements()).map_err(anyhow::Error::from)?)?;
    if let Some(p) = &a.trace {
        write(p, &out.trace.to_csv())?;
    }
    RunManifest::new("reconstruct", argv)
        .input("group", &a.group)
        .input("table", &a.table)
        .threshold("eps", a.eps)
        .threshold("max_iter", a.max_iter as f64)
        .save(&manifest_path(&a.manifest, &a.out))?;
    let last = out.trace.last_s_m().unwrap_or(f64::NAN);
    if out.converged {
        println!("converged: {} iterations, S_M = {last:e}", out.trace.len());
        Ok(())
    } else {
        Err(Failure::NotConverged(format!(
            "S_M = {last:e} after {} iterations",
            out.trace.len()
        )))
    }
}

pub fn cmd_fit(a: &FitArgs, argv: &[String]) -> CmdResult {
    let g = load_group(&a.group, &a.table)?;
    let mut unit_scale = 1.0;
    let target = match (&a.targets, &a.pairs) {
        (Some(t), None) => Target::Matrices(TargetMatrices(
            parse_matrices(&read(t)?).with_context(|| format!("parsing {}", t.display()))?,
        )),
        (None, Some(p)) => {
            let v = parse_vector_pairs(&read(p)?).with_context(|| format!("parsing {}", p.display()))?;
            if a.raw_pairs {
                Target::Pairs(v)
            } else {
                let (v, s) = v.normalized().map_err(anyhow::Error::from)?;
                unit_scale = s * s;
                Target::Pairs(v)
            }
        }
        _ => return Err(Failure::Input(anyhow!("exactly one of --targets or --pairs is required"))),
    };
    let cfg = FitConfig {
        eps_m: a.eps_m,
        eps_q: a.eps_q,
        eps_r: a.eps_r,
        max_iter: a.max_iter,
        algo: a.algo,
        null_threshold: a.null_threshold,
    };
    let mut out = lsf_group_correction(&g, &target, &cfg).map_err(anyhow::Error::from)?;
    out.trace.scale_s_q(unit_scale);
    write(&a.out, &write_matrices(out.group.elements()).map_err(anyhow::Error::from)?)?;
    if let Some(p) = &a.trace {
        write(p, &out.trace.to_csv())?;
    }
    if let Some(p) = &a.generators {
        let rs: Vec<_> = out.generators.iter().map(|r| r.as_matrix().clone()).collect();
        write(p, &write_matrices(&rs).map_err(anyhow::Error::from)?)?;
    }
    let mut m = RunManifest::new("fit", argv)
        .input("group", &a.group)
        .input("table", &a.table)
        .threshold("eps_m", a.eps_m)
        .threshold("eps_q", a.eps_q)
        .threshold("eps_r", a.eps_r)
        .threshold("max_iter", a.max_iter as f64)
        .threshold("null_threshold", a.null_threshold)
        .algo(a.algo);
    if let Some(t) = &a.targets {
        m = m.input("targets", t);
    }
    if let Some(p) = &a.pairs {
        m = m.input("pairs", p);
    }
    m.save(&manifest_path(&a.manifest, &a.out))?;
    let last = out.trace.rows.last().copied();
    let s_q = last.map_or(f64::NAN, |r| r.s_q);
    if out.converged {
        println!("converged: {} iterations, S_Q = {s_q:e}", out.trace.len());
        Ok(())
    } else {
        Err(Failure::NotConverged(format!(
            "S_Q = {s_q:e}, |R| = {:e} after {} iterations",
            last.map_or(f64::NAN, |r| r.norm_r),
            out.trace.len()
        )))
    }
}

pub fn cmd_molsym(a: &MolsymArgs, argv: &[String]) -> CmdResult {
    let text = read(&a.xyz)?;
    let geom = unigroup::molsym::load_xyz::<f64>(&text).with_context(|| format!("parsing {}", a.xyz.display()))?;
    let rotation = match (a.rotate, a.rotate_max) {
        (Some(deg), _) => Rotation::Fixed(deg),
        (None, Some(limit)) => Rotation::Random { limit_deg: limit },
        (None, None) => Rotation::None,
    };
    let opts = MolsymOptions {
        tol: a.tol,
        distort: a.distort,
        rotation,
        seed: a.seed,
        fit: FitConfig {
            eps_m: a.eps_m,
            eps_q: a.eps_q,
            eps_r: a.eps_r,
            max_iter: a.max_iter,
            algo: a.algo,
            ..FitConfig::default()
        },
    };
    let out = run_molsym(&geom, &opts)?;

    write(&a.report, &pretty_json(&out.operations)?)?;
    if let Some(p) = &a.perms {
        let perms: Vec<&[usize]> = out.perms.perms.iter().map(|p| p.as_slice()).collect();
        write(p, &pretty_json(&perms)?)?;
    }
    if let Some(p) = &a.trace {
        write(p, &out.trace.to_csv())?;
    }
    if let Some(p) = &a.out_group {
        write(p, &write_matrices(out.group.elements()).map_err(anyhow::Error::from)?)?;
    }
    if let (Some(p), Some(sym)) = (&a.out_xyz, &out.symmetrized) {
        let comment = format!("symmetrized, group order {}", out.perms.order());
        write(p, &unigroup::molsym::save_xyz(sym, &comment))?;
    }
    RunManifest::new("molsym", argv)
        .input("xyz", &a.xyz)
        .threshold("tol", a.tol)
        .threshold("distort", a.distort)
        .threshold("eps_m", a.eps_m)
        .threshold("eps_q", a.eps_q)
        .threshold("eps_r", a.eps_r)
        .threshold("max_iter", a.max_iter as f64)
        .algo(a.algo)
        .seed(a.seed)
        .save(&manifest_path(&a.manifest, &a.report))?;

    println!(
        "group order {}, {} iterations, S_M = {:e}, S_Q = {:e}{}",
        out.perms.order(),
        out.trace.len(),
        out.trace.rows.last().map_or(f64::NAN, |r| r.s_m),
        out.trace.rows.last().map_or(f64::NAN, |r| r.s_q),
        out.invariance
            .map(|r| format!(", invariance residual {r:e} Å"))
            .unwrap_or_default()
    );
    if out.converged {
        Ok(())
    } else {
        Err(Failure::NotConverged(format!(
            "fit did not converge in {} iterations",
            out.trace.len()
        )))
    }
}

pub fn cmd_rerun(a: &RerunArgs) -> CmdResult {
    let m = RunManifest::load(&a.manifest)?;
    if m.args.first().map(String::as_str) == Some("rerun") {
        return Err(Failure::Input(anyhow!("manifest records a rerun; refusing to recurse")));
    }
    run_args(&m.args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fit_flags() {
        let cli = Cli::try_parse_from([
            "unigroup", "fit", "--group", "g.json", "--table", "t.json", "--pairs", "p.json", "--algo",
            "supermatrix", "--out", "o.json",
        ])
        .unwrap();
        match cli.command {
            Command::Fit(f) => {
                assert_eq!(f.algo, Algo::Supermatrix);
                assert_eq!(f.max_iter, 200);
                assert!(f.targets.is_none());
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn fit_requires_exactly_one_target() {
        let base = ["unigroup", "fit", "--group", "g", "--table", "t", "--out", "o"];
        assert!(Cli::try_parse_from(base).is_err());
        let both = [&base[..], &["--targets", "a", "--pairs", "b"]].concat();
        assert!(Cli::try_parse_from(both).is_err());
    }

    #[test]
    fn rotate_max_defaults_to_85() {
        let cli = Cli::try_parse_from(["unigroup", "molsym", "--xyz", "a.xyz", "--report", "r", "--rotate-max"]).unwrap();
        match cli.command {
            Command::Molsym(m) => assert_eq!(m.rotate_max, Some(85.0)),
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from([
            "unigroup", "molsym", "--xyz", "a", "--report", "r", "--rotate", "10", "--rotate-max", "20"
        ])
        .is_err());
    }

    #[test]
    fn manifest_path_defaults_next_to_primary_output() {
        assert_eq!(
            manifest_path(&None, Path::new("out/x.json")),
            PathBuf::from("out/x.json.manifest.json")
        );
        let explicit = Some(PathBuf::from("m.json"));
        assert_eq!(manifest_path(&explicit, Path::new("x")), PathBuf::from("m.json"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::Input(anyhow!("x")).exit_code(), 1);
        assert_eq!(Failure::NotConverged("x".into()).exit_code(), 2);
        assert_eq!(Failure::Symmetry(anyhow!("x")).exit_code(), 3);
    }
}
