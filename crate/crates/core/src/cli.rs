//! The `isodrum` command line.
//!
//! Every subcommand writes a plain-text report to the given writer. Commands
//! that check something end with a `RESULT: PASS` or `RESULT: FAIL` line.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::billiards::{self, parse_base, unfold, BaseTile, BilliardsError, PlanarDomain};
use crate::lengths::{self, LengthsError};
use crate::liegeom::{self, LiegeomError};
use crate::modematch::{self, ModeMatchError};
use crate::numspec::{self, GridDomain, NumspecError};
use crate::permcat::{self, CatalogError, PairSpec};
use crate::projgeom::{self, build_pg};
use crate::tori::{self, Lattice, ToriError, Q};

/// Weyl data of the two members must agree this closely.
pub const WEYL_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Billiards(#[from] BilliardsError),
    #[error(transparent)]
    Numspec(#[from] NumspecError),
    #[error(transparent)]
    ModeMatch(#[from] ModeMatchError),
    #[error(transparent)]
    Tori(#[from] ToriError),
    #[error(transparent)]
    Liegeom(#[from] LiegeomError),
    #[error(transparent)]
    Lengths(#[from] LengthsError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Whether the checks run by a command succeeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "isodrum", version, about = "Isospectral billiards from permutation data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Browse the pair catalog or search projective spaces for new pairs.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Unfold both members of a pair and write them as domain files.
    Build(BuildArgs),
    /// Run the six-stage verification of a catalog pair.
    Verify(VerifyArgs),
    /// Compute a spectrum by finite differences or mode matching.
    Spectrum {
        #[command(subcommand)]
        method: SpectrumMethod,
    },
    /// Compare two spectrum CSV files mode by mode.
    Compare(CompareArgs),
    /// Compare closed-lift counts of all billiard words.
    Lengths(LengthsArgs),
    /// Theta series coefficients of a lattice.
    Theta(ThetaArgs),
    /// Area, perimeter and corner constant of both members.
    Weyl(WeylArgs),
    /// Collinearity spectrum of a generalized polygon.
    Gp(GpArgs),
    /// The mixed-boundary square/triangle pair.
    Mixed(MixedArgs),
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Show {
        pair: String,
    },
    /// Emit the isospectral data of PG(n, q) in catalog format.
    Search {
        /// `n,q`
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 0)]
        cycle_rank: usize,
    },
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub pair: String,
    #[arg(long, default_value = "half-square")]
    pub base: String,
    /// Output path; `-1` and `-2` are inserted before the extension.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub pair: String,
    /// Base tile for the Weyl stage; by default the first of a fixed list
    /// that unfolds both members.
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long, default_value_t = 8)]
    pub maxlen: usize,
}

#[derive(Debug, Subcommand)]
pub enum SpectrumMethod {
    /// Five-point finite differences on a grid-aligned domain.
    Fd(FdArgs),
    /// Mode matching for the half-square 7_3 pair.
    Mm(MmArgs),
}

#[derive(Debug, Args)]
pub struct FdArgs {
    #[arg(long, conflicts_with = "domain")]
    pub pair: Option<String>,
    /// Which member of the pair.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub member: u8,
    #[arg(long, default_value = "half-square")]
    pub base: String,
    /// Domain file written by `build`.
    #[arg(long)]
    pub domain: Option<PathBuf>,
    /// Length unit `d`; the mesh is `d / n_grid`.
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    #[arg(long, default_value_t = 40)]
    pub n_grid: usize,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Spectrum CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// 1-based mode whose eigenvector is written.
    #[arg(long)]
    pub field: Option<usize>,
    #[arg(long, requires = "field")]
    pub field_csv: Option<PathBuf>,
    #[arg(long, requires = "field")]
    pub pgm: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MmArgs {
    #[arg(long = "N", default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 12.2)]
    pub emax: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long, default_value_t = 5e-3)]
    pub rel_tol: f64,
}

#[derive(Debug, Args)]
pub struct LengthsArgs {
    #[arg(long)]
    pub pair: String,
    #[arg(long, default_value_t = 8)]
    pub maxlen: usize,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    /// `Z<n>`, `A2`, `E8+E8`, `D16+`, `L+:a,b,c,d`, `L-:a,b,c,d` or a lattice file.
    #[arg(long)]
    pub lattice: String,
    /// Largest norm, as an integer, fraction or decimal.
    #[arg(long)]
    pub max_norm: String,
}

#[derive(Debug, Args)]
pub struct WeylArgs {
    #[arg(long)]
    pub pair: String,
    #[arg(long, default_value = "half-square")]
    pub base: String,
}

#[derive(Debug, Args)]
pub struct GpArgs {
    #[arg(long)]
    pub gon: u32,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub t: u32,
}

#[derive(Debug, Args)]
pub struct MixedArgs {
    /// Largest eigenvalue, in units of `pi^2`.
    #[arg(long, default_value_t = 10.0)]
    pub cutoff: f64,
}

/// Runs a parsed command line.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let mut text = String::new();
    let outcome = match &cli.command {
        Command::Catalog { action } => catalog_cmd(action, &mut text)?,
        Command::Build(a) => build(a, &mut text)?,
        Command::Verify(a) => {
            let report = verify(&a.pair, a.base.as_deref(), a.maxlen)?;
            text.push_str(&report.render());
            Outcome::from_bool(report.passed())
        }
        Command::Spectrum { method } => match method {
            SpectrumMethod::Fd(a) => spectrum_fd(a, &mut text)?,
            SpectrumMethod::Mm(a) => spectrum_mm(a, &mut text)?,
        },
        Command::Compare(a) => compare(a, &mut text)?,
        Command::Lengths(a) => lengths_cmd(a, &mut text)?,
        Command::Theta(a) => theta_cmd(a, &mut text)?,
        Command::Weyl(a) => weyl_cmd(a, &mut text)?,
        Command::Gp(a) => gp_cmd(a, &mut text)?,
        Command::Mixed(a) => mixed_cmd(a, &mut text)?,
    };
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })?;
    Ok(outcome)
}

fn result_line(text: &mut String, outcome: Outcome) -> Outcome {
    let word = if outcome == Outcome::Pass { "PASS" } else { "FAIL" };
    let _ = writeln!(text, "RESULT: {word}");
    outcome
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_pair(name: &str) -> Result<PairSpec, CliError> {
    let pairs = permcat::catalog_from_env()?;
    Ok(permcat::find_pair(&pairs, name)?.clone())
}

fn usable_graphs(pair: &PairSpec) -> Result<(permcat::ColoredGraph, permcat::ColoredGraph), CliError> {
    pair.graphs().ok_or_else(|| {
        CliError::Usage(format!(
            "pair {} is corrupt-source: {}",
            pair.name,
            pair.corruption_reasons().join("; ")
        ))
    })
}

fn catalog_cmd(action: &CatalogAction, text: &mut String) -> Result<Outcome, CliError> {
    match action {
        CatalogAction::List => {
            for p in permcat::catalog_from_env()? {
                let note = if p.is_corrupt() { "  corrupt-source" } else { "" };
                let _ = writeln!(text, "{}\t{}\td={}{note}", p.name, p.group_label, p.d);
            }
        }
        CatalogAction::Show { pair } => {
            let p = load_pair(pair)?;
            text.push_str(&p.to_text());
            for f in &p.flags {
                let _ = writeln!(text, "# {f:?}");
            }
        }
        CatalogAction::Search { space, cycle_rank } => {
            let (n, q) = space
                .split_once(',')
                .and_then(|(n, q)| Some((n.trim().parse::<usize>().ok()?, q.trim().parse::<u32>().ok()?)))
                .ok_or_else(|| CliError::Usage(format!("--space expects n,q, got {space:?}")))?;
            let pg = build_pg(n, q).map_err(|e| CliError::Usage(e.to_string()))?;
            let invs = projgeom::enumerate_involutions(&pg).map_err(|e| CliError::Usage(e.to_string()))?;
            let found = projgeom::search_isospectral_data(&pg, &invs, *cycle_rank);
            let label = format!("PG({n},{q})");
            for (i, data) in found.iter().enumerate() {
                let name = format!("{}_s{}", data.d(), i + 1);
                text.push_str(&data.to_pair_spec(&name, &label).to_text());
            }
        }
    }
    Ok(Outcome::Pass)
}

/// `dir/name.ext` to `dir/name-k.ext`.
fn member_path(out: &Path, k: usize) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}-{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{k}"),
    };
    out.with_file_name(name)
}

fn build(a: &BuildArgs, text: &mut String) -> Result<Outcome, CliError> {
    let pair = load_pair(&a.pair)?;
    let (g1, g2) = usable_graphs(&pair)?;
    let tile = parse_base(&a.base)?;
    for (k, g) in [(1, &g1), (2, &g2)] {
        let dom = unfold(&tile, g, 0)?;
        let path = member_path(&a.out, k);
        write_file(&path, &dom.to_json())?;
        let _ = writeln!(
            text,
            "wrote {} ({} tiles, area {:.12}, perimeter {:.12})",
            path.display(),
            dom.d(),
            dom.area(),
            dom.perimeter()
        );
    }
    Ok(Outcome::Pass)
}

/// Status of one verification stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageStatus {
    Pass,
    Fail,
    /// Not applicable to this pair; does not fail the run.
    Skip,
    /// Not reached because an earlier stage failed.
    NotRun,
}

impl StageStatus {
    fn word(self) -> &'static str {
        match self {
            StageStatus::Pass => "PASS",
            StageStatus::Fail => "FAIL",
            StageStatus::Skip => "SKIP",
            StageStatus::NotRun => "-",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub name: &'static str,
    pub status: StageStatus,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub pair: String,
    pub stages: Vec<Stage>,
}

pub const STAGE_NAMES: [&str; 6] = [
    "involution validation",
    "graph build",
    "transplantation solve",
    "graph isospectrality",
    "isolength check",
    "weyl conditions",
];

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.stages
            .iter()
            .all(|s| matches!(s.status, StageStatus::Pass | StageStatus::Skip))
    }

    /// First failing stage, 1-based.
    pub fn first_failure(&self) -> Option<(usize, &Stage)> {
        self.stages
            .iter()
            .enumerate()
            .find(|(_, s)| s.status == StageStatus::Fail)
            .map(|(i, s)| (i + 1, s))
    }

    pub fn render(&self) -> String {
        let mut t = format!("verify {}\n", self.pair);
        let _ = writeln!(t, "{:<3} {:<24} {:<6} detail", "#", "stage", "status");
        for (i, s) in self.stages.iter().enumerate() {
            let _ = writeln!(t, "{:<3} {:<24} {:<6} {}", i + 1, s.name, s.status.word(), s.detail);
        }
        result_line(&mut t, Outcome::from_bool(self.passed()));
        t
    }
}

/// Tiles tried in order by the Weyl stage when no base is given.
pub fn default_weyl_tiles() -> Vec<(String, BaseTile)> {
    // angles (pi/4, 5pi/12, pi/3) and (5pi/12, pi/3, pi/4)
    let tri = |a: f64, b: f64| -> BaseTile {
        let c = std::f64::consts::PI - a - b;
        let l = b.sin() / c.sin();
        BaseTile::triangle([[0.0, 0.0], [1.0, 0.0], [l * a.cos(), l * a.sin()]]).expect("valid triangle")
    };
    let pi = std::f64::consts::PI;
    vec![
        ("half-square".into(), BaseTile::half_square(1.0).expect("valid tile")),
        ("triangle(pi/4,5pi/12,pi/3)".into(), tri(pi / 4.0, 5.0 * pi / 12.0)),
        ("triangle(5pi/12,pi/3,pi/4)".into(), tri(5.0 * pi / 12.0, pi / 3.0)),
    ]
}

fn weyl_pair(tile: &BaseTile, pair: &PairSpec) -> Result<(PlanarDomain, PlanarDomain), CliError> {
    let (g1, g2) = usable_graphs(pair)?;
    Ok((unfold(tile, &g1, 0)?, unfold(tile, &g2, 0)?))
}

/// Runs the six stages in order; later stages are not run after a failure
/// of stages 1 or 2.
pub fn verify(name: &str, base: Option<&str>, maxlen: usize) -> Result<VerifyReport, CliError> {
    let pair = load_pair(name)?;
    let mut stages: Vec<Stage> = STAGE_NAMES
        .iter()
        .map(|&n| Stage {
            name: n,
            status: StageStatus::NotRun,
            detail: String::new(),
        })
        .collect();
    let mut set = |i: usize, status: StageStatus, detail: String| {
        stages[i].status = status;
        stages[i].detail = detail;
    };

    // 1: involutions
    if pair.is_corrupt() {
        set(0, StageStatus::Fail, format!("corrupt-source: {}", pair.corruption_reasons().join("; ")));
        return Ok(VerifyReport { pair: pair.name, stages });
    }
    let (a, b) = pair.adjacency().expect("valid record has adjacency");
    set(0, StageStatus::Pass, format!("2 x 3 involutions on {} tiles", pair.d));

    // 2: graphs
    let (g1, g2) = pair.graphs().expect("valid record has graphs");
    if !(g1.is_connected() && g2.is_connected()) {
        set(1, StageStatus::Fail, "involution graph is disconnected".into());
        return Ok(VerifyReport { pair: pair.name, stages });
    }
    set(
        1,
        StageStatus::Pass,
        format!("connected, cycle ranks {} and {}", g1.cycle_rank(), g2.cycle_rank()),
    );

    // 3: transplantation
    match projgeom::solve_transplantation(&a, &b) {
        Ok(t) => {
            let design = t
                .design
                .as_ref()
                .map(|m| format!(", |T| is a ({},{},{}) design", m.n, m.k, m.lambda))
                .unwrap_or_default();
            set(
                2,
                StageStatus::Pass,
                format!("commutant dim {}, row weight {}{design}", t.commutant_dim, t.row_weight),
            );
        }
        Err(e) => set(2, StageStatus::Fail, e.to_string()),
    }

    // 4: graph spectra
    match permcat::graph_isospectral(&g1, &g2) {
        Ok(table) => match table.first_mismatch() {
            None => set(3, StageStatus::Pass, format!("Tr D^l equal for l = 1..{}", table.rows.len())),
            Some((l, x, y)) => set(3, StageStatus::Fail, format!("Tr D^{l}: {x} vs {y}")),
        },
        Err(e) => set(3, StageStatus::Fail, e.to_string()),
    }

    // 5: lift counts
    let report = lengths::isolength_check(&pair, maxlen)?;
    match &report.witness {
        None => {
            let words: usize = report.per_length.iter().map(|r| r.1).sum();
            set(4, StageStatus::Pass, format!("{words} words up to length {maxlen}"));
        }
        Some(w) => set(4, StageStatus::Fail, format!("witness word {}", word_string(w))),
    }

    // 6: Weyl data
    let tiles = match base {
        Some(spec) => vec![(spec.to_string(), parse_base(spec)?)],
        None => default_weyl_tiles(),
    };
    let mut planar = None;
    let mut last_err = String::new();
    for (label, tile) in &tiles {
        match weyl_pair(tile, &pair) {
            Ok(doms) => {
                planar = Some((label.clone(), doms));
                break;
            }
            Err(e) => last_err = e.to_string(),
        }
    }
    match planar {
        None if base.is_none() => set(5, StageStatus::Skip, format!("no planar unfolding ({last_err})")),
        None => set(5, StageStatus::Fail, last_err),
        Some((label, (d1, d2))) => {
            let w1 = billiards::weyl_data(&d1)?;
            let w2 = billiards::weyl_data(&d2)?;
            let gap = (w1.area - w2.area)
                .abs()
                .max((w1.perimeter - w2.perimeter).abs())
                .max((w1.k - w2.k).abs());
            let exact = match (w1.k_exact, w2.k_exact) {
                (Some(x), Some(y)) if x != y => Some(false),
                (Some(_), Some(_)) => Some(true),
                _ => None,
            };
            let ok = gap <= WEYL_TOL && exact != Some(false);
            let k = w1.k_exact.map_or(format!("{:.12}", w1.k), |k| k.to_string());
            set(
                5,
                if ok { StageStatus::Pass } else { StageStatus::Fail },
                format!("{label}: A={:.12} L={:.12} K={k}, gap {gap:.1e}", w1.area, w1.perimeter),
            );
        }
    }
    Ok(VerifyReport { pair: pair.name, stages })
}

fn word_string(w: &[u8]) -> String {
    w.iter().map(|c| char::from(b'0' + c)).collect()
}

fn fd_domain(a: &FdArgs) -> Result<PlanarDomain, CliError> {
    match (&a.domain, &a.pair) {
        (Some(path), _) => Ok(PlanarDomain::from_json(&read(path)?)?),
        (None, Some(name)) => {
            let pair = load_pair(name)?;
            let (g1, g2) = usable_graphs(&pair)?;
            let g = if a.member == 1 { g1 } else { g2 };
            Ok(unfold(&parse_base(&a.base)?, &g, 0)?)
        }
        (None, None) => Err(CliError::Usage("spectrum fd needs --pair or --domain".into())),
    }
}

fn spectrum_fd(a: &FdArgs, text: &mut String) -> Result<Outcome, CliError> {
    let dom = fd_domain(a)?;
    let grid = GridDomain::new(&dom, a.d, a.n_grid)?;
    let count = a.count.max(a.field.unwrap_or(0));
    let spec = numspec::fd_spectrum(&grid, count)?;
    let mut shown = spec.clone();
    shown.eigenvalues.truncate(a.count);
    let csv = numspec::spectrum_csv(&shown);
    match &a.out {
        Some(path) => {
            write_file(path, &csv)?;
            let _ = writeln!(text, "wrote {} ({} modes, {} nodes)", path.display(), a.count, grid.len());
        }
        None => text.push_str(&csv),
    }
    if let Some(k) = a.field {
        if k == 0 {
            return Err(CliError::Usage("--field is 1-based".into()));
        }
        let v = &spec.eigenvectors.as_ref().expect("vectors are kept")[k - 1];
        if let Some(p) = &a.field_csv {
            write_file(p, &numspec::field_csv(&grid, v))?;
            let _ = writeln!(text, "wrote {}", p.display());
        }
        if let Some(p) = &a.pgm {
            write_file(p, &numspec::field_pgm(&grid, v))?;
            let _ = writeln!(text, "wrote {}", p.display());
        }
    }
    Ok(Outcome::Pass)
}

fn spectrum_mm(a: &MmArgs, text: &mut String) -> Result<Outcome, CliError> {
    let mm = modematch::eigenvalues_mm(a.n, a.count, a.emax)?;
    let csv = numspec::spectrum_csv(&mm.spectrum);
    match &a.out {
        Some(path) => {
            write_file(path, &csv)?;
            let _ = writeln!(text, "wrote {} ({} modes)", path.display(), a.count);
        }
        None => text.push_str(&csv),
    }
    Ok(Outcome::Pass)
}

fn compare(a: &CompareArgs, text: &mut String) -> Result<Outcome, CliError> {
    let parse = |p: &Path| -> Result<Vec<f64>, CliError> {
        numspec::parse_spectrum_csv(&read(p)?).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))
    };
    let (x, y) = (parse(&a.first)?, parse(&a.second)?);
    let _ = writeln!(text, "{:<6} {:>16} {:>16} {:>10}", "mode", "first", "second", "rel");
    let mut worst = 0.0f64;
    for (i, (p, q)) in x.iter().zip(&y).enumerate() {
        let rel = (p - q).abs() / p.abs().max(q.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        let _ = writeln!(text, "{:<6} {p:>16.10} {q:>16.10} {rel:>10.2e}", i + 1);
    }
    let same_len = x.len() == y.len();
    if !same_len {
        let _ = writeln!(text, "mode counts differ: {} vs {}", x.len(), y.len());
    }
    let _ = writeln!(text, "max relative difference {worst:.3e} (tolerance {:.1e})", a.rel_tol);
    Ok(result_line(text, Outcome::from_bool(same_len && worst <= a.rel_tol)))
}

fn lengths_cmd(a: &LengthsArgs, text: &mut String) -> Result<Outcome, CliError> {
    let pair = load_pair(&a.pair)?;
    let r = lengths::isolength_check(&pair, a.maxlen)?;
    let _ = writeln!(text, "{:<6} {:>8} {:>12} {:>12}", "length", "words", "first", "second");
    for (len, words, s1, s2) in &r.per_length {
        let _ = writeln!(text, "{len:<6} {words:>8} {s1:>12} {s2:>12}");
    }
    match &r.witness {
        None => {
            let _ = writeln!(text, "isolength up to length {}", a.maxlen);
        }
        Some(w) => {
            let _ = writeln!(text, "counts differ on word {}", word_string(w));
        }
    }
    Ok(result_line(text, Outcome::from_bool(r.isolength())))
}

/// Parses `7`, `3/4` or `2.25` exactly.
pub fn parse_rational(s: &str) -> Result<Q, CliError> {
    let bad = || CliError::Usage(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        let scale = 10i128.checked_pow(digits).ok_or_else(bad)?;
        let neg = int.starts_with('-');
        let whole: i128 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let part: i128 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let part = if neg { -part } else { part };
        return Ok(Q::new(whole * scale + part, scale));
    }
    s.parse::<Q>().map_err(|_| bad())
}

fn theta_cmd(a: &ThetaArgs, text: &mut String) -> Result<Outcome, CliError> {
    let lattice = if Path::new(&a.lattice).is_file() {
        Lattice::parse_file(&read(Path::new(&a.lattice))?, &a.lattice)?
    } else {
        Lattice::named(&a.lattice)?
    };
    let max = parse_rational(&a.max_norm)?;
    let t = tori::theta(&lattice, max)?;
    let _ = writeln!(
        text,
        "# {} rank {} det {} scale {}",
        lattice.name,
        lattice.rank(),
        lattice.determinant(),
        t.scale
    );
    let _ = writeln!(text, "scaled_norm,norm,count");
    for (m, c) in &t.counts {
        let _ = writeln!(text, "{m},{},{c}", Q::new(*m, t.scale));
    }
    Ok(Outcome::Pass)
}

fn weyl_cmd(a: &WeylArgs, text: &mut String) -> Result<Outcome, CliError> {
    let pair = load_pair(&a.pair)?;
    let tile = parse_base(&a.base)?;
    let (d1, d2) = weyl_pair(&tile, &pair)?;
    let _ = writeln!(text, "{:<7} {:>18} {:>18} {:>18} {:>10} {:>6}", "member", "area", "perimeter", "K", "K exact", "genus");
    let mut rows = Vec::new();
    for (k, d) in [(1, &d1), (2, &d2)] {
        let w = billiards::weyl_data(d)?;
        let genus = tile
            .angles_over_pi()
            .map(|a| billiards::translation_surface_genus(&a))
            .transpose()?
            .map_or("-".to_string(), |g| g.to_string());
        let exact = w.k_exact.map_or("-".to_string(), |k| k.to_string());
        let _ = writeln!(
            text,
            "{k:<7} {:>18.12} {:>18.12} {:>18.12} {exact:>10} {genus:>6}",
            w.area, w.perimeter, w.k
        );
        rows.push(w);
    }
    let same = (rows[0].area - rows[1].area).abs() <= WEYL_TOL
        && (rows[0].perimeter - rows[1].perimeter).abs() <= WEYL_TOL
        && (rows[0].k - rows[1].k).abs() <= WEYL_TOL
        && rows[0].k_exact == rows[1].k_exact;
    Ok(result_line(text, Outcome::from_bool(same)))
}

fn gp_cmd(a: &GpArgs, text: &mut String) -> Result<Outcome, CliError> {
    let g = liegeom::gp_spectrum(a.gon, a.s, a.t)?;
    let _ = writeln!(text, "generalized {}-gon of order ({}, {}), {} points", a.gon, a.s, a.t, g.points());
    let _ = writeln!(text, "{:<20} {:>22}", "closed form", "intersection matrix");
    for (x, y) in g.exact.iter().zip(&g.numeric) {
        let _ = writeln!(text, "{:<20} {y:>22.15}", x.to_string());
    }
    let _ = writeln!(text, "max deviation {:.1e}", g.deviation);
    Ok(result_line(text, Outcome::Pass))
}

fn mixed_cmd(a: &MixedArgs, text: &mut String) -> Result<Outcome, CliError> {
    if !(a.cutoff.is_finite() && a.cutoff >= 0.0) {
        return Err(CliError::Usage("--cutoff must be a nonnegative number".into()));
    }
    let (sq, tr) = numspec::mixed_bc_pair_spectra(a.cutoff);
    let _ = writeln!(text, "{:<6} {:>12} {:>12}", "index", "square", "triangle");
    for i in 0..sq.len().max(tr.len()) {
        let show = |v: &[num_rational::Rational64]| v.get(i).map_or("-".to_string(), |x| x.to_string());
        let _ = writeln!(text, "{:<6} {:>12} {:>12}", i + 1, show(&sq), show(&tr));
    }
    Ok(result_line(text, Outcome::from_bool(sq == tr)))
}
