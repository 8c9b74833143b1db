//! Command-line front end. Flags override values from the `--config` file.

mod config;

pub use config::RunConfig;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::frontend::{binaural_cues, Filterbank};
use crate::geometry::{
    psr_distance_for_tau_overlap, relative_panning, tau_overlap, tau_overlap_exact, x_for_full_shift,
    PanningPoint, RelativeMethod, StereoSetup,
};
use crate::io::write_atomic;
use crate::panning::{arrangement_curve, coverage_angle, psr_curve, psr_design, MicArrangement, PRESET_NAMES};
use crate::render::{render, stereo_pair_sources, RenderOptions};
use crate::stimuli::generate;
use crate::sweep::{
    arrangement_comparison, grid_ictd_icld, psr_average_vs_d, psr_surface, spatial_map, write_result, Scorer,
    SweepResult,
};
use crate::uncertainty::{build_dictionary, score_cues, FreeFieldDictionary};

#[derive(Debug, Parser)]
#[command(name = "stereo-uncertainty", version, about = "Localization uncertainty of stereophonic reproduction")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// HRIR JSON file (default: analytic spherical head).
    #[arg(long, global = true)]
    pub hrir: Option<PathBuf>,
    /// Dictionary file to read or write.
    #[arg(long = "dict", global = true)]
    pub dictionary: Option<PathBuf>,
    /// Output directory.
    #[arg(long = "out", global = true)]
    pub output_dir: Option<PathBuf>,
    /// Williams-curve control points (JSON).
    #[arg(long, global = true)]
    pub williams: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Stimulus seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Distance exponent.
    #[arg(long, global = true)]
    pub p: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the free-field cue dictionary.
    BuildDict {
        #[arg(long)]
        repetitions: Option<usize>,
    },
    /// Score one panning condition at one listener position.
    Analyze(AnalyzeArgs),
    /// Run a parameter sweep.
    Sweep {
        kind: SweepKind,
        /// Listener x, metres (grid and psr-surface).
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        /// Per-cell cache directory.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Microphone-pair design tables.
    #[command(subcommand)]
    Design(DesignCommand),
    /// Geometric closed forms.
    #[command(subcommand)]
    Geometry(GeometryCommand),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Inter-channel time difference, ms.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub ictd: f64,
    /// Inter-channel level difference, dB.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub icld: f64,
    /// Listener x, metres (positive to the right).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x: f64,
    /// Listener y, metres.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Grid,
    Spatial,
    PsrSurface,
    PsrAvg,
    Compare,
}

#[derive(Debug, Subcommand)]
pub enum DesignCommand {
    /// PSR pair for a given inter-microphone distance.
    Psr {
        /// Inter-microphone distance, metres.
        #[arg(long)]
        d: f64,
        /// Loudspeaker base angle, degrees.
        #[arg(long, default_value_t = 60.0)]
        base_angle: f64,
        /// Source-angle step, degrees.
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// Curve and coverage angle of a named pair or a PSR pair.
    Arrangement {
        /// One of blumlein, xy, ortf, din, nos.
        #[arg(long, conflicts_with = "psr_d", required_unless_present = "psr_d")]
        name: Option<String>,
        /// PSR pair with this inter-microphone distance, metres.
        #[arg(long)]
        psr_d: Option<f64>,
        #[arg(long, default_value_t = 60.0)]
        base_angle: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GeometryCommand {
    /// ICTD at which both loudspeakers arrive together at one ear.
    TauOverlap {
        #[arg(long, default_value_t = 0.09)]
        head_radius: f64,
        /// Ear angle from the look direction, degrees.
        #[arg(long, default_value_t = 100.0)]
        ear_angle: f64,
        #[arg(long, default_value_t = 60.0)]
        base_angle: f64,
        /// Loudspeaker distance for the exact evaluation, metres.
        #[arg(long, default_value_t = 2.0)]
        distance: f64,
    },
    /// ICTD/ICLD as seen from an off-centre listener.
    Relative {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        ictd: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        icld: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, default_value_t = 60.0)]
        base_angle: f64,
        #[arg(long, default_value_t = 2.0)]
        distance: f64,
    },
    /// Coverage angles of the built-in pairs.
    Coverage {
        #[arg(long)]
        name: Option<String>,
    },
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// The configuration after applying flag overrides.
pub fn resolve_config(global: &GlobalArgs) -> Result<RunConfig> {
    let mut config = match &global.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(p) = &global.hrir {
        config.hrir = Some(p.clone());
    }
    if let Some(p) = &global.dictionary {
        config.dictionary_path = p.clone();
    }
    if let Some(p) = &global.output_dir {
        config.output_dir = p.clone();
    }
    if let Some(p) = &global.williams {
        config.williams_curves = Some(p.clone());
    }
    if let Some(n) = global.workers {
        config.sweep.workers = Some(n);
    }
    if let Some(seed) = global.seed {
        config.sweep.stimulus.seed = seed;
        config.dictionary.stimulus.seed = seed;
    }
    if let Some(p) = global.p {
        config.sweep.model.p = p;
        config.dictionary.p = p;
    }
    config.validate()?;
    Ok(config)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let mut config = resolve_config(&cli.global)?;
    match cli.command {
        Command::BuildDict { repetitions } => {
            if let Some(r) = repetitions {
                config.dictionary.repetitions = r;
            }
            cmd_build_dict(&config, out)
        }
        Command::Analyze(args) => cmd_analyze(&config, &args, out),
        Command::Sweep { kind, x, cache_dir } => {
            if let Some(x) = x {
                config.grid.x_m = x;
                config.psr_surface.x_m = x;
            }
            if cache_dir.is_some() {
                config.sweep.cache_dir = cache_dir;
            }
            cmd_sweep(&config, kind, out)
        }
        Command::Design(cmd) => cmd_design(&config, cmd, out),
        Command::Geometry(cmd) => cmd_geometry(&config, cmd, out),
    }
}

fn load_dictionary(config: &RunConfig) -> Result<FreeFieldDictionary> {
    FreeFieldDictionary::load(&config.dictionary_path)
}

pub fn cmd_build_dict(config: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let hrirs = config.load_hrirs()?;
    let dict = build_dictionary(&hrirs, &config.dictionary)?;
    dict.save(&config.dictionary_path)?;
    writeln!(out, "dictionary: {}", config.dictionary_path.display())?;
    writeln!(out, "hrir: {}", dict.provenance.hrir)?;
    writeln!(
        out,
        "bands: {}  grid: {} angles  repetitions: {}  p: {}",
        dict.bands.len(),
        dict.theta_grid_deg.len(),
        dict.provenance.repetitions,
        dict.p
    )?;
    writeln!(out, "h_min: {:.4}", dict.h_min)?;
    Ok(())
}

pub fn cmd_analyze(config: &RunConfig, args: &AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let sweep = &config.sweep;
    let setup = sweep.setup()?;
    let pose = sweep.pose(args.x, args.y)?;
    if args.ictd.abs() > 1.0 + 1e-9 {
        return Err(Error::BeyondSummingRegime { ictd_ms: args.ictd });
    }
    let point = PanningPoint::new(args.ictd * 1e-3, args.icld);
    for method in [RelativeMethod::PrintedApproximation, RelativeMethod::ExactPath] {
        let r = relative_panning(point, &pose, &setup, method);
        writeln!(
            out,
            "RICTD ({}): {:.4} ms  RICLD: {:.4} dB",
            method_name(method),
            r.rictd * 1e3,
            r.ricld
        )?;
    }
    let hrirs = config.load_hrirs()?;
    let dict = load_dictionary(config)?;
    let bank = Filterbank::new(dict.provenance.filterbank)?;
    let signal = generate(&sweep.stimulus)?;
    let sources = stereo_pair_sources(&signal, point, &setup, &pose)?;
    let opts = RenderOptions {
        sample_rate: dict.provenance.filterbank.sample_rate,
        speed_of_sound: sweep.speed_of_sound,
        delay_mode: sweep.delay_mode,
    };
    let ears = render(&sources, &hrirs, &opts)?;
    let cues = binaural_cues(&ears, &bank)?;
    let result = score_cues(&cues, &dict, &sweep.model)?;
    writeln!(out, "h: {:.4}", result.h)?;
    writeln!(out, "h_bar: {:.4}", result.h_bar)?;
    writeln!(out, "likelihood peak: {} deg", result.likelihood.argmax_deg())?;

    let mut csv = String::from("theta_deg,likelihood\n");
    for (t, v) in result.likelihood.theta_grid_deg.iter().zip(&result.likelihood.values) {
        csv.push_str(&format!("{t},{v}\n"));
    }
    let path = config.output_dir.join("likelihood.csv");
    write_atomic(&path, csv.as_bytes())?;
    writeln!(out, "likelihood: {}", path.display())?;
    Ok(())
}

fn method_name(m: RelativeMethod) -> &'static str {
    match m {
        RelativeMethod::PrintedApproximation => "printed",
        RelativeMethod::ExactPath => "exact",
    }
}

pub fn cmd_sweep(config: &RunConfig, kind: SweepKind, out: &mut dyn Write) -> Result<()> {
    let hrirs = config.load_hrirs()?;
    let dict = load_dictionary(config)?;
    let scorer = Scorer::new(&config.sweep, &hrirs, &dict, config.load_curves()?)?;
    let results = match kind {
        SweepKind::Grid => vec![grid_ictd_icld(&scorer, &config.grid)?],
        SweepKind::Spatial => vec![spatial_map(&scorer, &config.spatial)?],
        SweepKind::PsrSurface => vec![psr_surface(&scorer, &config.psr_surface)?],
        SweepKind::PsrAvg => vec![psr_average_vs_d(&scorer, &config.psr_avg)?],
        SweepKind::Compare => {
            let (mean, excursion) = arrangement_comparison(&scorer, &config.compare)?;
            vec![mean, excursion]
        }
    };
    for result in &results {
        let (csv, json) = write_result(result, &config.output_dir)?;
        summarize(result, out)?;
        writeln!(out, "  wrote {} and {}", csv.display(), json.display())?;
    }
    Ok(())
}

fn summarize(result: &SweepResult, out: &mut dyn Write) -> Result<()> {
    let (flat, min) = result.argmin();
    let at: Vec<String> = result
        .axes
        .iter()
        .zip(result.unravel(flat))
        .map(|(a, i)| match a.labels.get(i) {
            Some(l) => format!("{}={l}", a.name),
            None => format!("{}={} {}", a.name, a.values[i], a.unit),
        })
        .collect();
    writeln!(
        out,
        "{}: shape {:?}  min {:.4} at {}  max {:.4}  ({:.1} s)",
        result.metadata.kind,
        result.shape(),
        min,
        at.join(", "),
        result.max(),
        result.metadata.runtime_s
    )?;
    // per-row argmins are the quantity of interest for distance sweeps
    if result.axes.len() == 2 && !result.axes[0].labels.is_empty() {
        let cols = result.axes[1].len();
        for (r, label) in result.axes[0].labels.iter().enumerate() {
            let row = &result.values[r * cols..(r + 1) * cols];
            let k = (0..cols).fold(0, |b, k| if row[k] < row[b] { k } else { b });
            writeln!(
                out,
                "  {label}: min {:.4} at {}={} {}",
                row[k], result.axes[1].name, result.axes[1].values[k], result.axes[1].unit
            )?;
        }
    }
    Ok(())
}

fn curve_table(points: &[(f64, PanningPoint)]) -> String {
    let mut csv = String::from("theta_s_deg,ictd_ms,icld_db\n");
    for (t, p) in points {
        csv.push_str(&format!("{t},{},{}\n", p.ictd * 1e3, p.icld));
    }
    csv
}

fn angle_steps(half_deg: f64, step_deg: f64) -> Result<Vec<f64>> {
    if !(step_deg > 0.0) {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let n = (half_deg / step_deg + 1e-9).floor() as i64;
    let mut v: Vec<f64> = (-n..=n).map(|k| k as f64 * step_deg).collect();
    if (n as f64 * step_deg - half_deg).abs() > 1e-9 {
        v.insert(0, -half_deg);
        v.push(half_deg);
    }
    Ok(v)
}

fn write_table(dir: &Path, name: &str, csv: &str, out: &mut dyn Write) -> Result<()> {
    let path = dir.join(name);
    write_atomic(&path, csv.as_bytes())?;
    writeln!(out, "table: {}", path.display())?;
    Ok(())
}

pub fn cmd_design(config: &RunConfig, cmd: DesignCommand, out: &mut dyn Write) -> Result<()> {
    let curves = config.load_curves()?;
    let c = config.sweep.speed_of_sound;
    match cmd {
        DesignCommand::Psr { d, base_angle, step } => {
            let design = psr_design(d, base_angle.to_radians(), &curves, c)?;
            writeln!(out, "d: {:.4} m", design.d)?;
            writeln!(out, "ictd_max: {:.4} ms", design.ictd_max * 1e3)?;
            writeln!(out, "icld_w: {:.4} dB", design.icld_w)?;
            writeln!(out, "beta: {:.4} deg", design.beta.to_degrees())?;
            let points = angle_steps(0.5 * base_angle, step)?
                .into_iter()
                .map(|t| Ok((t, psr_curve(&design, t.to_radians())?)))
                .collect::<Result<Vec<_>>>()?;
            write_table(&config.output_dir, &format!("design-psr-d{d}.csv"), &curve_table(&points), out)
        }
        DesignCommand::Arrangement { name, psr_d, base_angle, step } => {
            let arr = match (name, psr_d) {
                (Some(n), _) => MicArrangement::preset(&n)?,
                (None, Some(d)) => MicArrangement::psr(psr_design(d, base_angle.to_radians(), &curves, c)?),
                (None, None) => return Err(Error::InvalidParameter("give --name or --psr-d".into())),
            };
            let cov = coverage_angle(&arr, &curves).to_degrees();
            writeln!(out, "arrangement: {}", arr.name)?;
            writeln!(out, "coverage: {cov:.1} deg")?;
            let points = angle_steps(0.5 * cov, step)?
                .into_iter()
                .filter_map(|t| arrangement_curve(&arr, t.to_radians()).ok().map(|p| (t, p)))
                .collect::<Vec<_>>();
            write_table(&config.output_dir, &format!("design-{}.csv", arr.name), &curve_table(&points), out)
        }
    }
}

pub fn cmd_geometry(config: &RunConfig, cmd: GeometryCommand, out: &mut dyn Write) -> Result<()> {
    let c = config.sweep.speed_of_sound;
    match cmd {
        GeometryCommand::TauOverlap { head_radius, ear_angle, base_angle, distance } => {
            let (te, phi) = (ear_angle.to_radians(), base_angle.to_radians());
            let setup = StereoSetup::with_speed_of_sound(phi, distance, c)?;
            writeln!(out, "tau_overlap: {:.4} ms", tau_overlap(head_radius, te, phi, c) * 1e3)?;
            writeln!(out, "tau_overlap (exact): {:.4} ms", tau_overlap_exact(&setup, head_radius, te)? * 1e3)?;
            writeln!(
                out,
                "psr distance: {:.2} cm",
                psr_distance_for_tau_overlap(head_radius, te, phi) * 100.0
            )?;
        }
        GeometryCommand::Relative { ictd, icld, x, y, base_angle, distance } => {
            let setup = StereoSetup::with_speed_of_sound(base_angle.to_radians(), distance, c)?;
            let pose = config.sweep.pose(x, y)?;
            for method in [RelativeMethod::PrintedApproximation, RelativeMethod::ExactPath] {
                let r = relative_panning(PanningPoint::new(ictd * 1e-3, icld), &pose, &setup, method);
                writeln!(
                    out,
                    "{}: RICTD {:.4} ms  RICLD {:.4} dB",
                    method_name(method),
                    r.rictd * 1e3,
                    r.ricld
                )?;
            }
            writeln!(out, "x for a full 1 ms shift: {:.4} m", x_for_full_shift(&setup))?;
        }
        GeometryCommand::Coverage { name } => {
            let curves = config.load_curves()?;
            let names: Vec<String> = match name {
                Some(n) => vec![n],
                None => PRESET_NAMES.iter().map(|s| s.to_string()).collect(),
            };
            for n in names {
                let arr = MicArrangement::preset(&n)?;
                writeln!(out, "{}: {:.1} deg", arr.name, coverage_angle(&arr, &curves).to_degrees())?;
            }
        }
    }
    Ok(())
}
