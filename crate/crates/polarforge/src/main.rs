use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use polarforge::alphas::{train_alpha_schedule, AlphaTrainSetup};
use polarforge::campaign::{run_cer, CampaignSetup};
use polarforge::config::{
    load_config, AlphasConfig, CerConfig, Manifest, ThresholdConfig,
};
use polarforge::files;
use polarforge::selftest::run_selftest;
use polarforge::thresholds::{find_threshold_parallel, ThresholdOutcome};
use polarforge_core::mcde::{DeConfig, DeRun};
use polarforge_core::product::{DecodeStatus, ProductDecoder};

/// Workbench for product codes with precoded polar component codes.
#[derive(Parser)]
#[command(name = "polarforge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON configuration file (a run manifest is also accepted).
    #[arg(long)]
    config: PathBuf,
    /// Override a config key, e.g. --set list_size=4 or
    /// --set stop.max_frames=100000. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an error-rate campaign; emits CSV plus a run manifest.
    Cer {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Manifest path (defaults to `<out>.manifest.json` when --out is given).
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Train per-half-iteration scaling coefficients; writes a schedule CSV.
    Alphas {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Schedule CSV output path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Bisect a decoding threshold; emits a JSON report.
    Threshold {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Report path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Encode one info-bit grid into a product codeword.
    Encode {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Info bits: k2 lines of k1 characters from {0,1}.
        #[arg(long)]
        info: PathBuf,
        /// Codeword output (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode one channel-LLR grid.
    Decode {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Channel LLRs: N2 lines of N1 reals (positive favors bit 0).
        #[arg(long)]
        llrs: PathBuf,
        /// Hard-decision output (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON decode report path (stderr when omitted).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the built-in brute-force oracle suite.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn base_dir(config_path: &Path) -> PathBuf {
    config_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn manifest_path(explicit: Option<PathBuf>, out: Option<&Path>) -> Option<PathBuf> {
    explicit.or_else(|| {
        out.map(|p| {
            let mut name = p.file_name().unwrap_or_default().to_os_string();
            name.push(".manifest.json");
            p.with_file_name(name)
        })
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Cer { cfg, out, manifest } => cmd_cer(cfg, out, manifest),
        Command::Alphas { cfg, out, manifest } => cmd_alphas(cfg, out, manifest),
        Command::Threshold { cfg, out, manifest } => cmd_threshold(cfg, out, manifest),
        Command::Encode { cfg, info, out } => cmd_encode(cfg, info, out),
        Command::Decode {
            cfg,
            llrs,
            out,
            report,
        } => cmd_decode(cfg, llrs, out, report),
        Command::Selftest { seed } => cmd_selftest(seed),
    }
}

fn cmd_cer(
    cfg_args: ConfigArgs,
    out: Option<PathBuf>,
    manifest: Option<PathBuf>,
) -> Result<ExitCode> {
    let (cfg, resolved) = load_config::<CerConfig>(&cfg_args.config, &cfg_args.set)?;
    let base = base_dir(&cfg_args.config);
    if cfg.snr_db.is_empty() {
        bail!("snr_db must list at least one Eb/N0 point");
    }
    let setup = CampaignSetup {
        spec: cfg.code.resolve(&base)?,
        list_size: cfg.list_size,
        soft_mode: cfg.soft_mode.into(),
        alphas: cfg.alphas.resolve(&base)?,
        max_half_iterations: cfg.max_half_iterations,
        seed: cfg.seed,
        stop: cfg.stop.into(),
        batch_size: cfg.batch_size,
        workers: cfg.workers,
    };
    let points = run_cer(&setup, &cfg.snr_db)?;
    let csv = files::cer_csv(&points);
    files::write_text(out.as_deref(), &csv)?;
    if let Some(mpath) = manifest_path(manifest, out.as_deref()) {
        let outputs = out
            .as_deref()
            .map(|p| vec![p.display().to_string()])
            .unwrap_or_default();
        Manifest::new("cer", resolved, outputs).write(&mpath)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_alphas(
    cfg_args: ConfigArgs,
    out: PathBuf,
    manifest: Option<PathBuf>,
) -> Result<ExitCode> {
    let (cfg, resolved) = load_config::<AlphasConfig>(&cfg_args.config, &cfg_args.set)?;
    let base = base_dir(&cfg_args.config);
    let spec = cfg.code.resolve(&base)?;
    let n_words = cfg
        .n_words
        .unwrap_or_else(|| AlphaTrainSetup::default_words(&spec));
    let setup = AlphaTrainSetup {
        spec,
        list_size: cfg.list_size,
        soft_mode: cfg.soft_mode.into(),
        ebn0_db: cfg.train_ebn0_db,
        n_words,
        max_half_iterations: cfg.max_half_iterations,
        seed: cfg.seed,
        min_initial_samples: cfg.min_initial_samples,
        exclude_early_stopped: cfg.exclude_early_stopped,
        workers: cfg.workers,
    };
    let outcome = train_alpha_schedule(&setup)?;
    for s in &outcome.stats {
        eprintln!(
            "half_iteration {} alpha {:.4} samples {} active_words {}",
            s.half_iteration, s.alpha, s.samples, s.active_words
        );
    }
    files::save_alpha_csv(&out, &outcome.schedule)?;
    if let Some(mpath) = manifest_path(manifest, Some(out.as_path())) {
        Manifest::new("alphas", resolved, vec![out.display().to_string()]).write(&mpath)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn de_run_json(run: &DeRun) -> Value {
    json!({
        "ebn0_db": run.ebn0_db,
        "converged": run.converged,
        "half_iterations": run.stats.len(),
        "trace": run.stats.iter().map(|s| json!({
            "half_iteration": s.half_iteration,
            "p_neg": s.p_neg,
            "mean": s.mean,
            "var": s.var,
        })).collect::<Vec<_>>(),
    })
}

fn cmd_threshold(
    cfg_args: ConfigArgs,
    out: Option<PathBuf>,
    manifest: Option<PathBuf>,
) -> Result<ExitCode> {
    let (cfg, resolved) = load_config::<ThresholdConfig>(&cfg_args.config, &cfg_args.set)?;
    let base = base_dir(&cfg_args.config);
    let spec = cfg.code.resolve(&base)?;
    let alphas = cfg.alphas.resolve(&base)?;
    let mut de = DeConfig::new(
        cfg.list_size,
        cfg.n_samples,
        cfg.max_half_iterations,
        cfg.seed,
    );
    de.escl = cfg.escl_config();
    de.epsilon = cfg.epsilon;
    let outcome = find_threshold_parallel(
        &spec,
        &alphas,
        &de,
        cfg.snr_lo_db,
        cfg.snr_hi_db,
        cfg.tol_db,
        cfg.workers,
    )?;
    let (report, ok) = match &outcome {
        ThresholdOutcome::Found {
            threshold_db,
            probes,
        } => (
            json!({
                "status": "found",
                "threshold_db": threshold_db,
                "tol_db": cfg.tol_db,
                "probes": probes,
                "resolved_config": resolved,
                "version": polarforge::version_string(),
            }),
            true,
        ),
        ThresholdOutcome::InvalidBracket { lo, hi } => (
            json!({
                "status": "invalid_bracket",
                "lo": de_run_json(lo),
                "hi": de_run_json(hi),
                "resolved_config": resolved,
                "version": polarforge::version_string(),
            }),
            false,
        ),
    };
    let text = serde_json::to_string_pretty(&report)? + "\n";
    files::write_text(out.as_deref(), &text)?;
    if let Some(mpath) = manifest_path(manifest, out.as_deref()) {
        let outputs = out
            .as_deref()
            .map(|p| vec![p.display().to_string()])
            .unwrap_or_default();
        Manifest::new("threshold", resolved, outputs).write(&mpath)?;
    }
    if ok {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("error: invalid bracket; diagnostic traces are in the report");
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_encode(cfg_args: ConfigArgs, info: PathBuf, out: Option<PathBuf>) -> Result<ExitCode> {
    let (cfg, _) = load_config::<CerConfig>(&cfg_args.config, &cfg_args.set)?;
    let spec = cfg.code.resolve(&base_dir(&cfg_args.config))?;
    let text = std::fs::read_to_string(&info)
        .with_context(|| format!("reading {}", info.display()))?;
    let grid = files::parse_bit_grid(&text, spec.info_rows(), spec.info_cols())?;
    let cw = polarforge_core::product::encode_product(&spec, &grid)?;
    files::write_text(out.as_deref(), &files::format_bit_grid(&cw))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_decode(
    cfg_args: ConfigArgs,
    llrs: PathBuf,
    out: Option<PathBuf>,
    report: Option<PathBuf>,
) -> Result<ExitCode> {
    let (cfg, _) = load_config::<CerConfig>(&cfg_args.config, &cfg_args.set)?;
    let base = base_dir(&cfg_args.config);
    let spec = cfg.code.resolve(&base)?;
    let alphas = cfg.alphas.resolve(&base)?;
    let text = std::fs::read_to_string(&llrs)
        .with_context(|| format!("reading {}", llrs.display()))?;
    let grid = files::parse_llr_grid(&text, spec.rows(), spec.cols())?;
    let mut dec = ProductDecoder::new(spec.clone(), cfg.list_size, cfg.soft_mode.into());
    let result = dec.decode(&grid, &alphas, cfg.max_half_iterations)?;
    files::write_text(out.as_deref(), &files::format_bit_grid(&result.hard))?;
    let status_ok = result.status == DecodeStatus::ValidCodeword;
    let info_bits = if status_ok {
        Some(files::format_bit_grid(&polarforge_core::product::extract_info(
            &spec,
            &result.hard,
        )?))
    } else {
        None
    };
    let report_json = json!({
        "status": match result.status {
            DecodeStatus::ValidCodeword => "valid-codeword",
            DecodeStatus::MaxIterations => "max-iters",
        },
        "half_iterations_used": result.half_iterations_used,
        "validity": result.validity,
        "info_bits": info_bits,
    });
    let report_text = serde_json::to_string_pretty(&report_json)? + "\n";
    match report {
        Some(p) => files::write_text(Some(&p), &report_text)?,
        None => eprint!("{report_text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(seed: u64) -> Result<ExitCode> {
    let report = run_selftest(seed);
    print!("{}", report.render());
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}
