use clap::{Parser, Subcommand};
use gqca::cli::{
    list_experiments, parse_overlay, parse_style, record_run, run_experiment, ExperimentConfig,
};
use gqca::{BasisConfig, BoundaryCondition, GateParams, GqcaError};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gqca", version, about = "Goldilocks QCA experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment; extra `--key=value` flags override the config file.
    Run {
        experiment: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// List the experiments.
    List,
    /// Draw the spacetime diagram of a classical run.
    Render {
        /// Initial configuration, site 0 first, e.g. 0011100000.
        initial: String,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        /// `periodic` or `fixed:L:R`.
        #[arg(long, default_value = "periodic")]
        bc: String,
        #[arg(long, default_value = "text")]
        style: String,
        /// `none`, `signals`, `probes` or `signals+probes`.
        #[arg(long, default_value = "signals")]
        overlay: String,
        #[arg(long, default_value_t = 3)]
        probe_spacing: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn render(
    initial: &str,
    steps: usize,
    bc: &str,
    style: &str,
    overlay: &str,
    spacing: usize,
    out: Option<PathBuf>,
) -> gqca::Result<()> {
    let cfg: BasisConfig = initial.parse()?;
    let bc: BoundaryCondition = bc.parse()?;
    let style = parse_style(style)?;
    let overlay = parse_overlay(overlay, spacing)?;
    let rec = record_run(cfg, steps, &GateParams::classical(), bc)?;
    match out {
        Some(p) => gqca::render_diagram(&rec, style, &overlay, &p),
        None => {
            let bytes = match style {
                gqca::Style::Text => gqca::render_text(&rec, &overlay).into_bytes(),
                gqca::Style::Ppm => gqca::render_ppm(&rec, &overlay),
            };
            std::io::stdout().write_all(&bytes)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => {
            for (name, about) in list_experiments() {
                println!("{name:24} {about}");
            }
            Ok(())
        }
        Command::Run {
            experiment,
            config,
            overrides,
        } => (|| {
            let mut cfg = ExperimentConfig::new(experiment);
            if let Some(p) = config {
                cfg.load_file(&p)?;
            }
            cfg.apply_flags(&overrides)?;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            run_experiment(&cfg, &mut lock)
        })(),
        Command::Render {
            initial,
            steps,
            bc,
            style,
            overlay,
            probe_spacing,
            out,
        } => render(&initial, steps, &bc, &style, &overlay, probe_spacing, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gqca: {e}");
            if let GqcaError::UnknownExperiment(_) = e {
                let names: Vec<&str> = list_experiments().into_iter().map(|(n, _)| n).collect();
                eprintln!("known experiments: {}", names.join(", "));
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
