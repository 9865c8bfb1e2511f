//! `kerrqc`: batch driver producing CSV tables, grids and meshes.

mod config;
mod error;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{Config, Product};
use error::CliError;
use output::RunManifest;

#[derive(Debug, Parser)]
#[command(
    name = "kerrqc",
    version,
    about = "Quasiclassical Kerr dynamics: batch products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file with `[section]` headers and `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(long, global = true, value_name = "DIR", default_value = "kerrqc-out")]
    out: PathBuf,

    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    threads: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Reduced purity by every method over the tau grid.
    Purity,
    /// Smallest partially transposed symplectic eigenvalue over the tau grid.
    Entangle,
    /// Dark-plane squeezing for each requested dephasing rate.
    Squeeze,
    /// Poincare-space grids and isosurface meshes per tau.
    Poincare,
    /// Exact purity against the truncated Fock-space state.
    Oracle,
    /// Print the resolved configuration for a product and exit.
    ShowConfig {
        #[arg(value_enum)]
        product: ProductArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProductArg {
    Purity,
    Entangle,
    Squeeze,
    Poincare,
    Oracle,
}

impl From<ProductArg> for Product {
    fn from(p: ProductArg) -> Self {
        match p {
            ProductArg::Purity => Self::Purity,
            ProductArg::Entangle => Self::Entangle,
            ProductArg::Squeeze => Self::Squeeze,
            ProductArg::Poincare => Self::Poincare,
            ProductArg::Oracle => Self::Oracle,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Csv = cli.format;
    let product = match cli.command {
        Command::Purity => Product::Purity,
        Command::Entangle => Product::Entangle,
        Command::Squeeze => Product::Squeeze,
        Command::Poincare => Product::Poincare,
        Command::Oracle => Product::Oracle,
        Command::ShowConfig { product } => {
            return match Config::load(product.into(), cli.config.as_deref(), std::env::vars()) {
                Ok(cfg) => {
                    print!(
                        "{}",
                        toml::to_string(&cfg).expect("configuration serializes")
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
    };

    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(1);
    }
    if let Err(e) = std::fs::create_dir_all(&cli.out) {
        eprintln!("error: {}: {e}", cli.out.display());
        return ExitCode::from(1);
    }

    let mut manifest = RunManifest::new(product.name(), rayon::current_num_threads());
    let result = Config::load(product, cli.config.as_deref(), std::env::vars()).and_then(|cfg| {
        manifest.set_config(&cfg);
        run::run(product, &cfg, &cli.out, &mut manifest.stages)
    });
    let code = match result {
        Ok(outputs) => {
            manifest.status = "ok";
            manifest.outputs = outputs;
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            manifest.status = "failed";
            manifest.error = Some(e.to_string());
            match e {
                CliError::Config(_) | CliError::ConfigFile { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    };
    match manifest.write(&cli.out) {
        Ok(path) => {
            for f in &manifest.outputs {
                println!("{}  {}", f.sha256, f.path);
            }
            eprintln!("manifest: {}", path.display());
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
