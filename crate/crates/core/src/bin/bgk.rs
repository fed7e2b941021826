use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bgk_core::harness::config::{Scheme, SolverConfig, TauKind};
use bgk_core::harness::output::{fmt_f64, write_error_table, write_fields, write_report_json, write_run};
use bgk_core::harness::reference::ReferenceStore;
use bgk_core::harness::studies::{
    cfl_sweep, compare_riemann, conservation_study, convergence, CFL_REFERENCE, CFL_SWEEP,
    CFL_SWEEP_SIZE, CONSERVATION_SIZES, CONVERGENCE_SIZES, REFERENCE_SIZE,
};
use bgk_core::harness::run::simulate;
use bgk_core::Result;

/// `println!` that ignores a closed stdout (e.g. output piped into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "bgk", version, about = "Large time step solvers for the 1D BGK model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration file and write fields.csv, entropy.csv, report.json.
    Run {
        config: PathBuf,
        /// `key=value`, applied on top of the file; repeatable.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Grid-refinement error table on the smooth test.
    Table1 {
        #[arg(long, default_value = "S2")]
        scheme: Scheme,
        #[arg(long, default_value_t = 1e-2)]
        tau: f64,
        #[arg(long, value_delimiter = ',', default_values_t = CONVERGENCE_SIZES)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = REFERENCE_SIZE)]
        reference_n: usize,
        /// Where reference solutions are cached and hashed.
        #[arg(long, default_value = "references")]
        reference_dir: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Riemann problem against the exact γ = 3 Euler solution.
    Riemann {
        #[arg(long, default_value = "Conservative")]
        scheme: Scheme,
        #[arg(long, default_value_t = 1e-6)]
        tau: f64,
        #[arg(long, default_value_t = 300)]
        n_x: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Errors at several CFL numbers against a small-CFL run.
    SweepCfl {
        #[arg(long, value_delimiter = ',', default_values_t = [Scheme::S1, Scheme::S2, Scheme::S3])]
        schemes: Vec<Scheme>,
        #[arg(long, value_delimiter = ',', default_values_t = CFL_SWEEP)]
        cfls: Vec<f64>,
        #[arg(long, default_value_t = CFL_REFERENCE)]
        reference_cfl: f64,
        #[arg(long, default_value_t = 1e-2)]
        tau: f64,
        #[arg(long, default_value_t = CFL_SWEEP_SIZE)]
        n_x: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Conservation drift under grid refinement.
    Conservation {
        #[arg(long, default_value = "S2")]
        scheme: Scheme,
        #[arg(long, default_value_t = 1e-2)]
        tau: f64,
        #[arg(long, value_delimiter = ',', default_values_t = CONSERVATION_SIZES)]
        sizes: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long, default_value = "out")]
    output_dir: PathBuf,
    /// Additional `key=value` config overrides; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl Common {
    fn config(&self, base: SolverConfig) -> Result<SolverConfig> {
        let mut cfg = SolverConfig {
            output_dir: self.output_dir.clone(),
            ..base
        };
        if let Some(c) = self.cfl {
            cfg.cfl = c;
        }
        let text = cfg.to_toml_string()?;
        SolverConfig::from_toml_str(&text, &self.overrides)
    }
}

fn create(dir: &Path, name: &str) -> Result<File> {
    std::fs::create_dir_all(dir)?;
    Ok(File::create(dir.join(name))?)
}

fn exec(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, overrides } => {
            let cfg = SolverConfig::from_file(&config, &overrides)?;
            let sim = simulate(&cfg)?;
            write_run(&cfg.output_dir, &sim.report)?;
            let r = &sim.report;
            out!(
                "{} n_x={} cfl={} tau={} steps={} t={} wall={:.3}s",
                r.scheme, r.n_x, r.cfl, r.tau, r.steps, r.t_final, r.wall_time_s
            );
            out!(
                "drift mass={:.3e} momentum={:.3e} energy={:.3e}",
                r.conservation.mass, r.conservation.momentum, r.conservation.energy
            );
            out!("wrote {}", cfg.output_dir.display());
        }
        Command::Table1 {
            scheme,
            tau,
            sizes,
            reference_n,
            reference_dir,
            common,
        } => {
            let base = common.config(SolverConfig {
                tau_model: TauKind::Constant,
                ..SolverConfig::test1(scheme, reference_n, tau)
            })?;
            let store = ReferenceStore::new(reference_dir);
            let table = convergence(&base, &sizes, reference_n, Some(&store))?;
            write_error_table(create(&base.output_dir, "errors.csv")?, &table)?;
            out!("{scheme}, tau={tau:e}, cfl={}", base.cfl);
            out!("{:>6} {:>12} {:>12} {:>12} | {:>6} {:>6} {:>6}", "N_x", "rho", "u", "T", "rho", "u", "T");
            for row in &table.rows {
                let o = row
                    .orders
                    .map(|o| format!("{:6.3} {:6.3} {:6.3}", o[0], o[1], o[2]))
                    .unwrap_or_default();
                out!(
                    "{:>6} {:12.5e} {:12.5e} {:12.5e} | {o}",
                    row.n_x, row.errors[0], row.errors[1], row.errors[2]
                );
            }
        }
        Command::Riemann {
            scheme,
            tau,
            n_x,
            common,
        } => {
            let cfg = common.config(SolverConfig::riemann(scheme, n_x, tau))?;
            let sim = simulate(&cfg)?;
            let cmp = compare_riemann(&cfg, &sim.report)?;
            let mut out = csv_lines(&["x", "rho", "rho_exact"]);
            for i in 0..cmp.x.len() {
                out.push_str(&format!(
                    "{},{},{}\n",
                    fmt_f64(cmp.x[i]),
                    fmt_f64(cmp.rho[i]),
                    fmt_f64(cmp.rho_exact[i])
                ));
            }
            std::fs::create_dir_all(&cfg.output_dir)?;
            std::fs::write(cfg.output_dir.join("riemann.csv"), out)?;
            write_fields(create(&cfg.output_dir, "fields.csv")?, &sim.report.x, &sim.report.fields)?;
            write_report_json(create(&cfg.output_dir, "report.json")?, &sim.report)?;
            out!("{scheme}, tau={tau:e}, n_x={n_x}, cfl={}, dx={:.4e}", cfg.cfl, cmp.dx);
            out!("L1 density error {:.4e}", cmp.l1_density);
            out!(
                "shock   exact {:.5} numeric {:?} (|err|/dx = {:.2})",
                cmp.shock_exact,
                cmp.shock_numeric,
                cmp.shock_error() / cmp.dx
            );
            out!(
                "contact exact {:.5} numeric {:?} (|err|/dx = {:.2})",
                cmp.contact_exact,
                cmp.contact_numeric,
                cmp.contact_error() / cmp.dx
            );
        }
        Command::SweepCfl {
            schemes,
            cfls,
            reference_cfl,
            tau,
            n_x,
            common,
        } => {
            let base = common.config(SolverConfig::test1(Scheme::S2, n_x, tau))?;
            let rows = cfl_sweep(&base, &schemes, &cfls, reference_cfl)?;
            let mut out = csv_lines(&["scheme", "cfl", "rho", "u", "T"]);
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.scheme,
                    r.cfl,
                    fmt_f64(r.errors[0]),
                    fmt_f64(r.errors[1]),
                    fmt_f64(r.errors[2])
                ));
                out!(
                    "{} cfl={:<5} {:10.3e} {:10.3e} {:10.3e}",
                    r.scheme, r.cfl, r.errors[0], r.errors[1], r.errors[2]
                );
            }
            std::fs::create_dir_all(&base.output_dir)?;
            std::fs::write(base.output_dir.join("cfl.csv"), out)?;
        }
        Command::Conservation {
            scheme,
            tau,
            sizes,
            common,
        } => {
            let base = common.config(SolverConfig::test1(scheme, 20, tau))?;
            let rows = conservation_study(&base, &sizes)?;
            let mut out = csv_lines(&["N_x", "density", "momentum", "energy"]);
            for (n, d) in &rows {
                out.push_str(&format!(
                    "{n},{},{},{}\n",
                    fmt_f64(d.mass),
                    fmt_f64(d.momentum),
                    fmt_f64(d.energy)
                ));
                out!("{n:>6} {:12.5e} {:12.5e} {:12.5e}", d.mass, d.momentum, d.energy);
            }
            std::fs::create_dir_all(&base.output_dir)?;
            std::fs::write(base.output_dir.join("conservation.csv"), out)?;
        }
    }
    Ok(())
}

fn csv_lines(header: &[&str]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    match exec(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
