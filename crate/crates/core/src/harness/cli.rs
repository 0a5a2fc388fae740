use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::geometry::{LensRadii, Point};
use crate::materials::{
    assemble_hat_medium, assemble_lens_medium, check_reflecting_complementary, lens_tensor_closed_form,
    push_forward_tensor, CheckOptions, ObjectMedium, Profile, RadialTensor,
};
use crate::modesolver::solve_layered;

use super::blowup::run_blowup_probe;
use super::config::ExperimentConfig;
use super::fit::fit_rate;
use super::report::{emit_blowup_report, emit_report, read_rate_csv};
use super::sweep::{incident_coefficients, solve_options};

#[derive(Debug, Parser)]
#[command(name = "superlens", version, about = "Spherical superlens experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct LensArgs {
    #[arg(long)]
    m: f64,
    #[arg(long)]
    r0: f64,
    #[arg(long)]
    alpha: f64,
    /// Multiplies r2 (1 = matched).
    #[arg(long, default_value_t = 1.0)]
    r2_factor: f64,
}

impl LensArgs {
    fn radii(&self) -> Result<LensRadii> {
        LensRadii::detuned(self.m, self.r0, self.alpha, self.r2_factor)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print r1, r2, r3 and beta of a lens.
    LensParams(LensArgs),
    /// Lens shell tensor at radius r: closed form against the numerical push-forward.
    Tensor {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long)]
        r: f64,
    },
    /// Audit the assembled lens for reflecting complementarity.
    CheckComplementary {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, default_value_t = 4.0)]
        eps: f64,
        #[arg(long, default_value_t = 4.0)]
        mu: f64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve one loss level and write its spectrum.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        delta: f64,
    },
    /// Run the loss sweep and write the convergence report.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the energy blow-up probe.
    Blowup {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fit log error against log delta from a CSV.
    RateFit {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value = "spectral_error")]
        column: String,
        #[arg(long, default_value_t = 0.4)]
        min_slope: f64,
        #[arg(long, default_value_t = 0.65)]
        max_slope: f64,
    },
}

fn verdict(pass: bool) -> i32 {
    if pass {
        0
    } else {
        1
    }
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::LensParams(l) => {
            let lens = l.radii()?;
            println!("r1 = {}", lens.r1);
            println!("r2 = {}", lens.r2);
            println!("r3 = {}", lens.r3);
            println!("beta = {}", lens.beta);
            Ok(0)
        }
        Command::Tensor { lens, r } => {
            let lens = lens.radii()?;
            let (rad, tan) = lens_tensor_closed_form(lens.alpha, lens.r2, r)?;
            let x = Point::new(r, 0.0, 0.0) / 3f64.sqrt() + Point::new(0.0, r, r) / 3f64.sqrt();
            let num = push_forward_tensor(&lens.fold().inverse(), &RadialTensor::identity(), &x)?;
            let closed = RadialTensor::new(Profile::constant(rad), Profile::constant(tan)).matrix_at(&x);
            let rel = (num - closed).norm() / closed.norm();
            println!("radial = {rad}");
            println!("tangential = {tan}");
            println!("push-forward mismatch = {rel:e}");
            Ok(verdict(rel <= 1e-12))
        }
        Command::CheckComplementary {
            lens,
            eps,
            mu,
            samples,
            seed,
        } => {
            let lens = lens.radii()?;
            let object = ObjectMedium::isotropic(eps, mu);
            let medium = assemble_lens_medium(&lens, 0.0, &object)?;
            let hat = assemble_hat_medium(&lens, &object)?;
            let opts = CheckOptions {
                samples,
                seed,
                ..CheckOptions::default()
            };
            let rep = check_reflecting_complementary(&medium, &lens.fold(), &lens.unfold(), &hat, &opts);
            println!("pass = {}", rep.pass);
            println!("max violation = {:e}", rep.max_violation);
            println!("failed condition = {:?}", rep.failed_condition);
            Ok(verdict(rep.pass))
        }
        Command::Solve { config, delta } => {
            let cfg = ExperimentConfig::load(&config)?;
            let inc = incident_coefficients(&cfg)?;
            let sol = solve_layered(&cfg.lens_medium(delta)?, cfg.k, inc.n_max, &solve_options(&cfg))?;
            let dir = cfg.resolved_output_dir();
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            let path = dir.join("spectrum.csv");
            sol.spectrum.write_csv(&path)?;
            println!("n_max = {}", inc.n_max);
            println!("max |s_n| = {:e}", sol.spectrum.max_abs());
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Sweep { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rep = super::sweep::run_delta_sweep(&cfg)?;
            let (csv, json) = emit_report(&rep, &cfg.resolved_output_dir())?;
            match &rep.fit {
                Some(f) => println!("slope = {} (intercept {}, residual {})", f.slope, f.intercept, f.residual),
                None => println!("slope = n/a"),
            }
            println!("pass = {}", rep.pass);
            println!("wrote {} and {}", csv.display(), json.display());
            Ok(verdict(rep.pass))
        }
        Command::Blowup { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rep = run_blowup_probe(&cfg)?;
            let (csv, json) = emit_blowup_report(&rep, &cfg.resolved_output_dir())?;
            println!("growth = {}", rep.growth);
            println!("diverging = {}", rep.diverging);
            println!("wrote {} and {}", csv.display(), json.display());
            Ok(verdict(rep.pass))
        }
        Command::RateFit {
            csv,
            column,
            min_slope,
            max_slope,
        } => {
            let (d, e) = read_rate_csv(&csv, &column)?;
            let f = fit_rate(&d, &e)?;
            println!("slope = {}", f.slope);
            println!("intercept = {}", f.intercept);
            println!("residual = {}", f.residual);
            Ok(verdict(f.slope >= min_slope && f.slope <= max_slope))
        }
    }
}

/// Runs the command line; returns the process exit code (0 pass, 1
/// acceptance failure or solver failure, 2 usage or input error).
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Domain(_) | Error::Io { .. } | Error::Csv { .. } | Error::Json(_) => 2,
                _ => 1,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(cli_main(["superlens", "lens-params", "--bogus"]), 2);
        assert_eq!(cli_main(["superlens"]), 2);
        assert_eq!(cli_main(["superlens", "lens-params", "--m", "2", "--r0", "1", "--alpha", "0.5"]), 2);
    }

    #[test]
    fn lens_params_and_tensor_succeed() {
        assert_eq!(cli_main(["superlens", "lens-params", "--m", "2", "--r0", "1", "--alpha", "2"]), 0);
        assert_eq!(
            cli_main(["superlens", "tensor", "--m", "2", "--r0", "1", "--alpha", "3", "--r", "1.8"]),
            0
        );
    }

    #[test]
    fn complementarity_verdicts() {
        let base = ["superlens", "check-complementary", "--m", "2", "--r0", "1", "--alpha", "2"];
        assert_eq!(cli_main(base), 0);
        let detuned: Vec<&str> = base.iter().copied().chain(["--r2-factor", "1.05"]).collect();
        assert_eq!(cli_main(detuned), 1);
    }
}
