use std::path::PathBuf;
use std::process::ExitCode;

use adr_core::guidance::GuidanceLaw;
use adr_core::tour::Objective;
use adr_mission::workflow::{self, method_name, objective_name, BUDGET};
use adr_mission::{load_catalog, MissionConfig, MissionError};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "adr-mission",
    version,
    about = "Active debris removal tour planning and guidance validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize the tour and write the reference trajectory
    Plan {
        #[command(flatten)]
        common: Common,
        /// Two-line element set catalog holding the configured debris
        #[arg(long)]
        catalog: PathBuf,
    },
    /// Fly the planned tour with a guidance law (all four modes by default)
    Fly {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        law: Option<LawArg>,
    },
    /// Tune guidance weights with particle swarm optimization
    Tune {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        law: Option<LawArg>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Summarize a run directory as Markdown
    Report {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    objective: Option<ObjectiveArg>,
    /// Output root; overrides the configured directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Fuel,
    Time,
}

#[derive(Clone, Copy, ValueEnum)]
enum LawArg {
    Ruggiero,
    Dvlaw,
    Qlaw,
    Openloop,
}

impl From<LawArg> for GuidanceLaw {
    fn from(l: LawArg) -> Self {
        match l {
            LawArg::Ruggiero => GuidanceLaw::Ruggiero,
            LawArg::Dvlaw => GuidanceLaw::Dvlaw,
            LawArg::Qlaw => GuidanceLaw::Qlaw,
            LawArg::Openloop => GuidanceLaw::OpenLoop,
        }
    }
}

struct Context {
    cfg: MissionConfig,
    objective: Objective,
    out: PathBuf,
}

fn context(c: &Common) -> Result<Context, MissionError> {
    let cfg = MissionConfig::load(&c.config)?;
    let objective = match c.objective {
        Some(ObjectiveArg::Fuel) => Objective::Fuel,
        Some(ObjectiveArg::Time) => Objective::Time,
        None => cfg.tour.objective,
    };
    let out = c.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    Ok(Context {
        cfg,
        objective,
        out,
    })
}

fn run(cli: Cli) -> Result<(), MissionError> {
    match cli.command {
        Command::Plan { common, catalog } => {
            let ctx = context(&common)?;
            let catalog = load_catalog(&catalog, &ctx.cfg.environment())?;
            let file = workflow::plan(&ctx.cfg, &catalog, Some(ctx.objective), &ctx.out)?;
            for r in workflow::leg_rows(&file.solution) {
                println!("{:<50} {:>10.2} m/s {:>10.2} d", r.leg, r.dv_m_s, r.tof_d);
            }
            println!(
                "wrote {}",
                workflow::run_dir(&ctx.out, ctx.objective).display()
            );
        }
        Command::Fly { common, law } => {
            let ctx = context(&common)?;
            let laws: Vec<GuidanceLaw> = match law.map(GuidanceLaw::from).or(ctx.cfg.guidance.law) {
                Some(l) => vec![l],
                None => vec![
                    GuidanceLaw::OpenLoop,
                    GuidanceLaw::Ruggiero,
                    GuidanceLaw::Dvlaw,
                    GuidanceLaw::Qlaw,
                ],
            };
            for f in workflow::fly(&ctx.cfg, ctx.objective, &laws, &ctx.out)? {
                let e = f.total_errors;
                let inside = f
                    .movement_legs()
                    .filter(|l| l.errors.within(&BUDGET))
                    .count();
                println!(
                    "{:<24} TOF {:8.1} d  fuel {:7.2} kg  Δa {:8.3} km  Δi {:6.3}°  ΔΩ {:6.3}°  legs in budget {}/{}",
                    method_name(f.law),
                    f.tof_d,
                    f.fuel_kg,
                    e.da_km,
                    e.di_deg,
                    e.draan_deg,
                    inside,
                    f.movement_legs().count()
                );
            }
        }
        Command::Tune { common, law, seed } => {
            let ctx = context(&common)?;
            let law = law
                .map(GuidanceLaw::from)
                .or(ctx.cfg.guidance.law)
                .ok_or_else(|| MissionError::Config("tune needs --law or guidance.law".into()))?;
            let w = workflow::tune(&ctx.cfg, ctx.objective, law, seed, &ctx.out)?;
            println!(
                "{} {}: down {:?} fitness {:.4} (unit {:.4}); up {:?} fitness {:.4} (unit {:.4})",
                objective_name(ctx.objective),
                law.name(),
                w.down,
                w.down_fitness,
                w.unit_down_fitness,
                w.up,
                w.up_fitness,
                w.unit_up_fitness
            );
        }
        Command::Report { common } => {
            let ctx = context(&common)?;
            print!("{}", workflow::report(&ctx.out, ctx.objective)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
