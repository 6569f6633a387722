use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use oval_optics::figures::seed_figures;
use oval_optics::{load_scene, run, AppError, RunReport, Task};

#[derive(Parser)]
#[command(
    name = "oval-optics",
    version,
    about = "Refracting profiles from Cartesian ovals: scenes, figures and validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scene and write its artifacts.
    Run {
        /// Scene file (JSON). Optional with --seed-figures.
        scene: Option<PathBuf>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Run only this task.
        #[arg(long, value_enum)]
        only: Option<Task>,
        /// Write the bundled figure scenes into the output directory and run each.
        #[arg(long)]
        seed_figures: bool,
    },
    /// Run a scene without writing artifacts and print the validation summary.
    Validate { scene: PathBuf },
}

fn report(name: &str, r: &RunReport) -> bool {
    for p in &r.artifacts {
        println!("wrote {}", p.display());
    }
    match &r.summary {
        Some(s) => {
            print!("{}", s.to_table());
            s.passed()
        }
        None => {
            println!("{name}: done");
            true
        }
    }
}

fn main_inner(cli: Cli) -> Result<bool, AppError> {
    match cli.command {
        Command::Run {
            scene,
            out,
            only,
            seed_figures: seed,
        } => {
            let mut ok = true;
            if seed {
                for (name, r) in seed_figures(&out)? {
                    ok &= report(&name, &r);
                }
            }
            match scene {
                Some(path) => {
                    let s = load_scene(&path)?;
                    let r = run(&s, Some(&out), only)?;
                    ok &= report(&s.name, &r);
                }
                None if !seed => {
                    return Err(AppError::Schema(vec![
                        "run: a scene file is required unless --seed-figures is given".into(),
                    ]))
                }
                None => {}
            }
            Ok(ok)
        }
        Command::Validate { scene } => {
            let s = load_scene(&scene)?;
            let mut s = s;
            s.tasks.insert(Task::Validate);
            let r = run(&s, None, None)?;
            Ok(report(&s.name, &r))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: validation threshold exceeded");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
