use clap::Parser;
use coorbit::cli::{run, Status};
use coorbit::config::{Command, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Voices, reproducing kernels and coorbit norms on finite group grids.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Args {
    /// Command to run; overrides the `command` key of the config.
    command: Option<Command>,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory [default: config `out`, else `out`].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed of the randomized corpora; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(args: &Args) -> coorbit::Result<RunConfig> {
    let mut c = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| coorbit::Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let mut v: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| coorbit::Error::Config(format!("config: {e}")))?;
            if let (Some(cmd), Some(obj)) = (args.command, v.as_object_mut()) {
                obj.insert("command".into(), serde_json::to_value(cmd)?);
            }
            RunConfig::from_json(&v.to_string())?
        }
        None => match args.command {
            Some(cmd) => RunConfig::new(cmd),
            None => return Err(coorbit::Error::Config("give a command or --config".into())),
        },
    };
    if let Some(seed) = args.seed {
        c.seed = seed;
    }
    if let Some(out) = &args.out {
        c.out = Some(out.clone());
    }
    c.validate()?;
    Ok(c)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = load(&args).and_then(|c| {
        let out = c.out.clone().unwrap_or_else(|| PathBuf::from("out"));
        run(&c, &out)
    });
    match result {
        Ok(o) => {
            for l in &o.lines {
                println!("{l}");
            }
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            if o.status == Status::AcceptanceFailure {
                eprintln!("acceptance failed");
            }
            ExitCode::from(o.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Status::Invalid.code())
        }
    }
}
