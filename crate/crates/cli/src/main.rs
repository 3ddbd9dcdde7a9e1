use std::io::Write;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logpoisson::deform::Schedule;
use logpoisson_cli::job::{parse_coefficient, parse_subset, Rat};
use logpoisson_cli::{run_path, Command, Format, Overrides, Rendered, Settings, EXIT_VALIDATION};

#[derive(Parser)]
#[command(name = "logpoisson", version, about = "Exact Poisson deformations of log-canonical structures")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Smoothable weights, smoothing diagram, W1/W2 and datum predicates.
    Analyze(Common),
    /// Build the deformation order by order and check Jacobi.
    Deform(Common),
    /// T-Pfaffian of the deformation.
    Pfaffian {
        #[command(flatten)]
        common: Common,
        /// Use the log-canonical part instead of the deformation.
        #[arg(long)]
        base: bool,
    },
    /// Check the CGL-extension conditions on the deformation.
    CheckCgl(Common),
    /// Write the smoothing diagram of the selected weights as DOT.
    ExportDot(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Ascending,
    Descending,
    Parallel,
}

#[derive(Args)]
struct Common {
    /// Job file (repeatable).
    #[arg(long = "input", short = 'i', required = true)]
    inputs: Vec<String>,
    /// Smoothable weights by border, e.g. `1:4,2:3`.
    #[arg(long)]
    subset: Option<String>,
    /// Coefficient `name=p/q`, name `j:k` or `j` (repeatable).
    #[arg(long = "c")]
    coefficients: Vec<String>,
    #[arg(long)]
    level_cap: Option<usize>,
    /// Entry bound for the brute-force smoothable-weight oracle.
    #[arg(long)]
    oracle_box: Option<u32>,
    /// Write output here instead of stdout.
    #[arg(long, short = 'o')]
    output: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Order of the per-weight solves; output does not depend on it.
    #[arg(long, value_enum, default_value = "ascending")]
    schedule: ScheduleArg,
    /// Worker threads for multiple inputs.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl Common {
    fn overrides(&self) -> Result<Overrides, String> {
        let subset = self.subset.as_deref().map(parse_subset).transpose().map_err(|e| e.to_string())?;
        let coefficients: Vec<(String, Rat)> = self
            .coefficients
            .iter()
            .map(|c| parse_coefficient(c))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        Ok(Overrides { subset, coefficients, level_cap: self.level_cap, oracle_box: self.oracle_box })
    }
}

type Outcome = (Option<Rendered>, Option<String>, i32);

fn run_all(command: Command, common: &Common, overrides: &Overrides, settings: &Settings) -> Vec<Outcome> {
    let slots: Vec<Mutex<Option<Outcome>>> = common.inputs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = common.jobs.clamp(1, common.inputs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = common.inputs.get(i) else { break };
                *slots[i].lock().unwrap() = Some(run_path(command, path, overrides, settings));
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().unwrap().expect("every input ran")).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common, base) = match &cli.command {
        Cmd::Analyze(c) => (Command::Analyze, c, false),
        Cmd::Deform(c) => (Command::Deform, c, false),
        Cmd::Pfaffian { common, base } => (Command::Pfaffian, common, *base),
        Cmd::CheckCgl(c) => (Command::CheckCgl, c, false),
        Cmd::ExportDot(c) => (Command::ExportDot, c, false),
    };
    let overrides = match common.overrides() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
    };
    let settings = Settings {
        format: match common.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        },
        schedule: match common.schedule {
            ScheduleArg::Ascending => Schedule::Ascending,
            ScheduleArg::Descending => Schedule::Descending,
            ScheduleArg::Parallel => Schedule::Parallel,
        },
        pfaffian_of_base: base,
    };

    let outcomes = run_all(command, common, &overrides, &settings);
    let mut body = String::new();
    let mut code = 0;
    for (rendered, message, status) in &outcomes {
        if let Some(r) = rendered {
            body.push_str(&r.body);
        }
        if let Some(m) = message {
            eprintln!("error: {m}");
        }
        code = code.max(*status);
    }
    let written = match &common.output {
        Some(path) => std::fs::write(path, &body).map_err(|e| format!("{path}: {e}")),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        code = code.max(EXIT_VALIDATION);
    }
    ExitCode::from(code as u8)
}
