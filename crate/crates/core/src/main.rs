use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gridob::report::{cmd_cd, cmd_cdp, cmd_signs, cmd_witness, document, ReportError, RingChoice, RunConfig, Section};
use gridob::signs::write_sign_file;

#[derive(Parser)]
#[command(name = "gridob", version, about = "Enumerate and verify grid-diagram domain complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Domain complex: ∂² and homology over F2 and Z.
    Cd(Opts),
    /// Partition complex: ∂² sweeps, witnesses and rank certification.
    Cdp(Opts),
    /// Sign assignments: solve, normalize, verify.
    Signs(Opts),
    /// Domain families, U and the dual cocycles.
    Witness(Opts),
    /// Every suite in one report.
    Report(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    F2,
    Z,
    Both,
}

#[derive(Args, Clone)]
struct Opts {
    /// Grid size.
    #[arg(long)]
    n: usize,
    /// O positions as a bracket, e.g. [123].
    #[arg(long)]
    o: Option<String>,
    /// X positions as a bracket.
    #[arg(long)]
    x: Option<String>,
    /// Seed for a random marking placement.
    #[arg(long, value_name = "SEED")]
    random_markings: Option<u64>,
    /// Grid file with n=, O= and X= lines.
    #[arg(long)]
    grid_file: Option<String>,
    /// Grading cap.
    #[arg(long = "K", default_value_t = 4)]
    k: usize,
    /// Cap on each N_j.
    #[arg(long = "Nmax", default_value_t = 4)]
    n_max: usize,
    #[arg(long, value_enum, default_value = "both")]
    ring: RingArg,
    /// Bit string of the parameters s_j, e.g. 101.
    #[arg(long)]
    s_params: Option<String>,
    /// Load rectangle signs from this file instead of solving.
    #[arg(long)]
    sign_file: Option<String>,
    /// Write the solved sign assignment here (signs command).
    #[arg(long)]
    save_signs: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Repeat the CD suite under a second marking placement.
    #[arg(long)]
    audit_markings: bool,
}

impl Opts {
    fn config(&self) -> RunConfig {
        RunConfig {
            n: self.n,
            o: self.o.clone(),
            x: self.x.clone(),
            random_markings: self.random_markings,
            grid_file: self.grid_file.clone(),
            k: self.k,
            n_max: self.n_max,
            ring: match self.ring {
                RingArg::F2 => RingChoice::F2,
                RingArg::Z => RingChoice::Z,
                RingArg::Both => RingChoice::Both,
            },
            s_params: self.s_params.clone(),
            sign_file: self.sign_file.clone(),
            audit_markings: self.audit_markings,
        }
    }
}

fn run(name: &str, opts: &Opts) -> Result<bool, ReportError> {
    if let Some(t) = opts.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| ReportError::Usage(e.to_string()))?;
    }
    let config = opts.config();
    let mut sections: Vec<(&str, Section)> = Vec::new();
    let want = |s: &str| name == s || name == "report";
    if want("cd") {
        sections.push(("cd", cmd_cd(&config)?));
    }
    if want("signs") {
        let (section, signs) = cmd_signs(&config)?;
        if let Some(path) = &opts.save_signs {
            std::fs::write(path, write_sign_file(&signs)).map_err(|e| ReportError::Usage(format!("{path}: {e}")))?;
        }
        sections.push(("signs", section));
    }
    if want("cdp") {
        sections.push(("cdp", cmd_cdp(&config)?));
    }
    if want("witness") {
        sections.push(("witness", cmd_witness(&config)?));
    }
    let doc = document(name, &config, &sections);
    let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    match &opts.output {
        Some(path) => std::fs::write(path, text).map_err(|e| ReportError::Usage(format!("{path}: {e}")))?,
        None => print!("{text}"),
    }
    Ok(doc["pass"].as_bool().unwrap_or(false))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts) = match &cli.command {
        Command::Cd(o) => ("cd", o),
        Command::Cdp(o) => ("cdp", o),
        Command::Signs(o) => ("signs", o),
        Command::Witness(o) => ("witness", o),
        Command::Report(o) => ("report", o),
    };
    match run(name, opts) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gridob: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
