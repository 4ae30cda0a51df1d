use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use spandisc::harness::{run_experiment, ExperimentConfig, Format, Mode, PSpec};
use spandisc::oracles::AdversaryKind;
use spandisc::Error;

/// Run batches of seeded spanning-tree discrepancy experiments.
#[derive(Parser, Debug)]
#[command(name = "spandisc", version)]
struct Args {
    /// leaves | two-phase | boost | main1 | perturb | sharpness | oracle-check
    #[arg(long)]
    mode: Mode,
    /// Vertex count (largest size for oracle-check).
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability.
    #[arg(long, group = "pspec")]
    p: Option<f64>,
    /// Edge probability C/n.
    #[arg(long = "c-over-n", group = "pspec")]
    c_over_n: Option<f64>,
    /// Edge probability f/n^2.
    #[arg(long = "f-over-n2", group = "pspec")]
    f_over_n2: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// uniformRandom | balancedLocal | cutColoring | adaptiveRecolor
    #[arg(long)]
    adversary: Option<AdversaryKind>,
    /// Rounds for the adaptive adversary.
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Base seed; trial i uses seed + i.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    /// Edge list to use instead of sampling.
    #[arg(long = "graph-in")]
    graph_in: Option<PathBuf>,
    /// Coloured edge list to use instead of the adversary.
    #[arg(long = "coloring-in")]
    coloring_in: Option<PathBuf>,
    /// Leaf-fraction target for leaf increasing.
    #[arg(long)]
    target: Option<f64>,
    /// Record per-trial wall-clock time in runtimeMs.
    #[arg(long)]
    timing: bool,
    /// Write the first trial's leaf-increase trace (leaves mode).
    #[arg(long = "trace-out")]
    trace_out: Option<PathBuf>,
}

impl Args {
    fn into_config(self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(self.mode);
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(p) = self.p {
            cfg.p = PSpec::P(p);
        } else if let Some(c) = self.c_over_n {
            cfg.p = PSpec::COverN(c);
        } else if let Some(f) = self.f_over_n2 {
            cfg.p = PSpec::FOverN2(f);
        }
        macro_rules! set {
            ($($field:ident => $dst:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$dst = v; })*
            };
        }
        set!(alpha => alpha, delta => delta, adversary => adversary, rounds => rounds,
             trials => trials, seed => base_seed, threads => threads, format => format, target => target);
        cfg.timing = self.timing;
        cfg.graph_in = self.graph_in;
        cfg.coloring_in = self.coloring_in;
        cfg.trace_out = self.trace_out;
        cfg
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = args.out.clone();
    let cfg = args.into_config();
    let result = run_experiment(&cfg).and_then(|table| {
        let text = table.render()?;
        match &out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(table.summary)
    });
    match result {
        Ok(summary) => {
            eprintln!(
                "{} trials, success fraction {:.3}",
                summary.rows, summary.success_fraction
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("spandisc: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
