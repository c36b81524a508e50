//! `dmm`: validate and run network spec files, run the built-in demos and
//! parse port names.
//!
//! Exit codes: 0 success, 1 invalid input (unreadable or malformed spec,
//! failed validation, bad flags, parse failure), 2 runtime failure (overflow
//! under the `halt` policy or another error raised while stepping).

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dmm_core::engine::{EngineError, NetworkSpec, NetworkState, Registry, SelfMode, WatchKey};
use dmm_core::experiments::{
    build_dfa, build_gru, build_oscillation, build_wave, gru_reference, random_dfa, row_support, run_dfa,
    run_gru_dmm, simulate_dfa, wave_columns, GruParams, GRU_LATENCY,
};
use dmm_core::index::{parse_index, PortKind};
use dmm_core::neurons::builtin_registry;
use dmm_core::spec_file::SpecFile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "dmm", version, about = "Pure dataflow matrix machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelfModeArg {
    Literal,
    Optimized,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Oscillation,
    Wave,
    Dfa,
    Gru,
}

#[derive(Subcommand)]
enum Command {
    /// Check a spec file without running it.
    Validate { path: PathBuf },
    /// Run a spec file and write one JSON record per up movement.
    Run {
        path: PathBuf,
        /// Number of up movements (defaults to the spec's `steps`).
        #[arg(long)]
        steps: Option<u64>,
        /// Comma-separated watch keys: `Y0[i][j]`, `cell:<row>,<col>`, `out:<col>`.
        #[arg(long, default_value = "")]
        watch: String,
        /// Trace file (JSONL); stdout if omitted.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "literal")]
        self_mode: SelfModeArg,
    },
    /// Build and run a built-in demo network.
    Demo {
        #[arg(value_enum)]
        name: Demo,
        #[arg(long)]
        steps: Option<u64>,
        /// Wave length.
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Wave columns j_1..j_n (defaults to 2..=n+1).
        #[arg(long, value_delimiter = ',')]
        columns: Option<Vec<usize>>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the demo's spec file here.
        #[arg(long)]
        emit_spec: Option<PathBuf>,
    },
    /// Parse a port or neuron name and print its parts.
    ParseIndex { name: String },
}

enum Failure {
    Input(String),
    Runtime(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Runtime(m) => m,
        }
    }
}

fn runtime(e: EngineError) -> Failure {
    match e {
        EngineError::Validation(_) | EngineError::BadWatch(_) => Failure::Input(e.to_string()),
        _ => Failure::Runtime(e.to_string()),
    }
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn load_spec(path: &Path, registry: &Registry) -> Result<(NetworkSpec, Option<u64>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file = SpecFile::from_json(&text).map_err(input)?;
    let spec = file.to_spec(registry).map_err(input)?;
    Ok((spec, file.steps))
}

fn write_spec(path: &Path, spec: &NetworkSpec, steps: u64) -> Result<(), Failure> {
    let text = SpecFile::from_spec(spec, Some(steps)).to_json_pretty();
    fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn cmd_validate(path: &Path) -> Result<(), Failure> {
    let registry = builtin_registry();
    let (spec, _) = load_spec(path, &registry)?;
    NetworkState::build(&spec, &registry).map_err(input)?;
    println!("ok: {} neurons, {}", spec.neurons.len(), spec.shape());
    Ok(())
}

fn cmd_run(
    path: &Path,
    steps: Option<u64>,
    watch: &str,
    trace: Option<&Path>,
    self_mode: SelfModeArg,
) -> Result<(), Failure> {
    let registry = builtin_registry();
    let (spec, file_steps) = load_spec(path, &registry)?;
    let steps = steps
        .or(file_steps)
        .ok_or_else(|| Failure::Input("no step count: pass --steps or set `steps` in the spec".into()))?;
    let watch = WatchKey::parse_list(watch).map_err(Failure::Input)?;
    let mode = match self_mode {
        SelfModeArg::Literal => SelfMode::Literal,
        SelfModeArg::Optimized => SelfMode::Optimized,
    };
    let mut net = NetworkState::build(&spec, &registry).map_err(input)?.with_self_mode(mode);
    net.check_watch(&watch).map_err(input)?;

    let sink: Box<dyn Write> = match trace {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    let io_err = |e: io::Error| Failure::Runtime(format!("writing trace: {e}"));
    for _ in 0..steps {
        if let Err(e) = net.step() {
            out.flush().map_err(io_err)?;
            return Err(runtime(e));
        }
        let record = net.sample(&watch).map_err(runtime)?;
        serde_json::to_writer(&mut out, &record).map_err(|e| Failure::Runtime(e.to_string()))?;
        out.write_all(b"\n").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

fn demo_oscillation(steps: u64, emit: Option<&Path>) -> Result<(), Failure> {
    let spec = build_oscillation();
    if let Some(p) = emit {
        write_spec(p, &spec, steps)?;
    }
    let mut net = NetworkState::build(&spec, &builtin_registry()).map_err(runtime)?;
    let mut values = Vec::new();
    for _ in 0..steps {
        net.step().map_err(runtime)?;
        values.push(net.network_matrix().value("1", "1"));
    }
    println!("Y0[1][1] for t=1..{steps}: {values:?}");
    Ok(())
}

fn demo_wave(n: usize, columns: Option<Vec<usize>>, steps: Option<u64>, emit: Option<&Path>) -> Result<(), Failure> {
    let columns = columns.unwrap_or_else(|| wave_columns(n));
    let steps = steps.unwrap_or(2 * columns.len() as u64);
    let spec = build_wave(&columns).map_err(input)?;
    if let Some(p) = emit {
        write_spec(p, &spec, steps)?;
    }
    let mut net = NetworkState::build(&spec, &builtin_registry()).map_err(runtime)?;
    println!("columns: {columns:?}");
    for t in 0..=steps {
        if t > 0 {
            net.step().map_err(runtime)?;
        }
        let w = net.network_matrix().as_dense().expect("wave networks are dense");
        let row: Vec<String> = row_support(w, 1).iter().map(|(j, v)| format!("{j}:{v}")).collect();
        println!("t={t} row 1 support: {}", row.join(" "));
    }
    Ok(())
}

fn demo_dfa(seed: u64, steps: Option<u64>, emit: Option<&Path>) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dfa = random_dfa(&mut rng, 4, 3);
    let len = steps.unwrap_or(50) as usize;
    let symbols: Vec<usize> = (0..len).map(|_| rng.gen_range(0..dfa.num_symbols)).collect();
    let net = build_dfa(&dfa).map_err(input)?;
    if let Some(p) = emit {
        write_spec(p, &net.with_input(&symbols).map_err(input)?, len as u64 + 3)?;
    }
    let got = run_dfa(&net, &builtin_registry(), &symbols).map_err(|e| Failure::Runtime(e.to_string()))?;
    let want = simulate_dfa(&dfa, &symbols);
    println!(
        "dfa: {} states, {} symbols, start {}, transitions {:?}",
        dfa.num_states, dfa.num_symbols, dfa.start, dfa.transition
    );
    println!("input:  {symbols:?}");
    println!("states: {got:?}");
    println!("matches direct simulation: {}", got == want);
    if got == want {
        Ok(())
    } else {
        Err(Failure::Runtime("decoded states differ from direct simulation".into()))
    }
}

fn demo_gru(seed: u64, steps: Option<u64>, emit: Option<&Path>) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = GruParams::random(&mut rng);
    let len = steps.unwrap_or(100) as usize;
    let xs: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
    if let Some(p) = emit {
        write_spec(p, &build_gru(&params, &xs), GRU_LATENCY * len as u64 + 1)?;
    }
    let got = run_gru_dmm(&params, &xs, &builtin_registry()).map_err(runtime)?;
    let want = gru_reference(&params, &xs);
    let max_err = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("gru: {len} steps, seed {seed}");
    if let (Some(a), Some(b)) = (got.last(), want.last()) {
        println!("final h: network {a}, reference {b}");
    }
    println!("max |network - reference| = {max_err:e}");
    Ok(())
}

fn cmd_parse_index(name: &str) -> Result<(), Failure> {
    let n = parse_index(name).map_err(input)?;
    let kind = match n.kind {
        PortKind::Neuron => "kind=neuron".to_string(),
        PortKind::Input(k) => format!("kind=input k={k}"),
        PortKind::Output(k) => format!("kind=output k={k}"),
    };
    println!("type={} {kind} name={}", n.type_name, n.simple_name);
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Run {
            path,
            steps,
            watch,
            trace,
            self_mode,
        } => cmd_run(&path, steps, &watch, trace.as_deref(), self_mode),
        Command::Demo {
            name,
            steps,
            n,
            columns,
            seed,
            emit_spec,
        } => {
            let emit = emit_spec.as_deref();
            match name {
                Demo::Oscillation => demo_oscillation(steps.unwrap_or(6), emit),
                Demo::Wave => demo_wave(n, columns, steps, emit),
                Demo::Dfa => demo_dfa(seed, steps, emit),
                Demo::Gru => demo_gru(seed, steps, emit),
            }
        }
        Command::ParseIndex { name } => cmd_parse_index(&name),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
