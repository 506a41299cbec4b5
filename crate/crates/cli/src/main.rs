use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qlnet::classical::{cycle_structure, find_cycle, step_classical, SpinConfig};
use qlnet::experiments::{run_ensemble, EnsembleConfig, Mode};
use qlnet::export;
use qlnet::netmodel::{parse_network, random_k1_network, write_network, FunctionWeights, Network};
use qlnet::pauliframe::{damage_series, detect_solitary, frame_period, PauliFrame};
use qlnet::statevec::{apply_step, build_propagator, spectrum, SpectrumOptions, StateVector};

#[derive(Parser)]
#[command(
    name = "qlnet",
    version,
    about = "Reversible Boolean and quantum logic networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum HadamardArg {
    None,
    All,
    /// Keep the flags stored in the network file.
    Keep,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImageFormat {
    Svg,
    Pgm,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random K=1 network.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `uniform`, a kind (`copy`), or weights `const-i,const-x,copy,not`.
        #[arg(long, default_value = "uniform")]
        kinds: String,
        #[arg(long, value_enum, default_value = "none")]
        hadamard: HadamardArg,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Advance a basis state and print every step.
    Step {
        #[arg(long)]
        net: PathBuf,
        /// `2n` characters of `0/1` (or `-/+`), target register first.
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Cycle length through a state, or the full cycle structure.
    Cycle {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        state: Option<String>,
        #[arg(long, default_value_t = 1 << 20)]
        max_steps: usize,
    },
    /// Eigenvalues of the one-step propagator.
    Spectrum {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 4096)]
        lmax: u64,
        /// Writes `<out>.csv` and `<out>.svg`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Propagate a Pauli-frame perturbation.
    Perturb {
        #[arg(long)]
        net: PathBuf,
        /// Node carrying the initial X.
        #[arg(long, default_value_t = 0)]
        node: usize,
        /// Explicit initial frame such as `XIII|IZII`; overrides `--node`.
        #[arg(long)]
        frame: Option<String>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, value_enum, default_value = "keep")]
        hadamard: HadamardArg,
        /// Writes `<out>.csv`, `<out>.pattern.csv`, `<out>.svg`, `<out>.pgm`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Ensemble-averaged Hamming distance.
    Ensemble {
        /// JSON config: sizes, realizations, steps, seed, mode, functionWeights.
        #[arg(long)]
        config: PathBuf,
        /// Also run the other mode with the same seeds.
        #[arg(long)]
        both: bool,
        /// Writes `<out>.csv` and `<out>.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert a pattern or damage CSV to an image.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: ImageFormat,
        /// Pattern width for damage CSVs.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<qlnet::Error> for Failure {
    fn from(e: qlnet::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn load_network(path: &Path) -> Result<Network, Failure> {
    parse_network(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn apply_hadamard(net: Network, h: HadamardArg) -> Network {
    match h {
        HadamardArg::None => net.with_hadamard(|_| false),
        HadamardArg::All => net.with_hadamard(|_| true),
        HadamardArg::Keep => net,
    }
}

/// Invocation line shared by every output header.
fn invocation(args: &[String]) -> String {
    std::iter::once("qlnet")
        .chain(args.iter().map(String::as_str))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: Cli, args: &[String]) -> Outcome {
    let inv = invocation(args);
    match cli.command {
        Command::Gen {
            n,
            seed,
            kinds,
            hadamard,
            out,
        } => {
            let weights: FunctionWeights = kinds
                .parse()
                .map_err(|e: qlnet::Error| Failure::Usage(e.to_string()))?;
            let net = random_k1_network(
                n as usize,
                seed,
                &weights,
                matches!(hadamard, HadamardArg::All),
            )?;
            let text = write_network(&net, &[inv, format!("seed {seed}")]);
            match out {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Step { net, state, steps } => {
            let net = load_network(&net)?;
            let cfg = SpinConfig::parse(net.n(), &state)?;
            if net.has_hadamard() {
                let mut psi = StateVector::basis(net.n(), cfg.to_label());
                for t in 1..=steps {
                    psi = apply_step(&net, &psi)?;
                    println!("t={t}");
                    for (label, a) in psi.amplitudes().iter().enumerate() {
                        if a.norm() > 1e-12 {
                            let bits = SpinConfig::from_label(net.n(), label).to_bit_string();
                            println!("  {bits} {:+.12} {:+.12}i", a.re, a.im);
                        }
                    }
                }
            } else {
                let mut cur = cfg;
                println!("t=0 {}", cur.to_bit_string());
                for t in 1..=steps {
                    cur = step_classical(&net, &cur)?;
                    println!("t={t} {}", cur.to_bit_string());
                }
            }
        }
        Command::Cycle {
            net,
            state,
            max_steps,
        } => {
            let net = load_network(&net)?;
            match state {
                Some(s) => {
                    let cfg = SpinConfig::parse(net.n(), &s)?;
                    let info = find_cycle(&net, &cfg, max_steps)?;
                    println!("transient {} period {}", info.transient, info.period);
                }
                None => {
                    let lengths = cycle_structure(&net)?;
                    let joined: Vec<String> = lengths.iter().map(usize::to_string).collect();
                    println!("cycles {}", joined.join(","));
                }
            }
        }
        Command::Spectrum {
            net,
            tol,
            lmax,
            out,
        } => {
            if tol.is_nan() || tol <= 0.0 || lmax == 0 {
                return Err(Failure::Usage("--tol and --lmax must be positive".into()));
            }
            let network = load_network(&net)?;
            let opts = SpectrumOptions {
                tol,
                lmax,
                ..SpectrumOptions::default()
            };
            let rep = spectrum(&build_propagator(&network)?, opts)?;
            let cycles = rep.cycle_lengths.as_ref().map_or("none".to_string(), |c| {
                c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            });
            let header = vec![
                inv,
                format!("cycle lengths {cycles}"),
                format!(
                    "clusters {} nondegenerate {} all roots of unity {} min phase gap {:.6e}",
                    rep.clusters.len(),
                    rep.is_nondegenerate(),
                    rep.all_roots_of_unity(),
                    rep.min_phase_gap()
                ),
            ];
            write(&with_ext(&out, "csv"), &export::spectrum_csv(&header, &rep))?;
            write(&with_ext(&out, "svg"), &export::spectrum_svg(&header, &rep))?;
            println!("{}", header[1]);
            println!("{}", header[2]);
        }
        Command::Perturb {
            net,
            node,
            frame,
            steps,
            hadamard,
            out,
        } => {
            let network = apply_hadamard(load_network(&net)?, hadamard);
            let initial = match frame {
                Some(f) => PauliFrame::parse(&f)?,
                None => PauliFrame::single_x(network.n(), node)?,
            };
            let series = damage_series(&network, &initial, steps)?;
            let period = frame_period(&network, &initial, 1 << 20)?;
            let header = vec![
                inv,
                format!("initial {initial}"),
                format!(
                    "max distance {} class {} period {}",
                    series.max_hamming(),
                    detect_solitary(&series),
                    period.map_or("none".into(), |p| p.to_string())
                ),
            ];
            let rows = export::frame_pattern(&series);
            write(
                &with_ext(&out, "csv"),
                &export::frame_series_csv(&header, &series),
            )?;
            write(
                &with_ext(&out, "pattern.csv"),
                &export::pattern_csv(&header, &rows),
            )?;
            write(&with_ext(&out, "svg"), &export::pattern_svg(&header, &rows))?;
            write(&with_ext(&out, "pgm"), &export::pattern_pgm(&header, &rows))?;
            println!("{}", header[2]);
        }
        Command::Ensemble { config, both, out } => {
            let cfg: EnsembleConfig = serde_json::from_str(&read(&config)?)
                .map_err(|e| Failure::Domain(format!("{}: {e}", config.display())))?;
            let mut configs = vec![cfg.clone()];
            if both {
                let other = match cfg.mode {
                    Mode::Classical => Mode::QuantumAllH,
                    Mode::QuantumAllH => Mode::Classical,
                };
                configs.push(cfg.with_mode(other));
            }
            let results = configs
                .iter()
                .map(run_ensemble)
                .collect::<Result<Vec<_>, _>>()?;
            let header = vec![
                inv,
                format!("seed {}", cfg.seed),
                "mean: per-step Hamming distance averaged over steps, then realizations".into(),
                "timeMax: largest distance of a run, averaged over realizations".into(),
            ];
            let refs: Vec<_> = results.iter().collect();
            write(
                &with_ext(&out, "csv"),
                &export::ensemble_csv(&header, &refs),
            )?;
            let meta = serde_json::json!({
                "invocation": header[0],
                "averaging": "time-mean then realization-mean",
                "results": results,
            });
            write(
                &with_ext(&out, "json"),
                &(serde_json::to_string_pretty(&meta).expect("serializable") + "\n"),
            )?;
            for r in &results {
                for s in &r.per_size {
                    println!(
                        "{} n={} mean={:.6} stderr={:.6}",
                        r.config.mode, s.n, s.mean, s.stderr
                    );
                }
            }
        }
        Command::Render {
            input,
            format,
            n,
            out,
        } => {
            let rows = export::read_pattern_csv(&read(&input)?, n)?;
            let header = vec![inv];
            let text = match format {
                ImageFormat::Svg => export::pattern_svg(&header, &rows),
                ImageFormat::Pgm => export::pattern_pgm(&header, &rows),
            };
            write(&out, &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(1)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
