use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kuniform::circuits::{
    assemble_hybrid, gen_approx_kuniform, gen_bell_bridge, gen_color_kuniform, gen_decay_circuit, gen_ghz,
    gen_surface_kuniform, Circuit, DecayFamily, GhzVariant,
};
use kuniform::codes::{build_code, Basis, CodeId};
use kuniform::noisesim::{compare_schemes, write_csv, Sweep, SweepRow};
use kuniform::search::SearchConfig;
use kuniform::stab::StabilizerTableau;
use kuniform::uniformity::{kappa_counts, verify, KappaRatio};

mod plot;

/// Environment variable setting the worker thread count.
const THREADS_VAR: &str = "KUNI_THREADS";

#[derive(Parser)]
#[command(
    name = "kuni",
    version,
    about = "Verify, generate, search and simulate k-uniform state preparation circuits"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Surface,
    Color,
    Approx,
    Ghz,
    Bell,
    Hybrid,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report the k-uniformity of a state.
    Verify {
        /// Measurement-free circuit applied to |0…0⟩.
        #[arg(long, conflicts_with = "code", required_unless_present = "code")]
        circuit: Option<PathBuf>,
        /// Encoded code state, e.g. five_qubit or surface:3.
        #[arg(long)]
        code: Option<String>,
        #[arg(long, default_value = "zero", requires = "code")]
        basis: String,
        /// Number of code blocks.
        #[arg(long, default_value_t = 1, requires = "code")]
        blocks: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        alpha: usize,
        #[arg(long)]
        json: bool,
        /// Exit with status 1 unless Δ = 0.
        #[arg(long)]
        expect_exact: bool,
    },
    /// Write a generated circuit in the text format.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        n: Option<usize>,
        /// GHZ variant: const or log.
        #[arg(long)]
        variant: Option<String>,
        /// Code for bell and hybrid circuits.
        #[arg(long)]
        code: Option<String>,
        /// Logical family of a hybrid circuit.
        #[arg(long, value_enum)]
        logical: Option<Family>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the layer search described by a config file.
    Search {
        #[arg(long)]
        config: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a noise sweep.
    Simulate {
        #[arg(long)]
        sweep: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Log-scale infidelity plot.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// κ against depth for a repeated time step.
    Decay {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Comma-separated depths.
        #[arg(long, value_delimiter = ',', required = true)]
        depths: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    /// A requested check did not hold.
    Check(String),
    Usage(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

type Cmdr = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| format!("{THREADS_VAR}={v:?} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cmd: Cmd) -> Cmdr {
    match cmd {
        Cmd::Verify {
            circuit,
            code,
            basis,
            blocks,
            k,
            alpha,
            json,
            expect_exact,
        } => cmd_verify(circuit, code, &basis, blocks, k, alpha, json, expect_exact),
        Cmd::Generate {
            family,
            k,
            n,
            variant,
            code,
            logical,
            output,
        } => {
            let c = generate(family, k, n, variant.as_deref(), code.as_deref(), logical)?;
            emit(output.as_deref(), c.serialize().as_bytes())
        }
        Cmd::Search { config, output } => cmd_search(&config, &output),
        Cmd::Simulate { sweep, output, plot } => cmd_simulate(&sweep, output.as_deref(), plot.as_deref()),
        Cmd::Decay {
            family,
            n,
            depths,
            k,
            output,
        } => cmd_decay(&family, n, &depths, k, output.as_deref()),
    }
}

fn read(p: &Path) -> Result<String, Failure> {
    fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Cmdr {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(bytes).map_err(usage),
    }
}

fn prepared(c: &Circuit) -> Result<StabilizerTableau, Failure> {
    let gates = c
        .cliffords()
        .map_err(|e| usage(format!("{e}; verify needs a measurement-free circuit")))?;
    let mut t = StabilizerTableau::new(c.n_qubits());
    t.apply_all(&gates).map_err(usage)?;
    Ok(t)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    circuit: Option<PathBuf>,
    code: Option<String>,
    basis: &str,
    blocks: usize,
    k: usize,
    alpha: usize,
    json: bool,
    expect_exact: bool,
) -> Cmdr {
    let t = match (circuit, code) {
        (Some(p), None) => prepared(&Circuit::parse(&read(&p)?).map_err(usage)?)?,
        (None, Some(id)) => {
            let code = build_code(id.parse::<CodeId>().map_err(usage)?).map_err(usage)?;
            let basis: Basis = basis.parse().map_err(usage)?;
            code.encoded_state(basis, blocks).map_err(usage)?
        }
        _ => return Err(usage("give exactly one of --circuit and --code")),
    };
    let report = verify(&t, k, alpha).map_err(usage)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(usage)?);
    } else {
        println!("qubits   {}", t.n());
        println!("k        {}", report.k);
        println!("alpha    {}", report.alpha);
        println!("min I_A  {}", report.min_ia);
        println!("r        {}", report.r);
        println!("delta    {}", report.delta);
        println!("witness  {:?}", report.witness);
        println!("scanned  {}", report.subsets_scanned);
    }
    if expect_exact && !report.is_exact() {
        return Err(Failure::Check(format!("delta = {} at k = {k}", report.delta)));
    }
    Ok(())
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("--{flag} is required for this family")))
}

fn generate(
    family: Family,
    k: usize,
    n: Option<usize>,
    variant: Option<&str>,
    code: Option<&str>,
    logical: Option<Family>,
) -> Result<Circuit, Failure> {
    let code_spec = |id: Option<&str>| -> Result<_, Failure> {
        build_code(need(id, "code")?.parse::<CodeId>().map_err(usage)?).map_err(usage)
    };
    match family {
        Family::Bell => Ok(gen_bell_bridge(&code_spec(code)?).map_err(usage)?.circuit),
        Family::Hybrid => {
            let c = code_spec(code)?;
            let inner = need(logical, "logical")?;
            if matches!(inner, Family::Bell | Family::Hybrid) {
                return Err(usage("--logical must be surface, color, approx or ghz"));
            }
            let prep = generate(inner, k, n, variant, None, None)?;
            Ok(assemble_hybrid(&c, &prep).map_err(usage)?.circuit)
        }
        _ => {
            let n = need(n, "n")?;
            let c = match family {
                Family::Surface => gen_surface_kuniform(k, n),
                Family::Color => gen_color_kuniform(k, n),
                Family::Approx => gen_approx_kuniform(k, n),
                _ => {
                    let v: GhzVariant = variant.unwrap_or("log").parse().map_err(usage)?;
                    gen_ghz(n, v)
                }
            };
            c.map_err(usage)
        }
    }
}

fn cmd_search(config: &Path, out: &Path) -> Cmdr {
    let cfg = SearchConfig::parse(&read(config)?).map_err(usage)?;
    let search = cfg.validate().map_err(usage)?;
    let result = search.run().map_err(usage)?;
    result.write_dir(out).map_err(usage)?;
    for r in &result.per_n {
        let visited: u64 = r.passes.iter().map(|p| p.1).sum();
        if r.found() {
            println!(
                "N={:<3} depth {}  {} hits  ({visited} visited)",
                r.n,
                r.depth,
                r.hits.len()
            );
        } else {
            println!("N={:<3} not found up to depth {}  ({visited} visited)", r.n, r.depth);
        }
    }
    Ok(())
}

fn cmd_simulate(sweep: &Path, out: Option<&Path>, plot_path: Option<&Path>) -> Cmdr {
    let sweep = Sweep::parse(&read(sweep)?).map_err(usage)?;
    let rows: Vec<SweepRow> = compare_schemes(&sweep).map_err(usage)?;
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv).map_err(usage)?;
    emit(out, &csv)?;
    if let Some(p) = plot_path {
        plot::infidelity_svg(&rows, p).map_err(usage)?;
    }
    Ok(())
}

fn cmd_decay(family: &str, n: usize, depths: &[usize], k: usize, out: Option<&Path>) -> Cmdr {
    let fam: DecayFamily = family.parse().map_err(usage)?;
    let mut s = String::from("family,N,k,depth,exact,approximate,kappa\n");
    for &d in depths {
        let t = prepared(&gen_decay_circuit(fam, n, d).map_err(usage)?)?;
        let c = kappa_counts(&t, k).map_err(usage)?;
        let kappa = match c.ratio() {
            KappaRatio::Ratio(v) => v.to_string(),
            KappaRatio::NoUniformSubsets => "inf".into(),
        };
        s += &format!("{fam:?},{n},{k},{d},{},{},{kappa}\n", c.exact, c.approximate);
    }
    emit(out, s.as_bytes())
}
