use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ternarith::builders::{
    build_compressor, build_miswired_rca, build_multiplier, build_rca, build_subtractor, AdderStyle,
};
use ternarith::sweep::{DEFAULT_BUDGET, DEFAULT_SEED};
use ternarith::trit::{from_balanced, parse_integer_literal, to_balanced, BalancedVec, TritVec};
use ternarith::verify::{claim_suite, netlist_claim, verify_against_oracle};
use ternarith::{Netlist, Oracle, SweepConfig};

#[derive(Parser)]
#[command(name = "ternarith", version, about = "Build, simulate and verify unbalanced-ternary arithmetic circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum System {
    Unbalanced,
    Balanced,
}

#[derive(Clone, Copy, ValueEnum)]
enum Circuit {
    Rca,
    Sub,
    Mul,
    Comp,
    /// Adder with a full-range carry-in on a partial TFA (negative control).
    Miswired,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Partial,
    Complete,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Largest stimulus count swept exhaustively; larger spaces are sampled.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Show a number in decimal, unbalanced and balanced ternary.
    Convert {
        /// Decimal (`-7`), unbalanced (`0t21`), or balanced (`1T1`, with --system balanced).
        #[arg(allow_hyphen_values = true)]
        value: String,
        /// Number system of VALUE when it is not decimal.
        #[arg(long, value_enum, default_value = "unbalanced")]
        system: System,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Generate a circuit and write its netlist.
    Build {
        #[arg(value_enum)]
        circuit: Circuit,
        /// Operand width (first operand for mul).
        #[arg(long)]
        n: Option<usize>,
        /// Second operand width for mul, input count for comp.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value = "partial")]
        style: Style,
        /// Output file; the netlist goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Simulate one stimulus, e.g. `sim adder.json A=0t12 B=0t21`.
    Sim {
        net: PathBuf,
        /// OPERAND=LITERAL pairs; missing operands are zero.
        inputs: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Sweep a netlist against an integer oracle and certify its partial TFAs.
    Verify {
        net: PathBuf,
        /// add | sub | mul | sum; inferred from the netlist's builder by default.
        #[arg(long)]
        oracle: Option<String>,
        /// Accept complete TFAs in the certificate.
        #[arg(long)]
        allow_complete: bool,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the claim battery, or the partial-TFA claim on one netlist.
    Claims {
        net: Option<PathBuf>,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the cell census and range certificate of a netlist.
    Report {
        net: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn load(path: &Path) -> Result<Netlist> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Netlist::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn convert(value: &str, system: System, format: Format) -> Result<()> {
    let n = match system {
        System::Balanced => {
            let v: BalancedVec = value.parse()?;
            from_balanced(&v)?
        }
        System::Unbalanced => parse_integer_literal(value)?,
    };
    let unbalanced = (n >= 0).then(|| TritVec::from_value(n as u128, None).literal());
    let balanced = to_balanced(n).to_string();
    match format {
        Format::Json => print_json(&json!({
            "decimal": n,
            "unbalanced": unbalanced,
            "balanced": balanced,
        }))?,
        Format::Text => {
            println!("decimal:    {n}");
            println!("unbalanced: {}", unbalanced.as_deref().unwrap_or("-"));
            println!("balanced:   {balanced}");
        }
    }
    Ok(())
}

fn require(name: &str, v: Option<usize>) -> Result<usize> {
    v.ok_or_else(|| anyhow!("--{name} is required for this circuit"))
}

fn build(circuit: Circuit, n: Option<usize>, m: Option<usize>, style: Style, out: Option<&Path>, format: Format) -> Result<()> {
    let net = match circuit {
        Circuit::Rca => {
            let style = match style {
                Style::Partial => AdderStyle::Partial,
                Style::Complete => AdderStyle::Complete,
            };
            build_rca(require("n", n)?, style)?
        }
        Circuit::Sub => build_subtractor(require("n", n)?)?,
        Circuit::Mul => build_multiplier(require("n", n)?, require("m", m)?)?,
        Circuit::Comp => build_compressor(require("m", m)?)?,
        Circuit::Miswired => build_miswired_rca(require("n", n)?)?,
    };
    let text = net.to_json();
    let census = net.census();
    match out {
        Some(path) => {
            fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            match format {
                Format::Json => print_json(&json!({ "out": path, "census": census }))?,
                Format::Text => {
                    println!("census: {census}");
                    println!("wrote {}", path.display());
                }
            }
        }
        None => {
            println!("{text}");
            eprintln!("census: {census}");
        }
    }
    Ok(())
}

fn sim(path: &Path, inputs: &[String], format: Format) -> Result<()> {
    let net = load(path)?;
    let mut operands: Vec<(String, TritVec)> = Vec::new();
    for arg in inputs {
        let (name, literal) = arg
            .split_once('=')
            .ok_or_else(|| anyhow!("expected OPERAND=LITERAL, got {arg:?}"))?;
        let value = parse_integer_literal(literal)?;
        if value < 0 {
            bail!("operand {name} must be non-negative");
        }
        operands.push((name.to_string(), TritVec::from_value(value as u128, None)));
    }
    let refs: Vec<(&str, &TritVec)> = operands.iter().map(|(n, v)| (n.as_str(), v)).collect();
    let stim = net.stimulus(&refs)?;
    let out = net.simulate(&stim)?;
    let readings = net.read_outputs(&out);
    let total = net.output_total(&out);
    match format {
        Format::Json => {
            let ops: Vec<_> = readings
                .iter()
                .map(|r| json!({ "operand": r.operand, "literal": r.literal(), "value": r.value }))
                .collect();
            print_json(&json!({ "outputs": ops, "total": total }))?;
        }
        Format::Text => {
            for r in &readings {
                println!("{} = {} ({})", r.operand, r.literal(), r.value);
            }
            println!("total = {total}");
        }
    }
    Ok(())
}

fn verify(path: &Path, oracle: Option<&str>, allow_complete: bool, sweep: &SweepArgs, format: Format) -> Result<bool> {
    let net = load(path)?;
    let oracle = match oracle {
        Some(name) => Oracle::parse(name, &net)?,
        None => Oracle::for_netlist(&net),
    };
    let cfg = SweepConfig {
        budget: sweep.budget,
        seed: sweep.seed,
        forbid_complete: !allow_complete,
    };
    let report = verify_against_oracle(&net, oracle, &cfg)?;
    match format {
        Format::Json => print_json(&report)?,
        Format::Text => print!("{report}"),
    }
    Ok(report.pass)
}

fn claims(path: Option<&Path>, sweep: &SweepArgs, format: Format) -> Result<bool> {
    let cfg = SweepConfig {
        budget: sweep.budget,
        seed: sweep.seed,
        forbid_complete: true,
    };
    let results = match path {
        Some(p) => {
            let net = load(p)?;
            vec![netlist_claim(&net, Oracle::for_netlist(&net), &cfg)]
        }
        None => claim_suite(&cfg),
    };
    let pass = results.iter().all(|r| r.pass);
    match format {
        Format::Json => print_json(&json!({ "pass": pass, "claims": results }))?,
        Format::Text => {
            for r in &results {
                print!("{r}");
            }
            let passed = results.iter().filter(|r| r.pass).count();
            println!("{passed}/{} claims passed", results.len());
        }
    }
    Ok(pass)
}

fn report(path: &Path, format: Format) -> Result<bool> {
    let net = load(path)?;
    let cert = net.check_partial_safety(true);
    match format {
        Format::Json => print_json(&cert)?,
        Format::Text => {
            println!("circuit: {}", net.meta);
            println!("cells: {}  wires: {}", net.cells().len(), net.wires().len());
            print!("{cert}");
        }
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Convert { value, system, format } => convert(&value, system, format).map(|()| true),
        Command::Build {
            circuit,
            n,
            m,
            style,
            out,
            format,
        } => build(circuit, n, m, style, out.as_deref(), format).map(|()| true),
        Command::Sim { net, inputs, format } => sim(&net, &inputs, format).map(|()| true),
        Command::Verify {
            net,
            oracle,
            allow_complete,
            sweep,
            format,
        } => verify(&net, oracle.as_deref(), allow_complete, &sweep, format),
        Command::Claims { net, sweep, format } => claims(net.as_deref(), &sweep, format),
        Command::Report { net, format } => report(&net, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
