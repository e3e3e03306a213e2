use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mvrelay::lattice::{search_expressible, Lattice, SearchSpec};
use mvrelay::robustness::{check_bounds, report_json, worst_case_error, ErrorMode, Family};
use mvrelay::synthesis::{
    complexity_bound, composite_synthesis, denominator_bound, denominator_reduction, factorize, state_reduction,
    synth_binary_nstate, SwitchSet, TargetSpec,
};
use mvrelay::upg::{build_upg, encode_input, upg_truth_table, Construction, UpgSpec};
use mvrelay::{circuit, eval, eval_oracle, netlist, rational, render, Assignment, Circuit, Distribution, Error};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mvrelay", version, about = "Multivalued stochastic relay circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Binary,
    State,
    Denominator,
    Composite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Corners,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Ascii,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a circuit for a target distribution.
    Synth {
        /// Comma-separated probabilities, e.g. "5/8,1/4,1/8".
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value = "binary")]
        method: Method,
        /// Denominator base q for denominator and composite synthesis.
        #[arg(long)]
        base: Option<u64>,
    },
    /// Evaluate a netlist with the compositional evaluator.
    Eval {
        #[arg(long)]
        netlist: String,
        /// Input bindings `name=state`.
        #[arg(long = "assign", value_name = "NAME=STATE")]
        assign: Vec<String>,
    },
    /// Evaluate a netlist by enumerating every pswitch outcome.
    OracleEval {
        #[arg(long)]
        netlist: String,
        #[arg(long = "assign", value_name = "NAME=STATE")]
        assign: Vec<String>,
    },
    /// Print the dual of a series-parallel netlist.
    Dual {
        #[arg(long)]
        netlist: String,
    },
    /// Worst-case pswitch count for n-digit targets.
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        states: usize,
        /// Digit base; 2 gives the binary bound.
        #[arg(long, default_value_t = 2)]
        base: u64,
    },
    /// Output error under perturbed base switches.
    Robustness {
        #[arg(long)]
        netlist: String,
        #[arg(long)]
        epsilon: String,
        #[arg(long, value_enum, default_value = "corners")]
        mode: Mode,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `binary` or `denom:q`.
        #[arg(long, default_value = "binary")]
        family: String,
    },
    /// Build a universal probability generator.
    Upg {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        bits: u32,
        #[arg(long, default_value = "bit_removed_sp")]
        construction: String,
        #[arg(long, conflicts_with = "target")]
        truth_table: bool,
        /// Dyadic target to encode as input vectors.
        #[arg(long)]
        target: Option<String>,
    },
    /// Search a lattice for a series-parallel circuit realizing a target.
    LatticeSearch {
        /// Lattice JSON file.
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        target: String,
        /// JSON file with a list of distributions, or distributions separated by `;`.
        #[arg(long)]
        switchset: String,
        #[arg(long, default_value_t = 4)]
        max_switches: usize,
        #[arg(long)]
        no_deterministic: bool,
    },
    /// Render a netlist as Graphviz DOT or bracket notation.
    Render {
        #[arg(long)]
        netlist: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
}

fn load_netlist(path: &str) -> Result<Circuit, Failure> {
    Ok(netlist::from_str(&read_source(path)?)?)
}

fn parse_assignment(bindings: &[String]) -> Result<Assignment, Failure> {
    let mut a = Assignment::new();
    for b in bindings {
        let (name, state) = b
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("binding `{b}` is not name=state")))?;
        let state = state
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("binding `{b}` has a bad state")))?;
        a.set(name.trim(), state);
    }
    Ok(a)
}

fn parse_switchset(text: &str) -> Result<Vec<Distribution>, Failure> {
    let items: Vec<String> = if Path::new(text).is_file() {
        serde_json::from_str(&read_source(text)?).map_err(|e| Error::Parse(format!("{text}: {e}")))?
    } else {
        text.split(';').map(str::to_string).collect()
    };
    Ok(items.iter().map(|s| Distribution::parse(s)).collect::<Result<_, _>>()?)
}

fn inputs_json(input: &mvrelay::upg::UpgInput) -> Value {
    Value::Object(
        input
            .to_strings()
            .into_iter()
            .map(|(k, v)| (k, Value::String(v)))
            .collect(),
    )
}

fn synth(target: &str, method: Method, base: Option<u64>) -> Result<Value, Failure> {
    let dist = Distribution::parse(target)?;
    let states = dist.states();
    Ok(match method {
        Method::Binary => synth_binary_nstate(&TargetSpec::dyadic(dist)?)?.to_json(),
        Method::State => {
            let r = state_reduction(&TargetSpec::rational(dist)?)?;
            let mut v = r.report.to_json();
            v["half_switches"] = json!(r.half_switches);
            v["leaf_switches"] = json!(r.leaf_switches);
            v["half_bound"] = json!(r.half_bound);
            v
        }
        Method::Denominator | Method::Composite => {
            let spec = match base {
                Some(q) => TargetSpec::new(dist, q)?,
                None => TargetSpec::rational(dist)?,
            };
            let q = spec.base();
            if matches!(method, Method::Denominator) {
                denominator_reduction(&spec, &SwitchSet::reciprocals(states, q))?.to_json()
            } else {
                let largest = factorize(q).last().map_or(2, |&(p, _)| p);
                composite_synthesis(&spec, &SwitchSet::reciprocals(states, largest))?.to_json()
            }
        }
    })
}

fn run(command: Command) -> Result<String, Failure> {
    let json = |v: Value| serde_json::to_string_pretty(&v).expect("JSON values serialize");
    Ok(match command {
        Command::Synth { target, method, base } => json(synth(&target, method, base)?),
        Command::Eval { netlist, assign } => {
            let c = load_netlist(&netlist)?;
            json(json!(eval(&c, &parse_assignment(&assign)?)?.to_strings()))
        }
        Command::OracleEval { netlist, assign } => {
            let c = load_netlist(&netlist)?;
            json(json!(eval_oracle(&c, &parse_assignment(&assign)?)?.to_strings()))
        }
        Command::Dual { netlist: path } => netlist::to_string(&circuit::dual(&load_netlist(&path)?)?),
        Command::Bound { n, states, base } => {
            if base < 2 || states == 0 {
                return Err(Error::InvalidTarget("need base >= 2 and at least one state".into()).into());
            }
            let b = if base == 2 {
                complexity_bound(n, states)
            } else {
                denominator_bound(base, n, states)
            };
            json(json!(b))
        }
        Command::Robustness {
            netlist,
            epsilon,
            mode,
            trials,
            seed,
            family,
        } => {
            let family = Family::parse(&family)?;
            let c = load_netlist(&netlist)?;
            let eps = rational::parse(&epsilon)?;
            let mode = match mode {
                Mode::Corners => ErrorMode::Corners,
                Mode::Sample => ErrorMode::Sampled { trials, seed },
            };
            let report = worst_case_error(&c, &eps, mode)?;
            json(report_json(&report, &check_bounds(&report, family)))
        }
        Command::Upg {
            states,
            bits,
            construction,
            truth_table,
            target,
        } => {
            let spec = UpgSpec::new(states, bits, Construction::parse(&construction)?);
            if truth_table {
                let rows: Vec<Value> = upg_truth_table(&spec)?
                    .into_iter()
                    .map(|(input, output)| {
                        json!({
                            "inputs": inputs_json(&input),
                            "output": output.to_strings(),
                        })
                    })
                    .collect();
                json(Value::Array(rows))
            } else if let Some(target) = target {
                let dist = Distribution::parse(&target)?;
                if dist.states() != states {
                    return Err(Error::Dimension {
                        expected: states,
                        found: dist.states(),
                    }
                    .into());
                }
                let input = encode_input(&dist, bits)?;
                let c = build_upg(&spec)?;
                let output = eval(&c, &input.assignment())?;
                json(json!({
                    "inputs": inputs_json(&input),
                    "output": output.to_strings(),
                    "netlist": netlist::to_value(&c),
                }))
            } else {
                netlist::to_string(&build_upg(&spec)?)
            }
        }
        Command::LatticeSearch {
            lattice,
            target,
            switchset,
            max_switches,
            no_deterministic,
        } => {
            let lattice = Lattice::from_json(&read_source(&lattice)?)?;
            let spec = SearchSpec::new(
                lattice,
                parse_switchset(&switchset)?,
                !no_deterministic,
                max_switches,
                Distribution::parse(&target)?,
            );
            json(search_expressible(&spec)?.to_json(&spec.lattice))
        }
        Command::Render { netlist, format } => {
            let c = load_netlist(&netlist)?;
            match format {
                Format::Dot => render::dot(&c),
                Format::Ascii => render::ascii(&c),
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", text.trim_end());
            ExitCode::SUCCESS
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_capacity() { 3 } else { 2 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
