// Copyright 2026 The steerqkd Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use steerqkd::analyze::analyze;
use steerqkd::error::{CliError, CliResult};
use steerqkd::scan::{format_float, RangeSpec, ScanSpec};
use steerqkd::simulate::simulate;
use steerqkd::statefile::{FamilyName, StateSpec};
use steerqkd::table1::table1;
use steerqkd_core::protocol::DEFAULT_TEST_FRACTION;
use steerqkd_core::FilterPair;

#[derive(Parser)]
#[command(
    name = "steerqkd",
    version,
    about = "Steering and key-distribution usefulness of two-qubit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Bloch form, spectrum, bounds and verdicts of a state as JSON.
    Analyze { file: PathBuf },
    /// Scan a family over a parameter grid and write CSV.
    Scan {
        #[arg(long, value_enum)]
        family: FamilyName,
        /// `name=lo:hi:step`, repeated; the first range is the outermost loop.
        #[arg(long = "range", required = true)]
        ranges: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        /// Also evaluate the filtered state, `e1,e2`.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Run the seeded protocol simulation and print a JSON report.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        rounds: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TEST_FRACTION)]
        test_fraction: f64,
        #[arg(long)]
        filter: Option<String>,
        /// Include the undisclosed raw keys in the report.
        #[arg(long)]
        keys: bool,
    },
    /// Start of the useful q range of the γ family under a filter, as CSV.
    Table1 {
        #[arg(long)]
        eps1: f64,
        #[arg(long)]
        eps2: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 0.01)]
        qstep: f64,
    },
}

fn parse_filter(s: &str) -> CliResult<FilterPair> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts[..] else {
        return Err(CliError::Parse(format!("--filter expects e1,e2, got {s:?}")));
    };
    let num = |x: &str| {
        x.parse::<f64>()
            .map_err(|_| CliError::Parse(format!("--filter: {x:?} is not a number")))
    };
    FilterPair::new(num(a)?, num(b)?).map_err(|e| CliError::core("--filter", e))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Analyze { file } => {
            let rho = StateSpec::load(&file)?.to_state()?;
            Ok(to_json(&analyze(&rho)) + "\n")
        }
        Command::Scan {
            family,
            ranges,
            out,
            filter,
        } => {
            let spec = ScanSpec {
                family,
                ranges: ranges.iter().map(|r| RangeSpec::parse(r)).collect::<CliResult<_>>()?,
                filter: filter.as_deref().map(parse_filter).transpose()?,
            };
            let result = spec.run()?;
            std::fs::write(&out, result.to_csv()).map_err(|source| CliError::Io {
                path: out.clone(),
                source,
            })?;
            Ok(String::new())
        }
        Command::Simulate {
            file,
            rounds,
            seed,
            test_fraction,
            filter,
            keys,
        } => {
            let state = StateSpec::load(&file)?;
            let filter = filter.as_deref().map(parse_filter).transpose()?;
            let out = simulate(&state, rounds, seed, test_fraction, filter, keys)?;
            Ok(to_json(&out) + "\n")
        }
        Command::Table1 {
            eps1,
            eps2,
            alphas,
            qstep,
        } => {
            let f = FilterPair::new(eps1, eps2).map_err(|e| CliError::core("filter", e))?;
            let mut csv = String::from("alpha,q_start\n");
            for row in table1(&f, &alphas, qstep)? {
                let start = row.q_start.map_or_else(|| "NaN".into(), format_float);
                csv.push_str(&format!("{},{start}\n", format_float(row.alpha)));
            }
            Ok(csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
