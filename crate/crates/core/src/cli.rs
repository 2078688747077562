// Copyright 2026 The quadlimit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The `quadlimit` command line.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 unusable input (scenario or
//! result parse errors, infeasible requests, out-of-bounds points), 4 I/O
//! failures. Results go to standard output, diagnostics to standard error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::apportion::{compare_methods, Method, StateRecord};
use crate::interchange::{LocateIndex, ResultDocument};
use crate::popgrid::{load_scenario, Scenario};
use crate::quadtree::delimit;
use crate::render::{render_document_svg, render_svg, RenderStyle};

#[derive(Debug, Parser)]
#[command(name = "quadlimit", version, about = "Quadtree districting and classical seat apportionment")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Overrides {
    /// Maximum people per constituency; overrides the scenario file.
    #[arg(long, value_parser = positive)]
    pub threshold: Option<u64>,
    /// People per dot; overrides the scenario file.
    #[arg(long, value_parser = positive)]
    pub param: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Delimit a scenario, writing the result JSON and optionally an SVG map.
    Delimit {
        scenario: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Apportion seats among states with a classical method.
    Apportion {
        #[arg(long, value_parser = parse_method)]
        method: Method,
        #[arg(long, value_parser = positive)]
        seats: u64,
        /// `A=2560,B=3315,...` or a file of `label population` lines.
        #[arg(long)]
        pops: String,
    },
    /// Find the constituency containing a cell of a result file.
    Locate {
        result: PathBuf,
        /// Cell as `x,y`.
        #[arg(long, value_parser = parse_point)]
        point: (usize, usize),
    },
    /// Draw a result file as SVG, with dots when the scenario is given.
    Render {
        result: PathBuf,
        scenario: Option<PathBuf>,
        #[arg(long, visible_alias = "svg")]
        out: Option<PathBuf>,
    },
    /// Classical apportionment next to per-state quadtree seat counts.
    Compare {
        scenario: PathBuf,
        #[arg(long, value_parser = positive)]
        seats: u64,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Tree size and depth for a scenario.
    Stats {
        scenario: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| format!("{e}; expected hamilton, jefferson, webster or huntington-hill"))
}

fn parse_point(s: &str) -> Result<(usize, usize), String> {
    let (x, y) = s.split_once(',').ok_or("expected `x,y`")?;
    let x = x.trim().parse().map_err(|_| format!("bad column `{x}`"))?;
    let y = y.trim().parse().map_err(|_| format!("bad row `{y}`"))?;
    Ok((x, y))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Io(m) => m,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_scenario(path: &Path, overrides: &Overrides) -> Result<Scenario, Failure> {
    let text = read(path)?;
    let scenario = load_scenario(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    scenario
        .with_overrides(overrides.threshold, overrides.param)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_document(path: &Path) -> Result<ResultDocument, Failure> {
    ResultDocument::from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Parses `A=1,B=2` inline, or reads a `label population` file.
fn parse_pops(arg: &str) -> Result<Vec<StateRecord>, Failure> {
    if arg.contains('=') {
        return arg
            .split(',')
            .map(|item| {
                let (label, pop) =
                    item.split_once('=').ok_or_else(|| Failure::Usage(format!("bad population `{item}`")))?;
                let pop = pop.trim().parse().map_err(|_| Failure::Usage(format!("bad population `{item}`")))?;
                let label = label.trim();
                if label.is_empty() {
                    return Err(Failure::Usage(format!("missing label in `{item}`")));
                }
                Ok(StateRecord::new(label, pop))
            })
            .collect();
    }
    let path = Path::new(arg);
    let text = read(path)?;
    let mut states = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Failure::Input(format!("{}: line {}: expected `label population`", path.display(), n + 1));
        let [label, pop] = fields[..] else { return Err(bad()) };
        states.push(StateRecord::new(label, pop.parse().map_err(|_| bad())?));
    }
    Ok(states)
}

fn table(rows: &[Vec<String>]) -> String {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..columns).map(|c| rows.iter().map(|r| r.get(c).map_or(0, String::len)).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().enumerate().map(|(c, v)| format!("{v:<w$}", w = widths[c])).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let mut emit = |text: String| out.write_all(text.as_bytes()).map_err(|e| Failure::Io(format!("stdout: {e}")));
    match command {
        Command::Delimit { scenario, overrides, out: json_path, svg } => {
            let s = read_scenario(&scenario, &overrides)?;
            let result = delimit(&s);
            write_file(&json_path, &ResultDocument::from_result(&result).to_json())?;
            if let Some(svg_path) = svg {
                let text = render_svg(&result, s.grid(), &RenderStyle::default())
                    .map_err(|e| Failure::Input(e.to_string()))?;
                write_file(&svg_path, &text)?;
            }
            emit(format!("constituencies: {}\n", result.count()))
        }
        Command::Apportion { method, seats, pops } => {
            let states = parse_pops(&pops)?;
            let result = method.apportion(&states, seats).map_err(|e| Failure::Input(e.to_string()))?;
            let rows: Vec<Vec<String>> =
                result.allocations.iter().map(|a| vec![a.label.clone(), a.seats.to_string()]).collect();
            emit(table(&rows))
        }
        Command::Locate { result, point: (x, y) } => {
            let doc = read_document(&result)?;
            let index = LocateIndex::new(&doc).map_err(|e| Failure::Input(e.to_string()))?;
            let id = index.locate(x, y).ok_or_else(|| {
                Failure::Input(format!("point ({x}, {y}) lies outside the {}x{} grid", index.width(), index.height()))
            })?;
            let population = doc.constituencies[id.0 as usize - 1].population;
            emit(format!("{id} {population}\n"))
        }
        Command::Render { result, scenario, out: svg_path } => {
            let doc = read_document(&result)?;
            let grid = match &scenario {
                Some(p) => Some(read_scenario(p, &Overrides { threshold: None, param: None })?),
                None => None,
            };
            let svg = render_document_svg(&doc, grid.as_ref().map(Scenario::grid), &RenderStyle::default())
                .map_err(|e| Failure::Input(e.to_string()))?;
            match svg_path {
                Some(p) => write_file(&p, &svg),
                None => emit(svg),
            }
        }
        Command::Compare { scenario, seats, overrides } => {
            let s = read_scenario(&scenario, &overrides)?;
            let states = s
                .states()
                .ok_or_else(|| Failure::Input(format!("{}: compare needs a STATES block", scenario.display())))?;
            let mut populations = vec![0u64; states.labels().len()];
            for (i, &label) in states.cells().iter().enumerate() {
                populations[label as usize] += s.grid().counts()[i] * s.people_per_dot();
            }
            let records: Vec<StateRecord> =
                states.labels().iter().zip(&populations).map(|(l, &p)| StateRecord::new(l.clone(), p)).collect();
            let comparison = compare_methods(&records, seats).map_err(|e| Failure::Input(e.to_string()))?;
            let per_state = delimit(&s).per_state();
            let mut rows =
                vec![["state", "population", "hamilton", "jefferson", "webster", "huntington-hill", "quadtree"]
                    .iter()
                    .map(|h| h.to_string())
                    .collect::<Vec<_>>()];
            for r in &records {
                let mut row = vec![r.label.clone(), r.population.to_string()];
                row.extend(Method::ALL.iter().map(|&m| comparison.get(m).seats_of(&r.label).unwrap_or(0).to_string()));
                row.push(per_state.get(&r.label).map_or(0, Vec::len).to_string());
                rows.push(row);
            }
            emit(table(&rows))
        }
        Command::Stats { scenario, overrides } => {
            let s = read_scenario(&scenario, &overrides)?;
            let result = delimit(&s);
            let stats = result.stats();
            emit(format!(
                "nodes: {}\nleaves: {}\nmaxDepth: {}\nconstituencies: {}\n",
                stats.nodes,
                stats.leaves,
                stats.max_depth,
                result.count()
            ))
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "quadlimit: {}", f.message());
            f.code()
        }
    }
}
