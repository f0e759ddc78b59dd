use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use namer_claimer::cubes::{
    certify_partition_bounded, expected_cube_count_log2, hilbert_ramsey_number,
    random_partition, CubeSearch, SearchOutcome,
};
use namer_claimer::experiments::{check_bounds, growth_table, write_csv};
use namer_claimer::session::{ClientMsg, Phase, ServerMsg, Session};
use namer_claimer::solver::{solve, DEFAULT_STATE_CAP};
use namer_claimer::{Error, PointSet, Role, StrategySpec};
use serde_json::json;

#[derive(Parser)]
#[command(name = "namer-claimer", version, about = "Namer-Claimer game laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact game value and principal line for [n].
    Solve {
        #[arg(long)]
        n: usize,
        /// Also print the principal line as a table on stderr.
        #[arg(long)]
        line: bool,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        cap: usize,
    },
    /// Play a strategy pair over a grid of board sizes and seeds.
    Simulate(SimulateArgs),
    /// Hilbert cube tools.
    #[command(subcommand)]
    Cubes(CubesCmd),
    /// Least n such that every r-colouring of [n] has a monochromatic k-cube.
    Ramsey {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Play against an engine on the terminal.
    Play {
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum)]
        role: RoleArg,
        #[arg(long)]
        engine: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Where to write the finished transcript; printed to stdout otherwise.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the WebSocket play service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "games")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    namer: String,
    #[arg(long)]
    claimer: String,
    /// Comma-separated sizes; `2^k` terms and `2^a..2^b` power ranges are accepted.
    #[arg(long, default_value = "2^4..2^20")]
    n_grid: String,
    /// `a..b` (exclusive) or a comma-separated list.
    #[arg(long, default_value = "0..30")]
    seeds: String,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Growth report, bound check and all records as one JSON document.
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CubesCmd {
    /// Search every class of a partition of [n] for a non-degenerate k-cube.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        classes: ClassesArg,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of classes for `random`.
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Find a non-degenerate k-cube inside a given set.
    Find {
        #[arg(long)]
        n: usize,
        /// Comma-separated points; the whole board when omitted.
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        k: usize,
    },
    /// First-moment bound on the number of k-cubes in a random subset of [n].
    Expected {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassesArg {
    OddEven,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    Namer,
    Claimer,
}

enum Failure {
    Usage(String),
    Capacity(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capacity(_) => Failure::Capacity(e.to_string()),
            Error::BadSpec { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn print_json(v: &impl serde::Serialize) {
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(io::stdout(), "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Capacity(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, Failure> {
    match cmd {
        Cmd::Solve { n, line, cap } => {
            if n == 0 {
                return Err(Failure::Usage("n must be at least 1".into()));
            }
            let report = solve(n, cap)?;
            if line {
                eprintln!("round  d  claimed");
                for (i, r) in report.principal_line.rounds.iter().enumerate() {
                    eprintln!("{:>5}  {}  {}", i + 1, r.d.get(), r.claimed);
                }
            }
            print_json(&report);
        }
        Cmd::Simulate(args) => simulate(args)?,
        Cmd::Cubes(c) => return cubes(c),
        Cmd::Ramsey { k, r, n_max } => {
            let value = hilbert_ramsey_number(k, r, n_max);
            print_json(&json!({"k": k, "r": r, "n_max": n_max, "value": value}));
        }
        Cmd::Play { n, role, engine, seed, out_dir } => play(n, role, engine, seed, out_dir)?,
        Cmd::Serve { port, out_dir } => namer_claimer_service::run(port, &out_dir)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_size(term: &str) -> Result<usize, Failure> {
    let bad = || Failure::Usage(format!("bad board size {term:?}"));
    match term.split_once('^') {
        Some(("2", e)) => e.parse::<u32>().ok().and_then(|e| 1usize.checked_shl(e)).ok_or_else(bad),
        Some(_) => Err(bad()),
        None => term.parse().map_err(|_| bad()),
    }
}

fn parse_grid(text: &str) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for term in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match term.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse_size(a)?, parse_size(b)?);
                if !a.is_power_of_two() || !b.is_power_of_two() || a > b {
                    return Err(Failure::Usage(format!("range {term:?} must run between powers of two")));
                }
                let mut x = a;
                while x <= b {
                    out.push(x);
                    x *= 2;
                }
            }
            None => out.push(parse_size(term)?),
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(Failure::Usage("the size grid needs positive sizes".into()));
    }
    Ok(out)
}

fn parse_seeds(text: &str) -> Result<Vec<u64>, Failure> {
    let bad = || Failure::Usage(format!("bad seed list {text:?}"));
    let seeds: Vec<u64> = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?..b.trim().parse().map_err(|_| bad())?).collect(),
        None => text
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?,
    };
    if seeds.is_empty() {
        return Err(bad());
    }
    Ok(seeds)
}

fn spec(text: &str) -> Result<StrategySpec, Failure> {
    text.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let namer = spec(&args.namer)?;
    let claimer = spec(&args.claimer)?;
    let grid = parse_grid(&args.n_grid)?;
    let seeds = parse_seeds(&args.seeds)?;
    let (growth, records) = growth_table(&namer, &claimer, &grid, &seeds)?;
    let bounds = check_bounds(&records);
    if let Some(path) = &args.out_csv {
        let file = fs::File::create(path)?;
        write_csv(&records, file).map_err(|e| Failure::Other(e.to_string()))?;
    }
    if let Some(path) = &args.out_json {
        let doc = json!({"growth": growth, "bounds": bounds, "records": records});
        fs::write(path, serde_json::to_string_pretty(&doc).expect("serializable"))?;
    }
    print_json(&json!({"growth": growth, "bounds": bounds}));
    Ok(())
}

fn cubes(cmd: CubesCmd) -> Result<ExitCode, Failure> {
    match cmd {
        CubesCmd::Certify { n, classes, k, seed, r, node_limit } => {
            if n == 0 || r == 0 {
                return Err(Failure::Usage("n and r must be positive".into()));
            }
            let parts = match classes {
                ClassesArg::OddEven => vec![
                    PointSet::from_fn(n, |x| x % 2 == 1),
                    PointSet::from_fn(n, |x| x % 2 == 0),
                ],
                ClassesArg::Random => random_partition(n, r, seed),
            };
            let cert = certify_partition_bounded(&parts, k, node_limit)?;
            print_json(&cert.report());
            Ok(if cert.certified() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        CubesCmd::Find { n, points, k } => {
            let s = match points {
                Some(text) => {
                    let pts = text
                        .split(',')
                        .map(|p| p.trim().parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| Failure::Usage(format!("bad point list {text:?}")))?;
                    PointSet::from_points(n, pts).map_err(|e| Failure::Usage(e.to_string()))?
                }
                None => PointSet::full(n),
            };
            let mut search = CubeSearch::new(k);
            let cube = match search.run(&s) {
                SearchOutcome::Found(c) => Some(c),
                _ => None,
            };
            print_json(&json!({"n": n, "k": k, "cube": cube, "nodes": search.nodes()}));
            Ok(ExitCode::SUCCESS)
        }
        CubesCmd::Expected { n, k } => {
            let log2 = expected_cube_count_log2(n, k);
            print_json(&json!({"n": n, "k": k, "log2_expected": log2, "expected": log2.exp2()}));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn show(msg: &ServerMsg) {
    match msg {
        ServerMsg::State { unclaimed, phase, .. } => {
            println!("unclaimed ({}): {:?}", unclaimed.len(), unclaimed);
            match phase {
                Phase::AwaitingName => println!("name a distance:"),
                Phase::AwaitingClaim => println!("claim points (space or comma separated):"),
                Phase::Finished => {}
            }
        }
        ServerMsg::Named { d } => println!("engine names d = {d}"),
        ServerMsg::Claimed { points } => println!("engine claims {points:?}"),
        ServerMsg::End { rounds } => println!("game over after {rounds} rounds"),
        ServerMsg::Error { code, detail } => println!("rejected ({code}): {detail}"),
    }
}

fn play(n: i64, role: RoleArg, engine: Option<String>, seed: Option<u64>, out_dir: Option<PathBuf>) -> Result<(), Failure> {
    let role = match role {
        RoleArg::Namer => Role::Namer,
        RoleArg::Claimer => Role::Claimer,
    };
    let (mut session, opening) = Session::create("terminal".into(), n, role, engine.as_deref(), seed)
        .map_err(|m| match m {
            ServerMsg::Error { detail, .. } => Failure::Usage(detail),
            _ => Failure::Other("unexpected reply".into()),
        })?;
    println!("playing {role} against {}", session.engine_spec());
    opening.iter().for_each(show);
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    while session.phase() != Phase::Finished {
        io::stdout().flush()?;
        let Some(line) = lines.next().transpose()? else {
            return Err(Failure::Other("input ended before the game finished".into()));
        };
        let nums: Result<Vec<i64>, _> =
            line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::parse).collect();
        let Ok(nums) = nums else {
            println!("enter whole numbers");
            continue;
        };
        let msg = match session.phase() {
            Phase::AwaitingName if nums.len() == 1 => ClientMsg::Name { d: nums[0] },
            Phase::AwaitingName => {
                println!("enter exactly one distance");
                continue;
            }
            _ => ClientMsg::Claim { points: nums },
        };
        session.handle(msg).iter().for_each(show);
    }
    let json = session.transcript().to_json();
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(&dir)?;
            let path = dir.join("terminal.json");
            fs::write(&path, json)?;
            println!("transcript written to {}", path.display());
        }
        None => println!("{json}"),
    }
    Ok(())
}
