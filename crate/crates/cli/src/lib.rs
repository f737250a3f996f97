//! The `baire-games` command line: the space zoo, game runs with JSONL traces,
//! transfer demos and invariant suites.
//!
//! Exit codes: 0 success, 1 an `--expect`ed outcome was not reached, 2 an
//! invariant violation or illegal move, 3 fuel exhaustion, 4 a config, parse or
//! domain error.

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::thread;

use baire_core::game::{
    certify, error_line, history_jsonl, play_rounds, registry, GameKind, History, Move, SpaceHistory, SpaceMove,
    Strategy,
};
use baire_core::suites::{self, Budget, SuiteConfig, SuiteReport};
use baire_core::topology::{gruenhage_w_strategy, BaseElement, Point, Space, ZOO};
use baire_core::transfer::scenario::TRANSFERS;
use baire_core::transfer::{run_scenario, ScenarioConfig};
use baire_core::{Error, Side};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub const FUEL_ENV: &str = "BAIRE_GAMES_FUEL";
const DEFAULT_FUEL: usize = 4096;

#[derive(Parser, Debug)]
#[command(name = "baire-games", version, about = "Referee-checked topological games and strategy transfers")]
pub struct Cli {
    /// JSON file with command parameters; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the space zoo and the named strategies.
    Spaces,
    /// Play a game and write its JSONL trace.
    Play(PlayArgs),
    /// Run a strategy transfer and write its report.
    Demo(DemoArgs),
    /// Run invariant suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default)]
pub struct PlayArgs {
    /// bm, ch or gruenhage [default: bm].
    #[arg(long)]
    pub game: Option<String>,
    /// A name from `spaces` [default: rationals].
    #[arg(long)]
    pub space: Option<String>,
    /// β strategy, or Player I in the Gruenhage game [default: canonical].
    #[arg(long)]
    pub beta: Option<String>,
    /// α strategy [default: halver].
    #[arg(long)]
    pub alpha: Option<String>,
    /// Player II in the Gruenhage game [default: center].
    #[arg(long)]
    pub replier: Option<String>,
    /// Rounds to play [default: 8].
    #[arg(long)]
    pub depth: Option<usize>,
    /// Seed for `random` strategies without an explicit seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the trace here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Exit 1 unless the outcome is this one: alpha, beta or undecided.
    #[arg(long)]
    pub expect: Option<String>,
    /// Supply one side's moves from standard input.
    #[arg(long)]
    pub interactive: bool,
    /// The side played interactively: alpha or beta (Player II or I in the Gruenhage game).
    #[arg(long)]
    pub human: Option<String>,
    /// Testing aid: from this round on, β plays the whole space regardless of containment.
    #[arg(long, hide = true)]
    pub inject_fault: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct DemoArgs {
    /// projection, product, krom-lift, krom-lower, krom-roundtrip or lowering.
    pub transfer: Option<String>,
    /// [default: 4]
    #[arg(long)]
    pub depth: Option<usize>,
    /// Search budget; falls back to BAIRE_GAMES_FUEL, then 4096.
    #[arg(long)]
    pub fuel: Option<usize>,
    /// Repeatable; a single space is copied `--indices` times.
    #[arg(long)]
    pub space: Vec<String>,
    /// [default: 1]
    #[arg(long)]
    pub indices: Option<usize>,
    /// Size of the disjoint family for `projection` [default: 100].
    #[arg(long)]
    pub family: Option<usize>,
    /// puncture or whole.
    #[arg(long)]
    pub oracles: Option<String>,
    /// α strategy lowered by `lowering` [default: cylinder].
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    /// topology, games, krom, tree, transfer or all [default: all].
    #[arg(long)]
    pub suite: Option<String>,
    /// small or full [default: full].
    #[arg(long)]
    pub budget: Option<String>,
    /// Ultrametric triples for the krom suite [default: 10000].
    #[arg(long)]
    pub triples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Failure {
        Failure { code: 4, message: message.into() }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvariantViolation(_) | Error::IllegalStrategyMove { .. } | Error::NotCertifiedAtDepth(_) => 2,
        Error::Fuel(_) => 3,
        Error::Domain(_) | Error::Precondition(_) | Error::Unsupported(_) | Error::Parse(_) => 4,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::config(format!("i/o: {e}"))
    }
}

type CliResult<T> = Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli, input, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
            if !v.is_object() {
                return Err(Failure::config("the config file must hold a JSON object"));
            }
            v
        }
        None => json!({}),
    };
    match cli.command {
        Command::Spaces => cmd_spaces(out),
        Command::Play(args) => cmd_play(&args, &config, input, out, err),
        Command::Demo(args) => cmd_demo(&args, &config, out),
        Command::Verify(args) => cmd_verify(&args, &config, out),
    }
}

/// A flag if given, else the config entry under `key`.
fn pick<T: serde::de::DeserializeOwned>(flag: Option<T>, config: &Value, key: &str) -> CliResult<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match config.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone()).map(Some).map_err(|e| Failure::config(format!("config key {key:?}: {e}"))),
    }
}

fn check_keys(config: &Value, allowed: &[&str]) -> CliResult<()> {
    if let Some(obj) = config.as_object() {
        for k in obj.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Failure::config(format!("unknown config key {k:?} (expected one of {allowed:?})")));
            }
        }
    }
    Ok(())
}

/// Fuel from the environment, if set.
fn env_fuel() -> CliResult<Option<usize>> {
    match std::env::var(FUEL_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Failure::config(format!("{FUEL_ENV} must be a positive integer, got {s:?}"))),
        },
        Err(_) => Ok(None),
    }
}

fn sink(path: &Option<PathBuf>, out: &mut dyn Write, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::config(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(Failure::from),
    }
}

// ---- spaces ----

fn cmd_spaces(out: &mut dyn Write) -> CliResult<i32> {
    for (name, description) in ZOO {
        let flags = name.parse::<Space>().ok().map(|s| {
            let f = s.flags();
            json!({ "first_countable": f.first_countable, "ccc": f.ccc, "has_bco": f.has_bco })
        });
        writeln!(out, "{}", json!({ "kind": "space", "name": name, "description": description, "flags": flags }))?;
    }
    for (kind, list) in [("beta", registry::BETA_NAMES), ("alpha", registry::ALPHA_NAMES), ("replier", registry::REPLIER_NAMES)] {
        for (name, description) in list {
            writeln!(out, "{}", json!({ "kind": kind, "name": name, "description": description }))?;
        }
    }
    for (name, description) in TRANSFERS {
        writeln!(out, "{}", json!({ "kind": "transfer", "name": name, "description": description }))?;
    }
    Ok(0)
}

// ---- play ----

struct PlaySettings {
    kind: GameKind,
    space: Space,
    beta: String,
    alpha: String,
    replier: String,
    depth: usize,
    seed: u64,
    output: Option<PathBuf>,
    expect: Option<String>,
    human: Option<Side>,
}

fn play_settings(args: &PlayArgs, config: &Value) -> CliResult<PlaySettings> {
    check_keys(config, &["game", "space", "beta", "alpha", "replier", "depth", "seed", "output", "expect"])?;
    let kind: GameKind = pick(args.game.clone(), config, "game")?.unwrap_or_else(|| "bm".into()).parse()?;
    let space: Space = pick(args.space.clone(), config, "space")?.unwrap_or_else(|| "rationals".into()).parse()?;
    let expect = pick(args.expect.clone(), config, "expect")?;
    if let Some(e) = &expect {
        if !["alpha", "beta", "undecided"].contains(&e.as_str()) {
            return Err(Failure::config(format!("--expect takes alpha, beta or undecided, got {e:?}")));
        }
    }
    let human = if args.interactive {
        Some(match args.human.as_deref().unwrap_or("alpha") {
            "alpha" if kind == GameKind::Gruenhage => Side::PlayerII,
            "beta" if kind == GameKind::Gruenhage => Side::PlayerI,
            "alpha" => Side::Alpha,
            "beta" => Side::Beta,
            h => return Err(Failure::config(format!("--human takes alpha or beta, got {h:?}"))),
        })
    } else {
        None
    };
    Ok(PlaySettings {
        kind,
        space,
        beta: pick(args.beta.clone(), config, "beta")?.unwrap_or_else(|| "canonical".into()),
        alpha: pick(args.alpha.clone(), config, "alpha")?.unwrap_or_else(|| "halver".into()),
        replier: pick(args.replier.clone(), config, "replier")?.unwrap_or_else(|| "center".into()),
        depth: pick(args.depth, config, "depth")?.unwrap_or(8),
        seed: pick(args.seed, config, "seed")?.unwrap_or(0),
        output: pick(args.output.clone(), config, "output")?,
        expect,
        human,
    })
}

/// β that plays the whole space from round `from` on: a containment violation
/// as soon as α has shrunk the open.
struct Faulty<S> {
    inner: S,
    from: usize,
}

impl<S: Strategy<Space>> Strategy<Space> for Faulty<S> {
    fn name(&self) -> String {
        format!("faulty({})", self.inner.name())
    }

    fn side(&self) -> Side {
        self.inner.side()
    }

    fn choose(&mut self, arena: &Space, h: &SpaceHistory) -> baire_core::Result<SpaceMove> {
        let mv = self.inner.choose(arena, h)?;
        if h.round() < self.from {
            return Ok(mv);
        }
        Ok(match mv {
            Move::Open(_) => Move::Open(arena.whole()),
            Move::Pointed { point, .. } => Move::Pointed { point, open: arena.whole() },
            m => m,
        })
    }
}

/// Reads moves for one side from a line-based text REPL.
struct Human<'a> {
    side: Side,
    input: &'a mut dyn BufRead,
    err: &'a mut dyn Write,
}

const REPL_HELP: &str = "moves: a JSON move such as {\"open\":{\"interval\":{\"lo\":\"0\",\"hi\":\"1/2\"}}}, \
{\"pointed\":{\"point\":...,\"open\":...}} or {\"point\":...}; \
shortcuts: refine <k> (refine around the current point), echo (repeat the last open), whole, show, help, quit";

impl Human<'_> {
    fn current_point(&self, arena: &Space, h: &SpaceHistory) -> baire_core::Result<(Point, BaseElement)> {
        let last = h.last_open().cloned().unwrap_or_else(|| arena.whole());
        let point = match h.last() {
            Some(Move::Pointed { point, .. }) => point.clone(),
            _ => match &h.center {
                Some(c) => c.clone(),
                None => arena.pick_point(&last)?,
            },
        };
        Ok((point, last))
    }

    fn shortcut(&self, arena: &Space, h: &SpaceHistory, line: &str) -> baire_core::Result<Option<SpaceMove>> {
        let (point, last) = self.current_point(arena, h)?;
        let open = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["whole"] => arena.whole(),
            ["echo"] => last,
            ["refine", k] => {
                let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad refinement step {k:?}")))?;
                arena.refine(&point, &last, k)?
            }
            _ => return Ok(None),
        };
        Ok(Some(match self.side {
            Side::Beta if h.kind == GameKind::StrongChoquet => Move::Pointed { point, open },
            Side::PlayerII => Move::Point(point),
            _ => Move::Open(open),
        }))
    }
}

impl Strategy<Space> for Human<'_> {
    fn name(&self) -> String {
        "human".into()
    }

    fn side(&self) -> Side {
        self.side
    }

    fn choose(&mut self, arena: &Space, h: &SpaceHistory) -> baire_core::Result<SpaceMove> {
        loop {
            if let Some(last) = h.last() {
                let _ = writeln!(self.err, "opponent played {}", json!(last));
            }
            let _ = write!(self.err, "round {} ({})> ", h.round(), self.side);
            let _ = self.err.flush();
            let mut line = String::new();
            let n = self.input.read_line(&mut line).map_err(|e| Error::Parse(format!("reading input: {e}")))?;
            let line = line.trim();
            if n == 0 || line == "quit" {
                return Err(Error::Precondition("the human player quit".into()));
            }
            if line.is_empty() {
                continue;
            }
            if line == "help" {
                let _ = writeln!(self.err, "{REPL_HELP}");
                continue;
            }
            if line == "show" {
                let _ = write!(self.err, "{}", history_jsonl(h));
                continue;
            }
            let parsed = match self.shortcut(arena, h, line) {
                Ok(Some(mv)) => Ok(mv),
                Ok(None) => serde_json::from_str::<SpaceMove>(line).map_err(|e| Error::Parse(e.to_string())),
                Err(e) => Err(e),
            };
            let mv = match parsed {
                Ok(mv) => mv,
                Err(e) => {
                    let _ = writeln!(self.err, "could not read a move: {e}");
                    continue;
                }
            };
            match baire_core::game::check_move(arena, h, &mv) {
                Ok(None) => return Ok(mv),
                Ok(Some(reason)) => {
                    let _ = writeln!(self.err, "illegal: {reason}");
                }
                Err(e) => {
                    let _ = writeln!(self.err, "illegal: {e}");
                }
            }
        }
    }
}

fn outcome_matches(expect: &str, tag: &str) -> bool {
    matches!((expect, tag), ("alpha", "AlphaCertified") | ("beta", "BetaCertified") | ("undecided", "UndecidedAtDepth"))
}

fn cmd_play(args: &PlayArgs, config: &Value, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let s = play_settings(args, config)?;
    let (mut first, mut second, start): (registry::BoxedStrategy, registry::BoxedStrategy, SpaceHistory) = match s.kind {
        GameKind::Gruenhage => {
            let center = s.space.pick_point(&s.space.whole())?;
            let w = gruenhage_w_strategy(&s.space, &center)?;
            let player = baire_core::game::WPointPlayer { w };
            (Box::new(player), registry::replier(&s.replier, s.seed)?, History::with_center(GameKind::Gruenhage, center))
        }
        kind => (registry::beta(&s.beta, s.seed)?, registry::alpha(&s.alpha, s.seed)?, History::new(kind)),
    };
    if let Some(from) = args.inject_fault {
        first = Box::new(Faulty { inner: first, from });
    }
    let (s1, _) = s.kind.sides();
    let play = match s.human {
        Some(side) => {
            let mut human = Human { side, input, err };
            if side == s1 {
                play_rounds(&s.space, start, &mut human, &mut second, s.depth)
            } else {
                play_rounds(&s.space, start, &mut first, &mut human, s.depth)
            }
        }
        None => play_rounds(&s.space, start, &mut first, &mut second, s.depth),
    };
    let mut trace = history_jsonl(&play.history);
    if let Some(e) = play.error {
        trace.push_str(&error_line(&e).to_string());
        trace.push('\n');
        sink(&s.output, out, &trace)?;
        return Err(e.into());
    }
    let outcome = if s.kind == GameKind::Gruenhage {
        let replies: Vec<Point> = play.history.reply_moves().filter_map(Move::point).cloned().collect();
        let center = play.history.center.clone().expect("Gruenhage plays have a center");
        let tail = baire_core::game::tail_containment(&s.space, &center, &replies)?;
        json!({ "outcome": "UndecidedAtDepth", "certificate": { "depth": s.depth, "diagnostics": { "tail_containment": tail } } })
    } else {
        certify(&s.space, &play.history, s.depth)?.to_json_line()
    };
    trace.push_str(&outcome.to_string());
    trace.push('\n');
    sink(&s.output, out, &trace)?;
    let tag = outcome["outcome"].as_str().unwrap_or_default();
    Ok(match &s.expect {
        Some(e) if !outcome_matches(e, tag) => {
            let _ = writeln!(err, "expected {e}, got {tag}");
            1
        }
        _ => 0,
    })
}

// ---- demo ----

fn cmd_demo(args: &DemoArgs, config: &Value, out: &mut dyn Write) -> CliResult<i32> {
    let mut file_cfg = config.clone();
    let output: Option<PathBuf> = match file_cfg.as_object_mut().and_then(|o| o.remove("output")) {
        Some(v) => Some(serde_json::from_value(v).map_err(|e| Failure::config(format!("config key \"output\": {e}")))?),
        None => None,
    };
    let base = ScenarioConfig::from_json(&file_cfg.to_string())?;
    let has = |k: &str| config.get(k).is_some();
    let fuel = match args.fuel {
        Some(f) => f,
        None if has("fuel") => base.fuel,
        None => env_fuel()?.unwrap_or(DEFAULT_FUEL),
    };
    if fuel == 0 {
        return Err(Failure::config("fuel must be at least 1"));
    }
    let cfg = ScenarioConfig {
        transfer: args.transfer.clone().unwrap_or(base.transfer),
        spaces: if args.space.is_empty() { base.spaces } else { args.space.clone() },
        depth: args.depth.unwrap_or(base.depth),
        fuel,
        oracles: args.oracles.clone().unwrap_or(base.oracles),
        indices: args.indices.unwrap_or(base.indices),
        family: args.family.unwrap_or(base.family),
        alpha: args.alpha.clone().unwrap_or(base.alpha),
        seed: args.seed.unwrap_or(base.seed),
    };
    let report = run_scenario(&cfg)?;
    let text = format!("{}\n", json!({ "config": cfg, "transfer": report.transfer, "ok": report.ok, "report": report.report }));
    sink(&args.output.clone().or(output), out, &text)?;
    Ok(if report.ok { 0 } else { 2 })
}

// ---- verify ----

fn cmd_verify(args: &VerifyArgs, config: &Value, out: &mut dyn Write) -> CliResult<i32> {
    check_keys(config, &["suite", "budget", "triples", "seed"])?;
    let suite = pick(args.suite.clone(), config, "suite")?.unwrap_or_else(|| "all".into());
    let budget: Budget = pick(args.budget.clone(), config, "budget")?.unwrap_or_else(|| "full".into()).parse()?;
    let cfg = SuiteConfig {
        budget,
        triples: pick(args.triples, config, "triples")?.unwrap_or(10_000),
        seed: pick(args.seed, config, "seed")?.unwrap_or(0),
    };
    let names: Vec<&str> = if suite == "all" { suites::SUITES.to_vec() } else { vec![suite.as_str()] };
    // suites share nothing mutable, so they run side by side
    let results: Vec<baire_core::Result<Vec<SuiteReport>>> = thread::scope(|scope| {
        let handles: Vec<_> = names.iter().map(|n| scope.spawn(|| suites::run_suite(n, &cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut passed = true;
    for r in results {
        for report in r? {
            passed &= report.passed;
            writeln!(out, "{}", json!(report))?;
        }
    }
    writeln!(out, "{}", json!({ "summary": { "suites": names, "budget": cfg.budget, "passed": passed } }))?;
    Ok(if passed { 0 } else { 2 })
}
