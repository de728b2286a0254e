//! Command-line front end. Every invocation produces one report document,
//! rendered as text or JSON, and an exit code: 0 on success, 1 on domain
//! errors, 2 on parse and usage errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::catalog;
use crate::dynamics::{default_max_steps, greedy_certificates, greedy_run, response_dynamics};
use crate::dynamics::{ArrivalOrder, MoverPolicy, ResponseMode, TieBreak};
use crate::equilibrium::{compare, enumerate_nash, enumerate_strong};
use crate::error::Error;
use crate::form::{build_r_tree, find_bad_configuration, induced_strategies};
use crate::io::{format_rational, parse_game_file, serialize_game, GameFile, ParseError};
use crate::model::{CanonicalProfile, GameForm, StrategyProfile};
use crate::synthesis::synthesize_counterexample;
use crate::{Game, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "congestion", version, about = "Greedy profiles and pure equilibria of congestion games")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    /// Seed for randomized policies.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Step cap for response dynamics (default N·|Σ|·10).
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Br,
    Better,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    Lowest,
    Gain,
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Subset-freeness, bad configuration and tree representability of a form.
    CheckForm { file: PathBuf },
    /// Build and print an R-tree for a tree-representable form.
    Tree { file: PathBuf },
    /// One greedy run, or every greedy profile with --all.
    Greedy {
        file: PathBuf,
        /// Arrival order as comma-separated player indices.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        #[arg(long, conflicts_with = "order")]
        all: bool,
    },
    /// Pure Nash equilibria.
    Nash {
        file: PathBuf,
        #[arg(long)]
        strong: bool,
    },
    /// Greedy profiles against equilibria.
    Compare {
        file: PathBuf,
        #[arg(long)]
        strong: bool,
    },
    /// Best- or better-response dynamics from a start profile.
    Dynamics {
        file: PathBuf,
        /// Comma-separated strategy names in player order.
        #[arg(long)]
        start: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Br)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = PolicyArg::Lowest)]
        policy: PolicyArg,
    },
    /// Counterexample game for a form that is not tree representable.
    Synthesize { file: PathBuf },
    /// Built-in examples with expected and computed sets.
    Examples {
        #[arg(default_value = "all")]
        which: String,
    },
}

/// Exit code, report document and its rendering in the requested format.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub document: Value,
    pub rendered: String,
}

struct Failure {
    exit_code: i32,
    kind: &'static str,
    message: String,
    position: Option<(usize, usize)>,
}

impl Failure {
    fn domain(err: Error) -> Self {
        let kind = match err {
            Error::InvalidForm(_) => "invalid_form",
            Error::InvalidGame(_) => "invalid_game",
            Error::InvalidProfile(_) | Error::InvalidPlayer { .. } => "invalid_profile",
            Error::InvalidOrder(_) => "invalid_order",
            Error::InvalidTie { .. } => "invalid_tie",
            Error::Precondition(_) => "precondition",
            Error::NotRepresentable(_) => "not_representable",
            Error::RepresentationBug(_) => "representation_bug",
            Error::TheoremViolation(_) => "theorem_violation",
        };
        let message = match err {
            Error::Precondition(m) => m,
            other => other.to_string(),
        };
        Failure { exit_code: EXIT_DOMAIN, kind, message, position: None }
    }

    fn parse(err: ParseError) -> Self {
        Failure { exit_code: EXIT_PARSE, kind: "parse", message: err.message, position: Some((err.line, err.column)) }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure { exit_code: EXIT_PARSE, kind: "usage", message: message.into(), position: None }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::domain(err)
    }
}

struct Done {
    result: Value,
    text: String,
    exit_code: i32,
}

impl Done {
    fn ok(result: Value, text: String) -> Self {
        Done { result, text, exit_code: EXIT_OK }
    }
}

struct Input {
    path: String,
    digest: String,
}

/// Parses `argv` (program name first), runs the command and builds the report.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let shown = matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let json_wanted = echo.windows(2).any(|w| w[0] == "--format" && w[1] == "json")
                || echo.iter().any(|a| a == "--format=json");
            if shown {
                return Outcome { exit_code: EXIT_OK, document: Value::Null, rendered: err.to_string() };
            }
            let rendered = err.render().to_string();
            let failure = Failure::usage(rendered.trim_start_matches("error: ").trim_end());
            let format = if json_wanted { OutputFormat::Json } else { OutputFormat::Text };
            return finish(format, "", &echo, None, Err(failure), None);
        }
    };

    let started = Instant::now();
    let mut input = None;
    let outcome = execute(&cli, &mut input);
    let elapsed = cli.timing.then(|| started.elapsed().as_micros() as u64);
    finish(cli.format, command_name(&cli.command), &echo, input.as_ref(), outcome, elapsed)
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::CheckForm { .. } => "check-form",
        Command::Tree { .. } => "tree",
        Command::Greedy { .. } => "greedy",
        Command::Nash { .. } => "nash",
        Command::Compare { .. } => "compare",
        Command::Dynamics { .. } => "dynamics",
        Command::Synthesize { .. } => "synthesize",
        Command::Examples { .. } => "examples",
    }
}

fn finish(
    format: OutputFormat,
    command: &str,
    echo: &[String],
    input: Option<&Input>,
    outcome: Result<Done, Failure>,
    elapsed_us: Option<u64>,
) -> Outcome {
    let mut doc = Map::new();
    doc.insert("command".into(), json!(command));
    doc.insert("argv".into(), json!(echo));
    doc.insert("input".into(), input.map_or(Value::Null, |i| json!({ "path": i.path, "sha256": i.digest })));
    let mut text = String::new();
    let _ = writeln!(text, "command: congestion {}", echo.join(" "));
    if let Some(i) = input {
        let _ = writeln!(text, "input: {} (sha256 {})", i.path, i.digest);
    }
    let exit_code = match outcome {
        Ok(done) => {
            doc.insert("status".into(), json!(if done.exit_code == EXIT_OK { "ok" } else { "failed" }));
            doc.insert("result".into(), done.result);
            doc.insert("error".into(), Value::Null);
            text.push_str(&done.text);
            done.exit_code
        }
        Err(f) => {
            let status = if f.exit_code == EXIT_PARSE { "parse_error" } else { "domain_error" };
            let mut err = Map::new();
            err.insert("kind".into(), json!(f.kind));
            err.insert("message".into(), json!(f.message));
            if let Some((line, column)) = f.position {
                err.insert("line".into(), json!(line));
                err.insert("column".into(), json!(column));
                let _ = writeln!(text, "error: line {line}, column {column}: {}", f.message);
            } else {
                let _ = writeln!(text, "error: {}", f.message);
            }
            doc.insert("status".into(), json!(status));
            doc.insert("result".into(), Value::Null);
            doc.insert("error".into(), Value::Object(err));
            f.exit_code
        }
    };
    doc.insert("exit_code".into(), json!(exit_code));
    if let Some(us) = elapsed_us {
        doc.insert("elapsed_us".into(), json!(us));
        let _ = writeln!(text, "elapsed: {us} µs");
    }
    let document = Value::Object(doc);
    let rendered = match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&document).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => text,
    };
    Outcome { exit_code, document, rendered }
}

/// Reads and parses `path`, recording its digest in `slot` even when parsing fails.
fn load(path: &PathBuf, slot: &mut Option<Input>) -> Result<GameFile, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure { exit_code: EXIT_PARSE, kind: "io", message: format!("{}: {e}", path.display()), position: None })?;
    let digest = hex::encode(Sha256::digest(&bytes));
    *slot = Some(Input { path: path.display().to_string(), digest });
    let text = String::from_utf8(bytes).map_err(|_| Failure::usage(format!("{}: not UTF-8", path.display())))?;
    parse_game_file(&text).map_err(Failure::parse)
}

fn game_of(file: &GameFile) -> Result<&Game, Failure> {
    match file {
        GameFile::Game(g) => Ok(g),
        GameFile::Form(_) => Err(Failure {
            exit_code: EXIT_DOMAIN,
            kind: "precondition",
            message: "a game with players and payoffs is required".into(),
            position: None,
        }),
    }
}

fn execute(cli: &Cli, slot: &mut Option<Input>) -> Result<Done, Failure> {
    let file = match &cli.command {
        Command::CheckForm { file }
        | Command::Tree { file }
        | Command::Greedy { file, .. }
        | Command::Nash { file, .. }
        | Command::Compare { file, .. }
        | Command::Dynamics { file, .. }
        | Command::Synthesize { file } => Some(file),
        Command::Examples { .. } => None,
    };
    let Some(path) = file else {
        let Command::Examples { which } = &cli.command else { unreachable!("file-less command") };
        return examples(which);
    };
    let file = load(path, slot)?;
    match &cli.command {
        Command::CheckForm { .. } => Ok(check_form(file.form())),
        Command::Tree { .. } => tree(file.form()),
        Command::Greedy { order, all, .. } => greedy(game_of(&file)?, order.as_deref(), *all),
        Command::Nash { strong, .. } => nash(game_of(&file)?, *strong),
        Command::Compare { strong, .. } => compare_cmd(game_of(&file)?, *strong),
        Command::Dynamics { start, mode, policy, .. } => {
            dynamics(game_of(&file)?, start, *mode, *policy, cli.seed, cli.max_steps)
        }
        Command::Synthesize { .. } => synthesize(file.form()),
        Command::Examples { .. } => unreachable!("handled above"),
    }
}

fn labels(form: &GameForm, strategies: &[usize]) -> Vec<String> {
    strategies.iter().map(|&s| form.strategy_label(s)).collect()
}

fn profile_list(form: &GameForm, set: &BTreeSet<CanonicalProfile>) -> Value {
    Value::Array(set.iter().map(|p| json!(labels(form, p.strategies()))).collect())
}

fn profile_lines(form: &GameForm, set: &BTreeSet<CanonicalProfile>) -> String {
    set.iter().map(|p| p.display(form)).collect::<Vec<_>>().join(" ")
}

fn rational(v: &Rational) -> Value {
    json!(format_rational(v))
}

fn check_form(form: &GameForm) -> Done {
    let subset = form.is_subset_free();
    let bad = find_bad_configuration(form);
    let subset_json = subset.map_or(Value::Null, |(s, t)| {
        json!({ "subset": form.strategy_label(s), "superset": form.strategy_label(t) })
    });
    let bad_json = bad.map_or(Value::Null, |b| {
        json!({
            "A": form.resource_name(b.resource_a),
            "B": form.resource_name(b.resource_b),
            "s1": form.strategy_label(b.s1),
            "s2": form.strategy_label(b.s2),
            "s3": form.strategy_label(b.s3),
        })
    });
    let mut text = String::new();
    let _ = writeln!(text, "form: {form}");
    match subset {
        None => text.push_str("subset-free: yes\n"),
        Some((s, t)) => {
            let _ = writeln!(text, "subset-free: no ({} ⊂ {})", form.strategy_label(s), form.strategy_label(t));
        }
    }
    match bad {
        None => text.push_str("bad configuration: none\ntree representable: yes\n"),
        Some(b) => {
            let _ = writeln!(
                text,
                "bad configuration: A={} B={} s1={} s2={} s3={}\ntree representable: no",
                form.resource_name(b.resource_a),
                form.resource_name(b.resource_b),
                form.strategy_label(b.s1),
                form.strategy_label(b.s2),
                form.strategy_label(b.s3)
            );
        }
    }
    let result = json!({
        "resources": form.resources(),
        "strategies": labels(form, &(0..form.num_strategies()).collect::<Vec<_>>()),
        "subset_free": subset.is_none(),
        "subset_witness": subset_json,
        "bad_configuration": bad_json,
        "tree_representable": bad.is_none(),
    });
    Done::ok(result, text)
}

fn tree(form: &GameForm) -> Result<Done, Failure> {
    let tree = build_r_tree(form)?;
    let induced = induced_strategies(&tree)?;
    let strategies = labels(&induced, &(0..induced.num_strategies()).collect::<Vec<_>>());
    let outline = tree.outline();
    let result = json!({
        "outline": outline,
        "tree": tree.nested(),
        "terminal_paths": strategies,
    });
    let text = format!("{outline}terminal paths: {}\n", strategies.join(" "));
    Ok(Done::ok(result, text))
}

fn greedy(game: &Game, order: Option<&[usize]>, all: bool) -> Result<Done, Failure> {
    let form = game.form();
    if all {
        let certs = greedy_certificates(game);
        let mut text = format!("greedy profiles ({}):\n", certs.len());
        let mut rows = Vec::new();
        for (profile, sequence) in &certs {
            let _ = writeln!(text, "  {}  arrivals: {}", profile.display(form), labels(form, sequence).join(" "));
            rows.push(json!({
                "profile": labels(form, profile.strategies()),
                "arrivals": labels(form, sequence),
            }));
        }
        return Ok(Done::ok(json!({ "count": certs.len(), "profiles": rows }), text));
    }
    let order = match order {
        Some(o) => ArrivalOrder(o.to_vec()),
        None => ArrivalOrder::identity(game.players()),
    };
    let profile = greedy_run(game, &order, &TieBreak::LowestIndex)?;
    let canonical = profile.canonical();
    let utilities: Vec<Value> =
        (0..game.players()).map(|i| game.utility(&profile, i).map(|u| rational(&u))).collect::<Result<_, _>>()?;
    let text = format!(
        "order: {}\nprofile: {}\ncanonical: {}\n",
        order.players().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","),
        labels(form, profile.choices()).join(","),
        canonical.display(form)
    );
    let result = json!({
        "order": order.players(),
        "tie_break": "lowest_index",
        "profile": labels(form, profile.choices()),
        "canonical": labels(form, canonical.strategies()),
        "utilities": utilities,
    });
    Ok(Done::ok(result, text))
}

fn nash(game: &Game, strong: bool) -> Result<Done, Failure> {
    let form = game.form();
    let ne = enumerate_nash(game);
    let mut text = format!("nash ({}): {}\n", ne.len(), profile_lines(form, &ne));
    let mut result = Map::new();
    result.insert("nash".into(), profile_list(form, &ne));
    if strong {
        let se = enumerate_strong(game)?;
        let _ = writeln!(text, "strong ({}): {}", se.len(), profile_lines(form, &se));
        result.insert("strong".into(), profile_list(form, &se));
    }
    Ok(Done::ok(Value::Object(result), text))
}

fn compare_cmd(game: &Game, strong: bool) -> Result<Done, Failure> {
    let form = game.form();
    let report = compare(game, strong)?;
    let mut text = format!(
        "classification: {}\ngreedy ({}): {}\nnash ({}): {}\n",
        report.classification,
        report.greedy.len(),
        profile_lines(form, &report.greedy),
        report.nash.len(),
        profile_lines(form, &report.nash)
    );
    let mut result = Map::new();
    result.insert("classification".into(), json!(report.classification.as_str()));
    result.insert("greedy".into(), profile_list(form, &report.greedy));
    result.insert("nash".into(), profile_list(form, &report.nash));
    if let Some(se) = &report.strong {
        let _ = writeln!(text, "strong ({}): {}", se.len(), profile_lines(form, se));
        result.insert("strong".into(), profile_list(form, se));
    }
    Ok(Done::ok(Value::Object(result), text))
}

/// Reads `AB,AC,BC` (strategy names in player order) into a profile.
pub fn parse_profile(form: &GameForm, text: &str) -> Result<StrategyProfile, String> {
    text.split(',')
        .map(|token| {
            let token = token.trim();
            form.find_strategy(token).ok_or_else(|| format!("unknown strategy `{token}`"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(StrategyProfile)
}

fn dynamics(
    game: &Game,
    start: &str,
    mode: ModeArg,
    policy: PolicyArg,
    seed: u64,
    max_steps: Option<usize>,
) -> Result<Done, Failure> {
    let form = game.form();
    let start = parse_profile(form, start).map_err(Failure::usage)?;
    if start.len() != game.players() {
        return Err(Failure::usage(format!(
            "start profile names {} strategies, game has {} players",
            start.len(),
            game.players()
        )));
    }
    let (mode, mode_name) = match mode {
        ModeArg::Br => (ResponseMode::BestResponse, "br"),
        ModeArg::Better => (ResponseMode::BetterResponse, "better"),
    };
    let (policy, policy_name) = match policy {
        PolicyArg::Lowest => (MoverPolicy::LowestIndex, "lowest"),
        PolicyArg::Gain => (MoverPolicy::HighestGain, "gain"),
        PolicyArg::Random => (MoverPolicy::SeededRandom(seed), "random"),
    };
    let cap = max_steps.unwrap_or_else(|| default_max_steps(game));
    let trace = response_dynamics(game, &start, mode, policy, cap)?;
    let mut text = format!("mode: {mode_name}, policy: {policy_name}, max steps: {cap}\n");
    let mut steps = Vec::new();
    for (k, step) in trace.steps.iter().enumerate() {
        let _ = writeln!(
            text,
            "  {}. player {}: {} -> {} ({} -> {})",
            k + 1,
            step.player,
            form.strategy_label(step.from),
            form.strategy_label(step.to),
            format_rational(&step.utility_before),
            format_rational(&step.utility_after)
        );
        steps.push(json!({
            "player": step.player,
            "from": form.strategy_label(step.from),
            "to": form.strategy_label(step.to),
            "utility_before": rational(&step.utility_before),
            "utility_after": rational(&step.utility_after),
        }));
    }
    let _ = writeln!(
        text,
        "terminal: {}\nconverged: {} after {} steps",
        labels(form, trace.terminal.choices()).join(","),
        trace.converged,
        trace.steps.len()
    );
    let result = json!({
        "mode": mode_name,
        "policy": policy_name,
        "seed": seed,
        "max_steps": cap,
        "start": labels(form, start.choices()),
        "steps": steps,
        "terminal": labels(form, trace.terminal.choices()),
        "converged": trace.converged,
    });
    Ok(Done::ok(result, text))
}

fn synthesize(form: &GameForm) -> Result<Done, Failure> {
    let cert = synthesize_counterexample(form)?;
    let game = &cert.game;
    let b = cert.bad_config;
    let r = cert.roles;
    let name = |i: usize| form.resource_name(i).to_string();
    let greedy = crate::dynamics::greedy_enumerate(game);
    let nash = enumerate_nash(game);
    let file = serialize_game(game);
    let result = json!({
        "case": cert.case.as_str(),
        "side": cert.side.as_str(),
        "bad_configuration": {
            "A": name(b.resource_a),
            "B": name(b.resource_b),
            "s1": form.strategy_label(b.s1),
            "s2": form.strategy_label(b.s2),
            "s3": form.strategy_label(b.s3),
        },
        "roles": {
            "A": name(r.a),
            "C": name(r.c),
            "D": r.d.map(name),
            "E": r.e.map(name),
            "s1": form.strategy_label(r.s1),
            "s2": form.strategy_label(r.s2),
            "s3": form.strategy_label(r.s3),
            "s4": r.s4.map(|s| form.strategy_label(s)),
        },
        "witness": labels(form, cert.witness.strategies()),
        "greedy": profile_list(form, &greedy),
        "nash": profile_list(form, &nash),
        "game_file": file,
    });
    let mut roles = format!("A={} C={}", name(r.a), name(r.c));
    if let Some(d) = r.d {
        let _ = write!(roles, " D={}", name(d));
    }
    if let Some(e) = r.e {
        let _ = write!(roles, " E={}", name(e));
    }
    let _ = write!(
        roles,
        " s1={} s2={} s3={}",
        form.strategy_label(r.s1),
        form.strategy_label(r.s2),
        form.strategy_label(r.s3)
    );
    if let Some(s4) = r.s4 {
        let _ = write!(roles, " s4={}", form.strategy_label(s4));
    }
    let text = format!(
        "case: {}\nroles: {roles}\nwitness: {} ({})\ngreedy: {}\nnash: {}\n--- game ---\n{file}",
        cert.case.as_str(),
        cert.witness.display(form),
        cert.side.as_str(),
        profile_lines(form, &greedy),
        profile_lines(form, &nash),
    );
    Ok(Done::ok(result, text))
}

fn examples(which: &str) -> Result<Done, Failure> {
    let chosen: Vec<u8> = match which {
        "all" => (1..=5).collect(),
        id => match id.parse::<u8>() {
            Ok(n @ 1..=5) => vec![n],
            _ => return Err(Failure::usage(format!("unknown example `{id}`; expected 1-5 or all"))),
        },
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (game, expected) in catalog::all().into_iter().filter(|(_, e)| chosen.contains(&e.id)) {
        let form = game.form();
        let report = compare(&game, false)?;
        let want_greedy: BTreeSet<_> = expected.greedy_profiles(form).into_iter().collect();
        let want_nash: BTreeSet<_> = expected.nash_profiles(form).into_iter().collect();
        let pass = report.greedy == want_greedy
            && report.nash == want_nash
            && report.classification == expected.classification;
        all_pass &= pass;
        let _ = writeln!(text, "Example {}: {}", expected.id, expected.title);
        let _ = writeln!(text, "  expected Z  = {}", profile_lines(form, &want_greedy));
        let _ = writeln!(text, "  computed Z  = {}", profile_lines(form, &report.greedy));
        let _ = writeln!(text, "  expected NE = {}", profile_lines(form, &want_nash));
        let _ = writeln!(text, "  computed NE = {}", profile_lines(form, &report.nash));
        let _ = writeln!(
            text,
            "  classification: expected {}, computed {}",
            expected.classification, report.classification
        );
        let mut row = json!({
            "id": expected.id,
            "title": expected.title,
            "expected": {
                "greedy": profile_list(form, &want_greedy),
                "nash": profile_list(form, &want_nash),
                "classification": expected.classification.as_str(),
            },
            "computed": {
                "greedy": profile_list(form, &report.greedy),
                "nash": profile_list(form, &report.nash),
                "classification": report.classification.as_str(),
            },
            "pass": pass,
        });
        if game.players() == 2 && expected.id == 4 {
            let matrix = game.bimatrix()?;
            let names = labels(form, &(0..form.num_strategies()).collect::<Vec<_>>());
            text.push_str(&bimatrix_text(&names, &matrix));
            row["bimatrix"] = json!({
                "strategies": names,
                "utilities": matrix
                    .iter()
                    .map(|r| r.iter().map(|(u, v)| json!([format_rational(u), format_rational(v)])).collect())
                    .collect::<Vec<Vec<Value>>>(),
            });
        }
        let _ = writeln!(text, "Example {}: {}", expected.id, if pass { "PASS" } else { "FAIL" });
        rows.push(row);
    }
    let result = json!({ "examples": rows, "all_pass": all_pass });
    Ok(Done { result, text, exit_code: if all_pass { EXIT_OK } else { EXIT_DOMAIN } })
}

fn bimatrix_text(names: &[String], matrix: &[Vec<(Rational, Rational)>]) -> String {
    let cells: Vec<Vec<String>> = matrix
        .iter()
        .map(|r| r.iter().map(|(u, v)| format!("{}, {}", format_rational(u), format_rational(v))).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).chain(names.iter().map(String::len)).max().unwrap_or(1);
    let label = names.iter().map(String::len).max().unwrap_or(1);
    let mut out = format!("  {:label$}", "");
    for n in names {
        let _ = write!(out, " | {n:>width$}");
    }
    out.push('\n');
    for (n, row) in names.iter().zip(&cells) {
        let _ = write!(out, "  {n:label$}");
        for c in row {
            let _ = write!(out, " | {c:>width$}");
        }
        out.push('\n');
    }
    out
}
