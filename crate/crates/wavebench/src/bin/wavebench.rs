//! Command-line front end: verification suites, game solving, tree
//! assembly and Packing/Covering partitions.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wavebench::game::{
    play_trace, solve_covering_game, solve_packing_game, CoverinaPolicy, GameKind, PackerPolicy,
    Player, SolveResult, Strategy, Transcript,
};
use wavebench::packing::solve_packing_covering;
use wavebench::parse;
use wavebench::promise::Promise;
use wavebench::suites::{run_suite, SuiteSpec, SUITES};
use wavebench::tactics::Tactic;
use wavebench::tree::PairTree;

#[derive(Parser)]
#[command(name = "wavebench", about = "finite matroid packing/covering workbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`
    suite: String,
    /// Max ground size
    #[arg(long)]
    n: Option<usize>,
    /// Max tree nodes
    #[arg(long)]
    nodes: Option<usize>,
    /// Trial count
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Solve the Packing game (plain promise) or Covering game (starred)
    SolveGame {
        /// Pair-tree file
        file: PathBuf,
        /// Promise: bot, M-, M+, N-, N+, top, optionally starred (e.g. M-*)
        #[arg(long)]
        promise: String,
        /// Replay the canonical play and print the transcript
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
    /// Assemble a pair-tree into its matroid pair
    Assemble {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
    /// Compute the Packing/Covering partition of a matroid pair
    PackingCovering {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> wavebench::Result<ExitCode> {
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::SolveGame { file, promise, trace, emit } => {
            let text = read(&file)?;
            let tree = parse::parse_pairtree(&text)?;
            let p = Promise::parse(&promise)?;
            solve_game(&tree, p, trace, emit)
        }
        Command::Assemble { file, emit } => {
            let text = read(&file)?;
            let tree = parse::parse_pairtree(&text)?;
            let pair = tree.assemble()?;
            match emit {
                Emit::Text => print!("{}", parse::serialize_pair(&pair)),
                Emit::Json => println!(
                    "{}",
                    serde_json::json!({
                        "ground": pair.ground().names(),
                        "m": parse::definition_string(&pair.m),
                        "n": parse::definition_string(&pair.n),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::PackingCovering { file, emit } => {
            let text = read(&file)?;
            let pair = parse::parse_pair(&text)?;
            let pc = solve_packing_covering(&pair)?;
            let g = pair.ground();
            match emit {
                Emit::Text => {
                    println!("P = {}", g.show(pc.p));
                    println!("  packing: S^M = {}, S^N = {}", g.show(pc.packing.side_m), g.show(pc.packing.side_n));
                    println!("Q = {}", g.show(pc.q));
                    println!("  covering: I_M = {}, I_N = {}", g.show(pc.cover_m), g.show(pc.cover_n));
                }
                Emit::Json => println!(
                    "{}",
                    serde_json::json!({
                        "p": g.show(pc.p),
                        "packing": { "side_m": g.show(pc.packing.side_m), "side_n": g.show(pc.packing.side_n) },
                        "q": g.show(pc.q),
                        "covering": { "i_m": g.show(pc.cover_m), "i_n": g.show(pc.cover_n) },
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read(path: &PathBuf) -> wavebench::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| wavebench::Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))
}

fn verify(args: VerifyArgs) -> wavebench::Result<ExitCode> {
    let names: Vec<&str> =
        if args.suite == "all" { SUITES.to_vec() } else { vec![args.suite.as_str()] };
    let mut all_passed = true;
    for name in names {
        let mut spec = SuiteSpec::new(name);
        spec.seed = args.seed;
        if let Some(n) = args.n {
            spec.n = n;
        }
        if let Some(nodes) = args.nodes {
            spec.nodes = nodes;
        }
        if let Some(trials) = args.trials {
            spec.trials = trials;
        }
        let report = run_suite(&spec)?;
        match args.emit {
            Emit::Text => print!("{}", report.to_text()),
            Emit::Json => println!("{}", report.to_json()),
        }
        all_passed &= report.passed();
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn show_tactic(tree: &PairTree, node: usize, t: &Tactic, starred: bool) -> String {
    let g = tree.m.nodes[node].matroid.ground();
    let phi: Vec<String> = t
        .phi
        .entries()
        .map(|(f, b)| format!("{}: {}", g.name(f), Promise { base: b, starred }))
        .collect();
    let wave = format!(
        "({}, {}, {})",
        g.show(t.wave.x),
        g.show(t.wave.side_m),
        g.show(t.wave.side_n)
    );
    let mut out = format!("phi {{{}}}, wave {}", phi.join(", "), wave);
    if let Some(c) = t.circuit_m {
        out.push_str(&format!(", C^M = {}", g.show(c)));
    }
    if let Some(c) = t.circuit_n {
        out.push_str(&format!(", C^N = {}", g.show(c)));
    }
    out
}

fn render_transcript(tree: &PairTree, tr: &Transcript, covering: bool) -> String {
    // in the covering game the tactic player is Coverina
    let mover = if covering { "Coverina" } else { "Packer" };
    let challenger = if covering { "Packer" } else { "Coverina" };
    let show_player = |p: Player| match (p, covering) {
        (Player::Packer, false) | (Player::Coverina, true) => mover,
        _ => challenger,
    };
    let mut out = String::new();
    for (k, mv) in tr.moves.iter().enumerate() {
        let id = &tree.m.nodes[mv.state.node].id;
        let promise = Promise { base: mv.state.promise, starred: covering };
        out.push_str(&format!(
            "move {}: {mover} at node {id} attains {promise}: {}\n",
            2 * k + 1,
            show_tactic(tree, mv.state.node, &mv.tactic, covering)
        ));
        if let Some((f, m_strong, n_strong)) = mv.challenge {
            let g = tree.m.nodes[mv.state.node].matroid.ground();
            out.push_str(&format!(
                "move {}: {challenger} challenges {} ({}, {})\n",
                2 * k + 2,
                g.name(f),
                if m_strong { "M-strong" } else { "M-weak" },
                if n_strong { "N-strong" } else { "N-weak" },
            ));
        }
    }
    out.push_str(&format!(
        "winner: {} ({} stuck)\n",
        show_player(tr.winner),
        show_player(tr.stuck)
    ));
    out
}

fn solve_game(tree: &PairTree, p: Promise, trace: bool, emit: Emit) -> wavebench::Result<ExitCode> {
    let covering = p.starred;
    let result: SolveResult =
        if covering { solve_covering_game(tree, p)? } else { solve_packing_game(tree, p)? };
    // board the transcripts run on (dual for the covering game)
    let board_tree = if covering { tree.dual() } else { tree.clone() };
    let winner_name = match result.winner {
        Player::Packer => "Packer",
        Player::Coverina => "Coverina",
    };
    let table: Vec<(String, Vec<String>)> = (0..tree.len())
        .map(|t| {
            let id = board_tree.m.nodes[t].id.clone();
            let promises = result
                .table
                .promises_at(t)
                .into_iter()
                .map(|b| Promise { base: b, starred: covering }.to_string())
                .collect();
            (id, promises)
        })
        .collect();
    let transcript = if trace {
        let (packer_policy, coverina_policy) = match &result.strategy {
            Strategy::Packer(s) => (PackerPolicy::Strategy(s.clone()), CoverinaPolicy::FirstLegal),
            Strategy::Coverina(s) => (PackerPolicy::FirstLegal, CoverinaPolicy::Strategy(s.clone())),
        };
        Some(play_trace(
            &board_tree,
            Promise::plain(p.base),
            &packer_policy,
            &coverina_policy,
        )?)
    } else {
        None
    };
    match emit {
        Emit::Text => {
            let kind = match result.kind {
                GameKind::Packing => "Packing game",
                GameKind::Covering => "Covering game",
            };
            println!("{kind} G{}({}) on {} nodes", if covering { "*" } else { "" }, p, tree.len());
            println!("winner: {winner_name}");
            println!("tactic-player wins from:");
            for (id, promises) in &table {
                println!("  {id}: {{{}}}", promises.join(", "));
            }
            if let Some(tr) = &transcript {
                print!("{}", render_transcript(&board_tree, tr, covering));
            }
        }
        Emit::Json => {
            let tr_json = transcript.as_ref().map(|tr| {
                let moves: Vec<serde_json::Value> = tr
                    .moves
                    .iter()
                    .map(|mv| {
                        let g = board_tree.m.nodes[mv.state.node].matroid.ground();
                        serde_json::json!({
                            "node": board_tree.m.nodes[mv.state.node].id,
                            "promise": Promise { base: mv.state.promise, starred: covering }.to_string(),
                            "tactic": show_tactic(&board_tree, mv.state.node, &mv.tactic, covering),
                            "challenge": mv.challenge.map(|(f, ms, ns)| serde_json::json!({
                                "edge": g.name(f),
                                "m_strong": ms,
                                "n_strong": ns,
                            })),
                        })
                    })
                    .collect();
                serde_json::json!({
                    "moves": moves,
                    "winner": format!("{:?}", tr.winner),
                    "stuck": format!("{:?}", tr.stuck),
                })
            });
            println!(
                "{}",
                serde_json::json!({
                    "game": format!("{:?}", result.kind),
                    "promise": p.to_string(),
                    "winner": winner_name,
                    "table": table.iter().map(|(id, ps)| serde_json::json!({"node": id, "promises": ps})).collect::<Vec<_>>(),
                    "trace": tr_json,
                })
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
