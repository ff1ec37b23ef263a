//! Command-line front end for `shogi-reach`.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use shogi_reach::codec::{self, is_canonical, is_k_canonical, Codec};
use shogi_reach::estimator::{self, BlockResult, EstimateConfig, Tally};
use shogi_reach::movegen::{has_dead_piece, has_two_pawns, in_check, replay};
use shogi_reach::reverse::prev1;
use shogi_reach::search::{search_to_kk, HeuristicParams, ResourceLimits, Verdict};
use shogi_reach::{sfen, theory, Color, Error, Kind, Move, Position, Variant};

const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_LIMIT: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "shogi-reach", version, about = "Count and sample reachable Shogi and Mini Shogi positions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum VariantArg {
    Shogi,
    Minishogi,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Shogi => Variant::Shogi,
            VariantArg::Minishogi => Variant::Minishogi,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
struct SearchArgs {
    /// Weight of non-King pieces on the board.
    #[arg(long, default_value_t = 10.0)]
    a: f64,
    /// Weight of promoted pieces.
    #[arg(long, default_value_t = 10.0)]
    b: f64,
    /// Weight of promoted-piece distance from the promotion zone.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Expanded-node cap per search.
    #[arg(long)]
    max_nodes: Option<usize>,
}

impl SearchArgs {
    fn params(&self) -> HeuristicParams {
        HeuristicParams { a: self.a, b: self.b, c: self.c }
    }

    fn limits(&self) -> ResourceLimits {
        ResourceLimits { max_nodes: self.max_nodes }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the number of K-canonical candidate positions.
    Count {
        #[arg(long, value_enum)]
        variant: VariantArg,
    },
    /// Print the rank of a position.
    Rank {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        sfen: String,
    },
    /// Print the position with a given rank.
    Unrank {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        rank: String,
    },
    /// Run the filters and the reverse search on one position.
    Check {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        sfen: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Include the forward path from a KK position.
        #[arg(long)]
        witness: bool,
    },
    /// List the one-move predecessors of a position.
    Prev {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        sfen: String,
    },
    /// Estimate the number of reachable positions by sampling.
    Estimate {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, env = "SHOGI_REACH_WORKERS", default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = estimator::DEFAULT_BLOCK_SIZE)]
        block_size: u64,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for resumable per-block progress.
        #[arg(long, env = "SHOGI_REACH_CHECKPOINT_DIR")]
        checkpoint: Option<PathBuf>,
        /// JSONL file receiving one record per sample.
        #[arg(long)]
        records: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
        /// No progress on stderr.
        #[arg(long, short)]
        quiet: bool,
    },
    /// Play a move list and report the final position.
    Replay {
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// SFEN or `initial`.
        #[arg(long, default_value = "initial")]
        start: String,
        /// File of moves separated by whitespace; `#` starts a comment.
        #[arg(long)]
        moves: PathBuf,
        /// Moves are in traditional notation (`P-7f`, `Bx3c=`) instead of USI.
        #[arg(long)]
        traditional: bool,
    },
    /// Run a King-King construction and verify it by replay.
    Theory {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, value_enum)]
        demo: Demo,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Demo {
    InitToKk,
    KkPath,
    HandTransfer,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure { code: EXIT_INPUT, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure { code: EXIT_INPUT, message: e.to_string() }
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: msg.into() }
}

fn internal(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_INTERNAL, message: msg.into() }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn print_json(v: &Value) -> Outcome {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(0)
}

fn parse_position(variant: Variant, text: &str) -> Result<Position, Failure> {
    if text == "initial" {
        return Ok(Position::initial(variant));
    }
    let p = sfen::parse(variant, text)?;
    p.validate()?;
    Ok(p)
}

fn usi_list(variant: Variant, moves: &[Move]) -> Vec<String> {
    moves.iter().map(|&m| sfen::move_to_usi(variant, m)).collect()
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Count { variant } => {
            println!("{}", codec::total_count(variant.into()));
            Ok(0)
        }
        Command::Rank { variant, sfen: text } => {
            let p = parse_position(variant.into(), &text)?;
            println!("{}", Codec::get(variant.into()).rank(&p)?);
            Ok(0)
        }
        Command::Unrank { variant, rank } => {
            let r: BigUint = rank.trim().parse().map_err(|_| input(format!("not a decimal rank: {rank}")))?;
            println!("{}", sfen::render(&Codec::get(variant.into()).unrank(&r)?));
            Ok(0)
        }
        Command::Check { variant, sfen: text, search, witness } => check(variant, &text, &search, witness),
        Command::Prev { variant, sfen: text } => {
            let v: Variant = variant.into();
            let p = parse_position(v, &text)?;
            let list: Vec<Value> = prev1(&p)?
                .into_iter()
                .map(|(q, rm)| {
                    json!({
                        "sfen": sfen::render(&q),
                        "move": sfen::move_to_usi(v, rm.forward),
                        "kind": rm.kind,
                        "restored": rm.restored.map(|r| r.sfen()),
                    })
                })
                .collect();
            print_json(&json!({ "count": list.len(), "predecessors": list }))
        }
        Command::Estimate { variant, samples, seed, workers, block_size, out, checkpoint, records, search, quiet } => {
            let run = EstimateRun {
                variant,
                samples,
                seed,
                workers,
                block_size,
                out,
                checkpoint,
                records,
                search,
                quiet,
            };
            estimate(&run)
        }
        Command::Replay { variant, start, moves, traditional } => {
            replay_cmd(variant.into(), &start, &moves, traditional)
        }
        Command::Theory { variant, demo, seed } => theory_demo(variant.into(), demo, seed),
    }
}

fn check(variant: VariantArg, text: &str, search: &SearchArgs, witness: bool) -> Outcome {
    let v: Variant = variant.into();
    let p = parse_position(v, text)?;
    let placement_ok = !has_two_pawns(&p) && !has_dead_piece(&p);
    let check_ok = !in_check(&p, !p.side_to_move());
    let mut out = json!({
        "config": { "command": "check", "variant": variant, "sfen": text, "search": search },
        "canonical": is_canonical(&p),
        "kCanonical": is_k_canonical(&p),
        "placementOk": placement_ok,
        "checkOk": check_ok,
    });
    let mut code = 0;
    if placement_ok && check_ok {
        let res = search_to_kk(&p, &search.params(), &search.limits())?;
        out["verdict"] = json!(res.verdict);
        out["expandedNodes"] = json!(res.expanded_nodes);
        out["maxTraceback"] = json!(res.max_traceback);
        if witness {
            if let Some(w) = &res.witness {
                out["witness"] = json!({ "start": sfen::render(&w.start), "moves": usi_list(v, &w.moves()) });
            }
        }
        if res.verdict == Verdict::ResourceLimit {
            code = EXIT_LIMIT;
        }
    } else {
        out["verdict"] = json!("rejectedByFilter");
    }
    print_json(&out)?;
    Ok(code)
}

struct EstimateRun {
    variant: VariantArg,
    samples: u64,
    seed: u64,
    workers: usize,
    block_size: u64,
    out: Option<PathBuf>,
    checkpoint: Option<PathBuf>,
    records: Option<PathBuf>,
    search: SearchArgs,
    quiet: bool,
}

/// Fields that must agree for a checkpoint to be reused.
fn checkpoint_key(cfg: &EstimateConfig) -> Value {
    json!({
        "variant": cfg.variant,
        "sampleSize": cfg.sample_size,
        "seed": cfg.seed,
        "blockSize": cfg.block_size,
        "params": cfg.params,
        "limits": cfg.limits,
    })
}

fn load_checkpoint(path: &Path, cfg: &EstimateConfig) -> Result<BTreeMap<u64, Tally>, Failure> {
    let mut done = BTreeMap::new();
    if !path.exists() {
        return Ok(done);
    }
    let reader = BufReader::new(File::open(path)?);
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(&line)?;
        if i == 0 {
            if v.get("header") != Some(&checkpoint_key(cfg)) {
                return Err(input(format!("checkpoint {} was written by a different run", path.display())));
            }
            continue;
        }
        // a torn last line from an interrupted write is skipped
        if let Ok(b) = serde_json::from_value::<BlockResult>(v) {
            done.insert(b.block, b.tally);
        }
    }
    Ok(done)
}

fn estimate(run: &EstimateRun) -> Outcome {
    let v: Variant = run.variant.into();
    let mut cfg = EstimateConfig::new(v, run.samples, run.seed);
    cfg.workers = run.workers;
    cfg.block_size = run.block_size;
    cfg.params = run.search.params();
    cfg.limits = run.search.limits();
    if run.samples == 0 || run.workers == 0 || run.block_size == 0 {
        return Err(input("--samples, --workers and --block-size must be positive"));
    }

    let mut done = BTreeMap::new();
    let mut ck_file = None;
    if let Some(dir) = &run.checkpoint {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("estimate-{}-seed{}-n{}-b{}.jsonl", v, run.seed, run.samples, run.block_size));
        done = load_checkpoint(&path, &cfg)?;
        let fresh = !path.exists();
        let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
        if fresh {
            writeln!(f, "{}", json!({ "header": checkpoint_key(&cfg) }))?;
        }
        ck_file = Some(Mutex::new(f));
    }
    let rec_file = match &run.records {
        Some(p) => Some(Mutex::new(OpenOptions::new().create(true).append(true).open(p)?)),
        None => None,
    };

    let total_blocks = cfg.block_count();
    let finished = Mutex::new(done.len() as u64);
    let io_error: Mutex<Option<std::io::Error>> = Mutex::new(None);
    let on_block = |b: &BlockResult| {
        let mut result = Ok(());
        if let Some(f) = &ck_file {
            let line = serde_json::to_string(b).expect("block serializes");
            let mut f = f.lock().unwrap();
            result = writeln!(f, "{line}").and_then(|_| f.flush());
        }
        if let (Some(f), Ok(())) = (&rec_file, &result) {
            let mut f = f.lock().unwrap();
            for r in &b.records {
                if let Err(e) = writeln!(f, "{}", serde_json::to_string(r).expect("record serializes")) {
                    result = Err(e);
                    break;
                }
            }
        }
        if let Err(e) = result {
            io_error.lock().unwrap().get_or_insert(e);
        }
        let mut n = finished.lock().unwrap();
        *n += 1;
        if !run.quiet {
            eprintln!("block {} done ({}/{})", b.block, *n, total_blocks);
        }
    };
    let report = estimator::estimate_with(&cfg, &done, rec_file.is_some(), on_block)?;
    if let Some(e) = io_error.into_inner().unwrap() {
        return Err(e.into());
    }

    let config = json!({
        "command": "estimate",
        "variant": run.variant,
        "samples": run.samples,
        "seed": run.seed,
        "workers": run.workers,
        "blockSize": run.block_size,
        "search": run.search,
        "out": run.out,
        "checkpoint": run.checkpoint,
        "records": run.records,
    });
    let doc = json!({ "runConfig": config, "report": report });
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    match &run.out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(if report.resource_limited > 0 { EXIT_LIMIT } else { 0 })
}

fn replay_cmd(v: Variant, start: &str, path: &Path, traditional: bool) -> Outcome {
    let text = fs::read_to_string(path)?;
    let mut pos = parse_position(v, start)?;
    let tokens: Vec<&str> =
        text.lines().map(|l| l.split('#').next().unwrap_or("")).flat_map(str::split_whitespace).collect();
    let mut played = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        let step = if traditional {
            sfen::resolve_traditional(&pos, tok)
        } else {
            sfen::parse_usi(v, tok).and_then(|m| shogi_reach::next(&pos, m).map(|_| m))
        };
        match step {
            Ok(m) => {
                pos = shogi_reach::next(&pos, m)?;
                played.push(m);
            }
            Err(e) => {
                print_json(&json!({
                    "legal": false,
                    "plies": i,
                    "failedMove": tok,
                    "error": e.to_string(),
                    "position": sfen::render(&pos),
                }))?;
                return Ok(EXIT_INPUT);
            }
        }
    }
    print_json(&json!({
        "legal": true,
        "plies": played.len(),
        "moves": usi_list(v, &played),
        "final": sfen::render(&pos),
        "isKk": shogi_reach::search::is_kk(&pos),
    }))
}

fn verified(start: &Position, moves: &[Move], expect: &Position) -> Result<(), Failure> {
    let end = replay(start, moves)?;
    if &end != expect {
        return Err(internal(format!("replay ended at {} instead of {}", sfen::render(&end), sfen::render(expect))));
    }
    Ok(())
}

fn theory_demo(v: Variant, demo: Demo, seed: u64) -> Outcome {
    let config = json!({ "command": "theory", "variant": v, "demo": demo, "seed": seed });
    match demo {
        Demo::InitToKk => {
            let init = Position::initial(v);
            let a = theory::init_to_kk(v)?;
            let kk = replay(&init, &a)?;
            let b = theory::kk_path(&kk, &theory::kk_before_init(v))?;
            let c = theory::kk_to_init(v)?;
            let all: Vec<Move> = a.iter().chain(&b).chain(&c).copied().collect();
            verified(&init, &all, &init)?;
            print_json(&json!({
                "config": config,
                "initToKk": usi_list(v, &a),
                "kk": sfen::render(&kk),
                "isKk": shogi_reach::search::is_kk(&kk),
                "kkToKkPlies": b.len(),
                "kkToInit": usi_list(v, &c),
                "verified": true,
            }))
        }
        Demo::KkPath => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = theory::random_kk(v, &mut rng);
            let q = theory::random_kk(v, &mut rng);
            let moves = theory::kk_path(&p, &q)?;
            verified(&p, &moves, &q)?;
            print_json(&json!({
                "config": config,
                "from": sfen::render(&p),
                "to": sfen::render(&q),
                "moves": usi_list(v, &moves),
                "verified": true,
            }))
        }
        Demo::HandTransfer => {
            let (tb, tw) = theory::transfer_squares(v);
            let mut hub = Position::empty(v, Color::Black);
            hub.set(tb, Some(shogi_reach::Piece::unpromoted(Kind::King, Color::Black)));
            hub.set(tw, Some(shogi_reach::Piece::unpromoted(Kind::King, Color::White)));
            for &k in &v.kinds()[1..] {
                hub.set_hand(Color::Black, k, v.total_of(k));
            }
            let mut rows = Vec::new();
            for &k in &v.kinds()[1..] {
                let give = theory::hand_transfer_sequence(&hub, k, Color::Black)?;
                let mid = replay(&hub, &give)?;
                let take = theory::hand_transfer_sequence(&mid, k, Color::White)?;
                verified(&mid, &take, &hub)?;
                rows.push(json!({
                    "kind": k.letter().to_string(),
                    "blackToWhite": usi_list(v, &give),
                    "whiteToBlack": usi_list(v, &take),
                }));
            }
            print_json(&json!({ "config": config, "start": sfen::render(&hub), "transfers": rows, "verified": true }))
        }
    }
}
