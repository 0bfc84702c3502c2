use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use inca::balance::{balance, C_BAL_HEIGHT};
use inca::bench::{self, Queries};
use inca::blocktree::{BlockTree, BlockTreeAccessor, DEFAULT_LEAF_THRESHOLD};
use inca::contract::{contract_report, make_contracting};
use inca::dspred::ZFastTrie;
use inca::gen::{self, GrammarScheme, ParseScheme, TextKind};
use inca::grammar_access::{GrammarAccessor, DEFAULT_W};
use inca::parse::{Parse, ParseAccessor};
use inca::rlslp::Rlslp;
use inca::{format, Rational, Text};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Invalid(#[from] inca::Error),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "inca", version, about = "Incongruity-sensitive access to compressed strings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print `q,ell_q` for every position of a text file
    Profile { file: PathBuf },
    /// Run-length grammars
    #[command(subcommand)]
    Rlslp(RlslpCmd),
    /// Accessor over a (balanced) grammar
    #[command(subcommand)]
    Access(AccessCmd),
    /// Block trees over a text file
    #[command(subcommand)]
    Bt(BtCmd),
    /// Parses
    #[command(subcommand)]
    Parse(ParseCmd),
    /// Distance-sensitive predecessor
    #[command(subcommand)]
    Pred(PredCmd),
    /// Per-query CSV for one structure
    Bench(BenchArgs),
    /// Generators
    #[command(subcommand)]
    Gen(GenCmd),
}

#[derive(Args)]
struct PosArgs {
    /// 1-based position
    #[arg(long, required_unless_present = "all")]
    pos: Option<usize>,
    /// Emit a CSV row per position
    #[arg(long)]
    all: bool,
    /// Print cost counters
    #[arg(long)]
    cost: bool,
}

#[derive(Subcommand)]
enum RlslpCmd {
    /// Validate and summarize
    Check { file: PathBuf },
    /// Write the generated text to stdout
    Expand { file: PathBuf },
    /// Access through the leaf partition and predecessor structure
    Access {
        file: PathBuf,
        #[command(flatten)]
        pos: PosArgs,
    },
    /// Write a locally balanced equivalent grammar
    Balance { file: PathBuf },
}

#[derive(Subcommand)]
enum AccessCmd {
    Grammar {
        file: PathBuf,
        #[command(flatten)]
        pos: PosArgs,
    },
}

#[derive(Subcommand)]
enum BtCmd {
    Build {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LEAF_THRESHOLD)]
        threshold: usize,
    },
    Access {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LEAF_THRESHOLD)]
        threshold: usize,
        #[command(flatten)]
        pos: PosArgs,
    },
    Stats {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LEAF_THRESHOLD)]
        threshold: usize,
    },
}

#[derive(Subcommand)]
enum ParseCmd {
    Decode {
        file: PathBuf,
    },
    Access {
        file: PathBuf,
        /// Trie arity
        #[arg(long, default_value_t = DEFAULT_W)]
        arity: u32,
        /// Largest accepted contracting parameter
        #[arg(long, default_value_t = DEFAULT_W as u64)]
        alpha: u64,
        #[command(flatten)]
        pos: PosArgs,
    },
    Stats {
        file: PathBuf,
    },
    /// Rewrite into an alpha-contracting parse
    Contract {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        report: bool,
    },
}

#[derive(Subcommand)]
enum PredCmd {
    /// CSV of `q,pred,delta,k,fat_steps` for queries `1..=max key + 1` (capped by --limit)
    Bench {
        keys: PathBuf,
        #[arg(long, default_value_t = DEFAULT_W)]
        word_size: u32,
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum StructureArg {
    Grammar,
    Blocktree,
    Parse,
}

#[derive(Args)]
struct BenchArgs {
    structure: StructureArg,
    /// Grammar file, text file or parse file
    file: PathBuf,
    /// Random positions instead of all
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_W)]
    arity: u32,
    #[arg(long, default_value_t = DEFAULT_W as u64)]
    alpha: u64,
}

#[derive(Subcommand)]
enum GenCmd {
    /// fibonacci | thue-morse | random | periodic | mutated-repeat
    Text {
        kind: TextKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        sigma: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// greedy-lz | random-bidirectional
    Parse {
        text: PathBuf,
        #[arg(long, default_value = "greedy-lz")]
        scheme: ParseScheme,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// doubling | random-merge
    Grammar {
        text: PathBuf,
        #[arg(long, default_value = "doubling")]
        scheme: GrammarScheme,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn read_str(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn text(path: &Path) -> Result<Text> {
    let t = Text::new(read(path)?);
    if t.is_empty() {
        return Err(inca::Error::Empty.into());
    }
    Ok(t)
}

fn grammar(path: &Path) -> Result<Rlslp> {
    Ok(format::read_grammar(&read_str(path)?)?)
}

fn parse(path: &Path) -> Result<Parse> {
    Ok(format::read_parse(&read_str(path)?)?)
}

fn out(bytes: &[u8]) -> Result<()> {
    std::io::stdout().write_all(bytes).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

/// Either one position or a CSV over all of them.
fn positions<F>(n: usize, p: &PosArgs, header: &str, mut row: F) -> Result<()>
where
    F: FnMut(usize) -> inca::Result<(u8, String)>,
{
    let mut s = String::new();
    if p.all {
        s.push_str(header);
        s.push('\n');
        for q in 1..=n {
            let (c, cost) = row(q)?;
            s.push_str(&format!("{q},{},{cost}\n", c as char));
        }
    } else {
        let q = p.pos.expect("clap enforces --pos or --all");
        let (c, cost) = row(q)?;
        s.push(c as char);
        if p.cost {
            s.push_str(&format!("\t{cost}"));
        }
        s.push('\n');
    }
    out(s.as_bytes())
}

fn grammar_access(file: &Path, p: &PosArgs) -> Result<()> {
    let a = GrammarAccessor::build(&grammar(file)?)?;
    positions(a.len(), p, "q,char,pred_k,descent_steps", |q| {
        a.access(q).map(|(c, k)| (c, format!("{},{}", k.pred_k, k.descent_steps)))
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Profile { file } => {
            let prof = text(&file)?.repeat_profile();
            let mut s = String::from("q,ell_q\n");
            for (i, l) in prof.ell.iter().enumerate() {
                s.push_str(&format!("{},{l}\n", i + 1));
            }
            out(s.as_bytes())
        }
        Cmd::Rlslp(RlslpCmd::Check { file }) => {
            let g = grammar(&file)?;
            let s = format!(
                "ok rules={} n={} height={} balance_factor={:.3} locally_balanced={}\n",
                g.size(),
                g.len(),
                g.height(g.start()),
                g.balance_factor(),
                g.is_locally_balanced(C_BAL_HEIGHT)
            );
            out(s.as_bytes())
        }
        Cmd::Rlslp(RlslpCmd::Expand { file }) => out(grammar(&file)?.expand().as_bytes()),
        Cmd::Rlslp(RlslpCmd::Access { file, pos }) | Cmd::Access(AccessCmd::Grammar { file, pos }) => {
            grammar_access(&file, &pos)
        }
        Cmd::Rlslp(RlslpCmd::Balance { file }) => out(format::write_grammar(&balance(&grammar(&file)?)?).as_bytes()),
        Cmd::Bt(BtCmd::Build { file, threshold }) | Cmd::Bt(BtCmd::Stats { file, threshold }) => {
            let st = BlockTree::build(&text(&file)?, threshold)?.stats();
            let s = format!(
                "n={} leaves={} levels={} blocks={} pruned={} explicit={} pruning_ratio={:.4}\n",
                st.n, st.leaves, st.levels, st.blocks, st.pruned, st.explicit, st.pruning_ratio
            );
            out(s.as_bytes())
        }
        Cmd::Bt(BtCmd::Access { file, threshold, pos }) => {
            let a = BlockTreeAccessor::build(BlockTree::build(&text(&file)?, threshold)?)?;
            positions(a.tree().n(), &pos, "q,char,pred_k,steps,shifts", |q| {
                a.access(q).map(|(c, k)| (c, format!("{},{},{}", k.pred_k, k.steps, k.shifts)))
            })
        }
        Cmd::Parse(ParseCmd::Decode { file }) => out(parse(&file)?.decode()?.as_bytes()),
        Cmd::Parse(ParseCmd::Access { file, arity, alpha, pos }) => {
            let a = ParseAccessor::build(parse(&file)?, arity, Rational::new(alpha, 1))?;
            positions(a.parse().n(), &pos, "q,char,pred_k,iterations,trie_edges", |q| {
                a.access(q).map(|(c, k)| (c, format!("{},{},{}", k.pred_k, k.iterations, k.trie_edges)))
            })
        }
        Cmd::Parse(ParseCmd::Stats { file }) => {
            let p = parse(&file)?;
            let hp = p.height_profile()?;
            let s = format!(
                "phrases={} n={} max_height={} min_alpha={} direction={:?} max_explicit={}\n",
                p.size(),
                p.n(),
                hp.max(),
                p.min_alpha(),
                p.direction(),
                p.max_explicit_len()
            );
            out(s.as_bytes())
        }
        Cmd::Parse(ParseCmd::Contract { input, output, alpha, report }) => {
            let p = parse(&input)?;
            let c = make_contracting(&p, alpha)?;
            std::fs::write(&output, format::write_parse(&c))
                .map_err(|source| CliError::Io { path: output.clone(), source })?;
            if report {
                let r = contract_report(&p, &c)?;
                let s = format!(
                    "size_in={} size_out={} size_ratio={:.3} max_height_in={} max_height_out={} min_alpha={} attractor={}\n",
                    r.size_in,
                    r.size_out,
                    r.size_out as f64 / r.size_in as f64,
                    r.max_height_in,
                    r.max_height_out,
                    r.min_alpha_out,
                    r.attractor_len
                );
                out(s.as_bytes())?;
            }
            Ok(())
        }
        Cmd::Pred(PredCmd::Bench { keys, word_size, limit }) => {
            let keys = format::read_keys(&read_str(&keys)?)?;
            let t = ZFastTrie::build(&keys, word_size)?;
            let top = keys.iter().copied().max().unwrap_or(0).saturating_add(1).min(limit);
            let queries: Vec<u64> = (1..=top).collect();
            out(bench::bench_pred(&t, &queries)?.as_bytes())
        }
        Cmd::Bench(b) => {
            let queries = match b.sample {
                Some(count) => Queries::Sample { count, seed: b.seed },
                None => Queries::All,
            };
            let recs = match b.structure {
                StructureArg::Grammar => {
                    let a = GrammarAccessor::build(&grammar(&b.file)?)?;
                    let ell = a.grammar().expand().repeat_profile();
                    bench::bench_grammar(&a, &ell, queries)?
                }
                StructureArg::Blocktree => {
                    let t = text(&b.file)?;
                    let a = BlockTreeAccessor::build(BlockTree::build(&t, DEFAULT_LEAF_THRESHOLD)?)?;
                    bench::bench_blocktree(&a, &t.repeat_profile(), queries)?
                }
                StructureArg::Parse => {
                    let p = parse(&b.file)?;
                    let ell = p.decode()?.repeat_profile();
                    let hp = p.height_profile()?;
                    let a = ParseAccessor::build(p, b.arity, Rational::new(b.alpha, 1))?;
                    bench::bench_parse(&a, &ell, &hp, queries)?
                }
            };
            out(bench::to_csv(&recs).as_bytes())
        }
        Cmd::Gen(GenCmd::Text { kind, n, sigma, seed }) => out(gen::text(kind, n, sigma, seed).as_bytes()),
        Cmd::Gen(GenCmd::Parse { text: f, scheme, seed }) => {
            out(format::write_parse(&gen::parse(&text(&f)?, scheme, seed)).as_bytes())
        }
        Cmd::Gen(GenCmd::Grammar { text: f, scheme, seed }) => {
            out(format::write_grammar(&gen::grammar(&text(&f)?, scheme, seed)?).as_bytes())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("inca: {e}");
            match e {
                CliError::Io { .. } => ExitCode::from(2),
                CliError::Invalid(_) => ExitCode::from(1),
            }
        }
    }
}
