//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::adherence;
use crate::automaton::{parse_dfa, Builtin};
use crate::counting::{classify, Growth};
use crate::error::{Error, Result};
use crate::numeration::NumerationSystem;
use crate::oracle;
use crate::reals::{self, format_decimal, format_ratio, parse_ratio, Policy};

#[derive(Parser, Debug)]
#[command(name = "numerans", version, about = "Abstract numeration systems and real-number representations")]
struct Cli {
    #[command(flatten)]
    system: SystemArgs,
    /// Emit CSV instead of a table where supported.
    #[arg(long, global = true)]
    csv: bool,
    /// Run the counting loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SystemArgs {
    /// Builtin language (see `langs`).
    #[arg(long, global = true, conflicts_with = "dfa")]
    lang: Option<String>,
    /// DFA description file.
    #[arg(long, global = true)]
    dfa: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    Leftmost,
    Rightmost,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the builtin languages.
    Langs,
    /// List accepted words of length at most N in genealogical order.
    Enumerate { n: usize },
    /// Rank of a word.
    Val { word: String },
    /// Word of a given rank.
    Rep { n: BigUint },
    /// Growth class and adherence cardinality of a finite automaton.
    Classify,
    /// Least and greatest adherence words with a given prefix.
    Minmax { word: String },
    /// The interval I_y.
    Interval { word: String },
    /// The child intervals of I_y.
    Subdivide { word: String },
    /// A center word of the given length whose interval holds x.
    Encode {
        x: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = PolicyArg::Leftmost)]
        policy: PolicyArg,
    },
    /// Real value of an ultimately periodic word `u(v)^w`.
    Decode { word: String },
    /// Finite-stage ratios val(w[0,n-1]) / v(n) along an infinite word.
    Converge {
        word: String,
        #[arg(short = 'n', default_value_t = 15)]
        n: usize,
    },
    /// Enclosure of the rational-base constant K from G_n.
    Kbound { n: usize },
    /// The two accumulation points of the finite ratios on the balanced language.
    DemoNonprefix {
        #[arg(short = 'n', default_value_t = 1000)]
        blocks: usize,
    },
}

/// Runs the command line, writing to `out` and `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_domain() {
                2
            } else {
                1
            }
        }
    }
}

fn system(cli: &Cli) -> Result<NumerationSystem> {
    let mut sys = match (&cli.system.lang, &cli.system.dfa) {
        (Some(name), None) => NumerationSystem::builtin(name)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            NumerationSystem::new(name, parse_dfa(&text)?)?
        }
        _ => return Err(Error::Malformed("select a language with --lang NAME or --dfa FILE".into())),
    };
    if cli.sequential {
        sys.set_parallel(false);
    }
    Ok(sys)
}

fn io(e: std::io::Error) -> Error {
    Error::Malformed(format!("output error: {e}"))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Langs => {
            for (name, about) in Builtin::NAMES {
                writeln!(out, "{name:<12} {about}").map_err(io)?;
            }
        }
        Command::Enumerate { n } => {
            let sys = system(cli)?;
            let lang = oracle::enumerate_upto(sys.automaton(), *n)?;
            if cli.csv {
                writeln!(out, "rank,word").map_err(io)?;
            }
            for (rank, w) in lang.words().iter().enumerate() {
                let sep = if cli.csv { "," } else { "\t" };
                writeln!(out, "{rank}{sep}{}", sys.render(w)).map_err(io)?;
            }
        }
        Command::Val { word } => {
            let sys = system(cli)?;
            let w = sys.parse_word(word)?;
            writeln!(out, "{}", sys.value_of(&w)?).map_err(io)?;
        }
        Command::Rep { n } => {
            let sys = system(cli)?;
            writeln!(out, "{}", sys.render(&sys.word_at(n))).map_err(io)?;
        }
        Command::Classify => {
            let sys = system(cli)?;
            let c = classify(sys.automaton())?;
            let growth = match c.growth {
                Growth::Polynomial { degree } => format!("polynomial (degree {degree})"),
                Growth::Exponential => "exponential".into(),
            };
            let yes = |b: bool| if b { "yes" } else { "no" };
            writeln!(out, "growth: {growth}").map_err(io)?;
            writeln!(out, "uncountable adherence: {}", yes(c.uncountable_adherence)).map_err(io)?;
            writeln!(out, "uncountable L_inf: {}", yes(c.uncountable_linfty)).map_err(io)?;
        }
        Command::Minmax { word } => {
            let sys = system(cli)?;
            let y = sys.parse_word(word)?;
            let m = adherence::min_word(&sys, &y)?;
            let big = adherence::max_word(&sys, &y)?;
            writeln!(out, "m: {}", m.render(sys.automaton())).map_err(io)?;
            writeln!(out, "M: {}", big.render(sys.automaton())).map_err(io)?;
        }
        Command::Interval { word } => {
            let sys = system(cli)?;
            let i = reals::interval_of(&sys, &sys.parse_word(word)?)?;
            writeln!(out, "{}", i.render(sys.automaton())).map_err(io)?;
        }
        Command::Subdivide { word } => {
            let sys = system(cli)?;
            for i in reals::subdivide(&sys, &sys.parse_word(word)?)? {
                writeln!(out, "{}", i.render(sys.automaton())).map_err(io)?;
            }
        }
        Command::Encode { x, depth, policy } => {
            let sys = system(cli)?;
            let x = parse_ratio(x)?;
            let policy = match policy {
                PolicyArg::Leftmost => Policy::Leftmost,
                PolicyArg::Rightmost => Policy::Rightmost,
            };
            let y = reals::encode_real(&sys, &x, *depth, policy)?;
            writeln!(out, "{}", sys.render(&y)).map_err(io)?;
        }
        Command::Decode { word } => {
            let sys = system(cli)?;
            let w = sys.automaton().alphabet().parse_up_word(word)?;
            writeln!(out, "{}", reals::value_of_infinite(&sys, &w)?).map_err(io)?;
        }
        Command::Converge { word, n } => {
            let sys = system(cli)?;
            let w = sys.automaton().alphabet().parse_up_word(word)?;
            let table = reals::convergence_table(&sys, &w, *n)?;
            if cli.csv {
                writeln!(out, "n,prefix,val,v,ratio_exact,ratio_dec").map_err(io)?;
            } else {
                writeln!(out, "{:>4}  {:<20} {:>12} {:>12}  {:<9} exact", "n", "prefix", "val", "v", "ratio")
                    .map_err(io)?;
            }
            for row in &table.rows {
                let r = row.ratio();
                let (prefix, dec, exact) = (sys.render(&row.prefix), format_decimal(&r, 5), format_ratio(&r));
                if cli.csv {
                    writeln!(out, "{},{prefix},{},{},{exact},{dec}", row.n, row.val, row.v).map_err(io)?;
                } else {
                    writeln!(out, "{:>4}  {prefix:<20} {:>12} {:>12}  {dec:<9} {exact}", row.n, row.val, row.v)
                        .map_err(io)?;
                }
            }
            if let Some(note) = &table.note {
                writeln!(out, "# {note}").map_err(io)?;
            }
        }
        Command::Kbound { n } => {
            let k = reals::k_enclosure(*n);
            writeln!(out, "{k}").map_err(io)?;
            writeln!(out, "≈ [{}, {}]", format_decimal(k.lo(), 12), format_decimal(k.hi(), 12)).map_err(io)?;
        }
        Command::DemoNonprefix { blocks } => {
            let mut sys = NumerationSystem::builtin("balanced")?;
            if cli.sequential {
                sys.set_parallel(false);
            }
            let (even, odd) = reals::nonprefix_divergence(&sys, *blocks)?;
            writeln!(out, "n = {blocks}").map_err(io)?;
            writeln!(out, "val((ab)^n)/v(2n)     = {}  (accumulation point 3/4)", format_decimal(&even, 5))
                .map_err(io)?;
            writeln!(out, "val((ab)^n a)/v(2n+1) = {}  (accumulation point 3/5)", format_decimal(&odd, 5))
                .map_err(io)?;
        }
    }
    Ok(())
}
