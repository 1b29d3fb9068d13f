mod commands;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kbraid_core::biquandle::FlatBiquandle;
use kbraid_core::vssb::{Family as VssbFamily, PhiCheckOptions};
use kbraid_core::*;
use serde::Serialize;

use commands::Outcome;
use report::Report;

#[derive(Parser, Debug)]
#[command(name = "kbraid", version, about = "Free k-braids, k-biquandles and virtual singular braids")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand, Debug)]
enum Top {
    /// Words in G_n^k.
    #[command(subcommand)]
    Gnk(GnkCmd),
    /// Finite k-biquandles.
    #[command(subcommand)]
    Biq(BiqCmd),
    /// Colorings and binding numbers.
    #[command(subcommand)]
    Color(ColorCmd),
    /// The map from virtual singular braids to G_n^2.
    #[command(subcommand)]
    Vssb(VssbCmd),
}

#[derive(Args, Debug, Serialize)]
struct WordArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Word such as "a{1,2} a{2,3}"; "e" is the empty word.
    word: Option<String>,
    /// Read the word from a file with an `n=.. k=..` header line.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl WordArgs {
    fn load(&self) -> Result<FreeKBraidWord> {
        commands::load_word(self.n, self.k, self.word.as_deref(), self.file.as_deref())
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Expect {
    Equal,
    Distinct,
    Unknown,
}

impl Expect {
    fn label(self) -> &'static str {
        match self {
            Expect::Equal => "equal",
            Expect::Distinct => "distinct",
            Expect::Unknown => "unknown",
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct EqArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    left: Option<String>,
    right: Option<String>,
    #[arg(long)]
    left_file: Option<PathBuf>,
    #[arg(long)]
    right_file: Option<PathBuf>,
    /// Moves explored outward from each side.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Cap on distinct words visited.
    #[arg(long, default_value_t = 200_000)]
    nodes: usize,
    /// Exit 1 unless the verdict matches.
    #[arg(long, value_enum)]
    expect: Option<Expect>,
}

#[derive(Subcommand, Debug)]
enum GnkCmd {
    /// Free reduction (cancel adjacent equal letters).
    Reduce(WordArgs),
    /// Parity vector over all k-subsets.
    Parity(WordArgs),
    /// Bounded search for equality of two words.
    Eq(EqArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MakeKind {
    Gaussian,
    Involution,
    Conditional,
    Flat,
    Swap,
}

#[derive(Args, Debug, Serialize)]
struct MakeArgs {
    #[arg(value_enum)]
    kind: MakeKind,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Involution as transpositions, e.g. "0-1,2-3".
    #[arg(long, default_value = "")]
    tau: String,
    /// Multiplicity vectors separated by ';', entries by ',', e.g. "1;2".
    #[arg(long)]
    mu: Option<String>,
    /// Row-major m*m table of the flat operation x*y.
    #[arg(long)]
    star: Option<String>,
    /// Row-major table of the second operation; defaults to --star.
    #[arg(long)]
    circ: Option<String>,
    /// Also write the table as a biquandle file.
    #[arg(long)]
    save: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum BiqCmd {
    /// Check the k-biquandle axioms of a table file.
    Check {
        file: PathBuf,
    },
    /// Build a table from one of the known constructions.
    Make(MakeArgs),
    /// Decide isomorphism of two tables.
    Iso {
        left: PathBuf,
        right: PathBuf,
        /// Exit 1 unless the answer matches.
        #[arg(long)]
        expect: Option<bool>,
    },
    /// Enumerate k-biquandles of order m up to isomorphism.
    Enum {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Skip the identity map.
        #[arg(long)]
        nontrivial: bool,
        #[arg(long, default_value_t = kbraid_core::enumerate::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// List the constructed tables of a given arity.
    Library {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Args, Debug, Serialize)]
struct ColorArgs {
    /// Biquandle table file.
    #[arg(long)]
    biquandle: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    word: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
}

impl ColorArgs {
    fn load(&self) -> Result<(FreeKBraidWord, FiniteKBiquandle)> {
        let b = commands::load_biquandle_file(&self.biquandle, false)?;
        let w = commands::load_word(self.n, Some(b.k()), self.word.as_deref(), self.file.as_deref())?;
        if w.k() != b.k() {
            bail!("word has arity {} but the biquandle has arity {}", w.k(), b.k());
        }
        Ok((w, b))
    }
}

#[derive(Subcommand, Debug)]
enum ColorCmd {
    /// Binding number for source colors chi1 and target colors chi2.
    Bind {
        #[command(flatten)]
        args: ColorArgs,
        #[arg(long)]
        chi1: String,
        #[arg(long)]
        chi2: String,
        /// Include every edge color.
        #[arg(long)]
        coloring: bool,
    },
    /// Number of good colorings.
    Count {
        #[command(flatten)]
        args: ColorArgs,
    },
    /// Homomorphisms from the fundamental presentation, compared to colorings.
    Homs {
        #[command(flatten)]
        args: ColorArgs,
    },
}

#[derive(Args, Debug, Serialize)]
struct VssbWordArgs {
    #[arg(long)]
    n: usize,
    /// Word in a1.., b1.., c1.., C1.., v1..; "e" is the identity.
    word: String,
}

#[derive(Subcommand, Debug)]
enum VssbCmd {
    /// Image in G_n^2.
    Phi(VssbWordArgs),
    /// Underlying permutation.
    Rho(VssbWordArgs),
    /// Binding number of the image under a 2-biquandle.
    Invariant {
        #[command(flatten)]
        args: VssbWordArgs,
        #[arg(long)]
        biquandle: PathBuf,
        #[arg(long)]
        chi1: String,
        #[arg(long)]
        chi2: String,
    },
    /// Check that every defining relation is respected.
    Verify {
        #[arg(long, value_parser = parse_family)]
        family: VssbFamily,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 200_000)]
        nodes: usize,
        /// Random states per relation besides the base state.
        #[arg(long, default_value_t = 7)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random pure-word pairs for the multiplicativity check.
        #[arg(long, default_value_t = 64)]
        pure_samples: usize,
    },
}

fn parse_family(s: &str) -> std::result::Result<VssbFamily, String> {
    s.parse::<VssbFamily>().map_err(|e| e.to_string())
}

fn params<T: Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("arguments are serializable")
}

fn run(command: Top) -> Result<(String, serde_json::Value, Outcome)> {
    use serde_json::json;
    Ok(match command {
        Top::Gnk(GnkCmd::Reduce(a)) => {
            let w = a.load()?;
            ("gnk reduce".into(), params(&a), commands::gnk_reduce(&w))
        }
        Top::Gnk(GnkCmd::Parity(a)) => {
            let w = a.load()?;
            ("gnk parity".into(), params(&a), commands::gnk_parity(&w))
        }
        Top::Gnk(GnkCmd::Eq(a)) => {
            let w1 = commands::load_word(a.n, a.k, a.left.as_deref(), a.left_file.as_deref())?;
            let w2 = commands::load_word(a.n, a.k, a.right.as_deref(), a.right_file.as_deref())?;
            let budget = SearchBudget {
                depth: a.depth,
                nodes: a.nodes,
            };
            let out = commands::gnk_eq(&w1, &w2, budget, a.expect.map(Expect::label))?;
            ("gnk eq".into(), params(&a), out)
        }
        Top::Biq(BiqCmd::Check { file }) => {
            let b = commands::load_biquandle_file(&file, true)?;
            ("biq check".into(), json!({"file": file}), commands::biq_check(&b))
        }
        Top::Biq(BiqCmd::Make(a)) => {
            let (name, b) = make(&a)?;
            if let Some(path) = &a.save {
                fs::write(path, b.to_json()).with_context(|| format!("writing {}", path.display()))?;
            }
            ("biq make".into(), params(&a), commands::biq_make(&b, &name))
        }
        Top::Biq(BiqCmd::Iso { left, right, expect }) => {
            let a = commands::load_biquandle_file(&left, false)?;
            let b = commands::load_biquandle_file(&right, false)?;
            let p = json!({"left": left, "right": right, "expect": expect});
            ("biq iso".into(), p, commands::biq_iso(&a, &b, expect))
        }
        Top::Biq(BiqCmd::Enum {
            m,
            k,
            nontrivial,
            budget,
        }) => {
            let p = json!({"m": m, "k": k, "nontrivial": nontrivial, "budget": budget});
            ("biq enum".into(), p, commands::biq_enum(m, k, nontrivial, budget)?)
        }
        Top::Biq(BiqCmd::Library { k }) => ("biq library".into(), json!({"k": k}), commands::biq_library(k)),
        Top::Color(ColorCmd::Bind {
            args,
            chi1,
            chi2,
            coloring,
        }) => {
            let (w, b) = args.load()?;
            let c1 = commands::parse_list(&chi1)?;
            let c2 = commands::parse_list(&chi2)?;
            let mut p = params(&args);
            p["chi1"] = json!(c1);
            p["chi2"] = json!(c2);
            let out = commands::color_bind(&w, &b, &c1, &c2, coloring)?;
            ("color bind".into(), p, out)
        }
        Top::Color(ColorCmd::Count { args }) => {
            let (w, b) = args.load()?;
            ("color count".into(), params(&args), commands::color_count(&w, &b)?)
        }
        Top::Color(ColorCmd::Homs { args }) => {
            let (w, b) = args.load()?;
            ("color homs".into(), params(&args), commands::color_homs(&w, &b)?)
        }
        Top::Vssb(VssbCmd::Phi(a)) => {
            let w = VssbWord::parse(a.n, &a.word)?;
            ("vssb phi".into(), params(&a), commands::vssb_phi(&w))
        }
        Top::Vssb(VssbCmd::Rho(a)) => {
            let w = VssbWord::parse(a.n, &a.word)?;
            ("vssb rho".into(), params(&a), commands::vssb_rho(&w))
        }
        Top::Vssb(VssbCmd::Invariant {
            args,
            biquandle,
            chi1,
            chi2,
        }) => {
            let w = VssbWord::parse(args.n, &args.word)?;
            let b = commands::load_biquandle_file(&biquandle, false)?;
            let c1 = commands::parse_list(&chi1)?;
            let c2 = commands::parse_list(&chi2)?;
            let mut p = params(&args);
            p["biquandle"] = json!(biquandle);
            p["chi1"] = json!(c1);
            p["chi2"] = json!(c2);
            ("vssb invariant".into(), p, commands::vssb_invariant(&w, &b, &c1, &c2)?)
        }
        Top::Vssb(VssbCmd::Verify {
            family,
            n,
            depth,
            nodes,
            samples,
            seed,
            pure_samples,
        }) => {
            let opts = PhiCheckOptions {
                samples,
                seed,
                budget: SearchBudget { depth, nodes },
                pure_samples,
            };
            let p = json!({
                "family": family, "n": n, "depth": depth, "nodes": nodes,
                "samples": samples, "seed": seed, "pure_samples": pure_samples,
            });
            ("vssb verify".into(), p, commands::vssb_verify(n, family, opts)?)
        }
    })
}

fn make(a: &MakeArgs) -> Result<(String, FiniteKBiquandle)> {
    let need_k = || a.k.context("--k is required");
    let need_m = || a.m.context("--m is required");
    Ok(match a.kind {
        MakeKind::Gaussian => {
            let k = need_k()?;
            (format!("gaussian({k})"), gaussian(k)?)
        }
        MakeKind::Swap => {
            let m = need_m()?;
            (format!("swap({m})"), swap(m)?)
        }
        MakeKind::Involution => {
            let (k, m) = (need_k()?, need_m()?);
            let tau = commands::parse_involution(m, &a.tau)?;
            (format!("involution({tau})"), involution_kbiquandle(&tau, k)?)
        }
        MakeKind::Conditional => {
            let (k, m) = (need_k()?, need_m()?);
            let tau = commands::parse_involution(m, &a.tau)?;
            let mu = match &a.mu {
                Some(s) => commands::parse_mu(k, &tau, s)?,
                None => MultiplicitySet::attainable(&tau, k),
            };
            (format!("conditional({tau}, {mu})"), conditional_involution(&tau, &mu, k)?)
        }
        MakeKind::Flat => {
            let m = need_m()?;
            if a.k.is_some_and(|k| k != 3) {
                bail!("flat-derived tables have arity 3");
            }
            let star = a.star.as_deref().context("--star is required")?;
            let f: FlatBiquandle = commands::parse_flat(m, star, a.circ.as_deref())?;
            ("flat-derived".into(), flat_derived3(&f)?)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let (name, parameters, outcome) = match run(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed().as_micros() as u64;
    let text = Report::new(&name, parameters, outcome.result, elapsed).to_pretty();
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if outcome.negative {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
