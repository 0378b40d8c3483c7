use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plgroups::exact_pl::{Interval, PLMap};
use plgroups::extension::{make_xi_alpha, xi_commutator_identity, ExtConfig};
use plgroups::labelling::{from_half_index, LabellingExport};
use plgroups::line_group::LineGroup;
use plgroups::simplicity_lab::Lab;
use plgroups::thompson::{relators, standard_elements};
use plgroups::verify::{labelling_for, run_suite, Suite, VerifyConfig};
use plgroups::{Error, Rational};

/// Writes a line to stdout, ignoring a closed pipe.
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "plgroups", version, about = "Exact computations in piecewise-linear groups of the line")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Labelling seed word (e.g. "a b a"), or "tau" for the periodic labelling
    #[arg(long, global = true, default_value = "a")]
    seed: String,
    /// Integer window bounds
    #[arg(long, global = true, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled checks
    #[arg(long = "rng-seed", global = true, default_value_t = 0)]
    rng_seed: u64,
    /// Slope parameter of the extended groups
    #[arg(long, global = true, default_value = "1/3")]
    alpha: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Thompson group F
    #[command(subcommand)]
    Thompson(ThompsonCmd),
    /// Labellings of the half-integers
    #[command(subcommand)]
    Labelling(LabellingCmd),
    /// Words in the line group
    #[command(subcommand)]
    Element(ElementCmd),
    /// Normal-closure cover runs
    #[command(subcommand)]
    Simplicity(SimplicityCmd),
    /// Extended groups with a non-dyadic slope
    #[command(subcommand)]
    Ext(ExtCmd),
    /// Run a verification suite
    Verify {
        /// thompson, labelling, line, pingpong, simplicity, extension or all
        suite: String,
        /// Also write the JSON report to this path
        #[arg(long)]
        report: Option<String>,
    },
}

#[derive(Subcommand)]
enum ThompsonCmd {
    /// Evaluate both relators on (A, B) and (nu2, nu3)
    VerifyRelators,
    /// Print a standard element (a, b, c0, c1, nu1, nu2, nu3, phi)
    Export { name: String },
}

#[derive(Subcommand)]
enum LabellingCmd {
    /// Print labels on [-range, range]
    Gen {
        #[arg(long, default_value_t = 4)]
        range: i64,
    },
}

#[derive(Args)]
struct WordArg {
    /// e.g. "z2 x2 z1^-1"
    #[arg(long)]
    word: String,
}

#[derive(Subcommand)]
enum ElementCmd {
    /// Image of one point
    Eval {
        #[command(flatten)]
        word: WordArg,
        #[arg(long)]
        at: String,
    },
    /// Restriction to the window
    Restrict {
        #[command(flatten)]
        word: WordArg,
        /// Shorthand for --format json
        #[arg(long)]
        json: bool,
    },
    /// Node pairs of the restriction as CSV
    Plot {
        #[command(flatten)]
        word: WordArg,
    },
    /// Atoms and flags of an integer-fixing element
    Atoms {
        #[command(flatten)]
        word: WordArg,
    },
}

#[derive(Subcommand)]
enum SimplicityCmd {
    /// Build single-atom elements of the normal closure covering the window
    Run {
        #[command(flatten)]
        word: WordArg,
        /// text or json (defaults to --format)
        #[arg(long, value_enum)]
        report: Option<Format>,
    },
}

#[derive(Args)]
struct ExtIntervals {
    /// Interval carrying the slope-alpha map, "lo,hi"
    #[arg(long = "I", default_value = "1/2,5/8")]
    i: String,
    /// Interval carrying the inverse copy, "lo,hi"
    #[arg(long = "J", default_value = "1/4,5/16")]
    j: String,
}

#[derive(Subcommand)]
enum ExtCmd {
    /// Print xi_alpha
    Gen {
        #[command(flatten)]
        intervals: ExtIntervals,
    },
    /// Rebuild xi_alpha from a commutator and compare
    VerifyXi {
        #[command(flatten)]
        intervals: ExtIntervals,
        #[arg(long = "I1", default_value = "3/4,13/16")]
        i1: String,
    },
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Config(_) | Error::InvalidInterval(_) => Failure::Usage(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `plgroups --help` for usage");
            ExitCode::from(2)
        }
    }
}

impl Global {
    fn window(&self) -> Result<(i64, i64), Failure> {
        let (lo, hi) = match self.window.as_deref() {
            Some([lo, hi]) => (*lo, *hi),
            _ => (-8, 8),
        };
        if lo >= hi {
            return Err(Failure::Usage(format!("window [{lo}, {hi}] is empty")));
        }
        Ok((lo, hi))
    }

    fn alpha(&self) -> Result<Rational, Failure> {
        Ok(self.alpha.parse()?)
    }

    fn group(&self) -> Result<LineGroup, Failure> {
        Ok(LineGroup::new(labelling_for(&self.seed)?))
    }
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match cli.command {
        Command::Thompson(cmd) => thompson(g, cmd),
        Command::Labelling(LabellingCmd::Gen { range }) => labelling_gen(g, range),
        Command::Element(cmd) => element(g, cmd),
        Command::Simplicity(SimplicityCmd::Run { word, report }) => simplicity(g, &word.word, report.unwrap_or(g.format)),
        Command::Ext(cmd) => ext(g, cmd),
        Command::Verify { suite, report } => verify(g, &suite, report.as_deref()),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn print_map(map: &PLMap, format: Format) {
    match format {
        Format::Json => say!("{}", json(map)),
        Format::Csv => {
            say!("x,y");
            for (x, y) in map.nodes() {
                say!("{x},{y}");
            }
        }
        Format::Text => {
            for (x, y) in map.nodes() {
                say!("{x} -> {y}");
            }
        }
    }
}

fn thompson(g: &Global, cmd: ThompsonCmd) -> Outcome {
    let s = standard_elements();
    match cmd {
        ThompsonCmd::VerifyRelators => {
            let mut all = true;
            let mut rows = Vec::new();
            for (name, a, b) in [("a-b", &s.a, &s.b), ("nu2-nu3", &s.nu2, &s.nu3)] {
                let [r1, r2] = relators(a, b)?;
                for (i, r) in [r1, r2].iter().enumerate() {
                    let ok = r.is_identity();
                    all &= ok;
                    rows.push(serde_json::json!({"pair": name, "relator": i + 1, "identity": ok}));
                }
            }
            if g.format == Format::Json {
                say!("{}", json(&rows));
            } else {
                for r in &rows {
                    let verdict = if r["identity"].as_bool() == Some(true) { "pass" } else { "FAIL" };
                    say!("relator {} on {}: {verdict}", r["relator"], r["pair"].as_str().unwrap_or_default());
                }
            }
            Ok(all)
        }
        ThompsonCmd::Export { name } => {
            let map = match name.as_str() {
                "a" => &s.a,
                "b" => &s.b,
                "c0" => &s.c0,
                "c1" => &s.c1,
                "nu1" => &s.nu1,
                "nu2" => &s.nu2,
                "nu3" => &s.nu3,
                "phi" => &s.phi,
                _ => return Err(Failure::Usage(format!("unknown standard element {name:?}"))),
            };
            print_map(map, g.format);
            Ok(true)
        }
    }
}

fn labelling_gen(g: &Global, range: i64) -> Outcome {
    if range < 0 {
        return Err(Failure::Usage("range must be nonnegative".into()));
    }
    let rho = labelling_for(&g.seed)?;
    if g.format == Format::Json {
        say!("{}", json(&LabellingExport::new(&rho, range)));
        return Ok(true);
    }
    let cells: Vec<(String, String)> = (-2 * range..=2 * range)
        .map(|h| (from_half_index(h).to_string(), rho.label_h(h).to_string()))
        .collect();
    let (mut top, mut bottom) = (String::new(), String::new());
    for (pos, letter) in &cells {
        let w = pos.len().max(letter.len());
        let _ = write!(top, "{pos:>w$} ");
        let _ = write!(bottom, "{letter:>w$} ");
    }
    say!("{}", top.trim_end());
    say!("{}", bottom.trim_end());
    Ok(true)
}

fn element(g: &Global, cmd: ElementCmd) -> Outcome {
    let group = g.group()?;
    let (lo, hi) = g.window()?;
    match cmd {
        ElementCmd::Eval { word, at } => {
            let e = group.parse(&word.word)?;
            let x: Rational = at.parse()?;
            let y = group.eval_point(&e, &x);
            if g.format == Format::Json {
                say!("{}", json(&serde_json::json!({"word": word.word, "at": x, "image": y})));
            } else {
                say!("{y}");
            }
        }
        ElementCmd::Restrict { word, json: as_json } => {
            let e = group.parse(&word.word)?;
            let map = group.restrict(&e, &Interval::ints(lo, hi)?);
            print_map(&map, if as_json { Format::Json } else { g.format });
        }
        ElementCmd::Plot { word } => {
            let e = group.parse(&word.word)?;
            print_map(&group.restrict(&e, &Interval::ints(lo, hi)?), Format::Csv);
        }
        ElementCmd::Atoms { word } => {
            let e = group.parse(&word.word)?;
            let report = group.atoms(&e, lo, hi)?;
            if g.format == Format::Json {
                say!("{}", json(&report));
            } else {
                for (i, a) in report.atoms.iter().enumerate() {
                    let flags: Vec<String> = a.flags.iter().map(Rational::to_string).collect();
                    say!("atom {i}: flags [{}]", flags.join(", "));
                    let nodes: Vec<String> = a.map.nodes().iter().map(|(x, y)| format!("({x}, {y})")).collect();
                    say!("  nodes {}", nodes.join(" "));
                }
                if report.atoms.is_empty() {
                    say!("no atoms");
                }
            }
        }
    }
    Ok(true)
}

fn simplicity(g: &Global, word: &str, format: Format) -> Outcome {
    let group = g.group()?;
    let window = g.window()?;
    let root = group.parse(word)?;
    if group.is_identity_on(&root, window.0, window.1)? {
        return Err(Failure::Failed(format!("{word:?} acts trivially on the window")));
    }
    let chain = Lab::new(&group, root, window).normal_closure_cover().chain;
    if format == Format::Json {
        say!("{}", json(&chain));
    } else {
        say!("input {} on [{}, {}]", chain.input_word, window.0, window.1);
        for s in &chain.steps {
            let verdict = if s.checks.iter().all(|c| c.passed) { "ok" } else { "FAILED" };
            say!("{:<20} {verdict:<6} letters {:<5} flags {}", s.tag, s.letters, s.flags.len());
            for c in s.checks.iter().filter(|c| !c.passed) {
                say!("    {}: {}", c.name, c.detail);
            }
        }
        say!("covered {} of {} half-integers", chain.covered.len(), chain.covered.len() + chain.uncovered.len());
        if let Some(f) = &chain.failure {
            say!("failure: {f}");
        }
    }
    Ok(chain.complete)
}

fn interval(s: &str) -> Result<Interval, Failure> {
    let (a, b) = s.split_once(',').ok_or_else(|| Failure::Usage(format!("expected \"lo,hi\", got {s:?}")))?;
    Ok(Interval::new(a.trim().parse()?, b.trim().parse()?)?)
}

fn ext(g: &Global, cmd: ExtCmd) -> Outcome {
    let config = |iv: &ExtIntervals| -> Result<ExtConfig, Failure> {
        Ok(ExtConfig::new(g.alpha()?, interval(&iv.i)?, interval(&iv.j)?)?)
    };
    match cmd {
        ExtCmd::Gen { intervals } => {
            let cfg = config(&intervals)?;
            let xi = make_xi_alpha(&cfg)?;
            if g.format == Format::Text {
                print_map(&xi, Format::Text);
            } else if g.format == Format::Csv {
                print_map(&xi, Format::Csv);
            } else {
                say!("{}", json(&serde_json::json!({"config": cfg, "xi": xi})));
            }
            Ok(true)
        }
        ExtCmd::VerifyXi { intervals, i1 } => {
            let cfg = config(&intervals)?;
            let r = xi_commutator_identity(&cfg, &interval(&i1)?)?;
            if g.format == Format::Json {
                say!("{}", json(&r));
            } else {
                say!("xi rebuilt from the commutator: {}", if r.equal { "equal" } else { "DIFFERENT" });
            }
            Ok(r.equal)
        }
    }
}

fn verify(g: &Global, suite: &str, report_path: Option<&str>) -> Outcome {
    let suite: Suite = suite.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let cfg = VerifyConfig { seed: g.seed.clone(), window: g.window()?, rng_seed: g.rng_seed, alpha: g.alpha()? };
    let report = run_suite(suite, &cfg)?;
    if let Some(path) = report_path {
        fs::write(path, json(&report) + "\n").map_err(|e| Failure::Failed(format!("writing {path}: {e}")))?;
    }
    if g.format == Format::Json {
        say!("{}", json(&report));
    } else {
        for c in &report.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                say!("{verdict}  {}", c.name);
            } else {
                say!("{verdict}  {}  ({})", c.name, c.detail);
            }
        }
        let failed = report.failures().count();
        say!("{} checks, {failed} failed", report.checks.len());
    }
    Ok(report.passed)
}
