//! The `wsp` command line: evaluation, pairwise margins, axiom audits,
//! coalition search, richness checks and case replay.
//!
//! [`run`] takes the full argument vector and returns the exit code and the
//! report. Exit codes: 0 success (no violation, no witness, replay passes),
//! 1 violation, witness or failing replay, 2 bad input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use wsp_core::axioms::{audit_profile, audit_sweep, AxiomReport};
use wsp_core::manipulation::{audit_wsp, find_manipulation, AuditConfig, ManipulationError};
use wsp_core::profile::{grid_profiles, parse_domain_header, parse_profile};
use wsp_core::rational::{format_rational, parse_rational};
use wsp_core::replay::{find_scenario, sample_params, scenario_catalog, verify_scenario, Env, Scenario};
use wsp_core::rules::{borda_scores, condorcet_margins};
use wsp_core::{AltSet, Alternative, Domain, Profile, Rational, Rule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "wsp", version, about = "Exact three-alternative voting rules, axiom audits and coalition search")]
struct Cli {
    /// Report layout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Record,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Elect a winner on a profile.
    Evaluate {
        #[arg(long)]
        rule: String,
        profile: PathBuf,
    },
    /// Pairwise support between every two alternatives.
    Margins { profile: PathBuf },
    /// Pareto, anonymity, neutrality and IIA on one profile or a grid.
    Audit {
        #[arg(long)]
        rule: String,
        #[command(flatten)]
        source: Source,
    },
    /// Search for a coalition below epsilon that profits from misreporting.
    Manipulate {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        epsilon: String,
        /// Moved amounts are multiples of 1/MOVES.
        #[arg(long, default_value_t = 100)]
        moves: u32,
        #[command(flatten)]
        source: Source,
    },
    /// Replay encoded cases.
    Replay(ReplayArgs),
    /// Whether every alternative is ranked in the middle somewhere.
    Richness {
        /// Domain name (`full`, `cc`, `star`, `I`, `II`, `III`) or `{x>y>z, ...}`.
        #[arg(long, conflicts_with = "file")]
        domain: Option<String>,
        /// File whose first line is a `domain:` header.
        file: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Scan grid profiles of this domain instead of reading a file.
    #[arg(long, conflicts_with = "profile")]
    domain: Option<String>,
    /// Grid profiles have weights in multiples of 1/GRID.
    #[arg(long, default_value_t = 20)]
    grid: u32,
    profile: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    case: Option<String>,
    /// Every case of the catalog.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    /// Sampled points per case when no parameters are given.
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

struct Failure {
    code: i32,
    message: String,
}

fn input(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

type Outcome = Result<(i32, String), Failure>;

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let result = match cli.command {
        Command::Evaluate { rule, profile } => evaluate(&rule, &profile, cli.format),
        Command::Margins { profile } => margins(&profile, cli.format),
        Command::Audit { rule, source } => audit(&rule, &source, cli.format),
        Command::Manipulate { rule, epsilon, moves, source } => manipulate(&rule, &epsilon, moves, &source, cli.format),
        Command::Replay(args) => replay(&args, cli.format),
        Command::Richness { domain, file } => richness(domain.as_deref(), file.as_deref(), cli.format),
    };
    match result {
        Ok(r) => r,
        Err(f) => (f.code, format!("error: {}\n", f.message)),
    }
}

fn read_profile(path: &Path) -> Result<Profile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    parse_profile(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn parse_rule(text: &str) -> Result<Rule, Failure> {
    text.parse().map_err(|e| input(format!("{e}")))
}

fn parse_domain(text: &str) -> Result<Domain, Failure> {
    text.parse().map_err(|e| input(format!("domain `{text}`: {e}")))
}

fn parse_value(flag: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|e| input(format!("--{flag}: {e}")))
}

fn evaluate(rule: &str, path: &Path, format: Format) -> Outcome {
    let rule = parse_rule(rule)?;
    let profile = read_profile(path)?;
    let outcome = rule.evaluate(&profile, AltSet::ALL).map_err(|e| input(e.to_string()))?;
    let scores = match rule {
        Rule::Condorcet => None,
        Rule::Borda => Some(borda_scores(&profile, AltSet::ALL)),
        _ => {
            let s = rule.position_scores().expect("positional rule");
            let mut out = [Rational::default(); 3];
            for (r, w) in profile.entries() {
                for a in Alternative::ALL {
                    out[a.index()] += w * s[r.position(a)];
                }
            }
            Some(out)
        }
    };
    let mut out = String::new();
    match format {
        Format::Text => {
            let _ = writeln!(out, "rule {rule} on {}", profile.domain());
            if let Some(s) = scores {
                let parts: Vec<String> =
                    Alternative::ALL.iter().map(|a| format!("{a}={}", format_rational(&s[a.index()]))).collect();
                let _ = writeln!(out, "scores {}", parts.join(" "));
            }
            match outcome.winner() {
                Some(w) => {
                    let _ = writeln!(out, "winner {w}");
                }
                None if rule == Rule::Condorcet && outcome.tie_set.is_empty() => {
                    out.push_str("no Condorcet winner (cycle)\n");
                }
                None => {
                    let _ = writeln!(out, "no unique winner, tie set {}", outcome.tie_set);
                }
            }
        }
        Format::Record => {
            let _ = writeln!(out, "rule={rule}");
            if let Some(s) = scores {
                for a in Alternative::ALL {
                    let _ = writeln!(out, "score.{a}={}", format_rational(&s[a.index()]));
                }
            }
            let _ = writeln!(out, "tie_set={}", outcome.tie_set);
            let _ = writeln!(out, "winner={}", outcome.winner().map_or("none".to_string(), |w| w.to_string()));
        }
    }
    Ok((EXIT_OK, out))
}

fn margins(path: &Path, format: Format) -> Outcome {
    let profile = read_profile(path)?;
    let m = condorcet_margins(&profile);
    let mut out = String::new();
    for a in Alternative::ALL {
        for b in Alternative::ALL.into_iter().filter(|&b| b != a) {
            let v = format_rational(&m.support(a, b));
            let _ = match format {
                Format::Text => writeln!(out, "{a} over {b}: {v}"),
                Format::Record => writeln!(out, "support.{a}.{b}={v}"),
            };
        }
    }
    let winner = m.condorcet_outcome(AltSet::ALL);
    let _ = match (format, winner.winner()) {
        (Format::Text, Some(w)) => writeln!(out, "condorcet winner {w}"),
        (Format::Text, None) if winner.tie_set.is_empty() => writeln!(out, "no Condorcet winner (cycle)"),
        (Format::Text, None) => writeln!(out, "weak Condorcet winners {}", winner.tie_set),
        (Format::Record, _) => writeln!(out, "condorcet_tie_set={}", winner.tie_set),
    };
    Ok((EXIT_OK, out))
}

fn render_axioms(reports: &[AxiomReport], format: Format) -> Outcome {
    let mut out = String::new();
    for r in reports {
        match format {
            Format::Text => out.push_str(&r.render_text()),
            Format::Record => {
                out.push_str(&r.render_record());
                out.push('\n');
            }
        }
    }
    let code = if reports.iter().any(AxiomReport::is_violation) { EXIT_FOUND } else { EXIT_OK };
    Ok((code, out))
}

fn audit(rule: &str, source: &Source, format: Format) -> Outcome {
    let rule = parse_rule(rule)?;
    match (&source.profile, &source.domain) {
        (Some(path), _) => render_axioms(&audit_profile(&rule, &read_profile(path)?), format),
        (None, Some(d)) => {
            let domain = parse_domain(d)?;
            if source.grid == 0 {
                return Err(input("--grid must be positive"));
            }
            render_axioms(&audit_sweep(&rule, grid_profiles(domain, source.grid)), format)
        }
        (None, None) => Err(input("give a profile file or --domain")),
    }
}

fn manipulate(rule: &str, epsilon: &str, moves: u32, source: &Source, format: Format) -> Outcome {
    let rule = parse_rule(rule)?;
    let epsilon = parse_value("epsilon", epsilon)?;
    let config = AuditConfig::new(epsilon, source.grid, moves);
    let search_error = |e: ManipulationError| input(e.to_string());
    let header = format!(
        "rule={rule} epsilon={} grid=1/{} moves=1/{moves}",
        format_rational(&epsilon),
        source.grid
    );
    match (&source.profile, &source.domain) {
        (Some(path), _) => {
            let profile = read_profile(path)?;
            let witness = find_manipulation(&rule, &profile, &config).map_err(search_error)?;
            let mut out = match format {
                Format::Text => format!("coalition search: {header}\n"),
                Format::Record => header.split(' ').map(|f| format!("{f}\n")).collect(),
            };
            match &witness {
                Some(w) => {
                    if format == Format::Text {
                        let _ = writeln!(
                            out,
                            "witness: {} -> {} with moved mass {}",
                            w.old_winner,
                            w.new_winner,
                            format_rational(&w.size)
                        );
                    }
                    out.push_str(&w.to_string());
                }
                None => out.push_str(match format {
                    Format::Text => "no witness at this resolution\n",
                    Format::Record => "witness=none\n",
                }),
            }
            Ok((if witness.is_some() { EXIT_FOUND } else { EXIT_OK }, out))
        }
        (None, Some(d)) => {
            let domain = parse_domain(d)?;
            let outcome = audit_wsp(&rule, domain, &config).map_err(search_error)?;
            let out = match format {
                Format::Text => outcome.render_text(),
                Format::Record => {
                    let mut s: String = header.split(' ').map(|f| format!("{f}\n")).collect();
                    let _ = writeln!(s, "domain={domain}");
                    let _ = writeln!(s, "scanned={}", outcome.profiles_scanned);
                    let _ = writeln!(s, "skipped={}", outcome.nongeneric_skipped);
                    match &outcome.witness {
                        Some(w) => s.push_str(&w.to_string()),
                        None => s.push_str("witness=none\n"),
                    }
                    s
                }
            };
            Ok((if outcome.witness.is_some() { EXIT_FOUND } else { EXIT_OK }, out))
        }
        (None, None) => Err(input("give a profile file or --domain")),
    }
}

fn given_params(args: &ReplayArgs) -> Result<Env, Failure> {
    let mut env = Env::new();
    let flags = [
        ("a", &args.a),
        ("b", &args.b),
        ("c", &args.c),
        ("d", &args.d),
        ("p", &args.p),
        ("q", &args.q),
        ("epsilon", &args.epsilon),
    ];
    for (name, value) in flags {
        if let Some(v) = value {
            env.insert(name.to_string(), parse_value(name, v)?);
        }
    }
    Ok(env)
}

/// Replays `sc` at sampled points; returns whether all passed and the
/// report for this case.
fn replay_sampled(sc: &Scenario, args: &ReplayArgs, format: Format) -> Result<(bool, String), Failure> {
    let points = sample_params(sc, args.seed, args.points).map_err(|e| input(e.to_string()))?;
    let mut checks = 0;
    for p in &points {
        let report = verify_scenario(sc, p).map_err(|e| input(e.to_string()))?;
        checks += report.checks.len();
        if !report.passed() {
            let body = match format {
                Format::Text => report.render_text(),
                Format::Record => report.render_record(),
            };
            return Ok((false, body));
        }
    }
    let line = match format {
        Format::Text => format!("case {}: pass at {} points ({checks} checks)\n", sc.id, points.len()),
        Format::Record => format!("case={} passed=true points={} checks={checks}\n", sc.id, points.len()),
    };
    Ok((true, line))
}

fn replay(args: &ReplayArgs, format: Format) -> Outcome {
    if args.points == 0 {
        return Err(input("--points must be positive"));
    }
    let params = given_params(args)?;
    let cases: Vec<&Scenario> = match &args.case {
        Some(id) => vec![find_scenario(id).map_err(|e| input(e.to_string()))?],
        None => scenario_catalog().iter().collect(),
    };
    if !params.is_empty() {
        if args.all {
            return Err(input("parameters need a single --case"));
        }
        let report = verify_scenario(cases[0], &params).map_err(|e| input(e.to_string()))?;
        let body = match format {
            Format::Text => report.render_text(),
            Format::Record => report.render_record(),
        };
        return Ok((if report.passed() { EXIT_OK } else { EXIT_FOUND }, body));
    }
    let mut out = String::new();
    let mut failed = 0;
    for sc in &cases {
        let (ok, body) = replay_sampled(sc, args, format)?;
        failed += usize::from(!ok);
        out.push_str(&body);
    }
    if cases.len() > 1 {
        let _ = match format {
            Format::Text => writeln!(out, "{} cases, {failed} failing", cases.len()),
            Format::Record => writeln!(out, "cases={} failing={failed}", cases.len()),
        };
    }
    Ok((if failed == 0 { EXIT_OK } else { EXIT_FOUND }, out))
}

fn richness(domain: Option<&str>, file: Option<&Path>, format: Format) -> Outcome {
    let domain = match (domain, file) {
        (Some(d), _) => parse_domain(d)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
            parse_domain_header(&text).map_err(|e| input(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(input("give a domain file or --domain")),
    };
    let missing = domain.middles().complement();
    let out = match format {
        Format::Text if missing.is_empty() => format!("domain {domain}: rich\n"),
        Format::Text => format!("domain {domain}: not rich (never in the middle: {missing})\n"),
        Format::Record => format!("domain={domain}\nrich={}\nmiddles={}\n", missing.is_empty(), domain.middles()),
    };
    Ok((EXIT_OK, out))
}
