//! Bounded search for small coalitions that profit from misreporting.
//!
//! A coalition is a set of moves `true -> reported` with amounts on a
//! lattice of step `1/move_denominator`. It succeeds when the total moved
//! mass is below `epsilon`, the base and the new profile both have a unique
//! winner, the winner changes, and every mover strictly prefers the new
//! winner to the old one.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::alternative::{parse_ranking, AltSet, Alternative, Ranking};
use crate::domain::Domain;
use crate::profile::{grid_profiles, parse_profile, transfer_weight, Move, Profile, TransferError};
use crate::rational::{format_rational, parse_rational, rat, Rational};
use crate::rules::{Outcome, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AuditConfig {
    pub epsilon: Rational,
    /// Base profiles have weights in multiples of `1/grid_denominator`.
    pub grid_denominator: u32,
    /// Moved amounts are multiples of `1/move_denominator`.
    pub move_denominator: u32,
}

impl AuditConfig {
    pub fn new(epsilon: Rational, grid_denominator: u32, move_denominator: u32) -> AuditConfig {
        AuditConfig { epsilon, grid_denominator, move_denominator }
    }

    fn validate(&self) -> Result<(), ManipulationError> {
        if self.epsilon <= Rational::zero() {
            return Err(ManipulationError::InvalidConfig("epsilon must be positive".into()));
        }
        if self.grid_denominator == 0 || self.move_denominator == 0 {
            return Err(ManipulationError::InvalidConfig("denominators must be positive".into()));
        }
        Ok(())
    }

    /// Largest number of lattice units whose mass stays below epsilon.
    fn max_units(&self) -> u32 {
        let scaled = self.epsilon * Rational::from_integer(self.move_denominator as i128);
        let units = scaled.ceil().to_integer() - 1;
        units.clamp(0, u32::MAX as i128) as u32
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ManipulationWitness {
    pub base: Profile,
    /// Moves in canonical `(true, reported)` order.
    pub moves: Vec<Move>,
    pub size: Rational,
    pub old_winner: Alternative,
    pub new_winner: Alternative,
    /// Bound the size was checked against.
    pub epsilon: Rational,
}

impl fmt::Display for ManipulationWitness {
    /// Base profile in the profile text format, one `<amount> <true> ->
    /// <reported>` line per move, then the summary lines.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for m in &self.moves {
            writeln!(f, "{} {} -> {}", format_rational(&m.amount), m.from, m.to)?;
        }
        writeln!(f, "old={} new={} size={}", self.old_winner, self.new_winner, format_rational(&self.size))?;
        writeln!(f, "epsilon={}", format_rational(&self.epsilon))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("base profile: {0}")]
    Profile(String),
}

/// Reads the text written by the witness `Display` impl.
pub fn parse_witness(text: &str) -> Result<ManipulationWitness, WitnessParseError> {
    let syntax = |line: usize, message: &str| WitnessParseError::Syntax { line, message: message.to_string() };
    let mut profile_text = String::new();
    let mut moves = Vec::new();
    let mut summary: Option<(Alternative, Alternative, Rational)> = None;
    let mut epsilon = None;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((lhs, to)) = line.split_once("->") {
            let (amount, from) = lhs.trim().split_once(char::is_whitespace).ok_or_else(|| syntax(no, "bad move"))?;
            let amount = parse_rational(amount).map_err(|e| syntax(no, &e.to_string()))?;
            let from = parse_ranking(from.trim()).map_err(|e| syntax(no, &e.to_string()))?;
            let to = parse_ranking(to.trim()).map_err(|e| syntax(no, &e.to_string()))?;
            moves.push(Move::new(from, to, amount));
        } else if line.starts_with("old=") {
            let mut old = None;
            let mut new = None;
            let mut size = None;
            for field in line.split_whitespace() {
                let (k, v) = field.split_once('=').ok_or_else(|| syntax(no, "bad summary field"))?;
                match k {
                    "old" => old = Some(v.parse::<Alternative>().map_err(|e| syntax(no, &e.to_string()))?),
                    "new" => new = Some(v.parse::<Alternative>().map_err(|e| syntax(no, &e.to_string()))?),
                    "size" => size = Some(parse_rational(v).map_err(|e| syntax(no, &e.to_string()))?),
                    _ => return Err(syntax(no, "unknown summary field")),
                }
            }
            match (old, new, size) {
                (Some(o), Some(n), Some(s)) => summary = Some((o, n, s)),
                _ => return Err(syntax(no, "summary needs old, new and size")),
            }
        } else if let Some(v) = line.strip_prefix("epsilon=") {
            epsilon = Some(parse_rational(v).map_err(|e| syntax(no, &e.to_string()))?);
        } else {
            profile_text.push_str(line);
            profile_text.push('\n');
        }
    }
    let base = parse_profile(&profile_text).map_err(|e| WitnessParseError::Profile(e.to_string()))?;
    let (old_winner, new_winner, size) = summary.ok_or_else(|| syntax(0, "missing `old=... new=... size=...` line"))?;
    let epsilon = epsilon.ok_or_else(|| syntax(0, "missing `epsilon=` line"))?;
    Ok(ManipulationWitness { base, moves, size, old_winner, new_winner, epsilon })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessFailure {
    #[error("nongeneric: the base profile has no unique winner")]
    NongenericBase,
    #[error("nongeneric: the manipulated profile has no unique winner")]
    NongenericResult,
    #[error("base winner is {actual}, witness claims {claimed}")]
    OldWinnerMismatch { claimed: Alternative, actual: Alternative },
    #[error("manipulated winner is {actual}, witness claims {claimed}")]
    NewWinnerMismatch { claimed: Alternative, actual: Alternative },
    #[error("the winner does not change")]
    NoChange,
    #[error("movers holding {0} do not prefer the new winner to the old one")]
    NotImproving(Ranking),
    #[error("moved mass {actual} differs from the stated size {claimed}")]
    SizeMismatch { claimed: String, actual: String },
    #[error("size {size} is not below epsilon {epsilon}")]
    TooLarge { size: String, epsilon: String },
    #[error(transparent)]
    Transfer(#[from] TransferError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManipulationError {
    #[error("nongeneric: the base profile has no unique winner")]
    NongenericBase,
    #[error("invalid audit configuration: {0}")]
    InvalidConfig(String),
}

/// Re-derives every claim of a witness from scratch.
pub fn verify_witness(rule: &Rule, witness: &ManipulationWitness) -> Result<(), WitnessFailure> {
    let before = rule.evaluate(&witness.base, AltSet::ALL).map_err(|_| WitnessFailure::NongenericBase)?;
    let old = before.winner().ok_or(WitnessFailure::NongenericBase)?;
    if old != witness.old_winner {
        return Err(WitnessFailure::OldWinnerMismatch { claimed: witness.old_winner, actual: old });
    }
    let (after_profile, moved) = transfer_weight(&witness.base, &witness.moves)?;
    if moved != witness.size {
        return Err(WitnessFailure::SizeMismatch {
            claimed: format_rational(&witness.size),
            actual: format_rational(&moved),
        });
    }
    if moved >= witness.epsilon {
        return Err(WitnessFailure::TooLarge { size: format_rational(&moved), epsilon: format_rational(&witness.epsilon) });
    }
    let after = rule.evaluate(&after_profile, AltSet::ALL).map_err(|_| WitnessFailure::NongenericResult)?;
    let new = after.winner().ok_or(WitnessFailure::NongenericResult)?;
    if new == old {
        return Err(WitnessFailure::NoChange);
    }
    if new != witness.new_winner {
        return Err(WitnessFailure::NewWinnerMismatch { claimed: witness.new_winner, actual: new });
    }
    for m in &witness.moves {
        if !m.amount.is_zero() && !m.from.prefers(new, old) {
            return Err(WitnessFailure::NotImproving(m.from));
        }
    }
    Ok(())
}

/// One candidate move channel: mass on `from` reporting `to`.
#[derive(Clone, Copy)]
struct Channel {
    pair: usize,
    from: Ranking,
    /// Change of the rule statistic per lattice unit moved.
    delta: [Rational; 3],
}

/// The linear condition `value(stat) > 0` (or `>= 0` when `weak`) that the
/// target must meet against one competitor.
#[derive(Clone, Copy)]
struct Requirement {
    coeffs: [Rational; 3],
    offset: Rational,
    weak: bool,
}

impl Requirement {
    fn value(&self, stat: &[Rational; 3]) -> Rational {
        self.offset + (0..3).map(|i| self.coeffs[i] * stat[i]).sum::<Rational>()
    }

    fn holds_at(&self, value: Rational) -> bool {
        if self.weak {
            value >= Rational::zero()
        } else {
            value > Rational::zero()
        }
    }
}

/// Index of the x/y, x/z, y/z entry in the Condorcet statistic.
fn pair_slot(a: Alternative, b: Alternative) -> (usize, bool) {
    use Alternative::*;
    match (a, b) {
        (X, Y) => (0, true),
        (Y, X) => (0, false),
        (X, Z) => (1, true),
        (Z, X) => (1, false),
        (Y, Z) => (2, true),
        (Z, Y) => (2, false),
        _ => unreachable!("distinct alternatives"),
    }
}

fn requirements(rule: &Rule, target: Alternative) -> Vec<Requirement> {
    let zero = Rational::zero();
    Alternative::ALL
        .into_iter()
        .filter(|&o| o != target)
        .map(|o| match rule {
            Rule::Condorcet => {
                // support(target, o) >= 1/2
                let (slot, direct) = pair_slot(target, o);
                let mut coeffs = [zero; 3];
                coeffs[slot] = if direct { Rational::one() } else { -Rational::one() };
                let offset = if direct { -rat(1, 2) } else { rat(1, 2) };
                Requirement { coeffs, offset, weak: true }
            }
            _ => {
                let mut coeffs = [zero; 3];
                coeffs[target.index()] = Rational::one();
                coeffs[o.index()] = -Rational::one();
                Requirement { coeffs, offset: zero, weak: false }
            }
        })
        .collect()
}

fn statistic(rule: &Rule, profile: &Profile) -> [Rational; 3] {
    let mut stat = [Rational::zero(); 3];
    for (r, w) in profile.entries() {
        let c = rule.statistic_of(r);
        for i in 0..3 {
            stat[i] += w * c[i];
        }
    }
    stat
}

/// Amounts in lattice units, indexed by canonical pair `from * 6 + to`.
type MoveMatrix = [u32; 36];

/// Tie-break among coalitions of equal size: scanning pairs from the last
/// canonical `(true, reported)` pair to the first, more mass comes first.
fn coalition_order(a: &MoveMatrix, b: &MoveMatrix) -> Ordering {
    for i in (0..36).rev() {
        match b[i].cmp(&a[i]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

struct Search<'a> {
    rule: &'a Rule,
    base_stat: [Rational; 3],
    unit: Rational,
    channels: Vec<Channel>,
    /// Remaining lattice units per source ranking.
    caps: [u32; 6],
    target: Alternative,
}

impl<'a> Search<'a> {
    /// First coalition of exactly `units` units, in coalition order, that
    /// makes `target` the unique winner.
    fn first_with(&mut self, units: u32) -> Option<MoveMatrix> {
        let mut amounts = vec![0u32; self.channels.len()];
        let n = self.channels.len();
        if self.fill(n, units, &mut amounts) {
            let mut m = [0u32; 36];
            for (c, &a) in self.channels.iter().zip(&amounts) {
                m[c.pair] = a;
            }
            Some(m)
        } else {
            None
        }
    }

    /// Assigns amounts to channels `[0, upto)` from the last one down.
    fn fill(&mut self, upto: usize, remaining: u32, amounts: &mut [u32]) -> bool {
        if remaining == 0 {
            return self.succeeds(amounts);
        }
        if upto == 0 {
            return false;
        }
        let i = upto - 1;
        let src = self.channels[i].from.index();
        // Mass still placeable on channels below i.
        let below: u32 = {
            let mut seen = [false; 6];
            let mut total = 0u32;
            for c in &self.channels[..i] {
                let s = c.from.index();
                if !seen[s] {
                    seen[s] = true;
                    total = total.saturating_add(self.caps[s]);
                }
            }
            total
        };
        let most = remaining.min(self.caps[src]);
        for a in (0..=most).rev() {
            let rest = remaining - a;
            let below_after = if self.channels[..i].iter().any(|c| c.from.index() == src) { below - a } else { below };
            if rest > below_after {
                // Smaller amounts here only leave more for the channels below.
                break;
            }
            amounts[i] = a;
            self.caps[src] -= a;
            let found = self.fill(i, rest, amounts);
            self.caps[src] += a;
            if found {
                return true;
            }
            amounts[i] = 0;
        }
        false
    }

    fn succeeds(&self, amounts: &[u32]) -> bool {
        let mut stat = self.base_stat;
        for (c, &a) in self.channels.iter().zip(amounts) {
            if a > 0 {
                let k = Rational::from_integer(a as i128) * self.unit;
                for (s, d) in stat.iter_mut().zip(&c.delta) {
                    *s += k * d;
                }
            }
        }
        self.rule.outcome_of_statistic(&stat).winner() == Some(self.target)
    }
}

/// Smallest successful coalition on the move lattice, or `None` when no
/// coalition below `epsilon` works at this resolution.
///
/// Coalitions are ordered by size, then by [`coalition_order`]. Only mass on
/// rankings that prefer the target to the current winner can move, and only
/// to rankings of the profile's domain.
pub fn find_manipulation(
    rule: &Rule,
    profile: &Profile,
    config: &AuditConfig,
) -> Result<Option<ManipulationWitness>, ManipulationError> {
    config.validate()?;
    let old = rule
        .evaluate(profile, AltSet::ALL)
        .ok()
        .and_then(|o| o.winner())
        .ok_or(ManipulationError::NongenericBase)?;
    let max_units = config.max_units();
    if max_units == 0 {
        return Ok(None);
    }
    let denom = config.move_denominator as i128;
    let unit = Rational::new(1, denom);
    let base_stat = statistic(rule, profile);
    let mut caps = [0u32; 6];
    for (r, w) in profile.entries() {
        let units = (w * Rational::from_integer(denom)).floor().to_integer();
        caps[r.index()] = units.min(max_units as i128) as u32;
    }

    struct Plan {
        target: Alternative,
        channels: Vec<Channel>,
        reqs: Vec<Requirement>,
        base_values: Vec<Rational>,
        best_gain: Vec<Rational>,
    }

    let mut plans = Vec::new();
    for target in Alternative::ALL.into_iter().filter(|&a| a != old) {
        let mut channels = Vec::new();
        for from in profile.support().filter(|r| r.prefers(target, old) && caps[r.index()] > 0) {
            let from_stat = rule.statistic_of(from);
            for to in profile.domain().rankings().filter(|&t| t != from) {
                let to_stat = rule.statistic_of(to);
                let delta = [to_stat[0] - from_stat[0], to_stat[1] - from_stat[1], to_stat[2] - from_stat[2]];
                channels.push(Channel { pair: from.index() * 6 + to.index(), from, delta });
            }
        }
        if channels.is_empty() {
            continue;
        }
        let reqs = requirements(rule, target);
        let base_values = reqs.iter().map(|q| q.value(&base_stat)).collect();
        let best_gain = reqs
            .iter()
            .map(|q| {
                channels
                    .iter()
                    .map(|c| (0..3).map(|i| q.coeffs[i] * c.delta[i]).sum::<Rational>() * unit)
                    .max()
                    .expect("nonempty channels")
            })
            .collect();
        plans.push(Plan { target, channels, reqs, base_values, best_gain });
    }

    let available: u32 = caps.iter().sum();
    for units in 1..=max_units.min(available) {
        let t = Rational::from_integer(units as i128);
        let mut best: Option<(MoveMatrix, Alternative)> = None;
        for plan in &plans {
            // Each unit moves every requirement by at most its best gain.
            let reachable = plan
                .reqs
                .iter()
                .zip(&plan.base_values)
                .zip(&plan.best_gain)
                .all(|((q, v), g)| q.holds_at(*v + t * *g));
            if !reachable {
                continue;
            }
            let mut search = Search {
                rule,
                base_stat,
                unit,
                channels: plan.channels.clone(),
                caps,
                target: plan.target,
            };
            if let Some(m) = search.first_with(units) {
                let better = match &best {
                    None => true,
                    Some((b, _)) => coalition_order(&m, b) == Ordering::Less,
                };
                if better {
                    best = Some((m, plan.target));
                }
            }
        }
        if let Some((m, target)) = best {
            let moves: Vec<Move> = (0..36)
                .filter(|&i| m[i] > 0)
                .map(|i| {
                    Move::new(
                        Ranking::from_index(i / 6),
                        Ranking::from_index(i % 6),
                        Rational::from_integer(m[i] as i128) * unit,
                    )
                })
                .collect();
            let witness = ManipulationWitness {
                base: profile.clone(),
                moves,
                size: t * unit,
                old_winner: old,
                new_winner: target,
                epsilon: config.epsilon,
            };
            debug_assert_eq!(verify_witness(rule, &witness), Ok(()));
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditOutcome {
    pub rule: Rule,
    pub domain: Domain,
    pub config: AuditConfig,
    pub witness: Option<ManipulationWitness>,
    /// Base profiles examined, up to and including the witness profile.
    pub profiles_scanned: usize,
    /// Examined base profiles skipped for lacking a unique winner.
    pub nongeneric_skipped: usize,
}

impl AuditOutcome {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "wsp audit: rule={} domain={} epsilon={} grid=1/{} moves=1/{}\n",
            self.rule,
            self.domain,
            format_rational(&self.config.epsilon),
            self.config.grid_denominator,
            self.config.move_denominator
        );
        out.push_str(&format!(
            "scanned {} base profiles, skipped {} nongeneric\n",
            self.profiles_scanned, self.nongeneric_skipped
        ));
        match &self.witness {
            Some(w) => {
                out.push_str(&format!(
                    "witness: {} -> {} with moved mass {}\n",
                    w.old_winner,
                    w.new_winner,
                    format_rational(&w.size)
                ));
                out.push_str(&w.to_string());
            }
            None => out.push_str("no witness at this resolution\n"),
        }
        out
    }
}

/// Scans grid base profiles on `domain`, in the canonical grid order, and
/// stops at the first one admitting a successful coalition. Nongeneric
/// bases are skipped. The result does not depend on thread scheduling.
pub fn audit_wsp(rule: &Rule, domain: Domain, config: &AuditConfig) -> Result<AuditOutcome, ManipulationError> {
    config.validate()?;
    const CHUNK: usize = 2048;
    let mut grid = grid_profiles(domain, config.grid_denominator);
    let mut scanned = 0usize;
    let mut skipped = 0usize;
    loop {
        let chunk: Vec<Profile> = grid.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let found = chunk
            .par_iter()
            .enumerate()
            .find_map_first(|(i, p)| match find_manipulation(rule, p, config) {
                Ok(Some(w)) => Some((i, w)),
                _ => None,
            });
        let examined = match &found {
            Some((i, _)) => &chunk[..=*i],
            None => &chunk[..],
        };
        scanned += examined.len();
        skipped += examined.iter().filter(|p| !is_generic(rule, p)).count();
        if let Some((_, w)) = found {
            return Ok(AuditOutcome {
                rule: *rule,
                domain,
                config: *config,
                witness: Some(w),
                profiles_scanned: scanned,
                nongeneric_skipped: skipped,
            });
        }
    }
    Ok(AuditOutcome { rule: *rule, domain, config: *config, witness: None, profiles_scanned: scanned, nongeneric_skipped: skipped })
}

fn is_generic(rule: &Rule, profile: &Profile) -> bool {
    rule.evaluate(profile, AltSet::ALL).map(|o: Outcome| o.is_generic()).unwrap_or(false)
}
