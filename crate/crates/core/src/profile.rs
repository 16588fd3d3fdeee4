//! Weighted profiles of rankings, weight transfers and the text format.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::alternative::{parse_ranking, AltSet, Alternative, Permutation, Ranking};
use crate::domain::Domain;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("negative weight {weight} on {ranking}")]
    NegativeWeight { ranking: Ranking, weight: String },
    #[error("ranking {0} is outside the domain")]
    OutsideDomain(Ranking),
    #[error("weights sum to {0}, not 1")]
    BadTotal(String),
}

/// A distribution of voter mass over the rankings of a domain.
///
/// Weights are exact, nonnegative and sum to exactly one. Rankings outside
/// the domain always carry zero weight. Zero weights inside the domain are
/// allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    domain: Domain,
    weights: [Rational; 6],
}

impl Profile {
    /// Builds a profile from `(ranking, weight)` entries. Repeated rankings
    /// have their weights added.
    pub fn new(domain: Domain, entries: &[(Ranking, Rational)]) -> Result<Profile, ProfileError> {
        let mut weights: [Rational; 6] = Default::default();
        for (r, w) in entries {
            weights[r.index()] += *w;
        }
        Profile::from_weights(domain, weights)
    }

    pub fn from_weights(domain: Domain, weights: [Rational; 6]) -> Result<Profile, ProfileError> {
        for r in Ranking::all() {
            let w = weights[r.index()];
            if w.is_negative() {
                return Err(ProfileError::NegativeWeight { ranking: r, weight: format_rational(&w) });
            }
            if !w.is_zero() && !domain.contains(r) {
                return Err(ProfileError::OutsideDomain(r));
            }
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(ProfileError::BadTotal(format_rational(&total)));
        }
        Ok(Profile { domain, weights })
    }

    /// Convenience for compact ranking names, e.g. `[("xyz", w), ...]`.
    pub fn from_compact(domain: Domain, entries: &[(&str, Rational)]) -> Result<Profile, ProfileError> {
        let parsed: Vec<(Ranking, Rational)> = entries
            .iter()
            .map(|(s, w)| (Ranking::from_compact(s).expect("valid compact ranking"), *w))
            .collect();
        Profile::new(domain, &parsed)
    }

    /// All mass on one ranking.
    pub fn unanimous(domain: Domain, r: Ranking) -> Result<Profile, ProfileError> {
        Profile::new(domain, &[(r, Rational::one())])
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn weight(&self, r: Ranking) -> Rational {
        self.weights[r.index()]
    }

    pub fn weights(&self) -> &[Rational; 6] {
        &self.weights
    }

    /// Rankings with positive weight, in canonical order.
    pub fn support(&self) -> impl Iterator<Item = Ranking> + '_ {
        Ranking::all().filter(move |r| !self.weights[r.index()].is_zero())
    }

    /// Positive-weight entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (Ranking, Rational)> + '_ {
        self.support().map(move |r| (r, self.weights[r.index()]))
    }

    /// Same weights, possibly a different stated domain.
    pub fn same_weights(&self, other: &Profile) -> bool {
        self.weights == other.weights
    }

    /// Total weight of rankings that rank `a` above `b`.
    pub fn weight_preferring(&self, a: Alternative, b: Alternative) -> Rational {
        self.entries().filter(|(r, _)| r.prefers(a, b)).map(|(_, w)| w).sum()
    }

    /// Every positive-weight ranking puts `a` above `b`.
    pub fn unanimously_prefers(&self, a: Alternative, b: Alternative) -> bool {
        self.support().all(|r| r.prefers(a, b))
    }

    /// Alternatives ranked below some other alternative by every voter.
    pub fn pareto_dominated(&self) -> AltSet {
        let mut out = AltSet::EMPTY;
        for b in Alternative::ALL {
            if Alternative::ALL.iter().any(|&a| a != b && self.unanimously_prefers(a, b)) {
                out = out.with(b);
            }
        }
        out
    }

    /// Core text form; see [`parse_profile`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain: {}", self.domain)?;
        for (r, w) in self.entries() {
            writeln!(f, "{} {}", format_rational(&w), r)?;
        }
        Ok(())
    }
}

/// One misreport: `amount` of the mass holding `from` reports `to` instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub from: Ranking,
    pub to: Ranking,
    pub amount: Rational,
}

impl Move {
    pub fn new(from: Ranking, to: Ranking, amount: Rational) -> Move {
        Move { from, to, amount }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("negative amount {amount} in move {from} -> {to}")]
    NegativeAmount { from: Ranking, to: Ranking, amount: String },
    #[error("move {0} -> {0} does not change the report")]
    SelfMove(Ranking),
    #[error("reported ranking {0} is outside the domain")]
    TargetOutsideDomain(Ranking),
    #[error("moves take {requested} from {ranking}, which only holds {available}")]
    Overdraw { ranking: Ranking, requested: String, available: String },
}

/// Applies simultaneous misreports and returns the new profile together
/// with the total moved mass.
pub fn transfer_weight(profile: &Profile, moves: &[Move]) -> Result<(Profile, Rational), TransferError> {
    let mut outflow: [Rational; 6] = Default::default();
    let mut weights = profile.weights;
    let mut moved = Rational::zero();
    for m in moves {
        if m.amount.is_negative() {
            return Err(TransferError::NegativeAmount {
                from: m.from,
                to: m.to,
                amount: format_rational(&m.amount),
            });
        }
        if m.from == m.to {
            return Err(TransferError::SelfMove(m.from));
        }
        if !profile.domain.contains(m.to) {
            return Err(TransferError::TargetOutsideDomain(m.to));
        }
        outflow[m.from.index()] += m.amount;
        weights[m.from.index()] -= m.amount;
        weights[m.to.index()] += m.amount;
        moved += m.amount;
    }
    for r in Ranking::all() {
        let requested = outflow[r.index()];
        if requested > profile.weight(r) {
            return Err(TransferError::Overdraw {
                ranking: r,
                requested: format_rational(&requested),
                available: format_rational(&profile.weight(r)),
            });
        }
    }
    Ok((Profile { domain: profile.domain, weights }, moved))
}

/// Relabels alternatives: mass on `r` moves to `perm(r)`. The domain is
/// carried along to its image.
pub fn permute_profile(profile: &Profile, perm: Permutation) -> Profile {
    let mut weights: [Rational; 6] = Default::default();
    for r in Ranking::all() {
        weights[perm.apply_ranking(r).index()] = profile.weights[r.index()];
    }
    Profile { domain: profile.domain.image(perm), weights }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] ProfileError),
}

fn syntax(line: usize, message: impl Into<String>) -> ProfileParseError {
    ProfileParseError::Syntax { line, message: message.into() }
}

/// Nonblank lines with comments stripped, tagged with their 1-based number.
type Lines = Vec<(usize, String)>;

/// Splits off a `domain:` header; returns the domain and its line number.
fn parse_header(text: &str) -> Result<(Domain, usize, Lines), ProfileParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim().to_string()))
        .filter(|(_, l)| !l.is_empty());
    let (first_no, first) = lines.next().ok_or_else(|| syntax(1, "missing `domain:` line"))?;
    let spec = first
        .strip_prefix("domain:")
        .ok_or_else(|| syntax(first_no, "first line must be `domain: full` or `domain: {...}`"))?;
    let domain: Domain = spec.trim().parse().map_err(|e| syntax(first_no, format!("{e}")))?;
    Ok((domain, first_no, lines.collect()))
}

/// Reads a domain header with no weight lines (or ignores them).
pub fn parse_domain_header(text: &str) -> Result<Domain, ProfileParseError> {
    parse_header(text).map(|(d, _, _)| d)
}

/// Reads the profile text format.
///
/// ```text
/// domain: {x>y>z, y>z>x, z>x>y}
/// 1/3 x>y>z   # weights as p/q or exact decimals
/// 1/3 y>z>x
/// 1/3 z>x>y
/// ```
///
/// Weights must sum to exactly one and every ranking must lie in the domain.
pub fn parse_profile(text: &str) -> Result<Profile, ProfileParseError> {
    let (domain, _, lines) = parse_header(text)?;
    let mut entries = Vec::new();
    for (no, line) in lines {
        let (weight, ranking) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax(no, "expected `<weight> <ranking>`"))?;
        let w = parse_rational(weight).map_err(|e| syntax(no, e.to_string()))?;
        if w.is_negative() {
            return Err(syntax(no, format!("negative weight {weight}")));
        }
        let r = parse_ranking(ranking.trim()).map_err(|e| syntax(no, e.to_string()))?;
        if !domain.contains(r) {
            return Err(syntax(no, format!("ranking {r} is outside the domain")));
        }
        entries.push((r, w));
    }
    Ok(Profile::new(domain, &entries)?)
}

impl FromStr for Profile {
    type Err = ProfileParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_profile(s)
    }
}

/// Profiles on `domain` whose weights are multiples of `1/denominator`, in
/// canonical order: lexicographic on the count vector over the domain's
/// rankings (canonical ranking order), smallest first.
pub fn grid_profiles(domain: Domain, denominator: u32) -> GridProfiles {
    let rankings: Vec<Ranking> = domain.rankings().collect();
    let mut counts = vec![0u32; rankings.len()];
    if let Some(last) = counts.last_mut() {
        *last = denominator;
    }
    GridProfiles { domain, rankings, denominator, counts: if denominator == 0 { None } else { Some(counts) } }
}

pub struct GridProfiles {
    domain: Domain,
    rankings: Vec<Ranking>,
    denominator: u32,
    counts: Option<Vec<u32>>,
}

impl GridProfiles {
    fn advance(counts: &mut [u32]) -> bool {
        let k = counts.len();
        // Rightmost position (before the last) with mass somewhere after it.
        let mut suffix = 0u32;
        for i in (0..k.saturating_sub(1)).rev() {
            suffix += counts[i + 1];
            if suffix > 0 {
                counts[i] += 1;
                for c in counts[i + 1..].iter_mut() {
                    *c = 0;
                }
                counts[k - 1] = suffix - 1;
                return true;
            }
        }
        false
    }
}

impl Iterator for GridProfiles {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        let counts = self.counts.as_mut()?;
        let mut weights: [Rational; 6] = Default::default();
        for (r, &c) in self.rankings.iter().zip(counts.iter()) {
            weights[r.index()] = Rational::new(c as i128, self.denominator as i128);
        }
        let profile = Profile { domain: self.domain, weights };
        if !GridProfiles::advance(counts) {
            self.counts = None;
        }
        Some(profile)
    }
}
