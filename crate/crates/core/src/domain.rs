//! Sets of admissible rankings.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::alternative::{parse_ranking, AltSet, Permutation, Ranking, RankingParseError};

/// A set of rankings, stored as a 6-bit mask over canonical ranking indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Domain(u8);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainParseError {
    #[error("empty domain")]
    Empty,
    #[error("unknown domain `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Ranking(#[from] RankingParseError),
}

impl Domain {
    pub const FULL: Domain = Domain(0b111111);

    pub fn from_rankings<I: IntoIterator<Item = Ranking>>(rankings: I) -> Domain {
        Domain(rankings.into_iter().fold(0, |m, r| m | (1 << r.index())))
    }

    pub fn from_compact(list: &[&str]) -> Result<Domain, RankingParseError> {
        let rankings = list.iter().map(|s| Ranking::from_compact(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(Domain::from_rankings(rankings))
    }

    /// The three-cycle `{x>y>z, y>z>x, z>x>y}`.
    pub fn cyclic() -> Domain {
        Domain::from_compact(&["xyz", "yzx", "zxy"]).expect("static rankings")
    }

    /// Short names used by data files and the command line.
    ///
    /// `full`, `cc` (the three-cycle), `star` (three-cycle plus `x>z>y`),
    /// `I`, `II`, `III` (the small rich domains of the three-voter-type
    /// arguments).
    pub fn named(name: &str) -> Option<Domain> {
        let list: &[&str] = match name {
            "full" => return Some(Domain::FULL),
            "cc" => &["xyz", "yzx", "zxy"],
            "star" => &["xyz", "yzx", "zxy", "xzy"],
            "I" => &["xyz", "yzx", "yxz", "zyx"],
            "II" => &["xyz", "yzx", "yxz"],
            "III" => &["xyz", "xzy", "yzx", "yxz"],
            _ => return None,
        };
        Some(Domain::from_compact(list).expect("static rankings"))
    }

    pub fn contains(self, r: Ranking) -> bool {
        self.0 & (1 << r.index()) != 0
    }

    pub fn rankings(self) -> impl Iterator<Item = Ranking> {
        Ranking::all().filter(move |&r| self.contains(r))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Domain) -> bool {
        self.0 & !other.0 == 0
    }

    /// Alternatives that occupy the middle position of some member.
    pub fn middles(self) -> AltSet {
        self.rankings().fold(AltSet::EMPTY, |s, r| s.with(r.middle()))
    }

    /// Every alternative is ranked in the middle by at least one member.
    pub fn is_rich(self) -> bool {
        self.middles() == AltSet::ALL
    }

    pub fn image(self, perm: Permutation) -> Domain {
        Domain::from_rankings(self.rankings().map(|r| perm.apply_ranking(r)))
    }

    pub fn is_closed_under(self, perm: Permutation) -> bool {
        self.image(perm) == self
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Domain::FULL {
            return write!(f, "full");
        }
        let items: Vec<String> = self.rankings().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

impl FromStr for Domain {
    type Err = DomainParseError;

    /// Accepts `full`, a short name, or a braced list `{x>y>z, y>z>x}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let rankings = inner
                .split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(parse_ranking)
                .collect::<Result<Vec<_>, _>>()?;
            if rankings.is_empty() {
                return Err(DomainParseError::Empty);
            }
            return Ok(Domain::from_rankings(rankings));
        }
        Domain::named(t).ok_or_else(|| DomainParseError::Unknown(t.to_string()))
    }
}
