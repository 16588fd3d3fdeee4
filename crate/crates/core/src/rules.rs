//! Voting rules on profiles and on two-alternative restrictions.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::alternative::{AltSet, Alternative, Ranking};
use crate::profile::Profile;
use crate::rational::{format_rational, parse_rational, rat, Rational};

/// Result of an election: the set of top alternatives. There is a winner
/// only when that set is a singleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Outcome {
    pub tie_set: AltSet,
}

impl Outcome {
    pub fn winner(&self) -> Option<Alternative> {
        self.tie_set.single()
    }

    pub fn is_generic(&self) -> bool {
        self.winner().is_some()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.winner() {
            Some(w) => write!(f, "winner {w}"),
            None => write!(f, "no winner, tie set {}", self.tie_set),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("unknown rule `{0}` (expected borda, condorcet, plurality or score:s1,s2,s3)")]
    Unknown(String),
    #[error("bad scoring vector `{0}`: need s1 >= s2 >= s3 and s1 > s3")]
    BadScores(String),
    #[error("no alternatives to choose from")]
    EmptyAgenda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Borda,
    Condorcet,
    Plurality,
    /// Positional scores for first, second and third place.
    Scoring([Rational; 3]),
}

/// Anything that picks a tie set from a profile and an agenda.
pub trait VotingRule {
    fn outcome(&self, profile: &Profile, alts: AltSet) -> Outcome;

    fn label(&self) -> String;
}

impl Rule {
    pub fn scoring(s1: Rational, s2: Rational, s3: Rational) -> Result<Rule, RuleError> {
        if s1 >= s2 && s2 >= s3 && s1 > s3 {
            Ok(Rule::Scoring([s1, s2, s3]))
        } else {
            Err(RuleError::BadScores(format!(
                "{},{},{}",
                format_rational(&s1),
                format_rational(&s2),
                format_rational(&s3)
            )))
        }
    }

    /// Plurality, Borda and general scoring rules are positional.
    pub fn position_scores(&self) -> Option<[Rational; 3]> {
        match self {
            Rule::Borda => Some([rat(2, 1), rat(1, 1), rat(0, 1)]),
            Rule::Plurality => Some([rat(1, 1), rat(0, 1), rat(0, 1)]),
            Rule::Scoring(s) => Some(*s),
            Rule::Condorcet => None,
        }
    }

    /// Contribution of one unit of mass on `r` to the statistic the rule
    /// decides from, over the full agenda. For positional rules this is the
    /// score of x, y, z; for Condorcet it is the indicator of x over y,
    /// x over z and y over z.
    pub fn statistic_of(&self, r: Ranking) -> [Rational; 3] {
        match self.position_scores() {
            Some(s) => {
                let mut out = [Rational::zero(); 3];
                for a in Alternative::ALL {
                    out[a.index()] = s[r.position(a)];
                }
                out
            }
            None => {
                use Alternative::*;
                let ind = |a, b| if r.prefers(a, b) { Rational::one() } else { Rational::zero() };
                [ind(X, Y), ind(X, Z), ind(Y, Z)]
            }
        }
    }

    /// Outcome over the full agenda from a mass-weighted statistic (total
    /// mass one).
    pub fn outcome_of_statistic(&self, stat: &[Rational; 3]) -> Outcome {
        match self {
            Rule::Condorcet => {
                let m = Margins::from_pairwise(stat[0], stat[1], stat[2]);
                m.condorcet_outcome(AltSet::ALL)
            }
            _ => argmax(AltSet::ALL, |a| stat[a.index()]),
        }
    }

    pub fn evaluate(&self, profile: &Profile, alts: AltSet) -> Result<Outcome, RuleError> {
        match alts.len() {
            0 => Err(RuleError::EmptyAgenda),
            1 => Ok(Outcome { tie_set: alts }),
            2 => Ok(self.evaluate_pair(&restrict_profile(profile, alts))),
            _ => Ok(self.evaluate_full(profile)),
        }
    }

    fn evaluate_full(&self, profile: &Profile) -> Outcome {
        match self {
            Rule::Condorcet => condorcet_margins(profile).condorcet_outcome(AltSet::ALL),
            Rule::Borda => {
                let s = borda_scores(profile, AltSet::ALL);
                argmax(AltSet::ALL, |a| s[a.index()])
            }
            _ => {
                let mut stat = [Rational::zero(); 3];
                for (r, w) in profile.entries() {
                    let c = self.statistic_of(r);
                    for i in 0..3 {
                        stat[i] += w * c[i];
                    }
                }
                self.outcome_of_statistic(&stat)
            }
        }
    }

    /// Two-alternative election. Every rule here reduces to a majority
    /// comparison: positional rules award `s1` to the preferred and `s3` to
    /// the other alternative, Borda awards one point, Condorcet needs a weak
    /// majority.
    pub fn evaluate_pair(&self, pair: &PairProfile) -> Outcome {
        let [a, b] = pair.alts;
        let (wa, wb) = (pair.first_over_second, pair.second_over_first);
        let tie = AltSet::from_alts(&[a, b]);
        let pick = |sa: Rational, sb: Rational| {
            if sa > sb {
                AltSet::singleton(a)
            } else if sb > sa {
                AltSet::singleton(b)
            } else {
                tie
            }
        };
        let tie_set = match self {
            Rule::Condorcet => {
                let half = rat(1, 2);
                let total = wa + wb;
                let mut s = AltSet::EMPTY;
                if wa >= half * total {
                    s = s.with(a);
                }
                if wb >= half * total {
                    s = s.with(b);
                }
                s
            }
            Rule::Borda => pick(wa, wb),
            _ => {
                let s = self.position_scores().expect("positional rule");
                pick(wa * s[0] + wb * s[2], wb * s[0] + wa * s[2])
            }
        };
        Outcome { tie_set }
    }
}

impl VotingRule for Rule {
    fn outcome(&self, profile: &Profile, alts: AltSet) -> Outcome {
        self.evaluate(profile, alts).unwrap_or(Outcome { tie_set: AltSet::EMPTY })
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Borda => write!(f, "borda"),
            Rule::Condorcet => write!(f, "condorcet"),
            Rule::Plurality => write!(f, "plurality"),
            Rule::Scoring([a, b, c]) => {
                write!(f, "score:{},{},{}", format_rational(a), format_rational(b), format_rational(c))
            }
        }
    }
}

impl FromStr for Rule {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "borda" => return Ok(Rule::Borda),
            "condorcet" => return Ok(Rule::Condorcet),
            "plurality" => return Ok(Rule::Plurality),
            _ => {}
        }
        let body = t.strip_prefix("score:").ok_or_else(|| RuleError::Unknown(t.to_string()))?;
        let parts = body
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| RuleError::BadScores(body.to_string()))?;
        match parts.as_slice() {
            [a, b, c] => Rule::scoring(*a, *b, *c),
            _ => Err(RuleError::BadScores(body.to_string())),
        }
    }
}

fn argmax(alts: AltSet, score: impl Fn(Alternative) -> Rational) -> Outcome {
    let best = alts.iter().map(&score).max();
    let tie_set = match best {
        Some(m) => alts.iter().filter(|&a| score(a) == m).fold(AltSet::EMPTY, AltSet::with),
        None => AltSet::EMPTY,
    };
    Outcome { tie_set }
}

/// Borda scores restricted to `alts`: each unit of mass gives an
/// alternative one point per member of `alts` it ranks strictly below.
/// Non-members score zero.
pub fn borda_scores(profile: &Profile, alts: AltSet) -> [Rational; 3] {
    let mut out = [Rational::zero(); 3];
    for (r, w) in profile.entries() {
        for a in alts.iter() {
            out[a.index()] += w * Rational::from_integer(r.beaten_within(a, alts) as i128);
        }
    }
    out
}

/// Borda scores counting each alternative as beating itself, i.e. one point
/// for each member of `alts` ranked at or below it. Differs from
/// [`borda_scores`] by exactly the total mass on every member.
pub fn borda_point_scores(profile: &Profile, alts: AltSet) -> [Rational; 3] {
    let mut out = borda_scores(profile, alts);
    for a in alts.iter() {
        out[a.index()] += Rational::one();
    }
    out
}

/// Pairwise support: `support(a, b)` is the mass ranking `a` above `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Margins {
    support: [[Rational; 3]; 3],
}

impl Margins {
    /// From the masses preferring x to y, x to z and y to z (total mass one).
    pub fn from_pairwise(xy: Rational, xz: Rational, yz: Rational) -> Margins {
        let one = Rational::one();
        let zero = Rational::zero();
        Margins {
            support: [[zero, xy, xz], [one - xy, zero, yz], [one - xz, one - yz, zero]],
        }
    }

    pub fn support(&self, a: Alternative, b: Alternative) -> Rational {
        self.support[a.index()][b.index()]
    }

    /// Members of `alts` with at least half the mass against every other
    /// member.
    pub fn condorcet_outcome(&self, alts: AltSet) -> Outcome {
        let half = rat(1, 2);
        let tie_set = alts
            .iter()
            .filter(|&a| alts.iter().filter(|&b| b != a).all(|b| self.support(a, b) >= half))
            .fold(AltSet::EMPTY, AltSet::with);
        Outcome { tie_set }
    }
}

pub fn condorcet_margins(profile: &Profile) -> Margins {
    use Alternative::*;
    Margins::from_pairwise(
        profile.weight_preferring(X, Y),
        profile.weight_preferring(X, Z),
        profile.weight_preferring(Y, Z),
    )
}

/// A profile collapsed onto two alternatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairProfile {
    pub alts: [Alternative; 2],
    pub first_over_second: Rational,
    pub second_over_first: Rational,
}

/// Collapses each ranking onto the induced order of the two members of
/// `pair`. Panics unless `pair` has exactly two members.
pub fn restrict_profile(profile: &Profile, pair: AltSet) -> PairProfile {
    let members: Vec<Alternative> = pair.iter().collect();
    assert_eq!(members.len(), 2, "restriction needs exactly two alternatives");
    let (a, b) = (members[0], members[1]);
    PairProfile {
        alts: [a, b],
        first_over_second: profile.weight_preferring(a, b),
        second_over_first: profile.weight_preferring(b, a),
    }
}

#[cfg(test)]
mod tests {
    use super::Alternative::*;
    use super::*;
    use crate::domain::Domain;
    use crate::rational::int;

    fn u(p: Rational, q: Rational) -> Profile {
        Profile::from_compact(Domain::FULL, &[("xyz", p), ("yxz", q), ("yzx", int(1) - p - q)]).unwrap()
    }

    fn cycle() -> Profile {
        Profile::from_compact(Domain::cyclic(), &[("xyz", rat(1, 3)), ("yzx", rat(1, 3)), ("zxy", rat(1, 3))]).unwrap()
    }

    #[test]
    fn borda_scores_on_the_two_parameter_profile() {
        let s = borda_scores(&u(rat(1, 2), rat(3, 10)), AltSet::ALL);
        assert_eq!(s, [rat(13, 10), rat(3, 2), rat(1, 5)]);
        let t = borda_scores(&u(rat(3, 5), rat(3, 10)), AltSet::ALL);
        assert_eq!(t, [rat(3, 2), rat(7, 5), rat(1, 10)]);
        assert_eq!(Rule::Borda.evaluate(&u(rat(3, 5), rat(3, 10)), AltSet::ALL).unwrap().winner(), Some(X));
    }

    #[test]
    fn unanimous_point_scores() {
        let p = Profile::from_compact(Domain::FULL, &[("xyz", int(1))]).unwrap();
        assert_eq!(borda_point_scores(&p, AltSet::ALL), [int(3), int(2), int(1)]);
        assert_eq!(borda_scores(&p, AltSet::ALL), [int(2), int(1), int(0)]);
    }

    #[test]
    fn condorcet_cycle_has_no_winner() {
        let m = condorcet_margins(&cycle());
        assert_eq!(m.support(X, Y), rat(2, 3));
        assert_eq!(m.support(Y, Z), rat(2, 3));
        assert_eq!(m.support(Z, X), rat(2, 3));
        let out = Rule::Condorcet.evaluate(&cycle(), AltSet::ALL).unwrap();
        assert!(out.tie_set.is_empty());
        assert_eq!(out.winner(), None);
    }

    #[test]
    fn condorcet_winner_and_weak_majority() {
        assert_eq!(Rule::Condorcet.evaluate(&u(rat(3, 5), rat(1, 5)), AltSet::ALL).unwrap().winner(), Some(X));
        let m = condorcet_margins(&u(rat(1, 2), rat(1, 5)));
        assert_eq!(m.support(X, Y), rat(1, 2));
        assert_eq!(m.support(X, Y) + m.support(Y, X), int(1));
        // x and y tie at one half and both beat z.
        let out = Rule::Condorcet.evaluate(&u(rat(1, 2), rat(1, 2)), AltSet::ALL).unwrap();
        assert_eq!(out.tie_set, AltSet::from_alts(&[X, Y]));
    }

    #[test]
    fn restriction_to_a_pair() {
        let pair = restrict_profile(&cycle(), AltSet::from_alts(&[X, Y]));
        assert_eq!(pair.alts, [X, Y]);
        assert_eq!(pair.first_over_second, rat(2, 3));
        assert_eq!(pair.second_over_first, rat(1, 3));
        for rule in [Rule::Borda, Rule::Plurality, Rule::Condorcet] {
            assert_eq!(rule.evaluate_pair(&pair).winner(), Some(X));
        }
    }

    #[test]
    fn plurality_and_scoring() {
        let p = Profile::from_compact(Domain::FULL, &[("xyz", rat(7, 20)), ("yxz", rat(17, 50)), ("zyx", rat(31, 100))])
            .unwrap();
        assert_eq!(Rule::Plurality.evaluate(&p, AltSet::ALL).unwrap().winner(), Some(X));
        let veto = Rule::scoring(int(1), int(1), int(0)).unwrap();
        assert_eq!(veto.evaluate(&p, AltSet::ALL).unwrap().winner(), Some(Y));
    }

    #[test]
    fn rule_strings() {
        for s in ["borda", "condorcet", "plurality", "score:3,1,0", "score:1,1,0", "score:1/2,1/4,0"] {
            assert_eq!(s.parse::<Rule>().unwrap().to_string(), s);
        }
        assert_eq!("score:2,1,0".parse::<Rule>().unwrap().position_scores(), Rule::Borda.position_scores());
        assert!("score:0,1,0".parse::<Rule>().is_err());
        assert!("score:1,1,1".parse::<Rule>().is_err());
        assert!("score:1,2".parse::<Rule>().is_err());
        assert!("approval".parse::<Rule>().is_err());
    }

    #[test]
    fn agenda_edge_cases() {
        assert!(Rule::Borda.evaluate(&cycle(), AltSet::EMPTY).is_err());
        assert_eq!(Rule::Borda.evaluate(&cycle(), AltSet::singleton(Z)).unwrap().winner(), Some(Z));
    }

    #[test]
    fn borda_matches_its_scoring_vector() {
        let as_scoring = Rule::scoring(int(2), int(1), int(0)).unwrap();
        for p in crate::profile::grid_profiles(Domain::FULL, 6) {
            assert_eq!(Rule::Borda.evaluate(&p, AltSet::ALL), as_scoring.evaluate(&p, AltSet::ALL));
            for pair in AltSet::pairs() {
                assert_eq!(
                    Rule::Borda.evaluate(&p, pair).unwrap().tie_set,
                    as_scoring.evaluate(&p, pair).unwrap().tie_set
                );
            }
        }
    }
}
