//! Per-profile checks of Pareto, neutrality and independence of irrelevant
//! alternatives, plus reports with re-checkable counterexamples.

use std::fmt;

use crate::alternative::{AltSet, Alternative, Permutation};
use crate::profile::{permute_profile, Profile};
use crate::rules::{Outcome, VotingRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Pareto,
    Anonymity,
    Neutrality,
    Iia,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::Pareto => "pareto",
            Axiom::Anonymity => "anonymity",
            Axiom::Neutrality => "neutrality",
            Axiom::Iia => "iia",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Satisfied,
    Violated,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "not-applicable",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// Everyone ranks `dominating` above the elected `winner`.
    Pareto { profile: Profile, winner: Alternative, dominating: Alternative },
    /// Relabeling the profile does not relabel the outcome.
    Neutrality { profile: Profile, permutation: Permutation, outcome: Outcome, permuted_outcome: Outcome },
    /// The full winner loses the two-way contest it belongs to.
    Iia { profile: Profile, pair: AltSet, winner: Alternative, restricted: Outcome },
}

impl Counterexample {
    pub fn profile(&self) -> &Profile {
        match self {
            Counterexample::Pareto { profile, .. }
            | Counterexample::Neutrality { profile, .. }
            | Counterexample::Iia { profile, .. } => profile,
        }
    }

    /// Re-evaluates the rule and confirms the violation is real.
    pub fn recheck(&self, rule: &dyn VotingRule) -> bool {
        match self {
            Counterexample::Pareto { profile, winner, dominating } => {
                rule.outcome(profile, AltSet::ALL).winner() == Some(*winner)
                    && profile.unanimously_prefers(*dominating, *winner)
            }
            Counterexample::Neutrality { profile, permutation, .. } => {
                let before = rule.outcome(profile, AltSet::ALL);
                let after = rule.outcome(&permute_profile(profile, *permutation), AltSet::ALL);
                permutation.apply_set(before.tie_set) != after.tie_set
            }
            Counterexample::Iia { profile, pair, winner, .. } => {
                rule.outcome(profile, AltSet::ALL).winner() == Some(*winner)
                    && pair.contains(*winner)
                    && rule.outcome(profile, *pair).winner() != Some(*winner)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub rule: String,
    pub verdict: Verdict,
    pub note: String,
    pub counterexample: Option<Counterexample>,
}

impl AxiomReport {
    fn new(axiom: Axiom, rule: &dyn VotingRule, verdict: Verdict, note: impl Into<String>) -> AxiomReport {
        AxiomReport { axiom, rule: rule.label(), verdict, note: note.into(), counterexample: None }
    }

    fn violated(axiom: Axiom, rule: &dyn VotingRule, note: String, cx: Counterexample) -> AxiomReport {
        AxiomReport { counterexample: Some(cx), ..AxiomReport::new(axiom, rule, Verdict::Violated, note) }
    }

    pub fn is_violation(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    /// Human-readable block.
    pub fn render_text(&self) -> String {
        let mut out = format!("{} for {}: {}\n", self.axiom, self.rule, self.verdict);
        if !self.note.is_empty() {
            out.push_str(&format!("  {}\n", self.note));
        }
        if let Some(cx) = &self.counterexample {
            out.push_str("  counterexample profile:\n");
            for line in cx.profile().to_text().lines() {
                out.push_str(&format!("    {line}\n"));
            }
        }
        out
    }

    /// Line-oriented `key=value` record; a counterexample profile follows in
    /// the profile text format between `profile:` and `end`.
    pub fn render_record(&self) -> String {
        let mut out = format!("axiom={}\nrule={}\nverdict={}\n", self.axiom, self.rule, self.verdict);
        if let Some(cx) = &self.counterexample {
            match cx {
                Counterexample::Pareto { winner, dominating, .. } => {
                    out.push_str(&format!("winner={winner}\ndominating={dominating}\n"));
                }
                Counterexample::Neutrality { permutation, outcome, permuted_outcome, .. } => {
                    out.push_str(&format!(
                        "permutation={}\ntie_set={}\npermuted_tie_set={}\n",
                        permutation.compact(),
                        outcome.tie_set,
                        permuted_outcome.tie_set
                    ));
                }
                Counterexample::Iia { pair, winner, restricted, .. } => {
                    out.push_str(&format!("pair={pair}\nwinner={winner}\nrestricted_tie_set={}\n", restricted.tie_set));
                }
            }
            out.push_str("profile:\n");
            out.push_str(&cx.profile().to_text());
            out.push_str("end\n");
        }
        out
    }
}

/// Violated when some alternative is ranked above the winner by every
/// positive-weight ranking.
pub fn check_pareto(rule: &dyn VotingRule, profile: &Profile) -> AxiomReport {
    let Some(winner) = rule.outcome(profile, AltSet::ALL).winner() else {
        return AxiomReport::new(Axiom::Pareto, rule, Verdict::Satisfied, "no winner elected");
    };
    for a in Alternative::ALL {
        if a != winner && profile.unanimously_prefers(a, winner) {
            let note = format!("every voter ranks {a} above the winner {winner}");
            let cx = Counterexample::Pareto { profile: profile.clone(), winner, dominating: a };
            return AxiomReport::violated(Axiom::Pareto, rule, note, cx);
        }
    }
    AxiomReport::new(Axiom::Pareto, rule, Verdict::Satisfied, "")
}

/// Compares the outcome on a relabeled profile with the relabeled outcome.
/// Not applicable when the profile's domain is not mapped onto itself.
pub fn check_neutrality(rule: &dyn VotingRule, profile: &Profile, perm: Permutation) -> AxiomReport {
    if !profile.domain().is_closed_under(perm) {
        let note = format!("domain is not closed under {perm}");
        return AxiomReport::new(Axiom::Neutrality, rule, Verdict::NotApplicable, note);
    }
    let outcome = rule.outcome(profile, AltSet::ALL);
    let permuted_outcome = rule.outcome(&permute_profile(profile, perm), AltSet::ALL);
    if perm.apply_set(outcome.tie_set) == permuted_outcome.tie_set {
        return AxiomReport::new(Axiom::Neutrality, rule, Verdict::Satisfied, "");
    }
    let note = format!(
        "under {perm} the tie set {} maps to {}, but the relabeled profile gives {}",
        outcome.tie_set,
        perm.apply_set(outcome.tie_set),
        permuted_outcome.tie_set
    );
    let cx = Counterexample::Neutrality { profile: profile.clone(), permutation: perm, outcome, permuted_outcome };
    AxiomReport::violated(Axiom::Neutrality, rule, note, cx)
}

/// Profiles are weight vectors over rankings, so no rule here can see voter
/// identities. The report records that rather than testing anything.
pub fn check_anonymity_structural(rule: &dyn VotingRule) -> AxiomReport {
    AxiomReport::new(
        Axiom::Anonymity,
        rule,
        Verdict::Satisfied,
        "structural: profiles carry only mass per ranking, so voter identities are invisible",
    )
}

/// Checks that the full-agenda winner also wins the two-way contest on
/// `pair`. Not applicable without a winner, when the winner is not in
/// `pair`, or when the pair itself is tied.
pub fn check_iia(rule: &dyn VotingRule, profile: &Profile, pair: AltSet) -> AxiomReport {
    if pair.len() != 2 {
        return AxiomReport::new(Axiom::Iia, rule, Verdict::NotApplicable, "agenda must have two alternatives");
    }
    let Some(winner) = rule.outcome(profile, AltSet::ALL).winner() else {
        return AxiomReport::new(Axiom::Iia, rule, Verdict::NotApplicable, "no winner on the full agenda");
    };
    if !pair.contains(winner) {
        let note = format!("winner {winner} is not in {pair}");
        return AxiomReport::new(Axiom::Iia, rule, Verdict::NotApplicable, note);
    }
    let restricted = rule.outcome(profile, pair);
    if restricted.winner().is_none() {
        // An exact tie on the pair makes the profile nongeneric.
        let note = format!("the contest on {pair} is tied: {restricted}");
        return AxiomReport::new(Axiom::Iia, rule, Verdict::NotApplicable, note);
    }
    if restricted.winner() == Some(winner) {
        return AxiomReport::new(Axiom::Iia, rule, Verdict::Satisfied, "");
    }
    let note = format!("{winner} wins on the full agenda but the contest on {pair} gives {restricted}");
    let cx = Counterexample::Iia { profile: profile.clone(), pair, winner, restricted };
    AxiomReport::violated(Axiom::Iia, rule, note, cx)
}

/// Runs Pareto, neutrality (every relabeling) and IIA (both pairs holding
/// the winner) on one profile and returns one report per axiom, keeping the
/// first violation found for each.
pub fn audit_profile(rule: &dyn VotingRule, profile: &Profile) -> Vec<AxiomReport> {
    let pareto = check_pareto(rule, profile);
    let neutrality = first_violation(Permutation::all().map(|p| check_neutrality(rule, profile, p)))
        .unwrap_or_else(|| summarize(Axiom::Neutrality, rule, Permutation::all().map(|p| check_neutrality(rule, profile, p))));
    let iia = first_violation(AltSet::pairs().into_iter().map(|s| check_iia(rule, profile, s)))
        .unwrap_or_else(|| summarize(Axiom::Iia, rule, AltSet::pairs().into_iter().map(|s| check_iia(rule, profile, s))));
    vec![pareto, check_anonymity_structural(rule), neutrality, iia]
}

/// Scans `profiles` in order and returns one report per axiom: the first
/// violation found, or a satisfied report with the number of profiles
/// where the check applied.
pub fn audit_sweep<I>(rule: &dyn VotingRule, profiles: I) -> Vec<AxiomReport>
where
    I: IntoIterator<Item = Profile>,
{
    let mut pareto: Option<AxiomReport> = None;
    let mut neutrality: Option<AxiomReport> = None;
    let mut iia: Option<AxiomReport> = None;
    let (mut n_pareto, mut n_neutral, mut n_iia, mut scanned) = (0usize, 0usize, 0usize, 0usize);
    for profile in profiles {
        scanned += 1;
        if pareto.is_none() {
            let r = check_pareto(rule, &profile);
            n_pareto += 1;
            if r.is_violation() {
                pareto = Some(r);
            }
        }
        if neutrality.is_none() {
            for perm in Permutation::all() {
                let r = check_neutrality(rule, &profile, perm);
                if r.verdict != Verdict::NotApplicable {
                    n_neutral += 1;
                }
                if r.is_violation() {
                    neutrality = Some(r);
                    break;
                }
            }
        }
        if iia.is_none() {
            for pair in AltSet::pairs() {
                let r = check_iia(rule, &profile, pair);
                if r.verdict != Verdict::NotApplicable {
                    n_iia += 1;
                }
                if r.is_violation() {
                    iia = Some(r);
                    break;
                }
            }
        }
        if pareto.is_some() && neutrality.is_some() && iia.is_some() {
            break;
        }
    }
    let fallback = |axiom: Axiom, checks: usize| {
        let verdict = if checks == 0 { Verdict::NotApplicable } else { Verdict::Satisfied };
        AxiomReport::new(axiom, rule, verdict, format!("{checks} applicable checks over {scanned} profiles"))
    };
    vec![
        pareto.unwrap_or_else(|| fallback(Axiom::Pareto, n_pareto)),
        check_anonymity_structural(rule),
        neutrality.unwrap_or_else(|| fallback(Axiom::Neutrality, n_neutral)),
        iia.unwrap_or_else(|| fallback(Axiom::Iia, n_iia)),
    ]
}

fn first_violation(reports: impl Iterator<Item = AxiomReport>) -> Option<AxiomReport> {
    reports.into_iter().find(AxiomReport::is_violation)
}

fn summarize(axiom: Axiom, rule: &dyn VotingRule, reports: impl Iterator<Item = AxiomReport>) -> AxiomReport {
    let applicable = reports.filter(|r| r.verdict != Verdict::NotApplicable).count();
    let verdict = if applicable == 0 { Verdict::NotApplicable } else { Verdict::Satisfied };
    AxiomReport::new(axiom, rule, verdict, format!("{applicable} applicable checks"))
}

#[cfg(test)]
mod tests {
    use super::Alternative::*;
    use super::*;
    use crate::domain::Domain;
    use crate::profile::grid_profiles;
    use crate::rational::{int, rat};
    use crate::rules::Rule;

    /// Elects a fixed alternative no matter what.
    struct Constant(Alternative);

    impl VotingRule for Constant {
        fn outcome(&self, _: &Profile, alts: AltSet) -> Outcome {
            let pick = if alts.contains(self.0) { AltSet::singleton(self.0) } else { alts };
            Outcome { tie_set: pick }
        }

        fn label(&self) -> String {
            format!("constant-{}", self.0)
        }
    }

    fn u(p: Rational, q: Rational) -> Profile {
        Profile::from_compact(Domain::FULL, &[("xyz", p), ("yxz", q), ("yzx", int(1) - p - q)]).unwrap()
    }

    fn cycle() -> Profile {
        Profile::from_compact(Domain::cyclic(), &[("xyz", rat(1, 3)), ("yzx", rat(1, 3)), ("zxy", rat(1, 3))]).unwrap()
    }

    use crate::rational::Rational;

    #[test]
    fn pareto_checks() {
        assert_eq!(check_pareto(&Rule::Borda, &u(rat(1, 2), rat(1, 5))).verdict, Verdict::Satisfied);
        assert_eq!(check_pareto(&Constant(X), &cycle()).verdict, Verdict::Satisfied);
        let r = check_pareto(&Constant(Z), &u(rat(1, 2), rat(1, 5)));
        assert!(r.is_violation());
        assert!(r.counterexample.as_ref().unwrap().recheck(&Constant(Z)));
    }

    #[test]
    fn neutrality_checks() {
        let swap = Permutation::swap(X, Y);
        assert_eq!(check_neutrality(&Rule::Borda, &u(rat(1, 2), rat(1, 5)), swap).verdict, Verdict::Satisfied);
        let r = check_neutrality(&Constant(X), &u(rat(1, 2), rat(1, 5)), swap);
        assert!(r.is_violation());
        assert!(r.counterexample.unwrap().recheck(&Constant(X)));
        assert_eq!(check_neutrality(&Rule::Borda, &cycle(), swap).verdict, Verdict::NotApplicable);
    }

    #[test]
    fn iia_checks() {
        // Borda elects y here but x beats y head to head.
        let p = Profile::from_compact(Domain::FULL, &[("xyz", rat(3, 5)), ("yzx", rat(2, 5))]).unwrap();
        assert_eq!(Rule::Borda.evaluate(&p, AltSet::ALL).unwrap().winner(), Some(Y));
        let r = check_iia(&Rule::Borda, &p, AltSet::from_alts(&[X, Y]));
        assert!(r.is_violation());
        assert!(r.counterexample.unwrap().recheck(&Rule::Borda));
        assert_eq!(check_iia(&Rule::Borda, &p, AltSet::from_alts(&[X, Z])).verdict, Verdict::NotApplicable);
        assert_eq!(check_iia(&Rule::Condorcet, &cycle(), AltSet::from_alts(&[X, Y])).verdict, Verdict::NotApplicable);
    }

    #[test]
    fn tied_pair_is_not_a_violation() {
        // z meets every rival with at least half, x and z split exactly.
        let p = Profile::from_compact(Domain::FULL, &[("xzy", rat(1, 6)), ("yxz", rat(1, 3)), ("zyx", rat(1, 2))]).unwrap();
        assert_eq!(Rule::Condorcet.evaluate(&p, AltSet::ALL).unwrap().winner(), Some(Z));
        let r = check_iia(&Rule::Condorcet, &p, AltSet::from_alts(&[X, Z]));
        assert_eq!(r.verdict, Verdict::NotApplicable);
        assert_eq!(check_iia(&Rule::Condorcet, &p, AltSet::from_alts(&[Y, Z])).verdict, Verdict::Satisfied);
    }

    #[test]
    fn anonymity_is_structural() {
        let r = check_anonymity_structural(&Rule::Plurality);
        assert_eq!(r.verdict, Verdict::Satisfied);
        assert!(r.note.contains("structural"));
    }

    #[test]
    fn sweeps_report_first_violations() {
        let reports = audit_sweep(&Rule::Borda, grid_profiles(Domain::FULL, 10));
        assert_eq!(reports[0].verdict, Verdict::Satisfied);
        assert_eq!(reports[2].verdict, Verdict::Satisfied);
        assert!(reports[3].is_violation());
        let record = reports[3].render_record();
        assert!(record.contains("axiom=iia") && record.contains("profile:\ndomain: full\n"));
        let text = reports[3].render_text();
        assert!(text.starts_with("iia for borda: violated"));
    }

    #[test]
    fn single_profile_audit() {
        let reports = audit_profile(&Rule::Condorcet, &u(rat(3, 5), rat(1, 5)));
        assert!(reports.iter().all(|r| !r.is_violation()));
    }
}
