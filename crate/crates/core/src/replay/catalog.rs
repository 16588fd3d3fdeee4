//! Scenario data model and the parser for the plain-text catalog.
//!
//! One scenario per `scenario <id>` ... `end` block. Lines starting with `#`
//! are comments. Directives, one per line:
//!
//! ```text
//! domain <name>|{x>y>z, ...}             rankings the argument lives on
//! param <name> ...                        free parameters, sampled in (0, 1)
//! range <name> <lo> <hi>                  open sampling interval for a param
//! let <name> = <expr>                     derived quantity, in order
//! require <expr> <rel> <expr>             precondition of the case
//! profile <name> = <w> <rank>; ...        profile template, rankings as `xzy`
//! family <name>[<var>] = <w> <rank>; ...  indexed profile template
//! hyp <ref> = <out> <why>                 outcome claim and its justification
//! fact <rule> <ref> = <alt>               the named rule elects <alt>
//! step <ref> -> <ref> : <moves> ; old <out> ; new <out>
//! chain <family> <var>=<lo>..<hi> : <ref> -> <ref> : <moves> ; old <out> ; new <out>
//! base <ref> = <ref or template>          first member of a chain
//! endpoint <ref> = <ref or template>      last member of a chain
//! identity <expr> = <expr>                exact equality
//! bound <expr> <rel> <expr>               inequality claim
//! closed <perm>                           domain maps onto itself
//! reduces <id> ...                        case handed off to other scenarios
//! note <text>                             remark carried into reports
//! asserted <text>                         claimed but not encoded
//! ```
//!
//! `<ref>` is a profile name or `family[expr]`. `<out>` is an alternative
//! (`x`) or a complement (`!x`). `<moves>` is a comma-separated list of
//! `true>reported amount` with rankings as `xyz`. `<why>` is one of
//! `assumed`, `step`, `borda`, `condorcet`, `pareto`, `same <ref>` or
//! `perm <ref> <images>` where `<images>` lists the images of x, y, z.

use thiserror::Error;

use crate::alternative::{AltSet, Alternative, Permutation, Ranking};
use crate::domain::Domain;
use crate::rational::{parse_rational, Rational};
use crate::rules::Rule;

use super::expr::{parse_condition, parse_expr, Condition, Expr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("catalog line {line}: {message}")]
pub struct CatalogError {
    pub line: usize,
    pub message: String,
}

/// A claimed outcome: exactly `alt`, or anything but `alt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutcomeSpec {
    pub alt: Alternative,
    pub negated: bool,
}

impl OutcomeSpec {
    /// Alternatives the claim allows.
    pub fn allowed(self) -> AltSet {
        if self.negated {
            AltSet::singleton(self.alt).complement()
        } else {
            AltSet::singleton(self.alt)
        }
    }

    pub fn permuted(self, perm: Permutation) -> OutcomeSpec {
        OutcomeSpec { alt: perm.apply(self.alt), negated: self.negated }
    }

    fn parse(text: &str) -> Result<OutcomeSpec, String> {
        let t = text.trim();
        let (negated, body) = match t.strip_prefix('!') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let alt = body.parse::<Alternative>().map_err(|e| e.to_string())?;
        Ok(OutcomeSpec { alt, negated })
    }
}

impl std::fmt::Display for OutcomeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.negated {
            write!(f, "!{}", self.alt)
        } else {
            write!(f, "{}", self.alt)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileRef {
    pub name: String,
    pub index: Option<Expr>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub entries: Vec<(Expr, Ranking)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileSource {
    Ref(ProfileRef),
    Inline(Template),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub lo: Rational,
    pub hi: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub name: String,
    pub var: String,
    pub template: Template,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Assumed,
    Step,
    Borda,
    Condorcet,
    Pareto,
    Same(ProfileRef),
    Perm(ProfileRef, Permutation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub target: ProfileRef,
    pub claim: OutcomeSpec,
    pub why: Justification,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub rule: Rule,
    pub target: ProfileRef,
    pub winner: Alternative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveTemplate {
    pub from: Ranking,
    pub to: Ranking,
    pub amount: Expr,
}

/// A misreport from one profile to another that the argument rules out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub from: ProfileRef,
    pub to: ProfileRef,
    pub moves: Vec<MoveTemplate>,
    pub old: OutcomeSpec,
    pub new: OutcomeSpec,
    pub line: usize,
}

/// The same step repeated for each value of `var` in `lo..=hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub family: String,
    pub var: String,
    pub lo: Expr,
    pub hi: Expr,
    pub step: Step,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorKind {
    Base,
    Endpoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    pub kind: AnchorKind,
    pub member: ProfileRef,
    pub equals: ProfileSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub id: String,
    pub domain: Domain,
    pub params: Vec<Param>,
    pub lets: Vec<(String, Expr)>,
    pub requires: Vec<Condition>,
    pub profiles: Vec<(String, Template)>,
    pub families: Vec<Family>,
    pub hypotheses: Vec<Hypothesis>,
    pub facts: Vec<Fact>,
    pub steps: Vec<Step>,
    pub chains: Vec<Chain>,
    pub anchors: Vec<Anchor>,
    pub identities: Vec<Condition>,
    pub bounds: Vec<Condition>,
    pub closures: Vec<Permutation>,
    pub reductions: Vec<String>,
    pub notes: Vec<String>,
    pub asserted: Vec<String>,
}

impl Scenario {
    fn empty(id: String) -> Scenario {
        Scenario {
            id,
            domain: Domain::FULL,
            params: Vec::new(),
            lets: Vec::new(),
            requires: Vec::new(),
            profiles: Vec::new(),
            families: Vec::new(),
            hypotheses: Vec::new(),
            facts: Vec::new(),
            steps: Vec::new(),
            chains: Vec::new(),
            anchors: Vec::new(),
            identities: Vec::new(),
            bounds: Vec::new(),
            closures: Vec::new(),
            reductions: Vec::new(),
            notes: Vec::new(),
            asserted: Vec::new(),
        }
    }

    pub fn param_names(&self) -> impl Iterator<Item = &str> {
        self.params.iter().map(|p| p.name.as_str())
    }

    pub fn family(&self, name: &str) -> Option<&Family> {
        self.families.iter().find(|f| f.name == name)
    }

    pub fn profile(&self, name: &str) -> Option<&Template> {
        self.profiles.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }
}

/// Splits on `sep` outside parentheses and brackets.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct LineParser<'a> {
    line: usize,
    scenario: &'a Scenario,
}

impl LineParser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, CatalogError> {
        Err(CatalogError { line: self.line, message: message.into() })
    }

    fn expr(&self, text: &str) -> Result<Expr, CatalogError> {
        parse_expr(text).or_else(|e| self.err(e.to_string()))
    }

    fn condition(&self, text: &str) -> Result<Condition, CatalogError> {
        parse_condition(text).or_else(|e| self.err(e.to_string()))
    }

    fn ranking(&self, text: &str) -> Result<Ranking, CatalogError> {
        let r = Ranking::from_compact(text).or_else(|e| self.err(e.to_string()))?;
        if !self.scenario.domain.contains(r) {
            return self.err(format!("ranking {r} is outside the scenario domain"));
        }
        Ok(r)
    }

    fn outcome(&self, text: &str) -> Result<OutcomeSpec, CatalogError> {
        OutcomeSpec::parse(text).or_else(|e| self.err(e))
    }

    fn profile_ref(&self, text: &str) -> Result<ProfileRef, CatalogError> {
        let t = text.trim();
        let (name, index) = match t.split_once('[') {
            Some((name, rest)) => {
                let inner = rest.strip_suffix(']').map_or_else(|| self.err("missing `]`"), Ok)?;
                (name.trim(), Some(self.expr(inner)?))
            }
            None => (t, None),
        };
        if !is_ident(name) {
            return self.err(format!("bad profile reference `{t}`"));
        }
        let known = match index {
            Some(_) => self.scenario.family(name).is_some(),
            None => self.scenario.profile(name).is_some(),
        };
        if !known {
            return self.err(format!("undefined profile `{t}`"));
        }
        Ok(ProfileRef { name: name.to_string(), index, text: t.to_string() })
    }

    fn template(&self, text: &str) -> Result<Template, CatalogError> {
        let mut entries = Vec::new();
        for part in split_top(text, ';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (weight, rank) = part.rsplit_once(char::is_whitespace).map_or_else(
                || self.err(format!("expected `<weight> <ranking>` in `{part}`")),
                Ok,
            )?;
            entries.push((self.expr(weight)?, self.ranking(rank)?));
        }
        if entries.is_empty() {
            return self.err("empty profile template");
        }
        Ok(Template { entries })
    }

    fn moves(&self, text: &str) -> Result<Vec<MoveTemplate>, CatalogError> {
        let mut out = Vec::new();
        for part in split_top(text, ',') {
            let part = part.trim();
            let (pair, amount) =
                part.split_once(char::is_whitespace).map_or_else(|| self.err(format!("bad move `{part}`")), Ok)?;
            let (from, to) = pair.split_once('>').map_or_else(|| self.err(format!("bad move `{part}`")), Ok)?;
            out.push(MoveTemplate { from: self.ranking(from)?, to: self.ranking(to)?, amount: self.expr(amount)? });
        }
        Ok(out)
    }

    /// `<ref> -> <ref> : <moves> ; old <out> ; new <out>`
    fn step(&self, text: &str) -> Result<Step, CatalogError> {
        let (ends, rest) = text.split_once(':').map_or_else(|| self.err("step needs `:`"), Ok)?;
        let (from, to) = ends.split_once("->").map_or_else(|| self.err("step needs `->`"), Ok)?;
        let parts: Vec<&str> = split_top(rest, ';');
        if parts.len() != 3 {
            return self.err("step needs `moves ; old <out> ; new <out>`");
        }
        let old = parts[1].trim().strip_prefix("old").map_or_else(|| self.err("expected `old`"), Ok)?;
        let new = parts[2].trim().strip_prefix("new").map_or_else(|| self.err("expected `new`"), Ok)?;
        Ok(Step {
            from: self.profile_ref(from)?,
            to: self.profile_ref(to)?,
            moves: self.moves(parts[0])?,
            old: self.outcome(old)?,
            new: self.outcome(new)?,
            line: self.line,
        })
    }

    fn justification(&self, words: &[&str]) -> Result<Justification, CatalogError> {
        Ok(match words {
            ["assumed"] => Justification::Assumed,
            ["step"] => Justification::Step,
            ["borda"] => Justification::Borda,
            ["condorcet"] => Justification::Condorcet,
            ["pareto"] => Justification::Pareto,
            ["same", src] => Justification::Same(self.profile_ref(src)?),
            ["perm", src, images] => {
                let perm = Permutation::from_compact(images).or_else(|e| self.err(e.to_string()))?;
                Justification::Perm(self.profile_ref(src)?, perm)
            }
            _ => return self.err(format!("unknown justification `{}`", words.join(" "))),
        })
    }
}

fn split_def(text: &str) -> Option<(&str, &str)> {
    text.split_once('=').map(|(a, b)| (a.trim(), b.trim()))
}

/// Parses a whole catalog.
pub fn parse_catalog(text: &str) -> Result<Vec<Scenario>, CatalogError> {
    let mut out: Vec<Scenario> = Vec::new();
    let mut current: Option<Scenario> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let err = |message: String| CatalogError { line: line_no, message };
        if keyword == "scenario" {
            if current.is_some() {
                return Err(err("missing `end` before new scenario".into()));
            }
            if rest.is_empty() || out.iter().any(|s| s.id == rest) {
                return Err(err(format!("missing or duplicate scenario id `{rest}`")));
            }
            current = Some(Scenario::empty(rest.to_string()));
            continue;
        }
        let Some(sc) = current.as_mut() else {
            return Err(err(format!("`{keyword}` outside a scenario block")));
        };
        if keyword == "end" {
            out.push(current.take().expect("inside a scenario"));
            continue;
        }
        let parsed = {
            let p = LineParser { line: line_no, scenario: sc };
            parse_directive(&p, keyword, rest)?
        };
        apply_directive(sc, parsed).map_err(err)?;
    }
    if current.is_some() {
        return Err(CatalogError { line: text.lines().count(), message: "unterminated scenario".into() });
    }
    Ok(out)
}

enum Directive {
    Domain(Domain),
    Params(Vec<String>),
    Range(String, Rational, Rational),
    Let(String, Expr),
    Require(Condition),
    Profile(String, Template),
    Family(Family),
    Hyp(Hypothesis),
    Fact(Fact),
    Step(Step),
    Chain(Chain),
    Anchor(Anchor),
    Identity(Condition),
    Bound(Condition),
    Closed(Permutation),
    Reduces(Vec<String>),
    Note(String),
    Asserted(String),
}

fn parse_directive(p: &LineParser<'_>, keyword: &str, rest: &str) -> Result<Directive, CatalogError> {
    Ok(match keyword {
        "domain" => Directive::Domain(rest.parse::<Domain>().or_else(|e| p.err(e.to_string()))?),
        "param" => Directive::Params(rest.split_whitespace().map(String::from).collect()),
        "range" => {
            let w: Vec<&str> = rest.split_whitespace().collect();
            let [name, lo, hi] = w.as_slice() else {
                return p.err("range needs `<name> <lo> <hi>`");
            };
            let lo = parse_rational(lo).or_else(|e| p.err(e.to_string()))?;
            let hi = parse_rational(hi).or_else(|e| p.err(e.to_string()))?;
            Directive::Range(name.to_string(), lo, hi)
        }
        "let" => {
            let (name, e) = split_def(rest).map_or_else(|| p.err("let needs `=`"), Ok)?;
            if !is_ident(name) {
                return p.err(format!("bad name `{name}`"));
            }
            Directive::Let(name.to_string(), p.expr(e)?)
        }
        "require" => Directive::Require(p.condition(rest)?),
        "identity" => {
            let c = p.condition(rest)?;
            if c.rel != super::expr::Relation::Eq {
                return p.err("identity must be an equation");
            }
            Directive::Identity(c)
        }
        "bound" => Directive::Bound(p.condition(rest)?),
        "profile" => {
            let (name, t) = split_def(rest).map_or_else(|| p.err("profile needs `=`"), Ok)?;
            if !is_ident(name) {
                return p.err(format!("bad name `{name}`"));
            }
            Directive::Profile(name.to_string(), p.template(t)?)
        }
        "family" => {
            let (head, t) = split_def(rest).map_or_else(|| p.err("family needs `=`"), Ok)?;
            let (name, var) = head
                .strip_suffix(']')
                .and_then(|h| h.split_once('['))
                .map_or_else(|| p.err("family needs `name[var]`"), Ok)?;
            if !is_ident(name) || !is_ident(var) {
                return p.err(format!("bad family head `{head}`"));
            }
            Directive::Family(Family { name: name.to_string(), var: var.to_string(), template: p.template(t)? })
        }
        "hyp" => {
            let (target, claim) = split_def(rest).map_or_else(|| p.err("hyp needs `=`"), Ok)?;
            let words: Vec<&str> = claim.split_whitespace().collect();
            if words.len() < 2 {
                return p.err("hyp needs `<ref> = <outcome> <justification>`");
            }
            Directive::Hyp(Hypothesis {
                target: p.profile_ref(target)?,
                claim: p.outcome(words[0])?,
                why: p.justification(&words[1..])?,
                line: p.line,
            })
        }
        "fact" => {
            let (head, alt) = split_def(rest).map_or_else(|| p.err("fact needs `=`"), Ok)?;
            let (rule, target) = head.split_once(char::is_whitespace).map_or_else(|| p.err("fact needs a rule"), Ok)?;
            Directive::Fact(Fact {
                rule: rule.parse::<Rule>().or_else(|e| p.err(e.to_string()))?,
                target: p.profile_ref(target)?,
                winner: alt.parse::<Alternative>().or_else(|e| p.err(e.to_string()))?,
            })
        }
        "step" => Directive::Step(p.step(rest)?),
        "chain" => {
            let (head, body) = rest.split_once(':').map_or_else(|| p.err("chain needs `:`"), Ok)?;
            let words: Vec<&str> = head.split_whitespace().collect();
            let [family, range] = words.as_slice() else {
                return p.err("chain needs `<family> <var>=<lo>..<hi>`");
            };
            if p.scenario.family(family).is_none() {
                return p.err(format!("undefined family `{family}`"));
            }
            let (var, bounds) = range.split_once('=').map_or_else(|| p.err("chain range needs `=`"), Ok)?;
            let (lo, hi) = bounds.split_once("..").map_or_else(|| p.err("chain range needs `..`"), Ok)?;
            Directive::Chain(Chain {
                family: family.to_string(),
                var: var.to_string(),
                lo: p.expr(lo)?,
                hi: p.expr(hi)?,
                step: p.step(body)?,
            })
        }
        "base" | "endpoint" => {
            let (member, value) = split_def(rest).map_or_else(|| p.err("anchor needs `=`"), Ok)?;
            let equals = if is_ident(value) {
                ProfileSource::Ref(p.profile_ref(value)?)
            } else {
                ProfileSource::Inline(p.template(value)?)
            };
            let kind = if keyword == "base" { AnchorKind::Base } else { AnchorKind::Endpoint };
            Directive::Anchor(Anchor { kind, member: p.profile_ref(member)?, equals })
        }
        "closed" => Directive::Closed(Permutation::from_compact(rest).or_else(|e| p.err(e.to_string()))?),
        "reduces" => Directive::Reduces(rest.split_whitespace().map(String::from).collect()),
        "note" => Directive::Note(rest.to_string()),
        "asserted" => Directive::Asserted(rest.to_string()),
        other => return p.err(format!("unknown directive `{other}`")),
    })
}

fn apply_directive(sc: &mut Scenario, d: Directive) -> Result<(), String> {
    match d {
        Directive::Domain(dom) => {
            if !sc.profiles.is_empty() || !sc.families.is_empty() {
                return Err("domain must come before profiles".into());
            }
            sc.domain = dom;
        }
        Directive::Params(names) => {
            for name in names {
                if !is_ident(&name) || sc.params.iter().any(|p| p.name == name) {
                    return Err(format!("bad or repeated parameter `{name}`"));
                }
                sc.params.push(Param { name, lo: Rational::from_integer(0), hi: Rational::from_integer(1) });
            }
        }
        Directive::Range(name, lo, hi) => {
            let p = sc.params.iter_mut().find(|p| p.name == name).ok_or(format!("unknown parameter `{name}`"))?;
            if lo >= hi {
                return Err("empty range".into());
            }
            p.lo = lo;
            p.hi = hi;
        }
        Directive::Let(name, e) => sc.lets.push((name, e)),
        Directive::Require(c) => sc.requires.push(c),
        Directive::Profile(name, t) => {
            if sc.profile(&name).is_some() {
                return Err(format!("profile `{name}` defined twice"));
            }
            sc.profiles.push((name, t));
        }
        Directive::Family(f) => {
            if sc.family(&f.name).is_some() {
                return Err(format!("family `{}` defined twice", f.name));
            }
            sc.families.push(f);
        }
        Directive::Hyp(h) => sc.hypotheses.push(h),
        Directive::Fact(f) => sc.facts.push(f),
        Directive::Step(s) => sc.steps.push(s),
        Directive::Chain(c) => sc.chains.push(c),
        Directive::Anchor(a) => sc.anchors.push(a),
        Directive::Identity(c) => sc.identities.push(c),
        Directive::Bound(c) => sc.bounds.push(c),
        Directive::Closed(p) => sc.closures.push(p),
        Directive::Reduces(ids) => sc.reductions.extend(ids),
        Directive::Note(t) => sc.notes.push(t),
        Directive::Asserted(t) => sc.asserted.push(t),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "
# comment
scenario demo
domain cc
param a b epsilon
let k = (a - b)/2
require a > b
profile base = a xyz; b yzx; 1-a-b zxy
profile moved = a-k xyz; b+k yzx; 1-a-b zxy
family w[j] = a-j*k xyz; b+j*k yzx; 1-a-b zxy
hyp base = y assumed
hyp moved = x perm base zxy
fact borda base = x
step base -> moved : xyz>yzx k ; old y ; new !y
chain w j=0..1 : w[j] -> w[j+1] : xyz>yzx k ; old y ; new !y
base w[0] = base
endpoint w[2] = b xyz; a yzx; 1-a-b zxy
identity a - 2*k = b
bound k < epsilon
reduces other
note plain remark
asserted extension to every n
end
";

    #[test]
    fn parses_every_directive() {
        let cat = parse_catalog(SMALL).unwrap();
        assert_eq!(cat.len(), 1);
        let s = &cat[0];
        assert_eq!(s.id, "demo");
        assert_eq!(s.domain, Domain::cyclic());
        assert_eq!(s.param_names().collect::<Vec<_>>(), ["a", "b", "epsilon"]);
        assert_eq!((s.lets.len(), s.requires.len(), s.profiles.len(), s.families.len()), (1, 1, 2, 1));
        assert_eq!((s.hypotheses.len(), s.facts.len(), s.steps.len(), s.chains.len()), (2, 1, 1, 1));
        assert_eq!((s.anchors.len(), s.identities.len(), s.bounds.len()), (2, 1, 1));
        assert_eq!(s.steps[0].new, OutcomeSpec { alt: Alternative::Y, negated: true });
        assert!(matches!(s.anchors[1].equals, ProfileSource::Inline(_)));
        assert_eq!(s.reductions, ["other"]);
    }

    #[test]
    fn reports_line_numbers() {
        let bad = SMALL.replace("profile moved = a-k xyz", "profile moved = a-k xzy");
        let e = parse_catalog(&bad).unwrap_err();
        assert_eq!(e.line, 9);
        assert!(e.message.contains("outside the scenario domain"));
        let e = parse_catalog("scenario s\nfrobnicate\nend\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_catalog("scenario s\n").is_err());
        assert!(parse_catalog("param a\n").is_err());
        let e = parse_catalog("scenario s\nhyp u = x assumed\nend\n").unwrap_err();
        assert!(e.message.contains("undefined profile"));
    }

    #[test]
    fn outcome_specs() {
        let s = OutcomeSpec::parse("!z").unwrap();
        assert_eq!(s.allowed(), AltSet::from_alts(&[Alternative::X, Alternative::Y]));
        let p = Permutation::from_compact("zxy").unwrap();
        assert_eq!(OutcomeSpec::parse("y").unwrap().permuted(p).alt, Alternative::X);
        assert!(OutcomeSpec::parse("w").is_err());
    }
}
