//! Exact checking of one scenario at one parameter point.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::alternative::AltSet;
use crate::profile::{permute_profile, transfer_weight, Move, Profile};
use crate::rational::{format_rational, Rational};
use crate::rules::Rule;

use super::catalog::{
    AnchorKind, Chain, Hypothesis, Justification, OutcomeSpec, ProfileRef, ProfileSource, Scenario, Step, Template,
};
use super::expr::{Env, ExprError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("scenario {scenario} needs parameter `{name}`")]
    MissingParam { scenario: String, name: String },
    #[error("scenario {scenario} has no parameter `{name}`")]
    UnexpectedParam { scenario: String, name: String },
    #[error("precondition violated in {scenario}: {condition}")]
    PreconditionViolation { scenario: String, condition: String },
    #[error("cannot evaluate {context} in {scenario}: {error}")]
    Eval { scenario: String, context: String, error: ExprError },
    #[error("no parameter point satisfying the preconditions of {0} was found")]
    NoSample(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Profile,
    Identity,
    Bound,
    Fact,
    Hypothesis,
    Step,
    Chain,
    Anchor,
    Closure,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckKind::Profile => "profile",
            CheckKind::Identity => "identity",
            CheckKind::Bound => "bound",
            CheckKind::Fact => "fact",
            CheckKind::Hypothesis => "hypothesis",
            CheckKind::Step => "step",
            CheckKind::Chain => "chain",
            CheckKind::Anchor => "anchor",
            CheckKind::Closure => "closure",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub kind: CheckKind,
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioReport {
    pub id: String,
    pub params: Env,
    pub checks: Vec<Check>,
    pub reductions: Vec<String>,
    pub notes: Vec<String>,
    pub asserted: Vec<String>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn param_text(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={}", format_rational(v))).collect::<Vec<_>>().join(" ")
    }

    pub fn render_text(&self) -> String {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        let mut out = format!("case {} at {}: {} ({} checks)\n", self.id, self.param_text(), verdict, self.checks.len());
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!("  {mark} {:<10} {}", c.kind.to_string(), c.label));
            if !c.detail.is_empty() {
                out.push_str(&format!(": {}", c.detail));
            }
            out.push('\n');
        }
        if !self.reductions.is_empty() {
            out.push_str(&format!("  reduces to {}\n", self.reductions.join(", ")));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        for a in &self.asserted {
            out.push_str(&format!("  asserted, not encoded: {a}\n"));
        }
        out
    }

    pub fn render_record(&self) -> String {
        let mut out = format!("case={}\nparams={}\npassed={}\nchecks={}\n", self.id, self.param_text(), self.passed(), self.checks.len());
        for c in &self.checks {
            out.push_str(&format!("check={}|{}|{}|{}\n", c.kind, if c.passed { "ok" } else { "fail" }, c.label, c.detail));
        }
        for r in &self.reductions {
            out.push_str(&format!("reduces={r}\n"));
        }
        for a in &self.asserted {
            out.push_str(&format!("asserted={a}\n"));
        }
        out
    }
}

/// Binds parameters, evaluates derived quantities and checks preconditions.
pub fn bind(scenario: &Scenario, params: &Env) -> Result<Env, ReplayError> {
    for name in params.keys() {
        if !scenario.params.iter().any(|p| &p.name == name) {
            return Err(ReplayError::UnexpectedParam { scenario: scenario.id.clone(), name: name.clone() });
        }
    }
    let mut env = Env::new();
    for p in &scenario.params {
        let v = params
            .get(&p.name)
            .ok_or_else(|| ReplayError::MissingParam { scenario: scenario.id.clone(), name: p.name.clone() })?;
        env.insert(p.name.clone(), *v);
    }
    for (name, e) in &scenario.lets {
        let v = e.eval(&env).map_err(|error| ReplayError::Eval {
            scenario: scenario.id.clone(),
            context: format!("`let {name}`"),
            error,
        })?;
        env.insert(name.clone(), v);
    }
    for c in &scenario.requires {
        let (ok, _, _) = c.eval(&env).map_err(|error| ReplayError::Eval {
            scenario: scenario.id.clone(),
            context: format!("`require {c}`"),
            error,
        })?;
        if !ok {
            return Err(ReplayError::PreconditionViolation { scenario: scenario.id.clone(), condition: c.text.clone() });
        }
    }
    Ok(env)
}

struct Verifier<'a> {
    sc: &'a Scenario,
    env: Env,
    cache: HashMap<(String, Option<Rational>), Result<Profile, String>>,
}

fn instantiate(sc: &Scenario, template: &Template, env: &Env) -> Result<Profile, String> {
    let mut weights: [Rational; 6] = Default::default();
    for (e, r) in &template.entries {
        weights[r.index()] += e.eval(env).map_err(|e| e.to_string())?;
    }
    Profile::from_weights(sc.domain, weights).map_err(|e| e.to_string())
}

impl<'a> Verifier<'a> {
    fn resolve(&mut self, r: &ProfileRef, extra: &Env) -> Result<Profile, String> {
        let scope = self.scope(extra);
        let index = match &r.index {
            Some(e) => Some(e.eval(&scope).map_err(|e| e.to_string())?),
            None => None,
        };
        let key = (r.name.clone(), index);
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let result = match index {
            Some(i) => {
                let fam = self.sc.family(&r.name).ok_or_else(|| format!("no family `{}`", r.name))?;
                let mut env = self.env.clone();
                env.insert(fam.var.clone(), i);
                instantiate(self.sc, &fam.template, &env)
            }
            None => {
                let t = self.sc.profile(&r.name).ok_or_else(|| format!("no profile `{}`", r.name))?;
                instantiate(self.sc, t, &self.env)
            }
        };
        let result = result.map_err(|e| format!("{} is not a valid profile: {e}", r.text));
        self.cache.insert(key, result.clone());
        result
    }

    fn scope(&self, extra: &Env) -> Env {
        let mut scope = self.env.clone();
        scope.extend(extra.iter().map(|(k, v)| (k.clone(), *v)));
        scope
    }

    fn hypotheses_of(&self, r: &ProfileRef) -> impl Iterator<Item = &'a Hypothesis> + '_ {
        let text = r.text.clone();
        self.sc.hypotheses.iter().filter(move |h| h.target.text == text)
    }

    /// The outcome claimed for `r` by a justification other than Pareto.
    fn claim_of(&self, r: &ProfileRef) -> Option<OutcomeSpec> {
        self.hypotheses_of(r).find(|h| h.why != Justification::Pareto).map(|h| h.claim)
    }

    /// Returns the moved mass on success.
    fn step(&mut self, step: &Step, extra: &Env) -> Result<Rational, String> {
        let scope = self.scope(extra);
        let from = self.resolve(&step.from, extra)?;
        let to = self.resolve(&step.to, extra)?;
        let moves = step
            .moves
            .iter()
            .map(|m| m.amount.eval(&scope).map(|a| Move::new(m.from, m.to, a)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let (after, size) = transfer_weight(&from, &moves).map_err(|e| e.to_string())?;
        if !after.same_weights(&to) {
            return Err(format!("moves from {} do not reproduce {}", step.from.text, step.to.text));
        }
        let epsilon = *self.env.get("epsilon").ok_or("scenario has no epsilon")?;
        if size >= epsilon {
            return Err(format!("moved mass {} is not below epsilon {}", format_rational(&size), format_rational(&epsilon)));
        }
        let (old, new) = (step.old.allowed(), step.new.allowed());
        if !old.is_disjoint(new) {
            return Err(format!("old {} and new {} overlap", step.old, step.new));
        }
        for m in &moves {
            if !m.from.prefers_all(new, old) {
                return Err(format!("{} does not prefer {} to {}", m.from, step.new, step.old));
            }
        }
        // Claims concluded by contradiction are exempt: the step that
        // establishes them supposes the opposite. Pareto claims only exclude,
        // so the supposed outcome has to stay inside them.
        for h in self.hypotheses_of(&step.from).filter(|h| h.why != Justification::Step) {
            let ok = if h.why == Justification::Pareto {
                old.iter().all(|a| h.claim.allowed().contains(a))
            } else {
                h.claim.allowed().iter().all(|a| old.contains(a))
            };
            if !ok {
                return Err(format!("{} is claimed {}, step assumes old {}", step.from.text, h.claim, step.old));
            }
        }
        for h in self.hypotheses_of(&step.to).filter(|h| h.why != Justification::Step) {
            let ok = if h.why == Justification::Pareto {
                new.iter().all(|a| h.claim.allowed().contains(a))
            } else {
                h.claim.allowed().iter().all(|a| new.contains(a))
            };
            if !ok {
                return Err(format!("{} is claimed {}, step assumes new {}", step.to.text, h.claim, step.new));
            }
        }
        Ok(size)
    }

    fn chain(&mut self, chain: &Chain) -> Result<String, String> {
        let bound = |e: &super::expr::Expr, env: &Env| -> Result<i128, String> {
            let v = e.eval(env).map_err(|e| e.to_string())?;
            if !v.is_integer() {
                return Err(format!("chain bound {} is not an integer", format_rational(&v)));
            }
            Ok(v.to_integer())
        };
        let lo = bound(&chain.lo, &self.env)?;
        let hi = bound(&chain.hi, &self.env)?;
        let mut largest = Rational::zero();
        for j in lo..=hi {
            let mut extra = Env::new();
            extra.insert(chain.var.clone(), Rational::from_integer(j));
            let size = self.step(&chain.step, &extra).map_err(|e| format!("{}={j}: {e}", chain.var))?;
            largest = largest.max(size);
        }
        let count = (hi - lo + 1).max(0);
        Ok(format!("{count} steps, largest moved mass {}", format_rational(&largest)))
    }
}

fn check(kind: CheckKind, label: impl Into<String>, result: Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check { kind, label: label.into(), passed: true, detail },
        Err(detail) => Check { kind, label: label.into(), passed: false, detail },
    }
}

/// Checks every claim of `scenario` at `params` with exact arithmetic.
///
/// Fails with an error (rather than a failing check) when the parameters do
/// not satisfy the scenario's preconditions.
pub fn verify_scenario(scenario: &Scenario, params: &Env) -> Result<ScenarioReport, ReplayError> {
    let env = bind(scenario, params)?;
    let mut v = Verifier { sc: scenario, env, cache: HashMap::new() };
    let mut checks = Vec::new();
    let none = Env::new();

    for (name, _) in &scenario.profiles {
        let r = ProfileRef { name: name.clone(), index: None, text: name.clone() };
        checks.push(check(CheckKind::Profile, name.clone(), v.resolve(&r, &none).map(|_| String::new())));
    }
    for c in &scenario.identities {
        checks.push(check(CheckKind::Identity, c.text.clone(), condition(c, &v.env)));
    }
    for c in &scenario.bounds {
        checks.push(check(CheckKind::Bound, c.text.clone(), condition(c, &v.env)));
    }
    for f in &scenario.facts {
        let result = v.resolve(&f.target, &none).and_then(|p| {
            let out = f.rule.evaluate(&p, AltSet::ALL).map_err(|e| e.to_string())?;
            match out.winner() {
                Some(w) if w == f.winner => Ok(String::new()),
                _ => Err(format!("{} gives {out}", f.rule)),
            }
        });
        checks.push(check(CheckKind::Fact, format!("{} elects {} on {}", f.rule, f.winner, f.target.text), result));
    }
    for h in &scenario.hypotheses {
        let result = hypothesis(&mut v, h);
        checks.push(check(CheckKind::Hypothesis, format!("{} = {} (line {})", h.target.text, h.claim, h.line), result));
    }
    for s in &scenario.steps.clone() {
        let result = v.step(s, &none).map(|size| format!("moved mass {}", format_rational(&size)));
        checks.push(check(CheckKind::Step, format!("{} -> {} (line {})", s.from.text, s.to.text, s.line), result));
    }
    checks.extend(chain_checks(&mut v));
    for &perm in &scenario.closures {
        let ok = scenario.domain.is_closed_under(perm);
        let result = if ok { Ok(String::new()) } else { Err("image differs from the domain".to_string()) };
        checks.push(check(CheckKind::Closure, format!("domain closed under {perm}"), result));
    }
    Ok(ScenarioReport {
        id: scenario.id.clone(),
        params: params.clone(),
        checks,
        reductions: scenario.reductions.clone(),
        notes: scenario.notes.clone(),
        asserted: scenario.asserted.clone(),
    })
}

/// Checks only the induction chains of `scenario` and their anchors.
pub fn verify_induction_chain(scenario: &Scenario, params: &Env) -> Result<Vec<Check>, ReplayError> {
    let env = bind(scenario, params)?;
    let mut v = Verifier { sc: scenario, env, cache: HashMap::new() };
    Ok(chain_checks(&mut v))
}

fn chain_checks(v: &mut Verifier<'_>) -> Vec<Check> {
    let mut out = Vec::new();
    let none = Env::new();
    for c in &v.sc.chains.clone() {
        let label = format!("{} {}: {} -> {} (line {})", c.family, c.var, c.step.from.text, c.step.to.text, c.step.line);
        out.push(check(CheckKind::Chain, label, v.chain(c)));
    }
    for a in &v.sc.anchors.clone() {
        let kind = match a.kind {
            AnchorKind::Base => "base",
            AnchorKind::Endpoint => "endpoint",
        };
        let result = v.resolve(&a.member, &none).and_then(|member| {
            let other = match &a.equals {
                ProfileSource::Ref(r) => v.resolve(r, &none)?,
                ProfileSource::Inline(t) => instantiate(v.sc, t, &v.env).map_err(|e| format!("template: {e}"))?,
            };
            if member.same_weights(&other) {
                Ok(String::new())
            } else {
                Err(format!("{} differs from the stated profile", a.member.text))
            }
        });
        out.push(check(CheckKind::Anchor, format!("{kind} {}", a.member.text), result));
    }
    out
}

fn condition(c: &super::expr::Condition, env: &Env) -> Result<String, String> {
    let (ok, l, r) = c.eval(env).map_err(|e| e.to_string())?;
    let detail = format!("{} vs {}", format_rational(&l), format_rational(&r));
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn hypothesis(v: &mut Verifier<'_>, h: &Hypothesis) -> Result<String, String> {
    let none = Env::new();
    let target = v.resolve(&h.target, &none)?;
    match &h.why {
        Justification::Assumed => Ok("assumed".into()),
        Justification::Step => {
            // Some step must start from the opposite supposition, or reach it.
            // Other claims on the same profile (typically Pareto) narrow
            // what the opposite supposition has to cover.
            let known = v
                .hypotheses_of(&h.target)
                .filter(|o| o.why != Justification::Step)
                .fold(AltSet::ALL, |acc, o| acc.intersection(o.claim.allowed()));
            let opposite = h.claim.allowed().complement().intersection(known);
            let name = &h.target.name;
            let steps = v.sc.steps.iter().chain(v.sc.chains.iter().map(|c| &c.step));
            let concluded = steps.into_iter().any(|s| {
                (&s.from.name == name && s.old.allowed() == opposite) || (&s.to.name == name && s.new.allowed() == opposite)
            });
            if concluded {
                Ok("concluded by contradiction".into())
            } else {
                Err("no step supposes the opposite outcome".into())
            }
        }
        Justification::Borda | Justification::Condorcet => {
            let rule = if h.why == Justification::Borda { Rule::Borda } else { Rule::Condorcet };
            let out = rule.evaluate(&target, AltSet::ALL).map_err(|e| e.to_string())?;
            match out.winner() {
                Some(w) if h.claim.allowed().contains(w) => Ok(format!("{rule} elects {w}")),
                _ => Err(format!("{rule} gives {out}")),
            }
        }
        Justification::Pareto => {
            let excluded = h.claim.allowed().complement();
            let dominated = target.pareto_dominated();
            if excluded.iter().all(|a| dominated.contains(a)) {
                Ok(format!("{excluded} dominated"))
            } else {
                Err(format!("only {dominated} is dominated"))
            }
        }
        Justification::Same(src) => {
            let source = v.resolve(src, &none)?;
            if !source.same_weights(&target) {
                return Err(format!("{} and {} differ", src.text, h.target.text));
            }
            match v.claim_of(src) {
                Some(c) if c == h.claim => Ok(format!("same profile as {}", src.text)),
                other => Err(format!("{} is claimed {:?}", src.text, other.map(|c| c.to_string()))),
            }
        }
        Justification::Perm(src, perm) => {
            let source = v.resolve(src, &none)?;
            if !permute_profile(&source, *perm).same_weights(&target) {
                return Err(format!("relabeling {} by {perm} does not give {}", src.text, h.target.text));
            }
            match v.claim_of(src) {
                Some(c) if c.permuted(*perm) == h.claim => Ok(format!("relabeled {}", src.text)),
                other => Err(format!(
                    "{} is claimed {:?}, which relabels to something else",
                    src.text,
                    other.map(|c| c.to_string())
                )),
            }
        }
    }
}
