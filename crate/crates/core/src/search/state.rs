use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::calculus::{
    andr_eq, apply_choice, detect_choice_fn, eq_resolve, factorise, leib_eq, prim_subst, resolve, rules, subsumes,
    ChoiceRegister, PrimSubstMode, RuleCtx, RuleResult,
};
use crate::clause::{Clause, ClauseId};
use crate::clausify::{clausify, ExtOptions, Namer};
use crate::term::{Name, Type};
use crate::tptp::Problem;
use crate::unify::UnifyOptions;

/// One rule application that changed the state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: String,
    pub premises: Vec<ClauseId>,
    pub conclusions: Vec<ClauseId>,
    pub note: String,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids = |v: &[ClauseId]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "{}({}) -> [{}]",
            self.rule,
            ids(&self.premises),
            ids(&self.conclusions)
        )?;
        if !self.note.is_empty() {
            write!(f, " {}", self.note)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ApplyError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("no clause with id {0}")]
    UnknownClause(ClauseId),
    #[error("rule `{rule}` takes {expected} clause(s), got {got}")]
    Arity { rule: String, expected: usize, got: usize },
}

/// What a rule application did.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Applied {
    pub new: Vec<ClauseId>,
    pub removed: Vec<ClauseId>,
    pub registered: Vec<Name>,
}

impl Applied {
    pub fn is_empty(&self) -> bool {
        self.new.is_empty() && self.removed.is_empty() && self.registered.is_empty()
    }
}

/// Every rule name the state can apply, with its number of premises.
pub const RULES: [(&str, usize); 8] = [
    (rules::RESOLVE, 2),
    (rules::FACTORISE, 1),
    (rules::EQ_RESOLVE, 1),
    (rules::DETECT_CHOICE_FN, 1),
    (rules::CHOICE, 1),
    (rules::LEIB_EQ, 1),
    (rules::ANDR_EQ, 1),
    (rules::PRIM_SUBST, 1),
];

/// The saturation state. Every clause ever derived stays in `clauses`;
/// the passive queue and the active set refer to it by id.
pub struct ProverState {
    pub clauses: BTreeMap<ClauseId, Clause>,
    passive_weight: BTreeSet<(usize, ClauseId)>,
    passive_age: VecDeque<ClauseId>,
    passive: BTreeSet<ClauseId>,
    pub active: Vec<ClauseId>,
    pub choice: ChoiceRegister,
    pub namer: Namer,
    pub trace: Vec<TraceEntry>,
    pub base_types: Vec<Type>,
    pub unify: UnifyOptions,
    pub ps: PrimSubstMode,
    /// Heavier conclusions are discarded.
    pub max_weight: Option<usize>,
    /// Some unification problem was cut by the depth bound.
    pub exhausted: bool,
    /// Some conclusion was discarded by the weight bound.
    pub discarded: bool,
    pub has_conjecture: bool,
    /// The first empty clause derived.
    pub empty: Option<ClauseId>,
    keys: HashSet<String>,
    next_id: ClauseId,
    picks: u64,
}

impl ProverState {
    pub fn new(ext: ExtOptions) -> ProverState {
        ProverState {
            clauses: BTreeMap::new(),
            passive_weight: BTreeSet::new(),
            passive_age: VecDeque::new(),
            passive: BTreeSet::new(),
            active: Vec::new(),
            choice: ChoiceRegister::new(),
            namer: Namer::new(),
            trace: Vec::new(),
            base_types: vec![Type::Iota],
            unify: UnifyOptions {
                boolean_ext: ext.boolean_ext,
                functional_ext: ext.functional_ext,
                ..UnifyOptions::default()
            },
            ps: PrimSubstMode::default(),
            max_weight: None,
            exhausted: false,
            discarded: false,
            has_conjecture: false,
            empty: None,
            keys: HashSet::new(),
            next_id: 1,
            picks: 0,
        }
    }

    /// Clausifies a problem into a fresh state.
    pub fn from_problem(p: &Problem, ext: ExtOptions) -> ProverState {
        let mut s = ProverState::new(ext);
        s.load(p);
        s
    }

    /// Adds the clauses of a problem to the passive set.
    pub fn load(&mut self, p: &Problem) -> Vec<ClauseId> {
        let ext = ExtOptions {
            boolean_ext: self.unify.boolean_ext,
            functional_ext: self.unify.functional_ext,
        };
        for b in &p.base_types {
            let t = Type::Base(b.clone());
            if !self.base_types.contains(&t) {
                self.base_types.push(t);
            }
        }
        self.has_conjecture |= p.has_conjecture();
        let cs = clausify(p, ext, &mut self.namer);
        let ids = cs.into_iter().filter_map(|c| self.insert(c)).collect();
        self.trace.push(TraceEntry {
            rule: "clausify".into(),
            premises: Vec::new(),
            conclusions: Vec::clone(&ids),
            note: String::new(),
        });
        ids
    }

    /// Adds a clause to the passive set unless a variant is already known.
    pub fn insert(&mut self, mut c: Clause) -> Option<ClauseId> {
        let w = c.weight();
        if self.max_weight.is_some_and(|m| w > m) && c.origin.rule != "input" {
            self.discarded = true;
            return None;
        }
        if !self.keys.insert(c.variant_key()) {
            return None;
        }
        let id = self.next_id;
        self.next_id += 1;
        c.id = id;
        if c.is_empty() && self.empty.is_none() {
            self.empty = Some(id);
        }
        self.clauses.insert(id, c);
        self.passive_weight.insert((w, id));
        self.passive_age.push_back(id);
        self.passive.insert(id);
        Some(id)
    }

    pub fn get(&self, id: ClauseId) -> Option<&Clause> {
        self.clauses.get(&id)
    }

    pub fn is_passive(&self, id: ClauseId) -> bool {
        self.passive.contains(&id)
    }

    pub fn is_active(&self, id: ClauseId) -> bool {
        self.active.contains(&id)
    }

    /// Passive clause ids in insertion order.
    pub fn passive_ids(&self) -> Vec<ClauseId> {
        self.passive_age
            .iter()
            .copied()
            .filter(|i| self.passive.contains(i))
            .collect()
    }

    /// Active and passive clauses, by id.
    pub fn current(&self) -> Vec<&Clause> {
        let mut ids: Vec<ClauseId> = self.active.iter().chain(self.passive.iter()).copied().collect();
        ids.sort_unstable();
        ids.iter().map(|i| &self.clauses[i]).collect()
    }

    /// Takes a clause out of the passive and active sets.
    pub fn remove(&mut self, id: ClauseId) {
        if self.passive.remove(&id) {
            let w = self.clauses[&id].weight();
            self.passive_weight.remove(&(w, id));
        }
        self.active.retain(|&a| a != id);
    }

    /// Next given clause. Each cycle of `age + weight` picks starts with
    /// `age` oldest-first picks, then lightest-first ones; ties go to the
    /// smaller id.
    pub fn select_clause(&mut self, ratio: (u32, u32)) -> Option<ClauseId> {
        if self.passive.is_empty() {
            return None;
        }
        let (age, weight) = (u64::from(ratio.0), u64::from(ratio.1));
        let by_age = weight == 0 || (age > 0 && self.picks % (age + weight) < age);
        self.picks += 1;
        let id = if by_age {
            loop {
                let id = self.passive_age.pop_front().expect("passive is non-empty");
                if self.passive.contains(&id) {
                    break id;
                }
            }
        } else {
            self.passive_weight.iter().next().expect("passive is non-empty").1
        };
        self.remove(id);
        Some(id)
    }

    /// Moves a selected clause into the active set, dropping it if an
    /// active clause subsumes it and dropping active clauses it subsumes.
    /// Returns false when the clause was subsumed.
    pub fn activate(&mut self, id: ClauseId) -> bool {
        let c = &self.clauses[&id];
        if self.active.iter().any(|a| subsumes(&self.clauses[a], c)) {
            return false;
        }
        let subsumed: Vec<ClauseId> = self
            .active
            .iter()
            .copied()
            .filter(|a| subsumes(c, &self.clauses[a]))
            .collect();
        for a in subsumed {
            self.remove(a);
        }
        self.active.push(id);
        true
    }

    /// Applies one calculus rule to the named clauses, inserts the
    /// conclusions and records the application in the trace.
    pub fn apply_rule(&mut self, rule: &str, ids: &[ClauseId]) -> Result<Applied, ApplyError> {
        let arity = RULES
            .iter()
            .find(|(r, _)| *r == rule)
            .map(|(_, n)| *n)
            .ok_or_else(|| ApplyError::UnknownRule(rule.to_string()))?;
        if ids.len() != arity {
            return Err(ApplyError::Arity {
                rule: rule.to_string(),
                expected: arity,
                got: ids.len(),
            });
        }
        let premises: Vec<Clause> = ids
            .iter()
            .map(|i| self.clauses.get(i).cloned().ok_or(ApplyError::UnknownClause(*i)))
            .collect::<Result<_, _>>()?;
        let c = &premises[0];
        let (result, exhausted) = {
            let mut ctx = RuleCtx::new(self.unify, &mut self.namer);
            let r: RuleResult = match rule {
                rules::RESOLVE => resolve(c, &premises[1], &mut ctx),
                rules::FACTORISE => factorise(c, &mut ctx),
                rules::EQ_RESOLVE => eq_resolve(c, &mut ctx),
                rules::DETECT_CHOICE_FN => detect_choice_fn(c, &mut self.choice),
                rules::CHOICE => apply_choice(c, &mut self.choice, &mut ctx),
                rules::LEIB_EQ => leib_eq(c, &mut ctx),
                rules::ANDR_EQ => andr_eq(c, &mut ctx),
                rules::PRIM_SUBST => prim_subst(c, self.ps, &self.base_types, &mut ctx),
                _ => unreachable!("rule names are checked above"),
            };
            (r, ctx.exhausted)
        };
        self.exhausted |= exhausted;
        let mut applied = Applied::default();
        for id in &result.removed {
            self.remove(*id);
            applied.removed.push(*id);
        }
        applied.registered = result.registered.iter().map(|(n, _)| n.clone()).collect();
        for c in result.new_clauses {
            if let Some(id) = self.insert(c) {
                applied.new.push(id);
            }
        }
        if !applied.is_empty() {
            let mut note = Vec::new();
            if !applied.registered.is_empty() {
                note.push(format!(
                    "registered {}",
                    applied
                        .registered
                        .iter()
                        .map(|n| n.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ));
            }
            if !applied.removed.is_empty() {
                note.push(format!(
                    "removed {}",
                    applied
                        .removed
                        .iter()
                        .map(|n| n.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ));
            }
            self.trace.push(TraceEntry {
                rule: rule.to_string(),
                premises: ids.to_vec(),
                conclusions: applied.new.clone(),
                note: note.join("; "),
            });
        }
        Ok(applied)
    }

    /// The derivation of a clause: it and all its ancestors, by id.
    pub fn derivation(&self, id: ClauseId) -> Vec<&Clause> {
        let mut seen = BTreeSet::new();
        let mut todo = vec![id];
        while let Some(i) = todo.pop() {
            if seen.insert(i) {
                if let Some(c) = self.clauses.get(&i) {
                    todo.extend(c.origin.parents.iter().copied());
                }
            }
        }
        seen.iter().filter_map(|i| self.clauses.get(i)).collect()
    }

    /// A deterministic listing of the state.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let line = |c: &Clause| {
            let mut l = format!("{}: {}  ({}", c.id, c, c.origin.rule);
            if !c.origin.parents.is_empty() {
                let ps: Vec<String> = c.origin.parents.iter().map(|p| p.to_string()).collect();
                l.push(' ');
                l.push_str(&ps.join(","));
            }
            l.push_str(")\n");
            l
        };
        s.push_str(&format!("active ({}):\n", self.active.len()));
        let mut act = self.active.clone();
        act.sort_unstable();
        for id in act {
            s.push_str(&line(&self.clauses[&id]));
        }
        let pass = self.passive_ids();
        s.push_str(&format!("passive ({}):\n", pass.len()));
        for id in pass {
            s.push_str(&line(&self.clauses[&id]));
        }
        if !self.choice.is_empty() {
            let names: Vec<String> = self.choice.iter().map(|(n, _)| n.to_string()).collect();
            s.push_str(&format!("choice functions: {}\n", names.join(", ")));
        }
        s
    }
}
