use std::time::{Duration, Instant};

use log::{debug, info};

use super::features::{analyze_problem, Fragment, ProblemFeatures};
use super::schedule::{select_schedule, Overrides, PolicyTable, Schedule, Strategy};
use super::state::{ProverState, TraceEntry};
use crate::atp::{invoke_backend_with, BackendConfig, SzsStatus};
use crate::calculus::{rules, PrimSubstMode};
use crate::clause::{Clause, ClauseId};
use crate::clausify::ExtOptions;
use crate::fol::{print_fof, translate_clauses};
use crate::tptp::Problem;

/// Everything the automatic mode needs besides the problem.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub budget: Duration,
    pub overrides: Overrides,
    pub backend: Option<BackendConfig>,
    pub keep_temp: bool,
    pub table: PolicyTable,
    pub ext: ExtOptions,
    /// Clause count at which a slot gives up.
    pub max_clauses: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: Duration::from_secs(60),
            overrides: Overrides::default(),
            backend: None,
            keep_temp: false,
            table: PolicyTable::default(),
            ext: ExtOptions::default(),
            max_clauses: 20_000,
        }
    }
}

/// How a strategy slot ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlotOutcome {
    /// The empty clause was derived.
    Refuted(ClauseId),
    /// The backend refuted a translation of the clause set.
    BackendRefuted,
    /// The backend saturated a translation of the clause set.
    BackendSaturated,
    /// No given clause is left.
    Saturated,
    Expired,
    GaveUp,
}

/// Outcome of one given-clause iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Given(ClauseId),
    /// The selected clause was subsumed or consumed by preprocessing.
    Dropped(ClauseId),
    Refuted(ClauseId),
    Saturated,
    Expired,
}

/// Prepares a state for a strategy: rule settings, and registration of
/// choice functions whose axioms are already present.
pub fn configure(state: &mut ProverState, strat: &Strategy) {
    state.ps = strat.ps;
    state.max_weight = Some(strat.max_weight);
    if strat.choice {
        for id in state.passive_ids() {
            let _ = state.apply_rule(rules::DETECT_CHOICE_FN, &[id]);
        }
    }
}

/// One iteration of the given-clause loop: select, check subsumption,
/// apply the enabled rules to the given clause and the active set.
pub fn step(state: &mut ProverState, strat: &Strategy, deadline: Instant) -> StepOutcome {
    if let Some(e) = state.empty {
        return StepOutcome::Refuted(e);
    }
    let Some(g) = state.select_clause(strat.ratio) else {
        return StepOutcome::Saturated;
    };
    if !state.activate(g) {
        return StepOutcome::Dropped(g);
    }
    let apply = |state: &mut ProverState, rule: &str, ids: &[ClauseId]| {
        state.apply_rule(rule, ids).expect("known rule on live clauses")
    };
    if strat.choice {
        if !apply(state, rules::DETECT_CHOICE_FN, &[g]).removed.is_empty() {
            return StepOutcome::Dropped(g);
        }
        apply(state, rules::CHOICE, &[g]);
    }
    let mut unary = vec![rules::FACTORISE, rules::EQ_RESOLVE];
    if strat.leib_eq {
        unary.push(rules::LEIB_EQ);
    }
    if strat.andr_eq {
        unary.push(rules::ANDR_EQ);
    }
    if strat.ps != PrimSubstMode::Off {
        unary.push(rules::PRIM_SUBST);
    }
    for rule in unary {
        apply(state, rule, &[g]);
        if let Some(e) = state.empty {
            return StepOutcome::Refuted(e);
        }
    }
    let partners: Vec<ClauseId> = state.active.clone();
    for a in partners {
        if Instant::now() >= deadline {
            return StepOutcome::Expired;
        }
        // the partner may have been removed meanwhile
        if state.is_active(a) && state.is_active(g) {
            apply(state, rules::RESOLVE, &[g, a]);
        }
        if let Some(e) = state.empty {
            return StepOutcome::Refuted(e);
        }
    }
    StepOutcome::Given(g)
}

/// Translates the current clauses and hands them to the backend, with the
/// call's timeout cut to the time left. Returns `None` when nothing was
/// sent.
pub fn dispatch(
    state: &mut ProverState,
    strat: &Strategy,
    backend: &BackendConfig,
    deadline: Instant,
    keep_temp: bool,
) -> Option<SzsStatus> {
    let left = deadline.saturating_duration_since(Instant::now()).as_secs_f64();
    if left < 0.05 {
        return None;
    }
    let clauses: Vec<Clause> = state.current().into_iter().cloned().collect();
    let fo = match translate_clauses(&clauses, strat.translation) {
        Ok(fo) => fo,
        Err(e) => {
            debug!("translation failed: {e}");
            return None;
        }
    };
    let mut cfg = backend.clone();
    cfg.timeout = cfg.timeout.min(left);
    let inv = invoke_backend_with(&print_fof(&fo), &cfg, keep_temp);
    let mut note = format!("{} {} on {} clauses", cfg.name, inv.status, clauses.len());
    if let Some(p) = &inv.kept_file {
        note.push_str(&format!(" ({})", p.display()));
    }
    debug!("backend: {note}");
    state.trace.push(TraceEntry {
        rule: "atp".into(),
        premises: clauses.iter().map(|c| c.id).collect(),
        conclusions: Vec::new(),
        note,
    });
    Some(inv.status)
}

/// Runs the given-clause loop on `state` until refutation, saturation,
/// backend success or the deadline.
pub fn saturate(
    state: &mut ProverState,
    strat: &Strategy,
    deadline: Instant,
    backend: Option<&BackendConfig>,
    cfg: &SearchConfig,
    fragment: Fragment,
) -> SlotOutcome {
    configure(state, strat);
    let backend = backend.filter(|_| strat.dispatch.is_some() || strat.dispatch_at_start);
    let call = |state: &mut ProverState| -> Option<SlotOutcome> {
        let b = backend?;
        match dispatch(state, strat, b, deadline, cfg.keep_temp)? {
            s if s.is_refutation() => Some(SlotOutcome::BackendRefuted),
            // only first-order-like problems translate faithfully
            SzsStatus::Satisfiable | SzsStatus::CounterSatisfiable if fragment != Fragment::HigherOrder => {
                Some(SlotOutcome::BackendSaturated)
            }
            _ => None,
        }
    };
    if let Some(e) = state.empty {
        return SlotOutcome::Refuted(e);
    }
    if strat.dispatch_at_start && fragment != Fragment::HigherOrder {
        if let Some(o) = call(state) {
            return o;
        }
    }
    let mut iterations = 0usize;
    loop {
        if Instant::now() >= deadline {
            return SlotOutcome::Expired;
        }
        if state.clauses.len() > cfg.max_clauses {
            return SlotOutcome::GaveUp;
        }
        match step(state, strat, deadline) {
            StepOutcome::Refuted(e) => return SlotOutcome::Refuted(e),
            StepOutcome::Expired => return SlotOutcome::Expired,
            StepOutcome::Saturated => break,
            StepOutcome::Dropped(_) => {}
            StepOutcome::Given(_) => {
                iterations += 1;
                if strat.dispatch.is_some_and(|p| iterations.is_multiple_of(p)) {
                    if let Some(o) = call(state) {
                        return o;
                    }
                }
            }
        }
    }
    if strat.dispatch.is_some() {
        if let Some(o) = call(state) {
            return o;
        }
    }
    SlotOutcome::Saturated
}

/// The verdict of a run.
#[derive(Clone, Debug)]
pub struct SzsResult {
    pub status: SzsStatus,
    /// The refutation, ancestors first, when derived internally.
    pub proof: Vec<Clause>,
    /// Rule applications of the deciding slot.
    pub trace: Vec<TraceEntry>,
    /// The saturated clause set behind a satisfiability claim.
    pub model_basis: Vec<Clause>,
    pub strategy: Option<String>,
    pub schedule: Schedule,
    pub features: ProblemFeatures,
}

impl SzsResult {
    /// Rule names used in the proof or, for backend results, the trace.
    pub fn proof_rules(&self) -> Vec<String> {
        let mut v: Vec<String> = self.proof.iter().map(|c| c.origin.rule.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn trace_has(&self, rule: &str) -> bool {
        self.trace.iter().any(|t| t.rule == rule)
    }
}

/// Satisfiability claims need a saturated set reached with every
/// completeness-relevant setting at its maximum, on a fragment where the
/// rules are complete.
fn may_claim_saturation(state: &ProverState, strat: &Strategy, f: &ProblemFeatures, o: &Overrides) -> bool {
    !state.exhausted
        && !state.discarded
        && (strat.choice || !f.contains_choice_terms)
        && strat.ps == o.max_ps()
        && f.fragment != Fragment::HigherOrder
        && !f.has_equality
}

fn sat_status(has_conjecture: bool) -> SzsStatus {
    if has_conjecture {
        SzsStatus::CounterSatisfiable
    } else {
        SzsStatus::Satisfiable
    }
}

/// The SZS status a slot outcome justifies.
pub fn classify(
    out: &SlotOutcome,
    state: &ProverState,
    strat: &Strategy,
    f: &ProblemFeatures,
    o: &Overrides,
) -> SzsStatus {
    let refuted = |from_conjecture: bool| {
        if from_conjecture {
            SzsStatus::Theorem
        } else {
            SzsStatus::Unsatisfiable
        }
    };
    match out {
        SlotOutcome::Refuted(e) => refuted(state.clauses[e].origin.from_conjecture),
        SlotOutcome::BackendRefuted => refuted(state.has_conjecture),
        SlotOutcome::BackendSaturated => sat_status(state.has_conjecture),
        SlotOutcome::Saturated if may_claim_saturation(state, strat, f, o) => sat_status(state.has_conjecture),
        SlotOutcome::Expired => SzsStatus::Timeout,
        _ => SzsStatus::GaveUp,
    }
}

/// Runs one strategy from a fresh state, extending the preunification
/// depth when a saturated slot had cut unification problems.
pub fn run_strategy(
    p: &Problem,
    strat: &Strategy,
    deadline: Instant,
    cfg: &SearchConfig,
    f: &ProblemFeatures,
) -> (SlotOutcome, ProverState) {
    let mut depth = strat.depth;
    loop {
        let mut state = ProverState::from_problem(p, cfg.ext);
        state.unify.max_depth = depth;
        let out = saturate(&mut state, strat, deadline, cfg.backend.as_ref(), cfg, f.fragment);
        if out == SlotOutcome::Saturated && state.exhausted && depth < strat.max_depth {
            depth += 1;
            info!("{}: extending preunification depth to {depth}", strat.name);
            continue;
        }
        return (out, state);
    }
}

/// Automatic mode: analyse the problem, then run its strategies in turn.
pub fn prove(p: &Problem, cfg: &SearchConfig) -> SzsResult {
    let start = Instant::now();
    let global = start + cfg.budget;
    let features = analyze_problem(p);
    let mut schedule = select_schedule(&features, cfg.budget, &cfg.table);
    for s in &mut schedule.strategies {
        cfg.overrides.apply(s);
    }
    let mut result = SzsResult {
        status: SzsStatus::GaveUp,
        proof: Vec::new(),
        trace: Vec::new(),
        model_basis: Vec::new(),
        strategy: None,
        schedule: schedule.clone(),
        features: features.clone(),
    };
    let n = schedule.strategies.len();
    for (k, strat) in schedule.strategies.iter().enumerate() {
        let now = Instant::now();
        if now >= global {
            break;
        }
        // the last slot inherits whatever earlier slots left unused
        let deadline = if k + 1 == n {
            global
        } else {
            (now + strat.slice).min(global)
        };
        info!("strategy {} until {:?}", strat.name, deadline - now);
        let (out, state) = run_strategy(p, strat, deadline, cfg, &features);
        let status = classify(&out, &state, strat, &features, &cfg.overrides);
        match out {
            SlotOutcome::Refuted(e) => result.proof = state.derivation(e).into_iter().cloned().collect(),
            SlotOutcome::Saturated if status.is_solved() => {
                result.model_basis = state.active.iter().map(|i| state.clauses[i].clone()).collect()
            }
            _ => {}
        }
        result.trace = state.trace;
        result.strategy = Some(strat.name.clone());
        if status.is_solved() {
            result.status = status;
            return result;
        }
    }
    result.status = if Instant::now() >= global {
        SzsStatus::Timeout
    } else {
        SzsStatus::GaveUp
    };
    result
}
