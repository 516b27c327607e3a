//! The main loop: given-clause saturation over the calculus with periodic
//! backend calls, run under a strategy schedule.

mod features;
mod run;
mod schedule;
mod state;

pub use features::{analyze_problem, Fragment, ProblemFeatures};
pub use run::{
    classify, configure, dispatch, prove, run_strategy, saturate, step, SearchConfig, SlotOutcome, StepOutcome,
    SzsResult,
};
pub use schedule::{
    select_schedule, Overrides, Policy, PolicyTable, Schedule, ScheduleError, Strategy, StrategySpec, DEFAULT_POLICY,
};
pub use state::{Applied, ApplyError, ProverState, TraceEntry, RULES};

pub use crate::model::{find_model, finite_model_oracle, Model, OracleLimits, Verdict};

#[cfg(test)]
mod tests;
