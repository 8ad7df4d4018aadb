//! The discrete-step engine that advances the whole community and logs
//! every action.
//!
//! # Draw order
//!
//! All randomness comes from one [`SimRng`] stream, and the order of draws
//! is part of the contract: two runs with the same configuration and seed
//! produce byte-identical event logs.
//!
//! Initialization, agents in id order (majors first, then minors):
//! 1. three skill draws per agent, in task-kind order;
//! 2. minor agents only: rounds of ten interest draws, one per category in
//!    declaration order, each category joining the interest set when its
//!    draw is strictly under `p_cat`; rounds repeat until the set is
//!    non-empty.
//!
//! Each step, starting from step 0:
//! 1. Major phase, in agent id order. One founding draw `u` per major; the
//!    founding fires when `p_new >= u` and then consumes one category draw
//!    (`floor(u * 10)`) plus three task draws (`2 * u` each) in kind order.
//!    After the founding check the major's owned projects are scanned in
//!    ascending project id for splits; split checks consume no draws, and
//!    children spawned during the scan are not rescanned until the next
//!    step.
//! 2. Minor phase, in agent id order. One action draw `u`: `u < 1/3` is a
//!    join intent, `u < 2/3` a leave intent, anything else idles. A join
//!    intent consumes one selection draw, except when no project is
//!    eligible. A leave intent consumes one membership-pick draw
//!    (`floor(u * n)` over the agent's sorted memberships), except when the
//!    agent has no memberships.
//!
//! Selection uses the roulette rule from [`crate::growth`]: weights are
//! recomputed from the current state at each selecting agent's turn, summed
//! left to right over the whole project table (ineligible projects
//! contributing exactly zero), and the pick threshold is `u * total`.
//!
//! The engine keeps a sorted list of eligible project indices and sums over
//! it instead of the whole table; skipping entries that would contribute
//! exactly zero leaves every cumulative sum bit-identical, so the shortcut
//! is unobservable in the event log.

use std::io;

use crate::behaviors::{self, BehaviorConfig, BehaviorError, NoOpReason, Outcome, ProjectDraft};
use crate::event::{Action, EventDetail, EventRecord, EventSink};
use crate::growth::{self, FitnessParams, GrowthError};
use crate::model::{
    is_complete, total_time, AgentId, AgentKind, AgentState, Category, CategorySet, ModelError,
    PerKind, ProjectId, ProjectState, TaskKind, WorkloadLedger,
};
use crate::rng::SimRng;

/// Everything that defines a run. Two runs with equal configs are
/// byte-identical.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_major: u32,
    pub n_minor: u32,
    pub n_steps: u32,
    pub seed: u64,
    /// Probability that any one category enters a minor agent's interest
    /// set; must be positive so the interest rounds terminate.
    pub p_cat: f64,
    pub behavior: BehaviorConfig,
    pub fitness: FitnessParams,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_major: 1_000,
            n_minor: 20_000,
            n_steps: 1_000,
            seed: 42,
            p_cat: 0.3,
            behavior: BehaviorConfig::default(),
            fitness: FitnessParams::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.n_major == 0 {
            return Err(EngineError::InvalidConfig(
                "n_major must be at least 1".into(),
            ));
        }
        if self.n_steps == 0 {
            return Err(EngineError::InvalidConfig(
                "n_steps must be at least 1".into(),
            ));
        }
        if !(self.p_cat > 0.0 && self.p_cat <= 1.0) {
            return Err(EngineError::InvalidConfig(format!(
                "p_cat = {} must lie in (0, 1]",
                self.p_cat
            )));
        }
        self.behavior.validate()?;
        self.fitness.validate()?;
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("event sink failed: {0}")]
    Sink(#[from] io::Error),
    #[error("state check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Behavior(#[from] BehaviorError),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Full simulation state at a step boundary.
#[derive(Debug, Clone)]
pub struct SimState {
    /// Steps completed so far.
    pub step: u32,
    /// All agents, indexed by id: majors first, then minors.
    pub agents: Vec<AgentState>,
    /// All projects ever created, indexed by id; completed ones stay.
    pub projects: Vec<ProjectState>,
    /// Per-agent working time. Kept out of the step loop for speed:
    /// [`Simulation::run`] rebuilds it once at the end, manual steppers call
    /// [`Simulation::rebuild_ledger`] when they want a current snapshot.
    pub ledger: WorkloadLedger,
    /// How many times a split pushed its creator past the time budget.
    /// Splits are not gated, so this is informational.
    pub time_flags: u64,
}

pub struct Simulation {
    pub config: SimConfig,
    pub state: SimState,
    rng: SimRng,
    /// Fitness per project, rebuilt after the major phase each step.
    eta: Vec<f64>,
    /// Selection-side member count per project: the roster size, or exactly
    /// 0.0 while the project is ineligible.
    k_eff: Vec<f64>,
    /// Indices of currently eligible projects, ascending. Selection loops
    /// walk this instead of the whole table.
    active: Vec<u32>,
    /// Scratch buffer for selection weights, parallel to `active`.
    weights: Vec<f64>,
}

const JOIN_CUT: f64 = 1.0 / 3.0;
const LEAVE_CUT: f64 = 2.0 / 3.0;

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self, EngineError> {
        config.validate()?;
        let mut rng = SimRng::from_seed(config.seed);
        let n_total = config.n_major as usize + config.n_minor as usize;
        let mut agents = Vec::with_capacity(n_total);
        for id in 0..config.n_major {
            let skills = draw_skills(&mut rng);
            agents.push(
                AgentState::new(AgentId(id), AgentKind::Major, skills, CategorySet::new())
                    .expect("drawn skills are in range"),
            );
        }
        for id in config.n_major..config.n_major + config.n_minor {
            let skills = draw_skills(&mut rng);
            let affinities = draw_affinities(&mut rng, config.p_cat);
            agents.push(
                AgentState::new(AgentId(id), AgentKind::Minor, skills, affinities)
                    .expect("drawn skills are in range"),
            );
        }
        Ok(Self {
            config,
            state: SimState {
                step: 0,
                agents,
                projects: Vec::new(),
                ledger: WorkloadLedger::default(),
                time_flags: 0,
            },
            rng,
            eta: Vec::new(),
            k_eff: Vec::new(),
            active: Vec::new(),
            weights: Vec::new(),
        })
    }

    /// Advances one step, feeding every action to `sink`.
    pub fn step(&mut self, sink: &mut dyn EventSink) -> Result<(), EngineError> {
        let now = self.state.step;
        self.major_phase(now, sink)?;
        self.rebuild_caches(now);
        self.minor_phase(now, sink)?;
        self.state.step = now + 1;
        Ok(())
    }

    /// Recomputes the workload ledger from the current memberships.
    pub fn rebuild_ledger(&mut self) -> Result<(), EngineError> {
        self.state.ledger = WorkloadLedger::build(&self.state.agents, &self.state.projects)?;
        Ok(())
    }

    /// Runs the configured number of steps over a fresh simulation.
    pub fn run(config: SimConfig, sink: &mut dyn EventSink) -> Result<SimState, EngineError> {
        let mut sim = Simulation::new(config)?;
        for _ in 0..sim.config.n_steps {
            sim.step(sink)?;
        }
        sim.rebuild_ledger()?;
        Ok(sim.state)
    }

    /// Like [`Simulation::run`], collecting events in memory. Only for runs
    /// small enough that the full log fits comfortably.
    pub fn run_collect(config: SimConfig) -> Result<(SimState, Vec<EventRecord>), EngineError> {
        let mut sink = crate::event::CollectSink::default();
        let state = Simulation::run(config, &mut sink)?;
        Ok((state, sink.events))
    }

    fn major_phase(&mut self, now: u32, sink: &mut dyn EventSink) -> Result<(), EngineError> {
        for idx in 0..self.config.n_major as usize {
            let decision = behaviors::try_create_new(
                &self.state.agents[idx],
                &self.config.behavior,
                &mut self.rng,
            )?;
            match decision.outcome {
                Outcome::Create { draft, driving } => {
                    let pid = self.apply_create(decision.agent, &draft, now);
                    sink.record(&self.create_event(now, decision.agent, pid, driving, &draft))?;
                }
                Outcome::NoOp { reason, value, .. } => {
                    sink.record(&EventRecord {
                        step: now,
                        agent: decision.agent,
                        action: Action::NoOp,
                        project: None,
                        task_total: None,
                        member_count: None,
                        fitness: None,
                        driving_value: value,
                        detail: EventDetail::Reason(reason),
                    })?;
                }
                other => {
                    return Err(EngineError::Inconsistent(format!(
                        "founding rule returned {other:?}"
                    )))
                }
            }

            let owned = self.state.agents[idx].memberships.clone();
            for pid in owned {
                let project = &self.state.projects[pid.0 as usize];
                if project.completed {
                    continue;
                }
                let decisions = behaviors::try_create_sub(
                    &self.state.agents[idx],
                    project,
                    &self.config.behavior,
                )?;
                for decision in decisions {
                    let Outcome::Create { draft, driving } = decision.outcome else {
                        return Err(EngineError::Inconsistent(
                            "split rule returned a non-create".into(),
                        ));
                    };
                    let child = self.apply_create(decision.agent, &draft, now);
                    sink.record(&self.create_event(now, decision.agent, child, driving, &draft))?;
                }
            }
        }
        Ok(())
    }

    fn minor_phase(&mut self, now: u32, sink: &mut dyn EventSink) -> Result<(), EngineError> {
        let first_minor = self.config.n_major as usize;
        let n_total = first_minor + self.config.n_minor as usize;
        for idx in first_minor..n_total {
            let agent_id = AgentId(idx as u32);
            let u = self.rng.next_unit();
            if u < JOIN_CUT {
                self.join_intent(now, idx, sink)?;
            } else if u < LEAVE_CUT {
                self.leave_intent(now, idx, sink)?;
            } else {
                sink.record(&EventRecord {
                    step: now,
                    agent: agent_id,
                    action: Action::NoOp,
                    project: None,
                    task_total: None,
                    member_count: None,
                    fitness: None,
                    driving_value: None,
                    detail: EventDetail::Reason(NoOpReason::Idle),
                })?;
            }
        }
        Ok(())
    }

    fn join_intent(
        &mut self,
        now: u32,
        idx: usize,
        sink: &mut dyn EventSink,
    ) -> Result<(), EngineError> {
        let agent_id = AgentId(idx as u32);
        self.weights.clear();
        let mut total = 0.0;
        for &i in &self.active {
            let i = i as usize;
            let w = self.eta[i] * self.k_eff[i];
            self.weights.push(w);
            total += w;
        }
        if total == 0.0 {
            return Ok(sink.record(&EventRecord {
                step: now,
                agent: agent_id,
                action: Action::NoOp,
                project: None,
                task_total: None,
                member_count: None,
                fitness: None,
                driving_value: None,
                detail: EventDetail::Reason(NoOpReason::NoEligibleProjects),
            })?);
        }
        let u = self.rng.next_unit();
        let pick = growth::roulette_pick(&self.weights, total, u)
            .expect("positive total implies a pick");
        let pick = self.active[pick] as usize;
        let pid = ProjectId(pick as u32);

        if self.state.agents[idx].is_member_of(pid) {
            return Ok(sink.record(&self.project_event(
                now,
                agent_id,
                Action::NoOp,
                pid,
                None,
                EventDetail::Reason(NoOpReason::AlreadyMember),
            ))?);
        }
        let decision = behaviors::try_join(
            &self.state.agents[idx],
            &self.state.projects[pick],
            &self.config.behavior,
            &self.state.agents,
            &self.state.projects,
        )?;
        match decision.outcome {
            Outcome::Join { project, pressure } => {
                self.apply_join(idx, project);
                debug_assert!(self.join_respects_budget(idx));
                sink.record(&self.project_event(
                    now,
                    agent_id,
                    Action::Join,
                    project,
                    Some(pressure),
                    EventDetail::None,
                ))?;
            }
            Outcome::NoOp { reason, value, .. } => {
                sink.record(&self.project_event(
                    now,
                    agent_id,
                    Action::NoOp,
                    pid,
                    value,
                    EventDetail::Reason(reason),
                ))?;
            }
            other => {
                return Err(EngineError::Inconsistent(format!(
                    "join rule returned {other:?}"
                )))
            }
        }
        Ok(())
    }

    fn leave_intent(
        &mut self,
        now: u32,
        idx: usize,
        sink: &mut dyn EventSink,
    ) -> Result<(), EngineError> {
        let agent_id = AgentId(idx as u32);
        let n_memberships = self.state.agents[idx].memberships.len();
        if n_memberships == 0 {
            return Ok(sink.record(&EventRecord {
                step: now,
                agent: agent_id,
                action: Action::NoOp,
                project: None,
                task_total: None,
                member_count: None,
                fitness: None,
                driving_value: None,
                detail: EventDetail::Reason(NoOpReason::NoMemberships),
            })?);
        }
        let pick = self.rng.next_index(n_memberships);
        let pid = self.state.agents[idx].memberships[pick];
        let decision = behaviors::try_leave(
            &self.state.agents[idx],
            &self.state.projects[pid.0 as usize],
            &self.config.behavior,
        )?;
        match decision.outcome {
            Outcome::Leave { project, load } => {
                self.apply_leave(idx, project);
                sink.record(&self.project_event(
                    now,
                    agent_id,
                    Action::Leave,
                    project,
                    Some(load),
                    EventDetail::None,
                ))?;
            }
            Outcome::NoOp { reason, value, .. } => {
                sink.record(&self.project_event(
                    now,
                    agent_id,
                    Action::NoOp,
                    pid,
                    value,
                    EventDetail::Reason(reason),
                ))?;
            }
            other => {
                return Err(EngineError::Inconsistent(format!(
                    "leave rule returned {other:?}"
                )))
            }
        }
        Ok(())
    }

    /// Materializes a draft: pushes the project, wires the creator's
    /// membership, shrinks a split parent, and refreshes completion flags.
    fn apply_create(&mut self, creator: AgentId, draft: &ProjectDraft, now: u32) -> ProjectId {
        let pid = ProjectId(self.state.projects.len() as u32);
        let project = ProjectState::new(pid, draft.category, draft.tasks, creator, now, draft.origin)
            .expect("drafted tasks are in range");
        self.state.projects.push(project);
        self.state.agents[creator.0 as usize].add_membership(pid);
        self.refresh_completed(pid);
        if let Some((parent, kind)) = draft.split_from {
            self.state.projects[parent.0 as usize].tasks[kind] = draft.tasks[kind];
            self.refresh_completed(parent);
            if self.split_overloads_creator(creator) {
                self.state.time_flags += 1;
            }
        }
        pid
    }

    fn apply_join(&mut self, agent_idx: usize, pid: ProjectId) {
        let agent_id = self.state.agents[agent_idx].id;
        self.state.projects[pid.0 as usize].members.push(agent_id);
        self.state.agents[agent_idx].add_membership(pid);
        self.refresh_completed(pid);
    }

    fn apply_leave(&mut self, agent_idx: usize, pid: ProjectId) {
        let agent_id = self.state.agents[agent_idx].id;
        let members = &mut self.state.projects[pid.0 as usize].members;
        let pos = members
            .iter()
            .position(|&a| a == agent_id)
            .expect("leaving agent is on the roster");
        members.remove(pos);
        self.state.agents[agent_idx].remove_membership(pid);
        self.refresh_completed(pid);
    }

    /// Recomputes the completion flag and the selection-side member count of
    /// one project after any roster or task change, keeping the eligible
    /// list in step. Projects past the cache horizon (created after the last
    /// rebuild) are picked up by the next [`Simulation::rebuild_caches`].
    fn refresh_completed(&mut self, pid: ProjectId) {
        let i = pid.0 as usize;
        let completed = is_complete(&self.state.projects[i], &self.state.agents);
        let project = &mut self.state.projects[i];
        project.completed = completed;
        if i < self.k_eff.len() {
            let eligible = project.is_eligible();
            self.k_eff[i] = if eligible {
                project.members.len() as f64
            } else {
                0.0
            };
            match (self.active.binary_search(&pid.0), eligible) {
                (Err(pos), true) => self.active.insert(pos, pid.0),
                (Ok(pos), false) => {
                    self.active.remove(pos);
                }
                _ => {}
            }
        }
    }

    /// Rebuilds the fitness and member-count caches the minor phase selects
    /// from, plus the eligible list. Runs after the major phase so freshly
    /// created projects are selectable within the same step.
    fn rebuild_caches(&mut self, now: u32) {
        let n = self.state.projects.len();
        self.eta.clear();
        self.eta.reserve(n);
        self.k_eff.clear();
        self.k_eff.reserve(n);
        self.active.clear();
        for project in &self.state.projects {
            self.eta.push(growth::decayed_fitness(
                now - project.created_at,
                &self.config.fitness,
            ));
            if project.is_eligible() {
                self.k_eff.push(project.members.len() as f64);
                self.active.push(project.id.0);
            } else {
                self.k_eff.push(0.0);
            }
        }
    }

    fn create_event(
        &self,
        now: u32,
        agent: AgentId,
        pid: ProjectId,
        driving: f64,
        draft: &ProjectDraft,
    ) -> EventRecord {
        let project = &self.state.projects[pid.0 as usize];
        EventRecord {
            step: now,
            agent,
            action: Action::Create,
            project: Some(pid),
            task_total: Some(project.tasks.total()),
            member_count: Some(project.members.len() as u32),
            fitness: Some(growth::decayed_fitness(0, &self.config.fitness)),
            driving_value: Some(driving),
            detail: EventDetail::Origin(draft.origin),
        }
    }

    /// Event row for an action that has a project in hand; counts are taken
    /// after the action, fitness from the per-step cache.
    fn project_event(
        &self,
        now: u32,
        agent: AgentId,
        action: Action,
        pid: ProjectId,
        driving: Option<f64>,
        detail: EventDetail,
    ) -> EventRecord {
        let project = &self.state.projects[pid.0 as usize];
        EventRecord {
            step: now,
            agent,
            action,
            project: Some(pid),
            task_total: Some(project.tasks.total()),
            member_count: Some(project.members.len() as u32),
            fitness: Some(self.eta[pid.0 as usize]),
            driving_value: driving,
            detail,
        }
    }

    fn join_respects_budget(&self, agent_idx: usize) -> bool {
        match total_time(&self.state.agents[agent_idx], &self.state.projects) {
            Ok(t) => t <= self.config.behavior.t_limit + 1e-9,
            // A zero-skill agent cannot have passed the join gate.
            Err(_) => false,
        }
    }

    fn split_overloads_creator(&self, creator: AgentId) -> bool {
        match total_time(&self.state.agents[creator.0 as usize], &self.state.projects) {
            Ok(t) => t > self.config.behavior.t_limit,
            // Undefined time (a zero skill) cannot be compared; not flagged.
            Err(_) => false,
        }
    }

    /// Structural self-check: ids are positional, membership tables agree in
    /// both directions, rosters hold no duplicates, completion flags match a
    /// recomputation, and the creator still anchors its roster.
    pub fn check_invariants(&self) -> Result<(), EngineError> {
        let fail = |msg: String| Err(EngineError::Inconsistent(msg));
        let mut roster_edges = 0usize;
        let mut seen: std::collections::HashSet<AgentId> = std::collections::HashSet::new();
        for (i, project) in self.state.projects.iter().enumerate() {
            if project.id.0 as usize != i {
                return fail(format!("project {} stored at index {i}", project.id));
            }
            seen.clear();
            for &member in &project.members {
                if !seen.insert(member) {
                    return fail(format!("agent {member} duplicated on project {}", project.id));
                }
                let agent = match self.state.agents.get(member.0 as usize) {
                    Some(a) => a,
                    None => return fail(format!("project {} lists unknown agent {member}", project.id)),
                };
                if !agent.is_member_of(project.id) {
                    return fail(format!(
                        "project {} lists agent {member} but the agent does not list it back",
                        project.id
                    ));
                }
            }
            if !project.members.is_empty() && project.members[0] != project.creator {
                return fail(format!("project {} lost its creator from the roster head", project.id));
            }
            if project.completed != is_complete(project, &self.state.agents) {
                return fail(format!("stale completion flag on project {}", project.id));
            }
            roster_edges += project.members.len();
        }
        let mut membership_edges = 0usize;
        for agent in &self.state.agents {
            if !agent.memberships.windows(2).all(|w| w[0] < w[1]) {
                return fail(format!("agent {} has an unsorted membership list", agent.id));
            }
            for &pid in &agent.memberships {
                if pid.0 as usize >= self.state.projects.len() {
                    return fail(format!("agent {} lists unknown project {pid}", agent.id));
                }
            }
            membership_edges += agent.memberships.len();
        }
        if roster_edges != membership_edges {
            return fail(format!(
                "rosters carry {roster_edges} edges but membership lists carry {membership_edges}"
            ));
        }
        Ok(())
    }
}

fn draw_skills(rng: &mut SimRng) -> PerKind {
    let mut skills = PerKind::default();
    for kind in TaskKind::ALL {
        skills[kind] = rng.next_unit();
    }
    skills
}

fn draw_affinities(rng: &mut SimRng, p_cat: f64) -> CategorySet {
    let mut set = CategorySet::new();
    while set.is_empty() {
        for category in Category::ALL {
            if rng.next_unit() < p_cat {
                set.insert(category);
            }
        }
    }
    set
}

/// The nine (join, leave) threshold pairs explored by a sweep, with the join
/// threshold varying fastest.
pub const THRESHOLD_GRID: [(f64, f64); 9] = [
    (0.0, 0.0),
    (0.5, 0.0),
    (1.0, 0.0),
    (0.0, 0.5),
    (0.5, 0.5),
    (1.0, 0.5),
    (0.0, 1.0),
    (0.5, 1.0),
    (1.0, 1.0),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub j_threshold: f64,
    pub l_threshold: f64,
}

impl GridPoint {
    /// Directory-friendly label, for example `J0.5_L1.0`.
    pub fn label(&self) -> String {
        format!("J{:.1}_L{:.1}", self.j_threshold, self.l_threshold)
    }
}

/// The nine sweep configurations derived from a base config: thresholds from
/// [`THRESHOLD_GRID`], seed offset by the grid index.
pub fn sweep_configs(base: &SimConfig) -> Vec<(GridPoint, SimConfig)> {
    THRESHOLD_GRID
        .iter()
        .enumerate()
        .map(|(index, &(j, l))| {
            let mut config = base.clone();
            config.behavior.j_threshold = j;
            config.behavior.l_threshold = l;
            config.seed = base.seed.wrapping_add(index as u64);
            (
                GridPoint {
                    index,
                    j_threshold: j,
                    l_threshold: l,
                },
                config,
            )
        })
        .collect()
}

/// Runs the whole grid serially, building one sink per point.
pub fn sweep<S, F>(
    base: &SimConfig,
    mut make_sink: F,
) -> Result<Vec<(GridPoint, SimState)>, EngineError>
where
    S: EventSink,
    F: FnMut(&GridPoint) -> Result<S, EngineError>,
{
    let mut results = Vec::with_capacity(THRESHOLD_GRID.len());
    for (point, config) in sweep_configs(base) {
        let mut sink = make_sink(&point)?;
        let state = Simulation::run(config, &mut sink)?;
        results.push((point, state));
    }
    Ok(results)
}
