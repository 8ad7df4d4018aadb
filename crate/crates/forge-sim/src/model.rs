//! Core state: agents, projects, and the task/skill arithmetic that every
//! behavioral rule is built on.
//!
//! A project carries a task amount in [0, 2] for each of three task kinds;
//! an agent carries a skill in [0, 1] for each kind. The assignment rule is
//! uniform: a project's work is split evenly over its current members, and a
//! member converts its share into working time by dividing through its skill.

use std::collections::BTreeMap;
use std::fmt;

/// Index of an agent in the simulation roster. Major agents occupy the low
/// ids, minor agents follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub u32);

/// Index of a project in the simulation's project table. Ids are assigned in
/// creation order and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectId(pub u32);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ProjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The three kinds of work a project can demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskKind {
    NetworkCommunication,
    Database,
    Graphics,
}

impl TaskKind {
    pub const COUNT: usize = 3;
    pub const ALL: [TaskKind; 3] = [
        TaskKind::NetworkCommunication,
        TaskKind::Database,
        TaskKind::Graphics,
    ];

    pub fn index(self) -> usize {
        match self {
            TaskKind::NetworkCommunication => 0,
            TaskKind::Database => 1,
            TaskKind::Graphics => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::NetworkCommunication => "network_communication",
            TaskKind::Database => "database",
            TaskKind::Graphics => "graphics",
        }
    }
}

/// Software category a project belongs to. Minor agents only join projects
/// in categories they care about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    AudioVideo,
    BusinessEnterprise,
    Communications,
    Development,
    HomeEducation,
    Games,
    Graphics,
    ScienceEngineering,
    SecurityUtilities,
    SystemAdministration,
}

impl Category {
    pub const COUNT: usize = 10;
    pub const ALL: [Category; 10] = [
        Category::AudioVideo,
        Category::BusinessEnterprise,
        Category::Communications,
        Category::Development,
        Category::HomeEducation,
        Category::Games,
        Category::Graphics,
        Category::ScienceEngineering,
        Category::SecurityUtilities,
        Category::SystemAdministration,
    ];

    pub fn index(self) -> usize {
        Category::ALL.iter().position(|&c| c == self).unwrap()
    }

    pub fn from_index(idx: usize) -> Option<Category> {
        Category::ALL.get(idx).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::AudioVideo => "audio_video",
            Category::BusinessEnterprise => "business_enterprise",
            Category::Communications => "communications",
            Category::Development => "development",
            Category::HomeEducation => "home_education",
            Category::Games => "games",
            Category::Graphics => "graphics",
            Category::ScienceEngineering => "science_engineering",
            Category::SecurityUtilities => "security_utilities",
            Category::SystemAdministration => "system_administration",
        }
    }
}

/// Set of categories, packed into a bitmask.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CategorySet(u16);

impl CategorySet {
    pub fn new() -> Self {
        Self(0)
    }

    pub fn insert(&mut self, c: Category) {
        self.0 |= 1 << c.index();
    }

    pub fn contains(&self, c: Category) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = Category> + '_ {
        Category::ALL.iter().copied().filter(|&c| self.contains(c))
    }
}

impl FromIterator<Category> for CategorySet {
    fn from_iter<I: IntoIterator<Item = Category>>(iter: I) -> Self {
        let mut set = CategorySet::new();
        for c in iter {
            set.insert(c);
        }
        set
    }
}

/// Per-task-kind values, indexed by [`TaskKind`]. Holds either a project's
/// task amounts or an agent's skills.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PerKind(pub [f64; 3]);

impl PerKind {
    pub fn splat(v: f64) -> Self {
        Self([v; 3])
    }

    /// Sum over kinds, accumulated in kind order.
    pub fn total(&self) -> f64 {
        let mut sum = 0.0;
        for v in self.0 {
            sum += v;
        }
        sum
    }
}

impl std::ops::Index<TaskKind> for PerKind {
    type Output = f64;
    fn index(&self, kind: TaskKind) -> &f64 {
        &self.0[kind.index()]
    }
}

impl std::ops::IndexMut<TaskKind> for PerKind {
    fn index_mut(&mut self, kind: TaskKind) -> &mut f64 {
        &mut self.0[kind.index()]
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ModelError {
    #[error("project {0} has no members")]
    EmptyMembership(ProjectId),
    #[error("agent {agent} has zero skill in {}; working time is undefined", kind.as_str())]
    UndefinedTime { agent: AgentId, kind: TaskKind },
    #[error("agent {agent} is not a member of project {project}")]
    NotAMember { agent: AgentId, project: ProjectId },
    #[error("no project with id {0}")]
    UnknownProject(ProjectId),
    #[error("task amount {value} for {} outside [0, 2]", kind.as_str())]
    TaskOutOfRange { kind: TaskKind, value: f64 },
    #[error("skill {value} for {} outside [0, 1]", kind.as_str())]
    SkillOutOfRange { kind: TaskKind, value: f64 },
}

/// Whether a project was founded independently or split off an existing one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectOrigin {
    New,
    Sub,
}

impl ProjectOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            ProjectOrigin::New => "new",
            ProjectOrigin::Sub => "sub",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentKind {
    Major,
    Minor,
}

/// One project: its demanded work, roster, and origin.
///
/// `members` is kept in join order with the creator first; the order is part
/// of the deterministic contract because floating-point sums over the roster
/// follow it. `completed` is a cached flag the engine refreshes whenever the
/// roster or the task vector changes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectState {
    pub id: ProjectId,
    pub category: Category,
    pub tasks: PerKind,
    pub members: Vec<AgentId>,
    pub creator: AgentId,
    pub created_at: u32,
    pub origin: ProjectOrigin,
    pub completed: bool,
}

impl ProjectState {
    pub fn new(
        id: ProjectId,
        category: Category,
        tasks: PerKind,
        creator: AgentId,
        created_at: u32,
        origin: ProjectOrigin,
    ) -> Result<Self, ModelError> {
        for kind in TaskKind::ALL {
            let value = tasks[kind];
            if !(0.0..=2.0).contains(&value) {
                return Err(ModelError::TaskOutOfRange { kind, value });
            }
        }
        Ok(Self {
            id,
            category,
            tasks,
            members: vec![creator],
            creator,
            created_at,
            origin,
            completed: false,
        })
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    /// A project can attract joiners only while it is unfinished and still
    /// has somebody working on it.
    pub fn is_eligible(&self) -> bool {
        !self.completed && !self.members.is_empty()
    }
}

/// One agent: its skills, category interests, and current memberships.
///
/// `memberships` is kept sorted by project id so lookups are binary searches
/// and iteration order is well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub id: AgentId,
    pub kind: AgentKind,
    pub skills: PerKind,
    pub affinities: CategorySet,
    pub memberships: Vec<ProjectId>,
}

impl AgentState {
    pub fn new(
        id: AgentId,
        kind: AgentKind,
        skills: PerKind,
        affinities: CategorySet,
    ) -> Result<Self, ModelError> {
        for task_kind in TaskKind::ALL {
            let value = skills[task_kind];
            if !(0.0..=1.0).contains(&value) {
                return Err(ModelError::SkillOutOfRange {
                    kind: task_kind,
                    value,
                });
            }
        }
        Ok(Self {
            id,
            kind,
            skills,
            affinities,
            memberships: Vec::new(),
        })
    }

    pub fn is_member_of(&self, project: ProjectId) -> bool {
        self.memberships.binary_search(&project).is_ok()
    }

    /// Inserts keeping the list sorted; returns false if already present.
    pub fn add_membership(&mut self, project: ProjectId) -> bool {
        match self.memberships.binary_search(&project) {
            Ok(_) => false,
            Err(pos) => {
                self.memberships.insert(pos, project);
                true
            }
        }
    }

    /// Removes if present; returns false otherwise.
    pub fn remove_membership(&mut self, project: ProjectId) -> bool {
        match self.memberships.binary_search(&project) {
            Ok(pos) => {
                self.memberships.remove(pos);
                true
            }
            Err(_) => false,
        }
    }
}

/// Per-member work share for one task kind: the project's task amount split
/// evenly over the roster.
pub fn work_share(project: &ProjectState, kind: TaskKind) -> Result<f64, ModelError> {
    let n = project.members.len();
    if n == 0 {
        return Err(ModelError::EmptyMembership(project.id));
    }
    Ok(project.tasks[kind] / n as f64)
}

/// Hours `agent` spends on `project` for one task kind: work share divided
/// by the agent's skill. Zero skill means the time is undefined, which is an
/// error even when the share is zero.
pub fn project_time(
    agent: &AgentState,
    project: &ProjectState,
    kind: TaskKind,
) -> Result<f64, ModelError> {
    if !agent.is_member_of(project.id) {
        return Err(ModelError::NotAMember {
            agent: agent.id,
            project: project.id,
        });
    }
    let skill = agent.skills[kind];
    if skill == 0.0 {
        return Err(ModelError::UndefinedTime {
            agent: agent.id,
            kind,
        });
    }
    Ok(work_share(project, kind)? / skill)
}

/// Total working time of an agent across all memberships and task kinds.
///
/// Accumulates over memberships in ascending project id, and within a
/// project over kinds in declaration order.
pub fn total_time(agent: &AgentState, projects: &[ProjectState]) -> Result<f64, ModelError> {
    let mut total = 0.0;
    for &pid in &agent.memberships {
        let project = projects
            .get(pid.0 as usize)
            .ok_or(ModelError::UnknownProject(pid))?;
        for kind in TaskKind::ALL {
            total += project_time(agent, project, kind)?;
        }
    }
    Ok(total)
}

/// Task amount left uncovered after subtracting every member's skill,
/// clamped at zero. `agents` must be the full roster indexed by agent id.
pub fn remaining_work(project: &ProjectState, kind: TaskKind, agents: &[AgentState]) -> f64 {
    let mut covered = 0.0;
    for &aid in &project.members {
        covered += agents[aid.0 as usize].skills[kind];
    }
    let remaining = project.tasks[kind] - covered;
    if remaining < 0.0 {
        0.0
    } else {
        remaining
    }
}

/// A project is complete once no task kind has work left uncovered.
pub fn is_complete(project: &ProjectState, agents: &[AgentState]) -> bool {
    TaskKind::ALL
        .iter()
        .all(|&kind| remaining_work(project, kind, agents) == 0.0)
}

/// Snapshot of per-agent working time, broken down by project.
///
/// The per-agent total is the sum of the stored per-project entries by
/// construction, so the ledger cannot drift out of agreement with itself.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WorkloadLedger {
    hours: BTreeMap<AgentId, Vec<(ProjectId, f64)>>,
}

impl WorkloadLedger {
    pub fn build(
        agents: &[AgentState],
        projects: &[ProjectState],
    ) -> Result<Self, ModelError> {
        let mut hours = BTreeMap::new();
        for agent in agents {
            if agent.memberships.is_empty() {
                continue;
            }
            let mut entries = Vec::with_capacity(agent.memberships.len());
            for &pid in &agent.memberships {
                let project = projects
                    .get(pid.0 as usize)
                    .ok_or(ModelError::UnknownProject(pid))?;
                let mut t = 0.0;
                for kind in TaskKind::ALL {
                    t += project_time(agent, project, kind)?;
                }
                entries.push((pid, t));
            }
            hours.insert(agent.id, entries);
        }
        Ok(Self { hours })
    }

    pub fn project_hours(&self, agent: AgentId, project: ProjectId) -> Option<f64> {
        self.hours
            .get(&agent)?
            .iter()
            .find(|(pid, _)| *pid == project)
            .map(|&(_, t)| t)
    }

    /// Total hours for one agent; zero for agents with no memberships.
    pub fn total(&self, agent: AgentId) -> f64 {
        match self.hours.get(&agent) {
            Some(entries) => entries.iter().map(|&(_, t)| t).sum(),
            None => 0.0,
        }
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.hours.keys().copied()
    }
}
