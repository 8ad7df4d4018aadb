//! Decision rules: how major agents spawn projects and how minor agents
//! join and leave them.
//!
//! Every rule returns a [`Decision`] describing what the agent would do; the
//! engine applies decisions to the state and logs them. Threshold
//! comparisons are inclusive throughout: a value exactly at a threshold
//! triggers the action.

use crate::model::{
    remaining_work, total_time, AgentId, AgentKind, AgentState, Category, ModelError, PerKind,
    ProjectId, ProjectOrigin, ProjectState, TaskKind,
};
use crate::rng::SimRng;

/// Tunable thresholds for the decision rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviorConfig {
    /// Per-step probability that a major agent founds an independent project.
    pub p_new: f64,
    /// Per-member load at which a project sheds half of one task kind into a
    /// child project.
    pub sub_threshold: f64,
    /// Minimum uncovered-work fraction a project must show before a minor
    /// agent joins.
    pub j_threshold: f64,
    /// Minimum per-kind load surplus at which a minor agent quits a project.
    pub l_threshold: f64,
    /// Daily working-time budget; a join that would push an agent past it is
    /// refused.
    pub t_limit: f64,
}

impl Default for BehaviorConfig {
    fn default() -> Self {
        Self {
            p_new: 0.01,
            sub_threshold: 1.0,
            j_threshold: 0.5,
            l_threshold: 0.5,
            t_limit: 24.0,
        }
    }
}

impl BehaviorConfig {
    pub fn validate(&self) -> Result<(), BehaviorError> {
        if !(0.0..=1.0).contains(&self.p_new) {
            return Err(BehaviorError::InvalidParameter {
                name: "p_new",
                value: self.p_new,
                expected: "a probability in [0, 1]",
            });
        }
        for (name, value) in [
            ("sub_threshold", self.sub_threshold),
            ("j_threshold", self.j_threshold),
            ("l_threshold", self.l_threshold),
        ] {
            if !value.is_finite() {
                return Err(BehaviorError::InvalidParameter {
                    name,
                    value,
                    expected: "a finite threshold",
                });
            }
        }
        if !(self.t_limit > 0.0) {
            return Err(BehaviorError::InvalidParameter {
                name: "t_limit",
                value: self.t_limit,
                expected: "a positive time budget",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum BehaviorError {
    #[error("agent {0} is not a major agent")]
    NotMajor(AgentId),
    #[error("agent {0} is not a minor agent")]
    NotMinor(AgentId),
    #[error("agent {0} is not the creator of project {1}")]
    NotCreator(AgentId, ProjectId),
    #[error("project {0} has an all-zero task vector; join pressure is undefined")]
    ZeroTaskVector(ProjectId),
    #[error("{name} = {value} is invalid; expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Blueprint for a project a decision wants to create.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectDraft {
    pub category: Category,
    pub tasks: PerKind,
    pub origin: ProjectOrigin,
    /// For sub-projects: the parent and the task kind being split. Applying
    /// the draft shrinks the parent's amount for that kind to the child's.
    pub split_from: Option<(ProjectId, TaskKind)>,
}

/// Why a rule decided to do nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoOpReason {
    /// Major agent's founding draw came up short.
    CreateSkipped,
    /// No project was eligible for selection.
    NoEligibleProjects,
    /// Selection landed on a project the agent already belongs to.
    AlreadyMember,
    /// Project's category is outside the agent's interests.
    CategoryMismatch,
    /// Join pressure fell below the threshold.
    PressureBelowThreshold,
    /// Joining would exceed the time budget, or the required time is
    /// undefined because of a zero skill.
    TimeLimitExceeded,
    /// Leave load fell below the threshold.
    LoadBelowThreshold,
    /// Agent has nothing to leave.
    NoMemberships,
    /// Agent sat this step out.
    Idle,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Create {
        draft: ProjectDraft,
        /// The founding draw for independent projects, the triggering load
        /// for splits.
        driving: f64,
    },
    Join {
        project: ProjectId,
        pressure: f64,
    },
    Leave {
        project: ProjectId,
        load: f64,
    },
    NoOp {
        reason: NoOpReason,
        project: Option<ProjectId>,
        /// The value that drove the refusal, when one exists.
        value: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub agent: AgentId,
    pub outcome: Outcome,
}

fn noop(agent: AgentId, reason: NoOpReason, project: Option<ProjectId>, value: Option<f64>) -> Decision {
    Decision {
        agent,
        outcome: Outcome::NoOp {
            reason,
            project,
            value,
        },
    }
}

/// Founding rule for major agents. Draws once; founds when `p_new` is at or
/// above the draw. A founded project consumes four more draws: one for the
/// category and one task amount in `[0, 2)` per kind, in kind order.
pub fn try_create_new(
    major: &AgentState,
    config: &BehaviorConfig,
    rng: &mut SimRng,
) -> Result<Decision, BehaviorError> {
    if major.kind != AgentKind::Major {
        return Err(BehaviorError::NotMajor(major.id));
    }
    let u = rng.next_unit();
    if config.p_new >= u {
        let category = Category::from_index(rng.next_index(Category::COUNT)).unwrap();
        let mut tasks = PerKind::default();
        for kind in TaskKind::ALL {
            tasks[kind] = 2.0 * rng.next_unit();
        }
        Ok(Decision {
            agent: major.id,
            outcome: Outcome::Create {
                draft: ProjectDraft {
                    category,
                    tasks,
                    origin: ProjectOrigin::New,
                    split_from: None,
                },
                driving: u,
            },
        })
    } else {
        Ok(noop(major.id, NoOpReason::CreateSkipped, None, Some(u)))
    }
}

/// Per-member load of one task kind, the quantity the split rule tests.
pub fn sub_load(project: &ProjectState, kind: TaskKind) -> Result<f64, BehaviorError> {
    Ok(crate::model::work_share(project, kind)?)
}

/// Split rule: for each task kind whose per-member load is at or above
/// `sub_threshold`, the creator spins up a child project holding half the
/// parent's amount of that kind (the parent keeps the other half).
///
/// All kinds are judged against the same parent snapshot; the drafts are
/// independent because each touches a different kind.
pub fn try_create_sub(
    major: &AgentState,
    project: &ProjectState,
    config: &BehaviorConfig,
) -> Result<Vec<Decision>, BehaviorError> {
    if major.kind != AgentKind::Major {
        return Err(BehaviorError::NotMajor(major.id));
    }
    if project.creator != major.id {
        return Err(BehaviorError::NotCreator(major.id, project.id));
    }
    let mut decisions = Vec::new();
    for kind in TaskKind::ALL {
        let load = sub_load(project, kind)?;
        if load >= config.sub_threshold {
            let mut tasks = PerKind::default();
            tasks[kind] = 0.5 * project.tasks[kind];
            decisions.push(Decision {
                agent: major.id,
                outcome: Outcome::Create {
                    draft: ProjectDraft {
                        category: project.category,
                        tasks,
                        origin: ProjectOrigin::Sub,
                        split_from: Some((project.id, kind)),
                    },
                    driving: load,
                },
            });
        }
    }
    Ok(decisions)
}

/// Fraction of a project's demanded work not yet covered by member skills.
pub fn join_pressure(
    project: &ProjectState,
    agents: &[AgentState],
) -> Result<f64, BehaviorError> {
    let demanded = project.tasks.total();
    if demanded == 0.0 {
        return Err(BehaviorError::ZeroTaskVector(project.id));
    }
    let mut uncovered = 0.0;
    for kind in TaskKind::ALL {
        uncovered += remaining_work(project, kind, agents);
    }
    Ok(uncovered / demanded)
}

/// Working time the agent would carry if it joined `project`: its current
/// total plus the hours the project would cost at the grown roster size.
pub fn prospective_total_time(
    agent: &AgentState,
    project: &ProjectState,
    projects: &[ProjectState],
) -> Result<f64, ModelError> {
    let current = total_time(agent, projects)?;
    let n_after = (project.members.len() + 1) as f64;
    let mut added = 0.0;
    for kind in TaskKind::ALL {
        let skill = agent.skills[kind];
        if skill == 0.0 {
            return Err(ModelError::UndefinedTime {
                agent: agent.id,
                kind,
            });
        }
        added += (project.tasks[kind] / n_after) / skill;
    }
    Ok(current + added)
}

/// Join rule for minor agents, applied to an already-selected project. The
/// gates run in order: category interest, join pressure, then the time
/// budget. An undefined prospective time (zero skill) fails the time gate
/// rather than erroring, because it only means this agent cannot take the
/// work on.
pub fn try_join(
    agent: &AgentState,
    project: &ProjectState,
    config: &BehaviorConfig,
    agents: &[AgentState],
    projects: &[ProjectState],
) -> Result<Decision, BehaviorError> {
    if agent.kind != AgentKind::Minor {
        return Err(BehaviorError::NotMinor(agent.id));
    }
    if agent.is_member_of(project.id) {
        return Ok(noop(
            agent.id,
            NoOpReason::AlreadyMember,
            Some(project.id),
            None,
        ));
    }
    if !agent.affinities.contains(project.category) {
        return Ok(noop(
            agent.id,
            NoOpReason::CategoryMismatch,
            Some(project.id),
            None,
        ));
    }
    let pressure = join_pressure(project, agents)?;
    if pressure < config.j_threshold {
        return Ok(noop(
            agent.id,
            NoOpReason::PressureBelowThreshold,
            Some(project.id),
            Some(pressure),
        ));
    }
    match prospective_total_time(agent, project, projects) {
        Ok(t) if t <= config.t_limit => Ok(Decision {
            agent: agent.id,
            outcome: Outcome::Join {
                project: project.id,
                pressure,
            },
        }),
        Ok(_) | Err(ModelError::UndefinedTime { .. }) => Ok(noop(
            agent.id,
            NoOpReason::TimeLimitExceeded,
            Some(project.id),
            Some(pressure),
        )),
        Err(e) => Err(e.into()),
    }
}

/// Load surplus a member sees on a project: summed over kinds, the gap
/// between its even work share and its skill.
pub fn leave_load(agent: &AgentState, project: &ProjectState) -> Result<f64, BehaviorError> {
    if !agent.is_member_of(project.id) {
        return Err(ModelError::NotAMember {
            agent: agent.id,
            project: project.id,
        }
        .into());
    }
    let n = project.members.len() as f64;
    let mut load = 0.0;
    for kind in TaskKind::ALL {
        load += project.tasks[kind] / n - agent.skills[kind];
    }
    Ok(load)
}

/// Leave rule for minor agents: quit when the load surplus reaches the
/// threshold.
pub fn try_leave(
    agent: &AgentState,
    project: &ProjectState,
    config: &BehaviorConfig,
) -> Result<Decision, BehaviorError> {
    if agent.kind != AgentKind::Minor {
        return Err(BehaviorError::NotMinor(agent.id));
    }
    let load = leave_load(agent, project)?;
    if load >= config.l_threshold {
        Ok(Decision {
            agent: agent.id,
            outcome: Outcome::Leave {
                project: project.id,
                load,
            },
        })
    } else {
        Ok(noop(
            agent.id,
            NoOpReason::LoadBelowThreshold,
            Some(project.id),
            Some(load),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CategorySet;
    use approx::assert_relative_eq;

    fn major(id: u32) -> AgentState {
        AgentState::new(
            AgentId(id),
            AgentKind::Major,
            PerKind::splat(0.5),
            CategorySet::new(),
        )
        .unwrap()
    }

    fn minor(id: u32, skills: [f64; 3], affinities: &[Category]) -> AgentState {
        AgentState::new(
            AgentId(id),
            AgentKind::Minor,
            PerKind(skills),
            affinities.iter().copied().collect(),
        )
        .unwrap()
    }

    fn project(id: u32, category: Category, tasks: [f64; 3], members: &[u32]) -> ProjectState {
        let mut p = ProjectState::new(
            ProjectId(id),
            category,
            PerKind(tasks),
            AgentId(members[0]),
            0,
            ProjectOrigin::New,
        )
        .unwrap();
        p.members = members.iter().map(|&a| AgentId(a)).collect();
        p
    }

    #[test]
    fn create_new_always_fires_at_probability_one() {
        let config = BehaviorConfig {
            p_new: 1.0,
            ..BehaviorConfig::default()
        };
        let mut rng = SimRng::from_seed(5);
        let m = major(0);
        for _ in 0..50 {
            let d = try_create_new(&m, &config, &mut rng).unwrap();
            match d.outcome {
                Outcome::Create { draft, .. } => {
                    assert_eq!(draft.origin, ProjectOrigin::New);
                    for kind in TaskKind::ALL {
                        assert!((0.0..2.0).contains(&draft.tasks[kind]));
                    }
                }
                other => panic!("expected a create, got {other:?}"),
            }
        }
    }

    #[test]
    fn create_new_never_fires_at_probability_zero() {
        let config = BehaviorConfig {
            p_new: 0.0,
            ..BehaviorConfig::default()
        };
        let mut rng = SimRng::from_seed(5);
        let m = major(0);
        for _ in 0..1_000 {
            let d = try_create_new(&m, &config, &mut rng).unwrap();
            // A draw of exactly 0.0 would still fire, but it has vanishing
            // probability; none appears in this stream.
            assert!(matches!(
                d.outcome,
                Outcome::NoOp {
                    reason: NoOpReason::CreateSkipped,
                    ..
                }
            ));
        }
    }

    #[test]
    fn create_new_rejects_minor_agents() {
        let config = BehaviorConfig::default();
        let mut rng = SimRng::from_seed(5);
        let a = minor(3, [0.5, 0.5, 0.5], &[]);
        assert_eq!(
            try_create_new(&a, &config, &mut rng),
            Err(BehaviorError::NotMajor(AgentId(3)))
        );
    }

    #[test]
    fn sub_split_triggers_inclusively_and_halves_the_kind() {
        let config = BehaviorConfig {
            sub_threshold: 0.9,
            ..BehaviorConfig::default()
        };
        let m = major(0);
        // Two members, network amount 1.8: load is exactly 0.9.
        let p = project(0, Category::Games, [1.8, 0.2, 0.0], &[0, 1]);
        let decisions = try_create_sub(&m, &p, &config).unwrap();
        assert_eq!(decisions.len(), 1);
        match &decisions[0].outcome {
            Outcome::Create { draft, driving } => {
                assert_relative_eq!(*driving, 0.9, max_relative = 1e-9);
                assert_eq!(draft.origin, ProjectOrigin::Sub);
                assert_eq!(draft.category, Category::Games);
                assert_eq!(
                    draft.split_from,
                    Some((ProjectId(0), TaskKind::NetworkCommunication))
                );
                assert_relative_eq!(
                    draft.tasks[TaskKind::NetworkCommunication],
                    0.9,
                    max_relative = 1e-9
                );
                assert_eq!(draft.tasks[TaskKind::Database], 0.0);
            }
            other => panic!("expected a create, got {other:?}"),
        }
        // Just below the threshold: no split.
        let quiet = project(1, Category::Games, [1.7999, 0.2, 0.0], &[0, 1]);
        assert!(try_create_sub(&m, &quiet, &config).unwrap().is_empty());
    }

    #[test]
    fn sub_split_can_fire_for_several_kinds_at_once() {
        let config = BehaviorConfig {
            sub_threshold: 1.0,
            ..BehaviorConfig::default()
        };
        let m = major(0);
        let p = project(0, Category::Development, [2.0, 1.5, 0.5], &[0]);
        let decisions = try_create_sub(&m, &p, &config).unwrap();
        assert_eq!(decisions.len(), 2);
    }

    #[test]
    fn sub_split_requires_the_creator() {
        let config = BehaviorConfig::default();
        let m = major(9);
        let p = project(0, Category::Development, [2.0, 0.0, 0.0], &[0]);
        assert_eq!(
            try_create_sub(&m, &p, &config),
            Err(BehaviorError::NotCreator(AgentId(9), ProjectId(0)))
        );
    }

    #[test]
    fn join_pressure_measures_uncovered_fraction() {
        // Demanded (1.0, 2.0, 0.0); members cover (0.5, 1.5, 0.0):
        // uncovered (0.5, 0.5, 0.0) out of 3.0 demanded.
        let p = project(0, Category::Graphics, [1.0, 2.0, 0.0], &[0, 1]);
        let roster = [
            minor(0, [0.2, 0.75, 0.0], &[]),
            minor(1, [0.3, 0.75, 0.0], &[]),
        ];
        let j = join_pressure(&p, &roster).unwrap();
        assert_relative_eq!(j, 1.0 / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn join_pressure_is_zero_when_skills_cover_tasks_exactly() {
        let p = project(0, Category::Graphics, [1.0, 0.0, 0.0], &[0, 1]);
        let roster = [
            minor(0, [0.5, 0.0, 0.0], &[]),
            minor(1, [0.5, 0.0, 0.0], &[]),
        ];
        assert_eq!(join_pressure(&p, &roster).unwrap(), 0.0);
    }

    #[test]
    fn join_pressure_undefined_for_zero_task_vector() {
        let p = project(0, Category::Graphics, [0.0, 0.0, 0.0], &[0]);
        let roster = [minor(0, [0.5, 0.5, 0.5], &[])];
        assert_eq!(
            join_pressure(&p, &roster),
            Err(BehaviorError::ZeroTaskVector(ProjectId(0)))
        );
    }

    #[test]
    fn join_gates_run_in_order() {
        let config = BehaviorConfig {
            j_threshold: 0.5,
            ..BehaviorConfig::default()
        };
        let p = project(0, Category::Games, [2.0, 2.0, 2.0], &[0]);
        let roster = [minor(0, [0.1, 0.1, 0.1], &[])];

        // Category gate first.
        let outsider = minor(1, [0.9, 0.9, 0.9], &[Category::Graphics]);
        let d = try_join(&outsider, &p, &config, &roster, &[p.clone()]).unwrap();
        assert!(matches!(
            d.outcome,
            Outcome::NoOp {
                reason: NoOpReason::CategoryMismatch,
                ..
            }
        ));

        // Pressure gate next: member covers 0.1 of 0.15 demanded, so only a
        // third of the work is open.
        let covered = project(1, Category::Games, [0.15, 0.0, 0.0], &[0]);
        let fan = minor(1, [0.9, 0.9, 0.9], &[Category::Games]);
        let d = try_join(&fan, &covered, &config, &roster, &[covered.clone()]).unwrap();
        assert!(matches!(
            d.outcome,
            Outcome::NoOp {
                reason: NoOpReason::PressureBelowThreshold,
                ..
            }
        ));

        // Time gate last: high pressure but the newcomer is too slow.
        let slow = minor(1, [0.1, 0.1, 0.1], &[Category::Games]);
        let d = try_join(&slow, &p, &config, &roster, &[p.clone()]).unwrap();
        assert!(matches!(
            d.outcome,
            Outcome::NoOp {
                reason: NoOpReason::TimeLimitExceeded,
                ..
            }
        ));

        // All gates open.
        let able = minor(1, [0.9, 0.9, 0.9], &[Category::Games]);
        let d = try_join(&able, &p, &config, &roster, &[p.clone()]).unwrap();
        match d.outcome {
            Outcome::Join { project, pressure } => {
                assert_eq!(project, ProjectId(0));
                assert!(pressure >= 0.5);
            }
            other => panic!("expected a join, got {other:?}"),
        }
    }

    #[test]
    fn join_at_threshold_boundary_is_accepted() {
        let config = BehaviorConfig {
            j_threshold: 0.5,
            ..BehaviorConfig::default()
        };
        // Demanded 2.0 network, covered 1.0: pressure exactly 0.5.
        let p = project(0, Category::Games, [2.0, 0.0, 0.0], &[0, 1]);
        let roster = [
            minor(0, [0.5, 0.1, 0.1], &[]),
            minor(1, [0.5, 0.1, 0.1], &[]),
        ];
        let joiner = minor(2, [1.0, 1.0, 1.0], &[Category::Games]);
        let d = try_join(&joiner, &p, &config, &roster, &[p.clone()]).unwrap();
        assert!(matches!(d.outcome, Outcome::Join { .. }));
    }

    #[test]
    fn join_time_gate_is_inclusive_at_the_limit() {
        // Candidate has one member; joining makes two. Network amount 2.0
        // over two members is a share of 1.0; at skill 0.5 that costs
        // exactly 2.0 hours, equal to the budget. Inclusive, so it joins.
        let config = BehaviorConfig {
            j_threshold: 0.0,
            t_limit: 2.0,
            ..BehaviorConfig::default()
        };
        let p = project(0, Category::Games, [2.0, 0.0, 0.0], &[0]);
        let roster = [minor(0, [0.1, 0.1, 0.1], &[])];
        let joiner = minor(1, [0.5, 1.0, 1.0], &[Category::Games]);
        let d = try_join(&joiner, &p, &config, &roster, &[p.clone()]).unwrap();
        match d.outcome {
            Outcome::Join { .. } => {}
            other => panic!("expected a join at the exact limit, got {other:?}"),
        }
        // One hair over the budget is refused.
        let tight = BehaviorConfig {
            j_threshold: 0.0,
            t_limit: 2.0 - 1e-12,
            ..BehaviorConfig::default()
        };
        let d = try_join(&joiner, &p, &tight, &roster, &[p.clone()]).unwrap();
        assert!(matches!(
            d.outcome,
            Outcome::NoOp {
                reason: NoOpReason::TimeLimitExceeded,
                ..
            }
        ));
    }

    #[test]
    fn join_with_zero_skill_fails_the_time_gate_not_the_call() {
        let config = BehaviorConfig {
            j_threshold: 0.0,
            ..BehaviorConfig::default()
        };
        let p = project(0, Category::Games, [2.0, 2.0, 2.0], &[0]);
        let roster = [minor(0, [0.1, 0.1, 0.1], &[])];
        let unskilled = minor(1, [0.0, 0.9, 0.9], &[Category::Games]);
        let d = try_join(&unskilled, &p, &config, &roster, &[p.clone()]).unwrap();
        assert!(matches!(
            d.outcome,
            Outcome::NoOp {
                reason: NoOpReason::TimeLimitExceeded,
                ..
            }
        ));
    }

    #[test]
    fn leave_load_and_threshold() {
        let config = BehaviorConfig {
            l_threshold: 0.5,
            ..BehaviorConfig::default()
        };
        // Share 0.2 per kind against skill 0.5 per kind: load 3 * -0.3 = -0.9.
        let p = project(0, Category::Games, [1.0, 1.0, 1.0], &[0, 1, 2, 3, 4]);
        let mut stayer = minor(1, [0.5, 0.5, 0.5], &[]);
        stayer.memberships = vec![ProjectId(0)];
        let load = leave_load(&stayer, &p).unwrap();
        assert_relative_eq!(load, -0.9, max_relative = 1e-9);
        let d = try_leave(&stayer, &p, &config).unwrap();
        assert!(matches!(
            d.outcome,
            Outcome::NoOp {
                reason: NoOpReason::LoadBelowThreshold,
                ..
            }
        ));

        // Overloaded: two members on heavy tasks.
        let heavy = project(1, Category::Games, [2.0, 2.0, 2.0], &[1, 2]);
        let mut quitter = minor(1, [0.5, 0.5, 0.5], &[]);
        quitter.memberships = vec![ProjectId(1)];
        let load = leave_load(&quitter, &heavy).unwrap();
        assert_relative_eq!(load, 1.5, max_relative = 1e-9);
        let d = try_leave(&quitter, &heavy, &config).unwrap();
        match d.outcome {
            Outcome::Leave { project, load } => {
                assert_eq!(project, ProjectId(1));
                assert_relative_eq!(load, 1.5, max_relative = 1e-9);
            }
            other => panic!("expected a leave, got {other:?}"),
        }
    }

    #[test]
    fn leave_at_threshold_boundary_fires() {
        let config = BehaviorConfig {
            l_threshold: 0.5,
            ..BehaviorConfig::default()
        };
        // Share (1.0, 0.5, 0.0), skill (0.5, 0.5, 0.0): load = 0.5 exactly.
        let p = project(0, Category::Games, [2.0, 1.0, 0.0], &[1, 2]);
        let mut member = minor(1, [0.5, 0.5, 0.0], &[]);
        member.memberships = vec![ProjectId(0)];
        assert_eq!(leave_load(&member, &p).unwrap(), 0.5);
        let d = try_leave(&member, &p, &config).unwrap();
        assert!(matches!(d.outcome, Outcome::Leave { .. }));
    }

    #[test]
    fn leave_requires_membership() {
        let config = BehaviorConfig::default();
        let p = project(0, Category::Games, [1.0, 1.0, 1.0], &[0]);
        let stranger = minor(5, [0.5, 0.5, 0.5], &[]);
        assert!(matches!(
            try_leave(&stranger, &p, &config),
            Err(BehaviorError::Model(ModelError::NotAMember { .. }))
        ));
    }

    #[test]
    fn config_validation_catches_bad_parameters() {
        let mut c = BehaviorConfig::default();
        c.p_new = 1.5;
        assert!(c.validate().is_err());
        c.p_new = 0.5;
        c.t_limit = 0.0;
        assert!(c.validate().is_err());
        c.t_limit = 24.0;
        assert!(c.validate().is_ok());
    }
}
