//! Randomized invariants over the model, the selection weights, the event
//! encoding, and whole small runs.

use proptest::prelude::*;

use forge_sim::behaviors::{self, BehaviorConfig};
use forge_sim::engine::{SimConfig, Simulation};
use forge_sim::event::{Action, EventDetail, EventRecord};
use forge_sim::growth::{selection_weights, FitnessParams};
use forge_sim::model::{
    self, AgentId, AgentKind, AgentState, Category, CategorySet, PerKind, ProjectId,
    ProjectOrigin, ProjectState, TaskKind,
};

fn tasks_strategy() -> impl Strategy<Value = [f64; 3]> {
    [0.0f64..=2.0, 0.0f64..=2.0, 0.0f64..=2.0]
}

fn skills_strategy() -> impl Strategy<Value = [f64; 3]> {
    [0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0]
}

fn roster(skills: Vec<[f64; 3]>) -> Vec<AgentState> {
    skills
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            AgentState::new(
                AgentId(i as u32),
                AgentKind::Minor,
                PerKind(s),
                CategorySet::new(),
            )
            .unwrap()
        })
        .collect()
}

fn project_with(tasks: [f64; 3], n_members: usize) -> ProjectState {
    let mut p = ProjectState::new(
        ProjectId(0),
        Category::Development,
        PerKind(tasks),
        AgentId(0),
        0,
        ProjectOrigin::New,
    )
    .unwrap();
    p.members = (0..n_members as u32).map(AgentId).collect();
    p
}

proptest! {
    /// Remaining work never exceeds the demanded amount and never goes
    /// negative, whatever the roster's skills.
    #[test]
    fn remaining_work_is_clamped(
        tasks in tasks_strategy(),
        skills in prop::collection::vec(skills_strategy(), 1..6),
    ) {
        let n = skills.len();
        let agents = roster(skills);
        let project = project_with(tasks, n);
        for kind in TaskKind::ALL {
            let remaining = model::remaining_work(&project, kind, &agents);
            prop_assert!(remaining >= 0.0);
            prop_assert!(remaining <= project.tasks[kind]);
        }
    }

    /// Join pressure is a fraction of demanded work, so it stays in [0, 1].
    #[test]
    fn join_pressure_is_a_fraction(
        tasks in tasks_strategy(),
        skills in prop::collection::vec(skills_strategy(), 1..6),
    ) {
        prop_assume!(tasks.iter().sum::<f64>() > 0.0);
        let n = skills.len();
        let agents = roster(skills);
        let project = project_with(tasks, n);
        let pressure = behaviors::join_pressure(&project, &agents).unwrap();
        prop_assert!((0.0..=1.0).contains(&pressure));
    }

    /// Work shares scale back up to the task amount.
    #[test]
    fn work_share_partitions_the_task(
        tasks in tasks_strategy(),
        n in 1usize..9,
    ) {
        let project = project_with(tasks, n);
        for kind in TaskKind::ALL {
            let share = model::work_share(&project, kind).unwrap();
            prop_assert!((share * n as f64 - project.tasks[kind]).abs() <= 1e-12);
        }
    }

    /// Selection weights are a probability vector that ignores ineligible
    /// projects entirely.
    #[test]
    fn selection_weights_form_a_distribution(
        sizes in prop::collection::vec((0usize..5, any::<bool>()), 1..12),
        decay in 0.0f64..0.1,
    ) {
        let params = FitnessParams { decay_rate: decay, floor: 0.01 };
        let projects: Vec<ProjectState> = sizes
            .iter()
            .enumerate()
            .map(|(i, &(members, completed))| {
                let mut p = project_with([1.0, 1.0, 1.0], members);
                p.id = ProjectId(i as u32);
                p.created_at = (i % 7) as u32;
                p.completed = completed;
                p
            })
            .collect();
        let eligible = projects.iter().any(|p| p.is_eligible());
        match selection_weights(&projects, 10, &params) {
            Ok(w) => {
                prop_assert!(eligible);
                prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
                for (p, &weight) in projects.iter().zip(&w) {
                    prop_assert!(weight >= 0.0);
                    if !p.is_eligible() {
                        prop_assert_eq!(weight, 0.0);
                    } else {
                        prop_assert!(weight > 0.0);
                    }
                }
            }
            Err(_) => prop_assert!(!eligible),
        }
    }

    /// The event CSV encoding round-trips every record exactly.
    #[test]
    fn event_rows_round_trip(
        step in 0u32..10_000,
        agent in 0u32..100_000,
        action_pick in 0usize..4,
        project in prop::option::of(0u32..1_000_000),
        task_total in prop::option::of(0.0f64..6.0),
        member_count in prop::option::of(0u32..10_000),
        fitness in prop::option::of(0.0f64..1.0),
        driving in prop::option::of(-5.0f64..30.0),
        detail_pick in 0usize..11,
    ) {
        let action = [Action::Create, Action::Join, Action::Leave, Action::NoOp][action_pick];
        let detail = [
            "", "new", "sub", "skip_create", "no_projects", "already_member",
            "category", "pressure", "time", "below_threshold", "idle",
        ][detail_pick];
        let record = EventRecord {
            step,
            agent: AgentId(agent),
            action,
            project: project.map(ProjectId),
            task_total,
            member_count,
            fitness,
            driving_value: driving,
            detail: EventDetail::from_str(detail).unwrap(),
        };
        let row = record.to_csv_row();
        let parsed = EventRecord::from_csv_row(row.trim_end()).unwrap();
        prop_assert_eq!(parsed, record);
    }

    /// Config text renders and parses back to the same configuration.
    #[test]
    fn config_text_round_trips(
        n_major in 1u32..2_000,
        n_minor in 0u32..50_000,
        n_steps in 1u32..5_000,
        seed in any::<u64>(),
        p_new in 0.0f64..=1.0,
        p_cat in 0.01f64..=1.0,
        sub in 0.25f64..3.0,
        j in 0.0f64..=1.5,
        l in 0.0f64..=1.5,
        t_limit in 1.0f64..48.0,
        decay in 0.0f64..0.2,
        floor in 0.001f64..0.5,
    ) {
        let config = SimConfig {
            n_major,
            n_minor,
            n_steps,
            seed,
            p_cat,
            behavior: BehaviorConfig {
                p_new,
                sub_threshold: sub,
                j_threshold: j,
                l_threshold: l,
                t_limit,
            },
            fitness: FitnessParams { decay_rate: decay, floor },
        };
        let text = forge_sim::config::render_config(&config);
        let back = forge_sim::config::parse_config_str(&text).unwrap();
        prop_assert_eq!(back, config);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Whole small runs: replays are byte-identical, the event count is the
    /// per-agent schedule plus one row per split, and the final state passes
    /// the engine's own structural checks.
    #[test]
    fn small_runs_are_deterministic_and_consistent(
        n_major in 1u32..4,
        n_minor in 0u32..12,
        n_steps in 1u32..8,
        seed in 0u64..1_000,
        p_new in 0.0f64..0.4,
        sub in 0.25f64..1.5,
        j in 0.0f64..=1.0,
        l in 0.0f64..=1.0,
    ) {
        let mut config = SimConfig {
            n_major,
            n_minor,
            n_steps,
            seed,
            p_cat: 0.4,
            ..SimConfig::default()
        };
        config.behavior.p_new = p_new;
        config.behavior.sub_threshold = sub;
        config.behavior.j_threshold = j;
        config.behavior.l_threshold = l;

        let (state_a, events_a) = Simulation::run_collect(config.clone()).unwrap();
        let (state_b, events_b) = Simulation::run_collect(config.clone()).unwrap();
        prop_assert_eq!(&events_a, &events_b);
        prop_assert_eq!(state_a.projects.len(), state_b.projects.len());

        let splits = state_a
            .projects
            .iter()
            .filter(|p| p.origin == ProjectOrigin::Sub)
            .count();
        let scheduled = n_steps as usize * (n_major + n_minor) as usize;
        prop_assert_eq!(events_a.len(), scheduled + splits);

        let mut sim = Simulation::new(config).unwrap();
        let mut sink = forge_sim::event::CountSink::default();
        for _ in 0..n_steps {
            sim.step(&mut sink).unwrap();
            sim.check_invariants().unwrap();
        }
        prop_assert_eq!(sim.state.projects.len(), state_a.projects.len());
    }
}
