use ltl_tasks::envs::EnvConfig;
use ltl_tasks::ltl::random::random_lasso;
use ltl_tasks::ltl::{eval_lasso, parse, progress};
use ltl_tasks::product::{
    enumerate_product, product_step, replay_rewards, run_episode, Caps, EpisodeRecord, Outcome,
    ProductState, RandomPolicy,
};
use ltl_tasks::rng::stream;
use ltl_tasks::taskgen::{preset, TaskDistribution};
use ltl_tasks::{LassoTrace, Vocabulary};

fn episodes(config: &EnvConfig, dist: &TaskDistribution, n: u64, seed: u64) -> Vec<EpisodeRecord> {
    (0..n)
        .map(|i| run_episode(config, dist, &RandomPolicy, &mut stream(seed, i), None).unwrap())
        .collect()
}

fn settings() -> Vec<(EnvConfig, TaskDistribution)> {
    let bootcamp = EnvConfig::bootcamp(Vocabulary::letters(12));
    vec![
        (
            EnvConfig::letter_world(None),
            preset("letterworld-avoid").unwrap(),
        ),
        (
            EnvConfig::letter_world(Some(3)),
            preset("letterworld-po").unwrap(),
        ),
        (bootcamp.clone(), preset("letterworld-avoid").unwrap()),
        (bootcamp, preset("letterworld-po").unwrap()),
        (
            EnvConfig::locked_rooms(),
            TaskDistribution::uniform(
                ["F (B & F G)", "F (B & F R)", "!B U G", "G !R & F B"].map(|t| parse(t).unwrap()),
                0,
            )
            .unwrap(),
        ),
    ]
}

/// The episode's reward agrees with the semantics of its label trace: a
/// success is satisfied by every continuation, a failure by none.
#[test]
fn rewards_agree_with_lasso_semantics_of_the_trace() {
    let check = |k: usize, config: EnvConfig, dist: TaskDistribution| {
        let props: Vec<_> = config.vocabulary().iter().cloned().collect();
        let mut checked = 0;
        for (i, ep) in episodes(&config, &dist, 1_200, 40 + k as u64)
            .iter()
            .enumerate()
        {
            let labels = ep.labels();
            let rewards: Vec<f64> = ep.steps.iter().map(|s| s.reward).collect();
            assert_eq!(replay_rewards(&ep.initial_task, &labels), rewards);
            let total: f64 = rewards.iter().sum();
            assert_eq!(total, ep.total_reward);
            let expected = match ep.outcome {
                Outcome::Success => true,
                Outcome::Failure => false,
                Outcome::Timeout => {
                    assert!(rewards.iter().all(|&r| r == 0.0));
                    continue;
                }
            };
            let mut rng = stream(99, (k * 10_000 + i) as u64);
            for _ in 0..4 {
                let pad = random_lasso(&mut rng, &props, 3, 3);
                let mut prefix = labels.clone();
                prefix.extend_from_slice(pad.prefix());
                let trace = LassoTrace::new(prefix, pad.cycle().to_vec()).unwrap();
                assert_eq!(eval_lasso(&trace, 0, &ep.initial_task), expected);
            }
            checked += 1;
        }
        checked
    };
    let checked: usize = std::thread::scope(|scope| {
        let handles: Vec<_> = settings()
            .into_iter()
            .enumerate()
            .map(|(k, (config, dist))| scope.spawn(move || check(k, config, dist)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).sum()
    });
    assert!(checked >= 500, "only {checked} resolved episodes");
}

/// Each recorded step is reproduced by one product transition from the
/// previous record: the product is Markov in (env state, residual task).
#[test]
fn recorded_steps_replay_through_the_product() {
    for (k, (config, dist)) in settings().into_iter().enumerate() {
        for ep in episodes(&config, &dist, 200, 70 + k as u64) {
            let mut task = ep.initial_task.clone();
            for (j, step) in ep.steps.iter().enumerate() {
                let st = ProductState::new(step.env_state.clone(), &task);
                let t = product_step(&config, &st, &step.action).unwrap();
                assert_eq!(t.label, step.label);
                assert_eq!(t.next.task, step.task);
                assert_eq!(t.reward, step.reward);
                assert_eq!(t.next.task, progress(&step.label, &st.task));
                if let Some(next) = ep.steps.get(j + 1) {
                    assert_eq!(t.next.env, next.env_state);
                }
                task = step.task.clone();
            }
        }
    }
}

#[test]
fn discounted_return_uses_step_index_from_zero() {
    let config = EnvConfig::bootcamp(Vocabulary::letters(3));
    let dist = TaskDistribution::uniform([parse("F (a & F b)").unwrap()], 0).unwrap();
    for ep in episodes(&config, &dist, 300, 5) {
        let expected: f64 = ep
            .steps
            .iter()
            .enumerate()
            .map(|(k, s)| config.gamma.powi(k as i32) * s.reward)
            .sum();
        assert!((ep.discounted_return - expected).abs() < 1e-12);
    }
}

#[test]
fn enumerated_product_is_closed_and_bounded() {
    let config = EnvConfig::locked_rooms();
    let tasks = [
        (parse("F (B & F G)").unwrap(), 0.5),
        (parse("F (B & F R)").unwrap(), 0.5),
    ];
    let mdp = enumerate_product(&config, &tasks, Caps::default()).unwrap();
    let closure = ltl_tasks::ltl::closure(
        &tasks.iter().map(|(f, _)| f.clone()).collect::<Vec<_>>(),
        &config.label_alphabet(),
        1_000,
    )
    .unwrap();
    let env_states = ltl_tasks::envs::reachable_states(&config).unwrap().len();
    assert!(mdp.len() <= env_states * closure.len());
    for (s, st) in mdp.states.iter().enumerate() {
        assert_eq!(mdp.state_index(st), Some(s));
        if mdp.terminal[s] {
            continue;
        }
        for (a, action) in mdp.actions.iter().enumerate() {
            let t = product_step(&config, st, action).unwrap();
            assert_eq!(mdp.states[mdp.next[s][a]], t.next);
            assert_eq!(mdp.reward[s][a], t.reward);
        }
    }
    let weight: f64 = mdp.initial.iter().map(|(_, p)| p).sum();
    assert!((weight - 1.0).abs() < 1e-12);
}

#[test]
fn caps_are_enforced() {
    let config = EnvConfig::bootcamp(Vocabulary::letters(4));
    let f = parse("F (a & F (b & F (c & F d)))").unwrap();
    let tight = Caps {
        formulas: 2,
        states: 1_000_000,
    };
    assert!(matches!(
        enumerate_product(&config, &[(f.clone(), 1.0)], tight),
        Err(ltl_tasks::Error::ClosureCapExceeded { cap: 2, .. })
    ));
    let tight = Caps {
        formulas: 10_000,
        states: 2,
    };
    assert!(matches!(
        enumerate_product(&config, &[(f, 1.0)], tight),
        Err(ltl_tasks::Error::StateCapExceeded { cap: 2 })
    ));
}

#[test]
fn episode_json_is_stable() {
    let config = EnvConfig::letter_world(Some(1));
    let dist = preset("letterworld-avoid").unwrap();
    let a = serde_json::to_string(&episodes(&config, &dist, 3, 8)).unwrap();
    let b = serde_json::to_string(&episodes(&config, &dist, 3, 8)).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v[0]["schema"], "ltl-tasks/episode/v1");
    assert!(v[0]["layout"]["cells"].as_array().unwrap().len() == 24);
}
