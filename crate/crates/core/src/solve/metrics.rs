//! Episode statistics and parallel evaluation.

use serde::Serialize;

use crate::envs::EnvConfig;
use crate::error::Result;
use crate::product::{run_episode, Outcome, Policy};
use crate::rng::{derive_seed, stream};
use crate::taskgen::TaskDistribution;

pub const METRICS_SCHEMA: &str = "ltl-tasks/metrics/v1";

/// What evaluation keeps from one episode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpisodeSummary {
    pub outcome: Outcome,
    pub discounted_return: f64,
    pub total_reward: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metrics {
    pub schema: &'static str,
    pub env: String,
    pub task_dist: String,
    pub policy: String,
    pub n: usize,
    pub success_rate: f64,
    pub failure_rate: f64,
    pub timeout_rate: f64,
    pub mean_discounted_return: f64,
    pub mean_total_reward: f64,
    /// 90% normal-approximation half-width of the mean discounted return.
    pub ci90: f64,
}

impl Metrics {
    pub const CSV_HEADER: &'static str =
        "env,task_dist,policy,n,success_rate,mean_discounted_return,mean_total_reward,ci90";

    /// Aggregates episodes in the given order.
    pub fn from_episodes(
        env: &str,
        task_dist: &str,
        policy: &str,
        episodes: &[EpisodeSummary],
    ) -> Self {
        let n = episodes.len();
        let nf = n as f64;
        let rate = |o: Outcome| episodes.iter().filter(|e| e.outcome == o).count() as f64 / nf;
        let mean_d = episodes.iter().map(|e| e.discounted_return).sum::<f64>() / nf;
        let mean_t = episodes.iter().map(|e| e.total_reward).sum::<f64>() / nf;
        let ci90 = if n > 1 {
            let var = episodes
                .iter()
                .map(|e| (e.discounted_return - mean_d).powi(2))
                .sum::<f64>()
                / (nf - 1.0);
            1.645 * (var / nf).sqrt()
        } else {
            0.0
        };
        let (s, f) = (rate(Outcome::Success), rate(Outcome::Failure));
        Metrics {
            schema: METRICS_SCHEMA,
            env: env.into(),
            task_dist: task_dist.into(),
            policy: policy.into(),
            n,
            success_rate: s,
            failure_rate: f,
            timeout_rate: 1.0 - s - f,
            mean_discounted_return: mean_d,
            mean_total_reward: mean_t,
            ci90,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.env,
            self.task_dist,
            self.policy,
            self.n,
            self.success_rate,
            self.mean_discounted_return,
            self.mean_total_reward,
            self.ci90
        )
    }
}

/// Runs `n` episodes (episode `i` on child stream `i` of the evaluation
/// seed) across `workers` threads and aggregates them in episode order.
pub fn evaluate(
    config: &EnvConfig,
    dist: &TaskDistribution,
    policy: &dyn Policy,
    n: usize,
    seed: u64,
    workers: usize,
    timeout: Option<usize>,
) -> Result<Metrics> {
    let seed = derive_seed(seed, "eval");
    let workers = workers.clamp(1, n.max(1));
    let run = |i: usize| -> Result<EpisodeSummary> {
        let ep = run_episode(config, dist, policy, &mut stream(seed, i as u64), timeout)?;
        Ok(EpisodeSummary {
            outcome: ep.outcome,
            discounted_return: ep.discounted_return,
            total_reward: ep.total_reward,
        })
    };
    let mut slots: Vec<Option<Result<EpisodeSummary>>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let run = &run;
                scope.spawn(move || {
                    (w..n)
                        .step_by(workers)
                        .map(|i| (i, run(i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("evaluation worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    let episodes = slots
        .into_iter()
        .map(|r| r.expect("every episode ran"))
        .collect::<Result<Vec<_>>>()?;
    Ok(Metrics::from_episodes(
        config.name(),
        dist.label(),
        &policy.name(),
        &episodes,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse, Vocabulary};
    use crate::product::RandomPolicy;

    #[test]
    fn rates_sum_to_one_and_workers_agree() {
        let cfg = EnvConfig::bootcamp(Vocabulary::letters(3));
        let dist = TaskDistribution::uniform([parse("!a U b").unwrap(), parse("F c").unwrap()], 1)
            .unwrap();
        let one = evaluate(&cfg, &dist, &RandomPolicy, 301, 5, 1, None).unwrap();
        let four = evaluate(&cfg, &dist, &RandomPolicy, 301, 5, 4, None).unwrap();
        assert_eq!(one, four);
        assert!((one.success_rate + one.failure_rate + one.timeout_rate - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_episode_rates_are_binary() {
        let cfg = EnvConfig::bootcamp(Vocabulary::letters(2));
        let dist = TaskDistribution::uniform([parse("F a").unwrap()], 1).unwrap();
        let m = evaluate(&cfg, &dist, &RandomPolicy, 1, 5, 3, None).unwrap();
        assert!(m.success_rate == 0.0 || m.success_rate == 1.0);
        assert_eq!(m.ci90, 0.0);
    }

    #[test]
    fn csv_has_header_columns() {
        let m = Metrics::from_episodes(
            "bootcamp",
            "explicit",
            "random",
            &[EpisodeSummary {
                outcome: Outcome::Success,
                discounted_return: 1.0,
                total_reward: 1.0,
            }],
        );
        assert_eq!(
            m.csv_row().split(',').count(),
            Metrics::CSV_HEADER.split(',').count()
        );
    }
}
