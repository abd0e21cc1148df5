use std::collections::{BTreeSet, HashSet};

use ltl_tasks::rng::stream;
use ltl_tasks::taskgen::{
    count_tasks, preset, recognize_avoidance, recognize_partially_ordered, AvoidanceParams,
    PartiallyOrderedParams, TaskDistribution, TaskKind, Term, PRESETS,
};
use ltl_tasks::Vocabulary;
use num_bigint::BigUint;
use num_traits::ToPrimitive;

fn canonical_po(f: &ltl_tasks::Formula) -> BTreeSet<String> {
    recognize_partially_ordered(f)
        .expect("sample matches the grammar")
        .into_iter()
        .map(|seq| {
            seq.iter()
                .map(|t| match t {
                    Term::Prop(p) => p.to_string(),
                    Term::Either(a, b) => {
                        let (a, b) = if a < b { (a, b) } else { (b, a) };
                        format!("({a}|{b})")
                    }
                })
                .collect::<Vec<_>>()
                .join(">")
        })
        .collect()
}

fn canonical_avoid(f: &ltl_tasks::Formula) -> BTreeSet<String> {
    recognize_avoidance(f)
        .expect("sample matches the grammar")
        .into_iter()
        .map(|seq| {
            seq.iter()
                .map(|(avoid, reach)| format!("!{avoid}U{reach}"))
                .collect::<Vec<_>>()
                .join(">")
        })
        .collect()
}

/// Number of distinct tasks among the first `draws` samples.
fn distinct_samples(
    dist: &TaskDistribution,
    canon: fn(&ltl_tasks::Formula) -> BTreeSet<String>,
    draws: u64,
) -> usize {
    let mut seen = HashSet::new();
    for i in 0..draws {
        let f = dist.sample(i).unwrap();
        let c = canon(&f);
        let props = f.propositions();
        assert!(props.iter().all(|p| dist.vocabulary().contains(p)));
        seen.insert(c);
    }
    seen.len()
}

#[test]
fn samplers_cover_exactly_the_counted_support() {
    let po = TaskDistribution::new(
        TaskKind::PartiallyOrdered(PartiallyOrderedParams {
            conjuncts_min: 1,
            conjuncts_max: 2,
            depth_min: 1,
            depth_max: 2,
            disjunction_prob: 0.5,
            vocabulary: Vocabulary::letters(3),
        }),
        11,
    )
    .unwrap();
    let expected = count_tasks(&po).unwrap().to_usize().unwrap();
    assert_eq!(distinct_samples(&po, canonical_po, 200_000), expected);

    let avoid = TaskDistribution::new(
        TaskKind::Avoidance(AvoidanceParams {
            conjuncts_min: 1,
            conjuncts_max: 2,
            depth_min: 1,
            depth_max: 1,
            vocabulary: Vocabulary::letters(4),
        }),
        12,
    )
    .unwrap();
    let expected = count_tasks(&avoid).unwrap().to_usize().unwrap();
    // 4·3 single pairs plus 4!/2! unordered pairs of disjoint pairs
    assert_eq!(expected, 12 + 12);
    assert_eq!(distinct_samples(&avoid, canonical_avoid, 20_000), expected);
}

#[test]
fn avoidance_samples_use_each_proposition_once() {
    let dist = preset("letterworld-avoid").unwrap();
    for i in 0..2_000 {
        let f = dist.sample(i).unwrap();
        assert_eq!(f.propositions().len(), f.proposition_occurrences().len());
    }
}

#[test]
fn sampling_is_a_function_of_seed_and_index() {
    for name in PRESETS {
        let dist = preset(name).unwrap();
        let a: Vec<_> = (0..50).map(|i| dist.sample(i).unwrap()).collect();
        let b: Vec<_> = (0..50).rev().map(|i| dist.sample(i).unwrap()).collect();
        assert!(a.iter().eq(b.iter().rev()), "{name}");
        let other = dist.clone().with_seed(dist.seed + 1);
        assert!(
            (0..50).any(|i| other.sample(i).unwrap() != a[i as usize]),
            "{name}"
        );
    }
}

#[test]
fn token_counts_at_preset_parameters() {
    // AST node counts; the reported maxima are for comparison only.
    let mut report = Vec::new();
    for (name, draws) in [
        ("letterworld-po", 1_000_000),
        ("letterworld-avoid", 1_000_000),
        ("upgen-depth", 100_000),
        ("upgen-conjuncts", 100_000),
        ("upgen-depth-po", 20_000),
        ("upgen-conjuncts-po", 20_000),
    ] {
        let dist = preset(name).unwrap();
        let mut rng = stream(dist.seed, u64::MAX);
        let max = (0..draws)
            .map(|_| dist.sample_with(&mut rng).unwrap().size())
            .max()
            .unwrap();
        report.push(format!("{name}: max {max} nodes over {draws} samples"));
    }
    println!("{}", report.join("\n"));
}

#[test]
fn token_count_grows_with_depth_and_conjuncts() {
    let mean = |dmax: usize, cmax: usize| {
        let dist = TaskDistribution::new(
            TaskKind::PartiallyOrdered(PartiallyOrderedParams {
                conjuncts_min: 1,
                conjuncts_max: cmax,
                depth_min: 1,
                depth_max: dmax,
                disjunction_prob: 0.25,
                vocabulary: Vocabulary::letters(12),
            }),
            3,
        )
        .unwrap();
        (0..4_000)
            .map(|i| dist.sample(i).unwrap().size())
            .sum::<usize>() as f64
            / 4_000.0
    };
    assert!(mean(2, 2) < mean(4, 2));
    assert!(mean(2, 2) < mean(2, 4));
}

#[test]
fn counts_are_monotone_in_vocabulary() {
    let mut last = BigUint::from(0u32);
    for n in 4..=12 {
        let dist = TaskDistribution::new(
            TaskKind::Avoidance(AvoidanceParams {
                conjuncts_min: 1,
                conjuncts_max: 2,
                depth_min: 1,
                depth_max: 1,
                vocabulary: Vocabulary::letters(n),
            }),
            0,
        )
        .unwrap();
        let c = count_tasks(&dist).unwrap();
        assert!(c > last);
        last = c;
    }
}

#[test]
fn explicit_distributions_are_not_counted() {
    let dist = TaskDistribution::uniform([ltl_tasks::ltl::parse("F a").unwrap()], 0).unwrap();
    assert!(count_tasks(&dist).is_err());
}

#[test]
fn undersized_vocabulary_is_rejected() {
    let kind = TaskKind::Avoidance(AvoidanceParams {
        conjuncts_min: 1,
        conjuncts_max: 2,
        depth_min: 1,
        depth_max: 3,
        vocabulary: Vocabulary::letters(11),
    });
    assert!(matches!(
        TaskDistribution::new(kind, 0),
        Err(ltl_tasks::Error::VocabularyTooSmall {
            needed: 12,
            available: 11
        })
    ));
}
