use proptest::prelude::*;
use randorder::exact::{build_schedule, check_good_event, exact_select, good_event_trace};
use randorder::secretary::{choose_top_k, ApproxEstimator, OracleEstimator, WarmupEstimator};
use randorder::{
    estimate_quantile, find_kth, make_instance, oracle, warmup_select, ApproxConfig, ElementSource, Extended,
    MemoryMeter, RandomSource,
};

fn instance(n: usize, seed: u64) -> randorder::StreamInstance<u64> {
    // Spread-out distinct values so that relabelings are not the identity.
    make_instance((0..n as u64).map(|v| v * 7 + 3).collect(), seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn find_kth_respects_the_threshold(n in 1usize..400, kf in 0.0f64..1.0, cf in 0.0f64..1.2, m in 1usize..12, seed: u64) {
        let k = 1 + (kf * n as f64) as usize;
        let k = k.min(n);
        let inst = instance(n, seed);
        let cap_value = (cf * 7.0 * n as f64) as u64;
        let cap = Extended::Finite(cap_value);
        let cfg = ApproxConfig::new(m, 0.1).unwrap();
        let mut meter = MemoryMeter::new();
        let mut cursor = inst.cursor();
        let out = find_kth(&mut cursor, n, &cfg, k, cap, &mut RandomSource::new(seed ^ 1), &mut meter).unwrap();
        prop_assert_eq!(cursor.consumed(), n);
        prop_assert_eq!(meter.current(), 0);
        let below = inst.values().iter().filter(|&&v| v < cap_value).count();
        if below < k {
            prop_assert_eq!(out, Extended::Bottom);
        } else {
            let x = out.finite().unwrap();
            prop_assert!(x < cap_value);
            prop_assert!(inst.values().contains(&x));
        }
    }

    #[test]
    fn exact_select_is_correct_under_the_good_event(n in 16usize..600, kf in 0.0f64..1.0, half_m in 2usize..10, seed: u64) {
        let k = (1 + (kf * n as f64) as usize).min(n);
        let m = 2 * half_m;
        let inst = instance(n, seed);
        let mut rng = RandomSource::new(seed);
        let schedule = build_schedule(n, k, m, &mut rng.clone()).unwrap();
        let mut meter = MemoryMeter::new();
        let out = exact_select(&mut inst.cursor(), n, k, m, &mut rng, &mut meter);
        prop_assert!(meter.peak() <= 3 * m + 8);
        let seq: Vec<u64> = inst.stream().collect();
        let trace = good_event_trace(&seq, &schedule, m).unwrap();
        let want = oracle::exact_kth(inst.values(), k).unwrap();
        if schedule.start.is_none() {
            prop_assert_eq!(out.unwrap(), want);
        } else if let Ok(x) = out {
            if check_good_event(&trace).is_empty() {
                prop_assert_eq!(x, want);
            }
        }
    }

    #[test]
    fn secretary_is_one_pass_and_within_budget(n in 1usize..300, kf in 0.0f64..1.0, which in 0usize..3, seed: u64) {
        let k = (1 + (kf * n as f64) as usize).min(n);
        let inst = instance(n, seed);
        let mut meter = MemoryMeter::new();
        let mut cursor = inst.cursor();
        let mut rng = RandomSource::new(seed);
        let run = match which {
            0 => choose_top_k(&mut cursor, n, k, &mut OracleEstimator, &mut rng, &mut meter),
            1 => choose_top_k(&mut cursor, n, k, &mut WarmupEstimator { m: 4 }, &mut rng, &mut meter),
            _ => choose_top_k(&mut cursor, n, k, &mut ApproxEstimator::default(), &mut rng, &mut meter),
        }.unwrap();
        prop_assert_eq!(cursor.consumed(), n);
        prop_assert!(run.log.len() <= k);
        let accepted = run.log.accepted();
        prop_assert!(accepted.windows(2).all(|w| w[0].position < w[1].position));
        for a in accepted {
            prop_assert_eq!(inst.at(a.position), a.value);
        }
        let mut spans = run.reads.clone();
        spans.sort_unstable_by_key(|s| s.1);
        prop_assert!(spans.windows(2).all(|w| w[0].2 < w[1].1));
    }

    #[test]
    fn decisions_depend_only_on_the_prefix(n in 2usize..200, kf in 0.0f64..1.0, cut in 0.0f64..1.0, seed: u64) {
        // Changing the tail of the stream never changes decisions made before it.
        let k = (1 + (kf * n as f64) as usize).min(n);
        let cut = ((cut * n as f64) as usize).max(1);
        let inst = instance(n, seed);
        let mut seq: Vec<u64> = inst.stream().collect();
        let decide = |seq: Vec<u64>| {
            let alt = randorder::StreamInstance::from_sequence(seq).unwrap();
            let mut meter = MemoryMeter::new();
            let mut rng = RandomSource::new(seed);
            choose_top_k(&mut alt.cursor(), n, k, &mut ApproxEstimator::default(), &mut rng, &mut meter).unwrap().log
        };
        let a = decide(seq.clone());
        seq[cut..].reverse();
        let b = decide(seq);
        let early = |log: &randorder::secretary::AcceptanceLog<u64>| {
            log.accepted().iter().filter(|x| x.position <= cut).copied().collect::<Vec<_>>()
        };
        prop_assert_eq!(early(&a), early(&b));
    }

    #[test]
    fn estimators_are_comparison_based(n in 1usize..300, kf in 0.0f64..1.0, seed: u64) {
        let k = (1 + (kf * n as f64) as usize).min(n);
        let inst = instance(n, seed);
        let moved = inst.monotone_relabel(|x| x * 1000 + 7).unwrap();
        let rank = |values: &[u64], x: Extended<u64>| x.finite().map(|x| oracle::true_rank(values, x, Extended::Top).unwrap());

        let cfg = ApproxConfig::for_target(k);
        let mut meter = MemoryMeter::new();
        let a = estimate_quantile(&mut inst.cursor(), n, k, &cfg, &mut RandomSource::new(seed), &mut meter).unwrap();
        let b = estimate_quantile(&mut moved.cursor(), n, k, &cfg, &mut RandomSource::new(seed), &mut meter).unwrap();
        prop_assert_eq!(rank(inst.values(), a), rank(moved.values(), b));

        let a = warmup_select(&mut inst.cursor(), n, k, 4, &mut RandomSource::new(seed), &mut meter).unwrap();
        let b = warmup_select(&mut moved.cursor(), n, k, 4, &mut RandomSource::new(seed), &mut meter).unwrap();
        prop_assert_eq!(rank(inst.values(), a), rank(moved.values(), b));

        let a = exact_select(&mut inst.cursor(), n, k, 8, &mut RandomSource::new(seed), &mut meter).ok();
        let b = exact_select(&mut moved.cursor(), n, k, 8, &mut RandomSource::new(seed), &mut meter).ok();
        prop_assert_eq!(a.map(|x| x * 1000 + 7), b);
    }
}

#[test]
fn approx_error_does_not_grow_with_n() {
    let k = 300;
    let cfg = ApproxConfig::new(48, 0.05).unwrap();
    let mean = |n: usize| {
        let values: Vec<u64> = (0..n as u64).collect();
        let trials = 200u64;
        (0..trials)
            .map(|seed| {
                let inst = make_instance(values.clone(), seed).unwrap();
                let mut meter = MemoryMeter::new();
                let mut rng = RandomSource::new(seed).derive(1);
                let x = estimate_quantile(&mut inst.cursor(), n, k, &cfg, &mut rng, &mut meter).unwrap();
                oracle::true_rank(&values, x.finite().unwrap(), Extended::Top).unwrap().abs_diff(k) as f64
            })
            .sum::<f64>()
            / trials as f64
    };
    let (small, large) = (mean(3_000), mean(60_000));
    assert!(large <= 2.0 * small.max(1.0) && small <= 2.0 * large.max(1.0), "{small} vs {large}");
}

#[test]
fn text_round_trip_preserves_results() {
    let inst = instance(500, 9);
    let mut buf = Vec::new();
    inst.write_text(&mut buf).unwrap();
    let back = randorder::StreamInstance::<u64>::read_text(buf.as_slice()).unwrap();
    assert_eq!(back, inst);
    let mut meter = MemoryMeter::new();
    let cfg = ApproxConfig::for_target(50);
    let a = estimate_quantile(&mut inst.cursor(), 500, 50, &cfg, &mut RandomSource::new(2), &mut meter).unwrap();
    let b = estimate_quantile(&mut back.cursor(), 500, 50, &cfg, &mut RandomSource::new(2), &mut meter).unwrap();
    assert_eq!(a, b);
    let mut cursor = back.cursor();
    cursor.skip(500).unwrap();
    assert!(cursor.next_element().is_err());
}
