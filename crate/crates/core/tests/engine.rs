use deficit_core::engine::Accumulator;
use deficit_core::{Checkpoint, Error, PrimeEngine, SieveConfig};
use proptest::prelude::*;

fn trial_primes(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&k| (2..).take_while(|d| d * d <= k).all(|d| k % d != 0))
        .collect()
}

#[test]
fn matches_direct_definition() {
    let engine = PrimeEngine::with_capacity(200_000).unwrap();
    let primes = trial_primes(104_729);
    assert_eq!(primes.len(), 10_000);
    let mut records = Vec::new();
    engine.cn_stream(1, 10_000, None, |r| records.push(*r)).unwrap();
    let mut sum = 0i128;
    for (i, (&p, r)) in primes.iter().zip(&records).enumerate() {
        let n = i as i128 + 1;
        sum += p as i128;
        assert_eq!((r.n, r.p, r.sum), (n as u64, p, sum));
        assert_eq!(r.c, n * p as i128 - sum);
    }
}

#[test]
fn step_integral_is_the_deficit() {
    let engine = PrimeEngine::with_capacity(2_000_000).unwrap();
    let mut integral = 0i128;
    let mut prev: Option<(u64, u64)> = None;
    engine
        .cn_stream(1, 100_000, None, |r| {
            if let Some((k, p)) = prev {
                integral += k as i128 * (r.p - p) as i128;
            }
            assert_eq!(r.c, integral, "n = {}", r.n);
            prev = Some((r.n, r.p));
        })
        .unwrap();
    assert_eq!(engine.pi_step_integral(100_000).unwrap(), engine.cn_exact(100_000).unwrap());
}

#[test]
fn known_values() {
    let engine = PrimeEngine::with_capacity(20_000_000).unwrap();
    assert_eq!(engine.cn_exact(1).unwrap(), 0);
    assert_eq!(engine.cn_exact(5).unwrap(), 27);
    assert_eq!(engine.nth_prime(1000).unwrap(), 7919);
    assert_eq!(engine.nth_prime(1_000_000).unwrap(), 15_485_863);
    assert_eq!(engine.advance_to(100).unwrap().sum, 24133);
    assert_eq!(engine.pi_integral_to(11).unwrap(), 27);
    assert_eq!(engine.pi_integral_to(12).unwrap(), 32);
    assert_eq!(engine.pi_integral_to(2).unwrap(), 0);
    assert!(matches!(engine.cn_exact(0), Err(Error::Domain(_))));
}

#[test]
fn capacity_is_reported() {
    let engine = PrimeEngine::with_capacity(1000).unwrap();
    assert!(matches!(engine.cn_exact(200), Err(Error::Capacity { .. })));
    assert!(matches!(engine.pi_integral_to(1001), Err(Error::Capacity { .. })));
    assert!(matches!(engine.prime_count_real(2000.5), Err(Error::Capacity { .. })));
    assert_eq!(engine.prime_count_real(1000.9).unwrap(), 168);
}

#[test]
fn narrow_accumulator_overflows_loudly() {
    let engine = PrimeEngine::with_capacity(1_000_000).unwrap();
    let mut acc = Accumulator::<i32>::new();
    let mut last_ok = 0;
    let err = engine
        .sieve()
        .primes_from(2)
        .try_for_each(|p| acc.push(p).map(|r| last_ok = r.n))
        .unwrap_err();
    let Error::Overflow { n } = err else { panic!("{err:?}") };
    assert_eq!(n, last_ok + 1);
    // n·p_n is the largest intermediate, so it is the first to leave i32
    let at = engine.advance_to(n).unwrap();
    let before = engine.advance_to(n - 1).unwrap();
    assert!(n as i128 * at.p as i128 > i32::MAX as i128);
    assert!((n - 1) as i128 * before.p as i128 <= i32::MAX as i128);
}

#[test]
fn corrupt_checkpoints_are_rejected() {
    let engine = PrimeEngine::with_capacity(10_000).unwrap();
    let cp = engine.advance_to(50).unwrap();
    cp.validate().unwrap();
    let mut bad = cp;
    bad.c += 1;
    assert!(matches!(engine.advance_from(&bad, 60), Err(Error::Corrupt(_))));
    let mut bad = cp;
    bad.sieve_position += 1;
    assert!(bad.validate().is_err());
    assert!(Checkpoint::ORIGIN.validate().is_ok());
}

#[test]
fn segment_size_does_not_change_results() {
    let small = PrimeEngine::new(SieveConfig { capacity: 300_000, segment_bytes: 8 }).unwrap();
    let big = PrimeEngine::with_capacity(300_000).unwrap();
    assert_eq!(small.advance_to(25_000).unwrap(), big.advance_to(25_000).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resume_is_seamless(split in 1u64..20_000, end in 20_000u64..30_000) {
        let engine = PrimeEngine::with_capacity(400_000).unwrap();
        let direct = engine.advance_to(end).unwrap();
        let mid = engine.advance_to(split).unwrap();
        prop_assert_eq!(engine.advance_from(&mid, end).unwrap(), direct);

        let mut tail = Vec::new();
        engine.cn_stream(split + 1, end, Some(&mid), |r| tail.push(*r)).unwrap();
        let mut whole = Vec::new();
        engine.cn_stream(split + 1, end, None, |r| whole.push(*r)).unwrap();
        prop_assert_eq!(tail, whole);
    }

    #[test]
    fn deficit_is_monotone(n in 1u64..20_000) {
        let engine = PrimeEngine::with_capacity(400_000).unwrap();
        let a = engine.advance_to(n).unwrap();
        let b = engine.advance_from(&a, n + 1).unwrap();
        prop_assert!(b.c >= a.c);
        prop_assert_eq!(b.c - a.c, n as i128 * (b.p - a.p) as i128);
    }
}
