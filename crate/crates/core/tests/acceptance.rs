//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ieal::attacks::{
    brute_force, calibrate_pixel_cost, collect_samples, cpa_full, cpa_query_bound, cycle_attack,
    dictionary_stats, kpa, offset_dictionary, rounds_candidates, timing_estimate, EncryptionOracle,
    SimulatedOracle, SimulatedTimingOracle, Smoothness,
};
use ieal::cipher::{decrypt, encrypt, keystream, scramble, Key};
use ieal::image_io::{histogram, load_pgm, make_fixture, FixtureKind};
use ieal::keyspace::weak_key_probability;
use ieal::number_theory::{arnold_period, gcd, sequence_period_mod};
use ieal::Image;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> Image {
    let path = format!("{}/fixtures/{name}.pgm", env!("CARGO_MANIFEST_DIR"));
    load_pgm(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

fn lucas_period() -> Outcome {
    let start = Instant::now();
    let p = sequence_period_mod(256).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(p == 384, || format!("period {p}"))?;
    within(elapsed, Duration::from_millis(1), "period search")?;
    Ok(format!("p=384 in {elapsed:?}"))
}

fn keyspace_table() -> Outcome {
    let rows = [
        (124, 15),
        (128, 96),
        (144, 12),
        (256, 192),
        (276, 24),
        (300, 300),
        (341, 15),
        (377, 14),
        (512, 384),
        (1024, 768),
    ];
    let start = Instant::now();
    for (n, m) in rows {
        let got = arnold_period(n).map_err(|e| e.to_string())?.period;
        ensure(got * 384 == m * 384, || {
            format!("N={n}: Ks={} expected {}", got * 384, m * 384)
        })?;
    }
    within(start.elapsed(), Duration::from_secs(5), "table")?;
    Ok(format!("10 rows in {:?}", start.elapsed()))
}

fn powers_of_two() -> Outcome {
    for n in 3..=10u32 {
        let got = arnold_period(1 << n).map_err(|e| e.to_string())?.period;
        ensure(got == 3 << (n - 2), || format!("N=2^{n}: m={got}"))?;
    }
    Ok("n=3..10".into())
}

fn period_bounds() -> Outcome {
    let start = Instant::now();
    let mut exact = 0;
    for n in 2..=600 {
        let info = arnold_period(n).map_err(|e| e.to_string())?;
        ensure(info.within_bound(), || format!("{info:?}"))?;
        if info.bound_case.is_exact() {
            exact += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30), "bounds sweep")?;
    Ok(format!("599 sizes, {exact} exact cases"))
}

fn dictionary_table() -> Outcome {
    let got: Vec<(usize, usize)> = dictionary_stats()
        .iter()
        .map(|r| (r.size, r.positions))
        .collect();
    ensure(got == vec![(1, 64), (2, 64), (3, 192), (16, 64)], || {
        format!("{got:?}")
    })?;
    Ok(format!("{got:?}"))
}

fn kpa_worked_example() -> Outcome {
    ensure(keystream(127, 1) == vec![109], || {
        "L_127 mod 256 != 109".into()
    })?;
    ensure(offset_dictionary(109).len() == 1, || {
        "109 dictionary size".into()
    })?;
    for name in ["camera_276", "astronaut_276"] {
        let plain = fixture(name);
        let cipher = encrypt(&plain, Key::new(6, 127));
        let r = kpa(&plain, &cipher).map_err(|e| format!("{name}: {e}"))?;
        let key = r.recovered_key.ok_or("no key")?;
        ensure(
            (key.rounds, key.offset, key.period) == (6, 127, 24)
                && r.evidence.cycle_n == Some(18)
                && r.evidence.first_mask_byte == Some(109),
            || format!("{name}: {key} n={:?}", r.evidence.cycle_n),
        )?;
    }
    Ok("s0=109, |dict|=1, S=127, n=18, T=24-18=6".into())
}

fn cycle_law() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..12u64 {
        let plain = make_fixture(FixtureKind::Noise(100 + t), 144).unwrap();
        let key = Key::new(t, rng.random_range(0..10_000));
        let cipher = encrypt(&plain, key);
        let r = cycle_attack(&mut SimulatedOracle::new(key), &cipher, None)
            .map_err(|e| format!("T={t}: {e}"))?;
        let expected = if t == 0 { 2 } else { 24 / gcd(t, 12) };
        ensure(r.evidence.cycle_n == Some(expected), || {
            format!("T={t}: n={:?} expected {expected}", r.evidence.cycle_n)
        })?;
        ensure(r.evidence.rounds_candidates.contains(&t), || {
            format!("T={t} missing from {:?}", r.evidence.rounds_candidates)
        })?;
        ensure(r.recovered_plaintext.as_ref() == Some(&plain), || {
            format!("T={t}: wrong plaintext")
        })?;
    }
    within(start.elapsed(), Duration::from_secs(10), "cycle sweep")?;
    Ok(format!("T=0..11 in {:?}", start.elapsed()))
}

fn cycle_example() -> Outcome {
    let plain = fixture("moon_144");
    let key = Key::new(11, 68);
    let cipher = encrypt(&plain, key);
    let r =
        cycle_attack(&mut SimulatedOracle::new(key), &cipher, None).map_err(|e| e.to_string())?;
    ensure(r.evidence.cycle_n == Some(24), || {
        format!("n={:?}", r.evidence.cycle_n)
    })?;
    ensure(r.evidence.rounds_candidates == vec![1, 5, 7, 11], || {
        format!("{:?}", r.evidence.rounds_candidates)
    })?;
    ensure(r.recovered_plaintext == Some(plain), || "plaintext".into())?;
    ensure(rounds_candidates(24, 12) == vec![1, 5, 7, 11], || {
        "candidate helper".into()
    })?;
    Ok("n=24, T in {1,5,7,11}".into())
}

fn weak_keys() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..10 {
        let plain = make_fixture(FixtureKind::Noise(200 + trial), 276).unwrap();
        let key = Key::new(48, rng.random_range(0..100_000));
        ensure(encrypt(&encrypt(&plain, key), key) == plain, || {
            format!("double encryption under {key} is not the identity")
        })?;
    }
    let p = weak_key_probability(144).map_err(|e| e.to_string())?;
    ensure(p == Ratio::new(1, 12), || format!("Pr={p}"))?;
    Ok("10 images at N=276, Pr(144)=1/12".into())
}

fn brute_force_desk_scale() -> Outcome {
    let fixtures = ["camera_64", "astronaut_64", "coins_64", "moon_64"];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut slowest = Duration::ZERO;
    for trial in 0..20 {
        let name = fixtures[trial % fixtures.len()];
        let plain = fixture(name);
        let key = Key::new(rng.random_range(0..1000), rng.random_range(0..100_000));
        let cipher = encrypt(&plain, key);

        let start = Instant::now();
        let serial = brute_force(&cipher, &Smoothness, 1).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        within(elapsed, Duration::from_secs(60), "serial brute force")?;
        ensure(serial.evidence.candidates_tried == Some(18432), || {
            format!("candidates {:?}", serial.evidence.candidates_tried)
        })?;
        ensure(serial.recovered_plaintext.as_ref() == Some(&plain), || {
            format!("{name} under {key}: recovered {:?}", serial.recovered_key)
        })?;

        let parallel = brute_force(&cipher, &Smoothness, 0).map_err(|e| e.to_string())?;
        ensure(
            parallel.recovered_key == serial.recovered_key
                && parallel.recovered_plaintext == serial.recovered_plaintext
                && parallel.to_kv(false) == serial.to_kv(false),
            || format!("{name} under {key}: parallel report differs"),
        )?;
    }
    Ok(format!("20/20 keys, slowest serial run {slowest:?}"))
}

fn brute_force_demo() -> Outcome {
    let plain = fixture("camera_144");
    let cipher = encrypt(&plain, Key::new(13, 390));
    let r = brute_force(&cipher, &Smoothness, 0).map_err(|e| e.to_string())?;
    let key = r.recovered_key.ok_or("no key")?;
    ensure((key.rounds, key.offset) == (1, 6), || format!("{key}"))?;
    ensure(r.recovered_plaintext == Some(plain), || "plaintext".into())?;
    Ok(format!("{key} in {:.0} ms", r.elapsed_ms()))
}

fn cpa_queries() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (size, expected) in [(16usize, 2u64), (256, 3)] {
        ensure(cpa_query_bound(size) == expected, || {
            format!("bound({size})")
        })?;
        for trial in 0..10 {
            let key = Key::new(rng.random_range(0..100_000), rng.random_range(0..100_000));
            let mut oracle = SimulatedOracle::new(key);
            let out = cpa_full(&mut oracle, size).map_err(|e| e.to_string())?;
            ensure(oracle.queries() == expected, || {
                format!("N={size}: {} queries", oracle.queries())
            })?;
            let fresh = make_fixture(FixtureKind::Noise(trial * 31 + size as u64), size).unwrap();
            let c = encrypt(&fresh, key);
            ensure(
                out.decryptor.decrypt(&c).map_err(|e| e.to_string())? == fresh,
                || format!("N={size} key {key}: decryptor failed"),
            )?;
        }
    }
    Ok("N=16: 2 queries, N=256: 3 queries, 20/20 decryptors exact".into())
}

fn kpa_property() -> Outcome {
    let fixtures: Vec<Image> = ["camera_144", "astronaut_144", "coins_144", "moon_144"]
        .iter()
        .map(|n| fixture(n))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..50 {
        let plain = &fixtures[trial % fixtures.len()];
        let key = Key::new(rng.random_range(0..100_000), rng.random_range(0..100_000));
        let cipher = encrypt(plain, key);
        let r = kpa(plain, &cipher).map_err(|e| format!("{key}: {e}"))?;
        let recovered = r.recovered_key.ok_or("no key")?;
        ensure(decrypt(&cipher, recovered.key()) == *plain, || {
            format!("{key}: recovered {recovered} does not decrypt")
        })?;
    }
    Ok("50/50 pairs".into())
}

fn timing_model() -> Outcome {
    const COST: f64 = 2.5e-9;
    for t in [0u64, 7, 12] {
        let mut o = SimulatedTimingOracle::new(Key::new(t, 3), COST, 0.0, 0);
        let samples = collect_samples(&mut o, &[64, 128, 256]);
        let m = timing_estimate(&samples, COST).map_err(|e| e.to_string())?;
        ensure(m.estimated_rounds == t, || {
            format!("noiseless T={t}: got {}", m.estimated_rounds)
        })?;
    }
    let sizes: Vec<usize> = (1..=20).map(|k| 16 * k).collect();
    let mut correct = 0;
    for trial in 0..100u64 {
        let mut reference = SimulatedTimingOracle::new(Key::new(0, 0), COST, 0.05, 2 * trial);
        let cost = calibrate_pixel_cost(&collect_samples(&mut reference, &sizes), 0)
            .map_err(|e| e.to_string())?;
        let mut target = SimulatedTimingOracle::new(Key::new(12, 40), COST, 0.05, 2 * trial + 1);
        let m = timing_estimate(&collect_samples(&mut target, &sizes), cost)
            .map_err(|e| e.to_string())?;
        if m.estimated_rounds == 12 {
            correct += 1;
        }
    }
    ensure(correct >= 95, || {
        format!("{correct}/100 noisy trials correct")
    })?;
    Ok(format!("noiseless exact; noisy {correct}/100"))
}

fn round_trip_fuzz() -> Outcome {
    let sizes = [4usize, 8, 16, 144];
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for trial in 0..1000u64 {
        let n = sizes[(trial % 4) as usize];
        let plain = make_fixture(FixtureKind::Noise(rng.random()), n).unwrap();
        let key = Key::new(rng.random_range(0..1_000_000), rng.random());
        ensure(decrypt(&encrypt(&plain, key), key) == plain, || {
            format!("N={n} {key}: round trip")
        })?;
        let scrambled = scramble(&plain, key.rounds);
        ensure(histogram(&scrambled) == histogram(&plain), || {
            format!("N={n} T={}: histogram", key.rounds)
        })?;
        ensure(scrambled.get(0, 0) == plain.get(0, 0), || {
            format!("N={n} T={}: origin moved", key.rounds)
        })?;
    }
    Ok("1000 pairs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 15] = [
        ("Lucas sequence mod 256 has period 384", lucas_period),
        ("key space table for ten image sizes", keyspace_table),
        ("power-of-two sizes have period 3*2^(n-2)", powers_of_two),
        ("period bounds for N in 2..600", period_bounds),
        ("S-dictionary size distribution", dictionary_table),
        (
            "known-plaintext worked example at N=276",
            kpa_worked_example,
        ),
        ("cycle length 2m/gcd(T,m) for every T at N=144", cycle_law),
        ("cycle attack on (11, 68) at N=144", cycle_example),
        ("weak keys and their probability", weak_keys),
        (
            "brute force at 64x64, serial and parallel",
            brute_force_desk_scale,
        ),
        ("brute force of (13, 390) at 144x144", brute_force_demo),
        ("chosen-plaintext query bound", cpa_queries),
        ("known-plaintext attack on 50 pairs", kpa_property),
        ("timing model recovers T", timing_model),
        ("cipher round-trip fuzz", round_trip_fuzz),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL [{:>2}] {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
