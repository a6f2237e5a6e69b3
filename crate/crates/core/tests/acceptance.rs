// Acceptance suite. Run with `cargo test -p ti-core --test acceptance -- --nocapture`
// to see one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use ti_core::bitkit::BitWord;
use ti_core::catalog::enumerate_trivial_x;
use ti_core::cli::{random_chi, random_trajectory, run};
use ti_core::coset::enumerate_coset;
use ti_core::oracle::{cross_check, run_trajectory};
use ti_core::{build_layout, project, CodeLayout, Engine, InjectionState, Projector, Trajectory};

fn report(name: &str, ok: bool, detail: String) {
    println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name} failed: {detail}");
}

fn within(start: Instant, limit: Duration) -> bool {
    start.elapsed() < limit
}

fn all_trajectories(layout: &CodeLayout) -> Vec<Trajectory> {
    let m = layout.num_stabs();
    (0u128..1 << (2 * m))
        .map(|w| Trajectory::new(BitWord::from_raw(w, m), BitWord::from_raw(w >> m, m)))
        .collect()
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("ti").chain(args.iter().copied()), &mut out, &mut err);
    (code, out)
}

fn coeffs(doc: &Value, key: &str) -> Vec<i64> {
    doc[key].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect()
}

#[test]
fn criterion_1_symbolic_regression() {
    let start = Instant::now();
    let (code, out) = cli(&["state", "--distance", "2", "--trajectory", "1001", "--symbolic"]);
    let doc: Value = serde_json::from_slice(&out).unwrap();
    let (a, b) = (coeffs(&doc, "A_coeffs"), coeffs(&doc, "B_coeffs"));
    // index = power of beta
    let expected_a = [0, 1, 1, -1, -1, 0];
    let expected_b = [0, -1, 1, 1, -1, 0];
    let sign = if a[1] < 0 { -1 } else { 1 };
    let a: Vec<i64> = a.iter().map(|c| c * sign).collect();
    let b: Vec<i64> = b.iter().map(|c| c * sign).collect();
    let ok = code == 0 && a == expected_a && b == expected_b && within(start, Duration::from_secs(1));
    report(
        "1 symbolic d=2 regression",
        ok,
        format!("A={a:?} B={b:?} A_poly={} in {:?}", doc["A_poly"], start.elapsed()),
    );
}

#[test]
fn criterion_2_layout_fixture() {
    let start = Instant::now();
    let l = build_layout(2).unwrap();
    let rows: Vec<String> = l.z_stabs.iter().map(|s| s.to_string()).collect();
    let sizes: Vec<usize> = [2, 3, 8].iter().map(|&d| build_layout(d).unwrap().num_data).collect();
    let ok = rows == ["10110", "01101"] && sizes == [5, 13, 113] && within(start, Duration::from_secs(1));
    report("2 layout fixture", ok, format!("Z rows {rows:?}, N {sizes:?}"));
}

#[test]
fn criterion_3_coset_fixture() {
    let start = Instant::now();
    let l = build_layout(2).unwrap();
    let got: Vec<BitWord> = enumerate_coset(&l, "01".parse().unwrap()).unwrap().collect();
    let weights: Vec<u32> = got.iter().map(|w| w.hamming()).collect();
    let sorted = |mut v: Vec<BitWord>| {
        v.sort_by(|a, b| a.lex_cmp(b));
        v
    };
    let expected: Vec<BitWord> = ["00001", "01000", "10100", "11101", "10011", "11010", "00110", "01111"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let ok = sorted(got.clone()) == sorted(expected)
        && weights == [1, 1, 2, 4, 3, 3, 2, 4]
        && within(start, Duration::from_secs(1));
    report("3 coset fixture", ok, format!("{} strings, weights {weights:?}", got.len()));
}

#[test]
fn criterion_4_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = (0.0f64, 0.0f64);
    let mut checked = 0;

    let l2 = build_layout(2).unwrap();
    let chis: Vec<InjectionState> = (0..20).map(|_| random_chi(&mut rng)).collect();
    let p2 = Projector::new(&l2);
    for t in all_trajectories(&l2) {
        let dev = cross_check(&p2, &t, &chis, Engine::Solver).unwrap();
        worst = (worst.0.max(dev.fidelity), worst.1.max(dev.probability));
        checked += 1;
    }

    let l3 = build_layout(3).unwrap();
    let p3 = Projector::new(&l3);
    for _ in 0..100 {
        let t = random_trajectory(&l3, &mut rng);
        let chis: Vec<InjectionState> = (0..5).map(|_| random_chi(&mut rng)).collect();
        let dev = cross_check(&p3, &t, &chis, Engine::Solver).unwrap();
        worst = (worst.0.max(dev.fidelity), worst.1.max(dev.probability));
        checked += 1;
    }

    let ok = worst.0 <= 1e-9 && worst.1 <= 1e-9 && within(start, Duration::from_secs(120));
    report(
        "4 oracle equivalence",
        ok,
        format!(
            "{checked} trajectories, max 1-fidelity {:.2e}, max probability gap {:.2e}, {:?}",
            worst.0,
            worst.1,
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_5_probability_completeness() {
    let start = Instant::now();
    let l = build_layout(2).unwrap();
    let results: Vec<_> = all_trajectories(&l)
        .iter()
        .map(|t| project(&l, t, Engine::Solver).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_sum, mut worst_chain) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let chi = random_chi(&mut rng);
        let mut total = 0.0;
        for r in &results {
            let p = r.trajectory_probability(&chi);
            let chained = run_trajectory(&l, &r.trajectory, &chi, &r.frame).unwrap().probability;
            worst_chain = worst_chain.max((p - chained).abs());
            total += p;
        }
        worst_sum = worst_sum.max((total - 1.0).abs());
    }
    let ok = worst_sum <= 1e-8 && worst_chain <= 1e-10 && within(start, Duration::from_secs(30));
    report(
        "5 probability completeness",
        ok,
        format!("max |sum-1| {worst_sum:.2e}, max chained gap {worst_chain:.2e}"),
    );
}

#[test]
fn criterion_6_trivial_x_catalog() {
    let start = Instant::now();
    let l = build_layout(3).unwrap();
    let chi = InjectionState::from_angles(1.1, 0.0);
    let entries = enumerate_trivial_x(&l, &chi).unwrap();
    let max_y = entries
        .iter()
        .filter_map(|e| e.bloch)
        .map(|b| b[1].abs())
        .fold(0.0, f64::max);
    let ok = entries.len() == 64 && max_y <= 1e-9 && within(start, Duration::from_secs(5));
    report(
        "6 trivial-X catalog d=3",
        ok,
        format!("{} entries, max |y| {max_y:.2e}, {:?}", entries.len(), start.elapsed()),
    );
}

#[test]
fn criterion_7_engine_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let l2 = build_layout(2).unwrap();
    let l3 = build_layout(3).unwrap();
    let mut trajectories: Vec<(&CodeLayout, Trajectory)> = all_trajectories(&l2).into_iter().map(|t| (&l2, t)).collect();
    trajectories.extend((0..100).map(|_| (&l3, random_trajectory(&l3, &mut rng))));
    let mismatches = trajectories
        .iter()
        .filter(|(l, t)| {
            let s = project(l, t, Engine::Solver).unwrap().logical;
            let e = project(l, t, Engine::Expansion).unwrap().logical;
            s != e
        })
        .count();

    let l4 = build_layout(4).unwrap();
    let t = loop {
        let t = random_trajectory(&l4, &mut rng);
        if !t.has_trivial_x() {
            break t;
        }
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let start = Instant::now();
    let r = pool.install(|| project(&l4, &t, Engine::Solver)).unwrap();
    let elapsed = start.elapsed();
    let ok = mismatches == 0 && r.num_data() == 25 && elapsed < Duration::from_secs(60);
    report(
        "7 engine equivalence",
        ok,
        format!(
            "{} trajectories, {mismatches} mismatches; d=4 non-trivial X single-threaded in {elapsed:?}",
            trajectories.len()
        ),
    );
}

#[test]
fn criterion_8_worker_determinism() {
    let mut outputs = Vec::new();
    for format in ["json", "csv"] {
        for workers in ["1", "2", "8"] {
            let (code, out) = cli(&[
                "enumerate", "--distance", "3", "--trivial-x", "--theta", "0.7", "--phi", "0.4",
                "--format", format, "--workers", workers,
            ]);
            assert_eq!(code, 0);
            outputs.push((format, workers, out));
        }
    }
    let ok = outputs.chunks(3).all(|c| c.iter().all(|o| o.2 == c[0].2 && !o.2.is_empty()));
    report(
        "8 worker determinism",
        ok,
        format!("json and csv catalogs identical across workers 1/2/8 ({} bytes json)", outputs[0].2.len()),
    );
}
