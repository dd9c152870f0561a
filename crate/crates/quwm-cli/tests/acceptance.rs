//! Acceptance suite: one test per criterion, each printing a PASS line.
//! Commands run against the real binary; library-level criteria call quwm
//! directly. Run with `cargo test -p quwm-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use std::path::Path;
use std::process::Output;
use std::time::{Duration, Instant};

use quwm::lattice::{generate_roots, max_disjoint_frames, Optimality};
use quwm::matrix::{FamilyParams, MatrixFamily};
use quwm::search::DEFAULT_NODE_BUDGET;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_quwm")
}

fn run(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = std::process::Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs");
    (out, start.elapsed())
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn read_family(path: &Path) -> MatrixFamily {
    quwm::io::read_family(&std::fs::read_to_string(path).expect("family file"))
        .expect("family verifies")
}

fn params(d: u64, k: u64, l: u64, a: u64) -> FamilyParams {
    FamilyParams::new(d, k, l, a).unwrap()
}

#[test]
fn criterion_01_binary_mquwm_m3() {
    let dir = tempfile::tempdir().unwrap();
    let (out, elapsed) = run(&["construct", "binary-mquwm", "--m", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "construct failed: {}", String::from_utf8_lossy(&out.stderr));
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget 1s");
    let family = read_family(&dir.path().join("binary-mquwm-m3.family.json"));
    assert_eq!(family.size(), 8);
    assert_eq!(family.params, params(8, 8, 4, 16));
    let (verify, _) = run(&["verify", dir.path().join("binary-mquwm-m3.family.json").to_str().unwrap()]);
    assert!(verify.status.success());
    println!("criterion 01: PASS: construct binary-mquwm --m 3 gives 8 MQUWM (8,8,4,16) in {elapsed:?}");
}

#[test]
fn criterion_02_binary_mquwm_m5() {
    let dir = tempfile::tempdir().unwrap();
    let (out, elapsed) = run(&["construct", "binary-mquwm", "--m", "5", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "construct failed: {}", String::from_utf8_lossy(&out.stderr));
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}, budget 30s");
    let family = read_family(&dir.path().join("binary-mquwm-m5.family.json"));
    assert_eq!(family.size(), 32);
    assert_eq!(family.params, params(32, 32, 16, 64));
    println!("criterion 02: PASS: construct binary-mquwm --m 5 gives 32 MQUWM (32,32,16,64) in {elapsed:?}");
}

#[test]
fn criterion_03_lp_bound_certificates() {
    let start = Instant::now();
    let (out8, _) = run(&["bound", "lp", "--d", "8"]);
    assert!(out8.status.success());
    let cert8: serde_json::Value = serde_json::from_str(&stdout(&out8)).unwrap();
    assert_eq!(
        cert8["coefficients"],
        serde_json::json!(["1/8", "1/8", "1/8", "1/8", "1/16"]),
        "exact rational solve of the expansion at d = 8"
    );
    assert_eq!(cert8["conclusion"], "f <= 8");
    assert_eq!(cert8["all_coefficients_positive"], true);

    let (out32, _) = run(&["bound", "lp", "--d", "32"]);
    assert!(out32.status.success());
    let cert32: serde_json::Value = serde_json::from_str(&stdout(&out32)).unwrap();
    assert_eq!(
        cert32["coefficients"],
        serde_json::json!(["1/32", "1/32", "1/128", "1/160", "1/1280"])
    );
    assert_eq!(cert32["conclusion"], "f <= 32");

    // the constructed families meet the bounds with equality
    let (f3, _) = quwm::binary::build_mquwm_binary(3).unwrap();
    let (f5, _) = quwm::binary::build_mquwm_binary(5).unwrap();
    assert_eq!(f3.size() as u64, cert8["bound"].as_u64().unwrap());
    assert_eq!(f5.size() as u64, cert32["bound"].as_u64().unwrap());

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget 1s");
    println!("criterion 03: PASS: LP certificates solve exactly; f <= d tight at d = 8, 32 in {elapsed:?}");
}

#[test]
fn criterion_04_d_frames() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    for (d, expected) in [(6u64, 5usize), (10, 9)] {
        let (out, _) = run(&["construct", "d-frames", "--d", &d.to_string(), "--out", dir.path().to_str().unwrap()]);
        assert!(out.status.success());
        let family = read_family(&dir.path().join(format!("d-frames-d{d}.family.json")));
        assert_eq!(family.size(), expected, "d = {d}");
        assert_eq!(family.params, params(d, 2, 4, 1));
        assert_eq!(quwm::bounds::counting_bound(d).bound as usize, expected, "bound met with equality");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget 1s");
    println!("criterion 04: PASS: d-frames gives 5 and 9 MQUWM (d,2,4,1) at d = 6, 10 in {elapsed:?}");
}

#[test]
fn criterion_05_max_disjoint_frames() {
    let zero_cases = ["A2", "A3", "A4", "A5", "A6", "A7", "A8", "D5", "D7", "E6"];
    let start = Instant::now();
    for spec in zero_cases {
        let sys = generate_roots(&spec.parse().unwrap()).unwrap();
        let out = max_disjoint_frames(&sys, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(out.count, 0, "{spec}");
        assert_eq!(out.optimality, Optimality::CliqueBelowRank, "{spec}: exhaustion certificate");
        assert!(out.clique_bound.unwrap() < sys.rank(), "{spec}");
    }
    for (spec, expected, budget_secs) in
        [("D4", 3, 60u64), ("D6", 5, 60), ("D8", 7, 60), ("E7", 9, 60), ("E8", 15, 600)]
    {
        let t = Instant::now();
        let sys = generate_roots(&spec.parse().unwrap()).unwrap();
        let out = max_disjoint_frames(&sys, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(out.count, expected, "{spec}");
        assert!(out.decomposition.leftover(sys.roots().len()).is_empty(), "{spec}: witness partition");
        // witness frames: orthogonal antipodal classes with Gram 8I
        for frame in &out.decomposition.frames {
            let reps: Vec<&Vec<i64>> = frame
                .iter()
                .map(|&i| &sys.roots()[i])
                .filter(|v| quwm::spherical::is_canonical(v))
                .collect();
            assert_eq!(reps.len(), sys.rank());
            for a in 0..reps.len() {
                for b in 0..reps.len() {
                    let ip: i64 = reps[a].iter().zip(reps[b].iter()).map(|(x, y)| x * y).sum();
                    assert_eq!(ip, if a == b { 8 } else { 0 }, "{spec}");
                }
            }
        }
        assert!(t.elapsed() < Duration::from_secs(budget_secs), "{spec} took {:?}", t.elapsed());
    }
    println!("criterion 05: PASS: m(A_2..A_8)=0, m(D_5)=m(D_7)=0, m(D_4,D_6,D_8)=3,5,7, m(E6)=0, m(E7)=9, m(E8)=15 in {:?}", start.elapsed());
}

#[test]
fn criterion_06_weight4_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    for (d, expected) in [(7u64, 8usize), (8, 14)] {
        let (out, _) = run(&["construct", "weight4", "--d", &d.to_string(), "--out", dir.path().to_str().unwrap()]);
        assert!(out.status.success());
        let family = read_family(&dir.path().join(format!("weight4-d{d}.family.json")));
        assert_eq!(family.size(), expected, "d = {d}");
        assert_eq!(family.params, params(d, 4, 4, 4));
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}, budget 10min");
    println!("criterion 06: PASS: weight4 gives 8 MUWM at d = 7 and 14 at d = 8 in {elapsed:?}");
}

#[test]
fn criterion_07_weight4_table() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let (out, _) = run(&["table", "--d", "4..17", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "table failed: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let expected: &[(u64, u64)] = &[
        (4, 2), (5, 0), (6, 4), (7, 8), (8, 14), (9, 0), (10, 8), (11, 2),
        (12, 10), (13, 4), (14, 12), (15, 8), (16, 14), (17, 8),
    ];
    for &(d, m) in expected {
        let row = text
            .lines()
            .find(|l| l.split_whitespace().next() == Some(&d.to_string()))
            .unwrap_or_else(|| panic!("row for d = {d} missing in:\n{text}"));
        let got: u64 = row.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert_eq!(got, m, "d = {d}");
        assert!(row.contains("CONFIRMED") || m == 0, "d = {d}: {row}");
        if m > 0 {
            let family = read_family(&dir.path().join(format!("weight4-d{d}.family.json")));
            assert_eq!(family.size() as u64, m, "d = {d}");
            assert_eq!(family.params, params(d, 4, 4, 4), "d = {d}");
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(900), "took {elapsed:?}, budget 15min");
    println!("criterion 07: PASS: table --d 4..17 reproduces every m with verified witnesses in {elapsed:?}");
}

#[test]
fn criterion_08_property_suites() {
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let start = Instant::now();

    // psi: Hamming distance j <=> inner product d - 2j, 10^4 random pairs
    for _ in 0..10_000 {
        let len = rng.gen_range(1..=64usize);
        let mask: u64 = if len == 64 { !0 } else { (1 << len) - 1 };
        let x = (rng.gen::<u64>() & mask) as u128;
        let y = (rng.gen::<u64>() & mask) as u128;
        let j = (x ^ y).count_ones() as i64;
        let ip: i64 = quwm::binary::psi(x, len)
            .iter()
            .zip(&quwm::binary::psi(y, len))
            .map(|(a, b)| a * b)
            .sum();
        assert_eq!(ip, len as i64 - 2 * j);
    }

    // Gray map Lee/Hamming isometry, 10^4 random Z4 words
    for _ in 0..10_000 {
        let len = rng.gen_range(1..=48usize);
        let word: Vec<u8> = (0..len).map(|_| rng.gen_range(0..4u8)).collect();
        assert_eq!(quwm::z4::gray(&word).count_ones(), quwm::z4::lee_weight(&word));
    }

    // round trip family <-> code on every constructed family
    let families: Vec<MatrixFamily> = vec![
        quwm::binary::build_mquwm_binary(3).unwrap().0,
        quwm::binary::build_mquwm_binary(5).unwrap().0,
        quwm::z4::build_mquwm_z4(2).unwrap().0,
        quwm::z4::build_mquwm_z4(3).unwrap().0,
        quwm::construct::lookup("d-frames").unwrap().build(&quwm::construct::ConstructOptions { d: Some(6), ..Default::default() }).unwrap().family,
        quwm::construct::lookup("d-frames").unwrap().build(&quwm::construct::ConstructOptions { d: Some(10), ..Default::default() }).unwrap().family,
        quwm::lattice::weight4_maximum(7, None, DEFAULT_NODE_BUDGET, false).unwrap().witness.unwrap().family,
        quwm::lattice::weight4_maximum(8, None, DEFAULT_NODE_BUDGET, false).unwrap().witness.unwrap().family,
    ];
    for family in &families {
        let (code, decomp) = quwm::spherical::family_to_code(family).unwrap();
        let back = quwm::spherical::code_to_family(&code, &decomp, family.params.a, false).unwrap();
        assert_eq!(back.params, family.params);
        assert_eq!(back.size(), family.size());
        for (a, b) in family.members.iter().zip(&back.members) {
            let mut rows: Vec<Vec<i64>> =
                a.rows().map(quwm::spherical::canonicalize).collect();
            rows.sort();
            assert_eq!(rows, b.to_rows());
        }
        // derive_muwm output always re-verifies
        if family.size() >= 2 {
            let derived = quwm::matrix::derive_muwm(family).unwrap();
            assert_eq!(derived.size(), family.size() - 1);
            assert!(derived.params.is_unbiased());
        }
    }

    // Krawtchouk orthogonality, exact, d <= 12
    use quwm::bounds::{krawtchouk, Rat};
    use num::{BigInt, One, Zero};
    let rat = |n: i64| Rat::from_integer(BigInt::from(n));
    for d in 4..=12u64 {
        let ks: Vec<_> = (0..=4).map(|k| krawtchouk(k, d)).collect();
        for i in 0..=4usize {
            for j in 0..=4usize {
                let mut sum = Rat::zero();
                for z in 0..=d {
                    let mut binom = Rat::one();
                    for t in 0..z {
                        binom = binom * rat((d - t) as i64) / rat((t + 1) as i64);
                    }
                    sum += binom * ks[i].eval(&rat(z as i64)) * ks[j].eval(&rat(z as i64));
                }
                let expected = if i == j {
                    let mut binom = Rat::one();
                    for t in 0..i as u64 {
                        binom = binom * rat((d - t) as i64) / rat((t + 1) as i64);
                    }
                    binom * rat(2).pow(d as i32)
                } else {
                    Rat::zero()
                };
                assert_eq!(sum, expected, "d={d} i={i} j={j}");
            }
        }
    }
    println!("criterion 08: PASS: 10^4 psi pairs, 10^4 Gray words, round trips, derivations, Krawtchouk orthogonality; zero failures in {:?}", start.elapsed());
}

#[test]
fn criterion_09_z4_pipeline() {
    let start = Instant::now();
    for m in [2u32, 3] {
        let k = quwm::z4::kerdock(m).unwrap();
        assert_eq!(k.codewords().len() as u128, 4u128.pow(m + 1), "size by enumeration");
        assert_eq!(k.size(), 4u128.pow(m + 1), "size by canonical form");
        let (family, report) = quwm::z4::build_mquwm_z4(m).unwrap();
        assert_eq!(report.coset_count as u128, k.size() / quwm::z4::zrm1(m).unwrap().size());
        // every coset image is a cross polytope: Gram d·I on member rows
        let d = report.matrix_order as i64;
        for w in &family.members {
            for i in 0..w.order() {
                for j in 0..w.order() {
                    let ip: i64 = w.row(i).iter().zip(w.row(j)).map(|(a, b)| a * b).sum();
                    assert_eq!(ip, if i == j { d } else { 0 });
                }
            }
        }
    }
    // Gray image of K(3) is nonlinear: exhibit a violating pair
    let k3 = quwm::z4::kerdock(3).unwrap();
    let image: std::collections::HashSet<u128> =
        k3.codewords().iter().map(|w| quwm::z4::gray(w)).collect();
    let (_, report) = quwm::z4::build_mquwm_z4(3).unwrap();
    let (x_str, y_str) = report.nonlinearity_witness.clone().expect("witness pair");
    let parse = |s: &str| u128::from_str_radix(s, 2).unwrap();
    let (x, y) = (parse(&x_str), parse(&y_str));
    assert!(image.contains(&x) && image.contains(&y));
    assert!(!image.contains(&(x ^ y)), "xor must leave the Gray image");

    // measured parameters recorded in the CLI certificate
    let dir = tempfile::tempdir().unwrap();
    let (out, _) = run(&["construct", "z4-mquwm", "--m", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let cert: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("z4-mquwm-m3.cert.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(cert["payload"]["params"]["d"], 16);
    assert_eq!(cert["payload"]["params"]["l"], 16, "measured, not the unattained d/2 claim");
    assert_eq!(cert["payload"]["family_size"], 8);
    assert!(cert["payload"]["spectrum"].as_array().unwrap().len() == 9);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}, budget 30s");
    println!("criterion 09: PASS: Kerdock sizes, cross-polytope cosets, nonlinearity witness, measured certificate in {elapsed:?}");
}

#[test]
fn criterion_10_screening() {
    let start = Instant::now();
    let (out, _) = run(&["screen", "7", "6", "9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("INFEASIBLE"), "{text}");
    assert!(text.contains("OddOrderNonSquareWeight"), "{text}");

    let (out2, _) = run(&["screen", "7", "2", "1", "--size", "9"]);
    assert!(out2.status.success());
    let text2 = stdout(&out2);
    assert!(text2.contains("INFEASIBLE"), "{text2}");
    assert!(text2.contains("CountingBound"), "{text2}");

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget 1s");
    println!("criterion 10: PASS: screen 7 6 9 and screen 7 2 1 --size 9 report the right rules in {elapsed:?}");
}
