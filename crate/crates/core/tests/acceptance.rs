//! Acceptance criteria 1–10, one PASS/FAIL line each.

mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nct::dimension::{bratteli_build, ExtGroupElement};
use nct::exact::{parse_value, ContinuedFraction, QuadIrr};
use nct::ext::ext_equivalent;
use nct::halfplane::{default_basepoint, height, in_fundamental_domain, parse_point, reduce_to_f};
use nct::modular::MatSL2;
use nct::moduli::{brute_force_theta_equivalent, hom_action, slope, slope_image, theta_equivalent};
use nct::verify::{matrix_panel, run_suite, sampled_height, theta_panel};

type Outcome = Result<String, String>;

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn v(s: &str) -> QuadIrr {
    parse_value(s).unwrap()
}

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn criterion_1() -> Outcome {
    let golden = ContinuedFraction::expand(&v("(1+sqrt(5))/2"));
    ensure!(golden.preperiod() == ints(&[1]) && golden.period() == ints(&[1]), "golden ratio gave {golden}");
    let root2 = ContinuedFraction::expand(&v("sqrt(2)"));
    ensure!(root2.preperiod() == ints(&[1]) && root2.period() == ints(&[2]), "sqrt(2) gave {root2}");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let x = common::quadratic(&mut rng);
        let back = ContinuedFraction::expand(&x).value();
        ensure!(back == x, "round trip of {x} gave {back}");
    }
    Ok("200 round trips".into())
}

fn criterion_2() -> Outcome {
    let golden = bratteli_build(&ContinuedFraction::expand(&v("(1+sqrt(5))/2")), 6).map_err(|e| e.to_string())?;
    let tops: Vec<BigInt> = golden.levels.iter().map(|l| l.top.clone()).collect();
    ensure!(tops == ints(&[1, 2, 3, 5, 8, 13]), "golden ratio dims {tops:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let theta = common::positive_quadratic(&mut rng);
        let cf = ContinuedFraction::expand(&theta);
        let d = bratteli_build(&cf, 12).map_err(|e| format!("{theta}: {e}"))?;
        let convergents = cf.convergents(13).map_err(|e| e.to_string())?;
        // with a₀ = 0 the first stage is skipped and the dims become denominators
        let dims: Vec<BigInt> = if cf.preperiod()[0].is_zero() {
            convergents[1..].iter().map(|c| c.denom().clone()).collect()
        } else {
            convergents.iter().map(|c| c.numer().clone()).collect()
        };
        for (k, level) in d.levels.iter().enumerate() {
            let below = if k == 0 { BigInt::one() } else { dims[k - 1].clone() };
            ensure!(
                level.top == dims[k] && level.bottom == below,
                "{theta} level {k}: ({}, {}) vs ({}, {below})",
                level.top,
                level.bottom,
                dims[k]
            );
        }
    }
    Ok("20 random diagrams at depth 12".into())
}

fn criterion_3() -> Outcome {
    let panel = theta_panel();
    let (mut pairs, mut positive) = (0, 0);
    for i in 0..panel.len() {
        for j in i + 1..panel.len() {
            let (x, y) = (&panel[i], &panel[j]);
            let fast = theta_equivalent(x, y).map_err(|e| e.to_string())?;
            let slow = brute_force_theta_equivalent(x, y, 20);
            ensure!(fast.equivalent == slow.is_some(), "{x} vs {y}: {} vs {slow:?}", fast.equivalent);
            if fast.equivalent {
                let w = fast.witness.as_ref().ok_or(format!("{x} vs {y}: no witness"))?;
                ensure!(w.moebius_real(x).as_ref() == Ok(y), "{x} vs {y}: witness {w} fails");
                positive += 1;
            }
            pairs += 1;
        }
    }
    ensure!(pairs == 28, "{pairs} pairs");
    Ok(format!("28 pairs agree, {positive} positive with verified witnesses"))
}

fn criterion_4() -> Outcome {
    let theta = v("sqrt(2)");
    let e = ExtGroupElement::new(theta, v("1/4")).map_err(|e| e.to_string())?;
    let z = BigInt::zero;
    let cone = |e: &ExtGroupElement, x: &[BigInt]| e.in_ext_cone([&x[0], &x[1], &x[2], &x[3]]);
    ensure!(cone(&e, &[z(), z(), z(), z()]), "zero vector");
    ensure!(cone(&e, &ints(&[1, 0, 0, 0])), "(1,0,0,0)");
    ensure!(!cone(&e, &ints(&[0, 0, 1, -1])), "(0,0,1,-1)");

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checks = 0;
    for _ in 0..10 {
        let theta = common::quadratic(&mut rng);
        let t = common::parameter_for(&mut rng, &theta);
        let e = ExtGroupElement::new(theta.clone(), t.clone()).map_err(|e| e.to_string())?;
        let vectors: Vec<Vec<BigInt>> = (0..1000)
            .map(|_| (0..4).map(|_| BigInt::from(rng.gen_range(-15..=15))).collect())
            .collect();
        for (i, u) in vectors.iter().enumerate() {
            let w = &vectors[(i + 1) % vectors.len()];
            let neg: Vec<BigInt> = u.iter().map(|x| -x).collect();
            if cone(&e, u) && cone(&e, &neg) {
                ensure!(u.iter().all(Zero::is_zero), "antisymmetry fails at {u:?} for ({theta}, {t})");
            }
            if cone(&e, u) && cone(&e, w) {
                let sum: Vec<BigInt> = u.iter().zip(w).map(|(a, b)| a + b).collect();
                ensure!(cone(&e, &sum), "additivity fails at {u:?} + {w:?} for ({theta}, {t})");
            }
            checks += 1;
        }
    }
    Ok(format!("3 examples, {checks} vectors over 10 (theta, t)"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let theta = common::quadratic(&mut rng);
        let t = common::parameter_for(&mut rng, &theta);
        for n in -10..=10 {
            let shifted = t.add_integer(&BigInt::from(n));
            ensure!(ext_equivalent(&theta, &t, &shifted) == Ok(true), "({theta}, {t}) shift {n}");
        }
    }
    let root2 = v("sqrt(2)");
    ensure!(ext_equivalent(&root2, &v("1/4"), &v("1/3")) == Ok(false), "1/4 vs 1/3 accepted");
    ensure!(ext_equivalent(&root2, &root2, &v("0")) == Ok(true), "sqrt(2) vs 0 rejected");
    let report = run_suite("ext", 42).map_err(|e| e.to_string())?;
    ensure!(report.observations.iter().any(|o| o.name == "deviation"), "deviation not reported");
    Ok("2100 shifts, counterexample rejected, deviation reported".into())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let p = common::point(&mut rng);
        let (q, m) = reduce_to_f(&p);
        ensure!(in_fundamental_domain(&q), "{p} reduced to {q}, outside F");
        ensure!(m.moebius_h(&p) == q, "{m} does not map {p} to {q}");
        let (again, m2) = reduce_to_f(&q);
        ensure!(again == q && m2.projectively_eq(&MatSL2::identity()), "{q} moved to {again}");
    }
    Ok("1000 points".into())
}

fn criterion_7() -> Outcome {
    let base = default_basepoint();
    let two_i = parse_point("2i").unwrap();
    for k in -5..=5 {
        for b in [&base, &two_i] {
            let n = height(&MatSL2::t_pow(k), b).map_err(|e| e.to_string())?;
            ensure!(n == 0, "height(T^{k}, {b}) = {n}");
        }
    }
    let s = height(&MatSL2::s(), &two_i).map_err(|e| e.to_string())?;
    ensure!(s == 1, "height(S, 2i) = {s}");
    for m in matrix_panel() {
        let walk = height(&m, &base).map_err(|e| format!("{m}: {e}"))?;
        let oracle = sampled_height(&m, &base).map_err(|e| format!("{m}: {e}"))?;
        ensure!(walk == oracle, "{m}: walk {walk}, oracle {oracle}");
    }
    Ok("translations, S and 12 panel matrices".into())
}

fn criterion_8() -> Outcome {
    let first = run_suite("height-invariance", 42).map_err(|e| e.to_string())?;
    let second = run_suite("height-invariance", 42).map_err(|e| e.to_string())?;
    ensure!(first == second, "reports differ between runs");
    ensure!(first.ok(), "oracle disagreement:\n{first}");
    ensure!(first.cases >= 1200, "only {} cases", first.cases);
    let dist = first
        .observations
        .iter()
        .find(|o| o.name == "height-distribution")
        .ok_or("no height distribution")?;
    Ok(format!("{} oracle checks; {}", first.cases, dist.summary))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> MatSL2 {
    let mut m = MatSL2::identity();
    for _ in 0..rng.gen_range(1..=6) {
        let step = if rng.gen_bool(0.4) { MatSL2::s() } else { MatSL2::t_pow(rng.gen_range(-3..=3)) };
        m = m.compose(&step);
    }
    if rng.gen_bool(0.5) {
        m.negate()
    } else {
        m
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let theta = common::quadratic(&mut rng);
        let m = random_matrix(&mut rng);
        let t1 = loop {
            let r = common::rational(&mut rng, 9, 7);
            if !r.is_zero() {
                break QuadIrr::from_rational(&r);
            }
        };
        let t2 = t1.try_mul(&theta).unwrap();
        let (s1, s2) = hom_action(&m, &t1, &t2).map_err(|e| e.to_string())?;
        let image = slope(&s1, &s2).map_err(|e| e.to_string())?;
        let k = |n: &BigInt| QuadIrr::from_integer(n.clone());
        let expected = k(m.b())
            .try_add(&k(m.d()).try_mul(&theta).unwrap())
            .unwrap()
            .try_div(&k(m.a()).try_add(&k(m.c()).try_mul(&theta).unwrap()).unwrap())
            .unwrap();
        ensure!(image == expected, "{m} on slope {theta}: {image} vs {expected}");
        ensure!(slope_image(&m, &theta).as_ref() == Ok(&expected), "slope_image disagrees for {m}");
        let eq = theta_equivalent(&theta, &image).map_err(|e| e.to_string())?;
        ensure!(eq.equivalent, "{theta} and {image} not equivalent");
    }
    Ok("100 cases".into())
}

/// `$ nct …` lines of the README with the block of output documented below each.
fn documented_invocations(readme: &str) -> Vec<(String, Vec<String>)> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    let mut current: Option<usize> = None;
    for line in readme.lines() {
        if let Some(cmd) = line.strip_prefix("$ ") {
            out.push((cmd.to_string(), Vec::new()));
            current = Some(out.len() - 1);
        } else if line.starts_with("```") {
            current = None;
        } else if let Some(i) = current {
            out[i].1.push(line.to_string());
        }
    }
    out
}

type Run = (Option<i32>, Vec<u8>, Vec<u8>, BTreeMap<String, Vec<u8>>);

fn run_once(words: &[String]) -> Result<Run, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_nct"))
        .args(&words[1..])
        .current_dir(dir.path())
        .output()
        .map_err(|e| e.to_string())?;
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir.path()).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        let bytes = std::fs::read(entry.path()).map_err(|e| e.to_string())?;
        files.insert(entry.file_name().to_string_lossy().into_owned(), bytes);
    }
    Ok((out.status.code(), out.stdout, out.stderr, files))
}

fn criterion_10() -> Outcome {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md");
    let readme = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let invocations = documented_invocations(&readme);
    ensure!(!invocations.is_empty(), "no documented invocations");
    for (cmd, documented) in &invocations {
        let words = shell_words::split(cmd).map_err(|e| format!("{cmd}: {e}"))?;
        ensure!(words.first().map(String::as_str) == Some("nct"), "not an nct command: {cmd}");
        let first = run_once(&words)?;
        let second = run_once(&words)?;
        ensure!(first == second, "{cmd}: output differs between runs");
        let mut shown = String::from_utf8_lossy(&first.1).into_owned();
        shown.push_str(&String::from_utf8_lossy(&first.2));
        let actual: Vec<&str> = shown.lines().collect();
        ensure!(actual == *documented, "{cmd}: documented\n{}\nbut got\n{shown}", documented.join("\n"));
    }
    Ok(format!("{} invocations", invocations.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("continued fractions", criterion_1, Some(5)),
        ("Bratteli dimensions", criterion_2, Some(5)),
        ("SL(2,Z) equivalence vs brute force", criterion_3, Some(120)),
        ("extension cone", criterion_4, Some(10)),
        ("Ext classes", criterion_5, Some(10)),
        ("fundamental-domain reduction", criterion_6, Some(10)),
        ("height", criterion_7, Some(60)),
        ("height invariance experiment", criterion_8, None),
        ("equivariance of the slope", criterion_9, Some(30)),
        ("CLI determinism", criterion_10, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
        let budget = limit.map_or(String::new(), |s| format!(", limit {s}s"));
        match outcome {
            Ok(detail) if !over => {
                println!("PASS {:>2} {name}: {detail} ({:.2}s{budget})", i + 1, elapsed.as_secs_f64());
            }
            Ok(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} but took {:.2}s{budget}", i + 1, elapsed.as_secs_f64());
            }
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({:.2}s{budget})", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
