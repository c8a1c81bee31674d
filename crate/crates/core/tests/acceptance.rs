//! Acceptance criteria, one line per criterion:
//! `cargo test -p severi --test acceptance -- --nocapture`.

mod common;

use std::cmp::Ordering;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use severi::cli::{builtin, parse_structured_outcomes, render_outcomes, CheckOutcome, Format};
use severi::criterion::{cs_bounds, delta_max, f_delta, roots_alpha_beta, HypothesisId};
use severi::exactnum::{isqrt, strict_sup_int, surd_cmp, surd_floor, Rational};
use severi::families::{
    b_inequality, build_surface, cl_comparison, d_inequality, family_point, minimal_a,
    residual_class, simplified_threshold, thresholds,
};
use severi::lattice::{invariants, signature, DivisorClass, IntersectionLattice, SurfaceModel};

use common::{fixed_point_cmp, minor_signature, newton_isqrt, random_bits, random_rational, random_surd};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn h4_rhs(o: &CheckOutcome) -> BigInt {
    o.report.checks.iter().find(|c| c.id == HypothesisId::H4).unwrap().rhs.clone()
}

fn ac01_quartic() -> Outcome {
    let o = &builtin::outcomes()[0];
    let inv = &o.report.invariants;
    let got = (&inv.cm2k_sq, &inv.t, &inv.ck, &inv.k2, &inv.hodge, h4_rhs(o));
    ensure!(
        got == (&big(12), &big(16), &big(0), &big(-1), &big(16), big(48)),
        "invariants {got:?}"
    );
    ensure!(o.report.checks.iter().all(|c| c.satisfied), "a hypothesis failed");
    ensure!(o.report.delta_max == Some(big(3)), "delta_max {:?}", o.report.delta_max);
    Ok("(C-2K)^2=12 t=16 CK=0 K^2=-1 H=16 4(t-4)=48 delta_max=3".into())
}

fn ac02_quintic() -> Outcome {
    let o = &builtin::outcomes()[1];
    let inv = &o.report.invariants;
    ensure!(inv.ck == big(16) && inv.t == big(16) && inv.hodge == big(16), "{inv:?}");
    ensure!(inv.k2 == big(5), "K^2 = {}", inv.k2);
    ensure!(o.report.delta_max == Some(big(3)), "delta_max {:?}", o.report.delta_max);
    ensure!(inv.cm2k_sq == big(4), "(C-2K)^2 = {}", inv.cm2k_sq);
    let note = o.report.notes.iter().find(|n| n.starts_with("discrepancy"));
    ensure!(note.is_some_and(|n| n.contains('3') && n.contains('4')), "missing discrepancy note");
    Ok("CK=t=H=16 K^2=5 delta_max=3 (C-2K)^2=4, discrepancy with published 3 noted".into())
}

fn ac03_minimal_a() -> Outcome {
    let got: Vec<Option<i64>> = (5..=8).map(|d| minimal_a(d, 10 * d).unwrap()).collect();
    ensure!(got == [Some(4), Some(6), Some(8), Some(11)], "minimal_a(5..=8) = {got:?}");
    for d in 5..=7 {
        ensure!(got[(d - 5) as usize] == Some(2 * d - 6), "d={d} differs from 2d-6");
    }
    Ok("minimal_a(5,6,7,8) = 4,6,8,11".into())
}

fn ac04_thresholds() -> Outcome {
    let rec = thresholds(8).unwrap();
    ensure!(rec.hodge_root_min_a == big(11), "smallest a above the Hodge root {}", rec.hodge_root_min_a);
    ensure!(rec.simplified_bound == Some(big(12)), "simplified {:?}", rec.simplified_bound);
    // ⌈5 + (16√2 − 9)/2⌉ written as (1 + 16√2)/2.
    let alt = severi::exactnum::SurdExpr::from_parts(1, 16, 2, 2).unwrap();
    let simplified = simplified_threshold(8, 9);
    ensure!(alt.value_eq(&simplified), "{alt} != {simplified}");
    ensure!(simplified.ceil() == big(12) && alt.ceil() == big(12), "ceil {}", simplified.ceil());
    for d in 8..=40 {
        ensure!(b_inequality(d, 9), "b inequality fails at d={d}");
        ensure!(d_inequality(d, 9), "d inequality fails at d={d}");
    }
    Ok("d=8: Hodge root min 11, simplified 12 >= 11; b and d inequalities hold at b=9 for d in [8,40]".into())
}

fn ac05_hodge_closed_form() -> Outcome {
    let mut n = 0;
    for d in 5..=40i64 {
        let surface = build_surface(d).unwrap();
        let expected = big((d - 4) * (d - 4) * (d - 1) * (d - 1));
        for a in 1..=100 {
            let inv = invariants(&surface, &residual_class(a)).unwrap();
            ensure!(inv.hodge == expected, "d={d} a={a}: {} != {expected}", inv.hodge);
            n += 1;
        }
    }
    Ok(format!("{n} exact equalities"))
}

fn family_grid() -> impl Iterator<Item = (i64, i64)> {
    (5..=12).flat_map(|d| (1..=30).map(move |a| (d, a)))
}

fn ac06_interval() -> Outcome {
    let mut n = 0;
    for (d, a) in family_grid() {
        let report = family_point(d, a).unwrap().report;
        let Some(m) = &report.delta_max else { continue };
        let inv = &report.invariants;
        let mut delta = big(1);
        while &delta <= m {
            ensure!(f_delta(inv, &delta) < big(0), "d={d} a={a} F({delta}) >= 0");
            delta += 1;
        }
        let past = strict_sup_int(report.beta.as_ref().unwrap()) + 1;
        ensure!(f_delta(inv, &past) >= big(0), "d={d} a={a} F({past}) < 0");
        n += 1;
    }
    Ok(format!("{n} passing reports"))
}

fn ac07_case_one() -> Outcome {
    let mut n = 0;
    for (d, a) in family_grid() {
        let report = family_point(d, a).unwrap().report;
        let Some(m) = &report.delta_max else { continue };
        let case_one = (&report.invariants.t - 4) / 4;
        ensure!(*m == case_one || report.invariants.t < big(8), "d={d} a={a} bound {m}");
        let sup = strict_sup_int(report.beta.as_ref().unwrap());
        ensure!(case_one <= sup, "d={d} a={a}: {case_one} > {sup}");
        n += 1;
    }
    Ok(format!("{n} passing reports"))
}

fn ac08_genus_bound() -> Outcome {
    let mut n = 0;
    for (d, a) in family_grid().filter(|&(d, _)| d >= 6) {
        let cl = cl_comparison(d, a).unwrap();
        if cl.report_passes {
            ensure!(cl.consistent, "d={d} a={a} inconsistent");
            n += 1;
        }
    }
    Ok(format!("{n} passing cells consistent"))
}

fn ac09_rank_one() -> Outcome {
    let lattice = IntersectionLattice::from_rows(&["K"], &[&[5]]).unwrap();
    let surface = SurfaceModel::new("rank one", lattice, DivisorClass::from_i64(&[1])).unwrap();
    let report = delta_max(&surface, &DivisorClass::from_i64(&[3])).unwrap();
    let (alpha, beta) = roots_alpha_beta(&report.invariants).unwrap();
    let cs = cs_bounds(&Rational::from_integer(big(3)), &big(5)).unwrap();
    let zero = Rational::from_integer(big(0));
    ensure!(alpha.as_rational() == Some(zero), "alpha = {alpha}");
    ensure!(beta.as_rational() == Some(Rational::new(big(15), big(4))), "beta = {beta}");
    ensure!(cs.beta_cs == Rational::new(big(15), big(4)), "beta_cs = {}", cs.beta_cs);
    Ok("alpha=0, beta=15/4=beta_cs".into())
}

fn ac10_exactnum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut decided = 0;
    for i in 0..10_000 {
        let bits = rng.gen_range(1..=512);
        let n = BigInt::from(random_bits(&mut rng, bits));
        let (s, exact) = isqrt(&n).unwrap();
        ensure!(s.magnitude() == &newton_isqrt(n.magnitude()), "isqrt({n})");
        ensure!(exact == (&s * &s == n), "isqrt exactness at {n}");

        let e = random_surd(&mut rng);
        let x = if i % 2 == 0 {
            random_rational(&mut rng)
        } else {
            Rational::from_integer(surd_floor(&e)) + Rational::new(big(1), big(7))
        };
        if let Some(want) = fixed_point_cmp(&e, &x) {
            ensure!(surd_cmp(&e, &x) == want, "surd_cmp({e}, {x})");
            decided += 1;
        }
        let m = surd_floor(&e);
        ensure!(e.cmp_integer(&m) != Ordering::Less, "floor({e}) too big");
        ensure!(e.cmp_integer(&(&m + 1)) == Ordering::Less, "floor({e}) too small");
    }
    ensure!(decided > 9_000, "only {decided} comparisons separated");

    for _ in 0..1_000 {
        let n = rng.gen_range(1..=6);
        let m = common::random_symmetric(&mut rng, n, 3);
        let rows: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| big(x)).collect()).collect();
        let s = signature(&rows).unwrap();
        ensure!((s.positive, s.negative, s.zero) == minor_signature(&m), "signature of {m:?}");
    }
    Ok(format!("10^4 isqrt/floor, {decided} separated surd comparisons, 10^3 signatures"))
}

fn severi(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_severi")).args(args).output().unwrap()
}

fn ac11_cli() -> Outcome {
    let out = severi(&["examples", "--format", "structured"]);
    ensure!(out.status.code() == Some(0), "examples exit {:?}", out.status.code());
    let parsed = parse_structured_outcomes(&out.stdout).map_err(|e| e.to_string())?;
    ensure!(parsed == builtin::outcomes(), "structured payloads differ after parsing");
    let again = render_outcomes(&parsed, Format::Structured).unwrap();
    ensure!(again.payload == out.stdout, "re-rendered payload differs");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"name":"bad","basis":["A","B"],"gram":[[1,0],[0]],"canonical":[0,0],"class":[1,0]}"#,
    )
    .unwrap();
    let bad = severi(&["check", "--input", path.to_str().unwrap()]);
    ensure!(bad.status.code() == Some(2), "malformed gram exit {:?}", bad.status.code());

    let fam = severi(&["family", "--d", "5", "--a", "3"]);
    ensure!(fam.status.code() == Some(1), "family d=5 a=3 exit {:?}", fam.status.code());
    Ok("examples 0 with round trip, malformed gram 2, family d=5 a=3 1".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("AC-01 example 1 (blown-up quartic)", ac01_quartic),
        ("AC-02 example 2 (quintic with a line)", ac02_quintic),
        ("AC-03 family minimal a", ac03_minimal_a),
        ("AC-04 d=8 thresholds and b=9 inequalities", ac04_thresholds),
        ("AC-05 hodge closed form", ac05_hodge_closed_form),
        ("AC-06 F(delta) interval property", ac06_interval),
        ("AC-07 case I conservativeness", ac07_case_one),
        ("AC-08 genus bound consistency", ac08_genus_bound),
        ("AC-09 rank-one canonical lattice", ac09_rank_one),
        ("AC-10 exact arithmetic oracles", ac10_exactnum),
        ("AC-11 CLI contract", ac11_cli),
    ];
    let mut failures = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match result {
            Ok(detail) => println!("[PASS] {name}: {detail} ({ms:.1} ms)"),
            Err(why) => {
                println!("[FAIL] {name}: {why} ({ms:.1} ms)");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed: {failures:?}");
}
