//! The twelve acceptance criteria, each reported on one line. Expected values
//! are written out here rather than taken from the library's golden sheet.

use std::collections::BTreeSet;
use std::io::Write as _;
use std::process::Command;

use kirwan_core::config::Config;
use kirwan_core::desing::blowdown_term;
use kirwan_core::genus4::{run_pipeline, run_strata, PipelineReport};
use kirwan_core::grouprep::GroupCatalog;
use kirwan_core::qseries::{palindrome_check, QPolynomial, QRationalFunction};
use kirwan_core::rational::{format_q, q_frac};
use kirwan_core::weightlat::{index_set, ExhaustiveSubsets, Gram, HullPairs, Weight};
use num_rational::Ratio;
use proptest::prelude::*;
use proptest::test_runner::{Config as PtConfig, TestRunner};

type R = Ratio<i128>;
type Check = Result<(), String>;

fn kirwan(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kirwan")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn even(coeffs: &[i64]) -> QPolynomial {
    QPolynomial::from_terms(coeffs.iter().enumerate().map(|(k, &c)| (2 * k as u32, c)))
}

fn over(num: QPolynomial, factors: &[(u32, u32)]) -> QRationalFunction {
    QRationalFunction::new(num, factors.iter().copied())
}

fn same<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn flagship() -> PipelineReport {
    run_pipeline(&Config::builtin("genus4").unwrap()).unwrap()
}

/// Every closest point to the origin of the hull of a subset of `pts`,
/// found by walking all `2^n` subsets. The closest point of a planar hull is
/// the origin's projection onto the affine span of at most three of its
/// points, so each subset takes the nearest feasible such projection.
fn brute_force_closest_points(pts: &[(i128, i128)]) -> BTreeSet<(R, R)> {
    let n = pts.len();
    let p = |i: usize| (R::from(pts[i].0), R::from(pts[i].1));
    let zero = R::from(0);
    let one = R::from(1);
    let mut cands: Vec<(R, u32, (R, R))> = Vec::new();
    let norm = |v: &(R, R)| v.0 * v.0 + v.1 * v.1;
    for i in 0..n {
        let a = p(i);
        cands.push((norm(&a), 1 << i, a));
        for j in i + 1..n {
            let b = p(j);
            let d = (b.0 - a.0, b.1 - a.1);
            let dd = d.0 * d.0 + d.1 * d.1;
            if dd == zero {
                continue;
            }
            let t = -(a.0 * d.0 + a.1 * d.1) / dd;
            if t >= zero && t <= one {
                let c = (a.0 + t * d.0, a.1 + t * d.1);
                cands.push((norm(&c), 1 << i | 1 << j, c));
            }
            for k in j + 1..n {
                let c = p(k);
                let cross = |u: &(R, R), v: &(R, R), w: &(R, R)| (v.0 - u.0) * (w.1 - u.1) - (v.1 - u.1) * (w.0 - u.0);
                let o = (zero, zero);
                let area = cross(&a, &b, &c);
                if area == zero {
                    continue;
                }
                let s = [cross(&a, &b, &o), cross(&b, &c, &o), cross(&c, &a, &o)];
                if s.iter().all(|x| *x * area >= zero) {
                    cands.push((zero, 1 << i | 1 << j | 1 << k, o));
                }
            }
        }
    }
    cands.sort_by_key(|x| x.0);
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        let (_, _, c) = cands.iter().find(|(_, m, _)| m & !mask == 0).expect("singletons always fit");
        out.insert(*c);
    }
    out
}

fn criterion_1() -> Check {
    let s = run_strata(&Config::builtin("genus4").unwrap()).map_err(|e| e.to_string())?;
    same("closed form", s.total.clone(), over(QPolynomial::t_range(0, 30, 2), &[(4, 1), (8, 1)]))?;
    same("mod t^10", s.total.expand(10).to_poly(), even(&[1, 1, 2, 2, 4]))
}

fn criterion_2() -> Check {
    let config = Config::builtin("genus4").unwrap();
    let ws = &config.weight_system;
    let got = index_set(ws, &config.chamber, &HullPairs).map_err(|e| e.to_string())?;
    let nonzero: BTreeSet<Weight> = got.iter().filter(|b| !b.is_zero()).cloned().collect();
    let frac = |a, b, c, d| Weight::new(q_frac(a, b), q_frac(c, d));
    let want: BTreeSet<Weight> = [
        Weight::int(3, -3),
        Weight::int(3, -1),
        Weight::int(2, -2),
        Weight::int(3, 0),
        Weight::int(2, -1),
        frac(9, 5, -3, 5),
        Weight::int(1, -1),
        frac(6, 5, -3, 5),
        Weight::int(1, 0),
        frac(9, 13, -6, 13),
        frac(2, 5, -1, 5),
    ]
    .into_iter()
    .collect();
    same("nonzero index set", &nonzero, &want)?;

    let ints: Vec<(i128, i128)> = ws
        .distinct_weights()
        .iter()
        .map(|w| (format_q(&w.x).parse().unwrap(), format_q(&w.y).parse().unwrap()))
        .collect();
    let oracle: BTreeSet<(String, String)> = brute_force_closest_points(&ints)
        .into_iter()
        .filter(|(x, y)| *x + *y >= R::from(0) && *y <= R::from(0))
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
    let mine: BTreeSet<(String, String)> = got.iter().map(|w| (format_q(&w.x), format_q(&w.y))).collect();
    same("index set against the 2^16-subset oracle", &mine, &oracle)?;
    let exhaustive = index_set(ws, &config.chamber, &ExhaustiveSubsets).map_err(|e| e.to_string())?;
    same("exhaustive strategy", &exhaustive, &got)?;

    let (code, svg, _) = kirwan(&["diagram"]);
    same("diagram exit", code, 0)?;
    same("filled nodes", svg.matches(r#"class="weight""#).count(), 16)?;
    same("circled nodes", svg.matches(r#"class="index""#).count(), 12)?;
    if !svg.contains(r#"data-x="9/13" data-y="-6/13""#) {
        return Err("diagram lacks the node at (9/13, -6/13)".into());
    }
    Ok(())
}

fn criterion_3() -> Check {
    let s = run_strata(&Config::builtin("genus4").unwrap()).map_err(|e| e.to_string())?;
    let frac = |a, b, c, d| Weight::new(q_frac(a, b), q_frac(c, d));
    let inv = |f: &[(u32, u32)]| over(QPolynomial::one(), f);
    let rows = [
        (Weight::int(3, -3), 15, 26, "<T,iota>", inv(&[(2, 1), (4, 1)])),
        (Weight::int(3, -1), 14, 24, "T", inv(&[(2, 2)])),
        (Weight::int(2, -2), 13, 22, "<T,iota>", inv(&[(2, 1)])),
        (Weight::int(3, 0), 12, 22, "C*xSL2", inv(&[(2, 1)])),
        (Weight::int(2, -1), 12, 20, "T", inv(&[(2, 1)])),
        (frac(9, 5, -3, 5), 11, 18, "T", inv(&[(2, 1)])),
        (
            Weight::int(1, -1),
            10,
            16,
            "<T,iota>",
            over(QPolynomial::from_terms([(0, 1), (2, 1), (6, -1)]), &[(2, 1), (4, 1)]),
        ),
        (frac(6, 5, -3, 5), 10, 16, "T", inv(&[(2, 1)])),
        (Weight::int(1, 0), 8, 14, "C*xSL2", inv(&[(2, 1)])),
        (frac(9, 13, -6, 13), 9, 14, "T", inv(&[(2, 1)])),
        (frac(2, 5, -1, 5), 8, 12, "T", inv(&[(2, 1)])),
    ];
    same("row count", s.strata.len(), rows.len())?;
    for (beta, n, two_d, stab, series) in rows {
        let r = s.strata.iter().find(|r| r.beta == beta).ok_or(format!("no row at {beta}"))?;
        same(&format!("n at {beta}"), r.n, n)?;
        same(&format!("2d at {beta}"), 2 * r.d, two_d)?;
        same(&format!("stabilizer at {beta}"), r.stab.as_str(), stab)?;
        same(&format!("series at {beta}"), &r.series, &series)?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    let s = run_strata(&Config::builtin("genus4").unwrap()).map_err(|e| e.to_string())?;
    let num = QPolynomial::from_terms(
        [1, 1, 1, 1, 2, 2, 1, -1, -1, -1, -1, -1]
            .iter()
            .enumerate()
            .map(|(k, &c)| (2 * k as u32, c)),
    );
    same("semistable series", s.semistable, over(num, &[(4, 1)]))
}

fn criterion_5(r: &PipelineReport) -> Check {
    let want: [(&str, Vec<i64>, u32); 3] = [
        ("R_C", vec![6, 4, 4, 2, 2, 0, 0, -2, -2, -4, -4, -6], 12),
        ("R_D", vec![6, 4, 4, 2, -2, -4, -4, -6], 8),
        ("R_A", vec![12, 10, 8, 6, 4, -4, -6, -8, -10, -12], 10),
    ];
    for (name, weights, rank) in want {
        let c = r.center(name).ok_or(format!("no center {name}"))?;
        same(&format!("{name} slice"), c.report.slice.slice_weights.to_vec(), weights)?;
        same(&format!("{name} rank"), c.report.blowup.normal_rank, rank)?;
    }
    Ok(())
}

fn criterion_6(r: &PipelineReport) -> Check {
    let c = |n: &str| r.center(n).unwrap();
    same("R_C main", c("R_C").report.blowup.main.clone(), over(QPolynomial::t_range(2, 22, 2), &[(4, 1)]))?;
    let d_locus = over(even(&[1, 1]), &[(2, 1)]);
    same(
        "R_D main",
        c("R_D").report.blowup.main.clone(),
        d_locus.mul_poly(&QPolynomial::t_range(2, 14, 2)),
    )?;
    same("R_A main", c("R_A").report.blowup.main.clone(), over(QPolynomial::t_range(2, 18, 2), &[(4, 1)]))?;
    // the blown-up D locus, computed and in the expanded closed form
    same("blown-up D locus", c("R_D").report.blowup.z_series.clone(), d_locus.clone())?;
    let long = &(&over(even(&[1, 1, 1, 1]), &[(4, 2)]) - &over(even(&[0, 0, 1, 1]), &[(2, 1), (4, 1)]))
        + &over(even(&[0, 1]), &[(4, 1)]);
    same("expanded identity", long, d_locus)
}

fn criterion_7(r: &PipelineReport) -> Check {
    let c = |n: &str| r.center(n).unwrap();
    same("R_C extra", c("R_C").report.blowup.extra.clone(), over(QPolynomial::t_range(12, 20, 2), &[(2, 1)]))?;
    same(
        "R_D extra",
        c("R_D").report.blowup.extra.clone(),
        over(even(&[1, 2, 1]), &[(2, 1)]).mul_poly(&QPolynomial::t_range(8, 14, 2)),
    )?;
    same("R_A extra", c("R_A").report.blowup.extra.clone(), over(QPolynomial::t_range(10, 18, 2), &[(2, 1)]))
}

fn criterion_8(r: &PipelineReport) -> Check {
    let p = r.kirwan_blowup.closed.as_polynomial().ok_or("blow-up series is not a polynomial")?;
    same("coefficients", p.clone(), even(&[1, 4, 7, 11, 14, 14, 11, 7, 4, 1]))?;
    same("palindromic", palindrome_check(&p, 18), true)?;
    same("odd terms vanish", p.is_even(), true)
}

fn criterion_9(r: &PipelineReport) -> Check {
    let c = r.center("R_C").unwrap();
    same("nested fiber series", c.report.blowdown.fiber_ip.clone(), even(&[1, 1, 2, 2, 2, 2, 2, 1, 1]))?;
    let nested = c.report.blowdown.nested.as_ref().ok_or("R_C did not use the nested strategy")?;
    same("inner blow-down term", nested.blowdown.b.clone(), even(&[0, 1, 2, 3, 4, 3, 2, 1]))
}

/// Hand convolution with the shifted fiber index, on plain integer arrays
/// indexed by degree.
fn hand_convolution(base: &[i64], fiber: &[i64], fiber_dim: usize) -> Vec<i64> {
    let mut out = vec![0; base.len() + fiber.len() + 2];
    for (p, b) in base.iter().enumerate() {
        for qd in 0..fiber.len() + 2 {
            let hat = if qd <= fiber_dim { qd.checked_sub(2) } else { Some(qd) };
            if let Some(f) = hat.and_then(|h| fiber.get(h)) {
                out[p + qd] += b * f;
            }
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn dense(p: &QPolynomial) -> Vec<i64> {
    p.integer_coeffs().expect("integer coefficients")
}

fn criterion_10(r: &PipelineReport) -> Check {
    let c = |n: &str| r.center(n).unwrap();
    let ra = even(&[0, 1, 1, 2, 2, 2, 2, 1, 1]);
    same("B for R_A", c("R_A").report.blowdown.b.clone(), ra.clone())?;
    same("B for R_C", c("R_C").report.blowdown.b.clone(), ra)?;
    let rd = even(&[0, 1, 3, 5, 7, 7, 5, 3, 1]);
    same("B for R_D", c("R_D").report.blowdown.b.clone(), rd.clone())?;
    let base = [1, 0, 2, 0, 1];
    let fiber = [1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 1, 0, 1];
    let hand = hand_convolution(&base, &fiber, 6);
    same("hand convolution for R_D", hand.clone(), dense(&rd))?;
    let lib = blowdown_term(&QPolynomial::from_coeffs(&base), &QPolynomial::from_coeffs(&fiber), 6);
    same("library convolution for R_D", dense(&lib), hand)
}

fn criterion_11(r: &PipelineReport) -> Check {
    same("via blow-up", r.ip_via_blowup.clone(), Some(even(&[1, 1, 2, 2, 3, 3, 2, 2, 1, 1])))?;
    same("routes agree", r.ip_via_sum.clone(), r.ip_via_blowup.clone())?;
    let ranges: Vec<Vec<(u32, i64)>> = r.ordinary_ranges.iter().map(|d| d.betti.clone()).collect();
    same(
        "ordinary ranges",
        ranges,
        vec![vec![(12, 2), (14, 2), (16, 1), (18, 1)], vec![(0, 1), (2, 1), (4, 2), (6, 2)]],
    )?;
    let ip = r.ip.clone().unwrap();
    same("odd Betti numbers", (0..19).filter(|i| i % 2 == 1).all(|i| ip.coeff(i) == q_frac(0, 1)), true)
}

fn criterion_12() -> Check {
    let mut runner = TestRunner::new(PtConfig {
        cases: 64,
        ..PtConfig::default()
    });
    let poly = || prop::collection::vec((0u32..8, -3i64..4), 0..4).prop_map(QPolynomial::from_terms);
    let ratfunc = move || (poly(), prop::collection::vec((1u32..5, 1u32..3), 0..3)).prop_map(|(p, f)| over(p, &f));
    runner
        .run(&(ratfunc(), ratfunc()), |(f, g)| {
            prop_assert_eq!((&f * &g).expand(20), &f.expand(20) * &g.expand(20));
            prop_assert_eq!((&f + &g).expand(20), &f.expand(20) + &g.expand(20));
            Ok(())
        })
        .map_err(|e| format!("homomorphism: {e}"))?;

    for g in GroupCatalog::builtin().entries() {
        let s = g.classifying_series().map_err(|e| e.to_string())?.expand(24);
        same(&format!("Molien series of {} is nonnegative", g.name), s.has_nonnegative_coeffs(), true)?;
    }

    let config = Config::builtin("genus4").unwrap();
    let base = index_set(&config.weight_system, &config.chamber, &HullPairs).map_err(|e| e.to_string())?;
    for (a, b) in [(3, 7), (5, 1), (1, 12)] {
        let ws = config.weight_system.with_gram(Gram::identity().scaled(&q_frac(a, b)).unwrap());
        let scaled = index_set(&ws, &config.chamber, &HullPairs).map_err(|e| e.to_string())?;
        same(&format!("index set under gram scaling {a}/{b}"), &scaled, &base)?;
    }

    let (code, out, _) = kirwan(&["strata", "--builtin", "binary_cubics"]);
    same("binary cubics exit", code, 0)?;
    let doc: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let numerator = &doc["semistable"]["closed"]["numerator"];
    same("binary cubics semistable numerator", numerator.to_string(), r#"{"0":"1"}"#.to_string())?;
    same("binary cubics semistable denominator", doc["semistable"]["closed"]["denominator"].to_string(), "[]".to_string())?;

    let (code, _, _) = kirwan(&["genus4"]);
    same("flagship exit", code, 0)?;
    let mut perturbed: serde_json::Value = serde_json::from_str(kirwan_core::config::GENUS4).unwrap();
    for e in perturbed["weight_system"]["weights"].as_array_mut().unwrap() {
        let w = &mut e["weight"];
        if w[0].as_i64().unwrap().abs() == 1 && w[1].as_i64().unwrap().abs() == 1 {
            *w = serde_json::json!([2 * w[0].as_i64().unwrap(), 2 * w[1].as_i64().unwrap()]);
        }
    }
    let path = std::env::temp_dir().join(format!("kirwan-perturbed-{}.json", std::process::id()));
    std::fs::write(&path, perturbed.to_string()).unwrap();
    let (code, _, err) = kirwan(&["genus4", "--config", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    same("perturbed weights exit", code, 1)?;
    if !err.contains("golden mismatch") {
        return Err(format!("perturbed run printed no diff: {err}"));
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let report = flagship();
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("total equivariant series", Box::new(criterion_1)),
        ("index set and brute-force oracle", Box::new(criterion_2)),
        ("unstable strata table", Box::new(criterion_3)),
        ("semistable series", Box::new(criterion_4)),
        ("slice weights and normal ranks", Box::new(|| criterion_5(&report))),
        ("main terms", Box::new(|| criterion_6(&report))),
        ("extra terms", Box::new(|| criterion_7(&report))),
        ("Kirwan blow-up", Box::new(|| criterion_8(&report))),
        ("nested slice quotient", Box::new(|| criterion_9(&report))),
        ("blow-down terms", Box::new(|| criterion_10(&report))),
        ("intersection Betti numbers", Box::new(|| criterion_11(&report))),
        ("property suites and exit codes", Box::new(criterion_12)),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout().lock();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        match check() {
            Ok(()) => {
                let _ = writeln!(stdout, "acceptance {n:>2} {name}: PASS");
            }
            Err(e) => {
                let _ = writeln!(stdout, "acceptance {n:>2} {name}: FAIL ({e})");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
