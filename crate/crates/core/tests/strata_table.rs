use kirwan_core::grouprep::GroupCatalog;
use kirwan_core::hkkn::{Engine, StratificationProblem};
use kirwan_core::qseries::{QPolynomial, QRationalFunction};
use kirwan_core::rational::q_frac;
use kirwan_core::weightlat::{ChamberDesc, HullPairs, Weight, WeightSystem};

fn bicubic_problem(cat: &GroupCatalog) -> StratificationProblem {
    StratificationProblem::new(
        WeightSystem::bidegree(3),
        cat.get("G").unwrap().clone(),
        ChamberDesc::new(vec![Weight::int(1, 1), Weight::int(0, -1)]),
    )
}

fn frac(a: i64, b: i64, c: i64, d: i64) -> Weight {
    Weight::new(q_frac(a, b), q_frac(c, d))
}

fn inv(f: &[(u32, u32)]) -> QRationalFunction {
    QRationalFunction::inverse_factors(f.iter().copied())
}

#[test]
fn every_row_of_the_unstable_strata_table() {
    let cat = GroupCatalog::builtin();
    let engine = Engine::new(&cat, &HullPairs, 19);
    let strata = engine.strata_table(&bicubic_problem(&cat)).unwrap();
    assert_eq!(strata.len(), 11);

    let row3 = QRationalFunction::new(QPolynomial::from_terms([(0, 1), (2, 1), (6, -1)]), [(2, 1), (4, 1)]);
    type Row = (Weight, Vec<(i64, i64)>, u32, u32, &'static str, QRationalFunction);
    let expected: Vec<Row> = vec![
        (Weight::int(3, -3), vec![(3, -3)], 15, 26, "<T,iota>", inv(&[(2, 1), (4, 1)])),
        (Weight::int(2, -2), vec![(3, -1), (1, -3)], 13, 22, "<T,iota>", inv(&[(2, 1)])),
        (Weight::int(1, -1), vec![(3, 1), (1, -1), (-1, -3)], 10, 16, "<T,iota>", row3),
        (Weight::int(2, -1), vec![(1, -3), (3, 1)], 12, 20, "T", inv(&[(2, 1)])),
        (frac(6, 5, -3, 5), vec![(3, 3), (1, -1)], 10, 16, "T", inv(&[(2, 1)])),
        (frac(2, 5, -1, 5), vec![(1, 1), (-1, -3)], 8, 12, "T", inv(&[(2, 1)])),
        (Weight::int(3, -1), vec![(3, -1)], 14, 24, "T", inv(&[(2, 2)])),
        (frac(9, 5, -3, 5), vec![(1, -3), (3, 3)], 11, 18, "T", inv(&[(2, 1)])),
        (frac(9, 13, -6, 13), vec![(-1, -3), (3, 3)], 9, 14, "T", inv(&[(2, 1)])),
        (Weight::int(3, 0), vec![(3, -3), (3, -1), (3, 1), (3, 3)], 12, 22, "C*xSL2", inv(&[(2, 1)])),
        (Weight::int(1, 0), vec![(1, -3), (1, -1), (1, 1), (1, 3)], 8, 14, "C*xSL2", inv(&[(2, 1)])),
    ];
    for (beta, support, n, two_d, stab, series) in expected {
        let r = strata
            .iter()
            .find(|r| r.beta == beta)
            .unwrap_or_else(|| panic!("no stratum at {beta}"));
        let mut got: Vec<Weight> = r.support.iter().map(|e| e.weight.clone()).collect();
        got.sort();
        let mut want: Vec<Weight> = support.iter().map(|&(x, y)| Weight::int(x, y)).collect();
        want.sort();
        assert_eq!(got, want, "support at {beta}");
        assert_eq!(r.n, n, "n at {beta}");
        assert_eq!(2 * r.d, two_d, "2d at {beta}");
        assert_eq!(r.stab, stab, "stabilizer at {beta}");
        assert_eq!(r.series, series, "series at {beta}");
    }
}

#[test]
fn total_and_semistable_series() {
    let cat = GroupCatalog::builtin();
    let engine = Engine::new(&cat, &HullPairs, 19);
    let s = engine.stratify(&bicubic_problem(&cat)).unwrap();
    let total = QRationalFunction::new(QPolynomial::t_range(0, 30, 2), [(4, 1), (8, 1)]);
    assert_eq!(s.total, total);
    let ss = QRationalFunction::new(
        QPolynomial::from_terms([
            (0, 1),
            (2, 1),
            (4, 1),
            (6, 1),
            (8, 2),
            (10, 2),
            (12, 1),
            (14, -1),
            (16, -1),
            (18, -1),
            (20, -1),
            (22, -1),
        ]),
        [(4, 1)],
    );
    assert_eq!(s.semistable, ss);
}
