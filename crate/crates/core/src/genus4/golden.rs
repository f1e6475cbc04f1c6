//! Known values for the bicubic problem, compared against a pipeline report.

use std::fmt::Display;

use serde::Serialize;

use super::PipelineReport;
use crate::hkkn::StratumRecord;
use crate::qseries::{QPolynomial, QRationalFunction};
use crate::rational::q_frac;
use crate::slicerep::Multiset;
use crate::weightlat::Weight;

#[derive(Clone, Debug, Serialize)]
pub struct GoldenCheck {
    pub name: String,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
}

#[derive(Default)]
struct Sheet(Vec<GoldenCheck>);

impl Sheet {
    fn eq<T: PartialEq + Display>(&mut self, name: impl Into<String>, expected: T, actual: Option<T>) {
        let pass = actual.as_ref() == Some(&expected);
        self.0.push(GoldenCheck {
            name: name.into(),
            pass,
            expected: expected.to_string(),
            actual: actual.map(|a| a.to_string()).unwrap_or_else(|| "missing".into()),
        });
    }
}

/// Coefficients of `t^0, t^2, t^4, ...`.
pub fn even_poly(coeffs: &[i64]) -> QPolynomial {
    QPolynomial::from_terms(coeffs.iter().enumerate().map(|(k, &c)| (2 * k as u32, c)))
}

fn over(num: QPolynomial, factors: &[(u32, u32)]) -> QRationalFunction {
    QRationalFunction::new(num, factors.iter().copied())
}

fn multiset(pairs: &[(i64, u32)]) -> Multiset {
    let mut m = Multiset::new();
    for &(w, c) in pairs {
        m.insert(w, c);
    }
    m
}

pub struct StratumRow {
    pub beta: Weight,
    pub n: u32,
    pub two_d: u32,
    pub stab: &'static str,
    pub series: QRationalFunction,
}

/// The unstable strata of bicubic forms, largest `|β|` first.
pub fn strata_rows() -> Vec<StratumRow> {
    let frac = |a, b, c, d| Weight::new(q_frac(a, b), q_frac(c, d));
    let inv = |f: &[(u32, u32)]| over(QPolynomial::one(), f);
    let row3 = over(QPolynomial::from_terms([(0, 1), (2, 1), (6, -1)]), &[(2, 1), (4, 1)]);
    let row = |beta, n, two_d, stab, series| StratumRow {
        beta,
        n,
        two_d,
        stab,
        series,
    };
    vec![
        row(Weight::int(3, -3), 15, 26, "<T,iota>", inv(&[(2, 1), (4, 1)])),
        row(Weight::int(3, -1), 14, 24, "T", inv(&[(2, 2)])),
        row(Weight::int(2, -2), 13, 22, "<T,iota>", inv(&[(2, 1)])),
        row(Weight::int(3, 0), 12, 22, "C*xSL2", inv(&[(2, 1)])),
        row(Weight::int(2, -1), 12, 20, "T", inv(&[(2, 1)])),
        row(frac(9, 5, -3, 5), 11, 18, "T", inv(&[(2, 1)])),
        row(Weight::int(1, -1), 10, 16, "<T,iota>", row3),
        row(frac(6, 5, -3, 5), 10, 16, "T", inv(&[(2, 1)])),
        row(Weight::int(1, 0), 8, 14, "C*xSL2", inv(&[(2, 1)])),
        row(frac(9, 13, -6, 13), 9, 14, "T", inv(&[(2, 1)])),
        row(frac(2, 5, -1, 5), 8, 12, "T", inv(&[(2, 1)])),
    ]
}

pub fn total_series() -> QRationalFunction {
    over(QPolynomial::t_range(0, 30, 2), &[(4, 1), (8, 1)])
}

pub fn semistable_series() -> QRationalFunction {
    over(
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
        &[(4, 1)],
    )
}

pub fn blowup_polynomial() -> QPolynomial {
    even_poly(&[1, 4, 7, 11, 14, 14, 11, 7, 4, 1])
}

pub fn intersection_polynomial() -> QPolynomial {
    even_poly(&[1, 1, 2, 2, 3, 3, 2, 2, 1, 1])
}

pub fn nested_fiber_ip() -> QPolynomial {
    even_poly(&[1, 1, 2, 2, 2, 2, 2, 1, 1])
}

struct CenterGolden {
    name: &'static str,
    slice: Multiset,
    normal_rank: u32,
    z_series: QRationalFunction,
    main: QRationalFunction,
    extra: QRationalFunction,
    fiber_ip: QPolynomial,
    b: QPolynomial,
    /// `A_R - B_R` through `t^8`.
    a_minus_b_low: QPolynomial,
}

fn centers() -> Vec<CenterGolden> {
    let d_base = over(even_poly(&[1, 2, 1]), &[(2, 1)]);
    vec![
        CenterGolden {
            name: "R_C",
            slice: multiset(&[(6, 1), (4, 2), (2, 2), (0, 2), (-2, 2), (-4, 2), (-6, 1)]),
            normal_rank: 12,
            z_series: over(QPolynomial::one(), &[(4, 1)]),
            main: over(QPolynomial::t_range(2, 22, 2), &[(4, 1)]),
            extra: over(QPolynomial::t_range(12, 20, 2), &[(2, 1)]),
            fiber_ip: nested_fiber_ip(),
            b: even_poly(&[0, 1, 1, 2, 2, 2, 2, 1, 1]),
            a_minus_b_low: QPolynomial::zero(),
        },
        CenterGolden {
            name: "R_D",
            slice: multiset(&[(6, 1), (4, 2), (2, 1), (-2, 1), (-4, 2), (-6, 1)]),
            normal_rank: 8,
            z_series: over(even_poly(&[1, 1]), &[(2, 1)]),
            main: over(even_poly(&[1, 1]), &[(2, 1)]).mul_poly(&QPolynomial::t_range(2, 14, 2)),
            extra: d_base.mul_poly(&QPolynomial::t_range(8, 14, 2)),
            fiber_ip: even_poly(&[1, 1, 2, 2, 2, 1, 1]),
            b: even_poly(&[0, 1, 3, 5, 7, 7, 5, 3, 1]),
            a_minus_b_low: QPolynomial::from_terms([(8, -1)]),
        },
        CenterGolden {
            name: "R_A",
            slice: multiset(&[(12, 1), (10, 1), (8, 1), (6, 1), (4, 1), (-4, 1), (-6, 1), (-8, 1), (-10, 1), (-12, 1)]),
            normal_rank: 10,
            z_series: over(QPolynomial::one(), &[(4, 1)]),
            main: over(QPolynomial::t_range(2, 18, 2), &[(4, 1)]),
            extra: over(QPolynomial::t_range(10, 18, 2), &[(2, 1)]),
            fiber_ip: even_poly(&[1, 1, 2, 2, 3, 2, 2, 1, 1]),
            b: even_poly(&[0, 1, 1, 2, 2, 2, 2, 1, 1]),
            a_minus_b_low: QPolynomial::zero(),
        },
    ]
}

/// Total series, strata table and semistable series.
pub fn strata_checks(total: &QRationalFunction, strata: &[StratumRecord], semistable: &QRationalFunction) -> Vec<GoldenCheck> {
    let mut s = Sheet::default();
    s.strata(total, strata, semistable);
    s.0
}

impl Sheet {
    fn strata(&mut self, total: &QRationalFunction, strata: &[StratumRecord], semistable: &QRationalFunction) {
        self.eq("total equivariant series", total_series(), Some(total.clone()));
        self.eq("total equivariant series mod t^10", even_poly(&[1, 1, 2, 2, 4]), Some(total.expand(10).to_poly()));
        let rows = strata_rows();
        self.eq("number of unstable strata", rows.len(), Some(strata.len()));
        for want in &rows {
            let got = strata.iter().find(|x| x.beta == want.beta);
            let b = &want.beta;
            self.eq(format!("stratum {b}: n"), want.n, got.map(|x| x.n));
            self.eq(format!("stratum {b}: 2d"), want.two_d, got.map(|x| 2 * x.d));
            self.eq(format!("stratum {b}: stabilizer"), want.stab.to_string(), got.map(|x| x.stab.clone()));
            self.eq(format!("stratum {b}: series"), want.series.clone(), got.map(|x| x.series.clone()));
        }
        self.eq("semistable series", semistable_series(), Some(semistable.clone()));
        self.eq("semistable series mod t^10", even_poly(&[1, 1, 2, 2, 4]), Some(semistable.expand(10).to_poly()));
    }
}

/// Every known value of the bicubic problem, checked against `r`.
pub fn flagship_checks(r: &PipelineReport) -> Vec<GoldenCheck> {
    let mut s = Sheet::default();
    s.strata(&r.total.closed, &r.strata, &r.semistable.closed);

    for g in centers() {
        let c = r.center(g.name);
        let n = g.name;
        s.eq(format!("{n}: slice weights"), g.slice, c.map(|c| c.report.slice.slice_weights.clone()));
        s.eq(format!("{n}: normal rank"), g.normal_rank, c.map(|c| c.report.blowup.normal_rank));
        s.eq(format!("{n}: fixed-locus series"), g.z_series, c.map(|c| c.report.blowup.z_series.clone()));
        s.eq(format!("{n}: main term"), g.main, c.map(|c| c.report.blowup.main.clone()));
        s.eq(format!("{n}: extra term"), g.extra, c.map(|c| c.report.blowup.extra.clone()));
        s.eq(format!("{n}: fiber intersection series"), g.fiber_ip, c.map(|c| c.report.blowdown.fiber_ip.clone()));
        s.eq(format!("{n}: blow-down term"), g.b, c.map(|c| c.report.blowdown.b.clone()));
        s.eq(
            format!("{n}: A - B mod t^10"),
            g.a_minus_b_low,
            c.map(|c| c.a_minus_b.closed.expand(10).to_poly()),
        );
    }
    let nested = r.center("R_C").and_then(|c| c.report.blowdown.nested.as_ref());
    s.eq(
        "R_C: nested blow-down term of the torus center",
        even_poly(&[0, 1, 2, 3, 4, 3, 2, 1]),
        nested.map(|n| n.blowdown.b.clone()),
    );

    s.eq("Kirwan blow-up polynomial", blowup_polynomial(), r.kirwan_blowup.closed.as_polynomial());
    s.eq(
        "Kirwan blow-up mod t^10",
        even_poly(&[1, 4, 7, 11, 14]),
        Some(r.kirwan_blowup.closed.expand(10).to_poly()),
    );
    s.eq("intersection polynomial", intersection_polynomial(), r.ip.clone());
    let range = |i: usize| {
        r.ordinary_ranges
            .get(i)
            .map(|d| d.betti.iter().map(|(k, b)| format!("b{k}={b}")).collect::<Vec<_>>().join(" "))
    };
    s.eq("ordinary Betti numbers of the quotient", "b12=2 b14=2 b16=1 b18=1".to_string(), range(0));
    s.eq("ordinary Betti numbers of the stable part", "b0=1 b2=1 b4=2 b6=2".to_string(), range(1));
    s.0
}
