use kirwan_core::desing::{
    evaluate_center, invariant_ip_series, Direct, CenterReport, CenterSpec, FiberIhStrategy, FiberSpec, LocusBlowup, LocusSpec, NestedSpec, SliceSpec,
};
use kirwan_core::grouprep::GroupCatalog;
use kirwan_core::hkkn::Engine;
use kirwan_core::qseries::{QPolynomial, QRationalFunction};
use kirwan_core::registry::Registry;
use kirwan_core::slicerep::BiForm;
use kirwan_core::weightlat::{HullPairs, WeightSystem};
use kirwan_core::Error;

fn form(terms: &[((u32, u32), i64)]) -> BiForm {
    BiForm::from_int_terms(3, terms).unwrap()
}

fn torus_fixed(group: &str, psg: [i64; 2], blowup: Option<(&str, u32)>) -> LocusSpec {
    LocusSpec::TorusFixed {
        group: group.into(),
        psg,
        blowup: blowup.map(|(g, rank)| LocusBlowup {
            center_group: g.into(),
            rank,
        }),
    }
}

fn r_c() -> CenterSpec {
    CenterSpec {
        name: "R_C".into(),
        group: "SL2".into(),
        normaliser: "N(R_C)".into(),
        z: LocusSpec::Point { group: "N(R_C)".into() },
        slice: SliceSpec {
            form: form(&[((3, 0), 1), ((2, 1), -3), ((1, 2), 3), ((0, 3), -1)]),
            psg: [1, 1],
            extras: vec![],
        },
        w: 1,
        stab_base: LocusSpec::Point { group: "T1hat:Z2".into() },
        fiber: FiberSpec {
            strategy: "nested".into(),
            group: "SL2".into(),
            nested: Some(NestedSpec {
                subgroup: "T1".into(),
                normaliser: "C*:Z2".into(),
                psg: [1, 0],
                w: 2,
                fiber_group: "C*:Z2".into(),
            }),
        },
    }
}

fn r_d() -> CenterSpec {
    CenterSpec {
        name: "R_D".into(),
        group: "R_D".into(),
        normaliser: "N(R_D)".into(),
        z: torus_fixed("N(R_D)", [1, 1], Some(("C*:Z2", 2))),
        slice: SliceSpec {
            form: form(&[((3, 0), 1), ((0, 3), 1)]),
            psg: [1, 1],
            extras: vec![form(&[((2, 1), 1)]), form(&[((1, 2), 1)])],
        },
        w: 2,
        stab_base: torus_fixed("T:Z2", [1, 1], Some(("T1hat:Z2", 2))),
        fiber: FiberSpec {
            strategy: "direct".into(),
            group: "C*:Z2".into(),
            nested: None,
        },
    }
}

fn r_a() -> CenterSpec {
    CenterSpec {
        name: "R_A".into(),
        group: "R_A".into(),
        normaliser: "N(R_A)".into(),
        z: torus_fixed("N(R_A)", [1, 3], None),
        slice: SliceSpec {
            form: form(&[((3, 1), 1), ((0, 2), 1)]),
            psg: [1, 3],
            extras: vec![],
        },
        w: 2,
        stab_base: torus_fixed("T", [1, 3], None),
        fiber: FiberSpec {
            strategy: "direct".into(),
            group: "C*:Z2".into(),
            nested: None,
        },
    }
}

fn run(spec: &CenterSpec) -> CenterReport {
    let cat = GroupCatalog::builtin();
    let engine = Engine::new(&cat, &HullPairs, 19);
    let reg = Registry::<dyn FiberIhStrategy>::fiber_strategies();
    let strategy = reg.get(&spec.fiber.strategy).unwrap();
    evaluate_center(&engine, &WeightSystem::bidegree(3), cat.get("G").unwrap(), spec, strategy).unwrap()
}

fn even(coeffs: &[i64]) -> QPolynomial {
    QPolynomial::from_terms(coeffs.iter().enumerate().map(|(k, &c)| (2 * k as u32, c)))
}

fn over(num: QPolynomial, factors: &[(u32, u32)]) -> QRationalFunction {
    QRationalFunction::new(num, factors.iter().copied())
}

#[test]
fn slice_quotient_without_the_component_group() {
    let cat = GroupCatalog::builtin();
    let engine = Engine::new(&cat, &HullPairs, 19);
    let slice = WeightSystem::on_line(&[12, 10, 8, 6, 4, -4, -6, -8, -10, -12]).unwrap();
    let ip = invariant_ip_series(&engine, &slice, cat.get("R_A").unwrap()).unwrap();
    assert_eq!(ip, even(&[1, 2, 3, 4, 5, 4, 3, 2, 1]));
}

#[test]
fn direct_fiber_refuses_zero_slice_weights() {
    let mut spec = r_c();
    spec.fiber.strategy = "direct".into();
    let cat = GroupCatalog::builtin();
    let engine = Engine::new(&cat, &HullPairs, 19);
    let err = evaluate_center(&engine, &WeightSystem::bidegree(3), cat.get("G").unwrap(), &spec, &Direct).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)), "{err}");
}

#[test]
fn center_of_the_triple_conic() {
    let r = run(&r_c());
    assert_eq!(r.blowup.normal_rank, 12);
    assert_eq!(r.blowup.z_series, over(QPolynomial::one(), &[(4, 1)]));
    assert_eq!(r.blowup.stab_base, over(QPolynomial::one(), &[(2, 1)]));
    assert_eq!(r.blowup.extra, over(QPolynomial::t_range(12, 20, 2), &[(2, 1)]));
    assert_eq!(r.blowdown.base, QPolynomial::one());
    assert_eq!(r.blowdown.fiber_dim, 8);
    let nested = r.blowdown.nested.as_ref().unwrap();
    let ss = &over(QPolynomial::t_range(0, 22, 2), &[(4, 1)])
        - &over(QPolynomial::from_terms([(12, 1), (14, 1), (16, 1), (18, 1), (20, 1)]), &[(2, 1)]);
    assert_eq!(nested.semistable, ss);
    let a_t1 = &over(even(&[1, 1]), &[(4, 1)]).mul_poly(&QPolynomial::t_range(2, 14, 2))
        - &over(even(&[1, 1]), &[(2, 1)]).mul_poly(&QPolynomial::from_terms([(8, 1), (10, 1), (12, 1), (14, 1)]));
    assert_eq!(nested.blowup.a, a_t1);
    assert_eq!(nested.blowup.normal_rank, 8);
    assert_eq!(nested.blowup.z_series, over(even(&[1, 1]), &[(4, 1)]));
    assert_eq!(nested.blowdown.base, even(&[1, 1]));
    assert_eq!(nested.blowdown.fiber_dim, 6);
    assert_eq!(nested.blowdown.b, even(&[0, 1, 2, 3, 4, 3, 2, 1]));
    assert_eq!(r.blowdown.fiber_ip, even(&[1, 1, 2, 2, 2, 2, 2, 1, 1]));
    assert_eq!(r.blowdown.b, even(&[0, 1, 1, 2, 2, 2, 2, 1, 1]));
}

#[test]
fn center_of_the_d_curve() {
    let r = run(&r_d());
    assert_eq!(r.blowup.normal_rank, 8);
    assert_eq!(r.blowup.z_series, over(even(&[1, 1]), &[(2, 1)]));
    let base = over(even(&[1, 2, 1]), &[(2, 1)]);
    assert_eq!(r.blowup.stab_base, base);
    assert_eq!(r.blowup.extra, base.mul_poly(&QPolynomial::t_range(8, 14, 2)));
    assert_eq!(r.blowdown.base, even(&[1, 2, 1]));
    assert_eq!(r.blowdown.fiber_dim, 6);
    assert_eq!(r.blowdown.fiber_ip, even(&[1, 1, 2, 2, 2, 1, 1]));
    assert_eq!(r.blowdown.b, even(&[0, 1, 3, 5, 7, 7, 5, 3, 1]));
}

#[test]
fn center_of_the_a_curve() {
    let r = run(&r_a());
    assert_eq!(r.blowup.normal_rank, 10);
    assert_eq!(r.blowup.z_series, over(QPolynomial::one(), &[(4, 1)]));
    assert_eq!(r.blowup.extra, over(QPolynomial::t_range(10, 18, 2), &[(2, 1)]));
    assert_eq!(r.blowdown.base, QPolynomial::one());
    assert_eq!(r.blowdown.fiber_dim, 8);
    assert_eq!(r.blowdown.fiber_ip, even(&[1, 1, 2, 2, 3, 2, 2, 1, 1]));
    assert_eq!(r.blowdown.b, even(&[0, 1, 1, 2, 2, 2, 2, 1, 1]));
}
