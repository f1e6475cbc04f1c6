//! End-to-end pipeline: stratification, blow-ups, blow-downs and the
//! intersection Poincaré polynomial of the quotient.

pub mod golden;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::Config;
use crate::desing::{evaluate_center, CenterReport, FiberIhStrategy};
use crate::error::{Error, Result};
use crate::hkkn::{Engine, Stratification, StratumRecord};
use crate::qseries::{palindrome_check, QPolynomial, QRationalFunction, QSeries};
use crate::registry::Registry;
use crate::weightlat::IndexSetStrategy;

/// A closed form together with its expansion through the report order.
#[derive(Clone, Debug, Serialize)]
pub struct Series {
    pub closed: QRationalFunction,
    pub expansion: QSeries,
}

impl Series {
    fn new(closed: QRationalFunction, order: usize) -> Self {
        let expansion = closed.expand(order);
        Self { closed, expansion }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCenter {
    pub name: String,
    #[serde(flatten)]
    pub report: CenterReport,
    pub a_minus_b: Series,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeRange {
    pub label: String,
    pub space: String,
    /// `(degree, Betti number)` for every degree in the range.
    pub betti: Vec<(u32, i64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub name: String,
    pub truncate: usize,
    pub index_strategy: String,
    pub quotient_dim: i64,
    pub total: Series,
    pub strata: Vec<StratumRecord>,
    pub semistable: Series,
    pub centers: Vec<NamedCenter>,
    pub kirwan_blowup: Series,
    /// `P(M~) - sum B_R`.
    pub ip_via_blowup: Option<QPolynomial>,
    /// `P^G(X^ss) + sum (A_R - B_R)`, summed center by center.
    pub ip_via_sum: Option<QPolynomial>,
    pub ip: Option<QPolynomial>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ordinary_ranges: Vec<DegreeRange>,
    pub provenance: BTreeMap<String, &'static str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl PipelineReport {
    pub fn center(&self, name: &str) -> Option<&NamedCenter> {
        self.centers.iter().find(|c| c.name == name)
    }

    pub fn checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Stratification only, without the desingularization steps.
pub fn run_strata(config: &Config) -> Result<Stratification> {
    config.validate()?;
    let catalog = config.catalog()?;
    let index_reg = Registry::<dyn IndexSetStrategy>::index_strategies();
    let engine = Engine::new(&catalog, index_reg.get(&config.index_strategy)?, config.truncate);
    engine.stratify(&config.problem(&catalog)?)
}

pub fn run_pipeline(config: &Config) -> Result<PipelineReport> {
    config.validate()?;
    let catalog = config.catalog()?;
    let index_reg = Registry::<dyn IndexSetStrategy>::index_strategies();
    let fiber_reg = Registry::<dyn FiberIhStrategy>::fiber_strategies();
    let index = index_reg.get(&config.index_strategy)?;
    let order = config.truncate;
    let engine = Engine::new(&catalog, index, order);
    let problem = config.problem(&catalog)?;
    let strat = engine.stratify(&problem)?;

    let mut warnings = Vec::new();
    if strat.semistable.is_zero() {
        warnings.push("the semistable locus is empty; every later series is zero".to_string());
    }

    let mut centers = Vec::new();
    for spec in &config.centers {
        let strategy = fiber_reg.get(&spec.fiber.strategy)?;
        let report = evaluate_center(&engine, &problem.ws, &problem.group, spec, strategy)
            .map_err(|e| annotate(e, &spec.name))?;
        let b = QRationalFunction::from_poly(report.blowdown.b.clone());
        let a_minus_b = Series::new(&report.blowup.a - &b, order);
        centers.push(NamedCenter {
            name: spec.name.clone(),
            report,
            a_minus_b,
        });
    }

    let mut blowup = strat.semistable.clone();
    for c in &centers {
        blowup = &blowup + &c.report.blowup.a;
    }
    let mut via_blowup = blowup.clone();
    for c in &centers {
        via_blowup = &via_blowup - &QRationalFunction::from_poly(c.report.blowdown.b.clone());
    }
    let mut corrections = QRationalFunction::zero();
    for c in &centers {
        corrections = &corrections + &c.a_minus_b.closed;
    }
    let via_sum = &strat.semistable + &corrections;

    let ip_via_blowup = via_blowup.as_polynomial();
    let ip_via_sum = via_sum.as_polynomial();
    let quotient_dim = problem.ws.projective_dim() as i64 - problem.group.dim as i64;
    let top = 2 * quotient_dim.max(0) as u32;

    let mut checks = Vec::new();
    let blowup_poly = blowup.as_polynomial();
    checks.push(Check::new(
        "blow-up series is a polynomial",
        blowup_poly.is_some(),
        format!("{blowup}"),
    ));
    checks.push(Check::new(
        "both evaluation routes agree",
        ip_via_blowup.is_some() && ip_via_blowup == ip_via_sum && via_blowup == via_sum,
        format!("{via_blowup} vs {via_sum}"),
    ));
    for (label, p) in [("blow-up", &blowup_poly), ("intersection", &ip_via_blowup)] {
        let detail = p.as_ref().map(|p| p.to_string()).unwrap_or_else(|| "not a polynomial".into());
        let ok = p.as_ref().is_some_and(|p| p.is_even());
        checks.push(Check::new(&format!("{label} series has no odd terms"), ok, detail.clone()));
        let ok = p.as_ref().is_some_and(|p| palindrome_check(p, top));
        checks.push(Check::new(&format!("{label} series is palindromic of degree {top}"), ok, detail));
        let ok = p.as_ref().is_some_and(|p| p.has_nonnegative_coeffs() && p.integer_coeffs().is_some());
        checks.push(Check::new(&format!("{label} series has nonnegative integer coefficients"), ok, ""));
    }

    let ip = ip_via_blowup.clone().filter(|_| ip_via_blowup == ip_via_sum);
    let ordinary_ranges = match (&config.ordinary_ranges, &ip) {
        (Some(r), Some(ip)) => ordinary_ranges(ip, r.quotient, r.stable),
        _ => Vec::new(),
    };

    Ok(PipelineReport {
        name: config.name.clone(),
        truncate: order,
        index_strategy: config.index_strategy.clone(),
        quotient_dim,
        total: Series::new(strat.total, order),
        strata: strat.strata,
        semistable: Series::new(strat.semistable, order),
        centers,
        kirwan_blowup: Series::new(blowup, order),
        ip_via_blowup,
        ip_via_sum,
        ip,
        checks,
        ordinary_ranges,
        provenance: provenance(config),
        warnings,
    })
}

fn annotate(e: Error, center: &str) -> Error {
    match e {
        Error::Config(m) => Error::Config(format!("center {center}: {m}")),
        Error::Inconsistent(m) => Error::Inconsistent(format!("center {center}: {m}")),
        Error::Precondition(m) => Error::Precondition(format!("center {center}: {m}")),
        Error::Unsupported(m) => Error::Unsupported(format!("center {center}: {m}")),
        other => other,
    }
}

/// Betti numbers read off the intersection polynomial on the two ranges
/// where they coincide with ordinary cohomology.
pub fn ordinary_ranges(ip: &QPolynomial, quotient: [u32; 2], stable: [u32; 2]) -> Vec<DegreeRange> {
    let read = |[lo, hi]: [u32; 2]| {
        (lo..=hi)
            .filter(|i| i % 2 == 0)
            .map(|i| (i, crate::rational::to_i64(&ip.coeff(i)).unwrap_or(i64::MIN)))
            .collect()
    };
    vec![
        DegreeRange {
            label: format!("{}..{}", quotient[0], quotient[1]),
            space: "H^i(X//G)".into(),
            betti: read(quotient),
        },
        DegreeRange {
            label: format!("{}..{}", stable[0], stable[1]),
            space: "H^i(X^s/G)".into(),
            betti: read(stable),
        },
    ]
}

/// Which quantities rest on configured data and which are computed.
fn provenance(config: &Config) -> BTreeMap<String, &'static str> {
    const CONFIGURED: &str = "configured";
    const COMPUTED: &str = "computed";
    let mut m = BTreeMap::new();
    m.insert("group catalog".to_string(), CONFIGURED);
    m.insert("total series".to_string(), COMPUTED);
    m.insert("strata".to_string(), COMPUTED);
    m.insert("semistable series".to_string(), COMPUTED);
    for c in &config.centers {
        let n = &c.name;
        m.insert(format!("{n}: w count"), CONFIGURED);
        m.insert(format!("{n}: fixed loci and their groups"), CONFIGURED);
        m.insert(format!("{n}: slice weights"), COMPUTED);
        m.insert(format!("{n}: normal rank"), COMPUTED);
        m.insert(format!("{n}: main term"), COMPUTED);
        m.insert(format!("{n}: extra term"), COMPUTED);
        m.insert(format!("{n}: fiber intersection series"), COMPUTED);
        m.insert(format!("{n}: blow-down term"), COMPUTED);
        if let Some(nested) = &c.fiber.nested {
            m.insert(format!("{n}: nested center {} and its w count", nested.subgroup), CONFIGURED);
            m.insert(format!("{n}: nested blow-down term"), COMPUTED);
        }
    }
    if config.ordinary_ranges.is_some() {
        m.insert("ordinary degree ranges".to_string(), CONFIGURED);
    }
    m.insert("intersection polynomial".to_string(), COMPUTED);
    m
}
