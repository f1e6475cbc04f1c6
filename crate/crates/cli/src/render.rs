use std::fmt::Write;

use kirwan_core::config::Config;
use kirwan_core::genus4::golden::GoldenCheck;
use kirwan_core::genus4::PipelineReport;
use kirwan_core::hkkn::{Stratification, StratumRecord};
use kirwan_core::qseries::{QRationalFunction, QSeries};
use serde_json::{json, Value};

pub fn series_json(f: &QRationalFunction, order: usize) -> Value {
    json!({ "closed": f, "expansion": f.expand(order) })
}

fn congruence(f: &QRationalFunction, order: usize) -> String {
    format!("{} (mod t^{order})", f.expand(order).to_poly())
}

fn strata_table(out: &mut String, strata: &[StratumRecord]) {
    out.push_str("| β | support | n(β) | Stab β | 2d(β) | series |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for r in strata {
        let support: Vec<String> = r.support.iter().map(|e| e.weight.to_string()).collect();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.beta,
            support.join(" "),
            r.n,
            r.stab,
            2 * r.d,
            r.series
        );
    }
}

fn golden_section(out: &mut String, golden: &[GoldenCheck]) {
    if golden.is_empty() {
        return;
    }
    let passed = golden.iter().filter(|g| g.pass).count();
    let _ = writeln!(out, "\n## Golden checks ({passed}/{} pass)\n", golden.len());
    for g in golden {
        let mark = if g.pass { "pass" } else { "FAIL" };
        let _ = writeln!(out, "- {mark}: {}", g.name);
        if !g.pass {
            let _ = writeln!(out, "  - expected `{}`\n  - actual `{}`", g.expected, g.actual);
        }
    }
}

pub fn strata_markdown(config: &Config, s: &Stratification, golden: &[GoldenCheck]) -> String {
    let n = config.truncate;
    let mut out = format!("# {}\n\n", config.name);
    let _ = writeln!(out, "Total series: `{}`\n\n`{}`\n", s.total, congruence(&s.total, n));
    strata_table(&mut out, &s.strata);
    let _ = writeln!(out, "\nSemistable series: `{}`\n\n`{}`", s.semistable, congruence(&s.semistable, n));
    if s.semistable.is_zero() {
        out.push_str("\nWarning: the semistable locus is empty.\n");
    }
    golden_section(&mut out, golden);
    out
}

pub fn pipeline_markdown(r: &PipelineReport, golden: &[GoldenCheck]) -> String {
    let n = r.truncate;
    let mut out = format!("# {}\n\n", r.name);
    let _ = writeln!(out, "Total series: `{}`\n\n`{}`\n", r.total.closed, congruence(&r.total.closed, n));
    strata_table(&mut out, &r.strata);
    let _ = writeln!(
        out,
        "\nSemistable series: `{}`\n\n`{}`\n",
        r.semistable.closed,
        congruence(&r.semistable.closed, n)
    );

    out.push_str("## Blow-up centers\n\n");
    out.push_str("| center | slice weights | rank | main | extra | A |\n|---|---|---|---|---|---|\n");
    for c in &r.centers {
        let b = &c.report.blowup;
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} `{}` | {} `{}` | `{}` |",
            c.name,
            b.slice_weights,
            b.normal_rank,
            b.main,
            congruence(&b.main, n),
            b.extra,
            congruence(&b.extra, n),
            congruence(&b.a, n)
        );
    }
    out.push_str("\n## Blow-down terms\n\n");
    out.push_str("| center | base | fiber IP | fiber dim | B | A - B |\n|---|---|---|---|---|---|\n");
    for c in &r.centers {
        let d = &c.report.blowdown;
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | `{}` |",
            c.name,
            d.base,
            d.fiber_ip,
            d.fiber_dim,
            d.b,
            congruence(&c.a_minus_b.closed, n)
        );
    }

    let _ = writeln!(
        out,
        "\n## Results\n\nKirwan blow-up: `{}`\n\n`{}`\n",
        r.kirwan_blowup.closed,
        congruence(&r.kirwan_blowup.closed, n)
    );
    match &r.ip {
        Some(ip) => {
            let trunc = QSeries::from_poly(ip, n).to_poly();
            let _ = writeln!(out, "Intersection polynomial: `{ip}`\n\n`{trunc} (mod t^{n})`\n");
        }
        None => out.push_str("Intersection polynomial: not determined\n\n"),
    }
    for d in &r.ordinary_ranges {
        let betti: Vec<String> = d.betti.iter().map(|(k, b)| format!("b{k} = {b}")).collect();
        let _ = writeln!(out, "- {} for i in {}: {}", d.space, d.label, betti.join(", "));
    }

    out.push_str("\n## Structural checks\n\n");
    for c in &r.checks {
        let _ = writeln!(out, "- {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name);
    }
    golden_section(&mut out, golden);

    out.push_str("\n## Provenance\n\n");
    for (k, v) in &r.provenance {
        let _ = writeln!(out, "- {k}: {v}");
    }
    for w in &r.warnings {
        let _ = writeln!(out, "\nWarning: {w}");
    }
    out
}
