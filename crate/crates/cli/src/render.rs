use std::fmt::Write;

use bdspectra::battery::CriterionResult;
use bdspectra::bdcomplex::DegreeEntry;
use bdspectra::classify::{BgReport, ExtensionReport, Generators};
use bdspectra::rootdata::GroupSpec;

pub fn degrees(title: &str, entries: &[DegreeEntry]) -> String {
    let mut s = format!("{title}\n");
    for e in entries {
        let _ = writeln!(s, "  H{:<2} {}", e.degree, e.describe());
        if e.total.is_none() || e.pieces.len() > 1 {
            for p in e.pieces.iter().filter(|p| !p.value.is_zero()) {
                let _ = writeln!(
                    s,
                    "        {}: {}  [{}]",
                    p.name,
                    p.value,
                    p.provenance.join(", ")
                );
            }
        }
        if let Some(n) = &e.note {
            let _ = writeln!(s, "        note: {n}");
        }
    }
    s
}

pub fn bg(spec: &GroupSpec, r: &BgReport) -> String {
    let mut s = degrees(
        &format!("H^n(B{spec}, {}) over {}", r.sheaf, r.model),
        &r.degrees,
    );
    let failed: Vec<_> = r.checks.iter().filter(|c| !c.pass).collect();
    if failed.is_empty() {
        let _ = writeln!(s, "  {} internal checks passed", r.checks.len());
    } else {
        for c in failed {
            let _ = writeln!(
                s,
                "  CHECK FAILED {}: expected {}, computed {}",
                c.name, c.expected, c.computed
            );
        }
    }
    s
}

pub fn extensions(r: &ExtensionReport) -> String {
    let mut s = format!(
        "{} extensions of {} by {} over {}\n",
        r.kind, r.spec, r.sheaf, r.model
    );
    let _ = writeln!(s, "  classified by: {}", r.description);
    let polys: Vec<String> = match &r.generators {
        Generators::None => Vec::new(),
        Generators::Quadratic(f) => f.iter().map(|f| f.polynomial()).collect(),
        Generators::Cubic(f) => f.iter().map(|f| f.polynomial()).collect(),
    };
    for (k, p) in polys.iter().enumerate() {
        let _ = writeln!(s, "  generator {}: {p}", k + 1);
    }
    s
}

pub fn forms(spec: &GroupSpec, degree: u8, labels: &[String], polys: &[String]) -> String {
    let kind = if degree == 2 { "quadratic" } else { "cubic" };
    let mut s = format!("W-invariant {kind} forms of {spec}: rank {}\n", polys.len());
    let coords: Vec<String> = labels
        .iter()
        .enumerate()
        .map(|(k, l)| format!("y{} = {l}", k + 1))
        .collect();
    if !coords.is_empty() {
        let _ = writeln!(s, "  coordinates: {}", coords.join(", "));
    }
    for (k, p) in polys.iter().enumerate() {
        let _ = writeln!(s, "  {}: {p}", k + 1);
    }
    s
}

pub fn wsets(spec: &GroupSpec, rows: &[(usize, Vec<String>)]) -> String {
    let mut s = format!("W-sets of {}\n", spec.derived());
    for (p, tuples) in rows {
        let _ = writeln!(s, "  level {p}: {} tuple(s)", tuples.len());
        for chunk in tuples.chunks(8) {
            let _ = writeln!(s, "    {}", chunk.join(" "));
        }
    }
    s
}

pub fn verify(results: &[CriterionResult]) -> String {
    let mut s = String::new();
    for r in results {
        let _ = writeln!(
            s,
            "[{}] criterion {}: {}: {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.detail
        );
    }
    let passed = results.iter().filter(|r| r.pass).count();
    let _ = writeln!(s, "{passed}/{} criteria passed", results.len());
    s
}
