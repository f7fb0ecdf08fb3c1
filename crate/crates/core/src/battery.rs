//! The standard verification battery: the group specs everything is checked
//! on, and one runnable check per acceptance criterion.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bdcomplex::{
    assemble_cohomology, compute_e1, crosscheck_reductive, k2_surjectivity, phi_map_check,
    ColumnContext, E1Page, Model, Sheaf,
};
use crate::classify::{
    additive_row, additive_row_cohomology, assemble_bg, exterior_bar_row, quadlin_row,
    DEFAULT_TRUNCATION,
};
use crate::invariants::{binomial, cubic_invariant_basis, quadratic_invariant_basis, Restrict};
use crate::rootdata::{count_nbdg_spec, GroupSpec};
use crate::torus::{exhaustive_k3_check, TorusModel};
use crate::zchain::{
    coefficient_cohomology_direct, coefficient_cohomology_uct, reduced_circle_complex,
    smith_normal_form, BilinearMap, CoefficientGroup, CohomologyGroup, FieldModel, ZComplex,
    ZMatrix,
};

/// Simple types of the battery.
pub const BATTERY_TYPES: [&str; 14] = [
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "D4", "D5", "E6", "F4", "G2", "C4",
];

/// Reductive specs used for the torus-mixing checks.
pub const REDUCTIVE_SPECS: [&str; 9] = [
    "T1", "T2", "T3", "A1xT1", "A2xT1", "A2xT2", "B3xT1", "G2xT2", "A3xB2xT1",
];

fn parse(s: &str) -> GroupSpec {
    s.parse().expect("battery spec parses")
}

/// The simple types and all unordered pairs of them (squares included).
pub fn standard_battery() -> Vec<GroupSpec> {
    let simple: Vec<GroupSpec> = BATTERY_TYPES.iter().map(|s| parse(s)).collect();
    let mut out = simple.clone();
    for (i, a) in simple.iter().enumerate() {
        for b in &simple[i..] {
            out.push(a.product(b));
        }
    }
    out
}

pub fn reductive_battery() -> Vec<GroupSpec> {
    REDUCTIVE_SPECS.iter().map(|s| parse(s)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    /// First failures, or a short summary when everything passed.
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} ({:.2?}) {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed,
            self.detail
        )
    }
}

struct Tally {
    failures: Vec<String>,
    checks: usize,
}

impl Tally {
    fn new() -> Self {
        Tally {
            failures: Vec::new(),
            checks: 0,
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(
        self,
        id: usize,
        name: &str,
        start: Instant,
        limit: Option<Duration>,
    ) -> CriterionResult {
        let elapsed = start.elapsed();
        let mut failures = self.failures;
        if let Some(l) = limit {
            if elapsed > l {
                failures.push(format!("took {elapsed:.2?}, limit {l:?}"));
            }
        }
        let pass = failures.is_empty();
        let detail = if pass {
            format!("{} checks", self.checks)
        } else {
            let shown: Vec<String> = failures.iter().take(5).cloned().collect();
            format!(
                "{} of {} failed: {}",
                failures.len(),
                self.checks,
                shown.join("; ")
            )
        };
        CriterionResult {
            id,
            name: name.to_string(),
            pass,
            detail,
            elapsed,
        }
    }
}

pub const CRITERIA: [&str; 9] = [
    "CH³ torsion of E1(-3,6)",
    "vanishing E1 cells and K2 surjectivity",
    "cubic-form rank and the φ ↦ B isomorphism",
    "quadratic-form rank and coefficient assembly",
    "reductive cross-check on the full lattice",
    "torus classification, exhaustive",
    "classifying-space assembly",
    "engine properties",
    "E8 pipeline performance",
];

pub fn run_criterion(id: usize) -> CriterionResult {
    match id {
        1 => criterion_torsion(),
        2 => criterion_vanishing(),
        3 => criterion_cubic(),
        4 => criterion_quadratic(),
        5 => criterion_reductive(),
        6 => criterion_torus(),
        7 => criterion_bg(),
        8 => criterion_engine(1000, 40, 50),
        9 => criterion_e8(),
        _ => panic!("no criterion {id}"),
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(run_criterion).collect()
}

fn criterion_torsion() -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let cases: Vec<(&str, Vec<u64>)> = ["G2", "B3", "B4", "D4", "D5", "F4", "E6", "E7", "E8"]
        .iter()
        .map(|s| (*s, vec![2]))
        .chain(
            ["A1", "A2", "A3", "A4", "A5", "B2", "C3", "C4"]
                .iter()
                .map(|s| (*s, vec![])),
        )
        .chain(std::iter::once(("G2xB3xA2", vec![2, 2])))
        .collect();
    for (s, expected) in cases {
        let g = compute_e1(&parse(s), Sheaf::K3).cell(-3, 6);
        t.expect(g.free_rank == 0 && g.torsion == expected, || {
            format!("{s}: got {g}")
        });
    }
    t.finish(1, CRITERIA[0], start, Some(Duration::from_secs(60)))
}

fn semisimple_pages(specs: &[GroupSpec]) -> Vec<(GroupSpec, E1Page, E1Page)> {
    specs
        .iter()
        .map(|s| {
            let ctx = ColumnContext::new(s, Restrict::Derived);
            (
                s.clone(),
                E1Page::from_context(&ctx, Sheaf::K3),
                E1Page::from_context(&ctx, Sheaf::K2),
            )
        })
        .collect()
}

fn criterion_vanishing() -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for (s, k3, k2) in semisimple_pages(&standard_battery()) {
        for (p, q) in [(-3, 4), (-1, 1), (-2, 2), (-3, 3)] {
            let g = k3.cell(p, q);
            t.expect(g.is_zero(), || format!("{s} K3 E1({p},{q}) = {g}"));
        }
        for (p, q) in [(-1, 1), (-2, 2), (-2, 4)] {
            let g = k2.cell(p, q);
            t.expect(g.is_zero(), || format!("{s} K2 E1({p},{q}) = {g}"));
        }
        t.expect(k2_surjectivity(&s), || {
            format!("{s}: K2 differential not onto")
        });
    }
    t.finish(2, CRITERIA[1], start, None)
}

fn criterion_cubic() -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for s in standard_battery() {
        let cell = compute_e1(&s, Sheaf::K3).cell(-3, 5);
        let expected = s.type_a_factor_count();
        let direct = cubic_invariant_basis(&s, Restrict::Derived).len();
        t.expect(cell == CohomologyGroup::free(expected), || {
            format!("{s}: E1(-3,5) = {cell}, expected Z^{expected}")
        });
        t.expect(direct == expected, || {
            format!("{s}: invariant kernel rank {direct}")
        });
        let phi = phi_map_check(&s);
        t.expect(phi.is_isomorphism(), || format!("{s}: φ map {phi:?}"));
    }
    t.finish(3, CRITERIA[2], start, None)
}

/// Largest rank on which every column is tensored with every field model in
/// criterion 4; above it only the integral cells are compared.
pub const COEFFICIENT_SWEEP_RANK: usize = 6;

fn criterion_quadratic() -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let models: Vec<FieldModel> = [2, 3, 4, 5, 8, 9, 49]
        .iter()
        .map(|&q| FieldModel::finite(q).unwrap())
        .collect();
    for s in standard_battery() {
        let ctx = ColumnContext::new(&s, Restrict::Derived);
        let k3 = E1Page::from_context(&ctx, Sheaf::K3);
        let k2 = E1Page::from_context(&ctx, Sheaf::K2);
        let n = s.factors().len();
        for (page, name) in [(&k3, "K3"), (&k2, "K2")] {
            let g = page.cell(-2, 3);
            t.expect(g == CohomologyGroup::free(n), || {
                format!("{s} {name}: E1(-2,3) = {g}")
            });
        }
        let direct = quadratic_invariant_basis(&s, Restrict::Derived).len();
        t.expect(direct == n, || {
            format!("{s}: quadratic invariants {direct}")
        });
        if s.derived_rank() > COEFFICIENT_SWEEP_RANK {
            continue;
        }
        for f in &models {
            for col in &k3.columns {
                let a = f.k_group(col.slot.index());
                let d = coefficient_cohomology_direct(&col.complex, &a);
                let u = coefficient_cohomology_uct(&col.complex, &a);
                t.expect(d == u, || {
                    format!("{s} column {} over {}: {d:?} vs {u:?}", col.p, f.name)
                });
            }
        }
    }
    t.finish(4, CRITERIA[3], start, None)
}

fn criterion_reductive() -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let models = [
        Model::Symbolic,
        Model::Field(FieldModel::finite(5).unwrap()),
        Model::Field(FieldModel::finite(4).unwrap()),
    ];
    for s in ["A1xT1", "A2xT1", "A2xT2", "B3xT1"] {
        for sheaf in [Sheaf::K2, Sheaf::K3] {
            for m in &models {
                for c in crosscheck_reductive(&parse(s), sheaf, m) {
                    t.expect(c.pass, || {
                        format!(
                            "{s} {sheaf} {}: E1({},{}) {} vs {}",
                            m.name(),
                            c.p,
                            c.q,
                            c.computed,
                            c.predicted
                        )
                    });
                }
            }
        }
    }
    t.finish(5, CRITERIA[4], start, None)
}

/// `A1 = Z/n` with `{−1}` marked, `A2 = Z/2`, `β(x, y) = xy mod 2`.
pub fn cyclic_torus_model(n: u64, m1: i64) -> TorusModel {
    let a1 =
        CoefficientGroup::new(CohomologyGroup::cyclic(n), Some(vec![m1])).expect("marked element");
    let a2 = CoefficientGroup::cyclic(2);
    let beta =
        BilinearMap::new(a1.clone(), a1.clone(), a2.clone(), vec![vec![vec![1]]]).expect("pairing");
    TorusModel::new(a1, a2, beta).expect("torus model")
}

fn criterion_torus() -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for (r, n, m1) in [(2, 2, 1), (2, 2, 0), (1, 4, 2)] {
        let model = cyclic_torus_model(n, m1);
        match exhaustive_k3_check(r, &model) {
            Some(c) => t.expect(c.pass(), || {
                format!("rank {r}, A1 = Z/{n}, m1 = {m1}: {c:?}")
            }),
            None => t.expect(false, || format!("rank {r}: not enumerable")),
        }
    }
    t.finish(6, CRITERIA[5], start, Some(Duration::from_secs(10)))
}

fn criterion_bg() -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for r in 0..=3 {
        let rows = exterior_bar_row(r, 3, 5);
        for m in 0..=3 {
            for d in 0..5 {
                let expected = if d == m as i32 {
                    binomial(r + m.max(1) - 1, m)
                } else {
                    0
                };
                let h = rows[m].cohomology(d);
                t.expect(h == CohomologyGroup::free(expected), || {
                    format!("bar row r={r} m={m} H^{d} = {h}")
                });
            }
        }
    }
    let circle = reduced_circle_complex(DEFAULT_TRUNCATION);
    let square = quadlin_row(DEFAULT_TRUNCATION);
    for d in 0..DEFAULT_TRUNCATION as i32 {
        let one = if d == 1 {
            CohomologyGroup::free(1)
        } else {
            CohomologyGroup::zero()
        };
        let two = if d == 2 {
            CohomologyGroup::free(1)
        } else {
            CohomologyGroup::zero()
        };
        t.expect(circle.cohomology(d) == one, || format!("circle H^{d}"));
        t.expect(square.cohomology(d) == two, || {
            format!("circle ⊗ circle H^{d}")
        });
        let z2 = additive_row_cohomology(&CohomologyGroup::cyclic(2), DEFAULT_TRUNCATION);
        let expected = if d == 1 {
            CohomologyGroup::cyclic(2)
        } else {
            CohomologyGroup::zero()
        };
        t.expect(z2[d as usize].1 == expected, || {
            format!("additive Z/2 row H^{d}")
        });
    }
    let specs: Vec<GroupSpec> = standard_battery()
        .into_iter()
        .chain(reductive_battery())
        .collect();
    for s in &specs {
        let bg = assemble_bg(s, Sheaf::K3, &Model::Symbolic);
        for c in bg.checks.iter().filter(|c| !c.pass) {
            t.expect(false, || {
                format!("{s} K3: {} {} vs {}", c.name, c.computed, c.expected)
            });
        }
        let h3 = bg.degree(3).and_then(|d| d.total.clone());
        let cubic = cubic_invariant_basis(s, Restrict::Full).len();
        t.expect(h3 == Some(CohomologyGroup::free(cubic)), || {
            format!("{s}: H3 = {h3:?}, Cubic_W(Y) rank {cubic}")
        });
        let h4 = bg.degree(4).and_then(|d| d.total.clone());
        let n = count_nbdg_spec(s);
        t.expect(h4 == Some(CohomologyGroup::new(0, &vec![2; n])), || {
            format!("{s}: H4 = {h4:?}")
        });
        if s.is_semisimple() {
            let h1 = bg.degree(1).and_then(|d| d.total.clone());
            t.expect(h1.as_ref().is_some_and(CohomologyGroup::is_zero), || {
                format!("{s}: H1 = {h1:?}")
            });
        }
        let k2 = assemble_bg(s, Sheaf::K2, &Model::Symbolic);
        t.expect(k2.consistent(), || format!("{s} K2 checks"));
    }
    t.finish(7, CRITERIA[6], start, None)
}

fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> ZMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    // A mix of dense and sparse inputs.
    let density: f64 = rng.gen_range(0.1..=1.0);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(density) {
                        rng.gen_range(-bound..=bound)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    ZMatrix::from_i64(&data)
}

/// SNF identities on `count` seeded random matrices, `d∘d = 0` and Euler
/// characteristics on the battery columns.
pub fn criterion_engine(count: usize, max_dim: usize, bound: i64) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for k in 0..count {
        let m = random_matrix(&mut rng, max_dim, bound);
        let snf = smith_normal_form(&m);
        let d = snf.u.mul(&m).and_then(|x| x.mul(&snf.v)).expect("shapes");
        t.expect(d == snf.d_matrix(), || format!("matrix {k}: U·M·V ≠ D"));
        t.expect(snf.u.is_unimodular() && snf.v.is_unimodular(), || {
            format!("matrix {k}: not unimodular")
        });
        let ok_inv = snf
            .u
            .mul(&snf.u_inv)
            .is_ok_and(|p| p == ZMatrix::identity(m.rows()));
        t.expect(ok_inv, || format!("matrix {k}: U·U⁻¹ ≠ I"));
        let diag = &snf.diagonal;
        let chain = diag.windows(2).all(|w| {
            use num_integer::Integer;
            use num_traits::{Signed, Zero};
            !w[0].is_negative()
                && (w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])))
        });
        t.expect(chain, || format!("matrix {k}: diagonal chain broken"));
    }
    for s in standard_battery().into_iter().chain(reductive_battery()) {
        let ctx = ColumnContext::new(&s, Restrict::Full);
        for sheaf in [Sheaf::K2, Sheaf::K3] {
            for col in E1Page::from_context(&ctx, sheaf).columns {
                let c: &ZComplex = &col.complex;
                t.expect(c.is_complex(), || {
                    format!("{s} {sheaf} column {}: d∘d ≠ 0", col.p)
                });
                let h: i64 = c
                    .cohomology_all()
                    .iter()
                    .map(|(n, g)| {
                        if n.rem_euclid(2) == 0 {
                            g.free_rank as i64
                        } else {
                            -(g.free_rank as i64)
                        }
                    })
                    .sum();
                t.expect(h == c.euler_characteristic(), || {
                    format!("{s} {sheaf} column {}: Euler characteristic", col.p)
                });
            }
        }
    }
    let mut rows: Vec<(String, ZComplex)> = Vec::new();
    for r in 1..=3 {
        for (j, row) in exterior_bar_row(r, 3, DEFAULT_TRUNCATION)
            .into_iter()
            .enumerate()
        {
            rows.push((format!("bar row r={r} j={j}"), row));
        }
    }
    rows.push((
        "additive row".into(),
        additive_row(&CohomologyGroup::new(1, &[2]), DEFAULT_TRUNCATION),
    ));
    rows.push(("quadlin row".into(), quadlin_row(DEFAULT_TRUNCATION)));
    for (name, c) in &rows {
        t.expect(c.is_complex(), || format!("{name}: d∘d ≠ 0"));
    }
    t.finish(8, CRITERIA[7], start, Some(Duration::from_secs(30)))
}

/// Largest differential built for a spec, as `(rows, cols)`.
pub fn largest_matrix(spec: &GroupSpec) -> (usize, usize) {
    let ctx = ColumnContext::new(spec, Restrict::Full);
    [Sheaf::K2, Sheaf::K3]
        .iter()
        .flat_map(|&sh| E1Page::from_context(&ctx, sh).columns)
        .flat_map(|c| {
            c.complex
                .differentials()
                .iter()
                .map(|d| (d.rows(), d.cols()))
                .collect::<Vec<_>>()
        })
        .max_by_key(|(r, c)| r * c)
        .unwrap_or((0, 0))
}

fn criterion_e8() -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let e8 = parse("E8");
    for sheaf in [Sheaf::K2, Sheaf::K3] {
        let g = assemble_cohomology(&e8, sheaf, &Model::Symbolic);
        t.expect(!g.degrees.is_empty(), || format!("E8 {sheaf} on G"));
        let bg = assemble_bg(&e8, sheaf, &Model::Symbolic);
        t.expect(bg.consistent(), || {
            format!("E8 {sheaf} on BG: {:?}", bg.checks)
        });
    }
    let (r, c) = largest_matrix(&e8);
    // Dense upper bound with 32 bytes per entry.
    let bytes = (r * c * 32) as u64;
    t.expect(bytes < 1 << 30, || format!("largest matrix {r}×{c}"));
    let mut res = t.finish(9, CRITERIA[8], start, Some(Duration::from_secs(120)));
    if res.pass {
        res.detail = format!("{}; largest matrix {r}×{c}", res.detail);
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_shape() {
        assert_eq!(standard_battery().len(), 14 + 14 * 15 / 2);
        assert!(reductive_battery().iter().all(|s| s.torus_rank() > 0));
    }

    #[test]
    fn small_engine_run() {
        let r = criterion_engine(50, 12, 9);
        assert!(r.pass, "{}", r.line());
    }
}
