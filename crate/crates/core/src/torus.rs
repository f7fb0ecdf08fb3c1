//! Reduced `𝒦₂`- and `𝒦₃`-cohomology of a split torus in degree 0.
//!
//! A class in `H̃⁰(H, 𝒦₃)` is presented as
//! `Σ a_ijk eᵢ.eⱼ.e_k + Σ eᵢ.eⱼ.{f_ij} + Σ eᵢ.gᵢ` with `a` integral,
//! `f_ij ∈ A1` (a model of `k^×`) and `gᵢ ∈ A2` (a model of `K₂(k)`).
//! Two presentations give the same class exactly when they differ by the
//! relations `x.x = x.{−1}` multiplied by a character or by a symbol; these
//! are the three identifications of [`Identification`]. Everything is written
//! additively, with `m1 = {−1}` the marked element of `A1` and
//! `β : A1 × A1 → A2` the symbol pairing.
//!
//! ```
//! use bdspectra::torus::{classify, TorusK3Class, TorusModel};
//! use bdspectra::zchain::FieldModel;
//!
//! let model = TorusModel::from_field(&FieldModel::finite(5).unwrap());
//! let c = TorusK3Class::zero(2, &model);
//! assert!(classify(&c, &model).is_zero(&model));
//! ```

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bdcomplex::{
    group_value, piece, tensor_value, DegreeEntry, Model, Piece, PieceValue, Sheaf, Slot,
};
use crate::error::{Error, Result};
use crate::invariants::binomial;
use crate::rootdata::GroupSpec;
use crate::zchain::group::Element;
use crate::zchain::{
    invariant_factors, BilinearMap, CoefficientGroup, CohomologyGroup, FieldModel, ZMatrix,
};

/// Coefficient data `(A1, m1, A2, β)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusModel {
    pub a1: CoefficientGroup,
    pub a2: CoefficientGroup,
    pub beta: BilinearMap,
}

impl TorusModel {
    pub fn new(a1: CoefficientGroup, a2: CoefficientGroup, beta: BilinearMap) -> Result<Self> {
        if beta.left != a1 || beta.right != a1 || beta.target != a2 {
            return Err(Error::InvalidCoefficients(
                "pairing must map A1 × A1 into A2".into(),
            ));
        }
        Ok(TorusModel { a1, a2, beta })
    }

    pub fn from_field(f: &FieldModel) -> Self {
        TorusModel {
            a1: f.units.clone(),
            a2: f.k2.clone(),
            beta: f.steinberg.clone(),
        }
    }

    pub fn m1(&self) -> Element {
        self.a1.minus_one()
    }

    fn beta_m1(&self, h: &[i64]) -> Element {
        self.beta.eval(&self.m1(), h)
    }
}

fn idx2(r: usize, i: usize, j: usize) -> usize {
    i * r + j
}

fn idx3(r: usize, i: usize, j: usize, k: usize) -> usize {
    (i * r + j) * r + k
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

fn check_elements(group: &CoefficientGroup, xs: &[Element], count: usize) -> Result<Vec<Element>> {
    check_len(count, xs.len())?;
    xs.iter().map(|x| group.reduce(x)).collect()
}

/// `Σ xᵢ yⱼ z_k t_ijk`.
fn eval3(r: usize, t: &[i64], x: &[i64], y: &[i64], z: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                s += t[idx3(r, i, j, k)] * x[i] * y[j] * z[k];
            }
        }
    }
    s
}

fn eval2(group: &CoefficientGroup, r: usize, t: &[Element], x: &[i64], y: &[i64]) -> Element {
    let mut acc = group.zero();
    for i in 0..r {
        for j in 0..r {
            let c = x[i] * y[j];
            if c != 0 {
                acc = group.add(&acc, &group.scale(c, &t[idx2(r, i, j)]));
            }
        }
    }
    acc
}

fn eval1(group: &CoefficientGroup, t: &[Element], x: &[i64]) -> Element {
    t.iter().zip(x).fold(group.zero(), |acc, (v, &c)| {
        group.add(&acc, &group.scale(c, v))
    })
}

/// `A(x,y,z)`: the alternating sum of `a` over the six orderings.
fn antisymmetrization(r: usize, a: &[i64]) -> Vec<i64> {
    let mut out = vec![0; r * r * r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                out[idx3(r, i, j, k)] =
                    a[idx3(r, i, j, k)] - a[idx3(r, j, i, k)] - a[idx3(r, i, k, j)]
                        + a[idx3(r, j, k, i)]
                        + a[idx3(r, k, i, j)]
                        - a[idx3(r, k, j, i)];
            }
        }
    }
    out
}

/// A presentation `(a, f, g)` of a class in `H̃⁰(H, 𝒦₃)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusK3Class {
    pub rank: usize,
    /// `a_ijk` at index `(i·r + j)·r + k`.
    pub a: Vec<i64>,
    /// `f_ij` at index `i·r + j`.
    pub f: Vec<Element>,
    pub g: Vec<Element>,
}

impl TorusK3Class {
    pub fn new(
        model: &TorusModel,
        rank: usize,
        a: Vec<i64>,
        f: Vec<Element>,
        g: Vec<Element>,
    ) -> Result<Self> {
        check_len(rank * rank * rank, a.len())?;
        let f = check_elements(&model.a1, &f, rank * rank)?;
        let g = check_elements(&model.a2, &g, rank)?;
        Ok(TorusK3Class { rank, a, f, g })
    }

    pub fn zero(rank: usize, model: &TorusModel) -> Self {
        TorusK3Class {
            rank,
            a: vec![0; rank * rank * rank],
            f: vec![model.a1.zero(); rank * rank],
            g: vec![model.a2.zero(); rank],
        }
    }

    pub fn add(&self, other: &TorusK3Class, model: &TorusModel) -> TorusK3Class {
        TorusK3Class {
            rank: self.rank,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
            f: self
                .f
                .iter()
                .zip(&other.f)
                .map(|(x, y)| model.a1.add(x, y))
                .collect(),
            g: self
                .g
                .iter()
                .zip(&other.g)
                .map(|(x, y)| model.a2.add(x, y))
                .collect(),
        }
    }

    fn add_f(&mut self, model: &TorusModel, i: usize, j: usize, h: &[i64]) {
        let k = idx2(self.rank, i, j);
        self.f[k] = model.a1.add(&self.f[k], h);
    }

    fn add_g(&mut self, model: &TorusModel, i: usize, h: &[i64]) {
        self.g[i] = model.a2.add(&self.g[i], h);
    }
}

/// The relations between presentations, with `x = Σ cᵢ eᵢ`:
///
/// * `First { c, k }`: `x.x.e_k = x.{−1}.e_k`, so `a_ijk += cᵢcⱼ` and `f_ik += cᵢ·m1`;
/// * `Second { c, i }`: `eᵢ.x.x = eᵢ.x.{−1}`, so `a_ijk += cⱼc_k` and `f_ij += cⱼ·m1`;
/// * `Third { c, h }`: `x.x.{h} = x.{−1, h}`, so `f_ij += cᵢcⱼ·h` and `gᵢ += cᵢ·β(m1, h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Identification {
    First { c: Vec<i64>, k: usize },
    Second { c: Vec<i64>, i: usize },
    Third { c: Vec<i64>, h: Element },
}

pub fn apply_identification(
    class: &TorusK3Class,
    model: &TorusModel,
    ident: &Identification,
) -> Result<TorusK3Class> {
    let r = class.rank;
    let mut out = class.clone();
    let m1 = model.m1();
    match ident {
        Identification::First { c, k } => {
            check_len(r, c.len())?;
            if *k >= r {
                return Err(Error::IndexOutOfRange { index: *k, rank: r });
            }
            for i in 0..r {
                for j in 0..r {
                    out.a[idx3(r, i, j, *k)] += c[i] * c[j];
                }
                out.add_f(model, i, *k, &model.a1.scale(c[i], &m1));
            }
        }
        Identification::Second { c, i } => {
            check_len(r, c.len())?;
            if *i >= r {
                return Err(Error::IndexOutOfRange { index: *i, rank: r });
            }
            for j in 0..r {
                for k in 0..r {
                    out.a[idx3(r, *i, j, k)] += c[j] * c[k];
                }
                out.add_f(model, *i, j, &model.a1.scale(c[j], &m1));
            }
        }
        Identification::Third { c, h } => {
            check_len(r, c.len())?;
            let h = model.a1.reduce(h)?;
            let bh = model.beta_m1(&h);
            for i in 0..r {
                for j in 0..r {
                    out.add_f(model, i, j, &model.a1.scale(c[i] * c[j], &h));
                }
                out.add_g(model, i, &model.a2.scale(c[i], &bh));
            }
        }
    }
    Ok(out)
}

/// Classification data `(A, q1, q2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusK3Data {
    pub rank: usize,
    /// The alternating 3-form, all `r³` values.
    pub a: Vec<i64>,
    /// `q1(eᵢ, eⱼ)` at index `i·r + j`.
    pub q1: Vec<Element>,
    pub q2: Vec<Element>,
}

impl TorusK3Data {
    pub fn is_zero(&self, model: &TorusModel) -> bool {
        self.a.iter().all(|&v| v == 0)
            && self.q1.iter().all(|v| model.a1.is_zero(v))
            && self.q2.iter().all(|v| model.a2.is_zero(v))
    }

    /// Shapes, alternation of `A`, and `q1(x, y) = −q1(y, x)` on the basis
    /// with `q1(x, x) = 0`.
    pub fn validate(&self, model: &TorusModel) -> Result<()> {
        let r = self.rank;
        check_len(r * r * r, self.a.len())?;
        check_elements(&model.a1, &self.q1, r * r)?;
        check_elements(&model.a2, &self.q2, r)?;
        let bad = |m: &str| Err(Error::InvalidTorusData(m.to_string()));
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let v = self.a[idx3(r, i, j, k)];
                    if v != -self.a[idx3(r, j, i, k)] || v != -self.a[idx3(r, i, k, j)] {
                        return bad("A is not alternating");
                    }
                }
                let s = model
                    .a1
                    .add(&self.q1[idx2(r, i, j)], &self.q1[idx2(r, j, i)]);
                if !model.a1.is_zero(&s) {
                    return bad("q1 is not antisymmetric");
                }
            }
            if !model.a1.is_zero(&self.q1[idx2(r, i, i)]) {
                return bad("q1 does not vanish on the diagonal");
            }
        }
        Ok(())
    }

    pub fn eval_a(&self, x: &[i64], y: &[i64], z: &[i64]) -> i64 {
        eval3(self.rank, &self.a, x, y, z)
    }

    /// `q1` at arbitrary arguments, extended by the defect relations.
    pub fn eval_q1(&self, model: &TorusModel, x: &[i64], y: &[i64]) -> Result<Element> {
        let c = declassify(self, model)?;
        Ok(q1_of(&c, model, x, y))
    }

    /// `q2` at an arbitrary argument, extended by the defect relation.
    pub fn eval_q2(&self, model: &TorusModel, x: &[i64]) -> Result<Element> {
        let c = declassify(self, model)?;
        Ok(q2_of(&c, model, x))
    }
}

fn q1_of(c: &TorusK3Class, model: &TorusModel, x: &[i64], y: &[i64]) -> Element {
    let r = c.rank;
    let g = &model.a1;
    let a = |u: &[i64], v: &[i64], w: &[i64]| eval3(r, &c.a, u, v, w);
    let s = a(x, x, y) + a(x, y, x) + a(y, x, x) + a(x, y, y) + a(y, x, y) + a(y, y, x);
    let f = g.sub(&eval2(g, r, &c.f, x, y), &eval2(g, r, &c.f, y, x));
    g.add(&f, &g.scale(s, &model.m1()))
}

/// `q2(x) = g(x) + β(m1, f(x,x)) + a(x,x,x)·β(m1, m1)`. The last term keeps
/// `q2` invariant under the first identification when `β(m1, m1) ≠ 0`.
fn q2_of(c: &TorusK3Class, model: &TorusModel, x: &[i64]) -> Element {
    let r = c.rank;
    let t = &model.a2;
    let fxx = eval2(&model.a1, r, &c.f, x, x);
    let axxx = eval3(r, &c.a, x, x, x);
    let v = t.add(&eval1(t, &c.g, x), &model.beta_m1(&fxx));
    t.add(&v, &t.scale(axxx, &model.beta_m1(&model.m1())))
}

fn basis(r: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; r];
    e[i] = 1;
    e
}

pub fn classify(c: &TorusK3Class, model: &TorusModel) -> TorusK3Data {
    let r = c.rank;
    let e: Vec<Vec<i64>> = (0..r).map(|i| basis(r, i)).collect();
    let mut q1 = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            q1.push(q1_of(c, model, &e[i], &e[j]));
        }
    }
    TorusK3Data {
        rank: r,
        a: antisymmetrization(r, &c.a),
        q1,
        q2: e.iter().map(|x| q2_of(c, model, x)).collect(),
    }
}

/// The section of [`classify`]: `a` supported on `i < j < k`, `f` strictly
/// lower triangular, `g = q2` on the basis.
pub fn declassify(d: &TorusK3Data, model: &TorusModel) -> Result<TorusK3Class> {
    d.validate(model)?;
    let r = d.rank;
    let mut c = TorusK3Class::zero(r, model);
    for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                c.a[idx3(r, i, j, k)] = d.a[idx3(r, i, j, k)];
            }
            c.f[idx2(r, j, i)] = d.q1[idx2(r, j, i)].clone();
        }
        c.g[i] = d.q2[i].clone();
    }
    Ok(c)
}

/// Reduces a presentation to the shape produced by [`declassify`] using only
/// the three identifications (in their basis forms).
pub fn normal_form(c: &TorusK3Class, model: &TorusModel) -> TorusK3Class {
    let r = c.rank;
    let mut out = c.clone();
    let m1 = model.m1();
    // Move all mass of a triple with distinct entries onto its sorted
    // ordering, by adjacent transpositions (differences of the first and
    // second identifications with c = eᵢ + eⱼ, which leave f untouched).
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let v = out.a[idx3(r, i, j, k)];
                    if v == 0 || i == j || j == k || i == k || (i < j && j < k) {
                        continue;
                    }
                    let swapped = if i > j {
                        idx3(r, j, i, k)
                    } else {
                        idx3(r, i, k, j)
                    };
                    out.a[idx3(r, i, j, k)] = 0;
                    out.a[swapped] -= v;
                    changed = true;
                }
            }
        }
    }
    // Triples with a repeated entry. `a_iji` is first moved to `a_jii`.
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let v = out.a[idx3(r, i, j, i)];
            out.a[idx3(r, i, j, i)] = 0;
            out.a[idx3(r, j, i, i)] -= v;
        }
    }
    for i in 0..r {
        for k in 0..r {
            // a_iik, via the first identification with c = eᵢ.
            let v = out.a[idx3(r, i, i, k)];
            out.a[idx3(r, i, i, k)] = 0;
            out.add_f(model, i, k, &model.a1.scale(-v, &m1));
        }
    }
    for i in 0..r {
        for j in 0..r {
            // a_ijj with i ≠ j, via the second identification with c = eⱼ.
            if i == j {
                continue;
            }
            let v = out.a[idx3(r, i, j, j)];
            out.a[idx3(r, i, j, j)] = 0;
            out.add_f(model, i, j, &model.a1.scale(-v, &m1));
        }
    }
    // Symmetric part of f, by the third identification.
    for i in 0..r {
        let h = model.a1.neg(&out.f[idx2(r, i, i)]);
        out.f[idx2(r, i, i)] = model.a1.zero();
        out.add_g(model, i, &model.beta_m1(&h));
        for j in i + 1..r {
            let h = model.a1.neg(&out.f[idx2(r, i, j)]);
            out.add_f(model, i, j, &h);
            out.add_f(model, j, i, &h);
        }
    }
    out
}

/// Builds the presentation matrix of `P / M` (columns are relations) and
/// returns its cokernel.
fn cokernel(rows: usize, relations: &[Vec<i64>]) -> CohomologyGroup {
    let cols: Vec<Vec<BigInt>> = relations
        .iter()
        .map(|c| c.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let m = ZMatrix::from_columns(&cols, rows);
    let factors = invariant_factors(&m);
    let torsion: Vec<u64> = factors
        .iter()
        .filter_map(|d| u64::try_from(d.magnitude().clone()).ok())
        .filter(|&d| d > 1)
        .collect();
    CohomologyGroup::new(rows - factors.len(), &torsion)
}

fn torsion_relations(
    group: &CoefficientGroup,
    offset: usize,
    rows: usize,
    out: &mut Vec<Vec<i64>>,
) {
    let free = group.group.free_rank;
    for (k, &t) in group.group.torsion.iter().enumerate() {
        let mut v = vec![0; rows];
        v[offset + free + k] = t as i64;
        out.push(v);
    }
}

/// `H̃⁰(H, 𝒦₃)` for a torus of rank `r`, as the group of presentations
/// modulo the identifications.
pub fn k3_presentation_group(r: usize, model: &TorusModel) -> CohomologyGroup {
    let (d1, d2) = (model.a1.dim(), model.a2.dim());
    let f_off = r * r * r;
    let g_off = f_off + r * r * d1;
    let rows = g_off + r * d2;
    let fpos = |i: usize, j: usize| f_off + idx2(r, i, j) * d1;
    let gpos = |i: usize| g_off + i * d2;
    let m1 = model.m1();
    let mut rel = Vec::new();
    for i in 0..r {
        for j in 0..r {
            torsion_relations(&model.a1, fpos(i, j), rows, &mut rel);
        }
        torsion_relations(&model.a2, gpos(i), rows, &mut rel);
    }
    let put = |v: &mut Vec<i64>, at: usize, x: &[i64]| {
        for (k, &c) in x.iter().enumerate() {
            v[at + k] += c;
        }
    };
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                // a_ijk + a_jik and a_ijk + a_ikj.
                for (p, q) in [(idx3(r, j, i, k), i != j), (idx3(r, i, k, j), j != k)] {
                    if q {
                        let mut v = vec![0; rows];
                        v[idx3(r, i, j, k)] += 1;
                        v[p] += 1;
                        rel.push(v);
                    }
                }
            }
            // a_iij + m1 at f_ij, and a_ijj + m1 at f_ij.
            let mut v = vec![0; rows];
            v[idx3(r, i, i, j)] = 1;
            put(&mut v, fpos(i, j), &m1);
            rel.push(v);
            let mut v = vec![0; rows];
            v[idx3(r, i, j, j)] = 1;
            put(&mut v, fpos(i, j), &m1);
            rel.push(v);
        }
        for gen in 0..d1 {
            let h = model.a1.generator(gen);
            let mut v = vec![0; rows];
            put(&mut v, fpos(i, i), &h);
            put(&mut v, gpos(i), &model.beta_m1(&h));
            rel.push(v);
            for j in i + 1..r {
                let mut v = vec![0; rows];
                put(&mut v, fpos(i, j), &h);
                put(&mut v, fpos(j, i), &h);
                rel.push(v);
            }
        }
    }
    cokernel(rows, &rel)
}

fn all_vectors(group: &CoefficientGroup, count: usize) -> Option<Vec<Vec<Element>>> {
    let elems = group.elements()?;
    let mut out = vec![Vec::new()];
    for _ in 0..count {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Element>| {
                elems.iter().map(move |e| {
                    let mut v = v.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect();
    }
    Some(out)
}

/// Every valid `(A, q1, q2)` at rank `r` with values of `A` on sorted
/// triples in `[−a_bound, a_bound]`. `None` if a coefficient group is
/// infinite.
pub fn enumerate_k3_data(r: usize, model: &TorusModel, a_bound: i64) -> Option<Vec<TorusK3Data>> {
    let triples: Vec<(usize, usize, usize)> = (0..r)
        .flat_map(|i| (i + 1..r).flat_map(move |j| (j + 1..r).map(move |k| (i, j, k))))
        .collect();
    let mut forms = vec![vec![0i64; r * r * r]];
    for &(i, j, k) in &triples {
        forms = forms
            .into_iter()
            .flat_map(|a| {
                (-a_bound..=a_bound).map(move |v| {
                    let mut a = a.clone();
                    for (p, q, s, sign) in [
                        (i, j, k, 1),
                        (j, i, k, -1),
                        (i, k, j, -1),
                        (j, k, i, 1),
                        (k, i, j, 1),
                        (k, j, i, -1),
                    ] {
                        a[idx3(r, p, q, s)] = sign * v;
                    }
                    a
                })
            })
            .collect();
    }
    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .collect();
    let q1s = all_vectors(&model.a1, pairs.len())?;
    let q2s = all_vectors(&model.a2, r)?;
    let mut out = Vec::new();
    for a in &forms {
        for upper in &q1s {
            let mut q1 = vec![model.a1.zero(); r * r];
            for (&(i, j), v) in pairs.iter().zip(upper) {
                q1[idx2(r, i, j)] = v.clone();
                q1[idx2(r, j, i)] = model.a1.neg(v);
            }
            for q2 in &q2s {
                out.push(TorusK3Data {
                    rank: r,
                    a: a.clone(),
                    q1: q1.clone(),
                    q2: q2.clone(),
                });
            }
        }
    }
    Some(out)
}

/// Every presentation with `a` entries in `0..a_range` and arbitrary finite
/// `f`, `g`.
pub fn enumerate_k3_classes(
    r: usize,
    model: &TorusModel,
    a_range: i64,
) -> Option<Vec<TorusK3Class>> {
    let mut avals = vec![Vec::new()];
    for _ in 0..r * r * r {
        avals = avals
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..a_range).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    let fs = all_vectors(&model.a1, r * r)?;
    let gs = all_vectors(&model.a2, r)?;
    let mut out = Vec::new();
    for a in &avals {
        for f in &fs {
            for g in &gs {
                out.push(TorusK3Class {
                    rank: r,
                    a: a.clone(),
                    f: f.clone(),
                    g: g.clone(),
                });
            }
        }
    }
    Some(out)
}

/// Counts of the exhaustive torus check: distinct normal forms of the
/// enumerated presentations, the order of the presentation group, and the
/// number of valid classification data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCount {
    pub presentations: usize,
    pub orbits: usize,
    pub presentation_group_order: Option<u128>,
    pub valid_data: usize,
    pub round_trip: bool,
    pub constant_on_orbits: bool,
}

impl OrbitCount {
    pub fn pass(&self) -> bool {
        self.round_trip
            && self.constant_on_orbits
            && self.orbits == self.valid_data
            && self.presentation_group_order == Some(self.valid_data as u128)
    }
}

/// Exhaustive comparison at a rank where `∧³` vanishes (`r ≤ 2`) and the
/// coefficient groups are finite.
pub fn exhaustive_k3_check(r: usize, model: &TorusModel) -> Option<OrbitCount> {
    if r > 2 {
        return None;
    }
    let classes = enumerate_k3_classes(r, model, 2)?;
    let data = enumerate_k3_data(r, model, 0)?;
    let mut normal = BTreeSet::new();
    let mut constant = true;
    for c in &classes {
        let n = normal_form(c, model);
        constant &= classify(c, model) == classify(&n, model);
        normal.insert(n);
    }
    let round_trip = data.iter().all(|d| {
        declassify(d, model).is_ok_and(|c| classify(&c, model) == *d && normal_form(&c, model) == c)
    }) && normal
        .iter()
        .all(|n| declassify(&classify(n, model), model).is_ok_and(|c| c == *n));
    Some(OrbitCount {
        presentations: classes.len(),
        orbits: normal.len(),
        presentation_group_order: k3_presentation_group(r, model).order(),
        valid_data: data.len(),
        round_trip,
        constant_on_orbits: constant,
    })
}

// ---------------------------------------------------------------------------
// 𝒦₂

/// A presentation `Σ a_ij eᵢ.eⱼ + Σ eᵢ.{fᵢ}` of a class in `H̃⁰(H, 𝒦₂)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusK2Class {
    pub rank: usize,
    pub a: Vec<i64>,
    pub f: Vec<Element>,
}

impl TorusK2Class {
    pub fn new(a1: &CoefficientGroup, rank: usize, a: Vec<i64>, f: Vec<Element>) -> Result<Self> {
        check_len(rank * rank, a.len())?;
        let f = check_elements(a1, &f, rank)?;
        Ok(TorusK2Class { rank, a, f })
    }

    pub fn zero(rank: usize, a1: &CoefficientGroup) -> Self {
        TorusK2Class {
            rank,
            a: vec![0; rank * rank],
            f: vec![a1.zero(); rank],
        }
    }

    /// `x.x = x.{−1}` with `x = Σ cᵢ eᵢ`: `a_ij += cᵢcⱼ`, `fᵢ += cᵢ·m1`.
    pub fn identify(&self, a1: &CoefficientGroup, c: &[i64]) -> Result<Self> {
        let r = self.rank;
        check_len(r, c.len())?;
        let mut out = self.clone();
        for i in 0..r {
            for j in 0..r {
                out.a[idx2(r, i, j)] += c[i] * c[j];
            }
            out.f[i] = a1.add(&out.f[i], &a1.scale(c[i], &a1.minus_one()));
        }
        Ok(out)
    }
}

/// `(A, q)` with `q` stored on the basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusK2Data {
    pub rank: usize,
    pub a: Vec<i64>,
    pub q: Vec<Element>,
}

impl TorusK2Data {
    pub fn validate(&self, a1: &CoefficientGroup) -> Result<()> {
        let r = self.rank;
        check_len(r * r, self.a.len())?;
        check_elements(a1, &self.q, r)?;
        for i in 0..r {
            for j in 0..r {
                if self.a[idx2(r, i, j)] != -self.a[idx2(r, j, i)] {
                    return Err(Error::InvalidTorusData("A is not alternating".into()));
                }
            }
        }
        Ok(())
    }

    pub fn eval_a(&self, x: &[i64], y: &[i64]) -> i64 {
        let r = self.rank;
        (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| self.a[idx2(r, i, j)] * x[i] * y[j])
            .sum()
    }

    /// `q` at an arbitrary argument, extended by `q(x+y) = q(x) + q(y) + A(x,y)·m1`.
    pub fn eval_q(&self, a1: &CoefficientGroup, x: &[i64]) -> Result<Element> {
        let c = declassify_k2(self, a1)?;
        Ok(k2_q_of(&c, a1, x))
    }
}

fn k2_q_of(c: &TorusK2Class, a1: &CoefficientGroup, x: &[i64]) -> Element {
    let r = c.rank;
    let axx: i64 = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .map(|(i, j)| c.a[idx2(r, i, j)] * x[i] * x[j])
        .sum();
    a1.add(&eval1(a1, &c.f, x), &a1.scale(axx, &a1.minus_one()))
}

/// `A = a − aᵀ`, `q(x) = f(x) + a(x, x)·m1`.
pub fn classify_k2(c: &TorusK2Class, a1: &CoefficientGroup) -> TorusK2Data {
    let r = c.rank;
    let mut a = vec![0; r * r];
    for i in 0..r {
        for j in 0..r {
            a[idx2(r, i, j)] = c.a[idx2(r, i, j)] - c.a[idx2(r, j, i)];
        }
    }
    TorusK2Data {
        rank: r,
        a,
        q: (0..r).map(|i| k2_q_of(c, a1, &basis(r, i))).collect(),
    }
}

/// `a` strictly upper triangular, `f = q` on the basis.
pub fn declassify_k2(d: &TorusK2Data, a1: &CoefficientGroup) -> Result<TorusK2Class> {
    d.validate(a1)?;
    let r = d.rank;
    let mut c = TorusK2Class::zero(r, a1);
    for i in 0..r {
        for j in i + 1..r {
            c.a[idx2(r, i, j)] = d.a[idx2(r, i, j)];
        }
        c.f[i] = d.q[i].clone();
    }
    Ok(c)
}

pub fn normal_form_k2(c: &TorusK2Class, a1: &CoefficientGroup) -> TorusK2Class {
    let r = c.rank;
    let mut out = c.clone();
    for i in 0..r {
        let v = out.a[idx2(r, i, i)];
        out.a[idx2(r, i, i)] = 0;
        out.f[i] = a1.add(&out.f[i], &a1.scale(-v, &a1.minus_one()));
        for j in 0..i {
            let v = out.a[idx2(r, i, j)];
            out.a[idx2(r, i, j)] = 0;
            out.a[idx2(r, j, i)] -= v;
        }
    }
    out
}

/// `H̃⁰(H, 𝒦₂)` for a torus of rank `r`.
pub fn k2_presentation_group(r: usize, a1: &CoefficientGroup) -> CohomologyGroup {
    let d1 = a1.dim();
    let f_off = r * r;
    let rows = f_off + r * d1;
    let mut rel = Vec::new();
    let m1 = a1.minus_one();
    for i in 0..r {
        torsion_relations(a1, f_off + i * d1, rows, &mut rel);
        let mut v = vec![0; rows];
        v[idx2(r, i, i)] = 1;
        for (k, &c) in m1.iter().enumerate() {
            v[f_off + i * d1 + k] += c;
        }
        rel.push(v);
        for j in i + 1..r {
            let mut v = vec![0; rows];
            v[idx2(r, i, j)] = 1;
            v[idx2(r, j, i)] = 1;
            rel.push(v);
        }
    }
    cokernel(rows, &rel)
}

// ---------------------------------------------------------------------------
// Degree-zero report

/// `H̃⁰(H₀, 𝒦ₙ)` of the central torus: a concrete group in a field model, a
/// description otherwise.
pub fn torus_h0_piece(sheaf: Sheaf, torus_rank: usize, model: &Model) -> Piece {
    let r = torus_rank;
    let provenance: Vec<String> = (1..=sheaf.weight())
        .map(|k| format!("E1({},{k})", -k))
        .chain(std::iter::once("torus classification".to_string()))
        .collect();
    let value = match (model, sheaf) {
        (Model::Field(f), Sheaf::K2) => group_value(k2_presentation_group(r, &f.units)),
        (Model::Field(f), Sheaf::K3) => group_value(k3_presentation_group(r, &TorusModel::from_field(f))),
        (Model::Symbolic, Sheaf::K2) => PieceValue::Structure {
            description: format!(
                "alternating forms A on Y0 (rank {}) with quadratic refinements q into k^× (X0 ⊗ k^×, rank {r})",
                binomial(r, 2)
            ),
        },
        (Model::Symbolic, Sheaf::K3) => PieceValue::Structure {
            description: format!(
                "alternating 3-forms A on Y0 (rank {}) with refinements q1 (∧²X0 ⊗ k^×, rank {}) and q2 (X0 ⊗ K2(k), rank {r})",
                binomial(r, 3),
                binomial(r, 2)
            ),
        },
    };
    Piece {
        name: "reduced H0 of the central torus".to_string(),
        value,
        provenance,
    }
}

/// `H⁰(G, 𝒦ₙ) = K_n(k) ⊕ H̃⁰(H₀, 𝒦ₙ)`.
pub fn h0_report(spec: &GroupSpec, sheaf: Sheaf, model: &Model) -> DegreeEntry {
    let top = Slot::from_index(sheaf.weight());
    let mut pieces = vec![piece(
        top.symbol(),
        tensor_value(CohomologyGroup::free(1), top, model),
        &["E1(0,0)"],
    )];
    if spec.torus_rank() > 0 {
        pieces.push(torus_h0_piece(sheaf, spec.torus_rank(), model));
    }
    DegreeEntry::new(0, pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `A1 = Z/2` with `m1 = 1`, `A2 = Z/2`, `β(x, y) = xy`.
    fn real_like() -> TorusModel {
        let a1 = CoefficientGroup::new(CohomologyGroup::cyclic(2), Some(vec![1])).unwrap();
        let a2 = CoefficientGroup::cyclic(2);
        let beta =
            BilinearMap::new(a1.clone(), a1.clone(), a2.clone(), vec![vec![vec![1]]]).unwrap();
        TorusModel::new(a1, a2, beta).unwrap()
    }

    /// `A1 = Z/4` with `m1 = 2`, `A2 = Z/2`, `β(x, y) = xy mod 2`.
    fn z4_model() -> TorusModel {
        let a1 = CoefficientGroup::new(CohomologyGroup::cyclic(4), Some(vec![2])).unwrap();
        let a2 = CoefficientGroup::cyclic(2);
        let beta =
            BilinearMap::new(a1.clone(), a1.clone(), a2.clone(), vec![vec![vec![1]]]).unwrap();
        TorusModel::new(a1, a2, beta).unwrap()
    }

    /// `A1 = A2 = Z/2`, `m1 = 0`, `β(x, y) = xy`.
    fn split_model() -> TorusModel {
        let a1 = CoefficientGroup::new(CohomologyGroup::cyclic(2), Some(vec![0])).unwrap();
        let a2 = CoefficientGroup::cyclic(2);
        let beta =
            BilinearMap::new(a1.clone(), a1.clone(), a2.clone(), vec![vec![vec![1]]]).unwrap();
        TorusModel::new(a1, a2, beta).unwrap()
    }

    #[test]
    fn rank_one_example() {
        let m = real_like();
        let c = TorusK3Class::new(&m, 1, vec![1], vec![vec![1]], vec![vec![0]]).unwrap();
        let d = classify(&c, &m);
        assert_eq!(d.a, vec![0]);
        assert_eq!(d.q1, vec![vec![0]]);
        // β(m1, f) = 1 and a(e,e,e)·β(m1, m1) = 1 cancel.
        assert_eq!(d.q2, vec![vec![0]]);
        let c = TorusK3Class::new(&m, 1, vec![0], vec![vec![1]], vec![vec![0]]).unwrap();
        assert_eq!(classify(&c, &m).q2, vec![vec![1]]);
    }

    #[test]
    fn symmetric_a_is_cleared() {
        let m = split_model();
        let mut c = TorusK3Class::zero(3, &m);
        c.a[idx3(3, 0, 1, 2)] = 2;
        c.a[idx3(3, 1, 0, 2)] = 2;
        let n = normal_form(&c, &m);
        assert!(n.a.iter().all(|&v| v == 0));
        assert_eq!(normal_form(&n, &m), n);
    }

    #[test]
    fn basis_three_form_round_trip() {
        let m = real_like();
        let mut a = vec![0; 27];
        for (p, s) in [
            ((0, 1, 2), 1),
            ((1, 0, 2), -1),
            ((0, 2, 1), -1),
            ((1, 2, 0), 1),
            ((2, 0, 1), 1),
            ((2, 1, 0), -1),
        ] {
            a[idx3(3, p.0, p.1, p.2)] = s;
        }
        let d = TorusK3Data {
            rank: 3,
            a,
            q1: vec![vec![0]; 9],
            q2: vec![vec![0]; 3],
        };
        let c = declassify(&d, &m).unwrap();
        let mut expected = vec![0; 27];
        expected[idx3(3, 0, 1, 2)] = 1;
        assert_eq!(c.a, expected);
        assert_eq!(classify(&c, &m), d);
    }

    #[test]
    fn exhaustive_counts() {
        for (r, m) in [
            (2, split_model()),
            (2, real_like()),
            (1, z4_model()),
            (2, z4_model()),
        ] {
            let c = exhaustive_k3_check(r, &m).unwrap();
            assert!(c.pass(), "{c:?}");
        }
        let c = exhaustive_k3_check(2, &real_like()).unwrap();
        assert_eq!(c.valid_data, 8);
    }

    #[test]
    fn finite_field_groups() {
        let f5 = FieldModel::finite(5).unwrap();
        let m = TorusModel::from_field(&f5);
        assert!(k3_presentation_group(1, &m).is_zero());
        assert_eq!(k3_presentation_group(2, &m), CohomologyGroup::cyclic(4));
        assert_eq!(
            k3_presentation_group(3, &m),
            CohomologyGroup::new(1, &[4, 4, 4])
        );
        assert_eq!(
            k2_presentation_group(1, &f5.units),
            CohomologyGroup::cyclic(4)
        );
        assert_eq!(
            k2_presentation_group(2, &f5.units),
            CohomologyGroup::new(1, &[4, 4])
        );
    }

    #[test]
    fn k2_examples() {
        let a1 = CoefficientGroup::new(CohomologyGroup::cyclic(4), Some(vec![2])).unwrap();
        let c = TorusK2Class::new(&a1, 1, vec![0], vec![vec![3]]).unwrap();
        let d = classify_k2(&c, &a1);
        assert_eq!((d.a.clone(), d.q.clone()), (vec![0], vec![vec![3]]));
        assert!(classify_k2(&TorusK2Class::zero(2, &a1), &a1)
            .q
            .iter()
            .all(|v| a1.is_zero(v)));
    }

    fn class_strategy(m: TorusModel) -> impl Strategy<Value = (TorusModel, TorusK3Class)> {
        (1usize..=3).prop_flat_map(move |r| {
            let m = m.clone();
            let n1 = m.a1.group.torsion[0] as i64;
            let n2 = m.a2.group.torsion[0] as i64;
            (
                prop::collection::vec(-3i64..3, r * r * r),
                prop::collection::vec(0..n1, r * r),
                prop::collection::vec(0..n2, r),
            )
                .prop_map(move |(a, f, g)| {
                    let c = TorusK3Class {
                        rank: r,
                        a,
                        f: f.into_iter().map(|x| vec![x]).collect(),
                        g: g.into_iter().map(|x| vec![x]).collect(),
                    };
                    (m.clone(), c)
                })
        })
    }

    fn ident_strategy(r: usize, n1: i64) -> impl Strategy<Value = Identification> {
        (prop::collection::vec(-2i64..3, r), 0..r, 0..n1, 0..3usize).prop_map(|(c, k, h, which)| {
            match which {
                0 => Identification::First { c, k },
                1 => Identification::Second { c, i: k },
                _ => Identification::Third { c, h: vec![h] },
            }
        })
    }

    fn models() -> impl Strategy<Value = TorusModel> {
        prop_oneof![Just(real_like()), Just(z4_model()), Just(split_model())]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn classify_is_constant_on_orbits(
            (m, c, ident) in models()
                .prop_flat_map(class_strategy)
                .prop_flat_map(|(m, c)| {
                    let n1 = m.a1.group.torsion[0] as i64;
                    let r = c.rank;
                    (Just(m), Just(c), ident_strategy(r, n1))
                })
        ) {
            let moved = apply_identification(&c, &m, &ident).unwrap();
            prop_assert_eq!(classify(&c, &m), classify(&moved, &m));
            prop_assert_eq!(normal_form(&c, &m), normal_form(&moved, &m));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn normal_form_is_the_section((m, c) in models().prop_flat_map(class_strategy)) {
            let d = classify(&c, &m);
            prop_assert!(d.validate(&m).is_ok());
            let n = normal_form(&c, &m);
            prop_assert_eq!(&declassify(&d, &m).unwrap(), &n);
            prop_assert_eq!(classify(&n, &m), d.clone());
            prop_assert_eq!(normal_form(&n, &m), n);
        }

        #[test]
        fn defect_relations(
            (m, c) in models().prop_flat_map(class_strategy),
            xs in prop::collection::vec(-3i64..4, 9),
        ) {
            let r = c.rank;
            let d = classify(&c, &m);
            let (x, y, z) = (&xs[0..r], &xs[3..3 + r], &xs[6..6 + r]);
            let xy: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            let g1 = &m.a1;
            let lhs = g1.sub(
                &g1.sub(&d.eval_q1(&m, &xy, z).unwrap(), &d.eval_q1(&m, x, z).unwrap()),
                &d.eval_q1(&m, y, z).unwrap(),
            );
            prop_assert_eq!(lhs, g1.scale(d.eval_a(x, y, z), &m.m1()));
            prop_assert!(g1.is_zero(&g1.add(&d.eval_q1(&m, x, y).unwrap(), &d.eval_q1(&m, y, x).unwrap())));
            let g2 = &m.a2;
            let lhs = g2.sub(
                &g2.sub(&d.eval_q2(&m, &xy).unwrap(), &d.eval_q2(&m, x).unwrap()),
                &d.eval_q2(&m, y).unwrap(),
            );
            prop_assert_eq!(lhs, m.beta.eval(&m.m1(), &d.eval_q1(&m, x, y).unwrap()));
        }

        #[test]
        fn classify_is_additive(
            ((m, c1), seed) in models().prop_flat_map(class_strategy).prop_flat_map(|p| (Just(p), any::<u64>()))
        ) {
            // Second class: a shuffled variant of the first.
            let mut c2 = c1.clone();
            let n = c2.a.len();
            c2.a.rotate_left((seed as usize) % n);
            c2.f.reverse();
            let sum = c1.add(&c2, &m);
            let (d1, d2, ds) = (classify(&c1, &m), classify(&c2, &m), classify(&sum, &m));
            let a: Vec<i64> = d1.a.iter().zip(&d2.a).map(|(x, y)| x + y).collect();
            prop_assert_eq!(ds.a, a);
            for k in 0..ds.q1.len() {
                prop_assert_eq!(&ds.q1[k], &m.a1.add(&d1.q1[k], &d2.q1[k]));
            }
            for k in 0..ds.q2.len() {
                prop_assert_eq!(&ds.q2[k], &m.a2.add(&d1.q2[k], &d2.q2[k]));
            }
        }

        #[test]
        fn k2_moves_and_relation(
            r in 1usize..=3,
            a in prop::collection::vec(-3i64..4, 9),
            f in prop::collection::vec(0i64..4, 3),
            c in prop::collection::vec(-2i64..3, 3),
            xs in prop::collection::vec(-3i64..4, 6),
        ) {
            let a1 = CoefficientGroup::new(CohomologyGroup::cyclic(4), Some(vec![2])).unwrap();
            let class = TorusK2Class::new(
                &a1, r, a[..r * r].to_vec(), f[..r].iter().map(|&v| vec![v]).collect()).unwrap();
            let d = classify_k2(&class, &a1);
            let moved = class.identify(&a1, &c[..r]).unwrap();
            prop_assert_eq!(classify_k2(&moved, &a1), d.clone());
            prop_assert_eq!(normal_form_k2(&moved, &a1), normal_form_k2(&class, &a1));
            prop_assert_eq!(declassify_k2(&d, &a1).unwrap(), normal_form_k2(&class, &a1));
            let (x, y) = (&xs[..r], &xs[3..3 + r]);
            let xy: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            let lhs = a1.sub(&a1.sub(&d.eval_q(&a1, &xy).unwrap(), &d.eval_q(&a1, x).unwrap()), &d.eval_q(&a1, y).unwrap());
            prop_assert_eq!(lhs, a1.scale(d.eval_a(x, y), &a1.minus_one()));
        }
    }
}
