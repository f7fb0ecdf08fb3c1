//! Lattices of W-invariant quadratic and cubic forms on the cocharacter
//! lattice, computed as integer kernels of linear systems.
//!
//! Forms are integer polynomials in the coordinates of `Y` (coroot basis
//! followed by the central basis). A quadratic form is stored as an
//! upper-triangular matrix `C` with `q(y) = C(y, y)`. A cubic form is stored by
//! its coefficients: `c_m` on `y_m³`, `B_mn` on `y_m² y_n` (`m ≠ n`) and
//! `T_lmn` on `y_l y_m y_n` (`l < m < n`). With `B(x, y)` the part of
//! `C(x + y) − C(x) − C(y)` of degree two in `x` and `T` its polarization,
//! these are exactly `B(e_m, e_n)` and `T(e_l, e_m, e_n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{GroupSpec, RootDatum};
use crate::zchain::{kernel_basis, CohomologyGroup, ZMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Restrict {
    /// `Y_der` only.
    Derived,
    /// `Y = Y_der ⊕ Y₀`.
    Full,
}

/// Lattice on which forms live: rank and the linear forms `α_i` on it.
struct FormLattice {
    rank: usize,
    derived_rank: usize,
    /// `roots[i][m] = α_i(e_m)`.
    roots: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl FormLattice {
    fn new(spec: &GroupSpec, restrict: Restrict) -> Self {
        let rd = RootDatum::new(spec);
        let derived_rank = rd.derived_rank();
        let rank = match restrict {
            Restrict::Derived => derived_rank,
            Restrict::Full => rd.rank(),
        };
        let roots = (0..derived_rank)
            .map(|i| {
                (0..rank)
                    .map(|m| if m < derived_rank { rd.alpha(i, m) } else { 0 })
                    .collect()
            })
            .collect();
        FormLattice {
            rank,
            derived_rank,
            roots,
            labels: basis_labels(derived_rank, rank),
        }
    }
}

fn join_terms(terms: impl IntoIterator<Item = (i64, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let sign = if c < 0 { "-" } else { "+" };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `α1∨, α2∨, …` for the coroot part and `ε1, ε2, …` for `Y₀`.
pub fn basis_labels(derived_rank: usize, rank: usize) -> Vec<String> {
    (0..rank)
        .map(|m| {
            if m < derived_rank {
                format!("α{}∨", m + 1)
            } else {
                format!("ε{}", m - derived_rank + 1)
            }
        })
        .collect()
}

fn kernel_vectors(rows: Vec<Vec<i64>>, unknowns: usize) -> Vec<Vec<i64>> {
    let m = ZMatrix::from_rows(&rows, unknowns);
    let k = kernel_basis(&m);
    (0..k.cols())
        .map(|j| {
            k.column(j)
                .iter()
                .map(|v| i64::try_from(v).expect("small kernel entries"))
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Quadratic forms

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticFormW {
    /// Upper-triangular; `c[i][i]` is the coefficient of `y_i²`, `c[i][j]`
    /// (`i < j`) that of `y_i y_j`.
    pub c: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

fn quad_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

impl QuadraticFormW {
    fn from_coords(n: usize, v: &[i64], labels: Vec<String>) -> Self {
        let mut c = vec![vec![0; n]; n];
        for (k, (i, j)) in quad_index(n).into_iter().enumerate() {
            c[i][j] = v[k];
        }
        QuadraticFormW { c, labels }
    }

    pub fn rank(&self) -> usize {
        self.c.len()
    }

    pub fn eval(&self, y: &[i64]) -> i64 {
        let n = self.rank();
        (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .map(|(i, j)| self.c[i][j] * y[i] * y[j])
            .sum()
    }

    /// The form as a polynomial in the coordinates `y1, y2, …` on the
    /// basis `labels`.
    pub fn polynomial(&self) -> String {
        let n = self.rank();
        let terms = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let c = self.c[i][j];
                let mono = if i == j {
                    format!("y{}²", i + 1)
                } else {
                    format!("y{}y{}", i + 1, j + 1)
                };
                (c != 0).then_some((c, mono))
            });
        join_terms(terms)
    }

    /// `q(x + y) − q(x) − q(y)`.
    pub fn polar(&self, x: &[i64], y: &[i64]) -> i64 {
        let s: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.eval(&s) - self.eval(x) - self.eval(y)
    }
}

/// Coefficient of `q_(a,b)` in `B(e_m, e_n)`.
fn quad_polar_coeff(m: usize, n: usize, a: usize, b: usize) -> i64 {
    let (lo, hi) = (m.min(n), m.max(n));
    match (m == n, (lo, hi) == (a, b)) {
        (true, true) => 2,
        (false, true) => 1,
        _ => 0,
    }
}

/// `B(e_m, α_i∨) = α_i(e_m)·q(α_i∨)` for every simple `i` and basis `m`.
fn quad_invariance_rows(lat: &FormLattice) -> Vec<Vec<i64>> {
    let idx = quad_index(lat.rank);
    let mut rows = Vec::new();
    for i in 0..lat.derived_rank {
        for m in 0..lat.rank {
            let row: Vec<i64> = idx
                .iter()
                .map(|&(a, b)| {
                    let lhs = quad_polar_coeff(m, i, a, b);
                    let rhs = if (a, b) == (i, i) { lat.roots[i][m] } else { 0 };
                    lhs - rhs
                })
                .collect();
            if row.iter().any(|&v| v != 0) {
                rows.push(row);
            }
        }
    }
    rows
}

/// Closedness `C(α_i∨, α_j∨) + C(α_j∨, s_j α_i∨) = 0` on the upper-triangular
/// representative, for distinct simple `i, j`.
fn quad_closedness_rows(lat: &FormLattice) -> Vec<Vec<i64>> {
    let n = lat.derived_rank;
    let idx = quad_index(n);
    let pos = |a: usize, b: usize| idx.iter().position(|&p| p == (a, b));
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // C_ij + C_ji − α_j(α_i∨)·C_jj, with C_ab = 0 below the diagonal.
            let mut row = vec![0; idx.len()];
            if let Some(k) = pos(i, j) {
                row[k] += 1;
            }
            if let Some(k) = pos(j, i) {
                row[k] += 1;
            }
            row[pos(j, j).unwrap()] -= lat.roots[j][i];
            rows.push(row);
        }
    }
    rows
}

fn quad_basis_from(lat: &FormLattice, rows: Vec<Vec<i64>>) -> Vec<QuadraticFormW> {
    let unknowns = quad_index(lat.rank).len();
    kernel_vectors(rows, unknowns)
        .iter()
        .map(|v| QuadraticFormW::from_coords(lat.rank, v, lat.labels.clone()))
        .collect()
}

/// Integral basis of W-invariant quadratic forms.
pub fn quadratic_invariant_basis(spec: &GroupSpec, restrict: Restrict) -> Vec<QuadraticFormW> {
    let lat = FormLattice::new(spec, restrict);
    let rows = quad_invariance_rows(&lat);
    quad_basis_from(&lat, rows)
}

/// The same lattice on `Y_der`, from the closedness equations instead of
/// the invariance system.
pub fn quadratic_basis_by_closedness(spec: &GroupSpec) -> Vec<QuadraticFormW> {
    let lat = FormLattice::new(spec, Restrict::Derived);
    let rows = quad_closedness_rows(&lat);
    quad_basis_from(&lat, rows)
}

pub fn is_w_invariant_quadratic(spec: &GroupSpec, q: &QuadraticFormW, y: &[i64]) -> bool {
    let rd = RootDatum::new(spec);
    (0..rd.derived_rank()).all(|i| {
        let mut s = y.to_vec();
        s[i] -= rd.root_value(i, y);
        q.eval(&s) == q.eval(y)
    })
}

// ---------------------------------------------------------------------------
// Cubic forms

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubicFormW {
    /// Coefficient of `y_m³`.
    #[serde(rename = "Cdiag")]
    pub cdiag: Vec<i64>,
    /// `B[m][n]`: coefficient of `y_m² y_n`; zero diagonal.
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    /// Nonzero `[l, m, n, T_lmn]` with `l < m < n`.
    #[serde(rename = "T")]
    pub t: Vec<[i64; 4]>,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CubicCoord {
    C(usize),
    B(usize, usize),
    T(usize, usize, usize),
}

fn cubic_index(n: usize) -> Vec<CubicCoord> {
    let mut v: Vec<CubicCoord> = (0..n).map(CubicCoord::C).collect();
    for m in 0..n {
        for k in 0..n {
            if m != k {
                v.push(CubicCoord::B(m, k));
            }
        }
    }
    for l in 0..n {
        for m in l + 1..n {
            for k in m + 1..n {
                v.push(CubicCoord::T(l, m, k));
            }
        }
    }
    v
}

/// Coefficient vector (over `cubic_index`) of the value `B(e_m, e_n)`.
fn b_value(idx: &[CubicCoord], m: usize, n: usize) -> Vec<i64> {
    idx.iter()
        .map(|&c| match c {
            CubicCoord::C(k) if m == n && k == m => 3,
            CubicCoord::B(a, b) if m != n && (a, b) == (m, n) => 1,
            _ => 0,
        })
        .collect()
}

/// Coefficient vector of `T(e_l, e_m, e_n)` (symmetric in its arguments).
fn t_value(idx: &[CubicCoord], l: usize, m: usize, n: usize) -> Vec<i64> {
    let mut s = [l, m, n];
    s.sort_unstable();
    let [a, b, c] = s;
    if a == c {
        return idx
            .iter()
            .map(|&x| if x == CubicCoord::C(a) { 6 } else { 0 })
            .collect();
    }
    if a == b || b == c {
        // T(x, x, z) = 2 B(x, z).
        let (x, z) = if a == b { (a, c) } else { (c, a) };
        return b_value(idx, x, z).iter().map(|v| 2 * v).collect();
    }
    idx.iter()
        .map(|&x| i64::from(x == CubicCoord::T(a, b, c)))
        .collect()
}

fn axpy(acc: &mut [i64], k: i64, v: &[i64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += k * b;
    }
}

/// `W`-invariance for every simple `i`:
/// `C(α_i∨) = 0`, `−B(e_m, α_i∨) + α_i(e_m)·B(α_i∨, e_m) = 0`, and for
/// `m < n`: `−T(e_m, e_n, α_i∨) + α_i(e_m)·B(α_i∨, e_n) + α_i(e_n)·B(α_i∨, e_m) = 0`.
fn cubic_invariance_rows(lat: &FormLattice) -> Vec<Vec<i64>> {
    let idx = cubic_index(lat.rank);
    let mut rows = Vec::new();
    let mut push = |r: Vec<i64>| {
        if r.iter().any(|&v| v != 0) {
            rows.push(r);
        }
    };
    for i in 0..lat.derived_rank {
        let a = &lat.roots[i];
        push(
            idx.iter()
                .map(|&x| i64::from(x == CubicCoord::C(i)))
                .collect(),
        );
        for m in 0..lat.rank {
            let mut row = vec![0; idx.len()];
            axpy(&mut row, -1, &b_value(&idx, m, i));
            axpy(&mut row, a[m], &b_value(&idx, i, m));
            push(row);
        }
        for m in 0..lat.rank {
            for n in m + 1..lat.rank {
                let mut row = vec![0; idx.len()];
                axpy(&mut row, -1, &t_value(&idx, m, n, i));
                axpy(&mut row, a[m], &b_value(&idx, i, n));
                axpy(&mut row, a[n], &b_value(&idx, i, m));
                push(row);
            }
        }
    }
    rows
}

/// The finite conditions on simple coroots: `C(α_i∨) = 0`;
/// `B(α_j∨, α_i∨) = α_i(α_j∨)·B(α_i∨, α_j∨)`; for distinct `i, j, k`:
/// `T(α_i∨, α_j∨, α_k∨) = 0` and
/// `α_i(α_j∨)·B(α_i∨, α_k∨) + α_i(α_k∨)·B(α_i∨, α_j∨) = 0`.
fn cubic_coroot_rows(lat: &FormLattice) -> Vec<Vec<i64>> {
    let n = lat.derived_rank;
    let idx = cubic_index(n);
    let alpha = |i: usize, j: usize| lat.roots[i][j];
    let mut rows = Vec::new();
    for i in 0..n {
        rows.push(
            idx.iter()
                .map(|&x| i64::from(x == CubicCoord::C(i)))
                .collect(),
        );
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut row = b_value(&idx, j, i);
            axpy(&mut row, -alpha(i, j), &b_value(&idx, i, j));
            rows.push(row);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                rows.push(t_value(&idx, i, j, k));
                let mut row = vec![0; idx.len()];
                axpy(&mut row, alpha(i, j), &b_value(&idx, i, k));
                axpy(&mut row, alpha(i, k), &b_value(&idx, i, j));
                rows.push(row);
            }
        }
    }
    rows.retain(|r: &Vec<i64>| r.iter().any(|&v| v != 0));
    rows
}

impl CubicFormW {
    fn from_coords(n: usize, v: &[i64], labels: Vec<String>) -> Self {
        let mut f = CubicFormW {
            cdiag: vec![0; n],
            b: vec![vec![0; n]; n],
            t: Vec::new(),
            labels,
        };
        for (k, c) in cubic_index(n).into_iter().enumerate() {
            match c {
                CubicCoord::C(m) => f.cdiag[m] = v[k],
                CubicCoord::B(m, l) => f.b[m][l] = v[k],
                CubicCoord::T(a, b, c) => {
                    if v[k] != 0 {
                        f.t.push([a as i64, b as i64, c as i64, v[k]]);
                    }
                }
            }
        }
        f
    }

    pub fn zero(n: usize) -> Self {
        CubicFormW::from_coords(n, &vec![0; cubic_index(n).len()], basis_labels(n, n))
    }

    pub fn rank(&self) -> usize {
        self.cdiag.len()
    }

    /// Coordinates over the fixed coefficient order (`c`, then `B` row-major
    /// off the diagonal, then `T` lexicographic).
    pub fn coords(&self) -> Vec<i64> {
        cubic_index(self.rank())
            .into_iter()
            .map(|c| match c {
                CubicCoord::C(m) => self.cdiag[m],
                CubicCoord::B(m, l) => self.b[m][l],
                CubicCoord::T(a, b, c) => self.t_coeff(a, b, c),
            })
            .collect()
    }

    fn t_coeff(&self, a: usize, b: usize, c: usize) -> i64 {
        self.t
            .iter()
            .find(|e| e[..3] == [a as i64, b as i64, c as i64])
            .map_or(0, |e| e[3])
    }

    /// `B(e_m, e_n)`.
    pub fn b_basis(&self, m: usize, n: usize) -> i64 {
        if m == n {
            3 * self.cdiag[m]
        } else {
            self.b[m][n]
        }
    }

    /// `T(e_l, e_m, e_n)`.
    pub fn t_basis(&self, l: usize, m: usize, n: usize) -> i64 {
        let mut s = [l, m, n];
        s.sort_unstable();
        let [a, b, c] = s;
        if a == c {
            6 * self.cdiag[a]
        } else if a == b {
            2 * self.b_basis(a, c)
        } else if b == c {
            2 * self.b_basis(c, a)
        } else {
            self.t_coeff(a, b, c)
        }
    }

    /// `B(x, z)` expanded by the relation
    /// `B(x₁ + x₂, z) = B(x₁, z) + B(x₂, z) + T(x₁, x₂, z)` and linearity in `z`.
    pub fn b_form(&self, x: &[i64], z: &[i64]) -> i64 {
        let n = self.rank();
        let mut total = 0;
        for k in 0..n {
            if z[k] == 0 {
                continue;
            }
            let mut s = 0;
            for m in 0..n {
                s += x[m] * x[m] * self.b_basis(m, k);
                for l in m + 1..n {
                    s += x[m] * x[l] * self.t_basis(m, l, k);
                }
            }
            total += z[k] * s;
        }
        total
    }

    /// `C(y)` by adding one coordinate at a time in the given order, with
    /// `C(x + y) = C(x) + C(y) + B(x, y) + B(y, x)`.
    pub fn evaluate_in_order(&self, y: &[i64], order: &[usize]) -> i64 {
        let n = self.rank();
        let mut acc = vec![0; n];
        let mut value = 0;
        for &k in order {
            let mut step = vec![0; n];
            step[k] = y[k];
            value +=
                y[k].pow(3) * self.cdiag[k] + self.b_form(&acc, &step) + self.b_form(&step, &acc);
            acc[k] = y[k];
        }
        value
    }

    /// The form as a polynomial in `y1, y2, …`.
    pub fn polynomial(&self) -> String {
        let n = self.rank();
        let mut terms = Vec::new();
        for m in 0..n {
            if self.cdiag[m] != 0 {
                terms.push((self.cdiag[m], format!("y{}³", m + 1)));
            }
            for k in 0..n {
                if k != m && self.b[m][k] != 0 {
                    let mono = if m < k {
                        format!("y{}²y{}", m + 1, k + 1)
                    } else {
                        format!("y{}y{}²", k + 1, m + 1)
                    };
                    terms.push((self.b[m][k], mono));
                }
            }
        }
        for &[l, m, k, c] in &self.t {
            terms.push((c, format!("y{}y{}y{}", l + 1, m + 1, k + 1)));
        }
        join_terms(terms)
    }

    /// Direct evaluation of the polynomial.
    pub fn eval_polynomial(&self, y: &[i64]) -> i64 {
        let n = self.rank();
        let mut v: i64 = (0..n).map(|m| self.cdiag[m] * y[m].pow(3)).sum();
        for m in 0..n {
            for l in 0..n {
                v += self.b[m][l] * y[m] * y[m] * y[l];
            }
        }
        for e in &self.t {
            v += e[3] * y[e[0] as usize] * y[e[1] as usize] * y[e[2] as usize];
        }
        v
    }

    pub fn add(&self, other: &CubicFormW) -> CubicFormW {
        let v: Vec<i64> = self
            .coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| a + b)
            .collect();
        CubicFormW::from_coords(self.rank(), &v, self.labels.clone())
    }
}

pub fn evaluate_cubic(f: &CubicFormW, y: &[i64]) -> Result<i64> {
    if y.len() != f.rank() {
        return Err(Error::DimensionMismatch {
            expected: f.rank(),
            got: y.len(),
        });
    }
    let order: Vec<usize> = (0..f.rank()).collect();
    Ok(f.evaluate_in_order(y, &order))
}

fn cubic_basis_from(lat: &FormLattice, rows: Vec<Vec<i64>>) -> Vec<CubicFormW> {
    let unknowns = cubic_index(lat.rank).len();
    kernel_vectors(rows, unknowns)
        .iter()
        .map(|v| CubicFormW::from_coords(lat.rank, v, lat.labels.clone()))
        .collect()
}

/// Integral basis of W-invariant cubic forms. On `Y_der` the finite
/// conditions on simple coroots are imposed; on the full lattice the
/// general invariance system is used, which also fixes the mixed
/// derived/central coefficients.
pub fn cubic_invariant_basis(spec: &GroupSpec, restrict: Restrict) -> Vec<CubicFormW> {
    let lat = FormLattice::new(spec, restrict);
    let rows = match restrict {
        Restrict::Derived => cubic_coroot_rows(&lat),
        Restrict::Full => cubic_invariance_rows(&lat),
    };
    cubic_basis_from(&lat, rows)
}

/// Basis from the general invariance system, for comparison with
/// [`cubic_invariant_basis`].
pub fn cubic_basis_by_invariance(spec: &GroupSpec, restrict: Restrict) -> Vec<CubicFormW> {
    let lat = FormLattice::new(spec, restrict);
    let rows = cubic_invariance_rows(&lat);
    cubic_basis_from(&lat, rows)
}

/// `C(s_i y) = C(y)` for every simple reflection, by direct evaluation.
pub fn is_w_invariant_cubic(spec: &GroupSpec, f: &CubicFormW, y: &[i64]) -> bool {
    let rd = RootDatum::new(spec);
    (0..rd.derived_rank()).all(|i| {
        let mut s = y.to_vec();
        s[i] -= rd.root_value(i, y);
        f.eval_polynomial(&s) == f.eval_polynomial(y)
    })
}

/// Checks the coroot conditions defining a W-invariant cubic form.
pub fn satisfies_coroot_conditions(spec: &GroupSpec, f: &CubicFormW) -> bool {
    let rd = RootDatum::new(spec);
    let n = rd.derived_rank();
    let alpha = |i: usize, j: usize| rd.alpha(i, j);
    (0..n).all(|i| f.cdiag[i] == 0)
        && (0..n).all(|i| {
            (0..n).filter(|&j| j != i).all(|j| {
                f.b_basis(j, i) == alpha(i, j) * f.b_basis(i, j)
                    && (0..n).filter(|&k| k != i && k != j).all(|k| {
                        f.t_basis(i, j, k) == 0
                            && alpha(i, j) * f.b_basis(i, k) + alpha(i, k) * f.b_basis(i, j) == 0
                    })
            })
        })
}

/// `Quad_W(Y_der) ⊗ X₀`: free of rank `#factors · r`.
pub fn quadlin_space(spec: &GroupSpec) -> CohomologyGroup {
    CohomologyGroup::free(spec.factors().len() * spec.torus_rank())
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Expected rank of `Cubic_W(Y)`: derived part, `Quad_W(Y_der) ⊗ X₀`, and
/// `Sym³(X₀)`.
pub fn expected_full_cubic_rank(spec: &GroupSpec) -> usize {
    let r = spec.torus_rank();
    spec.type_a_factor_count() + spec.factors().len() * r + binomial(r + 2, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn hnf_of(vs: Vec<Vec<i64>>, n: usize) -> ZMatrix {
        crate::zchain::hermite_normal_form(&ZMatrix::from_rows(&vs, n))
    }

    #[test]
    fn quadratic_examples() {
        assert_eq!(
            quadratic_invariant_basis(&spec("A1"), Restrict::Derived).len(),
            1
        );
        assert_eq!(
            quadratic_invariant_basis(&spec("A2xG2"), Restrict::Derived).len(),
            2
        );
        assert_eq!(
            quadratic_invariant_basis(&spec("T2"), Restrict::Full).len(),
            3
        );
        let a1 = &quadratic_invariant_basis(&spec("A1"), Restrict::Derived)[0];
        assert_eq!(a1.c, vec![vec![1]]);
        // Basic form on A2: y1² − y1y2 + y2².
        let a2 = &quadratic_invariant_basis(&spec("A2"), Restrict::Derived)[0];
        assert_eq!(a2.eval(&[1, 0]).abs(), 1);
        assert_eq!(a2.eval(&[1, 1]).abs(), 1);
    }

    #[test]
    fn quadratic_routes_agree() {
        for s in ["A1", "A3", "B3", "C3", "D4", "G2", "F4", "A2xB2", "E6"] {
            let sp = spec(s);
            let a = quadratic_invariant_basis(&sp, Restrict::Derived);
            let b = quadratic_basis_by_closedness(&sp);
            assert_eq!(a, b, "{s}");
            assert_eq!(a.len(), sp.factors().len(), "{s}");
        }
    }

    #[test]
    fn cubic_examples() {
        assert_eq!(
            cubic_invariant_basis(&spec("A2"), Restrict::Derived).len(),
            1
        );
        assert_eq!(
            cubic_invariant_basis(&spec("A1"), Restrict::Derived).len(),
            0
        );
        assert_eq!(
            cubic_invariant_basis(&spec("G2"), Restrict::Derived).len(),
            0
        );
        let f = &cubic_invariant_basis(&spec("A2"), Restrict::Derived)[0];
        let sign = f.b[0][1];
        assert_eq!(sign.abs(), 1);
        assert_eq!(f.b[1][0], -sign);
        assert_eq!(evaluate_cubic(f, &[1, 0]).unwrap(), 0);
        assert_eq!(evaluate_cubic(f, &[0, 0]).unwrap(), 0);
        assert!(
            ["y1²y2 - y1y2²", "-y1²y2 + y1y2²"].contains(&f.polynomial().as_str()),
            "{}",
            f.polynomial()
        );
        let q = &quadratic_invariant_basis(&spec("A1"), Restrict::Derived)[0];
        assert_eq!(q.polynomial(), "y1²");
        assert!(evaluate_cubic(f, &[1]).is_err());
    }

    #[test]
    fn cubic_routes_agree_and_are_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in [
            "A2", "A3", "A4", "B3", "C3", "D4", "G2", "A2xA3", "A2xT1", "A1xT2",
        ] {
            let sp = spec(s);
            for restrict in [Restrict::Derived, Restrict::Full] {
                let a = cubic_invariant_basis(&sp, restrict);
                let b = cubic_basis_by_invariance(&sp, restrict);
                let n = a.first().map_or(0, CubicFormW::rank);
                assert_eq!(
                    hnf_of(
                        a.iter().map(CubicFormW::coords).collect(),
                        cubic_index(n).len()
                    ),
                    hnf_of(
                        b.iter().map(CubicFormW::coords).collect(),
                        cubic_index(n).len()
                    ),
                    "{s}"
                );
                for f in &a {
                    for _ in 0..20 {
                        let y: Vec<i64> = (0..f.rank()).map(|_| rng.gen_range(-6..=6)).collect();
                        assert!(is_w_invariant_cubic(&sp, f, &y), "{s}");
                        assert_eq!(evaluate_cubic(f, &y).unwrap(), f.eval_polynomial(&y));
                    }
                }
            }
        }
    }

    #[test]
    fn full_rank_decomposition() {
        for s in ["A2xT1", "A2xT2", "A1xT1", "G2xT1", "T2", "A3xB2xT2"] {
            let sp = spec(s);
            assert_eq!(
                cubic_invariant_basis(&sp, Restrict::Full).len(),
                expected_full_cubic_rank(&sp),
                "{s}"
            );
            let r = sp.torus_rank();
            assert_eq!(
                quadratic_invariant_basis(&sp, Restrict::Full).len(),
                sp.factors().len() + r * (r + 1) / 2,
                "{s}"
            );
        }
    }

    #[test]
    fn quadlin_ranks() {
        assert_eq!(quadlin_space(&spec("A1xT1")), CohomologyGroup::free(1));
        assert_eq!(quadlin_space(&spec("A2xA2xT3")), CohomologyGroup::free(6));
        assert!(quadlin_space(&spec("E8")).is_zero());
    }
}
