//! Smith normal form with a deterministic pivot rule: the pivot is the
//! smallest-magnitude nonzero entry of the remaining submatrix, ties broken
//! row-major. Elimination first runs in checked `i64` arithmetic and restarts
//! with `BigInt` on overflow; both paths perform the same operations, so the
//! result does not depend on which one finished.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, Zero};

use super::matrix::ZMatrix;

trait Scalar: Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul + Into<BigInt> {}
impl Scalar for i64 {}
impl Scalar for BigInt {}

struct Overflow;

type Rows<T> = Vec<Vec<T>>;

fn identity<T: Scalar>(n: usize) -> Rows<T> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

fn axpy<T: Scalar>(dst: &mut [T], src: &[T], k: &T) -> Result<(), Overflow> {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            let p = s.checked_mul(k).ok_or(Overflow)?;
            *d = d.checked_add(&p).ok_or(Overflow)?;
        }
    }
    Ok(())
}

fn col_axpy<T: Scalar>(m: &mut Rows<T>, dst: usize, src: usize, k: &T) -> Result<(), Overflow> {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let p = row[src].checked_mul(k).ok_or(Overflow)?;
            row[dst] = row[dst].checked_add(&p).ok_or(Overflow)?;
        }
    }
    Ok(())
}

struct Work<T> {
    a: Rows<T>,
    rows: usize,
    cols: usize,
    track: bool,
    u: Rows<T>,
    u_inv: Rows<T>,
    v: Rows<T>,
}

impl<T: Scalar> Work<T> {
    fn new(a: Rows<T>, rows: usize, cols: usize, track: bool) -> Self {
        let (u, u_inv, v) = if track {
            (identity(rows), identity(rows), identity(cols))
        } else {
            (Vec::new(), Vec::new(), Vec::new())
        };
        Work {
            a,
            rows,
            cols,
            track,
            u,
            u_inv,
            v,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if self.track {
            self.u.swap(i, j);
            for row in &mut self.u_inv {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if self.track {
            for row in &mut self.v {
                row.swap(i, j);
            }
        }
    }

    /// row `dst` += k · row `src`.
    fn add_row(&mut self, dst: usize, src: usize, k: &T) -> Result<(), Overflow> {
        let (d, s) = two_mut(&mut self.a, dst, src);
        axpy(d, s, k)?;
        if self.track {
            let (d, s) = two_mut(&mut self.u, dst, src);
            axpy(d, s, k)?;
            col_axpy(&mut self.u_inv, src, dst, &-k.clone())?;
        }
        Ok(())
    }

    /// col `dst` += k · col `src`.
    fn add_col(&mut self, dst: usize, src: usize, k: &T) -> Result<(), Overflow> {
        col_axpy(&mut self.a, dst, src, k)?;
        if self.track {
            col_axpy(&mut self.v, dst, src, k)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -x.clone();
        }
        if self.track {
            for x in &mut self.u[i] {
                *x = -x.clone();
            }
            for row in &mut self.u_inv {
                row[i] = -row[i].clone();
            }
        }
    }

    fn smallest_in_submatrix(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Smallest nonzero entry in row `t` or column `t` (from `t` on).
    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let consider = |i: usize, j: usize, best: &mut (usize, usize)| {
            let x = &self.a[i][j];
            let b = &self.a[best.0][best.1];
            if !x.is_zero() && (b.is_zero() || x.abs() < b.abs()) {
                *best = (i, j);
            }
        };
        for i in t + 1..self.rows {
            consider(i, t, &mut best);
        }
        for j in t + 1..self.cols {
            consider(t, j, &mut best);
        }
        best
    }

    fn run(&mut self) -> Result<(), Overflow> {
        for t in 0..self.rows.min(self.cols) {
            let Some((pi, pj)) = self.smallest_in_submatrix(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].clone() / self.a[t][t].clone();
                        if !q.is_zero() {
                            self.add_row(i, t, &-q)?;
                        }
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].clone() / self.a[t][t].clone();
                        if !q.is_zero() {
                            self.add_col(j, t, &-q)?;
                        }
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    let (pi, pj) = self.smallest_in_cross(t);
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                let p = self.a[t][t].clone();
                let offender = (t + 1..self.rows)
                    .find(|&i| self.a[i][t + 1..].iter().any(|x| !x.is_multiple_of(&p)));
                match offender {
                    Some(i) => self.add_row(t, i, &T::one())?,
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
        Ok(())
    }
}

fn two_mut<T>(v: &mut [Vec<T>], a: usize, b: usize) -> (&mut Vec<T>, &Vec<T>) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

fn to_zmatrix<T: Scalar>(m: Rows<T>, rows: usize, cols: usize) -> ZMatrix {
    let big: Vec<Vec<BigInt>> = m
        .into_iter()
        .map(|r| r.into_iter().map(Into::into).collect())
        .collect();
    let m = ZMatrix::from_rows(&big, cols);
    debug_assert_eq!(m.rows(), rows);
    m
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, nonnegative, with
/// each diagonal entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: ZMatrix,
    pub u_inv: ZMatrix,
    pub v: ZMatrix,
    /// Diagonal of `D`, length `min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn d_matrix(&self) -> ZMatrix {
        let mut d = ZMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.diagonal.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }

    /// Columns of `V` spanning the integer kernel.
    pub fn kernel(&self) -> ZMatrix {
        self.v.columns_range(self.rank()..self.cols)
    }
}

fn diagonal_of<T: Scalar>(a: &Rows<T>, rows: usize, cols: usize) -> Vec<BigInt> {
    (0..rows.min(cols))
        .map(|i| a[i][i].clone().into())
        .collect()
}

fn run_snf(m: &ZMatrix, track: bool) -> (Vec<BigInt>, Option<(ZMatrix, ZMatrix, ZMatrix)>) {
    let (r, c) = (m.rows(), m.cols());
    if let Some(rows) = m.to_i64_rows() {
        let mut w = Work::new(rows, r, c, track);
        if w.run().is_ok() {
            let diag = diagonal_of(&w.a, r, c);
            let t = track.then(|| {
                (
                    to_zmatrix(w.u, r, r),
                    to_zmatrix(w.u_inv, r, r),
                    to_zmatrix(w.v, c, c),
                )
            });
            return (diag, t);
        }
    }
    let mut w = Work::new(m.to_rows(), r, c, track);
    if w.run().is_err() {
        unreachable!("BigInt arithmetic does not overflow");
    }
    let diag = diagonal_of(&w.a, r, c);
    let t = track.then(|| {
        (
            to_zmatrix(w.u, r, r),
            to_zmatrix(w.u_inv, r, r),
            to_zmatrix(w.v, c, c),
        )
    });
    (diag, t)
}

pub fn smith_normal_form(m: &ZMatrix) -> SmithForm {
    let (diagonal, t) = run_snf(m, true);
    let (u, u_inv, v) = t.expect("tracking requested");
    SmithForm {
        u,
        u_inv,
        v,
        diagonal,
        rows: m.rows(),
        cols: m.cols(),
    }
}

/// Nonzero diagonal entries of the Smith form, without transformation data.
pub fn invariant_factors(m: &ZMatrix) -> Vec<BigInt> {
    let (diag, _) = run_snf(m, false);
    diag.into_iter().filter(|d| !d.is_zero()).collect()
}

pub fn matrix_rank(m: &ZMatrix) -> usize {
    invariant_factors(m).len()
}

/// Basis (as columns) of the saturated integer kernel, in Hermite normal
/// form so that it does not depend on elimination choices.
pub fn kernel_basis(m: &ZMatrix) -> ZMatrix {
    let k = smith_normal_form(m).kernel();
    hermite_normal_form(&k.transpose()).transpose()
}

/// Row-style Hermite normal form: rows in echelon form, pivots positive,
/// entries above each pivot reduced into `[0, pivot)`. Zero rows are
/// dropped, so the result is a basis of the row lattice.
pub fn hermite_normal_form(m: &ZMatrix) -> ZMatrix {
    let mut a = m.to_rows();
    let cols = m.cols();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        loop {
            let pivot = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&x, &y| a[x][c].abs().cmp(&a[y][c].abs()));
            let Some(p) = pivot else { break };
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..a.len() {
                if !a[i][c].is_zero() {
                    let q = &a[i][c] / &a[r][c];
                    let (d, s) = two_mut(&mut a, i, r);
                    for (x, y) in d.iter_mut().zip(s) {
                        *x -= &q * y;
                    }
                    clean &= a[i][c].is_zero();
                }
            }
            if clean {
                break;
            }
        }
        if a.get(r).is_some_and(|row| !row[c].is_zero()) {
            if a[r][c].is_negative() {
                for x in &mut a[r] {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = a[i][c].div_floor(&a[r][c]);
                if !q.is_zero() {
                    let (d, s) = two_mut(&mut a, i, r);
                    for (x, y) in d.iter_mut().zip(s) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    ZMatrix::from_rows(&a, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&ZMatrix::from_i64(m))
            .diagonal
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(diag(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(diag(&[vec![0, 0], vec![0, 0]]), vec![0, 0]);
        assert_eq!(diag(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(
            diag(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
            vec![2, 6, 12]
        );
    }

    #[test]
    fn identities_hold() {
        let m = ZMatrix::from_i64(&[vec![3, 5, 7], vec![2, -4, 6], vec![0, 9, 12], vec![1, 1, 1]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d_matrix());
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), ZMatrix::identity(4));
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 3;
        let m = ZMatrix::from_i64(&[vec![big, big - 1], vec![big - 7, big + 5]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d_matrix());
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn kernels_are_saturated() {
        // x + 2y + 3z = 0 has kernel basis of determinant-1 saturation.
        let m = ZMatrix::from_i64(&[vec![2, 4, 6]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).unwrap().is_zero());
        let h = hermite_normal_form(&k.transpose());
        assert_eq!(h, ZMatrix::from_i64(&[vec![1, 1, -1], vec![0, 3, -2]]));
    }
}
