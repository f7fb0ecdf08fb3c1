use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::group::CohomologyGroup;
use super::matrix::ZMatrix;
use super::snf::{invariant_factors, smith_normal_form};
use crate::error::{Error, Result};

/// A bounded cochain complex of free abelian groups
/// `C^s → C^{s+1} → … → C^e`, with `d_n : C^n → C^{n+1}` stored as a
/// `rank C^{n+1} × rank C^n` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZComplex {
    start: i32,
    ranks: Vec<usize>,
    diffs: Vec<ZMatrix>,
    labels: Option<Vec<Vec<String>>>,
}

fn to_u64(x: &BigInt) -> u64 {
    x.to_u64()
        .expect("torsion coefficient does not fit in 64 bits")
}

impl ZComplex {
    /// Checks matrix shapes and `d ∘ d = 0`.
    pub fn new(start: i32, ranks: Vec<usize>, diffs: Vec<ZMatrix>) -> Result<Self> {
        if diffs.len() + 1 != ranks.len().max(1) {
            return Err(Error::InvalidComplex(format!(
                "{} modules need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != ranks[k + 1] || d.cols() != ranks[k] {
                return Err(Error::InvalidComplex(format!(
                    "d in degree {} is {}x{}, expected {}x{}",
                    start + k as i32,
                    d.rows(),
                    d.cols(),
                    ranks[k + 1],
                    ranks[k]
                )));
            }
        }
        for (k, pair) in diffs.windows(2).enumerate() {
            if !pair[1].mul(&pair[0])?.is_zero() {
                return Err(Error::InvalidComplex(format!(
                    "d∘d ≠ 0 starting in degree {}",
                    start + k as i32
                )));
            }
        }
        Ok(ZComplex {
            start,
            ranks,
            diffs,
            labels: None,
        })
    }

    /// `Z^rank` in a single degree.
    pub fn single(degree: i32, rank: usize) -> Self {
        ZComplex {
            start: degree,
            ranks: vec![rank],
            diffs: Vec::new(),
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.ranks.len()
            || labels.iter().zip(&self.ranks).any(|(l, &r)| l.len() != r)
        {
            return Err(Error::InvalidComplex(
                "labels do not match module ranks".into(),
            ));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    /// Last degree (inclusive).
    pub fn end(&self) -> i32 {
        self.start + self.ranks.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.start..=self.end()
    }

    fn slot(&self, n: i32) -> Option<usize> {
        (self.degrees().contains(&n)).then(|| (n - self.start) as usize)
    }

    pub fn rank(&self, n: i32) -> usize {
        self.slot(n).map_or(0, |k| self.ranks[k])
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn labels(&self, n: i32) -> Option<&[String]> {
        let k = self.slot(n)?;
        self.labels.as_ref().map(|l| l[k].as_slice())
    }

    /// `d_n : C^n → C^{n+1}` (a zero matrix outside the stored range).
    pub fn differential(&self, n: i32) -> ZMatrix {
        match self.slot(n) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => ZMatrix::zeros(self.rank(n + 1), self.rank(n)),
        }
    }

    pub fn differentials(&self) -> &[ZMatrix] {
        &self.diffs
    }

    /// Recheck `d ∘ d = 0`.
    pub fn is_complex(&self) -> bool {
        self.diffs
            .windows(2)
            .all(|p| p[1].mul(&p[0]).is_ok_and(|m| m.is_zero()))
    }

    pub fn cohomology(&self, n: i32) -> CohomologyGroup {
        let out = invariant_factors(&self.differential(n));
        let inc = invariant_factors(&self.differential(n - 1));
        group_from(self.rank(n), out.len(), &inc)
    }

    /// Cohomology in every degree of the range, each differential reduced once.
    pub fn cohomology_all(&self) -> Vec<(i32, CohomologyGroup)> {
        let factors: Vec<Vec<BigInt>> = (self.start - 1..=self.end())
            .map(|n| invariant_factors(&self.differential(n)))
            .collect();
        self.degrees()
            .enumerate()
            .map(|(k, n)| {
                (
                    n,
                    group_from(self.rank(n), factors[k + 1].len(), &factors[k]),
                )
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|n| sign(n) * self.rank(n) as i64).sum()
    }

    /// Cohomology of `C ⊗ Z/m` (`m = 0` gives `C` itself), computed as
    /// `{x : d x ∈ mZ} / (im d + mZ)`.
    pub fn cohomology_mod(&self, n: i32, m: u64) -> CohomologyGroup {
        if m == 0 {
            return self.cohomology(n);
        }
        if m == 1 {
            return CohomologyGroup::zero();
        }
        let c = self.rank(n);
        let d = self.differential(n);
        let kernel = if d.rows() == 0 {
            ZMatrix::identity(c)
        } else {
            let aug = d
                .hstack(&ZMatrix::scalar(d.rows(), m as i64))
                .expect("same row count");
            smith_normal_form(&aug).kernel().rows_range(0..c)
        };
        let gens = self
            .differential(n - 1)
            .hstack(&ZMatrix::scalar(c, m as i64))
            .expect("same row count");
        lattice_quotient(&kernel, &gens)
    }
}

fn sign(n: i32) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn group_from(rank: usize, out_rank: usize, incoming: &[BigInt]) -> CohomologyGroup {
    let torsion: Vec<u64> = incoming.iter().map(to_u64).filter(|&t| t > 1).collect();
    CohomologyGroup::new(rank - out_rank - incoming.len(), &torsion)
}

/// `K / L` for a lattice `K ⊆ Z^c` given by a column basis and a sublattice
/// `L ⊆ K` given by column generators.
pub fn lattice_quotient(k_basis: &ZMatrix, l_gens: &ZMatrix) -> CohomologyGroup {
    let k = k_basis.cols();
    let snf = smith_normal_form(k_basis);
    assert_eq!(snf.rank(), k, "lattice basis must have independent columns");
    let ul = snf
        .u
        .mul(l_gens)
        .expect("generators live in the ambient lattice");
    let mut coords = ZMatrix::zeros(k, l_gens.cols());
    for i in 0..k {
        for j in 0..l_gens.cols() {
            let (q, r) = ul.get(i, j).div_rem(&snf.diagonal[i]);
            assert!(r.is_zero(), "sublattice is not contained in the lattice");
            coords.set(i, j, q);
        }
    }
    assert!(
        ul.rows_range(k..ul.rows()).is_zero(),
        "sublattice is not contained in the lattice"
    );
    let coords = snf.v.mul(&coords).expect("square V");
    let f = invariant_factors(&coords);
    group_from(k, 0, &f)
}

/// Cohomology of `C ⊗ A` degree by degree, computed directly per cyclic
/// factor of `A`.
pub fn coefficient_cohomology_direct(
    c: &ZComplex,
    a: &CohomologyGroup,
) -> Vec<(i32, CohomologyGroup)> {
    c.degrees()
        .map(|n| {
            let g = a
                .cyclic_orders()
                .iter()
                .fold(CohomologyGroup::zero(), |acc, &m| {
                    acc.direct_sum(&c.cohomology_mod(n, m))
                });
            (n, g)
        })
        .collect()
}

/// Cohomology of `C ⊗ A` by universal coefficients:
/// `Hⁿ(C ⊗ A) = Hⁿ(C) ⊗ A ⊕ Tor(Hⁿ⁺¹(C), A)`.
pub fn coefficient_cohomology_uct(
    c: &ZComplex,
    a: &CohomologyGroup,
) -> Vec<(i32, CohomologyGroup)> {
    c.degrees()
        .map(|n| {
            (
                n,
                c.cohomology(n)
                    .tensor(a)
                    .direct_sum(&c.cohomology(n + 1).tor(a)),
            )
        })
        .collect()
}

/// Cohomology of `C ⊗ A`; both computations are run and must agree.
pub fn tensor_with_coefficients(c: &ZComplex, a: &CohomologyGroup) -> Vec<(i32, CohomologyGroup)> {
    let direct = coefficient_cohomology_direct(c, a);
    let uct = coefficient_cohomology_uct(c, a);
    assert_eq!(
        direct, uct,
        "direct and universal-coefficient cohomology disagree"
    );
    direct
}

/// Reduced cochains of the simplicial circle `Δ¹/∂Δ¹` in degrees
/// `0..=length`. The `n`-simplices are `*, 1, …, n` (the number of leading
/// zeros of a monotone map `[n] → [1]`), the face `d_i` sends `k` to `k−1`
/// for `i < k` and to `k` otherwise, and `0`, `n` collapse to `*`.
pub fn reduced_circle_complex(length: usize) -> ZComplex {
    assert!(length >= 1, "circle complex needs length ≥ 1");
    let ranks: Vec<usize> = (0..=length).collect();
    let diffs = (1..=length)
        .map(|n| {
            let mut d = ZMatrix::zeros(n, n - 1);
            for x in 1..=n {
                for i in 0..=n {
                    let y = if i < x { x - 1 } else { x };
                    if (1..n).contains(&y) {
                        d.add_at(x - 1, y - 1, if i % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
            d
        })
        .collect();
    ZComplex::new(0, ranks, diffs).expect("simplicial coboundary squares to zero")
}

/// Total complex of `C ⊗ D` with `d(x ⊗ y) = dx ⊗ y + (−1)^p x ⊗ dy`.
/// Degree-`n` basis: blocks ordered by `p`, each in Kronecker order.
pub fn tensor_product(c: &ZComplex, d: &ZComplex) -> ZComplex {
    let start = c.start() + d.start();
    let end = c.end() + d.end();
    let blocks = |n: i32| -> Vec<(i32, usize)> {
        let mut off = 0;
        c.degrees()
            .filter(|p| d.degrees().contains(&(n - p)))
            .map(|p| {
                let o = off;
                off += c.rank(p) * d.rank(n - p);
                (p, o)
            })
            .collect()
    };
    let total = |n: i32| -> usize { c.degrees().map(|p| c.rank(p) * d.rank(n - p)).sum() };
    let ranks: Vec<usize> = (start..=end).map(total).collect();
    let diffs = (start..end)
        .map(|n| {
            let mut m = ZMatrix::zeros(total(n + 1), total(n));
            let target = blocks(n + 1);
            let offset_of = |p: i32| target.iter().find(|(tp, _)| *tp == p).map(|(_, o)| *o);
            for (p, col_off) in blocks(n) {
                let q = n - p;
                if let Some(row_off) = offset_of(p + 1) {
                    let piece = c.differential(p).kronecker(&ZMatrix::identity(d.rank(q)));
                    place(&mut m, &piece, row_off, col_off, 1);
                }
                if let Some(row_off) = offset_of(p) {
                    let piece = ZMatrix::identity(c.rank(p)).kronecker(&d.differential(q));
                    place(&mut m, &piece, row_off, col_off, sign(p));
                }
            }
            m
        })
        .collect();
    let out = ZComplex::new(start, ranks, diffs).expect("Koszul signs give a complex");
    match (&c.labels, &d.labels) {
        (Some(_), Some(_)) => {
            let labels = (start..=end)
                .map(|n| {
                    blocks(n)
                        .into_iter()
                        .flat_map(|(p, _)| {
                            let a = c.labels(p).unwrap_or_default().to_vec();
                            let b = d.labels(n - p).unwrap_or_default().to_vec();
                            a.into_iter().flat_map(move |x| {
                                b.clone().into_iter().map(move |y| format!("{x}⊗{y}"))
                            })
                        })
                        .collect()
                })
                .collect();
            out.with_labels(labels).expect("label counts match")
        }
        _ => out,
    }
}

fn place(m: &mut ZMatrix, piece: &ZMatrix, row_off: usize, col_off: usize, s: i64) {
    for (i, j, v) in piece.nonzeros() {
        let cur = m.get(row_off + i, col_off + j) + v * s;
        m.set(row_off + i, col_off + j, cur);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn times(k: i64) -> ZComplex {
        ZComplex::new(0, vec![1, 1], vec![ZMatrix::from_i64(&[vec![k]])]).unwrap()
    }

    #[test]
    fn rejects_non_complexes() {
        let d = ZMatrix::from_i64(&[vec![1]]);
        assert!(ZComplex::new(0, vec![1, 1, 1], vec![d.clone(), d.clone()]).is_err());
        assert!(ZComplex::new(0, vec![1, 2], vec![d]).is_err());
    }

    #[test]
    fn multiplication_by_two() {
        let c = times(2);
        assert_eq!(c.cohomology(0), CohomologyGroup::zero());
        assert_eq!(c.cohomology(1), CohomologyGroup::cyclic(2));
        let z2 = CohomologyGroup::cyclic(2);
        let t = tensor_with_coefficients(&c, &z2);
        assert_eq!(t, vec![(0, z2.clone()), (1, z2)]);
        let z = CohomologyGroup::free(1);
        assert_eq!(tensor_with_coefficients(&c, &z), c.cohomology_all());
        let z3 = CohomologyGroup::cyclic(3);
        assert_eq!(
            tensor_with_coefficients(&times(0), &z3),
            vec![(0, z3.clone()), (1, z3)]
        );
    }

    #[test]
    fn circle() {
        let c = reduced_circle_complex(5);
        let h = c.cohomology_all();
        for (n, g) in h {
            if n == 1 {
                assert_eq!(g, CohomologyGroup::free(1));
            } else if n < 5 {
                assert!(g.is_zero(), "degree {n}: {g}");
            }
        }
        let two = reduced_circle_complex(2);
        assert_eq!(two.ranks(), &[0, 1, 2]);
    }

    #[test]
    fn tensor_products() {
        let circle = reduced_circle_complex(5);
        let sq = tensor_product(&circle, &circle);
        for n in 0..5 {
            let expected = if n == 2 {
                CohomologyGroup::free(1)
            } else {
                CohomologyGroup::zero()
            };
            assert_eq!(sq.cohomology(n), expected, "degree {n}");
        }
        let mixed = tensor_product(&circle, &times(2));
        assert_eq!(mixed.cohomology(2), CohomologyGroup::cyclic(2));
        assert!(mixed.cohomology(1).is_zero());
        let unit = ZComplex::single(0, 1);
        let u = tensor_product(&times(6), &unit);
        assert_eq!(u.cohomology_all(), times(6).cohomology_all());
    }

    #[test]
    fn quotients() {
        // K = 2Z ⊕ Z, L = 4Z ⊕ 3Z: K/L = Z/2 ⊕ Z/3 = Z/6.
        let k = ZMatrix::from_i64(&[vec![2, 0], vec![0, 1]]);
        let l = ZMatrix::from_i64(&[vec![4, 0], vec![0, 3]]);
        assert_eq!(lattice_quotient(&k, &l), CohomologyGroup::cyclic(6));
        let l = ZMatrix::from_i64(&[vec![4], vec![0]]);
        assert_eq!(lattice_quotient(&k, &l), CohomologyGroup::new(1, &[2]));
    }
}
