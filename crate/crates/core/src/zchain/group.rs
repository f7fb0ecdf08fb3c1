//! Finitely generated abelian groups: computed cohomology groups and the
//! coefficient groups standing in for `k^×`, `K₂(k)`, `K₃(k)`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Z^free_rank ⊕ Z/t₁ ⊕ … ⊕ Z/t_k` with `t₁ | t₂ | … | t_k`, all `tᵢ ≥ 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CohomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

/// Invariant factors of `⊕ Z/mᵢ`; orders `0` and `1` are ignored.
pub fn invariant_factors_of_cyclics(orders: &[u64]) -> Vec<u64> {
    let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &m in orders.iter().filter(|&&m| m > 1) {
        for (p, q) in prime_powers(m) {
            by_prime.entry(p).or_default().push(q);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for powers in by_prime.values_mut() {
        powers.sort_unstable();
        // Largest powers go to the last invariant factor.
        for (k, q) in powers.iter().rev().enumerate() {
            out[len - 1 - k] *= q;
        }
    }
    out
}

impl CohomologyGroup {
    pub fn new(free_rank: usize, torsion: &[u64]) -> Self {
        CohomologyGroup {
            free_rank,
            torsion: invariant_factors_of_cyclics(torsion),
        }
    }

    pub fn zero() -> Self {
        CohomologyGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        CohomologyGroup::new(rank, &[])
    }

    pub fn cyclic(order: u64) -> Self {
        if order == 0 {
            CohomologyGroup::free(1)
        } else {
            CohomologyGroup::new(0, &[order])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<u128> {
        self.is_finite()
            .then(|| self.torsion.iter().map(|&t| u128::from(t)).product())
    }

    /// Cyclic orders `0` (for `Z`) and the invariant factors.
    pub fn cyclic_orders(&self) -> Vec<u64> {
        let mut v = vec![0; self.free_rank];
        v.extend_from_slice(&self.torsion);
        v
    }

    pub fn direct_sum(&self, other: &CohomologyGroup) -> CohomologyGroup {
        let mut t = self.torsion.clone();
        t.extend_from_slice(&other.torsion);
        CohomologyGroup::new(self.free_rank + other.free_rank, &t)
    }

    pub fn power(&self, n: usize) -> CohomologyGroup {
        (0..n).fold(CohomologyGroup::zero(), |acc, _| acc.direct_sum(self))
    }

    pub fn tensor(&self, other: &CohomologyGroup) -> CohomologyGroup {
        let mut free = 0;
        let mut t = Vec::new();
        for &a in &self.cyclic_orders() {
            for &b in &other.cyclic_orders() {
                match (a, b) {
                    (0, 0) => free += 1,
                    (0, m) | (m, 0) => t.push(m),
                    (m, n) => t.push(m.gcd(&n)),
                }
            }
        }
        CohomologyGroup::new(free, &t)
    }

    pub fn tor(&self, other: &CohomologyGroup) -> CohomologyGroup {
        let t: Vec<u64> = self
            .torsion
            .iter()
            .flat_map(|&a| other.torsion.iter().map(move |&b| a.gcd(&b)))
            .collect();
        CohomologyGroup::new(0, &t)
    }
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut k = 0;
        while k < self.torsion.len() {
            let t = self.torsion[k];
            let run = self.torsion[k..].iter().take_while(|&&x| x == t).count();
            parts.push(if run == 1 {
                format!("Z/{t}")
            } else {
                format!("(Z/{t})^{run}")
            });
            k += run;
        }
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// A finitely generated abelian group with elements written as integer
/// coordinate vectors: free coordinates first, then one coordinate per
/// invariant factor (reduced into `[0, t)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoefficientGroup {
    pub group: CohomologyGroup,
    /// The element `{−1}`, of order dividing 2.
    pub marked_element: Option<Vec<i64>>,
}

pub type Element = Vec<i64>;

impl CoefficientGroup {
    pub fn new(group: CohomologyGroup, marked_element: Option<Element>) -> Result<Self> {
        let g = CoefficientGroup {
            group,
            marked_element: None,
        };
        let marked = match marked_element {
            Some(m) => {
                let m = g.reduce(&m)?;
                if !g.is_zero(&g.scale(2, &m)) {
                    return Err(Error::InvalidCoefficients(
                        "marked element must have order dividing 2".into(),
                    ));
                }
                Some(m)
            }
            None => None,
        };
        Ok(CoefficientGroup {
            marked_element: marked,
            ..g
        })
    }

    pub fn plain(group: CohomologyGroup) -> Self {
        CoefficientGroup {
            group,
            marked_element: None,
        }
    }

    pub fn cyclic(order: u64) -> Self {
        CoefficientGroup::plain(CohomologyGroup::cyclic(order))
    }

    pub fn dim(&self) -> usize {
        self.group.free_rank + self.group.torsion.len()
    }

    fn modulus(&self, k: usize) -> Option<i64> {
        let f = self.group.free_rank;
        (k >= f).then(|| self.group.torsion[k - f] as i64)
    }

    pub fn reduce(&self, x: &[i64]) -> Result<Element> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(x.iter()
            .enumerate()
            .map(|(k, &v)| match self.modulus(k) {
                Some(m) => v.rem_euclid(m),
                None => v,
            })
            .collect())
    }

    fn reduce_unchecked(&self, x: Vec<i64>) -> Element {
        self.reduce(&x).expect("element of the right dimension")
    }

    pub fn zero(&self) -> Element {
        vec![0; self.dim()]
    }

    pub fn generator(&self, k: usize) -> Element {
        let mut e = self.zero();
        e[k] = 1;
        e
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        self.reduce_unchecked(x.to_vec()).iter().all(|&v| v == 0)
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        self.reduce_unchecked(x.iter().zip(y).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Element {
        self.reduce_unchecked(x.iter().zip(y).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self, x: &[i64]) -> Element {
        self.reduce_unchecked(x.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Element {
        self.reduce_unchecked(x.iter().map(|a| k * a).collect())
    }

    /// The marked element, or zero when there is none.
    pub fn minus_one(&self) -> Element {
        self.marked_element.clone().unwrap_or_else(|| self.zero())
    }

    /// Every element, for finite groups, in lexicographic coordinate order.
    pub fn elements(&self) -> Option<Vec<Element>> {
        if !self.group.is_finite() {
            return None;
        }
        let mut out = vec![Vec::new()];
        for &t in &self.group.torsion {
            out = out
                .into_iter()
                .flat_map(|e: Element| {
                    (0..t as i64).map(move |v| {
                        let mut e = e.clone();
                        e.push(v);
                        e
                    })
                })
                .collect();
        }
        Some(out)
    }
}

/// A bilinear map `A × B → C`, stored by its values on generator pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearMap {
    pub left: CoefficientGroup,
    pub right: CoefficientGroup,
    pub target: CoefficientGroup,
    /// `table[a][b]` is the image of `(generator a, generator b)`.
    pub table: Vec<Vec<Element>>,
}

impl BilinearMap {
    /// Checks that the table is compatible with the relations of both
    /// sources: `t·β(g, h) = 0` whenever `t·g = 0`.
    pub fn new(
        left: CoefficientGroup,
        right: CoefficientGroup,
        target: CoefficientGroup,
        table: Vec<Vec<Element>>,
    ) -> Result<Self> {
        if table.len() != left.dim() || table.iter().any(|r| r.len() != right.dim()) {
            return Err(Error::InvalidCoefficients(
                "pairing table has the wrong shape".into(),
            ));
        }
        let table: Vec<Vec<Element>> = table
            .iter()
            .map(|r| r.iter().map(|v| target.reduce(v)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        for (a, row) in table.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                for m in [left.modulus(a), right.modulus(b)].into_iter().flatten() {
                    if !target.is_zero(&target.scale(m, v)) {
                        return Err(Error::InvalidCoefficients(format!(
                            "pairing is not well defined on generators ({a}, {b})"
                        )));
                    }
                }
            }
        }
        Ok(BilinearMap {
            left,
            right,
            target,
            table,
        })
    }

    pub fn zero(left: CoefficientGroup, right: CoefficientGroup, target: CoefficientGroup) -> Self {
        let table = vec![vec![target.zero(); right.dim()]; left.dim()];
        BilinearMap {
            left,
            right,
            target,
            table,
        }
    }

    pub fn eval(&self, x: &[i64], y: &[i64]) -> Element {
        let mut acc = self.target.zero();
        for (a, &xa) in x.iter().enumerate() {
            for (b, &yb) in y.iter().enumerate() {
                if xa != 0 && yb != 0 {
                    acc = self
                        .target
                        .add(&acc, &self.target.scale(xa * yb, &self.table[a][b]));
                }
            }
        }
        acc
    }
}

/// Finitely generated stand-ins for the K-groups of the base field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldModel {
    pub name: String,
    /// `k^×`, with `{−1}` marked.
    pub units: CoefficientGroup,
    pub k2: CoefficientGroup,
    pub k3: CoefficientGroup,
    /// The symbol map `k^× × k^× → K₂(k)`.
    pub steinberg: BilinearMap,
}

/// `(p, e)` with `q = pᵉ`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    match prime_powers(q).as_slice() {
        [(p, pe)] => Some((*p, pe.ilog(*p))),
        _ => None,
    }
}

impl FieldModel {
    /// The finite field `F_q`: `k^× = Z/(q−1)`, `K₂ = 0`,
    /// `K₃ = Z/(q²−1)`, zero symbol map.
    pub fn finite(q: u64) -> Result<Self> {
        if q < 2 || prime_power(q).is_none() {
            return Err(Error::InvalidFieldModel(format!(
                "{q} is not a prime power"
            )));
        }
        let q2 = q
            .checked_mul(q)
            .ok_or_else(|| Error::InvalidFieldModel(format!("q = {q} is too large")))?;
        let units_group = CohomologyGroup::cyclic(q - 1);
        let marked = if q % 2 == 1 {
            vec![((q - 1) / 2) as i64]
        } else {
            vec![0; units_group.torsion.len()]
        };
        let units = CoefficientGroup::new(units_group, Some(marked))?;
        let k2 = CoefficientGroup::plain(CohomologyGroup::zero());
        let k3 = CoefficientGroup::plain(CohomologyGroup::cyclic(q2 - 1));
        Ok(FieldModel {
            name: format!("F{q}"),
            steinberg: BilinearMap::zero(units.clone(), units.clone(), k2.clone()),
            units,
            k2,
            k3,
        })
    }

    /// Group attached to a coefficient slot `K_m(k)`, `m ∈ 0..=3`.
    pub fn k_group(&self, m: usize) -> CohomologyGroup {
        match m {
            0 => CohomologyGroup::free(1),
            1 => self.units.group.clone(),
            2 => self.k2.group.clone(),
            3 => self.k3.group.clone(),
            _ => panic!("no model for K_{m}"),
        }
    }
}
