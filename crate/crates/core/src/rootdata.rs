//! Cartan and Dynkin data for products of simply-connected simple groups with
//! a split central torus.
//!
//! Conventions (see also `book/src/conventions.md`):
//!
//! * simple roots are numbered per family in Bourbaki order, 0-based in the
//!   API and 1-based in human-readable labels;
//! * `a[i][j] = α_j(α_i^∨)`;
//! * character vectors are written in the fundamental-weight basis `ω_i`
//!   followed by the standard basis of `X₀`, cocharacter vectors in the
//!   simple-coroot basis `α_i^∨` followed by the standard basis of `Y₀`, so
//!   the pairing is the plain dot product.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    fn admissible(self) -> &'static str {
        match self {
            Family::A => "rank ≥ 1",
            Family::B | Family::C => "rank ≥ 2",
            Family::D => "rank ≥ 4",
            Family::E => "rank in {6, 7, 8}",
            Family::F => "rank = 4",
            Family::G => "rank = 2",
        }
    }

    fn admits(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

/// A simple, simply-connected Dynkin type. Always canonical: `C2` is stored
/// as `B2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SimpleType {
    family: Family,
    rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if !family.admits(rank) {
            return Err(Error::InadmissibleRank {
                family: family.letter(),
                rank,
                admissible: family.admissible(),
            });
        }
        let family = if family == Family::C && rank == 2 {
            Family::B
        } else {
            family
        };
        Ok(SimpleType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Relative squared root lengths in Bourbaki numbering.
    fn root_lengths(&self) -> Vec<i64> {
        let n = self.rank;
        match self.family {
            Family::A | Family::D | Family::E => vec![2; n],
            Family::B => (0..n).map(|i| if i + 1 == n { 1 } else { 2 }).collect(),
            Family::C => (0..n).map(|i| if i + 1 == n { 2 } else { 1 }).collect(),
            Family::F => vec![2, 2, 1, 1],
            Family::G => vec![1, 3],
        }
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.family {
            Family::A | Family::B | Family::C | Family::F | Family::G => {
                (1..n).map(|i| (i - 1, i)).collect()
            }
            Family::D => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((n - 3, n - 1));
                e
            }
            Family::E => {
                // Bourbaki: 1-3-4-5-...-n with 2 attached to 4.
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((3..n).map(|i| (i - 1, i)));
                e
            }
        }
    }

    pub fn cartan_matrix(&self) -> CartanMatrix {
        let n = self.rank;
        let len = self.root_lengths();
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j) in self.edges() {
            a[i][j] = -(len[j] / len[i]).max(1);
            a[j][i] = -(len[i] / len[j]).max(1);
        }
        CartanMatrix(a)
    }

    /// Number of positive roots, i.e. the length of the longest Weyl element.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match (self.family, n) {
            (Family::A, _) => n * (n + 1) / 2,
            (Family::B | Family::C, _) => n * n,
            (Family::D, _) => n * (n - 1),
            (Family::E, 6) => 36,
            (Family::E, 7) => 63,
            (Family::E, _) => 120,
            (Family::F, _) => 24,
            (Family::G, _) => 6,
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl From<SimpleType> for String {
    fn from(t: SimpleType) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for SimpleType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        let spec: GroupSpec = s.parse()?;
        match (spec.factors(), spec.torus_rank()) {
            ([t], 0) => Ok(*t),
            _ => Err(Error::Syntax {
                position: 0,
                message: format!("expected a single simple type, got {s:?}"),
            }),
        }
    }
}

/// `(∏ Gᵢ) × (split torus of rank r)` with every `Gᵢ` simply connected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GroupSpec {
    factors: Vec<SimpleType>,
    torus_rank: usize,
}

impl GroupSpec {
    pub fn new(factors: Vec<SimpleType>, torus_rank: usize) -> Self {
        GroupSpec {
            factors,
            torus_rank,
        }
    }

    pub fn simple(family: Family, rank: usize) -> Result<Self> {
        Ok(GroupSpec::new(vec![SimpleType::new(family, rank)?], 0))
    }

    pub fn torus(rank: usize) -> Self {
        GroupSpec::new(Vec::new(), rank)
    }

    pub fn factors(&self) -> &[SimpleType] {
        &self.factors
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn derived_rank(&self) -> usize {
        self.factors.iter().map(SimpleType::rank).sum()
    }

    pub fn total_rank(&self) -> usize {
        self.derived_rank() + self.torus_rank
    }

    pub fn is_semisimple(&self) -> bool {
        self.torus_rank == 0
    }

    /// The derived subgroup as a spec of its own.
    pub fn derived(&self) -> GroupSpec {
        GroupSpec::new(self.factors.clone(), 0)
    }

    /// `G × G'`: factors concatenated, tori added.
    pub fn product(&self, other: &GroupSpec) -> GroupSpec {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        GroupSpec::new(factors, self.torus_rank + other.torus_rank)
    }

    /// Number of simple factors of type `A_n` with `n ≥ 2`.
    pub fn type_a_factor_count(&self) -> usize {
        self.factors
            .iter()
            .filter(|t| t.family == Family::A && t.rank >= 2)
            .count()
    }

    /// Offset of each factor's first simple root in the derived block.
    pub fn factor_offsets(&self) -> Vec<usize> {
        self.factors
            .iter()
            .scan(0, |acc, t| {
                let o = *acc;
                *acc += t.rank;
                Some(o)
            })
            .collect()
    }

    pub fn cartan_matrix(&self) -> CartanMatrix {
        let n = self.derived_rank();
        let mut a = vec![vec![0i64; n]; n];
        for (t, off) in self.factors.iter().zip(self.factor_offsets()) {
            let block = t.cartan_matrix();
            for i in 0..t.rank {
                for j in 0..t.rank {
                    a[off + i][off + j] = block.0[i][j];
                }
            }
        }
        CartanMatrix(a)
    }

    pub fn positive_root_count(&self) -> usize {
        self.factors
            .iter()
            .map(SimpleType::positive_root_count)
            .sum()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        if self.torus_rank > 0 || parts.is_empty() {
            parts.push(format!("T{}", self.torus_rank));
        }
        f.write_str(&parts.join("x"))
    }
}

impl From<GroupSpec> for String {
    fn from(s: GroupSpec) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for GroupSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// `Spec := Factor ("x" Factor)*`, `Factor := Family Rank | "T" Rank`.
    /// Case-insensitive, no whitespace. Torus factors accumulate; `T0` is
    /// accepted and contributes nothing.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let syntax = |position: usize, message: &str| Error::Syntax {
            position,
            message: message.to_string(),
        };
        if chars.is_empty() {
            return Err(syntax(0, "empty group spec"));
        }
        let mut factors = Vec::new();
        let mut torus_rank = 0;
        let mut pos = 0;
        loop {
            let letter = *chars
                .get(pos)
                .ok_or_else(|| syntax(pos, "expected a factor after 'x'"))?;
            if letter.is_whitespace() {
                return Err(syntax(pos, "whitespace is not allowed"));
            }
            let family = if letter.eq_ignore_ascii_case(&'T') {
                None
            } else {
                Some(Family::from_letter(letter).ok_or_else(|| {
                    syntax(
                        pos,
                        &format!("unknown family {letter:?}; expected one of A-G or T"),
                    )
                })?)
            };
            pos += 1;
            let start = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(syntax(start, "expected a rank"));
            }
            let digits: String = chars[start..pos].iter().collect();
            let rank: usize = digits
                .parse()
                .map_err(|_| syntax(start, "rank is too large"))?;
            match family {
                None => torus_rank += rank,
                Some(fam) => factors.push(SimpleType::new(fam, rank)?),
            }
            match chars.get(pos) {
                None => break,
                Some(c) if c.eq_ignore_ascii_case(&'x') => pos += 1,
                Some(c) if c.is_whitespace() => {
                    return Err(syntax(pos, "whitespace is not allowed"))
                }
                Some(c) => return Err(syntax(pos, &format!("unexpected character {c:?}"))),
            }
        }
        Ok(GroupSpec::new(factors, torus_rank))
    }
}

/// Square Cartan matrix with `a[i][j] = α_j(α_i^∨)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanMatrix(pub Vec<Vec<i64>>);

impl CartanMatrix {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0[i][j]
    }

    pub fn orthogonal(&self, i: usize, j: usize) -> bool {
        i != j && self.0[i][j] == 0
    }

    /// Joined by a single (simply-laced) edge.
    pub fn single_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.0[i][j] == -1 && self.0[j][i] == -1
    }

    /// Checks the defining conditions of a generalized Cartan matrix of
    /// finite type at the level of entries.
    pub fn is_valid(&self) -> bool {
        let n = self.rank();
        self.0.iter().all(|row| row.len() == n)
            && (0..n).all(|i| {
                self.0[i][i] == 2
                    && (0..n).filter(|&j| j != i).all(|j| {
                        let (a, b) = (self.0[i][j], self.0[j][i]);
                        (-3..=0).contains(&a)
                            && ((a == 0) == (b == 0))
                            && (0..=3).contains(&(a * b))
                    })
            })
    }

    /// Submatrix on the given nodes, in the given order.
    pub fn induced(&self, nodes: &[usize]) -> Vec<Vec<i64>> {
        nodes
            .iter()
            .map(|&i| nodes.iter().map(|&j| self.0[i][j]).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Character,
    Cocharacter,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeVector {
    pub side: Side,
    pub coords: Vec<i64>,
}

impl LatticeVector {
    pub fn character(coords: Vec<i64>) -> Self {
        LatticeVector {
            side: Side::Character,
            coords,
        }
    }

    pub fn cocharacter(coords: Vec<i64>) -> Self {
        LatticeVector {
            side: Side::Cocharacter,
            coords,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// A `GroupSpec` together with its Cartan matrix; the lattice operations
/// live here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    spec: GroupSpec,
    cartan: CartanMatrix,
}

impl RootDatum {
    pub fn new(spec: &GroupSpec) -> Self {
        RootDatum {
            cartan: spec.cartan_matrix(),
            spec: spec.clone(),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn derived_rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn rank(&self) -> usize {
        self.spec.total_rank()
    }

    /// `α_j(α_i^∨)`.
    pub fn alpha(&self, j: usize, i: usize) -> i64 {
        self.cartan.0[i][j]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.derived_rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.derived_rank(),
            });
        }
        Ok(())
    }

    fn check_dim(&self, v: &LatticeVector) -> Result<()> {
        if v.coords.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: v.coords.len(),
            });
        }
        Ok(())
    }

    pub fn simple_coroot(&self, i: usize) -> Result<LatticeVector> {
        self.check_index(i)?;
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        Ok(LatticeVector::cocharacter(c))
    }

    /// `α_i` in the fundamental-weight basis: column `i` of the Cartan matrix.
    pub fn simple_root(&self, i: usize) -> Result<LatticeVector> {
        self.check_index(i)?;
        let mut c = vec![0; self.rank()];
        for (j, cj) in c.iter_mut().enumerate().take(self.derived_rank()) {
            *cj = self.cartan.0[j][i];
        }
        Ok(LatticeVector::character(c))
    }

    pub fn fundamental_weight(&self, i: usize) -> Result<LatticeVector> {
        self.check_index(i)?;
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        Ok(LatticeVector::character(c))
    }

    /// Basis vector `c` of the central part, on either side.
    pub fn central_basis(&self, side: Side, c: usize) -> Result<LatticeVector> {
        if c >= self.spec.torus_rank() {
            return Err(Error::IndexOutOfRange {
                index: c,
                rank: self.spec.torus_rank(),
            });
        }
        let mut v = vec![0; self.rank()];
        v[self.derived_rank() + c] = 1;
        Ok(LatticeVector { side, coords: v })
    }

    pub fn pairing(&self, x: &LatticeVector, y: &LatticeVector) -> Result<i64> {
        if x.side != Side::Character || y.side != Side::Cocharacter {
            return Err(Error::SideMismatch);
        }
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(x.coords.iter().zip(&y.coords).map(|(a, b)| a * b).sum())
    }

    /// `α_i(y)` for a raw cocharacter coordinate vector.
    pub fn root_value(&self, i: usize, y: &[i64]) -> i64 {
        (0..self.derived_rank())
            .map(|j| y[j] * self.cartan.0[j][i])
            .sum()
    }

    /// `s_i(y) = y − α_i(y)·α_i^∨` on cocharacters and
    /// `s_i(x) = x − x(α_i^∨)·α_i` on characters.
    pub fn simple_reflection(&self, i: usize, v: &LatticeVector) -> Result<LatticeVector> {
        self.check_index(i)?;
        self.check_dim(v)?;
        let mut out = v.clone();
        match v.side {
            Side::Cocharacter => out.coords[i] -= self.root_value(i, &v.coords),
            Side::Character => {
                let t = v.coords[i];
                for j in 0..self.derived_rank() {
                    out.coords[j] -= t * self.cartan.0[j][i];
                }
            }
        }
        Ok(out)
    }

    /// Number of induced subdiagrams of type G₂, B₃ or D₄.
    pub fn count_nbdg(&self) -> usize {
        count_nbdg(&self.cartan)
    }
}

pub fn cartan_matrix(spec: &GroupSpec) -> CartanMatrix {
    spec.cartan_matrix()
}

pub fn pairing(spec: &GroupSpec, x: &LatticeVector, y: &LatticeVector) -> Result<i64> {
    RootDatum::new(spec).pairing(x, y)
}

pub fn simple_reflection_action(
    spec: &GroupSpec,
    i: usize,
    v: &LatticeVector,
) -> Result<LatticeVector> {
    RootDatum::new(spec).simple_reflection(i, v)
}

pub fn count_nbdg_spec(spec: &GroupSpec) -> usize {
    count_nbdg(&spec.cartan_matrix())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn permutation_equivalent(m: &[Vec<i64>], target: &[Vec<i64>]) -> bool {
    let n = m.len();
    permutations(n)
        .iter()
        .any(|p| (0..n).all(|i| (0..n).all(|j| m[p[i]][p[j]] == target[i][j])))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Counts node subsets whose induced Cartan submatrix is
/// permutation-equivalent to the standard G₂, B₃ or D₄ matrix. C₃ is not
/// permutation-equivalent to B₃, so type-C triples are not counted.
pub fn count_nbdg(cartan: &CartanMatrix) -> usize {
    let targets: Vec<(usize, Vec<Vec<i64>>)> = [(Family::G, 2), (Family::B, 3), (Family::D, 4)]
        .into_iter()
        .map(|(f, r)| (r, SimpleType { family: f, rank: r }.cartan_matrix().0))
        .collect();
    targets
        .iter()
        .map(|(k, target)| {
            subsets(cartan.rank(), *k)
                .into_iter()
                .filter(|s| permutation_equivalent(&cartan.induced(s), target))
                .count()
        })
        .sum()
}

/// Every admissible simple type of rank at most `max_rank` (`C2` excluded
/// since it canonicalizes to `B2`).
pub fn all_simple_types(max_rank: usize) -> Vec<SimpleType> {
    let mut out = Vec::new();
    for fam in [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ] {
        for r in 1..=max_rank {
            if fam.admits(r) && !(fam == Family::C && r == 2) {
                out.push(SimpleType {
                    family: fam,
                    rank: r,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn cartan_examples() {
        assert_eq!(spec("A2").cartan_matrix().0, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(
            spec("A1xA1").cartan_matrix().0,
            vec![vec![2, 0], vec![0, 2]]
        );
        let g2 = spec("G2").cartan_matrix();
        let mut off = [g2.get(0, 1), g2.get(1, 0)];
        off.sort();
        assert_eq!(off, [-3, -1]);
    }

    #[test]
    fn double_edges_follow_root_lengths() {
        // short node i, long node j: α_j(α_i^∨) = −2.
        let b3 = spec("B3").cartan_matrix();
        assert_eq!(b3.get(2, 1), -2);
        assert_eq!(b3.get(1, 2), -1);
        let c3 = spec("C3").cartan_matrix();
        assert_eq!(c3.get(1, 2), -2);
        assert_eq!(c3.get(2, 1), -1);
    }

    #[test]
    fn every_type_has_a_valid_cartan_matrix() {
        for t in all_simple_types(9) {
            let c = t.cartan_matrix();
            assert!(c.is_valid(), "{t}");
            assert_eq!(c.rank(), t.rank());
        }
    }

    #[test]
    fn pairing_examples() {
        let rd = RootDatum::new(&spec("A2"));
        let w1 = rd.fundamental_weight(0).unwrap();
        let a1 = rd.simple_root(0).unwrap();
        let c1 = rd.simple_coroot(0).unwrap();
        let c2 = rd.simple_coroot(1).unwrap();
        assert_eq!(rd.pairing(&w1, &c1).unwrap(), 1);
        assert_eq!(rd.pairing(&a1, &c2).unwrap(), -1);
        assert_eq!(rd.pairing(&w1, &c2).unwrap(), 0);
        assert_eq!(rd.pairing(&c1, &w1), Err(Error::SideMismatch));
        let short = LatticeVector::character(vec![1]);
        assert!(matches!(
            rd.pairing(&short, &c1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reflection_examples() {
        let a1 = RootDatum::new(&spec("A1"));
        let c = a1.simple_coroot(0).unwrap();
        assert_eq!(a1.simple_reflection(0, &c).unwrap().coords, vec![-1]);

        let a2 = RootDatum::new(&spec("A2"));
        let c1 = a2.simple_coroot(0).unwrap();
        assert_eq!(a2.simple_reflection(1, &c1).unwrap().coords, vec![1, 1]);

        let a1t = RootDatum::new(&spec("A1xT1"));
        let z = a1t.central_basis(Side::Cocharacter, 0).unwrap();
        assert_eq!(a1t.simple_reflection(0, &z).unwrap(), z);
        assert!(a1t.simple_reflection(1, &z).is_err());
    }

    #[test]
    fn reflections_are_involutions_preserving_the_pairing() {
        for s in ["A3", "B3", "C3", "G2", "F4", "D4xT2", "E6"] {
            let rd = RootDatum::new(&spec(s));
            let n = rd.rank();
            for i in 0..rd.derived_rank() {
                for a in 0..n {
                    let mut xc = vec![0; n];
                    xc[a] = 1;
                    let x = LatticeVector::character(xc);
                    let sx = rd.simple_reflection(i, &x).unwrap();
                    assert_eq!(rd.simple_reflection(i, &sx).unwrap(), x);
                    for b in 0..n {
                        let mut yc = vec![0; n];
                        yc[b] = 1;
                        let y = LatticeVector::cocharacter(yc);
                        let sy = rd.simple_reflection(i, &y).unwrap();
                        assert_eq!(rd.simple_reflection(i, &sy).unwrap(), y);
                        assert_eq!(rd.pairing(&sx, &sy).unwrap(), rd.pairing(&x, &y).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn nbdg_examples() {
        let n = |s: &str| count_nbdg_spec(&spec(s));
        assert_eq!(n("G2"), 1);
        assert_eq!(n("A5"), 0);
        assert_eq!(n("C4"), 0);
        assert_eq!(n("C3"), 0);
        assert_eq!(n("B3"), 1);
        assert_eq!(n("F4"), 1);
        assert_eq!(n("E8"), 1);
        assert_eq!(n("B4"), 1);
        assert_eq!(n("D5"), 1);
        assert_eq!(n("G2xB3xA2"), 2);
    }

    #[test]
    fn nbdg_is_additive() {
        let types = all_simple_types(6);
        for a in &types {
            for b in &types {
                let prod = GroupSpec::new(vec![*a, *b], 1);
                assert_eq!(
                    count_nbdg_spec(&prod),
                    count_nbdg_spec(&GroupSpec::new(vec![*a], 0))
                        + count_nbdg_spec(&GroupSpec::new(vec![*b], 0))
                );
            }
            if matches!(a.family(), Family::A | Family::C) {
                assert_eq!(count_nbdg_spec(&GroupSpec::new(vec![*a], 0)), 0);
            }
        }
    }

    #[test]
    fn parse_examples() {
        let s = spec("A2xB3xT2");
        assert_eq!(s.factors().len(), 2);
        assert_eq!(s.factors()[1].to_string(), "B3");
        assert_eq!(s.torus_rank(), 2);
        assert_eq!(spec("C2").to_string(), "B2");
        assert_eq!(spec("a2xt0").to_string(), "A2");
        assert_eq!(spec("T0").to_string(), "T0");
        assert_eq!(spec("T1xA1xT2").to_string(), "A1xT3");

        let err = "D3".parse::<GroupSpec>().unwrap_err();
        assert_eq!(err.to_string(), "D requires rank ≥ 4 (got rank 3)");
        assert!(matches!(
            "E9".parse::<GroupSpec>(),
            Err(Error::InadmissibleRank { family: 'E', .. })
        ));
        assert!(matches!(
            "A2 xB3".parse::<GroupSpec>(),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(matches!(
            "A2x".parse::<GroupSpec>(),
            Err(Error::Syntax { position: 3, .. })
        ));
        assert!(matches!(
            "Q2".parse::<GroupSpec>(),
            Err(Error::Syntax { position: 0, .. })
        ));
        assert!(matches!(
            "A".parse::<GroupSpec>(),
            Err(Error::Syntax { position: 1, .. })
        ));
        assert!(matches!("".parse::<GroupSpec>(), Err(Error::Syntax { .. })));
    }
}
