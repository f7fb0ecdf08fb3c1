//! Weyl group elements as integer matrices on the coroot lattice, the
//! longest element, and the index sets `W⁽ᵖ⁾ = {w : l(w) = l(w₀) − p}` for
//! `p ≤ 3`.
//!
//! An element of `W⁽ᵖ⁾` is written `w₀·s_{t₁}⋯s_{t_p}` and stored as the tuple
//! `(t₁, …, t_p)`. Tuples are compared through a canonical representative
//! (the lexicographically smallest equivalent tuple).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{CartanMatrix, GroupSpec};

pub type IntMatrix = Vec<Vec<i64>>;

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0; m]; n];
    for i in 0..n {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik != 0 {
                for j in 0..m {
                    out[i][j] += aik * b[k][j];
                }
            }
        }
    }
    out
}

/// Matrix of `s_i` on `Y_der` in the coroot basis: column `j` is
/// `α_j^∨ − α_i(α_j^∨)·α_i^∨`.
pub fn simple_reflection_matrix(cartan: &CartanMatrix, i: usize) -> IntMatrix {
    let mut m = identity(cartan.rank());
    for j in 0..cartan.rank() {
        m[i][j] -= cartan.get(j, i);
    }
    m
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeylElement {
    pub matrix: IntMatrix,
    pub word: Vec<usize>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            matrix: identity(rank),
            word: Vec::new(),
        }
    }

    pub fn from_word(cartan: &CartanMatrix, word: &[usize]) -> Self {
        let mut w = WeylElement::identity(cartan.rank());
        for &i in word {
            w = w.times_simple(cartan, i);
        }
        w
    }

    /// `w·s_i`.
    pub fn times_simple(&self, cartan: &CartanMatrix, i: usize) -> Self {
        let mut word = self.word.clone();
        word.push(i);
        WeylElement {
            matrix: mat_mul(&self.matrix, &simple_reflection_matrix(cartan, i)),
            word,
        }
    }

    pub fn compose(&self, other: &WeylElement) -> Self {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        WeylElement {
            matrix: mat_mul(&self.matrix, &other.matrix),
            word,
        }
    }

    pub fn apply(&self, y: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == identity(self.matrix.len())
    }

    fn image_of_coroot_is_positive(&self, i: usize) -> bool {
        self.matrix.iter().all(|row| row[i] >= 0)
    }
}

/// Greedy descent: multiply by `s_i` on the right while `w(α_i^∨)` is
/// positive. Each step raises the length by one and the loop stops exactly
/// at `w₀`, so the word is reduced.
pub fn longest_element_of(cartan: &CartanMatrix) -> WeylElement {
    let n = cartan.rank();
    let mut w = WeylElement::identity(n);
    while let Some(i) = (0..n).find(|&i| w.image_of_coroot_is_positive(i)) {
        w = w.times_simple(cartan, i);
    }
    w
}

pub fn longest_element(spec: &GroupSpec) -> WeylElement {
    longest_element_of(&spec.cartan_matrix())
}

/// `|W|`, from the standard order formulas.
pub fn weyl_group_order(spec: &GroupSpec) -> u128 {
    use crate::rootdata::Family;
    let fact = |n: usize| (1..=n as u128).product::<u128>();
    spec.factors()
        .iter()
        .map(|t| {
            let n = t.rank();
            match (t.family(), n) {
                (Family::A, _) => fact(n + 1),
                (Family::B | Family::C, _) => (1u128 << n) * fact(n),
                (Family::D, _) => (1u128 << (n - 1)) * fact(n),
                (Family::E, 6) => 51_840,
                (Family::E, 7) => 2_903_040,
                (Family::E, _) => 696_729_600,
                (Family::F, _) => 1152,
                (Family::G, _) => 12,
            }
        })
        .product()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WSetIndex {
    pub level: usize,
    pub tuple: Vec<usize>,
    pub canonical: bool,
}

impl WSetIndex {
    pub fn new(tuple: Vec<usize>) -> Self {
        WSetIndex {
            level: tuple.len(),
            tuple,
            canonical: false,
        }
    }
}

/// 1-based label such as `(1,2,1)`; the empty tuple prints as `()`.
pub fn tuple_label(tuple: &[usize]) -> String {
    let parts: Vec<String> = tuple.iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for WSetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&tuple_label(&self.tuple))
    }
}

/// Checks that `w₀·s_{t₁}⋯s_{t_p}` has length `l(w₀) − p`.
pub fn check_tuple(cartan: &CartanMatrix, tuple: &[usize]) -> Result<()> {
    let n = cartan.rank();
    let bad = |reason: &str| {
        Err(Error::InadmissibleIndex {
            tuple: tuple.to_vec(),
            reason: reason.to_string(),
        })
    };
    if tuple.len() > 3 {
        return bad("only levels 0 to 3 are supported");
    }
    if let Some(&i) = tuple.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: i, rank: n });
    }
    if tuple.windows(2).any(|w| w[0] == w[1]) {
        return bad("adjacent indices coincide");
    }
    if let [i, j, k] = *tuple {
        if i == k && cartan.orthogonal(i, j) {
            return bad("adjacent roots are orthogonal and the outer indices coincide");
        }
    }
    Ok(())
}

fn neighbours(cartan: &CartanMatrix, t: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for p in 0..t.len().saturating_sub(1) {
        if cartan.orthogonal(t[p], t[p + 1]) {
            let mut s = t.to_vec();
            s.swap(p, p + 1);
            out.push(s);
        }
    }
    if let [i, j, k] = *t {
        if i == k && cartan.single_edge(i, j) {
            out.push(vec![j, i, j]);
        }
    }
    out
}

/// All tuples equivalent to `tuple` under the orthogonal-swap and braid
/// identifications.
pub fn equivalence_class(cartan: &CartanMatrix, tuple: &[usize]) -> Result<BTreeSet<Vec<usize>>> {
    check_tuple(cartan, tuple)?;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([tuple.to_vec()]);
    while let Some(t) = queue.pop_front() {
        if seen.insert(t.clone()) {
            queue.extend(neighbours(cartan, &t));
        }
    }
    Ok(seen)
}

pub fn canonical_tuple(cartan: &CartanMatrix, tuple: &[usize]) -> Result<Vec<usize>> {
    Ok(equivalence_class(cartan, tuple)?
        .into_iter()
        .next()
        .expect("class contains its seed"))
}

pub fn canonicalize_index(cartan: &CartanMatrix, idx: &WSetIndex) -> Result<WSetIndex> {
    let tuple = canonical_tuple(cartan, &idx.tuple)?;
    Ok(WSetIndex {
        level: tuple.len(),
        tuple,
        canonical: true,
    })
}

/// Every admissible (not necessarily canonical) tuple of length `p`.
pub fn admissible_tuples(cartan: &CartanMatrix, p: usize) -> Vec<Vec<usize>> {
    let n = cartan.rank();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut s = t.clone();
                    s.push(i);
                    s
                })
            })
            .collect();
    }
    out.retain(|t| check_tuple(cartan, t).is_ok());
    out
}

pub fn enumerate_wset_of(cartan: &CartanMatrix, p: usize) -> Vec<WSetIndex> {
    let set: BTreeSet<Vec<usize>> = admissible_tuples(cartan, p)
        .iter()
        .map(|t| canonical_tuple(cartan, t).expect("admissible"))
        .collect();
    set.into_iter()
        .map(|tuple| WSetIndex {
            level: p,
            tuple,
            canonical: true,
        })
        .collect()
}

pub fn enumerate_wset(spec: &GroupSpec, p: usize) -> Vec<WSetIndex> {
    enumerate_wset_of(&spec.cartan_matrix(), p)
}

/// `w₀·s_{t₁}⋯s_{t_p}`.
pub fn wset_element(cartan: &CartanMatrix, w0: &WeylElement, tuple: &[usize]) -> WeylElement {
    w0.compose(&WeylElement::from_word(cartan, tuple))
}

/// Canonical tuples of `W⁽⁰⁾ … W⁽³⁾` with position lookup, used for basis
/// indexing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<Vec<Vec<usize>>>", into = "Vec<Vec<Vec<usize>>>")]
pub struct WSets {
    levels: Vec<Vec<Vec<usize>>>,
    position: Vec<HashMap<Vec<usize>, usize>>,
}

impl From<Vec<Vec<Vec<usize>>>> for WSets {
    fn from(levels: Vec<Vec<Vec<usize>>>) -> Self {
        WSets::from_levels(levels)
    }
}

impl From<WSets> for Vec<Vec<Vec<usize>>> {
    fn from(w: WSets) -> Self {
        w.levels
    }
}

impl WSets {
    pub fn new(cartan: &CartanMatrix) -> Self {
        let levels = (0..=3)
            .map(|p| {
                enumerate_wset_of(cartan, p)
                    .into_iter()
                    .map(|i| i.tuple)
                    .collect()
            })
            .collect();
        WSets::from_levels(levels)
    }

    fn from_levels(levels: Vec<Vec<Vec<usize>>>) -> Self {
        let position = levels
            .iter()
            .map(|l: &Vec<Vec<usize>>| l.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect())
            .collect();
        WSets { levels, position }
    }

    pub fn level(&self, p: usize) -> &[Vec<usize>] {
        &self.levels[p]
    }

    pub fn len(&self, p: usize) -> usize {
        self.levels[p].len()
    }

    pub fn is_empty(&self, p: usize) -> bool {
        self.levels[p].is_empty()
    }

    /// Position of an already-canonical tuple.
    pub fn position(&self, tuple: &[usize]) -> Option<usize> {
        self.position.get(tuple.len())?.get(tuple).copied()
    }
}

/// Serializable Weyl data for one spec: a reduced word for `w₀` and the
/// canonical index sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylData {
    pub spec: GroupSpec,
    pub longest_word: Vec<usize>,
    pub wsets: Vec<Vec<Vec<usize>>>,
}

impl WeylData {
    pub fn compute(spec: &GroupSpec) -> Self {
        let cartan = spec.cartan_matrix();
        let wsets = WSets::new(&cartan);
        WeylData {
            spec: spec.clone(),
            longest_word: longest_element_of(&cartan).word,
            wsets: wsets.levels,
        }
    }

    pub fn wsets(&self) -> WSets {
        WSets::from_levels(self.wsets.clone())
    }
}

/// Breadth-first enumeration of `W` by matrices, returning each element's
/// length. `None` when `|W|` exceeds `cap`.
pub fn brute_force_lengths(cartan: &CartanMatrix, cap: usize) -> Option<HashMap<IntMatrix, usize>> {
    let n = cartan.rank();
    let gens: Vec<IntMatrix> = (0..n)
        .map(|i| simple_reflection_matrix(cartan, i))
        .collect();
    let mut lengths = HashMap::new();
    let mut queue = VecDeque::new();
    lengths.insert(identity(n), 0);
    queue.push_back(identity(n));
    while let Some(w) = queue.pop_front() {
        let l = lengths[&w];
        for g in &gens {
            let v = mat_mul(&w, g);
            if !lengths.contains_key(&v) {
                if lengths.len() >= cap {
                    return None;
                }
                lengths.insert(v.clone(), l + 1);
                queue.push_back(v);
            }
        }
    }
    Some(lengths)
}

/// Number of elements of length `l(w₀) − p`, by brute force.
pub fn brute_force_wset_count(cartan: &CartanMatrix, p: usize, cap: usize) -> Option<usize> {
    let lengths = brute_force_lengths(cartan, cap)?;
    let top = lengths.values().copied().max().unwrap_or(0);
    Some(lengths.values().filter(|&&l| l + p == top).count())
}

/// Distinct matrices among `w₀·s_t` over admissible tuples of length `p`.
pub fn distinct_wset_matrices(cartan: &CartanMatrix, p: usize) -> usize {
    let w0 = longest_element_of(cartan);
    admissible_tuples(cartan, p)
        .iter()
        .map(|t| wset_element(cartan, &w0, t).matrix)
        .collect::<HashSet<_>>()
        .len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::all_simple_types;

    fn cartan(s: &str) -> CartanMatrix {
        s.parse::<GroupSpec>().unwrap().cartan_matrix()
    }

    #[test]
    fn longest_element_lengths() {
        for t in all_simple_types(8) {
            let spec = GroupSpec::new(vec![t], 0);
            let w0 = longest_element(&spec);
            assert_eq!(w0.word.len(), t.positive_root_count(), "{t}");
            assert!(w0.compose(&w0).is_identity(), "{t}");
        }
        assert_eq!(longest_element(&"A1".parse().unwrap()).word, vec![0]);
    }

    #[test]
    fn longest_element_is_minus_a_diagram_automorphism() {
        for t in all_simple_types(8) {
            let c = t.cartan_matrix();
            let w0 = longest_element_of(&c);
            let n = c.rank();
            // −w₀ permutes the simple coroots and preserves the Cartan matrix.
            let mut perm = vec![usize::MAX; n];
            for j in 0..n {
                let col: Vec<i64> = (0..n).map(|i| -w0.matrix[i][j]).collect();
                let k = col.iter().position(|&v| v == 1).unwrap();
                assert!(
                    col.iter().enumerate().all(|(i, &v)| v == i64::from(i == k)),
                    "{t}"
                );
                perm[j] = k;
            }
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(c.get(perm[i], perm[j]), c.get(i, j), "{t}");
                }
            }
        }
    }

    #[test]
    fn wset_examples() {
        assert_eq!(enumerate_wset(&"A2".parse().unwrap(), 3).len(), 1);
        let a1a1 = enumerate_wset(&"A1xA1".parse().unwrap(), 2);
        assert_eq!(a1a1.len(), 1);
        assert_eq!(a1a1[0].tuple, vec![0, 1]);
        let b2: Vec<_> = enumerate_wset(&"B2".parse().unwrap(), 3)
            .into_iter()
            .map(|i| i.tuple)
            .collect();
        assert_eq!(b2, vec![vec![0, 1, 0], vec![1, 0, 1]]);
        assert_eq!(enumerate_wset(&"E8".parse().unwrap(), 1).len(), 8);
        assert_eq!(
            enumerate_wset(&"E8".parse().unwrap(), 0),
            vec![WSetIndex {
                level: 0,
                tuple: vec![],
                canonical: true
            }]
        );
    }

    #[test]
    fn canonicalize_examples() {
        let a2 = cartan("A2");
        assert_eq!(canonical_tuple(&a2, &[1, 0, 1]).unwrap(), vec![0, 1, 0]);
        let a3 = cartan("A3");
        // α_1 ⊥ α_3 in A3.
        assert_eq!(canonical_tuple(&a3, &[2, 0, 1]).unwrap(), vec![0, 2, 1]);
        let a1a1 = cartan("A1xA1");
        assert!(matches!(
            canonical_tuple(&a1a1, &[0, 1, 0]),
            Err(Error::InadmissibleIndex { .. })
        ));
        let idx = canonicalize_index(&a2, &WSetIndex::new(vec![1, 0, 1])).unwrap();
        assert!(idx.canonical);
        assert_eq!(canonicalize_index(&a2, &idx).unwrap(), idx);
    }

    #[test]
    fn wset_counts_match_brute_force() {
        let mut specs: Vec<String> = all_simple_types(4)
            .iter()
            .map(ToString::to_string)
            .collect();
        specs
            .extend(["A1xA1", "A2xA1", "G2xA1", "B2xA2", "A1xA1xA1", "D5", "A5"].map(String::from));
        for s in &specs {
            let c = cartan(s);
            let lengths = brute_force_lengths(&c, 100_000).unwrap();
            let top = *lengths.values().max().unwrap();
            for p in 0..=3 {
                let expected = lengths.values().filter(|&&l| l + p == top).count();
                assert_eq!(enumerate_wset_of(&c, p).len(), expected, "{s} p={p}");
                assert_eq!(distinct_wset_matrices(&c, p), expected, "{s} p={p}");
            }
        }
    }

    #[test]
    fn canonical_equality_iff_matrix_equality() {
        for s in [
            "A2", "A3", "A4", "B2", "B3", "C3", "B4", "C4", "D4", "F4", "G2", "A1xA1", "A2xB2",
            "A1xG2",
        ] {
            let c = cartan(s);
            let w0 = longest_element_of(&c);
            for p in 1..=3 {
                let tuples = admissible_tuples(&c, p);
                let data: Vec<_> = tuples
                    .iter()
                    .map(|t| {
                        (
                            canonical_tuple(&c, t).unwrap(),
                            wset_element(&c, &w0, t).matrix,
                        )
                    })
                    .collect();
                for (ca, ma) in &data {
                    for (cb, mb) in &data {
                        assert_eq!(ca == cb, ma == mb, "{s}");
                    }
                }
            }
        }
    }

    #[test]
    fn weyl_data_round_trips() {
        let spec: GroupSpec = "A3xG2xT1".parse().unwrap();
        let d = WeylData::compute(&spec);
        let json = serde_json::to_string(&d).unwrap();
        let back: WeylData = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        let w = back.wsets();
        assert_eq!(w.position(&[0, 1]), Some(0));
        assert_eq!(w.len(1), 5);
    }

    #[test]
    fn group_orders() {
        assert_eq!(weyl_group_order(&"E8".parse().unwrap()), 696_729_600);
        for s in ["A3", "B3", "G2", "F4", "D4", "A1xB2"] {
            let c = cartan(s);
            let n = brute_force_lengths(&c, 100_000).unwrap().len() as u128;
            assert_eq!(n, weyl_group_order(&s.parse().unwrap()), "{s}");
        }
        assert!(brute_force_lengths(&cartan("E7"), 1000).is_none());
    }
}
