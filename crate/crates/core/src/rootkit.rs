//! Exact construction of finite irreducible root systems and their affine extensions.
//!
//! Conventions:
//!
//! * Nodes follow the Bourbaki planches; simple roots are numbered `1..=r` in the
//!   public API and the affine node is `0`.
//! * The invariant form is scaled so that long roots have squared length 2. Under
//!   this scaling every coroot pairing and comark is an integer and `(α|ρ∨)` is the
//!   height of `α`.
//! * Roots are integer coefficient vectors over the simple roots; the Gram matrix is
//!   rational. Nothing here touches floating point.
//! * `cartan[i][j] = (α_i|α_j∨)`. The affine matrix uses the Kac convention
//!   `Â[i][j] = (α_i∨|α_j)`, so that `Â·δ = 0`; its finite block is the transpose of
//!   `cartan`. `Â∨ = Âᵀ` annihilates the comarks `δ∨`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
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

    fn from_letter(c: char) -> Option<Self> {
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

    fn admits(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

/// Cartan type of a finite irreducible root system, e.g. `E8` or `B6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSystemLabel {
    family: Family,
    rank: usize,
}

impl RootSystemLabel {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if family.admits(rank) {
            Ok(Self { family, rank })
        } else {
            Err(Error::InvalidRank { family: family.letter(), rank })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// Every supported type with classical ranks capped at `max_classical_rank`, in
    /// label order: A1.., B2.., C2.., D3.., E6, E7, E8, F4, G2.
    pub fn battery(max_classical_rank: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for (family, min) in [(Family::A, 1), (Family::B, 2), (Family::C, 2), (Family::D, 3)] {
            out.extend((min..=max_classical_rank).map(|rank| Self { family, rank }));
        }
        out.extend((6..=8).map(|rank| Self { family: Family::E, rank }));
        out.push(Self { family: Family::F, rank: 4 });
        out.push(Self { family: Family::G, rank: 2 });
        out
    }

    /// The default verification battery: classical ranks up to 12 plus the exceptionals.
    pub fn default_battery() -> Vec<Self> {
        Self::battery(12)
    }
}

impl fmt::Display for RootSystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for RootSystemLabel {
    type Err = Error;

    /// Accepts `E8`, `e8`, `E_8`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLabel(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars.next().and_then(Family::from_letter).ok_or_else(bad)?;
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest.parse().map_err(|_| bad())?;
        Self::new(family, rank)
    }
}

/// An irreducible finite root system with its Cartan and affine data.
#[derive(Debug, Clone)]
pub struct RootSystem {
    label: RootSystemLabel,
    gram: Vec<Vec<Rational64>>,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    h: i64,
    h_dual: i64,
    marks: Vec<i64>,
    comarks: Vec<i64>,
}

impl RootSystem {
    pub fn new(label: RootSystemLabel) -> Self {
        let gram = gram_matrix(label);
        let r = label.rank;
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let v = Rational64::from_integer(2) * gram[i][j] / gram[j][j];
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let positive_roots = close_positive_roots(&cartan);
        let index = positive_roots.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect();
        let theta = positive_roots.last().expect("at least one root").clone();
        let h = theta.iter().sum::<i64>() + 1;
        let mut marks = Vec::with_capacity(r + 1);
        marks.push(1);
        marks.extend(theta.iter().copied());
        let mut comarks = Vec::with_capacity(r + 1);
        comarks.push(1);
        for i in 0..r {
            let c = Rational64::from_integer(theta[i]) * gram[i][i] / Rational64::from_integer(2);
            debug_assert!(c.is_integer());
            comarks.push(c.to_integer());
        }
        let h_dual = comarks.iter().sum();
        Self { label, gram, cartan, positive_roots, index, h, h_dual, marks, comarks }
    }

    pub fn label(&self) -> RootSystemLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.label.rank
    }

    /// `(α_i|α_j)` for simple roots, long roots normalized to 2.
    pub fn gram(&self) -> &[Vec<Rational64>] {
        &self.gram
    }

    /// `cartan()[i][j] = (α_{i+1}|α_{j+1}∨)`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Positive roots sorted by height, then lexicographically.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn coxeter_number(&self) -> i64 {
        self.h
    }

    pub fn dual_coxeter_number(&self) -> i64 {
        self.h_dual
    }

    /// `(n_0, n_1, ..., n_r)` with `n_0 = 1`.
    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    /// `(n_0∨, ..., n_r∨)` with `n_i∨ = n_i (α_i|α_i)/2`.
    pub fn comarks(&self) -> &[i64] {
        &self.comarks
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive_roots.last().expect("non-empty")
    }

    /// Exact `(a|b)` for coefficient vectors.
    pub fn inner_product(&self, a: &[i64], b: &[i64]) -> Rational64 {
        let mut acc = Rational64::zero();
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    acc += self.gram[i][j] * Rational64::from_integer(ai * bj);
                }
            }
        }
        acc
    }

    pub fn is_positive_root(&self, alpha: &[i64]) -> bool {
        self.index.contains_key(alpha)
    }

    pub fn is_root(&self, alpha: &[i64]) -> bool {
        if self.is_positive_root(alpha) {
            return true;
        }
        let neg: Vec<i64> = alpha.iter().map(|c| -c).collect();
        self.is_positive_root(&neg)
    }

    fn check_root(&self, alpha: &[i64]) -> Result<()> {
        if alpha.len() == self.rank() && self.is_root(alpha) {
            Ok(())
        } else {
            Err(Error::NotARoot(alpha.to_vec()))
        }
    }

    fn check_node(&self, node: usize) -> Result<usize> {
        if (1..=self.rank()).contains(&node) {
            Ok(node - 1)
        } else {
            Err(Error::IndexOutOfRange { index: node, rank: self.rank() })
        }
    }

    /// Unit vector of the simple root `α_node` (1-based).
    pub fn simple_root(&self, node: usize) -> Result<Vec<i64>> {
        let i = self.check_node(node)?;
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        Ok(v)
    }

    /// `(α∨|α_node) = 2(α|α_node)/(α|α)`, which also equals `(α_node|α∨)`.
    pub fn coroot_pairing(&self, alpha: &[i64], node: usize) -> Result<i64> {
        self.check_root(alpha)?;
        let i = self.check_node(node)?;
        let mut e = vec![0; self.rank()];
        e[i] = 1;
        let v = Rational64::from_integer(2) * self.inner_product(alpha, &e) / self.inner_product(alpha, alpha);
        debug_assert!(v.is_integer());
        Ok(v.to_integer())
    }

    /// `(α|α_node∨) = 2(α|α_node)/(α_node|α_node)`: the Cartan integer against a simple coroot.
    pub fn simple_coroot_pairing(&self, alpha: &[i64], node: usize) -> Result<i64> {
        self.check_root(alpha)?;
        let i = self.check_node(node)?;
        Ok(alpha.iter().enumerate().map(|(j, c)| c * self.cartan[j][i]).sum())
    }

    /// Height (coefficient sum) of a positive root.
    pub fn height(&self, alpha: &[i64]) -> Result<i64> {
        if !self.is_positive_root(alpha) {
            return Err(Error::NotARoot(alpha.to_vec()));
        }
        Ok(alpha.iter().sum())
    }

    /// `(α|ρ∨)` evaluated from the definition `ρ∨ = ½ Σ_{β>0} β∨`.
    pub fn rho_vee_pairing(&self, alpha: &[i64]) -> Rational64 {
        let mut acc = Rational64::zero();
        for beta in &self.positive_roots {
            acc += Rational64::from_integer(2) * self.inner_product(alpha, beta) / self.inner_product(beta, beta);
        }
        acc / Rational64::from_integer(2)
    }

    /// Affine Cartan matrix `Â[i][j] = (α_i∨|α_j)`, `i, j ∈ 0..=r`, with `α_0 = -θ`.
    pub fn affine_cartan_matrix(&self) -> Vec<Vec<i64>> {
        let nodes = self.affine_nodes();
        nodes
            .iter()
            .map(|ai| {
                let norm = self.inner_product(ai, ai);
                nodes
                    .iter()
                    .map(|aj| {
                        let v = Rational64::from_integer(2) * self.inner_product(ai, aj) / norm;
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect()
    }

    /// `Â∨ = Âᵀ`, the Cartan matrix of the dual affine diagram.
    pub fn dual_affine_cartan_matrix(&self) -> Vec<Vec<i64>> {
        transpose(&self.affine_cartan_matrix())
    }

    fn affine_nodes(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut nodes = Vec::with_capacity(r + 1);
        nodes.push(self.highest_root().iter().map(|c| -c).collect());
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            nodes.push(e);
        }
        nodes
    }

    /// Simple reflection `s_node(v) = v - (v|α_node∨) α_node` on coefficient vectors.
    pub fn reflect(&self, v: &[i64], node: usize) -> Result<Vec<i64>> {
        let i = self.check_node(node)?;
        let pairing: i64 = v.iter().enumerate().map(|(j, c)| c * self.cartan[j][i]).sum();
        let mut out = v.to_vec();
        out[i] -= pairing;
        Ok(out)
    }
}

pub fn build_root_system(label: RootSystemLabel) -> RootSystem {
    RootSystem::new(label)
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let k = m.first().map_or(0, Vec::len);
    (0..k).map(|j| (0..n).map(|i| m[i][j]).collect()).collect()
}

/// Simple-root Gram matrix with long roots of squared length 2.
fn gram_matrix(label: RootSystemLabel) -> Vec<Vec<Rational64>> {
    let r = label.rank;
    let two = Rational64::from_integer(2);
    let one = Rational64::one();
    let mut len = vec![two; r];
    let mut bonds: Vec<(usize, usize)> = Vec::new();
    match label.family {
        Family::A | Family::B | Family::C => bonds.extend((0..r - 1).map(|i| (i, i + 1))),
        Family::D => {
            bonds.extend((0..r - 2).map(|i| (i, i + 1)));
            bonds.push((r - 3, r - 1));
        }
        Family::E => {
            bonds.extend([(0, 2), (2, 3), (3, 4), (1, 3)]);
            bonds.extend((4..r - 1).map(|i| (i, i + 1)));
        }
        Family::F => bonds.extend([(0, 1), (1, 2), (2, 3)]),
        Family::G => bonds.push((0, 1)),
    }
    match label.family {
        Family::B => len[r - 1] = one,
        Family::C => len[..r - 1].fill(one),
        Family::F => {
            len[2] = one;
            len[3] = one;
        }
        Family::G => len[0] = Rational64::new(2, 3),
        _ => {}
    }
    let mut gram = vec![vec![Rational64::zero(); r]; r];
    for i in 0..r {
        gram[i][i] = len[i];
    }
    for (i, j) in bonds {
        // adjacent simple roots: (α_i|α_j) = -max(|α_i|², |α_j|²)/2
        let v = -len[i].max(len[j]) / two;
        gram[i][j] = v;
        gram[j][i] = v;
    }
    gram
}

/// Positive roots from the simple roots by root strings: `β + α_i` is a root iff
/// `q > 0` where `p - q = (β|α_i∨)` and `p` is how far the string extends downward.
fn close_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = cartan.len();
    let simple: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            e
        })
        .collect();
    let mut known: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut layer = simple;
    let mut all = layer.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..r {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..r).map(|j| beta[j] * cartan[j][i]).sum();
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then_with(|| a.cmp(b)));
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::new(s.parse().unwrap())
    }

    #[test]
    fn rank_constraints() {
        assert!(RootSystemLabel::new(Family::A, 0).is_err());
        assert!(RootSystemLabel::new(Family::B, 1).is_err());
        assert!(RootSystemLabel::new(Family::C, 1).is_err());
        assert!(RootSystemLabel::new(Family::D, 2).is_err());
        assert!(RootSystemLabel::new(Family::E, 5).is_err());
        assert!(RootSystemLabel::new(Family::E, 9).is_err());
        assert!(RootSystemLabel::new(Family::F, 3).is_err());
        assert!(RootSystemLabel::new(Family::G, 3).is_err());
        assert!(RootSystemLabel::new(Family::D, 3).is_ok());
    }

    #[test]
    fn label_parsing() {
        assert_eq!("E8".parse::<RootSystemLabel>().unwrap().to_string(), "E8");
        assert_eq!("b_6".parse::<RootSystemLabel>().unwrap().to_string(), "B6");
        assert!("X3".parse::<RootSystemLabel>().is_err());
        assert!("A".parse::<RootSystemLabel>().is_err());
        assert!(matches!("F5".parse::<RootSystemLabel>(), Err(Error::InvalidRank { .. })));
    }

    #[test]
    fn a1() {
        let a1 = rs("A1");
        assert_eq!(a1.positive_roots(), &[vec![1]]);
        assert_eq!(a1.coxeter_number(), 2);
        assert_eq!(a1.marks(), &[1, 1]);
        assert_eq!(a1.affine_cartan_matrix(), vec![vec![2, -2], vec![-2, 2]]);
    }

    #[test]
    fn e8_counts() {
        let e8 = rs("E8");
        assert_eq!(e8.positive_roots().len(), 120);
        assert_eq!(e8.coxeter_number(), 30);
        assert_eq!(e8.marks(), &[1, 2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(e8.height(e8.highest_root()).unwrap(), 29);
    }

    #[test]
    fn g2_data() {
        let g2 = rs("G2");
        assert_eq!(g2.positive_roots().len(), 6);
        assert_eq!(g2.coxeter_number(), 6);
        assert_eq!(g2.marks(), &[1, 3, 2]);
        assert_eq!(g2.comarks(), &[1, 1, 2]);
        assert_eq!(g2.dual_coxeter_number(), 4);
        assert_eq!(g2.cartan(), &[vec![2, -1], vec![-3, 2]]);
    }

    #[test]
    fn e6_heights_and_marks() {
        let e6 = rs("E6");
        assert_eq!(e6.height(e6.highest_root()).unwrap(), 11);
        assert_eq!(e6.marks(), &[1, 1, 2, 2, 3, 2, 1]);
        let ahat = e6.affine_cartan_matrix();
        assert!(mat_vec(&ahat, e6.marks()).iter().all(|&x| x == 0));
    }

    #[test]
    fn coroot_pairings() {
        let a2 = rs("A2");
        assert_eq!(a2.coroot_pairing(&[1, 0], 2).unwrap(), -1);
        let b2 = rs("B2");
        // α1 + α2 is short in B2: (α|α) = 1, (α|α_1) = 2 - 1 = 1
        assert_eq!(b2.inner_product(&[1, 1], &[1, 1]), Rational64::one());
        assert_eq!(b2.coroot_pairing(&[1, 1], 1).unwrap(), 2);
        assert_eq!(b2.coroot_pairing(&[1, 1], 2).unwrap(), 0);
        assert!(matches!(b2.coroot_pairing(&[2, 0], 1), Err(Error::NotARoot(_))));
        assert!(matches!(b2.coroot_pairing(&[1, 1], 3), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(b2.coroot_pairing(&[-1, -1], 1).unwrap(), -2);
    }

    #[test]
    fn g2_pairing_height_sum_is_coxeter() {
        let g2 = rs("G2");
        let total: i64 = g2
            .positive_roots()
            .iter()
            .map(|a| g2.coroot_pairing(a, 1).unwrap() * g2.height(a).unwrap())
            .sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn height_rejects_non_roots() {
        let a3 = rs("A3");
        assert_eq!(a3.height(&[0, 1, 0]).unwrap(), 1);
        assert!(a3.height(&[1, 0, 1]).is_err());
        assert!(a3.height(&[-1, 0, 0]).is_err());
    }

    #[test]
    fn dual_affine_annihilates_comarks() {
        for label in RootSystemLabel::battery(6) {
            let r = RootSystem::new(label);
            assert!(mat_vec(&r.dual_affine_cartan_matrix(), r.comarks()).iter().all(|&x| x == 0), "{label}");
        }
    }
}
