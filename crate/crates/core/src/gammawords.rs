//! Words `f = Σ f(a)[a]` over the nonzero residues `a = j/N`, the exponent bookkeeping
//! for products `Γ(f) = Π Γ(a)^{f(a)}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::bigreal::{BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::report::{residual, VerificationReport};
use crate::rootkit::RootSystem;
use crate::specialfn::ln_gamma_rational;

/// An element of the free abelian group on `{1/N, ..., (N−1)/N}`.
///
/// Serialized as `{"N": 12, "coeffs": {"1": -1, "3": 1}}`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord")]
pub struct GammaWord {
    #[serde(rename = "N")]
    modulus: u64,
    coeffs: BTreeMap<u64, i64>,
}

#[derive(Deserialize)]
struct RawWord {
    #[serde(rename = "N")]
    modulus: u64,
    #[serde(default)]
    coeffs: BTreeMap<u64, i64>,
}

impl TryFrom<RawWord> for GammaWord {
    type Error = Error;

    fn try_from(raw: RawWord) -> Result<Self> {
        GammaWord::new(raw.modulus, raw.coeffs)
    }
}

impl GammaWord {
    /// Builds a word from `(j, f(j/N))` pairs; repeated `j` accumulate.
    pub fn new(modulus: u64, coeffs: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Domain { function: "GammaWord", value: format!("N = {modulus}") });
        }
        let mut word = Self::zero(modulus);
        for (j, c) in coeffs {
            if j == 0 || j >= modulus {
                return Err(Error::Domain { function: "GammaWord", value: format!("residue {j}/{modulus}") });
            }
            word.bump(j, c);
        }
        Ok(word)
    }

    pub fn zero(modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Self { modulus, coeffs: BTreeMap::new() }
    }

    /// The generator `[j/N]`.
    pub fn single(modulus: u64, j: u64) -> Result<Self> {
        Self::new(modulus, [(j, 1)])
    }

    fn bump(&mut self, j: u64, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(j).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&j);
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `f(j/N)`; `j` is reduced mod `N` and the zero residue carries nothing.
    pub fn get(&self, j: u64) -> i64 {
        self.coeffs.get(&(j % self.modulus)).copied().unwrap_or(0)
    }

    /// Nonzero coefficients in increasing residue order.
    pub fn coeffs(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.coeffs.iter().map(|(&j, &c)| (j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Σ f(a), the total exponent.
    pub fn degree(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// `f̃(a) = f(a) − f(1 − a)`.
    pub fn tilde(&self) -> Self {
        let mut out = Self::zero(self.modulus);
        for (&j, &c) in &self.coeffs {
            out.bump(j, c);
            out.bump(self.modulus - j, -c);
        }
        out
    }

    /// `n(f) = Σ ⟨a⟩ f(a)`, exact.
    pub fn n_of(&self) -> Rational64 {
        let num: i64 = self.coeffs.iter().map(|(&j, &c)| j as i64 * c).sum();
        Rational64::new(num, self.modulus as i64)
    }

    /// `(u f)(a) = f(u a)` for a unit `u` modulo `N`.
    pub fn u_act(&self, u: u64) -> Result<Self> {
        let n = self.modulus;
        if u.gcd(&n) != 1 {
            return Err(Error::NotAUnit { u, modulus: n });
        }
        let u = u % n;
        let inv = mod_inverse(u, n);
        let mut out = Self::zero(n);
        // (uf)(j) = f(uj), so the coefficient f(k) lands on j = u^{-1} k
        for (&k, &c) in &self.coeffs {
            out.bump((inv as u128 * k as u128 % n as u128) as u64, c);
        }
        Ok(out)
    }

    /// Membership in `C_N` and, when it holds, the weight `k = n(f)`.
    pub fn classify(&self) -> MembershipVerdict {
        let n = self.n_of();
        if !n.is_integer() {
            return MembershipVerdict { in_c: false, k: None, witness: Some(Witness::NonIntegral(n)) };
        }
        for u in units(self.modulus) {
            let nu = self.u_act(u).expect("unit").n_of();
            if nu != n {
                return MembershipVerdict { in_c: false, k: None, witness: Some(Witness::Unit { u, n_u: nu }) };
            }
        }
        MembershipVerdict { in_c: true, k: Some(n.to_integer()), witness: None }
    }

    /// `Γ(f) = Π Γ(j/N)^{f(j)}` by summing logarithms.
    pub fn evaluate(&self, ctx: PrecisionContext) -> Result<BigReal> {
        let mut table = LnGammaTable::new(self.modulus, ctx);
        self.evaluate_with(&mut table)
    }

    /// As [`GammaWord::evaluate`], reusing `ln Γ(j/N)` values across words.
    pub fn evaluate_with(&self, table: &mut LnGammaTable) -> Result<BigReal> {
        if table.modulus != self.modulus {
            return Err(Error::ModulusMismatch { word: self.modulus, site: table.modulus });
        }
        let ctx = table.ctx;
        let mut acc = BigReal::zero(ctx);
        for (&j, &c) in &self.coeffs {
            acc = acc + table.get(j)? * BigReal::from_i64(c, ctx);
        }
        Ok(acc.exp())
    }

    /// Re-expresses the word over a multiple `M` of `N`.
    pub fn lift(&self, multiple: u64) -> Result<Self> {
        if multiple % self.modulus != 0 {
            return Err(Error::ModulusMismatch { word: self.modulus, site: multiple });
        }
        let scale = multiple / self.modulus;
        Self::new(multiple, self.coeffs.iter().map(|(&j, &c)| (j * scale, c)))
    }
}

/// Memoized `ln Γ(j/N)`.
#[derive(Debug, Clone)]
pub struct LnGammaTable {
    modulus: u64,
    ctx: PrecisionContext,
    values: HashMap<u64, BigReal>,
}

impl LnGammaTable {
    pub fn new(modulus: u64, ctx: PrecisionContext) -> Self {
        Self { modulus, ctx, values: HashMap::new() }
    }

    pub fn get(&mut self, j: u64) -> Result<BigReal> {
        if let Some(v) = self.values.get(&j) {
            return Ok(v.clone());
        }
        let v = ln_gamma_rational(Rational64::new(j as i64, self.modulus as i64), self.ctx)?;
        self.values.insert(j, v.clone());
        Ok(v)
    }
}

fn mod_inverse(u: u64, n: u64) -> u64 {
    let e = (u as i64).extended_gcd(&(n as i64));
    e.x.rem_euclid(n as i64) as u64
}

/// The group `U_N = (ℤ/N)^*` in increasing order.
pub fn units(n: u64) -> Vec<u64> {
    (1..n.max(2)).filter(|u| u.gcd(&n) == 1).collect()
}

impl Add for &GammaWord {
    type Output = GammaWord;

    /// Words over different moduli are added over the least common multiple.
    fn add(self, rhs: &GammaWord) -> GammaWord {
        let m = self.modulus.lcm(&rhs.modulus);
        let mut out = self.lift(m).expect("multiple");
        for (j, c) in rhs.lift(m).expect("multiple").coeffs() {
            out.bump(j, c);
        }
        out
    }
}

impl Add for GammaWord {
    type Output = GammaWord;
    fn add(self, rhs: GammaWord) -> GammaWord {
        &self + &rhs
    }
}

impl Neg for &GammaWord {
    type Output = GammaWord;
    fn neg(self) -> GammaWord {
        GammaWord { modulus: self.modulus, coeffs: self.coeffs.iter().map(|(&j, &c)| (j, -c)).collect() }
    }
}

impl Sub for &GammaWord {
    type Output = GammaWord;
    fn sub(self, rhs: &GammaWord) -> GammaWord {
        self + &(-rhs)
    }
}

impl fmt::Display for GammaWord {
    /// `- [1] + [3] - 2[6]`; the empty word prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (&j, &c)) in self.coeffs.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            match (idx, c < 0) {
                (0, false) => {}
                (0, true) => f.write_str("- ")?,
                _ => write!(f, " {sign} ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "[{j}]")?;
        }
        Ok(())
    }
}

/// Why a word fails the membership test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    NonIntegral(Rational64),
    Unit { u: u64, n_u: Rational64 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NonIntegral(n) => write!(f, "n(f) = {n} is not an integer"),
            Witness::Unit { u, n_u } => write!(f, "n({u}f) = {n_u} differs from n(f)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub in_c: bool,
    pub k: Option<i64>,
    pub witness: Option<Witness>,
}

impl MembershipVerdict {
    pub fn is_in(&self, k: i64) -> bool {
        self.in_c && self.k == Some(k)
    }
}

/// `f_{R,i}` over `N = h`: `f(j/h) = −Σ_{α>0, ht α = j} (α∨|α_i)`, so that `Γ(f) = Γ(R, α_i)`.
pub fn word_of_root_system(rs: &RootSystem, node: usize) -> Result<GammaWord> {
    let h = rs.coxeter_number() as u64;
    let mut pairs = Vec::with_capacity(rs.positive_roots().len());
    for alpha in rs.positive_roots() {
        let ht = rs.height(alpha)? as u64;
        pairs.push((ht, -rs.coroot_pairing(alpha, node)?));
    }
    GammaWord::new(h, pairs)
}

/// `Σ_{α>0} (α_i|α∨) ht(α)`.
pub fn corollary_4_4(rs: &RootSystem, node: usize) -> Result<i64> {
    let mut total = 0;
    for alpha in rs.positive_roots() {
        total += rs.coroot_pairing(alpha, node)? * rs.height(alpha)?;
    }
    Ok(total)
}

/// Largest `|n(uf) − k|` over `u ∈ U_N`; zero exactly when `f ∈ C_{N,k}`.
fn membership_defect(f: &GammaWord, k: i64) -> Rational64 {
    units(f.modulus())
        .into_iter()
        .map(|u| (f.u_act(u).expect("unit").n_of() - k).abs())
        .max()
        .unwrap_or_default()
}

/// `f_{R,i} ∈ C_{h,−1}` and `f̃_{R,i} ∈ C_{h,0}` for every node, as exact defects.
pub fn verify_proposition_4_2(rs: &RootSystem, ctx: PrecisionContext, tol: &BigReal) -> Result<VerificationReport> {
    let mut residuals = Vec::with_capacity(2 * rs.rank());
    for i in 1..=rs.rank() {
        let f = word_of_root_system(rs, i)?;
        residuals.push(residual(format!("f[{i}]"), BigReal::from_rational(&membership_defect(&f, -1), ctx)));
        residuals.push(residual(format!("tilde[{i}]"), BigReal::from_rational(&membership_defect(&f.tilde(), 0), ctx)));
    }
    Ok(VerificationReport::new("4.2", rs.label().to_string(), tol.clone(), residuals))
}

/// `|Σ_{α>0} (α_i|α∨) ht(α) − h|` for every node.
pub fn verify_corollary_4_4(rs: &RootSystem, ctx: PrecisionContext, tol: &BigReal) -> Result<VerificationReport> {
    let h = rs.coxeter_number();
    let mut residuals = Vec::with_capacity(rs.rank());
    for i in 1..=rs.rank() {
        residuals.push(residual(format!("sum[{i}]"), BigReal::from_i64(corollary_4_4(rs, i)? - h, ctx)));
    }
    Ok(VerificationReport::new("4.4", rs.label().to_string(), tol.clone(), residuals))
}

/// `n(f) = Σ ⟨a⟩ f(a)`.
pub fn n_of(f: &GammaWord) -> Rational64 {
    f.n_of()
}
