//! Gauss and Jacobi sums over `F_p` for primes `p ≡ 1 (mod N)`, the normalized values
//! `ψ_f(p) = p^{-k} J(f, p)`, and recognition of numbers in `ℤ[ζ_N]`.
//!
//! Characters: with `g` the least primitive root mod `p`, the residue `a = j/N` gives
//! `χ_a(g^k) = e^{2πi jk/N}`; this fixes `t` by sending `g^{(p−1)/N}` to `e^{2πi/N}`.
//! The additive character is `Ψ_c(x) = e^{2πi cx/p}` (`c = 1` unless stated).

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::bigreal::{BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::gammawords::GammaWord;

pub const SEARCH_LIMIT: u64 = 10_000_000;

/// A complex number as a pair of [`BigReal`]s.
#[derive(Debug, Clone)]
pub struct Complex {
    pub re: BigReal,
    pub im: BigReal,
}

impl Complex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Self { re, im }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        Self::new(BigReal::zero(ctx), BigReal::zero(ctx))
    }

    pub fn one(ctx: PrecisionContext) -> Self {
        Self::new(BigReal::one(ctx), BigReal::zero(ctx))
    }

    pub fn from_real(re: BigReal) -> Self {
        let ctx = re.context();
        Self::new(re, BigReal::zero(ctx))
    }

    /// `e^{2πi k/n}`.
    pub fn root_of_unity(k: i64, n: i64, ctx: PrecisionContext) -> Self {
        let k = k.rem_euclid(n);
        let theta = BigReal::pi(ctx) * BigReal::from_ratio(2 * k, n, ctx);
        Self::new(theta.cos(), theta.sin())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    /// `|z|²`.
    pub fn norm_sqr(&self) -> BigReal {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt().expect("nonnegative")
    }

    pub fn scale(&self, s: &BigReal) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    pub fn powi(&self, n: u64) -> Self {
        let ctx = self.re.context();
        let mut out = Self::one(ctx);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        out
    }

    /// `[re, im]` as decimal strings.
    pub fn to_json(&self, sig: usize) -> Value {
        json!([self.re.to_decimal(sig), self.im.to_decimal(sig)])
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(20);
        let im = self.im.to_decimal(sig);
        match im.strip_prefix('-') {
            Some(rest) => write!(f, "{} - {}i", self.re.to_decimal(sig), rest),
            None => write!(f, "{} + {}i", self.re.to_decimal(sig), im),
        }
    }
}

/// A degree-one prime `p ≡ 1 (mod N)` with a fixed primitive root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeSite {
    pub n: u64,
    pub p: u64,
    pub g: u64,
}

impl PrimeSite {
    /// Validates a user-supplied prime.
    pub fn new(n: u64, p: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain { function: "PrimeSite", value: format!("N = {n}") });
        }
        if !is_prime(p) || p % n != 1 || (2 * n) % p == 0 {
            return Err(Error::Domain { function: "PrimeSite", value: format!("p = {p} for N = {n}") });
        }
        Ok(Self { n, p, g: primitive_root(p) })
    }
}

/// Smallest prime `p ≥ p_min` with `p ≡ 1 (mod N)` and `p ∤ 2N`.
pub fn find_site(n: u64, p_min: u64) -> Result<PrimeSite> {
    if n < 2 {
        return Err(Error::Domain { function: "find_site", value: format!("N = {n}") });
    }
    // first candidate ≡ 1 mod N at or above p_min
    let mut p = if p_min <= 1 { 1 } else { p_min + (n - (p_min - 1) % n) % n };
    while p <= SEARCH_LIMIT {
        if p > 1 && is_prime(p) && (2 * n) % p != 0 {
            return Ok(PrimeSite { n, p, g: primitive_root(p) });
        }
        p += n;
    }
    Err(Error::SearchExhausted { modulus: n, limit: SEARCH_LIMIT })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least primitive root modulo a prime.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).expect("primes have primitive roots")
}

/// Discrete logarithms `ind_g(x)` for `x = 1..p−1` (index 0 unused).
fn index_table(site: &PrimeSite) -> Vec<u64> {
    let p = site.p;
    let mut ind = vec![0u64; p as usize];
    let mut x = 1u64;
    for k in 0..p - 1 {
        ind[x as usize] = k;
        x = x * site.g % p;
    }
    ind
}

/// `χ_{j/N}(x)` as an exponent `m` with value `e^{2πi m/N}`.
pub fn character_exponent(site: &PrimeSite, j: u64, x: u64) -> u64 {
    let ind = index_table(site);
    (j % site.n) * (ind[(x % site.p) as usize] % site.n) % site.n
}

/// Partial sums `S_k = Σ_{ind x ≡ k (N)} Ψ_c(x)` from which every `g(j/N)` follows.
#[derive(Debug, Clone)]
pub struct GaussSumTable {
    site: PrimeSite,
    additive: u64,
    ctx: PrecisionContext,
    partial: Vec<Complex>,
}

impl GaussSumTable {
    pub fn new(site: PrimeSite, ctx: PrecisionContext) -> Self {
        Self::with_additive(site, 1, ctx).expect("c = 1 is nonzero")
    }

    /// Uses `Ψ_c(x) = e^{2πi cx/p}`; `c` must be nonzero mod `p`.
    pub fn with_additive(site: PrimeSite, c: u64, ctx: PrecisionContext) -> Result<Self> {
        if c % site.p == 0 {
            return Err(Error::Domain { function: "additive character", value: format!("c = {c} mod {}", site.p) });
        }
        let ind = index_table(&site);
        let mut partial = vec![Complex::zero(ctx); site.n as usize];
        for x in 1..site.p {
            let k = (ind[x as usize] % site.n) as usize;
            let psi = Complex::root_of_unity(((c % site.p) * x % site.p) as i64, site.p as i64, ctx);
            partial[k] = &partial[k] + &psi;
        }
        Ok(Self { site, additive: c, ctx, partial })
    }

    pub fn site(&self) -> PrimeSite {
        self.site
    }

    pub fn additive(&self) -> u64 {
        self.additive
    }

    /// `g(j/N, p) = −Σ_x χ_{j/N}(x) Ψ(x)`.
    pub fn gauss(&self, j: u64) -> Result<Complex> {
        let n = self.site.n;
        if j % n == 0 {
            return Err(Error::Domain { function: "gauss_sum", value: format!("{j}/{n}") });
        }
        let mut acc = Complex::zero(self.ctx);
        for (k, s) in self.partial.iter().enumerate() {
            let zeta = Complex::root_of_unity(((j % n) * k as u64 % n) as i64, n as i64, self.ctx);
            acc = &acc + &(&zeta * s);
        }
        Ok(Complex::new(-acc.re, -acc.im))
    }

    /// `J(f, p) = Π g(a, p)^{f(a)}` with `g^{-1} = conj(g)/p`.
    pub fn jacobi(&self, f: &GammaWord) -> Result<Complex> {
        if f.modulus() != self.site.n {
            return Err(Error::ModulusMismatch { word: f.modulus(), site: self.site.n });
        }
        let p = BigReal::from_i64(self.site.p as i64, self.ctx);
        let mut acc = Complex::one(self.ctx);
        for (j, c) in f.coeffs() {
            let g = self.gauss(j)?;
            let factor = if c > 0 { g } else { g.conj().scale(&p.recip()) };
            acc = &acc * &factor.powi(c.unsigned_abs());
        }
        Ok(acc)
    }

    /// `ψ_f(p) = p^{-k} J(f, p)` for `f ∈ C_{N,k}`.
    pub fn hecke(&self, f: &GammaWord) -> Result<Complex> {
        let verdict = f.classify();
        let Some(k) = verdict.k.filter(|_| verdict.in_c) else {
            let why = verdict.witness.map(|w| w.to_string()).unwrap_or_default();
            return Err(Error::NotInC(format!("{f}: {why}")));
        };
        let scale = BigReal::from_i64(self.site.p as i64, self.ctx).powi(-k);
        Ok(self.jacobi(f)?.scale(&scale))
    }
}

/// A Gauss or Jacobi sum together with the data defining it.
#[derive(Debug, Clone)]
pub struct CharacterSum {
    pub value: Complex,
    pub site: PrimeSite,
    pub word: GammaWord,
}

pub fn gauss_sum(j: u64, site: &PrimeSite, ctx: PrecisionContext) -> Result<CharacterSum> {
    let value = GaussSumTable::new(*site, ctx).gauss(j)?;
    Ok(CharacterSum { value, site: *site, word: GammaWord::single(site.n, j % site.n)? })
}

pub fn jacobi_sum(f: &GammaWord, site: &PrimeSite, ctx: PrecisionContext) -> Result<CharacterSum> {
    let value = GaussSumTable::new(*site, ctx).jacobi(f)?;
    Ok(CharacterSum { value, site: *site, word: f.clone() })
}

pub fn hecke_value(f: &GammaWord, site: &PrimeSite, ctx: PrecisionContext) -> Result<Complex> {
    GaussSumTable::new(*site, ctx).hecke(f)
}

/// `Σ_{x ∈ F_p, x ≠ 0, 1} χ_a(x) χ_b(1 − x)` summed directly.
pub fn classical_jacobi_sum(a: u64, b: u64, site: &PrimeSite, ctx: PrecisionContext) -> Complex {
    let ind = index_table(site);
    let n = site.n;
    let mut acc = Complex::zero(ctx);
    for x in 2..site.p {
        let y = site.p + 1 - x;
        let e = (a % n) * (ind[x as usize] % n) + (b % n) * (ind[y as usize] % n);
        acc = &acc + &Complex::root_of_unity((e % n) as i64, n as i64, ctx);
    }
    acc
}

/// Least `m ≤ bound` with `|ψ^m − 1| < tol`.
pub fn root_of_unity_order(psi: &Complex, bound: u64, tol: &BigReal) -> Option<u64> {
    let ctx = psi.re.context();
    let one = Complex::one(ctx);
    let mut acc = one.clone();
    for m in 1..=bound {
        acc = &acc * psi;
        if (&acc - &one).abs() < *tol {
            return Some(m);
        }
    }
    None
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// `Σ c_j ζ_N^j` for `j < len(c)`.
pub fn eval_cyclotomic(coeffs: &[i64], n: u64, ctx: PrecisionContext) -> Complex {
    coeffs.iter().enumerate().fold(Complex::zero(ctx), |acc, (j, &c)| {
        &acc + &Complex::root_of_unity(j as i64, n as i64, ctx).scale(&BigReal::from_i64(c, ctx))
    })
}

/// Integers `c_j`, `j < φ(N)`, with `|c_j| ≤ max_coeff` and `|z − Σ c_j ζ_N^j| < tol`.
///
/// Embeds the problem in the lattice spanned by `(e_j, W Re ζ^j, W Im ζ^j)` and the target
/// row `(0, …, 0, 1, W Re z, W Im z)`, LLL-reduces it and reads candidates off reduced
/// rows whose target coordinate is `±1`. Every candidate is re-evaluated at full precision.
pub fn recognize_cyclotomic(z: &Complex, n: u64, max_coeff: i64, tol: &BigReal) -> Option<Vec<i64>> {
    let ctx = z.re.context();
    let d = euler_phi(n) as usize;
    let tol_digits = (-tol.log10_abs()).ceil().max(0.0) as u32;
    let scale = (tol_digits + 6).min(ctx.digits().saturating_sub(4)).max(6);
    let dim = d + 3;
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(d + 1);
    for j in 0..d {
        let zeta = Complex::root_of_unity(j as i64, n as i64, ctx);
        let mut row = vec![BigInt::zero(); dim];
        row[j] = BigInt::one();
        row[d + 1] = zeta.re.to_scaled_bigint(scale);
        row[d + 2] = zeta.im.to_scaled_bigint(scale);
        basis.push(row);
    }
    let mut target = vec![BigInt::zero(); dim];
    target[d] = BigInt::one();
    target[d + 1] = -z.re.to_scaled_bigint(scale);
    target[d + 2] = -z.im.to_scaled_bigint(scale);
    basis.push(target);

    lll_reduce(&mut basis);

    for row in &basis {
        let marker = &row[d];
        let sign: i64 = if marker.is_one() {
            1
        } else if (-marker).is_one() {
            -1
        } else {
            continue;
        };
        let coeffs: Option<Vec<i64>> = row[..d].iter().map(|c| (c * BigInt::from(sign)).to_i64()).collect();
        let Some(coeffs) = coeffs else { continue };
        if coeffs.iter().any(|c| c.abs() > max_coeff) {
            continue;
        }
        let back = eval_cyclotomic(&coeffs, n, ctx);
        if (&back - z).abs() < *tol {
            return Some(coeffs);
        }
    }
    None
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Nearest integer to `a/b` for `b > 0`, halves rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// LLL reduction (δ = 3/4) of linearly independent integer rows, in place.
///
/// Integral variant: tracks the Gram determinants `d_i` and `λ_{ij} = d_j μ_{ij}`, all of
/// which stay integers, instead of rational Gram–Schmidt vectors.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    // 1-based d and λ as in the usual presentation; d[0] = 1
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&basis[0], &basis[0]);
    let mut k = 2;
    let mut kmax = 1;

    fn red(basis: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
        if (&lam[k][l] * BigInt::from(2)).abs() > d[l] {
            let q = round_div(&lam[k][l], &d[l]);
            let bl = basis[l - 1].clone();
            for (x, y) in basis[k - 1].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] = &lam[k][l] - &q * &d[l];
            for i in 1..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    }

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&basis[k - 1], &basis[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    d[k] = u;
                }
            }
        }
        red(basis, &mut lam, &d, k, k - 1);
        let lhs = BigInt::from(4) * &d[k] * &d[k - 2];
        let rhs = BigInt::from(3) * &d[k - 1] * &d[k - 1] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            basis.swap(k - 1, k - 2);
            for j in 1..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                lam[i][k - 1] = (&b * &t + &l * &lam[i][k]) / &d[k];
            }
            d[k - 1] = b;
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                red(basis, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
}
