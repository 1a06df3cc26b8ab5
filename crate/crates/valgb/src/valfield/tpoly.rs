//! Univariate integer polynomials in `t` and their fraction field `Q(t)`.
//!
//! `RatFunc` is the exact stand-in for series coefficients: the t-adic
//! valuation of `num/den` is `ord_t(num) - ord_t(den)` and the residue of a
//! unit is the ratio of lowest nonzero coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Dense univariate polynomial over `Z`, ascending coefficients, no trailing
/// zero (the zero polynomial has an empty coefficient vector).
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// `c * t^k`
    pub fn term(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Order of vanishing at t = 0: index of the lowest nonzero coefficient.
    pub fn ord_t(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Lowest nonzero coefficient.
    pub fn trailing(&self) -> Option<&BigInt> {
        self.ord_t().map(|i| &self.coeffs[i])
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }

    /// GCD of all coefficients, non-negative; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Exact division; panics if `d` does not divide `self` in `Z[t]`.
    pub fn div_exact(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let nd = rem.len() - 1;
        assert!(nd >= dd, "exact division underflow");
        let lead = d.coeffs.last().unwrap();
        let mut quo = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..quo.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            assert!(r.is_zero(), "non-exact polynomial division");
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &q * dc;
            }
            quo[k] = q;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
        IntPoly::from_coeffs(quo)
    }

    fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x / &c).collect(),
        }
    }

    /// Classical pseudo-remainder `lc(d)^(deg self - deg d + 1) * self mod d`
    /// (deg d <= deg self, d nonzero). The scaling is padded to the full
    /// power even when intermediate tops cancel, so the subresultant
    /// divisions downstream stay exact.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let mut r = self.clone();
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs.last().unwrap().clone();
        let mut scale_left = (self.coeffs.len() - 1 - dd) as i64 + 1;
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let top = r.coeffs.last().unwrap().clone();
            let shift = rd - dd;
            let mut coeffs = vec![BigInt::zero(); rd + 1];
            for (i, c) in r.coeffs.iter().enumerate() {
                coeffs[i] = c * &lead;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                coeffs[i + shift] -= &top * dc;
            }
            r = IntPoly::from_coeffs(coeffs);
            scale_left -= 1;
        }
        while scale_left > 0 {
            r = IntPoly {
                coeffs: r.coeffs.iter().map(|c| c * &lead).collect(),
            };
            scale_left -= 1;
        }
        r
    }

    /// Non-panicking exact division: `None` when `d` does not divide `self`
    /// in `Z[t]`.
    pub fn try_div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let nd = rem.len() - 1;
        if nd < dd {
            return None;
        }
        let lead = d.coeffs.last().unwrap();
        let mut quo = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..quo.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &q * dc;
            }
            quo[k] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPoly::from_coeffs(quo))
        } else {
            None
        }
    }

    /// Image in `Z/pZ[t]`, ascending, trimmed.
    fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let pm = BigInt::from(p);
        let mut v: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&pm).to_u64().expect("fits"))
            .collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Monic gcd of the images in `Z/pZ[t]` (empty vector for gcd of zeros).
    fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
        let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
        let trim = |v: &mut Vec<u64>| {
            while v.last() == Some(&0) {
                v.pop();
            }
        };
        while !b.is_empty() {
            let lead_inv = crate::valfield::mod_inverse(*b.last().unwrap(), p);
            while a.len() >= b.len() && !a.is_empty() {
                let factor = mulmod(*a.last().unwrap(), lead_inv);
                let shift = a.len() - b.len();
                for (i, bc) in b.iter().enumerate() {
                    let sub = mulmod(factor, *bc);
                    a[i + shift] = (a[i + shift] + p - sub) % p;
                }
                trim(&mut a);
            }
            std::mem::swap(&mut a, &mut b);
            trim(&mut b);
        }
        if let Some(&lc) = a.last() {
            let inv = crate::valfield::mod_inverse(lc, p);
            for c in &mut a {
                *c = mulmod(*c, inv);
            }
        }
        a
    }

    /// GCD in `Z[t]` (content included), normalized to positive leading
    /// coefficient.
    ///
    /// Modular (Brown) algorithm: gcd images modulo 63-bit primes are
    /// CRT-combined and certified by exact trial division, so the common
    /// coprime case costs O(d^2) machine ops and real factors cost a few
    /// prime images. A subresultant remainder sequence stands by as the
    /// unconditional fallback.
    pub fn gcd(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.abs_normalized();
        }
        if rhs.is_zero() {
            return self.abs_normalized();
        }
        let content = self.content().gcd(&rhs.content());
        if self.degree() == Some(0) || rhs.degree() == Some(0) {
            return IntPoly::constant(content);
        }
        let ap = self.primitive_part();
        let bp = rhs.primitive_part();
        if let Some(g) = IntPoly::modular_gcd_primitive(&ap, &bp) {
            return IntPoly {
                coeffs: g.coeffs.iter().map(|c| c * &content).collect(),
            };
        }
        let g = IntPoly::subresultant_gcd_primitive(ap, bp);
        IntPoly {
            coeffs: g.coeffs.iter().map(|c| c * &content).collect(),
        }
    }

    /// GCD of two nonzero primitive polynomials by prime images and CRT;
    /// `None` if the prime budget runs out (pathological, handled by the
    /// caller's fallback).
    fn modular_gcd_primitive(ap: &IntPoly, bp: &IntPoly) -> Option<IntPoly> {
        let lc_gcd = ap.leading().unwrap().gcd(bp.leading().unwrap());
        let mut combined: Option<(usize, BigInt, Vec<BigInt>)> = None;
        let mut last_candidate: Option<IntPoly> = None;
        for &prime in gcd_primes() {
            let a = ap.reduce_mod(prime);
            let b = bp.reduce_mod(prime);
            if a.len() != ap.coeffs.len() || b.len() != bp.coeffs.len() {
                continue; // bad reduction: a leading coefficient vanished
            }
            let g = IntPoly::gcd_mod(a, b, prime);
            let deg = g.len() - 1;
            if deg == 0 {
                return Some(IntPoly::one());
            }
            // scale the monic image so its leading coefficient is lc_gcd,
            // the standard normalization making images CRT-compatible
            let lc_image = lc_gcd.mod_floor(&BigInt::from(prime)).to_u64().expect("fits");
            let g: Vec<BigInt> = g
                .iter()
                .map(|&c| {
                    BigInt::from(((c as u128 * lc_image as u128) % prime as u128) as u64)
                })
                .collect();
            match &mut combined {
                Some((cdeg, _, _)) if deg > *cdeg => continue, // unlucky prime
                Some((cdeg, modulus, coeffs)) if deg == *cdeg => {
                    let pm = BigInt::from(prime);
                    let inv = modinv_big(modulus, &pm);
                    for (c, gi) in coeffs.iter_mut().zip(&g) {
                        // CRT: c' = c + M * ((gi - c) * M^-1 mod p)
                        let mut delta = ((gi - &*c) * &inv).mod_floor(&pm);
                        delta *= &*modulus;
                        *c += delta;
                    }
                    *modulus *= &pm;
                }
                _ => {
                    combined = Some((deg, BigInt::from(prime), g));
                }
            }
            let (_, modulus, coeffs) = combined.as_ref().unwrap();
            let half = modulus / 2;
            let lifted = IntPoly::from_coeffs(
                coeffs
                    .iter()
                    .map(|c| if c > &half { c - modulus } else { c.clone() })
                    .collect(),
            )
            .primitive_part()
            .abs_normalized();
            if last_candidate.as_ref() == Some(&lifted) {
                // stabilized: certify by trial division
                if ap.try_div_exact(&lifted).is_some() && bp.try_div_exact(&lifted).is_some() {
                    return Some(lifted);
                }
            }
            last_candidate = Some(lifted);
        }
        None
    }

    /// Subresultant remainder sequence; unconditional but slower.
    fn subresultant_gcd_primitive(mut a: IntPoly, mut b: IntPoly) -> IntPoly {
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let d = a.degree().unwrap() - b.degree().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return b.primitive_part().abs_normalized();
            }
            if r.degree() == Some(0) {
                return IntPoly::one();
            }
            let divisor = &g * h.pow(d as u32);
            a = b;
            b = IntPoly {
                coeffs: r.coeffs.iter().map(|c| c / &divisor).collect(),
            };
            g = a.leading().unwrap().clone();
            h = if d == 0 {
                h
            } else {
                g.pow(d as u32) / h.pow(d as u32 - 1)
            };
        }
    }

    fn abs_normalized(&self) -> Self {
        match self.leading() {
            Some(l) if l.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

/// Deterministic Miller-Rabin for u64.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let powmod = |mut base: u64, mut exp: u64| -> u64 {
        let mut acc: u128 = 1;
        let mut b = base as u128 % n as u128;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % n as u128;
            }
            b = b * b % n as u128;
            exp >>= 1;
        }
        base = acc as u64;
        base
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prev_prime(mut n: u64) -> u64 {
    loop {
        n -= 1;
        if is_prime_u64(n) {
            return n;
        }
    }
}

/// Fixed pool of 63-bit primes for the modular gcd, built once.
fn gcd_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut primes = Vec::with_capacity(192);
        let mut n = 4611686018427387904u64; // 2^62
        for _ in 0..192 {
            n = prev_prime(n);
            primes.push(n);
        }
        primes
    })
}

/// Inverse of `a` modulo `m` for coprime BigInt inputs.
fn modinv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let (mut old_r, mut r) = (a.mod_floor(m), m.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
    }
    assert!(old_r.is_one(), "not invertible");
    old_s.mod_floor(m)
}

impl fmt::Display for IntPoly {
    /// Ascending terms, compact: `3+6*t^2`, `-t`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Reduced fraction of integer polynomials: an element of `Q(t)`.
///
/// Canonical form: numerator and denominator share no polynomial factor and
/// no integer content, the denominator has positive leading coefficient, and
/// zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl RatFunc {
    pub fn new(num: IntPoly, den: IntPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in Q(t)");
        if num.is_zero() {
            return RatFunc {
                num: IntPoly::zero(),
                den: IntPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        if den.leading().map_or(false, |l| l.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc {
            num: IntPoly::constant(BigInt::from(n)),
            den: IntPoly::one(),
        }
    }

    /// `t^k` for k possibly negative.
    pub fn t_power(k: i64) -> Self {
        if k >= 0 {
            RatFunc {
                num: IntPoly::term(BigInt::one(), k as usize),
                den: IntPoly::one(),
            }
        } else {
            RatFunc {
                num: IntPoly::one(),
                den: IntPoly::term(BigInt::one(), (-k) as usize),
            }
        }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// t-adic valuation; None for zero.
    pub fn val_t(&self) -> Option<i64> {
        let vn = self.num.ord_t()? as i64;
        let vd = self.den.ord_t().expect("nonzero denominator") as i64;
        Some(vn - vd)
    }

    /// Residue of the unit part `self * t^(-val)`: ratio of the lowest
    /// nonzero coefficients. Requires nonzero input.
    pub fn unit_residue(&self) -> BigRational {
        let n = self.num.trailing().expect("residue of zero").clone();
        let d = self.den.trailing().expect("nonzero denominator").clone();
        BigRational::new(n, d)
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn sign_normalized(num: IntPoly, den: IntPoly) -> Self {
        if den.leading().map_or(false, |l| l.is_negative()) {
            RatFunc {
                num: num.neg(),
                den: den.neg(),
            }
        } else {
            RatFunc { num, den }
        }
    }

    /// Fraction addition with the denominator-gcd trick: the result of
    /// combining canonical operands is canonical without a full-size gcd.
    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
            if num.is_zero() {
                return RatFunc::zero();
            }
            return RatFunc::sign_normalized(num, self.den.mul(&rhs.den));
        }
        let b1 = self.den.div_exact(&g);
        let d1 = rhs.den.div_exact(&g);
        let num0 = self.num.mul(&d1).add(&rhs.num.mul(&b1));
        if num0.is_zero() {
            return RatFunc::zero();
        }
        let h = num0.gcd(&g);
        let num = num0.div_exact(&h);
        let den = self.den.mul(&d1).div_exact(&h);
        RatFunc::sign_normalized(num, den)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Fraction multiplication with cross-cancellation; canonical in,
    /// canonical out.
    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = self.num.div_exact(&g1).mul(&rhs.num.div_exact(&g2));
        let den = self.den.div_exact(&g2).mul(&rhs.den.div_exact(&g1));
        RatFunc::sign_normalized(num, den)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero in Q(t)");
        if self.is_zero() {
            return RatFunc::zero();
        }
        let flipped = RatFunc::sign_normalized(rhs.den.clone(), rhs.num.clone());
        self.mul(&flipped)
    }

    /// True when the canonical numerator has a negative leading sign, so the
    /// printer can pull the minus out front.
    pub fn is_negative(&self) -> bool {
        self.num.leading().map_or(false, |l| l.is_negative())
    }
}

impl fmt::Display for RatFunc {
    /// `(num)/(den)`; a denominator of 1 is dropped and a single-term
    /// numerator is printed bare so plain scalars stay plain.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num_terms = self.num.coeffs.iter().filter(|c| !c.is_zero()).count();
        if self.den.is_one() {
            if num_terms <= 1 {
                write!(f, "{}", self.num)
            } else {
                write!(f, "({})", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
