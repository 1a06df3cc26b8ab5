//! The coefficient ring `Z/p^l Z` with its p-power filtration.
//!
//! The map sending `p^k * a` (with `a` a unit) to `k` behaves like a
//! valuation: it is additive on products and ultrametric on sums, which is
//! all the weighted term order needs. Division, the normal form and the
//! Buchberger completion are the generic implementations in
//! [`crate::division`] and [`crate::groebner`] instantiated at this ring;
//! what changes is that coefficient divisibility is a real constraint
//! (`v(a) <= v(b)`) and coefficient lcms carry a power of p.

use crate::freemod::CoeffRing;
use crate::valfield::{mod_inverse, ValRat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZmodError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("p^l overflows the supported range")]
    ModulusOverflow,
}

/// Prime power modulus parameters; the ring context object.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct ZmodParams {
    p: u64,
    ell: u32,
    modulus: u64,
}

impl ZmodParams {
    pub fn new(p: u64, ell: u32) -> Result<Self, ZmodError> {
        if !crate::parse::is_prime(p) {
            return Err(ZmodError::NotPrime(p));
        }
        if ell == 0 {
            return Err(ZmodError::ZeroExponent);
        }
        let modulus = p.checked_pow(ell).ok_or(ZmodError::ModulusOverflow)?;
        Ok(ZmodParams { p, ell, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn scalar(&self, n: u64) -> ZmodScalar {
        ZmodScalar(n % self.modulus)
    }

    pub fn scalar_from_i64(&self, n: i64) -> ZmodScalar {
        let m = self.modulus as i128;
        ZmodScalar((((n as i128) % m + m) % m) as u64)
    }

    pub fn scalar_from_bigint(&self, n: &BigInt) -> ZmodScalar {
        ZmodScalar(
            n.mod_floor(&BigInt::from(self.modulus))
                .to_u64()
                .expect("reduced value fits"),
        )
    }

    /// The p-power "valuation": exponent of p in the canonical
    /// representative, infinity for zero. Finite values lie in `0..ell`.
    pub fn v(&self, a: &ZmodScalar) -> ValRat {
        if a.0 == 0 {
            return ValRat::Infinity;
        }
        let mut v = 0i64;
        let mut m = a.0;
        while m % self.p == 0 {
            v += 1;
            m /= self.p;
        }
        ValRat::from_int(v)
    }

    fn v_u32(&self, a: &ZmodScalar) -> Option<u32> {
        if a.0 == 0 {
            return None;
        }
        let mut v = 0u32;
        let mut m = a.0;
        while m % self.p == 0 {
            v += 1;
            m /= self.p;
        }
        Some(v)
    }

    /// Unit part: `a / p^v(a)`, invertible mod p^l.
    fn unit_part(&self, a: &ZmodScalar) -> u64 {
        let mut m = a.0;
        while m % self.p == 0 {
            m /= self.p;
        }
        m
    }
}

impl fmt::Display for ZmodParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Zmod p={} l={}", self.p, self.ell)
    }
}

/// Canonical representative in `[0, p^l)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct ZmodScalar(u64);

impl ZmodScalar {
    pub fn new(value: u64) -> Self {
        ZmodScalar(value)
    }

    pub fn value(&self) -> u64 {
        self.0
    }
}

impl fmt::Display for ZmodScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl CoeffRing for ZmodParams {
    type Elem = ZmodScalar;

    fn zero(&self) -> ZmodScalar {
        ZmodScalar(0)
    }

    fn one(&self) -> ZmodScalar {
        ZmodScalar(1 % self.modulus)
    }

    fn is_zero(&self, a: &ZmodScalar) -> bool {
        a.0 == 0
    }

    fn is_one(&self, a: &ZmodScalar) -> bool {
        a.0 == 1 % self.modulus
    }

    fn add(&self, a: &ZmodScalar, b: &ZmodScalar) -> ZmodScalar {
        ZmodScalar(((a.0 as u128 + b.0 as u128) % self.modulus as u128) as u64)
    }

    fn sub(&self, a: &ZmodScalar, b: &ZmodScalar) -> ZmodScalar {
        self.add(a, &self.neg(b))
    }

    fn neg(&self, a: &ZmodScalar) -> ZmodScalar {
        if a.0 == 0 {
            ZmodScalar(0)
        } else {
            ZmodScalar(self.modulus - a.0)
        }
    }

    fn mul(&self, a: &ZmodScalar, b: &ZmodScalar) -> ZmodScalar {
        ZmodScalar(((a.0 as u128 * b.0 as u128) % self.modulus as u128) as u64)
    }

    /// Canonical exact quotient `p^(v(a)-v(b)) * unit(a) * unit(b)^-1`.
    fn try_div(&self, a: &ZmodScalar, b: &ZmodScalar) -> Option<ZmodScalar> {
        let vb = self.v_u32(b)?;
        if a.0 == 0 {
            return Some(ZmodScalar(0));
        }
        let va = self.v_u32(a).expect("nonzero");
        if va < vb {
            return None;
        }
        let ua = self.unit_part(a);
        let ub_inv = mod_inverse(self.unit_part(b), self.modulus);
        let mut q = ((ua as u128 * ub_inv as u128) % self.modulus as u128) as u64;
        for _ in 0..(va - vb) {
            q = ((q as u128 * self.p as u128) % self.modulus as u128) as u64;
        }
        Some(ZmodScalar(q))
    }

    /// `a | b` iff `v(a) <= v(b)`; equivalent to the existence of a
    /// multiplier, checked exhaustively in the tests.
    fn divides(&self, a: &ZmodScalar, b: &ZmodScalar) -> bool {
        match (self.v_u32(a), self.v_u32(b)) {
            (Some(va), Some(vb)) => va <= vb,
            (Some(_), None) => true,
            (None, _) => false,
        }
    }

    /// `p^max(v(a), v(b))`: the unit-normalized least common multiple.
    fn coeff_lcm(&self, a: &ZmodScalar, b: &ZmodScalar) -> ZmodScalar {
        let va = self.v_u32(a).expect("nonzero lcm operand");
        let vb = self.v_u32(b).expect("nonzero lcm operand");
        let mut out = 1u64;
        for _ in 0..va.max(vb) {
            out = ((out as u128 * self.p as u128) % self.modulus as u128) as u64;
        }
        ZmodScalar(out)
    }

    fn valuation(&self, a: &ZmodScalar) -> ValRat {
        self.v(a)
    }

    fn is_negative(&self, _a: &ZmodScalar) -> bool {
        false
    }
}
