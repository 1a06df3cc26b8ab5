//! Coefficient fields with valuation.
//!
//! Three exact domains are shipped: `Q` with the p-adic valuation, the
//! rational function field `Q(t)` with the t-adic valuation (the exact
//! substitute for lowest-exponent series valuations), and any field-like
//! rational payload with the trivial valuation. Values are immutable and all
//! operations are pure.

mod tpoly;

pub use tpoly::{IntPoly, RatFunc};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("domain mismatch: {0} vs {1}")]
    DomainMismatch(Domain, Domain),
    #[error("division by zero")]
    DivisionByZero,
    #[error("residue of zero undefined")]
    ResidueOfZero,
}

/// Element of the value group extended by infinity. Exact rational; infinity
/// is the valuation of zero and compares greater than every finite value.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum ValRat {
    Finite(BigRational),
    Infinity,
}

impl ValRat {
    pub fn from_int(n: i64) -> Self {
        ValRat::Finite(BigRational::from(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        ValRat::from_int(0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ValRat::Infinity)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ValRat::Finite(r) => Some(r),
            ValRat::Infinity => None,
        }
    }

    pub fn add(&self, rhs: &ValRat) -> ValRat {
        match (self, rhs) {
            (ValRat::Finite(a), ValRat::Finite(b)) => ValRat::Finite(a + b),
            _ => ValRat::Infinity,
        }
    }

    pub fn add_rat(&self, rhs: &BigRational) -> ValRat {
        match self {
            ValRat::Finite(a) => ValRat::Finite(a + rhs),
            ValRat::Infinity => ValRat::Infinity,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ValRat::Finite(r) => r.is_positive(),
            ValRat::Infinity => true,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            ValRat::Finite(r) => r.is_negative(),
            ValRat::Infinity => false,
        }
    }
}

impl PartialOrd for ValRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ValRat::Infinity, ValRat::Infinity) => Ordering::Equal,
            (ValRat::Infinity, ValRat::Finite(_)) => Ordering::Greater,
            (ValRat::Finite(_), ValRat::Infinity) => Ordering::Less,
            (ValRat::Finite(a), ValRat::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ValRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValRat::Finite(r) => write!(f, "{r}"),
            ValRat::Infinity => write!(f, "inf"),
        }
    }
}

/// Tag naming a shipped coefficient domain.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Domain {
    PAdic(u64),
    TAdic,
    Trivial,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::PAdic(p) => write!(f, "Qp p={p}"),
            Domain::TAdic => write!(f, "Qt"),
            Domain::Trivial => write!(f, "trivial"),
        }
    }
}

/// Exact scalar tagged with its domain. Payloads are kept in canonical
/// reduced form, so equality is structural.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum ValuedScalar {
    PAdic { p: u64, value: BigRational },
    TAdic(RatFunc),
    Trivial(BigRational),
}

impl ValuedScalar {
    pub fn domain(&self) -> Domain {
        match self {
            ValuedScalar::PAdic { p, .. } => Domain::PAdic(*p),
            ValuedScalar::TAdic(_) => Domain::TAdic,
            ValuedScalar::Trivial(_) => Domain::Trivial,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ValuedScalar::PAdic { value, .. } => value.is_zero(),
            ValuedScalar::TAdic(r) => r.is_zero(),
            ValuedScalar::Trivial(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ValuedScalar::PAdic { value, .. } => value.is_one(),
            ValuedScalar::TAdic(r) => r.is_one(),
            ValuedScalar::Trivial(r) => r.is_one(),
        }
    }

    /// True when the canonical form carries a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            ValuedScalar::PAdic { value, .. } => value.is_negative(),
            ValuedScalar::TAdic(r) => r.is_negative(),
            ValuedScalar::Trivial(r) => r.is_negative(),
        }
    }

    fn check_domain(&self, rhs: &ValuedScalar) -> Result<(), ScalarError> {
        let (a, b) = (self.domain(), rhs.domain());
        if a == b {
            Ok(())
        } else {
            Err(ScalarError::DomainMismatch(a, b))
        }
    }

    pub fn add(&self, rhs: &ValuedScalar) -> Result<ValuedScalar, ScalarError> {
        self.check_domain(rhs)?;
        Ok(match (self, rhs) {
            (ValuedScalar::PAdic { p, value: a }, ValuedScalar::PAdic { value: b, .. }) => {
                ValuedScalar::PAdic { p: *p, value: a + b }
            }
            (ValuedScalar::TAdic(a), ValuedScalar::TAdic(b)) => ValuedScalar::TAdic(a.add(b)),
            (ValuedScalar::Trivial(a), ValuedScalar::Trivial(b)) => ValuedScalar::Trivial(a + b),
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, rhs: &ValuedScalar) -> Result<ValuedScalar, ScalarError> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> ValuedScalar {
        match self {
            ValuedScalar::PAdic { p, value } => ValuedScalar::PAdic { p: *p, value: -value },
            ValuedScalar::TAdic(r) => ValuedScalar::TAdic(r.neg()),
            ValuedScalar::Trivial(r) => ValuedScalar::Trivial(-r),
        }
    }

    pub fn mul(&self, rhs: &ValuedScalar) -> Result<ValuedScalar, ScalarError> {
        self.check_domain(rhs)?;
        Ok(match (self, rhs) {
            (ValuedScalar::PAdic { p, value: a }, ValuedScalar::PAdic { value: b, .. }) => {
                ValuedScalar::PAdic { p: *p, value: a * b }
            }
            (ValuedScalar::TAdic(a), ValuedScalar::TAdic(b)) => ValuedScalar::TAdic(a.mul(b)),
            (ValuedScalar::Trivial(a), ValuedScalar::Trivial(b)) => ValuedScalar::Trivial(a * b),
            _ => unreachable!(),
        })
    }

    pub fn div(&self, rhs: &ValuedScalar) -> Result<ValuedScalar, ScalarError> {
        self.check_domain(rhs)?;
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match (self, rhs) {
            (ValuedScalar::PAdic { p, value: a }, ValuedScalar::PAdic { value: b, .. }) => {
                ValuedScalar::PAdic { p: *p, value: a / b }
            }
            (ValuedScalar::TAdic(a), ValuedScalar::TAdic(b)) => ValuedScalar::TAdic(a.div(b)),
            (ValuedScalar::Trivial(a), ValuedScalar::Trivial(b)) => ValuedScalar::Trivial(a / b),
            _ => unreachable!(),
        })
    }
}

impl fmt::Display for ValuedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuedScalar::PAdic { value, .. } => write!(f, "{value}"),
            ValuedScalar::TAdic(r) => write!(f, "{r}"),
            ValuedScalar::Trivial(r) => write!(f, "{r}"),
        }
    }
}

/// p-adic valuation of a nonzero integer.
fn int_p_val(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

/// The valuation map. `val(0)` is infinity in every domain.
pub fn val(a: &ValuedScalar) -> ValRat {
    if a.is_zero() {
        return ValRat::Infinity;
    }
    match a {
        ValuedScalar::PAdic { p, value } => {
            let v = int_p_val(value.numer(), *p) - int_p_val(value.denom(), *p);
            ValRat::from_int(v)
        }
        ValuedScalar::TAdic(r) => ValRat::from_int(r.val_t().expect("nonzero")),
        ValuedScalar::Trivial(_) => ValRat::zero(),
    }
}

/// Residue-field scalar: an integer mod p for the p-adic domain, a rational
/// for the t-adic and trivial domains.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum ResidueScalar {
    ModP { p: u64, value: u64 },
    Rat(BigRational),
}

impl ResidueScalar {
    pub fn is_zero(&self) -> bool {
        match self {
            ResidueScalar::ModP { value, .. } => *value == 0,
            ResidueScalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ResidueScalar::ModP { value, .. } => *value == 1,
            ResidueScalar::Rat(r) => r.is_one(),
        }
    }

    pub fn mul(&self, rhs: &ResidueScalar) -> ResidueScalar {
        match (self, rhs) {
            (ResidueScalar::ModP { p, value: a }, ResidueScalar::ModP { p: q, value: b }) => {
                assert_eq!(p, q, "residue field mismatch");
                ResidueScalar::ModP {
                    p: *p,
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                }
            }
            (ResidueScalar::Rat(a), ResidueScalar::Rat(b)) => ResidueScalar::Rat(a * b),
            _ => panic!("residue field mismatch"),
        }
    }

    pub fn add(&self, rhs: &ResidueScalar) -> ResidueScalar {
        match (self, rhs) {
            (ResidueScalar::ModP { p, value: a }, ResidueScalar::ModP { p: q, value: b }) => {
                assert_eq!(p, q, "residue field mismatch");
                ResidueScalar::ModP {
                    p: *p,
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                }
            }
            (ResidueScalar::Rat(a), ResidueScalar::Rat(b)) => ResidueScalar::Rat(a + b),
            _ => panic!("residue field mismatch"),
        }
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(&self) -> ResidueScalar {
        match self {
            ResidueScalar::ModP { p, value } => {
                assert!(*value != 0, "inverse of zero residue");
                ResidueScalar::ModP {
                    p: *p,
                    value: mod_inverse(*value, *p),
                }
            }
            ResidueScalar::Rat(r) => {
                assert!(!r.is_zero(), "inverse of zero residue");
                ResidueScalar::Rat(r.recip())
            }
        }
    }
}

impl fmt::Display for ResidueScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueScalar::ModP { value, .. } => write!(f, "{value}"),
            ResidueScalar::Rat(r) => write!(f, "{r}"),
        }
    }
}

/// Inverse of `a` modulo `m` for gcd(a, m) = 1.
pub(crate) fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert!(old_r == 1 || old_r == -1, "not invertible mod {m}");
    let mut inv = old_s % m as i128;
    if old_r == -1 {
        inv = -inv;
    }
    if inv < 0 {
        inv += m as i128;
    }
    inv as u64
}

/// Residue image of `a * pi^(-val(a))` where `pi` is the uniformizer. For the
/// trivial valuation the map is the identity. Errors on zero.
pub fn unit_residue(a: &ValuedScalar) -> Result<ResidueScalar, ScalarError> {
    if a.is_zero() {
        return Err(ScalarError::ResidueOfZero);
    }
    Ok(match a {
        ValuedScalar::PAdic { p, value } => {
            let vn = int_p_val(value.numer(), *p);
            let vd = int_p_val(value.denom(), *p);
            let pk = BigInt::from(*p);
            let num_unit = value.numer() / pk.pow(vn as u32);
            let den_unit = value.denom() / pk.pow(vd as u32);
            let pm = BigInt::from(*p);
            let n = num_unit.mod_floor(&pm).to_u64().expect("fits");
            let d = den_unit.mod_floor(&pm).to_u64().expect("fits");
            ResidueScalar::ModP {
                p: *p,
                value: ((n as u128 * mod_inverse(d, *p) as u128) % *p as u128) as u64,
            }
        }
        ValuedScalar::TAdic(r) => ResidueScalar::Rat(r.unit_residue()),
        ValuedScalar::Trivial(r) => ResidueScalar::Rat(r.clone()),
    })
}

impl Domain {
    pub fn scalar_from_int(&self, n: i64) -> ValuedScalar {
        let r = BigRational::from(BigInt::from(n));
        match self {
            Domain::PAdic(p) => ValuedScalar::PAdic { p: *p, value: r },
            Domain::TAdic => ValuedScalar::TAdic(RatFunc::from_int(n)),
            Domain::Trivial => ValuedScalar::Trivial(r),
        }
    }

    pub fn scalar_from_rational(&self, r: BigRational) -> ValuedScalar {
        match self {
            Domain::PAdic(p) => ValuedScalar::PAdic { p: *p, value: r },
            Domain::TAdic => {
                let num = IntPoly::constant(r.numer().clone());
                let den = IntPoly::constant(r.denom().clone());
                ValuedScalar::TAdic(RatFunc::new(num, den))
            }
            Domain::Trivial => ValuedScalar::Trivial(r),
        }
    }

    pub fn zero(&self) -> ValuedScalar {
        self.scalar_from_int(0)
    }

    pub fn one(&self) -> ValuedScalar {
        self.scalar_from_int(1)
    }
}
