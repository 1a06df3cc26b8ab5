//! Sparse elements of the rank-d free module over a polynomial ring, with
//! monomial orders, weighted term orders and initial forms.
//!
//! The weighted comparison is the heart of the crate: the weight of a term is
//! the coefficient valuation plus the weight-vector pairing with the exponent
//! vector, and weight ties are broken by a monomial order with the greater
//! monomial selected first. That comparison is a total preorder on terms, not
//! a monomial order, which is why the division algorithm downstream needs a
//! growing divisor set.

use crate::valfield::{unit_residue, val, Domain, ResidueScalar, ValRat, ValuedScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElementError {
    #[error("initial of zero undefined")]
    InitialOfZero,
    #[error("ambient mismatch")]
    AmbientMismatch,
}

/// Coefficient ring the generic machinery runs over. Implemented by the
/// valued fields ([`Domain`]) and by `Z/p^l Z` ([`crate::zmod::ZmodParams`]).
///
/// The context object carries the ring constants (prime, modulus); elements
/// are plain values. `divides`/`try_div`/`coeff_lcm` encode the only place the
/// field and ring cases differ: in a field every nonzero coefficient divides
/// every other and the coefficient lcm is 1.
pub trait CoeffRing: Clone + PartialEq + Eq + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Exact division; `None` when `b` does not divide `a` (or `b` is zero).
    fn try_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    /// Does nonzero `a` divide nonzero `b`?
    fn divides(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    /// Canonical least common multiple of two nonzero coefficients.
    fn coeff_lcm(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn valuation(&self, a: &Self::Elem) -> ValRat;
    /// Whether the canonical form of `a` starts with a minus sign, so the
    /// element printer can render `a - b` instead of `a + -b`.
    fn is_negative(&self, a: &Self::Elem) -> bool;
}

impl CoeffRing for Domain {
    type Elem = ValuedScalar;

    fn zero(&self) -> ValuedScalar {
        Domain::zero(self)
    }

    fn one(&self) -> ValuedScalar {
        Domain::one(self)
    }

    fn is_zero(&self, a: &ValuedScalar) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &ValuedScalar) -> bool {
        a.is_one()
    }

    fn add(&self, a: &ValuedScalar, b: &ValuedScalar) -> ValuedScalar {
        a.add(b).expect("domain mismatch")
    }

    fn sub(&self, a: &ValuedScalar, b: &ValuedScalar) -> ValuedScalar {
        a.sub(b).expect("domain mismatch")
    }

    fn neg(&self, a: &ValuedScalar) -> ValuedScalar {
        a.neg()
    }

    fn mul(&self, a: &ValuedScalar, b: &ValuedScalar) -> ValuedScalar {
        a.mul(b).expect("domain mismatch")
    }

    fn try_div(&self, a: &ValuedScalar, b: &ValuedScalar) -> Option<ValuedScalar> {
        if b.is_zero() {
            None
        } else {
            Some(a.div(b).expect("domain mismatch"))
        }
    }

    fn divides(&self, a: &ValuedScalar, _b: &ValuedScalar) -> bool {
        !a.is_zero()
    }

    fn coeff_lcm(&self, _a: &ValuedScalar, _b: &ValuedScalar) -> ValuedScalar {
        Domain::one(self)
    }

    fn valuation(&self, a: &ValuedScalar) -> ValRat {
        val(a)
    }

    fn is_negative(&self, a: &ValuedScalar) -> bool {
        a.is_negative()
    }
}

/// Exponent vector; the ambient fixes its length.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, rhs: &Monomial) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| a <= b)
    }

    /// Componentwise difference; caller guarantees divisibility.
    pub fn div(&self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| *a.max(b)).collect())
    }
}

/// Monomial together with a standard basis position (0-based index; printed
/// as `e1..ed`).
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct ModMonomial {
    pub pos: usize,
    pub mono: Monomial,
}

impl ModMonomial {
    pub fn new(mono: Monomial, pos: usize) -> Self {
        ModMonomial { pos, mono }
    }

    pub fn degree(&self) -> u32 {
        self.mono.degree()
    }

    /// Term-level divisibility on bare monomials: same position and
    /// componentwise exponent divisibility.
    pub fn divides(&self, rhs: &ModMonomial) -> bool {
        self.pos == rhs.pos && self.mono.divides(&rhs.mono)
    }
}

/// Nonzero coefficient attached to a module monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term<R: CoeffRing> {
    pub coeff: R::Elem,
    pub mono: ModMonomial,
}

/// Term of a ring polynomial (no module position); what divisor quotients
/// and multipliers are made of.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyTerm<R: CoeffRing> {
    pub coeff: R::Elem,
    pub exps: Monomial,
}

/// Base monomial orders on `x1 > x2 > ... > xn`, extended to module
/// monomials by comparing monomials first and breaking ties by position with
/// `e1 < e2 < ... < ed`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    Lex,
    DegLex,
    DegRevLex,
}

impl MonomialOrder {
    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::DegLex => "deglex",
            MonomialOrder::DegRevLex => "degrevlex",
        }
    }

    /// Compare bare monomials; `Greater` means the first is the larger
    /// monomial in this order.
    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => Self::cmp_lex(a, b),
            MonomialOrder::DegLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| Self::cmp_lex(a, b)),
            MonomialOrder::DegRevLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| Self::cmp_revlex(a, b)),
        }
    }

    fn cmp_lex(a: &Monomial, b: &Monomial) -> Ordering {
        for (x, y) in a.0.iter().zip(&b.0) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// Reverse-lex tiebreak for equal degrees: the last differing exponent
    /// decides, smaller exponent wins.
    fn cmp_revlex(a: &Monomial, b: &Monomial) -> Ordering {
        for (x, y) in a.0.iter().zip(&b.0).rev() {
            match x.cmp(y) {
                Ordering::Equal => continue,
                other => return other.reverse(),
            }
        }
        Ordering::Equal
    }

    /// Module extension: monomial first, then position with lower index
    /// smaller.
    pub fn cmp_modmono(&self, a: &ModMonomial, b: &ModMonomial) -> Ordering {
        self.cmp_mono(&a.mono, &b.mono)
            .then_with(|| a.pos.cmp(&b.pos))
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Whether the initial term sits at the minimal or maximal weight.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Convention {
    Min,
    Max,
}

impl Convention {
    pub fn name(&self) -> &'static str {
        match self {
            Convention::Min => "min",
            Convention::Max => "max",
        }
    }
}

/// Weight vector plus monomial order plus min/max convention. The weight of
/// a nonzero term is `val(coeff) + w.u`, always finite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedTermOrder {
    pub weights: Vec<BigRational>,
    pub order: MonomialOrder,
    pub convention: Convention,
}

impl WeightedTermOrder {
    pub fn new(weights: Vec<BigRational>, order: MonomialOrder, convention: Convention) -> Self {
        WeightedTermOrder {
            weights,
            order,
            convention,
        }
    }

    pub fn min(weights: Vec<BigRational>, order: MonomialOrder) -> Self {
        Self::new(weights, order, Convention::Min)
    }

    pub fn weights_from_ints(w: &[i64], order: MonomialOrder, convention: Convention) -> Self {
        Self::new(
            w.iter().map(|&x| BigRational::from(BigInt::from(x))).collect(),
            order,
            convention,
        )
    }

    pub fn dot(&self, mono: &Monomial) -> BigRational {
        assert_eq!(self.weights.len(), mono.0.len(), "ambient mismatch");
        let mut acc = BigRational::from(BigInt::from(0));
        for (w, &e) in self.weights.iter().zip(&mono.0) {
            acc += w * BigRational::from(BigInt::from(e));
        }
        acc
    }

    pub fn term_weight<R: CoeffRing>(&self, ring: &R, t: &Term<R>) -> ValRat {
        ring.valuation(&t.coeff).add_rat(&self.dot(&t.mono.mono))
    }
}

/// Compare two nonzero terms; `Less` means the first term is selected as
/// initial over the second. Under the min convention lower weight wins and
/// weight ties go to the monomial that is greater in the base order; the max
/// convention reverses only the weight comparison. `Equal` iff the weights
/// and the module monomials agree.
pub fn compare_terms<R: CoeffRing>(
    ring: &R,
    a: &Term<R>,
    b: &Term<R>,
    o: &WeightedTermOrder,
) -> Ordering {
    let wa = o.term_weight(ring, a);
    let wb = o.term_weight(ring, b);
    let weight_cmp = match o.convention {
        Convention::Min => wa.cmp(&wb),
        Convention::Max => wb.cmp(&wa),
    };
    weight_cmp.then_with(|| o.order.cmp_modmono(&b.mono, &a.mono))
}

/// Ambient free module: variable names, rank, and the coefficient ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ambient<R: CoeffRing> {
    pub vars: Vec<String>,
    pub rank: usize,
    pub ring: R,
}

impl<R: CoeffRing> Ambient<R> {
    pub fn new(vars: &[&str], rank: usize, ring: R) -> Self {
        assert!(rank >= 1, "rank must be at least 1");
        Ambient {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            rank,
            ring,
        }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
}

/// Sparse module element: a map from module monomials to nonzero
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModElement<R: CoeffRing> {
    ambient: Ambient<R>,
    terms: BTreeMap<ModMonomial, R::Elem>,
}

impl<R: CoeffRing> ModElement<R> {
    pub fn zero(ambient: &Ambient<R>) -> Self {
        ModElement {
            ambient: ambient.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(ambient: &Ambient<R>, terms: I) -> Self
    where
        I: IntoIterator<Item = (ModMonomial, R::Elem)>,
    {
        let mut f = Self::zero(ambient);
        for (m, c) in terms {
            f.add_term(&m, &c);
        }
        f
    }

    pub fn ambient(&self) -> &Ambient<R> {
        &self.ambient
    }

    pub fn ring(&self) -> &R {
        &self.ambient.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModMonomial, &R::Elem)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ModMonomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &ModMonomial) -> Option<&R::Elem> {
        self.terms.get(m)
    }

    /// Add `c * m` in place, dropping the key if the sum cancels.
    pub fn add_term(&mut self, m: &ModMonomial, c: &R::Elem) {
        let ring = self.ambient.ring.clone();
        if ring.is_zero(c) {
            return;
        }
        assert_eq!(m.mono.0.len(), self.ambient.nvars(), "ambient mismatch");
        assert!(m.pos < self.ambient.rank, "position out of range");
        match self.terms.get_mut(m) {
            Some(existing) => {
                let sum = ring.add(existing, c);
                if ring.is_zero(&sum) {
                    self.terms.remove(m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.ambient, rhs.ambient, "ambient mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let ring = &self.ambient.ring;
        ModElement {
            ambient: self.ambient.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), ring.neg(c)))
                .collect(),
        }
    }

    /// Multiply by a scalar; zero scalar yields zero.
    pub fn scale(&self, c: &R::Elem) -> Self {
        let ring = self.ambient.ring.clone();
        if ring.is_zero(c) {
            return Self::zero(&self.ambient);
        }
        let mut out = Self::zero(&self.ambient);
        for (m, a) in &self.terms {
            out.add_term(m, &ring.mul(a, c));
        }
        out
    }

    /// Multiply by a ring term (coefficient times plain monomial).
    pub fn mul_poly_term(&self, t: &PolyTerm<R>) -> Self {
        let ring = self.ambient.ring.clone();
        if ring.is_zero(&t.coeff) {
            return Self::zero(&self.ambient);
        }
        let mut out = Self::zero(&self.ambient);
        for (m, a) in &self.terms {
            let key = ModMonomial::new(m.mono.mul(&t.exps), m.pos);
            out.add_term(&key, &ring.mul(a, &t.coeff));
        }
        out
    }

    /// Multiply a rank-1 element (a polynomial) into this element.
    pub fn mul_poly(&self, poly: &ModElement<R>) -> Self {
        let mut out = Self::zero(&self.ambient);
        for (m, c) in &poly.terms {
            debug_assert_eq!(m.pos, 0, "multiplier must be rank-1");
            out = out.add(&self.mul_poly_term(&PolyTerm {
                coeff: c.clone(),
                exps: m.mono.clone(),
            }));
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Common degree of a homogeneous nonzero element.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// The unique term selected by `compare_terms`; errors on zero.
    pub fn initial_term(&self, o: &WeightedTermOrder) -> Result<Term<R>, ElementError> {
        let ring = &self.ambient.ring;
        let mut best: Option<Term<R>> = None;
        for (m, c) in &self.terms {
            let cand = Term {
                coeff: c.clone(),
                mono: m.clone(),
            };
            best = Some(match best {
                None => cand,
                Some(cur) => {
                    if compare_terms(ring, &cand, &cur, o) == Ordering::Less {
                        cand
                    } else {
                        cur
                    }
                }
            });
        }
        best.ok_or(ElementError::InitialOfZero)
    }
}

/// `ecart(f, g) = |supp(g) \ supp(f)|`: how many monomials of `g` lie outside
/// the support of `f`.
pub fn ecart<R: CoeffRing>(f: &ModElement<R>, g: &ModElement<R>) -> usize {
    g.support().filter(|m| f.coeff(m).is_none()).count()
}

/// Does term `a` divide term `b`? Positions must agree, the monomial must
/// divide componentwise, and the coefficient must divide in the ring.
pub fn term_divides<R: CoeffRing>(ring: &R, a: &Term<R>, b: &Term<R>) -> bool {
    a.mono.divides(&b.mono) && ring.divides(&a.coeff, &b.coeff)
}

/// Exact term quotient `b / a` as a ring term; `None` when `a` does not
/// divide `b`.
pub fn term_div<R: CoeffRing>(ring: &R, b: &Term<R>, a: &Term<R>) -> Option<PolyTerm<R>> {
    if !a.mono.divides(&b.mono) {
        return None;
    }
    let coeff = ring.try_div(&b.coeff, &a.coeff)?;
    Some(PolyTerm {
        coeff,
        exps: b.mono.mono.div(&a.mono.mono),
    })
}

/// Initial form with residue coefficients: exactly the terms achieving the
/// extremal weight, coefficients replaced by their unit residues.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidueElement {
    pub terms: BTreeMap<ModMonomial, ResidueScalar>,
}

impl ResidueElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The `in_w` initial form of a nonzero element over a valued field.
pub fn initial_form_w(
    f: &ModElement<Domain>,
    o: &WeightedTermOrder,
) -> Result<ResidueElement, ElementError> {
    if f.is_zero() {
        return Err(ElementError::InitialOfZero);
    }
    let ring = f.ring();
    let mut extremal: Option<ValRat> = None;
    for (m, c) in f.terms() {
        let w = o.term_weight(
            ring,
            &Term {
                coeff: c.clone(),
                mono: m.clone(),
            },
        );
        extremal = Some(match extremal {
            None => w,
            Some(cur) => match o.convention {
                Convention::Min => cur.min(w),
                Convention::Max => cur.max(w),
            },
        });
    }
    let target = extremal.expect("nonzero element");
    let mut terms = BTreeMap::new();
    for (m, c) in f.terms() {
        let w = o.term_weight(
            ring,
            &Term {
                coeff: c.clone(),
                mono: m.clone(),
            },
        );
        if w == target {
            terms.insert(m.clone(), unit_residue(c).expect("nonzero coefficient"));
        }
    }
    Ok(ResidueElement { terms })
}
