//! Independent verification layer: degree-slice rank over the coefficient
//! field, initial-module completeness checks, and randomized membership
//! probes.
//!
//! The rank computation deliberately ignores valuations: the dimension of a
//! degree slice of a submodule is plain linear algebra over the field, which
//! makes it a ground truth maximally decoupled from the order-aware code it
//! checks. For `Z/p^l Z` there is no rank oracle (not a field); verification
//! there uses contract checks and membership probes only.

use crate::division::normal_form;
use crate::freemod::{Ambient, CoeffRing, ModElement, ModMonomial, Monomial};
use crate::groebner::GroebnerBasis;
use crate::hilbert::enumerate_compositions;
use crate::valfield::{Domain, IntPoly, RatFunc, ValuedScalar};
use crate::zmod::{ZmodParams, ZmodScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One graded slice of the submodule generated by homogeneous elements:
/// rows are all monomial multiples of the generators landing in the degree,
/// columns are the degree's module monomials in a fixed enumeration order.
pub struct MacaulaySlice {
    pub degree: u32,
    pub columns: Vec<ModMonomial>,
    pub rows: Vec<Vec<ValuedScalar>>,
}

/// All degree-d module monomials, position-major, in enumeration order.
pub fn degree_monomials(nvars: usize, rank: usize, degree: u32) -> Vec<ModMonomial> {
    let mut out = Vec::new();
    for pos in 0..rank {
        let mut exps = vec![0u32; nvars];
        enumerate_compositions(degree, 0, &mut exps, &mut |m: &[u32]| {
            out.push(ModMonomial::new(Monomial(m.to_vec()), pos));
        });
    }
    out
}

pub fn macaulay_slice(basis: &[ModElement<Domain>], degree: u32) -> MacaulaySlice {
    let (nvars, rank) = match basis.first() {
        Some(g) => (g.ambient().nvars(), g.ambient().rank),
        None => {
            return MacaulaySlice {
                degree,
                columns: Vec::new(),
                rows: Vec::new(),
            }
        }
    };
    let columns = degree_monomials(nvars, rank, degree);
    let col_index: std::collections::HashMap<ModMonomial, usize> = columns
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let ring = basis[0].ring().clone();
    let mut rows = Vec::new();
    for g in basis {
        let dg = match g.degree() {
            Some(d) => d,
            None => continue,
        };
        if dg > degree {
            continue;
        }
        let mut exps = vec![0u32; nvars];
        enumerate_compositions(degree - dg, 0, &mut exps, &mut |m: &[u32]| {
            let shifted = g.mul_poly_term(&crate::freemod::PolyTerm {
                coeff: ring.one(),
                exps: Monomial(m.to_vec()),
            });
            let mut row = vec![ring.zero(); columns.len()];
            for (mono, coeff) in shifted.terms() {
                row[col_index[mono]] = coeff.clone();
            }
            rows.push(row);
        });
    }
    MacaulaySlice {
        degree,
        columns,
        rows,
    }
}

/// Exact rank of the degree slice over the coefficient field.
pub fn macaulay_rank(basis: &[ModElement<Domain>], degree: u32) -> usize {
    let slice = macaulay_slice(basis, degree);
    if slice.rows.is_empty() {
        return 0;
    }
    let ring = basis[0].ring().clone();
    rank_over_field(&ring, slice.rows)
}

fn rank_over_field(ring: &Domain, rows: Vec<Vec<ValuedScalar>>) -> usize {
    // row echelon with normalized pivot rows; exact field arithmetic
    let mut pivots: Vec<(usize, Vec<ValuedScalar>)> = Vec::new();
    for mut row in rows {
        for (col, prow) in &pivots {
            let factor = row[*col].clone();
            if ring.is_zero(&factor) {
                continue;
            }
            for (r, p) in row.iter_mut().zip(prow) {
                *r = ring.sub(r, &ring.mul(&factor, p));
            }
        }
        if let Some(col) = row.iter().position(|c| !ring.is_zero(c)) {
            let inv = ring
                .try_div(&ring.one(), &row[col])
                .expect("nonzero field element");
            let normalized: Vec<ValuedScalar> =
                row.iter().map(|c| ring.mul(c, &inv)).collect();
            pivots.push((col, normalized));
            pivots.sort_by_key(|(c, _)| *c);
        }
    }
    pivots.len()
}

/// Per-degree completeness of the computed initial module: the number of
/// degree-d monomials it covers must equal the slice rank of the input.
#[derive(Clone, Debug, Default)]
pub struct InitialsReport {
    pub failures: Vec<(u32, u128, usize)>,
}

impl InitialsReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_initials_complete(
    gb: &GroebnerBasis<Domain>,
    basis: &[ModElement<Domain>],
    delta_max: u32,
) -> InitialsReport {
    let gens = gb.initial_module();
    let nvars = gb.ambient().nvars();
    let rank = gb.ambient().rank;
    let mut report = InitialsReport::default();
    for degree in 0..=delta_max {
        let covered = degree_monomials(nvars, rank, degree)
            .into_iter()
            .filter(|m| gens.iter().any(|g| g.divides(m)))
            .count() as u128;
        let rk = macaulay_rank(basis, degree);
        if covered != rk as u128 {
            report.failures.push((degree, covered, rk));
        }
    }
    report
}

/// Outcome of a randomized membership probe.
#[derive(Clone, Debug)]
pub struct ProbeReport<R: CoeffRing> {
    pub trials: u32,
    pub counterexample: Option<ModElement<R>>,
}

impl<R: CoeffRing> ProbeReport<R> {
    pub fn is_ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Reduce random homogeneous combinations of the input generators against
/// the computed basis; every remainder must vanish. Deterministic under the
/// seed.
pub fn membership_probe<R: CoeffRing>(
    gb: &GroebnerBasis<R>,
    basis: &[ModElement<R>],
    trials: u32,
    seed: u64,
    mut sample_coeff: impl FnMut(&mut ChaCha8Rng) -> R::Elem,
) -> ProbeReport<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if basis.is_empty() {
        return ProbeReport {
            trials,
            counterexample: None,
        };
    }
    let ambient = basis[0].ambient().clone();
    let max_deg = basis.iter().filter_map(|g| g.degree()).max().unwrap_or(0);
    for _ in 0..trials {
        let target = max_deg + rng.gen_range(0..=2);
        let mut f = ModElement::zero(&ambient);
        for g in basis {
            let dg = g.degree().expect("nonzero generator");
            if dg > target || rng.gen_range(0..4) == 0 {
                continue;
            }
            let mono = random_monomial(ambient.nvars(), target - dg, &mut rng);
            let coeff = sample_coeff(&mut rng);
            f = f.add(&g.mul_poly_term(&crate::freemod::PolyTerm { coeff, exps: mono }));
        }
        let reduced = match normal_form(&f, gb.generators(), gb.order()) {
            Ok(r) => r,
            Err(_) => {
                return ProbeReport {
                    trials,
                    counterexample: Some(f),
                }
            }
        };
        if !reduced.remainder.is_zero() {
            return ProbeReport {
                trials,
                counterexample: Some(f),
            };
        }
    }
    ProbeReport {
        trials,
        counterexample: None,
    }
}

// ---------------------------------------------------------------------------
// deterministic random samplers shared by the probe, the CLI verifier and
// the test corpus

/// Random nonzero field scalar with valuation in `[-3, 3]`.
pub fn random_field_scalar(domain: &Domain, rng: &mut ChaCha8Rng) -> ValuedScalar {
    match domain {
        Domain::PAdic(p) => {
            let v: i32 = rng.gen_range(-3..=3);
            let unit = loop {
                let a: i64 = rng.gen_range(-9..=9);
                if a != 0 && a.unsigned_abs() % p != 0 {
                    break a;
                }
            };
            let den = loop {
                let b: i64 = rng.gen_range(1..=9);
                if b as u64 % p != 0 {
                    break b;
                }
            };
            let mut value = BigRational::new(BigInt::from(unit), BigInt::from(den));
            let pk = BigRational::from(BigInt::from(*p));
            for _ in 0..v.abs() {
                if v >= 0 {
                    value *= &pk;
                } else {
                    value /= &pk;
                }
            }
            ValuedScalar::PAdic { p: *p, value }
        }
        Domain::TAdic => {
            let v: i64 = rng.gen_range(-3..=3);
            let c0: i64 = loop {
                let c = rng.gen_range(-5..=5);
                if c != 0 {
                    break c;
                }
            };
            let c1: i64 = rng.gen_range(-5..=5);
            let d0: i64 = rng.gen_range(1..=5);
            let d1: i64 = rng.gen_range(-5..=5);
            let num = IntPoly::from_coeffs(vec![BigInt::from(c0), BigInt::from(c1)]);
            let den = IntPoly::from_coeffs(vec![BigInt::from(d0), BigInt::from(d1)]);
            ValuedScalar::TAdic(RatFunc::new(num, den).mul(&RatFunc::t_power(v)))
        }
        Domain::Trivial => {
            let a: i64 = loop {
                let a = rng.gen_range(-9..=9);
                if a != 0 {
                    break a;
                }
            };
            let b: i64 = rng.gen_range(1..=9);
            ValuedScalar::Trivial(BigRational::new(BigInt::from(a), BigInt::from(b)))
        }
    }
}

/// Random nonzero element of `Z/p^l Z`.
pub fn random_zmod_scalar(params: &ZmodParams, rng: &mut ChaCha8Rng) -> ZmodScalar {
    params.scalar(rng.gen_range(1..params.modulus()))
}

/// Random degree-d monomial.
pub fn random_monomial(nvars: usize, degree: u32, rng: &mut ChaCha8Rng) -> Monomial {
    let mut exps = vec![0u32; nvars];
    if nvars > 0 {
        for _ in 0..degree {
            exps[rng.gen_range(0..nvars)] += 1;
        }
    }
    Monomial(exps)
}

/// Random nonzero homogeneous element of the given degree with up to
/// `max_terms` terms.
pub fn random_homogeneous<R: CoeffRing>(
    ambient: &Ambient<R>,
    degree: u32,
    max_terms: usize,
    rng: &mut ChaCha8Rng,
    mut sample_coeff: impl FnMut(&mut ChaCha8Rng) -> R::Elem,
) -> ModElement<R> {
    loop {
        let nterms = rng.gen_range(1..=max_terms);
        let mut f = ModElement::zero(ambient);
        for _ in 0..nterms {
            let mono = random_monomial(ambient.nvars(), degree, rng);
            let pos = rng.gen_range(0..ambient.rank);
            let coeff = sample_coeff(rng);
            f.add_term(&ModMonomial::new(mono, pos), &coeff);
        }
        if !f.is_zero() {
            return f;
        }
    }
}
