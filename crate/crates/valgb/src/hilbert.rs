//! Hilbert functions of graded quotients via standard monomials of the
//! initial module.
//!
//! The dimension of the degree-d part of the quotient equals the number of
//! degree-d module monomials divisible by no generator of the (monomial)
//! initial module. Counting is exact: inclusion-exclusion over generator
//! subsets per position, with a plain enumeration sieve as fallback when the
//! subset count gets out of hand. The eventual polynomial is recovered by a
//! Newton forward-difference fit; the stabilization degree is detected
//! empirically, not proven.

use crate::freemod::{ModMonomial, Monomial};
use crate::groebner::GroebnerBasis;
use crate::valfield::Domain;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbertError {
    #[error("no stabilization window found; increase max degree")]
    IncreaseMaxDegree,
}

/// Subset cap for inclusion-exclusion; beyond it the sieve takes over.
const SUBSET_CAP: usize = 1 << 20;

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow")
            / (i as u128 + 1);
    }
    acc
}

/// Number of degree-d monomials in n variables.
pub fn monomial_count(nvars: usize, degree: u32) -> u128 {
    if nvars == 0 {
        return if degree == 0 { 1 } else { 0 };
    }
    binomial(degree as u64 + nvars as u64 - 1, nvars as u64 - 1)
}

/// Count degree-`degree` module monomials divisible by no element of the
/// minimal generating set `gens`.
pub fn standard_monomial_count(
    gens: &[ModMonomial],
    degree: u32,
    nvars: usize,
    rank: usize,
) -> u128 {
    let mut total: u128 = 0;
    for pos in 0..rank {
        let at_pos: Vec<&Monomial> = gens
            .iter()
            .filter(|m| m.pos == pos)
            .map(|m| &m.mono)
            .collect();
        total += standard_count_one_position(&at_pos, degree, nvars);
    }
    total
}

fn standard_count_one_position(gens: &[&Monomial], degree: u32, nvars: usize) -> u128 {
    let all = monomial_count(nvars, degree);
    if gens.is_empty() {
        return all;
    }
    if (1usize << gens.len().min(63)) <= SUBSET_CAP && gens.len() < 63 {
        let divisible = divisible_count_inclusion_exclusion(gens, degree, nvars);
        all - divisible
    } else {
        sieve_standard_count(gens, degree, nvars)
    }
}

/// |{degree-d monomials divisible by some generator}| via inclusion-exclusion
/// over subset lcms.
fn divisible_count_inclusion_exclusion(gens: &[&Monomial], degree: u32, nvars: usize) -> u128 {
    let mut acc: i128 = 0;
    for mask in 1u64..(1u64 << gens.len()) {
        let mut lcm = Monomial::unit(nvars);
        let mut bits = 0u32;
        for (i, g) in gens.iter().enumerate() {
            if mask & (1 << i) != 0 {
                lcm = lcm.lcm(g);
                bits += 1;
            }
        }
        let d = lcm.degree();
        if d > degree {
            continue;
        }
        let multiples = monomial_count(nvars, degree - d) as i128;
        if bits % 2 == 1 {
            acc += multiples;
        } else {
            acc -= multiples;
        }
    }
    assert!(acc >= 0, "inclusion-exclusion went negative");
    acc as u128
}

/// Enumerate all degree-d exponent vectors and test divisibility directly.
fn sieve_standard_count(gens: &[&Monomial], degree: u32, nvars: usize) -> u128 {
    let mut count = 0u128;
    let mut exps = vec![0u32; nvars];
    enumerate_compositions(degree, 0, &mut exps, &mut |m: &[u32]| {
        let mono = Monomial(m.to_vec());
        if !gens.iter().any(|g| g.divides(&mono)) {
            count += 1;
        }
    });
    count
}

/// Visit every way of writing `remaining` as an ordered sum over positions
/// `from..`.
pub(crate) fn enumerate_compositions<F: FnMut(&[u32])>(
    remaining: u32,
    from: usize,
    exps: &mut Vec<u32>,
    visit: &mut F,
) {
    let n = exps.len();
    if n == 0 {
        if remaining == 0 {
            visit(&[]);
        }
        return;
    }
    if from == n - 1 {
        exps[from] = remaining;
        visit(exps);
        exps[from] = 0;
        return;
    }
    for e in 0..=remaining {
        exps[from] = e;
        enumerate_compositions(remaining - e, from + 1, exps, visit);
    }
    exps[from] = 0;
}

/// Hilbert function values for degrees `0..=delta_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub values: Vec<u128>,
}

impl HilbertData {
    pub fn delta_max(&self) -> u32 {
        self.values.len() as u32 - 1
    }
}

/// Hilbert function of the quotient by the submodule a verified basis
/// generates, degree by degree.
pub fn hilbert_function(gb: &GroebnerBasis<Domain>, delta_max: u32) -> HilbertData {
    let gens = gb.initial_module();
    let nvars = gb.ambient().nvars();
    let rank = gb.ambient().rank;
    let values = (0..=delta_max)
        .map(|d| standard_monomial_count(&gens, d, nvars, rank))
        .collect();
    HilbertData { values }
}

/// Polynomial in the power basis (constant first) valid from `delta0` on;
/// `delta0` is detected empirically from the computed window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertPolynomial {
    pub coeffs: Vec<BigRational>,
    pub delta0: u32,
}

impl HilbertPolynomial {
    pub fn eval(&self, delta: u32) -> BigRational {
        let x = BigRational::from(BigInt::from(delta));
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for HilbertPolynomial {
    /// Descending powers in the variable `d`: `6*d + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if !wrote {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "d")?;
                } else {
                    write!(f, "d^{k}")?;
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Fit the eventual polynomial by Newton forward differences: find the
/// smallest starting degree whose order-n differences vanish across the rest
/// of the window, then interpolate. Needs `delta_max >= delta0 + n + 1`.
pub fn hilbert_polynomial(
    data: &HilbertData,
    nvars: usize,
) -> Result<HilbertPolynomial, HilbertError> {
    let n = nvars;
    let delta_max = data.delta_max();
    for delta0 in 0..=delta_max {
        if delta0 as usize + n + 1 > delta_max as usize {
            break;
        }
        let window: Vec<BigInt> = data.values[delta0 as usize..]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        if !nth_differences_vanish(&window, n) {
            continue;
        }
        let poly = newton_fit(&window, delta0, n);
        // the fit must reproduce the whole window exactly
        for (i, v) in window.iter().enumerate() {
            debug_assert_eq!(
                poly.eval(delta0 + i as u32),
                BigRational::from(v.clone())
            );
        }
        return Ok(poly);
    }
    Err(HilbertError::IncreaseMaxDegree)
}

fn nth_differences_vanish(window: &[BigInt], n: usize) -> bool {
    let mut row = window.to_vec();
    for _ in 0..n {
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    row.iter().all(|v| v.is_zero())
}

fn newton_fit(window: &[BigInt], delta0: u32, n: usize) -> HilbertPolynomial {
    // leading differences at the anchor
    let mut diffs = Vec::with_capacity(n);
    let mut row = window.to_vec();
    for _ in 0..n {
        diffs.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    // P(x) = sum diffs[k] * C(x - delta0, k)
    let mut coeffs = vec![BigRational::zero(); n.max(1)];
    let mut falling = vec![BigRational::one()]; // (x-delta0)(x-delta0-1).../k!
    let mut kfact = BigInt::one();
    for (k, d) in diffs.iter().enumerate() {
        if k > 0 {
            // multiply by (x - (delta0 + k - 1))
            let shift = BigRational::from(BigInt::from(delta0 + k as u32 - 1));
            let mut next = vec![BigRational::zero(); falling.len() + 1];
            for (i, c) in falling.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &shift;
            }
            falling = next;
            kfact *= BigInt::from(k as u32);
        }
        let scale = BigRational::new(d.clone(), kfact.clone());
        for (i, c) in falling.iter().enumerate() {
            coeffs[i] += c * &scale;
        }
    }
    while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    HilbertPolynomial { coeffs, delta0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freemod::{Ambient, Convention, MonomialOrder, WeightedTermOrder};
    use crate::groebner::buchberger;
    use crate::parse::parse_element;

    fn mm(exps: &[u32], pos: usize) -> ModMonomial {
        ModMonomial::new(Monomial(exps.to_vec()), pos)
    }

    #[test]
    fn counts_against_tiny_cases() {
        // K[x]/<x^2>: basis {1, x}
        let m = vec![mm(&[2], 0)];
        assert_eq!(standard_monomial_count(&m, 0, 1, 1), 1);
        assert_eq!(standard_monomial_count(&m, 1, 1, 1), 1);
        assert_eq!(standard_monomial_count(&m, 2, 1, 1), 0);

        // <x e1> in K[x,y]^2: component 1 keeps only y^d, component 2 free
        let m = vec![mm(&[1, 0], 0)];
        for d in 0..6u32 {
            assert_eq!(standard_monomial_count(&m, d, 2, 2), 1 + d as u128 + 1);
        }

        // the constant-size family at eps = 1
        let m = vec![mm(&[1, 1, 0], 0), mm(&[0, 1, 1], 1), mm(&[1, 0, 1], 2)];
        for d in 0..=6u32 {
            assert_eq!(standard_monomial_count(&m, d, 3, 3), 6 * d as u128 + 3);
        }
    }

    #[test]
    fn inclusion_exclusion_matches_sieve() {
        let gens = vec![
            Monomial(vec![2, 0, 1]),
            Monomial(vec![0, 3, 0]),
            Monomial(vec![1, 1, 1]),
            Monomial(vec![0, 0, 4]),
        ];
        let refs: Vec<&Monomial> = gens.iter().collect();
        for d in 0..=8u32 {
            let all = monomial_count(3, d);
            let ie = all - divisible_count_inclusion_exclusion(&refs, d, 3);
            let sieve = sieve_standard_count(&refs, d, 3);
            assert_eq!(ie, sieve, "degree {d}");
        }
    }

    #[test]
    fn hilbert_function_of_free_module() {
        let a = Ambient::new(&["x", "y"], 2, crate::valfield::Domain::PAdic(2));
        let o = WeightedTermOrder::weights_from_ints(&[0, 0], MonomialOrder::Lex, Convention::Min);
        let gb = buchberger(&a, &[], &o).unwrap();
        let h = hilbert_function(&gb, 5);
        for d in 0..=5u32 {
            assert_eq!(h.values[d as usize], 2 * (d as u128 + 1));
        }
        let p = hilbert_polynomial(&h, 2).unwrap();
        assert_eq!(p.delta0, 0);
        assert_eq!(p.to_string(), "2*d + 2");
    }

    #[test]
    fn hilbert_function_of_single_generator() {
        let a = Ambient::new(&["x", "y"], 2, crate::valfield::Domain::PAdic(2));
        let o = WeightedTermOrder::weights_from_ints(&[0, 0], MonomialOrder::Lex, Convention::Min);
        let gb = buchberger(&a, &[parse_element(&a, "[x, 0]").unwrap()], &o).unwrap();
        let h = hilbert_function(&gb, 6);
        for d in 0..=6u32 {
            assert_eq!(h.values[d as usize], d as u128 + 2);
        }
        let p = hilbert_polynomial(&h, 2).unwrap();
        assert_eq!(p.to_string(), "d + 2");
    }

    #[test]
    fn polynomial_fit_examples() {
        // truncation at x^2 in one variable: eventually zero
        let data = HilbertData {
            values: vec![1, 1, 0, 0, 0, 0],
        };
        let p = hilbert_polynomial(&data, 1).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.delta0, 2);
        assert_eq!(p.to_string(), "0");

        // 6d + 3 from degree 0
        let data = HilbertData {
            values: (0..=6).map(|d| 6 * d as u128 + 3).collect(),
        };
        let p = hilbert_polynomial(&data, 3).unwrap();
        assert!(p.delta0 <= 1);
        assert_eq!(p.to_string(), "6*d + 3");
        for d in p.delta0..=6 {
            assert_eq!(p.eval(d), BigRational::from(BigInt::from(6 * d + 3)));
        }

        // not enough degrees to certify
        let short = HilbertData { values: vec![1, 2] };
        assert_eq!(
            hilbert_polynomial(&short, 2),
            Err(HilbertError::IncreaseMaxDegree)
        );
    }

    #[test]
    fn quadratic_fit() {
        // full polynomial ring in 3 variables: C(d+2, 2)
        let data = HilbertData {
            values: (0..=8u64).map(|d| binomial(d + 2, 2)).collect(),
        };
        let p = hilbert_polynomial(&data, 3).unwrap();
        assert_eq!(p.delta0, 0);
        assert_eq!(p.to_string(), "1/2*d^2 + 3/2*d + 1");
    }
}
