//! The ecart-driven division (normal form) algorithm for homogeneous module
//! elements, and its independent contract checker.
//!
//! Because the weighted term order is not a monomial order, plain
//! multivariate division need not terminate. The fix is Mora's: keep a
//! growing divisor set `D` seeded with the generators, prefer divisors whose
//! support sticks least outside the current partial remainder `q` (stashing
//! `q` into `D` whenever the chosen divisor drags in new monomials), and when
//! a stashed element is reused, cancel the two recorded identities against
//! each other and rescale by `1/(1-c)`. The quotient `c` is then a constant
//! of positive valuation, so `1-c` is a unit.
//!
//! The divisor-selection measure is the divisor overhang `|supp(g) \
//! supp(q)|`: with that choice an overhang-0 reduction strictly shrinks the
//! support of `q` and termination follows from the pigeonhole on supports.
//! Selecting on `|supp(q) \ supp(g)|` instead admits inputs that loop with
//! ever-growing coefficient valuations and nothing ever stashed.

use crate::freemod::{
    compare_terms, ecart, term_div, term_divides, Ambient, CoeffRing, ModElement, ModMonomial,
    Monomial, Term, WeightedTermOrder,
};
use crate::freemod::Convention;
use std::cmp::Ordering;
use thiserror::Error;

/// Safety net; the algorithm terminates by theorem, so tripping this is a
/// bug, not an input error.
pub const ITERATION_GUARD: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisionError {
    #[error("dividend is not homogeneous")]
    NonHomogeneousInput,
    #[error("generator {} is not homogeneous", .0 + 1)]
    NonHomogeneousGenerator(usize),
    #[error("generator {} is zero", .0 + 1)]
    ZeroGenerator(usize),
    #[error("elements come from different ambients")]
    AmbientMismatch,
    #[error("iteration guard ({0}) exceeded; this is a bug")]
    IterationGuard(u64),
    #[error("rescaling step saw a quotient of non-positive valuation; this is a bug")]
    RescaleValuation,
    #[error("rescaling step hit c = 1; division cannot proceed")]
    Stalled,
}

/// Output of [`normal_form`]: `f = sum(h_i * g_i) + r` with the quotients as
/// rank-1 elements (plain polynomials).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionResult<R: CoeffRing> {
    pub remainder: ModElement<R>,
    pub quotients: Vec<ModElement<R>>,
    pub iterations: u64,
}

struct DivisorEntry<R: CoeffRing> {
    element: ModElement<R>,
    initial: Term<R>,
    origin: Origin<R>,
}

enum Origin<R: CoeffRing> {
    Generator(usize),
    /// A stashed partial remainder, carrying the quotients and remainder at
    /// stash time so the rescaling step can cancel whole identities.
    Stashed {
        quotients: Vec<ModElement<R>>,
        remainder: ModElement<R>,
    },
}

fn validate<R: CoeffRing>(
    f: &ModElement<R>,
    gens: &[ModElement<R>],
) -> Result<(), DivisionError> {
    if !f.is_homogeneous() {
        return Err(DivisionError::NonHomogeneousInput);
    }
    for (i, g) in gens.iter().enumerate() {
        if g.ambient() != f.ambient() {
            return Err(DivisionError::AmbientMismatch);
        }
        if g.is_zero() {
            return Err(DivisionError::ZeroGenerator(i));
        }
        if !g.is_homogeneous() {
            return Err(DivisionError::NonHomogeneousGenerator(i));
        }
    }
    Ok(())
}

/// Divide homogeneous `f` by the homogeneous set `S`, producing a remainder
/// none of whose terms is divisible by any `in(g_i)`, together with
/// quotients making the division identity exact. Deterministic: ecart ties
/// go to the earliest entry of the divisor set.
pub fn normal_form<R: CoeffRing>(
    f: &ModElement<R>,
    gens: &[ModElement<R>],
    order: &WeightedTermOrder,
) -> Result<DivisionResult<R>, DivisionError> {
    validate(f, gens)?;
    let ambient = f.ambient().clone();
    let ring = ambient.ring.clone();
    let poly_ambient = Ambient {
        vars: ambient.vars.clone(),
        rank: 1,
        ring: ring.clone(),
    };

    let mut divisors: Vec<DivisorEntry<R>> = Vec::with_capacity(gens.len());
    for (k, g) in gens.iter().enumerate() {
        divisors.push(DivisorEntry {
            element: g.clone(),
            initial: g.initial_term(order).expect("nonzero generator"),
            origin: Origin::Generator(k),
        });
    }

    let mut quotients = vec![ModElement::zero(&poly_ambient); gens.len()];
    let mut remainder = ModElement::zero(&ambient);
    let mut q = f.clone();
    let mut iterations: u64 = 0;

    while !q.is_zero() {
        iterations += 1;
        if iterations > ITERATION_GUARD {
            return Err(DivisionError::IterationGuard(ITERATION_GUARD));
        }
        if std::env::var_os("VALGB_TRACE").is_some() {
            let hs: usize = quotients.iter().map(|h| h.terms().map(|(_, c)| format!("{c}").len()).sum::<usize>()).sum();
            eprintln!(
                "iter {iterations}: |q| = {}, |D| = {}, q coeff {:?}, h total {}, t = {:?}",
                q.len(),
                divisors.len(),
                q.terms().map(|(_, c)| format!("{c}").len()).max(),
                hs,
                std::time::Instant::now()
            );
        }
        let in_q = q.initial_term(order).expect("nonzero");

        // smallest overhang wins; ties go to the earliest insertion
        let mut best: Option<(usize, usize)> = None;
        for (idx, entry) in divisors.iter().enumerate() {
            if term_divides(&ring, &entry.initial, &in_q) {
                let overhang = ecart(&q, &entry.element);
                if best.map_or(true, |(b, _)| overhang < b) {
                    best = Some((overhang, idx));
                }
            }
        }

        let stash = |q: &ModElement<R>,
                     quotients: &[ModElement<R>],
                     remainder: &ModElement<R>,
                     order: &WeightedTermOrder|
         -> DivisorEntry<R> {
            DivisorEntry {
                element: q.clone(),
                initial: q.initial_term(order).expect("nonzero"),
                origin: Origin::Stashed {
                    quotients: quotients.to_vec(),
                    remainder: remainder.clone(),
                },
            }
        };

        match best {
            None => {
                divisors.push(stash(&q, &quotients, &remainder, order));
                remainder.add_term(&in_q.mono, &in_q.coeff);
                q.add_term(&in_q.mono, &ring.neg(&in_q.coeff));
            }
            Some((overhang, idx)) => {
                if overhang > 0 {
                    divisors.push(stash(&q, &quotients, &remainder, order));
                }
                let g_initial = divisors[idx].initial.clone();
                let c = term_div(&ring, &in_q, &g_initial).expect("initial divides");
                let reduced = q.sub(&divisors[idx].element.mul_poly_term(&c));
                match &divisors[idx].origin {
                    Origin::Generator(k) => {
                        let k = *k;
                        q = reduced;
                        quotients[k]
                            .add_term(&ModMonomial::new(c.exps.clone(), 0), &c.coeff);
                    }
                    Origin::Stashed {
                        quotients: snap_q,
                        remainder: snap_r,
                    } => {
                        // same degree forces a constant quotient
                        debug_assert!(c.exps.is_unit());
                        let cv = ring.valuation(&c.coeff);
                        if order.convention == Convention::Min && !cv.is_positive() {
                            return Err(DivisionError::RescaleValuation);
                        }
                        let one_minus_c = ring.sub(&ring.one(), &c.coeff);
                        let unit = ring
                            .try_div(&ring.one(), &one_minus_c)
                            .ok_or(DivisionError::Stalled)?;
                        q = reduced.scale(&unit);
                        let new_quotients: Vec<ModElement<R>> = quotients
                            .iter()
                            .zip(snap_q)
                            .map(|(h, hm)| h.sub(&hm.scale(&c.coeff)).scale(&unit))
                            .collect();
                        remainder = remainder.sub(&snap_r.scale(&c.coeff)).scale(&unit);
                        quotients = new_quotients;
                    }
                }
            }
        }
    }

    Ok(DivisionResult {
        remainder,
        quotients,
        iterations,
    })
}

/// Independent verification of a division result against the theorem's four
/// conditions, by exact re-expansion and direct scans. This is the oracle
/// the test suites trust; it shares no state with [`normal_form`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContractReport {
    pub violations: Vec<String>,
}

impl ContractReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_division_contract<R: CoeffRing>(
    f: &ModElement<R>,
    gens: &[ModElement<R>],
    result: &DivisionResult<R>,
    order: &WeightedTermOrder,
) -> ContractReport {
    let ring = f.ring().clone();
    let mut report = ContractReport::default();

    if result.quotients.len() != gens.len() {
        report
            .violations
            .push(format!(
                "quotient count {} does not match generator count {}",
                result.quotients.len(),
                gens.len()
            ));
        return report;
    }

    // C1: f = sum h_i g_i + r, re-expanded with independent arithmetic
    let mut sum = result.remainder.clone();
    for (g, h) in gens.iter().zip(&result.quotients) {
        sum = sum.add(&g.mul_poly(h));
    }
    if sum != *f {
        report.violations.push("C1: f != sum(h_i g_i) + r".to_string());
    }

    let initials: Vec<Term<R>> = gens
        .iter()
        .map(|g| g.initial_term(order).expect("nonzero generator"))
        .collect();

    // C3: no remainder term is divisible by any generator initial
    for (m, c) in result.remainder.terms() {
        let term = Term {
            coeff: c.clone(),
            mono: m.clone(),
        };
        for (i, init) in initials.iter().enumerate() {
            if term_divides(&ring, init, &term) {
                report.violations.push(format!(
                    "C3: remainder term at position e{} is divisible by in(g_{})",
                    m.pos + 1,
                    i + 1
                ));
            }
        }
    }

    // C2 and C4 compare against in(f); vacuous for zero f
    if let Ok(in_f) = f.initial_term(order) {
        for (i, (g, h)) in gens.iter().zip(&result.quotients).enumerate() {
            let prod = g.mul_poly(h);
            if prod.is_zero() {
                continue;
            }
            let in_prod = prod.initial_term(order).expect("nonzero");
            if compare_terms(&ring, &in_prod, &in_f, order) == Ordering::Less {
                report
                    .violations
                    .push(format!("C2: in(h_{} g_{}) < in(f)", i + 1, i + 1));
            }
        }
        if !result.remainder.is_zero() {
            let in_r = result.remainder.initial_term(order).expect("nonzero");
            if compare_terms(&ring, &in_r, &in_f, order) == Ordering::Less {
                report.violations.push("C4: in(r) < in(f)".to_string());
            }
        }
    }

    // quotients must be plain polynomials
    for (i, h) in result.quotients.iter().enumerate() {
        if h.support().any(|m| m.pos != 0) {
            report
                .violations
                .push(format!("quotient h_{} is not a rank-1 element", i + 1));
        }
    }

    report
}

/// Convenience used by tests: divide and immediately verify the contract.
pub fn normal_form_checked<R: CoeffRing>(
    f: &ModElement<R>,
    gens: &[ModElement<R>],
    order: &WeightedTermOrder,
) -> Result<DivisionResult<R>, DivisionError> {
    let result = normal_form(f, gens, order)?;
    let report = check_division_contract(f, gens, &result, order);
    assert!(
        report.is_ok(),
        "division contract violated: {:?}",
        report.violations
    );
    Ok(result)
}

/// Rank-1 helper: the constant polynomial 1 in the quotient ambient.
pub fn one_poly<R: CoeffRing>(ambient: &Ambient<R>) -> ModElement<R> {
    let poly_ambient = Ambient {
        vars: ambient.vars.clone(),
        rank: 1,
        ring: ambient.ring.clone(),
    };
    let mut one = ModElement::zero(&poly_ambient);
    one.add_term(
        &ModMonomial::new(Monomial::unit(ambient.nvars()), 0),
        &ambient.ring.one(),
    );
    one
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freemod::{Convention, MonomialOrder};
    use crate::parse::parse_element;
    use crate::valfield::Domain;

    fn amb(vars: &[&str], rank: usize) -> Ambient<Domain> {
        Ambient::new(vars, rank, Domain::PAdic(2))
    }

    fn wto(w: &[i64], conv: Convention) -> WeightedTermOrder {
        WeightedTermOrder::weights_from_ints(w, MonomialOrder::Lex, conv)
    }

    #[test]
    fn dividing_by_self_gives_unit_quotient() {
        let a = amb(&["x", "y"], 2);
        let o = wto(&[1, 1], Convention::Min);
        let g1 = parse_element(&a, "[2*x^2, 3*y^2]").unwrap();
        let g2 = parse_element(&a, "[2*x, 5*y]").unwrap();
        let res = normal_form_checked(&g1, &[g1.clone(), g2], &o).unwrap();
        assert!(res.remainder.is_zero());
        assert_eq!(res.quotients[0], one_poly(&a));
        assert!(res.quotients[1].is_zero());
    }

    #[test]
    fn zero_dividend_short_circuits() {
        let a = amb(&["x", "y"], 2);
        let o = wto(&[1, 1], Convention::Min);
        let g = parse_element(&a, "[2*x, 5*y]").unwrap();
        let res = normal_form(&ModElement::zero(&a), &[g], &o).unwrap();
        assert!(res.remainder.is_zero());
        assert!(res.quotients[0].is_zero());
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn worked_division_under_max_convention() {
        // f = [5x^3, 7y^3], g1 = [2x^2, 3y^2], g2 = [2x, 5y], w = (1,1):
        // r = 7y^3 e2 - 15/2 xy^2 e2 with h1 = 5/2 x.
        let a = amb(&["x", "y"], 2);
        let o = wto(&[1, 1], Convention::Max);
        let f = parse_element(&a, "[5*x^3, 7*y^3]").unwrap();
        let g1 = parse_element(&a, "[2*x^2, 3*y^2]").unwrap();
        let g2 = parse_element(&a, "[2*x, 5*y]").unwrap();
        let res = normal_form_checked(&f, &[g1, g2], &o).unwrap();
        assert_eq!(
            res.remainder,
            parse_element(&a, "[0, 7*y^3 - 15/2*x*y^2]").unwrap()
        );
        let pa = Ambient::new(&["x", "y"], 1, Domain::PAdic(2));
        assert_eq!(res.quotients[0], parse_element(&pa, "[5/2*x]").unwrap());
        assert!(res.quotients[1].is_zero());
    }

    #[test]
    fn worked_division_under_min_convention() {
        // same inputs under min: pinned from the deterministic FIFO run and
        // verified by the contract checker
        let a = amb(&["x", "y"], 2);
        let o = wto(&[1, 1], Convention::Min);
        let f = parse_element(&a, "[5*x^3, 7*y^3]").unwrap();
        let g1 = parse_element(&a, "[2*x^2, 3*y^2]").unwrap();
        let g2 = parse_element(&a, "[2*x, 5*y]").unwrap();
        let res = normal_form_checked(&f, &[g1, g2], &o).unwrap();
        assert_eq!(
            res.remainder,
            parse_element(&a, "[5*x^3 - 14/3*x^2*y, 0]").unwrap()
        );
        let pa = Ambient::new(&["x", "y"], 1, Domain::PAdic(2));
        assert_eq!(res.quotients[0], parse_element(&pa, "[7/3*y]").unwrap());
        assert!(res.quotients[1].is_zero());
    }

    #[test]
    fn rescaling_branch_terminates_support_cycle() {
        // q cycles between supports {x^2} and {xy} with growing valuation;
        // only the stashed copy of the first q stops it. The quotients land
        // on h = (-1/7, 1/7) and the remainder is zero.
        let a = amb(&["x", "y"], 1);
        let o = wto(&[0, 2], Convention::Min);
        let f = parse_element(&a, "[x^2]").unwrap();
        let g1 = parse_element(&a, "[x^2 + x*y]").unwrap();
        let g2 = parse_element(&a, "[x*y + 8*x^2]").unwrap();
        let res = normal_form_checked(&f, &[g1, g2], &o).unwrap();
        assert!(res.remainder.is_zero());
        let pa = Ambient::new(&["x", "y"], 1, Domain::PAdic(2));
        assert_eq!(res.quotients[0], parse_element(&pa, "[-1/7]").unwrap());
        assert_eq!(res.quotients[1], parse_element(&pa, "[1/7]").unwrap());
        assert!(res.iterations <= 10);
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = amb(&["x", "y"], 1);
        let o = wto(&[0, 0], Convention::Min);
        let inhom = parse_element(&a, "[x + y^2]").unwrap();
        let g = parse_element(&a, "[x]").unwrap();
        assert_eq!(
            normal_form(&inhom, &[g.clone()], &o),
            Err(DivisionError::NonHomogeneousInput)
        );
        assert_eq!(
            normal_form(&g, &[ModElement::zero(&a)], &o),
            Err(DivisionError::ZeroGenerator(0))
        );
        assert_eq!(
            normal_form(&g, &[inhom], &o),
            Err(DivisionError::NonHomogeneousGenerator(0))
        );
        let other = Ambient::new(&["x", "y"], 2, Domain::PAdic(2));
        let h = parse_element(&other, "[x, 0]").unwrap();
        assert_eq!(normal_form(&g, &[h], &o), Err(DivisionError::AmbientMismatch));
    }

    #[test]
    fn contract_checker_flags_tampering() {
        let a = amb(&["x", "y"], 2);
        let o = wto(&[1, 1], Convention::Max);
        let f = parse_element(&a, "[5*x^3, 7*y^3]").unwrap();
        let gens = vec![
            parse_element(&a, "[2*x^2, 3*y^2]").unwrap(),
            parse_element(&a, "[2*x, 5*y]").unwrap(),
        ];
        let good = normal_form(&f, &gens, &o).unwrap();
        assert!(check_division_contract(&f, &gens, &good, &o).is_ok());

        // C1 violation: add x*e1 to the remainder
        let mut tampered = good.clone();
        tampered.remainder = tampered
            .remainder
            .add(&parse_element(&a, "[x, 0]").unwrap());
        let report = check_division_contract(&f, &gens, &tampered, &o);
        assert!(report.violations.iter().any(|v| v.starts_with("C1")));

        // C3 violation: inject a term divisible by in(g2) = 2x e1, patching
        // C1 by pushing the opposite terms through quotient h2 = -x^2
        let mut reducible = good.clone();
        reducible.remainder = reducible
            .remainder
            .add(&parse_element(&a, "[2*x^3, 5*x^2*y]").unwrap());
        let pa = Ambient::new(&["x", "y"], 1, Domain::PAdic(2));
        reducible.quotients[1] = parse_element(&pa, "[-x^2]").unwrap();
        let report = check_division_contract(&f, &gens, &reducible, &o);
        assert!(report.violations.iter().any(|v| v.starts_with("C3")));
        assert!(!report.violations.iter().any(|v| v.starts_with("C1")));
    }
}
