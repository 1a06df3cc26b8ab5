//! S-forms, the Buchberger-style completion and initial modules.
//!
//! A generating set is a Gröbner basis here when the initial forms of its
//! members generate the initial submodule; the working criterion is that
//! every pairwise S-form has normal-form remainder zero against the set.
//! The completion loop processes a FIFO pair queue, appending every nonzero
//! remainder, and terminates because the initial submodules strictly grow.

use crate::division::{normal_form, DivisionError, DivisionResult};
use crate::freemod::{
    term_div, term_divides, Ambient, CoeffRing, ModElement, ModMonomial, Term, WeightedTermOrder,
};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GbError {
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error("generator {} is zero", .0 + 1)]
    ZeroGenerator(usize),
    #[error("generator {} is not homogeneous", .0 + 1)]
    NonHomogeneous(usize),
    #[error("elements come from different ambients")]
    AmbientMismatch,
    #[error("the generator set failed Gröbner verification")]
    NotGroebner,
}

/// Least common multiple of two terms: `None` when the positions differ,
/// otherwise the coefficient lcm times the componentwise-max monomial.
pub fn lcm_term<R: CoeffRing>(ring: &R, a: &Term<R>, b: &Term<R>) -> Option<Term<R>> {
    if a.mono.pos != b.mono.pos {
        return None;
    }
    Some(Term {
        coeff: ring.coeff_lcm(&a.coeff, &b.coeff),
        mono: ModMonomial::new(a.mono.mono.lcm(&b.mono.mono), a.mono.pos),
    })
}

/// Monomial part of the term lcm; `None` stands for the zero lcm of terms in
/// different positions.
pub fn lcm_mod<R: CoeffRing>(a: &Term<R>, b: &Term<R>) -> Option<ModMonomial> {
    if a.mono.pos != b.mono.pos {
        return None;
    }
    Some(ModMonomial::new(a.mono.mono.lcm(&b.mono.mono), a.mono.pos))
}

/// S-form of two nonzero elements: both initial terms are scaled up to their
/// lcm and subtracted, cancelling the shared initial. Zero when the initials
/// live in different positions.
pub fn s_form<R: CoeffRing>(
    f: &ModElement<R>,
    g: &ModElement<R>,
    order: &WeightedTermOrder,
) -> Result<ModElement<R>, GbError> {
    if f.ambient() != g.ambient() {
        return Err(GbError::AmbientMismatch);
    }
    if f.is_zero() {
        return Err(GbError::ZeroGenerator(0));
    }
    if g.is_zero() {
        return Err(GbError::ZeroGenerator(1));
    }
    let ring = f.ring().clone();
    let in_f = f.initial_term(order).expect("nonzero");
    let in_g = g.initial_term(order).expect("nonzero");
    let lcm = match lcm_term(&ring, &in_f, &in_g) {
        Some(l) => l,
        None => return Ok(ModElement::zero(f.ambient())),
    };
    let qf = term_div(&ring, &lcm, &in_f).expect("initial divides lcm");
    let qg = term_div(&ring, &lcm, &in_g).expect("initial divides lcm");
    Ok(f.mul_poly_term(&qf).sub(&g.mul_poly_term(&qg)))
}

/// A verified Gröbner basis: generators with cached initial terms and the
/// monomial parts that generate the initial submodule.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<R: CoeffRing> {
    ambient: Ambient<R>,
    order: WeightedTermOrder,
    generators: Vec<ModElement<R>>,
    initial_terms: Vec<Term<R>>,
    monomial_initials: Vec<ModMonomial>,
}

impl<R: CoeffRing> GroebnerBasis<R> {
    fn assemble(
        ambient: Ambient<R>,
        order: WeightedTermOrder,
        generators: Vec<ModElement<R>>,
    ) -> Self {
        let initial_terms: Vec<Term<R>> = generators
            .iter()
            .map(|g| g.initial_term(&order).expect("nonzero generator"))
            .collect();
        let monomial_initials = initial_terms.iter().map(|t| t.mono.clone()).collect();
        GroebnerBasis {
            ambient,
            order,
            generators,
            initial_terms,
            monomial_initials,
        }
    }

    /// Wrap an existing generator list after checking the Buchberger
    /// criterion for it.
    pub fn verified(
        ambient: Ambient<R>,
        generators: Vec<ModElement<R>>,
        order: WeightedTermOrder,
    ) -> Result<Self, GbError> {
        validate_generators(&ambient, &generators)?;
        if !is_groebner(&generators, &order)? {
            return Err(GbError::NotGroebner);
        }
        Ok(Self::assemble(ambient, order, generators))
    }

    pub fn empty(ambient: Ambient<R>, order: WeightedTermOrder) -> Self {
        Self::assemble(ambient, order, Vec::new())
    }

    pub fn ambient(&self) -> &Ambient<R> {
        &self.ambient
    }

    pub fn order(&self) -> &WeightedTermOrder {
        &self.order
    }

    pub fn generators(&self) -> &[ModElement<R>] {
        &self.generators
    }

    pub fn initial_terms(&self) -> &[Term<R>] {
        &self.initial_terms
    }

    pub fn monomial_initials(&self) -> &[ModMonomial] {
        &self.monomial_initials
    }

    /// Normal form of `f` against this basis.
    pub fn reduce(&self, f: &ModElement<R>) -> Result<DivisionResult<R>, DivisionError> {
        normal_form(f, &self.generators, &self.order)
    }

    /// Minimal generating set of the monomial module spanned by the initial
    /// monomials: duplicates collapsed, divisible ones dropped.
    pub fn initial_module(&self) -> Vec<ModMonomial> {
        let mut unique: Vec<ModMonomial> = Vec::new();
        for m in &self.monomial_initials {
            if !unique.contains(m) {
                unique.push(m.clone());
            }
        }
        let keep: Vec<ModMonomial> = unique
            .iter()
            .filter(|m| !unique.iter().any(|n| n != *m && n.divides(m)))
            .cloned()
            .collect();
        let mut keep = keep;
        keep.sort();
        keep
    }

    /// Drop generators whose initial term is term-divisible by another's
    /// (keeping the earliest among mutually-divisible ones) and re-verify
    /// the Buchberger criterion on the survivors.
    pub fn minimalize(&self) -> Result<GroebnerBasis<R>, GbError> {
        let ring = self.ambient.ring.clone();
        let n = self.generators.len();
        let mut removed = vec![false; n];
        for i in 0..n {
            for j in 0..n {
                if i == j || removed[j] {
                    continue;
                }
                let strictly = term_divides(&ring, &self.initial_terms[j], &self.initial_terms[i])
                    && (!term_divides(&ring, &self.initial_terms[i], &self.initial_terms[j])
                        || j < i);
                if strictly {
                    removed[i] = true;
                    break;
                }
            }
        }
        let survivors: Vec<ModElement<R>> = self
            .generators
            .iter()
            .zip(&removed)
            .filter(|(_, r)| !**r)
            .map(|(g, _)| g.clone())
            .collect();
        if !is_groebner(&survivors, &self.order)? {
            return Err(GbError::NotGroebner);
        }
        Ok(Self::assemble(
            self.ambient.clone(),
            self.order.clone(),
            survivors,
        ))
    }
}

fn validate_generators<R: CoeffRing>(
    ambient: &Ambient<R>,
    gens: &[ModElement<R>],
) -> Result<(), GbError> {
    for (i, g) in gens.iter().enumerate() {
        if g.ambient() != ambient {
            return Err(GbError::AmbientMismatch);
        }
        if g.is_zero() {
            return Err(GbError::ZeroGenerator(i));
        }
        if !g.is_homogeneous() {
            return Err(GbError::NonHomogeneous(i));
        }
    }
    Ok(())
}

/// Buchberger completion: process pairs FIFO, skip self and zero-lcm pairs,
/// divide each S-form by the current set, append nonzero remainders.
pub fn buchberger<R: CoeffRing>(
    ambient: &Ambient<R>,
    basis: &[ModElement<R>],
    order: &WeightedTermOrder,
) -> Result<GroebnerBasis<R>, GbError> {
    validate_generators(ambient, basis)?;
    let mut g: Vec<ModElement<R>> = basis.to_vec();
    let mut queue: std::collections::VecDeque<(usize, usize)> = (0..g.len())
        .flat_map(|i| ((i + 1)..g.len()).map(move |j| (i, j)))
        .collect();
    while let Some((i, j)) = queue.pop_front() {
        if g[i] == g[j] {
            continue;
        }
        let s = s_form(&g[i], &g[j], order)?;
        if s.is_zero() {
            continue;
        }
        let rem = normal_form(&s, &g, order)?.remainder;
        if !rem.is_zero() {
            let new = g.len();
            g.push(rem);
            for k in 0..new {
                queue.push_back((k, new));
            }
        }
    }
    Ok(GroebnerBasis::assemble(ambient.clone(), order.clone(), g))
}

/// Buchberger criterion: do all pairwise S-forms reduce to zero against the
/// full set?
pub fn is_groebner<R: CoeffRing>(
    gens: &[ModElement<R>],
    order: &WeightedTermOrder,
) -> Result<bool, GbError> {
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            let s = s_form(&gens[i], &gens[j], order)?;
            if s.is_zero() {
                continue;
            }
            if !normal_form(&s, gens, order)?.remainder.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freemod::{Convention, Monomial, MonomialOrder};
    use crate::parse::parse_element;
    use crate::valfield::Domain;

    fn amb(vars: &[&str], rank: usize) -> Ambient<Domain> {
        Ambient::new(vars, rank, Domain::PAdic(2))
    }

    fn wto(w: &[i64], conv: Convention) -> WeightedTermOrder {
        WeightedTermOrder::weights_from_ints(w, MonomialOrder::Lex, conv)
    }

    fn remark_basis(a: &Ambient<Domain>, eps: u32) -> Vec<ModElement<Domain>> {
        // one distinguished unit-coefficient monomial per position, one extra
        // term with positive 2-adic valuation
        let e = eps.to_string();
        vec![
            parse_element(a, &format!("[x1^{e}*x2^{e} + 2*x3^{}, 0, 0]", 2 * eps)).unwrap(),
            parse_element(a, &format!("[0, x2^{e}*x3^{e} + 2*x1^{}, 0]", 2 * eps)).unwrap(),
            parse_element(a, &format!("[0, 0, x1^{e}*x3^{e} + 2*x2^{}]", 2 * eps)).unwrap(),
        ]
    }

    #[test]
    fn lcm_examples() {
        let ring = Domain::PAdic(2);
        let t = |c: i64, e: &[u32], pos: usize| Term::<Domain> {
            coeff: ring.scalar_from_int(c),
            mono: ModMonomial::new(Monomial(e.to_vec()), pos),
        };
        assert_eq!(
            lcm_mod(&t(2, &[2, 0], 0), &t(2, &[1, 0], 0)),
            Some(ModMonomial::new(Monomial(vec![2, 0]), 0))
        );
        assert_eq!(lcm_mod(&t(1, &[1, 0], 0), &t(1, &[0, 1], 1)), None);
        let tt = t(5, &[1, 2], 1);
        assert_eq!(lcm_mod(&tt, &tt), Some(tt.mono.clone()));
    }

    #[test]
    fn s_form_examples() {
        let a = amb(&["x", "y"], 2);
        let o = wto(&[1, 1], Convention::Max);
        let g1 = parse_element(&a, "[2*x^2, 3*y^2]").unwrap();
        let g2 = parse_element(&a, "[2*x, 5*y]").unwrap();
        // in(g1) = 2x^2 e1, in(g2) = 2x e1 under max:
        // s = (1/2) g1 - (x/2) g2 = 3/2 y^2 e2 - 5/2 xy e2
        let s = s_form(&g1, &g2, &o).unwrap();
        assert_eq!(s, parse_element(&a, "[0, 3/2*y^2 - 5/2*x*y]").unwrap());
        assert!(s_form(&g1, &g1, &o).unwrap().is_zero());

        // initials in different positions: zero
        let a3 = Ambient::new(&["x1", "x2", "x3"], 3, Domain::PAdic(2));
        let b = remark_basis(&a3, 1);
        let o3 = wto(&[0, 0, 0], Convention::Min);
        assert!(s_form(&b[0], &b[1], &o3).unwrap().is_zero());
    }

    #[test]
    fn buchberger_trivial_cases() {
        let a = amb(&["x", "y"], 2);
        let o = wto(&[0, 0], Convention::Min);
        let single = parse_element(&a, "[x^2, 0]").unwrap();
        let g = buchberger(&a, &[single.clone()], &o).unwrap();
        assert_eq!(g.generators(), &[single]);

        // monomial generators: all S-forms reduce to zero
        let monos = vec![
            parse_element(&a, "[x^2, 0]").unwrap(),
            parse_element(&a, "[x*y, 0]").unwrap(),
            parse_element(&a, "[0, y^3]").unwrap(),
        ];
        let g = buchberger(&a, &monos, &o).unwrap();
        assert_eq!(g.generators().len(), 3);
        assert!(is_groebner(g.generators(), &o).unwrap());

        let empty = buchberger(&a, &[], &o).unwrap();
        assert!(empty.generators().is_empty());
    }

    #[test]
    fn constant_initial_module_family() {
        // pairwise S-forms vanish (initials in distinct positions), so the
        // input is already a basis and the initial module has 3 generators
        // for every exponent choice
        let a3 = Ambient::new(&["x1", "x2", "x3"], 3, Domain::PAdic(2));
        let o3 = wto(&[0, 0, 0], Convention::Min);
        for eps in [1u32, 2, 3] {
            let b = remark_basis(&a3, eps);
            let g = buchberger(&a3, &b, &o3).unwrap();
            let init = g.initial_module();
            let expected: Vec<ModMonomial> = vec![
                ModMonomial::new(Monomial(vec![eps, eps, 0]), 0),
                ModMonomial::new(Monomial(vec![0, eps, eps]), 1),
                ModMonomial::new(Monomial(vec![eps, 0, eps]), 2),
            ];
            let mut expected = expected;
            expected.sort();
            assert_eq!(init, expected);
            assert_eq!(g.minimalize().unwrap().generators().len(), 3);
        }
    }

    #[test]
    fn completion_adds_elements_and_verifies() {
        // d = 1 instance that genuinely completes
        let a = amb(&["x", "y"], 1);
        let o = wto(&[0, 0], Convention::Min);
        let b = vec![
            parse_element(&a, "[x^2 + 2*y^2]").unwrap(),
            parse_element(&a, "[x*y + 2*x^2]").unwrap(),
        ];
        let g = buchberger(&a, &b, &o).unwrap();
        assert!(g.generators().len() >= 2);
        assert!(is_groebner(g.generators(), &o).unwrap());
        // membership: the inputs reduce to zero
        for f in &b {
            assert!(g.reduce(f).unwrap().remainder.is_zero());
        }
    }

    #[test]
    fn dropping_a_used_generator_breaks_the_criterion() {
        let a = amb(&["x", "y"], 1);
        let o = wto(&[0, 0], Convention::Min);
        let b = vec![
            parse_element(&a, "[x^2 + 2*y^2]").unwrap(),
            parse_element(&a, "[x*y + 2*x^2]").unwrap(),
        ];
        let g = buchberger(&a, &b, &o).unwrap();
        assert!(g.generators().len() > 2, "completion must add something");
        let truncated: Vec<_> = g.generators()[..g.generators().len() - 1].to_vec();
        assert!(!is_groebner(&truncated, &o).unwrap());
        assert!(matches!(
            GroebnerBasis::verified(a.clone(), truncated, o.clone()),
            Err(GbError::NotGroebner)
        ));
    }

    #[test]
    fn minimalize_drops_multiples() {
        let a = amb(&["x", "y"], 2);
        let o = wto(&[0, 0], Convention::Min);
        let g1 = parse_element(&a, "[x, 0]").unwrap();
        let g2 = parse_element(&a, "[x^2, 0]").unwrap();
        let g = buchberger(&a, &[g1.clone(), g2], &o).unwrap();
        let min = g.minimalize().unwrap();
        assert_eq!(min.generators(), &[g1]);

        let already = buchberger(&a, &[parse_element(&a, "[x, 0]").unwrap()], &o).unwrap();
        assert_eq!(already.minimalize().unwrap().generators().len(), 1);
    }

    #[test]
    fn initial_module_removes_divisible_monomials() {
        let a = amb(&["x", "y"], 2);
        let o = wto(&[0, 0], Convention::Min);
        let g = buchberger(
            &a,
            &[
                parse_element(&a, "[x, 0]").unwrap(),
                parse_element(&a, "[x^2, 0]").unwrap(),
            ],
            &o,
        )
        .unwrap();
        assert_eq!(
            g.initial_module(),
            vec![ModMonomial::new(Monomial(vec![1, 0]), 0)]
        );
    }
}
