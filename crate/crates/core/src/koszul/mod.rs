//! The superpotential differential on local operators and its cohomology.
//!
//! Gamma generators are used in the Taylor-coefficient basis `t_{a,b;i}`: the operator `γ_{a,b;i}`
//! of the free theory equals `a!·b!·t_{a,b;i}`. In this basis the extended observable `F~_{n₁,n₂}`
//! is the `z₁^{n₁}z₂^{n₂}` coefficient of `F(Σ t_{a,b} z₁^a z₂^b)`, a convolution with integer
//! coefficients. A [`GeneratorLabel`] of kind gamma is read as `t` throughout this module.
//!
//! With `W` quasi-homogeneous of degree `D` for weights `wᵢ`, the differential preserves the
//! interacting weight: `t_{a,b;i}` has weight `(a, b, wᵢ)` and the beta of stored mode `m` has
//! weight `(m₁, m₂, D − wᵢ)`. Homological degree is the number of betas, lowered by one.

mod complex;

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

pub use complex::{
    cohomology_table, sector_basis, sector_cohomology, sector_differentials, Basis, CohomologyBounds, CohomologyTable,
    SectorCohomology, SectorKey,
};
pub use crate::linalg::{exact_rank, SparseMatrixQ};

use crate::error::{Error, Result};
use crate::operators::{GeneratorLabel, OperatorMonomial};
use crate::poly::{flavor_variables, parse_polynomial, Polynomial};
use crate::rational::{format_q, Q};

/// Finite linear combination of operator monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OperatorPolynomial {
    terms: BTreeMap<OperatorMonomial, Q>,
}

/// Polynomial in the gamma (Taylor-basis) generators only.
pub type GammaPolynomial = OperatorPolynomial;

impl OperatorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: OperatorMonomial, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: OperatorMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// Product in the graded-commutative algebra of operators.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((s, m)) = a.multiply(b) {
                    out.add_term(m, x * y * Q::from_integer(s.into()));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<OperatorMonomial, Q> {
        &self.terms
    }

    pub fn coeff(&self, m: &OperatorMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }
}

impl std::fmt::Display for OperatorPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{m}", format_q(c))?;
        }
        Ok(())
    }
}

/// A polynomial `W` on `V` with its quasi-homogeneous weight data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superpotential {
    poly: Polynomial,
    names: Vec<String>,
    weights: Vec<u32>,
    degree: u32,
    partials: Vec<Polynomial>,
}

impl Superpotential {
    /// Homogeneous `W` (all weights 1); every monomial must have the same degree `≥ 2`.
    pub fn new(poly: Polynomial, names: Vec<String>) -> Result<Self> {
        let degree = poly.degree().ok_or_else(|| Error::InvalidArgument("superpotential is zero".into()))?;
        let weights = vec![1; poly.nvars()];
        Self::quasi_homogeneous(poly, names, weights, degree)
    }

    /// `W` with `Σ wᵢ eᵢ = D` on every monomial; requires `1 ≤ wᵢ < D`.
    pub fn quasi_homogeneous(poly: Polynomial, names: Vec<String>, weights: Vec<u32>, degree: u32) -> Result<Self> {
        if names.len() != poly.nvars() || weights.len() != poly.nvars() {
            return Err(Error::InvalidArgument("variable names and weights must match the polynomial".into()));
        }
        if poly.is_zero() {
            return Err(Error::InvalidArgument("superpotential is zero".into()));
        }
        if poly.min_degree().unwrap_or(0) < 2 {
            return Err(Error::InvalidArgument("superpotential must be at least quadratic".into()));
        }
        if weights.iter().any(|&w| w == 0 || w >= degree) {
            return Err(Error::NotQuasiHomogeneous);
        }
        for e in poly.terms().keys() {
            let d: u32 = e.iter().zip(&weights).map(|(x, w)| x * w).sum();
            if d != degree {
                return Err(Error::NotQuasiHomogeneous);
            }
        }
        let partials = (0..poly.nvars()).map(|i| poly.derivative(i)).collect();
        Ok(Self { poly, names, weights, degree, partials })
    }

    /// Parse over `x` or `x1..xn` and require homogeneity.
    pub fn parse(text: &str) -> Result<Self> {
        let names = flavor_variables(text)?;
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let poly = parse_polynomial(text, &refs)?;
        Self::new(poly, names)
    }

    /// Parse with explicit weights and degree.
    pub fn parse_weighted(text: &str, weights: Vec<u32>, degree: u32) -> Result<Self> {
        let names = flavor_variables(text)?;
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let poly = parse_polynomial(text, &refs)?;
        Self::quasi_homogeneous(poly, names, weights, degree)
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.poly.nvars()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Quasi-homogeneous degree `D` (`N + 1` for a homogeneous `W`).
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn partial(&self, i: usize) -> &Polynomial {
        &self.partials[i]
    }
}

/// `F~_{n₁,n₂}`: the `z₁^{n₁}z₂^{n₂}` Taylor coefficient of `F(Σ_{a,b} t_{a,b} z₁^a z₂^b)`.
pub fn extended_observable(f: &Polynomial, n1: u32, n2: u32) -> GammaPolynomial {
    let mut out = OperatorPolynomial::zero();
    for (exps, c) in f.terms() {
        let factors: Vec<usize> = exps.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect();
        let mut counts: HashMap<OperatorMonomial, u64> = HashMap::new();
        let mut word = Vec::with_capacity(factors.len());
        distribute(&factors, (n1, n2), &mut word, &mut counts);
        for (m, k) in counts {
            out.add_term(m, c * Q::from_integer(k.into()));
        }
    }
    out
}

/// Every ordered assignment of modes to `factors` summing to `rem`.
fn distribute(
    factors: &[usize],
    rem: (u32, u32),
    word: &mut Vec<GeneratorLabel>,
    counts: &mut HashMap<OperatorMonomial, u64>,
) {
    match factors {
        [] => {
            if rem == (0, 0) {
                let (_, m) = OperatorMonomial::from_word(word).expect("gammas never vanish");
                *counts.entry(m).or_default() += 1;
            }
        }
        [last] => {
            word.push(GeneratorLabel::gamma(rem.0, rem.1, *last));
            distribute(&[], (0, 0), word, counts);
            word.pop();
        }
        [first, rest @ ..] => {
            for a in 0..=rem.0 {
                for b in 0..=rem.1 {
                    word.push(GeneratorLabel::gamma(a, b, *first));
                    distribute(rest, (rem.0 - a, rem.1 - b), word, counts);
                    word.pop();
                }
            }
        }
    }
}

/// `s_int` on one monomial: the odd derivation sending the beta of flavor `i` and stored mode
/// `m` to `(∂ᵢW)~_m` and every gamma to zero.
pub fn interaction_differential(w: &Superpotential, monomial: &OperatorMonomial) -> OperatorPolynomial {
    let mut cache = HashMap::new();
    differential_with_cache(w, monomial, &mut cache)
}

pub(crate) fn differential_with_cache(
    w: &Superpotential,
    monomial: &OperatorMonomial,
    cache: &mut HashMap<(usize, (u32, u32)), GammaPolynomial>,
) -> OperatorPolynomial {
    let word = monomial.word();
    let mut out = OperatorPolynomial::zero();
    let mut beta_index = 0usize;
    for (pos, g) in word.iter().enumerate() {
        if !g.is_odd() {
            continue;
        }
        let sign = if beta_index.is_multiple_of(2) { Q::one() } else { -Q::one() };
        beta_index += 1;
        let image = cache
            .entry((g.flavor, g.mode))
            .or_insert_with(|| extended_observable(w.partial(g.flavor), g.mode.0, g.mode.1))
            .clone();
        let mut rest = word.clone();
        rest.remove(pos);
        for (gm, c) in image.terms() {
            let mut full = rest.clone();
            full.extend(gm.word());
            let (s, m) = OperatorMonomial::from_word(&full).expect("no beta repeats after removing one");
            debug_assert_eq!(s, 1);
            out.add_term(m, c * &sign);
        }
    }
    out
}

/// `s_int` extended linearly.
pub fn apply_differential(w: &Superpotential, p: &OperatorPolynomial) -> OperatorPolynomial {
    let mut cache = HashMap::new();
    let mut out = OperatorPolynomial::zero();
    for (m, c) in p.terms() {
        out = out.add(&differential_with_cache(w, m, &mut cache).scale(c));
    }
    out
}

/// Interacting weight `(A, B, Z)` of a monomial.
pub fn interacting_weight(w: &Superpotential, m: &OperatorMonomial) -> (u32, u32, u32) {
    let mut acc = (0, 0, 0);
    for (g, e) in m.factors() {
        let (a, b, z) = generator_weight(w, g);
        acc = (acc.0 + a * e, acc.1 + b * e, acc.2 + z * e);
    }
    acc
}

pub(crate) fn generator_weight(w: &Superpotential, g: &GeneratorLabel) -> (u32, u32, u32) {
    let wi = w.weights()[g.flavor];
    if g.is_odd() {
        (g.mode.0, g.mode.1, w.degree() - wi)
    } else {
        (g.mode.0, g.mode.1, wi)
    }
}

/// Factor relating a Taylor-basis monomial to the derivative basis: `∏ (a!b!)^e` over gammas.
pub fn derivative_basis_scale(m: &OperatorMonomial) -> Q {
    let mut acc = num_bigint::BigInt::one();
    for (g, e) in m.gammas() {
        let f = crate::rational::factorial(g.mode.0 as u64) * crate::rational::factorial(g.mode.1 as u64);
        for _ in 0..e {
            acc *= &f;
        }
    }
    Q::from_integer(acc)
}

/// Rewrite a Taylor-basis combination in the derivative basis `γ_{a,b} = a!b!·t_{a,b}`.
pub fn to_derivative_basis(p: &OperatorPolynomial) -> OperatorPolynomial {
    let mut out = OperatorPolynomial::zero();
    for (m, c) in p.terms() {
        out.add_term(m.clone(), c / derivative_basis_scale(m));
    }
    out
}

/// Inverse of [`to_derivative_basis`].
pub fn from_derivative_basis(p: &OperatorPolynomial) -> OperatorPolynomial {
    let mut out = OperatorPolynomial::zero();
    for (m, c) in p.terms() {
        out.add_term(m.clone(), c * derivative_basis_scale(m));
    }
    out
}
