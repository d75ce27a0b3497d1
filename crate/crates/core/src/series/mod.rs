//! Exact truncated multivariate Laurent series.
//!
//! A [`TruncatedSeries`] stores finitely many monomials inside the box described by its
//! [`FugacitySpec`]: a per-variable exponent window plus an optional bound on the total degree
//! of the "mode" variables. Every product is truncated back into the box.
//!
//! Truncation is only faithful to the untruncated product when no discarded term could re-enter
//! the box after further multiplication. Variables whose exponents only grow (the mode variables,
//! the ghost fugacity `u`) are always safe; callers that multiply by factors with negative
//! exponents in some variable (the flavor fugacity `z`, the Cartan fugacity `p`) work in a
//! widened box and [`restrict`](TruncatedSeries::restrict) at the end.
//!
//! Invariants:
//! - no stored coefficient is zero
//! - every stored exponent vector lies inside the spec box
//! - exponents are stored in lattice units (multiplied by the variable's denominator)

mod json;
mod spec;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

pub use json::{ModeBoundJson, SeriesJson, SpecJson, TermJson, VariableJson};
pub use spec::{FugacitySpec, ModeBound, SpecBuilder, Variable};

use crate::error::{Error, Result};
use crate::rational::{format_q, q_int, Q};

/// Exact rational multivariate Laurent series truncated to a box.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    spec: Arc<FugacitySpec>,
    terms: BTreeMap<Vec<i32>, Q>,
}

impl TruncatedSeries {
    pub fn zero(spec: &FugacitySpec) -> Self {
        Self { spec: Arc::new(spec.clone()), terms: BTreeMap::new() }
    }

    pub fn one(spec: &FugacitySpec) -> Self {
        Self::constant(spec, Q::one())
    }

    pub fn constant(spec: &FugacitySpec, c: Q) -> Self {
        let mut s = Self::zero(spec);
        s.add_term(vec![0; spec.len()], c);
        s
    }

    /// `coeff · ∏ v^e`; a monomial outside the box yields the zero series.
    pub fn monomial(spec: &FugacitySpec, exps: &[(&str, Rational64)], coeff: Q) -> Result<Self> {
        let scaled = spec.scaled_exponents(exps)?;
        let mut s = Self::zero(spec);
        s.add_term(scaled, coeff);
        Ok(s)
    }

    /// Integer-exponent shorthand for [`monomial`](Self::monomial).
    pub fn monomial_int(spec: &FugacitySpec, exps: &[(&str, i64)], coeff: i64) -> Result<Self> {
        let exps: Vec<(&str, Rational64)> = exps.iter().map(|&(n, e)| (n, Rational64::from_integer(e))).collect();
        Self::monomial(spec, &exps, q_int(coeff))
    }

    /// `1 − m` for the monomial `m` (with `m` dropped when outside the box).
    pub fn one_minus(spec: &FugacitySpec, exps: &[(&str, i64)]) -> Result<Self> {
        Self::one(spec).sub(&Self::monomial_int(spec, exps, 1)?)
    }

    pub(crate) fn from_raw(spec: Arc<FugacitySpec>, raw: impl IntoIterator<Item = (Vec<i32>, Q)>) -> Self {
        let mut s = Self { spec, terms: BTreeMap::new() };
        for (e, c) in raw {
            s.add_term(e, c);
        }
        s
    }

    pub fn spec(&self) -> &FugacitySpec {
        &self.spec
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

    fn add_term(&mut self, exps: Vec<i32>, c: Q) {
        if c.is_zero() || !self.spec.contains(&exps) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Coefficient at named exponents (unnamed variables at exponent 0).
    pub fn coeff(&self, exps: &[(&str, Rational64)]) -> Result<Q> {
        let scaled = self.spec.scaled_exponents(exps)?;
        Ok(self.terms.get(&scaled).cloned().unwrap_or_else(Q::zero))
    }

    pub fn coeff_int(&self, exps: &[(&str, i64)]) -> Result<Q> {
        let exps: Vec<(&str, Rational64)> = exps.iter().map(|&(n, e)| (n, Rational64::from_integer(e))).collect();
        self.coeff(&exps)
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&vec![0; self.spec.len()]).cloned().unwrap_or_else(Q::zero)
    }

    /// Terms in lexicographic order of the spec's variable order, exponents as rationals.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<Rational64>, &Q)> + '_ {
        self.terms.iter().map(move |(e, c)| {
            let exps = (0..e.len()).map(|i| self.spec.exponent_of(e, i)).collect();
            (exps, c)
        })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec {
            Ok(())
        } else {
            Err(Error::IncompatibleSpecs)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.spec);
        }
        Self { spec: self.spec.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    /// Coefficientwise convolution, truncated to the box.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc: HashMap<Vec<i32>, Q> = HashMap::with_capacity(large.len());
        let mut buf = vec![0i32; self.spec.len()];
        for (ea, ca) in &small.terms {
            for (eb, cb) in &large.terms {
                for ((b, x), y) in buf.iter_mut().zip(ea).zip(eb) {
                    *b = x + y;
                }
                if !self.spec.contains(&buf) {
                    continue;
                }
                let prod = ca * cb;
                match acc.get_mut(buf.as_slice()) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(buf.clone(), prod);
                    }
                }
            }
        }
        Ok(Self::from_raw(self.spec.clone(), acc))
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(&self.spec);
        for _ in 0..n {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse within the box, by the geometric expansion around the constant term.
    pub fn invert(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NonUnit);
        }
        let c_inv = c.recip();
        // self = c (1 - r)
        let mut r = self.scale(&-c_inv.clone());
        r.terms.remove(&vec![0; self.spec.len()]);
        let mut sum = Self::one(&self.spec);
        let mut power = Self::one(&self.spec);
        let cap = self.spec.span() + 2;
        let mut k = 0;
        loop {
            power = power.multiply(&r)?;
            if power.is_zero() {
                break;
            }
            k += 1;
            if k > cap {
                return Err(Error::DivergentInversion);
            }
            sum = sum.add(&power)?;
        }
        Ok(sum.scale(&c_inv))
    }

    /// Rewrite every monomial by `rules` into `target`, truncating to the target box.
    pub fn substitute(&self, rules: &Substitution, target: &FugacitySpec) -> Result<Self> {
        let plan = rules.plan(&self.spec, target)?;
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut num = vec![Rational64::zero(); target.len()];
            let mut sign = 1i64;
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let exponent = self.spec.exponent_of(e, i);
                let image = plan[i]
                    .as_ref()
                    .ok_or_else(|| Error::MissingVariable(self.spec.variables()[i].name().to_string()))?;
                if image.sign < 0 {
                    if !exponent.is_integer() {
                        return Err(Error::LatticeViolation {
                            variable: self.spec.variables()[i].name().to_string(),
                            exponent: exponent.to_string(),
                        });
                    }
                    if exponent.to_integer().rem_euclid(2) == 1 {
                        sign = -sign;
                    }
                }
                for &(j, te) in &image.exps {
                    num[j] += exponent * te;
                }
            }
            let mut scaled = Vec::with_capacity(target.len());
            for (j, x) in num.iter().enumerate() {
                let v = &target.variables()[j];
                let s = v.scale(*x).ok_or_else(|| Error::LatticeViolation {
                    variable: v.name().to_string(),
                    exponent: x.to_string(),
                })?;
                scaled.push(s as i32);
            }
            out.add_term(scaled, if sign < 0 { -c.clone() } else { c.clone() });
        }
        Ok(out)
    }

    /// Re-express in `target` (matched by variable name), dropping terms outside its box.
    pub fn restrict(&self, target: &FugacitySpec) -> Result<Self> {
        self.substitute(&Substitution::identity(), target)
    }

    /// `f↑k`: every variable `v` replaced by `v^k`.
    pub fn adams(&self, k: u32) -> Self {
        let k = k as i32;
        Self::from_raw(
            self.spec.clone(),
            self.terms.iter().map(|(e, c)| (e.iter().map(|x| x * k).collect(), c.clone())),
        )
    }

    /// Plethystic exponential `exp(Σ_{k≥1} f↑k / k)`.
    pub fn plethystic_exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::PeUndefined);
        }
        let mut log = Self::zero(&self.spec);
        let mut k = 1u32;
        loop {
            let a = self.adams(k);
            if a.is_zero() {
                break;
            }
            log = log.add(&a.scale(&Q::new(1.into(), k.into())))?;
            k += 1;
        }
        log.exp()
    }

    /// `Σ g^n / n!` for a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::PeUndefined);
        }
        let mut sum = Self::one(&self.spec);
        let mut term = Self::one(&self.spec);
        let cap = self.spec.span() + 2;
        let mut n = 0i64;
        loop {
            n += 1;
            term = term.multiply(self)?.scale(&Q::new(1.into(), n.into()));
            if term.is_zero() {
                break;
            }
            if n > cap {
                return Err(Error::PeDivergent);
            }
            sum = sum.add(&term)?;
        }
        Ok(sum)
    }

    /// Numeric value at a point. Half-integer exponents use the principal square root.
    pub fn evaluate(&self, point: &[(&str, Complex64)]) -> Result<Complex64> {
        let mut values = Vec::with_capacity(self.spec.len());
        for v in self.spec.variables() {
            let x = point
                .iter()
                .find(|(n, _)| *n == v.name())
                .map(|(_, x)| *x)
                .ok_or_else(|| Error::MissingVariable(v.name().to_string()))?;
            let base = if v.denominator() == 2 { x.sqrt() } else { x };
            values.push(base);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let cf = c.to_f64().unwrap_or(f64::NAN);
            let mut m = Complex64::new(cf, 0.0);
            for (x, &k) in values.iter().zip(e) {
                m *= x.powi(k);
            }
            total += m;
        }
        Ok(total)
    }

    /// Whether every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({self})")
    }
}

impl fmt::Display for TruncatedSeries {
    /// Terms in exponent order, e.g. `1 + z - u*z^-1*q1*q2 + 1/2*q1^(3/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let factors: Vec<String> = self
                .spec
                .variables()
                .iter()
                .enumerate()
                .filter(|(i, _)| e[*i] != 0)
                .map(|(i, v)| {
                    let x = self.spec.exponent_of(e, i);
                    if x.is_one() {
                        v.name().to_string()
                    } else if x.is_integer() {
                        format!("{}^{}", v.name(), x)
                    } else {
                        format!("{}^({})", v.name(), x)
                    }
                })
                .collect();
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if factors.is_empty() {
                write!(f, "{}", format_q(&magnitude))?;
            } else if magnitude.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_q(&magnitude), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Image of a variable under a substitution: `sign · ∏ w^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMonomial {
    pub sign: i8,
    pub exponents: Vec<(String, Rational64)>,
}

impl SignedMonomial {
    pub fn new(sign: i8, exponents: &[(&str, Rational64)]) -> Self {
        Self { sign: if sign < 0 { -1 } else { 1 }, exponents: exponents.iter().map(|(n, e)| (n.to_string(), *e)).collect() }
    }

    /// `+∏ w^e` with integer exponents.
    pub fn int(exponents: &[(&str, i64)]) -> Self {
        Self {
            sign: 1,
            exponents: exponents.iter().map(|(n, e)| (n.to_string(), Rational64::from_integer(*e))).collect(),
        }
    }

    pub fn negated(mut self) -> Self {
        self.sign = -self.sign;
        self
    }
}

/// Map from source variable names to signed monomials; unmapped variables keep their name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    rules: BTreeMap<String, SignedMonomial>,
}

struct Image {
    sign: i8,
    exps: Vec<(usize, Rational64)>,
}

impl Substitution {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn rule(mut self, var: &str, image: SignedMonomial) -> Self {
        self.rules.insert(var.to_string(), image);
        self
    }

    /// Per source variable, its image in the target; `None` for an unmapped variable the target lacks.
    fn plan(&self, source: &FugacitySpec, target: &FugacitySpec) -> Result<Vec<Option<Image>>> {
        source
            .variables()
            .iter()
            .map(|v| match self.rules.get(v.name()) {
                Some(m) => {
                    let exps = m
                        .exponents
                        .iter()
                        .map(|(n, e)| Ok((target.require(n)?, *e)))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Some(Image { sign: m.sign, exps }))
                }
                None => Ok(target.index_of(v.name()).map(|j| Image { sign: 1, exps: vec![(j, Rational64::one())] })),
            })
            .collect()
    }
}

/// Product of `factor(n₁, n₂)` over `0 ≤ n₁ ≤ extent.0`, `0 ≤ n₂ ≤ extent.1`, excluding skipped points.
///
/// Factors are built in parallel and multiplied in row-major order, so the result is independent
/// of scheduling.
pub fn lattice_product<F, S>(spec: &FugacitySpec, extent: (u32, u32), factor: F, skip: S) -> Result<TruncatedSeries>
where
    F: Fn(u32, u32) -> Result<TruncatedSeries> + Sync,
    S: Fn(u32, u32) -> bool + Sync,
{
    let points: Vec<(u32, u32)> =
        (0..=extent.0).flat_map(|a| (0..=extent.1).map(move |b| (a, b))).filter(|&(a, b)| !skip(a, b)).collect();
    let factors: Vec<Result<TruncatedSeries>> = points
        .par_iter()
        .map(|&(a, b)| {
            let f = factor(a, b)?;
            if f.constant_term() != Q::one() {
                return Err(Error::NonUnitalFactor(a, b));
            }
            Ok(f)
        })
        .collect();
    let mut acc = TruncatedSeries::one(spec);
    for f in factors {
        acc = acc.multiply(&f?)?;
    }
    Ok(acc)
}

