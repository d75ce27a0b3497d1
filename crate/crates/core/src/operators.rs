//! Monomial basis of local operators of the free βγ system on ℂ² and a brute-force character.
//!
//! Gamma generators `γ_{n₁,n₂;i}` are even with `q`-weight `(n₁,n₂)`. Beta generators are odd and
//! store their mode shifted by `(−1,−1)`: stored mode `(m₁,m₂)` is the operator `β_{m₁+1,m₂+1}`
//! with `q`-weight `(m₁+1,m₂+1)`, so every stored mode ranges over ℕ².

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;

use crate::characters::FlavorWeights;
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::series::{FugacitySpec, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Gamma,
    Beta,
}

/// One generator. `flavor` is a 0-based index into the flavor weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorLabel {
    pub kind: Kind,
    pub mode: (u32, u32),
    pub flavor: usize,
}

impl GeneratorLabel {
    pub fn gamma(n1: u32, n2: u32, flavor: usize) -> Self {
        Self { kind: Kind::Gamma, mode: (n1, n2), flavor }
    }

    /// Beta generator with stored (shifted) mode.
    pub fn beta(m1: u32, m2: u32, flavor: usize) -> Self {
        Self { kind: Kind::Beta, mode: (m1, m2), flavor }
    }

    pub fn q_weight(&self) -> (u32, u32) {
        match self.kind {
            Kind::Gamma => self.mode,
            Kind::Beta => (self.mode.0 + 1, self.mode.1 + 1),
        }
    }

    pub fn u_charge(&self) -> u32 {
        (self.kind == Kind::Beta) as u32
    }

    pub fn is_odd(&self) -> bool {
        self.kind == Kind::Beta
    }

    /// Flavor charge vector: `+w` for gamma, `−w` for beta.
    pub fn z_charge(&self, flavors: &FlavorWeights) -> Vec<i64> {
        let w = &flavors.charges()[self.flavor];
        match self.kind {
            Kind::Gamma => w.clone(),
            Kind::Beta => w.iter().map(|x| -x).collect(),
        }
    }

    /// Subscripts as printed: the q-weight, so a beta of stored mode (0,0) prints as [1,1].
    pub fn display_mode(&self) -> (u32, u32) {
        self.q_weight()
    }
}

// Canonical order: gammas before betas, higher modes first, then flavor.
impl Ord for GeneratorLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then_with(|| other.mode.cmp(&self.mode))
            .then_with(|| self.flavor.cmp(&other.flavor))
    }
}

impl PartialOrd for GeneratorLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            Kind::Gamma => 'g',
            Kind::Beta => 'b',
        };
        let (a, b) = self.display_mode();
        write!(f, "{c}[{a},{b};{}]", self.flavor + 1)
    }
}

impl FromStr for GeneratorLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad generator `{s}`"));
        let s = s.trim();
        let (kind, rest) = match s.chars().next() {
            Some('g') => (Kind::Gamma, &s[1..]),
            Some('b') => (Kind::Beta, &s[1..]),
            _ => return Err(bad()),
        };
        let inner = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let (modes, flavor) = inner.split_once(';').ok_or_else(bad)?;
        let (a, b) = modes.split_once(',').ok_or_else(bad)?;
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        let flavor: usize = flavor.trim().parse().map_err(|_| bad())?;
        if flavor == 0 {
            return Err(bad());
        }
        match kind {
            Kind::Gamma => Ok(Self::gamma(a, b, flavor - 1)),
            Kind::Beta if a >= 1 && b >= 1 => Ok(Self::beta(a - 1, b - 1, flavor - 1)),
            Kind::Beta => Err(bad()),
        }
    }
}

/// A monomial in the generators, labels sorted canonically, betas at most linear.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OperatorMonomial {
    factors: Vec<(GeneratorLabel, u32)>,
}

impl OperatorMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn generator(label: GeneratorLabel) -> Self {
        Self { factors: vec![(label, 1)] }
    }

    /// Canonical form of an ordered product of generators, with the Koszul sign of the
    /// reordering. `None` when an odd generator repeats.
    pub fn from_word(word: &[GeneratorLabel]) -> Option<(i8, Self)> {
        // Sign of sorting the odd letters: count inversions among them.
        let odd: Vec<&GeneratorLabel> = word.iter().filter(|g| g.is_odd()).collect();
        let mut inversions = 0usize;
        for i in 0..odd.len() {
            for j in i + 1..odd.len() {
                match odd[i].cmp(odd[j]) {
                    Ordering::Greater => inversions += 1,
                    Ordering::Equal => return None,
                    Ordering::Less => {}
                }
            }
        }
        let mut sorted = word.to_vec();
        sorted.sort();
        let mut factors: Vec<(GeneratorLabel, u32)> = Vec::new();
        for g in sorted {
            match factors.last_mut() {
                Some((h, e)) if *h == g => *e += 1,
                _ => factors.push((g, 1)),
            }
        }
        Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, Self { factors }))
    }

    /// Generators in canonical order, repeated by exponent.
    pub fn word(&self) -> Vec<GeneratorLabel> {
        self.factors.iter().flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize)).collect()
    }

    /// Product with the sign from moving `other`'s betas past `self`'s; `None` if it vanishes.
    pub fn multiply(&self, other: &Self) -> Option<(i8, Self)> {
        let mut w = self.word();
        w.extend(other.word());
        Self::from_word(&w)
    }

    pub fn factors(&self) -> &[(GeneratorLabel, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn q_weight(&self) -> (u32, u32) {
        self.factors.iter().fold((0, 0), |(a, b), (g, e)| {
            let (x, y) = g.q_weight();
            (a + x * e, b + y * e)
        })
    }

    pub fn u_charge(&self) -> u32 {
        self.factors.iter().map(|(g, e)| g.u_charge() * e).sum()
    }

    pub fn beta_count(&self) -> u32 {
        self.u_charge()
    }

    pub fn gamma_count(&self) -> u32 {
        self.factors.iter().filter(|(g, _)| !g.is_odd()).map(|(_, e)| e).sum()
    }

    pub fn is_odd(&self) -> bool {
        self.u_charge() % 2 == 1
    }

    pub fn z_charge(&self, flavors: &FlavorWeights) -> Vec<i64> {
        let mut z = vec![0i64; flavors.rank()];
        for (g, e) in &self.factors {
            for (zj, c) in z.iter_mut().zip(g.z_charge(flavors)) {
                *zj += c * *e as i64;
            }
        }
        z
    }

    /// `#γ − #β`, the flavor charge under unit weights.
    pub fn unit_z_charge(&self) -> i64 {
        self.gamma_count() as i64 - self.beta_count() as i64
    }

    pub fn betas(&self) -> impl Iterator<Item = GeneratorLabel> + '_ {
        self.factors.iter().filter(|(g, _)| g.is_odd()).map(|(g, _)| *g)
    }

    pub fn gammas(&self) -> impl Iterator<Item = (GeneratorLabel, u32)> + '_ {
        self.factors.iter().filter(|(g, _)| !g.is_odd()).copied()
    }
}

impl fmt::Display for OperatorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for OperatorMonomial {
    type Err = Error;

    /// Parses the canonical text form; input must already be in canonical order.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::one());
        }
        let mut word = Vec::new();
        for part in s.split('*') {
            let (g, e) = match part.split_once('^') {
                Some((g, e)) => (g, e.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad exponent in `{part}`")))?),
                None => (part, 1),
            };
            let g: GeneratorLabel = g.parse()?;
            word.extend(std::iter::repeat_n(g, e));
        }
        match Self::from_word(&word) {
            Some((1, m)) if m.to_string() == s => Ok(m),
            _ => Err(Error::Parse(format!("`{s}` is not a canonical monomial"))),
        }
    }
}

/// Order in which the enumerator visits generators; results are sorted either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Traversal {
    #[default]
    Forward,
    Reverse,
}

/// All monomials of `q`-weight exactly `weight` with at most `gamma_cap` gammas and at most
/// `u_max` betas, sorted.
pub fn enumerate_sector(
    weight: (u32, u32),
    dim_v: usize,
    gamma_cap: u32,
    u_max: u32,
    traversal: Traversal,
) -> Vec<OperatorMonomial> {
    let (a, b) = weight;
    let mut gens = Vec::new();
    for flavor in 0..dim_v {
        for n1 in 0..=a {
            for n2 in 0..=b {
                gens.push(GeneratorLabel::gamma(n1, n2, flavor));
                if n1 < a && n2 < b {
                    gens.push(GeneratorLabel::beta(n1, n2, flavor));
                }
            }
        }
    }
    gens.sort();
    if traversal == Traversal::Reverse {
        gens.reverse();
    }
    let mut out = Vec::new();
    let mut word = Vec::new();
    dfs(&gens, 0, weight, gamma_cap, u_max, &mut word, &mut out);
    out.sort();
    out
}

fn dfs(
    gens: &[GeneratorLabel],
    idx: usize,
    remaining: (u32, u32),
    gamma_left: u32,
    beta_left: u32,
    word: &mut Vec<GeneratorLabel>,
    out: &mut Vec<OperatorMonomial>,
) {
    if idx == gens.len() {
        if remaining == (0, 0) {
            let (_, m) = OperatorMonomial::from_word(word).expect("betas are chosen at most once");
            out.push(m);
        }
        return;
    }
    let g = gens[idx];
    let (x, y) = g.q_weight();
    let max_exp = if g.is_odd() { beta_left.min(1) } else { gamma_left };
    let depth = word.len();
    let mut rem = remaining;
    for e in 0..=max_exp {
        if e > 0 {
            if rem.0 < x || rem.1 < y {
                break;
            }
            rem = (rem.0 - x, rem.1 - y);
            word.push(g);
        }
        let (gl, bl) = if g.is_odd() { (gamma_left, beta_left - e) } else { (gamma_left - e, beta_left) };
        dfs(gens, idx + 1, rem, gl, bl, word, out);
    }
    word.truncate(depth);
}

/// Monomials at `q`-weight `weight` with unit flavor charges, `#γ − #β ∈ z`, `#β ∈ u`.
pub fn enumerate_weight_space(
    weight: (u32, u32),
    z: RangeInclusive<i64>,
    u: RangeInclusive<u32>,
    dim_v: usize,
) -> Vec<OperatorMonomial> {
    enumerate_weight_space_with(weight, z, u, dim_v, Traversal::Forward)
}

/// [`enumerate_weight_space`] with an explicit traversal order.
pub fn enumerate_weight_space_with(
    weight: (u32, u32),
    z: RangeInclusive<i64>,
    u: RangeInclusive<u32>,
    dim_v: usize,
    traversal: Traversal,
) -> Vec<OperatorMonomial> {
    if z.is_empty() || u.is_empty() {
        return Vec::new();
    }
    let gamma_cap = (*z.end() + *u.end() as i64).max(0) as u32;
    enumerate_sector(weight, dim_v, gamma_cap, *u.end(), traversal)
        .into_iter()
        .filter(|m| z.contains(&m.unit_z_charge()) && u.contains(&m.u_charge()))
        .collect()
}

/// Exponents by variable name and the signed coefficient of one operator.
type WeightedTerm<'a> = (Vec<(&'a str, i64)>, Q);

/// `Σ (−1)^{#β} q₁^a q₂^b z^{charge} u^{#β}` over every monomial in the box of `spec`.
///
/// `spec` must contain `q1`, `q2`, `u` and the flavor fugacities of `flavors`. This is the
/// ground-truth oracle for every product formula; it never multiplies series.
pub fn brute_supercharacter(spec: &FugacitySpec, flavors: &FlavorWeights) -> Result<TruncatedSeries> {
    let names = flavors.fugacity_names();
    let cap_of = |name: &str| -> Result<i64> {
        Ok(spec.effective_max(name).ok_or_else(|| Error::MissingVariable(name.into()))?.floor().to_integer())
    };
    let (a_max, b_max, u_max) = (cap_of("q1")?.max(0) as u32, cap_of("q2")?.max(0) as u32, cap_of("u")?.max(0) as u32);
    let mut gamma_cap = 0i64;
    for (j, n) in names.iter().enumerate() {
        let w = flavors.charges().iter().map(|c| c[j]).max().unwrap_or(0);
        gamma_cap += cap_of(n)?.max(0) + u_max as i64 * w;
    }
    let sectors: Vec<(u32, u32)> = (0..=a_max).flat_map(|a| (0..=b_max).map(move |b| (a, b))).collect();
    let per_sector: Vec<Vec<WeightedTerm>> = sectors
        .par_iter()
        .map(|&(a, b)| {
            enumerate_sector((a, b), flavors.dim(), gamma_cap as u32, u_max, Traversal::Forward)
                .into_iter()
                .map(|m| {
                    let mut exps: Vec<(&str, i64)> = vec![("q1", a as i64), ("q2", b as i64), ("u", m.u_charge() as i64)];
                    exps.extend(names.iter().map(String::as_str).zip(m.z_charge(flavors)));
                    (exps, Q::from_integer(if m.is_odd() { (-1).into() } else { 1.into() }))
                })
                .collect()
        })
        .collect();
    let mut raw = Vec::new();
    for sector in per_sector {
        for (exps, c) in sector {
            let exps: Vec<(&str, num_rational::Rational64)> = exps.into_iter().map(|(n, e)| (n, e.into())).collect();
            raw.push((spec.scaled_exponents(&exps)?, c));
        }
    }
    Ok(TruncatedSeries::from_raw(std::sync::Arc::new(spec.clone()), raw))
}
