//! The mode Weyl algebra of sphere operators and the currents it contains.
//!
//! Each flavor has four families of modes labelled by `k ∈ ℕ²`: creation modes `β⁻_k`, `γ⁻_k`
//! (the local operators, spanning the vacuum module) and annihilation modes `β⁺_k`, `γ⁺_k`. The
//! only nonzero brackets are `[β⁻_k, γ⁺_l] = [β⁺_k, γ⁻_l] = ℏK·δ_{kl}` (same flavor), dual-basis
//! normalized. Words are normal-ordered with creators left of annihilators.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::matrix::FlavorMatrix;
use crate::error::{Error, Result};
use crate::rational::{format_q, Q};

/// Mode families in normal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeKind {
    BetaMinus,
    GammaMinus,
    BetaPlus,
    GammaPlus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeOp {
    pub kind: ModeKind,
    pub mode: (u32, u32),
    pub flavor: usize,
}

impl ModeOp {
    pub fn new(kind: ModeKind, mode: (u32, u32), flavor: usize) -> Self {
        Self { kind, mode, flavor }
    }

    pub fn is_creator(&self) -> bool {
        matches!(self.kind, ModeKind::BetaMinus | ModeKind::GammaMinus)
    }
}

impl fmt::Display for ModeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            ModeKind::BetaMinus => "b-",
            ModeKind::GammaMinus => "g-",
            ModeKind::BetaPlus => "b+",
            ModeKind::GammaPlus => "g+",
        };
        write!(f, "{name}[{},{};{}]", self.mode.0, self.mode.1, self.flavor + 1)
    }
}

/// `xy − yx` for single modes, as a multiple of `ℏK`.
fn bracket(x: &ModeOp, y: &ModeOp) -> i32 {
    if x.mode != y.mode || x.flavor != y.flavor {
        return 0;
    }
    use ModeKind::*;
    match (x.kind, y.kind) {
        (BetaMinus, GammaPlus) | (BetaPlus, GammaMinus) => 1,
        (GammaPlus, BetaMinus) | (GammaMinus, BetaPlus) => -1,
        _ => 0,
    }
}

/// Linear combination of normal-ordered words, coefficients graded by powers of `ℏ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    level: Q,
    terms: BTreeMap<(u32, Vec<ModeOp>), Q>,
}

impl WeylElement {
    pub fn zero(level: Q) -> Self {
        Self { level, terms: BTreeMap::new() }
    }

    pub fn scalar(level: Q, c: Q) -> Self {
        let mut e = Self::zero(level);
        e.add_word(0, &[], c);
        e
    }

    /// A single word, normal-ordered on construction.
    pub fn word(level: Q, word: &[ModeOp]) -> Self {
        let mut e = Self::zero(level);
        e.add_word(0, word, Q::one());
        e
    }

    pub fn generator(level: Q, op: ModeOp) -> Self {
        Self::word(level, &[op])
    }

    pub fn level(&self) -> &Q {
        &self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms keyed by `(ℏ power, normal-ordered word)`.
    pub fn terms(&self) -> &BTreeMap<(u32, Vec<ModeOp>), Q> {
        &self.terms
    }

    /// Highest power of `ℏ` present.
    pub fn hbar_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(h, _)| *h).max()
    }

    /// Part with exactly `ℏ^h`.
    pub fn hbar_part(&self, h: u32) -> Self {
        Self {
            level: self.level.clone(),
            terms: self.terms.iter().filter(|((p, _), _)| *p == h).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    fn insert(&mut self, h: u32, word: Vec<ModeOp>, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (h, word);
        let slot = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Add `c·ℏ^h·word`, normal-ordering by adjacent swaps and the canonical brackets.
    fn add_word(&mut self, h: u32, word: &[ModeOp], c: Q) {
        let mut stack = vec![(h, word.to_vec(), c)];
        while let Some((h, w, c)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            match w.windows(2).position(|p| p[0] > p[1]) {
                None => self.insert(h, w, c),
                Some(i) => {
                    let b = bracket(&w[i], &w[i + 1]);
                    let mut swapped = w.clone();
                    swapped.swap(i, i + 1);
                    stack.push((h, swapped, c.clone()));
                    if b != 0 {
                        let mut contracted = w[..i].to_vec();
                        contracted.extend_from_slice(&w[i + 2..]);
                        stack.push((h + 1, contracted, c * &self.level * Q::from_integer(b.into())));
                    }
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((h, w), c) in &other.terms {
            out.insert(*h, w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.level.clone());
        for ((h, w), x) in &self.terms {
            out.insert(*h, w.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.level.clone());
        for ((ha, wa), ca) in &self.terms {
            for ((hb, wb), cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_word(ha + hb, &w, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((h, w), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_q(c))?;
            if *h > 0 {
                write!(f, "*hbar^{h}")?;
            }
            for op in w {
                write!(f, "*{op}")?;
            }
        }
        Ok(())
    }
}

/// `[x, y] = xy − yx`, normal-ordered.
pub fn weyl_commutator(x: &WeylElement, y: &WeylElement) -> WeylElement {
    x.mul(y).sub(&y.mul(x))
}

fn check_mode(n: (i64, i64)) -> Result<(u32, u32)> {
    if n.0 < 0 || n.1 < 0 {
        return Err(Error::InvalidArgument(format!("mode ({}, {}) has a negative component", n.0, n.1)));
    }
    Ok((n.0 as u32, n.1 as u32))
}

/// `Σ_{k ≤ n} Σ_{i,j} β⁻_{k;j} Xⁱ_j γ⁻_{n−k;i}`: the current of `X` acting on local operators.
pub fn current(x: &FlavorMatrix, n: (i64, i64), level: &Q) -> Result<WeylElement> {
    let n = check_mode(n)?;
    let dim = x.size();
    let mut out = WeylElement::zero(level.clone());
    for k1 in 0..=n.0 {
        for k2 in 0..=n.1 {
            for i in 0..dim {
                for j in 0..dim {
                    let c = x.get(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    let word = [
                        ModeOp::new(ModeKind::BetaMinus, (k1, k2), j),
                        ModeOp::new(ModeKind::GammaMinus, (n.0 - k1, n.1 - k2), i),
                    ];
                    out.add_word(0, &word, c.clone());
                }
            }
        }
    }
    Ok(out)
}

/// `Σ_{k ≤ cap} β⁻_{k;j} Xⁱ_j γ⁺_{k+p;i} + β⁺_{k+p;j} Xⁱ_j γ⁻_{k;i}`: the current of `X` at
/// positive mode `p`, lowering the mode of local operators by `p`.
///
/// Modes beyond `cap` only matter for operators of higher mode than `cap`.
pub fn positive_current(x: &FlavorMatrix, p: (i64, i64), cap: (u32, u32), level: &Q) -> Result<WeylElement> {
    let p = check_mode(p)?;
    let dim = x.size();
    let mut out = WeylElement::zero(level.clone());
    for k1 in 0..=cap.0 {
        for k2 in 0..=cap.1 {
            let shifted = (k1 + p.0, k2 + p.1);
            for i in 0..dim {
                for j in 0..dim {
                    let c = x.get(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    let lowering = [
                        ModeOp::new(ModeKind::BetaMinus, (k1, k2), j),
                        ModeOp::new(ModeKind::GammaPlus, shifted, i),
                    ];
                    let raising = [
                        ModeOp::new(ModeKind::BetaPlus, shifted, j),
                        ModeOp::new(ModeKind::GammaMinus, (k1, k2), i),
                    ];
                    out.add_word(0, &lowering, c.clone());
                    out.add_word(0, &raising, c.clone());
                }
            }
        }
    }
    Ok(out)
}

/// Decomposition of `[J_X(p⁺), J_Y(n⁻)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentBracketReport {
    /// `ℏ¹` part written as `Σ_s J_{M_s}(s)`: total mode → flavor matrix.
    pub linear: BTreeMap<(u32, u32), FlavorMatrix>,
    /// Coefficient of the scalar `ℏ²` term.
    pub central: Q,
    /// Whatever is not of the form above (empty when the bracket closes on currents).
    pub residual: WeylElement,
}

impl CurrentBracketReport {
    pub fn closes(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Compute `[J_X(p⁺), J_Y(n⁻)]` and split it into currents, a central scalar, and a residual.
pub fn current_bracket_report(
    x: &FlavorMatrix,
    y: &FlavorMatrix,
    p: (i64, i64),
    n: (i64, i64),
    level: &Q,
) -> Result<CurrentBracketReport> {
    if x.size() != y.size() {
        return Err(Error::InvalidArgument("flavor matrices differ in size".into()));
    }
    let n_mode = check_mode(n)?;
    let jx = positive_current(x, p, n_mode, level)?;
    let jy = current(y, n, level)?;
    let bracket = weyl_commutator(&jx, &jy);
    decompose(&bracket, x.size(), level)
}

/// Coefficients of `β⁻_{k;j} γ⁻_{n-k;i}` keyed by `(k, j, i)`.
type BilinearCoeffs = BTreeMap<((u32, u32), usize, usize), Q>;

/// Split an element into `ℏ¹` creator bilinears of current shape, an `ℏ²` scalar, and the rest.
pub fn decompose(e: &WeylElement, dim: usize, level: &Q) -> Result<CurrentBracketReport> {
    let mut residual = WeylElement::zero(level.clone());
    let mut central = Q::zero();
    let mut by_mode: BTreeMap<(u32, u32), BilinearCoeffs> = BTreeMap::new();
    for ((h, w), c) in e.terms() {
        match (h, w.as_slice()) {
            (2, []) => central += c,
            (1, [b, g])
                if b.kind == ModeKind::BetaMinus && g.kind == ModeKind::GammaMinus =>
            {
                let s = (b.mode.0 + g.mode.0, b.mode.1 + g.mode.1);
                by_mode.entry(s).or_default().insert((b.mode, g.flavor, b.flavor), c.clone());
            }
            _ => residual.insert(*h, w.clone(), c.clone()),
        }
    }
    let mut linear = BTreeMap::new();
    for (s, entries) in by_mode {
        // read the matrix off the k = 0 slice, then check every slice agrees with J_M(s)
        let mut m = FlavorMatrix::zero(dim);
        for ((k, i, j), c) in &entries {
            if *k == (0, 0) {
                m.set(*i, *j, c.clone());
            }
        }
        let expected = current(&m, (s.0 as i64, s.1 as i64), level)?;
        let mut actual = WeylElement::zero(level.clone());
        for ((k, i, j), c) in &entries {
            let word = [
                ModeOp::new(ModeKind::BetaMinus, *k, *j),
                ModeOp::new(ModeKind::GammaMinus, (s.0 - k.0, s.1 - k.1), *i),
            ];
            actual.insert(0, word.to_vec(), c.clone());
        }
        let diff = actual.sub(&expected);
        for ((_, w), c) in diff.terms() {
            residual.insert(1, w.clone(), c.clone());
        }
        if !m.is_zero() {
            linear.insert(s, m);
        }
    }
    Ok(CurrentBracketReport { linear, central, residual })
}
