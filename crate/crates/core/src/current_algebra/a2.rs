//! The dg algebra `A₂*` modelling derived functions on ℂ² ∖ 0.
//!
//! Generators `z₁, z₂` (holomorphic), `w₁, w₂` (`wᵢ = z̄ᵢ/|z|²`), and the degree-1 class `ω`,
//! subject to `z₁w₁ + z₂w₂ = 1` and `ω² = 0`. Elements are stored in normal form: no monomial is
//! divisible by `z₁w₁`, which is rewritten as `1 − z₂w₂`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::linalg::{exact_rank, SparseMatrixQ};
use crate::rational::{binomial, format_q, Q};

/// Exponents of `z₁, z₂, w₁, w₂`.
pub type Exps = [u32; 4];

/// Torus weight of a monomial: `z` counts `+1`, `w` counts `−1`.
pub fn weight(e: &Exps) -> (i32, i32) {
    (e[0] as i32 - e[2] as i32, e[1] as i32 - e[3] as i32)
}

/// Total monomial degree `a + b + c + d`.
pub fn monomial_degree(e: &Exps) -> u32 {
    e.iter().sum()
}

/// Element `f + g·ω` of `A₂*`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct AElement {
    deg0: BTreeMap<Exps, Q>,
    deg1: BTreeMap<Exps, Q>,
}

fn add_reduced(map: &mut BTreeMap<Exps, Q>, e: Exps, c: Q) {
    // z₁^a w₁^c with m = min(a, c) becomes (1 − z₂w₂)^m times the rest
    let m = e[0].min(e[2]);
    let base = [e[0] - m, e[1], e[2] - m, e[3]];
    for j in 0..=m {
        let coeff = Q::from_integer(binomial(m as u64, j as u64)) * &c;
        let coeff = if j % 2 == 1 { -coeff } else { coeff };
        let key = [base[0], base[1] + j, base[2], base[3] + j];
        let slot = map.entry(key).or_insert_with(Q::zero);
        *slot += coeff;
        if slot.is_zero() {
            map.remove(&key);
        }
    }
}

impl AElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial([0; 4], Q::one())
    }

    /// `c · z₁^a z₂^b w₁^c w₂^d`, normal-formed.
    pub fn monomial(e: Exps, c: Q) -> Self {
        let mut out = Self::zero();
        add_reduced(&mut out.deg0, e, c);
        out
    }

    /// `c · z₁^a z₂^b w₁^c w₂^d · ω`, normal-formed.
    pub fn omega_monomial(e: Exps, c: Q) -> Self {
        let mut out = Self::zero();
        add_reduced(&mut out.deg1, e, c);
        out
    }

    pub fn z1() -> Self {
        Self::monomial([1, 0, 0, 0], Q::one())
    }
    pub fn z2() -> Self {
        Self::monomial([0, 1, 0, 0], Q::one())
    }
    pub fn w1() -> Self {
        Self::monomial([0, 0, 1, 0], Q::one())
    }
    pub fn w2() -> Self {
        Self::monomial([0, 0, 0, 1], Q::one())
    }
    pub fn omega() -> Self {
        Self::omega_monomial([0; 4], Q::one())
    }

    pub fn deg0(&self) -> &BTreeMap<Exps, Q> {
        &self.deg0
    }

    pub fn deg1(&self) -> &BTreeMap<Exps, Q> {
        &self.deg1
    }

    pub fn is_zero(&self) -> bool {
        self.deg0.is_empty() && self.deg1.is_empty()
    }

    /// Degree-0 part only.
    pub fn degree0_part(&self) -> Self {
        Self { deg0: self.deg0.clone(), deg1: BTreeMap::new() }
    }

    /// Degree-1 part only (still including `ω`).
    pub fn degree1_part(&self) -> Self {
        Self { deg0: BTreeMap::new(), deg1: self.deg1.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.deg0 {
            add_reduced(&mut out.deg0, *e, c.clone());
        }
        for (e, c) in &other.deg1 {
            add_reduced(&mut out.deg1, *e, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero();
        for (e, x) in &self.deg0 {
            add_reduced(&mut out.deg0, *e, x * c);
        }
        for (e, x) in &self.deg1 {
            add_reduced(&mut out.deg1, *e, x * c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    /// Whether every stored monomial avoids `z₁w₁`.
    pub fn is_normal(&self) -> bool {
        self.deg0.keys().chain(self.deg1.keys()).all(|e| e[0] == 0 || e[2] == 0)
    }
}

fn mul_maps(a: &BTreeMap<Exps, Q>, b: &BTreeMap<Exps, Q>, out: &mut BTreeMap<Exps, Q>) {
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
            add_reduced(out, e, ca * cb);
        }
    }
}

/// `(f₁ + g₁ω)(f₂ + g₂ω) = f₁f₂ + (f₁g₂ + g₁f₂)ω`.
pub fn a2_multiply(a: &AElement, b: &AElement) -> AElement {
    let mut out = AElement::zero();
    mul_maps(&a.deg0, &b.deg0, &mut out.deg0);
    mul_maps(&a.deg0, &b.deg1, &mut out.deg1);
    mul_maps(&a.deg1, &b.deg0, &mut out.deg1);
    out
}

/// `∂̄`: the derivation with `∂̄zᵢ = 0`, `∂̄w₁ = z₂ω`, `∂̄w₂ = −z₁ω`, `∂̄ω = 0`.
pub fn a2_differential(a: &AElement) -> AElement {
    let mut out = AElement::zero();
    for (e, c) in &a.deg0 {
        if e[2] > 0 {
            let coeff = c * Q::from_integer(e[2].into());
            add_reduced(&mut out.deg1, [e[0], e[1] + 1, e[2] - 1, e[3]], coeff);
        }
        if e[3] > 0 {
            let coeff = -(c * Q::from_integer(e[3].into()));
            add_reduced(&mut out.deg1, [e[0] + 1, e[1], e[2], e[3] - 1], coeff);
        }
    }
    out
}

/// Holomorphic derivative `∂/∂zᵢ` (`i ∈ {0, 1}`): `∂ᵢz_j = δᵢⱼ`, `∂ᵢw_j = −wᵢw_j`,
/// `∂ᵢω = −2wᵢω`.
pub fn holomorphic_derivative(a: &AElement, i: usize) -> AElement {
    assert!(i < 2, "holomorphic derivative index must be 0 or 1");
    let mut out = AElement::zero();
    let deriv = |e: &Exps, c: &Q, target: &mut BTreeMap<Exps, Q>| {
        if e[i] > 0 {
            let mut f = *e;
            f[i] -= 1;
            add_reduced(target, f, c * Q::from_integer(e[i].into()));
        }
        // each w_j contributes −wᵢw_j, so the w-total goes up by one in the wᵢ slot
        let wsum = e[2] + e[3];
        if wsum > 0 {
            let mut f = *e;
            f[2 + i] += 1;
            add_reduced(target, f, -(c * Q::from_integer(wsum.into())));
        }
    };
    for (e, c) in &a.deg0 {
        deriv(e, c, &mut out.deg0);
    }
    for (e, c) in &a.deg1 {
        deriv(e, c, &mut out.deg1);
        let mut f = *e;
        f[2 + i] += 1;
        add_reduced(&mut out.deg1, f, -(c * Q::from_integer(2.into())));
    }
    out
}

/// Residue of the degree-1 part, normalized by `residue(ω) = 1`.
///
/// Only `(z₂w₂)^k ω` (torus weight of `ω`) can pair nontrivially. Their values `c_k` follow
/// from vanishing on `∂₂(z₂^{k+1}w₂^k ω) = (k+1)(z₂w₂)^kω − (k+2)(z₂w₂)^{k+1}ω`, so
/// `c_{k+1} = c_k·(k+1)/(k+2)`.
pub fn residue(a: &AElement) -> Q {
    let mut total = Q::zero();
    for (e, c) in &a.deg1 {
        if e[0] == 0 && e[2] == 0 && e[1] == e[3] {
            total += c * diagonal_residue(e[1]);
        }
    }
    total
}

/// `residue((z₂w₂)^k ω)` by the recursion.
pub fn diagonal_residue(k: u32) -> Q {
    let mut c = Q::one();
    for j in 0..k {
        c *= Q::new((j + 1).into(), (j + 2).into());
    }
    c
}

/// Normal-form monomials of degree `≤ max_degree` at a given torus weight.
pub fn normal_monomials(w: (i32, i32), max_degree: u32) -> Vec<Exps> {
    let mut out = Vec::new();
    let j = max_degree as i32;
    for a in 0..=j {
        for c in 0..=j {
            if a > 0 && c > 0 || a - c != w.0 {
                continue;
            }
            for b in 0..=j {
                let d = b - w.1;
                if d < 0 || a + b + c + d > j {
                    continue;
                }
                out.push([a as u32, b as u32, c as u32, d as u32]);
            }
        }
    }
    out.sort();
    out
}

/// Dimensions `(h⁰, h¹)` at torus weight `w` of the complex truncated to monomial degree `≤ jet`.
///
/// The truncation is a subcomplex: `∂̄` swaps one `w` for one `z` and normal-forming only lowers
/// degree. Degree-1 classes are weighted as `g·ω`, i.e. weight of `g` minus `(1,1)`.
pub fn a2_weight_cohomology(w: (i32, i32), jet: u32) -> (usize, usize) {
    let c0 = normal_monomials(w, jet);
    let c1 = normal_monomials((w.0 + 1, w.1 + 1), jet);
    let index: BTreeMap<Exps, usize> = c1.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut d = SparseMatrixQ::new(c1.len(), c0.len());
    for (j, e) in c0.iter().enumerate() {
        let image = a2_differential(&AElement::monomial(*e, Q::one()));
        for (f, c) in image.deg1() {
            let i = *index.get(f).expect("∂̄ does not raise monomial degree");
            d.add_to(i, j, c.clone());
        }
    }
    let r = exact_rank(&d);
    (c0.len() - r, c1.len() - r)
}

/// `(h⁰, h¹)` for every torus weight with `|wᵢ| ≤ max_weight`, truncated at monomial degree `jet`.
pub fn a2_cohomology(max_weight: u32, jet: u32) -> BTreeMap<(i32, i32), (usize, usize)> {
    let m = max_weight as i32;
    let mut out = BTreeMap::new();
    for p1 in -m..=m {
        for p2 in -m..=m {
            out.insert((p1, p2), a2_weight_cohomology((p1, p2), jet));
        }
    }
    out
}

/// Cohomology predicted by the model: `H⁰` is `ℂ[z₁,z₂]` (one class per weight in ℕ²) and `H¹`
/// is spanned by `w₁^c w₂^d ω` (one class per weight `(−c−1, −d−1)`).
pub fn predicted_cohomology(w: (i32, i32)) -> (usize, usize) {
    let h0 = (w.0 >= 0 && w.1 >= 0) as usize;
    let h1 = (w.0 <= -1 && w.1 <= -1) as usize;
    (h0, h1)
}

impl fmt::Display for AElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["z1", "z2", "w1", "w2"];
        let mut first = true;
        for (part, map) in [(0, &self.deg0), (1, &self.deg1)] {
            for (e, c) in map {
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let mut factors: Vec<String> = e
                    .iter()
                    .zip(names)
                    .filter(|(x, _)| **x > 0)
                    .map(|(x, n)| if *x == 1 { n.to_string() } else { format!("{n}^{x}") })
                    .collect();
                if part == 1 {
                    factors.push("omega".into());
                }
                if factors.is_empty() {
                    write!(f, "{}", format_q(c))?;
                } else if c.is_one() {
                    write!(f, "{}", factors.join("*"))?;
                } else {
                    write!(f, "{}*{}", format_q(c), factors.join("*"))?;
                }
            }
        }
        Ok(())
    }
}

/// Parse an element written over `z1, z2, w1, w2, omega`; terms with `omega²` vanish.
pub fn parse_aelement(text: &str) -> crate::error::Result<AElement> {
    let p = crate::poly::parse_polynomial(text, &["z1", "z2", "w1", "w2", "omega"])?;
    let mut out = AElement::zero();
    for (e, c) in p.terms() {
        let exps = [e[0], e[1], e[2], e[3]];
        match e[4] {
            0 => add_reduced(&mut out.deg0, exps, c.clone()),
            1 => add_reduced(&mut out.deg1, exps, c.clone()),
            _ => {}
        }
    }
    Ok(out)
}
