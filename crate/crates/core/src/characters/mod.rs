//! Closed-form characters of the free and interacting βγ system on ℂ².
//!
//! All characters are supertraces: an operator with odd ghost parity contributes `−1`. The
//! unsigned operator count is recovered by the substitution `u → −u`.
//!
//! Products over an infinite lattice are computed in a working box that is wide enough for the
//! truncated product to be exact, then restricted to the caller's box.

pub mod numeric;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::series::{lattice_product, FugacitySpec, SignedMonomial, Substitution, TruncatedSeries};

/// Flavor charges of the basis vectors of `V`, one integer vector per basis vector.
///
/// A rank-one weight system uses the fugacity `z`; rank `r > 1` uses `z1, …, zr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlavorWeights {
    charges: Vec<Vec<i64>>,
}

impl FlavorWeights {
    /// `dim_v` copies of charge `+1` under a single `U(1)`.
    pub fn uniform(dim_v: usize) -> Self {
        Self { charges: vec![vec![1]; dim_v] }
    }

    /// Explicit charges. Every vector must have the same length, nonnegative entries, and be
    /// nonzero, so that each flavor tower is a power series in its fugacity.
    pub fn new(charges: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(first) = charges.first() {
            let rank = first.len();
            if rank == 0 {
                return Err(Error::InvalidArgument("flavor charge vectors must be nonempty".into()));
            }
            for c in &charges {
                if c.len() != rank {
                    return Err(Error::InvalidArgument("flavor charge vectors differ in length".into()));
                }
                if c.iter().any(|&x| x < 0) || c.iter().all(|&x| x == 0) {
                    return Err(Error::InvalidArgument(format!("flavor charge {c:?} must be nonnegative and nonzero")));
                }
            }
        }
        Ok(Self { charges })
    }

    pub fn dim(&self) -> usize {
        self.charges.len()
    }

    pub fn charges(&self) -> &[Vec<i64>] {
        &self.charges
    }

    pub fn rank(&self) -> usize {
        self.charges.first().map_or(1, |c| c.len())
    }

    /// Names of the flavor fugacities.
    pub fn fugacity_names(&self) -> Vec<String> {
        match self.rank() {
            1 => vec!["z".to_string()],
            r => (1..=r).map(|j| format!("z{j}")).collect(),
        }
    }

    pub(crate) fn max_charge(&self, j: usize) -> i64 {
        self.charges.iter().map(|c| c[j]).max().unwrap_or(0)
    }
}

fn r(x: i64) -> Rational64 {
    Rational64::from_integer(x)
}

fn floor_i64(x: Rational64) -> i64 {
    x.floor().to_integer()
}

/// Largest integer exponent `name` can carry in `spec` (window and mode bound combined).
fn cap(spec: &FugacitySpec, name: &str) -> Result<i64> {
    Ok(floor_i64(spec.effective_max(name).ok_or_else(|| Error::MissingVariable(name.into()))?))
}

fn window(spec: &FugacitySpec, name: &str) -> Result<(Rational64, Rational64)> {
    let v = spec.variable(name).ok_or_else(|| Error::MissingVariable(name.into()))?;
    Ok((v.min_exponent(), v.max_exponent()))
}

/// Widen `name` so its window contains `[lo, hi]`.
fn widen(spec: FugacitySpec, name: &str, lo: i64, hi: i64) -> Result<FugacitySpec> {
    spec.widened(name, r(lo), r(hi))
}

fn mono(spec: &FugacitySpec, exps: &[(&str, i64)], c: i64) -> Result<TruncatedSeries> {
    TruncatedSeries::monomial_int(spec, exps, c)
}

/// Whether a monomial with these exponents survives in `spec`.
fn fits(spec: &FugacitySpec, exps: &[(&str, i64)]) -> Result<bool> {
    Ok(!mono(spec, exps, 1)?.is_zero())
}

/// Working box for the free character: the flavor windows must hold every partial product.
///
/// Partial products carry at most `U` beta letters, each lowering flavor charge `j` by at most
/// `W_j`, and only nonnegative gamma charges; so `[−U·W_j, z_max + U·W_j]` suffices.
fn free_working_spec(flavors: &FlavorWeights, spec: &FugacitySpec, mode_vars: &[&str]) -> Result<FugacitySpec> {
    let u_max = cap(spec, "u")?.max(0);
    let mut work = widen(spec.clone(), "u", 0, 0)?;
    for v in mode_vars {
        work = widen(work, v, 0, 0)?;
    }
    for (j, name) in flavors.fugacity_names().iter().enumerate() {
        let (_, hi) = window(spec, name)?;
        let shift = u_max * flavors.max_charge(j);
        work = widen(work, name, -shift, floor_i64(hi) + shift)?;
    }
    Ok(work)
}

fn flavor_exps<'a>(names: &'a [String], charge: &[i64], sign: i64) -> Vec<(&'a str, i64)> {
    names.iter().zip(charge).map(|(n, &c)| (n.as_str(), sign * c)).collect()
}

/// The free character as the double product
/// `∏_{n₁,n₂≥0} ∏_a (1 − u z_a⁻¹ q₁^{n₁+1} q₂^{n₂+1}) / (1 − z_a q₁^{n₁} q₂^{n₂})`.
///
/// `spec` must contain `q1`, `q2`, `u` and the flavor fugacities.
pub fn free_character(flavors: &FlavorWeights, spec: &FugacitySpec) -> Result<TruncatedSeries> {
    let work = free_working_spec(flavors, spec, &["q1", "q2"])?;
    let names = flavors.fugacity_names();
    let extent = (cap(&work, "q1")?.max(0) as u32, cap(&work, "q2")?.max(0) as u32);
    let factor = |n1: u32, n2: u32| -> Result<TruncatedSeries> {
        let (n1, n2) = (n1 as i64, n2 as i64);
        let mut f = TruncatedSeries::one(&work);
        for charge in flavors.charges() {
            let mut num = flavor_exps(&names, charge, -1);
            num.extend([("u", 1), ("q1", n1 + 1), ("q2", n2 + 1)]);
            let mut den = flavor_exps(&names, charge, 1);
            den.extend([("q1", n1), ("q2", n2)]);
            f = f.multiply(&TruncatedSeries::one_minus(&work, &num)?)?;
            f = f.multiply(&TruncatedSeries::one_minus(&work, &den)?.invert()?)?;
        }
        Ok(f)
    };
    let skip = |n1: u32, n2: u32| !fits(&work, &[("q1", n1 as i64), ("q2", n2 as i64)]).unwrap_or(false);
    lattice_product(&work, extent, factor, skip)?.restrict(spec)
}

/// The single-letter index `Σ_a (z_a − u z_a⁻¹ q₁q₂) / ((1−q₁)(1−q₂))`.
pub fn free_letter_index(flavors: &FlavorWeights, spec: &FugacitySpec) -> Result<TruncatedSeries> {
    let names = flavors.fugacity_names();
    let mut numerator = TruncatedSeries::zero(spec);
    for charge in flavors.charges() {
        numerator = numerator.add(&mono(spec, &flavor_exps(&names, charge, 1), 1)?)?;
        let mut beta = flavor_exps(&names, charge, -1);
        beta.extend([("u", 1), ("q1", 1), ("q2", 1)]);
        numerator = numerator.sub(&mono(spec, &beta, 1)?)?;
    }
    let denom = TruncatedSeries::one_minus(spec, &[("q1", 1)])?.multiply(&TruncatedSeries::one_minus(spec, &[("q2", 1)])?)?;
    numerator.multiply(&denom.invert()?)
}

/// The free character as the plethystic exponential of [`free_letter_index`].
pub fn free_character_pe(flavors: &FlavorWeights, spec: &FugacitySpec) -> Result<TruncatedSeries> {
    let work = free_working_spec(flavors, spec, &["q1", "q2"])?;
    free_letter_index(flavors, &work)?.plethystic_exp()?.restrict(spec)
}

/// Working box for products over `q^m p^{2ℓ−m}`: `|p| ≤ q` holds for every partial product.
fn su2_working_spec(spec: &FugacitySpec) -> Result<(FugacitySpec, i64)> {
    let q_max = cap(spec, "q")?.max(0);
    let work = widen(spec.clone(), "q", 0, 0)?;
    let work = widen(work, "p", -q_max, q_max)?;
    Ok((work, q_max))
}

/// `∏_{m≥0} ∏_{ℓ=0}^{m} [(1 − u z⁻¹ q^{m+2} p^{2ℓ−m}) / (1 − z q^m p^{2ℓ−m})]^{dim V}` in
/// variables `p, q, z, u`.
pub fn su2_character(dim_v: usize, spec: &FugacitySpec) -> Result<TruncatedSeries> {
    let (work, q_max) = su2_working_spec(spec)?;
    let work = free_working_spec(&FlavorWeights::uniform(dim_v.max(1)), &work, &["q"])?;
    let factor = |m: u32, l: u32| -> Result<TruncatedSeries> {
        let (m, l) = (m as i64, l as i64);
        let num = TruncatedSeries::one_minus(&work, &[("u", 1), ("z", -1), ("q", m + 2), ("p", 2 * l - m)])?;
        let den = TruncatedSeries::one_minus(&work, &[("z", 1), ("q", m), ("p", 2 * l - m)])?.invert()?;
        num.multiply(&den)?.pow(dim_v as u32)
    };
    let extent = (q_max as u32, q_max as u32);
    lattice_product(&work, extent, factor, |m, l| l > m)?.restrict(spec)
}

/// `∏_{m≥0} ∏_{ℓ=0}^{m} (1 − z^N q^m p^{2ℓ−m}) / (1 − z q^m p^{2ℓ−m})` in variables `p, q, z`:
/// the character of one field with superpotential of degree `N + 1`.
pub fn potential_character(n: u32, spec: &FugacitySpec) -> Result<TruncatedSeries> {
    if n < 1 {
        return Err(Error::InvalidArgument("potential degree N must be at least 1".into()));
    }
    let (work, q_max) = su2_working_spec(spec)?;
    let work = widen(work, "z", 0, 0)?;
    let n = n as i64;
    let factor = |m: u32, l: u32| -> Result<TruncatedSeries> {
        let (m, l) = (m as i64, l as i64);
        let p = 2 * l - m;
        let num = TruncatedSeries::one_minus(&work, &[("z", n), ("q", m), ("p", p)])?;
        let den = TruncatedSeries::one_minus(&work, &[("z", 1), ("q", m), ("p", p)])?.invert()?;
        num.multiply(&den)
    };
    lattice_product(&work, (q_max as u32, q_max as u32), factor, |m, l| l > m)?.restrict(spec)
}

/// How the ghost fugacity is traded when a superpotential of degree `N + 1` is switched on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `u → z^{N+1} q⁻²`
    ZForm,
    /// `u → p^{N+1} q⁻²`
    PForm,
}

impl Convention {
    pub fn substitution(self, n: u32) -> Substitution {
        let carrier = match self {
            Convention::ZForm => "z",
            Convention::PForm => "p",
        };
        Substitution::identity().rule("u", SignedMonomial::int(&[(carrier, n as i64 + 1), ("q", -2)]))
    }
}

/// Apply `u → z^{N+1}q⁻²` or `u → p^{N+1}q⁻²` to an SU(2)-graded free character, landing in
/// `target` (variables `p, q, z`).
///
/// The result is exact in `target` only if `free` was computed in at least the box returned by
/// [`free_box_for_potential`].
pub fn specialize_to_potential(
    free: &TruncatedSeries,
    n: u32,
    convention: Convention,
    target: &FugacitySpec,
) -> Result<TruncatedSeries> {
    if n < 1 {
        return Err(Error::InvalidArgument("potential degree N must be at least 1".into()));
    }
    free.substitute(&convention.substitution(n), target)
}

/// Box in `p, q, z, u` whose free character determines every coefficient of the specialized
/// character inside `target`.
///
/// With `k` beta letters, the z-form adds `N·k` to the gamma count and the p-form moves `p` up
/// by `(N+1)k` from a value bounded by `q − 2k` in size; both bound `k` in terms of `target`.
pub fn free_box_for_potential(target: &FugacitySpec, n: u32, convention: Convention) -> Result<FugacitySpec> {
    let n = n as i64;
    let (q_lo, _) = window(target, "q")?;
    let q_max = cap(target, "q")?;
    let (p_lo, p_hi) = window(target, "p")?;
    let (z_lo, z_hi) = window(target, "z")?;
    let (p_lo, p_hi, z_lo, z_hi) = (floor_i64(p_lo), floor_i64(p_hi), floor_i64(z_lo), floor_i64(z_hi));
    let k = match convention {
        Convention::ZForm => z_hi.div_euclid(n),
        Convention::PForm => (p_hi + q_max).div_euclid(n + 1),
    }
    .max(0);
    let q_hi = q_max + 2 * k;
    let (p_window, z_window) = match convention {
        Convention::ZForm => ((p_lo, p_hi), (-k, z_hi)),
        Convention::PForm => ((p_lo - (n + 1) * k, p_hi), (z_lo, z_hi)),
    };
    FugacitySpec::builder()
        .var("p", p_window.0, p_window.1)
        .var("q", floor_i64(q_lo).min(0), q_hi)
        .var("z", z_window.0, z_window.1)
        .var("u", 0, k)
        .mode(&["q"], q_hi)
        .build()
}

/// [`su2_character`] in the box from [`free_box_for_potential`], specialized into `target`.
pub fn potential_via_su2(n: u32, convention: Convention, target: &FugacitySpec) -> Result<TruncatedSeries> {
    let free_box = free_box_for_potential(target, n, convention)?;
    let free = su2_character(1, &free_box)?;
    specialize_to_potential(&free, n, convention, target)
}

/// Substitution `q → (q₁q₂)^{1/2}`, `p → (q₁/q₂)^{1/2}` from SU(2) to U(1)×U(1) gradings.
pub fn su2_to_torus() -> Substitution {
    let h = Rational64::new(1, 2);
    Substitution::identity()
        .rule("q", SignedMonomial::new(1, &[("q1", h), ("q2", h)]))
        .rule("p", SignedMonomial::new(1, &[("q1", h), ("q2", -h)]))
}

/// The `u → −u` substitution that turns a supertrace into an unsigned count.
pub fn unsigned() -> Substitution {
    Substitution::identity().rule("u", SignedMonomial::int(&[("u", 1)]).negated())
}

/// Standard boxes used throughout: `q1, q2 ≤ q_max` with `q1 + q2 ≤ q_max`, `|z| ≤ z_max`,
/// `0 ≤ u ≤ u_max`.
pub fn torus_spec(q_max: i64, z_max: i64, u_max: i64) -> Result<FugacitySpec> {
    FugacitySpec::builder()
        .var("q1", 0, q_max)
        .var("q2", 0, q_max)
        .var("z", -z_max, z_max)
        .var("u", 0, u_max)
        .mode(&["q1", "q2"], q_max)
        .build()
}

/// `q ≤ q_max` (mode), `|p| ≤ q_max`, `|z| ≤ z_max`, `0 ≤ u ≤ u_max`.
pub fn su2_spec(q_max: i64, z_max: i64, u_max: i64) -> Result<FugacitySpec> {
    FugacitySpec::builder()
        .var("p", -q_max, q_max)
        .var("q", 0, q_max)
        .var("z", -z_max, z_max)
        .var("u", 0, u_max)
        .mode(&["q"], q_max)
        .build()
}

/// Variables `p, q, z` for interacting characters.
pub fn potential_spec(q_max: i64, z_max: i64) -> Result<FugacitySpec> {
    FugacitySpec::builder()
        .var("p", -q_max, q_max)
        .var("q", 0, q_max)
        .var("z", 0, z_max)
        .mode(&["q"], q_max)
        .build()
}
