//! Compactification on a Riemann surface and the Hodge-to-de-Rham family on the plane.
//!
//! Reducing on a compact curve `Σ` leaves a one-dimensional βγ system valued in the Dolbeault
//! cohomology `H*(Σ, 𝒱) ⊗ V`. [`reduced_character`] builds its character from a
//! [`TargetSpectrum`]; [`surface_cohomology`] supplies line-bundle cohomology; and
//! [`hodge_derham_dims`] computes the cohomology of `ε₊∂̄ ± ε₋∂` on jet-truncated forms on ℂ.

use num_rational::Rational64;
use num_traits::Zero;

use crate::characters::FlavorWeights;
use crate::error::{Error, Result};
use crate::linalg::{exact_rank, SparseMatrixQ};
use crate::rational::Q;
use crate::series::{FugacitySpec, TruncatedSeries};

/// Dimensions `(h⁰, h¹)` of `H*(Σ_g, O(d))`.
///
/// Outside `0 ≤ d ≤ 2g − 2` (for `g ≥ 1`) the answer is fixed by the degree; inside that range it
/// depends on the bundle and must be supplied through `override_dims`, which is checked against
/// Riemann–Roch `h⁰ − h¹ = d − g + 1`.
///
/// ```
/// use twistchar::reduction::surface_cohomology;
///
/// assert_eq!(surface_cohomology(0, 3, None).unwrap(), (4, 0));
/// assert_eq!(surface_cohomology(2, 5, None).unwrap(), (4, 0));
/// assert!(surface_cohomology(2, 1, None).is_err());
/// assert_eq!(surface_cohomology(2, 1, Some((1, 1))).unwrap(), (1, 1));
/// ```
pub fn surface_cohomology(genus: u32, degree: i64, override_dims: Option<(u64, u64)>) -> Result<(u64, u64)> {
    let g = genus as i64;
    let chi = degree - g + 1;
    let determined = if genus == 0 {
        Some(((degree + 1).max(0) as u64, (-degree - 1).max(0) as u64))
    } else if degree < 0 {
        Some((0, (g - 1 - degree) as u64))
    } else if degree > 2 * g - 2 {
        Some((chi as u64, 0))
    } else {
        None
    };
    match (determined, override_dims) {
        (Some(d), None) => Ok(d),
        (Some(d), Some(o)) if d == o => Ok(d),
        (Some(_), Some(_)) => Err(Error::InconsistentOverride),
        (None, None) => Err(Error::CohomologyNotDetermined),
        (None, Some((h0, h1))) => {
            if h0 as i64 - h1 as i64 != chi {
                return Err(Error::InconsistentOverride);
            }
            Ok((h0, h1))
        }
    }
}

/// One basis family of `H*(Σ, 𝒱) ⊗ V`: flavor weight, cohomological degree, multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TargetClass {
    pub weight: Vec<i64>,
    pub degree: u8,
    pub multiplicity: u32,
}

/// The graded target space of the reduced βγ system.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TargetSpectrum {
    classes: Vec<TargetClass>,
}

impl TargetSpectrum {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Weights follow the rules of [`FlavorWeights::new`]; degrees must be 0 or 1.
    pub fn new(classes: Vec<TargetClass>) -> Result<Self> {
        if classes.iter().any(|c| c.degree > 1) {
            return Err(Error::InvalidArgument("target degrees must be 0 or 1 on a curve".into()));
        }
        FlavorWeights::new(classes.iter().map(|c| c.weight.clone()).collect())?;
        Ok(Self { classes })
    }

    /// `H*(Σ, 𝒱) ⊗ V` for a line bundle with cohomology `(h⁰, h¹)` and flavor content `flavors`.
    pub fn from_bundle(h0: u64, h1: u64, flavors: &FlavorWeights) -> Result<Self> {
        let mult = |h: u64| u32::try_from(h).map_err(|_| Error::InvalidArgument("multiplicity too large".into()));
        let mut classes = Vec::new();
        for charge in flavors.charges() {
            for (degree, h) in [(0u8, h0), (1, h1)] {
                if h > 0 {
                    classes.push(TargetClass { weight: charge.clone(), degree, multiplicity: mult(h)? });
                }
            }
        }
        Self::new(classes)
    }

    /// Trivial bundle on `T²`: one class in each degree per flavor.
    pub fn torus(flavors: &FlavorWeights) -> Result<Self> {
        Self::from_bundle(1, 1, flavors)
    }

    /// `O(n)` on `ℙ¹`.
    pub fn projective_line(n: i64, flavors: &FlavorWeights) -> Result<Self> {
        let (h0, h1) = surface_cohomology(0, n, None)?;
        Self::from_bundle(h0, h1, flavors)
    }

    pub fn classes(&self) -> &[TargetClass] {
        &self.classes
    }

    fn flavors(&self) -> Result<FlavorWeights> {
        FlavorWeights::new(self.classes.iter().map(|c| c.weight.clone()).collect())
    }
}

fn cap(spec: &FugacitySpec, name: &str) -> Result<i64> {
    let m = spec.effective_max(name).ok_or_else(|| Error::MissingVariable(name.into()))?;
    Ok(m.floor().to_integer())
}

/// Exponent list for a letter, dropping `u` and `sigma` when the spec specializes them to 1.
fn letter<'a>(
    spec: &FugacitySpec,
    names: &'a [String],
    weight: &[i64],
    sign: i64,
    u: bool,
    sigma: bool,
    q: i64,
) -> Vec<(&'a str, i64)> {
    let mut exps: Vec<(&str, i64)> = names.iter().zip(weight).map(|(n, &w)| (n.as_str(), sign * w)).collect();
    exps.push(("q", q));
    if u && spec.index_of("u").is_some() {
        exps.push(("u", 1));
    }
    if sigma && spec.index_of("sigma").is_some() {
        exps.push(("sigma", 1));
    }
    exps
}

/// Single-letter index of the reduced system.
///
/// A class of weight `a` and degree `j` contributes `(−1)^j σ^j z^a / (1 − q)` (γ modes) and
/// `−(−1)^j σ^j u z^{−a} q / (1 − q)` (β modes). If `u` or `sigma` is absent from `spec` it is
/// set to 1.
pub fn reduced_letter_index(target: &TargetSpectrum, spec: &FugacitySpec) -> Result<TruncatedSeries> {
    let names = target.flavors()?.fugacity_names();
    let mut numerator = TruncatedSeries::zero(spec);
    for class in target.classes() {
        let parity = if class.degree == 1 { -1 } else { 1 };
        let odd = class.degree == 1;
        let m = class.multiplicity as i64;
        let gamma = letter(spec, &names, &class.weight, 1, false, odd, 0);
        let beta = letter(spec, &names, &class.weight, -1, true, odd, 1);
        numerator = numerator.add(&TruncatedSeries::monomial_int(spec, &gamma, parity * m)?)?;
        numerator = numerator.sub(&TruncatedSeries::monomial_int(spec, &beta, parity * m)?)?;
    }
    numerator.multiply(&TruncatedSeries::one_minus(spec, &[("q", 1)])?.invert()?)
}

/// Character of the one-dimensional βγ system valued in `target`, as the plethystic
/// exponential of [`reduced_letter_index`].
///
/// `spec` needs `q` and the flavor fugacities (`z`, or `z1, …` for higher rank); `u` and `sigma`
/// are optional.
///
/// ```
/// use twistchar::characters::FlavorWeights;
/// use twistchar::reduction::{reduced_character, TargetSpectrum};
/// use twistchar::series::FugacitySpec;
///
/// let spec = FugacitySpec::builder().var("q", 0, 5).var("z", -5, 5).build().unwrap();
/// let torus = TargetSpectrum::torus(&FlavorWeights::uniform(2)).unwrap();
/// assert!(reduced_character(&torus, &spec).unwrap().sub(&twistchar::TruncatedSeries::one(&spec)).unwrap().is_zero());
/// ```
pub fn reduced_character(target: &TargetSpectrum, spec: &FugacitySpec) -> Result<TruncatedSeries> {
    let flavors = target.flavors()?;
    let work = reduced_working_spec(&flavors, spec)?;
    reduced_letter_index(target, &work)?.plethystic_exp()?.restrict(spec)
}

/// Every partial product carries at most `U` β letters (`U` the `u` cap, or the `q` cap when
/// `u` is absent), each lowering flavor charge `j` by at most `W_j`.
fn reduced_working_spec(flavors: &FlavorWeights, spec: &FugacitySpec) -> Result<FugacitySpec> {
    let zero = Rational64::zero();
    let mut work = spec.widened("q", zero, zero)?;
    let betas = if spec.index_of("u").is_some() {
        work = work.widened("u", zero, zero)?;
        cap(spec, "u")?
    } else {
        cap(spec, "q")?
    }
    .max(0);
    if spec.index_of("sigma").is_some() {
        work = work.widened("sigma", zero, zero)?;
    }
    for (j, name) in flavors.fugacity_names().iter().enumerate() {
        let v = spec.variable(name).ok_or_else(|| Error::MissingVariable(name.clone()))?;
        let shift = betas * flavors.max_charge(j);
        let hi = v.max_exponent().floor().to_integer();
        work = work.widened(name, Rational64::from_integer(-shift), Rational64::from_integer(hi + shift))?;
    }
    Ok(work)
}

/// Relative sign between the two terms of the deformed differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum DifferentialSign {
    /// `ε₊∂̄ + ε₋∂`
    #[default]
    Plus,
    /// `ε₊∂̄ − ε₋∂`
    Minus,
}

/// Parameters of the deformed Dolbeault complex on ℂ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedComplexParams {
    pub eps_plus: Q,
    pub eps_minus: Q,
    pub jets: u32,
    pub sign: DifferentialSign,
}

impl DeformedComplexParams {
    pub fn new(eps_plus: Q, eps_minus: Q, jets: u32) -> Self {
        Self { eps_plus, eps_minus, jets, sign: DifferentialSign::Plus }
    }

    pub fn with_sign(mut self, sign: DifferentialSign) -> Self {
        self.sign = sign;
        self
    }
}

/// Chain and cohomology dimensions by form degree 0, 1, 2.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormCohomology {
    pub chain_dims: [usize; 3],
    pub dims: [usize; 3],
}

impl FormCohomology {
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn chain_total(&self) -> usize {
        self.chain_dims.iter().sum()
    }

    pub fn euler(&self) -> i64 {
        self.dims[0] as i64 - self.dims[1] as i64 + self.dims[2] as i64
    }
}

/// Cohomology of `ε₊∂̄ ± ε₋∂` on polynomial forms on ℂ.
///
/// A form `z^a z̄^b dz^e dz̄^f` has weight `(a + e, b + f)`, which both `∂` and `∂̄` preserve;
/// the complex keeps weights in `[0, k]²`. Each weight block has at most four forms, so the
/// total chain dimension is `(2k + 1)²`.
///
/// ```
/// use twistchar::rational::q_int;
/// use twistchar::reduction::{hodge_derham_dims, DeformedComplexParams};
///
/// let de_rham = hodge_derham_dims(&DeformedComplexParams::new(q_int(1), q_int(1), 3));
/// assert_eq!(de_rham.total(), 1);
/// let dolbeault = hodge_derham_dims(&DeformedComplexParams::new(q_int(1), q_int(0), 3));
/// assert_eq!(dolbeault.dims, [4, 3, 0]);
/// ```
pub fn hodge_derham_dims(params: &DeformedComplexParams) -> FormCohomology {
    let k = params.jets;
    let ep = &params.eps_plus;
    let em = match params.sign {
        DifferentialSign::Plus => params.eps_minus.clone(),
        DifferentialSign::Minus => -params.eps_minus.clone(),
    };
    let mut out = FormCohomology::default();
    for big_a in 0..=k {
        for big_b in 0..=k {
            let (has_dz, has_dzbar) = (big_a >= 1, big_b >= 1);
            let (a, b) = (Q::from_integer(big_a.into()), Q::from_integer(big_b.into()));
            // degree-1 basis: [z^{A−1} z̄^B dz, z^A z̄^{B−1} dz̄], keeping the ones that exist
            let mut one_forms = Vec::new();
            if has_dz {
                one_forms.push(0);
            }
            if has_dzbar {
                one_forms.push(1);
            }
            let two_forms = (has_dz && has_dzbar) as usize;
            // d(z^A z̄^B) = ε₋A·(dz form) + ε₊B·(dz̄ form)
            let mut d0 = SparseMatrixQ::new(one_forms.len(), 1);
            // d(f dz) = ε₊B·z^{A−1}z̄^{B−1} dz̄∧dz = −ε₊B·(dz∧dz̄ form); d(g dz̄) = ε₋A·(dz∧dz̄ form)
            let mut d1 = SparseMatrixQ::new(two_forms, one_forms.len());
            for (col, &kind) in one_forms.iter().enumerate() {
                let (image, boundary) = if kind == 0 { (&em * &a, -(ep * &b)) } else { (ep * &b, &em * &a) };
                d0.set(col, 0, image);
                if two_forms == 1 {
                    d1.set(0, col, boundary);
                }
            }
            let (r0, r1) = (exact_rank(&d0), exact_rank(&d1));
            let dims = [1, one_forms.len(), two_forms];
            for (total, d) in out.chain_dims.iter_mut().zip(dims) {
                *total += d;
            }
            out.dims[0] += 1 - r0;
            out.dims[1] += one_forms.len() - r0 - r1;
            out.dims[2] += two_forms - r1;
        }
    }
    out
}
