//! Floating-point evaluation of the infinite products behind the characters.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Evaluation point and stopping rule for the numeric products.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexParams {
    pub q1: Complex64,
    pub q2: Complex64,
    pub z: Complex64,
    /// Truncate once every factor on a full shell deviates from 1 by less than this.
    pub tolerance: f64,
    /// Maximum shell index `n₁ + n₂` before giving up.
    pub cutoff: u32,
}

impl ComplexParams {
    pub fn new(q1: Complex64, q2: Complex64, z: Complex64) -> Self {
        Self { q1, q2, z, tolerance: 1e-16, cutoff: 10_000 }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_cutoff(mut self, cutoff: u32) -> Self {
        self.cutoff = cutoff;
        self
    }

    /// Same point with `q₁` and `q₂` exchanged.
    pub fn swapped(self) -> Self {
        Self { q1: self.q2, q2: self.q1, ..self }
    }
}

fn check_nome(q: Complex64, name: &str) -> Result<()> {
    if !q.norm().is_finite() || q.norm() >= 1.0 {
        return Err(Error::NonConvergent(format!("|{name}| = {} is not below 1", q.norm())));
    }
    Ok(())
}

/// `Γ(q₁,q₂;z) = ∏_{n₁,n₂≥0} (1 − z⁻¹q₁^{n₁+1}q₂^{n₂+1}) / (1 − z q₁^{n₁}q₂^{n₂})`.
///
/// Factors are multiplied shell by shell in `n₁ + n₂`; the product stops after the first shell
/// whose factors all lie within `tolerance` of 1.
pub fn elliptic_gamma(params: &ComplexParams) -> Result<Complex64> {
    let ComplexParams { q1, q2, z, tolerance, cutoff } = *params;
    check_nome(q1, "q1")?;
    check_nome(q2, "q2")?;
    if z.norm() == 0.0 {
        return Err(Error::PoleWithinTolerance);
    }
    let zinv = z.inv();
    let qq = q1 * q2;
    let mut acc = Complex64::new(1.0, 0.0);
    for shell in 0..=cutoff {
        let mut worst: f64 = 0.0;
        for n1 in 0..=shell {
            let n2 = shell - n1;
            let x = q1.powu(n1) * q2.powu(n2);
            let den = Complex64::new(1.0, 0.0) - z * x;
            if den.norm() < tolerance {
                return Err(Error::PoleWithinTolerance);
            }
            let num_dev = zinv * x * qq;
            let factor = (Complex64::new(1.0, 0.0) - num_dev) / den;
            worst = worst.max((factor - 1.0).norm());
            acc *= factor;
        }
        if worst < tolerance {
            return Ok(acc);
        }
    }
    Err(Error::NonConvergent(format!("no convergence within {cutoff} shells")))
}

/// `θ₀(z;q) = ∏_{j≥0} (1 − z q^j)(1 − z⁻¹ q^{j+1})`.
pub fn theta0(z: Complex64, q: Complex64, tolerance: f64, cutoff: u32) -> Result<Complex64> {
    check_nome(q, "q")?;
    if z.norm() == 0.0 {
        return Err(Error::PoleWithinTolerance);
    }
    let zinv = z.inv();
    let mut acc = Complex64::new(1.0, 0.0);
    let mut qj = Complex64::new(1.0, 0.0);
    for _ in 0..=cutoff {
        let a = z * qj;
        let b = zinv * qj * q;
        acc *= (1.0 - a) * (1.0 - b);
        if a.norm() < tolerance && b.norm() < tolerance {
            return Ok(acc);
        }
        qj *= q;
    }
    Err(Error::NonConvergent(format!("no convergence within {cutoff} factors")))
}

/// One factor of the 3d partition function at winding `n`.
pub fn partition3d_factor(tau1: Complex64, tau2: Complex64, a_f: Complex64, n1: u32, n2: u32, n: i64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let base = tau1 * n1 as f64 + tau2 * n2 as f64 + n as f64;
    (base - i * (tau1 + tau2) + i * a_f, base - i * a_f)
}

/// Raw partial product
/// `∏_{n₁,n₂ ≤ mode_cutoff} ∏_{|n| ≤ n_cutoff} (n₁τ₁+n₂τ₂+n − i(τ₁+τ₂) + i a_f) / (n₁τ₁+n₂τ₂+n − i a_f)`.
///
/// No regularization is applied: the full product diverges, and this value only serves for
/// structural checks of the truncated factors.
pub fn partition3d_truncated(
    tau1: Complex64,
    tau2: Complex64,
    a_f: Complex64,
    n_cutoff: u32,
    mode_cutoff: u32,
    tolerance: f64,
) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    let n_cut = n_cutoff as i64;
    for n1 in 0..=mode_cutoff {
        for n2 in 0..=mode_cutoff {
            for n in -n_cut..=n_cut {
                let (num, den) = partition3d_factor(tau1, tau2, a_f, n1, n2, n);
                if den.norm() < tolerance {
                    return Err(Error::PoleInPartialProduct(n1, n2, n));
                }
                acc *= num / den;
            }
        }
    }
    Ok(acc)
}
