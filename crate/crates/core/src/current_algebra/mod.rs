//! Higher current algebra on punctured ℂ².
//!
//! [`a2`] is the commutative dg model for functions on ℂ² ∖ 0 together with its residue pairing,
//! [`matrix`] holds flavor matrices and invariant cubic forms, and [`weyl`] the mode algebra in
//! which the currents act on local operators. [`ell3`] is the cubic bracket built from the
//! residue pairing.

pub mod a2;
pub mod matrix;
pub mod weyl;

pub use a2::{
    a2_cohomology, a2_differential, a2_multiply, a2_weight_cohomology, holomorphic_derivative, parse_aelement,
    predicted_cohomology, residue, AElement,
};
pub use matrix::{CubicInvariant, FlavorMatrix};
pub use weyl::{
    current, current_bracket_report, positive_current, weyl_commutator, CurrentBracketReport, ModeKind, ModeOp,
    WeylElement,
};

use crate::rational::Q;
use num_traits::Zero;

/// `ℓ₃(a⊗X, b⊗Y, c⊗Z) = θ(X,Y,Z) · ∮ a ∂b ∂c`, where `∂b ∂c` is the coefficient of
/// `dz₁dz₂` in the wedge, `∂₁b·∂₂c − ∂₂b·∂₁c`.
///
/// ```
/// use twistchar::current_algebra::{ell3, AElement, CubicInvariant, FlavorMatrix};
///
/// let theta = CubicInvariant::symmetrized_trace(3);
/// let x = FlavorMatrix::identity(3);
/// let value = ell3(&AElement::omega(), &AElement::z1(), &AElement::z2(), &x, &x, &x, &theta);
/// assert_eq!(value, theta.evaluate(&x, &x, &x));
/// ```
#[allow(clippy::too_many_arguments)]
pub fn ell3(
    a: &AElement,
    b: &AElement,
    c: &AElement,
    x: &FlavorMatrix,
    y: &FlavorMatrix,
    z: &FlavorMatrix,
    theta: &CubicInvariant,
) -> Q {
    let t = theta.evaluate(x, y, z);
    if t.is_zero() {
        return t;
    }
    let wedge = a2_multiply(&holomorphic_derivative(b, 0), &holomorphic_derivative(c, 1))
        .sub(&a2_multiply(&holomorphic_derivative(b, 1), &holomorphic_derivative(c, 0)));
    t * residue(&a2_multiply(a, &wedge))
}
