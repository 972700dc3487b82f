//! Named constructors for the operator family used throughout the library:
//! the quadratic symbols `a⁰` and `a`, the momentum and frequency operators
//! built from them, and the boost and rotation generators. Each constructor
//! returns a plain [`OperatorExpr`], so callers can inspect, serialize, or
//! recombine them; the `apply_*` helpers evaluate them directly.

use num_complex::Complex64;

use crate::error::{Result, WaveError};
use crate::fields::closed::ClosedFormField;
use crate::fields::ray::RayField;
use crate::transforms::numeric::{Estimated, TransformOptions};

use super::OperatorExpr;
use OperatorExpr::{Compose, Dr, Grad, HilbertMinus, HilbertPlus, Laplacian, MulR, MulRinv, MulRvec, Scale, Sigma, SigmaInv, Sum};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Largest angular-energy fraction a sampled field may leave unresolved
/// before the numeric operator helpers refuse to differentiate it.
pub const ANGULAR_BUDGET: f64 = 0.05;

/// The time-like quadratic symbol `a⁰ = −½ r ∇²`.
pub fn a0_expr() -> OperatorExpr {
    Compose(vec![Scale(re(-0.5)), MulR, Laplacian])
}

/// The space-like quadratic symbol `a_axis = −(∂_r r) ∂_axis + ½ x_axis ∇²`.
pub fn a_expr(axis: usize) -> OperatorExpr {
    Sum(vec![
        Compose(vec![Scale(re(-1.0)), Dr, MulR, Grad(axis)]),
        Compose(vec![Scale(re(0.5)), MulRvec(axis), Laplacian]),
    ])
}

/// Momentum component `p̃_axis = (1/r) Σ⁻¹ (−½ m²c² x_axis + a_axis) r`,
/// where `mc_sq` is the squared product of mass and light speed.
pub fn p_tilde_expr(mc_sq: f64, axis: usize) -> OperatorExpr {
    Compose(vec![
        MulRinv,
        SigmaInv,
        Sum(vec![
            Compose(vec![Scale(re(-0.5 * mc_sq)), MulRvec(axis)]),
            a_expr(axis),
        ]),
        MulR,
    ])
}

/// Frequency component `p̃⁰ = −i (1/r) H₊ Σ⁻¹ (½ m²c² r + a⁰) r`.
pub fn p0_tilde_expr(mc_sq: f64) -> OperatorExpr {
    Compose(vec![
        Scale(-I),
        MulRinv,
        HilbertPlus,
        SigmaInv,
        Sum(vec![Compose(vec![Scale(re(0.5 * mc_sq)), MulR]), a0_expr()]),
        MulR,
    ])
}

/// Alternative factorization of the same momentum component,
/// `p̃_axis = −i (1/r) ∂_axis r − ½ (1/r) Σ⁻¹ x_axis (m²c² − ∇²) r`.
pub fn p_tilde_factored_expr(mc_sq: f64, axis: usize) -> OperatorExpr {
    Sum(vec![
        Compose(vec![Scale(-I), MulRinv, Grad(axis), MulR]),
        Compose(vec![
            Scale(re(-0.5)),
            MulRinv,
            SigmaInv,
            MulRvec(axis),
            Sum(vec![
                Scale(re(mc_sq)),
                Compose(vec![Scale(re(-1.0)), Laplacian]),
            ]),
            MulR,
        ]),
    ])
}

/// Boost generator `K_axis = −∂_axis H₋ r`.
pub fn boost_expr(axis: usize) -> OperatorExpr {
    Compose(vec![Scale(re(-1.0)), Grad(axis), HilbertMinus, MulR])
}

/// Rotation generator `J_axis = −i (x_b ∂_c − x_c ∂_b)` with `(axis, b, c)`
/// a cyclic permutation of the coordinate axes.
pub fn rotation_expr(axis: usize) -> OperatorExpr {
    let b = (axis + 1) % 3;
    let c = (axis + 2) % 3;
    Compose(vec![
        Scale(-I),
        Sum(vec![
            Compose(vec![MulRvec(b), Grad(c)]),
            Compose(vec![Scale(re(-1.0)), MulRvec(c), Grad(b)]),
        ]),
    ])
}

/// Plain momentum component `−i ∂_axis`.
pub fn momentum_expr(axis: usize) -> OperatorExpr {
    Compose(vec![Scale(-I), Grad(axis)])
}

/// `i H₋ r`: the time partner that completes multiplication by `x_axis`
/// into a four-vector under boosts and rotations.
pub fn position_time_expr() -> OperatorExpr {
    Compose(vec![Scale(I), HilbertMinus, MulR])
}

/// Multiplication by `x_axis`, spelled as an expression for suite tables.
pub fn position_space_expr(axis: usize) -> OperatorExpr {
    MulRvec(axis)
}

/// `−(i/r) H₊ a⁰ r`: the time partner of the conjugated quadratic symbols.
pub fn a_conjugate_time_expr() -> OperatorExpr {
    Compose(vec![Scale(-I), MulRinv, HilbertPlus, a0_expr(), MulR])
}

/// `(1/r) a_axis r`: the conjugated space-like quadratic symbol.
pub fn a_conjugate_space_expr(axis: usize) -> OperatorExpr {
    Compose(vec![MulRinv, a_expr(axis), MulR])
}

/// `(1/r) Σ⁻¹ r`: the scalar prefactor shared by all four momentum
/// components; it commutes with boosts and rotations.
pub fn momentum_prefactor_expr() -> OperatorExpr {
    Compose(vec![MulRinv, SigmaInv, MulR])
}

/// `(1/r) Σ r = −i (r ∂_r + 2)`: the local inverse of the momentum
/// prefactor. It obeys the same boost and rotation commutation relations
/// as the prefactor, but as a pure differential operator it has no
/// cumulative-integral tail, so commutators with Hilbert-transform
/// compositions stay inside the quadrature's accurate domain.
pub fn dilation_sandwich_expr() -> OperatorExpr {
    Compose(vec![MulRinv, Sigma, MulR])
}

/// Applies `a⁰` exactly.
pub fn apply_a0(f: &ClosedFormField) -> Result<ClosedFormField> {
    a0_expr().apply_closed(f)
}

/// Applies `a_axis` exactly.
pub fn apply_a(f: &ClosedFormField, axis: usize) -> Result<ClosedFormField> {
    a_expr(axis).apply_closed(f)
}

/// Applies the momentum component `p̃_axis` exactly.
pub fn apply_p_tilde(f: &ClosedFormField, mc_sq: f64, axis: usize) -> Result<ClosedFormField> {
    p_tilde_expr(mc_sq, axis).apply_closed(f)
}

/// Applies the frequency component `p̃⁰` exactly.
pub fn apply_p0_tilde(f: &ClosedFormField, mc_sq: f64) -> Result<ClosedFormField> {
    p0_tilde_expr(mc_sq).apply_closed(f)
}

/// Applies the boost generator `K_axis` exactly.
pub fn apply_boost(f: &ClosedFormField, axis: usize) -> Result<ClosedFormField> {
    boost_expr(axis).apply_closed(f)
}

/// Applies the rotation generator `J_axis` exactly.
pub fn apply_rotation(f: &ClosedFormField, axis: usize) -> Result<ClosedFormField> {
    rotation_expr(axis).apply_closed(f)
}

fn angular_guard(f: &RayField) -> Result<()> {
    let estimate = f.angular_tail_fraction();
    if estimate > ANGULAR_BUDGET {
        return Err(WaveError::AngularResolutionInsufficient {
            estimate,
            budget: ANGULAR_BUDGET,
        });
    }
    Ok(())
}

/// Applies `a⁰` numerically after checking the field is angularly resolved.
pub fn apply_a0_numeric(f: &RayField, opts: &TransformOptions) -> Result<Estimated> {
    angular_guard(f)?;
    a0_expr().apply_numeric(f, opts)
}

/// Applies `a_axis` numerically after the angular-resolution check.
pub fn apply_a_numeric(f: &RayField, axis: usize, opts: &TransformOptions) -> Result<Estimated> {
    angular_guard(f)?;
    a_expr(axis).apply_numeric(f, opts)
}

/// Applies `p̃_axis` numerically after the angular-resolution check.
pub fn apply_p_tilde_numeric(
    f: &RayField,
    mc_sq: f64,
    axis: usize,
    opts: &TransformOptions,
) -> Result<Estimated> {
    angular_guard(f)?;
    p_tilde_expr(mc_sq, axis).apply_numeric(f, opts)
}

/// Applies `p̃⁰` numerically after the angular-resolution check.
pub fn apply_p0_tilde_numeric(
    f: &RayField,
    mc_sq: f64,
    opts: &TransformOptions,
) -> Result<Estimated> {
    angular_guard(f)?;
    p0_tilde_expr(mc_sq).apply_numeric(f, opts)
}

/// Applies `K_axis` numerically after the angular-resolution check.
pub fn apply_boost_numeric(
    f: &RayField,
    axis: usize,
    opts: &TransformOptions,
) -> Result<Estimated> {
    angular_guard(f)?;
    boost_expr(axis).apply_numeric(f, opts)
}

/// Applies `J_axis` numerically after the angular-resolution check.
pub fn apply_rotation_numeric(
    f: &RayField,
    axis: usize,
    opts: &TransformOptions,
) -> Result<Estimated> {
    angular_guard(f)?;
    rotation_expr(axis).apply_numeric(f, opts)
}
