//! Composable operator expressions over radial fields.
//!
//! An [`OperatorExpr`] is a small syntax tree of multiplication, derivative,
//! dilation, and radial Hilbert factors. One expression can be evaluated two
//! ways: exactly on closed-form term sums, or numerically on sampled ray
//! grids with a propagated quadrature-error estimate. The same tree also
//! serializes to a compact JSON form so reports can record precisely which
//! operator produced a number.

pub mod catalog;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fields::closed::ClosedFormField;
use crate::fields::ray::RayField;
use crate::transforms::closed as closed_tf;
use crate::transforms::closed::HilbertKind;
use crate::transforms::numeric as numeric_tf;
use crate::transforms::numeric::{Estimated, TransformOptions};

/// A composable operator on scalar fields over ℝ³.
///
/// `Compose` is written in operator-product order: the rightmost factor acts
/// on the field first, exactly as a product of operators reads on paper.
/// `Sum` applies every branch to the same input and adds the results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorExpr {
    /// Leaves the field unchanged.
    Identity,
    /// Multiplies by a complex constant.
    Scale(Complex64),
    /// Multiplies by the radius `r`.
    MulR,
    /// Multiplies by `1/r`.
    MulRinv,
    /// Multiplies by the direction cosine `x_a / r`.
    MulRhat(usize),
    /// Multiplies by the Cartesian coordinate `x_a`.
    MulRvec(usize),
    /// Radial derivative `∂_r` at fixed direction.
    Dr,
    /// Cartesian partial derivative `∂_a`.
    Grad(usize),
    /// The Laplacian `∇²`.
    Laplacian,
    /// The dilation generator `−i ∂_r r`.
    Sigma,
    /// Its inverse, `(i/r) ∫_0^r · dt` along each ray.
    SigmaInv,
    /// Radial Hilbert transform pairing even reflections.
    HilbertEven,
    /// Radial Hilbert transform pairing odd reflections.
    HilbertOdd,
    /// The combination mapping `cos`-type profiles to `−sin`-type ones.
    HilbertPlus,
    /// The combination mapping `sin`-type profiles to `cos`-type ones.
    HilbertMinus,
    /// Point reflection through the origin.
    Parity,
    /// Operator product; the rightmost factor is applied first.
    Compose(Vec<OperatorExpr>),
    /// Pointwise sum of the branch results.
    Sum(Vec<OperatorExpr>),
}

impl OperatorExpr {
    /// Evaluates the expression exactly on a closed-form field.
    ///
    /// Every factor either maps the term algebra into itself or refuses with
    /// a structured error (for instance when the inverse dilation has no
    /// representation in the algebra for the given operand).
    pub fn apply_closed(&self, f: &ClosedFormField) -> Result<ClosedFormField> {
        use OperatorExpr::*;
        Ok(match self {
            Identity => f.clone(),
            Scale(c) => f.scale(*c),
            MulR => f.mul_r()?,
            MulRinv => f.mul_rinv()?,
            MulRhat(a) => f.mul_rhat(*a)?,
            MulRvec(a) => f.mul_rvec(*a)?,
            Dr => f.dr()?,
            Grad(a) => f.gradient(*a)?,
            Laplacian => f.laplacian()?,
            Sigma => closed_tf::dilation(f)?,
            SigmaInv => closed_tf::dilation_inv(f)?,
            HilbertEven => closed_tf::hilbert(HilbertKind::Even, f)?,
            HilbertOdd => closed_tf::hilbert(HilbertKind::Odd, f)?,
            HilbertPlus => closed_tf::hilbert(HilbertKind::Plus, f)?,
            HilbertMinus => closed_tf::hilbert(HilbertKind::Minus, f)?,
            Parity => f.parity(),
            Compose(factors) => {
                let mut acc = f.clone();
                for op in factors.iter().rev() {
                    acc = op.apply_closed(&acc)?;
                }
                acc
            }
            Sum(branches) => {
                let mut acc: Option<ClosedFormField> = None;
                for op in branches {
                    let term = op.apply_closed(f)?;
                    acc = Some(match acc {
                        None => term,
                        Some(prev) => prev.add(&term)?,
                    });
                }
                acc.unwrap_or_else(ClosedFormField::zero)
            }
        })
    }

    /// Evaluates the expression numerically on a sampled field.
    ///
    /// The returned [`Estimated::error`] aggregates the self-reported
    /// quadrature errors of every Hilbert factor encountered, scaled by any
    /// constant prefactors. Algebraic and differential factors pass the
    /// running estimate through unchanged, so consumers should apply their
    /// own safety margin on top (the verification suites use 10×).
    pub fn apply_numeric(&self, f: &RayField, opts: &TransformOptions) -> Result<Estimated> {
        self.apply_estimated(
            &Estimated {
                field: f.clone(),
                error: 0.0,
            },
            opts,
        )
    }

    fn apply_estimated(&self, f: &Estimated, opts: &TransformOptions) -> Result<Estimated> {
        use OperatorExpr::*;
        let carry = |field: RayField| Estimated {
            field,
            error: f.error,
        };
        let quad = |out: Estimated| Estimated {
            field: out.field,
            error: out.error + f.error,
        };
        Ok(match self {
            Identity => f.clone(),
            Scale(c) => Estimated {
                field: f.field.scale(*c),
                error: f.error * c.norm(),
            },
            MulR => carry(f.field.mul_rpow(1)),
            MulRinv => carry(f.field.mul_rpow(-1)),
            MulRhat(a) => {
                let a = *a;
                carry(f.field.mul_fn(|p| {
                    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                    Complex64::new(p[a] / r, 0.0)
                }))
            }
            MulRvec(a) => {
                let a = *a;
                carry(f.field.mul_fn(|p| Complex64::new(p[a], 0.0)))
            }
            Dr => carry(f.field.dr()),
            Grad(a) => {
                let [gx, gy, gz] = f.field.gradient();
                carry(match a {
                    0 => gx,
                    1 => gy,
                    _ => gz,
                })
            }
            Laplacian => carry(f.field.laplacian()),
            Sigma => carry(
                f.field
                    .mul_rpow(1)
                    .dr()
                    .scale(Complex64::new(0.0, -1.0)),
            ),
            SigmaInv => carry(
                f.field
                    .cumulative_radial_integral()
                    .mul_rpow(-1)
                    .scale(Complex64::new(0.0, 1.0)),
            ),
            HilbertEven => quad(numeric_tf::hilbert_even(&f.field, opts)?),
            HilbertOdd => quad(numeric_tf::hilbert_odd(&f.field, opts)?),
            HilbertPlus => quad(numeric_tf::hilbert_plus(&f.field, opts)?),
            HilbertMinus => quad(numeric_tf::hilbert_minus(&f.field, opts)?),
            Parity => carry(f.field.parity()),
            Compose(factors) => {
                let mut acc = f.clone();
                for op in factors.iter().rev() {
                    acc = op.apply_estimated(&acc, opts)?;
                }
                acc
            }
            Sum(branches) => {
                let mut acc: Option<Estimated> = None;
                for op in branches {
                    let term = op.apply_estimated(f, opts)?;
                    acc = Some(match acc {
                        None => term,
                        Some(prev) => Estimated {
                            field: prev.field.add(&term.field)?,
                            error: prev.error + term.error,
                        },
                    });
                }
                acc.unwrap_or_else(|| Estimated {
                    field: RayField::zeros(f.field.grid.clone()),
                    error: 0.0,
                })
            }
        })
    }

    /// Operator product `self ∘ rhs` (self acts last).
    pub fn then_after(self, rhs: OperatorExpr) -> OperatorExpr {
        OperatorExpr::Compose(vec![self, rhs])
    }

    /// Scales the whole expression by a constant.
    pub fn scaled(self, c: Complex64) -> OperatorExpr {
        OperatorExpr::Compose(vec![OperatorExpr::Scale(c), self])
    }
}

/// The commutator `[A, B] f = A(Bf) − B(Af)` evaluated on a closed field.
pub fn commutator_closed(
    a: &OperatorExpr,
    b: &OperatorExpr,
    f: &ClosedFormField,
) -> Result<ClosedFormField> {
    let ab = a.apply_closed(&b.apply_closed(f)?)?;
    let ba = b.apply_closed(&a.apply_closed(f)?)?;
    ab.sub(&ba)
}

/// The commutator `[A, B] f = A(Bf) − B(Af)` evaluated numerically.
pub fn commutator_numeric(
    a: &OperatorExpr,
    b: &OperatorExpr,
    f: &RayField,
    opts: &TransformOptions,
) -> Result<Estimated> {
    let bf = b.apply_numeric(f, opts)?;
    let af = a.apply_numeric(f, opts)?;
    let ab = a.apply_numeric(&bf.field, opts)?;
    let ba = b.apply_numeric(&af.field, opts)?;
    Ok(Estimated {
        field: ab.field.sub(&ba.field)?,
        error: ab.error + bf.error + ba.error + af.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::closed::{DirMono, Term};
    use crate::fields::ray::RayGrid;

    type C = Complex64;

    fn plane_wave_z(k: f64) -> ClosedFormField {
        ClosedFormField::new(vec![Term::new(
            C::new(1.0, 0.0),
            0,
            DirMono([0, 0, 0]),
            0.0,
            [0.0, 0.0, k],
        )])
    }

    fn radial_phase(alpha: f64) -> ClosedFormField {
        ClosedFormField::new(vec![Term::new(
            C::new(1.0, 0.0),
            0,
            DirMono([0, 0, 0]),
            alpha,
            [0.0, 0.0, 0.0],
        )])
    }

    fn sample_points() -> Vec<[f64; 3]> {
        vec![
            [0.7, -0.3, 1.1],
            [1.3, 0.4, -0.2],
            [-2.1, 1.0, 0.5],
            [0.11, 0.05, -0.12],
        ]
    }

    fn max_sample_diff(a: &ClosedFormField, b: &ClosedFormField) -> f64 {
        sample_points()
            .iter()
            .map(|&p| (a.sample(p).unwrap() - b.sample(p).unwrap()).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn compose_applies_rightmost_factor_first() {
        let f = radial_phase(2.0);
        // ∂_r (r f) differs from r ∂_r f; the product notation must give the
        // former for Compose([Dr, MulR]).
        let dr_after_mul = OperatorExpr::Compose(vec![OperatorExpr::Dr, OperatorExpr::MulR])
            .apply_closed(&f)
            .unwrap();
        let p = [0.9f64, -0.4, 0.3];
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        // ∂_r(r e^{2ir}) = (1 + 2ir) e^{2ir}
        let expect = C::new(1.0, 2.0 * r) * C::new(0.0, 2.0 * r).exp();
        assert!((dr_after_mul.sample(p).unwrap() - expect).norm() < 1e-12);

        let mul_after_dr = OperatorExpr::Compose(vec![OperatorExpr::MulR, OperatorExpr::Dr])
            .apply_closed(&f)
            .unwrap();
        // r ∂_r e^{2ir} = 2ir e^{2ir}
        let expect2 = C::new(0.0, 2.0 * r) * C::new(0.0, 2.0 * r).exp();
        assert!((mul_after_dr.sample(p).unwrap() - expect2).norm() < 1e-12);
    }

    #[test]
    fn sum_of_identity_and_negated_identity_vanishes() {
        let f = plane_wave_z(1.3);
        let zero = OperatorExpr::Sum(vec![
            OperatorExpr::Identity,
            OperatorExpr::Scale(C::new(-1.0, 0.0)),
        ])
        .apply_closed(&f)
        .unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn dilation_then_inverse_recovers_modulated_field() {
        let f = ClosedFormField::new(vec![Term::new(
            C::new(0.5, -0.2),
            0,
            DirMono([0, 0, 0]),
            1.7,
            [0.0, 0.3, 0.4],
        )]);
        let roundtrip = OperatorExpr::Compose(vec![OperatorExpr::SigmaInv, OperatorExpr::Sigma])
            .apply_closed(&f)
            .unwrap();
        assert!(max_sample_diff(&roundtrip, &f) < 1e-9);
    }

    #[test]
    fn serde_uses_compact_snake_case_and_roundtrips() {
        let expr = OperatorExpr::Compose(vec![
            OperatorExpr::Scale(C::new(-1.0, 0.0)),
            OperatorExpr::Grad(2),
            OperatorExpr::HilbertMinus,
            OperatorExpr::MulR,
        ]);
        let json = serde_json::to_string(&expr).unwrap();
        assert_eq!(
            json,
            r#"{"compose":[{"scale":[-1.0,0.0]},{"grad":2},"hilbert_minus","mul_r"]}"#
        );
        let back: OperatorExpr = serde_json::from_str(&json).unwrap();
        assert_eq!(back, expr);

        let bigger = catalog::p_tilde_expr(1.0, 2);
        let json2 = serde_json::to_string(&bigger).unwrap();
        let back2: OperatorExpr = serde_json::from_str(&json2).unwrap();
        assert_eq!(back2, bigger);
    }

    #[test]
    fn numeric_and_closed_evaluations_agree_on_smooth_operator() {
        let grid = RayGrid::new(2, 2, 500, 15.0).unwrap();
        let f_closed = radial_phase(2.0);
        let f_num = RayField::from_closed(grid, &f_closed).unwrap();
        // A = −½ r ∇² needs no quadrature, so both routes are sharp.
        let expr = OperatorExpr::Compose(vec![
            OperatorExpr::Scale(C::new(-0.5, 0.0)),
            OperatorExpr::MulR,
            OperatorExpr::Laplacian,
        ]);
        let closed = expr.apply_closed(&f_closed).unwrap();
        let numeric = expr
            .apply_numeric(&f_num, &TransformOptions::default())
            .unwrap();
        assert_eq!(numeric.error, 0.0);
        let nr = f_num.grid.n_radial;
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for d in 0..f_num.grid.n_dirs() {
            for k in 0..nr {
                // Skip the outermost radial band where one-sided stencils
                // lose a little accuracy.
                if f_num.grid.radii[k] > 0.9 * f_num.grid.rmax {
                    continue;
                }
                let want = closed.sample(f_num.grid.point(d, k)).unwrap();
                num += (numeric.field.at(d, k) - want).norm_sqr();
                den += want.norm_sqr();
            }
        }
        assert!(
            (num / den).sqrt() < 1e-8,
            "closed/numeric mismatch {}",
            (num / den).sqrt()
        );
    }

    #[test]
    fn numeric_error_estimate_accumulates_across_composition() {
        let grid = RayGrid::new(2, 2, 600, 30.0).unwrap();
        let f = RayField::from_fn(grid, |p| {
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            C::new(r * (-r * r / 9.0).exp(), 0.0)
        });
        let opts = TransformOptions {
            epsilon: Some(0.02),
            ..TransformOptions::default()
        };
        let single = OperatorExpr::HilbertPlus.apply_numeric(&f, &opts).unwrap();
        let double = OperatorExpr::Compose(vec![
            OperatorExpr::MulRinv,
            OperatorExpr::HilbertMinus,
            OperatorExpr::MulR,
            OperatorExpr::MulRinv,
            OperatorExpr::HilbertPlus,
            OperatorExpr::MulR,
        ])
        .apply_numeric(&f, &opts)
        .unwrap();
        assert!(single.error > 0.0);
        assert!(double.error > single.error);
    }
}
