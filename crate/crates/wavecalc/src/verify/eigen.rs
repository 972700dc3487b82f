//! Eigen-relation checks: the momentum operators act on a closed-form
//! wavepacket and must reproduce it scaled by the packet's momentum or
//! frequency — but only when the packet sits at the origin.
//!
//! Each check runs two backends. The closed backend pushes the packet
//! through the term algebra and should agree at rounding precision; the
//! numeric backend samples the packet on ray grids at two resolutions and
//! carries the quadrature error estimates. The reported residual/tolerance
//! pair is whichever backend has the worse margin, so `pass` means both
//! backends agree with the eigenvalue within their own accuracy.

use num_complex::Complex64;
use serde_json::json;
use std::sync::Arc;

use crate::error::Result;
use crate::fields::closed::ClosedFormField;
use crate::fields::ray::{RayField, RayGrid};
use crate::operators::catalog;
use crate::operators::OperatorExpr;
use crate::transforms::numeric::TransformOptions;
use crate::verify::CheckReport;
use crate::fields::params::PacketParams;
use crate::wavepacket::{make_packet, PacketKind};

/// L² norm over the trusted inner region `r ≤ fraction · rmax`.
fn trusted_norm(f: &RayField, fraction: f64) -> f64 {
    let grid = &f.grid;
    let nr = grid.n_radial;
    let hi = fraction * grid.rmax;
    let mut acc = 0.0;
    for d in 0..grid.n_dirs() {
        for k in 0..nr {
            let r = grid.radii[k];
            if r > hi {
                break;
            }
            let w = grid.dir_weights[d] * grid.radial_weights[k] * r * r;
            acc += w * f.values[d * nr + k].norm_sqr();
        }
    }
    acc.sqrt()
}

/// Grids and quadrature options shared by the eigen checks. The fine grid
/// doubles the coarse one in every direction so the numeric backend can
/// report a refinement order and an a-posteriori floor.
pub struct EigenGrids {
    pub coarse: Arc<RayGrid>,
    pub fine: Arc<RayGrid>,
    pub opts: TransformOptions,
    pub safety: f64,
}

impl EigenGrids {
    pub fn standard() -> Result<EigenGrids> {
        Ok(EigenGrids {
            coarse: RayGrid::new(12, 24, 128, 20.0)?,
            fine: RayGrid::new(24, 48, 256, 20.0)?,
            opts: TransformOptions {
                epsilon: Some(0.02),
                ..TransformOptions::default()
            },
            safety: 10.0,
        })
    }
}

struct BackendOutcome {
    residual: f64,
    tolerance: f64,
    label: &'static str,
}

/// Checks `op f = eigenvalue · f` and reports the worse-margin backend.
///
/// A zero eigenvalue normalizes by `‖f‖` instead of `‖λf‖`; the closed
/// backend may be unavailable when the operator has no closed action on
/// the operand (the notes record why), in which case the numeric backend
/// alone decides the check.
pub fn eigen_residual(
    op: &OperatorExpr,
    f: &ClosedFormField,
    eigenvalue: Complex64,
    grids: &EigenGrids,
    check_id: &str,
) -> Result<CheckReport> {
    let frac = grids.opts.trusted_fraction;
    let fine_f = RayField::from_closed(grids.fine.clone(), f)?;
    let lam_fine = fine_f.scale(eigenvalue);
    let norm_f = trusted_norm(&fine_f, frac);
    let den = if eigenvalue.norm() > 0.0 {
        trusted_norm(&lam_fine, frac).max(1e-300)
    } else {
        norm_f.max(1e-300)
    };

    let mut notes: Vec<String> = Vec::new();
    if eigenvalue.norm() == 0.0 {
        notes.push("zero eigenvalue: residual relative to ‖f‖".into());
    }
    let mut outcomes: Vec<BackendOutcome> = Vec::new();

    // Closed backend: exact term algebra, rounding-level tolerance.
    match op.apply_closed(f) {
        Ok(opf) => {
            let opf_fine = RayField::from_closed(grids.fine.clone(), &opf)?;
            let resid = opf_fine.sub(&lam_fine)?;
            let residual = trusted_norm(&resid, frac) / den;
            let scale = (trusted_norm(&opf_fine, frac) + trusted_norm(&lam_fine, frac) + norm_f)
                / den;
            let tolerance = 4096.0 * f64::EPSILON * scale;
            notes.push(format!("closed backend residual {residual:.3e}"));
            outcomes.push(BackendOutcome { residual, tolerance, label: "closed" });
        }
        Err(err) => notes.push(format!("closed backend unavailable: {err}")),
    }

    // Numeric backend: two resolutions, quadrature estimates plus an
    // a-posteriori refinement floor.
    let mut res = [0.0f64; 2];
    let mut quad = [0.0f64; 2];
    let mut order = None;
    for (li, grid) in [&grids.coarse, &grids.fine].into_iter().enumerate() {
        let f_g = RayField::from_closed(grid.clone(), f)?;
        let lam_g = f_g.scale(eigenvalue);
        let den_g = if eigenvalue.norm() > 0.0 {
            trusted_norm(&lam_g, frac).max(1e-300)
        } else {
            trusted_norm(&f_g, frac).max(1e-300)
        };
        let est = op.apply_numeric(&f_g, &grids.opts)?;
        let resid = est.field.sub(&lam_g)?;
        res[li] = trusted_norm(&resid, frac) / den_g;
        quad[li] = est.error * trusted_norm(&est.field, frac) / den_g;
    }
    let refine_floor = (4.0 / 3.0) * (res[0] - res[1]).abs();
    let num_tol = grids.safety * (quad[1] + refine_floor + 1e-12);
    if res[1] > 1e-14 && res[0] > 0.0 {
        order = Some((res[0] / res[1]).log2());
    }
    notes.push(format!(
        "numeric backend residual {:.3e} (coarse {:.3e}), tolerance {:.3e}",
        res[1], res[0], num_tol
    ));
    outcomes.push(BackendOutcome { residual: res[1], tolerance: num_tol, label: "numeric" });

    // Report the backend with the worse residual-to-tolerance margin.
    let worst = outcomes
        .iter()
        .max_by(|a, b| {
            let ma = a.residual / a.tolerance.max(1e-300);
            let mb = b.residual / b.tolerance.max(1e-300);
            ma.partial_cmp(&mb).unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("at least the numeric backend ran");
    notes.push(format!("reported backend: {}", worst.label));

    let params = json!({
        "op": op,
        "eigenvalue": [eigenvalue.re, eigenvalue.im],
        "grids": [
            [grids.coarse.n_polar, grids.coarse.n_azimuth, grids.coarse.n_radial],
            [grids.fine.n_polar, grids.fine.n_azimuth, grids.fine.n_radial],
        ],
        "rmax": grids.fine.rmax,
        "epsilon": grids.opts.epsilon,
        "safety": grids.safety,
    });
    let mut report = CheckReport::new(check_id, params, worst.residual, worst.tolerance)
        .with_notes(notes.join("; "));
    if let Some(o) = order {
        report = report.with_order(o);
    }
    Ok(report)
}

/// The standard eigen cases: a slow packet and a relativistic one, each
/// against its momentum components and frequency, plus the documented
/// negative where the packet is displaced from the origin and the
/// eigen-property genuinely fails.
pub fn run_eigen_suite(grids: &EigenGrids) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();

    let slow = PacketParams::new(1.0, 1.0, [0.0, 0.0, 0.3])?;
    let psi = make_packet(&slow, 0.0, PacketKind::Nonrelativistic)?;
    let mc_sq = 1.0;
    let p0 = slow.p0();
    let cases = [
        ("p1 psi(0.3z) = 0", catalog::p_tilde_expr(mc_sq, 0), Complex64::new(0.0, 0.0)),
        ("p3 psi(0.3z) = 0.3 psi", catalog::p_tilde_expr(mc_sq, 2), Complex64::new(0.3, 0.0)),
        ("p0 psi(0.3z) = sqrt(1.09) psi", catalog::p0_tilde_expr(mc_sq), Complex64::new(p0, 0.0)),
    ];
    for (id, op, lam) in cases {
        reports.push(eigen_residual(&op, &psi, lam, grids, id)?);
    }

    let fast = PacketParams::new(1.0, 1.0, [0.0, 0.0, 0.6])?;
    let cpsi = make_packet(&fast, 0.0, PacketKind::Relativistic)?;
    let rel_cases = [
        ("p3 Psi(0.6z) = 0.75 Psi", catalog::p_tilde_expr(mc_sq, 2), Complex64::new(fast.rel_p()?[2], 0.0)),
        ("p0 Psi(0.6z) = 1.25 Psi", catalog::p0_tilde_expr(mc_sq), Complex64::new(fast.rel_p0()?, 0.0)),
    ];
    for (id, op, lam) in rel_cases {
        reports.push(eigen_residual(&op, &cpsi, lam, grids, id)?);
    }

    // Displaced packet: the operators are tied to the coordinate origin, so
    // the eigen-property must fail once the packet centre moves away.
    let shifted = make_packet(&slow, 0.0, PacketKind::Nonrelativistic)?.with_center([0.0, 0.0, 1.5]);
    let mut negative = eigen_residual(
        &catalog::p_tilde_expr(mc_sq, 2),
        &shifted,
        Complex64::new(0.3, 0.0),
        grids,
        "p3 on displaced packet (expected failure)",
    )?;
    negative.notes = format!(
        "expected failure: the eigen-property holds only with the packet centred at the origin; {}",
        negative.notes
    );
    reports.push(negative);

    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grids() -> EigenGrids {
        EigenGrids {
            coarse: RayGrid::new(10, 20, 96, 16.0).unwrap(),
            fine: RayGrid::new(20, 40, 192, 16.0).unwrap(),
            opts: TransformOptions {
                epsilon: Some(0.02),
                ..TransformOptions::default()
            },
            safety: 10.0,
        }
    }

    #[test]
    fn momentum_component_reproduces_packet_momentum() {
        let grids = small_grids();
        let params = PacketParams::new(1.0, 1.0, [0.0, 0.0, 0.3]).unwrap();
        let psi = make_packet(&params, 0.0, PacketKind::Nonrelativistic).unwrap();
        let r = eigen_residual(
            &catalog::p_tilde_expr(1.0, 2),
            &psi,
            Complex64::new(0.3, 0.0),
            &grids,
            "p3 eigen",
        )
        .unwrap();
        assert!(r.pass, "{}", r.line());
        assert!(r.notes.contains("closed backend residual"));
        // The closed route must be at rounding precision.
        let closed: f64 = r
            .notes
            .split("closed backend residual ")
            .nth(1)
            .unwrap()
            .split(';')
            .next()
            .unwrap()
            .trim()
            .parse()
            .unwrap();
        assert!(closed < 1e-10, "closed residual {closed}");
    }

    #[test]
    fn frequency_component_reproduces_packet_frequency() {
        let grids = small_grids();
        let params = PacketParams::new(1.0, 1.0, [0.0, 0.0, 0.3]).unwrap();
        let psi = make_packet(&params, 0.0, PacketKind::Nonrelativistic).unwrap();
        let r = eigen_residual(
            &catalog::p0_tilde_expr(1.0),
            &psi,
            Complex64::new(params.p0(), 0.0),
            &grids,
            "p0 eigen",
        )
        .unwrap();
        assert!(r.pass, "{}", r.line());
    }

    #[test]
    fn relativistic_packet_matches_its_four_momentum() {
        let grids = small_grids();
        let params = PacketParams::new(1.0, 1.0, [0.0, 0.0, 0.6]).unwrap();
        let psi = make_packet(&params, 0.0, PacketKind::Relativistic).unwrap();
        let r = eigen_residual(
            &catalog::p0_tilde_expr(1.0),
            &psi,
            Complex64::new(1.25, 0.0),
            &grids,
            "p0 relativistic eigen",
        )
        .unwrap();
        assert!(r.pass, "{}", r.line());
        let r3 = eigen_residual(
            &catalog::p_tilde_expr(1.0, 2),
            &psi,
            Complex64::new(0.75, 0.0),
            &grids,
            "p3 relativistic eigen",
        )
        .unwrap();
        assert!(r3.pass, "{}", r3.line());
    }

    #[test]
    fn displaced_packet_fails_the_eigen_property() {
        let grids = small_grids();
        let params = PacketParams::new(1.0, 1.0, [0.0, 0.0, 0.3]).unwrap();
        let shifted = make_packet(&params, 0.0, PacketKind::Nonrelativistic)
            .unwrap()
            .with_center([0.0, 0.0, 1.5]);
        let r = eigen_residual(
            &catalog::p_tilde_expr(1.0, 2),
            &shifted,
            Complex64::new(0.3, 0.0),
            &grids,
            "p3 displaced",
        )
        .unwrap();
        assert!(!r.pass, "{}", r.line());
        assert!(r.residual > 1e-2, "{}", r.line());
    }
}
