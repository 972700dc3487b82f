//! Scratch diagnostic: norms and radial profiles of the intermediates of
//! the [K1,p1] and [K1,iHmr] brackets on one suite field. Not part of the
//! library surface; delete after use.

use std::sync::Arc;
use wavecalc::fields::ray::{RayField, RayGrid};
use wavecalc::operators::catalog;
use wavecalc::operators::OperatorExpr;
use wavecalc::transforms::numeric::TransformOptions;
use wavecalc::verify::suite_fields;

fn tnorm(f: &RayField, frac: f64) -> f64 {
    let grid = &f.grid;
    let nr = grid.n_radial;
    let hi = frac * grid.rmax;
    let mut acc = 0.0;
    for d in 0..grid.n_dirs() {
        for k in 0..nr {
            let r = grid.radii[k];
            if r > hi {
                break;
            }
            acc += grid.dir_weights[d] * grid.radial_weights[k] * r * r
                * f.values[d * nr + k].norm_sqr();
        }
    }
    acc.sqrt()
}

fn maxabs(f: &RayField) -> (f64, f64) {
    let nr = f.grid.n_radial;
    let mut best = (0.0f64, 0.0f64);
    for d in 0..f.grid.n_dirs() {
        for k in 0..nr {
            let v = f.values[d * nr + k].norm();
            if v > best.0 {
                best = (v, f.grid.radii[k]);
            }
        }
    }
    best
}

fn show(label: &str, f: &RayField, err: f64) {
    let (m, at) = maxabs(f);
    println!(
        "{label:28} tnorm {:10.3e}  max {:10.3e} at r={:8.4}  err est {:9.3e}",
        tnorm(f, 0.5),
        m,
        at,
        err
    );
}

fn main() {
    let grid: Arc<RayGrid> = RayGrid::new(14, 28, 256, 40.0).unwrap();
    let f = suite_fields(7)[0].sample(grid.clone());
    let opts = TransformOptions { epsilon: Some(0.002), ..TransformOptions::default() };
    show("f", &f, 0.0);

    let p1 = catalog::p_tilde_expr(1.0, 0);
    let k1 = catalog::boost_expr(0);
    let ihmr = catalog::position_time_expr();
    let w0 = catalog::a_conjugate_time_expr();

    let p1f = p1.apply_numeric(&f, &opts).unwrap();
    show("p1 f", &p1f.field, p1f.error);
    let kp1f = k1.apply_numeric(&p1f.field, &opts).unwrap();
    show("K1 p1 f", &kp1f.field, kp1f.error);
    let k1f = k1.apply_numeric(&f, &opts).unwrap();
    show("K1 f", &k1f.field, k1f.error);
    let p1k1f = p1.apply_numeric(&k1f.field, &opts).unwrap();
    show("p1 K1 f", &p1k1f.field, p1k1f.error);

    let ihmrf = ihmr.apply_numeric(&f, &opts).unwrap();
    show("iHmr f", &ihmrf.field, ihmrf.error);
    let kihmrf = k1.apply_numeric(&ihmrf.field, &opts).unwrap();
    show("K1 iHmr f", &kihmrf.field, kihmrf.error);
    let ihmrk1f = ihmr.apply_numeric(&k1f.field, &opts).unwrap();
    show("iHmr K1 f", &ihmrk1f.field, ihmrk1f.error);

    let w0f = w0.apply_numeric(&f, &opts).unwrap();
    show("w0 f", &w0f.field, w0f.error);
    let kw0f = k1.apply_numeric(&w0f.field, &opts).unwrap();
    show("K1 w0 f", &kw0f.field, kw0f.error);

    // Edge behaviour of one Hilbert output and its radial derivative.
    use wavecalc::transforms::numeric;
    let rf = f.mul_rpow(1);
    let hrf = numeric::hilbert_minus(&rf, &opts).unwrap();
    let dhrf = hrf.field.dr();
    let nr = grid.n_radial;
    let d = 3 * grid.n_azimuth + 7;
    println!("inner edge of H_-(r f) along dir {d} (r, |H|, |dr H|):");
    for k in 0..10 {
        println!(
            "  r={:10.6}  {:11.4e}  {:11.4e}",
            grid.radii[k],
            hrf.field.values[d * nr + k].norm(),
            dhrf.values[d * nr + k].norm()
        );
    }
    println!("outer edge (same):");
    for k in nr - 8..nr {
        println!(
            "  r={:10.6}  {:11.4e}  {:11.4e}",
            grid.radii[k],
            hrf.field.values[d * nr + k].norm(),
            dhrf.values[d * nr + k].norm()
        );
    }

    // Radial profile of the [K1,iHmr] residual along one ray.
    let x1 = catalog::position_space_expr(0);
    let x1f = x1.apply_numeric(&f, &opts).unwrap();
    let resid = kihmrf
        .field
        .sub(&ihmrk1f.field)
        .unwrap()
        .sub(&x1f.field.scale(num_complex::Complex64::new(0.0, 1.0)))
        .unwrap();
    show("[K1,iHmr]f - i x1 f", &resid, 0.0);
    let nr = grid.n_radial;
    let d = 3 * grid.n_azimuth + 7; // an off-axis direction
    println!("profile of residual along dir {d} (r, |resid|, |K1 iHmr f|, |iHmr K1 f|):");
    for k in (0..nr).step_by(16) {
        println!(
            "  r={:8.4}  {:10.3e}  {:10.3e}  {:10.3e}",
            grid.radii[k],
            resid.values[d * nr + k].norm(),
            kihmrf.field.values[d * nr + k].norm(),
            ihmrk1f.field.values[d * nr + k].norm()
        );
    }
}
