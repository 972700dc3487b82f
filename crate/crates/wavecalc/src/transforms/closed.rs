//! Exact radial transforms on closed-form fields.
//!
//! Along each oriented axis through the origin, a term
//! `c·rⁿ·M(r̂)·e^{i(α+k·r̂)r}` extends to the full axis as an analytic
//! sinusoid precisely when the field also contains a mirror term with the
//! opposite frequency and a matched coefficient. On such matched pairs the
//! half-line Hilbert transforms act term-by-term: a sign-definite sinusoid
//! maps to `i·sgn(α)` times itself, with an extra constant-correction term
//! for `1/r` profiles. Unmatched or sign-indefinite inputs are refused —
//! this layer is exact *because* it never approximates.
//!
//! The dilation `Σ = −i∂_r r` is a first-order derivative rule; its inverse
//! is reconstructed by a small per-frequency-sector linear solve, with the
//! integration constant fixed by the boundary condition `r·g → 0` at the
//! origin.

use crate::error::{Result, WaveError};
use crate::fields::closed::{ClosedFormField, DirMono, Term};
use nalgebra::{Complex, DMatrix, DVector};
use num_complex::Complex64;
use std::collections::HashMap;

/// Relative tolerance for mirror-pair coefficient matching and for the
/// inverse-dilation residual.
const PAIR_TOL: f64 = 1e-9;

/// The four half-line Hilbert transforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HilbertKind {
    /// Acts as the full-axis transform of the even extension of each ray profile.
    Even,
    /// Acts on the odd extension.
    Odd,
    /// `H₊ = ½[(H_e+H_o) + (H_e−H_o)P]` — full-axis transform of the field itself.
    Plus,
    /// `H₋ = ½[(H_e+H_o) − (H_e−H_o)P]`.
    Minus,
}

impl HilbertKind {
    pub fn name(self) -> &'static str {
        match self {
            HilbertKind::Even => "hilbert_even",
            HilbertKind::Odd => "hilbert_odd",
            HilbertKind::Plus => "hilbert_plus",
            HilbertKind::Minus => "hilbert_minus",
        }
    }
}

fn bits(x: f64) -> u64 {
    if x == 0.0 { 0.0f64.to_bits() } else { x.to_bits() }
}

type Key = (i32, DirMono, u64, [u64; 3]);

fn key_of(npow: i32, mono: DirMono, alpha: f64, kvec: [f64; 3]) -> Key {
    (npow, mono, bits(alpha), [bits(kvec[0]), bits(kvec[1]), bits(kvec[2])])
}

fn parity_sign(pow: i32) -> f64 {
    if pow.rem_euclid(2) == 0 { 1.0 } else { -1.0 }
}

/// Apply a half-line Hilbert transform exactly.
///
/// Errors:
/// * [`WaveError::SignIndefiniteTerm`] — a term's ray frequency `α + k·r̂`
///   changes sign over directions (needs `|k| < |α|`);
/// * [`WaveError::UnpairedTerm`] — missing mirror partner;
/// * [`WaveError::ZeroFrequencyTerm`] — a constant/power tail whose image
///   is not in the term algebra;
/// * [`WaveError::OffCenterField`] — the transform is anchored at the origin.
pub fn hilbert(kind: HilbertKind, f: &ClosedFormField) -> Result<ClosedFormField> {
    f.require_origin(kind.name())?;
    let map: HashMap<Key, Complex64> = f
        .terms()
        .iter()
        .map(|t| (key_of(t.npow, t.mono, t.alpha, t.kvec), t.coeff))
        .collect();
    let mut out: Vec<Term> = Vec::new();
    for t in f.terms() {
        let deg = t.mono.degree() as i32;
        let knorm = t.k_norm();
        if t.alpha == 0.0 && knorm == 0.0 {
            // Pure power terms: the full-axis profile is a (possibly
            // sign-flipped) power of t. Only the combinations whose
            // extension is `1` (transform 0) or `1/t` (PV transform 0)
            // stay inside the algebra.
            let vanishes = match kind {
                HilbertKind::Even => t.npow == 0,
                HilbertKind::Odd => t.npow == -1,
                HilbertKind::Plus => {
                    (t.npow == 0 && deg % 2 == 0) || (t.npow == -1 && deg % 2 == 1)
                }
                HilbertKind::Minus => {
                    (t.npow == 0 && deg % 2 == 1) || (t.npow == -1 && deg % 2 == 0)
                }
            };
            if vanishes {
                continue;
            }
            return Err(WaveError::ZeroFrequencyTerm { term: t.describe() });
        }
        if t.alpha == 0.0 || knorm >= t.alpha.abs() {
            return Err(WaveError::SignIndefiniteTerm { term: t.describe() });
        }
        // Mirror partner carrying the opposite ray frequency. The even/odd
        // extensions reflect the profile (k also flips); the full-axis
        // transforms evaluate the field across the origin (same k, and the
        // direction monomial contributes its parity).
        let (p_alpha, p_kvec, sign_pow) = match kind {
            HilbertKind::Even => (-t.alpha, neg(t.kvec), t.npow),
            HilbertKind::Odd => (-t.alpha, neg(t.kvec), t.npow + 1),
            HilbertKind::Plus => (-t.alpha, t.kvec, t.npow + deg),
            HilbertKind::Minus => (-t.alpha, t.kvec, t.npow + deg + 1),
        };
        let expected = t.coeff * parity_sign(sign_pow);
        let partner = map.get(&key_of(t.npow, t.mono, p_alpha, p_kvec));
        let matched = match partner {
            Some(cp) => {
                (cp - expected).norm() <= PAIR_TOL * expected.norm().max(cp.norm())
            }
            None => false,
        };
        if !matched {
            return Err(WaveError::UnpairedTerm { term: t.describe() });
        }
        let s = if t.alpha > 0.0 { 1.0 } else { -1.0 };
        let rot = Complex64::new(0.0, s);
        out.push(Term::new(rot * t.coeff, t.npow, t.mono, t.alpha, t.kvec));
        if t.npow == -1 {
            // PV ∫ e^{iβt}/t picks up a constant: the image of e^{iβr}/r is
            // i·sgn(β)(e^{iβr} − 1)/r.
            out.push(Term::new(-rot * t.coeff, -1, t.mono, 0.0, [0.0; 3]));
        }
    }
    Ok(ClosedFormField::new(out))
}

fn neg(k: [f64; 3]) -> [f64; 3] {
    [-k[0], -k[1], -k[2]]
}

/// Dilation `Σ = −i ∂_r r`, exact on every closed-form field.
pub fn dilation(f: &ClosedFormField) -> Result<ClosedFormField> {
    f.require_origin("dilation")?;
    let mut out: Vec<Term> = Vec::new();
    for t in f.terms() {
        // ∂_r(r·c rⁿ M e^{iβr}) = (n+1)c rⁿ M e^{iβr} + iβ c r^{n+1} M e^{iβr},
        // with β = α + k·r̂ splitting into the α part and a monomial bump
        // per k component.
        out.push(Term::new(
            Complex64::new(0.0, -(t.npow as f64 + 1.0)) * t.coeff,
            t.npow,
            t.mono,
            t.alpha,
            t.kvec,
        ));
        if t.alpha != 0.0 {
            out.push(Term::new(t.coeff * t.alpha, t.npow + 1, t.mono, t.alpha, t.kvec));
        }
        for axis in 0..3 {
            if t.kvec[axis] != 0.0 {
                out.push(Term::new(
                    t.coeff * t.kvec[axis],
                    t.npow + 1,
                    t.mono.times_axis(axis)?,
                    t.alpha,
                    t.kvec,
                ));
            }
        }
    }
    Ok(ClosedFormField::new(out))
}

/// Inverse dilation `Σ⁻¹ f = (i/r) ∫₀^r f dt`, reconstructed exactly.
///
/// Terms are grouped into sectors of equal `(α, k)`; within a sector `Σ`
/// maps the finite-dimensional span of `{rⁿ·M}` shapes to itself plus
/// one-higher powers, so a small least-squares solve recovers the unique
/// preimage. Integration constants (`C(r̂)/r` solutions of `Σh = 0`) are
/// fixed by requiring `r·g → 0` at the origin, which reproduces the
/// definite integral from 0. Inconsistency (e.g. fields whose running
/// integral leaves the term algebra, like `e^{iβr}/r` alone) is an error.
pub fn dilation_inv(f: &ClosedFormField) -> Result<ClosedFormField> {
    f.require_origin("dilation_inv")?;
    for t in f.terms() {
        if t.npow < -1 {
            return Err(WaveError::NonIntegrableOrigin { detail: t.describe() });
        }
    }
    // Sector key: exact (α, k) bits.
    let mut sectors: HashMap<(u64, [u64; 3]), Vec<Term>> = HashMap::new();
    for t in f.terms() {
        sectors
            .entry((bits(t.alpha), [bits(t.kvec[0]), bits(t.kvec[1]), bits(t.kvec[2])]))
            .or_default()
            .push(t.clone());
    }
    let mut sector_keys: Vec<_> = sectors.keys().cloned().collect();
    sector_keys.sort();

    let mut out: Vec<Term> = Vec::new();
    for skey in sector_keys {
        let terms = &sectors[&skey];
        let alpha = terms[0].alpha;
        let kvec = terms[0].kvec;

        // Candidate preimage shapes (npow, mono).
        let mut cands: Vec<(i32, DirMono)> = Vec::new();
        let push_cand = |c: (i32, DirMono), cands: &mut Vec<(i32, DirMono)>| {
            if c.0 >= -1 && !cands.contains(&c) {
                cands.push(c);
            }
        };
        for t in terms {
            push_cand((t.npow, t.mono), &mut cands);
            push_cand((t.npow - 1, t.mono), &mut cands);
            for axis in 0..3 {
                if let Some(m) = t.mono.over_axis(axis) {
                    push_cand((t.npow - 1, m), &mut cands);
                }
            }
            // A third-axis frequency bump sends monomials with third-axis
            // power one to canonical images with power zero, so those
            // shapes are also legitimate preimages of this term.
            if kvec[2] != 0.0 && t.mono.0[2] == 0 {
                let m = t.mono.0;
                push_cand((t.npow - 1, DirMono([m[0], m[1], 1])), &mut cands);
                if m[0] >= 2 {
                    push_cand((t.npow - 1, DirMono([m[0] - 2, m[1], 1])), &mut cands);
                }
                if m[1] >= 2 {
                    push_cand((t.npow - 1, DirMono([m[0], m[1] - 2, 1])), &mut cands);
                }
            }
        }
        // Image shapes reached by Σ from the candidates, plus the sector's
        // own target shapes.
        let mut images: Vec<(i32, DirMono)> = Vec::new();
        let push_img = |c: (i32, DirMono), images: &mut Vec<(i32, DirMono)>| {
            if !images.contains(&c) {
                images.push(c);
            }
        };
        for &(n, m) in &cands {
            if n != -1 {
                push_img((n, m), &mut images);
            }
            if alpha != 0.0 {
                push_img((n + 1, m), &mut images);
            }
            for axis in 0..3 {
                if kvec[axis] != 0.0 {
                    if let Ok(up) = m.times_axis(axis) {
                        for (_, cm) in up.canonical_expansion() {
                            push_img((n + 1, cm), &mut images);
                        }
                    }
                }
            }
        }
        for t in terms {
            push_img((t.npow, t.mono), &mut images);
        }

        // Assemble Σ as a matrix from candidate shapes to image shapes.
        let rows = images.len();
        let cols = cands.len();
        let mut a = DMatrix::<Complex<f64>>::zeros(rows, cols);
        let idx_of = |s: (i32, DirMono), images: &[(i32, DirMono)]| {
            images.iter().position(|x| *x == s).unwrap()
        };
        for (j, &(n, m)) in cands.iter().enumerate() {
            if n != -1 {
                let i = idx_of((n, m), &images);
                a[(i, j)] += Complex::new(0.0, -(n as f64 + 1.0));
            }
            if alpha != 0.0 {
                let i = idx_of((n + 1, m), &images);
                a[(i, j)] += Complex::new(alpha, 0.0);
            }
            for axis in 0..3 {
                if kvec[axis] != 0.0 {
                    if let Ok(up) = m.times_axis(axis) {
                        for (w, cm) in up.canonical_expansion() {
                            let i = idx_of((n + 1, cm), &images);
                            a[(i, j)] += Complex::new(kvec[axis] * w, 0.0);
                        }
                    }
                }
            }
        }
        let mut b = DVector::<Complex<f64>>::zeros(rows);
        for t in terms {
            let i = idx_of((t.npow, t.mono), &images);
            b[i] += Complex::new(t.coeff.re, t.coeff.im);
        }
        let bnorm = b.norm();
        let svd = a.clone().svd(true, true);
        let x = svd
            .solve(&b, 1e-13)
            .map_err(|e| WaveError::InvalidParameter(format!("dilation_inv solve: {e}")))?;
        let residual = (&a * &x - &b).norm();
        if residual > PAIR_TOL * bnorm.max(1e-300) {
            return Err(WaveError::InverseDilationInconsistent {
                residual: residual / bnorm.max(1e-300),
            });
        }
        for (j, &(n, m)) in cands.iter().enumerate() {
            let c = Complex64::new(x[j].re, x[j].im);
            if c.norm() <= 1e-14 * bnorm {
                continue;
            }
            out.push(Term::new(c, n, m, alpha, kvec));
            if n == -1 {
                // Fix the integration constant: subtract c·M/r so that
                // r·g → 0 at the origin (the definite integral from 0).
                out.push(Term::new(-c, -1, m, 0.0, [0.0; 3]));
            }
        }
    }
    let g = ClosedFormField::new(out);
    // Safety net: Σ(Σ⁻¹ f) must reproduce f exactly in the algebra.
    let back = dilation(&g)?;
    let diff = back.sub(f)?;
    let scale = f.coeff_scale().max(1e-300);
    if diff.coeff_scale() > 1e-9 * scale {
        return Err(WaveError::InverseDilationInconsistent {
            residual: diff.coeff_scale() / scale,
        });
    }
    Ok(g)
}
