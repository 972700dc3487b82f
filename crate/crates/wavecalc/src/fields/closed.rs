//! Exact field representation: finite sums of elementary terms
//!
//! ```text
//!     c · r^n · r̂₁^{m₁} r̂₂^{m₂} r̂₃^{m₃} · e^{iαr} · e^{i k·r}
//! ```
//!
//! with complex coefficient `c`, integer radial power `n` (possibly
//! negative), a direction monomial of total degree ≤ 6, a radial frequency
//! `α`, and a plane-wave vector `k`. Wavepackets, their derivatives, and
//! everything the operator calculus produces from them stay inside this
//! class, so operators act exactly (no discretization).
//!
//! Canonicalization merges terms with bit-identical labels and removes the
//! redundancy `r̂₁² + r̂₂² + r̂₃² = 1` by extracting the isotropic part of
//! the diagonal quadratic monomials. Labels (`α`, `k`) are only ever
//! negated or added pairwise, so terms produced by the same algebraic
//! route carry bit-identical labels and cancellation is exact.

use crate::error::{Result, WaveError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Direction monomial `r̂₁^a r̂₂^b r̂₃^c`, total degree ≤ 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirMono(pub [u8; 3]);

impl DirMono {
    pub const ONE: DirMono = DirMono([0, 0, 0]);

    pub fn axis(a: usize) -> DirMono {
        let mut m = [0u8; 3];
        m[a] = 1;
        DirMono(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Multiply by `r̂_a`, failing if the degree cap is exceeded.
    pub fn times_axis(&self, a: usize) -> Result<DirMono> {
        let mut m = self.0;
        m[a] += 1;
        let out = DirMono(m);
        if out.degree() > 6 {
            return Err(WaveError::MonomialDegreeTooHigh { degree: out.degree() });
        }
        Ok(out)
    }

    /// Divide by `r̂_a` if possible (used by the monomial derivative).
    pub fn over_axis(&self, a: usize) -> Option<DirMono> {
        if self.0[a] == 0 {
            return None;
        }
        let mut m = self.0;
        m[a] -= 1;
        Some(DirMono(m))
    }

    pub fn eval(&self, rhat: [f64; 3]) -> f64 {
        let mut v = 1.0;
        for a in 0..3 {
            for _ in 0..self.0[a] {
                v *= rhat[a];
            }
        }
        v
    }

    fn product(&self, other: &DirMono) -> Result<DirMono> {
        let m = [self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]];
        let out = DirMono(m);
        if out.degree() > 6 {
            return Err(WaveError::MonomialDegreeTooHigh { degree: out.degree() });
        }
        Ok(out)
    }

    /// Expansion in the canonical basis whose third-axis power is at most
    /// one, using `r̂₃² = 1 − r̂₁² − r̂₂²` on the unit sphere.
    pub fn canonical_expansion(&self) -> Vec<(f64, DirMono)> {
        let mut stack = vec![(1.0f64, *self)];
        let mut out: Vec<(f64, DirMono)> = Vec::new();
        while let Some((w, m)) = stack.pop() {
            let v = m.0;
            if v[2] >= 2 {
                stack.push((w, DirMono([v[0], v[1], v[2] - 2])));
                stack.push((-w, DirMono([v[0] + 2, v[1], v[2] - 2])));
                stack.push((-w, DirMono([v[0], v[1] + 2, v[2] - 2])));
            } else if let Some(entry) = out.iter_mut().find(|(_, mm)| *mm == m) {
                entry.0 += w;
            } else {
                out.push((w, m));
            }
        }
        out.retain(|(w, _)| *w != 0.0);
        out
    }
}

/// One elementary term of a closed-form field.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Complex64,
    pub npow: i32,
    pub mono: DirMono,
    pub alpha: f64,
    pub kvec: [f64; 3],
}

/// Exact merge key: radial power, monomial, and the bit patterns of the
/// frequency labels (`−0.0` folded to `+0.0` at construction).
type TermKey = (i32, DirMono, u64, [u64; 3]);

impl Term {
    pub fn new(coeff: Complex64, npow: i32, mono: DirMono, alpha: f64, kvec: [f64; 3]) -> Term {
        // Fold negative zeros so bitwise keys agree.
        let norm = |x: f64| if x == 0.0 { 0.0 } else { x };
        Term {
            coeff,
            npow,
            mono,
            alpha: norm(alpha),
            kvec: [norm(kvec[0]), norm(kvec[1]), norm(kvec[2])],
        }
    }

    /// Plain radial term `c·r^n` (no monomial, no oscillation).
    pub fn radial(coeff: Complex64, npow: i32) -> Term {
        Term::new(coeff, npow, DirMono::ONE, 0.0, [0.0; 3])
    }

    pub fn key(&self) -> TermKey {
        (
            self.npow,
            self.mono,
            self.alpha.to_bits(),
            [self.kvec[0].to_bits(), self.kvec[1].to_bits(), self.kvec[2].to_bits()],
        )
    }

    pub fn k_norm(&self) -> f64 {
        (self.kvec[0] * self.kvec[0] + self.kvec[1] * self.kvec[1] + self.kvec[2] * self.kvec[2])
            .sqrt()
    }

    /// True when the ray frequency `α + k·r̂` has the sign of `α` for every
    /// direction (`|k| < |α|`).
    pub fn is_sign_definite(&self) -> bool {
        self.alpha != 0.0 && self.k_norm() < self.alpha.abs()
    }

    pub fn describe(&self) -> String {
        format!(
            "({:+.3e}{:+.3e}i)·r^{}·m{:?}·exp(i{}r)·exp(i[{}, {}, {}]·r)",
            self.coeff.re,
            self.coeff.im,
            self.npow,
            self.mono.0,
            self.alpha,
            self.kvec[0],
            self.kvec[1],
            self.kvec[2]
        )
    }

    /// Value of the term at radius `r > 0` and direction `rhat`.
    fn eval(&self, r: f64, rhat: [f64; 3]) -> Complex64 {
        let phase = self.alpha * r
            + r * (self.kvec[0] * rhat[0] + self.kvec[1] * rhat[1] + self.kvec[2] * rhat[2]);
        self.coeff
            * self.mono.eval(rhat)
            * r.powi(self.npow)
            * Complex64::new(0.0, phase).exp()
    }
}

/// A finite sum of [`Term`]s, possibly translated so that the packet center
/// sits at `center` instead of the coordinate origin.
///
/// Radial operators (`Σ`, the Hilbert transforms, multiplication by `r`)
/// are anchored at the origin and refuse off-center fields; differential
/// operators and sampling work anywhere.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosedFormField {
    terms: Vec<Term>,
    center: [f64; 3],
}

/// Below this radius, sampling switches to the analytic origin limit.
const ORIGIN_RADIUS: f64 = 1e-12;
/// Relative tolerance for the cancellations that make an origin limit
/// finite; coefficient sums are compared against the total coefficient
/// magnitude of the group.
const CANCEL_TOL: f64 = 1e-9;

impl ClosedFormField {
    pub fn new(terms: Vec<Term>) -> ClosedFormField {
        ClosedFormField { terms: canonicalize(terms), center: [0.0; 3] }
    }

    pub fn zero() -> ClosedFormField {
        ClosedFormField { terms: Vec::new(), center: [0.0; 3] }
    }

    pub fn with_center(mut self, center: [f64; 3]) -> ClosedFormField {
        self.center = center;
        self
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn center(&self) -> [f64; 3] {
        self.center
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude; a cheap scale for relative residuals.
    pub fn coeff_scale(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    pub fn require_origin(&self, op: &'static str) -> Result<()> {
        if self.center != [0.0; 3] {
            return Err(WaveError::OffCenterField { op });
        }
        Ok(())
    }

    fn same_frame(&self, other: &ClosedFormField) -> Result<[f64; 3]> {
        if self.terms.is_empty() {
            return Ok(other.center);
        }
        if other.terms.is_empty() || self.center == other.center {
            return Ok(self.center);
        }
        Err(WaveError::GridMismatch)
    }

    pub fn add(&self, other: &ClosedFormField) -> Result<ClosedFormField> {
        let center = self.same_frame(other)?;
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(ClosedFormField { terms: canonicalize(terms), center })
    }

    pub fn sub(&self, other: &ClosedFormField) -> Result<ClosedFormField> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> ClosedFormField {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { coeff: s * t.coeff, ..*t })
            .collect();
        ClosedFormField { terms: canonicalize(terms), center: self.center }
    }

    /// Pointwise product of two fields (labels add; degree cap applies).
    pub fn mul(&self, other: &ClosedFormField) -> Result<ClosedFormField> {
        let center = self.same_frame(other)?;
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                out.push(Term::new(
                    a.coeff * b.coeff,
                    a.npow + b.npow,
                    a.mono.product(&b.mono)?,
                    a.alpha + b.alpha,
                    [
                        a.kvec[0] + b.kvec[0],
                        a.kvec[1] + b.kvec[1],
                        a.kvec[2] + b.kvec[2],
                    ],
                ));
            }
        }
        Ok(ClosedFormField { terms: canonicalize(out), center })
    }

    /// Complex conjugate field.
    pub fn conj(&self) -> ClosedFormField {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Term::new(
                    t.coeff.conj(),
                    t.npow,
                    t.mono,
                    -t.alpha,
                    [-t.kvec[0], -t.kvec[1], -t.kvec[2]],
                )
            })
            .collect();
        ClosedFormField { terms: canonicalize(terms), center: self.center }
    }

    /// Parity: `f(r) → f(−r)`.
    pub fn parity(&self) -> ClosedFormField {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let sign = if t.mono.degree() % 2 == 0 { 1.0 } else { -1.0 };
                Term::new(
                    sign * t.coeff,
                    t.npow,
                    t.mono,
                    t.alpha,
                    [-t.kvec[0], -t.kvec[1], -t.kvec[2]],
                )
            })
            .collect();
        ClosedFormField {
            terms: canonicalize(terms),
            center: [-self.center[0], -self.center[1], -self.center[2]],
        }
    }

    /// Cartesian derivative `∂/∂x_a` (relative to the field's own frame,
    /// which coincides with space derivatives since translation is rigid).
    pub fn gradient(&self, a: usize) -> Result<ClosedFormField> {
        let mut out = Vec::with_capacity(self.terms.len() * 5);
        for t in &self.terms {
            gradient_term(t, a, &mut out)?;
        }
        Ok(ClosedFormField { terms: canonicalize(out), center: self.center })
    }

    pub fn grad(&self) -> Result<[ClosedFormField; 3]> {
        Ok([self.gradient(0)?, self.gradient(1)?, self.gradient(2)?])
    }

    /// Laplacian via two exact gradient passes; the second pass is summed
    /// over axes before canonicalization so the isotropic parts recombine.
    pub fn laplacian(&self) -> Result<ClosedFormField> {
        let mut out = Vec::new();
        for a in 0..3 {
            let first = self.gradient(a)?;
            for t in &first.terms {
                gradient_term(t, a, &mut out)?;
            }
        }
        Ok(ClosedFormField { terms: canonicalize(out), center: self.center })
    }

    /// Radial derivative `∂_r` at fixed direction.
    pub fn dr(&self) -> Result<ClosedFormField> {
        self.require_origin("d/dr")?;
        let mut out = Vec::with_capacity(self.terms.len() * 5);
        for t in &self.terms {
            // ∂_r [r^n M e^{iαr} e^{ik·r}] = n r^{n-1} M E + iα r^n M E
            //                                + i Σ_j k_j r^n (M·r̂_j) E.
            if t.npow != 0 {
                out.push(Term::new(
                    Complex64::new(t.npow as f64, 0.0) * t.coeff,
                    t.npow - 1,
                    t.mono,
                    t.alpha,
                    t.kvec,
                ));
            }
            if t.alpha != 0.0 {
                out.push(Term::new(
                    Complex64::new(0.0, t.alpha) * t.coeff,
                    t.npow,
                    t.mono,
                    t.alpha,
                    t.kvec,
                ));
            }
            for j in 0..3 {
                if t.kvec[j] != 0.0 {
                    out.push(Term::new(
                        Complex64::new(0.0, t.kvec[j]) * t.coeff,
                        t.npow,
                        t.mono.times_axis(j)?,
                        t.alpha,
                        t.kvec,
                    ));
                }
            }
        }
        Ok(ClosedFormField { terms: canonicalize(out), center: self.center })
    }

    /// Multiplication by the radius `r`.
    pub fn mul_r(&self) -> Result<ClosedFormField> {
        self.require_origin("r·")?;
        Ok(self.shift_npow(1))
    }

    /// Multiplication by `1/r`.
    pub fn mul_rinv(&self) -> Result<ClosedFormField> {
        self.require_origin("(1/r)·")?;
        Ok(self.shift_npow(-1))
    }

    fn shift_npow(&self, d: i32) -> ClosedFormField {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { npow: t.npow + d, ..*t })
            .collect();
        ClosedFormField { terms, center: self.center }
    }

    /// Multiplication by the direction component `r̂_a`.
    pub fn mul_rhat(&self, a: usize) -> Result<ClosedFormField> {
        self.require_origin("r̂·")?;
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            out.push(Term { mono: t.mono.times_axis(a)?, ..*t });
        }
        Ok(ClosedFormField { terms: canonicalize(out), center: self.center })
    }

    /// Multiplication by the Cartesian coordinate `x_a = r·r̂_a`.
    pub fn mul_rvec(&self, a: usize) -> Result<ClosedFormField> {
        self.mul_r()?.mul_rhat(a)
    }

    /// Value at a spatial point (in absolute coordinates).
    pub fn sample(&self, point: [f64; 3]) -> Result<Complex64> {
        let rel = [
            point[0] - self.center[0],
            point[1] - self.center[1],
            point[2] - self.center[2],
        ];
        let r = (rel[0] * rel[0] + rel[1] * rel[1] + rel[2] * rel[2]).sqrt();
        if r > ORIGIN_RADIUS {
            let rhat = [rel[0] / r, rel[1] / r, rel[2] / r];
            let mut acc = Complex64::new(0.0, 0.0);
            for t in &self.terms {
                acc += t.eval(r, rhat);
            }
            return Ok(acc);
        }
        self.origin_limit()
    }

    /// Analytic limit at the field center, when it exists.
    fn origin_limit(&self) -> Result<Complex64> {
        use std::collections::HashMap;
        let mut acc = Complex64::new(0.0, 0.0);
        // Group by (npow, mono): cancellations act within these groups.
        let mut groups: HashMap<(i32, DirMono), Vec<&Term>> = HashMap::new();
        for t in &self.terms {
            groups.entry((t.npow, t.mono)).or_default().push(t);
        }
        for ((npow, mono), ts) in groups {
            let scale: f64 = ts.iter().map(|t| t.coeff.norm()).sum::<f64>().max(1e-300);
            let csum: Complex64 = ts.iter().map(|t| t.coeff).sum();
            match npow {
                n if n >= 1 => {} // vanishes at the center
                0 => {
                    if mono.degree() == 0 {
                        acc += csum;
                    } else if csum.norm() > CANCEL_TOL * scale {
                        return Err(WaveError::NonRemovableSingularity {
                            detail: format!(
                                "direction-dependent value from monomial {:?} at r=0",
                                mono.0
                            ),
                        });
                    }
                }
                -1 => {
                    if csum.norm() > CANCEL_TOL * scale {
                        return Err(WaveError::NonRemovableSingularity {
                            detail: format!("1/r coefficients sum to {csum:e}, not zero"),
                        });
                    }
                    // Survivor of c/r·e^{i(α+k·r̂)r} after cancellation:
                    // i Σ c α + i (Σ c k)·r̂ — the k part must cancel too.
                    let ca: Complex64 = ts.iter().map(|t| t.coeff * t.alpha).sum();
                    let mut ck = [Complex64::new(0.0, 0.0); 3];
                    for t in ts.iter() {
                        for j in 0..3 {
                            ck[j] += t.coeff * t.kvec[j];
                        }
                    }
                    let kscale: f64 = ts
                        .iter()
                        .map(|t| t.coeff.norm() * (t.alpha.abs() + t.k_norm()))
                        .sum::<f64>()
                        .max(1e-300);
                    if ck.iter().map(|z| z.norm()).sum::<f64>() > CANCEL_TOL * kscale {
                        return Err(WaveError::NonRemovableSingularity {
                            detail: "direction-dependent limit from plane-wave factors at r=0"
                                .into(),
                        });
                    }
                    if mono.degree() == 0 {
                        acc += Complex64::new(0.0, 1.0) * ca;
                    } else if ca.norm() > CANCEL_TOL * kscale {
                        return Err(WaveError::NonRemovableSingularity {
                            detail: format!(
                                "direction-dependent 1/r limit with monomial {:?}",
                                mono.0
                            ),
                        });
                    }
                }
                _ => {
                    return Err(WaveError::NonRemovableSingularity {
                        detail: format!("terms with radial power {npow} at r=0"),
                    });
                }
            }
        }
        Ok(acc)
    }
}

/// One Cartesian derivative of a single term, appended to `out` raw
/// (caller canonicalizes).
fn gradient_term(t: &Term, a: usize, out: &mut Vec<Term>) -> Result<()> {
    // Plane-wave factor: i k_a.
    if t.kvec[a] != 0.0 {
        out.push(Term::new(
            Complex64::new(0.0, t.kvec[a]) * t.coeff,
            t.npow,
            t.mono,
            t.alpha,
            t.kvec,
        ));
    }
    // Radial oscillation: iα r̂_a.
    if t.alpha != 0.0 {
        out.push(Term::new(
            Complex64::new(0.0, t.alpha) * t.coeff,
            t.npow,
            t.mono.times_axis(a)?,
            t.alpha,
            t.kvec,
        ));
    }
    // Radial power: n r^{n-1} r̂_a.
    if t.npow != 0 {
        out.push(Term::new(
            Complex64::new(t.npow as f64, 0.0) * t.coeff,
            t.npow - 1,
            t.mono.times_axis(a)?,
            t.alpha,
            t.kvec,
        ));
    }
    // Monomial: ∂_a r̂_j = (δ_aj − r̂_a r̂_j)/r.
    let deg = t.mono.degree();
    if deg > 0 {
        if let Some(reduced) = t.mono.over_axis(a) {
            out.push(Term::new(
                Complex64::new(t.mono.0[a] as f64, 0.0) * t.coeff,
                t.npow - 1,
                reduced,
                t.alpha,
                t.kvec,
            ));
        }
        out.push(Term::new(
            Complex64::new(-(deg as f64), 0.0) * t.coeff,
            t.npow - 1,
            t.mono.times_axis(a)?,
            t.alpha,
            t.kvec,
        ));
    }
    Ok(())
}

/// Rewrite every monomial into the canonical basis with third-axis power at
/// most one (`r̂₃² = 1 − r̂₁² − r̂₂²` on the sphere), merge bit-identical
/// labels, drop exact zeros, sort. The canonical basis makes term labels
/// unique as functions, so exact cancellation and the inverse-dilation
/// solver both see one representation per function.
fn canonicalize(terms: Vec<Term>) -> Vec<Term> {
    use std::collections::HashMap;
    let mut stack = terms;
    let mut flat: Vec<Term> = Vec::with_capacity(stack.len());
    while let Some(t) = stack.pop() {
        let m = t.mono.0;
        if m[2] >= 2 {
            stack.push(Term {
                mono: DirMono([m[0], m[1], m[2] - 2]),
                ..t
            });
            stack.push(Term {
                coeff: -t.coeff,
                mono: DirMono([m[0] + 2, m[1], m[2] - 2]),
                ..t
            });
            stack.push(Term {
                coeff: -t.coeff,
                mono: DirMono([m[0], m[1] + 2, m[2] - 2]),
                ..t
            });
        } else {
            flat.push(t);
        }
    }
    let mut map: HashMap<TermKey, Term> = HashMap::with_capacity(flat.len());
    for t in flat {
        map.entry(t.key())
            .and_modify(|e| e.coeff += t.coeff)
            .or_insert(t);
    }
    let mut out: Vec<Term> = map
        .into_values()
        .filter(|t| t.coeff.norm_sqr() != 0.0)
        .collect();
    out.sort_by_key(|t| t.key());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64 as C;

    fn i() -> C {
        C::new(0.0, 1.0)
    }

    /// sin(αr)/r as its two-exponential canonical form.
    fn sinc_field(alpha: f64, k: [f64; 3]) -> ClosedFormField {
        ClosedFormField::new(vec![
            Term::new(-0.5 * i(), -1, DirMono::ONE, alpha, k),
            Term::new(0.5 * i(), -1, DirMono::ONE, -alpha, k),
        ])
    }

    #[test]
    fn canonicalize_merges_and_cancels() {
        let f = ClosedFormField::new(vec![
            Term::radial(C::new(1.0, 0.0), 2),
            Term::radial(C::new(2.0, 0.0), 2),
            Term::radial(C::new(-3.0, 0.0), 2),
        ]);
        assert!(f.is_zero());
    }

    #[test]
    fn trace_reduction_collapses_isotropic_diagonal() {
        // r̂₁² + r̂₂² + r̂₃² = 1 should canonicalize to the constant 1.
        let f = ClosedFormField::new(vec![
            Term::new(C::new(1.0, 0.0), 0, DirMono([2, 0, 0]), 0.0, [0.0; 3]),
            Term::new(C::new(1.0, 0.0), 0, DirMono([0, 2, 0]), 0.0, [0.0; 3]),
            Term::new(C::new(1.0, 0.0), 0, DirMono([0, 0, 2]), 0.0, [0.0; 3]),
        ]);
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0].mono, DirMono::ONE);
        assert_relative_eq!(f.terms()[0].coeff.re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn sample_matches_direct_formula() {
        // sin(√1.09·r)/r · e^{i 0.3 z} at r = (1,0,0): radius 1.
        let p0 = 1.09f64.sqrt();
        let f = sinc_field(p0, [0.0, 0.0, 0.3]);
        let v = f.sample([1.0, 0.0, 0.0]).unwrap();
        let expect = C::new(0.0, 0.0 /* z=0 phase */).exp() * p0.sin();
        assert_relative_eq!(v.re, expect.re, epsilon = 1e-14);
        assert_relative_eq!(v.im, 0.0, epsilon = 1e-14);
        assert_relative_eq!(v.norm(), 0.8644376134861929, epsilon = 1e-10);

        // With the plane-wave factor active: at (0,0,1) value is sin(p0)·e^{0.3i}.
        let v2 = f.sample([0.0, 0.0, 1.0]).unwrap();
        let expect2 = C::new(0.0, 0.3).exp() * p0.sin();
        assert_relative_eq!(v2.re, expect2.re, epsilon = 1e-14);
        assert_relative_eq!(v2.im, expect2.im, epsilon = 1e-14);
    }

    #[test]
    fn origin_limit_of_spherical_sinc_is_alpha() {
        let f = sinc_field(1.0, [0.0, 0.0, 0.3]);
        let v = f.sample([0.0; 3]).unwrap();
        assert_relative_eq!(v.re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(v.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn origin_limit_rejects_bare_pole() {
        let f = ClosedFormField::new(vec![Term::new(C::new(1.0, 0.0), -1, DirMono::ONE, 2.0, [0.0; 3])]);
        assert!(matches!(
            f.sample([0.0; 3]),
            Err(WaveError::NonRemovableSingularity { .. })
        ));
    }

    #[test]
    fn gradient_of_plane_wave_is_ik() {
        let k = [0.4, -0.2, 1.1];
        let f = ClosedFormField::new(vec![Term::new(C::new(1.0, 0.0), 0, DirMono::ONE, 0.0, k)]);
        for a in 0..3 {
            let g = f.gradient(a).unwrap();
            assert_eq!(g.terms().len(), 1);
            let t = g.terms()[0];
            assert_relative_eq!(t.coeff.im, k[a], epsilon = 1e-15);
            assert_eq!(t.npow, 0);
        }
    }

    #[test]
    fn laplacian_of_plane_wave_is_minus_k_squared() {
        let k = [0.4, -0.2, 1.1];
        let k2: f64 = k.iter().map(|x| x * x).sum();
        let f = ClosedFormField::new(vec![Term::new(C::new(1.0, 0.0), 0, DirMono::ONE, 0.0, k)]);
        let l = f.laplacian().unwrap();
        assert_eq!(l.terms().len(), 1, "trace reduction should leave one term");
        assert_relative_eq!(l.terms()[0].coeff.re, -k2, epsilon = 1e-14);
        assert_eq!(l.terms()[0].mono, DirMono::ONE);
    }

    #[test]
    fn laplacian_of_spherical_sinc_is_minus_alpha_squared() {
        // ∇²[sin(αr)/r] = −α² sin(αr)/r away from the origin (and the limit
        // holds at the origin by continuity of the term representation).
        let alpha = 1.3;
        let f = sinc_field(alpha, [0.0; 3]);
        let l = f.laplacian().unwrap();
        let want = f.scale(C::new(-alpha * alpha, 0.0));
        let diff = l.sub(&want).unwrap();
        let scale = f.coeff_scale() * alpha * alpha;
        for t in diff.terms() {
            assert!(
                t.coeff.norm() <= 1e-13 * scale,
                "residual term {}",
                t.describe()
            );
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        // A mixed term exercising every branch of the derivative rule.
        let f = ClosedFormField::new(vec![Term::new(
            C::new(0.7, -0.3),
            1,
            DirMono([1, 0, 0]),
            0.9,
            [0.2, 0.0, -0.5],
        )]);
        let x = [0.8, -0.45, 1.2];
        let h = 1e-6;
        for a in 0..3 {
            let g = f.gradient(a).unwrap().sample(x).unwrap();
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            let fd = (f.sample(xp).unwrap() - f.sample(xm).unwrap()) / (2.0 * h);
            assert_relative_eq!(g.re, fd.re, epsilon = 1e-8, max_relative = 1e-8);
            assert_relative_eq!(g.im, fd.im, epsilon = 1e-8, max_relative = 1e-8);
        }
    }

    #[test]
    fn parity_flips_odd_content() {
        let f = ClosedFormField::new(vec![Term::new(
            C::new(1.0, 0.0),
            0,
            DirMono([0, 0, 1]),
            0.8,
            [0.1, 0.0, 0.0],
        )]);
        let p = f.parity();
        let x = [0.3, -0.7, 0.9];
        let direct = f.sample([-x[0], -x[1], -x[2]]).unwrap();
        let via = p.sample(x).unwrap();
        assert_relative_eq!(direct.re, via.re, epsilon = 1e-14);
        assert_relative_eq!(direct.im, via.im, epsilon = 1e-14);
    }

    #[test]
    fn conjugate_samples_conjugate() {
        let f = sinc_field(1.1, [0.0, 0.4, 0.0]);
        let x = [0.2, 0.5, -0.3];
        let a = f.sample(x).unwrap();
        let b = f.conj().sample(x).unwrap();
        assert_relative_eq!(a.re, b.re, epsilon = 1e-14);
        assert_relative_eq!(a.im, -b.im, epsilon = 1e-14);
    }

    #[test]
    fn product_of_conjugate_pair_is_modulus_squared() {
        let f = sinc_field(0.9, [0.0, 0.0, 0.25]);
        let m = f.conj().mul(&f).unwrap();
        let x = [1.4, 0.2, -0.6];
        let direct = f.sample(x).unwrap().norm_sqr();
        let via = m.sample(x).unwrap();
        assert_relative_eq!(via.re, direct, epsilon = 1e-13, max_relative = 1e-12);
        assert_relative_eq!(via.im, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn degree_cap_enforced_on_products() {
        let quartic = ClosedFormField::new(vec![Term::new(
            C::new(1.0, 0.0),
            0,
            DirMono([2, 2, 0]),
            0.0,
            [0.0; 3],
        )]);
        assert!(matches!(
            quartic.mul(&quartic),
            Err(WaveError::MonomialDegreeTooHigh { .. })
        ));
    }

    #[test]
    fn off_center_field_rejects_radial_ops_but_samples() {
        let f = sinc_field(1.0, [0.0; 3]).with_center([0.0, 0.0, 1.5]);
        assert!(matches!(f.mul_r(), Err(WaveError::OffCenterField { .. })));
        // Sampling at the (moved) center gives the origin limit α = 1.
        let v = f.sample([0.0, 0.0, 1.5]).unwrap();
        assert_relative_eq!(v.re, 1.0, epsilon = 1e-12);
        // Gradients still work off-center.
        assert!(f.gradient(2).is_ok());
    }
}
