//! Closed-form generating functions and the beam families derived from them.
//!
//! Every family is a solution of the Klein-Gordon equation
//! `(∂t² − ∇² + m²)f = 0`:
//!
//! * `g_lg` — a Gaussian generator; repeated `x₊`/`x₋` derivatives produce the
//!   Laguerre-Gauss beams `f_lg`, and `x`/`y` derivatives the Hermite-Gauss
//!   beams `f_hg`.
//! * `g_exp` — an exponential-kernel generator whose `x₋` derivatives give
//!   vortex beams with exponential transverse fall-off (`f_exp`).
//! * `g_md` — a Macdonald-kernel generator.
//! * `g_b`, `g_bg` — plane-wave and displaced-Gaussian kernels carrying an
//!   angle parameter; integrating `e^{ilϕ}·G` over the angle yields the Bessel
//!   beams `f_bessel` and Bessel-Gauss beams `f_bg`.
//!
//! Phase and normalization conventions are fixed (including the `2π` and
//! `(−i)^l` factors of the Bessel-Gauss family); no field is re-normalized to
//! unit norm. Principal square roots are used throughout, with the validity
//! of the branch choice asserted at evaluation time.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::construct::{self, ContourTuning};
use crate::coords::{to_lightcone, OffSliceTransverse, SpacetimePoint};
use crate::error::Error;
use crate::specfun::{self, SeriesControl};

/// Shared physical parameters in natural units `ħ = c = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamPhysical {
    /// Energy-like parameter in the phase split, `E > 0`.
    pub energy: f64,
    /// Mass, `m ≥ 0`.
    pub mass: f64,
    /// Beam waist parameter, `w₀ > 0`.
    pub waist: f64,
}

impl BeamPhysical {
    pub fn new(energy: f64, mass: f64, waist: f64) -> Result<Self, Error> {
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::invalid("energy", format!("must be > 0, got {energy}")));
        }
        if !(mass >= 0.0) || !mass.is_finite() {
            return Err(Error::invalid("mass", format!("must be >= 0, got {mass}")));
        }
        if !(waist > 0.0) || !waist.is_finite() {
            return Err(Error::invalid("waist", format!("must be > 0, got {waist}")));
        }
        Ok(BeamPhysical {
            energy,
            mass,
            waist,
        })
    }
}

/// Laguerre-Gauss indices: radial `n ≥ 0`, azimuthal `l ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LGIndices {
    pub n: u32,
    pub l: u32,
}

/// Hermite-Gauss indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HGIndices {
    pub mx: u32,
    pub ny: u32,
}

/// Exponential-family parameters: longitudinal wavenumber `q` and the number
/// of `x₋` derivatives `k` applied to the generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpParams {
    pub q: f64,
    pub k: u32,
}

/// Bessel beam parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselParams {
    pub p_perp: f64,
    pub p_z: f64,
    pub l: i32,
}

impl BesselParams {
    pub fn new(p_perp: f64, p_z: f64, l: i32) -> Result<Self, Error> {
        if !(p_perp > 0.0) {
            return Err(Error::invalid(
                "p_perp",
                format!("must be > 0, got {p_perp}"),
            ));
        }
        Ok(BesselParams { p_perp, p_z, l })
    }
}

/// Bessel-Gauss parameters: displacement `b ≥ 0` and angular order `l ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BGParams {
    pub b: f64,
    pub l: u32,
}

impl BGParams {
    pub fn new(b: f64, l: u32) -> Result<Self, Error> {
        if !(b >= 0.0) {
            return Err(Error::invalid("b", format!("must be >= 0, got {b}")));
        }
        Ok(BGParams { b, l })
    }
}

/// Complex envelope `a(t₊) = w₀² + 2i t₊ / E`.
///
/// Its real part is always `w₀² > 0`, so `a` never vanishes and `√a`, `1/a`
/// are branch-safe everywhere.
#[inline]
pub fn envelope_a(t_plus: f64, phys: &BeamPhysical) -> Complex64 {
    Complex64::new(
        phys.waist * phys.waist,
        2.0 * t_plus / phys.energy,
    )
}

/// The longitudinal/temporal phase factor `exp(−iEt₋/2)·exp(−i m² t₊ / 2E)`.
#[inline]
fn phase_prefactor(t_plus: f64, t_minus: f64, phys: &BeamPhysical) -> Complex64 {
    let phase = -(phys.energy * t_minus / 2.0
        + phys.mass * phys.mass * t_plus / (2.0 * phys.energy));
    Complex64::from_polar(1.0, phase)
}

/// Shared Gaussian core `phases · exp(−arg/a) / a` with `arg` the transverse
/// exponent numerator.
#[inline]
fn gaussian_core(arg: Complex64, t_plus: f64, t_minus: f64, phys: &BeamPhysical) -> Complex64 {
    let a = envelope_a(t_plus, phys);
    let pre = phase_prefactor(t_plus, t_minus, phys);
    (pre * (-arg / a).exp()) / a
}

/// Gaussian generating function evaluated at a real point.
pub fn g_lg(p: SpacetimePoint, phys: &BeamPhysical) -> Complex64 {
    let lc = to_lightcone(p);
    gaussian_core(
        Complex64::new(p.rho_sq(), 0.0),
        lc.t_plus,
        lc.t_minus,
        phys,
    )
}

/// Gaussian generating function with independent transverse complex
/// coordinates; entire in both `x₊` and `x₋`.
pub fn g_lg_offslice(
    tr: OffSliceTransverse,
    t_plus: f64,
    t_minus: f64,
    phys: &BeamPhysical,
) -> Complex64 {
    gaussian_core(tr.x_plus * tr.x_minus, t_plus, t_minus, phys)
}

/// Laguerre-Gauss beam of radial index `n` and vortex charge `l`.
pub fn f_lg(idx: LGIndices, p: SpacetimePoint, phys: &BeamPhysical) -> Complex64 {
    let lc = to_lightcone(p);
    let a = envelope_a(lc.t_plus, phys);
    let pre = phase_prefactor(lc.t_plus, lc.t_minus, phys);
    let w = Complex64::new(p.rho_sq(), 0.0) / a;
    let lag = specfun::laguerre(idx.n, idx.l, w);
    (((pre * lc.x_plus.powu(idx.l)) * (-w).exp()) * lag) / a.powu(idx.n + idx.l + 1)
}

/// The same Gaussian generator viewed as a function of `x` and `y`;
/// numerically identical to [`g_lg`] on real points.
#[inline]
pub fn g_hg(p: SpacetimePoint, phys: &BeamPhysical) -> Complex64 {
    g_lg(p, phys)
}

/// Holomorphic extension of the Gaussian generator to complex `x` and `y`.
pub fn g_hg_xy(x: Complex64, y: Complex64, z: f64, t: f64, phys: &BeamPhysical) -> Complex64 {
    gaussian_core(x * x + y * y, t + z, t - z, phys)
}

/// Hermite-Gauss beam of indices `(m, n)`.
///
/// `a^{(m+n)/2}` is taken as the `(m+n)`-th power of the principal `√a`,
/// which is well-defined since `Re a > 0`; the value is independent of the
/// branch because flipping `√a` flips both the Hermite arguments and the
/// power by compensating signs.
pub fn f_hg(idx: HGIndices, p: SpacetimePoint, phys: &BeamPhysical) -> Complex64 {
    let lc = to_lightcone(p);
    let a = envelope_a(lc.t_plus, phys);
    let sa = a.sqrt();
    let hx = specfun::hermite(idx.mx, Complex64::new(p.x, 0.0) / sa);
    let hy = specfun::hermite(idx.ny, Complex64::new(p.y, 0.0) / sa);
    hx * hy * g_hg(p, phys) / sa.powu(idx.mx + idx.ny)
}

/// `u²` for the exponential generator: `(w₀ + iκt)² + κ² x₊x₋`, `κ² = m²+q²`.
#[inline]
fn exp_u_sq(xpxm: Complex64, t: f64, q: f64, phys: &BeamPhysical) -> Complex64 {
    let kappa_sq = phys.mass * phys.mass + q * q;
    let w = Complex64::new(phys.waist, kappa_sq.sqrt() * t);
    w * w + kappa_sq * xpxm
}

/// Exponential generating function `e^{iqz} e^{−u}/u` at a real point.
///
/// On the real slice `Im u² = 2w₀κt` vanishes only at `t = 0` where
/// `u² > 0`, so the principal root always has `Re u > 0`; this is asserted.
pub fn g_exp(p: SpacetimePoint, q: f64, phys: &BeamPhysical) -> Complex64 {
    let u2 = exp_u_sq(Complex64::new(p.rho_sq(), 0.0), p.t, q, phys);
    let u = u2.sqrt();
    assert!(u.re > 0.0, "g_exp: principal root left the right half-plane");
    Complex64::from_polar(1.0, q * p.z) * (-u).exp() / u
}

/// Off-slice exponential generator. Reports a branch-cut violation when `u²`
/// lands on the closed negative real axis.
pub fn g_exp_offslice(
    tr: OffSliceTransverse,
    t: f64,
    z: f64,
    q: f64,
    phys: &BeamPhysical,
) -> Result<Complex64, Error> {
    let u2 = exp_u_sq(tr.x_plus * tr.x_minus, t, q, phys);
    if u2.im == 0.0 && u2.re <= 0.0 {
        return Err(Error::BranchCut(format!(
            "u² = {u2} on the closed negative real axis at x₊ = {}, x₋ = {}",
            tr.x_plus, tr.x_minus
        )));
    }
    let u = u2.sqrt();
    Ok(Complex64::from_polar(1.0, q * z) * (-u).exp() / u)
}

/// `k`-th `x₋` derivative of the exponential generator, evaluated by contour
/// differentiation. Convention: no factorial prefactor, `f_exp^k = ∂^k_{x₋} G`.
///
/// On the beam axis (`x₊ = 0`) the generator does not depend on `x₋` and the
/// derivative vanishes; it is evaluated at a transverse offset of `1e-8` with
/// correspondingly reduced accuracy.
pub fn f_exp(
    k: u32,
    p: SpacetimePoint,
    q: f64,
    phys: &BeamPhysical,
    tuning: &ContourTuning,
) -> Result<Complex64, Error> {
    if k < 1 {
        return Err(Error::invalid("k", "derivative order must be >= 1"));
    }
    construct::exp_derivative(k, p, q, phys, tuning)
}

/// Closed form of the first `x₋` derivative of the exponential generator,
/// `−e^{iqz} e^{−u} (1+u) κ² x₊ / (2u³)` — used as a cross-check of the
/// contour engine.
pub fn f_exp1_closed(p: SpacetimePoint, q: f64, phys: &BeamPhysical) -> Complex64 {
    let lc = to_lightcone(p);
    let kappa_sq = phys.mass * phys.mass + q * q;
    let u2 = exp_u_sq(Complex64::new(p.rho_sq(), 0.0), p.t, q, phys);
    let u = u2.sqrt();
    let phase_z = Complex64::from_polar(1.0, q * p.z);
    -phase_z * (-u).exp() * (1.0 + u) * kappa_sq * lc.x_plus / (2.0 * u * u2)
}

/// Macdonald generating function `m K₁(m s)/s` with
/// `s = √((w₀+it)² + ρ² + z²)`. Requires `m > 0`.
///
/// On real points `s² = (w₀² − t² + ρ² + z²) + 2i w₀ t` never reaches the
/// closed negative real axis, so `Re s > 0` and the `K₁` domain requirement
/// holds automatically; this is asserted.
pub fn g_md(p: SpacetimePoint, phys: &BeamPhysical) -> Result<Complex64, Error> {
    if !(phys.mass > 0.0) {
        return Err(Error::invalid("mass", "the Macdonald family requires m > 0"));
    }
    let w = Complex64::new(phys.waist, p.t);
    let s2 = w * w + Complex64::new(p.rho_sq() + p.z * p.z, 0.0);
    let s = s2.sqrt();
    assert!(s.re > 0.0, "g_md: principal root left the right half-plane");
    let k1 = specfun::macdonald_k1(phys.mass * s)?;
    Ok(phys.mass * k1 / s)
}

/// Plane-wave kernel of the Bessel construction: a pure phase
/// `exp(−iΩt + i p_z z + i p⊥ ρ cos(φ − ϕ))` with `Ω = √(p⊥² + p_z² + m²)`.
pub fn g_b(p: SpacetimePoint, prm: &BesselParams, mass: f64, varphi: f64) -> Complex64 {
    let lc = to_lightcone(p);
    let omega = (prm.p_perp * prm.p_perp + prm.p_z * prm.p_z + mass * mass).sqrt();
    let phase =
        -omega * p.t + prm.p_z * p.z + prm.p_perp * lc.rho * (lc.phi - varphi).cos();
    Complex64::from_polar(1.0, phase)
}

/// Bessel beam: the closed form `2π i^l e^{ilφ} J_l(p⊥ρ) · e^{−iΩt + i p_z z}`
/// of the angular integral of `e^{ilϕ}·g_b`.
pub fn f_bessel(prm: &BesselParams, p: SpacetimePoint, mass: f64) -> Result<Complex64, Error> {
    let lc = to_lightcone(p);
    let omega = (prm.p_perp * prm.p_perp + prm.p_z * prm.p_z + mass * mass).sqrt();
    let j = specfun::bessel_j(
        prm.l,
        Complex64::new(prm.p_perp * lc.rho, 0.0),
        &SeriesControl::default(),
    )?;
    let il = Complex64::i().powi(prm.l);
    let phase_l = Complex64::from_polar(1.0, prm.l as f64 * lc.phi);
    let carrier = Complex64::from_polar(1.0, -omega * p.t + prm.p_z * p.z);
    Ok((((il * phase_l) * j) * carrier) * TAU)
}

/// Displaced-Gaussian kernel of the Bessel-Gauss construction.
pub fn g_bg(p: SpacetimePoint, b: f64, varphi: f64, phys: &BeamPhysical) -> Complex64 {
    let lc = to_lightcone(p);
    let arg = Complex64::new(
        p.rho_sq() - b * b,
        2.0 * b * lc.rho * (lc.phi - varphi).cos(),
    );
    gaussian_core(arg, lc.t_plus, lc.t_minus, phys)
}

/// Bessel-Gauss beam: the closed form
/// `2π (−i)^l e^{ilφ} · phases · exp(−(ρ²−b²)/a) · J_l(2bρ/a) / a`
/// of the angular integral of `e^{ilϕ}·g_bg`.
pub fn f_bg(prm: &BGParams, p: SpacetimePoint, phys: &BeamPhysical) -> Result<Complex64, Error> {
    let lc = to_lightcone(p);
    let a = envelope_a(lc.t_plus, phys);
    let core = gaussian_core(
        Complex64::new(p.rho_sq() - prm.b * prm.b, 0.0),
        lc.t_plus,
        lc.t_minus,
        phys,
    );
    let j_arg = 2.0 * prm.b * lc.rho / a;
    let j = specfun::bessel_j(prm.l as i32, j_arg, &SeriesControl::default())?;
    let mil = (-Complex64::i()).powi(prm.l as i32);
    let phase_l = Complex64::from_polar(1.0, prm.l as f64 * lc.phi);
    Ok((((core * phase_l) * mil) * j) * TAU)
}
