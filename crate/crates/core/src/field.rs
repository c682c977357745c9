//! Every beam family behind one evaluatable type.
//!
//! A [`Beam`] is the universal currency between the construction, verification
//! and CLI layers: a deterministic map from spacetime points to complex
//! amplitudes, plus enough metadata to reconstruct it from a text record.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::beams::{
    self, BGParams, BeamPhysical, BesselParams, ExpParams, HGIndices, LGIndices,
};
use crate::construct::ContourTuning;
use crate::coords::SpacetimePoint;
use crate::error::Error;

/// Per-axis sampling ranges used by verification campaigns. Kept inside the
/// regimes where the special-function kernels, the contour engines, and the
/// finite-difference verifier are validated.
#[derive(Clone, Copy, Debug)]
pub struct SampleBox {
    pub t: (f64, f64),
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub z: (f64, f64),
}

impl SampleBox {
    const DEFAULT: SampleBox = SampleBox {
        t: (-5.0, 5.0),
        x: (-3.5, 3.5),
        y: (-3.5, 3.5),
        z: (-5.0, 5.0),
    };

    /// Tighter box for the exponential and Macdonald kernels, whose contour
    /// conditioning and `K₁` argument growth favour moderate excursions.
    const COMPACT: SampleBox = SampleBox {
        t: (-2.0, 2.0),
        x: (-2.0, 2.0),
        y: (-2.0, 2.0),
        z: (-3.0, 3.0),
    };
}

/// Peak local frequency the default order-8, step-`1e-2` verifier resolves
/// with two orders of margin below its `1e-6` tolerance
/// (`(κh)⁸/3150 ≈ 2e-7` at `κ = 40`).
const STENCIL_BANDWIDTH: f64 = 40.0;

/// Transverse sampling extent for Gaussian-envelope families, derived from a
/// local-frequency budget.
///
/// The time oscillation of these fields has three parts: the phase split
/// `E/2 + m²/2E`, the envelope prefactor `a^{−(deg+1)}` contributing
/// `2(deg+1)/(E|a|²)·|a|`, and the transverse exponent `(ρ+shift)²/a`
/// contributing `2(ρ+shift)²/(E|a|²)` (worst at `|a| = w₀²`), amplified by
/// polynomial curvature for high indices. The box solves that budget for ρ so
/// the pinned verification stencil stays inside its resolvable bandwidth.
fn gaussian_envelope_box(phys: &BeamPhysical, deg: u32, shift: f64) -> SampleBox {
    let e = phys.energy;
    let w2 = phys.waist * phys.waist;
    let degf = deg as f64;
    let phase = e / 2.0 + phys.mass * phys.mass / (2.0 * e);
    let prefactor = 2.0 * (degf + 1.0) / (e * w2);
    let budget = (STENCIL_BANDWIDTH - phase - prefactor).max(0.0);
    let rho_max = (budget * e * w2 * w2 / (2.0 * (1.0 + 0.35 * degf))).sqrt() - shift;
    let floor = 0.05 * phys.waist.min(1.0);
    let half = (rho_max / std::f64::consts::SQRT_2).clamp(floor, 3.5);
    SampleBox {
        t: (-5.0, 5.0),
        x: (-half, half),
        y: (-half, half),
        z: (-5.0, 5.0),
    }
}

/// A beam field: family + parameters, evaluatable anywhere.
#[derive(Clone, Debug)]
pub enum Beam {
    GaussianGenerator {
        phys: BeamPhysical,
    },
    LaguerreGauss {
        idx: LGIndices,
        phys: BeamPhysical,
    },
    HermiteGenerator {
        phys: BeamPhysical,
    },
    HermiteGauss {
        idx: HGIndices,
        phys: BeamPhysical,
    },
    ExpGenerator {
        q: f64,
        phys: BeamPhysical,
    },
    ExpDerivative {
        prm: ExpParams,
        phys: BeamPhysical,
        tuning: ContourTuning,
    },
    MacdonaldGenerator {
        phys: BeamPhysical,
    },
    BesselGenerator {
        prm: BesselParams,
        mass: f64,
        varphi: f64,
    },
    BesselBeam {
        prm: BesselParams,
        mass: f64,
    },
    BesselGaussGenerator {
        b: f64,
        varphi: f64,
        phys: BeamPhysical,
    },
    BesselGauss {
        prm: BGParams,
        phys: BeamPhysical,
    },
}

/// The family identifiers accepted by the CLI and the text records.
pub const FAMILY_IDS: &[&str] = &[
    "g_lg", "lg", "g_hg", "hg", "g_exp", "exp", "g_md", "g_b", "bessel", "g_bg", "bg",
];

impl Beam {
    /// Evaluate the field. Deterministic: the same point always yields a
    /// bit-identical amplitude.
    pub fn eval(&self, p: SpacetimePoint) -> Result<Complex64, Error> {
        match self {
            Beam::GaussianGenerator { phys } => Ok(beams::g_lg(p, phys)),
            Beam::LaguerreGauss { idx, phys } => Ok(beams::f_lg(*idx, p, phys)),
            Beam::HermiteGenerator { phys } => Ok(beams::g_hg(p, phys)),
            Beam::HermiteGauss { idx, phys } => Ok(beams::f_hg(*idx, p, phys)),
            Beam::ExpGenerator { q, phys } => Ok(beams::g_exp(p, *q, phys)),
            Beam::ExpDerivative { prm, phys, tuning } => {
                beams::f_exp(prm.k, p, prm.q, phys, tuning)
            }
            Beam::MacdonaldGenerator { phys } => beams::g_md(p, phys),
            Beam::BesselGenerator { prm, mass, varphi } => {
                Ok(beams::g_b(p, prm, *mass, *varphi))
            }
            Beam::BesselBeam { prm, mass } => beams::f_bessel(prm, p, *mass),
            Beam::BesselGaussGenerator { b, varphi, phys } => {
                Ok(beams::g_bg(p, *b, *varphi, phys))
            }
            Beam::BesselGauss { prm, phys } => beams::f_bg(prm, p, phys),
        }
    }

    /// The mass entering this field's wave operator.
    pub fn mass(&self) -> f64 {
        match self {
            Beam::GaussianGenerator { phys }
            | Beam::LaguerreGauss { phys, .. }
            | Beam::HermiteGenerator { phys }
            | Beam::HermiteGauss { phys, .. }
            | Beam::ExpGenerator { phys, .. }
            | Beam::ExpDerivative { phys, .. }
            | Beam::MacdonaldGenerator { phys }
            | Beam::BesselGaussGenerator { phys, .. }
            | Beam::BesselGauss { phys, .. } => phys.mass,
            Beam::BesselGenerator { mass, .. } | Beam::BesselBeam { mass, .. } => *mass,
        }
    }

    /// Rotation eigenphase order of the `e^{i·order·φ}` factor, when the
    /// family carries one.
    pub fn oam_order(&self) -> Option<i32> {
        match self {
            Beam::LaguerreGauss { idx, .. } => Some(idx.l as i32),
            Beam::ExpDerivative { prm, .. } => Some(prm.k as i32),
            Beam::BesselBeam { prm, .. } => Some(prm.l),
            Beam::BesselGauss { prm, .. } => Some(prm.l as i32),
            _ => None,
        }
    }

    pub fn family_id(&self) -> &'static str {
        match self {
            Beam::GaussianGenerator { .. } => "g_lg",
            Beam::LaguerreGauss { .. } => "lg",
            Beam::HermiteGenerator { .. } => "g_hg",
            Beam::HermiteGauss { .. } => "hg",
            Beam::ExpGenerator { .. } => "g_exp",
            Beam::ExpDerivative { .. } => "exp",
            Beam::MacdonaldGenerator { .. } => "g_md",
            Beam::BesselGenerator { .. } => "g_b",
            Beam::BesselBeam { .. } => "bessel",
            Beam::BesselGaussGenerator { .. } => "g_bg",
            Beam::BesselGauss { .. } => "bg",
        }
    }

    pub fn sample_box(&self) -> SampleBox {
        match self {
            Beam::GaussianGenerator { phys } | Beam::HermiteGenerator { phys } => {
                gaussian_envelope_box(phys, 0, 0.0)
            }
            Beam::LaguerreGauss { idx, phys } => {
                gaussian_envelope_box(phys, idx.n + idx.l, 0.0)
            }
            Beam::HermiteGauss { idx, phys } => {
                gaussian_envelope_box(phys, idx.mx + idx.ny, 0.0)
            }
            Beam::BesselGaussGenerator { b, phys, .. } => gaussian_envelope_box(phys, 0, *b),
            Beam::BesselGauss { prm, phys } => gaussian_envelope_box(phys, prm.l, prm.b),
            // the exponential kernel's time oscillation steepens like
            // κ^{3/2}·√(t/2w₀) near the ρ ≈ |t| locus, so the campaign's
            // time extent shrinks with κ
            Beam::ExpGenerator { q, phys } => {
                let kappa = (phys.mass * phys.mass + q * q).sqrt();
                let t_half = (2.0 * phys.waist * (32.0 / (3.75 * kappa.powf(1.5))).powi(2))
                    .clamp(0.2, 2.0);
                SampleBox {
                    t: (-t_half, t_half),
                    x: (-2.0, 2.0),
                    y: (-2.0, 2.0),
                    z: (-3.0, 3.0),
                }
            }
            Beam::MacdonaldGenerator { .. } => SampleBox::COMPACT,
            // the k-fold derivative sharpens the time oscillation near the
            // |t| ≈ ρ locus, so the campaign box stays closer to the waist
            Beam::ExpDerivative { .. } => SampleBox {
                t: (-1.0, 1.0),
                x: (-2.0, 2.0),
                y: (-2.0, 2.0),
                z: (-3.0, 3.0),
            },
            _ => SampleBox::DEFAULT,
        }
    }

    /// Parameters as ordered key/value text pairs; floats are formatted with
    /// the shortest round-trip representation.
    pub fn param_pairs(&self) -> Vec<(&'static str, String)> {
        fn f(v: f64) -> String {
            format!("{v:?}")
        }
        fn phys_pairs(out: &mut Vec<(&'static str, String)>, phys: &BeamPhysical) {
            out.push(("E", f(phys.energy)));
            out.push(("m", f(phys.mass)));
            out.push(("w0", f(phys.waist)));
        }
        let mut out = Vec::new();
        match self {
            Beam::GaussianGenerator { phys }
            | Beam::HermiteGenerator { phys } => phys_pairs(&mut out, phys),
            Beam::LaguerreGauss { idx, phys } => {
                out.push(("n", idx.n.to_string()));
                out.push(("l", idx.l.to_string()));
                phys_pairs(&mut out, phys);
            }
            Beam::HermiteGauss { idx, phys } => {
                out.push(("mx", idx.mx.to_string()));
                out.push(("ny", idx.ny.to_string()));
                phys_pairs(&mut out, phys);
            }
            Beam::ExpGenerator { q, phys } => {
                out.push(("q", f(*q)));
                phys_pairs(&mut out, phys);
            }
            Beam::ExpDerivative { prm, phys, .. } => {
                out.push(("k", prm.k.to_string()));
                out.push(("q", f(prm.q)));
                phys_pairs(&mut out, phys);
            }
            Beam::MacdonaldGenerator { phys } => phys_pairs(&mut out, phys),
            Beam::BesselGenerator { prm, mass, varphi } => {
                out.push(("p_perp", f(prm.p_perp)));
                out.push(("p_z", f(prm.p_z)));
                out.push(("l", prm.l.to_string()));
                out.push(("m", f(*mass)));
                out.push(("varphi", f(*varphi)));
            }
            Beam::BesselBeam { prm, mass } => {
                out.push(("p_perp", f(prm.p_perp)));
                out.push(("p_z", f(prm.p_z)));
                out.push(("l", prm.l.to_string()));
                out.push(("m", f(*mass)));
            }
            Beam::BesselGaussGenerator { b, varphi, phys } => {
                out.push(("b", f(*b)));
                out.push(("varphi", f(*varphi)));
                phys_pairs(&mut out, phys);
            }
            Beam::BesselGauss { prm, phys } => {
                out.push(("b", f(prm.b)));
                out.push(("l", prm.l.to_string()));
                phys_pairs(&mut out, phys);
            }
        }
        out
    }

    /// Rebuild a beam from a family id and a key/value parameter map — the
    /// single construction path used by both the CLI flags and the metadata
    /// headers, so the two cannot drift apart.
    pub fn from_params(family: &str, params: &BTreeMap<String, String>) -> Result<Beam, Error> {
        fn get_f64(m: &BTreeMap<String, String>, key: &'static str, default: Option<f64>)
            -> Result<f64, Error>
        {
            match m.get(key) {
                Some(s) => s.parse::<f64>().map_err(|_| {
                    Error::invalid("param", format!("`{key}` is not a number: {s}"))
                }),
                None => default.ok_or_else(|| {
                    Error::invalid("param", format!("missing required parameter `{key}`"))
                }),
            }
        }
        fn get_u32(m: &BTreeMap<String, String>, key: &'static str, default: Option<u32>)
            -> Result<u32, Error>
        {
            match m.get(key) {
                Some(s) => s.parse::<u32>().map_err(|_| {
                    Error::invalid(
                        "param",
                        format!("`{key}` is not a non-negative integer: {s}"),
                    )
                }),
                None => default.ok_or_else(|| {
                    Error::invalid("param", format!("missing required parameter `{key}`"))
                }),
            }
        }
        fn get_i32(m: &BTreeMap<String, String>, key: &'static str, default: Option<i32>)
            -> Result<i32, Error>
        {
            match m.get(key) {
                Some(s) => s.parse::<i32>().map_err(|_| {
                    Error::invalid("param", format!("`{key}` is not an integer: {s}"))
                }),
                None => default.ok_or_else(|| {
                    Error::invalid("param", format!("missing required parameter `{key}`"))
                }),
            }
        }
        let phys = |m: &BTreeMap<String, String>| -> Result<BeamPhysical, Error> {
            BeamPhysical::new(
                get_f64(m, "E", Some(2.0))?,
                get_f64(m, "m", Some(1.0))?,
                get_f64(m, "w0", Some(1.0))?,
            )
        };

        match family {
            "g_lg" => Ok(Beam::GaussianGenerator { phys: phys(params)? }),
            "lg" => Ok(Beam::LaguerreGauss {
                idx: LGIndices {
                    n: get_u32(params, "n", Some(0))?,
                    l: get_u32(params, "l", Some(0))?,
                },
                phys: phys(params)?,
            }),
            "g_hg" => Ok(Beam::HermiteGenerator { phys: phys(params)? }),
            "hg" => Ok(Beam::HermiteGauss {
                idx: HGIndices {
                    mx: get_u32(params, "mx", Some(0))?,
                    ny: get_u32(params, "ny", Some(0))?,
                },
                phys: phys(params)?,
            }),
            "g_exp" => Ok(Beam::ExpGenerator {
                q: get_f64(params, "q", Some(1.0))?,
                phys: phys(params)?,
            }),
            "exp" => {
                let k = get_u32(params, "k", Some(1))?;
                if k < 1 {
                    return Err(Error::invalid("k", "derivative order must be >= 1"));
                }
                Ok(Beam::ExpDerivative {
                    prm: ExpParams {
                        q: get_f64(params, "q", Some(1.0))?,
                        k,
                    },
                    phys: phys(params)?,
                    tuning: ContourTuning::default(),
                })
            }
            "g_md" => {
                let phys = phys(params)?;
                if !(phys.mass > 0.0) {
                    return Err(Error::invalid("m", "the Macdonald family requires m > 0"));
                }
                Ok(Beam::MacdonaldGenerator { phys })
            }
            "g_b" => Ok(Beam::BesselGenerator {
                prm: BesselParams::new(
                    get_f64(params, "p_perp", Some(1.0))?,
                    get_f64(params, "p_z", Some(1.0))?,
                    get_i32(params, "l", Some(0))?,
                )?,
                mass: get_f64(params, "m", Some(1.0))?,
                varphi: get_f64(params, "varphi", Some(0.0))?,
            }),
            "bessel" => Ok(Beam::BesselBeam {
                prm: BesselParams::new(
                    get_f64(params, "p_perp", Some(1.0))?,
                    get_f64(params, "p_z", Some(1.0))?,
                    get_i32(params, "l", Some(0))?,
                )?,
                mass: get_f64(params, "m", Some(1.0))?,
            }),
            "g_bg" => Ok(Beam::BesselGaussGenerator {
                b: get_f64(params, "b", Some(1.0))?,
                varphi: get_f64(params, "varphi", Some(0.0))?,
                phys: phys(params)?,
            }),
            "bg" => Ok(Beam::BesselGauss {
                prm: BGParams::new(
                    get_f64(params, "b", Some(1.0))?,
                    get_u32(params, "l", Some(0))?,
                )?,
                phys: phys(params)?,
            }),
            other => Err(Error::invalid(
                "family",
                format!(
                    "unknown family `{other}`; valid families: {}",
                    FAMILY_IDS.join(", ")
                ),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn params_roundtrip_through_text() {
        let beams: Vec<Beam> = vec![
            Beam::from_params("lg", &map(&[("n", "2"), ("l", "3"), ("E", "4.5")])).unwrap(),
            Beam::from_params("bg", &map(&[("b", "1.25"), ("l", "2")])).unwrap(),
            Beam::from_params("bessel", &map(&[("p_perp", "2.0"), ("l", "-3")])).unwrap(),
            Beam::from_params("exp", &map(&[("k", "2"), ("q", "0.75")])).unwrap(),
            Beam::from_params("g_md", &map(&[("m", "2.5")])).unwrap(),
        ];
        for beam in beams {
            let pairs = beam.param_pairs();
            let m: BTreeMap<String, String> =
                pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            let back = Beam::from_params(beam.family_id(), &m).unwrap();
            assert_eq!(back.param_pairs(), beam.param_pairs());
            assert_eq!(back.family_id(), beam.family_id());
        }
    }

    #[test]
    fn rejects_unknown_family_and_bad_params() {
        assert!(Beam::from_params("nope", &map(&[])).is_err());
        assert!(Beam::from_params("g_md", &map(&[("m", "0")])).is_err());
        assert!(Beam::from_params("exp", &map(&[("k", "0")])).is_err());
        assert!(Beam::from_params("bessel", &map(&[("p_perp", "-1")])).is_err());
        assert!(Beam::from_params("lg", &map(&[("n", "-1")])).is_err());
        assert!(Beam::from_params("lg", &map(&[("E", "abc")])).is_err());
    }

    #[test]
    fn evaluation_is_deterministic() {
        let beam = Beam::from_params("lg", &map(&[("n", "1"), ("l", "2")])).unwrap();
        let p = SpacetimePoint::new(0.3, 1.1, -0.7, 0.9);
        let a = beam.eval(p).unwrap();
        let b = beam.eval(p).unwrap();
        assert_eq!(a, b);
    }
}
