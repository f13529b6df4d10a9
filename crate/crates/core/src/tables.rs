//! Reference tables shipped as CSV data.
//!
//! The files under `data/` are compiled in with `include_str!`; their bytes
//! are pinned by checksum in the tests. Printed typos are kept in a
//! `printed_as` column next to the corrected value.

use serde::Deserialize;
use std::f64::consts::PI;

use crate::{Error, Result, C64};

pub const ANGLES_CSV: &str = include_str!("../data/angles.csv");
pub const MARGULIS_CSV: &str = include_str!("../data/margulis_submultiple.csv");
pub const COMMUTATOR_23_CSV: &str = include_str!("../data/commutator_plane_23.csv");
pub const GAMMA3_CSV: &str = include_str!("../data/gamma3.csv");
pub const GAMMA4_CSV: &str = include_str!("../data/gamma4.csv");
pub const GAMMA5_CSV: &str = include_str!("../data/gamma5.csv");
pub const ARITH_P6_CSV: &str = include_str!("../data/arith_p6.csv");
pub const NONCOMPACT_CSV: &str = include_str!("../data/noncompact.csv");
pub const AXIAL_CSV: &str = include_str!("../data/axial_spectra.csv");
pub const AXIAL_THRESHOLDS_CSV: &str = include_str!("../data/axial_thresholds.csv");
pub const SPHERICAL_CSV: &str = include_str!("../data/spherical_distances.csv");
pub const NONTRIANGLE_CSV: &str = include_str!("../data/nontriangle_222n.csv");

/// All shipped files as (name, contents).
pub fn all_files() -> [(&'static str, &'static str); 12] {
    [
        ("angles.csv", ANGLES_CSV),
        ("margulis_submultiple.csv", MARGULIS_CSV),
        ("commutator_plane_23.csv", COMMUTATOR_23_CSV),
        ("gamma3.csv", GAMMA3_CSV),
        ("gamma4.csv", GAMMA4_CSV),
        ("gamma5.csv", GAMMA5_CSV),
        ("arith_p6.csv", ARITH_P6_CSV),
        ("noncompact.csv", NONCOMPACT_CSV),
        ("axial_spectra.csv", AXIAL_CSV),
        ("axial_thresholds.csv", AXIAL_THRESHOLDS_CSV),
        ("spherical_distances.csv", SPHERICAL_CSV),
        ("nontriangle_222n.csv", NONTRIANGLE_CSV),
    ]
}

fn load<T: for<'de> Deserialize<'de>>(name: &str, data: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(data.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::Data(format!("{name}: {e}")))
}

/// Parses an angle cell: decimals (`.955`), `0`, `pi/3`, `2pi/5`, `3pi/4`,
/// or `pi/n` with `n` supplied by the caller.
pub fn parse_angle(s: &str, n: Option<u32>) -> Result<f64> {
    let s = s.trim();
    if let Some(idx) = s.find("pi") {
        let k: f64 = match &s[..idx] {
            "" => 1.0,
            pre => pre.parse().map_err(|_| Error::Data(format!("bad angle {s}")))?,
        };
        let rest = &s[idx + 2..];
        if rest.is_empty() {
            return Ok(k * PI);
        }
        let den = rest
            .strip_prefix('/')
            .ok_or_else(|| Error::Data(format!("bad angle {s}")))?;
        let d = if den == "n" {
            n.ok_or_else(|| Error::Data(format!("angle {s} needs n")))? as f64
        } else {
            den.parse::<f64>().map_err(|_| Error::Data(format!("bad angle {s}")))?
        };
        return Ok(k * PI / d);
    }
    s.parse().map_err(|_| Error::Data(format!("bad angle {s}")))
}

/// Value of a closed-form sine tag as written in the angle tables.
pub fn sin_form_value(tag: &str) -> Result<f64> {
    let r5 = 5f64.sqrt();
    Ok(match tag {
        "0" => 0.0,
        "1" => 1.0,
        "sqrt(2/3)" => (2.0f64 / 3.0).sqrt(),
        "sqrt(1/3)" => (1.0f64 / 3.0).sqrt(),
        "sqrt((3-sqrt5)/6)" => ((3.0 - r5) / 6.0).sqrt(),
        "sqrt((3+sqrt5)/6)" => ((3.0 + r5) / 6.0).sqrt(),
        "1/sqrt2" => 0.5f64.sqrt(),
        "sqrt((5-sqrt5)/10)" => ((5.0 - r5) / 10.0).sqrt(),
        "sqrt((5+sqrt5)/10)" => ((5.0 + r5) / 10.0).sqrt(),
        "2/3" => 2.0 / 3.0,
        "2sqrt2/3" => 2.0 * 2f64.sqrt() / 3.0,
        "sqrt((10-2sqrt5)/15)" => ((10.0 - 2.0 * r5) / 15.0).sqrt(),
        "sqrt((10+2sqrt5)/15)" => ((10.0 + 2.0 * r5) / 15.0).sqrt(),
        "2/sqrt5" => 2.0 / r5,
        _ => return Err(Error::Data(format!("unknown sine form {tag}"))),
    })
}

#[derive(Debug, Clone, Deserialize)]
pub struct AngleRow {
    /// `2m`, `3m` or `remark`.
    pub table: String,
    pub p: u32,
    pub q: u32,
    pub sin_form: String,
    /// Sign of sin θ as printed; −1 means θ = π − arcsin.
    pub sign: i32,
    pub theta_printed: String,
    pub psi: String,
    pub group: String,
    /// Printed value where it was corrected.
    pub note: Option<String>,
}

impl AngleRow {
    /// θ from the closed form (the printed value is truncated).
    pub fn theta(&self) -> Result<f64> {
        let a = sin_form_value(&self.sin_form)?.clamp(-1.0, 1.0).asin();
        Ok(if self.sign < 0 { PI - a } else { a })
    }
}

pub fn angles() -> Result<Vec<AngleRow>> {
    load("angles.csv", ANGLES_CSV)
}

/// One row of the submultiple Margulis tables. Vertex labels in `pair_*`
/// name the two axes meeting there; an angle of `0` is an ideal vertex.
#[derive(Debug, Clone, Deserialize)]
pub struct MargulisRow {
    pub table: String,
    pub row: u32,
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
    pub pair_a: String,
    pub pair_b: String,
    pub pair_c: String,
    pub m_printed: f64,
    pub angle_a: String,
    pub angle_b: String,
    pub angle_c: String,
    pub psi_a: Option<String>,
    pub psi_b: Option<String>,
    pub psi_c: Option<String>,
    /// Rows with a `pi/n` entry describe a family; this is its smallest n.
    pub n_min: Option<u32>,
}

impl MargulisRow {
    pub fn orders(&self) -> [u32; 3] {
        [self.n1, self.n2, self.n3]
    }

    pub fn vertices(&self) -> [(&str, &str, Option<&str>); 3] {
        [
            (&self.pair_a, &self.angle_a, self.psi_a.as_deref()),
            (&self.pair_b, &self.angle_b, self.psi_b.as_deref()),
            (&self.pair_c, &self.angle_c, self.psi_c.as_deref()),
        ]
    }
}

pub fn margulis_rows() -> Result<Vec<MargulisRow>> {
    load("margulis_submultiple.csv", MARGULIS_CSV)
}

/// An arithmetic point: γ with its minimal polynomial.
#[derive(Debug, Clone, Deserialize)]
pub struct CommutatorRow {
    pub row: u32,
    pub polynomial: String,
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub covolume: f64,
    pub printed_as: Option<String>,
}

impl CommutatorRow {
    pub fn gamma(&self) -> C64 {
        C64::new(self.gamma_re, self.gamma_im)
    }
}

pub fn commutator_plane_23() -> Result<Vec<CommutatorRow>> {
    load("commutator_plane_23.csv", COMMUTATOR_23_CSV)
}

#[derive(Debug, Clone, Deserialize)]
pub struct Gamma3Row {
    pub i: u32,
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub polynomial: String,
    pub delta: f64,
    /// `?` in the source is kept verbatim; see [`Gamma3Row::discriminant_value`].
    pub discriminant: Option<String>,
    pub ramification: Option<String>,
    pub covolume: String,
}

impl Gamma3Row {
    pub fn gamma(&self) -> C64 {
        C64::new(self.gamma_re, self.gamma_im)
    }

    pub fn discriminant_value(&self) -> Option<i64> {
        self.discriminant.as_deref().and_then(|s| s.parse().ok())
    }

    pub fn covolume_value(&self) -> Option<f64> {
        self.covolume.parse().ok()
    }
}

pub fn gamma3() -> Result<Vec<Gamma3Row>> {
    load("gamma3.csv", GAMMA3_CSV)
}

/// Rows of the order-4 and order-5 tables. Order-5 polynomials are in z and
/// b (β = −4 sin²(π/5)).
#[derive(Debug, Clone, Deserialize)]
pub struct GammaRow {
    pub i: u32,
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub polynomial: String,
    pub delta: f64,
    #[serde(default)]
    pub printed_as: Option<String>,
}

impl GammaRow {
    pub fn gamma(&self) -> C64 {
        C64::new(self.gamma_re, self.gamma_im)
    }
}

pub fn gamma4() -> Result<Vec<GammaRow>> {
    load("gamma4.csv", GAMMA4_CSV)
}

pub fn gamma5() -> Result<Vec<GammaRow>> {
    load("gamma5.csv", GAMMA5_CSV)
}

/// p = q = 6 arithmetic groups. `field_polynomial` is the defining
/// polynomial of the invariant trace field, not of γ.
#[derive(Debug, Clone, Deserialize)]
pub struct ArithP6Row {
    pub gamma_label: String,
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub field_polynomial: String,
    pub description: String,
}

impl ArithP6Row {
    pub fn gamma(&self) -> C64 {
        C64::new(self.gamma_re, self.gamma_im)
    }
}

pub fn arith_p6() -> Result<Vec<ArithP6Row>> {
    load("arith_p6.csv", ARITH_P6_CSV)
}

/// Non-compact arithmetic groups with two elliptic generators; the trace
/// field is Q(√−d).
#[derive(Debug, Clone, Deserialize)]
pub struct NoncompactRow {
    pub i: u32,
    pub p: u32,
    pub q: u32,
    pub gamma_label: String,
    pub gamma_re: f64,
    pub gamma_im: f64,
    pub d: u32,
    pub covolume: f64,
}

impl NoncompactRow {
    pub fn gamma(&self) -> C64 {
        C64::new(self.gamma_re, self.gamma_im)
    }
}

pub fn noncompact() -> Result<Vec<NoncompactRow>> {
    load("noncompact.csv", NONCOMPACT_CSV)
}

#[derive(Debug, Clone, Deserialize)]
pub struct AxialRow {
    pub p: u32,
    pub q: u32,
    pub delta: f64,
    pub theta: Option<f64>,
    pub arithmetic: bool,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AxialThreshold {
    pub p: u32,
    pub q: u32,
    pub threshold: f64,
}

pub fn axial_spectra() -> Result<Vec<AxialRow>> {
    load("axial_spectra.csv", AXIAL_CSV)
}

pub fn axial_thresholds() -> Result<Vec<AxialThreshold>> {
    load("axial_thresholds.csv", AXIAL_THRESHOLDS_CSV)
}

#[derive(Debug, Clone, Deserialize)]
pub struct SphericalRow {
    /// e.g. `A4-S4`.
    pub pair: String,
    pub index: u32,
    pub n: u32,
    /// Second admissible order where the table lists two (`3,4`).
    pub n_alt: Option<u32>,
    pub rho: f64,
}

pub fn spherical_distances() -> Result<Vec<SphericalRow>> {
    load("spherical_distances.csv", SPHERICAL_CSV)
}

#[derive(Debug, Clone, Deserialize)]
pub struct NontriangleRow {
    pub order: u32,
    pub vertex: String,
    pub rho: String,
    pub theta: String,
    pub psi: String,
    pub constant: f64,
    /// Set when the printed constant was malformed.
    pub printed_as: Option<String>,
}

impl NontriangleRow {
    pub fn is_erratum(&self) -> bool {
        self.printed_as.is_some()
    }
}

pub fn nontriangle_222n() -> Result<Vec<NontriangleRow>> {
    load("nontriangle_222n.csv", NONTRIANGLE_CSV)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sha2::{Digest, Sha256};

    #[test]
    fn all_tables_parse() {
        assert_eq!(angles().unwrap().len(), 31);
        assert_eq!(margulis_rows().unwrap().len(), 116);
        assert_eq!(commutator_plane_23().unwrap().len(), 39);
        assert_eq!(gamma3().unwrap().len(), 14);
        assert_eq!(gamma4().unwrap().len(), 13);
        assert_eq!(gamma5().unwrap().len(), 12);
        assert_eq!(arith_p6().unwrap().len(), 14);
        assert_eq!(noncompact().unwrap().len(), 21);
        assert_eq!(axial_spectra().unwrap().len(), 36);
        assert_eq!(axial_thresholds().unwrap().len(), 4);
        assert_eq!(spherical_distances().unwrap().len(), 36);
        assert_eq!(nontriangle_222n().unwrap().len(), 8);
    }

    #[test]
    fn polynomials_parse() {
        for r in commutator_plane_23().unwrap() {
            crate::poly::parse_int_poly(&r.polynomial).unwrap();
        }
        for r in gamma3().unwrap() {
            crate::poly::parse_int_poly(&r.polynomial).unwrap();
        }
        for r in gamma5().unwrap() {
            crate::poly::BiPoly::parse(&r.polynomial).unwrap();
        }
    }

    #[test]
    fn angle_parsing() {
        assert!((parse_angle("2pi/3", None).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((parse_angle("pi/n", Some(7)).unwrap() - PI / 7.0).abs() < 1e-15);
        assert!((parse_angle(".955", None).unwrap() - 0.955).abs() < 1e-15);
        assert!(parse_angle("pi/n", None).is_err());
    }

    #[test]
    fn missing_fields_are_none() {
        let g = gamma3().unwrap();
        assert_eq!(g[12].discriminant_value(), None);
        assert_eq!(g[2].discriminant_value(), Some(-275));
        assert!(nontriangle_222n().unwrap()[6].is_erratum());
    }

    const PINNED: [(&str, &str); 12] = [
        ("angles.csv", "b4d997df025aa7e438151814774a5600905dfd5a371463669097c2626c44fc20"),
        ("margulis_submultiple.csv", "8185f69ecbf0507aa49dcd12c2bed5196d9d4a04147c2cc734c72532192a957e"),
        ("commutator_plane_23.csv", "46a12a8164ce6ae90d2f2f146760a25b6dc33837a8427d34bb6b2b69dcac7b2a"),
        ("gamma3.csv", "35a4dd97ca01b28f5675aefb5213c9e6abb03aa12e8e32086f11cefffd2dc417"),
        ("gamma4.csv", "c43178e71847da9d5425f999a7f5d8d1693a8e24b8164efcb0c22d759821d48c"),
        ("gamma5.csv", "58412857bc440a502f043bf75dcae313e6997056d5c847cd41d9f75999774389"),
        ("arith_p6.csv", "1f0ef4626deb3120efc2262559c464a444ad51fee95a797328b670bc4c3d38f5"),
        ("noncompact.csv", "b8f6ebc908cd1862f5c034e518cdf2f0cc30e1d9c81bbfe3a1ff351611465666"),
        ("axial_spectra.csv", "09eaf6388974e5fc81bc535cf155c5781e3eb51a0cd920ffb50b725c7ee3fc68"),
        ("axial_thresholds.csv", "29a1a3d50009980a0ec7d395964d317e2589a4aa86c18e7ca52f902ab2be6365"),
        ("spherical_distances.csv", "6d38d7d449a3923173a0ba00594415f5e67792b43e288df3ff3dc2cb411bac7d"),
        ("nontriangle_222n.csv", "538701e28c879dce66c8b4bd8f841fbdf5697e6c1c491f42b1fe73b3986f70eb"),
    ];

    #[test]
    fn checksums_pinned() {
        for ((name, data), (pname, want)) in all_files().iter().zip(PINNED.iter()) {
            assert_eq!(name, pname);
            let got = format!("{:x}", Sha256::digest(data.as_bytes()));
            assert_eq!(&got, want, "{name}");
        }
    }
}
