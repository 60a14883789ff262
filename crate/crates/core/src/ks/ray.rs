//! Projective directions in 3-space.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::qsqrt2::QSqrt2;
use super::KsError;

/// Components below this magnitude count as zero when picking the sign
/// of an approximate ray's canonical form.
const APPROX_ZERO: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Approx,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coords {
    /// Scaled so the first nonzero component is exactly 1.
    Exact([QSqrt2; 3]),
    /// Unit length, first component with |c| > 1e-12 positive.
    Approx([f64; 3]),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(QSqrt2),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64(),
            Scalar::Approx(x) => *x,
        }
    }
}

/// A direction identified with its negation, always held in canonical form.
/// Equality compares canonical coordinates and ignores the label.
#[derive(Clone, Debug)]
pub struct Ray {
    coords: Coords,
    pub label: Option<String>,
}

impl PartialEq for Ray {
    fn eq(&self, other: &Ray) -> bool {
        self.coords == other.coords
    }
}

impl Ray {
    pub fn exact(c: [QSqrt2; 3]) -> Result<Self, KsError> {
        let lead = c.iter().find(|x| !x.is_zero()).ok_or(KsError::ZeroVector)?;
        let inv = lead.inverse().expect("nonzero");
        let coords = c.map(|x| &x * &inv);
        Ok(Ray { coords: Coords::Exact(coords), label: None })
    }

    /// Exact ray from integer pairs `(p, q)` meaning `p + q√2`.
    pub fn exact_ints(c: [(i64, i64); 3]) -> Result<Self, KsError> {
        Self::exact(c.map(|(p, q)| QSqrt2::from_ints(p, q)))
    }

    pub fn approx(c: [f64; 3]) -> Result<Self, KsError> {
        let norm = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        if !norm.is_finite() || norm <= APPROX_ZERO {
            return Err(KsError::ZeroVector);
        }
        // Leave already-unit input untouched so canonicalization is idempotent.
        let mut u = if (norm - 1.0).abs() <= 4.0 * f64::EPSILON { c } else { c.map(|x| x / norm) };
        if let Some(lead) = u.iter().find(|x| x.abs() > APPROX_ZERO) {
            if *lead < 0.0 {
                u = u.map(|x| -x);
            }
        }
        Ok(Ray { coords: Coords::Approx(u), label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn mode(&self) -> Mode {
        match self.coords {
            Coords::Exact(_) => Mode::Exact,
            Coords::Approx(_) => Mode::Approx,
        }
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// Re-canonicalizes the current coordinates.
    pub fn canonical(&self) -> Ray {
        let r = match &self.coords {
            Coords::Exact(c) => Ray::exact(c.clone()),
            Coords::Approx(c) => Ray::approx(*c),
        };
        Ray { label: self.label.clone(), ..r.expect("canonical rays are nonzero") }
    }

    pub fn negated(&self) -> Ray {
        let r = match &self.coords {
            Coords::Exact(c) => Ray::exact(c.clone().map(|x| -x)),
            Coords::Approx(c) => Ray::approx(c.map(|x| -x)),
        };
        Ray { label: self.label.clone(), ..r.expect("canonical rays are nonzero") }
    }

    /// Unit-length floating coordinates.
    pub fn unit_f64(&self) -> [f64; 3] {
        match &self.coords {
            Coords::Exact(c) => {
                let v = [c[0].to_f64(), c[1].to_f64(), c[2].to_f64()];
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                v.map(|x| x / n)
            }
            Coords::Approx(c) => *c,
        }
    }

    /// Same direction in approximate mode.
    pub fn to_approx(&self) -> Ray {
        Ray { label: self.label.clone(), ..Ray::approx(self.unit_f64()).expect("nonzero") }
    }

    /// `true` if the rays are the same projective point: exact equality of
    /// canonical forms, or a cross product of norm ≤ `tol` for unit rays.
    pub fn same_direction(&self, other: &Ray, tol: f64) -> Result<bool, KsError> {
        match (&self.coords, &other.coords) {
            (Coords::Exact(a), Coords::Exact(b)) => Ok(a == b),
            (Coords::Approx(a), Coords::Approx(b)) => {
                let c = cross_f64(a, b);
                Ok((c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt() <= tol)
            }
            _ => Err(KsError::MixedModes),
        }
    }
}

pub fn dot(u: &Ray, v: &Ray) -> Result<Scalar, KsError> {
    match (&u.coords, &v.coords) {
        (Coords::Exact(a), Coords::Exact(b)) => {
            Ok(Scalar::Exact(&(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])))
        }
        (Coords::Approx(a), Coords::Approx(b)) => Ok(Scalar::Approx(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])),
        _ => Err(KsError::MixedModes),
    }
}

/// Exact zero test in exact mode; `|u·v| ≤ tol` on unit rays in approx mode.
pub fn orthogonal(u: &Ray, v: &Ray, tol: f64) -> Result<bool, KsError> {
    Ok(match dot(u, v)? {
        Scalar::Exact(d) => d.is_zero(),
        Scalar::Approx(d) => d.abs() <= tol,
    })
}

pub(crate) fn cross_f64(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

impl fmt::Display for Ray {
    /// One ray-file line: `E a, b, c` or `F x, y, z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.coords {
            Coords::Exact(c) => write!(f, "E {}, {}, {}", c[0], c[1], c[2]),
            Coords::Approx(c) => write!(f, "F {:?}, {:?}, {:?}", c[0], c[1], c[2]),
        }
    }
}

impl FromStr for Ray {
    type Err = KsError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| KsError::Parse { line: 0, reason: reason.to_string() };
        let line = line.trim();
        let (tag, rest) = line.split_at(line.find(char::is_whitespace).ok_or_else(|| bad("missing mode tag"))?);
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad(&format!("expected 3 components, found {}", parts.len())));
        }
        match tag {
            "E" => {
                let c = parts
                    .iter()
                    .map(|p| p.parse::<QSqrt2>().map_err(|e| bad(&e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                let [a, b, c]: [QSqrt2; 3] = c.try_into().expect("three parts");
                Ray::exact([a, b, c])
            }
            "F" => {
                let c = parts
                    .iter()
                    .map(|p| p.parse::<f64>().map_err(|_| bad(&format!("bad decimal {p:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                Ray::approx([c[0], c[1], c[2]])
            }
            other => Err(bad(&format!("unknown mode tag {other:?}; expected E or F"))),
        }
    }
}

/// Parses a ray file, reporting errors with 1-based line numbers.
/// Blank lines and `#` comments are skipped.
pub fn parse_ray_file(text: &str) -> Result<Vec<Ray>, KsError> {
    let mut rays = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ray = line.parse::<Ray>().map_err(|e| match e {
            KsError::Parse { reason, .. } => KsError::Parse { line: i + 1, reason },
            KsError::ZeroVector => KsError::Parse { line: i + 1, reason: "zero vector".into() },
            other => other,
        })?;
        rays.push(ray);
    }
    Ok(rays)
}

pub fn write_ray_file(rays: &[Ray]) -> String {
    rays.iter().map(|r| format!("{r}\n")).collect()
}
