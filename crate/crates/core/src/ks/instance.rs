use serde::{Deserialize, Serialize};

use super::ray::{orthogonal, Mode, Ray};
use super::KsError;

/// Default orthogonality threshold for unit rays in approximate mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Deduplicated rays with every orthogonal triad and every orthogonal pair
/// that is not already inside a triad.
#[derive(Clone, Debug)]
pub struct ColoringInstance {
    rays: Vec<Ray>,
    triads: Vec<[usize; 3]>,
    pairs: Vec<[usize; 2]>,
    tolerance: f64,
    /// `orth[i]` lists every ray orthogonal to ray `i`, ascending.
    orth: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    /// 0 for blue, 1 for red: the value of the squared spin component.
    pub fn value(self) -> u8 {
        match self {
            Color::Blue => 0,
            Color::Red => 1,
        }
    }
}

impl ColoringInstance {
    pub fn build(rays: &[Ray], tolerance: f64) -> Result<Self, KsError> {
        if rays.is_empty() {
            return Err(KsError::Empty);
        }
        if !(tolerance > 0.0) {
            return Err(KsError::Tolerance(tolerance));
        }
        let mode = rays[0].mode();
        if rays.iter().any(|r| r.mode() != mode) {
            return Err(KsError::MixedModes);
        }
        let mut uniq: Vec<Ray> = Vec::with_capacity(rays.len());
        for r in rays {
            let r = r.canonical();
            let mut seen = false;
            for u in &uniq {
                if u.same_direction(&r, tolerance)? {
                    seen = true;
                    break;
                }
            }
            if !seen {
                uniq.push(r);
            }
        }
        let n = uniq.len();
        let mut orth = vec![Vec::new(); n];
        // Unit rays make the approximate test a plain dot product.
        let units: Vec<[f64; 3]> = uniq.iter().map(Ray::unit_f64).collect();
        for i in 0..n {
            for j in i + 1..n {
                let o = match mode {
                    Mode::Exact => orthogonal(&uniq[i], &uniq[j], tolerance)?,
                    Mode::Approx => {
                        let (a, b) = (units[i], units[j]);
                        (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).abs() <= tolerance
                    }
                };
                if o {
                    orth[i].push(j);
                    orth[j].push(i);
                }
            }
        }
        let mut triads = Vec::new();
        let mut in_triad = std::collections::HashSet::new();
        for i in 0..n {
            for &j in orth[i].iter().filter(|&&j| j > i) {
                for &k in orth[j].iter().filter(|&&k| k > j) {
                    if orth[i].binary_search(&k).is_ok() {
                        triads.push([i, j, k]);
                        in_triad.extend([(i, j), (i, k), (j, k)]);
                    }
                }
            }
        }
        let mut pairs = Vec::new();
        for i in 0..n {
            for &j in orth[i].iter().filter(|&&j| j > i) {
                if !in_triad.contains(&(i, j)) {
                    pairs.push([i, j]);
                }
            }
        }
        Ok(ColoringInstance { rays: uniq, triads, pairs, tolerance, orth })
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn triads(&self) -> &[[usize; 3]] {
        &self.triads
    }

    pub fn pairs(&self) -> &[[usize; 2]] {
        &self.pairs
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn mode(&self) -> Mode {
        self.rays[0].mode()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.orth[i]
    }

    /// Index of the ray pointing along `r`, if present.
    pub fn index_of(&self, r: &Ray) -> Option<usize> {
        self.rays.iter().position(|u| u.same_direction(r, self.tolerance).unwrap_or(false))
    }

    /// Instance on a subset of this instance's rays, constraints recomputed.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self, KsError> {
        let rays: Vec<Ray> = keep.iter().map(|&i| self.rays[i].clone()).collect();
        Self::build(&rays, self.tolerance)
    }
}

/// Colors by ray index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring(pub Vec<Color>);

impl Coloring {
    /// Direct re-check: one blue per triad, never two blues on an orthogonal pair.
    pub fn is_valid(&self, inst: &ColoringInstance) -> bool {
        if self.0.len() != inst.rays.len() {
            return false;
        }
        let blue = |i: usize| self.0[i] == Color::Blue;
        let triads_ok = inst.triads.iter().all(|t| t.iter().filter(|&&i| blue(i)).count() == 1);
        let pairs_ok = (0..inst.rays.len()).all(|i| !blue(i) || inst.orth[i].iter().all(|&j| !blue(j)));
        triads_ok && pairs_ok
    }
}
