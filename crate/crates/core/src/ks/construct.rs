//! Generators for uncolorable ray sets.

use super::qsqrt2::QSqrt2;
use super::ray::{cross_f64, Ray};
use super::KsError;

type V3 = [f64; 3];

fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(s: f64, a: V3) -> V3 {
    a.map(|x| s * x)
}

fn dot3(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn unit(a: V3) -> V3 {
    scale(1.0 / dot3(a, a).sqrt(), a)
}

/// Orthonormal frame: local coordinates `(X, Y, Z)` map to `X·x + Y·y + Z·z`.
#[derive(Clone, Copy, Debug)]
pub struct Frame {
    pub x: V3,
    pub y: V3,
    pub z: V3,
}

impl Frame {
    pub const STANDARD: Frame = Frame { x: [1.0, 0.0, 0.0], y: [0.0, 1.0, 0.0], z: [0.0, 0.0, 1.0] };

    /// Frame with `z` along `blue` and `y` pointing from `blue` toward `red`
    /// within their common plane.
    pub fn anchored(blue: V3, red: V3) -> Frame {
        let z = unit(blue);
        let y = unit(add(red, scale(-dot3(red, z), z)));
        Frame { x: cross_f64(&y, &z), y, z }
    }

    fn map(&self, v: V3) -> V3 {
        add(add(scale(v[0], self.x), scale(v[1], self.y)), scale(v[2], self.z))
    }
}

/// The β values solving `|β + 1/β| = 1/α`.
///
/// With `count == 2` these are the larger root `β₀` and `−β₀`; with
/// `count == 4` the reciprocals `±1/β₀` are added.
pub fn gadget_betas(alpha: f64, count: usize) -> Result<Vec<f64>, KsError> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(KsError::Domain(format!("alpha = {alpha} outside (0, 0.5)")));
    }
    if count != 2 && count != 4 {
        return Err(KsError::Domain(format!(
            "beta_count = {count}; only 2 or 4 distinct solutions of |b + 1/b| = 1/alpha exist"
        )));
    }
    let k = 1.0 / alpha;
    let b0 = (k + (k * k - 4.0).sqrt()) / 2.0;
    let mut out = vec![b0, -b0];
    if count == 4 {
        out.extend([1.0 / b0, -1.0 / b0]);
    }
    Ok(out)
}

/// Rays refuting any coloring where `z = (0,0,1)` and `a = z + α·y` get
/// different colors.
///
/// This is the union of two one-sided gadgets: one anchored with `z` blue
/// and `a` red, and its mirror anchored with `a` blue and `z` red. A single
/// one-sided gadget still admits the reversed coloring.
pub fn bell_gadget(alpha: f64, beta_count: usize) -> Result<Vec<Ray>, KsError> {
    let a = [0.0, alpha, 1.0];
    let z = [0.0, 0.0, 1.0];
    let mut rays = bell_gadget_in_frame(alpha, beta_count, &Frame::STANDARD, "")?;
    rays.extend(bell_gadget_in_frame(alpha, beta_count, &Frame::anchored(a, z), "rev.")?);
    Ok(dedup(rays, super::DEFAULT_TOLERANCE))
}

/// One-sided gadget in `frame`: no coloring has the frame's `z` blue and
/// `a = z + α·y` red.
///
/// Every red ray added in the plane of two orthogonal red rays comes with
/// its in-plane orthogonal partner and the plane normal, so each step of
/// the argument is carried by explicit triads. The first two rays are `z`
/// and `a`.
pub fn bell_gadget_in_frame(alpha: f64, beta_count: usize, frame: &Frame, tag: &str) -> Result<Vec<Ray>, KsError> {
    let betas = gadget_betas(alpha, beta_count)?;
    let mut local: Vec<(String, V3)> = vec![
        ("z".into(), [0.0, 0.0, 1.0]),
        ("a".into(), [0.0, alpha, 1.0]),
        ("x".into(), [1.0, 0.0, 0.0]),
        ("y".into(), [0.0, 1.0, 0.0]),
        // Normal of the (x, a) plane.
        ("n_xa".into(), [0.0, 1.0, -alpha]),
        ("f".into(), [1.0, 0.0, -1.0]),
        ("g".into(), [-1.0, 0.0, -1.0]),
    ];
    let n_xa = [0.0, 1.0, -alpha];
    for (k, &b) in betas.iter().enumerate() {
        let c = [b, 1.0, 0.0];
        let c_perp = [-1.0, b, 0.0];
        let d = [1.0 / b, -1.0, -1.0 / alpha];
        let d_perp = cross_f64(&n_xa, &d);
        let n_cd = cross_f64(&c, &d);
        let e = add(c, d);
        let e_perp = cross_f64(&n_cd, &e);
        for (name, v) in [
            ("c", c),
            ("c_perp", c_perp),
            ("d", d),
            ("d_perp", d_perp),
            ("n_cd", n_cd),
            ("e", e),
            ("e_perp", e_perp),
        ] {
            local.push((format!("{name}[{k}]"), v));
        }
    }
    local
        .into_iter()
        .map(|(name, v)| Ok(Ray::approx(frame.map(v))?.with_label(format!("{tag}{name}"))))
        .collect()
}

/// tan 22.5° = √2 − 1.
pub fn tan_22_5() -> QSqrt2 {
    QSqrt2::from_ints(-1, 1)
}

/// The nine ladder rays: z to y in 22.5° steps, then y to x.
pub fn ladder_rays() -> Vec<Ray> {
    let t = (-1, 1);
    let o = (1, 0);
    let z = (0, 0);
    let specs: [([(i64, i64); 3], &str); 9] = [
        ([z, z, o], "z"),
        ([z, t, o], "yz22.5"),
        ([z, o, o], "yz45"),
        ([z, o, t], "yz67.5"),
        ([z, o, z], "y"),
        ([t, o, z], "xy22.5"),
        ([o, o, z], "xy45"),
        ([o, t, z], "xy67.5"),
        ([o, z, z], "x"),
    ];
    specs.iter().map(|(c, l)| Ray::exact_ints(*c).expect("nonzero").with_label(*l)).collect()
}

/// Adjacent ladder pairs, from z toward y and then from y toward x.
pub fn ladder_pairs() -> Vec<(Ray, Ray)> {
    let l = ladder_rays();
    (0..l.len() - 1).map(|i| (l[i].clone(), l[i + 1].clone())).collect()
}

/// Bell's uncolorable set in approximate mode: the 22.5° ladder plus one
/// two-sided gadget per adjacent pair, deduplicated at the default tolerance.
pub fn bell_uncolorable_set() -> Vec<Ray> {
    bell_set_with(2, super::DEFAULT_TOLERANCE)
}

pub fn bell_set_with(beta_count: usize, tolerance: f64) -> Vec<Ray> {
    let alpha = tan_22_5().to_f64();
    let mut rays: Vec<Ray> = ladder_rays().iter().map(Ray::to_approx).collect();
    for (k, (u, v)) in ladder_pairs().iter().enumerate() {
        let (u, v) = (u.unit_f64(), v.unit_f64());
        for (blue, red, tag) in [(u, v, format!("g{k}.")), (v, u, format!("g{k}r."))] {
            let frame = Frame::anchored(blue, red);
            rays.extend(bell_gadget_in_frame(alpha, beta_count, &frame, &tag).expect("alpha in range"));
        }
    }
    dedup(rays, tolerance)
}

fn dedup(rays: Vec<Ray>, tolerance: f64) -> Vec<Ray> {
    let mut out: Vec<Ray> = Vec::with_capacity(rays.len());
    for r in rays {
        if !out.iter().any(|u| u.same_direction(&r, tolerance).unwrap_or(false)) {
            out.push(r);
        }
    }
    out
}

/// Quarter turn about the unit axis `u`: `R = u uᵀ + [u]ₓ`.
fn quarter_turn(u: &[QSqrt2; 3]) -> [[QSqrt2; 3]; 3] {
    let z = QSqrt2::zero;
    let k = [
        [z(), -&u[2], u[1].clone()],
        [u[2].clone(), z(), -&u[0]],
        [-&u[1], u[0].clone(), z()],
    ];
    std::array::from_fn(|i| std::array::from_fn(|j| &(&u[i] * &u[j]) + &k[i][j]))
}

fn apply(m: &[[QSqrt2; 3]; 3], v: &[QSqrt2; 3]) -> [QSqrt2; 3] {
    std::array::from_fn(|i| {
        (0..3).fold(QSqrt2::zero(), |acc, j| &acc + &(&m[i][j] * &v[j]))
    })
}

/// Peres's 33 rays: vertices, face centres and edge centres of an
/// axis-aligned cube and of its quarter turns about the two horizontal
/// lines through midpoints of opposite vertical edges. Exact in ℚ[√2].
pub fn peres_33() -> Vec<Ray> {
    let half_root = QSqrt2::ratio(0, 1, 1, 2);
    let axes = [
        [half_root.clone(), half_root.clone(), QSqrt2::zero()],
        [half_root.clone(), -&half_root, QSqrt2::zero()],
    ];
    let identity: [[QSqrt2; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { QSqrt2::one() } else { QSqrt2::zero() }));
    let cubes = [identity, quarter_turn(&axes[0]), quarter_turn(&axes[1])];
    let mut cube_points = Vec::new();
    for a in -1i64..=1 {
        for b in -1i64..=1 {
            for c in -1i64..=1 {
                if (a, b, c) != (0, 0, 0) {
                    cube_points.push([a, b, c].map(|x| QSqrt2::from_ints(x, 0)));
                }
            }
        }
    }
    let mut rays: Vec<Ray> = Vec::new();
    for (ci, m) in cubes.iter().enumerate() {
        for p in &cube_points {
            let r = Ray::exact(apply(m, p)).expect("rotation preserves nonzero");
            if !rays.contains(&r) {
                let kind = match p.iter().filter(|x| !x.is_zero()).count() {
                    1 => "face",
                    2 => "edge",
                    _ => "vertex",
                };
                rays.push(r.with_label(format!("cube{ci}.{kind}")));
            }
        }
    }
    rays
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn betas_solve_the_angle_condition() {
        for alpha in [0.1, 0.25, tan_22_5().to_f64(), 0.49] {
            for b in gadget_betas(alpha, 4).unwrap() {
                assert!(((b + 1.0 / b).abs() - 1.0 / alpha).abs() < 1e-12);
            }
        }
        assert!(gadget_betas(0.6, 2).is_err());
        assert!(gadget_betas(0.0, 2).is_err());
        assert!(gadget_betas(0.25, 3).is_err());
        assert!(bell_gadget(0.6, 2).is_err());
    }

    #[test]
    fn gadget_geometry() {
        let alpha = 0.3;
        for b in gadget_betas(alpha, 2).unwrap() {
            let c = [b, 1.0, 0.0];
            let d = [1.0 / b, -1.0, -1.0 / alpha];
            assert!(dot3(c, d).abs() < 1e-12);
            let e = unit(add(c, d));
            let target = if b > 0.0 { unit([1.0, 0.0, -1.0]) } else { unit([-1.0, 0.0, -1.0]) };
            assert!((dot3(e, target).abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn anchored_frame_maps_a_onto_partner() {
        let pairs = ladder_pairs();
        let alpha = tan_22_5().to_f64();
        for (u, v) in &pairs {
            let f = Frame::anchored(u.unit_f64(), v.unit_f64());
            let a = Ray::approx(f.map([0.0, alpha, 1.0])).unwrap();
            assert!(a.same_direction(&v.to_approx(), 1e-12).unwrap());
        }
    }

    #[test]
    fn peres_has_33_rays() {
        let rays = peres_33();
        assert_eq!(rays.len(), 33);
        for i in 0..3 {
            let mut c = [(0, 0); 3];
            c[i] = (1, 0);
            assert!(rays.contains(&Ray::exact_ints(c).unwrap()));
        }
    }

    #[test]
    fn ladder_holds_exact_22_5_ray() {
        let r = Ray::exact_ints([(0, 0), (-1, 1), (1, 0)]).unwrap();
        assert!(ladder_rays().contains(&r));
    }
}
