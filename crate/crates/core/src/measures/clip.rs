//! Exact volume of the unit cube cut by halfspaces, for d <= 3.
//!
//! Callers map each box onto `[0,1]^d` first, so the returned volume is the
//! fraction of the box inside the region.

const EPS: f64 = 1e-13;

/// A halfspace `a · u <= b` in unit-cube coordinates.
pub(crate) type Plane = (Vec<f64>, f64);

pub(crate) fn unit_cube_fraction(planes: &[Plane], dim: usize) -> f64 {
    match dim {
        1 => interval_fraction(planes),
        2 => polygon_fraction(planes),
        3 => polyhedron_fraction(planes),
        _ => unreachable!("exact clipping is only implemented for d <= 3"),
    }
}

fn interval_fraction(planes: &[Plane]) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for (a, b) in planes {
        let a = a[0];
        if a > 0.0 {
            hi = hi.min(b / a);
        } else if a < 0.0 {
            lo = lo.max(b / a);
        } else if *b < 0.0 {
            return 0.0;
        }
    }
    (hi - lo).max(0.0)
}

fn clip_polygon(poly: &[[f64; 2]], a: &[f64], b: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    if poly.is_empty() {
        return out;
    }
    let side = |p: &[f64; 2]| a[0] * p[0] + a[1] * p[1] - b;
    let mut prev = poly[poly.len() - 1];
    let mut sp = side(&prev);
    for &cur in poly {
        let sc = side(&cur);
        if sc <= 0.0 {
            if sp > 0.0 {
                let t = sp / (sp - sc);
                out.push([prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])]);
            }
            out.push(cur);
        } else if sp <= 0.0 {
            let t = sp / (sp - sc);
            out.push([prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])]);
        }
        prev = cur;
        sp = sc;
    }
    out
}

pub(crate) fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        s += p[0] * q[1] - p[1] * q[0];
    }
    0.5 * s.abs()
}

/// Clips a convex polygon by the given planes (generic coordinates, not only the unit square).
pub(crate) fn clip_polygon_all(mut poly: Vec<[f64; 2]>, planes: &[Plane]) -> Vec<[f64; 2]> {
    for (a, b) in planes {
        poly = clip_polygon(&poly, a, *b);
        if poly.len() < 3 {
            return Vec::new();
        }
    }
    poly
}

fn polygon_fraction(planes: &[Plane]) -> f64 {
    let square = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    polygon_area(&clip_polygon_all(square, planes)).clamp(0.0, 1.0)
}

type P3 = [f64; 3];

fn sub(p: &P3, q: &P3) -> P3 {
    [p[0] - q[0], p[1] - q[1], p[2] - q[2]]
}

fn cross(p: &P3, q: &P3) -> P3 {
    [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]]
}

fn dot3(p: &P3, q: &P3) -> f64 {
    p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
}

fn unit_cube_faces() -> Vec<Vec<P3>> {
    let v = |x: f64, y: f64, z: f64| [x, y, z];
    vec![
        vec![v(0., 0., 0.), v(0., 1., 0.), v(1., 1., 0.), v(1., 0., 0.)],
        vec![v(0., 0., 1.), v(1., 0., 1.), v(1., 1., 1.), v(0., 1., 1.)],
        vec![v(0., 0., 0.), v(1., 0., 0.), v(1., 0., 1.), v(0., 0., 1.)],
        vec![v(0., 1., 0.), v(0., 1., 1.), v(1., 1., 1.), v(1., 1., 0.)],
        vec![v(0., 0., 0.), v(0., 0., 1.), v(0., 1., 1.), v(0., 1., 0.)],
        vec![v(1., 0., 0.), v(1., 1., 0.), v(1., 1., 1.), v(1., 0., 1.)],
    ]
}

fn clip_face(face: &[P3], a: &P3, b: f64) -> Vec<P3> {
    let mut out = Vec::with_capacity(face.len() + 1);
    let side = |p: &P3| dot3(a, p) - b;
    let mut prev = face[face.len() - 1];
    let mut sp = side(&prev);
    for &cur in face {
        let sc = side(&cur);
        let lerp = |t: f64| {
            [
                prev[0] + t * (cur[0] - prev[0]),
                prev[1] + t * (cur[1] - prev[1]),
                prev[2] + t * (cur[2] - prev[2]),
            ]
        };
        if sc <= 0.0 {
            if sp > 0.0 {
                out.push(lerp(sp / (sp - sc)));
            }
            out.push(cur);
        } else if sp <= 0.0 {
            out.push(lerp(sp / (sp - sc)));
        }
        prev = cur;
        sp = sc;
    }
    out
}

fn clip_polyhedron(faces: Vec<Vec<P3>>, a: &P3, b: f64) -> Vec<Vec<P3>> {
    let scale = dot3(a, a).sqrt().max(1e-300);
    let mut out: Vec<Vec<P3>> = Vec::with_capacity(faces.len() + 1);
    let mut on_plane: Vec<P3> = Vec::new();
    for f in &faces {
        let c = clip_face(f, a, b);
        if c.len() >= 3 {
            for p in &c {
                if ((dot3(a, p) - b) / scale).abs() <= EPS {
                    on_plane.push(*p);
                }
            }
            out.push(c);
        }
    }
    // cap polygon
    let mut uniq: Vec<P3> = Vec::new();
    for p in on_plane {
        if !uniq.iter().any(|q| dot3(&sub(&p, q), &sub(&p, q)) <= 1e-24) {
            uniq.push(p);
        }
    }
    if uniq.len() >= 3 {
        let n = uniq.len() as f64;
        let c = [
            uniq.iter().map(|p| p[0]).sum::<f64>() / n,
            uniq.iter().map(|p| p[1]).sum::<f64>() / n,
            uniq.iter().map(|p| p[2]).sum::<f64>() / n,
        ];
        let far = uniq
            .iter()
            .max_by(|p, q| {
                let dp = sub(p, &c);
                let dq = sub(q, &c);
                dot3(&dp, &dp).total_cmp(&dot3(&dq, &dq))
            })
            .copied()
            .unwrap();
        let e1 = sub(&far, &c);
        let e2 = cross(a, &e1);
        let mut keyed: Vec<(f64, P3)> = uniq
            .into_iter()
            .map(|p| {
                let d = sub(&p, &c);
                (dot3(&d, &e2).atan2(dot3(&d, &e1)), p)
            })
            .collect();
        keyed.sort_by(|x, y| x.0.total_cmp(&y.0));
        out.push(keyed.into_iter().map(|(_, p)| p).collect());
    }
    out
}

fn polyhedron_volume(faces: &[Vec<P3>]) -> f64 {
    let mut verts: Vec<P3> = Vec::new();
    for f in faces {
        verts.extend(f.iter().copied());
    }
    if verts.len() < 4 {
        return 0.0;
    }
    let n = verts.len() as f64;
    let c = [
        verts.iter().map(|p| p[0]).sum::<f64>() / n,
        verts.iter().map(|p| p[1]).sum::<f64>() / n,
        verts.iter().map(|p| p[2]).sum::<f64>() / n,
    ];
    let mut vol = 0.0;
    for f in faces {
        let p0 = f[0];
        let mut area = [0.0; 3];
        for i in 1..f.len() - 1 {
            let cr = cross(&sub(&f[i], &p0), &sub(&f[i + 1], &p0));
            area[0] += cr[0];
            area[1] += cr[1];
            area[2] += cr[2];
        }
        vol += dot3(&area, &sub(&p0, &c)).abs() / 6.0;
    }
    vol
}

fn polyhedron_fraction(planes: &[Plane]) -> f64 {
    let mut faces = unit_cube_faces();
    for (a, b) in planes {
        let a3 = [a[0], a[1], a[2]];
        faces = clip_polyhedron(faces, &a3, *b);
        if faces.len() < 4 {
            return 0.0;
        }
    }
    polyhedron_volume(&faces).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_diagonal_halves() {
        let f = unit_cube_fraction(&[(vec![1.0, 1.0], 1.0)], 2);
        assert!((f - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cube_corner_tetrahedron() {
        // x + y + z <= 1 inside the unit cube is a tetrahedron of volume 1/6.
        let f = unit_cube_fraction(&[(vec![1.0, 1.0, 1.0], 1.0)], 3);
        assert!((f - 1.0 / 6.0).abs() < 1e-14, "{f}");
        let g = unit_cube_fraction(&[(vec![-1.0, -1.0, -1.0], -1.0)], 3);
        assert!((g - 5.0 / 6.0).abs() < 1e-14, "{g}");
    }

    #[test]
    fn cube_slab_and_empty() {
        let f = unit_cube_fraction(&[(vec![0.0, 0.0, 1.0], 0.3), (vec![0.0, -1.0, 0.0], -0.5)], 3);
        assert!((f - 0.15).abs() < 1e-14);
        let e = unit_cube_fraction(&[(vec![1.0, 0.0, 0.0], -0.1)], 3);
        assert_eq!(e, 0.0);
    }

    #[test]
    fn cube_cut_through_middle_is_half() {
        let f = unit_cube_fraction(&[(vec![1.0, 1.0, 1.0], 1.5)], 3);
        assert!((f - 0.5).abs() < 1e-14, "{f}");
    }
}
