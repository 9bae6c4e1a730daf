//! Fixed-size vectors. Points of lower-dimensional bodies keep their unused
//! trailing coordinates at zero.

pub type Vector = [f64; 3];

pub const ZERO: Vector = [0.0; 3];

#[inline]
pub fn add(a: &Vector, b: &Vector) -> Vector {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: &Vector, b: &Vector) -> Vector {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(a: &Vector, k: f64) -> Vector {
    [a[0] * k, a[1] * k, a[2] * k]
}

#[inline]
pub fn axpy(a: &Vector, k: f64, d: &Vector) -> Vector {
    [a[0] + k * d[0], a[1] + k * d[1], a[2] + k * d[2]]
}

#[inline]
pub fn dot(a: &Vector, b: &Vector) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: &Vector, b: &Vector) -> Vector {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
pub fn norm(a: &Vector) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: &Vector, b: &Vector) -> f64 {
    norm(&sub(a, b))
}

pub fn normalize(a: &Vector) -> Option<Vector> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(scale(a, 1.0 / n))
    } else {
        None
    }
}

/// Component of `a` orthogonal to the unit vector `u`.
#[inline]
pub fn reject(a: &Vector, u: &Vector) -> Vector {
    axpy(a, -dot(a, u), u)
}

/// Build a vector from a slice of length 1..=3.
pub fn from_slice(s: &[f64]) -> Vector {
    let mut v = ZERO;
    for (i, x) in s.iter().take(3).enumerate() {
        v[i] = *x;
    }
    v
}

/// An orthonormal basis of the complement of the unit vector `u` inside
/// the first `dim` coordinates.
pub fn orthonormal_complement(u: &Vector, dim: usize) -> Vec<Vector> {
    match dim {
        1 => vec![],
        2 => vec![[-u[1], u[0], 0.0]],
        _ => {
            let pick = if u[0].abs() < 0.6 {
                [1.0, 0.0, 0.0]
            } else if u[1].abs() < 0.6 {
                [0.0, 1.0, 0.0]
            } else {
                [0.0, 0.0, 1.0]
            };
            let e1 = normalize(&reject(&pick, u)).expect("non-degenerate complement");
            let e2 = cross(u, &e1);
            vec![e1, e2]
        }
    }
}

/// Lexicographic comparison on the first `dim` coordinates.
pub fn lex_cmp(a: &Vector, b: &Vector, dim: usize) -> std::cmp::Ordering {
    for i in 0..dim {
        match a[i].partial_cmp(&b[i]) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}
