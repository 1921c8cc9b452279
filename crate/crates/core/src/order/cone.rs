//! The positive cone and the order it induces.

use num_traits::Zero;

use super::lp::nonneg_solution;
use super::space::{PolyConeSpec, Space};
use super::vector::Vector;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Nonnegative coefficients expressing `x` over the cone generators.
pub fn cone_coefficients(cone: &PolyConeSpec, x: &[Rational]) -> Option<Vec<Rational>> {
    let rows: Vec<Vec<Rational>> =
        (0..cone.dim).map(|i| cone.generators.iter().map(|g| g[i].clone()).collect()).collect();
    nonneg_solution(&rows, x)
}

/// `v >= 0` in the order of its space.
pub fn is_positive(v: &Vector) -> bool {
    match v.space() {
        Space::PolyCone(cone) => {
            let x = v.as_dense().expect("cone spaces store dense vectors");
            x.iter().all(Zero::is_zero) || cone_coefficients(cone, x).is_some()
        }
        _ => v.is_pointwise_nonneg(),
    }
}

/// `u <= v`, i.e. `v - u` lies in the positive cone.
pub fn cone_leq(u: &Vector, v: &Vector) -> Result<bool> {
    Ok(is_positive(&v.try_sub(u)?))
}

/// `0 <= v` and `v != 0`.
pub fn is_strictly_positive(v: &Vector) -> bool {
    !v.is_zero() && is_positive(v)
}

/// Whether the generated cone contains no line. Coordinatewise spaces are
/// proper by construction.
///
/// A cone generated by `g_1, .., g_m` contains a line iff `-g_j` lies in it
/// for some non-zero generator `g_j`.
pub fn is_proper_cone(space: &Space) -> bool {
    match space {
        Space::PolyCone(cone) => cone.generators.iter().filter(|g| g.iter().any(|x| !x.is_zero())).all(|g| {
            let neg: Vec<Rational> = g.iter().map(|x| -x).collect();
            cone_coefficients(cone, &neg).is_none()
        }),
        _ => true,
    }
}

/// Rejects cone spaces whose generators span a line.
pub fn check_proper(space: &Space) -> Result<()> {
    if is_proper_cone(space) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{space} is not a proper cone")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn cone(gens: &[[i64; 2]]) -> Space {
        Space::poly_cone(2, gens.iter().map(|g| vec![int(g[0]), int(g[1])]).collect()).unwrap()
    }

    fn vec2(space: &Space, x: i64, y: i64) -> Vector {
        Vector::from_coords(space, &[int(x), int(y)]).unwrap()
    }

    #[test]
    fn pointwise_order() {
        let x2 = Space::finite(2).unwrap();
        let u = Vector::from_coords(&x2, &[int(1), int(2)]).unwrap();
        let v = Vector::from_coords(&x2, &[int(1), int(3)]).unwrap();
        assert!(cone_leq(&u, &v).unwrap());
        assert!(!cone_leq(&v, &u).unwrap());
        assert!(cone_leq(&u, &u).unwrap());
    }

    #[test]
    fn polyhedral_order() {
        let c = cone(&[[1, 0], [1, 1]]);
        assert!(!cone_leq(&vec2(&c, 0, 0), &vec2(&c, 0, 1)).unwrap());
        assert!(cone_leq(&vec2(&c, 0, 0), &vec2(&c, 3, 1)).unwrap());
        assert!(cone_leq(&vec2(&c, 1, 1), &vec2(&c, 3, 2)).unwrap());
    }

    #[test]
    fn properness() {
        assert!(is_proper_cone(&cone(&[[1, 0], [0, 1]])));
        assert!(!is_proper_cone(&cone(&[[1, 0], [-1, 0]])));
        // Positively spanning: (1,1), (1,-1), (-1,0) generate all of Q^2.
        assert!(!is_proper_cone(&cone(&[[1, 1], [1, -1], [-1, 0]])));
        assert!(is_proper_cone(&cone(&[[1, 1], [1, -1]])));
    }
}
