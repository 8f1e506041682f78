use crate::geometry::{norm, scale, stereographic_lift, stereographic_project, BallPoint};
use crate::maps::SphereMap;

/// `R̂(v) = ‖v‖ · R(v/‖v‖)`, with `R` acting on the unit sphere through
/// the stereographic charts.
pub fn radial_extension<R: SphereMap + ?Sized>(r: &R, v: BallPoint) -> BallPoint {
    let c = v.coords();
    let n = norm(c);
    if n == 0.0 {
        return BallPoint::origin();
    }
    let u = scale(1.0 / n, c);
    let z = stereographic_project(u).expect("normalised vector is on the sphere");
    BallPoint::from_raw(scale(n, stereographic_lift(r.eval(z))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Polynomial, RationalMap};

    fn square() -> RationalMap {
        RationalMap::polynomial(Polynomial::from_real(&[0.0, 0.0, 1.0])).unwrap()
    }

    fn close(a: BallPoint, b: [f64; 3]) -> bool {
        let c = a.coords();
        (0..3).all(|i| (c[i] - b[i]).abs() < 1e-15)
    }

    #[test]
    fn examples() {
        let r = square();
        assert!(close(radial_extension(&r, BallPoint::new([0.0, 0.0, 0.5]).unwrap()), [0.0, 0.0, 0.5]));
        assert!(close(radial_extension(&r, BallPoint::new([0.5, 0.0, 0.0]).unwrap()), [0.5, 0.0, 0.0]));
        assert!(close(radial_extension(&r, BallPoint::new([0.0, 0.5, 0.0]).unwrap()), [-0.5, 0.0, 0.0]));
        assert_eq!(radial_extension(&r, BallPoint::origin()), BallPoint::origin());
    }
}
