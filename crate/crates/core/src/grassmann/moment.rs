use num_traits::Zero;

use super::ProjFlat;
use crate::error::{Error, Result};
use crate::exactnum::rational::factorial;
use crate::exactnum::Rational;

/// The `order`-th derivative of the moment curve `s ↦ (s, s², …, sⁿ)`.
pub fn moment_curve_derivative(n: usize, s: &Rational, order: usize) -> Vec<Rational> {
    (1..=n)
        .map(|m| {
            if m < order {
                Rational::zero()
            } else {
                let falling = factorial(m) / factorial(m - order);
                Rational::from_integer(falling) * num_traits::pow(s.clone(), m - order)
            }
        })
        .collect()
}

/// The osculating `(n-2)`-flat of the moment curve at `s`: through `γ(s)`
/// with directions `γ′(s), …, γ^{(n-2)}(s)`, embedded by `x ↦ (1, x)`.
pub fn moment_osculating_flat(n: usize, s: &Rational) -> Result<ProjFlat> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("osculating flats need n >= 3, got {n}")));
    }
    let point = moment_curve_derivative(n, s, 0);
    let directions: Vec<Vec<Rational>> = (1..=n - 2).map(|o| moment_curve_derivative(n, s, o)).collect();
    ProjFlat::affine(&point, &directions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, RatMatrix};

    #[test]
    fn tangent_line_at_origin() {
        let f = moment_osculating_flat(3, &int(0)).unwrap();
        assert_eq!(f.span(), &RatMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]));
    }

    #[test]
    fn tangent_line_at_one() {
        let f = moment_osculating_flat(3, &int(1)).unwrap();
        assert_eq!(f.span(), &RatMatrix::from_i64(&[&[1, 0], &[1, 1], &[1, 2], &[1, 3]]));
    }

    #[test]
    fn osculating_plane_in_four_space() {
        let f = moment_osculating_flat(4, &int(0)).unwrap();
        assert_eq!(f.k(), 2);
        assert_eq!(
            f.span(),
            &RatMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2], &[0, 0, 0], &[0, 0, 0]])
        );
        assert!(moment_osculating_flat(2, &int(0)).is_err());
    }
}
