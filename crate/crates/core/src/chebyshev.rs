//! Chebyshev polynomials of the first kind and the exponentially substituted
//! polynomial `g_q(x) = T_q(2 e^x - 1) = sum_j a_{j,q} e^{jx}`.

use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::compensated::{self, DoubleWord};
use crate::error::{Error, Result};
use crate::real::Real;

/// Largest supported degree; beyond it `|a_{j,q}|` exceeds what an `f64`
/// represents comfortably.
pub const MAX_DEGREE: u32 = 60;

/// `T_k(x)` through the closed form: `cos(k acos x)` on `[-1, 1]`,
/// `cosh(k acosh x)` above and `(-1)^k cosh(k acosh(-x))` below.
pub fn cheb_eval<T: Real>(k: u32, x: T) -> T {
    let k_r = T::from_u32(k).expect("degree representable");
    if x > T::one() {
        (k_r * x.acosh()).cosh()
    } else if x < -T::one() {
        let v = (k_r * (-x).acosh()).cosh();
        if k % 2 == 0 {
            v
        } else {
            -v
        }
    } else {
        (k_r * x.acos()).cos()
    }
}

/// Exact coefficients of `g_q` in the basis `e^{jx}`, `j = 0..=q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebCoefficients<T> {
    q: u32,
    exact: Vec<BigInt>,
    coeffs: Vec<T>,
    split: Vec<DoubleWord<T>>,
}

impl<T: Real> ChebCoefficients<T> {
    pub fn degree(&self) -> u32 {
        self.q
    }

    /// Coefficients rounded to the working precision.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficients as exact integers.
    pub fn exact(&self) -> &[BigInt] {
        &self.exact
    }

    /// Coefficients split into a leading value and its rounding residual.
    pub fn split(&self) -> &[DoubleWord<T>] {
        &self.split
    }

    /// `g_q(x)` through the coefficient expansion, for every `x`.
    pub fn expansion(&self, x: T) -> T {
        compensated::horner(&self.split, x.exp())
    }

    /// `g_q(x)`; above `x = 0` the closed `cosh` form replaces the expansion.
    pub fn g(&self, x: T) -> T {
        let y = T::lit(2.0) * x.exp() - T::one();
        if y > T::one() + T::lit(1e-12) {
            cheb_eval(self.q, y)
        } else {
            self.expansion(x)
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `a_{j,q} = (-4)^j q (q+j-1)! / ((q-j)! (2j)!)` for even `2 <= q <= 60`.
pub fn cheb_coeffs<T: Real>(q: u32) -> Result<ChebCoefficients<T>> {
    if q < 2 || q % 2 == 1 {
        return Err(Error::InvalidDegree(q as i64));
    }
    if q > MAX_DEGREE {
        return Err(Error::DegreeTooLarge { q, max: MAX_DEGREE });
    }
    let exact: Vec<BigInt> = (0..=q)
        .map(|j| {
            if j == 0 {
                return BigInt::one();
            }
            let num = BigInt::from(4).pow(j) * BigInt::from(q) * factorial(q + j - 1);
            let mag = num / (factorial(q - j) * factorial(2 * j));
            if j % 2 == 1 {
                -mag
            } else {
                mag
            }
        })
        .collect();
    let mut coeffs = Vec::with_capacity(exact.len());
    let mut split = Vec::with_capacity(exact.len());
    for a in &exact {
        let hi_f = a.to_f64().unwrap_or(f64::INFINITY);
        let hi = T::lit(hi_f);
        let residual = BigInt::from_f64(hi.as_f64())
            .map(|h| a - h)
            .unwrap_or_else(BigInt::zero);
        let lo = T::lit(residual.to_f64().unwrap_or(0.0));
        if !hi.is_finite() {
            return Err(Error::DegreeTooLarge { q, max: MAX_DEGREE });
        }
        coeffs.push(hi);
        split.push(DoubleWord::new(hi, lo));
    }
    Ok(ChebCoefficients {
        q,
        exact,
        coeffs,
        split,
    })
}

/// `g_q(x) = T_q(2 e^x - 1)`.
pub fn g_eval<T: Real>(q: u32, x: T) -> Result<T> {
    Ok(cheb_coeffs::<T>(q)?.g(x))
}

/// `g_q` through the closed trigonometric / hyperbolic form only.
pub fn g_closed_form<T: Real>(q: u32, x: T) -> T {
    cheb_eval(q, T::lit(2.0) * x.exp() - T::one())
}

/// `floor((3 + 2 sqrt 2)^q)`, computed exactly.
///
/// With `(3 + 2 sqrt 2)^q = A + B sqrt 2`, the conjugate power lies in (0, 1)
/// and the two sum to the integer `2A`, so the floor is `2A - 1`.
pub fn growth_bound_floor(q: u32) -> BigInt {
    let mut a = BigInt::one();
    let mut b = BigInt::zero();
    for _ in 0..q {
        let na = BigInt::from(3) * &a + BigInt::from(4) * &b;
        let nb = BigInt::from(2) * &a + BigInt::from(3) * &b;
        a = na;
        b = nb;
    }
    if q == 0 {
        return BigInt::one();
    }
    BigInt::from(2) * a - 1
}

/// Checks `|a_{j,q}| <= (3 + 2 sqrt 2)^q` in exact arithmetic.
pub fn within_growth_bound(coeffs: &[BigInt], q: u32) -> bool {
    let bound = growth_bound_floor(q);
    coeffs.iter().all(|a| a.abs() <= bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        assert!((cheb_eval(2, 1.0_f64) - 1.0).abs() < 1e-15);
        assert!((cheb_eval(3, 0.5_f64) + 1.0).abs() < 1e-14);
        assert!((cheb_eval(2, 2.0_f64) - 7.0).abs() < 1e-12);
        assert!((cheb_eval(3, -2.0_f64) + 26.0).abs() < 1e-11);
    }

    #[test]
    fn quadratic_coefficients() {
        let c = cheb_coeffs::<f64>(2).unwrap();
        assert_eq!(c.coeffs(), &[1.0, -8.0, 8.0]);
    }

    #[test]
    fn coefficient_sum_is_one() {
        for q in (2..=MAX_DEGREE).step_by(2) {
            let c = cheb_coeffs::<f64>(q).unwrap();
            let s: BigInt = c.exact().iter().sum();
            assert_eq!(s, BigInt::one(), "q={q}");
        }
    }

    #[test]
    fn rejects_bad_degrees() {
        assert_eq!(cheb_coeffs::<f64>(3), Err(Error::InvalidDegree(3)));
        assert_eq!(cheb_coeffs::<f64>(0), Err(Error::InvalidDegree(0)));
        assert!(matches!(
            cheb_coeffs::<f64>(62),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn growth_bound_small() {
        // (3 + 2 sqrt 2)^1 = 5.83, ^2 = 33.97, ^4 = 1153.99
        assert_eq!(growth_bound_floor(1), BigInt::from(5));
        assert_eq!(growth_bound_floor(2), BigInt::from(33));
        assert_eq!(growth_bound_floor(4), BigInt::from(1153));
        let c = cheb_coeffs::<f64>(4).unwrap();
        assert!(within_growth_bound(c.exact(), 4));
    }

    #[test]
    fn g_examples() {
        assert!((g_eval(2, 0.0_f64).unwrap() - 1.0).abs() < 1e-14);
        assert!((g_eval(2, -(2.0_f64).ln()).unwrap() + 1.0).abs() < 1e-14);
        let want = cheb_eval(2, 2.0 * 0.5_f64.exp() - 1.0);
        assert!((g_eval(2, 0.5_f64).unwrap() - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn single_precision_coefficients() {
        let c = cheb_coeffs::<f32>(10).unwrap();
        let x = -0.3_f32;
        assert!((c.expansion(x) - g_closed_form(10, x)).abs() < 1e-3);
    }
}
