//! Double-word arithmetic for polynomials whose monomial coefficients alternate
//! in sign with large magnitudes. Error-free transformations keep the result
//! accurate to roughly `eps^2 * condition` instead of `eps * condition`.

use crate::real::Real;

/// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWord<T> {
    pub hi: T,
    pub lo: T,
}

impl<T: Real> DoubleWord<T> {
    pub fn new(hi: T, lo: T) -> Self {
        let (hi, lo) = fast_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn from_single(x: T) -> Self {
        Self {
            hi: x,
            lo: T::zero(),
        }
    }

    pub fn value(self) -> T {
        self.hi + self.lo
    }

    pub fn mul_single(self, z: T) -> Self {
        let (p, e) = two_prod(self.hi, z);
        let e = self.lo.mul_add(z, e);
        Self::new(p, e)
    }

    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        Self::new(s, e)
    }
}

#[inline]
pub fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn fast_two_sum<T: Real>(a: T, b: T) -> (T, T) {
    if !a.is_finite() {
        return (a + b, T::zero());
    }
    let (a, b) = if a.abs() >= b.abs() { (a, b) } else { (b, a) };
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
pub fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Evaluates `sum_j coeffs[j] * z^j` by Horner's rule in double-word arithmetic.
pub fn horner<T: Real>(coeffs: &[DoubleWord<T>], z: T) -> T {
    let mut acc = match coeffs.last() {
        Some(&c) => c,
        None => return T::zero(),
    };
    for &c in coeffs.iter().rev().skip(1) {
        acc = acc.mul_single(z).add(c);
    }
    acc.value()
}

/// Compensated (Neumaier) summation.
pub fn sum<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let mut s = T::zero();
    let mut c = T::zero();
    for v in values {
        let (t, e) = two_sum(s, v);
        s = t;
        c = c + e;
    }
    s + c
}
