//! Truncated bivariate power series `sum c[i][j] x^i y^j`, `i <= dx`, `j <= dy`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Num;

use crate::error::{domain, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries<T> {
    dx: usize,
    dy: usize,
    coeffs: Vec<T>,
}

impl<T: Clone + Num> BivariateSeries<T> {
    pub fn zero(dx: usize, dy: usize) -> Self {
        BivariateSeries {
            dx,
            dy,
            coeffs: vec![T::zero(); (dx + 1) * (dy + 1)],
        }
    }

    pub fn one(dx: usize, dy: usize) -> Self {
        let mut s = Self::zero(dx, dy);
        s.coeffs[0] = T::one();
        s
    }

    /// Sum of monomials `c x^i y^j`; terms past the bounds are dropped.
    pub fn from_terms(dx: usize, dy: usize, terms: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut s = Self::zero(dx, dy);
        for (i, j, c) in terms {
            if i <= dx && j <= dy {
                let idx = s.index(i, j);
                s.coeffs[idx] = s.coeffs[idx].clone() + c;
            }
        }
        s
    }

    pub fn bounds(&self) -> (usize, usize) {
        (self.dx, self.dy)
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        i * (self.dy + 1) + j
    }

    /// Coefficient of `x^i y^j`; zero past the truncation bounds is not
    /// meaningful, so such requests return `None`.
    pub fn coeff(&self, i: usize, j: usize) -> Option<&T> {
        (i <= self.dx && j <= self.dy).then(|| &self.coeffs[self.index(i, j)])
    }

    fn same_shape(&self, other: &Self) {
        assert_eq!(
            (self.dx, self.dy),
            (other.dx, other.dy),
            "series truncation bounds differ"
        );
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.dx, self.dy);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse. Requires constant term one, which keeps the
    /// recurrence free of division.
    pub fn reciprocal(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(domain("reciprocal", "constant term must be 1"));
        }
        let mut g = Self::zero(self.dx, self.dy);
        for i in 0..=self.dx {
            for j in 0..=self.dy {
                if i == 0 && j == 0 {
                    g.coeffs[0] = T::one();
                    continue;
                }
                let mut acc = T::zero();
                for a in 0..=i {
                    for b in 0..=j {
                        if a == 0 && b == 0 {
                            continue;
                        }
                        let f = &self.coeffs[self.index(a, b)];
                        if f.is_zero() {
                            continue;
                        }
                        acc = acc + f.clone() * g.coeffs[g.index(i - a, j - b)].clone();
                    }
                }
                let idx = g.index(i, j);
                g.coeffs[idx] = T::zero() - acc;
            }
        }
        Ok(g)
    }
}

impl<T: Clone + Num> Add for &BivariateSeries<T> {
    type Output = BivariateSeries<T>;

    fn add(self, rhs: Self) -> BivariateSeries<T> {
        self.same_shape(rhs);
        BivariateSeries {
            dx: self.dx,
            dy: self.dy,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Clone + Num> Sub for &BivariateSeries<T> {
    type Output = BivariateSeries<T>;

    fn sub(self, rhs: Self) -> BivariateSeries<T> {
        self.same_shape(rhs);
        BivariateSeries {
            dx: self.dx,
            dy: self.dy,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Clone + Num> Neg for &BivariateSeries<T> {
    type Output = BivariateSeries<T>;

    fn neg(self) -> BivariateSeries<T> {
        &BivariateSeries::zero(self.dx, self.dy) - self
    }
}

impl<T: Clone + Num> Mul for &BivariateSeries<T> {
    type Output = BivariateSeries<T>;

    fn mul(self, rhs: Self) -> BivariateSeries<T> {
        self.same_shape(rhs);
        let mut out = BivariateSeries::<T>::zero(self.dx, self.dy);
        for a in 0..=self.dx {
            for b in 0..=self.dy {
                let f = &self.coeffs[self.index(a, b)];
                if f.is_zero() {
                    continue;
                }
                for c in 0..=self.dx - a {
                    for d in 0..=self.dy - b {
                        let g = &rhs.coeffs[rhs.index(c, d)];
                        if g.is_zero() {
                            continue;
                        }
                        let idx = out.index(a + c, b + d);
                        out.coeffs[idx] = out.coeffs[idx].clone() + f.clone() * g.clone();
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::combinat::binom;
    use crate::{ExactInt, ExactRat, IntSeries, RatSeries};

    #[test]
    fn geometric_series() {
        let one_minus_x = IntSeries::from_terms(6, 0, [(0, 0, 1.into()), (1, 0, (-1).into())]);
        let inv = one_minus_x.reciprocal().unwrap();
        for i in 0..=6 {
            assert_eq!(inv.coeff(i, 0), Some(&ExactInt::from(1)));
        }
        assert_eq!(inv.coeff(7, 0), None);
    }

    #[test]
    fn power_matches_binomial_theorem() {
        let s = IntSeries::from_terms(5, 5, [(0, 0, 1.into()), (1, 0, 1.into()), (0, 1, 1.into())]);
        let p = s.pow(5);
        // (1 + x + y)^5: coefficient of x^i y^j is 5! / (i! j! (5-i-j)!)
        for i in 0..=5usize {
            for j in 0..=5 - i {
                let expect: ExactInt = binom::<ExactInt>(5, i as i64) * binom::<ExactInt>(5 - i as i64, j as i64);
                assert_eq!(p.coeff(i, j), Some(&expect));
            }
        }
    }

    #[test]
    fn reciprocal_round_trip_over_rationals() {
        let half = ExactRat::new(1.into(), 2.into());
        let s = RatSeries::from_terms(
            4,
            3,
            [(0, 0, ExactRat::from_integer(1.into())), (1, 1, half.clone()), (2, 0, -half)],
        );
        let prod = &s * &s.reciprocal().unwrap();
        assert_eq!(prod, RatSeries::one(4, 3));
    }

    #[test]
    fn reciprocal_needs_unit_constant() {
        let s = IntSeries::from_terms(2, 2, [(1, 0, 1.into())]);
        assert!(s.reciprocal().is_err());
    }
}
