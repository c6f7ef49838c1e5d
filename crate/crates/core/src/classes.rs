//! Divisor and curve classes as exact coefficient vectors.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::Zero;

use crate::error::{check_len, Result};
use crate::rational::Q;

macro_rules! class_vector {
    ($name:ident, $what:literal) => {
        #[doc = concat!("A ", $what, " class: exact coefficients in the model's ", $what, " basis.")]
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub struct $name(Vec<Q>);

        impl $name {
            pub fn new(coefficients: Vec<Q>) -> Self {
                Self(coefficients)
            }

            pub fn zero(len: usize) -> Self {
                Self(vec![Q::zero(); len])
            }

            /// The `index`-th basis vector.
            pub fn unit(len: usize, index: usize) -> Self {
                let mut v = vec![Q::zero(); len];
                v[index] = Q::from_integer(1.into());
                Self(v)
            }

            pub fn from_ints(coefficients: &[i64]) -> Self {
                Self(coefficients.iter().map(|&c| crate::rational::q(c)).collect())
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn coefficients(&self) -> &[Q] {
                &self.0
            }

            pub fn coefficient(&self, index: usize) -> &Q {
                &self.0[index]
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn scale(&self, factor: &Q) -> Self {
                Self(self.0.iter().map(|c| c * factor).collect())
            }

            /// `self + factor * other`, checking lengths.
            pub fn add_scaled(&self, factor: &Q, other: &Self) -> Result<Self> {
                check_len(concat!($what, " class combination"), self.len(), other.len())?;
                Ok(Self(
                    self.0
                        .iter()
                        .zip(&other.0)
                        .map(|(a, b)| a + factor * b)
                        .collect(),
                ))
            }

            /// Pads with zero coordinates for basis elements appended by later blowups.
            pub fn extended(&self, len: usize) -> Self {
                let mut v = self.0.clone();
                v.resize(len, Q::zero());
                Self(v)
            }

            /// Drops trailing coordinates, keeping the first `len`.
            pub fn truncated(&self, len: usize) -> Self {
                Self(self.0[..len.min(self.0.len())].to_vec())
            }

            pub(crate) fn set(&mut self, index: usize, value: Q) {
                self.0[index] = value;
            }

            /// Formats the class as a linear expression in the given basis names.
            pub fn display_with<'a>(&'a self, names: &'a [String]) -> LinearDisplay<'a> {
                LinearDisplay {
                    coefficients: &self.0,
                    names,
                }
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: Self) -> $name {
                assert_eq!(self.len(), rhs.len(), "class length mismatch");
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: Self) -> $name {
                assert_eq!(self.len(), rhs.len(), "class length mismatch");
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|a| -a).collect())
            }
        }
    };
}

class_vector!(DivisorClass, "divisor");
class_vector!(CurveClass, "curve");

/// Renders coefficients as `2h - E1 + 1/2 F1`; zero classes render as `0`.
pub struct LinearDisplay<'a> {
    coefficients: &'a [Q],
    names: &'a [String],
}

impl fmt::Display for LinearDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.coefficients.iter().zip(self.names) {
            if c.is_zero() {
                continue;
            }
            let negative = *c < Q::zero();
            let magnitude = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if magnitude == Q::from_integer(1.into()) {
                write!(f, "{name}")?;
            } else if magnitude.is_integer() {
                write!(f, "{magnitude}{name}")?;
            } else {
                write!(f, "{magnitude}*{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
