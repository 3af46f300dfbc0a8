//! Prime fields F_p with canonical representatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PRIME: u64 = 1 << 31;

/// The field of integers modulo a prime `p <= 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn element(self, value: u64) -> FieldElement {
        FieldElement { value: (value % self.p as u64) as u32, field: self }
    }

    pub fn zero(self) -> FieldElement {
        self.element(0)
    }

    pub fn one(self) -> FieldElement {
        self.element(1)
    }

    pub fn reduce(self, value: i64) -> u32 {
        value.rem_euclid(self.p as i64) as u32
    }

    // Raw arithmetic on canonical representatives, used by the matrix code.

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 { (s - self.p as u64) as u32 } else { s as u32 }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b { a - b } else { (a as u64 + self.p as u64 - b as u64) as u32 }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 { 0 } else { self.p - a }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Result<u32> {
        if a % self.p == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }
}

/// An element of a [`PrimeField`], always stored in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: PrimeField,
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    fn same_field(self, other: Self) -> Result<PrimeField> {
        if self.field != other.field {
            return Err(Error::MixedFields { left: self.field.p, right: other.field.p });
        }
        Ok(self.field)
    }

    fn wrap(field: PrimeField, value: u32) -> Self {
        Self { value, field }
    }

    pub fn add(self, other: Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(Self::wrap(f, f.add(self.value, other.value)))
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(Self::wrap(f, f.sub(self.value, other.value)))
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(Self::wrap(f, f.mul(self.value, other.value)))
    }

    pub fn neg(self) -> Self {
        Self::wrap(self.field, self.field.neg(self.value))
    }

    pub fn inv(self) -> Result<Self> {
        Ok(Self::wrap(self.field, self.field.inv(self.value)?))
    }

    pub fn pow(self, e: u64) -> Self {
        Self::wrap(self.field, self.field.pow(self.value, e))
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Least prime `q >= k`. Panics for `k < 2` or results above 2^31.
pub fn smallest_prime_at_least(k: u64) -> u64 {
    assert!(k >= 2, "smallest_prime_at_least needs k >= 2");
    let mut q = k;
    while !is_prime(q) {
        q += 1;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_field_arithmetic() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.element(2).add(f5.element(4)).unwrap().value(), 1);
        assert_eq!(f5.element(2).inv().unwrap().value(), 3);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.element(1).neg().value(), 1);
        assert_eq!(f5.element(3).sub(f5.element(4)).unwrap().value(), 4);
        assert_eq!(f5.element(3).pow(3).value(), 2);
    }

    #[test]
    fn errors() {
        let f5 = PrimeField::new(5).unwrap();
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(
            f5.element(1).add(f7.element(1)),
            Err(Error::MixedFields { left: 5, right: 7 })
        );
        assert_eq!(f5.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert!(PrimeField::new((1 << 31) - 1).is_ok());
    }

    #[test]
    fn next_primes() {
        assert_eq!(smallest_prime_at_least(3), 3);
        assert_eq!(smallest_prime_at_least(8), 11);
        assert_eq!(smallest_prime_at_least(2), 2);
    }
}
