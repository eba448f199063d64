//! Exact coefficient arithmetic over GF(p), p prime, and over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("missing second operand for binary operation")]
    MissingOperand,
}

/// The coefficient field: GF(p) for a prime p, or the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    PrimeField(u64),
    Rationals,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map(|dd| dd <= n).unwrap_or(false) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::PrimeField(p) => *p,
            FieldSpec::Rationals => 0,
        }
    }

    pub fn zero(&self) -> Coef {
        self.from_i64(0)
    }

    pub fn one(&self) -> Coef {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coef {
        match self {
            FieldSpec::PrimeField(p) => {
                let r = n.rem_euclid(*p as i64) as u64;
                Coef::Fp { p: *p, val: r }
            }
            FieldSpec::Rationals => Coef::Rat(BigRational::from(BigInt::from(n))),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Coef {
        match self {
            FieldSpec::PrimeField(p) => {
                let m = BigInt::from(*p);
                let r = ((n % &m) + &m) % &m;
                let val: u64 = r.try_into().expect("residue fits u64");
                Coef::Fp { p: *p, val }
            }
            FieldSpec::Rationals => Coef::Rat(BigRational::from(n.clone())),
        }
    }
}

/// A canonical field element: residue in `[0, p)` for GF(p), reduced fraction
/// with positive denominator for the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coef {
    Fp { p: u64, val: u64 },
    Rat(BigRational),
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

impl Coef {
    pub fn field(&self) -> FieldSpec {
        match self {
            Coef::Fp { p, .. } => FieldSpec::PrimeField(*p),
            Coef::Rat(_) => FieldSpec::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coef::Fp { val, .. } => *val == 0,
            Coef::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coef::Fp { val, .. } => *val == 1,
            Coef::Rat(r) => r.is_one(),
        }
    }

    fn same_field(&self, other: &Coef) -> Result<(), FieldError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Coef) -> Coef {
        self.same_field(other).expect("field mismatch in add");
        match (self, other) {
            (Coef::Fp { p, val: a }, Coef::Fp { val: b, .. }) => Coef::Fp {
                p: *p,
                val: (a + b) % p,
            },
            (Coef::Rat(a), Coef::Rat(b)) => Coef::Rat(a + b),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Coef) -> Coef {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Coef {
        match self {
            Coef::Fp { p, val } => Coef::Fp {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
            Coef::Rat(a) => Coef::Rat(-a),
        }
    }

    pub fn mul(&self, other: &Coef) -> Coef {
        self.same_field(other).expect("field mismatch in mul");
        match (self, other) {
            (Coef::Fp { p, val: a }, Coef::Fp { val: b, .. }) => Coef::Fp {
                p: *p,
                val: mulmod(*a, *b, *p),
            },
            (Coef::Rat(a), Coef::Rat(b)) => Coef::Rat(a * b),
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Coef, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Coef::Fp { p, val } => Coef::Fp {
                p: *p,
                val: powmod(*val, p - 2, *p),
            },
            Coef::Rat(a) => Coef::Rat(a.recip()),
        })
    }

    pub fn div(&self, other: &Coef) -> Result<Coef, FieldError> {
        self.same_field(other)?;
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u64) -> Coef {
        match self {
            Coef::Fp { p, val } => Coef::Fp {
                p: *p,
                val: powmod(*val, e, *p),
            },
            Coef::Rat(a) => {
                let mut r = BigRational::one();
                for _ in 0..e {
                    r *= a;
                }
                Coef::Rat(r)
            }
        }
    }

    /// Renders the canonical form: a residue for GF(p), `a` or `a/b` for rationals.
    pub fn render(&self) -> String {
        match self {
            Coef::Fp { val, .. } => val.to_string(),
            Coef::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
        }
    }

    /// True for rationals with negative numerator; GF(p) residues are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Coef::Fp { .. } => false,
            Coef::Rat(r) => r.numer().is_negative(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// Checked dispatch over the field operations, validating field agreement and
/// nonzero divisors.
pub fn coef_arith(op: CoefOp, a: &Coef, b: Option<&Coef>) -> Result<Coef, FieldError> {
    fn binop<'b>(a: &Coef, b: Option<&'b Coef>) -> Result<&'b Coef, FieldError> {
        let b = b.ok_or(FieldError::MissingOperand)?;
        if a.field() != b.field() {
            return Err(FieldError::FieldMismatch);
        }
        Ok(b)
    }
    match op {
        CoefOp::Add => Ok(a.add(binop(a, b)?)),
        CoefOp::Sub => Ok(a.sub(binop(a, b)?)),
        CoefOp::Mul => Ok(a.mul(binop(a, b)?)),
        CoefOp::Div => a.div(binop(a, b)?),
        CoefOp::Neg => Ok(a.neg()),
        CoefOp::Inv => a.inv(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_add_and_char() {
        let f = FieldSpec::prime(2).unwrap();
        let one = f.one();
        assert!(one.add(&one).is_zero());
        // 2*c = 0 for any c in characteristic 2
        let two = f.from_i64(2);
        assert!(two.mul(&one).is_zero());
    }

    #[test]
    fn rational_inverse_round_trip() {
        let f = FieldSpec::Rationals;
        let three = f.from_i64(3);
        let third = f.one().div(&three).unwrap();
        assert!(third.mul(&three).is_one());
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(FieldSpec::prime(6), Err(FieldError::NotPrime(6)));
        assert_eq!(FieldSpec::prime(1), Err(FieldError::NotPrime(1)));
        assert!(FieldSpec::prime(101).is_ok());
    }

    #[test]
    fn mismatch_and_zero_division() {
        let a = FieldSpec::prime(2).unwrap().one();
        let b = FieldSpec::Rationals.one();
        assert_eq!(
            coef_arith(CoefOp::Add, &a, Some(&b)),
            Err(FieldError::FieldMismatch)
        );
        let z = FieldSpec::Rationals.zero();
        assert_eq!(coef_arith(CoefOp::Inv, &z, None), Err(FieldError::DivisionByZero));
        assert_eq!(
            coef_arith(CoefOp::Div, &b, Some(&z)),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn frobenius_gf5() {
        let f = FieldSpec::prime(5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let ca = f.from_i64(a);
                let cb = f.from_i64(b);
                let lhs = ca.add(&cb).pow(5);
                let rhs = ca.pow(5).add(&cb.pow(5));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
