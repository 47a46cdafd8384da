//! Sparse multivariate polynomials with integer coefficients.
//!
//! Terms are keyed by exponent vectors compared lexicographically, so the
//! last key is the lex-leading monomial with variable 0 largest.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::IntegralDomain;

pub type Exponent = Vec<u8>;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

impl MPoly {
    pub fn constant(c: impl Into<BigInt>) -> MPoly {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponent::new(), c);
        }
        MPoly { terms }
    }

    /// The variable with index `var`.
    pub fn var(var: usize) -> MPoly {
        let mut e = vec![0u8; var + 1];
        e[var] = 1;
        MPoly::monomial(e, BigInt::one())
    }

    pub fn monomial(mut exp: Exponent, coeff: BigInt) -> MPoly {
        trim(&mut exp);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        MPoly { terms }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Exponent, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, exp: Exponent, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn mul_term(&self, exp: &[u8], coeff: &BigInt) -> MPoly {
        let mut out = MPoly::default();
        for (e, c) in &self.terms {
            out.terms.insert(mul_exp(e, exp), c * coeff);
        }
        out
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn checked_div(&self, divisor: &MPoly) -> Option<MPoly> {
        let (lead_exp, lead_coeff) = divisor.leading()?;
        let (lead_exp, lead_coeff) = (lead_exp.clone(), lead_coeff.clone());
        let mut rem = self.clone();
        let mut quot = MPoly::default();
        while let Some((e, c)) = rem.leading() {
            let qe = div_exp(e, &lead_exp)?;
            if !(c % &lead_coeff).is_zero() {
                return None;
            }
            let qc = c / &lead_coeff;
            for (de, dc) in &divisor.terms {
                rem.add_term(mul_exp(de, &qe), -(dc * &qc));
            }
            quot.add_term(qe, qc);
        }
        Some(quot)
    }
}

fn trim(e: &mut Exponent) {
    while e.last() == Some(&0) {
        e.pop();
    }
}

fn mul_exp(a: &[u8], b: &[u8]) -> Exponent {
    let mut out = vec![0u8; a.len().max(b.len())];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = a.get(k).copied().unwrap_or(0) + b.get(k).copied().unwrap_or(0);
    }
    out
}

fn div_exp(a: &[u8], b: &[u8]) -> Option<Exponent> {
    let mut out = vec![0u8; a.len().max(b.len())];
    for (k, slot) in out.iter_mut().enumerate() {
        let (x, y) = (a.get(k).copied().unwrap_or(0), b.get(k).copied().unwrap_or(0));
        *slot = x.checked_sub(y)?;
    }
    trim(&mut out);
    Some(out)
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(mut self) -> MPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        self + (-rhs)
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let (small, big) = if self.terms.len() <= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = MPoly::default();
        for (e, c) in &small.terms {
            for (ee, cc) in big.mul_term(e, c).terms {
                out.add_term(ee, cc);
            }
        }
        out
    }
}

impl Zero for MPoly {
    fn zero() -> MPoly {
        MPoly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MPoly {
    fn one() -> MPoly {
        MPoly::constant(1)
    }
}

impl IntegralDomain for MPoly {
    fn exact_div(&self, rhs: &Self) -> Self {
        self.checked_div(rhs).expect("Bareiss division is exact")
    }

    fn pivot_cost(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*v{v}")?,
                    _ => write!(f, "*v{v}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> MPoly {
        MPoly::var(i)
    }

    #[test]
    fn ring_identities() {
        let a = x(0) + x(1);
        let b = x(0) - x(1);
        assert_eq!(&a * &b, &x(0) * &x(0) - &x(1) * &x(1));
        assert!((a.clone() - a.clone()).is_zero());
        assert_eq!(a.clone() * MPoly::one(), a);
        assert_eq!((&a * &a).total_degree(), 2);
        assert_eq!((&a * &a).num_terms(), 3);
    }

    #[test]
    fn exact_division() {
        let a = x(0) * x(2) - x(1) * x(3) + MPoly::constant(2);
        let b = x(1) + x(4) * x(4);
        let prod = &a * &b;
        assert_eq!(prod.checked_div(&b), Some(a.clone()));
        assert_eq!(prod.checked_div(&a), Some(b));
        assert_eq!(x(0).checked_div(&x(1)), None);
        assert_eq!((x(0) * MPoly::constant(3)).checked_div(&(x(0) * MPoly::constant(2))), None);
        assert_eq!(a.checked_div(&MPoly::zero()), None);
    }
}
