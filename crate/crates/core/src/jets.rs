//! Truncated power series in one deformation variable over exact
//! coefficients ("jets"), with an explicit factored-out leading power.
//!
//! A jet represents `eps^lead * (c_0 + c_1 eps + ... + c_K eps^K)`,
//! exact modulo `eps^(lead + K + 1)`. The explicit `lead` lets pure-eps
//! factors such as `(eps)_m` cancel against a global `1/eps` by a lead
//! decrement instead of a division.
//!
//! Coefficients are generic so jets can nest (a jet whose coefficients
//! are jets handles two deformation variables).

use crate::arith::{rat_int, Rational};
use num_traits::{One, Zero};

/// Errors from jet arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JetError {
    /// Division where the divisor's leading power exceeds the dividend's,
    /// or the divisor is zero: the caller must factor eps explicitly.
    SingularDivision,
    /// A derivative of order beyond the jet's truncation was requested.
    InsufficientOrder { requested: usize, order: usize },
}

impl std::fmt::Display for JetError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            JetError::SingularDivision => write!(f, "singular jet division"),
            JetError::InsufficientOrder { requested, order } => {
                write!(f, "derivative order {} exceeds jet order {}", requested, order)
            }
        }
    }
}

impl std::error::Error for JetError {}

/// Coefficient ring for jets. Implemented by `Rational` and by `Jet<C>`
/// itself, which is what makes nesting work.
pub trait JetCoeff: Clone + PartialEq + std::fmt::Debug {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_from_rat(q: &Rational) -> Self;
    fn c_is_zero(&self) -> bool;
    /// Whether the element is invertible in its ring.
    fn c_invertible(&self) -> bool;
    fn c_add(&self, o: &Self) -> Self;
    fn c_sub(&self, o: &Self) -> Self;
    fn c_mul(&self, o: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_inv(&self) -> Result<Self, JetError>;
}

impl JetCoeff for Rational {
    fn c_zero() -> Self {
        Rational::zero()
    }
    fn c_one() -> Self {
        Rational::one()
    }
    fn c_from_rat(q: &Rational) -> Self {
        q.clone()
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_invertible(&self) -> bool {
        !self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_neg(&self) -> Self {
        -self.clone()
    }
    fn c_inv(&self) -> Result<Self, JetError> {
        if self.is_zero() {
            Err(JetError::SingularDivision)
        } else {
            Ok(self.recip())
        }
    }
}

/// Truncated power series `eps^lead * sum coeffs[i] eps^i`.
///
/// The empty coefficient vector is the exact zero. Construction strips
/// leading zero coefficients into `lead`, so a nonzero jet always has an
/// invertible-or-nonzero constant term in its unit part.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<C: JetCoeff = Rational> {
    lead: usize,
    coeffs: Vec<C>,
}

/// Jets over plain rationals, the common case.
pub type EpsJet = Jet<Rational>;

impl<C: JetCoeff> Jet<C> {
    /// Normalizing constructor.
    pub fn new(lead: usize, mut coeffs: Vec<C>) -> Self {
        let mut lead = lead;
        while !coeffs.is_empty() && coeffs[0].c_is_zero() {
            // all-zero vectors collapse to the exact zero
            if coeffs.iter().all(|c| c.c_is_zero()) {
                return Jet { lead: 0, coeffs: Vec::new() };
            }
            coeffs.remove(0);
            lead += 1;
        }
        if coeffs.is_empty() {
            lead = 0;
        }
        Jet { lead, coeffs }
    }

    /// The exact zero jet.
    pub fn zero() -> Self {
        Jet { lead: 0, coeffs: Vec::new() }
    }

    /// Constant jet `c + 0 eps + ... + 0 eps^order`.
    pub fn constant_c(c: C, order: usize) -> Self {
        let mut coeffs = vec![C::c_zero(); order + 1];
        coeffs[0] = c;
        Jet::new(0, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> usize {
        self.lead
    }

    /// Unit-part coefficients (eps^lead factored out).
    pub fn unit_coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Absolute truncation order: the jet is exact modulo
    /// `eps^(order+1)`. The exact zero reports `usize::MAX`.
    pub fn order(&self) -> usize {
        if self.coeffs.is_empty() {
            usize::MAX
        } else {
            self.lead + self.coeffs.len() - 1
        }
    }

    /// Coefficient of `eps^i` for `i <= order`.
    pub fn coeff(&self, i: usize) -> C {
        assert!(i <= self.order(), "coefficient beyond truncation order");
        if i < self.lead || self.coeffs.is_empty() {
            C::c_zero()
        } else {
            self.coeffs[i - self.lead].clone()
        }
    }

    /// Whether the jet is invertible: nonzero with `lead == 0` and an
    /// invertible constant term.
    pub fn invertible(&self) -> bool {
        !self.is_zero() && self.lead == 0 && self.coeffs[0].c_invertible()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lead = self.lead.min(o.lead);
        let top = self.order().min(o.order());
        let mut coeffs = Vec::with_capacity(top - lead + 1);
        for i in lead..=top {
            coeffs.push(self.coeff(i).c_add(&o.coeff(i)));
        }
        Jet::new(lead, coeffs)
    }

    pub fn neg(&self) -> Self {
        Jet {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|c| c.c_neg()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Jet::zero();
        }
        let k = (self.coeffs.len() - 1).min(o.coeffs.len() - 1);
        let mut coeffs = vec![C::c_zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j > k {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].c_add(&a.c_mul(b));
            }
        }
        Jet::new(self.lead + o.lead, coeffs)
    }

    /// Multiplicative inverse of an invertible unit-part jet.
    pub fn recip_unit(&self) -> Result<Self, JetError> {
        if self.is_zero() || !self.coeffs[0].c_invertible() {
            return Err(JetError::SingularDivision);
        }
        let k = self.coeffs.len() - 1;
        let c0_inv = self.coeffs[0].c_inv()?;
        let mut inv = vec![C::c_zero(); k + 1];
        inv[0] = c0_inv.clone();
        for i in 1..=k {
            let mut acc = C::c_zero();
            for j in 1..=i {
                acc = acc.c_add(&self.coeffs[j].c_mul(&inv[i - j]));
            }
            inv[i] = acc.c_neg().c_mul(&c0_inv);
        }
        Ok(Jet { lead: 0, coeffs: inv })
    }

    /// Exact division. The divisor's lead must not exceed the dividend's;
    /// otherwise the configuration is singular and the caller has to
    /// factor eps explicitly.
    pub fn div(&self, o: &Self) -> Result<Self, JetError> {
        if o.is_zero() {
            return Err(JetError::SingularDivision);
        }
        if self.is_zero() {
            return Ok(Jet::zero());
        }
        if self.lead < o.lead {
            return Err(JetError::SingularDivision);
        }
        let inv = Jet { lead: 0, coeffs: o.coeffs.clone() }.recip_unit()?;
        let unit = Jet { lead: 0, coeffs: self.coeffs.clone() };
        let mut q = unit.mul(&inv);
        q.lead += self.lead - o.lead;
        Ok(q)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc: Option<Self> = None;
        for _ in 0..e {
            acc = Some(match acc {
                None => self.clone(),
                Some(a) => a.mul(self),
            });
        }
        acc.unwrap_or_else(|| Jet::constant_c(C::c_one(), 0))
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.c_is_zero() {
            return Jet::zero();
        }
        Jet::new(self.lead, self.coeffs.iter().map(|x| x.c_mul(c)).collect())
    }

    /// Multiply by eps: a lead increment.
    pub fn mul_eps(&self) -> Self {
        if self.is_zero() {
            return Jet::zero();
        }
        Jet { lead: self.lead + 1, coeffs: self.coeffs.clone() }
    }

    /// Divide by eps: a lead decrement, never a true division.
    pub fn div_eps(&self) -> Result<Self, JetError> {
        if self.is_zero() {
            return Ok(Jet::zero());
        }
        if self.lead == 0 {
            return Err(JetError::SingularDivision);
        }
        Ok(Jet { lead: self.lead - 1, coeffs: self.coeffs.clone() })
    }

    /// Compare two jets coefficient-by-coefficient through `eps^k`.
    pub fn eq_through_order(&self, o: &Self, k: usize) -> bool {
        assert!(self.order() >= k && o.order() >= k, "jets truncated below comparison order");
        (0..=k).all(|i| self.coeff(i) == o.coeff(i))
    }
}

impl Jet<Rational> {
    /// Constant rational jet.
    pub fn constant(q: &Rational, order: usize) -> Self {
        Jet::constant_c(q.clone(), order)
    }

    /// Integer constant jet.
    pub fn constant_int(i: i64, order: usize) -> Self {
        Jet::constant(&rat_int(i), order)
    }

    /// Linear jet `a0 + s*eps`, truncated at `order`.
    pub fn linear(a0: &Rational, s: i64, order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order.max(1) + 1];
        coeffs[0] = a0.clone();
        coeffs[1] = rat_int(s);
        Jet::new(0, coeffs)
    }

    /// Exact `h`-th derivative at eps = 0, i.e. `h! * coeff(h)`.
    /// Errors when `h` exceeds the truncation order.
    pub fn derivative_at_zero(&self, h: usize) -> Result<Rational, JetError> {
        if h > self.order() {
            return Err(JetError::InsufficientOrder { requested: h, order: self.order() });
        }
        let mut hf = Rational::one();
        for i in 2..=h as i64 {
            hf *= rat_int(i);
        }
        Ok(self.coeff(h) * hf)
    }
}

impl<C: JetCoeff> JetCoeff for Jet<C> {
    fn c_zero() -> Self {
        Jet::zero()
    }
    fn c_one() -> Self {
        Jet::constant_c(C::c_one(), 0)
    }
    fn c_from_rat(q: &Rational) -> Self {
        Jet::constant_c(C::c_from_rat(q), 0)
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_invertible(&self) -> bool {
        self.invertible()
    }
    fn c_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn c_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn c_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn c_neg(&self) -> Self {
        self.neg()
    }
    fn c_inv(&self) -> Result<Self, JetError> {
        if self.lead != 0 {
            return Err(JetError::SingularDivision);
        }
        self.recip_unit()
    }
}

/// Rising factorial `(a0 + s*eps)_m` as a jet of the given order. Factors
/// with zero constant term contribute their eps power to `lead`.
pub fn pochhammer_jet(a0: &Rational, s: i64, m: usize, order: usize) -> EpsJet {
    let mut acc = EpsJet::constant_int(1, order);
    for i in 0..m as i64 {
        let f = EpsJet::linear(&(a0 + rat_int(i)), s, order);
        acc = acc.mul(&f);
        if acc.is_zero() {
            return acc;
        }
    }
    acc
}

/// Binomial `C(x + s*eps, m)` for integer bottom `m`, defined as
/// `(x - m + 1 + s*eps)_m / m!`; zero for `m < 0`.
pub fn binom_jet(x: &Rational, s: i64, m: i64, order: usize) -> EpsJet {
    if m < 0 {
        return EpsJet::zero();
    }
    let base = x - rat_int(m - 1);
    pochhammer_jet(&base, s, m as usize, order).scale(&crate::arith::fact_recip(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{harmonic, rat};
    use proptest::prelude::*;

    fn j(coeffs: &[i64]) -> EpsJet {
        EpsJet::new(0, coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn product_of_linear_factors() {
        // (1 + eps)(1 - eps) = 1 - eps^2 at order 2
        let a = EpsJet::linear(&rat_int(1), 1, 2);
        let b = EpsJet::linear(&rat_int(1), -1, 2);
        assert_eq!(a.mul(&b), j(&[1, 0, -1]));
    }

    #[test]
    fn lead_cancellation_in_division() {
        // eps*(1+eps) / eps = 1 + eps
        let num = EpsJet::linear(&rat_int(1), 1, 2).mul_eps();
        let den = EpsJet::linear(&rat_int(0), 1, 2);
        let q = num.div(&den).unwrap();
        assert_eq!(q.coeff(0), rat_int(1));
        assert_eq!(q.coeff(1), rat_int(1));
        assert_eq!(q.lead(), 0);
    }

    #[test]
    fn division_by_higher_lead_is_singular() {
        let num = EpsJet::constant_int(1, 3);
        let den = EpsJet::linear(&rat_int(0), 1, 3);
        assert_eq!(num.div(&den), Err(JetError::SingularDivision));
    }

    #[test]
    fn pochhammer_examples() {
        // (1+eps)(2+eps)(3+eps) = 6 + 11 eps + 6 eps^2 + eps^3
        let p = pochhammer_jet(&rat_int(1), 1, 3, 3);
        assert_eq!(p, j(&[6, 11, 6, 1]));
        // (eps)(1+eps) has lead 1 with unit 1 + eps
        let p = pochhammer_jet(&rat_int(0), 1, 2, 2);
        assert_eq!(p.lead(), 1);
        assert_eq!(p.coeff(1), rat_int(1));
        assert_eq!(p.coeff(2), rat_int(1));
        // (1 - 2 eps)_1
        let p = pochhammer_jet(&rat_int(1), -2, 1, 1);
        assert_eq!(p, j(&[1, -2]));
    }

    #[test]
    fn derivative_is_harmonic_difference() {
        // d/dj C(n,j) realized as eps-derivative of n!/((1+eps)_j (1-eps)_{n-j})
        let n = 2usize;
        for (jv, expect) in [(0usize, rat(3, 2)), (1, rat_int(0))] {
            let num = EpsJet::constant(&Rational::from_integer(crate::arith::fact(n as u64)), 2);
            let den = pochhammer_jet(&rat_int(1), 1, jv, 2)
                .mul(&pochhammer_jet(&rat_int(1), -1, n - jv, 2));
            let x = num.div(&den).unwrap();
            assert_eq!(x.derivative_at_zero(1).unwrap(), expect);
            assert_eq!(x.derivative_at_zero(0).unwrap(), x.coeff(0));
        }
    }

    #[test]
    fn logarithmic_derivative_of_pochhammer() {
        // d/d eps (1+eps)_m at 0 equals m! * H_m
        for m in 0..=30usize {
            let p = pochhammer_jet(&rat_int(1), 1, m, 1);
            let d = p.derivative_at_zero(1).unwrap();
            let mf = Rational::from_integer(crate::arith::fact(m as u64));
            assert_eq!(d, mf * harmonic(m, 1));
        }
    }

    #[test]
    fn derivative_order_error() {
        let x = j(&[1, 2]);
        assert!(matches!(x.derivative_at_zero(2), Err(JetError::InsufficientOrder { .. })));
    }

    #[test]
    fn nested_jets_two_variables() {
        // f = (1 + eps + eta): inner variable eta as coefficients
        type J2 = Jet<EpsJet>;
        let one = EpsJet::constant_int(1, 1);
        let eta = EpsJet::linear(&rat_int(0), 1, 1);
        // coefficients of eps^0, eps^1: [1 + eta, 1]
        let f = J2::new(0, vec![one.clone().add(&eta), one.clone()]);
        let g = f.mul(&f);
        // (1 + eps + eta)^2 = 1 + 2 eta + eta^2 + 2 eps (1 + eta) + eps^2
        let c0 = g.coeff(0);
        assert_eq!(c0.coeff(0), rat_int(1));
        assert_eq!(c0.coeff(1), rat_int(2));
        let c1 = g.coeff(1);
        assert_eq!(c1.coeff(0), rat_int(2));
        assert_eq!(c1.coeff(1), rat_int(2));
    }

    proptest! {
        #[test]
        fn pochhammer_recurrence(num in -6i64..6, den in 1i64..6, s in -2i64..=2, m in 0usize..8) {
            let a = rat(num, den);
            let lhs = pochhammer_jet(&a, s, m + 1, 3);
            let last = EpsJet::linear(&(a.clone() + rat_int(m as i64)), s, 3);
            let rhs = pochhammer_jet(&a, s, m, 3).mul(&last);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mul_commutative_associative(xs in prop::collection::vec(-5i64..5, 3),
                                        ys in prop::collection::vec(-5i64..5, 3),
                                        zs in prop::collection::vec(-5i64..5, 3)) {
            let (x, y, z) = (j(&xs), j(&ys), j(&zs));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            let k = 2usize;
            let a = x.mul(&y).mul(&z);
            let b = x.mul(&y.mul(&z));
            if !a.is_zero() && !b.is_zero() && a.order() >= k && b.order() >= k {
                prop_assert!(a.eq_through_order(&b, k));
            } else {
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn self_division_is_one(xs in prop::collection::vec(-9i64..9, 5), c0 in 1i64..9) {
            let mut coeffs = vec![c0];
            coeffs.extend(&xs);
            let x = j(&coeffs);
            let q = x.div(&x).unwrap();
            prop_assert_eq!(q.coeff(0), rat_int(1));
            for i in 1..=q.order().min(4) {
                prop_assert_eq!(q.coeff(i), rat_int(0));
            }
        }
    }
}
