use super::multiindex::MultiIndex;
use super::poly::Poly;
use super::rational::Rational;
use num::{One, Zero};

/// Rational function `num / Π fᵢ^eᵢ` with the denominator kept in factored form.
///
/// Factors are non-constant polynomials normalized to leading coefficient one.
/// Sums take the factorwise maximum exponent as common denominator and every
/// operation cancels factors that divide the numerator exactly, so repeated
/// differentiation does not inflate the representation. Zero testing is exact:
/// the function vanishes iff its numerator is the zero polynomial.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

impl RatFunc {
    pub fn zero(nvars: usize) -> Self {
        RatFunc { num: Poly::zero(nvars), den: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        RatFunc { num: Poly::constant(nvars, c), den: Vec::new() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Vec::new() }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(Poly::var(nvars, i))
    }

    /// `num / den`; `None` if `den` is the zero polynomial.
    pub fn from_num_den(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (c, factors) = factor_denominator(&den, &[]);
        let mut out = RatFunc { num: num.scale(&(Rational::one() / c)), den: factors };
        out.cancel();
        Some(out)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    /// Expanded denominator polynomial.
    pub fn denominator(&self) -> Poly {
        self.den
            .iter()
            .fold(Poly::one(self.nvars()), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let mut common: Vec<(Poly, u32)> = self.den.clone();
        for (f, e) in &other.den {
            match common.iter_mut().find(|(g, _)| g == f) {
                Some((_, ce)) => *ce = (*ce).max(*e),
                None => common.push((f.clone(), *e)),
            }
        }
        let lift = |r: &RatFunc| -> Poly {
            common.iter().fold(r.num.clone(), |acc, (f, e)| {
                let have = r.den.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                if *e > have {
                    &acc * &f.pow(*e - have)
                } else {
                    acc
                }
            })
        };
        let mut out = RatFunc { num: &lift(self) + &lift(other), den: common };
        out.cancel();
        out
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        let mut den = self.den.clone();
        merge_factors(&mut den, &other.den);
        let mut out = RatFunc { num: &self.num * &other.num, den };
        out.cancel();
        out
    }

    /// `None` when dividing by the zero function.
    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(RatFunc::zero(self.nvars()));
        }
        let known: Vec<Poly> = self
            .den
            .iter()
            .chain(other.den.iter())
            .map(|(f, _)| f.clone())
            .collect();
        let (c, factors) = factor_denominator(&other.num, &known);
        let num = other
            .den
            .iter()
            .fold(self.num.scale(&(Rational::one() / c)), |acc, (f, e)| &acc * &f.pow(*e));
        let mut den = self.den.clone();
        merge_factors(&mut den, &factors);
        let mut out = RatFunc { num, den };
        out.cancel();
        Some(out)
    }

    pub fn partial(&self, i: usize) -> RatFunc {
        if self.den.is_empty() {
            return RatFunc::from_poly(self.num.partial(i));
        }
        // d(N / Π f^e) = (N' Π f − N Σ e_j f_j' Π_{l≠j} f_l) / Π f^{e+1}
        let prod_all = self.den.iter().fold(Poly::one(self.nvars()), |acc, (f, _)| &acc * f);
        let mut num = &self.num.partial(i) * &prod_all;
        for (j, (fj, ej)) in self.den.iter().enumerate() {
            let dfj = fj.partial(i);
            if dfj.is_zero() {
                continue;
            }
            let others = self
                .den
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != j)
                .fold(Poly::one(self.nvars()), |acc, (_, (f, _))| &acc * f);
            let term = &(&self.num * &dfj) * &others;
            num = &num - &term.scale(&Rational::from_integer((*ej).into()));
        }
        let den = self.den.iter().map(|(f, e)| (f.clone(), e + 1)).collect();
        let mut out = RatFunc { num, den };
        out.cancel();
        out
    }

    /// Exact value, or `None` at a pole.
    pub fn eval(&self, x: &[Rational]) -> Option<Rational> {
        let mut d = Rational::one();
        for (f, e) in &self.den {
            d *= num::pow(f.eval(x), *e as usize);
        }
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let d: f64 = self.den.iter().map(|(f, e)| f.eval_f64(x).powi(*e as i32)).product();
        self.num.eval_f64(x) / d
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 && may_divide(&self.num, f) {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }
}

fn may_divide(num: &Poly, f: &Poly) -> bool {
    match (num.leading(), f.leading()) {
        (Some((a, _)), Some((b, _))) => b.divides(a),
        _ => false,
    }
}

fn merge_factors(into: &mut Vec<(Poly, u32)>, from: &[(Poly, u32)]) {
    for (f, e) in from {
        match into.iter_mut().find(|(g, _)| g == f) {
            Some((_, ce)) => *ce += e,
            None => into.push((f.clone(), *e)),
        }
    }
}

fn monic(p: &Poly) -> (Rational, Poly) {
    let lc = p.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::one);
    let q = p.scale(&(Rational::one() / &lc));
    (lc, q)
}

/// Splits a nonzero polynomial into `c · Π fᵢ^eᵢ`: monomial content becomes
/// coordinate factors, known factors are divided out greedily, and the rest is
/// kept as one monic factor.
fn factor_denominator(p: &Poly, known: &[Poly]) -> (Rational, Vec<(Poly, u32)>) {
    let n = p.nvars();
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    let content = p.monomial_content().unwrap_or_else(|| MultiIndex::zeros(n));
    let mut rest = p.div_monomial(&content);
    for (i, &e) in content.entries().iter().enumerate() {
        if e > 0 {
            factors.push((Poly::var(n, i), e));
        }
    }
    for f in known {
        if f.is_constant() {
            continue;
        }
        let mut count = 0;
        while may_divide(&rest, f) {
            match rest.div_exact(f) {
                Some(q) => {
                    rest = q;
                    count += 1;
                }
                None => break,
            }
        }
        if count > 0 {
            merge_factors(&mut factors, &[(f.clone(), count)]);
        }
    }
    let (c, rest) = monic(&rest);
    if !rest.is_constant() {
        merge_factors(&mut factors, &[(rest, 1)]);
    }
    (c, factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn one_plus_x2() -> Poly {
        &Poly::one(2) + &(&Poly::var(2, 0) * &Poly::var(2, 0))
    }

    #[test]
    fn quotient_rule() {
        // d/dx (1 + x^2)^-1 = -2x / (1 + x^2)^2
        let f = RatFunc::from_num_den(Poly::one(2), one_plus_x2()).unwrap();
        let df = f.partial(0);
        let expected = RatFunc::from_num_den(Poly::var(2, 0).scale(&int(-2)), &one_plus_x2() * &one_plus_x2()).unwrap();
        assert!(df.sub(&expected).is_zero());
        assert_eq!(df.eval(&[int(1), int(0)]), Some(rat(-1, 2)));
    }

    #[test]
    fn cancellation_keeps_denominators_small() {
        let f = RatFunc::from_num_den(Poly::var(2, 0), one_plus_x2()).unwrap();
        let g = f.mul(&RatFunc::from_poly(one_plus_x2()));
        assert!(g.denominator_factors().is_empty());
        assert_eq!(g.as_poly(), Some(&Poly::var(2, 0)));
        let h = f.add(&f).add(&f.neg());
        assert_eq!(h.denominator_factors().len(), 1);
        assert!(h.sub(&f).is_zero());
    }

    #[test]
    fn division_and_poles() {
        let y = RatFunc::var(2, 1);
        let y2 = y.mul(&y);
        let inv = RatFunc::constant(2, int(1)).div(&y2).unwrap();
        assert_eq!(inv.denominator_factors(), &[(Poly::var(2, 1), 2)]);
        assert_eq!(inv.eval(&[int(0), int(0)]), None);
        assert_eq!(inv.eval(&[int(0), int(2)]), Some(rat(1, 4)));
        assert!(inv.mul(&y2).sub(&RatFunc::constant(2, int(1))).is_zero());
        assert!(y.div(&RatFunc::zero(2)).is_none());
    }
}
