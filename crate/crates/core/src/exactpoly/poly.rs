use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{format_rational, Rational};
use crate::error::{Error, Result};

/// A polynomial variable. Entries `x[i,j]` sort position-major, followed by
/// the deformation parameter `t`, then named auxiliary symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Matrix position `(i, j)`, 1-based.
    Entry(u16, u16),
    /// One-parameter subgroup parameter `t`.
    Deform,
    /// Free symbol used for parametrized evaluations.
    Symbol(&'static str),
}

impl Var {
    pub fn entry(i: usize, j: usize) -> Var {
        Var::Entry(i as u16, j as u16)
    }

    pub fn as_entry(self) -> Option<(usize, usize)> {
        match self {
            Var::Entry(i, j) => Some((i as usize, j as usize)),
            _ => None,
        }
    }

    fn latex(self) -> String {
        match self {
            Var::Entry(i, j) if i < 10 && j < 10 => format!("x_{{{i}{j}}}"),
            Var::Entry(i, j) => format!("x_{{{i},{j}}}"),
            Var::Deform => "t".to_string(),
            Var::Symbol(s) => match s.split_at(1) {
                (head, tail) if !tail.is_empty() => format!("{head}_{{{tail}}}"),
                _ => s.to_string(),
            },
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Entry(i, j) => write!(f, "x[{i},{j}]"),
            Var::Deform => write!(f, "t"),
            Var::Symbol(s) => write!(f, "{s}"),
        }
    }
}

/// Power product of variables, stored sorted by variable with positive
/// exponents. Ordered graded-lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut acc: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *acc.entry(v).or_insert(0) += e;
            }
        }
        Monomial(acc.into_iter().collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (va, ea) = self.0[i];
            let (vb, eb) = other.0[j];
            match va.cmp(&vb) {
                Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((va, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let d = other.0[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - d)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    fn cmp_lex(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, latex: bool) -> fmt::Result {
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 && !latex {
                write!(f, "*")?;
            }
            if latex {
                write!(f, "{}", v.latex())?;
                if e > 1 {
                    write!(f, "^{{{e}}}")?;
                }
            } else {
                write!(f, "{v}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.cmp_lex(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        self.fmt_with(f, false)
    }
}

/// Sparse polynomial with exact rational coefficients. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v))
    }

    pub fn x(i: usize, j: usize) -> Self {
        Self::var(Var::entry(i, j))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// The single term, when the polynomial is a nonzero monomial.
    pub fn as_single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        // multiplying by a monomial preserves the order, so rebuilding is fine
        Polynomial {
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces every variable in `assignment` by its image; other variables
    /// map to themselves.
    pub fn substitute(&self, assignment: &HashMap<Var, Polynomial>) -> Polynomial {
        let mut powers: HashMap<(Var, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = Polynomial::constant(c.clone());
            for &(v, e) in m.factors() {
                match assignment.get(&v) {
                    Some(img) => {
                        let p = powers.entry((v, e)).or_insert_with(|| img.pow(e));
                        acc = &acc * &*p;
                        if acc.is_zero() {
                            break;
                        }
                    }
                    None => kept.push((v, e)),
                }
            }
            if acc.is_zero() {
                continue;
            }
            let rest = Monomial(kept);
            for (n, a) in acc.terms {
                out.add_term(n.mul(&rest), a);
            }
        }
        out
    }

    /// Evaluates at the point given by `value`.
    pub fn eval(&self, value: impl Fn(Var) -> Rational) -> Rational {
        let mut cache: HashMap<Var, Rational> = HashMap::new();
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = cache.entry(v).or_insert_with(|| value(v));
                t *= num_traits::pow(x.clone(), e as usize);
                if t.is_zero() {
                    break;
                }
            }
            sum += t;
        }
        sum
    }

    pub fn derivative(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let rest = m.div(&Monomial::var(v)).expect("exponent checked");
            out.add_term(rest, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Exact quotient `self / divisor`; errors when a remainder is left.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        let (lm, lc) = divisor.leading_term().ok_or(Error::InexactDivision)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm).ok_or(Error::InexactDivision)?;
            let qc = c / &lc;
            rem = &rem - &divisor.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// LaTeX rendering, highest term first.
    pub fn to_latex(&self) -> String {
        struct Latex<'a>(&'a Polynomial);
        impl fmt::Display for Latex<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, true)
            }
        }
        Latex(self).to_string()
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, latex: bool) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write_coeff(f, &a, latex)?;
                continue;
            }
            if !a.is_one() {
                write_coeff(f, &a, latex)?;
                if !latex {
                    write!(f, "*")?;
                }
            }
            m.fmt_with(f, latex)?;
        }
        Ok(())
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, a: &Rational, latex: bool) -> fmt::Result {
    if latex && !a.denom().is_one() {
        write!(f, "\\frac{{{}}}{{{}}}", a.numer(), a.denom())
    } else {
        write!(f, "{}", format_rational(a))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_polynomial(s)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        iter.fold(Polynomial::zero(), |acc, p| &acc + &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn x(i: usize, j: usize) -> Polynomial {
        Polynomial::x(i, j)
    }

    #[test]
    fn grlex_orders_by_degree_then_position() {
        let a = Monomial::var(Var::entry(1, 3));
        let b = Monomial::var(Var::entry(2, 4));
        let ab = a.mul(&b);
        assert!(ab > a);
        assert!(a > b);
        assert!(b > Monomial::var(Var::Deform));
        assert!(Monomial::var(Var::Deform) > Monomial::one());
    }

    #[test]
    fn no_zero_coefficients_are_stored() {
        let p = &x(1, 3) - &x(1, 3);
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn display_is_canonical() {
        let p = &(&x(1, 3) * &x(2, 4)) - &(&x(1, 4) * &x(2, 3));
        assert_eq!(p.to_string(), "x[1,3]*x[2,4] - x[1,4]*x[2,3]");
        let q = &p.scale(&Rational::new(3.into(), 2.into())) + &Polynomial::constant(rat(-1));
        assert_eq!(q.to_string(), "3/2*x[1,3]*x[2,4] - 3/2*x[1,4]*x[2,3] - 1");
    }

    #[test]
    fn substitute_zero_kills_monomial() {
        let f = &x(1, 3) * &x(2, 4);
        let a = HashMap::from([(Var::entry(1, 3), Polynomial::zero())]);
        assert!(f.substitute(&a).is_zero());
    }

    #[test]
    fn substitute_identity() {
        let f = x(2, 3);
        assert_eq!(f.substitute(&HashMap::new()), f);
    }

    #[test]
    fn substitute_column_operation() {
        let t = Polynomial::var(Var::Deform);
        let f = x(2, 4);
        let a = HashMap::from([(Var::entry(2, 4), &x(2, 4) + &(&t * &x(2, 3)))]);
        assert_eq!(f.substitute(&a).to_string(), "x[2,3]*t + x[2,4]");
    }

    #[test]
    fn exact_division_recovers_factor() {
        let f = &x(1, 2) + &x(2, 3);
        let g = &(&x(1, 3) - &Polynomial::one()) * &x(3, 4);
        let h = &f * &g;
        assert_eq!(h.div_exact(&g).unwrap(), f);
        assert_eq!(h.div_exact(&f).unwrap(), g);
        assert!(f.div_exact(&x(3, 4)).is_err());
    }

    #[test]
    fn derivative_and_eval() {
        let f = &x(1, 2).pow(3) * &x(2, 3);
        let d = f.derivative(Var::entry(1, 2));
        assert_eq!(d.to_string(), "3*x[1,2]^2*x[2,3]");
        let v = d.eval(|v| match v {
            Var::Entry(1, 2) => rat(2),
            _ => rat(5),
        });
        assert_eq!(v, rat(60));
    }
}
