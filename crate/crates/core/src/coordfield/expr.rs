//! Polynomials over `Rational` in line variables and unit-circle pairs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::exact::{render, Rational};

/// How a chart coordinate enters the coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// A polynomial variable `x`.
    Line,
    /// An angle `θ`, present only through `c = cos θ` and `s = sin θ`.
    Angle,
}

/// `Π x_i^{p_i} · Π s_j` where `x_i` is the line variable or `cos` of
/// coordinate `i`, and `s_j = sin` of coordinate `j` for each set bit `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    powers: Vec<u32>,
    sines: u64,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(i: usize) -> Self {
        let mut powers = vec![0; i + 1];
        powers[i] = 1;
        Self { powers, sines: 0 }
    }

    pub fn sin(i: usize) -> Self {
        Self {
            powers: Vec::new(),
            sines: 1 << i,
        }
    }

    pub fn power(&self, i: usize) -> u32 {
        self.powers.get(i).copied().unwrap_or(0)
    }

    pub fn has_sin(&self, i: usize) -> bool {
        self.sines & (1 << i) != 0
    }

    /// Total degree; circle variables count one each.
    pub fn degree(&self) -> u32 {
        self.powers.iter().sum::<u32>() + self.sines.count_ones()
    }

    fn trimmed(mut powers: Vec<u32>, sines: u64) -> Self {
        while powers.last() == Some(&0) {
            powers.pop();
        }
        Self { powers, sines }
    }

    fn with_power(&self, i: usize, p: u32) -> Self {
        let mut powers = self.powers.clone();
        if powers.len() <= i {
            powers.resize(i + 1, 0);
        }
        powers[i] = p;
        Self::trimmed(powers, self.sines)
    }

    fn without_sin(&self, i: usize) -> Self {
        Self {
            powers: self.powers.clone(),
            sines: self.sines & !(1 << i),
        }
    }

    fn times(&self, other: &Self) -> (Self, u64) {
        let len = self.powers.len().max(other.powers.len());
        let powers = (0..len).map(|i| self.power(i) + other.power(i)).collect();
        let overlap = self.sines & other.sines;
        (
            Self::trimmed(powers, (self.sines | other.sines) & !overlap),
            overlap,
        )
    }

    /// All monomials of degree at most `d`, in canonical order.
    pub fn up_to_degree(kinds: &[VarKind], d: u32) -> Vec<Monomial> {
        fn go(kinds: &[VarKind], i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
            if i == kinds.len() {
                out.push(Monomial::trimmed(cur.powers.clone(), cur.sines));
                return;
            }
            let sine_options: &[u32] = match kinds[i] {
                VarKind::Line => &[0],
                VarKind::Angle => &[0, 1],
            };
            for &e in sine_options {
                if e > left {
                    continue;
                }
                for p in 0..=left - e {
                    cur.powers[i] = p;
                    if e == 1 {
                        cur.sines |= 1 << i;
                    }
                    go(kinds, i + 1, left - e - p, cur, out);
                    cur.sines &= !(1 << i);
                    cur.powers[i] = 0;
                }
            }
        }
        let mut cur = Monomial {
            powers: vec![0; kinds.len()],
            sines: 0,
        };
        let mut out = Vec::new();
        go(kinds, 0, d, &mut cur, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

/// Canonical element of the coefficient ring: no `sin` appears squared and
/// every stored coefficient is nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymExpr {
    terms: BTreeMap<Monomial, Rational>,
}

impl SymExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// The line variable (or `cos`) of coordinate `i`.
    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i), Rational::one())
    }

    /// `sin` of angle coordinate `i`.
    pub fn sin(i: usize) -> Self {
        Self::term(Monomial::sin(i), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn accumulate(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c · m · Π_{j ∈ overlap} (1 − c_j²)`.
    fn accumulate_reduced(&mut self, m: Monomial, c: Rational, overlap: u64) {
        if overlap == 0 {
            self.accumulate(m, c);
            return;
        }
        let j = overlap.trailing_zeros() as usize;
        let rest = overlap & !(1 << j);
        let p = m.power(j);
        self.accumulate_reduced(m.with_power(j, p + 2), -c.clone(), rest);
        self.accumulate_reduced(m, c, rest);
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// `∂/∂(coordinate i)`.
    pub fn derivative(&self, i: usize, kind: VarKind) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let p = m.power(i);
            match kind {
                VarKind::Line => {
                    if p > 0 {
                        out.accumulate(
                            m.with_power(i, p - 1),
                            c * Rational::from_integer(p.into()),
                        );
                    }
                }
                VarKind::Angle => {
                    // d(c^p) = -p c^{p-1} s, d(s) = c
                    if m.has_sin(i) {
                        let base = m.without_sin(i);
                        if p > 0 {
                            let lowered = base.with_power(i, p - 1);
                            out.accumulate_reduced(
                                lowered,
                                -c * Rational::from_integer(p.into()),
                                1 << i,
                            );
                        }
                        out.accumulate(base.with_power(i, p + 1), c.clone());
                    } else if p > 0 {
                        let (shifted, _) = m.with_power(i, p - 1).times(&Monomial::sin(i));
                        out.accumulate(shifted, -c * Rational::from_integer(p.into()));
                    }
                }
            }
        }
        out
    }

    /// Value at a point: `values[i]` is the line value or `cos`, `sines[i]` the `sin`.
    pub fn eval(&self, values: &[Rational], sines: &[Rational]) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &p) in m.powers.iter().enumerate() {
                for _ in 0..p {
                    v *= &values[i];
                }
            }
            for (i, s) in sines.iter().enumerate() {
                if m.has_sin(i) {
                    v *= s;
                }
            }
            total += v;
        }
        total
    }

    /// Renders with coordinate names; angle coordinates appear as `cos(θ)`, `sin(θ)`.
    pub fn render(&self, names: &[String], kinds: &[VarKind]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut factors = Vec::new();
            for (i, &p) in m.powers.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let base = match kinds[i] {
                    VarKind::Line => names[i].clone(),
                    VarKind::Angle => format!("cos({})", names[i]),
                };
                factors.push(if p == 1 { base } else { format!("{base}^{p}") });
            }
            for (i, name) in names.iter().enumerate() {
                if m.has_sin(i) {
                    factors.push(format!("sin({name})"));
                }
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if factors.is_empty() {
                out.push_str(&render(&mag));
            } else {
                if !mag.is_one() {
                    let _ = write!(out, "{}*", render(&mag));
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl Add for &SymExpr {
    type Output = SymExpr;
    fn add(self, rhs: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SymExpr {
    type Output = SymExpr;
    fn sub(self, rhs: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        SymExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &SymExpr {
    type Output = SymExpr;
    fn mul(self, rhs: &SymExpr) -> SymExpr {
        let mut out = SymExpr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let (m, overlap) = m1.times(m2);
                out.accumulate_reduced(m, c1 * c2, overlap);
            }
        }
        out
    }
}

impl From<Rational> for SymExpr {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}
