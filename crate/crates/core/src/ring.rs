//! Exact arithmetic in `Z[q^±1, p^±1]` and in its quadratic extension by
//! `Y`, where `Y^2 = p^-2 - q^2 + p^2 q^2 - 1`.
//!
//! The parameter `p` stands for `q^α`, so every exponent is an integer and
//! no rational functions ever appear. Coefficients are arbitrary precision.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Exponent pair of a monomial `q^q p^p`. Orders by `q` first, then `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent {
    pub q: i32,
    pub p: i32,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent { q: 0, p: 0 };

    pub fn new(q: i32, p: i32) -> Self {
        Exponent { q, p }
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent {
            q: self.q + rhs.q,
            p: self.p + rhs.p,
        }
    }
}

/// The two exponent rewritings that act on invariant values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Substitution {
    /// `q -> q^-1, p -> p^-1`: the effect of mirroring a link.
    Reflect,
    /// `p -> q^-1 p^-1` with `q` fixed: the effect of reversing orientation.
    Invert,
}

impl Substitution {
    pub fn apply(self, e: Exponent) -> Exponent {
        match self {
            Substitution::Reflect => Exponent { q: -e.q, p: -e.p },
            Substitution::Invert => Exponent {
                q: e.q - e.p,
                p: -e.p,
            },
        }
    }
}

/// Sparse Laurent polynomial in `q` and `p` with integer coefficients.
///
/// No stored coefficient is ever zero, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0, 0)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LaurentPoly::monomial(c, 0, 0)
    }

    /// `c q^eq p^ep`.
    pub fn monomial(c: impl Into<BigInt>, eq: i32, ep: i32) -> Self {
        let mut out = LaurentPoly::zero();
        out.add_term(Exponent::new(eq, ep), c.into());
        out
    }

    pub fn q() -> Self {
        LaurentPoly::monomial(1, 1, 0)
    }

    pub fn p() -> Self {
        LaurentPoly::monomial(1, 0, 1)
    }

    /// Builds a polynomial from `(eq, ep, coeff)` triples, summing repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, i32, C)>,
        C: Into<BigInt>,
    {
        let mut out = LaurentPoly::zero();
        for (eq, ep, c) in terms {
            out.add_term(Exponent::new(eq, ep), c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Exponent::ZERO).is_some_and(|c| c.is_one())
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: ascending `e_q`, then ascending `e_p`.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, eq: i32, ep: i32) -> BigInt {
        self.terms
            .get(&Exponent::new(eq, ep))
            .cloned()
            .unwrap_or_default()
    }

    fn add_term(&mut self, e: Exponent, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += a * b` without materialising the product.
    pub fn add_product(&mut self, a: &LaurentPoly, b: &LaurentPoly) {
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                self.add_term(*ea + *eb, ca * cb);
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by the monomial `q^eq p^ep`.
    pub fn shift(&self, eq: i32, ep: i32) -> LaurentPoly {
        let s = Exponent::new(eq, ep);
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (*e + s, v.clone()))
                .collect(),
        }
    }

    pub fn substitute(&self, sub: Substitution) -> LaurentPoly {
        // Both substitutions are bijections on exponents, so no terms merge.
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (sub.apply(*e), c.clone()))
                .collect(),
        }
    }

    /// Invariant under `q -> q^-1, p -> p^-1`.
    pub fn is_palindromic(&self) -> bool {
        self.substitute(Substitution::Reflect) == *self
    }

    /// Invariant under `p -> q^-1 p^-1`.
    pub fn is_inversion_symmetric(&self) -> bool {
        self.substitute(Substitution::Invert) == *self
    }

    pub fn eval(&self, q: f64, p: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * q.powi(e.q) * p.powi(e.p))
            .sum()
    }

    /// Deterministic text form; same as `Display`.
    pub fn canonical_string(&self) -> String {
        self.to_string()
    }

    /// JSON array of `{eq, ep, coeff}` objects in canonical order.
    /// Coefficients that do not fit in an `i64` are written as strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| {
                    let coeff = match c.to_i64() {
                        Some(v) => json!(v),
                        None => json!(c.to_string()),
                    };
                    json!({ "eq": e.q, "ep": e.p, "coeff": coeff })
                })
                .collect(),
        )
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::parse(value.to_string(), "expected an array of terms"))?;
        let mut out = LaurentPoly::zero();
        for t in arr {
            let exp = |key: &str| -> Result<i32> {
                t.get(key)
                    .and_then(Value::as_i64)
                    .and_then(|v| i32::try_from(v).ok())
                    .ok_or_else(|| Error::parse(t.to_string(), format!("missing or bad {key:?}")))
            };
            let coeff = match t.get("coeff") {
                Some(Value::Number(n)) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::parse(n.to_string(), "coefficient is not an integer"))?,
                Some(Value::String(s)) => s
                    .parse::<BigInt>()
                    .map_err(|_| Error::parse(s.clone(), "coefficient is not an integer"))?,
                _ => return Err(Error::parse(t.to_string(), "missing \"coeff\"")),
            };
            out.add_term(Exponent::new(exp("eq")?, exp("ep")?), coeff);
        }
        Ok(out)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: Exponent) -> fmt::Result {
    let mut parts = Vec::with_capacity(2);
    for (name, k) in [("p", e.p), ("q", e.q)] {
        match k {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{k}")),
        }
    }
    write!(f, "{}", parts.join(" "))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if *e == Exponent::ZERO {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag} ")?;
                }
                write_monomial(f, *e)?;
            }
        }
        Ok(())
    }
}

/// Parses text such as `-1 + p^-2 - q^2 + p^2 q^2` or `3 q^-2 p`.
/// Terms may come in any order and repeated monomials are summed; an
/// optional `*` may separate factors.
impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = PolyParser {
            chars: s.char_indices().peekable(),
            src: s,
        };
        parser.parse()
    }
}

struct PolyParser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
}

impl PolyParser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn rest(&mut self) -> String {
        match self.chars.peek() {
            Some((i, _)) => self.src[*i..].chars().take(12).collect(),
            None => "<end>".to_string(),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let mut out = String::new();
        while let Some((_, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                out.push(*c);
                self.chars.next();
            } else {
                break;
            }
        }
        (!out.is_empty()).then_some(out)
    }

    fn parse(&mut self) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero();
        let mut first = true;
        loop {
            self.skip_ws();
            let mut sign = 1;
            match self.chars.peek() {
                None if first => return Err(Error::parse("<end>", "empty polynomial")),
                None => break,
                Some((_, '+')) => {
                    self.chars.next();
                }
                Some((_, '-')) => {
                    sign = -1;
                    self.chars.next();
                }
                Some(_) if first => {}
                Some(_) => {
                    let tok = self.rest();
                    return Err(Error::parse(tok, "expected '+' or '-' between terms"));
                }
            }
            first = false;
            let (e, c) = self.term()?;
            out.add_term(e, c * sign);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Exponent, BigInt)> {
        self.skip_ws();
        let mut coeff = BigInt::one();
        let mut seen = false;
        if let Some(d) = self.digits() {
            coeff = d.parse().expect("digit string");
            seen = true;
        }
        let mut e = Exponent::ZERO;
        loop {
            self.skip_ws();
            if self.chars.peek().is_some_and(|(_, c)| *c == '*') {
                self.chars.next();
                self.skip_ws();
            }
            let var = match self.chars.peek() {
                Some((_, c @ ('p' | 'q'))) => *c,
                _ => break,
            };
            self.chars.next();
            seen = true;
            let mut k = 1i32;
            if self.chars.peek().is_some_and(|(_, c)| *c == '^') {
                self.chars.next();
                let neg = self.chars.peek().is_some_and(|(_, c)| *c == '-');
                if neg {
                    self.chars.next();
                }
                let tok = self.rest();
                let d = self
                    .digits()
                    .ok_or_else(|| Error::parse(tok.clone(), "expected exponent"))?;
                k = d
                    .parse()
                    .map_err(|_| Error::parse(tok, "exponent out of range"))?;
                if neg {
                    k = -k;
                }
            }
            if var == 'q' {
                e.q += k;
            } else {
                e.p += k;
            }
        }
        if !seen {
            let tok = self.rest();
            return Err(Error::parse(tok, "expected a term"));
        }
        Ok((e, coeff))
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        out.add_product(self, rhs);
        out
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty { (&self).$m(rhs) }
        }
    )*};
}

forward_owned!(LaurentPoly, Add add, Sub sub, Mul mul);

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

/// `p^-2 - q^2 + p^2 q^2 - 1`, the value of `Y^2`.
pub fn y_squared() -> &'static LaurentPoly {
    static YSQ: OnceLock<LaurentPoly> = OnceLock::new();
    YSQ.get_or_init(|| LaurentPoly::from_terms([(0, -2, 1), (2, 0, -1), (2, 2, 1), (0, 0, -1)]))
}

/// Element `even + odd * Y` of the quadratic extension.
///
/// Products are reduced on the spot, so the representation is always
/// linear in `Y`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingElem {
    even: LaurentPoly,
    odd: LaurentPoly,
}

impl RingElem {
    pub fn new(even: LaurentPoly, odd: LaurentPoly) -> Self {
        RingElem { even, odd }
    }

    pub fn zero() -> Self {
        RingElem::default()
    }

    pub fn one() -> Self {
        LaurentPoly::one().into()
    }

    pub fn y() -> Self {
        RingElem {
            even: LaurentPoly::zero(),
            odd: LaurentPoly::one(),
        }
    }

    pub fn even(&self) -> &LaurentPoly {
        &self.even
    }

    pub fn odd(&self) -> &LaurentPoly {
        &self.odd
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.odd.is_zero() && self.even.is_one()
    }

    pub fn is_y_free(&self) -> bool {
        self.odd.is_zero()
    }

    pub fn as_y_free(&self) -> Result<&LaurentPoly> {
        if self.is_y_free() {
            Ok(&self.even)
        } else {
            Err(Error::NotYFree)
        }
    }

    pub fn into_y_free(self) -> Result<LaurentPoly> {
        if self.is_y_free() {
            Ok(self.even)
        } else {
            Err(Error::NotYFree)
        }
    }

    /// `self += a * b`, reducing `Y^2` on the way.
    pub fn add_product(&mut self, a: &RingElem, b: &RingElem) {
        self.even.add_product(&a.even, &b.even);
        if !a.odd.is_zero() && !b.odd.is_zero() {
            let yy = &a.odd * &b.odd;
            self.even.add_product(&yy, y_squared());
        }
        self.odd.add_product(&a.even, &b.odd);
        self.odd.add_product(&a.odd, &b.even);
    }

    pub fn scale(&self, c: &BigInt) -> RingElem {
        RingElem {
            even: self.even.scale(c),
            odd: self.odd.scale(c),
        }
    }

    pub fn substitute(&self, sub: Substitution) -> Result<RingElem> {
        Ok(self.as_y_free()?.substitute(sub).into())
    }

    pub fn is_palindromic(&self) -> Result<bool> {
        Ok(self.as_y_free()?.is_palindromic())
    }

    /// Numeric value at `(q, p)` with the given numeric value of `Y`.
    pub fn eval(&self, q: f64, p: f64, y: f64) -> f64 {
        self.even.eval(q, p) + y * self.odd.eval(q, p)
    }

    pub fn canonical_string(&self) -> String {
        self.to_string()
    }

    /// A Y-free element is written as a bare term array; otherwise an
    /// object `{"terms": [...], "Y": [...]}`.
    pub fn to_json(&self) -> Value {
        if self.is_y_free() {
            self.even.to_json()
        } else {
            json!({ "terms": self.even.to_json(), "Y": self.odd.to_json() })
        }
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::Array(_) => Ok(LaurentPoly::from_json(value)?.into()),
            Value::Object(map) => {
                let even = match map.get("terms") {
                    Some(v) => LaurentPoly::from_json(v)?,
                    None => LaurentPoly::zero(),
                };
                let odd = match map.get("Y") {
                    Some(v) => LaurentPoly::from_json(v)?,
                    None => LaurentPoly::zero(),
                };
                Ok(RingElem { even, odd })
            }
            other => Err(Error::parse(
                other.to_string(),
                "expected a term array or object",
            )),
        }
    }
}

impl From<LaurentPoly> for RingElem {
    fn from(even: LaurentPoly) -> Self {
        RingElem {
            even,
            odd: LaurentPoly::zero(),
        }
    }
}

impl From<i64> for RingElem {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c).into()
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.even.is_zero(), self.odd.is_zero()) {
            (_, true) => write!(f, "{}", self.even),
            (true, false) => write!(f, "({}) Y", self.odd),
            (false, false) => write!(f, "{} + ({}) Y", self.even, self.odd),
        }
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            even: -&self.even,
            odd: -&self.odd,
        }
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            even: -self.even,
            odd: -self.odd,
        }
    }
}

impl AddAssign<&RingElem> for RingElem {
    fn add_assign(&mut self, rhs: &RingElem) {
        self.even += &rhs.even;
        self.odd += &rhs.odd;
    }
}

impl SubAssign<&RingElem> for RingElem {
    fn sub_assign(&mut self, rhs: &RingElem) {
        self.even -= &rhs.even;
        self.odd -= &rhs.odd;
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        let mut out = RingElem::zero();
        out.add_product(self, rhs);
        out
    }
}

forward_owned!(RingElem, Add add, Sub sub, Mul mul);
