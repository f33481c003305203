//! Exact scalars: Q, F_p, polynomials over them, k(x) and the rational algebras k[x]_g.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("irreducible factorization unavailable for {0}")]
    IrreducibleFactorizationUnavailable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a prime: {0}")]
    NotPrime(u32),
    #[error("zero polynomial")]
    ZeroPolynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl Field {
    pub fn prime(p: u32) -> Result<Field, ScalarError> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::F { v: n.rem_euclid(p as i64) as u32, p },
        }
    }

    pub fn frac(&self, n: i64, d: i64) -> Scalar {
        self.int(n).mul(&self.int(d).inv().expect("nonzero denominator"))
    }

    pub fn characteristic(&self) -> u32 {
        match *self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    /// All elements when finite, ordered by representative.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..p).map(|v| Scalar::F { v, p }).collect()),
        }
    }

    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, ScalarError> {
        let s = s.trim();
        let bad = || ScalarError::Parse(format!("bad scalar `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let n: BigInt = num.parse().map_err(|_| bad())?;
        let d: BigInt = den.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        match *self {
            Field::Rationals => Ok(Scalar::Q(BigRational::new(n, d))),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let nv = n.mod_floor(&m).to_u32().unwrap();
                let dv = d.mod_floor(&m).to_u32().unwrap();
                let dd = Scalar::F { v: dv, p }.inv().ok_or_else(bad)?;
                Ok(Scalar::F { v: nv, p }.mul(&dd))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Field, ScalarError> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(Field::Rationals);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u32 = p.parse().map_err(|_| ScalarError::Parse(format!("bad field `{s}`")))?;
            return Field::prime(p);
        }
        Err(ScalarError::Parse(format!("bad field `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    F { v: u32, p: u32 },
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::F { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::F { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::F { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::F { v: a, p }, Scalar::F { v: b, .. }) => Scalar::F { v: ((*a as u64 + *b as u64) % *p as u64) as u32, p: *p },
            _ => panic!("mixed fields"),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::F { v, p } => Scalar::F { v: (p - v) % p, p: *p },
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::F { v: a, p }, Scalar::F { v: b, .. }) => Scalar::F { v: ((*a as u64 * *b as u64) % *p as u64) as u32, p: *p },
            _ => panic!("mixed fields"),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::F { v, p } => Scalar::F { v: pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32, p: *p },
        })
    }

    pub fn pow(&self, e: u64) -> Scalar {
        let mut r = self.field().one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Total order used only for canonical sorting.
    pub fn canonical_cmp(&self, o: &Scalar) -> Ordering {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => a.cmp(b),
            (Scalar::F { v: a, .. }, Scalar::F { v: b, .. }) => a.cmp(b),
            _ => Ordering::Equal,
        }
    }

    pub fn is_negative_literal(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::F { v, .. } => write!(f, "{v}"),
        }
    }
}

/// Field operations shared by k and k(x); linear algebra is generic over this.
pub trait Fld: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn embed(ctx: &Self::Ctx, s: &Scalar) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn base(ctx: &Self::Ctx) -> Field;
}

impl Fld for Scalar {
    type Ctx = Field;
    fn zero(ctx: &Field) -> Self {
        ctx.zero()
    }
    fn one(ctx: &Field) -> Self {
        ctx.one()
    }
    fn embed(_: &Field, s: &Scalar) -> Self {
        s.clone()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn base(ctx: &Field) -> Field {
        *ctx
    }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    pub field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn from_ints(field: Field, cs: &[i64]) -> Poly {
        Poly::new(field, cs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: vec![] }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    pub fn x(field: Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// x - r
    pub fn linear(r: &Scalar) -> Poly {
        let f = r.field();
        Poly::new(f, vec![r.neg(), f.one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.field, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(self.field, out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut r = Poly::one(self.field);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let inv_lc = d.lc().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i].mul(&inv_lc);
            if c.is_zero() {
                continue;
            }
            q[i - dd] = c.clone();
            for (j, b) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j].sub(&c.mul(b));
            }
        }
        r.truncate(dd);
        (Poly::new(self.field, q), Poly::new(self.field, r))
    }

    pub fn divides(&self, o: &Poly) -> bool {
        o.div_rem(self).1.is_zero()
    }

    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv().unwrap())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul(&self.field.int(i as i64))).collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Monic gcd; gcd(0,0) = 0.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with s*self + t*o = g, g monic.
    pub fn ext_gcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = r0.lc().inv().unwrap();
        (r0.scale(&c), s0.scale(&c), t0.scale(&c))
    }

    pub fn canonical_cmp(&self, o: &Poly) -> Ordering {
        match self.coeffs.len().cmp(&o.coeffs.len()) {
            Ordering::Equal => {}
            c => return c,
        }
        if self.coeffs.len() == 2 && self.lc().is_one() && o.lc().is_one() {
            // linear monic factors are ordered by their root
            return self.coeffs[0].neg().canonical_cmp(&o.coeffs[0].neg());
        }
        for (a, b) in self.coeffs.iter().zip(&o.coeffs).rev() {
            match a.canonical_cmp(b) {
                Ordering::Equal => {}
                c => return c,
            }
        }
        Ordering::Equal
    }

    pub fn parse(field: Field, s: &str) -> Result<Poly, ScalarError> {
        parse_poly(field, s)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative_literal();
            let abs = if neg { c.neg() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match e {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            };
            if e == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn parse_poly(field: Field, s: &str) -> Result<Poly, ScalarError> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(ScalarError::Parse("empty polynomial".into()));
    }
    let mut terms: Vec<(bool, String)> = vec![];
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in src.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && i == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    let mut acc = Poly::zero(field);
    for (neg, t) in terms {
        if t.is_empty() {
            return Err(ScalarError::Parse(format!("bad polynomial `{s}`")));
        }
        let (coef, mono) = match t.find('x') {
            None => (t.as_str(), ""),
            Some(pos) => {
                let c = t[..pos].trim_end_matches('*');
                (if c.is_empty() { "1" } else { c }, &t[pos..])
            }
        };
        let mut c = field.parse_scalar(coef)?;
        if neg {
            c = c.neg();
        }
        let e: usize = if mono.is_empty() {
            0
        } else if mono == "x" {
            1
        } else if let Some(ex) = mono.strip_prefix("x^") {
            ex.parse().map_err(|_| ScalarError::Parse(format!("bad exponent in `{s}`")))?
        } else {
            return Err(ScalarError::Parse(format!("bad term `{t}`")));
        };
        let mut cs = vec![field.zero(); e + 1];
        cs[e] = c;
        acc = acc.add(&Poly::new(field, cs));
    }
    Ok(acc)
}

pub fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    a.gcd(b)
}

/// Yun's squarefree decomposition over a characteristic-0 field: [(s_i, i)].
fn yun(h: &Poly) -> Vec<(Poly, usize)> {
    let f = h.monic();
    let d = f.derivative();
    let a = f.gcd(&d);
    let mut b = f.exact_div(&a);
    let mut c = d.exact_div(&a);
    let mut out = vec![];
    let mut i = 1;
    loop {
        let bd = b.derivative();
        let dd = c.sub(&bd);
        if b.is_constant() {
            break;
        }
        let g = b.gcd(&dd);
        if !g.is_constant() {
            out.push((g.clone(), i));
        }
        b = b.exact_div(&g);
        c = dd.exact_div(&g);
        i += 1;
    }
    out
}

fn int_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = vec![];
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

/// Rational roots of a polynomial over Q, via the rational root theorem.
pub fn rational_roots(p: &Poly) -> Vec<Scalar> {
    assert_eq!(p.field, Field::Rationals);
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.as_rational().unwrap().denom());
    }
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c.as_rational().unwrap() * &lcm).to_integer()).collect();
    let mut roots = vec![];
    let low = ints.iter().position(|c| !c.is_zero());
    let Some(low) = low else { return roots };
    if low > 0 {
        roots.push(Field::Rationals.zero());
    }
    let a0 = &ints[low];
    let an = ints.last().unwrap();
    for num in int_divisors(a0) {
        for den in int_divisors(an) {
            for s in [1i32, -1] {
                let r = Scalar::Q(BigRational::new(&num * BigInt::from(s), den.clone()));
                if p.eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort_by(|a, b| a.canonical_cmp(b));
    roots
}

/// Smallest-degree monic divisor search over F_p, yielding irreducible factors with multiplicity.
fn factor_fp(h: &Poly, p: u32) -> Vec<(Poly, usize)> {
    let field = Field::Prime(p);
    let mut rest = h.monic();
    let mut out: Vec<(Poly, usize)> = vec![];
    let mut deg = 1;
    while rest.degree().unwrap_or(0) >= 2 * deg {
        let total = (p as u64).pow(deg as u32);
        for idx in 0..total {
            let mut cs = Vec::with_capacity(deg + 1);
            let mut t = idx;
            for _ in 0..deg {
                cs.push(field.int((t % p as u64) as i64));
                t /= p as u64;
            }
            cs.push(field.one());
            let cand = Poly::new(field, cs);
            let mut m = 0;
            while cand.divides(&rest) {
                rest = rest.exact_div(&cand);
                m += 1;
            }
            if m > 0 {
                out.push((cand, m));
            }
        }
        deg += 1;
    }
    if !rest.is_constant() {
        out.push((rest, 1));
    }
    out
}

/// Factorization into pairwise coprime irreducible factors with multiplicities.
pub fn factor_squarefree(h: &Poly) -> Result<Vec<(Poly, usize)>, ScalarError> {
    if h.is_zero() {
        return Err(ScalarError::ZeroPolynomial);
    }
    let mut out = match h.field {
        Field::Prime(p) => factor_fp(h, p),
        Field::Rationals => {
            let mut out = vec![];
            for (s, m) in yun(h) {
                let mut rest = s.clone();
                for r in rational_roots(&s) {
                    let l = Poly::linear(&r);
                    rest = rest.exact_div(&l);
                    out.push((l, m));
                }
                match rest.degree() {
                    Some(0) | None => {}
                    Some(2) | Some(3) => out.push((rest.monic(), m)),
                    Some(_) => return Err(ScalarError::IrreducibleFactorizationUnavailable(h.to_string())),
                }
            }
            out
        }
    };
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

/// A factorization m = u*v into coprime nonconstant factors, when one can be found.
pub fn coprime_split(m: &Poly) -> Option<(Poly, Poly)> {
    if m.degree().unwrap_or(0) < 2 {
        return None;
    }
    let m = m.monic();
    let u = match m.field {
        Field::Prime(p) => {
            let fs = factor_fp(&m, p);
            if fs.len() < 2 {
                return None;
            }
            fs[0].0.pow(fs[0].1)
        }
        Field::Rationals => {
            let parts = yun(&m);
            if parts.len() >= 2 {
                parts[0].0.pow(parts[0].1)
            } else {
                let (s, i) = parts.first()?;
                let r = rational_roots(s).into_iter().next()?;
                if s.degree() == Some(1) {
                    return None;
                }
                Poly::linear(&r).pow(*i)
            }
        }
    };
    let v = m.exact_div(&u);
    Some((u, v))
}

/// Normalized fraction num/den with monic den and gcd 1; zero is 0/1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { den: Poly::one(num.field), num };
        }
        let g = num.gcd(&den);
        let (n, d) = (num.exact_div(&g), den.exact_div(&g));
        let c = d.lc().inv().unwrap();
        RatFunc { num: n.scale(&c), den: d.scale(&c) }
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let f = p.field;
        RatFunc { num: p, den: Poly::one(f) }
    }

    pub fn constant(c: &Scalar) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c.clone()))
    }

    pub fn x(field: Field) -> RatFunc {
        RatFunc::from_poly(Poly::x(field))
    }

    pub fn field(&self) -> Field {
        self.num.field
    }

    /// Value at a point where the denominator does not vanish.
    pub fn eval(&self, x: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(x);
        d.inv().map(|di| self.num.eval(x).mul(&di))
    }

    pub fn parse(field: Field, s: &str) -> Result<RatFunc, ScalarError> {
        let strip = |t: &str| -> String {
            let t = t.trim();
            if t.starts_with('(') && t.ends_with(')') {
                t[1..t.len() - 1].to_string()
            } else {
                t.to_string()
            }
        };
        let parts: Vec<&str> = split_top_level_slash(s);
        match parts.as_slice() {
            [n] => Ok(RatFunc::from_poly(Poly::parse(field, &strip(n))?)),
            [n, d] => {
                let den = Poly::parse(field, &strip(d))?;
                if den.is_zero() {
                    return Err(ScalarError::Parse("zero denominator".into()));
                }
                Ok(RatFunc::new(Poly::parse(field, &strip(n))?, den))
            }
            _ => Err(ScalarError::Parse(format!("bad rational function `{s}`"))),
        }
    }
}

// Splits on " / " at parenthesis depth 0; plain `a/b` scalars stay intact.
fn split_top_level_slash(s: &str) -> Vec<&str> {
    let mut depth = 0;
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'/' if depth == 0 => {
                let spaced = i > 0 && bytes[i - 1] == b' ';
                let paren = (i > 0 && s[..i].trim_end().ends_with(')')) || s[i + 1..].trim_start().starts_with('(');
                if spaced || paren {
                    return vec![&s[..i], &s[i + 1..]];
                }
            }
            _ => {}
        }
    }
    vec![s]
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Fld for RatFunc {
    type Ctx = Field;
    fn zero(ctx: &Field) -> Self {
        RatFunc::from_poly(Poly::zero(*ctx))
    }
    fn one(ctx: &Field) -> Self {
        RatFunc::from_poly(Poly::one(*ctx))
    }
    fn embed(_: &Field, s: &Scalar) -> Self {
        RatFunc::constant(s)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }
    fn base(ctx: &Field) -> Field {
        *ctx
    }
}

/// k[x]_g: rational functions whose denominators only involve prime factors of g.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalAlgebra {
    pub g: Poly,
}

impl RationalAlgebra {
    pub fn new(g: Poly) -> RationalAlgebra {
        assert!(!g.is_zero(), "localizer must be nonzero");
        RationalAlgebra { g: g.monic() }
    }

    pub fn contains(&self, f: &RatFunc) -> bool {
        localize_membership(f, self)
    }
}

pub fn localize_membership(f: &RatFunc, a: &RationalAlgebra) -> bool {
    let mut d = f.den.clone();
    loop {
        if d.is_constant() {
            return true;
        }
        let c = d.gcd(&a.g);
        if c.is_constant() {
            return false;
        }
        d = d.exact_div(&c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(cs: &[i64]) -> Poly {
        Poly::from_ints(Field::Rationals, cs)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&q(&[-1, 0, 1]), &q(&[-1, 1])), q(&[-1, 1]));
        assert_eq!(poly_gcd(&q(&[0, 1]), &q(&[1])), q(&[1]));
        let a = q(&[-2, 1]).pow(2).mul(&q(&[-3, 1]));
        let b = q(&[-2, 1]).mul(&q(&[-5, 1]));
        let g = poly_gcd(&a, &b);
        assert_eq!(g, q(&[-2, 1]));
        assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn factor_examples() {
        let h = q(&[-1, 1]).pow(2).mul(&q(&[0, 1]));
        assert_eq!(factor_squarefree(&h).unwrap(), vec![(q(&[0, 1]), 1), (q(&[-1, 1]), 2)]);
        assert_eq!(factor_squarefree(&q(&[0, 1])).unwrap(), vec![(q(&[0, 1]), 1)]);
        let f5 = Field::Prime(5);
        let h = Poly::from_ints(f5, &[1, 0, 1]);
        let fs = factor_squarefree(&h).unwrap();
        assert_eq!(fs, vec![(Poly::from_ints(f5, &[-2, 1]), 1), (Poly::from_ints(f5, &[-3, 1]), 1)]);
        // oracle: the roots are exactly those found by exhaustive search
        let roots: Vec<i64> = (0..5).filter(|&r| h.eval(&f5.int(r)).is_zero()).collect();
        assert_eq!(roots, vec![2, 3]);
    }

    #[test]
    fn factor_rejects_large_irreducible_over_q() {
        let h = q(&[2, 0, 0, 0, 1]);
        assert!(matches!(factor_squarefree(&h), Err(ScalarError::IrreducibleFactorizationUnavailable(_))));
        // x^2 + 1 stays a single irreducible factor
        assert_eq!(factor_squarefree(&q(&[1, 0, 1])).unwrap(), vec![(q(&[1, 0, 1]), 1)]);
    }

    #[test]
    fn membership_examples() {
        let f = Field::Rationals;
        let inv = |p: Poly| RatFunc::new(Poly::one(f), p);
        let a1 = RationalAlgebra::new(q(&[-1, 1]));
        assert!(localize_membership(&inv(q(&[-1, 1])), &a1));
        assert!(!localize_membership(&inv(q(&[-2, 1])), &a1));
        let a2 = RationalAlgebra::new(q(&[-1, 1]).mul(&q(&[-4, 1])));
        let r = RatFunc::new(q(&[1, 1]), q(&[-1, 1]).pow(3));
        assert!(localize_membership(&r, &a2));
    }

    #[test]
    fn text_round_trip() {
        let f = Field::Rationals;
        for s in ["x^2 - 1", "-x + 1", "1/2*x^3 - 2/3", "0", "x", "-3"] {
            let p = Poly::parse(f, s).unwrap();
            assert_eq!(p.to_string(), s);
            assert_eq!(Poly::parse(f, &p.to_string()).unwrap(), p);
        }
        let r = RatFunc::new(q(&[1, 1]), q(&[-1, 1]).pow(3));
        let s = r.to_string();
        assert_eq!(RatFunc::parse(f, &s).unwrap(), r);
        assert_eq!(RatFunc::parse(f, "x / x^2").unwrap(), RatFunc::new(q(&[1]), q(&[0, 1])));
        let f7 = Field::Prime(7);
        let p = Poly::parse(f7, "3*x^2 + 6").unwrap();
        assert_eq!(Poly::parse(f7, &p.to_string()).unwrap(), p);
    }
}
