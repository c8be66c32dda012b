//! Exact arithmetic in GF(p^m).
//!
//! A [`Field`] is built from a prime `p`, a degree `m` and a monic irreducible
//! polynomial of degree `m` over GF(p). Elements are [`Felt`] codes: the
//! residue polynomial's coefficient vector `(d_0, .., d_{m-1})` packed as the
//! integer `d_0 + d_1 p + .. + d_{m-1} p^{m-1}`. Zero is code 0, one is code 1.
//!
//! Multiplication goes through log/antilog tables built from the designated
//! primitive element, which is checked to have order `p^m - 1`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds 2^16")]
    TooLarge { p: u32, m: u32 },
    #[error("polynomial must have {expected} coefficients (constant term first), got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("polynomial coefficient {0} is not reduced mod p")]
    BadCoefficient(u32),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is reducible over GF({p}): divisible by {divisor}")]
    Reducible { p: u32, divisor: String },
    #[error("element {0} is not a primitive element")]
    NotPrimitive(String),
    #[error("inversion of zero")]
    InverseOfZero,
    #[error("square roots are only provided in characteristic 2")]
    OddCharacteristic,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("malformed element {0:?}")]
    Parse(String),
    #[error("no default field of order {0}")]
    NoDefault(u32),
}

/// A field element code. Only meaningful together with its [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Felt(u16);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    /// Wraps a packed digit code. The caller guarantees `code < q`.
    pub const fn from_code(code: u16) -> Felt {
        Felt(code)
    }

    pub const fn code(self) -> u16 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Immutable description of GF(p^m) plus its lookup tables.
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    poly: Vec<u32>,
    primitive: Felt,
    /// `exp[i] = primitive^i` for `0 <= i < 2(q-1)`.
    exp: Vec<Felt>,
    /// `log[code]`; entry 0 is unused.
    log: Vec<u32>,
}

/// Shared handle to a [`FieldSpec`]; cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl std::ops::Deref for Field {
    type Target = FieldSpec;
    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p == other.p && self.poly == other.poly && self.primitive == other.primitive)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; poly={:?})", self.p, self.m, self.poly)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over GF(p), constant term first, no trailing zeros
// except that the zero polynomial is empty.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p prime, a != 0
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn poly_rem(a: &[u32], d: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dd = d.len() - 1;
    let lead_inv = inv_mod_p(d[dd], p);
    while r.len() > dd {
        let shift = r.len() - 1 - dd;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &di) in d.iter().enumerate() {
            let t = (c * di) % p;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&prod, modulus, p)
}

fn poly_powmod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    result
}

fn pack(digits: &[u32], p: u32) -> Felt {
    let code = digits.iter().rev().fold(0u32, |acc, &d| acc * p + d);
    Felt(code as u16)
}

fn unpack(x: Felt, p: u32, m: u32) -> Vec<u32> {
    let mut code = x.0 as u32;
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(code % p);
        code /= p;
    }
    trim(out)
}

fn render_poly(c: &[u32]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &v)| v != 0)
        .map(|(i, &v)| {
            let coeff = if v == 1 && i > 0 { String::new() } else { v.to_string() };
            match i {
                0 => v.to_string(),
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            }
        })
        .collect();
    terms.join("+")
}

/// Checks irreducibility by trial division against every monic polynomial
/// of degree `1..=deg/2`.
fn find_factor(poly: &[u32], p: u32) -> Option<Vec<u32>> {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                cand.push((t % p as u64) as u32);
                t /= p as u64;
            }
            cand.push(1);
            if poly_rem(poly, &cand, p).is_empty() {
                return Some(cand);
            }
        }
    }
    None
}

impl Field {
    /// Builds GF(p^m) from a monic irreducible `poly` (m+1 coefficients,
    /// constant term first). `primitive` defaults to the residue of `x`.
    pub fn new(p: u32, m: u32, poly: Vec<u32>, primitive: Option<Vec<u32>>) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER as u64)
            .ok_or(GfError::TooLarge { p, m })? as u32;
        if poly.len() != m as usize + 1 {
            return Err(GfError::WrongDegree { expected: m as usize + 1, got: poly.len() });
        }
        if let Some(&c) = poly.iter().find(|&&c| c >= p) {
            return Err(GfError::BadCoefficient(c));
        }
        if poly[m as usize] != 1 {
            return Err(GfError::NotMonic);
        }
        if let Some(f) = find_factor(&poly, p) {
            return Err(GfError::Reducible { p, divisor: render_poly(&f) });
        }

        let x = poly_rem(&[0, 1], &poly, p);
        let gen = match primitive {
            Some(digits) => {
                if digits.len() > m as usize || digits.iter().any(|&d| d >= p) {
                    return Err(GfError::NotPrimitive(format!("{digits:?}")));
                }
                trim(digits)
            }
            None => x,
        };
        if gen.is_empty() {
            return Err(GfError::NotPrimitive("0".into()));
        }
        for r in prime_factors(q - 1) {
            if poly_powmod(&gen, ((q - 1) / r) as u64, &poly, p) == [1] {
                return Err(GfError::NotPrimitive(render_poly(&gen)));
            }
        }

        let order = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * order);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        for i in 0..order {
            let e = pack(&cur, p);
            exp.push(e);
            log[e.0 as usize] = i as u32;
            cur = poly_mulmod(&cur, &gen, &poly, p);
        }
        exp.extend_from_within(..order);

        Ok(Field(Arc::new(FieldSpec {
            p,
            m,
            q,
            poly,
            primitive: pack(&gen, p),
            exp,
            log,
        })))
    }

    /// The default field of order `q`: the lexicographically smallest monic
    /// irreducible polynomial (constant term varying fastest) whose root `x`
    /// is primitive. Gives x^2+x+1, x^3+x+1 and x^4+x+1 for q = 4, 8, 16.
    pub fn default_for(q: u32) -> Result<Field, GfError> {
        let (p, m) = prime_power(q).ok_or(GfError::NoDefault(q))?;
        if q > MAX_ORDER {
            return Err(GfError::TooLarge { p, m });
        }
        let count = (p as u64).pow(m);
        for idx in 0..count {
            let mut poly = Vec::with_capacity(m as usize + 1);
            let mut t = idx;
            for _ in 0..m {
                poly.push((t % p as u64) as u32);
                t /= p as u64;
            }
            poly.push(1);
            if let Ok(f) = Field::new(p, m, poly, None) {
                return Ok(f);
            }
        }
        Err(GfError::NoDefault(q))
    }

    pub fn gf2() -> Field {
        Field::default_for(2).expect("GF(2)")
    }

    pub fn gf4() -> Field {
        Field::default_for(4).expect("GF(4)")
    }

    pub fn gf8() -> Field {
        Field::default_for(8).expect("GF(8)")
    }

    pub fn gf16() -> Field {
        Field::default_for(16).expect("GF(16)")
    }

    /// Fails with [`GfError::MixedFields`] unless both handles describe the same field.
    pub fn same(&self, other: &Field) -> Result<(), GfError> {
        if self == other {
            Ok(())
        } else {
            Err(GfError::MixedFields)
        }
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut m = 0;
    let mut t = q;
    while t > 1 {
        t /= p;
        m += 1;
    }
    Some((p, m))
}

impl FieldSpec {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, constant term first.
    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn primitive(&self) -> Felt {
        self.primitive
    }

    pub fn is_char2(&self) -> bool {
        self.p == 2
    }

    /// Coefficient digits of `x`, constant term first, always `m` long.
    pub fn digits(&self, x: Felt) -> Vec<u32> {
        let mut d = unpack(x, self.p, self.m);
        d.resize(self.m as usize, 0);
        d
    }

    pub fn from_digits(&self, digits: &[u32]) -> Option<Felt> {
        if digits.len() > self.m as usize || digits.iter().any(|&d| d >= self.p) {
            return None;
        }
        Some(pack(digits, self.p))
    }

    /// Element with the given code, if it is in range.
    pub fn elem(&self, code: u32) -> Option<Felt> {
        (code < self.q).then_some(Felt(code as u16))
    }

    #[inline]
    pub fn add(&self, x: Felt, y: Felt) -> Felt {
        if self.p == 2 {
            return Felt(x.0 ^ y.0);
        }
        let p = self.p as u16;
        let (mut a, mut b) = (x.0, y.0);
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 || b > 0 {
            let d = (a % p + b % p) % p;
            out += d as u32 * place;
            place *= p as u32;
            a /= p;
            b /= p;
        }
        Felt(out as u16)
    }

    #[inline]
    pub fn neg(&self, x: Felt) -> Felt {
        if self.p == 2 {
            return x;
        }
        let p = self.p as u16;
        let mut a = x.0;
        let (mut out, mut place) = (0u32, 1u32);
        while a > 0 {
            let d = (p - a % p) % p;
            out += d as u32 * place;
            place *= p as u32;
            a /= p;
        }
        Felt(out as u16)
    }

    #[inline]
    pub fn sub(&self, x: Felt, y: Felt) -> Felt {
        if self.p == 2 {
            return Felt(x.0 ^ y.0);
        }
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Felt, y: Felt) -> Felt {
        if x.0 == 0 || y.0 == 0 {
            return Felt::ZERO;
        }
        self.exp[(self.log[x.0 as usize] + self.log[y.0 as usize]) as usize]
    }

    pub fn inv(&self, x: Felt) -> Result<Felt, GfError> {
        if x.is_zero() {
            return Err(GfError::InverseOfZero);
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[x.0 as usize]) % order) as usize])
    }

    pub fn div(&self, x: Felt, y: Felt) -> Result<Felt, GfError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e`; negative exponents invert. `0^0 = 1`.
    pub fn pow(&self, x: Felt, e: i64) -> Result<Felt, GfError> {
        if e == 0 {
            return Ok(Felt::ONE);
        }
        if x.is_zero() {
            return if e > 0 { Ok(Felt::ZERO) } else { Err(GfError::InverseOfZero) };
        }
        let order = (self.q - 1) as i64;
        let k = (self.log[x.0 as usize] as i64 * e.rem_euclid(order)).rem_euclid(order);
        Ok(self.exp[k as usize])
    }

    /// `primitive^k`, exponent taken mod q-1.
    pub fn w(&self, k: i64) -> Felt {
        let order = (self.q - 1) as i64;
        self.exp[k.rem_euclid(order) as usize]
    }

    /// Discrete log to the primitive base; `None` for zero.
    pub fn log(&self, x: Felt) -> Option<u32> {
        (!x.is_zero()).then(|| self.log[x.0 as usize])
    }

    /// The unique `r` with `r^2 = x`, computed as `x^(q/2)`. Characteristic 2 only.
    pub fn sqrt(&self, x: Felt) -> Result<Felt, GfError> {
        if self.p != 2 {
            return Err(GfError::OddCharacteristic);
        }
        self.pow(x, (self.q / 2) as i64)
    }

    /// All q elements: zero, then the primitive powers.
    pub fn elements(&self) -> Vec<Felt> {
        std::iter::once(Felt::ZERO).chain(self.nonzero_elements()).collect()
    }

    /// `1, w, w^2, .., w^(q-2)`.
    pub fn nonzero_elements(&self) -> Vec<Felt> {
        self.exp[..(self.q - 1) as usize].to_vec()
    }

    /// Renders in `0 | 1 | w | w^k` notation with the least exponent.
    pub fn render(&self, x: Felt) -> String {
        match x {
            Felt::ZERO => "0".into(),
            Felt::ONE => "1".into(),
            _ => match self.log[x.0 as usize] {
                1 => "w".into(),
                k => format!("w^{k}"),
            },
        }
    }

    /// Parses `0 | 1 | w | w^k`; `k` is reduced mod q-1.
    pub fn parse(&self, text: &str) -> Result<Felt, GfError> {
        let t = text.trim();
        match t {
            "0" => Ok(Felt::ZERO),
            "1" => Ok(Felt::ONE),
            "w" => Ok(self.w(1)),
            _ => {
                let k = t
                    .strip_prefix("w^")
                    .filter(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|s| s.parse::<u64>().ok())
                    .ok_or_else(|| GfError::Parse(t.to_string()))?;
                Ok(self.w((k % (self.q - 1) as u64) as i64))
            }
        }
    }

    /// Parses a whitespace-separated row of elements.
    pub fn parse_row(&self, text: &str) -> Result<Vec<Felt>, GfError> {
        text.split_whitespace().map(|t| self.parse(t)).collect()
    }

    pub fn render_row(&self, row: &[Felt]) -> String {
        row.iter().map(|&x| self.render(x)).collect::<Vec<_>>().join(" ")
    }

    /// Standard inner product `sum x_i y_i`.
    pub fn dot(&self, x: &[Felt], y: &[Felt]) -> Felt {
        x.iter().zip(y).fold(Felt::ZERO, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_mul_by_defining_polynomial() {
        let f = Field::gf4();
        assert_eq!(f.poly(), &[1, 1, 1]);
        let w = f.w(1);
        let w2 = f.mul(w, w);
        assert_eq!(f.digits(w2), vec![1, 1]);
        assert_eq!(w2, f.add(w, Felt::ONE));
    }

    #[test]
    fn gf8_relation_one_plus_w_plus_w3() {
        let f = Field::gf8();
        assert_eq!(f.poly(), &[1, 1, 0, 1]);
        let w = f.w(1);
        let w3 = f.mul(f.w(2), w);
        assert_eq!(w3, f.add(Felt::ONE, w));
        assert_eq!(f.add(f.add(Felt::ONE, w), w3), Felt::ZERO);
    }

    #[test]
    fn gf16_default_poly() {
        assert_eq!(Field::gf16().poly(), &[1, 1, 0, 0, 1]);
        assert_eq!(Field::gf2().poly(), &[1, 1]);
    }

    #[test]
    fn additive_inverse() {
        for f in [Field::gf4(), Field::gf8(), Field::default_for(9).unwrap(), Field::default_for(7).unwrap()] {
            for x in f.elements() {
                assert_eq!(f.add(x, f.neg(x)), Felt::ZERO);
            }
        }
    }

    #[test]
    fn odd_characteristic_arithmetic() {
        let f = Field::default_for(9).unwrap();
        assert_eq!(f.characteristic(), 3);
        for x in f.nonzero_elements() {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), Felt::ONE);
            assert_eq!(f.add(f.add(x, x), x), Felt::ZERO);
        }
        assert_eq!(f.sqrt(Felt::ONE), Err(GfError::OddCharacteristic));
    }

    #[test]
    fn sqrt_examples() {
        let f4 = Field::gf4();
        assert_eq!(f4.sqrt(f4.w(2)).unwrap(), f4.w(1));
        let f8 = Field::gf8();
        assert_eq!(f8.sqrt(Felt::ONE).unwrap(), Felt::ONE);
        // exhaustive: the only square root of w^3 is w^5
        let roots: Vec<_> = f8.elements().into_iter().filter(|&r| f8.mul(r, r) == f8.w(3)).collect();
        assert_eq!(roots, vec![f8.w(5)]);
        assert_eq!(f8.sqrt(f8.w(3)).unwrap(), f8.w(5));
    }

    #[test]
    fn element_enumeration() {
        let f4 = Field::gf4();
        assert_eq!(f4.elements(), vec![Felt::ZERO, Felt::ONE, f4.w(1), f4.w(2)]);
        assert_eq!(Field::gf2().elements(), vec![Felt::ZERO, Felt::ONE]);
        let f8 = Field::gf8();
        let nz = f8.nonzero_elements();
        assert_eq!(nz.len(), 7);
        for (i, &x) in nz.iter().enumerate() {
            assert_eq!(x, f8.w(i as i64));
        }
    }

    #[test]
    fn parse_and_render() {
        let f8 = Field::gf8();
        assert_eq!(f8.parse("w^4").unwrap(), f8.w(4));
        assert_eq!(f8.render(f8.w(4)), "w^4");
        assert_eq!(f8.parse("0").unwrap(), Felt::ZERO);
        assert_eq!(f8.render(Felt::ZERO), "0");
        let f4 = Field::gf4();
        assert_eq!(f4.parse("w^3").unwrap(), Felt::ONE);
        assert_eq!(f4.render(f4.parse("w^5").unwrap()), "w^2");
        for bad in ["w^", "x", "w^-1", "2", "w^1.5", ""] {
            assert!(matches!(f4.parse(bad), Err(GfError::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1, vec![1, 1], None).unwrap_err(), GfError::NotPrime(4));
        assert!(matches!(Field::new(2, 2, vec![1, 0, 1], None), Err(GfError::Reducible { .. })));
        assert_eq!(Field::new(2, 2, vec![1, 1, 0], None).unwrap_err(), GfError::NotMonic);
        assert!(matches!(Field::new(2, 17, vec![0; 18], None), Err(GfError::TooLarge { .. })));
        // x^4+x^3+x^2+x+1 is irreducible but x has order 5
        assert!(matches!(Field::new(2, 4, vec![1, 1, 1, 1, 1], None), Err(GfError::NotPrimitive(_))));
        let f = Field::new(2, 4, vec![1, 1, 1, 1, 1], Some(vec![1, 1])).unwrap();
        assert_eq!(f.nonzero_elements().len(), 15);
        assert_eq!(Field::gf4().inv(Felt::ZERO), Err(GfError::InverseOfZero));
    }

    #[test]
    fn alternate_gf8_polynomial_is_a_different_field_handle() {
        let a = Field::gf8();
        let b = Field::new(2, 3, vec![1, 0, 1, 1], None).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.same(&b), Err(GfError::MixedFields));
        assert_eq!(a.same(&Field::gf8()), Ok(()));
    }

    #[test]
    fn largest_field() {
        let f = Field::default_for(1 << 16).unwrap();
        assert_eq!(f.order(), 65536);
        assert_eq!(f.pow(f.primitive(), 65535).unwrap(), Felt::ONE);
    }
}
