//! Ordinals below ω^ω in Cantor normal form, the polynomial notation π and
//! the tuple codec used for every number-coded object in the crate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("ordinal syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("exponent list is not weakly decreasing")]
    NonMonotone,
    #[error("0 is not a polynomial notation")]
    ZeroNotation,
    #[error("notation too large to decode")]
    Oversized,
}

/// `ω^N·g_N + … + ω^0·g_0`, stored as `[g_0, …, g_N]` with `g_N ≠ 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    coeffs: Vec<u64>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { coeffs: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        Self::from_coeffs(vec![n])
    }

    pub fn omega() -> Self {
        Self::omega_pow(1)
    }

    pub fn omega_pow(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Ordinal { coeffs }
    }

    /// Builds from `[g_0, …, g_N]`, dropping trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ordinal { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `N` with `g_N ≠ 0`; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn is_successor(&self) -> bool {
        self.coeff(0) != 0
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    pub fn succ(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        coeffs[0] += 1;
        Ordinal { coeffs }
    }

    pub fn pred(&self) -> Option<Self> {
        if !self.is_successor() {
            return None;
        }
        let mut coeffs = self.coeffs.clone();
        coeffs[0] -= 1;
        Some(Self::from_coeffs(coeffs))
    }

    /// Natural (Hessenberg) sum: coefficient-wise addition.
    pub fn hsum(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    /// Ordinary (non-commutative) ordinal addition.
    pub fn add(&self, other: &Self) -> Self {
        let Some(d) = other.degree() else {
            return self.clone();
        };
        let mut coeffs: Vec<u64> = other.coeffs.clone();
        if self.coeffs.len() > d {
            coeffs[d] += self.coeffs[d];
            coeffs.extend_from_slice(&self.coeffs[d + 1..]);
        }
        Self::from_coeffs(coeffs)
    }

    /// `α·n` for a natural `n`.
    pub fn mul_nat(&self, n: u64) -> Self {
        match (self.degree(), n) {
            (None, _) | (_, 0) => Self::zero(),
            (Some(d), n) => {
                let mut coeffs = self.coeffs.clone();
                coeffs[d] *= n;
                Self::from_coeffs(coeffs)
            }
        }
    }

    /// `α·ω`, which is `ω^(N+1)` when `α` has degree `N`.
    pub fn mul_omega(&self) -> Self {
        match self.degree() {
            None => Self::zero(),
            Some(d) => Self::omega_pow(d + 1),
        }
    }

    /// The `n`-th element of the standard fundamental sequence of a limit:
    /// `(β + ω^k)[n] = β + ω^(k-1)·n`.
    pub fn fundamental(&self, n: u64) -> Option<Self> {
        if !self.is_limit() {
            return None;
        }
        let k = self.coeffs.iter().position(|&g| g != 0)?;
        let mut coeffs = self.coeffs.clone();
        coeffs[k] -= 1;
        coeffs[k - 1] = n;
        Some(Self::from_coeffs(coeffs))
    }

    /// `ω^{h_1} + … + ω^{h_M}` for weakly decreasing `h`.
    pub fn omega_power_sum(exps: &[usize]) -> Result<Self, OrdinalError> {
        if exps.windows(2).any(|w| w[0] < w[1]) {
            return Err(OrdinalError::NonMonotone);
        }
        let mut coeffs = vec![0u64; exps.first().map_or(0, |&h| h + 1)];
        for &h in exps {
            coeffs[h] += 1;
        }
        Ok(Self::from_coeffs(coeffs))
    }

    /// Inverse of [`Ordinal::omega_power_sum`]: exponents, highest first.
    pub fn omega_powers(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &g) in self.coeffs.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(k, g as usize));
        }
        out
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &g) in self.coeffs.iter().enumerate().rev() {
            if g == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{g}")?,
                1 => f.write_str("w")?,
                _ => write!(f, "w^{k}")?,
            }
            if k > 0 && g > 1 {
                write!(f, "*{g}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    /// Accepts sums of `n`, `w`, `w^k`, `w*n`, `w^k*n` (`ω` also works for `w`).
    /// Terms are combined with ordinary ordinal addition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = OrdParser { src: s, pos: 0 };
        let mut acc = p.term()?;
        loop {
            p.skip_ws();
            if p.eat('+') {
                let t = p.term()?;
                acc = acc.add(&t);
            } else if p.pos == s.len() {
                return Ok(acc);
            } else {
                return Err(p.err("expected '+' or end of input"));
            }
        }
    }
}

struct OrdParser<'a> {
    src: &'a str,
    pos: usize,
}

impl OrdParser<'_> {
    fn err(&self, msg: &str) -> OrdinalError {
        OrdinalError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.err("expected a natural number")
        })
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        if self.eat('w') || self.eat('ω') {
            let k = if self.eat('^') { self.nat()? as usize } else { 1 };
            let g = if self.eat('*') { self.nat()? } else { 1 };
            Ok(Ordinal::omega_pow(k).mul_nat(g))
        } else {
            Ok(Ordinal::nat(self.nat()?))
        }
    }
}

/// Cantor pairing `⟨x, y⟩ = (x+y)(x+y+1)/2 + y`; `None` on overflow.
pub fn pair(x: u64, y: u64) -> Option<u64> {
    let s = x.checked_add(y)?;
    let tri = (s as u128) * (s as u128 + 1) / 2;
    u64::try_from(tri + y as u128).ok()
}

pub fn unpair(z: u64) -> (u64, u64) {
    // Largest s with s(s+1)/2 <= z.
    let mut s = (((8.0 * z as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while (s as u128) * (s as u128 + 1) / 2 > z as u128 {
        s -= 1;
    }
    while ((s + 1) as u128) * ((s + 2) as u128) / 2 <= z as u128 {
        s += 1;
    }
    let y = z - ((s as u128) * (s as u128 + 1) / 2) as u64;
    (s - y, y)
}

/// The `j`-th prime, 0-based (`nth_prime(0) = 2`).
pub fn nth_prime(j: usize) -> u64 {
    use std::sync::Mutex;
    static CACHE: Mutex<Vec<u64>> = Mutex::new(Vec::new());
    let mut primes = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    let mut cand = primes.last().map_or(2, |&p| p + 1);
    while primes.len() <= j {
        if primes.iter().take_while(|&&p| p * p <= cand).all(|&p| !cand.is_multiple_of(p)) {
            primes.push(cand);
        }
        cand += 1;
    }
    primes[j]
}

/// `p_1^{i_1} · … · p_n^{i_n}`.
pub fn prime_power_code(entries: &[u64]) -> BigUint {
    let mut acc = BigUint::one();
    for (j, &e) in entries.iter().enumerate() {
        if e > 0 {
            acc *= BigUint::from(nth_prime(j)).pow(e as u32);
        }
    }
    acc
}

/// Inverse of [`prime_power_code`] up to trailing zeros; `None` on 0.
pub fn prime_power_decode(code: &BigUint) -> Option<Vec<u64>> {
    if code.is_zero() {
        return None;
    }
    let mut rest = code.clone();
    let mut out = Vec::new();
    let mut j = 0;
    while !rest.is_one() {
        let p = BigUint::from(nth_prime(j));
        let mut e = 0u64;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        out.push(e);
        j += 1;
        // A leftover factor larger than every prime tried would loop forever.
        if j > 4096 {
            return None;
        }
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    Some(out)
}

/// Polynomial notation: the prime-power code of `[g_0, …, g_N]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PolyNotation(pub BigUint);

impl PolyNotation {
    pub fn encode(a: &Ordinal) -> Self {
        PolyNotation(prime_power_code(a.coeffs()))
    }

    pub fn decode(&self) -> Result<Ordinal, OrdinalError> {
        if self.0.is_zero() {
            return Err(OrdinalError::ZeroNotation);
        }
        prime_power_decode(&self.0).map(Ordinal::from_coeffs).ok_or(OrdinalError::Oversized)
    }

    /// `self ≺ other` in the well-ordering of notations.
    pub fn precedes(&self, other: &Self) -> Result<bool, OrdinalError> {
        Ok(self.decode()? < other.decode()?)
    }
}

/// Gödel numbering of finite tuples of naturals.
///
/// The code of `⟨i_1,…,i_n⟩` is the big-endian integer of the byte string
/// `01 · varint(n) · (varint(len_j) · be_bytes(i_j))_j`. The leading marker byte
/// keeps the map injective; each entry is length-prefixed so decoding is total
/// on the image. Numbers stay linear in the size of the tuple, which matters
/// because codes nest several levels deep (indices inside assignments inside
/// machine inputs).
pub struct TupleCode;

impl TupleCode {
    pub fn encode(entries: &[BigUint]) -> BigUint {
        let mut bytes = vec![0x01];
        push_varint(&mut bytes, entries.len() as u64);
        for e in entries {
            let b = if e.is_zero() { Vec::new() } else { e.to_bytes_be() };
            push_varint(&mut bytes, b.len() as u64);
            bytes.extend_from_slice(&b);
        }
        BigUint::from_bytes_be(&bytes)
    }

    pub fn encode_u64(entries: &[u64]) -> BigUint {
        let v: Vec<BigUint> = entries.iter().map(|&x| BigUint::from(x)).collect();
        Self::encode(&v)
    }

    pub fn decode(code: &BigUint) -> Option<Vec<BigUint>> {
        if code.is_zero() {
            return None;
        }
        let bytes = code.to_bytes_be();
        if bytes[0] != 0x01 {
            return None;
        }
        let mut pos = 1;
        let n = read_varint(&bytes, &mut pos)?;
        let mut out = Vec::new();
        for _ in 0..n {
            let len = read_varint(&bytes, &mut pos)? as usize;
            let end = pos.checked_add(len)?;
            let chunk = bytes.get(pos..end)?;
            // Non-minimal encodings would break injectivity.
            if chunk.first() == Some(&0) {
                return None;
            }
            out.push(BigUint::from_bytes_be(chunk));
            pos = end;
        }
        (pos == bytes.len()).then_some(out)
    }

    pub fn decode_u64(code: &BigUint) -> Option<Vec<u64>> {
        Self::decode(code)?.iter().map(|x| x.to_u64()).collect()
    }
}

fn push_varint(out: &mut Vec<u8>, mut n: u64) {
    loop {
        let b = (n & 0x7f) as u8;
        n >>= 7;
        if n == 0 {
            out.push(b);
            return;
        }
        out.push(b | 0x80);
    }
}

fn read_varint(bytes: &[u8], pos: &mut usize) -> Option<u64> {
    let mut n = 0u64;
    let mut shift = 0;
    loop {
        let b = *bytes.get(*pos)?;
        *pos += 1;
        if shift >= 63 && b > 1 {
            return None;
        }
        n |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            // Reject padded varints such as `80 00`.
            if b == 0 && shift > 0 {
                return None;
            }
            return Some(n);
        }
        shift += 7;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn natural_sum_examples() {
        assert_eq!(Ordinal::zero().hsum(&o("w^2+3")), o("w^2+3"));
        assert_eq!(o("w+1").hsum(&o("w*2+3")), o("w*3+4"));
        assert_eq!(o("w^2+w").hsum(&o("w^2*2+1")), o("w^2*3+w+1"));
    }

    #[test]
    fn comparisons() {
        assert!(o("3") < o("w"));
        assert_eq!(o("w*2").cmp(&o("w*2")), Ordering::Equal);
        assert!(o("w^2") > o("w*9+8"));
    }

    #[test]
    fn notation_codes() {
        assert_eq!(PolyNotation::encode(&Ordinal::zero()).0, BigUint::from(1u32));
        assert_eq!(PolyNotation::encode(&o("w")).0, BigUint::from(3u32));
        assert_eq!(PolyNotation::encode(&o("5")).0, BigUint::from(32u32));
        assert_eq!(PolyNotation(BigUint::zero()).decode(), Err(OrdinalError::ZeroNotation));
    }

    #[test]
    fn power_sums() {
        assert_eq!(Ordinal::omega_power_sum(&[]).unwrap(), Ordinal::zero());
        assert_eq!(Ordinal::omega_power_sum(&[1, 0, 0]).unwrap(), o("w+2"));
        assert_eq!(Ordinal::omega_power_sum(&[2, 2, 1]).unwrap(), o("w^2*2+w"));
        assert_eq!(Ordinal::omega_power_sum(&[0, 1]), Err(OrdinalError::NonMonotone));
        assert_eq!(o("w^2*2+w").omega_powers(), vec![2, 2, 1]);
    }

    #[test]
    fn ordinary_addition_absorbs() {
        assert_eq!(o("3").add(&o("w")), o("w"));
        assert_eq!(o("w+3").add(&o("w^2")), o("w^2"));
        assert_eq!(o("w^2+w").add(&o("w*2+1")), o("w^2+w*3+1"));
        assert_eq!(o("w+2").mul_nat(2), o("w*2+2"));
        assert_eq!(o("w+3").mul_omega(), o("w^2"));
        assert_eq!(o("5").mul_omega(), o("w"));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(o("w^2*3 + w*1 + 4").to_string(), "w^2*3+w+4");
        assert_eq!(o("ω*2+2").to_string(), "w*2+2");
        assert_eq!(Ordinal::zero().to_string(), "0");
        assert!("w+".parse::<Ordinal>().is_err());
    }

    #[test]
    fn fundamental_sequences() {
        assert_eq!(o("w").fundamental(4), Some(o("4")));
        assert_eq!(o("w^2+w").fundamental(3), Some(o("w^2+3")));
        assert_eq!(o("w^2").fundamental(2), Some(o("w*2")));
        assert_eq!(o("w+1").fundamental(2), None);
    }

    #[test]
    fn cantor_pairs() {
        assert_eq!(pair(0, 0), Some(0));
        assert_eq!(pair(3, 2), Some(17));
        for z in 0..500 {
            let (x, y) = unpair(z);
            assert_eq!(pair(x, y), Some(z));
        }
        assert_eq!(pair(u64::MAX, 1), None);
    }

    #[test]
    fn tuple_codec_edges() {
        let empty = TupleCode::encode(&[]);
        assert_eq!(TupleCode::decode(&empty), Some(vec![]));
        let t = TupleCode::encode_u64(&[2, 0]);
        assert_ne!(t, TupleCode::encode_u64(&[2]));
        assert_eq!(TupleCode::decode_u64(&t), Some(vec![2, 0]));
        assert_eq!(TupleCode::decode(&BigUint::zero()), None);
        assert_eq!(TupleCode::decode(&BigUint::from(5u32)), None);
    }
}
