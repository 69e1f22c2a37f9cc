//! Text-to-integer coding.
//!
//! A string over a finite alphabet is read as a numeral in bijective base
//! `B = |alphabet|`: every symbol is replaced by its 1-based number and the
//! leftmost symbol is the least significant digit. Because no digit is zero,
//! the map between strings and naturals is a bijection (`""` is `0`).

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet lists symbol {0:?} twice")]
    DuplicateSymbol(char),
}

/// An ordered list of distinct symbols, numbered `1..=len`.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    name: String,
    symbols: Vec<char>,
    numbering: HashMap<char, u32>,
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Alphabet")
            .field("name", &self.name)
            .field("symbols", &self.symbols.iter().collect::<String>())
            .finish()
    }
}

impl Alphabet {
    pub fn new(name: impl Into<String>, symbols: impl IntoIterator<Item = char>) -> Result<Self, CodecError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(CodecError::EmptyAlphabet);
        }
        let mut numbering = HashMap::with_capacity(symbols.len());
        for (i, &c) in symbols.iter().enumerate() {
            if numbering.insert(c, i as u32 + 1).is_some() {
                return Err(CodecError::DuplicateSymbol(c));
            }
        }
        Ok(Alphabet { name: name.into(), symbols, numbering })
    }

    /// The lowercase latin letters `a..=z`.
    pub fn latin() -> Self {
        Alphabet::new("latin", 'a'..='z').expect("static alphabet")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn base(&self) -> u32 {
        self.symbols.len() as u32
    }

    /// 1-based number of `c`.
    pub fn number(&self, c: char) -> Option<u32> {
        self.numbering.get(&c).copied()
    }

    /// Symbol carrying the 1-based number `n`.
    pub fn symbol(&self, n: u32) -> Option<char> {
        n.checked_sub(1).and_then(|i| self.symbols.get(i as usize)).copied()
    }

    /// Same symbols plus `extra` appended at the end.
    pub fn extended(&self, name: impl Into<String>, extra: char) -> Result<Self, CodecError> {
        Alphabet::new(name, self.symbols.iter().copied().chain(std::iter::once(extra)))
    }
}

/// The only operations the encoder is allowed to perform.
pub trait Arithmetic {
    type Value;
    fn constant(&mut self, n: u32) -> Self::Value;
    fn add(&mut self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&mut self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn pow(&mut self, base: Self::Value, exp: usize) -> Self::Value;
}

/// Exact big-integer arithmetic.
#[derive(Debug, Default, Clone, Copy)]
pub struct Exact;

impl Arithmetic for Exact {
    type Value = BigUint;
    fn constant(&mut self, n: u32) -> BigUint {
        BigUint::from(n)
    }
    fn add(&mut self, a: BigUint, b: BigUint) -> BigUint {
        a + b
    }
    fn mul(&mut self, a: BigUint, b: BigUint) -> BigUint {
        a * b
    }
    fn pow(&mut self, base: BigUint, exp: usize) -> BigUint {
        num_traits::pow(base, exp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Mul,
    Pow,
}

/// Wraps another [`Arithmetic`] and records every operation performed.
#[derive(Debug, Default)]
pub struct Traced<A> {
    pub inner: A,
    pub trace: Vec<ArithOp>,
}

impl<A: Arithmetic> Arithmetic for Traced<A> {
    type Value = A::Value;
    fn constant(&mut self, n: u32) -> A::Value {
        self.inner.constant(n)
    }
    fn add(&mut self, a: A::Value, b: A::Value) -> A::Value {
        self.trace.push(ArithOp::Add);
        self.inner.add(a, b)
    }
    fn mul(&mut self, a: A::Value, b: A::Value) -> A::Value {
        self.trace.push(ArithOp::Mul);
        self.inner.mul(a, b)
    }
    fn pow(&mut self, base: A::Value, exp: usize) -> A::Value {
        self.trace.push(ArithOp::Pow);
        self.inner.pow(base, exp)
    }
}

/// Encode `text` as `sum(number(text[i]) * B^i)`.
pub fn encode_with<A>(text: &str, alphabet: &Alphabet, arith: &mut A) -> Result<A::Value, CodecError>
where
    A: Arithmetic,
    A::Value: Clone,
{
    let mut acc = arith.constant(0);
    for (i, c) in text.chars().enumerate() {
        let digit = alphabet.number(c).ok_or(CodecError::UnknownSymbol(c))?;
        let base = arith.constant(alphabet.base());
        let place = arith.pow(base, i);
        let d = arith.constant(digit);
        let term = arith.mul(d, place);
        acc = arith.add(acc, term);
    }
    Ok(acc)
}

pub fn encode(text: &str, alphabet: &Alphabet) -> Result<BigUint, CodecError> {
    // Horner evaluation is the same sum; the traced path above is the reference form.
    let base = BigUint::from(alphabet.base());
    let digits = text
        .chars()
        .map(|c| alphabet.number(c).ok_or(CodecError::UnknownSymbol(c)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut acc = BigUint::zero();
    for &d in digits.iter().rev() {
        acc = acc * &base + BigUint::from(d);
    }
    Ok(acc)
}

/// Encode into a `u128`, or `None` on overflow.
pub fn encode_u128(text: &str, alphabet: &Alphabet) -> Result<Option<u128>, CodecError> {
    let base = alphabet.base() as u128;
    let digits = text
        .chars()
        .map(|c| alphabet.number(c).ok_or(CodecError::UnknownSymbol(c)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut acc: u128 = 0;
    for &d in digits.iter().rev() {
        acc = match acc.checked_mul(base).and_then(|v| v.checked_add(d as u128)) {
            Some(v) => v,
            None => return Ok(None),
        };
    }
    Ok(Some(acc))
}

pub fn decode(value: &BigUint, alphabet: &Alphabet) -> String {
    if let Some(v) = value.to_u128() {
        return decode_u128(v, alphabet);
    }
    let base = BigUint::from(alphabet.base());
    let one = BigUint::one();
    let mut v = value.clone();
    let mut out = String::new();
    while !v.is_zero() {
        let d = ((&v - &one) % &base) + &one;
        v = (&v - &d) / &base;
        let d = d.to_u32().expect("digit below base");
        out.push(alphabet.symbol(d).expect("digit within alphabet"));
    }
    out
}

pub fn decode_u128(mut value: u128, alphabet: &Alphabet) -> String {
    let base = alphabet.base() as u128;
    let mut out = String::new();
    while value != 0 {
        let d = (value - 1) % base + 1;
        value = (value - d) / base;
        out.push(alphabet.symbol(d as u32).expect("digit within alphabet"));
    }
    out
}

/// Number of symbols in the string coded by `value`.
pub fn digit_length(value: &BigUint, alphabet: &Alphabet) -> usize {
    decode(value, alphabet).chars().count()
}

/// Smallest code of a string of length `len`: `(B^len - 1) / (B - 1)` for `B > 1`.
pub fn first_code_of_length(len: usize, alphabet: &Alphabet) -> BigUint {
    let b = alphabet.base();
    if b == 1 {
        return BigUint::from(len);
    }
    let b = BigUint::from(b);
    (num_traits::pow(b.clone(), len) - 1u32) / (b - 1u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_values() {
        let a = Alphabet::latin();
        assert_eq!(encode("", &a).unwrap(), BigUint::zero());
        assert_eq!(encode("a", &a).unwrap(), BigUint::one());
        // 3 + 2*26 + 1*26^2 + 3*26^3
        let oracle: u64 = 3 + 2 * 26 + 26u64.pow(2) + 3 * 26u64.pow(3);
        assert_eq!(oracle, 53_459);
        assert_eq!(encode("cbac", &a).unwrap(), BigUint::from(oracle));
        assert_eq!(decode(&BigUint::from(53_459u32), &a), "cbac");
        assert_eq!(decode(&BigUint::zero(), &a), "");
        assert_eq!(decode(&BigUint::one(), &a), "a");
    }

    #[test]
    fn unknown_symbol() {
        assert_eq!(encode("abC", &Alphabet::latin()), Err(CodecError::UnknownSymbol('C')));
    }

    #[test]
    fn bad_alphabets() {
        assert_eq!(Alphabet::new("e", []).unwrap_err(), CodecError::EmptyAlphabet);
        assert_eq!(Alphabet::new("d", "aba".chars()).unwrap_err(), CodecError::DuplicateSymbol('a'));
    }

    #[test]
    fn encoder_uses_only_add_mul_pow() {
        let mut t = Traced { inner: Exact, trace: vec![] };
        let v = encode_with("hello", &Alphabet::latin(), &mut t).unwrap();
        assert_eq!(v, encode("hello", &Alphabet::latin()).unwrap());
        assert_eq!(t.trace.len(), 15);
        assert!(t.trace.iter().all(|op| matches!(op, ArithOp::Add | ArithOp::Mul | ArithOp::Pow)));
    }

    #[test]
    fn unary_alphabet() {
        let a = Alphabet::new("unary", ['|']).unwrap();
        assert_eq!(encode("|||", &a).unwrap(), BigUint::from(3u32));
        assert_eq!(decode(&BigUint::from(4u32), &a), "||||");
        assert_eq!(first_code_of_length(3, &a), BigUint::from(3u32));
    }

    #[test]
    fn first_codes() {
        let a = Alphabet::latin();
        assert_eq!(first_code_of_length(0, &a), BigUint::zero());
        assert_eq!(first_code_of_length(1, &a), BigUint::one());
        assert_eq!(first_code_of_length(2, &a), encode("aa", &a).unwrap());
    }

    proptest! {
        #[test]
        fn string_roundtrip(s in "[a-z]{0,40}") {
            let a = Alphabet::latin();
            prop_assert_eq!(decode(&encode(&s, &a).unwrap(), &a), s);
        }

        #[test]
        fn value_roundtrip(bytes in proptest::collection::vec(any::<u8>(), 0..48)) {
            let a = Alphabet::latin();
            let v = BigUint::from_bytes_le(&bytes);
            prop_assert_eq!(encode(&decode(&v, &a), &a).unwrap(), v);
        }

        #[test]
        fn shorter_strings_code_lower(s in "[a-z]{0,12}", t in "[a-z]{0,12}") {
            let a = Alphabet::latin();
            if s.len() < t.len() {
                prop_assert!(encode(&s, &a).unwrap() < encode(&t, &a).unwrap());
            }
        }

        #[test]
        fn u128_agrees(s in "[a-z]{0,20}") {
            let a = Alphabet::latin();
            let big = encode(&s, &a).unwrap();
            prop_assert_eq!(encode_u128(&s, &a).unwrap().map(BigUint::from), Some(big));
        }
    }
}
