use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::sync::Arc;

use super::monomial::{Monomial, MAX_EXPONENT};
use super::ring::Ring;
use crate::error::{Error, Result};

/// A polynomial over GF(2): a set of monomials of one ring.
///
/// Terms are kept strictly descending in the monomial order, so the leading
/// monomial is the first one and equality is structural.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<Monomial>,
}

fn overflow(ring: &Ring) -> Error {
    Error::ExponentOverflow {
        max: MAX_EXPONENT,
        context: ring.name().to_string(),
    }
}

/// Symmetric difference of two strictly descending sequences.
pub(crate) fn xor_merge(a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sorts descending and cancels pairs.
fn normalize(mut terms: Vec<Monomial>) -> Vec<Monomial> {
    terms.sort_unstable_by(|a, b| b.cmp(a));
    let mut out: Vec<Monomial> = Vec::with_capacity(terms.len());
    for m in terms {
        if out.last() == Some(&m) {
            out.pop();
        } else {
            out.push(m);
        }
    }
    out
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Polynomial {
        Polynomial::from_monomial(ring, Monomial::ONE)
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Polynomial {
        Polynomial::from_monomial(ring, ring.var(i))
    }

    pub fn from_monomial(ring: &Arc<Ring>, m: Monomial) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: vec![m],
        }
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    pub fn from_monomials(ring: &Arc<Ring>, terms: impl IntoIterator<Item = Monomial>) -> Polynomial {
        Polynomial {
            ring: ring.clone(),
            terms: normalize(terms.into_iter().collect()),
        }
    }

    /// Caller guarantees `terms` is strictly descending.
    pub(crate) fn from_sorted(ring: &Arc<Ring>, terms: Vec<Monomial>) -> Polynomial {
        debug_assert!(terms.windows(2).all(|w| w[0] > w[1]));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// The generator with the given name as a polynomial.
    pub fn generator(ring: &Arc<Ring>, name: &str) -> Result<Polynomial> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(Polynomial::var(ring, i))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Monomial> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_one()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().copied()
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.terms.binary_search_by(|x| m.cmp(x)).is_ok()
    }

    /// Highest degree of a term, `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.first().map(|m| m.degree())
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.last().map(|m| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.max_degree() == self.min_degree()
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        if self.is_zero() {
            Ok(None)
        } else if self.is_homogeneous() {
            Ok(self.max_degree())
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    /// Degree `d` part.
    pub fn component(&self, d: u32) -> Polynomial {
        // Terms are grouped by descending degree.
        let start = self.terms.partition_point(|m| m.degree() > d);
        let end = self.terms.partition_point(|m| m.degree() >= d);
        Polynomial::from_sorted(&self.ring, self.terms[start..end].to_vec())
    }

    /// Nonzero homogeneous parts by degree.
    pub fn components(&self) -> BTreeMap<u32, Polynomial> {
        let mut out = BTreeMap::new();
        let mut i = 0;
        while i < self.terms.len() {
            let d = self.terms[i].degree();
            let j = i + self.terms[i..].partition_point(|m| m.degree() == d);
            out.insert(d, Polynomial::from_sorted(&self.ring, self.terms[i..j].to_vec()));
            i = j;
        }
        out
    }

    /// Terms of degree at most `d`.
    pub fn truncate(&self, d: u32) -> Polynomial {
        let start = self.terms.partition_point(|m| m.degree() > d);
        Polynomial::from_sorted(&self.ring, self.terms[start..].to_vec())
    }

    pub fn filter(&self, keep: impl Fn(Monomial) -> bool) -> Polynomial {
        Polynomial::from_sorted(&self.ring, self.terms.iter().copied().filter(|m| keep(*m)).collect())
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring.same_as(&other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.ring.name().to_string(),
                right: other.ring.name().to_string(),
            })
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(Polynomial::from_sorted(&self.ring, xor_merge(&self.terms, &other.terms)))
    }

    pub fn add_assign(&mut self, other: &Polynomial) -> Result<()> {
        self.check_ring(other)?;
        if other.is_zero() {
            return Ok(());
        }
        self.terms = xor_merge(&self.terms, &other.terms);
        Ok(())
    }

    /// Toggles one monomial.
    pub fn toggle(&mut self, m: Monomial) {
        match self.terms.binary_search_by(|x| m.cmp(x)) {
            Ok(i) => {
                self.terms.remove(i);
            }
            Err(i) => self.terms.insert(i, m),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| t.checked_mul(m).ok_or_else(|| overflow(&self.ring)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_sorted(&self.ring, terms))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.mul_filtered(other, |_| true)
    }

    /// Product restricted to the monomials accepted by `keep`.
    pub fn mul_filtered(&self, other: &Polynomial, keep: impl Fn(Monomial) -> bool) -> Result<Polynomial> {
        self.check_ring(other)?;
        let (small, big) = if self.len() <= other.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        let terms = product_terms(small, big, &keep).ok_or_else(|| overflow(&self.ring))?;
        Ok(Polynomial::from_sorted(&self.ring, terms))
    }

    /// Product with every term above degree `d` dropped.
    pub fn mul_truncated(&self, other: &Polynomial, d: u32) -> Result<Polynomial> {
        self.mul_filtered(other, |m| m.degree() <= d)
    }

    /// Frobenius: over GF(2) the square of a sum is the sum of the squares.
    pub fn square(&self) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| t.checked_mul(*t).ok_or_else(|| overflow(&self.ring)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_sorted(&self.ring, terms))
    }

    pub fn pow(&self, mut k: u32) -> Result<Polynomial> {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.square()?;
            }
        }
        Ok(acc)
    }

    /// Square root when every exponent is even.
    pub fn sqrt(&self) -> Option<Polynomial> {
        let n = self.ring.len();
        let mut terms = Vec::with_capacity(self.len());
        for t in &self.terms {
            let mut pairs = Vec::new();
            for i in 0..n {
                let e = t.exponent(i);
                if e % 2 == 1 {
                    return None;
                }
                pairs.push((i, e / 2));
            }
            terms.push(Monomial::from_exponents(&pairs, self.ring.degrees())?);
        }
        // Halving exponents preserves the order.
        Some(Polynomial::from_sorted(&self.ring, terms))
    }

    /// Exact quotient `self / divisor`; fails if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.check_ring(divisor)?;
        let lead = divisor.leading_monomial().ok_or(Error::DivisionByZero)?;
        if divisor.len() == 1 {
            let terms = self
                .terms
                .iter()
                .map(|t| t.checked_div(lead))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::NotDivisible {
                    remainder: self.to_string(),
                })?;
            return Ok(Polynomial::from_sorted(&self.ring, terms));
        }
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some(m) = rem.leading_monomial() {
            let q = m.checked_div(lead).ok_or_else(|| Error::NotDivisible {
                remainder: rem.to_string(),
            })?;
            quotient.push(q);
            rem.add_assign(&divisor.mul_monomial(q)?)?;
        }
        Ok(Polynomial::from_sorted(&self.ring, quotient))
    }

    /// Same exponent vectors read in another ring. Generator `i` must have the
    /// same degree in both rings, and only generators below `target.len()`
    /// may occur.
    pub fn reinterpret(&self, target: &Arc<Ring>) -> Result<Polynomial> {
        for (i, d) in target.degrees().iter().enumerate() {
            if i < self.ring.len() && self.ring.generator_degree(i) != *d {
                return Err(Error::RingMismatch {
                    left: self.ring.name().to_string(),
                    right: target.name().to_string(),
                });
            }
        }
        for t in &self.terms {
            if t.support().any(|(i, _)| i >= target.len()) {
                return Err(Error::RingMismatch {
                    left: self.ring.name().to_string(),
                    right: target.name().to_string(),
                });
            }
        }
        Ok(Polynomial::from_sorted(target, self.terms.clone()))
    }

    /// Rebuilds every monomial in `target` through `map`, which receives the
    /// exponent vector and returns `(generator, exponent)` pairs in the target
    /// ring, or `None` to drop the term.
    pub fn map_monomials(
        &self,
        target: &Arc<Ring>,
        map: impl Fn(&[u32]) -> Option<Vec<(usize, u32)>>,
    ) -> Result<Polynomial> {
        let n = self.ring.len();
        let mut terms = Vec::with_capacity(self.len());
        for t in &self.terms {
            if let Some(pairs) = map(&t.exponents(n)) {
                terms.push(target.monomial(&pairs)?);
            }
        }
        Ok(Polynomial::from_monomials(target, terms))
    }

    /// Image under the ring map sending generator `i` to `images[i]`, keeping
    /// only the monomials accepted by `keep`. `keep` must be closed under
    /// division (true degree and exponent bounds are), so intermediate
    /// products can be truncated too.
    pub fn substitute(
        &self,
        target: &Arc<Ring>,
        images: &[Polynomial],
        keep: impl Fn(Monomial) -> bool,
    ) -> Result<Polynomial> {
        self.substitute_reduced(target, images, keep, &|p| Ok(p))
    }

    /// [`Polynomial::substitute`] into a quotient: `reduce` is applied to
    /// every intermediate power and product, so it must be a ring map that
    /// preserves degrees (a normal form by a homogeneous basis is).
    pub fn substitute_reduced(
        &self,
        target: &Arc<Ring>,
        images: &[Polynomial],
        keep: impl Fn(Monomial) -> bool,
        reduce: &dyn Fn(Polynomial) -> Result<Polynomial>,
    ) -> Result<Polynomial> {
        let n = self.ring.len();
        if images.len() != n {
            return Err(Error::Unsupported(format!(
                "substitution into {} needs {} images, got {}",
                self.ring.name(),
                n,
                images.len()
            )));
        }
        for img in images {
            if !img.ring.same_as(target) {
                return Err(Error::RingMismatch {
                    left: img.ring.name().to_string(),
                    right: target.name().to_string(),
                });
            }
        }
        if self.is_zero() {
            return Ok(Polynomial::zero(target));
        }
        // Group terms by the exponent of the last generator, then the one
        // before, and so on, so that each group is a contiguous run.
        let rev_key = |m: &Monomial| -> u128 {
            (0..n).fold(0u128, |acc, i| acc | ((m.exponent(i) as u128) << (7 * i)))
        };
        let mut sorted = self.terms.clone();
        sorted.sort_unstable_by_key(rev_key);
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|_| vec![Polynomial::one(target)])
            .collect();
        let mut sub = Substitution {
            target,
            images,
            keep: &keep,
            reduce,
            powers: &mut powers,
        };
        let out = sub.run(&sorted, n as isize - 1)?;
        reduce(out)
    }

    /// Canonical JSON form.
    pub fn to_json(&self) -> serde_json::Value {
        let degree = match self.homogeneous_degree() {
            Ok(Some(d)) => serde_json::Value::from(d),
            Ok(None) => serde_json::Value::from(0),
            Err(_) => serde_json::Value::Null,
        };
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|m| {
                serde_json::Value::Array(
                    m.support()
                        .map(|(i, e)| serde_json::json!([self.ring.generator_name(i), e]))
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({
            "ring": self.ring.name(),
            "degree": degree,
            "terms": terms,
        })
    }

    pub fn from_json(ring: &Arc<Ring>, value: &serde_json::Value) -> Result<Polynomial> {
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: msg.to_string(),
        };
        let terms = value
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| bad("missing `terms` array"))?;
        let mut out = Vec::with_capacity(terms.len());
        for term in terms {
            let factors = term.as_array().ok_or_else(|| bad("term is not an array"))?;
            let mut pairs = Vec::new();
            for f in factors {
                let name = f.get(0).and_then(|x| x.as_str()).ok_or_else(|| bad("factor name"))?;
                let e = f.get(1).and_then(|x| x.as_u64()).ok_or_else(|| bad("factor exponent"))?;
                let i = ring
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
                pairs.push((i, e as u32));
            }
            out.push(ring.monomial(&pairs)?);
        }
        Ok(Polynomial::from_monomials(ring, out))
    }
}

struct Substitution<'a, F: Fn(Monomial) -> bool> {
    target: &'a Arc<Ring>,
    images: &'a [Polynomial],
    keep: &'a F,
    reduce: &'a dyn Fn(Polynomial) -> Result<Polynomial>,
    powers: &'a mut Vec<Vec<Polynomial>>,
}

impl<F: Fn(Monomial) -> bool> Substitution<'_, F> {
    fn power(&mut self, var: usize, e: u32) -> Result<&Polynomial> {
        while self.powers[var].len() <= e as usize {
            let last = self.powers[var].last().unwrap();
            let next = (self.reduce)(last.mul_filtered(&self.images[var], self.keep)?)?;
            self.powers[var].push(next);
        }
        Ok(&self.powers[var][e as usize])
    }

    fn run(&mut self, slice: &[Monomial], var: isize) -> Result<Polynomial> {
        if var < 0 {
            return Ok(Polynomial::one(self.target));
        }
        if slice.len() == 1 {
            let m = slice[0];
            let mut acc = Polynomial::one(self.target);
            for v in (0..=var as usize).rev() {
                let e = m.exponent(v);
                if e > 0 {
                    let keep = self.keep;
                    let p = self.power(v, e)?.clone();
                    acc = (self.reduce)(acc.mul_filtered(&p, keep)?)?;
                    if acc.is_zero() {
                        break;
                    }
                }
            }
            return Ok(acc);
        }
        let v = var as usize;
        let mut pieces = Vec::new();
        let mut start = 0;
        while start < slice.len() {
            let e = slice[start].exponent(v);
            let end = start + slice[start..].partition_point(|m| m.exponent(v) == e);
            let inner = self.run(&slice[start..end], var - 1)?;
            if !inner.is_zero() {
                let piece = if e == 0 {
                    inner
                } else {
                    let keep = self.keep;
                    let p = self.power(v, e)?.clone();
                    (self.reduce)(inner.mul_filtered(&p, keep)?)?
                };
                pieces.push(piece.terms);
            }
            start = end;
        }
        Ok(Polynomial::from_sorted(self.target, sum_all(pieces)))
    }
}

/// Balanced pairwise symmetric difference of descending sequences.
pub(crate) fn sum_all(mut pieces: Vec<Vec<Monomial>>) -> Vec<Monomial> {
    if pieces.is_empty() {
        return Vec::new();
    }
    while pieces.len() > 1 {
        let mut next = Vec::with_capacity(pieces.len().div_ceil(2));
        let mut it = pieces.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(xor_merge(&a, &b)),
                None => next.push(a),
            }
        }
        pieces = next;
    }
    pieces.pop().unwrap()
}

/// Rows `small[r] * big[..]` are each descending, so the product is a k-way
/// merge of them. Rows are produced lazily to keep memory at output size.
fn product_terms(
    small: &[Monomial],
    big: &[Monomial],
    keep: &impl Fn(Monomial) -> bool,
) -> Option<Vec<Monomial>> {
    if small.is_empty() {
        return Some(Vec::new());
    }
    if small.len() == 1 {
        let mut out = Vec::with_capacity(big.len());
        for b in big {
            let p = small[0].checked_mul(*b)?;
            if keep(p) {
                out.push(p);
            }
        }
        return Some(out);
    }
    if small.len() <= 4 {
        let mut acc: Vec<Monomial> = Vec::new();
        for a in small {
            let mut row = Vec::with_capacity(big.len());
            for b in big {
                let p = a.checked_mul(*b)?;
                if keep(p) {
                    row.push(p);
                }
            }
            acc = xor_merge(&acc, &row);
        }
        return Some(acc);
    }

    struct Cursor {
        key: u128,
        row: u32,
        pos: u32,
    }
    impl PartialEq for Cursor {
        fn eq(&self, o: &Self) -> bool {
            self.key == o.key
        }
    }
    impl Eq for Cursor {}
    impl PartialOrd for Cursor {
        fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Cursor {
        fn cmp(&self, o: &Self) -> std::cmp::Ordering {
            self.key.cmp(&o.key)
        }
    }

    let advance = |row: usize, mut pos: usize| -> Option<Option<(Monomial, usize)>> {
        while pos < big.len() {
            let p = small[row].checked_mul(big[pos])?;
            if keep(p) {
                return Some(Some((p, pos)));
            }
            pos += 1;
        }
        Some(None)
    };

    let mut heap = BinaryHeap::with_capacity(small.len());
    for r in 0..small.len() {
        if let Some((m, pos)) = advance(r, 0)? {
            heap.push(Cursor {
                key: m.order_key(),
                row: r as u32,
                pos: pos as u32,
            });
        }
    }
    let mut out: Vec<Monomial> = Vec::new();
    while let Some(top) = heap.pop() {
        let row = top.row as usize;
        let m = small[row].checked_mul(big[top.pos as usize])?;
        if out.last() == Some(&m) {
            out.pop();
        } else {
            out.push(m);
        }
        if let Some((next, pos)) = advance(row, top.pos as usize + 1)? {
            heap.push(Cursor {
                key: next.order_key(),
                row: top.row,
                pos: pos as u32,
            });
        }
    }
    Some(out)
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.ring.format_monomial(*m))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.ring.name(), self)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl std::ops::$tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics on a ring mismatch or exponent overflow; use the
            /// fallible method for untrusted input.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                Polynomial::$call(self, rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}
binop!(Add, add, add);
binop!(Mul, mul, mul);
