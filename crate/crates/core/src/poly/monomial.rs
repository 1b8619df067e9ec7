use std::cmp::Ordering;

/// Maximum number of generators a ring may have.
pub const MAX_GENERATORS: usize = 16;
/// Largest exponent a single generator may carry.
pub const MAX_EXPONENT: u32 = 127;

const SLOT_BITS: u32 = 7;
const SLOT_MASK: u128 = 0x7f;
const EXP_FIELD_BITS: u32 = SLOT_BITS * MAX_GENERATORS as u32;
const EXP_MASK: u128 = (1u128 << EXP_FIELD_BITS) - 1;

/// Bit positions a carry (or borrow) crosses when it leaves an exponent slot.
const SLOT_BOUNDARIES: u128 = {
    let mut acc = 0u128;
    let mut i = 0;
    while i < MAX_GENERATORS {
        acc |= 1u128 << (EXP_FIELD_BITS - SLOT_BITS * i as u32);
        i += 1;
    }
    acc
};

#[inline]
const fn shift(i: usize) -> u32 {
    EXP_FIELD_BITS - SLOT_BITS * (i as u32 + 1)
}

/// A monomial packed into one machine word.
///
/// Generator `i` owns a 7-bit exponent slot; slot 0 is the most significant
/// one. The top 16 bits hold the weighted degree, so multiplication is a
/// single addition with carry detection and comparison is an integer compare
/// after flipping the exponent bits.
///
/// The order is graded: higher degree first. Within a degree the exponents
/// are scanned from generator 0 upward and at the first difference the
/// monomial with the larger exponent is the smaller one. This order is
/// multiplicative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    /// Builds a monomial from `(generator, exponent)` pairs and the generator
    /// degrees of its ring. Repeated generators add their exponents.
    pub fn from_exponents(pairs: &[(usize, u32)], degrees: &[u32]) -> Option<Monomial> {
        let mut m = Monomial::ONE;
        for &(i, e) in pairs {
            if i >= degrees.len() || i >= MAX_GENERATORS {
                return None;
            }
            let cur = m.exponent(i) + e;
            if cur > MAX_EXPONENT {
                return None;
            }
            let deg = m.degree() as u64 + degrees[i] as u64 * e as u64;
            if deg > u16::MAX as u64 {
                return None;
            }
            let bits = m.0 & EXP_MASK & !(SLOT_MASK << shift(i));
            m = Monomial(bits | ((cur as u128) << shift(i)) | ((deg as u128) << EXP_FIELD_BITS));
        }
        Some(m)
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> EXP_FIELD_BITS) as u32
    }

    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> shift(i)) & SLOT_MASK) as u32
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// Exponent vector of the first `n` generators.
    pub fn exponents(self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exponent(i)).collect()
    }

    /// Pairs `(generator, exponent)` with nonzero exponent, ascending by index.
    pub fn support(self) -> impl Iterator<Item = (usize, u32)> {
        (0..MAX_GENERATORS).filter_map(move |i| {
            let e = self.exponent(i);
            (e > 0).then_some((i, e))
        })
    }

    /// Sum of the exponents.
    pub fn total_exponent(self) -> u32 {
        (0..MAX_GENERATORS).map(|i| self.exponent(i)).sum()
    }

    /// Key whose integer order is the monomial order.
    #[inline]
    pub fn order_key(self) -> u128 {
        self.0 ^ EXP_MASK
    }

    /// Raw packed representation. Stable within one build.
    #[inline]
    pub fn raw(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        let (sum, overflow) = self.0.overflowing_add(other.0);
        if overflow || (self.0 ^ other.0 ^ sum) & SLOT_BOUNDARIES != 0 {
            None
        } else {
            Some(Monomial(sum))
        }
    }

    /// `self / other` when `other` divides `self`.
    #[inline]
    pub fn checked_div(self, other: Monomial) -> Option<Monomial> {
        let (diff, underflow) = self.0.overflowing_sub(other.0);
        if underflow || (self.0 ^ other.0 ^ diff) & SLOT_BOUNDARIES != 0 {
            None
        } else {
            Some(Monomial(diff))
        }
    }

    #[inline]
    pub fn divides(self, other: Monomial) -> bool {
        other.checked_div(self).is_some()
    }

    /// True when no generator occurs in both monomials.
    pub fn is_coprime(self, other: Monomial) -> bool {
        (0..MAX_GENERATORS).all(|i| self.exponent(i) == 0 || other.exponent(i) == 0)
    }

    /// Exponent of generator `i` removed.
    pub fn without(self, i: usize, degree_of_i: u32) -> Monomial {
        let e = self.exponent(i);
        let deg = self.degree() - e * degree_of_i;
        let bits = self.0 & EXP_MASK & !(SLOT_MASK << shift(i));
        Monomial(bits | ((deg as u128) << EXP_FIELD_BITS))
    }

    /// Least common multiple; `degrees` are the generator degrees.
    pub fn lcm(self, other: Monomial, degrees: &[u32]) -> Monomial {
        let pairs: Vec<(usize, u32)> = (0..degrees.len())
            .map(|i| (i, self.exponent(i).max(other.exponent(i))))
            .collect();
        Monomial::from_exponents(&pairs, degrees).expect("lcm of valid monomials is valid")
    }
}

impl Ord for Monomial {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Monomial {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Monomial(deg {}, {:?})", self.degree(), self.support().collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEG: [u32; 4] = [2, 3, 4, 5];

    fn m(pairs: &[(usize, u32)]) -> Monomial {
        Monomial::from_exponents(pairs, &DEG).unwrap()
    }

    #[test]
    fn packing_round_trip() {
        let a = m(&[(0, 3), (2, 127), (3, 1)]);
        assert_eq!(a.exponents(4), vec![3, 0, 127, 1]);
        assert_eq!(a.degree(), 6 + 508 + 5);
    }

    #[test]
    fn exponent_limit() {
        assert!(Monomial::from_exponents(&[(1, 128)], &DEG).is_none());
        let a = m(&[(1, 100)]);
        let b = m(&[(1, 27)]);
        assert_eq!(a.checked_mul(b).unwrap().exponent(1), 127);
        assert!(a.checked_mul(m(&[(1, 28)])).is_none());
    }

    #[test]
    fn overflow_of_slot_zero_does_not_leak_into_degree() {
        let a = m(&[(0, 100)]);
        assert!(a.checked_mul(a).is_none());
    }

    #[test]
    fn division() {
        let a = m(&[(0, 3), (3, 2)]);
        let b = m(&[(0, 1), (3, 2)]);
        assert_eq!(a.checked_div(b), Some(m(&[(0, 2)])));
        assert!(b.checked_div(a).is_none());
        assert!(m(&[(1, 1)]).checked_div(m(&[(0, 1)])).is_none());
        assert!(b.divides(a));
    }

    #[test]
    fn order_within_degree() {
        // y_7*y_10 > y_6*y_11 > y_4*y_13 in generators y_2..y_15.
        let degs: Vec<u32> = (2..=15).collect();
        let g = |i: u32| (i as usize - 2, 1);
        let mk = |p: &[(usize, u32)]| Monomial::from_exponents(p, &degs).unwrap();
        let a = mk(&[g(7), g(10)]);
        let b = mk(&[g(6), g(11)]);
        let c = mk(&[g(4), g(13)]);
        assert!(a > b && b > c);
        assert!(mk(&[g(5)]) > mk(&[g(2), g(3)]));
        assert!(mk(&[g(4)]) > mk(&[(0, 2)]));
    }

    #[test]
    fn graded_first() {
        assert!(m(&[(3, 1)]) > m(&[(0, 2)]));
        assert!(m(&[(0, 3)]) > m(&[(3, 1)]));
        assert!(Monomial::ONE < m(&[(0, 1)]));
    }

    #[test]
    fn lcm_and_coprime() {
        let a = m(&[(0, 3), (1, 1)]);
        let b = m(&[(0, 1), (2, 2)]);
        assert_eq!(a.lcm(b, &DEG), m(&[(0, 3), (1, 1), (2, 2)]));
        assert!(!a.is_coprime(b));
        assert!(m(&[(1, 1)]).is_coprime(m(&[(2, 1)])));
    }
}
