//! Steenrod squares on BSO(n) and BSpin(n) through the Wu formula.
//!
//! The total square `Sq = sum_j Sq^j` is a ring map, so it is evaluated by
//! substituting the total squares of the generators and reducing to normal
//! form along the way. Squares of `y_i = w_i` come from the Wu formula with
//! `w_1 = 0` and `w_m = 0` above the rank. The top class `u` of BSpin(n) is
//! the top Stiefel-Whitney class of the spin representation, so its squares
//! come from the same formula applied to that representation's classes.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::poly::{binom_mod2, Polynomial};
use crate::presentations::{u_degree, u_index, y_index, PresentedRing};

/// `Sq^j w_i = sum_k C(i-k-1, j-k) w_(i+j-k) w_k`, for `0 <= j <= i`, with
/// the classes supplied by `w`.
pub fn wu_formula(j: u32, i: u32, w: &dyn Fn(u32) -> Result<Polynomial>) -> Result<Polynomial> {
    if j > i {
        return Err(Error::Unsupported(format!("Sq^{j} w_{i} is outside the Wu formula")));
    }
    let mut acc: Option<Polynomial> = None;
    for k in 0..=j {
        if !binom_mod2(i as i64 - k as i64 - 1, (j - k) as i64) {
            continue;
        }
        let a = w(i + j - k)?;
        if a.is_zero() {
            continue;
        }
        let b = w(k)?;
        if b.is_zero() {
            continue;
        }
        let term = a.mul(&b)?;
        match acc.as_mut() {
            Some(s) => s.add_assign(&term)?,
            None => acc = Some(term),
        }
    }
    Ok(acc.unwrap_or_else(|| Polynomial::zero(w(0).expect("w_0 = 1").ring())))
}

/// Degrees where the Stiefel-Whitney classes of the spin representation of
/// Spin(n) can be nonzero: `2^h` and `2^h - 2^i` for `r <= i <= h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VanishingPattern {
    pub n: u32,
    pub h: u32,
    pub r: u32,
}

impl VanishingPattern {
    pub fn for_rank(n: u32) -> VanishingPattern {
        let r = match n % 8 {
            0 | 1 | 7 => 0,
            2 | 6 => 1,
            _ => 2,
        };
        VanishingPattern {
            n,
            h: crate::presentations::h_n(n),
            r,
        }
    }

    /// Dimension of the representation and degree of `u`.
    pub fn top(&self) -> u32 {
        1 << self.h
    }

    /// Ascending, starting with 0.
    pub fn degrees(&self) -> Vec<u32> {
        let mut out: Vec<u32> = (self.r..=self.h).map(|i| self.top() - (1 << i)).collect();
        out.push(self.top());
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn contains(&self, d: u32) -> bool {
        d == self.top() || (self.r..=self.h).any(|i| self.top() - (1 << i) == d)
    }

    /// `2^(h-1)`, the lowest degree with a possibly nonzero class.
    pub fn lowest(&self) -> u32 {
        self.top() / 2
    }
}

/// The Wu formula for `Sq^j w_d` of a representation whose classes vanish
/// outside a pattern: products `w_a w_b` with both degrees in the pattern.
#[derive(Clone, Debug)]
pub struct WuSum {
    /// Sum of the products whose factors are known.
    pub known: Polynomial,
    /// Products `w_a w_b` where a factor is not known yet.
    pub unresolved: Vec<(u32, u32)>,
}

impl WuSum {
    pub fn resolve(self, table: &str) -> Result<Polynomial> {
        match self.unresolved.first() {
            None => Ok(self.known),
            Some(&(a, b)) => Err(Error::MissingClass {
                table: table.to_string(),
                degree: a.max(b),
            }),
        }
    }
}

/// Right side of the Wu formula for `Sq^j w_d(rho)`, reading `w_m(rho)` from
/// `class`, which returns `None` for a class not known yet. Degrees outside
/// the pattern, or above the top, contribute nothing.
pub fn expected_sq_of_class(
    pattern: &VanishingPattern,
    class: &dyn Fn(u32) -> Option<Polynomial>,
    zero: &Polynomial,
    d: u32,
    j: u32,
) -> Result<WuSum> {
    if !pattern.contains(d) {
        return Err(Error::Unsupported(format!(
            "degree {d} is not in the pattern of Spin({})",
            pattern.n
        )));
    }
    let mut known = zero.clone();
    let mut unresolved = Vec::new();
    if j > d {
        return Ok(WuSum { known, unresolved });
    }
    for k in 0..=j {
        let a = d + j - k;
        if a > pattern.top() || !pattern.contains(a) || !pattern.contains(k) {
            continue;
        }
        if !binom_mod2(d as i64 - k as i64 - 1, (j - k) as i64) {
            continue;
        }
        match (class(a), class(k)) {
            (Some(x), Some(y)) => known.add_assign(&x.mul(&y)?)?,
            _ => unresolved.push((a, k)),
        }
    }
    Ok(WuSum { known, unresolved })
}

/// How a generator is squared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorRule {
    /// `w_i` of the rank `n` bundle (the ambient dimension of the context).
    StiefelWhitney(u32),
    /// The top class `u` of BSpin(n), the class of degree `2^h` of the spin
    /// representation.
    SpinTop,
}

/// Steenrod squares on a presented ring whose generators are all covered
/// by a [`GeneratorRule`].
pub struct SteenrodContext {
    ring: Arc<PresentedRing>,
    rank: u32,
    rules: Vec<GeneratorRule>,
    /// Total class of the spin representation, needed to square `u`.
    spin_total: Option<Polynomial>,
    totals: Vec<OnceLock<Polynomial>>,
}

impl SteenrodContext {
    fn with_rules(ring: &Arc<PresentedRing>, rank: u32, rules: Vec<GeneratorRule>) -> SteenrodContext {
        let totals = (0..rules.len()).map(|_| OnceLock::new()).collect();
        SteenrodContext {
            ring: ring.clone(),
            rank,
            rules,
            spin_total: None,
            totals,
        }
    }

    /// `ring` must be [`crate::presentations::bso_ring`] or a quotient of it.
    pub fn bso(ring: &Arc<PresentedRing>, n: u32) -> Result<SteenrodContext> {
        let rules: Vec<GeneratorRule> = (2..=n).map(GeneratorRule::StiefelWhitney).collect();
        if ring.ring().len() != rules.len() {
            return Err(Error::Unsupported(format!("{} is not BSO({n})", ring.name())));
        }
        Ok(SteenrodContext::with_rules(ring, n, rules))
    }

    /// Squares on H*(BSpin(n)). Squaring `u` needs [`Self::with_spin_total`].
    pub fn bspin(ring: &Arc<PresentedRing>, n: u32) -> Result<SteenrodContext> {
        let mut rules: Vec<GeneratorRule> = (2..=n).map(GeneratorRule::StiefelWhitney).collect();
        rules.push(GeneratorRule::SpinTop);
        if ring.ring().len() != rules.len() || ring.ring().generator_degree(u_index(n)) != u_degree(n) {
            return Err(Error::Unsupported(format!("{} is not BSpin({n})", ring.name())));
        }
        Ok(SteenrodContext::with_rules(ring, n, rules))
    }

    /// Attaches the total class of the spin representation that defines `u`.
    /// Its top component must be `u` itself.
    pub fn with_spin_total(mut self, total: Polynomial) -> Result<SteenrodContext> {
        let n = self.rank;
        let top = u_degree(n);
        let u = Polynomial::var(self.ring.ring(), u_index(n));
        if total.component(top) != u {
            return Err(Error::Inconsistent {
                detail: format!("the spin class of degree {top} must be u, got {}", total.component(top)),
            });
        }
        self.spin_total = Some(self.ring.normal_form(&total)?);
        self.totals[u_index(n)] = OnceLock::new();
        Ok(self)
    }

    pub fn ring(&self) -> &Arc<PresentedRing> {
        &self.ring
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// `w_m` of the rank `n` bundle: 1, 0 for `m = 1` and above the rank,
    /// else the generator.
    fn sw(&self, m: u32) -> Polynomial {
        let r = self.ring.ring();
        match m {
            0 => Polynomial::one(r),
            1 => Polynomial::zero(r),
            m if m > self.rank => Polynomial::zero(r),
            m => Polynomial::var(r, y_index(m)),
        }
    }

    /// `Sq^j w_i` from the Wu formula, reduced.
    pub fn sq_on_generator(&self, j: u32, i: u32) -> Result<Polynomial> {
        let raw = wu_formula(j, i, &|m| Ok(self.sw(m)))?;
        self.ring.normal_form(&raw)
    }

    /// `Sq^j u`, from the Wu formula for the spin representation.
    pub fn sq_on_u(&self, j: u32) -> Result<Polynomial> {
        let n = self.rank;
        let total = self.spin_total.as_ref().ok_or_else(|| Error::MissingClass {
            table: format!("spin representation of Spin({n})"),
            degree: u_degree(n),
        })?;
        let pattern = VanishingPattern::for_rank(n);
        let zero = Polynomial::zero(self.ring.ring());
        let sum = expected_sq_of_class(&pattern, &|m| Some(total.component(m)), &zero, pattern.top(), j)?;
        self.ring.normal_form(&sum.resolve("spin representation")?)
    }

    fn generator_total(&self, g: usize) -> Result<&Polynomial> {
        if let Some(t) = self.totals[g].get() {
            return Ok(t);
        }
        let mut acc = Polynomial::zero(self.ring.ring());
        match self.rules[g] {
            GeneratorRule::StiefelWhitney(i) => {
                for j in 0..=i {
                    acc.add_assign(&self.sq_on_generator(j, i)?)?;
                }
            }
            GeneratorRule::SpinTop => {
                for j in 0..=u_degree(self.rank) {
                    acc.add_assign(&self.sq_on_u(j)?)?;
                }
            }
        }
        let _ = self.totals[g].set(acc);
        Ok(self.totals[g].get().unwrap())
    }

    fn images(&self, p: &Polynomial) -> Result<Vec<Polynomial>> {
        let used: Vec<bool> = (0..self.rules.len())
            .map(|g| p.terms().iter().any(|m| m.exponent(g) > 0))
            .collect();
        (0..self.rules.len())
            .map(|g| {
                if used[g] {
                    self.generator_total(g).cloned()
                } else {
                    Ok(Polynomial::zero(self.ring.ring()))
                }
            })
            .collect()
    }

    fn check(&self, p: &Polynomial) -> Result<()> {
        if !p.ring().same_as(self.ring.ring()) {
            return Err(Error::RingMismatch {
                left: p.ring().name().to_string(),
                right: self.ring.name().to_string(),
            });
        }
        Ok(())
    }

    /// Total square, truncated above `max_degree` when given.
    pub fn total_sq_truncated(&self, p: &Polynomial, max_degree: Option<u32>) -> Result<Polynomial> {
        self.check(p)?;
        let p = self.ring.normal_form(p)?;
        let images = self.images(&p)?;
        let ring = &self.ring;
        p.substitute_reduced(
            ring.ring(),
            &images,
            |m| max_degree.is_none_or(|d| m.degree() <= d),
            &|q| ring.normal_form(&q),
        )
    }

    /// `Sq(p) = sum_j Sq^j p`.
    pub fn total_sq(&self, p: &Polynomial) -> Result<Polynomial> {
        self.total_sq_truncated(p, None)
    }

    /// `Sq^j p` for homogeneous `p`.
    pub fn sq(&self, j: u32, p: &Polynomial) -> Result<Polynomial> {
        Ok(self.sq_many(&[j], p)?.remove(&j).unwrap())
    }

    /// `Sq^j p` for several `j` at once; `p` must be homogeneous.
    pub fn sq_many(&self, js: &[u32], p: &Polynomial) -> Result<BTreeMap<u32, Polynomial>> {
        self.check(p)?;
        let zero = Polynomial::zero(self.ring.ring());
        let Some(d) = p.homogeneous_degree()? else {
            return Ok(js.iter().map(|&j| (j, zero.clone())).collect());
        };
        let jmax = js.iter().copied().filter(|&j| j <= d).max();
        let total = match jmax {
            None => zero.clone(),
            Some(0) => self.ring.normal_form(p)?,
            Some(j) => self.total_sq_truncated(p, Some(d + j))?,
        };
        Ok(js
            .iter()
            .map(|&j| (j, if j > d { zero.clone() } else { total.component(d + j) }))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::bso_ring;

    fn bso(n: u32) -> SteenrodContext {
        let r = PresentedRing::free(&bso_ring(n).unwrap());
        SteenrodContext::bso(&r, n).unwrap()
    }

    #[test]
    fn wu_formula_on_small_classes() {
        let ctx = bso(12);
        let r = ctx.ring().clone();
        assert_eq!(ctx.sq_on_generator(1, 2).unwrap(), r.parse("y_3").unwrap());
        assert_eq!(ctx.sq_on_generator(2, 3).unwrap(), r.parse("y_5 + y_2*y_3").unwrap());
        assert_eq!(ctx.sq_on_generator(0, 7).unwrap(), r.parse("y_7").unwrap());
        assert!(ctx.sq_on_generator(8, 7).is_err());
        let y5 = r.parse("y_5").unwrap();
        assert_eq!(ctx.sq(4, &y5).unwrap(), r.parse("y_9 + y_2*y_7 + y_3*y_6 + y_4*y_5").unwrap());
    }

    #[test]
    fn total_square_truncates_at_the_rank() {
        let ctx = bso(3);
        let r = ctx.ring().clone();
        let w2 = r.parse("y_2").unwrap();
        assert_eq!(ctx.total_sq(&w2).unwrap(), r.parse("y_2 + y_3 + y_2^2").unwrap());
    }

    #[test]
    fn instability_edges() {
        let ctx = bso(6);
        let r = ctx.ring().clone();
        let p = r.parse("y_4*y_6 + y_2^5").unwrap();
        assert!(ctx.sq(11, &p).unwrap().is_zero());
        assert_eq!(ctx.sq(10, &p).unwrap(), p.square().unwrap());
        assert!(ctx.sq(3, &r.parse("y_2 + y_3").unwrap()).is_err());
    }

    #[test]
    fn patterns() {
        assert_eq!(VanishingPattern::for_rank(11).degrees(), [0, 32, 48, 56, 60, 64]);
        assert_eq!(VanishingPattern::for_rank(12).degrees(), [0, 32, 48, 56, 60, 64]);
        assert_eq!(VanishingPattern::for_rank(15).degrees(), [0, 64, 96, 112, 120, 124, 126, 127, 128]);
        assert_eq!(VanishingPattern::for_rank(10).degrees(), [0, 16, 24, 28, 30, 32]);
        assert!((3..=15).all(|n| VanishingPattern::for_rank(n).contains(0)));
    }

    #[test]
    fn expected_squares() {
        let r = bso_ring(4).unwrap();
        let zero = Polynomial::zero(&r);
        let one = Polynomial::one(&r);
        let unknown = |_| None;
        // n = 11: Sq^1 w_32 has no surviving term.
        let p11 = VanishingPattern::for_rank(11);
        let s = expected_sq_of_class(&p11, &unknown, &zero, 32, 1).unwrap();
        assert!(s.known.is_zero() && s.unresolved.is_empty());
        // n = 12: Sq^62 w_64.
        let p12 = VanishingPattern::for_rank(12);
        let s = expected_sq_of_class(&p12, &unknown, &zero, 64, 62).unwrap();
        assert!(s.unresolved.is_empty());
        // n = 15: Sq^32 w_64 is exactly w_96.
        let p15 = VanishingPattern::for_rank(15);
        let x = Polynomial::var(&r, 0);
        let class = |m: u32| match m {
            0 => Some(one.clone()),
            96 => Some(x.clone()),
            _ => None,
        };
        let s = expected_sq_of_class(&p15, &class, &zero, 64, 32).unwrap();
        assert!(s.unresolved.is_empty());
        assert_eq!(s.known, x);
    }
}
