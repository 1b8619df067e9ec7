//! Symmetric functions over GF(2) and classes of exterior powers.
//!
//! For a rank `n` bundle with Stiefel-Whitney roots `t_1..t_n` the total
//! class of its `i`-th exterior power is `prod (1 + t_{j_1} + ... + t_{j_i})`
//! over the `i`-subsets, a symmetric polynomial and hence a polynomial
//! `phi^i_n(w_1, ..., w_n)` in the elementary classes. Expanding that product
//! in the roots is hopeless beyond small `n`, so the classes are built by
//! induction on `n`: splitting off the last root `t = t_n` gives
//!
//! ```text
//! phi^i_n(w) = phi^i_{n-1}(v) * sum_k (1 + t)^(N - k) * c_k(phi^{i-1}_{n-1})(v)
//! ```
//!
//! where `v_1..v_{n-1}` are the elementary classes of the first `n - 1` roots,
//! `N = C(n-1, i-1)` and `c_k` is the degree `k` part. The right side lives in
//! `GF(2)[v, t]`; it is turned back into a polynomial in `w_1..w_n` by peeling
//! off powers of `w_n = v_{n-1} t`, using `w_j = v_j + v_{j-1} t`.
//!
//! Mod 2 the Chern classes of exterior powers of SU(n) obey the same
//! formulas with `c_j` in degree `2j` and `c_1 = 0`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{binom_mod2, Monomial, Polynomial, Ring};

/// Default ceiling on the number of terms of any intermediate polynomial.
pub const DEFAULT_TERM_BUDGET: usize = 1 << 26;

/// Largest number of linear factors [`bh_product`] will multiply out.
pub const DEFAULT_FACTOR_BUDGET: u64 = 128;

/// `GF(2)[t_1, ..., t_n]`, the roots in degree 1.
pub fn root_ring(n: u32) -> Result<Arc<Ring>> {
    Ring::new(format!("BO(1)^{n}"), (1..=n).map(|j| (format!("t_{j}"), 1)).collect())
}

/// `GF(2)[w_1, ..., w_n]`, the cohomology of BO(n).
pub fn sw_ring(n: u32) -> Result<Arc<Ring>> {
    Ring::indexed(format!("BO({n})"), "w", 1..=n, 1)
}

/// `GF(2)[c_2, ..., c_n]`, mod 2 cohomology of BSU(n) with `c_j` in degree `2j`.
pub fn su_ring(n: u32) -> Result<Arc<Ring>> {
    Ring::indexed(format!("BSU({n})"), "c", 2..=n, 2)
}

/// `GF(2)[v_1, ..., v_{n-1}, t]`: elementary classes of the first `n - 1`
/// roots together with the last root. `v_j` shares slot and degree with `w_j`.
fn split_ring(n: u32) -> Result<Arc<Ring>> {
    let mut gens: Vec<(String, u32)> = (1..n).map(|j| (format!("v_{j}"), j)).collect();
    gens.push(("t".to_string(), 1));
    Ring::new(format!("BO({})xBO(1)", n - 1), gens)
}

/// `e_k(t_1, ..., t_n)`.
pub fn elementary_symmetric(roots: &Arc<Ring>, k: u32) -> Polynomial {
    let n = roots.len();
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..k as usize).collect();
    if k as usize > n {
        return Polynomial::zero(roots);
    }
    loop {
        let pairs: Vec<(usize, u32)> = subset.iter().map(|&i| (i, 1)).collect();
        out.push(roots.monomial(&pairs).expect("squarefree monomial"));
        // next subset in lexicographic order
        let mut i = k as usize;
        loop {
            if i == 0 {
                return Polynomial::from_monomials(roots, out);
            }
            i -= 1;
            if subset[i] < n - (k as usize - i) {
                subset[i] += 1;
                for j in i + 1..k as usize {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Substitutes `w_j -> e_j(t)` into a polynomial of `GF(2)[w_1..w_n]`.
pub fn evaluate_elementary(q: &Polynomial, roots: &Arc<Ring>) -> Result<Polynomial> {
    let images: Vec<Polynomial> = (1..=q.ring().len() as u32)
        .map(|j| elementary_symmetric(roots, j))
        .collect();
    q.substitute(roots, &images, |_| true)
}

/// Total class `prod_{|S| = i} (1 + sum_{j in S} t_j)` expanded in the roots.
///
/// Only for small cases: the number of factors `C(n, i)` must stay within
/// `factor_budget`, and intermediate sizes within `term_budget`. Use
/// [`exterior_class`] otherwise.
pub fn bh_product(n: u32, i: u32, factor_budget: u64, term_budget: usize) -> Result<Polynomial> {
    let factors = binomial(n, i);
    if factors > factor_budget {
        return Err(Error::BudgetExceeded {
            what: format!(
                "the product of C({n},{i}) = {factors} factors; use the incremental exterior_class path"
            ),
            limit: factor_budget as usize,
        });
    }
    let roots = root_ring(n)?;
    let mut acc = Polynomial::one(&roots);
    for_each_subset(n, i, |s| {
        let mut f = Polynomial::one(&roots);
        for &j in s {
            f.add_assign(&Polynomial::var(&roots, j as usize))?;
        }
        acc = acc.mul(&f)?;
        if acc.len() > term_budget {
            return Err(Error::BudgetExceeded {
                what: format!("the root expansion of lambda^{i} on {n} roots"),
                limit: term_budget,
            });
        }
        Ok(())
    })?;
    Ok(acc)
}

fn for_each_subset(n: u32, k: u32, mut f: impl FnMut(&[u32]) -> Result<()>) -> Result<()> {
    fn go(start: u32, n: u32, k: u32, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32]) -> Result<()>) -> Result<()> {
        if cur.len() == k as usize {
            return f(cur);
        }
        for j in start..n {
            cur.push(j);
            go(j + 1, n, k, cur, f)?;
            cur.pop();
        }
        Ok(())
    }
    go(0, n, k, &mut Vec::new(), &mut f)
}

pub(crate) fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    (0..k).fold(1u64, |acc, j| acc * (n as u64 - j) / (j + 1))
}

/// Options for the conversion into elementary classes.
#[derive(Clone, Copy, Debug)]
pub struct Symmetrize {
    /// Drop everything above this degree. The result is then exact up to it.
    pub max_degree: Option<u32>,
    /// Ceiling on intermediate term counts.
    pub term_budget: usize,
    /// Additionally check invariance under a generating set of permutations
    /// of the roots before converting.
    pub strict: bool,
}

impl Default for Symmetrize {
    fn default() -> Self {
        Symmetrize {
            max_degree: None,
            term_budget: DEFAULT_TERM_BUDGET,
            strict: false,
        }
    }
}

impl Symmetrize {
    fn keep(&self, m: Monomial) -> bool {
        self.max_degree.is_none_or(|d| m.degree() <= d)
    }

    fn check_budget(&self, p: &Polynomial, what: &str) -> Result<()> {
        if p.len() > self.term_budget {
            Err(Error::BudgetExceeded {
                what: what.to_string(),
                limit: self.term_budget,
            })
        } else {
            Ok(())
        }
    }
}

/// Rewrites a symmetric polynomial in the roots as a polynomial in the
/// elementary classes `w_1..w_n`.
///
/// Fails with [`Error::NotSymmetric`] when the input is not symmetric, naming
/// the part that could not be absorbed.
pub fn to_elementary(p: &Polynomial, opts: &Symmetrize) -> Result<Polynomial> {
    let roots = p.ring();
    let n = roots.len() as u32;
    if roots.degrees().iter().any(|d| *d != 1) {
        return Err(Error::Unsupported(format!(
            "{} is not a ring of degree-one roots",
            roots.name()
        )));
    }
    let p = match opts.max_degree {
        Some(d) => p.truncate(d),
        None => p.clone(),
    };
    if opts.strict {
        check_invariance(&p)?;
    }
    to_elementary_rec(&p, n, opts)
}

/// Invariance under the transposition of the first two roots and the cycle
/// of all roots, which generate the symmetric group.
fn check_invariance(p: &Polynomial) -> Result<()> {
    let roots = p.ring();
    let n = roots.len();
    if n < 2 {
        return Ok(());
    }
    let permute = |perm: &dyn Fn(usize) -> usize| {
        p.map_monomials(roots, |e| Some((0..n).map(|i| (perm(i), e[i])).collect()))
    };
    for image in [permute(&|i| if i < 2 { 1 - i } else { i })?, permute(&|i| (i + 1) % n)?] {
        let diff = image.add(p)?;
        if !diff.is_zero() {
            return Err(Error::NotSymmetric {
                residue: diff.to_string(),
            });
        }
    }
    Ok(())
}

fn to_elementary_rec(p: &Polynomial, n: u32, opts: &Symmetrize) -> Result<Polynomial> {
    let target = sw_ring(n)?;
    if n == 0 {
        return p.reinterpret(&target);
    }
    // Slice by the exponent of the last root.
    let last = (n - 1) as usize;
    let mut slices: Vec<Vec<Monomial>> = Vec::new();
    for m in p.terms() {
        let k = m.exponent(last) as usize;
        if slices.len() <= k {
            slices.resize(k + 1, Vec::new());
        }
        slices[k].push(m.without(last, 1));
    }
    let lower_roots = root_ring(n - 1)?;
    let split = split_ring(n)?;
    let mut psi = Vec::new();
    for (k, slice) in slices.into_iter().enumerate() {
        if slice.is_empty() {
            continue;
        }
        let piece = Polynomial::from_monomials(&lower_roots, slice);
        let q = to_elementary_rec(&piece, n - 1, opts)?;
        let t_k = split.monomial(&[(last, k as u32)])?;
        psi.push(q.reinterpret(&split)?.mul_monomial(t_k)?.into_terms());
    }
    let psi = Polynomial::from_sorted(&split, crate::poly::sum_all(psi));
    peel(&psi, n, opts)
}

/// Inverts `phi(w) -> phi(v_j + v_{j-1} t)`: given an element of
/// `GF(2)[v_1..v_{n-1}, t]` in the image, returns its preimage in
/// `GF(2)[w_1..w_n]`.
fn peel(psi: &Polynomial, n: u32, opts: &Symmetrize) -> Result<Polynomial> {
    let split = psi.ring().clone();
    let target = sw_ring(n)?;
    let t = (n - 1) as usize;
    if n == 1 {
        // w_1 = t.
        return psi.map_monomials(&target, |e| Some(vec![(0, e[0])]));
    }
    let top_v = (n - 2) as usize;
    let max_m = match opts.max_degree {
        Some(d) => d / n,
        None => psi.max_degree().unwrap_or(0) / n,
    };
    // Coefficients of t^m only see terms of t-degree <= m, so a truncated run
    // may work mod t^(max_m + 1). An untruncated one keeps everything so that
    // non-symmetric input is caught in full.
    let t_cap = if opts.max_degree.is_some() { max_m } else { u32::MAX };
    let keep = |m: Monomial| opts.keep(m) && m.exponent(t) <= t_cap;

    // sigma: w_j -> v_j + v_{j-1} t on generators w_1..w_{n-1}.
    let lower = sw_ring(n - 1)?;
    let mut images = Vec::with_capacity((n - 1) as usize);
    for j in 1..n {
        let mut img = Polynomial::var(&split, (j - 1) as usize);
        let shifted = if j == 1 {
            Polynomial::var(&split, t)
        } else {
            Polynomial::from_monomial(&split, split.monomial(&[((j - 2) as usize, 1), (t, 1)])?)
        };
        img.add_assign(&shifted)?;
        images.push(img);
    }

    let mut rest = psi.filter(keep);
    let mut result: Vec<Vec<Monomial>> = Vec::new();
    for m in 0..=max_m {
        // Every surviving term must carry at least t^m.
        if let Some(bad) = rest.terms().iter().find(|x| x.exponent(t) < m) {
            return Err(not_symmetric(&split, *bad, &rest));
        }
        let divisor = split.monomial(&[(top_v, m), (t, m)])?;
        let mut coeff = Vec::new();
        for x in rest.terms().iter().filter(|x| x.exponent(t) == m) {
            let q = x
                .checked_div(divisor)
                .ok_or_else(|| not_symmetric(&split, *x, &rest))?;
            coeff.push(q);
        }
        if coeff.is_empty() {
            continue;
        }
        // The quotient is t-free and v_j sits where w_j does.
        let phi_m = Polynomial::from_sorted(&lower, coeff);
        let wn_m = target.monomial(&[(t, m)])?;
        result.push(phi_m.reinterpret(&target)?.mul_monomial(wn_m)?.into_terms());
        let lifted = phi_m.substitute(&split, &images, |x| {
            keep(x) && x.degree() + m * n <= opts.max_degree.unwrap_or(u32::MAX) && x.exponent(t) + m <= t_cap
        })?;
        let shifted = lifted.mul_monomial(divisor)?;
        rest.add_assign(&shifted)?;
        opts.check_budget(&rest, "the peeling remainder")?;
    }
    if !rest.is_zero() {
        return Err(not_symmetric(&split, rest.leading_monomial().unwrap(), &rest));
    }
    Ok(Polynomial::from_sorted(&target, crate::poly::sum_all(result)))
}

fn not_symmetric(split: &Arc<Ring>, m: Monomial, rest: &Polynomial) -> Error {
    let shown: Vec<String> = rest.terms().iter().take(8).map(|x| split.format_monomial(*x)).collect();
    Error::NotSymmetric {
        residue: format!(
            "{} (at {}{})",
            shown.join(" + "),
            split.format_monomial(m),
            if rest.len() > 8 { ", truncated" } else { "" }
        ),
    }
}

/// Cache of exterior-power classes for one truncation degree.
pub struct ExteriorClasses {
    opts: Symmetrize,
    cache: HashMap<(u32, u32), Polynomial>,
}

impl ExteriorClasses {
    pub fn new(opts: Symmetrize) -> ExteriorClasses {
        ExteriorClasses {
            opts,
            cache: HashMap::new(),
        }
    }

    /// `phi^i_n` with `w_j = w_j` of the rank `n` bundle.
    pub fn class(&mut self, n: u32, i: u32) -> Result<Polynomial> {
        if let Some(p) = self.cache.get(&(n, i)) {
            return Ok(p.clone());
        }
        let ring = sw_ring(n)?;
        let out = if i == 0 || i > n || n == 0 {
            Polynomial::one(&ring)
        } else {
            self.induct(n, i)?
        };
        self.cache.insert((n, i), out.clone());
        Ok(out)
    }

    fn induct(&mut self, n: u32, i: u32) -> Result<Polynomial> {
        let split = split_ring(n)?;
        let t = (n - 1) as usize;
        let max_m = match self.opts.max_degree {
            Some(d) => d / n,
            None => u32::MAX,
        };
        let opts = self.opts;
        let keep = move |m: Monomial| opts.keep(m) && m.exponent(t) <= max_m;

        let same = self.class(n - 1, i)?.reinterpret(&split)?;
        let smaller = self.class(n - 1, i - 1)?.reinterpret(&split)?;
        // sum_k (1 + t)^(N - k) c_k
        let big_n = binomial(n - 1, i - 1) as i64;
        let mut factor = Polynomial::zero(&split);
        for (k, ck) in smaller.components() {
            let e = big_n - k as i64;
            if e < 0 {
                continue;
            }
            let mut binom_terms = Vec::new();
            for a in 0..=e.min(max_m as i64) {
                if binom_mod2(e, a) {
                    binom_terms.push(split.monomial(&[(t, a as u32)])?);
                }
            }
            let one_plus_t = Polynomial::from_monomials(&split, binom_terms);
            factor.add_assign(&ck.mul_filtered(&one_plus_t, keep)?)?;
        }
        let psi = same.mul_filtered(&factor, keep)?;
        self.opts.check_budget(&psi, &format!("lambda^{i} on {n} roots"))?;
        peel(&psi, n, &self.opts)
    }
}

/// Total Stiefel-Whitney class of `lambda^i` of the rank `n` universal bundle
/// as a polynomial in `w_1..w_n`.
pub fn exterior_class(n: u32, i: u32, opts: Symmetrize) -> Result<Polynomial> {
    ExteriorClasses::new(opts).class(n, i)
}

/// Total Stiefel-Whitney class of `lambda^2` of the rank `n` bundle.
pub fn lambda2_total(n: u32, opts: Symmetrize) -> Result<Polynomial> {
    exterior_class(n, 2, opts)
}

/// `prod_{j<k} (1 + t_j + t_k)`, the total class of `lambda^2` restricted to
/// the maximal elementary abelian 2-subgroup.
pub fn sw_exterior_restriction(n: u32) -> Result<Polynomial> {
    bh_product(n, 2, DEFAULT_FACTOR_BUDGET, DEFAULT_TERM_BUDGET)
}

/// Mod 2 total Chern class of `lambda^i` of SU(n) in `GF(2)[c_2..c_n]`.
/// `max_degree` is in the Chern grading (`c_j` has degree `2j`).
pub fn chern_exterior(n: u32, i: u32, max_degree: Option<u32>, term_budget: usize) -> Result<Polynomial> {
    let opts = Symmetrize {
        max_degree: max_degree.map(|d| d / 2),
        term_budget,
        strict: false,
    };
    let phi = exterior_class(n, i, opts)?;
    sw_to_chern(&phi, n)
}

/// `w_1 -> 0`, `w_j -> c_j`.
pub fn sw_to_chern(phi: &Polynomial, n: u32) -> Result<Polynomial> {
    let su = su_ring(n)?;
    phi.map_monomials(&su, |e| {
        if e[0] > 0 {
            return None;
        }
        Some((1..e.len()).map(|j| (j - 1, e[j])).collect())
    })
}
