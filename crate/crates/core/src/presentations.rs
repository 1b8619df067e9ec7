//! Quotient rings given by Gröbner bases, the cohomology of BSpin(n), and
//! ring maps between presented rings.

use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::poly::{BitVec, Gf2Matrix, Monomial, Polynomial, Ring};
use crate::steenrod::SteenrodContext;
use crate::symfunc;

/// Division by a list of polynomials with fixed leading monomials.
#[derive(Clone, Debug, Default)]
struct Reducer {
    leads: Vec<Monomial>,
    tails: Vec<Vec<Monomial>>,
    /// Generators equal to zero: leads that are a single variable with no tail.
    killed: Vec<usize>,
}

impl Reducer {
    fn new(basis: &[Polynomial]) -> Reducer {
        let mut r = Reducer::default();
        for g in basis {
            r.push(g);
        }
        r
    }

    fn push(&mut self, g: &Polynomial) {
        let lead = g.leading_monomial().expect("basis elements are nonzero");
        if g.len() == 1 && lead.total_exponent() == 1 {
            self.killed.push(lead.support().next().unwrap().0);
        }
        self.leads.push(lead);
        self.tails.push(g.terms()[1..].to_vec());
    }

    fn reducible(&self, m: Monomial) -> Option<usize> {
        self.leads.iter().position(|l| l.divides(m))
    }

    fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        let ring = p.ring();
        let live = |m: &Monomial| self.killed.iter().all(|&i| m.exponent(i) == 0);
        let start: Vec<Monomial> = p.terms().iter().copied().filter(live).collect();
        if start.iter().all(|m| self.reducible(*m).is_none()) {
            return Ok(Polynomial::from_monomials(ring, start));
        }
        let mut heap: BinaryHeap<Monomial> = start.into();
        let mut out = Vec::new();
        while let Some(m) = heap.pop() {
            let mut odd = true;
            while heap.peek() == Some(&m) {
                heap.pop();
                odd = !odd;
            }
            if !odd {
                continue;
            }
            match self.reducible(m) {
                None => out.push(m),
                Some(k) => {
                    let q = m.checked_div(self.leads[k]).unwrap();
                    for t in &self.tails[k] {
                        let x = q.checked_mul(*t).ok_or_else(|| Error::ExponentOverflow {
                            max: crate::poly::MAX_EXPONENT,
                            context: ring.name().to_string(),
                        })?;
                        if live(&x) {
                            heap.push(x);
                        }
                    }
                }
            }
        }
        Ok(Polynomial::from_monomials(ring, out))
    }
}

/// `(lcm / lead f) f + (lcm / lead g) g`.
fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = lf.lcm(lg, f.ring().degrees());
    let mut s = f.mul_monomial(l.checked_div(lf).unwrap())?;
    s.add_assign(&g.mul_monomial(l.checked_div(lg).unwrap())?)?;
    Ok(s)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// leading monomial ascending.
///
/// Pairs are processed lowest lcm degree first, ties by the monomial order
/// on the lcm, with the coprime-leads and chain criteria.
pub fn buchberger_reduced(gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let ring = first.ring().clone();
    let degrees = ring.degrees().to_vec();
    let mut sorted: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    sorted.sort_by_key(|g| g.leading_monomial());

    let mut basis: Vec<Polynomial> = Vec::new();
    let mut reducer = Reducer::default();
    // (lcm, i, j) with i < j; BTreeSet orders by degree then monomial order.
    let mut pairs: BTreeSet<(u32, Monomial, usize, usize)> = BTreeSet::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();

    let insert = |g: Polynomial,
                      basis: &mut Vec<Polynomial>,
                      reducer: &mut Reducer,
                      pairs: &mut BTreeSet<(u32, Monomial, usize, usize)>| {
        let j = basis.len();
        let lj = g.leading_monomial().unwrap();
        for (i, b) in basis.iter().enumerate() {
            let l = b.leading_monomial().unwrap().lcm(lj, &degrees);
            pairs.insert((l.degree(), l, i, j));
        }
        reducer.push(&g);
        basis.push(g);
    };

    for g in sorted {
        let r = reducer.reduce(&g)?;
        if !r.is_zero() {
            insert(r, &mut basis, &mut reducer, &mut pairs);
        }
    }

    while let Some(pair) = pairs.pop_first() {
        let (_, l, i, j) = pair;
        done.insert((i, j));
        let (li, lj) = (basis[i].leading_monomial().unwrap(), basis[j].leading_monomial().unwrap());
        if li.is_coprime(lj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = reducer.reduce(&s_polynomial(&basis[i], &basis[j])?)?;
        if !s.is_zero() {
            insert(s, &mut basis, &mut reducer, &mut pairs);
        }
    }

    // Minimalise, then reduce every tail by the rest.
    let leads: Vec<Monomial> = basis.iter().map(|g| g.leading_monomial().unwrap()).collect();
    let mut minimal: Vec<Polynomial> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let redundant = leads.iter().enumerate().any(|(o, lo)| {
            o != k && lo.divides(leads[k]) && (lo != &leads[k] || o < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(o, _)| *o != k)
            .map(|(_, g)| g.clone())
            .collect();
        let lead = minimal[k].leading_monomial().unwrap();
        let mut tail = minimal[k].clone();
        tail.toggle(lead);
        let mut g = Reducer::new(&others).reduce(&tail)?;
        g.toggle(lead);
        reduced.push(g);
    }
    reduced.sort_by_key(|g| g.leading_monomial());
    Ok(reduced)
}

/// Every S-polynomial of `basis` reduces to zero.
pub fn is_groebner_basis(basis: &[Polynomial]) -> Result<bool> {
    let r = Reducer::new(basis);
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if !r.reduce(&s_polynomial(&basis[i], &basis[j])?)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A graded quotient `ring / (basis)` with `basis` a reduced Gröbner basis.
///
/// Basis elements that are a single generator eliminate that generator; the
/// remaining generators are the visible ones.
pub struct PresentedRing {
    name: String,
    ring: Arc<Ring>,
    basis: Vec<Polynomial>,
    reducer: Reducer,
}

impl fmt::Debug for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl PresentedRing {
    /// The polynomial ring itself.
    pub fn free(ring: &Arc<Ring>) -> Arc<PresentedRing> {
        Arc::new(PresentedRing {
            name: ring.name().to_string(),
            ring: ring.clone(),
            basis: Vec::new(),
            reducer: Reducer::default(),
        })
    }

    /// Quotient by the ideal generated by `relations`.
    pub fn quotient(name: impl Into<String>, ring: &Arc<Ring>, relations: &[Polynomial]) -> Result<Arc<PresentedRing>> {
        for r in relations {
            if !r.ring().same_as(ring) {
                return Err(Error::RingMismatch {
                    left: r.ring().name().to_string(),
                    right: ring.name().to_string(),
                });
            }
            if !r.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
        }
        let basis = buchberger_reduced(relations)?;
        Ok(Arc::new(PresentedRing {
            name: name.into(),
            ring: ring.clone(),
            reducer: Reducer::new(&basis),
            basis,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The ambient polynomial ring.
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Reduced Gröbner basis, leading monomials ascending.
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    /// Basis elements that do not just eliminate a generator.
    pub fn relations(&self) -> Vec<&Polynomial> {
        self.basis
            .iter()
            .filter(|g| g.leading_monomial().unwrap().total_exponent() > 1)
            .collect()
    }

    /// Indices of generators whose leading monomial is a basis element.
    pub fn eliminated(&self) -> Vec<usize> {
        self.basis
            .iter()
            .filter_map(|g| {
                let l = g.leading_monomial().unwrap();
                (l.total_exponent() == 1).then(|| l.support().next().unwrap().0)
            })
            .collect()
    }

    /// Indices of the generators that survive in the quotient.
    pub fn generators(&self) -> Vec<usize> {
        let gone = self.eliminated();
        (0..self.ring.len()).filter(|i| !gone.contains(i)).collect()
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.generators().into_iter().map(|i| self.ring.generator_name(i)).collect()
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        self.normal_form(&Polynomial::parse(&self.ring, text)?)
    }

    /// Remainder of `p` on division by the basis. Unique because the basis
    /// is a Gröbner basis.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        if !p.ring().same_as(&self.ring) {
            return Err(Error::RingMismatch {
                left: p.ring().name().to_string(),
                right: self.ring.name().to_string(),
            });
        }
        self.reducer.reduce(p)
    }

    pub fn is_normal_monomial(&self, m: Monomial) -> bool {
        self.reducer.reducible(m).is_none()
    }

    /// All normal monomials of degree `d`, descending.
    pub fn degree_basis(&self, d: u32) -> Vec<Monomial> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut pairs = Vec::new();
        self.enumerate(&gens, 0, d, &mut pairs, &mut out);
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    fn enumerate(&self, gens: &[usize], from: usize, left: u32, pairs: &mut Vec<(usize, u32)>, out: &mut Vec<Monomial>) {
        if left == 0 {
            if let Ok(m) = self.ring.monomial(pairs) {
                if self.is_normal_monomial(m) {
                    out.push(m);
                }
            }
            return;
        }
        for k in from..gens.len() {
            let g = gens[k];
            let dg = self.ring.generator_degree(g);
            let mut e = 1;
            while e * dg <= left {
                pairs.push((g, e));
                // Prune early: a reducible prefix stays reducible.
                let m = self.ring.monomial(pairs);
                if matches!(m, Ok(m) if self.is_normal_monomial(m)) {
                    self.enumerate(gens, k + 1, left - e * dg, pairs, out);
                }
                pairs.pop();
                e += 1;
            }
        }
    }

    /// Dimension of the degree `d` part.
    pub fn dimension(&self, d: u32) -> usize {
        self.degree_basis(d).len()
    }

    /// The part of the normal form of `p` that is not a product of two
    /// positive-degree elements: the terms that are a single generator.
    pub fn indecomposable_component(&self, p: &Polynomial) -> Result<Polynomial> {
        Ok(self.normal_form(p)?.filter(|m| m.total_exponent() == 1))
    }

    /// Presentation as a structured document.
    pub fn to_json(&self) -> serde_json::Value {
        let gens: Vec<serde_json::Value> = self
            .generators()
            .into_iter()
            .map(|i| serde_json::json!({"name": self.ring.generator_name(i), "degree": self.ring.generator_degree(i)}))
            .collect();
        let rels: Vec<serde_json::Value> = self
            .relations()
            .into_iter()
            .map(|r| {
                serde_json::json!({
                    "leading": self.ring.format_monomial(r.leading_monomial().unwrap()),
                    "text": r.to_string(),
                    "polynomial": r.to_json(),
                })
            })
            .collect();
        serde_json::json!({"ring": self.name, "generators": gens, "relations": rels})
    }
}

/// `h_n`: the polynomial generator of H*(BSpin(n)) sits in degree `2^h_n`.
pub fn h_n(n: u32) -> u32 {
    match n % 8 {
        0 => (n - 2) / 2,
        1 | 7 => (n - 1) / 2,
        2 | 4 | 6 => n / 2,
        _ => (n + 1) / 2,
    }
}

/// Degree of the generator `u` of H*(BSpin(n)).
pub fn u_degree(n: u32) -> u32 {
    1 << h_n(n)
}

/// `GF(2)[y_2, ..., y_n]`, the cohomology of BSO(n) with `y_i = w_i`.
pub fn bso_ring(n: u32) -> Result<Arc<Ring>> {
    Ring::indexed(format!("BSO({n})"), "y", 2..=n, 1)
}

/// Ambient ring of BSpin(n): `y_2, ..., y_n` at indices `0..n-1`, then `u`.
pub fn bspin_ambient(n: u32) -> Result<Arc<Ring>> {
    let mut gens: Vec<(String, u32)> = (2..=n).map(|i| (format!("y_{i}"), i)).collect();
    let u = u_degree(n);
    gens.push((format!("u_{u}"), u));
    Ring::new(format!("BSpin({n})"), gens)
}

/// Index of `u` in [`bspin_ambient`].
pub fn u_index(n: u32) -> usize {
    (n - 1) as usize
}

/// Index of `y_i` in [`bso_ring`] and [`bspin_ambient`].
pub fn y_index(i: u32) -> usize {
    (i - 2) as usize
}

/// Generators of the ideal `J` of BSO(n): `w_2` and its iterated squares
/// `Sq^(2^k) ... Sq^2 Sq^1 w_2`, `h_n` elements of degrees `2^k + 1`.
pub fn j_generators(n: u32) -> Result<Vec<Polynomial>> {
    if n < 3 {
        return Err(Error::Unsupported(format!("BSpin({n}) needs n >= 3")));
    }
    let bso = PresentedRing::free(&bso_ring(n)?);
    let ctx = SteenrodContext::bso(&bso, n)?;
    let mut out = vec![Polynomial::var(bso.ring(), y_index(2))];
    for k in 0..h_n(n) - 1 {
        let next = ctx.sq(1 << k, out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// H*(BSpin(n)) = H*(BSO(n))/J tensor GF(2)[u], computed from scratch.
pub fn bspin_ring_unchecked(n: u32) -> Result<Arc<PresentedRing>> {
    let ambient = bspin_ambient(n)?;
    let j: Vec<Polynomial> = j_generators(n)?
        .iter()
        .map(|g| g.reinterpret(&ambient))
        .collect::<Result<_>>()?;
    PresentedRing::quotient(format!("BSpin({n})"), &ambient, &j)
}

/// Compares a BSpin(n) presentation with the shipped reference relations
/// and generator list.
pub fn check_bspin_reference(ring: &PresentedRing, n: u32) -> Result<()> {
    let key = format!("bspin{n}.generators");
    if fixtures::has(&key) {
        let expected = fixtures::names(&key)?;
        let got = ring.generator_names();
        if got != expected {
            return Err(Error::ReferenceMismatch {
                what: key,
                expected: expected.join(", "),
                computed: got.join(", "),
            });
        }
    }
    let rels = ring.relations();
    let mut k = 1;
    loop {
        let key = format!("bspin{n}.relation{k}");
        if !fixtures::has(&key) {
            break;
        }
        let expected = fixtures::polynomial(ring.ring(), &key)?;
        let got = rels.get(k - 1).map(|r| r.to_string()).unwrap_or_else(|| "(missing)".into());
        if got != expected.to_string() {
            return Err(Error::ReferenceMismatch {
                what: key,
                expected: expected.to_string(),
                computed: got,
            });
        }
        k += 1;
    }
    if n <= 15 && rels.len() != k - 1 {
        return Err(Error::ReferenceMismatch {
            what: format!("number of relations of BSpin({n})"),
            expected: (k - 1).to_string(),
            computed: rels.len().to_string(),
        });
    }
    Ok(())
}

/// H*(BSpin(n)), cached per process. For `n <= 15` the result is checked
/// against the reference presentation and a mismatch is an error.
pub fn make_bspin_ring(n: u32) -> Result<Arc<PresentedRing>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<PresentedRing>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return Ok(r.clone());
    }
    let ring = bspin_ring_unchecked(n)?;
    check_bspin_reference(&ring, n)?;
    cache.lock().unwrap().insert(n, ring.clone());
    Ok(ring)
}

/// GF(2)[c_2, ..., c_n] as a presented ring.
pub fn bsu_ring(n: u32) -> Result<Arc<PresentedRing>> {
    Ok(PresentedRing::free(&symfunc::su_ring(n)?))
}

/// A degree-preserving ring map between presented rings, given by the
/// images of the ambient generators of the source.
#[derive(Clone)]
pub struct RingHom {
    name: String,
    source: Arc<PresentedRing>,
    target: Arc<PresentedRing>,
    images: Vec<Polynomial>,
}

impl fmt::Debug for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.source.name(), self.target.name())
    }
}

impl RingHom {
    /// Checks degrees and that every source relation maps to zero.
    pub fn new(
        name: impl Into<String>,
        source: &Arc<PresentedRing>,
        target: &Arc<PresentedRing>,
        images: Vec<Polynomial>,
    ) -> Result<RingHom> {
        let name = name.into();
        if images.len() != source.ring().len() {
            return Err(Error::Unsupported(format!(
                "{name} needs {} images, got {}",
                source.ring().len(),
                images.len()
            )));
        }
        let mut reduced = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            let img = target.normal_form(img)?;
            let d = source.ring().generator_degree(i);
            if img.terms().iter().any(|m| m.degree() != d) {
                return Err(Error::NotWellDefined {
                    name: name.clone(),
                    relation: format!("degree of {}", source.ring().generator_name(i)),
                    image: img.to_string(),
                });
            }
            reduced.push(img);
        }
        let hom = RingHom {
            name,
            source: source.clone(),
            target: target.clone(),
            images: reduced,
        };
        for g in source.basis() {
            let img = hom.apply(g)?;
            if !img.is_zero() {
                return Err(Error::NotWellDefined {
                    name: hom.name.clone(),
                    relation: g.to_string(),
                    image: img.to_string(),
                });
            }
        }
        Ok(hom)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<PresentedRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedRing> {
        &self.target
    }

    pub fn image_of_generator(&self, i: usize) -> &Polynomial {
        &self.images[i]
    }

    /// Normal form of the image of `p`.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        let target = self.target.clone();
        p.substitute_reduced(target.ring(), &self.images, |_| true, &|q| target.normal_form(&q))
    }
}

/// Matrix of the degree `d` part of the direct sum of `homs` against the
/// source degree basis. Rows are (hom, target monomial) pairs.
fn hom_matrix(homs: &[&RingHom], basis: &[Monomial]) -> Result<(Gf2Matrix, Vec<(usize, Monomial)>)> {
    let mut row_index: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut rows: Vec<(usize, Monomial)> = Vec::new();
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(basis.len());
    for &m in basis {
        let mut col = Vec::new();
        for (h, hom) in homs.iter().enumerate() {
            let img = hom.apply(&Polynomial::from_monomial(hom.source.ring(), m))?;
            for &t in img.terms() {
                let next = rows.len();
                let r = *row_index.entry((h, t)).or_insert(next);
                if r == next {
                    rows.push((h, t));
                }
                col.push(r);
            }
        }
        columns.push(col);
    }
    let mut dense: Vec<BitVec> = (0..rows.len()).map(|_| BitVec::zeros(basis.len())).collect();
    for (c, col) in columns.iter().enumerate() {
        for &r in col {
            dense[r].flip(c);
        }
    }
    Ok((Gf2Matrix::from_rows(basis.len(), dense), rows))
}

fn check_common_source(homs: &[&RingHom]) -> Result<Arc<PresentedRing>> {
    let first = homs
        .first()
        .ok_or_else(|| Error::Unsupported("no ring maps given".into()))?;
    for h in homs {
        if !h.source.ring().same_as(first.source.ring()) {
            return Err(Error::RingMismatch {
                left: h.source.name().to_string(),
                right: first.source.name().to_string(),
            });
        }
    }
    Ok(first.source.clone())
}

/// The degree `d` part of the common kernel of `homs`, with the rank data.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub degree: u32,
    /// Reduced echelon basis: distinct leading monomials, and no basis
    /// element contains another's leading monomial.
    pub basis: Vec<Polynomial>,
    pub source_dimension: usize,
    pub image_dimension: usize,
}

impl Kernel {
    /// Coordinates of `p` in the echelon basis, if `p` lies in the span.
    pub fn coordinates(&self, p: &Polynomial) -> Option<Vec<bool>> {
        let mut rest = p.clone();
        let mut coords = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let hit = rest.contains(b.leading_monomial().unwrap());
            if hit {
                rest.add_assign(b).ok()?;
            }
            coords.push(hit);
        }
        rest.is_zero().then_some(coords)
    }

    /// Clears the leading monomials of the basis from `p`.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut rest = p.clone();
        for b in &self.basis {
            if rest.contains(b.leading_monomial().unwrap()) {
                rest.add_assign(b)?;
            }
        }
        Ok(rest)
    }
}

/// Reduced echelon form of a list of homogeneous polynomials of one degree
/// over the descending monomial basis `basis`.
fn echelon(ring: &Arc<Ring>, basis: &[Monomial], vectors: &[BitVec]) -> Vec<Polynomial> {
    let m = Gf2Matrix::from_rows(basis.len(), vectors.to_vec());
    let (r, _) = m.rref();
    r.rows()
        .iter()
        .map(|row| Polynomial::from_monomials(ring, row.ones().map(|c| basis[c])))
        .collect()
}

/// Basis of the degree `d` part of `Ker h_1 ∩ ... ∩ Ker h_k`.
pub fn kernel_in_degree(homs: &[&RingHom], d: u32) -> Result<Kernel> {
    let source = check_common_source(homs)?;
    let basis = source.degree_basis(d);
    let (a, _) = hom_matrix(homs, &basis)?;
    let null = a.null_space();
    let rank = a.rank();
    let kernel = echelon(source.ring(), &basis, &null);
    debug_assert_eq!(kernel.len() + rank, basis.len());
    Ok(Kernel {
        degree: d,
        basis: kernel,
        source_dimension: basis.len(),
        image_dimension: rank,
    })
}

/// One preimage of `targets` (one per hom) in degree `d`, together with the
/// kernel in that degree. The preimage is reduced against the kernel basis,
/// so it does not depend on how it was found.
pub fn preimage_in_degree(homs: &[&RingHom], targets: &[Polynomial], d: u32) -> Result<(Polynomial, Kernel)> {
    let source = check_common_source(homs)?;
    if targets.len() != homs.len() {
        return Err(Error::Unsupported("one target per ring map is needed".into()));
    }
    let basis = source.degree_basis(d);
    let (a, mut rows) = hom_matrix(homs, &basis)?;
    // Extend the row set by target monomials the image never reaches.
    let mut a_rows: Vec<BitVec> = a.rows().to_vec();
    let mut index: HashMap<(usize, Monomial), usize> = rows.iter().enumerate().map(|(k, r)| (*r, k)).collect();
    for (h, t) in targets.iter().enumerate() {
        let t = homs[h].target.normal_form(t)?;
        if t.terms().iter().any(|m| m.degree() != d) {
            return Err(Error::NotHomogeneous);
        }
        for &m in t.terms() {
            if !index.contains_key(&(h, m)) {
                index.insert((h, m), rows.len());
                rows.push((h, m));
                a_rows.push(BitVec::zeros(basis.len()));
            }
        }
    }
    let mut rhs = BitVec::zeros(rows.len());
    for (h, t) in targets.iter().enumerate() {
        for &m in homs[h].target.normal_form(t)?.terms() {
            rhs.flip(index[&(h, m)]);
        }
    }
    let a = Gf2Matrix::from_rows(basis.len(), a_rows);
    let rank = a.rank();
    let kernel = Kernel {
        degree: d,
        basis: echelon(source.ring(), &basis, &a.null_space()),
        source_dimension: basis.len(),
        image_dimension: rank,
    };
    match a.solve(&rhs) {
        Ok(sol) => {
            let p = Polynomial::from_monomials(source.ring(), sol.particular.ones().map(|c| basis[c]));
            Ok((kernel.reduce(&p)?, kernel))
        }
        Err(bad) => {
            let (h, m) = rows[bad.row];
            Err(Error::Inconsistent {
                detail: format!(
                    "no preimage in degree {d}: {} of {} is not reached",
                    homs[h].target.ring().format_monomial(m),
                    homs[h].name
                ),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_values() {
        let table = [(3, 2), (4, 2), (5, 3), (6, 3), (7, 3), (8, 3), (9, 4), (10, 5), (11, 6), (12, 6), (13, 7), (14, 7), (15, 7)];
        for (n, h) in table {
            assert_eq!(h_n(n), h, "h_{n}");
        }
    }

    #[test]
    fn principal_ideal() {
        let r = bso_ring(5).unwrap();
        let g = Polynomial::parse(&r, "y_4").unwrap();
        assert_eq!(buchberger_reduced(&[g.clone()]).unwrap(), vec![g]);
    }

    #[test]
    fn reduced_basis_of_a_small_ideal() {
        let r = Ring::new("R", vec![("x".into(), 1), ("y".into(), 1)]).unwrap();
        let gens = [
            Polynomial::parse(&r, "x^2 + x*y").unwrap(),
            Polynomial::parse(&r, "y^2 + x*y").unwrap(),
        ];
        let gb = buchberger_reduced(&gens).unwrap();
        assert!(is_groebner_basis(&gb).unwrap());
        // x y^2 = x^2 y in the ideal, so the cubes collapse.
        let q = PresentedRing::quotient("Q", &r, &gens).unwrap();
        let a = q.normal_form(&Polynomial::parse(&r, "x^3").unwrap()).unwrap();
        let b = q.normal_form(&Polynomial::parse(&r, "y^3").unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn normal_form_of_zero() {
        let ring = make_bspin_ring(10).unwrap();
        assert!(ring.normal_form(&Polynomial::zero(ring.ring())).unwrap().is_zero());
        assert!(ring.parse("y_7*y_10").unwrap().is_zero());
    }
}
