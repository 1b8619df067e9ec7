//! Stiefel-Whitney classes of the (realified) spin representations of
//! Spin(n) in H*(BSpin(n)), for n <= 15.
//!
//! Classes of small rank are seeded. Larger ones are pulled back from the
//! restrictions to Spin(n-1) and, for even n, to SU(n/2): a preimage of the
//! restricted class is found degree by degree, and the part lying in the
//! kernel of the restriction maps is fixed by Steenrod square identities.
//! Higher classes follow from the lowest one by squaring.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::poly::{BitVec, Gf2Matrix, Polynomial};
use crate::presentations::{
    bsu_ring, make_bspin_ring, preimage_in_degree, u_degree, u_index, y_index, Kernel,
    PresentedRing, RingHom,
};
use crate::steenrod::{expected_sq_of_class, SteenrodContext, VanishingPattern};
use crate::symfunc::{self, Symmetrize};

/// Which spin representation of Spin(n): the full one, or a half-spin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Full,
    Plus,
    Minus,
}

impl Variant {
    /// Key fragment used by the reference tables.
    pub fn suffix(self) -> &'static str {
        match self {
            Variant::Full => "",
            Variant::Plus => "plus",
            Variant::Minus => "minus",
        }
    }

    pub fn parse(s: &str) -> Result<Variant> {
        match s {
            "" | "full" => Ok(Variant::Full),
            "+" | "plus" => Ok(Variant::Plus),
            "-" | "minus" => Ok(Variant::Minus),
            _ => Err(Error::Unsupported(format!("unknown spin variant `{s}`"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "Delta",
            Variant::Plus => "Delta^+",
            Variant::Minus => "Delta^-",
        })
    }
}

/// Variants tracked for Spin(n). Conjugate half-spins of Spin(10) and
/// Spin(14) have equal realified classes, and Spin(6) is tracked as one
/// complex representation.
pub fn variants(n: u32) -> &'static [Variant] {
    match n {
        4 | 8 | 10 | 12 | 14 => &[Variant::Plus, Variant::Minus],
        _ => &[Variant::Full],
    }
}

/// The variant whose top class is the generator `u` of H*(BSpin(n)).
pub fn canonical(n: u32) -> Variant {
    variants(n)[0]
}

pub fn check_variant(n: u32, variant: Variant) -> Result<()> {
    if !(3..=15).contains(&n) {
        return Err(Error::Unsupported(format!("spin classes are available for 3 <= n <= 15, not {n}")));
    }
    if !variants(n).contains(&variant) {
        return Err(Error::Unsupported(format!("Spin({n}) has no representation {variant}")));
    }
    Ok(())
}

pub fn table_key(n: u32, variant: Variant) -> String {
    format!("spin{n}{}", variant.suffix())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Seeded,
    Computed,
    Solving,
}

/// Outcome of one indeterminate-coefficient solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub degree: u32,
    /// Preimage of the restricted class, reduced against the kernel.
    pub particular: Polynomial,
    /// Echelon basis of the kernel of the restriction maps.
    pub unknowns: Vec<Polynomial>,
    /// Coordinates of `class - particular` on `unknowns`.
    pub coefficients: Vec<bool>,
    pub rank: usize,
    /// Square exponents imposed, and the ones that raised the rank.
    pub constraints: Vec<u32>,
    pub contributing: Vec<u32>,
}

impl SolveReport {
    /// Coefficients listed in the order of `order`, which must be a
    /// permutation of the unknowns.
    pub fn coefficients_in(&self, order: &[Polynomial]) -> Option<Vec<bool>> {
        if order.len() != self.unknowns.len() {
            return None;
        }
        order
            .iter()
            .map(|p| self.unknowns.iter().position(|u| u == p).map(|i| self.coefficients[i]))
            .collect()
    }
}

/// Stiefel-Whitney classes of one spin representation, by degree.
#[derive(Clone, Debug)]
pub struct SpinClassTable {
    pub n: u32,
    pub variant: Variant,
    pub pattern: VanishingPattern,
    ring: Arc<PresentedRing>,
    classes: BTreeMap<u32, Polynomial>,
    status: BTreeMap<u32, Status>,
    solves: Vec<SolveReport>,
}

impl SpinClassTable {
    pub fn new(n: u32, variant: Variant, ring: Arc<PresentedRing>) -> SpinClassTable {
        let mut t = SpinClassTable {
            n,
            variant,
            pattern: VanishingPattern::for_rank(n),
            classes: BTreeMap::new(),
            status: BTreeMap::new(),
            solves: Vec::new(),
            ring,
        };
        let one = Polynomial::one(t.ring.ring());
        t.classes.insert(0, one);
        t.status.insert(0, Status::Seeded);
        t
    }

    pub fn label(&self) -> String {
        match self.variant {
            Variant::Full => format!("Delta_{}", self.n),
            Variant::Plus => format!("Delta_{}^+", self.n),
            Variant::Minus => format!("Delta_{}^-", self.n),
        }
    }

    pub fn ring(&self) -> &Arc<PresentedRing> {
        &self.ring
    }

    pub fn class(&self, d: u32) -> Option<&Polynomial> {
        self.classes.get(&d)
    }

    pub fn status(&self, d: u32) -> Option<Status> {
        self.status.get(&d).copied()
    }

    pub fn classes(&self) -> &BTreeMap<u32, Polynomial> {
        &self.classes
    }

    pub fn solves(&self) -> &[SolveReport] {
        &self.solves
    }

    pub fn solve_at(&self, d: u32) -> Option<&SolveReport> {
        self.solves.iter().find(|s| s.degree == d)
    }

    /// Degree of the top class, the real dimension.
    pub fn dimension(&self) -> u32 {
        self.pattern.top()
    }

    /// Stores `w_d`. Classes outside the pattern must vanish.
    pub fn set(&mut self, d: u32, p: Polynomial, status: Status) -> Result<()> {
        let p = self.ring.normal_form(&p)?;
        if p.terms().iter().any(|m| m.degree() != d) {
            return Err(Error::Inconsistent {
                detail: format!("w_{d}({}) is not homogeneous of degree {d}: {p}", self.label()),
            });
        }
        if !self.pattern.contains(d) && d != 0 {
            if p.is_zero() {
                return Ok(());
            }
            return Err(Error::Inconsistent {
                detail: format!("w_{d}({}) = {p} lies outside the vanishing pattern", self.label()),
            });
        }
        self.classes.insert(d, p);
        self.status.insert(d, status);
        Ok(())
    }

    pub fn mark(&mut self, d: u32, status: Status) {
        self.status.insert(d, status);
    }

    pub fn is_complete(&self) -> bool {
        self.pattern.degrees().iter().all(|d| self.classes.contains_key(d))
    }

    pub fn total(&self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.ring.ring());
        for d in self.pattern.degrees() {
            let c = self.classes.get(&d).ok_or_else(|| Error::MissingClass {
                table: self.label(),
                degree: d,
            })?;
            out.add_assign(c)?;
        }
        Ok(out)
    }

    /// The class in the top degree.
    pub fn top(&self) -> Result<&Polynomial> {
        let d = self.dimension();
        self.classes.get(&d).ok_or_else(|| Error::MissingClass {
            table: self.label(),
            degree: d,
        })
    }

    /// Every stored class sits in a pattern degree and is homogeneous.
    pub fn respects_pattern(&self) -> bool {
        self.classes
            .iter()
            .all(|(&d, p)| (d == 0 || self.pattern.contains(d)) && p.terms().iter().all(|m| m.degree() == d))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let classes: serde_json::Map<String, serde_json::Value> = self
            .classes
            .iter()
            .map(|(d, p)| (d.to_string(), serde_json::Value::String(p.to_string())))
            .collect();
        serde_json::json!({
            "ring": self.ring.name(),
            "variant": self.label(),
            "classes": classes,
        })
    }
}

/// One summand of a direct sum of representations.
#[derive(Clone, Debug)]
pub enum Summand {
    Spin(Arc<SpinClassTable>),
    /// A representation given by its total class.
    Class { name: String, dimension: u32, total: Polynomial },
    Trivial,
}

impl Summand {
    fn dimension(&self) -> u32 {
        match self {
            Summand::Spin(t) => t.dimension(),
            Summand::Class { dimension, .. } => *dimension,
            Summand::Trivial => 1,
        }
    }
}

/// A direct sum of representations with classes in one ring.
#[derive(Clone, Debug)]
pub struct RepSum {
    pub ring: Arc<PresentedRing>,
    pub summands: Vec<(Summand, u32)>,
}

impl RepSum {
    pub fn new(ring: &Arc<PresentedRing>) -> RepSum {
        RepSum {
            ring: ring.clone(),
            summands: Vec::new(),
        }
    }

    pub fn with(mut self, summand: Summand, multiplicity: u32) -> RepSum {
        self.summands.push((summand, multiplicity));
        self
    }

    pub fn dimension(&self) -> u32 {
        self.summands.iter().map(|(s, k)| s.dimension() * k).sum()
    }
}

/// Total class of a direct sum: the product of the summands' total classes.
pub fn whitney_sum(rs: &RepSum) -> Result<Polynomial> {
    whitney_sum_truncated(rs, None)
}

/// [`whitney_sum`] with every degree above `max_degree` dropped.
pub fn whitney_sum_truncated(rs: &RepSum, max_degree: Option<u32>) -> Result<Polynomial> {
    let ring = &rs.ring;
    let cut = |p: Polynomial| match max_degree {
        Some(d) => p.truncate(d),
        None => p,
    };
    let mut acc = Polynomial::one(ring.ring());
    for (s, k) in &rs.summands {
        let total = match s {
            Summand::Spin(t) => t.total()?,
            Summand::Class { total, .. } => total.clone(),
            Summand::Trivial => continue,
        };
        if !total.ring().same_as(ring.ring()) {
            return Err(Error::RingMismatch {
                left: total.ring().name().to_string(),
                right: ring.name().to_string(),
            });
        }
        for _ in 0..*k {
            let prod = match max_degree {
                Some(d) => acc.mul_truncated(&total, d)?,
                None => acc.mul(&total)?,
            };
            acc = cut(ring.normal_form(&prod)?);
        }
    }
    Ok(acc)
}

/// Restriction of the realified spin representation `variant` of Spin(n)
/// to Spin(n-1), as (variant, multiplicity) summands. A complex
/// representation whose restriction is a complexification contributes its
/// real form twice.
pub fn restrict_spin(n: u32, variant: Variant) -> Result<Vec<(Variant, u32)>> {
    if !(4..=16).contains(&n) {
        return Err(Error::Unsupported(format!("no restriction rule for Spin({n})")));
    }
    if n <= 15 {
        check_variant(n, variant)?;
    }
    let below = |v: Variant| if variants(n - 1).contains(&v) { v } else { Variant::Full };
    Ok(match n % 8 {
        1 | 3 | 5 => vec![(Variant::Plus, 1), (Variant::Minus, 1)]
            .into_iter()
            .map(|(v, k)| (below(v), k))
            .collect(),
        2 => vec![(Variant::Full, 2)],
        7 => vec![(below(Variant::Plus), 1)],
        _ => vec![(Variant::Full, 1)],
    })
    .map(|mut v: Vec<(Variant, u32)>| {
        // Spin(6) is tracked as a single variant: merge.
        if v.len() == 2 && v[0].0 == v[1].0 {
            v = vec![(v[0].0, 2)];
        }
        v
    })
}

/// Restriction of the spin representation `variant` of Spin(n), n even, to
/// SU(n/2) as a sum of exterior powers `lambda^i` (i = 0 is the trivial
/// representation). Only for the variants whose realification has Stiefel-
/// Whitney classes equal to the Chern classes of the complex
/// representation.
pub fn su_decomposition(n: u32, variant: Variant) -> Result<(u32, Vec<u32>)> {
    if n % 2 != 0 || n % 8 == 0 || !(4..=14).contains(&n) {
        return Err(Error::Unsupported(format!("no SU restriction rule for Spin({n})")));
    }
    check_variant(n, variant)?;
    let m = n / 2;
    let parity = match variant {
        Variant::Minus => 1,
        _ => 0,
    };
    Ok((m, (0..=m).filter(|i| i % 2 == parity).collect()))
}

/// The pulled back class `w_i -> y_i`, `w_1 -> 0`, reduced in BSpin(n).
pub fn sw_to_bspin(phi: &Polynomial, ring: &PresentedRing, n: u32) -> Result<Polynomial> {
    let mapped = phi.map_monomials(ring.ring(), |e| {
        if e.len() != n as usize || e[0] > 0 {
            return None;
        }
        Some((2..=n).map(|i| (y_index(i), e[i as usize - 1])).collect())
    })?;
    ring.normal_form(&mapped)
}

/// `w(lambda^1) = 1 + y_2 + ... + y_n`, reduced.
pub fn lambda1_class(ring: &PresentedRing, n: u32) -> Result<Polynomial> {
    let mut p = Polynomial::one(ring.ring());
    for i in 2..=n {
        p.add_assign(&Polynomial::var(ring.ring(), y_index(i)))?;
    }
    ring.normal_form(&p)
}

/// Checks a computed value against a reference and reports the terms that
/// differ.
pub fn reference_check(what: &str, expected: &Polynomial, computed: &Polynomial) -> Result<()> {
    if expected == computed {
        return Ok(());
    }
    let diff = expected + computed;
    let only_expected = diff.filter(|m| expected.contains(m));
    let only_computed = diff.filter(|m| computed.contains(m));
    Err(Error::ReferenceMismatch {
        what: format!("{what} (only in reference: {only_expected}; only in computed: {only_computed})"),
        expected: expected.to_string(),
        computed: computed.to_string(),
    })
}

/// An instance of the method of indeterminate coefficients: find the class
/// `particular + sum a_i unknowns[i]` with `Sq^j` of it equal to the given
/// value for every constraint `(j, value)`.
#[derive(Clone, Debug)]
pub struct SolveSpec {
    pub ring: Arc<PresentedRing>,
    pub degree: u32,
    pub particular: Polynomial,
    pub unknowns: Vec<Polynomial>,
    pub constraints: Vec<(u32, Polynomial)>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub class: Polynomial,
    pub coefficients: Vec<bool>,
    pub rank: usize,
    /// Constraint exponents that raised the rank, in the given order.
    pub contributing: Vec<u32>,
}

/// Solves a [`SolveSpec`]. The solution must exist and be unique.
pub fn solve_indeterminate(spec: &SolveSpec, ctx: &SteenrodContext) -> Result<Solution> {
    if spec.constraints.is_empty() {
        return Err(Error::Unsupported("no Steenrod constraints given".into()));
    }
    if !ctx.ring().ring().same_as(spec.ring.ring()) {
        return Err(Error::RingMismatch {
            left: ctx.ring().name().to_string(),
            right: spec.ring.name().to_string(),
        });
    }
    let d = spec.degree;
    let homogeneous = |p: &Polynomial, deg: u32| p.terms().iter().all(|m| m.degree() == deg);
    if !homogeneous(&spec.particular, d) || !spec.unknowns.iter().all(|u| homogeneous(u, d)) {
        return Err(Error::NotHomogeneous);
    }
    let mut js: Vec<u32> = spec.constraints.iter().map(|c| c.0).collect();
    js.sort_unstable();
    js.dedup();
    let part_sq = ctx.sq_many(&js, &spec.particular)?;
    let unk_sq: Vec<BTreeMap<u32, Polynomial>> = spec
        .unknowns
        .iter()
        .map(|u| ctx.sq_many(&js, u))
        .collect::<Result<_>>()?;

    let k = spec.unknowns.len();
    let mut rows: Vec<BitVec> = Vec::new();
    let mut rhs: Vec<bool> = Vec::new();
    let mut labels = Vec::new();
    let mut blocks = Vec::new();
    for (j, expected) in &spec.constraints {
        let expected = spec.ring.normal_form(expected)?;
        if !homogeneous(&expected, d + j) {
            return Err(Error::NotHomogeneous);
        }
        let want = &part_sq[j] + &expected;
        let mut monomials = BTreeSet::new();
        monomials.extend(want.terms().iter().copied());
        for s in &unk_sq {
            monomials.extend(s[j].terms().iter().copied());
        }
        let start = rows.len();
        for m in monomials.into_iter().rev() {
            let mut row = BitVec::zeros(k);
            for (i, s) in unk_sq.iter().enumerate() {
                if s[j].contains(m) {
                    row.set(i, true);
                }
            }
            rows.push(row);
            rhs.push(want.contains(m));
            labels.push((*j, m));
        }
        blocks.push((*j, start..rows.len()));
    }
    let a = Gf2Matrix::from_rows(k, rows.clone());
    let sol = a.solve(&BitVec::from_bools(&rhs)).map_err(|bad| {
        let (j, m) = labels[bad.row];
        Error::Inconsistent {
            detail: format!(
                "Sq^{j} of the degree {d} class cannot satisfy its constraint at {}",
                spec.ring.ring().format_monomial(m)
            ),
        }
    })?;
    if !sol.null_space.is_empty() {
        let (_, pivots) = a.rref();
        let free = (0..k)
            .filter(|c| !pivots.contains(c))
            .map(|c| spec.unknowns[c].to_string())
            .collect();
        return Err(Error::Underdetermined { free });
    }
    let mut contributing = Vec::new();
    let mut grown = Gf2Matrix::new(k);
    let mut rank = 0;
    for (j, range) in blocks {
        for r in range {
            grown.push_row(rows[r].clone());
        }
        let next = grown.rank();
        if next > rank {
            contributing.push(j);
            rank = next;
        }
    }
    let coefficients: Vec<bool> = (0..k).map(|i| sol.particular.get(i)).collect();
    let mut class = spec.particular.clone();
    for (i, u) in spec.unknowns.iter().enumerate() {
        if coefficients[i] {
            class.add_assign(u)?;
        }
    }
    Ok(Solution {
        class: spec.ring.normal_form(&class)?,
        coefficients,
        rank,
        contributing,
    })
}

/// The value of `Sq^j w_d` prescribed by the Wu formula in terms of the
/// other classes already in `table`.
pub fn expected_sq_for(table: &SpinClassTable, d: u32, j: u32) -> Result<Polynomial> {
    let zero = Polynomial::zero(table.ring().ring());
    expected_sq_of_class(&table.pattern, &|m| table.class(m).cloned(), &zero, d, j)?.resolve(&table.label())
}

/// Fills the pattern degrees strictly between the lowest class `w_L`
/// (`L = 2^(h-1)`) and the top with `Sq^(d-L) w_L`, then sets the top class
/// to `top`, or to `u` when `top` is `None`. Each step first checks that
/// the Wu formula reduces `Sq^(d-L) w_L` to `w_d` alone.
pub fn total_from_lowest(
    mut table: SpinClassTable,
    ctx: &SteenrodContext,
    top: Option<Polynomial>,
) -> Result<SpinClassTable> {
    let pattern = table.pattern;
    let low = pattern.lowest();
    let w_low = table
        .class(low)
        .cloned()
        .ok_or_else(|| Error::MissingClass {
            table: table.label(),
            degree: low,
        })?;
    let zero = Polynomial::zero(table.ring().ring());
    let middle: Vec<u32> = pattern
        .degrees()
        .into_iter()
        .filter(|&d| d > low && d < pattern.top())
        .collect();
    let js: Vec<u32> = middle.iter().map(|d| d - low).collect();
    let squares = ctx.sq_many(&js, &w_low)?;
    for (&d, &j) in middle.iter().zip(&js) {
        let wu = expected_sq_of_class(&pattern, &|m| table.class(m).cloned(), &zero, low, j)?;
        if !wu.known.is_zero() || wu.unresolved != [(d, 0)] {
            return Err(Error::Inconsistent {
                detail: format!(
                    "the Wu formula for Sq^{j} w_{low}({}) does not isolate w_{d}",
                    table.label()
                ),
            });
        }
        table.set(d, squares[&j].clone(), Status::Computed)?;
        let again = expected_sq_of_class(&pattern, &|m| table.class(m).cloned(), &zero, low, j)?
            .resolve(&table.label())?;
        if again != squares[&j] {
            return Err(Error::Inconsistent {
                detail: format!("Sq^{j} w_{low}({}) does not reproduce w_{d}", table.label()),
            });
        }
    }
    let top_class = match top {
        Some(p) => p,
        None => Polynomial::var(table.ring().ring(), u_index(table.n)),
    };
    table.set(pattern.top(), top_class, Status::Computed)?;
    Ok(table)
}

/// Square exponents used by the solver, per (rank, variant, degree).
fn default_constraints() -> BTreeMap<(u32, Variant, u32), Vec<u32>> {
    use Variant::*;
    [
        ((11, Full, 32), vec![1, 4, 30]),
        ((12, Plus, 32), vec![1]),
        ((12, Minus, 32), vec![1]),
        ((12, Minus, 64), vec![1, 2, 4, 62]),
        ((13, Full, 64), vec![1, 2, 4, 8, 62]),
        ((14, Plus, 64), vec![1, 2, 4]),
        ((15, Full, 64), vec![1, 2, 4, 8]),
    ]
    .into_iter()
    .collect()
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Square exponents `j` imposing the Wu formula on `Sq^j w_D` when
    /// solving for `w_D` of the table `(n, variant)`, keyed `(n, variant, D)`.
    pub constraints: BTreeMap<(u32, Variant, u32), Vec<u32>>,
    /// Compare every value that has a shipped reference.
    pub check_reference: bool,
    pub symmetrize: Symmetrize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            constraints: default_constraints(),
            check_reference: true,
            symmetrize: Symmetrize::default(),
        }
    }
}

/// Total classes of `lambda^1` and `lambda^2` of Spin(n) in BSpin(n).
#[derive(Clone, Debug)]
pub struct LambdaClasses {
    pub n: u32,
    pub lambda1: Polynomial,
    /// Truncated above `max_degree` when set.
    pub lambda2: Polynomial,
    pub max_degree: Option<u32>,
}

/// Classes of `lambda^1 + lambda^2 + Delta_15`, the restriction of the
/// adjoint representation of E8 to Spin(15).
#[derive(Clone, Debug)]
pub struct AdjointClass {
    /// `w_d` for `d <= 64` and `d = 128`, the degrees where the truncated
    /// lambda part gives exact values.
    pub components: BTreeMap<u32, Polynomial>,
    /// `w_128` from the four surviving products
    /// `u_128 + w_112 w_16(L) + w_96 w_32(L) + w_64 w_64(L)`, `L = lambda^1 + lambda^2`.
    pub w128_expansion: Polynomial,
    /// `w_d(lambda^1 + lambda^2)` for `d <= 64`.
    pub lambda: Polynomial,
}

/// Representations of exceptional groups restricted to a spin subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exceptional {
    /// F4 -> SO(26) on Spin(9): `1 + lambda^1 + Delta_9`.
    F4,
    /// E6 -> SU(27) on Spin(10): `1 + Delta_10^+ + lambda^1 (x) C`.
    E6,
    /// E7 -> Sp(28) on Spin(12): `Delta_12^- + lambda^1 (x) H`.
    E7,
}

/// Memoized computation of spin tables and the maps they depend on.
pub struct Pipeline {
    config: PipelineConfig,
    tables: HashMap<(u32, Variant), Arc<SpinClassTable>>,
    restrictions: HashMap<u32, Arc<RingHom>>,
    su_homs: HashMap<u32, Arc<RingHom>>,
    exterior: HashMap<(u32, u32), Polynomial>,
    contexts: HashMap<u32, Arc<SteenrodContext>>,
    progress: Option<fn(&str)>,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline::new(PipelineConfig::default())
    }
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Pipeline {
        Pipeline {
            config,
            tables: HashMap::new(),
            restrictions: HashMap::new(),
            su_homs: HashMap::new(),
            exterior: HashMap::new(),
            contexts: HashMap::new(),
            progress: None,
        }
    }

    /// Reports each step through `f`.
    pub fn with_progress(mut self, f: fn(&str)) -> Pipeline {
        self.progress = Some(f);
        self
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    fn note(&self, msg: &str) {
        if let Some(f) = self.progress {
            f(msg);
        }
    }

    fn check(&self, what: &str, key: &str, ring: &PresentedRing, computed: &Polynomial) -> Result<()> {
        if !self.config.check_reference || !fixtures::has(key) {
            return Ok(());
        }
        let expected = ring.parse(fixtures::text(key)?)?;
        reference_check(&format!("{what} [{key}]"), &expected, computed)
    }

    /// Mod 2 total Chern class of `lambda^i` of SU(m).
    pub fn exterior_chern(&mut self, m: u32, i: u32) -> Result<Polynomial> {
        if let Some(p) = self.exterior.get(&(m, i)) {
            return Ok(p.clone());
        }
        let p = if i == 0 || i >= m {
            Polynomial::one(&symfunc::su_ring(m)?)
        } else {
            self.note(&format!("Chern classes of lambda^{i} of SU({m})"));
            symfunc::chern_exterior(m, i, None, self.config.symmetrize.term_budget)?
        };
        let key = format!("su{m}.exterior{i}");
        let ring = bsu_ring(m)?;
        self.check(&format!("c(lambda^{i}) of SU({m})"), &key, &ring, &p)?;
        self.exterior.insert((m, i), p.clone());
        Ok(p)
    }

    /// Total Chern class of the restriction of `variant` of Spin(n) to
    /// SU(n/2).
    pub fn su_class(&mut self, n: u32, variant: Variant) -> Result<Polynomial> {
        let (m, powers) = su_decomposition(n, variant)?;
        let ring = bsu_ring(m)?;
        let mut acc = Polynomial::one(ring.ring());
        for i in powers {
            acc = acc.mul(&self.exterior_chern(m, i)?)?;
        }
        Ok(acc)
    }

    /// H*(BSpin(n+1)) -> H*(BSpin(n)) induced by the inclusion.
    pub fn restriction_hom(&mut self, n: u32) -> Result<Arc<RingHom>> {
        if let Some(h) = self.restrictions.get(&n) {
            return Ok(h.clone());
        }
        let source = make_bspin_ring(n + 1)?;
        let target = make_bspin_ring(n)?;
        let t = target.ring();
        let mut images = Vec::with_capacity(source.ring().len());
        for i in 2..=n + 1 {
            images.push(if i <= n {
                Polynomial::var(t, y_index(i))
            } else {
                Polynomial::zero(t)
            });
        }
        let sum = self.restricted_sum(n + 1, canonical(n + 1))?;
        images.push(whitney_sum(&sum)?.component(u_degree(n + 1)));
        let hom = Arc::new(RingHom::new(
            format!("{} -> {}", source.name(), target.name()),
            &source,
            &target,
            images,
        )?);
        self.restrictions.insert(n, hom.clone());
        Ok(hom)
    }

    /// H*(BSpin(2m)) -> H*(BSU(m)).
    pub fn su_hom(&mut self, m: u32) -> Result<Arc<RingHom>> {
        if let Some(h) = self.su_homs.get(&m) {
            return Ok(h.clone());
        }
        let n = 2 * m;
        let source = make_bspin_ring(n)?;
        let target = bsu_ring(m)?;
        let t = target.ring();
        let mut images = Vec::with_capacity(source.ring().len());
        for i in 2..=n {
            images.push(if i % 2 == 0 && i >= 4 {
                Polynomial::var(t, (i / 2 - 2) as usize)
            } else {
                Polynomial::zero(t)
            });
        }
        let c = self.su_class(n, canonical(n))?;
        images.push(c.component(u_degree(n)));
        let hom = Arc::new(RingHom::new(
            format!("{} -> {}", source.name(), target.name()),
            &source,
            &target,
            images,
        )?);
        self.su_homs.insert(m, hom.clone());
        Ok(hom)
    }

    /// The restriction of `variant` of Spin(n) to Spin(n-1), resolved.
    pub fn restricted_sum(&mut self, n: u32, variant: Variant) -> Result<RepSum> {
        let ring = make_bspin_ring(n - 1)?;
        let mut sum = RepSum::new(&ring);
        for (v, k) in restrict_spin(n, variant)? {
            sum = sum.with(Summand::Spin(self.table(n - 1, v)?), k);
        }
        if sum.dimension() != VanishingPattern::for_rank(n).top() {
            return Err(Error::Inconsistent {
                detail: format!("restriction of {variant} of Spin({n}) has the wrong dimension"),
            });
        }
        Ok(sum)
    }

    /// Steenrod squares on H*(BSpin(n)), with `u` squared once the
    /// canonical table is known.
    pub fn steenrod(&mut self, n: u32) -> Result<Arc<SteenrodContext>> {
        if let Some(c) = self.contexts.get(&n) {
            return Ok(c.clone());
        }
        let ring = make_bspin_ring(n)?;
        let ctx = SteenrodContext::bspin(&ring, n)?;
        match self.tables.get(&(n, canonical(n))) {
            Some(t) => {
                let ctx = Arc::new(ctx.with_spin_total(t.total()?)?);
                self.contexts.insert(n, ctx.clone());
                Ok(ctx)
            }
            None => Ok(Arc::new(ctx)),
        }
    }

    /// Steenrod squares on all of BSpin(n), `u` included. Computes the
    /// canonical table first if needed.
    pub fn squares(&mut self, n: u32) -> Result<Arc<SteenrodContext>> {
        self.table(n, canonical(n))?;
        self.steenrod(n)
    }

    pub fn table(&mut self, n: u32, variant: Variant) -> Result<Arc<SpinClassTable>> {
        check_variant(n, variant)?;
        if let Some(t) = self.tables.get(&(n, variant)) {
            return Ok(t.clone());
        }
        let table = match (n, variant) {
            (10 | 14, Variant::Minus) => {
                let mut t = (*self.table(n, Variant::Plus)?).clone();
                t.variant = Variant::Minus;
                t
            }
            (3..=8, _) => self.seed(n, variant)?,
            (9, _) => self.pull_back_each_degree(n, variant)?,
            _ => self.solve_table(n, variant)?,
        };
        if !table.respects_pattern() {
            return Err(Error::Inconsistent {
                detail: format!("{} violates its vanishing pattern", table.label()),
            });
        }
        let table = Arc::new(table);
        // Insert before checking restrictions: the maps out of BSpin(n)
        // need the canonical table itself.
        self.tables.insert((n, variant), table.clone());
        if let Err(e) = self.check_table(&table) {
            self.tables.remove(&(n, variant));
            self.contexts.remove(&n);
            return Err(e);
        }
        Ok(table)
    }

    fn seed(&mut self, n: u32, variant: Variant) -> Result<SpinClassTable> {
        let ring = make_bspin_ring(n)?;
        let key = format!("{}.total", table_key(n, variant));
        let total = ring.parse(fixtures::text(&key)?)?;
        let mut t = SpinClassTable::new(n, variant, ring);
        for (d, c) in total.components() {
            if d > 0 {
                t.set(d, c, Status::Seeded)?;
            }
        }
        for d in t.pattern.degrees() {
            if t.class(d).is_none() {
                t.set(d, Polynomial::zero(t.ring().ring()), Status::Seeded)?;
            }
        }
        Ok(t)
    }

    /// Every class is the preimage of the restricted class under an
    /// injective restriction map.
    fn pull_back_each_degree(&mut self, n: u32, variant: Variant) -> Result<SpinClassTable> {
        self.note(&format!("pulling back {variant} of Spin({n})"));
        let ring = make_bspin_ring(n)?;
        let hom = self.restriction_hom(n - 1)?;
        let sum = self.restricted_sum(n, variant)?;
        let product = whitney_sum(&sum)?;
        self.check(
            "Whitney product of the restriction",
            &format!("spin{}.product", n - 1),
            &sum.ring,
            &product,
        )?;
        let mut t = SpinClassTable::new(n, variant, ring);
        for d in 1..=t.pattern.top() {
            let (pre, kernel) = preimage_in_degree(&[&hom], &[product.component(d)], d)?;
            if !kernel.basis.is_empty() {
                return Err(Error::Inconsistent {
                    detail: format!("{} is not injective in degree {d}", hom.name()),
                });
            }
            t.set(d, pre, Status::Computed)?;
        }
        Ok(t)
    }

    /// Restriction maps out of BSpin(n) whose kernel holds the unknowns
    /// when solving for a class of `variant`.
    pub fn solver_maps(&mut self, n: u32, variant: Variant) -> Result<Vec<Arc<RingHom>>> {
        check_variant(n, variant)?;
        if n < 9 {
            return Err(Error::Unsupported(format!("classes of Spin({n}) are seeded, not solved")));
        }
        let mut homs = Vec::new();
        // An isomorphism onto BSU in the lowest degree of Spin(10) suffices.
        if n != 10 {
            homs.push(self.restriction_hom(n - 1)?);
        }
        if let Ok((m, _)) = su_decomposition(n, variant) {
            homs.push(self.su_hom(m)?);
        }
        Ok(homs)
    }

    /// Solver maps with the degree `d` parts of the restricted class.
    fn restriction_data(&mut self, n: u32, variant: Variant, d: u32) -> Result<(Vec<Arc<RingHom>>, Vec<Polynomial>)> {
        let homs = self.solver_maps(n, variant)?;
        let mut targets = Vec::new();
        if n != 10 {
            let sum = self.restricted_sum(n, variant)?;
            targets.push(whitney_sum_truncated(&sum, Some(d))?.component(d));
        }
        if let Ok((m, _)) = su_decomposition(n, variant) {
            let c = self.su_class(n, variant)?.component(d);
            let ring = bsu_ring(m)?;
            self.check(
                &format!("restricted Chern class of {variant} of Spin({n})"),
                &format!("su{m}.{}.c{}", table_key(n, variant), d / 2),
                &ring,
                &c,
            )?;
            targets.push(c);
        }
        Ok((homs, targets))
    }

    /// Finds `w_d` from the restriction maps and, on their kernel, the
    /// Steenrod constraints configured for `(n, variant, d)`.
    fn solve_class(&mut self, table: &mut SpinClassTable, d: u32) -> Result<Polynomial> {
        let (n, variant) = (table.n, table.variant);
        self.note(&format!("solving for w_{d} of {}", table.label()));
        table.mark(d, Status::Solving);
        let (homs, targets) = self.restriction_data(n, variant, d)?;
        let refs: Vec<&RingHom> = homs.iter().map(|h| h.as_ref()).collect();
        let (particular, kernel) = preimage_in_degree(&refs, &targets, d)?;
        let key = table_key(n, variant);
        self.check_kernel(&format!("{key}.kernel{d}"), table.ring(), &kernel)?;
        if n == 10 {
            let target_dim = homs[0].target().dimension(d);
            if !kernel.basis.is_empty() || kernel.source_dimension != target_dim {
                return Err(Error::Inconsistent {
                    detail: format!("{} is not an isomorphism in degree {d}", homs[0].name()),
                });
            }
        }
        let js = self
            .config
            .constraints
            .get(&(n, variant, d))
            .cloned()
            .unwrap_or_default();
        let report_base = |coefficients: Vec<bool>, rank, contributing| SolveReport {
            degree: d,
            particular: particular.clone(),
            unknowns: kernel.basis.clone(),
            coefficients,
            rank,
            constraints: js.clone(),
            contributing,
        };
        let (class, report) = if js.is_empty() {
            if !kernel.basis.is_empty() {
                return Err(Error::Underdetermined {
                    free: kernel.basis.iter().map(|p| p.to_string()).collect(),
                });
            }
            (particular.clone(), report_base(Vec::new(), 0, Vec::new()))
        } else {
            let ctx = self.steenrod(n)?;
            let mut constraints = Vec::new();
            for &j in &js {
                constraints.push((j, expected_sq_for(table, d, j)?));
            }
            let spec = SolveSpec {
                ring: table.ring().clone(),
                degree: d,
                particular: particular.clone(),
                unknowns: kernel.basis.clone(),
                constraints,
            };
            let sol = solve_indeterminate(&spec, &ctx)?;
            let report = report_base(sol.coefficients.clone(), sol.rank, sol.contributing.clone());
            (sol.class, report)
        };
        let coset_key = format!("{key}.w{d}.coset");
        if self.config.check_reference && fixtures::has(&coset_key) {
            let coset = table.ring().parse(fixtures::text(&coset_key)?)?;
            if kernel.coordinates(&(&coset + &class)).is_none() {
                return Err(Error::ReferenceMismatch {
                    what: format!("w_{d}({}) modulo the kernel [{coset_key}]", table.label()),
                    expected: coset.to_string(),
                    computed: class.to_string(),
                });
            }
        }
        table.solves.push(report);
        Ok(class)
    }

    fn check_kernel(&self, key: &str, ring: &PresentedRing, kernel: &Kernel) -> Result<()> {
        if !self.config.check_reference || !fixtures::has(key) {
            return Ok(());
        }
        let mut expected = fixtures::polynomial_list(ring.ring(), key)?;
        let mut got = kernel.basis.clone();
        expected.sort_by_key(|p| std::cmp::Reverse(p.leading_monomial()));
        got.sort_by_key(|p| std::cmp::Reverse(p.leading_monomial()));
        if expected != got {
            let show = |v: &[Polynomial]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
            return Err(Error::ReferenceMismatch {
                what: format!("kernel basis [{key}]"),
                expected: show(&expected),
                computed: show(&got),
            });
        }
        Ok(())
    }

    fn solve_table(&mut self, n: u32, variant: Variant) -> Result<SpinClassTable> {
        let ring = make_bspin_ring(n)?;
        let mut t = SpinClassTable::new(n, variant, ring);
        let low = t.pattern.lowest();
        let w_low = self.solve_class(&mut t, low)?;
        t.set(low, w_low, Status::Computed)?;
        if (n, variant) == (12, Variant::Minus) {
            let plus = self.table(12, Variant::Plus)?;
            if plus.class(low) != t.class(low) {
                return Err(Error::Inconsistent {
                    detail: "w_32 of the two half-spin representations of Spin(12) differ".into(),
                });
            }
        }
        let ctx = self.steenrod(n)?;
        self.note(&format!("squaring w_{low} of {}", t.label()));
        if variant == canonical(n) {
            total_from_lowest(t, &ctx, None)
        } else {
            // The middle classes come first: the top constraint reads them.
            let top = t.pattern.top();
            let mut t = total_from_lowest(t, &ctx, Some(Polynomial::zero(ctx.ring().ring())))?;
            t.classes.remove(&top);
            t.status.remove(&top);
            let w_top = self.solve_class(&mut t, top)?;
            t.set(top, w_top, Status::Computed)?;
            Ok(t)
        }
    }

    /// Reference values of the table and the restriction identities.
    fn check_table(&mut self, t: &Arc<SpinClassTable>) -> Result<()> {
        let (n, variant) = (t.n, t.variant);
        let key = table_key(n, variant);
        let total = t.total()?;
        self.check(&format!("w({})", t.label()), &format!("{key}.total"), t.ring(), &total)?;
        for (&d, c) in t.classes() {
            self.check(&format!("w_{d}({})", t.label()), &format!("{key}.w{d}"), t.ring(), c)?;
        }
        if n >= 4 {
            let hom = self.restriction_hom(n - 1)?;
            let sum = self.restricted_sum(n, variant)?;
            let expected = whitney_sum(&sum)?;
            let got = hom.apply(&total)?;
            reference_check(&format!("restriction of w({}) to Spin({})", t.label(), n - 1), &expected, &got)?;
        }
        if matches!(n, 10 | 12 | 14) {
            let (m, _) = su_decomposition(n, variant)?;
            let hom = self.su_hom(m)?;
            let expected = self.su_class(n, variant)?;
            let got = hom.apply(&total)?;
            reference_check(&format!("restriction of w({}) to SU({m})", t.label()), &expected, &got)?;
        }
        Ok(())
    }

    /// `w(lambda^1)` and `w(lambda^2)` in BSpin(n), the latter truncated
    /// above `max_degree`.
    pub fn lambda_classes(&mut self, n: u32, max_degree: Option<u32>) -> Result<LambdaClasses> {
        let ring = make_bspin_ring(n)?;
        let lambda1 = lambda1_class(&ring, n)?;
        let opts = Symmetrize {
            max_degree,
            ..self.config.symmetrize
        };
        self.note(&format!("symmetrizing lambda^2 of Spin({n})"));
        let phi = symfunc::exterior_class(n, 2, opts)?;
        let lambda2 = sw_to_bspin(&phi, &ring, n)?;
        let dim = n * (n - 1) / 2;
        if max_degree.is_none_or(|m| m >= dim) {
            let key = format!("exterior2.spin{n}.total");
            self.check(&format!("w(lambda^2) of Spin({n})"), &key, &ring, &lambda2)?;
        }
        for d in 1..=max_degree.unwrap_or(dim).min(dim) {
            let key = format!("exterior2.spin{n}.w{d}");
            self.check(&format!("w_{d}(lambda^2) of Spin({n})"), &key, &ring, &lambda2.component(d))?;
        }
        Ok(LambdaClasses {
            n,
            lambda1,
            lambda2,
            max_degree,
        })
    }

    pub fn adjoint_class(&mut self) -> Result<AdjointClass> {
        let n = 15;
        let delta = self.table(n, Variant::Full)?;
        let ring = delta.ring().clone();
        let lc = self.lambda_classes(n, Some(64))?;
        let lambda = ring.normal_form(&lc.lambda1.mul_truncated(&lc.lambda2, 64)?)?;
        // lambda^1 + lambda^2 has dimension 15 + 105 < 128, and w(Delta_15)
        // vanishes strictly between 0 and 64, so degrees above 64 of the
        // lambda part never meet a nonzero spin class in degree <= 128.
        let sum = RepSum::new(&ring)
            .with(Summand::Spin(delta.clone()), 1)
            .with(
                Summand::Class {
                    name: "lambda^1 + lambda^2 (to degree 64)".into(),
                    dimension: 120,
                    total: lambda.clone(),
                },
                1,
            );
        let product = whitney_sum_truncated(&sum, Some(128))?;
        let mut components = BTreeMap::new();
        for d in (1..=64).chain([128]) {
            components.insert(d, product.component(d));
        }
        let w = |d: u32| delta.class(d).cloned().unwrap_or_else(|| Polynomial::zero(ring.ring()));
        let mut expansion = w(128);
        for (a, b) in [(112, 16), (96, 32), (64, 64)] {
            expansion.add_assign(&w(a).mul(&lambda.component(b))?)?;
        }
        let expansion = ring.normal_form(&expansion)?;
        for d in [1, 2, 4, 8] {
            if self.config.check_reference && !components[&d].is_zero() {
                return Err(Error::ReferenceMismatch {
                    what: format!("w_{d} of the adjoint class"),
                    expected: "0".into(),
                    computed: components[&d].to_string(),
                });
            }
        }
        for d in [16, 32, 64] {
            self.check(&format!("w_{d} of the adjoint class"), &format!("adjoint.w{d}"), &ring, &components[&d])?;
        }
        reference_check("w_128 of the adjoint class by expansion", &components[&128], &expansion)?;
        Ok(AdjointClass {
            components,
            w128_expansion: expansion,
            lambda,
        })
    }

    /// Total Stiefel-Whitney class of the underlying real representation of
    /// an exceptional group's representation, restricted to BSpin.
    pub fn exceptional_class(&mut self, which: Exceptional) -> Result<Polynomial> {
        let (n, variant, power) = match which {
            Exceptional::F4 => (9, Variant::Full, 1),
            Exceptional::E6 => (10, Variant::Plus, 2),
            Exceptional::E7 => (12, Variant::Minus, 4),
        };
        let t = self.table(n, variant)?;
        let lambda1 = lambda1_class(t.ring(), n)?;
        let sum = RepSum::new(t.ring())
            .with(Summand::Spin(t.clone()), 1)
            .with(
                Summand::Class {
                    name: "lambda^1".into(),
                    dimension: n,
                    total: lambda1,
                },
                power,
            );
        whitney_sum(&sum)
    }
}

fn default_pipeline() -> &'static Mutex<Pipeline> {
    static P: OnceLock<Mutex<Pipeline>> = OnceLock::new();
    P.get_or_init(|| Mutex::new(Pipeline::default()))
}

/// Runs `f` on the shared pipeline with the default configuration.
pub fn with_default_pipeline<T>(f: impl FnOnce(&mut Pipeline) -> Result<T>) -> Result<T> {
    let mut p = default_pipeline().lock().unwrap_or_else(|e| e.into_inner());
    f(&mut p)
}

/// The table of `variant` of Spin(n), computed through its dependency chain.
pub fn compute_spin_class(n: u32, variant: Variant) -> Result<Arc<SpinClassTable>> {
    with_default_pipeline(|p| p.table(n, variant))
}

pub fn lambda_classes(n: u32, max_degree: Option<u32>) -> Result<LambdaClasses> {
    with_default_pipeline(|p| p.lambda_classes(n, max_degree))
}

pub fn adjoint_class() -> Result<AdjointClass> {
    with_default_pipeline(|p| p.adjoint_class())
}

/// The terms of `p` that are not products of positive-degree elements.
pub fn indecomposable_component(ring: &PresentedRing, p: &Polynomial, d: u32) -> Result<Polynomial> {
    let nf = ring.normal_form(p)?;
    if nf.terms().iter().any(|m| m.degree() != d) {
        return Err(Error::NotHomogeneous);
    }
    ring.indecomposable_component(&nf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restriction_rules() {
        use Variant::*;
        assert_eq!(restrict_spin(9, Full).unwrap(), [(Plus, 1), (Minus, 1)]);
        assert_eq!(restrict_spin(15, Full).unwrap(), [(Plus, 1)]);
        assert_eq!(restrict_spin(12, Plus).unwrap(), [(Full, 1)]);
        assert_eq!(restrict_spin(10, Minus).unwrap(), [(Full, 2)]);
        assert_eq!(restrict_spin(7, Full).unwrap(), [(Full, 1)]);
        assert!(restrict_spin(3, Full).is_err());
        assert!(restrict_spin(9, Plus).is_err());
        assert_eq!(su_decomposition(14, Plus).unwrap(), (7, vec![0, 2, 4, 6]));
        assert_eq!(su_decomposition(12, Minus).unwrap(), (6, vec![1, 3, 5]));
        assert!(su_decomposition(8, Plus).is_err());
    }

    #[test]
    fn trivial_summand_does_not_change_the_class() {
        let t = compute_spin_class(7, Variant::Full).unwrap();
        let a = whitney_sum(&RepSum::new(t.ring()).with(Summand::Spin(t.clone()), 1)).unwrap();
        let b = whitney_sum(
            &RepSum::new(t.ring())
                .with(Summand::Spin(t.clone()), 1)
                .with(Summand::Trivial, 3),
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a, t.ring().parse("1 + y_4 + y_6 + y_7 + u_8").unwrap());
    }

    #[test]
    fn unresolved_summand_is_an_error() {
        let ring = make_bspin_ring(11).unwrap();
        let t = SpinClassTable::new(11, Variant::Full, ring.clone());
        let err = whitney_sum(&RepSum::new(&ring).with(Summand::Spin(Arc::new(t)), 1)).unwrap_err();
        assert!(matches!(err, Error::MissingClass { .. }));
    }

    #[test]
    fn indecomposables() {
        let r = make_bspin_ring(15).unwrap();
        let p = r.parse("y_4^2").unwrap();
        assert!(indecomposable_component(&r, &p, 8).unwrap().is_zero());
        let p = r.parse("y_13 + y_6*y_7").unwrap();
        assert_eq!(indecomposable_component(&r, &p, 13).unwrap().to_string(), "y_13");
        assert!(indecomposable_component(&r, &p, 12).is_err());
    }
}
