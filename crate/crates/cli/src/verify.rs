//! Golden and property checks behind `swcalc verify`.
//!
//! Every check names the fixture keys it compares against as its anchor.
//! Golden checks run with reference checking switched off inside the
//! pipeline, so a mismatch surfaces here as a term-level diff rather than
//! as an early error.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use swcalc_core::fixtures;
use swcalc_core::poly::Polynomial;
use swcalc_core::presentations::{
    bso_ring, bspin_ring_unchecked, is_groebner_basis, j_generators, kernel_in_degree, make_bspin_ring, u_degree, u_index,
    PresentedRing, RingHom,
};
use swcalc_core::spin::{
    expected_sq_for, indecomposable_component, solve_indeterminate, table_key, variants, AdjointClass, Pipeline,
    SolveSpec, SpinClassTable, Variant,
};
use swcalc_core::steenrod::SteenrodContext;
use swcalc_core::symfunc::{self, Symmetrize};
use swcalc_core::{Error, Ring};

use crate::commands::Globals;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Paper,
    Properties,
    All,
}

/// Why a check failed.
#[derive(Debug)]
pub struct Fail(pub String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(e.to_string())
    }
}

impl From<String> for Fail {
    fn from(s: String) -> Fail {
        Fail(s)
    }
}

type Outcome = Result<String, Fail>;

/// State shared by the checks of one run.
pub struct Context {
    pub pipeline: Pipeline,
    adjoint: Option<AdjointClass>,
}

impl Context {
    pub fn new(g: &Globals) -> Context {
        let mut config = g.config();
        config.check_reference = false;
        let mut pipeline = Pipeline::new(config);
        if g.progress {
            pipeline = pipeline.with_progress(|m| eprintln!("swcalc: {m}"));
        }
        Context {
            pipeline,
            adjoint: None,
        }
    }

    fn table(&mut self, n: u32, v: Variant) -> Result<Arc<SpinClassTable>, Fail> {
        Ok(self.pipeline.table(n, v)?)
    }

    fn adjoint(&mut self) -> Result<&AdjointClass, Fail> {
        if self.adjoint.is_none() {
            self.adjoint = Some(self.pipeline.adjoint_class()?);
        }
        Ok(self.adjoint.as_ref().unwrap())
    }
}

pub struct Check {
    pub id: String,
    /// Fixture keys, or the property definition for property checks.
    pub anchor: String,
    /// Acceptance criterion this check belongs to, 1 to 7.
    pub criterion: u32,
    run: Box<dyn Fn(&mut Context) -> Outcome>,
}

impl Check {
    fn new(id: impl Into<String>, anchor: impl Into<String>, criterion: u32, run: impl Fn(&mut Context) -> Outcome + 'static) -> Check {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            criterion,
            run: Box::new(run),
        }
    }

    pub fn run(&self, ctx: &mut Context) -> CheckResult {
        let start = Instant::now();
        // A panic inside the engine is a failed check, not a crashed run.
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (self.run)(ctx)))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Err(Fail(format!("panicked: {msg}")))
            });
        let seconds = start.elapsed().as_secs_f64();
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(Fail(d)) => (false, d),
        };
        CheckResult {
            id: self.id.clone(),
            anchor: self.anchor.clone(),
            criterion: self.criterion,
            passed,
            detail,
            seconds,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub id: String,
    pub anchor: String,
    pub criterion: u32,
    pub passed: bool,
    /// A short note on success, the diff on failure.
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {} [{}] {:.2}s", c.id, c.anchor, c.seconds));
            if c.passed {
                if !c.detail.is_empty() {
                    out.push_str(&format!(": {}", c.detail));
                }
                out.push('\n');
            } else {
                out.push('\n');
                for line in c.detail.lines() {
                    out.push_str(&format!("    {line}\n"));
                }
            }
        }
        out.push_str(&format!(
            "summary: {} passed, {} failed, {} total\n",
            self.passed(),
            self.failed(),
            self.checks.len()
        ));
        out
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "anchor": c.anchor,
                    "criterion": c.criterion,
                    "status": if c.passed { "pass" } else { "fail" },
                    "detail": if c.passed { Value::from(c.detail.clone()) } else { Value::Null },
                    "diff": if c.passed { Value::Null } else { Value::from(c.detail.clone()) },
                    "seconds": c.seconds,
                })
            })
            .collect();
        json!({
            "checks": checks,
            "summary": {"passed": self.passed(), "failed": self.failed(), "total": self.checks.len()},
        })
    }
}

pub fn checks(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Paper => golden_checks(),
        Suite::Properties => property_checks(),
        Suite::All => {
            let mut all = golden_checks();
            all.extend(property_checks());
            all
        }
    }
}

pub fn run_checks(checks: &[Check], ctx: &mut Context, only: Option<&str>) -> VerifyReport {
    VerifyReport {
        checks: checks
            .iter()
            .filter(|c| only.is_none_or(|id| c.id == id))
            .map(|c| c.run(ctx))
            .collect(),
    }
}

pub fn run_suite(suite: Suite, only: Option<&str>, g: &Globals) -> Result<VerifyReport, CliError> {
    let all = checks(suite);
    if let Some(id) = only {
        if !all.iter().any(|c| c.id == id) {
            let known: Vec<&str> = all.iter().map(|c| c.id.as_str()).collect();
            return Err(CliError::Usage(format!("no check `{id}`; known checks: {}", known.join(", "))));
        }
    }
    let mut ctx = Context::new(g);
    Ok(run_checks(&all, &mut ctx, only))
}

// ---------------------------------------------------------------- helpers

/// Term-set comparison with a diff naming the monomials on each side.
fn compare(what: &str, expected: &Polynomial, computed: &Polynomial) -> Result<(), Fail> {
    if expected == computed {
        return Ok(());
    }
    let ring = computed.ring();
    let e: BTreeSet<_> = expected.terms().iter().copied().collect();
    let c: BTreeSet<_> = computed.terms().iter().copied().collect();
    let show = |s: Vec<_>| {
        let v: Vec<String> = s.into_iter().rev().map(|m| ring.format_monomial(m)).collect();
        if v.is_empty() {
            "(none)".to_string()
        } else {
            v.join(" + ")
        }
    };
    Err(Fail(format!(
        "{what} differs\nonly in reference: {}\nonly in computed: {}",
        show(e.difference(&c).copied().collect()),
        show(c.difference(&e).copied().collect())
    )))
}

fn fixture(ring: &PresentedRing, key: &str) -> Result<Polynomial, Fail> {
    Ok(ring.parse(fixtures::text(key)?)?)
}

fn compare_fixture(ring: &PresentedRing, key: &str, computed: &Polynomial) -> Result<(), Fail> {
    compare(key, &fixture(ring, key)?, computed)
}

fn bits(v: &[bool]) -> String {
    let s: Vec<&str> = v.iter().map(|b| if *b { "1" } else { "0" }).collect();
    format!("({})", s.join(","))
}

/// `1 + w + sum_j Sq^j w + top`.
fn sq_decomposition(ctx: &SteenrodContext, w: &Polynomial, js: &[u32], top: &Polynomial) -> Result<Polynomial, Fail> {
    let mut acc = &Polynomial::one(w.ring()) + w;
    for &j in js {
        acc.add_assign(&ctx.sq(j, w)?)?;
    }
    acc.add_assign(top)?;
    Ok(ctx.ring().normal_form(&acc)?)
}

fn relation_keys(n: u32) -> Vec<String> {
    (1..).map(|k| format!("bspin{n}.relation{k}")).take_while(|k| fixtures::has(k)).collect()
}

// ------------------------------------------------------------ golden data

pub fn golden_checks() -> Vec<Check> {
    let mut out = Vec::new();

    // Presentations.
    for n in 3..=15u32 {
        let rels = relation_keys(n);
        let anchor = match rels.len() {
            0 => format!("bspin{n}.generators"),
            1 => format!("bspin{n}.generators, {}", rels[0]),
            k => format!("bspin{n}.generators, bspin{n}.relation1..{k}"),
        };
        out.push(Check::new(format!("groebner-n{n}"), anchor, 1, move |_| {
            let ring = bspin_ring_unchecked(n)?;
            let expected_gens = fixtures::names(&format!("bspin{n}.generators"))?;
            let gens = ring.generator_names();
            if gens != expected_gens {
                return Err(Fail(format!(
                    "generators differ\nreference: {}\ncomputed: {}",
                    expected_gens.join(", "),
                    gens.join(", ")
                )));
            }
            let got = ring.relations();
            let keys = relation_keys(n);
            if got.len() != keys.len() {
                let shown: Vec<String> = got.iter().map(|r| r.to_string()).collect();
                return Err(Fail(format!(
                    "{} relations computed, {} in the reference\ncomputed: {}",
                    got.len(),
                    keys.len(),
                    shown.join("; ")
                )));
            }
            for (key, rel) in keys.iter().zip(&got) {
                let expected = fixtures::polynomial(ring.ring(), key)?;
                compare(key, &expected, rel)?;
                // Byte-identical canonical text, not just equal term sets.
                if rel.to_string() != expected.to_string() {
                    return Err(Fail(format!("{key}: canonical text differs")));
                }
            }
            Ok(format!("{} relations", got.len()))
        }));
    }

    // lambda^2.
    for n in 3..=9u32 {
        let key = format!("exterior2.spin{n}.total");
        out.push(Check::new(format!("lambda2-n{n}"), key.clone(), 2, move |ctx| {
            let lc = ctx.pipeline.lambda_classes(n, None)?;
            let ring = make_bspin_ring(n)?;
            compare_fixture(&ring, &key, &lc.lambda2)?;
            Ok(String::new())
        }));
    }
    out.push(Check::new(
        "lambda2-n15",
        "exterior2.spin15.w1, w2, w4, w8, w16, w32, w64",
        2,
        |ctx| {
            let lc = ctx.pipeline.lambda_classes(15, Some(64))?;
            let ring = make_bspin_ring(15)?;
            for i in 0..=6 {
                let d = 1u32 << i;
                compare_fixture(&ring, &format!("exterior2.spin15.w{d}"), &lc.lambda2.component(d))?;
            }
            Ok(format!("w_64 has {} terms", lc.lambda2.component(64).len()))
        },
    ));

    // Exterior powers of SU(m).
    let exterior = |m: u32, powers: &'static [(u32, u32)]| {
        let anchor: Vec<String> = powers.iter().map(|(_, k)| format!("su{m}.exterior{k}")).collect();
        Check::new(format!("exterior-su{m}"), anchor.join(", "), 3, move |ctx| {
            let ring = swcalc_core::presentations::bsu_ring(m)?;
            for &(i, k) in powers {
                let c = ctx.pipeline.exterior_chern(m, i)?;
                compare(&format!("c(lambda^{i}) against su{m}.exterior{k}"), &fixture(&ring, &format!("su{m}.exterior{k}"))?, &c)?;
            }
            Ok(String::new())
        })
    };
    out.push(exterior(5, &[(2, 2), (4, 4)]));
    // lambda^4 and lambda^5 of SU(6) are dual to lambda^2 and lambda^1.
    out.push(exterior(6, &[(1, 1), (2, 2), (3, 3), (4, 2), (5, 1)]));
    out.push(exterior(7, &[(2, 2), (4, 4), (6, 6)]));
    out.push(Check::new("su7-sum-c32", "su7.spin14plus.c32", 3, |ctx| {
        let ring = swcalc_core::presentations::bsu_ring(7)?;
        let mut acc = Polynomial::one(ring.ring());
        for i in [2, 4, 6] {
            acc = acc.mul_truncated(&ctx.pipeline.exterior_chern(7, i)?, 64)?;
        }
        compare_fixture(&ring, "su7.spin14plus.c32", &acc.component(64))?;
        Ok(String::new())
    }));

    // Spin representations.
    for n in 3..=8u32 {
        for &v in variants(n) {
            let key = format!("{}.total", table_key(n, v));
            out.push(Check::new(format!("seed-{}", table_key(n, v)), key.clone(), 4, move |ctx| {
                let t = ctx.table(n, v)?;
                compare_fixture(t.ring(), &key, &t.total()?)?;
                Ok(String::new())
            }));
        }
    }
    let total_check = |id: &str, n: u32, v: Variant| {
        let key = format!("{}.total", table_key(n, v));
        Check::new(id, key.clone(), 4, move |ctx| {
            let t = ctx.table(n, v)?;
            compare_fixture(t.ring(), &key, &t.total()?)?;
            Ok(String::new())
        })
    };
    let class_check = |id: &str, n: u32, v: Variant, d: u32| {
        let key = format!("{}.w{d}", table_key(n, v));
        Check::new(id, key.clone(), 4, move |ctx| {
            let t = ctx.table(n, v)?;
            let zero = Polynomial::zero(t.ring().ring());
            compare_fixture(t.ring(), &key, t.class(d).unwrap_or(&zero))?;
            Ok(String::new())
        })
    };
    out.push(total_check("delta9", 9, Variant::Full));
    out.push(class_check("delta10plus-w16", 10, Variant::Plus, 16));
    out.push(total_check("delta10plus", 10, Variant::Plus));
    out.push(total_check("delta11", 11, Variant::Full));
    out.push(Check::new("delta11-w32", "spin11.kernel32, spin11.total", 4, |ctx| {
        let t = ctx.table(11, Variant::Full)?;
        let order = fixtures::polynomial_list(t.ring().ring(), "spin11.kernel32")?;
        let report = t.solve_at(32).ok_or_else(|| Fail("no solve recorded for w_32".into()))?;
        let coeffs = report
            .coefficients_in(&order)
            .ok_or_else(|| Fail("solver unknowns are not the reference kernel basis".into()))?;
        let expected = [true, true, true, true, false];
        if coeffs != expected {
            return Err(Fail(format!("a_1..a_5 = {}, expected {}", bits(&coeffs), bits(&expected))));
        }
        let total = fixture(t.ring(), "spin11.total")?;
        compare("w_32 against spin11.total", &total.component(32), t.class(32).unwrap())?;
        Ok(format!("a_1..a_5 = {}", bits(&coeffs)))
    }));
    out.push(Check::new("delta12plus-w32", "spin12plus.w32, spin12plus.kernel32", 4, |ctx| {
        let t = ctx.table(12, Variant::Plus)?;
        compare_fixture(t.ring(), "spin12plus.w32", t.class(32).unwrap())?;
        let order = fixtures::polynomial_list(t.ring().ring(), "spin12plus.kernel32")?;
        let report = t.solve_at(32).ok_or_else(|| Fail("no solve recorded for w_32".into()))?;
        let coeffs = report
            .coefficients_in(&order)
            .ok_or_else(|| Fail("solver unknowns are not the reference kernel basis".into()))?;
        if coeffs != [true] {
            return Err(Fail(format!("a_1 = {}, expected (1)", bits(&coeffs))));
        }
        Ok("a_1 = 1".into())
    }));
    out.push(Check::new("delta12plus-total", "spin12plus.w32", 4, |ctx| {
        let t = ctx.table(12, Variant::Plus)?;
        let sq = ctx.pipeline.squares(12)?;
        let w32 = fixture(t.ring(), "spin12plus.w32")?;
        let u = Polynomial::var(t.ring().ring(), u_index(12));
        let expected = sq_decomposition(&sq, &w32, &[16, 24, 28], &u)?;
        compare("1 + w_32 + Sq^16 w_32 + Sq^24 w_32 + Sq^28 w_32 + u_64", &expected, &t.total()?)?;
        Ok(String::new())
    }));
    out.push(Check::new("delta12minus-w32", "spin12plus.w32", 4, |ctx| {
        let t = ctx.table(12, Variant::Minus)?;
        compare_fixture(t.ring(), "spin12plus.w32", t.class(32).unwrap())?;
        Ok(String::new())
    }));
    out.push(Check::new("delta12minus-w64", "spin12minus.w64, spin12minus.w64.coset", 4, |ctx| {
        let t = ctx.table(12, Variant::Minus)?;
        let w64 = t.class(64).unwrap().clone();
        compare_fixture(t.ring(), "spin12minus.w64", &w64)?;
        // The shipped coset representative differs from w_64 by a kernel element.
        let report = t.solve_at(64).ok_or_else(|| Fail("no solve recorded for w_64".into()))?;
        let homs = ctx.pipeline.solver_maps(12, Variant::Minus)?;
        let refs: Vec<&RingHom> = homs.iter().map(|h| h.as_ref()).collect();
        let kernel = kernel_in_degree(&refs, 64)?;
        let coset = fixture(t.ring(), "spin12minus.w64.coset")?;
        if kernel.coordinates(&(&coset + &w64)).is_none() {
            return Err(Fail("w_64 is not in the coset of the reference representative".into()));
        }
        Ok(format!("{} unknowns", report.unknowns.len()))
    }));
    out.push(Check::new("delta12minus-total", "spin12plus.w32, spin12minus.w64", 4, |ctx| {
        let t = ctx.table(12, Variant::Minus)?;
        let sq = ctx.pipeline.squares(12)?;
        let w32 = fixture(t.ring(), "spin12plus.w32")?;
        let w64 = fixture(t.ring(), "spin12minus.w64")?;
        let expected = sq_decomposition(&sq, &w32, &[16, 24, 28], &w64)?;
        compare("1 + w_32 + Sq^16 w_32 + Sq^24 w_32 + Sq^28 w_32 + w_64", &expected, &t.total()?)?;
        Ok(String::new())
    }));
    out.push(class_check("delta13-w64", 13, Variant::Full, 64));
    out.push(class_check("delta14plus-w64", 14, Variant::Plus, 64));
    out.push(class_check("delta15-w64", 15, Variant::Full, 64));
    out.push(Check::new("delta15-total", "spin15.w64", 4, |ctx| {
        let t = ctx.table(15, Variant::Full)?;
        let sq = ctx.pipeline.squares(15)?;
        let w64 = fixture(t.ring(), "spin15.w64")?;
        let u = Polynomial::var(t.ring().ring(), u_index(15));
        let expected = sq_decomposition(&sq, &w64, &[32, 48, 56, 60, 62, 63], &u)?;
        compare("1 + w_64 + Sq^32..Sq^63 w_64 + u_128", &expected, &t.total()?)?;
        Ok(String::new())
    }));
    out.push(Check::new("solves-unique", "spin9..spin15 solver reports", 4, |ctx| {
        let mut count = 0;
        for n in 9..=15 {
            for &v in variants(n) {
                let t = ctx.table(n, v)?;
                for r in t.solves() {
                    count += 1;
                    let k = r.unknowns.len();
                    if r.rank != k || r.coefficients.len() != k {
                        return Err(Fail(format!(
                            "w_{}({}) has {k} unknowns but rank {}",
                            r.degree,
                            t.label(),
                            r.rank
                        )));
                    }
                }
            }
        }
        Ok(format!("{count} solves"))
    }));

    // Kernel bases.
    let kernel_check = |id: &str, n: u32, v: Variant, key: &'static str| {
        Check::new(id, key, 5, move |ctx| {
            let homs = ctx.pipeline.solver_maps(n, v)?;
            let refs: Vec<&RingHom> = homs.iter().map(|h| h.as_ref()).collect();
            let kernel = kernel_in_degree(&refs, 32)?;
            let ring = homs[0].source().clone();
            let mut expected = fixtures::polynomial_list(ring.ring(), key)?;
            expected.sort_by_key(|p| std::cmp::Reverse(p.leading_monomial()));
            let leads: Vec<String> = kernel
                .basis
                .iter()
                .map(|b| ring.ring().format_monomial(b.leading_monomial().unwrap()))
                .collect();
            let want: Vec<String> = expected
                .iter()
                .map(|b| ring.ring().format_monomial(b.leading_monomial().unwrap()))
                .collect();
            if leads != want {
                return Err(Fail(format!(
                    "leading monomials differ\nreference: {}\ncomputed: {}",
                    want.join(", "),
                    leads.join(", ")
                )));
            }
            for (e, b) in expected.iter().zip(&kernel.basis) {
                compare(&format!("basis element led by {}", ring.ring().format_monomial(e.leading_monomial().unwrap())), e, b)?;
            }
            Ok(format!("dimension {}: {}", leads.len(), leads.join(", ")))
        })
    };
    out.push(kernel_check("kernel-delta11-32", 11, Variant::Full, "spin11.kernel32"));
    out.push(kernel_check("kernel-delta12plus-32", 12, Variant::Plus, "spin12plus.kernel32"));

    // Adjoint class.
    out.push(Check::new("adjoint-low", "w_1 = w_2 = w_4 = w_8 = 0", 6, |ctx| {
        let adj = ctx.adjoint()?;
        for d in [1, 2, 4, 8] {
            if !adj.components[&d].is_zero() {
                return Err(Fail(format!("w_{d} = {}", adj.components[&d])));
            }
        }
        Ok(String::new())
    }));
    out.push(Check::new("adjoint-w16", "adjoint.w16", 6, |ctx| {
        let ring = make_bspin_ring(15)?;
        let adj = ctx.adjoint()?;
        let y4 = ring.parse("y_4^4")?;
        compare("w_16 against y_4^4", &y4, &adj.components[&16])?;
        compare_fixture(&ring, "adjoint.w16", &adj.components[&16])?;
        Ok(String::new())
    }));
    for d in [32u32, 64] {
        let key = format!("adjoint.w{d}");
        out.push(Check::new(format!("adjoint-w{d}"), key.clone(), 6, move |ctx| {
            let ring = make_bspin_ring(15)?;
            let adj = ctx.adjoint()?;
            compare_fixture(&ring, &key, &adj.components[&d])?;
            Ok(String::new())
        }));
    }
    out.push(Check::new("adjoint-w128", "w_128 product expansion", 6, |ctx| {
        let adj = ctx.adjoint()?;
        compare("w_128 expansion against the direct component", &adj.components[&128], &adj.w128_expansion)?;
        Ok(String::new())
    }));
    out.push(Check::new("adjoint-indecomposable", "indecomposable part of w_128 is u_128", 6, |ctx| {
        let ring = make_bspin_ring(15)?;
        let adj = ctx.adjoint()?;
        let got = indecomposable_component(&ring, &adj.components[&128], 128)?;
        let u = Polynomial::var(ring.ring(), u_index(15));
        compare("indecomposable part", &u, &got)?;
        Ok(String::new())
    }));
    out
}

// ------------------------------------------------------------- properties

const SEED: u64 = 0x5eed_2026;

/// A random element of `ring`, in normal form, with at most `terms` terms
/// of degree at most `max_degree` in the generators other than `u`. The
/// generator `u`, when given, enters with exponent at most one.
fn random_element(rng: &mut ChaCha8Rng, ring: &PresentedRing, max_degree: u32, terms: usize, u: Option<usize>) -> Polynomial {
    let amb = ring.ring();
    let pool: Vec<usize> = ring
        .generators()
        .into_iter()
        .filter(|&i| Some(i) == u || amb.generator_degree(i) <= max_degree)
        .collect();
    let mut out = Polynomial::zero(amb);
    if pool.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(1..=terms) {
        let mut deg = 0;
        let mut pairs: Vec<(usize, u32)> = Vec::new();
        for _ in 0..rng.gen_range(0..=4) {
            let g = pool[rng.gen_range(0..pool.len())];
            if Some(g) == u {
                if pairs.iter().any(|&(i, _)| i == g) {
                    continue;
                }
            } else {
                let gd = amb.generator_degree(g);
                if deg + gd > max_degree {
                    continue;
                }
                deg += gd;
            }
            match pairs.iter_mut().find(|(i, _)| *i == g) {
                Some((_, e)) => *e += 1,
                None => pairs.push((g, 1)),
            }
        }
        out.toggle(amb.monomial(&pairs).expect("small exponents"));
    }
    ring.normal_form(&out).expect("normal form of a ring element")
}

/// `u` of BSpin(n) when it is small enough to square repeatedly.
fn small_u(n: u32) -> Option<usize> {
    (u_degree(n) <= 32).then(|| u_index(n))
}

fn free_ring(ring: &Arc<Ring>) -> Arc<PresentedRing> {
    PresentedRing::free(ring)
}

pub fn property_checks() -> Vec<Check> {
    let mut out = Vec::new();

    out.push(Check::new("gf2-laws", "ring axioms, characteristic 2 and Frobenius", 7, |_| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let ring = free_ring(&bso_ring(8)?);
        for _ in 0..300 {
            let a = random_element(&mut rng, &ring, 12, 5, None);
            let b = random_element(&mut rng, &ring, 12, 5, None);
            let c = random_element(&mut rng, &ring, 12, 5, None);
            let zero = Polynomial::zero(ring.ring());
            let fail = |law: &str| Fail(format!("{law} fails for a = {a}, b = {b}, c = {c}"));
            if &a + &a != zero {
                return Err(fail("a + a = 0"));
            }
            if &(&a + &b) + &c != &a + &(&b + &c) || &a + &b != &b + &a {
                return Err(fail("additive associativity and commutativity"));
            }
            if &(&a * &b) * &c != &a * &(&b * &c) || &a * &b != &b * &a {
                return Err(fail("multiplicative associativity and commutativity"));
            }
            if &a * &(&b + &c) != &(&a * &b) + &(&a * &c) {
                return Err(fail("distributivity"));
            }
            let s = &a + &b;
            if s.square()? != &a.square()? + &b.square()? || a.square()? != &a * &a {
                return Err(fail("Frobenius"));
            }
            if a.square()?.sqrt().as_ref() != Some(&a) {
                return Err(fail("square root of a square"));
            }
        }
        Ok("300 triples".into())
    }));

    out.push(Check::new("order-multiplicative", "lead(ab) = lead(a) lead(b); order respects products", 7, |_| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
        let ring = free_ring(&bso_ring(10)?);
        for _ in 0..500 {
            let a = random_element(&mut rng, &ring, 14, 6, None);
            let b = random_element(&mut rng, &ring, 14, 6, None);
            let c = random_element(&mut rng, &ring, 14, 1, None);
            let (Some(la), Some(lb)) = (a.leading_monomial(), b.leading_monomial()) else {
                continue;
            };
            let lead = (&a * &b).leading_monomial();
            if lead != la.checked_mul(lb) {
                return Err(Fail(format!("lead({a} * {b}) is not the product of leads")));
            }
            if let Some(m) = c.leading_monomial() {
                let (x, y) = (la.checked_mul(m).unwrap(), lb.checked_mul(m).unwrap());
                if (la.order_key() < lb.order_key()) != (x.order_key() < y.order_key()) && la != lb {
                    return Err(Fail(format!("order is not compatible with multiplication by {c}")));
                }
            }
        }
        Ok("500 pairs".into())
    }));

    out.push(Check::new("normal-form", "nf idempotent and linear on BSpin(3..15)", 7, |_| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
        for n in 3..=15u32 {
            let ring = make_bspin_ring(n)?;
            let amb = free_ring(ring.ring());
            for _ in 0..60 {
                // Ambient elements, not yet reduced.
                let p = random_element(&mut rng, &amb, 24, 6, None);
                let q = random_element(&mut rng, &amb, 24, 6, None);
                let np = ring.normal_form(&p)?;
                if ring.normal_form(&np)? != np {
                    return Err(Fail(format!("nf is not idempotent on {p} in {}", ring.name())));
                }
                if ring.normal_form(&(&p + &q))? != &np + &ring.normal_form(&q)? {
                    return Err(Fail(format!("nf is not linear on {p}, {q} in {}", ring.name())));
                }
                if np.terms().iter().any(|m| !ring.is_normal_monomial(*m)) {
                    return Err(Fail(format!("nf({p}) has a reducible term")));
                }
            }
        }
        Ok(String::new())
    }));

    out.push(Check::new("s-polynomials", "every S-polynomial of the basis reduces to zero, BSpin(3..15)", 7, |_| {
        for n in 3..=15u32 {
            let ring = make_bspin_ring(n)?;
            if !is_groebner_basis(ring.basis())? {
                return Err(Fail(format!("basis of {} is not a Groebner basis", ring.name())));
            }
        }
        Ok(String::new())
    }));

    for n in 3..=15u32 {
        out.push(Check::new(format!("cartan-n{n}"), "Sq(ab) = Sq(a) Sq(b), 1000 random pairs", 7, move |ctx| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + 100 + n as u64);
            let sq = ctx.pipeline.squares(n)?;
            let ring = sq.ring().clone();
            for _ in 0..1000 {
                let a = random_element(&mut rng, &ring, 10, 3, small_u(n));
                let b = random_element(&mut rng, &ring, 10, 3, small_u(n));
                let ab = ring.normal_form(&(&a * &b))?;
                let lhs = sq.total_sq(&ab)?;
                let rhs = ring.normal_form(&(&sq.total_sq(&a)? * &sq.total_sq(&b)?))?;
                if lhs != rhs {
                    compare(&format!("Sq(({a}) * ({b}))"), &rhs, &lhs)?;
                }
            }
            Ok(String::new())
        }));
    }

    out.push(Check::new("sq1-sq1", "Sq^1 Sq^1 = 0 on BSpin(3..15)", 7, |ctx| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
        for n in 3..=15u32 {
            let sq = ctx.pipeline.squares(n)?;
            for _ in 0..100 {
                let p = random_element(&mut rng, sq.ring(), 20, 4, small_u(n));
                let Some(d) = p.max_degree() else { continue };
                let p = p.component(d);
                let twice = sq.sq(1, &sq.sq(1, &p)?)?;
                if !twice.is_zero() {
                    return Err(Fail(format!("Sq^1 Sq^1 ({p}) = {twice} in BSpin({n})")));
                }
            }
        }
        Ok(String::new())
    }));

    out.push(Check::new("instability", "Sq^0 = id, Sq^d x = x^2 and Sq^j x = 0 for j > d = deg x", 7, |ctx| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
        for n in 3..=15u32 {
            let sq = ctx.pipeline.squares(n)?;
            let ring = sq.ring().clone();
            for _ in 0..60 {
                let p = random_element(&mut rng, &ring, 16, 4, small_u(n));
                let Some(d) = p.max_degree() else { continue };
                let x = p.component(d);
                if sq.sq(0, &x)? != x {
                    return Err(Fail(format!("Sq^0 ({x}) differs in BSpin({n})")));
                }
                if sq.sq(d, &x)? != ring.normal_form(&x.square()?)? {
                    return Err(Fail(format!("Sq^{d} ({x}) is not its square in BSpin({n})")));
                }
                for j in [d + 1, d + 2, 2 * d + 1] {
                    if !sq.sq(j, &x)?.is_zero() {
                        return Err(Fail(format!("Sq^{j} ({x}) is nonzero in BSpin({n})")));
                    }
                }
            }
        }
        Ok(String::new())
    }));

    out.push(Check::new("j-closure", "Sq^(2^k) of every generator of J lies in J, n = 3..15", 7, |_| {
        for n in 3..=15u32 {
            let gens = j_generators(n)?;
            let ring = gens[0].ring().clone();
            let sq = SteenrodContext::bso(&free_ring(&ring), n)?;
            let quotient = PresentedRing::quotient("J", &ring, &gens)?;
            for g in &gens {
                let d = g.max_degree().unwrap_or(0);
                // The Sq^(2^k) generate the Steenrod algebra.
                for j in (0..).map(|k| 1u32 << k).take_while(|&j| j <= d) {
                    let image = quotient.normal_form(&sq.sq(j, g)?)?;
                    if !image.is_zero() {
                        return Err(Fail(format!("Sq^{j} ({g}) leaves J in BSO({n}): remainder {image}")));
                    }
                }
            }
        }
        Ok(String::new())
    }));

    out.push(Check::new(
        "symmetrization",
        "symmetric polynomials in the roots round-trip to elementary classes, n <= 5, degree <= 12",
        7,
        |_| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
            let mut count = 0;
            for n in 1..=5u32 {
                let roots = symfunc::root_ring(n)?;
                let sw = free_ring(&symfunc::sw_ring(n)?);
                let oracle = LeadingTermOracle::new(&roots, sw.ring());
                for _ in 0..40 {
                    let q = random_element(&mut rng, &sw, 12, 4, None);
                    let f = oracle.evaluate(&q)?;
                    let core = symfunc::to_elementary(&f, &Symmetrize::default())?;
                    let brute = oracle.expand(&f)?;
                    if core != q || brute != q {
                        return Err(Fail(format!(
                            "{f}: expected {q}, engine gave {core}, oracle gave {brute}"
                        )));
                    }
                    count += 1;
                }
                // A non-symmetric input must be rejected.
                if n >= 2 {
                    let t1 = Polynomial::var(&roots, 0);
                    if symfunc::to_elementary(&t1, &Symmetrize::default()).is_ok() {
                        return Err(Fail(format!("t_1 accepted as symmetric for n = {n}")));
                    }
                }
            }
            Ok(format!("{count} polynomials"))
        },
    ));

    out.push(Check::new(
        "preimage-perturbation",
        "solutions unchanged when a kernel element is added to the particular part",
        7,
        |ctx| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
            let mut count = 0;
            for (n, v) in [(11, Variant::Full), (12, Variant::Plus), (12, Variant::Minus), (13, Variant::Full)] {
                let t = ctx.table(n, v)?;
                let sq = ctx.pipeline.squares(n)?;
                for r in t.solves() {
                    if r.unknowns.is_empty() || r.constraints.is_empty() {
                        continue;
                    }
                    let constraints = r
                        .constraints
                        .iter()
                        .map(|&j| Ok((j, expected_sq_for(&t, r.degree, j)?)))
                        .collect::<Result<Vec<_>, Error>>()?;
                    for _ in 0..3 {
                        let mut particular = r.particular.clone();
                        let mut touched = false;
                        for u in &r.unknowns {
                            if rng.gen_bool(0.5) {
                                particular.add_assign(u)?;
                                touched = true;
                            }
                        }
                        if !touched {
                            particular.add_assign(&r.unknowns[0])?;
                        }
                        let spec = SolveSpec {
                            ring: t.ring().clone(),
                            degree: r.degree,
                            particular,
                            unknowns: r.unknowns.clone(),
                            constraints: constraints.clone(),
                        };
                        let sol = solve_indeterminate(&spec, &sq)?;
                        compare(&format!("w_{}({}) after perturbation", r.degree, t.label()), t.class(r.degree).unwrap(), &sol.class)?;
                        count += 1;
                    }
                }
            }
            Ok(format!("{count} perturbed solves"))
        },
    ));

    out.push(Check::new("pattern-vanishing", "every spin table vanishes off its degree pattern", 7, |ctx| {
        for n in 3..=15u32 {
            for &v in variants(n) {
                let t = ctx.table(n, v)?;
                if !t.respects_pattern() || !t.is_complete() {
                    return Err(Fail(format!("{} breaks its vanishing pattern", t.label())));
                }
                let total = t.total()?;
                for (d, c) in total.components() {
                    if !c.is_zero() && !t.pattern.contains(d) {
                        return Err(Fail(format!("w_{d}({}) = {c} lies off the pattern", t.label())));
                    }
                }
                if total.max_degree() != Some(t.pattern.top()) {
                    return Err(Fail(format!("{} has top degree {:?}", t.label(), total.max_degree())));
                }
            }
        }
        Ok(String::new())
    }));

    out.push(Check::new("rank-nullity", "source = image + kernel for every solver kernel", 7, |ctx| {
        let mut count = 0;
        for n in 9..=15u32 {
            for &v in variants(n) {
                let t = ctx.table(n, v)?;
                let homs = ctx.pipeline.solver_maps(n, v)?;
                let refs: Vec<&RingHom> = homs.iter().map(|h| h.as_ref()).collect();
                for r in t.solves() {
                    let k = kernel_in_degree(&refs, r.degree)?;
                    if k.source_dimension != k.image_dimension + k.basis.len() {
                        return Err(Fail(format!(
                            "degree {} of {}: {} != {} + {}",
                            r.degree,
                            t.label(),
                            k.source_dimension,
                            k.image_dimension,
                            k.basis.len()
                        )));
                    }
                    if k.source_dimension != t.ring().dimension(r.degree) {
                        return Err(Fail(format!("source dimension of degree {} of {} is off", r.degree, t.label())));
                    }
                    if k.basis != r.unknowns {
                        return Err(Fail(format!("solver unknowns of {} differ from its kernel", t.label())));
                    }
                    count += 1;
                }
            }
        }
        Ok(format!("{count} kernels"))
    }));

    out
}

/// Brute-force conversion into elementary classes: repeatedly strip the
/// lexicographically largest term `t^a` with the product
/// `e_1^(a_1-a_2) ... e_n^(a_n)`. Independent of the engine's algorithm.
struct LeadingTermOracle {
    roots: Arc<Ring>,
    sw: Arc<Ring>,
    elementary: Vec<Polynomial>,
}

impl LeadingTermOracle {
    fn new(roots: &Arc<Ring>, sw: &Arc<Ring>) -> LeadingTermOracle {
        let n = roots.len();
        let mut elementary = vec![Polynomial::one(roots)];
        for k in 1..=n {
            let mut terms = Vec::new();
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize == k {
                    let pairs: Vec<(usize, u32)> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| (i, 1)).collect();
                    terms.push(roots.monomial(&pairs).unwrap());
                }
            }
            elementary.push(Polynomial::from_monomials(roots, terms));
        }
        LeadingTermOracle {
            roots: roots.clone(),
            sw: sw.clone(),
            elementary,
        }
    }

    /// `q(e_1, ..., e_n)` in the roots.
    fn evaluate(&self, q: &Polynomial) -> Result<Polynomial, Fail> {
        let mut out = Polynomial::zero(&self.roots);
        for m in q.terms() {
            let mut term = Polynomial::one(&self.roots);
            for (i, e) in m.support() {
                term = term.mul(&self.elementary[i + 1].pow(e)?)?;
            }
            out.add_assign(&term)?;
        }
        Ok(out)
    }

    fn expand(&self, f: &Polynomial) -> Result<Polynomial, Fail> {
        let n = self.roots.len();
        let mut rest = f.clone();
        let mut out = Polynomial::zero(&self.sw);
        while !rest.is_zero() {
            let lead = rest
                .terms()
                .iter()
                .map(|m| m.exponents(n))
                .max()
                .expect("nonzero");
            if lead.windows(2).any(|w| w[0] < w[1]) {
                return Err(Fail(format!("{f} is not symmetric")));
            }
            let pairs: Vec<(usize, u32)> = (0..n)
                .map(|k| (k, lead[k] - lead.get(k + 1).copied().unwrap_or(0)))
                .filter(|&(_, e)| e > 0)
                .collect();
            let m = self.sw.monomial(&pairs)?;
            let single = Polynomial::from_monomial(&self.sw, m);
            rest.add_assign(&self.evaluate(&single)?)?;
            out.toggle(m);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_inverts_evaluation() {
        let roots = symfunc::root_ring(3).unwrap();
        let sw = symfunc::sw_ring(3).unwrap();
        let oracle = LeadingTermOracle::new(&roots, &sw);
        let q = Polynomial::parse(&sw, "w_1^2*w_3 + w_2^3 + w_1").unwrap();
        let f = oracle.evaluate(&q).unwrap();
        assert_eq!(oracle.expand(&f).unwrap(), q);
        let t = Polynomial::parse(&roots, "t_1").unwrap();
        assert!(oracle.expand(&t).is_err());
    }

    #[test]
    fn diffs_name_both_sides() {
        let ring = bso_ring(4).unwrap();
        let a = Polynomial::parse(&ring, "y_2^2 + y_4").unwrap();
        let b = Polynomial::parse(&ring, "y_4 + y_2*y_3").unwrap();
        let msg = compare("x", &a, &b).unwrap_err().0;
        assert!(msg.contains("only in reference: y_2^2"), "{msg}");
        assert!(msg.contains("only in computed: y_2*y_3"), "{msg}");
        assert!(compare("x", &a, &a).is_ok());
    }

    #[test]
    fn check_ids_are_unique() {
        let all = checks(Suite::All);
        let ids: BTreeSet<&str> = all.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids.len(), all.len());
        assert!(ids.contains("groebner-n13") && ids.contains("delta11-w32"));
        assert!(all.iter().all(|c| (1..=7).contains(&c.criterion) && !c.anchor.is_empty()));
    }
}
