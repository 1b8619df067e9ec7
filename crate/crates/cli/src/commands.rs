//! The subcommands, as plain requests that render to a string payload.

use std::sync::Arc;

use serde_json::{json, Value};
use swcalc_core::poly::Polynomial;
use swcalc_core::presentations::{
    bso_ring, kernel_in_degree, make_bspin_ring, u_index, PresentedRing, RingHom,
};
use swcalc_core::spin::{canonical, Exceptional, Pipeline, PipelineConfig, Variant};
use swcalc_core::steenrod::SteenrodContext;
use swcalc_core::symfunc::{self, DEFAULT_TERM_BUDGET};
use swcalc_core::Error;

use crate::cache::Cache;
use crate::verify::{self, Suite};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    fn tag(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Globals {
    pub format: Format,
    pub budget_terms: Option<usize>,
    pub strict_symmetry: bool,
    /// Step messages on stderr.
    pub progress: bool,
}

impl Default for Globals {
    fn default() -> Self {
        Globals {
            format: Format::Text,
            budget_terms: None,
            strict_symmetry: false,
            progress: false,
        }
    }
}

fn report_progress(msg: &str) {
    eprintln!("swcalc: {msg}");
}

impl Globals {
    pub fn config(&self) -> PipelineConfig {
        let mut config = PipelineConfig::default();
        config.symmetrize.term_budget = self.term_budget();
        config.symmetrize.strict = self.strict_symmetry;
        config
    }

    pub fn pipeline(&self) -> Pipeline {
        let p = Pipeline::new(self.config());
        if self.progress {
            p.with_progress(report_progress)
        } else {
            p
        }
    }

    fn term_budget(&self) -> usize {
        self.budget_terms.unwrap_or(DEFAULT_TERM_BUDGET)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwTarget {
    Lambda2,
    Spin,
    Adjoint,
    F4,
    E6,
    E7,
}

impl SwTarget {
    fn tag(self) -> &'static str {
        match self {
            SwTarget::Lambda2 => "lambda2",
            SwTarget::Spin => "spin",
            SwTarget::Adjoint => "adjoint",
            SwTarget::F4 => "f4",
            SwTarget::E6 => "e6",
            SwTarget::E7 => "e7",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqRing {
    BSpin,
    BSO,
}

#[derive(Clone, Debug)]
pub enum Request {
    Ring {
        n: u32,
    },
    Groebner {
        n: u32,
    },
    Sw {
        target: SwTarget,
        n: Option<u32>,
        variant: Option<String>,
        degrees: Vec<u32>,
        total: bool,
    },
    Sq {
        n: u32,
        j: Option<u32>,
        ring: SqRing,
        total: bool,
        poly: String,
    },
    Chern {
        n: u32,
        i: u32,
        degrees: Vec<u32>,
    },
    Kernel {
        n: u32,
        degree: u32,
        variant: Option<String>,
    },
    Verify {
        suite: Suite,
        only: Option<String>,
    },
}

impl Request {
    /// Operation id and parameters for the cache key. `None` for requests
    /// that must always run.
    fn cache_identity(&self, g: &Globals) -> Option<(&'static str, Vec<(&'static str, String)>)> {
        let mut params = vec![("format", g.format.tag().to_string())];
        let op = match self {
            Request::Ring { n } => {
                params.push(("n", n.to_string()));
                "ring"
            }
            Request::Groebner { n } => {
                params.push(("n", n.to_string()));
                "groebner"
            }
            Request::Sw {
                target,
                n,
                variant,
                degrees,
                total,
            } => {
                params.push(("target", target.tag().to_string()));
                params.push(("n", format!("{n:?}")));
                params.push(("variant", format!("{variant:?}")));
                params.push(("degrees", format!("{degrees:?}")));
                params.push(("total", total.to_string()));
                "sw"
            }
            Request::Sq {
                n,
                j,
                ring,
                total,
                poly,
            } => {
                params.push(("n", n.to_string()));
                params.push(("j", format!("{j:?}")));
                params.push(("ring", format!("{ring:?}")));
                params.push(("total", total.to_string()));
                params.push(("poly", poly.clone()));
                "sq"
            }
            Request::Chern { n, i, degrees } => {
                params.push(("n", n.to_string()));
                params.push(("i", i.to_string()));
                params.push(("degrees", format!("{degrees:?}")));
                "chern"
            }
            Request::Kernel { n, degree, variant } => {
                params.push(("n", n.to_string()));
                params.push(("degree", degree.to_string()));
                params.push(("variant", format!("{variant:?}")));
                "kernel"
            }
            Request::Verify { .. } => return None,
        };
        params.push(("budget_terms", g.term_budget().to_string()));
        params.push(("strict_symmetry", g.strict_symmetry.to_string()));
        Some((op, params))
    }
}

/// Runs `req`, consulting `cache` first. Cache trouble is reported on
/// stderr and never changes the result.
pub fn execute(req: &Request, g: &Globals, cache: Option<&Cache>) -> Result<String, CliError> {
    let key = match (cache, req.cache_identity(g)) {
        (Some(_), Some((op, params))) => Some(Cache::key(op, &params)),
        _ => None,
    };
    if let (Some(c), Some(k)) = (cache, &key) {
        if let Some(hit) = c.get(k) {
            return Ok(hit);
        }
    }
    let out = run(req, g)?;
    if let (Some(c), Some(k)) = (cache, &key) {
        if let Err(e) = c.put(k, &out) {
            eprintln!("swcalc: warning: could not write cache entry: {e}");
        }
    }
    Ok(out)
}

/// Runs `req` without the cache.
pub fn run(req: &Request, g: &Globals) -> Result<String, CliError> {
    match req {
        Request::Ring { n } => cmd_ring(*n, g),
        Request::Groebner { n } => cmd_groebner(*n, g),
        Request::Sw {
            target,
            n,
            variant,
            degrees,
            total,
        } => cmd_sw(*target, *n, variant.as_deref(), degrees, *total, g),
        Request::Sq {
            n,
            j,
            ring,
            total,
            poly,
        } => cmd_sq(*n, *j, *ring, *total, poly, g),
        Request::Chern { n, i, degrees } => cmd_chern(*n, *i, degrees, g),
        Request::Kernel { n, degree, variant } => cmd_kernel(*n, *degree, variant.as_deref(), g),
        Request::Verify { suite, only } => {
            let report = verify::run_suite(*suite, only.as_deref(), g)?;
            let out = match g.format {
                Format::Text => report.to_text(),
                Format::Json => pretty(&report.to_json()),
            };
            if report.failed() > 0 {
                return Err(CliError::Verification {
                    failed: report.failed(),
                    report: out,
                });
            }
            Ok(out)
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn check_rank(n: u32) -> Result<(), CliError> {
    if !(3..=15).contains(&n) {
        return Err(CliError::Usage(format!("rank {n} is outside 3..=15")));
    }
    Ok(())
}

fn cmd_ring(n: u32, g: &Globals) -> Result<String, CliError> {
    if n < 3 {
        return Err(CliError::Usage(format!("BSpin({n}) needs n >= 3")));
    }
    let ring = make_bspin_ring(n)?;
    Ok(match g.format {
        Format::Json => pretty(&ring.to_json()),
        Format::Text => {
            let mut out = format!("{}\n", ring.name());
            let gens: Vec<String> = ring
                .generators()
                .into_iter()
                .map(|i| format!("{} ({})", ring.ring().generator_name(i), ring.ring().generator_degree(i)))
                .collect();
            out.push_str(&format!("generators: {}\n", gens.join(", ")));
            let rels = ring.relations();
            if rels.is_empty() {
                out.push_str("relations: none\n");
            } else {
                out.push_str("relations:\n");
                for r in rels {
                    out.push_str(&format!("  {r}\n"));
                }
            }
            out
        }
    })
}

fn cmd_groebner(n: u32, g: &Globals) -> Result<String, CliError> {
    if n < 3 {
        return Err(CliError::Usage(format!("BSpin({n}) needs n >= 3")));
    }
    let ring = make_bspin_ring(n)?;
    Ok(match g.format {
        Format::Json => pretty(&json!({
            "ring": ring.name(),
            "basis": ring.basis().iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        })),
        Format::Text => ring.basis().iter().map(|p| format!("{p}\n")).collect(),
    })
}

fn parse_variant(n: u32, variant: Option<&str>) -> Result<Variant, CliError> {
    match variant {
        None => Ok(canonical(n)),
        Some(s) => Variant::parse(s).map_err(|e| CliError::Usage(e.to_string())),
    }
}

/// Renders selected components, or the whole class when `degrees` is
/// empty. One degree prints the bare component.
fn render_components(
    label: &str,
    class: &Polynomial,
    degrees: &[u32],
    component: &dyn Fn(u32) -> Result<Polynomial, CliError>,
    g: &Globals,
) -> Result<String, CliError> {
    if degrees.is_empty() {
        return Ok(match g.format {
            Format::Text => format!("{}\n", graded_text(class)),
            Format::Json => pretty(&json!({"class": label, "total": class.to_json()})),
        });
    }
    let parts = degrees
        .iter()
        .map(|&d| Ok((d, component(d)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(match g.format {
        Format::Text if parts.len() == 1 => format!("{}\n", parts[0].1),
        Format::Text => parts.iter().map(|(d, p)| format!("w_{d} = {p}\n")).collect(),
        Format::Json if parts.len() == 1 => pretty(&parts[0].1.to_json()),
        Format::Json => pretty(&json!({
            "class": label,
            "components": parts.iter().map(|(_, p)| p.to_json()).collect::<Vec<_>>(),
        })),
    })
}

/// A total class written by increasing degree, each degree in canonical
/// (descending) order: `1 + y_4 + y_6 + y_7 + u_8`.
pub fn graded_text(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = p.components().values().map(|c| c.to_string()).collect();
    parts.join(" + ")
}

fn cmd_sw(
    target: SwTarget,
    n: Option<u32>,
    variant: Option<&str>,
    degrees: &[u32],
    total: bool,
    g: &Globals,
) -> Result<String, CliError> {
    if total && !degrees.is_empty() {
        return Err(CliError::Usage("--total and --degree are exclusive".into()));
    }
    let fixed = match target {
        SwTarget::Adjoint => Some(15),
        SwTarget::F4 => Some(9),
        SwTarget::E6 => Some(10),
        SwTarget::E7 => Some(12),
        _ => None,
    };
    let n = match (fixed, n) {
        (Some(f), Some(n)) if f != n => {
            return Err(CliError::Usage(format!("{} lives on Spin({f}), not Spin({n})", target.tag())))
        }
        (Some(f), _) => f,
        (None, Some(n)) => n,
        (None, None) => return Err(CliError::Usage(format!("sw {} needs --n", target.tag()))),
    };
    check_rank(n)?;
    let mut pipeline = g.pipeline();
    match target {
        SwTarget::Lambda2 => {
            let max = degrees.iter().copied().max();
            let lc = pipeline.lambda_classes(n, max)?;
            let class = lc.lambda2.clone();
            let label = format!("w(lambda^2) of Spin({n})");
            render_components(&label, &class, degrees, &|d| Ok(class.component(d)), g)
        }
        SwTarget::Spin => {
            let v = parse_variant(n, variant)?;
            let table = pipeline.table(n, v)?;
            let class = table.total()?;
            let label = format!("w({})", table.label());
            render_components(&label, &class, degrees, &|d| Ok(class.component(d)), g)
        }
        SwTarget::Adjoint => {
            if degrees.is_empty() {
                return Err(CliError::Usage(
                    "sw adjoint needs --degree; exact components exist for d <= 64 and d = 128".into(),
                ));
            }
            if let Some(d) = degrees.iter().find(|&&d| d > 64 && d != 128) {
                return Err(CliError::Usage(format!(
                    "w_{d} of the adjoint class is not computed; use d <= 64 or d = 128"
                )));
            }
            let adj = pipeline.adjoint_class()?;
            let ring = make_bspin_ring(15)?;
            let zero = Polynomial::zero(ring.ring());
            render_components("adjoint", &zero, degrees, &|d| Ok(adj.components[&d].clone()), g)
        }
        SwTarget::F4 | SwTarget::E6 | SwTarget::E7 => {
            let which = match target {
                SwTarget::F4 => Exceptional::F4,
                SwTarget::E6 => Exceptional::E6,
                _ => Exceptional::E7,
            };
            let class = pipeline.exceptional_class(which)?;
            render_components(target.tag(), &class, degrees, &|d| Ok(class.component(d)), g)
        }
    }
}

fn cmd_sq(n: u32, j: Option<u32>, which: SqRing, total: bool, text: &str, g: &Globals) -> Result<String, CliError> {
    check_rank(n)?;
    let j = match (j, total) {
        (Some(_), true) => return Err(CliError::Usage("--j and --total are exclusive".into())),
        (None, false) => return Err(CliError::Usage("sq needs --j or --total".into())),
        (j, _) => j,
    };
    let ctx: Arc<SteenrodContext> = match which {
        SqRing::BSO => {
            let ring = PresentedRing::free(&bso_ring(n)?);
            Arc::new(SteenrodContext::bso(&ring, n)?)
        }
        SqRing::BSpin => {
            let ring = make_bspin_ring(n)?;
            let p = ring.parse(text)?;
            let u = u_index(n);
            if p.terms().iter().any(|m| m.exponent(u) > 0) {
                g.pipeline().squares(n)?
            } else {
                Arc::new(SteenrodContext::bspin(&ring, n)?)
            }
        }
    };
    let p = ctx.ring().parse(text)?;
    let out = match j {
        Some(j) => ctx.sq(j, &p)?,
        None => ctx.total_sq(&p)?,
    };
    Ok(match g.format {
        Format::Text => format!("{out}\n"),
        Format::Json => pretty(&out.to_json()),
    })
}

fn cmd_chern(n: u32, i: u32, degrees: &[u32], g: &Globals) -> Result<String, CliError> {
    if !(2..=15).contains(&n) {
        return Err(CliError::Usage(format!("SU({n}) is outside 2..=15")));
    }
    if i > n {
        return Err(CliError::Usage(format!("lambda^{i} of SU({n}) needs i <= {n}")));
    }
    let class = if i == 0 || i == n {
        Polynomial::one(&symfunc::su_ring(n)?)
    } else {
        let max = degrees.iter().copied().max();
        symfunc::chern_exterior(n, i, max, g.term_budget())?
    };
    let label = format!("c(lambda^{i}) of SU({n})");
    render_components(&label, &class, degrees, &|d| Ok(class.component(d)), g)
}

fn cmd_kernel(n: u32, degree: u32, variant: Option<&str>, g: &Globals) -> Result<String, CliError> {
    check_rank(n)?;
    let v = parse_variant(n, variant)?;
    let mut pipeline = g.pipeline();
    let homs = pipeline.solver_maps(n, v)?;
    let refs: Vec<&RingHom> = homs.iter().map(|h| h.as_ref()).collect();
    let k = kernel_in_degree(&refs, degree)?;
    let names: Vec<&str> = homs.iter().map(|h| h.name()).collect();
    let source = homs[0].source().ring().clone();
    let leads: Vec<String> = k
        .basis
        .iter()
        .map(|b| source.format_monomial(b.leading_monomial().expect("basis elements are nonzero")))
        .collect();
    Ok(match g.format {
        Format::Json => pretty(&json!({
            "ring": homs[0].source().name(),
            "maps": names,
            "degree": degree,
            "source_dimension": k.source_dimension,
            "image_dimension": k.image_dimension,
            "kernel_dimension": k.basis.len(),
            "basis": k.basis.iter().zip(&leads).map(|(b, l)| json!({"leading": l, "polynomial": b.to_json()})).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = format!("kernel of {} in degree {degree}\n", names.join(" + "));
            out.push_str(&format!(
                "source dimension {}, image dimension {}, kernel dimension {}\n",
                k.source_dimension,
                k.image_dimension,
                k.basis.len()
            ));
            for (b, l) in k.basis.iter().zip(&leads) {
                out.push_str(&format!("  [{l}] {b}\n"));
            }
            out
        }
    })
}

/// Maps core errors into the CLI's exit classes.
pub fn classify(e: &Error) -> i32 {
    match e {
        Error::ReferenceMismatch { .. }
        | Error::Inconsistent { .. }
        | Error::Underdetermined { .. }
        | Error::NotWellDefined { .. }
        | Error::NotSymmetric { .. } => 1,
        Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}
