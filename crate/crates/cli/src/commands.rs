use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use abelaut::aut::{verify_aut_central, AutCertificate, BlockSolution, Witness};
use abelaut::claims::{analyze, check_claims, ClaimCheck, GroupAnalysis};
use abelaut::constructions::{
    build_central_product, build_extension, build_special, build_zurek, BuiltGroup, ConstructionTag, GroupFile,
};
use abelaut::tat::{
    check_search_params, search_tat, verify, SearchOptions, SearchParams, TatCandidate, TatFile, TatVerdict,
};
use abelaut::{Error, FieldPrime};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{BuildArgs, CheckArgs, Format, InputArgs, SearchArgs};

/// Why a command did not succeed, with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// A verification or expected property failed.
    Claim(String),
    /// Bad arguments, unreadable input or an unmet precondition.
    Usage(String),
    /// The search budget ran out.
    Exhausted(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Claim(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Exhausted(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Claim(m) | Failure::Usage(m) | Failure::Exhausted(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconclusive(_) | Error::NotBijective => Failure::Claim(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

pub struct Context {
    format: Format,
    options: SearchOptions,
}

impl Context {
    pub fn new(format: Format, workers: Option<usize>, gl_budget: Option<u128>) -> Self {
        let workers = workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1);
        let mut options = SearchOptions {
            workers,
            ..SearchOptions::default()
        };
        if let Some(b) = gl_budget {
            options.budget = b;
        }
        Context { format, options }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn write_out(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes `value` as JSON or `text`, per the chosen format.
fn emit<T: Serialize>(ctx: &Context, out: Option<&Path>, value: &T, text: &str) -> Outcome {
    match ctx.format {
        Format::Json => write_out(out, &to_json(value)),
        Format::Text => write_out(out, text),
    }
}

/// Writes the artifact as JSON to `out` when given; the summary goes to
/// stdout in text mode.
fn emit_artifact<T: Serialize>(ctx: &Context, out: Option<&Path>, value: &T, summary: &str) -> Outcome {
    match (out, ctx.format) {
        (Some(path), Format::Text) => {
            write_out(Some(path), &to_json(value))?;
            print!("{summary}");
            Ok(())
        }
        (Some(path), Format::Json) => write_out(Some(path), &to_json(value)),
        (None, _) => write_out(None, &to_json(value)),
    }
}

fn load_tat(path: &Path) -> Result<TatCandidate, Failure> {
    let file: TatFile = read_json(path)?;
    Ok(TatCandidate::from_file(&file)?)
}

fn load_group(path: &Path) -> Result<BuiltGroup, Failure> {
    let file: GroupFile = read_json(path)?;
    Ok(BuiltGroup::from_file(&file)?)
}

pub fn tat_search(ctx: &Context, a: &SearchArgs) -> Outcome {
    let p = FieldPrime::new(a.p)?;
    check_search_params(a.n, a.k_dim)?;
    let outcome = search_tat(&SearchParams {
        p,
        n: a.n,
        k_dim: a.k_dim,
        seed: a.seed,
        budget: a.budget,
        options: ctx.options,
    })?;
    let Some(t) = outcome.candidate else {
        return Err(Failure::Exhausted(format!(
            "no triple in {} attempts (p = {}, n = {}, dim K = {}, seed {})",
            outcome.attempts, a.p, a.n, a.k_dim, a.seed
        )));
    };
    let summary = format!(
        "found a triple for p = {}, n = {}, dim K = {} after {} attempt(s)\n",
        a.p, a.n, a.k_dim, outcome.attempts
    );
    emit_artifact(ctx, a.out.as_deref(), &t.to_file(), &summary)
}

fn verdict_text(v: &TatVerdict) -> String {
    let mark = |b: bool| if b { "pass" } else { "FAIL" };
    let mut s = String::new();
    let _ = writeln!(s, "(1) dim V >= 4            {}", mark(v.dimension_ok));
    let _ = writeln!(s, "(2) v ∧ V ⊄ K for v != 0  {}", mark(v.wedge_condition));
    let _ = writeln!(s, "(3) f injective           {}", mark(v.injective));
    match &v.centralizer {
        Some(c) => {
            let _ = writeln!(
                s,
                "(4) trivial centralizer   {} (count {} of |GL| = {})",
                mark(v.trivial_centralizer()),
                c.count,
                c.search_space
            );
        }
        None => {
            let _ = writeln!(s, "(4) trivial centralizer   skipped");
        }
    }
    s
}

pub fn tat_verify(ctx: &Context, a: &InputArgs) -> Outcome {
    let t = load_tat(&a.input)?;
    let v = verify(&t, &ctx.options)?;
    emit(ctx, a.out.as_deref(), &v, &verdict_text(&v))?;
    if v.is_tat() {
        Ok(())
    } else {
        Err(Failure::Claim("not a trivial automorphism triple".into()))
    }
}

fn build(t: &TatCandidate, tag: ConstructionTag, opts: &SearchOptions) -> Result<BuiltGroup, Failure> {
    let g = match tag {
        ConstructionTag::Special => build_special(t, opts),
        ConstructionTag::Zurek => build_zurek(t, opts),
        ConstructionTag::CentralProduct => build_central_product(t, opts),
        ConstructionTag::Extension { m } => build_extension(t, m, None, opts),
    };
    Ok(g?)
}

pub fn group_build(ctx: &Context, a: &BuildArgs) -> Outcome {
    let tag = ConstructionTag::parse(&a.construction, a.m)?;
    let t = load_tat(&a.input)?;
    let g = build(&t, tag, &ctx.options)?;
    let summary = format!(
        "built the {} group of order {}^{}\n",
        tag.name(),
        g.pres.p().get(),
        g.pres.order_exponent()
    );
    emit_artifact(ctx, a.out.as_deref(), &g.to_file(), &summary)
}

fn analysis_text(tag: ConstructionTag, a: &GroupAnalysis) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "construction: {}", tag.name());
    for (name, v) in [
        ("|G|", a.order),
        ("|G′|", a.derived),
        ("|Z(G)|", a.center),
        ("|Φ(G)|", a.frattini),
        ("|Gᵖ|", a.agemo),
        ("|Ω₁(G)|", a.omega1),
        ("|Ω₂(G)|", a.omega2),
    ] {
        let _ = writeln!(s, "{name:<9}{v}");
    }
    let _ = writeln!(s, "lattice: {}", a.lattice);
    let _ = writeln!(s, "special: {}", a.is_special);
    let _ = writeln!(s, "Z(G) ≤ Φ(G): {}", a.purely_nonabelian_certificate);
    s
}

pub fn group_analyze(ctx: &Context, a: &InputArgs) -> Outcome {
    let g = load_group(&a.input)?;
    let analysis = analyze(&g.pres);
    #[derive(Serialize)]
    struct Report<'a> {
        construction: ConstructionTag,
        #[serde(flatten)]
        analysis: &'a GroupAnalysis,
    }
    let report = Report {
        construction: g.tag,
        analysis: &analysis,
    };
    emit(ctx, a.out.as_deref(), &report, &analysis_text(g.tag, &analysis))?;
    let expected = abelaut::constructions::claim_sheet(g.tag);
    if analysis.lattice != expected.lattice {
        return Err(Failure::Claim(format!(
            "lattice is {}, expected {}",
            analysis.lattice, expected.lattice
        )));
    }
    Ok(())
}

fn certificate_text(c: &AutCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "construction: {}", c.construction.name());
    let _ = writeln!(s, "Aut(G) = Aut_c(G): {}", c.aut_equals_autc);
    let _ = writeln!(s, "method: {}", c.method);
    let _ = writeln!(
        s,
        "centralizer: {} element(s) of {} searched",
        c.centralizer.count, c.centralizer.search_space
    );
    for b in &c.block_solutions {
        match b {
            BlockSolution::CentralProduct { alpha, lambda, mu } => {
                let _ = writeln!(s, "block: α = {:?}, λ = {lambda:?}, μ = {mu}", alpha.to_rows());
            }
            BlockSolution::Extension { alpha, tau, sigma } => {
                let _ = writeln!(s, "block: τ = {tau}, σ = {sigma:?}, α = {:?}", alpha.to_rows());
            }
        }
    }
    let _ = writeln!(s, "structure: {}", c.structure);
    let _ = writeln!(s, "|Aut_c(G)| = {}", c.autc_order);
    match &c.witness {
        Some(Witness::NonCommuting {
            gamma_delta,
            delta_gamma,
            ..
        }) => {
            let _ = writeln!(
                s,
                "witness: γδ ≠ δγ, x1 ↦ {} vs {}",
                gamma_delta.images[0], delta_gamma.images[0]
            );
        }
        Some(Witness::Order { order, .. }) => {
            let _ = writeln!(s, "witness: an automorphism of order {order}");
        }
        None => {}
    }
    s
}

pub fn aut_verify(ctx: &Context, a: &InputArgs) -> Outcome {
    let g = load_group(&a.input)?;
    let cert = verify_aut_central(&g, &ctx.options)?;
    emit(ctx, a.out.as_deref(), &cert, &certificate_text(&cert))?;
    let expected = abelaut::constructions::claim_sheet(g.tag);
    if cert.aut_equals_autc != expected.aut_equals_autc || cert.structure != expected.structure {
        return Err(Failure::Claim(format!(
            "Aut(G) = Aut_c(G): {}, structure {}; expected {}, {}",
            cert.aut_equals_autc, cert.structure, expected.aut_equals_autc, expected.structure
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ConstructionReport {
    construction: ConstructionTag,
    analysis: GroupAnalysis,
    certificate: AutCertificate,
    claims: Vec<ClaimCheck>,
}

#[derive(Serialize)]
struct CheckReport {
    tat: TatFile,
    tat_verdict: TatVerdict,
    constructions: Vec<ConstructionReport>,
    pass: bool,
}

pub fn check_all(ctx: &Context, a: &CheckArgs) -> Outcome {
    let t = match &a.input {
        Some(path) => load_tat(path)?,
        None => {
            let p = FieldPrime::new(a.p)?;
            check_search_params(a.n, a.k_dim)?;
            let outcome = search_tat(&SearchParams {
                p,
                n: a.n,
                k_dim: a.k_dim,
                seed: a.seed,
                budget: a.budget,
                options: ctx.options,
            })?;
            outcome
                .candidate
                .ok_or_else(|| Failure::Exhausted(format!("no triple in {} attempts", outcome.attempts)))?
        }
    };
    if a.m < 2 {
        return Err(Failure::Usage(format!("m = {}, need m > 1", a.m)));
    }
    let verdict = verify(&t, &ctx.options)?;
    let mut text = String::new();
    let _ = writeln!(text, "triple: p = {}, n = {}, dim K = {}", t.p(), t.n(), t.k().k_dim());
    text.push_str(&verdict_text(&verdict));
    let mut first_failure: Option<String> = None;
    let mut constructions = Vec::new();
    if verdict.is_tat() {
        for tag in ConstructionTag::all(a.m) {
            if tag == ConstructionTag::CentralProduct || matches!(tag, ConstructionTag::Extension { .. }) {
                // these need K + Vf proper, or K = 0
                if abelaut::constructions::amalgam_vector(&t).is_none()
                    || (matches!(tag, ConstructionTag::Extension { .. }) && t.k().k_dim() != 0)
                {
                    let _ = writeln!(text, "\n[{}] skipped: preconditions not met by this triple", tag.name());
                    continue;
                }
            }
            let g = build(&t, tag, &ctx.options)?;
            let analysis = analyze(&g.pres);
            let certificate = verify_aut_central(&g, &ctx.options)?;
            let claims = check_claims(&g, &analysis, &certificate)?;
            let _ = writeln!(text, "\n[{}] |G| = {}", tag.name(), analysis.order);
            for c in &claims {
                let _ = writeln!(
                    text,
                    "  {} {}: {}{}",
                    if c.pass { "pass" } else { "FAIL" },
                    c.claim,
                    c.found,
                    if c.pass {
                        String::new()
                    } else {
                        format!(" (expected {})", c.expected)
                    }
                );
                if !c.pass && first_failure.is_none() {
                    first_failure = Some(format!(
                        "[{}] {}: found {}, expected {}",
                        tag.name(),
                        c.claim,
                        c.found,
                        c.expected
                    ));
                }
            }
            constructions.push(ConstructionReport {
                construction: tag,
                analysis,
                certificate,
                claims,
            });
        }
    } else {
        first_failure = Some("the input is not a trivial automorphism triple".into());
    }
    let pass = first_failure.is_none();
    let _ = writeln!(
        text,
        "\n{}",
        if pass {
            "all claims reproduced"
        } else {
            "some claims failed"
        }
    );
    let report = CheckReport {
        tat: t.to_file(),
        tat_verdict: verdict,
        constructions,
        pass,
    };
    emit(ctx, a.out.as_deref(), &report, &text)?;
    match first_failure {
        None => Ok(()),
        Some(f) => Err(Failure::Claim(f)),
    }
}
