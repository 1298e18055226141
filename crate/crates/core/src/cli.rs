//! Command-line interface: argument parsing, dispatch and rendering.
//!
//! [`run`] takes the argument list and the value of `HD_CAPACITY` and returns
//! everything the process prints together with its exit code, so the binary is
//! a thin wrapper and the whole surface is testable in-process.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::classify::{multiplicity_pattern, random_form_with_pattern, satisfies_system, MultiplicityPattern};
use crate::coincidence::{
    define, integer_partitions, normalize_with_cap, pattern_matches, reduce_orbits_with_cap, Atom, CoincidenceExpr,
    DegeneracyPartition, Form,
};
use crate::generator::{discriminant, run_pipeline, Capacity, CoefficientVector};
use crate::polyring::{latex, parse_poly, MultiPoly};
use crate::sl2::{act_on_form, orbit_common_zero_system, transform_coefficient_poly, SymbolicMatrix, UnimodularMatrix};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Environment variable holding capacity overrides, e.g. `max_degree=5`.
pub const CAPACITY_ENV: &str = "HD_CAPACITY";

#[derive(Debug, Parser)]
#[command(name = "hdisc", version, about = "Higher discriminants of binary forms")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equations for the forms with a given coincidence of roots.
    Generate(GenerateArgs),
    /// Root multiplicities of a concrete form and the strata containing it.
    Classify(ClassifyArgs),
    /// Check a generated system against the multiplicity oracle on random forms.
    Verify(VerifyArgs),
    /// Symbolic SL(2) orbit of a coefficient polynomial.
    Orbit(OrbitArgs),
    /// Check SL(2) invariance of a coefficient polynomial.
    Invariance(InvarianceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    Definition,
    Cnf,
    Reduced,
    RootSystem,
    Symmetrized,
    Final,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Degree of the form.
    #[arg(short = 'k', long)]
    pub degree: usize,
    /// Sizes of the groups of equal roots, e.g. `3` or `2,2`.
    #[arg(short = 'p', long)]
    pub partition: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = Stage::Final)]
    pub stage: Stage,
    /// Keep the constant factors removed by normalization in LaTeX output.
    #[arg(long)]
    pub paper_constants: bool,
    /// Write the result to a file instead of stdout.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(short = 'k', long)]
    pub degree: Option<usize>,
    /// Coefficients, leading first, e.g. `1,-4,5,-2`.
    #[arg(short = 'c', long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(short = 'k', long)]
    pub degree: usize,
    #[arg(short = 'p', long)]
    pub partition: String,
    /// Random forms per multiplicity pattern.
    #[arg(short = 'n', long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(short = 'k', long)]
    pub degree: usize,
    /// `disc`, `apolara` or a polynomial in the coefficients.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
}

#[derive(Debug, Args)]
pub struct InvarianceArgs {
    #[arg(short = 'k', long)]
    pub degree: usize,
    /// `disc`, `apolara` or a polynomial in the coefficients.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// Number of random unimodular matrices.
    #[arg(short = 'n', long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(err: &Error) -> Self {
        let code = match err {
            Error::Capacity(_) => EXIT_CAPACITY,
            _ => EXIT_USAGE,
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

pub fn run<I, T>(args: I, capacity_env: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome::ok(rendered)
            };
        }
    };
    let capacity = match Capacity::default().with_overrides(capacity_env.unwrap_or("")) {
        Ok(c) => c,
        Err(e) => return Outcome::error(&e),
    };
    let result = match &config.command {
        Command::Generate(a) => cmd_generate(a, &capacity),
        Command::Classify(a) => cmd_classify(a).map(Outcome::ok),
        Command::Verify(a) => cmd_verify(a, &capacity),
        Command::Orbit(a) => cmd_orbit(a).map(Outcome::ok),
        Command::Invariance(a) => cmd_invariance(a),
    };
    result.unwrap_or_else(|e| Outcome::error(&e))
}

fn expr_json(stage: &str, partition: &DegeneracyPartition, e: &CoincidenceExpr) -> serde_json::Value {
    json!({
        "stage": stage,
        "stratum": partition.stratum_name(),
        "form": match e.form() {
            Form::DisjunctionOfConjunctions => "dnf",
            Form::ConjunctionOfDisjunctions => "cnf",
        },
        "groups": e.groups().iter().map(|g| g.iter().map(|a| a.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "text": e.to_conventional(),
        "sum_product": e.to_sum_product(),
    })
}

fn render_expr(stage: &str, partition: &DegeneracyPartition, e: &CoincidenceExpr, format: Format) -> String {
    match format {
        Format::Text => format!(
            "# {stage} of {}, {} group(s)\n{}\n# {}\n",
            partition.stratum_name(),
            e.groups().len(),
            e.to_conventional(),
            e.to_sum_product()
        ),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&expr_json(stage, partition, e)).expect("json")
        ),
        Format::Latex => format!("${}$\n", expr_latex(e)),
    }
}

/// Sum-product notation in LaTeX: `+` is AND, `\times` is OR.
fn expr_latex(e: &CoincidenceExpr) -> String {
    let atom = |a: &Atom| {
        if a.j() < 10 {
            format!("E_{{{}{}}}", a.i(), a.j())
        } else {
            format!("E_{{{},{}}}", a.i(), a.j())
        }
    };
    let many = e.groups().len() > 1;
    let parts: Vec<String> = e
        .groups()
        .iter()
        .map(|g| {
            let atoms: Vec<String> = g.iter().map(atom).collect();
            match e.form() {
                Form::DisjunctionOfConjunctions if g.len() > 1 && many => format!("({})", atoms.join("+")),
                Form::DisjunctionOfConjunctions => atoms.join("+"),
                Form::ConjunctionOfDisjunctions => atoms.join("\\times "),
            }
        })
        .collect();
    match e.form() {
        Form::DisjunctionOfConjunctions => parts.join("\\times "),
        Form::ConjunctionOfDisjunctions => parts.join("+"),
    }
}

fn render_polys(
    stage: &str,
    partition: &DegeneracyPartition,
    label: &str,
    polys: &[MultiPoly],
    format: Format,
) -> String {
    match format {
        Format::Text => {
            let mut out = format!(
                "# {stage} of {}, {} polynomial(s)\n",
                partition.stratum_name(),
                polys.len()
            );
            for (i, p) in polys.iter().enumerate() {
                let _ = writeln!(out, "{label}{} = {p}", i + 1);
            }
            out
        }
        Format::Json => {
            let v = json!({
                "stage": stage,
                "stratum": partition.stratum_name(),
                "polys": polys.iter().map(|p| json!({"text": p.to_string(), "poly": p.to_json_value()})).collect::<Vec<_>>(),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        Format::Latex => {
            let lines: Vec<String> = polys.iter().map(|p| format!("&{}", latex(p))).collect();
            format!("\\begin{{align*}}\n{}\n\\end{{align*}}\n", lines.join(",\\\\\n"))
        }
    }
}

pub fn cmd_generate(a: &GenerateArgs, cap: &Capacity) -> Result<Outcome, Error> {
    let partition = DegeneracyPartition::parse(a.degree, &a.partition)?;
    let text = match a.stage {
        Stage::Definition => render_expr("definition", &partition, &define(&partition)?, a.format),
        Stage::Cnf | Stage::Reduced => {
            let cnf = normalize_with_cap(&define(&partition)?, cap.clause_cap)?;
            if a.stage == Stage::Cnf {
                render_expr("cnf", &partition, &cnf, a.format)
            } else {
                let reduced = reduce_orbits_with_cap(&cnf, cap.enumeration_cap)?;
                render_expr("reduced", &partition, &reduced, a.format)
            }
        }
        Stage::RootSystem | Stage::Symmetrized | Stage::Final => {
            let pipeline = run_pipeline(&partition, cap)?;
            match a.stage {
                Stage::RootSystem => {
                    render_polys("root-system", &partition, "P", &pipeline.root_system.polys, a.format)
                }
                Stage::Symmetrized => render_polys("symmetrized", &partition, "s", &pipeline.symmetrized, a.format),
                _ => match a.format {
                    Format::Text => pipeline.system.to_text(),
                    Format::Json => format!(
                        "{}\n",
                        serde_json::to_string_pretty(&pipeline.system.to_json_value()).expect("json")
                    ),
                    Format::Latex => pipeline.system.to_latex(a.paper_constants),
                },
            }
        }
    };
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Error::Parse(format!("cannot write {path}: {e}")))?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

pub fn cmd_classify(a: &ClassifyArgs) -> Result<String, Error> {
    let f = CoefficientVector::parse(a.degree, &a.coeffs)?;
    let pattern = multiplicity_pattern(&f)?;
    let strata = pattern.strata();
    Ok(match a.format {
        Format::Json => {
            let v = json!({
                "degree": f.degree(),
                "coeffs": f.to_string(),
                "pattern": pattern.multiplicities(),
                "infinity": pattern.infinity(),
                "strata": strata.iter().map(|s| s.stratum_name()).collect::<Vec<_>>(),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        _ => {
            let names: Vec<String> = strata.iter().map(|s| s.stratum_name()).collect();
            format!(
                "form: {f}\npattern: {pattern}\nstrata: {}\n",
                if names.is_empty() {
                    "none".to_string()
                } else {
                    names.join(" ")
                }
            )
        }
    })
}

pub fn cmd_verify(a: &VerifyArgs, cap: &Capacity) -> Result<Outcome, Error> {
    let partition = DegeneracyPartition::parse(a.degree, &a.partition)?;
    let system = run_pipeline(&partition, cap)?.system;
    let mut out = format!(
        "# verify {} with {} random form(s) per pattern, seed {}\n",
        partition.stratum_name(),
        a.trials,
        a.seed
    );
    let mut disagreements = 0usize;
    for (pi, shape) in integer_partitions(a.degree).iter().enumerate() {
        let pattern = MultiplicityPattern::affine(shape.parts())?;
        let expected = pattern_matches(&partition, &pattern.to_coincidence_pattern());
        let mut agree = 0usize;
        for t in 0..a.trials {
            let seed = a.seed.wrapping_add((pi as u64) << 32).wrapping_add(t as u64);
            let f = random_form_with_pattern(&pattern, seed)?;
            if satisfies_system(&system, &f)? == expected {
                agree += 1;
            } else {
                disagreements += 1;
            }
        }
        let _ = writeln!(
            out,
            "pattern {pattern}: member={} agree {agree}/{}",
            if expected { "yes" } else { "no" },
            a.trials
        );
    }
    let verdict = if disagreements == 0 { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "{verdict}: {disagreements} disagreement(s)");
    Ok(Outcome {
        code: if disagreements == 0 { EXIT_OK } else { EXIT_VERIFY },
        stdout: out,
        stderr: String::new(),
    })
}

/// `disc`, `apolara` or a literal polynomial in the coefficients.
pub fn named_polynomial(name: &str, k: usize) -> Result<MultiPoly, Error> {
    match name.trim() {
        "disc" => discriminant(k),
        "apolara" if k == 4 => parse_poly("c^2 - 3*b*d + 12*a*e"),
        "apolara" => Err(Error::DegreeMismatch { expected: 4, found: k }),
        literal => parse_poly(literal),
    }
}

/// `G11^2*(b^2 - 3*a*c) + G11*G12*(b*c - 9*a*d)`: grouped by monomials in the
/// group entries.
pub fn render_grouped(p: &MultiPoly) -> String {
    let parts: Vec<String> = p
        .collect_by(|v| v.is_group())
        .into_iter()
        .rev()
        .map(|(g, c)| {
            if g.is_one() {
                format!("({c})")
            } else {
                format!("{g}*({c})")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

pub fn cmd_orbit(a: &OrbitArgs) -> Result<String, Error> {
    let q = named_polynomial(&a.poly, a.degree)?;
    let sys = orbit_common_zero_system(&q, a.degree)?;
    let mut out = format!(
        "# orbit of {q} (degree {})\nZ(G) = {}\n",
        a.degree,
        render_grouped(&sys.orbit)
    );
    let _ = writeln!(out, "# common zeros: {} equation(s)", sys.equations.len());
    for e in &sys.equations {
        let _ = writeln!(
            out,
            "{} = 0    # coefficient of {} content={}",
            e.poly, e.group_monomial, e.content
        );
    }
    Ok(out)
}

fn random_form<R: Rng>(rng: &mut R, k: usize) -> CoefficientVector {
    let coeffs: Vec<i64> = (0..=k).map(|_| rng.gen_range(-9..=9)).collect();
    CoefficientVector::from_integers(&coeffs).expect("k >= 1")
}

pub fn cmd_invariance(a: &InvarianceArgs) -> Result<Outcome, Error> {
    let q = named_polynomial(&a.poly, a.degree)?;
    let symbolic = transform_coefficient_poly(&q, &SymbolicMatrix::generic(), a.degree, true)? == q;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut out = format!("# invariance of {q} (degree {}), seed {}\n", a.degree, a.seed);
    let mut fixed = 0usize;
    for i in 0..a.trials {
        let g = UnimodularMatrix::random(&mut rng, 4);
        let f = random_form(&mut rng, a.degree);
        let before = q.evaluate(&f.point());
        let after = q.evaluate(&act_on_form(&g, &f).point());
        let ok = before.is_some() && before == after;
        fixed += ok as usize;
        let _ = writeln!(
            out,
            "matrix {}: {g} {}",
            i + 1,
            if ok { "invariant" } else { "changed" }
        );
    }
    let _ = writeln!(out, "symbolic: {}", if symbolic { "fixed" } else { "not fixed" });
    let pass = symbolic && fixed == a.trials;
    let _ = writeln!(
        out,
        "{}: {fixed}/{} invariant",
        if pass { "PASS" } else { "FAIL" },
        a.trials
    );
    Ok(Outcome {
        code: if pass { EXIT_OK } else { EXIT_VERIFY },
        stdout: out,
        stderr: String::new(),
    })
}
