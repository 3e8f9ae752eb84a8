mod doc;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cremona::{
    conj_limit, connect, det_class, pgl2_enumerate, psl_path, sl_decompose, CremonaError, CremonaMap,
    Derivative, Evaluation, Family, Field, Matrix, ProjMatrix, ProjPoint, Scalar, DEFAULT_HEIGHT_BOUND,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cremona", version, about = "Exact computations with birational maps of projective space")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Base field: `q` or `fp:<p>`.
    #[arg(long, global = true, default_value = "q")]
    field: Field,
    /// Dimension of projective space.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Comma-separated sample values of t used to verify families.
    #[arg(long, global = true, default_value = "0,1,-1,2,1/2")]
    samples: String,
    /// Height bound for point searches.
    #[arg(long = "height-bound", global = true, default_value_t = DEFAULT_HEIGHT_BOUND)]
    height_bound: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Structured)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Composition f∘g.
    Compose { f: String, g: String },
    /// Checks the inverse certificate of a map.
    Verify { f: String },
    /// Image of a point.
    Evaluate { f: String, point: String },
    /// Derivative of a map at a point in affine charts.
    Derivative { f: String, point: String },
    /// Conjugation-limit family of a map at a fixed point.
    Conjlimit { g: String, point: String },
    /// Specialization of a family at t = value.
    Specialize { family: String, value: String },
    /// Family from f (t = 0) to g (t = 1).
    Connect { f: String, g: String },
    /// Transvection word of a determinant-one matrix.
    SlDecompose { matrix: String },
    /// Linear family from A (t = 0) to B (t = 1) inside SL.
    PslPath { a: String, b: String },
    /// Determinant class of a projective matrix.
    DetClass { matrix: String },
    /// Enumerates PGL2(F_q).
    Pgl2Finite {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        check: Option<Check>,
    },
    /// The two-fixed-point gadget map.
    Gadget {
        #[arg(long)]
        lambda: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Simple,
}

enum Failure {
    Validation(String),
    Computation(String),
}

impl From<CremonaError> for Failure {
    fn from(e: CremonaError) -> Self {
        use CremonaError::*;
        match e {
            DivisionByZero | DegenerateComposition | DegenerateSpecialization(_) | SearchExhausted(_)
            | NoSuitableAlpha => Failure::Computation(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

struct Output {
    kind: &'static str,
    payload: Value,
    report: Option<Value>,
    text: String,
    ok: bool,
}

impl Output {
    fn new(kind: &'static str, payload: Value, text: String) -> Self {
        Output { kind, payload, report: None, text, ok: true }
    }
}

type Outcome = Result<Output, Failure>;

/// Parses a map; without an inverse clause, linear maps get their matrix
/// inverse and other maps are tried as involutions.
fn load_map(c: &Common, s: &str) -> Result<CremonaMap, Failure> {
    let f = CremonaMap::parse(c.field, c.n, s)?;
    if f.inverse_components().is_some() {
        if !f.verify_certificate()? {
            return Err(Failure::Validation("supplied inverse does not verify".into()));
        }
        return Ok(CremonaMap::certified(f.components().to_vec(), f.inverse_components().unwrap().to_vec())?);
    }
    if let Some(m) = f.to_matrix() {
        return Ok(CremonaMap::linear(&m));
    }
    Ok(CremonaMap::certified(f.components().to_vec(), f.components().to_vec()).unwrap_or(f))
}

fn certified_map(c: &Common, s: &str) -> Result<CremonaMap, Failure> {
    let f = load_map(c, s)?;
    if !f.is_certified() {
        return Err(Failure::Validation("no inverse supplied and none could be inferred".into()));
    }
    Ok(f)
}

fn samples(c: &Common) -> Result<Vec<Scalar>, Failure> {
    Ok(c.samples.split(',').map(|s| Scalar::parse(c.field, s)).collect::<cremona::Result<_>>()?)
}

fn proj_matrix(c: &Common, s: &str) -> Result<ProjMatrix, Failure> {
    Ok(ProjMatrix::new(Matrix::parse(c.field, s)?)?)
}

fn family_output(kind: &'static str, mut fam: Family, c: &Common, extra: Option<(&str, Value)>) -> Outcome {
    let report = fam.verify(&samples(c)?);
    let mut payload = json!({ "family": doc::family(&fam) });
    if let Some((key, value)) = extra {
        payload[key] = value;
    }
    let mut text = format!("{fam}\n");
    for s in &report.samples {
        let _ = writeln!(text, "t = {}: {}", s.t, if s.passed { "ok" } else { "FAILED" });
    }
    Ok(Output { kind, payload, report: Some(doc::report(&report)), text, ok: report.all_passed() })
}

fn run(command: &Command, c: &Common) -> Outcome {
    match command {
        Command::Compose { f, g } => {
            let h = load_map(c, f)?.compose(&load_map(c, g)?)?;
            Ok(Output::new("map", doc::map(&h), format!("{h}\n")))
        }
        Command::Verify { f } => {
            let parsed = CremonaMap::parse(c.field, c.n, f)?;
            let g = match parsed.inverse_components() {
                Some(_) => parsed,
                None => load_map(c, f)?,
            };
            let certified = g.inverse_components().is_some() && g.verify_certificate()?;
            let mut out = Output::new("verification", json!({ "map": doc::map(&g) }), format!("certified: {certified}\n"));
            out.report = Some(json!({ "certified": certified }));
            out.ok = certified;
            Ok(out)
        }
        Command::Evaluate { f, point } => {
            let f = load_map(c, f)?;
            let p = ProjPoint::parse(c.field, point)?;
            let (payload, text) = match f.evaluate(&p)? {
                Evaluation::Point(q) => (json!({ "point": doc::point(&q) }), format!("{q}\n")),
                Evaluation::Indeterminate => (json!({ "point": null }), "indeterminate\n".to_string()),
            };
            Ok(Output::new("evaluation", payload, text))
        }
        Command::Derivative { f, point } => {
            let f = load_map(c, f)?;
            let p = ProjPoint::parse(c.field, point)?;
            let (image, m) = f.derivative_between(&p)?;
            let fixed = image == p;
            let linear = match (fixed, f.derivative_at_fixed_point(&p)) {
                (true, Ok(Derivative::Linear(d))) => Some(d),
                _ => None,
            };
            let payload = json!({
                "image": doc::point(&image),
                "fixed": fixed,
                "matrix": m.as_ref().map(doc::proj_matrix),
                "fixed_point_derivative": linear.as_ref().map(doc::proj_matrix),
            });
            let text = match &m {
                Some(m) => format!("image {image}\n{m}\n"),
                None => format!("image {image}\nsingular\n"),
            };
            Ok(Output::new("derivative", payload, text))
        }
        Command::Conjlimit { g, point } => {
            let g = certified_map(c, g)?;
            let p = ProjPoint::parse(c.field, point)?;
            family_output("family", conj_limit(&g, &p)?, c, None)
        }
        Command::Specialize { family, value } => {
            let fam = Family::parse(c.field, c.n, family)?;
            let m = fam.specialize(&Scalar::parse(c.field, value)?)?;
            Ok(Output::new("map", doc::map(&m), format!("{m}\n")))
        }
        Command::Connect { f, g } => {
            let (f, g) = (certified_map(c, f)?, certified_map(c, g)?);
            let (fam, plan) = connect(&f, &g, c.height_bound)?;
            let mut out = family_output("path", fam, c, Some(("plan", doc::plan(&plan))))?;
            let steps: String = plan.steps.iter().map(|s| format!("step: {s}\n")).collect();
            out.text.push_str(&steps);
            Ok(out)
        }
        Command::SlDecompose { matrix } => {
            let word = sl_decompose(&Matrix::parse(c.field, matrix)?)?;
            Ok(Output::new("word", doc::word(&word), format!("{word}\n")))
        }
        Command::PslPath { a, b } => {
            let (a, b) = (Matrix::parse(c.field, a)?, Matrix::parse(c.field, b)?);
            family_output("family", psl_path(&a, &b)?, c, None)
        }
        Command::DetClass { matrix } => {
            let d = det_class(&proj_matrix(c, matrix)?)?;
            let payload = json!({
                "det": d.det.to_string(),
                "in_psl": d.in_psl,
                "root": d.root.as_ref().map(Scalar::to_string),
            });
            Ok(Output::new("det-class", payload, format!("det {} in_psl {}\n", d.det, d.in_psl)))
        }
        Command::Pgl2Finite { q, check } => {
            let table = pgl2_enumerate(*q)?;
            let order = table.order();
            let psl = table.psl_elements().len();
            let mut payload = json!({ "q": q, "order": order, "psl_order": psl, "pgl_equals_psl": order == psl });
            let mut text = format!("order {order}\npsl order {psl}\n");
            if matches!(check, Some(Check::Simple)) {
                let simple = table.is_simple();
                payload["simple"] = json!(simple);
                let _ = writeln!(text, "simple {simple}");
            }
            Ok(Output::new("pgl2-finite", payload, text))
        }
        Command::Gadget { lambda } => {
            let g = CremonaMap::twoderivatives_gadget(&Scalar::parse(c.field, lambda)?, c.n)?;
            Ok(Output::new("map", doc::map(&g), format!("{g}\n")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command, &cli.common) {
        Ok(out) => {
            match cli.common.format {
                Format::Text => print!("{}", out.text),
                Format::Structured => {
                    let document = json!({
                        "kind": out.kind,
                        "n": cli.common.n,
                        "field": cli.common.field.to_string(),
                        "payload": out.payload,
                        "report": out.report,
                    });
                    println!("{}", serde_json::to_string_pretty(&document).expect("serializable"));
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(3)
            }
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
