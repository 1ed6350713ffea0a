//! Query parsing and dispatch behind the `glbranch` binary.
//!
//! A [`Command`] is the raw argument form produced by clap. It is type-checked
//! into a [`Query`] by parsing every expression argument, then [`run_query`]
//! dispatches to the library. Exit codes: 0 success, 2 parse or usage error,
//! 3 domain precondition failure.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gln_branching::{
    bad_subsequence, bz_bound_detail, csupp, euler_poincare_check, flag_embedding_exists,
    is_good_pair, jacquet_shadow, levi_ss_rank, multiplicity, multiplicity_z,
    nongeneric_quotient_test, parse_generic, parse_multisegment, parse_segment, parse_series,
    product_rule, rearrange_good, segment_partitions, steinberg_subquotients, theta, whittaker_dim,
    AnswerKind, BzBound, CuspidalSupport, Error, GenericRep, JacquetSide, MissingStepVariant,
    MultiplicityAnswer, Multisegment, ParseError, Partition, PrincipalSeries, Segment, Side,
};
use serde::Serialize;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "glbranch",
    version,
    about = "Restriction multiplicities for GL(n) principal series"
)]
pub struct Cli {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        env = "GLBRANCH_FORMAT",
        default_value = "json"
    )]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Back,
    Front,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum JacquetArg {
    Standard,
    Opposite,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// dim Hom(series, target) for a generic target; `--target st` picks the Steinberg.
    Mult {
        series: String,
        #[arg(long)]
        target: String,
    },
    /// dim Hom(series, Z(segment)).
    Multz {
        series: String,
        #[arg(long)]
        segment: String,
    },
    /// The two good-pair conditions.
    Goodpair {
        series: String,
        #[arg(long)]
        target: String,
    },
    /// Whether the series is bad to a segment.
    Bad {
        series: String,
        #[arg(long)]
        segment: String,
    },
    /// Reorders a series good to a segment by unlinked adjacent swaps.
    Rearrange {
        series: String,
        #[arg(long)]
        segment: String,
        #[arg(long, value_enum, default_value = "back")]
        variant: VariantArg,
    },
    /// Derivative of a product by the product rule.
    Derive {
        series: String,
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
    },
    /// Contragredient of a multisegment or generic rep; θ of a series.
    Dual { expr: String },
    /// Irreducible subquotients of ξ(n) with a Steinberg quotient.
    Subquotients { n: u32 },
    /// Whether a non-generic multisegment admits Q(segment) as a quotient.
    Nongeneric {
        multisegment: String,
        #[arg(long)]
        segment: String,
    },
    /// Whether the flag embedding exists for a composition such as `1,2,1`.
    Embed { partition: String },
    /// Compositions of n with at most one part equal to 2 and the rest 1.
    Partitions { n: u32 },
    /// Euler–Poincaré consistency of the multiplicity answer.
    EpCheck {
        series: String,
        #[arg(long)]
        target: String,
    },
    /// Cuspidal support of any expression.
    Csupp { expr: String },
    /// The derivative-matching upper bound on Hom.
    Bound {
        series: String,
        #[arg(long)]
        target: String,
    },
    /// Dimension of Whittaker functionals.
    Whittaker { expr: String },
    /// Jacquet module of Q(segment).
    Jacquet {
        segment: String,
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value = "standard")]
        side: JacquetArg,
    },
    /// Runs one query per line of a file and prints JSON lines.
    Batch { file: PathBuf },
}

/// Any parsed expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Series(PrincipalSeries),
    Segment(Segment),
    Generic(GenericRep),
    Multisegment(Multisegment),
}

/// Reads `Z(...)` as a multisegment, `Q(...)` as a generic rep, a bare
/// segment as a segment, and anything else as a series.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let t = src.trim_start();
    if t.starts_with("Z(") {
        return parse_multisegment(src).map(Expr::Multisegment);
    }
    if t.starts_with("Q(") {
        return parse_generic(src).map(Expr::Generic);
    }
    if let Ok(d) = parse_segment(src) {
        return Ok(Expr::Segment(d));
    }
    parse_series(src).map(Expr::Series)
}

/// A type-checked command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    Mult {
        series: PrincipalSeries,
        target: GenericRep,
    },
    Multz {
        series: PrincipalSeries,
        segment: Segment,
    },
    GoodPair {
        series: PrincipalSeries,
        target: GenericRep,
    },
    Bad {
        series: PrincipalSeries,
        segment: Segment,
    },
    Rearrange {
        series: PrincipalSeries,
        segment: Segment,
        variant: MissingStepVariant,
    },
    Derive {
        series: PrincipalSeries,
        level: u32,
        side: Side,
    },
    Dual(Expr),
    Subquotients(u32),
    Nongeneric {
        multisegment: Multisegment,
        segment: Segment,
    },
    Embed(Partition),
    Partitions(u32),
    EpCheck {
        series: PrincipalSeries,
        target: GenericRep,
    },
    Csupp(Expr),
    Bound {
        series: PrincipalSeries,
        target: GenericRep,
    },
    Whittaker(Expr),
    Jacquet {
        segment: Segment,
        level: u32,
        side: JacquetSide,
    },
}

#[derive(Debug)]
pub enum QueryError {
    Parse(ParseError),
    Usage(String),
    Domain(Error),
}

impl From<ParseError> for QueryError {
    fn from(e: ParseError) -> Self {
        QueryError::Parse(e)
    }
}

impl From<Error> for QueryError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => QueryError::Parse(p),
            other => QueryError::Domain(other),
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    column: Option<usize>,
    message: String,
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: ErrorBody<'a>,
}

impl QueryError {
    pub fn exit_code(&self) -> i32 {
        match self {
            QueryError::Parse(_) | QueryError::Usage(_) => 2,
            QueryError::Domain(_) => 3,
        }
    }

    fn body(&self) -> ErrorBody<'_> {
        match self {
            QueryError::Parse(p) => ErrorBody {
                kind: match p.kind {
                    gln_branching::ParseErrorKind::Syntax => "syntax",
                    gln_branching::ParseErrorKind::Semantic => "semantic",
                },
                line: Some(p.line),
                column: Some(p.column),
                message: p.message.clone(),
            },
            QueryError::Usage(m) => ErrorBody {
                kind: "usage",
                line: None,
                column: None,
                message: m.clone(),
            },
            QueryError::Domain(e) => ErrorBody {
                kind: "domain",
                line: None,
                column: None,
                message: e.to_string(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorJson { error: self.body() }).expect("serialisable")
    }

    pub fn to_text(&self) -> String {
        let b = self.body();
        match (b.line, b.column) {
            (Some(l), Some(c)) => format!("{} error at {l}:{c}: {}", b.kind, b.message),
            _ => format!("{} error: {}", b.kind, b.message),
        }
    }
}

fn target_for(series: &PrincipalSeries, src: &str) -> Result<GenericRep, QueryError> {
    let t = src.trim();
    if t.eq_ignore_ascii_case("st") {
        let n = series.total_size();
        if n < 2 {
            return Err(Error::Precondition(
                "the Steinberg target needs a series of size at least 2".into(),
            )
            .into());
        }
        return Ok(GenericRep::steinberg(n - 1)?);
    }
    if t.starts_with('Q') {
        return Ok(parse_generic(src)?);
    }
    Ok(GenericRep::single(parse_segment(src)?))
}

impl Query {
    /// Parses and type-checks the arguments of `cmd`. `batch` has no query form.
    pub fn from_command(cmd: &Command) -> Result<Query, QueryError> {
        Ok(match cmd {
            Command::Mult { series, target } => {
                let series = parse_series(series)?;
                let target = target_for(&series, target)?;
                Query::Mult { series, target }
            }
            Command::Multz { series, segment } => Query::Multz {
                series: parse_series(series)?,
                segment: parse_segment(segment)?,
            },
            Command::Goodpair { series, target } => {
                let series = parse_series(series)?;
                let target = target_for(&series, target)?;
                Query::GoodPair { series, target }
            }
            Command::Bad { series, segment } => Query::Bad {
                series: parse_series(series)?,
                segment: parse_segment(segment)?,
            },
            Command::Rearrange {
                series,
                segment,
                variant,
            } => Query::Rearrange {
                series: parse_series(series)?,
                segment: parse_segment(segment)?,
                variant: match variant {
                    VariantArg::Back => MissingStepVariant::Back,
                    VariantArg::Front => MissingStepVariant::Front,
                },
            },
            Command::Derive {
                series,
                level,
                side,
            } => Query::Derive {
                series: parse_series(series)?,
                level: *level,
                side: match side {
                    SideArg::Left => Side::Left,
                    SideArg::Right => Side::Right,
                },
            },
            Command::Dual { expr } => Query::Dual(parse_expr(expr)?),
            Command::Subquotients { n } => Query::Subquotients(*n),
            Command::Nongeneric {
                multisegment,
                segment,
            } => Query::Nongeneric {
                multisegment: parse_multisegment(multisegment)?,
                segment: parse_segment(segment)?,
            },
            Command::Embed { partition } => Query::Embed(
                partition
                    .parse()
                    .map_err(|e: Error| QueryError::Usage(e.to_string()))?,
            ),
            Command::Partitions { n } => Query::Partitions(*n),
            Command::EpCheck { series, target } => {
                let series = parse_series(series)?;
                let target = target_for(&series, target)?;
                Query::EpCheck { series, target }
            }
            Command::Csupp { expr } => Query::Csupp(parse_expr(expr)?),
            Command::Bound { series, target } => {
                let series = parse_series(series)?;
                let target = target_for(&series, target)?;
                Query::Bound { series, target }
            }
            Command::Whittaker { expr } => Query::Whittaker(parse_expr(expr)?),
            Command::Jacquet {
                segment,
                level,
                side,
            } => Query::Jacquet {
                segment: parse_segment(segment)?,
                level: *level,
                side: match side {
                    JacquetArg::Standard => JacquetSide::Standard,
                    JacquetArg::Opposite => JacquetSide::Opposite,
                },
            },
            Command::Batch { .. } => {
                return Err(QueryError::Usage("batch cannot be used as a query".into()))
            }
        })
    }
}

/// A successful result in both output formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub json: String,
    pub text: String,
}

impl Output {
    fn new<T: Serialize + ?Sized>(value: &T, text: String) -> Self {
        Output {
            json: serde_json::to_string(value).expect("serialisable"),
            text,
        }
    }

    pub fn render(&self, format: Format) -> &str {
        match format {
            Format::Json => &self.json,
            Format::Text => &self.text,
        }
    }
}

fn answer_text(a: &MultiplicityAnswer) -> String {
    let mut s = match a.kind {
        AnswerKind::Exact { value } => value.to_string(),
        AnswerKind::Bounds { lower, upper } => format!("between {lower} and {upper}"),
        AnswerKind::NotCovered => "not covered".to_string(),
    };
    if a.ext_vanishes == Some(true) {
        s.push_str(", higher Ext vanishes");
    }
    let _ = write!(s, " [{}]", a.tag());
    s
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn expr_csupp(e: &Expr) -> CuspidalSupport {
    match e {
        Expr::Series(x) => csupp(x),
        Expr::Segment(x) => csupp(x),
        Expr::Generic(x) => csupp(x),
        Expr::Multisegment(x) => csupp(x),
    }
}

#[derive(Serialize)]
struct GoodPairJson {
    cond_a: bool,
    cond_b: bool,
    good: bool,
}

#[derive(Serialize)]
struct RearrangeJson<'a> {
    certificate: &'a gln_branching::RearrangementCertificate,
    result: String,
}

#[derive(Serialize)]
struct EpJson<'a> {
    answer: &'a MultiplicityAnswer,
    whittaker: [u32; 2],
    consistent: Option<bool>,
}

#[derive(Serialize)]
struct BoundJson {
    #[serde(flatten)]
    detail: BzBound,
    value: u64,
}

pub fn run_query(q: &Query) -> Result<Output, QueryError> {
    Ok(match q {
        Query::Mult { series, target } => {
            let a = multiplicity(series, target)?;
            Output::new(&a, answer_text(&a))
        }
        Query::Multz { series, segment } => {
            let a = multiplicity_z(series, segment)?;
            Output::new(&a, answer_text(&a))
        }
        Query::GoodPair { series, target } => {
            let v = is_good_pair(series, target)?;
            let text = if v.is_good() {
                "good".to_string()
            } else {
                format!("not good (cond_a {}, cond_b {})", v.cond_a, v.cond_b)
            };
            Output::new(
                &GoodPairJson {
                    cond_a: v.cond_a,
                    cond_b: v.cond_b,
                    good: v.is_good(),
                },
                text,
            )
        }
        Query::Bad { series, segment } => match bad_subsequence(series, segment)? {
            Some(hits) => Output::new(&true, format!("true (positions {})", join(hits, ", "))),
            None => Output::new(&false, "false".into()),
        },
        Query::Rearrange {
            series,
            segment,
            variant,
        } => {
            let cert = rearrange_good(series, segment, *variant)?;
            let result = cert.apply(series).to_string();
            let text = format!(
                "{result}  ({:?}, condition {:?}, {} swaps)",
                cert.case,
                cert.satisfied,
                cert.swaps.len()
            );
            Output::new(
                &RearrangeJson {
                    certificate: &cert,
                    result,
                },
                text,
            )
        }
        Query::Derive {
            series,
            level,
            side,
        } => {
            let sum = product_rule(series.factors(), *level, *side);
            let text = sum
                .terms()
                .map(|(t, c)| {
                    let body = if t.is_empty() {
                        "1".to_string()
                    } else {
                        join(t, " x ")
                    };
                    format!("{c}  {body}")
                })
                .collect::<Vec<_>>()
                .join("\n");
            Output::new(&sum, text)
        }
        Query::Dual(e) => {
            let s = match e {
                Expr::Series(x) => theta(x).to_string(),
                Expr::Segment(x) => x.dual().to_string(),
                Expr::Generic(x) => x.dual().to_string(),
                Expr::Multisegment(x) => x.dual().to_string(),
            };
            Output::new(&s, s.clone())
        }
        Query::Subquotients(n) => {
            let list = steinberg_subquotients(*n)?;
            let text = list
                .iter()
                .map(|d| match &d.embedding_params {
                    Some(p) => format!(
                        "{}  {}  a={} b={} c={}",
                        d.index, d.multisegment, p.a, p.b, p.c
                    ),
                    None => format!("{}  {}", d.index, d.multisegment),
                })
                .collect::<Vec<_>>()
                .join("\n");
            Output::new(&list, text)
        }
        Query::Nongeneric {
            multisegment,
            segment,
        } => {
            let v = nongeneric_quotient_test(multisegment, segment)?;
            Output::new(&v, v.to_string())
        }
        Query::Embed(p) => {
            let v = flag_embedding_exists(p);
            let rank = levi_ss_rank(p);
            Output::new(&v, format!("{v} (semisimple rank {rank})"))
        }
        Query::Partitions(n) => {
            let list = segment_partitions(*n);
            Output::new(&list, join(&list, "\n"))
        }
        Query::EpCheck { series, target } => {
            let a = multiplicity(series, target)?;
            let wh = [whittaker_dim(series), whittaker_dim(target)];
            let consistent = euler_poincare_check(series, target, &a);
            let verdict = match consistent {
                Some(true) => "consistent",
                Some(false) => "INCONSISTENT",
                None => "not applicable",
            };
            let text = format!(
                "{verdict}: hom {}, whittaker {} x {}",
                answer_text(&a),
                wh[0],
                wh[1]
            );
            Output::new(
                &EpJson {
                    answer: &a,
                    whittaker: wh,
                    consistent,
                },
                text,
            )
        }
        Query::Csupp(e) => {
            let s = expr_csupp(e);
            Output::new(&s, join(s.as_slice(), ", "))
        }
        Query::Bound { series, target } => {
            let detail = bz_bound_detail(series, &target.factors())?;
            let value = detail.value();
            let text = format!("{value} (A = {}, B = {})", detail.part_a, detail.part_b);
            Output::new(&BoundJson { detail, value }, text)
        }
        Query::Whittaker(e) => {
            let v = match e {
                Expr::Series(x) => whittaker_dim(x),
                Expr::Segment(_) | Expr::Generic(_) => 1,
                Expr::Multisegment(x) => whittaker_dim(x),
            };
            Output::new(&v, v.to_string())
        }
        Query::Jacquet {
            segment,
            level,
            side,
        } => {
            let shadow = jacquet_shadow(segment, *level, *side)?;
            let text = match &shadow {
                None => "0".to_string(),
                Some(s) => {
                    let part = |x: &Option<Segment>| {
                        x.as_ref().map_or("1".to_string(), |d| format!("Q[{d}]"))
                    };
                    format!("{} ⊗ {}", part(&s.left), part(&s.right))
                }
            };
            Output::new(&shadow, text)
        }
    })
}

/// Exit code and rendered text for a single command.
pub fn execute(cmd: &Command, format: Format) -> (i32, String) {
    match Query::from_command(cmd).and_then(|q| run_query(&q)) {
        Ok(out) => (0, out.render(format).to_string()),
        Err(e) => (
            e.exit_code(),
            match format {
                Format::Json => e.to_json(),
                Format::Text => e.to_text(),
            },
        ),
    }
}

#[derive(Parser)]
#[command(name = "glbranch", no_binary_name = true)]
struct BatchLine {
    #[command(subcommand)]
    command: Command,
}

/// Runs one query per nonblank, non-`#` line. Each output line is a JSON
/// object with the 1-based line number, the exit code and the result or
/// error. The overall code is the largest per-line code.
pub fn run_batch(src: &str) -> (i32, Vec<String>) {
    let mut code = 0;
    let mut lines = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let result = match shlex::split(line) {
            None => Err(QueryError::Usage("unbalanced quotes".into())),
            Some(words) => match BatchLine::try_parse_from(words) {
                Err(e) => Err(QueryError::Usage(e.render().to_string().trim().to_string())),
                Ok(b) => Query::from_command(&b.command).and_then(|q| run_query(&q)),
            },
        };
        let (c, body) = match result {
            Ok(out) => (0, out.json),
            Err(e) => (e.exit_code(), e.to_json()),
        };
        code = code.max(c);
        lines.push(format!(
            "{{\"line\":{},\"query\":{},\"exit\":{c},\"result\":{body}}}",
            idx + 1,
            serde_json::to_string(line).expect("serialisable"),
        ));
    }
    (code, lines)
}
