use std::path::PathBuf;

use clap::{Args, ValueEnum};
use ovalbent::boolfn::{BooleanFunction, Duality};
use ovalbent::gf::BinaryField;
use ovalbent::niho::{dual_budaghyan, dual_product_formula, k_duality, line_oval_from_g};
use ovalbent::spreadbent::{DualMethod, SpreadBentSpec};

use crate::report::{read_input, write_output, CmdResult, Context, Failure, FieldInfo, RunReport};
use crate::spread::{load, parse_g, KindParams, PqfArgs};
use crate::NihoFlags;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Walsh,
    Product,
    Budaghyan,
    ChiSwap,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Walsh => "walsh",
            Method::Product => "product",
            Method::Budaghyan => "budaghyan",
            Method::ChiSwap => "chi-swap",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inner {
    /// x . y on bit vectors.
    Dot,
    /// Tr(xy) on GF(2^k) with the default polynomial.
    Trace,
}

/// The function is given by Niho flags, by --pqf and --g, or by --input.
#[derive(Args, Debug)]
pub struct DualArgs {
    #[command(flatten)]
    niho: NihoFlags,
    /// Prequasifield source for a spread function: file, `-`, field, kantor or luneburg.
    #[arg(long, requires = "g", conflicts_with_all = ["family", "spec", "input"])]
    pqf: Option<String>,
    /// G for the spread function: square-star, sqrt, sqrt-diag or table:<file>.
    #[arg(long)]
    g: Option<String>,
    #[arg(long, default_value_t = 0)]
    mu: u64,
    #[arg(long, value_delimiter = ',')]
    degrees: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    lambdas: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    zetas: Vec<u64>,
    /// Truth-table file; only the Walsh route applies.
    #[arg(long, conflicts_with_all = ["family", "spec"])]
    input: Option<PathBuf>,
    /// Inner product for --input.
    #[arg(long, value_enum, default_value_t = Inner::Dot)]
    inner: Inner,
    #[arg(long, value_enum, default_value_t = Method::Walsh)]
    method: Method,
    /// Further routes that must give the same table.
    #[arg(long, value_enum, value_delimiter = ',')]
    cross_check: Vec<Method>,
    /// Output file for the dual truth table.
    #[arg(long)]
    out: Option<PathBuf>,
}

type Route<'a> = Box<dyn Fn(Method) -> CmdResult<BooleanFunction> + 'a>;

fn unsupported(m: Method, what: &str) -> Failure {
    Failure::usage(format!("method {} does not apply to {what}", m.name()))
}

pub fn run(ctx: &Context, report: &mut RunReport, a: &DualArgs) -> CmdResult<()> {
    let route: Route = if let Some(pqf) = &a.pqf {
        let q = load(&PqfArgs {
            pqf: pqf.clone(),
            params: KindParams {
                m: a.niho.m,
                degrees: a.degrees.clone(),
                lambdas: a.lambdas.clone(),
                zetas: a.zetas.clone(),
            },
        })?;
        let g = parse_g(a.g.as_deref().expect("clap requires --g"), &q)?;
        let spec = SpreadBentSpec::new(q, g, a.mu)?;
        Box::new(move |m| {
            let method = match m {
                Method::Walsh => DualMethod::Walsh,
                Method::Product => DualMethod::Product,
                Method::ChiSwap => DualMethod::ChiSwap,
                Method::Budaghyan => return Err(unsupported(m, "spread functions")),
            };
            Ok(spec.dual(method)?)
        })
    } else if let Some(path) = &a.input {
        let f = BooleanFunction::parse_file(&read_input(path)?)?;
        let d = match a.inner {
            Inner::Dot => Duality::dot(f.k()),
            Inner::Trace => Duality::field_trace(&BinaryField::new(f.k())?),
        };
        Box::new(move |m| match m {
            Method::Walsh => Ok(f.dual(&d)?),
            _ => Err(unsupported(m, "a bare truth table")),
        })
    } else {
        let (p, spec) = crate::niho::resolve(&a.niho)?;
        report.field = Some(FieldInfo::of(&p));
        let g = spec.g(&p)?;
        let f = spec.polynomial(&p)?.truth_table(&p);
        Box::new(move |m| {
            Ok(match m {
                Method::Walsh => f.dual(&k_duality(&p))?,
                Method::Product => dual_product_formula(&g, &p)?,
                Method::Budaghyan => dual_budaghyan(&spec, &p)?,
                Method::ChiSwap => line_oval_from_g(&g, &p)?.dual_function(&p),
            })
        })
    };
    let dual = route(a.method)?;
    report.detail("method", a.method.name());
    report.detail("weight", dual.weight());
    if let Some(path) = &a.out {
        write_output(path, &dual.to_file_string())?;
    }
    ctx.write(report, "dual.tt", &dual.to_file_string())?;
    for &other in &a.cross_check {
        let d = route(other)?;
        report.agree(
            &format!("{}_vs_{}", a.method.name(), other.name()),
            d == dual,
        );
    }
    Ok(())
}
