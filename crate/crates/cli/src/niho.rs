use clap::Args;
use ovalbent::geometry::{oval_from_g, LineSetJson};
use ovalbent::niho::{
    bent_from_g, dual_budaghyan, dual_product_formula, k_duality, line_oval_from_g, lines_of_g,
    NihoDescriptor, NihoFamily, NihoSpec,
};
use ovalbent::{FieldElement, FieldParams};

use crate::report::{read_input, CmdResult, Context, Failure, FieldInfo, RunReport};
use crate::NihoFlags;

#[derive(Args, Debug)]
pub struct NihoArgs {
    #[command(flatten)]
    pub flags: NihoFlags,
}

pub fn resolve(flags: &NihoFlags) -> CmdResult<(FieldParams, NihoSpec)> {
    let desc = match &flags.spec {
        Some(path) => {
            let mut d: NihoDescriptor = serde_json::from_str(&read_input(path)?)?;
            if let Some(m) = flags.m {
                d.m = m;
            }
            d
        }
        None => NihoDescriptor {
            family: NihoFamily::parse(
                flags
                    .family
                    .as_deref()
                    .ok_or_else(|| Failure::usage("--family is required"))?,
            )?,
            m: flags.m.ok_or_else(|| Failure::usage("--m is required"))?,
            a_index: flags.a_index,
            r: flags.r,
            alpha2_index: flags.alpha2_index,
        },
    };
    let params = FieldParams::new(desc.m)?;
    let spec = NihoSpec::from_descriptor(&desc, &params)?;
    Ok((params, spec))
}

pub fn run(ctx: &Context, report: &mut RunReport, args: &NihoArgs) -> CmdResult<()> {
    let (p, spec) = resolve(&args.flags)?;
    report.field = Some(FieldInfo::of(&p));
    report.detail("spec", spec.descriptor(&p));
    ctx.write(
        report,
        "spec.json",
        &serde_json::to_string_pretty(&spec.descriptor(&p))?,
    )?;

    let f = spec.polynomial(&p)?.truth_table(&p);
    ctx.write(report, "f.tt", &f.to_file_string())?;
    let g = spec.g(&p)?;
    ctx.write(report, "g.csv", &g.to_csv(&p))?;
    report.agree("g_matches_polynomial", bent_from_g(&g, &p) == f);

    let d = k_duality(&p);
    let spectrum = f.walsh_transform(&d);
    let target = 1i64 << p.m();
    let bent = spectrum.values().iter().all(|w| w.abs() == target);
    report.verdict("bent", bent);
    report.detail("degree", f.degree());
    report.detail("abs_spectrum", spectrum.abs_histogram());
    if !bent {
        let b = spectrum
            .values()
            .iter()
            .position(|w| w.abs() != target)
            .expect("not flat");
        report.witness(format!("|W({b})| = {} != 2^m", spectrum.get(b).abs()));
        return Ok(());
    }

    let lines = lines_of_g(&g, &p);
    ctx.write(
        report,
        "lines.json",
        &serde_json::to_string_pretty(&LineSetJson::from_lines(&p, &lines))?,
    )?;
    let line_oval = report.check("line_oval", line_oval_from_g(&g, &p));
    if let Some(lo) = &line_oval {
        report.detail("e_size", lo.e_size());
    }
    if let Some(oval) = report.check("hyperoval", oval_from_g(&p, &g)) {
        ctx.write(
            report,
            "oval.json",
            &serde_json::to_string_pretty(&oval.to_json(&p))?,
        )?;
    }

    let walsh = f.dual(&d)?;
    ctx.write(report, "dual.tt", &walsh.to_file_string())?;
    report.agree("walsh_vs_product", dual_product_formula(&g, &p)? == walsh);
    if let Some(lo) = &line_oval {
        report.agree("walsh_vs_chi_swap", lo.dual_function(&p) == walsh);
    }
    if spec.family == NihoFamily::LeanderR
        && spec.r == 2
        && p.trace_rel(spec.a) == FieldElement::ONE
    {
        report.agree("walsh_vs_budaghyan", dual_budaghyan(&spec, &p)? == walsh);
    }
    Ok(())
}
