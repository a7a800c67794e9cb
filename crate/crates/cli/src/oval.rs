use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use ovalbent::geometry::{
    bent_from_oval, dual_lines_to_points, dual_points_to_lines, verify_hyperoval, Catalog,
    LineOval, LineSetJson, Oval, OvalJson, ProjectivePoint,
};
use ovalbent::{FieldParams, TowerElement};

use crate::report::{read_input, CmdResult, Context, Failure, FieldInfo, RunReport};

#[derive(Subcommand, Debug)]
pub enum OvalCommand {
    /// Check an oval (q+1 points) or hyperoval (q+2 points); for an affine
    /// oval with nucleus 0 also build and test its bent function.
    Verify(VerifyArgs),
    /// Points {v} (JSON {m, points}) to the lines L(v, 1).
    ToLines {
        #[arg(long)]
        points: PathBuf,
    },
    /// Lines (JSON {m, lines: [{u, mu}]}) back to their dual points.
    ToPoints {
        #[arg(long)]
        lines: PathBuf,
    },
    /// Run every catalog entry defined at this m.
    Catalog {
        #[arg(long)]
        m: u32,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// subiaco, adelaide, fisher_schmidt or conic_like_S.
    #[arg(long, conflicts_with = "points", required_unless_present = "points")]
    catalog: Option<String>,
    /// JSON point set {m, points, infinite?}.
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long, required_unless_present = "points")]
    m: Option<u32>,
}

fn label(p: &FieldParams, pt: ProjectivePoint) -> String {
    match pt {
        ProjectivePoint::Affine(x) => x.0.to_string(),
        ProjectivePoint::Infinite(j) => format!("inf:{}", p.unit_circle()[j].0),
    }
}

fn read_points(path: &Path) -> CmdResult<(FieldParams, Vec<ProjectivePoint>)> {
    let json: OvalJson = serde_json::from_str(&read_input(path)?)?;
    let p = FieldParams::new(json.m)?;
    let pts = json.to_points(&p)?;
    Ok((p, pts))
}

/// Verifies q+1 or q+2 points; prefix names the verdicts.
fn verify_points(
    ctx: &Context,
    report: &mut RunReport,
    p: &FieldParams,
    points: Vec<ProjectivePoint>,
    prefix: &str,
) -> CmdResult<()> {
    let q = p.q();
    let name = |v: &str| {
        if prefix.is_empty() {
            v.to_string()
        } else {
            format!("{prefix}.{v}")
        }
    };
    if points.len() == q + 2 {
        let bad = verify_hyperoval(p, &points)?;
        report.verdict(&name("hyperoval"), bad.is_none());
        if let Some(w) = bad {
            report.witness(format!("collinear: {}", w.map(|x| label(p, x)).join(", ")));
        }
        return Ok(());
    }
    if points.len() != q + 1 {
        return Err(Failure::usage(format!(
            "expected {} or {} points, got {}",
            q + 1,
            q + 2,
            points.len()
        )));
    }
    let Some(oval) = report.check(&name("oval"), Oval::new(p, points)) else {
        return Ok(());
    };
    report.detail(&name("nucleus"), label(p, oval.nucleus()));
    report.verdict(
        &name("hyperoval"),
        verify_hyperoval(p, &oval.hyperoval())?.is_none(),
    );
    if oval.is_affine() && oval.nucleus() == ProjectivePoint::Affine(TowerElement::ZERO) {
        if let Some(f) = report.check(&name("bent_from_oval"), bent_from_oval(p, &oval)) {
            report.verdict(&name("bent"), f.is_bent()?);
            let file = if prefix.is_empty() {
                "bent.tt".to_string()
            } else {
                format!("{prefix}.bent.tt")
            };
            ctx.write(report, &file, &f.to_file_string())?;
        }
    }
    Ok(())
}

pub fn run(ctx: &Context, report: &mut RunReport, cmd: OvalCommand) -> CmdResult<()> {
    match cmd {
        OvalCommand::Verify(a) => {
            let (p, points) = match (&a.catalog, &a.points) {
                (Some(name), _) => {
                    let p = FieldParams::new(a.m.expect("clap requires --m with --catalog"))?;
                    let pts = Catalog::parse(name)?.points(&p)?;
                    (p, pts.into_iter().map(ProjectivePoint::Affine).collect())
                }
                (None, Some(path)) => read_points(path)?,
                (None, None) => unreachable!("clap requires a source"),
            };
            report.field = Some(FieldInfo::of(&p));
            ctx.write(
                report,
                "oval.json",
                &serde_json::to_string_pretty(&OvalJson::from_points(&p, &points))?,
            )?;
            verify_points(ctx, report, &p, points, "")
        }
        OvalCommand::ToLines { points } => {
            let (p, pts) = read_points(&points)?;
            report.field = Some(FieldInfo::of(&p));
            let affine: Vec<TowerElement> = pts
                .iter()
                .map(|x| {
                    x.affine()
                        .ok_or_else(|| Failure::usage("points at infinity have no dual line"))
                })
                .collect::<CmdResult<_>>()?;
            let lines = dual_points_to_lines(&p, &affine)?;
            let json = LineSetJson::from_lines(&p, &lines);
            ctx.write(report, "lines.json", &serde_json::to_string_pretty(&json)?)?;
            report.detail("lines", &json);
            if let Some(lo) = report.check("line_oval", LineOval::new(&p, lines)) {
                report.detail("e_size", lo.e_size());
            }
            Ok(())
        }
        OvalCommand::ToPoints { lines } => {
            let json: LineSetJson = serde_json::from_str(&read_input(&lines)?)?;
            let p = FieldParams::new(json.m)?;
            report.field = Some(FieldInfo::of(&p));
            let lines = json.to_lines(&p)?;
            report.check("line_oval", LineOval::new(&p, lines.clone()));
            let pts = dual_lines_to_points(&p, &lines)?;
            let out = OvalJson::from_points(
                &p,
                &pts.iter()
                    .map(|&x| ProjectivePoint::Affine(x))
                    .collect::<Vec<_>>(),
            );
            ctx.write(report, "oval.json", &serde_json::to_string_pretty(&out)?)?;
            report.detail("points", &out);
            report.check("oval", Oval::from_affine(&p, &pts));
            Ok(())
        }
        OvalCommand::Catalog { m } => {
            let p = FieldParams::new(m)?;
            report.field = Some(FieldInfo::of(&p));
            let mut skipped = Vec::new();
            for c in Catalog::ALL {
                match c.points(&p) {
                    Ok(pts) => {
                        let pts = pts.into_iter().map(ProjectivePoint::Affine).collect();
                        verify_points(ctx, report, &p, pts, c.name())?;
                    }
                    Err(e) => skipped.push(format!("{}: {e}", c.name())),
                }
            }
            if !skipped.is_empty() {
                report.detail("skipped", skipped);
            }
            Ok(())
        }
    }
}
