//! Command-line surface over the deformation-space library: angle solves,
//! plane layouts, sphere lifts and projections, Delaunay-preserving morphs,
//! disconnection sweeps, and exporters.
//!
//! Every command is a deterministic function of its files and flags; the
//! only randomness lives behind --random-disk, which is fixed by --seed.
//! Exit codes: 0 success, 2 validation error, 3 solver failure, 4
//! inconclusive sweep.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use delaunay_deform::angles::AngleStructure;
use delaunay_deform::disconnection::{rectangle_sweep_with_margin, torus_sweep_with_margin};
use delaunay_deform::gen::random_delaunay_disk;
use delaunay_deform::io::{export_heatmap_svg, export_obj, export_svg, SvgOptions};
use delaunay_deform::morph::Realization;
use delaunay_deform::varopt::{FiberProblem, SolveStatus, DEFAULT_KKT_TOL};
use delaunay_deform::{
    develop, lift_to_sphere, load_realization, morph_polygon, morph_sphere, morph_sphere_origin,
    normalize_pose, project_to_plane, save_realization, Error, MorphPath, PlanarTriangulation,
    RealizedTriangulation, SphericalTriangulation, SweepReport, TriComplex, Verdict,
};

#[derive(Parser)]
#[command(
    name = "delaunay-deform",
    version,
    about = "Deformation spaces of Delaunay triangulations: solve, lay out, lift, morph, sweep"
)]
struct Cli {
    /// Seed for --random-disk instance generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance override: solver first-order residual for `theta`, sweep
    /// strictness margin for `sweep-*`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Summarize a realization file.
    Info(InfoArgs),
    /// Recover the angle structure that maximizes the energy on the fiber
    /// of an edge invariant.
    Theta(ThetaArgs),
    /// Develop an angle structure into a planar realization.
    Layout(LayoutArgs),
    /// Lift a planar Delaunay triangulation to an inscribed polyhedron.
    Lift(LiftArgs),
    /// Project an inscribed polyhedron to the plane through a vertex.
    Project(ProjectArgs),
    /// Sample a Delaunay-preserving morph between two realizations.
    Morph(MorphArgs),
    /// Sweep the two-free-vertex rectangle family for disconnection.
    SweepRectangle(SweepRectangleArgs),
    /// Sweep the one-free-vertex flat torus family for disconnection.
    SweepTorus(SweepTorusArgs),
    /// Export a realization to SVG (planar) or OBJ (spherical).
    Export(ExportArgs),
}

#[derive(Args)]
struct InfoArgs {
    /// Realization file to summarize.
    #[arg(long, conflicts_with = "random_disk")]
    input: Option<PathBuf>,
    /// Summarize a seeded random Delaunay disk with this many vertices
    /// instead of reading a file.
    #[arg(long)]
    random_disk: Option<usize>,
}

#[derive(Args)]
struct ThetaArgs {
    /// Complex file (faces, surface, optional lifts).
    #[arg(long)]
    complex: PathBuf,
    /// Edge invariant file {"edges": [...], "boundary_vertices": [...]}.
    #[arg(long)]
    alpha: PathBuf,
    /// Output angle file (flat JSON array, one angle per face corner).
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct LayoutArgs {
    #[arg(long)]
    complex: PathBuf,
    /// Angle file as written by `theta`.
    #[arg(long)]
    theta: PathBuf,
    /// Output planar realization file.
    #[arg(short, long)]
    output: PathBuf,
    /// Also render the layout.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct LiftArgs {
    /// Planar realization file; must be strictly Delaunay.
    #[arg(long)]
    input: PathBuf,
    /// Output spherical realization file.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct ProjectArgs {
    /// Spherical realization file.
    #[arg(long)]
    input: PathBuf,
    /// Vertex whose star is removed; the rest projects from its pole.
    #[arg(long)]
    pole: usize,
    /// Output planar realization file.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MorphMode {
    Polygon,
    Sphere,
    SphereOrigin,
}

#[derive(Args)]
struct MorphArgs {
    #[arg(long, value_enum)]
    mode: MorphMode,
    /// Start realization (planar for polygon mode, spherical otherwise).
    #[arg(long)]
    a: PathBuf,
    /// End realization of the same kind and combinatorics.
    #[arg(long)]
    b: PathBuf,
    /// Projection vertex for the sphere modes.
    #[arg(long)]
    v0: Option<usize>,
    /// Anchor edge "u,v" pinning the similarity of each sample.
    #[arg(long)]
    anchor: String,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Output directory: per-sample realizations plus defects.csv.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SweepRectangleArgs {
    /// Rectangle width (height is 1).
    #[arg(long)]
    width: f64,
    #[arg(long, default_value_t = 100)]
    grid: usize,
    /// Write the full report as JSON.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Render the defect landscape of the point-reflected slice.
    #[arg(long)]
    heatmap: Option<PathBuf>,
}

#[derive(Args)]
struct SweepTorusArgs {
    /// Torus height (circumference is 1); the grid must be even.
    #[arg(long)]
    height: f64,
    #[arg(long, default_value_t = 128)]
    grid: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    heatmap: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long, conflicts_with = "random_disk")]
    input: Option<PathBuf>,
    /// Export a seeded random Delaunay disk with this many vertices.
    #[arg(long)]
    random_disk: Option<usize>,
    /// SVG output path (planar realizations).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// OBJ output path (spherical realizations).
    #[arg(long)]
    obj: Option<PathBuf>,
    /// Write the realization itself as JSON (useful with --random-disk).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write just the complex as JSON.
    #[arg(long)]
    complex: Option<PathBuf>,
    /// Write the edge invariant of a planar realization as JSON.
    #[arg(long)]
    alpha: Option<PathBuf>,
    /// Overlay circumcircles in the SVG.
    #[arg(long)]
    circumcircles: bool,
    /// Color SVG edges by Delaunay defect.
    #[arg(long)]
    color_defects: bool,
}

/// A failure with its process exit code.
struct Failure {
    code: i32,
    msg: String,
}

fn fail(code: i32, msg: impl Into<String>) -> Failure {
    Failure {
        code,
        msg: msg.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::SolverFailure { .. } | Error::NormalizationFailure(_) => 3,
            Error::InconclusiveSweep(_) => 4,
            _ => 2,
        };
        fail(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        fail(2, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        fail(2, e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    });
}

fn run(cli: Cli) -> CliResult {
    match cli.cmd {
        Cmd::Info(a) => info(a, cli.seed),
        Cmd::Theta(a) => theta(a, cli.tol),
        Cmd::Layout(a) => layout(a),
        Cmd::Lift(a) => lift(a),
        Cmd::Project(a) => project(a),
        Cmd::Morph(a) => morph(a),
        Cmd::SweepRectangle(a) => {
            let rep = rectangle_sweep_with_margin(
                a.width,
                a.grid,
                cli.tol.unwrap_or(delaunay_deform::disconnection::SWEEP_MARGIN),
            )?;
            finish_sweep(rep, a.output.as_deref(), a.heatmap.as_deref())
        }
        Cmd::SweepTorus(a) => {
            let rep = torus_sweep_with_margin(
                a.height,
                a.grid,
                cli.tol.unwrap_or(delaunay_deform::disconnection::SWEEP_MARGIN),
            )?;
            finish_sweep(rep, a.output.as_deref(), a.heatmap.as_deref())
        }
        Cmd::Export(a) => export(a, cli.seed),
    }
}

fn load(path: &Path) -> Result<RealizedTriangulation, Failure> {
    load_realization(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn load_planar(path: &Path) -> Result<PlanarTriangulation, Failure> {
    match load(path)? {
        RealizedTriangulation::Planar(t) => Ok(t),
        r => Err(fail(
            2,
            format!("{}: expected a planar realization, got {}", path.display(), r.kind()),
        )),
    }
}

fn load_spherical(path: &Path) -> Result<SphericalTriangulation, Failure> {
    match load(path)? {
        RealizedTriangulation::Spherical(t) => Ok(t),
        r => Err(fail(
            2,
            format!(
                "{}: expected a spherical realization, got {}",
                path.display(),
                r.kind()
            ),
        )),
    }
}

fn pick_input(
    input: &Option<PathBuf>,
    random_disk: Option<usize>,
    seed: u64,
) -> Result<RealizedTriangulation, Failure> {
    match (input, random_disk) {
        (Some(p), None) => load(p),
        (None, Some(n)) => Ok(RealizedTriangulation::Planar(random_delaunay_disk(n, seed)?)),
        _ => Err(fail(2, "give exactly one of --input or --random-disk")),
    }
}

fn info(a: InfoArgs, seed: u64) -> CliResult {
    let r = pick_input(&a.input, a.random_disk, seed)?;
    let t = r.complex();
    println!("kind: {}", r.kind());
    println!("surface: {:?}", t.surface());
    println!("vertices: {}", t.vertex_count());
    println!("edges: {}", t.edge_count());
    println!("faces: {}", t.face_count());
    match &r {
        RealizedTriangulation::Planar(p) => {
            println!("min defect: {}", p.min_defect());
            println!("strictly delaunay: {}", p.is_delaunay());
        }
        RealizedTriangulation::Spherical(s) => {
            println!("min defect: {}", s.min_defect());
            println!("strictly delaunay: {}", s.is_delaunay());
            println!("origin inside: {}", s.origin_inside());
        }
        RealizedTriangulation::Torus(t) => {
            println!("min defect: {}", t.min_defect());
            println!("strictly delaunay: {}", t.is_delaunay());
        }
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let s = std::fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn theta(a: ThetaArgs, tol: Option<f64>) -> CliResult {
    let t: TriComplex = read_json(&a.complex)?;
    let alpha = read_json(&a.alpha)?;
    let mut problem = FiberProblem::new(&t, alpha)?;
    problem.kkt_tol = tol.unwrap_or(DEFAULT_KKT_TOL);
    let sol = problem.solve()?;
    match sol.status {
        SolveStatus::Converged => {}
        SolveStatus::Infeasible => return Err(fail(2, "the invariant has an empty fiber")),
        SolveStatus::IterationLimit => {
            return Err(fail(
                3,
                format!("no convergence within {} iterations", sol.iterations),
            ))
        }
    }
    let mut s = serde_json::to_string_pretty(&sol.theta)?;
    s.push('\n');
    std::fs::write(&a.output, s)?;
    println!("iterations: {}", sol.iterations);
    println!("first-order residual: {}", sol.kkt_residual);
    println!("constraint residual: {}", sol.constraint_residual);
    Ok(())
}

fn layout(a: LayoutArgs) -> CliResult {
    let t: TriComplex = read_json(&a.complex)?;
    let th: AngleStructure = read_json(&a.theta)?;
    let dev = develop(&t, &th)?;
    // Center on the vertex centroid: the development anchors a vertex at
    // the exact origin, which would lift to the exact south pole and
    // degenerate the pole spokes of a later lift.
    let n = dev.positions.len() as f64;
    let c = dev
        .positions
        .iter()
        .fold([0.0, 0.0], |m, p| [m[0] + p[0] / n, m[1] + p[1] / n]);
    let centered = dev
        .positions
        .iter()
        .map(|p| [p[0] - c[0], p[1] - c[1]])
        .collect();
    let tri = PlanarTriangulation::new(t, centered)?;
    save_realization(&a.output, &RealizedTriangulation::Planar(tri.clone()))?;
    if let Some(svg) = &a.svg {
        std::fs::write(svg, export_svg(&tri, &SvgOptions::default()))?;
    }
    println!("closure error: {}", dev.closure_error);
    println!("min defect: {}", tri.min_defect());
    Ok(())
}

fn lift(a: LiftArgs) -> CliResult {
    let tri = load_planar(&a.input)?;
    let sph = lift_to_sphere(&tri)?;
    save_realization(&a.output, &RealizedTriangulation::Spherical(sph.clone()))?;
    println!("vertices: {}", sph.complex.vertex_count());
    println!("min defect: {}", sph.min_defect());
    println!("origin inside: {}", sph.origin_inside());
    Ok(())
}

fn project(a: ProjectArgs) -> CliResult {
    let sph = load_spherical(&a.input)?;
    if a.pole >= sph.complex.vertex_count() {
        return Err(fail(2, format!("no vertex {}", a.pole)));
    }
    let (posed, _) = normalize_pose(&sph, a.pole)?;
    let (tri, map) = project_to_plane(&posed, a.pole)?;
    save_realization(&a.output, &RealizedTriangulation::Planar(tri.clone()))?;
    let ids: Vec<String> = map.iter().map(|v| v.to_string()).collect();
    println!("vertex map: {}", ids.join(" "));
    println!("min defect: {}", tri.min_defect());
    Ok(())
}

fn parse_anchor(s: &str) -> Result<(usize, usize), Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    let err = || fail(2, format!("anchor {s:?} is not \"u,v\""));
    if parts.len() != 2 {
        return Err(err());
    }
    let u = parts[0].trim().parse().map_err(|_| err())?;
    let v = parts[1].trim().parse().map_err(|_| err())?;
    Ok((u, v))
}

fn write_morph_outputs(path: &MorphPath, dir: &Path) -> CliResult {
    std::fs::create_dir_all(dir)?;
    let mut csv = String::from("index,t,min_defect,solver_residual\n");
    for (i, s) in path.samples.iter().enumerate() {
        let r = match &s.realization {
            Realization::Planar(p) => RealizedTriangulation::Planar(p.clone()),
            Realization::Spherical(p) => RealizedTriangulation::Spherical(p.clone()),
        };
        save_realization(&dir.join(format!("sample_{i:04}.json")), &r)?;
        match &s.realization {
            Realization::Planar(p) => {
                let opt = SvgOptions {
                    color_by_defect: true,
                    ..SvgOptions::default()
                };
                std::fs::write(dir.join(format!("sample_{i:04}.svg")), export_svg(p, &opt))?;
            }
            Realization::Spherical(p) => {
                std::fs::write(dir.join(format!("sample_{i:04}.obj")), export_obj(p))?;
            }
        }
        let _ = writeln!(csv, "{i},{},{},{}", s.t, s.min_defect, s.solver_residual);
    }
    std::fs::write(dir.join("defects.csv"), csv)?;
    println!("samples: {}", path.len());
    println!("path min defect: {}", path.min_defect());
    Ok(())
}

fn morph(a: MorphArgs) -> CliResult {
    let anchor = parse_anchor(&a.anchor)?;
    let need_v0 = || fail(2, "--v0 is required for the sphere modes");
    let path = match a.mode {
        MorphMode::Polygon => {
            let ta = load_planar(&a.a)?;
            let tb = load_planar(&a.b)?;
            morph_polygon(&ta, &tb, anchor, a.samples)?
        }
        MorphMode::Sphere => {
            let ta = load_spherical(&a.a)?;
            let tb = load_spherical(&a.b)?;
            let v0 = a.v0.ok_or_else(need_v0)?;
            morph_sphere(&ta, &tb, v0, anchor, a.samples)?.0
        }
        MorphMode::SphereOrigin => {
            let ta = load_spherical(&a.a)?;
            let tb = load_spherical(&a.b)?;
            let v0 = a.v0.ok_or_else(need_v0)?;
            morph_sphere_origin(&ta, &tb, v0, anchor, a.samples)?
        }
    };
    write_morph_outputs(&path, &a.output)
}

fn finish_sweep(rep: SweepReport, output: Option<&Path>, heatmap: Option<&Path>) -> CliResult {
    println!("family: {}", rep.family);
    println!(
        "grid: {} (refined {}), margin {}",
        rep.grid_n, rep.refined_grid_n, rep.margin
    );
    println!(
        "components: {} (sizes {:?}), refined count {}, stable: {}",
        rep.component_count, rep.component_sizes, rep.refined_component_count, rep.stable
    );
    for w in &rep.witnesses {
        let coords: Vec<String> = w.coords.iter().map(|c| c.to_string()).collect();
        println!(
            "witness {}: ({}) margin {}",
            w.component,
            coords.join(", "),
            w.margin
        );
    }
    let blocked = rep
        .separator
        .iter()
        .filter(|p| p.degenerate || p.weakest_defect.unwrap_or(0.0) < -rep.margin)
        .count();
    let worst = rep
        .separator
        .iter()
        .filter_map(|p| p.weakest_defect)
        .fold(f64::NEG_INFINITY, f64::max);
    println!(
        "separator: {blocked}/{} points blocked, weakest violation {}",
        rep.separator.len(),
        worst
    );

    if let Some(path) = output {
        let mut s = serde_json::to_string_pretty(&rep)?;
        s.push('\n');
        std::fs::write(path, s)?;
    }
    if let Some(path) = heatmap {
        std::fs::write(path, export_heatmap_svg(&rep))?;
    }
    match &rep.verdict {
        Verdict::Pass => {
            println!("verdict: PASS");
            Ok(())
        }
        Verdict::Inconclusive(why) => {
            println!("verdict: INCONCLUSIVE ({why})");
            Err(fail(4, format!("inconclusive sweep: {why}")))
        }
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(std::fs::write(path, s)?)
}

fn export(a: ExportArgs, seed: u64) -> CliResult {
    let r = pick_input(&a.input, a.random_disk, seed)?;
    if a.svg.is_none() && a.obj.is_none() && a.json.is_none() && a.complex.is_none() && a.alpha.is_none() {
        return Err(fail(2, "nothing to do: give --svg, --obj, --json, --complex, or --alpha"));
    }
    if let Some(path) = &a.json {
        save_realization(path, &r)?;
    }
    if let Some(path) = &a.complex {
        write_json(path, r.complex())?;
    }
    if let Some(path) = &a.alpha {
        let RealizedTriangulation::Planar(tri) = &r else {
            return Err(fail(2, format!("the edge invariant needs a planar realization, got {}", r.kind())));
        };
        write_json(path, &tri.invariant())?;
    }
    if let Some(path) = &a.svg {
        let RealizedTriangulation::Planar(tri) = &r else {
            return Err(fail(2, format!("SVG export needs a planar realization, got {}", r.kind())));
        };
        let opt = SvgOptions {
            circumcircles: a.circumcircles,
            color_by_defect: a.color_defects,
            ..SvgOptions::default()
        };
        std::fs::write(path, export_svg(tri, &opt))?;
    }
    if let Some(path) = &a.obj {
        let RealizedTriangulation::Spherical(tri) = &r else {
            return Err(fail(2, format!("OBJ export needs a spherical realization, got {}", r.kind())));
        };
        std::fs::write(path, export_obj(tri))?;
    }
    Ok(())
}
