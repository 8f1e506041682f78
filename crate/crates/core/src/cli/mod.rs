//! Command-line front end: `render`, `eval`, `compare` and `factor`.

mod mapspec;
mod pgm;

use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use thiserror::Error;

use crate::extensions::{
    build_extension, conformal_natural_extension, radial_extension, sample_points,
    visual_extension, Extension, ExtensionError, ExtensionMethod, ExtensionParams,
    SphericalQuadrature,
};
use crate::geometry::{hyperbolic_distance, BallPoint, GeometryError, HalfSpacePoint, SpherePoint};
use crate::julia3d::{render_slice, render_volume, slice_stats, JuliaError, SliceSpec, VolumeSpec};
use crate::maps::{enumerate_pairings, factor_rational, MapError, MobiusFactorization};

pub use mapspec::{format_complex, parse_complex, parse_map_spec, MapSpec};
pub use pgm::{pgm_bytes, pixel_value, write_pgm};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot parse `{token}`: {message}")]
    Parse { token: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error(transparent)]
    Julia(#[from] JuliaError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

#[derive(Debug, Parser)]
#[command(name = "hypext", version, about = "Extensions of rational maps to hyperbolic 3-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a slice or a box of the spatial filled Julia set of Q̂_c.
    Render(RenderArgs),
    /// Evaluate an extension at one point.
    Eval(EvalArgs),
    /// Hyperbolic distance between two extensions over sampled points.
    Compare(CompareArgs),
    /// Factor a rational map into Möbius maps.
    Factor(FactorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pgm,
    Csv,
}

fn parse_reals<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.parse::<f64>().map_err(|_| format!("`{p}` is not a number")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| format!("expected {N} comma-separated numbers"))
}

fn parse_window(s: &str) -> Result<[f64; 4], String> {
    parse_reals::<4>(s)
}

fn parse_point(s: &str) -> Result<[f64; 3], String> {
    parse_reals::<3>(s)
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once('x').ok_or("expected WxH")?;
    let w = w.parse().map_err(|_| format!("`{w}` is not a width"))?;
    let h = h.parse().map_err(|_| format!("`{h}` is not a height"))?;
    Ok((w, h))
}

fn parse_plane(s: &str) -> Result<f64, String> {
    let v = s.strip_prefix("y=").ok_or("expected y=<value>")?;
    v.parse().map_err(|_| format!("`{v}` is not a number"))
}

fn parse_volume(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [lo, hi, n] = parts[..] else {
        return Err("expected ymin,ymax,N".into());
    };
    Ok((
        lo.parse().map_err(|_| format!("`{lo}` is not a number"))?,
        hi.parse().map_err(|_| format!("`{hi}` is not a number"))?,
        n.parse().map_err(|_| format!("`{n}` is not a count"))?,
    ))
}

fn parse_methods(s: &str) -> Result<(ExtensionMethod, ExtensionMethod), String> {
    let (a, b) = s.split_once(',').ok_or("expected two methods, e.g. product,star-square")?;
    Ok((a.parse()?, b.parse()?))
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Parameter c of Q̂_c.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "map")]
    pub c: Option<String>,
    /// Map spec of the form quad:c=<complex>.
    #[arg(long)]
    pub map: Option<String>,
    /// xmin,xmax,tmin,tmax
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window, default_value = "-1.5,1.5,0,1.5")]
    pub window: [f64; 4],
    /// Vertical plane, y=<value>.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_plane, default_value = "y=0")]
    pub plane: f64,
    /// WxH in pixels.
    #[arg(long, value_parser = parse_size, default_value = "512x512")]
    pub size: (usize, usize),
    #[arg(long, default_value_t = 200)]
    pub max_iter: u32,
    /// Defaults to max(2, |c|).
    #[arg(long)]
    pub escape_radius: Option<f64>,
    /// Render a box ymin,ymax,N instead of a single plane (CSV only).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_volume)]
    pub volume: Option<(f64, f64, usize)>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "pgm")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub method: ExtensionMethod,
    #[arg(long)]
    pub map: String,
    /// x,y,t in the half-space; ball coordinates for radial, visual and
    /// conformal-natural.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    pub point: [f64; 3],
    /// Quadrature nodes for the visual and conformal-natural methods.
    #[arg(long, default_value_t = crate::extensions::DEFAULT_NODES)]
    pub nodes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Height factor of the vertical method.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Two methods, e.g. product,star-square.
    #[arg(long, value_parser = parse_methods)]
    pub methods: (ExtensionMethod, ExtensionMethod),
    #[arg(long)]
    pub map: String,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::extensions::DEFAULT_NODES)]
    pub nodes: usize,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    #[arg(long)]
    pub map: String,
    /// List up to K distinct zero/pole pairings.
    #[arg(long)]
    pub enumerate: Option<usize>,
}

fn round15(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    format!("{v:.14e}").parse().expect("formatted float parses")
}

/// `v` to 15 significant digits; parts below `1e-15 · scale` are rounding
/// noise and become 0. Never negative zero.
fn clean(v: f64, scale: f64) -> f64 {
    let r = round15(v);
    if r == 0.0 || v.abs() <= 1e-15 * scale {
        0.0
    } else {
        r
    }
}

/// Real number with 15 significant digits, shortest form, no negative zero.
pub fn format_real(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    mapspec::real_text(clean(v, 0.0))
}

fn format_scaled(z: Complex64, scale: f64) -> String {
    format_complex(Complex64::new(clean(z.re, scale), clean(z.im, scale)))
}

fn format_complex15(z: Complex64) -> String {
    format_scaled(z, z.norm())
}

fn format_triple(v: [f64; 3]) -> String {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    v.iter().map(|&x| mapspec::real_text(clean(x, scale))).collect::<Vec<_>>().join(" ")
}

/// Matrix entries rotated so the largest is real and positive.
fn format_matrix(m: [Complex64; 4]) -> String {
    let big = m.iter().copied().fold(Complex64::new(0.0, 0.0), |b, c| if c.norm() > b.norm() { c } else { b });
    let phase = big / big.norm();
    m.iter()
        .map(|&c| format_scaled(c / phase, big.norm()))
        .collect::<Vec<_>>()
        .join(" ")
}

fn format_sphere(p: SpherePoint) -> String {
    match p {
        SpherePoint::Finite(z) => format_complex15(z),
        SpherePoint::Infinity => "inf".into(),
    }
}

fn quadrature(nodes: usize, seed: u64) -> Result<SphericalQuadrature, CliError> {
    Ok(SphericalQuadrature::fibonacci(nodes, seed)?)
}

fn render(args: &RenderArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let c = match (&args.c, &args.map) {
        (Some(c), None) => parse_complex(c)?,
        (None, Some(m)) => match parse_map_spec(m)? {
            MapSpec::Quadratic(c) => c,
            _ => return Err(CliError::Usage("render needs a quad:c=<complex> map".into())),
        },
        _ => return Err(CliError::Usage("give exactly one of --c and --map".into())),
    };
    let (width, height) = args.size;
    let mut spec = SliceSpec::new(c, args.window, width, height, args.max_iter);
    spec.y0 = args.plane;
    if let Some(r) = args.escape_radius {
        spec.escape_radius = r;
    }
    spec.validate()?;
    let write = |bytes: &[u8]| {
        std::fs::write(&args.out, bytes).map_err(|source| CliError::Io {
            path: args.out.display().to_string(),
            source,
        })
    };
    if let Some((ymin, ymax, ny)) = args.volume {
        if args.format != Format::Csv {
            return Err(CliError::Usage("volumes are written as CSV; pass --format csv".into()));
        }
        let [x0, x1, t0, t1] = args.window;
        let vspec = VolumeSpec {
            c,
            window: [x0, x1, ymin, ymax, t0, t1],
            nx: width,
            ny,
            nt: height,
            max_iter: args.max_iter,
            escape_radius: spec.escape_radius,
        };
        vspec.validate()?;
        let grid = render_volume(&vspec)?;
        write(grid.to_csv().as_bytes())?;
        let interior = grid.counts.iter().filter(|&&n| n == args.max_iter).count();
        writeln!(out, "interior_fraction={}", format_real(interior as f64 / grid.counts.len() as f64))
            .map_err(stdout_err)?;
        return Ok(());
    }
    let grid = render_slice(&spec)?;
    match args.format {
        Format::Pgm => write(&pgm_bytes(&grid))?,
        Format::Csv => {
            let mut csv = String::from("x,y,t,count\n");
            for j in 0..height {
                for i in 0..width {
                    csv.push_str(&format!("{},{},{},{}\n", spec.x_at(i), spec.y0, spec.t_at(j), grid.get(i, j)));
                }
            }
            write(csv.as_bytes())?;
        }
    }
    let stats = slice_stats(&grid);
    writeln!(out, "interior_fraction={}", format_real(stats.interior_fraction)).map_err(stdout_err)?;
    writeln!(out, "symmetry_residual={}", format_real(stats.symmetry_residual)).map_err(stdout_err)?;
    match stats.bounding_box {
        Some(b) => writeln!(
            out,
            "bounding_box={},{},{},{}",
            format_real(b[0]),
            format_real(b[1]),
            format_real(b[2]),
            format_real(b[3])
        ),
        None => writeln!(out, "bounding_box=none"),
    }
    .map_err(stdout_err)
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn is_ball_method(m: ExtensionMethod) -> bool {
    matches!(
        m,
        ExtensionMethod::Radial | ExtensionMethod::Visual | ExtensionMethod::ConformalNatural
    )
}

fn eval(args: &EvalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let map = parse_map_spec(&args.map)?.to_input();
    if is_ball_method(args.method) {
        let x = BallPoint::new(args.point)?;
        let r = map.to_rational();
        let v = match args.method {
            ExtensionMethod::Radial => radial_extension(&r, x),
            ExtensionMethod::Visual => visual_extension(&r, x, &quadrature(args.nodes, args.seed)?),
            _ => conformal_natural_extension(&r, x, &quadrature(args.nodes, args.seed)?)?,
        };
        return writeln!(out, "{}", format_triple(v.coords())).map_err(stdout_err);
    }
    let p = HalfSpacePoint::new(args.point[0], args.point[1], args.point[2])?;
    let params = ExtensionParams {
        vertical_scale: args.scale,
        ..ExtensionParams::default()
    };
    let ext = build_extension(args.method, &map, &params)?;
    let line = match ext.eval(p)?.coords() {
        Some(v) => format_triple(v),
        None => "inf".into(),
    };
    writeln!(out, "{line}").map_err(stdout_err)
}

fn compare(args: &CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let map = parse_map_spec(&args.map)?.to_input();
    let params = ExtensionParams {
        quadrature: quadrature(args.nodes, args.seed)?,
        ..ExtensionParams::default()
    };
    let (a, b) = args.methods;
    let ea = build_extension(a, &map, &params)?;
    let eb = build_extension(b, &map, &params)?;
    let points = sample_points(args.samples, args.seed);
    let mut max: f64 = 0.0;
    let mut sum = 0.0;
    for &p in &points {
        let d = hyperbolic_distance(ea.eval(p)?, eb.eval(p)?)?;
        max = max.max(d);
        sum += d;
    }
    let mean = if points.is_empty() { 0.0 } else { sum / points.len() as f64 };
    writeln!(out, "methods={a},{b}").map_err(stdout_err)?;
    writeln!(out, "samples={}", points.len()).map_err(stdout_err)?;
    writeln!(out, "max_distance={}", format_real(max)).map_err(stdout_err)?;
    writeln!(out, "mean_distance={}", format_real(mean)).map_err(stdout_err)
}

fn print_factorization(f: &MobiusFactorization, out: &mut dyn Write) -> io::Result<()> {
    for fac in f.factors() {
        writeln!(
            out,
            "{} # zero={} pole={}",
            format_matrix(fac.map.coefficients()),
            format_sphere(fac.zero),
            format_sphere(fac.pole)
        )?;
    }
    let p = f.pairing();
    let pairs: Vec<String> = p.pairs.iter().map(|(i, j)| format!("({i},{j})")).collect();
    let list = |v: &[Complex64]| v.iter().map(|&z| format_complex15(z)).collect::<Vec<_>>().join(",");
    writeln!(
        out,
        "pairing={} canonical={} zeros={} poles={}",
        if pairs.is_empty() { "none".into() } else { pairs.join(",") },
        p.canonical,
        if p.zeros.is_empty() { "none".into() } else { list(&p.zeros) },
        if p.poles.is_empty() { "none".into() } else { list(&p.poles) },
    )
}

fn factor(args: &FactorArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let r = match parse_map_spec(&args.map)? {
        MapSpec::Rational(r) => r,
        MapSpec::Quadratic(c) => mapspec::quadratic(c),
        MapSpec::Blaschke(_) => return Err(CliError::Usage("factor needs a rat: or quad: map".into())),
    };
    match args.enumerate {
        None => print_factorization(&factor_rational(&r, None)?, out).map_err(stdout_err),
        Some(limit) => {
            let all = enumerate_pairings(&r, limit)?;
            for (k, f) in all.iter().enumerate() {
                writeln!(out, "# factorization {}", k + 1).map_err(stdout_err)?;
                print_factorization(f, out).map_err(stdout_err)?;
            }
            Ok(())
        }
    }
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Render(a) => render(a, out),
        Command::Eval(a) => eval(a, out),
        Command::Compare(a) => compare(a, out),
        Command::Factor(a) => factor(a, out),
    }
}
