//! Command-line front end for the roughmap toolkit: one subcommand per
//! pipeline stage plus a composed `run-all`. Outputs are deterministic and
//! byte-identical across thread counts and across staged vs composed runs.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use roughmap::{
    delaunay, detrend, fit_plane, interpolate_grid, load_xyz, make_grid_spec, mean_spacing,
    normalize01, read_asc, roughness_map, scale_sweep, write_asc, write_matrix_csv, write_pgm,
    write_xyz, Dem, PointCloud, RoughnessIndex, WindowScale,
};

#[derive(Parser)]
#[command(
    name = "roughmap",
    version,
    about = "Terrain surface roughness: point clouds to DEMs, roughness maps, and correlations"
)]
struct Cli {
    /// Worker threads for raster computations (0 = one per core).
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Remove the global least-squares plane from an XYZ point cloud.
    Detrend {
        /// Input point cloud (`x y z` per line, `#` comments).
        input: PathBuf,
        /// Output point cloud; a `.report.txt` sidecar is written next to it.
        output: PathBuf,
    },
    /// Grid an XYZ point cloud to a DEM through Delaunay interpolation.
    Grid {
        /// Input point cloud.
        input: PathBuf,
        /// Output ESRI ASCII grid.
        output: PathBuf,
        /// Grid resolution in the cloud's distance units.
        #[arg(long, default_value_t = 1.0, value_parser = parse_cell)]
        cell: f64,
    },
    /// Compute roughness maps from a DEM.
    Roughness {
        /// Input ESRI ASCII grid.
        input: PathBuf,
        /// Directory for the output maps.
        outdir: PathBuf,
        #[command(flatten)]
        opts: RoughnessOpts,
    },
    /// Write correlation and R² matrices for all roughness-index pairs.
    Compare {
        /// Input ESRI ASCII grid.
        input: PathBuf,
        /// Directory for `corr_w<w>.csv` / `r2_w<w>.csv`.
        outdir: PathBuf,
        /// Window scales in cells (comma separated, odd, >= 3).
        #[arg(long, value_delimiter = ',', default_values_t = [3usize, 5, 7, 9, 11], value_parser = parse_scale)]
        scales: Vec<usize>,
    },
    /// Render a grid as a grayscale PGM image.
    Render {
        /// Input ESRI ASCII grid.
        input: PathBuf,
        /// Output binary PGM (P5) file.
        output: PathBuf,
    },
    /// Full pipeline: detrend, grid, roughness, compare.
    RunAll {
        /// Input point cloud.
        input: PathBuf,
        /// Directory for all intermediate and final outputs.
        outdir: PathBuf,
        /// Grid resolution in the cloud's distance units.
        #[arg(long, default_value_t = 1.0, value_parser = parse_cell)]
        cell: f64,
        #[command(flatten)]
        opts: RoughnessOpts,
    },
}

#[derive(Args)]
struct RoughnessOpts {
    /// Indices to compute (comma separated), or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    indices: Vec<IndexArg>,
    /// Window scales in cells (comma separated, odd, >= 3).
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 5, 7, 9, 11], value_parser = parse_scale)]
    scales: Vec<usize>,
    /// Also write each map min-max normalized to [0, 1] (`*_norm.asc`).
    #[arg(long)]
    normalize: bool,
    /// Unit for SLOPE roughness values in output files.
    #[arg(long, value_enum, default_value_t = SlopeUnit::Radians)]
    slope_unit: SlopeUnit,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IndexArg {
    All,
    Rmsh,
    Ldre,
    Rt,
    Slope,
    Curvature,
}

impl IndexArg {
    fn to_index(self) -> Option<RoughnessIndex> {
        match self {
            IndexArg::All => None,
            IndexArg::Rmsh => Some(RoughnessIndex::Rmsh),
            IndexArg::Ldre => Some(RoughnessIndex::Ldre),
            IndexArg::Rt => Some(RoughnessIndex::Rt),
            IndexArg::Slope => Some(RoughnessIndex::Slope),
            IndexArg::Curvature => Some(RoughnessIndex::Curvature),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SlopeUnit {
    Radians,
    Degrees,
}

fn parse_cell(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("cell size must be a positive, finite number".to_string())
    }
}

fn parse_scale(s: &str) -> std::result::Result<usize, String> {
    let w: usize = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if w >= 3 && w % 2 == 1 {
        Ok(w)
    } else {
        Err(format!("window scale must be an odd integer >= 3, got {w}"))
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; everything else is a
            // usage error (exit 1), distinct from data errors (exit 2).
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    env_logger::init();
    if cli.threads > 0 {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: cannot configure {} worker threads: {err}", cli.threads);
            std::process::exit(2);
        }
    }
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err:#}");
        std::process::exit(2);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Detrend { input, output } => cmd_detrend(&input, &output),
        Command::Grid { input, output, cell } => cmd_grid(&input, &output, cell),
        Command::Roughness { input, outdir, opts } => cmd_roughness(&input, &outdir, &opts),
        Command::Compare { input, outdir, scales } => cmd_compare(&input, &outdir, &scales),
        Command::Render { input, output } => cmd_render(&input, &output),
        Command::RunAll { input, outdir, cell, opts } => cmd_run_all(&input, &outdir, cell, &opts),
    }
}

fn load_cloud(path: &Path) -> Result<PointCloud> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    load_xyz(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

fn read_dem(path: &Path) -> Result<Dem> {
    read_asc(path).with_context(|| format!("reading {}", path.display()))
}

fn file_stem(path: &Path) -> Result<String> {
    Ok(path
        .file_stem()
        .with_context(|| format!("{} has no file name", path.display()))?
        .to_string_lossy()
        .into_owned())
}

/// `<output>.report.txt`, next to the output file.
fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_os_string();
    name.push(".report.txt");
    PathBuf::from(name)
}

fn cmd_detrend(input: &Path, output: &Path) -> Result<()> {
    let cloud = load_cloud(input)?;
    let plane = fit_plane(&cloud)?;
    let spacing = mean_spacing(&cloud)?;
    let flat = detrend(&cloud, &plane);

    let file = File::create(output).with_context(|| format!("cannot create {}", output.display()))?;
    write_xyz(&flat, BufWriter::new(file)).with_context(|| format!("writing {}", output.display()))?;

    let report = format!(
        "points {}\nmean_spacing {}\nplane_b0 {}\nplane_b1 {}\nplane_b2 {}\n",
        cloud.len(),
        spacing,
        plane.b0,
        plane.b1,
        plane.b2
    );
    let report_path = sidecar_path(output);
    fs::write(&report_path, report).with_context(|| format!("writing {}", report_path.display()))?;

    println!(
        "detrended {} points (plane z = {} + {}*x + {}*y) -> {}",
        cloud.len(),
        plane.b0,
        plane.b1,
        plane.b2,
        output.display()
    );
    Ok(())
}

fn cmd_grid(input: &Path, output: &Path, cell: f64) -> Result<()> {
    let cloud = load_cloud(input)?;
    let spec = make_grid_spec(&cloud, cell)?;
    let tin = delaunay(&cloud)?;
    let dem = interpolate_grid(&tin, &spec);
    write_asc(&dem, output).with_context(|| format!("writing {}", output.display()))?;
    println!(
        "gridded {} points to {} cols x {} rows at cell {} ({} of {} cells valid) -> {}",
        cloud.len(),
        spec.ncols,
        spec.nrows,
        cell,
        dem.valid_count(),
        spec.len(),
        output.display()
    );
    Ok(())
}

fn selected_indices(args: &[IndexArg]) -> Vec<RoughnessIndex> {
    if args.contains(&IndexArg::All) {
        return RoughnessIndex::ALL.to_vec();
    }
    RoughnessIndex::ALL
        .into_iter()
        .filter(|idx| args.iter().filter_map(|a| a.to_index()).any(|a| a == *idx))
        .collect()
}

fn sorted_scales(scales: &[usize]) -> Vec<usize> {
    let mut ws = scales.to_vec();
    ws.sort_unstable();
    ws.dedup();
    ws
}

/// Multiplies every valid cell in place; used for radian→degree conversion.
fn scale_valid_cells(grid: &mut Dem, factor: f64) {
    for row in 0..grid.nrows() {
        for col in 0..grid.ncols() {
            if let Some(v) = grid.get(row, col) {
                grid.set(row, col, v * factor);
            }
        }
    }
}

fn cmd_roughness(input: &Path, outdir: &Path, opts: &RoughnessOpts) -> Result<()> {
    let dem = read_dem(input)?;
    fs::create_dir_all(outdir).with_context(|| format!("cannot create {}", outdir.display()))?;
    let stem = file_stem(input)?;
    let indices = selected_indices(&opts.indices);
    let mut written = 0usize;
    for w in sorted_scales(&opts.scales) {
        let scale = WindowScale::new(w)?;
        for &idx in &indices {
            let mut map = roughness_map(&dem, idx, scale)?;
            if idx == RoughnessIndex::Slope && opts.slope_unit == SlopeUnit::Degrees {
                scale_valid_cells(&mut map.grid, 180.0 / std::f64::consts::PI);
            }
            let path = outdir.join(format!("{stem}_{}_w{w}.asc", idx.tag()));
            write_asc(&map.grid, &path).with_context(|| format!("writing {}", path.display()))?;
            written += 1;
            if opts.normalize {
                let norm = normalize01(&map)?;
                let path = outdir.join(format!("{stem}_{}_w{w}_norm.asc", idx.tag()));
                write_asc(&norm.grid, &path).with_context(|| format!("writing {}", path.display()))?;
                written += 1;
            }
        }
    }
    println!("wrote {written} roughness maps to {}", outdir.display());
    Ok(())
}

fn cmd_compare(input: &Path, outdir: &Path, scales: &[usize]) -> Result<()> {
    let dem = read_dem(input)?;
    fs::create_dir_all(outdir).with_context(|| format!("cannot create {}", outdir.display()))?;
    let ws = sorted_scales(scales)
        .into_iter()
        .map(WindowScale::new)
        .collect::<roughmap::Result<Vec<_>>>()?;
    let sweep = scale_sweep(&dem, &ws)?;
    for m in &sweep.matrices {
        let w = m.scale.get();
        let corr = outdir.join(format!("corr_w{w}.csv"));
        write_matrix_csv(&corr, &m.labels, &m.r).with_context(|| format!("writing {}", corr.display()))?;
        let r2 = outdir.join(format!("r2_w{w}.csv"));
        write_matrix_csv(&r2, &m.labels, &m.r2).with_context(|| format!("writing {}", r2.display()))?;
    }
    println!(
        "wrote correlation and R² matrices for {} scales to {}",
        sweep.matrices.len(),
        outdir.display()
    );
    Ok(())
}

fn cmd_render(input: &Path, output: &Path) -> Result<()> {
    let dem = read_dem(input)?;
    write_pgm(&dem, output).with_context(|| format!("writing {}", output.display()))?;
    println!("rendered {} cols x {} rows -> {}", dem.ncols(), dem.nrows(), output.display());
    Ok(())
}

fn cmd_run_all(input: &Path, outdir: &Path, cell: f64, opts: &RoughnessOpts) -> Result<()> {
    fs::create_dir_all(outdir).with_context(|| format!("cannot create {}", outdir.display()))?;
    let stem = file_stem(input)?;
    let detrended = outdir.join(format!("{stem}_detrended.xyz"));
    let dem_path = outdir.join(format!("{stem}_dem.asc"));
    cmd_detrend(input, &detrended)?;
    cmd_grid(&detrended, &dem_path, cell)?;
    cmd_roughness(&dem_path, outdir, opts)?;
    cmd_compare(&dem_path, outdir, &opts.scales)?;
    Ok(())
}
