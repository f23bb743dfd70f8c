use clap::{Parser, Subcommand, ValueEnum};
use gridcc::colorings::{enumerate_colors, Family, Params};
use gridcc::grid::Window;
use gridcc::render::{render, FigureKind, FigureSpec, Format};
use gridcc::verifier::{
    find_violator_exhaustive, find_violator_random, oracle_enumerate_connected, verify_lambda,
    ColoredRegion, VerificationMode, VerificationReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::time::{Duration, Instant};

#[derive(Parser)]
#[command(name = "gridcc", version, about = "p-centered grid colorings: query, verify, render")]
struct Cli {
    /// Seed for all randomized operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a coloring over a region, one record per cell.
    Color {
        #[arg(long)]
        coloring: Family,
        #[arg(long)]
        p: u32,
        /// x0,y0,width,height
        #[arg(long, value_parser = parse_window)]
        region: Window,
        #[arg(long, value_enum, default_value_t = StreamFormat::Csv)]
        format: StreamFormat,
    },
    /// Search the λ coloring for p-centeredness violators.
    Verify {
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum, default_value_t = VerifyMode::Exhaustive)]
        mode: VerifyMode,
        /// Cap on color-subset size (partial mode).
        #[arg(long)]
        max_colors: Option<u32>,
        /// Random-mode trial count.
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Print palette size, theoretical bound, and period.
    Count {
        #[arg(long)]
        coloring: Family,
        #[arg(long)]
        p: u32,
    },
    /// Render one of the five figures.
    Render {
        /// 1 μ labels, 2 θ labels, 3 partitions, 4 zigzag band, 5 block column band.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=5))]
        figure: u32,
        #[arg(long, default_value_t = 4)]
        p: u32,
        #[arg(long, value_parser = parse_window)]
        region: Option<Window>,
        #[arg(long, value_enum, default_value_t = DocFormat::Ascii)]
        format: DocFormat,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// Zigzag band column (figure 4); must be divisible by 3.
        #[arg(long, default_value_t = 6)]
        b: u32,
        /// Block column index (figure 5).
        #[arg(long, default_value_t = 1)]
        i: u32,
    },
    /// Cross-validate the subset search against brute-force enumeration.
    Oracle {
        #[arg(long)]
        width: u32,
        #[arg(long)]
        height: u32,
        #[arg(long)]
        p: u32,
        /// "lambda" or "random:K" for K-color uniform colorings.
        #[arg(long, default_value = "lambda")]
        coloring: String,
        #[arg(long, default_value_t = 1)]
        instances: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StreamFormat {
    Csv,
    Json,
    Ascii,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    Exhaustive,
    Partial,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum DocFormat {
    Ascii,
    Pixmap,
    Vector,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|e| format!("bad region component '{t}': {e}")))
        .collect::<Result<_, _>>()?;
    let [x0, y0, w, h] = parts[..] else {
        return Err("region must be x0,y0,width,height".into());
    };
    if w == 0 || h == 0 {
        return Err("region must be nonempty".into());
    }
    Ok(Window::new(x0, y0, w, h))
}

fn main() {
    if let Ok(v) = std::env::var("GRIDCC_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: GRIDCC_THREADS must be a positive integer, got '{v}'");
                std::process::exit(2);
            }
        }
    }
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Color { coloring, p, region, format } => cmd_color(coloring, p, region, format),
        Command::Verify { p, mode, max_colors, trials, budget, json } => {
            cmd_verify(p, mode, max_colors, trials, budget, json, cli.seed)
        }
        Command::Count { coloring, p } => cmd_count(coloring, p),
        Command::Render { figure, p, region, format, out, b, i } => {
            cmd_render(figure, p, region, format, out, b, i)
        }
        Command::Oracle { width, height, p, coloring, instances } => {
            cmd_oracle(width, height, p, &coloring, instances, cli.seed)
        }
    }
}

fn cmd_color(family: Family, p: u32, region: Window, format: StreamFormat) -> Result<i32, String> {
    let params = Params::new(p).map_err(|e| e.to_string())?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        StreamFormat::Csv => {
            writeln!(out, "x,y,color_id,color").map_err(|e| e.to_string())?;
            for c in region.iter() {
                let id = family.color_id_at(c, &params);
                let disp = family.color_display_at(c, &params);
                writeln!(out, "{},{},{},\"{}\"", c.x, c.y, id, disp).map_err(|e| e.to_string())?;
            }
        }
        StreamFormat::Json => {
            let records: Vec<_> = region
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "x": c.x,
                        "y": c.y,
                        "color_id": family.color_id_at(c, &params),
                        "color": family.color_display_at(c, &params),
                    })
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &records).map_err(|e| e.to_string())?;
            writeln!(out).map_err(|e| e.to_string())?;
        }
        StreamFormat::Ascii => {
            for x in (region.x0..region.x0 + region.height).rev() {
                let row: Vec<String> = (region.y0..region.y0 + region.width)
                    .map(|y| family.color_display_at(gridcc::grid::Coord::new(x, y), &params))
                    .collect();
                writeln!(out, "{}", row.join(" ")).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(0)
}

fn cmd_verify(
    p: u32,
    mode: VerifyMode,
    max_colors: Option<u32>,
    trials: u64,
    budget: Option<f64>,
    json: bool,
    seed: u64,
) -> Result<i32, String> {
    let budget = budget.map(Duration::from_secs_f64);
    let report = match mode {
        VerifyMode::Exhaustive => verify_lambda(p, budget, Some(p)).map_err(|e| e.to_string())?,
        VerifyMode::Partial => verify_lambda(p, budget, max_colors).map_err(|e| e.to_string())?,
        VerifyMode::Random => {
            let start = Instant::now();
            let params = Params::new(p).map_err(|e| e.to_string())?;
            let side = params.general_period() + params.window_bound;
            let region = ColoredRegion::of_family(Family::Lambda, &params, Window::square(side));
            let violator =
                find_violator_random(&region, p, trials, seed, params.window_bound);
            VerificationReport {
                mode: VerificationMode::Random,
                p,
                p_eff: params.p_eff,
                region: region.window(),
                subsets_checked: trials,
                max_subset_size: p,
                violator,
                wall_time_secs: start.elapsed().as_secs_f64(),
            }
        }
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?);
    } else {
        println!(
            "mode={} p={} p_eff={} region={}x{} subsets_checked={} time={:.2}s",
            report.mode,
            report.p,
            report.p_eff,
            report.region.height,
            report.region.width,
            report.subsets_checked,
            report.wall_time_secs,
        );
        match &report.violator {
            Some(v) => println!(
                "VIOLATOR: {} vertices, {} colors: {:?}",
                v.vertices.len(),
                v.colors.len(),
                v.vertices
            ),
            None => println!("no violator found"),
        }
    }
    Ok(if report.violator.is_some() { 1 } else { 0 })
}

fn cmd_count(family: Family, p: u32) -> Result<i32, String> {
    let params = Params::new(p).map_err(|e| e.to_string())?;
    let palette = enumerate_colors(family, &params);
    println!(
        "coloring={family} p={p} p_eff={} colors={} bound={} period={}",
        params.p_eff,
        palette.count,
        family.bound(&params),
        family.period(&params),
    );
    Ok(0)
}

fn cmd_render(
    figure: u32,
    p: u32,
    region: Option<Window>,
    format: DocFormat,
    out: Option<std::path::PathBuf>,
    b: u32,
    i: u32,
) -> Result<i32, String> {
    let kind = match figure {
        1 => FigureKind::MuLabels,
        2 => FigureKind::ThetaLabels,
        3 => FigureKind::Partitions,
        4 => FigureKind::ZigzagBand { b },
        _ => FigureKind::BlockColumnBand { i },
    };
    let spec = FigureSpec {
        kind,
        region: region.unwrap_or_else(|| Window::square(17)),
        p,
        format: match format {
            DocFormat::Ascii => Format::Ascii,
            DocFormat::Pixmap => Format::Pixmap,
            DocFormat::Vector => Format::Vector,
        },
    };
    let doc = render(&spec).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, doc).map_err(|e| e.to_string())?,
        None => std::io::stdout().write_all(&doc).map_err(|e| e.to_string())?,
    }
    Ok(0)
}

fn cmd_oracle(
    width: u32,
    height: u32,
    p: u32,
    coloring: &str,
    instances: u64,
    seed: u64,
) -> Result<i32, String> {
    let window = Window::new(0, 0, width, height);
    if window.area() > 25 {
        return Err(format!("oracle region area {} exceeds 25", window.area()));
    }
    let k = match coloring {
        "lambda" => None,
        other => match other.strip_prefix("random:").and_then(|k| k.parse::<u32>().ok()) {
            Some(k) if k > 0 => Some(k),
            _ => return Err(format!("coloring must be 'lambda' or 'random:K', got '{other}'")),
        },
    };
    let params = Params::new(p).map_err(|e| e.to_string())?;
    let mut agree = 0u64;
    for m in 0..instances {
        let region = match k {
            None => ColoredRegion::of_family(Family::Lambda, &params, window),
            Some(k) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(m));
                let colors: Vec<u32> = (0..window.area()).map(|_| rng.gen_range(0..k)).collect();
                ColoredRegion::from_fn(window, |c| colors[window.index_of(c).unwrap()])
            }
        };
        let (truth, _) = oracle_enumerate_connected(&region, p).map_err(|e| e.to_string())?;
        let found = find_violator_exhaustive(&region, p, p).map_err(|e| e.to_string())?;
        if truth.is_some() == found.is_some() {
            agree += 1;
        } else {
            println!(
                "instance {m}: oracle={:?} search={:?}",
                truth.map(|v| v.vertices),
                found.map(|v| v.vertices)
            );
        }
    }
    println!("{agree}/{instances} agree");
    Ok(if agree == instances { 0 } else { 1 })
}
