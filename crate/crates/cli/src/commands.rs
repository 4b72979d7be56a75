use std::path::Path;

use fscan::bench::bench_matrix_scan;
use fscan::double::{boundary_violation, random_quad, random_square_grid};
use fscan::instances::{
    abelian_grid_assignment, image_grid_assignment, make_iis_assignment, make_iss_assignment,
    make_mat_assignment, make_max_assignment, make_product_assignment, make_ssm_assignment,
    make_sum_assignment, AbelianModule, AbelianOp, Alphabet, DimProfile, GeneralLinear, GlDims,
    ImageParams, MatCategory, MatrixGroup, Max, MonoidDelooping, Product, SsmParams, Sum,
    TemplateEmbedding, TensorAlgebra, IMAGE_DIMS,
};
use fscan::numeric::{MinPlus, RealField};
use fscan::{
    check_crossed_module, free_lift, lift, scan_2d, scan_blocked, Category, CrossedModule,
    Delooping, DoubleCategory, Grid, Interval, IntervalAssignment, Rect, SplitStrategy, TwoCell,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{read_text, InstanceKind, OpKind, RunConfig, SemiringKind};
use crate::error::{CliError, CliResult};
use crate::input::{load_image, parse_rows, parse_scalars};
use crate::output::{csv_line, num, render_all, Render};

/// Block count for one-dimensional scans. Fixed so that the composition order,
/// and with it every printed digit, does not depend on the worker count.
pub const SCAN_BLOCKS: usize = 64;

/// Output of a command that ran to completion. `code` is non-zero when the
/// full report was produced but contains failures (a failed check).
#[derive(Debug, Default)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl From<String> for Report {
    fn from(stdout: String) -> Self {
        Self {
            stdout,
            ..Self::default()
        }
    }
}

fn scan_or_lift<C>(
    cat: &C,
    asg: &IntervalAssignment<C::Object, C::Morphism>,
    interval: Option<(i64, i64)>,
    workers: usize,
) -> CliResult<String>
where
    C: Category,
    C::Morphism: Render,
{
    let items = match interval {
        Some((m, n)) => {
            let iv = Interval::new(m, n)?;
            vec![(format!("lift {m} {n}"), lift(asg, iv, cat)?)]
        }
        None => scan_blocked(asg, cat, SCAN_BLOCKS, workers)?
            .prefixes
            .into_iter()
            .enumerate()
            .map(|(k, p)| (format!("prefix {k}"), p))
            .collect(),
    };
    Ok(render_all(&items))
}

pub fn scan1d(
    input: &Path,
    cfg: &RunConfig,
    interval: Option<(i64, i64)>,
    workers: usize,
) -> CliResult<String> {
    if cfg.instance.is_two_dimensional() {
        return Err(CliError::Validation(format!(
            "instance {:?} is two-dimensional; use scan2d",
            cfg.instance
        )));
    }
    let text = read_text(input)?;
    let in_input = |e: CliError| e.in_file(input);
    let scalars = || parse_scalars(&text).map_err(in_input);
    let points = || parse_rows(&text).map_err(in_input);
    let level = cfg.level.unwrap_or_default();
    match cfg.instance {
        InstanceKind::Sum => scan_or_lift(
            &MonoidDelooping(Sum::default()),
            &make_sum_assignment(&scalars()?),
            interval,
            workers,
        ),
        InstanceKind::Max => scan_or_lift(
            &MonoidDelooping(Max),
            &make_max_assignment(&scalars()?),
            interval,
            workers,
        ),
        InstanceKind::Product => scan_or_lift(
            &MonoidDelooping(Product::default()),
            &make_product_assignment(&scalars()?),
            interval,
            workers,
        ),
        InstanceKind::Iss => scan_or_lift(
            &MonoidDelooping(TensorAlgebra::new(Alphabet::IteratedSums, level)),
            &make_iss_assignment(&scalars()?, level)?,
            interval,
            workers,
        ),
        InstanceKind::Iis => {
            let pts = points()?;
            let d = pts.first().map_or(0, Vec::len);
            scan_or_lift(
                &MonoidDelooping(TensorAlgebra::new(Alphabet::Letters(d), level)),
                &make_iis_assignment(&pts, level)?,
                interval,
                workers,
            )
        }
        InstanceKind::Ssm => {
            let gens = cfg
                .generators
                .iter()
                .map(|p| cfg.matrix(p))
                .collect::<CliResult<Vec<_>>>()?;
            let params = SsmParams::new(gens)?;
            scan_or_lift(
                &MonoidDelooping(MatrixGroup::new(params.state_dim())),
                &make_ssm_assignment(&points()?, &params)?,
                interval,
                workers,
            )
        }
        InstanceKind::Mat => {
            let xs = scalars()?;
            let dims = match (&cfg.dims, cfg.dim) {
                (Some(d), _) => d.clone(),
                (None, Some(d)) => vec![d; xs.len() + 1],
                (None, None) => unreachable!("config validation requires dims or dim"),
            };
            let mut embedding = TemplateEmbedding::seeded(cfg.seed);
            for p in &cfg.templates {
                embedding = embedding.with_template(cfg.matrix(p)?);
            }
            let asg = make_mat_assignment(&xs, &DimProfile { dims, embedding })?;
            match cfg.semiring {
                SemiringKind::Real => scan_or_lift(
                    &MatCategory::new(RealField, cfg.tolerance()),
                    &asg,
                    interval,
                    workers,
                ),
                SemiringKind::Tropical => scan_or_lift(
                    &MatCategory::new(MinPlus, cfg.tolerance()),
                    &asg,
                    interval,
                    workers,
                ),
            }
        }
        InstanceKind::Abelian2d | InstanceKind::Glimage => unreachable!("rejected above"),
    }
}

fn abelian_op(op: OpKind) -> AbelianOp {
    match op {
        OpKind::Sum => AbelianOp::Sum,
        OpKind::Max => AbelianOp::Max,
    }
}

fn image_params(cfg: &RunConfig) -> CliResult<ImageParams> {
    let Some(img) = &cfg.image else {
        return Ok(ImageParams::default());
    };
    let load = |ps: &[std::path::PathBuf; 3]| -> CliResult<[fscan::DenseMatrix; 3]> {
        Ok([
            cfg.matrix(&ps[0])?,
            cfg.matrix(&ps[1])?,
            cfg.matrix(&ps[2])?,
        ])
    };
    Ok(ImageParams::new(load(&img.a)?, load(&img.q)?, img.s)?)
}

fn squares_2d<D, R>(
    squares: &Grid<D::Square>,
    dcat: &D,
    rect: Option<[usize; 4]>,
    workers: usize,
    face: R,
) -> CliResult<String>
where
    D: DoubleCategory,
    R: Fn(&D::Square) -> String,
{
    let single = |label: String, sq: &D::Square| {
        let body = face(sq);
        if body.lines().count() == 1 {
            body
        } else {
            format!("{label}\n{body}")
        }
    };
    match rect {
        Some([s1, t1, s2, t2]) => {
            let sq = free_lift(
                squares,
                Rect::new(s1, t1, s2, t2)?,
                dcat,
                SplitStrategy::Midpoint,
            )?;
            Ok(single(format!("lift {s1} {t1} {s2} {t2}"), &sq))
        }
        None => {
            let grid = scan_2d(squares, dcat, workers)?;
            let mut out = String::new();
            for i in 0..grid.m() {
                let faces: Vec<String> = (0..grid.n()).map(|j| face(grid.get(i, j))).collect();
                if faces.iter().all(|f| f.lines().count() == 1) {
                    out.push_str(
                        &faces
                            .iter()
                            .map(|f| f.trim_end())
                            .collect::<Vec<_>>()
                            .join(","),
                    );
                    out.push('\n');
                } else {
                    for (j, f) in faces.iter().enumerate() {
                        out.push_str(&format!("prefix {i} {j}\n{f}"));
                    }
                }
            }
            Ok(out)
        }
    }
}

pub fn scan2d(
    input: &Path,
    cfg: &RunConfig,
    rect: Option<[usize; 4]>,
    workers: usize,
) -> CliResult<String> {
    match cfg.instance {
        InstanceKind::Abelian2d => {
            let values = parse_rows(&read_text(input)?).map_err(|e| e.in_file(input))?;
            let op = abelian_op(cfg.op);
            let squares = abelian_grid_assignment(&values, op)?.squares();
            squares_2d(
                &squares,
                &Delooping::new(AbelianModule::new(op)),
                rect,
                workers,
                |sq| csv_line([sq.face]),
            )
        }
        InstanceKind::Glimage => {
            let image = load_image(input)?;
            let squares = image_grid_assignment(&image, &image_params(cfg)?)?.squares();
            let dcat = Delooping::new(GeneralLinear::new(IMAGE_DIMS));
            squares_2d(&squares, &dcat, rect, workers, |sq| {
                let mut s = String::new();
                sq.face.render_block(&mut s);
                s
            })
        }
        other => Err(CliError::Validation(format!(
            "instance {other:?} is one-dimensional; use scan1d"
        ))),
    }
}

fn square_distance<X: CrossedModule>(
    xm: &X,
    a: &TwoCell<X::G, X::H>,
    b: &TwoCell<X::G, X::H>,
) -> f64 {
    [
        xm.g_distance(&a.south, &b.south),
        xm.g_distance(&a.east, &b.east),
        xm.g_distance(&a.north, &b.north),
        xm.g_distance(&a.west, &b.west),
        xm.h_distance(&a.face, &b.face),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// `(max violation, failures)` with NaN counted as a failure.
fn tally(violations: impl IntoIterator<Item = f64>, threshold: f64) -> (f64, usize) {
    violations.into_iter().fold((0.0, 0), |(worst, failed), v| {
        let worst = if v.is_nan() || v > worst { v } else { worst };
        (worst, failed + usize::from(!(v <= threshold)))
    })
}

fn check_module<X, FG, FH>(
    xm: X,
    samples: usize,
    seed: u64,
    threshold: f64,
    sample_g: FG,
    sample_h: FH,
) -> CliResult<Report>
where
    X: CrossedModule,
    FG: Fn(&mut ChaCha8Rng) -> X::G,
    FH: Fn(&mut ChaCha8Rng) -> X::H,
{
    let report = check_crossed_module(&xm, samples, seed, threshold, &sample_g, &sample_h);
    let dcat = Delooping::new(xm);
    let xm = &dcat.module;

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut interchange = Vec::with_capacity(samples);
    for _ in 0..samples {
        let [sw, se, nw, ne] = random_quad(xm, &mut rng, &sample_g, &sample_h)?;
        let rows = dcat.compose_v(&dcat.compose_h(&sw, &se)?, &dcat.compose_h(&nw, &ne)?)?;
        let cols = dcat.compose_h(&dcat.compose_v(&sw, &nw)?, &dcat.compose_v(&se, &ne)?)?;
        interchange.push(square_distance(xm, &rows, &cols));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut boundary = Vec::with_capacity(samples);
    for _ in 0..samples {
        let grid = random_square_grid(xm, 3, 3, &mut rng, &sample_g, &sample_h)?;
        let whole = free_lift(
            &grid,
            Rect::new(0, 3, 0, 3)?,
            &dcat,
            SplitStrategy::Midpoint,
        )?;
        boundary.push(boundary_violation(xm, &whole));
    }

    let (i_max, i_failed) = tally(interchange, threshold);
    let (b_max, b_failed) = tally(boundary, threshold);
    let mut out = report.to_string();
    out.push_str(&format!(
        "INTERCHANGE {i_max:e} {i_failed}\nBOUNDARY {b_max:e} {b_failed}\n"
    ));

    let mut stderr = String::new();
    for a in report.axioms.iter().filter(|a| a.skipped > 0) {
        stderr.push_str(&format!(
            "note: {} not evaluated on {} samples\n",
            a.axiom, a.skipped
        ));
    }
    let failed: usize = report.axioms.iter().map(|a| a.failed).sum::<usize>() + i_failed + b_failed;
    let mut code = 0;
    if failed > 0 {
        let e = CliError::Numeric(format!("{failed} sample(s) above threshold {threshold:e}"));
        stderr.push_str(&format!("fscan: {e}\n"));
        code = e.exit_code();
    }
    Ok(Report {
        stdout: out,
        stderr,
        code,
    })
}

pub fn check(cfg: &RunConfig, samples: usize, seed: u64) -> CliResult<Report> {
    let threshold = cfg.threshold.unwrap_or(1e-8);
    match cfg.instance {
        InstanceKind::Glimage => {
            let dims = match cfg.gl_dims {
                Some([n, p, q]) => GlDims::new(n, p, q)?,
                None => IMAGE_DIMS,
            };
            let xm = GeneralLinear::new(dims);
            check_module(
                xm,
                samples,
                seed,
                threshold,
                move |r| xm.random_g(r),
                move |r| xm.random_h(r),
            )
        }
        InstanceKind::Abelian2d => check_module(
            AbelianModule::new(abelian_op(cfg.op)),
            samples,
            seed,
            threshold,
            |_| (),
            |r| f64::from(r.gen_range(-100i32..100)),
        ),
        other => Err(CliError::Validation(format!(
            "check needs a crossed-module instance (abelian2d or glimage), got {other:?}"
        ))),
    }
}

pub fn bench(sizes: &[usize], workers: &[usize], dim: usize, seed: u64) -> CliResult<String> {
    let rows = bench_matrix_scan(sizes, dim, workers, seed)?;
    let mut out =
        String::from("cells,dim,workers,seconds,compositions,compositions_per_second,speedup\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.cells,
            r.dim,
            r.workers,
            num(r.seconds),
            r.compositions,
            num(r.compositions_per_second()),
            num(r.speedup)
        ));
    }
    Ok(out)
}
