//! RGB images as `GL^{2,1,3}`-valued two-cell grids.

use std::io::Cursor;

use super::gl::{GeneralLinear, GlDims, GlGroupElement, GlHElement};
use crate::double::{g_product, CrossedModule, TwoCellGridAssignment};
use crate::error::{Error, Result};
use crate::numeric::{mat_exp, DenseMatrix};

/// Crossed-module dimensions used for images.
pub const IMAGE_DIMS: GlDims = GlDims { n: 2, p: 1, q: 3 };

const COMMUTATOR_TOL: f64 = 1e-10;
const IMAGE_BLOCK_TOL: f64 = 1e-8;
const SHARED_P_TOL: f64 = 1e-9;

/// Edge parameters: `A_k` (2x2), `Q_k` (3x3, pairwise commuting) and scalars `s_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageParams {
    a: [DenseMatrix; 3],
    q: [DenseMatrix; 3],
    s: [f64; 3],
}

impl ImageParams {
    pub fn new(a: [DenseMatrix; 3], q: [DenseMatrix; 3], s: [f64; 3]) -> Result<Self> {
        if a.iter().any(|m| m.shape() != (2, 2)) {
            return Err(Error::ShapeMismatch("A_k must be 2x2".into()));
        }
        if q.iter().any(|m| m.shape() != (3, 3)) {
            return Err(Error::ShapeMismatch("Q_k must be 3x3".into()));
        }
        if a.iter().chain(&q).any(|m| !m.is_finite()) || s.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        for (k, l) in [(0, 1), (0, 2), (1, 2)] {
            let comm = q[k].matmul(&q[l]).sub(&q[l].matmul(&q[k]));
            if comm.max_abs() > COMMUTATOR_TOL {
                return Err(Error::InvalidParameter(format!(
                    "Q_{} and Q_{} do not commute (commutator {:e})",
                    k + 1,
                    l + 1,
                    comm.max_abs()
                )));
            }
        }
        Ok(Self { a, q, s })
    }

    pub fn a(&self) -> &[DenseMatrix; 3] {
        &self.a
    }

    pub fn q(&self) -> &[DenseMatrix; 3] {
        &self.q
    }

    pub fn s(&self) -> [f64; 3] {
        self.s
    }
}

impl Default for ImageParams {
    /// `A = 0.1 (E12 - E21, E12, E21)`, diagonal `Q_k`, `s_k = 0.1 k`.
    fn default() -> Self {
        let m = |rows: &[[f64; 2]; 2]| DenseMatrix::from_rows(rows).unwrap();
        Self::new(
            [
                m(&[[0.0, 0.1], [-0.1, 0.0]]),
                m(&[[0.0, 0.1], [0.0, 0.0]]),
                m(&[[0.0, 0.0], [0.1, 0.0]]),
            ],
            [
                DenseMatrix::diag(&[0.1, 0.0, -0.1]),
                DenseMatrix::diag(&[0.0, 0.2, 0.1]),
                DenseMatrix::diag(&[-0.1, 0.1, 0.0]),
            ],
            [0.1, 0.2, 0.3],
        )
        .expect("default parameters are valid")
    }
}

/// An `m x n` image with `channels` values per pixel, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    m: usize,
    n: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    pub fn new(m: usize, n: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 || channels == 0 {
            return Err(Error::InvalidParameter(
                "image dimensions must be positive".into(),
            ));
        }
        if data.len() != m * n * channels {
            return Err(Error::ShapeMismatch(format!(
                "{m}x{n}x{channels} image needs {} values, got {}",
                m * n * channels,
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            m,
            n,
            channels,
            data,
        })
    }

    pub fn from_fn(
        m: usize,
        n: usize,
        channels: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(m * n * channels);
        for i in 0..m {
            for j in 0..n {
                for c in 0..channels {
                    data.push(f(i, j, c));
                }
            }
        }
        Self::new(m, n, channels, data)
    }

    /// Header `m n c`, then `m * n` lines of `c` values separated by commas
    /// or whitespace, pixel `(i, j)` on line `i * n + j`.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header \"m n c\"".into(),
        })?;
        let dims = split_fields(header)
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line: hline,
                message: format!("bad header: {e}"),
            })?;
        let [m, n, c] = dims[..] else {
            return Err(Error::Parse {
                line: hline,
                message: format!("header needs 3 fields, got {}", dims.len()),
            });
        };
        let mut data = Vec::with_capacity(m * n * c);
        let mut pixels = 0;
        for (line, l) in lines {
            let row = split_fields(l)
                .map(|t| parse_value(t, line))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != c {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {c} values, got {}", row.len()),
                });
            }
            data.extend(row);
            pixels += 1;
        }
        if pixels != m * n {
            return Err(Error::Parse {
                line: hline,
                message: format!("header promises {} pixels, found {pixels}", m * n),
            });
        }
        Self::new(m, n, c, data)
    }

    /// Binary PPM (`P6`), channels scaled to `[0, 1]`; image row `i` is grid index `i`.
    pub fn parse_ppm(bytes: &[u8]) -> Result<Self> {
        let decoded = image::ImageReader::with_format(Cursor::new(bytes), image::ImageFormat::Pnm)
            .decode()
            .map_err(|e| Error::Parse {
                line: 1,
                message: format!("invalid PPM: {e}"),
            })?;
        let rgb = decoded.to_rgb32f();
        let (width, height) = rgb.dimensions();
        let data = rgb.into_raw().into_iter().map(f64::from).collect();
        Self::new(height as usize, width as usize, 3, data)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn pixel(&self, i: usize, j: usize) -> &[f64] {
        let start = (i * self.n + j) * self.channels;
        &self.data[start..start + self.channels]
    }
}

fn split_fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

fn parse_value(token: &str, line: usize) -> Result<f64> {
    match token.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(Error::Parse {
            line,
            message: format!("invalid value {token:?}"),
        }),
    }
}

fn weighted(ms: &[DenseMatrix; 3], delta: [f64; 3]) -> DenseMatrix {
    ms.iter().zip(delta).fold(
        DenseMatrix::zeros(ms[0].rows(), ms[0].cols()),
        |acc, (m, d)| acc.add(&m.scale(d)),
    )
}

/// The edge element for a step from `zbar` to `z`, with `Δ = z - zbar`:
/// `P = exp(Σ A_k Δ_k)`, `R = [sin Δ_1, cos Δ_3]`, `S = exp(Σ s_k Δ_k)`,
/// `B = [[0, Δ_1, 0], [Δ_3, 0, Δ_2]]`, `D = exp(Σ Q_k Δ_k)`.
pub fn image_edge_eta(z: &[f64], zbar: &[f64], params: &ImageParams) -> Result<GlGroupElement> {
    if z.len() != 3 || zbar.len() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "pixels need 3 channels, got {} and {}",
            z.len(),
            zbar.len()
        )));
    }
    let dz = [z[0] - zbar[0], z[1] - zbar[1], z[2] - zbar[2]];
    if dz.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let p = mat_exp(&weighted(&params.a, dz))?;
    let r = DenseMatrix::from_rows(&[[dz[0].sin(), dz[2].cos()]])?;
    let s_exp = params
        .s
        .iter()
        .zip(dz)
        .map(|(s, d)| s * d)
        .sum::<f64>()
        .exp();
    let s = DenseMatrix::from_rows(&[[s_exp]])?;
    let b = DenseMatrix::from_rows(&[[0.0, dz[0], 0.0], [dz[2], 0.0, dz[1]]])?;
    let d = mat_exp(&weighted(&params.q, dz))?;
    GlGroupElement::from_blocks(&p, &r, &s, &b, &d)
}

/// Solves the boundary law for the face of a cell: the boundary product
/// `south * east * north^-1 * west^-1` must be `tau` of the face, so its `S`
/// and `D` blocks have to be identities. `P`, `R` and `B` are read off that
/// product and `N` is free. `at` is the cell index used in errors.
pub fn face_from_boundary(
    south: &GlGroupElement,
    east: &GlGroupElement,
    north: &GlGroupElement,
    west: &GlGroupElement,
    n_block: &DenseMatrix,
    at: (usize, usize),
) -> Result<GlHElement> {
    let dims = south.dims();
    let xm = GeneralLinear::new(dims);
    let not_in_image = |detail: String| Error::NotInFeedbackImage {
        i: at.0,
        j: at.1,
        detail,
    };
    let g = g_product(&xm, &[south, east, &xm.g_inv(north)?, &xm.g_inv(west)?]);
    let s_dev = g.s().max_abs_diff(&DenseMatrix::identity(dims.p));
    let d_dev = g.d().max_abs_diff(&DenseMatrix::identity(dims.q));
    if !(s_dev <= IMAGE_BLOCK_TOL && d_dev <= IMAGE_BLOCK_TOL) {
        return Err(not_in_image(format!(
            "S block off identity by {s_dev:e}, D block by {d_dev:e}"
        )));
    }
    let (pu, pv) = (g.p(), g.p_from_v());
    let p_dev = pu.max_abs_diff(&pv);
    if !(p_dev <= SHARED_P_TOL) {
        return Err(not_in_image(format!(
            "P blocks of U and V differ by {p_dev:e}"
        )));
    }
    let p = pu.add(&pv).scale(0.5);
    GlHElement::from_blocks(&p, &g.b(), &g.r(), n_block, dims)
}

/// The free `N` block of face `(i, j)`:
/// `[Σ_k (z11 - z00)_k^2, 0, Σ_k (z11 - z10)_k (z11 - z01)_k]` on the corner pixels.
pub fn face_n_block(z00: &[f64], z10: &[f64], z01: &[f64], z11: &[f64]) -> DenseMatrix {
    let diag: f64 = z11.iter().zip(z00).map(|(a, b)| (a - b) * (a - b)).sum();
    let cross: f64 = (0..z11.len())
        .map(|k| (z11[k] - z10[k]) * (z11[k] - z01[k]))
        .sum();
    DenseMatrix::from_rows(&[[diag, 0.0, cross]]).expect("1x3 literal")
}

/// Builds the `(m-1) x (n-1)` two-cell grid of an `m x n` RGB image: edge
/// `[i, i+1] x {j}` carries `eta(x[i+1][j], x[i][j])`, edge `{i} x [j, j+1]`
/// carries `eta(x[i][j+1], x[i][j])` and faces are solved from their boundary.
pub fn image_grid_assignment(
    image: &Image,
    params: &ImageParams,
) -> Result<TwoCellGridAssignment<GlGroupElement, GlHElement>> {
    if image.channels() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "image pipeline needs 3 channels, got {}",
            image.channels()
        )));
    }
    if image.m() < 2 || image.n() < 2 {
        return Err(Error::InvalidParameter(format!(
            "image needs at least 2x2 pixels, got {}x{}",
            image.m(),
            image.n()
        )));
    }
    let (m, n) = (image.m() - 1, image.n() - 1);
    let x = |i: usize, j: usize| image.pixel(i, j);
    let hcells = (0..m)
        .map(|i| {
            (0..=n)
                .map(|j| image_edge_eta(x(i + 1, j), x(i, j), params))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    let vcells = (0..=m)
        .map(|i| {
            (0..n)
                .map(|j| image_edge_eta(x(i, j + 1), x(i, j), params))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    let faces = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let nb = face_n_block(x(i, j), x(i + 1, j), x(i, j + 1), x(i + 1, j + 1));
                    face_from_boundary(
                        &hcells[i][j],
                        &vcells[i + 1][j],
                        &hcells[i][j + 1],
                        &vcells[i][j],
                        &nb,
                        (i, j),
                    )
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    TwoCellGridAssignment::new(hcells, vcells, faces)
}
