//! The general linear crossed module `GL^{n,p,q}`.
//!
//! A group element is a pair `(U, V)` with `U = [[P, 0], [R, S]]` of size
//! `n+p` and `V = [[P, B], [0, D]]` of size `n+q` sharing the block `P`.
//! Products are diagrammatic: `g * g'` is `(U' U, V' V)`. The second group
//! `H` consists of `(n+p) x (n+q)` matrices `[[P - I, B], [R, N]]` with `P`
//! invertible and the zero matrix as unit.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::double::CrossedModule;
use crate::error::{Error, Result};
use crate::numeric::{mat_inv, DenseMatrix, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GlDims {
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl GlDims {
    pub fn new(n: usize, p: usize, q: usize) -> Result<Self> {
        if n == 0 || p == 0 || q == 0 {
            return Err(Error::InvalidParameter(format!(
                "GL dims must be positive, got ({n}, {p}, {q})"
            )));
        }
        Ok(Self { n, p, q })
    }

    fn check_h(&self, h: &GlHElement) -> Result<()> {
        let want = (self.n + self.p, self.n + self.q);
        if h.block.shape() != want {
            return Err(Error::ShapeMismatch(format!(
                "H element is {}x{}, expected {}x{}",
                h.block.rows(),
                h.block.cols(),
                want.0,
                want.1
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlGroupElement {
    dims: GlDims,
    u: DenseMatrix,
    v: DenseMatrix,
}

impl GlGroupElement {
    /// Checks the block pattern, the shared `P` block within `tol` and the
    /// invertibility of `P`, `S` and `D`.
    pub fn new(u: DenseMatrix, v: DenseMatrix, dims: GlDims, tol: Tolerance) -> Result<Self> {
        let GlDims { n, p, q } = dims;
        if u.shape() != (n + p, n + p) || v.shape() != (n + q, n + q) {
            return Err(Error::ShapeMismatch(format!(
                "expected U {0}x{0} and V {1}x{1}, got {2}x{3} and {4}x{5}",
                n + p,
                n + q,
                u.rows(),
                u.cols(),
                v.rows(),
                v.cols()
            )));
        }
        if !u.is_finite() || !v.is_finite() {
            return Err(Error::NonFinite);
        }
        if u.block(0, n, n, p).max_abs() != 0.0 {
            return Err(Error::InvalidParameter(
                "U must have a zero top-right block".into(),
            ));
        }
        if v.block(n, 0, q, n).max_abs() != 0.0 {
            return Err(Error::InvalidParameter(
                "V must have a zero bottom-left block".into(),
            ));
        }
        if !u.block(0, 0, n, n).approx_eq(&v.block(0, 0, n, n), tol) {
            return Err(Error::InvalidParameter(
                "U and V must share their P block".into(),
            ));
        }
        let g = Self { dims, u, v };
        mat_inv(&g.p())?;
        mat_inv(&g.s())?;
        mat_inv(&g.d())?;
        Ok(g)
    }

    /// Assembles `U = [[P, 0], [R, S]]` and `V = [[P, B], [0, D]]`.
    pub fn from_blocks(
        p: &DenseMatrix,
        r: &DenseMatrix,
        s: &DenseMatrix,
        b: &DenseMatrix,
        d: &DenseMatrix,
    ) -> Result<Self> {
        let dims = GlDims::new(p.rows(), s.rows(), d.rows())?;
        let GlDims { n, p: np, q } = dims;
        let shapes = [
            (p.shape(), (n, n)),
            (r.shape(), (np, n)),
            (s.shape(), (np, np)),
            (b.shape(), (n, q)),
            (d.shape(), (q, q)),
        ];
        if shapes.iter().any(|(got, want)| got != want) {
            return Err(Error::ShapeMismatch(format!(
                "blocks do not fit GL^({n},{np},{q})"
            )));
        }
        let mut u = DenseMatrix::zeros(n + np, n + np);
        u.set_block(0, 0, p);
        u.set_block(n, 0, r);
        u.set_block(n, n, s);
        let mut v = DenseMatrix::zeros(n + q, n + q);
        v.set_block(0, 0, p);
        v.set_block(0, n, b);
        v.set_block(n, n, d);
        Self::new(u, v, dims, Tolerance::exact())
    }

    pub fn identity(dims: GlDims) -> Self {
        Self {
            dims,
            u: DenseMatrix::identity(dims.n + dims.p),
            v: DenseMatrix::identity(dims.n + dims.q),
        }
    }

    pub fn dims(&self) -> GlDims {
        self.dims
    }

    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    pub fn v(&self) -> &DenseMatrix {
        &self.v
    }

    /// The `P` block as stored in `U`.
    pub fn p(&self) -> DenseMatrix {
        self.u.block(0, 0, self.dims.n, self.dims.n)
    }

    /// The `P` block as stored in `V`.
    pub fn p_from_v(&self) -> DenseMatrix {
        self.v.block(0, 0, self.dims.n, self.dims.n)
    }

    pub fn r(&self) -> DenseMatrix {
        let GlDims { n, p, .. } = self.dims;
        self.u.block(n, 0, p, n)
    }

    pub fn s(&self) -> DenseMatrix {
        let GlDims { n, p, .. } = self.dims;
        self.u.block(n, n, p, p)
    }

    pub fn b(&self) -> DenseMatrix {
        let GlDims { n, q, .. } = self.dims;
        self.v.block(0, n, n, q)
    }

    pub fn d(&self) -> DenseMatrix {
        let GlDims { n, q, .. } = self.dims;
        self.v.block(n, n, q, q)
    }

    /// Diagrammatic product: `self` then `other`.
    pub fn then(&self, other: &Self) -> Self {
        Self {
            dims: self.dims,
            u: other.u.matmul(&self.u),
            v: other.v.matmul(&self.v),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self {
            dims: self.dims,
            u: mat_inv(&self.u)?,
            v: mat_inv(&self.v)?,
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.u
            .max_abs_diff(&other.u)
            .max(self.v.max_abs_diff(&other.v))
    }
}

/// Element of `H`, stored as the raw block `[[P - I, B], [R, N]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GlHElement {
    block: DenseMatrix,
}

impl GlHElement {
    /// Checks the shape and that `P` is invertible.
    pub fn new(block: DenseMatrix, dims: GlDims) -> Result<Self> {
        let h = Self { block };
        dims.check_h(&h)?;
        if !h.block.is_finite() {
            return Err(Error::NonFinite);
        }
        mat_inv(&h.p(dims))?;
        Ok(h)
    }

    /// Assembles `[[P - I, B], [R, N]]` from `P`, `B`, `R` and `N`.
    pub fn from_blocks(
        p: &DenseMatrix,
        b: &DenseMatrix,
        r: &DenseMatrix,
        n_block: &DenseMatrix,
        dims: GlDims,
    ) -> Result<Self> {
        let GlDims { n, p: np, q } = dims;
        let shapes = [
            (p.shape(), (n, n)),
            (b.shape(), (n, q)),
            (r.shape(), (np, n)),
            (n_block.shape(), (np, q)),
        ];
        if shapes.iter().any(|(got, want)| got != want) {
            return Err(Error::ShapeMismatch(format!(
                "blocks do not fit GL^({n},{np},{q})"
            )));
        }
        let mut block = DenseMatrix::zeros(n + np, n + q);
        block.set_block(0, 0, &p.sub(&DenseMatrix::identity(n)));
        block.set_block(0, n, b);
        block.set_block(n, 0, r);
        block.set_block(n, n, n_block);
        Self::new(block, dims)
    }

    pub fn unit(dims: GlDims) -> Self {
        Self {
            block: DenseMatrix::zeros(dims.n + dims.p, dims.n + dims.q),
        }
    }

    pub fn block(&self) -> &DenseMatrix {
        &self.block
    }

    /// `P`, i.e. the top-left block plus the identity.
    pub fn p(&self, dims: GlDims) -> DenseMatrix {
        self.block
            .block(0, 0, dims.n, dims.n)
            .add(&DenseMatrix::identity(dims.n))
    }

    pub fn b(&self, dims: GlDims) -> DenseMatrix {
        self.block.block(0, dims.n, dims.n, dims.q)
    }

    pub fn r(&self, dims: GlDims) -> DenseMatrix {
        self.block.block(dims.n, 0, dims.p, dims.n)
    }

    pub fn n_block(&self, dims: GlDims) -> DenseMatrix {
        self.block.block(dims.n, dims.n, dims.p, dims.q)
    }
}

/// `h1 * h2 = [[P2 P1 - I, P2 B1 + B2], [R2 P1 + R1, R2 B1 + N1 + N2]]`.
pub fn gl_h_mul(h1: &GlHElement, h2: &GlHElement, dims: GlDims) -> Result<GlHElement> {
    dims.check_h(h1)?;
    dims.check_h(h2)?;
    let (p1, b1, r1, n1) = (h1.p(dims), h1.b(dims), h1.r(dims), h1.n_block(dims));
    let (p2, b2, r2, n2) = (h2.p(dims), h2.b(dims), h2.r(dims), h2.n_block(dims));
    let n = dims.n;
    let mut block = DenseMatrix::zeros(n + dims.p, n + dims.q);
    block.set_block(0, 0, &p2.matmul(&p1).sub(&DenseMatrix::identity(n)));
    block.set_block(0, n, &p2.matmul(&b1).add(&b2));
    block.set_block(n, 0, &r2.matmul(&p1).add(&r1));
    block.set_block(n, n, &r2.matmul(&b1).add(&n1).add(&n2));
    Ok(GlHElement { block })
}

/// `h^-1 = [[P^-1 - I, -P^-1 B], [-R P^-1, -N + R P^-1 B]]`.
pub fn gl_h_inv(h: &GlHElement, dims: GlDims) -> Result<GlHElement> {
    dims.check_h(h)?;
    let p_inv = mat_inv(&h.p(dims))?;
    let (b, r, nb) = (h.b(dims), h.r(dims), h.n_block(dims));
    let n = dims.n;
    let r_p_inv = r.matmul(&p_inv);
    let mut block = DenseMatrix::zeros(n + dims.p, n + dims.q);
    block.set_block(0, 0, &p_inv.sub(&DenseMatrix::identity(n)));
    block.set_block(0, n, &p_inv.matmul(&b).neg());
    block.set_block(n, 0, &r_p_inv.neg());
    block.set_block(n, n, &r_p_inv.matmul(&b).sub(&nb));
    Ok(GlHElement { block })
}

/// `tau(h) = ([[P, 0], [R, I_p]], [[P, B], [0, I_q]])`.
pub fn gl_feedback(h: &GlHElement, dims: GlDims) -> Result<GlGroupElement> {
    dims.check_h(h)?;
    mat_inv(&h.p(dims))?;
    Ok(feedback_unchecked(h, dims))
}

fn feedback_unchecked(h: &GlHElement, dims: GlDims) -> GlGroupElement {
    let GlDims { n, p, q } = dims;
    let pm = h.p(dims);
    let mut u = DenseMatrix::identity(n + p);
    u.set_block(0, 0, &pm);
    u.set_block(n, 0, &h.r(dims));
    let mut v = DenseMatrix::identity(n + q);
    v.set_block(0, 0, &pm);
    v.set_block(0, n, &h.b(dims));
    GlGroupElement { dims, u, v }
}

/// `g` acting on `h`: `U^-1 * block * V` on the raw rectangular block.
pub fn gl_action(g: &GlGroupElement, h: &GlHElement, dims: GlDims) -> Result<GlHElement> {
    dims.check_h(h)?;
    if g.dims != dims {
        return Err(Error::ShapeMismatch(format!(
            "group element has dims {:?}, expected {dims:?}",
            g.dims
        )));
    }
    let block = mat_inv(&g.u)?.matmul(&h.block).matmul(&g.v);
    Ok(GlHElement { block })
}

/// `GL^{n,p,q}` as a [`CrossedModule`]. Equality tests use `tol` entrywise.
#[derive(Debug, Clone, Copy)]
pub struct GeneralLinear {
    pub dims: GlDims,
    pub tol: Tolerance,
}

impl GeneralLinear {
    pub fn new(dims: GlDims) -> Self {
        Self {
            dims,
            tol: Tolerance::new(1e-9, 1e-9),
        }
    }

    /// `I + 0.5 M / k` with `M` uniform in `[-1, 1]^{k x k}`; always invertible.
    fn random_invertible(rng: &mut ChaCha8Rng, k: usize) -> DenseMatrix {
        let scale = 0.5 / k as f64;
        DenseMatrix::from_fn(k, k, |i, j| {
            let x: f64 = rng.gen_range(-1.0..=1.0);
            x * scale + if i == j { 1.0 } else { 0.0 }
        })
    }

    fn random_block(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..=1.0))
    }

    /// Random group element: `P`, `S`, `D` near the identity, `R`, `B` uniform in `[-1, 1]`.
    pub fn random_g(&self, rng: &mut ChaCha8Rng) -> GlGroupElement {
        let GlDims { n, p, q } = self.dims;
        let pm = Self::random_invertible(rng, n);
        let r = Self::random_block(rng, p, n);
        let s = Self::random_invertible(rng, p);
        let b = Self::random_block(rng, n, q);
        let d = Self::random_invertible(rng, q);
        GlGroupElement::from_blocks(&pm, &r, &s, &b, &d).expect("sampled blocks are invertible")
    }

    /// Random `H` element: `P` near the identity, `B`, `R`, `N` uniform in `[-1, 1]`.
    pub fn random_h(&self, rng: &mut ChaCha8Rng) -> GlHElement {
        let GlDims { n, p, q } = self.dims;
        let pm = Self::random_invertible(rng, n);
        let b = Self::random_block(rng, n, q);
        let r = Self::random_block(rng, p, n);
        let nb = Self::random_block(rng, p, q);
        GlHElement::from_blocks(&pm, &b, &r, &nb, self.dims).expect("sampled P is invertible")
    }
}

impl CrossedModule for GeneralLinear {
    type G = GlGroupElement;
    type H = GlHElement;

    fn g_mul(&self, a: &GlGroupElement, b: &GlGroupElement) -> GlGroupElement {
        a.then(b)
    }
    fn g_inv(&self, a: &GlGroupElement) -> Result<GlGroupElement> {
        a.inverse()
    }
    fn g_unit(&self) -> GlGroupElement {
        GlGroupElement::identity(self.dims)
    }
    fn g_distance(&self, a: &GlGroupElement, b: &GlGroupElement) -> f64 {
        a.max_abs_diff(b)
    }
    fn g_eq(&self, a: &GlGroupElement, b: &GlGroupElement) -> bool {
        a.u.approx_eq(&b.u, self.tol) && a.v.approx_eq(&b.v, self.tol)
    }

    fn h_mul(&self, a: &GlHElement, b: &GlHElement) -> GlHElement {
        gl_h_mul(a, b, self.dims).expect("H elements of one module share dims")
    }
    fn h_inv(&self, a: &GlHElement) -> Result<GlHElement> {
        gl_h_inv(a, self.dims)
    }
    fn h_unit(&self) -> GlHElement {
        GlHElement::unit(self.dims)
    }
    fn h_distance(&self, a: &GlHElement, b: &GlHElement) -> f64 {
        a.block.max_abs_diff(&b.block)
    }
    fn h_eq(&self, a: &GlHElement, b: &GlHElement) -> bool {
        a.block.approx_eq(&b.block, self.tol)
    }

    fn feedback(&self, h: &GlHElement) -> GlGroupElement {
        feedback_unchecked(h, self.dims)
    }
    fn act(&self, g: &GlGroupElement, h: &GlHElement) -> Result<GlHElement> {
        gl_action(g, h, self.dims)
    }
}
