//! q-polynomials `f(x) = Σ_{i<n} a_i x^{q^i}` over `F_{q^n}`, i.e. the
//! `F_q`-linear maps of `F_{q^n}`, with composition reduced modulo `x^{q^n} - x`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::gf::{divisors, FieldCtx, FieldElem, GfError};
use crate::linalg::{self, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QPolyError {
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("the polynomial does not define an invertible map")]
    NotInvertible,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("coefficient {position} ({text:?}): {msg}")]
    Parse {
        position: usize,
        text: String,
        msg: String,
    },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A q-polynomial with coefficients `a_0, ..., a_{n-1}` (coefficient of `x^{q^i}`).
#[derive(Clone)]
pub struct QPoly<'f> {
    ctx: &'f FieldCtx,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for QPoly<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.ctx, other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for QPoly<'_> {}

impl std::hash::Hash for QPoly<'_> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for QPoly<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QPoly<'_> {
    /// Lexicographic on `(a_0, a_1, ...)`.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl fmt::Display for QPoly<'_> {
    /// `a0,a1,...,a{n-1}` in `g^k` notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly[{self}]")
    }
}

impl<'f> QPoly<'f> {
    pub fn new(ctx: &'f FieldCtx, coeffs: Vec<FieldElem>) -> Result<Self, QPolyError> {
        if coeffs.len() != ctx.n() {
            return Err(QPolyError::WrongLength {
                expected: ctx.n(),
                got: coeffs.len(),
            });
        }
        Ok(QPoly { ctx, coeffs })
    }

    pub fn zero(ctx: &'f FieldCtx) -> Self {
        QPoly {
            ctx,
            coeffs: vec![FieldElem::ZERO; ctx.n()],
        }
    }

    /// `alpha · x^{q^k}`.
    pub fn monomial(ctx: &'f FieldCtx, alpha: FieldElem, k: usize) -> Self {
        let mut p = Self::zero(ctx);
        p.coeffs[k % ctx.n()] = alpha;
        p
    }

    pub fn identity(ctx: &'f FieldCtx) -> Self {
        Self::monomial(ctx, FieldElem::ONE, 0)
    }

    /// `Tr_{q^n/q}(x)`.
    pub fn trace(ctx: &'f FieldCtx) -> Self {
        QPoly {
            ctx,
            coeffs: vec![FieldElem::ONE; ctx.n()],
        }
    }

    pub fn random<R: Rng + ?Sized>(ctx: &'f FieldCtx, rng: &mut R) -> Self {
        QPoly {
            ctx,
            coeffs: (0..ctx.n()).map(|_| ctx.random(rng)).collect(),
        }
    }

    /// Parses `"a0,a1,...,a{n-1}"` with elements in `0`/`1`/`g`/`g^k` notation.
    pub fn parse(ctx: &'f FieldCtx, text: &str) -> Result<Self, QPolyError> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != ctx.n() {
            return Err(QPolyError::WrongLength {
                expected: ctx.n(),
                got: parts.len(),
            });
        }
        let coeffs = parts
            .iter()
            .enumerate()
            .map(|(position, part)| {
                ctx.parse_elem(part).map_err(|e| QPolyError::Parse {
                    position,
                    text: part.to_string(),
                    msg: match e {
                        GfError::ParseElem { msg, .. } => msg,
                        other => other.to_string(),
                    },
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(QPoly { ctx, coeffs })
    }

    pub fn ctx(&self) -> &'f FieldCtx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs[i % self.coeffs.len()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Indices of the nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .collect()
    }

    /// `Some((alpha, k))` when `f = alpha·x^{q^k}` with `alpha ≠ 0`.
    pub fn as_monomial(&self) -> Option<(FieldElem, usize)> {
        match self.support().as_slice() {
            [k] => Some((self.coeffs[*k], *k)),
            _ => None,
        }
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let ctx = self.ctx;
        self.coeffs
            .iter()
            .enumerate()
            .fold(FieldElem::ZERO, |acc, (i, &a)| {
                ctx.add(acc, ctx.mul(a, ctx.frob_q(x, i)))
            })
    }

    pub fn add(&self, other: &QPoly<'f>) -> QPoly<'f> {
        self.zip_with(other, |a, b| self.ctx.add(a, b))
    }

    pub fn sub(&self, other: &QPoly<'f>) -> QPoly<'f> {
        self.zip_with(other, |a, b| self.ctx.sub(a, b))
    }

    fn zip_with(&self, other: &QPoly<'f>, op: impl Fn(FieldElem, FieldElem) -> FieldElem) -> Self {
        QPoly {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    /// `c · f(x)`.
    pub fn scale(&self, c: FieldElem) -> QPoly<'f> {
        QPoly {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|&a| self.ctx.mul(c, a)).collect(),
        }
    }

    /// `f(g(x))`: `c_k = Σ_{i+j ≡ k} a_i · b_j^{q^i}`.
    pub fn compose(&self, g: &QPoly<'f>) -> QPoly<'f> {
        let ctx = self.ctx;
        let n = ctx.n();
        let mut out = vec![FieldElem::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in g.coeffs.iter().enumerate() {
                let k = (i + j) % n;
                out[k] = ctx.add(out[k], ctx.mul(a, ctx.frob_q(b, i)));
            }
        }
        QPoly { ctx, coeffs: out }
    }

    /// The adjoint with respect to `(x, y) ↦ Tr(xy)`: the coefficient of
    /// `x^{q^{n-i}}` is `a_i^{q^{n-i}}`.
    pub fn adjoint(&self) -> QPoly<'f> {
        let ctx = self.ctx;
        let n = ctx.n();
        let mut out = vec![FieldElem::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            let j = (n - i) % n;
            out[j] = ctx.frob_q(a, j);
        }
        QPoly { ctx, coeffs: out }
    }

    /// Applies `x ↦ x^{p^e}` to every coefficient, i.e. `σ ∘ f ∘ σ^{-1}`.
    pub fn frobenius_twist(&self, e: usize) -> QPoly<'f> {
        QPoly {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .map(|&a| self.ctx.frobenius(a, e))
                .collect(),
        }
    }

    /// `f(λx)/λ`: coefficient `i` becomes `a_i λ^{q^i - 1}`.
    pub fn scale_conjugate(&self, lambda: FieldElem) -> Result<QPoly<'f>, QPolyError> {
        if lambda.is_zero() {
            return Err(QPolyError::ZeroScalar);
        }
        let ctx = self.ctx;
        let inv = ctx.inv_nz(lambda);
        Ok(QPoly {
            ctx,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &a)| ctx.mul(a, ctx.mul(ctx.frob_q(lambda, i), inv)))
                .collect(),
        })
    }

    /// Matrix over `F_q` of the map in the basis [`FieldCtx::fq_basis`]:
    /// column `j` holds the coordinates of `f(basis_j)`.
    pub fn as_matrix(&self) -> Matrix {
        let ctx = self.ctx;
        let n = ctx.n();
        let cols: Vec<Vec<FieldElem>> = ctx
            .fq_basis()
            .into_iter()
            .map(|b| ctx.fq_coordinates(self.eval(b)))
            .collect();
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i]).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(self.ctx, &self.as_matrix())
    }

    /// Dimension over `F_q` of the kernel.
    pub fn kernel_dim(&self) -> usize {
        self.ctx.n() - self.rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.kernel_dim() == 0
    }

    /// Compositional inverse: invert the `F_q`-matrix, then interpolate the
    /// coefficients from the inverse map's values on the basis.
    pub fn inverse(&self) -> Result<QPoly<'f>, QPolyError> {
        let ctx = self.ctx;
        let n = ctx.n();
        let inv = linalg::invert(ctx, &self.as_matrix()).ok_or(QPolyError::NotInvertible)?;
        let basis = ctx.fq_basis();
        // Values of the inverse map on the basis.
        let values: Vec<FieldElem> = (0..n)
            .map(|j| ctx.sum((0..n).map(|i| ctx.mul(inv[i][j], basis[i]))))
            .collect();
        // Moore system: Σ_k c_k basis_j^{q^k} = values_j.
        let moore: Matrix = basis
            .iter()
            .map(|&b| (0..n).map(|k| ctx.frob_q(b, k)).collect())
            .collect();
        let coeffs =
            linalg::solve(ctx, &moore, &values).expect("Moore matrix of a basis is nonsingular");
        Ok(QPoly { ctx, coeffs })
    }

    /// The `s | n` such that `f` is strictly `F_{q^s}`-linear: the largest `s`
    /// with `a_i = 0` whenever `s ∤ i`.
    pub fn max_field_of_linearity(&self) -> Result<usize, QPolyError> {
        if self.is_zero() {
            return Err(QPolyError::ZeroPolynomial);
        }
        let n = self.ctx.n();
        let support = self.support();
        Ok(divisors(n)
            .into_iter()
            .rev()
            .find(|&s| support.iter().all(|i| i % s == 0))
            .expect("s = 1 always qualifies"))
    }

    /// Nonzero and with maximum field of linearity `F_q`.
    pub fn is_strictly_fq_linear(&self) -> bool {
        self.max_field_of_linearity() == Ok(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Oracle: each term via repeated squaring-free naive powering.
    fn eval_oracle(ctx: &FieldCtx, f: &QPoly, x: FieldElem) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        let mut xq = x;
        for i in 0..ctx.n() {
            acc = ctx.add(acc, ctx.mul(f.coeff(i), xq));
            // xq <- xq^q by q multiplications
            let mut next = FieldElem::ONE;
            for _ in 0..ctx.q() {
                next = ctx.mul(next, xq);
            }
            xq = next;
        }
        acc
    }

    #[test]
    fn eval_examples() {
        let ctx = FieldCtx::new(2, 1, 5).unwrap();
        let id = QPoly::identity(&ctx);
        let tr = QPoly::trace(&ctx);
        for x in ctx.elements() {
            assert_eq!(id.eval(x), x);
            let t = tr.eval(x);
            assert!(t == FieldElem::ZERO || t == FieldElem::ONE);
        }
        let ctx3 = FieldCtx::new(3, 1, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let f = QPoly::random(&ctx3, &mut rng);
            let x = ctx3.random(&mut rng);
            assert_eq!(f.eval(x), eval_oracle(&ctx3, &f, x));
        }
    }

    #[test]
    fn linearity_spot_check() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let fq: Vec<FieldElem> = ctx.elements().filter(|&c| ctx.in_subfield(c, 1)).collect();
        for _ in 0..100 {
            let f = QPoly::random(&ctx, &mut rng);
            let (x, y) = (ctx.random(&mut rng), ctx.random(&mut rng));
            assert_eq!(f.eval(ctx.add(x, y)), ctx.add(f.eval(x), f.eval(y)));
            for &c in &fq {
                assert_eq!(f.eval(ctx.mul(c, x)), ctx.mul(c, f.eval(x)));
            }
        }
    }

    #[test]
    fn compose_examples() {
        let ctx = FieldCtx::new(2, 1, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xq = QPoly::monomial(&ctx, FieldElem::ONE, 1);
        assert_eq!(xq.compose(&xq), QPoly::monomial(&ctx, FieldElem::ONE, 2));
        for _ in 0..20 {
            let f = QPoly::random(&ctx, &mut rng);
            let g = QPoly::random(&ctx, &mut rng);
            assert_eq!(f.compose(&QPoly::identity(&ctx)), f);
            let fg = f.compose(&g);
            for x in ctx.elements() {
                assert_eq!(fg.eval(x), f.eval(g.eval(x)));
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        let ctx = FieldCtx::new(2, 1, 5).unwrap();
        let tr = QPoly::trace(&ctx);
        assert_eq!(tr.adjoint(), tr);
        let xq = QPoly::monomial(&ctx, FieldElem::ONE, 1);
        assert_eq!(xq.adjoint(), QPoly::monomial(&ctx, FieldElem::ONE, 4));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let f = QPoly::random(&ctx, &mut rng);
            assert_eq!(f.adjoint().adjoint(), f);
        }
    }

    #[test]
    fn bilinear_identity_exhaustive_q2() {
        let ctx = FieldCtx::new(2, 1, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let f = QPoly::random(&ctx, &mut rng);
            let fh = f.adjoint();
            for x in ctx.elements() {
                for y in ctx.elements() {
                    assert_eq!(
                        ctx.trace(ctx.mul(x, f.eval(y))),
                        ctx.trace(ctx.mul(y, fh.eval(x)))
                    );
                }
            }
        }
    }

    #[test]
    fn matrix_examples() {
        let ctx = FieldCtx::new(2, 1, 5).unwrap();
        assert_eq!(QPoly::identity(&ctx).as_matrix(), linalg::identity(5));
        assert_eq!(QPoly::trace(&ctx).rank(), 1);
        let ctx4 = FieldCtx::new(2, 2, 3).unwrap();
        let c = ctx4
            .nonzero_elements()
            .find(|&c| c != FieldElem::ONE && ctx4.in_subfield(c, 1))
            .unwrap();
        let m = QPoly::monomial(&ctx4, c, 0).as_matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(e, if i == j { c } else { FieldElem::ZERO });
            }
        }
        // M · coords(x) = coords(f(x))
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let f = QPoly::random(&ctx4, &mut rng);
        let m = f.as_matrix();
        for x in ctx4.elements() {
            let cx = ctx4.fq_coordinates(x);
            let lhs: Vec<_> = (0..3)
                .map(|i| ctx4.sum((0..3).map(|j| ctx4.mul(m[i][j], cx[j]))))
                .collect();
            assert_eq!(lhs, ctx4.fq_coordinates(f.eval(x)));
        }
    }

    #[test]
    fn kernel_and_inverse() {
        let ctx = FieldCtx::new(2, 1, 5).unwrap();
        assert_eq!(QPoly::identity(&ctx).kernel_dim(), 0);
        assert_eq!(QPoly::trace(&ctx).kernel_dim(), 4);
        let xq = QPoly::monomial(&ctx, FieldElem::ONE, 1);
        assert_eq!(
            xq.inverse().unwrap(),
            QPoly::monomial(&ctx, FieldElem::ONE, 4)
        );
        assert_eq!(QPoly::trace(&ctx).inverse(), Err(QPolyError::NotInvertible));

        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let mut seen = 0;
        while seen < 30 {
            let f = QPoly::random(&ctx, &mut rng);
            // Oracle: kernel size by counting roots.
            let roots = ctx.elements().filter(|&x| f.eval(x).is_zero()).count();
            assert_eq!(1usize << f.kernel_dim(), roots);
            if let Ok(inv) = f.inverse() {
                seen += 1;
                assert_eq!(f.compose(&inv), QPoly::identity(&ctx));
                for x in ctx.elements() {
                    assert_eq!(f.eval(inv.eval(x)), x);
                }
            }
        }
    }

    #[test]
    fn field_of_linearity() {
        let ctx = FieldCtx::new(2, 1, 4).unwrap();
        let f = QPoly::monomial(&ctx, FieldElem::ONE, 2);
        assert_eq!(f.max_field_of_linearity(), Ok(2));
        assert_eq!(QPoly::trace(&ctx).max_field_of_linearity(), Ok(1));
        assert_eq!(
            QPoly::monomial(&ctx, ctx.generator(), 0).max_field_of_linearity(),
            Ok(4)
        );
        assert_eq!(
            QPoly::zero(&ctx).max_field_of_linearity(),
            Err(QPolyError::ZeroPolynomial)
        );
        let ctx5 = FieldCtx::new(2, 1, 5).unwrap();
        assert_eq!(QPoly::trace(&ctx5).max_field_of_linearity(), Ok(1));
    }

    #[test]
    fn scale_conjugate_examples() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let f = QPoly::random(&ctx, &mut rng);
        assert_eq!(f.scale_conjugate(FieldElem::ONE).unwrap(), f);
        assert_eq!(
            f.scale_conjugate(FieldElem::ZERO),
            Err(QPolyError::ZeroScalar)
        );
        for c in ctx.nonzero_elements().filter(|&c| ctx.in_subfield(c, 1)) {
            assert_eq!(f.scale_conjugate(c).unwrap(), f);
        }
        let lambda = ctx.random_nonzero(&mut rng);
        let g = f.scale_conjugate(lambda).unwrap();
        for x in ctx.elements() {
            assert_eq!(
                g.eval(x),
                ctx.div(f.eval(ctx.mul(lambda, x)), lambda).unwrap()
            );
        }
    }

    #[test]
    fn parse_and_display() {
        let ctx = FieldCtx::new(3, 1, 5).unwrap();
        let f = QPoly::parse(&ctx, "0,g^3,1,g,0").unwrap();
        assert_eq!(f.to_string(), "0,g^3,g^0,g^1,0");
        assert_eq!(QPoly::parse(&ctx, &f.to_string()).unwrap(), f);
        match QPoly::parse(&ctx, "0,1,x,0,0") {
            Err(QPolyError::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            QPoly::parse(&ctx, "0,1"),
            Err(QPolyError::WrongLength {
                expected: 5,
                got: 2
            })
        ));
    }
}
