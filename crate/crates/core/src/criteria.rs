//! Decision procedures for `Im(f(x)/x) = Im(g(x)/x)`.
//!
//! * necessary conditions: equal power sums and the coefficient identities
//!   `e0`–`e6` for `n = 5`;
//! * explicit equivalences to `Tr(x)` and to `x^q` for `n = 5`;
//! * the monomial certificate (a polynomial sharing its image with
//!   `α x^{q^k}` is itself a monomial with the same relative norm);
//! * classifiers that explain a same-image pair by a scalar conjugation, an
//!   adjoint conjugation, or a common transport to monomials;
//! * an exhaustive harness listing every polynomial with a given image.

use serde::Serialize;
use thiserror::Error;

use crate::enumerate::PolyEnumerator;
use crate::gf::{gcd, FieldCtx, FieldElem, GfError};
use crate::imageset::{image_of_ratio, images_equal, ImageSet};
use crate::moebius::{find_set_equivalence, transform_poly, MoebiusError, SemilinearMap};
use crate::qpoly::{QPoly, QPolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("requires n {expected}, field has n = {got}")]
    WrongDegree { expected: &'static str, got: usize },
    #[error("the image sets differ")]
    ImagesDiffer,
    #[error("polynomial is not strictly F_q-linear")]
    NotStrictlyLinear,
    #[error("expected a monomial alpha*x^(q^k) with alpha != 0 and 0 < k < n")]
    NotMonomial,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("inconsistent with the classification: {0}")]
    Inconsistent(String),
    #[error("explicit witness failed verification: {0}")]
    WitnessRejected(String),
    #[error("exhaustive enumeration of {count} polynomials exceeds the limit of {limit}")]
    TooLargeForExhaustive { count: String, limit: u64 },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error(transparent)]
    Poly(#[from] QPolyError),
}

fn require_n(ctx: &FieldCtx, ok: bool, expected: &'static str) -> Result<(), CriteriaError> {
    if ok {
        Ok(())
    } else {
        Err(CriteriaError::WrongDegree {
            expected,
            got: ctx.n(),
        })
    }
}

fn require_strict(f: &QPoly<'_>) -> Result<(), CriteriaError> {
    if f.is_strictly_fq_linear() {
        Ok(())
    } else {
        Err(CriteriaError::NotStrictlyLinear)
    }
}

// ---------------------------------------------------------------------------
// Necessary conditions

/// The seven coefficient expressions `E_0..E_6` of a polynomial over `F_{q^5}`.
pub fn e_values(f: &QPoly<'_>) -> [FieldElem; 7] {
    let ctx = f.ctx();
    let a = f.coeffs();
    let p = |x: FieldElem, e: &[usize]| ctx.qpow(x, e);
    let prod = |xs: &[FieldElem]| ctx.product(xs.iter().copied());
    let (a1, a2, a3, a4) = (a[1], a[2], a[3], a[4]);

    let e0 = a[0];
    let e1 = prod(&[a1, p(a4, &[1])]);
    let e2 = prod(&[a2, p(a3, &[2])]);
    let e3 = ctx.add(
        prod(&[p(a1, &[1, 0]), p(a3, &[2])]),
        prod(&[a2, p(a4, &[1, 2])]),
    );
    let e4 = ctx.add(
        prod(&[a1, p(a2, &[1, 3])]),
        prod(&[p(a3, &[0, 3]), p(a4, &[1])]),
    );
    let e5 = ctx.sum([
        prod(&[p(a1, &[0, 1, 2]), p(a2, &[3])]),
        prod(&[p(a2, &[0, 1]), p(a3, &[2, 3])]),
        prod(&[p(a1, &[1]), p(a3, &[0, 2, 3])]),
        prod(&[p(a1, &[2]), a2, p(a3, &[3]), p(a4, &[1])]),
        prod(&[p(a2, &[0, 1, 3]), p(a4, &[2])]),
        prod(&[p(a1, &[1]), p(a2, &[3]), a3, p(a4, &[2])]),
        prod(&[a1, p(a2, &[1]), p(a3, &[2]), p(a4, &[3])]),
        prod(&[p(a1, &[0, 2]), p(a4, &[1, 3])]),
        prod(&[a3, p(a4, &[1, 2, 3])]),
    ]);
    let inner = ctx.sum([
        prod(&[p(a1, &[1]), p(a2, &[2, 3, 4]), a3]),
        prod(&[p(a1, &[1, 3]), p(a2, &[4]), p(a3, &[0, 2])]),
        prod(&[p(a1, &[1, 2]), p(a2, &[3, 4]), a4]),
        prod(&[p(a1, &[1, 2, 4]), p(a3, &[3]), a4]),
        prod(&[p(a2, &[1]), p(a3, &[2, 3, 4]), a4]),
        prod(&[p(a1, &[2]), p(a3, &[3, 4]), p(a4, &[0, 1])]),
        prod(&[p(a2, &[1, 3]), p(a3, &[4]), p(a4, &[0, 2])]),
        prod(&[p(a1, &[2]), p(a2, &[4]), p(a4, &[0, 1, 3])]),
    ]);
    let e6 = ctx.add(
        ctx.sum([a1, a2, a3, a4].map(|x| ctx.norm(x))),
        ctx.trace(inner),
    );
    [e0, e1, e2, e3, e4, e5, e6]
}

/// Both sides of each identity `e0`–`e6`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ERelationReport {
    pub holds: [bool; 7],
    pub lhs: [FieldElem; 7],
    pub rhs: [FieldElem; 7],
}

impl ERelationReport {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }

    /// Indices of the identities that fail.
    pub fn failures(&self) -> Vec<usize> {
        (0..7).filter(|&k| !self.holds[k]).collect()
    }
}

pub fn check_e_relations(f: &QPoly<'_>, g: &QPoly<'_>) -> Result<ERelationReport, CriteriaError> {
    require_n(f.ctx(), f.ctx().n() == 5, "= 5")?;
    let lhs = e_values(f);
    let rhs = e_values(g);
    Ok(ERelationReport {
        holds: std::array::from_fn(|k| lhs[k] == rhs[k]),
        lhs,
        rhs,
    })
}

/// Multiplicities, reduced mod `p`, of the values `f(x)/x`.
fn ratio_counts(f: &QPoly<'_>) -> Vec<(FieldElem, u64)> {
    let ctx = f.ctx();
    let mut counts = vec![0u64; ctx.order() as usize];
    for x in ctx.nonzero_elements() {
        counts[ctx.div_nz(f.eval(x), x).index()] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let c = c % ctx.p() as u64;
            (c != 0).then_some((FieldElem::from_raw(i as u32), c))
        })
        .collect()
}

/// `Σ_x (f(x)/x)^d = Σ_x (g(x)/x)^d` for every `d` in `1..=q^n - 1`.
pub fn power_sums_all_equal(f: &QPoly<'_>, g: &QPoly<'_>) -> bool {
    let ctx = f.ctx();
    let (cf, cg) = (ratio_counts(f), ratio_counts(g));
    let sum = |counts: &[(FieldElem, u64)], d: u64| {
        ctx.sum(
            counts
                .iter()
                .map(|&(v, c)| ctx.mul(ctx.from_int(c as i64), ctx.pow(v, d))),
        )
    };
    (1..ctx.order()).all(|d| sum(&cf, d) == sum(&cg, d))
}

// ---------------------------------------------------------------------------
// Explicit equivalences for n = 5

fn nonzero_middle(f: &QPoly<'_>) -> bool {
    f.coeffs()[1..5].iter().all(|c| !c.is_zero())
}

/// Witness that `f` is equivalent to `Tr(μx)/μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Trace5Witness {
    pub phi: SemilinearMap,
    /// `λ` with `λ^{q-1} = a_2/a_1`; the transported polynomial is
    /// `Tr(λ^{q^4} x)/λ^{q^4}`.
    pub lambda: FieldElem,
}

/// `(a_1/a_2)^q = a_2/a_3`, `(a_2/a_3)^q = a_3/a_4` (all `a_i` nonzero).
fn ratio_chain_q(ctx: &FieldCtx, a: &[FieldElem]) -> bool {
    let r = |i: usize, j: usize| ctx.div_nz(a[i], a[j]);
    ctx.frob_q(r(1, 2), 1) == r(2, 3) && ctx.frob_q(r(2, 3), 1) == r(3, 4)
}

/// `(a_4/a_1)^{q^2} = a_1/a_3`, `(a_1/a_2)^{q^2} = a_3/a_4` (all `a_i` nonzero).
fn ratio_chain_q2(ctx: &FieldCtx, a: &[FieldElem]) -> bool {
    let r = |i: usize, j: usize| ctx.div_nz(a[i], a[j]);
    ctx.frob_q(r(4, 1), 2) == r(1, 3) && ctx.frob_q(r(1, 2), 2) == r(3, 4)
}

/// Returns the explicit map sending `f` to `Tr(λ^{q^4}x)/λ^{q^4}` when `f` is
/// equivalent to the trace, `None` otherwise.
pub fn trace5_test(f: &QPoly<'_>) -> Result<Option<Trace5Witness>, CriteriaError> {
    let ctx = f.ctx();
    require_n(ctx, ctx.n() == 5, "= 5")?;
    let a = f.coeffs();
    if !nonzero_middle(f) || !ratio_chain_q(ctx, a) || ctx.norm(a[1]) != ctx.norm(a[2]) {
        return Ok(None);
    }
    let alpha2 = ctx.div_nz(a[2], a[1]);
    let k = alpha2.log().expect("nonzero") as u64;
    let qm1 = ctx.q() - 1;
    if !k.is_multiple_of(qm1) {
        return Err(CriteriaError::WitnessRejected(format!(
            "a_2/a_1 = {alpha2} is not a (q-1)-th power"
        )));
    }
    let lambda = FieldElem::from_log((k / qm1) as u32);
    // λ^{1 - q^4}
    let t = ctx.div_nz(lambda, ctx.frob_q(lambda, 4));
    let c = ctx.sub(FieldElem::ONE, ctx.mul(t, ctx.div_nz(a[0], a[1])));
    let d = ctx.div_nz(t, a[1]);
    let phi = SemilinearMap::new(ctx, [[FieldElem::ONE, FieldElem::ZERO], [c, d]], 0)?;
    let mu = ctx.frob_q(lambda, 4);
    let expected = QPoly::trace(ctx).scale_conjugate(mu)?;
    let got = transform_poly(f, &phi)?;
    if got != expected {
        return Err(CriteriaError::WitnessRejected(format!(
            "trace witness {phi} gives {got}, expected {expected}"
        )));
    }
    Ok(Some(Trace5Witness { phi, lambda }))
}

/// Outcome of [`pseudoalg_test`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PseudoOutcome {
    /// The first ratio system holds with `N(a_1) ≠ N(a_2)`; `f_φ = x^q`.
    Cond1Witness(SemilinearMap),
    /// The second ratio system holds with `N(a_1) ≠ N(a_3)`; `f_φ = x^{q^2}`.
    Cond2Witness(SemilinearMap),
    /// A ratio system holds but the norms agree: `f` is of trace type.
    TraceFallback,
    None,
}

/// Decides whether `f` (with `a_1 a_2 a_3 a_4 ≠ 0`) is equivalent to a
/// monomial `x^{q^i}`, `gcd(i, 5) = 1`, returning the explicit map.
pub fn pseudoalg_test(f: &QPoly<'_>) -> Result<PseudoOutcome, CriteriaError> {
    let ctx = f.ctx();
    require_n(ctx, ctx.n() == 5, "= 5")?;
    if !nonzero_middle(f) {
        return Err(CriteriaError::PreconditionViolated(
            "a_1 a_2 a_3 a_4 must be nonzero".into(),
        ));
    }
    let a = f.coeffs();
    let one = FieldElem::ONE;
    let zero = FieldElem::ZERO;
    let verify = |phi: SemilinearMap, k: usize| -> Result<SemilinearMap, CriteriaError> {
        let got = transform_poly(f, &phi)?;
        if got != QPoly::monomial(ctx, one, k) {
            return Err(CriteriaError::WitnessRejected(format!(
                "{phi} gives {got}, expected x^(q^{k})"
            )));
        }
        Ok(phi)
    };
    if ratio_chain_q(ctx, a) {
        if ctx.norm(a[1]) == ctx.norm(a[2]) {
            return Ok(PseudoOutcome::TraceFallback);
        }
        let alpha = |j: usize| ctx.div_nz(a[j], a[1]);
        let al2 = alpha(2);
        let left = SemilinearMap::new(
            ctx,
            [
                [one, ctx.frob_q(al2, 4)],
                [ctx.qpow(al2, &[0, 1, 2, 3]), one],
            ],
            0,
        )?;
        let right =
            SemilinearMap::new(ctx, [[one, zero], [ctx.neg(alpha(0)), ctx.inv_nz(a[1])]], 0)?;
        return Ok(PseudoOutcome::Cond1Witness(verify(
            left.compose(ctx, &right),
            1,
        )?));
    }
    if ratio_chain_q2(ctx, a) {
        if ctx.norm(a[1]) == ctx.norm(a[3]) {
            return Ok(PseudoOutcome::TraceFallback);
        }
        let alpha = |j: usize| ctx.div_nz(a[j], a[3]);
        let al1 = alpha(1);
        let left = SemilinearMap::new(
            ctx,
            [
                [ctx.qpow(al1, &[0, 1, 3, 4]), one],
                [one, ctx.frob_q(al1, 2)],
            ],
            0,
        )?;
        let right =
            SemilinearMap::new(ctx, [[one, zero], [ctx.neg(alpha(0)), ctx.inv_nz(a[3])]], 0)?;
        return Ok(PseudoOutcome::Cond2Witness(verify(
            left.compose(ctx, &right),
            2,
        )?));
    }
    Ok(PseudoOutcome::None)
}

// ---------------------------------------------------------------------------
// Monomials

/// `g = β x^{q^s}` certified against a monomial with the same image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonomialMatch {
    pub beta: FieldElem,
    pub s: usize,
}

/// Certifies that `g`, sharing its image with `f = α x^{q^k}`, is a monomial
/// `β x^{q^s}` with `gcd(s, n) = gcd(k, n) = t` and
/// `N_{q^n/q^t}(α) = N_{q^n/q^t}(β)`.
pub fn monomial_classify(f: &QPoly<'_>, g: &QPoly<'_>) -> Result<MonomialMatch, CriteriaError> {
    let ctx = f.ctx();
    let n = ctx.n();
    let (alpha, k) = f.as_monomial().ok_or(CriteriaError::NotMonomial)?;
    if alpha.is_zero() || k == 0 {
        return Err(CriteriaError::NotMonomial);
    }
    if !images_equal(f, g) {
        return Err(CriteriaError::ImagesDiffer);
    }
    let Some((beta, s)) = g.as_monomial().filter(|(b, _)| !b.is_zero()) else {
        return Err(CriteriaError::Inconsistent(format!(
            "{g} shares its image with the monomial {f} but is not a monomial"
        )));
    };
    let t = gcd(k, n);
    if gcd(s, n) != t {
        return Err(CriteriaError::Inconsistent(format!(
            "gcd({s}, {n}) != gcd({k}, {n}) for {f} and {g}"
        )));
    }
    if ctx.norm_rel(alpha, t)? != ctx.norm_rel(beta, t)? {
        return Err(CriteriaError::Inconsistent(format!(
            "relative norms of {alpha} and {beta} over F_(q^{t}) differ"
        )));
    }
    Ok(MonomialMatch { beta, s })
}

// ---------------------------------------------------------------------------
// Classifiers

/// How a same-image pair `(f, g)` is explained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ClassifyOutcome {
    /// `f_φ = α x^{q^i}`, `g_φ = β x^{q^j}` with `N(α) = N(β)`.
    MonomialPair {
        phi: SemilinearMap,
        i: usize,
        j: usize,
        alpha: FieldElem,
        beta: FieldElem,
    },
    /// `g(x) = f(λx)/λ`.
    ScalarConjugate {
        lambda: FieldElem,
    },
    /// `g(x) = f̂(λx)/λ`.
    AdjointScalarConjugate {
        lambda: FieldElem,
    },
    ImagesDiffer,
    /// No explanation found; a counterexample candidate.
    Inconsistent {
        diagnostic: String,
    },
}

impl ClassifyOutcome {
    pub fn is_inconsistent(&self) -> bool {
        matches!(self, ClassifyOutcome::Inconsistent { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ClassifyOutcome::MonomialPair { .. } => "MonomialPair",
            ClassifyOutcome::ScalarConjugate { .. } => "ScalarConjugate",
            ClassifyOutcome::AdjointScalarConjugate { .. } => "AdjointScalarConjugate",
            ClassifyOutcome::ImagesDiffer => "ImagesDiffer",
            ClassifyOutcome::Inconsistent { .. } => "Inconsistent",
        }
    }

    /// Re-derives `g` from `f` (or the transported pair) using the witness.
    pub fn verify(&self, f: &QPoly<'_>, g: &QPoly<'_>) -> bool {
        let ctx = f.ctx();
        match *self {
            ClassifyOutcome::ScalarConjugate { lambda } => {
                f.scale_conjugate(lambda).as_ref() == Ok(g)
            }
            ClassifyOutcome::AdjointScalarConjugate { lambda } => {
                f.adjoint().scale_conjugate(lambda).as_ref() == Ok(g)
            }
            ClassifyOutcome::MonomialPair {
                phi,
                i,
                j,
                alpha,
                beta,
            } => {
                transform_poly(f, &phi).ok() == Some(QPoly::monomial(ctx, alpha, i))
                    && transform_poly(g, &phi).ok() == Some(QPoly::monomial(ctx, beta, j))
                    && ctx.norm(alpha) == ctx.norm(beta)
            }
            ClassifyOutcome::ImagesDiffer => !images_equal(f, g),
            ClassifyOutcome::Inconsistent { .. } => false,
        }
    }
}

/// First `λ` (by index) with `g = f(λx)/λ`, then first with `g = f̂(λx)/λ`.
fn scan_lambda(f: &QPoly<'_>, g: &QPoly<'_>) -> Option<ClassifyOutcome> {
    let ctx = f.ctx();
    let find = |h: &QPoly<'_>| {
        ctx.nonzero_elements()
            .find(|&l| h.scale_conjugate(l).as_ref() == Ok(g))
    };
    if let Some(lambda) = find(f) {
        return Some(ClassifyOutcome::ScalarConjugate { lambda });
    }
    find(&f.adjoint()).map(|lambda| ClassifyOutcome::AdjointScalarConjugate { lambda })
}

fn classify_prelude(
    f: &QPoly<'_>,
    g: &QPoly<'_>,
) -> Result<Option<ClassifyOutcome>, CriteriaError> {
    require_strict(f)?;
    require_strict(g)?;
    if !images_equal(f, g) {
        return Ok(Some(ClassifyOutcome::ImagesDiffer));
    }
    Ok(scan_lambda(f, g))
}

/// Classifies a same-image pair of strictly `F_q`-linear polynomials for
/// `2 ≤ n ≤ 4`: `g` must be a scalar or adjoint-scalar conjugate of `f`.
pub fn classify_n_le_4(f: &QPoly<'_>, g: &QPoly<'_>) -> Result<ClassifyOutcome, CriteriaError> {
    let ctx = f.ctx();
    require_n(ctx, (2..=4).contains(&ctx.n()), "in 2..=4")?;
    Ok(
        classify_prelude(f, g)?.unwrap_or_else(|| ClassifyOutcome::Inconsistent {
            diagnostic: format!("no λ with g = f(λx)/λ or g = f̂(λx)/λ for f = {f}, g = {g}"),
        }),
    )
}

/// A map sending `f` to a monomial, if one is found.
fn monomializing_map(f: &QPoly<'_>) -> Result<Option<SemilinearMap>, CriteriaError> {
    let ctx = f.ctx();
    let a = f.coeffs();
    let nz: Vec<usize> = (1..5).filter(|&i| !a[i].is_zero()).collect();
    if let [i] = nz[..] {
        let phi = SemilinearMap::new(
            ctx,
            [
                [FieldElem::ONE, FieldElem::ZERO],
                [ctx.neg(ctx.div_nz(a[0], a[i])), ctx.inv_nz(a[i])],
            ],
            0,
        )?;
        return Ok(Some(phi));
    }
    if nz.len() == 4 {
        match pseudoalg_test(f)? {
            PseudoOutcome::Cond1Witness(phi) | PseudoOutcome::Cond2Witness(phi) => {
                return Ok(Some(phi))
            }
            PseudoOutcome::TraceFallback => return Ok(None),
            PseudoOutcome::None => {}
        }
    }
    let full = (ctx.order() - 1) / (ctx.q() - 1);
    let image = image_of_ratio(f);
    if image.len() as u64 != full {
        return Ok(None);
    }
    let target = image_of_ratio(&QPoly::monomial(ctx, FieldElem::ONE, 1));
    Ok(find_set_equivalence(&image, &target)?)
}

/// Classifies a same-image pair of strictly `F_q`-linear polynomials over
/// `F_{q^5}`.
///
/// Tries scalar and adjoint conjugation first; otherwise transports `f` to a
/// monomial (a normalizing map when `f` is a binomial, the explicit maps of
/// [`pseudoalg_test`], or a set-equivalence search) and certifies both
/// transported polynomials with [`monomial_classify`].
pub fn classify_n5(f: &QPoly<'_>, g: &QPoly<'_>) -> Result<ClassifyOutcome, CriteriaError> {
    let ctx = f.ctx();
    require_n(ctx, ctx.n() == 5, "= 5")?;
    if let Some(outcome) = classify_prelude(f, g)? {
        return Ok(outcome);
    }
    let Some(phi) = monomializing_map(f)? else {
        return Ok(ClassifyOutcome::Inconsistent {
            diagnostic: format!(
                "{g} is not a conjugate of {f}, and {f} is not equivalent to a monomial"
            ),
        });
    };
    let fp = transform_poly(f, &phi)?;
    let gp = match transform_poly(g, &phi) {
        Ok(gp) => gp,
        Err(MoebiusError::NotAdmissible) => {
            return Ok(ClassifyOutcome::Inconsistent {
                diagnostic: format!("{phi} is admissible for {f} but not for {g}"),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let Some((alpha, i)) = fp.as_monomial() else {
        return Ok(ClassifyOutcome::Inconsistent {
            diagnostic: format!("{phi} sends {f} to {fp}, not a monomial"),
        });
    };
    match monomial_classify(&fp, &gp) {
        Ok(MonomialMatch { beta, s }) if ctx.norm(alpha) == ctx.norm(beta) => {
            Ok(ClassifyOutcome::MonomialPair {
                phi,
                i,
                j: s,
                alpha,
                beta,
            })
        }
        Ok(m) => Ok(ClassifyOutcome::Inconsistent {
            diagnostic: format!("N({alpha}) != N({})", m.beta),
        }),
        Err(CriteriaError::Inconsistent(diagnostic)) => {
            Ok(ClassifyOutcome::Inconsistent { diagnostic })
        }
        Err(CriteriaError::ImagesDiffer) => Ok(ClassifyOutcome::Inconsistent {
            diagnostic: format!("transport by {phi} separates the images of {f} and {g}"),
        }),
        Err(e) => Err(e),
    }
}

/// Dispatches on `n`.
pub fn classify(f: &QPoly<'_>, g: &QPoly<'_>) -> Result<ClassifyOutcome, CriteriaError> {
    if f.ctx().n() == 5 {
        classify_n5(f, g)
    } else {
        classify_n_le_4(f, g)
    }
}

// ---------------------------------------------------------------------------
// Exhaustive harness

/// Largest number of coefficient tuples [`exhaustive_same_image`] accepts.
pub const SAME_IMAGE_EXHAUSTIVE_LIMIT: u64 = 1 << 26;

/// Every polynomial `g` (in lexicographic order) with
/// `Im(g(x)/x) = Im(f(x)/x)`, found by enumerating all `q^{n·n}` coefficient
/// tuples. `f` must be strictly `F_q`-linear.
pub fn exhaustive_same_image<'f>(f: &QPoly<'f>) -> Result<Vec<QPoly<'f>>, CriteriaError> {
    let ctx = f.ctx();
    require_strict(f)?;
    if PolyEnumerator::count(ctx).is_none_or(|c| c > SAME_IMAGE_EXHAUSTIVE_LIMIT) {
        return Err(CriteriaError::TooLargeForExhaustive {
            count: format!("{}^{}", ctx.order(), ctx.n()),
            limit: SAME_IMAGE_EXHAUSTIVE_LIMIT,
        });
    }
    let target: ImageSet<'_> = image_of_ratio(f);
    let size = target.len();
    let en = PolyEnumerator::new(ctx);
    let parts = en.par_map_leads(|lead| {
        let mut found = Vec::new();
        let mut stamp = vec![0u32; ctx.order() as usize];
        let mut generation = 0u32;
        en.for_each_with_lead(lead, &mut |coeffs, last| {
            generation += 1;
            let mut distinct = 0;
            for i in 0..last.len() {
                let r = last.ratio(i);
                if !target.contains(r) {
                    return;
                }
                if stamp[r.index()] != generation {
                    stamp[r.index()] = generation;
                    distinct += 1;
                }
            }
            if distinct == size {
                found.push(coeffs.to_vec());
            }
        });
        found
    });
    Ok(parts
        .into_iter()
        .flatten()
        .map(|c| QPoly::new(ctx, c).expect("length n"))
        .collect())
}
