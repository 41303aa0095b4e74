//! Linear sets of rank `n` in `PG(1, q^n)` defined by q-polynomials,
//! the known maximum scattered families, and `PΓL(2, q^n)`-equivalence.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf::{gcd, FieldCtx, FieldElem};
use crate::imageset::{image_of_ratio, ImageSet};
use crate::moebius::{
    find_set_equivalence, moebius_image, transform_poly, MoebiusError, SemilinearMap,
};
use crate::qpoly::QPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinsetError {
    #[error("linear set has no defining polynomial")]
    NoSource,
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameters {
        family: &'static str,
        reason: String,
    },
    #[error("polynomial is not strictly F_q-linear")]
    NotStrictlyLinear,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

/// A point of `PG(1, q^n)` in normalized coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint {
    /// `(1 : m)`.
    Slope(FieldElem),
    /// `(0 : 1)`.
    Infinity,
}

impl ProjPoint {
    /// `⟨(x, y)⟩` for a nonzero vector.
    pub fn from_pair(ctx: &FieldCtx, x: FieldElem, y: FieldElem) -> Option<ProjPoint> {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => None,
            (true, false) => Some(ProjPoint::Infinity),
            (false, _) => Some(ProjPoint::Slope(ctx.div_nz(y, x))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinearSet<'f> {
    slopes: ImageSet<'f>,
    has_infinity: bool,
    source: Option<QPoly<'f>>,
}

impl<'f> LinearSet<'f> {
    /// The point set spanned by arbitrary nonzero vectors.
    pub fn from_vectors(
        ctx: &'f FieldCtx,
        vectors: impl IntoIterator<Item = (FieldElem, FieldElem)>,
    ) -> Self {
        let mut slopes = ImageSet::empty(ctx);
        let mut has_infinity = false;
        for (x, y) in vectors {
            match ProjPoint::from_pair(ctx, x, y) {
                Some(ProjPoint::Slope(m)) => {
                    slopes.insert(m);
                }
                Some(ProjPoint::Infinity) => has_infinity = true,
                None => {}
            }
        }
        LinearSet {
            slopes,
            has_infinity,
            source: None,
        }
    }

    pub fn len(&self) -> usize {
        self.slopes.len() + usize::from(self.has_infinity)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, p: ProjPoint) -> bool {
        match p {
            ProjPoint::Slope(m) => self.slopes.contains(m),
            ProjPoint::Infinity => self.has_infinity,
        }
    }

    pub fn points(&self) -> Vec<ProjPoint> {
        let mut v: Vec<ProjPoint> = self.slopes.iter().map(ProjPoint::Slope).collect();
        if self.has_infinity {
            v.push(ProjPoint::Infinity);
        }
        v
    }

    pub fn source(&self) -> Option<&QPoly<'f>> {
        self.source.as_ref()
    }

    pub fn slopes(&self) -> &ImageSet<'f> {
        &self.slopes
    }
}

impl PartialEq for LinearSet<'_> {
    /// Equality of point sets.
    fn eq(&self, other: &Self) -> bool {
        self.has_infinity == other.has_infinity && self.slopes == other.slopes
    }
}

/// `L_f = {⟨(x, f(x))⟩ : x ≠ 0}`.
pub fn linear_set<'f>(f: &QPoly<'f>) -> LinearSet<'f> {
    LinearSet {
        slopes: image_of_ratio(f),
        has_infinity: false,
        source: Some(f.clone()),
    }
}

/// `|L| = (q^n - 1)/(q - 1)`.
pub fn is_max_scattered(l: &LinearSet<'_>) -> Result<bool, LinsetError> {
    let f = l.source.as_ref().ok_or(LinsetError::NoSource)?;
    let ctx = f.ctx();
    Ok(l.len() as u64 == (ctx.order() - 1) / (ctx.q() - 1))
}

/// The known maximum scattered families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `x^{q^s}`.
    F { s: usize },
    /// `δ x^{q^s} + x^{q^{n-s}}`.
    G { s: usize, delta: FieldElem },
    /// `δ x^{q^s} + x^{q^{s+n/2}}`.
    H { s: usize, delta: FieldElem },
    /// `x^q + x^{q^3} + b x^{q^5}`.
    K { b: FieldElem },
}

pub fn family<'f>(ctx: &'f FieldCtx, fam: Family) -> Result<QPoly<'f>, LinsetError> {
    let n = ctx.n();
    let invalid =
        |family: &'static str, reason: String| LinsetError::InvalidParameters { family, reason };
    let coprime_s = |family: &'static str, s: usize, m: usize| {
        if s == 0 || s >= n || gcd(s, m) != 1 {
            Err(invalid(
                family,
                format!("need 1 <= s < {n} and gcd(s, {m}) = 1, got s = {s}"),
            ))
        } else {
            Ok(())
        }
    };
    let one = FieldElem::ONE;
    let binomial = |c1: FieldElem, i: usize, i2: usize| {
        let mut c = vec![FieldElem::ZERO; n];
        c[i % n] = c1;
        c[i2 % n] = ctx.add(c[i2 % n], one);
        QPoly::new(ctx, c).expect("length n")
    };
    match fam {
        Family::F { s } => {
            coprime_s("f_s", s, n)?;
            Ok(QPoly::monomial(ctx, one, s))
        }
        Family::G { s, delta } => {
            if n < 4 {
                return Err(invalid("g_s,delta", format!("need n >= 4, got {n}")));
            }
            coprime_s("g_s,delta", s, n)?;
            let nd = ctx.norm(delta);
            if nd.is_zero() || nd == one {
                return Err(invalid(
                    "g_s,delta",
                    format!("need N(delta) not in {{0, 1}}, got {nd}"),
                ));
            }
            Ok(binomial(delta, s, n - s))
        }
        Family::H { s, delta } => {
            if n != 6 && n != 8 {
                return Err(invalid("h_s,delta", format!("need n in {{6, 8}}, got {n}")));
            }
            coprime_s("h_s,delta", s, n / 2)?;
            let nd = ctx.norm_rel(delta, n / 2).expect("n/2 divides n");
            if nd.is_zero() || nd == one {
                return Err(invalid(
                    "h_s,delta",
                    format!("need N_(q^n/q^(n/2))(delta) not in {{0, 1}}, got {nd}"),
                ));
            }
            Ok(binomial(delta, s, s + n / 2))
        }
        Family::K { b } => {
            if n != 6 {
                return Err(invalid("k_b", format!("need n = 6, got {n}")));
            }
            if ctx.add(ctx.mul(b, b), b) != one {
                return Err(invalid("k_b", format!("need b^2 + b = 1, got b = {b}")));
            }
            if ![0, 1, 4].contains(&(ctx.q() % 5)) {
                return Err(invalid(
                    "k_b",
                    format!("need q = 0, 1 or 4 mod 5, got q = {}", ctx.q()),
                ));
            }
            let mut c = vec![FieldElem::ZERO; n];
            c[1] = one;
            c[3] = one;
            c[5] = b;
            Ok(QPoly::new(ctx, c).expect("length n"))
        }
    }
}

fn require_strict(f: &QPoly<'_>) -> Result<(), LinsetError> {
    if f.is_strictly_fq_linear() {
        Ok(())
    } else {
        Err(LinsetError::NotStrictlyLinear)
    }
}

/// A map sending `L_f` onto `L_{x^q}`, if `L_f` is of pseudoregulus type.
pub fn is_pseudoregulus_type(f: &QPoly<'_>) -> Result<Option<SemilinearMap>, LinsetError> {
    require_strict(f)?;
    let target = image_of_ratio(&QPoly::monomial(f.ctx(), FieldElem::ONE, 1));
    Ok(find_set_equivalence(&image_of_ratio(f), &target)?)
}

/// A map `φ` with `Im(f_φ(x)/x) = Im(g(x)/x)`, i.e. a collineation taking
/// `L_f` onto `L_g`.
pub fn pgammal_equivalent(
    f: &QPoly<'_>,
    g: &QPoly<'_>,
) -> Result<Option<SemilinearMap>, LinsetError> {
    require_strict(f)?;
    require_strict(g)?;
    let (sf, sg) = (image_of_ratio(f), image_of_ratio(g));
    let found = find_set_equivalence(&sf, &sg)?;
    if let Some(phi) = found {
        let fp = transform_poly(f, &phi)?;
        assert!(
            image_of_ratio(&fp) == sg,
            "equivalence witness failed re-verification"
        );
        debug_assert!(!moebius_image(&sf, &phi).has_inf);
    }
    Ok(found)
}

/// Which `μ` are tested by [`verify_new_example`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MuPolicy {
    /// The smallest `μ` of every admissible norm class, topped up with random
    /// picks to `count` values.
    Sampled { count: usize, seed: u64 },
    /// Every `μ` with `N(μ) ∉ {0, 1}`.
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct MuVerdict {
    pub mu: FieldElem,
    pub norm_mu: FieldElem,
    pub witness: Option<SemilinearMap>,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct ControlResult {
    pub description: String,
    pub witness: Option<SemilinearMap>,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct NewExampleReport {
    pub field: String,
    pub delta: FieldElem,
    pub norm_delta: FieldElem,
    pub linear_set_size: usize,
    pub max_scattered: bool,
    pub policy: MuPolicy,
    pub mu_results: Vec<MuVerdict>,
    pub controls: Vec<ControlResult>,
}

impl NewExampleReport {
    pub fn equivalent_mus(&self) -> Vec<FieldElem> {
        self.mu_results
            .iter()
            .filter(|v| v.witness.is_some())
            .map(|v| v.mu)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.max_scattered
            && self.mu_results.iter().all(|v| v.witness.is_none())
            && self.controls.iter().all(|c| c.witness.is_some())
    }
}

fn select_mus(ctx: &FieldCtx, policy: MuPolicy) -> Vec<FieldElem> {
    let valid = |m: &FieldElem| {
        let nm = ctx.norm(*m);
        !nm.is_zero() && nm != FieldElem::ONE
    };
    match policy {
        MuPolicy::All => ctx.nonzero_elements().filter(valid).collect(),
        MuPolicy::Sampled { count, seed } => {
            let mut chosen: Vec<FieldElem> = Vec::new();
            for m in ctx.nonzero_elements().filter(valid) {
                if !chosen.iter().any(|c| ctx.norm(*c) == ctx.norm(m)) {
                    chosen.push(m);
                }
            }
            let mut rest: Vec<FieldElem> = ctx
                .nonzero_elements()
                .filter(|m| valid(m) && !chosen.contains(m))
                .collect();
            rest.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let extra = count.saturating_sub(chosen.len());
            chosen.extend(rest.into_iter().take(extra));
            chosen
        }
    }
}

/// Checks that `L_{g_{2,δ}}` over `F_{q^5}` is maximum scattered and not
/// equivalent to any tested `L_{g_{1,μ}}`, with positive controls showing the
/// search finds equivalences that do exist.
pub fn verify_new_example(
    ctx: &FieldCtx,
    delta: FieldElem,
    policy: MuPolicy,
    seed: u64,
) -> Result<NewExampleReport, LinsetError> {
    let fail = |msg: String| Err(LinsetError::PreconditionViolated(msg));
    if ctx.n() != 5 {
        return fail(format!("need n = 5, got {}", ctx.n()));
    }
    if ctx.q() <= 2 {
        return fail("need q > 2".into());
    }
    let nd = ctx.norm(delta);
    if nd.is_zero() || nd == FieldElem::ONE {
        return fail(format!("need N(delta) not in {{0, 1}}, got {nd}"));
    }
    if ctx.pow(nd, 5) == FieldElem::ONE {
        return fail(format!("need N(delta)^5 != 1, got N(delta) = {nd}"));
    }
    let g2 = family(ctx, Family::G { s: 2, delta })?;
    let l = linear_set(&g2);
    let mus = select_mus(ctx, policy);
    let mu_results: Vec<MuVerdict> = mus
        .par_iter()
        .map(|&mu| {
            let g1 = family(ctx, Family::G { s: 1, delta: mu }).expect("valid mu");
            let start = Instant::now();
            let witness = pgammal_equivalent(&g2, &g1).expect("strictly linear");
            MuVerdict {
                mu,
                norm_mu: ctx.norm(mu),
                witness,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mu0 = mus.first().copied().unwrap_or(delta);
    let g1 = family(ctx, Family::G { s: 1, delta: mu0 })?;
    let lambda = ctx.random_nonzero(&mut rng);
    let psi = SemilinearMap::random_admissible(&g1, &mut rng);
    let psi2 = SemilinearMap::random_admissible(&g2, &mut rng);
    let candidates = [
        (
            format!("g_1,mu vs g_1,mu(lambda x)/lambda, mu = {mu0}, lambda = {lambda}"),
            g1.clone(),
            g1.scale_conjugate(lambda).expect("nonzero"),
        ),
        (
            format!("g_1,mu vs its transport by {psi}, mu = {mu0}"),
            g1.clone(),
            transform_poly(&g1, &psi)?,
        ),
        (
            format!("g_2,delta vs its transport by {psi2}"),
            g2.clone(),
            transform_poly(&g2, &psi2)?,
        ),
    ];
    let controls = candidates
        .into_iter()
        .map(|(description, a, b)| {
            let start = Instant::now();
            let witness = pgammal_equivalent(&a, &b)?;
            Ok(ControlResult {
                description,
                witness,
                millis: start.elapsed().as_millis(),
            })
        })
        .collect::<Result<Vec<_>, LinsetError>>()?;

    Ok(NewExampleReport {
        field: ctx.spec_string(),
        delta,
        norm_delta: nd,
        linear_set_size: l.len(),
        max_scattered: is_max_scattered(&l)?,
        policy,
        mu_results,
        controls,
    })
}
