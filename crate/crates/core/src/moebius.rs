//! Semilinear maps of `ΓL(2, q^n)` acting on graphs of q-polynomials and,
//! projectively, on image sets.
//!
//! A map `φ = ([[a, b], [c, d]], σ)` with `σ: x ↦ x^{p^e}` sends a vector `v`
//! to `M·v^σ`. On the graph `{(x, f(x))}` this yields a new graph
//! `{(x, f_φ(x))}` whenever the first coordinate is a bijection, and on slopes
//! it acts as `z ↦ (c + d z^σ)/(a + b z^σ)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf::{FieldCtx, FieldElem};
use crate::imageset::{image_of_ratio, ImageSet};
use crate::qpoly::{QPoly, QPolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoebiusError {
    #[error("matrix is singular")]
    Singular,
    #[error("map is not admissible for this polynomial")]
    NotAdmissible,
    #[error("set has {size} elements; at least 3 are needed")]
    DegenerateSet { size: usize },
    #[error("cannot parse semilinear map {text:?}: {msg}")]
    Parse { text: String, msg: String },
    #[error(transparent)]
    Poly(#[from] QPolyError),
}

/// A point of `PG(1, q^n)` written as a slope: finite `m` for `(1 : m)`, or
/// `Inf` for `(0 : 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjValue {
    Finite(FieldElem),
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    a: FieldElem,
    b: FieldElem,
    c: FieldElem,
    d: FieldElem,
    sigma_exp: usize,
}

impl SemilinearMap {
    pub fn new(
        ctx: &FieldCtx,
        [[a, b], [c, d]]: [[FieldElem; 2]; 2],
        sigma_exp: usize,
    ) -> Result<Self, MoebiusError> {
        if ctx.sub(ctx.mul(a, d), ctx.mul(b, c)).is_zero() {
            return Err(MoebiusError::Singular);
        }
        Ok(SemilinearMap {
            a,
            b,
            c,
            d,
            sigma_exp: sigma_exp % ctx.degree(),
        })
    }

    pub fn identity() -> Self {
        SemilinearMap {
            a: FieldElem::ONE,
            b: FieldElem::ZERO,
            c: FieldElem::ZERO,
            d: FieldElem::ONE,
            sigma_exp: 0,
        }
    }

    pub fn matrix(&self) -> [[FieldElem; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// `e` with `σ: x ↦ x^{p^e}`.
    pub fn sigma_exp(&self) -> usize {
        self.sigma_exp
    }

    pub fn is_linear(&self) -> bool {
        self.sigma_exp == 0
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, ctx: &FieldCtx, first: &SemilinearMap) -> SemilinearMap {
        let e = self.sigma_exp;
        let [[a1, b1], [c1, d1]] = first.matrix().map(|row| row.map(|x| ctx.frobenius(x, e)));
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let dot = |x: FieldElem, y: FieldElem, z: FieldElem, w: FieldElem| {
            ctx.add(ctx.mul(x, y), ctx.mul(z, w))
        };
        SemilinearMap {
            a: dot(a, a1, b, c1),
            b: dot(a, b1, b, d1),
            c: dot(c, a1, d, c1),
            d: dot(c, b1, d, d1),
            sigma_exp: (e + first.sigma_exp) % ctx.degree(),
        }
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> SemilinearMap {
        let back = (ctx.degree() - self.sigma_exp) % ctx.degree();
        let det = ctx.sub(ctx.mul(self.a, self.d), ctx.mul(self.b, self.c));
        let inv_det = ctx.inv_nz(det);
        let f = |x: FieldElem| ctx.frobenius(ctx.mul(x, inv_det), back);
        SemilinearMap {
            a: f(self.d),
            b: f(ctx.neg(self.b)),
            c: f(ctx.neg(self.c)),
            d: f(self.a),
            sigma_exp: back,
        }
    }

    /// Scales the matrix so its first nonzero entry (row-major) is 1. The
    /// projective action is unchanged.
    pub fn canonicalize(&self, ctx: &FieldCtx) -> SemilinearMap {
        let lead = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("nonsingular matrix has a nonzero entry");
        let s = ctx.inv_nz(lead);
        SemilinearMap {
            a: ctx.mul(s, self.a),
            b: ctx.mul(s, self.b),
            c: ctx.mul(s, self.c),
            d: ctx.mul(s, self.d),
            sigma_exp: self.sigma_exp,
        }
    }

    /// `M · (x, y)^σ`.
    pub fn apply_vec(
        &self,
        ctx: &FieldCtx,
        (x, y): (FieldElem, FieldElem),
    ) -> (FieldElem, FieldElem) {
        let (xs, ys) = (
            ctx.frobenius(x, self.sigma_exp),
            ctx.frobenius(y, self.sigma_exp),
        );
        (
            ctx.add(ctx.mul(self.a, xs), ctx.mul(self.b, ys)),
            ctx.add(ctx.mul(self.c, xs), ctx.mul(self.d, ys)),
        )
    }

    /// The induced map on slopes, `z ↦ (c + d z^σ)/(a + b z^σ)`.
    pub fn apply_proj(&self, ctx: &FieldCtx, z: ProjValue) -> ProjValue {
        let (num, den) = match z {
            ProjValue::Inf => (self.d, self.b),
            ProjValue::Finite(z) => {
                let zs = ctx.frobenius(z, self.sigma_exp);
                (
                    ctx.add(self.c, ctx.mul(self.d, zs)),
                    ctx.add(self.a, ctx.mul(self.b, zs)),
                )
            }
        };
        if den.is_zero() {
            ProjValue::Inf
        } else {
            ProjValue::Finite(ctx.div_nz(num, den))
        }
    }

    /// A uniformly random element of `ΓL(2, q^n)`.
    pub fn random<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> SemilinearMap {
        loop {
            let m = [
                [ctx.random(rng), ctx.random(rng)],
                [ctx.random(rng), ctx.random(rng)],
            ];
            if let Ok(phi) = SemilinearMap::new(ctx, m, rng.gen_range(0..ctx.degree())) {
                return phi;
            }
        }
    }

    /// A uniformly random element of `GL(2, q^n)`.
    pub fn random_linear<R: Rng + ?Sized>(ctx: &FieldCtx, rng: &mut R) -> SemilinearMap {
        loop {
            let m = [
                [ctx.random(rng), ctx.random(rng)],
                [ctx.random(rng), ctx.random(rng)],
            ];
            if let Ok(phi) = SemilinearMap::new(ctx, m, 0) {
                return phi;
            }
        }
    }

    /// A random map admissible for `f`.
    pub fn random_admissible<R: Rng + ?Sized>(f: &QPoly<'_>, rng: &mut R) -> SemilinearMap {
        let image = image_of_ratio(f);
        loop {
            let phi = SemilinearMap::random(f.ctx(), rng);
            if admissible_for_image(f.ctx(), &image, &phi) {
                return phi;
            }
        }
    }
}

impl fmt::Display for SemilinearMap {
    /// `[[a,b],[c,d]];sigma=p^e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]];sigma=p^{}",
            self.a, self.b, self.c, self.d, self.sigma_exp
        )
    }
}

/// Splits `[[a,b],[c,d]];sigma=p^e` into its four entry strings and `e`.
fn split_map_text(text: &str) -> Result<(Vec<String>, usize), MoebiusError> {
    let err = |msg: &str| MoebiusError::Parse {
        text: text.to_string(),
        msg: msg.to_string(),
    };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (mat, sigma) = compact
        .split_once(";sigma=p^")
        .ok_or_else(|| err("expected ';sigma=p^e'"))?;
    let sigma_exp: usize = sigma.parse().map_err(|_| err("bad exponent"))?;
    let inner = mat
        .strip_prefix("[[")
        .and_then(|m| m.strip_suffix("]]"))
        .ok_or_else(|| err("expected [[a,b],[c,d]]"))?;
    let rows: Vec<&str> = inner.split("],[").collect();
    let entries: Vec<String> = rows
        .iter()
        .flat_map(|row| row.split(','))
        .map(str::to_string)
        .collect();
    if rows.len() != 2 || entries.len() != 4 {
        return Err(err("expected four entries in two rows"));
    }
    Ok((entries, sigma_exp))
}

impl SemilinearMap {
    /// Parses the [`Display`](fmt::Display) form, reducing exponents and
    /// checking the determinant.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Self, MoebiusError> {
        let (entries, e) = split_map_text(text)?;
        let vals = entries
            .iter()
            .map(|s| {
                ctx.parse_elem(s).map_err(|err| MoebiusError::Parse {
                    text: text.to_string(),
                    msg: err.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        SemilinearMap::new(ctx, [[vals[0], vals[1]], [vals[2], vals[3]]], e)
    }
}

impl FromStr for SemilinearMap {
    type Err = MoebiusError;

    /// Field-free parse of the [`Display`](fmt::Display) form; exponents must
    /// already be reduced. Prefer [`SemilinearMap::parse`] when a field is at hand.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (entries, sigma_exp) = split_map_text(text)?;
        let vals = entries
            .iter()
            .map(|s| {
                let (zero, k) =
                    FieldElem::parse_log_notation(s).map_err(|e| MoebiusError::Parse {
                        text: text.to_string(),
                        msg: e.to_string(),
                    })?;
                let k = u32::try_from(k)
                    .ok()
                    .filter(|&k| k < u32::MAX)
                    .ok_or_else(|| MoebiusError::Parse {
                        text: text.to_string(),
                        msg: "exponent out of range".into(),
                    })?;
                Ok(if zero {
                    FieldElem::ZERO
                } else {
                    FieldElem::from_log(k)
                })
            })
            .collect::<Result<Vec<_>, MoebiusError>>()?;
        Ok(SemilinearMap {
            a: vals[0],
            b: vals[1],
            c: vals[2],
            d: vals[3],
            sigma_exp,
        })
    }
}

impl Serialize for SemilinearMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SemilinearMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

fn admissible_for_image(ctx: &FieldCtx, image: &ImageSet<'_>, phi: &SemilinearMap) -> bool {
    if phi.b.is_zero() {
        return true;
    }
    let back = (ctx.degree() - phi.sigma_exp) % ctx.degree();
    let pole = ctx.frobenius(ctx.neg(ctx.div_nz(phi.a, phi.b)), back);
    !image.contains(pole)
}

/// `b = 0` or `-(a/b)^{σ^{-1}} ∉ Im(f(x)/x)`; equivalently the first
/// coordinate `x ↦ a x^σ + b f(x)^σ` is invertible.
pub fn is_admissible(f: &QPoly<'_>, phi: &SemilinearMap) -> bool {
    admissible_for_image(f.ctx(), &image_of_ratio(f), phi)
}

/// The polynomial `f_φ` whose graph is the image of the graph of `f` under `φ`.
pub fn transform_poly<'f>(f: &QPoly<'f>, phi: &SemilinearMap) -> Result<QPoly<'f>, MoebiusError> {
    let ctx = f.ctx();
    let back = (ctx.degree() - phi.sigma_exp) % ctx.degree();
    let [[a, b], [c, d]] = phi.matrix().map(|row| row.map(|x| ctx.frobenius(x, back)));
    let id = QPoly::identity(ctx);
    // (k, h)(u) = σ(K u, H u), so f_φ = σ ∘ H ∘ K^{-1} ∘ σ^{-1}.
    let k = id.scale(a).add(&f.scale(b));
    let h = id.scale(c).add(&f.scale(d));
    let k_inv = k.inverse().map_err(|e| match e {
        QPolyError::NotInvertible => MoebiusError::NotAdmissible,
        other => other.into(),
    })?;
    Ok(h.compose(&k_inv).frobenius_twist(phi.sigma_exp))
}

/// Checks pointwise that `φ` maps the graph of `f` onto the graph of `g`.
pub fn graph_matches(f: &QPoly<'_>, phi: &SemilinearMap, g: &QPoly<'_>) -> bool {
    let ctx = f.ctx();
    ctx.elements().all(|u| {
        let (x, y) = phi.apply_vec(ctx, (u, f.eval(u)));
        g.eval(x) == y
    })
}

/// Image of a set of slopes under `φ`: the finite part plus whether `∞` occurs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjImage<'f> {
    pub finite: ImageSet<'f>,
    pub has_inf: bool,
}

impl ProjImage<'_> {
    pub fn len(&self) -> usize {
        self.finite.len() + usize::from(self.has_inf)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> Vec<ProjValue> {
        let mut v: Vec<ProjValue> = self.finite.iter().map(ProjValue::Finite).collect();
        if self.has_inf {
            v.push(ProjValue::Inf);
        }
        v
    }
}

/// `{(c + d z^σ)/(a + b z^σ) : z ∈ S}`.
pub fn moebius_image<'f>(set: &ImageSet<'f>, phi: &SemilinearMap) -> ProjImage<'f> {
    let ctx = set.ctx();
    let mut finite = ImageSet::empty(ctx);
    let mut has_inf = false;
    for z in set.iter() {
        match phi.apply_proj(ctx, ProjValue::Finite(z)) {
            ProjValue::Finite(w) => {
                finite.insert(w);
            }
            ProjValue::Inf => has_inf = true,
        }
    }
    ProjImage { finite, has_inf }
}

/// Coefficients `(α, β, γ, δ)` of the Möbius map `u ↦ (αu + β)/(γu + δ)`
/// sending distinct `u1, u2, u3` to `0, ∞, 1`.
fn to_standard_frame(ctx: &FieldCtx, [u1, u2, u3]: [FieldElem; 3]) -> [FieldElem; 4] {
    let r = ctx.sub(u3, u2);
    let s = ctx.sub(u3, u1);
    [r, ctx.neg(ctx.mul(u1, r)), s, ctx.neg(ctx.mul(u2, s))]
}

/// The linear Möbius map sending the distinct points `u_i` to `t_i`, as a
/// matrix `[[a, b], [c, d]]` acting by `u ↦ (c + d u)/(a + b u)`.
fn three_point_map(ctx: &FieldCtx, u: [FieldElem; 3], t: [FieldElem; 3]) -> [FieldElem; 4] {
    let [a1, b1, c1, d1] = to_standard_frame(ctx, u);
    let [a2, b2, c2, d2] = to_standard_frame(ctx, t);
    // B^{-1} ∘ A with B^{-1} = [[d2, -b2], [-c2, a2]] in (αu+β)/(γu+δ) form.
    let dot = |x: FieldElem, y: FieldElem, z: FieldElem, w: FieldElem| {
        ctx.add(ctx.mul(x, y), ctx.mul(z, w))
    };
    let alpha = dot(d2, a1, ctx.neg(b2), c1);
    let beta = dot(d2, b1, ctx.neg(b2), d1);
    let gamma = dot(ctx.neg(c2), a1, a2, c1);
    let delta = dot(ctx.neg(c2), b1, a2, d1);
    [delta, gamma, beta, alpha]
}

/// Searches `ΓL(2, q^n)` for `φ` with `moebius_image(S, φ) = T` and no point
/// sent to `∞`.
///
/// For each automorphism `σ` the three smallest points of `S^σ` are anchored
/// and every ordered triple of distinct points of `T` is tried. The first hit
/// in `(σ, t1, t2, t3)` order is returned, canonicalized and re-verified.
pub fn find_set_equivalence(
    s: &ImageSet<'_>,
    t: &ImageSet<'_>,
) -> Result<Option<SemilinearMap>, MoebiusError> {
    let ctx = s.ctx();
    if s.len() < 3 {
        return Err(MoebiusError::DegenerateSet { size: s.len() });
    }
    if s.len() != t.len() {
        return Ok(None);
    }
    if s == t {
        return Ok(Some(SemilinearMap::identity()));
    }
    let targets = t.to_vec();
    let src = s.to_vec();
    let tasks: Vec<(usize, usize)> = (0..ctx.degree())
        .flat_map(|e| (0..targets.len()).map(move |i| (e, i)))
        .collect();
    let images: Vec<Vec<FieldElem>> = (0..ctx.degree())
        .map(|e| {
            let mut v: Vec<FieldElem> = src.iter().map(|&z| ctx.frobenius(z, e)).collect();
            v.sort_unstable();
            v
        })
        .collect();

    let found = tasks.par_iter().find_map_first(|&(e, i)| {
        let pts = &images[e];
        let anchors = [pts[0], pts[1], pts[2]];
        let t1 = targets[i];
        for &t2 in &targets {
            if t2 == t1 {
                continue;
            }
            for &t3 in &targets {
                if t3 == t1 || t3 == t2 {
                    continue;
                }
                let [a, b, c, d] = three_point_map(ctx, anchors, [t1, t2, t3]);
                let hits = pts[3..].iter().all(|&u| {
                    let den = ctx.add(a, ctx.mul(b, u));
                    !den.is_zero() && t.contains(ctx.div_nz(ctx.add(c, ctx.mul(d, u)), den))
                });
                if hits {
                    return Some(SemilinearMap {
                        a,
                        b,
                        c,
                        d,
                        sigma_exp: e,
                    });
                }
            }
        }
        None
    });

    Ok(found.map(|phi| {
        let phi = phi.canonicalize(ctx);
        let img = moebius_image(s, &phi);
        assert!(
            !img.has_inf && img.finite == *t,
            "set-equivalence witness failed re-verification"
        );
        phi
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q2n5() -> FieldCtx {
        FieldCtx::new(2, 1, 5).unwrap()
    }

    #[test]
    fn construction_and_group_law() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let z = FieldElem::ZERO;
        let one = FieldElem::ONE;
        assert_eq!(
            SemilinearMap::new(&ctx, [[one, one], [one, one]], 0),
            Err(MoebiusError::Singular)
        );
        assert!(SemilinearMap::new(&ctx, [[z, one], [one, z]], 1).is_ok());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p1 = SemilinearMap::random(&ctx, &mut rng);
            let p2 = SemilinearMap::random(&ctx, &mut rng);
            let x = ctx.random(&mut rng);
            let y = ctx.random(&mut rng);
            let comp = p2.compose(&ctx, &p1);
            assert_eq!(
                comp.apply_vec(&ctx, (x, y)),
                p2.apply_vec(&ctx, p1.apply_vec(&ctx, (x, y)))
            );
            let inv = p1.inverse(&ctx);
            assert_eq!(inv.apply_vec(&ctx, p1.apply_vec(&ctx, (x, y))), (x, y));
            assert_eq!(p1.compose(&ctx, &inv), SemilinearMap::identity());
        }
    }

    #[test]
    fn display_round_trip() {
        let ctx = FieldCtx::new(3, 1, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let phi = SemilinearMap::random(&ctx, &mut rng);
            let text = phi.to_string();
            assert_eq!(text.parse::<SemilinearMap>().unwrap(), phi);
            assert_eq!(SemilinearMap::parse(&ctx, &text).unwrap(), phi);
            let json = serde_json::to_string(&phi).unwrap();
            assert_eq!(json, format!("\"{text}\""));
            assert_eq!(serde_json::from_str::<SemilinearMap>(&json).unwrap(), phi);
        }
        assert_eq!(
            SemilinearMap::identity().to_string(),
            "[[g^0,0],[0,g^0]];sigma=p^0"
        );
        assert!("[[1,0],[0]];sigma=p^0".parse::<SemilinearMap>().is_err());
        assert_eq!(
            SemilinearMap::parse(&ctx, "[[1,1],[1,1]];sigma=p^0"),
            Err(MoebiusError::Singular)
        );
        assert_eq!(
            SemilinearMap::parse(&ctx, "[[g^242,0],[0,1]];sigma=p^6")
                .unwrap()
                .to_string(),
            "[[g^0,0],[0,g^0]];sigma=p^1"
        );
    }

    #[test]
    fn admissibility_examples() {
        let ctx = q2n5();
        let xq = QPoly::monomial(&ctx, FieldElem::ONE, 1);
        let swap = SemilinearMap::new(
            &ctx,
            [
                [FieldElem::ZERO, FieldElem::ONE],
                [FieldElem::ONE, FieldElem::ZERO],
            ],
            0,
        )
        .unwrap();
        assert!(is_admissible(&xq, &swap));
        assert_eq!(
            transform_poly(&xq, &swap).unwrap(),
            QPoly::monomial(&ctx, FieldElem::ONE, 4)
        );
        assert!(is_admissible(&xq, &SemilinearMap::identity()));
        // -(a/b) = 1 lies in Im(x^{q-1}) = F_32^*.
        let bad = SemilinearMap::new(
            &ctx,
            [
                [FieldElem::ONE, FieldElem::ONE],
                [FieldElem::ZERO, FieldElem::ONE],
            ],
            0,
        )
        .unwrap();
        assert!(!is_admissible(&xq, &bad));
        assert_eq!(transform_poly(&xq, &bad), Err(MoebiusError::NotAdmissible));
    }

    #[test]
    fn transform_matches_graph_and_moebius_image() {
        for ctx in [
            q2n5(),
            FieldCtx::new(3, 1, 3).unwrap(),
            FieldCtx::new(2, 2, 2).unwrap(),
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.order());
            for _ in 0..100 {
                let f = QPoly::random(&ctx, &mut rng);
                let phi = SemilinearMap::random(&ctx, &mut rng);
                let admissible = is_admissible(&f, &phi);
                let img = moebius_image(&image_of_ratio(&f), &phi);
                match transform_poly(&f, &phi) {
                    Ok(g) => {
                        assert!(admissible);
                        assert!(graph_matches(&f, &phi, &g));
                        assert!(!img.has_inf);
                        assert_eq!(img.finite, image_of_ratio(&g));
                    }
                    Err(MoebiusError::NotAdmissible) => {
                        assert!(!admissible);
                        assert!(img.has_inf);
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn scalar_matrices_fix_images() {
        let ctx = FieldCtx::new(3, 1, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let f = QPoly::random(&ctx, &mut rng);
            let l = ctx.random_nonzero(&mut rng);
            let phi =
                SemilinearMap::new(&ctx, [[l, FieldElem::ZERO], [FieldElem::ZERO, l]], 0).unwrap();
            let s = image_of_ratio(&f);
            let img = moebius_image(&s, &phi);
            assert!(!img.has_inf);
            assert_eq!(img.finite, s);
        }
    }

    #[test]
    fn diagonal_map_realizes_scale_conjugate() {
        let ctx = FieldCtx::new(3, 1, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let f = QPoly::random(&ctx, &mut rng);
            let l = ctx.random_nonzero(&mut rng);
            let li = ctx.inv_nz(l);
            // (u, f(u)) ↦ (u/λ, f(u)/λ) = (x, f(λx)/λ).
            let phi = SemilinearMap::new(&ctx, [[li, FieldElem::ZERO], [FieldElem::ZERO, li]], 0)
                .unwrap();
            assert_eq!(
                transform_poly(&f, &phi).unwrap(),
                f.scale_conjugate(l).unwrap()
            );
        }
    }

    #[test]
    fn three_point_solver() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let pick3 = |rng: &mut ChaCha8Rng| loop {
                let v = [ctx.random(rng), ctx.random(rng), ctx.random(rng)];
                if v[0] != v[1] && v[1] != v[2] && v[0] != v[2] {
                    return v;
                }
            };
            let u = pick3(&mut rng);
            let t = pick3(&mut rng);
            let [a, b, c, d] = three_point_map(&ctx, u, t);
            let phi = SemilinearMap::new(&ctx, [[a, b], [c, d]], 0).unwrap();
            for k in 0..3 {
                assert_eq!(
                    phi.apply_proj(&ctx, ProjValue::Finite(u[k])),
                    ProjValue::Finite(t[k])
                );
            }
        }
    }

    #[test]
    fn set_equivalence_search() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let tr = image_of_ratio(&QPoly::trace(&ctx));
        assert_eq!(
            find_set_equivalence(&tr, &tr).unwrap(),
            Some(SemilinearMap::identity())
        );
        let single = image_of_ratio(&QPoly::identity(&ctx));
        assert_eq!(
            find_set_equivalence(&single, &tr),
            Err(MoebiusError::DegenerateSet { size: 1 })
        );
        let xq = image_of_ratio(&QPoly::monomial(&ctx, FieldElem::ONE, 1));
        assert_eq!(find_set_equivalence(&tr, &xq).unwrap(), None);
        for _ in 0..10 {
            let f = QPoly::random(&ctx, &mut rng);
            if !f.is_strictly_fq_linear() {
                continue;
            }
            let phi = SemilinearMap::random_admissible(&f, &mut rng);
            let g = transform_poly(&f, &phi).unwrap();
            let w = find_set_equivalence(&image_of_ratio(&f), &image_of_ratio(&g))
                .unwrap()
                .expect("transported image is equivalent");
            assert_eq!(
                moebius_image(&image_of_ratio(&f), &w).finite,
                image_of_ratio(&g)
            );
            assert_eq!(w, w.canonicalize(&ctx));
        }
    }
}
