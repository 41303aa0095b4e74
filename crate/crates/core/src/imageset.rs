//! The set `Im(f(x)/x) = { f(x)/x : x ∈ F_{q^n}^* }`, its size bounds, power
//! sums, and empirical size spectra.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::enumerate::{prime_divisors, strictly_linear_tuple, PolyEnumerator};
use crate::gf::{FieldCtx, FieldElem};
use crate::qpoly::QPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImageSetError {
    #[error("exhaustive enumeration of {count} polynomials exceeds the limit of {limit}")]
    TooLargeForExhaustive { count: String, limit: u64 },
    #[error("power-sum exponent {d} outside 1..={max}")]
    InvalidExponent { d: u64, max: u64 },
}

/// Dense membership set over `F_{q^n}`, indexed by raw element index.
#[derive(Clone)]
pub struct ImageSet<'f> {
    ctx: &'f FieldCtx,
    words: Vec<u64>,
    len: usize,
}

impl PartialEq for ImageSet<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.words == other.words
    }
}

impl Eq for ImageSet<'_> {}

impl fmt::Debug for ImageSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl<'f> ImageSet<'f> {
    pub fn empty(ctx: &'f FieldCtx) -> Self {
        ImageSet {
            ctx,
            words: vec![0; (ctx.order() as usize).div_ceil(64)],
            len: 0,
        }
    }

    pub fn from_elements(ctx: &'f FieldCtx, elems: impl IntoIterator<Item = FieldElem>) -> Self {
        let mut set = Self::empty(ctx);
        for e in elems {
            set.insert(e);
        }
        set
    }

    pub fn insert(&mut self, e: FieldElem) -> bool {
        let (w, b) = (e.index() / 64, e.index() % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        if fresh {
            self.words[w] |= 1 << b;
            self.len += 1;
        }
        fresh
    }

    #[inline]
    pub fn contains(&self, e: FieldElem) -> bool {
        self.words[e.index() / 64] & (1 << (e.index() % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn ctx(&self) -> &'f FieldCtx {
        self.ctx
    }

    /// Elements in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = FieldElem> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                Some(FieldElem::from_raw(w as u32 * 64 + b))
            })
        })
    }

    pub fn to_vec(&self) -> Vec<FieldElem> {
        self.iter().collect()
    }
}

/// `Im(f(x)/x)`; for the zero map this is `{0}`.
pub fn image_of_ratio<'f>(f: &QPoly<'f>) -> ImageSet<'f> {
    let ctx = f.ctx();
    ImageSet::from_elements(
        ctx,
        ctx.nonzero_elements().map(|x| ctx.div_nz(f.eval(x), x)),
    )
}

pub fn images_equal(f: &QPoly<'_>, g: &QPoly<'_>) -> bool {
    image_of_ratio(f) == image_of_ratio(g)
}

/// `(q^{n-1} + 1, (q^n - 1)/(q - 1))`: the window for `|Im(f(x)/x)|` when
/// `f` is strictly `F_q`-linear.
pub fn direction_bounds(ctx: &FieldCtx) -> (u64, u64) {
    let q = ctx.q();
    let n = ctx.n() as u32;
    (q.pow(n - 1) + 1, (ctx.order() - 1) / (q - 1))
}

/// `Σ_{x ≠ 0} (f(x)/x)^d`.
pub fn power_sum(f: &QPoly<'_>, d: u64) -> Result<FieldElem, ImageSetError> {
    let ctx = f.ctx();
    let max = ctx.order() - 1;
    if d == 0 || d > max {
        return Err(ImageSetError::InvalidExponent { d, max });
    }
    Ok(ctx.sum(
        ctx.nonzero_elements()
            .map(|x| ctx.pow(ctx.div_nz(f.eval(x), x), d)),
    ))
}

/// How [`survey_image_sizes`] draws polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurveyMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct SurveyRow<'f> {
    pub size: usize,
    pub count: u64,
    /// Lexicographically least coefficient tuple of this size among those seen.
    pub representative: QPoly<'f>,
}

#[derive(Debug, Clone)]
pub struct Survey<'f> {
    pub rows: Vec<SurveyRow<'f>>,
    /// Number of strictly `F_q`-linear polynomials examined.
    pub checked: u64,
}

impl Survey<'_> {
    pub fn sizes(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.size).collect()
    }
}

/// Largest number of coefficient tuples the exhaustive survey accepts.
pub const SURVEY_EXHAUSTIVE_LIMIT: u64 = 1 << 32;

/// Histogram of `|Im(f(x)/x)|` over strictly `F_q`-linear `f`.
pub fn survey_image_sizes<'f>(
    ctx: &'f FieldCtx,
    mode: SurveyMode,
) -> Result<Survey<'f>, ImageSetError> {
    type Hist = BTreeMap<usize, (u64, Vec<FieldElem>)>;
    fn record(hist: &mut Hist, size: usize, coeffs: &[FieldElem]) {
        hist.entry(size)
            .and_modify(|(count, rep)| {
                *count += 1;
                if coeffs < rep.as_slice() {
                    *rep = coeffs.to_vec();
                }
            })
            .or_insert_with(|| (1, coeffs.to_vec()));
    }

    let primes = prime_divisors(ctx.n());
    let mut hist = Hist::new();
    match mode {
        SurveyMode::Exhaustive => {
            let total = PolyEnumerator::count(ctx).filter(|&c| c <= SURVEY_EXHAUSTIVE_LIMIT);
            if total.is_none() {
                return Err(ImageSetError::TooLargeForExhaustive {
                    count: format!("{}^{}", ctx.order(), ctx.n()),
                    limit: SURVEY_EXHAUSTIVE_LIMIT,
                });
            }
            let en = PolyEnumerator::new(ctx);
            let parts = en.par_map_leads(|lead| {
                let mut local = Hist::new();
                let mut seen = ImageSet::empty(ctx);
                en.for_each_with_lead(lead, &mut |coeffs, last| {
                    if !strictly_linear_tuple(coeffs, &primes) {
                        return;
                    }
                    seen.words.iter_mut().for_each(|w| *w = 0);
                    seen.len = 0;
                    for i in 0..last.len() {
                        seen.insert(last.ratio(i));
                    }
                    record(&mut local, seen.len, coeffs);
                });
                local
            });
            for part in parts {
                for (size, (count, rep)) in part {
                    hist.entry(size)
                        .and_modify(|(c, r)| {
                            *c += count;
                            if rep < *r {
                                *r = rep.clone();
                            }
                        })
                        .or_insert((count, rep));
                }
            }
        }
        SurveyMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut drawn = 0;
            while drawn < count {
                let f = QPoly::random(ctx, &mut rng);
                if !strictly_linear_tuple(f.coeffs(), &primes) {
                    continue;
                }
                drawn += 1;
                record(&mut hist, image_of_ratio(&f).len(), f.coeffs());
            }
        }
    }
    let rows: Vec<SurveyRow<'f>> = hist
        .into_iter()
        .map(|(size, (count, rep))| SurveyRow {
            size,
            count,
            representative: QPoly::new(ctx, rep).expect("length n"),
        })
        .collect();
    let checked = rows.iter().map(|r| r.count).sum();
    Ok(Survey { rows, checked })
}
