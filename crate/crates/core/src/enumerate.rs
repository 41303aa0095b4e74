//! Exhaustive enumeration of all coefficient tuples `(a_0, ..., a_{n-1})`
//! with incremental evaluation of `f(x)/x` over `F_{q^n}^*`.
//!
//! The ratio `f(x)/x = Σ a_i x^{q^i - 1}` is accumulated level by level, so
//! the innermost loop costs one multiplication and one addition per point.

use rayon::prelude::*;

use crate::gf::{FieldCtx, FieldElem};

pub(crate) struct PolyEnumerator<'f> {
    ctx: &'f FieldCtx,
    /// `powers[i][x] = x^{q^i - 1}` for the nonzero `x`, in index order.
    powers: Vec<Vec<FieldElem>>,
}

/// The last enumeration level: ratios are produced lazily so visitors can
/// stop at the first point that rules a candidate out.
pub(crate) struct LastLevel<'a> {
    ctx: &'a FieldCtx,
    partial: &'a [FieldElem],
    top: &'a [FieldElem],
    b: FieldElem,
}

impl LastLevel<'_> {
    /// `f(x)/x` for the `i`-th nonzero element.
    #[inline]
    pub fn ratio(&self, i: usize) -> FieldElem {
        self.ctx
            .add(self.partial[i], self.ctx.mul(self.b, self.top[i]))
    }

    pub fn len(&self) -> usize {
        self.partial.len()
    }
}

impl<'f> PolyEnumerator<'f> {
    pub fn new(ctx: &'f FieldCtx) -> Self {
        let powers = (0..ctx.n())
            .map(|i| {
                ctx.nonzero_elements()
                    .map(|x| ctx.div_nz(ctx.frob_q(x, i), x))
                    .collect()
            })
            .collect();
        PolyEnumerator { ctx, powers }
    }

    /// Total number of coefficient tuples, `q^{n·n}`, if it fits in `u64`.
    pub fn count(ctx: &FieldCtx) -> Option<u64> {
        ctx.order().checked_pow(ctx.n() as u32)
    }

    /// Visits every tuple whose leading coefficient `a_0` is `lead`, in
    /// lexicographic order of the remaining coefficients.
    pub fn for_each_with_lead<F>(&self, lead: FieldElem, visit: &mut F)
    where
        F: FnMut(&[FieldElem], &LastLevel<'_>),
    {
        let n = self.ctx.n();
        let points = self.powers[0].len();
        let mut coeffs = vec![FieldElem::ZERO; n];
        coeffs[0] = lead;
        // partial[k] = Σ_{i<=k} a_i x^{q^i-1}
        let mut partial: Vec<Vec<FieldElem>> = vec![vec![FieldElem::ZERO; points]; n];
        for (slot, &p) in partial[0].iter_mut().zip(&self.powers[0]) {
            *slot = self.ctx.mul(lead, p);
        }
        if n == 1 {
            let level = LastLevel {
                ctx: self.ctx,
                partial: &vec![FieldElem::ZERO; points],
                top: &self.powers[0],
                b: lead,
            };
            visit(&coeffs, &level);
            return;
        }
        self.recurse(1, &mut coeffs, &mut partial, visit);
    }

    fn recurse<F>(
        &self,
        level: usize,
        coeffs: &mut [FieldElem],
        partial: &mut [Vec<FieldElem>],
        visit: &mut F,
    ) where
        F: FnMut(&[FieldElem], &LastLevel<'_>),
    {
        let n = self.ctx.n();
        if level == n - 1 {
            for b in self.ctx.elements() {
                coeffs[level] = b;
                let last = LastLevel {
                    ctx: self.ctx,
                    partial: &partial[level - 1],
                    top: &self.powers[level],
                    b,
                };
                visit(coeffs, &last);
            }
            return;
        }
        for b in self.ctx.elements() {
            coeffs[level] = b;
            let (done, rest) = partial.split_at_mut(level);
            let prev = &done[level - 1];
            for ((slot, &acc), &p) in rest[0].iter_mut().zip(prev).zip(&self.powers[level]) {
                *slot = self.ctx.add(acc, self.ctx.mul(b, p));
            }
            self.recurse(level + 1, coeffs, partial, visit);
        }
    }

    /// Maps every leading coefficient `a_0` (in parallel) and returns the
    /// results in increasing order of `a_0`.
    pub fn par_map_leads<T, F>(&self, per_lead: F) -> Vec<T>
    where
        T: Send,
        F: Fn(FieldElem) -> T + Sync,
    {
        let leads: Vec<FieldElem> = self.ctx.elements().collect();
        leads.par_iter().map(|&lead| per_lead(lead)).collect()
    }
}

/// True iff no prime divisor `r` of `n` divides every index in the support,
/// i.e. the tuple is nonzero and strictly `F_q`-linear.
pub(crate) fn strictly_linear_tuple(coeffs: &[FieldElem], prime_divisors: &[usize]) -> bool {
    if coeffs.iter().all(|c| c.is_zero()) {
        return false;
    }
    prime_divisors.iter().all(|&r| {
        coeffs
            .iter()
            .enumerate()
            .any(|(i, c)| !c.is_zero() && i % r != 0)
    })
}

pub(crate) fn prime_divisors(n: usize) -> Vec<usize> {
    (2..=n)
        .filter(|&r| n.is_multiple_of(r) && (2..r).all(|d| r % d != 0))
        .collect()
}
