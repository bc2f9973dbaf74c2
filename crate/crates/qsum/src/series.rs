//! Adaptive summation of unilateral and bilateral basic hypergeometric
//! series, including multi-base products and an optional triangular-power
//! factor.
//!
//! A term is
//!
//! ```text
//! T_k = z^k · g^(k(k-1)/2)
//!       · prod_i (a_i; q)_k / prod_j (b_j; q)_k     (principal base)
//!       · prod over groups of the analogous ratio    (auxiliary bases)
//!       / (q;q)_k                                    (unilateral only)
//! ```
//!
//! Sums are built incrementally: the one-step ratio `T_{k+1}/T_k` is the
//! product of the linear factors `(1 - c q^k)` read directly off the
//! [`SeriesSpec`], which costs O(1) per term and is valid for every
//! integer `k`.

use crate::arith::{Complex, PrecisionContext, Real};
use crate::error::{Error, Result};

/// Default term cap; geometric convergence at `|q| <= 0.9` needs far
/// fewer, so the cap only trips on near-divergent parameter choices.
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// Consecutive below-threshold terms required to declare convergence.
/// Squared-base factors can make alternate terms small spuriously, so a
/// single small term is not enough.
const SMALL_RUN: usize = 5;
/// Consecutive growing terms required to declare divergence.
const GROWTH_RUN: usize = 10;
/// Steps before growth counts toward divergence (skips transients).
const GROWTH_MIN_STEPS: usize = 50;

// ---------------------------------------------------------------------------
// Spec and result types
// ---------------------------------------------------------------------------

/// One auxiliary base with its own Pochhammer parameter lists.
#[derive(Clone, Debug)]
pub struct SeriesGroup {
    pub base: Complex,
    pub numerators: Vec<Complex>,
    pub denominators: Vec<Complex>,
}

/// A declarative series description; see the module docs for the term
/// shape it denotes.
#[derive(Clone, Debug)]
pub struct SeriesSpec {
    /// Principal base `q`; modulus must lie in (0,1).
    pub base: Complex,
    /// Numerator parameters `a_i` paired with the principal base.
    pub base_numerators: Vec<Complex>,
    /// Denominator parameters `b_j` paired with the principal base.
    pub base_denominators: Vec<Complex>,
    /// Auxiliary bases with their own parameter lists.
    pub groups: Vec<SeriesGroup>,
    /// Series argument.
    pub z: Complex,
    /// Sum over all integers `k` rather than `k >= 0`; bilateral sums do
    /// not carry the implicit `(q;q)_k` denominator.
    pub bilateral: bool,
    /// When present, each term also carries `g^(k(k-1)/2)`.
    pub gauss_base: Option<Complex>,
}

impl SeriesSpec {
    pub fn unilateral(
        base: Complex,
        base_numerators: Vec<Complex>,
        base_denominators: Vec<Complex>,
        z: Complex,
    ) -> SeriesSpec {
        SeriesSpec {
            base,
            base_numerators,
            base_denominators,
            groups: Vec::new(),
            z,
            bilateral: false,
            gauss_base: None,
        }
    }

    pub fn bilateral(
        base: Complex,
        base_numerators: Vec<Complex>,
        base_denominators: Vec<Complex>,
        z: Complex,
    ) -> SeriesSpec {
        SeriesSpec {
            bilateral: true,
            ..SeriesSpec::unilateral(base, base_numerators, base_denominators, z)
        }
    }

    pub fn with_group(mut self, group: SeriesGroup) -> SeriesSpec {
        self.groups.push(group);
        self
    }

    pub fn with_gauss_base(mut self, g: Complex) -> SeriesSpec {
        self.gauss_base = Some(g);
        self
    }

    fn validate(&self, ctx: &PrecisionContext) -> Result<()> {
        let mut bases: Vec<&Complex> = vec![&self.base];
        bases.extend(self.groups.iter().map(|g| &g.base));
        if let Some(g) = &self.gauss_base {
            bases.push(g);
        }
        for b in bases {
            let m = b.abs(ctx);
            if !m.gt(&ctx.zero()) || !m.lt(&ctx.one()) {
                return Err(Error::Domain(
                    "every series base must have modulus in (0,1)".into(),
                ));
            }
        }
        Ok(())
    }

    /// Numerator (parameter, base) pairs across all groups.
    fn numerator_pairs(&self) -> Vec<(Complex, Complex)> {
        let mut v: Vec<(Complex, Complex)> = self
            .base_numerators
            .iter()
            .map(|a| (a.clone(), self.base.clone()))
            .collect();
        for g in &self.groups {
            v.extend(g.numerators.iter().map(|a| (a.clone(), g.base.clone())));
        }
        v
    }

    /// Denominator (parameter, base) pairs across all groups, including
    /// the implicit `(q;q)_k` of the unilateral form.
    fn denominator_pairs(&self) -> Vec<(Complex, Complex)> {
        let mut v: Vec<(Complex, Complex)> = self
            .base_denominators
            .iter()
            .map(|b| (b.clone(), self.base.clone()))
            .collect();
        if !self.bilateral {
            v.push((self.base.clone(), self.base.clone()));
        }
        for g in &self.groups {
            v.extend(g.denominators.iter().map(|b| (b.clone(), g.base.clone())));
        }
        v
    }
}

/// How a summation ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesStatus {
    Converged,
    MaxTermsExceeded,
    Diverging,
    Pole,
}

impl SeriesStatus {
    fn severity(self) -> u8 {
        match self {
            SeriesStatus::Converged => 0,
            SeriesStatus::MaxTermsExceeded => 1,
            SeriesStatus::Diverging => 2,
            SeriesStatus::Pole => 3,
        }
    }

    /// The worse of two statuses.
    pub fn worst(self, other: SeriesStatus) -> SeriesStatus {
        if self.severity() >= other.severity() {
            self
        } else {
            other
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SeriesStatus::Converged => "converged",
            SeriesStatus::MaxTermsExceeded => "max-terms-exceeded",
            SeriesStatus::Diverging => "diverging",
            SeriesStatus::Pole => "pole",
        }
    }
}

impl std::fmt::Display for SeriesStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a summation.
///
/// `tail_estimate` is the modulus of the largest term in the final
/// stopping window divided by `max(1, |sum|)`; when `status` is
/// `Converged` it is at most `trunc_eps` by construction.
#[derive(Clone, Debug)]
pub struct SeriesResult {
    pub value: Complex,
    pub terms_used: usize,
    pub status: SeriesStatus,
    pub tail_estimate: Real,
}

// ---------------------------------------------------------------------------
// Exact single terms
// ---------------------------------------------------------------------------

/// Product of the linear factors `(1 - c Q^i)` for `i` in
/// `lo..=hi`, snapping to exactly zero when any factor falls below
/// `trunc_eps` (the terminating-series case). `Err` is the caller's
/// pole semantics and is applied only when `guard` is set.
fn linear_factor_product(
    c: &Complex,
    base: &Complex,
    lo: i64,
    hi: i64,
    guard: bool,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let mut prod = ctx.complex_one();
    let mut pw = base.powi(lo, ctx)?;
    for _ in lo..=hi {
        let f = ctx.complex_one().sub(&c.mul(&pw, ctx), ctx);
        if f.is_small(ctx.trunc_eps(), ctx) {
            if guard {
                return Err(Error::Pole(
                    "vanishing denominator factor in a series term".into(),
                ));
            }
            return Ok(ctx.complex_zero());
        }
        prod = prod.mul(&f, ctx);
        pw = pw.mul(base, ctx);
    }
    Ok(prod)
}

/// The exact `k`-th summand of `spec`, built from scratch.
///
/// Negative `k` (bilateral specs only) uses the inversion rule
/// `(a;q)_{-m} = 1/((a q^{-m}; q)_m)`: numerator parameters then
/// contribute dividing factors (vanishing one is a pole) and denominator
/// parameters contribute multiplying factors (vanishing one makes the
/// term exactly zero).
pub fn term_at(spec: &SeriesSpec, k: i64, ctx: &PrecisionContext) -> Result<Complex> {
    spec.validate(ctx)?;
    if !spec.bilateral && k < 0 {
        return Err(Error::Domain(
            "negative index on a unilateral series".into(),
        ));
    }
    let mut t = spec.z.powi(k, ctx)?;
    if let Some(g) = &spec.gauss_base {
        t = t.mul(&g.powi(k * (k - 1) / 2, ctx)?, ctx);
    }
    if k >= 0 {
        for (c, base) in spec.numerator_pairs() {
            let p = linear_factor_product(&c, &base, 0, k - 1, false, ctx)?;
            if p.is_zero() {
                return Ok(ctx.complex_zero());
            }
            t = t.mul(&p, ctx);
        }
        for (c, base) in spec.denominator_pairs() {
            let p = linear_factor_product(&c, &base, 0, k - 1, true, ctx)?;
            t = t.div_raw(&p, ctx);
        }
    } else {
        for (c, base) in spec.numerator_pairs() {
            let p = linear_factor_product(&c, &base, k, -1, true, ctx)?;
            t = t.div_raw(&p, ctx);
        }
        for (c, base) in spec.denominator_pairs() {
            let p = linear_factor_product(&c, &base, k, -1, false, ctx)?;
            if p.is_zero() {
                return Ok(ctx.complex_zero());
            }
            t = t.mul(&p, ctx);
        }
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// Incremental branch summation
// ---------------------------------------------------------------------------

struct BranchOutcome {
    sum: Complex,
    terms_used: usize,
    status: SeriesStatus,
    tail_estimate: Real,
}

/// Sum one branch by stepping the term ratio.
///
/// Forward (`backward = false`): starts from `T_0 = 1` (which is
/// accumulated) and steps `T_{k+1} = T_k · z g^k · Π(1 - a q^k) /
/// Π(1 - b q^k)`.
///
/// Backward: starts from the implicit `T_0 = 1` (not accumulated, the
/// forward branch owns it) and steps `T_{k-1} = T_k · Π(1 - b q^{k-1}) /
/// (z g^{k-1} Π(1 - a q^{k-1}))`, so the numerator/denominator roles of
/// the parameters swap.
fn sum_branch(
    spec: &SeriesSpec,
    ctx: &PrecisionContext,
    max_terms: usize,
    backward: bool,
) -> Result<BranchOutcome> {
    let numerators = spec.numerator_pairs();
    let denominators = spec.denominator_pairs();
    let one = ctx.complex_one();

    // Running powers Q^k for every parameter's base, plus g^k.
    let step_power = |pw: &Complex, base: &Complex| -> Result<Complex> {
        if backward {
            pw.div(base, ctx)
        } else {
            Ok(pw.mul(base, ctx))
        }
    };
    let initial_power = |base: &Complex| -> Result<Complex> {
        if backward {
            one.div(base, ctx)
        } else {
            Ok(one.clone())
        }
    };

    let mut num_powers: Vec<Complex> = Vec::with_capacity(numerators.len());
    for (_, base) in &numerators {
        num_powers.push(initial_power(base)?);
    }
    let mut den_powers: Vec<Complex> = Vec::with_capacity(denominators.len());
    for (_, base) in &denominators {
        den_powers.push(initial_power(base)?);
    }
    let mut gauss_power = match &spec.gauss_base {
        Some(g) => Some(initial_power(g)?),
        None => None,
    };

    let mut term = one.clone();
    let mut sum = if backward {
        ctx.complex_zero()
    } else {
        term.clone()
    };
    let mut terms_used = if backward { 0 } else { 1 };

    let mut small_run = 0usize;
    let mut window_max = ctx.zero();
    let mut growth_run = 0usize;
    let mut prev_mod = term.abs(ctx);

    for step in 0..max_terms {
        // Multiplying factors: vanishing one terminates the branch (every
        // later term carries it).
        let mut multiplier = spec.z.clone();
        if backward {
            multiplier = one.clone();
        }
        if let Some(gp) = &gauss_power {
            if !backward {
                multiplier = multiplier.mul(gp, ctx);
            }
        }
        let (mult_pairs, mult_powers, div_pairs, div_powers) = if backward {
            (&denominators, &den_powers, &numerators, &num_powers)
        } else {
            (&numerators, &num_powers, &denominators, &den_powers)
        };
        let mut terminated = false;
        for ((c, _), pw) in mult_pairs.iter().zip(mult_powers.iter()) {
            let f = one.sub(&c.mul(pw, ctx), ctx);
            if f.is_small(ctx.trunc_eps(), ctx) {
                terminated = true;
                break;
            }
            multiplier = multiplier.mul(&f, ctx);
        }
        if terminated {
            return Ok(BranchOutcome {
                sum,
                terms_used,
                status: SeriesStatus::Converged,
                tail_estimate: ctx.zero(),
            });
        }
        // Dividing factors: vanishing one is a pole of the next term.
        let mut divisor = one.clone();
        if backward {
            divisor = spec.z.clone();
            if let Some(gp) = &gauss_power {
                divisor = divisor.mul(gp, ctx);
            }
            if divisor.is_small(ctx.trunc_eps(), ctx) {
                return Err(Error::Pole(
                    "vanishing argument on the negative branch of a bilateral series".into(),
                ));
            }
        }
        for ((c, _), pw) in div_pairs.iter().zip(div_powers.iter()) {
            let f = one.sub(&c.mul(pw, ctx), ctx);
            if f.is_small(ctx.trunc_eps(), ctx) {
                return Err(Error::Pole(
                    "vanishing denominator factor in a series term".into(),
                ));
            }
            divisor = divisor.mul(&f, ctx);
        }

        term = term.mul(&multiplier, ctx).div_raw(&divisor, ctx);
        sum = sum.add(&term, ctx);
        terms_used += 1;

        if term.is_zero() {
            return Ok(BranchOutcome {
                sum,
                terms_used,
                status: SeriesStatus::Converged,
                tail_estimate: ctx.zero(),
            });
        }

        let scale = sum.abs(ctx).max(&ctx.one());
        let threshold = ctx.trunc_eps().mul(&scale, ctx);
        let t_mod = term.abs(ctx);
        if t_mod.lt(&threshold) {
            small_run += 1;
            window_max = window_max.max(&t_mod);
            growth_run = 0;
            if small_run >= SMALL_RUN {
                // Each windowed term was below trunc_eps times the scale
                // current at its own step; clamp so tiny scale drift within
                // the window cannot push the quotient past trunc_eps.
                let mut tail = window_max.div(&scale, ctx);
                if tail.gt(ctx.trunc_eps()) {
                    tail = ctx.trunc_eps().clone();
                }
                return Ok(BranchOutcome {
                    sum,
                    terms_used,
                    status: SeriesStatus::Converged,
                    tail_estimate: tail,
                });
            }
        } else {
            small_run = 0;
            window_max = ctx.zero();
            if step >= GROWTH_MIN_STEPS && t_mod.gt(&prev_mod) {
                growth_run += 1;
                if growth_run >= GROWTH_RUN {
                    return Ok(BranchOutcome {
                        sum,
                        terms_used,
                        status: SeriesStatus::Diverging,
                        tail_estimate: t_mod.div(&scale, ctx),
                    });
                }
            } else {
                growth_run = 0;
            }
        }
        prev_mod = t_mod;

        for (pw, (_, base)) in num_powers.iter_mut().zip(numerators.iter()) {
            *pw = step_power(pw, base)?;
        }
        for (pw, (_, base)) in den_powers.iter_mut().zip(denominators.iter()) {
            *pw = step_power(pw, base)?;
        }
        if let (Some(gp), Some(g)) = (gauss_power.as_mut(), spec.gauss_base.as_ref()) {
            *gp = step_power(gp, g)?;
        }
    }

    let scale = sum.abs(ctx).max(&ctx.one());
    Ok(BranchOutcome {
        sum,
        terms_used,
        status: SeriesStatus::MaxTermsExceeded,
        tail_estimate: term.abs(ctx).div(&scale, ctx),
    })
}

/// Sum a unilateral spec over `k = 0, 1, 2, …`.
///
/// Stops when [`SMALL_RUN`] consecutive terms have modulus below
/// `trunc_eps · max(1, |partial sum|)`, when a numerator factor makes all
/// later terms zero (terminating series), when the terms grow for
/// [`GROWTH_RUN`] consecutive steps past step [`GROWTH_MIN_STEPS`]
/// (reported as `Diverging`), or at `max_terms`.
pub fn sum_unilateral(
    spec: &SeriesSpec,
    ctx: &PrecisionContext,
    max_terms: usize,
) -> Result<SeriesResult> {
    if spec.bilateral {
        return Err(Error::Domain(
            "sum_unilateral requires a unilateral spec".into(),
        ));
    }
    spec.validate(ctx)?;
    let b = sum_branch(spec, ctx, max_terms, false)?;
    Ok(SeriesResult {
        value: b.sum,
        terms_used: b.terms_used,
        status: b.status,
        tail_estimate: b.tail_estimate,
    })
}

/// Sum a bilateral spec over all integers `k`.
///
/// The `k >= 0` and `k <= -1` branches are summed independently, each
/// with the unilateral stopping rule; the result is their sum and the
/// status is the worse of the two branch statuses.
pub fn sum_bilateral(
    spec: &SeriesSpec,
    ctx: &PrecisionContext,
    max_terms: usize,
) -> Result<SeriesResult> {
    if !spec.bilateral {
        return Err(Error::Domain(
            "sum_bilateral requires a bilateral spec".into(),
        ));
    }
    spec.validate(ctx)?;
    let fwd = sum_branch(spec, ctx, max_terms, false)?;
    let bwd = sum_branch(spec, ctx, max_terms, true)?;
    Ok(SeriesResult {
        value: fwd.sum.add(&bwd.sum, ctx),
        terms_used: fwd.terms_used + bwd.terms_used,
        status: fwd.status.worst(bwd.status),
        tail_estimate: fwd.tail_estimate.max(&bwd.tail_estimate),
    })
}
