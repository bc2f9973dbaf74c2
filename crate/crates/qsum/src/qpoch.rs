//! q-Pochhammer symbols, infinite q-products, the q-gamma function, and
//! the classical gamma function.
//!
//! For a base q with |q| < 1:
//!
//! * `(a;q)_n = (1-a)(1-aq)...(1-aq^(n-1))` for `n >= 0`;
//! * `(a;q)_{-m} = 1 / ((a q^{-m}; q)_m)` for `m > 0` (negative order via
//!   inversion, so a vanishing inverted factor is a pole);
//! * `(a;q)_inf` is the infinite product, truncated at the first `N` with
//!   geometric tail bound `|a| |q|^(N+1) / (1 - |q|) < trunc_eps`;
//! * `Gamma_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^(1-x)` for real
//!   `0 < q < 1`;
//! * `Gamma(x)` is evaluated by the argument-shifted Stirling asymptotic
//!   series: shift `x` up until its real part clears the context's digit
//!   count, apply the series for `ln Gamma`, exponentiate, and divide the
//!   shift factors back out.

use crate::arith::{Complex, PrecisionContext, Real};
use crate::error::{Error, Result};

/// Hard cap on truncated infinite-product length; reached only when the
/// base is pushed extremely close to the unit circle.
const MAX_PRODUCT_FACTORS: usize = 2_000_000;

/// Order of a Pochhammer product: any finite integer, or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochOrder {
    Finite(i64),
    Infinite,
}

// ---------------------------------------------------------------------------
// Finite and infinite products
// ---------------------------------------------------------------------------

/// `(a;q)_n` for any integer `n`.
///
/// Zero factors are fine for `n >= 0` (the product is simply 0, which is
/// how terminating series arise); for `n < 0` a vanishing inverted factor
/// is a pole of the symbol and fails with [`Error::Pole`].
pub fn qpoch_finite(a: &Complex, q: &Complex, n: i64, ctx: &PrecisionContext) -> Result<Complex> {
    let one = ctx.complex_one();
    if n >= 0 {
        let mut prod = one;
        let mut aq = a.clone();
        for _ in 0..n {
            prod = prod.mul(&one_minus(&aq, ctx), ctx);
            aq = aq.mul(q, ctx);
        }
        Ok(prod)
    } else {
        let qinv = one.div(q, ctx).map_err(|_| {
            Error::Domain("negative Pochhammer order requires a nonzero base".into())
        })?;
        let mut prod = one.clone();
        let mut aq = a.clone();
        for _ in 0..(-n) {
            aq = aq.mul(&qinv, ctx);
            let f = one_minus(&aq, ctx);
            if f.is_small(ctx.trunc_eps(), ctx) {
                return Err(Error::Pole(
                    "vanishing factor in a negative-order Pochhammer symbol".into(),
                ));
            }
            prod = prod.mul(&f, ctx);
        }
        one.div(&prod, ctx)
    }
}

/// `(a;q)_inf`, truncated by the geometric tail rule; requires `|q| < 1`.
pub fn qpoch_infinite(a: &Complex, q: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let one = ctx.one();
    let qabs = q.abs(ctx);
    if qabs.ge(&one) {
        return Err(Error::Domain("infinite product requires |q| < 1".into()));
    }
    // Smallest N with |a| |q|^(N+1)/(1-|q|) < trunc_eps.
    let mut n = 0usize;
    let denom = one.sub(&qabs, ctx);
    let mut bound = a.abs(ctx).mul(&qabs, ctx).div(&denom, ctx);
    while bound.ge(ctx.trunc_eps()) {
        bound = bound.mul(&qabs, ctx);
        n += 1;
        if n > MAX_PRODUCT_FACTORS {
            return Err(Error::Domain(
                "base too close to the unit circle for the requested precision".into(),
            ));
        }
    }
    let mut prod = ctx.complex_one();
    let mut aq = a.clone();
    for _ in 0..=n {
        prod = prod.mul(&one_minus(&aq, ctx), ctx);
        aq = aq.mul(q, ctx);
    }
    Ok(prod)
}

/// Product of `(a;q)_order` over a list of parameters, all with the same
/// base and order.
pub fn qpoch_multi(
    list: &[Complex],
    q: &Complex,
    order: PochOrder,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let mut prod = ctx.complex_one();
    for a in list {
        let p = match order {
            PochOrder::Finite(n) => qpoch_finite(a, q, n, ctx)?,
            PochOrder::Infinite => qpoch_infinite(a, q, ctx)?,
        };
        prod = prod.mul(&p, ctx);
    }
    Ok(prod)
}

fn one_minus(z: &Complex, ctx: &PrecisionContext) -> Complex {
    ctx.complex_one().sub(z, ctx)
}

// ---------------------------------------------------------------------------
// q-gamma
// ---------------------------------------------------------------------------

/// `Gamma_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^(1-x)` for real
/// `0 < q < 1` and complex `x`.
///
/// Poles at nonpositive integer `x` surface as [`Error::Pole`] through the
/// vanishing denominator product.
pub fn gamma_q(x: &Complex, q: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    if !q.is_real(ctx) || !q.re.gt(&ctx.zero()) || !q.re.lt(&ctx.one()) {
        return Err(Error::Domain("gamma_q requires real q in (0,1)".into()));
    }
    // Poles sit at nonpositive integer x and must be detected structurally:
    // as q -> 1 both infinite products legitimately underflow any absolute
    // threshold, so a small denominator is not evidence of a pole.
    if x.is_real(ctx) && x.re.lt(&ctx.real_from_f64(0.5)) {
        if let Some(m) = x.re.to_i64_exact(ctx) {
            let gap = x.re.sub(&ctx.real_from_i64(m), ctx).abs();
            if m <= 0 && gap.lt(ctx.cmp_tol()) {
                return Err(Error::Pole("gamma_q pole at a nonpositive integer".into()));
            }
        }
    }
    let qc = Complex::from_real(q.re.clone(), ctx);
    let ln_q = Complex::from_real(q.re.ln(ctx), ctx);
    let q_to_x = x.mul(&ln_q, ctx).exp(ctx);
    let num = qpoch_infinite(&qc, &qc, ctx)?;
    let den = qpoch_infinite(&q_to_x, &qc, ctx)?;
    let one_minus_q = ctx.one().sub(&q.re, ctx);
    let ln_omq = Complex::from_real(one_minus_q.ln(ctx), ctx);
    let exponent = ctx.complex_one().sub(x, ctx);
    let power = exponent.mul(&ln_omq, ctx).exp(ctx);
    Ok(num.div_raw(&den, ctx).mul(&power, ctx))
}

// ---------------------------------------------------------------------------
// Classical gamma (shifted Stirling series)
// ---------------------------------------------------------------------------

/// Classical `Gamma(x)` for complex `x`, poles at nonpositive integers.
pub fn gamma_classical(x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    // Shift x upward until Re(w) clears digits + 15, accumulating the
    // factors Gamma(w) = Gamma(x) * x (x+1) ... (w-1).
    let target = ctx.real_from_u64(ctx.digits() as u64 + 15);
    let one = ctx.complex_one();
    let mut w = x.clone();
    let mut shift = ctx.complex_one();
    while w.re.lt(&target) {
        if w.is_small(ctx.trunc_eps(), ctx) {
            return Err(Error::Pole("gamma pole at a nonpositive integer".into()));
        }
        shift = shift.mul(&w, ctx);
        w = w.add(&one, ctx);
    }

    // ln Gamma(w) = (w - 1/2) ln w - w + ln(2 pi)/2 + sum_j c_j w^(1-2j),
    // c_j = B_{2j} / ((2j)(2j-1)).
    let ln_w = w.ln(ctx)?;
    let half = Complex::from_real(ctx.real_from_f64(0.5), ctx);
    let mut ln_gamma = w.sub(&half, ctx).mul(&ln_w, ctx).sub(&w, ctx);
    ln_gamma = ln_gamma.add(&Complex::from_real(ln_sqrt_two_pi(ctx), ctx), ctx);
    let w_inv = one.div(&w, ctx)?;
    let w_inv_sq = w_inv.mul(&w_inv, ctx);
    let mut w_pow = w_inv; // w^-(2j-1), starting at j = 1
    let target_abs = ctx.ten_pow(-(ctx.digits() as i64 + 12));
    let mut j = 1usize;
    loop {
        let c = stirling_coeff(j, ctx);
        let term = w_pow.scale(&c, ctx);
        ln_gamma = ln_gamma.add(&term, ctx);
        if term.abs(ctx).lt(&target_abs) {
            break;
        }
        j += 1;
        assert!(j < 400, "Stirling series failed to reach tolerance");
        w_pow = w_pow.mul(&w_inv_sq, ctx);
    }

    ln_gamma.exp(ctx).div(&shift, ctx)
}

/// `ln(2 pi)/2` from the context's constant cache.
fn ln_sqrt_two_pi(ctx: &PrecisionContext) -> Real {
    {
        let cache = ctx.gamma.lock().expect("gamma cache poisoned");
        if let Some(v) = &cache.ln_sqrt_two_pi {
            return v.clone();
        }
    }
    let two_pi = ctx.pi().mul(&ctx.real_from_u64(2), ctx);
    let v = two_pi.ln(ctx).div(&ctx.real_from_u64(2), ctx);
    let mut cache = ctx.gamma.lock().expect("gamma cache poisoned");
    cache.ln_sqrt_two_pi = Some(v.clone());
    v
}

/// `B_{2j} / ((2j)(2j-1))` with `j >= 1`, from the context cache;
/// extends the cache by the tangent-number triangle when needed.
fn stirling_coeff(j: usize, ctx: &PrecisionContext) -> Real {
    {
        let cache = ctx.gamma.lock().expect("gamma cache poisoned");
        if j <= cache.coeffs.len() {
            return cache.coeffs[j - 1].clone();
        }
    }
    let n = j + 8;
    let coeffs = stirling_table(n, ctx);
    let out = coeffs[j - 1].clone();
    let mut cache = ctx.gamma.lock().expect("gamma cache poisoned");
    if cache.coeffs.len() < coeffs.len() {
        cache.coeffs = coeffs;
    }
    out
}

/// Compute `B_{2j}/((2j)(2j-1))` for `j = 1..=n` via tangent numbers.
///
/// The tangent-number triangle uses only additions and multiplications of
/// nonnegative integers, so it is numerically exact as long as the working
/// precision exceeds the bit length of the largest tangent number; the
/// computation therefore runs at elevated precision before rounding the
/// coefficients back to the working precision.
fn stirling_table(n: usize, ctx: &PrecisionContext) -> Vec<Real> {
    let hi = ctx.elevated(12 * n + 64);
    // T[1] = 1; T[k] = (k-1) T[k-1]; then the in-place triangle pass.
    let mut t: Vec<Real> = Vec::with_capacity(n + 1);
    t.push(hi.zero()); // unused slot 0
    t.push(hi.one());
    for k in 2..=n {
        let prev = t[k - 1].clone();
        t.push(prev.mul(&hi.real_from_u64(k as u64 - 1), &hi));
    }
    for k in 2..=n {
        for jj in k..=n {
            let a = t[jj - 1].mul(&hi.real_from_u64((jj - k) as u64), &hi);
            let b = t[jj].mul(&hi.real_from_u64((jj - k + 2) as u64), &hi);
            t[jj] = a.add(&b, &hi);
        }
    }
    // B_{2j} = (-1)^(j-1) 2j T_j / (4^j (4^j - 1))
    // => c_j = B_{2j}/((2j)(2j-1)) = (-1)^(j-1) T_j / ((2j-1) 4^j (4^j - 1)).
    let four = hi.real_from_u64(4);
    let mut out = Vec::with_capacity(n);
    for (j, tj) in t.iter().enumerate().skip(1) {
        let p4 = four.powi(j as i64, &hi);
        let den = p4
            .mul(&p4.sub(&hi.one(), &hi), &hi)
            .mul(&hi.real_from_u64(2 * j as u64 - 1), &hi);
        // Final division in the caller's context rounds to working precision.
        let mut c = tj.div(&den, ctx);
        if j % 2 == 0 {
            c = c.neg();
        }
        out.push(c);
    }
    out
}

impl PrecisionContext {
    /// Context with the same thresholds but `extra` more mantissa bits;
    /// used for internally exact integer computations.
    pub(crate) fn elevated(&self, extra: usize) -> PrecisionContext {
        PrecisionContext::with_bits(self.digits(), self.bits() + extra)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{approx_equal, make_context, relative_error};
    use rand_chacha::ChaCha12Rng;
    use rand_core::{RngCore, SeedableRng};

    fn ctx50() -> PrecisionContext {
        make_context(50).unwrap()
    }

    fn c(ctx: &PrecisionContext, re: f64) -> Complex {
        ctx.complex_from_f64(re, 0.0)
    }

    /// Decimal-string constructor for values (like 0.1 or 0.9) that an f64
    /// literal cannot represent exactly.
    fn cs(ctx: &PrecisionContext, s: &str) -> Complex {
        Complex::parse(s, ctx).unwrap()
    }

    /// Independent oracle: plain product of `(1 - a q^i)` with `count`
    /// factors, each recomputed from scratch.
    fn oracle_product(a: &Complex, q: &Complex, count: usize, ctx: &PrecisionContext) -> Complex {
        let mut prod = ctx.complex_one();
        for i in 0..count {
            let f = ctx
                .complex_one()
                .sub(&a.mul(&q.powi(i as i64, ctx).unwrap(), ctx), ctx);
            prod = prod.mul(&f, ctx);
        }
        prod
    }

    #[test]
    fn finite_order_zero_is_one() {
        let ctx = ctx50();
        let v = qpoch_finite(&c(&ctx, 0.7), &c(&ctx, 0.3), 0, &ctx).unwrap();
        assert!(approx_equal(&v, &ctx.complex_one(), &ctx));
    }

    #[test]
    fn finite_positive_order_matches_hand_value() {
        let ctx = ctx50();
        // (0.5;0.5)_2 = (1-0.5)(1-0.25) = 0.375
        let v = qpoch_finite(&c(&ctx, 0.5), &c(&ctx, 0.5), 2, &ctx).unwrap();
        assert!(approx_equal(&v, &c(&ctx, 0.375), &ctx));
    }

    #[test]
    fn finite_negative_order_by_inversion() {
        let ctx = ctx50();
        // (0.25;0.5)_{-1} = 1/(1 - 0.25/0.5) = 2
        let v = qpoch_finite(&c(&ctx, 0.25), &c(&ctx, 0.5), -1, &ctx).unwrap();
        assert!(approx_equal(&v, &c(&ctx, 2.0), &ctx));
    }

    #[test]
    fn finite_negative_order_pole() {
        let ctx = ctx50();
        // (0.5;0.5)_{-1}: factor 1 - 0.5/0.5 = 0.
        assert!(matches!(
            qpoch_finite(&c(&ctx, 0.5), &c(&ctx, 0.5), -1, &ctx),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn negative_order_inverts_the_shifted_product() {
        // (a;q)_{-m} * (a q^{-m}; q)_m = 1 for random parameters.
        let ctx = ctx50();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = 0.1 + 2.0 * (rng.next_u64() as f64 / u64::MAX as f64);
            let q = 0.15 + 0.7 * (rng.next_u64() as f64 / u64::MAX as f64);
            let m = 1 + (rng.next_u64() % 6) as i64;
            let lhs = match qpoch_finite(&c(&ctx, a), &c(&ctx, q), -m, &ctx) {
                Ok(v) => v,
                Err(Error::Pole(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            let shifted = c(&ctx, a).mul(&c(&ctx, q).powi(-m, &ctx).unwrap(), &ctx);
            let rhs = qpoch_finite(&shifted, &c(&ctx, q), m, &ctx).unwrap();
            let prod = lhs.mul(&rhs, &ctx);
            assert!(approx_equal(&prod, &ctx.complex_one(), &ctx));
        }
    }

    #[test]
    fn cocycle_identity_for_mixed_orders() {
        // (a;q)_{m+n} = (a;q)_m (a q^m; q)_n with m, n of any sign.
        let ctx = ctx50();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let tol = ctx.trunc_eps().mul(&ctx.real_from_u64(10), &ctx);
        for _ in 0..100 {
            let a = 0.05 + 2.5 * (rng.next_u64() as f64 / u64::MAX as f64);
            let q = 0.1 + 0.75 * (rng.next_u64() as f64 / u64::MAX as f64);
            let m = (rng.next_u64() % 13) as i64 - 6;
            let n = (rng.next_u64() % 13) as i64 - 6;
            let whole = match qpoch_finite(&c(&ctx, a), &c(&ctx, q), m + n, &ctx) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let qm = c(&ctx, q).powi(m, &ctx).unwrap();
            let first = match qpoch_finite(&c(&ctx, a), &c(&ctx, q), m, &ctx) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let second = match qpoch_finite(&c(&ctx, a).mul(&qm, &ctx), &c(&ctx, q), n, &ctx) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let err = relative_error(&whole, &first.mul(&second, &ctx), &ctx);
            assert!(err.le(&tol), "cocycle failed at a={a} q={q} m={m} n={n}");
        }
    }

    #[test]
    fn infinite_product_of_zero_parameter_is_one() {
        let ctx = ctx50();
        let v = qpoch_infinite(&ctx.complex_zero(), &c(&ctx, 0.5), &ctx).unwrap();
        assert!(approx_equal(&v, &ctx.complex_one(), &ctx));
    }

    #[test]
    fn infinite_product_frozen_value() {
        let ctx = ctx50();
        // Frozen decimal for exact decimal inputs a = q = 0.1.  The
        // truncation rule only guarantees a geometric tail below trunc_eps,
        // so that is the tolerance the contract supports.
        let frozen = Complex::parse(
            "0.890010099998999000000100009999999989999900000000001",
            &ctx,
        )
        .unwrap();
        let a = cs(&ctx, "0.1");
        let v = qpoch_infinite(&a, &a, &ctx).unwrap();
        assert!(relative_error(&v, &frozen, &ctx).le(ctx.trunc_eps()));
        // and against the in-test oracle at twice the tail length
        let oracle = oracle_product(&a, &a, 100, &ctx);
        assert!(relative_error(&v, &oracle, &ctx).le(ctx.trunc_eps()));
    }

    #[test]
    fn infinite_product_second_frozen_value() {
        let ctx = ctx50();
        let frozen = Complex::parse(
            "0.331089517240317874152396916012399036502212132252377",
            &ctx,
        )
        .unwrap();
        let v = qpoch_infinite(&cs(&ctx, "0.3"), &cs(&ctx, "0.7"), &ctx).unwrap();
        assert!(relative_error(&v, &frozen, &ctx).le(ctx.trunc_eps()));
    }

    #[test]
    fn infinite_product_with_unit_factor_is_zero() {
        let ctx = ctx50();
        let v = qpoch_infinite(&ctx.complex_one(), &c(&ctx, 0.5), &ctx).unwrap();
        assert!(v.abs(&ctx).le(ctx.trunc_eps()));
    }

    #[test]
    fn infinite_product_requires_base_inside_unit_disc() {
        let ctx = ctx50();
        assert!(matches!(
            qpoch_infinite(&c(&ctx, 0.5), &c(&ctx, 1.0), &ctx),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn splitting_finite_times_shifted_infinite() {
        // (a;q)_inf = (a;q)_n * (a q^n; q)_inf
        let ctx = ctx50();
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let tol = ctx.trunc_eps().mul(&ctx.real_from_u64(10), &ctx);
        for _ in 0..50 {
            let a = 0.05 + 2.5 * (rng.next_u64() as f64 / u64::MAX as f64);
            let q = 0.1 + 0.7 * (rng.next_u64() as f64 / u64::MAX as f64);
            let n = (rng.next_u64() % 9) as i64;
            let whole = qpoch_infinite(&c(&ctx, a), &c(&ctx, q), &ctx).unwrap();
            let head = qpoch_finite(&c(&ctx, a), &c(&ctx, q), n, &ctx).unwrap();
            let shifted = c(&ctx, a).mul(&c(&ctx, q).powi(n, &ctx).unwrap(), &ctx);
            let tail = qpoch_infinite(&shifted, &c(&ctx, q), &ctx).unwrap();
            let err = relative_error(&whole, &head.mul(&tail, &ctx), &ctx);
            assert!(err.le(&tol), "splitting failed at a={a} q={q} n={n}");
        }
    }

    #[test]
    fn multi_products() {
        let ctx = ctx50();
        // singleton = plain finite
        let single =
            qpoch_multi(&[c(&ctx, 0.5)], &c(&ctx, 0.5), PochOrder::Finite(2), &ctx).unwrap();
        assert!(approx_equal(&single, &c(&ctx, 0.375), &ctx));
        // pair: 0.375^2 = 0.140625
        let pair = qpoch_multi(
            &[c(&ctx, 0.5), c(&ctx, 0.5)],
            &c(&ctx, 0.5),
            PochOrder::Finite(2),
            &ctx,
        )
        .unwrap();
        assert!(approx_equal(&pair, &c(&ctx, 0.140625), &ctx));
        // all-zero parameters, infinite order
        let z = ctx.complex_zero();
        let triple = qpoch_multi(
            &[z.clone(), z.clone(), z],
            &c(&ctx, 0.3),
            PochOrder::Infinite,
            &ctx,
        )
        .unwrap();
        assert!(approx_equal(&triple, &ctx.complex_one(), &ctx));
    }

    #[test]
    fn gamma_q_at_small_integers() {
        let ctx = ctx50();
        let q = c(&ctx, 0.5);
        let g1 = gamma_q(&ctx.complex_one(), &q, &ctx).unwrap();
        assert!(approx_equal(&g1, &ctx.complex_one(), &ctx));
        let g2 = gamma_q(&c(&ctx, 2.0), &q, &ctx).unwrap();
        assert!(approx_equal(&g2, &ctx.complex_one(), &ctx));
        // Gamma_q(3) = 1 + q at q = 0.9 (decimal-exact input)
        let q9 = cs(&ctx, "0.9");
        let g3 = gamma_q(&c(&ctx, 3.0), &q9, &ctx).unwrap();
        let want = ctx.complex_one().add(&q9, &ctx);
        assert!(approx_equal(&g3, &want, &ctx));
    }

    #[test]
    fn gamma_q_frozen_half_value() {
        let ctx = ctx50();
        let frozen = Complex::parse("1.738184351562161925865606186613657422185", &ctx).unwrap();
        let v = gamma_q(&c(&ctx, 0.5), &cs(&ctx, "0.9"), &ctx).unwrap();
        assert!(relative_error(&v, &frozen, &ctx).le(&ctx.ten_pow(-38)));
    }

    #[test]
    fn gamma_q_pole_and_domain() {
        let ctx = ctx50();
        assert!(matches!(
            gamma_q(&ctx.complex_zero(), &c(&ctx, 0.5), &ctx),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            gamma_q(&ctx.complex_one(), &c(&ctx, 1.2), &ctx),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn gamma_q_recurrence() {
        // Gamma_q(x+1) = (1-q^x)/(1-q) Gamma_q(x)
        let ctx = ctx50();
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let tol = ctx.trunc_eps().mul(&ctx.real_from_u64(10), &ctx);
        for _ in 0..40 {
            let x = 0.2 + 5.0 * (rng.next_u64() as f64 / u64::MAX as f64);
            let qv = 0.2 + 0.6 * (rng.next_u64() as f64 / u64::MAX as f64);
            let q = c(&ctx, qv);
            let xx = c(&ctx, x);
            let left = gamma_q(&xx.add(&ctx.complex_one(), &ctx), &q, &ctx).unwrap();
            let qx = c(&ctx, qv).pow(&xx, &ctx).unwrap();
            let factor = ctx
                .complex_one()
                .sub(&qx, &ctx)
                .div(&ctx.complex_one().sub(&q, &ctx), &ctx)
                .unwrap();
            let right = factor.mul(&gamma_q(&xx, &q, &ctx).unwrap(), &ctx);
            assert!(relative_error(&left, &right, &ctx).le(&tol));
        }
    }

    #[test]
    fn gamma_classical_small_integers_and_half() {
        let ctx = ctx50();
        let g1 = gamma_classical(&ctx.complex_one(), &ctx).unwrap();
        assert!(approx_equal(&g1, &ctx.complex_one(), &ctx));
        let g5 = gamma_classical(&c(&ctx, 5.0), &ctx).unwrap();
        assert!(approx_equal(&g5, &c(&ctx, 24.0), &ctx));
        let frozen = Complex::parse(
            "1.772453850905516027298167483341145182797549456122387",
            &ctx,
        )
        .unwrap();
        let gh = gamma_classical(&c(&ctx, 0.5), &ctx).unwrap();
        assert!(relative_error(&gh, &frozen, &ctx).le(&ctx.ten_pow(-48)));
        // and against sqrt(pi) computed independently
        let sp = Complex::from_real(ctx.pi().sqrt(&ctx), &ctx);
        assert!(relative_error(&gh, &sp, &ctx).le(&ctx.ten_pow(-48)));
    }

    #[test]
    fn gamma_classical_negative_half_and_complex_point() {
        let ctx = ctx50();
        let frozen = Complex::parse(
            "-3.544907701811032054596334966682290365595098912244774",
            &ctx,
        )
        .unwrap();
        let g = gamma_classical(&c(&ctx, -0.5), &ctx).unwrap();
        assert!(relative_error(&g, &frozen, &ctx).le(&ctx.ten_pow(-47)));
        // Gamma(1+2i), frozen from an independent 60-digit evaluation.
        let z = ctx.complex_from_f64(1.0, 2.0);
        let g = gamma_classical(&z, &ctx).unwrap();
        let want = ctx.complex(
            ctx.real_from_str("0.151904002670036137448160950545001503668186264185950905743776")
                .unwrap(),
            ctx.real_from_str("0.0198048801618549819719101316709638945480161262246215921013585")
                .unwrap(),
        );
        assert!(relative_error(&g, &want, &ctx).le(&ctx.ten_pow(-47)));
    }

    #[test]
    fn gamma_classical_recurrence_on_random_complex_points() {
        let ctx = ctx50();
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let tol = ctx.trunc_eps().mul(&ctx.real_from_u64(10), &ctx);
        for _ in 0..40 {
            let re = 0.1 + 9.9 * (rng.next_u64() as f64 / u64::MAX as f64);
            let im = -3.0 + 6.0 * (rng.next_u64() as f64 / u64::MAX as f64);
            let z = ctx.complex_from_f64(re, im);
            let left = gamma_classical(&z.add(&ctx.complex_one(), &ctx), &ctx).unwrap();
            let right = z.mul(&gamma_classical(&z, &ctx).unwrap(), &ctx);
            assert!(
                relative_error(&left, &right, &ctx).le(&tol),
                "recurrence failed at {re}+{im}i"
            );
        }
    }

    #[test]
    fn gamma_classical_pole_at_nonpositive_integers() {
        let ctx = ctx50();
        assert!(matches!(
            gamma_classical(&ctx.complex_zero(), &ctx),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            gamma_classical(&c(&ctx, -3.0), &ctx),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn gamma_q_approaches_gamma_as_q_grows() {
        let ctx = make_context(30).unwrap();
        for x in [0.5, 2.5, 4.0] {
            let xx = c(&ctx, x);
            let target = gamma_classical(&xx, &ctx).unwrap();
            let mut last: Option<Real> = None;
            for q in [0.9, 0.99, 0.999] {
                let g = gamma_q(&xx, &c(&ctx, q), &ctx).unwrap();
                let gap = g.sub(&target, &ctx).abs(&ctx);
                if let Some(prev) = &last {
                    assert!(gap.lt(prev), "gap not decreasing at x={x} q={q}");
                }
                last = Some(gap);
            }
        }
    }
}
