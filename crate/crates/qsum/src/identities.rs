//! Registry of summation identities: each entry maps an identifier to an
//! executable series (left side) and a closed-form product or gamma
//! expression (right side), together with a parameter schema and domain
//! checks.
//!
//! Domain checking enforces structural requirements — base inside the
//! unit disc, required nonzero parameters, integer orders, and a
//! 1000·trunc_eps exclusion zone around every zero of a denominator
//! product on either side. Convergence inequalities are published in the
//! schema but deliberately not pre-enforced: evaluating past them lets
//! the engine report `Diverging` honestly instead of guessing.

use std::collections::BTreeMap;

use crate::arith::{relative_error, Complex, PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::qpoch::{qpoch_finite, qpoch_multi, PochOrder};
use crate::series::{
    sum_bilateral, sum_unilateral, term_at, SeriesGroup, SeriesResult, SeriesSpec, SeriesStatus,
    DEFAULT_MAX_TERMS,
};

// ---------------------------------------------------------------------------
// Identifiers and schemas
// ---------------------------------------------------------------------------

/// The twelve identities in the registry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    Seed3105,
    Intermediate2Phizzz,
    Thm1,
    BilateralX,
    Thm2,
    Prop41,
    Cor42,
    Quintuple,
    Jacobi,
    F43,
    Q4F3,
    Phi65Limit,
}

impl IdentityId {
    pub const ALL: [IdentityId; 12] = [
        IdentityId::Seed3105,
        IdentityId::Intermediate2Phizzz,
        IdentityId::Thm1,
        IdentityId::BilateralX,
        IdentityId::Thm2,
        IdentityId::Prop41,
        IdentityId::Cor42,
        IdentityId::Quintuple,
        IdentityId::Jacobi,
        IdentityId::F43,
        IdentityId::Q4F3,
        IdentityId::Phi65Limit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Seed3105 => "seed3105",
            IdentityId::Intermediate2Phizzz => "intermediate2phizzz",
            IdentityId::Thm1 => "thm1",
            IdentityId::BilateralX => "bilateralX",
            IdentityId::Thm2 => "thm2",
            IdentityId::Prop41 => "prop41",
            IdentityId::Cor42 => "cor42",
            IdentityId::Quintuple => "quintuple",
            IdentityId::Jacobi => "jacobi",
            IdentityId::F43 => "f43",
            IdentityId::Q4F3 => "q4f3",
            IdentityId::Phi65Limit => "phi65limit",
        }
    }

    pub fn from_name(s: &str) -> Result<IdentityId> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

impl std::fmt::Display for IdentityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One named parameter in a schema.
#[derive(Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub about: &'static str,
}

/// Published description of one identity.
#[derive(Debug)]
pub struct Schema {
    pub id: IdentityId,
    pub title: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub params: &'static [ParamSpec],
    pub domain: &'static [&'static str],
}

macro_rules! p {
    ($name:literal, $about:literal) => {
        ParamSpec {
            name: $name,
            about: $about,
        }
    };
}

static SCHEMAS: [Schema; 12] = [
    Schema {
        id: IdentityId::Seed3105,
        title: "Terminating squared-base quadratic summation",
        lhs: "sum_{k=0..n} (a^2,aq^2,-aq^2;q^2)_k/(q^2,a,-a;q^2)_k \
              * (-aq/w, q^(-n);q)_k/(w, -aq^(n+1);q)_k * (w q^(n-1)/a)^k",
        rhs: "(-aq, aq^2/w, w/(aq);q)_n / (-q, aq/w, w;q)_n",
        params: &[
            p!("a", "free parameter, nonzero"),
            p!("w", "free parameter, nonzero"),
            p!("q", "base, 0 < |q| < 1"),
            p!("n", "termination order, integer >= 0"),
        ],
        domain: &[
            "0 < |q| < 1",
            "a and w nonzero",
            "n a nonnegative integer",
            "no parameter within 1000*trunc_eps of a denominator zero on either side",
        ],
    },
    Schema {
        id: IdentityId::Intermediate2Phizzz,
        title: "Squared-base summation with two free parameters",
        lhs: "sum_{k>=0} (a^2,aq^2,-aq^2;q^2)_k/(q^2,a,-a;q^2)_k \
              * (-aq/w, -aq/u;q)_k/(w, u;q)_k * (-wu/(a^2 q^2))^k",
        rhs: "-(u+w)/(aq) * (-aq, w/a, u/a, -wu/(aq);q)_inf \
              / (-q, w, u, -wu/(a^2 q^2);q)_inf",
        params: &[
            p!("a", "free parameter, nonzero"),
            p!("w", "free parameter, nonzero"),
            p!("u", "free parameter, nonzero"),
            p!("q", "base, 0 < |q| < 1"),
        ],
        domain: &[
            "0 < |q| < 1",
            "a, w, u nonzero",
            "|wu/(a^2 q^2)| < 1 for convergence",
            "no parameter within 1000*trunc_eps of a denominator zero on either side",
        ],
    },
    Schema {
        id: IdentityId::Thm1,
        title: "Squared-base summation with argument -1/(st)",
        lhs: "sum_{k>=0} (a^2,aq^2,-aq^2;q^2)_k/(q^2,a,-a;q^2)_k \
              * (s,t;q)_k/(aq/s, aq/t;q)_k * (-1/(st))^k",
        rhs: "(s+t)/(st) * (aq, -q/s, -q/t, aq/(st);q)_inf \
              / (-q, aq/s, aq/t, -1/(st);q)_inf",
        params: &[
            p!("a", "free parameter"),
            p!("s", "free parameter, nonzero"),
            p!("t", "free parameter, nonzero"),
            p!("q", "base, 0 < |q| < 1"),
        ],
        domain: &[
            "0 < |q| < 1",
            "s and t nonzero",
            "|1/(st)| < 1 for convergence",
            "no parameter within 1000*trunc_eps of a denominator zero on either side",
        ],
    },
    Schema {
        id: IdentityId::BilateralX,
        title: "Bilateral summation with free parameter x",
        lhs: "sum_{k in Z} (aq^2,-aq^2,a^2/x;q^2)_k/(a,-a,xq^2;q^2)_k \
              * (s,t;q)_k/(aq/s, aq/t;q)_k * (-x/(st))^k",
        rhs: "a(s+t)/((a+1)st) * (xq^2/s^2, xq^2/t^2;q^2)_inf \
              * (-x/a, q, q/a, aq, aq/(st);q)_inf \
              / [ (xq^2, xq^2/a^2;q^2)_inf \
              * (q/s, q/t, aq/s, aq/t, -x/(st);q)_inf ]",
        params: &[
            p!("a", "free parameter, nonzero, not -1"),
            p!("x", "free parameter, nonzero"),
            p!("s", "free parameter, nonzero"),
            p!("t", "free parameter, nonzero"),
            p!("q", "base, 0 < |q| < 1"),
        ],
        domain: &[
            "0 < |q| < 1",
            "a, x, s, t nonzero; a != -1",
            "|x/(st)| < 1 for convergence",
            "no parameter within 1000*trunc_eps of a denominator zero on either side",
        ],
    },
    Schema {
        id: IdentityId::Thm2,
        title: "Bilateral squared-base summation with argument -a^2/(bst)",
        lhs: "sum_{k in Z} (aq^2,-aq^2,b;q^2)_k/(a,-a,a^2 q^2/b;q^2)_k \
              * (s,t;q)_k/(aq/s, aq/t;q)_k * (-a^2/(bst))^k",
        rhs: "a(s+t)/((a+1)st) * (q, q/a, aq, aq/(st), -a/b;q)_inf \
              * (a^2 q^2/(b s^2), a^2 q^2/(b t^2);q^2)_inf \
              / [ (q/s, q/t, aq/s, aq/t, -a^2/(bst);q)_inf \
              * (a^2 q^2/b, q^2/b;q^2)_inf ]",
        params: &[
            p!("a", "free parameter, nonzero, not -1"),
            p!("b", "free parameter, nonzero"),
            p!("s", "free parameter, nonzero"),
            p!("t", "free parameter, nonzero"),
            p!("q", "base, 0 < |q| < 1"),
        ],
        domain: &[
            "0 < |q| < 1",
            "a, b, s, t nonzero; a != -1",
            "|a^2/(bst)| < 1 for convergence",
            "the negative branch is summed as stated; points where it grows are reported diverging",
            "no parameter within 1000*trunc_eps of a denominator zero on either side",
        ],
    },
    Schema {
        id: IdentityId::Prop41,
        title: "Bilateral summation with quadratic exponent growth",
        lhs: "sum_{k in Z} (1 - a^2 q^(4k)) (s,t;q)_k/(aq/s, aq/t;q)_k \
              * q^(k^2-k) (a^2/(st))^k",
        rhs: "a(s+t)/(st) * (q, q/a, a, aq/(st);q)_inf \
              / (q/s, q/t, aq/s, aq/t;q)_inf",
        params: &[
            p!("a", "free parameter, nonzero"),
            p!("s", "free parameter, nonzero"),
            p!("t", "free parameter, nonzero"),
            p!("q", "base, 0 < |q| < 1"),
        ],
        domain: &[
            "0 < |q| < 1",
            "a, s, t nonzero",
            "always convergent (quadratic exponent dominates)",
            "no parameter within 1000*trunc_eps of a denominator zero on either side",
        ],
    },
    Schema {
        id: IdentityId::Cor42,
        title: "Bilateral summation with cubic-half exponent growth",
        lhs: "sum_{k in Z} (1 - a^2 q^(4k)) (s;q)_k/(aq/s;q)_k \
              * q^(3k(k-1)/2) (-a^2/s)^k",
        rhs: "(a/s) * (q, q/a, a;q)_inf / (q/s, aq/s;q)_inf",
        params: &[
            p!("a", "free parameter, nonzero"),
            p!("s", "free parameter, nonzero"),
            p!("q", "base, 0 < |q| < 1"),
        ],
        domain: &[
            "0 < |q| < 1",
            "a and s nonzero",
            "always convergent (quadratic exponent dominates)",
            "no parameter within 1000*trunc_eps of a denominator zero on either side",
        ],
    },
    Schema {
        id: IdentityId::Quintuple,
        title: "Quintuple product identity",
        lhs: "sum_{k in Z} (-1)^k q^(k(3k-1)/2) x^(3k) (1 + x q^k)",
        rhs: "(q, q/x^2, x^2;q)_inf / (x, q/x;q)_inf",
        params: &[
            p!("x", "free parameter, nonzero"),
            p!("q", "base, 0 < |q| < 1"),
        ],
        domain: &[
            "0 < |q| < 1",
            "x nonzero",
            "always convergent (quadratic exponent dominates)",
            "x not within 1000*trunc_eps of any q^m (right side has poles there)",
        ],
    },
    Schema {
        id: IdentityId::Jacobi,
        title: "Triple product identity",
        lhs: "sum_{k in Z} (-1)^k q^(k(k-1)/2) a^k",
        rhs: "(q, q/a, a;q)_inf",
        params: &[
            p!("a", "free parameter, nonzero"),
            p!("q", "base, 0 < |q| < 1"),
        ],
        domain: &["0 < |q| < 1", "a nonzero", "always convergent"],
    },
    Schema {
        id: IdentityId::F43,
        title: "Terminating classical 4F3(-1) summation",
        lhs: "sum_{k=0..n} (a)_k (a/2+1)_k (c)_k (d)_k \
              / ((a/2)_k (a-c+1)_k (a-d+1)_k) * (-1)^k / k!   with n = -c",
        rhs: "Gamma(a-c+1) Gamma(a-d+1) / (Gamma(a+1) Gamma(a-c-d+1))",
        params: &[
            p!("a", "free parameter"),
            p!("c", "nonpositive integer (termination order n = -c)"),
            p!("d", "free parameter"),
        ],
        domain: &[
            "c a nonpositive integer (only terminating cases are implemented)",
            "no rising-factorial denominator (a/2+k, a-c+1+k, a-d+1+k) vanishes for k < -c",
            "gamma arguments a-c+1 and a-d+1 away from nonpositive integers",
        ],
    },
    Schema {
        id: IdentityId::Q4F3,
        title: "Power-substituted form of the thm1 summation",
        lhs: "the thm1 series evaluated at a -> q^a, s -> q^c, t -> q^d",
        rhs: "the thm1 closed form at the same substitution",
        params: &[
            p!("a", "exponent for the a-parameter"),
            p!("c", "exponent for the s-parameter"),
            p!("d", "exponent for the t-parameter"),
            p!("q", "base, 0 < |q| < 1"),
        ],
        domain: &[
            "0 < |q| < 1",
            "terminating (c a nonpositive integer) or Re(c+d) < 0 for convergence",
            "the substituted thm1 domain checks apply",
        ],
    },
    Schema {
        id: IdentityId::Phi65Limit,
        title: "Limiting summation with triangular exponent factor",
        lhs: "sum_{k>=0} (a;q)_k (aq^2;q^2)_k / ((q;q)_k (a;q^2)_k) \
              * (c,d;q)_k/(aq/c, aq/d;q)_k * q^(k(k-1)/2) (-aq/(cd))^k",
        rhs: "(aq, aq/(cd);q)_inf / (aq/c, aq/d;q)_inf",
        params: &[
            p!("a", "free parameter"),
            p!("c", "free parameter, nonzero"),
            p!("d", "free parameter, nonzero"),
            p!("q", "base, 0 < |q| < 1"),
        ],
        domain: &[
            "0 < |q| < 1",
            "c and d nonzero",
            "always convergent (triangular exponent dominates)",
            "no parameter within 1000*trunc_eps of a denominator zero on either side",
        ],
    },
];

/// The published schema for an identity; total over [`IdentityId`].
pub fn describe(id: IdentityId) -> &'static Schema {
    SCHEMAS
        .iter()
        .find(|s| s.id == id)
        .expect("every identity has a schema")
}

// ---------------------------------------------------------------------------
// Cases
// ---------------------------------------------------------------------------

/// An identity plus a full parameter assignment.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub id: IdentityId,
    pub params: BTreeMap<String, Complex>,
}

impl IdentityCase {
    /// Builds a case, insisting that the parameter names match the
    /// schema exactly.
    pub fn new(id: IdentityId, params: BTreeMap<String, Complex>) -> Result<IdentityCase> {
        let schema = describe(id);
        for spec in schema.params {
            if !params.contains_key(spec.name) {
                return Err(Error::Param(format!(
                    "{}: missing parameter `{}`",
                    id.name(),
                    spec.name
                )));
            }
        }
        for name in params.keys() {
            if !schema.params.iter().any(|p| p.name == name) {
                return Err(Error::Param(format!(
                    "{}: unknown parameter `{}`",
                    id.name(),
                    name
                )));
            }
        }
        Ok(IdentityCase { id, params })
    }

    fn get(&self, name: &str) -> &Complex {
        self.params
            .get(name)
            .expect("schema-validated parameter present")
    }

    fn int(&self, name: &str, ctx: &PrecisionContext) -> Result<i64> {
        let v = self.get(name);
        if !v.is_real(ctx) {
            return Err(Error::Param(format!(
                "parameter `{name}` must be a real integer"
            )));
        }
        v.re.to_i64_exact(ctx)
            .ok_or_else(|| Error::Param(format!("parameter `{name}` must be an integer")))
    }
}

// ---------------------------------------------------------------------------
// Domain checks
// ---------------------------------------------------------------------------

fn pole_tol(ctx: &PrecisionContext) -> Real {
    ctx.trunc_eps().mul(&ctx.real_from_u64(1000), ctx)
}

fn require_base(q: &Complex, ctx: &PrecisionContext) -> Result<()> {
    let m = q.abs(ctx);
    if !m.gt(&ctx.zero()) || !m.lt(&ctx.one()) {
        return Err(Error::Domain("base q must satisfy 0 < |q| < 1".into()));
    }
    Ok(())
}

fn require_nonzero(v: &Complex, what: &str, ctx: &PrecisionContext) -> Result<()> {
    if v.is_small(&pole_tol(ctx), ctx) {
        return Err(Error::Domain(format!("{what} must be nonzero")));
    }
    Ok(())
}

/// Rejects `c` within the pole tolerance of any `base^(-k)` for
/// `0 <= k < limit` (or unbounded): these are the zeros of the forward
/// product factors `(1 - c base^k)`.
fn forward_pole_scan(
    c: &Complex,
    base: &Complex,
    limit: Option<i64>,
    what: &str,
    ctx: &PrecisionContext,
) -> Result<()> {
    let tol = pole_tol(ctx);
    let half = ctx.real_from_f64(0.5);
    let mut p = c.clone();
    let mut k = 0i64;
    loop {
        if let Some(l) = limit {
            if k >= l {
                break;
            }
        }
        // Once |c base^k| < 1/2 every remaining factor is at least 1/2.
        if p.abs(ctx).lt(&half) {
            break;
        }
        if ctx.complex_one().sub(&p, ctx).abs(ctx).lt(&tol) {
            return Err(Error::Domain(format!(
                "{what} sits within the pole tolerance of a product zero"
            )));
        }
        p = p.mul(base, ctx);
        k += 1;
        if k > 1_000_000 {
            break;
        }
    }
    Ok(())
}

/// Rejects `c` within the pole tolerance of any `base^m` with `m >= 1`:
/// these are the zeros of the negative-branch factors `(1 - c base^(-m))`
/// that bilateral terms divide by.
fn backward_pole_scan(
    c: &Complex,
    base: &Complex,
    what: &str,
    ctx: &PrecisionContext,
) -> Result<()> {
    let tol = pole_tol(ctx);
    let two = ctx.real_from_f64(2.0);
    let mut p = c.div(base, ctx)?;
    let mut m = 1i64;
    loop {
        // |c base^-m| grows without bound; once above 2 the factor
        // modulus exceeds 1 forever after.
        if p.abs(ctx).gt(&two) {
            break;
        }
        if ctx.complex_one().sub(&p, ctx).abs(ctx).lt(&tol) {
            return Err(Error::Domain(format!(
                "{what} sits within the pole tolerance of a negative-branch zero"
            )));
        }
        p = p.div(base, ctx)?;
        m += 1;
        if m > 1_000_000 {
            break;
        }
    }
    Ok(())
}

/// Structural domain validation for a case; see the module docs for what
/// is (and deliberately is not) enforced.
pub fn check_domain(case: &IdentityCase, ctx: &PrecisionContext) -> Result<()> {
    let one = ctx.complex_one();
    match case.id {
        IdentityId::Seed3105 => {
            let (a, w, q) = (case.get("a"), case.get("w"), case.get("q"));
            let n = case.int("n", ctx)?;
            if n < 0 {
                return Err(Error::Domain("n must be a nonnegative integer".into()));
            }
            require_base(q, ctx)?;
            require_nonzero(a, "a", ctx)?;
            require_nonzero(w, "w", ctx)?;
            let q2 = q.mul(q, ctx);
            for (v, what) in [(a.clone(), "a"), (a.neg(), "-a")] {
                forward_pole_scan(&v, &q2, None, what, ctx)?;
            }
            let aqn1 = a.mul(&q.powi(n + 1, ctx)?, ctx).neg();
            forward_pole_scan(w, q, None, "w", ctx)?;
            forward_pole_scan(&aqn1, q, None, "-a q^(n+1)", ctx)?;
            // right side: finite products of order n
            let aq = a.mul(q, ctx);
            let aq_w = aq.div(w, ctx)?;
            forward_pole_scan(&q.neg(), q, Some(n), "-q", ctx)?;
            forward_pole_scan(&aq_w, q, Some(n), "aq/w", ctx)?;
        }
        IdentityId::Intermediate2Phizzz => {
            let (a, w, u, q) = (case.get("a"), case.get("w"), case.get("u"), case.get("q"));
            require_base(q, ctx)?;
            require_nonzero(a, "a", ctx)?;
            require_nonzero(w, "w", ctx)?;
            require_nonzero(u, "u", ctx)?;
            let q2 = q.mul(q, ctx);
            for (v, what) in [(a.clone(), "a"), (a.neg(), "-a")] {
                forward_pole_scan(&v, &q2, None, what, ctx)?;
            }
            let a2q2 = a.mul(a, ctx).mul(&q2, ctx);
            let z = w.mul(u, ctx).div(&a2q2, ctx)?.neg();
            for (v, what) in [
                (w.clone(), "w"),
                (u.clone(), "u"),
                (z.clone(), "-wu/(a^2 q^2)"),
            ] {
                forward_pole_scan(&v, q, None, what, ctx)?;
            }
        }
        IdentityId::Thm1 => {
            let (a, s, t, q) = (case.get("a"), case.get("s"), case.get("t"), case.get("q"));
            require_base(q, ctx)?;
            require_nonzero(s, "s", ctx)?;
            require_nonzero(t, "t", ctx)?;
            let st = s.mul(t, ctx);
            require_nonzero(&st, "st", ctx)?;
            let q2 = q.mul(q, ctx);
            for (v, what) in [(a.clone(), "a"), (a.neg(), "-a")] {
                forward_pole_scan(&v, &q2, None, what, ctx)?;
            }
            let aq = a.mul(q, ctx);
            let z = one.div(&st, ctx)?.neg();
            for (v, what) in [
                (aq.div(s, ctx)?, "aq/s"),
                (aq.div(t, ctx)?, "aq/t"),
                (z, "-1/(st)"),
            ] {
                forward_pole_scan(&v, q, None, what, ctx)?;
            }
        }
        IdentityId::BilateralX => {
            let (a, x, s, t, q) = (
                case.get("a"),
                case.get("x"),
                case.get("s"),
                case.get("t"),
                case.get("q"),
            );
            require_base(q, ctx)?;
            require_nonzero(a, "a", ctx)?;
            require_nonzero(x, "x", ctx)?;
            require_nonzero(s, "s", ctx)?;
            require_nonzero(t, "t", ctx)?;
            require_nonzero(&a.add(&one, ctx), "a+1", ctx)?;
            let st = s.mul(t, ctx);
            require_nonzero(&st, "st", ctx)?;
            let q2 = q.mul(q, ctx);
            let aq = a.mul(q, ctx);
            let aq2 = a.mul(&q2, ctx);
            let xq2 = x.mul(&q2, ctx);
            let a2 = a.mul(a, ctx);
            // left side forward denominators
            for (v, what) in [(a.clone(), "a"), (a.neg(), "-a"), (xq2.clone(), "x q^2")] {
                forward_pole_scan(&v, &q2, None, what, ctx)?;
            }
            for (v, what) in [(aq.div(s, ctx)?, "aq/s"), (aq.div(t, ctx)?, "aq/t")] {
                forward_pole_scan(&v, q, None, what, ctx)?;
            }
            // left side negative-branch numerators
            for (v, what) in [
                (aq2.clone(), "a q^2"),
                (aq2.neg(), "-a q^2"),
                (a2.div(x, ctx)?, "a^2/x"),
            ] {
                backward_pole_scan(&v, &q2, what, ctx)?;
            }
            backward_pole_scan(s, q, "s", ctx)?;
            backward_pole_scan(t, q, "t", ctx)?;
            // right side denominators
            for (v, what) in [(xq2.clone(), "x q^2"), (xq2.div(&a2, ctx)?, "x q^2/a^2")] {
                forward_pole_scan(&v, &q2, None, what, ctx)?;
            }
            let z = x.div(&st, ctx)?.neg();
            for (v, what) in [
                (q.div(s, ctx)?, "q/s"),
                (q.div(t, ctx)?, "q/t"),
                (z, "-x/(st)"),
            ] {
                forward_pole_scan(&v, q, None, what, ctx)?;
            }
        }
        IdentityId::Thm2 => {
            let (a, b, s, t, q) = (
                case.get("a"),
                case.get("b"),
                case.get("s"),
                case.get("t"),
                case.get("q"),
            );
            require_base(q, ctx)?;
            require_nonzero(a, "a", ctx)?;
            require_nonzero(b, "b", ctx)?;
            require_nonzero(s, "s", ctx)?;
            require_nonzero(t, "t", ctx)?;
            require_nonzero(&a.add(&one, ctx), "a+1", ctx)?;
            let st = s.mul(t, ctx);
            require_nonzero(&st, "st", ctx)?;
            let q2 = q.mul(q, ctx);
            let aq = a.mul(q, ctx);
            let aq2 = a.mul(&q2, ctx);
            let a2 = a.mul(a, ctx);
            let a2q2 = a2.mul(&q2, ctx);
            let a2q2_b = a2q2.div(b, ctx)?;
            for (v, what) in [
                (a.clone(), "a"),
                (a.neg(), "-a"),
                (a2q2_b.clone(), "a^2 q^2/b"),
            ] {
                forward_pole_scan(&v, &q2, None, what, ctx)?;
            }
            for (v, what) in [(aq.div(s, ctx)?, "aq/s"), (aq.div(t, ctx)?, "aq/t")] {
                forward_pole_scan(&v, q, None, what, ctx)?;
            }
            for (v, what) in [
                (aq2.clone(), "a q^2"),
                (aq2.neg(), "-a q^2"),
                (b.clone(), "b"),
            ] {
                backward_pole_scan(&v, &q2, what, ctx)?;
            }
            backward_pole_scan(s, q, "s", ctx)?;
            backward_pole_scan(t, q, "t", ctx)?;
            let z = a2.div(&b.mul(&st, ctx), ctx)?.neg();
            require_nonzero(&z, "a^2/(bst)", ctx)?;
            for (v, what) in [
                (q.div(s, ctx)?, "q/s"),
                (q.div(t, ctx)?, "q/t"),
                (z, "-a^2/(bst)"),
            ] {
                forward_pole_scan(&v, q, None, what, ctx)?;
            }
            forward_pole_scan(&q2.div(b, ctx)?, &q2, None, "q^2/b", ctx)?;
        }
        IdentityId::Prop41 => {
            let (a, s, t, q) = (case.get("a"), case.get("s"), case.get("t"), case.get("q"));
            require_base(q, ctx)?;
            require_nonzero(a, "a", ctx)?;
            require_nonzero(s, "s", ctx)?;
            require_nonzero(t, "t", ctx)?;
            let st = s.mul(t, ctx);
            require_nonzero(&st, "st", ctx)?;
            let aq = a.mul(q, ctx);
            for (v, what) in [
                (aq.div(s, ctx)?, "aq/s"),
                (aq.div(t, ctx)?, "aq/t"),
                (q.div(s, ctx)?, "q/s"),
                (q.div(t, ctx)?, "q/t"),
            ] {
                forward_pole_scan(&v, q, None, what, ctx)?;
            }
            backward_pole_scan(s, q, "s", ctx)?;
            backward_pole_scan(t, q, "t", ctx)?;
        }
        IdentityId::Cor42 => {
            let (a, s, q) = (case.get("a"), case.get("s"), case.get("q"));
            require_base(q, ctx)?;
            require_nonzero(a, "a", ctx)?;
            require_nonzero(s, "s", ctx)?;
            let aq = a.mul(q, ctx);
            for (v, what) in [(aq.div(s, ctx)?, "aq/s"), (q.div(s, ctx)?, "q/s")] {
                forward_pole_scan(&v, q, None, what, ctx)?;
            }
            backward_pole_scan(s, q, "s", ctx)?;
        }
        IdentityId::Quintuple => {
            let (x, q) = (case.get("x"), case.get("q"));
            require_base(q, ctx)?;
            require_nonzero(x, "x", ctx)?;
            forward_pole_scan(x, q, None, "x", ctx)?;
            forward_pole_scan(&q.div(x, ctx)?, q, None, "q/x", ctx)?;
        }
        IdentityId::Jacobi => {
            let (a, q) = (case.get("a"), case.get("q"));
            require_base(q, ctx)?;
            require_nonzero(a, "a", ctx)?;
        }
        IdentityId::F43 => {
            let (a, d) = (case.get("a"), case.get("d"));
            let c = case.int("c", ctx)?;
            if c > 0 {
                return Err(Error::Domain(
                    "c must be a nonpositive integer (terminating case)".into(),
                ));
            }
            let n = -c;
            let tol = pole_tol(ctx);
            let half_a = a.scale(&ctx.real_from_f64(0.5), ctx);
            let amc1 = a.sub(case.get("c"), ctx).add(&one, ctx);
            let amd1 = a.sub(d, ctx).add(&one, ctx);
            for k in 0..n {
                let kk = ctx.complex_from_f64(k as f64, 0.0);
                for (base, what) in [(&half_a, "a/2"), (&amc1, "a-c+1"), (&amd1, "a-d+1")] {
                    if base.add(&kk, ctx).abs(ctx).lt(&tol) {
                        return Err(Error::Domain(format!(
                            "rising factorial {what} vanishes inside the terminating range"
                        )));
                    }
                }
            }
        }
        IdentityId::Q4F3 => {
            let mapped = q4f3_to_thm1(case, ctx)?;
            check_domain(&mapped, ctx)?;
        }
        IdentityId::Phi65Limit => {
            let (a, c, d, q) = (case.get("a"), case.get("c"), case.get("d"), case.get("q"));
            require_base(q, ctx)?;
            require_nonzero(c, "c", ctx)?;
            require_nonzero(d, "d", ctx)?;
            let q2 = q.mul(q, ctx);
            let aq = a.mul(q, ctx);
            forward_pole_scan(a, &q2, None, "a", ctx)?;
            for (v, what) in [(aq.div(c, ctx)?, "aq/c"), (aq.div(d, ctx)?, "aq/d")] {
                forward_pole_scan(&v, q, None, what, ctx)?;
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Left sides
// ---------------------------------------------------------------------------

/// The common squared-base prefix group: numerators `a^2, aq^2, -aq^2`
/// and denominators `a, -a` over base `q^2` (the `(q^2;q^2)_k` divisor is
/// the engine's implicit one for unilateral specs).
fn squared_base_head(
    a: &Complex,
    q: &Complex,
    ctx: &PrecisionContext,
) -> (Complex, Vec<Complex>, Vec<Complex>) {
    let q2 = q.mul(q, ctx);
    let aq2 = a.mul(&q2, ctx);
    let nums = vec![a.mul(a, ctx), aq2.clone(), aq2.neg()];
    let dens = vec![a.clone(), a.neg()];
    (q2, nums, dens)
}

fn lhs_spec(case: &IdentityCase, ctx: &PrecisionContext) -> Result<SeriesSpec> {
    let one = ctx.complex_one();
    match case.id {
        IdentityId::Seed3105 => {
            let (a, w, q) = (case.get("a"), case.get("w"), case.get("q"));
            let n = case.int("n", ctx)?;
            let (q2, nums, dens) = squared_base_head(a, q, ctx);
            let aq = a.mul(q, ctx);
            let z = w.mul(&q.powi(n - 1, ctx)?, ctx).div(a, ctx)?;
            Ok(
                SeriesSpec::unilateral(q2, nums, dens, z).with_group(SeriesGroup {
                    base: q.clone(),
                    numerators: vec![aq.div(w, ctx)?.neg(), q.powi(-n, ctx)?],
                    denominators: vec![w.clone(), a.mul(&q.powi(n + 1, ctx)?, ctx).neg()],
                }),
            )
        }
        IdentityId::Intermediate2Phizzz => {
            let (a, w, u, q) = (case.get("a"), case.get("w"), case.get("u"), case.get("q"));
            let (q2, nums, dens) = squared_base_head(a, q, ctx);
            let aq = a.mul(q, ctx);
            let a2q2 = a.mul(a, ctx).mul(&q2, ctx);
            let z = w.mul(u, ctx).div(&a2q2, ctx)?.neg();
            Ok(
                SeriesSpec::unilateral(q2, nums, dens, z).with_group(SeriesGroup {
                    base: q.clone(),
                    numerators: vec![aq.div(w, ctx)?.neg(), aq.div(u, ctx)?.neg()],
                    denominators: vec![w.clone(), u.clone()],
                }),
            )
        }
        IdentityId::Thm1 | IdentityId::Q4F3 => {
            let thm1_case;
            let case = if case.id == IdentityId::Q4F3 {
                thm1_case = q4f3_to_thm1(case, ctx)?;
                &thm1_case
            } else {
                case
            };
            let (a, s, t, q) = (case.get("a"), case.get("s"), case.get("t"), case.get("q"));
            let (q2, nums, dens) = squared_base_head(a, q, ctx);
            let aq = a.mul(q, ctx);
            let z = one.div(&s.mul(t, ctx), ctx)?.neg();
            Ok(
                SeriesSpec::unilateral(q2, nums, dens, z).with_group(SeriesGroup {
                    base: q.clone(),
                    numerators: vec![s.clone(), t.clone()],
                    denominators: vec![aq.div(s, ctx)?, aq.div(t, ctx)?],
                }),
            )
        }
        IdentityId::BilateralX => {
            let (a, x, s, t, q) = (
                case.get("a"),
                case.get("x"),
                case.get("s"),
                case.get("t"),
                case.get("q"),
            );
            let q2 = q.mul(q, ctx);
            let aq = a.mul(q, ctx);
            let aq2 = a.mul(&q2, ctx);
            let z = x.div(&s.mul(t, ctx), ctx)?.neg();
            Ok(SeriesSpec::bilateral(
                q2.clone(),
                vec![aq2.clone(), aq2.neg(), a.mul(a, ctx).div(x, ctx)?],
                vec![a.clone(), a.neg(), x.mul(&q2, ctx)],
                z,
            )
            .with_group(SeriesGroup {
                base: q.clone(),
                numerators: vec![s.clone(), t.clone()],
                denominators: vec![aq.div(s, ctx)?, aq.div(t, ctx)?],
            }))
        }
        IdentityId::Thm2 => {
            let (a, b, s, t, q) = (
                case.get("a"),
                case.get("b"),
                case.get("s"),
                case.get("t"),
                case.get("q"),
            );
            let q2 = q.mul(q, ctx);
            let aq = a.mul(q, ctx);
            let aq2 = a.mul(&q2, ctx);
            let a2 = a.mul(a, ctx);
            let z = a2.div(&b.mul(&s.mul(t, ctx), ctx), ctx)?.neg();
            Ok(SeriesSpec::bilateral(
                q2.clone(),
                vec![aq2.clone(), aq2.neg(), b.clone()],
                vec![a.clone(), a.neg(), a2.mul(&q2, ctx).div(b, ctx)?],
                z,
            )
            .with_group(SeriesGroup {
                base: q.clone(),
                numerators: vec![s.clone(), t.clone()],
                denominators: vec![aq.div(s, ctx)?, aq.div(t, ctx)?],
            }))
        }
        IdentityId::Phi65Limit => {
            let (a, c, d, q) = (case.get("a"), case.get("c"), case.get("d"), case.get("q"));
            let q2 = q.mul(q, ctx);
            let aq = a.mul(q, ctx);
            let z = aq.div(&c.mul(d, ctx), ctx)?.neg();
            Ok(SeriesSpec::unilateral(
                q.clone(),
                vec![a.clone(), c.clone(), d.clone()],
                vec![aq.div(c, ctx)?, aq.div(d, ctx)?],
                z,
            )
            .with_group(SeriesGroup {
                base: q2.clone(),
                numerators: vec![a.mul(&q2, ctx)],
                denominators: vec![a.clone()],
            })
            .with_gauss_base(q.clone()))
        }
        _ => unreachable!("direct-summand identities do not build a series spec"),
    }
}

/// Maps a q4f3 case onto the thm1 parameters `a -> q^a, s -> q^c,
/// t -> q^d`.
fn q4f3_to_thm1(case: &IdentityCase, ctx: &PrecisionContext) -> Result<IdentityCase> {
    let q = case.get("q");
    require_base(q, ctx)?;
    let mut params = BTreeMap::new();
    params.insert("a".to_string(), q.pow(case.get("a"), ctx)?);
    params.insert("s".to_string(), q.pow(case.get("c"), ctx)?);
    params.insert("t".to_string(), q.pow(case.get("d"), ctx)?);
    params.insert("q".to_string(), q.clone());
    IdentityCase::new(IdentityId::Thm1, params)
}

/// Direct bilateral accumulation for the summands that carry
/// non-Pochhammer factors; applies the engine's stopping rules to each
/// branch.
fn sum_bilateral_direct<F>(term: F, ctx: &PrecisionContext) -> Result<SeriesResult>
where
    F: Fn(i64) -> Result<Complex>,
{
    let mut value = term(0)?;
    let mut terms_used = 1usize;
    let mut worst = SeriesStatus::Converged;
    let mut tail = ctx.zero();
    for dir in [1i64, -1] {
        let mut small_run = 0usize;
        let mut window_max = ctx.zero();
        let mut growth_run = 0usize;
        let mut prev_mod = ctx.one();
        let mut status = SeriesStatus::MaxTermsExceeded;
        let mut branch_tail = ctx.zero();
        for step in 1..=DEFAULT_MAX_TERMS as i64 {
            let t = term(dir * step)?;
            value = value.add(&t, ctx);
            terms_used += 1;
            if t.is_zero() {
                status = SeriesStatus::Converged;
                branch_tail = ctx.zero();
                break;
            }
            let scale = value.abs(ctx).max(&ctx.one());
            let threshold = ctx.trunc_eps().mul(&scale, ctx);
            let t_mod = t.abs(ctx);
            if t_mod.lt(&threshold) {
                small_run += 1;
                window_max = window_max.max(&t_mod);
                growth_run = 0;
                if small_run >= 5 {
                    status = SeriesStatus::Converged;
                    branch_tail = window_max.div(&scale, ctx);
                    if branch_tail.gt(ctx.trunc_eps()) {
                        branch_tail = ctx.trunc_eps().clone();
                    }
                    break;
                }
            } else {
                small_run = 0;
                window_max = ctx.zero();
                if step > 50 && t_mod.gt(&prev_mod) {
                    growth_run += 1;
                    if growth_run >= 10 {
                        status = SeriesStatus::Diverging;
                        branch_tail = t_mod.div(&scale, ctx);
                        break;
                    }
                } else {
                    growth_run = 0;
                }
            }
            if step == DEFAULT_MAX_TERMS as i64 {
                branch_tail = t_mod.div(&scale, ctx);
            }
            prev_mod = t_mod;
        }
        worst = worst.worst(status);
        tail = tail.max(&branch_tail);
    }
    Ok(SeriesResult {
        value,
        terms_used,
        status: worst,
        tail_estimate: tail,
    })
}

/// Evaluates the series side of a case.
pub fn eval_lhs(case: &IdentityCase, ctx: &PrecisionContext) -> Result<SeriesResult> {
    check_domain(case, ctx)?;
    let one = ctx.complex_one();
    match case.id {
        IdentityId::Seed3105
        | IdentityId::Intermediate2Phizzz
        | IdentityId::Thm1
        | IdentityId::Q4F3
        | IdentityId::Phi65Limit => sum_unilateral(&lhs_spec(case, ctx)?, ctx, DEFAULT_MAX_TERMS),
        IdentityId::BilateralX | IdentityId::Thm2 => {
            sum_bilateral(&lhs_spec(case, ctx)?, ctx, DEFAULT_MAX_TERMS)
        }
        IdentityId::Prop41 => {
            let (a, s, t, q) = (case.get("a"), case.get("s"), case.get("t"), case.get("q"));
            let q2 = q.mul(q, ctx);
            let aq = a.mul(q, ctx);
            let a2 = a.mul(a, ctx);
            let q4 = q2.mul(&q2, ctx);
            // q^(k^2-k) = (q^2)^(k(k-1)/2) is the triangular factor of the
            // Pochhammer-shaped part; (1 - a^2 q^(4k)) multiplies on top.
            let spec = SeriesSpec::bilateral(
                q.clone(),
                vec![s.clone(), t.clone()],
                vec![aq.div(s, ctx)?, aq.div(t, ctx)?],
                a2.div(&s.mul(t, ctx), ctx)?,
            )
            .with_gauss_base(q2);
            sum_bilateral_direct(
                |k| {
                    let extra = one.sub(&a2.mul(&q4.powi(k, ctx)?, ctx), ctx);
                    Ok(term_at(&spec, k, ctx)?.mul(&extra, ctx))
                },
                ctx,
            )
        }
        IdentityId::Cor42 => {
            let (a, s, q) = (case.get("a"), case.get("s"), case.get("q"));
            let aq = a.mul(q, ctx);
            let a2 = a.mul(a, ctx);
            let q3 = q.mul(q, ctx).mul(q, ctx);
            let q4 = q3.mul(q, ctx);
            let spec = SeriesSpec::bilateral(
                q.clone(),
                vec![s.clone()],
                vec![aq.div(s, ctx)?],
                a2.div(s, ctx)?.neg(),
            )
            .with_gauss_base(q3);
            sum_bilateral_direct(
                |k| {
                    let extra = one.sub(&a2.mul(&q4.powi(k, ctx)?, ctx), ctx);
                    Ok(term_at(&spec, k, ctx)?.mul(&extra, ctx))
                },
                ctx,
            )
        }
        IdentityId::Quintuple => {
            let (x, q) = (case.get("x"), case.get("q"));
            sum_bilateral_direct(
                |k| {
                    let sign = if k.rem_euclid(2) == 0 {
                        ctx.one()
                    } else {
                        ctx.one().neg()
                    };
                    let t = q
                        .powi(k * (3 * k - 1) / 2, ctx)?
                        .mul(&x.powi(3 * k, ctx)?, ctx)
                        .mul(&one.add(&x.mul(&q.powi(k, ctx)?, ctx), ctx), ctx);
                    Ok(t.scale(&sign, ctx))
                },
                ctx,
            )
        }
        IdentityId::Jacobi => {
            let (a, q) = (case.get("a"), case.get("q"));
            sum_bilateral_direct(
                |k| {
                    let sign = if k.rem_euclid(2) == 0 {
                        ctx.one()
                    } else {
                        ctx.one().neg()
                    };
                    let t = q.powi(k * (k - 1) / 2, ctx)?.mul(&a.powi(k, ctx)?, ctx);
                    Ok(t.scale(&sign, ctx))
                },
                ctx,
            )
        }
        IdentityId::F43 => {
            let (a, c, d) = (case.get("a"), case.get("c"), case.get("d"));
            let n = -case.int("c", ctx)?;
            let half = ctx.real_from_f64(0.5);
            let half_a = a.scale(&half, ctx);
            let nums = [a.clone(), half_a.add(&one, ctx), c.clone(), d.clone()];
            let dens = [
                half_a,
                a.sub(c, ctx).add(&one, ctx),
                a.sub(d, ctx).add(&one, ctx),
            ];
            let mut term = one.clone();
            let mut value = term.clone();
            for k in 0..n {
                let kk = ctx.complex_from_f64(k as f64, 0.0);
                let mut ratio = one.neg(); // the (-1)^k alternation
                for p in &nums {
                    ratio = ratio.mul(&p.add(&kk, ctx), ctx);
                }
                let mut den = ctx.complex_from_f64((k + 1) as f64, 0.0); // k!
                for p in &dens {
                    den = den.mul(&p.add(&kk, ctx), ctx);
                }
                term = term.mul(&ratio, ctx).div(&den, ctx)?;
                value = value.add(&term, ctx);
            }
            Ok(SeriesResult {
                value,
                terms_used: (n + 1) as usize,
                status: SeriesStatus::Converged,
                tail_estimate: ctx.zero(),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Right sides
// ---------------------------------------------------------------------------

/// Evaluates the closed-form side of a case.
pub fn eval_rhs(case: &IdentityCase, ctx: &PrecisionContext) -> Result<Complex> {
    check_domain(case, ctx)?;
    let one = ctx.complex_one();
    let inf = PochOrder::Infinite;
    match case.id {
        IdentityId::Seed3105 => {
            let (a, w, q) = (case.get("a"), case.get("w"), case.get("q"));
            let n = PochOrder::Finite(case.int("n", ctx)?);
            let aq = a.mul(q, ctx);
            let num = qpoch_multi(
                &[
                    aq.neg(),
                    a.mul(&q.mul(q, ctx), ctx).div(w, ctx)?,
                    w.div(&aq, ctx)?,
                ],
                q,
                n,
                ctx,
            )?;
            let den = qpoch_multi(&[q.neg(), aq.div(w, ctx)?, w.clone()], q, n, ctx)?;
            num.div(&den, ctx)
        }
        IdentityId::Intermediate2Phizzz => {
            let (a, w, u, q) = (case.get("a"), case.get("w"), case.get("u"), case.get("q"));
            let aq = a.mul(q, ctx);
            let wu = w.mul(u, ctx);
            let pref = u.add(w, ctx).div(&aq, ctx)?.neg();
            let num = qpoch_multi(
                &[
                    aq.neg(),
                    w.div(a, ctx)?,
                    u.div(a, ctx)?,
                    wu.div(&aq, ctx)?.neg(),
                ],
                q,
                inf,
                ctx,
            )?;
            let den = qpoch_multi(
                &[
                    q.neg(),
                    w.clone(),
                    u.clone(),
                    wu.div(&aq.mul(&aq, ctx), ctx)?.neg(),
                ],
                q,
                inf,
                ctx,
            )?;
            Ok(pref.mul(&num.div(&den, ctx)?, ctx))
        }
        IdentityId::Thm1 | IdentityId::Q4F3 => {
            let thm1_case;
            let case = if case.id == IdentityId::Q4F3 {
                thm1_case = q4f3_to_thm1(case, ctx)?;
                &thm1_case
            } else {
                case
            };
            let (a, s, t, q) = (case.get("a"), case.get("s"), case.get("t"), case.get("q"));
            let aq = a.mul(q, ctx);
            let st = s.mul(t, ctx);
            let pref = s.add(t, ctx).div(&st, ctx)?;
            let num = qpoch_multi(
                &[
                    aq.clone(),
                    q.div(s, ctx)?.neg(),
                    q.div(t, ctx)?.neg(),
                    aq.div(&st, ctx)?,
                ],
                q,
                inf,
                ctx,
            )?;
            let den = qpoch_multi(
                &[
                    q.neg(),
                    aq.div(s, ctx)?,
                    aq.div(t, ctx)?,
                    one.div(&st, ctx)?.neg(),
                ],
                q,
                inf,
                ctx,
            )?;
            Ok(pref.mul(&num.div(&den, ctx)?, ctx))
        }
        IdentityId::BilateralX => {
            let (a, x, s, t, q) = (
                case.get("a"),
                case.get("x"),
                case.get("s"),
                case.get("t"),
                case.get("q"),
            );
            let q2 = q.mul(q, ctx);
            let aq = a.mul(q, ctx);
            let st = s.mul(t, ctx);
            let xq2 = x.mul(&q2, ctx);
            let pref = a
                .mul(&s.add(t, ctx), ctx)
                .div(&a.add(&one, ctx).mul(&st, ctx), ctx)?;
            let num2 = qpoch_multi(
                &[xq2.div(&s.mul(s, ctx), ctx)?, xq2.div(&t.mul(t, ctx), ctx)?],
                &q2,
                inf,
                ctx,
            )?;
            let num1 = qpoch_multi(
                &[
                    x.div(a, ctx)?.neg(),
                    q.clone(),
                    q.div(a, ctx)?,
                    aq.clone(),
                    aq.div(&st, ctx)?,
                ],
                q,
                inf,
                ctx,
            )?;
            let den2 = qpoch_multi(&[xq2.clone(), xq2.div(&a.mul(a, ctx), ctx)?], &q2, inf, ctx)?;
            let den1 = qpoch_multi(
                &[
                    q.div(s, ctx)?,
                    q.div(t, ctx)?,
                    aq.div(s, ctx)?,
                    aq.div(t, ctx)?,
                    x.div(&st, ctx)?.neg(),
                ],
                q,
                inf,
                ctx,
            )?;
            pref.mul(&num2, ctx)
                .mul(&num1, ctx)
                .div(&den2.mul(&den1, ctx), ctx)
        }
        IdentityId::Thm2 => {
            let (a, b, s, t, q) = (
                case.get("a"),
                case.get("b"),
                case.get("s"),
                case.get("t"),
                case.get("q"),
            );
            let q2 = q.mul(q, ctx);
            let aq = a.mul(q, ctx);
            let st = s.mul(t, ctx);
            let a2q2 = a.mul(a, ctx).mul(&q2, ctx);
            let pref = a
                .mul(&s.add(t, ctx), ctx)
                .div(&a.add(&one, ctx).mul(&st, ctx), ctx)?;
            let num1 = qpoch_multi(
                &[
                    q.clone(),
                    q.div(a, ctx)?,
                    aq.clone(),
                    aq.div(&st, ctx)?,
                    a.div(b, ctx)?.neg(),
                ],
                q,
                inf,
                ctx,
            )?;
            let num2 = qpoch_multi(
                &[
                    a2q2.div(&b.mul(&s.mul(s, ctx), ctx), ctx)?,
                    a2q2.div(&b.mul(&t.mul(t, ctx), ctx), ctx)?,
                ],
                &q2,
                inf,
                ctx,
            )?;
            let den1 = qpoch_multi(
                &[
                    q.div(s, ctx)?,
                    q.div(t, ctx)?,
                    aq.div(s, ctx)?,
                    aq.div(t, ctx)?,
                    a.mul(a, ctx).div(&b.mul(&st, ctx), ctx)?.neg(),
                ],
                q,
                inf,
                ctx,
            )?;
            let den2 = qpoch_multi(&[a2q2.div(b, ctx)?, q2.div(b, ctx)?], &q2, inf, ctx)?;
            pref.mul(&num1, ctx)
                .mul(&num2, ctx)
                .div(&den1.mul(&den2, ctx), ctx)
        }
        IdentityId::Prop41 => {
            let (a, s, t, q) = (case.get("a"), case.get("s"), case.get("t"), case.get("q"));
            let aq = a.mul(q, ctx);
            let st = s.mul(t, ctx);
            let pref = a.mul(&s.add(t, ctx), ctx).div(&st, ctx)?;
            let num = qpoch_multi(
                &[q.clone(), q.div(a, ctx)?, a.clone(), aq.div(&st, ctx)?],
                q,
                inf,
                ctx,
            )?;
            let den = qpoch_multi(
                &[
                    q.div(s, ctx)?,
                    q.div(t, ctx)?,
                    aq.div(s, ctx)?,
                    aq.div(t, ctx)?,
                ],
                q,
                inf,
                ctx,
            )?;
            Ok(pref.mul(&num.div(&den, ctx)?, ctx))
        }
        IdentityId::Cor42 => {
            let (a, s, q) = (case.get("a"), case.get("s"), case.get("q"));
            let pref = a.div(s, ctx)?;
            let num = qpoch_multi(&[q.clone(), q.div(a, ctx)?, a.clone()], q, inf, ctx)?;
            let den = qpoch_multi(&[q.div(s, ctx)?, a.mul(q, ctx).div(s, ctx)?], q, inf, ctx)?;
            Ok(pref.mul(&num.div(&den, ctx)?, ctx))
        }
        IdentityId::Quintuple => {
            let (x, q) = (case.get("x"), case.get("q"));
            let x2 = x.mul(x, ctx);
            let num = qpoch_multi(&[q.clone(), q.div(&x2, ctx)?, x2.clone()], q, inf, ctx)?;
            let den = qpoch_multi(&[x.clone(), q.div(x, ctx)?], q, inf, ctx)?;
            num.div(&den, ctx)
        }
        IdentityId::Jacobi => {
            let (a, q) = (case.get("a"), case.get("q"));
            qpoch_multi(&[q.clone(), q.div(a, ctx)?, a.clone()], q, inf, ctx)
        }
        IdentityId::F43 => {
            let (a, c, d) = (case.get("a"), case.get("c"), case.get("d"));
            let g = |v: &Complex| crate::qpoch::gamma_classical(v, ctx);
            let num =
                g(&a.sub(c, ctx).add(&one, ctx))?.mul(&g(&a.sub(d, ctx).add(&one, ctx))?, ctx);
            let den =
                g(&a.add(&one, ctx))?.mul(&g(&a.sub(c, ctx).sub(d, ctx).add(&one, ctx))?, ctx);
            num.div(&den, ctx)
        }
        IdentityId::Phi65Limit => {
            let (a, c, d, q) = (case.get("a"), case.get("c"), case.get("d"), case.get("q"));
            let aq = a.mul(q, ctx);
            let num = qpoch_multi(&[aq.clone(), aq.div(&c.mul(d, ctx), ctx)?], q, inf, ctx)?;
            let den = qpoch_multi(&[aq.div(c, ctx)?, aq.div(d, ctx)?], q, inf, ctx)?;
            num.div(&den, ctx)
        }
    }
}

/// `relative_error` between the two sides; meaningful only when the
/// series side converged (callers inspect the status separately).
pub fn residual(case: &IdentityCase, ctx: &PrecisionContext) -> Result<Real> {
    let lhs = eval_lhs(case, ctx)?;
    let rhs = eval_rhs(case, ctx)?;
    Ok(relative_error(&lhs.value, &rhs, ctx))
}

// A finite Pochhammer helper is re-exported for oracle-style tests.
#[doc(hidden)]
pub fn finite_poch(a: &Complex, q: &Complex, n: i64, ctx: &PrecisionContext) -> Result<Complex> {
    qpoch_finite(a, q, n, ctx)
}
