//! Parameter sampling, residual sweeps, limit studies, and
//! machine-readable reports.
//!
//! Sweeps draw reproducible pseudo-random parameter points inside each
//! identity's safe region (rejection sampling against the schema domain
//! plus convergence margins), evaluate both sides per point, and
//! aggregate the residuals into a [`VerificationReport`]. Reports are
//! deterministic: the same grid (including seed) and context always
//! serialize to byte-identical JSON — which is why `wall_time` stays
//! `null` unless a front end explicitly fills it in.

use std::collections::BTreeMap;

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::arith::{relative_error, Complex, PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::identities::{check_domain, describe, eval_lhs, eval_rhs, IdentityCase, IdentityId};
use crate::series::SeriesStatus;

/// Offset between the per-identity RNG streams of a multi-identity run.
const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

// ---------------------------------------------------------------------------
// Grids and sampling
// ---------------------------------------------------------------------------

/// Built-in sampling profiles: purely real parameters, or parameters
/// with small imaginary parts (at most 0.3 in magnitude).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Real,
    Complex,
}

/// Sampling range for one parameter.
#[derive(Clone, Debug)]
pub struct ParamRange {
    pub re_lo: f64,
    pub re_hi: f64,
    /// Imaginary parts are drawn uniformly from `[-im_half_width, im_half_width]`.
    pub im_half_width: f64,
    /// Integer-valued parameter: draws are uniform integers over
    /// `[re_lo, re_hi]` and never carry an imaginary part.
    pub integer: bool,
    /// Names of previously drawn parameters whose values multiply this
    /// draw (used for parameters that must scale with others to stay in
    /// the convergence region). Referenced names must sort before this
    /// parameter's name.
    pub scale_by: &'static [&'static str],
}

/// A reproducible sampling plan for one identity.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub id: IdentityId,
    pub ranges: BTreeMap<String, ParamRange>,
    pub count: usize,
    pub seed: u64,
}

fn range(lo: f64, hi: f64, im: f64) -> ParamRange {
    ParamRange {
        re_lo: lo,
        re_hi: hi,
        im_half_width: im,
        integer: false,
        scale_by: &[],
    }
}

fn int_range(lo: f64, hi: f64) -> ParamRange {
    ParamRange {
        re_lo: lo,
        re_hi: hi,
        im_half_width: 0.0,
        integer: true,
        scale_by: &[],
    }
}

/// The default grid for an identity: comfortably inside every
/// convergence region while still exercising wide magnitude ranges.
pub fn default_grid(id: IdentityId, count: usize, seed: u64, profile: Profile) -> GridSpec {
    let im = match profile {
        Profile::Real => 0.0,
        Profile::Complex => 0.3,
    };
    let mut ranges = BTreeMap::new();
    let mut put = |name: &str, r: ParamRange| {
        ranges.insert(name.to_string(), r);
    };
    match id {
        IdentityId::Thm1 => {
            put("q", range(0.05, 0.8, im));
            put("a", range(0.1, 3.0, im));
            put("s", range(1.05, 4.4, im));
            put("t", range(1.05, 4.4, im));
        }
        IdentityId::Thm2 => {
            put("q", range(0.05, 0.8, im));
            put("a", range(0.1, 3.0, im));
            put("b", range(0.5, 5.0, im));
            put("s", range(1.05, 4.4, im));
            put("t", range(1.05, 4.4, im));
        }
        IdentityId::BilateralX => {
            put("q", range(0.05, 0.8, im));
            put("a", range(0.1, 3.0, im));
            put("x", range(0.1, 2.0, im));
            put("s", range(1.05, 4.4, im));
            put("t", range(1.05, 4.4, im));
        }
        IdentityId::Seed3105 => {
            put("q", range(0.2, 0.8, im));
            put("a", range(0.3, 3.0, im));
            put("w", range(0.2, 1.8, im));
            put("n", int_range(0.0, 8.0));
        }
        IdentityId::Intermediate2Phizzz => {
            put("q", range(0.05, 0.8, im));
            put("a", range(0.1, 3.0, im));
            // w and u are drawn as fractions of a*q so that the
            // argument -wu/(a^2 q^2) stays inside the unit disc.
            put(
                "w",
                ParamRange {
                    re_lo: 0.05,
                    re_hi: 0.94,
                    im_half_width: 0.0,
                    integer: false,
                    scale_by: &["a", "q"],
                },
            );
            put(
                "u",
                ParamRange {
                    re_lo: 0.05,
                    re_hi: 0.94,
                    im_half_width: 0.0,
                    integer: false,
                    scale_by: &["a", "q"],
                },
            );
        }
        IdentityId::Prop41 => {
            put("q", range(0.05, 0.8, im));
            put("a", range(0.1, 3.0, im));
            put("s", range(1.05, 4.4, im));
            put("t", range(1.05, 4.4, im));
        }
        IdentityId::Cor42 => {
            put("q", range(0.05, 0.8, im));
            put("a", range(0.1, 3.0, im));
            put("s", range(1.05, 4.4, im));
        }
        IdentityId::Quintuple => {
            put("q", range(0.05, 0.8, im));
            put("x", range(0.15, 2.5, im));
        }
        IdentityId::Jacobi => {
            put("q", range(0.05, 0.8, im));
            put("a", range(0.1, 3.0, im));
        }
        IdentityId::F43 => {
            put("a", range(0.2, 3.0, im));
            put("c", int_range(-6.0, -1.0));
            put("d", range(0.1, 2.0, im));
        }
        IdentityId::Q4F3 => {
            put("q", range(0.05, 0.8, im));
            put("a", range(0.3, 2.5, im));
            put("c", range(-2.5, -0.4, im));
            put("d", range(0.05, 1.5, im));
        }
        IdentityId::Phi65Limit => {
            put("q", range(0.05, 0.8, im));
            put("a", range(0.1, 2.5, im));
            put("c", range(0.3, 3.0, im));
            put("d", range(0.3, 3.0, im));
        }
    }
    GridSpec {
        id,
        ranges,
        count,
        seed,
    }
}

fn uniform(rng: &mut ChaCha12Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn draw_in(rng: &mut ChaCha12Rng, lo: f64, hi: f64) -> f64 {
    lo + uniform(rng) * (hi - lo)
}

fn modulus(v: (f64, f64)) -> f64 {
    v.0.hypot(v.1)
}

/// Convergence margins enforced on top of the schema domain, computed on
/// the raw draws (all conditions are pure modulus inequalities).
fn margins_ok(id: IdentityId, draws: &BTreeMap<String, (f64, f64)>) -> bool {
    let m = |name: &str| modulus(draws[name]);
    match id {
        IdentityId::Thm1 => {
            let st = m("s") * m("t");
            (1.2..=20.0).contains(&st)
        }
        IdentityId::Thm2 => {
            let st = m("s") * m("t");
            (1.2..=20.0).contains(&st) && m("a") * m("a") <= 0.9 * m("b") * st
        }
        IdentityId::BilateralX => {
            let st = m("s") * m("t");
            (1.2..=20.0).contains(&st) && m("x") <= 0.9 * st
        }
        IdentityId::Q4F3 => draws["c"].0 + draws["d"].0 <= -0.3,
        _ => true,
    }
}

/// Draws `grid.count` in-domain cases, consuming at most `100 * count`
/// attempts before giving up.
pub fn sample_cases(grid: &GridSpec, ctx: &PrecisionContext) -> Result<Vec<IdentityCase>> {
    let mut rng = ChaCha12Rng::seed_from_u64(grid.seed);
    let mut out = Vec::with_capacity(grid.count);
    let max_attempts = grid.count.saturating_mul(100).max(100);
    let mut attempts = 0usize;
    while out.len() < grid.count {
        if attempts >= max_attempts {
            return Err(Error::Sampling {
                identity: grid.id.name().to_string(),
                requested: grid.count,
                attempts,
            });
        }
        attempts += 1;
        let mut draws: BTreeMap<String, (f64, f64)> = BTreeMap::new();
        for (name, r) in &grid.ranges {
            let v = if r.integer {
                let lo = r.re_lo as i64;
                let span = (r.re_hi as i64 - lo + 1) as u64;
                ((lo + (rng.next_u64() % span) as i64) as f64, 0.0)
            } else {
                let re = draw_in(&mut rng, r.re_lo, r.re_hi);
                let imw = r.im_half_width;
                let im = if imw > 0.0 {
                    draw_in(&mut rng, -imw, imw)
                } else {
                    0.0
                };
                let mut v = (re, im);
                for dep in r.scale_by {
                    let d = draws[*dep];
                    v = (v.0 * d.0 - v.1 * d.1, v.0 * d.1 + v.1 * d.0);
                }
                v
            };
            draws.insert(name.clone(), v);
        }
        if !margins_ok(grid.id, &draws) {
            continue;
        }
        let params: BTreeMap<String, Complex> = draws
            .iter()
            .map(|(k, &(re, im))| (k.clone(), ctx.complex_from_f64(re, im)))
            .collect();
        let case = IdentityCase::new(grid.id, params)?;
        if check_domain(&case, ctx).is_err() {
            continue;
        }
        out.push(case);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Case records and sweeps
// ---------------------------------------------------------------------------

/// One evaluated point inside a report. Values are decimal strings so
/// the serialized form is exact, deterministic, and independent of any
/// machine float format.
#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub params: BTreeMap<String, String>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub residual: Option<String>,
    pub status: String,
    pub detail: Option<String>,
}

/// Aggregated result of one sweep.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub digits: u32,
    pub count: usize,
    pub seed: u64,
    pub cases: Vec<CaseRecord>,
    pub max_residual: Option<String>,
    pub pass: bool,
    pub flags: Vec<String>,
    pub wall_time: Option<f64>,
}

impl VerificationReport {
    /// Deterministic JSON rendering (`wall_time` stays null unless set).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per case; columns are fixed per identity (schema order).
    pub fn to_csv(&self) -> String {
        let id = IdentityId::from_name(&self.id).expect("report carries a valid id");
        let names: Vec<&str> = describe(id).params.iter().map(|p| p.name).collect();
        let mut out = String::from("case,status,residual,lhs,rhs");
        for n in &names {
            out.push(',');
            out.push_str(n);
        }
        out.push_str(",detail\n");
        for (i, c) in self.cases.iter().enumerate() {
            let blank = String::new();
            out.push_str(&format!(
                "{},{},{},{},{}",
                i,
                c.status,
                c.residual.as_ref().unwrap_or(&blank),
                c.lhs.as_ref().unwrap_or(&blank),
                c.rhs.as_ref().unwrap_or(&blank),
            ));
            for n in &names {
                out.push(',');
                out.push_str(c.params.get(*n).unwrap_or(&blank));
            }
            out.push_str(&format!(
                ",\"{}\"\n",
                c.detail.as_deref().unwrap_or("").replace('"', "\"\"")
            ));
        }
        out
    }
}

fn err_status(e: &Error) -> String {
    match e {
        Error::Pole(_) => "pole".to_string(),
        _ => "error".to_string(),
    }
}

/// Full evaluation of one case: the serializable record plus the numeric
/// residual and series status the sweep aggregation needs.
fn verify_case_full(
    case: &IdentityCase,
    ctx: &PrecisionContext,
) -> (CaseRecord, Option<Real>, Option<SeriesStatus>) {
    let digits = ctx.digits() as usize;
    let params: BTreeMap<String, String> = case
        .params
        .iter()
        .map(|(k, v)| (k.clone(), v.to_decimal(17, ctx)))
        .collect();
    let lhs = match eval_lhs(case, ctx) {
        Ok(l) => l,
        Err(e) => {
            return (
                CaseRecord {
                    params,
                    lhs: None,
                    rhs: None,
                    residual: None,
                    status: err_status(&e),
                    detail: Some(e.to_string()),
                },
                None,
                None,
            )
        }
    };
    let lhs_str = lhs.value.to_decimal(digits, ctx);
    match eval_rhs(case, ctx) {
        Ok(rhs) => {
            let res = relative_error(&lhs.value, &rhs, ctx);
            (
                CaseRecord {
                    params,
                    lhs: Some(lhs_str),
                    rhs: Some(rhs.to_decimal(digits, ctx)),
                    residual: Some(res.to_decimal(5, ctx)),
                    status: lhs.status.as_str().to_string(),
                    detail: None,
                },
                Some(res),
                Some(lhs.status),
            )
        }
        Err(e) => (
            CaseRecord {
                params,
                lhs: Some(lhs_str),
                rhs: None,
                residual: None,
                status: err_status(&e),
                detail: Some(e.to_string()),
            },
            None,
            Some(lhs.status),
        ),
    }
}

/// Evaluates one case into a record; never panics on mathematical
/// failures — poles and divergence become non-pass statuses.
pub fn verify_case(case: &IdentityCase, ctx: &PrecisionContext) -> CaseRecord {
    verify_case_full(case, ctx).0
}

/// A diverging case is tolerated (flagged, not failed) when the point
/// lies outside the empirically safe region the sampler guarantees —
/// for the bilateral theorem that is |st| <= 1, where the stated
/// argument condition does not control the negative branch.
pub fn divergence_tolerated(case: &IdentityCase, ctx: &PrecisionContext) -> bool {
    if case.id != IdentityId::Thm2 {
        return false;
    }
    let st = case.params["s"].mul(&case.params["t"], ctx).abs(ctx);
    st.le(&ctx.one())
}

/// Samples the grid and evaluates every point; deterministic given the
/// seed. Per-point failures are recorded, never raised.
pub fn sweep(grid: &GridSpec, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let cases = sample_cases(grid, ctx)?;
    let mut records = Vec::with_capacity(cases.len());
    let mut flags = Vec::new();
    let mut max_residual: Option<Real> = None;
    let mut pass = true;
    if cases.is_empty() {
        flags.push("empty".to_string());
    }
    for (i, case) in cases.iter().enumerate() {
        let (record, residual, status) = verify_case_full(case, ctx);
        match status {
            Some(SeriesStatus::Converged) => {
                let res = residual.expect("converged case carries a residual");
                if res.gt(ctx.cmp_tol()) {
                    pass = false;
                    flags.push(format!("case {i}: residual above tolerance"));
                }
                max_residual = Some(match max_residual {
                    Some(m) => m.max(&res),
                    None => res,
                });
            }
            Some(SeriesStatus::Diverging) if divergence_tolerated(case, ctx) => {
                flags.push(format!("case {i}: divergence tolerated (|st| <= 1)"));
            }
            _ => {
                pass = false;
                flags.push(format!("case {i}: {}", record.status));
            }
        }
        records.push(record);
    }
    Ok(VerificationReport {
        id: grid.id.name().to_string(),
        digits: ctx.digits(),
        count: grid.count,
        seed: grid.seed,
        cases: records,
        max_residual: max_residual.map(|r| r.to_decimal(5, ctx)),
        pass,
        flags,
        wall_time: None,
    })
}

/// Runs the default grid of every identity with per-identity seeds
/// derived from `seed`; the entry point behind `verify all`.
pub fn verify_all(
    count: usize,
    seed: u64,
    profile: Profile,
    ctx: &PrecisionContext,
) -> Result<Vec<VerificationReport>> {
    IdentityId::ALL
        .iter()
        .enumerate()
        .map(|(i, &id)| {
            let grid = default_grid(
                id,
                count,
                seed.wrapping_add((i as u64).wrapping_mul(SEED_STRIDE)),
                profile,
            );
            sweep(&grid, ctx)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Limit studies
// ---------------------------------------------------------------------------

/// The registered limit edges connecting one identity to another.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitEdge {
    /// b -> infinity, with the bridge factor (1 - a^2).
    Thm2Prop41,
    /// t -> infinity.
    Prop41Cor42,
    /// Single substitution a = x^2 q, s = x q.
    Cor42Quintuple,
    /// q -> 1 from below on a terminating case.
    Q4F3F43,
}

impl LimitEdge {
    pub const ALL: [LimitEdge; 4] = [
        LimitEdge::Thm2Prop41,
        LimitEdge::Prop41Cor42,
        LimitEdge::Cor42Quintuple,
        LimitEdge::Q4F3F43,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitEdge::Thm2Prop41 => "thm2:prop41",
            LimitEdge::Prop41Cor42 => "prop41:cor42",
            LimitEdge::Cor42Quintuple => "cor42:quintuple",
            LimitEdge::Q4F3F43 => "q4f3:f43",
        }
    }

    pub fn from_name(s: &str) -> Result<LimitEdge> {
        LimitEdge::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownEdge(s.to_string()))
    }

    /// Name of the parameter the schedule varies ("none" for the single
    /// substitution check).
    pub fn varying(self) -> &'static str {
        match self {
            LimitEdge::Thm2Prop41 => "b",
            LimitEdge::Prop41Cor42 => "t",
            LimitEdge::Cor42Quintuple => "none",
            LimitEdge::Q4F3F43 => "q",
        }
    }

    /// The built-in schedule (empty for the substitution check).
    pub fn default_schedule(self, ctx: &PrecisionContext) -> Vec<Complex> {
        let vals: &[&str] = match self {
            LimitEdge::Thm2Prop41 | LimitEdge::Prop41Cor42 => &["1e2", "1e4", "1e6"],
            LimitEdge::Cor42Quintuple => &[],
            LimitEdge::Q4F3F43 => &["0.9", "0.99", "0.999"],
        };
        vals.iter()
            .map(|v| Complex::parse(v, ctx).expect("built-in schedule parses"))
            .collect()
    }

    /// Fixed parameters of the study (everything except the varying one).
    pub fn default_fixed(self, ctx: &PrecisionContext) -> BTreeMap<String, Complex> {
        let pairs: &[(&str, &str)] = match self {
            LimitEdge::Thm2Prop41 => &[("q", "0.3"), ("a", "0.8"), ("s", "1.6"), ("t", "2.0")],
            LimitEdge::Prop41Cor42 => &[("q", "0.3"), ("a", "0.8"), ("s", "1.6")],
            LimitEdge::Cor42Quintuple => &[("q", "0.2"), ("x", "0.7")],
            LimitEdge::Q4F3F43 => &[("a", "1.5"), ("c", "-2"), ("d", "0.7")],
        };
        pairs
            .iter()
            .map(|(k, v)| {
                (
                    k.to_string(),
                    Complex::parse(v, ctx).expect("built-in parameter parses"),
                )
            })
            .collect()
    }
}

/// Trend report for one limit edge.
#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub edge: String,
    pub varying: String,
    pub fixed: BTreeMap<String, String>,
    pub schedule: Vec<String>,
    pub gaps: Vec<String>,
    pub monotone_decreasing: bool,
    pub final_gap: Option<String>,
    pub pass: bool,
    pub wall_time: Option<f64>,
}

impl LimitReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn case_of(id: IdentityId, pairs: &[(&str, &Complex)]) -> Result<IdentityCase> {
    let params = pairs
        .iter()
        .map(|(k, v)| (k.to_string(), (*v).clone()))
        .collect();
    IdentityCase::new(id, params)
}

/// Runs a limit study over an explicit schedule and fixed parameters.
///
/// The target value and the per-point values use whichever side is
/// cheap and exact for that edge: closed forms for the b/t studies (the
/// products converge geometrically) and the terminating series for the
/// q -> 1 study, where infinite products would need ~10^5 factors.
pub fn limit_study_with(
    edge: LimitEdge,
    schedule: &[Complex],
    fixed: &BTreeMap<String, Complex>,
    ctx: &PrecisionContext,
) -> Result<LimitReport> {
    if edge == LimitEdge::Cor42Quintuple {
        if !schedule.is_empty() {
            return Err(Error::Param(
                "cor42:quintuple is a single substitution check and takes no schedule".into(),
            ));
        }
    } else if schedule.is_empty() {
        return Err(Error::Param(format!(
            "edge {} needs a nonempty schedule for `{}`",
            edge.name(),
            edge.varying()
        )));
    }

    let one = ctx.complex_one();
    let g = |name: &str| -> Result<&Complex> {
        fixed
            .get(name)
            .ok_or_else(|| Error::Param(format!("missing fixed parameter `{name}`")))
    };

    // Target value, independent of the schedule.
    let target = match edge {
        LimitEdge::Thm2Prop41 => {
            let c = case_of(
                IdentityId::Prop41,
                &[
                    ("q", g("q")?),
                    ("a", g("a")?),
                    ("s", g("s")?),
                    ("t", g("t")?),
                ],
            )?;
            eval_rhs(&c, ctx)?
        }
        LimitEdge::Prop41Cor42 => {
            let c = case_of(
                IdentityId::Cor42,
                &[("q", g("q")?), ("a", g("a")?), ("s", g("s")?)],
            )?;
            eval_rhs(&c, ctx)?
        }
        LimitEdge::Cor42Quintuple => {
            let c = case_of(IdentityId::Quintuple, &[("q", g("q")?), ("x", g("x")?)])?;
            eval_rhs(&c, ctx)?
        }
        LimitEdge::Q4F3F43 => {
            let c = case_of(
                IdentityId::F43,
                &[("a", g("a")?), ("c", g("c")?), ("d", g("d")?)],
            )?;
            eval_lhs(&c, ctx)?.value
        }
    };

    let mut gaps_real: Vec<Real> = Vec::new();
    match edge {
        LimitEdge::Cor42Quintuple => {
            let (q, x) = (g("q")?, g("x")?);
            let a = x.mul(x, ctx).mul(q, ctx);
            let s = x.mul(q, ctx);
            let c = case_of(IdentityId::Cor42, &[("q", q), ("a", &a), ("s", &s)])?;
            let v = eval_rhs(&c, ctx)?;
            gaps_real.push(v.sub(&target, ctx).abs(ctx));
        }
        LimitEdge::Thm2Prop41 => {
            let a = g("a")?;
            let bridge = one.sub(&a.mul(a, ctx), ctx);
            for b in schedule {
                let c = case_of(
                    IdentityId::Thm2,
                    &[
                        ("q", g("q")?),
                        ("a", a),
                        ("b", b),
                        ("s", g("s")?),
                        ("t", g("t")?),
                    ],
                )?;
                let v = eval_rhs(&c, ctx)?.mul(&bridge, ctx);
                gaps_real.push(v.sub(&target, ctx).abs(ctx));
            }
        }
        LimitEdge::Prop41Cor42 => {
            for t in schedule {
                let c = case_of(
                    IdentityId::Prop41,
                    &[("q", g("q")?), ("a", g("a")?), ("s", g("s")?), ("t", t)],
                )?;
                let v = eval_rhs(&c, ctx)?;
                gaps_real.push(v.sub(&target, ctx).abs(ctx));
            }
        }
        LimitEdge::Q4F3F43 => {
            for q in schedule {
                let c = case_of(
                    IdentityId::Q4F3,
                    &[("q", q), ("a", g("a")?), ("c", g("c")?), ("d", g("d")?)],
                )?;
                let v = eval_lhs(&c, ctx)?.value;
                gaps_real.push(v.sub(&target, ctx).abs(ctx));
            }
        }
    }

    let monotone = gaps_real.windows(2).all(|w| w[1].lt(&w[0]));
    let pass = if edge == LimitEdge::Cor42Quintuple {
        gaps_real[0].le(ctx.cmp_tol())
    } else {
        monotone
    };
    Ok(LimitReport {
        edge: edge.name().to_string(),
        varying: edge.varying().to_string(),
        fixed: fixed
            .iter()
            .map(|(k, v)| (k.clone(), v.to_decimal(17, ctx)))
            .collect(),
        schedule: schedule.iter().map(|v| v.to_decimal(17, ctx)).collect(),
        gaps: gaps_real.iter().map(|gp| gp.to_decimal(5, ctx)).collect(),
        monotone_decreasing: monotone,
        final_gap: gaps_real.last().map(|gp| gp.to_decimal(5, ctx)),
        pass,
        wall_time: None,
    })
}

/// Limit study with the edge's built-in schedule and fixed parameters.
pub fn limit_study(edge: LimitEdge, ctx: &PrecisionContext) -> Result<LimitReport> {
    limit_study_with(
        edge,
        &edge.default_schedule(ctx),
        &edge.default_fixed(ctx),
        ctx,
    )
}
