//! Report construction shared by every front end (the command line and
//! the C ABI): catalog and schema JSON, single-point evaluations, sweep
//! drivers, and limit-study drivers.
//!
//! Keeping these in one place guarantees that all front ends emit
//! byte-identical JSON for the same inputs, which is what makes the
//! reports diffable across surfaces.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::arith::{relative_error, Complex, PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::identities::{describe, eval_lhs, eval_rhs, IdentityCase, IdentityId};
use crate::series::{SeriesResult, SeriesStatus};
use crate::verifier::{
    default_grid, limit_study_with, sweep, LimitEdge, LimitReport, Profile, VerificationReport,
};

/// Which side(s) of an identity to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
    Both,
}

/// JSON catalog of the registry: an array of `{name, title}` objects.
pub fn list_json() -> String {
    let items: Vec<serde_json::Value> = IdentityId::ALL
        .iter()
        .map(|&id| {
            let s = describe(id);
            serde_json::json!({ "name": id.name(), "title": s.title })
        })
        .collect();
    serde_json::to_string_pretty(&items).expect("serializes")
}

/// JSON description of one identity: both sides, parameters, domain.
pub fn describe_json(id: IdentityId) -> String {
    let s = describe(id);
    let v = serde_json::json!({
        "name": id.name(),
        "title": s.title,
        "lhs": s.lhs,
        "rhs": s.rhs,
        "params": s.params.iter().map(|p| {
            serde_json::json!({ "name": p.name, "about": p.about })
        }).collect::<Vec<_>>(),
        "domain": s.domain,
    });
    serde_json::to_string_pretty(&v).expect("serializes")
}

/// A single-point evaluation of the requested side(s) of one identity,
/// plus the relative residual when both sides were computed.
pub struct Evaluation {
    pub lhs: Option<SeriesResult>,
    pub rhs: Option<Complex>,
    pub residual: Option<Real>,
}

impl Evaluation {
    /// Evaluates `side` of the case. Domain violations and poles are
    /// errors; divergence is not — it comes back in the series status.
    pub fn compute(case: &IdentityCase, side: Side, ctx: &PrecisionContext) -> Result<Self> {
        let lhs = match side {
            Side::Lhs | Side::Both => Some(eval_lhs(case, ctx)?),
            Side::Rhs => None,
        };
        let rhs = match side {
            Side::Rhs | Side::Both => Some(eval_rhs(case, ctx)?),
            Side::Lhs => None,
        };
        let residual = match (&lhs, &rhs) {
            (Some(l), Some(r)) => Some(relative_error(&l.value, r, ctx)),
            _ => None,
        };
        Ok(Evaluation { lhs, rhs, residual })
    }

    /// True when nothing numerically suspicious happened: any computed
    /// series converged, and any residual is within comparison
    /// tolerance.
    pub fn clean(&self, ctx: &PrecisionContext) -> bool {
        let converged = self
            .lhs
            .as_ref()
            .is_none_or(|l| l.status == SeriesStatus::Converged);
        let small = self.residual.as_ref().is_none_or(|r| !r.gt(ctx.cmp_tol()));
        converged && small
    }

    /// Renders the evaluation as the JSON object the CLI's `eval --json`
    /// prints: parameters at 17 significant digits, values at full
    /// context precision, residual at 5.
    pub fn to_json(&self, case: &IdentityCase, ctx: &PrecisionContext) -> String {
        let sig = ctx.digits() as usize;
        let v = serde_json::json!({
            "identity": case.id.name(),
            "digits": ctx.digits(),
            "params": case.params.iter()
                .map(|(k, v)| (k.clone(), v.to_decimal(17, ctx)))
                .collect::<BTreeMap<_, _>>(),
            "lhs": self.lhs.as_ref().map(|l| l.value.to_decimal(sig, ctx)),
            "status": self.lhs.as_ref().map(|l| l.status.as_str()),
            "terms_used": self.lhs.as_ref().map(|l| l.terms_used),
            "tail_estimate": self.lhs.as_ref().map(|l| l.tail_estimate.to_decimal(5, ctx)),
            "rhs": self.rhs.as_ref().map(|r| r.to_decimal(sig, ctx)),
            "residual": self.residual.as_ref().map(|r| r.to_decimal(5, ctx)),
        });
        serde_json::to_string_pretty(&v).expect("serializes")
    }
}

/// Stride between per-identity seeds in an all-identity sweep, so the
/// identities draw unrelated parameter streams from one user seed.
const SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Runs a verification sweep for `name` — one identity, or `"all"` —
/// and returns one report per identity swept. With `"all"`, each
/// identity's grid seed is offset from `seed` so the streams are
/// unrelated. `timing` records wall-clock seconds per report, which
/// makes the output non-reproducible.
pub fn run_verify(
    name: &str,
    count: usize,
    seed: u64,
    profile: Profile,
    timing: bool,
    ctx: &PrecisionContext,
) -> Result<Vec<VerificationReport>> {
    let ids: Vec<IdentityId> = if name == "all" {
        IdentityId::ALL.to_vec()
    } else {
        vec![IdentityId::from_name(name)?]
    };
    let mut reports = Vec::with_capacity(ids.len());
    for (i, ident) in ids.iter().enumerate() {
        let grid_seed = if name == "all" {
            seed.wrapping_add((i as u64).wrapping_mul(SEED_STRIDE))
        } else {
            seed
        };
        let grid = default_grid(*ident, count, grid_seed, profile);
        let start = Instant::now();
        let mut report = sweep(&grid, ctx)?;
        if timing {
            report.wall_time = Some(start.elapsed().as_secs_f64());
        }
        reports.push(report);
    }
    Ok(reports)
}

/// Renders sweep reports: the bare object for a single report, a JSON
/// array otherwise.
pub fn reports_json(reports: &[VerificationReport]) -> String {
    if reports.len() == 1 {
        reports[0].to_json()
    } else {
        serde_json::to_string_pretty(reports).expect("reports serialize")
    }
}

/// Runs a limit study along the named edge. `schedule` is a
/// comma-separated list of values for the edge's varying parameter;
/// `None` uses the edge's default schedule.
pub fn run_limits(
    edge: &str,
    schedule: Option<&str>,
    timing: bool,
    ctx: &PrecisionContext,
) -> Result<LimitReport> {
    let edge = LimitEdge::from_name(edge)?;
    let schedule: Vec<Complex> = match schedule {
        Some(text) => text
            .split(',')
            .map(|v| {
                Complex::parse(v.trim(), ctx)
                    .map_err(|_| Error::Param(format!("cannot parse schedule value `{v}`")))
            })
            .collect::<Result<_>>()?,
        None => edge.default_schedule(ctx),
    };
    let fixed = edge.default_fixed(ctx);
    let start = Instant::now();
    let mut report = limit_study_with(edge, &schedule, &fixed, ctx)?;
    if timing {
        report.wall_time = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::make_context;

    fn case(id: IdentityId, pairs: &[(&str, &str)], ctx: &PrecisionContext) -> IdentityCase {
        let params = pairs
            .iter()
            .map(|(k, v)| (k.to_string(), Complex::parse(v, ctx).expect("parses")))
            .collect();
        IdentityCase::new(id, params).expect("valid case")
    }

    #[test]
    fn catalog_lists_every_identity_once() {
        let v: Vec<serde_json::Value> = serde_json::from_str(&list_json()).expect("array");
        assert_eq!(v.len(), IdentityId::ALL.len());
        for (item, id) in v.iter().zip(IdentityId::ALL) {
            assert_eq!(item["name"], id.name());
            assert!(item["title"].as_str().is_some_and(|t| !t.is_empty()));
        }
    }

    #[test]
    fn describe_json_carries_schema_fields() {
        let v: serde_json::Value =
            serde_json::from_str(&describe_json(IdentityId::Thm1)).expect("object");
        assert_eq!(v["name"], "thm1");
        let mut names: Vec<&str> = v["params"]
            .as_array()
            .expect("params array")
            .iter()
            .map(|p| p["name"].as_str().expect("name"))
            .collect();
        names.sort_unstable();
        assert_eq!(names, ["a", "q", "s", "t"]);
        assert!(v["domain"].as_array().is_some_and(|d| !d.is_empty()));
    }

    #[test]
    fn evaluation_of_both_sides_is_clean_and_serializes() {
        let ctx = make_context(50).expect("context");
        let c = case(IdentityId::Jacobi, &[("q", "0.1"), ("a", "0.5")], &ctx);
        let eval = Evaluation::compute(&c, Side::Both, &ctx).expect("evaluates");
        assert!(eval.clean(&ctx));
        let v: serde_json::Value = serde_json::from_str(&eval.to_json(&c, &ctx)).expect("json");
        assert_eq!(v["identity"], "jacobi");
        assert_eq!(v["status"], "converged");
        assert_eq!(v["params"]["q"], "0.1");
        assert!(v["residual"].as_str().is_some());
    }

    #[test]
    fn single_side_evaluation_has_no_residual() {
        let ctx = make_context(50).expect("context");
        let c = case(IdentityId::Jacobi, &[("q", "0.1"), ("a", "0.5")], &ctx);
        let eval = Evaluation::compute(&c, Side::Rhs, &ctx).expect("evaluates");
        assert!(eval.lhs.is_none());
        assert!(eval.rhs.is_some());
        assert!(eval.residual.is_none());
        assert!(eval.clean(&ctx));
        let v: serde_json::Value = serde_json::from_str(&eval.to_json(&c, &ctx)).expect("json");
        assert!(v["lhs"].is_null());
        assert!(v["residual"].is_null());
    }

    #[test]
    fn divergent_evaluation_is_not_clean() {
        let ctx = make_context(50).expect("context");
        let c = case(
            IdentityId::Thm2,
            &[
                ("q", "0.25"),
                ("a", "0.6"),
                ("b", "1.3"),
                ("s", "0.5"),
                ("t", "0.5"),
            ],
            &ctx,
        );
        let eval = Evaluation::compute(&c, Side::Both, &ctx).expect("evaluates");
        assert_eq!(
            eval.lhs.as_ref().map(|l| l.status),
            Some(SeriesStatus::Diverging)
        );
        assert!(!eval.clean(&ctx));
    }

    #[test]
    fn run_verify_all_strides_seeds_per_identity() {
        let ctx = make_context(50).expect("context");
        let all = run_verify("all", 2, 7, Profile::Real, false, &ctx).expect("sweeps");
        assert_eq!(all.len(), IdentityId::ALL.len());
        let seeds: Vec<u64> = all.iter().map(|r| r.seed).collect();
        let mut distinct = seeds.clone();
        distinct.sort_unstable();
        distinct.dedup();
        assert_eq!(distinct.len(), seeds.len(), "per-identity seeds collide");
        assert_eq!(all[0].seed, 7);

        let single = run_verify("thm1", 2, 7, Profile::Real, false, &ctx).expect("sweeps");
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].seed, 7);
        assert_eq!(reports_json(&single), single[0].to_json());
    }

    #[test]
    fn run_limits_rejects_unparseable_schedule() {
        let ctx = make_context(50).expect("context");
        let err = run_limits("thm2:prop41", Some("1e2,banana"), false, &ctx)
            .expect_err("bad schedule value");
        assert!(matches!(err, Error::Param(_)), "got {err:?}");
    }
}
