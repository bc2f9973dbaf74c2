//! Exercises the C surface the way a C caller would: raw pointers,
//! status codes, out-parameters, and the string-freeing contract.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qsum_ffi::{
    qsum_context_digits, qsum_context_free, qsum_context_new, qsum_describe_json, qsum_eval_json,
    qsum_identities_json, qsum_last_error_message, qsum_limits_json, qsum_status_name,
    qsum_string_free, qsum_verify_json, qsum_version, QsumContext, QsumStatus,
};

/// Takes ownership of a string the library handed out.
fn take(p: *mut c_char) -> String {
    assert!(!p.is_null(), "expected a string, got null");
    let text = unsafe { CStr::from_ptr(p) }
        .to_str()
        .expect("library strings are UTF-8")
        .to_owned();
    unsafe { qsum_string_free(p) };
    text
}

fn last_error() -> Option<String> {
    let p = qsum_last_error_message();
    if p.is_null() {
        None
    } else {
        Some(take(p))
    }
}

fn new_ctx(digits: u32) -> *mut QsumContext {
    let mut out = ptr::null_mut();
    let status = unsafe { qsum_context_new(digits, &mut out) };
    assert_eq!(status, QsumStatus::Ok);
    assert!(!out.is_null());
    out
}

fn c(text: &str) -> CString {
    CString::new(text).expect("no interior NUL")
}

fn static_name(status: u32) -> &'static str {
    unsafe { CStr::from_ptr(qsum_status_name(status)) }
        .to_str()
        .expect("static names are UTF-8")
}

#[test]
fn context_lifecycle_and_status_names() {
    let ctx = new_ctx(50);
    assert_eq!(unsafe { qsum_context_digits(ctx) }, 50);
    unsafe { qsum_context_free(ctx) };
    unsafe { qsum_context_free(ptr::null_mut()) };
    assert_eq!(unsafe { qsum_context_digits(ptr::null()) }, 0);

    let mut out = ptr::null_mut();
    let status = unsafe { qsum_context_new(5, &mut out) };
    assert_eq!(status, QsumStatus::InvalidDigits);
    assert!(out.is_null());
    let message = last_error().expect("failure leaves a message");
    assert!(message.contains("20"), "unexpected message: {message}");

    assert_eq!(static_name(QsumStatus::Ok as u32), "ok");
    assert_eq!(
        static_name(QsumStatus::InvalidDigits as u32),
        "invalid-digits"
    );
    assert_eq!(static_name(QsumStatus::Panic as u32), "panic");
    assert_eq!(static_name(999), "unknown-status");

    let version = unsafe { CStr::from_ptr(qsum_version()) }
        .to_str()
        .expect("UTF-8");
    assert!(!version.is_empty());
}

#[test]
fn catalog_and_description_round_trip() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { qsum_identities_json(&mut out) }, QsumStatus::Ok);
    let catalog: Vec<serde_json::Value> =
        serde_json::from_str(&take(out)).expect("catalog is a JSON array");
    assert_eq!(catalog.len(), 12);
    let names: Vec<&str> = catalog
        .iter()
        .map(|item| item["name"].as_str().expect("name"))
        .collect();
    assert!(names.contains(&"thm1") && names.contains(&"quintuple"));

    let mut out = ptr::null_mut();
    let id = c("thm1");
    assert_eq!(
        unsafe { qsum_describe_json(id.as_ptr(), &mut out) },
        QsumStatus::Ok
    );
    let description: serde_json::Value =
        serde_json::from_str(&take(out)).expect("description is JSON");
    assert_eq!(description["name"], "thm1");
    assert!(description["params"]
        .as_array()
        .is_some_and(|p| p.len() == 4));

    let mut out = ptr::null_mut();
    let bogus = c("nonsense");
    assert_eq!(
        unsafe { qsum_describe_json(bogus.as_ptr(), &mut out) },
        QsumStatus::UnknownIdentity
    );
    assert!(out.is_null());
    let message = last_error().expect("failure leaves a message");
    assert!(
        message.contains("nonsense"),
        "unexpected message: {message}"
    );
}

#[test]
fn eval_matches_closed_form_at_high_precision() {
    let ctx = new_ctx(50);
    let id = c("thm1");
    let params = c(r#"{"q":"0.3","a":"0.2","s":"2.1","t":"3.7"}"#);
    let mut out = ptr::null_mut();
    let status = unsafe { qsum_eval_json(ctx, id.as_ptr(), params.as_ptr(), &mut out) };
    assert_eq!(status, QsumStatus::Ok);
    assert!(last_error().is_none(), "success clears the error slot");
    let report: serde_json::Value = serde_json::from_str(&take(out)).expect("report is JSON");
    assert_eq!(report["status"], "converged");
    let residual: f64 = report["residual"]
        .as_str()
        .expect("residual present")
        .parse()
        .expect("residual parses");
    assert!(residual <= 1e-35, "residual too large: {residual}");
    unsafe { qsum_context_free(ctx) };
}

#[test]
fn eval_rejects_json_numbers_to_protect_precision() {
    let ctx = new_ctx(50);
    let id = c("jacobi");
    let params = c(r#"{"q":0.1,"a":"0.5"}"#);
    let mut out = ptr::null_mut();
    let status = unsafe { qsum_eval_json(ctx, id.as_ptr(), params.as_ptr(), &mut out) };
    assert_eq!(status, QsumStatus::InvalidParam);
    assert!(out.is_null());
    let message = last_error().expect("failure leaves a message");
    assert!(
        message.contains("decimal string"),
        "message should explain the rule: {message}"
    );
    unsafe { qsum_context_free(ctx) };
}

#[test]
fn eval_reports_divergence_as_data_not_status() {
    let ctx = new_ctx(50);
    let id = c("thm2");
    let params = c(r#"{"q":"0.25","a":"0.6","b":"1.3","s":"0.5","t":"0.5"}"#);
    let mut out = ptr::null_mut();
    let status = unsafe { qsum_eval_json(ctx, id.as_ptr(), params.as_ptr(), &mut out) };
    assert_eq!(status, QsumStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take(out)).expect("report is JSON");
    assert_eq!(report["status"], "diverging");
    unsafe { qsum_context_free(ctx) };
}

#[test]
fn eval_rejects_out_of_domain_points_with_a_code() {
    let ctx = new_ctx(50);
    let id = c("quintuple");
    // x = 1 puts a factor of the closed form at a zero/pole crossing.
    let params = c(r#"{"q":"0.2","x":"1"}"#);
    let mut out = ptr::null_mut();
    let status = unsafe { qsum_eval_json(ctx, id.as_ptr(), params.as_ptr(), &mut out) };
    assert!(
        matches!(status, QsumStatus::Pole | QsumStatus::Domain),
        "expected a mathematical rejection, got {status:?}"
    );
    assert!(out.is_null());
    assert!(last_error().is_some());
    unsafe { qsum_context_free(ctx) };
}

#[test]
fn null_and_invalid_pointer_arguments_are_rejected() {
    let ctx = new_ctx(50);
    let id = c("thm1");
    let params = c(r#"{"q":"0.3","a":"0.2","s":"2.1","t":"3.7"}"#);
    let mut out = ptr::null_mut();

    let status = unsafe { qsum_eval_json(ptr::null(), id.as_ptr(), params.as_ptr(), &mut out) };
    assert_eq!(status, QsumStatus::NullPointer);
    let status = unsafe { qsum_eval_json(ctx, ptr::null(), params.as_ptr(), &mut out) };
    assert_eq!(status, QsumStatus::NullPointer);
    let status = unsafe { qsum_eval_json(ctx, id.as_ptr(), params.as_ptr(), ptr::null_mut()) };
    assert_eq!(status, QsumStatus::NullPointer);
    let status = unsafe { qsum_context_new(50, ptr::null_mut()) };
    assert_eq!(status, QsumStatus::NullPointer);

    let invalid = CString::new([0xff, 0xfe]).expect("bytes without NUL");
    let status = unsafe { qsum_describe_json(invalid.as_ptr(), &mut out) };
    assert_eq!(status, QsumStatus::InvalidUtf8);

    unsafe { qsum_string_free(ptr::null_mut()) };
    unsafe { qsum_context_free(ctx) };
}

#[test]
fn verify_is_deterministic_and_passes() {
    let ctx = new_ctx(50);
    let id = c("thm1");
    let mut first = ptr::null_mut();
    let mut second = ptr::null_mut();
    let status = unsafe { qsum_verify_json(ctx, id.as_ptr(), 5, 42, false, &mut first) };
    assert_eq!(status, QsumStatus::Ok);
    let status = unsafe { qsum_verify_json(ctx, id.as_ptr(), 5, 42, false, &mut second) };
    assert_eq!(status, QsumStatus::Ok);
    let first = take(first);
    let second = take(second);
    assert_eq!(first, second, "same arguments must give identical bytes");

    let report: serde_json::Value = serde_json::from_str(&first).expect("report is JSON");
    assert_eq!(report["pass"], true);
    assert_eq!(report["count"], 5);
    assert!(report["wall_time"].is_null(), "timing stays off over FFI");
    unsafe { qsum_context_free(ctx) };
}

#[test]
fn verify_all_returns_one_report_per_identity() {
    let ctx = new_ctx(50);
    let all = c("all");
    let mut out = ptr::null_mut();
    let status = unsafe { qsum_verify_json(ctx, all.as_ptr(), 2, 7, false, &mut out) };
    assert_eq!(status, QsumStatus::Ok);
    let reports: Vec<serde_json::Value> =
        serde_json::from_str(&take(out)).expect("array of reports");
    assert_eq!(reports.len(), 12);
    assert!(reports.iter().all(|r| r["pass"] == true));
    unsafe { qsum_context_free(ctx) };
}

#[test]
fn limit_studies_run_with_default_and_custom_schedules() {
    let ctx = new_ctx(50);
    let edge = c("q4f3:f43");
    let mut out = ptr::null_mut();
    let status = unsafe { qsum_limits_json(ctx, edge.as_ptr(), ptr::null(), &mut out) };
    assert_eq!(status, QsumStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take(out)).expect("report is JSON");
    assert_eq!(report["pass"], true);
    assert_eq!(report["edge"], "q4f3:f43");
    assert_eq!(report["gaps"].as_array().expect("gaps").len(), 3);

    let schedule = c("0.9,0.99");
    let mut out = ptr::null_mut();
    let status = unsafe { qsum_limits_json(ctx, edge.as_ptr(), schedule.as_ptr(), &mut out) };
    assert_eq!(status, QsumStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take(out)).expect("report is JSON");
    assert_eq!(report["gaps"].as_array().expect("gaps").len(), 2);

    let bogus = c("a:b");
    let mut out = ptr::null_mut();
    let status = unsafe { qsum_limits_json(ctx, bogus.as_ptr(), ptr::null(), &mut out) };
    assert_eq!(status, QsumStatus::UnknownEdge);
    assert!(out.is_null());

    let bad = c("0.9,potato");
    let mut out = ptr::null_mut();
    let status = unsafe { qsum_limits_json(ctx, edge.as_ptr(), bad.as_ptr(), &mut out) };
    assert_eq!(status, QsumStatus::InvalidParam);
    assert!(out.is_null());
    unsafe { qsum_context_free(ctx) };
}
