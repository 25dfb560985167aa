//! Order-tensor files.
//!
//! ```text
//! # principal form (default): label Sxx Syy Szz alpha beta gamma
//! M1 3e-4 5e-4 -8e-4 0 0 0
//! format cartesian
//! # label Sxx Sxy Sxz Syy Syz
//! M2 1e-4 2e-5 0 -3e-4 1e-5
//! ```

use std::fmt::Write as _;

use pdpa_core::rdc::{CartesianTensor, EulerAngles, SaupeTensor};

use crate::error::{AppError, AppResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Form {
    Principal,
    Cartesian,
}

/// Labelled absolute tensors in file order.
pub fn parse_tensors(text: &str, source: &str) -> AppResult<Vec<(String, SaupeTensor)>> {
    let mut form = Form::Principal;
    let mut out: Vec<(String, SaupeTensor)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let at = |m: String| AppError::parse(source, format!("line {}: {m}", i + 1));
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0].eq_ignore_ascii_case("format") {
            form = match fields.get(1).map(|s| s.to_ascii_lowercase()).as_deref() {
                Some("principal") => Form::Principal,
                Some("cartesian") => Form::Cartesian,
                other => return Err(at(format!("unknown tensor format {other:?}"))),
            };
            continue;
        }
        let want = if form == Form::Principal { 7 } else { 6 };
        if fields.len() != want {
            return Err(at(format!("expected {want} fields, found {}", fields.len())));
        }
        let nums = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| at(format!("bad number '{f}'"))))
            .collect::<AppResult<Vec<f64>>>()?;
        let label = fields[0].to_string();
        if out.iter().any(|(l, _)| *l == label) {
            return Err(at(format!("duplicate medium '{label}'")));
        }
        let tensor = match form {
            Form::Principal => {
                let t = SaupeTensor::new(nums[0], nums[1], nums[2], EulerAngles::new(nums[3], nums[4], nums[5]));
                if !t.is_traceless(1e-9 * t.max_abs_principal().max(1e-12)) {
                    return Err(at(format!("principal values of '{label}' are not traceless")));
                }
                t
            }
            Form::Cartesian => CartesianTensor { sxx: nums[0], sxy: nums[1], sxz: nums[2], syy: nums[3], syz: nums[4] }
                .to_principal(),
        };
        out.push((label, tensor));
    }
    if out.is_empty() {
        return Err(AppError::parse(source, "no tensors"));
    }
    Ok(out)
}

/// Principal form with full precision.
pub fn write_tensors(tensors: &[(String, SaupeTensor)]) -> String {
    let mut s = String::from("# label Sxx Syy Szz alpha beta gamma\n");
    for (label, t) in tensors {
        let o = t.orientation;
        let _ = writeln!(
            s,
            "{label} {:e} {:e} {:e} {} {} {}",
            t.principal[0], t.principal[1], t.principal[2], o.alpha, o.beta, o.gamma
        );
    }
    s
}
