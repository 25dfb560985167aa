//! RDC dataset files.
//!
//! Assigned data, one coupling per line:
//!
//! ```text
//! channels M1:N-H M2:N-H
//! 12 M1 N-H 4.21
//! ```
//!
//! Unassigned data: a joint tuple per line prefixed by `*` and the tuple
//! length, then each channel's marginal values as `medium:vtype count v...`:
//!
//! ```text
//! channels M1:N-H M2:N-H
//! * 2 4.21 -7.9
//! M1:N-H 3 -1.0 2.5 4.21
//! ```
//!
//! A JSON serialization of the dataset is accepted as well.

use std::fmt::Write as _;

use pdpa_core::rdc::VectorType;
use pdpa_core::synthesis::{ChannelId, DatasetContent, RdcDataset};

use crate::error::{AppError, AppResult};

pub fn channel_label(c: &ChannelId) -> String {
    format!("M{}:{}", c.medium + 1, c.vtype.label())
}

fn parse_medium(s: &str) -> Option<usize> {
    let digits = s.strip_prefix('M').or_else(|| s.strip_prefix('m')).unwrap_or(s);
    digits.parse::<usize>().ok().filter(|&m| m >= 1).map(|m| m - 1)
}

/// `M2:CA-HA` style channel label.
pub fn parse_channel(s: &str) -> Option<ChannelId> {
    let (m, v) = s.split_once(':')?;
    Some(ChannelId::new(parse_medium(m)?, v.parse::<VectorType>().ok()?))
}

fn number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn write_dataset(data: &RdcDataset) -> String {
    let mut out = String::from("channels");
    for c in &data.channels {
        out.push(' ');
        out.push_str(&channel_label(c));
    }
    out.push('\n');
    match &data.content {
        DatasetContent::Assigned(channels) => {
            for (c, values) in data.channels.iter().zip(channels) {
                for (res, v) in values {
                    let _ = writeln!(out, "{res} M{} {} {v:?}", c.medium + 1, c.vtype.label());
                }
            }
        }
        DatasetContent::Unassigned { tuples, marginals } => {
            for t in tuples {
                let _ = write!(out, "* {}", t.len());
                for v in t {
                    let _ = write!(out, " {v:?}");
                }
                out.push('\n');
            }
            for (c, values) in data.channels.iter().zip(marginals) {
                let _ = write!(out, "{} {}", channel_label(c), values.len());
                for v in values {
                    let _ = write!(out, " {v:?}");
                }
                out.push('\n');
            }
        }
    }
    out
}

pub fn parse_dataset(text: &str, source: &str) -> AppResult<RdcDataset> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| AppError::parse(source, e.to_string()));
    }
    let mut channels: Option<Vec<ChannelId>> = None;
    let mut assigned: Vec<(ChannelId, i32, f64)> = Vec::new();
    let mut tuples: Vec<Vec<f64>> = Vec::new();
    let mut marginals: Vec<(ChannelId, Vec<f64>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let at = |m: String| AppError::parse(source, format!("line {}: {m}", i + 1));
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f[0] == "channels" {
            let list = f[1..]
                .iter()
                .map(|s| parse_channel(s).ok_or_else(|| at(format!("bad channel '{s}'"))))
                .collect::<AppResult<Vec<_>>>()?;
            channels = Some(list);
        } else if f[0] == "*" || f[0].contains(':') {
            let count: usize = f.get(1).and_then(|s| s.parse().ok()).ok_or_else(|| at("missing value count".into()))?;
            if f.len() != count + 2 {
                return Err(at(format!("declared {count} values, found {}", f.len() - 2)));
            }
            let values = f[2..]
                .iter()
                .map(|s| number(s).ok_or_else(|| at(format!("bad value '{s}'"))))
                .collect::<AppResult<Vec<f64>>>()?;
            if f[0] == "*" {
                tuples.push(values);
            } else {
                let ch = parse_channel(f[0]).ok_or_else(|| at(format!("bad channel '{}'", f[0])))?;
                marginals.push((ch, values));
            }
        } else {
            if f.len() != 4 {
                return Err(at(format!("expected 'residue medium vtype value', found {} fields", f.len())));
            }
            let res: i32 = f[0].parse().map_err(|_| at(format!("bad residue '{}'", f[0])))?;
            let medium = parse_medium(f[1]).ok_or_else(|| at(format!("bad medium '{}'", f[1])))?;
            let vtype: VectorType = f[2].parse().map_err(|_| at(format!("unknown vector type '{}'", f[2])))?;
            let v = number(f[3]).ok_or_else(|| at(format!("bad value '{}'", f[3])))?;
            assigned.push((ChannelId::new(medium, vtype), res, v));
        }
    }
    let is_assigned = !assigned.is_empty();
    if is_assigned && (!tuples.is_empty() || !marginals.is_empty()) {
        return Err(AppError::parse(source, "file mixes assigned and unassigned lines"));
    }
    if is_assigned {
        let channels = channels.unwrap_or_else(|| {
            let mut c: Vec<ChannelId> = Vec::new();
            for (ch, _, _) in &assigned {
                if !c.contains(ch) {
                    c.push(*ch);
                }
            }
            c
        });
        let mut values: Vec<Vec<(i32, f64)>> = vec![Vec::new(); channels.len()];
        for (ch, res, v) in assigned {
            let k = channels
                .iter()
                .position(|c| *c == ch)
                .ok_or_else(|| AppError::parse(source, format!("channel {} not declared", channel_label(&ch))))?;
            if values[k].iter().any(|(r, _)| *r == res) {
                return Err(AppError::parse(source, format!("residue {res} repeated in {}", channel_label(&ch))));
            }
            values[k].push((res, v));
        }
        for v in &mut values {
            v.sort_by_key(|p| p.0);
        }
        return Ok(RdcDataset { channels, content: DatasetContent::Assigned(values) });
    }
    let channels = channels.ok_or_else(|| AppError::parse(source, "unassigned data needs a 'channels' line"))?;
    if tuples.is_empty() {
        return Err(AppError::parse(source, "no data"));
    }
    if let Some(t) = tuples.iter().find(|t| t.len() != channels.len()) {
        return Err(AppError::parse(source, format!("tuple of {} values for {} channels", t.len(), channels.len())));
    }
    let mut margs = vec![Vec::new(); channels.len()];
    for (ch, mut values) in marginals {
        let k = channels
            .iter()
            .position(|c| *c == ch)
            .ok_or_else(|| AppError::parse(source, format!("channel {} not declared", channel_label(&ch))))?;
        values.sort_by(f64::total_cmp);
        margs[k] = values;
    }
    for (k, m) in margs.iter_mut().enumerate() {
        if m.is_empty() {
            *m = tuples.iter().map(|t| t[k]).collect();
            m.sort_by(f64::total_cmp);
        }
    }
    Ok(RdcDataset { channels, content: DatasetContent::Unassigned { tuples, marginals: margs } })
}
