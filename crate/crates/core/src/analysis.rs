//! Funnel statistics over screening results and small regression helpers.

use alloc::string::String;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::search::ScoreRecord;
use crate::synthesis::NoiseSpec;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// `1 - SS_res / SS_tot`; zero when `y` is constant.
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::Dimension("x and y differ in length".into()));
    }
    if x.len() < 2 {
        return Err(Error::DegenerateFit("need at least two points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("all x values identical".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 0.0 };
    Ok(LinearFit { slope, intercept, r_squared })
}

/// Ranks starting at 1, ties sharing their average rank.
pub fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = alloc::vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension("x and y differ in length".into()));
    }
    if x.len() < 2 {
        return Err(Error::DegenerateFit("need at least two points".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Spearman rank correlation: Pearson correlation of tie-averaged ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension("x and y differ in length".into()));
    }
    pearson(&ranks(x), &ranks(y))
}

/// Fits `t = a n^b` by least squares in log space; returns `(a, b)`.
pub fn power_law_fit(n: &[f64], t: &[f64]) -> Result<(f64, f64)> {
    if n.iter().chain(t).any(|v| !(*v > 0.0)) {
        return Err(Error::DegenerateFit("power law needs positive values".into()));
    }
    let ln: Vec<f64> = n.iter().map(|v| v.ln()).collect();
    let lt: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let fit = linear_fit(&ln, &lt)?;
    Ok((fit.intercept.exp(), fit.slope))
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

/// Score against backbone rmsd over one screened ensemble.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FunnelReport {
    /// `(bb_rmsd, score)` pairs in record order.
    pub pairs: Vec<(f64, f64)>,
    pub fit: LinearFit,
    pub spearman: f64,
    pub protein: String,
    pub channels: Vec<String>,
    pub noise: Option<NoiseSpec>,
}

impl FunnelReport {
    pub fn r_squared(&self) -> f64 {
        self.fit.r_squared
    }

    pub fn with_metadata(mut self, protein: &str, channels: Vec<String>, noise: Option<NoiseSpec>) -> Self {
        self.protein = protein.into();
        self.channels = channels;
        self.noise = noise;
        self
    }
}

/// Linear fit of score on bb-rmsd plus Spearman correlation, over the
/// successful records that carry an rmsd.
pub fn funnel(records: &[ScoreRecord]) -> Result<FunnelReport> {
    let pairs: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| !r.is_failure())
        .filter_map(|r| r.bb_rmsd.map(|d| (d, r.score)))
        .collect();
    if pairs.len() < 3 {
        return Err(Error::DegenerateFit("funnel needs at least three scored records with rmsd".into()));
    }
    let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let fit = linear_fit(&x, &y)?;
    let spearman = spearman(&x, &y)?;
    Ok(FunnelReport { pairs, fit, spearman, protein: String::new(), channels: Vec::new(), noise: None })
}
