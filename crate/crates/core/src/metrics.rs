//! Ranking metrics for outlier scores: ROC AUC, average precision,
//! precision at n, and the chance adjustment applied to the latter two.
//!
//! Labels are `true` for outliers. Precision metrics rank by descending
//! score and resolve ties by input order (earlier record ranks first).

use crate::error::MetricError;

fn check(scores: &[f64], labels: &[bool]) -> Result<usize, MetricError> {
    if scores.len() != labels.len() {
        return Err(MetricError::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 || positives == labels.len() {
        return Err(MetricError::SingleClass {
            positives,
            total: labels.len(),
        });
    }
    Ok(positives)
}

/// Probability that a random outlier outscores a random inlier, ties
/// counting one half. Computed from midranks in `O(n log n)`.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<f64, MetricError> {
    let positives = check(scores, labels)?;
    let negatives = labels.len() - positives;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // 1-based midrank of the tie group.
        let midrank = (i + j) as f64 / 2.0 + 1.0;
        let pos_in_group = order[i..=j].iter().filter(|&&k| labels[k]).count();
        rank_sum += midrank * pos_in_group as f64;
        i = j + 1;
    }
    let p = positives as f64;
    let u = rank_sum - p * (p + 1.0) / 2.0;
    Ok(u / (p * negatives as f64))
}

fn ranking(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // Stable sort keeps input order among equal scores.
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    order
}

/// Mean over outliers of the precision at each outlier's rank.
pub fn average_precision(scores: &[f64], labels: &[bool]) -> Result<f64, MetricError> {
    let positives = check(scores, labels)?;
    let mut hits = 0usize;
    let mut total = 0.0;
    for (rank, &i) in ranking(scores).iter().enumerate() {
        if labels[i] {
            hits += 1;
            total += hits as f64 / (rank + 1) as f64;
        }
    }
    Ok(total / positives as f64)
}

/// Fraction of outliers among the `n` highest scores; `n` defaults to the
/// number of outliers.
pub fn precision_at_n(scores: &[f64], labels: &[bool], n: Option<usize>) -> Result<f64, MetricError> {
    let positives = check(scores, labels)?;
    let n = n.unwrap_or(positives).clamp(1, scores.len());
    let hits = ranking(scores)[..n].iter().filter(|&&i| labels[i]).count();
    Ok(hits as f64 / n as f64)
}

/// Chance adjustment: 0 for random scoring, 1 for a perfect ranking.
pub fn adjust(value: f64, outlier_rate: f64) -> Result<f64, MetricError> {
    if !(outlier_rate > 0.0 && outlier_rate < 1.0) {
        return Err(MetricError::DegenerateRate(outlier_rate));
    }
    Ok((value - outlier_rate) / (1.0 - outlier_rate))
}

/// AUC, adjusted AP and adjusted P@n for one score series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSummary {
    pub n: usize,
    pub outliers: usize,
    pub auc: f64,
    pub ap: f64,
    pub p_at_n: f64,
    pub aap: f64,
    pub ap_at_n: f64,
}

pub fn summarize(scores: &[f64], labels: &[bool]) -> Result<MetricSummary, MetricError> {
    let outliers = check(scores, labels)?;
    let rate = outliers as f64 / labels.len() as f64;
    let ap = average_precision(scores, labels)?;
    let p_at_n = precision_at_n(scores, labels, None)?;
    Ok(MetricSummary {
        n: labels.len(),
        outliers,
        auc: roc_auc(scores, labels)?,
        ap,
        p_at_n,
        aap: adjust(ap, rate)?,
        ap_at_n: adjust(p_at_n, rate)?,
    })
}
