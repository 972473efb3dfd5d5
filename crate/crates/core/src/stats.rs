//! Paired comparison of two algorithms' results: descriptive statistics of
//! the differences, paired t-test, one-way ANOVA and the Wilcoxon
//! signed-rank test.

use statrs::distribution::{ContinuousCDF, FisherSnedecor, Normal, StudentsT};
use thiserror::Error;

/// Largest number of non-zero differences handled by the exact Wilcoxon
/// distribution; above it a normal approximation is used.
pub const WILCOXON_EXACT_MAX: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("series lengths differ ({a} vs {b})")]
    Length { a: usize, b: usize },
    #[error("need at least {min} values, got {n}")]
    TooFew { n: usize, min: usize },
    #[error("zero variance")]
    ZeroVariance,
    #[error("all differences are zero")]
    AllZero,
}

/// Two equal-length series; differences are taken as `b - a`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl PairedSample {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self, StatsError> {
        if a.len() != b.len() {
            return Err(StatsError::Length { a: a.len(), b: b.len() });
        }
        if a.len() < 2 {
            return Err(StatsError::TooFew { n: a.len(), min: 2 });
        }
        Ok(PairedSample { a, b })
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn diffs(&self) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(a, b)| b - a).collect()
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sum_sq_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Descriptive {
    pub mean_diff: f64,
    /// Population standard deviation (divisor n) of the differences.
    pub stdev_diff: f64,
    /// `|mean_diff| / mean(a)` in percent.
    pub pct_of_baseline: f64,
}

pub fn descriptive(sample: &PairedSample) -> Descriptive {
    let d = sample.diffs();
    let mean_diff = mean(&d);
    let stdev_diff = (sum_sq_dev(&d) / d.len() as f64).sqrt();
    let base = mean(&sample.a);
    let pct_of_baseline = if mean_diff == 0.0 {
        0.0
    } else {
        mean_diff.abs() / base * 100.0
    };
    Descriptive {
        mean_diff,
        stdev_diff,
        pct_of_baseline,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    /// Two-sided.
    pub p: f64,
}

/// Paired t-test on `b - a` with the sample standard deviation (divisor
/// n - 1).
pub fn paired_t(sample: &PairedSample) -> Result<TTest, StatsError> {
    let d = sample.diffs();
    let n = d.len() as f64;
    let ss = sum_sq_dev(&d);
    if ss == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let se = (ss / (n - 1.0)).sqrt() / n.sqrt();
    let t = mean(&d) / se;
    let df = n - 1.0;
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
    let p = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok(TTest { t, df, p })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FTest {
    pub f: f64,
    pub df_between: f64,
    pub df_within: f64,
    pub p: f64,
}

/// One-way ANOVA across `groups`, each with at least two values.
pub fn anova_oneway(groups: &[&[f64]]) -> Result<FTest, StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::TooFew {
            n: groups.len(),
            min: 2,
        });
    }
    for g in groups {
        if g.len() < 2 {
            return Err(StatsError::TooFew { n: g.len(), min: 2 });
        }
    }
    let total: usize = groups.iter().map(|g| g.len()).sum();
    let grand = groups.iter().flat_map(|g| g.iter()).sum::<f64>() / total as f64;
    let ss_between: f64 = groups
        .iter()
        .map(|g| {
            let d = mean(g) - grand;
            g.len() as f64 * d * d
        })
        .sum();
    let ss_within: f64 = groups.iter().map(|g| sum_sq_dev(g)).sum();
    if ss_within == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let df_between = (groups.len() - 1) as f64;
    let df_within = (total - groups.len()) as f64;
    let f = (ss_between / df_between) / (ss_within / df_within);
    let p = FisherSnedecor::new(df_between, df_within).expect("positive df").sf(f);
    Ok(FTest {
        f,
        df_between,
        df_within,
        p,
    })
}

/// One-way ANOVA F for two unpaired groups.
pub fn anova_f(group_a: &[f64], group_b: &[f64]) -> Result<FTest, StatsError> {
    anova_oneway(&[group_a, group_b])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wilcoxon {
    /// Sum of ranks of the positive differences.
    pub w_plus: f64,
    /// Non-zero differences.
    pub n: usize,
    /// Two-sided.
    pub p: f64,
    /// False when the normal approximation was used.
    pub exact: bool,
}

/// Average ranks of `|d|`, doubled so that ties stay integral.
fn doubled_ranks(abs: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..abs.len()).collect();
    order.sort_by(|&x, &y| abs[x].total_cmp(&abs[y]));
    let mut ranks = vec![0u64; abs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && abs[order[j + 1]] == abs[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 averaged, times two
        let twice_avg = (i + 1 + j + 1) as u64;
        for &o in &order[i..=j] {
            ranks[o] = twice_avg;
        }
        i = j + 1;
    }
    ranks
}

/// Wilcoxon signed-rank test on the differences `b - a`.
pub fn wilcoxon_signed_rank(sample: &PairedSample) -> Result<Wilcoxon, StatsError> {
    wilcoxon_diffs(&sample.diffs())
}

/// Wilcoxon signed-rank test on raw differences. Zero differences are
/// dropped and ties get average ranks. Up to [`WILCOXON_EXACT_MAX`]
/// non-zero differences the two-sided p-value is exact,
/// `P(|W+ - E W+| >= |w+ - E W+|)` under the sign-flip distribution;
/// beyond that a normal approximation with tie and continuity corrections
/// is used.
pub fn wilcoxon_diffs(diffs: &[f64]) -> Result<Wilcoxon, StatsError> {
    let nz: Vec<f64> = diffs.iter().copied().filter(|&d| d != 0.0).collect();
    if nz.is_empty() {
        return Err(StatsError::AllZero);
    }
    let abs: Vec<f64> = nz.iter().map(|d| d.abs()).collect();
    let ranks = doubled_ranks(&abs);
    let total: u64 = ranks.iter().sum();
    let w2: u64 = ranks.iter().zip(&nz).filter(|(_, &d)| d > 0.0).map(|(r, _)| r).sum();
    let n = nz.len();
    let w_plus = w2 as f64 / 2.0;

    if n <= WILCOXON_EXACT_MAX {
        // counts[s]: sign patterns whose positive doubled ranks sum to s
        let mut counts = vec![0u64; total as usize + 1];
        counts[0] = 1;
        let mut reach = 0usize;
        for &r in &ranks {
            let r = r as usize;
            for s in (0..=reach).rev() {
                if counts[s] > 0 {
                    counts[s + r] += counts[s];
                }
            }
            reach += r;
        }
        // compare 2 * (doubled sum) against the doubled total to stay integral
        let observed = (2 * w2 as i64 - total as i64).abs();
        let extreme: u64 = counts
            .iter()
            .enumerate()
            .filter(|&(s, _)| (2 * s as i64 - total as i64).abs() >= observed)
            .map(|(_, c)| c)
            .sum();
        let p = extreme as f64 / 2f64.powi(n as i32);
        return Ok(Wilcoxon {
            w_plus,
            n,
            p: p.min(1.0),
            exact: true,
        });
    }

    let nf = n as f64;
    let mu = nf * (nf + 1.0) / 4.0;
    let mut tie_term = 0.0;
    let mut sorted = abs.clone();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let z = ((w_plus - mu).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p = (2.0 * normal.sf(z)).min(1.0);
    Ok(Wilcoxon {
        w_plus,
        n,
        p,
        exact: false,
    })
}
