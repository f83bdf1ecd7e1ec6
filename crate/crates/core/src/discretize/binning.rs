use super::{check_values, sorted, BinningScheme, DiscretizationParams, Method};
use crate::error::{Error, Result};

/// Splits `[min, max]` into `k` bins of width `(max - min) / k`.
///
/// A constant column yields a single bin.
pub fn equal_width_bins(values: &[f64], k: usize) -> Result<BinningScheme> {
    check_values(values)?;
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let boundaries = if max > min {
        let width = (max - min) / k as f64;
        (1..k).map(|i| min + width * i as f64).collect()
    } else {
        Vec::new()
    };
    Ok(BinningScheme::new(
        Method::EqualWidth,
        boundaries,
        DiscretizationParams::bins(k),
    ))
}

/// Assigns roughly `n / k` sorted values to each bin.
///
/// Cuts never separate equal values: when the ideal cut lands inside a run of
/// ties, the whole run stays in the lower bin. With fewer distinct values than
/// `k`, every distinct value gets its own bin.
pub fn equal_depth_bins(values: &[f64], k: usize) -> Result<BinningScheme> {
    check_values(values)?;
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    let s = sorted(values);
    let n = s.len();
    let distinct = 1 + s.windows(2).filter(|w| w[0] != w[1]).count();

    // `cuts` holds the number of sorted values below each boundary.
    let cuts: Vec<usize> = if k >= distinct {
        (1..n).filter(|&i| s[i] != s[i - 1]).collect()
    } else {
        let mut cuts = Vec::with_capacity(k - 1);
        let mut prev = 0;
        for i in 1..k {
            let mut cut = ((2 * i * n + k) / (2 * k)).max(prev + 1);
            while cut < n && s[cut] == s[cut - 1] {
                cut += 1;
            }
            if cut >= n {
                break;
            }
            cuts.push(cut);
            prev = cut;
        }
        cuts
    };

    let boundaries = cuts
        .iter()
        .map(|&c| s[c - 1] + (s[c] - s[c - 1]) / 2.0)
        .collect();
    Ok(BinningScheme::new(
        Method::EqualDepth,
        boundaries,
        DiscretizationParams::bins(k),
    ))
}
