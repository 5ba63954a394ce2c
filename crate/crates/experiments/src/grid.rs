//! Deterministic 1-D grids.

pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let h = (max - min) / (n - 1) as f64;
            (0..n).map(|k| if k == n - 1 { max } else { min + k as f64 * h }).collect()
        }
    }
}

/// `n` points evenly spaced in log10 between `min` and `max` (both > 0).
pub fn logspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    linspace(min.log10(), max.log10(), n)
        .into_iter()
        .enumerate()
        .map(|(k, e)| match k {
            0 => min,
            _ if k == n - 1 => max,
            _ => 10f64.powf(e),
        })
        .collect()
}

/// Points min, min + step, ... not exceeding `max` (up to rounding of the last step).
///
/// When 1/step is an integer N the points are computed as i/N, so decimal
/// grids such as 0.001:0.6:0.001 land on the correctly rounded decimals.
pub fn arange(min: f64, max: f64, step: f64) -> Vec<f64> {
    let count = ((max - min) / step + 1e-6).floor() as usize + 1;
    let inv = 1.0 / step;
    let n = inv.round();
    if (inv - n).abs() < 1e-9 * n && n >= 1.0 {
        let start = (min * n).round();
        if (min * n - start).abs() < 1e-6 {
            return (0..count).map(|k| (start + k as f64) / n).collect();
        }
    }
    (0..count).map(|k| min + k as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.005, 0.2, 40);
        assert_eq!(v.len(), 40);
        assert_eq!(v[0], 0.005);
        assert_eq!(v[39], 0.2);
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
    }

    #[test]
    fn logspace_decades() {
        let v = logspace(1e-3, 1e-1, 21);
        assert_eq!(v[0], 1e-3);
        assert_eq!(v[20], 1e-1);
        assert_eq!(v[10], 1e-2);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn arange_hits_decimals() {
        let v = arange(0.001, 0.6, 0.001);
        assert_eq!(v.len(), 600);
        assert_eq!(v[0], 0.001);
        assert_eq!(v[599], 0.6);
        assert_eq!(v[244], 0.245);
        let w = arange(0.25, 1.0, 0.3);
        assert_eq!(w.len(), 3);
        assert_eq!(w[0], 0.25);
    }
}
