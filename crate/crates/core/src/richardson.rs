//! Richardson extrapolation of a sequence computed at geometrically
//! shrinking step sizes.

/// Neville-style Richardson tableau.
///
/// `estimates[i]` is computed at step `h0 / ratio^i` and is assumed to carry
/// an error expansion in powers of `h^order`, `h^(2·order)`, ... For quantities
/// that are even in `h` use `order = 2`.
#[derive(Debug, Clone)]
pub struct Tableau {
    rows: Vec<Vec<f64>>,
}

impl Tableau {
    pub fn new(estimates: &[f64], ratio: f64, order: u32) -> Self {
        let factor = ratio.powi(order as i32);
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(estimates.len());
        for (i, &raw) in estimates.iter().enumerate() {
            let mut row = Vec::with_capacity(i + 1);
            row.push(raw);
            let mut weight = 1.0;
            for j in 1..=i {
                weight *= factor;
                let fine = row[j - 1];
                let coarse = rows[i - 1][j - 1];
                row.push(fine + (fine - coarse) / (weight - 1.0));
            }
            rows.push(row);
        }
        Self { rows }
    }

    /// Successive diagonal entries `T[i][i]`; the last one is the best estimate.
    pub fn diagonal(&self) -> Vec<f64> {
        self.rows.iter().enumerate().map(|(i, r)| r[i]).collect()
    }

    pub fn best(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.last().copied())
    }

    /// Absolute difference between the last two diagonal entries.
    pub fn last_change(&self) -> Option<f64> {
        let d = self.diagonal();
        (d.len() >= 2).then(|| (d[d.len() - 1] - d[d.len() - 2]).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_even_power_errors() {
        // f(h) = 3 + 2h² - 5h⁴ + h⁶, exact limit 3.
        let f = |h: f64| 3.0 + 2.0 * h * h - 5.0 * h.powi(4) + h.powi(6);
        let est: Vec<f64> = (0..4).map(|i| f(0.1 / 2f64.powi(i))).collect();
        let t = Tableau::new(&est, 2.0, 2);
        assert!((t.best().unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(t.diagonal().len(), 4);
        assert!(t.last_change().unwrap() < 1e-6);
    }

    #[test]
    fn single_level_is_raw() {
        let t = Tableau::new(&[1.25], 2.0, 2);
        assert_eq!(t.best(), Some(1.25));
        assert_eq!(t.last_change(), None);
    }
}
