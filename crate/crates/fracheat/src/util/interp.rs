//! Monotone cubic (Fritsch–Carlson) interpolation on an ascending grid.
//!
//! Used for tabulated radial profiles; the limiter keeps interpolants of
//! monotone data monotone, so non-increasing kernel profiles stay
//! non-increasing between nodes.

#[derive(Clone, Debug)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl Pchip {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Pchip {
        assert!(xs.len() == ys.len() && xs.len() >= 2);
        assert!(xs.windows(2).all(|w| w[1] > w[0]), "abscissae must ascend");
        let n = xs.len();
        let mut d = vec![0.0; n - 1]; // secant slopes
        for i in 0..n - 1 {
            d[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        }
        let mut m = vec![0.0; n];
        // one-sided parabolic endpoint slopes, clamped for shape
        let h0 = xs[1] - xs[0];
        let h1 = if n > 2 { xs[2] - xs[1] } else { h0 };
        let mut m0 = ((2.0 * h0 + h1) * d[0] - h0 * d.get(1).copied().unwrap_or(d[0])) / (h0 + h1);
        if m0 * d[0] <= 0.0 {
            m0 = 0.0;
        } else if d.len() > 1 && d[0] * d[1] <= 0.0 && m0.abs() > 3.0 * d[0].abs() {
            m0 = 3.0 * d[0];
        }
        m[0] = m0;
        let hn = xs[n - 1] - xs[n - 2];
        let hn1 = if n > 2 { xs[n - 2] - xs[n - 3] } else { hn };
        let dn = d[n - 2];
        let dn1 = if n > 2 { d[n - 3] } else { dn };
        let mut mn = ((2.0 * hn + hn1) * dn - hn * dn1) / (hn + hn1);
        if mn * dn <= 0.0 {
            mn = 0.0;
        } else if n > 2 && dn * dn1 <= 0.0 && mn.abs() > 3.0 * dn.abs() {
            mn = 3.0 * dn;
        }
        m[n - 1] = mn;
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                m[i] = 0.0;
            } else {
                // weighted harmonic mean keeps monotonicity
                let w1 = 2.0 * (xs[i + 1] - xs[i]) + (xs[i] - xs[i - 1]);
                let w2 = (xs[i + 1] - xs[i]) + 2.0 * (xs[i] - xs[i - 1]);
                m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        Pchip { xs, ys, slopes: m }
    }

    pub fn min_x(&self) -> f64 {
        self.xs[0]
    }

    pub fn max_x(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    /// Evaluate; clamps outside the grid to the boundary values.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            p => p - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }
}
