//! Small helpers for reading features off sampled curves.

/// Indices of interior local maxima. A flat top counts once, at its
/// leftmost sample.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let n = values.len();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Vertex of the parabola through samples `i - 1, i, i + 1`.
pub fn refine_peak(xs: &[f64], ys: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= ys.len() {
        return (xs[i], ys[i]);
    }
    let (y0, y1, y2) = (ys[i - 1], ys[i], ys[i + 1]);
    let den = y0 - 2.0 * y1 + y2;
    if den >= 0.0 {
        return (xs[i], y1);
    }
    let h = xs[i + 1] - xs[i];
    let off = 0.5 * (y0 - y2) / den;
    (xs[i] + off * h, y1 - 0.25 * (y0 - y2) * off)
}

/// `sum |y_{i+1} - y_i|`.
pub fn total_variation(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Oscillation content between the outermost maxima: the total variation
/// there, less what a single dip to the lowest sample would need. Zero for
/// a curve with fewer than two maxima or a single clean valley.
pub fn fringe_contrast(values: &[f64]) -> f64 {
    let peaks = local_maxima(values);
    if peaks.len() < 2 {
        return 0.0;
    }
    let (l, r) = (peaks[0], peaks[peaks.len() - 1]);
    let inner = &values[l..=r];
    let lowest = inner.iter().copied().fold(f64::INFINITY, f64::min);
    let excess = total_variation(inner) - (values[l] - lowest) - (values[r] - lowest);
    excess.max(0.0)
}
