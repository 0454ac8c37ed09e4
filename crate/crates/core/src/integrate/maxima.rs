use crate::error::AnalysisError;

/// A local maximum of a sampled series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    /// Refined time of the peak.
    pub time: f64,
    /// Refined peak value.
    pub value: f64,
    /// Index of the sample at (or starting) the peak.
    pub index: usize,
}

/// Vertex of the parabola through three points, or `None` when the points
/// are collinear or the vertex falls outside the bracket.
fn parabola_vertex(t: [f64; 3], v: [f64; 3]) -> Option<(f64, f64)> {
    let (d0, d2) = (t[0] - t[1], t[2] - t[1]);
    let (e0, e2) = (v[0] - v[1], v[2] - v[1]);
    // v - v1 = c1 (t - t1) + c2 (t - t1)^2
    let den = d0 * d2 * (d0 - d2);
    if den == 0.0 {
        return None;
    }
    let c2 = (e0 * d2 - e2 * d0) / den;
    let c1 = (e2 * d0 * d0 - e0 * d2 * d2) / den;
    if c2 >= 0.0 {
        return None;
    }
    let dt = -c1 / (2.0 * c2);
    if dt < d0 || dt > d2 {
        return None;
    }
    Some((t[1] + dt, v[1] + c1 * dt + c2 * dt * dt))
}

/// Interior local maxima of `values`, each refined by the parabola through
/// the bracketing samples.
///
/// A run of equal values bounded by smaller neighbours counts as a single
/// maximum at its first index and is reported unrefined.
pub fn local_maxima(values: &[f64], times: &[f64]) -> Result<Vec<Extremum>, AnalysisError> {
    if values.len() != times.len() {
        return Err(AnalysisError::LengthMismatch(values.len(), times.len()));
    }
    if values.len() < 3 {
        return Err(AnalysisError::TooFewSamples { needed: 3, got: values.len() });
    }
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        let v = values[i];
        if v <= values[i - 1] {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && values[j + 1] == v {
            j += 1;
        }
        if j + 1 < n && values[j + 1] < v {
            let peak = if j == i {
                let t3 = [times[i - 1], times[i], times[i + 1]];
                let v3 = [values[i - 1], v, values[i + 1]];
                let (time, value) = parabola_vertex(t3, v3).unwrap_or((times[i], v));
                Extremum { time, value, index: i }
            } else {
                Extremum { time: times[i], value: v, index: i }
            };
            out.push(peak);
        }
        i = j + 1;
    }
    Ok(out)
}
