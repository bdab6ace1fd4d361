//! Real spherical harmonics, normalized against the uniform probability
//! measure on S^2.
//!
//! With sigma the uniform measure of total mass 1, the family returned here
//! satisfies int Y_lm Y_l'm' d sigma = delta, so Y_00 = 1 identically and the
//! addition theorem reads sum_m Y_lm(x)^2 = 2l + 1. (These are the usual
//! fully-normalized real harmonics multiplied by sqrt(4 pi).)
//!
//! Evaluation uses the stable column-wise recurrence for the normalized
//! associated Legendre functions (no Condon-Shortley phase):
//!
//! ```text
//! p[0][0] = 1
//! p[l][l]   = sqrt((2l+1)/(2l)) * sin(theta) * p[l-1][l-1]
//! p[l][m]   = a_lm * (cos(theta) * p[l-1][m] + b_lm * p[l-2][m])
//! a_lm = sqrt((4l^2 - 1)/(l^2 - m^2))
//! b_lm = -sqrt(((l-1)^2 - m^2)/(4(l-1)^2 - 1))
//! ```
//!
//! with p[l-2][m] taken as 0 when l - 2 < m. Columns are filled for fixed m
//! with increasing l, which is stable for the degree range used here.

/// Evaluate all real spherical harmonics of degree l <= k at a unit vector.
///
/// Ordering: l = 0..=k, m = -l..=l, index l^2 + (l + m); length (k+1)^2.
/// Negative m carries sin(|m| phi), positive m carries cos(m phi), both with
/// a sqrt(2) factor.
pub fn real_harmonics(k: usize, v: &[f64; 3]) -> Vec<f64> {
    let ct = v[2];
    let st = v[0].hypot(v[1]); // sin(theta) >= 0
    let phi = v[1].atan2(v[0]);

    // p[idx(l, m)] for 0 <= m <= l, idx = l(l+1)/2 + m.
    let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
    let mut p = vec![0.0_f64; (k + 1) * (k + 2) / 2];
    p[0] = 1.0;
    for l in 1..=k {
        let lf = l as f64;
        p[idx(l, l)] = (  (2.0 * lf + 1.0) / (2.0 * lf)).sqrt() * st * p[idx(l - 1, l - 1)];
        for m in 0..l {
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = -((((lf - 1.0) * (lf - 1.0)) - mf * mf)
                / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                .sqrt();
            let prev2 = if l >= 2 && m <= l - 2 { p[idx(l - 2, m)] } else { 0.0 };
            p[idx(l, m)] = a * (ct * p[idx(l - 1, m)] + b * prev2);
        }
    }

    let sq2 = std::f64::consts::SQRT_2;
    let mut out = vec![0.0_f64; (k + 1) * (k + 1)];
    for l in 0..=k {
        let base = l * l + l;
        out[base] = p[idx(l, 0)];
        for m in 1..=l {
            let (s, c) = (m as f64 * phi).sin_cos();
            out[base + m] = sq2 * p[idx(l, m)] * c;
            out[base - m] = sq2 * p[idx(l, m)] * s;
        }
    }
    out
}
