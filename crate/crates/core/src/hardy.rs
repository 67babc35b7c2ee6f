//! Hardy's two-particle construction in real arithmetic: the entangled state
//! `α|++⟩ − β|−−⟩`, the bases `{u,v}` and `{c,d}`, and the probability of the
//! classically forbidden outcome `dd`.
//!
//! The common factor `i` carried by `u, v, c, d` is dropped from the vectors.
//! Probabilities and orthogonality are unaffected. Expansion coefficients pick
//! up the product of two such factors, `−1`, which [`expansion_coefficients`]
//! restores.

use thiserror::Error;

pub use crate::exact::probability_exact;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum HardyError {
    #[error("α = {0} is outside (0, 1)")]
    OutOfRange(f64),
    #[error("zero vector")]
    ZeroVector,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyParams {
    pub alpha: f64,
    pub beta: f64,
    /// `α = cos φ`, `β = sin φ`.
    pub phi: f64,
}

impl HardyParams {
    pub fn new(alpha: f64) -> Result<Self, HardyError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(HardyError::OutOfRange(alpha));
        }
        let beta = (1.0 - alpha * alpha).sqrt();
        Ok(HardyParams { alpha, beta, phi: alpha.acos() })
    }

    /// Whether `α ≥ β`, i.e. `φ ≤ π/4`.
    pub fn in_principal_range(&self) -> bool {
        self.alpha >= self.beta
    }
}

pub type V2 = [f64; 2];
pub type M2 = [[f64; 2]; 2];

/// `e` is the standard basis, `f = {u, v}`, `g = {c, d}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateBases {
    pub e1: V2,
    pub e2: V2,
    pub f1: V2,
    pub f2: V2,
    pub g1: V2,
    pub g2: V2,
}

impl TwoStateBases {
    pub fn u(&self) -> V2 {
        self.f1
    }
    pub fn v(&self) -> V2 {
        self.f2
    }
    pub fn c(&self) -> V2 {
        self.g1
    }
    pub fn d(&self) -> V2 {
        self.g2
    }
}

/// Rows are the new basis vectors in the old coordinates: `f_j = Σ_i U12[j][i] e_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSet {
    pub u12: M2,
    pub u23: M2,
    /// `U23 · U12`, taking `e` straight to `g`.
    pub u13: M2,
}

pub fn matmul(a: &M2, b: &M2) -> M2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn transpose(a: &M2) -> M2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn transforms(p: &HardyParams) -> TransformSet {
    let (a, b) = (p.alpha, p.beta);
    let k12 = 1.0 / (a + b).sqrt();
    let u12 = [[b.sqrt() * k12, a.sqrt() * k12], [a.sqrt() * k12, -b.sqrt() * k12]];
    let k23 = 1.0 / (1.0 - a * b).sqrt();
    let ab = (a * b).sqrt();
    let u23 = [[ab * k23, (a - b) * k23], [(b - a) * k23, ab * k23]];
    TransformSet { u12, u23, u13: matmul(&u23, &u12) }
}

/// `(α, 0, 0, −β)`.
pub fn hardy_state(p: &HardyParams) -> [f64; 4] {
    [p.alpha, 0.0, 0.0, -p.beta]
}

/// Closed forms for `u, v, c, d`.
pub fn hardy_bases(p: &HardyParams) -> TwoStateBases {
    let (a, b) = (p.alpha, p.beta);
    let nf = (a + b).sqrt();
    let ng = (a.powi(3) + b.powi(3)).sqrt();
    TwoStateBases {
        e1: [1.0, 0.0],
        e2: [0.0, 1.0],
        f1: [b.sqrt() / nf, a.sqrt() / nf],
        f2: [a.sqrt() / nf, -b.sqrt() / nf],
        g1: [a.powf(1.5) / ng, b.powf(1.5) / ng],
        g2: [b.powf(1.5) / ng, -a.powf(1.5) / ng],
    }
}

/// The same bases obtained by applying the transformation matrices to `e`.
pub fn bases_from_transforms(t: &TransformSet) -> TwoStateBases {
    TwoStateBases {
        e1: [1.0, 0.0],
        e2: [0.0, 1.0],
        f1: t.u12[0],
        f2: t.u12[1],
        g1: t.u13[0],
        g2: t.u13[1],
    }
}

/// Flattened Kronecker product, row-major.
pub fn tensor(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `|⟨a|b⟩|² / (‖a‖²‖b‖²)`.
pub fn probability(a: &[f64], b: &[f64]) -> Result<f64, HardyError> {
    if a.len() != b.len() {
        return Err(HardyError::DimensionMismatch(a.len(), b.len()));
    }
    let (na, nb) = (dot(a, a), dot(b, b));
    if na == 0.0 || nb == 0.0 {
        return Err(HardyError::ZeroVector);
    }
    Ok(dot(a, b).powi(2) / (na * nb))
}

/// Largest of `|⟨Ψ|uu⟩|`, `|⟨Ψ|vd⟩|`, `|⟨Ψ|dv⟩|`.
pub fn check_orthogonality_conditions(p: &HardyParams) -> f64 {
    let psi = hardy_state(p);
    let b = hardy_bases(p);
    [tensor(&b.u(), &b.u()), tensor(&b.v(), &b.d()), tensor(&b.d(), &b.v())]
        .iter()
        .map(|x| dot(&psi, x).abs())
        .fold(0.0, f64::max)
}

/// Coefficients of Ψ in one product basis, labelled by the two factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub terms: [(&'static str, f64); 4],
}

impl Expansion {
    pub fn get(&self, name: &str) -> f64 {
        self.terms.iter().find(|(n, _)| *n == name).map(|t| t.1).unwrap_or_else(|| panic!("no term {name}"))
    }
}

fn expand(psi: &[f64; 4], x: [(char, V2); 2], y: [(char, V2); 2]) -> Expansion {
    let mut terms = [("", 0.0); 4];
    let names = ["uu", "uv", "vu", "vv", "uc", "ud", "vc", "vd", "cu", "cv", "du", "dv", "cc", "cd", "dc", "dd"];
    for (i, (nx, vx)) in x.iter().enumerate() {
        for (j, (ny, vy)) in y.iter().enumerate() {
            let name = names.iter().find(|n| n.starts_with(*nx) && n.ends_with(*ny)).expect("term name");
            // −1 restores the i·i phase of the two factors
            terms[2 * i + j] = (name, -dot(psi, &tensor(vx, vy)));
        }
    }
    Expansion { terms }
}

/// Ψ expanded in `{u,v}⊗{u,v}`, `{u,v}⊗{c,d}`, `{c,d}⊗{u,v}` and `{c,d}⊗{c,d}`.
pub fn expansion_coefficients(p: &HardyParams) -> [Expansion; 4] {
    let psi = hardy_state(p);
    let b = hardy_bases(p);
    let uv = [('u', b.u()), ('v', b.v())];
    let cd = [('c', b.c()), ('d', b.d())];
    [expand(&psi, uv, uv), expand(&psi, uv, cd), expand(&psi, cd, uv), expand(&psi, cd, cd)]
}

/// `|⟨dd|Ψ⟩|²` in closed form. Defined on the closed interval `[0, 1]`.
pub fn hardy_dd_probability(alpha: f64) -> f64 {
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let num = alpha * (alpha * (beta + alpha) - 1.0);
    let den = alpha * beta - 1.0;
    (num / den).powi(2)
}

/// `|⟨dd|Ψ⟩|²` from the bases and the state.
pub fn hardy_dd_probability_constructive(p: &HardyParams) -> f64 {
    let b = hardy_bases(p);
    probability(&tensor(&b.d(), &b.d()), &hardy_state(p)).expect("nonzero vectors")
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iterations: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iterations {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    (lo + hi) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyMaximum {
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    pub p_star: f64,
}

/// `α± = √(1 ± √(6√5 − 13))/√2`.
pub fn alpha_pm_closed_form() -> (f64, f64) {
    let s = (6.0 * 5f64.sqrt() - 13.0).sqrt();
    (((1.0 - s) / 2.0).sqrt(), ((1.0 + s) / 2.0).sqrt())
}

/// `(5√5 − 11)/2`.
pub fn p_star_closed_form() -> f64 {
    (5.0 * 5f64.sqrt() - 11.0) / 2.0
}

/// Polishes a maximizer by bisecting the sign of a central difference.
/// Comparing function values alone cannot place a flat maximum closer than
/// about `√ε`.
fn refine_stationary(f: impl Fn(f64) -> f64, x: f64, radius: f64) -> f64 {
    let h = 1e-6;
    let slope = |t: f64| f(t + h) - f(t - h);
    let (mut lo, mut hi) = (x - radius, x + radius);
    if slope(lo) <= 0.0 || slope(hi) >= 0.0 {
        return x;
    }
    for _ in 0..100 {
        let m = (lo + hi) / 2.0;
        if slope(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    (lo + hi) / 2.0
}

/// Maximizes the `dd` probability separately on `(0, 1/√2)` and `(1/√2, 1)`.
pub fn maximize_hardy() -> HardyMaximum {
    let mid = std::f64::consts::FRAC_1_SQRT_2;
    let polish = |x| refine_stationary(hardy_dd_probability, x, 1e-5);
    let alpha_minus = polish(golden_section_max(hardy_dd_probability, 0.0, mid, 200));
    let alpha_plus = polish(golden_section_max(hardy_dd_probability, mid, 1.0, 200));
    let p_star = hardy_dd_probability(alpha_minus).max(hardy_dd_probability(alpha_plus));
    HardyMaximum { alpha_minus, alpha_plus, p_star }
}

/// `(α, P(α))` on `α = k/(n+1)`, `k = 1..=n`.
pub fn sweep(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|k| {
            let a = k as f64 / (n + 1) as f64;
            (a, hardy_dd_probability(a))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn state_and_range() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = HardyParams::new(h).unwrap();
        let s = hardy_state(&p);
        assert!(close(s[0], h, 1e-15) && close(s[3], -h, 1e-12));
        assert!(HardyParams::new(0.0).is_err() && HardyParams::new(1.0).is_err());
        assert!(HardyParams::new(f64::NAN).is_err());
        assert!(HardyParams::new(0.9).unwrap().in_principal_range());
        let near_one = hardy_state(&HardyParams::new(1.0 - 1e-12).unwrap());
        assert!(near_one[3].abs() < 1e-5);
    }

    #[test]
    fn bases_orthonormal_and_match_transforms() {
        for k in 1..100 {
            let p = HardyParams::new(k as f64 / 100.0).unwrap();
            let b = hardy_bases(&p);
            for (x, y) in [(b.f1, b.f2), (b.g1, b.g2)] {
                assert!(close(dot(&x, &x), 1.0, 1e-12) && close(dot(&y, &y), 1.0, 1e-12));
                assert!(dot(&x, &y).abs() < 1e-12);
            }
            let t = transforms(&p);
            let m = bases_from_transforms(&t);
            for (x, y) in [(b.f1, m.f1), (b.f2, m.f2), (b.g1, m.g1), (b.g2, m.g2)] {
                assert!(close(x[0], y[0], 1e-12) && close(x[1], y[1], 1e-12), "α={}", p.alpha);
            }
            for u in [t.u12, t.u23, t.u13] {
                let id = matmul(&transpose(&u), &u);
                assert!(close(id[0][0], 1.0, 1e-12) && close(id[1][1], 1.0, 1e-12) && id[0][1].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&[1.0, 0.0], &[1.0, 0.0]), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(tensor(&[1.0, 0.0], &[0.0, 1.0]), [0.0, 1.0, 0.0, 0.0]);
        let (a, b) = (0.6, 0.8);
        let s: Vec<f64> = tensor(&[1.0, 0.0], &[1.0, 0.0])
            .iter()
            .zip(tensor(&[0.0, 1.0], &[0.0, 1.0]))
            .map(|(x, y)| a * x - b * y)
            .collect();
        assert_eq!(s, hardy_state(&HardyParams::new(0.6).unwrap()));
    }

    #[test]
    fn expansions_at_point_six() {
        let p = HardyParams::new(0.6).unwrap();
        let (a, b) = (p.alpha, p.beta);
        let [e9, e10, e11, e12] = expansion_coefficients(&p);
        let r = (1.0 - a * b).sqrt();
        assert!(close(e9.get("uu"), 0.0, 1e-12));
        assert!(close(e9.get("uv"), -(a * b).sqrt(), 1e-12));
        assert!(close(e9.get("vu"), -(a * b).sqrt(), 1e-12));
        assert!(close(e9.get("vv"), -(a - b), 1e-12));
        assert!(close(e10.get("vd"), 0.0, 1e-12));
        assert!(close(e10.get("vc"), -(a * a - a * b + b * b) / r, 1e-12));
        assert!(close(e10.get("ud"), -a * b / r, 1e-12));
        assert!(close(e10.get("uc"), ((a * b.powi(3)).sqrt() - (a.powi(3) * b).sqrt()) / r, 1e-12));
        assert!(close(e11.get("dv"), 0.0, 1e-12));
        assert!(close(e11.get("cv"), e10.get("vc"), 1e-12));
        assert!(close(e11.get("du"), e10.get("ud"), 1e-12));
        let q = 1.0 - a * b;
        assert!(close(e12.get("dd"), -a * b * (b - a) / q, 1e-12));
        assert!(close(e12.get("cc"), -(a - b) * (a * a + b * b) / q, 1e-12));
        assert!(close(e12.get("cd"), -(a * b).powf(1.5) / q, 1e-12));
        assert!(close(e12.get("dc"), e12.get("cd"), 1e-12));
    }

    #[test]
    fn symmetric_point_kills_cc_and_dd() {
        let p = HardyParams::new(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let e12 = &expansion_coefficients(&p)[3];
        assert!(e12.get("dd").abs() < 1e-12 && e12.get("cc").abs() < 1e-12);
    }

    #[test]
    fn dd_probability() {
        assert_eq!(hardy_dd_probability(0.0), 0.0);
        assert!(hardy_dd_probability(1.0).abs() < 1e-30);
        let p = HardyParams::new(0.6).unwrap();
        assert!(close(hardy_dd_probability(0.6), hardy_dd_probability_constructive(&p), 1e-12));
        let (_, ap) = alpha_pm_closed_form();
        assert!(close(hardy_dd_probability(ap), p_star_closed_form(), 1e-12));
    }

    #[test]
    fn maximum() {
        let m = maximize_hardy();
        let (am, ap) = alpha_pm_closed_form();
        assert!(close(m.p_star, 0.0901699437494742, 1e-12));
        assert!(close(m.alpha_minus, am, 1e-9), "{} vs {am}", m.alpha_minus);
        assert!(close(m.alpha_plus, ap, 1e-9), "{} vs {ap}", m.alpha_plus);
        assert!(close(hardy_dd_probability(m.alpha_minus), m.p_star, 1e-12));
        let h = 1e-5;
        let slope = (hardy_dd_probability(m.alpha_plus + h) - hardy_dd_probability(m.alpha_plus - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-6);
    }

    #[test]
    fn probability_errors_and_values() {
        assert_eq!(probability(&[0.0, 0.0], &[1.0, 0.0]), Err(HardyError::ZeroVector));
        assert_eq!(probability(&[1.0], &[1.0, 0.0]), Err(HardyError::DimensionMismatch(1, 2)));
        assert!(close(probability(&[0.0, 1.0, 1.0, -1.0], &[0.0, 1.0, 2.0, -1.0]).unwrap(), 8.0 / 9.0, 1e-15));
        assert_eq!(probability(&[1.0, 0.0], &[0.0, 3.0]).unwrap(), 0.0);
    }

    #[test]
    fn sweep_grid() {
        let s = sweep(99);
        assert_eq!(s.len(), 99);
        assert!(close(s[0].0, 0.01, 1e-15) && close(s[98].0, 0.99, 1e-15));
    }
}
