//! Target Hamiltonians as finite Fourier polynomials over angle variables:
//! range normalization, numerical expansion on uniform tensor grids,
//! truncation-error measurement, and the coefficient-to-coupling map.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A target variable x_j on a finite interval [lo, hi] together with the
/// affine map onto the angle theta_j in [-pi, pi].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::invalid(format!(
                "variable range [{lo}, {hi}] must be finite with lo < hi"
            )));
        }
        Ok(VariableSpec {
            name: name.into(),
            lo,
            hi,
        })
    }

    /// theta = 2 pi (x - (lo+hi)/2) / (hi - lo)
    pub fn to_angle(&self, x: f64) -> f64 {
        2.0 * std::f64::consts::PI * (x - 0.5 * (self.lo + self.hi)) / (self.hi - self.lo)
    }

    pub fn from_angle(&self, theta: f64) -> f64 {
        (self.hi - self.lo) / (2.0 * std::f64::consts::PI) * theta + 0.5 * (self.lo + self.hi)
    }

    /// This variable's factor of the measure constant: (hi - lo) / 2 pi.
    pub fn norm_factor(&self) -> f64 {
        (self.hi - self.lo) / (2.0 * std::f64::consts::PI)
    }
}

/// Normalize a list of ranges; variables are named x0, x1, ...
pub fn normalize(ranges: &[(f64, f64)]) -> Result<Vec<VariableSpec>> {
    ranges
        .iter()
        .enumerate()
        .map(|(j, &(lo, hi))| VariableSpec::new(format!("x{j}"), lo, hi))
        .collect()
}

/// Product of the per-variable measure factors (the constant in front of
/// the normalized partition function).
pub fn norm_constant(specs: &[VariableSpec]) -> f64 {
    specs.iter().map(|v| v.norm_factor()).product()
}

/// One Fourier term: coefficients of cos(m . theta) and sin(m . theta).
/// `ci`/`si` carry imaginary parts for complex-coupled models and stay zero
/// otherwise.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Coef {
    pub c: f64,
    pub s: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub ci: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub si: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

impl Coef {
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.c.abs() <= tol && self.s.abs() <= tol && self.ci.abs() <= tol && self.si.abs() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.c
            .abs()
            .max(self.s.abs())
            .max(self.ci.abs())
            .max(self.si.abs())
    }
}

/// A finite Fourier polynomial over named angle variables. Mode vectors are
/// canonical: the first nonzero entry is positive, and the all-zero vector
/// carries only a cosine (constant) term.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "FpJson", into = "FpJson")]
pub struct FourierPolynomial {
    vars: Vec<String>,
    mode_bound: Vec<u32>,
    complex: bool,
    terms: BTreeMap<Vec<i32>, Coef>,
}

#[derive(Serialize, Deserialize, Clone)]
struct FpJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
    #[serde(rename = "M")]
    m_bound: Vec<u32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    complex: bool,
}

#[derive(Serialize, Deserialize, Clone)]
struct TermJson {
    m: Vec<i32>,
    c: f64,
    s: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    ci: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    si: f64,
}

impl From<FourierPolynomial> for FpJson {
    fn from(fp: FourierPolynomial) -> Self {
        FpJson {
            vars: fp.vars.clone(),
            terms: fp
                .terms
                .iter()
                .map(|(m, co)| TermJson {
                    m: m.clone(),
                    c: co.c,
                    s: co.s,
                    ci: co.ci,
                    si: co.si,
                })
                .collect(),
            m_bound: fp.mode_bound.clone(),
            complex: fp.complex,
        }
    }
}

impl TryFrom<FpJson> for FourierPolynomial {
    type Error = Error;
    fn try_from(j: FpJson) -> Result<Self> {
        let mut fp = FourierPolynomial::new(j.vars, j.m_bound)?;
        for t in j.terms {
            fp.add_term_complex(&t.m, Complex64::new(t.c, t.ci), Complex64::new(t.s, t.si))?;
        }
        if j.complex {
            fp.complex = true;
        }
        Ok(fp)
    }
}

impl FourierPolynomial {
    pub fn new(vars: Vec<String>, mode_bound: Vec<u32>) -> Result<Self> {
        if vars.len() != mode_bound.len() {
            return Err(Error::invalid("one mode bound per variable"));
        }
        Ok(FourierPolynomial {
            vars,
            mode_bound,
            complex: false,
            terms: BTreeMap::new(),
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn mode_bound(&self) -> &[u32] {
        &self.mode_bound
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Coef)> {
        self.terms.iter()
    }

    pub fn get(&self, m: &[i32]) -> Option<Coef> {
        let (key, flip) = canonical_mode(m);
        self.terms.get(&key).map(|co| {
            if flip {
                Coef {
                    c: co.c,
                    s: -co.s,
                    ci: co.ci,
                    si: -co.si,
                }
            } else {
                *co
            }
        })
    }

    /// Accumulate c cos(m . theta) + s sin(m . theta).
    pub fn add_term(&mut self, m: &[i32], c: f64, s: f64) -> Result<()> {
        self.add_term_complex(m, Complex64::new(c, 0.0), Complex64::new(s, 0.0))
    }

    pub fn add_term_complex(&mut self, m: &[i32], c: Complex64, s: Complex64) -> Result<()> {
        if m.len() != self.vars.len() {
            return Err(Error::invalid("mode vector length mismatch"));
        }
        for (j, &mj) in m.iter().enumerate() {
            if mj.unsigned_abs() > self.mode_bound[j] {
                return Err(Error::invalid(format!(
                    "|m_{j}| = {} exceeds bound {}",
                    mj.unsigned_abs(),
                    self.mode_bound[j]
                )));
            }
        }
        let (key, flip) = canonical_mode(m);
        let s = if flip { -s } else { s };
        let zero_mode = key.iter().all(|&v| v == 0);
        let entry = self.terms.entry(key).or_default();
        entry.c += c.re;
        entry.ci += c.im;
        if !zero_mode {
            entry.s += s.re;
            entry.si += s.im;
        }
        if c.im != 0.0 || s.im != 0.0 {
            self.complex = true;
        }
        Ok(())
    }

    /// Drop coefficients below `rel_tol` times the largest coefficient.
    pub fn prune(&mut self, rel_tol: f64) {
        let max = self
            .terms
            .values()
            .map(|c| c.max_abs())
            .fold(0.0_f64, f64::max);
        let tol = rel_tol * max;
        self.terms.retain(|_, co| !co.is_negligible(tol));
    }

    /// Evaluate at an angle assignment (one angle per variable, in order).
    pub fn evaluate(&self, theta: &[f64]) -> Result<f64> {
        if self.complex {
            return Err(Error::invalid(
                "polynomial has complex coefficients; use evaluate_complex",
            ));
        }
        Ok(self.evaluate_complex(theta)?.re)
    }

    pub fn evaluate_complex(&self, theta: &[f64]) -> Result<Complex64> {
        if theta.len() != self.vars.len() {
            return Err(Error::invalid(format!(
                "assignment covers {} of {} variables",
                theta.len(),
                self.vars.len()
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, co) in &self.terms {
            let phase: f64 = m.iter().zip(theta).map(|(&mj, &th)| mj as f64 * th).sum();
            let (sin, cos) = phase.sin_cos();
            acc += Complex64::new(co.c, co.ci) * cos + Complex64::new(co.s, co.si) * sin;
        }
        Ok(acc)
    }
}

/// Canonical representative: flip the whole vector so its first nonzero
/// entry is positive. Returns (key, flipped).
pub fn canonical_mode(m: &[i32]) -> (Vec<i32>, bool) {
    match m.iter().find(|&&v| v != 0) {
        Some(&v) if v < 0 => (m.iter().map(|&x| -x).collect(), true),
        _ => (m.to_vec(), false),
    }
}

/// Iterate multi-indices 0..dims[j] in odometer order.
pub(crate) struct GridIter {
    dims: Vec<usize>,
    idx: Vec<usize>,
    done: bool,
}

impl GridIter {
    pub fn new(dims: &[usize]) -> Self {
        GridIter {
            dims: dims.to_vec(),
            idx: vec![0; dims.len()],
            done: dims.iter().any(|&d| d == 0),
        }
    }
}

impl Iterator for GridIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let mut k = 0;
        loop {
            if k == self.dims.len() {
                self.done = true;
                break;
            }
            self.idx[k] += 1;
            if self.idx[k] < self.dims[k] {
                break;
            }
            self.idx[k] = 0;
            k += 1;
        }
        Some(out)
    }
}

/// Result of a numerical expansion: the polynomial plus the measured
/// maximum deviation |h - poly| over the expansion grid.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub poly: FourierPolynomial,
    pub residual: f64,
}

pub const DEFAULT_PRUNE_TOL: f64 = 1e-12;

/// Fourier-expand a real function of K angles by the K-dimensional discrete
/// transform on a uniform tensor grid with `nodes` points per axis
/// (`nodes >= 2 M_j + 1` for every j).
pub fn fourier_expand<F>(h: F, m_bounds: &[u32], nodes: usize) -> Result<Expansion>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fourier_expand_with(h, m_bounds, nodes, DEFAULT_PRUNE_TOL)
}

pub fn fourier_expand_with<F>(
    h: F,
    m_bounds: &[u32],
    nodes: usize,
    prune_tol: f64,
) -> Result<Expansion>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let g = |theta: &[f64]| Complex64::new(h(theta), 0.0);
    fourier_expand_complex_with(g, m_bounds, nodes, prune_tol)
}

/// Expansion of a complex-valued function; used by the constrained-model
/// reduction where the effective Hamiltonian picks up imaginary parts.
pub fn fourier_expand_complex_with<F>(
    h: F,
    m_bounds: &[u32],
    nodes: usize,
    prune_tol: f64,
) -> Result<Expansion>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let k = m_bounds.len();
    if k == 0 {
        return Err(Error::invalid("expansion needs at least one variable"));
    }
    let mmax = m_bounds.iter().copied().max().unwrap_or(0) as usize;
    if nodes < 2 * mmax + 1 {
        return Err(Error::invalid(format!(
            "nodes = {nodes} < 2 M + 1 = {}",
            2 * mmax + 1
        )));
    }
    // Uniform tensor grid theta = -pi + 2 pi k / n.
    let axis: Vec<f64> = (0..nodes)
        .map(|i| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / nodes as f64)
        .collect();
    let grid_points: Vec<Vec<usize>> = GridIter::new(&vec![nodes; k]).collect();
    let values: Vec<Complex64> = grid_points
        .iter()
        .map(|ix| {
            let theta: Vec<f64> = ix.iter().map(|&i| axis[i]).collect();
            h(&theta)
        })
        .collect();
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NonFinite("function value on expansion grid".into()));
    }
    let n_total = values.len() as f64;

    // Canonical modes of the box (zero vector plus one of each +-m pair).
    let dims: Vec<usize> = m_bounds.iter().map(|&m| 2 * m as usize + 1).collect();
    let modes: Vec<Vec<i32>> = GridIter::new(&dims)
        .map(|ix| {
            ix.iter()
                .zip(m_bounds)
                .map(|(&i, &m)| i as i32 - m as i32)
                .collect::<Vec<i32>>()
        })
        .filter(|m| !canonical_mode(m).1)
        .collect();

    use rayon::prelude::*;
    let coefs: Vec<(Vec<i32>, Complex64, Complex64)> = modes
        .par_iter()
        .map(|m| {
            let mut s_minus = Complex64::new(0.0, 0.0); // sum h e^{-i m theta}
            let mut s_plus = Complex64::new(0.0, 0.0); // sum h e^{+i m theta}
            for (ix, &v) in grid_points.iter().zip(values.iter()) {
                let phase: f64 = ix
                    .iter()
                    .zip(m.iter())
                    .map(|(&i, &mj)| mj as f64 * axis[i])
                    .sum();
                let (sin, cos) = phase.sin_cos();
                let em = Complex64::new(cos, -sin);
                s_minus += v * em;
                s_plus += v * em.conj();
            }
            let hm = s_minus / n_total; // coefficient of e^{+i m theta}
            let hmneg = s_plus / n_total; // coefficient of e^{-i m theta}
            if m.iter().all(|&v| v == 0) {
                (m.clone(), hm, Complex64::new(0.0, 0.0))
            } else {
                let c = hm + hmneg;
                let s = Complex64::new(0.0, 1.0) * (hm - hmneg);
                (m.clone(), c, s)
            }
        })
        .collect();

    let vars = (0..k).map(|j| format!("x{j}")).collect();
    let mut poly = FourierPolynomial::new(vars, m_bounds.to_vec())?;
    for (m, c, s) in coefs {
        poly.add_term_complex(&m, c, s)?;
    }
    poly.prune(prune_tol);

    let residual = grid_points
        .iter()
        .zip(values.iter())
        .map(|(ix, &v)| {
            let theta: Vec<f64> = ix.iter().map(|&i| axis[i]).collect();
            (poly.evaluate_complex(&theta).unwrap() - v).norm()
        })
        .fold(0.0_f64, f64::max);
    Ok(Expansion { poly, residual })
}

/// Measured sup-norm truncation error sup |F_M[h] - h| on a probe grid at
/// least four times denser than the expansion grid. The expansion itself is
/// done on a grid dense enough that aliasing is negligible next to the
/// truncation tail.
pub fn truncation_bound<F>(h: F, m_bounds: &[u32], probe_nodes: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let mmax = m_bounds.iter().copied().max().unwrap_or(0) as usize;
    // Dense enough that aliased coefficients sit far below the truncation
    // tail being measured.
    let n_exp = 8 * (2 * mmax + 1) + 1;
    let expansion = fourier_expand_with(&h, m_bounds, n_exp, 0.0)?;
    let k = m_bounds.len();
    let n_probe = probe_nodes.max(4 * n_exp);
    let axis: Vec<f64> = (0..n_probe)
        .map(|i| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / n_probe as f64)
        .collect();
    let mut worst = 0.0_f64;
    for ix in GridIter::new(&vec![n_probe; k]) {
        let theta: Vec<f64> = ix.iter().map(|&i| axis[i]).collect();
        let d = (expansion.poly.evaluate_complex(&theta).unwrap().re - h(&theta)).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Per-mode couplings J^c_m, J^s_m of the host theory, obtained from the
/// Fourier coefficients times -beta so that the LGT exponent reproduces
/// -beta H exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CouplingAssignment {
    pub vars: Vec<String>,
    pub beta: f64,
    pub terms: Vec<CouplingTerm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CouplingTerm {
    pub m: Vec<i32>,
    pub jc: f64,
    pub js: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub jci: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub jsi: f64,
}

/// J^c_m = -beta Re H_m and J^s_m = +beta Im H_m in the paper's complex
/// normalization; in the real cos/sin form stored here that is
/// jc = -beta c and js = -beta s.
pub fn to_couplings(fp: &FourierPolynomial, beta: f64) -> Result<CouplingAssignment> {
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::invalid(format!("beta = {beta} must be positive")));
    }
    let terms = fp
        .terms()
        .map(|(m, co)| CouplingTerm {
            m: m.clone(),
            jc: -beta * co.c,
            js: -beta * co.s,
            jci: -beta * co.ci,
            jsi: -beta * co.si,
        })
        .collect();
    Ok(CouplingAssignment {
        vars: fp.vars().to_vec(),
        beta,
        terms,
    })
}

impl CouplingAssignment {
    /// The host exponent sum J^c cos + J^s sin at an angle assignment;
    /// equals -beta H.
    pub fn exponent(&self, theta: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let phase: f64 = t.m.iter().zip(theta).map(|(&mj, &th)| mj as f64 * th).sum();
                let (sin, cos) = phase.sin_cos();
                t.jc * cos + t.js * sin
            })
            .sum()
    }

    /// The constant (zero-mode) part, reported as a free-energy offset.
    pub fn constant_offset(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.m.iter().all(|&v| v == 0))
            .map(|t| t.jc)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    #[test]
    fn normalize_identity_and_unit_interval() {
        let specs =
            normalize(&[(-std::f64::consts::PI, std::f64::consts::PI), (0.0, 1.0)]).unwrap();
        assert!((specs[0].to_angle(1.2) - 1.2).abs() < 1e-15);
        assert!((specs[0].norm_factor() - 1.0).abs() < 1e-15);
        // [0,1]: theta = 2 pi (x - 1/2); x = 0.75 -> pi/2
        assert!((specs[1].to_angle(0.75) - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!((specs[1].norm_factor() - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-16);
        // Round trip to 1e-14.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = rng.gen_range(0.0..1.0);
            assert!((specs[1].from_angle(specs[1].to_angle(x)) - x).abs() < 1e-14);
        }
        assert!(normalize(&[(2.0, 1.0)]).is_err());
        assert!(normalize(&[(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn expand_xy_pair_is_exact() {
        let j = 1.7;
        let e = fourier_expand(|t: &[f64]| -j * (t[0] - t[1]).cos(), &[1, 1], 5).unwrap();
        assert_eq!(e.poly.n_terms(), 1);
        let co = e.poly.get(&[1, -1]).unwrap();
        assert!((co.c + j).abs() < 1e-12);
        assert!(co.s.abs() < 1e-12);
        assert!(e.residual < 1e-12);
    }

    #[test]
    fn expand_theta_squared_matches_closed_form() {
        // theta^2 = pi^2/3 + sum_n 4 (-1)^n / n^2 cos(n theta); dense grid so
        // aliasing is far below the oracle comparison tolerance.
        let e = fourier_expand(|t: &[f64]| t[0] * t[0], &[10], 4001).unwrap();
        let c0 = e.poly.get(&[0]).unwrap().c;
        assert!((c0 - std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-5);
        for n in 1..=10i32 {
            let want = 4.0 * (-1.0_f64).powi(n) / (n * n) as f64;
            let co = e.poly.get(&[n]).unwrap();
            assert!((co.c - want).abs() < 1e-5, "n={n}: {} vs {want}", co.c);
            assert!(co.s.abs() < 1e-10);
        }
        assert!(e.residual > 0.01, "truncation shows up in the residual");
    }

    #[test]
    fn expand_sine_mode() {
        let e = fourier_expand(|t: &[f64]| (3.0 * t[0]).sin(), &[3], 7).unwrap();
        assert_eq!(e.poly.n_terms(), 1);
        let co = e.poly.get(&[3]).unwrap();
        assert!(co.c.abs() < 1e-12);
        assert!((co.s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expansion_rejects_bad_input() {
        assert!(fourier_expand(|t: &[f64]| t[0], &[5], 7).is_err()); // nodes < 2M+1
        assert!(fourier_expand(|t: &[f64]| 0.0 / (t[0] - t[0]), &[1], 5).is_err()); // NaN
    }

    #[test]
    fn truncation_exact_for_low_modes() {
        let err = truncation_bound(|t: &[f64]| (2.0 * t[0]).cos(), &[2], 64).unwrap();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn truncation_tail_ratio_for_theta_squared() {
        // Tail-sum oracle: sup error = sum_{n>M} 4/n^2, so halving comes
        // from doubling M.
        let e10 = truncation_bound(|t: &[f64]| t[0] * t[0], &[10], 400).unwrap();
        let e20 = truncation_bound(|t: &[f64]| t[0] * t[0], &[20], 400).unwrap();
        let tail = |m: i32| -> f64 { (m + 1..2000).map(|n| 4.0 / (n * n) as f64).sum() };
        assert!(
            (e10 / tail(10) - 1.0).abs() < 0.05,
            "e10={e10} vs {}",
            tail(10)
        );
        assert!((e20 / tail(20) - 1.0).abs() < 0.05);
        let ratio = e10 / e20;
        assert!((ratio - 2.0).abs() < 0.3, "ratio {ratio}");
        assert!(e10 <= 0.45);
    }

    #[test]
    fn truncation_monotone_under_doubling() {
        for f in [
            (|t: &[f64]| (t[0].cos() + 0.3).exp()) as fn(&[f64]) -> f64,
            |t: &[f64]| 1.0 / (2.0 + t[0].sin()),
        ] {
            let e4 = truncation_bound(f, &[4], 200).unwrap();
            let e8 = truncation_bound(f, &[8], 200).unwrap();
            assert!(e8 <= e4 + 1e-9, "{e8} vs {e4}");
        }
    }

    #[test]
    fn parity_of_coefficients() {
        let even = fourier_expand(|t: &[f64]| t[0].cos() * t[0].cos(), &[4], 33).unwrap();
        for (_, co) in even.poly.terms() {
            assert!(co.s.abs() < 1e-10);
        }
        let odd =
            fourier_expand(|t: &[f64]| t[0].sin() * 0.7 + (2.0 * t[0]).sin(), &[4], 33).unwrap();
        for (_, co) in odd.poly.terms() {
            assert!(co.c.abs() < 1e-10);
        }
    }

    #[test]
    fn linearity_of_expansion() {
        let alpha = 2.5;
        let h1 = |t: &[f64]| (t[0] - t[1]).cos();
        let h2 = |t: &[f64]| (2.0 * t[0]).sin() * t[1].cos();
        let combined = fourier_expand(|t: &[f64]| alpha * h1(t) + h2(t), &[2, 2], 11).unwrap();
        let e1 = fourier_expand(h1, &[2, 2], 11).unwrap();
        let e2 = fourier_expand(h2, &[2, 2], 11).unwrap();
        for (m, co) in combined.poly.terms() {
            let a = e1.poly.get(m).unwrap_or_default();
            let b = e2.poly.get(m).unwrap_or_default();
            assert!((co.c - (alpha * a.c + b.c)).abs() < 1e-10);
            assert!((co.s - (alpha * a.s + b.s)).abs() < 1e-10);
        }
    }

    #[test]
    fn dft_reproduces_trig_polynomials_on_grid() {
        let h = |t: &[f64]| 0.4 + (t[0]).cos() - 2.0 * (2.0 * t[0] + t[1]).sin();
        let e = fourier_expand(h, &[2, 1], 5).unwrap();
        assert!(e.residual < 1e-10, "{}", e.residual);
    }

    #[test]
    fn couplings_sign_convention() {
        // XY pair: c = -J  ->  J^c = +J at beta = 1.
        let mut fp = FourierPolynomial::new(vec!["a".into(), "b".into()], vec![1, 1]).unwrap();
        fp.add_term(&[1, -1], -2.0, 0.0).unwrap();
        let ca = to_couplings(&fp, 1.0).unwrap();
        assert_eq!(ca.terms.len(), 1);
        assert_eq!(ca.terms[0].jc, 2.0);
        // Im H = 0.5 at m = (2,) means s = -0.5; beta = 2 -> J^s = +1.
        let mut fp2 = FourierPolynomial::new(vec!["a".into()], vec![2]).unwrap();
        fp2.add_term(&[2], 0.0, -0.5).unwrap();
        let ca2 = to_couplings(&fp2, 2.0).unwrap();
        assert_eq!(ca2.terms[0].js, 1.0);
        // Constant-only polynomial: reported as an exponent offset.
        let mut fp3 = FourierPolynomial::new(vec!["a".into()], vec![0]).unwrap();
        fp3.add_term(&[0], 3.0, 0.0).unwrap();
        let ca3 = to_couplings(&fp3, 1.0).unwrap();
        assert_eq!(ca3.constant_offset(), -3.0);
        assert!(to_couplings(&fp, 0.0).is_err());
    }

    #[test]
    fn coupling_exponent_round_trip() {
        let e = fourier_expand(
            |t: &[f64]| 0.3 * (t[0] + t[1]).cos() - 1.1 * (t[0] - 2.0 * t[1]).sin() + 0.2,
            &[2, 2],
            11,
        )
        .unwrap();
        let beta = 1.7;
        let ca = to_couplings(&e.poly, beta).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let theta: Vec<f64> = (0..2)
                .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            let lhs = ca.exponent(&theta);
            let rhs = -beta * e.poly.evaluate(&theta).unwrap();
            assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn evaluate_basics() {
        let mut fp = FourierPolynomial::new(vec!["a".into()], vec![3]).unwrap();
        fp.add_term(&[0], 0.5, 0.0).unwrap();
        fp.add_term(&[1], 1.0, 0.0).unwrap();
        // all theta = 0 -> sum of cosine coefficients
        assert!((fp.evaluate(&[0.0]).unwrap() - 1.5).abs() < 1e-15);
        // single c = 1 mode at theta = pi/2 -> constant only
        assert!((fp.evaluate(&[std::f64::consts::FRAC_PI_2]).unwrap() - 0.5).abs() < 1e-15);
        assert!(fp.evaluate(&[]).is_err());
    }

    #[test]
    fn theta_squared_partial_sum_value() {
        let e = fourier_expand(|t: &[f64]| t[0] * t[0], &[25], 2001).unwrap();
        let got = e.poly.evaluate(&[std::f64::consts::FRAC_PI_2]).unwrap();
        let want = std::f64::consts::PI.powi(2) / 4.0;
        assert!((got - want).abs() < 5e-3, "{got} vs {want}");
    }

    #[test]
    fn canonicalization_folds_signs() {
        let mut fp = FourierPolynomial::new(vec!["a".into(), "b".into()], vec![2, 2]).unwrap();
        fp.add_term(&[-1, 1], 0.25, 0.75).unwrap();
        let co = fp.get(&[1, -1]).unwrap();
        assert_eq!((co.c, co.s), (0.25, -0.75));
        // Reading back through the flipped key restores the original signs.
        let co2 = fp.get(&[-1, 1]).unwrap();
        assert_eq!((co2.c, co2.s), (0.25, 0.75));
        // Zero mode never stores a sine part.
        let mut fp2 = FourierPolynomial::new(vec!["a".into()], vec![1]).unwrap();
        fp2.add_term(&[0], 1.0, 5.0).unwrap();
        assert_eq!(fp2.get(&[0]).unwrap().s, 0.0);
    }

    #[test]
    fn json_shape_matches_interface() {
        let mut fp = FourierPolynomial::new(vec!["a".into()], vec![2]).unwrap();
        fp.add_term(&[2], 0.0, 1.5).unwrap();
        let j = serde_json::to_value(&fp).unwrap();
        assert!(j.get("vars").is_some());
        assert!(j.get("M").is_some());
        assert_eq!(j["terms"][0]["m"][0], 2);
        let back: FourierPolynomial = serde_json::from_value(j).unwrap();
        assert_eq!(back.get(&[2]).unwrap().s, 1.5);
    }
}
