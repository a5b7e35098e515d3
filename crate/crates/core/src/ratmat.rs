//! Exact linear algebra over the rationals.
//!
//! Incidence entries live in {-1, 0, +1} and the constraint systems built by
//! the gadget planner are integer rows, so ranks, determinants and
//! eliminations are all done exactly; no tolerance questions arise.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// An angle expressed as pi * `pi_part` + `rest`, keeping multiples of pi
/// exact. Gauge fixes of 0 and -pi/2 stay exactly representable, which is
/// what makes the effective-Hamiltonian round trip bit-exact.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleValue {
    pub pi_part: Rat,
    pub rest: f64,
}

impl AngleValue {
    pub fn zero() -> Self {
        AngleValue {
            pi_part: Rat::zero(),
            rest: 0.0,
        }
    }

    pub fn pi_multiple(r: Rat) -> Self {
        AngleValue {
            pi_part: r,
            rest: 0.0,
        }
    }

    pub fn minus_half_pi() -> Self {
        AngleValue::pi_multiple(-rat(1) / rat(2))
    }

    pub fn from_radians(x: f64) -> Self {
        AngleValue {
            pi_part: Rat::zero(),
            rest: x,
        }
    }

    pub fn radians(&self) -> f64 {
        rat_to_f64(&self.pi_part) * std::f64::consts::PI + self.rest
    }

    pub fn is_zero(&self) -> bool {
        self.pi_part.is_zero() && self.rest == 0.0
    }

    pub fn scale(&self, c: &Rat) -> AngleValue {
        AngleValue {
            pi_part: &self.pi_part * c,
            rest: self.rest * rat_to_f64(c),
        }
    }

    pub fn add(&self, other: &AngleValue) -> AngleValue {
        AngleValue {
            pi_part: &self.pi_part + &other.pi_part,
            rest: self.rest + other.rest,
        }
    }

    /// cos/sin of the angle; exact (+-1, 0) when the angle is an exact
    /// multiple of pi/2, so gadget phases never pick up rounding.
    pub fn cos_sin(&self) -> (f64, f64) {
        if self.rest == 0.0 {
            let two = rat(2);
            let q = &self.pi_part * &two; // angle = q * (pi/2)
            if q.is_integer() {
                let r = q.to_integer() % BigInt::from(4);
                let r = ((r.clone() + BigInt::from(4)) % BigInt::from(4))
                    .try_into()
                    .unwrap_or(0u32);
                return match r {
                    0 => (1.0, 0.0),
                    1 => (0.0, 1.0),
                    2 => (-1.0, 0.0),
                    _ => (0.0, -1.0),
                };
            }
        }
        let x = self.radians();
        (x.cos(), x.sin())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // Exact for the small rationals the planner produces.
    bigint_to_f64(n) / bigint_to_f64(d)
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    let s = b.to_string();
    s.parse::<f64>().unwrap_or(f64::NAN)
}

/// Dense rational matrix; rows are faces, columns edges, at desk scale.
#[derive(Debug, Clone)]
pub struct RatMatrix {
    pub rows: Vec<Vec<Rat>>,
    pub ncols: usize,
}

impl RatMatrix {
    pub fn from_i64(data: &[Vec<i64>], ncols: usize) -> Self {
        RatMatrix {
            rows: data
                .iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
            ncols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Gaussian elimination with deterministic pivoting (first usable row,
    /// smallest column). Returns rank, pivot columns, and the indices of the
    /// rows that form a maximal independent set (in input order).
    pub fn rank_profile(&self) -> RankProfile {
        let mut work: Vec<Vec<Rat>> = self.rows.clone();
        let n = work.len();
        let mut pivot_cols = Vec::new();
        let mut independent = Vec::new();
        let mut used = vec![false; n];
        for col in 0..self.ncols {
            // Smallest-index unused row with a nonzero in this column after
            // reduction by previous pivots.
            let mut sel = None;
            for (ri, row) in work.iter().enumerate() {
                if !used[ri] && !row[col].is_zero() {
                    sel = Some(ri);
                    break;
                }
            }
            let Some(p) = sel else { continue };
            used[p] = true;
            independent.push(p);
            pivot_cols.push(col);
            let pivot_val = work[p][col].clone();
            let prow: Vec<Rat> = work[p].iter().map(|v| v / &pivot_val).collect();
            for (ri, row) in work.iter_mut().enumerate() {
                if ri != p && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (c, v) in row.iter_mut().enumerate() {
                        *v = &*v - &(&f * &prow[c]);
                    }
                }
            }
            work[p] = prow;
        }
        independent.sort_unstable();
        let dependent = (0..n).filter(|i| !used[*i]).collect();
        RankProfile {
            rank: pivot_cols.len(),
            pivot_cols,
            independent_rows: independent,
            dependent_rows: dependent,
        }
    }

    /// |det| of a square matrix, exact.
    pub fn det_abs(&self) -> Result<Rat> {
        if self.nrows() != self.ncols {
            return Err(Error::invalid("det of a non-square matrix"));
        }
        let n = self.ncols;
        let mut work = self.rows.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let mut sel = None;
            for (ri, row) in work.iter().enumerate().skip(col) {
                if !row[col].is_zero() {
                    sel = Some(ri);
                    break;
                }
            }
            let Some(p) = sel else {
                return Ok(Rat::zero());
            };
            if p != col {
                work.swap(p, col);
            }
            let pv = work[col][col].clone();
            det *= &pv;
            for ri in (col + 1)..n {
                if !work[ri][col].is_zero() {
                    let f = &work[ri][col] / &pv;
                    for c in col..n {
                        let sub = &f * &work[col][c];
                        work[ri][c] = &work[ri][c] - &sub;
                    }
                }
            }
        }
        Ok(det.abs())
    }
}

#[derive(Debug, Clone)]
pub struct RankProfile {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub independent_rows: Vec<usize>,
    pub dependent_rows: Vec<usize>,
}

/// A sparse rational row keyed by column index.
pub type SparseRow = BTreeMap<usize, Rat>;

pub fn sparse_from_signed(entries: &[(usize, i64)]) -> SparseRow {
    let mut row = SparseRow::new();
    for &(col, v) in entries {
        if v != 0 {
            let e = row.entry(col).or_insert_with(Rat::zero);
            *e += rat(v);
            if e.is_zero() {
                row.remove(&col);
            }
        }
    }
    row
}

/// Incrementally built reduced row echelon form with exact right-hand
/// sides. Pivots avoid a caller-protected column set whenever possible, so
/// designated target-variable edges stay free.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    /// (pivot column, row normalized to pivot 1, rhs). Rows are mutually
    /// reduced: no row contains another's pivot column.
    rows: Vec<(usize, SparseRow, AngleValue)>,
}

#[derive(Debug, PartialEq, Eq)]
pub enum AddOutcome {
    Added,
    Redundant,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(p, _, _)| *p)
    }

    /// Reduce (row, rhs) by the current pivots; the result contains no pivot
    /// columns.
    pub fn reduce(&self, mut row: SparseRow, mut rhs: AngleValue) -> (SparseRow, AngleValue) {
        for (piv, prow, prhs) in &self.rows {
            if let Some(c) = row.get(piv).cloned() {
                if c.is_zero() {
                    row.remove(piv);
                    continue;
                }
                // row -= c * prow ; rhs -= c * prhs
                for (col, v) in prow {
                    let delta = &c * v;
                    let e = row.entry(*col).or_insert_with(Rat::zero);
                    *e = &*e - &delta;
                    if e.is_zero() {
                        row.remove(col);
                    }
                }
                let neg = -c.clone();
                rhs = rhs.add(&prhs.scale(&neg));
            }
        }
        (row, rhs)
    }

    /// Add the constraint row . theta = rhs. `protected` columns are used as
    /// pivots only if no other column is available; in that case an error is
    /// returned (the planner must never constrain a designated variable).
    pub fn add_row(
        &mut self,
        row: SparseRow,
        rhs: AngleValue,
        protected: &dyn Fn(usize) -> bool,
    ) -> Result<AddOutcome> {
        let (row, rhs) = self.reduce(row, rhs);
        if row.is_empty() {
            if rhs.pi_part.is_zero() && rhs.rest.abs() < 1e-12 {
                return Ok(AddOutcome::Redundant);
            }
            return Err(Error::Inconsistent(format!(
                "0 = {} after reduction",
                rhs.radians()
            )));
        }
        // Deterministic pivot: smallest unprotected column, else fail.
        let piv = match row.keys().copied().find(|c| !protected(*c)) {
            Some(p) => p,
            None => {
                return Err(Error::Inconsistent(
                    "constraint closes over protected (target-variable) edges only".into(),
                ))
            }
        };
        let pval = row[&piv].clone();
        let norm_row: SparseRow = row.iter().map(|(c, v)| (*c, v / &pval)).collect();
        let inv = Rat::one() / &pval;
        let norm_rhs = rhs.scale(&inv);
        // Back-substitute into existing rows to keep full RREF.
        for (_, r, rv) in self.rows.iter_mut() {
            if let Some(c) = r.get(&piv).cloned() {
                for (col, v) in &norm_row {
                    let delta = &c * v;
                    let e = r.entry(*col).or_insert_with(Rat::zero);
                    *e = &*e - &delta;
                    if e.is_zero() {
                        r.remove(col);
                    }
                }
                let neg = -c;
                *rv = rv.add(&norm_rhs.scale(&neg));
            }
        }
        self.rows.push((piv, norm_row, norm_rhs));
        Ok(AddOutcome::Added)
    }
}

/// Primitive integer basis of {n : M^T n = 0} for an integer matrix given
/// in row-major form (rows index the vector entries of n).
pub fn integer_null_basis(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    // Solve n^T M = 0: treat each column of M as a linear functional on n.
    let nvars = rows.len();
    // Build the system: for each col c: sum_r n_r M[r][c] = 0.
    let mut ech: Vec<(usize, Vec<Rat>)> = Vec::new(); // (pivot var, coeffs over nvars)
    for c in 0..ncols {
        let mut row: Vec<Rat> = (0..nvars).map(|r| rat(rows[r][c])).collect();
        for (piv, prow) in &ech {
            if !row[*piv].is_zero() {
                let f = row[*piv].clone();
                for (v, pv) in row.iter_mut().zip(prow.iter()) {
                    *v = &*v - &(&f * pv);
                }
            }
        }
        if let Some(piv) = row.iter().position(|v| !v.is_zero()) {
            let pv = row[piv].clone();
            for v in row.iter_mut() {
                *v = &*v / &pv;
            }
            for (_, prow) in ech.iter_mut() {
                if !prow[piv].is_zero() {
                    let f = prow[piv].clone();
                    for (v, rv) in prow.iter_mut().zip(row.iter()) {
                        *v = &*v - &(&f * rv);
                    }
                }
            }
            ech.push((piv, row));
        }
    }
    let pivots: Vec<usize> = ech.iter().map(|(p, _)| *p).collect();
    let free: Vec<usize> = (0..nvars).filter(|v| !pivots.contains(v)).collect();
    let mut basis = Vec::new();
    for &fv in &free {
        let mut vec_r: Vec<Rat> = vec![Rat::zero(); nvars];
        vec_r[fv] = Rat::one();
        for (piv, prow) in &ech {
            // pivot + sum_{free} coeff * free = 0  =>  pivot = -coeff
            vec_r[*piv] = -prow[fv].clone();
        }
        // Scale to a primitive integer vector.
        let mut denom_lcm = BigInt::one();
        for v in &vec_r {
            denom_lcm = num_integer::lcm(denom_lcm, v.denom().clone());
        }
        let ints: Vec<BigInt> = vec_r
            .iter()
            .map(|v| v.numer() * (&denom_lcm / v.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = num_integer::gcd(g, v.abs());
        }
        if g.is_zero() {
            continue;
        }
        let out: Vec<i64> = ints
            .iter()
            .map(|v| {
                let q = v / &g;
                i64::try_from(q).expect("null basis entry fits i64")
            })
            .collect();
        basis.push(out);
    }
    basis
}
