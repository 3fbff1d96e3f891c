//! Exact rational linear algebra and linear-programming feasibility.
//!
//! Everything here works over arbitrary-precision rationals, so ranks,
//! kernels and feasibility verdicts never depend on a tolerance.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows. All rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged rows passed to RationalMatrix::from_rows"
        );
        let n = rows.len();
        Self {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, col).clone()).collect()
    }

    /// Sub-matrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m.set(i, k, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn sub(&self, other: &RationalMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form and the (strictly increasing) pivot columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.to_rows();
    let pivots = rref_in_place(&mut a, m.cols());
    let reduced = if a.is_empty() {
        RationalMatrix::zeros(0, m.cols())
    } else {
        RationalMatrix::from_rows(a)
    };
    (reduced, pivots)
}

fn rref_in_place(a: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut().skip(c) {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).1.len()
}

/// Rank of a list of vectors of equal length.
pub fn rank_of_vectors(vectors: &[Vec<Rational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut rows = vectors.to_vec();
    let cols = rows[0].len();
    rref_in_place(&mut rows, cols).len()
}

/// Canonical free-variable basis of the right kernel of `m`.
pub fn nullspace_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let (reduced, pivots) = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -reduced.get(i, f).clone();
            }
            v
        })
        .collect()
}

/// Linear constraints over rational variables: equality rows plus optional
/// per-variable bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem {
    num_vars: usize,
    equalities: Vec<(Vec<Rational>, Rational)>,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
}

/// Outcome of [`lp_feasible`].
#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn point(self) -> Option<Vec<Rational>> {
        match self {
            Feasibility::Feasible(p) => Some(p),
            Feasibility::Infeasible => None,
        }
    }
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            equalities: Vec::new(),
            lower: vec![None; num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn equalities(&self) -> &[(Vec<Rational>, Rational)] {
        &self.equalities
    }

    pub fn lower(&self, var: usize) -> Option<&Rational> {
        self.lower[var].as_ref()
    }

    pub fn upper(&self, var: usize) -> Option<&Rational> {
        self.upper[var].as_ref()
    }

    /// Adds `coeffs · x = rhs`. Panics if the row has the wrong length.
    pub fn add_equality(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "equality row has wrong length");
        self.equalities.push((coeffs, rhs));
        self
    }

    /// Tightens the lower bound of `var` to `value`.
    pub fn set_lower(&mut self, var: usize, value: Rational) -> &mut Self {
        let slot = &mut self.lower[var];
        match slot {
            Some(cur) if *cur >= value => {}
            _ => *slot = Some(value),
        }
        self
    }

    /// Tightens the upper bound of `var` to `value`.
    pub fn set_upper(&mut self, var: usize, value: Rational) -> &mut Self {
        let slot = &mut self.upper[var];
        match slot {
            Some(cur) if *cur <= value => {}
            _ => *slot = Some(value),
        }
        self
    }

    pub fn fix(&mut self, var: usize, value: Rational) -> &mut Self {
        self.set_lower(var, value.clone());
        self.set_upper(var, value)
    }

    /// Exact check of every constraint at `point`.
    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars {
            return false;
        }
        let bounds_ok = point.iter().enumerate().all(|(j, x)| {
            self.lower[j].as_ref().is_none_or(|l| x >= l)
                && self.upper[j].as_ref().is_none_or(|u| x <= u)
        });
        bounds_ok
            && self.equalities.iter().all(|(row, rhs)| {
                let lhs = row
                    .iter()
                    .zip(point)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, x)| acc + a * x);
                &lhs == rhs
            })
    }
}

/// Decides feasibility of `sys` exactly with a phase-1 simplex method using
/// Bland's rule; a feasible verdict carries a point satisfying every
/// constraint.
pub fn lp_feasible(sys: &LinearSystem) -> Feasibility {
    let n = sys.num_vars;
    for j in 0..n {
        if let (Some(l), Some(u)) = (&sys.lower[j], &sys.upper[j]) {
            if l > u {
                return Feasibility::Infeasible;
            }
        }
    }

    // Each original variable becomes offset + sum(sign * y_col) with y >= 0.
    let mut offset = vec![Rational::zero(); n];
    let mut var_cols: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    let mut ncols = 0usize;
    // (column, capacity) for variables bounded on both sides
    let mut capped: Vec<(usize, Rational)> = Vec::new();
    for j in 0..n {
        match (&sys.lower[j], &sys.upper[j]) {
            (Some(l), Some(u)) if l == u => offset[j] = l.clone(),
            (Some(l), Some(u)) => {
                offset[j] = l.clone();
                var_cols[j].push((ncols, true));
                capped.push((ncols, u - l));
                ncols += 1;
            }
            (Some(l), None) => {
                offset[j] = l.clone();
                var_cols[j].push((ncols, true));
                ncols += 1;
            }
            (None, Some(u)) => {
                offset[j] = u.clone();
                var_cols[j].push((ncols, false));
                ncols += 1;
            }
            (None, None) => {
                var_cols[j].push((ncols, true));
                var_cols[j].push((ncols + 1, false));
                ncols += 2;
            }
        }
    }
    let slack_base = ncols;
    ncols += capped.len();

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for (coeffs, b) in &sys.equalities {
        let mut row = vec![Rational::zero(); ncols];
        let mut target = b.clone();
        for (j, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !offset[j].is_zero() {
                target -= a * &offset[j];
            }
            for &(c, positive) in &var_cols[j] {
                if positive {
                    row[c] += a;
                } else {
                    row[c] -= a;
                }
            }
        }
        if row.iter().all(Zero::is_zero) {
            if target.is_zero() {
                continue;
            }
            return Feasibility::Infeasible;
        }
        if target.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            target = -target;
        }
        rows.push(row);
        rhs.push(target);
    }
    let num_eq = rows.len();
    for (k, (c, cap)) in capped.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols];
        row[*c] = Rational::one();
        row[slack_base + k] = Rational::one();
        rows.push(row);
        rhs.push(cap.clone());
    }

    let values = match phase_one(rows, rhs, num_eq, slack_base, ncols) {
        Some(v) => v,
        None => return Feasibility::Infeasible,
    };

    let point: Vec<Rational> = (0..n)
        .map(|j| {
            var_cols[j]
                .iter()
                .fold(offset[j].clone(), |acc, &(c, positive)| {
                    if positive {
                        acc + &values[c]
                    } else {
                        acc - &values[c]
                    }
                })
        })
        .collect();
    debug_assert!(sys.is_satisfied_by(&point));
    Feasibility::Feasible(point)
}

/// Phase-1 simplex on `rows · y = rhs`, `y >= 0`, `rhs >= 0`. The first
/// `num_eq` rows get artificial variables; the remaining rows start with
/// their slack column (`slack_base + k`) basic. Returns the values of the
/// `ncols` structural columns when the system is feasible.
fn phase_one(
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    num_eq: usize,
    slack_base: usize,
    ncols: usize,
) -> Option<Vec<Rational>> {
    let m = rows.len();
    let width = ncols + num_eq + 1;
    let rhs_col = width - 1;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, (mut row, b)) in rows.into_iter().zip(rhs).enumerate() {
        row.resize(width, Rational::zero());
        if i < num_eq {
            row[ncols + i] = Rational::one();
            basis.push(ncols + i);
        } else {
            basis.push(slack_base + (i - num_eq));
        }
        row[rhs_col] = b;
        tab.push(row);
    }

    // Reduced costs of the phase-1 objective (sum of artificials).
    let mut cost = vec![Rational::zero(); width];
    for row in tab.iter().take(num_eq) {
        for (c, v) in row.iter().enumerate() {
            if (c < ncols || c == rhs_col) && !v.is_zero() {
                cost[c] -= v;
            }
        }
    }

    // Bland: lowest-index column with negative reduced cost.
    while let Some(enter) = (0..ncols).find(|&c| cost[c].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in tab.iter().enumerate() {
            let a = &row[enter];
            if !a.is_positive() {
                continue;
            }
            let ratio = &row[rhs_col] / a;
            leave = match leave {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < br || (ratio == br && basis[i] < basis[bi]) {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        // Phase 1 is bounded below by zero, so an entering column always has
        // a positive entry somewhere.
        let (pr, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut tab, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    if !cost[rhs_col].is_zero() {
        return None;
    }
    let mut values = vec![Rational::zero(); ncols];
    for (i, &b) in basis.iter().enumerate() {
        if b < ncols {
            values[b] = tab[i][rhs_col].clone();
        }
    }
    Some(values)
}

fn pivot(tab: &mut [Vec<Rational>], cost: &mut [Rational], pr: usize, pc: usize) {
    let inv = tab[pr][pc].recip();
    for v in tab[pr].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let prow = tab[pr].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&c| !prow[c].is_zero()).collect();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for &c in &nz {
            row[c] -= &f * &prow[c];
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for &c in &nz {
            cost[c] -= &f * &prow[c];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows)
    }

    fn example_a2_n() -> RationalMatrix {
        mat(&[
            vec![-2, 0, 0, 0, -2],
            vec![0, -1, 1, 1, 0],
            vec![1, 0, 0, 1, 0],
            vec![0, 0, 0, -3, 3],
        ])
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = RationalMatrix::identity(2);
        assert_eq!(rref(&id), (id.clone(), vec![0, 1]));
        let z = RationalMatrix::zeros(2, 3);
        assert_eq!(rref(&z), (z.clone(), vec![]));
        assert_eq!(rank(&z), 0);
    }

    #[test]
    fn appendix_example_ranks() {
        let n = example_a2_n();
        let (reduced, pivots) = rref(&n);
        assert_eq!(pivots.len(), 3);
        assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        // last row of the RREF is zero
        assert!(reduced.row(3).iter().all(Zero::is_zero));
        assert_eq!(rank(&n), 3);
        let n_minus = mat(&[
            vec![2, 0, 0, 0, 2],
            vec![0, 1, 0, 0, 0],
            vec![0, 1, 1, 0, 0],
            vec![0, 0, 0, 3, 0],
        ]);
        assert_eq!(rank(&n_minus), 4);
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace_basis(&RationalMatrix::identity(2)).is_empty());
        let basis = nullspace_basis(&mat(&[vec![1, 1]]));
        assert_eq!(basis, vec![vec![rat(-1), rat(1)]]);
        // {A -> B, B -> A}
        let n = mat(&[vec![-1, 1], vec![1, -1]]);
        assert_eq!(nullspace_basis(&n), vec![vec![rat(1), rat(1)]]);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let n = example_a2_n();
        let basis = nullspace_basis(&n);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(n.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn lp_contradictory_bounds() {
        let mut sys = LinearSystem::new(1);
        sys.set_lower(0, rat(1)).set_upper(0, rat(0));
        assert_eq!(lp_feasible(&sys), Feasibility::Infeasible);
    }

    #[test]
    fn lp_segment() {
        let mut sys = LinearSystem::new(2);
        sys.add_equality(vec![rat(1), rat(1)], rat(1));
        sys.set_lower(0, rat(0)).set_lower(1, rat(0));
        let p = lp_feasible(&sys).point().expect("feasible");
        assert!(sys.is_satisfied_by(&p));
    }

    #[test]
    fn lp_positive_kernel_of_reversible_pair() {
        let mut sys = LinearSystem::new(2);
        sys.add_equality(vec![rat(-1), rat(1)], rat(0));
        sys.add_equality(vec![rat(1), rat(-1)], rat(0));
        sys.set_lower(0, rat(1)).set_lower(1, rat(1));
        let p = lp_feasible(&sys).point().expect("feasible");
        assert_eq!(p[0], p[1]);
        assert!(p[0] >= rat(1));
    }

    #[test]
    fn lp_all_zero_constraints_give_zero_point() {
        let mut sys = LinearSystem::new(3);
        sys.add_equality(vec![rat(0); 3], rat(0));
        assert_eq!(lp_feasible(&sys), Feasibility::Feasible(vec![rat(0); 3]));
    }

    #[test]
    fn lp_inconsistent_equalities() {
        let mut sys = LinearSystem::new(2);
        sys.add_equality(vec![rat(1), rat(1)], rat(1));
        sys.add_equality(vec![rat(2), rat(2)], rat(3));
        assert_eq!(lp_feasible(&sys), Feasibility::Infeasible);
    }

    #[test]
    fn lp_boxed_and_upper_only_variables() {
        // x in [1, 2], y <= -1, x + y = 0  ->  x = 1, y = -1
        let mut sys = LinearSystem::new(2);
        sys.add_equality(vec![rat(1), rat(1)], rat(0));
        sys.set_lower(0, rat(1))
            .set_upper(0, rat(2))
            .set_upper(1, rat(-1));
        let p = lp_feasible(&sys).point().unwrap();
        assert_eq!(p, vec![rat(1), rat(-1)]);
        sys.set_upper(1, rat(-3));
        assert_eq!(lp_feasible(&sys), Feasibility::Infeasible);
    }
}
