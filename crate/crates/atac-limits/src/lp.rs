//! Exact rational simplex.
//!
//! A dense two-phase simplex over arbitrary-precision rationals. Every
//! optimum is exact; identical instances yield identical solutions. The
//! entering variable is the most negative reduced cost with lowest-index tie
//! break; after a run of degenerate pivots the solver switches to Bland's
//! rule, which guarantees termination.

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub cmp: Cmp,
    pub rhs: Rational,
}

/// A linear program over nonnegative variables.
#[derive(Clone, Debug)]
pub struct LinearProgramInstance {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgramInstance {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn check(&self) {
        for c in &self.constraints {
            assert_eq!(
                c.coeffs.len(),
                self.objective.len(),
                "constraint width mismatch"
            );
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Exact optimal value; zero unless status is Optimal.
    pub value: Rational,
    /// Optimal assignment of the structural variables.
    pub primal: Vec<Rational>,
    /// Dual value per constraint, in the sign convention of the
    /// maximization form the solver ran.
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

/// Number of degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 40;

struct Tableau {
    /// rows[i] has ncols coefficient entries followed by the rhs.
    rows: Vec<Vec<Rational>>,
    /// Reduced-cost row; last entry is the current objective value.
    zrow: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
    banned: Vec<bool>,
    pivots: usize,
    degenerate_run: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for x in self.rows[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (x, p) in r.iter_mut().zip(pivot_row.iter()) {
                *x = &*x - &(&factor * p);
            }
        }
        if !self.zrow[col].is_zero() {
            let factor = self.zrow[col].clone();
            for (x, p) in self.zrow.iter_mut().zip(pivot_row.iter()) {
                *x = &*x - &(&factor * p);
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Runs simplex iterations to optimality or unboundedness.
    fn optimize(&mut self) -> LpStatus {
        loop {
            let bland = self.degenerate_run >= DEGENERATE_LIMIT;
            let mut entering: Option<usize> = None;
            for j in 0..self.ncols {
                if self.banned[j] || !self.zrow[j].is_negative() {
                    continue;
                }
                match entering {
                    None => entering = Some(j),
                    Some(e) => {
                        if !bland && self.zrow[j] < self.zrow[e] {
                            entering = Some(j);
                        }
                    }
                }
                if bland && entering.is_some() {
                    break;
                }
            }
            let Some(col) = entering else {
                return LpStatus::Optimal;
            };

            // Min-ratio leaving row, ties by lowest basic variable index.
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][self.ncols] / &self.rows[i][col];
                match &leaving {
                    None => leaving = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]) {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
            let Some((row, ratio)) = leaving else {
                return LpStatus::Unbounded;
            };
            if ratio.is_zero() {
                self.degenerate_run += 1;
            } else {
                self.degenerate_run = 0;
            }
            self.pivot(row, col);
        }
    }
}

/// Solves an LP exactly. Infeasibility and unboundedness are reported via
/// the status, never by panicking.
pub fn solve(lp: &LinearProgramInstance) -> LpSolution {
    lp.check();
    let n = lp.num_vars();
    let m = lp.constraints.len();

    // Normalize rows to nonnegative rhs, remembering flips.
    let mut rows_data: Vec<(Vec<Rational>, Cmp, Rational, bool)> = Vec::with_capacity(m);
    for c in &lp.constraints {
        if c.rhs.is_negative() {
            let coeffs = c.coeffs.iter().map(|x| -x).collect();
            let cmp = match c.cmp {
                Cmp::Le => Cmp::Ge,
                Cmp::Ge => Cmp::Le,
                Cmp::Eq => Cmp::Eq,
            };
            rows_data.push((coeffs, cmp, -&c.rhs, true));
        } else {
            rows_data.push((c.coeffs.clone(), c.cmp, c.rhs.clone(), false));
        }
    }

    // Column layout: structural | slack/surplus | artificial.
    let n_extra = rows_data
        .iter()
        .filter(|(_, cmp, _, _)| matches!(cmp, Cmp::Le | Cmp::Ge))
        .count();
    let n_art = rows_data
        .iter()
        .filter(|(_, cmp, _, _)| matches!(cmp, Cmp::Ge | Cmp::Eq))
        .count();
    let ncols = n + n_extra + n_art;

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    // slack/surplus column of each row, artificial column of each row
    let mut slack_col = vec![usize::MAX; m];
    let mut art_col = vec![usize::MAX; m];
    let mut next_extra = n;
    let mut next_art = n + n_extra;
    for (i, (coeffs, cmp, rhs, _)) in rows_data.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols + 1];
        row[..n].clone_from_slice(coeffs);
        row[ncols] = rhs.clone();
        match cmp {
            Cmp::Le => {
                row[next_extra] = Rational::one();
                slack_col[i] = next_extra;
                basis.push(next_extra);
                next_extra += 1;
            }
            Cmp::Ge => {
                row[next_extra] = -Rational::one();
                slack_col[i] = next_extra;
                next_extra += 1;
                row[next_art] = Rational::one();
                art_col[i] = next_art;
                basis.push(next_art);
                next_art += 1;
            }
            Cmp::Eq => {
                row[next_art] = Rational::one();
                art_col[i] = next_art;
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        zrow: vec![Rational::zero(); ncols + 1],
        basis,
        ncols,
        banned: vec![false; ncols],
        pivots: 0,
        degenerate_run: 0,
    };

    // Phase 1: maximize minus the artificial total.
    if n_art > 0 {
        for j in n + n_extra..ncols {
            tab.zrow[j] = Rational::one();
        }
        // Price out the basic artificials.
        for i in 0..m {
            if art_col[i] != usize::MAX {
                let row = tab.rows[i].clone();
                for (z, x) in tab.zrow.iter_mut().zip(row.iter()) {
                    *z = &*z - x;
                }
            }
        }
        let status = tab.optimize();
        debug_assert_ne!(status, LpStatus::Unbounded);
        if !tab.zrow[ncols].is_zero() {
            return LpSolution {
                status: LpStatus::Infeasible,
                value: Rational::zero(),
                primal: vec![Rational::zero(); n],
                dual: vec![Rational::zero(); m],
                pivots: tab.pivots,
            };
        }
        // Drive remaining basic artificials out of the basis.
        for i in 0..m {
            if tab.basis[i] < n + n_extra {
                continue;
            }
            let col = (0..n + n_extra).find(|&j| !tab.rows[i][j].is_zero());
            if let Some(col) = col {
                tab.pivot(i, col);
            }
            // A fully zero row is redundant; its artificial stays basic at
            // value zero and is banned below, which is harmless.
        }
        for j in n + n_extra..ncols {
            tab.banned[j] = true;
        }
    }

    // Phase 2 objective. Artificial columns keep cost 0 so their reduced
    // costs read off the dual multipliers at optimality.
    let maximize: Vec<Rational> = match lp.sense {
        Sense::Maximize => lp.objective.clone(),
        Sense::Minimize => lp.objective.iter().map(|c| -c).collect(),
    };
    tab.degenerate_run = 0;
    for z in tab.zrow.iter_mut() {
        *z = Rational::zero();
    }
    for (j, c) in maximize.iter().enumerate() {
        tab.zrow[j] = -c;
    }
    for i in 0..m {
        let b = tab.basis[i];
        if b < n && !maximize[b].is_zero() {
            let factor = maximize[b].clone();
            let row = tab.rows[i].clone();
            for (z, x) in tab.zrow.iter_mut().zip(row.iter()) {
                *z = &*z + &(&factor * x);
            }
        }
    }

    let status = tab.optimize();
    if status == LpStatus::Unbounded {
        return LpSolution {
            status,
            value: Rational::zero(),
            primal: vec![Rational::zero(); n],
            dual: vec![Rational::zero(); m],
            pivots: tab.pivots,
        };
    }

    let mut primal = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            primal[b] = tab.rows[i][ncols].clone();
        }
    }
    // Dual of row i: reduced cost of its slack (Le) or artificial (Ge/Eq),
    // sign-adjusted for rows that were flipped to normalize the rhs.
    let mut dual = Vec::with_capacity(m);
    for i in 0..m {
        let col = if art_col[i] != usize::MAX {
            art_col[i]
        } else {
            slack_col[i]
        };
        let mut y = tab.zrow[col].clone();
        if rows_data[i].3 {
            y = -y;
        }
        dual.push(y);
    }

    let value = match lp.sense {
        Sense::Maximize => tab.zrow[ncols].clone(),
        Sense::Minimize => -&tab.zrow[ncols],
    };
    LpSolution {
        status: LpStatus::Optimal,
        value,
        primal,
        dual,
        pivots: tab.pivots,
    }
}
