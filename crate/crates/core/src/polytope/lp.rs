//! Exact two-phase simplex on a dense rational tableau with Bland's rule.
//!
//! Problems take the standard form `minimize c·x` subject to `A x = b`, `x ≥ 0`.

use num::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    /// `y` with `yᵀA ≤ 0` componentwise and `yᵀb > 0`.
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

struct Tableau {
    /// `m` rows of `n + m + 1` entries: originals, artificials, right-hand side.
    t: Vec<Vec<Rational>>,
    /// Reduced costs over all columns, then the negated objective value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
    n: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.t.first().map_or(0, |r| r.len() - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule over columns `< limit`; returns false if unbounded.
    fn optimize(&mut self, limit: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(c) = (0..limit).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.t[i][rhs] / &self.t[i][c];
                let better = match &best {
                    None => true,
                    Some((b, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*b]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn solution(&self) -> Vec<Rational> {
        let rhs = self.rhs();
        let mut x = vec![Rational::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.t[i][rhs].clone();
            }
        }
        x
    }
}

/// Solves `minimize c·x, A x = b, x ≥ 0`; with `c = None` only feasibility is decided.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], c: Option<&[Rational]>) -> LpOutcome {
    let m = a.len();
    let n = a.first().map_or_else(|| c.map_or(0, <[_]>::len), Vec::len);
    let mut sign = vec![Rational::one(); m];
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        if flip {
            sign[i] = -Rational::one();
        }
        let mut row: Vec<Rational> = a[i]
            .iter()
            .map(|v| if flip { -v } else { v.clone() })
            .collect();
        row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        row.push(b[i].abs());
        t.push(row);
    }
    // phase I: minimize the sum of artificials
    let mut cost = vec![Rational::zero(); n + m + 1];
    for j in n..n + m {
        cost[j] = Rational::one();
    }
    for row in &t {
        for (c, v) in cost.iter_mut().zip(row) {
            *c -= v;
        }
    }
    let mut tab = Tableau {
        t,
        cost,
        basis: (n..n + m).collect(),
        n,
    };
    tab.optimize(n + m);
    let phase1 = -tab.cost[n + m].clone();
    if phase1.is_positive() {
        // artificial reduced cost is 1 - y_i
        let farkas = (0..m)
            .map(|i| (Rational::one() - &tab.cost[n + i]) * &sign[i])
            .collect();
        return LpOutcome::Infeasible { farkas };
    }
    // drive basic artificials out or drop their (redundant) rows
    let mut i = 0;
    while i < tab.t.len() {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, j);
            } else {
                tab.t.remove(i);
                tab.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    let Some(c) = c else {
        return LpOutcome::Optimal {
            x: tab.solution(),
            value: Rational::zero(),
        };
    };
    let rhs = tab.rhs();
    let mut cost = vec![Rational::zero(); rhs + 1];
    cost[..n].clone_from_slice(c);
    for (i, &bi) in tab.basis.iter().enumerate() {
        if c[bi].is_zero() {
            continue;
        }
        for j in 0..=rhs {
            if j < n || j == rhs {
                cost[j] -= &c[bi] * &tab.t[i][j];
            }
        }
    }
    tab.cost = cost;
    if !tab.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let x = tab.solution();
    let value = x
        .iter()
        .zip(c)
        .map(|(xi, ci)| xi * ci)
        .fold(Rational::zero(), |a, b| a + b);
    LpOutcome::Optimal { x, value }
}
