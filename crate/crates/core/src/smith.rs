//! Smith normal form of small integer matrices, with transforms.

use num_rational::Rational64;

/// `u · a · v = diag(d)` with `u`, `v` unimodular, `d_i | d_{i+1}`, `d_i >= 0`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub v_inv: Vec<Vec<i64>>,
    /// Diagonal entries, `min(rows, cols)` of them.
    pub d: Vec<i64>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn smith(a: &[Vec<i64>], cols: usize) -> Smith {
    let rows = a.len();
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);

    let add_row = |m: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, dst: usize, src: usize, q: i64| {
        for j in 0..m[dst].len() {
            m[dst][j] -= q * m[src][j];
        }
        for j in 0..u[dst].len() {
            u[dst][j] -= q * u[src][j];
        }
    };
    // column dst -= q · column src
    let add_col = |m: &mut Vec<Vec<i64>>,
                   v: &mut Vec<Vec<i64>>,
                   vi: &mut Vec<Vec<i64>>,
                   dst: usize,
                   src: usize,
                   q: i64| {
        for row in m.iter_mut() {
            row[dst] -= q * row[src];
        }
        for row in v.iter_mut() {
            row[dst] -= q * row[src];
        }
        for j in 0..vi[src].len() {
            vi[src][j] += q * vi[dst][j];
        }
    };

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(m, u, v, v_inv, rows, cols);
            };
            m.swap(t, pi);
            u.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            v_inv.swap(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / m[t][t];
                if q != 0 {
                    add_row(&mut m, &mut u, i, t, q);
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / m[t][t];
                if q != 0 {
                    add_col(&mut m, &mut v, &mut v_inv, j, t, q);
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let p = m[t][t];
            if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0)) {
                add_row(&mut m, &mut u, t, i, -1);
                continue;
            }
            break;
        }
        if m[t][t] < 0 {
            for x in m[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    finish(m, u, v, v_inv, rows, cols)
}

fn finish(m: Vec<Vec<i64>>, u: Vec<Vec<i64>>, v: Vec<Vec<i64>>, v_inv: Vec<Vec<i64>>, rows: usize, cols: usize) -> Smith {
    let d = (0..rows.min(cols)).map(|i| m[i][i]).collect();
    Smith { u, v, v_inv, d }
}

/// Generators and invariant factors of `{x ∈ (Q/Z)^m : a·x ≡ 0}`, or
/// `None` when that kernel is infinite.
pub fn torsion_kernel(a: &[Vec<i64>], m: usize) -> Option<(Vec<Vec<Rational64>>, Vec<i64>)> {
    let s = smith(a, m);
    if s.d.len() < m || s.d.contains(&0) {
        return None;
    }
    let mut gens = Vec::new();
    let mut factors = Vec::new();
    for (i, &d) in s.d.iter().enumerate() {
        if d > 1 {
            gens.push((0..m).map(|r| Rational64::new(s.v[r][i], d)).collect());
            factors.push(d);
        }
    }
    Some((gens, factors))
}
