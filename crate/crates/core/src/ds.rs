//! Davenport-Schinzel sequences.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DsError {
    #[error("search space too large (n = {n}, s = {s}; limit n <= 4, s <= 4)")]
    TooLarge { n: usize, s: usize },
    #[error("order s must be at least 1")]
    BadOrder,
}

/// No immediate repetition and no alternation a..b..a.. of length s + 2.
pub fn is_ds_sequence<T: Ord>(u: &[T], s: usize) -> bool {
    if s == 0 {
        return false;
    }
    if u.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let mut syms: Vec<&T> = u.iter().collect();
    syms.sort();
    syms.dedup();
    for i in 0..syms.len() {
        for j in i + 1..syms.len() {
            // the longest alternation equals the number of runs of the restriction
            let mut runs = 0;
            let mut last: Option<&T> = None;
            for x in u.iter().filter(|x| *x == syms[i] || *x == syms[j]) {
                if last != Some(x) {
                    runs += 1;
                    last = Some(x);
                }
            }
            if runs >= s + 2 {
                return false;
            }
        }
    }
    true
}

/// Exact lambda_s(n) by depth-first extension.
pub fn lambda_brute(n: usize, s: usize) -> Result<usize, DsError> {
    if s == 0 {
        return Err(DsError::BadOrder);
    }
    if n > 4 || s > 4 {
        return Err(DsError::TooLarge { n, s });
    }
    if n == 0 {
        return Ok(0);
    }
    struct St {
        n: usize,
        s: usize,
        seq: Vec<usize>,
        runs: [[usize; 4]; 4],
        last: [[Option<usize>; 4]; 4],
        best: usize,
    }
    fn dfs(st: &mut St, used: usize) {
        st.best = st.best.max(st.seq.len());
        // new symbols appear in increasing order, which removes relabelings
        let limit = (used + 1).min(st.n);
        for c in 0..limit {
            if st.seq.last() == Some(&c) {
                continue;
            }
            let mut ok = true;
            let mut changed = Vec::new();
            for b in 0..st.n {
                if b == c {
                    continue;
                }
                let (i, j) = (c.min(b), c.max(b));
                if st.last[i][j] != Some(c) {
                    if st.runs[i][j] + 1 >= st.s + 2 {
                        ok = false;
                        break;
                    }
                    changed.push((i, j, st.last[i][j]));
                }
            }
            if !ok {
                continue;
            }
            for &(i, j, _) in &changed {
                st.runs[i][j] += 1;
                st.last[i][j] = Some(c);
            }
            st.seq.push(c);
            dfs(st, used.max(c + 1));
            st.seq.pop();
            for &(i, j, prev) in &changed {
                st.runs[i][j] -= 1;
                st.last[i][j] = prev;
            }
        }
    }
    let mut st = St { n, s, seq: Vec::new(), runs: [[0; 4]; 4], last: [[None; 4]; 4], best: 0 };
    dfs(&mut st, 0);
    Ok(st.best)
}

/// 2n ln n + 3n, inflated by a relative 1e-9 so integer counts compare safely.
pub fn lambda3_upper(n: u64) -> f64 {
    let nf = n as f64;
    (2.0 * nf * nf.ln() + 3.0 * nf) * (1.0 + 1e-9)
}

/// Ratio k^2 / (2 lambda3_upper(2k)); above 3 the tangency graph would be too
/// dense to be planar.
pub fn euler_density_check(k: u64) -> (f64, bool) {
    let kf = k as f64;
    let ratio = kf * kf / (2.0 * lambda3_upper(2 * k));
    (ratio, ratio > 3.0)
}

/// Symbol counts, handy for reports.
pub fn symbol_counts<T: Ord + Clone>(u: &[T]) -> BTreeMap<T, usize> {
    let mut m = BTreeMap::new();
    for x in u {
        *m.entry(x.clone()).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity() {
        assert!(is_ds_sequence(&['a', 'b', 'a', 'b'], 3));
        assert!(!is_ds_sequence(&['a', 'b', 'a', 'b', 'a'], 3));
        assert!(!is_ds_sequence(&['a', 'a', 'b'], 5));
    }

    #[test]
    fn small_lambdas() {
        assert_eq!(lambda_brute(1, 3), Ok(1));
        assert_eq!(lambda_brute(2, 3), Ok(4));
        assert_eq!(lambda_brute(3, 2), Ok(5));
        for n in 1..=4 {
            assert_eq!(lambda_brute(n, 1), Ok(n));
            assert_eq!(lambda_brute(n, 2), Ok(2 * n - 1));
        }
    }

    #[test]
    fn upper_bound_values() {
        assert!((lambda3_upper(1) - 3.0).abs() < 1e-6);
        assert!((lambda3_upper(2) - 8.7726).abs() < 1e-3);
        assert!((lambda3_upper(400) - 5993.17).abs() < 0.01);
    }
}
