//! Root systems of simply-laced Cartan matrices.

use std::collections::BTreeSet;

/// `mᵀ C m` for an integer vector in simple-root coordinates.
pub fn norm_sq(cartan: &[Vec<i64>], m: &[i64]) -> i64 {
    let r = m.len();
    (0..r)
        .map(|i| (0..r).map(|j| m[i] * cartan[i][j] * m[j]).sum::<i64>())
        .sum()
}

fn reflect(cartan: &[Vec<i64>], m: &[i64], i: usize) -> Vec<i64> {
    let pairing: i64 = (0..m.len()).map(|j| cartan[i][j] * m[j]).sum();
    let mut out = m.to_vec();
    out[i] -= pairing;
    out
}

/// All roots, obtained by closing the simple roots under simple reflections.
/// Output is sorted lexicographically.
pub fn enumerate_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = cartan.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut frontier: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            e
        })
        .collect();
    seen.extend(frontier.iter().cloned());
    while let Some(m) = frontier.pop() {
        for i in 0..r {
            let s = reflect(cartan, &m, i);
            if seen.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_cartan(r: usize) -> Vec<Vec<i64>> {
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn a1_and_a2() {
        assert_eq!(enumerate_roots(&a_cartan(1)), vec![vec![-1], vec![1]]);
        let roots = enumerate_roots(&a_cartan(2));
        assert_eq!(roots.len(), 6);
        assert!(roots.contains(&vec![1, 1]));
        assert!(roots.iter().all(|m| norm_sq(&a_cartan(2), m) == 2));
    }

    #[test]
    fn a4_count() {
        assert_eq!(enumerate_roots(&a_cartan(4)).len(), 20);
    }
}
