use std::collections::{HashSet, VecDeque};

use crate::model::DynkinType;

/// Number of roots, by closing the simple roots under the simple
/// reflections in integer root coordinates.
pub fn enumerate_roots(ty: DynkinType) -> usize {
    let a = ty.cartan_matrix();
    let n = a.len();
    let simple: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut seen: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut queue: VecDeque<Vec<i64>> = simple.into();
    while let Some(v) = queue.pop_front() {
        for i in 0..n {
            // <v, α_i^∨> = Σ_j v_j <α_j, α_i^∨>
            let pairing: i64 = (0..n).map(|j| v[j] * a[j][i]).sum();
            if pairing == 0 {
                continue;
            }
            let mut w = v.clone();
            w[i] -= pairing;
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        assert_eq!(enumerate_roots(DynkinType::A(2)), 6);
        assert_eq!(enumerate_roots(DynkinType::G2), 12);
        assert_eq!(enumerate_roots(DynkinType::B(3)), 18);
        assert_eq!(enumerate_roots(DynkinType::F4), 48);
        assert_eq!(enumerate_roots(DynkinType::E6), 72);
        assert_eq!(enumerate_roots(DynkinType::E8), 240);
    }
}
