//! Root systems of even lattices: norm-2 vectors split into connected
//! components of the non-orthogonality graph and labelled by (size, rank).

use super::intmat::{hnf, Row};
use super::raw_dot;
use crate::error::Result;

/// ADE label for an irreducible root system with `count` roots and rank `rank`.
pub fn ade_label(count: usize, rank: usize) -> String {
    let n = rank;
    match (count, rank) {
        (c, n) if n >= 1 && c == n * (n + 1) => format!("A{n}"),
        (c, n) if n >= 4 && c == 2 * n * (n - 1) => format!("D{n}"),
        (72, 6) => "E6".into(),
        (126, 7) => "E7".into(),
        (240, 8) => "E8".into(),
        _ => format!("unknown({count},{n})"),
    }
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Sorted labels of the irreducible components of the root system `roots`.
pub fn root_components(roots: &[Row]) -> Result<Vec<String>> {
    let m = roots.len();
    let mut parent: Vec<usize> = (0..m).collect();
    for i in 0..m {
        for j in i + 1..m {
            if raw_dot(&roots[i], &roots[j]) != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Row>> = Default::default();
    for i in 0..m {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(roots[i].clone());
    }
    let mut labels = Vec::new();
    for g in groups.values() {
        let dim = g[0].len();
        let rank = hnf(g, dim)?.len();
        labels.push(ade_label(g.len(), rank));
    }
    labels.sort();
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(ade_label(2, 1), "A1");
        assert_eq!(ade_label(12, 3), "A3");
        assert_eq!(ade_label(24, 4), "D4");
        assert_eq!(ade_label(480, 16), "D16");
        assert_eq!(ade_label(240, 8), "E8");
        assert_eq!(ade_label(126, 7), "E7");
        assert_eq!(ade_label(72, 6), "E6");
        assert_eq!(ade_label(10, 3), "unknown(10,3)");
    }

    #[test]
    fn a1_squared() {
        let roots = vec![vec![8, 0], vec![-8, 0], vec![0, 8], vec![0, -8]];
        assert_eq!(root_components(&roots).unwrap(), vec!["A1", "A1"]);
        assert!(root_components(&[]).unwrap().is_empty());
    }
}
