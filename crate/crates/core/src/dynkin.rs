//! Affine simply-laced Dynkin diagrams and graph matching against them.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Affine ADE type; the number is the rank of the finite diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AffineType {
    A(usize),
    D(usize),
    E(usize),
}

impl AffineType {
    pub fn rank(&self) -> usize {
        match *self {
            AffineType::A(r) | AffineType::D(r) | AffineType::E(r) => r,
        }
    }

    /// Number of roots of the finite root system.
    pub fn root_count(&self) -> usize {
        match *self {
            AffineType::A(r) => r * (r + 1),
            AffineType::D(r) => 2 * r * (r - 1),
            AffineType::E(6) => 72,
            AffineType::E(7) => 126,
            AffineType::E(8) => 240,
            AffineType::E(_) => 0,
        }
    }

    /// Plain-ASCII name such as `A2~`.
    pub fn ascii(&self) -> String {
        match *self {
            AffineType::A(r) => format!("A{r}~"),
            AffineType::D(r) => format!("D{r}~"),
            AffineType::E(r) => format!("E{r}~"),
        }
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AffineType::A(r) => write!(f, "\u{c3}{r}"),
            AffineType::D(r) => write!(f, "D\u{303}{r}"),
            AffineType::E(r) => write!(f, "\u{1ebc}{r}"),
        }
    }
}

/// Marks and adjacency of an affine diagram, node 0 being the extending node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub kind: AffineType,
    pub marks: Vec<usize>,
    pub adjacency: Vec<Vec<i64>>,
}

fn from_edges(kind: AffineType, marks: Vec<usize>, edges: &[(usize, usize)]) -> Template {
    let n = marks.len();
    let mut adjacency = vec![vec![0i64; n]; n];
    for &(a, b) in edges {
        adjacency[a][b] += 1;
        adjacency[b][a] += 1;
    }
    Template {
        kind,
        marks,
        adjacency,
    }
}

pub fn template(kind: AffineType) -> Option<Template> {
    match kind {
        AffineType::A(1) => Some(from_edges(kind, vec![1, 1], &[(0, 1), (0, 1)])),
        AffineType::A(r) if r >= 2 => {
            let edges: Vec<_> = (0..=r).map(|i| (i, (i + 1) % (r + 1))).collect();
            Some(from_edges(kind, vec![1; r + 1], &edges))
        }
        AffineType::D(r) if r >= 4 => {
            let mut marks = vec![1; 4];
            marks.extend(std::iter::repeat_n(2, r - 3));
            let mut edges = vec![(0, 4), (1, 4), (2, r), (3, r)];
            edges.extend((4..r).map(|i| (i, i + 1)));
            Some(from_edges(kind, marks, &edges))
        }
        AffineType::E(6) => Some(from_edges(
            kind,
            vec![1, 2, 3, 2, 1, 2, 1],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)],
        )),
        AffineType::E(7) => {
            let mut edges: Vec<_> = (0..6).map(|i| (i, i + 1)).collect();
            edges.push((3, 7));
            Some(from_edges(kind, vec![1, 2, 3, 4, 3, 2, 1, 2], &edges))
        }
        AffineType::E(8) => {
            let mut edges: Vec<_> = (0..7).map(|i| (i, i + 1)).collect();
            edges.push((5, 8));
            Some(from_edges(kind, vec![1, 2, 3, 4, 5, 6, 4, 2, 3], &edges))
        }
        _ => None,
    }
}

fn candidates(nodes: usize) -> Vec<AffineType> {
    let r = nodes.saturating_sub(1);
    let mut out = Vec::new();
    if r >= 1 {
        out.push(AffineType::A(r));
    }
    if r >= 4 {
        out.push(AffineType::D(r));
    }
    if (6..=8).contains(&r) {
        out.push(AffineType::E(r));
    }
    out
}

/// Finds a template matching the graph. Returns the type and the permutation
/// `perm` with `perm[t]` = graph node playing the role of template node `t`.
/// Node 0 of the graph must map to the extending node.
pub fn identify(marks: &[usize], adjacency: &[Vec<i64>]) -> Option<(AffineType, Vec<usize>)> {
    for kind in candidates(marks.len()) {
        let t = template(kind)?;
        if let Some(perm) = match_template(&t, marks, adjacency) {
            return Some((kind, perm));
        }
    }
    None
}

fn match_template(t: &Template, marks: &[usize], adjacency: &[Vec<i64>]) -> Option<Vec<usize>> {
    let n = marks.len();
    if t.marks.len() != n || marks[0] != 1 {
        return None;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    perm[0] = 0;
    used[0] = true;
    if extend(t, marks, adjacency, 1, &mut perm, &mut used) {
        Some(perm)
    } else {
        None
    }
}

fn extend(
    t: &Template,
    marks: &[usize],
    adjacency: &[Vec<i64>],
    node: usize,
    perm: &mut [usize],
    used: &mut [bool],
) -> bool {
    let n = marks.len();
    if node == n {
        return true;
    }
    for g in 0..n {
        if used[g] || marks[g] != t.marks[node] {
            continue;
        }
        let consistent = (0..node).all(|s| adjacency[g][perm[s]] == t.adjacency[node][s])
            && adjacency[g][g] == t.adjacency[node][node];
        if !consistent {
            continue;
        }
        perm[node] = g;
        used[g] = true;
        if extend(t, marks, adjacency, node + 1, perm, used) {
            return true;
        }
        used[g] = false;
    }
    perm[node] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn null_vector_holds(t: &Template) -> bool {
        let n = t.marks.len();
        (0..n).all(|i| {
            let s: i64 = (0..n).map(|j| t.adjacency[i][j] * t.marks[j] as i64).sum();
            s == 2 * t.marks[i] as i64
        })
    }

    #[test]
    fn templates_have_marks_as_null_vector() {
        let kinds = [
            AffineType::A(1),
            AffineType::A(2),
            AffineType::A(5),
            AffineType::D(4),
            AffineType::D(5),
            AffineType::D(7),
            AffineType::E(6),
            AffineType::E(7),
            AffineType::E(8),
        ];
        for k in kinds {
            assert!(null_vector_holds(&template(k).unwrap()), "{k}");
        }
    }

    #[test]
    fn identifies_relabelled_d4() {
        let t = template(AffineType::D(4)).unwrap();
        // move the centre to index 1
        let order = [0usize, 4, 1, 2, 3];
        let marks: Vec<usize> = order.iter().map(|&o| t.marks[o]).collect();
        let adj: Vec<Vec<i64>> = order
            .iter()
            .map(|&a| order.iter().map(|&b| t.adjacency[a][b]).collect())
            .collect();
        let (kind, perm) = identify(&marks, &adj).unwrap();
        assert_eq!(kind, AffineType::D(4));
        assert_eq!(perm[4], 1);
    }

    #[test]
    fn rejects_a_path() {
        let adj = vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]];
        assert!(identify(&[1, 1, 1], &adj).is_none());
    }

    #[test]
    fn names() {
        assert_eq!(AffineType::A(2).to_string(), "Ã2");
        assert_eq!(AffineType::E(8).ascii(), "E8~");
        assert_eq!(AffineType::D(5).root_count(), 40);
    }
}
