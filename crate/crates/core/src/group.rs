//! Finite subgroups of SU(2) as explicit matrix groups.
//!
//! Every subgroup is generated from a fixed set of unit quaternions and closed
//! by breadth-first multiplication. Elements are identified by hashing their
//! entries on a fixed grid, so the element order (identity first, then BFS
//! order) is reproducible across runs.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{c64, C64};

/// Upper bound on closure size; anything larger means the generators are wrong.
pub const MAX_ORDER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E6,
    E7,
    E8,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "D" => Ok(Family::D),
            "E6" => Ok(Family::E6),
            "E7" => Ok(Family::E7),
            "E8" => Ok(Family::E8),
            other => Err(Error::InvalidInput(format!("unknown family `{other}`"))),
        }
    }
}

/// Family tag plus rank parameter. For `A` the group is cyclic of order `k + 1`,
/// for `D` it is binary dihedral of order `4k`; `k` is ignored (stored as 0)
/// for the exceptional families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupLabel {
    pub family: Family,
    pub k: u32,
}

impl GroupLabel {
    pub fn new(family: Family, k: u32) -> Result<Self> {
        match family {
            Family::A | Family::D if k == 0 => Err(Error::InvalidInput(format!(
                "family {family:?} needs a rank parameter k >= 1"
            ))),
            Family::A | Family::D => Ok(GroupLabel { family, k }),
            _ => Ok(GroupLabel { family, k: 0 }),
        }
    }

    pub fn expected_order(&self) -> usize {
        match self.family {
            Family::A => self.k as usize + 1,
            Family::D => 4 * self.k as usize,
            Family::E6 => 24,
            Family::E7 => 48,
            Family::E8 => 120,
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A{}", self.k),
            Family::D => write!(f, "D{}", self.k),
            Family::E6 => write!(f, "E6"),
            Family::E7 => write!(f, "E7"),
            Family::E8 => write!(f, "E8"),
        }
    }
}

/// An element of SU(2), `[[u, v], [-v*, u*]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "[[f64; 2]; 4]", from = "[[f64; 2]; 4]")]
pub struct GroupElement {
    pub m: Matrix2<C64>,
}

impl From<GroupElement> for [[f64; 2]; 4] {
    fn from(g: GroupElement) -> Self {
        let m = g.m;
        [
            [m[(0, 0)].re, m[(0, 0)].im],
            [m[(0, 1)].re, m[(0, 1)].im],
            [m[(1, 0)].re, m[(1, 0)].im],
            [m[(1, 1)].re, m[(1, 1)].im],
        ]
    }
}

impl From<[[f64; 2]; 4]> for GroupElement {
    fn from(a: [[f64; 2]; 4]) -> Self {
        GroupElement {
            m: Matrix2::new(
                c64(a[0][0], a[0][1]),
                c64(a[1][0], a[1][1]),
                c64(a[2][0], a[2][1]),
                c64(a[3][0], a[3][1]),
            ),
        }
    }
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement {
            m: Matrix2::identity(),
        }
    }

    /// Unit quaternion `a + bi + cj + dk`.
    pub fn from_quaternion(a: f64, b: f64, c: f64, d: f64) -> Self {
        GroupElement {
            m: Matrix2::new(c64(a, b), c64(c, d), c64(-c, d), c64(a, -b)),
        }
    }

    pub fn u(&self) -> C64 {
        self.m[(0, 0)]
    }

    pub fn v(&self) -> C64 {
        self.m[(0, 1)]
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement { m: self.m * other.m }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            m: self.m.adjoint(),
        }
    }

    /// Character of the defining representation, `u + u*`.
    pub fn trace(&self) -> C64 {
        self.m[(0, 0)] + self.m[(1, 1)]
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.m * self.m.adjoint() - Matrix2::identity()).norm()
    }

    pub fn det_defect(&self) -> f64 {
        (self.m.determinant() - c64(1.0, 0.0)).norm()
    }

    pub fn distance(&self, other: &GroupElement) -> f64 {
        (self.m - other.m).norm()
    }

    fn key(&self, grid: f64) -> [i64; 8] {
        let mut k = [0i64; 8];
        for (i, z) in self.m.iter().enumerate() {
            k[2 * i] = (z.re / grid).round() as i64;
            k[2 * i + 1] = (z.im / grid).round() as i64;
        }
        k
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteSubgroup {
    pub label: GroupLabel,
    pub elements: Vec<GroupElement>,
    /// `cayley[i][j]` is the index of `elements[i] * elements[j]`.
    pub cayley: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub conj_classes: Vec<Vec<usize>>,
    /// Index of `-Id`, when the group contains it.
    pub minus_identity: Option<usize>,
}

impl FiniteSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    /// Class index of every element.
    pub fn class_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.order()];
        for (c, class) in self.conj_classes.iter().enumerate() {
            for &g in class {
                out[g] = c;
            }
        }
        out
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements.iter().all(|g| g.v().norm() < 1e-12)
    }
}

fn generators(label: &GroupLabel) -> Vec<GroupElement> {
    use std::f64::consts::PI;
    let half = 0.5;
    match label.family {
        // diag(e^{2πi/n}, e^{-2πi/n})
        Family::A => {
            let n = label.k as f64 + 1.0;
            let t = 2.0 * PI / n;
            vec![GroupElement::from_quaternion(t.cos(), t.sin(), 0.0, 0.0)]
        }
        // diag(e^{iπ/k}, e^{-iπ/k}) and j
        Family::D => {
            let t = PI / label.k as f64;
            vec![
                GroupElement::from_quaternion(t.cos(), t.sin(), 0.0, 0.0),
                GroupElement::from_quaternion(0.0, 0.0, 1.0, 0.0),
            ]
        }
        // binary tetrahedral: i and (1+i+j+k)/2
        Family::E6 => vec![
            GroupElement::from_quaternion(0.0, 1.0, 0.0, 0.0),
            GroupElement::from_quaternion(half, half, half, half),
        ],
        // binary octahedral: (1+i)/√2 and (1+i+j+k)/2
        Family::E7 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            vec![
                GroupElement::from_quaternion(s, s, 0.0, 0.0),
                GroupElement::from_quaternion(half, half, half, half),
            ]
        }
        // binary icosahedral: (1+i+j+k)/2 and (φ + φ⁻¹ i + j)/2
        Family::E8 => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            vec![
                GroupElement::from_quaternion(half, half, half, half),
                GroupElement::from_quaternion(phi / 2.0, 1.0 / (2.0 * phi), 0.5, 0.0),
            ]
        }
    }
}

struct ElementIndex {
    grid: f64,
    map: HashMap<[i64; 8], usize>,
}

impl ElementIndex {
    fn find(&self, g: &GroupElement, elements: &[GroupElement]) -> Option<usize> {
        if let Some(&i) = self.map.get(&g.key(self.grid)) {
            return Some(i);
        }
        // Entries straddling a grid boundary hash differently; fall back to a scan.
        elements.iter().position(|h| h.distance(g) < self.grid)
    }
}

/// Builds the subgroup for `family` with rank parameter `k`.
pub fn build_group(family: Family, k: u32) -> Result<FiniteSubgroup> {
    build_group_with(GroupLabel::new(family, k)?, &Tolerances::default())
}

pub fn build_group_with(label: GroupLabel, tol: &Tolerances) -> Result<FiniteSubgroup> {
    let gens = generators(&label);
    for (index, g) in gens.iter().enumerate() {
        let unitarity = g.unitarity_defect();
        let det = g.det_defect();
        if unitarity > tol.su2 || det > tol.su2 {
            return Err(Error::NotInSU2 {
                index,
                unitarity,
                det,
            });
        }
    }

    let mut elements = vec![GroupElement::identity()];
    let mut index = ElementIndex {
        grid: tol.dedup_grid,
        map: HashMap::new(),
    };
    index.map.insert(elements[0].key(tol.dedup_grid), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let h = elements[i].mul(g);
            if index.find(&h, &elements).is_none() {
                if elements.len() >= MAX_ORDER {
                    return Err(Error::NonClosure { limit: MAX_ORDER });
                }
                index.map.insert(h.key(tol.dedup_grid), elements.len());
                queue.push_back(elements.len());
                elements.push(h);
            }
        }
    }

    let n = elements.len();
    let mut cayley = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let p = elements[i].mul(&elements[j]);
            cayley[i][j] = index
                .find(&p, &elements)
                .ok_or(Error::NonClosure { limit: MAX_ORDER })?;
        }
    }
    let inverse: Vec<usize> = (0..n)
        .map(|i| cayley[i].iter().position(|&p| p == 0))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidInput("element without inverse".into()))?;

    let conj_classes = conjugacy_classes(&cayley, &inverse);
    let minus_identity = elements
        .iter()
        .position(|g| (g.m + Matrix2::identity()).norm() < tol.dedup_grid);

    Ok(FiniteSubgroup {
        label,
        elements,
        cayley,
        inverse,
        conj_classes,
        minus_identity,
    })
}

/// Orbit partition under conjugation, classes ordered by smallest member.
fn conjugacy_classes(cayley: &[Vec<usize>], inverse: &[usize]) -> Vec<Vec<usize>> {
    let n = cayley.len();
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for g in 0..n {
        if assigned[g] {
            continue;
        }
        let mut class: Vec<usize> = (0..n).map(|h| cayley[cayley[h][g]][inverse[h]]).collect();
        class.sort_unstable();
        class.dedup();
        for &c in &class {
            assigned[c] = true;
        }
        classes.push(class);
    }
    classes
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub label: String,
    pub order: usize,
    pub expected_order: usize,
    pub class_count: usize,
    pub contains_minus_identity: bool,
    pub checks: Vec<(String, bool)>,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Re-checks every group invariant and reports pass/fail per check.
pub fn verify_group(g: &FiniteSubgroup) -> GroupReport {
    verify_group_with(g, &Tolerances::default())
}

pub fn verify_group_with(g: &FiniteSubgroup, tol: &Tolerances) -> GroupReport {
    let n = g.order();
    let mut checks = Vec::new();

    let in_su2 = g
        .elements
        .iter()
        .all(|e| e.unitarity_defect() <= tol.su2 * 10.0 && e.det_defect() <= tol.su2 * 10.0);
    checks.push(("unitary_det_one".to_string(), in_su2));

    let identity_first = g.elements.first().map(|e| e.distance(&GroupElement::identity()) < tol.cayley)
        == Some(true)
        && (0..n).all(|i| g.cayley[0][i] == i && g.cayley[i][0] == i);
    checks.push(("identity_at_zero".to_string(), identity_first));

    let closure = (0..n).all(|i| {
        (0..n).all(|j| {
            let k = g.cayley[i][j];
            k < n && g.elements[i].mul(&g.elements[j]).distance(&g.elements[k]) <= tol.cayley
        })
    });
    checks.push(("closure".to_string(), closure));

    let inverses = (0..n).all(|i| {
        let j = g.inverse[i];
        j < n && g.cayley[i][j] == 0 && g.cayley[j][i] == 0
    });
    checks.push(("two_sided_inverses".to_string(), inverses));

    // Deterministic spot-check on a stride through the triples.
    let assoc = (0..n.min(40)).all(|a| {
        let b = (a * 7 + 3) % n;
        let c = (a * 13 + 5) % n;
        g.cayley[g.cayley[a][b]][c] == g.cayley[a][g.cayley[b][c]]
    });
    checks.push(("associativity".to_string(), assoc));

    checks.push(("order_matches_family".to_string(), n == g.label.expected_order()));

    let lagrange = (0..n).all(|i| n.is_multiple_of(element_order(g, i)));
    checks.push(("lagrange".to_string(), lagrange));

    let real_traces = g.elements.iter().all(|e| e.trace().im.abs() <= tol.su2 * 10.0);
    checks.push(("defining_character_real".to_string(), real_traces));

    let partition: usize = g.conj_classes.iter().map(Vec::len).sum();
    checks.push(("classes_partition".to_string(), partition == n));

    GroupReport {
        label: g.label.to_string(),
        order: n,
        expected_order: g.label.expected_order(),
        class_count: g.conj_classes.len(),
        contains_minus_identity: g.minus_identity.is_some(),
        checks,
    }
}

pub fn element_order(g: &FiniteSubgroup, i: usize) -> usize {
    let mut k = 1;
    let mut x = i;
    while x != 0 {
        x = g.cayley[x][i];
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_is_center() {
        let g = build_group(Family::A, 1).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.minus_identity, Some(1));
        assert_eq!(verify_group(&g).class_count, 2);
    }

    #[test]
    fn a2_has_no_minus_identity() {
        let g = build_group(Family::A, 2).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.minus_identity.is_none());
        assert!(g.is_cyclic());
    }

    #[test]
    fn quaternion_group() {
        let g = build_group(Family::D, 2).unwrap();
        assert_eq!(g.order(), 8);
        let r = verify_group(&g);
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.class_count, 5);
        assert!(!g.is_cyclic());
    }

    #[test]
    fn binary_tetrahedral_classes() {
        let g = build_group(Family::E6, 0).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(verify_group(&g).class_count, 7);
    }

    #[test]
    fn missing_rank_parameter() {
        assert!(matches!(build_group(Family::A, 0), Err(Error::InvalidInput(_))));
        assert!(matches!(build_group(Family::D, 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn family_parsing() {
        assert_eq!("e7".parse::<Family>().unwrap(), Family::E7);
        assert!("B".parse::<Family>().is_err());
    }

    #[test]
    fn element_serialization_round_trips() {
        let g = build_group(Family::E8, 0).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: FiniteSubgroup = serde_json::from_str(&text).unwrap();
        assert_eq!(back.elements, g.elements);
        assert_eq!(back.cayley, g.cayley);
    }
}
