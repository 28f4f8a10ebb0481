//! Brute-force atlas of GL₂(F₃): every subgroup (not just up to conjugacy),
//! its isomorphism type, and the images under the two natural surjections —
//! the action on P¹(F₃) into S₄ and, composing with the action on 2-2
//! partitions, onto S₃.
//!
//! Isomorphism labeling uses order, commutativity and the element-order
//! multiset, which separates all fourteen types that occur.

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;

/// A 2×2 invertible matrix over F₃, entries row-major (a, b, c, d).
pub type G48Elem = [u8; 4];

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, PartialOrd, Ord, Hash)]
pub enum IsoLabel {
    C1,
    C2,
    C3,
    C4,
    C6,
    C8,
    C2xC2,
    Q8,
    D6,
    D8,
    D12,
    SD16,
    SL2F3,
    GL2F3,
}

impl IsoLabel {
    pub fn order(&self) -> usize {
        match self {
            IsoLabel::C1 => 1,
            IsoLabel::C2 => 2,
            IsoLabel::C3 => 3,
            IsoLabel::C4 | IsoLabel::C2xC2 => 4,
            IsoLabel::C6 | IsoLabel::D6 => 6,
            IsoLabel::C8 | IsoLabel::Q8 | IsoLabel::D8 => 8,
            IsoLabel::D12 => 12,
            IsoLabel::SD16 => 16,
            IsoLabel::SL2F3 => 24,
            IsoLabel::GL2F3 => 48,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            IsoLabel::C1 => "C1",
            IsoLabel::C2 => "C2",
            IsoLabel::C3 => "C3",
            IsoLabel::C4 => "C4",
            IsoLabel::C6 => "C6",
            IsoLabel::C8 => "C8",
            IsoLabel::C2xC2 => "C2xC2",
            IsoLabel::Q8 => "Q8",
            IsoLabel::D6 => "D6",
            IsoLabel::D8 => "D8",
            IsoLabel::D12 => "D12",
            IsoLabel::SD16 => "SD16",
            IsoLabel::SL2F3 => "SL2F3",
            IsoLabel::GL2F3 => "GL2F3",
        }
    }

    /// Is the order divisible by 3?
    pub fn divisible_by_3(&self) -> bool {
        self.order() % 3 == 0
    }
}

/// Isomorphism labels of subgroups of S₄ (for the P¹-action images).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum PermLabel {
    C1,
    C2,
    C3,
    C4,
    C2xC2,
    S3,
    D8,
    A4,
    S4,
}

#[derive(Clone, Serialize)]
pub struct SubgroupRecord {
    pub elements: Vec<G48Elem>,
    pub order: usize,
    pub label: IsoLabel,
    /// Isomorphism type of the kernel of the composite map to S₃.
    pub kernel_label: IsoLabel,
    /// Isomorphism type of the image in S₃.
    pub image_label: IsoLabel,
    /// Isomorphism type of the image in S₄ under the P¹-action.
    pub s4_image: PermLabel,
}

pub struct Atlas {
    pub elements: Vec<G48Elem>,
    pub subgroups: Vec<SubgroupRecord>,
}

fn mat_mul(x: G48Elem, y: G48Elem) -> G48Elem {
    let m = |v: u8| v % 3;
    [
        m(x[0] * y[0] + x[1] * y[2]),
        m(x[0] * y[1] + x[1] * y[3]),
        m(x[2] * y[0] + x[3] * y[2]),
        m(x[2] * y[1] + x[3] * y[3]),
    ]
}

fn det(x: G48Elem) -> u8 {
    (3 + x[0] * x[3] % 3 + 3 - x[1] * x[2] % 3) % 3
}

const IDENTITY: G48Elem = [1, 0, 0, 1];

fn elem_order(x: G48Elem) -> usize {
    let mut cur = x;
    for k in 1..=48 {
        if cur == IDENTITY {
            return k;
        }
        cur = mat_mul(cur, x);
    }
    unreachable!("element order exceeds the group order")
}

/// The four points of P¹(F₃) in the fixed order [1:0], [0:1], [1:1], [1:2].
fn p1_index(x: u8, y: u8) -> usize {
    match (x % 3, y % 3) {
        (1, 0) | (2, 0) => 0,
        (0, 1) | (0, 2) => 1,
        (a, b) if a == b => 2,
        _ => 3,
    }
}

/// Permutation of P¹(F₃) induced by the matrix (column-vector action).
fn p1_permutation(m: G48Elem) -> [usize; 4] {
    let reps = [(1u8, 0u8), (0, 1), (1, 1), (1, 2)];
    let mut perm = [0usize; 4];
    for (i, &(x, y)) in reps.iter().enumerate() {
        let nx = (m[0] * x + m[1] * y) % 3;
        let ny = (m[2] * x + m[3] * y) % 3;
        perm[i] = p1_index(nx, ny);
    }
    perm
}

/// Permutation of the three 2-2 partitions {01|23, 02|13, 03|12} induced by
/// a permutation of four points.
fn partition_permutation(p: [usize; 4]) -> [usize; 3] {
    let partitions = [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]];
    let classify = |a: usize, b: usize| -> usize {
        for (i, pt) in partitions.iter().enumerate() {
            if (pt[0].contains(&a) && pt[0].contains(&b))
                || (pt[1].contains(&a) && pt[1].contains(&b))
            {
                return i;
            }
        }
        unreachable!()
    };
    let mut out = [0usize; 3];
    for (i, pt) in partitions.iter().enumerate() {
        out[i] = classify(p[pt[0][0]], p[pt[0][1]]);
    }
    out
}

fn perm3_sign(p: [usize; 3]) -> i8 {
    let mut inv = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn closure(gens: &[G48Elem]) -> Vec<G48Elem> {
    let mut set: BTreeSet<G48Elem> = BTreeSet::new();
    set.insert(IDENTITY);
    let mut frontier: Vec<G48Elem> = vec![IDENTITY];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = mat_mul(x, g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

fn label_from_invariants(elems: &[G48Elem]) -> Result<IsoLabel> {
    let order = elems.len();
    let orders: Vec<usize> = elems.iter().map(|&e| elem_order(e)).collect();
    let abelian = elems.iter().all(|&x| {
        elems.iter().all(|&y| mat_mul(x, y) == mat_mul(y, x))
    });
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    let has8 = orders.contains(&8);
    let label = match order {
        1 => IsoLabel::C1,
        2 => IsoLabel::C2,
        3 => IsoLabel::C3,
        4 => {
            if orders.contains(&4) {
                IsoLabel::C4
            } else {
                IsoLabel::C2xC2
            }
        }
        6 => {
            if abelian {
                IsoLabel::C6
            } else {
                IsoLabel::D6
            }
        }
        8 => {
            if has8 {
                IsoLabel::C8
            } else if involutions == 1 {
                IsoLabel::Q8
            } else if involutions == 5 {
                IsoLabel::D8
            } else {
                return Err(Error::internal(format!(
                    "unrecognized order-8 subgroup: {} involutions",
                    involutions
                )));
            }
        }
        12 => {
            if !abelian && involutions == 7 {
                IsoLabel::D12
            } else {
                return Err(Error::internal("unrecognized order-12 subgroup".to_string()));
            }
        }
        16 => {
            if has8 && involutions == 5 && !abelian {
                IsoLabel::SD16
            } else {
                return Err(Error::internal("unrecognized order-16 subgroup".to_string()));
            }
        }
        24 => {
            if involutions == 1 {
                IsoLabel::SL2F3
            } else {
                return Err(Error::internal("unrecognized order-24 subgroup".to_string()));
            }
        }
        48 => IsoLabel::GL2F3,
        _ => {
            return Err(Error::internal(format!(
                "unexpected subgroup order {}",
                order
            )))
        }
    };
    Ok(label)
}

fn label_perm_group(perms: &BTreeSet<[usize; 4]>) -> Result<PermLabel> {
    let order = perms.len();
    let compose = |a: [usize; 4], b: [usize; 4]| -> [usize; 4] {
        [a[b[0]], a[b[1]], a[b[2]], a[b[3]]]
    };
    let perm_order = |p: [usize; 4]| -> usize {
        let id = [0, 1, 2, 3];
        let mut cur = p;
        for k in 1..=24 {
            if cur == id {
                return k;
            }
            cur = compose(cur, p);
        }
        unreachable!()
    };
    let orders: Vec<usize> = perms.iter().map(|&p| perm_order(p)).collect();
    Ok(match order {
        1 => PermLabel::C1,
        2 => PermLabel::C2,
        3 => PermLabel::C3,
        4 => {
            if orders.contains(&4) {
                PermLabel::C4
            } else {
                PermLabel::C2xC2
            }
        }
        6 => PermLabel::S3,
        8 => PermLabel::D8,
        12 => PermLabel::A4,
        24 => PermLabel::S4,
        _ => {
            return Err(Error::internal(format!(
                "unexpected S4-image order {}",
                order
            )))
        }
    })
}

impl Atlas {
    /// Enumerate all 48 elements and all subgroups as closures of one, two
    /// and three generators.
    pub fn compute() -> Result<Atlas> {
        let mut elements = vec![];
        for code in 0..81u32 {
            let m = [
                (code % 3) as u8,
                (code / 3 % 3) as u8,
                (code / 9 % 3) as u8,
                (code / 27 % 3) as u8,
            ];
            if det(m) != 0 {
                elements.push(m);
            }
        }
        if elements.len() != 48 {
            return Err(Error::internal("GL2(F3) must have 48 elements".to_string()));
        }
        let mut seen: BTreeSet<Vec<G48Elem>> = BTreeSet::new();
        seen.insert(vec![IDENTITY]);
        // single generators
        for &a in &elements {
            seen.insert(closure(&[a]));
        }
        // pairs and triples, restricted to growing the closure set
        let singles: Vec<Vec<G48Elem>> = seen.iter().cloned().collect();
        for s in &singles {
            for &b in &elements {
                let mut gens = s.clone();
                gens.push(b);
                seen.insert(closure(&gens));
            }
        }
        let pairs: Vec<Vec<G48Elem>> = seen.iter().cloned().collect();
        for s in &pairs {
            for &c in &elements {
                let mut gens = s.clone();
                gens.push(c);
                seen.insert(closure(&gens));
            }
        }
        let mut subgroups = vec![];
        for elems in seen {
            let order = elems.len();
            let label = label_from_invariants(&elems)?;
            // kernel and image of the composite map to S₃
            let mut kernel = vec![];
            let mut image: BTreeSet<[usize; 3]> = BTreeSet::new();
            let mut s4: BTreeSet<[usize; 4]> = BTreeSet::new();
            for &m in &elems {
                let p4 = p1_permutation(m);
                s4.insert(p4);
                let p3 = partition_permutation(p4);
                image.insert(p3);
                if p3 == [0, 1, 2] {
                    kernel.push(m);
                }
                // determinant = sign of the partition action
                let sign = perm3_sign(p3);
                let d = det(m);
                let det_sign = if d == 1 { 1i8 } else { -1 };
                if sign != det_sign {
                    return Err(Error::internal(
                        "determinant is not the partition sign".to_string(),
                    ));
                }
            }
            let kernel_label = label_from_invariants(&kernel)?;
            let image_label = match image.len() {
                1 => IsoLabel::C1,
                2 => IsoLabel::C2,
                3 => IsoLabel::C3,
                6 => IsoLabel::D6,
                n => {
                    return Err(Error::internal(format!(
                        "S3-image of order {} is impossible",
                        n
                    )))
                }
            };
            let s4_image = label_perm_group(&s4)?;
            subgroups.push(SubgroupRecord {
                elements: elems,
                order,
                label,
                kernel_label,
                image_label,
                s4_image,
            });
        }
        Ok(Atlas {
            elements,
            subgroups,
        })
    }

    /// The 4×4 grid keyed by (kernel, image) of the map to S₃; cells list the
    /// distinct isomorphism types realized.
    pub fn table(&self) -> Vec<Vec<Vec<IsoLabel>>> {
        let rows = [IsoLabel::C1, IsoLabel::C2, IsoLabel::C4, IsoLabel::Q8];
        let cols = [IsoLabel::C1, IsoLabel::C2, IsoLabel::C3, IsoLabel::D6];
        let mut out = vec![vec![vec![]; 4]; 4];
        for sg in &self.subgroups {
            let r = rows.iter().position(|&l| l == sg.kernel_label);
            let c = cols.iter().position(|&l| l == sg.image_label);
            if let (Some(r), Some(c)) = (r, c) {
                if !out[r][c].contains(&sg.label) {
                    out[r][c].push(sg.label);
                }
            }
        }
        for row in out.iter_mut() {
            for cell in row.iter_mut() {
                cell.sort();
            }
        }
        out
    }

    /// The table the enumeration must reproduce.
    pub fn expected_table() -> Vec<Vec<Vec<IsoLabel>>> {
        use IsoLabel::*;
        vec![
            vec![vec![C1], vec![C2], vec![C3], vec![D6]],
            vec![vec![C2], vec![C2xC2], vec![C6], vec![D12]],
            vec![vec![C4], vec![C8, D8], vec![], vec![]],
            vec![vec![Q8], vec![SD16], vec![SL2F3], vec![GL2F3]],
        ]
    }

    /// Consistency of the whole atlas against the expected grid plus the
    /// side claims: unique Q8, S₄-images of C8 and D8, and both surjections.
    pub fn verify(&self) -> Result<()> {
        let got = self.table();
        let want = Atlas::expected_table();
        if got != want {
            return Err(Error::internal("subgroup table mismatch".to_string()));
        }
        let q8_count = self
            .subgroups
            .iter()
            .filter(|s| s.label == IsoLabel::Q8)
            .count();
        if q8_count != 1 {
            return Err(Error::internal(format!(
                "expected a unique Q8, found {}",
                q8_count
            )));
        }
        // the unique Q8 is the kernel of the full map to S₃
        let full = self
            .subgroups
            .iter()
            .find(|s| s.order == 48)
            .ok_or_else(|| Error::internal("full group missing".to_string()))?;
        if full.kernel_label != IsoLabel::Q8 {
            return Err(Error::internal("kernel of the S3-map is not Q8".to_string()));
        }
        if full.image_label != IsoLabel::D6 || full.s4_image != PermLabel::S4 {
            return Err(Error::internal("the two surjections are not onto".to_string()));
        }
        for sg in &self.subgroups {
            match sg.label {
                IsoLabel::C8 => {
                    if sg.s4_image != PermLabel::C4 {
                        return Err(Error::internal("C8 must map to C4 in S4".to_string()));
                    }
                }
                IsoLabel::D8 => {
                    if sg.s4_image != PermLabel::C2xC2 {
                        return Err(Error::internal("D8 must map to C2xC2 in S4".to_string()));
                    }
                }
                IsoLabel::SL2F3 => {
                    if sg.s4_image != PermLabel::A4 {
                        return Err(Error::internal("SL2F3 must map to A4 in S4".to_string()));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Look up the record of a subgroup generated by given matrices.
    pub fn subgroup_generated(&self, gens: &[G48Elem]) -> Option<&SubgroupRecord> {
        let c = closure(gens);
        self.subgroups.iter().find(|s| s.elements == c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atlas_reproduces_table() {
        let atlas = Atlas::compute().unwrap();
        atlas.verify().unwrap();
    }

    #[test]
    fn named_generators() {
        let atlas = Atlas::compute().unwrap();
        // the order-8 cyclic subgroup generated by [[0,1],[1,1]]
        let c8 = atlas.subgroup_generated(&[[0, 1, 1, 1]]).unwrap();
        assert_eq!(c8.label, IsoLabel::C8);
        assert_eq!(c8.s4_image, PermLabel::C4);
        // D8 from the stated pair of generators
        let d8 = atlas
            .subgroup_generated(&[[1, 0, 0, 2], [0, 1, 1, 0]])
            .unwrap();
        assert_eq!(d8.label, IsoLabel::D8);
        assert_eq!(d8.s4_image, PermLabel::C2xC2);
        // trivial subgroup
        let triv = atlas.subgroup_generated(&[]).unwrap();
        assert_eq!(triv.label, IsoLabel::C1);
    }

    #[test]
    fn subgroup_count_sanity() {
        // GL₂(F₃) has 55 subgroups in total
        let atlas = Atlas::compute().unwrap();
        assert_eq!(atlas.subgroups.len(), 55);
    }
}
