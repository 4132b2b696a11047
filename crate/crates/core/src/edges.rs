//! Edge indexing shared by every module.
//!
//! Edges are labelled by the pair of faces that meet on them, in the order
//! `(12, 13, 14, 23, 24, 34)`; here faces are numbered from 0. Face `i` is the
//! face opposite vertex `i`, so the edge shared by faces `i` and `j` joins the
//! two remaining vertices.

/// Face pairs in edge order.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Edges bounding each face, each list sorted by edge index.
pub const FACE_EDGES: [[usize; 3]; 4] = [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]];

/// Printable edge names.
pub const EDGE_NAMES: [&str; 6] = ["12", "13", "14", "23", "24", "34"];

/// Index of the edge shared by faces `i != j`.
pub fn edge_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(a != b && b < 4);
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    }
}

/// The edge sharing no face with `e`.
pub fn opposite(e: usize) -> usize {
    5 - e
}

/// Vertices joined by edge `e`: the complement of its face pair.
pub fn edge_vertices(e: usize) -> (usize, usize) {
    let (i, j) = EDGES[e];
    let mut rest = (0..4).filter(|&v| v != i && v != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

/// All 24 permutations of four faces with their parities.
pub fn face_permutations() -> Vec<([usize; 4], i8)> {
    (0..256usize)
        .map(|c| [(c >> 6) & 3, (c >> 4) & 3, (c >> 2) & 3, c & 3])
        .filter(|p| (0..4).all(|x| (0..x).all(|y| p[x] != p[y])))
        .map(|p| (p, permutation_sign(&p)))
        .collect()
}

fn permutation_sign(p: &[usize; 4]) -> i8 {
    let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 { 1 } else { -1 }
}

/// Relabel edge data under a face permutation: `out[σ(i)σ(j)] = x[ij]`.
pub fn permute_edges<T: Copy>(x: &[T; 6], sigma: &[usize; 4]) -> [T; 6] {
    let mut out = *x;
    for (e, &(i, j)) in EDGES.iter().enumerate() {
        out[edge_index(sigma[i], sigma[j])] = x[e];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_agree() {
        for (f, edges) in FACE_EDGES.iter().enumerate() {
            for &e in edges {
                let (i, j) = EDGES[e];
                assert!(i == f || j == f);
                let (u, v) = edge_vertices(e);
                assert!(u != f && v != f);
            }
        }
        for e in 0..6 {
            let (i, j) = EDGES[e];
            assert_eq!(edge_index(i, j), e);
            assert_eq!(edge_index(j, i), e);
            let o = EDGES[opposite(e)];
            assert!(o.0 != i && o.0 != j && o.1 != i && o.1 != j);
        }
    }

    #[test]
    fn permutations() {
        let perms = face_permutations();
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().map(|p| i32::from(p.1)).sum::<i32>(), 0);
        let x = [0, 1, 2, 3, 4, 5];
        let mut images: Vec<_> = perms.iter().map(|(s, _)| permute_edges(&x, s)).collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 24);
    }
}
