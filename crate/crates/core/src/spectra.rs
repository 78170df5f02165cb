//! Level Schreier graphs and the spectra of their averaging operators.

use crate::group::level_permutation;
use crate::mealy::{Automaton, MealyError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("matrix is not symmetric (off-diagonal mismatch at ({0}, {1}))")]
    NotSymmetric(usize, usize),
    #[error(transparent)]
    Mealy(#[from] MealyError),
}

/// The action graph on one tree level: a labeled arc `(v, s, s(v))` per
/// vertex and generator.
pub struct SchreierLevelGraph {
    pub level: usize,
    pub vertex_count: usize,
    /// (source, generator state, target)
    pub arcs: Vec<(u32, u8, u32)>,
}

pub fn schreier_level_graph(
    aut: &Automaton,
    n: usize,
) -> Result<SchreierLevelGraph, MealyError> {
    let d = aut.alphabet();
    let mut degree = 1usize;
    for _ in 0..n {
        degree = degree
            .checked_mul(d)
            .filter(|&v| v <= 1 << 12)
            .ok_or(MealyError::LevelTooDeep { level: n })?;
    }
    let mut arcs = Vec::with_capacity(degree * aut.state_count());
    for s in 0..aut.state_count() {
        let perm = level_permutation(aut, &[(s + 1) as i8], n);
        for (v, &img) in perm.iter().enumerate() {
            arcs.push((v as u32, s as u8, img as u32));
        }
    }
    Ok(SchreierLevelGraph {
        level: n,
        vertex_count: degree,
        arcs,
    })
}

impl SchreierLevelGraph {
    /// Per generator, the arc set must be a permutation of the vertices.
    pub fn arcs_are_permutations(&self) -> bool {
        let states: Vec<u8> = {
            let mut s: Vec<u8> = self.arcs.iter().map(|a| a.1).collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        states.iter().all(|&s| {
            let mut hit = vec![false; self.vertex_count];
            let mut out = 0usize;
            for &(_, gs, to) in &self.arcs {
                if gs == s {
                    out += 1;
                    if hit[to as usize] {
                        return false;
                    }
                    hit[to as usize] = true;
                }
            }
            out == self.vertex_count
        })
    }
}

/// Averaging operator of the generator action on one level: the mean of the
/// generators' permutation matrices. With `symmetrize`, generators and their
/// inverses are averaged with duplicates kept, so the matrix is symmetric.
/// Entries are rationals `counts[i][j] / divisor`.
pub struct OperatorMatrix {
    pub dim: usize,
    pub counts: Vec<u32>,
    pub divisor: u32,
}

impl OperatorMatrix {
    pub fn count(&self, row: usize, col: usize) -> u32 {
        self.counts[row * self.dim + col]
    }

    pub fn to_dense(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.divisor as f64)
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.count(i, j) != self.count(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Row sums are `divisor`, i.e. every row of the rational matrix sums
    /// to one.
    pub fn row_sums_are_one(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).map(|j| self.count(i, j)).sum::<u32>() == self.divisor
        })
    }
}

pub fn operator_matrix(
    aut: &Automaton,
    n: usize,
    symmetrize: bool,
) -> Result<OperatorMatrix, MealyError> {
    let d = aut.alphabet();
    let mut dim = 1usize;
    for _ in 0..n {
        dim = dim
            .checked_mul(d)
            .filter(|&v| v <= 1 << 12)
            .ok_or(MealyError::LevelTooDeep { level: n })?;
    }
    // states defining the identity automorphism are dropped from the
    // generating multiset; duplicates among the rest are kept
    let states: Vec<i8> = (0..aut.state_count())
        .filter(|&s| !aut.defines_identity(s))
        .map(|s| (s + 1) as i8)
        .collect();
    let letters: Vec<i8> = if symmetrize {
        states.iter().flat_map(|&l| [l, -l]).collect()
    } else {
        states
    };
    let mut counts = vec![0u32; dim * dim];
    for &l in &letters {
        let perm = level_permutation(aut, &[l], n);
        for (v, &img) in perm.iter().enumerate() {
            counts[v * dim + img as usize] += 1;
        }
    }
    if letters.is_empty() {
        // every state is trivial: the operator is the identity
        for v in 0..dim {
            counts[v * dim + v] = 1;
        }
        return Ok(OperatorMatrix {
            dim,
            counts,
            divisor: 1,
        });
    }
    Ok(OperatorMatrix {
        dim,
        counts,
        divisor: letters.len() as u32,
    })
}

/// Spectrum of a symmetric operator, with the histogram of eigenvalues.
pub struct SpectrumResult {
    /// ascending
    pub eigenvalues: Vec<f64>,
    pub histogram: Histogram,
    /// largest off-diagonal magnitude at termination
    pub residual: f64,
}

pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u32>,
}

impl Histogram {
    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let width = (self.hi - self.lo) / self.counts.len() as f64;
        (self.lo + i as f64 * width, self.lo + (i + 1) as f64 * width)
    }

    fn build(values: &[f64], lo: f64, hi: f64, bins: usize) -> Histogram {
        let mut counts = vec![0u32; bins];
        let width = (hi - lo) / bins as f64;
        for &v in values {
            let mut idx = ((v - lo) / width).floor() as isize;
            if idx < 0 {
                idx = 0;
            }
            if idx as usize >= bins {
                idx = bins as isize - 1;
            }
            counts[idx as usize] += 1;
        }
        Histogram { lo, hi, counts }
    }
}

pub const DEFAULT_SPECTRUM_TOL: f64 = 1e-10;
pub const DEFAULT_HISTOGRAM_BINS: usize = 64;

/// All eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations;
/// sweeps stop once every off-diagonal magnitude is below `tol`.
pub fn symmetric_spectrum(
    matrix: &[f64],
    dim: usize,
    tol: f64,
    bins: usize,
) -> Result<SpectrumResult, SpectrumError> {
    assert_eq!(matrix.len(), dim * dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            if (matrix[i * dim + j] - matrix[j * dim + i]).abs() > 1e-12 {
                return Err(SpectrumError::NotSymmetric(i, j));
            }
        }
    }
    let mut a = matrix.to_vec();
    let max_sweeps = 64;
    let mut residual = off_diagonal_max(&a, dim);
    for _ in 0..max_sweeps {
        if residual < tol {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                if apq.abs() < tol * 1e-2 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                // rotation angle zeroing a[p][q]
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
            }
        }
        residual = off_diagonal_max(&a, dim);
    }
    let mut eigenvalues: Vec<f64> = (0..dim).map(|i| a[i * dim + i]).collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    let histogram = Histogram::build(&eigenvalues, -1.0, 1.0, bins);
    Ok(SpectrumResult {
        eigenvalues,
        histogram,
        residual,
    })
}

fn off_diagonal_max(a: &[f64], dim: usize) -> f64 {
    let mut max = 0.0f64;
    for i in 0..dim {
        for j in (i + 1)..dim {
            max = max.max(a[i * dim + j].abs());
        }
    }
    max
}

/// Eigenvalue lines with 15 significant digits, one per row.
pub fn spectrum_csv(result: &SpectrumResult) -> String {
    let mut out = String::from("eigenvalue\n");
    for v in &result.eigenvalues {
        out.push_str(&format!("{v:.14e}\n"));
    }
    out
}

pub fn histogram_csv(result: &SpectrumResult) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for (i, &count) in result.histogram.counts.iter().enumerate() {
        let (left, right) = result.histogram.bin_edges(i);
        out.push_str(&format!("{left:.6},{right:.6},{count}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decode(n: u64) -> Automaton {
        Automaton::decode_number(n).unwrap()
    }

    fn adding_machine() -> Automaton {
        Automaton::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 1]]).unwrap()
    }

    #[test]
    fn schreier_graph_shapes() {
        // 731 level 1: a swaps, b and c fix.
        let g = schreier_level_graph(&decode(731), 1).unwrap();
        assert_eq!(g.vertex_count, 2);
        assert!(g.arcs.contains(&(0, 0, 1)) && g.arcs.contains(&(1, 0, 0)));
        assert!(g.arcs.contains(&(0, 1, 0)) && g.arcs.contains(&(1, 1, 1)));
        assert!(g.arcs_are_permutations());

        // trivial automaton: all self-loops
        let g = schreier_level_graph(&decode(1), 3).unwrap();
        assert!(g.arcs.iter().all(|&(v, _, to)| v == to));

        // adding machine level 2: a-arcs form the 4-cycle 00->10->01->11->00
        let g = schreier_level_graph(&adding_machine(), 2).unwrap();
        let a_arcs: Vec<(u32, u32)> = g
            .arcs
            .iter()
            .filter(|a| a.1 == 0)
            .map(|a| (a.0, a.2))
            .collect();
        // vertex index: first letter most significant: 00=0, 01=1, 10=2, 11=3
        assert!(a_arcs.contains(&(0, 2)));
        assert!(a_arcs.contains(&(2, 1)));
        assert!(a_arcs.contains(&(1, 3)));
        assert!(a_arcs.contains(&(3, 0)));
    }

    #[test]
    fn operator_matrices() {
        // adding machine, level 1, symmetrized: the swap matrix
        let m = operator_matrix(&adding_machine(), 1, true).unwrap();
        assert_eq!(m.dim, 2);
        assert!(m.is_symmetric());
        assert!(m.row_sums_are_one());
        let dense = m.to_dense();
        assert_eq!(dense, vec![0.0, 1.0, 1.0, 0.0]);

        // trivial automaton: identity matrix
        let m = operator_matrix(&decode(1), 2, false).unwrap();
        let dense = m.to_dense();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(dense[i * 4 + j], if i == j { 1.0 } else { 0.0 });
            }
        }

        // symmetrized matrices are symmetric for every automaton
        for n in [731u64, 846, 852, 2240] {
            assert!(operator_matrix(&decode(n), 3, true).unwrap().is_symmetric());
        }
    }

    #[test]
    fn spectrum_of_small_matrices() {
        let swap = [0.0, 1.0, 1.0, 0.0];
        let s = symmetric_spectrum(&swap, 2, 1e-12, 8).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-12);

        let identity4 = {
            let mut m = vec![0.0; 16];
            for i in 0..4 {
                m[i * 4 + i] = 1.0;
            }
            m
        };
        let s = symmetric_spectrum(&identity4, 4, 1e-12, 8).unwrap();
        assert!(s.eigenvalues.iter().all(|&v| (v - 1.0).abs() < 1e-12));

        let asym = [0.0, 1.0, 0.5, 0.0];
        assert!(symmetric_spectrum(&asym, 2, 1e-12, 8).is_err());
    }

    #[test]
    fn level3_spectrum_of_731_matches_circulant_values() {
        // On level 3 the generator a is an 8-cycle A and b = c = a^-2, so
        // M = (A + A^-1 + 2A^2 + 2A^-2)/6 is a circulant with eigenvalues
        // (cos θ_k + 2 cos 2θ_k)/3 at θ_k = 2πk/8.
        let m = operator_matrix(&decode(731), 3, true).unwrap();
        assert!(m.is_symmetric());
        let s = symmetric_spectrum(&m.to_dense(), m.dim, 1e-12, 64).unwrap();
        let mut expect: Vec<f64> = (0..8)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
                (theta.cos() + 2.0 * (2.0 * theta).cos()) / 3.0
            })
            .collect();
        expect.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(s.eigenvalues.len(), 8);
        for (got, want) in s.eigenvalues.iter().zip(&expect) {
            assert!((got - want).abs() < 1e-9, "got {got}, want {want}");
        }
    }

    #[test]
    fn trace_preserved_and_norm_bounded() {
        for n in [731u64, 820, 852] {
            let aut = decode(n);
            let m = operator_matrix(&aut, 5, true).unwrap();
            let dense = m.to_dense();
            let trace: f64 = (0..m.dim).map(|i| dense[i * m.dim + i]).sum();
            let s = symmetric_spectrum(&dense, m.dim, 1e-10, 64).unwrap();
            let sum: f64 = s.eigenvalues.iter().sum();
            assert!((sum - trace).abs() < 1e-9 * m.dim as f64);
            assert!(s
                .eigenvalues
                .iter()
                .all(|&v| (-1.0 - 1e-10..=1.0 + 1e-10).contains(&v)));
            // eigenvalue 1 present (constant eigenvector)
            assert!(s.eigenvalues.iter().any(|&v| (v - 1.0).abs() < 1e-9));
        }
    }

    #[test]
    fn histogram_includes_boundary_values() {
        let values = [-1.0, -0.5, 0.0, 0.999, 1.0];
        let h = Histogram::build(&values, -1.0, 1.0, 4);
        assert_eq!(h.counts.iter().sum::<u32>(), 5);
        assert_eq!(h.counts[3], 2); // 0.999 and 1.0 in the last bin
    }
}
