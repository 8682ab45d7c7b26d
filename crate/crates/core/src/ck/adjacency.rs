use std::fmt;

use serde::{Deserialize, Serialize};

use super::CkError;

/// A 0/1 matrix with no zero row and no zero column.
///
/// JSON form: `{"n": 2, "a": [[1, 1], [1, 0]]}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AdjacencyJson", into = "AdjacencyJson")]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<Vec<u8>>,
    /// `special[l]` is the largest `j` with `a_{l,j} = 1`; it selects which
    /// monomials are eliminated by the vertex relation.
    special: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct AdjacencyJson {
    n: usize,
    a: Vec<Vec<u8>>,
}

impl TryFrom<AdjacencyJson> for AdjacencyMatrix {
    type Error = CkError;

    fn try_from(j: AdjacencyJson) -> Result<Self, CkError> {
        if j.a.len() != j.n {
            return Err(CkError::InvalidMatrix(format!("declared n={} but {} rows", j.n, j.a.len())));
        }
        AdjacencyMatrix::new(j.a)
    }
}

impl From<AdjacencyMatrix> for AdjacencyJson {
    fn from(m: AdjacencyMatrix) -> Self {
        AdjacencyJson { n: m.n, a: m.entries }
    }
}

impl AdjacencyMatrix {
    pub fn new(entries: Vec<Vec<u8>>) -> Result<Self, CkError> {
        let n = entries.len();
        if n == 0 || n > 9 {
            return Err(CkError::InvalidMatrix(format!("size {n} outside 1..=9")));
        }
        if entries.iter().any(|r| r.len() != n) {
            return Err(CkError::InvalidMatrix("matrix must be square".into()));
        }
        if entries.iter().flatten().any(|&x| x > 1) {
            return Err(CkError::InvalidMatrix("entries must be 0 or 1".into()));
        }
        for i in 0..n {
            if entries[i].iter().all(|&x| x == 0) {
                return Err(CkError::InvalidMatrix(format!("row {} is zero", i + 1)));
            }
            if entries.iter().all(|r| r[i] == 0) {
                return Err(CkError::InvalidMatrix(format!("column {} is zero", i + 1)));
            }
        }
        let special = entries
            .iter()
            .map(|r| r.iter().rposition(|&x| x == 1).expect("row is nonzero") as u8 + 1)
            .collect();
        Ok(AdjacencyMatrix { n, entries, special })
    }

    pub fn all_ones(n: usize) -> Self {
        Self::new(vec![vec![1; n]; n]).expect("all-ones matrix is valid")
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "allones2" => Some(Self::all_ones(2)),
            "allones3" => Some(Self::all_ones(3)),
            "fib2" => Some(Self::new(vec![vec![1, 1], vec![1, 0]]).expect("valid")),
            _ => None,
        }
    }

    pub const PRESETS: [&'static str; 3] = ["allones2", "fib2", "allones3"];

    /// Every valid matrix of size `n` (no zero rows or columns).
    pub fn enumerate(n: usize) -> Vec<Self> {
        (0u32..1 << (n * n))
            .filter_map(|bits| {
                let rows = (0..n).map(|i| (0..n).map(|j| ((bits >> (i * n + j)) & 1) as u8).collect()).collect();
                Self::new(rows).ok()
            })
            .collect()
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `a_{i,j}` with 1-based indices.
    pub fn get(&self, i: u8, j: u8) -> bool {
        self.entries[i as usize - 1][j as usize - 1] == 1
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.entries
    }

    pub fn special(&self, l: u8) -> u8 {
        self.special[l as usize - 1]
    }

    pub fn successors(&self, i: u8) -> impl Iterator<Item = u8> + '_ {
        (1..=self.n as u8).filter(move |&j| self.get(i, j))
    }

    pub fn is_admissible(&self, path: &[u8]) -> bool {
        path.iter().all(|&x| x >= 1 && x as usize <= self.n) && path.windows(2).all(|w| self.get(w[0], w[1]))
    }
}

impl fmt::Debug for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{:?}", self.entries)
    }
}
