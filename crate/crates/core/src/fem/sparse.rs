use crate::Execution;

/// Compressed sparse row matrix with sorted column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Zero matrix whose pattern couples every pair of nodes in each group.
    pub fn from_cliques<'a>(n: usize, groups: impl IntoIterator<Item = &'a [usize]>) -> Self {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
        for g in groups {
            for &i in g {
                rows[i].extend_from_slice(g);
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        row_ptr.push(0);
        for mut r in rows {
            r.sort_unstable();
            r.dedup();
            cols.extend(r);
            row_ptr.push(cols.len());
        }
        let vals = vec![0.0; cols.len()];
        CsrMatrix {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.cols[lo..hi].binary_search(&j).ok().map(|k| lo + k)
    }

    /// Adds `v` at `(i, j)`. Panics if the entry is outside the pattern.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("({i}, {j}) not in sparsity pattern"));
        self.vals[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.vals[k])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    /// `y = A x`. Rows are independent, so both modes give identical bits.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64], exec: Execution) {
        exec.fill(y, |i| self.row(i).map(|(j, a)| a * x[j]).sum());
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec(x, &mut y, Execution::Sequential);
        y
    }

    /// Largest `|a_ij − a_ji|` relative to the largest `|a_ij|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..self.n {
            for (j, a) in self.row(i) {
                scale = scale.max(a.abs());
                worst = worst.max((a - self.get(j, i)).abs());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }
}
