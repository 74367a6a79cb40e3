use std::fmt;

/// A labelled matrix over `𝔽_ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlMatrix {
    ell: u64,
    entries: Vec<Vec<u64>>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl FlMatrix {
    /// Reduces integer entries mod `ell`.
    ///
    /// # Panics
    /// If the label counts do not match the shape of `rows`.
    pub fn from_ints(ell: u64, rows: &[Vec<i128>], row_labels: Vec<String>, col_labels: Vec<String>) -> FlMatrix {
        assert_eq!(rows.len(), row_labels.len());
        assert!(rows.iter().all(|r| r.len() == col_labels.len()));
        let m = ell as i128;
        let entries = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(m) as u64).collect()).collect();
        FlMatrix { ell, entries, row_labels, col_labels }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn nrows(&self) -> usize {
        self.entries.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&x| x == 0)
    }

    /// Rank by row reduction.
    pub fn rank(&self) -> usize {
        let p = self.ell as u128;
        let mut a: Vec<Vec<u128>> = self.entries.iter().map(|r| r.iter().map(|&x| x as u128).collect()).collect();
        let (rows, cols) = (self.nrows(), self.ncols());
        let mut rank = 0;
        for c in 0..cols {
            let Some(pr) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
            a.swap(rank, pr);
            let inv = pow_mod(a[rank][c], p - 2, p);
            for x in a[rank].iter_mut() {
                *x = *x * inv % p;
            }
            let pivot = a[rank].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let f = row[c];
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x = (*x + p * p - f * y) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

fn pow_mod(mut b: u128, mut e: u128, p: u128) -> u128 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl fmt::Display for FlMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "over F_{}: {}", self.ell, self.col_labels.join(" "))?;
        for (label, row) in self.row_labels.iter().zip(&self.entries) {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "{label}: {}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(k: usize) -> Vec<String> {
        (0..k).map(|i| i.to_string()).collect()
    }

    #[test]
    fn rank_examples() {
        let m = FlMatrix::from_ints(2, &[vec![1, 1], vec![1, -1]], labels(2), labels(2));
        assert_eq!(m.rank(), 1);
        let m = FlMatrix::from_ints(3, &[vec![1, 1], vec![1, -1]], labels(2), labels(2));
        assert_eq!(m.rank(), 2);
        let m = FlMatrix::from_ints(5, &[vec![5, 10, 0]], labels(1), labels(3));
        assert_eq!(m.rank(), 0);
        assert!(m.is_zero());
    }
}
