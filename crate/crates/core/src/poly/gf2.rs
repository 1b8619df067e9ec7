//! Dense linear algebra over GF(2) on packed bit rows.

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> BitVec {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> BitVec {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        let w = &mut self.words[i / 64];
        if b {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    /// Inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }
}

/// Row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Matrix {
    ncols: usize,
    rows: Vec<BitVec>,
}

/// Solution set of `A x = b`: `particular + span(null_space)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Solution {
    pub particular: BitVec,
    pub null_space: Vec<BitVec>,
}

/// `A x = b` has no solution. `row` indexes an equation of the original
/// system that is violated by every candidate reduced so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Inconsistent {
    pub row: usize,
}

impl Gf2Matrix {
    pub fn new(ncols: usize) -> Gf2Matrix {
        Gf2Matrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVec>) -> Gf2Matrix {
        assert!(rows.iter().all(|r| r.len() == ncols));
        Gf2Matrix { ncols, rows }
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.ncols);
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn mul_vec(&self, x: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            out.set(i, r.dot(x));
        }
        out
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::from_rows(
            self.rows.len(),
            (0..self.ncols).map(|_| BitVec::zeros(self.rows.len())).collect(),
        );
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Reduced row echelon form. Pivots are chosen column by column from the
    /// left, taking the first available row, so the result is deterministic.
    /// Returns the nonzero rows and their pivot columns.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let (rows, pivots, _) = eliminate(self.rows.clone(), None);
        (Gf2Matrix::from_rows(self.ncols, rows), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, in column order.
    pub fn null_space(&self) -> Vec<BitVec> {
        let (r, pivots) = self.rref();
        null_basis(self.ncols, &r.rows, &pivots)
    }

    pub fn solve(&self, rhs: &BitVec) -> Result<Gf2Solution, Gf2Inconsistent> {
        assert_eq!(rhs.len(), self.rows.len());
        let (rows, pivots, aug) = eliminate(self.rows.clone(), Some(rhs));
        let (aug, bad) = aug.expect("augmented");
        if let Some(row) = bad {
            return Err(Gf2Inconsistent { row });
        }
        let mut particular = BitVec::zeros(self.ncols);
        for (k, &p) in pivots.iter().enumerate() {
            if aug.get(k) {
                particular.set(p, true);
            }
        }
        Ok(Gf2Solution {
            particular,
            null_space: null_basis(self.ncols, &rows, &pivots),
        })
    }
}

type Augmented = Option<(BitVec, Option<usize>)>;

fn eliminate(mut rows: Vec<BitVec>, rhs: Option<&BitVec>) -> (Vec<BitVec>, Vec<usize>, Augmented) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut aug: Option<Vec<bool>> = rhs.map(|b| (0..b.len()).map(|i| b.get(i)).collect());
    let mut origin: Vec<usize> = (0..rows.len()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        origin.swap(r, p);
        if let Some(a) = aug.as_mut() {
            a.swap(r, p);
        }
        let pivot_row = rows[r].clone();
        let pivot_bit = aug.as_ref().map(|a| a[r]);
        for i in 0..rows.len() {
            if i != r && rows[i].get(c) {
                rows[i].xor_assign(&pivot_row);
                if let (Some(a), Some(b)) = (aug.as_mut(), pivot_bit) {
                    a[i] ^= b;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let augmented = aug.map(|a| {
        let bad = (r..rows.len()).find(|&i| a[i]).map(|i| origin[i]);
        let mut v = BitVec::zeros(r);
        for (k, bit) in a.iter().take(r).enumerate() {
            v.set(k, *bit);
        }
        (v, bad)
    });
    rows.truncate(r);
    (rows, pivots, augmented)
}

fn null_basis(ncols: usize, rref_rows: &[BitVec], pivots: &[usize]) -> Vec<BitVec> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !is_pivot[*c]) {
        let mut v = BitVec::zeros(ncols);
        v.set(f, true);
        for (k, &p) in pivots.iter().enumerate() {
            if rref_rows[k].get(f) {
                v.set(p, true);
            }
        }
        out.push(v);
    }
    out
}
