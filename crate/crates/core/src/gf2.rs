//! Homogeneous linear systems over GF(2).

/// A row of bits packed into words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if self.get(i) != v {
            self.flip(i);
        }
    }

    pub fn xor_with(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }

    pub fn is_subset_of(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// A basis of the solution space of `rows · x = 0` in `n` unknowns.
pub fn null_space(rows: &[Bits], n: usize) -> Vec<Bits> {
    let mut m: Vec<Bits> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i].get(col)) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(col) {
                row.xor_with(&pivot);
            }
        }
        pivots.push(col);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = Bits::zeros(n);
        v.set(free, true);
        for (i, &pc) in pivots.iter().enumerate() {
            if m[i].get(free) {
                v.set(pc, true);
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &[usize], n: usize) -> Bits {
        let mut b = Bits::zeros(n);
        for &i in bits {
            b.flip(i);
        }
        b
    }

    #[test]
    fn triangle_parity() {
        let basis = null_space(&[row(&[0, 1, 2], 3)], 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert_eq!(v.to_vec().iter().filter(|b| **b).count() % 2, 0);
        }
    }

    #[test]
    fn wide_rows() {
        let n = 130;
        let rows: Vec<_> = (0..n - 1).map(|i| row(&[i, i + 1], n)).collect();
        let basis = null_space(&rows, n);
        assert_eq!(basis.len(), 1);
        assert!(basis[0].to_vec().iter().all(|b| *b));
    }
}
