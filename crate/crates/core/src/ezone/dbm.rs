use super::bound::Bound;

/// Square matrix of bounds; entry `(j, i)` bounds `x_j - x_i`, index 0 is
/// the constant-zero reference clock.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dbm {
    dim: usize,
    cells: Vec<Bound>,
}

impl Dbm {
    /// Unconstrained matrix over `clocks` clocks (dimension `clocks + 1`)
    /// with zero diagonal.
    pub fn unconstrained(clocks: usize) -> Self {
        let dim = clocks + 1;
        let mut cells = vec![Bound::INF; dim * dim];
        for i in 0..dim {
            cells[i * dim + i] = Bound::ZERO;
        }
        Dbm { dim, cells }
    }

    /// The canonical form of every inconsistent matrix of this dimension.
    pub fn empty(clocks: usize) -> Self {
        let dim = clocks + 1;
        Dbm {
            dim,
            cells: vec![Bound::le(-1); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, j: usize, i: usize) -> Bound {
        self.cells[j * self.dim + i]
    }

    #[inline]
    pub fn set(&mut self, j: usize, i: usize, b: Bound) {
        self.cells[j * self.dim + i] = b;
    }

    /// Tightens `(j, i)` to `min(current, b)`.
    #[inline]
    pub fn tighten(&mut self, j: usize, i: usize, b: Bound) {
        let idx = j * self.dim + i;
        if b < self.cells[idx] {
            self.cells[idx] = b;
        }
    }

    /// Min-plus all-pairs closure.
    pub fn close(&mut self) {
        let n = self.dim;
        for k in 0..n {
            for j in 0..n {
                let jk = self.cells[j * n + k];
                if jk.is_infinite() {
                    continue;
                }
                for i in 0..n {
                    let via = jk + self.cells[k * n + i];
                    if via < self.cells[j * n + i] {
                        self.cells[j * n + i] = via;
                    }
                }
            }
        }
    }

    /// Valid only on a closed matrix.
    pub fn closed_is_consistent(&self) -> bool {
        (0..self.dim).all(|i| !self.get(i, i).is_negative_cycle())
    }

    pub fn is_closed(&self) -> bool {
        let n = self.dim;
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    if self.get(j, k) + self.get(k, i) < self.get(j, i) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Drops clock `idx` (1-based clock index), shifting later clocks down.
    pub fn remove_clock(&self, idx: usize) -> Dbm {
        let keep: Vec<usize> = (0..self.dim).filter(|&k| k != idx).collect();
        self.select(&keep)
    }

    /// Matrix over the listed original indices, in that order.
    pub fn select(&self, keep: &[usize]) -> Dbm {
        let dim = keep.len();
        let mut cells = Vec::with_capacity(dim * dim);
        for &j in keep {
            for &i in keep {
                cells.push(self.get(j, i));
            }
        }
        Dbm { dim, cells }
    }

    /// Appends an unconstrained clock.
    pub fn push_clock(&self) -> Dbm {
        let dim = self.dim + 1;
        let mut out = Dbm::unconstrained(dim - 1);
        for j in 0..self.dim {
            for i in 0..self.dim {
                out.set(j, i, self.get(j, i));
            }
        }
        out
    }

    pub fn cells(&self) -> &[Bound] {
        &self.cells
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_tightens_through_reference() {
        let mut d = Dbm::unconstrained(2);
        d.set(1, 0, Bound::le(5));
        d.set(2, 1, Bound::le(1));
        d.close();
        assert_eq!(d.get(2, 0), Bound::le(6));
        assert!(d.closed_is_consistent());
        assert!(d.is_closed());
    }

    #[test]
    fn strict_zero_cycle_is_inconsistent() {
        let mut d = Dbm::unconstrained(1);
        d.set(1, 0, Bound::le(2));
        d.set(0, 1, Bound::lt(-2));
        d.close();
        assert!(!d.closed_is_consistent());
    }

    #[test]
    fn remove_and_push() {
        let mut d = Dbm::unconstrained(2);
        d.set(2, 0, Bound::le(7));
        let r = d.remove_clock(1);
        assert_eq!(r.dim(), 2);
        assert_eq!(r.get(1, 0), Bound::le(7));
        let p = r.push_clock();
        assert_eq!(p.get(2, 0), Bound::INF);
        assert_eq!(p.get(2, 2), Bound::ZERO);
    }
}
