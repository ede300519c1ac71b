//! Union-find with path halving and union by size, used for reverse-time
//! tracking of cluster merges. Packed representation: one i32 per vertex,
//! roots store the negated component size.

#[derive(Debug, Clone)]
pub struct UnionFind {
    /// parent index if ≥ 0, −(component size) at roots.
    slot: Vec<i32>,
}

impl UnionFind {
    /// n+1 slots so vertices can be addressed 1..=n directly.
    pub fn new(n: u32) -> Self {
        UnionFind {
            slot: vec![-1; n as usize + 1],
        }
    }

    /// Re-initializes in place, keeping the allocation.
    pub fn reset(&mut self, n: u32) {
        self.slot.clear();
        self.slot.resize(n as usize + 1, -1);
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        loop {
            let p = self.slot[x as usize];
            if p < 0 {
                return x;
            }
            let gp = self.slot[p as usize];
            if gp < 0 {
                return p as u32;
            }
            self.slot[x as usize] = gp;
            x = gp as u32;
        }
    }

    pub fn size_of_root(&self, root: u32) -> u32 {
        debug_assert!(self.slot[root as usize] < 0);
        (-self.slot[root as usize]) as u32
    }

    /// Unions the components of a and b; returns the new root, or None if
    /// they were already joined.
    pub fn union(&mut self, a: u32, b: u32) -> Option<u32> {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return None;
        }
        // larger component (more negative slot) wins
        if self.slot[ra as usize] > self.slot[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.slot[ra as usize] += self.slot[rb as usize];
        self.slot[rb as usize] = ra as i32;
        Some(ra)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_sizes() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(1, 2).is_some());
        assert!(uf.union(3, 4).is_some());
        assert!(uf.union(2, 3).is_some());
        assert!(uf.union(1, 4).is_none());
        let r = uf.find(4);
        assert_eq!(uf.size_of_root(r), 4);
        assert_ne!(uf.find(5), r);
        uf.reset(5);
        let r4 = uf.find(4);
        assert_eq!(uf.size_of_root(r4), 1);
    }
}
