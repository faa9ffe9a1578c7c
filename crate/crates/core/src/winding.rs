//! Union-find that tracks displacement along the periodic direction.
//!
//! Each node stores its offset to the parent. Uniting two nodes that are
//! already connected with an offset different from the recorded one means
//! the component contains a cycle of nonzero winding.

#[derive(Clone, Debug)]
pub struct WindingUnionFind {
    parent: Vec<usize>,
    // position(node) - position(parent)
    offset: Vec<i32>,
    rank: Vec<u8>,
    wraps: Vec<bool>,
    components: usize,
}

impl WindingUnionFind {
    pub fn new(n: usize) -> Self {
        WindingUnionFind {
            parent: (0..n).collect(),
            offset: vec![0; n],
            rank: vec![0; n],
            wraps: vec![false; n],
            components: n,
        }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
        self.offset.fill(0);
        self.rank.fill(0);
        self.wraps.fill(false);
        self.components = self.parent.len();
    }

    /// Root of `x` and the displacement from the root to `x`.
    pub fn find(&mut self, x: usize) -> (usize, i32) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (root, d) = self.find(p);
        self.offset[x] += d;
        self.parent[x] = root;
        (root, self.offset[x])
    }

    /// Record an edge from `a` to `b` that advances by `delta`.
    pub fn union(&mut self, a: usize, b: usize, delta: i32) {
        let (ra, da) = self.find(a);
        let (rb, db) = self.find(b);
        if ra == rb {
            if db - da != delta {
                self.wraps[ra] = true;
            }
            return;
        }
        // position(rb) - position(ra) = da + delta - db
        let shift = da + delta - db;
        let (child, root, child_off) = if self.rank[ra] < self.rank[rb] {
            (ra, rb, -shift)
        } else {
            (rb, ra, shift)
        };
        self.parent[child] = root;
        self.offset[child] = child_off;
        if self.rank[ra] == self.rank[rb] {
            self.rank[root] += 1;
        }
        self.wraps[root] |= self.wraps[child];
        self.components -= 1;
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn wraps(&mut self, x: usize) -> bool {
        let (r, _) = self.find(x);
        self.wraps[r]
    }

    /// Number of components containing a cycle of nonzero winding.
    pub fn wrapping_components(&self) -> usize {
        (0..self.parent.len())
            .filter(|&i| self.parent[i] == i && self.wraps[i])
            .count()
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a).0 == self.find(b).0
    }
}
