/// Union-find with union by size and path halving. Used to summarize static
/// edge sets (observed graphs) in one pass.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    /// Two largest block sizes; the second is 0 when there is one block.
    pub fn top_two(&self) -> (usize, usize) {
        let (mut s1, mut s2) = (0usize, 0usize);
        for (x, &p) in self.parent.iter().enumerate() {
            if p as usize != x {
                continue;
            }
            let s = self.size[x] as usize;
            if s > s1 {
                s2 = s1;
                s1 = s;
            } else if s > s2 {
                s2 = s;
            }
        }
        (s1, s2)
    }
}
