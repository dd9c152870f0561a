//! Backtracking searches over orthogonality graphs: maximum clique, exact
//! partition into frames (cross polytopes), and maximum disjoint-frame
//! packing.
//!
//! Vertices are antipodal classes in a fixed lexicographic order; every
//! search explores branches in that order, so the first solution found is
//! the lexicographically least one and results are deterministic.

/// Default node budget for exhaustive searches.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub budget: u64,
    pub nodes: u64,
}

/// Orthogonality graph on classes, with one entry per vertex naming the
/// direct-sum component it belongs to. A frame takes exactly `comp_rank[c]`
/// vertices from component c (distinct components are always orthogonal and
/// no component holds more mutually orthogonal classes than its rank), which
/// gives the packing search its pruning bound.
pub struct ClassGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    pub frame_size: usize,
    pub component: Vec<usize>,
    pub comp_rank: Vec<usize>,
}

impl ClassGraph {
    pub fn new(vectors: &[Vec<i64>], frame_size: usize) -> Self {
        let component = vec![0; vectors.len()];
        Self::with_components(vectors, frame_size, component, vec![frame_size])
    }

    pub fn with_components(
        vectors: &[Vec<i64>],
        frame_size: usize,
        component: Vec<usize>,
        comp_rank: Vec<usize>,
    ) -> Self {
        let n = vectors.len();
        debug_assert_eq!(comp_rank.iter().sum::<usize>(), frame_size);
        let words = n.div_ceil(64);
        let mut adj = vec![0u64; n * words];
        for i in 0..n {
            for j in i + 1..n {
                let dot: i64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
                if dot == 0 {
                    adj[i * words + j / 64] |= 1 << (j % 64);
                    adj[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        ClassGraph { n, words, adj, frame_size, component, comp_rank }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    fn take_first(set: &[u64]) -> Option<usize> {
        for (w, &bits) in set.iter().enumerate() {
            if bits != 0 {
                return Some(w * 64 + bits.trailing_zeros() as usize);
            }
        }
        None
    }

    fn count(set: &[u64]) -> usize {
        set.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Size of the largest set of pairwise-orthogonal classes.
    pub fn max_clique(&self) -> usize {
        let mut best = 0;
        let full: Vec<u64> = self.full_set();
        let mut cand = full;
        self.clique_rec(&mut cand, 0, &mut best);
        best
    }

    fn full_set(&self) -> Vec<u64> {
        let mut set = vec![!0u64; self.words];
        let spare = self.words * 64 - self.n;
        if spare > 0 {
            set[self.words - 1] >>= spare;
        }
        set
    }

    fn clique_rec(&self, cand: &mut [u64], size: usize, best: &mut usize) {
        if size > *best {
            *best = size;
        }
        if size + Self::count(cand) <= *best {
            return;
        }
        while let Some(v) = Self::take_first(cand) {
            if size + Self::count(cand) <= *best {
                return;
            }
            cand[v / 64] &= !(1 << (v % 64));
            let mut next: Vec<u64> = cand.iter().zip(self.row(v)).map(|(a, b)| a & b).collect();
            self.clique_rec(&mut next, size + 1, best);
        }
    }

    /// Partitions all classes into frames of `frame_size` mutually orthogonal
    /// classes. Returns the lexicographically first partition, or None after
    /// exhausting the space.
    pub fn partition_frames(&self, budget: u64) -> Result<PartitionOutcome, BudgetExceeded> {
        if !self.n.is_multiple_of(self.frame_size) {
            return Ok(PartitionOutcome { parts: None, nodes: 0 });
        }
        let mut uncovered = self.full_set();
        let mut nodes = 0u64;
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let found = self.partition_rec(&mut uncovered, &mut parts, &mut nodes, budget)?;
        Ok(PartitionOutcome { parts: if found { Some(parts) } else { None }, nodes })
    }

    fn partition_rec(
        &self,
        uncovered: &mut Vec<u64>,
        parts: &mut Vec<Vec<usize>>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool, BudgetExceeded> {
        let anchor = match Self::take_first(uncovered) {
            None => return Ok(true),
            Some(v) => v,
        };
        // anchor = least uncovered class; it must join some frame now
        let cand: Vec<u64> = uncovered.iter().zip(self.row(anchor)).map(|(a, b)| a & b).collect();
        let mut frame = vec![anchor];
        uncovered[anchor / 64] &= !(1 << (anchor % 64));
        let res = self.extend_frame(&mut frame, cand, uncovered, parts, nodes, budget)?;
        uncovered[anchor / 64] |= 1 << (anchor % 64);
        Ok(res)
    }

    fn extend_frame(
        &self,
        frame: &mut Vec<usize>,
        cand: Vec<u64>,
        uncovered: &mut Vec<u64>,
        parts: &mut Vec<Vec<usize>>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool, BudgetExceeded> {
        *nodes += 1;
        if *nodes > budget {
            return Err(BudgetExceeded { budget, nodes: *nodes });
        }
        if frame.len() == self.frame_size {
            parts.push(frame.clone());
            // the anchor is already cleared by the caller
            for &v in frame.iter().skip(1) {
                uncovered[v / 64] &= !(1 << (v % 64));
            }
            let done = self.partition_rec(uncovered, parts, nodes, budget)?;
            if done {
                return Ok(true);
            }
            parts.pop();
            for &v in frame.iter().skip(1) {
                uncovered[v / 64] |= 1 << (v % 64);
            }
            return Ok(false);
        }
        if frame.len() + Self::count(&cand) < self.frame_size {
            return Ok(false);
        }
        let mut rest = cand;
        while let Some(v) = Self::take_first(&rest) {
            rest[v / 64] &= !(1 << (v % 64));
            let next: Vec<u64> = rest.iter().zip(self.row(v)).map(|(a, b)| a & b).collect();
            frame.push(v);
            let done = self.extend_frame(frame, next, uncovered, parts, nodes, budget)?;
            frame.pop();
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Maximum number of disjoint frames, with a lexicographically first
    /// witness. Exact: the search exhausts the space under the component
    /// bound unless the budget trips.
    pub fn max_packing(&self, budget: u64) -> Result<PackingOutcome, BudgetExceeded> {
        let comp_count = self.comp_rank.len();
        let mut remaining = vec![0usize; comp_count];
        for &c in &self.component {
            remaining[c] += 1;
        }
        let mut state = PackState {
            undecided: self.full_set(),
            remaining,
            current: Vec::new(),
            best: Vec::new(),
            nodes: 0,
            budget,
        };
        self.pack_rec(&mut state)?;
        Ok(PackingOutcome { count: state.best.len(), frames: state.best, nodes: state.nodes })
    }

    fn pack_bound(&self, remaining: &[usize]) -> usize {
        remaining
            .iter()
            .zip(&self.comp_rank)
            .map(|(&rem, &rank)| rem / rank)
            .min()
            .unwrap_or(0)
    }

    fn pack_rec(&self, st: &mut PackState) -> Result<(), BudgetExceeded> {
        st.nodes += 1;
        if st.nodes > st.budget {
            return Err(BudgetExceeded { budget: st.budget, nodes: st.nodes });
        }
        if st.current.len() + self.pack_bound(&st.remaining) <= st.best.len() {
            return Ok(());
        }
        let anchor = match Self::take_first(&st.undecided) {
            None => {
                if st.current.len() > st.best.len() {
                    st.best = st.current.clone();
                }
                return Ok(());
            }
            Some(v) => v,
        };
        if st.current.len() > st.best.len() {
            st.best = st.current.clone();
        }
        // branch 1..: frames through the anchor, in lexicographic order
        let cand: Vec<u64> = st.undecided.iter().zip(self.row(anchor)).map(|(a, b)| a & b).collect();
        let mut frame = vec![anchor];
        self.pack_extend(&mut frame, cand, st)?;
        // final branch: leave the anchor uncovered
        st.undecided[anchor / 64] &= !(1 << (anchor % 64));
        st.remaining[self.component[anchor]] -= 1;
        self.pack_rec(st)?;
        st.remaining[self.component[anchor]] += 1;
        st.undecided[anchor / 64] |= 1 << (anchor % 64);
        Ok(())
    }

    fn pack_extend(&self, frame: &mut Vec<usize>, cand: Vec<u64>, st: &mut PackState) -> Result<(), BudgetExceeded> {
        if frame.len() == self.frame_size {
            for &v in frame.iter() {
                st.undecided[v / 64] &= !(1 << (v % 64));
                st.remaining[self.component[v]] -= 1;
            }
            st.current.push(frame.clone());
            self.pack_rec(st)?;
            st.current.pop();
            for &v in frame.iter() {
                st.undecided[v / 64] |= 1 << (v % 64);
                st.remaining[self.component[v]] += 1;
            }
            return Ok(());
        }
        st.nodes += 1;
        if st.nodes > st.budget {
            return Err(BudgetExceeded { budget: st.budget, nodes: st.nodes });
        }
        if frame.len() + Self::count(&cand) < self.frame_size {
            return Ok(());
        }
        let mut rest = cand;
        while let Some(v) = Self::take_first(&rest) {
            rest[v / 64] &= !(1 << (v % 64));
            let next: Vec<u64> = rest.iter().zip(self.row(v)).map(|(a, b)| a & b).collect();
            frame.push(v);
            self.pack_extend(frame, next, st)?;
            frame.pop();
        }
        Ok(())
    }
}

struct PackState {
    undecided: Vec<u64>,
    remaining: Vec<usize>,
    current: Vec<Vec<usize>>,
    best: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

#[derive(Debug, Clone)]
pub struct PartitionOutcome {
    pub parts: Option<Vec<Vec<usize>>>,
    pub nodes: u64,
}

#[derive(Debug, Clone)]
pub struct PackingOutcome {
    pub count: usize,
    pub frames: Vec<Vec<usize>>,
    pub nodes: u64,
}
