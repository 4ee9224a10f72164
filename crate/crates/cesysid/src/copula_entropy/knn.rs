//! k-nearest-neighbor distances under the Chebyshev norm.
//!
//! Two interchangeable backends: a kd-tree and an exhaustive scan. The
//! kd-tree prunes only on proven bounds, so both return bit-identical
//! k-th-neighbor distances; the exhaustive scan is the correctness oracle.

/// Which neighbor-search backend to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborBackend {
    /// kd-tree for low dimension and larger samples, exhaustive otherwise.
    Auto,
    KdTree,
    Exhaustive,
}

/// Chebyshev (max-coordinate) distance.
#[inline]
pub fn chebyshev(a: &[f64], b: &[f64]) -> f64 {
    let mut d = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        let diff = (x - y).abs();
        if diff > d {
            d = diff;
        }
    }
    d
}

/// Bounded buffer keeping the `cap` smallest values seen, max on top.
struct BoundedMax {
    cap: usize,
    vals: Vec<f64>,
}

impl BoundedMax {
    fn new(cap: usize) -> Self {
        Self { cap, vals: Vec::with_capacity(cap + 1) }
    }

    #[inline]
    fn push(&mut self, v: f64) {
        if self.vals.len() < self.cap {
            self.vals.push(v);
            self.sift_up();
        } else if v < self.vals[0] {
            self.vals[0] = v;
            self.sift_down();
        }
    }

    #[inline]
    fn full(&self) -> bool {
        self.vals.len() == self.cap
    }

    /// Current worst (largest) retained distance; +inf until full.
    #[inline]
    fn worst(&self) -> f64 {
        if self.full() {
            self.vals[0]
        } else {
            f64::INFINITY
        }
    }

    fn sift_up(&mut self) {
        let mut i = self.vals.len() - 1;
        while i > 0 {
            let parent = (i - 1) / 2;
            if self.vals[i] > self.vals[parent] {
                self.vals.swap(i, parent);
                i = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self) {
        let n = self.vals.len();
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut largest = i;
            if l < n && self.vals[l] > self.vals[largest] {
                largest = l;
            }
            if r < n && self.vals[r] > self.vals[largest] {
                largest = r;
            }
            if largest == i {
                break;
            }
            self.vals.swap(i, largest);
            i = largest;
        }
    }
}

enum Node {
    Leaf { start: usize, len: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

/// kd-tree over row-major points, built once, queried immutably.
pub struct KdTree<'a> {
    points: &'a [f64],
    dim: usize,
    order: Vec<usize>,
    nodes: Vec<Node>,
    root: usize,
}

const LEAF_SIZE: usize = 16;

impl<'a> KdTree<'a> {
    pub fn build(points: &'a [f64], dim: usize) -> Self {
        assert!(dim > 0 && points.len().is_multiple_of(dim));
        let n = points.len() / dim;
        let mut order: Vec<usize> = (0..n).collect();
        let mut nodes = Vec::new();
        let root = Self::build_rec(points, dim, &mut order, 0, n, 0, &mut nodes);
        Self { points, dim, order, nodes, root }
    }

    fn build_rec(
        points: &[f64],
        dim: usize,
        order: &mut [usize],
        start: usize,
        len: usize,
        depth: usize,
        nodes: &mut Vec<Node>,
    ) -> usize {
        if len <= LEAF_SIZE {
            nodes.push(Node::Leaf { start, len });
            return nodes.len() - 1;
        }
        let axis = depth % dim;
        let mid = len / 2;
        let slice = &mut order[start..start + len];
        slice.select_nth_unstable_by(mid, |&a, &b| {
            points[a * dim + axis].total_cmp(&points[b * dim + axis])
        });
        let value = points[slice[mid] * dim + axis];
        let left = Self::build_rec(points, dim, order, start, mid, depth + 1, nodes);
        let right = Self::build_rec(points, dim, order, start + mid, len - mid, depth + 1, nodes);
        nodes.push(Node::Split { axis, value, left, right });
        nodes.len() - 1
    }

    fn query_into(&self, query: &[f64], heap: &mut BoundedMax, node: usize) {
        match self.nodes[node] {
            Node::Leaf { start, len } => {
                for &idx in &self.order[start..start + len] {
                    let p = &self.points[idx * self.dim..(idx + 1) * self.dim];
                    heap.push(chebyshev(query, p));
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = query[axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.query_into(query, heap, near);
                // Any point in the far half differs by at least |diff| on
                // this axis, which lower-bounds its Chebyshev distance.
                if !(heap.full() && diff.abs() >= heap.worst()) {
                    self.query_into(query, heap, far);
                }
            }
        }
    }

    /// Distance to the m-th nearest stored point (1-based, self counts
    /// when the query is a stored point).
    pub fn mth_distance(&self, query: &[f64], m: usize) -> f64 {
        let mut heap = BoundedMax::new(m);
        self.query_into(query, &mut heap, self.root);
        debug_assert!(heap.full());
        heap.worst()
    }
}

fn mth_distance_exhaustive(points: &[f64], dim: usize, query: &[f64], m: usize) -> f64 {
    let n = points.len() / dim;
    let mut heap = BoundedMax::new(m);
    for i in 0..n {
        heap.push(chebyshev(query, &points[i * dim..(i + 1) * dim]));
    }
    debug_assert!(heap.full());
    heap.worst()
}

/// Distance from every point to its k-th nearest neighbor (self excluded).
///
/// Equivalent to the (k+1)-th order statistic of each point's distance
/// multiset with itself included, which is robust to duplicate points.
pub fn kth_neighbor_distances(
    points: &[f64],
    dim: usize,
    k: usize,
    backend: NeighborBackend,
) -> Vec<f64> {
    let n = points.len() / dim;
    let m = k + 1;
    let use_kdtree = match backend {
        NeighborBackend::KdTree => true,
        NeighborBackend::Exhaustive => false,
        NeighborBackend::Auto => dim <= 8 && n >= 64,
    };
    if use_kdtree {
        let tree = KdTree::build(points, dim);
        (0..n)
            .map(|i| tree.mth_distance(&points[i * dim..(i + 1) * dim], m))
            .collect()
    } else {
        (0..n)
            .map(|i| mth_distance_exhaustive(points, dim, &points[i * dim..(i + 1) * dim], m))
            .collect()
    }
}
