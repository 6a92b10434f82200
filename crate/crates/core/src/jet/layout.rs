//! Index bookkeeping for symmetric derivative arrays.
//!
//! Partial derivatives up to order four of a function of `m` variables are
//! stored in one flat array, degree by degree, each degree enumerating the
//! sorted multi-indices `i <= j <= k <= l` lexicographically. All product and
//! chain rules are driven by tables precomputed here once per variable count.

use std::sync::OnceLock;

pub const MAX_VARS: usize = 8;
pub const MAX_ORDER: usize = 4;

/// Flat index of one term `f^(k) * prod(a[block])` in Faà di Bruno's formula.
#[derive(Debug, Clone)]
pub(crate) struct Partition {
    pub blocks: usize,
    pub parts: [u16; 4],
}

#[derive(Debug)]
pub(crate) struct Layout {
    pub m: usize,
    /// `offsets[d]` is the first flat index of degree `d`; `offsets[5]` is the total length.
    pub offsets: [usize; MAX_ORDER + 2],
    pub tuples: Vec<([u8; 4], u8)>,
    lookup: Vec<u16>,
    /// Leibniz pairs per flat index.
    pub leibniz: Vec<Vec<(u16, u16)>>,
    /// Set partitions of the index positions per flat index.
    pub partitions: Vec<Vec<Partition>>,
    /// `append[v][g]`: flat index of multi-index `g` extended by variable `v`.
    pub append: Vec<Vec<u16>>,
}

impl Layout {
    fn build(m: usize) -> Self {
        let mut tuples: Vec<([u8; 4], u8)> = vec![([0; 4], 0)];
        let mut offsets = [0usize; MAX_ORDER + 2];
        offsets[1] = 1;
        let mut current: Vec<Vec<u8>> = vec![vec![]];
        for degree in 1..=MAX_ORDER {
            let mut next = Vec::new();
            for t in &current {
                let start = t.last().copied().unwrap_or(0);
                for v in start..m as u8 {
                    let mut nt = t.clone();
                    nt.push(v);
                    next.push(nt);
                }
            }
            for t in &next {
                let mut arr = [0u8; 4];
                arr[..t.len()].copy_from_slice(t);
                tuples.push((arr, degree as u8));
            }
            offsets[degree + 1] = offsets[degree] + next.len();
            current = next;
        }

        let dense = |t: &[u8]| -> usize {
            // base-(m) encoding with degree prefix keeps every degree disjoint
            let mut code = 0usize;
            for &v in t {
                code = code * m + v as usize;
            }
            let mut base = 0usize;
            let mut width = 1usize;
            for _ in 0..t.len() {
                base += width;
                width *= m;
            }
            base + code
        };
        let mut size = 0usize;
        let mut width = 1usize;
        for _ in 0..=MAX_ORDER {
            size += width;
            width *= m;
        }
        let mut lookup = vec![u16::MAX; size];
        // every permutation of a tuple maps to the same flat index
        for (g, (arr, deg)) in tuples.iter().enumerate() {
            let t = &arr[..*deg as usize];
            for perm in permutations(t) {
                lookup[dense(&perm)] = g as u16;
            }
        }

        let mut layout = Layout {
            m,
            offsets,
            tuples,
            lookup,
            leibniz: Vec::new(),
            partitions: Vec::new(),
            append: Vec::new(),
        };

        let total = layout.offsets[MAX_ORDER + 1];
        let mut leibniz = Vec::with_capacity(total);
        let mut partitions = Vec::with_capacity(total);
        for g in 0..total {
            let (arr, deg) = layout.tuples[g];
            let t = &arr[..deg as usize];
            let d = t.len();
            let mut pairs = Vec::with_capacity(1 << d);
            for mask in 0..(1u32 << d) {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (pos, &v) in t.iter().enumerate() {
                    if mask & (1 << pos) != 0 {
                        left.push(v);
                    } else {
                        right.push(v);
                    }
                }
                pairs.push((layout.index(&left) as u16, layout.index(&right) as u16));
            }
            leibniz.push(pairs);

            let mut parts = Vec::new();
            if d > 0 {
                for blocks in set_partitions(d) {
                    let mut p = Partition {
                        blocks: blocks.len(),
                        parts: [0; 4],
                    };
                    for (b, block) in blocks.iter().enumerate() {
                        let vars: Vec<u8> = block.iter().map(|&pos| t[pos]).collect();
                        p.parts[b] = layout.index(&vars) as u16;
                    }
                    parts.push(p);
                }
            }
            partitions.push(parts);
        }
        let mut append = Vec::with_capacity(m);
        for v in 0..m as u8 {
            let row = (0..layout.offsets[MAX_ORDER])
                .map(|g| {
                    let (arr, deg) = layout.tuples[g];
                    let mut t = arr[..deg as usize].to_vec();
                    t.push(v);
                    layout.index(&t) as u16
                })
                .collect();
            append.push(row);
        }
        layout.leibniz = leibniz;
        layout.partitions = partitions;
        layout.append = append;
        layout
    }

    /// Flat index of an arbitrary (unsorted) multi-index.
    pub fn index(&self, vars: &[u8]) -> usize {
        let m = self.m;
        let mut code = 0usize;
        let mut base = 0usize;
        let mut width = 1usize;
        for &v in vars {
            code = code * m + v as usize;
        }
        for _ in 0..vars.len() {
            base += width;
            width *= m;
        }
        self.lookup[base + code] as usize
    }

    /// Number of stored coefficients for a jet truncated at `order`.
    #[inline]
    pub fn len(&self, order: usize) -> usize {
        self.offsets[order + 1]
    }
}

fn permutations(t: &[u8]) -> Vec<Vec<u8>> {
    if t.len() <= 1 {
        return vec![t.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..t.len() {
        let mut rest = t.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// All set partitions of `{0, .., d-1}`.
fn set_partitions(d: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for item in 0..d {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(item);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![item]);
            next.push(q);
        }
        out = next;
    }
    out
}

pub(crate) fn layout(m: usize) -> &'static Layout {
    static LAYOUTS: OnceLock<Vec<Layout>> = OnceLock::new();
    &LAYOUTS.get_or_init(|| (0..=MAX_VARS).map(Layout::build).collect())[m]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_multiset_counts() {
        let l = layout(8);
        assert_eq!(l.offsets[2] - l.offsets[1], 8);
        assert_eq!(l.offsets[3] - l.offsets[2], 36);
        assert_eq!(l.offsets[4] - l.offsets[3], 120);
        assert_eq!(l.offsets[5] - l.offsets[4], 330);
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=4).map(|d| set_partitions(d).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15]);
    }

    #[test]
    fn lookup_is_permutation_invariant() {
        let l = layout(3);
        assert_eq!(l.index(&[2, 0, 1]), l.index(&[0, 1, 2]));
        assert_eq!(l.index(&[1, 1, 0, 2]), l.index(&[0, 1, 1, 2]));
        assert_ne!(l.index(&[0, 0]), l.index(&[0, 1]));
    }
}
