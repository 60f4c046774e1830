//! Batcher odd-even mergesort comparator networks.
//!
//! `O(m log^2 m)` comparators. Non-power-of-two widths are handled by
//! generating the next-power-of-two network and dropping every comparator
//! that touches a virtual wire: virtual wires hold the minimum element, so
//! those comparators are no-ops under descending compare-exchange.

/// A comparator network of the given width. Comparators are wire pairs
/// `(i, j)` with `i < j`; applying one moves the larger value to wire `i`
/// (descending order, so for 0/1 inputs the ones bubble to the front).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparatorNetwork {
    width: usize,
    comparators: Vec<(usize, usize)>,
}

impl ComparatorNetwork {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn comparators(&self) -> &[(usize, usize)] {
        &self.comparators
    }

    pub fn len(&self) -> usize {
        self.comparators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comparators.is_empty()
    }

    /// Applies the network in place, descending.
    pub fn apply<T: Ord + Copy>(&self, values: &mut [T]) {
        assert_eq!(values.len(), self.width);
        for &(i, j) in &self.comparators {
            if values[i] < values[j] {
                values.swap(i, j);
            }
        }
    }

    /// 0-1 principle surface: does the network sort every 0/1 vector
    /// descending? Exhaustive; use for width <= ~20.
    pub fn sorts_all_01(&self) -> bool {
        assert!(self.width <= 24, "exhaustive 0-1 check capped at width 24");
        let mut buf = vec![0u8; self.width];
        for mask in 0u32..1 << self.width {
            for (b, x) in buf.iter_mut().enumerate() {
                *x = (mask >> b & 1) as u8;
            }
            self.apply(&mut buf);
            if buf.windows(2).any(|w| w[0] < w[1]) {
                return false;
            }
        }
        true
    }
}

/// Batcher odd-even mergesort network of width `m >= 1`.
pub fn batcher_network(m: usize) -> ComparatorNetwork {
    assert!(m >= 1, "network width must be >= 1");
    let padded = m.next_power_of_two();
    let mut comparators = Vec::new();
    sort_range(0, padded, &mut comparators);
    comparators.retain(|&(_, j)| j < m);
    ComparatorNetwork {
        width: m,
        comparators,
    }
}

fn sort_range(lo: usize, n: usize, out: &mut Vec<(usize, usize)>) {
    if n > 1 {
        let half = n / 2;
        sort_range(lo, half, out);
        sort_range(lo + half, half, out);
        merge_range(lo, n, 1, out);
    }
}

fn merge_range(lo: usize, n: usize, r: usize, out: &mut Vec<(usize, usize)>) {
    let step = r * 2;
    if step < n {
        merge_range(lo, n, step, out);
        merge_range(lo + r, n, step, out);
        let mut i = lo + r;
        while i + r < lo + n {
            out.push((i, i + r));
            i += step;
        }
    } else {
        out.push((lo, lo + r));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_sizes() {
        assert_eq!(batcher_network(1).len(), 0);
        assert_eq!(batcher_network(2).len(), 1);
        // m=4: the classic 5-comparator odd-even network.
        assert_eq!(batcher_network(4).len(), 5);
    }

    #[test]
    fn sorts_all_01_inputs_up_to_12() {
        for m in 1..=12 {
            let net = batcher_network(m);
            assert!(net.sorts_all_01(), "width {m} failed the 0-1 principle");
            for &(i, j) in net.comparators() {
                assert!(i < j && j < m);
            }
        }
    }

    #[test]
    fn size_is_quasilinear() {
        // O(m log^2 m) with Batcher's constant ~1/4 on the leading term.
        for m in [16usize, 64, 256, 1024] {
            let lg = (m as f64).log2();
            let bound = 0.3 * m as f64 * lg * lg + 2.0 * m as f64;
            assert!(
                (batcher_network(m).len() as f64) < bound,
                "width {m}: {} comparators",
                batcher_network(m).len()
            );
        }
    }

    #[test]
    fn sorts_random_integer_vectors() {
        use rand::Rng;
        let mut rng = crate::seed::SeedSpec::new(8, 0).rng(0);
        for m in [3usize, 5, 7, 13, 30, 100] {
            let net = batcher_network(m);
            for _ in 0..20 {
                let mut v: Vec<u32> = (0..m).map(|_| rng.gen_range(0..50)).collect();
                net.apply(&mut v);
                assert!(v.windows(2).all(|w| w[0] >= w[1]), "width {m}: {v:?}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn sorts_arbitrary_vectors(mut v in proptest::collection::vec(any::<u8>(), 1..48)) {
                let net = batcher_network(v.len());
                net.apply(&mut v);
                prop_assert!(v.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }
}
