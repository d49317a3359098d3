use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{Frame, FrameClass, FrameError};

/// Largest frame size representable by the bitmask enumerator.
pub const MAX_ENUMERATION_SIZE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Sizes above this are refused.
    pub max_size: usize,
    /// Keep one representative per isomorphism class.
    pub dedup: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            max_size: 5,
            dedup: true,
        }
    }
}

/// Every frame on states `0..size` satisfying `class`, as frames labelled
/// `"0"`, `"1"`, ... . Ordered by number of related pairs, then by relation
/// bitmask.
pub fn enumerate_frames(
    size: usize,
    class: &FrameClass,
    options: &EnumerationOptions,
) -> Result<Vec<Frame>, FrameError> {
    let bound = options.max_size.min(MAX_ENUMERATION_SIZE);
    if size == 0 {
        return Err(FrameError::Empty);
    }
    if size > bound {
        return Err(FrameError::BoundExceeded {
            what: "frame enumeration",
            size,
            bound,
        });
    }
    Ok(relation_masks(size, class, options.dedup)
        .into_iter()
        .map(|m| Frame::from_mask(size, m))
        .collect())
}

/// Relation bitmasks (bit `x * size + y` for `x ◁ y`) of the frames
/// enumerated by [`enumerate_frames`].
pub(crate) fn relation_masks(size: usize, class: &FrameClass, dedup: bool) -> Vec<u64> {
    assert!((1..=MAX_ENUMERATION_SIZE).contains(&size));
    let n = size;
    let diag: u64 = (0..n).map(|x| 1u64 << (x * n + x)).sum();
    if class.identity {
        return vec![diag];
    }

    // Free bits: each choice bit maps to one or two relation bits.
    let mut free: Vec<u64> = Vec::new();
    for x in 0..n {
        if !class.reflexive {
            free.push(1 << (x * n + x));
        }
        for y in 0..n {
            if x == y {
                continue;
            }
            if class.symmetric {
                if x < y {
                    free.push((1 << (x * n + y)) | (1 << (y * n + x)));
                }
            } else {
                free.push(1 << (x * n + y));
            }
        }
    }
    let base = if class.reflexive { diag } else { 0 };
    let total: u64 = 1 << free.len();
    let perms = if dedup { permutations(n) } else { Vec::new() };

    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    let found: BTreeSet<(u32, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = BTreeSet::new();
            for choice in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let mut mask = base;
                let mut bits = choice;
                while bits != 0 {
                    mask |= free[bits.trailing_zeros() as usize];
                    bits &= bits - 1;
                }
                let rel = MaskRelation::new(n, mask);
                if !rel.satisfies(class) {
                    continue;
                }
                let key = if dedup {
                    canonical(n, mask, &perms)
                } else {
                    mask
                };
                local.insert((key.count_ones(), key));
            }
            local
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    found.into_iter().map(|(_, m)| m).collect()
}

struct MaskRelation {
    n: usize,
    preds: [u8; MAX_ENUMERATION_SIZE],
    succs: [u8; MAX_ENUMERATION_SIZE],
}

impl MaskRelation {
    fn new(n: usize, mask: u64) -> Self {
        let mut preds = [0u8; MAX_ENUMERATION_SIZE];
        let mut succs = [0u8; MAX_ENUMERATION_SIZE];
        let mut bits = mask;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (x, y) = (b / n, b % n);
            preds[y] |= 1 << x;
            succs[x] |= 1 << y;
        }
        MaskRelation { n, preds, succs }
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| {
            (0..self.n)
                .filter(move |&y| self.succs[x] & (1 << y) != 0)
                .map(move |y| (x, y))
        })
    }

    fn refines(&self, z: usize, of: u8) -> bool {
        self.preds[z] & !of == 0
    }

    fn satisfies(&self, class: &FrameClass) -> bool {
        let n = self.n;
        if class.reflexive && (0..n).any(|x| self.preds[x] & (1 << x) == 0) {
            return false;
        }
        if class.symmetric && (0..n).any(|x| self.preds[x] != self.succs[x]) {
            return false;
        }
        if class.transitive
            && self
                .pairs()
                .any(|(x, y)| self.succs[y] & !self.succs[x] != 0)
        {
            return false;
        }
        if class.pseudosymmetric
            && !self.pairs().all(|(y, x)| {
                (0..n).any(|z| self.preds[y] & (1 << z) != 0 && self.refines(z, self.preds[x]))
            })
        {
            return false;
        }
        if class.compossible
            && !self.pairs().all(|(x, y)| {
                let common = self.preds[x] & self.preds[y];
                (0..n).any(|z| self.refines(z, common))
            })
        {
            return false;
        }
        true
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut current, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, a, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, a, out);
}

/// Smallest relation mask among all relabellings of `mask`.
fn canonical(n: usize, mask: u64, perms: &[Vec<usize>]) -> u64 {
    let mut best = u64::MAX;
    for p in perms {
        let mut image = 0u64;
        let mut bits = mask;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            image |= 1 << (p[b / n] * n + p[b % n]);
        }
        best = best.min(image);
    }
    best
}
