//! Truncated occupation-number bases.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{invalid, Result};

pub type Occupation = Vec<u32>;

/// A finite set of occupation tuples over `mode_count` modes, kept in
/// lexicographic order. Built either from per-mode cutoffs (with an optional
/// bound on the total) or from an explicit basis such as a product.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSpace {
    cutoffs: Vec<u32>,
    total: Option<u32>,
    basis: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
}

impl ModeSpace {
    pub fn new(cutoffs: &[u32], total: Option<u32>) -> Result<Self> {
        if cutoffs.is_empty() {
            return invalid("a mode space needs at least one mode");
        }
        let mut basis = Vec::new();
        let mut cur = vec![0u32; cutoffs.len()];
        fill(cutoffs, total, 0, 0, &mut cur, &mut basis);
        Ok(Self::assemble(cutoffs.to_vec(), total, basis))
    }

    pub fn boxed(cutoffs: &[u32]) -> Result<Self> {
        Self::new(cutoffs, None)
    }

    /// Tuples with every occupation <= `total` and sum <= `total`.
    pub fn simplex(modes: usize, total: u32) -> Result<Self> {
        Self::new(&vec![total; modes], Some(total))
    }

    pub fn single(cutoff: u32) -> Self {
        Self::new(&[cutoff], None).expect("one mode")
    }

    pub fn from_basis(cutoffs: &[u32], total: Option<u32>, mut basis: Vec<Occupation>) -> Result<Self> {
        if cutoffs.is_empty() {
            return invalid("a mode space needs at least one mode");
        }
        for t in &basis {
            if t.len() != cutoffs.len() {
                return invalid("basis tuple has the wrong number of modes");
            }
            if t.iter().zip(cutoffs).any(|(n, c)| n > c) {
                return invalid(format!("basis tuple {t:?} exceeds the per-mode cutoffs"));
            }
            if let Some(m) = total {
                if t.iter().sum::<u32>() > m {
                    return invalid(format!("basis tuple {t:?} exceeds the total cutoff"));
                }
            }
        }
        basis.sort();
        basis.dedup();
        Ok(Self::assemble(cutoffs.to_vec(), total, basis))
    }

    fn assemble(cutoffs: Vec<u32>, total: Option<u32>, basis: Vec<Occupation>) -> Self {
        let index = basis.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Self { cutoffs, total, basis, index }
    }

    pub fn mode_count(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cutoffs(&self) -> &[u32] {
        &self.cutoffs
    }

    pub fn total_cutoff(&self) -> Option<u32> {
        self.total
    }

    pub fn basis(&self) -> &[Occupation] {
        &self.basis
    }

    pub fn occupation(&self, i: usize) -> &[u32] {
        &self.basis[i]
    }

    pub fn index_of(&self, occ: &[u32]) -> Option<usize> {
        self.index.get(occ).copied()
    }

    /// Largest photon total present in the basis.
    pub fn max_total(&self) -> u32 {
        self.basis.iter().map(|t| t.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn product(&self, other: &ModeSpace) -> ModeSpace {
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                let mut t = a.clone();
                t.extend_from_slice(b);
                basis.push(t);
            }
        }
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.extend_from_slice(&other.cutoffs);
        let total = match (self.total, other.total) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        // product of two sorted lists in nested order is already sorted
        Self::assemble(cutoffs, total, basis)
    }

    /// Distinct sub-tuples on `modes` (in the given order).
    pub fn marginal(&self, modes: &[usize]) -> Result<ModeSpace> {
        if modes.is_empty() || modes.iter().any(|&m| m >= self.mode_count()) {
            return invalid("marginal modes out of range");
        }
        let basis: Vec<Occupation> = self
            .basis
            .iter()
            .map(|t| modes.iter().map(|&m| t[m]).collect())
            .collect();
        let cutoffs: Vec<u32> = modes.iter().map(|&m| self.cutoffs[m]).collect();
        ModeSpace::from_basis(&cutoffs, self.total, basis)
    }

    /// Basis indices grouped by total photon number.
    pub fn sectors(&self) -> BTreeMap<u32, Vec<usize>> {
        let mut out: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, t) in self.basis.iter().enumerate() {
            out.entry(t.iter().sum()).or_default().push(i);
        }
        out
    }

    pub fn shared(self) -> Arc<ModeSpace> {
        Arc::new(self)
    }
}

fn fill(cutoffs: &[u32], total: Option<u32>, mode: usize, used: u32, cur: &mut Vec<u32>, out: &mut Vec<Occupation>) {
    if mode == cutoffs.len() {
        out.push(cur.clone());
        return;
    }
    let cap = match total {
        Some(m) => cutoffs[mode].min(m - used),
        None => cutoffs[mode],
    };
    for n in 0..=cap {
        cur[mode] = n;
        fill(cutoffs, total, mode + 1, used + n, cur, out);
    }
    cur[mode] = 0;
}

/// Occupation tuples over `k` modes summing to exactly `m`, in lexicographic
/// order, with O(k) ranking.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    k: usize,
    m: u32,
    // binom[j][s] = number of compositions of s into j parts
    comps: Vec<Vec<u64>>,
}

impl SectorBasis {
    pub fn new(k: usize, m: u32) -> Self {
        assert!(k >= 1, "sector basis needs a mode");
        let mut comps = vec![vec![0u64; m as usize + 1]; k + 1];
        comps[0][0] = 1;
        for j in 1..=k {
            let mut run = 0u64;
            for s in 0..=m as usize {
                run += comps[j - 1][s];
                comps[j][s] = run;
            }
        }
        Self { k, m, comps }
    }

    pub fn modes(&self) -> usize {
        self.k
    }

    pub fn total(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.comps[self.k][self.m as usize] as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of compositions of `s` into `j` parts.
    pub fn count(&self, j: usize, s: u32) -> u64 {
        self.comps[j][s as usize]
    }

    pub fn rank(&self, t: &[u32]) -> usize {
        debug_assert_eq!(t.len(), self.k);
        let mut rem = self.m;
        let mut r = 0u64;
        for (i, &v) in t.iter().enumerate().take(self.k - 1) {
            let parts = self.k - i - 1;
            // tuples whose entry i is smaller have more left for the rest
            r += self.comps[parts + 1][rem as usize] - self.comps[parts + 1][(rem - v) as usize];
            rem -= v;
        }
        r as usize
    }

    pub fn unrank(&self, idx: usize) -> Occupation {
        let mut r = idx as u64;
        let mut rem = self.m;
        let mut t = vec![0u32; self.k];
        for i in 0..self.k - 1 {
            let parts = self.k - i - 1;
            let mut v = 0;
            loop {
                let block = self.comps[parts][(rem - v) as usize];
                if r < block {
                    break;
                }
                r -= block;
                v += 1;
            }
            t[i] = v;
            rem -= v;
        }
        t[self.k - 1] = rem;
        t
    }

    /// All tuples in rank order, flattened (`len * k` entries).
    pub fn enumerate_flat(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() * self.k);
        let mut cur = vec![0u32; self.k];
        lex(self.k, self.m, 0, &mut cur, &mut out);
        out
    }
}

fn lex(k: usize, rem: u32, i: usize, cur: &mut [u32], out: &mut Vec<u32>) {
    if i == k - 1 {
        cur[i] = rem;
        out.extend_from_slice(cur);
        return;
    }
    for v in 0..=rem {
        cur[i] = v;
        lex(k, rem - v, i + 1, cur, out);
    }
}
