//! Positivity of the 2x2 principal submatrices the operator proofs reduce
//! to. Each block is
//!
//!   [ h_a       -+off ]
//!   [ -+off^*   h_b   ]
//!
//! with real diagonal entries and a possibly complex off-diagonal. The
//! phase of the off-diagonal (the -h3, +-i h3 and b h3 variants) never
//! enters trace or determinant, so one evaluation covers all of them.

use serde::Serialize;

use fock_core::Exec;

use crate::constants::ConstantId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SubmatrixFamily {
    /// h1 with h2 = c1/2 (n^2+n+1/2)/(m+1).
    OneC1,
    /// h1 with h2 = c11/2 (n^2+3n+2)/(m+1).
    OneC11,
    /// h3 with h4 = ((2c2-1)(2n^2+2n+1)+n)/(8(m+1)).
    TwoC2,
    /// h3 with h4 = ((2c21+1)(2n^2+2n+1)-n)/(8(m+1)).
    TwoC21,
    /// h3 with h4 = c22/2 (n^2+n+1/2)/(m+1).
    TwoC22,
    /// h3 with h4 = (2 c23(b) (n+1)(n+2) - b(n^2+1))/(4(m+1)), b = +1.
    TwoC23Plus,
    /// The same with b = -1.
    TwoC23Minus,
    /// h3 with h4 = c/2 (n^2+3n+2)/(m+1), c = 1/2.
    TwoHalf,
    /// h5 with h6 = c3/4 (u+1/2)(n^2+n+1/2)/(m+1).
    ThreeC3,
    /// h5 with h6 = c31/4 (u+1/2)(n^2+3n+2)/(m+1).
    ThreeC31,
    /// h5 with h6 = c32/4 (u+1)(n^2+3n+2)/(m+1).
    ThreeC32,
    /// h5 with h6 = c33/4 (u+1)(n^2+n+1/2)/(m+1).
    ThreeC33,
    /// h7 with h8 = c3/4 ((n^2+n+1/2)(u+1/2)/(m+1) + (n+1/2)(u^2+u+1/2)/(w+1)).
    FourC3,
    /// h7 with h8 = c32/4 ((n^2+3n+2)(u+1)/(m+1) + (n+1)(u^2+3u+2)/(w+1)).
    FourC32,
    /// h7 with h8 = c33/4 ((n^2+n+1/2)(u+1)/(m+1) + (n+1/2)(u^2+3u+2)/(w+1)).
    FourC33,
}

use SubmatrixFamily::*;

/// Polynomials entering the diagonal entries: n^2+n+1/2 ("LH") or n^2+3n+2
/// ("LE") for the squared index, n+1/2 or n+1 for the linear one.
#[derive(Clone, Copy)]
enum Poly {
    Hom,
    Het,
}

impl Poly {
    fn square(self, n: f64) -> f64 {
        match self {
            Poly::Hom => n * n + n + 0.5,
            Poly::Het => n * n + 3.0 * n + 2.0,
        }
    }

    fn linear(self, n: f64) -> f64 {
        match self {
            Poly::Hom => n + 0.5,
            Poly::Het => n + 1.0,
        }
    }
}

impl SubmatrixFamily {
    pub const ALL: [SubmatrixFamily; 15] = [
        OneC1, OneC11, TwoC2, TwoC21, TwoC22, TwoC23Plus, TwoC23Minus, TwoHalf, ThreeC3, ThreeC31, ThreeC32, ThreeC33,
        FourC3, FourC32, FourC33,
    ];

    pub fn family(self) -> u8 {
        match self {
            OneC1 | OneC11 => 1,
            TwoC2 | TwoC21 | TwoC22 | TwoC23Plus | TwoC23Minus | TwoHalf => 2,
            ThreeC3 | ThreeC31 | ThreeC32 | ThreeC33 => 3,
            FourC3 | FourC32 | FourC33 => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OneC1 => "1:c1",
            OneC11 => "1:c1,1",
            TwoC2 => "2:c2",
            TwoC21 => "2:c2,1",
            TwoC22 => "2:c2,2",
            TwoC23Plus => "2:c2,3(+)",
            TwoC23Minus => "2:c2,3(-)",
            TwoHalf => "2:1/2",
            ThreeC3 => "3:c3",
            ThreeC31 => "3:c3,1",
            ThreeC32 => "3:c3,2",
            ThreeC33 => "3:c3,3",
            FourC3 => "4:c3",
            FourC32 => "4:c3,2",
            FourC33 => "4:c3,3",
        }
    }

    /// The constant the variant is built on; `None` for the fixed 1/2.
    pub fn constant(self) -> Option<ConstantId> {
        Some(match self {
            OneC1 => ConstantId::C1,
            OneC11 => ConstantId::C11,
            TwoC2 => ConstantId::C2,
            TwoC21 => ConstantId::C21,
            TwoC22 => ConstantId::C22,
            TwoC23Plus => ConstantId::C23Plus,
            TwoC23Minus => ConstantId::C23Minus,
            TwoHalf => return None,
            ThreeC3 | FourC3 => ConstantId::C3,
            ThreeC31 => ConstantId::C31,
            ThreeC32 | FourC32 => ConstantId::C32,
            ThreeC33 | FourC33 => ConstantId::C33,
        })
    }

    pub fn default_constant(self) -> f64 {
        self.constant().map_or(0.5, ConstantId::exact)
    }

    /// (squared-index polynomial, linear polynomial of the other index) for
    /// families 3 and 4.
    fn two_index_polys(self) -> (Poly, Poly, Poly, Poly) {
        // (A on n, U on u, N on n, B on u) in A(n) U(u)/(m+1) + N(n) B(u)/(w+1)
        match self {
            ThreeC3 | FourC3 => (Poly::Hom, Poly::Hom, Poly::Hom, Poly::Hom),
            ThreeC31 => (Poly::Het, Poly::Hom, Poly::Het, Poly::Hom),
            ThreeC32 | FourC32 => (Poly::Het, Poly::Het, Poly::Het, Poly::Het),
            ThreeC33 | FourC33 => (Poly::Hom, Poly::Het, Poly::Hom, Poly::Het),
            _ => unreachable!("single-index family"),
        }
    }

    fn h4(self, c: f64, n: f64, m1: f64) -> f64 {
        let q = 2.0 * n * n + 2.0 * n + 1.0;
        match self {
            TwoC2 => ((2.0 * c - 1.0) * q + n) / (8.0 * m1),
            TwoC21 => ((2.0 * c + 1.0) * q - n) / (8.0 * m1),
            TwoC22 => c / 2.0 * Poly::Hom.square(n) / m1,
            TwoC23Plus => (2.0 * c * (n + 1.0) * (n + 2.0) - (n * n + 1.0)) / (4.0 * m1),
            TwoC23Minus => (2.0 * c * (n + 1.0) * (n + 2.0) + (n * n + 1.0)) / (4.0 * m1),
            TwoHalf => c / 2.0 * Poly::Het.square(n) / m1,
            _ => unreachable!("family 2 only"),
        }
    }

    /// (h_a, h_b, |off|) at an index point [n, m, u, w, t]; u, w, t are
    /// ignored where the family has no such index. `None` off the domain.
    pub fn block(self, c: f64, idx: [u32; 5]) -> Option<[f64; 3]> {
        let [n, m, u, w, t] = idx;
        if n < 1 || n > m || t > 1 {
            return None;
        }
        let (nf, m1) = (n as f64, m as f64 + 1.0);
        let x = nf / m1;
        match self.family() {
            1 => {
                let p = if self == OneC1 { Poly::Hom } else { Poly::Het };
                let h2 = |k: f64| c / 2.0 * p.square(k) / m1;
                let off = 0.5 * nf.sqrt() * one_minus_sqrt(x);
                Some([h2(nf - 1.0), h2(nf), off])
            }
            2 => {
                if n >= m {
                    return None;
                }
                let p = ((m - n) as f64) * ((m - n + 1) as f64);
                // 1 - sqrt(p)/(m+1), written without cancellation
                let gap = (m1 * m1 - p) / (m1 * (m1 + p.sqrt()));
                let off = (nf * (nf + 1.0)).sqrt() / 4.0 * gap;
                Some([self.h4(c, nf - 1.0, m1), self.h4(c, nf + 1.0, m1), off])
            }
            3 => {
                if u < 1 {
                    return None;
                }
                let (a, uu, _, _) = self.two_index_polys();
                let uf = u as f64;
                let tf = t as f64;
                let h6 = |uk: f64, nk: f64| c / 4.0 * uu.linear(uk) * a.square(nk) / m1;
                let off = (uf * nf).sqrt() / 4.0 * one_minus_sqrt(x);
                Some([h6(uf + tf - 1.0, nf - 1.0), h6(uf - tf, nf), off])
            }
            _ => {
                if u < 1 || u > w {
                    return None;
                }
                let (a, uu, nn, b) = self.two_index_polys();
                let (uf, w1, tf) = (u as f64, w as f64 + 1.0, t as f64);
                let y = uf / w1;
                let h8 = |nk: f64, uk: f64| c / 4.0 * (a.square(nk) * uu.linear(uk) / m1 + nn.linear(nk) * b.square(uk) / w1);
                let off = (nf * uf).sqrt() / 4.0 * one_minus_sqrt_product(x, y);
                Some([h8(nf - 1.0, uf + tf - 1.0), h8(nf, uf - tf), off])
            }
        }
    }
}

/// 1 - sqrt(1 - x).
fn one_minus_sqrt(x: f64) -> f64 {
    x / (1.0 + (1.0 - x).sqrt())
}

/// 1 - sqrt((1 - x)(1 - y)).
fn one_minus_sqrt_product(x: f64, y: f64) -> f64 {
    (x + y - x * y) / (1.0 + ((1.0 - x) * (1.0 - y)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyGrid {
    pub n_max: u32,
    pub m_max: u32,
    pub u_max: u32,
    pub w_max: u32,
}

impl Default for FamilyGrid {
    fn default() -> Self {
        Self { n_max: 1000, m_max: 1000, u_max: 50, w_max: 50 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub family: SubmatrixFamily,
    pub constant: f64,
    pub grid: FamilyGrid,
    pub points: u64,
    pub min_trace: f64,
    pub min_det: f64,
    pub min_det_at: [u32; 5],
    /// det / |off|^2, which removes the overall 1/(m+1)^2 scale.
    pub min_normalized_det: f64,
    pub min_normalized_at: [u32; 5],
}

impl PositivityReport {
    pub const DET_TOLERANCE: f64 = -1e-12;

    pub fn passed(&self) -> bool {
        self.points > 0 && self.min_trace >= 0.0 && self.min_det >= Self::DET_TOLERANCE
    }
}

#[derive(Clone, Copy, Debug)]
struct Acc {
    points: u64,
    min_trace: f64,
    min_det: f64,
    det_at: [u32; 5],
    min_norm: f64,
    norm_at: [u32; 5],
}

impl Acc {
    fn empty() -> Self {
        Self {
            points: 0,
            min_trace: f64::INFINITY,
            min_det: f64::INFINITY,
            det_at: [0; 5],
            min_norm: f64::INFINITY,
            norm_at: [0; 5],
        }
    }

    #[inline]
    fn push(&mut self, ha: f64, hb: f64, off: f64, idx: impl Fn() -> [u32; 5]) {
        self.points += 1;
        let tr = ha + hb;
        let o2 = off * off;
        let det = ha * hb - o2;
        if tr < self.min_trace {
            self.min_trace = tr;
        }
        if det < self.min_det {
            self.min_det = det;
            self.det_at = idx();
        }
        if o2 > 0.0 {
            let nd = det / o2;
            if nd < self.min_norm {
                self.min_norm = nd;
                self.norm_at = idx();
            }
        }
    }

    fn merge(mut self, o: Acc) -> Acc {
        self.points += o.points;
        self.min_trace = self.min_trace.min(o.min_trace);
        if o.min_det < self.min_det || (o.min_det == self.min_det && o.det_at < self.det_at) {
            self.min_det = o.min_det;
            self.det_at = o.det_at;
        }
        if o.min_norm < self.min_norm || (o.min_norm == self.min_norm && o.norm_at < self.norm_at) {
            self.min_norm = o.min_norm;
            self.norm_at = o.norm_at;
        }
        self
    }
}

/// Scan the family's domain inside `grid` with the exact constant.
pub fn check_submatrix_positivity(family: SubmatrixFamily, grid: FamilyGrid, exec: Exec) -> PositivityReport {
    check_submatrix_positivity_with(family, grid, family.default_constant(), exec)
}

/// As [`check_submatrix_positivity`] with a substituted constant, e.g. a
/// rounded one.
pub fn check_submatrix_positivity_with(family: SubmatrixFamily, grid: FamilyGrid, c: f64, exec: Exec) -> PositivityReport {
    let acc = if family.family() == 4 {
        scan_four(family, grid, c, exec)
    } else {
        exec.map_reduce(
            1..grid.m_max as usize + 1,
            Acc::empty(),
            |m| {
                let m = m as u32;
                let mut acc = Acc::empty();
                // (u, t) pairs; the one-index families only use the dummy
                let ut: Vec<(u32, u32)> = if family.family() == 3 {
                    (1..=grid.u_max).flat_map(|u| [(u, 0), (u, 1)]).collect()
                } else {
                    vec![(0, 0)]
                };
                for n in 1..=m.min(grid.n_max) {
                    for &(u, t) in &ut {
                        let idx = [n, m, u, 0, t];
                        if let Some([a, b, o]) = family.block(c, idx) {
                            acc.push(a, b, o, || idx);
                        }
                    }
                }
                acc
            },
            Acc::merge,
        )
    };
    PositivityReport {
        family,
        constant: c,
        grid,
        points: acc.points,
        min_trace: acc.min_trace,
        min_det: acc.min_det,
        min_det_at: acc.det_at,
        min_normalized_det: acc.min_norm,
        min_normalized_at: acc.norm_at,
    }
}

/// Family 4 has ~10^9 points on the default grid; everything that depends
/// on (u, w, t) alone is tabulated once.
fn scan_four(family: SubmatrixFamily, grid: FamilyGrid, c: f64, exec: Exec) -> Acc {
    let (a, uu, nn, b) = family.two_index_polys();
    struct Uw {
        u: u32,
        w: u32,
        t: u32,
        sqrt_u: f64,
        y: f64,
        sy: f64,
        ua: f64,
        ub: f64,
        ba: f64,
        bb: f64,
    }
    let mut table = Vec::new();
    for w in 1..=grid.w_max {
        let w1 = w as f64 + 1.0;
        for u in 1..=w.min(grid.u_max) {
            let uf = u as f64;
            for t in 0..2u32 {
                let tf = t as f64;
                let y = uf / w1;
                table.push(Uw {
                    u,
                    w,
                    t,
                    sqrt_u: uf.sqrt(),
                    y,
                    sy: (1.0 - y).sqrt(),
                    ua: uu.linear(uf + tf - 1.0),
                    ub: uu.linear(uf - tf),
                    ba: b.square(uf + tf - 1.0) / w1,
                    bb: b.square(uf - tf) / w1,
                });
            }
        }
    }
    let k = c / 4.0;
    exec.map_reduce(
        1..grid.m_max as usize + 1,
        Acc::empty(),
        |m| {
            let m = m as u32;
            let m1 = m as f64 + 1.0;
            let mut acc = Acc::empty();
            for n in 1..=m.min(grid.n_max) {
                let nf = n as f64;
                let x = nf / m1;
                let sx = (1.0 - x).sqrt();
                let (aa, ab) = (a.square(nf - 1.0) / m1, a.square(nf) / m1);
                let (na, nb) = (nn.linear(nf - 1.0), nn.linear(nf));
                let sqrt_n = nf.sqrt() / 4.0;
                for e in &table {
                    let ha = k * (aa * e.ua + na * e.ba);
                    let hb = k * (ab * e.ub + nb * e.bb);
                    let off = sqrt_n * e.sqrt_u * (x + e.y - x * e.y) / (1.0 + sx * e.sy);
                    acc.push(ha, hb, off, || [n, m, e.u, e.w, e.t]);
                }
            }
            acc
        },
        Acc::merge,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_family_four_matches_pointwise_blocks() {
        let grid = FamilyGrid { n_max: 6, m_max: 6, u_max: 4, w_max: 4 };
        for f in [FourC3, FourC32, FourC33] {
            let c = f.default_constant();
            let fast = scan_four(f, grid, c, Exec::Sequential);
            let mut slow = Acc::empty();
            for m in 1..=6 {
                for n in 1..=m {
                    for w in 1..=4 {
                        for u in 1..=w {
                            for t in 0..2 {
                                let idx = [n, m, u, w, t];
                                let [a, b, o] = f.block(c, idx).unwrap();
                                slow.push(a, b, o, || idx);
                            }
                        }
                    }
                }
            }
            assert_eq!(fast.points, slow.points);
            assert!((fast.min_det - slow.min_det).abs() < 1e-15);
            assert!((fast.min_norm - slow.min_norm).abs() < 1e-12);
        }
    }
}
