//! Scalar lemmas used inside the determinant bounds.

use rand::Rng;
use serde::Serialize;

use fock_core::random::seeded_rng;
use fock_core::Exec;

use crate::{invalid, Result};

/// Edge of the exhaustive integer grids.
pub const GRID_LIMIT: u32 = 10_000;
const REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub exhaustive: bool,
    pub points: u64,
    pub violations: u64,
    /// Smallest (larger side - smaller side) / scale seen; exact equality
    /// cases sit at 0.
    pub min_margin: f64,
    pub min_margin_at: Vec<f64>,
    /// First violating point, if any.
    pub witness: Option<Vec<f64>>,
}

impl ScalarCheck {
    pub fn passed(&self) -> bool {
        self.points > 0 && self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarReport {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<ScalarCheck>,
}

impl ScalarReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(ScalarCheck::passed)
    }

    pub fn get(&self, name: &str) -> Option<&ScalarCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
struct Tally {
    points: u64,
    violations: u64,
    min_margin: f64,
    at: Vec<f64>,
    witness: Option<Vec<f64>>,
}

impl Tally {
    fn new() -> Self {
        Self { points: 0, violations: 0, min_margin: f64::INFINITY, at: Vec::new(), witness: None }
    }

    /// Record `big >= small`, judged relative to `scale`.
    fn record(&mut self, big: f64, small: f64, scale: f64, at: impl Fn() -> Vec<f64>) {
        self.points += 1;
        let margin = (big - small) / scale;
        if margin < self.min_margin {
            self.min_margin = margin;
            self.at = at();
        }
        if margin < -REL_TOL {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(at());
            }
        }
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.points += o.points;
        self.violations += o.violations;
        if o.min_margin < self.min_margin {
            self.min_margin = o.min_margin;
            self.at = o.at;
        }
        if self.witness.is_none() {
            self.witness = o.witness;
        }
        self
    }

    fn finish(self, name: &'static str, statement: &'static str, exhaustive: bool) -> ScalarCheck {
        ScalarCheck {
            name,
            statement,
            exhaustive,
            points: self.points,
            violations: self.violations,
            min_margin: self.min_margin,
            min_margin_at: self.at,
            witness: self.witness,
        }
    }
}

/// k^2 / ((k+1)(sqrt(k+1)-1)^2) = (sqrt(k+1)+1)^2/(k+1), decreasing in k.
fn g(k: f64) -> f64 {
    let s = (k + 1.0).sqrt();
    (s + 1.0) * (s + 1.0) / (k + 1.0)
}

/// (m+1)(sqrt(m+1)-sqrt(m-n+1))^2 <= (n+1)(sqrt(n+1)-1)^2 on 1 <= n <= m.
fn basic_relation(limit: u32, exec: Exec) -> ScalarCheck {
    let t = exec.map_reduce(
        1..limit as usize + 1,
        Tally::new(),
        |m| {
            let mut t = Tally::new();
            let mf = m as f64;
            let sm = (mf + 1.0).sqrt();
            for n in 1..=m {
                let nf = n as f64;
                // both differences of roots rewritten as n / (sum of roots)
                let l = (mf + 1.0) * (nf / (sm + (mf - nf + 1.0).sqrt())).powi(2);
                let r = (nf + 1.0) * (nf / ((nf + 1.0).sqrt() + 1.0)).powi(2);
                t.record(r, l, r, || vec![nf, mf]);
            }
            t
        },
        Tally::merge,
    );
    t.finish(
        "basic_relation_1",
        "(m+1)(sqrt(m+1)-sqrt(m-n+1))^2 <= (n+1)(sqrt(n+1)-1)^2, 1<=n<=m",
        true,
    )
}

/// 0 <= m+1-sqrt((m-n)(m-n+1)) <= n+2-sqrt2 on 1 <= n <= m-1.
fn lb_2(limit: u32, exec: Exec) -> (ScalarCheck, ScalarCheck) {
    let (lo, hi) = exec.map_reduce(
        2..limit as usize + 1,
        (Tally::new(), Tally::new()),
        |m| {
            let (mut lo, mut hi) = (Tally::new(), Tally::new());
            let mf = m as f64;
            for n in 1..m {
                let nf = n as f64;
                let p = (mf - nf) * (mf - nf + 1.0);
                let v = ((mf + 1.0) * (mf + 1.0) - p) / (mf + 1.0 + p.sqrt());
                let bound = nf + 2.0 - std::f64::consts::SQRT_2;
                lo.record(v, 0.0, 1.0, || vec![nf, mf]);
                hi.record(bound, v, bound, || vec![nf, mf]);
            }
            (lo, hi)
        },
        |a, b| (a.0.merge(b.0), a.1.merge(b.1)),
    );
    (
        lo.finish("lb_2_lower", "0 <= m+1-sqrt((m-n)(m-n+1)), 1<=n<m", true),
        hi.finish("lb_2_upper", "m+1-sqrt((m-n)(m-n+1)) <= n+2-sqrt2, 1<=n<m", true),
    )
}

fn log_uniform_int<R: Rng>(rng: &mut R, max: u32) -> u32 {
    let x = rng.random_range(0.0..(max as f64 + 1.0).ln());
    (x.exp().floor() as u32).clamp(1, max)
}

/// Both forms of the product lemma: the second argument of the minimum in
/// u (the form applied in the determinant bound) and in w (the weaker form
/// as stated, since g decreases and u <= w).
fn tmp_1(samples: usize, seed: u64) -> (ScalarCheck, ScalarCheck) {
    let mut rng = seeded_rng(seed);
    let (mut tu, mut tw) = (Tally::new(), Tally::new());
    for _ in 0..samples {
        let m = log_uniform_int(&mut rng, GRID_LIMIT);
        let n = rng.random_range(1..=m);
        let w = log_uniform_int(&mut rng, GRID_LIMIT);
        let u = rng.random_range(1..=w);
        let c: Vec<f64> = (0..4).map(|_| rng.random_range(-6.0f64..6.0).exp()).collect();
        let (a1, am, b1, bm) = (c[0], c[1], c[2], c[3]);
        let (nf, uf) = (n as f64, u as f64);
        let x = nf / (m as f64 + 1.0);
        let y = uf / (w as f64 + 1.0);
        let den = (x + y - x * y) / (1.0 + ((1.0 - x) * (1.0 - y)).sqrt());
        let lhs = (a1 * x + b1 * y) * (am * x + bm * y) / (den * den);
        let ru = (a1 * am * g(nf)).min(b1 * bm * g(uf));
        let rw = (a1 * am * g(nf)).min(b1 * bm * g(w as f64));
        let at = || vec![n as f64, m as f64, u as f64, w as f64, a1, am, b1, bm];
        tu.record(lhs, ru, ru, at);
        tw.record(lhs, rw, rw, at);
    }
    (
        tu.finish(
            "tmp_1",
            "prod_b (a_b x + b_b y)/(1-sqrt((1-x)(1-y))) >= min[a1 a-1 g(n), b1 b-1 g(u)]",
            false,
        ),
        tw.finish(
            "tmp_1_w",
            "prod_b (a_b x + b_b y)/(1-sqrt((1-x)(1-y))) >= min[a1 a-1 g(n), b1 b-1 g(w)]",
            false,
        ),
    )
}

/// ((z1(1-w1^2)+z2(1-w2^2))/(1-w1 w2))^2 >= min[z1^2(1+w1)^2, z2^2(1+w2)^2]
/// on 0 <= w < 1, z > 0.
fn tmp_2(samples: usize, seed: u64) -> ScalarCheck {
    let mut rng = seeded_rng(seed ^ 0x7a3d_1c55);
    let mut t = Tally::new();
    for i in 0..samples {
        // a quarter of the draws pushed against the w -> 1 edge
        let edge = i % 4 == 0;
        let w1 = draw_w(&mut rng, edge);
        let w2 = draw_w(&mut rng, edge);
        let z1 = rng_exp(&mut rng, -5.0, 5.0);
        let z2 = rng_exp(&mut rng, -5.0, 5.0);
        let l = ((z1 * (1.0 - w1 * w1) + z2 * (1.0 - w2 * w2)) / (1.0 - w1 * w2)).powi(2);
        let r = (z1 * (1.0 + w1)).powi(2).min((z2 * (1.0 + w2)).powi(2));
        t.record(l, r, r, || vec![w1, w2, z1, z2]);
    }
    t.finish("tmp_2", "((z1(1-w1^2)+z2(1-w2^2))/(1-w1w2))^2 >= min[z1^2(1+w1)^2, z2^2(1+w2)^2]", false)
}

fn draw_w<R: Rng>(rng: &mut R, edge: bool) -> f64 {
    if edge {
        1.0 - rng_exp(rng, -12.0, 0.0)
    } else {
        rng.random_range(0.0..1.0)
    }
}

fn rng_exp<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi).exp()
}

/// Exhaustive grids up to [`GRID_LIMIT`] and `samples` random points for
/// the two continuous lemmas.
pub fn check_scalar_inequalities(samples: usize, seed: u64, exec: Exec) -> Result<ScalarReport> {
    check_scalar_inequalities_to(GRID_LIMIT, samples, seed, exec)
}

pub fn check_scalar_inequalities_to(limit: u32, samples: usize, seed: u64, exec: Exec) -> Result<ScalarReport> {
    if samples < 10_000 {
        return invalid(format!("at least 10^4 samples are required, got {samples}"));
    }
    if limit < 2 {
        return invalid("the integer grid needs m >= 2");
    }
    let (lo, hi) = lb_2(limit, exec);
    let (t1, t1w) = tmp_1(samples, seed);
    let checks = vec![basic_relation(limit, exec), lo, hi, t1, t1w, tmp_2(samples, seed)];
    Ok(ScalarReport { seed, samples, checks })
}
