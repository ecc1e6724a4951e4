use serde::Serialize;

/// Closed real interval. Arithmetic is the usual outward interval
/// arithmetic, so every result contains all values reachable from the
/// operands.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Non-empty with finite ends.
    pub fn is_proper(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn widen(&self, by: f64) -> Self {
        Self { lo: self.lo - by, hi: self.hi + by }
    }

    pub fn add(self, o: Interval) -> Self {
        Self { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }

    pub fn sub(self, o: Interval) -> Self {
        Self { lo: self.lo - o.hi, hi: self.hi - o.lo }
    }

    pub fn neg(self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }

    pub fn scale(self, s: f64) -> Self {
        if s >= 0.0 {
            Self { lo: s * self.lo, hi: s * self.hi }
        } else {
            Self { lo: s * self.hi, hi: s * self.lo }
        }
    }

    pub fn mul(self, o: Interval) -> Self {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Self {
            lo: p.iter().copied().fold(f64::INFINITY, f64::min),
            hi: p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Range of x^2, tighter than `self.mul(self)` when the interval
    /// straddles zero.
    pub fn square(self) -> Self {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        if self.contains(0.0) {
            Self { lo: 0.0, hi: a.max(b) }
        } else {
            Self { lo: a.min(b), hi: a.max(b) }
        }
    }
}
