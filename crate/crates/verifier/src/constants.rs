//! Exact proof constants and the decimals they are quoted with.

use serde::Serialize;

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConstantId {
    C1,
    C11,
    C2,
    C21,
    C22,
    C23Plus,
    C23Minus,
    C3,
    C31,
    C32,
    C33,
}

impl ConstantId {
    pub const ALL: [ConstantId; 11] = [
        ConstantId::C1,
        ConstantId::C11,
        ConstantId::C2,
        ConstantId::C21,
        ConstantId::C22,
        ConstantId::C23Plus,
        ConstantId::C23Minus,
        ConstantId::C3,
        ConstantId::C31,
        ConstantId::C32,
        ConstantId::C33,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ConstantId::C1 => "c1",
            ConstantId::C11 => "c1,1",
            ConstantId::C2 => "c2",
            ConstantId::C21 => "c2,1",
            ConstantId::C22 => "c2,2",
            ConstantId::C23Plus => "c2,3(+)",
            ConstantId::C23Minus => "c2,3(-)",
            ConstantId::C3 => "c3",
            ConstantId::C31 => "c3,1",
            ConstantId::C32 => "c3,2",
            ConstantId::C33 => "c3,3",
        }
    }

    /// Closed form.
    pub fn exact(self) -> f64 {
        let s5 = 5f64.sqrt();
        let r = (1145.0 - 624.0 * SQRT2).sqrt();
        match self {
            ConstantId::C1 => (8.0f64 / 5.0).sqrt() * (SQRT2 - 1.0),
            ConstantId::C11 => (s5 - 1.0) / 30f64.sqrt(),
            ConstantId::C2 => (12.0 + r) / 26.0,
            ConstantId::C21 => (r - 12.0) / 26.0,
            ConstantId::C22 => (2.0f64 / 13.0).sqrt() * (3.0 - SQRT2),
            ConstantId::C23Plus => 1.0,
            ConstantId::C23Minus => ((5.0 * (653.0 - 288.0 * SQRT2)).sqrt() - 25.0) / 120.0,
            ConstantId::C3 => (32.0f64 / 15.0).sqrt() * (SQRT2 - 1.0),
            ConstantId::C31 => SQRT2 / (3.0 * s5) * (s5 - 1.0),
            ConstantId::C32 => (s5 - 1.0) / (2.0 * 15f64.sqrt()),
            ConstantId::C33 => 2.0 / s5 * (SQRT2 - 1.0),
        }
    }

    /// The decimal expansion quoted next to each definition, which is
    /// truncated rather than rounded ("0.60499..." for 0.604997...).
    pub fn printed(self) -> &'static str {
        match self {
            ConstantId::C1 => "0.52494",
            ConstantId::C11 => "0.22567",
            ConstantId::C2 => "1.08472",
            ConstantId::C21 => "0.16164",
            ConstantId::C22 => "0.62199",
            ConstantId::C23Plus => "1",
            ConstantId::C23Minus => "0.08374",
            ConstantId::C3 => "0.60499",
            ConstantId::C31 => "0.26058",
            ConstantId::C32 => "0.15957",
            ConstantId::C33 => "0.37048",
        }
    }
}

impl std::fmt::Display for ConstantId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsTable {
    values: Vec<(ConstantId, f64)>,
}

impl ConstantsTable {
    pub fn exact() -> Self {
        Self { values: ConstantId::ALL.iter().map(|&c| (c, c.exact())).collect() }
    }

    pub fn get(&self, id: ConstantId) -> f64 {
        self.values.iter().find(|(c, _)| *c == id).map(|(_, v)| *v).expect("every id is tabulated")
    }

    pub fn iter(&self) -> impl Iterator<Item = (ConstantId, f64)> + '_ {
        self.values.iter().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantCheck {
    pub id: ConstantId,
    pub exact: f64,
    pub printed: String,
    /// The exact value cut to the printed number of decimals.
    pub truncated: String,
    /// exact - printed; at most one unit of the last printed digit when
    /// the digits agree.
    pub deficit: f64,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub checks: Vec<ConstantCheck>,
}

impl ConstantsReport {
    pub fn all_match(&self) -> bool {
        self.checks.iter().all(|c| c.matches)
    }

    pub fn mismatches(&self) -> Vec<ConstantId> {
        self.checks.iter().filter(|c| !c.matches).map(|c| c.id).collect()
    }

    pub fn get(&self, id: ConstantId) -> &ConstantCheck {
        self.checks.iter().find(|c| c.id == id).expect("every id is checked")
    }
}

fn truncate(v: f64, decimals: usize) -> String {
    // wide formatting first so the cut never sees a rounded digit
    let wide = format!("{v:.15}");
    let dot = wide.find('.').unwrap_or(wide.len());
    if decimals == 0 {
        wide[..dot].to_string()
    } else {
        wide[..dot + 1 + decimals].to_string()
    }
}

/// Evaluate every closed form and compare with its quoted digits.
pub fn eval_constants() -> (ConstantsTable, ConstantsReport) {
    let table = ConstantsTable::exact();
    let checks = table
        .iter()
        .map(|(id, exact)| {
            let printed = id.printed();
            let decimals = printed.find('.').map_or(0, |d| printed.len() - d - 1);
            let truncated = truncate(exact, decimals);
            let p: f64 = printed.parse().expect("printed constants parse");
            ConstantCheck {
                id,
                exact,
                printed: printed.to_string(),
                matches: truncated == printed,
                truncated,
                deficit: exact - p,
            }
        })
        .collect();
    (table, ConstantsReport { checks })
}
