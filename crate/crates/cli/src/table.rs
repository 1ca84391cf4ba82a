use num_complex::Complex64;

/// A row `F₋(m1, m2; m12) = F̃−(m1, m2; m12) + e^{πi m12} F̃−(m2, m1; m12)` with the listed
/// four-decimal values.
pub struct Row {
    pub m1: &'static str,
    pub m2: &'static str,
    pub m12: &'static str,
    pub f: Complex64,
    pub first: Complex64,
    pub second: Complex64,
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const ROWS: [Row; 7] = [
    Row {
        m1: "1/3",
        m2: "1/5",
        m12: "1/7",
        f: c(-0.0148, 0.0240),
        first: c(-0.0007, 0.0161),
        second: c(-0.0093, 0.0132),
    },
    Row {
        m1: "1/7",
        m2: "1/7",
        m12: "1",
        f: c(0.0, 0.0),
        first: c(-0.0038, 0.0030),
        second: c(0.0038, 0.0030),
    },
    Row {
        m1: "8/7",
        m2: "1/7",
        m12: "1",
        f: c(0.0007, 0.0009),
        first: c(-0.0016, 0.0020),
        second: c(-0.0023, 0.0011),
    },
    Row {
        m1: "1/7",
        m2: "8/7",
        m12: "1",
        f: c(-0.0007, -0.0009),
        first: c(-0.0023, 0.0011),
        second: c(-0.0016, 0.0020),
    },
    Row {
        m1: "-1/3",
        m2: "-1/3",
        m12: "2/3",
        f: c(0.0, 0.0),
        first: c(0.0, 0.0),
        second: c(0.0, 0.0),
    },
    Row {
        m1: "2/3",
        m2: "-1/3",
        m12: "2/3",
        f: c(-0.0185, 0.0),
        first: c(-0.0092, -0.0053),
        second: c(0.0092, 0.0053),
    },
    Row {
        m1: "-1/3",
        m2: "2/3",
        m12: "2/3",
        f: c(0.0185, 0.0),
        first: c(-0.0092, -0.0053),
        second: c(0.0092, 0.0053),
    },
];

/// Listed values are rounded to four decimals.
pub const TOL: f64 = 5e-4;
pub const ZERO_TOL: f64 = 1e-6;
