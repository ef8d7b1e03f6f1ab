use num_bigint::BigInt;
use serde::Serialize;

/// Residue classes of `(t, n)` with their own closed form for the kind III
/// coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoeffClass {
    /// `t ≡ 0 (mod 3)`: `-1 + 2(-1)^t`.
    T0Mod3 { t: u32 },
    /// `t ≡ 1 (mod 3)`: `1 - 2(-1)^t`.
    T1Mod3 { t: u32 },
    /// `t ≡ 2 (mod 6)`: `-4`.
    T2Mod6,
    /// `t ≡ 5 (mod 6)`, `n ≢ 2 (mod 3)`: `(-1)^(n-1) - 4`.
    T5Mod6 { n: u32 },
    /// `t ≡ 5 (mod 6)`, `n ≡ 2 (mod 3)`: `2(-1)^n - 4`.
    T5Mod6N2 { n: u32 },
}

fn sign(e: u32) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl CoeffClass {
    pub fn of(n: u32, t: u32) -> Self {
        match t % 3 {
            0 => CoeffClass::T0Mod3 { t },
            1 => CoeffClass::T1Mod3 { t },
            _ if t % 6 == 2 => CoeffClass::T2Mod6,
            _ if n % 3 == 2 => CoeffClass::T5Mod6N2 { n },
            _ => CoeffClass::T5Mod6 { n },
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            CoeffClass::T0Mod3 { .. } => "-1+2(-1)^t",
            CoeffClass::T1Mod3 { .. } => "1-2(-1)^t",
            CoeffClass::T2Mod6 => "-4",
            CoeffClass::T5Mod6 { .. } => "(-1)^(n-1)-4",
            CoeffClass::T5Mod6N2 { .. } => "2(-1)^n-4",
        }
    }

    pub fn evaluate(&self) -> BigInt {
        BigInt::from(match *self {
            CoeffClass::T0Mod3 { t } => -1 + 2 * sign(t),
            CoeffClass::T1Mod3 { t } => 1 - 2 * sign(t),
            CoeffClass::T2Mod6 => -4,
            CoeffClass::T5Mod6 { n } => sign(n - 1) - 4,
            CoeffClass::T5Mod6N2 { n } => 2 * sign(n) - 4,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_values() {
        assert_eq!(CoeffClass::of(12, 5).evaluate(), BigInt::from(-5));
        assert_eq!(CoeffClass::of(14, 5).evaluate(), BigInt::from(-2));
        assert_eq!(CoeffClass::of(10, 3).evaluate(), BigInt::from(-3));
        assert_eq!(CoeffClass::of(11, 4).evaluate(), BigInt::from(-1));
        assert_eq!(CoeffClass::of(20, 8), CoeffClass::T2Mod6);
    }
}
