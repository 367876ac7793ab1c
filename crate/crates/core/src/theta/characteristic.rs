use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThetaError};

/// Sign `e(m) = (-1)^(eps . delta)` of a characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// A theta characteristic `m = [eps; delta]` with `eps, delta` in `{0,1}^g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Characteristic {
    eps: Vec<u8>,
    delta: Vec<u8>,
}

impl Characteristic {
    pub fn new(eps: Vec<u8>, delta: Vec<u8>) -> Result<Self> {
        if eps.len() != delta.len() {
            return Err(ThetaError::DimensionMismatch { expected: eps.len(), found: delta.len() });
        }
        if eps.iter().chain(&delta).any(|&b| b > 1) {
            return Err(ThetaError::InvalidInput("characteristic entries must be 0 or 1".into()));
        }
        Ok(Characteristic { eps, delta })
    }

    pub fn zero(genus: usize) -> Self {
        Characteristic { eps: vec![0; genus], delta: vec![0; genus] }
    }

    /// Characteristic whose bits are read from `index`: bit `j` gives
    /// `eps_j` and bit `g + j` gives `delta_j`.
    pub fn from_index(genus: usize, index: u64) -> Self {
        let bit = |k: usize| ((index >> k) & 1) as u8;
        Characteristic {
            eps: (0..genus).map(bit).collect(),
            delta: (0..genus).map(|j| bit(genus + j)).collect(),
        }
    }

    /// All `4^g` characteristics.
    pub fn all(genus: usize) -> impl Iterator<Item = Characteristic> {
        assert!(genus <= 31, "genus too large to enumerate characteristics");
        (0..1u64 << (2 * genus)).map(move |i| Self::from_index(genus, i))
    }

    pub fn all_even(genus: usize) -> impl Iterator<Item = Characteristic> {
        Self::all(genus).filter(Characteristic::is_even)
    }

    pub fn all_odd(genus: usize) -> impl Iterator<Item = Characteristic> {
        Self::all(genus).filter(|m| !m.is_even())
    }

    pub fn genus(&self) -> usize {
        self.eps.len()
    }

    pub fn eps(&self) -> &[u8] {
        &self.eps
    }

    pub fn delta(&self) -> &[u8] {
        &self.delta
    }

    pub fn is_zero(&self) -> bool {
        self.eps.iter().chain(&self.delta).all(|&b| b == 0)
    }

    pub fn parity(&self) -> Parity {
        let dot: u32 = self.eps.iter().zip(&self.delta).map(|(&a, &b)| u32::from(a & b)).sum();
        if dot.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }
}

/// Free-function form of [`Characteristic::parity`] returning `+1` or `-1`.
pub fn parity(m: &Characteristic) -> i8 {
    match m.parity() {
        Parity::Even => 1,
        Parity::Odd => -1,
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.eps {
            write!(f, "{b}")?;
        }
        f.write_str(";")?;
        for b in &self.delta {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Parses `"eps;delta"` where each half is either a bit string (`"10010"`)
/// or comma-separated bits (`"1,0,0,1,0"`).
impl FromStr for Characteristic {
    type Err = ThetaError;

    fn from_str(s: &str) -> Result<Self> {
        let (e, d) = s
            .split_once(';')
            .ok_or_else(|| ThetaError::InvalidInput(format!("characteristic '{s}' must look like 'eps;delta'")))?;
        let bits = |part: &str| -> Result<Vec<u8>> {
            let part = part.trim();
            let tokens: Vec<&str> = if part.contains(',') {
                part.split(',').map(str::trim).collect()
            } else {
                part.split("").filter(|t| !t.is_empty()).collect()
            };
            tokens
                .iter()
                .map(|t| match *t {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    other => Err(ThetaError::InvalidInput(format!("characteristic entry '{other}' is not 0 or 1"))),
                })
                .collect()
        };
        Characteristic::new(bits(e)?, bits(d)?)
    }
}
