//! Symbolic two-qubit Pauli algebra and the Mermin–Peres square.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn index(self) -> u8 {
        self as u8
    }

    /// `self * other = i^phase * result`.
    pub fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (a, b) => {
                let c = [X, Y, Z][(6 - a.index() - b.index()) as usize - 1];
                // X -> Y -> Z -> X is the positive cycle
                let cyclic = (b.index() + 2) % 3 == a.index() % 3;
                (if cyclic { 1 } else { 3 }, c)
            }
        }
    }

    fn symbol(self) -> char {
        ['I', 'X', 'Y', 'Z'][self.index() as usize]
    }
}

/// `i^phase * (first ⊗ second)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString2 {
    pub phase: u8,
    pub ops: [Pauli; 2],
}

impl PauliString2 {
    pub const IDENTITY: PauliString2 = PauliString2 {
        phase: 0,
        ops: [Pauli::I, Pauli::I],
    };

    pub fn new(negative: bool, first: Pauli, second: Pauli) -> Self {
        Self {
            phase: if negative { 2 } else { 0 },
            ops: [first, second],
        }
    }

    pub fn mul(self, other: PauliString2) -> PauliString2 {
        let (p0, a) = self.ops[0].mul(other.ops[0]);
        let (p1, b) = self.ops[1].mul(other.ops[1]);
        PauliString2 {
            phase: (self.phase + other.phase + p0 + p1) % 4,
            ops: [a, b],
        }
    }

    pub fn is_negative(&self) -> bool {
        self.phase == 2
    }
}

impl fmt::Display for PauliString2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{sign}{}{}", self.ops[0].symbol(), self.ops[1].symbol())
    }
}

/// 3x3 table of commuting two-qubit observables; Alice measures row `x`,
/// Bob measures column `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObservableGrid {
    pub entries: [[PauliString2; 3]; 3],
}

impl ObservableGrid {
    pub fn mermin_peres() -> Self {
        use Pauli::*;
        let e = PauliString2::new;
        Self {
            entries: [
                [e(false, I, Z), e(false, Z, I), e(false, Z, Z)],
                [e(false, X, I), e(false, I, X), e(false, X, X)],
                [e(true, X, Z), e(true, Z, X), e(false, Y, Y)],
            ],
        }
    }

    pub fn row_product(&self, r: usize) -> PauliString2 {
        self.entries[r].iter().fold(PauliString2::IDENTITY, |acc, p| acc.mul(*p))
    }

    pub fn column_product(&self, c: usize) -> PauliString2 {
        (0..3).fold(PauliString2::IDENTITY, |acc, r| acc.mul(self.entries[r][c]))
    }

    /// Rows must multiply to `+I` and columns to `-I`.
    pub fn verify(&self) -> Result<()> {
        let minus = PauliString2::new(true, Pauli::I, Pauli::I);
        for k in 0..3 {
            let row = self.row_product(k);
            if row != PauliString2::IDENTITY {
                return Err(domain(format!("row {k} multiplies to {row}, not +II")));
            }
            let col = self.column_product(k);
            if col != minus {
                return Err(domain(format!("column {k} multiplies to {col}, not -II")));
            }
        }
        Ok(())
    }
}

/// The Mermin–Peres grid, verified once per process.
pub fn verified_grid() -> &'static ObservableGrid {
    static GRID: OnceLock<ObservableGrid> = OnceLock::new();
    GRID.get_or_init(|| {
        let g = ObservableGrid::mermin_peres();
        g.verify().expect("Mermin-Peres sign check");
        g
    })
}
