use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::Direction;

/// A `(row, col)` grid cell; rows grow downwards. Serialized as `[row, col]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl Cell {
    pub const fn new(row: i32, col: i32) -> Self {
        Self { row, col }
    }

    pub fn offset(self, dir: Direction) -> Cell {
        let (dr, dc) = dir.delta();
        Cell::new(self.row + dr, self.col + dc)
    }

    pub fn in_bounds(self, rows: i32, cols: i32) -> bool {
        (0..rows).contains(&self.row) && (0..cols).contains(&self.col)
    }
}

impl From<[i32; 2]> for Cell {
    fn from([row, col]: [i32; 2]) -> Self {
        Cell::new(row, col)
    }
}

impl From<Cell> for [i32; 2] {
    fn from(c: Cell) -> Self {
        [c.row, c.col]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

pub(crate) fn all_cells(rows: i32, cols: i32) -> impl Iterator<Item = Cell> {
    (0..rows).flat_map(move |r| (0..cols).map(move |c| Cell::new(r, c)))
}
