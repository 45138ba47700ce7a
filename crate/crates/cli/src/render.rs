//! Text rendering of two-dimensional policies.

use std::fmt;

use healthmon_core::{Model, MonitoringMode, Policy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Critical,
    Intensive,
    Ordinary,
}

impl Cell {
    pub fn glyph(self) -> char {
        match self {
            Cell::Critical => '#',
            Cell::Intensive => 'I',
            Cell::Ordinary => 'O',
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Cell::Critical => "critical",
            Cell::Intensive => "intensive",
            Cell::Ordinary => "ordinary",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "critical" => Some(Cell::Critical),
            "intensive" => Some(Cell::Intensive),
            "ordinary" => Some(Cell::Ordinary),
            _ => None,
        }
    }

    pub fn from_action(action: Option<MonitoringMode>) -> Self {
        match action {
            None => Cell::Critical,
            Some(MonitoringMode::Intensive) => Cell::Intensive,
            Some(MonitoringMode::Ordinary) => Cell::Ordinary,
        }
    }
}

/// `(H+1) x (H+1)` glyph grid, `h_y` increasing upward and `h_x` rightward.
///
/// With the frontier overlay on, intensive cells that have an ordinary
/// neighbour at `+1` in either coordinate are drawn as `*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridRender {
    side: usize,
    // indexed [x][y]
    cells: Vec<Vec<Cell>>,
    frontier: bool,
}

impl GridRender {
    /// `cells[x * (H+1) + y]`, i.e. lattice order.
    pub fn from_cells(max_level: u32, cells: &[Cell]) -> Self {
        let side = max_level as usize + 1;
        assert_eq!(cells.len(), side * side, "grid needs (H+1)^2 cells");
        GridRender {
            side,
            cells: cells.chunks(side).map(<[Cell]>::to_vec).collect(),
            frontier: false,
        }
    }

    pub fn from_policy(model: &Model, policy: &Policy) -> Option<Self> {
        (model.lattice().dim() == 2).then(|| {
            let cells: Vec<Cell> = policy.actions().iter().map(|a| Cell::from_action(*a)).collect();
            Self::from_cells(model.lattice().max_level(), &cells)
        })
    }

    pub fn with_frontier(mut self, on: bool) -> Self {
        self.frontier = on;
        self
    }

    pub fn max_level(&self) -> u32 {
        self.side as u32 - 1
    }

    pub fn cell(&self, x: u32, y: u32) -> Cell {
        self.cells[x as usize][y as usize]
    }

    pub fn is_frontier(&self, x: u32, y: u32) -> bool {
        let h = self.max_level();
        self.cell(x, y) == Cell::Intensive
            && ((x < h && self.cell(x + 1, y) == Cell::Ordinary) || (y < h && self.cell(x, y + 1) == Cell::Ordinary))
    }

    pub fn glyph(&self, x: u32, y: u32) -> char {
        if self.frontier && self.is_frontier(x, y) {
            '*'
        } else {
            self.cell(x, y).glyph()
        }
    }

    /// Rows from `h_y = H` down to `h_y = 0`.
    pub fn rows(&self) -> Vec<String> {
        let h = self.max_level();
        (0..=h)
            .rev()
            .map(|y| (0..=h).map(|x| self.glyph(x, y)).collect())
            .collect()
    }
}

impl fmt::Display for GridRender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Decile sketch of values in `[0, 1]`: `#` for critical cells, `0`..`9`
/// for the decile of each other value.
pub fn decile_sketch(max_level: u32, values: &[f64], critical: &[bool]) -> String {
    let side = max_level as usize + 1;
    assert_eq!(values.len(), side * side);
    let mut out = String::new();
    for y in (0..side).rev() {
        for x in 0..side {
            let i = x * side + y;
            out.push(if critical[i] {
                '#'
            } else {
                let d = (values[i] * 10.0).floor().clamp(0.0, 9.0) as u32;
                char::from_digit(d, 10).unwrap()
            });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_and_frontier() {
        use Cell::*;
        // H = 1: (0,0) critical, (0,1) intensive, (1,0) intensive, (1,1) ordinary
        let g = GridRender::from_cells(1, &[Critical, Intensive, Intensive, Ordinary]);
        assert_eq!(g.rows(), ["IO", "#I"]);
        assert_eq!(g.clone().with_frontier(true).rows(), ["*O", "#*"]);
    }

    #[test]
    fn deciles() {
        let s = decile_sketch(1, &[1.0, 0.95, 0.05, 0.5], &[true, false, false, false]);
        assert_eq!(s, "95\n#0\n");
    }
}
