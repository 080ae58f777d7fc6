//! Static 4-connected grid maps.

use std::fmt;

/// A cell on the grid. `x` is the column, `y` the row, origin top-left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub x: u32,
    pub y: u32,
}

impl Vertex {
    pub const fn new(x: u32, y: u32) -> Self {
        Vertex { x, y }
    }

    pub fn manhattan(self, other: Vertex) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(u32, u32)> for Vertex {
    fn from((x, y): (u32, u32)) -> Self {
        Vertex { x, y }
    }
}

/// One of the five unit actions. The declaration order is the canonical
/// action order used for tie-breaking and constraint enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Stay,
    Up,
    Right,
    Down,
    Left,
}

impl Action {
    pub const ALL: [Action; 5] = [
        Action::Stay,
        Action::Up,
        Action::Right,
        Action::Down,
        Action::Left,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The action that moves `from` onto `to`, if they are equal or adjacent.
    pub fn between(from: Vertex, to: Vertex) -> Option<Action> {
        let dx = to.x as i64 - from.x as i64;
        let dy = to.y as i64 - from.y as i64;
        match (dx, dy) {
            (0, 0) => Some(Action::Stay),
            (0, -1) => Some(Action::Up),
            (1, 0) => Some(Action::Right),
            (0, 1) => Some(Action::Down),
            (-1, 0) => Some(Action::Left),
            _ => None,
        }
    }

    fn offset(self) -> (i64, i64) {
        match self {
            Action::Stay => (0, 0),
            Action::Up => (0, -1),
            Action::Right => (1, 0),
            Action::Down => (0, 1),
            Action::Left => (-1, 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridMap {
    width: u32,
    height: u32,
    passable: Vec<bool>,
}

impl GridMap {
    /// Builds a map from row-major passability flags.
    ///
    /// Panics if `passable.len() != width * height` or a dimension is zero.
    pub fn new(width: u32, height: u32, passable: Vec<bool>) -> Self {
        assert!(width > 0 && height > 0, "grid dimensions must be positive");
        assert_eq!(
            passable.len(),
            width as usize * height as usize,
            "passable grid length must equal width * height"
        );
        GridMap {
            width,
            height,
            passable,
        }
    }

    pub fn empty(width: u32, height: u32) -> Self {
        Self::new(width, height, vec![true; width as usize * height as usize])
    }

    /// Parses an ASCII picture, one string per row: `.` passable, `@` blocked.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len() as u32;
        let width = rows.first().map_or(0, |r| r.len()) as u32;
        let passable = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len() as u32, width, "ragged ascii map");
                r.chars().map(|c| c == '.')
            })
            .collect();
        Self::new(width, height, passable)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn num_cells(&self) -> usize {
        self.passable.len()
    }

    pub fn in_bounds(&self, v: Vertex) -> bool {
        v.x < self.width && v.y < self.height
    }

    /// Row-major cell index of `v`.
    pub fn index(&self, v: Vertex) -> usize {
        v.y as usize * self.width as usize + v.x as usize
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        let w = self.width as usize;
        Vertex::new((index % w) as u32, (index / w) as u32)
    }

    pub fn is_passable(&self, v: Vertex) -> bool {
        self.in_bounds(v) && self.passable[self.index(v)]
    }

    pub fn set_passable(&mut self, v: Vertex, passable: bool) {
        let i = self.index(v);
        self.passable[i] = passable;
    }

    pub fn passable_cells(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.passable.len())
            .filter(|&i| self.passable[i])
            .map(|i| self.vertex(i))
    }

    /// Applies `action` to `v`, returning the target if it is in bounds and passable.
    pub fn apply(&self, v: Vertex, action: Action) -> Option<Vertex> {
        let (dx, dy) = action.offset();
        let x = v.x as i64 + dx;
        let y = v.y as i64 + dy;
        if x < 0 || y < 0 {
            return None;
        }
        let u = Vertex::new(x as u32, y as u32);
        self.is_passable(u).then_some(u)
    }

    /// `v` itself followed by every passable cardinal neighbor, in canonical
    /// action order. `v` must be in bounds and passable.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        debug_assert!(self.is_passable(v), "neighbors of impassable {v}");
        Action::ALL
            .iter()
            .filter_map(|&a| self.apply(v, a))
            .collect()
    }

    /// True iff `to` is `from` or a passable cardinal neighbor of it.
    pub fn is_move(&self, from: Vertex, to: Vertex) -> bool {
        self.is_passable(to) && Action::between(from, to).is_some()
    }
}
