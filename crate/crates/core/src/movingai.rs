//! Readers and writers for the MovingAI `.map` and `.scen` benchmark formats.
//!
//! A map file is a four line header (`type`, `height H`, `width W`, `map`)
//! followed by `H` rows of `W` cells. `.` and `G` are passable; `@`, `T`,
//! `O` and `W` are blocked. A scenario file is a `version` line followed by
//! whitespace separated rows
//! `bucket map width height start_x start_y goal_x goal_y optimal_length`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{GridMap, Vertex};
use crate::instance::Instance;

pub fn parse_map(text: &str) -> Result<GridMap> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let err = |line: usize, msg: String| Error::MapFormat { line, msg };

    let (mut height, mut width) = (None, None);
    let mut saw_type = false;
    loop {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| err(0, "missing `map` header line".into()))?;
        let mut words = line.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("type"), Some(_), None) => saw_type = true,
            (Some("height"), Some(h), None) => {
                height = Some(h.parse::<u32>().map_err(|_| err(ln, format!("bad height `{h}`")))?)
            }
            (Some("width"), Some(w), None) => {
                width = Some(w.parse::<u32>().map_err(|_| err(ln, format!("bad width `{w}`")))?)
            }
            (Some("map"), None, None) => break,
            _ => return Err(err(ln, format!("malformed header line `{line}`"))),
        }
    }
    if !saw_type {
        return Err(err(0, "missing `type` header line".into()));
    }
    let height = height.filter(|&h| h > 0).ok_or_else(|| err(0, "missing or zero height".into()))?;
    let width = width.filter(|&w| w > 0).ok_or_else(|| err(0, "missing or zero width".into()))?;

    let mut passable = Vec::with_capacity(width as usize * height as usize);
    let mut rows = 0u32;
    let mut last_line = 4;
    for (ln, line) in lines {
        last_line = ln;
        if rows == height {
            if line.trim().is_empty() {
                continue;
            }
            return Err(err(ln, format!("more than {height} rows")));
        }
        if line.chars().count() != width as usize {
            return Err(err(
                ln,
                format!("row has {} cells, expected {width}", line.chars().count()),
            ));
        }
        for c in line.chars() {
            passable.push(match c {
                '.' | 'G' => true,
                '@' | 'T' | 'O' | 'W' => false,
                other => return Err(err(ln, format!("unknown cell character `{other}`"))),
            });
        }
        rows += 1;
    }
    if rows != height {
        return Err(err(last_line, format!("found {rows} rows, expected {height}")));
    }
    Ok(GridMap::new(width, height, passable))
}

pub fn serialize_map(map: &GridMap) -> String {
    let mut out = format!(
        "type octile\nheight {}\nwidth {}\nmap\n",
        map.height(),
        map.width()
    );
    for y in 0..map.height() {
        for x in 0..map.width() {
            out.push(if map.is_passable(Vertex::new(x, y)) { '.' } else { '@' });
        }
        out.push('\n');
    }
    out
}

pub fn read_map(path: impl AsRef<Path>) -> Result<GridMap> {
    parse_map(&fs::read_to_string(path)?)
}

/// One row of a scenario file.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioEntry {
    pub bucket: u32,
    pub map_name: String,
    pub width: u32,
    pub height: u32,
    pub start: Vertex,
    pub goal: Vertex,
    pub optimal_length: f64,
}

pub fn parse_scenario_entries(text: &str) -> Result<Vec<ScenarioEntry>> {
    let err = |line: usize, msg: String| Error::ScenarioFormat { line, msg };
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if ln == 1 {
            if !line.starts_with("version") {
                return Err(err(ln, "expected `version` header".into()));
            }
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 9 {
            return Err(err(ln, format!("expected 9 columns, found {}", cols.len())));
        }
        let int = |k: usize| {
            cols[k]
                .parse::<u32>()
                .map_err(|_| err(ln, format!("column {} is not an integer: `{}`", k + 1, cols[k])))
        };
        entries.push(ScenarioEntry {
            bucket: int(0)?,
            map_name: cols[1].to_string(),
            width: int(2)?,
            height: int(3)?,
            start: Vertex::new(int(4)?, int(5)?),
            goal: Vertex::new(int(6)?, int(7)?),
            optimal_length: cols[8]
                .parse()
                .map_err(|_| err(ln, format!("bad optimal length `{}`", cols[8])))?,
        });
    }
    Ok(entries)
}

/// Builds an instance from the first `n_agents` rows of a scenario.
pub fn parse_scenario(text: &str, map: impl Into<Arc<GridMap>>, n_agents: usize) -> Result<Instance> {
    let map = map.into();
    let entries = parse_scenario_entries(text)?;
    if entries.len() < n_agents {
        return Err(Error::ScenarioFormat {
            line: 0,
            msg: format!("requested {n_agents} agents but scenario has {} rows", entries.len()),
        });
    }
    for (agent, e) in entries.iter().take(n_agents).enumerate() {
        if e.width != map.width() || e.height != map.height() {
            return Err(Error::InvalidAgent {
                agent,
                msg: format!(
                    "scenario row is for a {}x{} map, map is {}x{}",
                    e.width,
                    e.height,
                    map.width(),
                    map.height()
                ),
            });
        }
    }
    let pairs: Vec<_> = entries.iter().take(n_agents).map(|e| (e.start, e.goal)).collect();
    Instance::new(map, &pairs)
}

pub fn read_scenario(path: impl AsRef<Path>, map: impl Into<Arc<GridMap>>, n_agents: usize) -> Result<Instance> {
    parse_scenario(&fs::read_to_string(path)?, map, n_agents)
}

pub fn serialize_scenario(entries: &[ScenarioEntry]) -> String {
    let mut out = String::from("version 1\n");
    for e in entries {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.8}",
            e.bucket,
            e.map_name,
            e.width,
            e.height,
            e.start.x,
            e.start.y,
            e.goal.x,
            e.goal.y,
            e.optimal_length
        );
    }
    out
}
