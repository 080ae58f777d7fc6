//! Plain-text path files: one line per timestep, `t:(x0,y0)(x1,y1)...`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::grid::Vertex;

pub fn format_paths(configs: &[Configuration]) -> Result<String> {
    if configs.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut out = String::new();
    for (t, c) in configs.iter().enumerate() {
        let _ = write!(out, "{t}:");
        for v in c.iter() {
            let _ = write!(out, "({},{})", v.x, v.y);
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn dump_paths(configs: &[Configuration], out: impl AsRef<Path>) -> Result<()> {
    fs::write(out, format_paths(configs)?)?;
    Ok(())
}

pub fn parse_paths(text: &str) -> Result<Vec<Configuration>> {
    let mut configs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::PathsFormat { line: ln, msg };
        let (t, rest) = line.split_once(':').ok_or_else(|| err("missing `t:` prefix".into()))?;
        let t: usize = t.trim().parse().map_err(|_| err(format!("bad timestep `{t}`")))?;
        if t != configs.len() {
            return Err(err(format!("expected timestep {}, found {t}", configs.len())));
        }
        let mut positions = Vec::new();
        let mut rest = rest.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| err(format!("expected `(x,y)` at `{rest}`")))?;
            let (pair, tail) = body;
            let (x, y) = pair.split_once(',').ok_or_else(|| err(format!("bad vertex `({pair})`")))?;
            let coord = |s: &str| s.trim().parse::<u32>().map_err(|_| err(format!("bad coordinate `{s}`")));
            positions.push(Vertex::new(coord(x)?, coord(y)?));
            rest = tail.trim_start();
        }
        configs.push(Configuration::from(positions));
    }
    if configs.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(configs)
}

pub fn read_paths(path: impl AsRef<Path>) -> Result<Vec<Configuration>> {
    parse_paths(&fs::read_to_string(path)?)
}
