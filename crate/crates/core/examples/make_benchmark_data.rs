//! Regenerates `data/random-32-32-20.map` and its 25 `random-N.scen` files.
//!
//! The map is 32x32 with 20% of cells blocked uniformly at random, matching
//! the shape of the well-known benchmark map of the same name. Every file is
//! a pure function of the seeds below.
//!
//!     cargo run --release --example make_benchmark_data [OUT_DIR]

use std::fs;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rtlacam::gen::{random_map, random_scenario};
use rtlacam::movingai::{serialize_map, serialize_scenario};

const MAP_SEED: u64 = 0x3232_2020;
const SCEN_ROWS: usize = 200;

fn main() -> std::io::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    fs::create_dir_all(&out)?;

    let name = "random-32-32-20.map";
    let map = random_map(32, 32, 0.2, &mut ChaCha8Rng::seed_from_u64(MAP_SEED));
    fs::write(out.join(name), serialize_map(&map))?;

    for k in 1..=25u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(MAP_SEED ^ (k << 40));
        let entries = random_scenario(&map, name, SCEN_ROWS, &mut rng);
        fs::write(out.join(format!("random-32-32-20-random-{k}.scen")), serialize_scenario(&entries))?;
    }
    println!("wrote {name} and 25 scenarios to {}", out.display());
    Ok(())
}
