//! Regenerates the bundled suite in `tests/data/bundled`.
//!
//! ```text
//! cargo run -p diffpump-cli --example bundle
//! ```

use std::path::PathBuf;

use diffpump::generate::{equality_split, knapsack_cover, set_cover, Generated};
use diffpump::ingest::write_mps;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/bundled");
    std::fs::create_dir_all(&dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut instances: Vec<Generated> = Vec::new();
    for i in 0..7 {
        instances.push(set_cover(
            &mut rng,
            &format!("cover{i:02}"),
            20 + 5 * i,
            15 + 4 * i,
        ));
    }
    for i in 0..7 {
        instances.push(knapsack_cover(
            &mut rng,
            &format!("knap{i:02}"),
            15 + 4 * i,
            4 + i,
        ));
    }
    for i in 0..6 {
        instances.push(equality_split(
            &mut rng,
            &format!("split{i:02}"),
            5 + 2 * i,
            3 + i,
        ));
    }
    for g in &instances {
        let path = dir.join(format!("{}.mps", g.model.name));
        std::fs::write(&path, write_mps(&g.model))?;
        println!("{}", path.display());
    }
    Ok(())
}
