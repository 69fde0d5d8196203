//! Persistent cache of core-graph enumerations, keyed by `(g, n)`.
//!
//! Files are written to a temporary name and renamed into place, so
//! concurrent readers never see a partial file. A file that fails to parse
//! or does not match its key is recomputed and replaced.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use sha2::{Digest, Sha256};

use super::graph::{enumerate_graphs, graphs_to_text, parse_graphs, Graph};
use crate::Result;

pub const CACHE_ENV: &str = "QBV_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".qbv-cache";

fn memo() -> &'static Mutex<HashMap<(u32, u32), Vec<Graph>>> {
    static M: OnceLock<Mutex<HashMap<(u32, u32), Vec<Graph>>>> = OnceLock::new();
    M.get_or_init(Default::default)
}

pub fn cache_file(dir: &Path, g: u32, n: u32) -> PathBuf {
    let digest = Sha256::digest(format!("qbv-graphs/v1/g={g}/n={n}").as_bytes());
    dir.join(format!("graphs-{}.txt", &hex::encode(digest)[..16]))
}

fn matches_key(graphs: &[Graph], g: u32, n: u32) -> bool {
    !graphs.is_empty()
        && graphs
            .iter()
            .all(|gr| gr.loop_order() == g as i64 && gr.legs.len() == n as usize)
}

/// Core graphs for `(g, n)`, read from or written to `dir` when given.
pub fn graphs_cached(g: u32, n: u32, dir: Option<&Path>) -> Result<Vec<Graph>> {
    if let Some(v) = memo().lock().expect("cache lock").get(&(g, n)) {
        return Ok(v.clone());
    }
    let file = dir.map(|d| cache_file(d, g, n));
    let from_disk = file
        .as_ref()
        .and_then(|f| std::fs::read_to_string(f).ok())
        .and_then(|t| parse_graphs(&t).ok())
        .filter(|gs| matches_key(gs, g, n));
    let graphs = match from_disk {
        Some(gs) => gs,
        None => {
            let gs = enumerate_graphs(g as usize, n as usize)?;
            if let (Some(dir), Some(file)) = (dir, &file) {
                std::fs::create_dir_all(dir)?;
                let tmp = file.with_extension(format!("tmp{}", std::process::id()));
                std::fs::write(&tmp, graphs_to_text(&gs))?;
                std::fs::rename(&tmp, file)?;
            }
            gs
        }
    };
    memo()
        .lock()
        .expect("cache lock")
        .insert((g, n), graphs.clone());
    Ok(graphs)
}

/// Core graphs, using the directory named by `QBV_CACHE` if it is set.
pub fn graphs(g: u32, n: u32) -> Result<Vec<Graph>> {
    let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    graphs_cached(g, n, dir.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_reads_and_repairs() {
        let dir = std::env::temp_dir().join(format!("qbv-cache-test-{}", std::process::id()));
        let file = cache_file(&dir, 0, 5);
        let _ = std::fs::remove_dir_all(&dir);
        let a = graphs_cached(0, 5, Some(&dir)).unwrap();
        // the in-memory copy may predate the directory; force a disk write
        memo().lock().unwrap().remove(&(0, 5));
        let b = graphs_cached(0, 5, Some(&dir)).unwrap();
        assert_eq!(a, b);
        let text = std::fs::read_to_string(&file).unwrap();
        assert_eq!(parse_graphs(&text).unwrap(), a);
        std::fs::write(&file, "garbage").unwrap();
        memo().lock().unwrap().remove(&(0, 5));
        assert_eq!(graphs_cached(0, 5, Some(&dir)).unwrap(), a);
        assert_eq!(std::fs::read_to_string(&file).unwrap(), text);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
