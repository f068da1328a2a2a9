#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use torus_kam::{ExperimentConfig, ResolvedConfig, RunKind};

/// Seed of the frequency draw behind every frozen constant.
pub const SEED: u64 = 11;

/// Directory under the system temp dir, removed on drop.
pub struct Scratch(pub PathBuf);

impl Scratch {
    pub fn new(tag: &str) -> Self {
        let d = std::env::temp_dir().join(format!("torus-kam-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&d);
        std::fs::create_dir_all(&d).unwrap();
        Self(d)
    }

    pub fn join(&self, p: &str) -> PathBuf {
        self.0.join(p)
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

pub fn config(kind: RunKind) -> ExperimentConfig {
    ExperimentConfig {
        seed: SEED,
        ..ExperimentConfig::new(kind)
    }
}

pub fn resolve(c: ExperimentConfig) -> ResolvedConfig {
    c.resolve(Path::new(".")).unwrap()
}

/// Inexpensive settings for every subcommand.
pub fn quick(kind: RunKind) -> ExperimentConfig {
    let mut c = config(kind);
    c.lambda_grid = vec![1e2, 1e3];
    c.linearize.n_pairs = 2;
    c.reduce.growth_lattice = 0;
    c.measure.n_samples = 20_000;
    c.measure.strip_samples = 20_000;
    c.measure.strip_k_max = 4;
    c
}

pub const ALL_KINDS: [RunKind; 6] = [
    RunKind::Approx,
    RunKind::Solve,
    RunKind::LinearizeCheck,
    RunKind::ReduceCheck,
    RunKind::Measure,
    RunKind::Scaling,
];

/// Every file of a directory, by name.
pub fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}
