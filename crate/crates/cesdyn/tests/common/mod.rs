#![allow(dead_code)]

use std::path::{Path, PathBuf};

use cesdyn::reproduce::{reproduce, Figure};
use sha2::{Digest, Sha256};

pub const FIGURES: [(&str, Figure); 5] = [
    ("1", Figure::One),
    ("2", Figure::Two),
    ("6", Figure::Six),
    ("7", Figure::Seven),
    ("claims", Figure::Claims),
];

pub fn golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/reproduce.sha256")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// `<digest>  <figure>/<file>` lines for every reproduced file, in the
/// order the driver writes them.
pub fn digest_lines(root: &Path, jobs: usize) -> Vec<String> {
    let mut lines = Vec::new();
    for (name, fig) in FIGURES {
        let dir = root.join(name);
        let files = reproduce(fig, &dir, jobs).expect("reproduce succeeds");
        for f in files {
            let bytes = std::fs::read(&f).expect("written file");
            let rel = f
                .strip_prefix(root)
                .unwrap()
                .to_string_lossy()
                .replace('\\', "/");
            lines.push(format!("{}  {rel}", sha256_hex(&bytes)));
        }
    }
    lines
}

pub fn read_golden() -> Option<Vec<String>> {
    let text = std::fs::read_to_string(golden_path()).ok()?;
    Some(text.lines().map(str::to_string).collect())
}

pub fn write_golden(lines: &[String]) {
    let mut text = lines.join("\n");
    text.push('\n');
    std::fs::write(golden_path(), text).expect("golden file writable");
}

pub fn update_requested() -> bool {
    std::env::var_os("CESDYN_UPDATE_GOLDEN").is_some_and(|v| v == "1")
}
