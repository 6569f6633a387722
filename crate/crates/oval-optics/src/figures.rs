//! Scenes shipped with the binary, written out by `run --seed-figures`.

use std::path::{Path, PathBuf};

use crate::error::{AppError, Result};
use crate::pipeline::{run, RunReport};
use crate::scene::parse_scene;

pub const FIGURES: [(&str, &str); 6] = [
    ("fig1", include_str!("../scenes/fig1.json")),
    ("fig2", include_str!("../scenes/fig2.json")),
    ("fig3", include_str!("../scenes/fig3.json")),
    ("fig4a", include_str!("../scenes/fig4a.json")),
    ("fig4b", include_str!("../scenes/fig4b.json")),
    ("fig5", include_str!("../scenes/fig5.json")),
];

/// Write every bundled scene to `dir/scenes/<name>.json` and run it into
/// `dir/<name>/`.
pub fn seed_figures(dir: &Path) -> Result<Vec<(String, RunReport)>> {
    let scenes = dir.join("scenes");
    std::fs::create_dir_all(&scenes).map_err(|e| AppError::io(&scenes, e))?;
    let mut out = Vec::new();
    for (name, text) in FIGURES {
        let path: PathBuf = scenes.join(format!("{name}.json"));
        std::fs::write(&path, text).map_err(|e| AppError::io(&path, e))?;
        let scene = parse_scene(text, &path, name)?;
        let report = run(&scene, Some(&dir.join(name)), None)?;
        out.push((name.to_string(), report));
    }
    Ok(out)
}
