use std::collections::HashMap;
use std::ffi::OsStr;
use std::fs;
use std::path::{Path, PathBuf};

const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(OsStr::to_str)
        .is_some_and(|e| IMAGE_EXTENSIONS.iter().any(|x| x.eq_ignore_ascii_case(e)))
}

/// Expands directories to the images directly inside them. Explicit file
/// arguments are kept even if missing so the failure is reported per file.
/// Sorted by file name, then full path.
pub fn collect(args: &[PathBuf]) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for arg in args {
        if arg.is_dir() {
            match fs::read_dir(arg) {
                Ok(entries) => out.extend(
                    entries
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|p| p.is_file() && is_image(p)),
                ),
                Err(_) => out.push(arg.clone()),
            }
        } else {
            out.push(arg.clone());
        }
    }
    out.sort_by(|a, b| a.file_name().cmp(&b.file_name()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

pub fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".into())
}

pub fn display_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Stems shared by more than one input; their outputs would collide.
pub fn duplicate_stems(paths: &[PathBuf]) -> HashMap<String, usize> {
    let mut seen = HashMap::new();
    for p in paths {
        *seen.entry(stem(p)).or_insert(0) += 1;
    }
    seen.retain(|_, n| *n > 1);
    seen
}

/// Images in `dir` keyed by stem. Ambiguous stems map to `None`.
pub fn index_by_stem(dir: &Path) -> std::io::Result<HashMap<String, Option<PathBuf>>> {
    let mut map: HashMap<String, Option<PathBuf>> = HashMap::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_file() && is_image(&path) {
            map.entry(stem(&path)).and_modify(|v| *v = None).or_insert(Some(path));
        }
    }
    Ok(map)
}
