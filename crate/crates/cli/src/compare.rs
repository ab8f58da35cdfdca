use std::fs::{self, File};
use std::io::BufWriter;

use anyhow::Context;
use rayon::prelude::*;
use rope_core::equalizer::{enhance, Method};
use rope_core::raster::{load_image, save_image, ColorImage};

use crate::inputs;
use crate::metrics::{measure, write_report, Row, Selection};
use crate::CompareArgs;

const GUTTER: usize = 4;

/// Panels left to right with a black gutter between them.
fn montage(panels: &[&ColorImage]) -> ColorImage {
    let height = panels.iter().map(|p| p.height()).max().unwrap_or(0);
    let mut offsets = Vec::with_capacity(panels.len());
    let mut width = 0;
    for (n, p) in panels.iter().enumerate() {
        if n > 0 {
            width += GUTTER;
        }
        offsets.push(width);
        width += p.width();
    }
    let mut out = vec![[0u8; 3]; width * height];
    for (p, &x0) in panels.iter().zip(&offsets) {
        for y in 0..p.height() {
            let src = &p.pixels()[y * p.width()..(y + 1) * p.width()];
            out[y * width + x0..y * width + x0 + p.width()].copy_from_slice(src);
        }
    }
    ColorImage::new(width, height, out).expect("montage buffer matches its dimensions")
}

pub fn run(args: CompareArgs) -> anyhow::Result<usize> {
    let params = args.params.to_params()?;
    let dir = args.output.clone().unwrap_or_else(|| crate::DEFAULT_OUTPUT_DIR.into());
    let input = load_image(&args.input)?;
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let stem = inputs::stem(&args.input);

    let pool = crate::thread_pool(args.jobs)?;
    let results: Vec<_> = pool.install(|| Method::ALL.par_iter().map(|&m| enhance(&input, &params, m)).collect());

    let mut failed = 0;
    let mut rows = vec![measure(
        inputs::display_name(&args.input),
        &input,
        Some(&input),
        Selection::all(),
    )?];
    let mut panels = vec![&input];
    for (method, result) in Method::ALL.iter().zip(&results) {
        let out = match result {
            Ok(img) => img,
            Err(e) => {
                failed += 1;
                eprintln!("error: {method}: {e}");
                continue;
            }
        };
        let name = format!("{stem}-{method}.png");
        let path = dir.join(&name);
        if let Err(e) = save_image(out, &path) {
            failed += 1;
            eprintln!("error: {e}");
            continue;
        }
        println!("{method} -> {}", path.display());
        rows.push(measure(name, out, Some(&input), Selection::all())?);
        panels.push(out);
    }

    let montage_path = dir.join(format!("{stem}-compare.png"));
    save_image(&montage(&panels), &montage_path)?;
    println!("montage -> {}", montage_path.display());

    let table_path = dir.join(format!("{stem}-metrics.{}", args.format.extension()));
    let f = File::create(&table_path).with_context(|| format!("cannot write {}", table_path.display()))?;
    write_report(&rows, None, args.format, BufWriter::new(f))?;
    print_table(&rows);
    Ok(failed)
}

fn print_table(rows: &[Row]) {
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
    let width = rows.iter().map(|r| r.file.len()).max().unwrap_or(4).max(4);
    println!(
        "{:width$}  {:>10}  {:>10}  {:>10}  {:>10}",
        "file", "de", "eme", "pd", "loe"
    );
    for r in rows {
        println!(
            "{:width$}  {:>10}  {:>10}  {:>10}  {:>10}",
            r.file,
            cell(r.de),
            cell(r.eme),
            cell(r.pd),
            cell(r.loe)
        );
    }
}
