use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::ValueEnum;
use rayon::prelude::*;
use rope_core::metrics::{discrete_entropy, eme, loe, pixel_distance};
use rope_core::raster::{load_image, to_grayscale, ColorImage};
use serde::Serialize;

use crate::inputs;
use crate::params::ReportFormat;
use crate::MetricsArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    De,
    Eme,
    Pd,
    Loe,
}

/// One report line. Unrequested or unavailable metrics are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub file: String,
    pub de: Option<f64>,
    pub eme: Option<f64>,
    pub pd: Option<f64>,
    pub loe: Option<f64>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    rows: &'a [Row],
    #[serde(skip_serializing_if = "Option::is_none")]
    mean: Option<&'a Row>,
}

#[derive(Debug, Clone, Copy)]
pub struct Selection {
    pub de: bool,
    pub eme: bool,
    pub pd: bool,
    pub loe: bool,
    pub eme_block: usize,
    pub loe_grid: usize,
}

impl Selection {
    pub fn all() -> Self {
        Self {
            de: true,
            eme: true,
            pd: true,
            loe: true,
            eme_block: rope_core::metrics::DEFAULT_EME_BLOCK,
            loe_grid: rope_core::metrics::DEFAULT_LOE_GRID,
        }
    }
}

/// Measures `img`, with LOE against `original` when both requested and given.
pub fn measure(file: String, img: &ColorImage, original: Option<&ColorImage>, sel: Selection) -> anyhow::Result<Row> {
    let gray = to_grayscale(img);
    let loe = match original {
        Some(o) if sel.loe => Some(loe(&to_grayscale(o), &gray, sel.loe_grid)?),
        _ => None,
    };
    Ok(Row {
        file,
        de: sel.de.then(|| discrete_entropy(&gray)),
        eme: if sel.eme {
            Some(eme(&gray, sel.eme_block)?)
        } else {
            None
        },
        pd: sel.pd.then(|| pixel_distance(&gray)),
        loe,
    })
}

/// Column-wise arithmetic mean over the rows that carry a value.
pub fn mean_row(rows: &[Row]) -> Row {
    let mean = |f: fn(&Row) -> Option<f64>| {
        let vals: Vec<f64> = rows.iter().filter_map(f).collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    };
    Row {
        file: "mean".into(),
        de: mean(|r| r.de),
        eme: mean(|r| r.eme),
        pd: mean(|r| r.pd),
        loe: mean(|r| r.loe),
    }
}

/// JSON: `{"rows": [...], "mean": {...}}`. CSV: header, rows, then the mean row.
pub fn write_report(rows: &[Row], mean: Option<&Row>, format: ReportFormat, mut out: impl Write) -> anyhow::Result<()> {
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &JsonReport { rows, mean })?;
            writeln!(out)?;
        }
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut out);
            w.write_record(["file", "de", "eme", "pd", "loe"])?;
            for row in rows.iter().chain(mean) {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn run(args: MetricsArgs) -> anyhow::Result<usize> {
    if args.eme_block == 0 || args.loe_grid == 0 {
        bail!("--eme-block and --loe-grid must be positive");
    }
    let files = inputs::collect(&args.inputs);
    if files.is_empty() {
        bail!("no input images found");
    }
    let want = |m| args.metrics.contains(&m);
    let sel = Selection {
        de: want(Metric::De),
        eme: want(Metric::Eme),
        pd: want(Metric::Pd),
        loe: want(Metric::Loe) && args.reference.is_some(),
        eme_block: args.eme_block,
        loe_grid: args.loe_grid,
    };
    let references: Option<HashMap<String, Option<PathBuf>>> = match (&args.reference, sel.loe) {
        (Some(dir), true) => {
            Some(inputs::index_by_stem(dir).with_context(|| format!("cannot read {}", dir.display()))?)
        }
        _ => None,
    };

    let pool = crate::thread_pool(args.jobs)?;
    let results: Vec<anyhow::Result<Row>> = pool.install(|| {
        files
            .par_iter()
            .map(|path| measure_file(path, references.as_ref(), sel))
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    let mut failed = 0;
    for (path, r) in files.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                failed += 1;
                eprintln!("skipped {}: {e:#}", path.display());
            }
        }
    }
    let mean = mean_row(&rows);
    match &args.report {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("cannot write {}", p.display()))?;
            write_report(&rows, Some(&mean), args.format, BufWriter::new(f))?;
        }
        None => write_report(&rows, Some(&mean), args.format, io::stdout().lock())?,
    }
    Ok(failed)
}

fn measure_file(
    path: &Path,
    references: Option<&HashMap<String, Option<PathBuf>>>,
    sel: Selection,
) -> anyhow::Result<Row> {
    let img = load_image(path)?;
    let original = match references {
        Some(index) => {
            let stem = inputs::stem(path);
            let reference = match index.get(&stem) {
                Some(Some(p)) => p,
                Some(None) => return Err(anyhow!("several reference images named {stem:?}")),
                None => return Err(anyhow!("no reference image named {stem:?} for LOE")),
            };
            let original = load_image(reference)?;
            if original.dimensions() != img.dimensions() {
                bail!(
                    "reference {} is {:?}, image is {:?}",
                    reference.display(),
                    original.dimensions(),
                    img.dimensions()
                );
            }
            Some(original)
        }
        None => None,
    };
    measure(inputs::display_name(path), &img, original.as_ref(), sel)
}
