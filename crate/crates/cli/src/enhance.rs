use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use rayon::prelude::*;
use rope_core::equalizer::{enhance_detailed, Enhancement, Method, RopeParams};
use rope_core::raster::{load_image, save_image, write_pfm, write_pgm};
use serde::Serialize;

use crate::inputs;
use crate::params::ParamsRecord;
use crate::EnhanceArgs;

#[derive(Serialize)]
struct Sidecar<'a> {
    input: String,
    method: &'static str,
    params: ParamsRecord,
    width: usize,
    height: usize,
    /// True when the input had no contrast to redistribute.
    degenerate: bool,
    mapping: &'a [u8],
    histogram: Option<&'a [f64]>,
}

enum Target {
    File(PathBuf),
    Dir(PathBuf),
}

fn resolve_target(args: &EnhanceArgs, n_inputs: usize) -> anyhow::Result<Target> {
    let out = args
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(crate::DEFAULT_OUTPUT_DIR));
    let single_file = n_inputs == 1 && args.inputs.len() == 1 && !args.inputs[0].is_dir();
    let ext = out.extension().map(|e| e.to_string_lossy().to_ascii_lowercase());
    match ext.as_deref() {
        Some("png") if single_file => Ok(Target::File(out)),
        Some("png") if !out.is_dir() => bail!("{} names a file but there are {n_inputs} inputs", out.display()),
        Some("jpg" | "jpeg") => bail!("only PNG output is supported: {}", out.display()),
        _ => {
            fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
            Ok(Target::Dir(out))
        }
    }
}

pub fn run(args: EnhanceArgs) -> anyhow::Result<usize> {
    let params = args.params.to_params()?;
    let files = inputs::collect(&args.inputs);
    if files.is_empty() {
        bail!("no input images found");
    }
    let target = resolve_target(&args, files.len())?;
    if let Target::File(p) = &target {
        if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(parent).with_context(|| format!("cannot create {}", parent.display()))?;
        }
    }
    let dupes = inputs::duplicate_stems(&files);
    let pool = crate::thread_pool(args.jobs)?;

    let results: Vec<anyhow::Result<PathBuf>> = pool.install(|| {
        files
            .par_iter()
            .map(|input| {
                let output = match &target {
                    Target::File(p) => p.clone(),
                    Target::Dir(d) => {
                        let stem = inputs::stem(input);
                        if dupes.contains_key(&stem) {
                            bail!("another input shares the name {stem:?}; outputs would collide");
                        }
                        d.join(format!("{stem}.png"))
                    }
                };
                process(input, &output, &args, &params)?;
                Ok(output)
            })
            .collect()
    });

    let mut failed = 0;
    for (input, result) in files.iter().zip(results) {
        match result {
            Ok(out) => println!("{} -> {}", input.display(), out.display()),
            Err(e) => {
                failed += 1;
                eprintln!("error: {}: {e:#}", input.display());
            }
        }
    }
    Ok(failed)
}

fn process(input: &Path, output: &Path, args: &EnhanceArgs, params: &RopeParams) -> anyhow::Result<()> {
    let img = load_image(input)?;
    let result = enhance_detailed(&img, params, args.method)?;
    save_image(&result.output, output)?;
    if args.sidecar {
        write_sidecar(input, &output.with_extension("json"), args.method, params, &result)?;
    }
    if args.dump {
        write_dump(&output.with_extension("debug"), &result)?;
    }
    Ok(())
}

fn write_sidecar(
    input: &Path,
    path: &Path,
    method: Method,
    params: &RopeParams,
    e: &Enhancement,
) -> anyhow::Result<()> {
    let sidecar = Sidecar {
        input: inputs::display_name(input),
        method: method.name(),
        params: params.into(),
        width: e.output.width(),
        height: e.output.height(),
        degenerate: e.histogram.is_none(),
        mapping: e.mapping.table(),
        histogram: e.histogram.as_ref().map(|h| h.values()),
    };
    let mut f = BufWriter::new(File::create(path).with_context(|| format!("cannot write {}", path.display()))?);
    serde_json::to_writer_pretty(&mut f, &sidecar)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

fn write_dump(dir: &Path, e: &Enhancement) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    write_pgm(&e.gray_in, dir.join("gray_in.pgm"))?;
    write_pgm(&e.gray_out, dir.join("gray_out.pgm"))?;
    if let Some(h2) = &e.co_occurrence {
        let path = dir.join("cooccurrence.csv");
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record(["i", "j", "p"])?;
        for (i, j, p) in h2.pairs().filter(|&(_, _, p)| p > 0.0) {
            w.serialize((i, j, p))?;
        }
        w.flush()?;
    }
    if let Some(illum) = &e.illumination {
        write_pfm(
            illum.width(),
            illum.height(),
            illum.values(),
            dir.join("illumination.pfm"),
        )?;
    }
    if let Some(refl) = &e.reflectance {
        write_pfm(refl.width(), refl.height(), refl.values(), dir.join("reflectance.pfm"))?;
    }
    Ok(())
}
