use std::fs::File;
use std::io::{BufReader, Write};

use sdooop::{PocPreset, StreamGenerator, StreamSpec};

use crate::error::CliError;
use crate::io::open_output;
use crate::GenArgs;

fn build_spec(args: &GenArgs) -> Result<StreamSpec, CliError> {
    let mut spec = match &args.spec {
        Some(path) => {
            let f = File::open(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_reader(BufReader::new(f))
                .map_err(|e| CliError::parse(path, e.line() as u64, e.to_string()))?
        }
        None => {
            let d = PocPreset::default();
            for (flag, v) in [("--contextual-rate", args.contextual_rate), ("--spatial-rate", args.spatial_rate)] {
                if v.is_some_and(|v| !(0.0..=1.0).contains(&v)) {
                    return Err(CliError::Usage(format!("{flag} must be a fraction in [0, 1]")));
                }
            }
            if args.periods.is_some_and(|p| !(p.is_finite() && p > 0.0)) {
                return Err(CliError::Usage("--periods must be positive".into()));
            }
            PocPreset {
                t_period: args.t_period.unwrap_or(d.t_period),
                periods: args.periods.unwrap_or(d.periods),
                spatial_fraction: args.spatial_rate.unwrap_or(d.spatial_fraction),
                contextual_fraction: args.contextual_rate.unwrap_or(d.contextual_fraction),
                ..d
            }
            .spec()
        }
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    Ok(spec)
}

pub fn run(args: GenArgs) -> Result<(), CliError> {
    let spec = build_spec(&args)?;
    let dims = spec.dims;
    let generator = StreamGenerator::new(spec)?;
    let (out, path) = open_output(args.out.as_deref())?;
    let mut w = crate::io::csv_writer(out);
    let io_err = |e: csv::Error| CliError::csv(&path, e);

    let mut header = vec!["t".to_string()];
    header.extend((0..dims).map(|d| format!("f{d}")));
    header.push("label".into());
    w.write_record(&header).map_err(io_err)?;

    let mut fields: Vec<String> = Vec::with_capacity(dims + 2);
    for p in generator {
        fields.clear();
        fields.push(p.t.to_string());
        fields.extend(p.v.iter().map(f64::to_string));
        fields.push(p.label.code().to_string());
        w.write_record(&fields).map_err(io_err)?;
    }
    let mut inner = w.into_inner().map_err(|e| CliError::io(&path, e.into_error()))?;
    inner.flush().map_err(|e| CliError::io(&path, e))
}
