use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use sdooop::{Model, ModelSnapshot};

use crate::error::{snapshot_error, CliError};
use crate::io::{column, csv_writer, field_f64, field_flag, open_output, read_table};
use crate::InspectArgs;

fn load_model(path: &Path, member: usize) -> Result<Model, CliError> {
    let f = File::open(path).map_err(|e| CliError::io(path, e))?;
    let value: serde_json::Value =
        serde_json::from_reader(BufReader::new(f)).map_err(|e| snapshot_error(path, e.into()))?;
    let value = match value {
        serde_json::Value::Array(mut members) => {
            if member >= members.len() {
                return Err(CliError::Usage(format!(
                    "--member {member} out of range, the file holds {} models",
                    members.len()
                )));
            }
            members.swap_remove(member)
        }
        one if member == 0 => one,
        _ => return Err(CliError::Usage(format!("--member {member} given but the file holds one model"))),
    };
    let snap: ModelSnapshot = serde_json::from_value(value).map_err(|e| snapshot_error(path, e.into()))?;
    Model::restore(&snap).map_err(|e| snapshot_error(path, e))
}

fn sampling_log(scores: &Path, interval: f64) -> Result<Vec<Vec<String>>, CliError> {
    let (headers, rows) = read_table(scores)?;
    let t_col = column(scores, &headers, "t")?;
    let s_col = column(scores, &headers, "sampled")?;
    let mut counts: Vec<u64> = Vec::new();
    let mut first: Option<f64> = None;
    for (line, r) in &rows {
        let t = field_f64(scores, *line, &headers, r, t_col)?;
        let start = *first.get_or_insert((t / interval).floor());
        let bucket = (t / interval).floor() - start;
        if bucket < 0.0 {
            return Err(CliError::Data(format!("{}:{line}: timestamps decrease", scores.display())));
        }
        let bucket = bucket as usize;
        if counts.len() <= bucket {
            counts.resize(bucket + 1, 0);
        }
        counts[bucket] += u64::from(field_flag(scores, *line, r, s_col)?);
    }
    let start = first.unwrap_or(0.0);
    Ok(counts
        .iter()
        .enumerate()
        .map(|(i, c)| vec![((start + i as f64) * interval).to_string(), c.to_string()])
        .collect())
}

pub fn run(args: InspectArgs) -> Result<(), CliError> {
    let mut rows: Vec<Vec<String>> = Vec::new();
    if args.sampling_log {
        let scores = args.scores.as_deref().expect("required by the parser");
        let interval = args.interval.expect("required by the parser");
        rows.push(vec!["interval_start".into(), "samples".into()]);
        rows.extend(sampling_log(scores, interval)?);
    } else {
        let path = args.model.as_deref().expect("required by the parser");
        let model = load_model(path, args.member)?;
        let obs = model.observers();
        let params = model.params();
        if args.spectrum {
            let mut header = vec!["observer".to_string()];
            header.extend((0..params.n_bins).map(|n| format!("bin{n}")));
            rows.push(header);
            for (i, o) in obs.iter().enumerate() {
                let mut r = vec![i.to_string()];
                r.extend(o.spectrum_magnitude().iter().map(f64::to_string));
                rows.push(r);
            }
        } else if args.shape {
            let horizon = args.horizon.expect("required by the parser");
            if args.samples == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            let mut header = vec!["offset".to_string()];
            header.extend((0..obs.len()).map(|i| format!("o{i}")));
            rows.push(header);
            for j in 0..args.samples {
                let offset = horizon * j as f64 / args.samples as f64;
                let mut r = vec![offset.to_string()];
                r.extend(obs.iter().map(|o| o.temporal_shape(offset, params.t_period).to_string()));
                rows.push(r);
            }
        } else {
            let active = if obs.is_empty() {
                Vec::new()
            } else {
                model.active_observers().map_err(|e| CliError::Data(e.to_string()))?
            };
            let dim = model.dim().unwrap_or(0);
            let mut header: Vec<String> = ["observer", "inserted_at", "h", "mass", "normalized_mass", "activity", "active"]
                .map(String::from)
                .to_vec();
            header.extend((0..dim).map(|d| format!("f{d}")));
            rows.push(header);
            for (i, o) in obs.iter().enumerate() {
                let mut r = vec![
                    i.to_string(),
                    o.inserted_at.to_string(),
                    o.h.to_string(),
                    o.mass().to_string(),
                    o.normalized_mass().to_string(),
                    o.activity().to_string(),
                    u8::from(active.contains(&i)).to_string(),
                ];
                r.extend(o.position.iter().map(f64::to_string));
                rows.push(r);
            }
        }
    }

    let (out, path) = open_output(args.out.as_deref())?;
    let mut w = csv_writer(out);
    for r in &rows {
        w.write_record(r).map_err(|e| CliError::csv(&path, e))?;
    }
    let mut inner = w.into_inner().map_err(|e| CliError::io(&path, e.into_error()))?;
    inner.flush().map_err(|e| CliError::io(&path, e))
}
