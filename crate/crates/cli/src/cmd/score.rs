use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use sdooop::{Ensemble, Model, ModelError, ModelParams, ScoreRecord, SwKnn, SwKnnParams};

use crate::error::{invalid_params, snapshot_error, CliError};
use crate::io::{csv_writer, open_output, Row, StreamReader};
use crate::{Algo, ScoreArgs};

enum Scorer {
    Observers(Ensemble),
    Window(SwKnn),
}

impl Scorer {
    fn process(&mut self, v: &[f64], t: f64) -> Result<ScoreRecord, ModelError> {
        match self {
            Scorer::Observers(e) => e.process(v, t),
            Scorer::Window(s) => s.process(v, t).map(|r| ScoreRecord {
                t,
                score: r.score,
                warmup: r.warmup,
                n_active: 0,
                sampled: false,
            }),
        }
    }
}

fn build(args: &ScoreArgs) -> Result<Scorer, CliError> {
    match args.algo {
        Algo::Sdooop => {
            let t_ewma = args
                .t_ewma
                .ok_or_else(|| CliError::Usage("--T is required for --algo sdooop".into()))?;
            let t_period = args
                .t_period
                .ok_or_else(|| CliError::Usage("--T0 is required for --algo sdooop".into()))?;
            let params = ModelParams::new(args.k, args.x, t_ewma, t_period, args.bins, args.qid)
                .with_seed(args.seed)
                .with_distance(args.distance);
            params.validate().map_err(invalid_params)?;
            for w in params.warnings() {
                eprintln!("warning: {w}");
            }
            let members = args.ensemble.unwrap_or(1);
            Ok(Scorer::Observers(Ensemble::new(params, members).map_err(invalid_params)?))
        }
        Algo::Swknn => {
            if args.model_out.is_some() {
                return Err(CliError::Usage("--model-out is only available for --algo sdooop".into()));
            }
            if args.ensemble.is_some() {
                return Err(CliError::Usage("--ensemble is only available for --algo sdooop".into()));
            }
            let window = args
                .window
                .ok_or_else(|| CliError::Usage("--window is required for --algo swknn".into()))?;
            let params = SwKnnParams {
                window,
                k_nn: args.knn,
                distance: args.distance,
            };
            Ok(Scorer::Window(SwKnn::new(params).map_err(invalid_params)?))
        }
    }
}

/// Writes a model file: a single snapshot object, or an array of member
/// snapshots for ensembles of more than one model.
fn save(ensemble: &Ensemble, path: &Path) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    let file = File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    let mut w = BufWriter::new(file);
    let snaps: Vec<_> = ensemble.members().iter().map(Model::snapshot).collect();
    let result = match snaps.as_slice() {
        [one] => serde_json::to_writer_pretty(&mut w, one),
        many => serde_json::to_writer_pretty(&mut w, many),
    };
    result.map_err(|e| snapshot_error(&tmp, e.into()))?;
    w.write_all(b"\n").map_err(|e| CliError::io(&tmp, e))?;
    w.flush().map_err(|e| CliError::io(&tmp, e))?;
    drop(w);
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn run(args: ScoreArgs) -> Result<(), CliError> {
    let mut scorer = build(&args)?;
    let mut reader = StreamReader::open(args.input.as_deref())?;
    let (out, out_path) = open_output(args.out.as_deref())?;
    let mut w = csv_writer(out);
    let write_err = |e: csv::Error| CliError::csv(&out_path, e);
    w.write_record(["t", "score", "warmup", "n_active", "sampled"])
        .map_err(write_err)?;

    let mut row = Row::default();
    let mut next_checkpoint: Option<f64> = None;
    while reader.next_into(&mut row)? {
        let rec = scorer.process(&row.v, row.t).map_err(|e| {
            CliError::Data(format!("{}:{}: {e}", reader.path().display(), row.line))
        })?;
        w.write_record([
            rec.t.to_string(),
            rec.score.to_string(),
            u8::from(rec.warmup).to_string(),
            rec.n_active.to_string(),
            u8::from(rec.sampled).to_string(),
        ])
        .map_err(write_err)?;

        if let (Some(every), Some(path), Scorer::Observers(e)) =
            (args.checkpoint_every, args.model_out.as_deref(), &scorer)
        {
            let due = *next_checkpoint.get_or_insert(row.t + every);
            if row.t >= due {
                save(e, path)?;
                let skipped = ((row.t - due) / every).floor() + 1.0;
                next_checkpoint = Some(due + skipped * every);
            }
        }
    }
    let mut inner = w.into_inner().map_err(|e| CliError::io(&out_path, e.into_error()))?;
    inner.flush().map_err(|e| CliError::io(&out_path, e))?;

    if let (Some(path), Scorer::Observers(e)) = (args.model_out.as_deref(), &scorer) {
        save(e, path)?;
    }
    Ok(())
}
