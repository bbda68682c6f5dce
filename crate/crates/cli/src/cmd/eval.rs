use std::io::Write;

use sdooop::metrics::{summarize, MetricSummary};
use sdooop::Label;

use crate::error::CliError;
use crate::io::{column, csv_writer, field_f64, field_flag, open_output, parse_label, read_table};
use crate::EvalArgs;

const COLUMNS: [&str; 8] = ["subset", "n", "outliers", "auc", "ap", "aap", "p_at_n", "ap_at_n"];

fn load(args: &EvalArgs) -> Result<(Vec<f64>, Vec<Label>), CliError> {
    let path = &args.scores;
    let (headers, rows) = read_table(path)?;
    let score_col = column(path, &headers, "score")?;
    let warmup_col = if args.drop_warmup {
        Some(column(path, &headers, "warmup")?)
    } else {
        None
    };

    let labels: Vec<Label> = match &args.labels {
        Some(lpath) => {
            let (lh, lrows) = read_table(lpath)?;
            let col = column(lpath, &lh, "label")?;
            if lrows.len() != rows.len() {
                return Err(CliError::Data(format!(
                    "{} has {} rows but {} has {}",
                    path.display(),
                    rows.len(),
                    lpath.display(),
                    lrows.len()
                )));
            }
            lrows
                .iter()
                .map(|(line, r)| parse_label(lpath, *line, &r[col]))
                .collect::<Result<_, _>>()?
        }
        None => {
            let col = column(path, &headers, "label").map_err(|_| {
                CliError::Usage(format!("{} has no 'label' column; pass --labels", path.display()))
            })?;
            rows.iter()
                .map(|(line, r)| parse_label(path, *line, &r[col]))
                .collect::<Result<_, _>>()?
        }
    };

    let mut scores = Vec::with_capacity(rows.len());
    let mut kept = Vec::with_capacity(rows.len());
    for ((line, r), label) in rows.iter().zip(labels) {
        if let Some(c) = warmup_col {
            if field_flag(path, *line, r, c)? {
                continue;
            }
        }
        scores.push(field_f64(path, *line, &headers, r, score_col)?);
        kept.push(label);
    }
    Ok((scores, kept))
}

fn subset(name: &str, scores: &[f64], labels: &[Label], keep: impl Fn(Label) -> bool) -> Result<MetricSummary, CliError> {
    let (s, l): (Vec<f64>, Vec<bool>) = scores
        .iter()
        .zip(labels)
        .filter(|(_, &l)| keep(l))
        .map(|(&s, l)| (s, l.is_outlier()))
        .unzip();
    summarize(&s, &l).map_err(|e| CliError::Data(format!("subset '{name}': {e}")))
}

pub fn run(args: EvalArgs) -> Result<(), CliError> {
    let (scores, labels) = load(&args)?;
    let mut table = vec![("all", subset("all", &scores, &labels, |_| true)?)];
    if args.by_class {
        for (name, class) in [("spatial", Label::SpatialOutlier), ("contextual", Label::ContextualOutlier)] {
            if labels.contains(&class) {
                table.push((name, subset(name, &scores, &labels, |l| l == Label::Normal || l == class)?));
            } else {
                eprintln!("note: no {name} outliers, skipping that subset");
            }
        }
    }

    let rows: Vec<[String; 8]> = table
        .iter()
        .map(|(name, m)| {
            [
                name.to_string(),
                m.n.to_string(),
                m.outliers.to_string(),
                m.auc.to_string(),
                m.ap.to_string(),
                m.aap.to_string(),
                m.p_at_n.to_string(),
                m.ap_at_n.to_string(),
            ]
        })
        .collect();

    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(
        stdout,
        "{:<11} {:>9} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "subset", "n", "outliers", "AUC", "AP", "AAP", "P@n", "AP@n"
    );
    for (name, m) in &table {
        let _ = writeln!(
            stdout,
            "{:<11} {:>9} {:>8} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            name, m.n, m.outliers, m.auc, m.ap, m.aap, m.p_at_n, m.ap_at_n
        );
    }
    drop(stdout);

    if let Some(out) = args.out.as_deref() {
        let (w, path) = open_output(Some(out))?;
        let mut w = csv_writer(w);
        w.write_record(COLUMNS).map_err(|e| CliError::csv(&path, e))?;
        for r in &rows {
            w.write_record(r).map_err(|e| CliError::csv(&path, e))?;
        }
        let mut inner = w.into_inner().map_err(|e| CliError::io(&path, e.into_error()))?;
        inner.flush().map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}
