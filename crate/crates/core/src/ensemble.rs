use crate::error::ModelError;
use crate::model::{Model, ScoreRecord};
use crate::params::ModelParams;
use crate::stats::median;

/// Independent models that differ only in seed; member `i` is seeded with
/// `base_seed + i`. The combined score is the median of member scores.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<Model>,
    scores: Vec<f64>,
}

impl Ensemble {
    pub fn new(params: ModelParams, size: usize) -> Result<Self, ModelError> {
        if size == 0 {
            return Err(ModelError::InvalidParameter {
                name: "ensemble",
                reason: "must have at least one member".into(),
            });
        }
        let members = (0..size as u64)
            .map(|i| Model::new(params.clone().with_seed(params.seed.wrapping_add(i))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Ensemble {
            scores: Vec::with_capacity(size),
            members,
        })
    }

    /// Wraps existing models; they must agree on everything but the seed.
    pub fn from_members(members: Vec<Model>) -> Result<Self, ModelError> {
        let Some(first) = members.first() else {
            return Err(ModelError::EnsembleMismatch("no members".into()));
        };
        let key = |m: &Model| ModelParams { seed: 0, ..m.params().clone() };
        let reference = key(first);
        for (i, m) in members.iter().enumerate().skip(1) {
            if key(m) != reference {
                return Err(ModelError::EnsembleMismatch(format!(
                    "member {i} has different parameters"
                )));
            }
            if let (Some(a), Some(b)) = (first.dim(), m.dim()) {
                if a != b {
                    return Err(ModelError::EnsembleMismatch(format!(
                        "member {i} has dimension {b}, expected {a}"
                    )));
                }
            }
        }
        Ok(Ensemble {
            scores: Vec::with_capacity(members.len()),
            members,
        })
    }

    pub fn members(&self) -> &[Model] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Model> {
        self.members
    }

    /// Feeds the point to every member.
    ///
    /// `warmup` and `sampled` are set if any member reports them and
    /// `n_active` is the smallest member count, so a one-member ensemble
    /// reproduces [`Model::process`] exactly.
    pub fn process(&mut self, v: &[f64], t: f64) -> Result<ScoreRecord, ModelError> {
        self.scores.clear();
        let mut warmup = false;
        let mut sampled = false;
        let mut n_active = usize::MAX;
        for m in &mut self.members {
            let r = m.process(v, t)?;
            self.scores.push(r.score);
            warmup |= r.warmup;
            sampled |= r.sampled;
            n_active = n_active.min(r.n_active);
        }
        Ok(ScoreRecord {
            t,
            score: median(&self.scores),
            warmup,
            n_active,
            sampled,
        })
    }
}
