//! Batch Riccati runs over a family of coefficient pairs.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SheetError};
use crate::riccati::{analyze_blowup, rate_bound_check, riccati_integrate, RiccatiOptions, RiccatiStatus};

/// A bounded time-dependent coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CoefficientSpec {
    Constant { value: f64 },
    /// `mean + Σ amplitude·sin(frequency·t + phase)`, terms as `[amplitude, frequency, phase]`.
    Trig { mean: f64, terms: Vec<[f64; 3]> },
}

impl CoefficientSpec {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            CoefficientSpec::Constant { value } => *value,
            CoefficientSpec::Trig { mean, terms } => {
                mean + terms.iter().map(|[a, w, p]| a * (w * t + p).sin()).sum::<f64>()
            }
        }
    }
}

/// `X' = X² − 𝔄(t) X − 𝒜(t)`, `X(0) = x0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Member {
    pub x0: f64,
    pub frak_a: CoefficientSpec,
    pub cal_a: CoefficientSpec,
}

/// `count` members with trigonometric coefficients bounded by `bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomFamily {
    pub count: usize,
    pub seed: u64,
    pub bound: f64,
    pub x0: f64,
}

impl RandomFamily {
    pub fn members(&self) -> Vec<Member> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let b = self.bound;
        let coeff = |rng: &mut ChaCha8Rng| CoefficientSpec::Trig {
            mean: rng.gen_range(-0.5 * b..=0.5 * b),
            terms: (0..2)
                .map(|_| {
                    [
                        rng.gen_range(-0.25 * b..=0.25 * b),
                        rng.gen_range(0.5..3.0),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    ]
                })
                .collect(),
        };
        (0..self.count)
            .map(|_| Member {
                x0: self.x0,
                frak_a: coeff(&mut rng),
                cal_a: coeff(&mut rng),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Family {
    pub name: String,
    /// Integration horizon.
    pub t_end: f64,
    /// Allowed `|rate − 1|`.
    pub rate_tolerance: f64,
    #[serde(default, rename = "member")]
    pub members: Vec<Member>,
    #[serde(default)]
    pub random: Option<RandomFamily>,
}

impl Family {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| SheetError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("family serializes")
    }

    pub fn all_members(&self) -> Vec<Member> {
        let mut m = self.members.clone();
        if let Some(r) = &self.random {
            m.extend(r.members());
        }
        m
    }
}

/// Allowed relative identity residual.
pub const IDENTITY_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub member: usize,
    pub x0: f64,
    pub status: String,
    pub t_est: f64,
    pub rate: f64,
    pub residual: f64,
    pub rate_bound_margin: f64,
    pub c6: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyTable {
    pub name: String,
    pub rate_tolerance: f64,
    pub rows: Vec<StudyRow>,
}

impl StudyTable {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.passes)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "# family {} rate_tolerance={}\n# member x0 status t_est rate residual rate_bound_margin c6 verdict\n",
            self.name, self.rate_tolerance
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{} {} {} {} {} {} {} {} {}",
                r.member,
                r.x0,
                r.status,
                r.t_est,
                r.rate,
                r.residual,
                r.rate_bound_margin,
                r.c6,
                if r.passes { "pass" } else { "fail" }
            );
        }
        s
    }
}

fn study_member(i: usize, m: &Member, family: &Family) -> StudyRow {
    let opts = RiccatiOptions::default();
    let run = riccati_integrate(m.x0, &|t| m.frak_a.eval(t), &|t| m.cal_a.eval(t), (0.0, family.t_end), &opts);
    let c6 = run.series.c6();
    let mut row = StudyRow {
        member: i,
        x0: m.x0,
        status: format!("{:?}", run.status).to_lowercase(),
        t_est: f64::NAN,
        rate: f64::NAN,
        residual: f64::NAN,
        rate_bound_margin: f64::NAN,
        c6,
        passes: false,
    };
    if run.status != RiccatiStatus::Guard {
        return row;
    }
    let est = match analyze_blowup(&run.series) {
        Ok(e) => e,
        Err(e) => {
            row.status = e.to_string();
            return row;
        }
    };
    row.t_est = est.t_est;
    row.rate = est.rate;
    row.residual = est.residual;
    let bound = rate_bound_check(&run.series, est.t_est, c6);
    row.rate_bound_margin = bound.as_ref().map(|b| b.margin).unwrap_or(f64::NAN);
    row.passes = (est.rate - 1.0).abs() <= family.rate_tolerance
        && est.residual < IDENTITY_TOLERANCE
        && bound.map(|b| b.passes).unwrap_or(false);
    row
}

/// Integrates every member to the guard and fits its blow-up; members run in parallel.
pub fn riccati_study(family: &Family) -> Result<StudyTable> {
    if !(family.t_end > 0.0) || !(family.rate_tolerance > 0.0) {
        return Err(SheetError::InvalidInput("t_end and rate_tolerance must be positive".into()));
    }
    let members = family.all_members();
    let rows = members
        .par_iter()
        .enumerate()
        .map(|(i, m)| study_member(i, m, family))
        .collect();
    Ok(StudyTable {
        name: family.name.clone(),
        rate_tolerance: family.rate_tolerance,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_family() {
        let zero = CoefficientSpec::Constant { value: 0.0 };
        let f = Family {
            name: "separable".into(),
            t_end: 5.0,
            rate_tolerance: 1e-6,
            members: [1.0, 2.0, 5.0]
                .iter()
                .map(|&x0| Member { x0, frak_a: zero.clone(), cal_a: zero.clone() })
                .collect(),
            random: None,
        };
        let t = riccati_study(&f).unwrap();
        for (r, want) in t.rows.iter().zip([1.0, 0.5, 0.2]) {
            assert!((r.t_est - want).abs() < 1e-6, "{r:?}");
        }
        assert!(t.passes());
        assert_eq!(Family::from_toml(&f.to_toml()).unwrap(), f);
    }

    #[test]
    fn tangent_blowup() {
        let f = Family {
            name: "tan".into(),
            t_end: 5.0,
            rate_tolerance: 1e-6,
            members: vec![Member {
                x0: 0.0,
                frak_a: CoefficientSpec::Constant { value: 0.0 },
                cal_a: CoefficientSpec::Constant { value: -1.0 },
            }],
            random: None,
        };
        let r = &riccati_study(&f).unwrap().rows[0];
        assert!((r.t_est - std::f64::consts::FRAC_PI_2).abs() < 1e-6 && r.passes);
    }
}
