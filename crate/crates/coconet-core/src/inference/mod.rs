//! OLS regression of openness scores on country covariates, with the
//! standard diagnostics: variance inflation factors and the
//! Breusch-Pagan / Cook-Weisberg score test for non-constant variance.
//!
//! Model tables follow the three-column layout used throughout: a full
//! model, a non-culture model (economic, linguistic, technological), and
//! a culture model (the four survey value dimensions). Every variable is
//! rescaled to the unit interval before fitting so coefficient magnitudes
//! are comparable.

pub mod linalg;
pub mod special;

use crate::country::CountryCode;
use crate::error::Error;
use crate::report::CentralityReport;
use crate::scalar::Real;
use linalg::{least_squares, xtx_inverse_diagonal};
use special::{chi_squared_upper_p, t_two_sided_p};
use std::io::Read;

/// Country-keyed numeric columns; cells may be missing. Regressions use
/// complete cases only.
#[derive(Debug, Clone)]
pub struct CovariateTable<F> {
    countries: Vec<CountryCode>,
    names: Vec<String>,
    columns: Vec<Vec<Option<F>>>,
}

impl<F: Real> CovariateTable<F> {
    pub fn new(countries: Vec<CountryCode>) -> Self {
        CovariateTable {
            countries,
            names: Vec::new(),
            columns: Vec::new(),
        }
    }

    pub fn push_column(&mut self, name: &str, values: Vec<Option<F>>) {
        assert_eq!(values.len(), self.countries.len());
        self.names.push(name.to_owned());
        self.columns.push(values);
    }

    pub fn countries(&self) -> &[CountryCode] {
        &self.countries
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn column(&self, name: &str) -> Option<&[Option<F>]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    /// CSV with a `country` column plus named numeric columns. Empty cells
    /// are missing values; anything else must parse as a number.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, Error> {
        let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::UnreadableInput(format!("cannot read covariate header: {e}")))?
            .clone();
        let country_col = headers
            .iter()
            .position(|h| h == "country")
            .ok_or_else(|| Error::MissingColumn("country".to_owned()))?;
        let names: Vec<String> = headers
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != country_col)
            .map(|(_, h)| h.to_owned())
            .collect();

        let mut countries = Vec::new();
        let mut columns: Vec<Vec<Option<F>>> = vec![Vec::new(); names.len()];
        for row in rdr.records() {
            let row = row.map_err(|e| Error::UnreadableInput(format!("bad covariate row: {e}")))?;
            let code = CountryCode::new(row.get(country_col).unwrap_or_default())?;
            if countries.contains(&code) {
                return Err(Error::DuplicateCountry(code.to_string()));
            }
            countries.push(code);
            let mut slot = 0;
            for (i, cell) in row.iter().enumerate() {
                if i == country_col {
                    continue;
                }
                let value = if cell.is_empty() {
                    None
                } else {
                    Some(cell.parse::<f64>().map(F::from_f64_lossy).map_err(|_| {
                        Error::UnreadableInput(format!(
                            "column {} for {code}: {cell:?} is not numeric",
                            names[slot]
                        ))
                    })?)
                };
                columns[slot].push(value);
                slot += 1;
            }
            // short rows: pad missing trailing cells
            while slot < columns.len() {
                columns[slot].push(None);
                slot += 1;
            }
        }
        Ok(CovariateTable {
            countries,
            names,
            columns,
        })
    }

    /// Rescale the named columns to the unit interval: x -> (x - min) /
    /// (max - min), over non-missing cells. A constant column is an error
    /// naming the column.
    pub fn rescale_unit(&self, columns: &[&str]) -> Result<Self, Error> {
        let mut out = self.clone();
        for &name in columns {
            let idx = out
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::MissingColumn(name.to_owned()))?;
            let rescaled = rescale_unit_vec(
                name,
                &out.columns[idx]
                    .iter()
                    .filter_map(|v| *v)
                    .collect::<Vec<F>>(),
            )?;
            // write back in order over the non-missing cells
            let mut it = rescaled.into_iter();
            for cell in out.columns[idx].iter_mut() {
                if cell.is_some() {
                    *cell = Some(it.next().expect("rescaled length matches"));
                }
            }
        }
        Ok(out)
    }
}

/// Unit-interval rescale of a dense vector; errors on constant input.
pub fn rescale_unit_vec<F: Real>(name: &str, values: &[F]) -> Result<Vec<F>, Error> {
    let min = values.iter().cloned().fold(F::infinity(), F::min);
    let max = values.iter().cloned().fold(F::neg_infinity(), F::max);
    if !(max > min) {
        return Err(Error::ConstantColumn(name.to_owned()));
    }
    let range = max - min;
    Ok(values.iter().map(|&v| (v - min) / range).collect())
}

/// One fitted term: unstandardized coefficient, standard error, t
/// statistic, and two-sided p-value.
#[derive(Debug, Clone)]
pub struct Term<F> {
    pub name: String,
    pub coef: F,
    pub se: F,
    pub t: F,
    pub p: F,
}

impl<F: Real> Term<F> {
    /// Significance stars: * p<.05, ** p<.01, *** p<.001.
    pub fn stars(&self) -> &'static str {
        let p = self.p.to_f64_lossy();
        if p < 0.001 {
            "***"
        } else if p < 0.01 {
            "**"
        } else if p < 0.05 {
            "*"
        } else {
            ""
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegressionResult<F> {
    pub intercept: Option<Term<F>>,
    pub terms: Vec<Term<F>>,
    pub r_squared: F,
    pub adj_r_squared: F,
    pub n: usize,
    pub df_resid: usize,
    pub residuals: Vec<F>,
    pub fitted: Vec<F>,
    /// Per-predictor variance inflation factors, when computed.
    pub vif: Option<Vec<(String, F)>>,
    /// Breusch-Pagan score statistic and p-value, when computed.
    pub bp: Option<(F, F)>,
}

impl<F: Real> RegressionResult<F> {
    pub fn term(&self, name: &str) -> Option<&Term<F>> {
        self.terms.iter().find(|t| t.name == name)
    }
}

/// Ordinary least squares via pivoted QR. Standard errors come from the
/// sigma^2 (X^T X)^(-1) diagonal, p-values from the t distribution with
/// n - p - 1 degrees of freedom (n - p without an intercept).
pub fn ols_fit<F: Real>(
    y: &[F],
    predictors: &[(String, Vec<F>)],
    intercept: bool,
) -> Result<RegressionResult<F>, Error> {
    let n = y.len();
    let p = predictors.len();
    for (name, col) in predictors {
        if col.len() != n {
            return Err(Error::UnreadableInput(format!(
                "column {name} has {} rows, response has {n}",
                col.len()
            )));
        }
    }
    if n <= p + 1 {
        return Err(Error::TooFewObservations { n, params: p + 1 });
    }

    let mut design: Vec<Vec<F>> = Vec::with_capacity(p + 1);
    let mut names: Vec<String> = Vec::with_capacity(p + 1);
    if intercept {
        design.push(vec![F::one(); n]);
        names.push("Intercept".to_owned());
    }
    for (name, col) in predictors {
        design.push(col.clone());
        names.push(name.clone());
    }

    let fit = least_squares(&design, y);
    if fit.rank < design.len() {
        let culprits: Vec<String> = fit.dropped.iter().map(|&i| names[i].clone()).collect();
        return Err(Error::Collinear(culprits.join(", ")));
    }

    let params = design.len();
    let df_resid = n - params;
    let rss: F = fit.residuals.iter().map(|&e| e * e).sum();
    let tss: F = if intercept {
        let mean = y.iter().cloned().sum::<F>() / F::from_usize(n).unwrap();
        y.iter().map(|&v| (v - mean) * (v - mean)).sum()
    } else {
        y.iter().map(|&v| v * v).sum()
    };
    let r_squared = if tss > F::zero() {
        F::one() - rss / tss
    } else {
        F::zero()
    };
    let nf = F::from_usize(n).unwrap();
    let pf = F::from_usize(p).unwrap();
    let adj_r_squared = F::one() - (F::one() - r_squared) * (nf - F::one()) / (nf - pf - F::one());

    let sigma2 = rss / F::from_usize(df_resid).unwrap();
    let diag = xtx_inverse_diagonal(&design).ok_or_else(|| Error::Collinear(names.join(", ")))?;
    let df = F::from_usize(df_resid).unwrap();
    let mut terms: Vec<Term<F>> = names
        .iter()
        .zip(&fit.coef)
        .zip(&diag)
        .map(|((name, &coef), &d)| {
            let se = (sigma2 * d).sqrt();
            let t = if se > F::zero() {
                coef / se
            } else if coef == F::zero() {
                F::zero()
            } else {
                F::infinity() * coef.signum()
            };
            Term {
                name: name.clone(),
                coef,
                se,
                t,
                p: t_two_sided_p(t.abs(), df),
            }
        })
        .collect();
    let intercept_term = if intercept {
        Some(terms.remove(0))
    } else {
        None
    };

    Ok(RegressionResult {
        intercept: intercept_term,
        terms,
        r_squared,
        adj_r_squared,
        n,
        df_resid,
        residuals: fit.residuals,
        fitted: fit.fitted,
        vif: None,
        bp: None,
    })
}

/// Variance inflation factors: VIF_j = 1/(1 - R_j^2) from regressing
/// predictor j on the others (with intercept). Perfect collinearity is
/// reported as infinity rather than an error.
pub fn vif<F: Real>(predictors: &[(String, Vec<F>)]) -> Result<Vec<(String, F)>, Error> {
    if predictors.len() < 2 {
        return Err(Error::TooFewPredictors);
    }
    let n = predictors[0].1.len();
    let one_minus_floor = F::from_f64_lossy(1e-12);
    let mut out = Vec::with_capacity(predictors.len());
    for j in 0..predictors.len() {
        let y = &predictors[j].1;
        let mut design: Vec<Vec<F>> = vec![vec![F::one(); n]];
        for (k, (_, col)) in predictors.iter().enumerate() {
            if k != j {
                design.push(col.clone());
            }
        }
        let fit = least_squares(&design, y);
        let mean = y.iter().cloned().sum::<F>() / F::from_usize(n).unwrap();
        let tss: F = y.iter().map(|&v| (v - mean) * (v - mean)).sum();
        let rss: F = fit.residuals.iter().map(|&e| e * e).sum();
        let value = if !(tss > F::zero()) {
            // constant predictor duplicates the intercept
            F::infinity()
        } else {
            // rounding can push R^2 a hair below zero; VIF stays >= 1
            let r2 = (F::one() - rss / tss).max(F::zero());
            if F::one() - r2 <= one_minus_floor {
                F::infinity()
            } else {
                F::one() / (F::one() - r2)
            }
        };
        out.push((predictors[j].0.clone(), value));
    }
    Ok(out)
}

/// Breusch-Pagan / Cook-Weisberg score test. Squared residuals, scaled by
/// their mean, are regressed on the predictors; the statistic is n times
/// the auxiliary R^2, compared against chi-squared with p degrees of
/// freedom. All-zero residuals are degenerate: (0, 1).
pub fn bp_score_test<F: Real>(
    result: &RegressionResult<F>,
    predictors: &[(String, Vec<F>)],
) -> Result<(F, F), Error> {
    let n = result.residuals.len();
    let u: Vec<F> = result.residuals.iter().map(|&e| e * e).collect();
    let ubar = u.iter().cloned().sum::<F>() / F::from_usize(n).unwrap();
    // residuals that are pure rounding noise next to the response scale
    // mean a perfect fit: the test is degenerate
    let response_scale = result
        .residuals
        .iter()
        .zip(&result.fitted)
        .map(|(&e, &f)| (e + f) * (e + f))
        .sum::<F>()
        / F::from_usize(n).unwrap();
    let noise_floor = F::from_f64_lossy(1e3) * F::epsilon();
    if !(ubar > response_scale * noise_floor * noise_floor) {
        return Ok((F::zero(), F::one()));
    }
    let y_aux: Vec<F> = u.iter().map(|&v| v / ubar).collect();

    let mut design: Vec<Vec<F>> = vec![vec![F::one(); n]];
    for (_, col) in predictors {
        if col.len() != n {
            return Err(Error::UnreadableInput(
                "predictor length does not match residuals".to_owned(),
            ));
        }
        design.push(col.clone());
    }
    let fit = least_squares(&design, &y_aux);
    let mean = y_aux.iter().cloned().sum::<F>() / F::from_usize(n).unwrap();
    let tss: F = y_aux.iter().map(|&v| (v - mean) * (v - mean)).sum();
    let rss: F = fit.residuals.iter().map(|&e| e * e).sum();
    let r2 = if tss > F::zero() {
        (F::one() - rss / tss).max(F::zero())
    } else {
        F::zero()
    };
    let statistic = F::from_usize(n).unwrap() * r2;
    let p = chi_squared_upper_p(statistic, F::from_usize(predictors.len()).unwrap());
    Ok((statistic, p))
}

/// Outcomes the model tables are fitted for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Betweenness,
    Closeness,
    CompositeOpenness,
}

impl Outcome {
    pub fn column_name(&self) -> &'static str {
        match self {
            Outcome::Betweenness => "betweenness",
            Outcome::Closeness => "closeness",
            Outcome::CompositeOpenness => "composite_openness",
        }
    }
}

impl std::str::FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "betweenness" => Ok(Outcome::Betweenness),
            "closeness" => Ok(Outcome::Closeness),
            "composite_openness" => Ok(Outcome::CompositeOpenness),
            other => Err(Error::MissingColumn(format!(
                "unknown outcome {other:?} (expected betweenness, closeness, or composite_openness)"
            ))),
        }
    }
}

/// Economic, linguistic, and technological covariates.
pub const NONCULTURE_COLUMNS: [&str; 3] = ["log10_gdp_pc", "language_evc", "internet_users"];
/// Survey value dimensions.
pub const CULTURE_COLUMNS: [&str; 4] = ["IDV", "UAI", "PDI", "MAS"];

/// The three model columns fitted per outcome.
#[derive(Debug, Clone)]
pub struct ModelSuite<F> {
    pub outcome: String,
    pub n: usize,
    pub included: Vec<CountryCode>,
    pub full: RegressionResult<F>,
    pub nonculture: RegressionResult<F>,
    pub culture: RegressionResult<F>,
    /// Row order of the coefficient table.
    pub term_order: Vec<String>,
}

/// Fit the full / non-culture / culture models for one outcome.
///
/// Rows are the countries present in both tables with complete covariates
/// (the inclusion filter is data-driven). Extra control columns are
/// appended to all three models. Every variable, outcome included, is
/// rescaled to the unit interval first.
pub fn run_model_suite<F: Real>(
    cov: &CovariateTable<F>,
    scores: &CentralityReport<F>,
    outcome: Outcome,
    extra_controls: &[String],
) -> Result<ModelSuite<F>, Error> {
    let outcome_name = outcome.column_name();
    let outcome_col = scores
        .column(outcome_name)
        .ok_or_else(|| Error::MissingColumn(outcome_name.to_owned()))?;

    let mut predictor_names: Vec<String> =
        NONCULTURE_COLUMNS.iter().map(|s| s.to_string()).collect();
    predictor_names.extend(extra_controls.iter().cloned());
    predictor_names.extend(CULTURE_COLUMNS.iter().map(|s| s.to_string()));
    for name in &predictor_names {
        if cov.column(name).is_none() {
            return Err(Error::MissingColumn(name.clone()));
        }
    }

    // inner join on country, complete cases only
    let mut included: Vec<CountryCode> = Vec::new();
    let mut rows: Vec<(usize, usize)> = Vec::new(); // (cov row, scores row)
    for (ci, country) in cov.countries().iter().enumerate() {
        let Some(si) = scores.countries.iter().position(|c| c == country) else {
            continue;
        };
        let complete = predictor_names
            .iter()
            .all(|name| cov.column(name).unwrap()[ci].is_some());
        if complete {
            included.push(*country);
            rows.push((ci, si));
        }
    }
    let n = rows.len();
    if n <= predictor_names.len() + 1 {
        return Err(Error::TooFewObservations {
            n,
            params: predictor_names.len() + 1,
        });
    }

    let mut columns: Vec<(String, Vec<F>)> = Vec::new();
    for name in &predictor_names {
        let source = cov.column(name).unwrap();
        let dense: Vec<F> = rows.iter().map(|&(ci, _)| source[ci].unwrap()).collect();
        columns.push((name.clone(), rescale_unit_vec(name, &dense)?));
    }
    let y_dense: Vec<F> = rows.iter().map(|&(_, si)| outcome_col[si]).collect();
    let y = rescale_unit_vec(outcome_name, &y_dense)?;

    let select = |names: &[String]| -> Vec<(String, Vec<F>)> {
        names
            .iter()
            .map(|n| columns.iter().find(|(c, _)| c == n).unwrap().clone())
            .collect()
    };
    let nonculture_names: Vec<String> = NONCULTURE_COLUMNS
        .iter()
        .map(|s| s.to_string())
        .chain(extra_controls.iter().cloned())
        .collect();
    let culture_names: Vec<String> = CULTURE_COLUMNS
        .iter()
        .map(|s| s.to_string())
        .chain(extra_controls.iter().cloned())
        .collect();

    let fit_with_diagnostics = |names: &[String]| -> Result<RegressionResult<F>, Error> {
        let predictors = select(names);
        let mut result = ols_fit(&y, &predictors, true)?;
        if predictors.len() >= 2 {
            result.vif = Some(vif(&predictors)?);
        }
        result.bp = Some(bp_score_test(&result, &predictors)?);
        Ok(result)
    };

    let full = fit_with_diagnostics(&predictor_names)?;
    let nonculture = fit_with_diagnostics(&nonculture_names)?;
    let culture = fit_with_diagnostics(&culture_names)?;

    let mut term_order: Vec<String> = NONCULTURE_COLUMNS.iter().map(|s| s.to_string()).collect();
    term_order.extend(extra_controls.iter().cloned());
    term_order.extend(CULTURE_COLUMNS.iter().map(|s| s.to_string()));

    Ok(ModelSuite {
        outcome: outcome_name.to_owned(),
        n,
        included,
        full,
        nonculture,
        culture,
        term_order,
    })
}

impl<F: Real> ModelSuite<F> {
    fn cell(result: &RegressionResult<F>, name: &str) -> String {
        let term = if name == "Intercept" {
            result.intercept.as_ref()
        } else {
            result.term(name)
        };
        match term {
            Some(t) => format!(
                "{:.3}{} ({:.3})",
                t.coef.to_f64_lossy(),
                t.stars(),
                t.se.to_f64_lossy()
            ),
            None => String::new(),
        }
    }

    /// Three-column coefficient table with stars and fit indices.
    pub fn format_table(&self) -> String {
        let models: [(&str, &RegressionResult<F>); 3] = [
            ("Full model", &self.full),
            ("Non-culture model", &self.nonculture),
            ("Culture model", &self.culture),
        ];
        let mut rows: Vec<(String, [String; 3])> = Vec::new();
        let mut push_row = |name: &str| {
            let cells = [
                Self::cell(models[0].1, name),
                Self::cell(models[1].1, name),
                Self::cell(models[2].1, name),
            ];
            rows.push((name.to_owned(), cells));
        };
        push_row("Intercept");
        for name in &self.term_order.clone() {
            push_row(name);
        }
        let fmt3 = |f: &dyn Fn(&RegressionResult<F>) -> String| {
            [f(models[0].1), f(models[1].1), f(models[2].1)]
        };
        rows.push(("Sample size".to_owned(), fmt3(&|r| format!("{}", r.n))));
        rows.push((
            "R^2".to_owned(),
            fmt3(&|r| format!("{:.3}", r.r_squared.to_f64_lossy())),
        ));
        rows.push((
            "Adjusted R^2".to_owned(),
            fmt3(&|r| format!("{:.3}", r.adj_r_squared.to_f64_lossy())),
        ));

        let width = rows
            .iter()
            .map(|(name, _)| name.len())
            .max()
            .unwrap_or(12)
            .max(12)
            + 2;
        let cell_width = rows
            .iter()
            .flat_map(|(_, cells)| cells.iter().map(String::len))
            .max()
            .unwrap_or(18)
            .max(18)
            + 2;

        let mut out = String::new();
        out.push_str(&format!(
            "OLS regression of {} (n = {})\n\n",
            self.outcome, self.n
        ));
        out.push_str(&format!("{:width$}", "", width = width));
        for (title, _) in &models {
            out.push_str(&format!("{title:cell_width$}"));
        }
        out.push('\n');
        for (name, cells) in &rows {
            out.push_str(&format!("{name:width$}"));
            for cell in cells {
                out.push_str(&format!("{cell:cell_width$}"));
            }
            out.push('\n');
        }
        out.push_str("\nNote: * p<.05, ** p<.01, *** p<.001. Unstandardized coefficients with standard errors in parentheses; all variables rescaled to the unit interval.\n");
        out
    }

    /// Long-format TSV: one row per (model, term) plus fit indices.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "outcome\tmodel\tterm\tcoef\tse\tt\tp\tstars\tr_squared\tadj_r_squared\tn\n",
        );
        for (model, result) in [
            ("full", &self.full),
            ("nonculture", &self.nonculture),
            ("culture", &self.culture),
        ] {
            let mut write_term = |t: &Term<F>| {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    self.outcome,
                    model,
                    t.name,
                    t.coef,
                    t.se,
                    t.t,
                    t.p,
                    t.stars(),
                    result.r_squared,
                    result.adj_r_squared,
                    result.n
                ));
            };
            if let Some(t) = &result.intercept {
                write_term(t);
            }
            for t in &result.terms {
                write_term(t);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let model = |name: &str, r: &RegressionResult<F>| {
            let term = |t: &Term<F>| {
                serde_json::json!({
                    "term": t.name,
                    "coef": t.coef.to_f64_lossy(),
                    "se": t.se.to_f64_lossy(),
                    "t": t.t.to_f64_lossy(),
                    "p": t.p.to_f64_lossy(),
                    "stars": t.stars(),
                })
            };
            serde_json::json!({
                "model": name,
                "intercept": r.intercept.as_ref().map(term),
                "terms": r.terms.iter().map(term).collect::<Vec<_>>(),
                "r_squared": r.r_squared.to_f64_lossy(),
                "adj_r_squared": r.adj_r_squared.to_f64_lossy(),
                "n": r.n,
                "vif": r.vif.as_ref().map(|v| {
                    v.iter()
                        .map(|(n, x)| serde_json::json!({"term": n, "vif": x.to_f64_lossy()}))
                        .collect::<Vec<_>>()
                }),
                "bp": r.bp.map(|(s, p)| serde_json::json!({
                    "statistic": s.to_f64_lossy(), "p": p.to_f64_lossy()
                })),
            })
        };
        let doc = serde_json::json!({
            "outcome": self.outcome,
            "n": self.n,
            "models": [
                model("full", &self.full),
                model("nonculture", &self.nonculture),
                model("culture", &self.culture),
            ],
        });
        serde_json::to_string_pretty(&doc).expect("models serialize")
    }
}
