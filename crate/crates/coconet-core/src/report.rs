//! Per-country score table assembled from the centrality and openness
//! passes; the regression layer consumes it as the outcome source.

use crate::centrality::CentralityScores;
use crate::country::CountryCode;
use crate::error::Error;
use crate::openness::OpennessScore;
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct CentralityReport<F> {
    pub countries: Vec<CountryCode>,
    pub closeness: Vec<F>,
    pub betweenness: Vec<F>,
    pub eigenvector: Option<Vec<F>>,
    pub composite_openness: Option<Vec<F>>,
}

impl<F: Real> CentralityReport<F> {
    pub fn from_scores(scores: &CentralityScores<F>) -> Self {
        CentralityReport {
            countries: scores.nodes.clone(),
            closeness: scores.closeness.clone(),
            betweenness: scores.betweenness.clone(),
            eigenvector: None,
            composite_openness: None,
        }
    }

    /// Attach composite openness scores, matched by country code.
    pub fn with_openness(mut self, scores: &[OpennessScore<F>]) -> Result<Self, Error> {
        let column = self
            .countries
            .iter()
            .map(|c| {
                scores
                    .iter()
                    .find(|s| s.country == *c)
                    .map(|s| s.score)
                    .ok_or_else(|| Error::MissingColumn(format!("composite_openness for {c}")))
            })
            .collect::<Result<Vec<F>, Error>>()?;
        self.composite_openness = Some(column);
        Ok(self)
    }

    pub fn with_eigenvector(mut self, values: Vec<F>) -> Self {
        self.eigenvector = Some(values);
        self
    }

    /// Score column by name: closeness, betweenness, composite_openness,
    /// or eigenvector.
    pub fn column(&self, name: &str) -> Option<&[F]> {
        match name {
            "closeness" => Some(&self.closeness),
            "betweenness" => Some(&self.betweenness),
            "composite_openness" => self.composite_openness.as_deref(),
            "eigenvector" => self.eigenvector.as_deref(),
            _ => None,
        }
    }

    /// Rebuild a report from the TSV files the pipeline writes.
    pub fn from_tsv(centrality_tsv: &str, openness_tsv: Option<&str>) -> Result<Self, Error> {
        let mut countries = Vec::new();
        let mut closeness = Vec::new();
        let mut betweenness = Vec::new();
        let mut lines = centrality_tsv.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::UnreadableInput("empty centrality table".into()))?;
        let cols: Vec<&str> = header.split('\t').collect();
        let pos = |name: &str| {
            cols.iter()
                .position(|&c| c == name)
                .ok_or_else(|| Error::MissingColumn(name.to_owned()))
        };
        let (c_country, c_clo, c_bet) = (pos("country")?, pos("closeness")?, pos("betweenness")?);
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let parse = |i: usize| -> Result<F, Error> {
                fields
                    .get(i)
                    .and_then(|s| s.parse::<f64>().ok())
                    .map(F::from_f64_lossy)
                    .ok_or_else(|| Error::UnreadableInput(format!("bad centrality row: {line}")))
            };
            let country = fields
                .get(c_country)
                .copied()
                .ok_or_else(|| Error::UnreadableInput(format!("bad centrality row: {line}")))?;
            let country = CountryCode::new(country)?;
            if countries.contains(&country) {
                // e.g. an alpha-grid sweep table was passed instead of the
                // single-alpha score table
                return Err(Error::DuplicateCountry(country.to_string()));
            }
            countries.push(country);
            closeness.push(parse(c_clo)?);
            betweenness.push(parse(c_bet)?);
        }
        let mut report = CentralityReport {
            countries,
            closeness,
            betweenness,
            eigenvector: None,
            composite_openness: None,
        };
        if let Some(tsv) = openness_tsv {
            let mut scores = Vec::new();
            let mut lines = tsv.lines();
            let header = lines
                .next()
                .ok_or_else(|| Error::UnreadableInput("empty openness table".into()))?;
            let cols: Vec<&str> = header.split('\t').collect();
            let c_country = cols
                .iter()
                .position(|&c| c == "country")
                .ok_or_else(|| Error::MissingColumn("country".into()))?;
            let c_score = cols
                .iter()
                .position(|&c| c == "openness_score")
                .ok_or_else(|| Error::MissingColumn("openness_score".into()))?;
            let c_breadth = cols
                .iter()
                .position(|&c| c == "breadth")
                .ok_or_else(|| Error::MissingColumn("breadth".into()))?;
            for line in lines {
                if line.is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split('\t').collect();
                let bad = || Error::UnreadableInput(format!("bad openness row: {line}"));
                let field = |i: usize| fields.get(i).copied().ok_or_else(bad);
                scores.push(OpennessScore {
                    country: CountryCode::new(field(c_country)?)?,
                    breadth: field(c_breadth)?.parse().map_err(|_| bad())?,
                    score: field(c_score)?
                        .parse::<f64>()
                        .map(F::from_f64_lossy)
                        .map_err(|_| bad())?,
                    neighbor_weights: Default::default(),
                });
            }
            report = report.with_openness(&scores)?;
        }
        Ok(report)
    }
}
