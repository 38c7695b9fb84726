//! Rendering of solve results. The table and the JSON view are produced from
//! the same struct; the table rounds weights and the multiplier to three
//! decimals (the usual display convention for priority vectors) while the
//! JSON view carries weights at twelve decimals.

use igm_core::round_to_places;

/// One solve result, ready to render.
#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub method: String,
    pub weights: Vec<f64>,
    pub lambda: Option<f64>,
    pub objective: f64,
    pub lambda_max: f64,
    pub ci: f64,
    pub cr: Option<f64>,
    pub warnings: Vec<String>,
}

impl SolveOutput {
    /// Human-readable table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let weights = self
            .weights
            .iter()
            .map(|w| format!("{w:.3}"))
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("method         {}\n", self.method));
        out.push_str(&format!("weights        {weights}\n"));
        if let Some(lambda) = self.lambda {
            out.push_str(&format!("lambda         {lambda:.3}\n"));
        }
        out.push_str(&format!("wls objective  {:.6e}\n", self.objective));
        out.push_str(&format!("lambda_max     {:.3}\n", self.lambda_max));
        out.push_str(&format!("ci             {:.2}\n", self.ci));
        match self.cr {
            Some(cr) => out.push_str(&format!("cr             {cr:.2}\n")),
            None => out.push_str("cr             n/a (order outside the random-index table)\n"),
        }
        for w in &self.warnings {
            out.push_str(&format!("warning        {w}\n"));
        }
        out
    }

    /// Machine-readable view of the same values.
    pub fn json(&self) -> serde_json::Value {
        let weights: Vec<f64> = self
            .weights
            .iter()
            .map(|&w| round_to_places(w, 12))
            .collect();
        serde_json::json!({
            "method": self.method,
            "weights": weights,
            "lambda": self.lambda,
            "objective": self.objective,
            "consistency": {
                "lambda_max": self.lambda_max,
                "ci": self.ci,
                "cr": self.cr,
            },
            "warnings": self.warnings,
        })
    }
}
