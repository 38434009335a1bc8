//! The JSON analysis document: everything one tree's pipeline produces,
//! with exact rationals carried as `p/q` strings so they never pass
//! through floating point.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use treelap::spectral::Tolerances;
use treelap::verify::{verify_all, Analysis};

#[derive(Debug, Serialize, Deserialize)]
pub struct TreeSection {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectrumSection {
    pub eigenvalues: Vec<f64>,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PolynomialSection {
    /// Exact coefficients `c_k` of the matching expansion, as `p/q`
    /// strings indexed by matching size.
    pub coefficients: Vec<String>,
    pub max_matching_size: usize,
    pub multiplicity_of_one: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub tool: String,
    pub version: String,
    pub config: Value,
    pub tree: TreeSection,
    pub cover: Value,
    pub spectrum: SpectrumSection,
    pub matching_polynomial: PolynomialSection,
    pub separation: Value,
    pub verification: Value,
}

/// Assembles the full document from an analysis; `with_vectors` includes
/// the eigenvectors (`eigenvectors[i]` belongs to `eigenvalues[i]`).
pub fn build_document(
    analysis: &Analysis,
    tol: &Tolerances,
    with_vectors: bool,
) -> AnalysisDocument {
    let report = verify_all(analysis, tol);
    let n = analysis.tree.n();
    let eigenvectors = with_vectors.then(|| {
        (0..n)
            .map(|i| analysis.spectrum.vector(i).to_vec())
            .collect()
    });
    let mut config = serde_json::to_value(tol).expect("tolerances serialize");
    config["with_vectors"] = Value::Bool(with_vectors);
    AnalysisDocument {
        tool: "treelap".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config,
        tree: TreeSection {
            n,
            edges: analysis.tree.edges(),
        },
        cover: serde_json::to_value(&analysis.cover).expect("cover report serializes"),
        spectrum: SpectrumSection {
            eigenvalues: analysis.spectrum.eigenvalues.clone(),
            max_residual: analysis.spectrum.max_residual(),
            eigenvectors,
        },
        matching_polynomial: PolynomialSection {
            coefficients: analysis
                .polynomial
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            max_matching_size: analysis.polynomial.max_matching_size(),
            multiplicity_of_one: analysis.polynomial.multiplicity_of_one(),
        },
        separation: serde_json::to_value(&analysis.separation).expect("separation serializes"),
        verification: serde_json::to_value(&report).expect("verification serializes"),
    }
}
