//! Degree histograms and spectrum extremes for the operators built from an
//! expression table.

use std::collections::BTreeMap;
use std::fmt;

use anyhow::{Context, Result};
use hyperlap::{
    cluster_count, coexpression_similarity, compute_degrees, graph_laplacian, incidence_from_clusters, kmeans,
    symmetric_laplacian, threshold_adjacency, unnormalized_laplacian, zscore_rows, ExpressionMatrix, Matrix,
};
use nalgebra::DMatrix;

/// Eigenvalues below this count as zero.
const ZERO_EIGENVALUE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub operator: &'static str,
    pub min: f64,
    pub max: f64,
    pub zero_eigenvalues: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inspection {
    pub n_genes: usize,
    pub n_experiments: usize,
    pub requested_clusters: usize,
    pub hyperedges: usize,
    pub singleton_merges: usize,
    pub edge_sizes: BTreeMap<usize, usize>,
    pub graph_edges: usize,
    pub graph_degrees: BTreeMap<usize, usize>,
    /// Empty when the input exceeds the spectrum size limit.
    pub spectra: Vec<Spectrum>,
}

fn histogram(values: impl IntoIterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for v in values {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

fn spectrum(operator: &'static str, m: &Matrix) -> Spectrum {
    let n = m.rows();
    let eig = DMatrix::from_row_slice(n, n, m.as_slice()).symmetric_eigenvalues();
    Spectrum {
        operator,
        min: eig.min(),
        max: eig.max(),
        zero_eigenvalues: eig.iter().filter(|v| v.abs() < ZERO_EIGENVALUE).count(),
    }
}

pub fn inspect(x: &ExpressionMatrix, cluster_seed: u64, threshold: f64, spectrum_limit: usize) -> Result<Inspection> {
    let z = zscore_rows(x);
    let k = cluster_count(z.n_genes()).context("choosing the number of clusters")?;
    let a = kmeans(&z, k, cluster_seed).context("clustering genes into hyperedges")?;
    let h = incidence_from_clusters(&a).context("building the incidence matrix")?;
    let adj = threshold_adjacency(&coexpression_similarity(x), threshold).context("invalid --threshold")?;

    let mut spectra = Vec::new();
    if x.n_genes() <= spectrum_limit {
        let d = compute_degrees(&h);
        spectra.push(spectrum("L", unnormalized_laplacian(&h, &d)?.values()));
        // L_rw is similar to L_sym and shares its eigenvalues
        spectra.push(spectrum("L_sym = spec(L_rw)", symmetric_laplacian(&h, &d)?.values()));
        spectra.push(spectrum("graph L", graph_laplacian(&adj).values()));
    }
    Ok(Inspection {
        n_genes: x.n_genes(),
        n_experiments: x.n_experiments(),
        requested_clusters: a.requested_k,
        hyperedges: h.n_edges(),
        singleton_merges: a.singleton_merges,
        edge_sizes: histogram(h.edges().map(<[usize]>::len)),
        graph_edges: adj.edges().count(),
        graph_degrees: histogram(adj.degrees().into_iter().map(|d| d as usize)),
        spectra,
    })
}

fn write_histogram(f: &mut fmt::Formatter<'_>, title: &str, h: &BTreeMap<usize, usize>) -> fmt::Result {
    writeln!(f, "{title}")?;
    for (value, count) in h {
        writeln!(f, "  {value:>6}  {count}")?;
    }
    Ok(())
}

impl fmt::Display for Inspection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "genes: {}  experiments: {}", self.n_genes, self.n_experiments)?;
        writeln!(
            f,
            "hyperedges: {} (requested {}, singleton merges {})",
            self.hyperedges, self.requested_clusters, self.singleton_merges
        )?;
        writeln!(f, "graph edges: {}", self.graph_edges)?;
        writeln!(f, "vertex degree in the hypergraph: 1 for every gene")?;
        write_histogram(f, "hyperedge sizes (size, count):", &self.edge_sizes)?;
        write_histogram(f, "graph degrees (degree, count):", &self.graph_degrees)?;
        if self.spectra.is_empty() {
            writeln!(f, "spectra: skipped, raise --spectrum-limit to compute")?;
        }
        for s in &self.spectra {
            writeln!(
                f,
                "{:<20} min {:>12.6e}  max {:>12.6e}  zero eigenvalues {}",
                s.operator, s.min, s.max, s.zero_eigenvalues
            )?;
        }
        Ok(())
    }
}
