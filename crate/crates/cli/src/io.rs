//! File ingestion, the machine-readable error envelope, and output plumbing.

use std::path::{Path, PathBuf};

use graphboot::graph::network::parse_edge_list;
use graphboot::{DistanceMatrix, Network, SampleMatrix, WeightMode};

/// A failure with a stable machine-readable code, rendered on standard
/// error as `{"error": {"code": ..., "message": ...}}`.
#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        CliError {
            code: code.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::new("io", format!("{}: {err}", path.display()))
    }
}

impl From<graphboot::Error> for CliError {
    fn from(e: graphboot::Error) -> Self {
        CliError {
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

/// What a successful subcommand prints on standard output.
pub enum Output {
    /// Pretty-printed JSON document.
    Json(serde_json::Value),
    /// Raw text (the distance-matrix format).
    Text(String),
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Build the distance matrix from either an edge-list file or a
/// previously emitted distance-matrix text file.
pub fn load_distances(
    edges: Option<&PathBuf>,
    distances: Option<&PathBuf>,
    n: Option<usize>,
    mode: WeightMode,
) -> Result<DistanceMatrix, CliError> {
    match (edges, distances) {
        (Some(path), None) => {
            let net = load_network(path, n, mode)?;
            Ok(DistanceMatrix::from_network(&net))
        }
        (None, Some(path)) => Ok(DistanceMatrix::from_text(&read_file(path)?)?),
        (None, None) => Err(CliError::new(
            "missing_input",
            "pass --edges FILE or --distances FILE",
        )),
        (Some(_), Some(_)) => unreachable!("clap marks --edges and --distances exclusive"),
    }
}

/// Parse an edge-list file into a network. The node count defaults to the
/// largest index mentioned; pass `n` to include trailing isolated nodes.
pub fn load_network(
    path: &Path,
    n: Option<usize>,
    mode: WeightMode,
) -> Result<Network, CliError> {
    let edges = parse_edge_list(&read_file(path)?)?;
    // Labels are 1-based, so the largest label seen is itself a node count.
    let n = match (n, edges.iter().map(|e| e.0.max(e.1)).max()) {
        (Some(n), _) => n,
        (None, Some(max_seen)) => max_seen,
        (None, None) => {
            return Err(CliError::new(
                "missing_input",
                "edge list names no nodes; pass --n to size an edgeless network",
            ))
        }
    };
    Ok(Network::from_edge_list(n, edges, mode)?)
}

/// Read a CSV data matrix: one row per node, one column per coordinate,
/// every field a decimal number. `header` skips the first line.
pub fn load_data(path: &Path, header: bool) -> Result<SampleMatrix, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => CliError::new("io", format!("{}: {e}", path.display())),
            _ => CliError::new("data_error", format!("{}: {e}", path.display())),
        })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| CliError::new("data_error", format!("{}: {e}", path.display())))?;
        let row: Result<Vec<f64>, CliError> = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    CliError::new(
                        "data_error",
                        format!(
                            "{}: row {}: `{field}` is not a number",
                            path.display(),
                            idx + 1
                        ),
                    )
                })
            })
            .collect();
        rows.push(row?);
    }
    Ok(SampleMatrix::from_rows(&rows)?)
}

/// Read one numeric column (0-based index) from a headerless CSV.
pub fn load_column(path: &Path, column: usize, header: bool) -> Result<Vec<f64>, CliError> {
    let y = load_data(path, header)?;
    if column >= y.v() {
        return Err(CliError::new(
            "data_error",
            format!(
                "{}: column {column} requested but the file has {} columns",
                path.display(),
                y.v()
            ),
        ));
    }
    Ok((0..y.n()).map(|i| y.get(i, column)).collect())
}

/// Write replicate values as headerless CSV: one row per replicate,
/// `t1[,t2]` columns.
pub fn write_replicates(
    path: &Path,
    t1: &[f64],
    t2: Option<&[f64]>,
) -> Result<(), CliError> {
    let mut out = String::new();
    for (i, &a) in t1.iter().enumerate() {
        match t2 {
            Some(b) => out.push_str(&format!("{a},{}\n", b[i])),
            None => out.push_str(&format!("{a}\n")),
        }
    }
    write_file(path, &out)
}
