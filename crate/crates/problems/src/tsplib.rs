//! Minimal TSPLIB reader: `EUC_2D` coordinates and `EXPLICIT` weights in
//! `FULL_MATRIX` or `UPPER_ROW` layout.

use crate::{ProblemError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightType {
    Euc2d,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightFormat {
    FullMatrix,
    UpperRow,
}

fn unsupported(field: &str) -> ProblemError {
    ProblemError::UnsupportedFormat {
        field: field.to_string(),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> ProblemError {
    ProblemError::Parse {
        line,
        message: message.into(),
    }
}

/// TSPLIB rounding of Euclidean distances: `nint(sqrt(dx^2 + dy^2))`.
pub fn euc_2d(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).hypot(a.1 - b.1) + 0.5).floor()
}

pub fn load_tsplib(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<WeightType> = None;
    let mut format: Option<WeightFormat> = None;
    let mut coords: Vec<(f64, f64)> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut section: Option<&str> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if line.ends_with("_SECTION") {
            match line {
                "NODE_COORD_SECTION" | "EDGE_WEIGHT_SECTION" => section = Some(line),
                other => return Err(unsupported(other)),
            }
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            if !key.trim().chars().all(|c| c.is_ascii_uppercase() || c == '_') {
                return Err(parse_err(lineno, format!("malformed header `{line}`")));
            }
            section = None;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "NAME" | "COMMENT" => {}
                "TYPE" => {
                    if value != "TSP" {
                        return Err(unsupported("TYPE"));
                    }
                }
                "DIMENSION" => {
                    dimension = Some(value.parse().map_err(|_| parse_err(lineno, "bad DIMENSION"))?);
                }
                "EDGE_WEIGHT_TYPE" => {
                    weight_type = Some(match value {
                        "EUC_2D" => WeightType::Euc2d,
                        "EXPLICIT" => WeightType::Explicit,
                        _ => return Err(unsupported("EDGE_WEIGHT_TYPE")),
                    })
                }
                "EDGE_WEIGHT_FORMAT" => {
                    format = Some(match value {
                        "FULL_MATRIX" => WeightFormat::FullMatrix,
                        "UPPER_ROW" => WeightFormat::UpperRow,
                        _ => return Err(unsupported("EDGE_WEIGHT_FORMAT")),
                    })
                }
                "DISPLAY_DATA_TYPE" => {
                    if value != "NO_DISPLAY" && value != "COORD_DISPLAY" {
                        return Err(unsupported("DISPLAY_DATA_TYPE"));
                    }
                }
                other => return Err(unsupported(other)),
            }
            continue;
        }
        let numbers: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| parse_err(lineno, format!("bad number `{t}`"))))
            .collect::<Result<_>>()?;
        match section {
            Some("NODE_COORD_SECTION") => {
                if numbers.len() != 3 {
                    return Err(parse_err(lineno, "coordinate line needs `id x y`"));
                }
                coords.push((numbers[1], numbers[2]));
            }
            Some("EDGE_WEIGHT_SECTION") => weights.extend(numbers),
            _ => return Err(parse_err(lineno, "data outside a section")),
        }
    }

    let n = dimension.ok_or_else(|| parse_err(0, "missing DIMENSION"))?;
    let mut d = vec![vec![0.0; n]; n];
    match weight_type.ok_or_else(|| parse_err(0, "missing EDGE_WEIGHT_TYPE"))? {
        WeightType::Euc2d => {
            if coords.len() != n {
                return Err(parse_err(0, format!("expected {n} coordinates, found {}", coords.len())));
            }
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        d[u][v] = euc_2d(coords[u], coords[v]);
                    }
                }
            }
        }
        WeightType::Explicit => match format.ok_or_else(|| parse_err(0, "missing EDGE_WEIGHT_FORMAT"))? {
            WeightFormat::FullMatrix => {
                if weights.len() != n * n {
                    return Err(parse_err(0, format!("expected {} weights, found {}", n * n, weights.len())));
                }
                for u in 0..n {
                    for v in 0..n {
                        d[u][v] = weights[u * n + v];
                    }
                }
            }
            WeightFormat::UpperRow => {
                let want = n * n.saturating_sub(1) / 2;
                if weights.len() != want {
                    return Err(parse_err(0, format!("expected {want} weights, found {}", weights.len())));
                }
                let mut it = weights.into_iter();
                for u in 0..n {
                    for v in u + 1..n {
                        let w = it.next().expect("count checked");
                        d[u][v] = w;
                        d[v][u] = w;
                    }
                }
            }
        },
    }
    Ok(d)
}
