//! Force-directed layout and its principal axis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Layout coordinates of a graph and their projection on the principal axis.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutCoords {
    pub xy: Vec<[f64; 2]>,
    pub axis: Vec<f64>,
}

impl LayoutCoords {
    pub fn compute(graph: &[Vec<usize>], iterations: usize, seed: u64) -> Self {
        let xy = spring_layout(graph, iterations, seed);
        let axis = pca_primary_axis(&xy);
        Self { xy, axis }
    }

    /// Node indices sorted by principal coordinate, index order on ties.
    pub fn order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.axis.len()).collect();
        order.sort_by(|&a, &b| self.axis[a].total_cmp(&self.axis[b]).then(a.cmp(&b)));
        order
    }
}

/// Fruchterman-Reingold layout in the unit square.
///
/// With `k = sqrt(1 / n)`, every pair repels with force `k^2 / d` and every
/// edge attracts with `d^2 / k`. Each step moves a node along its net force by
/// at most the temperature, which starts at 0.1 and cools linearly to zero.
pub fn spring_layout(graph: &[Vec<usize>], iterations: usize, seed: u64) -> Vec<[f64; 2]> {
    let n = graph.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen(), rng.gen()]).collect();
    if n < 2 {
        return pos;
    }
    let k = (1.0 / n as f64).sqrt();
    let k2 = k * k;
    let t0 = 0.1;
    let dt = t0 / (iterations as f64 + 1.0);
    let mut t = t0;
    let mut disp = vec![[0.0f64; 2]; n];
    for _ in 0..iterations {
        disp.iter_mut().for_each(|d| *d = [0.0, 0.0]);
        for i in 0..n {
            let [xi, yi] = pos[i];
            let (mut fx, mut fy) = (0.0, 0.0);
            for j in i + 1..n {
                let dx = xi - pos[j][0];
                let dy = yi - pos[j][1];
                let d2 = (dx * dx + dy * dy).max(1e-4);
                // (k^2 / d) along the unit vector (dx, dy) / d
                let s = k2 / d2;
                fx += dx * s;
                fy += dy * s;
                disp[j][0] -= dx * s;
                disp[j][1] -= dy * s;
            }
            disp[i][0] += fx;
            disp[i][1] += fy;
        }
        for (i, ns) in graph.iter().enumerate() {
            for &j in ns.iter().filter(|&&j| j > i) {
                let dx = pos[i][0] - pos[j][0];
                let dy = pos[i][1] - pos[j][1];
                let d = (dx * dx + dy * dy).sqrt().max(1e-2);
                // (d^2 / k) along the unit vector
                let s = d / k;
                disp[i][0] -= dx * s;
                disp[i][1] -= dy * s;
                disp[j][0] += dx * s;
                disp[j][1] += dy * s;
            }
        }
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if len > 0.0 {
                let step = len.min(t) / len;
                p[0] += d[0] * step;
                p[1] += d[1] * step;
            }
        }
        t -= dt;
    }
    pos
}

/// Mean-centred projection onto the top eigenvector of the 2x2 covariance,
/// signed so the first node is nonnegative. Degenerate clouds (zero
/// covariance, or fewer than two points) fall back to centred index order.
pub fn pca_primary_axis(coords: &[[f64; 2]]) -> Vec<f64> {
    let n = coords.len();
    let index_order = || (0..n).map(|i| i as f64 - (n as f64 - 1.0) / 2.0).collect();
    if n < 2 {
        return index_order();
    }
    let nf = n as f64;
    let mx = coords.iter().map(|p| p[0]).sum::<f64>() / nf;
    let my = coords.iter().map(|p| p[1]).sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for p in coords {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    sxx /= nf;
    syy /= nf;
    sxy /= nf;
    if sxx == 0.0 && syy == 0.0 {
        return index_order();
    }
    let half = (sxx - syy) / 2.0;
    let lambda = (sxx + syy) / 2.0 + (half * half + sxy * sxy).sqrt();
    let (vx, vy) = if sxy != 0.0 {
        (lambda - syy, sxy)
    } else if sxx >= syy {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    let norm = (vx * vx + vy * vy).sqrt();
    let (vx, vy) = (vx / norm, vy / norm);
    let mut proj: Vec<f64> = coords.iter().map(|p| (p[0] - mx) * vx + (p[1] - my) * vy).collect();
    if proj[0] < 0.0 {
        proj.iter_mut().for_each(|v| *v = -*v);
    }
    proj
}

/// Spearman rank correlation; tied values share their average rank.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        let mut r = vec![0.0; v.len()];
        let mut s = 0;
        while s < idx.len() {
            let mut e = s;
            while e + 1 < idx.len() && v[idx[e + 1]] == v[idx[s]] {
                e += 1;
            }
            let avg = (s + e) as f64 / 2.0;
            for &i in &idx[s..=e] {
                r[i] = avg;
            }
            s = e + 1;
        }
        r
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_axis_points_project_to_centred_x() {
        let pts = [[3.0, 0.0], [1.0, 0.0], [2.0, 0.0], [6.0, 0.0]];
        assert_eq!(pca_primary_axis(&pts), vec![0.0, -2.0, -1.0, 3.0]);
    }

    #[test]
    fn identical_points_fall_back_to_index_order() {
        assert_eq!(pca_primary_axis(&[[1.0, 1.0]; 3]), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn spearman_of_monotone_and_reversed() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert!((spearman(&a, &[10.0, 20.0, 30.0, 40.0]) - 1.0).abs() < 1e-12);
        assert!((spearman(&a, &[4.0, 3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
    }
}
