//! Offer selection on iso-utility sets.
//!
//! With linear valuations the map from attribute space to a profile's
//! valuation space is a per-coordinate reflection, so Euclidean distances are
//! preserved and the iso-utility set `{x : U(x) = s}` becomes the slice
//! `{v ∈ [0,1]^n : w·v = s}` of the unit box. All searches run there.

use crate::domain::{Offer, UtilityProfile};
use crate::error::{Error, Result};

/// Offer similarity in `[0,1]`: `1 - d(x, y) / sqrt(n)`.
pub fn similarity(x: &Offer, y: &Offer) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(similarity_values(x.values(), y.values()))
}

#[inline]
pub fn similarity_values(x: &[f64], y: &[f64]) -> f64 {
    1.0 - distance(x, y) / (x.len() as f64).sqrt()
}

#[inline]
fn distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// One search on the iso-utility set of `profile` at utility `target`.
#[derive(Clone, Copy, Debug)]
pub struct IsoQuery<'a> {
    pub profile: &'a UtilityProfile,
    pub target: f64,
    pub primary: &'a Offer,
    pub secondary: Option<&'a Offer>,
}

impl IsoQuery<'_> {
    pub fn solve(&self) -> Offer {
        match self.secondary {
            None => iso_offer(self.profile, self.target, self.primary),
            Some(secondary) => iso_offer_dual(self.profile, self.target, self.primary, secondary),
        }
    }
}

/// Offer with utility `target` closest to `reference`.
pub fn iso_offer(profile: &UtilityProfile, target: f64, reference: &Offer) -> Offer {
    let target = target.clamp(0.0, 1.0);
    let r = profile.to_valuations(reference.values());
    let v = project(profile.weights(), &r, target);
    profile.offer_from_valuations(&v)
}

/// Offer with utility `target` maximizing
/// `similarity(x, primary) * similarity(x, secondary)`.
///
/// The logarithm of each similarity factor is concave (log of a positive
/// concave function), so the product is log-concave on the convex iso-set:
/// seeding from projections of points on the segment between the two
/// references and refining by projected gradient ascent finds the maximum.
pub fn iso_offer_dual(
    profile: &UtilityProfile,
    target: f64,
    primary: &Offer,
    secondary: &Offer,
) -> Offer {
    if primary == secondary {
        return iso_offer(profile, target, primary);
    }
    let target = target.clamp(0.0, 1.0);
    let w = profile.weights();
    let a = profile.to_valuations(primary.values());
    let b = profile.to_valuations(secondary.values());
    let v = maximize_product(w, &a, &b, target);
    profile.offer_from_valuations(&v)
}

const SEGMENT_SEEDS: usize = 16;
const MAX_ASCENT_STEPS: usize = 200;

fn maximize_product(w: &[f64], a: &[f64], b: &[f64], target: f64) -> Vec<f64> {
    let n = w.len();
    let scale = (n as f64).sqrt();
    let objective = |v: &[f64]| {
        let fa = 1.0 - distance(v, a) / scale;
        let fb = 1.0 - distance(v, b) / scale;
        if fa <= 0.0 || fb <= 0.0 {
            f64::NEG_INFINITY
        } else {
            fa.ln() + fb.ln()
        }
    };

    let mut best = project(w, a, target);
    let mut best_val = objective(&best);
    let mut point = vec![0.0; n];
    for k in 1..=SEGMENT_SEEDS {
        let tau = k as f64 / SEGMENT_SEEDS as f64;
        for j in 0..n {
            point[j] = a[j] + tau * (b[j] - a[j]);
        }
        let candidate = project(w, &point, target);
        let val = objective(&candidate);
        if val > best_val {
            best = candidate;
            best_val = val;
        }
    }
    if n == 1 {
        return best;
    }

    let gradient = |v: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; n];
        for reference in [a, b] {
            let d = distance(v, reference);
            let f = 1.0 - d / scale;
            if d < 1e-12 || f <= 0.0 {
                continue;
            }
            let coef = -1.0 / (scale * f * d);
            for j in 0..n {
                g[j] += coef * (v[j] - reference[j]);
            }
        }
        g
    };

    let mut step = 0.5;
    for _ in 0..MAX_ASCENT_STEPS {
        let g = gradient(&best);
        let mut improved = false;
        while step > 1e-12 {
            for j in 0..n {
                point[j] = best[j] + step * g[j];
            }
            let candidate = project(w, &point, target);
            let val = objective(&candidate);
            let predicted: f64 = g
                .iter()
                .zip(candidate.iter().zip(&best))
                .map(|(gj, (c, v))| gj * (c - v))
                .sum();
            if val > best_val && val >= best_val + 1e-4 * predicted {
                let moved = distance(&candidate, &best);
                best = candidate;
                best_val = val;
                improved = moved > 1e-12;
                step = (step * 2.0).min(4.0);
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    best
}

/// Euclidean projection of `r` onto `{v ∈ [0,1]^n : w·v = target}`.
///
/// The minimizer has the form `v(λ) = clamp(r + λw, 0, 1)`; `w·v(λ)` is
/// piecewise linear and nondecreasing in `λ`, so the multiplier is found
/// exactly by walking its sorted breakpoints.
pub fn project(w: &[f64], r: &[f64], target: f64) -> Vec<f64> {
    debug_assert_eq!(w.len(), r.len());
    let mut breakpoints: Vec<f64> = Vec::with_capacity(2 * w.len());
    for (&wj, &rj) in w.iter().zip(r) {
        if wj > 0.0 {
            breakpoints.push(-rj / wj);
            breakpoints.push((1.0 - rj) / wj);
        }
    }
    let at = |lambda: f64| -> f64 {
        w.iter()
            .zip(r)
            .map(|(&wj, &rj)| wj * (rj + lambda * wj).clamp(0.0, 1.0))
            .sum()
    };
    if breakpoints.is_empty() {
        return r.iter().map(|x| x.clamp(0.0, 1.0)).collect();
    }
    breakpoints.sort_by(|x, y| x.total_cmp(y));

    let mut lambda = *breakpoints.last().unwrap();
    let mut lo = breakpoints[0];
    let mut g_lo = at(lo);
    if target <= g_lo {
        lambda = lo;
    } else {
        for &hi in &breakpoints[1..] {
            let g_hi = at(hi);
            if g_hi >= target {
                lambda = if g_hi > g_lo {
                    lo + (target - g_lo) * (hi - lo) / (g_hi - g_lo)
                } else {
                    hi
                };
                break;
            }
            lo = hi;
            g_lo = g_hi;
        }
    }
    let mut v: Vec<f64> = w
        .iter()
        .zip(r)
        .map(|(&wj, &rj)| (rj + lambda * wj).clamp(0.0, 1.0))
        .collect();
    polish(w, &mut v, target);
    v
}

/// Absorb floating point residue of the constraint in a free coordinate.
fn polish(w: &[f64], v: &mut [f64], target: f64) {
    for _ in 0..2 {
        let residual = target - w.iter().zip(v.iter()).map(|(a, b)| a * b).sum::<f64>();
        if residual.abs() < 1e-15 {
            return;
        }
        let pick = (0..w.len())
            .filter(|&j| {
                w[j] > 0.0 && {
                    let moved = v[j] + residual / w[j];
                    (0.0..=1.0).contains(&moved)
                }
            })
            .max_by(|&x, &y| w[x].total_cmp(&w[y]));
        match pick {
            Some(j) => v[j] += residual / w[j],
            None => return,
        }
    }
}
