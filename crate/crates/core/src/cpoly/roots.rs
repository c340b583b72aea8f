//! Simultaneous root finding (Aberth–Ehrlich) with multiplicity clustering.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{abs_horner, horner_with_derivative, taylor_shift, PolyCoeffs};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

const MAX_ITERATIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootCluster {
    pub location: Complex64,
    pub multiplicity: usize,
}

/// Output of [`roots`].
#[derive(Debug, Clone, PartialEq)]
pub struct Roots {
    /// Distinct roots. A multiple root's location is refined from the
    /// centroid of its approximations.
    pub clusters: Vec<RootCluster>,
    /// The raw simultaneous-iteration approximations, one per root.
    pub approximations: Vec<Complex64>,
    /// `max_i |p(z_i)| / (‖a‖_∞ Σ |z_i|^k)` over the raw approximations.
    pub backward_error: f64,
    pub iterations: usize,
}

pub fn roots(poly: &PolyCoeffs) -> Result<Roots> {
    roots_with(poly, &Tolerances::default())
}

pub fn roots_with(poly: &PolyCoeffs, tol: &Tolerances) -> Result<Roots> {
    let a = poly.coeffs();
    let degree = poly.degree();
    if degree == 0 {
        return Err(Error::contract("root finding needs degree ≥ 1"));
    }
    if degree > tol.max_degree {
        return Err(Error::Capacity {
            degree,
            max: tol.max_degree,
        });
    }

    let (approximations, iterations) = match aberth(a, 0.7, 1.0) {
        Ok(r) => r,
        // A second start on a different circle usually escapes whatever
        // symmetry stalled the first one.
        Err(_) => aberth(a, 2.1, 3.0)?,
    };
    let backward_error = approximations
        .iter()
        .map(|&z| residual_ratio(a, z))
        .fold(0.0, f64::max);
    let clusters = cluster(a, &approximations, tol);
    Ok(Roots {
        clusters,
        approximations,
        backward_error,
        iterations,
    })
}

/// Normwise backward error of `z` as a root of `a`.
fn residual_ratio(a: &[Complex64], z: Complex64) -> f64 {
    let (p, _) = horner_with_derivative(a, z);
    let norm = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let r = z.norm();
    let scale = norm * (0..a.len()).fold(0.0, |acc, _| acc * r + 1.0);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// Initial approximations on a circle around the root centroid, radius from
/// the Fujiwara bound of the shifted polynomial.
fn initial_guesses(a: &[Complex64], angle_offset: f64, radius_factor: f64) -> Vec<Complex64> {
    let d = a.len() - 1;
    let center = -a[d - 1] / d as f64;
    let b = taylor_shift(a, center);
    let mut radius: f64 = 0.0;
    for (k, bk) in b.iter().enumerate().take(d) {
        let mut m = bk.norm();
        if k == 0 {
            m *= 0.5;
        }
        radius = radius.max(m.powf(1.0 / (d - k) as f64));
    }
    radius *= 2.0 * radius_factor;
    if radius == 0.0 {
        return vec![center; d];
    }
    (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + angle_offset;
            center + Complex64::from_polar(radius, t)
        })
        .collect()
}

fn aberth(a: &[Complex64], angle_offset: f64, radius_factor: f64) -> Result<(Vec<Complex64>, usize)> {
    let d = a.len() - 1;
    if d == 1 {
        return Ok((vec![-a[0]], 0));
    }
    let mut z = initial_guesses(a, angle_offset, radius_factor);
    if z.iter().skip(1).all(|&w| w == z[0]) && z.len() > 1 {
        // All coefficients below the leading one vanish after the shift.
        return Ok((z, 0));
    }
    let stop = 4.0 * d as f64 * f64::EPSILON;
    let mut frozen = vec![false; d];

    for iter in 1..=MAX_ITERATIONS {
        let mut active = false;
        for i in 0..d {
            if frozen[i] {
                continue;
            }
            let zi = z[i];
            let (p, dp) = horner_with_derivative(a, zi);
            if p.norm() <= stop * abs_horner(a, zi.norm()) {
                frozen[i] = true;
                continue;
            }
            active = true;
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if j != i && zj != zi {
                    s += (zi - zj).inv();
                }
            }
            let denom = dp - p * s;
            let w = if denom.norm() > 0.0 {
                p / denom
            } else {
                Complex64::new(1e-3 * (1.0 + zi.norm()), 0.0)
            };
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            z[i] = zi - w;
            if w.norm() <= f64::EPSILON * z[i].norm() {
                frozen[i] = true;
            }
        }
        if !active {
            return Ok((z, iter));
        }
    }
    let residual = z.iter().map(|&w| residual_ratio(a, w)).fold(0.0, f64::max);
    Err(Error::RootNonConvergence {
        iterations: MAX_ITERATIONS,
        residual,
        best: z,
    })
}

/// Does `a` lie within the configured backward error of a polynomial with a
/// root of multiplicity `ν = members.len()` near the members?
///
/// The candidate location starts at the centroid and is refined by Newton's
/// method on `p^(ν-1)`, of which a ν-fold root of `p` is a simple root. The
/// individual approximations of a multiple root are only accurate to about
/// `ε^{1/ν}`, the refined point to about `ε`.
fn numerical_multiple(a: &[Complex64], members: &[Complex64], eps: f64) -> Option<Complex64> {
    let nu = members.len();
    let centroid = members.iter().sum::<Complex64>() / nu as f64;
    let diameter = members
        .iter()
        .map(|&z| (z - centroid).norm())
        .fold(0.0, f64::max);
    let mut c = centroid;
    {
        for _ in 0..20 {
            let t = taylor_shift(a, c);
            let denom = t[nu] * nu as f64;
            if denom.norm() == 0.0 {
                break;
            }
            let step = t[nu - 1] / denom;
            c -= step;
            if step.norm() <= 4.0 * f64::EPSILON * c.norm().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        if !(c.re.is_finite() && c.im.is_finite()) || (c - centroid).norm() > 2.0 * diameter + f64::EPSILON {
            return None;
        }
    }
    // Normwise: a perturbation with ‖δa‖_∞ ≤ ε‖a‖_∞ moves t_j by at most
    // ε‖a‖_∞ Σ_k C(k,j) |c|^{k-j}.
    let t = taylor_shift(a, c);
    let norm = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let ones = vec![Complex64::new(norm, 0.0); a.len()];
    let scale = taylor_shift(&ones, Complex64::new(c.norm(), 0.0));
    (0..nu).all(|j| t[j].norm() <= eps * scale[j].re).then_some(c)
}

struct Node {
    members: Vec<usize>,
    children: Option<(usize, usize)>,
    /// Location of the merged root when the group is kept.
    location: Option<Complex64>,
}

/// Single-linkage agglomeration of the approximations; a merged group is kept
/// when it passes the backward-error test or is closer than `tau_cluster`.
/// The final clusters are the maximal kept groups of the dendrogram.
fn cluster(a: &[Complex64], approx: &[Complex64], tol: &Tolerances) -> Vec<RootCluster> {
    let d = approx.len();
    let max_abs = approx.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let merge_radius = tol.tau_cluster * max_abs;

    let mut edges = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            edges.push(((approx[i] - approx[j]).norm(), i, j));
        }
    }
    edges.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut nodes: Vec<Node> = (0..d)
        .map(|i| Node {
            members: vec![i],
            children: None,
            location: Some(approx[i]),
        })
        .collect();
    let mut parent: Vec<usize> = (0..d).collect();
    let mut node_of: Vec<usize> = (0..d).collect();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for (dist, i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            continue;
        }
        let (ni, nj) = (node_of[ri], node_of[rj]);
        let mut members = nodes[ni].members.clone();
        members.extend_from_slice(&nodes[nj].members);
        let pts: Vec<Complex64> = members.iter().map(|&k| approx[k]).collect();
        let location = numerical_multiple(a, &pts, tol.multiplicity_backward_error).or_else(|| {
            (dist <= merge_radius).then(|| pts.iter().sum::<Complex64>() / pts.len() as f64)
        });
        nodes.push(Node {
            members,
            children: Some((ni, nj)),
            location,
        });
        parent[rj] = ri;
        node_of[ri] = nodes.len() - 1;
    }

    let mut out = Vec::new();
    let mut stack = vec![nodes.len() - 1];
    while let Some(id) = stack.pop() {
        let node = &nodes[id];
        if let Some(location) = node.location {
            out.push((node.members.iter().copied().min().unwrap(), RootCluster {
                location,
                multiplicity: node.members.len(),
            }));
        } else if let Some((l, r)) = node.children {
            stack.push(l);
            stack.push(r);
        }
    }
    out.sort_by_key(|(first, _)| *first);
    out.into_iter().map(|(_, c)| c).collect()
}
