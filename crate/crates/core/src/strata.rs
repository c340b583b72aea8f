//! Multiplicity strata and the interpolation identities behind the rank
//! argument.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cpoly::{critical_points_with, CriticalSet, PolyCoeffs, ZeroConfig};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// The multiplicity pattern `(μ̄, ν̄)` of a configuration.
///
/// `Σ μ_i = n`, `Σ ν_j = m - 1`, and `s = m - 1 - k ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StructureRepr", into = "StructureRepr")]
pub struct Structure {
    mu: Vec<u32>,
    nu: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct StructureRepr {
    mu: Vec<u32>,
    nu: Vec<u32>,
}

impl TryFrom<StructureRepr> for Structure {
    type Error = Error;
    fn try_from(r: StructureRepr) -> Result<Self> {
        Structure::new(r.mu, r.nu)
    }
}

impl From<Structure> for StructureRepr {
    fn from(s: Structure) -> Self {
        StructureRepr { mu: s.mu, nu: s.nu }
    }
}

impl Structure {
    pub fn new(mu: Vec<u32>, nu: Vec<u32>) -> Result<Self> {
        if mu.len() < 2 {
            return Err(Error::contract("a stratum needs m ≥ 2 distinct zeros"));
        }
        if nu.is_empty() {
            return Err(Error::contract("a stratum needs k ≥ 1 second-kind critical points"));
        }
        if mu.iter().chain(&nu).any(|&x| x == 0) {
            return Err(Error::contract("multiplicities must be positive"));
        }
        let m = mu.len() as u32;
        let nu_sum: u32 = nu.iter().sum();
        if nu_sum != m - 1 {
            return Err(Error::contract(format!(
                "second-kind multiplicities sum to {nu_sum}, expected m - 1 = {}",
                m - 1
            )));
        }
        Ok(Self { mu, nu })
    }

    pub fn mu(&self) -> &[u32] {
        &self.mu
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn n(&self) -> usize {
        self.mu.iter().map(|&x| x as usize).sum()
    }

    pub fn m(&self) -> usize {
        self.mu.len()
    }

    pub fn k(&self) -> usize {
        self.nu.len()
    }

    /// Number of dependent zeros, `m - 1 - k`.
    pub fn s(&self) -> usize {
        self.m() - 1 - self.k()
    }

    /// Same stratum up to relabelling of the second-kind points.
    pub fn same_stratum(&self, other: &Structure) -> bool {
        let mut a = self.nu.clone();
        let mut b = other.nu.clone();
        a.sort_unstable();
        b.sort_unstable();
        self.mu == other.mu && a == b
    }
}

impl fmt::Display for Structure {
    /// `n:μ_1,…,μ_m/ν_1,…,ν_k`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}:{}/{}", self.n(), join(&self.mu), join(&self.nu))
    }
}

pub fn classify_stratum(config: &ZeroConfig) -> Result<Structure> {
    classify_stratum_with(config, &Tolerances::default())
}

pub fn classify_stratum_with(config: &ZeroConfig, tol: &Tolerances) -> Result<Structure> {
    let crit = critical_points_with(config, tol)?;
    structure_of(config, &crit)
}

/// The structure of a configuration whose critical set is already known.
pub fn structure_of(config: &ZeroConfig, crit: &CriticalSet) -> Result<Structure> {
    Structure::new(
        config.multiplicities().collect(),
        crit.second_kind.iter().map(|c| c.multiplicity).collect(),
    )
}

/// Pairwise distinct interpolation nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    nodes: Vec<Complex64>,
}

impl NodeSet {
    pub fn new(nodes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerances(nodes, &Tolerances::default())
    }

    pub fn with_tolerances(nodes: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        for i in 0..nodes.len() {
            if !(nodes[i].re.is_finite() && nodes[i].im.is_finite()) {
                return Err(Error::contract(format!("node {i} is not finite")));
            }
            for j in 0..i {
                if (nodes[i] - nodes[j]).norm() < tol.tau_sep {
                    return Err(Error::contract(format!("nodes {j} and {i} coincide")));
                }
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `ω(z) = ∏ (z - z_i)`
    pub fn omega(&self, z: Complex64) -> Complex64 {
        self.nodes.iter().map(|&x| z - x).product()
    }

    /// `ω_i(z) = ∏_{j≠i} (z - z_j)`
    pub fn omega_i(&self, i: usize, z: Complex64) -> Complex64 {
        self.nodes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| z - x)
            .product()
    }
}

/// Divided difference `q[x_0, …, x_r]` over a node multiset.
///
/// Repeated nodes use derivative values (confluent Hermite table). Nodes are
/// grouped by exact equality.
pub fn divided_difference(q: &PolyCoeffs, nodes: &[Complex64]) -> Result<Complex64> {
    if nodes.is_empty() {
        return Err(Error::contract("divided difference needs at least one node"));
    }
    let mut xs = nodes.to_vec();
    // The value is symmetric in its nodes; sorting makes repeats adjacent.
    xs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let r = xs.len() - 1;

    let max_rep = xs
        .chunk_by(|a, b| a == b)
        .map(|g| g.len())
        .max()
        .unwrap_or(1);
    if max_rep > q.degree() + 1 && max_rep > 1 {
        return Err(Error::contract(format!(
            "node repeated {max_rep} times exceeds degree + 1 = {}",
            q.degree() + 1
        )));
    }

    // Taylor data q^(j)(x)/j! at each node, enough for its repetition count.
    let taylor: Vec<Vec<Complex64>> = xs
        .iter()
        .map(|&x| {
            let mut t = crate::cpoly::PolyCoeffs::derivatives_at(q, x, max_rep - 1);
            let mut f = 1.0;
            for (j, v) in t.iter_mut().enumerate() {
                if j > 0 {
                    f *= j as f64;
                }
                *v /= f;
            }
            t
        })
        .collect();

    // table[i] holds q[x_i, …, x_{i+level}]
    let mut table: Vec<Complex64> = taylor.iter().map(|t| t[0]).collect();
    for level in 1..=r {
        for i in 0..=r - level {
            let (a, b) = (xs[i], xs[i + level]);
            table[i] = if a == b {
                taylor[i][level]
            } else {
                (table[i + 1] - table[i]) / (b - a)
            };
        }
    }
    Ok(table[0])
}

/// `|q[z_1, …, z_i, z_i, …, z_s] - 1|` for monic `q` of degree `s`.
pub fn leading_dd_identity(q: &PolyCoeffs, nodes: &NodeSet, doubled_index: usize) -> Result<f64> {
    if q.degree() != nodes.len() {
        return Err(Error::contract(format!(
            "degree {} does not match node count {}",
            q.degree(),
            nodes.len()
        )));
    }
    if doubled_index >= nodes.len() {
        return Err(Error::contract("doubled index out of range"));
    }
    let mut xs = nodes.nodes().to_vec();
    xs.insert(doubled_index, xs[doubled_index]);
    Ok((divided_difference(q, &xs)? - Complex64::new(1.0, 0.0)).norm())
}

/// Residual of `q(z) = Σ q(z_i) ω_i(z)/ω_i(z_i) + ω(z)` for monic `q` of
/// degree `s` over `s` nodes.
pub fn lagrange_residual(q: &PolyCoeffs, nodes: &NodeSet, z: Complex64) -> Result<f64> {
    if q.degree() != nodes.len() {
        return Err(Error::contract(format!(
            "degree {} does not match node count {}",
            q.degree(),
            nodes.len()
        )));
    }
    let mut rhs = nodes.omega(z);
    for (i, &zi) in nodes.nodes().iter().enumerate() {
        rhs += q.eval(zi) * nodes.omega_i(i, z) / nodes.omega_i(i, zi);
    }
    Ok((q.eval(z) - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z_squared() -> PolyCoeffs {
        PolyCoeffs::from_real(&[0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn classify_examples() {
        let s = classify_stratum(&ZeroConfig::simple(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap()).unwrap();
        assert_eq!((s.mu(), s.nu(), s.m(), s.k(), s.s()), (&[1, 1][..], &[1][..], 2, 1, 0));

        let s = classify_stratum(&ZeroConfig::roots_of_unity(5).unwrap()).unwrap();
        assert_eq!((s.mu(), s.nu(), s.m(), s.k(), s.s()), (&[1, 1, 1, 1, 1][..], &[4][..], 5, 1, 3));

        let cfg = ZeroConfig::from_pairs(&[(c(0.0, 0.0), 2), (c(1.0, 0.0), 1)]).unwrap();
        let s = classify_stratum(&cfg).unwrap();
        assert_eq!((s.mu(), s.nu(), s.n(), s.m(), s.k(), s.s()), (&[2, 1][..], &[1][..], 3, 2, 1, 0));
    }

    #[test]
    fn structure_validation_and_display() {
        assert!(Structure::new(vec![1, 1, 1], vec![1]).is_err());
        assert!(Structure::new(vec![1], vec![]).is_err());
        let s = Structure::new(vec![2, 1, 1], vec![2]).unwrap();
        assert_eq!(s.to_string(), "4:2,1,1/2");
        assert!(s.same_stratum(&Structure::new(vec![2, 1, 1], vec![2]).unwrap()));
    }

    #[test]
    fn divided_difference_examples() {
        let q = z_squared();
        let one = c(1.0, 0.0);
        let dd = divided_difference(&q, &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert!((dd - one).norm() < 1e-15);
        let dd = divided_difference(&q, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((dd - one).norm() < 1e-15);
        let dd = divided_difference(&q, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((dd - one).norm() < 1e-15);
        // q[x, x, x] = q''(x)/2 = 1
        let dd = divided_difference(&q, &[c(3.0, 1.0); 3]).unwrap();
        assert!((dd - one).norm() < 1e-15);
        assert!(divided_difference(&q, &[c(0.0, 0.0); 4]).is_err());
    }

    #[test]
    fn leading_identity_examples() {
        let nodes = NodeSet::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let q = PolyCoeffs::from_roots(nodes.nodes());
        for i in 0..3 {
            assert!(leading_dd_identity(&q, &nodes, i).unwrap() < 1e-14);
        }
        let q = PolyCoeffs::from_real(&[0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(leading_dd_identity(&q, &nodes, 1).unwrap() <= 1e-10);
        assert!(leading_dd_identity(&q, &nodes, 3).is_err());
    }

    #[test]
    fn lagrange_examples() {
        let nodes = NodeSet::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let omega = PolyCoeffs::from_roots(nodes.nodes());
        assert_eq!(lagrange_residual(&omega, &nodes, c(0.3, 0.2)).unwrap(), 0.0);
        // 25 = 1·(5-0)/(1-0) + 5·4
        assert!(lagrange_residual(&z_squared(), &nodes, c(5.0, 0.0)).unwrap() < 1e-13);
    }

    #[test]
    fn nodes_must_be_distinct() {
        assert!(NodeSet::new(vec![c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    }
}
