//! Uniform planar grids, grid functions and stencil Hessians.

use serde::{Deserialize, Serialize};

use crate::error::CheckError;
use crate::symmat::SymMat;

/// Stencil directions in grid units, one per line through a node.
pub const DIRECTIONS_R1: [(i64, i64); 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];
pub const DIRECTIONS_R2: [(i64, i64); 8] = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2)];

pub fn directions(radius: usize) -> &'static [(i64, i64)] {
    if radius >= 2 {
        &DIRECTIONS_R2
    } else {
        &DIRECTIONS_R1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
    Disk { cx: f64, cy: f64, r: f64 },
}

impl Domain {
    pub fn unit_square() -> Domain {
        Domain::Rect {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
        }
    }

    /// `[a, b]²`.
    pub fn square(a: f64, b: f64) -> Domain {
        Domain::Rect {
            x0: a,
            x1: b,
            y0: a,
            y1: b,
        }
    }

    /// Nearest point of the boundary curve.
    pub fn project(&self, x: f64, y: f64) -> (f64, f64) {
        match *self {
            Domain::Rect { x0, x1, y0, y1 } => {
                let (cx, cy) = (x.clamp(x0, x1), y.clamp(y0, y1));
                if cx != x || cy != y {
                    return (cx, cy);
                }
                let d = [(x - x0, 0), (x1 - x, 1), (y - y0, 2), (y1 - y, 3)];
                let (_, side) = d.iter().copied().fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
                match side {
                    0 => (x0, y),
                    1 => (x1, y),
                    2 => (x, y0),
                    _ => (x, y1),
                }
            }
            Domain::Disk { cx, cy, r } => {
                let (dx, dy) = (x - cx, y - cy);
                let d = dx.hypot(dy);
                if d == 0.0 {
                    (cx + r, cy)
                } else {
                    (cx + r * dx / d, cy + r * dy / d)
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Interior,
    Boundary,
    Outside,
}

/// Node lattice `(x0 + i·h, y0 + j·h)` covering a domain.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct Grid {
    domain: Domain,
    nodes: usize,
    nx: usize,
    ny: usize,
    h: f64,
    x0: f64,
    y0: f64,
    kinds: Vec<NodeKind>,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    domain: Domain,
    nodes: usize,
}

impl TryFrom<GridRepr> for Grid {
    type Error = CheckError;
    fn try_from(r: GridRepr) -> Result<Grid, CheckError> {
        Grid::new(r.domain, r.nodes)
    }
}

impl From<Grid> for GridRepr {
    fn from(g: Grid) -> GridRepr {
        GridRepr {
            domain: g.domain,
            nodes: g.nodes,
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Grid) -> bool {
        self.domain == other.domain && self.nodes == other.nodes
    }
}

impl Grid {
    /// `nodes` is the node count along the x extent of the domain.
    pub fn new(domain: Domain, nodes: usize) -> Result<Grid, CheckError> {
        if nodes < 3 {
            return Err(CheckError::BadGrid(format!("need at least 3 nodes per side, got {nodes}")));
        }
        match domain {
            Domain::Rect { x0, x1, y0, y1 } => {
                if !(x1 > x0 && y1 > y0) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
                    return Err(CheckError::BadGrid("rectangle must have x0 < x1 and y0 < y1".into()));
                }
                let h = (x1 - x0) / (nodes - 1) as f64;
                let steps = (y1 - y0) / h;
                let ny_steps = steps.round();
                if (steps - ny_steps).abs() > 1e-9 * steps.max(1.0) || ny_steps < 2.0 {
                    return Err(CheckError::BadGrid(format!(
                        "height {} is not a multiple of the spacing {h}",
                        y1 - y0
                    )));
                }
                let (nx, ny) = (nodes, ny_steps as usize + 1);
                let mut kinds = vec![NodeKind::Interior; nx * ny];
                for j in 0..ny {
                    for i in 0..nx {
                        if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
                            kinds[j * nx + i] = NodeKind::Boundary;
                        }
                    }
                }
                Ok(Grid {
                    domain,
                    nodes,
                    nx,
                    ny,
                    h,
                    x0,
                    y0,
                    kinds,
                })
            }
            Domain::Disk { cx, cy, r } => {
                if !(r > 0.0 && r.is_finite() && cx.is_finite() && cy.is_finite()) {
                    return Err(CheckError::BadGrid("disk needs a finite positive radius".into()));
                }
                let h = 2.0 * r / (nodes - 1) as f64;
                let (x0, y0) = (cx - r, cy - r);
                let n = nodes;
                let inside: Vec<bool> = (0..n * n)
                    .map(|k| {
                        let (i, j) = (k % n, k / n);
                        let (x, y) = (x0 + i as f64 * h, y0 + j as f64 * h);
                        (x - cx).hypot(y - cy) < r * (1.0 - 1e-12)
                    })
                    .collect();
                let mut kinds = vec![NodeKind::Outside; n * n];
                for j in 0..n {
                    for i in 0..n {
                        let k = j * n + i;
                        if inside[k] {
                            let edge = i == 0 || j == 0 || i == n - 1 || j == n - 1;
                            kinds[k] = if edge { NodeKind::Boundary } else { NodeKind::Interior };
                            continue;
                        }
                        let near = (-1i64..=1).any(|b| {
                            (-1i64..=1).any(|a| {
                                let (ii, jj) = (i as i64 + a, j as i64 + b);
                                ii >= 0 && jj >= 0 && ii < n as i64 && jj < n as i64 && inside[jj as usize * n + ii as usize]
                            })
                        });
                        if near {
                            kinds[k] = NodeKind::Boundary;
                        }
                    }
                }
                Ok(Grid {
                    domain,
                    nodes,
                    nx: n,
                    ny: n,
                    h,
                    x0,
                    y0,
                    kinds,
                })
            }
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + i as f64 * self.h, self.y0 + j as f64 * self.h)
    }

    pub fn kind(&self, i: usize, j: usize) -> NodeKind {
        self.kinds[self.idx(i, j)]
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    /// Node at integer offset `(a, b)` from `(i, j)`, if it is on the lattice
    /// and not masked out.
    pub fn offset(&self, i: usize, j: usize, a: i64, b: i64) -> Option<usize> {
        let (ii, jj) = (i as i64 + a, j as i64 + b);
        if ii < 0 || jj < 0 || ii >= self.nx as i64 || jj >= self.ny as i64 {
            return None;
        }
        let k = self.idx(ii as usize, jj as usize);
        (self.kinds[k] != NodeKind::Outside).then_some(k)
    }

    /// Whether `(i, j)` is interior and every node within `radius` lattice
    /// steps is available.
    pub fn stencil_ok(&self, i: usize, j: usize, radius: usize) -> bool {
        if self.kind(i, j) != NodeKind::Interior {
            return false;
        }
        let r = radius as i64;
        (-r..=r).all(|b| (-r..=r).all(|a| self.offset(i, j, a, b).is_some()))
    }

    /// Iterator over `(i, j)` for all nodes in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (i, j)))
    }

    /// Boundary value at a boundary node: `φ` at the node for rectangles and
    /// at the nearest point of the circle for disks.
    pub fn boundary_value(&self, i: usize, j: usize, phi: impl Fn(f64, f64) -> f64) -> f64 {
        let (x, y) = self.coords(i, j);
        match self.domain {
            Domain::Rect { .. } => phi(x, y),
            Domain::Disk { .. } => {
                let (px, py) = self.domain.project(x, y);
                phi(px, py)
            }
        }
    }
}

/// Values at the nodes of a grid, row-major. Masked nodes hold 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFn {
    #[serde(flatten)]
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl GridFn {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<GridFn, CheckError> {
        if values.len() != grid.len() {
            return Err(CheckError::BadGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(GridFn { grid, values })
    }

    /// Samples `f` at every node that is not masked out.
    pub fn sample(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> GridFn {
        let values = grid
            .indices()
            .map(|(i, j)| {
                if grid.kind(i, j) == NodeKind::Outside {
                    0.0
                } else {
                    let (x, y) = grid.coords(i, j);
                    f(x, y)
                }
            })
            .collect();
        GridFn {
            grid: grid.clone(),
            values,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    pub fn neg(&self) -> GridFn {
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFn {
        GridFn {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Largest `|u − v|` over unmasked nodes.
    pub fn max_abs_diff(&self, other: &GridFn) -> Result<f64, CheckError> {
        if self.grid != other.grid {
            return Err(CheckError::DomainMismatch);
        }
        Ok(self
            .grid
            .kinds()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .filter(|(k, _)| **k != NodeKind::Outside)
            .map(|(_, (a, b))| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Largest deviation from a function sampled at the unmasked nodes.
    pub fn max_error(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.max_abs_diff(&GridFn::sample(&self.grid, f)).expect("same grid")
    }

    /// Largest deviation from `f` at interior nodes only. Disk boundary nodes
    /// sit off the circle, so they are excluded when measuring solver error.
    pub fn max_interior_error(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.grid
            .indices()
            .filter(|&(i, j)| self.grid.kind(i, j) == NodeKind::Interior)
            .map(|(i, j)| {
                let (x, y) = self.grid.coords(i, j);
                (self.get(i, j) - f(x, y)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Values at boundary nodes, in row-major node order.
    pub fn boundary_trace(&self) -> Vec<f64> {
        self.grid
            .indices()
            .filter(|&(i, j)| self.grid.kind(i, j) == NodeKind::Boundary)
            .map(|(i, j)| self.get(i, j))
            .collect()
    }

    /// Centered second difference along the lattice direction `(a, b)`:
    /// `(u(x + hθ) − 2u(x) + u(x − hθ)) / h²`, which equals `θᵀAθ` for a
    /// quadratic with Hessian `A`.
    pub fn second_difference(&self, i: usize, j: usize, a: i64, b: i64) -> Option<f64> {
        let p = self.grid.offset(i, j, a, b)?;
        let m = self.grid.offset(i, j, -a, -b)?;
        let c = self.values[self.grid.idx(i, j)];
        let h = self.grid.h;
        Some((self.values[p] - 2.0 * c + self.values[m]) / (h * h))
    }

    /// Largest centered third difference along the axes, `|D³u|` in units of `h³`.
    pub fn max_third_difference(&self) -> f64 {
        let h3 = self.grid.h.powi(3);
        let mut worst = 0.0_f64;
        for (i, j) in self.grid.indices() {
            for (a, b) in [(1i64, 0i64), (0, 1)] {
                let pts = [-1i64, 0, 1, 2].map(|k| self.grid.offset(i, j, k * a, k * b));
                if let [Some(m), Some(c), Some(p), Some(q)] = pts {
                    let v = &self.values;
                    let d = (v[q] - 3.0 * v[p] + 3.0 * v[c] - v[m]) / h3;
                    worst = worst.max(d.abs());
                }
            }
        }
        worst
    }
}

/// Least-squares Hessian from second differences along the stencil directions.
///
/// Exact for quadratics: each second difference of `½⟨Ax, x⟩` is `θᵀAθ`.
pub fn discrete_hessian(u: &GridFn, i: usize, j: usize, radius: usize) -> Result<SymMat, CheckError> {
    if i >= u.grid.nx || j >= u.grid.ny || !u.grid.stencil_ok(i, j, radius) {
        return Err(CheckError::NodeOutOfRange { i, j, radius });
    }
    // Unknowns (a11, a12, a22); row θ is (θx², 2θxθy, θy²).
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for &(a, b) in directions(radius) {
        let d = u.second_difference(i, j, a, b).expect("stencil checked");
        let (a, b) = (a as f64, b as f64);
        let row = [a * a, 2.0 * a * b, b * b];
        for r in 0..3 {
            for c in 0..3 {
                ata[r][c] += row[r] * row[c];
            }
            atb[r] += row[r] * d;
        }
    }
    let [a11, a12, a22] = solve3(ata, atb);
    Ok(SymMat::new(2, vec![a11, a12, a22]).expect("finite hessian"))
}

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> [f64; 3] {
    let a = nalgebra::Matrix3::from_fn(|r, c| m[r][c]);
    let x = a
        .lu()
        .solve(&nalgebra::Vector3::from(b))
        .expect("stencil directions span the quadratic forms");
    [x[0], x[1], x[2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratics_are_exact() {
        let g = Grid::new(Domain::unit_square(), 17).unwrap();
        let u = GridFn::sample(&g, |x, y| x * x - y * y);
        for r in [1, 2] {
            let a = discrete_hessian(&u, 8, 8, r).unwrap();
            assert!((a.get(0, 0) - 2.0).abs() < 1e-9);
            assert!((a.get(1, 1) + 2.0).abs() < 1e-9);
            assert!(a.get(0, 1).abs() < 1e-9);
        }
        let v = GridFn::sample(&g, |x, y| 3.0 * x - y + 1.0);
        assert!(discrete_hessian(&v, 5, 5, 1).unwrap().norm() < 1e-9);
    }

    #[test]
    fn quartic_hessian_is_second_order() {
        for n in [17, 33] {
            let g = Grid::new(Domain::square(-1.0, 1.0), n).unwrap();
            let u = GridFn::sample(&g, |x, _| x.powi(4));
            let a = discrete_hessian(&u, n / 2, n / 2, 1).unwrap();
            // Only the x² direction sees the quartic: D = 2h², within the h² Taylor bound.
            let h = g.h();
            assert!(a.norm() <= 2.0 * h * h + 1e-12, "{}", a.norm());
        }
    }

    #[test]
    fn out_of_range_nodes_are_rejected() {
        let g = Grid::new(Domain::unit_square(), 9).unwrap();
        let u = GridFn::sample(&g, |x, _| x);
        assert!(matches!(
            discrete_hessian(&u, 0, 3, 1),
            Err(CheckError::NodeOutOfRange { .. })
        ));
        assert!(discrete_hessian(&u, 1, 1, 2).is_err());
    }

    #[test]
    fn disk_mask() {
        let g = Grid::new(Domain::Disk { cx: 0.0, cy: 0.0, r: 1.0 }, 21).unwrap();
        assert_eq!(g.kind(10, 10), NodeKind::Interior);
        assert_eq!(g.kind(0, 0), NodeKind::Outside);
        assert_eq!(g.kind(0, 10), NodeKind::Boundary);
        for (i, j) in g.indices() {
            if g.kind(i, j) == NodeKind::Interior {
                assert!(g.stencil_ok(i, j, 1));
            }
        }
    }

    #[test]
    fn grid_fn_json_round_trip() {
        let g = Grid::new(Domain::unit_square(), 5).unwrap();
        let u = GridFn::sample(&g, |x, y| x + 2.0 * y);
        let s = serde_json::to_string(&u).unwrap();
        assert!(s.starts_with("{\"domain\":{\"kind\":\"rect\""));
        let back: GridFn = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
    }
}
