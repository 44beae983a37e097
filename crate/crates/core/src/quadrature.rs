//! Adaptive tensor Gauss–Legendre quadrature on the closed unit disk in
//! polar coordinates.
//!
//! Each cell `[r0,r1]×[t0,t1]` is integrated once with the base rule and once
//! as four children; the difference is the error estimate. Cells whose
//! estimate exceeds their share of the tolerance are split and revisited on
//! the next level. Cells are processed level by level through [`Execution`],
//! and accepted contributions are summed in cell order so the result does not
//! depend on the execution mode.

use std::f64::consts::TAU;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};
use crate::exec::Execution;

/// Evaluation cap shared by all calls of one integration.
pub const DEFAULT_BUDGET: usize = 10_000_000;
const ORDER: usize = 8;
const MAX_DEPTH: u32 = 40;

#[derive(Clone, Copy, Debug)]
struct Cell {
    r: (f64, f64),
    t: (f64, f64),
    depth: u32,
}

impl Cell {
    fn fraction(&self) -> f64 {
        (self.r.1 - self.r.0) * (self.t.1 - self.t.0) / TAU
    }

    fn children(&self) -> [Cell; 4] {
        let rm = 0.5 * (self.r.0 + self.r.1);
        let tm = 0.5 * (self.t.0 + self.t.1);
        let depth = self.depth + 1;
        [
            Cell {
                r: (self.r.0, rm),
                t: (self.t.0, tm),
                depth,
            },
            Cell {
                r: (self.r.0, rm),
                t: (tm, self.t.1),
                depth,
            },
            Cell {
                r: (rm, self.r.1),
                t: (self.t.0, tm),
                depth,
            },
            Cell {
                r: (rm, self.r.1),
                t: (tm, self.t.1),
                depth,
            },
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub cells: usize,
}

/// Polar tensor rule on the unit disk.
pub struct DiskQuadrature {
    rule: Vec<(f64, f64)>,
    pub budget: usize,
    pub exec: Execution,
}

impl DiskQuadrature {
    pub fn new(exec: Execution) -> Self {
        let rule = GaussLegendre::new(ORDER)
            .expect("order >= 2")
            .as_node_weight_pairs()
            .to_vec();
        DiskQuadrature {
            rule,
            budget: DEFAULT_BUDGET,
            exec,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    fn cell_rule<F: Fn(f64, f64) -> f64>(&self, c: &Cell, f: &F) -> f64 {
        let (hr, mr) = (0.5 * (c.r.1 - c.r.0), 0.5 * (c.r.1 + c.r.0));
        let (ht, mt) = (0.5 * (c.t.1 - c.t.0), 0.5 * (c.t.1 + c.t.0));
        let mut sum = 0.0;
        for &(xr, wr) in &self.rule {
            let r = mr + hr * xr;
            let mut inner = 0.0;
            for &(xt, wt) in &self.rule {
                inner += wt * f(r, mt + ht * xt);
            }
            sum += wr * r * inner;
        }
        sum * hr * ht
    }

    /// `∫_{|z|≤1} f dA` with `f(r, θ)` and absolute tolerance `tol`.
    pub fn integrate<F>(&self, f: F, tol: f64) -> Result<QuadratureResult>
    where
        F: Fn(f64, f64) -> f64 + Sync + Send,
    {
        let per_cell = 5 * ORDER * ORDER;
        let mut cells: Vec<Cell> = Vec::new();
        for i in 0..4 {
            for j in 0..8 {
                cells.push(Cell {
                    r: (i as f64 / 4.0, (i + 1) as f64 / 4.0),
                    t: (j as f64 * TAU / 8.0, (j + 1) as f64 * TAU / 8.0),
                    depth: 0,
                });
            }
        }
        let mut value = 0.0;
        let mut error_estimate = 0.0;
        let mut evaluations = 0;
        let mut accepted = 0;
        while !cells.is_empty() {
            evaluations += per_cell * cells.len();
            if evaluations > self.budget {
                return Err(Error::QuadratureBudget(self.budget));
            }
            let estimates = self.exec.map(&cells, |c| {
                let coarse = self.cell_rule(c, &f);
                let fine: f64 = c.children().iter().map(|k| self.cell_rule(k, &f)).sum();
                (fine, (fine - coarse).abs())
            });
            let mut next = Vec::new();
            for (cell, (fine, err)) in cells.iter().zip(estimates) {
                if !fine.is_finite() {
                    return Err(Error::Precondition(
                        "integrand is not finite on the disk".into(),
                    ));
                }
                if err <= tol * cell.fraction() || cell.depth >= MAX_DEPTH {
                    value += fine;
                    error_estimate += err;
                    accepted += 1;
                } else {
                    next.extend(cell.children());
                }
            }
            cells = next;
        }
        Ok(QuadratureResult {
            value,
            error_estimate,
            evaluations,
            cells: accepted,
        })
    }
}
