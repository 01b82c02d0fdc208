//! Prolongation: the enlarged equation system obtained by differentiating
//! equation `i` up to `c[i]` times, its derivative-variable set, and the
//! block-triangular schedule over it.
//!
//! The equation list, variable set, counts, and schedule are built eagerly;
//! they cost O(M + N). The differentiated expressions themselves are
//! materialized on demand through [`ProlongedSystem::equation_expr`] and
//! friends, because an expanded high-order derivative of a quotient grows
//! combinatorially and is only ever needed for the levels a caller actually
//! touches.

use serde::Serialize;

use crate::expr::{Expr, Symbol};
use crate::model::Model;
use crate::offsets::Offsets;

/// The `level`-th time derivative of source equation `source`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProlongedEquation {
    pub source: usize,
    pub level: u32,
}

/// Derivative `order` of variable `var`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ProlongedVariable {
    pub var: usize,
    pub order: u32,
}

#[derive(Clone, Debug)]
pub struct ProlongedSystem {
    model: Model,
    offsets: Offsets,
    equations: Vec<ProlongedEquation>,
    variables: Vec<ProlongedVariable>,
}

impl ProlongedSystem {
    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn offsets(&self) -> &Offsets {
        &self.offsets
    }

    /// Equations ordered by (source, level).
    pub fn equations(&self) -> &[ProlongedEquation] {
        &self.equations
    }

    /// Variables ordered by (variable, order); exactly the set
    /// `{ x_j^(m) : 0 <= m <= d[j] }`.
    pub fn variables(&self) -> &[ProlongedVariable] {
        &self.variables
    }

    /// Equation count `M = sum(c_i + 1)`.
    pub fn m(&self) -> usize {
        self.equations.len()
    }

    /// Variable count `N = sum(d_j + 1)`.
    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    /// Materializes the expression of one prolonged equation by repeated
    /// total differentiation of its source residual.
    pub fn equation_expr(&self, eq: ProlongedEquation) -> Expr {
        let mut e = self.model.equations[eq.source].clone();
        for _ in 0..eq.level {
            e = e.total_derivative();
        }
        e
    }

    /// Materializes every equation, sharing the derivative chain per source.
    pub fn equation_exprs(&self) -> Vec<(ProlongedEquation, Expr)> {
        let mut out = Vec::with_capacity(self.equations.len());
        let mut current: Option<(usize, Expr)> = None;
        for &eq in &self.equations {
            let expr = match current.take() {
                Some((source, prev)) if source == eq.source => prev.total_derivative(),
                _ => self.model.equations[eq.source].clone(),
            };
            out.push((eq, expr.clone()));
            current = Some((eq.source, expr));
        }
        out
    }

    pub fn schedule(&self) -> BlockSchedule {
        BlockSchedule::new(self)
    }

    pub fn report(&self) -> ProlongedReport {
        let schedule = self.schedule();
        ProlongedReport {
            equations: self
                .equation_exprs()
                .into_iter()
                .map(|(eq, expr)| ProlongedEquationReport {
                    eq: eq.source,
                    level: eq.level,
                    text: format!("{} = 0", expr.display(&self.model)),
                })
                .collect(),
            m: self.m(),
            n: self.n_variables(),
            blocks: schedule.blocks,
        }
    }
}

/// Builds the prolonged system for offsets computed from this model's
/// signature matrix.
pub fn prolong(model: &Model, offsets: &Offsets) -> ProlongedSystem {
    assert_eq!(
        model.n_equations(),
        offsets.n(),
        "offsets must come from this model"
    );
    let mut equations = Vec::new();
    for (i, &c) in offsets.c.iter().enumerate() {
        for level in 0..=c {
            equations.push(ProlongedEquation { source: i, level });
        }
    }
    let mut variables = Vec::new();
    for (j, &d) in offsets.d.iter().enumerate() {
        for order in 0..=d {
            variables.push(ProlongedVariable { var: j, order });
        }
    }
    ProlongedSystem {
        model: model.clone(),
        offsets: offsets.clone(),
        equations,
        variables,
    }
}

/// Block-triangular schedule. Equation `(i, l)` lands in block
/// `k_c - c[i] + l`; variable `(j, m)` lands in stage `k_d - d[j] + m`.
/// Block `p` pairs with stage `p + (k_d - k_c)` and references no variable
/// of a later stage.
#[derive(Clone, Debug, Serialize)]
pub struct BlockSchedule {
    pub k_c: u32,
    pub k_d: u32,
    /// `blocks[p]` lists the equations of block `p`, ascending source index.
    pub blocks: Vec<Vec<ProlongedEquation>>,
    /// `stages[s]` lists the variables first determined at stage `s`.
    pub stages: Vec<Vec<ProlongedVariable>>,
}

impl BlockSchedule {
    fn new(sys: &ProlongedSystem) -> BlockSchedule {
        let k_c = sys.offsets.max_c();
        let k_d = sys.offsets.max_d();
        let mut blocks = vec![Vec::new(); k_c as usize + 1];
        for &eq in &sys.equations {
            let p = k_c - sys.offsets.c[eq.source] + eq.level;
            blocks[p as usize].push(eq);
        }
        let mut stages = vec![Vec::new(); k_d as usize + 1];
        for &v in &sys.variables {
            let s = k_d - sys.offsets.d[v.var] + v.order;
            stages[s as usize].push(v);
        }
        BlockSchedule { k_c, k_d, blocks, stages }
    }

    /// Stage index paired with equation block `p`.
    pub fn stage_for_block(&self, p: usize) -> usize {
        p + (self.k_d - self.k_c) as usize
    }

    pub fn block_of(&self, offsets: &Offsets, eq: ProlongedEquation) -> usize {
        (self.k_c - offsets.c[eq.source] + eq.level) as usize
    }

    pub fn stage_of(&self, offsets: &Offsets, v: ProlongedVariable) -> usize {
        (self.k_d - offsets.d[v.var] + v.order) as usize
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProlongedReport {
    pub equations: Vec<ProlongedEquationReport>,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub blocks: Vec<Vec<ProlongedEquation>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProlongedEquationReport {
    pub eq: usize,
    pub level: u32,
    pub text: String,
}

/// Set of symbols occurring syntactically across the given expressions.
pub fn symbol_closure(exprs: &[Expr]) -> std::collections::BTreeSet<Symbol> {
    let mut set = std::collections::BTreeSet::new();
    for e in exprs {
        e.visit_symbols(&mut |s| {
            set.insert(s);
        });
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze;
    use crate::parse::parse_model;

    #[test]
    fn single_ode_prolongs_to_itself() {
        let m = parse_model("model m\nvar x\neq der(x,1) = x\n").unwrap();
        let a = analyze(&m).unwrap();
        let p = prolong(&m, &a.offsets);
        assert_eq!(p.m(), 1);
        assert_eq!(p.n_variables(), 2);
        assert_eq!(
            p.variables(),
            &[
                ProlongedVariable { var: 0, order: 0 },
                ProlongedVariable { var: 0, order: 1 }
            ]
        );
        let schedule = p.schedule();
        assert_eq!(schedule.blocks.len(), 1);
        assert_eq!(schedule.blocks[0], vec![ProlongedEquation { source: 0, level: 0 }]);
        // The lone state is determined by nothing; it sits in a stage ahead
        // of every block.
        assert_eq!(schedule.stages.len(), 2);
        assert_eq!(schedule.stage_for_block(0), 1);
    }

    #[test]
    fn prolonged_expressions_shift_orders() {
        let m = parse_model("model m\nvar x\ninput Q\neq der(x,1) = Q\n").unwrap();
        let a = analyze(&m).unwrap();
        let p = prolong(&m, &a.offsets);
        let exprs = p.equation_exprs();
        assert_eq!(exprs.len(), 1);
        let text = exprs[0].1.display(&m).to_string();
        assert_eq!(text, "der(x,1) - Q");
    }

    #[test]
    fn closure_stays_inside_the_variable_set() {
        let src = "model m\nvar x, y\neq der(x,1) = y*y\neq y = x + 1\n";
        let m = parse_model(src).unwrap();
        let a = analyze(&m).unwrap();
        let p = prolong(&m, &a.offsets);
        let exprs: Vec<_> = p.equation_exprs().into_iter().map(|(_, e)| e).collect();
        let closure = symbol_closure(&exprs);
        for sym in closure {
            if let Symbol::Var { id, order } = sym {
                assert!(order <= a.offsets.d[id.0]);
            }
        }
    }
}
