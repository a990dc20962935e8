//! Exact computations around the cscK obstruction on Kähler manifolds:
//! intersection numbers on a projective bundle, Chern number inequalities,
//! and the curvature-norm identities behind them.

pub mod cli;
pub mod closed_forms;
pub mod exact;
pub mod identity;
pub mod inequality;
pub mod ring;
pub mod tensor;
