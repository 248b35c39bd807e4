//! Kernels, cokernels, canonical decompositions and semi-abelian condition
//! audits in concrete linear-algebra categories.
//!
//! Layers, bottom up: [`linalg`] (exact rational and integer linear algebra),
//! [`category`] (the preabelian interface and derived constructions),
//! [`backends`] (concrete categories), [`conditions`] (per-instance checks),
//! [`audit`] (randomized campaigns) and [`report`] (JSON reports and the
//! command implementations).

pub mod audit;
pub mod backends;
pub mod category;
pub mod conditions;
pub mod linalg;
pub mod report;
