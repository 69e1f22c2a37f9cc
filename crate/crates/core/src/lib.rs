//! Computability workbench.
//!
//! Gödel-style text coding, a step-exact register machine, exact-time
//! knowledge tables, a first-order proof toolkit, Kolmogorov-complexity
//! bounds, the `Reduce` fold over consistency oracles, and a dovetailing
//! universal-search engine for NP∩co-NP decision and factoring.

pub mod chaitin;
pub mod codec;
pub mod knowledge_table;
pub mod logic;
pub mod machine;
pub mod reduce;
pub mod registry;
pub mod search;
