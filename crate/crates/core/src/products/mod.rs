//! Compositional word-problem oracles.

pub mod kb;
pub mod kbleaf;
pub mod oracle;
pub mod product;
pub mod subgroup;
pub mod tietze;

pub use kb::{KbBudget, RuleOrdering};
pub use kbleaf::{kb_oracle, KbMode, KbOracle};
pub use oracle::{cyclic_oracle, free_oracle, CachedOracle, Decision, GroupOracle, Inconclusive, MappedOracle, SharedOracle};
pub use product::{amalgam_oracle, free_product_oracle, Amalgamation, Product, Side, SyllableForm};
pub use subgroup::{subgroup_oracle, SharedSubgroup, SubgroupOracle};
pub use tietze::{tietze_simplify, TietzeReduction};
