pub mod counterexample;
pub mod dominance;
pub mod hopdist;
pub mod sweep;
