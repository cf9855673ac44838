pub mod answer;
pub mod assemble;
pub mod eunitary;
pub mod factorise;
pub mod freegroup;
pub mod graph;
pub mod harness;
pub mod meu;
pub mod pmp;
pub mod presentation;
pub mod products;
pub mod stephen;
pub mod structure;
pub mod word;
