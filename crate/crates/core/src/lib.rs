pub mod automorph;
pub mod chain;
pub mod charseq;
pub mod cli;
pub mod numeric;
pub mod par;
pub mod poly;
pub mod semigroup;
