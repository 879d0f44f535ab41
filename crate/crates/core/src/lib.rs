pub mod cd;
pub mod cdp;
pub mod chain;
pub mod grid;
pub mod report;
pub mod signs;
pub mod witness;
