pub mod cmp;
pub mod config;
pub mod fo_order;
pub mod gen;
pub mod lambda_order;
pub mod oracle;
pub mod ordinal;
pub mod poly;
pub mod props;
pub mod syntax;
pub mod term;
