//! Reference computations that share no quadrature code with `casimir-core`,
//! used to cross-check it. The acceptance report lives in `tests/acceptance.rs`.

pub mod oracle;
