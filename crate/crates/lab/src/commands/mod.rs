pub mod coding;
pub mod composite;
pub mod divergence;
pub mod union;
