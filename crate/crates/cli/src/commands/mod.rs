//! One module per subcommand; each returns a [`crate::out::Report`].

pub mod arith;
pub mod margulis;
pub mod params;
pub mod slice;
pub mod tables;
pub mod volume;
pub mod word;
