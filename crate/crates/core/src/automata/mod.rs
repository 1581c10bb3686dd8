//! Deterministic generators and the core language algebra over them.

mod format;
mod generator;
mod ops;

pub use format::{emit_generator, parse_description, parse_generator};
pub use generator::{Generator, GeneratorBuilder, Mode, StateId};
pub use ops::{
    check_inclusion, compare_languages, is_nonconflicting, is_prefix_closed, languages_equal, prefix_closure,
    shortest_word_to, sync_product, Comparison, Relation,
};

pub(crate) use generator::{build_reachable, build_reachable_nodes};
pub(crate) use ops::event_map;
