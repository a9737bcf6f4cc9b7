//! Finite groups presented as Cayley tables.

mod catalog;
mod families;
mod iso;
mod recognize;
mod subgroups;
mod table;

pub use catalog::{
    catalog, group_by_name, groups_of_order, import_tables, parse_tables, write_tables, TableRecord,
};
pub use families::{
    alternating_group, cyclic_group, dicyclic_group, dihedral_group, direct_product, symmetric_group,
};
pub use iso::are_isomorphic;
pub(crate) use iso::find_isomorphism;
pub(crate) use recognize::is_latin_cells;
pub use recognize::{is_group_table, is_latin_square, quadrangle_criterion};
pub use subgroups::{
    is_normal, is_simple, subgroups, subgroups_with_limit, SubgroupCount, SubgroupLattice,
    DEFAULT_SUBGROUP_LIMIT,
};
pub use table::{GroupTable, Subgroup};
