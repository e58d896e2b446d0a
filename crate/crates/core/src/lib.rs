//! Tours of a symmetric instance as triangle selections on the bipartite
//! triangle-edge incidence graph, where each city's triangles form a group.
//!
//! A set of triangles whose incidence subgraph is a tree, with every edge
//! in at most two triangles, disk-sized counts and a path-shaped link at
//! every city, is a triangulated disk whose boundary is a Hamiltonian
//! cycle. Maximizing incidence profit minus edge cost over such sets is
//! the same as minimizing tour length.

pub mod admissibility;
pub mod complex;
pub mod encode;
pub mod error;
pub mod ilp;
pub mod instance;
pub mod objective;
pub mod solver;

pub use admissibility::{
    boundary, check_admissible, decode_tour, induce_selection, vertex_star_euler, Constraint, Selection, SelectionFile,
    Verdict, Violation, Witness,
};
pub use complex::{delaunay_candidates, full_complex, restricted_complex, triangle_edges, Complex, Edge, Triangle};
pub use encode::{fan_encode, fan_triangles, Tour};
pub use error::{Error, Result};
pub use ilp::{emit_lp, validate_external, IlpModel};
pub use instance::{parse_tsplib, Instance};
pub use objective::{check_boundary_identity, net_weight, tour_length, ObjectiveBreakdown};
pub use solver::{solve_exact, tsp_oracle_bruteforce, tsp_oracle_held_karp, SolveOptions, SolveReport, SolveStatus};
