//! Ford domains for uniformizations of the (1,2)-compression body: the
//! isometric spheres of a loxodromic generator against a rank-two cusp
//! lattice, their visible faces and edges, certification, tunnel lengths,
//! and the homology bookkeeping for choosing filling slopes.

pub mod dd;
pub mod ford;
pub mod group;
pub mod homology;
pub mod moebius;
pub mod report;
pub mod tunnel;
