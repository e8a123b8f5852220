pub mod algebra;
pub mod cluster;
pub mod derived;
pub mod dot;
pub mod error;
pub mod golden;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod modules;
pub mod presentation;
pub mod quiver;
pub mod repair;
pub mod slices;
pub mod translation;
pub mod verify;
