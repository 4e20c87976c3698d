//! Certified realizations of free products and HNN extensions inside
//! SL(n, Q), and the tower of such extensions that produces sharply
//! 2-transitive linear groups, verified on finite word balls.

pub mod config;
pub mod embed;
pub mod exactlin;
pub mod proximal;
pub mod tower;
pub mod verify;
pub mod words;
