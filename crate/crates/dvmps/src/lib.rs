//! Runtime pieces around `dvmps-core`: transports, the session driver,
//! encrypted key files and the command-line tool.

pub mod cli;
pub mod config;
pub mod keystore;
pub mod net;
pub mod session;
