#![no_std]

extern crate alloc;

pub mod algebra;
pub mod codec;
pub mod pipeline;
pub mod protocol;
pub mod scheme;
