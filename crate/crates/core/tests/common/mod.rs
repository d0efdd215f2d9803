//! Checks shared between test targets and the acceptance harness.

#![allow(dead_code)]

pub mod examples;
pub mod props;
