//! A workbench for executable computability constructions: exact arithmetic
//! in ℤ, ℤ[√d] and ℤ[i], canonical sparse polynomials, an algebra of
//! Diophantine sets with a bounded search oracle, the classical universal
//! enumeration with a diagonal demonstrator, the Pell/four-squares reductions
//! embedding ℕ in ℤ[√d] and ℤ in ℤ[i], and finite formal systems for the
//! Liar-style fixed-point theorems.

pub mod dioset;
pub mod enumeration;
pub mod formal;
pub mod syntax;
pub mod numtheory;
pub mod poly;
pub mod reduction;
pub mod rings;
pub mod search;
pub mod selfcheck;
