//! Exact local computer algebra for matrices of formal power series:
//! standard bases over local orderings, finite determinacy bounds under the
//! usual equivalence groups, jet-group orbit and stabilizer equations, and a
//! separability test comparing tangent-image and tangent-space codimensions.
//! All arithmetic is exact, over the rationals or a prime field.

pub mod field;
pub mod ring;
pub mod sbasis;
pub mod determinacy;
pub mod orbit;
pub mod oracle;
pub mod job;
