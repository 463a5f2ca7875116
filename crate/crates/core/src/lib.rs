pub mod document;
pub mod cli;
pub mod error;
pub mod kostant;
pub mod linalg;
pub mod operator;
pub mod oracle;
pub mod poly;
pub mod prolong;
pub mod scalar;
pub mod symplectic;

pub use error::{Error, Result};
pub use scalar::Field;

pub type Rational = num_rational::BigRational;
pub type QMatrix = linalg::Matrix<Rational>;
pub type QSubspace = linalg::Subspace<Rational>;
pub type QVec = linalg::SparseVec<Rational>;
pub type QPolynomial = poly::Polynomial<Rational>;
pub type QOperator = operator::DarbouxOperator<Rational>;
pub type QSection = operator::PolySection<Rational>;
pub type QSymplecticSpace = symplectic::SymplecticSpace<Rational>;
pub type QChain = prolong::ProlongationChain<Rational>;
pub type QConnection = prolong::FlatConnection<Rational>;
