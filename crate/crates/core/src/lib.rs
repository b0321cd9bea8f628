pub mod analysis;
pub mod curves;
pub mod error;
pub mod moments;
pub mod mp;
pub mod roots;
pub mod sections;
pub mod specfun;
