pub mod model;
pub mod specfun;
pub mod spectrum;
pub mod wavefun;
pub mod oracle;
