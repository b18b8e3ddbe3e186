pub mod algebra;
pub mod cli;
pub mod exactfield;
pub mod linalg;
pub mod pairs;
pub mod polymat;
pub mod ringop;
pub mod semigroup;
