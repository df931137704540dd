pub mod complex;
pub mod conecx;
pub mod linalg;
pub mod localmodel;
pub mod monodromy;
pub mod toric;
pub mod trop;
pub mod weights;

#[cfg(any(test, feature = "test-support"))]
pub mod testing;
