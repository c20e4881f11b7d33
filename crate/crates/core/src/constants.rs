//! Physical constants (CODATA 2018).

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Planck constant, J·s.
    pub h: f64,
    /// Speed of light in vacuum, m/s.
    pub c: f64,
    /// Elementary charge, C.
    pub e: f64,
    /// Boltzmann constant, J/K.
    pub k: f64,
    /// Vacuum permittivity, F/m.
    pub epsilon_0: f64,
}

pub const CODATA: PhysicalConstants = PhysicalConstants {
    h: 6.626_070_15e-34,
    c: 299_792_458.0,
    e: 1.602_176_634e-19,
    k: 1.380_649e-23,
    epsilon_0: 8.854_187_812_8e-12,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA
    }
}
