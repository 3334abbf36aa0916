//! Fixtures shared by the benchmarks: the two figure setups.

use mi_spectra_core::{DispersionSymbol, HillConfig, WaveParams};

pub struct Case {
    pub name: &'static str,
    pub symbol: DispersionSymbol,
    pub params: WaveParams,
    pub hill: HillConfig,
}

fn hill(window: f64, count: usize) -> HillConfig {
    HillConfig {
        fourier_modes: 5,
        mu_min: -window,
        mu_max: window,
        mu_count: count,
        stokes_order: 9,
        amplitude: 0.02,
    }
}

/// Focusing mKdV with 201 Floquet exponents.
pub fn mkdv() -> Case {
    Case {
        name: "mkdv",
        symbol: DispersionSymbol::from_spec("kdv").expect("builtin"),
        params: WaveParams::new(3, -1, 1.5).expect("valid"),
        hill: hill(0.01, 201),
    }
}

/// Whitham with power `n` and the matching Floquet window.
pub fn whitham(n: u32) -> Case {
    let window = match n {
        2 => 0.5,
        3 => 0.06,
        4 => 1e-4,
        _ => 0.002,
    };
    Case {
        name: ["whitham_n2", "whitham_n3", "whitham_n4", "whitham_n5"]
            [(n.clamp(2, 5) - 2) as usize],
        symbol: DispersionSymbol::from_spec("whitham").expect("builtin"),
        params: WaveParams::new(n, 1, 1.5).expect("valid"),
        hill: hill(window, 210),
    }
}
