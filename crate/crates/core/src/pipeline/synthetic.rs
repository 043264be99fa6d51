//! Synthetic stand-in for a WDI extract, for demos and tests.
//!
//! Log GDP, FDI and remittances share one stochastic trend; log aid follows
//! its own. Deviations from the trends are stationary AR(1) processes.

use crate::mc;

pub const GDP_CODE: &str = "NY.GDP.MKTP.CD";
pub const FDI_CODE: &str = "BX.KLT.DINV.CD.WD";
pub const REM_CODE: &str = "BX.TRF.PWKR.CD.DT";
pub const AID_CODE: &str = "DT.ODA.ALLD.CD";
pub const GROWTH_CODE: &str = "NY.GDP.MKTP.KD.ZG";

fn ar1(e: &[f64], phi: f64, sd: f64) -> Vec<f64> {
    let mut prev = 0.0;
    e.iter()
        .map(|x| {
            prev = phi * prev + sd * x;
            prev
        })
        .collect()
}

/// Wide CSV over `first..=last` with WDI indicator codes as headers.
pub fn synthetic_wdi_csv(seed: u64, first: i32, last: i32) -> String {
    let n = (last - first + 1).max(0) as usize;
    let mut rng = mc::stream(seed, 0);
    let w: Vec<f64> = mc::random_walk(&mut rng, n, 0.0)
        .iter()
        .enumerate()
        .map(|(t, x)| 0.06 * t as f64 + 0.08 * x)
        .collect();
    let v: Vec<f64> = mc::random_walk(&mut rng, n, 0.0)
        .iter()
        .enumerate()
        .map(|(t, x)| 0.02 * t as f64 + 0.12 * x)
        .collect();
    let u: Vec<Vec<f64>> = [(0.3, 0.02), (0.3, 0.08), (0.3, 0.06), (0.3, 0.08)]
        .iter()
        .map(|(phi, sd)| ar1(&mc::normals(&mut rng, n), *phi, *sd))
        .collect();
    let noise = mc::normals(&mut rng, n);

    let lngdp: Vec<f64> = (0..n).map(|t| 23.5 + w[t] + u[0][t]).collect();
    let lnfdi: Vec<f64> = (0..n).map(|t| 17.0 + 1.8 * w[t] + u[1][t]).collect();
    let lnrem: Vec<f64> = (0..n).map(|t| 19.5 + 2.2 * w[t] + u[2][t]).collect();
    let lnaid: Vec<f64> = (0..n).map(|t| 21.0 + v[t] + u[3][t]).collect();

    let mut out = format!("year,{GDP_CODE},{FDI_CODE},{REM_CODE},{AID_CODE},{GROWTH_CODE}\n");
    for t in 0..n {
        let growth = if t == 0 {
            6.0
        } else {
            100.0 * (lngdp[t] - lngdp[t - 1])
        } + 0.5 * noise[t];
        out.push_str(&format!(
            "{},{:.0},{:.0},{:.0},{:.0},{:.4}\n",
            first + t as i32,
            lngdp[t].exp(),
            lnfdi[t].exp(),
            lnrem[t].exp(),
            lnaid[t].exp(),
            growth
        ));
    }
    out
}
