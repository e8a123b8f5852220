//! Hand-transcribed reference data, embedded at compile time.
//!
//! Module names in the transcribed windows list composition factors, so
//! `"231"` is the module with dimension vector `(1, 1, 1, 0)`.

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::presentation::Presentation;
use crate::quiver::Quiver;
use crate::slices::SliceCandidate;
use crate::translation::TranslationQuiver;

pub const RANK_FIVE_WINDOW: &str = include_str!("../data/rank5_window.json");
pub const D4_CYCLIC_WINDOW: &str = include_str!("../data/d4_cyclic_window.json");
pub const D4_CYCLIC_SLICES: &str = include_str!("../data/d4_cyclic_slices.json");
pub const RANK_THREE_DELETED: &str = include_str!("../data/rank3_deleted_window.json");

/// Every embedded file with its name.
pub const FILES: [(&str, &str); 4] = [
    ("rank5_window.json", RANK_FIVE_WINDOW),
    ("d4_cyclic_window.json", D4_CYCLIC_WINDOW),
    ("d4_cyclic_slices.json", D4_CYCLIC_SLICES),
    ("rank3_deleted_window.json", RANK_THREE_DELETED),
];

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn load_window(text: &str) -> Result<TranslationQuiver> {
    let g: TranslationQuiver = crate::io::parse(text)?;
    g.check_axioms()?;
    Ok(g)
}

/// Auslander-Reiten quiver of a rank five algebra with local slices that are
/// not sections.
pub fn rank_five_window() -> Result<TranslationQuiver> {
    load_window(RANK_FIVE_WINDOW)
}

/// The two local slices of [`rank_five_window`] that meet one orbit twice.
pub fn rank_five_slices() -> [SliceCandidate; 2] {
    [
        SliceCandidate::new(["321", "32", "432", "31", "531"]),
        SliceCandidate::new(["25", "5", "453", "53", "531"]),
    ]
}

/// Module category of the cyclic D4 cluster-tilted algebra, with the deleted
/// positions marked.
pub fn d4_cyclic_window() -> Result<TranslationQuiver> {
    load_window(D4_CYCLIC_WINDOW)
}

#[derive(Clone, Debug, Deserialize)]
pub struct NamedSlice {
    pub name: String,
    pub points: Vec<String>,
    pub quotient: Presentation,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CyclicSlices {
    pub algebra: Presentation,
    pub slices: Vec<NamedSlice>,
}

pub fn d4_cyclic_slices() -> Result<CyclicSlices> {
    let c: CyclicSlices = crate::io::parse(D4_CYCLIC_SLICES)?;
    c.algebra.validate()?;
    for s in &c.slices {
        s.quotient.validate()?;
    }
    Ok(c)
}

/// A window of `ZQ` for a non-Dynkin quiver with two deleted points, and a
/// module lying on no local slice.
#[derive(Clone, Debug, Deserialize)]
pub struct DeletedWindow {
    pub quiver: Quiver,
    pub window: TranslationQuiver,
    pub rad_p1: String,
    pub p1: String,
    pub p2: String,
}

pub fn rank_three_deleted() -> Result<DeletedWindow> {
    let w: DeletedWindow = crate::io::parse(RANK_THREE_DELETED)?;
    w.window.check_axioms()?;
    Ok(w)
}

/// Dimension vector read off a composition-factor name over vertices `1..=n`.
pub fn factor_dimension_vector(name: &str, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for c in name.chars() {
        if let Some(k) = c.to_digit(10) {
            if (1..=n).contains(&(k as usize)) {
                d[k as usize - 1] += 1;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_file_loads() {
        let r5 = rank_five_window().unwrap();
        assert_eq!((r5.len(), r5.arrows().len()), (14, 18));
        let d4 = d4_cyclic_window().unwrap();
        assert_eq!((d4.len(), d4.arrows().len()), (12, 16));
        assert_eq!(d4_cyclic_slices().unwrap().slices.len(), 3);
        let r3 = rank_three_deleted().unwrap();
        assert!(r3.window.require(&r3.rad_p1).is_ok());
    }

    #[test]
    fn factor_names() {
        assert_eq!(factor_dimension_vector("4231", 4), vec![1, 1, 1, 1]);
        assert_eq!(factor_dimension_vector("14", 4), vec![1, 0, 0, 1]);
    }
}
