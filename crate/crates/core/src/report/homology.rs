use serde::{Deserialize, Serialize};

use crate::homology::{build_plan, change_basis, kernel_basis, HomologyClass, HomologyError};

/// Big integers are written as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRow {
    pub class: (i64, i64),
    pub c: String,
    pub image: String,
    pub gcd: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub input: Vec<(i64, i64)>,
    /// Present when some class had zero first coordinate and the basis was
    /// changed first. Rows act on column vectors `(a, b)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_change: Option<[[i64; 2]; 2]>,
    /// Classes in the coordinates used, zero classes removed.
    pub classes: Vec<(i64, i64)>,
    pub discarded_zero: usize,
    pub m: String,
    pub n: String,
    pub images: Vec<ImageRow>,
    pub unit_preimage: (String, String),
    pub kernel_k: u64,
    pub kernel_basis: [(String, String); 2],
}

fn pair(c: &HomologyClass) -> (i64, i64) {
    (c.a, c.b)
}

/// Builds the plan, changing basis first when a class lies on the second
/// axis.
pub fn run_homology(classes: &[HomologyClass], k: u64) -> Result<HomologyReport, HomologyError> {
    let (used, basis_change) = match build_plan(classes) {
        Err(HomologyError::ZeroFirstCoordinate { .. }) => {
            let change = change_basis(classes);
            (change.classes, Some(change.matrix))
        }
        _ => (classes.to_vec(), None),
    };
    let plan = build_plan(&used)?;
    let discarded_zero = classes.iter().filter(|c| c.is_zero()).count();
    let (ua, ub) = plan.unit_preimage();
    let [(k1a, k1b), (k2a, k2b)] = kernel_basis(&plan, k);
    Ok(HomologyReport {
        input: classes.iter().map(pair).collect(),
        basis_change,
        classes: plan.classes.iter().map(pair).collect(),
        discarded_zero,
        m: plan.m.to_string(),
        n: plan.n.to_string(),
        images: plan
            .images
            .iter()
            .map(|i| ImageRow { class: pair(&i.class), c: i.c.to_string(), image: i.image.to_string(), gcd: i.gcd.to_string() })
            .collect(),
        unit_preimage: (ua.to_string(), ub.to_string()),
        kernel_k: k,
        kernel_basis: [(k1a.to_string(), k1b.to_string()), (k2a.to_string(), k2b.to_string())],
    })
}

/// Reads `[[a, b], ...]`. Blank input is an empty list.
pub fn parse_classes(text: &str) -> Result<Vec<HomologyClass>, serde_json::Error> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let pairs: Vec<(i64, i64)> = serde_json::from_str(text)?;
    Ok(pairs.into_iter().map(|(a, b)| HomologyClass::new(a, b)).collect())
}
