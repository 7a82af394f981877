use serde::{Deserialize, Serialize};

use super::{parse_braid, parse_braid_spec, parse_pd, DiagramError, LinkDiagram};

/// One entry of a knot-table file. Entries carry a PD code; a braid spec in
/// the `"<strands>:<word>"` form may stand in for it (virtual knots).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotRecord {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pd: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braid: Option<String>,
}

impl KnotRecord {
    pub fn diagram(&self) -> Result<LinkDiagram, DiagramError> {
        match (&self.pd, &self.braid) {
            (Some(pd), _) => parse_pd(pd),
            (None, Some(b)) => {
                let (n, w) = parse_braid_spec(b)?;
                parse_braid(n, &w)
            }
            (None, None) => Err(DiagramError::Table(format!(
                "`{}` has neither pd nor braid",
                self.name
            ))),
        }
    }
}

/// Parses a JSON array of `{"name": .., "pd": ..}` records.
pub fn load_knot_table(json: &str) -> Result<Vec<KnotRecord>, DiagramError> {
    serde_json::from_str(json).map_err(|e| DiagramError::Table(e.to_string()))
}
