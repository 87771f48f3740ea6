//! Deterministic SVG drawings of a configuration with optional orbit points
//! and a closed cycle polygon. Coordinates are converted to floating point
//! only here, with 12 significant digits.

use std::fmt::Write as _;

use betweenness_core::action::{ActionError, ConfigK};
use betweenness_core::geometry::{to_f64, RPoint};
use betweenness_core::hull::{collinear_hull, EndpointSide};
use betweenness_core::{SignatureVector, Word};
use thiserror::Error;

const SIG_DIGITS: i32 = 12;
const SIZE_PX: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("{0} is not a cycle of this configuration")]
    NotACycle(SignatureVector),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// A cycle whose polygon has been checked to close exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifiedCycle {
    pub v: SignatureVector,
    pub word: Word,
    /// Polygon vertices, first vertex not repeated at the end.
    pub vertices: Vec<RPoint>,
}

impl VerifiedCycle {
    /// Follows a word of signature `v` from `start`, or from the first
    /// off-line test point. Refuses unless `v` is a cycle and the path closes.
    #[allow(clippy::result_large_err)]
    pub fn new(
        config: &ConfigK,
        v: &SignatureVector,
        start: Option<&RPoint>,
    ) -> Result<Self, RenderError> {
        if !config.is_cycle(v)? {
            return Err(RenderError::NotACycle(v.clone()));
        }
        let word = v
            .canonical_word()
            .or_else(|_| (-v).canonical_word())
            .or_else(|_| v.realize())
            .map_err(ActionError::from)?;
        let start = match start {
            Some(p) => p.clone(),
            None => config.test_point()?,
        };
        let mut vertices = config.trajectory(&start, &word)?;
        if vertices.last() != Some(&start) || v.is_zero() {
            return Err(RenderError::NotACycle(v.clone()));
        }
        vertices.pop();
        Ok(VerifiedCycle {
            v: v.clone(),
            word,
            vertices,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Overlays {
    pub orbit: Vec<RPoint>,
    pub cycle: Option<VerifiedCycle>,
}

/// `x` with 12 significant digits, without exponent or trailing zeros.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (SIG_DIGITS - 1 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// Screen coordinates: the y axis points down in SVG.
fn xy(p: (f64, f64)) -> (String, String) {
    (fmt_num(p.0), fmt_num(-p.1))
}

pub fn render_svg(config: &ConfigK, overlays: &Overlays) -> String {
    let circle = config.circle();
    let (cx, cy) = circle.center().to_f64();
    let r = to_f64(circle.radius_sq()).sqrt();
    let margin = 1.1 * r;
    let stroke = fmt_num(r / 200.0);
    let dot = fmt_num(r / 60.0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE_PX}" height="{SIZE_PX}" viewBox="{} {} {} {}">"#,
        fmt_num(cx - margin),
        fmt_num(-cy - margin),
        fmt_num(2.0 * margin),
        fmt_num(2.0 * margin)
    );
    let (x, y) = xy((cx, cy));
    let _ = writeln!(
        out,
        r#"  <circle class="circle" cx="{x}" cy="{y}" r="{}" fill="none" stroke="black" stroke-width="{stroke}"/>"#,
        fmt_num(r)
    );

    if let Ok(hull) = collinear_hull(config) {
        if let (Some(a), Some(b)) = (
            hull.endpoint_approx(EndpointSide::Low),
            hull.endpoint_approx(EndpointSide::High),
        ) {
            let ((x1, y1), (x2, y2)) = (xy(a), xy(b));
            let _ = writeln!(
                out,
                r#"  <line class="interior-line" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="gray" stroke-width="{stroke}" stroke-dasharray="{} {}"/>"#,
                fmt_num(r / 50.0),
                fmt_num(r / 50.0)
            );
        }
    }

    if let Some(cycle) = &overlays.cycle {
        let pts: Vec<String> = cycle
            .vertices
            .iter()
            .map(|p| {
                let (x, y) = xy(p.to_f64());
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"  <polygon class="cycle" data-word="{}" points="{}" fill="none" stroke="firebrick" stroke-width="{stroke}"/>"#,
            cycle.word,
            pts.join(" ")
        );
    }

    for p in &overlays.orbit {
        let (x, y) = xy(p.to_f64());
        let _ = writeln!(
            out,
            r#"  <circle class="orbit" cx="{x}" cy="{y}" r="{dot}" fill="steelblue"/>"#
        );
    }

    for (k, p) in config.points().iter().enumerate() {
        let (x, y) = xy(p.to_f64());
        let _ = writeln!(
            out,
            r#"  <circle class="point" id="c{}" cx="{x}" cy="{y}" r="{dot}" fill="black"/>"#,
            k + 1
        );
    }
    out.push_str("</svg>\n");
    out
}
