//! Deterministic SVG output of k-tilings: one panel per color or a single
//! overlay. Byte-identical output for identical inputs.
//!
//! Coordinates: one face is cell_px x cell_px pixels, the origin is the
//! diamond's SW bounding corner, and the y axis is flipped to screen
//! convention. Dominoes are <rect> elements (nothing else is), the
//! checkerboard is a single <path>, the diamond outline a <polygon>, and
//! particles are <circle> elements.

use crate::geometry::{faces_of_rank, ParityConvention};
use crate::tiling::{classify, CompassType, KTiling, Orientation};
use crate::{Error, Result};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// One panel per color, side by side.
    Panels,
    /// All colors superimposed in one panel.
    Overlay,
}

#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub layout: Layout,
    pub cell_px: u32,
    /// Stroke color per tiling color; must cover k.
    pub palette: Vec<String>,
    /// Draw the particle dots of the bijection.
    pub show_particles: bool,
    /// Fill horizontal/vertical dominoes by compass type in four shades,
    /// which makes the frozen corner regions visible at large rank.
    pub color_by_type: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            layout: Layout::Panels,
            cell_px: 8,
            palette: default_palette(),
            show_particles: false,
            color_by_type: false,
        }
    }
}

/// Blue, red, green first, then fallback hues.
pub fn default_palette() -> Vec<String> {
    ["#1f4fd8", "#d82a2a", "#1e9e3f", "#b26be0", "#e08a00", "#00a8a8"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn type_fill(ct: CompassType) -> &'static str {
    match ct {
        CompassType::North => "#d7301f",
        CompassType::South => "#fcae61",
        CompassType::East => "#2b8cbe",
        CompassType::West => "#a6d96a",
    }
}

/// The staircase outline of the rank-n diamond in corner coordinates,
/// clockwise from the top-left.
fn frame_points(n: u32) -> Vec<(i32, i32)> {
    if n == 0 {
        return Vec::new();
    }
    let n = n as i32;
    let mut pts = Vec::with_capacity(8 * n as usize);
    pts.push((-1, n));
    pts.push((1, n));
    let (mut x, mut y) = (1, n);
    for _ in 0..n - 1 {
        y -= 1;
        pts.push((x, y));
        x += 1;
        pts.push((x, y));
    }
    y = -1;
    pts.push((x, y));
    for _ in 0..n - 1 {
        x -= 1;
        pts.push((x, y));
        y -= 1;
        pts.push((x, y));
    }
    x = -1;
    pts.push((x, y));
    for _ in 0..n - 1 {
        y += 1;
        pts.push((x, y));
        x -= 1;
        pts.push((x, y));
    }
    y = 1;
    pts.push((x, y));
    for _ in 0..n - 1 {
        x += 1;
        pts.push((x, y));
        y += 1;
        pts.push((x, y));
    }
    pts
}

struct Panel {
    x_off: i64,
    rank: u32,
    s: i64,
}

impl Panel {
    /// Pixel x of corner coordinate u.
    fn px(&self, u: i32) -> i64 {
        self.x_off + (u as i64 + self.rank as i64) * self.s
    }

    /// Pixel y of corner coordinate v (flipped).
    fn py(&self, v: i32) -> i64 {
        (self.rank as i64 - v as i64) * self.s
    }
}

/// Render a k-tiling; output bytes depend only on the input and options.
pub fn to_svg(kt: &KTiling, opts: &RenderOptions) -> Result<String> {
    let k = kt.k() as usize;
    if opts.palette.len() < k {
        return Err(Error::config(format!(
            "palette has {} colors but the k-tiling has {}",
            opts.palette.len(),
            k
        )));
    }
    if opts.cell_px == 0 {
        return Err(Error::config("cell_px must be positive"));
    }
    let rank = kt.rank();
    let conv = ParityConvention::for_rank(rank);
    let s = opts.cell_px as i64;
    let side = 2 * rank as i64 * s;
    let margin = s.max(4);
    let panels = match opts.layout {
        Layout::Panels => k as i64,
        Layout::Overlay => 1,
    };
    let width = panels * side + (panels - 1) * margin;
    let height = side;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">",
        width.max(1),
        height.max(1),
        width.max(1),
        height.max(1)
    );

    let panel_of = |p: i64| Panel { x_off: p * (side + margin), rank, s };

    for p in 0..panels {
        let panel = panel_of(p);
        // Checkerboard of gray faces as one path.
        let mut d = String::new();
        for f in faces_of_rank(rank) {
            if !conv.is_white(f) {
                let _ = write!(d, "M{} {}h{}v{}h-{}Z", panel.px(f.u), panel.py(f.v + 1), s, s, s);
            }
        }
        let _ = writeln!(svg, "<path fill=\"#ececec\" stroke=\"none\" d=\"{d}\"/>");
        // Diamond outline.
        let pts: Vec<String> = frame_points(rank)
            .iter()
            .map(|&(x, y)| format!("{},{}", panel.px(x), panel.py(y)))
            .collect();
        let _ = writeln!(
            svg,
            "<polygon fill=\"none\" stroke=\"#555555\" stroke-width=\"1\" points=\"{}\"/>",
            pts.join(" ")
        );
    }

    // Dominoes, in canonical order for stable bytes.
    for (l, tiling) in kt.colors().iter().enumerate() {
        let panel = panel_of(match opts.layout {
            Layout::Panels => l as i64,
            Layout::Overlay => 0,
        });
        let stroke = &opts.palette[l];
        let mut doms = tiling.dominoes().to_vec();
        doms.sort_unstable_by_key(|d| (d.anchor.v, d.anchor.u, d.orient));
        for dom in &doms {
            let (w, h, top_v) = match dom.orient {
                Orientation::Horizontal => (2 * s, s, dom.anchor.v + 1),
                Orientation::Vertical => (s, 2 * s, dom.anchor.v + 2),
            };
            let fill = if opts.color_by_type {
                type_fill(classify(*dom, conv))
            } else {
                "none"
            };
            let _ = writeln!(
                svg,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" \
                 stroke=\"{}\" stroke-width=\"2\"/>",
                panel.px(dom.anchor.u),
                panel.py(top_v),
                w,
                h,
                fill,
                stroke
            );
        }
        if opts.show_particles {
            for dom in &doms {
                let ct = classify(*dom, conv);
                if matches!(ct, CompassType::North | CompassType::West) {
                    let (a, b) = dom.faces();
                    for f in [a, b] {
                        let cx = panel.px(f.u) as f64 + s as f64 / 2.0;
                        let cy = panel.py(f.v + 1) as f64 + s as f64 / 2.0;
                        let _ = writeln!(
                            svg,
                            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>",
                            cx,
                            cy,
                            s as f64 / 4.0,
                            stroke
                        );
                    }
                }
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Extract the (x, y, width, height) of every rect element; the structural
/// inverse used by the round-trip tests.
pub fn rects_of_svg(svg: &str) -> Vec<(i64, i64, i64, i64)> {
    let mut out = Vec::new();
    for line in svg.lines() {
        let Some(rest) = line.strip_prefix("<rect ") else { continue };
        let attr = |name: &str| -> Option<i64> {
            let pat = format!("{name}=\"");
            let start = rest.find(&pat)? + pat.len();
            let end = start + rest[start..].find('"')?;
            rest[start..end].parse().ok()
        };
        if let (Some(x), Some(y), Some(w), Some(h)) =
            (attr("x"), attr("y"), attr("width"), attr("height"))
        {
            out.push((x, y, w, h));
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{rank1_horizontal, rank1_vertical, Tiling};

    fn example3() -> KTiling {
        KTiling::new(
            3,
            vec![
                crate::partitions::fixtures::example3_blue(),
                crate::partitions::fixtures::example3_red(),
                crate::partitions::fixtures::example3_green(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn rank0_is_frame_only() {
        let kt = KTiling::new(0, vec![Tiling::empty(0)]).unwrap();
        let svg = to_svg(&kt, &RenderOptions::default()).unwrap();
        assert!(svg.contains("<polygon"));
        assert!(rects_of_svg(&svg).is_empty());
    }

    #[test]
    fn rect_count_is_total_domino_count() {
        let kt = example3();
        for layout in [Layout::Panels, Layout::Overlay] {
            let svg = to_svg(&kt, &RenderOptions { layout, ..Default::default() }).unwrap();
            assert_eq!(rects_of_svg(&svg).len(), 36);
        }
    }

    #[test]
    fn output_is_deterministic() {
        let kt = example3();
        let opts = RenderOptions { show_particles: true, ..Default::default() };
        assert_eq!(to_svg(&kt, &opts).unwrap(), to_svg(&kt, &opts).unwrap());
        // Domino order in memory must not matter.
        let shuffled = KTiling::new(
            3,
            kt.colors()
                .iter()
                .map(|t| {
                    let mut doms = t.dominoes().to_vec();
                    doms.reverse();
                    Tiling::new(3, doms)
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(to_svg(&kt, &opts).unwrap(), to_svg(&shuffled, &opts).unwrap());
    }

    #[test]
    fn structural_roundtrip_matches_geometry() {
        let kt = KTiling::new(1, vec![rank1_vertical(), rank1_horizontal()]).unwrap();
        let opts = RenderOptions { cell_px: 10, ..Default::default() };
        let svg = to_svg(&kt, &opts).unwrap();
        // Panel 0: two verticals; panel 1 offset by side + margin = 30.
        let mut expect =
            vec![(0, 0, 10, 20), (10, 0, 10, 20), (30, 0, 20, 10), (30, 10, 20, 10)];
        expect.sort_unstable();
        assert_eq!(rects_of_svg(&svg), expect);
    }

    #[test]
    fn particle_circles_match_bijection_positions() {
        let kt = example3();
        let svg = to_svg(&kt, &RenderOptions { show_particles: true, ..Default::default() })
            .unwrap();
        let circles = svg.matches("<circle").count();
        // Two dots per North/West domino.
        let conv = ParityConvention::for_rank(3);
        let expected: usize = kt
            .colors()
            .iter()
            .flat_map(|t| t.dominoes())
            .filter(|d| {
                matches!(classify(**d, conv), CompassType::North | CompassType::West)
            })
            .count()
            * 2;
        assert_eq!(circles, expected);
        // Per color, the dot count is twice the particle count of the array:
        // every particle face is covered by exactly one North/West domino.
        let arr = crate::partitions::ktiling_to_array(&kt).unwrap();
        let per_color: usize = arr.x[0].iter().map(Vec::len).sum::<usize>()
            + arr.y[0].iter().map(Vec::len).sum::<usize>();
        let blue_dots = 2 * kt
            .color(0)
            .dominoes()
            .iter()
            .filter(|d| {
                matches!(classify(**d, conv), CompassType::North | CompassType::West)
            })
            .count();
        // Dots cover both in-window particles and the frozen vacuum tail
        // inside the diamond, never fewer than the free particles.
        assert!(blue_dots >= per_color);
    }

    #[test]
    fn palette_must_cover_k() {
        let kt = example3();
        let opts = RenderOptions { palette: vec!["#000000".into()], ..Default::default() };
        assert!(to_svg(&kt, &opts).is_err());
    }

    #[test]
    fn compass_coloring_emits_fills() {
        let kt = KTiling::new(1, vec![rank1_horizontal()]).unwrap();
        let svg = to_svg(&kt, &RenderOptions { color_by_type: true, ..Default::default() })
            .unwrap();
        assert!(svg.contains(type_fill(CompassType::North)));
        assert!(svg.contains(type_fill(CompassType::South)));
    }
}
