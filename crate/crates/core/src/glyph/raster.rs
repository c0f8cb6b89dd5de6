use std::path::Path;

use ab_glyph::{point, Font, FontVec, GlyphId, PxScale, ScaleFont};

use super::GlyphError;

/// Text rendered for every font's canonical image.
pub const MNEMONIC: &str = "Laseg Dhum Hloiv";
/// Pixel size used for stroke comparison across fonts.
pub const RENDER_SIZE: f32 = 50.0;
/// Blank border around the ink bounding box.
pub const CANVAS_MARGIN: usize = 4;

/// Binary image, row-major, `true` = ink.
#[derive(Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl std::fmt::Debug for Mask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mask {}x{}", self.width, self.height)?;
        for y in 0..self.height {
            let row: String = (0..self.width)
                .map(|x| if self.get(x, y) { '#' } else { '.' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl Mask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                m.data[y * width + x] = f(x, y);
            }
        }
        m
    }

    /// Parses rows of `#` (ink) and `.` (background).
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        Self::from_fn(width, height, |x, y| rows[y].as_bytes()[x] == b'#')
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        x < self.width && y < self.height && self.data[y * self.width + x]
    }

    /// Out-of-bounds coordinates read as background.
    pub fn get_signed(&self, x: isize, y: isize) -> bool {
        x >= 0 && y >= 0 && self.get(x as usize, y as usize)
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % self.width, i / self.width))
    }

    /// True when every ink pixel of `self` is ink in `other`.
    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlyphRaster {
    pub font_id: String,
    pub render_size: f32,
    pub mask: Mask,
}

/// Renders `text` with the font at `path`, binarized at half coverage.
///
/// The canvas is the tight ink bounding box plus [`CANVAS_MARGIN`] on each side.
pub fn render_text(
    font_id: &str,
    path: &Path,
    text: &str,
    size: f32,
) -> Result<GlyphRaster, GlyphError> {
    let data = std::fs::read(path).map_err(|e| GlyphError::FontLoad {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let font = FontVec::try_from_vec(data).map_err(|e| GlyphError::FontLoad {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let scale = PxScale::from(size);
    let scaled = font.as_scaled(scale);

    let mut outlines = Vec::new();
    let mut caret = 0.0f32;
    let mut prev: Option<GlyphId> = None;
    for c in text.chars() {
        let id = font.glyph_id(c);
        if id.0 == 0 && !c.is_whitespace() {
            return Err(GlyphError::GlyphMissing(c));
        }
        if let Some(p) = prev {
            caret += scaled.kern(p, id);
        }
        let glyph = id.with_scale_and_position(scale, point(caret, scaled.ascent()));
        caret += scaled.h_advance(id);
        prev = Some(id);
        if let Some(outlined) = font.outline_glyph(glyph) {
            outlines.push(outlined);
        }
    }
    if outlines.is_empty() {
        return Err(GlyphError::EmptyRender);
    }

    let min_x = outlines.iter().map(|o| o.px_bounds().min.x).fold(f32::INFINITY, f32::min);
    let min_y = outlines.iter().map(|o| o.px_bounds().min.y).fold(f32::INFINITY, f32::min);
    let max_x = outlines.iter().map(|o| o.px_bounds().max.x).fold(f32::NEG_INFINITY, f32::max);
    let max_y = outlines.iter().map(|o| o.px_bounds().max.y).fold(f32::NEG_INFINITY, f32::max);
    let width = (max_x - min_x).ceil() as usize + 2 * CANVAS_MARGIN;
    let height = (max_y - min_y).ceil() as usize + 2 * CANVAS_MARGIN;

    let mut coverage = vec![0.0f32; width * height];
    for o in &outlines {
        let b = o.px_bounds();
        let ox = (b.min.x - min_x) as usize + CANVAS_MARGIN;
        let oy = (b.min.y - min_y) as usize + CANVAS_MARGIN;
        o.draw(|x, y, c| {
            let (px, py) = (ox + x as usize, oy + y as usize);
            if px < width && py < height {
                let cell = &mut coverage[py * width + px];
                *cell = (*cell + c).min(1.0);
            }
        });
    }
    let mask = Mask::from_fn(width, height, |x, y| coverage[y * width + x] >= 0.5);
    if mask.count() == 0 {
        return Err(GlyphError::EmptyRender);
    }
    Ok(GlyphRaster {
        font_id: font_id.to_string(),
        render_size: size,
        mask,
    })
}
