//! Occupancy-grid world model: map ingestion, polygonal obstacle extraction
//! with representative points and homotopy rays, footprint collision checking
//! and grid shortest paths for tether initialisation.

use std::collections::BinaryHeap;

use crate::error::Error;
use crate::geometry::{
    clip_segment_to_rect, polygon_intersects_rect, segments_intersect, Point2, Polygon, EPS,
};

/// Occupancy grid. Cell (col, row) covers the world square
/// [col*res, (col+1)*res] x [row*res, (row+1)*res]; row 0 sits at y = 0.
/// Everything outside the grid counts as occupied.
#[derive(Debug, Clone)]
pub struct GridMap {
    pub width: usize,
    pub height: usize,
    pub resolution: f64,
    occ: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFormat {
    AsciiGrid,
    Pgm,
}

impl GridMap {
    pub fn new(width: usize, height: usize, resolution: f64) -> Self {
        Self {
            width,
            height,
            resolution,
            occ: vec![false; width * height],
        }
    }

    pub fn set(&mut self, col: usize, row: usize, occupied: bool) {
        self.occ[row * self.width + col] = occupied;
    }

    pub fn is_occupied(&self, col: i64, row: i64) -> bool {
        if col < 0 || row < 0 || col >= self.width as i64 || row >= self.height as i64 {
            return true;
        }
        self.occ[row as usize * self.width + col as usize]
    }

    pub fn cell_of(&self, p: Point2) -> (i64, i64) {
        (
            (p.x / self.resolution).floor() as i64,
            (p.y / self.resolution).floor() as i64,
        )
    }

    pub fn cell_center(&self, col: i64, row: i64) -> Point2 {
        Point2::new(
            (col as f64 + 0.5) * self.resolution,
            (row as f64 + 0.5) * self.resolution,
        )
    }

    pub fn load(bytes: &[u8], format: GridFormat) -> Result<GridMap, Error> {
        match format {
            GridFormat::AsciiGrid => Self::load_ascii(bytes),
            GridFormat::Pgm => Self::load_pgm(bytes),
        }
    }

    /// Line 1 is "W H", followed by H rows of W characters with row 0 first
    /// (the bottom of the map). '#' marks occupied, '.' free.
    fn load_ascii(bytes: &[u8]) -> Result<GridMap, Error> {
        let text = std::str::from_utf8(bytes).map_err(|_| Error::MapParse {
            line: 0,
            reason: "not valid UTF-8".into(),
        })?;
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::MapParse {
            line: 1,
            reason: "missing header".into(),
        })?;
        let mut it = header.split_whitespace();
        let parse_dim = |tok: Option<&str>| -> Result<usize, Error> {
            tok.and_then(|t| t.parse::<usize>().ok())
                .filter(|&v| v >= 1)
                .ok_or(Error::MapParse {
                    line: 1,
                    reason: format!("bad header `{header}`"),
                })
        };
        let width = parse_dim(it.next())?;
        let height = parse_dim(it.next())?;
        let mut map = GridMap::new(width, height, 1.0);
        for row in 0..height {
            let line = lines.next().ok_or(Error::MapParse {
                line: row + 2,
                reason: "missing row".into(),
            })?;
            let chars: Vec<char> = line.trim_end().chars().collect();
            if chars.len() != width {
                return Err(Error::MapParse {
                    line: row + 2,
                    reason: format!("expected {width} cells, found {}", chars.len()),
                });
            }
            for (col, &ch) in chars.iter().enumerate() {
                match ch {
                    '#' => map.set(col, row, true),
                    '.' => {}
                    other => {
                        return Err(Error::MapParse {
                            line: row + 2,
                            reason: format!("unexpected character `{other}`"),
                        })
                    }
                }
            }
        }
        Ok(map)
    }

    /// P2/P5 PGM; a cell is occupied when its value is below 128.
    fn load_pgm(bytes: &[u8]) -> Result<GridMap, Error> {
        let mut pos = 0usize;
        let mut line_no = 1usize;
        let mut tokens: Vec<(usize, String)> = Vec::new(); // (line, token) header tokens
        // Tokenise the header (magic, width, height, maxval), skipping comments.
        while tokens.len() < 4 && pos < bytes.len() {
            let b = bytes[pos];
            if b == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                if b == b'\n' {
                    line_no += 1;
                }
                pos += 1;
            } else {
                let start = pos;
                while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                tokens.push((line_no, String::from_utf8_lossy(&bytes[start..pos]).into()));
            }
        }
        if tokens.len() < 4 {
            return Err(Error::MapParse {
                line: line_no,
                reason: "truncated PGM header".into(),
            });
        }
        let magic = tokens[0].1.as_str();
        if magic != "P2" && magic != "P5" {
            return Err(Error::MapParse {
                line: tokens[0].0,
                reason: format!("unsupported magic `{magic}`"),
            });
        }
        let dim = |i: usize| -> Result<usize, Error> {
            tokens[i].1.parse::<usize>().map_err(|_| Error::MapParse {
                line: tokens[i].0,
                reason: format!("bad number `{}`", tokens[i].1),
            })
        };
        let width = dim(1)?;
        let height = dim(2)?;
        let _maxval = dim(3)?;
        let mut values: Vec<u16> = Vec::with_capacity(width * height);
        if magic == "P2" {
            let rest = String::from_utf8_lossy(&bytes[pos..]).into_owned();
            for tok in rest.split_whitespace() {
                let v = tok.parse::<u16>().map_err(|_| Error::MapParse {
                    line: line_no,
                    reason: format!("bad sample `{tok}`"),
                })?;
                values.push(v);
            }
        } else {
            pos += 1; // single whitespace after maxval
            values.extend(bytes[pos..].iter().map(|&b| b as u16));
        }
        if values.len() < width * height {
            return Err(Error::MapParse {
                line: line_no,
                reason: format!(
                    "expected {} samples, found {}",
                    width * height,
                    values.len()
                ),
            });
        }
        let mut map = GridMap::new(width, height, 1.0);
        // PGM rasters are stored top row first; row 0 of the map is at y = 0.
        for r in 0..height {
            for c in 0..width {
                let v = values[r * width + c];
                if v < 128 {
                    map.set(c, height - 1 - r, true);
                }
            }
        }
        Ok(map)
    }

    /// Conservative rasterised footprint collision check: any occupied cell
    /// whose closed square touches the polygon makes it unfree.
    pub fn is_footprint_free(&self, fp: &Polygon) -> bool {
        let (lo, hi) = fp.bbox();
        let res = self.resolution;
        let c0 = (lo.x / res).floor() as i64;
        let c1 = (hi.x / res).floor() as i64;
        let r0 = (lo.y / res).floor() as i64;
        let r1 = (hi.y / res).floor() as i64;
        for row in r0..=r1 {
            for col in c0..=c1 {
                if !self.is_occupied(col, row) {
                    continue;
                }
                let x0 = col as f64 * res;
                let y0 = row as f64 * res;
                if polygon_intersects_rect(fp, x0, y0, x0 + res, y0 + res) {
                    return false;
                }
            }
        }
        true
    }

    /// True when the open segment passes through the interior of any occupied
    /// cell. Cell squares are shrunk by a small epsilon so that taut chains
    /// touching obstacle corners do not count as collisions.
    pub fn segment_hits_obstacle(&self, a: Point2, b: Point2) -> bool {
        let res = self.resolution;
        let c0 = ((a.x.min(b.x)) / res).floor() as i64;
        let c1 = ((a.x.max(b.x)) / res).floor() as i64;
        let r0 = ((a.y.min(b.y)) / res).floor() as i64;
        let r1 = ((a.y.max(b.y)) / res).floor() as i64;
        for row in r0..=r1 {
            for col in c0..=c1 {
                if !self.is_occupied(col, row) {
                    continue;
                }
                let x0 = col as f64 * res + EPS;
                let y0 = row as f64 * res + EPS;
                let x1 = (col + 1) as f64 * res - EPS;
                let y1 = (row + 1) as f64 * res - EPS;
                if clip_segment_to_rect(a, b, x0, y0, x1, y1).is_some() {
                    return true;
                }
                // Edges shared by two occupied cells are interior cracks, not
                // grazeable boundary; block them (minus the corner endpoints,
                // which remain wrappable).
                let (cx, cy) = (col as f64 * res, row as f64 * res);
                if self.is_occupied(col - 1, row)
                    && segments_intersect(
                        a,
                        b,
                        Point2::new(cx, cy + EPS),
                        Point2::new(cx, cy + res - EPS),
                    )
                {
                    return true;
                }
                if self.is_occupied(col, row - 1)
                    && segments_intersect(
                        a,
                        b,
                        Point2::new(cx + EPS, cy),
                        Point2::new(cx + res - EPS, cy),
                    )
                {
                    return true;
                }
            }
        }
        false
    }

    /// True when the polygon overlaps the interior of any occupied cell.
    /// Cells are shrunk by epsilon, so touching a corner or grazing along a
    /// cell edge does not count.
    pub fn polygon_hits_obstacle(&self, poly: &Polygon) -> bool {
        let (lo, hi) = poly.bbox();
        let res = self.resolution;
        let c0 = (lo.x / res).floor() as i64;
        let c1 = (hi.x / res).floor() as i64;
        let r0 = (lo.y / res).floor() as i64;
        let r1 = (hi.y / res).floor() as i64;
        for row in r0..=r1 {
            for col in c0..=c1 {
                if !self.is_occupied(col, row) {
                    continue;
                }
                let x0 = col as f64 * res + EPS;
                let y0 = row as f64 * res + EPS;
                if polygon_intersects_rect(poly, x0, y0, x0 + res - 2.0 * EPS, y0 + res - 2.0 * EPS)
                {
                    return true;
                }
            }
        }
        false
    }

    /// 8-connected Dijkstra over cell centres. Diagonal moves are refused when
    /// either orthogonal neighbour is occupied, so the polyline never clips an
    /// obstacle corner.
    pub fn shortest_grid_path(&self, from: Point2, to: Point2) -> Result<Vec<Point2>, Error> {
        let (fc, fr) = self.cell_of(from);
        let (tc, tr) = self.cell_of(to);
        if self.is_occupied(fc, fr) || self.is_occupied(tc, tr) {
            return Err(Error::NoPath);
        }
        if (fc, fr) == (tc, tr) {
            return Ok(vec![from]);
        }
        let idx = |c: i64, r: i64| (r as usize) * self.width + c as usize;
        let mut dist = vec![f64::INFINITY; self.width * self.height];
        let mut prev: Vec<u32> = vec![u32::MAX; self.width * self.height];
        let start = idx(fc, fr);
        dist[start] = 0.0;
        #[derive(PartialEq)]
        struct Entry(f64, i64, i64);
        impl Eq for Entry {}
        impl Ord for Entry {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                other
                    .0
                    .total_cmp(&self.0)
                    .then(other.1.cmp(&self.1))
                    .then(other.2.cmp(&self.2))
            }
        }
        impl PartialOrd for Entry {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }
        let mut heap = BinaryHeap::new();
        heap.push(Entry(0.0, fc, fr));
        while let Some(Entry(d, c, r)) = heap.pop() {
            let i = idx(c, r);
            if d > dist[i] {
                continue;
            }
            if (c, r) == (tc, tr) {
                break;
            }
            for dc in -1i64..=1 {
                for dr in -1i64..=1 {
                    if dc == 0 && dr == 0 {
                        continue;
                    }
                    let (nc, nr) = (c + dc, r + dr);
                    if self.is_occupied(nc, nr) {
                        continue;
                    }
                    if dc != 0 && dr != 0 && (self.is_occupied(c + dc, r) || self.is_occupied(c, r + dr))
                    {
                        continue;
                    }
                    let step = if dc != 0 && dr != 0 {
                        std::f64::consts::SQRT_2
                    } else {
                        1.0
                    } * self.resolution;
                    let nd = d + step;
                    let ni = idx(nc, nr);
                    if nd < dist[ni] - 1e-12 {
                        dist[ni] = nd;
                        prev[ni] = i as u32;
                        heap.push(Entry(nd, nc, nr));
                    }
                }
            }
        }
        let goal = idx(tc, tr);
        if dist[goal].is_infinite() {
            return Err(Error::NoPath);
        }
        let mut cells = vec![goal];
        while *cells.last().unwrap() != start {
            cells.push(prev[*cells.last().unwrap()] as usize);
        }
        cells.reverse();
        let mut pts: Vec<Point2> = vec![from];
        for &i in &cells[1..cells.len() - 1] {
            pts.push(self.cell_center((i % self.width) as i64, (i / self.width) as i64));
        }
        pts.push(to);
        Ok(pts)
    }
}

/// One 4-connected occupied component with its cell-corner boundary polygon,
/// representative point and upward homotopy ray.
#[derive(Debug, Clone)]
pub struct ObstaclePolygon {
    pub id: usize,
    pub boundary: Polygon,
    pub representative: Point2,
}

impl ObstaclePolygon {
    /// The homotopy ray is the vertical half-line from the representative
    /// point in +y.
    pub fn ray_x(&self) -> f64 {
        self.representative.x
    }
}

/// Extracts one polygon per 4-connected occupied component. Boundary
/// vertices sit on cell corners; the representative point is the centre of
/// the lexicographically smallest occupied cell, with x-coordinates nudged
/// apart so the rays never coincide.
pub fn extract_obstacles(map: &GridMap) -> Vec<ObstaclePolygon> {
    let mut comp = vec![usize::MAX; map.width * map.height];
    let mut components: Vec<Vec<(i64, i64)>> = Vec::new();
    for r in 0..map.height as i64 {
        for c in 0..map.width as i64 {
            let i = r as usize * map.width + c as usize;
            if !map.is_occupied(c, r) || comp[i] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut cells = Vec::new();
            let mut stack = vec![(c, r)];
            comp[i] = id;
            while let Some((cc, cr)) = stack.pop() {
                cells.push((cc, cr));
                for (nc, nr) in [(cc - 1, cr), (cc + 1, cr), (cc, cr - 1), (cc, cr + 1)] {
                    if nc < 0 || nr < 0 || nc >= map.width as i64 || nr >= map.height as i64 {
                        continue;
                    }
                    let ni = nr as usize * map.width + nc as usize;
                    if map.is_occupied(nc, nr) && comp[ni] == usize::MAX {
                        comp[ni] = id;
                        stack.push((nc, nr));
                    }
                }
            }
            components.push(cells);
        }
    }

    let mut result: Vec<ObstaclePolygon> = Vec::new();
    for (id, cells) in components.iter().enumerate() {
        let boundary = trace_boundary(map, id, &comp);
        let (mc, mr) = *cells
            .iter()
            .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
            .unwrap();
        let representative = map.cell_center(mc, mr);
        result.push(ObstaclePolygon {
            id,
            boundary,
            representative,
        });
    }

    // De-duplicate ray x-coordinates with sub-cell offsets.
    loop {
        let mut changed = false;
        for i in 0..result.len() {
            for j in 0..i {
                if (result[i].representative.x - result[j].representative.x).abs() < EPS {
                    result[i].representative.x += 0.25 * map.resolution;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    result
}

/// Traces the outer boundary of component `id` counter-clockwise along cell
/// corners (interior on the left), merging collinear runs.
fn trace_boundary(map: &GridMap, id: usize, comp: &[usize]) -> Polygon {
    use std::collections::HashMap;
    let in_comp = |c: i64, r: i64| {
        c >= 0
            && r >= 0
            && c < map.width as i64
            && r < map.height as i64
            && comp[r as usize * map.width + c as usize] == id
    };
    // Directed corner-to-corner edges, keyed by start corner (cell units).
    let mut edges: HashMap<(i64, i64), Vec<(i64, i64)>> = HashMap::new();
    for r in 0..map.height as i64 {
        for c in 0..map.width as i64 {
            if !in_comp(c, r) {
                continue;
            }
            if !in_comp(c, r - 1) {
                edges.entry((c, r)).or_default().push((c + 1, r));
            }
            if !in_comp(c + 1, r) {
                edges.entry((c + 1, r)).or_default().push((c + 1, r + 1));
            }
            if !in_comp(c, r + 1) {
                edges.entry((c + 1, r + 1)).or_default().push((c, r + 1));
            }
            if !in_comp(c - 1, r) {
                edges.entry((c, r + 1)).or_default().push((c, r));
            }
        }
    }
    // Stitch loops; at pinch corners prefer the sharpest right turn so the
    // outer boundary stays weakly simple.
    let mut loops: Vec<Vec<(i64, i64)>> = Vec::new();
    let mut starts: Vec<(i64, i64)> = edges.keys().copied().collect();
    starts.sort();
    for start in starts {
        if edges.get(&start).map_or(true, |v| v.is_empty()) {
            continue;
        }
        let mut cur = start;
        let first_next = edges.get_mut(&cur).unwrap().pop().unwrap();
        let mut ring = vec![cur];
        let mut dir = (first_next.0 - cur.0, first_next.1 - cur.1);
        cur = first_next;
        while cur != start {
            ring.push(cur);
            let outs = edges.get_mut(&cur).unwrap();
            // Right turn first relative to incoming direction.
            let pref = [
                (dir.1, -dir.0), // right
                dir,             // straight
                (-dir.1, dir.0), // left
            ];
            let mut chosen = None;
            for want in pref {
                if let Some(pos) = outs
                    .iter()
                    .position(|n| (n.0 - cur.0, n.1 - cur.1) == want)
                {
                    chosen = Some(outs.swap_remove(pos));
                    break;
                }
            }
            let next = chosen.expect("open boundary chain");
            dir = (next.0 - cur.0, next.1 - cur.1);
            cur = next;
        }
        loops.push(ring);
    }
    // Outer loop has the largest positive area (holes trace clockwise).
    let area = |ring: &[(i64, i64)]| -> i64 {
        let n = ring.len();
        (0..n)
            .map(|i| {
                let a = ring[i];
                let b = ring[(i + 1) % n];
                a.0 * b.1 - b.0 * a.1
            })
            .sum()
    };
    let outer = loops
        .into_iter()
        .max_by_key(|r| area(r))
        .expect("component without boundary");
    // Merge collinear runs and scale to world units.
    let n = outer.len();
    let mut verts: Vec<Point2> = Vec::new();
    for i in 0..n {
        let prev = outer[(i + n - 1) % n];
        let here = outer[i];
        let next = outer[(i + 1) % n];
        let d1 = (here.0 - prev.0, here.1 - prev.1);
        let d2 = (next.0 - here.0, next.1 - here.1);
        if d1.0 * d2.1 - d1.1 * d2.0 != 0 {
            verts.push(Point2::new(
                here.0 as f64 * map.resolution,
                here.1 as f64 * map.resolution,
            ));
        }
    }
    Polygon::new(verts)
}

/// Immutable world shared by the tether engine and the planner.
#[derive(Debug, Clone)]
pub struct World {
    pub map: GridMap,
    pub obstacles: Vec<ObstaclePolygon>,
    /// All obstacle boundary corners, candidates for tether contacts.
    pub corners: Vec<Point2>,
}

impl World {
    pub fn new(map: GridMap) -> Self {
        let obstacles = extract_obstacles(&map);
        let mut corners: Vec<Point2> = Vec::new();
        for ob in &obstacles {
            for &v in &ob.boundary.vertices {
                if !corners.iter().any(|c| c.distance(&v) < 1e-9) {
                    corners.push(v);
                }
            }
        }
        Self {
            map,
            obstacles,
            corners,
        }
    }
}
