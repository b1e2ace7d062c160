//! Spatial region descriptions and the node masks built from them.
//!
//! Membership is decided at the node itself: a node belongs to an open set
//! when its coordinates lie strictly inside it. Nodes exactly on a boundary
//! are exterior.

use crate::error::{Error, Result};
use crate::grid::GridConfig;
use crate::scalar::Real;

/// Open box or ball in space (1 or 2 dimensions; unused coordinates ignored).
#[derive(Clone, Debug, PartialEq)]
pub enum Shape<T = f64> {
    Box { lo: [T; 2], hi: [T; 2] },
    Ball { center: [T; 2], radius: T },
}

impl<T: Real> Shape<T> {
    pub fn interval(lo: T, hi: T) -> Self {
        Shape::Box {
            lo: [lo, T::zero()],
            hi: [hi, T::zero()],
        }
    }

    pub fn contains(&self, x: [T; 2], dims: usize) -> bool {
        match self {
            Shape::Box { lo, hi } => (0..dims).all(|a| x[a] > lo[a] && x[a] < hi[a]),
            Shape::Ball { center, radius } => {
                let d2: T = (0..dims).map(|a| (x[a] - center[a]).powi(2)).sum();
                d2 < *radius * *radius
            }
        }
    }

    /// Lebesgue measure.
    pub fn measure(&self, dims: usize) -> T {
        match self {
            Shape::Box { lo, hi } => (0..dims).map(|a| hi[a] - lo[a]).fold(T::one(), |p, l| p * l),
            Shape::Ball { radius, .. } => match dims {
                1 => T::lit(2.0) * *radius,
                _ => T::PI() * *radius * *radius,
            },
        }
    }

    fn validate(&self, dims: usize) -> Result<()> {
        let ok = match self {
            Shape::Box { lo, hi } => (0..dims).all(|a| lo[a] < hi[a]),
            Shape::Ball { radius, .. } => *radius > T::zero(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Geometry(format!("degenerate shape {self:?}")))
        }
    }

    /// Axis-aligned bounding box.
    fn bounds(&self) -> ([T; 2], [T; 2]) {
        match self {
            Shape::Box { lo, hi } => (*lo, *hi),
            Shape::Ball { center, radius } => (
                [center[0] - *radius, center[1] - *radius],
                [center[0] + *radius, center[1] + *radius],
            ),
        }
    }

    /// Whether the closures of two shapes meet.
    pub fn closures_meet(&self, other: &Self, dims: usize) -> bool {
        match (self, other) {
            (Shape::Box { lo: a0, hi: a1 }, Shape::Box { lo: b0, hi: b1 }) => {
                (0..dims).all(|a| a0[a] <= b1[a] && b0[a] <= a1[a])
            }
            (Shape::Ball { center: c1, radius: r1 }, Shape::Ball { center: c2, radius: r2 }) => {
                let d2: T = (0..dims).map(|a| (c1[a] - c2[a]).powi(2)).sum();
                d2 <= (*r1 + *r2).powi(2)
            }
            (Shape::Box { lo, hi }, Shape::Ball { center, radius })
            | (Shape::Ball { center, radius }, Shape::Box { lo, hi }) => {
                let d2: T = (0..dims)
                    .map(|a| {
                        let c = center[a].max(lo[a]).min(hi[a]);
                        (center[a] - c).powi(2)
                    })
                    .sum();
                d2 <= *radius * *radius
            }
        }
    }
}

/// Finite union of shapes.
#[derive(Clone, Debug, PartialEq)]
pub struct Region<T = f64> {
    pub parts: Vec<Shape<T>>,
}

impl<T: Real> Region<T> {
    pub fn single(shape: Shape<T>) -> Self {
        Self { parts: vec![shape] }
    }

    pub fn interval(lo: T, hi: T) -> Self {
        Self::single(Shape::interval(lo, hi))
    }

    pub fn contains(&self, x: [T; 2], dims: usize) -> bool {
        self.parts.iter().any(|p| p.contains(x, dims))
    }

    pub fn closures_meet(&self, other: &Self, dims: usize) -> bool {
        self.parts
            .iter()
            .any(|a| other.parts.iter().any(|b| a.closures_meet(b, dims)))
    }
}

/// Geometry of an experiment: the interior set, the two exterior windows, and
/// the half-length `T` of the time slab.
#[derive(Clone, Debug, PartialEq)]
pub struct Geometry<T = f64> {
    pub omega: Region<T>,
    pub control: Region<T>,
    pub measure: Region<T>,
    pub t_half: T,
}

impl<T: Real> Geometry<T> {
    /// Ω = (-0.5, 0.5), U1 = (1, 1.5), U2 = (-1.5, -1), T = 1.
    pub fn desk_default() -> Self {
        Self {
            omega: Region::interval(T::lit(-0.5), T::lit(0.5)),
            control: Region::interval(T::lit(1.0), T::lit(1.5)),
            measure: Region::interval(T::lit(-1.5), T::lit(-1.0)),
            t_half: T::one(),
        }
    }
}

/// Node class of the space-time partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeClass {
    /// `t <= -T`.
    Past,
    /// `t >= T`.
    Future,
    /// `|t| < T`, `x` in Ω.
    Interior,
    /// `|t| < T`, `x` outside Ω.
    Exterior,
}

#[derive(Clone, Debug)]
pub struct RegionMasks<T = f64> {
    pub grid: GridConfig<T>,
    pub geometry: Geometry<T>,
    pub omega_t: Vec<usize>,
    pub control_window: Vec<usize>,
    pub measure_window: Vec<usize>,
    pub past_buffer: Vec<usize>,
    pub future_buffer: Vec<usize>,
    pub exterior: Vec<usize>,
    pub class: Vec<NodeClass>,
    /// Position of each node inside `omega_t`, if interior.
    pub omega_pos: Vec<Option<usize>>,
}

impl<T: Real> RegionMasks<T> {
    pub fn t_half(&self) -> T {
        self.geometry.t_half
    }

    pub fn is_interior(&self, node: usize) -> bool {
        self.class[node] == NodeClass::Interior
    }
}

/// Builds the node masks for `geometry` on `grid`.
pub fn make_masks<T: Real>(grid: &GridConfig<T>, geometry: &Geometry<T>) -> Result<RegionMasks<T>> {
    let dims = grid.n_space_dims;
    let lx = grid.half_period_space;
    for (name, region) in [
        ("omega", &geometry.omega),
        ("control", &geometry.control),
        ("measure", &geometry.measure),
    ] {
        if region.parts.is_empty() {
            return Err(Error::Geometry(format!("{name} region is empty")));
        }
        for part in &region.parts {
            part.validate(dims)?;
            let (lo, hi) = part.bounds();
            if (0..dims).any(|a| lo[a] <= -lx || hi[a] >= lx) {
                return Err(Error::Geometry(format!(
                    "{name} shape {part:?} is not strictly inside the spatial period"
                )));
            }
        }
    }
    if geometry.control.closures_meet(&geometry.omega, dims) {
        return Err(Error::Geometry("control window meets the closure of omega".into()));
    }
    if geometry.measure.closures_meet(&geometry.omega, dims) {
        return Err(Error::Geometry("measure window meets the closure of omega".into()));
    }
    if geometry.control.closures_meet(&geometry.measure, dims) {
        return Err(Error::Geometry("control and measure windows overlap".into()));
    }
    let th = geometry.t_half;
    if !(th > T::zero()) {
        return Err(Error::Geometry("T must be positive".into()));
    }

    let mut masks = RegionMasks {
        grid: grid.clone(),
        geometry: geometry.clone(),
        omega_t: Vec::new(),
        control_window: Vec::new(),
        measure_window: Vec::new(),
        past_buffer: Vec::new(),
        future_buffer: Vec::new(),
        exterior: Vec::new(),
        class: Vec::with_capacity(grid.len()),
        omega_pos: vec![None; grid.len()],
    };
    for node in 0..grid.len() {
        let t = grid.time_at(grid.time_index(node));
        let x = grid.space_at(grid.space_index(node));
        let class = if t <= -th {
            masks.past_buffer.push(node);
            NodeClass::Past
        } else if t >= th {
            masks.future_buffer.push(node);
            NodeClass::Future
        } else if geometry.omega.contains(x, dims) {
            masks.omega_pos[node] = Some(masks.omega_t.len());
            masks.omega_t.push(node);
            NodeClass::Interior
        } else {
            masks.exterior.push(node);
            if geometry.control.contains(x, dims) {
                masks.control_window.push(node);
            } else if geometry.measure.contains(x, dims) {
                masks.measure_window.push(node);
            }
            NodeClass::Exterior
        };
        masks.class.push(class);
    }
    if masks.past_buffer.is_empty() || masks.future_buffer.is_empty() {
        return Err(Error::Geometry(format!(
            "time buffers are empty: T = {th} leaves no nodes with |t| >= T"
        )));
    }
    for (name, set) in [
        ("omega_T", &masks.omega_t),
        ("control window", &masks.control_window),
        ("measure window", &masks.measure_window),
    ] {
        if set.is_empty() {
            return Err(Error::Geometry(format!("{name} contains no grid nodes")));
        }
    }
    Ok(masks)
}
