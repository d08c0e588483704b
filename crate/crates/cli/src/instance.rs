//! JSON instance files: `{"a": [obj, ...], "b": [obj, ...]}` with objects
//!
//! ```text
//! {"kind": "disc", "cx": 0.5, "cy": 0.5, "r": 0.1}
//! {"kind": "rect", "x0": 0.1, "x1": 0.4, "y0": 0.2, "y1": 0.3}
//! {"kind": "frame", "x0": 0.1, "x1": 0.4, "y0": 0.2, "y1": 0.3}
//! {"kind": "point", "x": 0.25, "y": 0.75}
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use ztnet::{AxisRect, Disc, Frame, GeomObject, Point};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum WireObject {
    Disc { cx: f64, cy: f64, r: f64 },
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
    Frame { x0: f64, x1: f64, y0: f64, y1: f64 },
    Point { x: f64, y: f64 },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireInstance {
    a: Vec<WireObject>,
    b: Vec<WireObject>,
}

impl WireObject {
    fn into_object(self) -> Result<GeomObject, String> {
        let obj = match self {
            WireObject::Disc { cx, cy, r } => {
                if !(r > 0.0) {
                    return Err(format!("disc radius must be positive, got {r}"));
                }
                GeomObject::Disc(Disc::new(cx, cy, r))
            }
            WireObject::Rect { x0, x1, y0, y1 } => GeomObject::Rect(AxisRect::new(x0, x1, y0, y1)),
            WireObject::Frame { x0, x1, y0, y1 } => GeomObject::Frame(Frame::new(x0, x1, y0, y1)),
            WireObject::Point { x, y } => GeomObject::Point(Point::new(x, y)),
        };
        if obj.is_valid() {
            Ok(obj)
        } else {
            Err(format!("invalid {} (coordinates must be finite with x0 < x1 and y0 < y1)", obj.kind_name()))
        }
    }

    fn from_object(obj: &GeomObject) -> Self {
        match *obj {
            GeomObject::Disc(d) => WireObject::Disc { cx: d.center.x, cy: d.center.y, r: d.radius },
            GeomObject::Rect(r) => WireObject::Rect { x0: r.x_lo, x1: r.x_hi, y0: r.y_lo, y1: r.y_hi },
            GeomObject::Frame(Frame(r)) => WireObject::Frame { x0: r.x_lo, x1: r.x_hi, y0: r.y_lo, y1: r.y_hi },
            GeomObject::Point(p) => WireObject::Point { x: p.x, y: p.y },
        }
    }
}

/// The two families of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub a: Vec<GeomObject>,
    pub b: Vec<GeomObject>,
}

pub fn parse_instance(path: &Path) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_instance_str(&text, path)
}

/// Parses instance text; `path` only labels error messages.
pub fn parse_instance_str(text: &str, path: &Path) -> Result<Instance, CliError> {
    let schema = |message: String| CliError::Schema { path: PathBuf::from(path), message };
    let wire: WireInstance = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    let convert = |side: &str, objs: Vec<WireObject>| {
        objs.into_iter()
            .enumerate()
            .map(|(i, o)| o.into_object().map_err(|m| schema(format!("{side}[{i}]: {m}"))))
            .collect::<Result<Vec<_>, _>>()
    };
    Ok(Instance { a: convert("a", wire.a)?, b: convert("b", wire.b)? })
}

pub fn instance_to_json(inst: &Instance) -> String {
    let wire = WireInstance {
        a: inst.a.iter().map(WireObject::from_object).collect(),
        b: inst.b.iter().map(WireObject::from_object).collect(),
    };
    let mut s = serde_json::to_string_pretty(&wire).expect("instances always serialize");
    s.push('\n');
    s
}

pub fn write_instance(path: &Path, inst: &Instance) -> Result<(), CliError> {
    std::fs::write(path, instance_to_json(inst)).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn wrong_kind(side: &str, i: usize, want: &str, got: &GeomObject) -> CliError {
    CliError::Usage(format!("{side}[{i}] is a {}, this command needs {want}s", got.kind_name()))
}

pub fn rects(side: &str, objs: &[GeomObject]) -> Result<Vec<AxisRect>, CliError> {
    objs.iter()
        .enumerate()
        .map(|(i, o)| o.as_rect().copied().ok_or_else(|| wrong_kind(side, i, "rect", o)))
        .collect()
}

pub fn points(side: &str, objs: &[GeomObject]) -> Result<Vec<Point>, CliError> {
    objs.iter()
        .enumerate()
        .map(|(i, o)| match o {
            GeomObject::Point(p) => Ok(*p),
            _ => Err(wrong_kind(side, i, "point", o)),
        })
        .collect()
}

pub fn discs(side: &str, objs: &[GeomObject]) -> Result<Vec<Disc>, CliError> {
    objs.iter()
        .enumerate()
        .map(|(i, o)| match o {
            GeomObject::Disc(d) => Ok(*d),
            _ => Err(wrong_kind(side, i, "disc", o)),
        })
        .collect()
}
