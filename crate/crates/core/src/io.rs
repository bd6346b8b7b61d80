//! ASCII emitters: OBJ meshes and CSV tables. Floats carry 17 significant digits.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::curves::CurveTrace;
use crate::geometry::Point3;
use crate::mesh::MeshGrid;

/// Round-trip-safe float formatting.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `v x y z` for every live node in row-major order, then one `f` line per quad
/// with 1-based indices `(i,j) (i+1,j) (i+1,j+1) (i,j+1)`.
pub fn write_obj<W: Write>(m: &MeshGrid, mut w: W) -> io::Result<()> {
    emit_obj(m, &mut |line| w.write_all(line.as_bytes()))
}

pub fn obj_string(m: &MeshGrid) -> String {
    let mut s = String::new();
    emit_obj(m, &mut |line| {
        s.push_str(line);
        Ok(())
    })
    .expect("writing to a string");
    s
}

fn emit_obj(m: &MeshGrid, out: &mut dyn FnMut(&str) -> io::Result<()>) -> io::Result<()> {
    let mut line = String::new();
    for p in m.nodes.iter().filter_map(|n| n.point()) {
        line.clear();
        let _ = writeln!(line, "v {} {} {}", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.z));
        out(&line)?;
    }
    let idx = m.live_indices();
    let at = |i: usize, j: usize| idx[i * m.nv + j].expect("quad corner is live") + 1;
    for (i, j) in m.quads() {
        line.clear();
        let _ = writeln!(line, "f {} {} {} {}", at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
        out(&line)?;
    }
    Ok(())
}

pub const TRACE_HEADER: &str = "t,x,y,z,tx,ty";

pub fn write_trace_csv<W: Write>(c: &CurveTrace, mut w: W) -> io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for s in &c.samples {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_f64(s.t),
            fmt_f64(s.point.x),
            fmt_f64(s.point.y),
            fmt_f64(s.point.z),
            fmt_f64(s.top_dir.t1),
            fmt_f64(s.top_dir.t2)
        )?;
    }
    Ok(())
}

/// Points of a characteristic circle in the trace layout: `t` is the sample
/// index and the tangent columns hold the normalized top-view chord to the next point.
pub fn write_points_csv<W: Write>(pts: &[Point3], mut w: W) -> io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for (k, p) in pts.iter().enumerate() {
        let (from, to) = if k + 1 < pts.len() { (*p, pts[k + 1]) } else if k > 0 { (pts[k - 1], *p) } else { (*p, *p) };
        let (dx, dy) = (to.x - from.x, to.y - from.y);
        let n = dx.hypot(dy);
        let (tx, ty) = if n > 0.0 { (dx / n, dy / n) } else { (0.0, 0.0) };
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_f64(k as f64),
            fmt_f64(p.x),
            fmt_f64(p.y),
            fmt_f64(p.z),
            fmt_f64(tx),
            fmt_f64(ty)
        )?;
    }
    Ok(())
}

pub const VERIFY_HEADER: &str = "family,a,nu,nv,max_abs_crpc_residual,max_abs_H,ode_residual,dualK_residual,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

/// One row of the verification report; `None` columns print as `NA`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub family: String,
    pub a: f64,
    pub nu: usize,
    pub nv: usize,
    pub max_abs_crpc_residual: Option<f64>,
    pub max_abs_h: Option<f64>,
    pub ode_residual: Option<f64>,
    pub dual_k_residual: Option<f64>,
    pub status: Status,
}

impl VerifyRow {
    pub fn csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_else(|| "NA".into());
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.family,
            fmt_f64(self.a),
            self.nu,
            self.nv,
            opt(self.max_abs_crpc_residual),
            opt(self.max_abs_h),
            opt(self.ode_residual),
            opt(self.dual_k_residual),
            self.status.label()
        )
    }
}

pub fn write_verify_csv<W: Write>(rows: &[VerifyRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{VERIFY_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Node;

    fn live(x: f64) -> Node {
        Node::Live { point: Point3::new(x, 0.0, 0.0), u: 0.0, v: 0.0, h: 0.0, k: 0.0, residual: None }
    }

    #[test]
    fn seventeen_digits_round_trip() {
        let x = 0.1 + 0.2;
        assert_eq!(fmt_f64(x), "3.0000000000000004e-1");
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn obj_skips_masked_vertices() {
        // 2 x 3 grid with the middle of the first row masked
        let m = MeshGrid { nu: 2, nv: 3, nodes: vec![live(0.0), Node::Masked, live(2.0), live(3.0), live(4.0), live(5.0)] };
        let s = obj_string(&m);
        assert_eq!(s.lines().filter(|l| l.starts_with("v ")).count(), 5);
        assert_eq!(s.lines().filter(|l| l.starts_with("f ")).count(), 0);
        let full = MeshGrid { nu: 2, nv: 2, nodes: vec![live(0.0), live(1.0), live(2.0), live(3.0)] };
        assert!(obj_string(&full).ends_with("f 1 3 4 2\n"));
    }

    #[test]
    fn verify_row_prints_na() {
        let r = VerifyRow {
            family: "spiral_ruled".into(),
            a: -2.0,
            nu: 4,
            nv: 5,
            max_abs_crpc_residual: Some(0.0),
            max_abs_h: Some(1.5),
            ode_residual: None,
            dual_k_residual: None,
            status: Status::Pass,
        };
        assert_eq!(
            r.csv(),
            "spiral_ruled,-2.0000000000000000e0,4,5,0.0000000000000000e0,1.5000000000000000e0,NA,NA,PASS"
        );
    }
}
