//! CSV and ASCII PLY writers (and a CSV reader) for surface clouds.

use super::{SurfaceCloud, SurfacePoint, WhichDet};
use crate::error::{Error, Result};
use std::io::Write;
use std::path::Path;

pub const CSV_HEADER: &str = "kx,ky,kz,dir_index,crossing_ordinal,which_det,det_slope_sign,beyond_first_zone";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloudFormat {
    Csv,
    Ply,
}

impl CloudFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(CloudFormat::Csv),
            "ply" => Ok(CloudFormat::Ply),
            other => Err(Error::Usage(format!("unknown format `{other}` (expected csv or ply)"))),
        }
    }
}

/// 17 significant digits: enough to round-trip every f64 exactly.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(cloud: &SurfaceCloud, comments: &[String], out: &mut W) -> std::io::Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "{CSV_HEADER}")?;
    for p in &cloud.points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(p.k.x),
            num(p.k.y),
            num(p.k.z),
            p.direction_index,
            p.ordinal,
            p.which.label(),
            p.slope_sign,
            p.beyond_first_zone as u8
        )?;
    }
    Ok(())
}

pub fn write_ply<W: Write>(cloud: &SurfaceCloud, comments: &[String], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "ply")?;
    writeln!(out, "format ascii 1.0")?;
    for c in comments {
        writeln!(out, "comment {c}")?;
    }
    writeln!(out, "element vertex {}", cloud.points.len())?;
    for p in ["x", "y", "z"] {
        writeln!(out, "property double {p}")?;
    }
    writeln!(out, "property int which_det")?;
    writeln!(out, "property int crossing_ordinal")?;
    writeln!(out, "end_header")?;
    for p in &cloud.points {
        writeln!(out, "{} {} {} {} {}", num(p.k.x), num(p.k.y), num(p.k.z), p.which.code(), p.ordinal)?;
    }
    Ok(())
}

pub fn export_cloud(cloud: &SurfaceCloud, format: CloudFormat, path: &Path, comments: &[String]) -> Result<()> {
    let io = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io)?;
    let mut w = std::io::BufWriter::new(file);
    match format {
        CloudFormat::Csv => write_csv(cloud, comments, &mut w),
        CloudFormat::Ply => write_ply(cloud, comments, &mut w),
    }
    .and_then(|_| w.flush())
    .map_err(io)
}

/// Reads points written by `write_csv` (comment lines and header skipped).
pub fn read_csv(text: &str) -> Result<Vec<SurfacePoint>> {
    let bad = |line: usize, msg: &str| Error::Parse {
        path: "<cloud csv>".into(),
        message: format!("line {line}: {msg}"),
    };
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() || line == CSV_HEADER {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad(i + 1, "expected 8 fields"));
        }
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad(i + 1, "bad number"));
        let int = |s: &str| s.parse::<i64>().map_err(|_| bad(i + 1, "bad integer"));
        out.push(SurfacePoint {
            k: nalgebra::Vector3::new(float(f[0])?, float(f[1])?, float(f[2])?),
            direction_index: int(f[3])? as usize,
            ordinal: int(f[4])? as usize,
            which: WhichDet::parse(f[5]).map_err(|_| bad(i + 1, "bad which_det"))?,
            slope_sign: int(f[6])? as i8,
            beyond_first_zone: int(f[7])? != 0,
        });
    }
    Ok(out)
}

pub fn read_cloud_csv(path: &Path) -> Result<Vec<SurfacePoint>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    fn cloud(points: Vec<SurfacePoint>) -> SurfaceCloud {
        SurfaceCloud {
            material: "X".into(),
            band_id: "b".into(),
            which: WhichDet::Spin,
            points,
            symmetry_ops_applied: false,
            rays: Vec::new(),
        }
    }

    fn sample() -> Vec<SurfacePoint> {
        (0..7)
            .map(|i| SurfacePoint {
                k: Vector3::new(0.1 * i as f64 + 1e-17, -1.0 / 3.0, std::f64::consts::PI * 1e-5),
                direction_index: i,
                ordinal: i % 2,
                which: if i % 3 == 0 { WhichDet::Total } else { WhichDet::Spin },
                slope_sign: if i % 2 == 0 { 1 } else { -1 },
                beyond_first_zone: i == 4,
            })
            .collect()
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let mut buf = Vec::new();
        write_csv(&cloud(sample()), &["seed 3".into()], &mut buf).unwrap();
        let back = read_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, sample());
        for (a, b) in back.iter().zip(sample()) {
            for i in 0..3 {
                assert_eq!(a.k[i].to_bits(), b.k[i].to_bits());
            }
        }
    }

    #[test]
    fn empty_cloud_has_header_only() {
        let mut buf = Vec::new();
        write_csv(&cloud(Vec::new()), &[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
        let mut ply = Vec::new();
        write_ply(&cloud(Vec::new()), &[], &mut ply).unwrap();
        let text = String::from_utf8(ply).unwrap();
        assert!(text.contains("element vertex 0\n"));
        assert!(text.ends_with("end_header\n"));
    }

    #[test]
    fn ply_vertex_count_matches_body() {
        let mut buf = Vec::new();
        write_ply(&cloud(sample()), &["c".into()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let (head, body) = text.split_once("end_header\n").unwrap();
        assert!(head.starts_with("ply\nformat ascii 1.0\ncomment c\n"));
        assert!(head.contains("element vertex 7\n"));
        assert_eq!(body.lines().count(), 7);
        assert!(body.lines().all(|l| l.split(' ').count() == 5));
    }

    #[test]
    fn export_to_missing_directory_is_io() {
        let err = export_cloud(&cloud(Vec::new()), CloudFormat::Csv, Path::new("/nonexistent/dir/x.csv"), &[]).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(CloudFormat::parse("obj").is_err());
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(read_csv("1,2,3\n").is_err());
        assert!(read_csv("a,0,0,0,0,gs,1,0\n").is_err());
    }
}
