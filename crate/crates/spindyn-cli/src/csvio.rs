//! Trajectory CSV, schema v1.
//!
//! The header line is the schema: it is bit-exact per version, so any change
//! to the column set is a new version with a new header. Floats are written
//! with Rust's shortest round-trip scientific formatting (`{:e}`), which is
//! deterministic — rerunning the same scenario yields a byte-identical file.

use crate::error::{io_err, CliError, CliResult};
use spindyn::integrator::SampleRow;
use spindyn::minkowski::Vec3;
use std::io::Write;
use std::path::Path;

pub const SCHEMA_VERSION: &str = "v1";

/// Exactly 23 columns: proper time, lab time, position, velocity (β and γ),
/// rest-frame spin direction ζ, the six spin-tensor storage components
/// (Π^{10}, Π^{20}, Π^{30}, Π^{23}, Π^{31}, Π^{12}), the dynamical spin
/// mass, and the four per-sample conservation residuals.
pub const HEADER: &str = "tau,t,x,y,z,bx,by,bz,gamma,zx,zy,zz,\
Pi_e1,Pi_e2,Pi_e3,Pi_b1,Pi_b2,Pi_b3,m,\
res_vv,res_frenkel,res_spinnorm,res_massshell";

pub const COLUMNS: usize = 23;

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

fn row_fields(s: &SampleRow) -> [f64; COLUMNS] {
    [
        s.tau,
        s.t,
        s.position.x,
        s.position.y,
        s.position.z,
        s.beta.x,
        s.beta.y,
        s.beta.z,
        s.gamma,
        s.zeta.x,
        s.zeta.y,
        s.zeta.z,
        s.spin.e.x,
        s.spin.e.y,
        s.spin.e.z,
        s.spin.b.x,
        s.spin.b.y,
        s.spin.b.z,
        s.mass,
        s.res_vv,
        s.res_frenkel,
        s.res_spinnorm,
        s.res_massshell,
    ]
}

pub fn write_rows<W: Write>(mut w: W, samples: &[SampleRow]) -> std::io::Result<()> {
    writeln!(w, "{HEADER}")?;
    let mut line = String::with_capacity(512);
    for s in samples {
        line.clear();
        for (i, value) in row_fields(s).iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&fmt(*value));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn write_file(path: &Path, samples: &[SampleRow]) -> CliResult<()> {
    let file = std::fs::File::create(path).map_err(|e| io_err("cannot create", path, e))?;
    let mut buf = std::io::BufWriter::new(file);
    write_rows(&mut buf, samples).map_err(|e| io_err("cannot write", path, e))?;
    buf.flush().map_err(|e| io_err("cannot write", path, e))
}

/// Column-oriented view of a schema-v1 file, as needed by the analyzers.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub tau: Vec<f64>,
    pub t: Vec<f64>,
    pub position: Vec<Vec3>,
    pub beta: Vec<Vec3>,
    pub gamma: Vec<f64>,
    pub zeta: Vec<Vec3>,
    pub mass: Vec<f64>,
    /// res_vv, res_frenkel, res_spinnorm, res_massshell.
    pub residuals: [Vec<f64>; 4],
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn from_samples(samples: &[SampleRow]) -> Trajectory {
        let mut out = Trajectory::default();
        for s in samples {
            out.push(&row_fields(s));
        }
        out
    }

    fn push(&mut self, f: &[f64; COLUMNS]) {
        self.tau.push(f[0]);
        self.t.push(f[1]);
        self.position.push(Vec3::new(f[2], f[3], f[4]));
        self.beta.push(Vec3::new(f[5], f[6], f[7]));
        self.gamma.push(f[8]);
        self.zeta.push(Vec3::new(f[9], f[10], f[11]));
        self.mass.push(f[18]);
        for (k, column) in self.residuals.iter_mut().enumerate() {
            column.push(f[19 + k]);
        }
    }
}

pub fn read_file(path: &Path) -> CliResult<Trajectory> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| io_err("cannot read", path, e))?;
    {
        let headers = reader
            .headers()
            .map_err(|e| io_err("cannot read", path, e))?;
        let joined = headers.iter().collect::<Vec<_>>().join(",");
        if joined != HEADER {
            return Err(CliError::Io(format!(
                "{}: header does not match CSV schema {SCHEMA_VERSION}; \
                 got '{joined}'",
                path.display()
            )));
        }
    }
    let mut out = Trajectory::default();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| io_err("cannot read", path, e))?;
        if record.len() != COLUMNS {
            return Err(CliError::Io(format!(
                "{}: row {} has {} fields, expected {COLUMNS}",
                path.display(),
                idx + 2,
                record.len()
            )));
        }
        let mut fields = [0.0; COLUMNS];
        for (k, raw) in record.iter().enumerate() {
            fields[k] = raw.trim().parse::<f64>().map_err(|e| {
                CliError::Io(format!(
                    "{}: row {} column {}: '{raw}' is not a float ({e})",
                    path.display(),
                    idx + 2,
                    k + 1
                ))
            })?;
        }
        out.push(&fields);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use spindyn::minkowski::AntisymTensor2;

    fn sample(tau: f64) -> SampleRow {
        SampleRow {
            tau,
            t: 2.0 * tau,
            position: Vec3::new(0.1, -0.2, 0.3),
            beta: Vec3::new(0.5, 0.0, 0.0),
            gamma: 1.25,
            zeta: Vec3::new(0.0, 1.0, 0.0),
            spin: AntisymTensor2 {
                e: Vec3::new(1e-3, 2e-3, 3e-3),
                b: Vec3::new(-1e-3, -2e-3, -3e-3),
            },
            mass: 1.0,
            res_vv: 1e-16,
            res_frenkel: 2e-16,
            spin_norm_sq: 2.0,
            res_spinnorm: 3e-16,
            res_massshell: 4e-16,
            invariant_spread: 0.0,
        }
    }

    #[test]
    fn header_has_exactly_23_columns() {
        assert_eq!(HEADER.split(',').count(), COLUMNS);
    }

    #[test]
    fn write_is_byte_deterministic() {
        let rows = vec![sample(0.0), sample(0.5), sample(1.0)];
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_rows(&mut a, &rows).unwrap();
        write_rows(&mut b, &rows).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with(HEADER));
    }

    #[test]
    fn read_round_trips_written_columns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rows = vec![sample(0.0), sample(0.25)];
        write_file(&path, &rows).unwrap();
        let tr = read_file(&path).unwrap();
        assert_eq!(tr.len(), 2);
        assert_eq!(tr.tau, vec![0.0, 0.25]);
        assert_eq!(tr.t, vec![0.0, 0.5]);
        assert_eq!(tr.beta[1], Vec3::new(0.5, 0.0, 0.0));
        assert_eq!(tr.zeta[0], Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(tr.mass, vec![1.0, 1.0]);
        assert_eq!(tr.residuals[3], vec![4e-16, 4e-16]);
    }

    #[test]
    fn read_rejects_foreign_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b,c\n1,2,3\n").unwrap();
        let err = read_file(&path).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }
}
