//! Telemetry export: the CSV schema behind the tracking plots and the
//! line-delimited frame records behind the tether animations.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use tuav_core::catenary;
use tuav_core::sim::{LogRow, SimLog};
use tuav_core::uav::{ControlInputs, FullState};
use tuav_core::Vec3;

/// Fixed CSV column order. One header row, then one row per tick; decimal
/// point `.`, comma separator, line-feed terminator, 9 significant digits.
pub const CSV_COLUMNS: [&str; 38] = [
    "t",
    "x1",
    "x2",
    "x3",
    "x4",
    "x5",
    "x6",
    "x7",
    "x8",
    "x9",
    "x10",
    "x11",
    "x12",
    "x13",
    "x14",
    "x_ref",
    "y_ref",
    "z_ref",
    "phi_ref",
    "theta_ref",
    "psi_ref",
    "e_x",
    "e_y",
    "e_z",
    "e_phi",
    "e_theta",
    "e_psi",
    "e_L",
    "U_f",
    "U_phi",
    "U_theta",
    "U_psi",
    "U_win",
    "L",
    "L_bar",
    "V_c1",
    "V_c2",
    "V_c12",
];

fn row_values(row: &LogRow) -> [f64; 38] {
    let x = row.state.to_array();
    let r = &row.reference;
    let e = &row.errors;
    let u = &row.inputs;
    [
        row.time,
        x[0],
        x[1],
        x[2],
        x[3],
        x[4],
        x[5],
        x[6],
        x[7],
        x[8],
        x[9],
        x[10],
        x[11],
        x[12],
        x[13],
        r.position.x,
        r.position.y,
        r.position.z,
        r.attitude.x,
        r.attitude.y,
        r.attitude.z,
        e.position.x,
        e.position.y,
        e.position.z,
        e.attitude.x,
        e.attitude.y,
        e.attitude.z,
        e.tether,
        u.thrust,
        u.roll_moment,
        u.pitch_moment,
        u.yaw_moment,
        u.winch_torque,
        row.tether_length,
        row.tether_length_ref,
        row.lyapunov.altitude,
        row.lyapunov.roll,
        row.lyapunov.winder,
    ]
}

/// Write the telemetry CSV; returns the number of data rows.
pub fn export_csv(log: &SimLog, path: &Path) -> io::Result<usize> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(CSV_COLUMNS.join(",").as_bytes())?;
    out.write_all(b"\n")?;
    for row in &log.rows {
        let values = row_values(row);
        let mut line = String::with_capacity(38 * 18);
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            // 9 significant digits
            line.push_str(&format!("{v:.8e}"));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(log.rows.len())
}

/// Read a telemetry CSV back into a log.
///
/// Only the exported columns are recovered; transform variables, events and
/// fitted geometries are not part of the schema. The result carries enough
/// to recompute metrics and Lyapunov rates.
pub fn import_csv(path: &Path) -> io::Result<SimLog> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "empty CSV"))??;
    if header != CSV_COLUMNS.join(",") {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            "unexpected CSV header",
        ));
    }

    let mut log = SimLog::default();
    for (index, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut values = [0.0f64; 38];
        let mut count = 0;
        for (slot, field) in values.iter_mut().zip(line.split(',')) {
            *slot = field.parse::<f64>().map_err(|_| {
                io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("row {}: bad number `{field}`", index + 1),
                )
            })?;
            count += 1;
        }
        if count != 38 || line.split(',').count() != 38 {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("row {}: expected 38 columns", index + 1),
            ));
        }
        log.rows.push(row_from_values(&values));
    }
    if log.rows.len() >= 2 {
        log.dt = log.rows[1].time - log.rows[0].time;
    }
    Ok(log)
}

fn row_from_values(v: &[f64; 38]) -> LogRow {
    let state: [f64; 14] = v[1..15].try_into().expect("14 state columns");
    let mut reference = tuav_core::control::ReferenceSignal::default();
    reference.position = Vec3::new(v[15], v[16], v[17]);
    reference.attitude = Vec3::new(v[18], v[19], v[20]);
    reference.tether_length = v[34];
    let mut errors = tuav_core::control::ErrorVector::default();
    errors.position = Vec3::new(v[21], v[22], v[23]);
    errors.attitude = Vec3::new(v[24], v[25], v[26]);
    errors.tether = v[27];
    LogRow {
        time: v[0],
        state: FullState::from_array(&state),
        reference,
        errors,
        inputs: ControlInputs {
            thrust: v[28],
            roll_moment: v[29],
            pitch_moment: v[30],
            yaw_moment: v[31],
            winch_torque: v[32],
        },
        tether_length: v[33],
        tether_length_ref: v[34],
        lyapunov: tuav_core::control::LyapunovSample {
            altitude: v[35],
            roll: v[36],
            winder: v[37],
        },
        geometry: None,
        tension: catenary::TensionVector::zero(),
    }
}

/// One animation frame: the UAV position and a polyline sampled along the
/// fitted tether from the anchor to the UAV.
#[derive(Debug, Serialize)]
struct FrameRecord {
    t: f64,
    degenerate: bool,
    uav: [f64; 3],
    tether: Vec<[f64; 3]>,
}

/// Write line-delimited frame records every `stride` rows with `samples`
/// points per polyline; returns the frame count.
///
/// Rows whose catenary fit failed emit a straight anchor-to-UAV polyline
/// flagged `degenerate`.
pub fn export_frames(
    log: &SimLog,
    path: &Path,
    stride: usize,
    samples: usize,
) -> io::Result<usize> {
    assert!(samples >= 2, "a polyline needs at least two samples");
    let stride = stride.max(1);
    let mut out = BufWriter::new(File::create(path)?);
    let anchor = Vec3::zeros();
    let mut frames = 0;
    for row in log.rows.iter().step_by(stride) {
        let uav = row.state.uav.position;
        let (points, degenerate) = match &row.geometry {
            Some(geometry) => (
                catenary::sample_polyline(geometry, &anchor, &uav, samples),
                false,
            ),
            None => {
                let mut points = Vec::with_capacity(samples);
                for i in 0..samples {
                    let s = i as f64 / (samples - 1) as f64;
                    points.push(anchor + (uav - anchor) * s);
                }
                (points, true)
            }
        };
        let record = FrameRecord {
            t: row.time,
            degenerate,
            uav: [uav.x, uav.y, uav.z],
            tether: points.iter().map(|p| [p.x, p.y, p.z]).collect(),
        };
        out.write_all(serde_json::to_string(&record)?.as_bytes())?;
        out.write_all(b"\n")?;
        frames += 1;
    }
    out.flush()?;
    Ok(frames)
}
