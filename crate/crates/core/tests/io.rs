mod common;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use bo_core::evolution::{evolve, SolverConfig};
use bo_core::io::{
    field_from_json, field_to_json, fmt_f64, read_field, read_trajectory, write_real_field, write_spectral_field,
    write_trajectory, write_trajectory_csv, Field,
};
use bo_core::{Error, Grid};
use common::{coeff_list, complex_field, cos_n, real_field};
use proptest::prelude::*;

#[test]
fn trajectory_file_round_trip() {
    let g = Grid::new(1.5, 32).unwrap();
    let u = evolve(&cos_n(g, 2.0 / 1.5, 0.1), 0.05, &SolverConfig::with_dt(0.01)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.bin");
    {
        let mut w = BufWriter::new(File::create(&path).unwrap());
        write_trajectory(&mut w, &u).unwrap();
        w.flush().unwrap();
    }
    let back = read_trajectory(&mut BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(back.states(), u.states());
    assert_eq!((back.t0(), back.dt(), back.grid()), (u.t0(), u.dt(), u.grid()));
}

#[test]
fn corrupt_records_are_rejected() {
    let g = Grid::new(1.0, 8).unwrap();
    let mut buf = Vec::new();
    write_real_field(&mut buf, &cos_n(g, 1.0, 1.0)).unwrap();
    let mut bad = buf.clone();
    bad[0] = b'X';
    assert!(matches!(read_field(&mut bad.as_slice()), Err(Error::Format(_))));
    let mut bad = buf.clone();
    bad[4] = 9;
    assert!(matches!(read_field(&mut bad.as_slice()), Err(Error::Format(_))));
    assert!(read_field(&mut &buf[..buf.len() - 3]).is_err());
    assert!(read_trajectory(&mut buf.as_slice()).is_err());
    assert!(field_from_json(r#"{"lambda":1,"M":8}"#).is_err());
}

#[test]
fn csv_output_is_deterministic() {
    let g = Grid::new(1.0, 16).unwrap();
    let run = || {
        let u = evolve(&cos_n(g, 1.0, 0.2), 0.1, &SolverConfig::with_dt(0.02)).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &u).unwrap();
        buf
    };
    let a = run();
    assert_eq!(a, run());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1 + 6 * 16);
    assert_eq!(text.lines().next(), Some("t,x,u"));
    assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn binary_and_json_round_trips(modes in coeff_list(7, 10.0), lambda in 1.0f64..5.0) {
        let g = Grid::new(lambda, 16).unwrap();
        let r = real_field(g, &modes);
        let s = complex_field(g, &modes);
        let mut buf = Vec::new();
        write_real_field(&mut buf, &r).unwrap();
        write_spectral_field(&mut buf, &s).unwrap();
        let mut rd = buf.as_slice();
        prop_assert_eq!(read_field(&mut rd).unwrap(), Field::Real(r.clone()));
        prop_assert_eq!(read_field(&mut rd).unwrap(), Field::Spectral(s.clone()));
        for f in [Field::Real(r), Field::Spectral(s)] {
            prop_assert_eq!(field_from_json(&field_to_json(&f).unwrap()).unwrap(), f);
        }
    }

    #[test]
    fn fmt_is_lossless(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
        prop_assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
    }
}
