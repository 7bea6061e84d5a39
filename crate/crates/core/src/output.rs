//! Canonical text rendering of simulation results.
//!
//! Golden-file comparison needs byte-stable output: the same final state must
//! always produce identical text. Numbers are printed with nine digits after
//! the decimal point — enough precision that a real regression shows up,
//! while the comparator's tolerances absorb last-digit platform noise.

use std::fmt::Write;

use crate::{State12, Trajectory};

pub const TRAJECTORY_HEADER: &str = "t,x1x,x1y,x1z,x2x,x2y,x2z,v1x,v1y,v1z,v2x,v2y,v2z";

/// Renders a finite number in scientific notation: nine digits after the
/// decimal point, lowercase `e`, explicitly signed two-digit exponent.
/// Negative zero is normalized to `0.000000000e+00` so mirror-symmetric
/// scenarios produce identical bytes.
pub fn format_number(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    let rendered = format!("{value:.9e}");
    let (mantissa, exponent) = rendered
        .split_once('e')
        .expect("scientific formatting always contains an exponent");
    let exponent: i32 = exponent
        .parse()
        .expect("the exponent of a finite float is a small integer");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.abs())
}

fn vector_line(out: &mut String, label: &str, components: [f64; 3]) {
    let [x, y, z] = components.map(format_number);
    writeln!(out, "{label}: {x} {y} {z}").expect("writing to a String cannot fail");
}

/// The four-line summary printed after a run: final positions, then final
/// velocities, of bodies 1 and 2.
pub fn format_result(state: &State12) -> String {
    let mut out = String::new();
    for body in 0..2 {
        let p = state.position(body);
        vector_line(&mut out, &format!("final position body {}", body + 1), [p.x, p.y, p.z]);
    }
    for body in 0..2 {
        let v = state.velocity(body);
        vector_line(&mut out, &format!("final velocity body {}", body + 1), [v.x, v.y, v.z]);
    }
    out
}

/// CSV rendering of a full trajectory, one row per sample.
pub fn format_trajectory(trajectory: &Trajectory) -> String {
    let mut out = String::with_capacity(16 * 13 * (trajectory.samples.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (t, state) in &trajectory.samples {
        out.push_str(&format_number(*t));
        for component in state.0 {
            out.push(',');
            out.push_str(&format_number(component));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::{self, State12};

    #[test]
    fn formats_reference_values() {
        assert_eq!(format_number(-122.625), "-1.226250000e+02");
        assert_eq!(format_number(3.132092), "3.132092000e+00");
        assert_eq!(format_number(0.0), "0.000000000e+00");
        assert_eq!(format_number(4.863e-19), "4.863000000e-19");
        assert_eq!(format_number(1.0e100), "1.000000000e+100");
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(format_number(-0.0), "0.000000000e+00");
    }

    #[test]
    fn result_layout_is_four_labelled_lines() {
        let zero = State12([0.0; 12]);
        let text = format_result(&zero);
        let zero3 = "0.000000000e+00 0.000000000e+00 0.000000000e+00";
        assert_eq!(
            text,
            format!(
                "final position body 1: {zero3}\nfinal position body 2: {zero3}\n\
                 final velocity body 1: {zero3}\nfinal velocity body 2: {zero3}\n"
            )
        );
    }

    #[test]
    fn result_is_deterministic() {
        let state = State12([
            1.0, -2.5, 3.25, 4.0, 5.0, -119.625, 0.0, 0.0, -49.05, 1.0, 1.0, 1.0,
        ]);
        assert_eq!(format_result(&state), format_result(&state.clone()));
        assert!(format_result(&state).contains("-1.196250000e+02"));
        assert!(format_result(&state).contains("-4.905000000e+01"));
    }

    #[test]
    fn trajectory_csv_shape() {
        let single = Trajectory {
            samples: vec![(0.0, State12([0.0; 12]))],
        };
        let text = format_trajectory(&single);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], TRAJECTORY_HEADER);
        assert_eq!(lines[1].split(',').count(), 13);

        let traj = Trajectory {
            samples: vec![
                (0.0, State12([0.0; 12])),
                (0.5, State12([1.0; 12])),
                (1.0, State12([2.0; 12])),
            ],
        };
        let text = format_trajectory(&traj);
        assert_eq!(text.lines().count(), 1 + traj.samples.len());
        let times: Vec<f64> = text
            .lines()
            .skip(1)
            .map(|row| row.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert!(times.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*times.last().unwrap(), 1.0);
    }

    #[test]
    fn formatted_numbers_reparse_close() {
        for value in [
            -122.625,
            3.132092,
            9.81,
            -49.05,
            1.0 / 3.0,
            2.0_f64.sqrt() * 1e-7,
            -6.02214076e23,
        ] {
            let reparsed: f64 = format_number(value).parse().unwrap();
            assert!(
                (reparsed - value).abs() <= 5e-10 * value.abs(),
                "{value} reparsed as {reparsed}"
            );
        }
    }

    #[test]
    fn mirror_symmetric_states_format_identically_up_to_sign() {
        let state = State12([
            1.5, 2.0, 3.0, -4.25, 5.0, 6.0, 0.5, 1.0, 1.0, -1.0, 1.0, 1.0,
        ]);
        let mut mirrored = state;
        for i in [0, 3, 6, 9] {
            mirrored.0[i] = -mirrored.0[i];
        }
        let a = format_result(&state);
        let b = format_result(&mirrored);
        assert_ne!(a, b);
        // x components of zero must not leave a stray sign behind.
        let at_rest = State12([0.0, 1.0, 2.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let mut mirrored = at_rest;
        for i in [0, 3, 6, 9] {
            mirrored.0[i] = -mirrored.0[i];
        }
        assert_eq!(format_result(&at_rest), format_result(&mirrored));
    }

    #[test]
    fn integrated_free_fall_formats_expected_reference() {
        let sc = crate::SpringScenario {
            masses: [13.5, 29.75],
            spring_constant: 42.0,
            rest_length: 2.25,
            friction: [0.0, 0.0],
            gravity: 9.81,
            initial_positions: [
                ode::Vec3::new(1.0, 2.0, 3.0),
                ode::Vec3::new(1.0, 2.0, 5.25),
            ],
            initial_velocities: [ode::Vec3::zero(), ode::Vec3::zero()],
            end_time: 5.0,
            time_step: 1e-3,
            output_interval: 0.01,
        };
        let text = format_result(&ode::integrate(&sc).unwrap().final_state());
        assert!(text.contains("final position body 1: 1.000000000e+00 2.000000000e+00 -1.196250000e+02"));
        assert!(text.contains("final velocity body 2: 0.000000000e+00 0.000000000e+00 -4.905000000e+01"));
    }
}
