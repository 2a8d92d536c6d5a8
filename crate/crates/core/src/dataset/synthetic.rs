//! Seeded synthetic cohorts that follow the student schema.
//!
//! The generator mimics the marginal shape of the public table (mostly
//! small integer scales, skewed absences, grades on 0..=20) and ties the
//! grades to a handful of attributes so a classifier has something to learn.
//! It exists for examples, tests and benchmarks; it is not a model of real
//! students.

use super::parse::{RawField, RawStudentRecord};
use crate::rng::SeededRng;

fn pick<'a>(rng: &mut SeededRng, options: &[(&'a str, f64)]) -> &'a str {
    let total: f64 = options.iter().map(|(_, w)| w).sum();
    let mut u = rng.next_f64() * total;
    for (v, w) in options {
        if u < *w {
            return v;
        }
        u -= w;
    }
    options[options.len() - 1].0
}

fn level(rng: &mut SeededRng, first: i64, weights: &[f64]) -> i64 {
    let total: f64 = weights.iter().sum();
    let mut u = rng.next_f64() * total;
    for (i, w) in weights.iter().enumerate() {
        if u < *w {
            return first + i as i64;
        }
        u -= w;
    }
    first + weights.len() as i64 - 1
}

fn yes(rng: &mut SeededRng, p: f64) -> &'static str {
    if rng.next_f64() < p {
        "yes"
    } else {
        "no"
    }
}

fn normal(rng: &mut SeededRng) -> f64 {
    // Box-Muller; 1 - u keeps the log argument positive.
    let u1 = 1.0 - rng.next_f64();
    let u2 = rng.next_f64();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn grade(x: f64) -> i64 {
    x.round().clamp(0.0, 20.0) as i64
}

/// `n` schema-valid records drawn deterministically from `seed`.
pub fn generate(n: usize, seed: u64) -> Vec<RawStudentRecord> {
    let mut rng = SeededRng::new(seed);
    let jobs = [
        ("at_home", 15.0),
        ("health", 9.0),
        ("other", 36.0),
        ("services", 26.0),
        ("teacher", 14.0),
    ];
    (0..n)
        .map(|_| {
            let r = &mut rng;
            let school = pick(r, &[("GP", 88.0), ("MS", 12.0)]);
            let sex = pick(r, &[("F", 53.0), ("M", 47.0)]);
            let age = level(r, 15, &[21.0, 26.0, 25.0, 21.0, 6.0, 1.0]);
            let address = pick(r, &[("R", 22.0), ("U", 78.0)]);
            let famsize = pick(r, &[("GT3", 71.0), ("LE3", 29.0)]);
            let pstatus = pick(r, &[("A", 10.0), ("T", 90.0)]);
            let medu = level(r, 0, &[1.0, 15.0, 26.0, 25.0, 33.0]);
            let fedu = (medu + level(r, -1, &[30.0, 45.0, 25.0])).clamp(0, 4);
            let mjob = pick(r, &jobs);
            let fjob = pick(r, &jobs);
            let reason = pick(
                r,
                &[
                    ("course", 37.0),
                    ("home", 27.0),
                    ("other", 9.0),
                    ("reputation", 27.0),
                ],
            );
            let guardian = pick(r, &[("father", 23.0), ("mother", 69.0), ("other", 8.0)]);
            let traveltime = level(r, 1, &[65.0, 27.0, 6.0, 2.0]);
            let studytime = level(r, 1, &[27.0, 50.0, 16.0, 7.0]);
            let failures = level(r, 0, &[79.0, 13.0, 4.0, 4.0]);
            let schoolsup = yes(r, 0.13);
            let famsup = yes(r, 0.61);
            let paid = yes(r, 0.46);
            let activities = yes(r, 0.51);
            let nursery = yes(r, 0.79);
            let higher = yes(r, if failures > 0 { 0.8 } else { 0.97 });
            let internet = yes(r, 0.83);
            let romantic = yes(r, 0.33);
            let famrel = level(r, 1, &[2.0, 5.0, 17.0, 49.0, 27.0]);
            let freetime = level(r, 1, &[5.0, 16.0, 40.0, 29.0, 10.0]);
            let goout = level(r, 1, &[6.0, 26.0, 33.0, 22.0, 13.0]);
            let dalc = level(r, 1, &[70.0, 19.0, 7.0, 2.0, 2.0]);
            let walc = level(r, 1, &[38.0, 22.0, 20.0, 13.0, 7.0]);
            let health = level(r, 1, &[12.0, 11.0, 23.0, 17.0, 37.0]);
            let absences = if r.next_f64() < 0.3 {
                0
            } else {
                (-(1.0 - r.next_f64()).ln() * 7.0).floor().min(75.0) as i64
            };

            let ability = 10.6
                + 0.9 * (medu as f64 - 2.75)
                + 0.4 * (fedu as f64 - 2.5)
                + 0.8 * (studytime as f64 - 2.0)
                - 2.2 * failures as f64
                + if higher == "yes" { 0.8 } else { -1.5 }
                - 0.5 * (goout as f64 - 3.0)
                - 0.4 * (age as f64 - 16.7)
                - 0.03 * absences as f64
                + if schoolsup == "yes" { -0.8 } else { 0.0 }
                + 1.8 * normal(r);
            let g1 = grade(ability + 0.9 * normal(r));
            let g2 = grade(ability + 1.0 * normal(r));
            let dropped_out = failures > 0 && r.next_f64() < 0.25;
            let g3 = if dropped_out {
                0
            } else {
                grade(ability + 1.1 * normal(r))
            };

            let t = |s: &str| RawField::Text(s.to_owned());
            let i = RawField::Integer;
            let fields = vec![
                t(school),
                t(sex),
                i(age),
                t(address),
                t(famsize),
                t(pstatus),
                i(medu),
                i(fedu),
                t(mjob),
                t(fjob),
                t(reason),
                t(guardian),
                i(traveltime),
                i(studytime),
                i(failures),
                t(schoolsup),
                t(famsup),
                t(paid),
                t(activities),
                t(nursery),
                t(higher),
                t(internet),
                t(romantic),
                i(famrel),
                i(freetime),
                i(goout),
                i(dalc),
                i(walc),
                i(health),
                i(absences),
                i(g1),
                i(g2),
                i(g3),
            ];
            RawStudentRecord::new(fields).expect("generator emits schema-valid rows")
        })
        .collect()
}

/// Renders records as a semicolon-separated table in the layout of the
/// public file (quoted strings, header first).
pub fn to_csv(records: &[RawStudentRecord]) -> String {
    let mut out = super::schema::COLUMNS
        .iter()
        .map(|c| c.name)
        .collect::<Vec<_>>()
        .join(";");
    out.push('\n');
    for rec in records {
        let cells: Vec<String> = rec
            .fields()
            .iter()
            .map(|f| match f {
                RawField::Text(s) => format!("\"{s}\""),
                RawField::Integer(v) => v.to_string(),
            })
            .collect();
        out.push_str(&cells.join(";"));
        out.push('\n');
    }
    out
}
