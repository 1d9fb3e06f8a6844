//! Seeded generators for the three bundled study-dataset snapshots.
//!
//! The files under `data/` at the crate root are frozen copies of what these
//! generators emit; `cargo run --example regenerate_snapshots` rewrites them
//! and a test pins the digests so silent drift is impossible. Each snapshot
//! mirrors the shape and column vocabulary of a well-known public clinical
//! dataset, but every row is synthesized from a documented conditional model
//! — none of the data describes real patients.
//!
//! * **lung** — 309 rows, 15 features + `LUNG_CANCER` label. Fourteen binary
//!   symptom flags coded `2`=yes/`1`=no plus numeric `AGE`. `ANXYELFIN` is
//!   the engineered product `ANXIETY * YELLOW_FINGERS` and carries the
//!   strongest class signal by construction, followed by `COUGHING`,
//!   `CHRONIC DISEASE`, `FATIGUE`, and `ALCOHOL CONSUMING`. 270 of 309
//!   labels are `YES` (~87% prevalence).
//! * **heart** — 918 rows, 11 features + `HeartDisease`. The source corpus
//!   describes "several kinds of cardiac disorders", yet its published
//!   metrics are binary; this snapshot follows the standard binary target
//!   (`1` = any disorder) and records that discrepancy here rather than
//!   inventing per-disorder labels. Categorical columns are integer-coded in
//!   risk order (`ChestPainType`: 0=ATA, 1=NAP, 2=TA, 3=ASY; `RestingECG`:
//!   0=Normal, 1=ST, 2=LVH; `ST_Slope`: 0=Up, 1=Flat, 2=Down).
//! * **covid** — a 10,000-row seeded subsample shape (the full-scale variant
//!   is available through [`covid_snapshot_with_rows`]). The upstream
//!   study's exact 11-column subset is unnamed, so this snapshot documents
//!   its own columns without claiming identity: numeric `AGE`, nine YES/NO
//!   comorbidity/symptom flags, and a `SEVERITY` label (`SEVERE`/`MILD`)
//!   that is by construction a wide-margin function of `AGE` (no patient is
//!   aged 45–54), keeping every classifier separable and benchmark runtimes
//!   flat.

use super::schema::{ColumnRole, Schema};
use super::{load_csv_str, DataError, DataMatrix};
use crate::rng::{derive_seed, shuffle, stream};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Rows in the bundled covid subsample.
pub const COVID_SUBSAMPLE_ROWS: usize = 10_000;
/// Rows in the full-scale covid variant (behind the `--covid-full` flag).
pub const COVID_FULL_ROWS: usize = 278_848;

/// One bundled dataset: CSV text plus the schema that decodes it.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub name: &'static str,
    pub csv: String,
    pub schema: Schema,
}

impl Snapshot {
    /// Decode the snapshot into the numeric matrix every module consumes.
    pub fn data(&self) -> Result<DataMatrix, DataError> {
        load_csv_str(&self.csv, &self.schema, self.name)
    }

    /// The schema as pretty JSON, exactly what `*.schema.json` files hold.
    pub fn schema_json(&self) -> String {
        serde_json::to_string_pretty(&self.schema).expect("schema serializes") + "\n"
    }
}

fn flag(rng: &mut ChaCha8Rng, p: f64) -> u8 {
    u8::from(rng.gen::<f64>() < p)
}

/// Sample an index from a discrete distribution given as weights.
fn categorical(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut draw = rng.gen::<f64>() * total;
    for (idx, w) in weights.iter().enumerate() {
        draw -= w;
        if draw < 0.0 {
            return idx;
        }
    }
    weights.len() - 1
}

fn normal_int(rng: &mut ChaCha8Rng, mean: f64, sd: f64, lo: i64, hi: i64) -> i64 {
    let draw = Normal::new(mean, sd).expect("finite parameters").sample(rng);
    (draw.round() as i64).clamp(lo, hi)
}

fn csv_from_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("header writes");
    for row in rows {
        writer.write_record(row).expect("row writes");
    }
    let bytes = writer.into_inner().expect("Vec sink cannot fail");
    String::from_utf8(bytes).expect("CSV output is UTF-8")
}

fn yes_no(v: u8) -> String {
    if v == 1 { "YES" } else { "NO" }.to_string()
}

/// `2`=yes / `1`=no, the coding the survey corpus uses.
fn two_one(v: u8) -> String {
    if v == 1 { "2" } else { "1" }.to_string()
}

/// The 309-row lung-cancer survey snapshot.
pub fn lung_snapshot() -> Snapshot {
    const HEADER: [&str; 16] = [
        "AGE",
        "SMOKING",
        "YELLOW_FINGERS",
        "ANXIETY",
        "PEER_PRESSURE",
        "CHRONIC DISEASE",
        "FATIGUE",
        "ALLERGY",
        "WHEEZING",
        "ALCOHOL CONSUMING",
        "COUGHING",
        "SHORTNESS OF BREATH",
        "SWALLOWING DIFFICULTY",
        "CHEST PAIN",
        "ANXYELFIN",
        "LUNG_CANCER",
    ];
    // Per-class Bernoulli rates (yes, no) for the plain symptom flags, in
    // header order. The five features the study singles out carry wide
    // gaps; the rest stay near-uninformative.
    const RATES: [(&str, f64, f64); 11] = [
        ("SMOKING", 0.60, 0.46),
        ("PEER_PRESSURE", 0.52, 0.42),
        ("CHRONIC DISEASE", 0.75, 0.25),
        ("FATIGUE", 0.84, 0.32),
        ("ALLERGY", 0.56, 0.44),
        ("WHEEZING", 0.58, 0.44),
        ("ALCOHOL CONSUMING", 0.75, 0.27),
        ("COUGHING", 0.84, 0.28),
        ("SHORTNESS OF BREATH", 0.64, 0.50),
        ("SWALLOWING DIFFICULTY", 0.48, 0.38),
        ("CHEST PAIN", 0.56, 0.44),
    ];
    // Joint law of (ANXIETY, YELLOW_FINGERS): the product column ANXYELFIN
    // separates the classes far better than either parent marginal.
    const JOINT_YES: [f64; 4] = [0.64, 0.04, 0.04, 0.28]; // (1,1) (1,0) (0,1) (0,0)
    const JOINT_NO: [f64; 4] = [0.04, 0.46, 0.46, 0.04];

    let mut rng = stream(derive_seed(0, "lung-snapshot", 0), "rows", 0);
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(309);
    for idx in 0..309 {
        let cancer = idx < 270; // 270 YES / 39 NO, shuffled below
        let age = if cancer {
            normal_int(&mut rng, 64.0, 8.0, 35, 85)
        } else {
            normal_int(&mut rng, 56.0, 9.0, 35, 85)
        };
        let joint = if cancer { &JOINT_YES } else { &JOINT_NO };
        let cell = categorical(&mut rng, joint);
        let anxiety = u8::from(cell < 2);
        let yellow = u8::from(cell == 0 || cell == 2);
        let mut symptoms = std::collections::BTreeMap::new();
        for (name, p_yes, p_no) in RATES {
            let p = if cancer { p_yes } else { p_no };
            symptoms.insert(name, flag(&mut rng, p));
        }
        let row: Vec<String> = HEADER
            .iter()
            .map(|&col| match col {
                "AGE" => age.to_string(),
                "YELLOW_FINGERS" => two_one(yellow),
                "ANXIETY" => two_one(anxiety),
                "ANXYELFIN" => two_one(anxiety * yellow),
                "LUNG_CANCER" => if cancer { "YES" } else { "NO" }.to_string(),
                other => two_one(symptoms[other]),
            })
            .collect();
        rows.push(row);
    }
    let mut order = stream(derive_seed(0, "lung-snapshot", 0), "order", 0);
    shuffle(&mut rows, &mut order);

    let schema = Schema::from_pairs(HEADER.iter().map(|&col| {
        let role = match col {
            "AGE" => ColumnRole::numeric(),
            "LUNG_CANCER" => ColumnRole::label(),
            _ => ColumnRole::binary("2", "1"),
        };
        (col.to_string(), role)
    }))
    .expect("lung schema is valid");

    Snapshot {
        name: "lung",
        csv: csv_from_rows(&HEADER, &rows),
        schema,
    }
}

/// The 918-row heart-disease snapshot (binary target; see the module note
/// on the multi-disorder discrepancy).
pub fn heart_snapshot() -> Snapshot {
    const HEADER: [&str; 12] = [
        "Age",
        "Sex",
        "ChestPainType",
        "RestingBP",
        "Cholesterol",
        "FastingBS",
        "RestingECG",
        "MaxHR",
        "ExerciseAngina",
        "Oldpeak",
        "ST_Slope",
        "HeartDisease",
    ];
    // ChestPainType weights over codes [0=ATA, 1=NAP, 2=TA, 3=ASY].
    const CHEST_DISEASE: [f64; 4] = [0.06, 0.12, 0.05, 0.77];
    const CHEST_HEALTHY: [f64; 4] = [0.30, 0.35, 0.09, 0.26];
    // RestingECG weights over codes [0=Normal, 1=ST, 2=LVH].
    const ECG_DISEASE: [f64; 3] = [0.56, 0.31, 0.13];
    const ECG_HEALTHY: [f64; 3] = [0.66, 0.20, 0.14];
    // ST_Slope weights over codes [0=Up, 1=Flat, 2=Down].
    const SLOPE_DISEASE: [f64; 3] = [0.20, 0.68, 0.12];
    const SLOPE_HEALTHY: [f64; 3] = [0.76, 0.21, 0.03];

    let mut rng = stream(derive_seed(0, "heart-snapshot", 0), "rows", 0);
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(918);
    for idx in 0..918 {
        let disease = idx < 508; // 508 positive / 410 negative, shuffled below
        let age = if disease {
            normal_int(&mut rng, 55.9, 8.7, 28, 77)
        } else {
            normal_int(&mut rng, 50.5, 9.4, 28, 77)
        };
        let male = flag(&mut rng, if disease { 0.90 } else { 0.65 });
        let chest = categorical(&mut rng, if disease { &CHEST_DISEASE } else { &CHEST_HEALTHY });
        let resting_bp = if disease {
            normal_int(&mut rng, 134.0, 19.0, 90, 200)
        } else {
            normal_int(&mut rng, 130.0, 16.0, 90, 200)
        };
        let cholesterol = if disease {
            normal_int(&mut rng, 217.0, 60.0, 100, 400)
        } else {
            normal_int(&mut rng, 237.0, 54.0, 100, 400)
        };
        let fasting_bs = flag(&mut rng, if disease { 0.33 } else { 0.13 });
        let ecg = categorical(&mut rng, if disease { &ECG_DISEASE } else { &ECG_HEALTHY });
        let max_hr = if disease {
            normal_int(&mut rng, 127.0, 23.0, 60, 202)
        } else {
            normal_int(&mut rng, 148.0, 23.0, 60, 202)
        };
        let angina = flag(&mut rng, if disease { 0.62 } else { 0.22 });
        let oldpeak_raw: f64 = if disease {
            Normal::new(1.3, 1.0).unwrap().sample(&mut rng)
        } else {
            Normal::new(0.4, 0.6).unwrap().sample(&mut rng)
        };
        let oldpeak = (oldpeak_raw.max(0.0) * 10.0).round() / 10.0;
        let slope = categorical(&mut rng, if disease { &SLOPE_DISEASE } else { &SLOPE_HEALTHY });

        rows.push(vec![
            age.to_string(),
            if male == 1 { "M" } else { "F" }.to_string(),
            chest.to_string(),
            resting_bp.to_string(),
            cholesterol.to_string(),
            fasting_bs.to_string(),
            ecg.to_string(),
            max_hr.to_string(),
            if angina == 1 { "Y" } else { "N" }.to_string(),
            format!("{oldpeak:.1}"),
            slope.to_string(),
            u8::from(disease).to_string(),
        ]);
    }
    let mut order = stream(derive_seed(0, "heart-snapshot", 0), "order", 0);
    shuffle(&mut rows, &mut order);

    let schema = Schema::from_pairs(HEADER.iter().map(|&col| {
        let role = match col {
            "Sex" => ColumnRole::binary("M", "F"),
            "ExerciseAngina" => ColumnRole::binary("Y", "N"),
            "HeartDisease" => ColumnRole::label(),
            _ => ColumnRole::numeric(),
        };
        (col.to_string(), role)
    }))
    .expect("heart schema is valid");

    Snapshot {
        name: "heart",
        csv: csv_from_rows(&HEADER, &rows),
        schema,
    }
}

/// The bundled 10,000-row covid severity subsample.
pub fn covid_snapshot() -> Snapshot {
    covid_snapshot_with_rows(COVID_SUBSAMPLE_ROWS)
}

/// Covid snapshot at an arbitrary row count; `COVID_FULL_ROWS` reproduces
/// the full-scale variant. Half the rows are severe, half mild.
pub fn covid_snapshot_with_rows(n_rows: usize) -> Snapshot {
    const HEADER: [&str; 11] = [
        "AGE",
        "PNEUMONIA",
        "FEVER",
        "COUGH",
        "DIABETES",
        "HYPERTENSION",
        "OBESITY",
        "TOBACCO",
        "CARDIOVASCULAR",
        "RENAL_CHRONIC",
        "SEVERITY",
    ];
    // (rate when severe, rate when mild) per flag, in header order.
    const RATES: [(f64, f64); 9] = [
        (0.44, 0.11), // PNEUMONIA
        (0.55, 0.42), // FEVER
        (0.54, 0.47), // COUGH
        (0.26, 0.08), // DIABETES
        (0.36, 0.10), // HYPERTENSION
        (0.28, 0.18), // OBESITY
        (0.19, 0.12), // TOBACCO
        (0.13, 0.03), // CARDIOVASCULAR
        (0.07, 0.02), // RENAL_CHRONIC
    ];
    assert!(n_rows >= 2, "covid snapshot needs at least one row per class");

    let severe_rows = n_rows / 2;
    let mut rng = stream(derive_seed(0, "covid-snapshot", 0), "rows", 0);
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(n_rows);
    for idx in 0..n_rows {
        let severe = idx < severe_rows;
        // Ages 45-54 never occur: the SEVERITY rule is a wide-margin
        // threshold every classifier family can represent exactly.
        let age = if severe {
            rng.gen_range(55..=79)
        } else {
            rng.gen_range(20..=44)
        };
        let mut row = Vec::with_capacity(HEADER.len());
        row.push(age.to_string());
        for (p_severe, p_mild) in RATES {
            let p = if severe { p_severe } else { p_mild };
            row.push(yes_no(flag(&mut rng, p)));
        }
        row.push(if severe { "SEVERE" } else { "MILD" }.to_string());
        rows.push(row);
    }
    let mut order = stream(derive_seed(0, "covid-snapshot", 0), "order", 0);
    shuffle(&mut rows, &mut order);

    let schema = Schema::from_pairs(HEADER.iter().map(|&col| {
        let role = match col {
            "AGE" => ColumnRole::numeric(),
            "SEVERITY" => ColumnRole::label(),
            _ => ColumnRole::binary("YES", "NO"),
        };
        (col.to_string(), role)
    }))
    .expect("covid schema is valid");

    Snapshot {
        name: "covid",
        csv: csv_from_rows(&HEADER, &rows),
        schema,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lung_shape_and_prevalence() {
        let snap = lung_snapshot();
        let d = snap.data().unwrap();
        assert_eq!(d.n_rows(), 309);
        assert_eq!(d.n_features(), 15);
        assert_eq!(d.n_classes(), 2);
        let yes = d.labels().iter().filter(|&&y| y == 1).count();
        assert_eq!(yes, 270);
        assert_eq!(snap.csv.lines().count(), 310);
    }

    #[test]
    fn lung_anxyelfin_is_the_parents_product() {
        let d = lung_snapshot().data().unwrap();
        let names = d.feature_names();
        let col = |n: &str| names.iter().position(|c| c == n).unwrap();
        let (a, y, p) = (col("ANXIETY"), col("YELLOW_FINGERS"), col("ANXYELFIN"));
        let features = d.features();
        for r in 0..d.n_rows() {
            assert_eq!(features[[r, p]], features[[r, a]] * features[[r, y]]);
        }
    }

    #[test]
    fn heart_shape_and_prevalence() {
        let d = heart_snapshot().data().unwrap();
        assert_eq!(d.n_rows(), 918);
        assert_eq!(d.n_features(), 11);
        assert_eq!(d.n_classes(), 2);
        let positive = d.labels().iter().filter(|&&y| y == 1).count();
        assert_eq!(positive, 508);
    }

    #[test]
    fn covid_shape_margin_and_rule() {
        let d = covid_snapshot().data().unwrap();
        assert_eq!(d.n_rows(), COVID_SUBSAMPLE_ROWS);
        assert_eq!(d.n_features(), 10);
        let names = d.feature_names();
        let age_col = names.iter().position(|c| c == "AGE").unwrap();
        let features = d.features();
        for r in 0..d.n_rows() {
            let age = features[[r, age_col]];
            assert!(!(45.0..55.0).contains(&age), "age {age} inside the margin");
            assert_eq!(d.labels()[r], usize::from(age >= 50.0));
        }
        let severe = d.labels().iter().filter(|&&y| y == 1).count();
        assert_eq!(severe, COVID_SUBSAMPLE_ROWS / 2);
    }

    #[test]
    fn small_covid_variant_matches_row_request() {
        let d = covid_snapshot_with_rows(500).data().unwrap();
        assert_eq!(d.n_rows(), 500);
        assert_eq!(d.labels().iter().filter(|&&y| y == 1).count(), 250);
    }

    #[test]
    fn bundled_files_match_generators() {
        // Frozen copies under data/ must equal generator output byte for
        // byte; `cargo run --example regenerate_snapshots` repairs drift.
        for (snapshot, csv, schema) in [
            (
                lung_snapshot(),
                include_str!("../../data/lung.csv"),
                include_str!("../../data/lung.schema.json"),
            ),
            (
                heart_snapshot(),
                include_str!("../../data/heart.csv"),
                include_str!("../../data/heart.schema.json"),
            ),
            (
                covid_snapshot(),
                include_str!("../../data/covid.csv"),
                include_str!("../../data/covid.schema.json"),
            ),
        ] {
            assert_eq!(csv, snapshot.csv, "{} CSV drifted", snapshot.name);
            assert_eq!(schema, snapshot.schema_json(), "{} schema drifted", snapshot.name);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = lung_snapshot();
        let b = lung_snapshot();
        assert_eq!(a.csv, b.csv);
        assert_eq!(a.schema_json(), b.schema_json());
        assert_eq!(heart_snapshot().csv, heart_snapshot().csv);
        assert_eq!(covid_snapshot_with_rows(300).csv, covid_snapshot_with_rows(300).csv);
    }
}
