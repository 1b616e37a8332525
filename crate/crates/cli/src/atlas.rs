use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use lensform::lens::{homotopy_witnesses, isometric, tangential_with};
use lensform::oracle::{
    classes_of, enumerate_lens_spaces_unbounded, isometric_by_search, tangential_by_lattice,
    MAX_ENUM_N, MAX_ENUM_P,
};
use lensform::thickness::{ExceptionalIndex, QuotientOrder};
use lensform::{Error, KRingPresentation, LensSpace, PrimeModulus, ThetaFiltration};

use crate::output::{apply_checks, Check, Failure, Outcome, EXIT_OK};
use crate::{cache, CliResult, Opts, SCHEMA};

/// Strongest equivalence relating a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Isometric,
    Tangential,
    Homotopy,
    None,
}

impl Level {
    fn symbol(self) -> char {
        match self {
            Level::Isometric => 'I',
            Level::Tangential => 'T',
            Level::Homotopy => 'H',
            Level::None => '.',
        }
    }

    fn name(self) -> &'static str {
        match self {
            Level::Isometric => "isometric",
            Level::Tangential => "tangential",
            Level::Homotopy => "homotopy",
            Level::None => "none",
        }
    }

    /// Thickness interval of a linear pair at this level.
    fn thickness(self) -> Option<(u64, u64)> {
        match self {
            Level::Isometric => Some((0, 0)),
            Level::Tangential => Some((3, 3)),
            _ => None,
        }
    }
}

fn level(a: &LensSpace, b: &LensSpace, k: &KRingPresentation) -> lensform::Result<Level> {
    if homotopy_witnesses(a, b).is_empty() {
        return Ok(Level::None);
    }
    let tangential = tangential_with(a, b, k)?.equivalent;
    match (isometric(a, b).is_some(), tangential) {
        (true, true) => Ok(Level::Isometric),
        (true, false) => Err(Error::Inconsistency(format!(
            "{a} and {b} are isometric but not tangentially equivalent"
        ))),
        (false, true) => Ok(Level::Tangential),
        (false, false) => Ok(Level::Homotopy),
    }
}

fn quotient_symbol(p: u64, q: QuotientOrder) -> String {
    match q {
        QuotientOrder::Trivial => "1".into(),
        QuotientOrder::CyclicOfOrderP => p.to_string(),
        QuotientOrder::TrivialOrCyclic => format!("1|{p}"),
    }
}

fn j0_symbol(j: ExceptionalIndex) -> String {
    match j {
        ExceptionalIndex::Absent => "-".into(),
        ExceptionalIndex::Pinned { j0 } => j0.to_string(),
        ExceptionalIndex::Unknown { conjectured } => format!("? (conjectured {conjectured})"),
    }
}

pub fn filtration_line(f: &ThetaFiltration) -> String {
    let q: Vec<String> = f.quotients.iter().map(|&q| quotient_symbol(f.p, q)).collect();
    format!(
        "filtration: p={} n={} m={} quotients ({}) j0={} |T'(L)|={} stable_codim={}",
        f.p,
        f.n,
        f.m,
        q.join(", "),
        j0_symbol(f.exceptional_j0),
        f.tprime_order,
        f.stable_codim
    )
}

/// Largest atlas whose matrix is drawn in text output.
const TEXT_MATRIX_LIMIT: usize = 60;
const TEXT_PAIR_LIMIT: usize = 200;

pub fn run(o: &Opts) -> CliResult {
    let n = o.n.ok_or_else(|| Failure::Usage("atlas needs -n".into()))?;
    if n == 0 {
        return Err(Failure::Usage("-n must be positive".into()));
    }
    if !o.unbounded && (o.p > MAX_ENUM_P || n > MAX_ENUM_N) {
        return Err(Failure::Usage(format!(
            "atlas bounds exceeded: p = {}, n = {n} (limits p <= {MAX_ENUM_P}, n <= {MAX_ENUM_N}); pass --unsafe to override",
            o.p
        )));
    }
    let pm = PrimeModulus::new(o.p)?;
    let spaces = enumerate_lens_spaces_unbounded(pm, n)?;
    let k = KRingPresentation::shared(pm, n)?;
    let count = spaces.len();

    // upper triangle, row i holding levels for j = i … count-1
    let upper: Vec<Vec<Level>> = (0..count)
        .into_par_iter()
        .map(|i| {
            (i..count)
                .map(|j| level(&spaces[i], &spaces[j], &k))
                .collect::<lensform::Result<Vec<_>>>()
        })
        .collect::<lensform::Result<Vec<_>>>()?;
    let at = |i: usize, j: usize| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        upper[a][b - a]
    };

    let mut class_of = vec![usize::MAX; count];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..count {
        if class_of[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (i..count).filter(|&j| at(i, j) == Level::Isometric).collect();
        for &j in &members {
            class_of[j] = classes.len();
        }
        classes.push(members);
    }

    let pairs: Vec<(usize, usize, Level)> = (0..count)
        .flat_map(|i| (i + 1..count).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, at(i, j)))
        .filter(|(_, _, l)| *l != Level::None)
        .collect();
    let tally = |want: Level| pairs.iter().filter(|(_, _, l)| *l == want).count();

    let filtration = if n >= 3 {
        Some(cache::filtration(pm, n)?)
    } else {
        None
    };
    let matrix: Vec<String> = (0..count)
        .map(|i| (0..count).map(|j| at(i, j).symbol()).collect())
        .collect();

    let json = json!({
        "schema": SCHEMA,
        "command": "atlas",
        "p": o.p,
        "n": n,
        "spaces": spaces.iter().enumerate().map(|(i, l)| json!({
            "index": i,
            "weights": l.weights(),
            "canonical": l.to_string(),
            "class": class_of[i],
        })).collect::<Vec<_>>(),
        "classes": classes,
        "matrix": {
            "legend": {
                "I": "isometric",
                "T": "tangentially homotopy equivalent, not isometric",
                "H": "homotopy equivalent, not tangentially",
                ".": "not homotopy equivalent",
            },
            "rows": matrix,
        },
        "counts": {
            "spaces": count,
            "classes": classes.len(),
            "isometric_pairs": tally(Level::Isometric),
            "tangential_pairs": tally(Level::Tangential),
            "homotopy_pairs": tally(Level::Homotopy),
        },
        "filtration": filtration,
        "thickness_profile": filtration.as_ref().map(ThetaFiltration::thickness_profile),
        "pairs": pairs.iter().map(|&(i, j, l)| json!({
            "first": i,
            "second": j,
            "level": l,
            "thickness": l.thickness().map(|(lo, hi)| json!({ "lo": lo, "hi": hi })),
        })).collect::<Vec<_>>(),
    });

    let mut text = format!(
        "atlas p = {}, n = {n}: {count} spaces, {} isometry classes\n",
        o.p,
        classes.len()
    );
    match &filtration {
        Some(f) => text.push_str(&format!("{}\n", filtration_line(f))),
        None => text.push_str("filtration: none (needs n >= 3)\n"),
    }
    text.push_str("classes:\n");
    for (c, members) in classes.iter().enumerate() {
        let names: Vec<String> = members.iter().map(|&i| spaces[i].to_string()).collect();
        text.push_str(&format!("  [{c}] {}\n", names.join(" ~ ")));
    }
    if count <= TEXT_MATRIX_LIMIT {
        text.push_str("matrix (I isometric, T tangential, H homotopy, . none):\n");
        for (i, row) in matrix.iter().enumerate() {
            text.push_str(&format!("  {i:>3} {row}\n"));
        }
    } else {
        text.push_str("matrix: omitted in text output, see --format json\n");
    }
    text.push_str(&format!(
        "pairs: {} isometric, {} tangential, {} homotopy only\n",
        tally(Level::Isometric),
        tally(Level::Tangential),
        tally(Level::Homotopy)
    ));
    for &(i, j, l) in pairs.iter().take(TEXT_PAIR_LIMIT) {
        let t = l
            .thickness()
            .map_or_else(|| "not comparable".to_string(), |(lo, hi)| format!("thickness [{lo}, {hi}]"));
        text.push_str(&format!("  {} vs {}: {}, {t}\n", spaces[i], spaces[j], l.name()));
    }
    if pairs.len() > TEXT_PAIR_LIMIT {
        text.push_str(&format!("  ... {} more\n", pairs.len() - TEXT_PAIR_LIMIT));
    }

    let blank = |k: &str, cols: &[(usize, String)]| {
        let mut row = vec![String::new(); 11];
        row[0] = k.to_string();
        for (c, v) in cols {
            row[*c] = v.clone();
        }
        row
    };
    let mut csv_rows = Vec::new();
    for (i, l) in spaces.iter().enumerate() {
        csv_rows.push(blank("space", &[(1, l.to_string()), (3, class_of[i].to_string())]));
    }
    for &(i, j, l) in &pairs {
        let mut cols = vec![(1, spaces[i].to_string()), (2, spaces[j].to_string()), (4, l.name().to_string())];
        if let Some((lo, hi)) = l.thickness() {
            cols.extend([(5, lo.to_string()), (6, hi.to_string())]);
        }
        csv_rows.push(blank("pair", &cols));
    }
    if let Some(f) = &filtration {
        csv_rows.push(blank(
            "filtration",
            &[(7, f.m.to_string()), (10, j0_symbol(f.exceptional_j0))],
        ));
        for (idx, &q) in f.quotients.iter().enumerate() {
            csv_rows.push(blank(
                "quotient",
                &[(7, f.m.to_string()), (8, (idx + 1).to_string()), (9, quotient_symbol(f.p, q))],
            ));
        }
    }

    let mut outcome = Outcome {
        code: EXIT_OK,
        json,
        text,
        csv_header: vec![
            "kind",
            "first",
            "second",
            "class",
            "level",
            "thickness_lo",
            "thickness_hi",
            "m",
            "j",
            "quotient",
            "j0",
        ],
        csv_rows,
    };

    if o.oracle {
        let mut checks = Vec::new();
        let by_oracle: Vec<Vec<Vec<u64>>> = classes_of(spaces.clone())?
            .into_iter()
            .map(|c| c.iter().map(|l| l.weights().to_vec()).collect())
            .collect();
        let ours: Vec<Vec<Vec<u64>>> = classes
            .iter()
            .map(|c| c.iter().map(|&i| spaces[i].weights().to_vec()).collect())
            .collect();
        checks.push(Check::new("isometry_classes", format!("{ours:?}"), format!("{by_oracle:?}")));
        let disagreements: Vec<Check> = (0..count)
            .into_par_iter()
            .map(|i| {
                let mut bad = Vec::new();
                for j in i..count {
                    let (a, b) = (&spaces[i], &spaces[j]);
                    let l = at(i, j);
                    let iso = isometric_by_search(a, b).is_some();
                    let tang = tangential_by_lattice(a, b)?;
                    let ours = (l == Level::Isometric, matches!(l, Level::Isometric | Level::Tangential));
                    if ours != (iso, tang) {
                        bad.push(Check::new(
                            format!("{a} vs {b}"),
                            format!("isometric {} tangential {}", ours.0, ours.1),
                            format!("isometric {iso} tangential {tang}"),
                        ));
                    }
                }
                Ok(bad)
            })
            .collect::<lensform::Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let checked = count * (count + 1) / 2;
        checks.push(Check::new(
            "pair_levels",
            format!("{checked} pairs"),
            format!("{checked} pairs, {} disagreeing", disagreements.len()).replace(", 0 disagreeing", ""),
        ));
        checks.extend(disagreements);
        apply_checks(&mut outcome, &checks);
    }
    Ok(outcome)
}
