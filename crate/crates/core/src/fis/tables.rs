//! Shipped rule tables, stored verbatim as printed, plus the label
//! normalization that maps the printed abbreviations onto term names.

/// Distance, residual energy, concentration -> cluster radius, CH chance.
pub const TYPE1_RULES: &str = "\
Close\tLess\tHigh\tVery small\tVery poor
Close\tLess\tMed\tSmall\tPoor
Close\tLess\tLow\tRather small\tBelow average
Close\tAvg\tHigh\tSmall\tAvg
Close\tAvg\tMed\tRather small\tBelow avg
Close\tAvg\tLow\tMedium small\tPoor
Close\tHigh\tHigh\tRather small\tVery strong
Close\tHigh\tMed\tSmall\tStrong
Close\tHigh\tLow\tMedium small\tAbove avg
Far\tLess\tHigh\tMedium small\tAvg
Far\tLess\tMed\tRather small\tBelow avg
Far\tLess\tLow\tSmall\tPoor
Far\tAvg\tHigh\tMedium large\tBelow avg
Far\tAvg\tMed\tMedium\tAvg
Far\tAvg\tLow\tMedium small\tBelow avg
Far\tHigh\tHigh\tMedium large\tStrong
Far\tHigh\tMed\tMedium\tAbove avg
Far\tHigh\tLow\tMedium small\tAvg
Farthest\tLess\tHigh\tLarge\tPoor
Farthest\tLess\tMed\tMedium large\tVery poor
Farthest\tLess\tLow\tMedium\tBelow avg
Farthest\tAvg\tHigh\tRather large\tAvg
Farthest\tAvg\tMed\tLarge\tBelow avg
Farthest\tAvg\tLow\tMedium large\tAbove avg
Farthest\tHigh\tHigh\tLarge\tVery strong
Farthest\tHigh\tMed\tRather large\tStrong
Farthest\tHigh\tLow\tVery large\tAbove avg
";

/// Distance, residual energy -> radius, chance.
pub const TYPE2_RULES: &str = "\
Proximate\tLow\tVS\tVW
Proximate\tMed\tSmall\tW
Proximate\tAdv\tMed\tMed
Moderate\tLow\tSmall\tW
Moderate\tMed\tMed. Small\tMed
Moderate\tAdv\tMed\tHM
Far\tLow\tMed. Small\tStr
Far\tMed\tLar\tHM
Far\tAdv\tV. Lar\tStr
";

pub const T1_DISTANCE: [&str; 3] = ["Close", "Far", "Farthest"];
pub const T1_ENERGY: [&str; 3] = ["Less", "Average", "High"];
pub const T1_CONCENTRATION: [&str; 3] = ["Low", "Medium", "High"];
pub const T1_RADIUS: [&str; 9] = [
    "Very small",
    "Small",
    "Rather small",
    "Medium small",
    "Medium",
    "Medium large",
    "Rather large",
    "Large",
    "Very large",
];
pub const T1_CHANCE: [&str; 7] = [
    "Very poor",
    "Poor",
    "Below average",
    "Average",
    "Above average",
    "Strong",
    "Very strong",
];

pub const T2_DISTANCE: [&str; 3] = ["Proximate", "Moderate", "Far"];
pub const T2_ENERGY: [&str; 3] = ["Low", "Medium", "Advanced"];
pub const T2_RADIUS: [&str; 6] = [
    "Very small",
    "Small",
    "Medium small",
    "Medium",
    "Large",
    "Very large",
];
pub const T2_CHANCE: [&str; 6] = [
    "Very weak",
    "Weak",
    "Medium",
    "Higher medium",
    "Strong",
    "Very strong",
];

/// Abbreviations used in the printed tables, per variable.
pub fn aliases(variable: &str) -> &'static [(&'static str, &'static str)] {
    match variable {
        "energy" => &[("Avg", "Average"), ("Med", "Medium"), ("Adv", "Advanced")],
        "concentration" => &[("Med", "Medium")],
        "chance" => &[
            ("Avg", "Average"),
            ("Below avg", "Below average"),
            ("Above avg", "Above average"),
            ("VW", "Very weak"),
            ("W", "Weak"),
            ("Med", "Medium"),
            ("M", "Medium"),
            ("HM", "Higher medium"),
            ("Str", "Strong"),
            ("S", "Strong"),
            ("VS", "Very strong"),
        ],
        "radius" => &[
            ("VS", "Very small"),
            ("Med. Small", "Medium small"),
            ("Med", "Medium"),
            ("Lar", "Large"),
            ("V. Lar", "Very large"),
        ],
        _ => &[],
    }
}

/// Resolves a printed label against `terms`, case-insensitively, through
/// the variable's abbreviation list.
pub fn resolve<'a>(
    variable: &str,
    label: &str,
    terms: impl IntoIterator<Item = &'a str> + Clone,
) -> Option<usize> {
    let label = label.trim();
    let find = |l: &str| {
        terms
            .clone()
            .into_iter()
            .position(|t| t.eq_ignore_ascii_case(l))
    };
    find(label).or_else(|| {
        aliases(variable)
            .iter()
            .find(|(short, _)| short.eq_ignore_ascii_case(label))
            .and_then(|(_, full)| find(full))
    })
}

/// Splits a tab-separated table into rows of trimmed cells.
pub fn rows(table: &str) -> Vec<Vec<&str>> {
    table
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split('\t').map(str::trim).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_printed_label_resolves() {
        for row in rows(TYPE1_RULES) {
            assert!(
                resolve("distance", row[0], T1_DISTANCE).is_some(),
                "{row:?}"
            );
            assert!(resolve("energy", row[1], T1_ENERGY).is_some(), "{row:?}");
            assert!(
                resolve("concentration", row[2], T1_CONCENTRATION).is_some(),
                "{row:?}"
            );
            assert!(resolve("radius", row[3], T1_RADIUS).is_some(), "{row:?}");
            assert!(resolve("chance", row[4], T1_CHANCE).is_some(), "{row:?}");
        }
        for row in rows(TYPE2_RULES) {
            assert!(
                resolve("distance", row[0], T2_DISTANCE).is_some(),
                "{row:?}"
            );
            assert!(resolve("energy", row[1], T2_ENERGY).is_some(), "{row:?}");
            assert!(resolve("radius", row[2], T2_RADIUS).is_some(), "{row:?}");
            assert!(resolve("chance", row[3], T2_CHANCE).is_some(), "{row:?}");
        }
    }

    #[test]
    fn vs_is_per_variable() {
        assert_eq!(resolve("radius", "VS", T2_RADIUS), Some(0));
        assert_eq!(resolve("chance", "VS", T2_CHANCE), Some(5));
        assert_eq!(resolve("radius", "bogus", T2_RADIUS), None);
    }
}
