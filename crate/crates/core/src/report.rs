//! Builds the full chart set for a scores table.
//!
//! For each of lexical and grammar: per-speaker mean and standard deviation
//! bars, an announcement-speech comparison, and one time series per
//! speaker. Each chart is emitted as `<name>.svg` plus `<name>.csv`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::chart::{auto_range, ChartKind, ChartSpec, Series, GRADE_RANGE};
use crate::error::{Error, Result};
use crate::pipeline::{
    aggregate, filter_occasion, format_date, speakers, time_series, Column, ScoreRecord,
};

pub const ANNOUNCEMENT_OCCASION: &str = "Campaign Announcement";

const MEASURES: [Column; 2] = [Column::Lexical, Column::Grammar];

/// One output chart, named without extension.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedChart {
    pub name: String,
    pub spec: ChartSpec,
}

fn title_case(c: Column) -> &'static str {
    match c {
        Column::Lexical => "Lexical",
        Column::Grammar => "Grammar",
        Column::Fk => "Flesch-Kincaid",
        Column::DaleChall => "Dale-Chall",
    }
}

/// File-name-safe form of a speaker name.
pub fn file_stem(speaker: &str) -> String {
    speaker
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn build_charts(records: &[ScoreRecord]) -> Result<Vec<NamedChart>> {
    if records.is_empty() {
        return Err(Error::Format("no score records to report".into()));
    }
    let mut charts = Vec::new();

    for column in MEASURES {
        let stats = aggregate(records, column);
        if stats.is_empty() {
            log::warn!("no {column} scores; skipping {column} charts");
            continue;
        }
        charts.push(NamedChart {
            name: format!("{column}_mean"),
            spec: ChartSpec {
                kind: ChartKind::Bar,
                title: format!("{} level: mean per speaker", title_case(column)),
                y_label: "grade".into(),
                series: vec![Series {
                    label: "mean".into(),
                    points: stats
                        .iter()
                        .map(|s| (s.group_key.clone(), s.mean))
                        .collect(),
                }],
                y_range: GRADE_RANGE,
            },
        });
        let sds: Vec<(String, f64)> = stats
            .iter()
            .filter_map(|s| s.sd.map(|sd| (s.group_key.clone(), sd)))
            .collect();
        if sds.is_empty() {
            log::warn!("no speaker has two {column} scores; skipping {column}_sd");
        } else {
            charts.push(NamedChart {
                name: format!("{column}_sd"),
                spec: ChartSpec {
                    kind: ChartKind::Bar,
                    title: format!(
                        "{} level: standard deviation per speaker",
                        title_case(column)
                    ),
                    y_label: "standard deviation".into(),
                    y_range: auto_range(sds.iter().map(|(_, v)| *v)),
                    series: vec![Series {
                        label: "sd".into(),
                        points: sds,
                    }],
                },
            });
        }

        let announcements = aggregate(&filter_occasion(records, ANNOUNCEMENT_OCCASION), column);
        if announcements.is_empty() {
            log::warn!("no announcement speeches with {column} scores");
        } else {
            let overall: BTreeMap<&str, f64> = stats
                .iter()
                .map(|s| (s.group_key.as_str(), s.mean))
                .collect();
            charts.push(NamedChart {
                name: format!("announcement_{column}"),
                spec: ChartSpec {
                    kind: ChartKind::GroupedBar,
                    title: format!(
                        "{} level of candidacy announcement speeches",
                        title_case(column)
                    ),
                    y_label: "grade".into(),
                    series: vec![
                        Series {
                            label: "announcement".into(),
                            points: announcements
                                .iter()
                                .map(|s| (s.group_key.clone(), s.mean))
                                .collect(),
                        },
                        Series {
                            label: "all speeches (mean)".into(),
                            points: announcements
                                .iter()
                                .map(|s| (s.group_key.clone(), overall[s.group_key.as_str()]))
                                .collect(),
                        },
                    ],
                    y_range: GRADE_RANGE,
                },
            });
        }
    }

    for speaker in speakers(records) {
        let series = time_series(records, &speaker);
        for column in MEASURES {
            let points: Vec<(String, f64)> = series
                .iter()
                .filter_map(|p| {
                    let v = match column {
                        Column::Lexical => p.lexical.map(|g| f64::from(g.value())),
                        _ => p.grammar,
                    };
                    v.map(|v| (format_date(p.date), v))
                })
                .collect();
            if points.is_empty() {
                continue;
            }
            charts.push(NamedChart {
                name: format!("timeseries_{}_{column}", file_stem(&speaker)),
                spec: ChartSpec {
                    kind: ChartKind::Line,
                    title: format!("Evolution of {column} level over time: {speaker}"),
                    y_label: "grade".into(),
                    series: vec![Series {
                        label: speaker.clone(),
                        points: dedupe_dates(points),
                    }],
                    y_range: GRADE_RANGE,
                },
            });
        }
    }
    Ok(charts)
}

/// Line charts use dates as categories; repeated dates get a `#n` suffix.
fn dedupe_dates(points: Vec<(String, f64)>) -> Vec<(String, f64)> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    points
        .into_iter()
        .map(|(x, v)| {
            let n = seen.entry(x.clone()).or_insert(0);
            *n += 1;
            if *n == 1 {
                (x, v)
            } else {
                (format!("{x} #{n}"), v)
            }
        })
        .collect()
}

/// Renders every chart and writes `.svg` and `.csv` files into `out_dir`,
/// in a fixed order. Returns the written file names.
pub fn write_report(records: &[ScoreRecord], out_dir: &Path) -> Result<Vec<String>> {
    let charts = build_charts(records)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    for chart in &charts {
        let svg = chart.spec.render_svg()?;
        for (ext, body) in [("svg", svg), ("csv", chart.spec.to_csv())] {
            let name = format!("{}.{ext}", chart.name);
            let path = out_dir.join(&name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
            written.push(name);
        }
    }
    Ok(written)
}
