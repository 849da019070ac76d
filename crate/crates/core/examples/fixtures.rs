//! Regenerate the synthetic match fixtures:
//! `cargo run -p passflow-core --example fixtures -- fixtures`

use std::path::PathBuf;

use passflow_core::match_data::to_json;
use passflow_core::synthetic::{grouped_match, minimal_match, GroupedMatchSpec};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir)?;

    let tracked = grouped_match(&GroupedMatchSpec {
        seed: 7,
        build_up_phases: 30,
        counter_phases: 5,
        frame_rate: 1.0,
        ..Default::default()
    });
    std::fs::write(dir.join("grouped-tracked.json"), to_json(&tracked.record))?;

    let mut events_only = grouped_match(&GroupedMatchSpec {
        seed: 11,
        build_up_phases: 60,
        counter_phases: 8,
        ..Default::default()
    })
    .record;
    events_only.match_id = "grouped-events-only".into();
    std::fs::write(dir.join("grouped-events-only.json"), to_json(&events_only))?;

    std::fs::write(dir.join("minimal.json"), to_json(&minimal_match()))?;
    Ok(())
}
