use polyuct_wasm::{bonus_curve, lake_search, successor_tails};

#[test]
fn bonus_curve_matches_practical_closed_form() {
    let curve = bonus_curve(1.0, 16.0, 4.0, 0.5, 10_000, 50);
    for (i, b) in curve.iter().enumerate() {
        let s = (i + 1) as f64;
        assert!((b - 2.0 * (100.0 / s).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn tails_decrease_in_z() {
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&successor_tails(1.0 / 3.0, 400, 0.5, 2.0, 4, 500, 1).unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    let upper: Vec<f64> = rows.iter().map(|r| r["upper"].as_f64().unwrap()).collect();
    assert!(upper.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn lake_cells_cover_the_grid() {
    let cells: Vec<serde_json::Value> = serde_json::from_str(&lake_search(64, 20, 0).unwrap()).unwrap();
    assert_eq!(cells.len(), 16);
    let terminal: Vec<u64> = cells
        .iter()
        .filter(|c| c["terminal"] == true)
        .map(|c| c["state"].as_u64().unwrap())
        .collect();
    assert_eq!(terminal, vec![5, 7, 11, 12, 15]);
    assert_eq!(cells[14]["best"], "Down");
}
