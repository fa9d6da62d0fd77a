// SPDX-License-Identifier: Apache-2.0

use akers_qca::akers::{build_nand, build_nor, build_xor, truth_table, truth_table_with};
use akers_qca::compiler::{
    compile, footprint, metrics_csv, CompileError, GateMetrics, PinSource, FLIPFLOP_REFERENCE,
    MAX_COMPILE_CELLS, NAND_REFERENCE, NOR_REFERENCE,
};
use akers_qca::qca::{write_layout, CellKind, Logic, QcaCell, QcaLayout};
use akers_qca::{AkersGrid, Bit, ZSource};
use proptest::prelude::*;

fn logical(grid: &AkersGrid) -> Vec<Logic> {
    truth_table(grid)
        .unwrap()
        .outputs
        .iter()
        .map(|&b| {
            if b == Bit::ONE {
                Logic::One
            } else {
                Logic::Zero
            }
        })
        .collect()
}

fn single(z: ZSource) -> AkersGrid {
    AkersGrid::from_rows(vec![vec![z]], false).unwrap()
}

#[test]
fn single_tiles_match_their_source() {
    for z in [
        ZSource::var("A"),
        ZSource::not_var("A"),
        ZSource::Const(Bit::ONE),
        ZSource::Const(Bit::ZERO),
    ] {
        let grid = single(z.clone());
        let gate = compile(&grid).unwrap();
        assert_eq!(
            gate.physical_truth_table(&[]).unwrap(),
            logical(&grid),
            "{z:?}"
        );
    }
}

#[test]
fn nand_and_nor_decode_exactly() {
    let nand = compile(&build_nand()).unwrap();
    assert_eq!(
        nand.physical_truth_table(&[]).unwrap(),
        [Logic::One, Logic::One, Logic::One, Logic::Zero]
    );
    let nor = compile(&build_nor()).unwrap();
    assert_eq!(
        nor.physical_truth_table(&[]).unwrap(),
        [Logic::One, Logic::Zero, Logic::Zero, Logic::Zero]
    );
}

#[test]
fn compiled_xor2_is_parity() {
    let grid = build_xor(2).unwrap();
    let gate = compile(&grid).unwrap();
    assert_eq!(gate.physical_truth_table(&[]).unwrap(), logical(&grid));
}

#[test]
fn compiled_xor3_is_parity() {
    let grid = build_xor(3).unwrap();
    let gate = compile(&grid).unwrap();
    assert_eq!(gate.physical_truth_table(&[]).unwrap(), logical(&grid));
}

#[test]
fn stored_bits_drive_their_own_pins() {
    let grid =
        AkersGrid::from_rows(vec![vec![ZSource::var("A"), ZSource::Stored(0)]], false).unwrap();
    let gate = compile(&grid).unwrap();
    assert_eq!(gate.input_names, ["A", "mem0"]);
    assert_eq!(gate.pins[1].source, PinSource::Stored(0));
    for bit in [Bit::ZERO, Bit::ONE] {
        let want: Vec<Logic> = truth_table_with(&grid, &[bit])
            .unwrap()
            .outputs
            .iter()
            .map(|&b| {
                if b == Bit::ONE {
                    Logic::One
                } else {
                    Logic::Zero
                }
            })
            .collect();
        assert_eq!(gate.physical_truth_table(&[bit]).unwrap(), want);
    }
    assert!(matches!(
        gate.physical_truth_table(&[]),
        Err(CompileError::MissingValue(_))
    ));
}

#[test]
fn repeated_variables_get_distinct_pins() {
    let gate = compile(&build_xor(2).unwrap()).unwrap();
    let mut names = gate.input_names.clone();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), gate.input_names.len());
    assert!(gate.input_names.iter().any(|n| n.contains('.')));
    assert_eq!(gate.layout.input_names().len(), gate.pins.len());
}

#[test]
fn compile_is_deterministic() {
    let a = compile(&build_nand()).unwrap();
    let b = compile(&build_nand()).unwrap();
    assert_eq!(write_layout(&a.layout), write_layout(&b.layout));
    assert_eq!(a, b);
}

#[test]
fn oversized_grids_are_rejected() {
    let grid = build_xor(4).unwrap();
    assert!(grid.cell_count() > MAX_COMPILE_CELLS);
    assert_eq!(
        compile(&grid),
        Err(CompileError::TooLarge(grid.cell_count()))
    );
}

#[test]
fn footprint_uses_pitch_extents() {
    let mut block = QcaLayout::default();
    for y in 0..10 {
        for x in 0..10 {
            block
                .add(QcaCell::new(format!("c{x}_{y}"), x, y, 0, CellKind::Normal))
                .unwrap();
        }
    }
    let fp = footprint(&block).unwrap();
    assert_eq!(fp.cell_count, 100);
    assert!((fp.width_nm - 200.0).abs() < 1e-12);
    assert!((fp.area_um2 - 0.04).abs() < 1e-12);

    let mut one = QcaLayout::default();
    one.add(QcaCell::new("a", 5, -3, 0, CellKind::Normal))
        .unwrap();
    assert!((footprint(&one).unwrap().area_um2 - 0.0004).abs() < 1e-15);

    assert_eq!(
        footprint(&QcaLayout::default()),
        Err(CompileError::EmptyLayout)
    );
}

#[test]
fn compiled_gate_reports_its_footprint() {
    let gate = compile(&build_nor()).unwrap();
    let fp = footprint(&gate.layout).unwrap();
    assert_eq!(gate.cell_count, gate.layout.len());
    assert_eq!(gate.footprint_um2, fp.area_um2);
}

#[test]
fn metrics_csv_carries_references() {
    let gate = compile(&build_nand()).unwrap();
    let fp = footprint(&gate.layout).unwrap();
    let rows = [
        GateMetrics {
            gate: "nand".into(),
            footprint: fp,
            reference: Some(NAND_REFERENCE),
        },
        GateMetrics {
            gate: "nor".into(),
            footprint: fp,
            reference: Some(NOR_REFERENCE),
        },
        GateMetrics {
            gate: "flipflop".into(),
            footprint: fp,
            reference: Some(FLIPFLOP_REFERENCE),
        },
        GateMetrics {
            gate: "xor2".into(),
            footprint: fp,
            reference: None,
        },
    ];
    let csv = metrics_csv(&rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "gate,cells,width_nm,height_nm,area_um2,ref_cells,ref_area_um2"
    );
    assert!(lines[1].starts_with("nand,") && lines[1].ends_with(",147,0.31"));
    assert!(lines[2].ends_with(",147,0.34"));
    assert!(lines[3].ends_with(",30,0.04"));
    assert!(lines[4].ends_with(",,"));
    assert!(!csv.contains('\r'));
}

fn z_source() -> impl Strategy<Value = ZSource> {
    prop_oneof![
        prop::sample::select(vec!["A", "B"]).prop_map(ZSource::var),
        prop::sample::select(vec!["A", "B"]).prop_map(ZSource::not_var),
        any::<bool>().prop_map(|b| ZSource::Const(Bit::new(b))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn small_grids_compile_to_their_truth_table(
        (rows, cols) in (1usize..=2, 1usize..=2),
        zs in prop::collection::vec(z_source(), 4),
        invert in any::<bool>(),
    ) {
        let cells: Vec<Vec<ZSource>> = (0..rows)
            .map(|r| zs[r * cols..(r + 1) * cols].to_vec())
            .collect();
        let grid = AkersGrid::from_rows(cells, invert).unwrap();
        let gate = compile(&grid).unwrap();
        prop_assert_eq!(gate.physical_truth_table(&[]).unwrap(), logical(&grid));
    }
}

proptest! {
    #[test]
    fn adding_cells_never_shrinks_metrics(
        cells in prop::collection::vec((-20i32..20, -20i32..20), 1..40)
    ) {
        let mut layout = QcaLayout::default();
        let mut last: Option<(usize, f64)> = None;
        for (i, (x, y)) in cells.into_iter().enumerate() {
            if layout.add(QcaCell::new(format!("c{i}"), x, y, 0, CellKind::Normal)).is_err() {
                continue;
            }
            let fp = footprint(&layout).unwrap();
            if let Some((count, area)) = last {
                prop_assert!(fp.cell_count > count);
                prop_assert!(fp.area_um2 >= area);
            }
            last = Some((fp.cell_count, fp.area_um2));
        }
    }
}
