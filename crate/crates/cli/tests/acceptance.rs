// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use akers_qca::akers::{
    akers_eval, build_nand, build_nor, build_xor, grid_eval, grid_eval_switched, switch_eval,
    truth_table, write_primitive,
};
use akers_qca::compiler::{
    compile, footprint, metrics_csv, GateMetrics, FLIPFLOP_REFERENCE, NAND_REFERENCE, NOR_REFERENCE,
};
use akers_qca::power::{analyze, trends, PowerParams};
use akers_qca::qca::library::{
    flipflop_layout, inverter_layout, majority_layout, wire_layout, FLIPFLOP_DATA, FLIPFLOP_ENABLE,
    FLIPFLOP_OUTPUT,
};
use akers_qca::qca::{
    run, run_with, write_layout, CellKind, ClockSchedule, InputVector, Logic, Polarization,
    QcaCell, QcaLayout, RunOptions,
};
use akers_qca::{AkersGrid, Assignment, Bit, ZSource};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn bits(v: &[u8]) -> Vec<Bit> {
    v.iter().map(|&b| Bit::new(b == 1)).collect()
}

fn vector(pairs: &[(&str, bool)]) -> InputVector {
    pairs
        .iter()
        .map(|(n, b)| (n.to_string(), Bit::new(*b)))
        .collect()
}

fn decode(layout: &QcaLayout, vectors: &[InputVector], cycles: usize) -> Vec<Logic> {
    let schedule = ClockSchedule::for_geometry(&layout.geometry);
    let trace = run(layout, &schedule, vectors, cycles).unwrap();
    trace.decoded_output(&layout.output_names()[0])
}

fn logic(v: &[u8]) -> Vec<Logic> {
    v.iter()
        .map(|&b| if b == 1 { Logic::One } else { Logic::Zero })
        .collect()
}

fn nand_table() -> Outcome {
    let got = truth_table(&build_nand()).unwrap().outputs;
    check(got == bits(&[1, 1, 1, 0]), format!("got {got:?}"))?;
    Ok("[1,1,1,0]".into())
}

fn nor_table() -> Outcome {
    let got = truth_table(&build_nor()).unwrap().outputs;
    check(got == bits(&[1, 0, 0, 0]), format!("got {got:?}"))?;
    Ok("[1,0,0,0]".into())
}

fn xor_parity() -> Outcome {
    let mut rows = 0;
    for n in 2..=4 {
        let table = truth_table(&build_xor(n).unwrap()).unwrap();
        check(
            table.outputs.len() == 1 << n,
            format!("xor({n}) has {} rows", table.outputs.len()),
        )?;
        for (i, out) in table.outputs.iter().enumerate() {
            check(
                out.is_set() == (i.count_ones() % 2 == 1),
                format!("xor({n}) row {i}"),
            )?;
            rows += 1;
        }
    }
    Ok(format!("{rows} vectors"))
}

fn random_grid(rng: &mut StdRng) -> AkersGrid {
    let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let names = ["A", "B", "C", "D"];
    let mut stored = 0;
    let cells = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| match rng.gen_range(0..4) {
                    0 => ZSource::var(names[rng.gen_range(0..4)]),
                    1 => ZSource::not_var(names[rng.gen_range(0..4)]),
                    2 => ZSource::Const(Bit::new(rng.gen())),
                    _ => {
                        stored += 1;
                        ZSource::Stored(stored - 1)
                    }
                })
                .collect()
        })
        .collect();
    AkersGrid::from_rows(cells, rng.gen()).unwrap()
}

fn switch_equivalence() -> Outcome {
    for x in [Bit::ZERO, Bit::ONE] {
        for y in [Bit::ZERO, Bit::ONE] {
            for b in [Bit::ZERO, Bit::ONE] {
                let via_switch = switch_eval(x, y, &write_primitive(b)).unwrap();
                check(
                    via_switch == akers_eval(x, y, b),
                    format!("cell ({x},{y},{b})"),
                )?;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut compared = 0;
    for g in 0..100 {
        let grid = random_grid(&mut rng);
        let stored: Vec<Bit> = (0..grid.stored_count())
            .map(|_| Bit::new(rng.gen()))
            .collect();
        let vars = grid.variables();
        for i in 0..1usize << vars.len() {
            let assignment: Assignment = vars
                .iter()
                .enumerate()
                .map(|(k, v)| (v.clone(), Bit::new(i >> (vars.len() - 1 - k) & 1 == 1)))
                .collect();
            let direct = grid_eval(&grid, &assignment, &stored).unwrap();
            let switched = grid_eval_switched(&grid, &assignment, &stored).unwrap();
            check(direct == switched, format!("grid {g}, assignment {i}"))?;
            compared += 1;
        }
    }
    Ok(format!(
        "8 cells + 100 grids, {compared} assignments, 0 mismatches"
    ))
}

fn primitives() -> Outcome {
    let wire = wire_layout(8).unwrap();
    let schedule = ClockSchedule::for_geometry(&wire.geometry);
    let trace = run(
        &wire,
        &schedule,
        &[vector(&[("A", true)]), vector(&[("A", false)])],
        2,
    )
    .unwrap();
    let (hi, lo) = (trace.samples[0]["Y"], trace.samples[1]["Y"]);
    check(
        hi >= 0.95 && lo <= -0.95,
        format!("wire far end {hi:.3} / {lo:.3}"),
    )?;

    let inv = decode(
        &inverter_layout().unwrap(),
        &[vector(&[("A", false)]), vector(&[("A", true)])],
        2,
    );
    check(inv == logic(&[1, 0]), format!("inverter {inv:?}"))?;

    let maj = majority_layout().unwrap();
    let vectors: Vec<InputVector> = (0..8u8)
        .map(|i| vector(&[("A", i & 4 != 0), ("B", i & 2 != 0), ("C", i & 1 != 0)]))
        .collect();
    let want: Vec<Logic> = (0..8u32)
        .map(|i| {
            if i.count_ones() >= 2 {
                Logic::One
            } else {
                Logic::Zero
            }
        })
        .collect();
    let got = decode(&maj, &vectors, 2);
    check(got == want, format!("majority {got:?}"))?;
    Ok(format!("wire {hi:.3}/{lo:.3}, inverter and majority exact"))
}

fn flipflop() -> Outcome {
    let ff = flipflop_layout().unwrap();
    check(ff.len() == 30, format!("{} cells", ff.len()))?;
    let v = |en: bool, d: bool| vector(&[(FLIPFLOP_ENABLE, en), (FLIPFLOP_DATA, d)]);
    // write, then hold for four cycles against the opposite data value
    let mut vectors = Vec::new();
    for stored in [true, false] {
        vectors.push(v(true, stored));
        vectors.extend((0..4).map(|_| v(false, !stored)));
    }
    // enabled: follows D
    vectors.extend([v(true, true), v(true, false), v(true, true)]);
    let schedule = ClockSchedule::for_geometry(&ff.geometry);
    let trace = run(&ff, &schedule, &vectors, 2).unwrap();
    let got = trace.decoded_output(FLIPFLOP_OUTPUT);
    let want = logic(&[1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 1, 0, 1]);
    check(got == want, format!("Q {got:?}"))?;
    Ok("30 cells, holds 1 and 0 for 8 disabled cycles, follows D".into())
}

fn compiled(name: &str, grid: AkersGrid, want: &[u8]) -> Outcome {
    let start = Instant::now();
    let gate = compile(&grid).unwrap();
    let got = gate.physical_truth_table(&[]).unwrap();
    let elapsed = start.elapsed();
    check(
        !got.contains(&Logic::Indeterminate),
        format!("{name} indeterminate: {got:?}"),
    )?;
    check(got == logic(want), format!("{name} decodes {got:?}"))?;
    check(
        elapsed < Duration::from_secs(60),
        format!("{name} took {elapsed:?}"),
    )?;
    Ok(format!("{name} {} cells {:.2?}", gate.cell_count, elapsed))
}

fn compiled_gates() -> Outcome {
    let a = compiled("nand", build_nand(), &[1, 1, 1, 0])?;
    let b = compiled("nor", build_nor(), &[1, 0, 0, 0])?;
    Ok(format!("{a}; {b}"))
}

fn power_trends() -> Outcome {
    let mut notes = Vec::new();
    for (name, grid) in [("nand", build_nand()), ("nor", build_nor())] {
        let layout = compile(&grid).unwrap().layout;
        let report = analyze(&layout, &PowerParams::default()).unwrap();
        let t = trends(&report);
        check(t.total_increasing, format!("{name} total not increasing"))?;
        check(
            t.leakage_increasing,
            format!("{name} leakage not increasing"),
        )?;
        check(
            t.switching_decreasing,
            format!("{name} switching not decreasing"),
        )?;
        check(
            t.decomposition_error <= 1e-9,
            format!("{name} decomposition error {:e}", t.decomposition_error),
        )?;
        let avg: Vec<String> = report
            .rows
            .iter()
            .map(|r| format!("{:.1}", r.avg_circuit_dissipation))
            .collect();
        notes.push(format!("{name} avg {} meV", avg.join("/")));
    }
    Ok(notes.join(", "))
}

fn footprints() -> Outcome {
    let mut block = QcaLayout::default();
    for y in 0..10 {
        for x in 0..10 {
            block
                .add(QcaCell::new(format!("c{x}_{y}"), x, y, 0, CellKind::Normal))
                .unwrap();
        }
    }
    let fp = footprint(&block).unwrap();
    check(
        (fp.area_um2 - 0.04).abs() <= 1e-12,
        format!("10x10 block {} um2", fp.area_um2),
    )?;
    let rows: Vec<GateMetrics> = [
        ("flipflop", FLIPFLOP_REFERENCE, ",30,0.04"),
        ("nand", NAND_REFERENCE, ",147,0.31"),
        ("nor", NOR_REFERENCE, ",147,0.34"),
    ]
    .iter()
    .map(|(gate, reference, _)| GateMetrics {
        gate: gate.to_string(),
        footprint: fp,
        reference: Some(*reference),
    })
    .collect();
    let csv = metrics_csv(&rows);
    for (line, suffix) in csv
        .lines()
        .skip(1)
        .zip([",30,0.04", ",147,0.31", ",147,0.34"])
    {
        check(line.ends_with(suffix), format!("metrics row `{line}`"))?;
    }
    Ok(format!(
        "10x10 block {} um2, references 30/0.04 147/0.31 147/0.34",
        fp.area_um2
    ))
}

fn cli(args: &[&str], dir: &Path) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_akers-qca"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    check(
        out.status.success(),
        format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)),
    )?;
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn trace_values(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').skip(2).map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn negate_fixed(layout: &QcaLayout) -> QcaLayout {
    let mut out = QcaLayout::new(layout.geometry, layout.params);
    for cell in layout.cells() {
        let mut cell = cell.clone();
        if let CellKind::FixedInput(p) = cell.kind {
            cell.kind = CellKind::FixedInput(Polarization::new(-p.value()));
        }
        out.add(cell).unwrap();
    }
    out
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = dir.path();
    let nand = compile(&build_nand()).unwrap();
    std::fs::write(dir.join("nand.qca"), write_layout(&nand.layout)).unwrap();
    std::fs::write(
        dir.join("maj.qca"),
        write_layout(&majority_layout().unwrap()),
    )
    .unwrap();

    let cycles = nand.min_cycles.to_string();
    let sim = ["sim-qca", "nand.qca", "--cycles", &cycles, "--all-cells"];
    let power = ["power", "nand.qca"];
    for args in [&sim[..], &power[..]] {
        check(
            cli(args, dir)? == cli(args, dir)?,
            format!("{args:?} differs between runs"),
        )?;
    }

    let traced = trace_values(&cli(&sim, dir)?);
    let max = traced.iter().flatten().fold(0.0_f64, |m, p| m.max(p.abs()));
    check(max <= 1.0, format!("|p| reaches {max}"))?;

    let up = trace_values(&cli(
        &[
            "sim-qca",
            "maj.qca",
            "--all-cells",
            "--vectors",
            "000,011,101,110",
        ],
        dir,
    )?);
    let down = trace_values(&cli(
        &[
            "sim-qca",
            "maj.qca",
            "--all-cells",
            "--vectors",
            "111,100,010,001",
        ],
        dir,
    )?);
    check(up.len() == down.len(), "trace lengths differ")?;
    for (a, b) in up.iter().flatten().zip(down.iter().flatten()) {
        check(*a == -*b, format!("majority trace {a} vs {b}"))?;
    }

    // compiled gate: negate the named inputs and every fixed cell
    let schedule = ClockSchedule::for_geometry(&nand.layout.geometry);
    let options = RunOptions {
        cycles_per_vector: nand.min_cycles,
        record_all: true,
    };
    let names = nand.layout.input_names();
    let vectors: Vec<InputVector> = (0..1usize << names.len())
        .map(|i| {
            names
                .iter()
                .enumerate()
                .map(|(k, n)| (n.clone(), Bit::new(i >> k & 1 == 1)))
                .collect()
        })
        .collect();
    let negated: Vec<InputVector> = vectors
        .iter()
        .map(|v| v.iter().map(|(n, b)| (n.clone(), !*b)).collect())
        .collect();
    let a = run_with(&nand.layout, &schedule, &vectors, options).unwrap();
    let b = run_with(&negate_fixed(&nand.layout), &schedule, &negated, options).unwrap();
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        for (x, y) in ra.values.iter().zip(&rb.values) {
            check(
                *x == -*y,
                format!("compiled nand step {}: {x} vs {y}", ra.step),
            )?;
        }
    }
    Ok(format!(
        "sim-qca and power byte-identical, max |p| {max:.6}, sign symmetric"
    ))
}

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Option<Duration>,
    body: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "nand truth table",
            limit: Some(Duration::from_secs(1)),
            body: nand_table,
        },
        Criterion {
            id: 2,
            name: "nor truth table",
            limit: Some(Duration::from_secs(1)),
            body: nor_table,
        },
        Criterion {
            id: 3,
            name: "xor parity n=2..4",
            limit: Some(Duration::from_secs(1)),
            body: xor_parity,
        },
        Criterion {
            id: 4,
            name: "switch model equivalence",
            limit: None,
            body: switch_equivalence,
        },
        Criterion {
            id: 5,
            name: "physical primitives",
            limit: Some(Duration::from_secs(10)),
            body: primitives,
        },
        Criterion {
            id: 6,
            name: "flip-flop",
            limit: None,
            body: flipflop,
        },
        Criterion {
            id: 7,
            name: "compiled gate equivalence",
            limit: None,
            body: compiled_gates,
        },
        Criterion {
            id: 8,
            name: "power trends",
            limit: None,
            body: power_trends,
        },
        Criterion {
            id: 9,
            name: "footprint arithmetic",
            limit: None,
            body: footprints,
        },
        Criterion {
            id: 10,
            name: "determinism and symmetry",
            limit: None,
            body: determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.body))
            .unwrap_or_else(|_| Err("panicked".into()))
            .and_then(|detail| match c.limit {
                Some(limit) if start.elapsed() > limit => {
                    Err(format!("took {:.2?}, limit {limit:?}", start.elapsed()))
                }
                _ => Ok(detail),
            });
        let elapsed = start.elapsed();
        match result {
            Ok(detail) => println!("PASS {:>2} {} ({elapsed:.2?}): {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {} ({elapsed:.2?}): {why}", c.id, c.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
