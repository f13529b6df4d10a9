use kleinian::tables;
use kleinian::triangle::check_margulis_row;

#[test]
fn formula_agrees_with_oracle_on_submultiple_rows() {
    let mut errata = Vec::new();
    for row in tables::margulis_rows().unwrap() {
        let rep = check_margulis_row(&row).unwrap();
        let g = &rep.geometry;
        if g.all_submultiple {
            assert!(
                (rep.formula - rep.oracle).abs() <= 1e-6,
                "{} row {}: formula {} oracle {}",
                g.table,
                g.row,
                rep.formula,
                rep.oracle
            );
        }
        if rep.erratum {
            errata.push(format!("{} {}: printed {} computed {:.6}", g.table, g.row, g.printed, rep.formula));
        }
    }
    for e in &errata {
        println!("erratum {e}");
    }
}
