// Benchmark all three variants on random Cournot-type instances and print
// the CSV table.

use hybrid_eq::bench::{run_suite, write_report, ReportFormat, SuiteConfig};
use hybrid_eq::Variant;

fn main() {
    let mut rows = Vec::new();
    for variant in Variant::ALL {
        let table = run_suite(&SuiteConfig::new(vec![5, 10], 4, variant, 0)).unwrap();
        for note in table.footnotes() {
            eprintln!("{note}");
        }
        rows.extend(table.rows);
    }
    write_report(&rows, ReportFormat::Csv, std::io::stdout().lock()).unwrap();
}
