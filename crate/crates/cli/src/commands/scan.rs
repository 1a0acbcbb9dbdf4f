use std::fmt::Write as _;

use belllab::scan::coefficients_for_concurrence;
use belllab::scan_region;

use super::{normalize_input, write_file};
use crate::args::{Format, ScanArgs, Sign};
use crate::error::{CliError, Result};

pub fn run(args: ScanArgs) -> Result<()> {
    let (c1, c2) = match (args.concurrence, args.c1, args.c2) {
        (Some(c), _, _) => {
            let (c1, c2) = coefficients_for_concurrence(c)?;
            (c1, if args.sign == Sign::Minus { -c2 } else { c2 })
        }
        (None, Some(c1), Some(c2)) => normalize_input(c1, c2)?,
        _ => return Err(CliError::Usage("give --concurrence or both --c1 and --c2".into())),
    };
    let grid = scan_region(args.plane, c1, c2, args.grid)?;

    let mut summary = String::new();
    writeln!(
        summary,
        "belllab {} scan plane={} c1={:.7} c2={:.7} concurrence={:.6} grid={}",
        belllab::VERSION,
        grid.plane,
        grid.c1,
        grid.c2,
        grid.concurrence,
        grid.grid_n()
    )
    .unwrap();
    writeln!(summary, "violating_fraction = {:.6}", grid.violating_fraction).unwrap();
    writeln!(summary, "max_bell_lhs       = {:.6}", grid.max_value()).unwrap();

    let render = |format: Format| -> Vec<u8> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string(&grid.to_json_value()).expect("grid serializes");
                s.push('\n');
                s.into_bytes()
            }
            _ => {
                let mut buf = Vec::new();
                grid.write_csv(&mut buf).expect("in-memory write");
                buf
            }
        }
    };

    match (&args.output.out, args.output.format) {
        (Some(path), format) => {
            let format = if format == Format::Text { Format::Csv } else { format };
            write_file(path, &render(format))?;
            print!("{summary}");
            println!("grid written to {}", path.display());
        }
        (None, Format::Text) => print!("{summary}"),
        (None, format) => {
            use std::io::Write;
            std::io::stdout().write_all(&render(format)).map_err(|e| CliError::io("<stdout>", e))?;
        }
    }
    Ok(())
}
