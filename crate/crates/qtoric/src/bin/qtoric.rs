//! Thin command-line front end: loads a workspace file, runs one command,
//! prints the report. Exit codes: 0 ok, 1 validation failure, 2 parse
//! error, 3 internal invariant breach.

use qtoric::command::{run_command, Command};
use qtoric::workspace::{parse_workspace, Workspace};
use std::process::ExitCode;

const USAGE: &str = "\
usage: qtoric [--file WORKSPACE] COMMAND [ARGS...] [--cap N] [--q1]

commands:
  check                                  validate all objects, run file commands
  normalize ALGEBRA ELEMENT              reduce an element to normal form
  groebner ALGEBRA                       print the Groebner basis
  basis ALGEBRA DEGREE                   standard monomials at an H-degree
  graded-points ALGEBRA DEGREE           basis of a graded component
  hom-constraints SOURCE TARGET          cap-bounded Hom parameterization
  cover-check [ALGEBRA] COVER            validate a Zariski cover
  glue COVER PART...                     glue a matching family
  pullback-cover COVER MORPHISM          transport a cover along a morphism
  compose OUTER INNER                    compose two morphisms
  inverse-check SPACE STAGE MAP INV      verify a stage-element inverse
  te-aut SPACE STAGE                     tangent space of the automorphism group
  der-basis ALGEBRA                      braided derivation basis
  bracket LEFT RIGHT                     braided Lie bracket of two derivations
  xi-check SPACE STAGE                   compare the two derivation pictures
  export [PATH]                          write the JSON envelope
  import PATH                            load a file (DSL or JSON) and echo DSL

options:
  --file FILE   workspace to load (DSL text or JSON envelope)
  --cap N       total-degree cap for truncated computations (default 4)
  --q1          print coefficients specialized at q = 1
";

fn main() -> ExitCode {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args.iter().any(|a| a == "--help" || a == "-h") {
        print!("{USAGE}");
        return ExitCode::from(if args.is_empty() { 2 } else { 0 });
    }
    let mut file: Option<String> = None;
    if let Some(pos) = args.iter().position(|a| a == "--file" || a == "-f") {
        if pos + 1 >= args.len() {
            eprintln!("error: --file needs a path");
            return ExitCode::from(2);
        }
        file = Some(args.remove(pos + 1));
        args.remove(pos);
    }
    let workspace = match &file {
        None => Ok(Workspace::default()),
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| qtoric::Error::Validation { object: path.clone(), msg: e.to_string() })
            .and_then(|text| parse_workspace(&text)),
    };
    let workspace = match workspace {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let report = Command::parse_argv(&args).and_then(|cmd| run_command(&workspace, &cmd));
    match report {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
