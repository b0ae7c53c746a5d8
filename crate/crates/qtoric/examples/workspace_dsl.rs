//! The declarative workspace language: define objects, run commands, and
//! round-trip through the JSON envelope.
//!
//! Run with: cargo run -p qtoric --example workspace_dsl

use qtoric::command::{run_command, Command};
use qtoric::workspace::{parse_workspace, serialize_workspace, workspace_to_json};

const SOURCE: &str = r#"
theta [[0,1],[-1,0]];

algebra T  = free(x:(1,0), xs:(-1,0)) / { xs*x - 1 };
algebra Fm = free(x:(1,0));
algebra K  = free();
algebra S2 = free(x1:(1,0), xs1:(-1,0), z:(0,0)) / { xs1*x1 + z^2 - 1 };

morphism conj : T -> T = [ q*x, q^-1*xs ];
cover hemis on S2 = { elements [ (1 - z)/2, (1 + z)/2 ], witnesses [ 1, 1 ] };
derivation euler on T = [ x, -xs ];

# command statements execute under `check`
normalize T "xs*x*xs";
xi-check Fm K --cap 1;
"#;

fn main() -> qtoric::Result<()> {
    let ws = parse_workspace(SOURCE)?;
    println!("parsed: {} algebras, {} morphisms, {} covers, {} derivations",
        ws.algebras.len(), ws.morphisms.len(), ws.covers.len(), ws.derivations.len());

    // `check` validates everything and runs the embedded commands.
    let report = run_command(&ws, &Command::parse_argv(&["check".into()])?)?;
    print!("{report}");

    // Any CLI verb works programmatically too.
    let out = run_command(
        &ws,
        &Command::parse_argv(&["te-aut".into(), "T".into(), "K".into(), "--cap".into(), "2".into()])?,
    )?;
    print!("{out}");

    // The canonical DSL and the JSON envelope both reproduce the workspace.
    let dsl = serialize_workspace(&ws)?;
    assert_eq!(parse_workspace(&dsl)?, ws);
    let json = serde_json::to_string_pretty(&workspace_to_json(&ws)?).unwrap();
    assert_eq!(parse_workspace(&json)?, ws);
    println!("round trips: DSL ok, JSON ok ({} bytes)", json.len());
    Ok(())
}
