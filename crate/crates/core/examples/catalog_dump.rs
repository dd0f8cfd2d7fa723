//! Print the catalog as JSON; pipe an entry into `hnkit evaluate --data`.

use hnkit::catalog::{entries, entry};

fn main() -> hnkit::Result<()> {
    match std::env::args().nth(1) {
        Some(name) => println!(
            "{}",
            serde_json::to_string_pretty(&entry(&name)?.summary())?
        ),
        None => {
            let all: Vec<_> = entries().iter().map(|e| e.summary()).collect();
            println!("{}", serde_json::to_string_pretty(&all)?);
        }
    }
    Ok(())
}
