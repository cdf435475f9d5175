//! Times the trie against the ordered-map and hash-map baselines on a
//! small configuration and prints the results as CSV.

use exprtrie::bench::{
    check_agreement, corpus_for, run_suite_on, write_csv, BenchParams, Impl, Suite,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = BenchParams {
        map_size: 1000,
        expr_size: 50,
        reps: 3,
        ..BenchParams::default()
    };
    let mut results = Vec::new();
    for suite in [
        Suite::Lookup,
        Suite::LookupLam,
        Suite::FromList,
        Suite::SpaceApp1,
    ] {
        let corpus = corpus_for(suite, &params)?;
        let cells = Impl::ALL
            .iter()
            .map(|&imp| run_suite_on(suite, imp, &corpus, params.reps))
            .collect::<Result<Vec<_>, _>>()?;
        check_agreement(&cells)?;
        results.extend(cells);
    }
    write_csv(std::io::stdout().lock(), &results)?;
    Ok(())
}
