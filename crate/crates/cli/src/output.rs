//! Text, JSON and CSV renderings.
//!
//! CSV column orders are fixed:
//! - counts: `k,n,dim,degree,total`
//! - solutions: `id,real,residual,p01_re,p01_im,…,p23_re,p23_im`
//! - doubling: `i,expected,real,distinct,converged,halvings,exhausted,radii`
//!   with radii joined by `;`
//! - verify: `id,recorded,recomputed,real_recorded,real_recomputed,pass`

use std::path::Path;

use serde::Serialize;

use quadtangent::grassmann::Counts;
use quadtangent::tracker::DoublingReport;

use crate::certificate::{Certificate, VerifyReport};
use crate::error::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn write(body: &str, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

pub fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_string(header: &[String], rows: Vec<Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn counts_text(c: &Counts) -> String {
    format!("dim={} degree={} total={}\n", c.dim, c.degree, c.total)
}

/// Rows `n` and `2^d·#`, tab separated. For lines a third row gives the
/// sphere count `3·2^(n-1)`.
pub fn counts_table_text(rows: &[Counts]) -> String {
    let line = |head: &str, cells: Vec<String>| format!("{head}\t{}\n", cells.join("\t"));
    let mut s = line("n", rows.iter().map(|c| c.n.to_string()).collect());
    s.push_str(&line("2^d*#", rows.iter().map(|c| c.total.to_string()).collect()));
    if rows.iter().all(|c| c.k == 1 && c.n < 120) {
        s.push_str(&line(
            "3*2^(n-1)",
            rows.iter().map(|c| (3u128 << (c.n - 1)).to_string()).collect(),
        ));
    }
    s
}

pub fn counts_csv(rows: &[Counts]) -> CliResult<String> {
    let header = ["k", "n", "dim", "degree", "total"].map(String::from);
    csv_string(
        &header,
        rows.iter()
            .map(|c| {
                vec![
                    c.k.to_string(),
                    c.n.to_string(),
                    c.dim.to_string(),
                    c.degree.to_string(),
                    c.total.to_string(),
                ]
            })
            .collect(),
    )
}

pub fn certificate_csv(cert: &Certificate) -> CliResult<String> {
    let labels: Vec<String> = cert
        .solutions
        .first()
        .map(|s| s.plucker.keys().cloned().collect())
        .unwrap_or_default();
    let mut header = vec!["id".to_string(), "real".into(), "residual".into()];
    for l in &labels {
        header.push(format!("p{l}_re"));
        header.push(format!("p{l}_im"));
    }
    let rows = cert
        .solutions
        .iter()
        .map(|s| {
            let mut r = vec![s.id.to_string(), s.real.to_string(), format!("{:e}", s.residual)];
            for [re, im] in s.plucker.values() {
                r.push(format!("{re:e}"));
                r.push(format!("{im:e}"));
            }
            r
        })
        .collect();
    csv_string(&header, rows)
}

pub fn certificate_text(cert: &Certificate) -> String {
    let worst = cert.solutions.iter().map(|s| s.residual).fold(0.0, f64::max);
    let mut s = format!(
        "{}: {} solutions, {} real, {} non-real, max residual {:.3e}\n",
        cert.command, cert.counts.total, cert.counts.real, cert.counts.nonreal, worst
    );
    for sol in &cert.solutions {
        let coords: Vec<String> = sol
            .plucker
            .iter()
            .map(|(k, [re, im])| {
                if *im == 0.0 {
                    format!("p{k}={re:.6}")
                } else {
                    format!("p{k}={re:.6}{im:+.6}i")
                }
            })
            .collect();
        s.push_str(&format!(
            "  #{:<3}{} res={:.1e}  {}\n",
            sol.id,
            if sol.real { "real   " } else { "complex" },
            sol.residual,
            coords.join(" ")
        ));
    }
    s
}

pub fn doubling_text(r: &DoublingReport) -> String {
    let mut s = String::from("i\texpected\treal\tradii\n");
    for st in &r.stages {
        let radii: Vec<String> = st
            .radii
            .iter()
            .map(quadtangent::exactnum::rational::format_rational)
            .collect();
        s.push_str(&format!(
            "{}\t{}\t{}\t{}{}\n",
            st.i,
            st.expected,
            st.real,
            if radii.is_empty() { "-".into() } else { radii.join(",") },
            if st.exhausted { "\t(search exhausted)" } else { "" }
        ));
    }
    s
}

pub fn doubling_csv(r: &DoublingReport) -> CliResult<String> {
    let header = [
        "i",
        "expected",
        "real",
        "distinct",
        "converged",
        "halvings",
        "exhausted",
        "radii",
    ]
    .map(String::from);
    csv_string(
        &header,
        r.stages
            .iter()
            .map(|st| {
                vec![
                    st.i.to_string(),
                    st.expected.to_string(),
                    st.real.to_string(),
                    st.distinct.to_string(),
                    st.converged.to_string(),
                    st.halvings.to_string(),
                    st.exhausted.to_string(),
                    st.radii
                        .iter()
                        .map(quadtangent::exactnum::rational::format_rational)
                        .collect::<Vec<_>>()
                        .join(";"),
                ]
            })
            .collect(),
    )
}

pub fn verify_text(r: &VerifyReport) -> String {
    let mut s = format!(
        "{}: {} solutions checked, scene hash {}\n",
        if r.pass { "PASS" } else { "FAIL" },
        r.solutions.len(),
        if r.scene_hash_ok { "ok" } else { "MISMATCH" }
    );
    for f in &r.failures {
        s.push_str(&format!("  {f}\n"));
    }
    s
}

pub fn verify_csv(r: &VerifyReport) -> CliResult<String> {
    let header = [
        "id",
        "recorded",
        "recomputed",
        "real_recorded",
        "real_recomputed",
        "pass",
    ]
    .map(String::from);
    csv_string(
        &header,
        r.solutions
            .iter()
            .map(|c| {
                vec![
                    c.id.to_string(),
                    format!("{:e}", c.recorded),
                    format!("{:e}", c.recomputed),
                    c.real_recorded.to_string(),
                    c.real_recomputed.to_string(),
                    c.pass.to_string(),
                ]
            })
            .collect(),
    )
}
