use serde::Serialize;

pub fn json<T: Serialize + ?Sized>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Header row from the field names of `T`; `None` fields become empty cells.
pub fn csv<T: Serialize>(rows: &[T]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| anyhow::anyhow!("csv: {e}"))
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            rows.iter()
                .map(|r| r[i].chars().count())
                .chain([header[i].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

pub fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| format!("{v:.6}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        a: f64,
        b: Option<f64>,
        c: &'static str,
    }

    #[test]
    fn csv_uses_field_names_and_empty_cells() {
        let out = csv(&[
            Row {
                a: 0.5,
                b: None,
                c: "x",
            },
            Row {
                a: 1e-3,
                b: Some(2.0),
                c: "y,z",
            },
        ])
        .unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "a,b,c\n0.5,,x\n0.001,2.0,\"y,z\"\n");
    }

    #[test]
    fn table_pads_columns() {
        let t = table(&["m", "L"], &[vec!["10".into(), "0.5".into()]]);
        assert_eq!(t, "m   L\n10  0.5\n");
    }
}
