use serde_json::{json, Value};

use crate::geom::{Pose, Twist};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

/// 17 significant digits, enough to recover every `f64` exactly.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Table {
        Table {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_nums(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| Cell::Num(x)).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter()
                .map(|r| r.iter().map(Cell::json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// One polyline per numeric column against the first column.
    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 400.0;
        const PAD: f64 = 20.0;
        const COLORS: [&str; 6] = [
            "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
        ];

        let num = |r: &[Cell], j: usize| match r[j] {
            Cell::Num(x) if x.is_finite() => Some(x),
            _ => None,
        };
        let xs: Vec<Option<f64>> = self.rows.iter().map(|r| num(r, 0)).collect();
        let series: Vec<usize> = (1..self.columns.len())
            .filter(|&j| self.rows.iter().any(|r| num(r, j).is_some()))
            .collect();
        let bounds = |vals: &mut dyn Iterator<Item = f64>| {
            vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
        };
        let (x0, x1) = bounds(&mut xs.iter().flatten().copied());
        let (y0, y1) = bounds(
            &mut series
                .iter()
                .flat_map(|&j| self.rows.iter().filter_map(move |r| num(r, j))),
        );
        let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
        let sx = |x: f64| PAD + (x - x0) / span(x0, x1) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / span(y0, y1) * (H - 2.0 * PAD);

        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
        );
        for (k, &j) in series.iter().enumerate() {
            let points: Vec<String> = self
                .rows
                .iter()
                .zip(&xs)
                .filter_map(|(r, x)| Some(format!("{:.3},{:.3}", sx((*x)?), sy(num(r, j)?))))
                .collect();
            out.push_str(&format!(
                "<polyline data-column=\"{}\" fill=\"none\" stroke=\"{}\" points=\"{}\"/>\n",
                self.columns[j],
                COLORS[k % COLORS.len()],
                points.join(" ")
            ));
        }
        out.push_str("</svg>\n");
        out
    }
}

pub fn pose_json(p: &Pose) -> Value {
    json!({ "x": p.x, "y": p.y, "theta": p.theta })
}

pub fn twist_json(t: &Twist) -> Value {
    json!({ "x": t.x, "y": t.y, "theta": t.theta })
}

pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["a", "b", "label"]);
        t.push(vec![
            Cell::Num(0.1),
            Cell::Num(-0.25),
            Cell::Text("SR".into()),
        ]);
        t.push(vec![
            Cell::Num(1.0 / 3.0),
            Cell::Empty,
            Cell::Text("RS".into()),
        ]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "a,b,label");
        assert_eq!(lines[1], "1.0000000000000001e-1,-2.5000000000000000e-1,SR");
        assert!(!csv.contains('\r'));
        assert!(csv.ends_with('\n'));
        let third: f64 = lines[2].split(',').next().unwrap().parse().unwrap();
        assert_eq!(third, 1.0 / 3.0);
    }

    #[test]
    fn number_format_round_trips() {
        for x in [
            0.0,
            -0.0,
            1e-320,
            0.1,
            -0.25,
            1.0 / 3.0,
            123456.789,
            f64::MAX,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn json_and_svg() {
        let t = sample();
        let v = t.to_json();
        assert_eq!(v["columns"][2], "label");
        assert!(v["rows"][1][1].is_null());
        let svg = t.to_svg();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("data-column=\"b\""));
    }
}
