//! JSON and CSV writers with fixed float formatting.
//!
//! Every float is printed in scientific notation with 17 significant digits,
//! which round-trips and keeps repeated runs byte-identical. Non-finite values
//! become `null` in JSON and `inf`/`NaN` in CSV.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use foldylax_core::{CVec3, Complex64};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct FixedFloatFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloatFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        if v.is_finite() {
            w.write_all(fmt_f64(v).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloatFormatter(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("serializing plain data into memory cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// `[re, im]`
pub fn complex(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn complex3(v: CVec3) -> [[f64; 2]; 3] {
    [complex(v[0]), complex(v[1]), complex(v[2])]
}

/// One CSV table: comma separated, header row, `\n` line ends.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Header and row layout shared by the field tables:
/// three coordinates, then real and imaginary parts of each component, then `|E|^2`.
pub const FIELD_COLUMNS: [&str; 7] = ["re_e1", "im_e1", "re_e2", "im_e2", "re_e3", "im_e3", "abs_e_sq"];

pub fn field_table(coord_names: [&str; 3], rows: impl Iterator<Item = ([f64; 3], CVec3)>) -> String {
    let header: Vec<&str> = coord_names.iter().copied().chain(FIELD_COLUMNS).collect();
    let mut csv = Csv::new(&header);
    for (x, e) in rows {
        let abs_sq: f64 = e.iter().map(|c| c.norm_sqr()).sum();
        csv.row(&[x[0], x[1], x[2], e[0].re, e[0].im, e[1].re, e[1].im, e[2].re, e[2].im, abs_sq]);
    }
    csv.finish()
}
