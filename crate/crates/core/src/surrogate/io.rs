//! Text serialization of fitted models.
//!
//! ```text
//! SURROGATEv1
//! kind rbf_elm
//! seed 7
//! ...
//! array centers 300 2
//! <row>
//! ...
//! end
//! ```
//!
//! Header lines are `key value`; each `array name rows cols` block is
//! followed by `rows` lines of `cols` numbers in row-major order.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use super::{AdamState, ElmModel, FitInfo, Layer, MlpModel, RbfElmModel, SurrogateModel};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::textio::{fmt_real, parse_real, Lines};

pub const SURROGATE_MAGIC: &str = "SURROGATEv1";

struct Writer<W: Write> {
    w: W,
}

impl<W: Write> Writer<W> {
    fn key(&mut self, k: &str, v: impl std::fmt::Display) -> Result<()> {
        writeln!(self.w, "{k} {v}")?;
        Ok(())
    }

    fn real(&mut self, k: &str, v: f64) -> Result<()> {
        self.key(k, fmt_real(v))
    }

    fn array(&mut self, name: &str, m: &DMatrix<f64>) -> Result<()> {
        writeln!(self.w, "array {name} {} {}", m.nrows(), m.ncols())?;
        for row in m.row_iter() {
            let line: Vec<String> = row.iter().map(|&v| fmt_real(v)).collect();
            writeln!(self.w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    fn vector(&mut self, name: &str, v: &[f64]) -> Result<()> {
        self.array(name, &DMatrix::from_column_slice(v.len(), 1, v))
    }

    fn fit_info(&mut self, info: Option<&FitInfo>) -> Result<()> {
        if let Some(info) = info {
            self.real("residual_norm", info.residual_norm)?;
            self.real("lambda", info.lambda)?;
        }
        Ok(())
    }
}

fn join_sizes(sizes: &[usize]) -> String {
    sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

impl SurrogateModel {
    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut out = Writer { w };
        writeln!(out.w, "{SURROGATE_MAGIC}")?;
        out.key("kind", self.kind())?;
        match self {
            SurrogateModel::Mlp(m) => {
                out.key("layers", join_sizes(m.layer_sizes()))?;
                if let Some(a) = m.adam_state() {
                    out.key("adam_step", a.step)?;
                }
                for (k, l) in m.layers().iter().enumerate() {
                    out.array(&format!("w{k}"), &l.weights)?;
                    out.vector(&format!("b{k}"), l.bias.as_slice())?;
                }
                if let Some(a) = m.adam_state() {
                    out.vector("adam_m", &a.m)?;
                    out.vector("adam_v", &a.v)?;
                }
            }
            SurrogateModel::Elm(m) => {
                out.key("arch", join_sizes(&m.arch()))?;
                out.key("seed", m.seed)?;
                out.real("init_range", m.init_range)?;
                out.fit_info(m.fit_info())?;
                out.array("w1", &m.w1)?;
                out.vector("b1", m.b1.as_slice())?;
                out.array("w2", &m.w2)?;
                out.vector("b2", m.b2.as_slice())?;
                if let Some(b) = m.beta() {
                    out.vector("beta", b)?;
                }
            }
            SurrogateModel::RbfElm(m) => {
                out.key("dim", m.input_dim())?;
                out.key("num_centers", m.centers.len())?;
                out.key("seed", m.seed)?;
                out.key("strategy", m.strategy)?;
                out.key("convention", m.convention)?;
                out.real("epsilon", m.epsilon)?;
                out.fit_info(m.fit_info())?;
                let c = DMatrix::from_fn(m.centers.len(), m.input_dim(), |i, j| m.centers[i].coords()[j]);
                out.array("centers", &c)?;
                if let Some(b) = m.beta() {
                    out.vector("beta", b)?;
                }
            }
        }
        writeln!(out.w, "end")?;
        out.w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: R) -> Result<SurrogateModel> {
        let doc = Document::parse(Lines::new(BufReader::new(r).lines()))?;
        let model = match doc.get("kind")? {
            "mlp" => SurrogateModel::Mlp(read_mlp(&doc)?),
            "elm" => SurrogateModel::Elm(read_elm(&doc)?),
            "rbf_elm" => SurrogateModel::RbfElm(read_rbf(&doc)?),
            other => return Err(Error::parse(doc.line_of("kind"), format!("unknown model kind `{other}`"))),
        };
        Ok(model)
    }
}

fn read_mlp(doc: &Document) -> Result<MlpModel> {
    let sizes = doc.sizes("layers")?;
    if sizes.len() < 2 {
        return Err(Error::parse(doc.line_of("layers"), "need at least two layer sizes"));
    }
    let layers = (0..sizes.len() - 1)
        .map(|k| {
            Ok(Layer {
                weights: doc.array(&format!("w{k}"), sizes[k + 1], sizes[k])?,
                bias: doc.vector(&format!("b{k}"), sizes[k + 1])?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = MlpModel::from_layers(layers).map_err(|e| Error::parse(doc.line_of("layers"), e.to_string()))?;
    if doc.has("adam_step") {
        let p = m.num_parameters();
        let state = AdamState {
            step: doc.parsed("adam_step")?,
            m: doc.vector("adam_m", p)?.as_slice().to_vec(),
            v: doc.vector("adam_v", p)?.as_slice().to_vec(),
        };
        m.set_adam_state(Some(state))?;
    }
    Ok(m)
}

fn read_elm(doc: &Document) -> Result<ElmModel> {
    let arch = doc.sizes("arch")?;
    let &[d0, d1, d2, 1] = &arch[..] else {
        return Err(Error::parse(doc.line_of("arch"), format!("bad ELM architecture {arch:?}")));
    };
    let mut m = ElmModel::from_hidden(
        doc.array("w1", d1, d0)?,
        doc.vector("b1", d1)?,
        doc.array("w2", d2, d1)?,
        doc.vector("b2", d2)?,
    )
    .map_err(|e| Error::parse(doc.line_of("arch"), e.to_string()))?;
    m.seed = doc.parsed("seed")?;
    m.init_range = doc.real("init_range")?;
    if doc.has("beta") {
        m.beta = Some(doc.vector("beta", d2)?.as_slice().to_vec());
    }
    m.fit_info = doc.fit_info()?;
    Ok(m)
}

fn read_rbf(doc: &Document) -> Result<RbfElmModel> {
    let dim: usize = doc.parsed("dim")?;
    let nc: usize = doc.parsed("num_centers")?;
    let c = doc.array("centers", nc, dim)?;
    let centers = (0..nc)
        .map(|i| Point::from_slice(c.row(i).transpose().as_slice()))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::parse(doc.line_of("dim"), e.to_string()))?;
    let mut m = RbfElmModel::with_centers(centers, doc.real("epsilon")?, doc.parsed("convention")?)
        .map_err(|e| Error::parse(doc.line_of("epsilon"), e.to_string()))?;
    m.strategy = doc.parsed("strategy")?;
    m.seed = doc.parsed("seed")?;
    if doc.has("beta") {
        m.beta = Some(doc.vector("beta", nc)?.as_slice().to_vec());
    }
    m.fit_info = doc.fit_info()?;
    Ok(m)
}

/// Parsed key lines and arrays, each remembering its source line.
struct Document {
    keys: BTreeMap<String, (usize, String)>,
    arrays: BTreeMap<String, (usize, DMatrix<f64>)>,
    end_line: usize,
}

impl Document {
    fn parse<B: BufRead>(mut lines: Lines<B>) -> Result<Document> {
        let (ln, first) = lines.next_required("header")?;
        if first.trim() != SURROGATE_MAGIC {
            return Err(Error::parse(
                ln,
                format!("expected `{SURROGATE_MAGIC}` header, found `{}`", first.trim()),
            ));
        }
        let mut doc = Document {
            keys: BTreeMap::new(),
            arrays: BTreeMap::new(),
            end_line: ln,
        };
        loop {
            let (ln, l) = lines.next_required("`end`")?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks[..] {
                ["end"] => {
                    doc.end_line = ln;
                    return Ok(doc);
                }
                ["array", name, rows, cols] => {
                    let parse = |t: &str| {
                        t.parse::<usize>()
                            .map_err(|_| Error::parse(ln, format!("bad array size `{t}`")))
                    };
                    let (r, c) = (parse(rows)?, parse(cols)?);
                    let mut data = Vec::with_capacity(r * c);
                    for _ in 0..r {
                        data.extend(lines.reals(c)?.1);
                    }
                    if doc.arrays.insert(name.to_string(), (ln, DMatrix::from_row_slice(r, c, &data))).is_some() {
                        return Err(Error::parse(ln, format!("duplicate array `{name}`")));
                    }
                }
                [key, value] => {
                    if doc.keys.insert(key.to_string(), (ln, value.to_string())).is_some() {
                        return Err(Error::parse(ln, format!("duplicate key `{key}`")));
                    }
                }
                _ => return Err(Error::parse(ln, format!("unrecognized line `{}`", l.trim()))),
            }
        }
    }

    fn has(&self, name: &str) -> bool {
        self.keys.contains_key(name) || self.arrays.contains_key(name)
    }

    fn line_of(&self, name: &str) -> usize {
        self.keys
            .get(name)
            .map(|k| k.0)
            .or_else(|| self.arrays.get(name).map(|a| a.0))
            .unwrap_or(self.end_line)
    }

    fn get(&self, key: &str) -> Result<&str> {
        self.keys
            .get(key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::parse(self.end_line, format!("missing key `{key}`")))
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<T> {
        let v = self.get(key)?;
        v.parse()
            .map_err(|_| Error::parse(self.line_of(key), format!("bad value `{v}` for `{key}`")))
    }

    fn real(&self, key: &str) -> Result<f64> {
        parse_real(self.get(key)?, self.line_of(key))
    }

    fn sizes(&self, key: &str) -> Result<Vec<usize>> {
        self.get(key)?
            .split(',')
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::parse(self.line_of(key), format!("bad size `{t}` in `{key}`")))
            })
            .collect()
    }

    fn array(&self, name: &str, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
        let (ln, m) = self
            .arrays
            .get(name)
            .ok_or_else(|| Error::parse(self.end_line, format!("missing array `{name}`")))?;
        if m.shape() != (rows, cols) {
            return Err(Error::parse(
                *ln,
                format!("array `{name}` is {}x{}, expected {rows}x{cols}", m.nrows(), m.ncols()),
            ));
        }
        Ok(m.clone())
    }

    fn vector(&self, name: &str, len: usize) -> Result<DVector<f64>> {
        Ok(self.array(name, len, 1)?.column(0).into_owned())
    }

    fn fit_info(&self) -> Result<Option<FitInfo>> {
        if !self.has("residual_norm") {
            return Ok(None);
        }
        Ok(Some(FitInfo {
            residual_norm: self.real("residual_norm")?,
            lambda: self.real("lambda")?,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surrogate::{elm_init, mlp_init, Convention};

    fn round_trip(m: &SurrogateModel) -> SurrogateModel {
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        SurrogateModel::read_from(&buf[..]).unwrap()
    }

    #[test]
    fn every_kind_round_trips_bit_exactly() {
        let mlp: SurrogateModel = mlp_init(&[2, 3, 1], 4).unwrap().into();
        assert_eq!(round_trip(&mlp), mlp);
        let elm = elm_init(&[1, 3, 5, 1], 0.4, 2).unwrap();
        let elm: SurrogateModel = elm.with_beta(vec![0.1, 1.0 / 3.0, -2.0, 1e-300, 5.0]).unwrap().into();
        assert_eq!(round_trip(&elm), elm);
        let rbf = RbfElmModel::with_centers(vec![Point::new2(0.1, 0.2), Point::new2(-0.5, 0.9)], 60.0, Convention::Width)
            .unwrap()
            .with_beta(vec![std::f64::consts::E, -0.25])
            .unwrap();
        let rbf: SurrogateModel = rbf.into();
        assert_eq!(round_trip(&rbf), rbf);
    }

    #[test]
    fn bad_files_are_parse_errors() {
        let r = SurrogateModel::read_from("MODELv9\nkind mlp\nend\n".as_bytes());
        assert!(matches!(r, Err(Error::Parse { line: 1, .. })));
        let r = SurrogateModel::read_from("SURROGATEv1\nkind svm\nend\n".as_bytes());
        assert!(matches!(r, Err(Error::Parse { line: 2, .. })));
        let r = SurrogateModel::read_from("SURROGATEv1\nkind mlp\nlayers 1,1\narray w0 1 1\n0.5\n".as_bytes());
        assert!(matches!(r, Err(Error::Parse { .. })));
        let r = SurrogateModel::read_from("SURROGATEv1\nkind mlp\nlayers 1,1\narray w0 1 2\n0.5 1\narray b0 1 1\n0\nend\n".as_bytes());
        assert!(matches!(r, Err(Error::Parse { line: 4, .. })));
    }
}
