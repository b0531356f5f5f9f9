//! Binary model container.
//!
//! Little-endian layout:
//!
//! ```text
//! magic        8 bytes  "AULMNNLM"
//! version      u32      (1)
//! order, vocab_size, embed_dim, hidden_dim           u64 x 4
//! learning_rate, momentum                            f64 x 2
//! batch_size, max_epochs, patience, seed             u64 x 4
//! init_scale                                         f64
//! tensor count u32      (5)
//! per tensor:  rank u32, dims u64 x rank, values f64 x prod(dims), row-major
//! ```
//!
//! Tensors appear in the order embed, hidden_w, hidden_b, output_w, output_b.
//! Values are stored as raw IEEE-754 bits, so a round trip is bit-exact.

use std::io::{Read, Write};
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

use super::config::NnlmConfig;
use super::model::NnlmModel;
use super::params::NnlmParams;

const MAGIC: &[u8; 8] = b"AULMNNLM";
pub const FORMAT_VERSION: u32 = 1;

fn put_u32<W: Write>(w: &mut W, x: u32) -> std::io::Result<()> {
    w.write_all(&x.to_le_bytes())
}
fn put_u64<W: Write>(w: &mut W, x: u64) -> std::io::Result<()> {
    w.write_all(&x.to_le_bytes())
}
fn put_f64<W: Write>(w: &mut W, x: f64) -> std::io::Result<()> {
    w.write_all(&x.to_le_bytes())
}

impl NnlmModel {
    pub fn write_to<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let c = &self.config;
        w.write_all(MAGIC)?;
        put_u32(w, FORMAT_VERSION)?;
        for x in [c.order, c.vocab_size, c.embed_dim, c.hidden_dim] {
            put_u64(w, x as u64)?;
        }
        put_f64(w, c.learning_rate)?;
        put_f64(w, c.momentum)?;
        for x in [c.batch_size as u64, c.max_epochs as u64, c.patience as u64, c.seed] {
            put_u64(w, x)?;
        }
        put_f64(w, c.init_scale)?;
        put_u32(w, 5)?;
        for (shape, data) in self.params.shapes().iter().zip(self.params.tensors()) {
            put_u32(w, shape.len() as u32)?;
            for &d in shape {
                put_u64(w, d as u64)?;
            }
            for &x in data {
                put_f64(w, x)?;
            }
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes, path)
    }

    /// Parses a container; errors report the byte offset in place of a line.
    pub fn from_bytes(bytes: &[u8], path: &Path) -> Result<Self> {
        let mut r = ByteReader { bytes, pos: 0, path };
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(r.error("not an NNLM model file"));
        }
        let version = r.u32()?;
        if version != FORMAT_VERSION {
            return Err(r.error(format!("unsupported format version {version}")));
        }
        let config = NnlmConfig {
            order: r.usize()?,
            vocab_size: r.usize()?,
            embed_dim: r.usize()?,
            hidden_dim: r.usize()?,
            learning_rate: r.f64()?,
            momentum: r.f64()?,
            batch_size: r.usize()?,
            max_epochs: r.usize()?,
            patience: r.usize()?,
            seed: r.u64()?,
            init_scale: r.f64()?,
        };
        config.validate().map_err(|e| r.error(e.to_string()))?;
        if r.u32()? != 5 {
            return Err(r.error("expected 5 tensors"));
        }
        let expected = NnlmParams::zeros(&config).shapes();
        let mut tensors = Vec::with_capacity(5);
        for shape in &expected {
            let rank = r.u32()? as usize;
            let dims = (0..rank).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
            if &dims != shape {
                return Err(r.error(format!("tensor shape {dims:?}, config implies {shape:?}")));
            }
            let n: usize = dims.iter().product();
            tensors.push((0..n).map(|_| r.f64()).collect::<Result<Vec<f64>>>()?);
        }
        if r.pos != bytes.len() {
            return Err(r.error("trailing bytes after last tensor"));
        }
        let mut it = tensors.into_iter();
        let mut next2 = |s: &Vec<usize>| {
            Array2::from_shape_vec((s[0], s[1]), it.next().unwrap()).expect("shape checked")
        };
        let embed = next2(&expected[0]);
        let hidden_w = next2(&expected[1]);
        let hidden_b = Array1::from_vec(it.next().unwrap());
        let output_w = Array2::from_shape_vec((expected[3][0], expected[3][1]), it.next().unwrap())
            .expect("shape checked");
        let output_b = Array1::from_vec(it.next().unwrap());
        let params = NnlmParams {
            embed,
            hidden_w,
            hidden_b,
            output_w,
            output_b,
        };
        NnlmModel::new(config, params).map_err(|e| r.error(e.to_string()))
    }
}

struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl ByteReader<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line: self.pos,
            message: format!("byte offset {}: {}", self.pos, msg.into()),
        }
    }

    fn read_exact(&mut self, buf: &mut [u8]) -> Result<()> {
        let mut src = &self.bytes[self.pos.min(self.bytes.len())..];
        src.read_exact(buf).map_err(|_| self.error("truncated file"))?;
        self.pos += buf.len();
        Ok(())
    }

    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.read_exact(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }

    fn u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.read_exact(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }

    fn usize(&mut self) -> Result<usize> {
        let x = self.u64()?;
        usize::try_from(x).map_err(|_| self.error(format!("value {x} too large")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }
}
