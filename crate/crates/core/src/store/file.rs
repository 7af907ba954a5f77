//! The store file: a dictionary plus the id-space matrices.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "BMX1"  version:u16  id_width:u8  pos_width:u8
//! n:u64  nSO:u32  nS:u32  nO:u32  nP:u32  d:u64  t_sorted:u64  t_unsorted:u64
//! ST config  OT config
//! dictionary  predicate index  ST  OT
//! ```
//!
//! Rank samples are not stored; they are rebuilt on load.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{BMatrix, Dims, PredicateIndex, Thresholds};
use crate::dictionary::Dictionary;
use crate::error::{Error, Result};
use crate::io::{read_u16, read_u32, read_u64, read_u8, write_u16, write_u32, write_u64, write_u8, Serializable};
use crate::k2tree::{K2Config, K2Tree, TreeSpace};
use crate::ntriples::RawTriple;
use crate::store::StoreConfig;
use crate::triple::{IdTriple, TriplePattern};

pub const MAGIC: &[u8; 4] = b"BMX1";
pub const FORMAT_VERSION: u16 = 1;
const ID_WIDTH: u8 = 4;
const POS_WIDTH: u8 = 8;

/// A dictionary-encoded triple store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Store {
    dict: Dictionary,
    matrix: BMatrix,
}

/// Byte counts per component.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StoreSpace {
    pub header: usize,
    pub dictionary: usize,
    pub predicate_index: usize,
    /// Serialized subject matrix.
    pub st: usize,
    pub ot: usize,
    /// In-memory parts of each matrix, rank samples included.
    pub st_memory: TreeSpace,
    pub ot_memory: TreeSpace,
}

impl StoreSpace {
    /// Serialized bytes of everything except the dictionary.
    pub fn structure(&self) -> usize {
        self.predicate_index + self.st + self.ot
    }

    pub fn file(&self) -> usize {
        self.header + self.dictionary + self.structure()
    }
}

impl Store {
    /// Encodes raw triples and builds the store.
    pub fn from_raw<'a, I>(triples: I, config: &StoreConfig) -> Result<Self>
    where
        I: IntoIterator<Item = &'a RawTriple>,
    {
        let (dict, ids) = Dictionary::build(triples);
        Self::from_dictionary(dict, &ids, config)
    }

    pub fn from_dictionary(dict: Dictionary, ids: &[IdTriple], config: &StoreConfig) -> Result<Self> {
        let dims = Dims::new(dict.n_subjects(), dict.n_predicates(), dict.n_objects());
        let matrix = BMatrix::build(ids, dims, config)?;
        Ok(Store { dict, matrix })
    }

    /// A store over bare ids with an empty dictionary.
    pub fn from_ids(matrix: BMatrix) -> Self {
        Store {
            dict: Dictionary::default(),
            matrix,
        }
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dict
    }

    pub fn matrix(&self) -> &BMatrix {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut BMatrix {
        &mut self.matrix
    }

    pub fn has_dictionary(&self) -> bool {
        !self.dict.is_empty() || self.matrix.is_empty()
    }

    pub fn len(&self) -> u64 {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn query(&self, pattern: &TriplePattern) -> Result<Vec<IdTriple>> {
        self.matrix.query(pattern)
    }

    pub fn decode(&self, t: &IdTriple) -> Result<RawTriple> {
        self.dict.decode(t)
    }

    fn header_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        let m = &self.matrix;
        let dims = m.dims();
        let mut n = 0;
        w.write_all(MAGIC)?;
        n += MAGIC.len();
        n += write_u16(w, FORMAT_VERSION)?;
        n += write_u8(w, ID_WIDTH)?;
        n += write_u8(w, POS_WIDTH)?;
        n += write_u64(w, m.len())?;
        n += write_u32(w, self.dict.n_shared())?;
        n += write_u32(w, dims.subjects)?;
        n += write_u32(w, dims.objects)?;
        n += write_u32(w, dims.predicates)?;
        n += write_u64(w, m.predicate_index().period() as u64)?;
        n += write_u64(w, m.thresholds().merge_sorted as u64)?;
        n += write_u64(w, m.thresholds().merge_unsorted as u64)?;
        n += m.subject_matrix().config().serialize_into(w)?;
        n += m.object_matrix().config().serialize_into(w)?;
        Ok(n)
    }

    pub fn serialize_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        Ok(self.write_sections(w)?.file())
    }

    fn write_sections<W: Write>(&self, w: &mut W) -> Result<StoreSpace> {
        let m = &self.matrix;
        Ok(StoreSpace {
            header: self.header_into(w)?,
            dictionary: self.dict.serialize_into(w)?,
            predicate_index: m.predicate_index().serialize_into(w)?,
            st: m.subject_matrix().serialize_into(w)?,
            ot: m.object_matrix().serialize_into(w)?,
            st_memory: m.subject_matrix().space(),
            ot_memory: m.object_matrix().space(),
        })
    }

    pub fn space(&self) -> StoreSpace {
        self.write_sections(&mut std::io::sink())
            .expect("writing to a sink cannot fail")
    }

    pub fn deserialize_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("not a store file (bad magic)".into()));
        }
        let version = read_u16(r)?;
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format version {version}")));
        }
        let (id_width, pos_width) = (read_u8(r)?, read_u8(r)?);
        if id_width != ID_WIDTH || pos_width != POS_WIDTH {
            return Err(Error::Format(format!("unsupported field widths {id_width}/{pos_width}")));
        }
        let n = read_u64(r)?;
        let n_shared = read_u32(r)?;
        let dims = Dims {
            subjects: read_u32(r)?,
            objects: read_u32(r)?,
            predicates: read_u32(r)?,
        };
        let period = read_u64(r)? as usize;
        let thresholds = Thresholds {
            merge_sorted: read_u64(r)? as usize,
            merge_unsorted: read_u64(r)? as usize,
        };
        let st_config = K2Config::deserialize_from(r)?;
        let ot_config = K2Config::deserialize_from(r)?;

        let dict = Dictionary::deserialize_from(r)?;
        if !dict.is_empty()
            && (dict.n_shared() != n_shared
                || dict.n_subjects() != dims.subjects
                || dict.n_objects() != dims.objects
                || dict.n_predicates() != dims.predicates)
        {
            return Err(Error::Format("dictionary sizes differ from the header".into()));
        }
        let preds = PredicateIndex::deserialize_from(r, period)?;
        if preds.len() != n {
            return Err(Error::Format("triple count differs from the header".into()));
        }
        let st = K2Tree::deserialize_from(r)?;
        let ot = K2Tree::deserialize_from(r)?;
        if st.config() != &st_config || ot.config() != &ot_config {
            return Err(Error::Format("tree configs differ from the header".into()));
        }
        let matrix = BMatrix::from_parts(st, ot, preds, dims, thresholds)?;
        Ok(Store { dict, matrix })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<usize> {
        let mut w = BufWriter::new(File::create(path)?);
        let n = self.serialize_into(&mut w)?;
        w.flush()?;
        Ok(n)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let store = Self::deserialize_from(&mut r)?;
        let mut rest = [0u8; 1];
        if r.read(&mut rest)? != 0 {
            return Err(Error::Format("trailing bytes after the store".into()));
        }
        Ok(store)
    }
}
