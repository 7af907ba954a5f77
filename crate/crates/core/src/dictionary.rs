//! Term dictionary with four categories.
//!
//! Terms used both as subject and object (SO) share one id in both roles,
//! numbered `1..=nSO`. Subject-only terms continue at `nSO + 1` in the
//! subject id space, object-only terms at `nSO + 1` in the object id space.
//! Predicates have their own space `1..=nP`. Each category is sorted
//! byte-wise, and lookups binary-search the sorted pool.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::io::{read_len, read_u64_vec, write_u64, write_u64_slice, Serializable, MAX_LEN};
use crate::ntriples::RawTriple;
use crate::triple::IdTriple;

/// Sorted strings stored back to back with an offset table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StringPool {
    offsets: Vec<u64>,
    text: String,
}

impl Default for StringPool {
    fn default() -> Self {
        StringPool::from_sorted([])
    }
}

impl StringPool {
    /// Builds from strings that are already sorted and distinct.
    pub fn from_sorted<'a, I: IntoIterator<Item = &'a str>>(terms: I) -> Self {
        let mut pool = StringPool {
            offsets: vec![0],
            text: String::new(),
        };
        for t in terms {
            pool.text.push_str(t);
            pool.offsets.push(pool.text.len() as u64);
        }
        debug_assert!(pool.iter().zip(pool.iter().skip(1)).all(|(a, b)| a < b));
        pool
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `i`-th term (0-based).
    pub fn get(&self, i: usize) -> &str {
        &self.text[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// 0-based index of `term`, if present.
    pub fn find(&self, term: &str) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(term) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn size_in_bytes(&self) -> usize {
        self.offsets.len() * 8 + self.text.len()
    }
}

impl Serializable for StringPool {
    fn serialize_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        let mut n = write_u64(w, self.len() as u64)?;
        n += write_u64_slice(w, &self.offsets)?;
        w.write_all(self.text.as_bytes())?;
        Ok(n + self.text.len())
    }

    fn deserialize_from<R: Read>(r: &mut R) -> Result<Self> {
        let count = read_len(r, MAX_LEN, "string pool")?;
        let offsets = read_u64_vec(r, count + 1)?;
        if offsets[0] != 0 || offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Format("string pool offsets are not monotone".into()));
        }
        let total = *offsets.last().expect("count + 1 >= 1");
        if total > MAX_LEN {
            return Err(Error::Format("string pool too large".into()));
        }
        let mut bytes = vec![0u8; total as usize];
        r.read_exact(&mut bytes)?;
        let text = String::from_utf8(bytes).map_err(|_| Error::Format("string pool is not UTF-8".into()))?;
        if offsets.iter().any(|&o| !text.is_char_boundary(o as usize)) {
            return Err(Error::Format("string pool offset splits a character".into()));
        }
        let pool = StringPool { offsets, text };
        if pool.iter().zip(pool.iter().skip(1)).any(|(a, b)| a >= b) {
            return Err(Error::Format("string pool is not sorted".into()));
        }
        Ok(pool)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Subject,
    Predicate,
    Object,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Subject => "subject",
            Role::Predicate => "predicate",
            Role::Object => "object",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dictionary {
    shared: StringPool,
    subjects: StringPool,
    objects: StringPool,
    predicates: StringPool,
}

const AS_SUBJECT: u8 = 1;
const AS_OBJECT: u8 = 2;
const AS_PREDICATE: u8 = 4;

/// Accumulates raw triples, interning terms as they arrive.
#[derive(Debug, Default)]
pub struct DictionaryBuilder {
    index: HashMap<String, u32>,
    terms: Vec<String>,
    roles: Vec<u8>,
    triples: Vec<[u32; 3]>,
}

impl DictionaryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, term: &str, role: u8) -> u32 {
        let id = match self.index.get(term) {
            Some(&id) => id,
            None => {
                let id = self.terms.len() as u32;
                self.index.insert(term.to_string(), id);
                self.terms.push(term.to_string());
                self.roles.push(0);
                id
            }
        };
        self.roles[id as usize] |= role;
        id
    }

    pub fn push(&mut self, t: &RawTriple) {
        let s = self.intern(&t.subject, AS_SUBJECT);
        let p = self.intern(&t.predicate, AS_PREDICATE);
        let o = self.intern(&t.object, AS_OBJECT);
        self.triples.push([s, p, o]);
    }

    /// Assigns final ids and returns the dictionary with the encoded,
    /// deduplicated triples sorted by (s, p, o).
    pub fn finish(self) -> (Dictionary, Vec<IdTriple>) {
        let DictionaryBuilder { terms, roles, triples, .. } = self;
        let category = |want: u8, mask: u8| -> Vec<usize> {
            let mut ids: Vec<usize> = (0..terms.len()).filter(|&i| roles[i] & mask == want).collect();
            ids.sort_unstable_by(|&a, &b| terms[a].cmp(&terms[b]));
            ids
        };
        let so = category(AS_SUBJECT | AS_OBJECT, AS_SUBJECT | AS_OBJECT);
        let s_only = category(AS_SUBJECT, AS_SUBJECT | AS_OBJECT);
        let o_only = category(AS_OBJECT, AS_SUBJECT | AS_OBJECT);
        let preds = category(AS_PREDICATE, AS_PREDICATE);

        let mut subj_id = vec![0u32; terms.len()];
        let mut obj_id = vec![0u32; terms.len()];
        let mut pred_id = vec![0u32; terms.len()];
        for (i, &t) in so.iter().enumerate() {
            subj_id[t] = i as u32 + 1;
            obj_id[t] = i as u32 + 1;
        }
        let n_so = so.len() as u32;
        for (i, &t) in s_only.iter().enumerate() {
            subj_id[t] = n_so + i as u32 + 1;
        }
        for (i, &t) in o_only.iter().enumerate() {
            obj_id[t] = n_so + i as u32 + 1;
        }
        for (i, &t) in preds.iter().enumerate() {
            pred_id[t] = i as u32 + 1;
        }

        let mut encoded: Vec<IdTriple> = triples
            .iter()
            .map(|&[s, p, o]| IdTriple::new(subj_id[s as usize], pred_id[p as usize], obj_id[o as usize]))
            .collect();
        encoded.sort_unstable();
        encoded.dedup();

        let pool = |ids: &[usize]| StringPool::from_sorted(ids.iter().map(|&i| terms[i].as_str()));
        let dict = Dictionary {
            shared: pool(&so),
            subjects: pool(&s_only),
            objects: pool(&o_only),
            predicates: pool(&preds),
        };
        (dict, encoded)
    }
}

impl Dictionary {
    /// Encodes `triples`, returning the dictionary and the deduplicated id
    /// triples.
    pub fn build<'a, I: IntoIterator<Item = &'a RawTriple>>(triples: I) -> (Dictionary, Vec<IdTriple>) {
        let mut b = DictionaryBuilder::new();
        for t in triples {
            b.push(t);
        }
        b.finish()
    }

    /// Number of subject-object terms.
    pub fn n_shared(&self) -> u32 {
        self.shared.len() as u32
    }

    pub fn n_subjects(&self) -> u32 {
        (self.shared.len() + self.subjects.len()) as u32
    }

    pub fn n_objects(&self) -> u32 {
        (self.shared.len() + self.objects.len()) as u32
    }

    pub fn n_predicates(&self) -> u32 {
        self.predicates.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.shared.is_empty() && self.subjects.is_empty() && self.objects.is_empty() && self.predicates.is_empty()
    }

    pub fn shared_terms(&self) -> &StringPool {
        &self.shared
    }

    pub fn subject_only_terms(&self) -> &StringPool {
        &self.subjects
    }

    pub fn object_only_terms(&self) -> &StringPool {
        &self.objects
    }

    pub fn predicate_terms(&self) -> &StringPool {
        &self.predicates
    }

    pub fn id(&self, role: Role, term: &str) -> Result<u32> {
        let found = match role {
            Role::Predicate => self.predicates.find(term).map(|i| i as u32 + 1),
            Role::Subject | Role::Object => {
                let only = if role == Role::Subject { &self.subjects } else { &self.objects };
                self.shared
                    .find(term)
                    .map(|i| i as u32 + 1)
                    .or_else(|| only.find(term).map(|i| self.n_shared() + i as u32 + 1))
            }
        };
        found.ok_or_else(|| Error::NotFound(format!("{} {term}", role.name())))
    }

    pub fn term(&self, role: Role, id: u32) -> Result<&str> {
        let not_found = || Error::NotFound(format!("{} id {id}", role.name()));
        if id == 0 {
            return Err(not_found());
        }
        let i = (id - 1) as usize;
        let pool = match role {
            Role::Predicate => Some((&self.predicates, i)),
            Role::Subject | Role::Object => {
                let only = if role == Role::Subject { &self.subjects } else { &self.objects };
                if i < self.shared.len() {
                    Some((&self.shared, i))
                } else {
                    Some((only, i - self.shared.len()))
                }
            }
        };
        match pool {
            Some((p, j)) if j < p.len() => Ok(p.get(j)),
            _ => Err(not_found()),
        }
    }

    pub fn subject_id(&self, term: &str) -> Result<u32> {
        self.id(Role::Subject, term)
    }

    pub fn predicate_id(&self, term: &str) -> Result<u32> {
        self.id(Role::Predicate, term)
    }

    pub fn object_id(&self, term: &str) -> Result<u32> {
        self.id(Role::Object, term)
    }

    pub fn subject(&self, id: u32) -> Result<&str> {
        self.term(Role::Subject, id)
    }

    pub fn predicate(&self, id: u32) -> Result<&str> {
        self.term(Role::Predicate, id)
    }

    pub fn object(&self, id: u32) -> Result<&str> {
        self.term(Role::Object, id)
    }

    pub fn encode(&self, t: &RawTriple) -> Result<IdTriple> {
        Ok(IdTriple::new(
            self.subject_id(&t.subject)?,
            self.predicate_id(&t.predicate)?,
            self.object_id(&t.object)?,
        ))
    }

    pub fn decode(&self, t: &IdTriple) -> Result<RawTriple> {
        Ok(RawTriple::new(self.subject(t.s)?, self.predicate(t.p)?, self.object(t.o)?))
    }

    pub fn size_in_bytes(&self) -> usize {
        self.shared.size_in_bytes()
            + self.subjects.size_in_bytes()
            + self.objects.size_in_bytes()
            + self.predicates.size_in_bytes()
    }
}

impl Serializable for Dictionary {
    /// Pools in order: subject-object, subject-only, object-only, predicates.
    fn serialize_into<W: Write>(&self, w: &mut W) -> Result<usize> {
        let mut n = self.shared.serialize_into(w)?;
        n += self.subjects.serialize_into(w)?;
        n += self.objects.serialize_into(w)?;
        n += self.predicates.serialize_into(w)?;
        Ok(n)
    }

    fn deserialize_from<R: Read>(r: &mut R) -> Result<Self> {
        let dict = Dictionary {
            shared: StringPool::deserialize_from(r)?,
            subjects: StringPool::deserialize_from(r)?,
            objects: StringPool::deserialize_from(r)?,
            predicates: StringPool::deserialize_from(r)?,
        };
        if dict.subjects.iter().chain(dict.objects.iter()).any(|t| dict.shared.find(t).is_some())
            || dict.subjects.iter().any(|t| dict.objects.find(t).is_some())
        {
            return Err(Error::Format("dictionary categories overlap".into()));
        }
        Ok(dict)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn raw(s: &str, p: &str, o: &str) -> RawTriple {
        RawTriple::new(s, p, o)
    }

    #[test]
    fn all_shared() {
        let (d, ids) = Dictionary::build(&[raw("a", "p", "b"), raw("b", "p", "a")]);
        assert_eq!(d.shared_terms().iter().collect::<Vec<_>>(), vec!["a", "b"]);
        assert!(d.subject_only_terms().is_empty());
        assert!(d.object_only_terms().is_empty());
        assert_eq!(d.predicate_terms().iter().collect::<Vec<_>>(), vec!["p"]);
        assert_eq!(d.subject_id("a").unwrap(), 1);
        assert_eq!(d.subject_id("b").unwrap(), 2);
        assert_eq!(d.object_id("b").unwrap(), 2);
        assert_eq!(d.predicate_id("p").unwrap(), 1);
        assert_eq!(d.subject(1).unwrap(), "a");
        assert_eq!(ids, vec![IdTriple::new(1, 1, 2), IdTriple::new(2, 1, 1)]);
    }

    #[test]
    fn disjoint_roles_overlap_numerically() {
        let (d, ids) = Dictionary::build(&[raw("a", "p", "b")]);
        assert_eq!(d.n_shared(), 0);
        assert_eq!(d.subject_id("a").unwrap(), 1);
        assert_eq!(d.object_id("b").unwrap(), 1);
        assert!(d.subject_id("b").is_err());
        assert!(d.object_id("a").is_err());
        assert_eq!(ids, vec![IdTriple::new(1, 1, 1)]);
    }

    #[test]
    fn default_dictionary_round_trips() {
        let d = Dictionary::default();
        let mut buf = Vec::new();
        d.serialize_into(&mut buf).unwrap();
        assert_eq!(Dictionary::deserialize_from(&mut buf.as_slice()).unwrap(), d);
    }

    #[test]
    fn empty_input() {
        let (d, ids) = Dictionary::build(&[]);
        assert!(d.is_empty());
        assert!(ids.is_empty());
        assert_eq!((d.n_subjects(), d.n_objects(), d.n_predicates()), (0, 0, 0));
        assert!(d.subject(1).is_err());
    }

    #[test]
    fn subject_only_ids_follow_shared() {
        let (d, _) = Dictionary::build(&[raw("x", "p", "a"), raw("a", "q", "z"), raw("b", "p", "y")]);
        // shared: a; subject-only: b, x; object-only: y, z
        assert_eq!(d.subject_id("a").unwrap(), 1);
        assert_eq!(d.subject_id("b").unwrap(), 2);
        assert_eq!(d.subject_id("x").unwrap(), 3);
        assert_eq!(d.object_id("y").unwrap(), 2);
        assert_eq!(d.object_id("z").unwrap(), 3);
        assert_eq!(d.n_subjects(), 3);
        assert_eq!(d.n_objects(), 3);
        assert!(d.subject(4).is_err());
        assert!(d.subject(0).is_err());
        assert!(matches!(d.predicate_id("r"), Err(Error::NotFound(_))));
    }

    #[test]
    fn predicate_names_do_not_leak_into_subjects() {
        let (d, _) = Dictionary::build(&[raw("p", "p", "o")]);
        assert_eq!(d.subject_id("p").unwrap(), 1);
        assert_eq!(d.predicate_id("p").unwrap(), 1);
        assert!(d.object_id("p").is_err());
    }

    #[test]
    fn duplicates_are_removed() {
        let (_, ids) = Dictionary::build(&[raw("a", "p", "b"), raw("a", "p", "b")]);
        assert_eq!(ids.len(), 1);
    }

    #[test]
    fn serialization_round_trip() {
        let (d, _) = Dictionary::build(&[raw("é", "p", "\"x\"@en"), raw("b", "q", "é")]);
        let mut buf = Vec::new();
        let n = d.serialize_into(&mut buf).unwrap();
        assert_eq!(n, buf.len());
        assert_eq!(Dictionary::deserialize_from(&mut buf.as_slice()).unwrap(), d);
        // first pool: one shared term, offsets 0 and 2 ("é" is two bytes)
        assert_eq!(&buf[..8], &1u64.to_le_bytes());
        assert_eq!(&buf[8..16], &0u64.to_le_bytes());
        assert_eq!(&buf[16..24], &2u64.to_le_bytes());
    }

    proptest! {
        #[test]
        fn encode_decode_identity(
            raws in proptest::collection::vec(("[a-e]{1,2}", "[p-r]", "[a-h]{1,2}"), 0..60)
        ) {
            let raws: Vec<RawTriple> = raws.into_iter().map(|(s, p, o)| RawTriple::new(s, p, o)).collect();
            let (d, ids) = Dictionary::build(&raws);
            for t in &raws {
                let id = d.encode(t).unwrap();
                prop_assert_eq!(&d.decode(&id).unwrap(), t);
                prop_assert!(ids.binary_search(&id).is_ok());
            }
            for id in 1..=d.n_subjects() {
                let term = d.subject(id).unwrap();
                prop_assert_eq!(d.subject_id(term).unwrap(), id);
                if id <= d.n_shared() {
                    prop_assert_eq!(d.object_id(term).unwrap(), id);
                }
            }
            for id in 1..=d.n_objects() {
                prop_assert_eq!(d.object_id(d.object(id).unwrap()).unwrap(), id);
            }
            for id in 1..=d.n_predicates() {
                prop_assert_eq!(d.predicate_id(d.predicate(id).unwrap()).unwrap(), id);
            }
        }
    }
}
