use std::fmt;

use rustc_hash::FxHashMap;

/// Dense identifier of an interned tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TagId(pub u32);

impl TagId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for TagId {
    #[inline]
    fn from(i: usize) -> Self {
        TagId(i as u32)
    }
}

impl fmt::Display for TagId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Symbol table mapping tag names to dense identifiers, in first-seen order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    names: Vec<String>,
    ids: FxHashMap<String, TagId>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Vocabulary of `n` tags named `0`, `1`, ... `n-1`.
    pub fn numbered(n: usize) -> Self {
        let mut v = Self::new();
        for i in 0..n {
            v.intern(&i.to_string());
        }
        v
    }

    pub fn intern(&mut self, name: &str) -> TagId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = TagId::from(self.names.len());
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<TagId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: TagId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn ids(&self) -> impl Iterator<Item = TagId> {
        (0..self.names.len()).map(TagId::from)
    }
}
