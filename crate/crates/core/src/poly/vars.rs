use serde::Serialize;

use super::PolyError;

/// Named variables of one computation. Names are unique within a table;
/// the namespace keeps same-named variables of different charts apart.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct VarTable {
    namespace: String,
    names: Vec<String>,
}

impl VarTable {
    pub fn new<S: AsRef<str>>(namespace: &str, names: &[S]) -> Result<Self, PolyError> {
        let mut table = VarTable { namespace: namespace.into(), names: Vec::new() };
        for n in names {
            table.push(n.as_ref())?;
        }
        Ok(table)
    }

    pub fn push(&mut self, name: &str) -> Result<usize, PolyError> {
        let name = normalize_primes(name);
        if self.names.contains(&name) {
            return Err(PolyError::DuplicateVariable(name));
        }
        self.names.push(name);
        Ok(self.names.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn namespace(&self) -> &str {
        &self.namespace
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn qualified(&self, i: usize) -> String {
        format!("{}.{}", self.namespace, self.names[i])
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        let name = normalize_primes(name);
        self.names.iter().position(|n| *n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, PolyError> {
        self.index(name).ok_or_else(|| PolyError::UnknownVariable(name.into()))
    }

    pub fn indices<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>, PolyError> {
        names.iter().map(|n| self.require(n.as_ref())).collect()
    }
}

/// Maps the typographic primes `′` and `″` to ASCII apostrophes.
pub fn normalize_primes(name: &str) -> String {
    name.replace('′', "'").replace('″', "''")
}
