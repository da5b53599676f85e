use super::word::{Letter, Word};
use super::GroupError;

/// Finitely presented group: generator names and relator words.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Generator names must start with a lowercase ASCII letter; the name with
    /// its first letter uppercased denotes the inverse in word strings.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, GroupError> {
        for (i, name) in generators.iter().enumerate() {
            let ok = name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(GroupError::InvalidPresentation(format!("bad generator name {name:?}")));
            }
            if generators[..i].contains(name) {
                return Err(GroupError::InvalidPresentation(format!("duplicate generator {name:?}")));
            }
        }
        for r in &relators {
            if r.is_empty() {
                return Err(GroupError::InvalidPresentation("empty relator".into()));
            }
            if r.letters().iter().any(|l| l.generator >= generators.len()) {
                return Err(GroupError::MalformedWord(format!("relator uses unknown generator: {r:?}")));
            }
        }
        Ok(Self { generators, relators })
    }

    /// Free group on the given names.
    pub fn free(names: &[&str]) -> Result<Self, GroupError> {
        Self::new(names.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    fn inverse_name(name: &str) -> String {
        let mut c = name.chars();
        match c.next() {
            Some(f) => f.to_ascii_uppercase().to_string() + c.as_str(),
            None => String::new(),
        }
    }

    /// Parses `"aB"`, `"a1 b1 A1 B1"` or `"a b^-1"`. Tokens are matched
    /// greedily, longest name first; whitespace is ignored.
    pub fn parse_word(&self, s: &str) -> Result<Word, GroupError> {
        let mut table: Vec<(String, Letter)> = Vec::new();
        for (g, name) in self.generators.iter().enumerate() {
            table.push((format!("{name}^-1"), Letter::new(g, -1)));
            table.push((Self::inverse_name(name), Letter::new(g, -1)));
            table.push((name.clone(), Letter::new(g, 1)));
        }
        table.sort_by(|a, b| b.0.len().cmp(&a.0.len()));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = compact.as_str();
        let mut letters = Vec::new();
        while !rest.is_empty() {
            let hit = table.iter().find(|(tok, _)| rest.starts_with(tok.as_str()));
            match hit {
                Some((tok, l)) => {
                    letters.push(*l);
                    rest = &rest[tok.len()..];
                }
                None => return Err(GroupError::MalformedWord(format!("cannot parse {s:?} at {rest:?}"))),
            }
        }
        Ok(Word::new(letters))
    }

    /// Compact form; inverses are written with the first letter uppercased.
    pub fn format_word(&self, w: &Word) -> String {
        w.letters()
            .iter()
            .map(|l| {
                let name = self.generators.get(l.generator).map(String::as_str).unwrap_or("?");
                if l.inverse {
                    Self::inverse_name(name)
                } else {
                    name.to_string()
                }
            })
            .collect()
    }

    fn letters(&self) -> Vec<Letter> {
        (0..self.rank()).flat_map(|g| [Letter::new(g, 1), Letter::new(g, -1)]).collect()
    }

    /// Every freely reduced word of length at most `max_len`, including the
    /// empty word, in shortlex order.
    pub fn ball(&self, max_len: usize) -> Vec<Word> {
        let letters = self.letters();
        let mut layer = vec![Word::empty()];
        let mut out = layer.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for l in &letters {
                    if w.letters().last() == Some(&l.inv()) {
                        continue;
                    }
                    let mut v = w.letters().to_vec();
                    v.push(*l);
                    next.push(Word::new(v));
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// One canonical representative per class of nonempty cyclically reduced
    /// words of length at most `max_len` under rotation and inversion, in
    /// shortlex order.
    pub fn word_list(&self, max_len: usize) -> Result<Vec<Word>, GroupError> {
        if max_len == 0 {
            return Err(GroupError::InvalidArgument("word_list needs max_len >= 1".into()));
        }
        Ok(self
            .ball(max_len)
            .into_iter()
            .filter(|w| !w.is_empty() && w.is_cyclically_reduced() && w.canonical() == *w)
            .collect())
    }
}
