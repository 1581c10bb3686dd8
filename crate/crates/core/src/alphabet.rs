//! Events, ordered alphabets and words over them.

use std::fmt;

/// A single event name. Names are nonempty and contain no whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event(String);

impl Event {
    pub fn new(name: impl Into<String>) -> Self {
        Event(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Event {
    fn from(s: &str) -> Self {
        Event(s.to_string())
    }
}

impl From<String> for Event {
    fn from(s: String) -> Self {
        Event(s)
    }
}

impl From<char> for Event {
    fn from(c: char) -> Self {
        Event(c.to_string())
    }
}

/// A finite set of events that remembers its declaration order.
///
/// Equality is set equality; the order only drives enumeration and the
/// deterministic tie-breaking of heuristics.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    events: Vec<Event>,
}

impl Alphabet {
    pub fn new() -> Self {
        Alphabet { events: Vec::new() }
    }

    /// Builds an alphabet from events in order, dropping duplicates.
    pub fn from_events<I, E>(events: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: Into<Event>,
    {
        let mut a = Alphabet::new();
        for e in events {
            a.insert(e.into());
        }
        a
    }

    /// Parses a whitespace-separated list of event names.
    pub fn parse(list: &str) -> Self {
        Alphabet::from_events(list.split_whitespace())
    }

    /// One event per character, e.g. `"abcd"`.
    pub fn from_symbols(symbols: &str) -> Self {
        Alphabet::from_events(symbols.chars().filter(|c| !c.is_whitespace()))
    }

    pub fn insert(&mut self, e: Event) -> bool {
        if self.contains(&e) {
            false
        } else {
            self.events.push(e);
            true
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn contains(&self, e: &Event) -> bool {
        self.events.contains(e)
    }

    pub fn contains_str(&self, name: &str) -> bool {
        self.events.iter().any(|e| e.as_str() == name)
    }

    pub fn index_of(&self, e: &Event) -> Option<usize> {
        self.events.iter().position(|x| x == e)
    }

    pub fn index_of_str(&self, name: &str) -> Option<usize> {
        self.events.iter().position(|x| x.as_str() == name)
    }

    pub fn get(&self, idx: usize) -> &Event {
        &self.events[idx]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Event> {
        self.events.iter()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn is_subset(&self, other: &Alphabet) -> bool {
        self.events.iter().all(|e| other.contains(e))
    }

    pub fn is_disjoint(&self, other: &Alphabet) -> bool {
        !self.events.iter().any(|e| other.contains(e))
    }

    /// `self ∪ other`, keeping `self`'s order and appending new events of `other`.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut a = self.clone();
        for e in &other.events {
            a.insert(e.clone());
        }
        a
    }

    /// `self ∩ other` in `self`'s order.
    pub fn intersection(&self, other: &Alphabet) -> Alphabet {
        Alphabet {
            events: self.events.iter().filter(|e| other.contains(e)).cloned().collect(),
        }
    }

    /// `self ∖ other` in `self`'s order.
    pub fn difference(&self, other: &Alphabet) -> Alphabet {
        Alphabet {
            events: self.events.iter().filter(|e| !other.contains(e)).cloned().collect(),
        }
    }

    /// Reorders `self` to follow `reference`'s order; events missing from
    /// `reference` keep their relative order at the end.
    pub fn ordered_by(&self, reference: &Alphabet) -> Alphabet {
        let mut a = reference.intersection(self);
        for e in &self.events {
            a.insert(e.clone());
        }
        a
    }

    /// Union of many alphabets in order of first appearance.
    pub fn union_all<'a, I>(alphabets: I) -> Alphabet
    where
        I: IntoIterator<Item = &'a Alphabet>,
    {
        let mut a = Alphabet::new();
        for x in alphabets {
            for e in &x.events {
                a.insert(e.clone());
            }
        }
        a
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }
}

impl Eq for Alphabet {}

impl fmt::Display for Alphabet {
    /// Formats as `{a, b, c}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a Alphabet {
    type Item = &'a Event;
    type IntoIter = std::slice::Iter<'a, Event>;

    fn into_iter(self) -> Self::IntoIter {
        self.events.iter()
    }
}

impl FromIterator<Event> for Alphabet {
    fn from_iter<T: IntoIterator<Item = Event>>(iter: T) -> Self {
        Alphabet::from_events(iter)
    }
}

/// A finite word. The empty word prints as `-`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Event>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a whitespace-separated event list; `-` alone is the empty word.
    pub fn parse(text: &str) -> Self {
        let t = text.trim();
        if t == "-" {
            return Word::empty();
        }
        Word(t.split_whitespace().map(Event::from).collect())
    }

    /// One event per character, e.g. `"bbd"`.
    pub fn from_symbols(symbols: &str) -> Self {
        Word(symbols.chars().map(Event::from).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.0
    }

    pub fn push(&mut self, e: Event) {
        self.0.push(e);
    }

    /// Erases the events outside `target`.
    pub fn project(&self, target: &Alphabet) -> Word {
        Word(self.0.iter().filter(|e| target.contains(e)).cloned().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    pub fn with(&self, e: Event) -> Word {
        let mut v = self.0.clone();
        v.push(e);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_equality_ignores_order() {
        assert_eq!(Alphabet::parse("a b c"), Alphabet::parse("c a b"));
        assert_ne!(Alphabet::parse("a b"), Alphabet::parse("a b c"));
    }

    #[test]
    fn set_operations_keep_left_order() {
        let x = Alphabet::parse("d a c");
        let y = Alphabet::parse("a b c");
        assert_eq!(x.union(&y).events(), Alphabet::parse("d a c b").events());
        assert_eq!(x.intersection(&y).events(), Alphabet::parse("a c").events());
        assert_eq!(x.difference(&y).events(), Alphabet::parse("d").events());
    }

    #[test]
    fn word_display_and_projection() {
        let w = Word::from_symbols("bac");
        assert_eq!(w.to_string(), "b a c");
        assert_eq!(Word::empty().to_string(), "-");
        assert_eq!(w.project(&Alphabet::parse("a c")), Word::from_symbols("ac"));
        assert_eq!(Word::parse("-"), Word::empty());
    }
}
