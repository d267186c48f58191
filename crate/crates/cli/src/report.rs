//! Reports: an ordered tree of text, lists and maps, rendered either as
//! indented plain text or as JSON with keys in insertion order.

use serde_json::{Map as JsonMap, Value as Json};

use guk_core::Witness;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Text(String),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn text(s: impl ToString) -> Node {
        Node::Text(s.to_string())
    }

    pub fn map() -> Node {
        Node::Map(Vec::new())
    }

    pub fn list<T: Into<Node>>(items: impl IntoIterator<Item = T>) -> Node {
        Node::List(items.into_iter().map(Into::into).collect())
    }

    /// Appends a key to a map node.
    pub fn with(mut self, key: &str, value: impl Into<Node>) -> Node {
        match &mut self {
            Node::Map(entries) => entries.push((key.to_string(), value.into())),
            _ => panic!("`with` on a non-map node"),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        match self {
            Node::Map(entries) => entries.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Node::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Node::Text(s) => Json::String(s.clone()),
            Node::List(items) => Json::Array(items.iter().map(Node::to_json).collect()),
            Node::Map(entries) => {
                let mut m = JsonMap::new();
                for (k, v) in entries {
                    m.insert(k.clone(), v.to_json());
                }
                Json::Object(m)
            }
        }
    }

    /// Inverse of [`Node::to_json`]. Scalars other than strings are read
    /// back as their JSON text.
    pub fn from_json(j: &Json) -> Node {
        match j {
            Json::String(s) => Node::Text(s.clone()),
            Json::Array(items) => Node::List(items.iter().map(Node::from_json).collect()),
            Json::Object(m) => Node::Map(m.iter().map(|(k, v)| (k.clone(), Node::from_json(v))).collect()),
            other => Node::Text(other.to_string()),
        }
    }

    fn plain(&self, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match self {
            Node::Text(s) => {
                out.push_str(s);
                out.push('\n');
            }
            Node::List(items) if items.is_empty() => out.push_str("[]\n"),
            Node::Map(entries) if entries.is_empty() => out.push_str("{}\n"),
            Node::List(items) => {
                out.push('\n');
                for item in items {
                    out.push_str(&pad);
                    out.push('-');
                    item.plain_inline(indent + 1, out);
                }
            }
            Node::Map(entries) => {
                out.push('\n');
                for (k, v) in entries {
                    out.push_str(&pad);
                    out.push_str(k);
                    out.push(':');
                    v.plain_inline(indent + 1, out);
                }
            }
        }
    }

    /// Renders after a `key:` or `-` marker already on the line.
    fn plain_inline(&self, indent: usize, out: &mut String) {
        match self {
            Node::Text(s) if s.contains('\n') => {
                out.push_str(" |\n");
                let pad = "  ".repeat(indent);
                for line in s.lines() {
                    if !line.is_empty() {
                        out.push_str(&pad);
                        out.push_str(line);
                    }
                    out.push('\n');
                }
            }
            Node::Text(s) if s.is_empty() => out.push('\n'),
            Node::Text(_) => {
                out.push(' ');
                self.plain(indent, out);
            }
            Node::List(v) if v.is_empty() => out.push_str(" []\n"),
            Node::Map(v) if v.is_empty() => out.push_str(" {}\n"),
            _ => self.plain(indent, out),
        }
    }
}

impl From<&str> for Node {
    fn from(s: &str) -> Node {
        Node::Text(s.to_string())
    }
}

impl From<String> for Node {
    fn from(s: String) -> Node {
        Node::Text(s)
    }
}

impl From<usize> for Node {
    fn from(n: usize) -> Node {
        Node::Text(n.to_string())
    }
}

impl From<bool> for Node {
    fn from(b: bool) -> Node {
        Node::Text(b.to_string())
    }
}

impl From<&Witness> for Node {
    fn from(w: &Witness) -> Node {
        let mut entries = vec![("law".to_string(), Node::text(&w.law))];
        entries.extend(w.detail.iter().map(|(k, v)| (k.clone(), Node::text(v))));
        Node::Map(entries)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Value,
    Error,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Value => "value",
            Outcome::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass | Outcome::Value => 0,
            Outcome::Fail => 1,
            Outcome::Error => 2,
        }
    }

    pub fn parse(s: &str) -> Option<Outcome> {
        [Outcome::Pass, Outcome::Fail, Outcome::Value, Outcome::Error]
            .into_iter()
            .find(|o| o.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub args: Vec<(String, String)>,
    pub outcome: Outcome,
    pub body: Node,
    pub caveats: Vec<String>,
    pub timing_ms: Option<u128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Plain,
    Machine,
}

impl Report {
    pub fn to_node(&self) -> Node {
        let args = Node::Map(
            self.args
                .iter()
                .map(|(k, v)| (k.clone(), Node::text(v)))
                .collect(),
        );
        let mut n = Node::map()
            .with("command", self.command.as_str())
            .with("input", self.input.as_str())
            .with("args", args)
            .with("verdict", self.outcome.as_str())
            .with("body", self.body.clone())
            .with("caveats", Node::list(self.caveats.iter().map(String::as_str)));
        if let Some(ms) = self.timing_ms {
            n = n.with("timing", Node::map().with("elapsed_ms", ms.to_string()));
        }
        n
    }

    pub fn from_node(n: &Node) -> Option<Report> {
        let text = |k: &str| n.get(k).and_then(Node::as_text).map(str::to_string);
        let args = match n.get("args")? {
            Node::Map(entries) => entries
                .iter()
                .map(|(k, v)| Some((k.clone(), v.as_text()?.to_string())))
                .collect::<Option<Vec<_>>>()?,
            _ => return None,
        };
        let caveats = match n.get("caveats")? {
            Node::List(items) => items
                .iter()
                .map(|i| i.as_text().map(str::to_string))
                .collect::<Option<Vec<_>>>()?,
            _ => return None,
        };
        let timing_ms = match n.get("timing") {
            None => None,
            Some(t) => Some(t.get("elapsed_ms")?.as_text()?.parse().ok()?),
        };
        Some(Report {
            command: text("command")?,
            input: text("input")?,
            args,
            outcome: Outcome::parse(&text("verdict")?)?,
            body: n.get("body")?.clone(),
            caveats,
            timing_ms,
        })
    }

    pub fn render(&self, format: Format) -> String {
        let node = self.to_node();
        match format {
            Format::Machine => {
                let mut s = serde_json::to_string_pretty(&node.to_json()).expect("strings serialize");
                s.push('\n');
                s
            }
            Format::Plain => {
                let mut s = String::new();
                let Node::Map(entries) = &node else { unreachable!() };
                for (k, v) in entries {
                    s.push_str(k);
                    s.push(':');
                    v.plain_inline(1, &mut s);
                }
                s
            }
        }
    }

    /// Parses machine output back into a report.
    pub fn from_machine(text: &str) -> Option<Report> {
        let j: Json = serde_json::from_str(text).ok()?;
        Report::from_node(&Node::from_json(&j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            command: "sheaf".into(),
            input: "x.guk".into(),
            args: vec![("site".into(), "S".into())],
            outcome: Outcome::Fail,
            body: Node::map()
                .with("status", "neither")
                .with("counterexample", &Witness::new("gluing").with("object", "U0"))
                .with("empty", Node::list(Vec::<Node>::new())),
            caveats: vec!["c".into()],
            timing_ms: Some(3),
        }
    }

    #[test]
    fn machine_round_trip() {
        let r = sample();
        assert_eq!(Report::from_machine(&r.render(Format::Machine)), Some(r));
    }

    #[test]
    fn plain_layout() {
        let text = sample().render(Format::Plain);
        assert!(text.starts_with("command: sheaf\ninput: x.guk\nargs:\n  site: S\nverdict: fail\n"));
        assert!(text.contains("  counterexample:\n    law: gluing\n    object: U0\n"));
        assert!(text.contains("  empty: []\n"));
        assert!(text.contains("caveats:\n  - c\n"));
    }
}
