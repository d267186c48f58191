//! Lexer, syntax tree, parser and canonical renderer for `.guk` documents.
//!
//! The grammar is block-oriented. Every item is `KIND NAME ... { stmt; ... }`
//! except `site NAME from-space S`. Identifiers are runs of ASCII letters,
//! digits and underscores; `#` starts a comment running to end of line.

use std::fmt::{self, Write as _};

use crate::error::DslError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "command line")
        } else {
            write!(f, "{}:{}", self.line, self.col)
        }
    }
}

/// A name with the position it was written at. Equality ignores the
/// position so that re-parsed documents compare equal.
#[derive(Clone, Debug, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Ident {
        Ident {
            name: name.into(),
            pos: Pos::default(),
        }
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

pub fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

const SYMBOLS: [&str; 11] = ["->", "=>", "{", "}", "(", ")", ";", ":", ",", ".", "="];

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, DslError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let bytes = line.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let pos = Pos {
                line: ln + 1,
                col: line[..i].chars().count() + 1,
            };
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphanumeric() || c == b'_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let mut word = line[start..i].to_string();
                if word == "from" && line[i..].starts_with("-space") {
                    word.push_str("-space");
                    i += "-space".len();
                }
                out.push((Tok::Ident(word), pos));
                continue;
            }
            match SYMBOLS.iter().find(|s| line[i..].starts_with(**s)) {
                Some(s) => {
                    out.push((Tok::Sym(s), pos));
                    i += s.len();
                }
                None => {
                    let found = line[i..].chars().next().unwrap();
                    return Err(DslError::Parse {
                        line: pos.line,
                        col: pos.col,
                        expected: vec!["identifier or symbol".into()],
                        found: format!("`{found}`"),
                    });
                }
            }
        }
    }
    let end = Pos {
        line: text.lines().count() + 1,
        col: 1,
    };
    out.push((Tok::Eof, end));
    Ok(out)
}

pub type Pairs = Vec<(Ident, Ident)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryDecl {
    pub name: Ident,
    pub objects: Vec<Ident>,
    /// `(name, source, target)`
    pub arrows: Vec<(Ident, Ident, Ident)>,
    /// `(g, f, h)` for `g . f = h`
    pub composites: Vec<(Ident, Ident, Ident)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationDecl {
    pub name: Ident,
    pub objects: Vec<Ident>,
    pub arrows: Vec<(Ident, Ident, Ident)>,
    pub relations: Vec<(Vec<Ident>, Vec<Ident>)>,
    pub bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorDecl {
    pub name: Ident,
    pub dom: Ident,
    pub cod: Ident,
    pub objects: Pairs,
    pub arrows: Pairs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunctorDecl {
    pub name: Ident,
    /// Contravariant on `dom` when set.
    pub presheaf: bool,
    pub dom: Ident,
    pub carriers: Vec<(Ident, Vec<Ident>)>,
    pub maps: Vec<(Ident, Pairs)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformationDecl {
    pub name: Ident,
    pub source: Ident,
    pub target: Ident,
    pub components: Vec<(Ident, Pairs)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoconeDecl {
    pub name: Ident,
    pub diagram: Ident,
    pub apex: Ident,
    pub legs: Pairs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDecl {
    pub name: Ident,
    pub points: Vec<Ident>,
    pub opens: Vec<Vec<Ident>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PullbackPick {
    First,
    Last,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SiteBody {
    Covers {
        base: Ident,
        chaotic: bool,
        covers: Vec<(Ident, Vec<Ident>)>,
        pullbacks: Option<PullbackPick>,
    },
    FromSpace(Ident),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteDecl {
    pub name: Ident,
    pub body: SiteBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClanDecl {
    pub name: Ident,
    pub base: Ident,
    pub terminal: Option<Ident>,
    pub display: Vec<Ident>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleDecl {
    pub name: Ident,
    pub index: Ident,
    pub site: Ident,
    pub at: Pairs,
    pub maps: Pairs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Category(CategoryDecl),
    Presentation(PresentationDecl),
    Functor(FunctorDecl),
    SetFunctor(SetFunctorDecl),
    Transformation(TransformationDecl),
    Cocone(CoconeDecl),
    Space(SpaceDecl),
    Site(SiteDecl),
    Clan(ClanDecl),
    Bundle(BundleDecl),
}

impl Item {
    pub fn name(&self) -> &Ident {
        match self {
            Item::Category(d) => &d.name,
            Item::Presentation(d) => &d.name,
            Item::Functor(d) => &d.name,
            Item::SetFunctor(d) => &d.name,
            Item::Transformation(d) => &d.name,
            Item::Cocone(d) => &d.name,
            Item::Space(d) => &d.name,
            Item::Site(d) => &d.name,
            Item::Clan(d) => &d.name,
            Item::Bundle(d) => &d.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Item::Category(_) => "category",
            Item::Presentation(_) => "presentation",
            Item::Functor(_) => "functor",
            Item::SetFunctor(d) if d.presheaf => "presheaf",
            Item::SetFunctor(_) => "setfunctor",
            Item::Transformation(_) => "transformation",
            Item::Cocone(_) => "cocone",
            Item::Space(_) => "space",
            Item::Site(_) => "site",
            Item::Clan(_) => "clan",
            Item::Bundle(_) => "bundle",
        }
    }
}

/// The syntax tree of a document, in source order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Syntax {
    pub items: Vec<Item>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type PResult<T> = Result<T, DslError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let pos = self.pos();
        Err(DslError::Parse {
            line: pos.line,
            col: pos.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == w)
    }

    fn sym(&mut self, s: &'static str) -> PResult<()> {
        if self.is_sym(s) {
            self.at += 1;
            Ok(())
        } else {
            self.error(&[&format!("`{s}`")])
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.at += 1;
        }
        hit
    }

    fn word(&mut self, w: &'static str) -> PResult<()> {
        if self.is_word(w) {
            self.at += 1;
            Ok(())
        } else {
            self.error(&[&format!("`{w}`")])
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let pos = self.pos();
                self.at += 1;
                Ok(Ident { name, pos })
            }
            _ => self.error(&["identifier"]),
        }
    }

    /// Identifiers up to (not including) the symbol `end`.
    fn idents_until(&mut self, end: &'static str) -> PResult<Vec<Ident>> {
        let mut out = Vec::new();
        while !self.is_sym(end) {
            if !matches!(self.peek(), Tok::Ident(_)) {
                return self.error(&["identifier", &format!("`{end}`")]);
            }
            out.push(self.ident()?);
        }
        Ok(out)
    }

    /// `item (, item)*` terminated by `;`, possibly empty.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.eat_sym(";") {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat_sym(";") {
                return Ok(out);
            }
            if !self.eat_sym(",") {
                return self.error(&["`,`", "`;`"]);
            }
        }
    }

    fn pair(&mut self, arrow: &'static str) -> PResult<(Ident, Ident)> {
        let a = self.ident()?;
        self.sym(arrow)?;
        Ok((a, self.ident()?))
    }

    fn arrow_decl(&mut self) -> PResult<(Ident, Ident, Ident)> {
        let name = self.ident()?;
        self.sym(":")?;
        let (s, t) = self.pair("->")?;
        Ok((name, s, t))
    }

    fn word_path(&mut self) -> PResult<Vec<Ident>> {
        let mut w = vec![self.ident()?];
        while self.eat_sym(".") {
            w.push(self.ident()?);
        }
        Ok(w)
    }

    /// Runs `stmt` on each statement keyword until the closing brace.
    fn block(
        &mut self,
        keywords: &[&str],
        mut stmt: impl FnMut(&mut Self, &str) -> PResult<()>,
    ) -> PResult<()> {
        self.sym("{")?;
        loop {
            if self.eat_sym("}") {
                return Ok(());
            }
            let kw = match self.peek() {
                Tok::Ident(w) if keywords.contains(&w.as_str()) => w.clone(),
                _ => {
                    let mut expected: Vec<String> = keywords.iter().map(|k| format!("`{k}`")).collect();
                    expected.push("`}`".into());
                    let refs: Vec<&str> = expected.iter().map(String::as_str).collect();
                    return self.error(&refs);
                }
            };
            self.at += 1;
            stmt(self, &kw)?;
        }
    }

    fn category(&mut self) -> PResult<Item> {
        let name = self.ident()?;
        let mut d = CategoryDecl {
            name,
            objects: vec![],
            arrows: vec![],
            composites: vec![],
        };
        self.block(&["objects", "arrows", "compose"], |p, kw| {
            p.sym(":")?;
            match kw {
                "objects" => {
                    d.objects.extend(p.idents_until(";")?);
                    p.sym(";")
                }
                "arrows" => {
                    d.arrows.extend(p.list(Self::arrow_decl)?);
                    Ok(())
                }
                _ => {
                    d.composites.extend(p.list(|p| {
                        let g = p.ident()?;
                        p.sym(".")?;
                        let f = p.ident()?;
                        p.sym("=")?;
                        Ok((g, f, p.ident()?))
                    })?);
                    Ok(())
                }
            }
        })?;
        Ok(Item::Category(d))
    }

    fn presentation(&mut self) -> PResult<Item> {
        let name = self.ident()?;
        let mut d = PresentationDecl {
            name,
            objects: vec![],
            arrows: vec![],
            relations: vec![],
            bound: None,
        };
        self.block(&["objects", "arrows", "relations", "bound"], |p, kw| {
            p.sym(":")?;
            match kw {
                "objects" => {
                    d.objects.extend(p.idents_until(";")?);
                    p.sym(";")
                }
                "arrows" => {
                    d.arrows.extend(p.list(Self::arrow_decl)?);
                    Ok(())
                }
                "relations" => {
                    d.relations.extend(p.list(|p| {
                        let l = p.word_path()?;
                        p.sym("=")?;
                        Ok((l, p.word_path()?))
                    })?);
                    Ok(())
                }
                _ => {
                    let n = p.ident()?;
                    match n.name.parse::<usize>() {
                        Ok(b) if b > 0 => d.bound = Some(b),
                        _ => {
                            p.at -= 1;
                            return p.error(&["positive integer"]);
                        }
                    }
                    p.sym(";")
                }
            }
        })?;
        Ok(Item::Presentation(d))
    }

    fn functor(&mut self) -> PResult<Item> {
        let name = self.ident()?;
        self.sym(":")?;
        let (dom, cod) = self.pair("->")?;
        let mut d = FunctorDecl {
            name,
            dom,
            cod,
            objects: vec![],
            arrows: vec![],
        };
        self.block(&["object", "arrow"], |p, kw| {
            let pairs = p.list(|p| p.pair("=>"))?;
            if kw == "object" {
                d.objects.extend(pairs);
            } else {
                d.arrows.extend(pairs);
            }
            Ok(())
        })?;
        Ok(Item::Functor(d))
    }

    fn set_functor(&mut self, presheaf: bool) -> PResult<Item> {
        let name = self.ident()?;
        self.word("on")?;
        let dom = self.ident()?;
        let mut d = SetFunctorDecl {
            name,
            presheaf,
            dom,
            carriers: vec![],
            maps: vec![],
        };
        self.block(&["at", "map"], |p, kw| {
            let obj = p.ident()?;
            if kw == "at" {
                p.sym("=")?;
                p.sym("{")?;
                let elems = p.idents_until("}")?;
                p.sym("}")?;
                p.sym(";")?;
                d.carriers.push((obj, elems));
            } else {
                p.sym(":")?;
                let pairs = p.list(|p| p.pair("->"))?;
                d.maps.push((obj, pairs));
            }
            Ok(())
        })?;
        Ok(Item::SetFunctor(d))
    }

    fn transformation(&mut self) -> PResult<Item> {
        let name = self.ident()?;
        self.sym(":")?;
        let (source, target) = self.pair("=>")?;
        let mut d = TransformationDecl {
            name,
            source,
            target,
            components: vec![],
        };
        self.block(&["at"], |p, _| {
            let obj = p.ident()?;
            p.sym(":")?;
            let pairs = p.list(|p| p.pair("->"))?;
            d.components.push((obj, pairs));
            Ok(())
        })?;
        Ok(Item::Transformation(d))
    }

    fn cocone(&mut self) -> PResult<Item> {
        let name = self.ident()?;
        self.word("on")?;
        let diagram = self.ident()?;
        let mut apex = None;
        let mut legs = Vec::new();
        self.block(&["apex", "leg"], |p, kw| {
            if kw == "apex" {
                p.sym(":")?;
                apex = Some(p.ident()?);
                p.sym(";")
            } else {
                legs.extend(p.list(|p| p.pair("=>"))?);
                Ok(())
            }
        })?;
        let Some(apex) = apex else {
            return self.missing("apex", &name);
        };
        Ok(Item::Cocone(CoconeDecl {
            name,
            diagram,
            apex,
            legs,
        }))
    }

    fn missing<T>(&self, what: &str, item: &Ident) -> PResult<T> {
        Err(DslError::Parse {
            line: item.pos.line,
            col: item.pos.col,
            expected: vec![format!("`{what}` statement in `{}`", item.name)],
            found: "`}`".into(),
        })
    }

    fn space(&mut self) -> PResult<Item> {
        let name = self.ident()?;
        let mut d = SpaceDecl {
            name,
            points: vec![],
            opens: vec![],
        };
        self.block(&["points", "opens"], |p, kw| {
            p.sym(":")?;
            if kw == "points" {
                d.points.extend(p.idents_until(";")?);
                p.sym(";")
            } else {
                d.opens.extend(p.list(|p| {
                    p.sym("{")?;
                    let set = p.idents_until("}")?;
                    p.sym("}")?;
                    Ok(set)
                })?);
                Ok(())
            }
        })?;
        Ok(Item::Space(d))
    }

    fn site(&mut self) -> PResult<Item> {
        let name = self.ident()?;
        if self.is_word("from-space") {
            self.at += 1;
            let space = self.ident()?;
            self.eat_sym(";");
            return Ok(Item::Site(SiteDecl {
                name,
                body: SiteBody::FromSpace(space),
            }));
        }
        if !self.is_word("on") {
            return self.error(&["`on`", "`from-space`"]);
        }
        self.at += 1;
        let base = self.ident()?;
        let mut chaotic = false;
        let mut covers = Vec::new();
        let mut pullbacks = None;
        self.block(&["cover", "chaotic", "pullbacks"], |p, kw| match kw {
            "cover" => {
                let obj = p.ident()?;
                p.word("by")?;
                p.sym("(")?;
                let fam = p.idents_until(")")?;
                p.sym(")")?;
                p.sym(";")?;
                covers.push((obj, fam));
                Ok(())
            }
            "chaotic" => {
                chaotic = true;
                p.sym(";")
            }
            _ => {
                p.sym(":")?;
                pullbacks = Some(if p.is_word("first") {
                    PullbackPick::First
                } else if p.is_word("last") {
                    PullbackPick::Last
                } else {
                    return p.error(&["`first`", "`last`"]);
                });
                p.at += 1;
                p.sym(";")
            }
        })?;
        Ok(Item::Site(SiteDecl {
            name,
            body: SiteBody::Covers {
                base,
                chaotic,
                covers,
                pullbacks,
            },
        }))
    }

    fn clan(&mut self) -> PResult<Item> {
        let name = self.ident()?;
        self.word("on")?;
        let base = self.ident()?;
        let mut terminal = None;
        let mut display = Vec::new();
        self.block(&["terminal", "display"], |p, kw| {
            p.sym(":")?;
            if kw == "terminal" {
                terminal = Some(p.ident()?);
            } else {
                display.extend(p.idents_until(";")?);
            }
            p.sym(";")
        })?;
        Ok(Item::Clan(ClanDecl {
            name,
            base,
            terminal,
            display,
        }))
    }

    fn bundle(&mut self) -> PResult<Item> {
        let name = self.ident()?;
        self.sym(":")?;
        let index = self.ident()?;
        self.word("over")?;
        let site = self.ident()?;
        let mut at = Vec::new();
        let mut maps = Vec::new();
        self.block(&["at", "map"], |p, kw| {
            let pairs = p.list(|p| p.pair("="))?;
            if kw == "at" {
                at.extend(pairs);
            } else {
                maps.extend(pairs);
            }
            Ok(())
        })?;
        Ok(Item::Bundle(BundleDecl {
            name,
            index,
            site,
            at,
            maps,
        }))
    }
}

pub const ITEM_KEYWORDS: [&str; 11] = [
    "category",
    "presentation",
    "functor",
    "setfunctor",
    "presheaf",
    "transformation",
    "cocone",
    "space",
    "site",
    "clan",
    "bundle",
];

pub fn parse_syntax(text: &str) -> Result<Syntax, DslError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let mut items = Vec::new();
    loop {
        let kw = match p.peek() {
            Tok::Eof => return Ok(Syntax { items }),
            Tok::Ident(w) if ITEM_KEYWORDS.contains(&w.as_str()) => w.clone(),
            _ => {
                let expected: Vec<String> = ITEM_KEYWORDS.iter().map(|k| format!("`{k}`")).collect();
                let refs: Vec<&str> = expected.iter().map(String::as_str).collect();
                return p.error(&refs);
            }
        };
        p.at += 1;
        let item = match kw.as_str() {
            "category" => p.category()?,
            "presentation" => p.presentation()?,
            "functor" => p.functor()?,
            "setfunctor" => p.set_functor(false)?,
            "presheaf" => p.set_functor(true)?,
            "transformation" => p.transformation()?,
            "cocone" => p.cocone()?,
            "space" => p.space()?,
            "site" => p.site()?,
            "clan" => p.clan()?,
            _ => p.bundle()?,
        };
        items.push(item);
    }
}

fn names(v: &[Ident]) -> String {
    v.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(" ")
}

fn pairs(v: &[(Ident, Ident)], arrow: &str) -> String {
    v.iter()
        .map(|(a, b)| format!("{} {arrow} {}", a.name, b.name))
        .collect::<Vec<_>>()
        .join(", ")
}

fn arrow_list(v: &[(Ident, Ident, Ident)]) -> String {
    v.iter()
        .map(|(n, s, t)| format!("{}: {} -> {}", n.name, s.name, t.name))
        .collect::<Vec<_>>()
        .join(", ")
}

fn path(w: &[Ident]) -> String {
    w.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(" . ")
}

/// Canonical text of one item. Empty sections are omitted; parsing the
/// output gives back an equal item.
pub fn render_item(item: &Item) -> String {
    let mut s = String::new();
    let w = &mut s;
    match item {
        Item::Category(d) => {
            writeln!(w, "category {} {{", d.name.name).unwrap();
            if !d.objects.is_empty() {
                writeln!(w, "  objects: {};", names(&d.objects)).unwrap();
            }
            if !d.arrows.is_empty() {
                writeln!(w, "  arrows: {};", arrow_list(&d.arrows)).unwrap();
            }
            if !d.composites.is_empty() {
                let comps: Vec<String> = d
                    .composites
                    .iter()
                    .map(|(g, f, h)| format!("{} . {} = {}", g.name, f.name, h.name))
                    .collect();
                writeln!(w, "  compose: {};", comps.join(", ")).unwrap();
            }
        }
        Item::Presentation(d) => {
            writeln!(w, "presentation {} {{", d.name.name).unwrap();
            if !d.objects.is_empty() {
                writeln!(w, "  objects: {};", names(&d.objects)).unwrap();
            }
            if !d.arrows.is_empty() {
                writeln!(w, "  arrows: {};", arrow_list(&d.arrows)).unwrap();
            }
            if !d.relations.is_empty() {
                let rels: Vec<String> = d
                    .relations
                    .iter()
                    .map(|(l, r)| format!("{} = {}", path(l), path(r)))
                    .collect();
                writeln!(w, "  relations: {};", rels.join(", ")).unwrap();
            }
            if let Some(b) = d.bound {
                writeln!(w, "  bound: {b};").unwrap();
            }
        }
        Item::Functor(d) => {
            writeln!(w, "functor {} : {} -> {} {{", d.name.name, d.dom.name, d.cod.name).unwrap();
            if !d.objects.is_empty() {
                writeln!(w, "  object {};", pairs(&d.objects, "=>")).unwrap();
            }
            if !d.arrows.is_empty() {
                writeln!(w, "  arrow {};", pairs(&d.arrows, "=>")).unwrap();
            }
        }
        Item::SetFunctor(d) => {
            let kw = if d.presheaf { "presheaf" } else { "setfunctor" };
            writeln!(w, "{kw} {} on {} {{", d.name.name, d.dom.name).unwrap();
            for (obj, elems) in &d.carriers {
                writeln!(w, "  at {} = {{{}}};", obj.name, names(elems)).unwrap();
            }
            for (f, ps) in &d.maps {
                writeln!(w, "  map {} : {};", f.name, pairs(ps, "->")).unwrap();
            }
        }
        Item::Transformation(d) => {
            writeln!(
                w,
                "transformation {} : {} => {} {{",
                d.name.name, d.source.name, d.target.name
            )
            .unwrap();
            for (obj, ps) in &d.components {
                writeln!(w, "  at {} : {};", obj.name, pairs(ps, "->")).unwrap();
            }
        }
        Item::Cocone(d) => {
            writeln!(w, "cocone {} on {} {{", d.name.name, d.diagram.name).unwrap();
            writeln!(w, "  apex: {};", d.apex.name).unwrap();
            if !d.legs.is_empty() {
                writeln!(w, "  leg {};", pairs(&d.legs, "=>")).unwrap();
            }
        }
        Item::Space(d) => {
            writeln!(w, "space {} {{", d.name.name).unwrap();
            if !d.points.is_empty() {
                writeln!(w, "  points: {};", names(&d.points)).unwrap();
            }
            if !d.opens.is_empty() {
                let sets: Vec<String> = d.opens.iter().map(|o| format!("{{{}}}", names(o))).collect();
                writeln!(w, "  opens: {};", sets.join(", ")).unwrap();
            }
        }
        Item::Site(d) => match &d.body {
            SiteBody::FromSpace(space) => {
                writeln!(w, "site {} from-space {}", d.name.name, space.name).unwrap();
                return s;
            }
            SiteBody::Covers {
                base,
                chaotic,
                covers,
                pullbacks,
            } => {
                writeln!(w, "site {} on {} {{", d.name.name, base.name).unwrap();
                if *chaotic {
                    writeln!(w, "  chaotic;").unwrap();
                }
                match pullbacks {
                    Some(PullbackPick::First) => writeln!(w, "  pullbacks: first;").unwrap(),
                    Some(PullbackPick::Last) => writeln!(w, "  pullbacks: last;").unwrap(),
                    None => {}
                }
                for (obj, fam) in covers {
                    writeln!(w, "  cover {} by ({});", obj.name, names(fam)).unwrap();
                }
            }
        },
        Item::Clan(d) => {
            writeln!(w, "clan {} on {} {{", d.name.name, d.base.name).unwrap();
            if let Some(t) = &d.terminal {
                writeln!(w, "  terminal: {};", t.name).unwrap();
            }
            writeln!(w, "  display: {};", names(&d.display)).unwrap();
        }
        Item::Bundle(d) => {
            writeln!(
                w,
                "bundle {} : {} over {} {{",
                d.name.name, d.index.name, d.site.name
            )
            .unwrap();
            if !d.at.is_empty() {
                writeln!(w, "  at {};", pairs(&d.at, "=")).unwrap();
            }
            if !d.maps.is_empty() {
                writeln!(w, "  map {};", pairs(&d.maps, "=")).unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}

pub fn render(syntax: &Syntax) -> String {
    syntax
        .items
        .iter()
        .map(render_item)
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_from_space_and_arrows() {
        let toks = lex("site S from-space X # comment\nf: A -> B").unwrap();
        let kinds: Vec<Tok> = toks.into_iter().map(|(t, _)| t).collect();
        assert_eq!(kinds[2], Tok::Ident("from-space".into()));
        assert!(kinds.contains(&Tok::Sym("->")));
    }

    #[test]
    fn parse_error_has_position_and_expectations() {
        let err = parse_syntax("category C {\n  objects: A B;\n  arrows f: A -> B;\n}").unwrap_err();
        match err {
            DslError::Parse {
                line, col, expected, ..
            } => {
                assert_eq!((line, col), (3, 10));
                assert_eq!(expected, vec!["`:`"]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn render_round_trips() {
        let src = "category C { objects: A B; arrows: f: A -> B, g: A -> B; }\n\
                   presentation P { objects: A; arrows: e: A -> A; relations: e . e = e; bound: 5; }\n\
                   space X { points: p q; opens: {}, {p}, {p q}; }\n\
                   site S from-space X\n\
                   site T on C { chaotic; pullbacks: last; cover B by (); }\n\
                   clan K on C { display: ; }\n";
        let s = parse_syntax(src).unwrap();
        assert_eq!(parse_syntax(&render(&s)).unwrap(), s);
    }
}
