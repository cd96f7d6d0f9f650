//! Lossless XML trees for Android layout files.
//!
//! Every node records the byte span it was parsed from, and every attribute
//! records the whitespace run in front of it, so deleting an attribute is a
//! single span deletion on the original text.

use std::collections::HashSet;

use super::{ParseDiagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlAttribute {
    /// Qualified name as written, e.g. `android:layout_width`.
    pub name: String,
    /// Raw value between the quotes, entities not decoded.
    pub value: String,
    /// Covers `name="value"`.
    pub span: SourceSpan,
    pub value_span: SourceSpan,
    /// The whitespace run directly in front of the attribute.
    pub leading_whitespace: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlElement {
    pub name: String,
    pub span: SourceSpan,
    pub start_tag: SourceSpan,
    pub end_tag: Option<SourceSpan>,
    pub attributes: Vec<XmlAttribute>,
    pub children: Vec<XmlNode>,
}

impl XmlElement {
    pub fn is_self_closing(&self) -> bool {
        self.end_tag.is_none()
    }

    pub fn attribute(&self, name: &str) -> Option<&XmlAttribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn child_elements(&self) -> impl Iterator<Item = &XmlElement> {
        self.children.iter().filter_map(|c| match c {
            XmlNode::Element(e) => Some(e),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XmlNode {
    Element(XmlElement),
    Text(SourceSpan),
    Comment(SourceSpan),
    CData(SourceSpan),
    ProcessingInstruction(SourceSpan),
    Doctype(SourceSpan),
}

impl XmlNode {
    pub fn span(&self) -> SourceSpan {
        match self {
            XmlNode::Element(e) => e.span,
            XmlNode::Text(s)
            | XmlNode::Comment(s)
            | XmlNode::CData(s)
            | XmlNode::ProcessingInstruction(s)
            | XmlNode::Doctype(s) => *s,
        }
    }
}

#[derive(Debug, Clone)]
pub struct XmlTree {
    source: String,
    prolog: Vec<XmlNode>,
    root: XmlElement,
    epilog: Vec<XmlNode>,
}

impl XmlTree {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &XmlElement {
        &self.root
    }

    pub fn prolog(&self) -> &[XmlNode] {
        &self.prolog
    }

    pub fn epilog(&self) -> &[XmlNode] {
        &self.epilog
    }

    /// Visits every element with its parent element (None for the root),
    /// in document order.
    pub fn walk_elements<'a>(&'a self, f: &mut impl FnMut(&'a XmlElement, Option<&'a XmlElement>)) {
        fn go<'a>(
            el: &'a XmlElement,
            parent: Option<&'a XmlElement>,
            f: &mut impl FnMut(&'a XmlElement, Option<&'a XmlElement>),
        ) {
            f(el, parent);
            for child in el.child_elements() {
                go(child, Some(el), f);
            }
        }
        go(&self.root, None, f);
    }

    /// Rebuilds the document from its node structure.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(self.source.len());
        for node in &self.prolog {
            self.emit_node(node, &mut out);
        }
        self.emit_element(&self.root, &mut out);
        for node in &self.epilog {
            self.emit_node(node, &mut out);
        }
        out
    }

    fn emit_node(&self, node: &XmlNode, out: &mut String) {
        match node {
            XmlNode::Element(e) => self.emit_element(e, out),
            other => out.push_str(other.span().slice(&self.source)),
        }
    }

    fn emit_element(&self, el: &XmlElement, out: &mut String) {
        let src = &self.source;
        let mut cursor = el.start_tag.start;
        for attr in &el.attributes {
            out.push_str(&src[cursor..attr.leading_whitespace.start]);
            out.push_str(attr.leading_whitespace.slice(src));
            out.push_str(attr.span.slice(src));
            cursor = attr.span.end;
        }
        out.push_str(&src[cursor..el.start_tag.end]);
        for child in &el.children {
            self.emit_node(child, out);
        }
        if let Some(end) = el.end_tag {
            out.push_str(end.slice(src));
        }
    }
}

pub fn parse_layout_xml(text: &str) -> Result<XmlTree, Vec<ParseDiagnostic>> {
    let mut p = XmlParser { src: text, bytes: text.as_bytes(), pos: 0 };
    p.document().map_err(|e| vec![e])
}

struct XmlParser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

type PResult<T> = Result<T, ParseDiagnostic>;

fn is_name_char(c: char) -> bool {
    !(c.is_whitespace() || matches!(c, '<' | '>' | '/' | '=' | '"' | '\'' | '?' | '!' | '&' | ';'))
}

fn is_name_start(c: char) -> bool {
    is_name_char(c) && !c.is_ascii_digit() && !matches!(c, '-' | '.')
}

impl<'a> XmlParser<'a> {
    fn err<T>(&self, at: usize, msg: impl Into<String>) -> PResult<T> {
        Err(ParseDiagnostic::at(self.src, at, msg))
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn starts_with(&self, s: &str) -> bool {
        self.rest().starts_with(s)
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_whitespace(&mut self) -> SourceSpan {
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if matches!(b, b' ' | b'\t' | b'\r' | b'\n') {
                self.pos += 1;
            } else {
                break;
            }
        }
        SourceSpan::new(start, self.pos)
    }

    fn take_until(&mut self, terminator: &str, what: &str) -> PResult<()> {
        let start = self.pos;
        match self.rest().find(terminator) {
            Some(idx) => {
                self.pos += idx + terminator.len();
                Ok(())
            }
            None => self.err(start, format!("unterminated {what}")),
        }
    }

    fn name(&mut self) -> PResult<String> {
        let start = self.pos;
        match self.peek() {
            Some(c) if is_name_start(c) => {}
            _ => return self.err(start, "expected a name"),
        }
        while let Some(c) = self.peek() {
            if is_name_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        Ok(self.src[start..self.pos].to_owned())
    }

    fn document(&mut self) -> PResult<XmlTree> {
        let mut prolog = Vec::new();
        if self.starts_with("\u{feff}") {
            self.pos += 3;
            prolog.push(XmlNode::Text(SourceSpan::new(0, 3)));
        }
        let root = loop {
            let ws = self.skip_whitespace();
            if !ws.is_empty() {
                prolog.push(XmlNode::Text(ws));
            }
            if self.pos >= self.bytes.len() {
                return self.err(self.pos, "document has no root element");
            }
            if let Some(node) = self.misc()? {
                prolog.push(node);
                continue;
            }
            if self.starts_with("<!DOCTYPE") {
                prolog.push(self.doctype()?);
                continue;
            }
            if self.starts_with("<") {
                break self.element()?;
            }
            return self.err(self.pos, "text outside the root element");
        };
        let mut epilog = Vec::new();
        loop {
            let ws = self.skip_whitespace();
            if !ws.is_empty() {
                epilog.push(XmlNode::Text(ws));
            }
            if self.pos >= self.bytes.len() {
                break;
            }
            match self.misc()? {
                Some(node) => epilog.push(node),
                None if self.starts_with("<") && !self.starts_with("</") => {
                    return self.err(self.pos, "more than one root element")
                }
                None => return self.err(self.pos, "content after the root element"),
            }
        }
        Ok(XmlTree { source: self.src.to_owned(), prolog, root, epilog })
    }

    /// Comments and processing instructions.
    fn misc(&mut self) -> PResult<Option<XmlNode>> {
        let start = self.pos;
        if self.starts_with("<!--") {
            self.pos += 4;
            let body_start = self.pos;
            self.take_until("-->", "comment")?;
            if self.src[body_start..self.pos - 3].contains("--") {
                return self.err(body_start, "`--` inside a comment");
            }
            return Ok(Some(XmlNode::Comment(SourceSpan::new(start, self.pos))));
        }
        if self.starts_with("<?") {
            self.pos += 2;
            self.name()?;
            self.take_until("?>", "processing instruction")?;
            return Ok(Some(XmlNode::ProcessingInstruction(SourceSpan::new(start, self.pos))));
        }
        Ok(None)
    }

    fn doctype(&mut self) -> PResult<XmlNode> {
        let start = self.pos;
        let mut depth = 0usize;
        let mut quote: Option<u8> = None;
        while let Some(&b) = self.bytes.get(self.pos) {
            self.pos += 1;
            match (quote, b) {
                (Some(q), c) if c == q => quote = None,
                (Some(_), _) => {}
                (None, b'"' | b'\'') => quote = Some(b),
                (None, b'[') => depth += 1,
                (None, b']') => depth = depth.saturating_sub(1),
                (None, b'>') if depth == 0 => {
                    return Ok(XmlNode::Doctype(SourceSpan::new(start, self.pos)))
                }
                _ => {}
            }
        }
        self.err(start, "unterminated DOCTYPE")
    }

    fn element(&mut self) -> PResult<XmlElement> {
        let start = self.pos;
        self.pos += 1; // '<'
        let name = self.name()?;
        let mut attributes: Vec<XmlAttribute> = Vec::new();
        let mut seen = HashSet::new();
        let self_closing = loop {
            let ws = self.skip_whitespace();
            if self.starts_with("/>") {
                self.pos += 2;
                break true;
            }
            if self.starts_with(">") {
                self.pos += 1;
                break false;
            }
            if self.pos >= self.bytes.len() {
                return self.err(start, format!("unterminated start tag `<{name}`"));
            }
            if ws.is_empty() {
                return self.err(self.pos, "attributes must be separated by whitespace");
            }
            let attr = self.attribute(ws)?;
            if !seen.insert(attr.name.clone()) {
                return self.err(attr.span.start, format!("duplicate attribute `{}`", attr.name));
            }
            attributes.push(attr);
        };
        let start_tag = SourceSpan::new(start, self.pos);
        if self_closing {
            return Ok(XmlElement { name, span: start_tag, start_tag, end_tag: None, attributes, children: Vec::new() });
        }
        let mut children = Vec::new();
        loop {
            if self.pos >= self.bytes.len() {
                return self.err(start, format!("element `<{name}>` is never closed"));
            }
            if self.starts_with("</") {
                let end_start = self.pos;
                self.pos += 2;
                let closing = self.name()?;
                if closing != name {
                    return self.err(end_start, format!("mismatched end tag: expected `</{name}>`, found `</{closing}>`"));
                }
                self.skip_whitespace();
                if !self.starts_with(">") {
                    return self.err(self.pos, "expected `>` to close end tag");
                }
                self.pos += 1;
                let end_tag = SourceSpan::new(end_start, self.pos);
                return Ok(XmlElement {
                    name,
                    span: SourceSpan::new(start, self.pos),
                    start_tag,
                    end_tag: Some(end_tag),
                    attributes,
                    children,
                });
            }
            if let Some(node) = self.misc()? {
                children.push(node);
                continue;
            }
            if self.starts_with("<![CDATA[") {
                let s = self.pos;
                self.take_until("]]>", "CDATA section")?;
                children.push(XmlNode::CData(SourceSpan::new(s, self.pos)));
                continue;
            }
            if self.starts_with("<!") {
                return self.err(self.pos, "unexpected markup declaration");
            }
            if self.starts_with("<") {
                children.push(XmlNode::Element(self.element()?));
                continue;
            }
            children.push(XmlNode::Text(self.text()?));
        }
    }

    fn attribute(&mut self, leading_whitespace: SourceSpan) -> PResult<XmlAttribute> {
        let start = self.pos;
        let name = self.name()?;
        self.skip_whitespace();
        if !self.starts_with("=") {
            return self.err(self.pos, format!("attribute `{name}` has no value"));
        }
        self.pos += 1;
        self.skip_whitespace();
        let quote = match self.bytes.get(self.pos) {
            Some(&q @ (b'"' | b'\'')) => q as char,
            _ => return self.err(self.pos, "attribute value must be quoted"),
        };
        self.pos += 1;
        let value_start = self.pos;
        let Some(len) = self.rest().find(quote) else {
            return self.err(value_start, "unterminated attribute value");
        };
        let value = &self.src[value_start..value_start + len];
        if let Some(i) = value.find('<') {
            return self.err(value_start + i, "`<` inside an attribute value");
        }
        self.check_references(value, value_start)?;
        self.pos = value_start + len + 1;
        Ok(XmlAttribute {
            name,
            value: value.to_owned(),
            span: SourceSpan::new(start, self.pos),
            value_span: SourceSpan::new(value_start, value_start + len),
            leading_whitespace,
        })
    }

    fn text(&mut self) -> PResult<SourceSpan> {
        let start = self.pos;
        let len = self.rest().find('<').unwrap_or(self.rest().len());
        self.pos += len;
        self.check_references(&self.src[start..self.pos], start)?;
        Ok(SourceSpan::new(start, self.pos))
    }

    fn check_references(&self, text: &str, base: usize) -> PResult<()> {
        let mut rest = text;
        let mut offset = 0;
        while let Some(i) = rest.find('&') {
            let after = &rest[i + 1..];
            let end = after.find(';');
            let ok = match end {
                Some(e) if e > 0 => {
                    let body = &after[..e];
                    if let Some(num) = body.strip_prefix('#') {
                        if let Some(hex) = num.strip_prefix('x') {
                            !hex.is_empty() && hex.chars().all(|c| c.is_ascii_hexdigit())
                        } else {
                            !num.is_empty() && num.chars().all(|c| c.is_ascii_digit())
                        }
                    } else {
                        body.chars().next().is_some_and(is_name_start) && body.chars().all(is_name_char)
                    }
                }
                _ => false,
            };
            if !ok {
                return self.err(base + offset + i, "malformed entity reference");
            }
            let consumed = i + 1 + end.unwrap_or(0) + 1;
            offset += consumed;
            rest = &rest[consumed..];
        }
        Ok(())
    }
}
