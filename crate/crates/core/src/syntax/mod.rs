//! Lossless parsing of Java and layout XML, and byte-range editing.

mod edit;
mod java;
mod span;
mod xml;

pub use edit::{apply_edit_set, Edit, EditError, EditSet};
pub use java::{
    parse_java_source, parse_java_source_with_limit, JavaNode, JavaTree, ParseDiagnostic,
    DEFAULT_MAX_SOURCE_BYTES,
};
pub use span::{line_col, SourceSpan};
pub use xml::{parse_layout_xml, XmlAttribute, XmlElement, XmlNode, XmlTree};
