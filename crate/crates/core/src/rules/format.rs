//! Line and indentation helpers for rendering inserted code.

pub(crate) fn line_start(text: &str, offset: usize) -> usize {
    text[..offset].rfind('\n').map_or(0, |p| p + 1)
}

/// Offset of the line terminator (`\n`, or `\r\n`) ending the line that
/// contains `offset`, or the text length.
pub(crate) fn line_end(text: &str, offset: usize) -> usize {
    let end = text[offset..].find('\n').map_or(text.len(), |p| offset + p);
    if end > offset && text.as_bytes()[end - 1] == b'\r' && end < text.len() {
        end - 1
    } else {
        end
    }
}

/// Offset of the first byte after the line containing `offset`.
pub(crate) fn next_line_start(text: &str, offset: usize) -> usize {
    text[offset..].find('\n').map_or(text.len(), |p| offset + p + 1)
}

/// Leading whitespace of the line containing `offset`.
pub(crate) fn indent_at(text: &str, offset: usize) -> &str {
    let start = line_start(text, offset);
    let line = &text[start..];
    let len = line.len() - line.trim_start_matches([' ', '\t']).len();
    &line[..len]
}

/// Whether only blanks precede `offset` on its line.
pub(crate) fn starts_line(text: &str, offset: usize) -> bool {
    text[line_start(text, offset)..offset].chars().all(|c| c == ' ' || c == '\t')
}

/// Whether the rest of the line after `offset` is blank or a line comment.
pub(crate) fn ends_line(text: &str, offset: usize) -> bool {
    let rest = text[offset..line_end(text, offset)].trim();
    rest.is_empty() || rest.starts_with("//")
}

pub(crate) fn is_blank_line(text: &str, line_start: usize) -> bool {
    text[line_start..line_end(text, line_start)].trim().is_empty()
}

/// The file's dominant line ending.
pub(crate) fn newline(text: &str) -> &'static str {
    let crlf = text.matches("\r\n").count();
    let lf = text.matches('\n').count() - crlf;
    if crlf > lf {
        "\r\n"
    } else {
        "\n"
    }
}

/// One level of indentation: the extra prefix `inner` adds over `outer`,
/// falling back to the file's own habit.
pub(crate) fn indent_unit(text: &str, outer: &str, inner: &str) -> String {
    if inner.len() > outer.len() && inner.starts_with(outer) {
        return inner[outer.len()..].to_owned();
    }
    guess_indent_unit(text)
}

fn guess_indent_unit(text: &str) -> String {
    let mut smallest: Option<usize> = None;
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with('\t') {
            return "\t".into();
        }
        let n = line.len() - line.trim_start_matches(' ').len();
        if n > 0 {
            smallest = Some(smallest.map_or(n, |s: usize| s.min(n)));
        }
    }
    " ".repeat(smallest.unwrap_or(4).clamp(2, 8))
}

/// Joins `lines`, each terminated by `nl`.
pub(crate) fn render_lines(lines: &[String], nl: &str) -> String {
    let mut out = String::new();
    for line in lines {
        out.push_str(line);
        out.push_str(nl);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_navigation() {
        let text = "ab\r\n  cd\nef";
        assert_eq!(line_start(text, 6), 4);
        assert_eq!(line_end(text, 0), 2);
        assert_eq!(line_end(text, 5), 8);
        assert_eq!(next_line_start(text, 5), 9);
        assert_eq!(next_line_start(text, 10), 11);
        assert_eq!(indent_at(text, 7), "  ");
        assert!(starts_line(text, 6));
        assert!(!starts_line(text, 7));
    }

    #[test]
    fn dominant_newline() {
        assert_eq!(newline("a\r\nb\r\nc\n"), "\r\n");
        assert_eq!(newline("a\nb\r\n"), "\n");
    }

    #[test]
    fn indent_unit_prefers_observed_difference() {
        assert_eq!(indent_unit("", "  ", "    "), "  ");
        assert_eq!(indent_unit("x\n\ty\n", "", ""), "\t");
        assert_eq!(indent_unit("x\n   y\n      z\n", "", ""), "   ");
        assert_eq!(indent_unit("x\n", "", ""), "    ");
    }

    #[test]
    fn trailing_comments_end_a_line() {
        assert!(ends_line("a; // note\nb", 2));
        assert!(!ends_line("a; b;\n", 2));
    }
}
