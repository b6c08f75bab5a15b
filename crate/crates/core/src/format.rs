//! The `.tgl` text format.
//!
//! ```text
//! tgl v1
//! ((a,b),(c,d));
//! ((a,c),(b,d));
//! ```
//!
//! Line 1 is the header, lines 2 and 3 are the left and right trees. The two
//! trees carry the same label set and shared labels define the matching.
//! Whitespace between tokens (newlines included) is ignored on input and never
//! emitted on output. Several records may be concatenated in one stream.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::tanglegram::Tanglegram;
use crate::tree::{BinaryTree, TreeBuilder};

pub const HEADER: &str = "tgl v1";

/// Checks that a label is nonempty and free of whitespace and delimiters.
pub fn check_label(label: &str) -> std::result::Result<(), String> {
    if label.is_empty() {
        return Err("empty leaf label".into());
    }
    if let Some(c) = label.chars().find(|&c| is_delimiter(c)) {
        return Err(format!(
            "leaf label `{label}` contains forbidden character {c:?}"
        ));
    }
    Ok(())
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | ',' | ';')
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    Semi,
    Word(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Word(w) => format!("`{w}`"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
    peeked: Option<Option<(Tok, Pos)>>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.chars().peekable(),
            pos: Pos { line: 1, column: 1 },
            peeked: None,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn lex(&mut self) -> Option<(Tok, Pos)> {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
        let start = self.pos;
        let c = self.bump()?;
        let tok = match c {
            '(' => Tok::Open,
            ')' => Tok::Close,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            c => {
                let mut w = String::from(c);
                while let Some(&c) = self.chars.peek() {
                    if is_delimiter(c) {
                        break;
                    }
                    w.push(c);
                    self.bump();
                }
                Tok::Word(w)
            }
        };
        Some((tok, start))
    }

    fn peek(&mut self) -> Option<&(Tok, Pos)> {
        if self.peeked.is_none() {
            let t = self.lex();
            self.peeked = Some(t);
        }
        self.peeked.as_ref().and_then(|t| t.as_ref())
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        match self.peeked.take() {
            Some(t) => t,
            None => self.lex(),
        }
    }

    fn end_pos(&self) -> Pos {
        self.pos
    }

    fn error(&self, at: Pos, message: impl Into<String>) -> Error {
        Error::Parse {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok, context: &str) -> Result<Pos> {
        match self.next() {
            Some((t, p)) if t == want => Ok(p),
            Some((t, p)) => Err(self.error(
                p,
                format!(
                    "expected {} {context}, found {}",
                    want.describe(),
                    t.describe()
                ),
            )),
            None => Err(self.error(
                self.end_pos(),
                format!("expected {} {context}, found end of input", want.describe()),
            )),
        }
    }

    fn expect_word(&mut self, want: &str) -> Result<()> {
        match self.next() {
            Some((Tok::Word(w), _)) if w == want => Ok(()),
            Some((t, p)) => {
                Err(self.error(p, format!("expected `{want}`, found {}", t.describe())))
            }
            None => Err(self.error(
                self.end_pos(),
                format!("expected `{want}`, found end of input"),
            )),
        }
    }
}

struct ParsedTree {
    tree: BinaryTree,
    /// label -> position of its occurrence
    positions: HashMap<String, Pos>,
    start: Pos,
}

/// Parses one parenthesized tree (without consuming a terminating `;`).
fn parse_tree_tokens(lx: &mut Lexer<'_>) -> Result<ParsedTree> {
    struct Frame {
        open: Pos,
        kids: Vec<usize>,
    }
    let mut b = TreeBuilder::new();
    let mut frames: Vec<Frame> = Vec::new();
    let mut positions = HashMap::new();
    let start = lx.peek().map(|(_, p)| *p).unwrap_or(lx.end_pos());

    loop {
        // Expect the start of a subtree.
        let mut node = match lx.next() {
            Some((Tok::Open, p)) => {
                frames.push(Frame {
                    open: p,
                    kids: Vec::new(),
                });
                continue;
            }
            Some((Tok::Word(w), p)) => {
                if positions.insert(w.clone(), p).is_some() {
                    return Err(lx.error(p, format!("duplicate leaf label `{w}`")));
                }
                b.leaf(w)
            }
            Some((t, p)) => {
                return Err(lx.error(
                    p,
                    format!("expected a leaf label or `(`, found {}", t.describe()),
                ))
            }
            None => {
                return Err(lx.error(
                    lx.end_pos(),
                    "expected a leaf label or `(`, found end of input",
                ))
            }
        };

        // Close as many groups as the input allows.
        loop {
            let Some(top) = frames.last_mut() else {
                let tree = b.build()?;
                return Ok(ParsedTree {
                    tree,
                    positions,
                    start,
                });
            };
            top.kids.push(node);
            match lx.next() {
                Some((Tok::Comma, p)) => {
                    if top.kids.len() >= 2 {
                        return Err(lx.error(p, "node has more than two children"));
                    }
                    break;
                }
                Some((Tok::Close, p)) => {
                    if top.kids.len() != 2 {
                        return Err(
                            lx.error(p, "node has a single child (unary nodes are not allowed)")
                        );
                    }
                    let f = frames.pop().expect("frame present");
                    node = b.join(f.kids[0], f.kids[1]);
                }
                Some((t, p)) => {
                    return Err(lx.error(p, format!("expected `,` or `)`, found {}", t.describe())))
                }
                None => {
                    let open = top.open;
                    return Err(lx.error(
                        lx.end_pos(),
                        format!(
                            "unclosed `(` opened at line {}, column {}",
                            open.line, open.column
                        ),
                    ));
                }
            }
        }
    }
}

/// Parses a single tree such as `((a,b),c)` with an optional trailing `;`.
pub fn parse_tree(src: &str) -> Result<BinaryTree> {
    let mut lx = Lexer::new(src);
    let parsed = parse_tree_tokens(&mut lx)?;
    if let Some((Tok::Semi, _)) = lx.peek() {
        lx.next();
    }
    if let Some((t, p)) = lx.next() {
        return Err(lx.error(p, format!("unexpected {} after the tree", t.describe())));
    }
    Ok(parsed.tree)
}

fn parse_record(lx: &mut Lexer<'_>) -> Result<Tanglegram> {
    lx.expect_word("tgl")?;
    lx.expect_word("v1")?;
    let left = parse_tree_tokens(lx)?;
    lx.expect(Tok::Semi, "after the left tree")?;
    let right = parse_tree_tokens(lx)?;
    lx.expect(Tok::Semi, "after the right tree")?;

    // Label sets must coincide; point at the first offending label.
    if let Some((label, pos)) = right
        .positions
        .iter()
        .filter(|(l, _)| !left.positions.contains_key(*l))
        .min_by_key(|(_, p)| (p.line, p.column))
    {
        return Err(lx.error(
            *pos,
            format!("label `{label}` does not occur in the left tree"),
        ));
    }
    if let Some((label, _)) = left
        .positions
        .iter()
        .filter(|(l, _)| !right.positions.contains_key(*l))
        .min_by_key(|(_, p)| (p.line, p.column))
    {
        return Err(lx.error(
            right.start,
            format!("label `{label}` of the left tree is missing from the right tree"),
        ));
    }
    Tanglegram::from_shared_labels(left.tree, right.tree)
}

/// Parses exactly one `.tgl` record.
pub fn parse(src: &str) -> Result<Tanglegram> {
    let mut lx = Lexer::new(src);
    let t = parse_record(&mut lx)?;
    if let Some((tok, p)) = lx.next() {
        return Err(lx.error(p, format!("unexpected {} after the record", tok.describe())));
    }
    Ok(t)
}

/// Parses a stream of concatenated `.tgl` records.
pub fn parse_many(src: &str) -> Result<Vec<Tanglegram>> {
    let mut lx = Lexer::new(src);
    let mut out = Vec::new();
    while lx.peek().is_some() {
        out.push(parse_record(&mut lx)?);
    }
    Ok(out)
}

/// Canonical text: header plus the two trees in stored child order, labeled
/// with the shared labels, one per line, no other whitespace.
pub fn serialize(t: &Tanglegram) -> String {
    format!(
        "{HEADER}\n{};\n{};\n",
        t.left().to_parenthesized(),
        t.right().to_parenthesized()
    )
}
